//! Exact integer linear algebra.
//!
//! Everything here works over [`BigInt`]; there is no floating point anywhere in
//! the module. Matrices are dense and small (rank at most about ten).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Deserializer;
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::{JsonInt, JsonIntOwned};

/// Dense integer matrix stored in row-major order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParameter(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{} entries", rows * cols),
                found: format!("{} entries", entries.len()),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from nested rows, rejecting empty or ragged input.
    pub fn from_rows<I, R, T>(rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let mut entries = Vec::new();
        let mut n_rows = 0;
        let mut n_cols = None;
        for row in rows {
            let before = entries.len();
            entries.extend(row.into_iter().map(Into::into));
            let width = entries.len() - before;
            match n_cols {
                None => n_cols = Some(width),
                Some(w) if w != width => {
                    return Err(Error::DimensionMismatch {
                        expected: format!("rows of length {w}"),
                        found: format!("row {n_rows} of length {width}"),
                    })
                }
                _ => {}
            }
            n_rows += 1;
        }
        Self::new(n_rows, n_cols.unwrap_or(0), entries)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn diagonal<T: Into<BigInt>>(diag: impl IntoIterator<Item = T>) -> Result<Self> {
        let diag: Vec<BigInt> = diag.into_iter().map(Into::into).collect();
        if diag.is_empty() {
            return Err(Error::InvalidParameter("empty diagonal".into()));
        }
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.into_iter().enumerate() {
            m.set(i, i, d);
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    fn from_rows_unchecked(rows: Vec<Vec<BigInt>>) -> Self {
        let n_rows = rows.len();
        let n_cols = rows[0].len();
        Self {
            rows: n_rows,
            cols: n_cols,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: format!("{} rows", self.cols),
                found: format!("{} rows", other.rows),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigInt::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch {
                expected: format!("vector of length {}", self.cols),
                found: format!("length {}", v.len()),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    fn zip_with(&self, other: &IntMatrix, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{}x{}", self.rows, self.cols),
                found: format!("{}x{}", other.rows, other.cols),
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &IntMatrix) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &IntMatrix) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * s).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// The matrix with row `i` and column `j` removed.
    fn minor(&self, i: usize, j: usize) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .filter(|&a| a != i)
            .map(|a| {
                (0..self.cols)
                    .filter(|&b| b != j)
                    .map(|b| self.get(a, b).clone())
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Row<'a>(&'a [BigInt]);
        impl Serialize for Row<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(self.0.len()))?;
                for v in self.0 {
                    seq.serialize_element(&JsonInt(v))?;
                }
                seq.end()
            }
        }
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            seq.serialize_element(&Row(self.row(i)))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<JsonIntOwned>>::deserialize(d)?;
        IntMatrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(|v| v.0)))
            .map_err(serde::de::Error::custom)
    }
}

fn to_grid(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    a.to_rows()
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det(a: &IntMatrix) -> Result<BigInt> {
    a.require_square()?;
    Ok(bareiss(to_grid(a)))
}

fn bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Determinant by Laplace expansion along the first row.
///
/// Exponential in the dimension; kept as an independent check of [`det`] for
/// small matrices.
pub fn det_cofactor(a: &IntMatrix) -> Result<BigInt> {
    a.require_square()?;
    Ok(cofactor(&to_grid(a)))
}

fn cofactor(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    match n {
        1 => m[0][0].clone(),
        2 => &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0],
        _ => {
            let mut acc = BigInt::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let sub: Vec<Vec<BigInt>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(b, _)| b != j)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][j] * cofactor(&sub);
                if j % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
    }
}

/// Classical adjugate: `A · adj(A) = det(A) · Id`.
pub fn adjugate(a: &IntMatrix) -> Result<IntMatrix> {
    a.require_square()?;
    let n = a.rows;
    if n == 1 {
        return Ok(IntMatrix::identity(1));
    }
    let mut adj = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut c = bareiss(a.minor(i, j));
            if (i + j) % 2 == 1 {
                c = -c;
            }
            adj.set(j, i, c);
        }
    }
    Ok(adj)
}

/// Inverse of a matrix in `GL_r(Z)`.
pub fn unimodular_inverse(a: &IntMatrix) -> Result<IntMatrix> {
    let d = det(a)?;
    if d.abs() != BigInt::one() {
        return Err(Error::NotUnimodular(d.to_string()));
    }
    Ok(adjugate(a)?.scale(&d))
}

/// `U · A · V = D` with `U`, `V` unimodular and `D` in Smith normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfDecomposition {
    /// The diagonal `d_1 | d_2 | …`, of length `min(rows, cols)`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors()
            .iter()
            .filter(|d| !d.is_zero())
            .count()
    }
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    }
}

fn row_axpy(m: &mut [Vec<BigInt>], target: usize, src: usize, q: &BigInt) {
    // row[target] -= q * row[src]
    let src_row = m[src].clone();
    for (t, s) in m[target].iter_mut().zip(&src_row) {
        *t -= q * s;
    }
}

fn col_axpy(m: &mut [Vec<BigInt>], target: usize, src: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let s = row[src].clone();
        row[target] -= q * s;
    }
}

/// Position of the nonzero entry of smallest magnitude in the trailing
/// submatrix starting at `(t, t)`.
fn smallest_nonzero(d: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in d.iter().enumerate().skip(t) {
        for (j, v) in row.iter().enumerate().skip(t) {
            if v.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| v.abs() < d[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Smith normal form with accumulated unimodular factors.
pub fn smith_normal_form(a: &IntMatrix) -> SnfDecomposition {
    let (rows, cols) = (a.rows, a.cols);
    let mut d = to_grid(a);
    let mut u = to_grid(&IntMatrix::identity(rows));
    let mut v = to_grid(&IntMatrix::identity(cols));

    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = smallest_nonzero(&d, t) else {
            break;
        };
        d.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut d, t, pj);
        swap_cols(&mut v, t, pj);

        loop {
            for i in t + 1..rows {
                if !d[i][t].is_zero() {
                    let q = d[i][t].div_floor(&d[t][t]);
                    row_axpy(&mut d, i, t, &q);
                    row_axpy(&mut u, i, t, &q);
                }
            }
            for j in t + 1..cols {
                if !d[t][j].is_zero() {
                    let q = d[t][j].div_floor(&d[t][t]);
                    col_axpy(&mut d, j, t, &q);
                    col_axpy(&mut v, j, t, &q);
                }
            }

            // Remainders smaller than the pivot: move the smallest into place.
            let col_rest = (t + 1..rows).filter(|&i| !d[i][t].is_zero());
            let row_rest = (t + 1..cols).filter(|&j| !d[t][j].is_zero());
            let mut best: Option<(usize, usize)> = None;
            for (i, j) in col_rest.map(|i| (i, t)).chain(row_rest.map(|j| (t, j))) {
                if best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
            if let Some((i, j)) = best {
                if j == t {
                    d.swap(t, i);
                    u.swap(t, i);
                } else {
                    swap_cols(&mut d, t, j);
                    swap_cols(&mut v, t, j);
                }
                continue;
            }

            // Row and column are clear; enforce divisibility of the remainder.
            let pivot = d[t][t].clone();
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !d[i][j].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut d, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }

        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
    }

    SnfDecomposition {
        u: IntMatrix::from_rows_unchecked(u),
        d: IntMatrix::from_rows_unchecked(d),
        v: IntMatrix::from_rows_unchecked(v),
    }
}

/// The finite quotient `Z^r / T·Z^r` for a nonsingular square `T`.
///
/// Cosets are addressed through the Smith form `U·T·V = D`: the class of `v`
/// is determined by `U·v` reduced coordinate-wise modulo the invariant factors.
/// The canonical representative of a class is `U^{-1}·w` with `0 ≤ w_i < d_i`.
#[derive(Debug, Clone)]
pub struct Cokernel {
    snf: SnfDecomposition,
    u_inv: IntMatrix,
    moduli: Vec<BigInt>,
    size: BigInt,
}

impl Cokernel {
    pub fn new(t: &IntMatrix) -> Result<Self> {
        t.require_square()?;
        let snf = smith_normal_form(t);
        let moduli = snf.invariant_factors();
        if moduli.iter().any(Zero::is_zero) {
            return Err(Error::Singular);
        }
        let size = moduli.iter().product();
        let u_inv = unimodular_inverse(&snf.u)?;
        Ok(Self {
            snf,
            u_inv,
            moduli,
            size,
        })
    }

    pub fn snf(&self) -> &SnfDecomposition {
        &self.snf
    }

    pub fn moduli(&self) -> &[BigInt] {
        &self.moduli
    }

    /// Number of cosets, `|det T|`.
    pub fn size(&self) -> &BigInt {
        &self.size
    }

    fn reduced_coordinates(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        let w = self.snf.u.mul_vec(v)?;
        Ok(w.iter()
            .zip(&self.moduli)
            .map(|(x, d)| x.mod_floor(d))
            .collect())
    }

    fn index_from_coordinates(&self, w: &[BigInt]) -> BigInt {
        w.iter()
            .zip(&self.moduli)
            .fold(BigInt::zero(), |acc, (x, d)| acc * d + x)
    }

    fn coordinates_from_index(&self, index: &BigInt) -> Vec<BigInt> {
        let mut rest = index.clone();
        let mut w = vec![BigInt::zero(); self.moduli.len()];
        for (slot, d) in w.iter_mut().zip(&self.moduli).rev() {
            let (q, r) = rest.div_mod_floor(d);
            *slot = r;
            rest = q;
        }
        w
    }

    /// Canonical representative of the coset of `v`, with its index in
    /// `[0, size)`.
    pub fn reduce(&self, v: &[BigInt]) -> Result<(BigInt, Vec<BigInt>)> {
        let w = self.reduced_coordinates(v)?;
        let rep = self.u_inv.mul_vec(&w)?;
        Ok((self.index_from_coordinates(&w), rep))
    }

    pub fn index_of(&self, v: &[BigInt]) -> Result<BigInt> {
        let w = self.reduced_coordinates(v)?;
        Ok(self.index_from_coordinates(&w))
    }

    /// Representative with the given index; `index` must lie in `[0, size)`.
    pub fn representative(&self, index: &BigInt) -> Vec<BigInt> {
        let w = self.coordinates_from_index(index);
        self.u_inv
            .mul_vec(&w)
            .expect("coordinate vector matches the matrix dimension")
    }

    /// All canonical representatives in index order. Refuses cokernels
    /// larger than `cap`.
    pub fn representatives(&self, cap: u64) -> Result<Vec<Vec<BigInt>>> {
        let count = self
            .size
            .to_u64()
            .filter(|&s| s <= cap)
            .ok_or_else(|| Error::ResourceCap {
                what: "cokernel size",
                value: self.size.to_string(),
                cap,
            })?;
        Ok((0..count)
            .map(|i| self.representative(&BigInt::from(i)))
            .collect())
    }
}

/// One representative per coset of `T·Z^r` in `Z^r`.
pub fn cokernel_representatives(t: &IntMatrix) -> Result<Vec<Vec<BigInt>>> {
    Cokernel::new(t)?.representatives(crate::group::DEFAULT_CAP)
}

/// The integral solution `k` of `T·k = b`, if one exists.
pub fn solve_integral(t: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    t.require_square()?;
    let snf = smith_normal_form(t);
    solve_with_snf(&snf, b)
}

pub(crate) fn solve_with_snf(snf: &SnfDecomposition, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    let factors = snf.invariant_factors();
    if factors.iter().any(Zero::is_zero) {
        return Err(Error::Singular);
    }
    let ub = snf.u.mul_vec(b)?;
    let mut z = Vec::with_capacity(ub.len());
    for (x, d) in ub.iter().zip(&factors) {
        let (q, r) = x.div_mod_floor(d);
        if !r.is_zero() {
            return Ok(None);
        }
        z.push(q);
    }
    snf.v.mul_vec(&z).map(Some)
}

impl Cokernel {
    /// Integral `k` with `T·k = b`, using the cached Smith form.
    pub fn solve(&self, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        solve_with_snf(&self.snf, b)
    }
}
