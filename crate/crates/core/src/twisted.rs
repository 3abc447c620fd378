//! Twisted conjugacy classes and Reidemeister numbers.
//!
//! Two elements are `φ`-twisted conjugate when `g' = h·g·φ(h)^{-1}` for some
//! `h`. With `T = Id - M`, twisted conjugation by `S^k` shifts the exponent
//! vector by `T·k`, so every class meets the fibre over one of the `|det T|`
//! cokernel representatives. The exact count runs union-find over the
//! `|det T|·m^c` nodes `(rep, θ)`; the oracle enumerates a box of elements and
//! conjugators without using the cokernel at all.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::autos::{self, Automorphism};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupParams, Limits};
use crate::intlin::{self, Cokernel, IntMatrix};
use crate::json::{int, int_vec, opt_int};
use crate::union_find::DisjointSets;

/// `R(φ)`, possibly infinite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReidemeisterNumber {
    Finite(BigInt),
    Infinite,
}

impl ReidemeisterNumber {
    pub fn is_finite(&self) -> bool {
        matches!(self, Self::Finite(_))
    }
}

impl fmt::Display for ReidemeisterNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(v) => write!(f, "{v}"),
            Self::Infinite => write!(f, "infinite"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReidemeisterReport {
    pub finite: bool,
    #[serde(with = "opt_int", default, skip_serializing_if = "Option::is_none")]
    pub count: Option<BigInt>,
    /// `|det(M - Id)|·m^c`; zero in the infinite case.
    #[serde(with = "int")]
    pub bound: BigInt,
    pub method: Method,
    #[serde(rename = "det_M_minus_I", with = "int")]
    pub det_m_minus_i: BigInt,
}

impl ReidemeisterReport {
    pub fn number(&self) -> ReidemeisterNumber {
        match (&self.count, self.finite) {
            (Some(c), true) => ReidemeisterNumber::Finite(c.clone()),
            _ => ReidemeisterNumber::Infinite,
        }
    }
}

/// Canonical twisted-class node: a cokernel representative and a residue.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwistedNode {
    #[serde(with = "int")]
    pub rep_index: BigInt,
    #[serde(with = "int_vec")]
    pub rep: Vec<BigInt>,
    pub theta: u64,
}

impl TwistedNode {
    pub fn element(&self) -> GroupElement {
        GroupElement {
            y: self.rep.clone(),
            theta: self.theta,
        }
    }
}

fn check_shape(params: &GroupParams, m: &IntMatrix) -> Result<()> {
    let r = params.r();
    if m.rows() != r || m.cols() != r {
        return Err(Error::DimensionMismatch {
            expected: format!("{r}x{r} matrix"),
            found: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    Ok(())
}

/// `det(M - Id)`.
pub fn det_m_minus_identity(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    intlin::det(&m.sub(&IntMatrix::identity(m.rows()))?)
}

/// `R(φ) < ∞` iff `det(M - Id) ≠ 0`.
pub fn reidemeister_finite(params: &GroupParams, phi: &Automorphism) -> Result<bool> {
    check_shape(params, &phi.matrix)?;
    Ok(!det_m_minus_identity(&phi.matrix)?.is_zero())
}

/// Reidemeister number of `M` acting on `Z^r`: `|det(M - Id)|` or infinite.
pub fn reidemeister_abelianized(m: &IntMatrix) -> Result<ReidemeisterNumber> {
    let d = intlin::det(m)?;
    if d.abs() != BigInt::from(1) {
        return Err(Error::NotUnimodular(d.to_string()));
    }
    let dm = det_m_minus_identity(m)?;
    Ok(if dm.is_zero() {
        ReidemeisterNumber::Infinite
    } else {
        ReidemeisterNumber::Finite(dm.abs())
    })
}

/// `h·g·φ(h)^{-1}`.
pub fn twisted_conjugate(
    params: &GroupParams,
    phi: &Automorphism,
    h: &GroupElement,
    g: &GroupElement,
) -> GroupElement {
    let image_inv = params.inverse(&autos::apply(params, phi, h));
    params.multiply(&params.multiply(h, g), &image_inv)
}

/// The fibred coset structure for a fixed automorphism with `det(Id - M) ≠ 0`.
#[derive(Debug, Clone)]
pub struct TwistedSpace<'a> {
    params: &'a GroupParams,
    phi: &'a Automorphism,
    cokernel: Cokernel,
}

impl<'a> TwistedSpace<'a> {
    pub fn new(params: &'a GroupParams, phi: &'a Automorphism) -> Result<Self> {
        check_shape(params, &phi.matrix)?;
        let t = IntMatrix::identity(params.r()).sub(&phi.matrix)?;
        let cokernel = Cokernel::new(&t)?;
        Ok(Self {
            params,
            phi,
            cokernel,
        })
    }

    pub fn cokernel(&self) -> &Cokernel {
        &self.cokernel
    }

    /// `|det(Id - M)|·m^c`.
    pub fn node_count(&self) -> BigInt {
        self.cokernel.size() * BigInt::from(self.params.modulus())
    }

    /// The node in the class of `g`, together with the conjugator `S^k`
    /// realising `node = S^k·g·φ(S^k)^{-1}`.
    pub fn canonicalize_with_conjugator(&self, g: &GroupElement) -> Result<(TwistedNode, GroupElement)> {
        let (rep_index, rep) = self.cokernel.reduce(&g.y)?;
        let shift: Vec<BigInt> = rep.iter().zip(&g.y).map(|(a, b)| a - b).collect();
        let k = self
            .cokernel
            .solve(&shift)?
            .ok_or_else(|| Error::Inconsistent("representative is not in the coset of y".into()))?;
        let h = GroupElement { y: k, theta: 0 };
        let moved = twisted_conjugate(self.params, self.phi, &h, g);
        if moved.y != rep {
            return Err(Error::Inconsistent("twisted conjugation missed the representative".into()));
        }
        Ok((
            TwistedNode {
                rep_index,
                rep,
                theta: moved.theta,
            },
            h,
        ))
    }

    pub fn canonicalize(&self, g: &GroupElement) -> Result<TwistedNode> {
        self.canonicalize_with_conjugator(g).map(|(node, _)| node)
    }

    fn node_id(&self, node: &TwistedNode) -> usize {
        let idx = node.rep_index.to_usize().expect("node index checked against the cap");
        idx * self.params.modulus() as usize + node.theta as usize
    }
}

/// Canonical node of `g` under twisted conjugation by `φ`.
pub fn canonicalize(params: &GroupParams, phi: &Automorphism, g: &GroupElement) -> Result<TwistedNode> {
    TwistedSpace::new(params, phi)?.canonicalize(g)
}

/// `(±e_i, 0)` and `(0, ±1)`.
fn elementary_conjugators(params: &GroupParams) -> Vec<GroupElement> {
    let mut out = Vec::with_capacity(2 * params.r() + 2);
    for i in 0..params.r() {
        let s = params.s(i);
        out.push(params.inverse(&s));
        out.push(s);
    }
    out.push(params.x());
    out.push(params.inverse(&params.x()));
    out
}

/// Exact `R(φ)` by union-find over canonical nodes.
pub fn reidemeister_exact(params: &GroupParams, phi: &Automorphism, limits: &Limits) -> Result<ReidemeisterReport> {
    autos::validate(params, phi).into_result()?;
    let det_m_minus_i = det_m_minus_identity(&phi.matrix)?;
    if det_m_minus_i.is_zero() {
        return Ok(ReidemeisterReport {
            finite: false,
            count: None,
            bound: BigInt::zero(),
            method: Method::Exact,
            det_m_minus_i,
        });
    }
    let bound = det_m_minus_i.abs() * BigInt::from(params.modulus());

    let space = TwistedSpace::new(params, phi)?;
    let total = space
        .node_count()
        .to_u64()
        .filter(|&n| n <= limits.cap)
        .ok_or_else(|| Error::ResourceCap {
            what: "orbit nodes |det(M-Id)|·m^c",
            value: space.node_count().to_string(),
            cap: limits.cap,
        })? as usize;

    let conjugators: Vec<(GroupElement, GroupElement)> = elementary_conjugators(params)
        .into_iter()
        .map(|h| {
            let image_inv = params.inverse(&autos::apply(params, phi, &h));
            (h, image_inv)
        })
        .collect();

    let modulus = params.modulus();
    let reps = space.cokernel().representatives(limits.cap)?;
    let mut sets = DisjointSets::new(total);
    for (idx, rep) in reps.iter().enumerate() {
        for theta in 0..modulus {
            let id = idx * modulus as usize + theta as usize;
            let g = GroupElement {
                y: rep.clone(),
                theta,
            };
            for (h, image_inv) in &conjugators {
                let moved = params.multiply(&params.multiply(h, &g), image_inv);
                let node = space.canonicalize(&moved)?;
                sets.union(id, space.node_id(&node));
            }
        }
    }

    let count = BigInt::from(sets.components());
    if count > bound {
        return Err(Error::Inconsistent(format!("class count {count} exceeds the bound {bound}")));
    }
    Ok(ReidemeisterReport {
        finite: true,
        count: Some(count),
        bound,
        method: Method::Exact,
        det_m_minus_i,
    })
}

/// Outcome of a brute-force enumeration over a finite box.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleRecord {
    pub element_box: u32,
    pub conjugator_box: u32,
    /// Classes meeting the inner half-box using conjugators up to `conjugator_box`.
    pub count_at_box: u64,
    /// Same, using conjugators up to `conjugator_box - 1`.
    pub count_at_smaller_box: u64,
    pub stable: bool,
    /// Set only when stable.
    pub count: Option<u64>,
}

impl OracleRecord {
    pub fn report(&self, params: &GroupParams, phi: &Automorphism) -> Result<ReidemeisterReport> {
        let det_m_minus_i = det_m_minus_identity(&phi.matrix)?;
        Ok(ReidemeisterReport {
            finite: true,
            count: self.count.map(BigInt::from),
            bound: det_m_minus_i.abs() * BigInt::from(params.modulus()),
            method: Method::Oracle,
            det_m_minus_i,
        })
    }
}

/// Union-find over every element `S^y x^θ` with `‖y‖∞ ≤ element_box`, grown
/// one shell of conjugators at a time.
struct OracleRun<'a> {
    params: &'a GroupParams,
    phi: &'a Automorphism,
    element_box: i64,
    side: i64,
    sets: DisjointSets,
    inner: Vec<usize>,
}

impl<'a> OracleRun<'a> {
    fn new(params: &'a GroupParams, phi: &'a Automorphism, element_box: u32, limits: &Limits) -> Result<Self> {
        let r = params.r() as u32;
        let side = 2 * element_box as i64 + 1;
        let total = (side as u128)
            .checked_pow(r)
            .and_then(|v| v.checked_mul(params.modulus() as u128))
            .filter(|&v| v <= limits.cap as u128)
            .ok_or_else(|| Error::ResourceCap {
                what: "oracle element box",
                value: format!("(2*{element_box}+1)^{r}·{}", params.modulus()),
                cap: limits.cap,
            })? as usize;
        let mut run = Self {
            params,
            phi,
            element_box: element_box as i64,
            side,
            sets: DisjointSets::new(total),
            inner: Vec::new(),
        };
        let half = run.element_box / 2;
        run.inner = (0..total)
            .filter(|&id| run.decode(id).0.iter().all(|v| v.abs() <= half))
            .collect();
        Ok(run)
    }

    fn decode(&self, id: usize) -> (Vec<i64>, u64) {
        let modulus = self.params.modulus() as usize;
        let theta = (id % modulus) as u64;
        let mut rest = id / modulus;
        let mut y = vec![0i64; self.params.r()];
        for slot in y.iter_mut().rev() {
            *slot = (rest % self.side as usize) as i64 - self.element_box;
            rest /= self.side as usize;
        }
        (y, theta)
    }

    fn encode(&self, g: &GroupElement) -> Option<usize> {
        let mut id = 0usize;
        for v in &g.y {
            let v = v.to_i64()?;
            if v.abs() > self.element_box {
                return None;
            }
            id = id * self.side as usize + (v + self.element_box) as usize;
        }
        Some(id * self.params.modulus() as usize + g.theta as usize)
    }

    /// All conjugators `S^k x^l` with `‖k‖∞ = radius` exactly.
    fn shell(&self, radius: i64) -> Vec<GroupElement> {
        let r = self.params.r();
        let width = (2 * radius + 1) as usize;
        let mut out = Vec::new();
        for code in 0..width.pow(r as u32) {
            let mut rest = code;
            let mut k = vec![0i64; r];
            for slot in k.iter_mut() {
                *slot = (rest % width) as i64 - radius;
                rest /= width;
            }
            if k.iter().map(|v| v.abs()).max().unwrap_or(0) != radius {
                continue;
            }
            for l in 0..self.params.modulus() {
                out.push(GroupElement {
                    y: k.iter().map(|&v| BigInt::from(v)).collect(),
                    theta: l,
                });
            }
        }
        out
    }

    fn add_shell(&mut self, radius: i64) {
        let params = self.params;
        let total = self.sets_len();
        for z in self.shell(radius) {
            let image_inv = params.inverse(&autos::apply(params, self.phi, &z));
            for id in 0..total {
                let (y, theta) = self.decode(id);
                let g = GroupElement {
                    y: y.into_iter().map(BigInt::from).collect(),
                    theta,
                };
                let moved = params.multiply(&params.multiply(&z, &g), &image_inv);
                if let Some(other) = self.encode(&moved) {
                    self.sets.union(id, other);
                }
            }
        }
    }

    fn sets_len(&self) -> usize {
        let r = self.params.r() as u32;
        (self.side as usize).pow(r) * self.params.modulus() as usize
    }

    fn inner_count(&mut self) -> u64 {
        let mut roots: Vec<usize> = self.inner.clone().into_iter().map(|id| self.sets.find(id)).collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len() as u64
    }
}

fn check_oracle_input(params: &GroupParams, phi: &Automorphism, conjugator_box: u32) -> Result<()> {
    check_shape(params, &phi.matrix)?;
    if conjugator_box == 0 {
        return Err(Error::InvalidParameter("conjugator box must be at least 1".into()));
    }
    if det_m_minus_identity(&phi.matrix)?.is_zero() {
        return Err(Error::Singular);
    }
    Ok(())
}

/// Brute-force class count over a box, with a stability check between
/// conjugator boxes `B_c - 1` and `B_c`.
pub fn reidemeister_oracle(
    params: &GroupParams,
    phi: &Automorphism,
    element_box: u32,
    conjugator_box: u32,
    limits: &Limits,
) -> Result<OracleRecord> {
    reidemeister_oracle_escalating(params, phi, element_box, conjugator_box, conjugator_box, limits)
}

/// Like [`reidemeister_oracle`], but keeps enlarging the conjugator box until
/// the count stabilises or `max_conjugator_box` is reached.
pub fn reidemeister_oracle_escalating(
    params: &GroupParams,
    phi: &Automorphism,
    element_box: u32,
    conjugator_box: u32,
    max_conjugator_box: u32,
    limits: &Limits,
) -> Result<OracleRecord> {
    check_oracle_input(params, phi, conjugator_box)?;
    let mut run = OracleRun::new(params, phi, element_box, limits)?;
    for radius in 0..conjugator_box as i64 {
        run.add_shell(radius);
    }
    let mut previous = run.inner_count();
    let mut radius = conjugator_box;
    loop {
        run.add_shell(radius as i64);
        let current = run.inner_count();
        let stable = current == previous;
        if stable || radius >= max_conjugator_box {
            return Ok(OracleRecord {
                element_box,
                conjugator_box: radius,
                count_at_box: current,
                count_at_smaller_box: previous,
                stable,
                count: stable.then_some(current),
            });
        }
        previous = current;
        radius += 1;
    }
}
