//! Automorphisms of `G_{n,c}` given by generator images.
//!
//! An automorphism is the data `(M, μ, β)` with
//!
//! ```text
//! φ(x)   = x^μ
//! φ(s_i) = S^{A_i} x^{β_i}      A_i = column i of M
//! ```
//!
//! A matrix `M ∈ GL_r(Z)` is the abelianization of some automorphism iff the
//! congruences `Π_j (p_j^{y_j})^{a_{ji}} ≡ p_i^{y_i} (mod m^c)` hold for every
//! column `i`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupParams};
use crate::intlin::{self, IntMatrix};
use crate::json::{int, int_vec};
use crate::modular;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Automorphism {
    #[serde(rename = "M")]
    pub matrix: IntMatrix,
    #[serde(with = "int")]
    pub mu: BigInt,
    #[serde(with = "int_vec")]
    pub beta: Vec<BigInt>,
}

impl Automorphism {
    pub fn new(matrix: IntMatrix, mu: impl Into<BigInt>, beta: Vec<BigInt>) -> Self {
        Self {
            matrix,
            mu: mu.into(),
            beta,
        }
    }

    /// `(M, μ = 1, β = 0)`.
    pub fn from_matrix(matrix: IntMatrix) -> Self {
        let r = matrix.cols();
        Self::new(matrix, 1, vec![BigInt::from(0); r])
    }

    pub fn identity(params: &GroupParams) -> Self {
        Self::from_matrix(IntMatrix::identity(params.r()))
    }

    pub fn mu_residue(&self, params: &GroupParams) -> u64 {
        modular::residue(&self.mu, params.modulus())
    }

    pub fn beta_residue(&self, params: &GroupParams, i: usize) -> u64 {
        modular::residue(&self.beta[i], params.modulus())
    }

    /// Same automorphism with `μ` and `β` reduced into `[0, m^c)`.
    pub fn normalized(&self, params: &GroupParams) -> Self {
        Self {
            matrix: self.matrix.clone(),
            mu: BigInt::from(self.mu_residue(params)),
            beta: (0..self.beta.len())
                .map(|i| BigInt::from(self.beta_residue(params, i)))
                .collect(),
        }
    }

    /// `φ(s_i)` in normal form.
    pub fn image_of_generator(&self, params: &GroupParams, i: usize) -> GroupElement {
        GroupElement {
            y: self.matrix.column(i),
            theta: self.beta_residue(params, i),
        }
    }

    /// `φ(x)`.
    pub fn image_of_torsion(&self, params: &GroupParams) -> GroupElement {
        params.torsion(self.mu_residue(params))
    }
}

/// One violated defining relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationFailure {
    pub relation: String,
    pub witness: String,
}

impl fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.relation, self.witness)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    fn from_failures(failures: Vec<ValidationFailure>) -> Self {
        Self {
            ok: failures.is_empty(),
            failures,
        }
    }

    pub fn into_result(self) -> Result<()> {
        if self.ok {
            Ok(())
        } else {
            Err(Error::InvalidAutomorphism(
                self.failures.iter().map(ToString::to_string).collect(),
            ))
        }
    }
}

/// Label of the `i`-th congruence (0-based `i`), printed 1-based.
pub fn congruence_label(i: usize) -> String {
    format!("(M,c,{})", i + 1)
}

fn check_square_of_rank(params: &GroupParams, m: &IntMatrix) -> Result<()> {
    let r = params.r();
    if m.rows() != r || m.cols() != r {
        return Err(Error::DimensionMismatch {
            expected: format!("{r}x{r} matrix"),
            found: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    Ok(())
}

/// Both sides of congruence `i` (0-based): `(P(A_i), p_i^{y_i})` mod `m^c`.
pub fn congruence_sides(params: &GroupParams, m: &IntMatrix, i: usize) -> (u64, u64) {
    (params.action_exponent(&m.column(i)), params.unit(i))
}

/// Whether column `i` (0-based) of `M` satisfies its congruence.
pub fn congruence_holds(params: &GroupParams, m: &IntMatrix, i: usize) -> Result<bool> {
    check_square_of_rank(params, m)?;
    if i >= params.r() {
        return Err(Error::InvalidParameter(format!("congruence index {} out of range", i + 1)));
    }
    let (lhs, rhs) = congruence_sides(params, m, i);
    Ok(lhs == rhs)
}

/// Whether the unimodular matrix `M` is the abelianization of an automorphism
/// of `G_{n,c}`.
pub fn extendable(params: &GroupParams, m: &IntMatrix) -> Result<bool> {
    check_square_of_rank(params, m)?;
    let d = intlin::det(m)?;
    if !d.abs().is_one() {
        return Err(Error::NotUnimodular(d.to_string()));
    }
    for i in 0..params.r() {
        if !congruence_holds(params, m, i)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks that `(M, μ, β)` defines an automorphism.
///
/// Relations checked: shape, `|det M| = 1`, `μ` a unit, every congruence
/// `(M,c,i)`, and `φ(s_i)φ(s_j) = φ(s_j)φ(s_i)`.
pub fn validate(params: &GroupParams, phi: &Automorphism) -> ValidationReport {
    let r = params.r();
    let modulus = params.modulus();
    let mut failures = Vec::new();
    let mut fail = |relation: String, witness: String| failures.push(ValidationFailure { relation, witness });

    if phi.matrix.rows() != r || phi.matrix.cols() != r || phi.beta.len() != r {
        fail(
            "shape".into(),
            format!(
                "expected {r}x{r} matrix and {r} offsets, got {}x{} and {}",
                phi.matrix.rows(),
                phi.matrix.cols(),
                phi.beta.len()
            ),
        );
        return ValidationReport::from_failures(failures);
    }

    let d = intlin::det(&phi.matrix).expect("square");
    if !d.abs().is_one() {
        fail("unimodular".into(), format!("det(M) = {d}"));
    }

    let mu = phi.mu_residue(params);
    if modular::gcd(mu, modulus) != 1 {
        fail("mu unit".into(), format!("gcd({mu}, {modulus}) != 1"));
    }

    for i in 0..r {
        let (lhs, rhs) = congruence_sides(params, &phi.matrix, i);
        if lhs != rhs {
            fail(
                congruence_label(i),
                format!("P(A_{}) = {lhs} but p_{}^y_{} = {rhs} mod {modulus}", i + 1, i + 1, i + 1),
            );
        }
    }

    // φ(s_i)φ(s_j) = φ(s_j)φ(s_i) ⇔ β_i(P(A_j)^{-1} - 1) ≡ β_j(P(A_i)^{-1} - 1)
    let twists: Vec<u64> = (0..r)
        .map(|i| modular::sub(params.action_exponent_inverse(&phi.matrix.column(i)), 1, modulus))
        .collect();
    for i in 0..r {
        for j in i + 1..r {
            let lhs = modular::mul(phi.beta_residue(params, i), twists[j], modulus);
            let rhs = modular::mul(phi.beta_residue(params, j), twists[i], modulus);
            if lhs != rhs {
                fail(
                    format!("commute({},{})", i + 1, j + 1),
                    format!("{lhs} != {rhs} mod {modulus}"),
                );
            }
        }
    }

    ValidationReport::from_failures(failures)
}

/// `φ(S^y x^θ) = φ(s_1)^{y_1} ⋯ φ(s_r)^{y_r} · φ(x)^θ`.
pub fn apply(params: &GroupParams, phi: &Automorphism, g: &GroupElement) -> GroupElement {
    let mut acc = params.identity();
    for (i, e) in g.y.iter().enumerate() {
        let img = phi.image_of_generator(params, i);
        acc = params.multiply(&acc, &params.power(&img, e));
    }
    let tail = params.torsion(modular::mul(phi.mu_residue(params), g.theta, params.modulus()));
    params.multiply(&acc, &tail)
}

/// `φ ∘ ψ`.
pub fn compose(params: &GroupParams, phi: &Automorphism, psi: &Automorphism) -> Result<Automorphism> {
    let matrix = phi.matrix.mul(&psi.matrix)?;
    let modulus = params.modulus();
    let mu = modular::mul(phi.mu_residue(params), psi.mu_residue(params), modulus);
    let mut beta = Vec::with_capacity(params.r());
    for i in 0..params.r() {
        let img = apply(params, phi, &psi.image_of_generator(params, i));
        if img.y != matrix.column(i) {
            return Err(Error::Inconsistent(format!(
                "image of s_{} has exponent part inconsistent with the matrix product",
                i + 1
            )));
        }
        beta.push(BigInt::from(img.theta));
    }
    Ok(Automorphism::new(matrix, mu, beta))
}

/// `φ^{-1}`, verified by composing both ways.
pub fn invert(params: &GroupParams, phi: &Automorphism) -> Result<Automorphism> {
    validate(params, phi).into_result()?;
    let modulus = params.modulus();
    let inv_matrix = intlin::unimodular_inverse(&phi.matrix)?;
    let mu_inv = modular::inverse(phi.mu_residue(params), modulus)
        .ok_or_else(|| Error::Inconsistent("mu is not a unit".into()))?;

    // φ(S^{A'_i} x^{β'_i}) = S^{e_i} x^{γ_i + μ β'_i} must equal s_i, so
    // β'_i ≡ -γ_i μ^{-1}.
    let mut beta = Vec::with_capacity(params.r());
    for i in 0..params.r() {
        let partial = GroupElement {
            y: inv_matrix.column(i),
            theta: 0,
        };
        let gamma = apply(params, phi, &partial).theta;
        beta.push(BigInt::from(modular::mul(modular::neg(gamma, modulus), mu_inv, modulus)));
    }
    let inv = Automorphism::new(inv_matrix, mu_inv, beta);

    let identity = Automorphism::identity(params).normalized(params);
    if compose(params, phi, &inv)?.normalized(params) != identity
        || compose(params, &inv, phi)?.normalized(params) != identity
    {
        return Err(Error::Inconsistent("computed inverse does not compose to the identity".into()));
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Limits;

    fn params(n: u64, c: u32) -> GroupParams {
        GroupParams::new(n, c, &Limits::default()).unwrap()
    }

    fn mat<const R: usize>(rows: [[i64; R]; R]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn witness() -> IntMatrix {
        mat([[3, -8], [2, -5]])
    }

    fn swap() -> IntMatrix {
        mat([[0, 1], [1, 0]])
    }

    #[test]
    fn congruence_examples() {
        let p1 = params(15, 1);
        for rows in [[[7, 3], [2, 1]], [[0, 1], [1, 0]], [[-4, 9], [3, -7]]] {
            let m = mat(rows);
            assert!(congruence_holds(&p1, &m, 0).unwrap());
            assert!(congruence_holds(&p1, &m, 1).unwrap());
        }
        let p2 = params(15, 2);
        assert!(!congruence_holds(&p2, &swap(), 0).unwrap());
        assert!(congruence_holds(&p2, &witness(), 0).unwrap());
        assert!(congruence_holds(&p2, &witness(), 1).unwrap());
        assert!(congruence_holds(&p2, &witness(), 2).is_err());
    }

    #[test]
    fn extendable_examples() {
        let p = params(15, 2);
        assert!(extendable(&p, &IntMatrix::identity(2)).unwrap());
        assert!(!extendable(&p, &swap()).unwrap());
        assert!(extendable(&p, &witness()).unwrap());
        assert!(matches!(
            extendable(&p, &mat([[2, 0], [0, 1]])),
            Err(Error::NotUnimodular(_))
        ));
        assert!(extendable(&p, &IntMatrix::identity(3)).is_err());
    }

    #[test]
    fn validate_examples() {
        let p = params(15, 2);
        assert!(validate(&p, &Automorphism::identity(&p)).ok);
        assert!(validate(&p, &Automorphism::from_matrix(witness())).ok);
        let report = validate(&p, &Automorphism::from_matrix(swap()));
        assert!(!report.ok);
        assert_eq!(report.failures[0].relation, "(M,c,1)");

        let bad_mu = Automorphism::new(IntMatrix::identity(2), 2, vec![0.into(), 0.into()]);
        assert_eq!(validate(&p, &bad_mu).failures[0].relation, "mu unit");

        let bad_shape = Automorphism::new(IntMatrix::identity(2), 1, vec![0.into()]);
        assert_eq!(validate(&p, &bad_shape).failures[0].relation, "shape");
    }

    #[test]
    fn validate_commutation() {
        // For M = -Id: P(A_i)^{-1} - 1 = p_i - 1 mod 4 = (2, 0), so
        // β_1·0 ≡ β_2·2 requires β_2 even.
        let p = params(15, 2);
        let m = mat([[-1, 0], [0, -1]]);
        let ok = Automorphism::new(m.clone(), 1, vec![1.into(), 2.into()]);
        assert!(validate(&p, &ok).ok);
        let bad = Automorphism::new(m, 1, vec![0.into(), 1.into()]);
        let report = validate(&p, &bad);
        assert_eq!(report.failures.len(), 1);
        assert_eq!(report.failures[0].relation, "commute(1,2)");
    }

    #[test]
    fn apply_examples() {
        let p = params(15, 2);
        let g = p.element_i64(&[2, -3], 1).unwrap();
        assert_eq!(apply(&p, &Automorphism::identity(&p), &g), g);
        let phi = Automorphism::from_matrix(witness());
        assert_eq!(apply(&p, &phi, &p.x()), p.x());
        assert_eq!(apply(&p, &phi, &p.s(0)), p.element_i64(&[3, 2], 0).unwrap());
    }

    #[test]
    fn compose_examples() {
        let p = params(15, 2);
        let phi = Automorphism::from_matrix(witness());
        let id = Automorphism::identity(&p);
        assert_eq!(compose(&p, &phi, &id).unwrap(), phi);
        let inv = invert(&p, &phi).unwrap();
        assert_eq!(compose(&p, &phi, &inv).unwrap().normalized(&p), id);
        let sq = compose(&p, &phi, &phi).unwrap();
        assert_eq!(sq.matrix, mat([[-7, 16], [-4, 9]]));
        assert!(validate(&p, &sq).ok);
    }

    #[test]
    fn invert_examples() {
        let p = params(15, 2);
        let id = Automorphism::identity(&p);
        assert_eq!(invert(&p, &id).unwrap().normalized(&p), id);
        let phi = Automorphism::from_matrix(witness());
        let inv = invert(&p, &phi).unwrap();
        assert_eq!(inv.matrix, mat([[-5, 8], [-2, 3]]));
        assert_eq!(invert(&p, &inv).unwrap().normalized(&p), phi);

        let twisted = Automorphism::new(mat([[-1, 0], [0, -1]]), 3, vec![1.into(), 2.into()]);
        let inv = invert(&p, &twisted).unwrap();
        assert!(validate(&p, &inv).ok);
        assert_eq!(invert(&p, &inv).unwrap().normalized(&p), twisted.normalized(&p));

        assert!(invert(&p, &Automorphism::from_matrix(swap())).is_err());
    }

    #[test]
    fn json_schema() {
        let phi = Automorphism::new(witness(), 1, vec![0.into(), 3.into()]);
        let text = serde_json::to_string(&phi).unwrap();
        assert_eq!(text, r#"{"M":[[3,-8],[2,-5]],"mu":1,"beta":[0,3]}"#);
        assert_eq!(serde_json::from_str::<Automorphism>(&text).unwrap(), phi);
    }
}
