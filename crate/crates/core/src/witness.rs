//! Explicit automorphisms with finite Reidemeister number.
//!
//! For `r ≥ 2` and `q = m^{c-1}` the matrix `M = q·N_r + Id` is unimodular,
//! satisfies every congruence `(M,c,i)` and has `det(M - Id) = q^r ≠ 0`, so
//! `φ = (M, 1, 0)` is an automorphism of `G_{n,c}` with `R(φ) < ∞`. Since this
//! works for every `c`, no nilpotent quotient of `Γ_n` has property `R∞`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::autos::{self, Automorphism};
use crate::error::{Error, Result};
use crate::group::{GroupParams, Limits, PrimePower};
use crate::intlin::{self, IntMatrix};
use crate::json::int;
use crate::twisted::{self, ReidemeisterReport};

/// The matrix `N_r` with `q` in place of `m^k`:
///
/// ```text
/// [ 1  -(q+2)  q+1  -(q+1)  …  (-1)^{r-3}(q+1) ]
/// [ 1  -(q+1)  q    -q      …  (-1)^{r-3} q    ]
/// [ 0   1      0     0      …  0               ]
/// [ ⋮                  ⋱                       ]
/// [ 0   0      …     1      0                  ]
/// ```
pub fn build_n(r: usize, q: &BigInt) -> Result<IntMatrix> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!("N_r needs r ≥ 2, got {r}")));
    }
    let one = BigInt::one();
    let mut n = IntMatrix::zeros(r, r);
    n.set(0, 0, one.clone());
    n.set(0, 1, -(q + 2u32));
    n.set(1, 0, one.clone());
    n.set(1, 1, -(q + 1u32));
    for j in 2..r {
        let sign = if j % 2 == 0 { one.clone() } else { -one.clone() };
        n.set(0, j, &sign * (q + 1u32));
        n.set(1, j, &sign * q);
    }
    for i in 2..r {
        n.set(i, i - 1, one.clone());
    }
    Ok(n)
}

/// `M = q·N_r + Id` with its determinants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessMatrix {
    pub c: u32,
    pub k: u32,
    pub q: BigInt,
    pub n: IntMatrix,
    pub m: IntMatrix,
    pub det_n: BigInt,
    pub det_m: BigInt,
    pub det_m_minus_i: BigInt,
}

/// `q·N_r + Id`, checking `det N = det M = 1` and `det(M - Id) = q^r`.
pub fn witness_family(r: usize, q: &BigInt) -> Result<(IntMatrix, IntMatrix, BigInt, BigInt, BigInt)> {
    let n = build_n(r, q)?;
    let m = n.scale(q).add(&IntMatrix::identity(r))?;
    let det_n = intlin::det(&n)?;
    let det_m = intlin::det(&m)?;
    let det_m_minus_i = twisted::det_m_minus_identity(&m)?;
    let expected = Pow::pow(q, r as u32);
    if !det_n.is_one() || !det_m.is_one() || det_m_minus_i != expected {
        return Err(Error::Inconsistent(format!(
            "witness family r={r}, q={q}: det N = {det_n}, det M = {det_m}, det(M-Id) = {det_m_minus_i} (expected 1, 1, {expected})"
        )));
    }
    Ok((n, m, det_n, det_m, det_m_minus_i))
}

fn out_of_scope_notice(params: &GroupParams) -> String {
    format!(
        "n = {} involves a single prime; Γ_n is BS(1,{}) and its nilpotency degree is not computed here",
        params.n(),
        params.n()
    )
}

/// The witness matrix for `G_{n,c}`: `k = c - 1`, `q = m^k`.
pub fn build_witness_matrix(params: &GroupParams) -> Result<WitnessMatrix> {
    let r = params.r();
    if r < 2 {
        return Err(Error::Unsupported(out_of_scope_notice(params)));
    }
    let k = params.c() - 1;
    let q = Pow::pow(BigInt::from(params.m()), k);
    let (n, m, det_n, det_m, det_m_minus_i) = witness_family(r, &q)?;
    Ok(WitnessMatrix {
        c: params.c(),
        k,
        q,
        n,
        m,
        det_n,
        det_m,
        det_m_minus_i,
    })
}

/// `(M, μ = 1, β = 0)` for the witness matrix, validated.
pub fn witness_automorphism(params: &GroupParams) -> Result<Automorphism> {
    let w = build_witness_matrix(params)?;
    let phi = Automorphism::from_matrix(w.m);
    autos::validate(params, &phi).into_result()?;
    if !twisted::reidemeister_finite(params, &phi)? {
        return Err(Error::Inconsistent("witness has det(M - Id) = 0".into()));
    }
    Ok(phi)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCertificate {
    pub c: u32,
    pub k: u32,
    #[serde(rename = "N")]
    pub n: IntMatrix,
    #[serde(rename = "M")]
    pub m: IntMatrix,
    #[serde(rename = "det_N", with = "int")]
    pub det_n: BigInt,
    #[serde(rename = "det_M", with = "int")]
    pub det_m: BigInt,
    #[serde(rename = "det_M_minus_I", with = "int")]
    pub det_m_minus_i: BigInt,
    pub congruences_checked: bool,
    pub reidemeister: ReidemeisterReport,
}

/// Witness matrix, congruence check and exact Reidemeister count for one `c`.
pub fn certify(params: &GroupParams, limits: &Limits) -> Result<WitnessCertificate> {
    let w = build_witness_matrix(params)?;
    let congruences_checked = autos::extendable(params, &w.m)?;
    if !congruences_checked {
        return Err(Error::Inconsistent(format!(
            "witness matrix {} fails a congruence for n={}, c={}",
            w.m,
            params.n(),
            params.c()
        )));
    }
    let phi = witness_automorphism(params)?;
    let reidemeister = twisted::reidemeister_exact(params, &phi, limits)?;
    Ok(WitnessCertificate {
        c: w.c,
        k: w.k,
        n: w.n,
        m: w.m,
        det_n: w.det_n,
        det_m: w.det_m,
        det_m_minus_i: w.det_m_minus_i,
        congruences_checked,
        reidemeister,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Every quotient checked has an automorphism with finite `R(φ)`.
    DegreeInfinite,
    /// Single-prime case, not analysed.
    OutOfScope,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub n: u64,
    pub primes: Vec<PrimePower>,
    pub r: usize,
    pub m: u64,
    pub c_max: u32,
    pub verdict: Verdict,
    pub free_abelian: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notice: Option<String>,
    pub certificates: Vec<WitnessCertificate>,
}

/// Certificates for every `1 ≤ c ≤ c_max`, or an out-of-scope notice when `n`
/// is a prime power.
pub fn analyze_degree(n: u64, c_max: u32, limits: &Limits) -> Result<DegreeReport> {
    if c_max < 1 {
        return Err(Error::InvalidParameter("c_max must be at least 1".into()));
    }
    let base = GroupParams::new(n, 1, limits)?;
    let mut report = DegreeReport {
        n,
        primes: base.primes().to_vec(),
        r: base.r(),
        m: base.m(),
        c_max,
        verdict: Verdict::OutOfScope,
        free_abelian: base.m() == 1,
        notice: None,
        certificates: Vec::new(),
    };
    if base.r() < 2 {
        report.notice = Some(out_of_scope_notice(&base));
        return Ok(report);
    }
    for c in 1..=c_max {
        let params = GroupParams::new(n, c, limits)?;
        report.certificates.push(certify(&params, limits)?);
    }
    if report.free_abelian {
        report.notice = Some(format!(
            "m = 1: every quotient Γ_{{n,c}} is free abelian of rank {}",
            base.r()
        ));
    }
    report.verdict = Verdict::DegreeInfinite;
    Ok(report)
}

/// `(p_i^{y_i})^{m^{c-1}} mod m^c` for every prime power of `n`.
pub fn unit_power_residues(params: &GroupParams) -> Vec<(PrimePower, u64)> {
    let modulus = BigUint::from(params.modulus());
    let exponent = Pow::pow(BigUint::from(params.m()), params.c() - 1);
    params
        .primes()
        .iter()
        .map(|pp| {
            let v = BigUint::from(pp.value())
                .modpow(&exponent, &modulus)
                .to_u64()
                .expect("residue is below the modulus");
            (*pp, v)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat<const R: usize>(rows: [[i64; R]; R]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn params(n: u64, c: u32) -> GroupParams {
        GroupParams::new(n, c, &Limits::default()).unwrap()
    }

    #[test]
    fn build_n_examples() {
        let two = BigInt::from(2);
        assert_eq!(build_n(2, &two).unwrap(), mat([[1, -4], [1, -3]]));
        assert_eq!(
            build_n(3, &two).unwrap(),
            mat([[1, -4, 3], [1, -3, 2], [0, 1, 0]])
        );
        assert_eq!(build_n(2, &BigInt::one()).unwrap(), mat([[1, -3], [1, -2]]));
        assert_eq!(
            build_n(5, &BigInt::from(3)).unwrap(),
            mat([
                [1, -5, 4, -4, 4],
                [1, -4, 3, -3, 3],
                [0, 1, 0, 0, 0],
                [0, 0, 1, 0, 0],
                [0, 0, 0, 1, 0]
            ])
        );
        assert!(build_n(1, &two).is_err());
        for r in 2..=8 {
            assert!(intlin::det(&build_n(r, &two).unwrap()).unwrap().is_one());
        }
    }

    #[test]
    fn witness_matrix_examples() {
        let w = build_witness_matrix(&params(15, 2)).unwrap();
        assert_eq!(w.m, mat([[3, -8], [2, -5]]));
        assert_eq!((w.det_m.clone(), w.det_m_minus_i.clone()), (1.into(), 4.into()));

        let w = build_witness_matrix(&params(15, 1)).unwrap();
        assert_eq!(w.m, mat([[2, -3], [1, -1]]));
        assert_eq!(w.det_m_minus_i, BigInt::one());

        let w = build_witness_matrix(&params(6, 3)).unwrap();
        assert_eq!(w.m, mat([[2, -3], [1, -1]]));
        assert_eq!(w.det_m_minus_i, BigInt::one());

        assert!(matches!(
            build_witness_matrix(&params(8, 2)),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn witness_automorphism_examples() {
        let phi = witness_automorphism(&params(15, 2)).unwrap();
        assert_eq!(phi.matrix, mat([[3, -8], [2, -5]]));
        assert!(autos::validate(&params(15, 1), &witness_automorphism(&params(15, 1)).unwrap()).ok);
        let p = params(21, 3);
        let phi = witness_automorphism(&p).unwrap();
        assert_eq!(phi.matrix, mat([[5, -24], [4, -19]]));
        assert!(autos::validate(&p, &phi).ok);
    }

    #[test]
    fn analyze_examples() {
        let rep = analyze_degree(15, 3, &Limits::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::DegreeInfinite);
        assert_eq!(rep.certificates.len(), 3);
        assert!(rep.certificates.iter().all(|c| c.reidemeister.finite));

        let rep = analyze_degree(6, 5, &Limits::default()).unwrap();
        assert!(rep.free_abelian);
        assert_eq!(rep.verdict, Verdict::DegreeInfinite);
        assert_eq!(rep.certificates.len(), 5);

        let rep = analyze_degree(8, 2, &Limits::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::OutOfScope);
        assert!(rep.certificates.is_empty());
        assert!(rep.notice.is_some());

        assert!(analyze_degree(1, 2, &Limits::default()).is_err());
    }

    #[test]
    fn unit_power_examples() {
        for (_, v) in unit_power_residues(&params(15, 3)) {
            assert_eq!(v, 1);
        }
        // 65: m = 4, 5^4 = 625 ≡ 1 mod 16, 13^4 = 28561 ≡ 1 mod 16
        assert!(unit_power_residues(&params(65, 2)).iter().all(|&(_, v)| v == 1));
    }
}
