//! Regression corpus: expected values for a fixed list of `(n, c)` with a
//! provenance note on each value.
//!
//! Closed-form values are stamped `formula: …`; exact class counts are filled
//! in by the brute-force oracle at regeneration time and stamped `oracle: …`.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::autos::{self, Automorphism};
use crate::error::Result;
use crate::group::{GroupParams, Limits};
use crate::intlin::IntMatrix;
use crate::twisted;
use crate::witness;

/// Default `(n, c)` list used when no corpus exists yet.
pub const DEFAULT_CASES: &[(u64, u32)] = &[
    (15, 1),
    (15, 2),
    (15, 3),
    (15, 4),
    (21, 1),
    (21, 2),
    (21, 3),
    (33, 2),
    (35, 1),
    (35, 2),
    (65, 1),
    (65, 2),
    (6, 1),
    (6, 2),
    (6, 3),
    (10, 2),
    (30, 1),
    (30, 2),
];

/// Oracle boxes used during regeneration.
pub const ORACLE_ELEMENT_BOX: u32 = 4;
pub const ORACLE_CONJUGATOR_BOX: u32 = 8;
pub const ORACLE_MAX_CONJUGATOR_BOX: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenanced<T> {
    pub value: T,
    pub provenance: String,
}

impl<T> Provenanced<T> {
    fn new(value: T, provenance: impl Into<String>) -> Self {
        Self {
            value,
            provenance: provenance.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusCase {
    pub n: u64,
    pub c: u32,
    pub expected_m: Provenanced<u64>,
    pub expected_torsion_order: Provenanced<u64>,
    pub witness_matrix: Provenanced<IntMatrix>,
    pub expected_finite: Provenanced<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_count: Option<Provenanced<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Corpus {
    pub cases: Vec<CorpusCase>,
}

impl Corpus {
    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("corpus serializes");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseOutcome {
    pub n: u64,
    pub c: u32,
    pub failures: Vec<String>,
}

impl CaseOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Whether the oracle is cheap enough to run for these parameters, and the
/// witness for them. The inner half-box must meet every coset of `q·Z^2`.
fn oracle_feasible(params: &GroupParams, q: &BigInt) -> bool {
    params.r() == 2 && *q <= BigInt::from(2 * (ORACLE_ELEMENT_BOX / 2) + 1) && params.modulus() <= 16
}

/// Computes every expected value for `(n, c)` from scratch.
pub fn regen_case(n: u64, c: u32, limits: &Limits) -> Result<CorpusCase> {
    let params = GroupParams::new(n, c, limits)?;
    let torsion = params.torsion_info()?;
    let w = witness::build_witness_matrix(&params)?;
    let phi = Automorphism::from_matrix(w.m.clone());
    let finite = twisted::reidemeister_finite(&params, &phi)?;

    let expected_count = if oracle_feasible(&params, &w.q) {
        let rec = twisted::reidemeister_oracle_escalating(
            &params,
            &phi,
            ORACLE_ELEMENT_BOX,
            ORACLE_CONJUGATOR_BOX,
            ORACLE_MAX_CONJUGATOR_BOX,
            limits,
        )?;
        rec.count.map(|count| {
            Provenanced::new(
                count,
                format!(
                    "oracle: element box {}, stable at conjugator box {}",
                    rec.element_box, rec.conjugator_box
                ),
            )
        })
    } else {
        None
    };

    Ok(CorpusCase {
        n,
        c,
        expected_m: Provenanced::new(params.m(), "formula: m = gcd(p_i^y_i - 1)"),
        expected_torsion_order: Provenanced::new(torsion.order, "formula: |torsion| = m^c"),
        witness_matrix: Provenanced::new(w.m, "formula: M = m^(c-1) N_r + Id"),
        expected_finite: Provenanced::new(finite, "formula: det(M - Id) = m^(r(c-1)) != 0"),
        expected_count,
    })
}

/// Regenerates every case of `cases`, keeping their order.
pub fn regen(cases: &[(u64, u32)], limits: &Limits) -> Result<Corpus> {
    let cases = cases
        .iter()
        .map(|&(n, c)| regen_case(n, c, limits))
        .collect::<Result<Vec<_>>>()?;
    Ok(Corpus { cases })
}

/// Recomputes one case with the production code paths and compares.
pub fn run_case(case: &CorpusCase, limits: &Limits) -> CaseOutcome {
    let mut failures = Vec::new();
    let mut check = |what: &str, ok: bool, detail: String| {
        if !ok {
            failures.push(format!("{what}: {detail}"));
        }
    };

    let outcome = |failures| CaseOutcome {
        n: case.n,
        c: case.c,
        failures,
    };

    let params = match GroupParams::new(case.n, case.c, limits) {
        Ok(p) => p,
        Err(e) => return outcome(vec![format!("params: {e}")]),
    };
    check(
        "m",
        params.m() == case.expected_m.value,
        format!("got {}, expected {}", params.m(), case.expected_m.value),
    );
    match params.torsion_info() {
        Ok(t) => check(
            "torsion order",
            t.order == case.expected_torsion_order.value,
            format!("got {}, expected {}", t.order, case.expected_torsion_order.value),
        ),
        Err(e) => check("torsion order", false, e.to_string()),
    }

    let phi = match witness::witness_automorphism(&params) {
        Ok(phi) => phi,
        Err(e) => {
            check("witness", false, e.to_string());
            return outcome(failures);
        }
    };
    check(
        "witness matrix",
        phi.matrix == case.witness_matrix.value,
        format!("got {}, expected {}", phi.matrix, case.witness_matrix.value),
    );
    check(
        "extendable",
        autos::extendable(&params, &case.witness_matrix.value).unwrap_or(false),
        "stored witness fails a congruence".into(),
    );

    match twisted::reidemeister_exact(&params, &phi, limits) {
        Ok(report) => {
            check(
                "finite",
                report.finite == case.expected_finite.value,
                format!("got {}, expected {}", report.finite, case.expected_finite.value),
            );
            if let Some(expected) = &case.expected_count {
                let got = report.count.clone();
                check(
                    "count",
                    got == Some(BigInt::from(expected.value)),
                    format!("got {:?}, expected {}", got.map(|v| v.to_string()), expected.value),
                );
            }
        }
        Err(e) => check("reidemeister", false, e.to_string()),
    }
    outcome(failures)
}

pub fn run(corpus: &Corpus, limits: &Limits) -> Vec<CaseOutcome> {
    corpus.cases.iter().map(|c| run_case(c, limits)).collect()
}
