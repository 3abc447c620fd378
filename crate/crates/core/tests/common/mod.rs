#![allow(dead_code)]

use gsbs_core::autos::{self, Automorphism};
use gsbs_core::{GroupElement, GroupParams, IntMatrix, Limits};
use num_bigint::BigInt;
use rand::Rng;

pub fn params(n: u64, c: u32) -> GroupParams {
    GroupParams::new(n, c, &Limits::default()).unwrap()
}

pub fn mat<const R: usize>(rows: [[i64; R]; R]) -> IntMatrix {
    IntMatrix::from_rows(rows).unwrap()
}

pub fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Product of `steps` random elementary operations (row additions, swaps,
/// sign flips) applied to the identity.
pub fn random_unimodular<R: Rng>(rng: &mut R, r: usize, steps: usize) -> IntMatrix {
    let mut rows: Vec<Vec<i64>> = (0..r)
        .map(|i| (0..r).map(|j| i64::from(i == j)).collect())
        .collect();
    for _ in 0..steps {
        let i = rng.gen_range(0..r);
        let mut j = rng.gen_range(0..r);
        if r > 1 {
            while j == i {
                j = rng.gen_range(0..r);
            }
        }
        match rng.gen_range(0..6) {
            0 if i != j => rows.swap(i, j),
            1 => rows[i].iter_mut().for_each(|v| *v = -*v),
            _ if i != j => {
                let f: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
                let src = rows[j].clone();
                for (t, s) in rows[i].iter_mut().zip(src) {
                    *t += f * s;
                }
            }
            _ => {}
        }
    }
    IntMatrix::from_rows(rows).unwrap()
}

/// A random matrix satisfying every congruence for `params`, by rejection.
pub fn random_extendable<R: Rng>(rng: &mut R, params: &GroupParams, steps: usize) -> IntMatrix {
    loop {
        let m = random_unimodular(rng, params.r(), steps);
        if autos::extendable(params, &m).unwrap() {
            return m;
        }
    }
}

/// A random valid automorphism: extendable matrix, random unit `μ`, and
/// offsets `β` satisfying the commutation relations (by rejection).
pub fn random_automorphism<R: Rng>(rng: &mut R, params: &GroupParams, steps: usize) -> Automorphism {
    let modulus = params.modulus();
    let m = random_extendable(rng, params, steps);
    for _ in 0..200 {
        let mu = rng.gen_range(0..modulus.max(1));
        let beta = (0..params.r())
            .map(|_| BigInt::from(rng.gen_range(0..modulus.max(1))))
            .collect();
        let phi = Automorphism::new(m.clone(), mu, beta);
        if autos::validate(params, &phi).ok {
            return phi;
        }
    }
    Automorphism::from_matrix(m)
}

pub fn random_element<R: Rng>(rng: &mut R, params: &GroupParams, radius: i64) -> GroupElement {
    let y: Vec<i64> = (0..params.r()).map(|_| rng.gen_range(-radius..=radius)).collect();
    let theta = rng.gen_range(0..params.modulus().max(1)) as i64;
    params.element_i64(&y, theta).unwrap()
}

/// Closed-form count used as a third, independent route: twisted classes
/// over a cokernel representative `ρ` are the orbits of `θ ↦ θ + l·(P(ρ)^{-1} - μ)`,
/// so `R(φ) = Σ_ρ gcd(P(ρ)^{-1} - μ, m^c)`.
pub fn fibre_formula_count(params: &GroupParams, phi: &Automorphism) -> u64 {
    use gsbs_core::Cokernel;
    let modulus = params.modulus();
    let t = IntMatrix::identity(params.r()).sub(&phi.matrix).unwrap();
    let reps = Cokernel::new(&t).unwrap().representatives(u64::MAX).unwrap();
    let mu = phi.mu_residue(params);
    reps.iter()
        .map(|rho| {
            let a = (params.action_exponent_inverse(rho) + modulus - mu) % modulus;
            num_integer::gcd(a, modulus)
        })
        .sum()
}
