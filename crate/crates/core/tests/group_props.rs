mod common;

use common::params;
use gsbs_core::GroupParams;
use num_bigint::BigInt;
use proptest::prelude::*;

const CORPUS: &[(u64, u32)] = &[(15, 1), (15, 3), (21, 2), (65, 2), (6, 3), (30, 2), (4, 3), (360, 2)];

fn corpus_params() -> impl Strategy<Value = GroupParams> {
    prop::sample::select(CORPUS).prop_map(|(n, c)| params(n, c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn associativity(p in corpus_params(), seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let g = common::random_element(&mut rng, &p, 20);
        let h = common::random_element(&mut rng, &p, 20);
        let w = common::random_element(&mut rng, &p, 20);
        prop_assert_eq!(
            p.multiply(&p.multiply(&g, &h), &w),
            p.multiply(&g, &p.multiply(&h, &w))
        );
        prop_assert_eq!(p.multiply(&g, &p.inverse(&g)), p.identity());
        prop_assert_eq!(p.multiply(&p.inverse(&g), &g), p.identity());
    }

    #[test]
    fn action_is_a_character(p in corpus_params(), a in prop::collection::vec(-30i64..30, 3), b in prop::collection::vec(-30i64..30, 3)) {
        let r = p.r();
        let y: Vec<BigInt> = a[..r].iter().map(|&v| v.into()).collect();
        let z: Vec<BigInt> = b[..r].iter().map(|&v| v.into()).collect();
        let sum: Vec<BigInt> = y.iter().zip(&z).map(|(u, v)| u + v).collect();
        let lhs = p.action_exponent(&sum);
        let rhs = (p.action_exponent(&y) as u128 * p.action_exponent(&z) as u128 % p.modulus() as u128) as u64;
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(
            (p.action_exponent(&y) as u128 * p.action_exponent_inverse(&y) as u128 % p.modulus() as u128) as u64,
            1 % p.modulus()
        );
    }

    #[test]
    fn power_matches_repeated_product(p in corpus_params(), seed in any::<u64>(), t in -12i64..=12) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let g = common::random_element(&mut rng, &p, 5);
        let step = if t >= 0 { g.clone() } else { p.inverse(&g) };
        let mut acc = p.identity();
        for _ in 0..t.abs() {
            acc = p.multiply(&acc, &step);
        }
        prop_assert_eq!(p.power_i64(&g, t), acc);
    }
}

#[test]
fn presentation_relations() {
    for &(n, c) in CORPUS {
        let p = params(n, c);
        let x = p.x();
        assert_eq!(p.power(&x, &BigInt::from(p.modulus())), p.identity());
        for i in 0..p.r() {
            let si = p.s(i);
            let conj = p.multiply(&p.multiply(&si, &x), &p.inverse(&si));
            assert_eq!(conj, p.power(&x, &BigInt::from(p.primes()[i].value())));
            for j in 0..p.r() {
                assert_eq!(p.multiply(&si, &p.s(j)), p.multiply(&p.s(j), &si));
            }
        }
    }
}

#[test]
fn lcs_formula_matches_commutators() {
    for &(n, c) in CORPUS {
        let p = params(n, c);
        for k in 2..=c + 2 {
            assert_eq!(
                p.lcs_exponent(k).unwrap(),
                p.lcs_exponent_bruteforce(k).unwrap(),
                "n={n} c={c} k={k}"
            );
        }
    }
}

#[test]
fn torsion_power_lies_in_next_lcs_term() {
    // x^{m^k} ∈ γ_{k+1}: m^k is a multiple of the generator exponent mod m^c.
    for &(n, c) in CORPUS {
        let p = params(n, c);
        let modulus = p.modulus();
        for k in 1..=c + 1 {
            let gen = p.lcs_exponent(k + 1).unwrap();
            let mk = gsbs_core::modular::pow(p.m(), k as u64, modulus);
            let g = num_integer::gcd(gen, modulus);
            assert_eq!(mk % g, 0, "n={n} c={c} k={k}");
        }
    }
}

#[test]
fn torsion_order_is_modulus() {
    for &(n, c) in CORPUS {
        let p = params(n, c);
        assert_eq!(p.order_of(&p.x()), Some(p.modulus()));
        assert_eq!(p.torsion_info().unwrap().order, p.modulus());
    }
}
