//! The groups `G_{n,c} = Z_{m^c} ⋊ Z^r` and their normal-form arithmetic.
//!
//! An element is written `S^y x^θ` where `S^y = s_1^{y_1} ⋯ s_r^{y_r}` and
//! `x` generates the torsion subgroup `Z_{m^c}`. The generators act by
//! `s_i x s_i^{-1} = x^{p_i^{y_i}}`, which forces the product law
//!
//! ```text
//! (y₁, θ₁)·(y₂, θ₂) = (y₁ + y₂, θ₁·P(y₂)^{-1} + θ₂)   where P(y) = Π (p_i^{y_i})^{y(i)}
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::int_vec;
use crate::modular;

/// Default cap on `m^c` and on orbit node counts.
pub const DEFAULT_CAP: u64 = 10_000_000;

/// Largest `n` that will be factored by trial division.
pub const TRIAL_DIVISION_LIMIT: u64 = 1_000_000_000_000;

/// Resource limits shared by every computation whose cost grows with `m^c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub cap: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Self { cap: DEFAULT_CAP }
    }
}

impl Limits {
    pub fn with_cap(cap: u64) -> Self {
        Self { cap }
    }
}

/// One factor `p^y` of `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct PrimePower {
    pub p: u64,
    pub y: u32,
}

impl PrimePower {
    pub fn value(&self) -> u64 {
        self.p.pow(self.y)
    }
}

impl Serialize for PrimePower {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (self.p, self.y).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PrimePower {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (p, y) = <(u64, u32)>::deserialize(d)?;
        Ok(Self { p, y })
    }
}

/// Factorization of `n`, the class `c`, `m = gcd(p_i^{y_i} - 1)` and `m^c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupParams {
    n: u64,
    c: u32,
    primes: Vec<PrimePower>,
    m: u64,
    modulus: u64,
    units: Vec<u64>,
    unit_inverses: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct ParamsJson {
    n: u64,
    c: u32,
    primes: Vec<PrimePower>,
    m: u64,
    modulus: u64,
}

impl Serialize for GroupParams {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ParamsJson {
            n: self.n,
            c: self.c,
            primes: self.primes.clone(),
            m: self.m,
            modulus: self.modulus,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupParams {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = ParamsJson::deserialize(d)?;
        let params = GroupParams::from_factorization(&raw.primes, raw.c, &Limits::with_cap(u64::MAX))
            .map_err(D::Error::custom)?;
        if params.n != raw.n || params.m != raw.m || params.modulus != raw.modulus {
            return Err(D::Error::custom(format!(
                "inconsistent parameters: factorization gives n={}, m={}, modulus={}",
                params.n, params.m, params.modulus
            )));
        }
        Ok(params)
    }
}

fn factor(mut n: u64) -> Vec<PrimePower> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut y = 0;
            while n.is_multiple_of(p) {
                n /= p;
                y += 1;
            }
            out.push(PrimePower { p, y });
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(PrimePower { p: n, y: 1 });
    }
    out
}

fn is_prime(p: u64) -> bool {
    p >= 2 && factor(p).len() == 1 && factor(p)[0].y == 1
}

impl GroupParams {
    /// Parameters for `Γ_{n,c}`, factoring `n` by trial division.
    pub fn new(n: u64, c: u32, limits: &Limits) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("n must be at least 2, got {n}")));
        }
        if n > TRIAL_DIVISION_LIMIT {
            return Err(Error::InvalidParameter(format!(
                "n = {n} is above the trial-division limit {TRIAL_DIVISION_LIMIT}; pass an explicit factorization"
            )));
        }
        Self::from_factorization(&factor(n), c, limits)
    }

    /// Parameters from an explicit factorization `n = Π p_i^{y_i}`.
    pub fn from_factorization(primes: &[PrimePower], c: u32, limits: &Limits) -> Result<Self> {
        if c < 1 {
            return Err(Error::InvalidParameter("class c must be at least 1".into()));
        }
        if primes.is_empty() {
            return Err(Error::InvalidParameter("empty factorization".into()));
        }
        let mut primes = primes.to_vec();
        primes.sort();
        let mut n: u64 = 1;
        for (i, pp) in primes.iter().enumerate() {
            if pp.y == 0 {
                return Err(Error::InvalidParameter(format!("exponent of {} must be positive", pp.p)));
            }
            if pp.p > TRIAL_DIVISION_LIMIT || !is_prime(pp.p) {
                return Err(Error::InvalidParameter(format!("{} is not a checkable prime", pp.p)));
            }
            if i > 0 && primes[i - 1].p == pp.p {
                return Err(Error::InvalidParameter(format!("repeated prime {}", pp.p)));
            }
            let value = pp
                .p
                .checked_pow(pp.y)
                .ok_or_else(|| Error::InvalidParameter("n does not fit in 64 bits".into()))?;
            n = n
                .checked_mul(value)
                .ok_or_else(|| Error::InvalidParameter("n does not fit in 64 bits".into()))?;
        }

        let m = primes
            .iter()
            .fold(0u64, |g, pp| modular::gcd(g, pp.value() - 1));
        let modulus = modular::checked_pow_limit(m, c, limits.cap).ok_or_else(|| {
            Error::ResourceCap {
                what: "modulus m^c",
                value: format!("{m}^{c}"),
                cap: limits.cap,
            }
        })?;

        let units: Vec<u64> = primes.iter().map(|pp| pp.value() % modulus).collect();
        let unit_inverses = units
            .iter()
            .map(|&u| modular::inverse(u, modulus))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Inconsistent("p_i^{y_i} is not a unit mod m^c".into()))?;

        Ok(Self {
            n,
            c,
            primes,
            m,
            modulus,
            units,
            unit_inverses,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn primes(&self) -> &[PrimePower] {
        &self.primes
    }

    /// Number of distinct primes, the free rank of `G_{n,c}`.
    pub fn r(&self) -> usize {
        self.primes.len()
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// `m^c`, the order of the torsion subgroup.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `p_i^{y_i} mod m^c`.
    pub fn unit(&self, i: usize) -> u64 {
        self.units[i]
    }

    pub fn unit_inverse(&self, i: usize) -> u64 {
        self.unit_inverses[i]
    }

    /// True when `m = 1`, so that `G_{n,c} ≅ Z^r`.
    pub fn is_free_abelian(&self) -> bool {
        self.modulus == 1
    }

    /// `P(y) = Π_i (p_i^{y_i})^{y(i)} mod m^c`; negative components use inverses.
    pub fn action_exponent(&self, y: &[BigInt]) -> u64 {
        debug_assert_eq!(y.len(), self.r());
        y.iter()
            .enumerate()
            .fold(1 % self.modulus, |acc, (i, e)| {
                let f = modular::pow_signed(self.units[i], self.unit_inverses[i], e, self.modulus);
                modular::mul(acc, f, self.modulus)
            })
    }

    /// `P(y)^{-1} = P(-y)`.
    pub fn action_exponent_inverse(&self, y: &[BigInt]) -> u64 {
        y.iter()
            .enumerate()
            .fold(1 % self.modulus, |acc, (i, e)| {
                let f = modular::pow_signed(self.unit_inverses[i], self.units[i], e, self.modulus);
                modular::mul(acc, f, self.modulus)
            })
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            y: vec![BigInt::zero(); self.r()],
            theta: 0,
        }
    }

    /// The torsion generator `x`.
    pub fn x(&self) -> GroupElement {
        self.torsion(1)
    }

    /// `x^θ`.
    pub fn torsion(&self, theta: u64) -> GroupElement {
        GroupElement {
            y: vec![BigInt::zero(); self.r()],
            theta: theta % self.modulus,
        }
    }

    /// The generator `s_i` (0-based index).
    pub fn s(&self, i: usize) -> GroupElement {
        let mut y = vec![BigInt::zero(); self.r()];
        y[i] = BigInt::from(1);
        GroupElement { y, theta: 0 }
    }

    /// `S^y x^θ`, reducing `θ` modulo `m^c`.
    pub fn element(&self, y: Vec<BigInt>, theta: &BigInt) -> Result<GroupElement> {
        if y.len() != self.r() {
            return Err(Error::DimensionMismatch {
                expected: format!("exponent vector of length {}", self.r()),
                found: format!("length {}", y.len()),
            });
        }
        Ok(GroupElement {
            y,
            theta: modular::residue(theta, self.modulus),
        })
    }

    pub fn element_i64(&self, y: &[i64], theta: i64) -> Result<GroupElement> {
        self.element(
            y.iter().map(|&v| BigInt::from(v)).collect(),
            &BigInt::from(theta),
        )
    }

    /// Re-reduces an element read from outside (e.g. JSON) into canonical form.
    pub fn normalize(&self, g: GroupElement) -> Result<GroupElement> {
        self.element(g.y, &BigInt::from(g.theta))
    }

    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        let y = g.y.iter().zip(&h.y).map(|(a, b)| a + b).collect();
        let twist = self.action_exponent_inverse(&h.y);
        let theta = modular::add(modular::mul(g.theta, twist, self.modulus), h.theta, self.modulus);
        GroupElement { y, theta }
    }

    pub fn inverse(&self, g: &GroupElement) -> GroupElement {
        let y = g.y.iter().map(|a| -a).collect();
        let theta = modular::neg(
            modular::mul(g.theta, self.action_exponent(&g.y), self.modulus),
            self.modulus,
        );
        GroupElement { y, theta }
    }

    /// `g^t` by square-and-multiply.
    pub fn power(&self, g: &GroupElement, t: &BigInt) -> GroupElement {
        let (mut base, exp) = if t < &BigInt::zero() {
            (self.inverse(g), -t)
        } else {
            (g.clone(), t.clone())
        };
        let mut result = self.identity();
        let bits = exp.bits();
        for bit in 0..bits {
            if exp.bit(bit) {
                result = self.multiply(&result, &base);
            }
            if bit + 1 < bits {
                base = self.multiply(&base, &base);
            }
        }
        result
    }

    pub fn power_i64(&self, g: &GroupElement, t: i64) -> GroupElement {
        self.power(g, &BigInt::from(t))
    }

    /// `[g, h] = g h g^{-1} h^{-1}`.
    pub fn commutator(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        let gh = self.multiply(g, h);
        let gi = self.inverse(g);
        let hi = self.inverse(h);
        self.multiply(&self.multiply(&gh, &gi), &hi)
    }

    /// Order of `g` by repeated multiplication, or `None` for elements of
    /// infinite order (nonzero `y`-part).
    pub fn order_of(&self, g: &GroupElement) -> Option<u64> {
        if g.y.iter().any(|v| !v.is_zero()) {
            return None;
        }
        let id = self.identity();
        let mut acc = g.clone();
        let mut order = 1u64;
        while acc != id {
            acc = self.multiply(&acc, g);
            order += 1;
            if order > self.modulus {
                return None;
            }
        }
        Some(order)
    }

    /// The torsion subgroup `⟨x⟩`, with its order checked by iterating powers
    /// of `x`.
    pub fn torsion_info(&self) -> Result<TorsionInfo> {
        let order = self
            .order_of(&self.x())
            .ok_or_else(|| Error::Inconsistent("x has infinite order".into()))?;
        if order != self.modulus {
            return Err(Error::Inconsistent(format!(
                "order of x is {order}, expected m^c = {}",
                self.modulus
            )));
        }
        Ok(TorsionInfo {
            generator_exponent: 1,
            order,
        })
    }

    /// Exponent `e` with `γ_k(G_{n,c}) = ⟨x^e⟩`, namely `m^{k-1} mod m^c`.
    pub fn lcs_exponent(&self, k: u32) -> Result<u64> {
        if k < 2 {
            return Err(Error::InvalidParameter(format!("lower central series index k must be ≥ 2, got {k}")));
        }
        Ok(modular::pow(self.m, (k - 1) as u64, self.modulus))
    }

    /// The same exponent computed from commutators with the group law:
    /// `γ_{j+1}` is generated inside `⟨x⟩` by `[g, s_i]` and `[g, x]` for the
    /// generator `g` of `γ_j`, starting from the generators of `G`.
    pub fn lcs_exponent_bruteforce(&self, k: u32) -> Result<u64> {
        if k < 2 {
            return Err(Error::InvalidParameter(format!("lower central series index k must be ≥ 2, got {k}")));
        }
        let gens: Vec<GroupElement> = (0..self.r())
            .map(|i| self.s(i))
            .chain(std::iter::once(self.x()))
            .collect();

        // γ_2 = [G, G], normally generated by commutators of generators.
        let mut gamma = self.subgroup_of_commutators(&gens, &gens)?;
        for _ in 2..k {
            let current = self.torsion(gamma);
            gamma = self.subgroup_of_commutators(&[current], &gens)?;
        }
        Ok(gamma % self.modulus)
    }

    /// Generator (as a divisor of `m^c`) of the subgroup of `⟨x⟩` spanned by
    /// all `[a, b]`, `a ∈ left`, `b ∈ right`, closed under conjugation.
    fn subgroup_of_commutators(&self, left: &[GroupElement], right: &[GroupElement]) -> Result<u64> {
        let mut g = self.modulus;
        for a in left {
            for b in right {
                let comm = self.commutator(a, b);
                if comm.y.iter().any(|v| !v.is_zero()) {
                    return Err(Error::Inconsistent("commutator outside the torsion subgroup".into()));
                }
                g = modular::gcd(g, comm.theta);
            }
        }
        // Conjugation by s_i multiplies exponents by units, so ⟨x^g⟩ is
        // already normal.
        Ok(g)
    }
}

/// Normal form `S^y x^θ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    #[serde(with = "int_vec")]
    pub y: Vec<BigInt>,
    pub theta: u64,
}

impl GroupElement {
    pub fn is_torsion(&self) -> bool {
        self.y.iter().all(Zero::is_zero)
    }

    pub fn y_i64(&self) -> Option<Vec<i64>> {
        self.y.iter().map(ToPrimitive::to_i64).collect()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S^(")?;
        for (i, v) in self.y.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ") x^{}", self.theta)
    }
}

/// The torsion subgroup `⟨x⟩ ≅ Z_{m^c}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionInfo {
    pub generator_exponent: u64,
    pub order: u64,
}
