//! Exact arithmetic with roots of unity.
//!
//! Character values are roots of unity `exp(2πi e / N)`; character sums are
//! integer combinations of them, i.e. elements of `Z[ω_N]`. Sums are kept as
//! exponent histograms and compared exactly by reducing modulo the cyclotomic
//! polynomial `Φ_N`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::poly::lcm;

/// `exp(2πi · exponent / order)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootOfUnity {
    order: u32,
    exponent: u32,
}

impl std::ops::Mul for RootOfUnity {
    type Output = Self;

    #[allow(clippy::suspicious_arithmetic_impl)] // exponents add
    fn mul(self, other: Self) -> Self {
        let n = lcm(u64::from(self.order), u64::from(other.order)) as u32;
        let a = self.lift(n).unwrap();
        let b = other.lift(n).unwrap();
        Self::new(n, i64::from(a.exponent) + i64::from(b.exponent))
    }
}

impl RootOfUnity {
    pub fn new(order: u32, exponent: i64) -> Self {
        assert!(order > 0, "root of unity of order zero");
        let e = exponent.rem_euclid(i64::from(order)) as u32;
        RootOfUnity { order, exponent: e }
    }

    pub fn one(order: u32) -> Self {
        Self::new(order, 0)
    }

    pub fn order(self) -> u32 {
        self.order
    }

    pub fn exponent(self) -> u32 {
        self.exponent
    }

    /// The same root written with denominator `order`, which must be a
    /// multiple of the current one.
    pub fn lift(self, order: u32) -> Option<Self> {
        order.is_multiple_of(self.order).then(|| RootOfUnity { order, exponent: self.exponent * (order / self.order) })
    }

    pub fn pow(self, e: i64) -> Self {
        Self::new(self.order, i64::from(self.exponent) * e)
    }

    pub fn conj(self) -> Self {
        Self::new(self.order, -i64::from(self.exponent))
    }

    pub fn value(self) -> Complex64 {
        root_value(self.order, self.exponent)
    }
}

pub(crate) fn root_value(order: u32, exponent: u32) -> Complex64 {
    let e = exponent % order;
    // exact values on the axes keep amplitudes like ±1, ±i bit-exact
    if (4 * e).is_multiple_of(order) {
        return match 4 * e / order {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let angle = 2.0 * PI * f64::from(e) / f64::from(order);
    let (s, c) = angle.sin_cos();
    Complex64::new(c, s)
}

/// An element `sum_e c_e ω_N^e` of `Z[ω_N]`, stored as an exponent histogram.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclotomicInt {
    order: u32,
    terms: BTreeMap<u32, i64>,
}

impl CyclotomicInt {
    pub fn zero(order: u32) -> Self {
        assert!(order > 0);
        CyclotomicInt { order, terms: BTreeMap::new() }
    }

    pub fn from_integer(order: u32, n: i64) -> Self {
        let mut z = Self::zero(order);
        z.add_term(0, n);
        z
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Histogram entries `(exponent, weight)` with nonzero weight.
    pub fn terms(&self) -> impl Iterator<Item = (u32, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn add_term(&mut self, exponent: u32, weight: i64) {
        if weight == 0 {
            return;
        }
        let e = exponent % self.order;
        let slot = self.terms.entry(e).or_insert(0);
        *slot += weight;
        if *slot == 0 {
            self.terms.remove(&e);
        }
    }

    /// Adds `weight · root`, lifting the root to this element's order.
    pub fn add_root(&mut self, root: RootOfUnity, weight: i64) {
        let lifted = root.lift(self.order).expect("root order must divide the accumulator order");
        self.add_term(lifted.exponent(), weight);
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order);
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order);
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, -c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order);
        let mut out = Self::zero(self.order);
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                out.add_term((e1 + e2) % self.order, c1 * c2);
            }
        }
        out
    }

    /// Complex conjugate: `ω^e -> ω^(-e)`.
    pub fn conj(&self) -> Self {
        let mut out = Self::zero(self.order);
        for (e, c) in self.terms() {
            out.add_term((self.order - e) % self.order, c);
        }
        out
    }

    /// `|z|^2 = z · conj(z)`, still exact.
    pub fn norm_sqr(&self) -> Self {
        self.mul(&self.conj())
    }

    pub fn to_complex(&self) -> Complex64 {
        self.terms().map(|(e, c)| root_value(self.order, e) * c as f64).sum()
    }

    /// Canonical representative modulo `Φ_N`: coefficients of degree `< φ(N)`.
    pub fn reduced(&self) -> Vec<i64> {
        let phi = cyclotomic_polynomial(self.order);
        let deg = phi.len() - 1;
        let top = self.terms.keys().next_back().copied().unwrap_or(0) as usize;
        let mut r = vec![0i128; (top + 1).max(deg)];
        for (e, c) in self.terms() {
            r[e as usize] += i128::from(c);
        }
        for d in (deg..r.len()).rev() {
            let c = r[d];
            if c == 0 {
                continue;
            }
            for (k, &pk) in phi.iter().enumerate() {
                r[d - deg + k] -= c * i128::from(pk);
            }
        }
        r.truncate(deg);
        r.into_iter().map(|c| i64::try_from(c).expect("cyclotomic coefficient overflow")).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.reduced().iter().all(|&c| c == 0)
    }

    /// `Some(n)` when the element is the rational integer `n`.
    pub fn as_integer(&self) -> Option<i64> {
        let r = self.reduced();
        r.iter().skip(1).all(|&c| c == 0).then(|| r.first().copied().unwrap_or(0))
    }

    pub fn exact_eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

/// Integer coefficients of `Φ_n`, constant term first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    assert!(n > 0);
    let divisors: Vec<u32> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    let mut known: BTreeMap<u32, Vec<i64>> = BTreeMap::new();
    for &d in &divisors {
        // x^d - 1 divided by Φ_e for every proper divisor e of d
        let mut num = vec![0i64; d as usize + 1];
        num[0] = -1;
        num[d as usize] = 1;
        for (&e, phi) in &known {
            if d % e == 0 {
                num = exact_div(&num, phi);
            }
        }
        known.insert(d, num);
    }
    known.remove(&n).unwrap()
}

fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    debug_assert_eq!(den[dn], 1);
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        for (k, &dk) in den.iter().enumerate() {
            rem[i + k] -= c * dk;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}
