//! Additive and multiplicative characters, and the character sums built
//! from them.
//!
//! Every sum is accumulated exactly as an exponent histogram in `Z[ω_N]`
//! ([`CyclotomicInt`]) and converted to a complex number only when the
//! [`SumReport`] is assembled, so results do not depend on summation order.

use num_complex::Complex64;
use serde::Serialize;

use crate::cyclotomic::CyclotomicInt;
pub use crate::cyclotomic::RootOfUnity;
use crate::error::{Error, Result};
use crate::finitefield::{FieldElement, GaloisField};
use crate::galoisring::{GaloisRing, RingElement};
use crate::poly::{gcd, lcm};

/// Tolerance used when checking a sum magnitude against its bound.
pub const BOUND_TOL: f64 = 1e-9;

/// An evaluated character sum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SumReport {
    #[serde(with = "crate::json::complex")]
    pub value: Complex64,
    pub magnitude: f64,
    /// Known upper bound on the magnitude, when one applies.
    pub bound: Option<f64>,
    /// `magnitude <= bound` (within [`BOUND_TOL`]); vacuously true without a bound.
    pub bound_satisfied: bool,
    pub exact: CyclotomicInt,
}

impl SumReport {
    fn new(exact: CyclotomicInt, bound: Option<f64>) -> Self {
        let value = exact.to_complex();
        let magnitude = value.norm();
        SumReport { value, magnitude, bound, bound_satisfied: bound.is_none_or(|b| magnitude <= b + BOUND_TOL), exact }
    }
}

/// `κ(x) = ω_p^tr(x)`.
pub fn add_char(field: &GaloisField, x: FieldElement) -> Result<RootOfUnity> {
    Ok(RootOfUnity::new(field.characteristic(), i64::from(field.trace(x)?)))
}

/// `ψ_k(n) = ω_{q-1}^(k · dlog n)` on `F_q*`.
///
/// At `n = 0` the trivial character is 1 and every other character is 0
/// (returned as `None`).
pub fn mult_char(field: &GaloisField, k: u32, n: FieldElement) -> Result<Option<RootOfUnity>> {
    let order = field.order() - 1;
    if n.is_zero() {
        return Ok(k.is_multiple_of(order).then(|| RootOfUnity::one(order)));
    }
    let j = field.dlog(n)?;
    Ok(Some(RootOfUnity::new(order, i64::from(k) * i64::from(j))))
}

/// Unit-modulus extension of `ψ_k` to all of `F_q`, with `ψ_k(0) = 1`.
///
/// This is the diagonal phase applied to basis vectors; using it keeps the
/// character-twisted bases unitary for every `k`.
pub fn phase_twist(field: &GaloisField, k: u32, n: FieldElement) -> Result<RootOfUnity> {
    mult_char(field, k, n).map(|v| v.unwrap_or_else(|| RootOfUnity::one(field.order() - 1)))
}

pub(crate) fn phase_twist_exponent(field: &GaloisField, k: u32, n: u32) -> u32 {
    let order = field.order() - 1;
    if n == 0 {
        0
    } else {
        ((u64::from(k) * u64::from(field.log_idx(n))) % u64::from(order)) as u32
    }
}

/// `κ̃(y) = i^tr(y)` on GR(4, m).
pub fn ring_add_char(ring: &GaloisRing, y: RingElement) -> Result<RootOfUnity> {
    Ok(RootOfUnity::new(4, i64::from(ring.trace(y)?)))
}

/// Teichmüller multiplicative character `ψ̃_k(ξ^j) = ω_{2^m-1}^(kj)`.
///
/// Off the Teichmüller units the trivial character is 1 and the others are 0.
pub fn ring_mult_char(ring: &GaloisRing, k: u32, x: RingElement) -> Result<Option<RootOfUnity>> {
    let order = ring.dimension() - 1;
    if k.is_multiple_of(order) {
        ring.teichmuller_position(x)?;
        return Ok(Some(RootOfUnity::one(order)));
    }
    Ok(match ring.teichmuller_position(x)? {
        Some(pos) if pos > 0 => Some(RootOfUnity::new(order, i64::from(k) * (pos as i64 - 1))),
        _ => None,
    })
}

/// Unit-modulus twist on `T`: `ψ̃_k` on the units and 1 at zero.
pub fn ring_phase_twist(ring: &GaloisRing, k: u32, n: RingElement) -> Result<RootOfUnity> {
    let order = ring.dimension() - 1;
    match ring.teichmuller_position(n)? {
        Some(0) => Ok(RootOfUnity::one(order)),
        Some(pos) => Ok(RootOfUnity::new(order, i64::from(k) * (pos as i64 - 1))),
        None => Err(Error::NotTeichmuller(n.index())),
    }
}

/// Weil sum `W_f = Σ_{x ∈ F_q} κ(f(x))` for `f` given by its coefficients
/// (constant term first).
///
/// For `deg f = d >= 1` with `gcd(d, q) = 1` the bound `(d - 1)√q` is attached.
pub fn weil_sum(field: &GaloisField, f: &[FieldElement]) -> Result<SumReport> {
    for &c in f {
        if !field.contains(c) {
            return Err(Error::MismatchedDescriptor);
        }
    }
    let coeffs: Vec<u32> = f.iter().map(|c| c.index()).collect();
    let p = field.characteristic();
    let mut acc = CyclotomicInt::zero(p);
    for x in 0..field.order() {
        acc.add_term(field.trace_idx(field.eval_poly_idx(&coeffs, x)), 1);
    }
    let degree = coeffs.iter().rposition(|&c| c != 0);
    let bound = match degree {
        Some(d) if d >= 1 && gcd(d as u64, u64::from(field.order())) == 1 => {
            Some((d as f64 - 1.0) * f64::from(field.order()).sqrt())
        }
        _ => None,
    };
    Ok(SumReport::new(acc, bound))
}

/// `lcm(p, q - 1)`, the common order of all field character values.
pub fn field_character_order(field: &GaloisField) -> u32 {
    lcm(u64::from(field.characteristic()), u64::from(field.order() - 1)) as u32
}

/// Gauss sum `G(ψ_k, κ) = Σ_{x ∈ F_q*} ψ_k(x) κ(x)`; with `trivial_add` the
/// additive character is replaced by `κ_0 = 1`.
///
/// The attached bound is the known magnitude: `q - 1`, `1`, `0` or `√q`.
pub fn gauss_sum(field: &GaloisField, k: u32, trivial_add: bool) -> SumReport {
    let q = field.order();
    let p = field.characteristic();
    let n = field_character_order(field);
    let mult_step = n / (q - 1);
    let add_step = n / p;
    let k = k % (q - 1);
    let mut acc = CyclotomicInt::zero(n);
    for x in 1..q {
        let mut e = u64::from(phase_twist_exponent(field, k, x)) * u64::from(mult_step);
        if !trivial_add {
            e += u64::from(field.trace_idx(x)) * u64::from(add_step);
        }
        acc.add_term((e % u64::from(n)) as u32, 1);
    }
    let bound = match (k == 0, trivial_add) {
        (true, true) => f64::from(q - 1),
        (true, false) => 1.0,
        (false, true) => 0.0,
        (false, false) => f64::from(q).sqrt(),
    };
    SumReport::new(acc, Some(bound))
}

/// Generalized sum `Σ_{x ∈ F_q} ψ_k(g(x)) κ(f(x))`, evaluated directly.
/// No bound is attached.
pub fn mixed_character_sum(field: &GaloisField, k: u32, g: &[FieldElement], f: &[FieldElement]) -> Result<SumReport> {
    for &c in g.iter().chain(f) {
        if !field.contains(c) {
            return Err(Error::MismatchedDescriptor);
        }
    }
    let g: Vec<u32> = g.iter().map(|c| c.index()).collect();
    let f: Vec<u32> = f.iter().map(|c| c.index()).collect();
    let q = field.order();
    let n = field_character_order(field);
    let k = k % (q - 1);
    let mut acc = CyclotomicInt::zero(n);
    for x in 0..q {
        let gx = field.eval_poly_idx(&g, x);
        if gx == 0 && k != 0 {
            continue;
        }
        let e = u64::from(phase_twist_exponent(field, k, gx)) * u64::from(n / (q - 1))
            + u64::from(field.trace_idx(field.eval_poly_idx(&f, x))) * u64::from(n / field.characteristic());
        acc.add_term((e % u64::from(n)) as u32, 1);
    }
    Ok(SumReport::new(acc, None))
}

/// Which magnitude the exponential sum `Γ(y)` must have.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaCase {
    /// `y = 0`: magnitude `2^m`.
    Zero,
    /// `y ∈ 2T \ {0}`: magnitude 0.
    TwiceTeichmuller,
    /// Everything else: magnitude `√(2^m)`.
    Generic,
}

impl GammaCase {
    pub fn expected_magnitude(self, m: u32) -> f64 {
        match self {
            GammaCase::Zero => f64::from(1u32 << m),
            GammaCase::TwiceTeichmuller => 0.0,
            GammaCase::Generic => f64::from(1u32 << m).sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RingSumReport {
    pub sum: SumReport,
    pub case: GammaCase,
    /// The magnitude equals the case value within [`BOUND_TOL`].
    pub case_holds: bool,
}

/// `Γ(y) = Σ_{u ∈ T} κ̃(y u)`.
pub fn ring_exp_sum(ring: &GaloisRing, y: RingElement) -> Result<RingSumReport> {
    let (a, _) = ring.decompose(y)?;
    let case = if y.is_zero() {
        GammaCase::Zero
    } else if a.is_zero() {
        GammaCase::TwiceTeichmuller
    } else {
        GammaCase::Generic
    };
    let mut acc = CyclotomicInt::zero(4);
    for j in 0..ring.dimension() as usize {
        acc.add_term(ring.trace_idx(ring.mul_idx(y.index(), ring.teich_idx(j))), 1);
    }
    let expected = case.expected_magnitude(ring.degree());
    let sum = SumReport::new(acc, Some(expected));
    let case_holds = (sum.magnitude - expected).abs() <= BOUND_TOL;
    Ok(RingSumReport { sum, case, case_holds })
}

/// `lcm(4, 2^m - 1)`, the common order of all ring character values.
pub fn ring_character_order(ring: &GaloisRing) -> u32 {
    lcm(4, u64::from(ring.dimension() - 1)) as u32
}

/// Ring Gauss sum `G_y(ψ̃_k, κ̃) = Σ_{x ∈ GR(4,m)} ψ̃_k(x) κ̃(y x)`.
///
/// `y = 0` gives the trivial additive character. The attached bound is `4^m`
/// for the doubly trivial pair, 0 for a nontrivial `ψ̃` against `κ̃_0`, and
/// `2^m` otherwise.
pub fn ring_gauss_sum(ring: &GaloisRing, k: u32, y: RingElement) -> Result<SumReport> {
    if !ring.contains(y) {
        return Err(Error::MismatchedDescriptor);
    }
    let units = ring.dimension() - 1;
    let k = k % units;
    let n = ring_character_order(ring);
    let mult_step = n / units;
    let add_step = n / 4;
    let mut acc = CyclotomicInt::zero(n);
    for x in 0..ring.size() {
        let mult = if k == 0 {
            0
        } else {
            match ring.teich_pos_idx(x) {
                Some(pos) if pos > 0 => (u64::from(k) * (pos as u64 - 1)) % u64::from(units),
                _ => continue,
            }
        };
        let add = u64::from(ring.trace_idx(ring.mul_idx(y.index(), x)));
        acc.add_term(((mult * u64::from(mult_step) + add * u64::from(add_step)) % u64::from(n)) as u32, 1);
    }
    let bound = match (k == 0, y.is_zero()) {
        (true, true) => f64::from(ring.size()),
        (false, true) => 0.0,
        _ => f64::from(ring.dimension()),
    };
    Ok(SumReport::new(acc, Some(bound)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn omega(n: u32, e: i64) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * PI * e as f64 / f64::from(n))
    }

    /// Direct floating-point Gauss sum, independent of the histogram path.
    fn gauss_direct(f: &GaloisField, k: u32, trivial_add: bool) -> Complex64 {
        let q = f.order();
        f.elements()[1..]
            .iter()
            .map(|&x| {
                let psi = omega(q - 1, i64::from(k) * i64::from(f.dlog(x).unwrap()));
                let kappa = if trivial_add {
                    Complex64::new(1.0, 0.0)
                } else {
                    omega(f.characteristic(), i64::from(f.trace(x).unwrap()))
                };
                psi * kappa
            })
            .sum()
    }

    #[test]
    fn additive_character_examples() {
        let f3 = GaloisField::new(3, 1).unwrap();
        assert_eq!(add_char(&f3, f3.zero()).unwrap(), RootOfUnity::one(3));
        let k1 = add_char(&f3, f3.one()).unwrap();
        assert!((k1.value() - omega(3, 1)).norm() < 1e-15);

        let f9 = GaloisField::new(3, 2).unwrap();
        for x in f9.elements() {
            for y in f9.elements() {
                let lhs = add_char(&f9, f9.add(x, y).unwrap()).unwrap();
                let rhs = add_char(&f9, x).unwrap() * add_char(&f9, y).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn multiplicative_character_examples() {
        let f9 = GaloisField::new(3, 2).unwrap();
        for n in f9.elements() {
            assert_eq!(mult_char(&f9, 0, n).unwrap(), Some(RootOfUnity::one(8)));
        }
        assert_eq!(mult_char(&f9, 3, f9.zero()).unwrap(), None);
        assert_eq!(phase_twist(&f9, 3, f9.zero()).unwrap(), RootOfUnity::one(8));

        let f3 = GaloisField::new(3, 1).unwrap();
        let v = mult_char(&f3, 1, f3.generator()).unwrap().unwrap();
        assert_eq!(v.value(), Complex64::new(-1.0, 0.0));

        for k in 0..8 {
            for x in &f9.elements()[1..] {
                for y in &f9.elements()[1..] {
                    let lhs = mult_char(&f9, k, f9.mul(*x, *y).unwrap()).unwrap().unwrap();
                    let rhs = mult_char(&f9, k, *x).unwrap().unwrap() * mult_char(&f9, k, *y).unwrap().unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn weil_sum_examples() {
        let f9 = GaloisField::new(3, 2).unwrap();
        let zero_poly = weil_sum(&f9, &[]).unwrap();
        assert_eq!(zero_poly.exact.as_integer(), Some(9));
        assert_eq!(zero_poly.bound, None);

        let identity = weil_sum(&f9, &[f9.zero(), f9.one()]).unwrap();
        assert!(identity.exact.is_zero());
        assert_eq!(identity.bound, Some(0.0));
        assert!(identity.bound_satisfied);
    }

    #[test]
    fn weil_bound_for_cubics_over_f25() {
        // every monic cubic x^3 + c x + d over F_25 (p = 5 does not divide 3)
        let f = GaloisField::new(5, 2).unwrap();
        let one = f.one();
        for c in f.elements() {
            for d in f.elements() {
                let r = weil_sum(&f, &[d, c, f.zero(), one]).unwrap();
                assert_eq!(r.bound, Some(10.0));
                assert!(r.bound_satisfied, "W = {} for c={c} d={d}", r.magnitude);
            }
        }
    }

    #[test]
    fn weil_histogram_matches_direct_float_sum() {
        let f = GaloisField::new(3, 3).unwrap();
        let poly = [f.element(5).unwrap(), f.element(7).unwrap(), f.element(1).unwrap()];
        let direct: Complex64 =
            f.elements().iter().map(|&x| omega(3, i64::from(f.trace(f.eval_poly(&poly, x).unwrap()).unwrap()))).sum();
        let r = weil_sum(&f, &poly).unwrap();
        assert!((r.value - direct).norm() < 1e-10);
    }

    #[test]
    fn gauss_identities() {
        for &(p, m) in &[(3, 1), (5, 1), (7, 1), (3, 2), (5, 2), (3, 3)] {
            let f = GaloisField::new(p, m).unwrap();
            let q = f.order();
            assert_eq!(gauss_sum(&f, 0, true).exact.as_integer(), Some(i64::from(q) - 1));
            assert_eq!(gauss_sum(&f, 0, false).exact.as_integer(), Some(-1));
            for k in 1..q - 1 {
                assert!(gauss_sum(&f, k, true).exact.is_zero());
                let g = gauss_sum(&f, k, false);
                assert_eq!(g.exact.norm_sqr().as_integer(), Some(i64::from(q)), "q={q} k={k}");
                assert!((g.magnitude - f64::from(q).sqrt()).abs() < 1e-9);
                assert!((g.value - gauss_direct(&f, k, false)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn quadratic_gauss_sum_over_f3() {
        // ψ_1 is the Legendre symbol for q = 3: ω - ω^2 = i√3
        let f = GaloisField::new(3, 1).unwrap();
        let g = gauss_sum(&f, 1, false);
        assert!((g.value - Complex64::new(0.0, 3f64.sqrt())).norm() < 1e-12);
    }

    #[test]
    fn mixed_sum_reduces_to_gauss_sum() {
        let f = GaloisField::new(5, 1).unwrap();
        let x = [f.zero(), f.one()];
        for k in 0..4 {
            let mixed = mixed_character_sum(&f, k, &x, &x).unwrap();
            let g = gauss_sum(&f, k, false);
            // the x = 0 term contributes ψ_0(0) κ(0) = 1 only for k = 0
            let extra = if k == 0 { 1.0 } else { 0.0 };
            assert!((mixed.value - g.value - extra).norm() < 1e-12);
            assert_eq!(mixed.bound, None);
        }
    }

    #[test]
    fn ring_exp_sum_cases() {
        let r2 = GaloisRing::new(2).unwrap();
        let zero = ring_exp_sum(&r2, r2.zero()).unwrap();
        assert_eq!(zero.case, GammaCase::Zero);
        assert_eq!(zero.sum.exact.as_integer(), Some(4));
        let two = ring_exp_sum(&r2, r2.scale(r2.one(), 2).unwrap()).unwrap();
        assert_eq!(two.case, GammaCase::TwiceTeichmuller);
        assert!(two.sum.exact.is_zero());
        let one = ring_exp_sum(&r2, r2.one()).unwrap();
        assert_eq!(one.case, GammaCase::Generic);
        assert!((one.sum.magnitude - 2.0).abs() < 1e-9);
        assert_eq!(one.sum.exact.norm_sqr().as_integer(), Some(4));
        for m in 1..=3 {
            let r = GaloisRing::new(m).unwrap();
            for y in r.elements() {
                assert!(ring_exp_sum(&r, y).unwrap().case_holds);
            }
        }
    }

    #[test]
    fn ring_gauss_identities() {
        for m in 1..=3 {
            let r = GaloisRing::new(m).unwrap();
            let size = i64::from(r.size());
            let units = r.dimension() - 1;
            assert_eq!(ring_gauss_sum(&r, 0, r.zero()).unwrap().exact.as_integer(), Some(size));
            for k in 1..units {
                assert!(ring_gauss_sum(&r, k, r.zero()).unwrap().exact.is_zero());
                for y in r.elements() {
                    let g = ring_gauss_sum(&r, k, y).unwrap();
                    assert!(g.bound_satisfied, "m={m} k={k} y={y}: {}", g.magnitude);
                }
            }
        }
    }

    #[test]
    fn ring_characters() {
        let r = GaloisRing::new(2).unwrap();
        assert_eq!(ring_add_char(&r, r.one()).unwrap(), RootOfUnity::new(4, 2));
        let xi = r.xi();
        assert_eq!(ring_mult_char(&r, 1, xi).unwrap(), Some(RootOfUnity::new(3, 1)));
        assert_eq!(ring_mult_char(&r, 1, r.zero()).unwrap(), None);
        assert_eq!(ring_mult_char(&r, 0, r.zero()).unwrap(), Some(RootOfUnity::one(3)));
        let two = r.scale(r.one(), 2).unwrap();
        assert_eq!(ring_mult_char(&r, 2, two).unwrap(), None);
        assert_eq!(ring_phase_twist(&r, 2, two), Err(Error::NotTeichmuller(two.index())));
        assert_eq!(ring_phase_twist(&r, 2, r.zero()).unwrap(), RootOfUnity::one(3));
    }
}
