//! Exact arithmetic in GF(p^m).
//!
//! Elements are residues of polynomials over `Z_p` modulo a monic irreducible
//! polynomial of degree `m`. Every element has a canonical integer index
//! `idx(x) = sum_i c_i p^i`, which is also the computational-basis ket label
//! used throughout the crate. Multiplication goes through exp/log tables
//! built once from a primitive element; addition is digit-wise mod `p`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly;

/// Largest field order accepted by [`GaloisField::new`].
pub const MAX_FIELD_ORDER: u32 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct FieldId(u64);

/// An element of a particular [`GaloisField`].
///
/// Elements are small copyable handles; they remember which field produced
/// them so that mixing elements of different fields is reported as an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    idx: u32,
    field: FieldId,
}

impl FieldElement {
    /// Canonical base-`p` index of the element.
    pub fn index(self) -> u32 {
        self.idx
    }

    pub fn is_zero(self) -> bool {
        self.idx == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.idx)
    }
}

/// Serialized form of a field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub m: u32,
    /// Modulus coefficients, constant term first, including the leading 1.
    pub modulus_coeffs: Vec<u32>,
    /// Coefficients of the primitive element, constant term first.
    pub generator_coeffs: Vec<u32>,
}

struct Tables {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: u32,
    /// exp[j] = idx(g^j) for j in [0, q-1)
    exp: Vec<u32>,
    /// log[idx(x)] = j with g^j = x; log[0] is unused
    log: Vec<u32>,
    trace: Vec<u32>,
    id: FieldId,
}

/// The finite field GF(p^m) together with its lookup tables.
///
/// Cloning is cheap; the tables are shared.
#[derive(Clone)]
pub struct GaloisField(Arc<Tables>);

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaloisField")
            .field("p", &self.0.p)
            .field("m", &self.0.m)
            .field("modulus", &self.0.modulus)
            .field("generator", &self.0.generator)
            .finish()
    }
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}

impl Eq for GaloisField {}

fn check_order(p: u32, m: u32) -> Result<u32> {
    if !poly::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if m == 0 {
        return Err(Error::InvalidDegree(m));
    }
    let q = u64::from(p).checked_pow(m).unwrap_or(u64::MAX);
    if q > u64::from(MAX_FIELD_ORDER) {
        return Err(Error::FieldTooLarge { p, m, max: MAX_FIELD_ORDER });
    }
    Ok(q as u32)
}

/// True when the monic `modulus` of degree `m` has no monic factor of degree
/// `1..=m/2` over `Z_p`.
pub(crate) fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let m = modulus.len() - 1;
    for d in 1..=m / 2 {
        let count = p.pow(d as u32);
        for tail in 0..count {
            let mut factor = poly::to_digits(tail, p, d);
            factor.push(1);
            if poly::rem(modulus, &factor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible polynomial of degree `m` over `Z_p`, comparing
/// coefficient tuples lexicographically with the constant term first.
pub fn smallest_irreducible(p: u32, m: u32) -> Result<Vec<u32>> {
    let q = check_order(p, m)?;
    for t in 0..q {
        // c_0 is the most significant position of the lexicographic order
        let mut coeffs: Vec<u32> = poly::to_digits(t, p, m as usize);
        coeffs.reverse();
        coeffs.push(1);
        if is_irreducible(&coeffs, p) {
            return Ok(coeffs);
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over Z_p")
}

impl GaloisField {
    /// GF(p^m) with the default modulus from [`smallest_irreducible`].
    pub fn new(p: u32, m: u32) -> Result<Self> {
        let modulus = smallest_irreducible(p, m)?;
        Self::build(p, m, modulus, None)
    }

    /// GF(p^m) with a caller-supplied monic modulus (constant term first,
    /// leading 1 included).
    pub fn with_modulus(p: u32, m: u32, modulus: &[u32]) -> Result<Self> {
        check_order(p, m)?;
        if modulus.len() != m as usize + 1 || modulus[m as usize] != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidModulus(modulus.to_vec()));
        }
        if !is_irreducible(modulus, p) {
            return Err(Error::ReducibleModulus(modulus.to_vec()));
        }
        Self::build(p, m, modulus.to_vec(), None)
    }

    pub fn from_descriptor(d: &FieldDescriptor) -> Result<Self> {
        let field = Self::with_modulus(d.p, d.m, &d.modulus_coeffs)?;
        if d.generator_coeffs.len() > d.m as usize || d.generator_coeffs.iter().any(|&c| c >= d.p) {
            return Err(Error::InvalidParameter(format!("generator coefficients {:?}", d.generator_coeffs)));
        }
        let g = poly::from_digits(&d.generator_coeffs, d.p);
        if g == field.0.generator {
            return Ok(field);
        }
        Self::build(d.p, d.m, d.modulus_coeffs.clone(), Some(g))
    }

    fn build(p: u32, m: u32, modulus: Vec<u32>, generator: Option<u32>) -> Result<Self> {
        let q = check_order(p, m)?;
        let md = m as usize;
        let mul_poly = |a: u32, b: u32| -> u32 {
            let prod = poly::mul_reduce(&poly::to_digits(a, p, md), &poly::to_digits(b, p, md), &modulus, p);
            poly::from_digits(&prod, p)
        };
        let powers_of = |g: u32| -> Option<Vec<u32>> {
            let mut powers = Vec::with_capacity(q as usize - 1);
            let mut x = 1u32;
            loop {
                powers.push(x);
                x = mul_poly(x, g);
                if x == 1 {
                    break;
                }
                if powers.len() >= q as usize - 1 {
                    return None;
                }
            }
            (powers.len() == q as usize - 1).then_some(powers)
        };

        let (generator, exp) = match generator {
            Some(g) => {
                if g == 0 || g >= q {
                    return Err(Error::NotPrimitive(g));
                }
                (g, powers_of(g).ok_or(Error::NotPrimitive(g))?)
            }
            None => (1..q)
                .find_map(|g| powers_of(g).map(|e| (g, e)))
                .expect("the multiplicative group of a finite field is cyclic"),
        };
        let mut log = vec![0u32; q as usize];
        for (j, &x) in exp.iter().enumerate() {
            log[x as usize] = j as u32;
        }

        let modulus_idx = poly::from_digits(&modulus[..md], p);
        let id = FieldId(u64::from(p) | (u64::from(m) << 20) | (u64::from(modulus_idx) << 26));
        let mut tables = Tables { p, m, q, modulus, generator, exp, log, trace: Vec::new(), id };
        let trace: Vec<u32> = (0..q)
            .map(|x| {
                let mut acc = 0;
                let mut y = x;
                for _ in 0..m {
                    acc = add_raw(&tables, acc, y);
                    y = pow_raw(&tables, y, u64::from(p));
                }
                debug_assert!(acc < p, "trace must land in the prime field");
                acc
            })
            .collect();
        tables.trace = trace;
        Ok(GaloisField(Arc::new(tables)))
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.0.p,
            m: self.0.m,
            modulus_coeffs: self.0.modulus.clone(),
            generator_coeffs: poly::to_digits(self.0.generator, self.0.p, self.0.m as usize),
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.m
    }

    /// Number of elements `q = p^m`.
    pub fn order(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn generator(&self) -> FieldElement {
        self.wrap(self.0.generator)
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(0)
    }

    pub fn one(&self) -> FieldElement {
        self.wrap(1)
    }

    pub fn element(&self, idx: u32) -> Result<FieldElement> {
        if idx >= self.0.q {
            return Err(Error::ElementOutOfRange { index: u64::from(idx), size: u64::from(self.0.q) });
        }
        Ok(self.wrap(idx))
    }

    /// Element from polynomial coefficients (constant term first), reduced mod `p`.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.0.m as usize {
            return Err(Error::InvalidParameter(format!(
                "{} coefficients for a degree-{} extension",
                coeffs.len(),
                self.0.m
            )));
        }
        let reduced: Vec<u32> = coeffs.iter().map(|c| c % self.0.p).collect();
        Ok(self.wrap(poly::from_digits(&reduced, self.0.p)))
    }

    pub fn coeffs(&self, x: FieldElement) -> Result<Vec<u32>> {
        self.check(x)?;
        Ok(poly::to_digits(x.idx, self.0.p, self.0.m as usize))
    }

    /// All elements in canonical order; position `i` holds the element with index `i`.
    pub fn elements(&self) -> Vec<FieldElement> {
        (0..self.0.q).map(|i| self.wrap(i)).collect()
    }

    pub fn contains(&self, x: FieldElement) -> bool {
        x.field == self.0.id
    }

    pub fn add(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.wrap(self.add_idx(x.idx, y.idx)))
    }

    pub fn sub(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.wrap(self.sub_idx(x.idx, y.idx)))
    }

    pub fn neg(&self, x: FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        Ok(self.wrap(self.neg_idx(x.idx)))
    }

    pub fn mul(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.wrap(self.mul_idx(x.idx, y.idx)))
    }

    pub fn pow(&self, x: FieldElement, e: u64) -> Result<FieldElement> {
        self.check(x)?;
        Ok(self.wrap(pow_raw(&self.0, x.idx, e)))
    }

    pub fn inv(&self, x: FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        if x.idx == 0 {
            return Err(Error::ZeroInverse);
        }
        let n = self.0.q - 1;
        Ok(self.wrap(self.0.exp[((n - self.0.log[x.idx as usize]) % n) as usize]))
    }

    /// Absolute trace `x + x^p + ... + x^(p^(m-1))`, as an integer in `[0, p)`.
    pub fn trace(&self, x: FieldElement) -> Result<u32> {
        self.check(x)?;
        Ok(self.trace_idx(x.idx))
    }

    /// Discrete logarithm to the base of [`GaloisField::generator`].
    pub fn dlog(&self, x: FieldElement) -> Result<u32> {
        self.check(x)?;
        if x.idx == 0 {
            return Err(Error::ZeroLogarithm);
        }
        Ok(self.0.log[x.idx as usize])
    }

    /// Horner evaluation of a polynomial with coefficients in this field
    /// (constant term first).
    pub fn eval_poly(&self, coeffs: &[FieldElement], x: FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        for &c in coeffs {
            self.check(c)?;
        }
        let idx: Vec<u32> = coeffs.iter().map(|c| c.idx).collect();
        Ok(self.wrap(self.eval_poly_idx(&idx, x.idx)))
    }

    fn wrap(&self, idx: u32) -> FieldElement {
        FieldElement { idx, field: self.0.id }
    }

    fn check(&self, x: FieldElement) -> Result<()> {
        if x.field != self.0.id {
            return Err(Error::MismatchedDescriptor);
        }
        Ok(())
    }

    pub(crate) fn add_idx(&self, a: u32, b: u32) -> u32 {
        add_raw(&self.0, a, b)
    }

    pub(crate) fn neg_idx(&self, a: u32) -> u32 {
        let p = self.0.p;
        let (mut a, mut out, mut place) = (a, 0, 1);
        for _ in 0..self.0.m {
            let d = a % p;
            out += ((p - d) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    pub(crate) fn sub_idx(&self, a: u32, b: u32) -> u32 {
        self.add_idx(a, self.neg_idx(b))
    }

    pub(crate) fn mul_idx(&self, a: u32, b: u32) -> u32 {
        mul_raw(&self.0, a, b)
    }

    pub(crate) fn trace_idx(&self, a: u32) -> u32 {
        self.0.trace[a as usize]
    }

    pub(crate) fn log_idx(&self, a: u32) -> u32 {
        self.0.log[a as usize]
    }

    pub(crate) fn eval_poly_idx(&self, coeffs: &[u32], x: u32) -> u32 {
        coeffs.iter().rev().fold(0, |acc, &c| self.add_idx(self.mul_idx(acc, x), c))
    }
}

fn add_raw(t: &Tables, a: u32, b: u32) -> u32 {
    let p = t.p;
    if p == 2 {
        return a ^ b;
    }
    let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
    for _ in 0..t.m {
        out += ((a % p + b % p) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

fn mul_raw(t: &Tables, a: u32, b: u32) -> u32 {
    if a == 0 || b == 0 {
        return 0;
    }
    let n = t.q - 1;
    t.exp[((t.log[a as usize] + t.log[b as usize]) % n) as usize]
}

fn pow_raw(t: &Tables, base: u32, mut e: u64) -> u32 {
    let mut acc = 1;
    let mut b = base;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_raw(t, acc, b);
        }
        b = mul_raw(t, b, b);
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Multiplication straight from polynomial arithmetic, bypassing the tables.
    fn mul_by_polys(f: &GaloisField, a: u32, b: u32) -> u32 {
        let (p, m) = (f.characteristic(), f.degree() as usize);
        let prod = poly::mul_reduce(&poly::to_digits(a, p, m), &poly::to_digits(b, p, m), f.modulus(), p);
        poly::from_digits(&prod, p)
    }

    const SMALL: &[(u32, u32)] = &[(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 2), (3, 4)];

    #[test]
    fn prime_field_defaults() {
        let f2 = GaloisField::new(2, 1).unwrap();
        assert_eq!(f2.modulus(), &[0, 1]);
        assert_eq!(f2.order(), 2);

        let f5 = GaloisField::new(5, 1).unwrap();
        assert_eq!(f5.dlog(f5.generator()).unwrap(), 1);
        assert_eq!(f5.pow(f5.generator(), 4).unwrap(), f5.one());
        assert_ne!(f5.pow(f5.generator(), 2).unwrap(), f5.one());
    }

    #[test]
    fn gf9_default_modulus_matches_exhaustive_scan() {
        // Oracle: brute-force root search over all 9 monic quadratics in
        // constant-first lexicographic order.
        let mut first = None;
        'scan: for c0 in 0..3u32 {
            for c1 in 0..3u32 {
                let has_root = (0..3u32).any(|x| (x * x + c1 * x + c0) % 3 == 0);
                if !has_root {
                    first = Some(vec![c0, c1, 1]);
                    break 'scan;
                }
            }
        }
        let f9 = GaloisField::new(3, 2).unwrap();
        assert_eq!(Some(f9.modulus().to_vec()), first);
        assert_eq!(f9.modulus(), &[1, 0, 1]);
        assert_eq!(f9.elements().len(), 9);
        // x + 1 is the first element of order 8 under x^2 + 1
        assert_eq!(f9.generator().index(), 4);
    }

    #[test]
    fn reducible_modulus_is_rejected() {
        // x^2 + 2 = (x + 1)(x + 2) over Z_3
        assert_eq!(GaloisField::with_modulus(3, 2, &[2, 0, 1]).unwrap_err(), Error::ReducibleModulus(vec![2, 0, 1]));
        assert!(matches!(GaloisField::new(4, 1), Err(Error::NotPrime(4))));
        assert!(matches!(GaloisField::new(3, 0), Err(Error::InvalidDegree(0))));
        assert!(matches!(GaloisField::with_modulus(3, 2, &[1, 0, 2]), Err(Error::InvalidModulus(_))));
    }

    #[test]
    fn alternative_modulus_is_honoured() {
        let f = GaloisField::with_modulus(3, 2, &[2, 1, 1]).unwrap();
        assert_eq!(f.modulus(), &[2, 1, 1]);
        for a in 0..9 {
            for b in 0..9 {
                assert_eq!(f.mul_idx(a, b), mul_by_polys(&f, a, b));
            }
        }
    }

    #[test]
    fn tables_agree_with_polynomial_multiplication() {
        for &(p, m) in SMALL {
            let f = GaloisField::new(p, m).unwrap();
            for a in 0..f.order() {
                for b in 0..f.order() {
                    assert_eq!(f.mul_idx(a, b), mul_by_polys(&f, a, b), "GF({p}^{m}) {a}*{b}");
                }
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for &(p, m) in SMALL {
            let f = GaloisField::new(p, m).unwrap();
            let q = f.order();
            for a in 0..q {
                assert_eq!(f.add_idx(a, f.neg_idx(a)), 0);
                if a != 0 {
                    let inv = f.inv(f.element(a).unwrap()).unwrap().index();
                    assert_eq!(f.mul_idx(a, inv), 1);
                }
                for b in 0..q {
                    assert_eq!(f.add_idx(a, b), f.add_idx(b, a));
                    assert_eq!(f.mul_idx(a, b), f.mul_idx(b, a));
                    for c in 0..q {
                        assert_eq!(f.add_idx(f.add_idx(a, b), c), f.add_idx(a, f.add_idx(b, c)));
                        assert_eq!(f.mul_idx(f.mul_idx(a, b), c), f.mul_idx(a, f.mul_idx(b, c)));
                        assert_eq!(f.mul_idx(a, f.add_idx(b, c)), f.add_idx(f.mul_idx(a, b), f.mul_idx(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_fixed_point() {
        for &(p, m) in SMALL {
            let f = GaloisField::new(p, m).unwrap();
            for x in f.elements() {
                assert_eq!(f.pow(x, u64::from(f.order())).unwrap(), x);
            }
        }
    }

    #[test]
    fn identities_and_gf4_generator_order() {
        let f4 = GaloisField::new(2, 2).unwrap();
        let g = f4.generator();
        assert_eq!(f4.pow(g, 3).unwrap(), f4.one());
        for x in f4.elements() {
            assert_eq!(f4.add(x, f4.zero()).unwrap(), x);
            assert_eq!(f4.mul(x, f4.one()).unwrap(), x);
        }
    }

    #[test]
    fn trace_values() {
        let f3 = GaloisField::new(3, 1).unwrap();
        for x in f3.elements() {
            assert_eq!(f3.trace(x).unwrap(), x.index());
        }
        let f4 = GaloisField::new(2, 2).unwrap();
        assert_eq!(f4.trace(f4.one()).unwrap(), 0);
    }

    #[test]
    fn trace_is_linear_and_balanced() {
        for &(p, m) in SMALL {
            let f = GaloisField::new(p, m).unwrap();
            let q = f.order();
            let mut fibers = vec![0u32; p as usize];
            for a in 0..q {
                fibers[f.trace_idx(a) as usize] += 1;
                for b in 0..q {
                    assert_eq!(f.trace_idx(f.add_idx(a, b)), (f.trace_idx(a) + f.trace_idx(b)) % p);
                }
            }
            assert!(fibers.iter().all(|&c| c == q / p), "GF({p}^{m}) fibers {fibers:?}");
        }
    }

    #[test]
    fn dlog_is_a_bijection_on_gf9() {
        let f9 = GaloisField::new(3, 2).unwrap();
        assert_eq!(f9.dlog(f9.one()).unwrap(), 0);
        assert_eq!(f9.dlog(f9.generator()).unwrap(), 1);
        let mut logs: Vec<u32> = f9.elements()[1..].iter().map(|&x| f9.dlog(x).unwrap()).collect();
        logs.sort_unstable();
        assert_eq!(logs, (0..8).collect::<Vec<_>>());
        for x in &f9.elements()[1..] {
            assert_eq!(f9.pow(f9.generator(), u64::from(f9.dlog(*x).unwrap())).unwrap(), *x);
        }
        assert_eq!(f9.dlog(f9.zero()), Err(Error::ZeroLogarithm));
    }

    #[test]
    fn enumeration_is_canonical() {
        let f3 = GaloisField::new(3, 1).unwrap();
        let idx: Vec<u32> = f3.elements().iter().map(|x| x.index()).collect();
        assert_eq!(idx, vec![0, 1, 2]);

        // base-p carries: index arithmetic is not field addition in GF(9)
        let f9 = GaloisField::new(3, 2).unwrap();
        let counterexample =
            (0..9u32).flat_map(|a| (0..9u32).map(move |b| (a, b))).find(|&(a, b)| (a + b) % 9 != f9.add_idx(a, b));
        assert_eq!(counterexample, Some((1, 2)));
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let f9 = GaloisField::new(3, 2).unwrap();
        let f9b = GaloisField::with_modulus(3, 2, &[2, 1, 1]).unwrap();
        let x = f9.one();
        let y = f9b.one();
        assert_eq!(f9.add(x, y), Err(Error::MismatchedDescriptor));
        assert_eq!(f9.mul(x, y), Err(Error::MismatchedDescriptor));
        assert!(!f9.contains(y));
    }

    #[test]
    fn descriptor_json_round_trip() {
        let f = GaloisField::new(5, 2).unwrap();
        let json = serde_json::to_string(&f.descriptor()).unwrap();
        assert!(json.starts_with("{\"p\":5,\"m\":2,\"modulus_coeffs\":"));
        let back: FieldDescriptor = serde_json::from_str(&json).unwrap();
        assert_eq!(GaloisField::from_descriptor(&back).unwrap(), f);
    }

    #[test]
    fn descriptor_with_other_generator() {
        let f = GaloisField::new(3, 2).unwrap();
        let mut d = f.descriptor();
        // x + 2 is also primitive under x^2 + 1
        d.generator_coeffs = vec![2, 1];
        let g = GaloisField::from_descriptor(&d).unwrap();
        assert_eq!(g.generator().index(), 5);
        d.generator_coeffs = vec![0, 1]; // x has order 4
        assert_eq!(GaloisField::from_descriptor(&d).unwrap_err(), Error::NotPrimitive(3));
    }
}
