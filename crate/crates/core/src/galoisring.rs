//! The Galois ring GR(4, m) = Z_4[x] / (h(x)).
//!
//! `h` is the Hensel lift to `Z_4` of a primitive binary polynomial, so its
//! root `xi` has multiplicative order `2^m - 1`. The Teichmüller set
//! `T = (0, 1, xi, ..., xi^(2^m - 2))` gives every element a unique 2-adic
//! expansion `y = a + 2b` with `a, b` in `T`. Elements are indexed by their
//! base-4 coefficient encoding.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finitefield::is_irreducible;
use crate::poly;

pub const MAX_RING_DEGREE: u32 = 8;

const NOT_TEICHMULLER: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct RingId(u64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingElement {
    idx: u32,
    ring: RingId,
}

impl RingElement {
    /// Base-4 coefficient index.
    pub fn index(self) -> u32 {
        self.idx
    }

    pub fn is_zero(self) -> bool {
        self.idx == 0
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.idx)
    }
}

/// Serialized form of a ring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingDescriptor {
    pub m: u32,
    /// `h` over `Z_4`, constant term first, leading 1 included.
    pub h_coeffs: Vec<u32>,
    /// Element indices of `T` in ket order `(0, 1, xi, xi^2, ...)`.
    pub teichmuller_indices: Vec<u32>,
}

struct RingTables {
    m: u32,
    size: u32,
    h: Vec<u32>,
    binary: Vec<u32>,
    xi: u32,
    teich: Vec<u32>,
    teich_pos: Vec<u32>,
    id: RingId,
}

#[derive(Clone)]
pub struct GaloisRing(Arc<RingTables>);

impl fmt::Debug for GaloisRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaloisRing").field("m", &self.0.m).field("h", &self.0.h).finish()
    }
}

impl PartialEq for GaloisRing {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}

impl Eq for GaloisRing {}

/// Multiplicative order of `x` modulo a binary polynomial, if `x` is a unit.
fn order_of_x(binary: &[u32]) -> Option<u32> {
    let m = binary.len() - 1;
    if binary[0] == 0 {
        return None;
    }
    let one = poly::to_digits(1, 2, m);
    let x = poly::rem(&[0, 1], binary, 2);
    let mut xp = x.clone();
    xp.resize(m, 0);
    let mut acc = xp.clone();
    for k in 1..=(1u32 << m) {
        if acc == one {
            return Some(k);
        }
        acc = poly::mul_reduce(&acc, &xp, binary, 2);
    }
    None
}

/// Smallest primitive binary polynomial of degree `m`, ordered by its integer
/// encoding `sum c_i 2^i`.
pub fn smallest_primitive_binary(m: u32) -> Result<Vec<u32>> {
    if m == 0 || m > MAX_RING_DEGREE {
        return Err(Error::InvalidDegree(m));
    }
    let target = (1u32 << m) - 1;
    for t in 0..(1u32 << m) {
        let mut coeffs = poly::to_digits(t, 2, m as usize);
        coeffs.push(1);
        if is_irreducible(&coeffs, 2) && order_of_x(&coeffs) == Some(target) {
            return Ok(coeffs);
        }
    }
    unreachable!("primitive polynomials exist in every degree")
}

/// Hensel lift of a primitive binary polynomial to the basic primitive
/// polynomial over `Z_4` that divides `x^(2^m - 1) - 1`.
///
/// Uses the Graeffe squaring step: writing `f = e - o` with `e` the even-degree
/// part and `o` the odd-degree part, the lift satisfies
/// `h(x^2) = (-1)^m (e(x)^2 - o(x)^2)` mod 4.
pub fn hensel_lift(binary: &[u32]) -> Vec<u32> {
    let m = binary.len() - 1;
    let even: Vec<u32> = binary.iter().enumerate().map(|(i, &c)| if i % 2 == 0 { c } else { 0 }).collect();
    let odd: Vec<u32> = binary.iter().enumerate().map(|(i, &c)| if i % 2 == 1 { c } else { 0 }).collect();
    let e2 = poly::mul_full(&even, &even, 4);
    let o2 = poly::mul_full(&odd, &odd, 4);
    let sign = if m.is_multiple_of(2) { 1 } else { 3 };
    (0..=m)
        .map(|i| {
            let diff = (e2[2 * i] + 4 - o2[2 * i]) % 4;
            (diff * sign) % 4
        })
        .collect()
}

/// `x^n - 1` over `Z_4`.
pub(crate) fn x_pow_minus_one(n: usize) -> Vec<u32> {
    let mut v = vec![0u32; n + 1];
    v[0] = 3;
    v[n] = 1;
    v
}

impl GaloisRing {
    pub fn new(m: u32) -> Result<Self> {
        let binary = smallest_primitive_binary(m)?;
        let h = hensel_lift(&binary);
        Self::build(m, binary, h)
    }

    pub fn from_descriptor(d: &RingDescriptor) -> Result<Self> {
        if d.m == 0 || d.m > MAX_RING_DEGREE {
            return Err(Error::InvalidDegree(d.m));
        }
        let md = d.m as usize;
        if d.h_coeffs.len() != md + 1 || d.h_coeffs[md] != 1 || d.h_coeffs.iter().any(|&c| c > 3) {
            return Err(Error::InvalidModulus(d.h_coeffs.clone()));
        }
        let binary: Vec<u32> = d.h_coeffs.iter().map(|c| c % 2).collect();
        if !is_irreducible(&binary, 2) || order_of_x(&binary) != Some((1 << d.m) - 1) {
            return Err(Error::ReducibleModulus(d.h_coeffs.clone()));
        }
        let ring = Self::build(d.m, binary, d.h_coeffs.clone())?;
        if ring.0.teich != d.teichmuller_indices {
            return Err(Error::InvalidParameter("Teichmüller indices do not match the powers of the root".into()));
        }
        Ok(ring)
    }

    fn build(m: u32, binary: Vec<u32>, h: Vec<u32>) -> Result<Self> {
        let md = m as usize;
        let n = (1usize << m) - 1;
        if !poly::rem(&x_pow_minus_one(n), &h, 4).is_empty() {
            return Err(Error::InvalidModulus(h));
        }
        let size = 1u32 << (2 * m);
        let h_idx = poly::from_digits(&h[..md], 4);
        let id = RingId(u64::from(m) | (u64::from(h_idx) << 8));
        let mut tables = RingTables {
            m,
            size,
            h,
            binary,
            xi: 0,
            teich: Vec::new(),
            teich_pos: vec![NOT_TEICHMULLER; size as usize],
            id,
        };
        let mut xi = poly::rem(&[0, 1], &tables.h, 4);
        xi.resize(md, 0);
        let xi = poly::from_digits(&xi, 4);

        let mut teich = vec![0u32, 1];
        let mut acc = 1u32;
        for _ in 1..n {
            acc = mul_raw(&tables, acc, xi);
            teich.push(acc);
        }
        debug_assert_eq!(mul_raw(&tables, acc, xi), 1);
        for (pos, &t) in teich.iter().enumerate() {
            if tables.teich_pos[t as usize] != NOT_TEICHMULLER {
                return Err(Error::InvalidModulus(tables.h.clone()));
            }
            tables.teich_pos[t as usize] = pos as u32;
        }
        tables.teich = teich;
        tables.xi = xi;
        Ok(GaloisRing(Arc::new(tables)))
    }

    pub fn descriptor(&self) -> RingDescriptor {
        RingDescriptor { m: self.0.m, h_coeffs: self.0.h.clone(), teichmuller_indices: self.0.teich.clone() }
    }

    pub fn degree(&self) -> u32 {
        self.0.m
    }

    /// Number of ring elements, `4^m`.
    pub fn size(&self) -> u32 {
        self.0.size
    }

    /// Number of Teichmüller elements, `2^m` (the Hilbert-space dimension).
    pub fn dimension(&self) -> u32 {
        1 << self.0.m
    }

    /// The basic primitive polynomial over `Z_4`, constant term first.
    pub fn h(&self) -> &[u32] {
        &self.0.h
    }

    /// Its reduction mod 2.
    pub fn binary_polynomial(&self) -> &[u32] {
        &self.0.binary
    }

    pub fn xi(&self) -> RingElement {
        self.wrap(self.0.xi)
    }

    pub fn zero(&self) -> RingElement {
        self.wrap(0)
    }

    pub fn one(&self) -> RingElement {
        self.wrap(1)
    }

    pub fn element(&self, idx: u32) -> Result<RingElement> {
        if idx >= self.0.size {
            return Err(Error::ElementOutOfRange { index: u64::from(idx), size: u64::from(self.0.size) });
        }
        Ok(self.wrap(idx))
    }

    /// Element from coefficients over `Z_4` (constant term first), reduced mod 4.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<RingElement> {
        if coeffs.len() > self.0.m as usize {
            return Err(Error::InvalidParameter(format!("{} coefficients for GR(4, {})", coeffs.len(), self.0.m)));
        }
        let reduced: Vec<u32> = coeffs.iter().map(|c| c % 4).collect();
        Ok(self.wrap(poly::from_digits(&reduced, 4)))
    }

    pub fn coeffs(&self, y: RingElement) -> Result<Vec<u32>> {
        self.check(y)?;
        Ok(poly::to_digits(y.idx, 4, self.0.m as usize))
    }

    pub fn elements(&self) -> Vec<RingElement> {
        (0..self.0.size).map(|i| self.wrap(i)).collect()
    }

    /// `T` in ket order: position `j` holds `n_j` with `n_0 = 0`, `n_j = xi^(j-1)`.
    pub fn teichmuller(&self) -> Vec<RingElement> {
        self.0.teich.iter().map(|&t| self.wrap(t)).collect()
    }

    pub fn teichmuller_element(&self, j: usize) -> Result<RingElement> {
        self.0
            .teich
            .get(j)
            .map(|&t| self.wrap(t))
            .ok_or(Error::ElementOutOfRange { index: j as u64, size: self.0.teich.len() as u64 })
    }

    /// Ket position of `y` within `T`, if `y` is a Teichmüller element.
    pub fn teichmuller_position(&self, y: RingElement) -> Result<Option<usize>> {
        self.check(y)?;
        Ok(self.teich_pos_idx(y.idx))
    }

    pub fn contains(&self, y: RingElement) -> bool {
        y.ring == self.0.id
    }

    pub fn add(&self, x: RingElement, y: RingElement) -> Result<RingElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.wrap(self.add_idx(x.idx, y.idx)))
    }

    pub fn sub(&self, x: RingElement, y: RingElement) -> Result<RingElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.wrap(self.add_idx(x.idx, self.scale_idx(y.idx, 3))))
    }

    pub fn neg(&self, x: RingElement) -> Result<RingElement> {
        self.check(x)?;
        Ok(self.wrap(self.scale_idx(x.idx, 3)))
    }

    pub fn mul(&self, x: RingElement, y: RingElement) -> Result<RingElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.wrap(self.mul_idx(x.idx, y.idx)))
    }

    /// Multiplication by an integer from the base ring `Z_4`.
    pub fn scale(&self, x: RingElement, c: u32) -> Result<RingElement> {
        self.check(x)?;
        Ok(self.wrap(self.scale_idx(x.idx, c)))
    }

    pub fn pow(&self, x: RingElement, e: u64) -> Result<RingElement> {
        self.check(x)?;
        Ok(self.wrap(self.pow_idx(x.idx, e)))
    }

    /// 2-adic expansion `y = a + 2b`, `a, b` in `T`, with `a = y^(2^m)`.
    pub fn decompose(&self, y: RingElement) -> Result<(RingElement, RingElement)> {
        self.check(y)?;
        let (a, b) = self.decompose_idx(y.idx);
        Ok((self.wrap(a), self.wrap(b)))
    }

    /// Frobenius automorphism `a + 2b -> a^2 + 2b^2`.
    pub fn frobenius(&self, y: RingElement) -> Result<RingElement> {
        self.check(y)?;
        Ok(self.wrap(self.frobenius_idx(y.idx)))
    }

    /// Generalized trace to `Z_4`: the sum of the `m` Frobenius conjugates.
    pub fn trace(&self, y: RingElement) -> Result<u32> {
        self.check(y)?;
        Ok(self.trace_idx(y.idx))
    }

    fn wrap(&self, idx: u32) -> RingElement {
        RingElement { idx, ring: self.0.id }
    }

    fn check(&self, y: RingElement) -> Result<()> {
        if y.ring != self.0.id {
            return Err(Error::MismatchedDescriptor);
        }
        Ok(())
    }

    pub(crate) fn teich_idx(&self, j: usize) -> u32 {
        self.0.teich[j]
    }

    pub(crate) fn teich_pos_idx(&self, idx: u32) -> Option<usize> {
        match self.0.teich_pos[idx as usize] {
            NOT_TEICHMULLER => None,
            pos => Some(pos as usize),
        }
    }

    pub(crate) fn add_idx(&self, a: u32, b: u32) -> u32 {
        let mut out = 0;
        for i in 0..self.0.m {
            let s = 2 * i;
            out |= ((((a >> s) & 3) + ((b >> s) & 3)) & 3) << s;
        }
        out
    }

    pub(crate) fn scale_idx(&self, a: u32, c: u32) -> u32 {
        let mut out = 0;
        for i in 0..self.0.m {
            let s = 2 * i;
            out |= ((((a >> s) & 3) * (c % 4)) & 3) << s;
        }
        out
    }

    pub(crate) fn mul_idx(&self, a: u32, b: u32) -> u32 {
        mul_raw(&self.0, a, b)
    }

    pub(crate) fn pow_idx(&self, base: u32, mut e: u64) -> u32 {
        let mut acc = 1;
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_idx(acc, b);
            }
            b = self.mul_idx(b, b);
            e >>= 1;
        }
        acc
    }

    pub(crate) fn decompose_idx(&self, y: u32) -> (u32, u32) {
        let e = 1u64 << self.0.m;
        let a = self.pow_idx(y, e);
        let diff = self.add_idx(y, self.scale_idx(a, 3));
        let mut half = 0;
        for i in 0..self.0.m {
            let s = 2 * i;
            let c = (diff >> s) & 3;
            debug_assert_eq!(c % 2, 0, "y - y^(2^m) must be divisible by 2");
            half |= (c / 2) << s;
        }
        (a, self.pow_idx(half, e))
    }

    pub(crate) fn frobenius_idx(&self, y: u32) -> u32 {
        let (a, b) = self.decompose_idx(y);
        self.add_idx(self.mul_idx(a, a), self.scale_idx(self.mul_idx(b, b), 2))
    }

    pub(crate) fn trace_idx(&self, y: u32) -> u32 {
        let mut acc = 0;
        let mut z = y;
        for _ in 0..self.0.m {
            acc = self.add_idx(acc, z);
            z = self.frobenius_idx(z);
        }
        debug_assert!(acc < 4, "trace must land in Z_4");
        acc
    }
}

fn mul_raw(t: &RingTables, a: u32, b: u32) -> u32 {
    let md = t.m as usize;
    let prod = poly::mul_reduce(&poly::to_digits(a, 4, md), &poly::to_digits(b, 4, md), &t.h, 4);
    poly::from_digits(&prod, 4)
}
