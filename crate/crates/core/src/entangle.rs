//! Generalized Bell states from Fourier, field and ring transforms, and
//! checks for maximal entanglement and mutual unbiasedness.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::root_value;
use crate::error::{Error, Result};
use crate::finitefield::{FieldDescriptor, FieldElement, GaloisField};
use crate::galoisring::{GaloisRing, RingDescriptor, RingElement};
use crate::json::Amplitude;
use crate::phase::OperatorMatrix;
use crate::states::{classify_magnitude, dot, Overlap, CLASSIFY_TOL, NORM_TOL};

/// Tolerance on `max |trace_2 ρ - I/q|`.
pub const ENTANGLEMENT_TOL: f64 = 1e-9;

/// State of two `q`-level systems; amplitude of `|n1, n2⟩` at `n1 * q + n2`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    local_dim: usize,
    amplitudes: Vec<Complex64>,
}

impl BipartiteState {
    pub fn new(local_dim: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let s = Self::new_unchecked(local_dim, amplitudes)?;
        let norm = s.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(s)
    }

    /// Shape check only.
    pub fn new_unchecked(local_dim: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != local_dim * local_dim {
            return Err(Error::DimensionMismatch { left: local_dim * local_dim, right: amplitudes.len() });
        }
        Ok(BipartiteState { local_dim, amplitudes })
    }

    pub fn product(left: &[Complex64], right: &[Complex64]) -> Result<Self> {
        if left.len() != right.len() {
            return Err(Error::DimensionMismatch { left: left.len(), right: right.len() });
        }
        let amplitudes = left.iter().flat_map(|a| right.iter().map(move |b| a * b)).collect();
        Self::new(left.len(), amplitudes)
    }

    /// `Σ_n w_n |n, shift(n)⟩ / √q`, with `w_n = ω_order^exponent(n)`.
    fn shifted(q: usize, order: u32, mut term: impl FnMut(usize) -> (usize, u32)) -> Self {
        let scale = 1.0 / (q as f64).sqrt();
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); q * q];
        for n in 0..q {
            let (partner, e) = term(n);
            amplitudes[n * q + partner] = root_value(order, e) * scale;
        }
        BipartiteState { local_dim: q, amplitudes }
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, n1: usize, n2: usize) -> Complex64 {
        self.amplitudes[n1 * self.local_dim + n2]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        if self.local_dim != other.local_dim {
            return Err(Error::DimensionMismatch { left: self.local_dim, right: other.local_dim });
        }
        Ok(dot(&self.amplitudes, &other.amplitudes))
    }

    pub fn perturbed(&self, index: usize, delta: Complex64) -> Self {
        let mut out = self.clone();
        out.amplitudes[index] += delta;
        out
    }
}

impl Serialize for BipartiteState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Record<'a> {
            local_dim: usize,
            #[serde(with = "crate::json::complex_vec")]
            amplitudes: &'a [Complex64],
        }
        Record { local_dim: self.local_dim, amplitudes: &self.amplitudes }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BipartiteState {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Record {
            local_dim: usize,
            amplitudes: Vec<Amplitude>,
        }
        let r = Record::deserialize(d)?;
        BipartiteState::new_unchecked(r.local_dim, r.amplitudes.into_iter().map(Complex64::from).collect())
            .map_err(serde::de::Error::custom)
    }
}

/// `Σ_n ω_q^(kn) |n, n + h mod q⟩ / √q`.
pub fn bell_mult(q: u32, h: u32, k: u32) -> Result<BipartiteState> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!("local dimension must be at least 2, got {q}")));
    }
    let (h, k) = ((h % q) as usize, u64::from(k % q));
    let qs = q as usize;
    Ok(BipartiteState::shifted(qs, q, |n| ((n + h) % qs, ((k * n as u64) % u64::from(q)) as u32)))
}

/// `Σ_n ω_p^tr(a n² + b n) |n, n + h⟩ / √q` with field addition in the
/// second register.
pub fn bell_field(field: &GaloisField, h: FieldElement, a: FieldElement, b: FieldElement) -> Result<BipartiteState> {
    if field.characteristic() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    if [h, a, b].iter().any(|&x| !field.contains(x)) {
        return Err(Error::MismatchedDescriptor);
    }
    let q = field.order();
    Ok(BipartiteState::shifted(q as usize, field.characteristic(), |n| {
        let n = n as u32;
        let arg = field.add_idx(field.mul_idx(a.index(), field.mul_idx(n, n)), field.mul_idx(b.index(), n));
        (field.add_idx(n, h.index()) as usize, field.trace_idx(arg))
    }))
}

/// `Σ_j i^tr((a + 2b) T_j) |j, j + h mod 2^m⟩ / √(2^m)`, `T_j` the
/// Teichmüller elements in descriptor order.
pub fn bell_ring(ring: &GaloisRing, h: u32, a: RingElement, b: RingElement) -> Result<BipartiteState> {
    let pa = ring.teichmuller_position(a)?.ok_or(Error::NotTeichmuller(a.index()))?;
    let pb = ring.teichmuller_position(b)?.ok_or(Error::NotTeichmuller(b.index()))?;
    let dim = ring.dimension() as usize;
    let h = h as usize % dim;
    let y = ring.add_idx(ring.teich_idx(pa), ring.scale_idx(ring.teich_idx(pb), 2));
    Ok(BipartiteState::shifted(dim, 4, |j| ((j + h) % dim, ring.trace_idx(ring.mul_idx(y, ring.teich_idx(j))))))
}

/// `ρ_1[n, n'] = Σ_j ψ(n, j) conj(ψ(n', j))`.
pub fn partial_trace_2(state: &BipartiteState) -> OperatorMatrix {
    let q = state.local_dim;
    let a = &state.amplitudes;
    OperatorMatrix::from_fn(q, |n, np| dot(&a[np * q..(np + 1) * q], &a[n * q..(n + 1) * q]))
}

/// `max |trace_2 ρ - I/q|`.
pub fn entanglement_deviation(state: &BipartiteState) -> f64 {
    let q = state.local_dim;
    let target = OperatorMatrix::diagonal(&vec![1.0 / q as f64; q]);
    partial_trace_2(state).max_abs_diff(&target).unwrap()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BellKind {
    Mult,
    Field,
    Ring,
}

/// One orthonormal set of `q` Bell states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BellBasis {
    /// `a` as a field index or Teichmüller position; 0 for the Fourier family.
    pub a: u32,
    pub states: Vec<BipartiteState>,
}

/// All bases sharing one shift `h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BellGroup {
    pub h: u32,
    pub bases: Vec<BellBasis>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BellFamily {
    pub kind: BellKind,
    pub local_dim: usize,
    pub groups: Vec<BellGroup>,
}

impl BellFamily {
    /// `q` groups (one per `h`) of one basis each, states indexed by `k`.
    pub fn mult(q: u32) -> Result<Self> {
        let groups = (0..q)
            .map(|h| {
                let states = (0..q).map(|k| bell_mult(q, h, k)).collect::<Result<_>>()?;
                Ok(BellGroup { h, bases: vec![BellBasis { a: 0, states }] })
            })
            .collect::<Result<_>>()?;
        Ok(BellFamily { kind: BellKind::Mult, local_dim: q as usize, groups })
    }

    /// Groups indexed by `h`, bases by `a`, states by `b`, all in canonical order.
    pub fn field(field: &GaloisField) -> Result<Self> {
        let els = field.elements();
        let groups = els
            .iter()
            .map(|&h| {
                let bases = els
                    .iter()
                    .map(|&a| {
                        let states = els.iter().map(|&b| bell_field(field, h, a, b)).collect::<Result<_>>()?;
                        Ok(BellBasis { a: a.index(), states })
                    })
                    .collect::<Result<_>>()?;
                Ok(BellGroup { h: h.index(), bases })
            })
            .collect::<Result<_>>()?;
        Ok(BellFamily { kind: BellKind::Field, local_dim: field.order() as usize, groups })
    }

    /// Groups indexed by `h`, bases by `a` and states by `b` in Teichmüller order.
    pub fn ring(ring: &GaloisRing) -> Result<Self> {
        let t = ring.teichmuller();
        let groups = (0..ring.dimension())
            .map(|h| {
                let bases = t
                    .iter()
                    .enumerate()
                    .map(|(pa, &a)| {
                        let states = t.iter().map(|&b| bell_ring(ring, h, a, b)).collect::<Result<_>>()?;
                        Ok(BellBasis { a: pa as u32, states })
                    })
                    .collect::<Result<_>>()?;
                Ok(BellGroup { h, bases })
            })
            .collect::<Result<_>>()?;
        Ok(BellFamily { kind: BellKind::Ring, local_dim: ring.dimension() as usize, groups })
    }

    pub fn states(&self) -> impl Iterator<Item = (StateRef, &BipartiteState)> {
        self.groups.iter().enumerate().flat_map(|(g, group)| {
            group.bases.iter().enumerate().flat_map(move |(b, basis)| {
                basis.states.iter().enumerate().map(move |(s, st)| (StateRef { group: g, basis: b, state: s }, st))
            })
        })
    }

    pub fn state_mut(&mut self, at: StateRef) -> &mut BipartiteState {
        &mut self.groups[at.group].bases[at.basis].states[at.state]
    }
}

/// Position of a state inside a [`BellFamily`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StateRef {
    pub group: usize,
    pub basis: usize,
    pub state: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BellOffence {
    pub left: StateRef,
    pub right: StateRef,
    pub magnitude: f64,
    pub class: Overlap,
    pub expected: Overlap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntanglementFailure {
    pub state: StateRef,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BellReport {
    pub kind: BellKind,
    pub local_dim: usize,
    pub state_count: usize,
    pub tolerance: f64,
    pub max_entanglement_deviation: f64,
    pub entanglement_failures: Vec<EntanglementFailure>,
    /// `max |⟨B|B'⟩ - δ|` within each basis.
    pub max_intra_deviation: f64,
    /// `max | |⟨B|B'⟩| - 1/√q |` between bases of one group.
    pub max_unbiased_deviation: f64,
    /// `max |⟨B|B'⟩|` between groups.
    pub max_cross_group_overlap: f64,
    pub offending: Vec<BellOffence>,
    pub verdict: bool,
}

/// Checks every state for maximal entanglement and every pair for the
/// expected overlap: orthonormal within a basis, unbiased (`1/√q`) between
/// bases of one group, orthogonal between groups.
pub fn verify_bell_structure(family: &BellFamily) -> BellReport {
    verify_bell_structure_with(family, CLASSIFY_TOL)
}

pub fn verify_bell_structure_with(family: &BellFamily, tol: f64) -> BellReport {
    let q = family.local_dim;
    let states: Vec<(StateRef, &BipartiteState)> = family.states().collect();
    let mut entanglement_failures = Vec::new();
    let mut max_ent: f64 = 0.0;
    for (at, s) in &states {
        let dev = if s.local_dim == q { entanglement_deviation(s) } else { f64::INFINITY };
        max_ent = max_ent.max(dev);
        if dev.is_nan() || dev >= ENTANGLEMENT_TOL {
            entanglement_failures.push(EntanglementFailure { state: *at, deviation: dev });
        }
    }
    let (mut intra, mut unbiased, mut cross): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut offending = Vec::new();
    for (i, (la, u)) in states.iter().enumerate() {
        for (ra, v) in &states[i..] {
            let ip = if u.local_dim == v.local_dim {
                dot(&u.amplitudes, &v.amplitudes)
            } else {
                Complex64::new(f64::NAN, 0.0)
            };
            let magnitude = ip.norm();
            let expected = if la.group != ra.group {
                cross = cross.max(magnitude);
                Overlap::Orthogonal
            } else if la.basis != ra.basis {
                unbiased = unbiased.max((magnitude - 1.0 / (q as f64).sqrt()).abs());
                Overlap::Unbiased
            } else {
                let same = la.state == ra.state;
                intra = intra.max((ip - if same { 1.0 } else { 0.0 }).norm());
                if same {
                    Overlap::Identical
                } else {
                    Overlap::Orthogonal
                }
            };
            let class = classify_magnitude(magnitude, q, tol);
            if class != expected {
                offending.push(BellOffence { left: *la, right: *ra, magnitude, class, expected });
            }
        }
    }
    let verdict = entanglement_failures.is_empty() && offending.is_empty();
    BellReport {
        kind: family.kind,
        local_dim: q,
        state_count: states.len(),
        tolerance: tol,
        max_entanglement_deviation: max_ent,
        entanglement_failures,
        max_intra_deviation: intra,
        max_unbiased_deviation: unbiased,
        max_cross_group_overlap: cross,
        offending,
        verdict,
    }
}

/// Parameters a Bell file was generated from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BellConstruction {
    Mult { q: u32 },
    Field { field: FieldDescriptor },
    Ring { ring: RingDescriptor },
}

/// On-disk Bell artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BellFile {
    pub construction: BellConstruction,
    pub family: BellFamily,
}

impl BellFile {
    pub fn mult(q: u32) -> Result<Self> {
        Ok(BellFile { construction: BellConstruction::Mult { q }, family: BellFamily::mult(q)? })
    }

    pub fn field(field: &GaloisField) -> Result<Self> {
        Ok(BellFile {
            construction: BellConstruction::Field { field: field.descriptor() },
            family: BellFamily::field(field)?,
        })
    }

    pub fn ring(ring: &GaloisRing) -> Result<Self> {
        Ok(BellFile {
            construction: BellConstruction::Ring { ring: ring.descriptor() },
            family: BellFamily::ring(ring)?,
        })
    }

    pub fn verify(&self, tol: f64) -> BellReport {
        verify_bell_structure_with(&self.family, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Nonzero amplitudes of `state`, scaled by `√q`, as `(n1, n2, value)`.
    fn support(state: &BipartiteState) -> Vec<(usize, usize, Complex64)> {
        let q = state.local_dim();
        let s = (q as f64).sqrt();
        (0..q * q)
            .filter(|&i| state.amplitudes()[i].norm() > 1e-12)
            .map(|i| (i / q, i % q, state.amplitudes()[i] * s))
            .collect()
    }

    fn assert_support(state: &BipartiteState, expected: &[(usize, usize, Complex64)]) {
        let got = support(state);
        assert_eq!(got.len(), expected.len(), "{got:?}");
        for ((n1, n2, v), (e1, e2, ev)) in got.iter().zip(expected) {
            assert_eq!((n1, n2), (e1, e2));
            assert!((v - ev).norm() < 1e-12, "{got:?} vs {expected:?}");
        }
    }

    #[test]
    fn standard_bell_states() {
        assert_support(&bell_mult(2, 0, 0).unwrap(), &[(0, 0, c(1.0, 0.0)), (1, 1, c(1.0, 0.0))]);
        assert_support(&bell_mult(2, 0, 1).unwrap(), &[(0, 0, c(1.0, 0.0)), (1, 1, c(-1.0, 0.0))]);
        assert_support(&bell_mult(2, 1, 0).unwrap(), &[(0, 1, c(1.0, 0.0)), (1, 0, c(1.0, 0.0))]);
        assert_support(&bell_mult(2, 1, 1).unwrap(), &[(0, 1, c(1.0, 0.0)), (1, 0, c(-1.0, 0.0))]);
    }

    #[test]
    fn partial_traces() {
        let ket0 = [c(1.0, 0.0), c(0.0, 0.0)];
        let rho = partial_trace_2(&BipartiteState::product(&ket0, &ket0).unwrap());
        assert_eq!(rho.get(0, 0), c(1.0, 0.0));
        assert_eq!(rho.max_abs(), 1.0);
        assert!(entanglement_deviation(&bell_mult(2, 0, 0).unwrap()) < 1e-15);
        let f9 = GaloisField::new(3, 2).unwrap();
        let g = f9.generator();
        assert!(entanglement_deviation(&bell_field(&f9, g, g, f9.one()).unwrap()) < 1e-10);
    }

    #[test]
    fn partial_trace_of_non_product_mixed_terms() {
        // (|00⟩ + |01⟩ + |10⟩ - |11⟩)/2 is maximally entangled
        let s = BipartiteState::new(2, vec![c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(-0.5, 0.0)]).unwrap();
        assert!(entanglement_deviation(&s) < 1e-15);
        // (|00⟩ + |01⟩)/√2 = |0⟩|+⟩ is not
        let r = 1.0 / 2f64.sqrt();
        let p = BipartiteState::new(2, vec![c(r, 0.0), c(r, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!((entanglement_deviation(&p) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn qubit_ring_family_matrix() {
        let r = GaloisRing::new(1).unwrap();
        let (t0, t1) = (r.zero(), r.one());
        let one = c(1.0, 0.0);
        // rows a, columns h
        assert_support(&bell_ring(&r, 0, t0, t0).unwrap(), &[(0, 0, one), (1, 1, one)]);
        assert_support(&bell_ring(&r, 0, t0, t1).unwrap(), &[(0, 0, one), (1, 1, -one)]);
        assert_support(&bell_ring(&r, 1, t0, t0).unwrap(), &[(0, 1, one), (1, 0, one)]);
        assert_support(&bell_ring(&r, 1, t0, t1).unwrap(), &[(0, 1, one), (1, 0, -one)]);
        assert_support(&bell_ring(&r, 0, t1, t0).unwrap(), &[(0, 0, one), (1, 1, c(0.0, 1.0))]);
        assert_support(&bell_ring(&r, 0, t1, t1).unwrap(), &[(0, 0, one), (1, 1, c(0.0, -1.0))]);
        assert_support(&bell_ring(&r, 1, t1, t0).unwrap(), &[(0, 1, one), (1, 0, c(0.0, 1.0))]);
        assert_support(&bell_ring(&r, 1, t1, t1).unwrap(), &[(0, 1, one), (1, 0, c(0.0, -1.0))]);
        assert!(verify_bell_structure(&BellFamily::ring(&r).unwrap()).verdict);
    }

    #[test]
    fn quartit_shifted_state() {
        let r = GaloisRing::new(2).unwrap();
        let one = c(1.0, 0.0);
        let s = bell_ring(&r, 1, r.zero(), r.zero()).unwrap();
        assert_support(&s, &[(0, 1, one), (1, 2, one), (2, 3, one), (3, 0, one)]);
        // second quartit basis, first state: |01⟩ - |12⟩ - i|23⟩ - i|30⟩
        let s = bell_ring(&r, 1, r.one(), r.zero()).unwrap();
        assert_support(&s, &[(0, 1, one), (1, 2, -one), (2, 3, c(0.0, -1.0)), (3, 0, c(0.0, -1.0))]);
    }

    #[test]
    fn families_verify() {
        assert!(verify_bell_structure(&BellFamily::mult(3).unwrap()).verdict);
        let f = GaloisField::new(3, 1).unwrap();
        let report = verify_bell_structure(&BellFamily::field(&f).unwrap());
        assert!(report.verdict, "{:?}", report.offending.first());
        assert_eq!(report.state_count, 27);
        assert!(verify_bell_structure(&BellFamily::ring(&GaloisRing::new(2).unwrap()).unwrap()).verdict);
    }

    #[test]
    fn corrupted_amplitude_is_located() {
        let f = GaloisField::new(3, 1).unwrap();
        let mut family = BellFamily::field(&f).unwrap();
        let at = StateRef { group: 1, basis: 2, state: 0 };
        let s = family.state_mut(at);
        *s = s.perturbed(1, c(1e-3, 0.0));
        let report = verify_bell_structure(&family);
        assert!(!report.verdict);
        assert_eq!(report.entanglement_failures.len(), 1);
        assert_eq!(report.entanglement_failures[0].state, at);
    }

    #[test]
    fn rejects_bad_parameters() {
        let f = GaloisField::new(2, 1).unwrap();
        assert_eq!(bell_field(&f, f.zero(), f.zero(), f.zero()), Err(Error::CharacteristicTwo));
        let r = GaloisRing::new(2).unwrap();
        let two = r.scale(r.one(), 2).unwrap();
        assert_eq!(bell_ring(&r, 0, two, r.zero()), Err(Error::NotTeichmuller(two.index())));
        assert!(bell_mult(1, 0, 0).is_err());
    }

    #[test]
    fn file_round_trip() {
        let file = BellFile::ring(&GaloisRing::new(1).unwrap()).unwrap();
        let back: BellFile = serde_json::from_str(&serde_json::to_string(&file).unwrap()).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.verify(CLASSIFY_TOL), file.verify(CLASSIFY_TOL));
    }
}
