//! Pegg-Barnett bases, field MUBs for odd characteristic, Galois-ring MUBs
//! for m qubits, and exhaustive verification of basis sets.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::characters::{field_character_order, phase_twist_exponent, ring_character_order};
use crate::error::{Error, Result};
use crate::finitefield::{FieldDescriptor, FieldElement, GaloisField};
use crate::galoisring::{GaloisRing, RingDescriptor, RingElement};
use crate::states::{classify_magnitude, dot, Basis, ExactForm, Overlap, StateVector, CLASSIFY_TOL};

/// Discrete Fourier basis over `Z_q`: vector `k` is `ω_q^(kn)/√q`, with
/// eigenvalue label `theta0 + 2πk/q`.
pub fn pegg_barnett_basis(q: u32, theta0: f64) -> Result<Basis> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!("dimension must be at least 2, got {q}")));
    }
    let vectors = (0..q)
        .map(|k| {
            let exponents = (0..q).map(|n| Some(((u64::from(k) * u64::from(n)) % u64::from(q)) as u32)).collect();
            StateVector::from_exact(ExactForm { scale_denom_sqrt: q, root_order: q, exponents })
        })
        .collect::<Result<Vec<_>>>()?;
    let eigenvalues = (0..q).map(|k| theta0 + 2.0 * PI * f64::from(k) / f64::from(q)).collect();
    Basis::new(format!("pegg-barnett q={q}"), vectors, Some(eigenvalues))
}

pub fn computational_basis(q: u32) -> Basis {
    Basis::computational(q as usize)
}

/// Field phase basis with index `a` and character twist `k`.
///
/// Vector `b` has components `ψ_k(n) ω_p^tr(a n² + b n) / √q` over the
/// canonical enumeration of `F_q`, with `ψ_k(0) = 1`. Eigenvalue labels are
/// `2π idx(b) / q`.
pub fn mub_field(field: &GaloisField, a: FieldElement, k: u32) -> Result<Basis> {
    let p = field.characteristic();
    if p == 2 {
        return Err(Error::CharacteristicTwo);
    }
    if !field.contains(a) {
        return Err(Error::MismatchedDescriptor);
    }
    let q = field.order();
    let order = field_character_order(field);
    let add_step = u64::from(order / p);
    let mult_step = u64::from(order / (q - 1));
    let k = k % (q - 1);
    let quad: Vec<u64> = (0..q)
        .map(|n| {
            let aq = field.mul_idx(a.index(), field.mul_idx(n, n));
            u64::from(phase_twist_exponent(field, k, n)) * mult_step + u64::from(field.trace_idx(aq)) * add_step
        })
        .collect();
    let vectors = (0..q)
        .map(|b| {
            let exponents = (0..q)
                .map(|n| {
                    let e = quad[n as usize] + u64::from(field.trace_idx(field.mul_idx(b, n))) * add_step;
                    Some((e % u64::from(order)) as u32)
                })
                .collect();
            StateVector::from_exact(ExactForm { scale_denom_sqrt: q, root_order: order, exponents })
        })
        .collect::<Result<Vec<_>>>()?;
    let eigenvalues = (0..q).map(|b| 2.0 * PI * f64::from(b) / f64::from(q)).collect();
    Basis::new(format!("field q={q} a={} k={k}", a.index()), vectors, Some(eigenvalues))
}

/// The `q` field bases, `a` in canonical order.
pub fn mub_field_set(field: &GaloisField, k: u32) -> Result<Vec<Basis>> {
    field.elements().into_iter().map(|a| mub_field(field, a, k)).collect()
}

/// Ring phase basis with Teichmüller index `a` and character twist `k`.
///
/// Vector `b` (the `j`-th Teichmüller element) has components
/// `ψ̃_k(n) i^tr((a + 2b) n) / √(2^m)`, `n` running over `T` in descriptor
/// order, with `ψ̃_k(0) = 1`. Eigenvalue labels are `2πj / 2^m`.
pub fn mub_ring(ring: &GaloisRing, a: RingElement, k: u32) -> Result<Basis> {
    let pos_a = ring.teichmuller_position(a)?.ok_or(Error::NotTeichmuller(a.index()))?;
    let dim = ring.dimension();
    let units = dim - 1;
    let k = k % units;
    let order = ring_character_order(ring);
    let add_step = u64::from(order / 4);
    let mult_step = u64::from(order / units);
    let twist = |j: usize| if j == 0 { 0 } else { (u64::from(k) * (j as u64 - 1)) % u64::from(units) };
    let vectors = (0..dim as usize)
        .map(|jb| {
            let y = ring.add_idx(ring.teich_idx(pos_a), ring.scale_idx(ring.teich_idx(jb), 2));
            let exponents = (0..dim as usize)
                .map(|jn| {
                    let tr = u64::from(ring.trace_idx(ring.mul_idx(y, ring.teich_idx(jn))));
                    Some(((twist(jn) * mult_step + tr * add_step) % u64::from(order)) as u32)
                })
                .collect();
            StateVector::from_exact(ExactForm { scale_denom_sqrt: dim, root_order: order, exponents })
        })
        .collect::<Result<Vec<_>>>()?;
    let eigenvalues = (0..dim).map(|j| 2.0 * PI * f64::from(j) / f64::from(dim)).collect();
    Basis::new(format!("ring m={} a=T[{pos_a}] k={k}", ring.degree()), vectors, Some(eigenvalues))
}

/// The `2^m` ring bases, `a` in Teichmüller order.
pub fn mub_ring_set(ring: &GaloisRing, k: u32) -> Result<Vec<Basis>> {
    ring.teichmuller().into_iter().map(|a| mub_ring(ring, a, k)).collect()
}

/// Counts of overlap classes between two bases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSummary {
    pub left: usize,
    pub right: usize,
    pub identical: usize,
    pub orthogonal: usize,
    pub unbiased: usize,
    pub other: usize,
    /// `max | |⟨u|v⟩| - expected |` over the vector pairs of this block.
    pub max_deviation: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OffendingPair {
    pub left_basis: usize,
    pub left_vector: usize,
    pub right_basis: usize,
    pub right_vector: usize,
    pub magnitude: f64,
    pub class: Overlap,
    pub expected: Overlap,
}

/// Result of [`verify_mub_set`].
///
/// Bases are numbered in the order given, with the computational basis
/// appended last when it was included. `pairs` holds one summary per
/// unordered basis pair (diagonal blocks included).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MubReport {
    pub dim: usize,
    pub base_count: usize,
    pub include_computational: bool,
    pub labels: Vec<String>,
    pub tolerance: f64,
    pub pairs: Vec<PairSummary>,
    pub offending: Vec<OffendingPair>,
    /// Largest `|G - I|` entry over all intra-basis Gram blocks.
    pub max_intra_deviation: f64,
    /// Largest `| |⟨u|v⟩| - 1/√q |` over all inter-basis pairs.
    pub max_inter_deviation: f64,
    pub verdict: bool,
}

impl MubReport {
    pub fn pair(&self, left: usize, right: usize) -> Option<&PairSummary> {
        let (l, r) = if left <= right { (left, right) } else { (right, left) };
        self.pairs.iter().find(|s| s.left == l && s.right == r)
    }
}

fn expected_class(same_basis: bool, i: usize, j: usize) -> Overlap {
    match (same_basis, i == j) {
        (true, true) => Overlap::Identical,
        (true, false) => Overlap::Orthogonal,
        (false, _) => Overlap::Unbiased,
    }
}

fn with_computational(bases: &[Basis], include_computational: bool) -> Vec<Basis> {
    let mut all = bases.to_vec();
    if include_computational {
        if let Some(first) = bases.first() {
            all.push(Basis::computational(first.dim()));
        }
    }
    all
}

fn check_dims(bases: &[Basis]) -> Result<usize> {
    let dim = bases.first().map_or(0, Basis::dim);
    if let Some(b) = bases.iter().find(|b| b.dim() != dim) {
        return Err(Error::DimensionMismatch { left: dim, right: b.dim() });
    }
    Ok(dim)
}

/// Classification of every vector pair, indexed
/// `[basis_i * dim + vector_i][basis_j * dim + vector_j]`.
pub fn classification_matrix(bases: &[Basis], include_computational: bool, tol: f64) -> Result<Vec<Vec<Overlap>>> {
    let all = with_computational(bases, include_computational);
    let dim = check_dims(&all)?;
    let flat: Vec<&StateVector> = all.iter().flat_map(|b| b.vectors()).collect();
    Ok(flat
        .iter()
        .map(|u| {
            flat.iter().map(|v| classify_magnitude(dot(u.amplitudes(), v.amplitudes()).norm(), dim, tol)).collect()
        })
        .collect())
}

/// Exhaustive pairwise check with the default tolerance.
pub fn verify_mub_set(bases: &[Basis], include_computational: bool) -> Result<MubReport> {
    verify_mub_set_with(bases, include_computational, CLASSIFY_TOL)
}

pub fn verify_mub_set_with(bases: &[Basis], include_computational: bool, tol: f64) -> Result<MubReport> {
    let all = with_computational(bases, include_computational);
    let dim = check_dims(&all)?;
    let mut pairs = Vec::new();
    let mut offending = Vec::new();
    let (mut max_intra, mut max_inter) = (0.0f64, 0.0f64);
    for (l, left) in all.iter().enumerate() {
        for (r, right) in all.iter().enumerate().skip(l) {
            let same = l == r;
            let mut s = PairSummary {
                left: l,
                right: r,
                identical: 0,
                orthogonal: 0,
                unbiased: 0,
                other: 0,
                max_deviation: 0.0,
                ok: true,
            };
            for (i, u) in left.vectors().iter().enumerate() {
                let start = if same { i } else { 0 };
                for (j, v) in right.vectors().iter().enumerate().skip(start) {
                    let ip = dot(u.amplitudes(), v.amplitudes());
                    let magnitude = ip.norm();
                    let class = classify_magnitude(magnitude, dim, tol);
                    let expected = expected_class(same, i, j);
                    let deviation = if same {
                        let target = if i == j { 1.0 } else { 0.0 };
                        (ip - Complex64::new(target, 0.0)).norm()
                    } else {
                        (magnitude - expected.magnitude(dim).unwrap()).abs()
                    };
                    s.max_deviation = s.max_deviation.max(deviation);
                    match class {
                        Overlap::Identical => s.identical += 1,
                        Overlap::Orthogonal => s.orthogonal += 1,
                        Overlap::Unbiased => s.unbiased += 1,
                        Overlap::Other => s.other += 1,
                    }
                    if class != expected {
                        s.ok = false;
                        offending.push(OffendingPair {
                            left_basis: l,
                            left_vector: i,
                            right_basis: r,
                            right_vector: j,
                            magnitude,
                            class,
                            expected,
                        });
                    }
                }
            }
            if same {
                max_intra = max_intra.max(s.max_deviation);
            } else {
                max_inter = max_inter.max(s.max_deviation);
            }
            pairs.push(s);
        }
    }
    let verdict = offending.is_empty();
    Ok(MubReport {
        dim,
        base_count: all.len(),
        include_computational,
        labels: all.iter().map(|b| b.label().to_string()).collect(),
        tolerance: tol,
        pairs,
        offending,
        max_intra_deviation: max_intra,
        max_inter_deviation: max_inter,
        verdict,
    })
}

/// Parameters a MUB file was generated from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MubConstruction {
    Field { field: FieldDescriptor, k: u32 },
    Ring { ring: RingDescriptor, k: u32 },
}

/// On-disk MUB artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MubFile {
    pub construction: MubConstruction,
    pub include_computational: bool,
    pub bases: Vec<Basis>,
}

impl MubFile {
    pub fn field(field: &GaloisField, k: u32) -> Result<Self> {
        Ok(MubFile {
            construction: MubConstruction::Field { field: field.descriptor(), k },
            include_computational: true,
            bases: mub_field_set(field, k)?,
        })
    }

    pub fn ring(ring: &GaloisRing, k: u32) -> Result<Self> {
        Ok(MubFile {
            construction: MubConstruction::Ring { ring: ring.descriptor(), k },
            include_computational: true,
            bases: mub_ring_set(ring, k)?,
        })
    }

    pub fn verify(&self, tol: f64) -> Result<MubReport> {
        verify_mub_set_with(&self.bases, self.include_computational, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_vector(v: &StateVector, expected: &[Complex64]) {
        for (a, e) in v.amplitudes().iter().zip(expected) {
            assert!((a - e).norm() < 1e-15, "{:?} vs {:?}", v.amplitudes(), expected);
        }
    }

    #[test]
    fn pegg_barnett_q2() {
        let b = pegg_barnett_basis(2, 0.0).unwrap();
        let s = 1.0 / 2f64.sqrt();
        assert_vector(b.vector(0), &[c(s, 0.0), c(s, 0.0)]);
        assert_vector(b.vector(1), &[c(s, 0.0), c(-s, 0.0)]);
        assert_eq!(b.eigenvalues().unwrap(), &[0.0, PI]);
        assert!(pegg_barnett_basis(1, 0.0).is_err());
        let r = verify_mub_set(&[pegg_barnett_basis(4, 0.3).unwrap()], true).unwrap();
        assert!(r.verdict);
    }

    #[test]
    fn field_basis_a0_is_dft_over_z3() {
        let f = GaloisField::new(3, 1).unwrap();
        let b = mub_field(&f, f.zero(), 0).unwrap();
        let pb = pegg_barnett_basis(3, 0.0).unwrap();
        for i in 0..3 {
            assert_vector(b.vector(i), pb.vector(i).amplitudes());
        }
    }

    #[test]
    fn characteristic_two_is_rejected() {
        let f = GaloisField::new(2, 2).unwrap();
        assert_eq!(mub_field(&f, f.zero(), 0), Err(Error::CharacteristicTwo));
    }

    #[test]
    fn complete_sets_small_fields() {
        for &(p, m) in &[(3, 1), (5, 1), (3, 2)] {
            let f = GaloisField::new(p, m).unwrap();
            let r = verify_mub_set(&mub_field_set(&f, 0).unwrap(), true).unwrap();
            assert!(r.verdict, "p={p} m={m}: {:?}", r.offending.first());
            assert_eq!(r.base_count, f.order() as usize + 1);
        }
    }

    #[test]
    fn twisted_field_bases() {
        let f = GaloisField::new(5, 1).unwrap();
        for k in 1..4 {
            for b in mub_field_set(&f, k).unwrap() {
                assert!(b.orthonormality_residual() < 1e-12);
            }
            assert!(verify_mub_set(&mub_field_set(&f, k).unwrap(), true).unwrap().verdict);
        }
        // m = 1, a = 0: the twist only rephases components n != 0
        let pb = pegg_barnett_basis(5, 0.0).unwrap();
        let tw = mub_field(&f, f.zero(), 2).unwrap();
        for i in 0..5 {
            assert_eq!(tw.vector(i).amplitudes()[0], pb.vector(i).amplitudes()[0]);
        }
    }

    #[test]
    fn qubit_ring_bases() {
        let r = GaloisRing::new(1).unwrap();
        let set = mub_ring_set(&r, 0).unwrap();
        let s = 1.0 / 2f64.sqrt();
        assert_vector(set[0].vector(0), &[c(s, 0.0), c(s, 0.0)]);
        assert_vector(set[0].vector(1), &[c(s, 0.0), c(-s, 0.0)]);
        assert_vector(set[1].vector(0), &[c(s, 0.0), c(0.0, s)]);
        assert_vector(set[1].vector(1), &[c(s, 0.0), c(0.0, -s)]);
        assert!(verify_mub_set(&set, true).unwrap().verdict);
    }

    #[test]
    fn quartit_first_ring_bases_match_printed_rows() {
        let r = GaloisRing::new(2).unwrap();
        let set = mub_ring_set(&r, 0).unwrap();
        let printed: [[Complex64; 4]; 4] = [
            [c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)],
            [c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(-1.0, 0.0)],
            [c(1.0, 0.0), c(-1.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0)],
            [c(1.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)],
        ];
        for (v, row) in set[0].vectors().iter().zip(&printed) {
            assert_vector(v, &row.map(|x| x * 0.5));
        }
        let printed: [[Complex64; 4]; 4] = [
            [c(1.0, 0.0), c(-1.0, 0.0), c(0.0, -1.0), c(0.0, -1.0)],
            [c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, 1.0)],
            [c(1.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)],
            [c(1.0, 0.0), c(1.0, 0.0), c(0.0, -1.0), c(0.0, 1.0)],
        ];
        for (v, row) in set[1].vectors().iter().zip(&printed) {
            assert_vector(v, &row.map(|x| x * 0.5));
        }
        assert!(verify_mub_set(&set, true).unwrap().verdict);
    }

    #[test]
    fn ring_rejects_non_teichmuller_index() {
        let r = GaloisRing::new(2).unwrap();
        let two = r.scale(r.one(), 2).unwrap();
        assert_eq!(mub_ring(&r, two, 0), Err(Error::NotTeichmuller(two.index())));
    }

    #[test]
    fn corrupted_vector_is_reported() {
        let f = GaloisField::new(3, 1).unwrap();
        let mut set = mub_field_set(&f, 0).unwrap();
        set[1] = set[1].perturbed(2, 0, c(1e-3, 0.0));
        let r = verify_mub_set(&set, true).unwrap();
        assert!(!r.verdict);
        assert!(r
            .offending
            .iter()
            .all(|o| o.left_basis == 1 && o.left_vector == 2 || o.right_basis == 1 && o.right_vector == 2));
        assert!(!r.pair(1, 1).unwrap().ok);
        assert!(r.pair(0, 2).unwrap().ok);
    }

    #[test]
    fn classification_matrix_shape() {
        let r = GaloisRing::new(1).unwrap();
        let m = classification_matrix(&mub_ring_set(&r, 0).unwrap(), true, CLASSIFY_TOL).unwrap();
        assert_eq!(m.len(), 6);
        assert_eq!(m[0][0], Overlap::Identical);
        assert_eq!(m[0][1], Overlap::Orthogonal);
        assert_eq!(m[0][2], Overlap::Unbiased);
    }

    #[test]
    fn file_round_trip_preserves_report() {
        let f = GaloisField::new(3, 2).unwrap();
        let file = MubFile::field(&f, 0).unwrap();
        let report = file.verify(CLASSIFY_TOL).unwrap();
        let text = serde_json::to_string(&file).unwrap();
        let back: MubFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.verify(CLASSIFY_TOL).unwrap(), report);
    }
}
