//! State vectors and bases with float amplitudes and an optional exact
//! root-of-unity form.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::root_value;
use crate::error::{Error, Result};

/// Tolerance on `‖v‖ = 1`.
pub const NORM_TOL: f64 = 1e-12;
/// Default tolerance for [`classify_overlap`].
pub const CLASSIFY_TOL: f64 = 1e-9;
/// Tolerance on `max |G - I|` for the Gram matrix of a basis.
pub const ORTHONORMAL_TOL: f64 = 1e-10;
/// Agreement required between float amplitudes and the exact form.
pub const EXACT_TOL: f64 = 1e-14;

/// Amplitudes `ω_N^e / √s` with `None` marking a zero component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactForm {
    pub scale_denom_sqrt: u32,
    pub root_order: u32,
    pub exponents: Vec<Option<u32>>,
}

impl ExactForm {
    pub fn evaluate(&self) -> Vec<Complex64> {
        let scale = 1.0 / f64::from(self.scale_denom_sqrt).sqrt();
        self.exponents
            .iter()
            .map(|e| match e {
                Some(e) => root_value(self.root_order, *e) * scale,
                None => Complex64::new(0.0, 0.0),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    #[serde(with = "crate::json::complex_vec")]
    amplitudes: Vec<Complex64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    exact: Option<ExactForm>,
}

impl StateVector {
    /// A unit vector; fails when `‖v‖` is off by more than [`NORM_TOL`].
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let v = StateVector { amplitudes, exact: None };
        v.check_norm()?;
        Ok(v)
    }

    pub fn from_exact(exact: ExactForm) -> Result<Self> {
        let v = StateVector { amplitudes: exact.evaluate(), exact: Some(exact) };
        v.check_norm()?;
        Ok(v)
    }

    /// No normalization check. Used for loaded artifacts, which the
    /// verifiers then judge.
    pub fn new_unchecked(amplitudes: Vec<Complex64>, exact: Option<ExactForm>) -> Self {
        StateVector { amplitudes, exact }
    }

    pub fn computational(dim: usize, n: usize) -> Self {
        let mut exponents = vec![None; dim];
        exponents[n] = Some(0);
        Self::from_exact(ExactForm { scale_denom_sqrt: 1, root_order: 1, exponents }).unwrap()
    }

    fn check_norm(&self) -> Result<()> {
        let norm = self.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn exact(&self) -> Option<&ExactForm> {
        self.exact.as_ref()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |amplitude - exact|`, or `None` without an exact form.
    pub fn exact_deviation(&self) -> Option<f64> {
        let exact = self.exact.as_ref()?;
        if exact.exponents.len() != self.dim() {
            return Some(f64::INFINITY);
        }
        Some(exact.evaluate().iter().zip(&self.amplitudes).map(|(e, a)| (e - a).norm()).fold(0.0, f64::max))
    }

    /// Replaces one amplitude and drops the exact form.
    pub fn perturbed(&self, component: usize, delta: Complex64) -> Self {
        let mut amplitudes = self.amplitudes.clone();
        amplitudes[component] += delta;
        StateVector { amplitudes, exact: None }
    }
}

/// `⟨u|v⟩`, conjugate-linear in `u`.
pub fn inner_product(u: &StateVector, v: &StateVector) -> Result<Complex64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch { left: u.dim(), right: v.dim() });
    }
    Ok(dot(u.amplitudes(), v.amplitudes()))
}

pub(crate) fn dot(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Overlap {
    Orthogonal,
    Unbiased,
    Identical,
    Other,
}

impl Overlap {
    /// The ideal magnitude for this class in dimension `dim`.
    pub fn magnitude(self, dim: usize) -> Option<f64> {
        match self {
            Overlap::Orthogonal => Some(0.0),
            Overlap::Unbiased => Some(1.0 / (dim as f64).sqrt()),
            Overlap::Identical => Some(1.0),
            Overlap::Other => None,
        }
    }
}

/// Classifies `|⟨u|v⟩|` against `{0, 1/√dim, 1}`.
pub fn classify_magnitude(magnitude: f64, dim: usize, tol: f64) -> Overlap {
    [Overlap::Identical, Overlap::Orthogonal, Overlap::Unbiased]
        .into_iter()
        .find(|c| (magnitude - c.magnitude(dim).unwrap()).abs() <= tol)
        .unwrap_or(Overlap::Other)
}

pub fn classify_overlap(u: &StateVector, v: &StateVector) -> Result<Overlap> {
    classify_overlap_with(u, v, CLASSIFY_TOL)
}

pub fn classify_overlap_with(u: &StateVector, v: &StateVector, tol: f64) -> Result<Overlap> {
    Ok(classify_magnitude(inner_product(u, v)?.norm(), u.dim(), tol))
}

/// An ordered list of `dim` states with optional eigenvalue labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    label: String,
    vectors: Vec<StateVector>,
    eigenvalues: Option<Vec<f64>>,
}

impl Basis {
    /// Checks dimensions and orthonormality within [`ORTHONORMAL_TOL`].
    pub fn new(label: impl Into<String>, vectors: Vec<StateVector>, eigenvalues: Option<Vec<f64>>) -> Result<Self> {
        let b = Self::new_unchecked(label, vectors, eigenvalues)?;
        let residual = b.orthonormality_residual();
        if residual > ORTHONORMAL_TOL {
            return Err(Error::NotOrthonormal(residual));
        }
        Ok(b)
    }

    /// Checks shapes only.
    pub fn new_unchecked(
        label: impl Into<String>,
        vectors: Vec<StateVector>,
        eigenvalues: Option<Vec<f64>>,
    ) -> Result<Self> {
        let dim = vectors.len();
        if let Some(v) = vectors.iter().find(|v| v.dim() != dim) {
            return Err(Error::DimensionMismatch { left: dim, right: v.dim() });
        }
        if let Some(e) = &eigenvalues {
            if e.len() != dim {
                return Err(Error::DimensionMismatch { left: dim, right: e.len() });
            }
        }
        Ok(Basis { label: label.into(), vectors, eigenvalues })
    }

    pub fn computational(dim: usize) -> Self {
        let vectors = (0..dim).map(|n| StateVector::computational(dim, n)).collect();
        Basis { label: "computational".into(), vectors, eigenvalues: None }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[StateVector] {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> &StateVector {
        &self.vectors[i]
    }

    pub fn eigenvalues(&self) -> Option<&[f64]> {
        self.eigenvalues.as_deref()
    }

    /// `max |⟨v_i|v_j⟩ - δ_ij|`.
    pub fn orthonormality_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, u) in self.vectors.iter().enumerate() {
            for (j, v) in self.vectors.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot(u.amplitudes(), v.amplitudes()) - target).norm());
            }
        }
        worst
    }

    /// A copy with one amplitude of one vector shifted by `delta`.
    pub fn perturbed(&self, vector: usize, component: usize, delta: Complex64) -> Self {
        let mut out = self.clone();
        out.vectors[vector] = self.vectors[vector].perturbed(component, delta);
        out
    }

    /// A copy with the vectors reordered: vector `i` of the result is
    /// vector `order[i]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        let mut out = self.clone();
        out.vectors = order.iter().map(|&i| self.vectors[i].clone()).collect();
        if let Some(e) = &self.eigenvalues {
            out.eigenvalues = Some(order.iter().map(|&i| e[i]).collect());
        }
        out
    }
}

/// Serialized shape of a [`Basis`].
#[derive(Serialize, Deserialize)]
struct BasisRecord {
    label: String,
    dim: usize,
    vectors: Vec<Vec<crate::json::Amplitude>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    exact: Option<BasisExact>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eigenvalues: Option<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct BasisExact {
    scale_denom_sqrt: u32,
    root_order: u32,
    exponents: Vec<Vec<Option<u32>>>,
}

impl Basis {
    fn to_record(&self) -> BasisRecord {
        let exact = self.common_exact().map(|(scale, order)| BasisExact {
            scale_denom_sqrt: scale,
            root_order: order,
            exponents: self.vectors.iter().map(|v| v.exact.as_ref().unwrap().exponents.clone()).collect(),
        });
        BasisRecord {
            label: self.label.clone(),
            dim: self.dim(),
            vectors: self.vectors.iter().map(|v| v.amplitudes.iter().map(|&a| a.into()).collect()).collect(),
            exact,
            eigenvalues: self.eigenvalues.clone(),
        }
    }

    /// Scale and root order shared by every vector's exact form.
    fn common_exact(&self) -> Option<(u32, u32)> {
        let first = self.vectors.first()?.exact.as_ref()?;
        let key = (first.scale_denom_sqrt, first.root_order);
        self.vectors
            .iter()
            .all(|v| v.exact.as_ref().is_some_and(|e| (e.scale_denom_sqrt, e.root_order) == key))
            .then_some(key)
    }

    fn from_record(r: BasisRecord) -> std::result::Result<Self, String> {
        if r.vectors.len() != r.dim || r.vectors.iter().any(|v| v.len() != r.dim) {
            return Err(format!("basis '{}' is not {}x{}", r.label, r.dim, r.dim));
        }
        let exact_rows: Vec<Option<ExactForm>> = match r.exact {
            Some(e) => {
                if e.exponents.len() != r.dim {
                    return Err(format!("basis '{}' has {} exact rows", r.label, e.exponents.len()));
                }
                e.exponents
                    .into_iter()
                    .map(|exponents| {
                        Some(ExactForm { scale_denom_sqrt: e.scale_denom_sqrt, root_order: e.root_order, exponents })
                    })
                    .collect()
            }
            None => vec![None; r.dim],
        };
        let vectors = r
            .vectors
            .into_iter()
            .zip(exact_rows)
            .map(|(v, e)| StateVector::new_unchecked(v.into_iter().map(Complex64::from).collect(), e))
            .collect();
        Basis::new_unchecked(r.label, vectors, r.eigenvalues).map_err(|e| e.to_string())
    }
}

impl Serialize for Basis {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_record().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Basis {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Basis::from_record(BasisRecord::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}
