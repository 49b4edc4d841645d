//! The Galois phase operator, its partial sums `S(n, m)`, the number
//! operator, and phase statistics of pure states.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::characters::{field_character_order, phase_twist_exponent};
use crate::cyclotomic::{root_value, CyclotomicInt};
use crate::error::{Error, Result};
use crate::finitefield::{FieldElement, GaloisField};
use crate::json::Amplitude;
use crate::states::{dot, Basis, ExactForm, StateVector, ORTHONORMAL_TOL};

/// Tolerance behind the `hermitian` flag.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Dense `dim x dim` complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    dim: usize,
    entries: Vec<Complex64>,
    hermitian: bool,
}

impl OperatorMatrix {
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch { left: dim * dim, right: entries.len() });
        }
        let mut m = OperatorMatrix { dim, entries, hermitian: false };
        m.hermitian = m.hermiticity_residual() < HERMITIAN_TOL;
        Ok(m)
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let entries = (0..dim * dim).map(|i| f(i / dim, i % dim)).collect();
        Self::new(dim, entries).unwrap()
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let dim = values.len();
        Self::from_fn(dim, |i, j| if i == j { Complex64::new(values[i], 0.0) } else { Complex64::new(0.0, 0.0) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// `max |M - M†|`.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * other.get(k, j);
                }
            }
        }
        Self::new(n, out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Self::new(self.dim, self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Self::new(self.dim, self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect())
    }

    /// `max |A - B|` entrywise.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// `M v`.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: v.len() });
        }
        Ok((0..self.dim).map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum()).collect())
    }

    /// `⟨v|M|v⟩`.
    pub fn expectation(&self, v: &StateVector) -> Result<Complex64> {
        Ok(dot(v.amplitudes(), &self.apply(v.amplitudes())?))
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: other.dim });
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct OperatorRecord {
    dim: usize,
    hermitian: bool,
    entries: Vec<Vec<Amplitude>>,
}

impl Serialize for OperatorMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        OperatorRecord {
            dim: self.dim,
            hermitian: self.hermitian,
            entries: self.entries.chunks(self.dim.max(1)).map(|row| row.iter().map(|&c| c.into()).collect()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for OperatorMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = OperatorRecord::deserialize(d)?;
        let entries = r.entries.into_iter().flatten().map(Complex64::from).collect();
        OperatorMatrix::new(r.dim, entries).map_err(serde::de::Error::custom)
    }
}

/// `Σ_b θ_b |θ_b⟩⟨θ_b|`.
pub fn phase_operator_spectral(basis: &Basis, eigenvalues: &[f64]) -> Result<OperatorMatrix> {
    let dim = basis.dim();
    if eigenvalues.len() != dim {
        return Err(Error::DimensionMismatch { left: dim, right: eigenvalues.len() });
    }
    let residual = basis.orthonormality_residual();
    if residual > ORTHONORMAL_TOL {
        return Err(Error::NotOrthonormal(residual));
    }
    let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
    for (v, &theta) in basis.vectors().iter().zip(eigenvalues) {
        let amp = v.amplitudes();
        for n in 0..dim {
            let left = amp[n] * theta;
            for m in 0..dim {
                entries[n * dim + m] += left * amp[m].conj();
            }
        }
    }
    OperatorMatrix::new(dim, entries)
}

/// `S(n, m) = Σ_b idx(b) ω_p^tr(b (n - m))` in closed form.
///
/// With `d = n - m` and `t_j = tr(x^j d)`, each base-`p` digit of `idx(b)`
/// contributes a geometric sum. Only a single nonzero `t_j` survives, giving
/// `p^(m+j) / (ω_p^t_j - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum PartialSum {
    /// `n = m`: `q (q - 1) / 2`.
    Diagonal { value: u64 },
    /// Two or more nonzero digit traces.
    Vanishing,
    /// `numerator / (ω_p^trace - 1)`.
    Pole { numerator: u64, trace: u32, p: u32 },
}

impl PartialSum {
    pub fn value(self) -> Complex64 {
        match self {
            PartialSum::Diagonal { value } => Complex64::new(value as f64, 0.0),
            PartialSum::Vanishing => Complex64::new(0.0, 0.0),
            PartialSum::Pole { numerator, trace, p } => {
                Complex64::new(numerator as f64, 0.0) / (root_value(p, trace) - 1.0)
            }
        }
    }

    /// Exact comparison with a directly accumulated sum in `Z[ω_p]`.
    pub fn agrees_with(self, direct: &CyclotomicInt) -> bool {
        match self {
            PartialSum::Diagonal { value } => direct.as_integer() == Some(value as i64),
            PartialSum::Vanishing => direct.is_zero(),
            PartialSum::Pole { numerator, trace, p } => {
                let mut denom = CyclotomicInt::from_integer(p, -1);
                denom.add_term(trace, 1);
                direct.mul(&denom).as_integer() == Some(numerator as i64)
            }
        }
    }
}

fn check_odd(field: &GaloisField, elements: &[FieldElement]) -> Result<()> {
    if field.characteristic() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    if elements.iter().any(|&x| !field.contains(x)) {
        return Err(Error::MismatchedDescriptor);
    }
    Ok(())
}

pub fn s_sum(field: &GaloisField, n: FieldElement, m: FieldElement) -> Result<PartialSum> {
    if !field.contains(n) || !field.contains(m) {
        return Err(Error::MismatchedDescriptor);
    }
    Ok(s_sum_idx(field, n.index(), m.index()))
}

fn s_sum_idx(field: &GaloisField, n: u32, m: u32) -> PartialSum {
    let q = u64::from(field.order());
    let d = field.sub_idx(n, m);
    if d == 0 {
        return PartialSum::Diagonal { value: q * (q - 1) / 2 };
    }
    let p = field.characteristic();
    let mut digit = None;
    let mut basis_idx = 1u32;
    for j in 0..field.degree() {
        let t = field.trace_idx(field.mul_idx(basis_idx, d));
        if t != 0 {
            if digit.is_some() {
                return PartialSum::Vanishing;
            }
            digit = Some((j, t));
        }
        basis_idx *= p;
    }
    // d != 0 and the trace form is nondegenerate, so some digit trace is nonzero
    let (j, t) = digit.expect("nonzero difference with all digit traces zero");
    PartialSum::Pole { numerator: u64::from(p).pow(field.degree() + j), trace: t, p }
}

/// `S(n, m)` summed term by term.
pub fn s_sum_direct(field: &GaloisField, n: FieldElement, m: FieldElement) -> Result<CyclotomicInt> {
    if !field.contains(n) || !field.contains(m) {
        return Err(Error::MismatchedDescriptor);
    }
    let d = field.sub_idx(n.index(), m.index());
    let mut acc = CyclotomicInt::zero(field.characteristic());
    for b in 0..field.order() {
        acc.add_term(field.trace_idx(field.mul_idx(b, d)), i64::from(b));
    }
    Ok(acc)
}

/// Phase factor `ψ_k(n) conj(ψ_k(m)) ω_p^tr(a (n² - m²))` as a root of
/// order `lcm(p, q - 1)`.
fn closed_phase(field: &GaloisField, a: u32, k: u32, n: u32, m: u32) -> Complex64 {
    let q = field.order();
    let order = field_character_order(field);
    let mult_step = i64::from(order / (q - 1));
    let add_step = i64::from(order / field.characteristic());
    let quad = field.sub_idx(field.mul_idx(n, n), field.mul_idx(m, m));
    let e = (i64::from(phase_twist_exponent(field, k, n)) - i64::from(phase_twist_exponent(field, k, m))) * mult_step
        + i64::from(field.trace_idx(field.mul_idx(a, quad))) * add_step;
    root_value(order, e.rem_euclid(i64::from(order)) as u32)
}

/// `(2π/q²) ψ_k(n) conj(ψ_k(m)) ω_p^tr(a (n² - m²)) S(n, m)`, which equals
/// the spectral operator of `mub_field(field, a, k)`.
pub fn phase_operator_closed(field: &GaloisField, a: FieldElement, k: u32) -> Result<OperatorMatrix> {
    check_odd(field, &[a])?;
    let q = field.order();
    let k = k % (q - 1);
    let scale = 2.0 * PI / f64::from(q).powi(2);
    Ok(OperatorMatrix::from_fn(q as usize, |n, m| {
        let (n, m) = (n as u32, m as u32);
        closed_phase(field, a.index(), k, n, m) * s_sum_idx(field, n, m).value() * scale
    }))
}

/// `N = Σ_l l |l⟩⟨l|`.
pub fn number_operator(q: u32) -> OperatorMatrix {
    let values: Vec<f64> = (0..q).map(f64::from).collect();
    OperatorMatrix::diagonal(&values)
}

/// `u(n, m) = (idx m - idx n) Θ(n, m)`, the entries of `Θ N - N Θ`.
pub fn commutator_elements(field: &GaloisField, a: FieldElement, k: u32) -> Result<OperatorMatrix> {
    let theta = phase_operator_closed(field, a, k)?;
    let q = theta.dim();
    let entries = (0..q * q)
        .map(|i| {
            let (n, m) = (i / q, i % q);
            if n == m {
                Complex64::new(0.0, 0.0)
            } else {
                theta.get(n, m) * (m as f64 - n as f64)
            }
        })
        .collect();
    OperatorMatrix::new(q, entries)
}

/// `A B - B A`.
pub fn matrix_commutator(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix> {
    a.matmul(b)?.sub(&b.matmul(a)?)
}

/// Slope of the pure state `|f⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PureStateParams {
    /// `u_n = exp(i idx(n) β) / √q`.
    RealBeta(f64),
    /// `u_n = κ(β n) / √q`, `β ∈ F_q`.
    FieldBeta(FieldElement),
}

pub fn pure_state(field: &GaloisField, params: PureStateParams) -> Result<StateVector> {
    let q = field.order();
    match params {
        PureStateParams::RealBeta(beta) => {
            if !beta.is_finite() {
                return Err(Error::InvalidParameter(format!("beta must be finite, got {beta}")));
            }
            Ok(real_beta_state(q, beta))
        }
        PureStateParams::FieldBeta(beta) => {
            if !field.contains(beta) {
                return Err(Error::MismatchedDescriptor);
            }
            let exponents = (0..q).map(|n| Some(field.trace_idx(field.mul_idx(beta.index(), n)))).collect();
            StateVector::from_exact(ExactForm { scale_denom_sqrt: q, root_order: field.characteristic(), exponents })
        }
    }
}

/// `exp(i n β) / √q` for `n = 0 .. q-1`.
pub fn real_beta_state(q: u32, beta: f64) -> StateVector {
    let scale = 1.0 / f64::from(q).sqrt();
    let amplitudes = (0..q).map(|n| Complex64::from_polar(scale, f64::from(n) * beta)).collect();
    StateVector::new_unchecked(amplitudes, None)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseStatistics {
    /// `|⟨θ_b|f⟩|²`.
    pub distribution: Vec<f64>,
    /// `Σ θ_b P_b`.
    pub expectation: f64,
    /// `Σ (θ_b - ⟨Θ⟩)² P_b`.
    pub variance: f64,
    /// `Σ (θ_b² - 2 θ_b ⟨Θ⟩) P_b`, the expansion with the `⟨Θ⟩²` term dropped.
    pub variance_expansion: f64,
    /// The expansion restricted to its `n = m` terms: each `P_b` and `⟨Θ⟩`
    /// replaced by their diagonal parts `Σ_n |θ_b(n)|² |f_n|²` and
    /// `Σ_n Θ(n, n) |f_n|²`.
    pub diagonal_contribution: f64,
}

pub fn phase_statistics(state: &StateVector, basis: &Basis, eigenvalues: &[f64]) -> Result<PhaseStatistics> {
    let dim = basis.dim();
    if state.dim() != dim {
        return Err(Error::DimensionMismatch { left: dim, right: state.dim() });
    }
    if eigenvalues.len() != dim {
        return Err(Error::DimensionMismatch { left: dim, right: eigenvalues.len() });
    }
    let f = state.amplitudes();
    let distribution: Vec<f64> = basis.vectors().iter().map(|v| dot(v.amplitudes(), f).norm_sqr()).collect();
    let expectation: f64 = eigenvalues.iter().zip(&distribution).map(|(t, p)| t * p).sum();
    let variance = eigenvalues.iter().zip(&distribution).map(|(t, p)| (t - expectation).powi(2) * p).sum();
    let variance_expansion =
        eigenvalues.iter().zip(&distribution).map(|(t, p)| (t * t - 2.0 * t * expectation) * p).sum();

    let weights: Vec<f64> = f.iter().map(|a| a.norm_sqr()).collect();
    let diag_prob: Vec<f64> = basis
        .vectors()
        .iter()
        .map(|v| v.amplitudes().iter().zip(&weights).map(|(a, w)| a.norm_sqr() * w).sum())
        .collect();
    let diag_expectation: f64 = (0..dim)
        .map(|n| {
            let theta_nn: f64 =
                basis.vectors().iter().zip(eigenvalues).map(|(v, t)| t * v.amplitudes()[n].norm_sqr()).sum();
            theta_nn * weights[n]
        })
        .sum();
    let diagonal_contribution =
        eigenvalues.iter().zip(&diag_prob).map(|(t, p)| (t * t - 2.0 * t * diag_expectation) * p).sum();

    Ok(PhaseStatistics { distribution, expectation, variance, variance_expansion, diagonal_contribution })
}

/// `π² (q - 1)(4 - 2q) / (3 q²)`, the value of
/// [`PhaseStatistics::diagonal_contribution`] for any unit state and a flat
/// basis with labels `2πb/q`.
pub fn diagonal_contribution_value(q: u32) -> f64 {
    let q = f64::from(q);
    PI * PI * (q - 1.0) * (4.0 - 2.0 * q) / (3.0 * q * q)
}
