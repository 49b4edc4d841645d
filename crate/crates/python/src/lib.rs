//! Python bindings. Field and ring elements cross the boundary as their
//! canonical integer indices; reports come back as plain dicts.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use mubkit::characters;
use mubkit::entangle::{self, BellFile};
use mubkit::finitefield::{FieldElement, GaloisField};
use mubkit::galoisring::{GaloisRing, RingElement};
use mubkit::mub::{self, MubReport};
use mubkit::phase;
use mubkit::states::{self, StateVector};

fn err(e: mubkit::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_dict<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(name = "GaloisField", frozen)]
struct PyField(GaloisField);

impl PyField {
    fn el(&self, idx: u32) -> PyResult<FieldElement> {
        self.0.element(idx).map_err(err)
    }
}

#[pymethods]
impl PyField {
    #[new]
    #[pyo3(signature = (p, m=1))]
    fn new(p: u32, m: u32) -> PyResult<Self> {
        GaloisField::new(p, m).map(Self).map_err(err)
    }

    #[getter]
    fn p(&self) -> u32 {
        self.0.characteristic()
    }

    #[getter]
    fn m(&self) -> u32 {
        self.0.degree()
    }

    #[getter]
    fn q(&self) -> u32 {
        self.0.order()
    }

    #[getter]
    fn modulus(&self) -> Vec<u32> {
        self.0.modulus().to_vec()
    }

    #[getter]
    fn generator(&self) -> u32 {
        self.0.generator().index()
    }

    fn coeffs(&self, x: u32) -> PyResult<Vec<u32>> {
        self.0.coeffs(self.el(x)?).map_err(err)
    }

    #[pyo3(name = "from_coeffs")]
    fn index_of_coeffs(&self, coeffs: Vec<u32>) -> PyResult<u32> {
        self.0.from_coeffs(&coeffs).map(FieldElement::index).map_err(err)
    }

    fn add(&self, x: u32, y: u32) -> PyResult<u32> {
        self.0.add(self.el(x)?, self.el(y)?).map(FieldElement::index).map_err(err)
    }

    fn sub(&self, x: u32, y: u32) -> PyResult<u32> {
        self.0.sub(self.el(x)?, self.el(y)?).map(FieldElement::index).map_err(err)
    }

    fn mul(&self, x: u32, y: u32) -> PyResult<u32> {
        self.0.mul(self.el(x)?, self.el(y)?).map(FieldElement::index).map_err(err)
    }

    fn pow(&self, x: u32, e: u64) -> PyResult<u32> {
        self.0.pow(self.el(x)?, e).map(FieldElement::index).map_err(err)
    }

    fn inv(&self, x: u32) -> PyResult<u32> {
        self.0.inv(self.el(x)?).map(FieldElement::index).map_err(err)
    }

    fn trace(&self, x: u32) -> PyResult<u32> {
        self.0.trace(self.el(x)?).map_err(err)
    }

    fn dlog(&self, x: u32) -> PyResult<u32> {
        self.0.dlog(self.el(x)?).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("GaloisField(p={}, m={})", self.0.characteristic(), self.0.degree())
    }
}

#[pyclass(name = "GaloisRing", frozen)]
struct PyRing(GaloisRing);

impl PyRing {
    fn el(&self, idx: u32) -> PyResult<RingElement> {
        self.0.element(idx).map_err(err)
    }
}

#[pymethods]
impl PyRing {
    #[new]
    fn new(m: u32) -> PyResult<Self> {
        GaloisRing::new(m).map(Self).map_err(err)
    }

    #[getter]
    fn m(&self) -> u32 {
        self.0.degree()
    }

    #[getter]
    fn size(&self) -> u32 {
        self.0.size()
    }

    #[getter]
    fn dimension(&self) -> u32 {
        self.0.dimension()
    }

    #[getter]
    fn h(&self) -> Vec<u32> {
        self.0.h().to_vec()
    }

    fn teichmuller(&self) -> Vec<u32> {
        self.0.teichmuller().into_iter().map(RingElement::index).collect()
    }

    fn coeffs(&self, y: u32) -> PyResult<Vec<u32>> {
        self.0.coeffs(self.el(y)?).map_err(err)
    }

    fn add(&self, x: u32, y: u32) -> PyResult<u32> {
        self.0.add(self.el(x)?, self.el(y)?).map(RingElement::index).map_err(err)
    }

    fn mul(&self, x: u32, y: u32) -> PyResult<u32> {
        self.0.mul(self.el(x)?, self.el(y)?).map(RingElement::index).map_err(err)
    }

    /// `y = a + 2b` with `a`, `b` Teichmüller elements.
    fn decompose(&self, y: u32) -> PyResult<(u32, u32)> {
        let (a, b) = self.0.decompose(self.el(y)?).map_err(err)?;
        Ok((a.index(), b.index()))
    }

    fn frobenius(&self, y: u32) -> PyResult<u32> {
        self.0.frobenius(self.el(y)?).map(RingElement::index).map_err(err)
    }

    fn trace(&self, y: u32) -> PyResult<u32> {
        self.0.trace(self.el(y)?).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("GaloisRing(m={})", self.0.degree())
    }
}

#[pyclass(name = "Basis", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyBasis(states::Basis);

#[pymethods]
impl PyBasis {
    #[getter]
    fn label(&self) -> &str {
        self.0.label()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn eigenvalues(&self) -> Option<Vec<f64>> {
        self.0.eigenvalues().map(<[f64]>::to_vec)
    }

    /// Vectors as rows of amplitudes.
    fn vectors(&self) -> Vec<Vec<Complex64>> {
        self.0.vectors().iter().map(|v| v.amplitudes().to_vec()).collect()
    }

    fn orthonormality_residual(&self) -> f64 {
        self.0.orthonormality_residual()
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(Self).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn __len__(&self) -> usize {
        self.0.dim()
    }

    fn __repr__(&self) -> String {
        format!("Basis(label={:?}, dim={})", self.0.label(), self.0.dim())
    }
}

fn wrap(bases: Vec<states::Basis>) -> Vec<PyBasis> {
    bases.into_iter().map(PyBasis).collect()
}

/// The `q` twisted Galois bases of GF(p^m), odd `p`.
#[pyfunction]
#[pyo3(signature = (field, k=0))]
fn mub_field_set(field: &PyField, k: u32) -> PyResult<Vec<PyBasis>> {
    mub::mub_field_set(&field.0, k).map(wrap).map_err(err)
}

/// The `2^m` Galois bases over GR(4, m).
#[pyfunction]
#[pyo3(signature = (ring, k=0))]
fn mub_ring_set(ring: &PyRing, k: u32) -> PyResult<Vec<PyBasis>> {
    mub::mub_ring_set(&ring.0, k).map(wrap).map_err(err)
}

#[pyfunction]
fn computational_basis(q: u32) -> PyBasis {
    PyBasis(mub::computational_basis(q))
}

#[pyfunction]
#[pyo3(signature = (q, theta0=0.0))]
fn pegg_barnett_basis(q: u32, theta0: f64) -> PyResult<PyBasis> {
    mub::pegg_barnett_basis(q, theta0).map(PyBasis).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (bases, include_computational=true, tolerance=states::CLASSIFY_TOL))]
fn verify_mubs<'py>(
    py: Python<'py>,
    bases: Vec<PyRef<'py, PyBasis>>,
    include_computational: bool,
    tolerance: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let bases: Vec<states::Basis> = bases.iter().map(|b| b.0.clone()).collect();
    let report: MubReport = mub::verify_mub_set_with(&bases, include_computational, tolerance).map_err(err)?;
    to_dict(py, &report)
}

/// `(value, bound, bound_satisfied)` of the Gauss sum with twisted multiplicative
/// character `k`.
#[pyfunction]
#[pyo3(signature = (field, k, trivial_additive=false))]
fn gauss_sum(field: &PyField, k: u32, trivial_additive: bool) -> (Complex64, Option<f64>, bool) {
    let r = characters::gauss_sum(&field.0, k, trivial_additive);
    (r.value, r.bound, r.bound_satisfied)
}

/// `(value, bound, bound_satisfied)` of `Σ_x κ(f(x))` for a polynomial given
/// as coefficient indices, constant term first.
#[pyfunction]
fn weil_sum(field: &PyField, coeffs: Vec<u32>) -> PyResult<(Complex64, Option<f64>, bool)> {
    let f = coeffs.into_iter().map(|c| field.el(c)).collect::<PyResult<Vec<_>>>()?;
    let r = characters::weil_sum(&field.0, &f).map_err(err)?;
    Ok((r.value, r.bound, r.bound_satisfied))
}

/// Phase operator of the basis `(a, k)` as rows.
#[pyfunction]
fn phase_operator(field: &PyField, a: u32, k: u32) -> PyResult<Vec<Vec<Complex64>>> {
    let theta = phase::phase_operator_closed(&field.0, field.el(a)?, k).map_err(err)?;
    let d = theta.dim();
    Ok((0..d).map(|n| (0..d).map(|m| theta.get(n, m)).collect()).collect())
}

/// Phase statistics of `f_n = e^{i n beta}/√q` in the basis `(a, k)`.
#[pyfunction]
fn phase_stats<'py>(py: Python<'py>, field: &PyField, a: u32, k: u32, beta: f64) -> PyResult<Bound<'py, PyAny>> {
    let basis = mub::mub_field(&field.0, field.el(a)?, k).map_err(err)?;
    let state = phase::real_beta_state(field.0.order(), beta);
    let stats = phase::phase_statistics(&state, &basis, basis.eigenvalues().unwrap_or_default()).map_err(err)?;
    to_dict(py, &stats)
}

/// Phase statistics of an arbitrary unit state.
#[pyfunction]
fn phase_stats_state<'py>(py: Python<'py>, basis: &PyBasis, amplitudes: Vec<Complex64>) -> PyResult<Bound<'py, PyAny>> {
    let state = StateVector::new(amplitudes).map_err(err)?;
    let eig = basis.0.eigenvalues().ok_or_else(|| PyValueError::new_err("basis has no eigenvalues"))?;
    let stats = phase::phase_statistics(&state, &basis.0, eig).map_err(err)?;
    to_dict(py, &stats)
}

#[pyfunction]
fn bell_field(field: &PyField, h: u32, a: u32, b: u32) -> PyResult<Vec<Complex64>> {
    let s = entangle::bell_field(&field.0, field.el(h)?, field.el(a)?, field.el(b)?).map_err(err)?;
    Ok(s.amplitudes().to_vec())
}

/// Generate and verify one Bell-type family: `"mult"` (needs `q`), `"field"`
/// (needs `p` and `m`) or `"ring"` (needs `m`).
#[pyfunction]
#[pyo3(signature = (kind, q=None, p=None, m=None, tolerance=states::CLASSIFY_TOL))]
fn verify_bell<'py>(
    py: Python<'py>,
    kind: &str,
    q: Option<u32>,
    p: Option<u32>,
    m: Option<u32>,
    tolerance: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let missing = |name: &str| PyValueError::new_err(format!("kind {kind:?} needs {name}"));
    let file = match kind {
        "mult" => BellFile::mult(q.ok_or_else(|| missing("q"))?),
        "field" => {
            let field =
                GaloisField::new(p.ok_or_else(|| missing("p"))?, m.ok_or_else(|| missing("m"))?).map_err(err)?;
            BellFile::field(&field)
        }
        "ring" => BellFile::ring(&GaloisRing::new(m.ok_or_else(|| missing("m"))?).map_err(err)?),
        other => return Err(PyValueError::new_err(format!("unknown kind {other:?}"))),
    }
    .map_err(err)?;
    to_dict(py, &file.verify(tolerance))
}

#[pymodule]
#[pyo3(name = "mubkit")]
fn mubkit_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyRing>()?;
    m.add_class::<PyBasis>()?;
    m.add_function(wrap_pyfunction!(mub_field_set, m)?)?;
    m.add_function(wrap_pyfunction!(mub_ring_set, m)?)?;
    m.add_function(wrap_pyfunction!(computational_basis, m)?)?;
    m.add_function(wrap_pyfunction!(pegg_barnett_basis, m)?)?;
    m.add_function(wrap_pyfunction!(verify_mubs, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_sum, m)?)?;
    m.add_function(wrap_pyfunction!(weil_sum, m)?)?;
    m.add_function(wrap_pyfunction!(phase_operator, m)?)?;
    m.add_function(wrap_pyfunction!(phase_stats, m)?)?;
    m.add_function(wrap_pyfunction!(phase_stats_state, m)?)?;
    m.add_function(wrap_pyfunction!(bell_field, m)?)?;
    m.add_function(wrap_pyfunction!(verify_bell, m)?)?;
    Ok(())
}
