//! Python bindings. Words are digit strings (`"121"`, identity `"e"`),
//! roots are simple-root coefficient tuples, weights are strings like `"-1/2,-1"`.

use std::sync::{Arc, Mutex};

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use signed_kl::kl::KlTable;
use signed_kl::sigchar::{self, SignatureEngine, SignatureLevels};
use signed_kl::signs::Signs;
use signed_kl::skl::{self, ADescent, SklTable};
use signed_kl::{sweep, CoxeterGroup, LatticeVector, Weight};

fn err(e: signed_kl::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_lambda(rs: &signed_kl::RootSystem, lambda: &str) -> PyResult<Weight> {
    if lambda.trim() == "-rho" {
        Ok(-&rs.rho())
    } else {
        lambda.parse().map_err(err)
    }
}

#[pyclass(name = "RootSystem", frozen)]
pub struct PyRootSystem {
    inner: signed_kl::RootSystem,
}

#[pymethods]
impl PyRootSystem {
    #[new]
    #[pyo3(signature = (label, noncompact = Vec::new()))]
    fn new(label: &str, noncompact: Vec<usize>) -> PyResult<Self> {
        Ok(PyRootSystem { inner: signed_kl::RootSystem::from_label(label, &noncompact).map_err(err)? })
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn noncompact(&self) -> Vec<usize> {
        self.inner.noncompact_simple()
    }

    fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        self.inner.cartan_matrix().to_vec()
    }

    fn positive_roots(&self) -> Vec<Vec<i64>> {
        self.inner.positive_roots().iter().map(|r| r.0.clone()).collect()
    }

    fn is_compact(&self, root: Vec<i64>) -> bool {
        self.inner.is_compact_root(&LatticeVector(root))
    }

    /// ε(μ) ∈ {0, 1}.
    fn grading(&self, mu: Vec<i64>) -> u8 {
        self.inner.epsilon_grading(&LatticeVector(mu))
    }

    fn rho(&self) -> String {
        self.inner.rho().to_string()
    }

    fn __repr__(&self) -> String {
        format!("RootSystem('{}', noncompact={:?})", self.inner.label(), self.inner.noncompact_simple())
    }
}

#[pyclass(name = "WeylGroup", frozen)]
pub struct PyWeylGroup {
    inner: Arc<CoxeterGroup>,
}

#[pymethods]
impl PyWeylGroup {
    #[new]
    fn new(rs: &PyRootSystem) -> PyResult<Self> {
        Ok(PyWeylGroup { inner: Arc::new(CoxeterGroup::weyl(&rs.inner).map_err(err)?) })
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    fn longest(&self) -> String {
        self.inner.word_string(self.inner.longest())
    }

    fn elements(&self) -> Vec<String> {
        self.inner.elements().map(|w| self.inner.word_string(w)).collect()
    }

    fn length(&self, w: &str) -> PyResult<usize> {
        Ok(self.inner.length(self.inner.parse_word(w).map_err(err)?))
    }

    fn mul(&self, x: &str, y: &str) -> PyResult<String> {
        let g = &self.inner;
        Ok(g.word_string(g.mul(g.parse_word(x).map_err(err)?, g.parse_word(y).map_err(err)?)))
    }

    fn bruhat_leq(&self, x: &str, y: &str) -> PyResult<bool> {
        let g = &self.inner;
        Ok(g.bruhat_leq(g.parse_word(x).map_err(err)?, g.parse_word(y).map_err(err)?))
    }
}

#[pyclass(name = "KLTable")]
pub struct PyKlTable {
    table: Mutex<KlTable>,
    group: Arc<CoxeterGroup>,
}

#[pymethods]
impl PyKlTable {
    #[new]
    fn new(group: &PyWeylGroup) -> Self {
        PyKlTable {
            table: Mutex::new(KlTable::new(Arc::clone(&group.inner))),
            group: Arc::clone(&group.inner),
        }
    }

    /// Coefficients of `P_{x,y}`, constant term first.
    #[pyo3(signature = (x, y, twisted = false))]
    fn polynomial(&self, x: &str, y: &str, twisted: bool) -> PyResult<Vec<i64>> {
        let (x, y) = (self.group.parse_word(x).map_err(err)?, self.group.parse_word(y).map_err(err)?);
        let mut t = self.table.lock().expect("not poisoned");
        let p = if twisted { t.twisted(x, y) } else { t.kl_poly(x, y) };
        Ok(p.coeffs().to_vec())
    }
}

#[pyclass(name = "SignedKLTable")]
pub struct PySklTable {
    table: Mutex<SklTable>,
}

#[pymethods]
impl PySklTable {
    #[new]
    #[pyo3(signature = (rs, lambda_ = "-rho", a_descent = "corrected"))]
    fn new(rs: &PyRootSystem, lambda_: &str, a_descent: &str) -> PyResult<Self> {
        let lambda = parse_lambda(&rs.inner, lambda_)?;
        let mode: ADescent = a_descent.parse().map_err(err)?;
        Ok(PySklTable { table: Mutex::new(SklTable::with_mode(&rs.inner, &lambda, mode).map_err(err)?) })
    }

    /// Words of the integral Weyl group, in its own generators.
    fn elements(&self) -> Vec<String> {
        let t = self.table.lock().expect("not poisoned");
        let g = &t.integral_data().group;
        g.elements().map(|w| g.word_string(w)).collect()
    }

    fn polynomial(&self, x: &str, y: &str) -> PyResult<Vec<i64>> {
        let mut t = self.table.lock().expect("not poisoned");
        let g = &t.integral_data().group;
        let (x, y) = (g.parse_word(x).map_err(err)?, g.parse_word(y).map_err(err)?);
        Ok(t.signed_kl(x, y).map_err(err)?.coeffs().to_vec())
    }
}

/// `ε(H_{γ,N}, s)`.
#[pyfunction]
fn epsilon_hyperplane(rs: &PyRootSystem, gamma: Vec<i64>, n: i64, chamber: &str) -> PyResult<i8> {
    let signs = Signs::new(&rs.inner).map_err(err)?;
    let s = signs.group().parse_word(chamber).map_err(err)?;
    signs.epsilon_hyperplane(&LatticeVector(gamma), n, s).map_err(err)
}

/// `(passed, pairs, mismatches)` for the signed/classical comparison on all pairs.
#[pyfunction]
#[pyo3(signature = (rs, lambda_ = "-rho", a_descent = "corrected"))]
fn verify_main_theorem(rs: &PyRootSystem, lambda_: &str, a_descent: &str) -> PyResult<(bool, usize, usize)> {
    let lambda = parse_lambda(&rs.inner, lambda_)?;
    let mode: ADescent = a_descent.parse().map_err(err)?;
    let r = skl::verify_main_theorem(&rs.inner, &lambda, mode).map_err(err)?;
    Ok((r.passed(), r.pairs.len(), r.mismatches))
}

/// Truncated `ch_s M(λ)` as `(μ, coefficient)` pairs for `e^{λ−ρ−μ}`.
#[pyfunction]
#[pyo3(signature = (rs, lambda_, cutoff = sigchar::DEFAULT_CUTOFF))]
fn signature_character(rs: &PyRootSystem, lambda_: &str, cutoff: usize) -> PyResult<Vec<(Vec<i64>, i64)>> {
    let engine = SignatureEngine::new(&rs.inner, cutoff).map_err(err)?;
    let lambda = parse_lambda(&rs.inner, lambda_)?;
    let sum = engine.signature_character_alcove_sum(&lambda).map_err(err)?;
    Ok(sum.character.terms().into_iter().map(|t| (t.mu.0, t.c)).collect())
}

#[pyfunction]
fn jantzen_signature_split(levels: Vec<(u64, u64)>) -> ((u64, u64), (u64, u64)) {
    sigchar::jantzen_signature_split(&SignatureLevels { levels })
}

/// `(id, name, passed, detail)` per acceptance criterion.
#[pyfunction]
fn run_sweep() -> PyResult<Vec<(String, String, bool, String)>> {
    let r = sweep::run_sweep().map_err(err)?;
    Ok(r.criteria.into_iter().map(|c| (c.id, c.name, c.passed, c.detail)).collect())
}

#[pymodule]
pub fn signed_kl_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRootSystem>()?;
    m.add_class::<PyWeylGroup>()?;
    m.add_class::<PyKlTable>()?;
    m.add_class::<PySklTable>()?;
    m.add_function(wrap_pyfunction!(epsilon_hyperplane, m)?)?;
    m.add_function(wrap_pyfunction!(verify_main_theorem, m)?)?;
    m.add_function(wrap_pyfunction!(signature_character, m)?)?;
    m.add_function(wrap_pyfunction!(jantzen_signature_split, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    Ok(())
}
