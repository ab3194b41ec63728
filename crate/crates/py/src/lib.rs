//! Python bindings for the Hilbert-Schmidt frame toolkit. The module
//! exposes one class, `Frame`, holding a frame of operator maps on
//! `C^n`, plus a `check` entry point that evaluates any of the named
//! identities and returns the report as a dict.

use hsframe_core::generators::{
    gen_gaussian_hs, gen_harmonic, generate, parsevalize_hs, AnyFrame, GenSpec,
};
use hsframe_core::hs_frame::{
    duality_tolerance, embed_vector_frame, is_alternate_dual_hs, make_alternate_dual, HSFrame,
};
use hsframe_core::identities::{
    alternate_dual_check, canonical_dual_check, complex_identity_check, lemma_pp, lemma_pq,
    parseval_identity, parseval_inequality, prop_operator, prop_selfadjoint,
    weighted_identity_check, CheckReport, CheckRequest, Theorem, ToleranceConfig,
};
use hsframe_core::vector_frame::VectorFrame;
use hsframe_core::{Complex64, ComplexMatrix, FrameError, SubsetMask};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py_err(e: FrameError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_err(e: serde_json::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn report_dict<'py>(py: Python<'py>, report: &CheckReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("theorem", report.theorem.name())?;
    d.set_item("lhs", report.lhs)?;
    d.set_item("rhs", report.rhs)?;
    d.set_item("residual", report.residual)?;
    d.set_item("bound", report.bound)?;
    d.set_item("margin", report.margin)?;
    d.set_item("pass", report.pass)?;
    d.set_item("scale", report.scale)?;
    Ok(d)
}

/// A frame of Hilbert-Schmidt operator maps on `C^n`. Ordinary vector
/// frames correspond to maps with a one-dimensional target side.
#[pyclass(frozen, skip_from_py_object, module = "hsframe_py")]
#[derive(Clone)]
pub struct Frame {
    inner: HSFrame,
}

#[pymethods]
impl Frame {
    /// I.i.d. complex Gaussian frame of `count` maps `C^n -> C2(C^m)`.
    #[staticmethod]
    #[pyo3(signature = (n, m, count, seed = 0))]
    fn gaussian(n: usize, m: usize, count: usize, seed: u64) -> PyResult<Self> {
        Ok(Self { inner: gen_gaussian_hs(n, m, count, seed).map_err(to_py_err)? })
    }

    /// Tight frame from the first `n` coordinates of the DFT on
    /// `C^count`.
    #[staticmethod]
    fn harmonic(n: usize, count: usize) -> PyResult<Self> {
        let vf = gen_harmonic(n, count).map_err(to_py_err)?;
        Ok(Self { inner: embed_vector_frame(&vf) })
    }

    /// Frame over the given vectors (each a list of complex entries).
    #[staticmethod]
    fn from_vectors(vectors: Vec<Vec<Complex64>>) -> PyResult<Self> {
        let n = vectors.first().map(Vec::len).unwrap_or(0);
        let cols = vectors.iter().map(|v| ComplexMatrix::column(v)).collect();
        let vf = VectorFrame::new(n.max(1), cols).map_err(to_py_err)?;
        Ok(Self { inner: embed_vector_frame(&vf) })
    }

    /// Runs a JSON generator recipe (the same format the CLI accepts).
    #[staticmethod]
    #[pyo3(signature = (text, seed = 0))]
    fn from_recipe(text: &str, seed: u64) -> PyResult<Self> {
        let spec: GenSpec = serde_json::from_str(text).map_err(json_err)?;
        Ok(Self { inner: generate(&spec, seed).map_err(to_py_err)?.to_hs() })
    }

    /// Reads a frame from its JSON wire form.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let any: AnyFrame = serde_json::from_str(text).map_err(json_err)?;
        Ok(Self { inner: any.to_hs() })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(json_err)
    }

    #[getter]
    fn domain_dim(&self) -> usize {
        self.inner.domain_dim()
    }

    #[getter]
    fn target_side(&self) -> usize {
        self.inner.target_side()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Frame(n={}, m={}, N={})",
            self.inner.domain_dim(),
            self.inner.target_side(),
            self.inner.len()
        )
    }

    /// Optimal frame bounds `(A, B)`.
    fn frame_bounds(&self) -> PyResult<(f64, f64)> {
        self.inner.frame_bounds().map_err(to_py_err)
    }

    /// The frame operator `S` as a nested list, row by row.
    fn frame_operator(&self) -> Vec<Vec<Complex64>> {
        self.inner.frame_operator().to_rows()
    }

    /// The partial frame operator `S_K` for the given index subset.
    fn partial_operator(&self, subset: Vec<usize>) -> PyResult<Vec<Vec<Complex64>>> {
        let k = SubsetMask::from_indices(self.inner.len(), &subset).map_err(to_py_err)?;
        Ok(self.inner.partial_operator(&k).map_err(to_py_err)?.to_rows())
    }

    /// The frame energy `sum_j ||G_j f||^2` of a vector.
    fn energy(&self, f: Vec<Complex64>) -> PyResult<f64> {
        self.inner.energy(&ComplexMatrix::column(&f)).map_err(to_py_err)
    }

    /// The image `G_j f` as an `m x m` nested list.
    fn apply(&self, j: usize, f: Vec<Complex64>) -> PyResult<Vec<Vec<Complex64>>> {
        if j >= self.inner.len() {
            return Err(PyValueError::new_err(format!(
                "map index {j} out of range for a frame of {} maps",
                self.inner.len()
            )));
        }
        let image = self.inner.map(j).apply(&ComplexMatrix::column(&f)).map_err(to_py_err)?;
        Ok(image.to_rows())
    }

    /// The same frame post-composed with `S^{-1/2}`, making it Parseval.
    fn parsevalized(&self) -> PyResult<Self> {
        Ok(Self { inner: parsevalize_hs(&self.inner).map_err(to_py_err)? })
    }

    /// The canonical dual frame `(G_j S^{-1})`.
    fn canonical_dual(&self) -> PyResult<Self> {
        let pair = self.inner.canonical_dual().map_err(to_py_err)?;
        Ok(Self { inner: pair.dual().clone() })
    }

    /// A randomized alternate dual; `scale` sets the perturbation size
    /// relative to the canonical dual (zero gives the canonical dual).
    #[pyo3(signature = (seed = 0, scale = 1.0))]
    fn alternate_dual(&self, seed: u64, scale: f64) -> PyResult<Self> {
        let built = make_alternate_dual(&self.inner, seed, scale).map_err(to_py_err)?;
        Ok(Self { inner: built.pair.dual().clone() })
    }

    /// Whether `self` reconstructs with `other`, i.e.
    /// `sum_j other_j^* self_j` is the identity within `tol`.
    #[pyo3(signature = (other, tol = None))]
    fn is_dual_of(&self, other: PyRef<'_, Frame>, tol: Option<f64>) -> PyResult<bool> {
        let tol = tol.unwrap_or_else(|| duality_tolerance(self.inner.domain_dim()));
        is_alternate_dual_hs(&other.inner, &self.inner, tol)
            .map(|c| c.holds)
            .map_err(to_py_err)
    }
}

/// Evaluates one identity for a frame on one subset, vector, and lambda.
/// The operator-level checks derive `P = S_K` and `Q = S_Kc` from the
/// frame; the rest take the test vector `f`, with `dual` (and `weights`)
/// required by the alternate-dual family.
#[pyfunction]
#[pyo3(signature = (
    theorem, frame, subset, f = None, lambda_ = None, dual = None, weights = None,
    tol_eq = 1e-9, tol_ineq = 1e-10
))]
#[allow(clippy::too_many_arguments)]
fn check<'py>(
    py: Python<'py>,
    theorem: &str,
    frame: PyRef<'_, Frame>,
    subset: Vec<usize>,
    f: Option<Vec<Complex64>>,
    lambda_: Option<f64>,
    dual: Option<PyRef<'_, Frame>>,
    weights: Option<Vec<Complex64>>,
    tol_eq: f64,
    tol_ineq: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let theorem: Theorem = theorem.parse().map_err(to_py_err)?;
    let tolerances = ToleranceConfig::new(tol_eq, tol_ineq).map_err(to_py_err)?;
    let hs = &frame.inner;
    let k = SubsetMask::from_indices(hs.len(), &subset).map_err(to_py_err)?;

    let report = match theorem {
        Theorem::LemmaPp | Theorem::LemmaPq | Theorem::PropOperator | Theorem::PropSelfadjoint => {
            let p = hs.partial_operator(&k).map_err(to_py_err)?;
            let q = hs.partial_operator(&k.complement()).map_err(to_py_err)?;
            match theorem {
                Theorem::LemmaPp => lemma_pp(&p, &q, &tolerances),
                Theorem::LemmaPq => lemma_pq(&p, &q, &tolerances),
                Theorem::PropOperator => {
                    let lambda = lambda_
                        .ok_or_else(|| PyValueError::new_err("this check requires lambda_"))?;
                    prop_operator(&p, &q, lambda, &tolerances)
                }
                Theorem::PropSelfadjoint => {
                    let lambda = lambda_
                        .ok_or_else(|| PyValueError::new_err("this check requires lambda_"))?;
                    let fvec =
                        f.ok_or_else(|| PyValueError::new_err("this check requires f"))?;
                    prop_selfadjoint(&p, &q, lambda, &ComplexMatrix::column(&fvec), &tolerances)
                }
                _ => unreachable!(),
            }
        }
        _ => {
            let fvec = f.ok_or_else(|| PyValueError::new_err("this check requires f"))?;
            let fmat = ComplexMatrix::column(&fvec);
            let request = CheckRequest {
                frame: hs,
                dual: dual.as_ref().map(|d| &d.inner),
                subset: k,
                lambda: lambda_,
                weights,
                test_vector: &fmat,
                tolerances,
            };
            match theorem {
                Theorem::ParsevalIdentity => parseval_identity(&request),
                Theorem::ParsevalInequality => parseval_inequality(&request),
                Theorem::CanonicalDual => canonical_dual_check(&request),
                Theorem::AlternateDual => alternate_dual_check(&request),
                Theorem::ComplexIdentity => complex_identity_check(&request),
                Theorem::WeightedIdentity => weighted_identity_check(&request),
                _ => unreachable!(),
            }
        }
    }
    .map_err(to_py_err)?;
    report_dict(py, &report)
}

/// Schatten p-norm of a matrix given as a nested list (`p >= 1` or
/// `inf`), computed from its singular values.
#[pyfunction]
fn schatten_norm(matrix: Vec<Vec<Complex64>>, p: f64) -> PyResult<f64> {
    let m = ComplexMatrix::from_rows(&matrix).map_err(to_py_err)?;
    m.schatten_norm(p).map_err(to_py_err)
}

/// Names accepted by `check`, in presentation order.
#[pyfunction]
fn theorems() -> Vec<&'static str> {
    Theorem::ALL.iter().map(|t| t.name()).collect()
}

fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Frame>()?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(schatten_norm, m)?)?;
    m.add_function(wrap_pyfunction!(theorems, m)?)?;
    Ok(())
}

#[pymodule]
fn hsframe_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}
