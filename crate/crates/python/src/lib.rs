//! Python module `fpbprobe`: curves, joint tables, entropy measures and the
//! Monte Carlo simulator from `fpb-core`.

use fpb_core::curves::{self, CurveId};
use fpb_core::info::{self, Conditioning, EntropyOrder};
use fpb_core::montecarlo::{self, SimulationConfig};
use fpb_core::probe::{self, ErrorProbability, ProbeKind};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_pe(pe: f64) -> PyResult<ErrorProbability> {
    ErrorProbability::new(pe).map_err(value_error)
}

fn parse_kind(kind: &str) -> PyResult<ProbeKind> {
    kind.parse().map_err(value_error)
}

fn parse_curve(id: &str) -> PyResult<CurveId> {
    id.parse().map_err(value_error)
}

fn parse_order(alpha: f64) -> PyResult<EntropyOrder> {
    EntropyOrder::new(alpha).map_err(value_error)
}

fn parse_conditioning(given: &str) -> PyResult<Conditioning> {
    match given {
        "bob_given_eve" | "x|y" => Ok(Conditioning::XGivenY),
        "eve_given_bob" | "y|x" => Ok(Conditioning::YGivenX),
        other => Err(PyValueError::new_err(format!(
            "unknown conditioning {other:?}, expected 'bob_given_eve' or 'eve_given_bob'"
        ))),
    }
}

/// Joint distribution with Bob's bit on rows and Eve's outcome on columns.
#[pyclass(
    name = "JointDistribution",
    module = "fpbprobe",
    frozen,
    skip_from_py_object
)]
#[derive(Clone)]
struct PyJoint {
    inner: info::JointDistribution,
}

#[pymethods]
impl PyJoint {
    #[new]
    fn new(row_labels: Vec<String>, col_labels: Vec<String>, probs: Vec<f64>) -> PyResult<Self> {
        info::JointDistribution::new(row_labels, col_labels, probs)
            .map(|inner| Self { inner })
            .map_err(value_error)
    }

    #[getter]
    fn row_labels(&self) -> Vec<String> {
        self.inner.row_labels().to_vec()
    }

    #[getter]
    fn col_labels(&self) -> Vec<String> {
        self.inner.col_labels().to_vec()
    }

    /// Rows as nested lists.
    fn table(&self) -> Vec<Vec<f64>> {
        self.inner
            .cells()
            .chunks(self.inner.cols())
            .map(<[f64]>::to_vec)
            .collect()
    }

    fn get(&self, row: usize, col: usize) -> PyResult<f64> {
        if row >= self.inner.rows() || col >= self.inner.cols() {
            return Err(PyValueError::new_err("index out of range"));
        }
        Ok(self.inner.get(row, col))
    }

    fn row_marginal(&self) -> Vec<f64> {
        self.inner.row_marginal()
    }

    fn col_marginal(&self) -> Vec<f64> {
        self.inner.col_marginal()
    }

    fn transpose(&self) -> Self {
        Self {
            inner: self.inner.transpose(),
        }
    }

    fn __repr__(&self) -> String {
        format!("JointDistribution({:?})", self.table())
    }
}

/// A joint table plus where it came from.
#[pyclass(name = "ProbeStatistics", module = "fpbprobe", frozen)]
struct PyStatistics {
    inner: probe::ProbeStatistics,
}

#[pymethods]
impl PyStatistics {
    #[getter]
    fn joint(&self) -> PyJoint {
        PyJoint {
            inner: self.inner.joint.clone(),
        }
    }

    #[getter]
    fn pe(&self) -> f64 {
        self.inner.pe.value()
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind.as_str()
    }

    #[getter]
    fn empirical(&self) -> bool {
        self.inner.source == probe::Source::Empirical
    }

    #[getter]
    fn trials(&self) -> Option<u64> {
        self.inner.trials
    }

    #[getter]
    fn retained(&self) -> Option<u64> {
        self.inner.retained
    }

    #[getter]
    fn seed(&self) -> Option<u64> {
        self.inner.seed
    }

    #[getter]
    fn degenerate(&self) -> bool {
        self.inner.degenerate
    }

    fn __repr__(&self) -> String {
        format!(
            "ProbeStatistics(kind={:?}, pe={}, empirical={})",
            self.kind(),
            self.pe(),
            self.empirical()
        )
    }
}

#[pyfunction]
fn curve_ids() -> Vec<&'static str> {
    CurveId::ALL.iter().map(|c| c.as_str()).collect()
}

/// Closed-form information curve `id` at error rate `pe`.
#[pyfunction]
fn curve(id: &str, pe: f64) -> PyResult<f64> {
    curves::curve(parse_curve(id)?, pe).map_err(value_error)
}

/// The same curve, evaluated from the joint table.
#[pyfunction]
fn curve_from_table(id: &str, pe: f64) -> PyResult<f64> {
    curves::curve_from_table(parse_curve(id)?, pe).map_err(value_error)
}

#[pyfunction]
fn kappa(pe: f64) -> PyResult<f64> {
    curves::kappa(pe).map_err(value_error)
}

/// `(pe, gap)` maximizing `curve(a) - curve(b)`.
#[pyfunction]
#[pyo3(signature = (a, b, resolution = 1e-3))]
fn max_gap(a: &str, b: &str, resolution: f64) -> PyResult<(f64, f64)> {
    let g = curves::max_gap(parse_curve(a)?, parse_curve(b)?, resolution).map_err(value_error)?;
    Ok((g.pe, g.gap))
}

#[pyfunction]
fn small_pe_ratio(pe: f64) -> PyResult<f64> {
    curves::small_pe_ratio(pe).map_err(value_error)
}

#[pyfunction]
fn opaque_feasible(pe: f64, transmissivity: f64) -> PyResult<bool> {
    curves::opaque_feasible(pe, transmissivity).map_err(value_error)
}

#[pyfunction]
fn helstrom_error(pe: f64) -> PyResult<f64> {
    Ok(probe::helstrom_error(parse_pe(pe)?))
}

#[pyfunction]
fn inconclusive_probability(pe: f64) -> PyResult<f64> {
    Ok(probe::inconclusive_probability(parse_pe(pe)?))
}

/// Analytic joint table for `kind` ("helstrom" or "conclusive").
#[pyfunction]
fn joint_table(pe: f64, kind: &str) -> PyResult<PyStatistics> {
    Ok(PyStatistics {
        inner: probe::joint_table(parse_pe(pe)?, parse_kind(kind)?),
    })
}

#[pyfunction]
fn shannon_entropy(p: Vec<f64>) -> PyResult<f64> {
    info::shannon_entropy(&p).map_err(value_error)
}

/// Rényi entropy in bits; `alpha` may be 0, 1 or `math.inf`.
#[pyfunction]
fn renyi_entropy(p: Vec<f64>, alpha: f64) -> PyResult<f64> {
    info::renyi_entropy(&p, parse_order(alpha)?).map_err(value_error)
}

#[pyfunction]
fn conditional_renyi(joint: &PyJoint, alpha: f64, given: &str) -> PyResult<f64> {
    Ok(info::conditional_renyi(
        &joint.inner,
        parse_order(alpha)?,
        parse_conditioning(given)?,
    ))
}

#[pyfunction]
fn mutual_information(joint: &PyJoint) -> f64 {
    info::mutual_information(&joint.inner)
}

/// `R_alpha(X) - R_alpha(X|Y)` for `given="bob_given_eve"`, or the reverse.
#[pyfunction]
#[pyo3(signature = (joint, alpha, given = "bob_given_eve"))]
fn renyi_mutual_information(joint: &PyJoint, alpha: f64, given: &str) -> PyResult<f64> {
    Ok(info::renyi_mutual_information(
        &joint.inner,
        parse_order(alpha)?,
        parse_conditioning(given)?,
    ))
}

/// Monte Carlo estimate of the joint table. Releases the GIL while running.
#[pyfunction]
#[pyo3(signature = (pe, kind, trials, seed = 42))]
fn simulate(py: Python<'_>, pe: f64, kind: &str, trials: u64, seed: u64) -> PyResult<PyStatistics> {
    let config = SimulationConfig::new(pe, parse_kind(kind)?, trials, seed).map_err(value_error)?;
    let inner = py
        .detach(|| montecarlo::simulate(config))
        .map_err(value_error)?;
    Ok(PyStatistics { inner })
}

#[pymodule]
fn fpbprobe(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("PE_MAX", ErrorProbability::MAX)?;
    m.add_class::<PyJoint>()?;
    m.add_class::<PyStatistics>()?;
    m.add_function(wrap_pyfunction!(curve_ids, m)?)?;
    m.add_function(wrap_pyfunction!(curve, m)?)?;
    m.add_function(wrap_pyfunction!(curve_from_table, m)?)?;
    m.add_function(wrap_pyfunction!(kappa, m)?)?;
    m.add_function(wrap_pyfunction!(max_gap, m)?)?;
    m.add_function(wrap_pyfunction!(small_pe_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(opaque_feasible, m)?)?;
    m.add_function(wrap_pyfunction!(helstrom_error, m)?)?;
    m.add_function(wrap_pyfunction!(inconclusive_probability, m)?)?;
    m.add_function(wrap_pyfunction!(joint_table, m)?)?;
    m.add_function(wrap_pyfunction!(shannon_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(renyi_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(conditional_renyi, m)?)?;
    m.add_function(wrap_pyfunction!(mutual_information, m)?)?;
    m.add_function(wrap_pyfunction!(renyi_mutual_information, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    Ok(())
}
