//! Python bindings for `vho-core`.
//!
//! ```python
//! import vho
//! vho.topsis_rank(["N1", "N2"], [[3, 3], [4, 4]], [0.5, 0.5], ["b", "c"])
//! sc = vho.Scenario.table1()
//! sc.scheme = "TDVHD"
//! print(sc.run())
//! ```

use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use vho_core::report::{self, SummaryRow};
use vho_core::{
    madm, network, protocol, scenario_file, sim, CriterionSpec, DecisionMatrix, DelayModel,
    Direction, QosVector, Scheme, TrustConfig, TrustTable,
};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn qos(v: [f64; 4]) -> QosVector {
    QosVector::from_array(v)
}

fn parse_direction(s: &str) -> PyResult<Direction> {
    Direction::parse(s).ok_or_else(|| value_err(format!("direction {s:?} is not 'b' or 'c'")))
}

fn parse_scheme(s: &str) -> PyResult<Scheme> {
    s.parse().map_err(value_err)
}

/// Validate a weight vector; returns it unchanged or raises ValueError.
#[pyfunction]
fn validate_weights(weights: Vec<f64>) -> PyResult<Vec<f64>> {
    madm::validate_weights(&weights)
        .map(|w| w.as_slice().to_vec())
        .map_err(value_err)
}

/// Rank alternatives with TOPSIS. Returns `[(id, closeness), ...]`, best first.
#[pyfunction]
fn topsis_rank(
    ids: Vec<String>,
    values: Vec<Vec<f64>>,
    weights: Vec<f64>,
    directions: Vec<String>,
) -> PyResult<Vec<(String, f64)>> {
    if weights.len() != directions.len() {
        return Err(value_err("weights and directions differ in length"));
    }
    let criteria = directions
        .iter()
        .zip(&weights)
        .enumerate()
        .map(|(j, (d, &w))| Ok(CriterionSpec::new(format!("c{j}"), parse_direction(d)?, w)))
        .collect::<PyResult<Vec<_>>>()?;
    let m = DecisionMatrix::new(ids, criteria, values).map_err(value_err)?;
    let ranked = madm::topsis_rank(&m).map_err(value_err)?;
    Ok(ranked
        .entries
        .into_iter()
        .map(|e| (e.id, e.score))
        .collect())
}

/// NQV a single network computes for its offer. Vectors are
/// `[jitter, delay, cost, bandwidth]`.
#[pyfunction]
fn nqv_local(required: [f64; 4], offered: [f64; 4], weights: Vec<f64>) -> PyResult<f64> {
    let w = madm::validate_weights(&weights).map_err(value_err)?;
    network::nqv_local(&qos(required), &qos(offered), &w).map_err(value_err)
}

/// Centralized selection over `{id: [jitter, delay, cost, bandwidth]}`.
#[pyfunction]
fn nsf_centralized(
    offers: Vec<(String, [f64; 4])>,
    weights: Vec<f64>,
) -> PyResult<Vec<(String, f64)>> {
    let w = madm::validate_weights(&weights).map_err(value_err)?;
    let offers: Vec<(String, QosVector)> = offers.into_iter().map(|(id, q)| (id, qos(q))).collect();
    Ok(network::nsf_centralized(&offers, &w)
        .map_err(value_err)?
        .into_iter()
        .map(|r| (r.network_id, r.nqv))
        .collect())
}

/// Decision-phase delay in ms for a scheme and candidate count.
#[pyfunction]
#[pyo3(signature = (scheme, n_candidates, msg_latency=5.0, calc_time=2.0, mt_slowdown=4.0, select_time=1.0))]
fn processing_delay(
    scheme: &str,
    n_candidates: usize,
    msg_latency: f64,
    calc_time: f64,
    mt_slowdown: f64,
    select_time: f64,
) -> PyResult<f64> {
    let model = DelayModel {
        msg_latency,
        calc_time,
        mt_slowdown,
        select_time,
        gate_cost: 0.0,
    };
    protocol::processing_delay(parse_scheme(scheme)?, n_candidates, &model).map_err(value_err)
}

/// One trust-test step. Returns the new level of trust.
#[pyfunction]
#[pyo3(signature = (lot, delivered, required, delta_plus=0.05, delta_minus=0.2))]
fn trust_update(
    lot: f64,
    delivered: [f64; 4],
    required: [f64; 4],
    delta_plus: f64,
    delta_minus: f64,
) -> f64 {
    let config = TrustConfig {
        lot_init: lot,
        delta_plus,
        delta_minus,
        ..TrustConfig::default()
    };
    let mut table = TrustTable::new();
    table.set("n", lot);
    protocol::trust_update(&mut table, "n", &qos(delivered), &qos(required), &config)
}

fn summary_dict<'py>(py: Python<'py>, row: &SummaryRow) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("scheme", row.scheme.to_string())?;
    d.set_item("n_vns", row.n_vns)?;
    d.set_item("seed", row.seed)?;
    d.set_item("processing_delay_ms", row.processing_delay_ms)?;
    d.set_item("e2e_delay_ms", row.e2e_delay_ms)?;
    d.set_item("throughput_bps", row.throughput_bps)?;
    d.set_item("handover_events", row.handover_events)?;
    d.set_item("blocked_handovers", row.blocked_handovers)?;
    Ok(d)
}

/// A simulation scenario.
#[pyclass(name = "Scenario")]
struct PyScenario {
    inner: sim::Scenario,
}

#[pymethods]
impl PyScenario {
    #[staticmethod]
    fn table1() -> Self {
        Self {
            inner: sim::Scenario::table1(),
        }
    }

    #[staticmethod]
    fn from_file(path: PathBuf) -> PyResult<Self> {
        scenario_file::parse_scenario(&path)
            .map(|inner| Self { inner })
            .map_err(|e| match e {
                scenario_file::ScenarioError::Io { .. } => PyIOError::new_err(e.to_string()),
                other => value_err(other),
            })
    }

    #[staticmethod]
    fn from_str(text: &str) -> PyResult<Self> {
        scenario_file::parse_scenario_str(text, "<string>")
            .map(|inner| Self { inner })
            .map_err(value_err)
    }

    #[getter]
    fn get_seed(&self) -> u64 {
        self.inner.seed
    }

    #[setter]
    fn set_seed(&mut self, seed: u64) {
        self.inner.seed = seed;
    }

    #[getter]
    fn get_scheme(&self) -> String {
        self.inner.scheme.to_string()
    }

    #[setter]
    fn set_scheme(&mut self, scheme: &str) -> PyResult<()> {
        self.inner.scheme = parse_scheme(scheme)?;
        Ok(())
    }

    #[getter]
    fn station_ids(&self) -> Vec<String> {
        self.inner.stations.iter().map(|s| s.id.clone()).collect()
    }

    /// Serialized scenario file text.
    fn to_text(&self) -> String {
        scenario_file::format_scenario(&self.inner)
    }

    /// Run the simulation and return the summary row as a dict.
    fn run<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let log = sim::run(&self.inner).map_err(value_err)?;
        summary_dict(py, &report::summarize(&self.inner, &log))
    }

    /// Run the simulation and return events.csv content.
    fn events_csv(&self) -> PyResult<String> {
        let log = sim::run(&self.inner).map_err(value_err)?;
        Ok(report::events_csv(&log))
    }

    /// All schemes over 2, 3 and 4 stations; a list of summary dicts.
    fn compare<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        report::compare(&self.inner)
            .map_err(value_err)?
            .iter()
            .map(|r| summary_dict(py, r))
            .collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Scenario(scheme={}, seed={}, stations={}, terminals={})",
            self.inner.scheme,
            self.inner.seed,
            self.inner.stations.len(),
            self.inner.terminals.len()
        )
    }
}

#[pymodule]
fn vho(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(validate_weights, m)?)?;
    m.add_function(wrap_pyfunction!(topsis_rank, m)?)?;
    m.add_function(wrap_pyfunction!(nqv_local, m)?)?;
    m.add_function(wrap_pyfunction!(nsf_centralized, m)?)?;
    m.add_function(wrap_pyfunction!(processing_delay, m)?)?;
    m.add_function(wrap_pyfunction!(trust_update, m)?)?;
    m.add_class::<PyScenario>()?;
    Ok(())
}
