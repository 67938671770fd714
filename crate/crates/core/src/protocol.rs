//! Handover decision schemes: centralized (C-VHD), distributed (D-VHD) and
//! trusted distributed (T-DVHD), plus the processing-delay model.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::madm::WeightVector;
use crate::network::{
    nqv_local, nsf_centralized, rank_reports, DecisionError, NqvReport, QosVector, VisitorNetwork,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Cvhd,
    Dvhd,
    Tdvhd,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Cvhd, Scheme::Dvhd, Scheme::Tdvhd];
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Cvhd => "CVHD",
            Scheme::Dvhd => "DVHD",
            Scheme::Tdvhd => "TDVHD",
        })
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().replace('-', "").as_str() {
            "CVHD" => Ok(Scheme::Cvhd),
            "DVHD" => Ok(Scheme::Dvhd),
            "TDVHD" => Ok(Scheme::Tdvhd),
            other => Err(format!(
                "unknown scheme {other:?} (expected CVHD, DVHD or TDVHD)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HandoverRequest {
    pub terminal_id: String,
    pub required: QosVector,
    pub weights: WeightVector,
    pub timestamp: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NqvResponse {
    pub network_id: String,
    pub nqv: f64,
    pub computed_from: QosVector,
}

/// Level-of-trust values per network, each kept in `[0, 1]`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrustTable {
    lots: BTreeMap<String, f64>,
}

impl TrustTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, network_id: &str) -> Option<f64> {
        self.lots.get(network_id).copied()
    }

    pub fn set(&mut self, network_id: impl Into<String>, lot: f64) {
        self.lots.insert(network_id.into(), lot.clamp(0.0, 1.0));
    }

    /// Returns the current LOT, inserting `lot_init` on first contact.
    pub fn entry(&mut self, network_id: &str, lot_init: f64) -> f64 {
        *self
            .lots
            .entry(network_id.to_string())
            .or_insert(lot_init.clamp(0.0, 1.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.lots.iter().map(|(k, &v)| (k.as_str(), v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrustConfig {
    pub lot_init: f64,
    pub threshold: f64,
    pub delta_plus: f64,
    pub delta_minus: f64,
}

impl Default for TrustConfig {
    fn default() -> Self {
        Self {
            lot_init: 1.0,
            threshold: 0.5,
            delta_plus: 0.05,
            delta_minus: 0.2,
        }
    }
}

impl TrustConfig {
    pub fn validate(&self) -> Result<(), String> {
        let unit = 0.0..=1.0;
        if !unit.contains(&self.lot_init) {
            return Err(format!("lot_init = {} must lie in [0, 1]", self.lot_init));
        }
        if !unit.contains(&self.threshold) {
            return Err(format!("threshold = {} must lie in [0, 1]", self.threshold));
        }
        if !(self.delta_plus > 0.0 && self.delta_plus.is_finite()) {
            return Err(format!("delta_plus = {} must be > 0", self.delta_plus));
        }
        if !(self.delta_minus > 0.0 && self.delta_minus.is_finite()) {
            return Err(format!("delta_minus = {} must be > 0", self.delta_minus));
        }
        if self.threshold > self.lot_init {
            return Err(format!(
                "threshold = {} exceeds lot_init = {}",
                self.threshold, self.lot_init
            ));
        }
        Ok(())
    }
}

/// Cost model for the decision phase, all times in milliseconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayModel {
    /// One-way message latency between terminal and a network.
    pub msg_latency: f64,
    /// One NQV computation on a base station.
    pub calc_time: f64,
    /// Slowdown of the same computation on the terminal (>= 1).
    pub mt_slowdown: f64,
    /// Comparing the collected NQVs.
    pub select_time: f64,
    /// One trust-gate lookup (T-DVHD only).
    pub gate_cost: f64,
}

impl Default for DelayModel {
    fn default() -> Self {
        Self {
            msg_latency: 5.0,
            calc_time: 2.0,
            mt_slowdown: 4.0,
            select_time: 1.0,
            gate_cost: 0.0,
        }
    }
}

impl DelayModel {
    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("msg_latency", self.msg_latency),
            ("calc_time", self.calc_time),
            ("select_time", self.select_time),
            ("gate_cost", self.gate_cost),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(format!("{name} = {v} must be finite and >= 0"));
            }
        }
        if !(self.mt_slowdown >= 1.0 && self.mt_slowdown.is_finite()) {
            return Err(format!("mt_slowdown = {} must be >= 1", self.mt_slowdown));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Selection {
    Selected { network_id: String, nqv: f64 },
    Blocked,
}

impl Selection {
    pub fn network_id(&self) -> Option<&str> {
        match self {
            Selection::Selected { network_id, .. } => Some(network_id),
            Selection::Blocked => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionOutcome {
    pub result: Selection,
    /// Milliseconds.
    pub processing_delay: f64,
    pub candidates_evaluated: usize,
    pub scheme: Scheme,
    /// Ranking the decision was taken from, best first.
    pub ranking: Vec<NqvReport>,
}

/// Decision-phase duration for `n_candidates` networks.
///
/// C-VHD evaluates every candidate serially on the terminal; the distributed
/// schemes run one evaluation per network in parallel. The T-DVHD gate cost
/// is charged separately by [`tdvhd_select`].
pub fn processing_delay(
    scheme: Scheme,
    n_candidates: usize,
    model: &DelayModel,
) -> Result<f64, DecisionError> {
    if n_candidates == 0 {
        return Err(DecisionError::ZeroCandidates);
    }
    let exchange = 2.0 * model.msg_latency + model.select_time;
    Ok(match scheme {
        Scheme::Cvhd => exchange + model.mt_slowdown * n_candidates as f64 * model.calc_time,
        Scheme::Dvhd | Scheme::Tdvhd => exchange + model.calc_time,
    })
}

/// Each candidate scores its own advertised QoS against the request.
pub fn collect_responses(
    request: &HandoverRequest,
    candidates: &[VisitorNetwork],
) -> Result<Vec<NqvResponse>, DecisionError> {
    candidates
        .iter()
        .map(|vn| {
            Ok(NqvResponse {
                network_id: vn.id.clone(),
                nqv: nqv_local(&request.required, &vn.advertised, &request.weights)?,
                computed_from: vn.advertised,
            })
        })
        .collect()
}

fn distributed_ranking(
    request: &HandoverRequest,
    candidates: &[VisitorNetwork],
) -> Result<Vec<NqvReport>, DecisionError> {
    if candidates.is_empty() {
        return Err(DecisionError::EmptyCandidateSet);
    }
    let mut ranking: Vec<NqvReport> = collect_responses(request, candidates)?
        .into_iter()
        .map(|r| NqvReport {
            network_id: r.network_id,
            nqv: r.nqv,
        })
        .collect();
    rank_reports(&mut ranking);
    Ok(ranking)
}

pub fn dvhd_select(
    request: &HandoverRequest,
    candidates: &[VisitorNetwork],
    model: &DelayModel,
) -> Result<DecisionOutcome, DecisionError> {
    let ranking = distributed_ranking(request, candidates)?;
    let best = &ranking[0];
    Ok(DecisionOutcome {
        result: Selection::Selected {
            network_id: best.network_id.clone(),
            nqv: best.nqv,
        },
        processing_delay: processing_delay(Scheme::Dvhd, candidates.len(), model)?,
        candidates_evaluated: candidates.len(),
        scheme: Scheme::Dvhd,
        ranking,
    })
}

/// The terminal ranks all advertised offers itself. The best-ranked offer
/// that meets the requirement is admitted; if none does, the top-ranked
/// network is taken anyway.
pub fn cvhd_select(
    request: &HandoverRequest,
    candidates: &[VisitorNetwork],
    model: &DelayModel,
) -> Result<DecisionOutcome, DecisionError> {
    let offers: Vec<(String, QosVector)> = candidates
        .iter()
        .map(|vn| (vn.id.clone(), vn.advertised))
        .collect();
    let ranking = nsf_centralized(&offers, &request.weights)?;
    let advertised = |id: &str| {
        candidates
            .iter()
            .find(|vn| vn.id == id)
            .map(|vn| vn.advertised)
    };
    let chosen = ranking
        .iter()
        .find(|r| advertised(&r.network_id).is_some_and(|q| q.satisfies(&request.required)))
        .unwrap_or(&ranking[0]);
    Ok(DecisionOutcome {
        result: Selection::Selected {
            network_id: chosen.network_id.clone(),
            nqv: chosen.nqv,
        },
        processing_delay: processing_delay(Scheme::Cvhd, candidates.len(), model)?,
        candidates_evaluated: candidates.len(),
        scheme: Scheme::Cvhd,
        ranking,
    })
}

/// D-VHD ranking followed by the level-of-trust gate: walk the ranking and
/// connect to the first network whose LOT reaches the threshold; block the
/// handover when none does. Unknown networks enter `trust` at `lot_init`.
pub fn tdvhd_select(
    request: &HandoverRequest,
    candidates: &[VisitorNetwork],
    trust: &mut TrustTable,
    config: &TrustConfig,
    model: &DelayModel,
) -> Result<DecisionOutcome, DecisionError> {
    let ranking = distributed_ranking(request, candidates)?;
    let mut gate_tests = 0usize;
    let mut result = Selection::Blocked;
    for r in &ranking {
        gate_tests += 1;
        if trust.entry(&r.network_id, config.lot_init) >= config.threshold {
            result = Selection::Selected {
                network_id: r.network_id.clone(),
                nqv: r.nqv,
            };
            break;
        }
    }
    // every candidate gets a table entry, even past the selected one
    for vn in candidates {
        trust.entry(&vn.id, config.lot_init);
    }
    let delay = processing_delay(Scheme::Tdvhd, candidates.len(), model)?
        + gate_tests as f64 * model.gate_cost;
    Ok(DecisionOutcome {
        result,
        processing_delay: delay,
        candidates_evaluated: candidates.len(),
        scheme: Scheme::Tdvhd,
        ranking,
    })
}

/// Trust test run after connecting: penalize the network when the delivered
/// QoS fails the requirement on any criterion, reward it otherwise.
/// Returns the new LOT.
pub fn trust_update(
    trust: &mut TrustTable,
    network_id: &str,
    delivered: &QosVector,
    required: &QosVector,
    config: &TrustConfig,
) -> f64 {
    let lot = trust.entry(network_id, config.lot_init);
    let next = if delivered.satisfies(required) {
        lot + config.delta_plus
    } else {
        lot - config.delta_minus
    };
    trust.set(network_id, next);
    trust.get(network_id).unwrap_or(next)
}
