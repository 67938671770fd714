//! Networks, QoS vectors and the network selection function.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::madm::{
    topsis_rank, topsis_scores, CriterionSpec, DecisionMatrix, Direction, MadmError, WeightVector,
};

/// Criterion labels in the fixed `QosVector` column order.
pub const CRITERIA: [&str; 4] = ["jitter", "delay", "cost", "bandwidth"];
pub const DIRECTIONS: [Direction; 4] = [
    Direction::Cost,
    Direction::Cost,
    Direction::Cost,
    Direction::Benefit,
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecisionError {
    #[error("candidate set is empty")]
    EmptyCandidateSet,
    #[error("need at least one candidate to compute a processing delay")]
    ZeroCandidates,
    #[error("QoS {field} = {value} must be finite and non-negative")]
    InvalidQos { field: &'static str, value: f64 },
    #[error("expected {expected} weights, got {found}")]
    WeightCount { expected: usize, found: usize },
    #[error(transparent)]
    Madm(#[from] MadmError),
}

/// Handover criteria. Units: jitter and delay in ms, cost in abstract
/// units, bandwidth in kbit/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QosVector {
    pub jitter: f64,
    pub delay: f64,
    pub cost: f64,
    pub bandwidth: f64,
}

impl QosVector {
    pub fn new(jitter: f64, delay: f64, cost: f64, bandwidth: f64) -> Self {
        Self {
            jitter,
            delay,
            cost,
            bandwidth,
        }
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.jitter, self.delay, self.cost, self.bandwidth]
    }

    pub fn validate(&self) -> Result<(), DecisionError> {
        for (field, value) in CRITERIA.iter().zip(self.to_array()) {
            if !value.is_finite() || value < 0.0 {
                return Err(DecisionError::InvalidQos { field, value });
            }
        }
        Ok(())
    }

    /// True when this (delivered) vector meets `required` on every
    /// criterion: bandwidth at least as high, everything else no higher.
    pub fn satisfies(&self, required: &QosVector) -> bool {
        self.bandwidth >= required.bandwidth
            && self.delay <= required.delay
            && self.jitter <= required.jitter
            && self.cost <= required.cost
    }
}

impl fmt::Display for QosVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "jitter={} delay={} cost={} bandwidth={}",
            self.jitter, self.delay, self.cost, self.bandwidth
        )
    }
}

/// Criterion specs for the four QoS columns with the given weights.
pub fn qos_criteria(weights: &WeightVector) -> Result<Vec<CriterionSpec>, DecisionError> {
    if weights.len() != CRITERIA.len() {
        return Err(DecisionError::WeightCount {
            expected: CRITERIA.len(),
            found: weights.len(),
        });
    }
    Ok(CRITERIA
        .iter()
        .zip(DIRECTIONS)
        .zip(weights.as_slice())
        .map(|((name, dir), &w)| CriterionSpec::new(*name, dir, w))
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ServiceProfile {
    pub application: String,
    pub required: QosVector,
    /// Aligned to (jitter, delay, cost, bandwidth).
    pub weights: WeightVector,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Technology {
    WiFi,
    WiMax,
}

impl Technology {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "wifi" => Some(Technology::WiFi),
            "wimax" => Some(Technology::WiMax),
            _ => None,
        }
    }
}

impl fmt::Display for Technology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Technology::WiFi => "WiFi",
            Technology::WiMax => "WiMax",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coverage {
    pub x: f64,
    pub y: f64,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VisitorNetwork {
    pub id: String,
    pub technology: Technology,
    /// What the network reports when asked.
    pub advertised: QosVector,
    /// What a connected terminal actually receives.
    pub actual: QosVector,
    pub coverage: Coverage,
}

impl VisitorNetwork {
    pub fn honest(
        id: impl Into<String>,
        technology: Technology,
        qos: QosVector,
        coverage: Coverage,
    ) -> Self {
        Self {
            id: id.into(),
            technology,
            advertised: qos,
            actual: qos,
            coverage,
        }
    }

    pub fn is_honest(&self) -> bool {
        self.advertised == self.actual
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NqvReport {
    pub network_id: String,
    pub nqv: f64,
}

fn qos_matrix(
    rows: Vec<(String, QosVector)>,
    weights: &WeightVector,
) -> Result<DecisionMatrix, DecisionError> {
    for (_, q) in &rows {
        q.validate()?;
    }
    let criteria = qos_criteria(weights)?;
    let (ids, values) = rows
        .into_iter()
        .map(|(id, q)| (id, q.to_array().to_vec()))
        .unzip();
    Ok(DecisionMatrix::new(ids, criteria, values)?)
}

/// Network quality value computed by a single visitor network: a two-row
/// TOPSIS over `{required, offered}`, reporting the offered row's closeness.
pub fn nqv_local(
    required: &QosVector,
    offered: &QosVector,
    weights: &WeightVector,
) -> Result<f64, DecisionError> {
    let m = qos_matrix(
        vec![("required".into(), *required), ("offered".into(), *offered)],
        weights,
    )?;
    let scores = topsis_scores(&m)?;
    Ok(scores.entries[1].score)
}

/// Terminal-side selection function: every offer is one row of a single
/// decision matrix. The requirement is not a row.
pub fn nsf_centralized(
    offers: &[(String, QosVector)],
    weights: &WeightVector,
) -> Result<Vec<NqvReport>, DecisionError> {
    if offers.is_empty() {
        return Err(DecisionError::EmptyCandidateSet);
    }
    let m = qos_matrix(offers.to_vec(), weights)?;
    Ok(topsis_rank(&m)?
        .entries
        .into_iter()
        .map(|e| NqvReport {
            network_id: e.id,
            nqv: e.score,
        })
        .collect())
}

/// Sorts reports by descending NQV, ascending id on ties.
pub fn rank_reports(reports: &mut [NqvReport]) {
    reports.sort_by(|a, b| {
        b.nqv
            .partial_cmp(&a.nqv)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.network_id.cmp(&b.network_id))
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::madm::validate_weights;

    fn w() -> WeightVector {
        validate_weights(&[0.25, 0.25, 0.25, 0.25]).unwrap()
    }

    #[test]
    fn dominating_offer_scores_one() {
        let req = QosVector::new(30.0, 150.0, 5.0, 64.0);
        let off = QosVector::new(20.0, 100.0, 4.0, 128.0);
        assert_eq!(nqv_local(&req, &off, &w()).unwrap(), 1.0);
        assert_eq!(nqv_local(&off, &req, &w()).unwrap(), 0.0);
        assert_eq!(nqv_local(&req, &req, &w()).unwrap(), 1.0);
    }

    #[test]
    fn satisfies_is_direction_aware() {
        let req = QosVector::new(30.0, 150.0, 5.0, 64.0);
        assert!(req.satisfies(&req));
        assert!(!QosVector::new(30.0, 150.0, 5.0, 63.0).satisfies(&req));
        assert!(!QosVector::new(31.0, 150.0, 5.0, 64.0).satisfies(&req));
        assert!(!QosVector::new(30.0, 151.0, 5.0, 64.0).satisfies(&req));
        assert!(!QosVector::new(30.0, 150.0, 5.5, 64.0).satisfies(&req));
    }

    #[test]
    fn centralized_edge_cases() {
        assert_eq!(
            nsf_centralized(&[], &w()),
            Err(DecisionError::EmptyCandidateSet)
        );
        let q = QosVector::new(10.0, 50.0, 5.0, 2000.0);
        let one = nsf_centralized(&[("X".into(), q)], &w()).unwrap();
        assert_eq!(one[0].nqv, 1.0);
        let two = nsf_centralized(&[("B".into(), q), ("A".into(), q)], &w()).unwrap();
        assert_eq!(two[0].network_id, "A");
        assert_eq!(two[0].nqv, two[1].nqv);
    }

    #[test]
    fn invalid_qos_rejected() {
        let bad = QosVector::new(-1.0, 0.0, 0.0, 0.0);
        assert!(matches!(
            nqv_local(&bad, &bad, &w()),
            Err(DecisionError::InvalidQos {
                field: "jitter",
                ..
            })
        ));
    }

    #[test]
    fn wrong_weight_count() {
        let w3 = validate_weights(&[0.5, 0.25, 0.25]).unwrap();
        let q = QosVector::new(1.0, 1.0, 1.0, 1.0);
        assert!(matches!(
            nqv_local(&q, &q, &w3),
            Err(DecisionError::WeightCount { .. })
        ));
    }
}
