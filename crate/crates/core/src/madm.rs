//! TOPSIS decision engine.
//!
//! The pipeline is split into its stages so each one can be inspected and
//! tested on its own:
//!
//! ```text
//! DecisionMatrix -> normalize -> apply_weights -> ideal_solutions
//!                -> separations -> closeness -> ranking
//! ```
//!
//! Columns are vector-normalized (divided by their Euclidean norm), so
//! scaling a criterion column by any positive constant leaves every score
//! unchanged.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

/// Absolute tolerance on the weight sum.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MadmError {
    #[error("no weights given")]
    EmptyWeights,
    #[error("weight #{index} = {value} lies outside [0, 1]")]
    WeightRangeViolation { index: usize, value: f64 },
    #[error("weights sum to {sum}, they must sum to 1 (within 1e-9)")]
    WeightSumViolation { sum: f64 },
    #[error("decision matrix has no alternatives")]
    NoAlternatives,
    #[error("decision matrix has no criteria")]
    NoCriteria,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("value {value} at row {row}, column {col} must be finite and non-negative")]
    InvalidValue { row: usize, col: usize, value: f64 },
    #[error("duplicate alternative id {0:?}")]
    DuplicateAlternative(String),
    #[error("expected a {expected} matrix, got a {found} one")]
    WrongStage { expected: Stage, found: Stage },
}

/// Whether larger (benefit) or smaller (cost) values are preferred.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Benefit,
    Cost,
}

impl Direction {
    /// Accepts `b`/`benefit` and `c`/`cost`, case-insensitive.
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "b" | "benefit" => Some(Direction::Benefit),
            "c" | "cost" => Some(Direction::Cost),
            _ => None,
        }
    }

    /// True if `a` is strictly preferable to `b` under this direction.
    pub fn better(self, a: f64, b: f64) -> bool {
        match self {
            Direction::Benefit => a > b,
            Direction::Cost => a < b,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Benefit => "benefit",
            Direction::Cost => "cost",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionSpec {
    pub name: String,
    pub direction: Direction,
    pub weight: f64,
}

impl CriterionSpec {
    pub fn new(name: impl Into<String>, direction: Direction, weight: f64) -> Self {
        Self {
            name: name.into(),
            direction,
            weight,
        }
    }
}

/// A weight vector that has passed [`validate_weights`].
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl TryFrom<Vec<f64>> for WeightVector {
    type Error = MadmError;

    fn try_from(v: Vec<f64>) -> Result<Self, Self::Error> {
        validate_weights(&v)
    }
}

/// Checks that every weight lies in `[0, 1]` and that they sum to one.
pub fn validate_weights(weights: &[f64]) -> Result<WeightVector, MadmError> {
    if weights.is_empty() {
        return Err(MadmError::EmptyWeights);
    }
    for (index, &value) in weights.iter().enumerate() {
        if !(0.0..=1.0).contains(&value) {
            return Err(MadmError::WeightRangeViolation { index, value });
        }
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
        return Err(MadmError::WeightSumViolation { sum });
    }
    Ok(WeightVector(weights.to_vec()))
}

/// Alternatives (rows) scored on criteria (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionMatrix {
    values: Vec<Vec<f64>>,
    criteria: Vec<CriterionSpec>,
    alternative_ids: Vec<String>,
}

impl DecisionMatrix {
    pub fn new(
        alternative_ids: Vec<String>,
        criteria: Vec<CriterionSpec>,
        values: Vec<Vec<f64>>,
    ) -> Result<Self, MadmError> {
        if alternative_ids.is_empty() || values.is_empty() {
            return Err(MadmError::NoAlternatives);
        }
        if criteria.is_empty() {
            return Err(MadmError::NoCriteria);
        }
        if alternative_ids.len() != values.len() {
            return Err(MadmError::ShapeMismatch(format!(
                "{} alternative ids for {} rows",
                alternative_ids.len(),
                values.len()
            )));
        }
        let weights: Vec<f64> = criteria.iter().map(|c| c.weight).collect();
        validate_weights(&weights)?;

        let n = criteria.len();
        for (row, r) in values.iter().enumerate() {
            if r.len() != n {
                return Err(MadmError::ShapeMismatch(format!(
                    "row {row} has {} values, expected {n}",
                    r.len()
                )));
            }
            for (col, &value) in r.iter().enumerate() {
                if !value.is_finite() || value < 0.0 {
                    return Err(MadmError::InvalidValue { row, col, value });
                }
            }
        }
        let mut seen = HashSet::new();
        for id in &alternative_ids {
            if !seen.insert(id.as_str()) {
                return Err(MadmError::DuplicateAlternative(id.clone()));
            }
        }
        Ok(Self {
            values,
            criteria,
            alternative_ids,
        })
    }

    pub fn rows(&self) -> usize {
        self.values.len()
    }

    pub fn cols(&self) -> usize {
        self.criteria.len()
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn criteria(&self) -> &[CriterionSpec] {
        &self.criteria
    }

    pub fn alternative_ids(&self) -> &[String] {
        &self.alternative_ids
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Normalized,
    Weighted,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Normalized => "normalized",
            Stage::Weighted => "weighted",
        })
    }
}

/// Output of [`normalize`] (`r_ij`) or, after [`apply_weights`], `v_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedNormalizedMatrix {
    pub values: Vec<Vec<f64>>,
    pub stage: Stage,
}

impl WeightedNormalizedMatrix {
    fn cols(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().map(move |row| row[j])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdealSolutions {
    pub positive: Vec<f64>,
    pub negative: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparationMeasures {
    pub s_star: Vec<f64>,
    pub s_minus: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredAlternative {
    pub id: String,
    pub score: f64,
}

/// Closeness coefficients, either in matrix row order or ranked.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosenessScores {
    pub entries: Vec<ScoredAlternative>,
}

impl ClosenessScores {
    pub fn get(&self, id: &str) -> Option<f64> {
        self.entries.iter().find(|e| e.id == id).map(|e| e.score)
    }

    pub fn best(&self) -> Option<&ScoredAlternative> {
        self.entries.first()
    }

    pub fn ids(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.id.as_str()).collect()
    }
}

/// Divides every column by its Euclidean norm. All-zero columns stay zero.
pub fn normalize(matrix: &DecisionMatrix) -> WeightedNormalizedMatrix {
    let n = matrix.cols();
    let norms: Vec<f64> = (0..n)
        .map(|j| {
            matrix
                .values
                .iter()
                .map(|row| row[j] * row[j])
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    let values = matrix
        .values
        .iter()
        .map(|row| {
            row.iter()
                .zip(&norms)
                .map(|(&x, &norm)| if norm > 0.0 { x / norm } else { 0.0 })
                .collect()
        })
        .collect();
    WeightedNormalizedMatrix {
        values,
        stage: Stage::Normalized,
    }
}

pub fn apply_weights(
    normalized: &WeightedNormalizedMatrix,
    criteria: &[CriterionSpec],
) -> Result<WeightedNormalizedMatrix, MadmError> {
    if normalized.stage != Stage::Normalized {
        return Err(MadmError::WrongStage {
            expected: Stage::Normalized,
            found: normalized.stage,
        });
    }
    if normalized.cols() != criteria.len() {
        return Err(MadmError::ShapeMismatch(format!(
            "{} columns for {} criteria",
            normalized.cols(),
            criteria.len()
        )));
    }
    let values = normalized
        .values
        .iter()
        .map(|row| {
            row.iter()
                .zip(criteria)
                .map(|(&r, c)| c.weight * r)
                .collect()
        })
        .collect();
    Ok(WeightedNormalizedMatrix {
        values,
        stage: Stage::Weighted,
    })
}

pub fn ideal_solutions(
    weighted: &WeightedNormalizedMatrix,
    criteria: &[CriterionSpec],
) -> Result<IdealSolutions, MadmError> {
    if weighted.stage != Stage::Weighted {
        return Err(MadmError::WrongStage {
            expected: Stage::Weighted,
            found: weighted.stage,
        });
    }
    if weighted.cols() != criteria.len() {
        return Err(MadmError::ShapeMismatch(format!(
            "{} columns for {} criteria",
            weighted.cols(),
            criteria.len()
        )));
    }
    let (positive, negative) = criteria
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let max = weighted.column(j).fold(f64::NEG_INFINITY, f64::max);
            let min = weighted.column(j).fold(f64::INFINITY, f64::min);
            match c.direction {
                Direction::Benefit => (max, min),
                Direction::Cost => (min, max),
            }
        })
        .unzip();
    Ok(IdealSolutions { positive, negative })
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn separations(
    weighted: &WeightedNormalizedMatrix,
    ideals: &IdealSolutions,
) -> Result<SeparationMeasures, MadmError> {
    let n = weighted.cols();
    if ideals.positive.len() != n || ideals.negative.len() != n {
        return Err(MadmError::ShapeMismatch(format!(
            "ideal vectors of length {}/{} for {n} columns",
            ideals.positive.len(),
            ideals.negative.len()
        )));
    }
    let (s_star, s_minus) = weighted
        .values
        .iter()
        .map(|row| {
            (
                distance(row, &ideals.positive),
                distance(row, &ideals.negative),
            )
        })
        .unzip();
    Ok(SeparationMeasures { s_star, s_minus })
}

/// `C = S- / (S* + S-)`, with `C = 1` when both separations vanish.
pub fn closeness(seps: &SeparationMeasures) -> Vec<f64> {
    seps.s_star
        .iter()
        .zip(&seps.s_minus)
        .map(|(&plus, &minus)| {
            let total = plus + minus;
            if total > 0.0 {
                minus / total
            } else {
                1.0
            }
        })
        .collect()
}

/// Closeness of every alternative, in matrix row order.
pub fn topsis_scores(matrix: &DecisionMatrix) -> Result<ClosenessScores, MadmError> {
    let weighted = apply_weights(&normalize(matrix), &matrix.criteria)?;
    let ideals = ideal_solutions(&weighted, &matrix.criteria)?;
    let seps = separations(&weighted, &ideals)?;
    let entries = matrix
        .alternative_ids
        .iter()
        .zip(closeness(&seps))
        .map(|(id, score)| ScoredAlternative {
            id: id.clone(),
            score,
        })
        .collect();
    Ok(ClosenessScores { entries })
}

/// Descending score, ties broken by ascending id.
pub fn rank_order(a: &ScoredAlternative, b: &ScoredAlternative) -> Ordering {
    b.score
        .partial_cmp(&a.score)
        .unwrap_or(Ordering::Equal)
        .then_with(|| a.id.cmp(&b.id))
}

/// Runs the full pipeline and sorts by descending closeness.
pub fn topsis_rank(matrix: &DecisionMatrix) -> Result<ClosenessScores, MadmError> {
    let mut scores = topsis_scores(matrix)?;
    scores.entries.sort_by(rank_order);
    Ok(scores)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn crit(dirs: &[Direction], weights: &[f64]) -> Vec<CriterionSpec> {
        dirs.iter()
            .zip(weights)
            .enumerate()
            .map(|(i, (&d, &w))| CriterionSpec::new(format!("c{i}"), d, w))
            .collect()
    }

    fn ids(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("A{i}")).collect()
    }

    #[test]
    fn weight_validation() {
        assert!(validate_weights(&[0.25; 4]).is_ok());
        assert!(validate_weights(&[0.4, 0.3, 0.2, 0.1]).is_ok());
        assert!(matches!(
            validate_weights(&[0.5, 0.6]),
            Err(MadmError::WeightSumViolation { .. })
        ));
        assert!(matches!(
            validate_weights(&[1.5, -0.5]),
            Err(MadmError::WeightRangeViolation { index: 0, .. })
        ));
        assert_eq!(validate_weights(&[]), Err(MadmError::EmptyWeights));
        assert!(validate_weights(&[f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn matrix_rejects_bad_input() {
        let c = crit(&[Direction::Benefit], &[1.0]);
        assert!(matches!(
            DecisionMatrix::new(ids(1), c.clone(), vec![vec![-1.0]]),
            Err(MadmError::InvalidValue { .. })
        ));
        assert!(matches!(
            DecisionMatrix::new(ids(1), c.clone(), vec![vec![f64::INFINITY]]),
            Err(MadmError::InvalidValue { .. })
        ));
        assert!(matches!(
            DecisionMatrix::new(
                vec!["x".into(), "x".into()],
                c.clone(),
                vec![vec![1.0], vec![2.0]]
            ),
            Err(MadmError::DuplicateAlternative(_))
        ));
        assert!(matches!(
            DecisionMatrix::new(ids(1), c, vec![vec![1.0, 2.0]]),
            Err(MadmError::ShapeMismatch(_))
        ));
        assert_eq!(
            DecisionMatrix::new(vec![], vec![], vec![]),
            Err(MadmError::NoAlternatives)
        );
    }

    #[test]
    fn normalize_columns() {
        let c = crit(
            &[Direction::Benefit, Direction::Benefit, Direction::Cost],
            &[0.4, 0.3, 0.3],
        );
        let m =
            DecisionMatrix::new(ids(2), c, vec![vec![3.0, 7.0, 0.0], vec![4.0, 7.0, 0.0]]).unwrap();
        let r = normalize(&m);
        assert_eq!(r.stage, Stage::Normalized);
        assert!((r.values[0][0] - 0.6).abs() < 1e-15);
        assert!((r.values[1][0] - 0.8).abs() < 1e-15);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((r.values[0][1] - h).abs() < 1e-15);
        assert!((r.values[1][1] - h).abs() < 1e-15);
        assert_eq!(r.values[0][2], 0.0);
        assert_eq!(r.values[1][2], 0.0);
    }

    #[test]
    fn weighting() {
        let norm = WeightedNormalizedMatrix {
            values: vec![vec![0.6, 0.5], vec![0.8, 0.5]],
            stage: Stage::Normalized,
        };
        let c = crit(&[Direction::Benefit, Direction::Benefit], &[0.5, 0.5]);
        let v = apply_weights(&norm, &c).unwrap();
        assert!((v.values[0][0] - 0.3).abs() < 1e-15);
        assert!((v.values[1][0] - 0.4).abs() < 1e-15);

        let c = crit(&[Direction::Benefit, Direction::Benefit], &[1.0, 0.0]);
        let v = apply_weights(&norm, &c).unwrap();
        assert_eq!(v.values[0], vec![0.6, 0.0]);
        assert_eq!(v.values[1], vec![0.8, 0.0]);

        assert!(matches!(
            apply_weights(&v, &c),
            Err(MadmError::WrongStage { .. })
        ));
        assert!(matches!(
            apply_weights(&norm, &c[..1]),
            Err(MadmError::ShapeMismatch(_))
        ));
    }

    #[test]
    fn ideals_follow_direction() {
        let v = WeightedNormalizedMatrix {
            values: vec![vec![0.3, 0.3, 0.2], vec![0.4, 0.4, 0.2]],
            stage: Stage::Weighted,
        };
        let c = crit(
            &[Direction::Benefit, Direction::Cost, Direction::Benefit],
            &[0.4, 0.3, 0.3],
        );
        let ideal = ideal_solutions(&v, &c).unwrap();
        assert_eq!(ideal.positive, vec![0.4, 0.3, 0.2]);
        assert_eq!(ideal.negative, vec![0.3, 0.4, 0.2]);
    }

    #[test]
    fn separation_distances() {
        let v = WeightedNormalizedMatrix {
            values: vec![vec![0.4, 0.3], vec![0.3, 0.4], vec![0.3, 0.3]],
            stage: Stage::Weighted,
        };
        let ideal = IdealSolutions {
            positive: vec![0.4, 0.3],
            negative: vec![0.3, 0.4],
        };
        let s = separations(&v, &ideal).unwrap();
        assert_eq!(s.s_star[0], 0.0);
        assert_eq!(s.s_minus[1], 0.0);
        assert!((s.s_star[2] - 0.1).abs() < 1e-12);
        assert!((s.s_minus[2] - 0.1).abs() < 1e-12);
    }

    #[test]
    fn closeness_cases() {
        let s = SeparationMeasures {
            s_star: vec![0.0, 0.2, 0.1, 0.0],
            s_minus: vec![0.2, 0.0, 0.1, 0.0],
        };
        assert_eq!(closeness(&s), vec![1.0, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn dominance_gives_extremes() {
        let c = crit(&[Direction::Benefit, Direction::Cost], &[0.5, 0.5]);
        let m = DecisionMatrix::new(
            vec!["A".into(), "B".into()],
            c,
            vec![vec![10.0, 1.0], vec![5.0, 3.0]],
        )
        .unwrap();
        let r = topsis_rank(&m).unwrap();
        assert_eq!(r.ids(), vec!["A", "B"]);
        assert_eq!(r.get("A"), Some(1.0));
        assert_eq!(r.get("B"), Some(0.0));
    }

    #[test]
    fn symmetric_tie_breaks_by_id() {
        let c = crit(&[Direction::Benefit, Direction::Cost], &[0.5, 0.5]);
        let m = DecisionMatrix::new(
            vec!["B".into(), "A".into()],
            c,
            vec![vec![4.0, 4.0], vec![3.0, 3.0]],
        )
        .unwrap();
        let r = topsis_rank(&m).unwrap();
        assert_eq!(r.ids(), vec!["A", "B"]);
        assert!((r.entries[0].score - 0.5).abs() < 1e-12);
        assert!((r.entries[1].score - 0.5).abs() < 1e-12);
    }

    #[test]
    fn single_alternative_scores_one() {
        let c = crit(&[Direction::Benefit], &[1.0]);
        let m = DecisionMatrix::new(ids(1), c, vec![vec![42.0]]).unwrap();
        assert_eq!(topsis_rank(&m).unwrap().entries[0].score, 1.0);
    }
}
