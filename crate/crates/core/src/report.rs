//! CSV output, summaries, parameter sweeps and one-shot decisions.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

use crate::madm::{
    topsis_rank, validate_weights, ClosenessScores, CriterionSpec, DecisionMatrix, Direction,
    MadmError,
};
use crate::protocol::Scheme;
use crate::sim::{self, end_to_end_delay, throughput, LogKind, MetricsLog, Scenario, SimError};

pub const EVENTS_HEADER: &str = "time_s,terminal,kind,from_net,to_net,processing_delay_ms,detail";
pub const SUMMARY_HEADER: &str = "scheme,n_vns,seed,processing_delay_ms,e2e_delay_ms,throughput_bps,handover_events,blocked_handovers";

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("sweep needs at least 4 stations, scenario has {0}")]
    TooFewStations(usize),
    #[error("{path}:{line}: {message}")]
    Matrix {
        path: String,
        line: usize,
        message: String,
    },
    #[error("{0}")]
    Decision(#[from] MadmError),
    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub scheme: Scheme,
    pub n_vns: usize,
    pub seed: u64,
    pub processing_delay_ms: Option<f64>,
    pub e2e_delay_ms: Option<f64>,
    pub throughput_bps: Option<f64>,
    pub handover_events: usize,
    pub blocked_handovers: usize,
}

pub fn summarize(scenario: &Scenario, log: &MetricsLog) -> SummaryRow {
    let rates: Vec<f64> = scenario
        .terminals
        .iter()
        .filter_map(|t| throughput(log, &t.id).ok())
        .collect();
    SummaryRow {
        scheme: scenario.scheme,
        n_vns: scenario.stations.len(),
        seed: scenario.seed,
        processing_delay_ms: log.mean_processing_delay_ms(),
        e2e_delay_ms: end_to_end_delay(log).ok(),
        throughput_bps: (!rates.is_empty()).then(|| rates.iter().sum::<f64>() / rates.len() as f64),
        handover_events: sim::handover_event_count(log, None),
        blocked_handovers: log.events_of(LogKind::Blocked).count(),
    }
}

fn fixed(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_default()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn events_csv(log: &MetricsLog) -> String {
    let mut out = String::from(EVENTS_HEADER);
    out.push('\n');
    for e in &log.events {
        let _ = writeln!(
            out,
            "{:.6},{},{},{},{},{},{}",
            e.time_us as f64 / 1e6,
            csv_field(&e.terminal),
            e.kind,
            csv_field(e.from.as_deref().unwrap_or("")),
            csv_field(e.to.as_deref().unwrap_or("")),
            fixed(e.processing_delay_ms),
            csv_field(&e.detail),
        );
    }
    out
}

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.scheme,
            r.n_vns,
            r.seed,
            fixed(r.processing_delay_ms),
            fixed(r.e2e_delay_ms),
            fixed(r.throughput_bps),
            r.handover_events,
            r.blocked_handovers,
        );
    }
    out
}

/// Writes through a temporary file in the same directory, then renames.
fn write_atomic(path: &Path, contents: &str) -> Result<(), ReportError> {
    let io_err = |source| ReportError::Io {
        path: path.display().to_string(),
        source,
    };
    let tmp = path.with_extension("csv.tmp");
    fs::write(&tmp, contents).map_err(io_err)?;
    fs::rename(&tmp, path).map_err(io_err)
}

fn ensure_dir(dir: &Path) -> Result<(), ReportError> {
    fs::create_dir_all(dir).map_err(|source| ReportError::Io {
        path: dir.display().to_string(),
        source,
    })
}

/// Runs one simulation and writes `events.csv` and `summary.csv`.
pub fn simulate_to_dir(scenario: &Scenario, out_dir: &Path) -> Result<SummaryRow, ReportError> {
    let log = sim::run(scenario)?;
    let row = summarize(scenario, &log);
    ensure_dir(out_dir)?;
    write_atomic(&out_dir.join("events.csv"), &events_csv(&log))?;
    write_atomic(
        &out_dir.join("summary.csv"),
        &summary_csv(std::slice::from_ref(&row)),
    )?;
    Ok(row)
}

/// Every scheme on the first 2, 3 and 4 stations, same seed. Rows are
/// ordered by scheme, then station count.
pub fn compare(scenario: &Scenario) -> Result<Vec<SummaryRow>, ReportError> {
    if scenario.stations.len() < 4 {
        return Err(ReportError::TooFewStations(scenario.stations.len()));
    }
    let runs: Vec<Scenario> = Scheme::ALL
        .iter()
        .flat_map(|&scheme| {
            (2..=4).map(move |n| {
                let mut s = scenario.restricted(n);
                s.scheme = scheme;
                s
            })
        })
        .collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = runs
            .iter()
            .map(|s| scope.spawn(move || sim::run(s).map(|log| summarize(s, &log))))
            .collect();
        handles
            .into_iter()
            .map(|h| {
                h.join()
                    .expect("simulation thread panicked")
                    .map_err(Into::into)
            })
            .collect()
    })
}

pub fn compare_to_dir(scenario: &Scenario, out_dir: &Path) -> Result<Vec<SummaryRow>, ReportError> {
    let rows = compare(scenario)?;
    ensure_dir(out_dir)?;
    write_atomic(&out_dir.join("compare.csv"), &summary_csv(&rows))?;
    Ok(rows)
}

/// Parses a decision-matrix CSV: a header row naming the id column and then
/// each criterion, followed by one row per alternative.
pub fn parse_matrix_csv(
    text: &str,
    origin: &str,
    weights: &[f64],
    directions: &[Direction],
) -> Result<DecisionMatrix, ReportError> {
    let err = |line: usize, message: String| ReportError::Matrix {
        path: origin.to_string(),
        line,
        message,
    };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines
        .next()
        .ok_or_else(|| err(1, "empty matrix file".into()))?;
    let names: Vec<&str> = header.split(',').map(str::trim).skip(1).collect();
    if names.is_empty() {
        return Err(err(hline, "header names no criteria".into()));
    }
    if weights.len() != names.len() || directions.len() != names.len() {
        return Err(ReportError::Usage(format!(
            "{} criteria in {origin}, but {} weights and {} directions given",
            names.len(),
            weights.len(),
            directions.len()
        )));
    }
    validate_weights(weights)?;
    let criteria: Vec<CriterionSpec> = names
        .iter()
        .zip(weights)
        .zip(directions)
        .map(|((n, &w), &d)| CriterionSpec::new(*n, d, w))
        .collect();

    let mut ids = Vec::new();
    let mut values = Vec::new();
    for (line, l) in lines {
        let mut fields = l.split(',').map(str::trim);
        let id = fields.next().unwrap_or_default().to_string();
        let row: Vec<f64> = fields
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| err(line, format!("{f:?} is not a number")))
            })
            .collect::<Result<_, _>>()?;
        if row.len() != names.len() {
            return Err(err(
                line,
                format!("expected {} values, got {}", names.len(), row.len()),
            ));
        }
        if let Some((j, v)) = row
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(err(
                line,
                format!("{} = {v} must be finite and non-negative", names[j]),
            ));
        }
        ids.push(id);
        values.push(row);
    }
    DecisionMatrix::new(ids, criteria, values).map_err(|e| err(hline, e.to_string()))
}

pub fn format_ranking(scores: &ClosenessScores) -> String {
    scores
        .entries
        .iter()
        .map(|e| format!("{},{:.6}\n", e.id, e.score))
        .collect()
}

/// Ranks the alternatives in a matrix file and returns the output lines.
pub fn decide(
    matrix_path: &Path,
    weights: &[f64],
    directions: &[Direction],
) -> Result<String, ReportError> {
    let shown = matrix_path.display().to_string();
    let text = fs::read_to_string(matrix_path).map_err(|source| ReportError::Io {
        path: shown.clone(),
        source,
    })?;
    let m = parse_matrix_csv(&text, &shown, weights, directions)?;
    Ok(format_ranking(&topsis_rank(&m)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::EventRecord;

    const B: Direction = Direction::Benefit;
    const C: Direction = Direction::Cost;

    #[test]
    fn matrix_csv_parses() {
        let text = "network,bandwidth,delay\nN1,10,5\n\nN2,20,1\n";
        let m = parse_matrix_csv(text, "m.csv", &[0.5, 0.5], &[B, C]).unwrap();
        assert_eq!(m.rows(), 2);
        assert_eq!(m.criteria()[1].name, "delay");
        let out = format_ranking(&topsis_rank(&m).unwrap());
        assert_eq!(out, "N2,1.000000\nN1,0.000000\n");
    }

    #[test]
    fn matrix_csv_errors() {
        let neg = "id,a\nN1,-3\n";
        let e = parse_matrix_csv(neg, "m.csv", &[1.0], &[B]).unwrap_err();
        assert!(e.to_string().contains("m.csv:2"), "{e}");
        let short = "id,a,b\nN1,3\n";
        assert!(parse_matrix_csv(short, "m.csv", &[0.5, 0.5], &[B, B]).is_err());
        let nan = "id,a\nN1,x\n";
        assert!(parse_matrix_csv(nan, "m.csv", &[1.0], &[B]).is_err());
        assert!(matches!(
            parse_matrix_csv("id,a\nN1,1\n", "m.csv", &[0.5, 0.5], &[B]),
            Err(ReportError::Usage(_))
        ));
        assert!(matches!(
            parse_matrix_csv("id,a\nN1,1\n", "m.csv", &[0.7], &[B]),
            Err(ReportError::Decision(MadmError::WeightSumViolation { .. }))
        ));
        assert!(parse_matrix_csv("id,a\nN1,1\nN1,2\n", "m.csv", &[1.0], &[B]).is_err());
    }

    #[test]
    fn csv_quoting() {
        let mut log = MetricsLog::new();
        log.events.push(EventRecord {
            time_us: 1_500_000,
            terminal: "MT1".into(),
            kind: LogKind::Trigger,
            from: None,
            to: Some("BS1".into()),
            processing_delay_ms: Some(13.0),
            detail: "a,b".into(),
        });
        let csv = events_csv(&log);
        assert_eq!(
            csv,
            format!("{EVENTS_HEADER}\n1.500000,MT1,trigger,,BS1,13.000000,\"a,b\"\n")
        );
    }

    #[test]
    fn summary_empty_metrics_are_blank() {
        let row = SummaryRow {
            scheme: Scheme::Dvhd,
            n_vns: 2,
            seed: 3,
            processing_delay_ms: None,
            e2e_delay_ms: Some(1.0),
            throughput_bps: None,
            handover_events: 0,
            blocked_handovers: 0,
        };
        let csv = summary_csv(&[row]);
        assert!(csv.ends_with("DVHD,2,3,,1.000000,,0,0\n"), "{csv}");
    }

    #[test]
    fn compare_needs_four_stations() {
        let s = Scenario::table1().restricted(3);
        assert!(matches!(compare(&s), Err(ReportError::TooFewStations(3))));
    }
}
