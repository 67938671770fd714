#![allow(dead_code, clippy::needless_range_loop)]

use vho_core::{CriterionSpec, DecisionMatrix, Direction};

/// Straight transcription of the TOPSIS steps with plain loops and fixed
/// indices: normalize, weight, ideal/anti-ideal, separations, closeness.
/// Shares no code with `vho_core::madm`.
pub fn brute_force_topsis(x: &[Vec<f64>], w: &[f64], benefit: &[bool]) -> Vec<f64> {
    let m = x.len();
    let n = w.len();
    let mut v = vec![vec![0.0f64; n]; m];
    for j in 0..n {
        let mut ss = 0.0;
        for i in 0..m {
            ss += x[i][j] * x[i][j];
        }
        let denom = ss.sqrt();
        for i in 0..m {
            let r = if denom == 0.0 { 0.0 } else { x[i][j] / denom };
            v[i][j] = w[j] * r;
        }
    }
    let mut best = vec![0.0f64; n];
    let mut worst = vec![0.0f64; n];
    for j in 0..n {
        let mut hi = v[0][j];
        let mut lo = v[0][j];
        for i in 1..m {
            if v[i][j] > hi {
                hi = v[i][j];
            }
            if v[i][j] < lo {
                lo = v[i][j];
            }
        }
        if benefit[j] {
            best[j] = hi;
            worst[j] = lo;
        } else {
            best[j] = lo;
            worst[j] = hi;
        }
    }
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let mut sp = 0.0;
        let mut sn = 0.0;
        for j in 0..n {
            sp += (best[j] - v[i][j]).powi(2);
            sn += (worst[j] - v[i][j]).powi(2);
        }
        let (sp, sn) = (sp.sqrt(), sn.sqrt());
        out.push(if sp + sn == 0.0 { 1.0 } else { sn / (sp + sn) });
    }
    out
}

pub fn matrix(x: &[Vec<f64>], w: &[f64], benefit: &[bool]) -> DecisionMatrix {
    let criteria = w
        .iter()
        .zip(benefit)
        .enumerate()
        .map(|(j, (&wj, &b))| {
            CriterionSpec::new(
                format!("c{j}"),
                if b {
                    Direction::Benefit
                } else {
                    Direction::Cost
                },
                wj,
            )
        })
        .collect();
    let ids = (0..x.len()).map(|i| format!("A{i}")).collect();
    DecisionMatrix::new(ids, criteria, x.to_vec()).expect("valid matrix")
}

/// Normalizes arbitrary positive draws into a weight vector that sums to 1.
pub fn to_weights(raw: &[f64]) -> Vec<f64> {
    let s: f64 = raw.iter().sum();
    let mut w: Vec<f64> = raw.iter().map(|r| r / s).collect();
    let last = w.len() - 1;
    let head: f64 = w[..last].iter().sum();
    w[last] = (1.0 - head).max(0.0);
    w
}

/// The three-network fixture in (jitter, delay, cost, bandwidth) order.
pub const FIXTURE_IDS: [&str; 3] = ["N1", "N2", "N3"];
pub const FIXTURE_QOS: [[f64; 4]; 3] = [
    [10.0, 50.0, 5.0, 2000.0],
    [4.0, 20.0, 2.0, 1000.0],
    [20.0, 80.0, 8.0, 5000.0],
];
pub const FIXTURE_WEIGHTS: [f64; 4] = [0.2, 0.3, 0.1, 0.4];
pub const FIXTURE_BENEFIT: [bool; 4] = [false, false, false, true];
/// Closeness of N1, N2, N3, computed with `brute_force_topsis` and an
/// independent numpy transcription.
pub const FIXTURE_CLOSENESS: [f64; 3] = [0.380247769046, 0.453063002926, 0.546936997074];
/// Requirement used for the distributed-selection fixture, and the local
/// NQVs it yields for N1, N2, N3.
pub const FIXTURE_REQUIRED: [f64; 4] = [20.0, 80.0, 8.0, 4000.0];
pub const FIXTURE_LOCAL_NQV: [f64; 3] = [0.42933357228908026, 0.4889795903486437, 1.0];
