mod common;

use common::*;
use proptest::prelude::*;
use vho_core::{
    cvhd_select, dvhd_select, processing_delay, tdvhd_select, trust_update, validate_weights,
    Coverage, DelayModel, HandoverRequest, QosVector, Scheme, Selection, Technology, TrustConfig,
    TrustTable, VisitorNetwork,
};

fn fixture_candidates() -> Vec<VisitorNetwork> {
    FIXTURE_IDS
        .iter()
        .zip(FIXTURE_QOS)
        .map(|(id, q)| {
            VisitorNetwork::honest(
                *id,
                Technology::WiMax,
                QosVector::from_array(q),
                Coverage {
                    x: 0.0,
                    y: 0.0,
                    radius: 100.0,
                },
            )
        })
        .collect()
}

fn fixture_request() -> HandoverRequest {
    HandoverRequest {
        terminal_id: "MT1".into(),
        required: QosVector::from_array(FIXTURE_REQUIRED),
        weights: validate_weights(&FIXTURE_WEIGHTS).unwrap(),
        timestamp: 0.0,
    }
}

#[test]
fn distributed_fixture_selects_n3() {
    let out = dvhd_select(
        &fixture_request(),
        &fixture_candidates(),
        &DelayModel::default(),
    )
    .unwrap();
    assert_eq!(out.result.network_id(), Some("N3"));
    assert_eq!(out.candidates_evaluated, 3);
    let ids: Vec<&str> = out.ranking.iter().map(|r| r.network_id.as_str()).collect();
    assert_eq!(ids, vec!["N3", "N2", "N1"]);
    for (r, want) in out.ranking.iter().rev().zip(FIXTURE_LOCAL_NQV) {
        assert!((r.nqv - want).abs() < 1e-9);
    }
}

#[test]
fn centralized_fixture_agrees() {
    let out = cvhd_select(
        &fixture_request(),
        &fixture_candidates(),
        &DelayModel::default(),
    )
    .unwrap();
    assert_eq!(out.result.network_id(), Some("N3"));
    assert_eq!(out.scheme, Scheme::Cvhd);
    assert!((out.ranking[0].nqv - FIXTURE_CLOSENESS[2]).abs() < 1e-9);
}

#[test]
fn trust_gate_skips_to_next() {
    // Ranking N3 0.55, N2 0.45, N1 0.38 (centralized-fixture NQVs) fed
    // through the gate via a request under which local NQVs rank the same.
    let mut trust = TrustTable::new();
    trust.set("N3", 0.4);
    trust.set("N2", 0.9);
    let cfg = TrustConfig {
        threshold: 0.6,
        ..TrustConfig::default()
    };
    let out = tdvhd_select(
        &fixture_request(),
        &fixture_candidates(),
        &mut trust,
        &cfg,
        &DelayModel::default(),
    )
    .unwrap();
    assert_eq!(out.result.network_id(), Some("N2"));
    assert_eq!(trust.get("N1"), Some(1.0));
}

#[test]
fn trust_gate_blocks_when_nobody_passes() {
    let mut trust = TrustTable::new();
    for id in FIXTURE_IDS {
        trust.set(id, 0.1);
    }
    let out = tdvhd_select(
        &fixture_request(),
        &fixture_candidates(),
        &mut trust,
        &TrustConfig::default(),
        &DelayModel::default(),
    )
    .unwrap();
    assert_eq!(out.result, Selection::Blocked);
}

#[test]
fn failing_liar_is_excluded_after_three_updates() {
    let cfg = TrustConfig::default();
    let req = QosVector::new(30.0, 150.0, 5.0, 64.0);
    let bad = QosVector::new(60.0, 300.0, 8.0, 32.0);
    let mut t = TrustTable::new();
    let lots: Vec<f64> = (0..3)
        .map(|_| trust_update(&mut t, "L", &bad, &req, &cfg))
        .collect();
    assert!((lots[0] - 0.8).abs() < 1e-12);
    assert!((lots[1] - 0.6).abs() < 1e-12);
    assert!((lots[2] - 0.4).abs() < 1e-12);
    assert!(lots[1] >= cfg.threshold && lots[2] < cfg.threshold);
}

fn candidate_set() -> impl Strategy<Value = Vec<VisitorNetwork>> {
    prop::collection::vec(prop::array::uniform4(0.0f64..200.0), 1..6).prop_map(|qs| {
        qs.into_iter()
            .enumerate()
            .map(|(i, q)| {
                VisitorNetwork::honest(
                    format!("N{i}"),
                    Technology::WiFi,
                    QosVector::from_array(q),
                    Coverage {
                        x: 0.0,
                        y: 0.0,
                        radius: 1.0,
                    },
                )
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn cvhd_never_faster(n in 1usize..20, l in 0.0f64..50.0, t in 0.01f64..20.0, k in 1.0f64..10.0, s in 0.0f64..5.0) {
        let m = DelayModel { msg_latency: l, calc_time: t, mt_slowdown: k, select_time: s, gate_cost: 0.0 };
        let c = processing_delay(Scheme::Cvhd, n, &m).unwrap();
        let d = processing_delay(Scheme::Dvhd, n, &m).unwrap();
        prop_assert!(c >= d);
        if n >= 2 || k > 1.0 { prop_assert!(c > d); }
        prop_assert_eq!(d, processing_delay(Scheme::Dvhd, 1, &m).unwrap());
        let c_next = processing_delay(Scheme::Cvhd, n + 1, &m).unwrap();
        prop_assert!(((c_next - c) - k * t).abs() < 1e-9);
    }

    #[test]
    fn trusted_reduces_to_distributed(cands in candidate_set(), lots in prop::collection::vec(0.5f64..=1.0, 6)) {
        let req = fixture_request();
        let mut trust = TrustTable::new();
        for (c, lot) in cands.iter().zip(&lots) { trust.set(c.id.clone(), *lot); }
        let cfg = TrustConfig::default();
        let m = DelayModel::default();
        let t = tdvhd_select(&req, &cands, &mut trust, &cfg, &m).unwrap();
        let d = dvhd_select(&req, &cands, &m).unwrap();
        prop_assert_eq!(t.result, d.result);
    }

    #[test]
    fn selections_are_deterministic(cands in candidate_set()) {
        let req = fixture_request();
        let m = DelayModel::default();
        prop_assert_eq!(dvhd_select(&req, &cands, &m).unwrap(), dvhd_select(&req, &cands, &m).unwrap());
        prop_assert_eq!(cvhd_select(&req, &cands, &m).unwrap(), cvhd_select(&req, &cands, &m).unwrap());
    }

    #[test]
    fn failures_cross_threshold_in_bounded_steps(
        lot_init in 0.5f64..=1.0,
        threshold in 0.0f64..0.5,
        delta_minus in 0.01f64..0.5,
    ) {
        let cfg = TrustConfig { lot_init, threshold, delta_plus: 0.05, delta_minus };
        let req = QosVector::new(30.0, 150.0, 5.0, 64.0);
        let bad = QosVector::new(60.0, 300.0, 8.0, 32.0);
        let bound = ((lot_init - threshold) / delta_minus).ceil() as usize + 1;
        let mut t = TrustTable::new();
        let mut steps = 0;
        let mut lot = lot_init;
        while lot >= threshold && steps <= bound {
            lot = trust_update(&mut t, "L", &bad, &req, &cfg);
            steps += 1;
        }
        prop_assert!(threshold == 0.0 || lot < threshold);
        prop_assert!(steps <= bound);
        prop_assert!((0.0..=1.0).contains(&lot));
    }
}
