//! Deterministic discrete-event simulation of terminals moving through
//! overlapping coverage discs.
//!
//! Time is kept in integer microseconds. Events are totally ordered by
//! `(time, kind, terminal index, insertion sequence)`, and each terminal
//! draws its mobility from its own ChaCha stream, so a scenario and seed
//! always reproduce the same log.

mod metrics;

pub use metrics::{
    end_to_end_delay, handover_event_count, throughput, EventRecord, LogKind, MetricsError,
    MetricsLog, PacketRecord, PathDelay, TerminalCounters,
};

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::madm::validate_weights;
use crate::network::{Coverage, QosVector, ServiceProfile, Technology, VisitorNetwork};
use crate::protocol::{
    cvhd_select, dvhd_select, tdvhd_select, trust_update, DecisionOutcome, DelayModel,
    HandoverRequest, Scheme, Selection, TrustConfig, TrustTable,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid scenario: {key}: {message}")]
    InvalidScenario { key: String, message: String },
    #[error("decision failed: {0}")]
    Decision(#[from] crate::network::DecisionError),
}

fn invalid(key: impl Into<String>, message: impl Into<String>) -> SimError {
    SimError::InvalidScenario {
        key: key.into(),
        message: message.into(),
    }
}

pub fn seconds_to_us(s: f64) -> u64 {
    (s * 1e6).round() as u64
}

#[derive(Debug, Clone, PartialEq)]
pub struct TerminalSpec {
    pub id: String,
    pub x: f64,
    pub y: f64,
    /// m/s; `speed_max == 0` means stationary.
    pub speed_min: f64,
    pub speed_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Traffic {
    /// Seconds between CBR packets.
    pub cbr_interval: f64,
    pub packet_size: u32,
}

impl Default for Traffic {
    fn default() -> Self {
        Self {
            cbr_interval: 0.1,
            packet_size: 1240,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub width: f64,
    pub height: f64,
    /// Seconds.
    pub sim_time: f64,
    pub seed: u64,
    pub scheme: Scheme,
    /// Seconds between quality checks of the attached network.
    pub eval_interval: f64,
    /// Seconds between mobility updates.
    pub move_tick: f64,
    /// Fixed per-link propagation delay, ms.
    pub propagation_ms: f64,
    pub terminals: Vec<TerminalSpec>,
    pub stations: Vec<VisitorNetwork>,
    pub traffic: Traffic,
    pub trust: TrustConfig,
    pub delay_model: DelayModel,
    pub profile: ServiceProfile,
}

impl Scenario {
    /// A scenario with every general setting at its default and no
    /// stations or terminals.
    pub fn with_profile(profile: ServiceProfile) -> Self {
        Self {
            width: 500.0,
            height: 500.0,
            sim_time: 200.0,
            seed: 1,
            scheme: Scheme::Dvhd,
            eval_interval: 5.0,
            move_tick: 1.0,
            propagation_ms: 0.1,
            terminals: Vec::new(),
            stations: Vec::new(),
            traffic: Traffic::default(),
            trust: TrustConfig::default(),
            delay_model: DelayModel::default(),
            profile,
        }
    }

    /// VoIP requirement used by the bundled scenarios.
    pub fn voip_profile() -> ServiceProfile {
        ServiceProfile {
            application: "VoIP".into(),
            required: QosVector::new(30.0, 150.0, 5.0, 64.0),
            weights: validate_weights(&[0.3, 0.3, 0.1, 0.3]).expect("valid weights"),
        }
    }

    /// 500 x 500 m, 7 terminals, 4 base stations (two WiMax, two WiFi),
    /// 0.1 s CBR with 1240-byte packets, 200 s. Every station covers the
    /// whole area; BS2 advertises far better QoS than it delivers.
    pub fn table1() -> Self {
        let mut s = Self::with_profile(Self::voip_profile());
        s.seed = 7;
        let disc = |x, y| Coverage {
            x,
            y,
            radius: 430.0,
        };
        s.stations = vec![
            VisitorNetwork::honest(
                "BS1",
                Technology::WiMax,
                QosVector::new(25.0, 120.0, 6.0, 2000.0),
                disc(200.0, 200.0),
            ),
            VisitorNetwork {
                id: "BS2".into(),
                technology: Technology::WiFi,
                advertised: QosVector::new(5.0, 40.0, 2.0, 5000.0),
                actual: QosVector::new(60.0, 300.0, 2.0, 32.0),
                coverage: disc(300.0, 200.0),
            },
            VisitorNetwork::honest(
                "BS3",
                Technology::WiMax,
                QosVector::new(20.0, 90.0, 4.0, 1000.0),
                disc(200.0, 300.0),
            ),
            VisitorNetwork::honest(
                "BS4",
                Technology::WiFi,
                QosVector::new(15.0, 60.0, 3.0, 1500.0),
                disc(300.0, 300.0),
            ),
        ];
        let starts = [
            (50.0, 50.0),
            (450.0, 80.0),
            (120.0, 400.0),
            (250.0, 250.0),
            (400.0, 420.0),
            (300.0, 120.0),
            (80.0, 260.0),
        ];
        s.terminals = starts
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| TerminalSpec {
                id: format!("MT{}", i + 1),
                x,
                y,
                speed_min: 1.0,
                speed_max: 15.0,
            })
            .collect();
        s
    }

    /// A copy keeping only the first `n` stations.
    pub fn restricted(&self, n: usize) -> Self {
        let mut s = self.clone();
        s.stations.truncate(n);
        s
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let positive = |key: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(invalid(key, format!("{v} must be a positive number")))
            }
        };
        positive("general.width", self.width)?;
        positive("general.height", self.height)?;
        positive("general.sim_time", self.sim_time)?;
        positive("general.eval_interval", self.eval_interval)?;
        positive("general.move_tick", self.move_tick)?;
        positive("traffic.cbr_interval", self.traffic.cbr_interval)?;
        if !(self.propagation_ms >= 0.0 && self.propagation_ms.is_finite()) {
            return Err(invalid(
                "general.propagation_ms",
                format!("{} must be >= 0", self.propagation_ms),
            ));
        }
        if self.traffic.packet_size == 0 {
            return Err(invalid("traffic.packet_size", "must be > 0"));
        }
        self.trust.validate().map_err(|m| invalid("trust", m))?;
        self.delay_model
            .validate()
            .map_err(|m| invalid("delay_model", m))?;
        self.profile
            .required
            .validate()
            .map_err(|e| invalid("profile.required", e.to_string()))?;
        if self.profile.weights.len() != 4 {
            return Err(invalid("profile.weights", "exactly 4 weights are required"));
        }

        if self.stations.is_empty() {
            return Err(invalid("station", "at least one [station] is required"));
        }
        let mut ids = std::collections::HashSet::new();
        for st in &self.stations {
            let key = format!("station {}", st.id);
            if st.id.is_empty() {
                return Err(invalid("station.id", "must not be empty"));
            }
            if !ids.insert(st.id.as_str()) {
                return Err(invalid(key, "duplicate station id"));
            }
            positive(&format!("{key}: radius"), st.coverage.radius)?;
            st.advertised
                .validate()
                .map_err(|e| invalid(format!("{key}: advertised"), e.to_string()))?;
            st.actual
                .validate()
                .map_err(|e| invalid(format!("{key}: actual"), e.to_string()))?;
            let (cx, cy) = (st.coverage.x, st.coverage.y);
            let margin = st.coverage.radius;
            if !(cx.is_finite() && cy.is_finite())
                || cx < -margin
                || cx > self.width + margin
                || cy < -margin
                || cy > self.height + margin
            {
                return Err(invalid(
                    format!("{key}: x/y"),
                    "coverage disc does not reach the topography",
                ));
            }
        }

        if self.terminals.is_empty() {
            return Err(invalid("terminal", "at least one [terminal] is required"));
        }
        let mut ids = std::collections::HashSet::new();
        for t in &self.terminals {
            let key = format!("terminal {}", t.id);
            if !ids.insert(t.id.as_str()) {
                return Err(invalid(key, "duplicate terminal id"));
            }
            if !(0.0..=self.width).contains(&t.x) || !(0.0..=self.height).contains(&t.y) {
                return Err(invalid(
                    format!("{key}: x/y"),
                    "initial position outside the topography",
                ));
            }
            if !(t.speed_min >= 0.0 && t.speed_min <= t.speed_max && t.speed_max.is_finite()) {
                return Err(invalid(
                    format!("{key}: speed"),
                    "need 0 <= speed_min <= speed_max",
                ));
            }
        }
        Ok(())
    }
}

/// Closed-disc coverage test.
pub fn in_coverage(position: (f64, f64), station: &VisitorNetwork) -> bool {
    let dx = position.0 - station.coverage.x;
    let dy = position.1 - station.coverage.y;
    (dx * dx + dy * dy).sqrt() <= station.coverage.radius
}

#[derive(Debug, Clone)]
pub struct MobileTerminal {
    pub id: String,
    pub position: (f64, f64),
    pub waypoint: (f64, f64),
    pub speed: f64,
    pub attached: Option<String>,
    pub trust: TrustTable,
    pending: bool,
    attach_epoch: u64,
    evaluated: bool,
    outage_logged: bool,
    speed_range: (f64, f64),
    rng: ChaCha8Rng,
}

impl MobileTerminal {
    pub fn new(spec: &TerminalSpec, seed: u64, stream: u64, area: (f64, f64)) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let mut t = Self {
            id: spec.id.clone(),
            position: (spec.x, spec.y),
            waypoint: (spec.x, spec.y),
            speed: 0.0,
            attached: None,
            trust: TrustTable::new(),
            pending: false,
            attach_epoch: 0,
            evaluated: false,
            outage_logged: false,
            speed_range: (spec.speed_min, spec.speed_max),
            rng,
        };
        t.next_leg(area);
        t
    }

    /// A terminal with no mobility state, for evaluating triggers directly.
    pub fn stationary(id: impl Into<String>, position: (f64, f64)) -> Self {
        let spec = TerminalSpec {
            id: id.into(),
            x: position.0,
            y: position.1,
            speed_min: 0.0,
            speed_max: 0.0,
        };
        Self::new(&spec, 0, 0, (f64::MAX, f64::MAX))
    }

    fn is_stationary(&self) -> bool {
        self.speed_range.1 <= 0.0
    }

    fn next_leg(&mut self, area: (f64, f64)) {
        if self.is_stationary() {
            return;
        }
        self.waypoint = (
            self.rng.random_range(0.0..=area.0),
            self.rng.random_range(0.0..=area.1),
        );
        let (lo, hi) = self.speed_range;
        self.speed = if hi > lo {
            self.rng.random_range(lo..=hi)
        } else {
            lo
        };
    }

    /// Random-waypoint step of `dt` seconds. Reaching the waypoint ends
    /// the step and draws the next leg.
    fn advance(&mut self, dt: f64, area: (f64, f64)) {
        if self.is_stationary() {
            return;
        }
        let (dx, dy) = (
            self.waypoint.0 - self.position.0,
            self.waypoint.1 - self.position.1,
        );
        let dist = (dx * dx + dy * dy).sqrt();
        let step = self.speed * dt;
        if dist <= step {
            self.position = self.waypoint;
            self.next_leg(area);
        } else {
            let f = step / dist;
            self.position.0 += dx * f;
            self.position.1 += dy * f;
        }
        self.position.0 = self.position.0.clamp(0.0, area.0);
        self.position.1 = self.position.1.clamp(0.0, area.1);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriggerReason {
    Unattached,
    LeftCoverage,
    QualityFailure,
}

impl fmt::Display for TriggerReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TriggerReason::Unattached => "unattached",
            TriggerReason::LeftCoverage => "left_coverage",
            TriggerReason::QualityFailure => "quality_failure",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trigger<'a> {
    pub reason: TriggerReason,
    pub candidates: Vec<&'a VisitorNetwork>,
}

/// Decides whether the terminal must run a handover decision now.
///
/// `quality_check` carries the requirement when this call is a periodic
/// re-evaluation of the attached network. Geometric triggers exclude the
/// attached network from the candidates; a quality failure keeps it, since
/// the terminal only knows what networks advertise.
pub fn handover_trigger<'a>(
    terminal: &MobileTerminal,
    stations: &'a [VisitorNetwork],
    quality_check: Option<&QosVector>,
) -> Option<Trigger<'a>> {
    let covering = |exclude: Option<&str>| -> Vec<&'a VisitorNetwork> {
        stations
            .iter()
            .filter(|s| Some(s.id.as_str()) != exclude && in_coverage(terminal.position, s))
            .collect()
    };
    let Some(current_id) = terminal.attached.as_deref() else {
        return Some(Trigger {
            reason: TriggerReason::Unattached,
            candidates: covering(None),
        });
    };
    let current = stations.iter().find(|s| s.id == current_id);
    match current {
        Some(c) if in_coverage(terminal.position, c) => {
            let required = quality_check?;
            if c.actual.satisfies(required) {
                None
            } else {
                Some(Trigger {
                    reason: TriggerReason::QualityFailure,
                    candidates: covering(None),
                })
            }
        }
        _ => Some(Trigger {
            reason: TriggerReason::LeftCoverage,
            candidates: covering(Some(current_id)),
        }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum EventKind {
    Move,
    PacketSend,
    HandoverTrigger,
    HandoverComplete,
    TrustEvaluate,
}

#[derive(Debug, Clone)]
enum Payload {
    None,
    Trigger {
        reason: TriggerReason,
        candidates: Vec<usize>,
    },
    Complete {
        from: Option<String>,
        to: String,
        delay_ms: f64,
        nqv: f64,
    },
    Evaluate {
        epoch: u64,
    },
}

#[derive(Debug, Clone)]
pub struct SimEvent {
    pub time_us: u64,
    pub kind: EventKind,
    pub terminal: usize,
    seq: u64,
    payload: Payload,
}

impl SimEvent {
    fn key(&self) -> (u64, EventKind, usize, u64) {
        (self.time_us, self.kind, self.terminal, self.seq)
    }
}

impl PartialEq for SimEvent {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for SimEvent {}

impl PartialOrd for SimEvent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SimEvent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

struct Engine<'s> {
    scenario: &'s Scenario,
    area: (f64, f64),
    end_us: u64,
    tick_us: u64,
    eval_us: u64,
    cbr_us: u64,
    queue: BinaryHeap<Reverse<SimEvent>>,
    seq: u64,
    terminals: Vec<MobileTerminal>,
    log: MetricsLog,
}

impl<'s> Engine<'s> {
    fn new(scenario: &'s Scenario) -> Self {
        let area = (scenario.width, scenario.height);
        let terminals = scenario
            .terminals
            .iter()
            .enumerate()
            .map(|(i, spec)| MobileTerminal::new(spec, scenario.seed, i as u64, area))
            .collect();
        let counters = scenario
            .terminals
            .iter()
            .map(|t| TerminalCounters {
                terminal: t.id.clone(),
                ..TerminalCounters::default()
            })
            .collect();
        Self {
            scenario,
            area,
            end_us: seconds_to_us(scenario.sim_time),
            tick_us: seconds_to_us(scenario.move_tick).max(1),
            eval_us: seconds_to_us(scenario.eval_interval).max(1),
            cbr_us: seconds_to_us(scenario.traffic.cbr_interval).max(1),
            queue: BinaryHeap::new(),
            seq: 0,
            terminals,
            log: MetricsLog {
                counters,
                ..MetricsLog::default()
            },
        }
    }

    fn push(&mut self, time_us: u64, kind: EventKind, terminal: usize, payload: Payload) {
        if time_us > self.end_us {
            return;
        }
        self.seq += 1;
        self.queue.push(Reverse(SimEvent {
            time_us,
            kind,
            terminal,
            seq: self.seq,
            payload,
        }));
    }

    #[allow(clippy::too_many_arguments)]
    fn record(
        &mut self,
        time_us: u64,
        terminal: usize,
        kind: LogKind,
        from: Option<String>,
        to: Option<String>,
        processing_delay_ms: Option<f64>,
        detail: String,
    ) {
        self.log.events.push(EventRecord {
            time_us,
            terminal: self.terminals[terminal].id.clone(),
            kind,
            from,
            to,
            processing_delay_ms,
            detail,
        });
    }

    fn station(&self, id: &str) -> Option<&'s VisitorNetwork> {
        self.scenario.stations.iter().find(|s| s.id == id)
    }

    fn run(mut self) -> Result<MetricsLog, SimError> {
        for i in 0..self.terminals.len() {
            self.push(0, EventKind::Move, i, Payload::None);
            self.push(self.cbr_us, EventKind::PacketSend, i, Payload::None);
        }
        while let Some(Reverse(ev)) = self.queue.pop() {
            match ev.kind {
                EventKind::Move => self.on_move(ev.time_us, ev.terminal),
                EventKind::PacketSend => self.on_packet(ev.time_us, ev.terminal),
                EventKind::HandoverTrigger => {
                    if let Payload::Trigger { reason, candidates } = ev.payload {
                        self.on_trigger(ev.time_us, ev.terminal, reason, &candidates)?;
                    }
                }
                EventKind::HandoverComplete => {
                    if let Payload::Complete {
                        from,
                        to,
                        delay_ms,
                        nqv,
                    } = ev.payload
                    {
                        self.on_complete(ev.time_us, ev.terminal, from, to, delay_ms, nqv);
                    }
                }
                EventKind::TrustEvaluate => {
                    if let Payload::Evaluate { epoch } = ev.payload {
                        self.on_evaluate(ev.time_us, ev.terminal, epoch);
                    }
                }
            }
        }
        Ok(self.log)
    }

    fn indices(&self, candidates: &[&VisitorNetwork]) -> Vec<usize> {
        candidates
            .iter()
            .filter_map(|c| self.scenario.stations.iter().position(|s| s.id == c.id))
            .collect()
    }

    /// Raises a trigger event, or handles the no-coverage case in place.
    fn raise(&mut self, t: u64, i: usize, required: Option<&QosVector>) {
        let trigger = handover_trigger(&self.terminals[i], &self.scenario.stations, required);
        let Some(trigger) = trigger else {
            return;
        };
        if trigger.candidates.is_empty() {
            let term = &mut self.terminals[i];
            let from = term.attached.take();
            if from.is_some() {
                term.attach_epoch += 1;
            }
            if from.is_some() || !term.outage_logged {
                term.outage_logged = true;
                self.record(
                    t,
                    i,
                    LogKind::NoCoverage,
                    from,
                    None,
                    None,
                    trigger.reason.to_string(),
                );
            }
            return;
        }
        let candidates = self.indices(&trigger.candidates);
        self.terminals[i].pending = true;
        self.push(
            t,
            EventKind::HandoverTrigger,
            i,
            Payload::Trigger {
                reason: trigger.reason,
                candidates,
            },
        );
    }

    fn on_move(&mut self, t: u64, i: usize) {
        if t > 0 {
            let dt = self.scenario.move_tick;
            let area = self.area;
            self.terminals[i].advance(dt, area);
        }
        if !self.terminals[i].pending {
            self.raise(t, i, None);
        }
        self.push(t + self.tick_us, EventKind::Move, i, Payload::None);
    }

    fn on_packet(&mut self, t: u64, i: usize) {
        let size = self.scenario.traffic.packet_size;
        let term = &self.terminals[i];
        let link = term
            .attached
            .as_deref()
            .and_then(|id| self.station(id))
            .filter(|s| in_coverage(term.position, s) && s.actual.bandwidth > 0.0);
        let delivery = link.map(|s| PathDelay {
            network: s.id.clone(),
            // kbit/s == bit/ms
            transmission_ms: f64::from(size) * 8.0 / s.actual.bandwidth,
            propagation_ms: self.scenario.propagation_ms,
            processing_ms: s.actual.delay,
        });
        let c = &mut self.log.counters[i];
        c.packets_sent += 1;
        if delivery.is_some() {
            c.packets_delivered += 1;
            c.bytes_delivered += u64::from(size);
        } else {
            c.packets_dropped += 1;
        }
        self.log.packets.push(PacketRecord {
            terminal: term.id.clone(),
            send_us: t,
            size_bytes: size,
            delivery,
        });
        self.push(t + self.cbr_us, EventKind::PacketSend, i, Payload::None);
    }

    fn decide(
        &mut self,
        i: usize,
        t: u64,
        candidates: &[VisitorNetwork],
    ) -> Result<DecisionOutcome, SimError> {
        let sc = self.scenario;
        let request = HandoverRequest {
            terminal_id: self.terminals[i].id.clone(),
            required: sc.profile.required,
            weights: sc.profile.weights.clone(),
            timestamp: t as f64 / 1e6,
        };
        Ok(match sc.scheme {
            Scheme::Cvhd => cvhd_select(&request, candidates, &sc.delay_model)?,
            Scheme::Dvhd => dvhd_select(&request, candidates, &sc.delay_model)?,
            Scheme::Tdvhd => tdvhd_select(
                &request,
                candidates,
                &mut self.terminals[i].trust,
                &sc.trust,
                &sc.delay_model,
            )?,
        })
    }

    fn on_trigger(
        &mut self,
        t: u64,
        i: usize,
        reason: TriggerReason,
        candidates: &[usize],
    ) -> Result<(), SimError> {
        let stations: Vec<VisitorNetwork> = candidates
            .iter()
            .map(|&k| self.scenario.stations[k].clone())
            .collect();
        let from = self.terminals[i].attached.clone();
        let names: Vec<&str> = stations.iter().map(|s| s.id.as_str()).collect();
        self.record(
            t,
            i,
            LogKind::Trigger,
            from.clone(),
            None,
            None,
            format!("{reason}: {}", names.join(";")),
        );
        let outcome = self.decide(i, t, &stations)?;
        match outcome.result {
            Selection::Selected { network_id, nqv } => {
                let done = t + seconds_to_us(outcome.processing_delay / 1000.0);
                self.push(
                    done,
                    EventKind::HandoverComplete,
                    i,
                    Payload::Complete {
                        from,
                        to: network_id,
                        delay_ms: outcome.processing_delay,
                        nqv,
                    },
                );
                if done > self.end_us {
                    self.terminals[i].pending = false;
                }
            }
            Selection::Blocked => {
                self.terminals[i].pending = false;
                self.record(
                    t,
                    i,
                    LogKind::Blocked,
                    from.clone(),
                    None,
                    Some(outcome.processing_delay),
                    format!("{reason}: no candidate passed the trust gate"),
                );
                if from.is_some() {
                    let epoch = self.terminals[i].attach_epoch;
                    self.push(
                        t + self.eval_us,
                        EventKind::TrustEvaluate,
                        i,
                        Payload::Evaluate { epoch },
                    );
                }
            }
        }
        Ok(())
    }

    fn on_complete(
        &mut self,
        t: u64,
        i: usize,
        from: Option<String>,
        to: String,
        delay_ms: f64,
        nqv: f64,
    ) {
        let term = &mut self.terminals[i];
        term.attached = Some(to.clone());
        term.pending = false;
        term.attach_epoch += 1;
        term.evaluated = false;
        term.outage_logged = false;
        let epoch = term.attach_epoch;
        self.record(
            t,
            i,
            LogKind::HandoverComplete,
            from,
            Some(to),
            Some(delay_ms),
            format!("nqv={nqv:.6}"),
        );
        self.push(
            t + self.eval_us,
            EventKind::TrustEvaluate,
            i,
            Payload::Evaluate { epoch },
        );
    }

    fn on_evaluate(&mut self, t: u64, i: usize, epoch: u64) {
        let sc = self.scenario;
        let term = &self.terminals[i];
        if term.pending || term.attach_epoch != epoch {
            return;
        }
        let Some(net) = term.attached.as_deref().and_then(|id| self.station(id)) else {
            return;
        };
        if sc.scheme == Scheme::Tdvhd && !term.evaluated {
            let term = &mut self.terminals[i];
            term.evaluated = true;
            let ok = net.actual.satisfies(&sc.profile.required);
            let lot = trust_update(
                &mut term.trust,
                &net.id,
                &net.actual,
                &sc.profile.required,
                &sc.trust,
            );
            self.record(
                t,
                i,
                LogKind::TrustUpdate,
                None,
                Some(net.id.clone()),
                None,
                format!("lot={lot:.6} satisfied={ok}"),
            );
        }
        self.raise(t, i, Some(&sc.profile.required));
        if !self.terminals[i].pending && self.terminals[i].attach_epoch == epoch {
            self.push(
                t + self.eval_us,
                EventKind::TrustEvaluate,
                i,
                Payload::Evaluate { epoch },
            );
        }
    }
}

/// Runs the scenario to completion.
pub fn run(scenario: &Scenario) -> Result<MetricsLog, SimError> {
    scenario.validate()?;
    Engine::new(scenario).run()
}
