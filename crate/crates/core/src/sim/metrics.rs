//! Simulation log and the metrics computed from it.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("terminal {terminal:?} delivered {count} packet(s), throughput needs at least 2")]
    InsufficientPackets { terminal: String, count: usize },
    #[error("no delivered packets in the log")]
    NoPackets,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LogKind {
    Trigger,
    HandoverComplete,
    Blocked,
    NoCoverage,
    TrustUpdate,
}

impl LogKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LogKind::Trigger => "trigger",
            LogKind::HandoverComplete => "handover",
            LogKind::Blocked => "blocked",
            LogKind::NoCoverage => "no_coverage",
            LogKind::TrustUpdate => "trust_update",
        }
    }
}

impl fmt::Display for LogKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EventRecord {
    pub time_us: u64,
    pub terminal: String,
    pub kind: LogKind,
    pub from: Option<String>,
    pub to: Option<String>,
    pub processing_delay_ms: Option<f64>,
    pub detail: String,
}

/// Per-link delay components of a delivered packet, in milliseconds.
#[derive(Debug, Clone, PartialEq)]
pub struct PathDelay {
    pub network: String,
    pub transmission_ms: f64,
    pub propagation_ms: f64,
    pub processing_ms: f64,
}

impl PathDelay {
    pub fn total_ms(&self) -> f64 {
        self.transmission_ms + self.propagation_ms + self.processing_ms
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PacketRecord {
    pub terminal: String,
    pub send_us: u64,
    pub size_bytes: u32,
    /// `None` when the terminal had no usable link.
    pub delivery: Option<PathDelay>,
}

impl PacketRecord {
    pub fn delivery_us(&self) -> Option<u64> {
        self.delivery
            .as_ref()
            .map(|d| self.send_us + (d.total_ms() * 1000.0).round() as u64)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TerminalCounters {
    pub terminal: String,
    pub packets_sent: u64,
    pub packets_delivered: u64,
    pub packets_dropped: u64,
    pub bytes_delivered: u64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MetricsLog {
    pub events: Vec<EventRecord>,
    pub packets: Vec<PacketRecord>,
    pub counters: Vec<TerminalCounters>,
}

impl MetricsLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn counters_for(&self, terminal: &str) -> Option<&TerminalCounters> {
        self.counters.iter().find(|c| c.terminal == terminal)
    }

    pub fn events_of(&self, kind: LogKind) -> impl Iterator<Item = &EventRecord> {
        self.events.iter().filter(move |e| e.kind == kind)
    }

    /// Mean processing delay over all resolved decisions (handovers and
    /// blocked attempts).
    pub fn mean_processing_delay_ms(&self) -> Option<f64> {
        let delays: Vec<f64> = self
            .events
            .iter()
            .filter(|e| matches!(e.kind, LogKind::HandoverComplete | LogKind::Blocked))
            .filter_map(|e| e.processing_delay_ms)
            .collect();
        if delays.is_empty() {
            None
        } else {
            Some(delays.iter().sum::<f64>() / delays.len() as f64)
        }
    }
}

/// Bits per second: delivered bytes * 8 over the span between the first
/// and last delivered packet's send time.
pub fn throughput(log: &MetricsLog, terminal: &str) -> Result<f64, MetricsError> {
    let mut count = 0usize;
    let mut bytes = 0u64;
    let mut first = u64::MAX;
    let mut last = 0u64;
    for p in log
        .packets
        .iter()
        .filter(|p| p.terminal == terminal && p.delivery.is_some())
    {
        count += 1;
        bytes += u64::from(p.size_bytes);
        first = first.min(p.send_us);
        last = last.max(p.send_us);
    }
    if count < 2 || last == first {
        return Err(MetricsError::InsufficientPackets {
            terminal: terminal.to_string(),
            count,
        });
    }
    let span_s = (last - first) as f64 / 1e6;
    Ok(bytes as f64 * 8.0 / span_s)
}

/// Mean end-to-end delay in milliseconds over every delivered packet.
pub fn end_to_end_delay(log: &MetricsLog) -> Result<f64, MetricsError> {
    let (sum, n) = log
        .packets
        .iter()
        .filter_map(|p| p.delivery.as_ref())
        .fold((0.0, 0usize), |(s, n), d| (s + d.total_ms(), n + 1));
    if n == 0 {
        return Err(MetricsError::NoPackets);
    }
    Ok(sum / n as f64)
}

/// Completed handovers, for one terminal or (`None`) all of them.
pub fn handover_event_count(log: &MetricsLog, terminal: Option<&str>) -> usize {
    log.events_of(LogKind::HandoverComplete)
        .filter(|e| terminal.is_none_or(|t| e.terminal == t))
        .count()
}
