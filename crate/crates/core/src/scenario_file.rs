//! Sectioned `key = value` scenario files.
//!
//! ```text
//! # comment
//! [general]
//! sim_time = 200
//! scheme = TDVHD
//!
//! [profile]
//! required = 30, 150, 5, 64      # jitter ms, delay ms, cost, bandwidth kbit/s
//! weights = 0.3, 0.3, 0.1, 0.3
//!
//! [station]
//! id = BS1
//! technology = WiMax
//! x = 250
//! y = 250
//! radius = 400
//! advertised = 20, 90, 4, 1000
//! actual = 20, 90, 4, 1000       # optional, defaults to advertised
//!
//! [terminal]
//! x = 100
//! y = 100
//! ```
//!
//! `[general]`, `[trust]`, `[delay_model]` and `[traffic]` are optional and
//! fall back to the defaults in [`Scenario::with_profile`]. Unknown sections
//! and keys are rejected.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::madm::{validate_weights, MadmError};
use crate::network::{Coverage, QosVector, ServiceProfile, Technology, VisitorNetwork};
use crate::sim::{Scenario, SimError, TerminalSpec};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("{path}: invalid {key}: {message}")]
    Validation {
        path: String,
        key: String,
        message: String,
    },
    #[error("{path}:{line}: invalid profile weights: {source}")]
    Weights {
        path: String,
        line: usize,
        source: MadmError,
    },
}

const GENERAL_KEYS: &[&str] = &[
    "width",
    "height",
    "sim_time",
    "seed",
    "scheme",
    "eval_interval",
    "move_tick",
    "propagation_ms",
];
const PROFILE_KEYS: &[&str] = &["application", "required", "weights"];
const TRUST_KEYS: &[&str] = &["lot_init", "threshold", "delta_plus", "delta_minus"];
const DELAY_KEYS: &[&str] = &[
    "msg_latency",
    "calc_time",
    "mt_slowdown",
    "select_time",
    "gate_cost",
];
const TRAFFIC_KEYS: &[&str] = &["cbr_interval", "packet_size"];
const STATION_KEYS: &[&str] = &[
    "id",
    "technology",
    "x",
    "y",
    "radius",
    "advertised",
    "actual",
];
const TERMINAL_KEYS: &[&str] = &["id", "x", "y", "speed_min", "speed_max"];

struct Section {
    name: String,
    line: usize,
    entries: Vec<(usize, String, String)>,
}

impl Section {
    fn get(&self, key: &str) -> Option<(usize, &str)> {
        self.entries
            .iter()
            .find(|(_, k, _)| k == key)
            .map(|(l, _, v)| (*l, v.as_str()))
    }
}

struct Reader<'a> {
    path: &'a str,
}

impl Reader<'_> {
    fn err(&self, line: usize, message: impl Into<String>) -> ScenarioError {
        ScenarioError::Parse {
            path: self.path.to_string(),
            line,
            message: message.into(),
        }
    }

    fn sections(&self, text: &str) -> Result<Vec<Section>, ScenarioError> {
        let mut out: Vec<Section> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(rest) = content.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| self.err(line, "unterminated section header"))?
                    .trim()
                    .to_string();
                if allowed_keys(&name).is_none() {
                    return Err(self.err(line, format!("unknown section [{name}]")));
                }
                if !matches!(name.as_str(), "station" | "terminal")
                    && out.iter().any(|s| s.name == name)
                {
                    return Err(self.err(line, format!("duplicate section [{name}]")));
                }
                out.push(Section {
                    name,
                    line,
                    entries: Vec::new(),
                });
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| {
                self.err(line, format!("expected `key = value`, got {content:?}"))
            })?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            let section = out
                .last_mut()
                .ok_or_else(|| self.err(line, format!("key {key:?} outside of any section")))?;
            let allowed = allowed_keys(&section.name).unwrap_or(&[]);
            if !allowed.contains(&key.as_str()) {
                return Err(self.err(line, format!("unknown key {key:?} in [{}]", section.name)));
            }
            if section.get(&key).is_some() {
                return Err(self.err(line, format!("duplicate key {key:?}")));
            }
            if value.is_empty() {
                return Err(self.err(line, format!("empty value for {key:?}")));
            }
            section.entries.push((line, key, value));
        }
        Ok(out)
    }

    fn number(&self, s: &Section, key: &str, target: &mut f64) -> Result<(), ScenarioError> {
        if let Some((line, v)) = s.get(key) {
            *target = v
                .parse()
                .map_err(|_| self.err(line, format!("{key}: {v:?} is not a number")))?;
        }
        Ok(())
    }

    fn required_number(&self, s: &Section, key: &str) -> Result<f64, ScenarioError> {
        let mut v = f64::NAN;
        self.number(s, key, &mut v)?;
        if s.get(key).is_none() {
            return Err(self.err(s.line, format!("[{}] is missing {key:?}", s.name)));
        }
        Ok(v)
    }

    fn list(&self, line: usize, key: &str, v: &str) -> Result<Vec<f64>, ScenarioError> {
        v.split(',')
            .map(|x| {
                x.trim()
                    .parse::<f64>()
                    .map_err(|_| self.err(line, format!("{key}: {x:?} is not a number")))
            })
            .collect()
    }

    fn qos(&self, line: usize, key: &str, v: &str) -> Result<QosVector, ScenarioError> {
        let xs = self.list(line, key, v)?;
        let arr: [f64; 4] = xs.try_into().map_err(|xs: Vec<f64>| {
            self.err(
                line,
                format!(
                    "{key}: expected 4 values (jitter, delay, cost, bandwidth), got {}",
                    xs.len()
                ),
            )
        })?;
        Ok(QosVector::from_array(arr))
    }
}

fn allowed_keys(section: &str) -> Option<&'static [&'static str]> {
    Some(match section {
        "general" => GENERAL_KEYS,
        "profile" => PROFILE_KEYS,
        "trust" => TRUST_KEYS,
        "delay_model" => DELAY_KEYS,
        "traffic" => TRAFFIC_KEYS,
        "station" => STATION_KEYS,
        "terminal" => TERMINAL_KEYS,
        _ => return None,
    })
}

/// Parses scenario text; `origin` names the source in error messages.
pub fn parse_scenario_str(text: &str, origin: &str) -> Result<Scenario, ScenarioError> {
    let r = Reader { path: origin };
    let sections = r.sections(text)?;
    let find = |name: &str| sections.iter().find(|s| s.name == name);

    let profile_section = find("profile").ok_or_else(|| ScenarioError::Validation {
        path: origin.to_string(),
        key: "profile".into(),
        message: "missing [profile] section".into(),
    })?;
    let (req_line, req) = profile_section
        .get("required")
        .ok_or_else(|| r.err(profile_section.line, "[profile] is missing \"required\""))?;
    let required = r.qos(req_line, "required", req)?;
    let (w_line, w) = profile_section
        .get("weights")
        .ok_or_else(|| r.err(profile_section.line, "[profile] is missing \"weights\""))?;
    let raw_weights = r.list(w_line, "weights", w)?;
    if raw_weights.len() != 4 {
        return Err(r.err(
            w_line,
            format!(
                "weights: expected 4 values (jitter, delay, cost, bandwidth), got {}",
                raw_weights.len()
            ),
        ));
    }
    let weights = validate_weights(&raw_weights).map_err(|source| ScenarioError::Weights {
        path: origin.to_string(),
        line: w_line,
        source,
    })?;
    let application = profile_section
        .get("application")
        .map_or("VoIP", |(_, v)| v)
        .to_string();

    let mut sc = Scenario::with_profile(ServiceProfile {
        application,
        required,
        weights,
    });

    if let Some(s) = find("general") {
        r.number(s, "width", &mut sc.width)?;
        r.number(s, "height", &mut sc.height)?;
        r.number(s, "sim_time", &mut sc.sim_time)?;
        r.number(s, "eval_interval", &mut sc.eval_interval)?;
        r.number(s, "move_tick", &mut sc.move_tick)?;
        r.number(s, "propagation_ms", &mut sc.propagation_ms)?;
        if let Some((line, v)) = s.get("seed") {
            sc.seed = v
                .parse()
                .map_err(|_| r.err(line, format!("seed: {v:?} is not an unsigned integer")))?;
        }
        if let Some((line, v)) = s.get("scheme") {
            sc.scheme = v.parse().map_err(|e: String| r.err(line, e))?;
        }
    }
    if let Some(s) = find("trust") {
        r.number(s, "lot_init", &mut sc.trust.lot_init)?;
        r.number(s, "threshold", &mut sc.trust.threshold)?;
        r.number(s, "delta_plus", &mut sc.trust.delta_plus)?;
        r.number(s, "delta_minus", &mut sc.trust.delta_minus)?;
    }
    if let Some(s) = find("delay_model") {
        let m = &mut sc.delay_model;
        r.number(s, "msg_latency", &mut m.msg_latency)?;
        r.number(s, "calc_time", &mut m.calc_time)?;
        r.number(s, "mt_slowdown", &mut m.mt_slowdown)?;
        r.number(s, "select_time", &mut m.select_time)?;
        r.number(s, "gate_cost", &mut m.gate_cost)?;
    }
    if let Some(s) = find("traffic") {
        r.number(s, "cbr_interval", &mut sc.traffic.cbr_interval)?;
        if let Some((line, v)) = s.get("packet_size") {
            sc.traffic.packet_size = v
                .parse()
                .map_err(|_| r.err(line, format!("packet_size: {v:?} is not a byte count")))?;
        }
    }

    for s in sections.iter().filter(|s| s.name == "station") {
        let (_, id) = s
            .get("id")
            .ok_or_else(|| r.err(s.line, "[station] is missing \"id\""))?;
        let (tline, tech) = s
            .get("technology")
            .ok_or_else(|| r.err(s.line, "[station] is missing \"technology\""))?;
        let technology = Technology::parse(tech)
            .ok_or_else(|| r.err(tline, format!("technology: {tech:?} is not WiFi or WiMax")))?;
        let coverage = Coverage {
            x: r.required_number(s, "x")?,
            y: r.required_number(s, "y")?,
            radius: r.required_number(s, "radius")?,
        };
        let (aline, adv) = s
            .get("advertised")
            .ok_or_else(|| r.err(s.line, "[station] is missing \"advertised\""))?;
        let advertised = r.qos(aline, "advertised", adv)?;
        let actual = match s.get("actual") {
            Some((line, v)) => r.qos(line, "actual", v)?,
            None => advertised,
        };
        sc.stations.push(VisitorNetwork {
            id: id.to_string(),
            technology,
            advertised,
            actual,
            coverage,
        });
    }

    for (n, s) in sections.iter().filter(|s| s.name == "terminal").enumerate() {
        let mut t = TerminalSpec {
            id: s
                .get("id")
                .map_or_else(|| format!("MT{}", n + 1), |(_, v)| v.to_string()),
            x: r.required_number(s, "x")?,
            y: r.required_number(s, "y")?,
            speed_min: 1.0,
            speed_max: 15.0,
        };
        r.number(s, "speed_min", &mut t.speed_min)?;
        r.number(s, "speed_max", &mut t.speed_max)?;
        sc.terminals.push(t);
    }

    sc.validate().map_err(|e| match e {
        SimError::InvalidScenario { key, message } => ScenarioError::Validation {
            path: origin.to_string(),
            key,
            message,
        },
        other => ScenarioError::Validation {
            path: origin.to_string(),
            key: "scenario".into(),
            message: other.to_string(),
        },
    })?;
    Ok(sc)
}

pub fn parse_scenario(path: &Path) -> Result<Scenario, ScenarioError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: shown.clone(),
        source,
    })?;
    parse_scenario_str(&text, &shown)
}

fn qos_line(q: &QosVector) -> String {
    format!("{}, {}, {}, {}", q.jitter, q.delay, q.cost, q.bandwidth)
}

/// Writes every setting explicitly; `parse_scenario_str` reads it back to
/// an equal value.
pub fn format_scenario(sc: &Scenario) -> String {
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, "[general]");
    let _ = writeln!(w, "width = {}", sc.width);
    let _ = writeln!(w, "height = {}", sc.height);
    let _ = writeln!(w, "sim_time = {}", sc.sim_time);
    let _ = writeln!(w, "seed = {}", sc.seed);
    let _ = writeln!(w, "scheme = {}", sc.scheme);
    let _ = writeln!(w, "eval_interval = {}", sc.eval_interval);
    let _ = writeln!(w, "move_tick = {}", sc.move_tick);
    let _ = writeln!(w, "propagation_ms = {}", sc.propagation_ms);
    let _ = writeln!(w, "\n[profile]");
    let _ = writeln!(w, "application = {}", sc.profile.application);
    let _ = writeln!(w, "required = {}", qos_line(&sc.profile.required));
    let ws: Vec<String> = sc
        .profile
        .weights
        .as_slice()
        .iter()
        .map(|x| x.to_string())
        .collect();
    let _ = writeln!(w, "weights = {}", ws.join(", "));
    let _ = writeln!(w, "\n[trust]");
    let _ = writeln!(w, "lot_init = {}", sc.trust.lot_init);
    let _ = writeln!(w, "threshold = {}", sc.trust.threshold);
    let _ = writeln!(w, "delta_plus = {}", sc.trust.delta_plus);
    let _ = writeln!(w, "delta_minus = {}", sc.trust.delta_minus);
    let m = &sc.delay_model;
    let _ = writeln!(w, "\n[delay_model]");
    let _ = writeln!(w, "msg_latency = {}", m.msg_latency);
    let _ = writeln!(w, "calc_time = {}", m.calc_time);
    let _ = writeln!(w, "mt_slowdown = {}", m.mt_slowdown);
    let _ = writeln!(w, "select_time = {}", m.select_time);
    let _ = writeln!(w, "gate_cost = {}", m.gate_cost);
    let _ = writeln!(w, "\n[traffic]");
    let _ = writeln!(w, "cbr_interval = {}", sc.traffic.cbr_interval);
    let _ = writeln!(w, "packet_size = {}", sc.traffic.packet_size);
    for st in &sc.stations {
        let _ = writeln!(w, "\n[station]");
        let _ = writeln!(w, "id = {}", st.id);
        let _ = writeln!(w, "technology = {}", st.technology);
        let _ = writeln!(w, "x = {}", st.coverage.x);
        let _ = writeln!(w, "y = {}", st.coverage.y);
        let _ = writeln!(w, "radius = {}", st.coverage.radius);
        let _ = writeln!(w, "advertised = {}", qos_line(&st.advertised));
        let _ = writeln!(w, "actual = {}", qos_line(&st.actual));
    }
    for t in &sc.terminals {
        let _ = writeln!(w, "\n[terminal]");
        let _ = writeln!(w, "id = {}", t.id);
        let _ = writeln!(w, "x = {}", t.x);
        let _ = writeln!(w, "y = {}", t.y);
        let _ = writeln!(w, "speed_min = {}", t.speed_min);
        let _ = writeln!(w, "speed_max = {}", t.speed_max);
    }
    out
}
