//! Vertical handover decision library and simulator.
//!
//! * [`madm`]: the TOPSIS pipeline.
//! * [`network`]: QoS vectors, visitor networks and the network selection
//!   function (per-network and centralized).
//! * [`protocol`]: the C-VHD, D-VHD and T-DVHD decision schemes, trust
//!   table updates and the processing-delay model.
//! * [`sim`]: the discrete-event simulator and its metrics.
//! * [`scenario_file`] and [`report`]: scenario files, CSV output and sweeps
//!   used by the `vho` binary.

pub mod madm;
pub mod network;
pub mod protocol;
pub mod report;
pub mod scenario_file;
pub mod sim;

pub use madm::{
    topsis_rank, validate_weights, ClosenessScores, CriterionSpec, DecisionMatrix, Direction,
    MadmError, WeightVector,
};
pub use network::{
    nqv_local, nsf_centralized, Coverage, DecisionError, NqvReport, QosVector, ServiceProfile,
    Technology, VisitorNetwork,
};
pub use protocol::{
    cvhd_select, dvhd_select, processing_delay, tdvhd_select, trust_update, DecisionOutcome,
    DelayModel, HandoverRequest, Scheme, Selection, TrustConfig, TrustTable,
};
pub use scenario_file::{format_scenario, parse_scenario, parse_scenario_str, ScenarioError};
pub use sim::{run, MetricsLog, Scenario, SimError};
