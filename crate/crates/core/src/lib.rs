//! Storage capacity of wireless distributed storage with broadcast repair.
//!
//! Storage nodes share a broadcast medium. When `r` nodes have failed, `r`
//! newcomers join and `d` helpers each broadcast `β` packets that every
//! newcomer hears. This crate builds the information flow graph of such a
//! repair schedule, computes exact min-cuts, evaluates the closed-form lower
//! bound on storage capacity together with the schedule that attains it,
//! sweeps the storage / repair-transmission tradeoff, and checks
//! achievability with random linear network coding.

pub mod bound;
pub mod error;
pub mod figures;
pub mod flowgraph;
pub mod frac;
pub mod mincut;
pub mod model;
pub mod rlnc;
pub mod tradeoff;

pub use bound::{adversarial_instance, c_lb, effective_horizon, BoundResult, CutProfile};
pub use error::{Error, Result};
pub use flowgraph::{build_graph, cut_capacity, Cut, FlowGraph, Vertex};
pub use frac::{parse_q, Capacity, LinearForm, Q};
pub use mincut::{instance_capacity, max_flow_min_cut, storage_capacity, CapacityReport, Scope};
pub use model::{DataCollectorSpec, Instance, RepairRound, SystemParams};
pub use tradeoff::{Scheme, TradeoffPoint};
