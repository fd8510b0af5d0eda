//! The worked examples: the two-round schedule with its two named cuts, and
//! the parameters of the tradeoff comparison.

use crate::flowgraph::{Cut, FlowGraph, Vertex};
use crate::frac::Q;
use crate::model::{DataCollectorSpec, Instance, RepairRound, SystemParams};

/// n=8, k=3, d=4, r=2, T=2; nodes 5, 6 fail and are repaired by 1..4, then
/// nodes 8, 10 fail and are repaired by 3, 4, 7, 9.
pub fn figure1_instance(alpha: Q, beta: Q) -> Instance {
    let params = SystemParams::new(8, 3, 4, 2, alpha, beta, 2);
    Instance {
        params,
        rounds: vec![
            RepairRound { s: 1, failed: vec![5, 6], newcomers: vec![9, 10], helpers: vec![1, 2, 3, 4] },
            RepairRound { s: 2, failed: vec![8, 10], newcomers: vec![11, 12], helpers: vec![3, 4, 7, 9] },
        ],
    }
}

pub fn figure1_collector() -> DataCollectorSpec {
    DataCollectorSpec::new(2, vec![9, 11, 12])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureCut {
    /// Only S and the initial nodes on the source side: 7β.
    Line1,
    /// Additionally round-1 broadcast vertices, in:9, in:10 and out:10: α + 3β.
    Line2,
}

pub fn figure1_cut(g: &FlowGraph, which: FigureCut) -> Cut {
    Cut::from_predicate(g, |v| match (which, *v) {
        (_, Vertex::Source) => true,
        (_, Vertex::In(j) | Vertex::Out(j)) if j <= 8 => true,
        (FigureCut::Line2, Vertex::Aux { round: 1, .. }) => true,
        (FigureCut::Line2, Vertex::In(9) | Vertex::In(10) | Vertex::Out(10)) => true,
        _ => false,
    })
}

/// k=4, d=9, r=2 with file size 1.
pub const FIG4_K: usize = 4;
pub const FIG4_D: usize = 9;
pub const FIG4_R: usize = 2;

/// The tradeoff parameters with enough initial nodes and rounds for the
/// bound to reach its truncated horizon `k + r`.
pub fn figure4_params() -> SystemParams {
    SystemParams::new(15, FIG4_K, FIG4_D, FIG4_R, Q::from_integer(1), Q::from_integer(1), FIG4_K + FIG4_R)
}
