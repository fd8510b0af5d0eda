//! Information flow graph of a repair schedule.
//!
//! Every storage node `j` becomes `in:j -> out:j` with capacity α. A helper
//! `i` in round `s` feeds one broadcast vertex `aux:i:s` through a β edge, and
//! that vertex fans out with infinite capacity to every newcomer of the
//! round, so one transmission reaches all `r` newcomers.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::frac::{Capacity, LinearForm, Q};
use crate::model::{DataCollectorSpec, Instance, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    Source,
    In(NodeId),
    Out(NodeId),
    Aux { helper: NodeId, round: usize },
    Collector,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Alpha,
    Beta,
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CapEdge {
    pub from: usize,
    pub to: usize,
    pub kind: EdgeKind,
}

#[derive(Debug, Clone)]
pub struct FlowGraph {
    vertices: Vec<Vertex>,
    index: HashMap<Vertex, usize>,
    /// Round each vertex belongs to; `None` for the source and the collector.
    rounds: Vec<Option<usize>>,
    edges: Vec<CapEdge>,
    alpha: Q,
    beta: Q,
    collector: DataCollectorSpec,
    horizon: usize,
}

struct Builder {
    g: FlowGraph,
}

impl Builder {
    fn vertex(&mut self, v: Vertex, round: Option<usize>) -> usize {
        let id = self.g.vertices.len();
        self.g.vertices.push(v);
        self.g.rounds.push(round);
        self.g.index.insert(v, id);
        id
    }

    fn edge(&mut self, from: Vertex, to: Vertex, kind: EdgeKind) {
        let from = self.g.index[&from];
        let to = self.g.index[&to];
        self.g.edges.push(CapEdge { from, to, kind });
    }
}

/// Builds the flow graph of `inst` terminated at collector `dc`.
///
/// All `T` rounds are included even when `dc` arrives earlier; later rounds
/// have no path to the collector and do not affect any cut minimum.
pub fn build_graph(inst: &Instance, dc: &DataCollectorSpec) -> Result<FlowGraph> {
    dc.check(inst)?;
    let p = &inst.params;
    let mut b = Builder {
        g: FlowGraph {
            vertices: Vec::new(),
            index: HashMap::new(),
            rounds: Vec::new(),
            edges: Vec::new(),
            alpha: p.alpha,
            beta: p.beta,
            collector: dc.clone(),
            horizon: inst.horizon(),
        },
    };
    b.vertex(Vertex::Source, None);
    for j in 1..=p.n {
        b.vertex(Vertex::In(j), Some(0));
        b.vertex(Vertex::Out(j), Some(0));
    }
    for round in &inst.rounds {
        for &h in &round.helpers {
            b.vertex(Vertex::Aux { helper: h, round: round.s }, Some(round.s));
        }
        for &j in &round.newcomers {
            b.vertex(Vertex::In(j), Some(round.s));
            b.vertex(Vertex::Out(j), Some(round.s));
        }
    }
    b.vertex(Vertex::Collector, None);

    for j in 1..=p.n {
        b.edge(Vertex::Source, Vertex::In(j), EdgeKind::Infinite);
        b.edge(Vertex::In(j), Vertex::Out(j), EdgeKind::Alpha);
    }
    for round in &inst.rounds {
        for &h in &round.helpers {
            let aux = Vertex::Aux { helper: h, round: round.s };
            b.edge(Vertex::Out(h), aux, EdgeKind::Beta);
            for &j in &round.newcomers {
                b.edge(aux, Vertex::In(j), EdgeKind::Infinite);
            }
        }
        for &j in &round.newcomers {
            b.edge(Vertex::In(j), Vertex::Out(j), EdgeKind::Alpha);
        }
    }
    for &m in &dc.members {
        b.edge(Vertex::Out(m), Vertex::Collector, EdgeKind::Infinite);
    }
    Ok(b.g)
}

impl FlowGraph {
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[CapEdge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn source(&self) -> usize {
        0
    }

    pub fn sink(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn alpha(&self) -> Q {
        self.alpha
    }

    pub fn beta(&self) -> Q {
        self.beta
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn collector(&self) -> &DataCollectorSpec {
        &self.collector
    }

    pub fn index_of(&self, v: &Vertex) -> Option<usize> {
        self.index.get(v).copied()
    }

    /// Round of vertex `v`: 0 for initial nodes, `s` for round-`s` vertices.
    pub fn round_of(&self, v: usize) -> Option<usize> {
        self.rounds[v]
    }

    /// Same structure with different α, β.
    pub fn with_capacities(&self, alpha: Q, beta: Q) -> FlowGraph {
        FlowGraph { alpha, beta, ..self.clone() }
    }

    pub fn capacity(&self, e: &CapEdge) -> Capacity {
        match e.kind {
            EdgeKind::Alpha => Capacity::Finite(self.alpha),
            EdgeKind::Beta => Capacity::Finite(self.beta),
            EdgeKind::Infinite => Capacity::Infinite,
        }
    }

    pub fn label(&self, v: usize) -> String {
        match self.vertices[v] {
            Vertex::Source => "S".into(),
            Vertex::In(j) => format!("in:{j}"),
            Vertex::Out(j) => format!("out:{j}"),
            Vertex::Aux { helper, round } => format!("aux:{helper}:{round}"),
            Vertex::Collector => self.collector.label(),
        }
    }

    /// One edge per line: `from to capacity`.
    pub fn to_edge_list(&self) -> String {
        self.edges
            .iter()
            .map(|e| format!("{} {} {}\n", self.label(e.from), self.label(e.to), self.capacity(e)))
            .collect()
    }

    /// Kahn's algorithm; `None` if the graph has a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.vertices.len();
        let mut indeg = vec![0usize; n];
        let mut adj = vec![Vec::new(); n];
        for e in &self.edges {
            indeg[e.to] += 1;
            adj[e.from].push(e.to);
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &adj[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        (order.len() == n).then_some(order)
    }
}

/// An S-DC cut: `side[v]` is true for vertices on the source side `X`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cut {
    side: Vec<bool>,
}

impl Cut {
    pub fn new(g: &FlowGraph, side: Vec<bool>) -> Result<Cut> {
        if side.len() != g.vertex_count() {
            return Err(Error::Precondition("cut size does not match graph".into()));
        }
        if !side[g.source()] || side[g.sink()] {
            return Err(Error::Precondition("cut must contain S and exclude the collector".into()));
        }
        Ok(Cut { side })
    }

    /// `X` is the set of vertices satisfying `in_x`; S and the sink are forced.
    pub fn from_predicate(g: &FlowGraph, mut in_x: impl FnMut(&Vertex) -> bool) -> Cut {
        let mut side: Vec<bool> = g.vertices.iter().map(&mut in_x).collect();
        side[g.source()] = true;
        let sink = g.sink();
        side[sink] = false;
        Cut { side }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.side[v]
    }

    pub fn side(&self) -> &[bool] {
        &self.side
    }

    pub fn set(&mut self, v: usize, in_x: bool) {
        self.side[v] = in_x;
    }

    pub fn source_side_labels(&self, g: &FlowGraph) -> Vec<String> {
        (0..g.vertex_count()).filter(|&v| self.side[v]).map(|v| g.label(v)).collect()
    }

    pub fn sink_side_labels(&self, g: &FlowGraph) -> Vec<String> {
        (0..g.vertex_count()).filter(|&v| !self.side[v]).map(|v| g.label(v)).collect()
    }
}

fn crossing<'a>(g: &'a FlowGraph, c: &'a Cut) -> impl Iterator<Item = &'a CapEdge> + 'a {
    g.edges.iter().filter(|e| c.side[e.from] && !c.side[e.to])
}

/// Total capacity of the edges leaving `X`.
pub fn cut_capacity(g: &FlowGraph, c: &Cut) -> Capacity {
    crossing(g, c).map(|e| g.capacity(e)).sum()
}

/// The cut capacity as `a·α + b·β`, or `None` if an infinite edge is cut.
pub fn cut_form(g: &FlowGraph, c: &Cut) -> Option<LinearForm> {
    crossing(g, c).try_fold(LinearForm::default(), |acc, e| match e.kind {
        EdgeKind::Alpha => Some(acc + LinearForm::new(1, 0)),
        EdgeKind::Beta => Some(acc + LinearForm::new(0, 1)),
        EdgeKind::Infinite => None,
    })
}

/// Capacity of the cut edges whose head lies in the round-`s` vertex set.
pub fn round_contribution(g: &FlowGraph, c: &Cut, s: usize) -> Result<Capacity> {
    if s > g.horizon {
        return Err(Error::RoundOutOfRange { s, horizon: g.horizon });
    }
    Ok(crossing(g, c).filter(|e| g.rounds[e.to] == Some(s)).map(|e| g.capacity(e)).sum())
}

/// Per-round contributions plus the collector in-edges, which belong to no round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contributions {
    pub rounds: Vec<Capacity>,
    pub collector: Capacity,
}

impl Contributions {
    pub fn total(&self) -> Capacity {
        self.rounds.iter().copied().sum::<Capacity>() + self.collector
    }
}

impl fmt::Display for Contributions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + collector {}", self.rounds.iter().join(", "), self.collector)
    }
}

pub fn contributions(g: &FlowGraph, c: &Cut) -> Contributions {
    let mut rounds = vec![Capacity::default(); g.horizon + 1];
    let mut collector = Capacity::default();
    for e in crossing(g, c) {
        match g.rounds[e.to] {
            Some(s) => rounds[s] = rounds[s] + g.capacity(e),
            None => collector = collector + g.capacity(e),
        }
    }
    Contributions { rounds, collector }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::figures::{figure1_collector, figure1_cut, figure1_instance, FigureCut};
    use crate::frac::{q, qi};
    use crate::model::{enumerate_collectors, SystemParams};

    fn fig_graph(alpha: Q, beta: Q) -> FlowGraph {
        let inst = figure1_instance(alpha, beta);
        build_graph(&inst, &figure1_collector()).unwrap()
    }

    #[test]
    fn figure1_counts_and_shape() {
        let g = fig_graph(qi(1), qi(1));
        assert_eq!(g.vertex_count(), 34);
        // n + (n + rT) + dT + dT·r + k
        assert_eq!(g.edges().len(), 8 + 12 + 8 + 16 + 3);
        let aux = g.index_of(&Vertex::Aux { helper: 3, round: 1 }).unwrap();
        let mut heads: Vec<_> =
            g.edges().iter().filter(|e| e.from == aux).map(|e| g.vertices()[e.to]).collect();
        heads.sort();
        assert_eq!(heads, vec![Vertex::In(9), Vertex::In(10)]);
        assert!(g.topological_order().is_some());
    }

    #[test]
    fn zero_round_graph() {
        let p = SystemParams::new(5, 2, 3, 1, qi(1), qi(1), 0);
        let inst = Instance { params: p, rounds: vec![] };
        let dc = DataCollectorSpec::new(0, vec![1, 4]);
        let g = build_graph(&inst, &dc).unwrap();
        assert!(!g.vertices().iter().any(|v| matches!(v, Vertex::Aux { .. })));
        let count = |k: EdgeKind| g.edges().iter().filter(|e| e.kind == k).count();
        assert_eq!(count(EdgeKind::Infinite), 5 + 2);
        assert_eq!(count(EdgeKind::Alpha), 5);
        assert_eq!(count(EdgeKind::Beta), 0);
    }

    #[test]
    fn figure1_named_cuts() {
        let (alpha, beta) = (q(3, 7), q(2, 5));
        let g = fig_graph(alpha, beta);
        let line1 = figure1_cut(&g, FigureCut::Line1);
        let line2 = figure1_cut(&g, FigureCut::Line2);
        assert_eq!(cut_form(&g, &line1), Some(LinearForm::new(0, 7)));
        assert_eq!(cut_form(&g, &line2), Some(LinearForm::new(1, 3)));
        assert_eq!(cut_capacity(&g, &line1), Capacity::Finite(beta * qi(7)));
        assert_eq!(cut_capacity(&g, &line2), Capacity::Finite(alpha + beta * qi(3)));

        let parts: Vec<_> = (0..=2).map(|s| round_contribution(&g, &line2, s).unwrap()).collect();
        assert_eq!(
            parts,
            vec![Capacity::Finite(qi(0)), Capacity::Finite(alpha), Capacity::Finite(beta * qi(3))]
        );
        let c1 = contributions(&g, &line1);
        assert_eq!(c1.total(), Capacity::Finite(beta * qi(7)));
        assert_eq!(c1.collector, Capacity::Finite(qi(0)));
        assert!(round_contribution(&g, &line1, 3).is_err());
    }

    #[test]
    fn trivial_cuts() {
        let g = fig_graph(qi(1), qi(1));
        let only_source = Cut::from_predicate(&g, |_| false);
        assert_eq!(cut_capacity(&g, &only_source), Capacity::Infinite);
        let all = Cut::from_predicate(&g, |_| true);
        let parts = contributions(&g, &all);
        assert_eq!(parts.collector, Capacity::Infinite);
        assert!(parts.rounds.iter().all(|c| *c == Capacity::Finite(qi(0))));
    }

    #[test]
    fn edge_list_labels() {
        let g = fig_graph(qi(1), q(1, 4));
        let text = g.to_edge_list();
        assert!(text.contains("S in:1 inf\n"));
        assert!(text.contains("out:9 aux:9:2 1/4\n"));
        assert!(text.contains("aux:9:2 in:12 inf\n"));
        assert!(text.contains("out:12 dc:2:9,11,12 inf\n"));
        assert_eq!(text.lines().count(), g.edges().len());
    }

    #[test]
    fn counts_hold_for_every_collector() {
        let inst = figure1_instance(qi(1), qi(1));
        for dc in enumerate_collectors(&inst) {
            let g = build_graph(&inst, &dc).unwrap();
            assert_eq!(g.vertex_count(), 1 + 2 * (8 + 4) + 8 + 1);
            assert_eq!(g.edges().len(), 8 + 12 + 8 + 16 + 3);
        }
        assert!(build_graph(&inst, &DataCollectorSpec::new(2, vec![5, 9, 11])).is_err());
    }
}
