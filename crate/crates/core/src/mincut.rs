//! Exact max-flow / min-cut on flow graphs, and storage capacity as the
//! minimum over collectors and schedules.

use std::cmp::Ordering;
use std::collections::VecDeque;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::bound;
use crate::error::{Error, Result};
use crate::flowgraph::{build_graph, Cut, EdgeKind, FlowGraph};
use crate::frac::{serde_q, Capacity, Q};
use crate::model::{
    enumerate_collector_representatives, enumerate_collectors, enumerate_instances,
    DataCollectorSpec, Instance, SystemParams,
};

#[derive(Debug, Clone)]
pub struct MinCutResult {
    pub value: Capacity,
    pub cut: Cut,
}

struct Arc {
    to: usize,
    cap: i128,
}

/// Dinic's algorithm over integer capacities.
struct Dinic {
    arcs: Vec<Arc>,
    adj: Vec<Vec<usize>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Dinic { arcs: Vec::new(), adj: vec![Vec::new(); n], level: vec![0; n], iter: vec![0; n] }
    }

    fn add(&mut self, from: usize, to: usize, cap: i128) {
        self.adj[from].push(self.arcs.len());
        self.arcs.push(Arc { to, cap });
        self.adj[to].push(self.arcs.len());
        self.arcs.push(Arc { to: from, cap: 0 });
    }

    fn bfs(&mut self, s: usize) {
        self.level.fill(-1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &a in &self.adj[v] {
                let Arc { to, cap } = self.arcs[a];
                if cap > 0 && self.level[to] < 0 {
                    self.level[to] = self.level[v] + 1;
                    queue.push_back(to);
                }
            }
        }
    }

    fn dfs(&mut self, v: usize, t: usize, limit: i128) -> i128 {
        if v == t {
            return limit;
        }
        while self.iter[v] < self.adj[v].len() {
            let a = self.adj[v][self.iter[v]];
            let Arc { to, cap } = self.arcs[a];
            if cap > 0 && self.level[v] < self.level[to] {
                let pushed = self.dfs(to, t, limit.min(cap));
                if pushed > 0 {
                    self.arcs[a].cap -= pushed;
                    self.arcs[a ^ 1].cap += pushed;
                    return pushed;
                }
            }
            self.iter[v] += 1;
        }
        0
    }

    fn run(&mut self, s: usize, t: usize) -> i128 {
        let mut flow = 0;
        loop {
            self.bfs(s);
            if self.level[t] < 0 {
                return flow;
            }
            self.iter.fill(0);
            loop {
                let f = self.dfs(s, t, i128::MAX);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
    }

    /// Vertices reachable from `s` in the residual graph.
    fn reachable(&mut self, s: usize) -> Vec<bool> {
        self.bfs(s);
        self.level.iter().map(|&l| l >= 0).collect()
    }
}

/// Exact minimum S-collector cut.
///
/// α and β are scaled by the lcm of their denominators so the flow runs on
/// integers; the infinity sentinel becomes one more than the sum of all
/// finite capacities. The witness cut is the residual-reachable set of S.
pub fn max_flow_min_cut(g: &FlowGraph) -> MinCutResult {
    let (alpha, beta) = (g.alpha(), g.beta());
    let scale = alpha.denom().lcm(beta.denom());
    let a = (alpha * scale).to_integer();
    let b = (beta * scale).to_integer();
    let finite_total: i128 = g
        .edges()
        .iter()
        .map(|e| match e.kind {
            EdgeKind::Alpha => a,
            EdgeKind::Beta => b,
            EdgeKind::Infinite => 0,
        })
        .sum();
    let inf = finite_total + 1;
    let mut net = Dinic::new(g.vertex_count());
    for e in g.edges() {
        let cap = match e.kind {
            EdgeKind::Alpha => a,
            EdgeKind::Beta => b,
            EdgeKind::Infinite => inf,
        };
        net.add(e.from, e.to, cap);
    }
    let flow = net.run(g.source(), g.sink());
    let side = net.reachable(g.source());
    let cut = Cut::new(g, side).expect("sink unreachable after max flow");
    let value =
        if flow >= inf { Capacity::Infinite } else { Capacity::Finite(Q::new(flow, scale)) };
    MinCutResult { value, cut }
}

/// Which collectors to examine for one schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CollectorScope {
    /// Every `(s, K)`.
    #[default]
    All,
    /// One collector per symmetry class of member nodes.
    Representatives,
}

/// `C'(I)` or `C_storage` with the collector (and schedule) attaining it.
#[derive(Debug, Clone, Serialize)]
pub struct CapacityReport {
    #[serde(with = "serde_q")]
    pub value: Q,
    pub witness_cut: Vec<String>,
    pub witness_collector: DataCollectorSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_instance: Option<Instance>,
    pub truncated: bool,
    pub instances_examined: usize,
    pub collectors_examined: usize,
}

struct Candidate {
    value: Q,
    collector: DataCollectorSpec,
    cut: Vec<String>,
}

fn better(a: &Candidate, b: &Candidate) -> Ordering {
    a.value.cmp(&b.value).then_with(|| a.collector.cmp(&b.collector))
}

/// `C'(I)`: min over collectors of the min-cut.
pub fn instance_capacity(inst: &Instance) -> Result<CapacityReport> {
    instance_capacity_with(inst, CollectorScope::All)
}

pub fn instance_capacity_with(inst: &Instance, scope: CollectorScope) -> Result<CapacityReport> {
    inst.validate()?;
    let collectors: Vec<DataCollectorSpec> = match scope {
        CollectorScope::All => enumerate_collectors(inst).collect(),
        CollectorScope::Representatives => enumerate_collector_representatives(inst),
    };
    let examined = collectors.len();
    let best = collectors
        .into_par_iter()
        .map(|dc| -> Result<Candidate> {
            let g = build_graph(inst, &dc)?;
            let res = max_flow_min_cut(&g);
            let value = res.value.finite().ok_or_else(|| {
                Error::Infeasible(format!("collector {dc} has an infinite min-cut"))
            })?;
            Ok(Candidate { value, cut: res.cut.source_side_labels(&g), collector: dc })
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min_by(better)
        .expect("at least one collector");
    Ok(CapacityReport {
        value: best.value,
        witness_cut: best.cut,
        witness_collector: best.collector,
        witness_instance: None,
        truncated: false,
        instances_examined: 1,
        collectors_examined: examined,
    })
}

/// Which schedules `storage_capacity` minimizes over.
#[derive(Debug, Clone)]
pub enum Scope {
    /// The enumerated schedule stream, optionally canonical and/or limited.
    Enumerate { canonical: bool, limit: Option<usize>, collectors: CollectorScope },
    /// Only the tightness construction for the bound's optimal profile.
    Adversarial,
    /// An explicit list.
    Instances(Vec<Instance>),
}

impl Default for Scope {
    fn default() -> Self {
        Scope::Enumerate { canonical: false, limit: None, collectors: CollectorScope::All }
    }
}

/// `C_storage`: min of `C'(I)` over the schedules in `scope`.
pub fn storage_capacity(p: &SystemParams, scope: &Scope) -> Result<CapacityReport> {
    p.check()?;
    let (instances, truncated, collectors) = match scope {
        Scope::Enumerate { canonical, limit, collectors } => {
            let mut stream = enumerate_instances(p, *limit, *canonical);
            let v: Vec<Instance> = stream.by_ref().collect();
            (v, stream.truncated(), *collectors)
        }
        Scope::Adversarial => {
            let bound = bound::c_lb(p)?;
            let adv = bound::adversarial_instance(p, &bound.argmin)?;
            (vec![adv.instance], false, CollectorScope::All)
        }
        Scope::Instances(v) => (v.clone(), false, CollectorScope::All),
    };
    if instances.is_empty() {
        return Err(Error::Precondition("empty instance scope".into()));
    }
    let count = instances.len();
    let reports = instances
        .into_par_iter()
        .map(|inst| {
            let mut rep = instance_capacity_with(&inst, collectors)?;
            rep.witness_instance = Some(inst);
            Ok(rep)
        })
        .collect::<Result<Vec<_>>>()?;
    let collectors_examined = reports.iter().map(|r| r.collectors_examined).sum();
    // first minimum in stream order
    let mut best = reports
        .into_iter()
        .reduce(|a, b| if b.value < a.value { b } else { a })
        .expect("nonempty");
    best.truncated = truncated;
    best.instances_examined = count;
    best.collectors_examined = collectors_examined;
    Ok(best)
}
