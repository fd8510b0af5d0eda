//! System parameters, repair schedules and data collectors.
//!
//! Node ids start at 1. The initial nodes are `1..=n`; the newcomers of
//! round `s` are `n+(s-1)r+1 ..= n+sr`. Ids are never reused.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use rand::seq::IteratorRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frac::{serde_q, Q};

pub type NodeId = usize;

/// The tuple `(n, k, d, r, α, β, T)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SystemParams {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub r: usize,
    #[serde(with = "serde_q")]
    pub alpha: Q,
    #[serde(with = "serde_q")]
    pub beta: Q,
    #[serde(rename = "T")]
    pub t: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Violation {
    NonPositive(&'static str),
    HelpersBelowK { d: usize, k: usize },
    BatchTooLarge { r: usize, n: usize, d: usize },
    KExceedsN { k: usize, n: usize },
    NegativeAlpha,
    NegativeBeta,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonPositive(name) => write!(f, "{name} must be positive"),
            Violation::HelpersBelowK { d, k } => write!(f, "d >= k required (d={d}, k={k})"),
            Violation::BatchTooLarge { r, n, d } => {
                write!(f, "r <= n - d required (r={r}, n={n}, d={d})")
            }
            Violation::KExceedsN { k, n } => write!(f, "k <= n required (k={k}, n={n})"),
            Violation::NegativeAlpha => f.write_str("alpha must be nonnegative"),
            Violation::NegativeBeta => f.write_str("beta must be nonnegative"),
        }
    }
}

impl SystemParams {
    pub fn new(n: usize, k: usize, d: usize, r: usize, alpha: Q, beta: Q, t: usize) -> Self {
        SystemParams { n, k, d, r, alpha, beta, t }
    }

    /// Every violated invariant; empty means the parameters are valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (name, v) in [("n", self.n), ("k", self.k), ("d", self.d), ("r", self.r)] {
            if v == 0 {
                out.push(Violation::NonPositive(name));
            }
        }
        if self.d < self.k {
            out.push(Violation::HelpersBelowK { d: self.d, k: self.k });
        }
        if self.d > self.n || self.r > self.n - self.d {
            out.push(Violation::BatchTooLarge { r: self.r, n: self.n, d: self.d });
        }
        if self.k > self.n {
            out.push(Violation::KExceedsN { k: self.k, n: self.n });
        }
        if self.alpha < Q::from_integer(0) {
            out.push(Violation::NegativeAlpha);
        }
        if self.beta < Q::from_integer(0) {
            out.push(Violation::NegativeBeta);
        }
        out
    }

    pub fn check(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParams(v))
        }
    }

    pub fn with_capacities(&self, alpha: Q, beta: Q) -> Self {
        SystemParams { alpha, beta, ..self.clone() }
    }

    pub fn with_rounds(&self, t: usize) -> Self {
        SystemParams { t, ..self.clone() }
    }

    /// Newcomer ids of round `s` (1-based).
    pub fn newcomers(&self, s: usize) -> Vec<NodeId> {
        let first = self.n + (s - 1) * self.r + 1;
        (first..first + self.r).collect()
    }

    /// Round in which node `id` joined; 0 for the initial nodes.
    pub fn birth_round(&self, id: NodeId) -> usize {
        if id <= self.n {
            0
        } else {
            (id - self.n - 1) / self.r + 1
        }
    }

    pub fn total_nodes(&self) -> usize {
        self.n + self.r * self.t
    }
}

/// One repair round: the failure batch that triggered it, the newcomers and the helpers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RepairRound {
    pub s: usize,
    pub failed: Vec<NodeId>,
    pub newcomers: Vec<NodeId>,
    pub helpers: Vec<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Instance {
    pub params: SystemParams,
    pub rounds: Vec<RepairRound>,
}

impl Instance {
    /// Builds and validates an instance from per-round `(failed, helpers)` pairs.
    pub fn from_schedule(
        params: SystemParams,
        schedule: impl IntoIterator<Item = (Vec<NodeId>, Vec<NodeId>)>,
    ) -> Result<Self> {
        let rounds = schedule
            .into_iter()
            .enumerate()
            .map(|(i, (mut failed, mut helpers))| {
                failed.sort_unstable();
                helpers.sort_unstable();
                RepairRound { s: i + 1, failed, newcomers: params.newcomers(i + 1), helpers }
            })
            .collect();
        let inst = Instance { params, rounds };
        inst.validate()?;
        Ok(inst)
    }

    pub fn horizon(&self) -> usize {
        self.rounds.len()
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.params;
        p.check()?;
        if self.rounds.len() != p.t {
            return Err(Error::InvalidInstance(format!(
                "expected {} rounds, found {}",
                p.t,
                self.rounds.len()
            )));
        }
        let mut active: BTreeSet<NodeId> = (1..=p.n).collect();
        let mut dead = BTreeSet::new();
        for (i, round) in self.rounds.iter().enumerate() {
            let s = i + 1;
            let bad = |msg: String| Err(Error::InvalidInstance(format!("round {s}: {msg}")));
            if round.s != s {
                return bad(format!("index {} out of order", round.s));
            }
            let failed: BTreeSet<_> = round.failed.iter().copied().collect();
            let helpers: BTreeSet<_> = round.helpers.iter().copied().collect();
            if failed.len() != p.r || round.failed.len() != p.r {
                return bad(format!("expected {} distinct failed nodes", p.r));
            }
            if helpers.len() != p.d || round.helpers.len() != p.d {
                return bad(format!("expected {} distinct helpers", p.d));
            }
            if round.newcomers != p.newcomers(s) {
                return bad(format!("newcomers must be {:?}", p.newcomers(s)));
            }
            if let Some(f) = failed.iter().find(|f| !active.contains(f)) {
                return bad(format!("failed node {f} is not active"));
            }
            for f in &failed {
                active.remove(f);
                dead.insert(*f);
            }
            if let Some(h) = helpers.iter().find(|h| !active.contains(h)) {
                return bad(format!("helper {h} is not active"));
            }
            if let Some(j) = round.newcomers.iter().find(|j| dead.contains(j) || active.contains(j)) {
                return bad(format!("newcomer id {j} reused"));
            }
            active.extend(round.newcomers.iter().copied());
        }
        Ok(())
    }

    /// Node ids alive after round `s` (`s = 0` is the initial placement).
    pub fn active_nodes(&self, s: usize) -> Result<Vec<NodeId>> {
        if s > self.horizon() {
            return Err(Error::RoundOutOfRange { s, horizon: self.horizon() });
        }
        let mut active: BTreeSet<NodeId> = (1..=self.params.n).collect();
        for round in &self.rounds[..s] {
            for f in &round.failed {
                active.remove(f);
            }
            active.extend(round.newcomers.iter().copied());
        }
        Ok(active.into_iter().collect())
    }

    /// Rounds in which each node acted as a helper.
    pub fn helped_rounds(&self) -> BTreeMap<NodeId, Vec<usize>> {
        let mut out: BTreeMap<NodeId, Vec<usize>> = BTreeMap::new();
        for round in &self.rounds {
            for h in &round.helpers {
                out.entry(*h).or_default().push(round.s);
            }
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let inst: Instance = serde_json::from_str(text)?;
        inst.validate()?;
        Ok(inst)
    }
}

/// `DC_{s,K}`: a collector joining after round `s` and reading from the nodes in `members`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DataCollectorSpec {
    pub s: usize,
    pub members: Vec<NodeId>,
}

impl DataCollectorSpec {
    pub fn new(s: usize, mut members: Vec<NodeId>) -> Self {
        members.sort_unstable();
        DataCollectorSpec { s, members }
    }

    pub fn label(&self) -> String {
        format!("dc:{}:{}", self.s, self.members.iter().join(","))
    }

    pub fn check(&self, inst: &Instance) -> Result<()> {
        let active = inst.active_nodes(self.s)?;
        let distinct: BTreeSet<_> = self.members.iter().collect();
        if self.members.len() != inst.params.k || distinct.len() != self.members.len() {
            return Err(Error::IllegitimateCollector(format!(
                "{} must name {} distinct nodes",
                self.label(),
                inst.params.k
            )));
        }
        if let Some(m) = self.members.iter().find(|m| active.binary_search(m).is_err()) {
            return Err(Error::IllegitimateCollector(format!(
                "{}: node {m} is not active after round {}",
                self.label(),
                self.s
            )));
        }
        Ok(())
    }
}

impl fmt::Display for DataCollectorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Parses `dc:s:a,b,c` or `s:a,b,c`.
impl std::str::FromStr for DataCollectorSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::Precondition(format!("cannot parse collector {text:?}; expected s:a,b,c"));
        let body = text.trim().strip_prefix("dc:").unwrap_or(text.trim());
        let (s, members) = body.split_once(':').ok_or_else(bad)?;
        let s = s.trim().parse().map_err(|_| bad())?;
        let members = members
            .split(',')
            .map(|m| m.trim().parse::<NodeId>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| bad())?;
        Ok(DataCollectorSpec::new(s, members))
    }
}

/// Every collector `(s, K)` with `s ∈ 0..=T` and `K` a k-subset of the active nodes.
pub fn enumerate_collectors(inst: &Instance) -> impl Iterator<Item = DataCollectorSpec> + '_ {
    (0..=inst.horizon()).flat_map(move |s| {
        let active = inst.active_nodes(s).expect("s within horizon");
        active
            .into_iter()
            .combinations(inst.params.k)
            .map(move |members| DataCollectorSpec { s, members })
    })
}

/// One collector per symmetry class.
///
/// Two active nodes that joined in the same round and helped in exactly the
/// same rounds are exchanged by a graph automorphism, so only the number of
/// members taken from each such class matters. Within a class the
/// lowest-index nodes are used.
pub fn enumerate_collector_representatives(inst: &Instance) -> Vec<DataCollectorSpec> {
    let helped = inst.helped_rounds();
    let mut out = Vec::new();
    for s in 0..=inst.horizon() {
        let active = inst.active_nodes(s).expect("s within horizon");
        let classes = node_classes(&inst.params, &active, &helped);
        for counts in compositions(inst.params.k, &classes.iter().map(Vec::len).collect_vec()) {
            let members = take_lowest(&classes, &counts);
            out.push(DataCollectorSpec::new(s, members));
        }
    }
    out
}

/// Groups nodes by (birth round, helped rounds); each group sorted by id.
fn node_classes(
    p: &SystemParams,
    nodes: &[NodeId],
    helped: &BTreeMap<NodeId, Vec<usize>>,
) -> Vec<Vec<NodeId>> {
    let mut classes: BTreeMap<(usize, Vec<usize>), Vec<NodeId>> = BTreeMap::new();
    for &id in nodes {
        let key = (p.birth_round(id), helped.get(&id).cloned().unwrap_or_default());
        classes.entry(key).or_default().push(id);
    }
    classes.into_values().collect()
}

fn take_lowest(classes: &[Vec<NodeId>], counts: &[usize]) -> Vec<NodeId> {
    let mut v: Vec<NodeId> =
        classes.iter().zip(counts).flat_map(|(c, &m)| c[..m].iter().copied()).collect();
    v.sort_unstable();
    v
}

/// All ways to write `total` as a sum with `i`-th part at most `caps[i]`.
fn compositions(total: usize, caps: &[usize]) -> Vec<Vec<usize>> {
    fn go(rest: usize, caps: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if caps.is_empty() {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let remaining_cap: usize = caps[1..].iter().sum();
        let lo = rest.saturating_sub(remaining_cap);
        for take in lo..=rest.min(caps[0]) {
            cur.push(take);
            go(rest - take, &caps[1..], cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(total, caps, &mut Vec::new(), &mut out);
    out
}

/// Lazily enumerates repair schedules by depth-first search over rounds.
///
/// With `canonical` set, failures and helpers are chosen per symmetry class
/// of nodes (same birth round, same helped rounds), lowest index first. Every
/// schedule is isomorphic to at least one canonical schedule, so minima over
/// the canonical stream equal minima over the full stream.
pub struct InstanceStream {
    params: SystemParams,
    canonical: bool,
    limit: Option<usize>,
    emitted: usize,
    truncated: bool,
    started: bool,
    path: Vec<RepairRound>,
    stack: Vec<(Vec<RepairRound>, usize)>,
}

pub fn enumerate_instances(p: &SystemParams, limit: Option<usize>, canonical: bool) -> InstanceStream {
    InstanceStream {
        params: p.clone(),
        canonical,
        limit,
        emitted: 0,
        truncated: false,
        started: false,
        path: Vec::new(),
        stack: Vec::new(),
    }
}

impl InstanceStream {
    /// Whether the stream stopped at `limit` with schedules left over.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    fn choices(&self) -> Vec<RepairRound> {
        let p = &self.params;
        let s = self.path.len() + 1;
        let active = active_after(p, &self.path);
        let newcomers = p.newcomers(s);
        let mut out = Vec::new();
        if self.canonical {
            let mut helped: BTreeMap<NodeId, Vec<usize>> = BTreeMap::new();
            for round in &self.path {
                for h in &round.helpers {
                    helped.entry(*h).or_default().push(round.s);
                }
            }
            let classes = node_classes(p, &active, &helped);
            let sizes = classes.iter().map(Vec::len).collect_vec();
            for fail_counts in compositions(p.r, &sizes) {
                let failed = take_lowest(&classes, &fail_counts);
                let remaining: Vec<Vec<NodeId>> = classes
                    .iter()
                    .zip(&fail_counts)
                    .map(|(c, &m)| c[m..].to_vec())
                    .collect();
                let rem_sizes = remaining.iter().map(Vec::len).collect_vec();
                for help_counts in compositions(p.d, &rem_sizes) {
                    out.push(RepairRound {
                        s,
                        failed: failed.clone(),
                        newcomers: newcomers.clone(),
                        helpers: take_lowest(&remaining, &help_counts),
                    });
                }
            }
        } else {
            for failed in active.iter().copied().combinations(p.r) {
                let rest = active.iter().copied().filter(|a| !failed.contains(a)).collect_vec();
                for helpers in rest.into_iter().combinations(p.d) {
                    out.push(RepairRound {
                        s,
                        failed: failed.clone(),
                        newcomers: newcomers.clone(),
                        helpers,
                    });
                }
            }
        }
        out
    }

    fn next_raw(&mut self) -> Option<Instance> {
        let t = self.params.t;
        if !self.started {
            self.started = true;
            if t == 0 {
                return Some(Instance { params: self.params.clone(), rounds: Vec::new() });
            }
            let first = self.choices();
            self.stack.push((first, 0));
        }
        while let Some((choices, next)) = self.stack.last_mut() {
            if *next == choices.len() {
                self.stack.pop();
                self.path.pop();
                continue;
            }
            let round = choices[*next].clone();
            *next += 1;
            self.path.push(round);
            if self.path.len() == t {
                let inst = Instance { params: self.params.clone(), rounds: self.path.clone() };
                self.path.pop();
                return Some(inst);
            }
            let frame = self.choices();
            self.stack.push((frame, 0));
        }
        None
    }
}

impl Iterator for InstanceStream {
    type Item = Instance;

    fn next(&mut self) -> Option<Instance> {
        if let Some(limit) = self.limit {
            if self.emitted >= limit {
                if !self.truncated && self.next_raw().is_some() {
                    self.truncated = true;
                }
                return None;
            }
        }
        let item = self.next_raw();
        if item.is_some() {
            self.emitted += 1;
        }
        item
    }
}

fn active_after(p: &SystemParams, rounds: &[RepairRound]) -> Vec<NodeId> {
    let mut active: BTreeSet<NodeId> = (1..=p.n).collect();
    for round in rounds {
        for f in &round.failed {
            active.remove(f);
        }
        active.extend(round.newcomers.iter().copied());
    }
    active.into_iter().collect()
}

/// A uniformly random schedule: each round fails `r` random active nodes and
/// picks `d` random helpers among the survivors.
pub fn random_instance<R: Rng + ?Sized>(p: &SystemParams, rng: &mut R) -> Result<Instance> {
    p.check()?;
    let mut rounds = Vec::with_capacity(p.t);
    for s in 1..=p.t {
        let active = active_after(p, &rounds);
        let mut failed = active.iter().copied().choose_multiple(rng, p.r);
        failed.sort_unstable();
        let rest = active.iter().copied().filter(|a| !failed.contains(a));
        let mut helpers = rest.choose_multiple(rng, p.d);
        helpers.sort_unstable();
        rounds.push(RepairRound { s, failed, newcomers: p.newcomers(s), helpers });
    }
    Ok(Instance { params: p.clone(), rounds })
}
