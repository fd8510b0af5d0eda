//! The closed-form lower bound on storage capacity, the schedule and cut
//! that make it tight, and the per-round case analysis of concrete cuts.
//!
//! A cut profile fixes, for the initial round, how many out-vertices sit on
//! the collector side (`x0`), and for every repair round either
//!
//! * a "storing" round in `T1`, whose broadcast vertices stay on the source
//!   side and which contributes `x_s·α` for `x_s <= r` newcomers cut off, or
//! * a "broadcast" round in `T2`, wholly on the collector side, which
//!   contributes `β` for every helper not already on the collector side.
//!
//! The running count `m*` of collector-side out-vertices is `x0`, `x_s` for
//! storing rounds and `r` for broadcast rounds. The bound is the minimum of
//!
//! ```text
//! x0·α + Σ_{s∈T1} x_s·α + Σ_{s∉T1} max(0, d - Σ_{i<s} m*_i)·β
//! ```
//!
//! over profiles with `k <= Σ m* <= k + r`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flowgraph::{build_graph, cut_capacity, round_contribution, Cut, FlowGraph, Vertex};
use crate::frac::{serde_q, Capacity, LinearForm, Q};
use crate::model::{DataCollectorSpec, Instance, NodeId, SystemParams};

/// One feasible point of the minimization.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CutProfile {
    /// Number of repair rounds the profile covers.
    pub horizon: usize,
    #[serde(rename = "T1")]
    pub t1: Vec<usize>,
    pub x0: usize,
    /// `x_s` for `s ∈ T1`.
    pub x: BTreeMap<usize, usize>,
}

impl CutProfile {
    pub fn is_storing(&self, s: usize) -> bool {
        self.x.contains_key(&s)
    }

    /// `m*_s`: `x0` for `s = 0`, `x_s` in `T1`, `r` otherwise.
    pub fn m_star(&self, s: usize, r: usize) -> usize {
        if s == 0 {
            self.x0
        } else {
            self.x.get(&s).copied().unwrap_or(r)
        }
    }

    pub fn t2(&self) -> Vec<usize> {
        (1..=self.horizon).filter(|s| !self.is_storing(*s)).collect()
    }

    pub fn total_m_star(&self, r: usize) -> usize {
        (0..=self.horizon).map(|s| self.m_star(s, r)).sum()
    }

    /// The objective as `a·α + b·β`.
    pub fn linear_form(&self, d: usize, r: usize) -> LinearForm {
        let mut form = LinearForm::new(self.x0 as u64, 0);
        let mut cum = self.x0;
        for s in 1..=self.horizon {
            match self.x.get(&s) {
                Some(&xs) => {
                    form.a += xs as u64;
                    cum += xs;
                }
                None => {
                    form.b += d.saturating_sub(cum) as u64;
                    cum += r;
                }
            }
        }
        form
    }

    /// Checks the box constraints on `x` and the window `k <= Σ m* <= k + r`.
    pub fn check(&self, p: &SystemParams) -> Result<()> {
        let bad = |m: String| Err(Error::Precondition(format!("infeasible profile: {m}")));
        if self.x0 > p.n {
            return bad(format!("x0 = {} exceeds n", self.x0));
        }
        if let Some((s, v)) = self.x.iter().find(|(s, v)| **v > p.r || **s == 0 || **s > self.horizon) {
            return bad(format!("x_{s} = {v} out of range"));
        }
        let t1: Vec<usize> = self.x.keys().copied().collect();
        if t1 != self.t1 {
            return bad("T1 does not match the keys of x".into());
        }
        let total = self.total_m_star(p.r);
        if total < p.k || total > p.k + p.r {
            return bad(format!("sum of m* = {total} outside [{}, {}]", p.k, p.k + p.r));
        }
        Ok(())
    }

    /// The same profile over a longer horizon, new rounds storing nothing.
    pub fn extended(&self, horizon: usize) -> CutProfile {
        let mut out = self.clone();
        for s in self.horizon + 1..=horizon {
            out.t1.push(s);
            out.x.insert(s, 0);
        }
        out.horizon = out.horizon.max(horizon);
        out
    }

    fn tie_key(&self) -> (usize, usize, Vec<(usize, usize)>) {
        (self.t1.len(), self.x0, self.x.iter().map(|(s, v)| (*s, *v)).collect())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundResult {
    #[serde(with = "serde_q")]
    pub value: Q,
    pub argmin: CutProfile,
    pub linear_form: LinearForm,
    pub horizon: usize,
}

/// Per-round choices (`Some(x_s)` for storing rounds), `x0` and the form.
type ProfileVisitor<'a> = dyn FnMut(&[Option<usize>], usize, LinearForm) + 'a;

/// Visits every feasible profile over `horizon` rounds with its linear form.
///
/// Rounds are assigned left to right; a branch is cut as soon as `Σ m*`
/// exceeds `k + r` or can no longer reach `k`.
pub fn for_each_profile(p: &SystemParams, horizon: usize, mut visit: impl FnMut(&[Option<usize>], usize, LinearForm)) {
    let hi = p.k + p.r;
    let mut choice: Vec<Option<usize>> = Vec::with_capacity(horizon);

    #[allow(clippy::too_many_arguments)]
    fn go(
        p: &SystemParams,
        horizon: usize,
        hi: usize,
        x0: usize,
        cum: usize,
        form: LinearForm,
        choice: &mut Vec<Option<usize>>,
        visit: &mut ProfileVisitor<'_>,
    ) {
        let s = choice.len() + 1;
        if s > horizon {
            if cum >= p.k {
                visit(choice, x0, form);
            }
            return;
        }
        let remaining_after = horizon - s;
        // broadcast round
        let next = cum + p.r;
        if next <= hi && next + remaining_after * p.r >= p.k {
            choice.push(None);
            let f = LinearForm::new(form.a, form.b + p.d.saturating_sub(cum) as u64);
            go(p, horizon, hi, x0, next, f, choice, visit);
            choice.pop();
        }
        // storing round
        for xs in 0..=p.r {
            let next = cum + xs;
            if next > hi {
                break;
            }
            if next + remaining_after * p.r < p.k {
                continue;
            }
            choice.push(Some(xs));
            go(p, horizon, hi, x0, next, LinearForm::new(form.a + xs as u64, form.b), choice, visit);
            choice.pop();
        }
    }

    for x0 in 0..=p.n.min(hi) {
        if x0 + horizon * p.r < p.k {
            continue;
        }
        go(p, horizon, hi, x0, x0, LinearForm::new(x0 as u64, 0), &mut choice, &mut visit);
    }
}

fn profile_from(horizon: usize, x0: usize, choice: &[Option<usize>]) -> CutProfile {
    let x: BTreeMap<usize, usize> =
        choice.iter().enumerate().filter_map(|(i, c)| c.map(|v| (i + 1, v))).collect();
    CutProfile { horizon, t1: x.keys().copied().collect(), x0, x }
}

/// The bound over exactly `horizon` rounds, with no horizon shortcut.
pub fn c_lb_at_horizon(p: &SystemParams, horizon: usize) -> Result<BoundResult> {
    p.check()?;
    let mut best: Option<(Q, CutProfile, LinearForm)> = None;
    for_each_profile(p, horizon, |choice, x0, form| {
        let value = form.eval(p.alpha, p.beta);
        let replace = match &best {
            None => true,
            Some((v, _, _)) if value < *v => true,
            Some((v, prof, _)) if value == *v => {
                profile_from(horizon, x0, choice).tie_key() < prof.tie_key()
            }
            _ => false,
        };
        if replace {
            best = Some((value, profile_from(horizon, x0, choice), form));
        }
    });
    let (value, argmin, linear_form) = best.ok_or_else(|| {
        Error::Infeasible("no profile satisfies the constraints".into())
    })?;
    Ok(BoundResult { value, argmin, linear_form, horizon })
}

/// Rounds beyond `k + r` never lower the bound.
pub fn effective_horizon(p: &SystemParams) -> usize {
    p.t.min(p.k + p.r)
}

/// The lower bound `C_LB(T)`, evaluated over `effective_horizon(p)` rounds.
pub fn c_lb(p: &SystemParams) -> Result<BoundResult> {
    c_lb_at_horizon(p, effective_horizon(p))
}

/// Distinct linear forms of all feasible profiles, with dominated forms removed.
///
/// `C_LB(α, β)` is the minimum of these forms for every nonnegative (α, β).
pub fn profile_forms(p: &SystemParams, horizon: usize) -> Vec<LinearForm> {
    let mut all = BTreeSet::new();
    for_each_profile(p, horizon, |_, _, form| {
        all.insert(form);
    });
    let all: Vec<LinearForm> = all.into_iter().collect();
    all.iter()
        .filter(|f| !all.iter().any(|g| g != *f && f.dominates(g)))
        .copied()
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct TruncationReport {
    pub horizons: Vec<HorizonValue>,
    pub all_equal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct HorizonValue {
    pub horizon: usize,
    #[serde(with = "serde_q")]
    pub value: Q,
}

/// Evaluates the raw bound at horizons `k+r ..= k+r+extra` and compares them.
pub fn verify_truncation(p: &SystemParams, extra: usize) -> Result<TruncationReport> {
    let base = p.k + p.r;
    let horizons = (base..=base + extra)
        .map(|h| c_lb_at_horizon(p, h).map(|b| HorizonValue { horizon: h, value: b.value }))
        .collect::<Result<Vec<_>>>()?;
    let all_equal = horizons.windows(2).all(|w| w[0].value == w[1].value);
    Ok(TruncationReport { horizons, all_equal })
}

/// A schedule, collector and cut whose capacity equals the bound.
#[derive(Debug, Clone)]
pub struct Adversarial {
    pub instance: Instance,
    pub collector: DataCollectorSpec,
    pub graph: FlowGraph,
    pub cut: Cut,
    /// Surviving node sets `M_0 ..= M_T`.
    pub survivors: Vec<Vec<NodeId>>,
}

/// Builds the worst-case schedule for `prof` (normally the bound's argmin).
///
/// Choices left free by the construction are resolved toward the lowest
/// index: `M_0` is `{1..x0}`, and failures and helper fill-ins in the initial
/// nodes are taken from the lowest-index active nodes outside `M_0`.
pub fn adversarial_instance(p: &SystemParams, prof: &CutProfile) -> Result<Adversarial> {
    p.check()?;
    if p.n < p.k + 2 * p.r {
        return Err(Error::Precondition(format!(
            "tightness needs n >= k + 2r (n={}, k={}, r={})",
            p.n, p.k, p.r
        )));
    }
    if prof.horizon > p.t {
        return Err(Error::Precondition("profile covers more rounds than T".into()));
    }
    let prof = prof.extended(p.t);
    prof.check(p)?;

    let mut pool: Vec<NodeId> = (prof.x0 + 1..=p.n).collect();
    let take_pool = |count: usize, pool: &mut Vec<NodeId>| -> Result<Vec<NodeId>> {
        if pool.len() < count {
            return Err(Error::Invariant("ran out of initial nodes to fail".into()));
        }
        Ok(pool.drain(..count).collect())
    };

    let mut survivors: Vec<Vec<NodeId>> = vec![(1..=prof.x0).collect()];
    let mut failing = take_pool(p.r, &mut pool)?;
    let mut schedule = Vec::with_capacity(p.t);
    for s in 1..=p.t {
        let mut helpers: Vec<NodeId> = survivors.iter().flatten().copied().take(p.d).collect();
        let missing = p.d - helpers.len();
        if pool.len() < missing {
            return Err(Error::Invariant(format!("round {s}: not enough helpers")));
        }
        helpers.extend_from_slice(&pool[..missing]);
        schedule.push((std::mem::take(&mut failing), helpers));

        let newcomers = p.newcomers(s);
        match prof.x.get(&s) {
            Some(&xs) => {
                survivors.push(newcomers[..xs].to_vec());
                if s < p.t {
                    failing = newcomers[xs..].to_vec();
                    failing.extend(take_pool(xs, &mut pool)?);
                }
            }
            None => {
                survivors.push(newcomers);
                if s < p.t {
                    failing = take_pool(p.r, &mut pool)?;
                }
            }
        }
    }
    let instance = Instance::from_schedule(p.clone(), schedule)?;

    let mut candidates: Vec<NodeId> = survivors.iter().flatten().copied().collect();
    candidates.sort_unstable();
    if candidates.len() < p.k {
        return Err(Error::Invariant(format!(
            "only {} surviving nodes for a collector of size {}",
            candidates.len(),
            p.k
        )));
    }
    let collector = DataCollectorSpec::new(p.t, candidates[..p.k].to_vec());
    let graph = build_graph(&instance, &collector)?;

    let on_collector_side: BTreeSet<NodeId> = survivors.iter().flatten().copied().collect();
    let cut = Cut::from_predicate(&graph, |v| match *v {
        Vertex::Source => true,
        Vertex::Collector => false,
        Vertex::Aux { round, .. } => prof.is_storing(round),
        Vertex::In(j) => {
            let s = p.birth_round(j);
            s == 0 || prof.is_storing(s)
        }
        Vertex::Out(j) => {
            let s = p.birth_round(j);
            (s == 0 || prof.is_storing(s)) && !on_collector_side.contains(&j)
        }
    });
    Ok(Adversarial { instance, collector, graph, cut, survivors })
}

/// How a round's vertices sit relative to a cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RoundCase {
    Initial,
    /// Some broadcast vertex on the source side.
    Storing,
    /// All broadcast vertices on the collector side.
    Broadcast,
}

#[derive(Debug, Clone, Serialize)]
pub struct RoundTerms {
    pub s: usize,
    pub case: RoundCase,
    /// Out-vertices on the collector side whose in-vertex is on the source side.
    pub x: usize,
    /// Broadcast vertices on the collector side with source-side parent (storing rounds).
    pub z: usize,
    /// Broadcast vertices with source-side parent (broadcast rounds).
    pub y: usize,
    /// Same as `x`, named separately for broadcast rounds.
    pub v: usize,
    /// All out-vertices on the collector side.
    pub m: usize,
    pub contribution: Capacity,
}

#[derive(Debug, Clone)]
pub struct CutCaseTerms {
    pub rounds: Vec<RoundTerms>,
    pub capacity: Q,
    /// Broadcast vertices of storing rounds moved to the source side and
    /// in-vertices of broadcast rounds moved to the collector side.
    pub canonical: Cut,
    pub canonical_capacity: Q,
}

/// Per-round case analysis of a finite cut.
///
/// Certifies that each round's contribution matches its case formula and
/// that the canonical cut is no larger and equals
/// `x0·α + Σ_{storing} x_s·α + Σ_{broadcast} y_s·β`.
pub fn case_terms(g: &FlowGraph, c: &Cut) -> Result<CutCaseTerms> {
    let capacity = cut_capacity(g, c).finite().ok_or(Error::InfiniteCut)?;
    let (alpha, beta) = (g.alpha(), g.beta());
    let idx = |v: Vertex| g.index_of(&v).expect("vertex present");
    let side = |v: Vertex| c.contains(idx(v));

    let mut rounds = Vec::with_capacity(g.horizon() + 1);
    let mut canonical = c.clone();
    for s in 0..=g.horizon() {
        let members: Vec<Vertex> = (0..g.vertex_count())
            .filter(|&v| g.round_of(v) == Some(s))
            .map(|v| g.vertices()[v])
            .collect();
        let nodes: Vec<NodeId> =
            members.iter().filter_map(|v| if let Vertex::Out(j) = v { Some(*j) } else { None }).collect();
        let aux: Vec<NodeId> = members
            .iter()
            .filter_map(|v| if let Vertex::Aux { helper, .. } = v { Some(*helper) } else { None })
            .collect();
        let aux_v = |h: NodeId| Vertex::Aux { helper: h, round: s };

        let x = nodes.iter().filter(|&&j| side(Vertex::In(j)) && !side(Vertex::Out(j))).count();
        let m = nodes.iter().filter(|&&j| !side(Vertex::Out(j))).count();
        let parent_in_x = |h: NodeId| side(Vertex::Out(h));
        let case = if s == 0 {
            RoundCase::Initial
        } else if aux.iter().any(|&h| side(aux_v(h))) {
            RoundCase::Storing
        } else {
            RoundCase::Broadcast
        };
        let (z, y, v) = match case {
            RoundCase::Initial => (0, 0, 0),
            RoundCase::Storing => {
                (aux.iter().filter(|&&h| !side(aux_v(h)) && parent_in_x(h)).count(), 0, 0)
            }
            RoundCase::Broadcast => (0, aux.iter().filter(|&&h| parent_in_x(h)).count(), x),
        };
        let contribution = round_contribution(g, c, s)?;
        let n = |c: usize| Q::from_integer(c as i128);
        let expected = match case {
            RoundCase::Initial => alpha * n(x),
            RoundCase::Storing => alpha * n(x) + beta * n(z),
            RoundCase::Broadcast => alpha * n(v) + beta * n(y),
        };
        if contribution != Capacity::Finite(expected) {
            return Err(Error::Invariant(format!(
                "round {s}: contribution {contribution} does not match case formula {expected}"
            )));
        }
        match case {
            RoundCase::Storing => {
                for &h in &aux {
                    canonical.set(idx(aux_v(h)), true);
                }
            }
            RoundCase::Broadcast => {
                for &j in &nodes {
                    canonical.set(idx(Vertex::In(j)), false);
                }
            }
            RoundCase::Initial => {}
        }
        rounds.push(RoundTerms { s, case, x, z, y, v, m, contribution });
    }

    let canonical_capacity = cut_capacity(g, &canonical).finite().ok_or(Error::InfiniteCut)?;
    if canonical_capacity > capacity {
        return Err(Error::Invariant(format!(
            "canonical cut {canonical_capacity} exceeds original {capacity}"
        )));
    }
    let formula: Q = rounds
        .iter()
        .map(|t| {
            let n = |c: usize| Q::from_integer(c as i128);
            match t.case {
                RoundCase::Initial | RoundCase::Storing => alpha * n(t.x),
                RoundCase::Broadcast => beta * n(t.y),
            }
        })
        .sum();
    if formula != canonical_capacity {
        return Err(Error::Invariant(format!(
            "canonical cut {canonical_capacity} differs from the case sum {formula}"
        )));
    }
    Ok(CutCaseTerms { rounds, capacity, canonical, canonical_capacity })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::figures::{figure1_collector, figure1_cut, figure1_instance, FigureCut};
    use crate::frac::{q, qi};
    use crate::mincut::max_flow_min_cut;

    fn fig1(alpha: Q, beta: Q) -> SystemParams {
        SystemParams::new(8, 3, 4, 2, alpha, beta, 2)
    }

    /// Straight enumeration of (T1, x) with no pruning, for cross-checking.
    fn naive_bound(p: &SystemParams, horizon: usize) -> Q {
        let mut best: Option<Q> = None;
        for mask in 0u32..(1 << horizon) {
            let t1: Vec<usize> = (1..=horizon).filter(|s| mask & (1 << (s - 1)) != 0).collect();
            let mut xs = vec![0usize; t1.len()];
            'outer: loop {
                for x0 in 0..=p.n {
                    let x: BTreeMap<_, _> = t1.iter().copied().zip(xs.iter().copied()).collect();
                    let prof = CutProfile { horizon, t1: t1.clone(), x0, x };
                    if prof.check(p).is_ok() {
                        let v = prof.linear_form(p.d, p.r).eval(p.alpha, p.beta);
                        best = Some(best.map_or(v, |b: Q| b.min(v)));
                    }
                }
                for x in xs.iter_mut() {
                    if *x < p.r {
                        *x += 1;
                        continue 'outer;
                    }
                    *x = 0;
                }
                break;
            }
        }
        best.unwrap()
    }

    #[test]
    fn figure1_params_unit_capacities() {
        let b = c_lb(&fig1(qi(1), qi(1))).unwrap();
        assert_eq!(b.value, qi(3));
        assert_eq!(b.argmin.t1, vec![1, 2]);
        assert_eq!(b.argmin.total_m_star(2), 3);
        assert_eq!(b.linear_form, LinearForm::new(3, 0));
        assert_eq!(b.value, naive_bound(&fig1(qi(1), qi(1)), 2));
    }

    #[test]
    fn figure1_params_cheap_broadcast() {
        let p = fig1(qi(1), q(1, 4));
        let b = c_lb(&p).unwrap();
        assert_eq!(b.value, q(3, 2));
        assert!(b.argmin.t1.is_empty());
        assert_eq!(b.argmin.x0, 0);
        assert_eq!(b.linear_form, LinearForm::new(0, 6));
        assert_eq!(b.value, naive_bound(&p, 2));
    }

    #[test]
    fn zero_rounds_is_k_alpha() {
        for (n, k, d, r) in [(8, 3, 4, 2), (5, 2, 3, 1), (6, 1, 1, 5)] {
            let p = SystemParams::new(n, k, d, r, q(7, 3), q(1, 9), 0);
            let b = c_lb(&p).unwrap();
            assert_eq!(b.value, q(7, 3) * qi(k as i128));
            assert_eq!(b.argmin.x0, k);
        }
    }

    #[test]
    fn invalid_params_are_rejected() {
        let p = SystemParams::new(8, 4, 9, 2, qi(1), qi(1), 2);
        assert!(matches!(c_lb(&p), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn horizon_is_capped() {
        let h = |k, r, t| effective_horizon(&SystemParams::new(20, k, 9, r, qi(1), qi(1), t));
        assert_eq!(h(3, 2, 10), 5);
        assert_eq!(h(3, 2, 4), 4);
        assert_eq!(h(4, 2, 6), 6);
    }

    #[test]
    fn pruned_search_matches_naive() {
        for (n, k, d, r) in [(8, 3, 4, 2), (7, 2, 3, 2), (6, 3, 3, 1), (9, 2, 5, 3)] {
            for t in 0..=4 {
                for (a, b) in [(qi(1), qi(1)), (qi(1), q(1, 4)), (q(1, 3), qi(2)), (qi(0), qi(1))] {
                    let p = SystemParams::new(n, k, d, r, a, b, t);
                    assert_eq!(c_lb_at_horizon(&p, t).unwrap().value, naive_bound(&p, t), "{p:?}");
                }
            }
        }
    }

    #[test]
    fn forms_reproduce_the_minimum() {
        let p = fig1(q(2, 3), q(1, 5)).with_rounds(4);
        let forms = profile_forms(&p, 4);
        let min = forms.iter().map(|f| f.eval(p.alpha, p.beta)).min().unwrap();
        assert_eq!(min, c_lb(&p).unwrap().value);
        assert!(forms.contains(&LinearForm::new(3, 0)));
    }

    #[test]
    fn truncation_small() {
        let p = fig1(qi(1), qi(1)).with_rounds(5);
        let rep = verify_truncation(&p, 2).unwrap();
        assert_eq!(rep.horizons.iter().map(|h| h.horizon).collect::<Vec<_>>(), vec![5, 6, 7]);
        assert!(rep.all_equal);
        assert!(verify_truncation(&p, 0).unwrap().all_equal);
    }

    #[test]
    fn adversarial_matches_bound() {
        for beta in [q(1, 4), qi(1)] {
            let p = fig1(qi(1), beta);
            let b = c_lb(&p).unwrap();
            let adv = adversarial_instance(&p, &b.argmin).unwrap();
            assert_eq!(cut_capacity(&adv.graph, &adv.cut), Capacity::Finite(b.value));
            assert_eq!(max_flow_min_cut(&adv.graph).value, Capacity::Finite(b.value));
        }
    }

    #[test]
    fn adversarial_cheap_broadcast_schedule() {
        let p = fig1(qi(1), q(1, 4));
        let b = c_lb(&p).unwrap();
        let adv = adversarial_instance(&p, &b.argmin).unwrap();
        let r = &adv.instance.rounds;
        assert_eq!(r[0].failed, vec![1, 2]);
        assert_eq!(r[0].helpers, vec![3, 4, 5, 6]);
        assert_eq!(r[1].failed, vec![3, 4]);
        assert_eq!(r[1].helpers, vec![5, 6, 9, 10]);
        assert_eq!(adv.collector, DataCollectorSpec::new(2, vec![9, 10, 11]));
    }

    #[test]
    fn adversarial_needs_room() {
        let p = SystemParams::new(6, 3, 4, 2, qi(1), qi(1), 2);
        let b = c_lb(&p).unwrap();
        assert!(matches!(adversarial_instance(&p, &b.argmin), Err(Error::Precondition(_))));
    }

    #[test]
    fn case_terms_on_figure_cuts() {
        let (alpha, beta) = (q(5, 2), q(1, 3));
        let inst = figure1_instance(alpha, beta);
        let g = build_graph(&inst, &figure1_collector()).unwrap();

        let line2 = case_terms(&g, &figure1_cut(&g, FigureCut::Line2)).unwrap();
        let parts: Vec<_> = line2.rounds.iter().map(|t| t.contribution).collect();
        assert_eq!(
            parts,
            vec![Capacity::Finite(qi(0)), Capacity::Finite(alpha), Capacity::Finite(beta * qi(3))]
        );
        assert_eq!(line2.rounds[1].case, RoundCase::Storing);
        assert_eq!(line2.rounds[2].case, RoundCase::Broadcast);
        assert_eq!(line2.rounds[2].y, 3);

        let line1 = case_terms(&g, &figure1_cut(&g, FigureCut::Line1)).unwrap();
        assert_eq!(line1.capacity, beta * qi(7));
        assert_eq!(line1.canonical_capacity, beta * qi(7));

        let only_source = Cut::from_predicate(&g, |_| false);
        assert!(matches!(case_terms(&g, &only_source), Err(Error::InfiniteCut)));
    }
}
