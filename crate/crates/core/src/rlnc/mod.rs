//! Functional repair with random linear network coding.
//!
//! Every stored packet is a linear combination of the `B` file packets and is
//! tracked by its coefficient vector. Helpers broadcast random combinations
//! of what they store; each newcomer hears every broadcast and keeps `α`
//! random combinations of them. A collector decodes iff the coefficient
//! vectors it gathers span the whole file.
//!
//! All randomness comes from ChaCha8 seeded with `seed`; trial `t` uses
//! stream `t`, so trials are independent and can run in any order.

pub mod gf;

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bound::{adversarial_instance, c_lb};
use crate::error::{Error, Result};
use crate::flowgraph::build_graph;
use crate::mincut::max_flow_min_cut;
use crate::model::{enumerate_collectors, random_instance, DataCollectorSpec, Instance, NodeId, RepairRound, SystemParams};
pub use gf::{Elem, Field};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodedPacket {
    pub coeffs: Vec<Elem>,
    pub payload: Option<Vec<Elem>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeStore {
    pub id: NodeId,
    pub packets: Vec<CodedPacket>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimConfig {
    pub params: SystemParams,
    pub file_size: usize,
    pub field_bits: u32,
    pub trials: usize,
    pub seed: u64,
    /// Symbols per packet carried alongside the coefficients; 0 tracks coefficients only.
    pub payload_len: usize,
}

impl SimConfig {
    pub fn new(params: SystemParams, file_size: usize) -> Self {
        SimConfig { params, file_size, field_bits: 8, trials: 100, seed: 0, payload_len: 0 }
    }

    /// Integer α and β as packet counts.
    pub fn packets(&self) -> Result<(usize, usize)> {
        let as_count = |v: &crate::frac::Q, name: &str| {
            if !v.is_integer() {
                return Err(Error::Precondition(format!("{name} must be an integer packet count")));
            }
            v.to_integer()
                .to_usize()
                .ok_or_else(|| Error::Precondition(format!("{name} must be nonnegative")))
        };
        Ok((as_count(&self.params.alpha, "alpha")?, as_count(&self.params.beta, "beta")?))
    }

    pub fn check(&self) -> Result<()> {
        self.params.check()?;
        self.packets()?;
        if self.trials == 0 {
            return Err(Error::Precondition("trials must be at least 1".into()));
        }
        gf::primitive_polynomial(self.field_bits)
            .ok_or_else(|| Error::Precondition(format!("unsupported field GF(2^{})", self.field_bits)))?;
        Ok(())
    }
}

/// Live nodes and what they store.
#[derive(Debug, Clone)]
pub struct StorageState {
    pub field: Field,
    pub file_size: usize,
    pub alpha: usize,
    pub beta: usize,
    pub nodes: BTreeMap<NodeId, NodeStore>,
    /// The source file, kept when payloads are simulated.
    pub file: Option<Vec<Vec<Elem>>>,
}

impl StorageState {
    fn combine<R: Rng + ?Sized>(&self, sources: &[&CodedPacket], rng: &mut R) -> CodedPacket {
        let mut coeffs = vec![0; self.file_size];
        let payload_len = sources.first().and_then(|p| p.payload.as_ref()).map(Vec::len);
        let mut payload = payload_len.map(|l| vec![0; l]);
        for src in sources {
            let c = self.field.random(rng);
            self.field.axpy(&mut coeffs, c, &src.coeffs);
            if let (Some(acc), Some(p)) = (payload.as_mut(), src.payload.as_ref()) {
                self.field.axpy(acc, c, p);
            }
        }
        CodedPacket { coeffs, payload }
    }

    pub fn gathered(&self, dc: &DataCollectorSpec) -> Vec<&CodedPacket> {
        dc.members.iter().filter_map(|m| self.nodes.get(m)).flat_map(|n| n.packets.iter()).collect()
    }

    pub fn rank(&self, dc: &DataCollectorSpec) -> usize {
        let rows: Vec<Vec<Elem>> = self.gathered(dc).iter().map(|p| p.coeffs.clone()).collect();
        self.field.rank(&rows)
    }

    /// Recovers the file from a collector's packets (payload mode only).
    pub fn decode_file(&self, dc: &DataCollectorSpec) -> Option<Vec<Vec<Elem>>> {
        let packets = self.gathered(dc);
        let coeffs: Vec<Vec<Elem>> = packets.iter().map(|p| p.coeffs.clone()).collect();
        let payloads: Vec<Vec<Elem>> =
            packets.iter().map(|p| p.payload.clone()).collect::<Option<_>>()?;
        self.field.solve(&coeffs, &payloads)
    }
}

/// Places `α` uniformly random combinations of the file on each of the `n` nodes.
pub fn init_storage<R: Rng + ?Sized>(cfg: &SimConfig, rng: &mut R) -> Result<StorageState> {
    cfg.check()?;
    let (alpha, beta) = cfg.packets()?;
    let field = Field::new(cfg.field_bits)?;
    let file = (cfg.payload_len > 0).then(|| {
        (0..cfg.file_size)
            .map(|_| (0..cfg.payload_len).map(|_| field.random(rng)).collect::<Vec<_>>())
            .collect::<Vec<_>>()
    });
    let mut nodes = BTreeMap::new();
    for id in 1..=cfg.params.n {
        let packets = (0..alpha)
            .map(|_| {
                let coeffs: Vec<Elem> = (0..cfg.file_size).map(|_| field.random(rng)).collect();
                let payload = file.as_ref().map(|f| {
                    let mut acc = vec![0; cfg.payload_len];
                    for (c, row) in coeffs.iter().zip(f) {
                        field.axpy(&mut acc, *c, row);
                    }
                    acc
                });
                CodedPacket { coeffs, payload }
            })
            .collect();
        nodes.insert(id, NodeStore { id, packets });
    }
    Ok(StorageState { field, file_size: cfg.file_size, alpha, beta, nodes, file })
}

/// Removes the failed nodes, broadcasts `β` packets from each helper and
/// stores `α` combinations of all `dβ` broadcasts on each newcomer.
pub fn run_repair_round<R: Rng + ?Sized>(state: &mut StorageState, round: &RepairRound, rng: &mut R) -> Result<()> {
    for f in &round.failed {
        if state.nodes.remove(f).is_none() {
            return Err(Error::InvalidInstance(format!("round {}: node {f} is not active", round.s)));
        }
    }
    let mut broadcast = Vec::with_capacity(round.helpers.len() * state.beta);
    for h in &round.helpers {
        let store = state.nodes.get(h).ok_or_else(|| {
            Error::InvalidInstance(format!("round {}: helper {h} is not active", round.s))
        })?;
        let held: Vec<&CodedPacket> = store.packets.iter().collect();
        for _ in 0..state.beta {
            broadcast.push(state.combine(&held, rng));
        }
    }
    let heard: Vec<&CodedPacket> = broadcast.iter().collect();
    let mut fresh = Vec::with_capacity(round.newcomers.len());
    for &j in &round.newcomers {
        let packets = (0..state.alpha).map(|_| state.combine(&heard, rng)).collect();
        fresh.push(NodeStore { id: j, packets });
    }
    for store in fresh {
        state.nodes.insert(store.id, store);
    }
    Ok(())
}

/// True iff the collector's coefficient vectors have rank `B`.
pub fn dc_decodable(state: &StorageState, dc: &DataCollectorSpec, file_size: usize) -> bool {
    file_size == 0 || state.rank(dc) == file_size
}

/// Where the simulated schedule comes from.
#[derive(Debug, Clone)]
pub enum InstanceSource {
    /// The tightness construction for the bound's optimal profile.
    Adversarial,
    /// One schedule drawn uniformly from the seed.
    Random,
    Given(Instance),
}

#[derive(Debug, Clone, Serialize)]
pub struct CollectorOutcome {
    pub collector: String,
    pub min_cut: u64,
    pub decodable_rate: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RankViolation {
    pub trial: usize,
    pub collector: String,
    pub rank: usize,
    pub min_cut: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub config: SimConfig,
    pub instance: Instance,
    pub per_collector: Vec<CollectorOutcome>,
    /// Decodes over all collectors and trials.
    pub success_rate: f64,
    /// Lowest per-collector rate among collectors whose min-cut is at least `B`.
    pub worst_feasible_rate: Option<f64>,
    /// Collectors whose rank exceeded their min-cut; must stay empty.
    pub violations: Vec<RankViolation>,
}

/// Runs one full schedule and returns each collector's rank.
pub fn run_trial(cfg: &SimConfig, inst: &Instance, collectors: &[DataCollectorSpec], trial: usize) -> Result<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(trial as u64);
    let mut state = init_storage(cfg, &mut rng)?;
    let mut ranks = vec![0; collectors.len()];
    let mut done = 0;
    for s in 0..=inst.horizon() {
        if s > 0 {
            run_repair_round(&mut state, &inst.rounds[s - 1], &mut rng)?;
        }
        for (i, dc) in collectors.iter().enumerate().filter(|(_, dc)| dc.s == s) {
            ranks[i] = state.rank(dc);
            done += 1;
        }
    }
    debug_assert_eq!(done, collectors.len());
    Ok(ranks)
}

/// Decodability of every collector over `cfg.trials` seeded trials, checked
/// against each collector's exact min-cut.
pub fn achievability_experiment(cfg: &SimConfig, source: &InstanceSource) -> Result<ExperimentReport> {
    cfg.check()?;
    let p = &cfg.params;
    let inst = match source {
        InstanceSource::Adversarial => {
            let bound = c_lb(p)?;
            adversarial_instance(p, &bound.argmin)?.instance
        }
        InstanceSource::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(u64::MAX);
            random_instance(p, &mut rng)?
        }
        InstanceSource::Given(i) => {
            i.validate()?;
            if i.params.n != p.n || i.params.k != p.k || i.params.t != p.t {
                return Err(Error::Precondition("instance does not match the configured parameters".into()));
            }
            Instance { params: p.clone(), rounds: i.rounds.clone() }
        }
    };
    let collectors: Vec<DataCollectorSpec> = enumerate_collectors(&inst).collect();
    let min_cuts = collectors
        .iter()
        .map(|dc| {
            let g = build_graph(&inst, dc)?;
            let v = max_flow_min_cut(&g).value.finite().ok_or(Error::InfiniteCut)?;
            Ok(v.to_integer() as u64)
        })
        .collect::<Result<Vec<u64>>>()?;

    let ranks = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, &inst, &collectors, t))
        .collect::<Result<Vec<_>>>()?;

    let mut violations = Vec::new();
    let mut decodes = vec![0usize; collectors.len()];
    for (trial, trial_ranks) in ranks.iter().enumerate() {
        for (i, &rank) in trial_ranks.iter().enumerate() {
            if rank as u64 > min_cuts[i] {
                violations.push(RankViolation {
                    trial,
                    collector: collectors[i].label(),
                    rank,
                    min_cut: min_cuts[i],
                });
            }
            if cfg.file_size == 0 || rank == cfg.file_size {
                decodes[i] += 1;
            }
        }
    }
    let trials = cfg.trials as f64;
    let per_collector: Vec<CollectorOutcome> = collectors
        .iter()
        .zip(&decodes)
        .zip(&min_cuts)
        .map(|((dc, &ok), &mc)| CollectorOutcome {
            collector: dc.label(),
            min_cut: mc,
            decodable_rate: ok as f64 / trials,
        })
        .collect();
    let success_rate = decodes.iter().sum::<usize>() as f64 / (trials * collectors.len() as f64);
    let worst_feasible_rate = per_collector
        .iter()
        .filter(|o| o.min_cut >= cfg.file_size as u64)
        .map(|o| o.decodable_rate)
        .reduce(f64::min);
    Ok(ExperimentReport {
        config: cfg.clone(),
        instance: inst,
        per_collector,
        success_rate,
        worst_feasible_rate,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::figures::figure1_instance;
    use crate::frac::qi;

    fn cfg(alpha: i128, beta: i128, file_size: usize) -> SimConfig {
        let mut c = SimConfig::new(SystemParams::new(8, 3, 4, 2, qi(alpha), qi(beta), 2), file_size);
        c.trials = 10;
        c.seed = 42;
        c
    }

    #[test]
    fn single_packet_file() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = cfg(1, 1, 1);
        let state = init_storage(&c, &mut rng).unwrap();
        for (id, store) in &state.nodes {
            let dc = DataCollectorSpec::new(0, vec![*id]);
            assert_eq!(state.rank(&dc) == 1, store.packets[0].coeffs[0] != 0);
        }
    }

    #[test]
    fn empty_nodes_decode_nothing() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let state = init_storage(&cfg(0, 1, 3), &mut rng).unwrap();
        assert!(state.nodes.values().all(|n| n.packets.is_empty()));
        assert!(!dc_decodable(&state, &DataCollectorSpec::new(0, vec![1, 2, 3]), 3));
        assert!(dc_decodable(&state, &DataCollectorSpec::new(0, vec![1, 2, 3]), 0));
    }

    #[test]
    fn any_three_initial_nodes_decode() {
        let c = cfg(2, 1, 6);
        let dc = DataCollectorSpec::new(0, vec![2, 5, 7]);
        let ok = (0..100u64)
            .filter(|&t| {
                let mut rng = ChaCha8Rng::seed_from_u64(t);
                dc_decodable(&init_storage(&c, &mut rng).unwrap(), &dc, 6)
            })
            .count();
        assert!(ok >= 99, "{ok}");
    }

    #[test]
    fn silent_helpers_leave_newcomers_empty() {
        let c = cfg(2, 0, 4);
        let inst = figure1_instance(qi(2), qi(0));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut state = init_storage(&c, &mut rng).unwrap();
        run_repair_round(&mut state, &inst.rounds[0], &mut rng).unwrap();
        for j in [9, 10] {
            assert!(state.nodes[&j].packets.iter().all(|p| p.coeffs.iter().all(|&x| x == 0)));
        }
        assert!(!state.nodes.contains_key(&5));
    }

    #[test]
    fn newcomer_rank_limited_by_broadcast_volume() {
        // d·β = 4 packets heard, α = 6 stored
        let mut c = cfg(6, 1, 8);
        c.params.n = 8;
        let inst = figure1_instance(qi(6), qi(1));
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut state = init_storage(&c, &mut rng).unwrap();
        run_repair_round(&mut state, &inst.rounds[0], &mut rng).unwrap();
        assert!(state.rank(&DataCollectorSpec::new(1, vec![9])) <= 4);
        assert_eq!(state.nodes[&10].packets.len(), 6);
    }

    #[test]
    fn round_rejects_inactive_helper() {
        let c = cfg(2, 1, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut state = init_storage(&c, &mut rng).unwrap();
        let bad = RepairRound { s: 1, failed: vec![1, 2], newcomers: vec![9, 10], helpers: vec![1, 3, 4, 5] };
        assert!(run_repair_round(&mut state, &bad, &mut rng).is_err());
    }

    #[test]
    fn payload_is_recovered() {
        let mut c = cfg(2, 1, 5);
        c.payload_len = 16;
        let inst = figure1_instance(qi(2), qi(1));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut state = init_storage(&c, &mut rng).unwrap();
        for round in &inst.rounds {
            run_repair_round(&mut state, round, &mut rng).unwrap();
        }
        let dc = DataCollectorSpec::new(2, vec![1, 9, 11]);
        if dc_decodable(&state, &dc, 5) {
            assert_eq!(state.decode_file(&dc).as_ref(), state.file.as_ref());
        }
    }

    #[test]
    fn trials_are_reproducible() {
        let c = cfg(2, 1, 5);
        let inst = figure1_instance(qi(2), qi(1));
        let dcs: Vec<_> = enumerate_collectors(&inst).collect();
        let a = run_trial(&c, &inst, &dcs, 3).unwrap();
        let b = run_trial(&c, &inst, &dcs, 3).unwrap();
        assert_eq!(a, b);
        let r1 = achievability_experiment(&c, &InstanceSource::Given(inst.clone())).unwrap();
        let r2 = achievability_experiment(&c, &InstanceSource::Given(inst)).unwrap();
        assert_eq!(
            serde_json::to_string(&r1).unwrap(),
            serde_json::to_string(&r2).unwrap()
        );
    }

    #[test]
    fn oversized_file_never_decodes() {
        let c = cfg(2, 1, 7);
        let rep = achievability_experiment(&c, &InstanceSource::Adversarial).unwrap();
        assert!(rep.violations.is_empty());
        for o in &rep.per_collector {
            if o.min_cut < 7 {
                assert_eq!(o.decodable_rate, 0.0, "{}", o.collector);
            }
        }
    }

    #[test]
    fn rejects_fractional_capacities() {
        let mut c = cfg(1, 1, 2);
        c.params.beta = crate::frac::q(1, 2);
        assert!(c.check().is_err());
    }

    #[test]
    fn larger_field_decodes_at_least_as_often() {
        let inst = figure1_instance(qi(2), qi(1));
        let rate = |bits| {
            let mut c = cfg(2, 1, 5);
            c.trials = 300;
            c.field_bits = bits;
            achievability_experiment(&c, &InstanceSource::Given(inst.clone())).unwrap().success_rate
        };
        let (small, large) = (rate(4), rate(8));
        assert!(small <= large + 0.005, "GF(16) {small} vs GF(256) {large}");
        assert!(small < 1.0);
    }

    #[test]
    fn newcomers_hold_combinations_of_the_broadcast() {
        let c = cfg(2, 1, 4);
        let inst = figure1_instance(qi(2), qi(1));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut state = init_storage(&c, &mut rng).unwrap();
        let helpers = DataCollectorSpec::new(0, vec![1, 2, 3, 4]);
        let helper_rank = state.rank(&helpers);
        run_repair_round(&mut state, &inst.rounds[0], &mut rng).unwrap();
        for j in [9, 10] {
            assert_eq!(state.nodes[&j].packets.len(), 2);
            assert!(state.nodes[&j].packets.iter().all(|p| p.coeffs.len() == 4));
        }
        let both = DataCollectorSpec::new(1, vec![9, 10]);
        assert!(state.rank(&both) <= helper_rank.min(4));
    }
}
