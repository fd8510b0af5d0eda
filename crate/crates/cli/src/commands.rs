use std::fmt::Write;
use std::path::Path;

use serde_json::{json, Value};
use wdss_core::bound::verify_truncation;
use wdss_core::figures::{figure1_collector, figure1_cut, figure1_instance, figure4_params, FigureCut, FIG4_D, FIG4_K, FIG4_R};
use wdss_core::flowgraph::cut_form;
use wdss_core::frac::{format_q, qi};
use wdss_core::mincut::CollectorScope;
use wdss_core::rlnc::{achievability_experiment, InstanceSource, SimConfig};
use wdss_core::tradeoff::{csv_row, dominance_report, sweep_curve, Grid, TradeoffPoint};
use wdss_core::*;

use crate::output::{frac, labels, profile, schedule};
use crate::{Cli, Command, Failure, Format, ParamArgs, ScopeArg, SourceArg};

type Outcome = Result<String, Failure>;

pub fn run(cli: &Cli) -> Outcome {
    let fmt = cli.format;
    match &cli.command {
        Command::Bound { params } => bound(fmt, params),
        Command::Mincut { params, instance, collector, scope, limit } => {
            mincut(fmt, params, instance.as_deref(), collector.as_deref(), *scope, *limit)
        }
        Command::Tightness { params } => tightness(fmt, params),
        Command::Truncation { params, extra } => truncation(fmt, params, *extra),
        Command::Tradeoff { params, file_size, grid } => tradeoff(fmt, params, *file_size, grid),
        Command::Simulate { params, instance, file_size, trials, seed, field, source } => {
            let sim = Sim { file_size: *file_size, trials: *trials, seed: *seed, field: *field, source: *source };
            simulate(fmt, params, instance.as_deref(), &sim)
        }
        Command::Figure1 { alpha, beta } => figure1(fmt, *alpha, *beta),
        Command::Figure4 { file_size, grid } => figure4(fmt, *file_size, grid),
    }
}

fn emit(fmt: Format, human: String, machine: Value) -> Outcome {
    match fmt {
        Format::Human => Ok(human),
        Format::Machine => Ok(format!("{}\n", serde_json::to_string_pretty(&machine).expect("serializable"))),
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

impl ParamArgs {
    fn require(&self, need_capacities: bool) -> Result<SystemParams, Failure> {
        let missing = |flag: &str| Failure::Usage(format!("missing required flag {flag}"));
        let alpha = match (self.alpha, need_capacities) {
            (Some(a), _) => a,
            (None, false) => qi(1),
            (None, true) => return Err(missing("--alpha")),
        };
        let beta = match (self.beta, need_capacities) {
            (Some(b), _) => b,
            (None, false) => qi(1),
            (None, true) => return Err(missing("--beta")),
        };
        let p = SystemParams::new(
            self.n.ok_or_else(|| missing("-n"))?,
            self.k.ok_or_else(|| missing("-k"))?,
            self.d.ok_or_else(|| missing("-d"))?,
            self.r.ok_or_else(|| missing("-r"))?,
            alpha,
            beta,
            self.t.ok_or_else(|| missing("-T"))?,
        );
        p.check()?;
        Ok(p)
    }
}

fn load_instance(path: &Path, params: &ParamArgs) -> Result<Instance, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut inst = Instance::from_json(&text)?;
    if let Some(a) = params.alpha {
        inst.params.alpha = a;
    }
    if let Some(b) = params.beta {
        inst.params.beta = b;
    }
    inst.validate()?;
    Ok(inst)
}

fn parse_grid(text: &str) -> Result<Grid, Failure> {
    if text.trim() == "auto" {
        return Ok(Grid::Auto);
    }
    let betas = text
        .split(',')
        .map(|s| parse_q(s.trim()))
        .collect::<wdss_core::Result<Vec<Q>>>()
        .map_err(|e| Failure::Usage(format!("--grid: {e}")))?;
    Ok(Grid::Betas(betas))
}

fn bound(fmt: Format, args: &ParamArgs) -> Outcome {
    let p = args.require(true)?;
    let b = c_lb(&p)?;
    let mut h = String::new();
    let _ = writeln!(h, "C_LB = {}", frac(&b.value));
    let _ = writeln!(h, "form: {}α + {}β", b.linear_form.a, b.linear_form.b);
    let _ = writeln!(h, "argmin: {}", profile(&b.argmin));
    let _ = writeln!(h, "horizon: {} (T={})", b.horizon, p.t);
    emit(fmt, h, json!({ "params": p, "bound": b }))
}

fn mincut(
    fmt: Format,
    args: &ParamArgs,
    instance: Option<&Path>,
    collector: Option<&str>,
    scope: ScopeArg,
    limit: Option<usize>,
) -> Outcome {
    if let Some(path) = instance {
        let inst = load_instance(path, args)?;
        if let Some(text) = collector {
            let dc: DataCollectorSpec = text.parse()?;
            let g = build_graph(&inst, &dc)?;
            let res = max_flow_min_cut(&g);
            let value = res.value.finite().ok_or(Error::InfiniteCut)?;
            let side = res.cut.source_side_labels(&g);
            let mut h = String::new();
            let _ = writeln!(h, "min-cut of {dc} = {}", frac(&value));
            let _ = writeln!(h, "witness cut (source side): {}", labels(&side));
            return emit(
                fmt,
                h,
                json!({ "value": format_q(&value), "witness_cut": side, "witness_collector": dc, "truncated": false }),
            );
        }
        let rep = instance_capacity(&inst)?;
        let mut h = String::new();
        let _ = writeln!(h, "schedule capacity = {}", frac(&rep.value));
        let _ = writeln!(h, "witness collector: {}", rep.witness_collector);
        let _ = writeln!(h, "witness cut (source side): {}", labels(&rep.witness_cut));
        let _ = writeln!(h, "collectors examined: {}", rep.collectors_examined);
        return emit(fmt, h, to_value(&rep));
    }
    if collector.is_some() {
        return Err(Failure::Usage("--collector needs --instance".into()));
    }
    let p = args.require(true)?;
    let scope = match scope {
        ScopeArg::Full => Scope::Enumerate { canonical: false, limit, collectors: CollectorScope::All },
        ScopeArg::Canonical => {
            Scope::Enumerate { canonical: true, limit, collectors: CollectorScope::Representatives }
        }
        ScopeArg::Adversarial => Scope::Adversarial,
    };
    let rep = storage_capacity(&p, &scope)?;
    let bound = c_lb(&p)?;
    let mut h = String::new();
    let _ = writeln!(h, "storage capacity = {}{}", frac(&rep.value), if rep.truncated { " (truncated scope)" } else { "" });
    let _ = writeln!(h, "bound C_LB = {}", frac(&bound.value));
    let _ = writeln!(h, "witness collector: {}", rep.witness_collector);
    if let Some(inst) = &rep.witness_instance {
        h.push_str("witness schedule:\n");
        h.push_str(&schedule(inst));
    }
    let _ = writeln!(h, "witness cut (source side): {}", labels(&rep.witness_cut));
    let _ = writeln!(h, "schedules examined: {}, collectors examined: {}", rep.instances_examined, rep.collectors_examined);
    let mut doc = to_value(&rep);
    doc["bound"] = json!(format_q(&bound.value));
    emit(fmt, h, doc)
}

fn tightness(fmt: Format, args: &ParamArgs) -> Outcome {
    let p = args.require(true)?;
    let bound = c_lb(&p)?;
    let adv = adversarial_instance(&p, &bound.argmin)?;
    let cut = cut_capacity(&adv.graph, &adv.cut).finite().ok_or(Error::InfiniteCut)?;
    let flow = max_flow_min_cut(&adv.graph).value.finite().ok_or(Error::InfiniteCut)?;
    if cut != bound.value || flow != bound.value {
        return Err(Failure::Invariant(format!(
            "bound {}, adversarial cut {}, max-flow {} disagree",
            format_q(&bound.value),
            format_q(&cut),
            format_q(&flow)
        )));
    }
    let side = adv.cut.source_side_labels(&adv.graph);
    let mut h = String::new();
    let _ = writeln!(h, "bound = adversarial cut = max-flow = {}", frac(&bound.value));
    let _ = writeln!(h, "profile: {}", profile(&bound.argmin));
    h.push_str("schedule:\n");
    h.push_str(&schedule(&adv.instance));
    let _ = writeln!(h, "collector: {}", adv.collector);
    let _ = writeln!(h, "cut (source side): {}", labels(&side));
    let doc = json!({
        "bound": format_q(&bound.value),
        "cut_capacity": format_q(&cut),
        "max_flow": format_q(&flow),
        "profile": bound.argmin,
        "instance": adv.instance,
        "collector": adv.collector,
        "witness_cut": side,
        "survivors": adv.survivors,
    });
    emit(fmt, h, doc)
}

fn truncation(fmt: Format, args: &ParamArgs, extra: usize) -> Outcome {
    let p = args.require(true)?;
    let rep = verify_truncation(&p, extra)?;
    if !rep.all_equal {
        let values: Vec<String> =
            rep.horizons.iter().map(|h| format!("{}: {}", h.horizon, format_q(&h.value))).collect();
        return Err(Failure::Invariant(format!("bound changes past k+r: {}", values.join(", "))));
    }
    let mut h = String::new();
    for hv in &rep.horizons {
        let _ = writeln!(h, "horizon {}: {}", hv.horizon, frac(&hv.value));
    }
    let _ = writeln!(h, "all equal; effective horizon for T={} is {}", p.t, effective_horizon(&p));
    emit(fmt, h, to_value(&rep))
}

fn endpoint_comments(out: &mut String, k: usize, d: usize, r: usize, file_size: Q) -> Result<(), Failure> {
    let rep = dominance_report(k, d, r, file_size)?;
    let point = |pt: &TradeoffPoint| format!("tau={} alpha={}", format_q(&pt.tau), format_q(&pt.alpha));
    let _ = writeln!(out, "# MS broadcast {} | cooperative {}", point(&rep.ms_broadcast), point(&rep.ms_cooperative));
    let _ = writeln!(out, "# MT broadcast {} | cooperative {}", point(&rep.mt_broadcast), point(&rep.mt_cooperative));
    let _ = writeln!(out, "# gaps MS {} MT {}", format_q(&rep.ms_gap), format_q(&rep.mt_gap));
    if let Some(w) = &rep.warning {
        let _ = writeln!(out, "# warning: {w}");
    }
    Ok(())
}

fn tradeoff(fmt: Format, args: &ParamArgs, file_size: Q, grid: &str) -> Outcome {
    let p = args.require(false)?;
    let curve = sweep_curve(&p, file_size, &parse_grid(grid)?)?;
    let mut out = curve.to_csv();
    if fmt == Format::Human {
        let _ = writeln!(
            out,
            "# curve ends: MT tau={} alpha={}, MS tau={} alpha={}",
            format_q(&curve.mt.tau),
            format_q(&curve.mt.alpha),
            format_q(&curve.ms.tau),
            format_q(&curve.ms.alpha)
        );
        if p.d + p.r > p.k {
            endpoint_comments(&mut out, p.k, p.d, p.r, file_size)?;
        }
    }
    Ok(out)
}

struct Sim {
    file_size: Option<usize>,
    trials: usize,
    seed: u64,
    field: u32,
    source: SourceArg,
}

fn simulate(fmt: Format, args: &ParamArgs, instance: Option<&Path>, sim: &Sim) -> Outcome {
    let (p, source) = match instance {
        Some(path) => {
            let inst = load_instance(path, args)?;
            (inst.params.clone(), InstanceSource::Given(inst))
        }
        None => {
            let src = match sim.source {
                SourceArg::Adversarial => InstanceSource::Adversarial,
                SourceArg::Random => InstanceSource::Random,
            };
            (args.require(true)?, src)
        }
    };
    let file_size = match sim.file_size {
        Some(b) => b,
        None => {
            let v = c_lb(&p)?.value;
            if !v.is_integer() {
                return Err(Failure::Input(format!("bound {v} is not an integer; pass --B")));
            }
            v.to_integer() as usize
        }
    };
    let mut cfg = SimConfig::new(p, file_size);
    cfg.trials = sim.trials;
    cfg.seed = sim.seed;
    cfg.field_bits = sim.field;
    let rep = achievability_experiment(&cfg, &source)?;
    if let Some(v) = rep.violations.first() {
        return Err(Failure::Invariant(format!(
            "{} rank violations; trial {} collector {} has rank {} above min-cut {}",
            rep.violations.len(),
            v.trial,
            v.collector,
            v.rank,
            v.min_cut
        )));
    }
    let mut h = String::new();
    let _ = writeln!(
        h,
        "B={} GF(2^{}) trials={} seed={}",
        cfg.file_size, cfg.field_bits, cfg.trials, cfg.seed
    );
    h.push_str("schedule:\n");
    h.push_str(&schedule(&rep.instance));
    let _ = writeln!(h, "collectors: {}", rep.per_collector.len());
    let _ = writeln!(h, "decode rate over all collectors: {:.4}", rep.success_rate);
    match rep.worst_feasible_rate {
        Some(w) => {
            let _ = writeln!(h, "lowest rate among collectors with min-cut >= B: {w:.4}");
        }
        None => h.push_str("no collector has min-cut >= B\n"),
    }
    let short = rep.per_collector.iter().filter(|o| o.min_cut < cfg.file_size as u64).count();
    let _ = writeln!(h, "collectors with min-cut < B: {short}");
    h.push_str("rank violations: 0\n");
    emit(fmt, h, to_value(&rep))
}

fn figure1(fmt: Format, alpha: Q, beta: Q) -> Outcome {
    let inst = figure1_instance(alpha, beta);
    let dc = figure1_collector();
    let g = build_graph(&inst, &dc)?;
    let min = max_flow_min_cut(&g).value.finite().ok_or(Error::InfiniteCut)?;
    let cuts: Vec<(&str, Cut)> = vec![
        ("line1", figure1_cut(&g, FigureCut::Line1)),
        ("line2", figure1_cut(&g, FigureCut::Line2)),
    ];
    let mut h = String::new();
    let _ = writeln!(h, "n=8 k=3 d=4 r=2 T=2 alpha={} beta={}", format_q(&alpha), format_q(&beta));
    h.push_str("schedule:\n");
    h.push_str(&schedule(&inst));
    let _ = writeln!(h, "collector: {dc}");
    let _ = writeln!(h, "graph: {} vertices, {} edges", g.vertex_count(), g.edges().len());
    let mut docs = Vec::new();
    for (name, c) in &cuts {
        let cap = cut_capacity(&g, c).finite().ok_or(Error::InfiniteCut)?;
        let form = cut_form(&g, c).ok_or(Error::InfiniteCut)?;
        let side = c.source_side_labels(&g);
        let _ = writeln!(h, "cut {name}: {}α + {}β = {}", form.a, form.b, frac(&cap));
        let _ = writeln!(h, "  source side: {}", labels(&side));
        docs.push(json!({ "name": name, "capacity": format_q(&cap), "form": form, "source_side": side }));
    }
    let _ = writeln!(h, "min-cut: {}", frac(&min));
    h.push_str("edges:\n");
    for line in g.to_edge_list().lines() {
        let _ = writeln!(h, "  {line}");
    }
    let doc = json!({
        "instance": inst,
        "collector": dc,
        "edges": g.to_edge_list().lines().collect::<Vec<_>>(),
        "cuts": docs,
        "min_cut": format_q(&min),
    });
    emit(fmt, h, doc)
}

/// Points on the straight segment between the cooperative endpoints.
fn schematic(a: &TradeoffPoint, b: &TradeoffPoint, steps: i128) -> Vec<TradeoffPoint> {
    (1..steps)
        .map(|i| {
            let t = qi(i) / qi(steps);
            TradeoffPoint { tau: a.tau + (b.tau - a.tau) * t, alpha: a.alpha + (b.alpha - a.alpha) * t, beta: None }
        })
        .collect()
}

fn figure4(fmt: Format, file_size: Q, grid: &str) -> Outcome {
    let p = figure4_params();
    let curve = sweep_curve(&p, file_size, &parse_grid(grid)?)?;
    let rep = dominance_report(FIG4_K, FIG4_D, FIG4_R, file_size)?;
    let mut out = curve.to_csv();
    for (series, pt) in [
        ("ms_broadcast", &rep.ms_broadcast),
        ("mt_broadcast", &rep.mt_broadcast),
        ("ms_cooperative", &rep.ms_cooperative),
        ("mt_cooperative", &rep.mt_cooperative),
    ] {
        out.push_str(&csv_row(series, pt));
    }
    for pt in schematic(&rep.mt_cooperative, &rep.ms_cooperative, 8) {
        out.push_str(&csv_row("cooperative_schematic", &pt));
    }
    if fmt == Format::Human {
        out.push_str("# cooperative_schematic rows interpolate linearly between the cooperative endpoints\n");
        endpoint_comments(&mut out, FIG4_K, FIG4_D, FIG4_R, file_size)?;
    }
    Ok(out)
}
