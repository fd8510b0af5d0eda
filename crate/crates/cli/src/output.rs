use std::fmt::Write;

use wdss_core::bound::CutProfile;
use wdss_core::frac::{decimal, format_q};
use wdss_core::{Instance, Q};

/// `p/q` followed by its decimal value when not an integer.
pub fn frac(v: &Q) -> String {
    if v.is_integer() {
        format_q(v)
    } else {
        format!("{} ({})", format_q(v), decimal(v))
    }
}

pub fn set(items: &[usize]) -> String {
    let inner: Vec<String> = items.iter().map(ToString::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

pub fn profile(p: &CutProfile) -> String {
    let xs: Vec<String> = p.x.iter().map(|(s, x)| format!("x_{s}={x}")).collect();
    let mut out = format!("T1={} x0={}", set(&p.t1), p.x0);
    if !xs.is_empty() {
        let _ = write!(out, " {}", xs.join(" "));
    }
    out
}

pub fn schedule(inst: &Instance) -> String {
    let mut out = String::new();
    for round in &inst.rounds {
        let _ = writeln!(
            out,
            "  round {}: failed {} helpers {} newcomers {}",
            round.s,
            set(&round.failed),
            set(&round.helpers),
            set(&round.newcomers)
        );
    }
    if inst.rounds.is_empty() {
        out.push_str("  no repair rounds\n");
    }
    out
}

pub fn labels(v: &[String]) -> String {
    v.join(" ")
}
