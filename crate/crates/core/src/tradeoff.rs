//! Storage vs. repair-transmission bandwidth.
//!
//! Repair-transmission bandwidth `τ` counts packets actually sent per
//! newcomer. Under broadcast each of the `d` helpers sends `β` packets once
//! for all `r` newcomers, so `τ = dβ/r`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::bound::profile_forms;
use crate::error::{Error, Result};
use crate::frac::{decimal, format_q, qi, LinearForm, Q};
use crate::model::SystemParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Broadcast,
    Cooperative,
}

/// A `(τ, α)` point; `beta` is present for broadcast points, with `τ = dβ/r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TradeoffPoint {
    #[serde(with = "crate::frac::serde_q")]
    pub tau: Q,
    #[serde(with = "crate::frac::serde_q")]
    pub alpha: Q,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_opt_q")]
    pub beta: Option<Q>,
}

fn ser_opt_q<S: serde::Serializer>(v: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(q) => s.serialize_str(&format_q(q)),
        None => s.serialize_none(),
    }
}

impl TradeoffPoint {
    pub fn broadcast(d: usize, r: usize, alpha: Q, beta: Q) -> Self {
        TradeoffPoint { tau: tau(d, r, beta), alpha, beta: Some(beta) }
    }
}

fn tau(d: usize, r: usize, beta: Q) -> Q {
    beta * qi(d as i128) / qi(r as i128)
}

/// `τ = dβ/r`.
pub fn tau_of(p: &SystemParams) -> Q {
    tau(p.d, p.r, p.beta)
}

fn check_endpoint_args(k: usize, d: usize, r: usize) -> Result<()> {
    if d < k || r == 0 || k == 0 {
        return Err(Error::Precondition(format!("need d >= k >= 1 and r >= 1 (k={k}, d={d}, r={r})")));
    }
    Ok(())
}

/// The comparison with cooperative repair is stated for `k = ur` with `u > 1`.
pub fn comparison_warning(k: usize, r: usize) -> Option<String> {
    (r == 0 || k % r != 0 || k / r < 2)
        .then(|| format!("k={k} is not an integer multiple u*r with u > 1 (r={r})"))
}

/// Minimum-storage end of the curve for file size `file_size`.
pub fn ms_point(scheme: Scheme, k: usize, d: usize, r: usize, file_size: Q) -> Result<TradeoffPoint> {
    check_endpoint_args(k, d, r)?;
    let denom = d + r - k;
    if denom == 0 {
        return Err(Error::Precondition("d + r - k must be positive".into()));
    }
    let alpha = file_size / qi(k as i128);
    let (num, beta) = match scheme {
        Scheme::Broadcast => {
            (d, Some(file_size * qi(r as i128) / qi((k * denom) as i128)))
        }
        Scheme::Cooperative => (d + r - 1, None),
    };
    let tau = file_size * qi(num as i128) / qi((k * denom) as i128);
    Ok(TradeoffPoint { tau, alpha, beta })
}

/// Minimum-bandwidth end of the curve, where `τ = α`.
pub fn mt_point(scheme: Scheme, k: usize, d: usize, r: usize, file_size: Q) -> Result<TradeoffPoint> {
    check_endpoint_args(k, d, r)?;
    let denom = 2 * d + r - k;
    let (num, beta) = match scheme {
        Scheme::Broadcast => {
            (2 * d, Some(file_size * qi((2 * r) as i128) / qi((k * denom) as i128)))
        }
        Scheme::Cooperative => (2 * d + r - 1, None),
    };
    let v = file_size * qi(num as i128) / qi((k * denom) as i128);
    Ok(TradeoffPoint { tau: v, alpha: v, beta })
}

#[derive(Debug, Clone, Serialize)]
pub struct DominanceReport {
    pub ms_broadcast: TradeoffPoint,
    pub ms_cooperative: TradeoffPoint,
    pub mt_broadcast: TradeoffPoint,
    pub mt_cooperative: TradeoffPoint,
    #[serde(with = "crate::frac::serde_q")]
    pub ms_gap: Q,
    #[serde(with = "crate::frac::serde_q")]
    pub mt_gap: Q,
    /// Broadcast needs strictly less bandwidth at both ends.
    pub broadcast_dominates: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// Compares the two schemes at both ends of the curve.
pub fn dominance_report(k: usize, d: usize, r: usize, file_size: Q) -> Result<DominanceReport> {
    let ms_broadcast = ms_point(Scheme::Broadcast, k, d, r, file_size)?;
    let ms_cooperative = ms_point(Scheme::Cooperative, k, d, r, file_size)?;
    let mt_broadcast = mt_point(Scheme::Broadcast, k, d, r, file_size)?;
    let mt_cooperative = mt_point(Scheme::Cooperative, k, d, r, file_size)?;
    let ms_gap = ms_cooperative.tau - ms_broadcast.tau;
    let mt_gap = mt_cooperative.tau - mt_broadcast.tau;
    let zero = qi(0);
    Ok(DominanceReport {
        ms_broadcast,
        ms_cooperative,
        mt_broadcast,
        mt_cooperative,
        broadcast_dominates: ms_gap > zero && mt_gap > zero,
        ms_gap,
        mt_gap,
        warning: comparison_warning(k, r),
    })
}

#[derive(Debug, Clone)]
pub enum Grid {
    /// At least 33 evenly spaced β between the two ends plus every breakpoint.
    Auto,
    Betas(Vec<Q>),
}

#[derive(Debug, Clone, Serialize)]
pub struct Curve {
    pub params: SystemParams,
    #[serde(with = "crate::frac::serde_q")]
    pub file_size: Q,
    /// Sorted by increasing β, so `α` is nonincreasing along the list.
    pub points: Vec<TradeoffPoint>,
    pub forms: Vec<LinearForm>,
    pub mt: TradeoffPoint,
    pub ms: TradeoffPoint,
}

/// The envelope `α(β) = min{α : a·α + b·β >= B for every form}`.
///
/// `None` when a form without α term already falls short of `B`.
pub fn alpha_for_beta(forms: &[LinearForm], file_size: Q, beta: Q) -> Option<Q> {
    let mut alpha = qi(0);
    for f in forms {
        let rest = file_size - beta * qi(f.b as i128);
        if f.a == 0 {
            if rest > qi(0) {
                return None;
            }
        } else {
            alpha = alpha.max(rest / qi(f.a as i128));
        }
    }
    Some(alpha)
}

/// Smallest β at which some α meets the file size.
fn min_beta(forms: &[LinearForm], file_size: Q) -> Q {
    forms
        .iter()
        .filter(|f| f.a == 0 && f.b > 0)
        .map(|f| file_size / qi(f.b as i128))
        .max()
        .unwrap_or(qi(0))
}

/// Smallest β at which `α(β)` reaches `B/k`.
fn storage_beta(forms: &[LinearForm], k: usize, file_size: Q) -> Q {
    let k = k as u64;
    forms
        .iter()
        .filter(|f| f.a < k && f.b > 0)
        .map(|f| file_size * qi((k - f.a) as i128) / qi((k * f.b) as i128))
        .max()
        .unwrap_or(qi(0))
}

/// Sweeps `α(β)` from the bound's linear forms (α and β in `p` are ignored).
pub fn sweep_curve(p: &SystemParams, file_size: Q, grid: &Grid) -> Result<Curve> {
    p.check()?;
    if file_size < qi(0) {
        return Err(Error::Precondition("file size must be nonnegative".into()));
    }
    let forms = profile_forms(p, crate::bound::effective_horizon(p));
    let lo = min_beta(&forms, file_size);
    let hi = storage_beta(&forms, p.k, file_size).max(lo);
    let point_at = |beta: Q| -> Result<TradeoffPoint> {
        let alpha = alpha_for_beta(&forms, file_size, beta).ok_or_else(|| {
            Error::Infeasible(format!("beta = {beta} is below the feasible range (min {lo})"))
        })?;
        Ok(TradeoffPoint::broadcast(p.d, p.r, alpha, beta))
    };

    let mut betas = match grid {
        Grid::Betas(v) => v.clone(),
        Grid::Auto => {
            let steps = 32;
            let mut v: Vec<Q> =
                (0..=steps).map(|i| lo + (hi - lo) * qi(i) / qi(steps)).collect();
            v.extend(breakpoints(&forms, file_size, lo, hi));
            v
        }
    };
    betas.sort();
    betas.dedup();
    let points = betas.into_iter().map(point_at).collect::<Result<Vec<_>>>()?;
    Ok(Curve { params: p.clone(), file_size, mt: point_at(lo)?, ms: point_at(hi)?, points, forms })
}

/// β values strictly inside `(lo, hi)` where the active form of `α(β)` changes.
fn breakpoints(forms: &[LinearForm], file_size: Q, lo: Q, hi: Q) -> Vec<Q> {
    let line = |f: &LinearForm, beta: Q| (file_size - beta * qi(f.b as i128)) / qi(f.a as i128);
    let slanted: Vec<&LinearForm> = forms.iter().filter(|f| f.a > 0).collect();
    let mut out = Vec::new();
    for (i, f) in slanted.iter().enumerate() {
        for g in &slanted[i + 1..] {
            // (B - b1 β)/a1 = (B - b2 β)/a2
            let denom = qi(f.b as i128) * qi(g.a as i128) - qi(g.b as i128) * qi(f.a as i128);
            if denom == qi(0) {
                continue;
            }
            let beta = file_size * (qi(g.a as i128) - qi(f.a as i128)) / denom;
            if beta > lo && beta < hi {
                if let Some(alpha) = alpha_for_beta(forms, file_size, beta) {
                    if alpha == line(f, beta) {
                        out.push(beta);
                    }
                }
            }
        }
    }
    out
}

impl Curve {
    /// Delimiter-separated rows: a `#` parameter line, a column header, then one row per point.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let p = &self.params;
        let _ = writeln!(
            out,
            "# n={} k={} d={} r={} T={} B={}",
            p.n,
            p.k,
            p.d,
            p.r,
            p.t,
            format_q(&self.file_size)
        );
        out.push_str(CSV_HEADER);
        for pt in &self.points {
            out.push_str(&csv_row("broadcast", pt));
        }
        out
    }
}

pub const CSV_HEADER: &str = "series,tau,alpha,beta,tau_decimal,alpha_decimal,beta_decimal\n";

pub fn csv_row(series: &str, pt: &TradeoffPoint) -> String {
    let (beta, beta_dec) = match &pt.beta {
        Some(b) => (format_q(b), decimal(b)),
        None => (String::new(), String::new()),
    };
    format!(
        "{series},{},{},{beta},{},{},{beta_dec}\n",
        format_q(&pt.tau),
        format_q(&pt.alpha),
        decimal(&pt.tau),
        decimal(&pt.alpha),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound::c_lb;
    use crate::frac::q;

    fn fig4() -> SystemParams {
        SystemParams::new(15, 4, 9, 2, qi(1), qi(1), 6)
    }

    #[test]
    fn tau_examples() {
        let p = SystemParams::new(8, 3, 4, 2, qi(1), qi(1), 2);
        assert_eq!(tau_of(&p), qi(2));
        let p = SystemParams::new(15, 4, 9, 2, qi(1), q(1, 14), 6);
        assert_eq!(tau_of(&p), q(9, 28));
        assert_eq!(tau_of(&p.with_capacities(qi(1), qi(0))), qi(0));
    }

    #[test]
    fn endpoint_formulas() {
        let one = qi(1);
        let ms_b = ms_point(Scheme::Broadcast, 4, 9, 2, one).unwrap();
        assert_eq!((ms_b.tau, ms_b.alpha), (q(9, 28), q(1, 4)));
        assert_eq!(ms_b.beta, Some(q(1, 14)));
        let ms_c = ms_point(Scheme::Cooperative, 4, 9, 2, one).unwrap();
        assert_eq!((ms_c.tau, ms_c.alpha), (q(5, 14), q(1, 4)));
        let mt_b = mt_point(Scheme::Broadcast, 4, 9, 2, one).unwrap();
        assert_eq!((mt_b.tau, mt_b.alpha), (q(9, 32), q(9, 32)));
        assert_eq!(mt_b.beta, Some(q(1, 16)));
        let mt_c = mt_point(Scheme::Cooperative, 4, 9, 2, one).unwrap();
        assert_eq!((mt_c.tau, mt_c.alpha), (q(19, 64), q(19, 64)));
    }

    #[test]
    fn single_failure_schemes_coincide() {
        for (k, d) in [(2, 3), (3, 5), (4, 4)] {
            let b = ms_point(Scheme::Broadcast, k, d, 1, qi(1)).unwrap();
            let c = ms_point(Scheme::Cooperative, k, d, 1, qi(1)).unwrap();
            assert_eq!((b.tau, b.alpha), (c.tau, c.alpha));
            let b = mt_point(Scheme::Broadcast, k, d, 1, qi(1)).unwrap();
            let c = mt_point(Scheme::Cooperative, k, d, 1, qi(1)).unwrap();
            assert_eq!((b.tau, b.alpha), (c.tau, c.alpha));
        }
        let rep = dominance_report(3, 4, 1, qi(1)).unwrap();
        assert_eq!((rep.ms_gap, rep.mt_gap), (qi(0), qi(0)));
        assert!(!rep.broadcast_dominates);
    }

    #[test]
    fn dominance_for_figure4() {
        let rep = dominance_report(4, 9, 2, qi(1)).unwrap();
        assert_eq!(rep.ms_gap, q(1, 28));
        assert_eq!(rep.mt_gap, q(1, 64));
        assert!(rep.broadcast_dominates);
        assert!(rep.warning.is_none());
        assert!(dominance_report(3, 4, 2, qi(1)).unwrap().warning.is_some());
    }

    #[test]
    fn sweep_hits_both_endpoints() {
        let curve = sweep_curve(&fig4(), qi(1), &Grid::Auto).unwrap();
        assert!(curve.points.len() >= 33);
        assert_eq!((curve.ms.tau, curve.ms.alpha), (q(9, 28), q(1, 4)));
        assert_eq!((curve.mt.tau, curve.mt.alpha), (q(9, 32), q(9, 32)));
        assert_eq!(curve.points.first(), Some(&curve.mt));
        assert_eq!(curve.points.last(), Some(&curve.ms));
    }

    #[test]
    fn sweep_points_sit_on_the_bound() {
        let p = fig4();
        let curve = sweep_curve(&p, qi(1), &Grid::Auto).unwrap();
        let eps = q(1, 1_000_000);
        for pt in &curve.points {
            let beta = pt.beta.unwrap();
            assert_eq!(c_lb(&p.with_capacities(pt.alpha, beta)).unwrap().value, qi(1));
            assert!(c_lb(&p.with_capacities(pt.alpha - eps, beta)).unwrap().value < qi(1));
        }
    }

    #[test]
    fn storage_limited_and_empty_file() {
        let p = fig4();
        let c = sweep_curve(&p, qi(1), &Grid::Betas(vec![qi(1)])).unwrap();
        assert_eq!(c.points[0].alpha, q(1, 4));
        let c = sweep_curve(&p, qi(0), &Grid::Betas(vec![q(1, 100), qi(1)])).unwrap();
        assert!(c.points.iter().all(|pt| pt.alpha == qi(0)));
        assert!(matches!(
            sweep_curve(&p, qi(1), &Grid::Betas(vec![q(1, 17)])),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn csv_layout() {
        let c = sweep_curve(&fig4(), qi(1), &Grid::Betas(vec![q(1, 14)])).unwrap();
        let csv = c.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# n=15 k=4 d=9 r=2 T=6 B=1");
        assert_eq!(lines[1], CSV_HEADER.trim_end());
        assert_eq!(lines[2], "broadcast,9/28,1/4,1/14,0.321428571429,0.25,0.0714285714286");
    }
}
