//! Reference implementations kept deliberately naive.
#![allow(dead_code)]

use std::collections::VecDeque;

use num_traits::Zero;
use wdss_core::{Capacity, FlowGraph, Q};

/// Minimum cut capacity over every vertex subset holding the source and not
/// the sink. `None` when every cut is infinite.
pub fn brute_force_min_cut(g: &FlowGraph) -> Option<Q> {
    let n = g.vertex_count();
    let (s, t) = (g.source(), g.sink());
    let free: Vec<usize> = (0..n).filter(|&v| v != s && v != t).collect();
    assert!(free.len() <= 24, "brute force over {} vertices", free.len());
    // integer weights over a common denominator; -1 marks an infinite edge
    let caps: Vec<Option<Q>> = g.edges().iter().map(|e| g.capacity(e).finite()).collect();
    let denom = caps.iter().flatten().fold(1i128, |acc, c| num_integer::lcm(acc, *c.denom()));
    let edges: Vec<(usize, usize, i128)> = g
        .edges()
        .iter()
        .zip(&caps)
        .map(|(e, c)| (e.from, e.to, c.map_or(-1, |c| (c * Q::from_integer(denom)).to_integer())))
        .collect();
    let mut best: Option<i128> = None;
    let mut side = vec![false; n];
    side[s] = true;
    'masks: for mask in 0u64..(1u64 << free.len()) {
        for (i, &v) in free.iter().enumerate() {
            side[v] = mask >> i & 1 == 1;
        }
        let mut total = 0i128;
        for &(u, v, c) in &edges {
            if side[u] && !side[v] {
                if c < 0 {
                    continue 'masks;
                }
                total += c;
            }
        }
        if best.map_or(true, |b| total < b) {
            best = Some(total);
        }
    }
    best.map(|b| Q::new(b, denom))
}

/// Edmonds-Karp on rationals over an adjacency matrix. Infinite edges get a
/// capacity above the sum of all finite ones.
pub fn edmonds_karp(g: &FlowGraph) -> Q {
    let n = g.vertex_count();
    let finite_sum: Q = g.edges().iter().filter_map(|e| g.capacity(e).finite()).sum();
    let big = finite_sum + Q::from_integer(1);
    let mut cap = vec![vec![Q::zero(); n]; n];
    for e in g.edges() {
        let c = match g.capacity(e) {
            Capacity::Finite(c) => c,
            Capacity::Infinite => big,
        };
        cap[e.from][e.to] += c;
    }
    let (s, t) = (g.source(), g.sink());
    let mut flow = Q::zero();
    loop {
        let mut prev = vec![usize::MAX; n];
        prev[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if prev[v] == usize::MAX && cap[u][v] > Q::zero() {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if prev[t] == usize::MAX {
            return flow;
        }
        let mut push = big;
        let mut v = t;
        while v != s {
            let u = prev[v];
            push = push.min(cap[u][v]);
            v = u;
        }
        let mut v = t;
        while v != s {
            let u = prev[v];
            cap[u][v] -= push;
            cap[v][u] += push;
            v = u;
        }
        flow += push;
    }
}

/// Exhaustive minimization of the bound straight from its definition: every
/// subset `T1` of the rounds and every `x0`, `x_s` in range.
pub fn bound_by_definition(n: usize, k: usize, d: usize, r: usize, t: usize, alpha: Q, beta: Q) -> Q {
    let mut best: Option<Q> = None;
    for mask in 0u32..(1 << t) {
        let storing: Vec<usize> = (1..=t).filter(|s| mask >> (s - 1) & 1 == 1).collect();
        let combos = (r + 1).pow(storing.len() as u32);
        for x0 in 0..=n {
            for code in 0..combos {
                let mut xs = vec![None; t + 1];
                let mut c = code;
                for &s in &storing {
                    xs[s] = Some(c % (r + 1));
                    c /= r + 1;
                }
                let mut m = x0;
                let mut value = Q::from_integer(x0 as i128) * alpha;
                for x in xs.iter().skip(1) {
                    match x {
                        Some(x) => {
                            value += Q::from_integer(*x as i128) * alpha;
                            m += x;
                        }
                        None => {
                            value += Q::from_integer(d.saturating_sub(m) as i128) * beta;
                            m += r;
                        }
                    }
                }
                if m >= k && m <= k + r && best.map_or(true, |b| value < b) {
                    best = Some(value);
                }
            }
        }
    }
    best.expect("some profile is feasible")
}
