//! Brute-force oracles shared by the integration suites and the acceptance
//! harness. Everything here works on plain integers and bit masks.

#![allow(dead_code)]

pub mod hoare;
pub mod laws;

use std::collections::VecDeque;

use smuc::domains::{Domain, Value};
use smuc::field::{CapRegistry, CapSpec, Field};

/// A boolean field on nodes `0..n` with a single label `i`.
pub fn bool_field(n: usize, edges: &[(usize, usize)], labels: &[(&str, u32)]) -> Field {
    let names: Vec<String> = (0..n).map(|k| k.to_string()).collect();
    let named: Vec<(String, String)> = edges.iter().map(|&(a, b)| (a.to_string(), b.to_string())).collect();
    let mut f = Field::from_names(&names, &named).unwrap();
    for &(label, mask) in labels {
        f.set_node_label(label, Domain::Bool, (0..n).map(|k| Value::Bool(mask & (1 << k) != 0)).collect()).unwrap();
    }
    f
}

/// Every edge subset of the complete graph with self loops on `n` nodes.
pub fn all_edge_sets(n: usize) -> impl Iterator<Item = Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    (0u32..1 << pairs.len()).map(move |m| (0..pairs.len()).filter(|k| m & (1 << k) != 0).map(|k| pairs[k]).collect())
}

pub fn mask_of(values: &[Value]) -> u32 {
    values.iter().enumerate().filter(|(_, v)| **v == Value::Bool(true)).fold(0, |m, (k, _)| m | 1 << k)
}

/// Least and greatest solutions of `z = step(z)` over all `2^n` masks;
/// `None` if the fixpoints have no least (greatest) element.
pub fn extreme_fixpoints(n: usize, step: impl Fn(u32) -> u32) -> (Option<u32>, Option<u32>) {
    let fixed: Vec<u32> = (0u32..1 << n).filter(|&z| step(z) == z).collect();
    let least = fixed.iter().copied().find(|&a| fixed.iter().all(|&b| a & !b == 0));
    let greatest = fixed.iter().copied().find(|&a| fixed.iter().all(|&b| b & !a == 0));
    (least, greatest)
}

pub fn out_any(edges: &[(usize, usize)], z: u32, node: usize) -> bool {
    edges.iter().any(|&(a, b)| a == node && z & (1 << b) != 0)
}

pub fn out_all(edges: &[(usize, usize)], z: u32, node: usize) -> bool {
    edges.iter().filter(|&&(a, _)| a == node).all(|&(_, b)| z & (1 << b) != 0)
}

pub fn in_any(edges: &[(usize, usize)], z: u32, node: usize) -> bool {
    edges.iter().any(|&(a, b)| b == node && z & (1 << a) != 0)
}

/// A boolean formula with a brute-force one-step semantics.
pub struct BoolCase {
    pub text: &'static str,
    pub greatest: bool,
    pub step: fn(usize, &[(usize, usize)], u32, u32) -> u32,
}

fn pointwise(n: usize, f: impl Fn(usize) -> bool) -> u32 {
    (0..n).filter(|&k| f(k)).fold(0, |m, k| m | 1 << k)
}

pub fn bool_cases() -> Vec<BoolCase> {
    vec![
        BoolCase {
            text: "mu z. or(i, <out:or> z)",
            greatest: false,
            step: |n, e, i, z| pointwise(n, |k| i & (1 << k) != 0 || out_any(e, z, k)),
        },
        BoolCase {
            text: "mu z. or(i, <in:or> z)",
            greatest: false,
            step: |n, e, i, z| pointwise(n, |k| i & (1 << k) != 0 || in_any(e, z, k)),
        },
        BoolCase {
            text: "mu z. or(i, <out:and> z)",
            greatest: false,
            step: |n, e, i, z| pointwise(n, |k| i & (1 << k) != 0 || out_all(e, z, k)),
        },
        BoolCase {
            text: "mu z. or(i, and(<out:or> z, <in:or> z))",
            greatest: false,
            step: |n, e, i, z| pointwise(n, |k| i & (1 << k) != 0 || (out_any(e, z, k) && in_any(e, z, k))),
        },
        BoolCase {
            text: "nu z. and(i, <out:or> z)",
            greatest: true,
            step: |n, e, i, z| pointwise(n, |k| i & (1 << k) != 0 && out_any(e, z, k)),
        },
        BoolCase {
            text: "nu z. and(i, <out:and> z)",
            greatest: true,
            step: |n, e, i, z| pointwise(n, |k| i & (1 << k) != 0 && out_all(e, z, k)),
        },
    ]
}

/// Nodes from which some node of `target` is reachable through nodes of
/// `through` (targets themselves always count).
pub fn reach_through(n: usize, edges: &[(usize, usize)], through: u32, target: u32) -> u32 {
    let mut seen = target;
    let mut queue: VecDeque<usize> = (0..n).filter(|k| target & (1 << k) != 0).collect();
    while let Some(x) = queue.pop_front() {
        for &(a, b) in edges {
            if b == x && through & (1 << a) != 0 && seen & (1 << a) == 0 {
                seen |= 1 << a;
                queue.push_back(a);
            }
        }
    }
    seen
}

/// Nodes of `allowed` with an infinite path inside `allowed`.
pub fn infinite_inside(n: usize, edges: &[(usize, usize)], allowed: u32) -> u32 {
    let mut keep = allowed;
    loop {
        let next = pointwise(n, |k| keep & (1 << k) != 0 && out_any(edges, keep, k));
        if next == keep {
            return keep;
        }
        keep = next;
    }
}

/// A cost field: `i` is 0 at targets and infinite elsewhere, and edge label
/// `alpha` adds the edge weight.
pub fn cost_field(n: usize, edges: &[(usize, usize, u64)], targets: u32) -> Field {
    let names: Vec<String> = (0..n).map(|k| k.to_string()).collect();
    let named: Vec<(String, String)> = edges.iter().map(|&(a, b, _)| (a.to_string(), b.to_string())).collect();
    let mut f = Field::from_names(&names, &named).unwrap();
    let i = (0..n).map(|k| if targets & (1 << k) != 0 { Value::num(0) } else { Value::inf() }).collect();
    f.set_node_label("i", Domain::Cost, i).unwrap();
    let caps = edges.iter().map(|e| CapSpec::new("add", &[&e.2.to_string()])).collect();
    f.set_edge_label("alpha", Domain::Cost, caps, &CapRegistry::builtin()).unwrap();
    f
}

/// Shortest distance from each node to a target along edge directions.
pub fn bellman_ford(n: usize, edges: &[(usize, usize, u64)], targets: u32) -> Vec<Option<u64>> {
    let mut d: Vec<Option<u64>> = (0..n).map(|k| (targets & (1 << k) != 0).then_some(0)).collect();
    for _ in 0..n {
        for &(a, b, w) in edges {
            if let Some(db) = d[b] {
                if d[a].is_none_or(|da| db + w < da) {
                    d[a] = Some(db + w);
                }
            }
        }
    }
    d
}

pub fn cost_value(d: Option<u64>) -> Value {
    d.map_or(Value::inf(), |x| Value::num(x as i64))
}
