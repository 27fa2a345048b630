//! Brute-force restatement of the rescue rounds on plain integers: Dijkstra
//! from the victims, next hops by least node index, and candidate ranking by
//! (cost, path length, path).

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use super::{Assignment, Scenario};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleOutcome {
    pub assignment: Assignment,
    pub saved: BTreeSet<String>,
    pub unsaved: BTreeSet<String>,
    /// Rounds run, the last of which saved nobody.
    pub rounds: usize,
}

/// Distance from every node to its closest victim along edge directions.
fn distances(n: usize, rev: &[Vec<(usize, u64)>], victims: &BTreeSet<usize>) -> Vec<Option<u64>> {
    let mut dist = vec![None; n];
    let mut heap: BinaryHeap<Reverse<(u64, usize)>> = victims.iter().map(|&v| Reverse((0, v))).collect();
    while let Some(Reverse((d, x))) = heap.pop() {
        if dist[x].is_some() {
            continue;
        }
        dist[x] = Some(d);
        for &(y, w) in &rev[x] {
            if dist[y].is_none() {
                heap.push(Reverse((d + w, y)));
            }
        }
    }
    dist
}

pub fn oracle_assignment(s: &Scenario) -> OracleOutcome {
    let f = &s.field;
    let n = f.node_count();
    let name = |k: usize| f.node_name(k).to_string();
    let mut out_adj: Vec<Vec<(usize, u64)>> = vec![Vec::new(); n];
    let mut rev: Vec<Vec<(usize, u64)>> = vec![Vec::new(); n];
    for (e, &(a, b)) in f.edges().iter().enumerate() {
        out_adj[a].push((b, s.weights[e]));
        rev[b].push((a, s.weights[e]));
    }
    let mut victims: BTreeSet<usize> = s.victims.keys().copied().collect();
    let mut rescuers = s.rescuers.clone();
    let mut assignment = Assignment::new();
    let mut saved = BTreeSet::new();
    let mut rounds = 0;
    loop {
        rounds += 1;
        let dist = distances(n, &rev, &victims);
        let next = |x: usize| -> usize {
            if victims.contains(&x) {
                return x;
            }
            let d = dist[x].expect("only reachable nodes have a next hop");
            out_adj[x]
                .iter()
                .filter(|&&(y, w)| dist[y].is_some_and(|dy| dy + w == d))
                .map(|&(y, _)| y)
                .min()
                .expect("a shortest path leaves every reachable node")
        };
        // Candidates per victim: (cost, route from the rescuer, rescuer).
        let mut cands: BTreeMap<usize, Vec<(u64, Vec<usize>, usize)>> = BTreeMap::new();
        for &r in &rescuers {
            let Some(cost) = dist[r] else { continue };
            let mut route = vec![r];
            let mut x = r;
            while !victims.contains(&x) {
                x = next(x);
                route.push(x);
            }
            let v = route.pop().expect("route ends at the victim");
            cands.entry(v).or_default().push((cost, route, r));
        }
        let mut retired_victims = BTreeSet::new();
        let mut retired_rescuers = BTreeSet::new();
        for (&v, list) in cands.iter_mut() {
            let need = s.victims[&v] as usize;
            if list.len() < need {
                continue;
            }
            // Paths as the program stores them: nearest hop first.
            list.sort_by(|a, b| {
                let ka = (a.0, a.1.len(), a.1.iter().rev().collect::<Vec<_>>());
                let kb = (b.0, b.1.len(), b.1.iter().rev().collect::<Vec<_>>());
                ka.cmp(&kb)
            });
            retired_victims.insert(v);
            if need == 0 {
                continue;
            }
            let chosen = assignment.entry(name(v)).or_default();
            for (_, route, r) in list.iter().take(need) {
                chosen.insert(name(*r));
                retired_rescuers.extend(route.iter().copied());
            }
        }
        // A victim needing nobody is saved as soon as it is considered.
        for (&v, &need) in &s.victims {
            if need == 0 && victims.contains(&v) {
                retired_victims.insert(v);
            }
        }
        if retired_victims.is_empty() {
            break;
        }
        for v in &retired_victims {
            victims.remove(v);
            saved.insert(name(*v));
        }
        rescuers.retain(|r| !retired_rescuers.contains(r));
    }
    let unsaved = victims.iter().map(|&v| name(v)).collect();
    OracleOutcome { assignment, saved, unsaved, rounds }
}
