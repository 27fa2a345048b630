//! Rescue scenarios: random geometric graphs with victims and rescuers.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domains::{Domain, NodeId, NodeOrder, Value};
use crate::field::{CapRegistry, CapSpec, Field, FieldError};

/// Side of the square landmarks are drawn in.
const SIDE: f64 = 1000.0;
const MAX_DRAWS: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScenarioError {
    #[error("{landmarks} landmarks cannot host {victims} victims and {rescuers} rescuers")]
    TooFew { landmarks: usize, victims: usize, rescuers: usize },
    #[error("no connected graph in {0} draws")]
    Disconnected(usize),
    #[error("edge ({0},{1}) has zero weight")]
    ZeroWeight(usize, usize),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub field: Field,
    /// Landmark coordinates; empty for hand-built scenarios.
    pub positions: Vec<(f64, f64)>,
    /// Weight of each field edge, in edge order.
    pub weights: Vec<u64>,
    /// Victim node to the number of rescuers it needs.
    pub victims: BTreeMap<usize, u32>,
    pub rescuers: BTreeSet<usize>,
}

/// A scenario over nodes named `0..n` with the given weighted edges.
pub fn build_field(
    n: usize,
    edges: &[(usize, usize, u64)],
    victims: &BTreeMap<usize, u32>,
    rescuers: &BTreeSet<usize>,
) -> Result<Scenario, ScenarioError> {
    let names: Vec<NodeId> = (0..n).map(|k| NodeId::new(&k.to_string())).collect();
    let order = Arc::new(NodeOrder::new(names));
    let mut field = Field::new(order.clone(), edges.iter().map(|&(a, b, _)| (a, b)).collect())?;
    if let Some(&(a, b, _)) = edges.iter().find(|e| e.2 == 0) {
        return Err(ScenarioError::ZeroWeight(a, b));
    }
    let flag = |set: &dyn Fn(usize) -> bool| (0..n).map(|k| Value::Bool(set(k))).collect::<Vec<_>>();
    field.set_node_label("victim", Domain::Bool, flag(&|k| victims.contains_key(&k)))?;
    field.set_node_label("rescuer", Domain::Bool, flag(&|k| rescuers.contains(&k)))?;
    let need = (0..n).map(|k| Value::num(victims.get(&k).copied().unwrap_or(0).into())).collect();
    field.set_node_label("howMany", Domain::Cost, need)?;
    let reg = CapRegistry::builtin();
    let dist = Domain::lex(Domain::Cost, Domain::Nodes(order));
    let hops = edges.iter().map(|e| CapSpec::new("next_hop", &[&e.2.to_string()])).collect();
    field.set_edge_label("dst", dist, hops, &reg)?;
    let sets = Domain::PowerSet { universe: None };
    field.set_edge_label("grd", sets.clone(), vec![CapSpec::new("dst_gradient", &["D"]); edges.len()], &reg)?;
    field.set_edge_label("cgr", sets, vec![CapSpec::new("cogradient", &[]); edges.len()], &reg)?;
    Ok(Scenario {
        field,
        positions: Vec::new(),
        weights: edges.iter().map(|e| e.2).collect(),
        victims: victims.clone(),
        rescuers: rescuers.clone(),
    })
}

/// Connection radius at which a random geometric graph on `n` points is
/// connected with high probability.
fn radius(n: usize) -> f64 {
    if n < 2 {
        return SIDE;
    }
    let n = n as f64;
    SIDE * (1.5 * n.ln() / (std::f64::consts::PI * n)).sqrt()
}

fn connected(n: usize, edges: &[(usize, usize, u64)]) -> bool {
    if n == 0 {
        return true;
    }
    let mut adj = vec![Vec::new(); n];
    for &(a, b, _) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if !std::mem::replace(&mut seen[y], true) {
                queue.push_back(y);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// A connected random geometric graph on `landmarks` points with edges in
/// both directions weighted by rounded-up distance. `victims` lists how many
/// rescuers each victim needs; victims and rescuers occupy distinct
/// landmarks.
pub fn gen_scenario(landmarks: usize, victims: &[u32], rescuers: usize, seed: u64) -> Result<Scenario, ScenarioError> {
    if victims.len() + rescuers > landmarks {
        return Err(ScenarioError::TooFew { landmarks, victims: victims.len(), rescuers });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = radius(landmarks);
    for _ in 0..MAX_DRAWS {
        let pos: Vec<(f64, f64)> = (0..landmarks).map(|_| (rng.random_range(0.0..SIDE), rng.random_range(0.0..SIDE))).collect();
        let mut edges = Vec::new();
        for a in 0..landmarks {
            for b in a + 1..landmarks {
                let d = (pos[a].0 - pos[b].0).hypot(pos[a].1 - pos[b].1);
                if d <= r {
                    let w = (d.ceil() as u64).max(1);
                    edges.push((a, b, w));
                    edges.push((b, a, w));
                }
            }
        }
        if !connected(landmarks, &edges) {
            continue;
        }
        let mut nodes: Vec<usize> = (0..landmarks).collect();
        nodes.shuffle(&mut rng);
        let vs = nodes.iter().zip(victims).map(|(&k, &need)| (k, need)).collect();
        let rs = nodes[victims.len()..victims.len() + rescuers].iter().copied().collect();
        let mut s = build_field(landmarks, &edges, &vs, &rs)?;
        s.positions = pos;
        return Ok(s);
    }
    Err(ScenarioError::Disconnected(MAX_DRAWS))
}
