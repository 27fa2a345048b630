//! Strategy generators. Fairness is built in: every generator declares a
//! window within which each node is active at least once.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Pattern, StrategyError};

#[derive(Debug, Clone, PartialEq)]
pub enum StrategyKind {
    /// Step `k` activates every node but `k mod n`.
    RoundRobinSkip,
    /// Each node is active with probability `p`; a node idle for a whole
    /// window minus one step is forced active.
    Random { seed: u64, p: f64 },
    /// The given patterns, repeated cyclically.
    Explicit(Vec<Pattern>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Strategy {
    nodes: usize,
    kind: StrategyKind,
    window: usize,
}

impl Strategy {
    /// Every node at every step; the synchronous iteration.
    pub fn synchronous(nodes: usize) -> Self {
        Strategy { nodes, kind: StrategyKind::Explicit(vec![Pattern::all(nodes)]), window: 1 }
    }

    pub fn round_robin_skip(nodes: usize) -> Self {
        let window = if nodes > 1 { 2 } else { 1 };
        Strategy { nodes, kind: StrategyKind::RoundRobinSkip, window }
    }

    pub fn random(nodes: usize, seed: u64, p: f64) -> Self {
        let p = p.clamp(0.01, 1.0);
        let window = ((2.0 / p).ceil() as usize).clamp(2, 64);
        Strategy { nodes, kind: StrategyKind::Random { seed, p }, window }
    }

    /// A cyclic list of patterns; rejected unless every node fires in it.
    pub fn explicit(nodes: usize, patterns: Vec<Pattern>) -> Result<Self, StrategyError> {
        if let Some(n) = patterns.iter().flat_map(|p| p.0.iter()).find(|&&n| n >= nodes) {
            return Err(StrategyError::BadPattern { node: *n, nodes });
        }
        if let Some(n) = (0..nodes).find(|n| !patterns.iter().any(|p| p.contains(*n))) {
            return Err(StrategyError::Unfair(n));
        }
        let window = patterns.len().max(1);
        let patterns = if patterns.is_empty() { vec![Pattern::default()] } else { patterns };
        Ok(Strategy { nodes, kind: StrategyKind::Explicit(patterns), window })
    }

    pub fn kind(&self) -> &StrategyKind {
        &self.kind
    }

    /// Steps within which every node is active at least once.
    pub fn window(&self) -> usize {
        self.window
    }

    /// The infinite pattern sequence.
    pub fn patterns(&self) -> Box<dyn Iterator<Item = Pattern> + '_> {
        let n = self.nodes;
        match &self.kind {
            StrategyKind::RoundRobinSkip => Box::new((0..).map(move |k: usize| {
                if n <= 1 {
                    Pattern::all(n)
                } else {
                    (0..n).filter(|m| *m != k % n).collect()
                }
            })),
            StrategyKind::Explicit(ps) => Box::new(ps.iter().cloned().cycle()),
            StrategyKind::Random { seed, p } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let mut idle = vec![0usize; n];
                let (p, window) = (*p, self.window);
                Box::new(std::iter::from_fn(move || {
                    let mut pi = Pattern::default();
                    for (m, idle) in idle.iter_mut().enumerate() {
                        if *idle + 1 >= window || rng.random_bool(p) {
                            pi.0.insert(m);
                            *idle = 0;
                        } else {
                            *idle += 1;
                        }
                    }
                    Some(pi)
                }))
            }
        }
    }
}
