//! Asynchronous iteration: applying a fixpoint body to a subset of nodes at a
//! time, under fair strategies and under sequences of transient failures.
//!
//! For ν-fixpoints the seed is the top valuation and chains descend; the code
//! is otherwise shared.

mod gen;

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domains::Value;
use crate::eval::{EvalError, FixpointStep};
use crate::field::lift_order;
use crate::formula::FixKind;

pub use gen::{Strategy, StrategyKind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StrategyError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("no stabilisation within {0} steps")]
    MaxSteps(usize),
    #[error("node {0} never fires in the explicit strategy")]
    Unfair(usize),
    #[error("pattern names node {node} but the field has {nodes} nodes")]
    BadPattern { node: usize, nodes: usize },
    #[error("bad failure event: {0}")]
    BadFailure(String),
}

/// A set of active nodes, by position in the node order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Pattern(pub BTreeSet<usize>);

impl Pattern {
    pub fn all(n: usize) -> Self {
        Pattern((0..n).collect())
    }

    pub fn contains(&self, node: usize) -> bool {
        self.0.contains(&node)
    }
}

impl FromIterator<usize> for Pattern {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Pattern(iter.into_iter().collect())
    }
}

/// One pattern-restricted application: nodes in `pi` take the value of the
/// body evaluated against the whole of `f`, the others keep theirs.
pub fn apply_pattern(step: &FixpointStep<'_>, pi: &Pattern, f: &[Value]) -> Result<Vec<Value>, EvalError> {
    if pi.0.is_empty() {
        return Ok(f.to_vec());
    }
    let next = step.apply(f)?;
    Ok(next
        .into_iter()
        .zip(f)
        .enumerate()
        .map(|(n, (new, old))| if pi.contains(n) { new } else { old.clone() })
        .collect())
}

/// A strategy-restricted run. `rows` starts at the seed and ends with the
/// last valuation that differed from its predecessor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyRun {
    pub rows: Vec<Vec<Value>>,
    /// Steps executed, including the idle window that confirmed stability.
    pub steps: usize,
}

impl StrategyRun {
    pub fn last(&self) -> &[Value] {
        self.rows.last().expect("runs start at the seed")
    }
}

pub fn run_strategy(step: &FixpointStep<'_>, sigma: &Strategy, max_steps: usize) -> Result<StrategyRun, StrategyError> {
    run_failures(step, sigma, &FailureSpec::default(), max_steps)
}

/// Sends `node` back to the value it had after step `to_step` (0 is the
/// seed) at step `step`, provided it is inactive then.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rollback {
    pub step: usize,
    pub node: usize,
    pub to_step: usize,
}

/// Failure events, all at steps no later than `safe_after`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FailureSpec {
    #[serde(default)]
    pub rollbacks: Vec<Rollback>,
    #[serde(default)]
    pub safe_after: usize,
}

impl FailureSpec {
    /// Random rollbacks with probability `rate` per node and step, up to
    /// `safe_after`.
    pub fn random(nodes: usize, safe_after: usize, rate: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rollbacks = Vec::new();
        for step in 1..=safe_after {
            for node in 0..nodes {
                if rng.random_bool(rate) {
                    rollbacks.push(Rollback { step, node, to_step: rng.random_range(0..step) });
                }
            }
        }
        FailureSpec { rollbacks, safe_after }
    }

    fn validate(&self, nodes: usize) -> Result<(), StrategyError> {
        for r in &self.rollbacks {
            if r.step == 0 || r.to_step >= r.step {
                return Err(StrategyError::BadFailure(format!(
                    "rollback at step {} must target an earlier step, not {}",
                    r.step, r.to_step
                )));
            }
            if r.step > self.safe_after {
                return Err(StrategyError::BadFailure(format!(
                    "rollback at step {} lies beyond safe_after = {}",
                    r.step, self.safe_after
                )));
            }
            if r.node >= nodes {
                return Err(StrategyError::BadPattern { node: r.node, nodes });
            }
        }
        Ok(())
    }
}

/// Runs the failure sequence of `step` under `sigma`. Stability is declared
/// once the failure horizon has passed and a whole fairness window brought
/// no change.
pub fn run_failures(
    step: &FixpointStep<'_>,
    sigma: &Strategy,
    spec: &FailureSpec,
    max_steps: usize,
) -> Result<StrategyRun, StrategyError> {
    let n = step.field().node_count();
    spec.validate(n)?;
    let window = sigma.window();
    let mut history: Vec<Vec<Value>> = vec![step.seed()?];
    let mut last_change = 0;
    let mut patterns = sigma.patterns();
    for k in 1..=max_steps {
        let pi = patterns.next().expect("strategies are infinite");
        if let Some(&bad) = pi.0.iter().find(|&&m| m >= n) {
            return Err(StrategyError::BadPattern { node: bad, nodes: n });
        }
        let prev = history.last().expect("non-empty");
        let mut next = apply_pattern(step, &pi, prev)?;
        for r in spec.rollbacks.iter().filter(|r| r.step == k && !pi.contains(r.node)) {
            next[r.node] = history[r.to_step][r.node].clone();
        }
        if next != *prev {
            last_change = k;
        }
        history.push(next);
        if k >= spec.safe_after && k - last_change >= window {
            history.truncate(last_change + 1);
            return Ok(StrategyRun { rows: history, steps: k });
        }
    }
    Err(StrategyError::MaxSteps(max_steps))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub trial: usize,
    pub strategy: String,
    pub failures: FailureSpec,
    pub endpoint: Option<Vec<Value>>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RobustnessReport {
    pub trials: usize,
    pub agreed: usize,
    pub counterexamples: Vec<Counterexample>,
    /// Whether some failure trace contained a strictly decreasing step.
    pub saw_decrease: bool,
    /// Whether every failure-free trace was a chain.
    pub chains: bool,
}

impl RobustnessReport {
    pub fn all_agree(&self) -> bool {
        self.agreed == self.trials
    }
}

/// Compares the endpoints of random fair strategies, half of them with safe
/// failure sequences, against the synchronous fixpoint `target`.
pub fn check_robustness(
    step: &FixpointStep<'_>,
    target: &[Value],
    trials: usize,
    seed: u64,
) -> RobustnessReport {
    let n = step.field().node_count();
    let max_steps = 1_000 + 200 * n * n.max(8);
    let run_trial = |t: usize| -> TrialOutcome {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (t as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let p = rng.random_range(0.2..0.9);
        let sigma = Strategy::random(n, rng.random(), p);
        let failures = if t % 2 == 1 {
            FailureSpec::random(n, rng.random_range(1..12), 0.3, rng.random())
        } else {
            FailureSpec::default()
        };
        let res = run_failures(step, &sigma, &failures, max_steps);
        let (chain, decrease) = match &res {
            Ok(run) => shape(step, &run.rows),
            Err(_) => (true, false),
        };
        let ok = matches!(&res, Ok(run) if run.last() == target);
        TrialOutcome {
            ok,
            chain: chain || !failures.rollbacks.is_empty(),
            decrease: decrease && !failures.rollbacks.is_empty(),
            example: (!ok).then(|| Counterexample {
                trial: t,
                strategy: format!("{sigma:?}"),
                failures,
                endpoint: res.as_ref().ok().map(|r| r.last().to_vec()),
                error: res.err().map(|e| e.to_string()),
            }),
        }
    };
    let outcomes: Vec<TrialOutcome> = map_trials(trials, run_trial);
    RobustnessReport {
        trials,
        agreed: outcomes.iter().filter(|o| o.ok).count(),
        saw_decrease: outcomes.iter().any(|o| o.decrease),
        chains: outcomes.iter().all(|o| o.chain),
        counterexamples: outcomes.into_iter().filter_map(|o| o.example).collect(),
    }
}

struct TrialOutcome {
    ok: bool,
    chain: bool,
    decrease: bool,
    example: Option<Counterexample>,
}

#[cfg(feature = "parallel")]
fn map_trials<F: Fn(usize) -> TrialOutcome + Sync + Send>(trials: usize, f: F) -> Vec<TrialOutcome> {
    use rayon::prelude::*;
    (0..trials).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_trials<F: Fn(usize) -> TrialOutcome>(trials: usize, f: F) -> Vec<TrialOutcome> {
    (0..trials).map(f).collect()
}

/// Whether consecutive rows form a chain in the iteration direction, and
/// whether some node's value went strictly against it.
pub fn shape(step: &FixpointStep<'_>, rows: &[Vec<Value>]) -> (bool, bool) {
    let d = &step.domain;
    let mut chain = true;
    let mut decrease = false;
    for w in rows.windows(2) {
        let (a, b) = match step.kind {
            FixKind::Mu => (&w[0], &w[1]),
            FixKind::Nu => (&w[1], &w[0]),
        };
        let up = lift_order(a, b, d).unwrap_or(false);
        chain &= up;
        decrease |= a.iter().zip(b).any(|(x, y)| x != y && d.leq(y, x).unwrap_or(false));
    }
    (chain, decrease)
}

#[cfg(test)]
mod tests;
