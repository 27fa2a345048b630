//! Static monotonicity check for fixpoint bodies.
//!
//! Only operators lying between a binder and an occurrence of its variable
//! matter; anything else is constant in that variable. Function symbols are
//! checked against their declared monotonicity, capabilities by sampling
//! ordered pairs of their domain.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Formula, FormulaError, FunctionRegistry};
use crate::domains::Value;
use crate::field::{EdgeCtx, Field};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Offense {
    pub operator: String,
    pub binder: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MonotoneReport {
    pub offenses: Vec<Offense>,
}

impl MonotoneReport {
    pub fn accepted(&self) -> bool {
        self.offenses.is_empty()
    }
}

const PROBE_SAMPLES: usize = 10;
const PROBE_EDGES: usize = 48;

pub fn check_monotone(f: &Formula, field: &Field, reg: &FunctionRegistry) -> Result<MonotoneReport, FormulaError> {
    let mut report = MonotoneReport::default();
    walk(f, &mut Vec::new(), field, reg, &mut report)?;
    Ok(report)
}

fn walk(
    f: &Formula,
    binders: &mut Vec<String>,
    field: &Field,
    reg: &FunctionRegistry,
    report: &mut MonotoneReport,
) -> Result<(), FormulaError> {
    let dependent = |g: &Formula| -> Option<String> {
        let free = g.free_vars();
        binders.iter().rev().find(|b| free.contains(*b)).cloned()
    };
    match f {
        Formula::Apply { func, args } => {
            let fun = reg.get(func)?;
            if !fun.monotone() {
                if let Some(b) = args.iter().find_map(dependent) {
                    report.offenses.push(Offense {
                        operator: func.clone(),
                        binder: b,
                        reason: "not monotone".into(),
                    });
                }
            }
            for a in args {
                walk(a, binders, field, reg, report)?;
            }
        }
        Formula::Modal { cap, agg, body, .. } => {
            let fun = reg.get(agg)?;
            if let Some(b) = dependent(body) {
                if !fun.monotone() || !fun.aggregates() {
                    report.offenses.push(Offense {
                        operator: agg.clone(),
                        binder: b.clone(),
                        reason: "aggregator not monotone".into(),
                    });
                }
                if let Some(reason) = probe_capability(cap, field)? {
                    report.offenses.push(Offense { operator: cap.clone(), binder: b, reason });
                }
            }
            walk(body, binders, field, reg, report)?;
        }
        Formula::Fix { var, body, .. } => {
            binders.push(var.clone());
            walk(body, binders, field, reg, report)?;
            binders.pop();
        }
        _ => {}
    }
    Ok(())
}

/// Returns a description of a violating pair, if sampling finds one.
fn probe_capability(cap: &str, field: &Field) -> Result<Option<String>, FormulaError> {
    let Some(label) = field.edge_label(cap) else {
        if cap == "id" {
            return Ok(None);
        }
        return Err(FormulaError::UnknownEdgeLabel(cap.to_string()));
    };
    let d = &label.domain;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut samples: Vec<Value> = (0..PROBE_SAMPLES).map(|_| d.sample(&mut rng)).collect();
    samples.extend(d.bottom().ok());
    samples.extend(d.top().ok());
    for l in field.node_labels().values() {
        if l.domain == *d {
            samples.extend(l.values.iter().take(PROBE_SAMPLES).cloned());
        }
    }
    samples.sort();
    samples.dedup();
    let mut pairs = Vec::new();
    for a in &samples {
        for b in &samples {
            if let Ok(j) = d.join(a, b) {
                pairs.push((a.clone(), j));
            }
        }
    }
    let step = (field.edges().len() / PROBE_EDGES).max(1);
    for e in (0..field.edges().len()).step_by(step) {
        let (src, dst) = field.edges()[e];
        let ctx = EdgeCtx { src, dst, order: field.order(), labels: field };
        let c = &label.caps[e];
        for (a, b) in &pairs {
            let (Ok(fa), Ok(fb)) = (c.apply(&ctx, a), c.apply(&ctx, b)) else { continue };
            if let Ok(false) = d.leq(&fa, &fb) {
                return Ok(Some(format!(
                    "on edge {} maps {a} <= {b} to {fa}, {fb}",
                    field.edge_key(e)
                )));
            }
        }
    }
    Ok(None)
}
