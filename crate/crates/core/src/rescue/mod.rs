//! The rescue case study: the bundled program, a random scenario generator
//! and an independent assignment oracle.
//!
//! Each outer round computes, for the current victims, the distance of every
//! node to its closest victim (`D`), lets every available rescuer send its
//! candidacy down that gradient (`rescuers`), lets each victim with enough
//! candidates pick its best ones and sends the choice back (`engaged`), and
//! retires saved victims and engaged rescuers. The loop stops at the first
//! round that saves nobody.

mod functions;
mod oracle;
mod scenario;

use std::collections::{BTreeMap, BTreeSet};

use crate::domains::{PathValue, Value};
use crate::eval::Engine;
use crate::field::Field;
use crate::program::{parse_program, run_with_observer, Program, ProgramError, StepKind};

pub use functions::{candidate_cmp, register_functions};
pub use oracle::{oracle_assignment, OracleOutcome};
pub use scenario::{build_field, gen_scenario, Scenario, ScenarioError};

/// Source of the rescue program.
pub const RESCUE_PROGRAM: &str = "\
finish <- false;
until finish do {
  source <- source(victim);
  D <- mu Z. min1(source, <out dst:min1> Z);
  rescuers <- mu Z. union(init(rescuer, D), <in grd:union> Z);
  engaged <- mu Z. union(choose(victim, rescuers, howMany), <out cgr:union> Z);
  victim_prev <- victim;
  victim <- and(victim, not(saved(rescuers, howMany)));
  rescuer <- and(rescuer, is_empty(engaged));
  finish <- same(victim_prev, victim)
};
if not(victim) then success <- true else success <- false";

pub fn rescue_program() -> Program {
    parse_program(RESCUE_PROGRAM).expect("the bundled program parses")
}

/// Victim name to the names of the rescuers it engaged.
pub type Assignment = BTreeMap<String, BTreeSet<String>>;

#[derive(Debug, Clone)]
pub struct RescueRun {
    pub assignment: Assignment,
    /// Whether every victim was saved.
    pub success: bool,
    pub rounds: usize,
    pub steps: usize,
    pub field: Field,
}

/// Runs the bundled program on `field` and reads the assignment off each
/// round's `engaged` label: a victim's engaged paths end at its rescuers.
pub fn run_rescue(engine: &Engine, field: &Field, fuel: usize) -> Result<RescueRun, ProgramError> {
    let mut f = field.clone();
    let mut assignment = Assignment::new();
    let mut rounds = 0;
    let steps = run_with_observer(engine, &rescue_program(), &mut f, fuel, &mut |kind, _, now| {
        if *kind != StepKind::Assign("engaged".into()) {
            return;
        }
        rounds += 1;
        let (Ok(victims), Ok(engaged)) = (now.values("victim"), now.values("engaged")) else { return };
        for (k, (v, e)) in victims.iter().zip(engaged).enumerate() {
            let Value::Set(paths) = e else { continue };
            if *v != Value::Bool(true) || paths.is_empty() {
                continue;
            }
            let chosen = assignment.entry(now.node_name(k).to_string()).or_default();
            for p in paths {
                if let Value::Path(PathValue::Word(w)) = p {
                    if let Some(r) = w.last() {
                        chosen.insert(r.to_string());
                    }
                }
            }
        }
    })?;
    let success = f.values("success").map(|s| s.iter().all(|v| *v == Value::Bool(true))).unwrap_or(false);
    Ok(RescueRun { assignment, success, rounds, steps, field: f })
}

/// DOT rendering marking victims, rescuers and the nodes on engaged paths.
pub fn rescue_dot(field: &Field, title: &str, assignment: &Assignment) -> String {
    let rescuers: BTreeSet<&String> = assignment.values().flatten().collect();
    let mut out = format!("digraph \"{title}\" {{\n");
    for k in 0..field.node_count() {
        let name = field.node_name(k).to_string();
        let style = if assignment.contains_key(&name) {
            "shape=doublecircle,color=red"
        } else if rescuers.contains(&name) {
            "shape=box,color=blue"
        } else {
            let v = field.values("victim").ok().map(|v| v[k] == Value::Bool(true)).unwrap_or(false);
            let r = field.values("rescuer").ok().map(|v| v[k] == Value::Bool(true)).unwrap_or(false);
            match (v, r) {
                (true, _) => "shape=doublecircle",
                (_, true) => "shape=box",
                _ => "shape=point",
            }
        };
        out.push_str(&format!("  \"{name}\" [{style}];\n"));
    }
    for &(a, b) in field.edges() {
        out.push_str(&format!("  \"{}\" -> \"{}\";\n", field.node_name(a), field.node_name(b)));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests;
