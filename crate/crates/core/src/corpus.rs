//! The bundled example fields, fixpoint instances and programs used by the
//! test suites, the benchmarks and the acceptance harness.

use crate::eval::Engine;
use crate::field::{CapRegistry, Field};
use crate::formula::{agreement_formula, parse_formula, Formula};
use crate::program::{parse_program, run, Program, DEFAULT_FUEL};
use crate::rescue::{gen_scenario, rescue_program};

const FIXTURES: &[(&str, &str)] = &[
    ("fig1.json", include_str!("../../../fixtures/fig1.json")),
    ("fig1_min.json", include_str!("../../../fixtures/fig1_min.json")),
    ("fig1_set.json", include_str!("../../../fixtures/fig1_set.json")),
    ("fig2_cost.json", include_str!("../../../fixtures/fig2_cost.json")),
    ("fig2_goal.json", include_str!("../../../fixtures/fig2_goal.json")),
    ("fig2_path.json", include_str!("../../../fixtures/fig2_path.json")),
    ("fig3.json", include_str!("../../../fixtures/fig3.json")),
    ("fig1_reach.smuc", include_str!("../../../fixtures/fig1_reach.smuc")),
    ("fig1_min.smuc", include_str!("../../../fixtures/fig1_min.smuc")),
    ("fig1_set.smuc", include_str!("../../../fixtures/fig1_set.smuc")),
    ("fig2_cost.smuc", include_str!("../../../fixtures/fig2_cost.smuc")),
    ("fig2_goal.smuc", include_str!("../../../fixtures/fig2_goal.smuc")),
    ("fig2_path.smuc", include_str!("../../../fixtures/fig2_path.smuc")),
    ("fig3_tree.smuc", include_str!("../../../fixtures/fig3_tree.smuc")),
];

/// Field and program pairs shipped under `fixtures/`.
pub const FIXTURE_PROGRAMS: &[(&str, &str)] = &[
    ("fig1.json", "fig1_reach.smuc"),
    ("fig1_min.json", "fig1_min.smuc"),
    ("fig1_set.json", "fig1_set.smuc"),
    ("fig2_cost.json", "fig2_cost.smuc"),
    ("fig2_goal.json", "fig2_goal.smuc"),
    ("fig2_path.json", "fig2_path.smuc"),
    ("fig3.json", "fig3_tree.smuc"),
];

/// Text of a bundled fixture file.
pub fn fixture_text(name: &str) -> &'static str {
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t).unwrap_or_else(|| panic!("no fixture {name}"))
}

pub fn fixture_field(name: &str) -> Field {
    let doc: serde_json::Value = serde_json::from_str(fixture_text(name)).expect("fixtures are valid JSON");
    Field::from_json(&doc, &CapRegistry::builtin()).expect("fixtures are valid fields")
}

pub fn fixture_program(name: &str) -> Program {
    parse_program(fixture_text(name)).expect("fixture programs parse")
}

/// A monotone fixpoint formula on a field.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub field: Field,
    pub formula: Formula,
}

#[derive(Debug, Clone)]
pub struct ProgramCase {
    pub name: String,
    pub field: Field,
    pub program: Program,
}

/// A small weighted scenario with `source` already computed, so that the
/// distance gradient can be evaluated as a plain formula.
fn gradient_field(landmarks: usize, seed: u64) -> Field {
    let s = gen_scenario(landmarks, &[1, 2], 4, seed).expect("small scenarios generate");
    let mut f = s.field;
    let stage = parse_program("source <- source(victim)").expect("parses");
    run(&Engine::new(), &stage, &mut f, DEFAULT_FUEL).expect("source is computable");
    f
}

/// Ten monotone fixpoint instances: the figure formulas plus a greatest
/// fixpoint, a nested fixpoint and a weighted gradient on a random scenario.
pub fn instances() -> Vec<Instance> {
    let mut out: Vec<Instance> = FIXTURE_PROGRAMS
        .iter()
        .map(|(field, prog)| {
            let Program::Assign { formula, .. } = fixture_program(prog) else { panic!("{prog} is one assignment") };
            Instance { name: prog.trim_end_matches(".smuc").to_string(), field: fixture_field(field), formula }
        })
        .collect();
    let extra = [
        ("fig1_avoid", "fig1.json", "nu z. and(not(i), <out:or> z)"),
        ("fig1_nested", "fig1.json", "mu z. or(i, <out:or> mu w. or(z, <in:or> w))"),
    ];
    for (name, field, text) in extra {
        out.push(Instance {
            name: name.into(),
            field: fixture_field(field),
            formula: parse_formula(text).expect("bundled formulas parse"),
        });
    }
    out.push(Instance {
        name: "rescue_gradient".into(),
        field: gradient_field(16, 5),
        formula: parse_formula("mu z. min1(source, <out dst:min1> z)").expect("parses"),
    });
    out
}

/// Every bundled program on its field: the figure assignments, control
/// flow, nested and greatest fixpoints, an explicit loop and the rescue
/// program on a small scenario.
pub fn programs() -> Vec<ProgramCase> {
    let mut out: Vec<ProgramCase> = FIXTURE_PROGRAMS
        .iter()
        .map(|(field, prog)| ProgramCase {
            name: prog.trim_end_matches(".smuc").to_string(),
            field: fixture_field(field),
            program: fixture_program(prog),
        })
        .collect();
    let reach = parse_formula("mu z. or(i, <out:or> z)").expect("parses");
    let agreement = format!("j <- {}", agreement_formula(&reach));
    let extra = [
        ("agreement", agreement.as_str()),
        ("nested", "j <- mu z. or(i, <out:or> mu w. or(z, <in:or> w))"),
        ("greatest", "j <- nu z. and(or(i, true), <out:and> z)"),
        (
            "control_flow",
            "x <- false; until x do { y <- <in:or> i; x <- or(y, true) }; if not(x) then z <- true else z <- false",
        ),
        ("explicit_loop", "k <- i; done <- false; until done do { prev <- k; k <- or(k, <out:or> k); done <- same(prev, k) }"),
    ];
    for (name, text) in extra {
        out.push(ProgramCase {
            name: name.into(),
            field: fixture_field("fig1.json"),
            program: parse_program(text).expect("bundled programs parse"),
        });
    }
    let s = gen_scenario(12, &[1, 1], 3, 2).expect("small scenarios generate");
    out.push(ProgramCase { name: "rescue".into(), field: s.field, program: rescue_program() });
    out
}
