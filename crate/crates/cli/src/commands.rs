//! One function per subcommand.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value as Json};
use smuc::dist::{check_log, lift, simulate, write_log, Infrastructure};
use smuc::domains::{parse_domain, probe_laws, Domain, NodeId, NodeOrder};
use smuc::eval::{Engine, Environment};
use smuc::field::{CapRegistry, Field};
use smuc::formula::{check_monotone, parse_formula, Formula};
use smuc::program::{parse_program, run_with_observer, Program, StepKind, DEFAULT_FUEL};
use smuc::rescue::{gen_scenario, oracle_assignment, rescue_dot, run_rescue, Assignment};
use smuc::saf::{erase_aux, first_difference, is_saf, translate_program};
use smuc::strategy::{check_robustness, run_failures, FailureSpec, Strategy};

use crate::error::CliError;
use crate::render::{labels, print_json, table, valuation_json};
use crate::{CheckArgs, CompileArgs, DistArgs, EvalArgs, FuzzArgs, RescueArgs, RunArgs};

type Result<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::user(format!("{}: {e}", path.display())))
}

fn load_field(path: &Path) -> Result<Field> {
    let doc: Json = serde_json::from_str(&read(path)?).map_err(|e| CliError::user(format!("{}: {e}", path.display())))?;
    Field::from_json(&doc, &CapRegistry::builtin()).map_err(|e| CliError::user(format!("{}: {e}", path.display())))
}

fn load_program(path: &Path) -> Result<Program> {
    parse_program(&read(path)?).map_err(|e| CliError::syntax(e, true))
}

fn formula(text: &str) -> Result<Formula> {
    parse_formula(text).map_err(|e| CliError::syntax(e, false))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError::user(format!("{}: {e}", path.display())))
}

pub fn eval(a: EvalArgs) -> Result<()> {
    let field = load_field(&a.field)?;
    let f = formula(&a.formula)?;
    let engine = Engine::new();
    let env = Environment::new();
    let trace = engine.trace(&field, &env, &f)?;
    if let Some(dir) = &a.dot {
        fs::create_dir_all(dir)?;
        for (k, row) in trace.rows.iter().enumerate() {
            let mut g = field.clone();
            g.assign("psi", trace.domain.clone(), row.clone());
            write(&dir.join(format!("psi_{k}.dot")), &g.to_dot(&format!("psi {k}"), Some(&["psi"])))?;
        }
    }
    let rows = if a.trace { &trace.rows[..] } else { std::slice::from_ref(trace.rows.last().expect("non-empty trace")) };
    if a.json {
        let vals: Vec<Json> = rows.iter().map(|r| valuation_json(&field, r)).collect();
        if a.trace {
            print_json(&Json::Array(vals));
        } else {
            print_json(&json!({ "domain": trace.domain.to_string(), "values": vals[0] }));
        }
    } else {
        print!("{}", table(&field, rows));
    }
    Ok(())
}

fn describe(kind: &StepKind) -> String {
    match kind {
        StepKind::Assign(l) => format!("assign {l}"),
        StepKind::Guard { until: true, holds } => format!("until guard {holds}"),
        StepKind::Guard { until: false, holds } => format!("if guard {holds}"),
        StepKind::Free(ls) => format!("free {}", ls.join(", ")),
    }
}

pub fn run(a: RunArgs) -> Result<()> {
    let mut field = load_field(&a.field)?;
    let p = load_program(&a.program)?;
    let mut steps_seen = Vec::new();
    let steps = run_with_observer(&Engine::new(), &p, &mut field, a.fuel, &mut |kind, _, _| {
        if a.trace {
            steps_seen.push(describe(kind));
        }
    })?;
    if let Some(out) = &a.out {
        write(out, &serde_json::to_string_pretty(&field.to_json()).expect("JSON values serialize"))?;
    }
    if a.json {
        print_json(&json!({ "steps": steps, "trace": steps_seen, "field": field.to_json() }));
    } else {
        for (k, s) in steps_seen.iter().enumerate() {
            println!("step {}: {s}", k + 1);
        }
        println!("terminated after {steps} steps");
        print!("{}", labels(&field));
    }
    Ok(())
}

pub fn compile(a: CompileArgs) -> Result<()> {
    let field = load_field(&a.field)?;
    let p = load_program(&a.program)?;
    let saf = translate_program(&Engine::new(), &field, &p)?;
    let text = format!("{saf}\n");
    match &a.out {
        Some(out) => write(out, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn dist(a: DistArgs) -> Result<()> {
    let field = load_field(&a.field)?;
    let source = load_program(&a.program)?;
    let engine = Engine::new();
    let infra = if a.tree == "bfs" {
        Infrastructure::bfs(field.clone())?
    } else {
        let path = Path::new(&a.tree);
        let doc: Json = serde_json::from_str(&read(path)?).map_err(|e| CliError::user(format!("{}: {e}", path.display())))?;
        Infrastructure::from_json(field.clone(), &doc)?
    };
    let program = if is_saf(&source) { source.clone() } else { translate_program(&engine, &field, &source)? };
    let sim = simulate(&engine, &infra, &program, a.seed, a.fuel)?;
    if let Some(path) = &a.trace {
        let mut out = Vec::new();
        write_log(&sim.log, &mut out)?;
        fs::write(path, out)?;
    }
    let violations = check_log(&infra, &sim.log);
    if !violations.is_empty() {
        return Err(CliError::Violation(format!("event log: {}", violations.join("; "))));
    }
    let mut lifted = lift(&infra, &sim.exec)?;
    erase_aux(&mut lifted);
    let mut global = field.clone();
    run_with_observer(&engine, &source, &mut global, DEFAULT_FUEL, &mut |_, _, _| {})?;
    erase_aux(&mut global);
    if let Some(d) = first_difference(&global, &lifted) {
        return Err(CliError::Violation(format!(
            "distributed run differs from the global run on {} at {:?}: {} vs {}",
            d.label, d.node, d.saf, d.direct
        )));
    }
    if a.json {
        print_json(&json!({ "seed": a.seed, "steps": sim.steps, "events": sim.log.len(), "field": lifted.to_json() }));
    } else {
        println!("seed {}: quiescent after {} steps, {} events, agrees with the global run", a.seed, sim.steps, sim.log.len());
        print!("{}", labels(&lifted));
    }
    Ok(())
}

pub fn fuzz(a: FuzzArgs) -> Result<()> {
    let field = load_field(&a.field)?;
    let f = formula(&a.formula)?;
    let engine = Engine::new();
    let env = Environment::new();
    let target = engine.eval(&field, &env, &f)?.values;
    let step = engine.fixpoint_step(&field, &env, &f)?;
    let n = field.node_count();
    let (agreed, failures) = match &a.failures {
        None => {
            let report = check_robustness(&step, &target, a.trials, a.seed);
            let bad: Vec<String> = report
                .counterexamples
                .iter()
                .map(|c| format!("trial {}: {}", c.trial, c.error.clone().unwrap_or_else(|| "different endpoint".into())))
                .collect();
            (report.agreed, bad)
        }
        Some(path) => {
            let spec: FailureSpec =
                serde_json::from_str(&read(path)?).map_err(|e| CliError::user(format!("{}: {e}", path.display())))?;
            let max_steps = 1_000 + 200 * n * n.max(8);
            let mut agreed = 0;
            let mut bad = Vec::new();
            for t in 0..a.trials {
                let sigma = Strategy::random(n, a.seed.wrapping_add(t as u64), 0.5);
                match run_failures(&step, &sigma, &spec, max_steps) {
                    Ok(r) if r.last() == target.as_slice() => agreed += 1,
                    Ok(_) => bad.push(format!("trial {t}: different endpoint")),
                    Err(e @ smuc::strategy::StrategyError::BadFailure(_)) => return Err(CliError::user(e)),
                    Err(e @ smuc::strategy::StrategyError::BadPattern { .. }) => return Err(CliError::user(e)),
                    Err(e) => bad.push(format!("trial {t}: {e}")),
                }
            }
            (agreed, bad)
        }
    };
    if a.json {
        print_json(&json!({ "trials": a.trials, "agreed": agreed, "counterexamples": failures }));
    } else {
        println!("{agreed}/{} trials reached the synchronous fixpoint", a.trials);
        for c in &failures {
            println!("  {c}");
        }
    }
    if agreed != a.trials {
        return Err(CliError::Violation(format!("{} of {} trials missed the fixpoint", a.trials - agreed, a.trials)));
    }
    Ok(())
}

fn assignment_json(a: &Assignment) -> Json {
    json!(a)
}

pub fn rescue(a: RescueArgs) -> Result<()> {
    let needs = vec![a.how_many; a.victims];
    let s = gen_scenario(a.landmarks, &needs, a.rescuers, a.seed).map_err(CliError::user)?;
    let r = run_rescue(&Engine::new(), &s.field, a.fuel)?;
    let o = oracle_assignment(&s);
    if let Some(dir) = &a.dot {
        fs::create_dir_all(dir)?;
        write(&dir.join("scenario.dot"), &rescue_dot(&s.field, "scenario", &Assignment::new()))?;
        write(&dir.join("rescue.dot"), &rescue_dot(&s.field, "rescue", &r.assignment))?;
    }
    if a.json {
        print_json(&json!({
            "seed": a.seed,
            "success": r.success,
            "rounds": r.rounds,
            "assignment": assignment_json(&r.assignment),
            "oracle": { "assignment": assignment_json(&o.assignment), "unsaved": o.unsaved },
        }));
    } else {
        for (victim, rescuers) in &r.assignment {
            let names: Vec<&str> = rescuers.iter().map(String::as_str).collect();
            println!("victim {victim} <- {}", names.join(", "));
        }
        let unsaved: Vec<&str> = o.unsaved.iter().map(String::as_str).collect();
        println!("success: {} after {} rounds; unsaved: [{}]", r.success, r.rounds, unsaved.join(", "));
    }
    if r.assignment != o.assignment || r.success != o.unsaved.is_empty() {
        return Err(CliError::Violation("the program's assignment differs from the oracle's".into()));
    }
    Ok(())
}

pub fn check(a: CheckArgs) -> Result<()> {
    let mut probes: Vec<(String, Domain)> = Vec::new();
    if let Some(text) = &a.domain {
        let order = Arc::new(NodeOrder::new(a.nodes.iter().map(|n| NodeId::new(n)).collect()));
        probes.push((text.clone(), parse_domain(text, &order).map_err(CliError::user)?));
    }
    let field = a.field.as_deref().map(load_field).transpose()?;
    match (&field, &a.formula) {
        (Some(field), None) => {
            let domains: BTreeSet<String> = field.node_labels().values().map(|l| l.domain.to_string()).collect();
            for text in domains {
                let d = parse_domain(&text, field.order()).map_err(CliError::user)?;
                probes.push((text, d));
            }
        }
        (None, Some(_)) => return Err(CliError::user("--formula needs --field to type its labels")),
        _ => {}
    }
    if probes.is_empty() && a.formula.is_none() {
        return Err(CliError::user("nothing to check: give --domain, --field or --field with --formula"));
    }
    let mut results = Vec::new();
    let mut violated = false;
    for (text, d) in &probes {
        let report = probe_laws(d, a.cases, a.seed).map_err(CliError::user)?;
        violated |= !report.passed();
        results.push(json!({ "domain": text, "cases": report.cases, "violations": report.violations }));
        if !a.json {
            println!("{text}: {} cases, {} violations", report.cases, report.violations.len());
            for v in report.violations.iter().take(10) {
                println!("  {v}");
            }
        }
    }
    let mut offenses = Vec::new();
    if let (Some(field), Some(text)) = (&field, &a.formula) {
        let f = formula(text)?;
        let report = check_monotone(&f, field, &Engine::new().registry)?;
        offenses = report.offenses.iter().map(|o| format!("{} under {}: {}", o.operator, o.binder, o.reason)).collect();
        if !a.json {
            if offenses.is_empty() {
                println!("{f}: monotone");
            }
            for o in &offenses {
                println!("{f}: {o}");
            }
        }
    }
    if a.json {
        print_json(&json!({ "laws": results, "monotonicity": offenses }));
    }
    if violated {
        return Err(CliError::Violation("domain laws fail".into()));
    }
    if !offenses.is_empty() {
        return Err(CliError::user("formula is not monotone in its fixpoint variables"));
    }
    Ok(())
}
