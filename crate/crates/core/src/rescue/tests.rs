use super::*;
use crate::domains::Domain;
use crate::program::{run, DEFAULT_FUEL};

fn set<const N: usize>(items: [usize; N]) -> BTreeSet<usize> {
    items.into_iter().collect()
}

fn names<const N: usize>(items: [&str; N]) -> BTreeSet<String> {
    items.into_iter().map(String::from).collect()
}

/// The weighted graph 0<->1, 2->1 (3), 2->3, 3->1.
fn fig2_graph() -> Vec<(usize, usize, u64)> {
    vec![(0, 1, 1), (1, 0, 1), (2, 1, 3), (2, 3, 1), (3, 1, 1)]
}

fn both_ways(edges: &[(usize, usize, u64)]) -> Vec<(usize, usize, u64)> {
    edges.iter().flat_map(|&(a, b, w)| [(a, b, w), (b, a, w)]).collect()
}

#[test]
fn bundled_program_round_trips_through_its_printer() {
    let p = rescue_program();
    assert_eq!(parse_program(&p.to_string()).unwrap(), p);
}

#[test]
fn distances_on_the_small_weighted_graph() {
    let s = build_field(4, &fig2_graph(), &BTreeMap::from([(0, 1)]), &BTreeSet::new()).unwrap();
    let mut f = s.field.clone();
    let stage = parse_program("source <- source(victim); D <- mu Z. min1(source, <out dst:min1> Z)").unwrap();
    run(&Engine::new(), &stage, &mut f, DEFAULT_FUEL).unwrap();
    let costs: Vec<String> = f.values("D").unwrap().iter().map(|v| v.as_tuple().unwrap()[0].to_string()).collect();
    assert_eq!(costs, ["0", "1", "3", "2"]);
    let src = f.values("source").unwrap();
    assert_eq!(src[2], Value::pair(Value::inf(), Value::node("2")));
    assert_eq!(f.node_label("D").unwrap().domain.to_string(), "lex(cost,nodes)");
}

#[test]
fn saved_compares_with_at_least() {
    let e = Engine::new();
    let mut f = build_field(1, &[], &BTreeMap::from([(0, 2)]), &BTreeSet::new()).unwrap().field;
    let three = Value::set([0, 1, 2].map(|k| Value::pair(Value::num(k), Value::Path(PathValue::empty()))));
    f.assign("cands", Domain::PowerSet { universe: None }, vec![three]);
    let run_one = |f: &Field, text: &str| {
        let mut g = f.clone();
        run(&e, &parse_program(text).unwrap(), &mut g, 10).unwrap();
        g.values("s").unwrap()[0].clone()
    };
    assert_eq!(run_one(&f, "s <- saved(cands, howMany)"), Value::Bool(true));
    assert_eq!(run_one(&f, "s <- saved_le(cands, howMany)"), Value::Bool(false));
}

#[test]
fn no_victims_succeeds_at_once() {
    let s = build_field(3, &both_ways(&[(0, 1, 2), (1, 2, 2)]), &BTreeMap::new(), &set([0])).unwrap();
    let r = run_rescue(&Engine::new(), &s.field, DEFAULT_FUEL).unwrap();
    assert!(r.success);
    assert_eq!(r.rounds, 1);
    assert!(r.assignment.is_empty());
}

#[test]
fn the_closer_rescuer_is_chosen() {
    // 0 - 1 - 2(victim) - 3 - 4, rescuers at 0 and 4.
    let edges = both_ways(&[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1)]);
    let s = build_field(5, &edges, &BTreeMap::from([(2, 1)]), &set([0, 4])).unwrap();
    let r = run_rescue(&Engine::new(), &s.field, DEFAULT_FUEL).unwrap();
    assert!(r.success);
    // Equal distance: the tie goes to the earlier path in node order.
    assert_eq!(r.assignment, BTreeMap::from([("2".to_string(), names(["0"]))]));
    assert_eq!(oracle_assignment(&s).assignment, r.assignment);
    let far = both_ways(&[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1)]);
    let s = build_field(6, &far, &BTreeMap::from([(2, 1)]), &set([0, 5])).unwrap();
    let r = run_rescue(&Engine::new(), &s.field, DEFAULT_FUEL).unwrap();
    assert_eq!(r.assignment, BTreeMap::from([("2".to_string(), names(["0"]))]));
    let near = both_ways(&[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (0, 5, 1), (5, 1, 1)]);
    let s = build_field(6, &near, &BTreeMap::from([(2, 1)]), &set([0, 3])).unwrap();
    let r = run_rescue(&Engine::new(), &s.field, DEFAULT_FUEL).unwrap();
    assert_eq!(r.assignment, BTreeMap::from([("2".to_string(), names(["3"]))]));
}

#[test]
fn split_rescuers_fail_two_needy_victims() {
    // 0(r) - 1(v) - 2 - 3(v) - 4(r): each rescuer is closer to a different victim.
    let edges = both_ways(&[(0, 1, 1), (1, 2, 5), (2, 3, 5), (3, 4, 1)]);
    let s = build_field(5, &edges, &BTreeMap::from([(1, 2), (3, 2)]), &set([0, 4])).unwrap();
    let r = run_rescue(&Engine::new(), &s.field, DEFAULT_FUEL).unwrap();
    assert!(!r.success);
    assert!(r.assignment.is_empty());
    let o = oracle_assignment(&s);
    assert_eq!(o.unsaved, names(["1", "3"]));
}

#[test]
fn unreachable_victims_stay_unsaved() {
    // Edges point away from the victim, so nobody can reach it.
    let s = build_field(3, &[(0, 1, 1), (0, 2, 1)], &BTreeMap::from([(0, 1)]), &set([1, 2])).unwrap();
    let r = run_rescue(&Engine::new(), &s.field, DEFAULT_FUEL).unwrap();
    assert!(!r.success);
    assert!(oracle_assignment(&s).unsaved.contains("0"));
}

#[test]
fn second_round_reuses_free_rescuers() {
    // Both rescuers head for victim 1 first; the unchosen one then serves 4.
    let edges = both_ways(&[(0, 1, 1), (2, 1, 1), (2, 3, 4), (3, 4, 1)]);
    let s = build_field(5, &edges, &BTreeMap::from([(1, 1), (4, 1)]), &set([0, 2])).unwrap();
    let r = run_rescue(&Engine::new(), &s.field, DEFAULT_FUEL).unwrap();
    assert!(r.success);
    let o = oracle_assignment(&s);
    assert_eq!(r.assignment, o.assignment);
    assert_eq!(o.rounds, 3);
    assert_eq!(r.assignment["4"], names(["2"]));
}

#[test]
fn generated_scenarios_are_connected_and_seeded() {
    let a = gen_scenario(25, &[1, 2], 5, 9).unwrap();
    let b = gen_scenario(25, &[1, 2], 5, 9).unwrap();
    assert_eq!(a.field.edges(), b.field.edges());
    assert_eq!(a.victims, b.victims);
    assert!(a.victims.keys().all(|v| !a.rescuers.contains(v)));
    assert!(a.weights.iter().all(|w| *w >= 1));
    assert!(crate::dist::Infrastructure::bfs(a.field.clone()).is_ok());
    assert!(matches!(gen_scenario(3, &[1, 1], 2, 0), Err(ScenarioError::TooFew { .. })));
}

#[test]
fn small_scenarios_match_the_oracle() {
    for seed in 0..5 {
        let s = gen_scenario(20, &[1, 2], 6, seed).unwrap();
        let r = run_rescue(&Engine::new(), &s.field, DEFAULT_FUEL).unwrap();
        let o = oracle_assignment(&s);
        assert_eq!(r.assignment, o.assignment, "seed {seed}");
        assert_eq!(r.success, o.unsaved.is_empty(), "seed {seed}");
    }
}
