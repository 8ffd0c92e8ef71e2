use cgd::codec::{decode_graph, encode_graph, encode_rule, GraphCode, GraphToken, RuleDescription};
use cgd::fixtures;
use cgd::graph::CayleyGraph;
use cgd::library::{identity_rule, inflating_grid_rule, xor_label_rule};
use cgd::random::{random_graph_upto, seeded};
use cgd::rule::{apply_localizable, RuleParams};
use cgd::universal::{
    build_machine_world, check_intrinsic_simulation, f_univ, label_with, project, run_machine, simulate,
    world_from_code, MachinePhase, RuleRef, SimulationVerdict, UniversalError,
};
use proptest::prelude::*;
use rand::Rng;

const BUDGET: usize = 100_000;

fn xor_ref() -> RuleRef {
    RuleRef::new(encode_rule(&xor_label_rule(), BUDGET).unwrap())
}

/// Every image label flipped: a well-formed description of a different
/// rule.
fn flipped(d: &RuleDescription) -> RuleDescription {
    let mut d = d.clone();
    for img in &mut d.images {
        for v in 0..img.vertex_count() {
            let l = *img.label(v);
            img.set_label(v, 1 - l);
        }
    }
    d
}

#[test]
fn machine_builds_fixtures() {
    let d = RuleRef::new(encode_rule(&identity_rule(3, 2), BUDGET).unwrap());
    let run = run_machine(build_machine_world(&fixtures::fig4(), &d).unwrap(), 10_000).unwrap();
    assert_eq!(run.graph, label_with(&fixtures::fig4(), &d).unwrap());
    assert_eq!(run.trace.len(), run.steps);
    assert!(run.trace.iter().all(|t| t.max_distance <= 2));
    assert_eq!(run.trace.last().unwrap().phase, MachinePhase::Finish);
}

#[test]
fn machine_respects_its_budget() {
    let w = build_machine_world(&fixtures::cycle(&[1, 0, 0, 0]), &xor_ref()).unwrap();
    assert!(matches!(
        run_machine(w, 5),
        Err(UniversalError::BudgetExceeded { steps: 5 })
    ));
}

#[test]
fn machine_world_is_a_graph_around_the_machine() {
    let mut w = build_machine_world(&fixtures::cycle(&[1, 0]), &xor_ref()).unwrap();
    let start = w.snapshot();
    assert_eq!(start.pointer_label().to_string(), "M:ReadSeparator");
    assert_eq!(w.tape(), encode_graph(&fixtures::cycle(&[1, 0])).tokens());
    w.step().unwrap();
    assert_eq!(w.phase(), MachinePhase::ReadLabel);
    assert_eq!(w.tape().len() + 1, start.vertex_count() - 3);
}

#[test]
fn machine_rejects_malformed_tapes() {
    let d = xor_ref();
    for code in [
        "",
        "$1;(1,1)",
        "$1;(1,1)$0(1,2)|||;",
        "$1;(1,1)$0(1,2);",
        "$5;",
        "$1;(3,1)$0;",
        "(1,2)",
    ] {
        let code: GraphCode = code.parse().unwrap();
        let err = run_machine(world_from_code(&code, &d), 10_000).unwrap_err();
        assert!(matches!(err, UniversalError::Malformed { .. }), "{code}: {err}");
        if code
            .tokens()
            .iter()
            .all(|t| !matches!(t, GraphToken::Label(l) if *l >= 2))
        {
            assert!(decode_graph(&code, 2).is_err(), "{code}");
        }
    }
}

#[test]
fn universal_rule_runs_every_library_rule() {
    let cases = [
        (identity_rule(3, 2), fixtures::fig4()),
        (inflating_grid_rule(), fixtures::grid(2, 2)),
        (xor_label_rule(), fixtures::cycle(&[1, 0, 0, 1, 0])),
    ];
    for (f, x) in cases {
        let v = simulate(&f, &x, 2, BUDGET).unwrap();
        assert_eq!(v, SimulationVerdict::Pass { steps: 2, delay: 1 }, "{}", f.name());
    }
}

#[test]
fn corrupted_description_fails_at_step_one() {
    let f = xor_label_rule();
    let d = RuleRef::new(flipped(&encode_rule(&f, BUDGET).unwrap()));
    let x = fixtures::cycle(&[1, 0, 0, 0]);
    match check_intrinsic_simulation(&f, &x, 3, &d, BUDGET).unwrap() {
        SimulationVerdict::Fail(fail) => {
            assert_eq!(fail.step, 1);
            assert_eq!(fail.distance.exponent(), Some(0));
        }
        v => panic!("expected failure, got {v}"),
    }
}

#[test]
fn universal_rule_leaves_mixed_disks_undefined() {
    let f = xor_label_rule();
    let a = xor_ref();
    let b = RuleRef::new(flipped(a.description()));
    let x = fixtures::cycle(&[1, 0, 0]);
    let mut mixed = label_with(&x, &a).unwrap().to_port_graph();
    let mut l = mixed.label(1).clone();
    l.rule = b;
    mixed.set_label(1, l);
    let mixed = CayleyGraph::canonicalize_at(&mixed, 0).unwrap();
    let univ = f_univ(*f.params(), BUDGET);
    assert!(univ.apply(&mixed.disk(1)).unwrap().is_none());
    assert!(apply_localizable(&univ, &mixed).is_err());
}

#[test]
fn labelling_checks_parameters() {
    let d = xor_ref();
    assert!(matches!(
        label_with(&fixtures::fig4(), &d),
        Err(UniversalError::ParamMismatch(_))
    ));
    assert!(matches!(
        label_with(&fixtures::cycle(&[0, 3]), &d),
        Err(UniversalError::ParamMismatch(_))
    ));
    let wrong = RuleParams::new(2, 2, 0, 3, 0).unwrap();
    let univ = f_univ(wrong, BUDGET);
    let x = label_with(&fixtures::cycle(&[0, 1]), &d).unwrap();
    assert!(univ.apply(&x.disk(0)).unwrap().is_none());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn labelling_commutes_with_disks_and_projection(seed: u64, r in 0usize..3) {
        let d = xor_ref();
        let x = random_graph_upto(&mut seeded(seed), 2, 2, 15);
        let lx = label_with(&x, &d).unwrap();
        prop_assert_eq!(lx.disk(r).into_graph(), label_with(&x.disk(r).into_graph(), &d).unwrap());
        prop_assert_eq!(project(&lx), x);
    }

    #[test]
    fn machine_builds_random_graphs(seed: u64) {
        let d = xor_ref();
        let x = random_graph_upto(&mut seeded(seed), 2, 2, 20);
        let run = run_machine(build_machine_world(&x, &d).unwrap(), 1_000_000).unwrap();
        prop_assert_eq!(run.graph, label_with(&x, &d).unwrap());
        prop_assert!(run.trace.iter().all(|t| t.max_distance <= 2));
    }

    #[test]
    fn machine_and_decoder_agree_on_damaged_codes(seed: u64) {
        let d = xor_ref();
        let mut rng = seeded(seed);
        let x = random_graph_upto(&mut rng, 2, 2, 8);
        let mut tokens = encode_graph(&x).tokens().to_vec();
        let at = rng.gen_range(0..tokens.len());
        match rng.gen_range(0..4) {
            0 => {
                tokens.remove(at);
            }
            1 => tokens.insert(at, GraphToken::Bar),
            2 => tokens.insert(at, GraphToken::Pair(rng.gen_range(1..=2), rng.gen_range(1..=2))),
            _ => {
                let other = rng.gen_range(0..tokens.len());
                tokens.swap(at, other);
            }
        }
        let code = GraphCode::new(tokens);
        let decoded = decode_graph(&code, 2);
        let built = run_machine(world_from_code(&code, &d), 100_000);
        match (decoded, built) {
            (Ok(g), Ok(run)) => prop_assert_eq!(project(&run.graph), g),
            (Err(_), Err(UniversalError::Malformed { .. })) => {}
            (a, b) => prop_assert!(false, "{code}: decoder {:?} machine {:?}", a.map(|_| ()), b.map(|r| r.steps)),
        }
    }
}
