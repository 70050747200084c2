use std::path::PathBuf;
use std::sync::Arc;

use comply_core::automaton::{
    bitflip_spec, load_automaton, AutomatonObject, AutomatonSpec, Target, Transition,
    TransitionKind,
};
use comply_core::kernel::{LangId, NamelessConfiguration, NamelessObject, Selector};
use comply_core::logrel::{check_term, replay, CheckBudget};
use comply_core::suites::{equivariance_suite, oracle_compliant, oracle_sampled_suite};
use comply_core::types::{parse_type, SessionType};

const FLIP: &str = "(1 (+) 1) & (1 (+) 1)";

fn fixture(name: &str) -> AutomatonSpec {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    load_automaton(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn lone(spec: &AutomatonSpec) -> NamelessConfiguration {
    NamelessConfiguration::lone(AutomatonObject::initial(Arc::new(spec.clone())).into_object())
}

#[test]
fn builtin_and_declared_bitflip_agree() {
    let ty = parse_type(FLIP).unwrap();
    let budget = CheckBudget::default();
    let declared = check_term(&lone(&fixture("bitflip.json")), &ty, &budget);
    let builtin = check_term(
        &NamelessConfiguration::lone(NamelessObject::bitflip(
            comply_core::automaton::BitFlipState::S0,
        )),
        &ty,
        &budget,
    );
    assert!(declared.is_compliant() && builtin.is_compliant());
    assert_eq!(
        declared.witness().unwrap().shape(),
        builtin.witness().unwrap().shape()
    );
}

#[test]
fn mutant_fixtures_are_the_described_edits() {
    let base = bitflip_spec();
    assert_eq!(fixture("bitflip_mutant.json"), base.without_transition(4));
    let s1 = Transition {
        from: 1,
        kind: TransitionKind::SendSel(Selector::Pi1),
        to: Target::State(3),
    };
    assert_eq!(
        fixture("bitflip_s1_pi1.json"),
        base.with_transition(2, s1).unwrap()
    );
    let retarget = Transition {
        from: 0,
        kind: TransitionKind::RecvSel(Selector::Pi1),
        to: Target::State(2),
    };
    assert_eq!(
        fixture("bitflip_retarget.json"),
        base.with_transition(0, retarget).unwrap()
    );
}

#[test]
fn mutant_verdicts_agree_with_the_table_oracle() {
    let budget = CheckBudget::default();
    let types: Vec<SessionType> = [FLIP, "1", "1 & 1", "(1 (+) 1) & 1", "1 & (1 (+) 1)"]
        .iter()
        .map(|s| parse_type(s).unwrap())
        .collect();
    for name in [
        "bitflip.json",
        "bitflip_mutant.json",
        "bitflip_s1_pi1.json",
        "bitflip_retarget.json",
    ] {
        let spec = fixture(name);
        for ty in &types {
            let v = check_term(&lone(&spec), ty, &budget);
            assert!(!v.is_unknown(), "{name} :: {ty}");
            assert_eq!(
                v.is_compliant(),
                oracle_compliant(&spec, spec.initial(), ty),
                "{name} :: {ty}"
            );
            if let Some(w) = v.witness() {
                replay(&lone(&spec), ty, w).unwrap();
            }
        }
    }
}

#[test]
fn removing_the_close_is_detected_at_the_right_branch() {
    let v = check_term(
        &lone(&fixture("bitflip_mutant.json")),
        &parse_type(FLIP).unwrap(),
        &CheckBudget::default(),
    );
    assert!(v.is_non_compliant());
    let shown = v.to_string();
    assert!(shown.contains("S3"), "{shown}");
}

#[test]
fn every_language_is_equivariant() {
    for lang in LangId::ALL {
        let r = equivariance_suite(lang, 300, 17);
        assert!(r.passed(), "{r}");
        assert_eq!(r.cases, 300);
    }
}

#[test]
fn sampled_four_state_automata_agree_with_the_oracle() {
    let r = oracle_sampled_suite(2000, 5, 4, 2, 5, &CheckBudget::default());
    assert!(r.passed(), "{r}");
    assert!(r.counters.get("compliant").copied().unwrap_or(0) > 0);
}
