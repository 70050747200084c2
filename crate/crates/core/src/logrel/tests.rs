use std::sync::Arc;

use super::*;
use crate::automaton::{bitflip_spec, AutomatonObject, BitFlipState};
use crate::kernel::{NamelessObject, Selector};
use crate::proclang::{parse_term, typecheck_closed};
use crate::types::parse_type;

fn ty(s: &str) -> SessionType {
    parse_type(s).unwrap()
}

fn lone_term(src: &str) -> NamelessConfiguration {
    NamelessConfiguration::lone(NamelessObject::term(parse_term(src).unwrap()).unwrap())
}

fn lone_flip(s: BitFlipState) -> NamelessConfiguration {
    NamelessConfiguration::lone(s.object())
}

fn assert_replays(omega: &NamelessConfiguration, t: &SessionType, v: &Verdict) {
    let w = v
        .witness()
        .unwrap_or_else(|| panic!("expected Compliant, got {v}"));
    replay(omega, t, w).unwrap();
    assert!(w.matches_shape(t), "shape {} vs {t}", w.shape());
}

#[test]
fn bitflip_is_compliant_with_flip_shape() {
    let b = CheckBudget::default();
    let t = ty("(1 (+) 1) & (1 (+) 1)");
    let omega = lone_flip(BitFlipState::S0);
    let v = check_term(&omega, &t, &b);
    assert_replays(&omega, &t, &v);
    assert_eq!(
        v.witness().unwrap().shape(),
        "With(Plus(pi2, Close), Plus(pi1, Close))"
    );
    assert!(matches!(
        v,
        Verdict::Compliant {
            approximate: false,
            ..
        }
    ));
}

#[test]
fn spec_driven_automaton_agrees_with_builtin() {
    let b = CheckBudget::default();
    let t = ty("(1 (+) 1) & (1 (+) 1)");
    let omega = NamelessConfiguration::lone(
        AutomatonObject::initial(Arc::new(bitflip_spec())).into_object(),
    );
    let v = check_term(&omega, &t, &b);
    assert_replays(&omega, &t, &v);
    assert_eq!(
        v.witness().unwrap().shape(),
        "With(Plus(pi2, Close), Plus(pi1, Close))"
    );
}

#[test]
fn send_close_is_compliant_at_one() {
    let omega = lone_term("send()");
    let v = check_term(&omega, &SessionType::One, &CheckBudget::default());
    assert_replays(&omega, &SessionType::One, &v);
    assert_eq!(v.witness().unwrap().value, ValueWitness::CloseStep);
    assert_eq!(v.witness().unwrap().path.len(), 1);
}

#[test]
fn s0_is_not_compliant_at_one() {
    let v = check_term(
        &lone_flip(BitFlipState::S0),
        &SessionType::One,
        &CheckBudget::default(),
    );
    match v {
        Verdict::NonCompliant { reason } => {
            assert_eq!(reason.ty, SessionType::One);
            assert!(reason.expected.contains("!()"));
        }
        v => panic!("expected NonCompliant, got {v}"),
    }
}

#[test]
fn value_examples() {
    let b = CheckBudget::default();
    let v = check_value(&lone_flip(BitFlipState::S3), &SessionType::One, &b);
    assert_eq!(v.witness().unwrap().value, ValueWitness::CloseStep);
    let t = ty("1 (+) 1");
    let v = check_value(&lone_flip(BitFlipState::S1), &t, &b);
    match &v.witness().unwrap().value {
        ValueWitness::PlusChoice { which, .. } => assert_eq!(*which, Selector::Pi2),
        w => panic!("unexpected {w:?}"),
    }
    assert_replays(&lone_flip(BitFlipState::S1), &t, &v);
}

#[test]
fn value_interpretation_takes_no_silent_steps() {
    let omega = lone_term("let x:1 <- send(); recv_x(); send()");
    let b = CheckBudget::default();
    assert!(check_term(&omega, &SessionType::One, &b).is_compliant());
    assert!(check_value(&omega, &SessionType::One, &b).is_non_compliant());
}

#[test]
fn canonical_inhabitant_examples() {
    let first = |s: &str| canonical_inhabitants(&ty(s), 1)[0].head.to_string();
    assert_eq!(first("1"), "sessproc[send()]");
    assert_eq!(first("1 (+) 1"), "sessproc[send(pi1); send()]");
    assert_eq!(
        first("1 & 1"),
        "sessproc[recv(pi1 => send() | pi2 => send())]"
    );
    for s in ["1", "1 (*) 1", "(1 -o 1) & (1 (+) 1)", "1 -o 1 (*) 1"] {
        let t = ty(s);
        let peers = canonical_inhabitants(&t, 3);
        assert!(!peers.is_empty() && peers.len() <= 3);
        for p in peers {
            assert!(p.ambient.is_empty());
            typecheck_closed(p.head.as_term().unwrap(), &t).unwrap();
        }
    }
}

#[test]
fn tensor_split_and_lolli_cases() {
    let b = CheckBudget::default();
    let t = ty("1 (*) 1");
    let omega = lone_term("let y:1 <- send(); send(y); send()");
    let v = check_term(&omega, &t, &b);
    assert_replays(&omega, &t, &v);
    assert!(matches!(
        v,
        Verdict::Compliant {
            approximate: false,
            ..
        }
    ));

    let t = ty("1 -o 1");
    let omega = lone_term("recv(y => recv_y(); send())");
    let v = check_term(&omega, &t, &b);
    assert_replays(&omega, &t, &v);
    assert!(matches!(
        v,
        Verdict::Compliant {
            approximate: true,
            ..
        }
    ));
    match &v.witness().unwrap().value {
        ValueWitness::LolliCases { cases } => assert!(!cases.is_empty()),
        w => panic!("unexpected {w:?}"),
    }
    assert!(matches!(
        v.clone().strict(),
        Verdict::Unknown {
            cause: UnknownCause::LolliApproximation,
            ..
        }
    ));
}

#[test]
fn ill_behaved_configurations_are_rejected() {
    let b = CheckBudget::default();
    // never closes its argument: leaves a process behind
    let omega = lone_term("recv(y => send())");
    assert!(check_term(&omega, &ty("1 -o 1"), &b).is_non_compliant());
    // selects a branch of the wrong type
    let omega = lone_term("send(pi2); recv(pi1 => send() | pi2 => send())");
    assert!(check_term(&omega, &ty("1 (+) 1"), &b).is_non_compliant());
    assert!(check_term(&omega, &ty("1 (+) (1 & 1)"), &b).is_compliant());
}

#[test]
fn fuel_exhaustion_is_unknown() {
    let omega = lone_term("let x:1 <- send(); recv_x(); send()");
    let b = CheckBudget {
        silent_fuel: 1,
        ..CheckBudget::default()
    };
    match check_term(&omega, &SessionType::One, &b) {
        Verdict::Unknown { cause, .. } => assert_eq!(cause, UnknownCause::FuelExhausted),
        v => panic!("expected Unknown, got {v}"),
    }
    let b = CheckBudget {
        silent_fuel: 2,
        ..b
    };
    assert!(check_term(&omega, &SessionType::One, &b).is_compliant());
}

#[test]
fn state_limit_is_reported() {
    let omega = lone_term("let x:1 <- send(); let y:1 <- send(); recv_x(); recv_y(); send()");
    let b = CheckBudget {
        state_limit: 2,
        ..CheckBudget::default()
    };
    match check_term(&omega, &SessionType::One, &b) {
        Verdict::Unknown { cause, .. } => assert_eq!(cause, UnknownCause::StateLimitExceeded),
        v => panic!("expected Unknown, got {v}"),
    }
    assert!(check_term(&omega, &SessionType::One, &CheckBudget::default()).is_compliant());
}

#[test]
fn budget_json_without_state_limit_gets_the_default() {
    let b: CheckBudget = serde_json::from_str(
        r#"{"silent_fuel":5,"partition_limit":3,"lolli_peers":1,"name_samples":2}"#,
    )
    .unwrap();
    assert_eq!(b.state_limit, CheckBudget::default().state_limit);
    assert_eq!(b.silent_fuel, 5);
}

#[test]
fn partition_limit_is_reported() {
    let omega = lone_term("let y:1 <- send(); send(y); send()");
    let b = CheckBudget {
        partition_limit: 1,
        ..CheckBudget::default()
    };
    // the limit is clamped to 2, which the two-process residual meets
    assert!(check_term(&omega, &ty("1 (*) 1"), &b).is_compliant());
    let omega = lone_term("let z:1 <- send(); let y:1 <- send(); send(y); recv_z(); send()");
    let b = CheckBudget {
        partition_limit: 2,
        ..CheckBudget::default()
    };
    match check_term(&omega, &ty("1 (*) 1"), &b) {
        Verdict::Unknown { cause, .. } => assert_eq!(cause, UnknownCause::PartitionLimitExceeded),
        v => panic!("expected Unknown, got {v}"),
    }
    assert!(check_term(&omega, &ty("1 (*) 1"), &CheckBudget::default()).is_compliant());
}

#[test]
fn backwards_closure_examples() {
    let b = CheckBudget::default();
    let later = lone_term("send()");
    assert!(backwards_closure_check(&later, &later, &SessionType::One, &b).unwrap());
    let earlier = lone_term("let x:1 <- send(); recv_x(); send()");
    assert!(backwards_closure_check(&earlier, &later, &SessionType::One, &b).unwrap());
    // antecedent false: vacuous
    let bad = lone_flip(BitFlipState::S0);
    assert!(backwards_closure_check(&bad, &bad, &SessionType::One, &b).unwrap());
    // unreachable
    assert!(matches!(
        backwards_closure_check(&later, &earlier, &SessionType::One, &b),
        Err(ClosureError::PreconditionFailed(_))
    ));
}

#[test]
fn replay_rejects_tampered_witness() {
    let b = CheckBudget::default();
    let t = ty("(1 (+) 1) & (1 (+) 1)");
    let omega = lone_flip(BitFlipState::S0);
    let v = check_term(&omega, &t, &b);
    let mut w = v.witness().unwrap().clone();
    if let ValueWitness::WithBranches { first, second } = &mut w.value {
        std::mem::swap(first, second);
    }
    assert!(replay(&omega, &t, &w).is_err());
}

#[test]
fn verdicts_serialize() {
    let v = check_term(
        &lone_flip(BitFlipState::S3),
        &SessionType::One,
        &CheckBudget::default(),
    );
    let j = serde_json::to_value(&v).unwrap();
    assert_eq!(j["verdict"], "compliant");
    assert_eq!(j["witness"]["value"], "close_step");
    let v = check_term(
        &lone_flip(BitFlipState::S0),
        &SessionType::One,
        &CheckBudget::default(),
    );
    let j = serde_json::to_value(&v).unwrap();
    assert_eq!(j["verdict"], "non_compliant");
    assert_eq!(j["reason"]["ty"], "1");
}
