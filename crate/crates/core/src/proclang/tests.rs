use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::kernel::{
    Action, ChannelName, KernelError, NameSupply, NamelessConfiguration, NamelessObject, Payload,
    Selector,
};
use crate::logrel::{check_term, CheckBudget};
use crate::types::{parse_type, SessionType};

fn c(n: u64) -> ChannelName {
    ChannelName(n)
}

fn t(src: &str) -> Term {
    parse_term(src).unwrap()
}

fn ty(src: &str) -> SessionType {
    parse_type(src).unwrap()
}

fn ctx(entries: &[(&str, &str)]) -> TypingContext {
    entries
        .iter()
        .map(|(x, a)| (x.to_string(), ty(a)))
        .collect()
}

fn lone(src: &str) -> NamelessConfiguration {
    NamelessConfiguration::lone(NamelessObject::term(t(src)).unwrap())
}

#[test]
fn typecheck_examples() {
    typecheck_closed(&Term::SendClose, &SessionType::One).unwrap();
    typecheck(
        &ctx(&[("x", "1 & 1")]),
        &Term::Fwd(Sym::var("x")),
        &ty("1 & 1"),
    )
    .unwrap();

    let e = typecheck_closed(&Term::Fwd(Sym::var("x")), &SessionType::One).unwrap_err();
    assert_eq!(e.kind, TypeErrorKind::UnboundVar("x".into()));

    let e = typecheck(&ctx(&[("y", "1")]), &Term::SendClose, &SessionType::One).unwrap_err();
    assert_eq!(
        e.kind,
        TypeErrorKind::LinearityViolation {
            var: "y".into(),
            issue: LinearityIssue::Unused
        }
    );

    let m = t("recv_#0(); send()");
    assert!(matches!(
        typecheck_closed(&m, &SessionType::One).unwrap_err().kind,
        TypeErrorKind::ChannelInSource(_)
    ));
}

#[test]
fn typecheck_connectives() {
    let cases = [
        ("send(pi2); send()", "(1 & 1) (+) 1", true),
        ("send(pi1); send()", "(1 & 1) (+) 1", false),
        ("send(pi2); send()", "1 (+) 1", true),
        ("recv(pi1 => send() | pi2 => send())", "1 & 1", true),
        ("recv(x => recv_x(); send())", "1 -o 1", true),
        ("let y:1 <- send(); send(y); send()", "1 (*) 1", true),
        ("recv(x => fwd(<- x))", "1 -o 1", true),
        ("recv(x => send())", "1 -o 1", false),
        ("recv(x => recv_x(); recv_x(); send())", "1 -o 1", false),
    ];
    for (src, a, ok) in cases {
        let a = ty(a);
        assert_eq!(typecheck_closed(&t(src), &a).is_ok(), ok, "{src} : {a}");
    }
}

#[test]
fn case_branches_must_agree() {
    let g = ctx(&[("x", "1")]);
    let m = t("recv(pi1 => recv_x(); send() | pi2 => send())");
    let e = typecheck(&g, &m, &ty("1 & 1")).unwrap_err();
    assert!(
        matches!(e.kind, TypeErrorKind::LinearityViolation { .. }),
        "{e}"
    );
}

#[test]
fn shadowing_is_rejected() {
    let g = ctx(&[("x", "1")]);
    let m = t("let x:1 <- send(); recv_x(); send()");
    let e = typecheck(&g, &m, &SessionType::One).unwrap_err();
    assert_eq!(e.kind, TypeErrorKind::ShadowedVar("x".into()));
}

#[test]
fn derivation_rules() {
    let d = typecheck_closed(&t("let y:1 <- send(); send(y); send()"), &ty("1 (*) 1")).unwrap();
    assert_eq!(d.rule, Rule::Cut);
    assert!(d.size() >= 3);
    assert!(d.render().contains("Cut"));
}

#[test]
fn adding_an_unused_variable_breaks_welltypedness() {
    // linearity, checked over generated terms
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let a = crate::types::random_type(&mut rng, 5, &crate::types::Connective::ALL);
        let g = ctx(&[("x", "1")]);
        let m = generate_open(&g, &a, 4, &mut rng);
        typecheck(&g, &m, &a).unwrap();
        let mut more = g.clone();
        more.insert("unused".into(), SessionType::One);
        assert!(typecheck(&more, &m, &a).is_err(), "{m}");
        assert!(typecheck(&TypingContext::new(), &m, &a).is_err(), "{m}");
    }
}

#[test]
fn apply_subst_examples() {
    let sigma: Substitution = [("x".to_string(), c(3))].into_iter().collect();
    assert_eq!(
        apply_subst(&sigma, &t("recv_x(); fwd(<- y)")),
        t("recv_#3(); fwd(<- y)")
    );
    // binders cut the substitution off
    assert_eq!(
        apply_subst(&sigma, &t("recv(x => fwd(<- x))")),
        t("recv(x => fwd(<- x))")
    );
    assert_eq!(
        apply_subst(&sigma, &t("let x:1 <- fwd(<- x); recv_x(); send()")),
        t("let x:1 <- fwd(<- #3); recv_x(); send()")
    );
    assert_eq!(
        apply_subst(&Substitution::new(), &t("fwd(<- x)")),
        t("fwd(<- x)")
    );
}

#[test]
fn subst_compose_examples() {
    let m = Term::let_(
        "x",
        SessionType::One,
        Term::SendClose,
        Term::Fwd(Sym::var("x")),
    );
    let sigma = single("y", c(7));
    assert!(subst_compose_check(&m, &sigma, "x", c(2)));
    let m = t("recv_y(); send_z(#1); fwd(<- x)");
    assert!(subst_compose_check(&m, &sigma, "x", c(2)));
    assert!(subst_compose_check(&m, &Substitution::new(), "z", c(0)));
}

#[test]
#[should_panic(expected = "domain")]
fn subst_compose_requires_a_fresh_variable() {
    subst_compose_check(&Term::SendClose, &single("x", c(1)), "x", c(2));
}

#[test]
fn discard_examples() {
    let g = ctx(&[("x", "1")]);
    let m = t("recv_x(); send()");
    let sigma = single("x", c(1));
    assert!(discard_check(&g, &m, &SessionType::One, &sigma, &single("z", c(9))).unwrap());
    assert!(matches!(
        discard_check(&g, &m, &SessionType::One, &sigma, &single("x", c(9))),
        Err(HarnessError::PreconditionFailed(_))
    ));
    assert!(discard_check(
        &g,
        &m,
        &SessionType::One,
        &Substitution::new(),
        &Substitution::new()
    )
    .is_err());
    assert!(discard_check(
        &g,
        &t("send()"),
        &SessionType::One,
        &sigma,
        &Substitution::new()
    )
    .is_err());
}

#[test]
fn transition_examples() {
    let mut supply = NameSupply::above(&std::collections::BTreeSet::from([c(0)]));
    let steps = proclang_transitions(&t("send(pi1); send()"), c(0), &mut supply);
    assert_eq!(steps.len(), 1);
    assert_eq!(steps[0].0, Action::send(c(0), Payload::Sel(Selector::Pi1)));

    let steps = proclang_transitions(
        &t("recv(pi1 => send() | pi2 => send(pi1); send())"),
        c(0),
        &mut supply,
    );
    let acts: Vec<Action> = steps.iter().map(|(a, _)| *a).collect();
    assert_eq!(
        acts,
        vec![
            Action::receive(c(0), Payload::Sel(Selector::Pi1)),
            Action::receive(c(0), Payload::Sel(Selector::Pi2))
        ]
    );

    // a cut spawns the bound term at a name fresh for the term and provider
    let steps = proclang_transitions(
        &t("let x:1 <- send(); recv_x(); recv_#4(); send()"),
        c(0),
        &mut supply,
    );
    assert_eq!(steps.len(), 1);
    assert_eq!(steps[0].0, Action::Silent);
    let spawned = steps[0].1[0].provider();
    assert!(spawned != c(0) && spawned != c(4));

    // forwarding to oneself is stuck, as are receptions without a payload
    assert!(proclang_transitions(&t("fwd(<- #0)"), c(0), &mut supply).is_empty());
    assert!(proclang_transitions(&t("recv(x => fwd(<- x))"), c(0), &mut supply).is_empty());
    assert_eq!(
        proclang_accept(&t("recv(x => fwd(<- x))"), c(0), c(5)).len(),
        1
    );
    assert!(proclang_accept(&t("send()"), c(0), c(5)).is_empty());
}

#[test]
fn complements_examples() {
    let budget = CheckBudget::default();
    let g = ctx(&[("x", "1")]);
    let s = extend_compl(&ComplementaryConfigs::new(), "x", lone("send()"), c(1)).unwrap();
    assert!(complements(&s, &g, &budget));
    assert!(!complements(&ComplementaryConfigs::new(), &g, &budget));
    assert!(!complements(&s, &TypingContext::new(), &budget));
    // wrong type
    let s2 = extend_compl(
        &ComplementaryConfigs::new(),
        "x",
        lone("send(pi1); send()"),
        c(1),
    )
    .unwrap();
    assert!(!complements(&s2, &g, &budget));
    assert_eq!(
        extend_compl(&s, "x", lone("send()"), c(2)),
        Err(ComplError::DuplicateKey("x".into()))
    );
    assert_eq!(s.substitution(), single("x", c(1)));
}

#[test]
fn apply_compl_examples() {
    let s = extend_compl(&ComplementaryConfigs::new(), "x", lone("send()"), c(1)).unwrap();
    let w = apply_compl(&s, &t("recv_#1(); send()")).unwrap();
    let o = w.instantiate(c(0)).unwrap();
    assert_eq!(o.len(), 2);
    // two complements wanting the same channel
    let s = extend_compl(&s, "y", lone("send()"), c(1)).unwrap();
    assert_eq!(
        apply_compl(&s, &Term::SendClose),
        Err(KernelError::DuplicateProvider(c(1)))
    );
    assert!(matches!(
        apply_compl(&ComplementaryConfigs::new(), &t("fwd(<- x)")),
        Err(KernelError::FreeVariable(_))
    ));
}

#[test]
fn ftlr_example() {
    let budget = CheckBudget::default();
    let g = ctx(&[("x", "1")]);
    let s = extend_compl(&ComplementaryConfigs::new(), "x", lone("send()"), c(1)).unwrap();
    let v = ftlr_check(&g, &t("recv_x(); send()"), &SessionType::One, &s, &budget).unwrap();
    assert!(v.is_compliant(), "{v:?}");
    // ill-typed terms and mismatched complements are refused
    assert!(ftlr_check(&g, &t("send()"), &SessionType::One, &s, &budget).is_err());
    assert!(ftlr_check(
        &TypingContext::new(),
        &t("send()"),
        &SessionType::One,
        &s,
        &budget
    )
    .is_err());
}

#[test]
fn ftlr_with_a_lolli_client() {
    // x provides 1 -o 1; the term feeds it a fresh unit and waits for it
    let budget = CheckBudget::default();
    let g = ctx(&[("x", "1 -o 1")]);
    let m = t("let y:1 <- send(); send_x(y); recv_x(); send()");
    let s = extend_compl(
        &ComplementaryConfigs::new(),
        "x",
        lone("recv(z => recv_z(); send())"),
        c(1),
    )
    .unwrap();
    let v = ftlr_check(&g, &m, &SessionType::One, &s, &budget).unwrap();
    assert!(v.is_compliant(), "{v:?}");
}

#[test]
fn adequacy_examples() {
    assert!(adequacy_check(&t("send()"), c(0), 0).unwrap());
    let m = t("let x:1 <- send(); recv_x(); send()");
    assert!(adequacy_check(&m, c(0), 2).unwrap());
    assert!(!adequacy_check(&m, c(0), 1).unwrap());
    assert!(adequacy_check(&t("send(pi1); send()"), c(0), 8).is_err());
}

#[test]
fn generated_terms_are_well_typed_and_reproducible() {
    for (seed, src) in [
        (1, "1"),
        (2, "1 & 1"),
        (3, "(1 -o 1) (*) 1"),
        (4, "1 (+) (1 & 1)"),
    ] {
        let a = ty(src);
        let m = generate_well_typed(&a, 5, seed);
        typecheck_closed(&m, &a).unwrap();
        assert_eq!(m, generate_well_typed(&a, 5, seed));
        let k = canonical_term(&a);
        typecheck_closed(&k, &a).unwrap();
    }
    assert_eq!(canonical_term(&SessionType::One), Term::SendClose);
    assert_eq!(canonical_term(&ty("1 (+) 1")), t("send(pi1); send()"));
}

#[test]
fn generated_terms_are_compliant() {
    let budget = CheckBudget::default();
    for seed in 0..20 {
        let a = ty("1 & (1 (+) 1)");
        let m = generate_well_typed(&a, 5, seed);
        let w = NamelessConfiguration::lone(NamelessObject::term(m.clone()).unwrap());
        assert!(check_term(&w, &a, &budget).is_compliant(), "{m}");
    }
}

#[test]
fn map_relations() {
    let a: BTreeMap<&str, u32> = [("x", 1), ("y", 2)].into_iter().collect();
    let b: BTreeMap<&str, u32> = [("x", 2), ("y", 4)].into_iter().collect();
    assert!(related_maps(&a, &b, |p, q| 2 * p == *q));
    assert!(!related_maps(&a, &remove_key(&b, &"y"), |_, _| true));
    assert_eq!(map_vals(|v| v * 2, &a), b);
}

#[test]
fn print_parse_examples() {
    for src in [
        "send()",
        "fwd(<- #3)",
        "let x:1 & 1 <- recv(pi1 => send() | pi2 => send()); send_x(pi2); recv_x(); send()",
        "recv_#2(y => send(y); send())",
        "let x:1 <- (send(pi1); send()); fwd(<- x)",
    ] {
        let m = t(src);
        assert_eq!(parse_term(&print_term(&m)).unwrap(), m, "{src}");
    }
    assert!(parse_term("send(").is_err());
    assert!(parse_type("1 & 1 (+) 1").is_err());
    assert!(parse_term("recv(let => send())").is_err());
    assert!(is_valid_var("x'") && !is_valid_var("send_x") && !is_valid_var("pi1"));
}

#[test]
fn typing_is_preserved_on_the_selection_fragment() {
    // in ⊕/& types every external step of a closed term leaves a term
    // that types at the residual type
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let frag = [
        crate::types::Connective::Plus,
        crate::types::Connective::With,
    ];
    for _ in 0..300 {
        let a = crate::types::random_type(&mut rng, 7, &frag);
        let m = generate_open(&TypingContext::new(), &a, 3, &mut rng);
        let mut supply = NameSupply::above(&std::collections::BTreeSet::from([c(0)]));
        for (act, res) in proclang_transitions(&m, c(0), &mut supply) {
            let Action::Labelled { payload, .. } = act else {
                continue;
            };
            let next = match (&a, payload) {
                (SessionType::Plus(l, r) | SessionType::With(l, r), Payload::Sel(s)) => {
                    if s == Selector::Pi1 {
                        l
                    } else {
                        r
                    }
                }
                (SessionType::One, Payload::Close) => {
                    assert!(res.is_empty());
                    continue;
                }
                other => panic!("unexpected step {other:?} of {m}"),
            };
            let crate::kernel::AtomicProcess::Proc { obj, .. } = &res[0] else {
                panic!()
            };
            let crate::kernel::ObjectBody::Term(body) = obj.body() else {
                panic!()
            };
            typecheck_closed(body, next).unwrap();
        }
    }
}

fn arb_term() -> impl Strategy<Value = Term> {
    any::<u64>().prop_map(|seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_raw_term(&mut rng, 5, &["x", "y", "z"], &[c(0), c(1), c(2)])
    })
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(m in arb_term()) {
        let printed = print_term(&m);
        prop_assert_eq!(parse_term(&printed).unwrap(), m);
    }

    #[test]
    fn renaming_commutes_with_substitution(m in arb_term(), k in 10u64..20) {
        let sigma = single("x", c(k));
        let rho = |n: ChannelName| ChannelName(n.0 + 100);
        prop_assert_eq!(
            apply_subst(&sigma, &m).rename_channels(&rho),
            apply_subst(&single("x", c(k + 100)), &m.rename_channels(&rho))
        );
    }
}
