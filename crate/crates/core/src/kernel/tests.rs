use std::collections::BTreeSet;

use super::*;
use crate::automaton::BitFlipState;
use crate::proclang::parse_term;

fn c(n: u64) -> ChannelName {
    ChannelName(n)
}

fn term(src: &str) -> NamelessObject {
    NamelessObject::term(parse_term(src).unwrap()).unwrap()
}

fn proc(a: u64, src: &str) -> AtomicProcess {
    AtomicProcess::proc(c(a), term(src))
}

fn cfg(procs: Vec<AtomicProcess>) -> Configuration {
    Configuration::new(procs).unwrap()
}

#[test]
fn send_alone_closes() {
    let o = cfg(vec![proc(0, "send()")]);
    let steps: Vec<(Action, Configuration)> = step(&o).into_iter().collect();
    assert_eq!(
        steps,
        vec![(Action::send(c(0), Payload::Close), Configuration::empty())]
    );
}

#[test]
fn close_communication_is_silent() {
    let o = cfg(vec![proc(0, "send()"), proc(1, "recv_#0(); send()")]);
    let steps = step(&o);
    assert!(steps.contains(&(Action::Silent, cfg(vec![proc(1, "send()")]))));
    // the two halves are still visible as external steps
    assert!(steps.contains(&(
        Action::receive(c(0), Payload::Close),
        cfg(vec![proc(0, "send()"), proc(1, "send()")])
    )));
    assert!(steps.contains(&(
        Action::send(c(0), Payload::Close),
        cfg(vec![proc(1, "recv_#0(); send()")])
    )));
    assert_eq!(steps.len(), 3);
}

#[test]
fn forwarder_takes_over_the_provider() {
    let p = term("send(pi1); send()");
    let o = cfg(vec![
        AtomicProcess::proc(c(0), p.clone()),
        AtomicProcess::fwd(c(1), c(0)).unwrap(),
    ]);
    assert!(step(&o).contains(&(Action::Silent, cfg(vec![AtomicProcess::proc(c(1), p)]))));
}

#[test]
fn channel_passing_communication() {
    // #1 sends the channel #0 to the receiver on #1
    let o = cfg(vec![
        proc(0, "send()"),
        proc(1, "send(#0); send()"),
        proc(2, "recv_#1(x => recv_x(); recv_#1(); send())"),
    ]);
    let silent = silent_successors(&o);
    let expected = cfg(vec![
        proc(0, "send()"),
        proc(1, "send()"),
        proc(2, "recv_#0(); recv_#1(); send()"),
    ]);
    assert!(silent.contains(&expected), "{silent:?}");
}

#[test]
fn self_forward_rejected() {
    assert_eq!(
        AtomicProcess::fwd(c(3), c(3)),
        Err(KernelError::SelfForward(c(3)))
    );
}

#[test]
fn silent_closure_fuel_zero_is_reflexive() {
    let o = cfg(vec![proc(0, "send()"), proc(1, "recv_#0(); send()")]);
    let cl = silent_closure(&o, 0);
    assert_eq!(cl.states(), &[o]);
    assert!(cl.exhausted());
}

#[test]
fn silent_closure_fuel_one() {
    let o = cfg(vec![proc(0, "send()"), proc(1, "recv_#0(); send()")]);
    let cl = silent_closure(&o, 1);
    assert!(cl.contains(&cfg(vec![proc(1, "send()")])));
    assert_eq!(cl.states().len(), 2);
    assert!(!cl.exhausted());
    let idx = cl.position(&cfg(vec![proc(1, "send()")])).unwrap();
    assert_eq!(cl.path_to(idx), vec![o, cfg(vec![proc(1, "send()")])]);
    assert_eq!(cl.depth_of(idx), 1);
}

#[test]
fn search_and_reach_agree_with_the_closure() {
    let o = cfg(vec![proc(0, "let x:1 <- send(); recv_x(); send()")]);
    let ready = |s: &Configuration| s == &cfg(vec![proc(0, "send()")]);
    let cl = silent_search(&o, 8, ready);
    let found = cl.found().unwrap();
    assert_eq!(cl.depth_of(found), 2);
    let path = silent_reach(&o, 8, ready).unwrap();
    assert_eq!(path.len(), 3);
    assert!(silent_reach(&o, 1, ready).is_none());
    assert!(silent_search(&o, 1, ready).found().is_none());
}

#[test]
fn step_with_action_on_the_bitflip_table() {
    let at = |s: BitFlipState| cfg(vec![AtomicProcess::proc(c(0), s.object())]);
    assert_eq!(
        step_with_action(&at(BitFlipState::S3), Action::send(c(0), Payload::Close)),
        BTreeSet::from([Configuration::empty()])
    );
    assert_eq!(
        step_with_action(
            &at(BitFlipState::S0),
            Action::receive(c(0), Payload::Sel(Selector::Pi1))
        ),
        BTreeSet::from([at(BitFlipState::S1)])
    );
    assert!(step_with_action(
        &at(BitFlipState::S0),
        Action::send(c(0), Payload::Sel(Selector::Pi1))
    )
    .is_empty());
}

#[test]
fn instantiate_examples() {
    let s0 = NamelessConfiguration::lone(BitFlipState::S0.object());
    assert_eq!(
        s0.instantiate(c(4)).unwrap(),
        cfg(vec![AtomicProcess::proc(c(4), BitFlipState::S0.object())])
    );
    let w = NamelessConfiguration::new(cfg(vec![proc(1, "send()")]), term("recv_#1(); send()"));
    assert_eq!(
        w.instantiate(c(0)).unwrap(),
        cfg(vec![proc(1, "send()"), proc(0, "recv_#1(); send()")])
    );
    assert_eq!(
        w.instantiate(c(1)),
        Err(KernelError::DuplicateProvider(c(1)))
    );
}

#[test]
fn deinstantiate_inverts_instantiate() {
    let w = NamelessConfiguration::new(cfg(vec![proc(1, "send()")]), term("recv_#1(); send()"));
    let o = w.instantiate(c(0)).unwrap();
    assert_eq!(NamelessConfiguration::deinstantiate(&o, c(0)), Some(w));
    assert_eq!(NamelessConfiguration::deinstantiate(&o, c(7)), None);
    let f = cfg(vec![
        proc(1, "send()"),
        AtomicProcess::fwd(c(0), c(1)).unwrap(),
    ]);
    assert_eq!(NamelessConfiguration::deinstantiate(&f, c(0)), None);
}

#[test]
fn duplicate_providers_are_rejected() {
    assert_eq!(
        Configuration::new(vec![proc(0, "send()"), proc(0, "send()")]),
        Err(KernelError::DuplicateProvider(c(0)))
    );
    let a = cfg(vec![proc(0, "send()")]);
    assert_eq!(a.union(&a), Err(KernelError::DuplicateProvider(c(0))));
}

#[test]
fn multiset_order_does_not_matter() {
    let a = cfg(vec![proc(0, "send()"), proc(1, "send(pi2); send()")]);
    let b = cfg(vec![proc(1, "send(pi2); send()"), proc(0, "send()")]);
    assert_eq!(a, b);
}

#[test]
fn step_is_deterministic_and_never_leaves_tombstones() {
    let o = cfg(vec![
        proc(0, "send()"),
        proc(1, "let y:1 <- send(); recv_#0(); recv_y(); send()"),
        AtomicProcess::proc(c(2), BitFlipState::S1.object()),
    ]);
    assert_eq!(step(&o), step(&o.clone()));
    for (_, succ) in step(&o) {
        succ.check_well_formed().unwrap();
        assert!(succ.len() <= o.len() + 1);
    }
    // the closing process leaves nothing behind
    let closed: Vec<Configuration> = step_with_action(&o, Action::send(c(0), Payload::Close))
        .into_iter()
        .collect();
    assert_eq!(closed.len(), 1);
    assert_eq!(closed[0].len(), 2);
}

#[test]
fn cut_draws_a_name_fresh_for_the_whole_configuration() {
    let o = cfg(vec![
        proc(0, "let x:1 <- send(); recv_x(); send()"),
        proc(5, "send()"),
    ]);
    let succ: Vec<Configuration> = silent_successors(&o).into_iter().collect();
    assert_eq!(succ.len(), 1);
    assert_eq!(
        succ[0],
        cfg(vec![
            proc(6, "send()"),
            proc(0, "recv_#6(); send()"),
            proc(5, "send()")
        ])
    );
}

#[test]
fn frame_rule_single_steps() {
    let o = cfg(vec![proc(0, "send()"), proc(1, "recv_#0(); send()")]);
    let frame = cfg(vec![AtomicProcess::proc(c(9), BitFlipState::S2.object())]);
    let framed = o.union(&frame).unwrap();
    for (a, succ) in step(&o) {
        assert!(step(&framed).contains(&(a, succ.union(&frame).unwrap())));
    }
}

#[test]
fn nameless_steps_are_uniform_in_the_provider() {
    // a nameless configuration steps the same way at ten fresh names
    let w = NamelessConfiguration::new(
        cfg(vec![proc(1, "send()")]),
        term("let x:1 <- send(); recv_#1(); recv_x(); send(pi2); send()"),
    );
    let canon = |a: ChannelName| -> BTreeSet<Configuration> {
        let succ = silent_successors(&w.instantiate(a).unwrap());
        succ.into_iter()
            .map(|s| {
                // name the provider 0 and the fresh cut name 1000
                let mut fresh = s.channels();
                fresh.remove(&a);
                fresh.remove(&c(1));
                let mut map = std::collections::BTreeMap::from([(a, c(0))]);
                for f in fresh {
                    map.insert(f, c(1000));
                }
                s.rename(&renaming(map))
            })
            .collect()
    };
    let reference = canon(c(2));
    assert!(!reference.is_empty());
    for a in 3..13 {
        assert_eq!(canon(c(a)), reference, "at {a}");
    }
}

#[test]
fn alpha_equivalence() {
    let x = cfg(vec![proc(3, "send()"), proc(0, "recv_#3(); send()")]);
    let y = cfg(vec![proc(7, "send()"), proc(0, "recv_#7(); send()")]);
    let fixed = BTreeSet::from([c(0)]);
    assert!(alpha_equivalent(&x, &y, &fixed));
    assert!(!alpha_equivalent(&x, &y, &BTreeSet::from([c(0), c(3)])));
    let z = cfg(vec![proc(7, "send()"), proc(0, "send()")]);
    assert!(!alpha_equivalent(&x, &z, &fixed));
}

#[test]
fn equivariance_trial_rejects_bad_renamings() {
    let trial = EquivarianceTrial {
        obj: term("send()"),
        provider: c(0),
        inputs: vec![],
        rho: std::collections::BTreeMap::new(),
    };
    assert!(equivariance_holds(&trial).is_err());
    let trial = EquivarianceTrial {
        obj: term("recv_#1(); send()"),
        provider: c(0),
        inputs: vec![],
        rho: [(c(0), c(5)), (c(1), c(5))].into_iter().collect(),
    };
    assert!(equivariance_holds(&trial).is_err());
    let trial = EquivarianceTrial {
        obj: term("let x:1 <- send(); recv_#1(); recv_x(); send()"),
        provider: c(0),
        inputs: vec![c(2)],
        rho: [(c(0), c(40)), (c(1), c(3)), (c(2), c(11))]
            .into_iter()
            .collect(),
    };
    equivariance_holds(&trial).unwrap();
}

/// An object that steps differently at channel 0, to show the
/// equivariance check catches it.
#[test]
fn equivariance_catches_name_dependence() {
    let obj = term("recv_#0(); send()");
    // providing #1, the term waits on #0; renamed so that #0 == provider it
    // still waits on a client channel, which is fine
    let ok = EquivarianceTrial {
        obj: obj.clone(),
        provider: c(1),
        inputs: vec![],
        rho: [(c(0), c(9)), (c(1), c(8))].into_iter().collect(),
    };
    equivariance_holds(&ok).unwrap();
}
