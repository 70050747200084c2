use crate::kernel::{
    silent_successors, step_with_action, Action, Configuration, NamelessConfiguration, Payload,
    Selector,
};
use crate::types::SessionType;

use super::verdict::{TermWitness, ValueWitness};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("witness does not replay: {0}")]
pub struct ReplayError(pub String);

fn bad(msg: impl Into<String>) -> Result<(), ReplayError> {
    Err(ReplayError(msg.into()))
}

/// Re-executes every step recorded in `w` against the kernel, starting from
/// `start` instantiated at the witness's provider.
pub fn replay(
    start: &NamelessConfiguration,
    ty: &SessionType,
    w: &TermWitness,
) -> Result<(), ReplayError> {
    let first = start
        .instantiate(w.provider)
        .map_err(|e| ReplayError(e.to_string()))?;
    if w.path.first() != Some(&first) {
        return bad("path does not start at the instantiated configuration");
    }
    replay_term(w, ty)
}

fn replay_term(w: &TermWitness, ty: &SessionType) -> Result<(), ReplayError> {
    if w.path.is_empty() {
        return bad("empty path");
    }
    for pair in w.path.windows(2) {
        if !silent_successors(&pair[0]).contains(&pair[1]) {
            return bad(format!(
                "{} is not a silent successor of {}",
                pair[1], pair[0]
            ));
        }
    }
    let last = w.path.last().expect("non-empty");
    replay_value(last, w.provider, &w.value, ty)
}

fn expect_step(from: &Configuration, act: Action, to: &Configuration) -> Result<(), ReplayError> {
    if step_with_action(from, act).contains(to) {
        Ok(())
    } else {
        bad(format!("{from} does not step by {act} to {to}"))
    }
}

fn continue_at(
    w: &TermWitness,
    a: crate::kernel::ChannelName,
) -> Result<&Configuration, ReplayError> {
    if w.provider != a {
        return Err(ReplayError(format!(
            "continuation provided at {} instead of {a}",
            w.provider
        )));
    }
    w.path
        .first()
        .ok_or_else(|| ReplayError("empty path".into()))
}

fn replay_value(
    last: &Configuration,
    a: crate::kernel::ChannelName,
    v: &ValueWitness,
    ty: &SessionType,
) -> Result<(), ReplayError> {
    match (v, ty) {
        (ValueWitness::CloseStep, SessionType::One) => expect_step(
            last,
            Action::send(a, Payload::Close),
            &Configuration::empty(),
        ),
        (ValueWitness::PlusChoice { which, then }, SessionType::Plus(l, r)) => {
            expect_step(
                last,
                Action::send(a, Payload::Sel(*which)),
                continue_at(then, a)?,
            )?;
            replay_term(then, if *which == Selector::Pi1 { l } else { r })
        }
        (ValueWitness::WithBranches { first, second }, SessionType::With(l, r)) => {
            expect_step(
                last,
                Action::receive(a, Payload::Sel(Selector::Pi1)),
                continue_at(first, a)?,
            )?;
            expect_step(
                last,
                Action::receive(a, Payload::Sel(Selector::Pi2)),
                continue_at(second, a)?,
            )?;
            replay_term(first, l)?;
            replay_term(second, r)
        }
        (
            ValueWitness::TensorSplit {
                sent,
                residual,
                left,
                right,
            },
            SessionType::Tensor(l, r),
        ) => {
            expect_step(last, Action::send(a, Payload::Chan(*sent)), residual)?;
            let lc = continue_at(left, *sent)?;
            let rc = continue_at(right, a)?;
            if lc.union(rc).ok().as_ref() != Some(residual) {
                return bad("the two halves do not make up the residual");
            }
            replay_term(left, l)?;
            replay_term(right, r)
        }
        (ValueWitness::LolliCases { cases }, SessionType::Lolli(_, r)) => {
            if cases.is_empty() {
                return bad("no peers tested");
            }
            for case in cases {
                let peer = case
                    .peer
                    .instantiate(case.peer_channel)
                    .map_err(|e| ReplayError(e.to_string()))?;
                let combined = last.union(&peer).map_err(|e| ReplayError(e.to_string()))?;
                expect_step(
                    &combined,
                    Action::receive(a, Payload::Chan(case.peer_channel)),
                    continue_at(&case.then, a)?,
                )?;
                replay_term(&case.then, r)?;
            }
            Ok(())
        }
        _ => bad(format!(
            "witness node {} does not match type `{ty}`",
            v.shape()
        )),
    }
}
