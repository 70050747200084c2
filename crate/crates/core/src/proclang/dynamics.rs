use std::collections::BTreeSet;

use serde_json::Value;

use crate::kernel::{
    Action, AtomicProcess, ChannelName, KernelError, LangId, NameSupply, NamelessObject,
    ObjectBody, Payload, ProcessLanguage, Residual, Selector,
};

use super::{apply_subst, parse_term, single, Sym, Term};

/// The process calculus as a process language. Objects are closed terms.
pub struct SessProcLanguage;

fn expect_term(body: &ObjectBody) -> &Term {
    match body {
        ObjectBody::Term(t) => t,
        _ => unreachable!("sessproc language handed a foreign body"),
    }
}

fn proc(provider: ChannelName, t: Term) -> AtomicProcess {
    AtomicProcess::proc(provider, NamelessObject::unchecked(ObjectBody::Term(t)))
}

fn chan(s: &Sym) -> Option<ChannelName> {
    s.as_chan()
}

/// Transitions of `m` at provider `a`, except channel receptions.
///
/// `let x:A <- M1; M2` spawns `M1` at a fresh `b'` drawn from `fresh` and
/// continues as `{b'/x}M2` at `a`.
pub fn proclang_transitions(
    m: &Term,
    a: ChannelName,
    fresh: &mut NameSupply,
) -> Vec<(Action, Residual)> {
    let stay = |t: &Term| vec![proc(a, t.clone())];
    let sel_pair = |l: &Term, r: &Term| [(Selector::Pi1, stay(l)), (Selector::Pi2, stay(r))];
    match m {
        Term::Fwd(s) => match chan(s) {
            Some(b) if b != a => vec![(
                Action::Silent,
                vec![AtomicProcess::Fwd {
                    provider: a,
                    target: b,
                }],
            )],
            _ => vec![],
        },
        Term::Let {
            var, bound, body, ..
        } => {
            let mut avoid = m.channels();
            avoid.insert(a);
            let b = fresh.fresh(&avoid);
            vec![(
                Action::Silent,
                vec![
                    proc(b, (**bound).clone()),
                    proc(a, apply_subst(&single(var, b), body)),
                ],
            )]
        }
        Term::SendClose => vec![(Action::send(a, Payload::Close), vec![])],
        Term::RecvClose { on, then } => match chan(on) {
            Some(c) => vec![(Action::receive(c, Payload::Close), stay(then))],
            None => vec![],
        },
        Term::SendChanOn {
            on,
            chan: payload,
            then,
        } => match (chan(on), chan(payload)) {
            (Some(b), Some(c)) => vec![(Action::send(b, Payload::Chan(c)), stay(then))],
            _ => vec![],
        },
        Term::SendChan {
            chan: payload,
            then,
        } => match chan(payload) {
            Some(c) => vec![(Action::send(a, Payload::Chan(c)), stay(then))],
            None => vec![],
        },
        Term::RecvCase { left, right } => sel_pair(left, right)
            .into_iter()
            .map(|(s, r)| (Action::receive(a, Payload::Sel(s)), r))
            .collect(),
        Term::SendSelOn { on, sel, then } => match chan(on) {
            Some(b) => vec![(Action::send(b, Payload::Sel(*sel)), stay(then))],
            None => vec![],
        },
        Term::SendSel { sel, then } => vec![(Action::send(a, Payload::Sel(*sel)), stay(then))],
        Term::RecvCaseOn { on, left, right } => match chan(on) {
            Some(b) => sel_pair(left, right)
                .into_iter()
                .map(|(s, r)| (Action::receive(b, Payload::Sel(s)), r))
                .collect(),
            None => vec![],
        },
        Term::RecvChan { .. } | Term::RecvChanOn { .. } => vec![],
    }
}

/// Receptions of the channel `c` by `m` at provider `a`.
pub fn proclang_accept(m: &Term, a: ChannelName, c: ChannelName) -> Vec<(Action, Residual)> {
    match m {
        Term::RecvChan { var, then } => vec![(
            Action::receive(a, Payload::Chan(c)),
            vec![proc(a, apply_subst(&single(var, c), then))],
        )],
        Term::RecvChanOn { on, var, then } => match chan(on) {
            Some(b) => vec![(
                Action::receive(b, Payload::Chan(c)),
                vec![proc(a, apply_subst(&single(var, c), then))],
            )],
            None => vec![],
        },
        _ => vec![],
    }
}

impl ProcessLanguage for SessProcLanguage {
    fn id(&self) -> LangId {
        LangId::SessProc
    }

    fn validate(&self, body: &ObjectBody) -> Result<(), KernelError> {
        match body {
            ObjectBody::Term(t) => match t.free_vars().into_iter().next() {
                Some(x) => Err(KernelError::FreeVariable(x)),
                None => Ok(()),
            },
            _ => Err(KernelError::InvalidObject {
                lang: LangId::SessProc,
                reason: "not a term body".into(),
            }),
        }
    }

    fn transitions(
        &self,
        body: &ObjectBody,
        provider: ChannelName,
        fresh: &mut NameSupply,
    ) -> Vec<(Action, Residual)> {
        proclang_transitions(expect_term(body), provider, fresh)
    }

    fn accept(
        &self,
        body: &ObjectBody,
        provider: ChannelName,
        payload: ChannelName,
    ) -> Vec<(Action, Residual)> {
        proclang_accept(expect_term(body), provider, payload)
    }

    fn channels(&self, body: &ObjectBody) -> BTreeSet<ChannelName> {
        expect_term(body).channels()
    }

    fn rename(&self, body: &ObjectBody, rho: &dyn Fn(ChannelName) -> ChannelName) -> ObjectBody {
        ObjectBody::Term(expect_term(body).rename_channels(rho))
    }

    fn describe(&self, body: &ObjectBody) -> String {
        expect_term(body).to_string()
    }

    fn encode(&self, body: &ObjectBody) -> Value {
        Value::String(expect_term(body).to_string())
    }

    fn decode(&self, value: &Value) -> Result<ObjectBody, KernelError> {
        let src = value.as_str().ok_or_else(|| KernelError::InvalidObject {
            lang: LangId::SessProc,
            reason: "expected a term in surface syntax".into(),
        })?;
        let t = parse_term(src).map_err(|e| KernelError::InvalidObject {
            lang: LangId::SessProc,
            reason: e.to_string(),
        })?;
        let body = ObjectBody::Term(t);
        self.validate(&body)?;
        Ok(body)
    }
}
