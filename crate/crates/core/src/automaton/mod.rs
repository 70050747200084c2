//! Finite-state machines as a process language, plus the built-in
//! bit-flipping automaton as a language of its own.

mod bitflip;
mod spec;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde_json::{json, Value};

use crate::kernel::{
    Action, AtomicProcess, ChannelName, KernelError, LangId, NameSupply, NamelessObject,
    ObjectBody, ProcessLanguage, Residual,
};

pub use bitflip::{BitFlipLanguage, BitFlipState};
pub use spec::{
    bitflip_spec, load_automaton, AutomatonError, AutomatonSpec, Target, Transition,
    TransitionKind, TERMINATE,
};

/// A running automaton: a shared spec and the current state.
#[derive(Debug, Clone)]
pub struct AutomatonObject {
    spec: Arc<AutomatonSpec>,
    state: usize,
}

impl AutomatonObject {
    pub fn new(spec: Arc<AutomatonSpec>, state: usize) -> Result<AutomatonObject, AutomatonError> {
        if state >= spec.states().len() {
            return Err(AutomatonError::DanglingState {
                path: "$.state".into(),
                state: format!("#{state}"),
            });
        }
        Ok(AutomatonObject { spec, state })
    }

    pub fn initial(spec: Arc<AutomatonSpec>) -> AutomatonObject {
        let state = spec.initial();
        AutomatonObject { spec, state }
    }

    pub fn spec(&self) -> &Arc<AutomatonSpec> {
        &self.spec
    }

    pub fn state(&self) -> usize {
        self.state
    }

    pub fn state_name(&self) -> &str {
        self.spec.state_name(self.state)
    }

    fn at(&self, state: usize) -> AutomatonObject {
        AutomatonObject {
            spec: Arc::clone(&self.spec),
            state,
        }
    }

    pub fn into_object(self) -> NamelessObject {
        NamelessObject::unchecked(ObjectBody::Automaton(self))
    }
}

impl PartialEq for AutomatonObject {
    fn eq(&self, other: &Self) -> bool {
        self.state == other.state
            && (Arc::ptr_eq(&self.spec, &other.spec) || self.spec == other.spec)
    }
}

impl Eq for AutomatonObject {}

impl PartialOrd for AutomatonObject {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AutomatonObject {
    fn cmp(&self, other: &Self) -> Ordering {
        let specs = if Arc::ptr_eq(&self.spec, &other.spec) {
            Ordering::Equal
        } else {
            self.spec.cmp(&other.spec)
        };
        specs.then(self.state.cmp(&other.state))
    }
}

impl Hash for AutomatonObject {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.state.hash(h);
    }
}

/// Object-level transitions of a spec state at `provider`. `make` turns a
/// successor state into the residual object.
pub(crate) fn spec_transitions(
    spec: &AutomatonSpec,
    state: usize,
    provider: ChannelName,
    make: impl Fn(usize) -> NamelessObject,
) -> Vec<(Action, Residual)> {
    spec.transitions_from(state)
        .map(|t| {
            let act = match t.kind {
                TransitionKind::RecvSel(s) => {
                    Action::receive(provider, crate::kernel::Payload::Sel(s))
                }
                TransitionKind::SendSel(s) => {
                    Action::send(provider, crate::kernel::Payload::Sel(s))
                }
                TransitionKind::SendClose => Action::send(provider, crate::kernel::Payload::Close),
            };
            let res = match t.to {
                Target::State(s) => vec![AtomicProcess::proc(provider, make(s))],
                Target::Terminate => Vec::new(),
            };
            (act, res)
        })
        .collect()
}

/// Transitions of an automaton object providing `provider`.
pub fn automaton_transitions(
    obj: &AutomatonObject,
    provider: ChannelName,
) -> Vec<(Action, Residual)> {
    spec_transitions(&obj.spec, obj.state, provider, |s| obj.at(s).into_object())
}

pub struct AutomatonLanguage;

fn expect_automaton(body: &ObjectBody) -> &AutomatonObject {
    match body {
        ObjectBody::Automaton(a) => a,
        _ => unreachable!("automaton language handed a foreign body"),
    }
}

impl ProcessLanguage for AutomatonLanguage {
    fn id(&self) -> LangId {
        LangId::Automaton
    }

    fn validate(&self, body: &ObjectBody) -> Result<(), KernelError> {
        match body {
            ObjectBody::Automaton(a) if a.state < a.spec.states().len() => Ok(()),
            ObjectBody::Automaton(_) => Err(KernelError::InvalidObject {
                lang: LangId::Automaton,
                reason: "state index out of range".into(),
            }),
            _ => Err(KernelError::InvalidObject {
                lang: LangId::Automaton,
                reason: "not an automaton body".into(),
            }),
        }
    }

    fn transitions(
        &self,
        body: &ObjectBody,
        provider: ChannelName,
        _fresh: &mut NameSupply,
    ) -> Vec<(Action, Residual)> {
        automaton_transitions(expect_automaton(body), provider)
    }

    fn channels(&self, _body: &ObjectBody) -> BTreeSet<ChannelName> {
        BTreeSet::new()
    }

    fn rename(&self, body: &ObjectBody, _rho: &dyn Fn(ChannelName) -> ChannelName) -> ObjectBody {
        body.clone()
    }

    fn describe(&self, body: &ObjectBody) -> String {
        expect_automaton(body).state_name().to_string()
    }

    fn encode(&self, body: &ObjectBody) -> Value {
        let a = expect_automaton(body);
        json!({ "spec": a.spec.to_json(), "state": a.state_name() })
    }

    fn decode(&self, value: &Value) -> Result<ObjectBody, KernelError> {
        let bad = |m: String| KernelError::InvalidObject {
            lang: LangId::Automaton,
            reason: m,
        };
        let spec = value
            .get("spec")
            .ok_or_else(|| bad("missing `spec`".into()))?;
        let spec = AutomatonSpec::from_json(spec).map_err(|e| bad(e.to_string()))?;
        let state = match value.get("state") {
            None => spec.initial(),
            Some(s) => {
                let name = s
                    .as_str()
                    .ok_or_else(|| bad("`state` must be a string".into()))?;
                spec.state_index(name)
                    .ok_or_else(|| bad(format!("unknown state `{name}`")))?
            }
        };
        Ok(ObjectBody::Automaton(AutomatonObject {
            spec: Arc::new(spec),
            state,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{Payload, Selector};

    fn a() -> ChannelName {
        ChannelName(0)
    }

    #[test]
    fn transitions_follow_the_spec() {
        let spec = Arc::new(bitflip_spec());
        let s0 = AutomatonObject::initial(Arc::clone(&spec));
        let ts = automaton_transitions(&s0, a());
        let s1 = AutomatonObject::new(Arc::clone(&spec), 1)
            .unwrap()
            .into_object();
        let s2 = AutomatonObject::new(Arc::clone(&spec), 2)
            .unwrap()
            .into_object();
        assert_eq!(
            ts,
            vec![
                (
                    Action::receive(a(), Payload::Sel(Selector::Pi1)),
                    vec![AtomicProcess::proc(a(), s1)]
                ),
                (
                    Action::receive(a(), Payload::Sel(Selector::Pi2)),
                    vec![AtomicProcess::proc(a(), s2)]
                ),
            ]
        );
        let s3 = AutomatonObject::new(spec, 3).unwrap();
        assert_eq!(
            automaton_transitions(&s3, a()),
            vec![(Action::send(a(), Payload::Close), vec![])]
        );
    }

    #[test]
    fn encode_decode() {
        let spec = Arc::new(bitflip_spec());
        let obj = ObjectBody::Automaton(AutomatonObject::new(spec, 2).unwrap());
        let lang = AutomatonLanguage;
        let v = lang.encode(&obj);
        assert_eq!(v["state"], "S2");
        assert_eq!(lang.decode(&v).unwrap(), obj);
        assert!(lang
            .decode(&json!({"spec": v["spec"], "state": "S7"}))
            .is_err());
    }

    #[test]
    fn equality_is_structural_across_arcs() {
        let x = AutomatonObject::initial(Arc::new(bitflip_spec()));
        let y = AutomatonObject::initial(Arc::new(bitflip_spec()));
        assert_eq!(x, y);
        assert_eq!(x.cmp(&y), Ordering::Equal);
        assert_ne!(x, x.at(1));
    }
}
