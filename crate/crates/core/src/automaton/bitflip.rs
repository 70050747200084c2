use std::collections::BTreeSet;
use std::fmt;

use serde_json::Value;

use crate::kernel::{
    Action, AtomicProcess, ChannelName, KernelError, LangId, NameSupply, NamelessObject,
    ObjectBody, Payload, ProcessLanguage, Residual, Selector,
};

/// States of the bit-flipping automaton: receive a bit, send its negation,
/// close.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BitFlipState {
    S0,
    S1,
    S2,
    S3,
}

impl BitFlipState {
    pub const ALL: [BitFlipState; 4] = [
        BitFlipState::S0,
        BitFlipState::S1,
        BitFlipState::S2,
        BitFlipState::S3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BitFlipState::S0 => "S0",
            BitFlipState::S1 => "S1",
            BitFlipState::S2 => "S2",
            BitFlipState::S3 => "S3",
        }
    }

    pub fn from_name(s: &str) -> Option<BitFlipState> {
        BitFlipState::ALL.into_iter().find(|x| x.name() == s)
    }

    pub fn object(self) -> NamelessObject {
        NamelessObject::bitflip(self)
    }

    /// Object-level transitions at `a`.
    pub fn transitions(self, a: ChannelName) -> Vec<(Action, Residual)> {
        use BitFlipState::*;
        let go = |s: BitFlipState| vec![AtomicProcess::proc(a, s.object())];
        match self {
            S0 => vec![
                (Action::receive(a, Payload::Sel(Selector::Pi1)), go(S1)),
                (Action::receive(a, Payload::Sel(Selector::Pi2)), go(S2)),
            ],
            S1 => vec![(Action::send(a, Payload::Sel(Selector::Pi2)), go(S3))],
            S2 => vec![(Action::send(a, Payload::Sel(Selector::Pi1)), go(S3))],
            S3 => vec![(Action::send(a, Payload::Close), Vec::new())],
        }
    }
}

impl fmt::Display for BitFlipState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub struct BitFlipLanguage;

fn expect_state(body: &ObjectBody) -> BitFlipState {
    match body {
        ObjectBody::BitFlip(s) => *s,
        _ => unreachable!("bitflip language handed a foreign body"),
    }
}

impl ProcessLanguage for BitFlipLanguage {
    fn id(&self) -> LangId {
        LangId::BitFlip
    }

    fn validate(&self, body: &ObjectBody) -> Result<(), KernelError> {
        match body {
            ObjectBody::BitFlip(_) => Ok(()),
            _ => Err(KernelError::InvalidObject {
                lang: LangId::BitFlip,
                reason: "not a bitflip body".into(),
            }),
        }
    }

    fn transitions(
        &self,
        body: &ObjectBody,
        provider: ChannelName,
        _fresh: &mut NameSupply,
    ) -> Vec<(Action, Residual)> {
        expect_state(body).transitions(provider)
    }

    fn channels(&self, _body: &ObjectBody) -> BTreeSet<ChannelName> {
        BTreeSet::new()
    }

    fn rename(&self, body: &ObjectBody, _rho: &dyn Fn(ChannelName) -> ChannelName) -> ObjectBody {
        body.clone()
    }

    fn describe(&self, body: &ObjectBody) -> String {
        expect_state(body).name().to_string()
    }

    fn encode(&self, body: &ObjectBody) -> Value {
        Value::String(expect_state(body).name().to_string())
    }

    fn decode(&self, value: &Value) -> Result<ObjectBody, KernelError> {
        value
            .as_str()
            .and_then(BitFlipState::from_name)
            .map(ObjectBody::BitFlip)
            .ok_or_else(|| KernelError::InvalidObject {
                lang: LangId::BitFlip,
                reason: format!("expected one of \"S0\"..\"S3\", got {value}"),
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{automaton_transitions, bitflip_spec, AutomatonObject};
    use std::sync::Arc;

    #[test]
    fn table_rows() {
        let a = ChannelName(0);
        let b = ChannelName(7);
        assert_eq!(
            BitFlipState::S3.transitions(a),
            vec![(Action::send(a, Payload::Close), vec![])]
        );
        assert_eq!(
            BitFlipState::S1.transitions(b),
            vec![(
                Action::send(b, Payload::Sel(Selector::Pi2)),
                vec![AtomicProcess::proc(b, BitFlipState::S3.object())]
            )]
        );
    }

    #[test]
    fn direct_table_agrees_with_spec_interpretation() {
        let spec = Arc::new(bitflip_spec());
        let a = ChannelName(3);
        for (i, s) in BitFlipState::ALL.into_iter().enumerate() {
            let direct: Vec<_> = s
                .transitions(a)
                .into_iter()
                .map(|(act, r)| (act, r.len()))
                .collect();
            let via_spec: Vec<_> =
                automaton_transitions(&AutomatonObject::new(Arc::clone(&spec), i).unwrap(), a)
                    .into_iter()
                    .map(|(act, r)| (act, r.len()))
                    .collect();
            assert_eq!(direct, via_spec, "state {s}");
        }
    }

    #[test]
    fn decode_rejects_unknown_state() {
        assert!(BitFlipLanguage.decode(&Value::String("S4".into())).is_err());
        assert_eq!(
            BitFlipLanguage.decode(&Value::String("S2".into())).unwrap(),
            ObjectBody::BitFlip(BitFlipState::S2)
        );
    }
}
