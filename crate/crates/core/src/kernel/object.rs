use std::collections::BTreeSet;
use std::fmt;

use super::registry::{self, ProcessLanguage};
use super::{ChannelName, KernelError};
use crate::automaton::{AutomatonObject, BitFlipState};
use crate::proclang::Term;

/// Tag of a registered process language.
///
/// The registry ([`registry::lookup`]) is the only place that cases on this
/// enumeration; adding a language means adding a tag, a body variant and a
/// table entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LangId {
    BitFlip,
    Automaton,
    SessProc,
}

impl LangId {
    pub const ALL: [LangId; 3] = [LangId::BitFlip, LangId::Automaton, LangId::SessProc];

    pub fn tag(self) -> &'static str {
        match self {
            LangId::BitFlip => "bitflip",
            LangId::Automaton => "automaton",
            LangId::SessProc => "sessproc",
        }
    }

    pub fn from_tag(tag: &str) -> Result<LangId, KernelError> {
        LangId::ALL
            .into_iter()
            .find(|l| l.tag() == tag)
            .ok_or_else(|| KernelError::UnknownLanguage(tag.to_string()))
    }
}

impl fmt::Display for LangId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Language-specific payload of a nameless object.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ObjectBody {
    BitFlip(BitFlipState),
    Automaton(AutomatonObject),
    Term(Term),
}

impl ObjectBody {
    pub fn lang(&self) -> LangId {
        match self {
            ObjectBody::BitFlip(_) => LangId::BitFlip,
            ObjectBody::Automaton(_) => LangId::Automaton,
            ObjectBody::Term(_) => LangId::SessProc,
        }
    }
}

/// An object waiting for its providing channel.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NamelessObject {
    body: ObjectBody,
}

impl NamelessObject {
    /// Checks the body against its language's validity predicate.
    pub fn new(body: ObjectBody) -> Result<NamelessObject, KernelError> {
        registry::lookup(body.lang()).validate(&body)?;
        Ok(NamelessObject { body })
    }

    /// For residuals produced by a language from an already valid object.
    pub(crate) fn unchecked(body: ObjectBody) -> NamelessObject {
        NamelessObject { body }
    }

    pub fn term(term: Term) -> Result<NamelessObject, KernelError> {
        NamelessObject::new(ObjectBody::Term(term))
    }

    pub fn bitflip(state: BitFlipState) -> NamelessObject {
        NamelessObject::unchecked(ObjectBody::BitFlip(state))
    }

    pub fn lang(&self) -> LangId {
        self.body.lang()
    }

    pub fn body(&self) -> &ObjectBody {
        &self.body
    }

    pub fn language(&self) -> &'static dyn ProcessLanguage {
        registry::lookup(self.lang())
    }

    /// Channel names occurring in the body.
    pub fn channels(&self) -> BTreeSet<ChannelName> {
        self.language().channels(&self.body)
    }

    pub fn rename(&self, rho: &dyn Fn(ChannelName) -> ChannelName) -> NamelessObject {
        NamelessObject::unchecked(self.language().rename(&self.body, rho))
    }

    pub fn as_term(&self) -> Option<&Term> {
        match &self.body {
            ObjectBody::Term(t) => Some(t),
            _ => None,
        }
    }
}

impl fmt::Display for NamelessObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}[{}]",
            self.lang(),
            self.language().describe(&self.body)
        )
    }
}

/// `proc(a, P)` or `fwd(a, b)`; `a` is the providing channel in both.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AtomicProcess {
    Proc {
        provider: ChannelName,
        obj: NamelessObject,
    },
    Fwd {
        provider: ChannelName,
        target: ChannelName,
    },
}

impl AtomicProcess {
    pub fn proc(provider: ChannelName, obj: NamelessObject) -> AtomicProcess {
        AtomicProcess::Proc { provider, obj }
    }

    pub fn fwd(provider: ChannelName, target: ChannelName) -> Result<AtomicProcess, KernelError> {
        if provider == target {
            return Err(KernelError::SelfForward(provider));
        }
        Ok(AtomicProcess::Fwd { provider, target })
    }

    pub fn provider(&self) -> ChannelName {
        match self {
            AtomicProcess::Proc { provider, .. } | AtomicProcess::Fwd { provider, .. } => *provider,
        }
    }

    /// Every name the process mentions, its provider included.
    pub fn channels(&self) -> BTreeSet<ChannelName> {
        match self {
            AtomicProcess::Proc { provider, obj } => {
                let mut cs = obj.channels();
                cs.insert(*provider);
                cs
            }
            AtomicProcess::Fwd { provider, target } => [*provider, *target].into_iter().collect(),
        }
    }

    /// Names the process uses as a client (everything but its provider).
    pub fn client_channels(&self) -> BTreeSet<ChannelName> {
        match self {
            AtomicProcess::Proc { obj, .. } => obj.channels(),
            AtomicProcess::Fwd { target, .. } => [*target].into_iter().collect(),
        }
    }

    pub fn rename(&self, rho: &dyn Fn(ChannelName) -> ChannelName) -> AtomicProcess {
        match self {
            AtomicProcess::Proc { provider, obj } => AtomicProcess::Proc {
                provider: rho(*provider),
                obj: obj.rename(rho),
            },
            AtomicProcess::Fwd { provider, target } => AtomicProcess::Fwd {
                provider: rho(*provider),
                target: rho(*target),
            },
        }
    }
}

impl fmt::Display for AtomicProcess {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtomicProcess::Proc { provider, obj } => write!(f, "proc {provider} {obj}"),
            AtomicProcess::Fwd { provider, target } => write!(f, "fwd {provider} {target}"),
        }
    }
}
