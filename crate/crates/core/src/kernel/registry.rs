use std::collections::BTreeSet;

use serde_json::Value;

use super::{Action, AtomicProcess, ChannelName, KernelError, LangId, NameSupply, ObjectBody};
use crate::automaton::{AutomatonLanguage, BitFlipLanguage};
use crate::proclang::SessProcLanguage;

/// Residual multiset of a single object-level transition.
pub type Residual = Vec<AtomicProcess>;

/// A process language: a set of nameless objects and a transition relation
/// on `(object, providing channel)` pairs.
///
/// Bodies handed to these methods are always of the language's own variant
/// and have passed [`validate`](Self::validate).
///
/// Every implementation must be *equivariant*: renaming channels injectively
/// before stepping gives the same transitions as renaming afterwards (up to
/// the names drawn from the supply). See [`super::equivariance_holds`].
pub trait ProcessLanguage: Sync {
    fn id(&self) -> LangId;

    fn validate(&self, body: &ObjectBody) -> Result<(), KernelError>;

    /// All transitions except receptions of a channel: silent steps, sends,
    /// and receptions of selectors or the close signal. Finitely many.
    /// Names for newly spawned processes come from `fresh`.
    fn transitions(
        &self,
        body: &ObjectBody,
        provider: ChannelName,
        fresh: &mut NameSupply,
    ) -> Vec<(Action, Residual)>;

    /// Receptions of the channel `payload`, on whatever channel the object
    /// is ready to receive one.
    fn accept(
        &self,
        _body: &ObjectBody,
        _provider: ChannelName,
        _payload: ChannelName,
    ) -> Vec<(Action, Residual)> {
        Vec::new()
    }

    /// Channel names mentioned by the body (not including the provider).
    fn channels(&self, body: &ObjectBody) -> BTreeSet<ChannelName>;

    fn rename(&self, body: &ObjectBody, rho: &dyn Fn(ChannelName) -> ChannelName) -> ObjectBody;

    /// Short human-readable rendering.
    fn describe(&self, body: &ObjectBody) -> String;

    fn encode(&self, body: &ObjectBody) -> Value;

    fn decode(&self, value: &Value) -> Result<ObjectBody, KernelError>;
}

static BITFLIP: BitFlipLanguage = BitFlipLanguage;
static AUTOMATON: AutomatonLanguage = AutomatonLanguage;
static SESSPROC: SessProcLanguage = SessProcLanguage;

/// The language table.
pub fn lookup(lang: LangId) -> &'static dyn ProcessLanguage {
    match lang {
        LangId::BitFlip => &BITFLIP,
        LangId::Automaton => &AUTOMATON,
        LangId::SessProc => &SESSPROC,
    }
}

/// Lookup by serialized tag.
pub fn lookup_tag(tag: &str) -> Result<&'static dyn ProcessLanguage, KernelError> {
    LangId::from_tag(tag).map(lookup)
}
