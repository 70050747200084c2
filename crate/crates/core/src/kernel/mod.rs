//! The runtime shared by every process language: channel names, actions,
//! atomic processes, configurations and their stepping rules, plus the
//! language registry.

mod action;
mod config;
mod equivariance;
mod json;
mod name;
mod object;
pub mod registry;
mod step;

pub use action::{Action, Direction, Payload, Selector};
pub use config::{alpha_equivalent, renaming, Configuration, NamelessConfiguration};
pub use equivariance::{equivariance_holds, EquivarianceTrial};
pub use name::{fresh_channel, ChannelName, NameSupply};
pub use object::{AtomicProcess, LangId, NamelessObject, ObjectBody};
pub use registry::{lookup as registry_lookup, ProcessLanguage, Residual};
pub use step::{
    silent_closure, silent_reach, silent_search, silent_successors, step, step_probing,
    step_with_action, SilentClosure, Successors,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KernelError {
    #[error("channel {0} already has a provider")]
    DuplicateProvider(ChannelName),
    #[error("forwarder on {0} points at itself")]
    SelfForward(ChannelName),
    #[error("unknown process language `{0}`")]
    UnknownLanguage(String),
    #[error("free variable `{0}` in a runtime term")]
    FreeVariable(String),
    #[error("invalid {lang} object: {reason}")]
    InvalidObject { lang: LangId, reason: String },
    #[error("malformed input: {0}")]
    Malformed(String),
}

#[cfg(test)]
mod tests;
