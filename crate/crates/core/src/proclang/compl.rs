use std::collections::BTreeMap;

use crate::kernel::{
    ChannelName, Configuration, KernelError, NamelessConfiguration, NamelessObject,
};
use crate::logrel::{check_term, CheckBudget};

use super::{related_maps, Substitution, Term, TypingContext};

/// Objects standing in for the free variables of a term: each variable is
/// mapped to a nameless configuration and the channel it will provide.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ComplementaryConfigs {
    map: BTreeMap<String, (NamelessConfiguration, ChannelName)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplError {
    #[error("variable `{0}` already has a complement")]
    DuplicateKey(String),
}

impl ComplementaryConfigs {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, x: &str) -> Option<&(NamelessConfiguration, ChannelName)> {
        self.map.get(x)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn as_map(&self) -> &BTreeMap<String, (NamelessConfiguration, ChannelName)> {
        &self.map
    }

    /// The channel component: the substitution closing a term over `S`.
    pub fn substitution(&self) -> Substitution {
        self.map.iter().map(|(x, (_, a))| (x.clone(), *a)).collect()
    }
}

/// `S, x ↦ (ω, a)`.
pub fn extend_compl(
    s: &ComplementaryConfigs,
    x: &str,
    omega: NamelessConfiguration,
    a: ChannelName,
) -> Result<ComplementaryConfigs, ComplError> {
    if s.map.contains_key(x) {
        return Err(ComplError::DuplicateKey(x.to_string()));
    }
    let mut out = s.clone();
    out.map.insert(x.to_string(), (omega, a));
    Ok(out)
}

/// Whether every variable of `gamma` has a complement compliant at its
/// type, and nothing else does.
pub fn complements(s: &ComplementaryConfigs, gamma: &TypingContext, budget: &CheckBudget) -> bool {
    related_maps(&s.map, gamma, |(omega, _), ty| {
        check_term(omega, ty, budget).is_compliant()
    })
}

/// Instantiates every complement at its channel and puts `p` at the head.
pub fn apply_compl(
    s: &ComplementaryConfigs,
    p: &Term,
) -> Result<NamelessConfiguration, KernelError> {
    let mut ambient = Configuration::empty();
    for (omega, a) in s.map.values() {
        ambient = ambient.union(&omega.instantiate(*a)?)?;
    }
    let head = NamelessObject::term(p.clone())?;
    Ok(NamelessConfiguration::new(ambient, head))
}
