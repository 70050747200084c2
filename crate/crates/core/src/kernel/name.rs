use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A channel name. Names are plain integers; the only operations that matter
/// are equality, ordering (for canonical multisets) and freshness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChannelName(pub u64);

impl ChannelName {
    pub fn id(self) -> u64 {
        self.0
    }
}

impl fmt::Display for ChannelName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl From<u64> for ChannelName {
    fn from(id: u64) -> Self {
        ChannelName(id)
    }
}

/// Monotone supply of channel names.
///
/// Every name handed out is strictly greater than the previous one and is
/// never a member of the `avoid` set passed at that call, so a supply owned
/// by one check run can never hand out a name twice.
#[derive(Debug, Clone, Default)]
pub struct NameSupply {
    next: u64,
    issued: Vec<ChannelName>,
}

impl NameSupply {
    pub fn new() -> Self {
        Self::default()
    }

    /// A supply whose first name lies above every name in `names`.
    pub fn above<'a>(names: impl IntoIterator<Item = &'a ChannelName>) -> Self {
        let next = names.into_iter().map(|c| c.0 + 1).max().unwrap_or(0);
        NameSupply {
            next,
            issued: Vec::new(),
        }
    }

    pub fn fresh(&mut self, avoid: &BTreeSet<ChannelName>) -> ChannelName {
        while avoid.contains(&ChannelName(self.next)) {
            self.next += 1;
        }
        let name = ChannelName(self.next);
        self.next += 1;
        self.issued.push(name);
        name
    }

    /// Same as [`fresh`](Self::fresh) with nothing extra to avoid.
    pub fn next_name(&mut self) -> ChannelName {
        self.fresh(&BTreeSet::new())
    }

    /// Names issued so far, in order.
    pub fn issued(&self) -> &[ChannelName] {
        &self.issued
    }
}

/// A name outside `avoid`. Deterministic: the least name above all of `avoid`.
pub fn fresh_channel(avoid: &BTreeSet<ChannelName>) -> ChannelName {
    NameSupply::above(avoid).fresh(avoid)
}
