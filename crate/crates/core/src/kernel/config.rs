use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{AtomicProcess, ChannelName, KernelError, NamelessObject};

/// A finite multiset of atomic processes, stored as a sorted list so that
/// equality, hashing and enumeration order are canonical.
///
/// Configurations built through the public constructors are well formed: no
/// channel has two providers.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    procs: Vec<AtomicProcess>,
}

impl Configuration {
    pub fn empty() -> Configuration {
        Configuration::default()
    }

    pub fn new(procs: Vec<AtomicProcess>) -> Result<Configuration, KernelError> {
        let cfg = Configuration::unchecked(procs);
        cfg.check_well_formed()?;
        Ok(cfg)
    }

    pub(crate) fn unchecked(mut procs: Vec<AtomicProcess>) -> Configuration {
        procs.sort();
        Configuration { procs }
    }

    pub fn singleton(p: AtomicProcess) -> Configuration {
        Configuration { procs: vec![p] }
    }

    pub fn check_well_formed(&self) -> Result<(), KernelError> {
        let mut seen = BTreeSet::new();
        for p in &self.procs {
            if let AtomicProcess::Fwd { provider, target } = p {
                if provider == target {
                    return Err(KernelError::SelfForward(*provider));
                }
            }
            if !seen.insert(p.provider()) {
                return Err(KernelError::DuplicateProvider(p.provider()));
            }
        }
        Ok(())
    }

    pub fn procs(&self) -> &[AtomicProcess] {
        &self.procs
    }

    pub fn len(&self) -> usize {
        self.procs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.procs.is_empty()
    }

    pub fn providers(&self) -> BTreeSet<ChannelName> {
        self.procs.iter().map(AtomicProcess::provider).collect()
    }

    pub fn channels(&self) -> BTreeSet<ChannelName> {
        self.procs
            .iter()
            .flat_map(AtomicProcess::channels)
            .collect()
    }

    pub fn provider_of(&self, chan: ChannelName) -> Option<&AtomicProcess> {
        self.procs.iter().find(|p| p.provider() == chan)
    }

    /// Multiset union, rejecting a shared provider.
    pub fn union(&self, other: &Configuration) -> Result<Configuration, KernelError> {
        let cfg = self.union_unchecked(other);
        cfg.check_well_formed()?;
        Ok(cfg)
    }

    pub(crate) fn union_unchecked(&self, other: &Configuration) -> Configuration {
        let mut procs = self.procs.clone();
        procs.extend(other.procs.iter().cloned());
        Configuration::unchecked(procs)
    }

    /// This configuration without the processes at `drop` plus `add`.
    pub(crate) fn replace(&self, drop: &[usize], add: Vec<AtomicProcess>) -> Configuration {
        let mut procs: Vec<AtomicProcess> = self
            .procs
            .iter()
            .enumerate()
            .filter(|(i, _)| !drop.contains(i))
            .map(|(_, p)| p.clone())
            .collect();
        procs.extend(add);
        Configuration::unchecked(procs)
    }

    pub fn rename(&self, rho: &dyn Fn(ChannelName) -> ChannelName) -> Configuration {
        Configuration::unchecked(self.procs.iter().map(|p| p.rename(rho)).collect())
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.procs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

impl FromIterator<AtomicProcess> for Configuration {
    /// Does not check well-formedness; use [`Configuration::new`] for input.
    fn from_iter<I: IntoIterator<Item = AtomicProcess>>(iter: I) -> Self {
        Configuration::unchecked(iter.into_iter().collect())
    }
}

/// A configuration together with one object that has not been given its
/// providing channel yet.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NamelessConfiguration {
    pub ambient: Configuration,
    pub head: NamelessObject,
}

impl NamelessConfiguration {
    pub fn new(ambient: Configuration, head: NamelessObject) -> NamelessConfiguration {
        NamelessConfiguration { ambient, head }
    }

    /// `(∅, head)`.
    pub fn lone(head: NamelessObject) -> NamelessConfiguration {
        NamelessConfiguration::new(Configuration::empty(), head)
    }

    /// `ambient ⧺ {proc(a, head)}`.
    pub fn instantiate(&self, a: ChannelName) -> Result<Configuration, KernelError> {
        if self.ambient.provider_of(a).is_some() {
            return Err(KernelError::DuplicateProvider(a));
        }
        let mut procs = self.ambient.procs.clone();
        procs.push(AtomicProcess::proc(a, self.head.clone()));
        Ok(Configuration::unchecked(procs))
    }

    /// Inverse of [`instantiate`](Self::instantiate): the object providing
    /// `a` becomes the head. `None` when `a` has no provider or is provided
    /// by a forwarder.
    pub fn deinstantiate(cfg: &Configuration, a: ChannelName) -> Option<NamelessConfiguration> {
        let idx = cfg.procs.iter().position(|p| p.provider() == a)?;
        match &cfg.procs[idx] {
            AtomicProcess::Proc { obj, .. } => {
                let head = obj.clone();
                let mut procs = cfg.procs.clone();
                procs.remove(idx);
                Some(NamelessConfiguration {
                    ambient: Configuration { procs },
                    head,
                })
            }
            AtomicProcess::Fwd { .. } => None,
        }
    }

    pub fn channels(&self) -> BTreeSet<ChannelName> {
        let mut cs = self.ambient.channels();
        cs.extend(self.head.channels());
        cs
    }

    pub fn rename(&self, rho: &dyn Fn(ChannelName) -> ChannelName) -> NamelessConfiguration {
        NamelessConfiguration {
            ambient: self.ambient.rename(rho),
            head: self.head.rename(rho),
        }
    }
}

impl fmt::Display for NamelessConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.ambient, self.head)
    }
}

/// Library-level injective renaming with identity outside its domain.
pub fn renaming(map: BTreeMap<ChannelName, ChannelName>) -> impl Fn(ChannelName) -> ChannelName {
    move |c| map.get(&c).copied().unwrap_or(c)
}

/// Whether `x` and `y` are equal up to a bijective renaming of the names
/// that are not in `fixed`.
///
/// Names created during execution (by cut, for instance) differ between two
/// runs that start from different configurations; this is the equality under
/// which such runs are compared. Exhaustive over bijections, so meant for
/// small numbers of unfixed names.
pub fn alpha_equivalent(
    x: &Configuration,
    y: &Configuration,
    fixed: &BTreeSet<ChannelName>,
) -> bool {
    if x.len() != y.len() {
        return false;
    }
    let xs: Vec<ChannelName> = x.channels().difference(fixed).copied().collect();
    let ys: Vec<ChannelName> = y.channels().difference(fixed).copied().collect();
    if xs.len() != ys.len() {
        return false;
    }
    if xs.is_empty() {
        return x == y;
    }
    let erase = |c: &Configuration, free: &[ChannelName]| {
        let free: BTreeSet<ChannelName> = free.iter().copied().collect();
        c.rename(&|n| {
            if free.contains(&n) {
                ChannelName(u64::MAX)
            } else {
                n
            }
        })
    };
    if erase(x, &xs) != erase(y, &ys) {
        return false;
    }
    let mut used = vec![false; ys.len()];
    let mut assignment = BTreeMap::new();
    search_bijection(x, y, &xs, &ys, 0, &mut used, &mut assignment)
}

fn search_bijection(
    x: &Configuration,
    y: &Configuration,
    xs: &[ChannelName],
    ys: &[ChannelName],
    k: usize,
    used: &mut [bool],
    assignment: &mut BTreeMap<ChannelName, ChannelName>,
) -> bool {
    if k == xs.len() {
        let rho = renaming(assignment.clone());
        return &x.rename(&rho) == y;
    }
    for j in 0..ys.len() {
        if used[j] {
            continue;
        }
        used[j] = true;
        assignment.insert(xs[k], ys[j]);
        if search_bijection(x, y, xs, ys, k + 1, used, assignment) {
            return true;
        }
        assignment.remove(&xs[k]);
        used[j] = false;
    }
    false
}
