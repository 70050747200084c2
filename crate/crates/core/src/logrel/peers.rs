use std::collections::BTreeSet;

use crate::kernel::{
    alpha_equivalent, silent_search, NameSupply, NamelessConfiguration, NamelessObject,
};
use crate::proclang::{canonical_term, generate_well_typed};
use crate::types::SessionType;

use super::{check_term, CheckBudget};

/// Generator depth for peers beyond the canonical one.
const PEER_DEPTH: usize = 3;

/// `n` closed well-typed terms of type `a`, wrapped as nameless
/// configurations, the minimal canonical term first.
pub fn canonical_inhabitants(a: &SessionType, n: usize) -> Vec<NamelessConfiguration> {
    let lone = |t| {
        NamelessConfiguration::lone(NamelessObject::term(t).expect("generated terms are closed"))
    };
    let first = canonical_term(a);
    let mut seen = BTreeSet::from([first.clone()]);
    let mut out = vec![lone(first)];
    for seed in 0..(16 * n as u64) {
        if out.len() >= n {
            break;
        }
        let t = generate_well_typed(a, PEER_DEPTH, seed);
        if seen.insert(t.clone()) {
            out.push(lone(t));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClosureError {
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
}

/// Whether compliance of `later` at `a` implies compliance of `earlier`,
/// given that `earlier` reaches `later` by silent steps within the fuel.
/// Reachability is up to renaming of every name but the provider.
/// `earlier` is checked with its fuel raised by the number of steps.
pub fn backwards_closure_check(
    earlier: &NamelessConfiguration,
    later: &NamelessConfiguration,
    a: &SessionType,
    budget: &CheckBudget,
) -> Result<bool, ClosureError> {
    let mut names = earlier.channels();
    names.extend(later.channels());
    let p = NameSupply::above(&names).next_name();
    let start = earlier
        .instantiate(p)
        .map_err(|e| ClosureError::PreconditionFailed(e.to_string()))?;
    let target = later
        .instantiate(p)
        .map_err(|e| ClosureError::PreconditionFailed(e.to_string()))?;
    // compliance is invariant under renaming, and freed names may be drawn
    // again along the way, so only the provider is pinned
    let fixed = BTreeSet::from([p]);
    let search = silent_search(&start, budget.silent_fuel, |c| {
        alpha_equivalent(c, &target, &fixed)
    });
    let steps = search.found().map(|i| search.depth_of(i)).ok_or_else(|| {
        ClosureError::PreconditionFailed("the later configuration is not reachable".into())
    })?;
    if !check_term(later, a, budget).is_compliant() {
        return Ok(true);
    }
    let raised = CheckBudget {
        silent_fuel: budget.silent_fuel + steps,
        ..*budget
    };
    Ok(check_term(earlier, a, &raised).is_compliant())
}
