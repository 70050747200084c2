use std::collections::{BTreeMap, BTreeSet};

use super::config::renaming;
use super::{Action, AtomicProcess, ChannelName, NameSupply, NamelessObject};

/// One randomized renaming-commutation trial for a process language.
#[derive(Debug, Clone)]
pub struct EquivarianceTrial {
    pub obj: NamelessObject,
    pub provider: ChannelName,
    /// Channel payloads offered to receivers.
    pub inputs: Vec<ChannelName>,
    /// Injective renaming; must cover the provider, the inputs and every
    /// channel of `obj`.
    pub rho: BTreeMap<ChannelName, ChannelName>,
}

type TransitionSet = BTreeSet<(Action, Vec<AtomicProcess>)>;

fn all_transitions(
    obj: &NamelessObject,
    provider: ChannelName,
    inputs: &[ChannelName],
    supply: &mut NameSupply,
) -> TransitionSet {
    let lang = obj.language();
    let mut out = TransitionSet::new();
    for (a, mut r) in lang.transitions(obj.body(), provider, supply) {
        r.sort();
        out.insert((a, r));
    }
    for c in inputs {
        for (a, mut r) in lang.accept(obj.body(), provider, *c) {
            r.sort();
            out.insert((a, r));
        }
    }
    out
}

/// Checks that stepping commutes with the trial's renaming. Names drawn from
/// the fresh-name supply on each side are matched up in issue order.
pub fn equivariance_holds(trial: &EquivarianceTrial) -> Result<(), String> {
    let mut support: BTreeSet<ChannelName> = trial.obj.channels();
    support.insert(trial.provider);
    support.extend(trial.inputs.iter().copied());
    if let Some(c) = support.iter().find(|c| !trial.rho.contains_key(c)) {
        return Err(format!("renaming does not cover {c}"));
    }
    let image: BTreeSet<ChannelName> = trial.rho.values().copied().collect();
    if image.len() != trial.rho.len() {
        return Err("renaming is not injective".into());
    }

    let domain: BTreeSet<ChannelName> = trial.rho.keys().copied().collect();
    let mut left_supply = NameSupply::above(&domain);
    let left = all_transitions(&trial.obj, trial.provider, &trial.inputs, &mut left_supply);

    let rho = renaming(trial.rho.clone());
    let renamed_obj = trial.obj.rename(&rho);
    let renamed_inputs: Vec<ChannelName> = trial.inputs.iter().map(|c| rho(*c)).collect();
    let mut right_supply = NameSupply::above(&image);
    let right = all_transitions(
        &renamed_obj,
        rho(trial.provider),
        &renamed_inputs,
        &mut right_supply,
    );

    if left_supply.issued().len() != right_supply.issued().len() {
        return Err("different number of fresh names drawn".into());
    }
    let mut extended = trial.rho.clone();
    for (l, r) in left_supply.issued().iter().zip(right_supply.issued()) {
        extended.insert(*l, *r);
    }
    let rho_ext = renaming(extended);
    let transported: TransitionSet = left
        .iter()
        .map(|(a, r)| {
            let mut r: Vec<AtomicProcess> = r.iter().map(|p| p.rename(&rho_ext)).collect();
            r.sort();
            (a.rename(&rho_ext), r)
        })
        .collect();
    if transported == right {
        Ok(())
    } else {
        Err(format!(
            "{} at {}: renamed-then-stepped has {} transitions, stepped-then-renamed {}",
            trial.obj,
            trial.provider,
            right.len(),
            transported.len()
        ))
    }
}
