//! Executable statements of the fundamental theorem, adequacy and the
//! substitution lemmas, for use as property-test drivers.

use crate::kernel::{
    silent_reach, step_with_action, Action, AtomicProcess, ChannelName, Configuration,
    NamelessObject, Payload,
};
use crate::logrel::{check_term, CheckBudget, Verdict};
use crate::types::SessionType;

use super::{
    apply_compl, apply_subst, complements, related_maps, typecheck, ComplementaryConfigs,
    Substitution, Term, TypingContext,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HarnessError {
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
}

fn pre(msg: impl Into<String>) -> HarnessError {
    HarnessError::PreconditionFailed(msg.into())
}

/// Closes `m` over `s` and checks the result at `a`. The fundamental
/// theorem predicts `Compliant` whenever `gamma ⊢ m :: a` and `s`
/// complements `gamma`.
pub fn ftlr_check(
    gamma: &TypingContext,
    m: &Term,
    a: &SessionType,
    s: &ComplementaryConfigs,
    budget: &CheckBudget,
) -> Result<Verdict, HarnessError> {
    typecheck(gamma, m, a).map_err(|e| pre(format!("term is ill-typed: {e}")))?;
    if !complements(s, gamma, budget) {
        return Err(pre("complements do not match the context"));
    }
    let closed = apply_subst(&s.substitution(), m);
    let omega = apply_compl(s, &closed).map_err(|e| pre(e.to_string()))?;
    Ok(check_term(&omega, a, budget))
}

/// Whether `proc(a, m)` can reach, by silent steps within `fuel`, a
/// configuration that closes `a` and leaves nothing behind.
pub fn adequacy_check(m: &Term, a: ChannelName, fuel: usize) -> Result<bool, HarnessError> {
    typecheck(&TypingContext::new(), m, &SessionType::One)
        .map_err(|e| pre(format!("term is ill-typed: {e}")))?;
    let obj = NamelessObject::term(m.clone()).map_err(|e| pre(e.to_string()))?;
    let start = Configuration::singleton(AtomicProcess::proc(a, obj));
    let close = Action::send(a, Payload::Close);
    let path = silent_reach(&start, fuel, |c| {
        step_with_action(c, close)
            .iter()
            .any(Configuration::is_empty)
    });
    Ok(path.is_some())
}

/// Whether `(σ ∪ σ')(m) = σ(m)`, given `gamma ⊢ m :: a`, `σ` covering
/// exactly `gamma`, and disjoint domains.
pub fn discard_check(
    gamma: &TypingContext,
    m: &Term,
    a: &SessionType,
    sigma: &Substitution,
    sigma2: &Substitution,
) -> Result<bool, HarnessError> {
    typecheck(gamma, m, a).map_err(|e| pre(format!("term is ill-typed: {e}")))?;
    if !related_maps(sigma, gamma, |_, _| true) {
        return Err(pre("substitution and context have different domains"));
    }
    if sigma.keys().any(|k| sigma2.contains_key(k)) {
        return Err(pre("substitutions overlap"));
    }
    let mut union = sigma.clone();
    union.extend(sigma2.iter().map(|(k, v)| (k.clone(), *v)));
    Ok(apply_subst(&union, m) == apply_subst(sigma, m))
}
