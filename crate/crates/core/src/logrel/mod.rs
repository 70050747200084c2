//! Membership of nameless configurations in the term and value
//! interpretations of session types, with witnesses and explanations.
//!
//! Quantifiers over names are discharged at fresh names (the search runs at
//! one, each external step is re-validated at the others); the quantifier
//! over `⊸` arguments is discharged at a finite set of well-typed peers.

mod checker;
mod peers;
mod replay;
mod verdict;

use serde::{Deserialize, Serialize};

use crate::kernel::{ChannelName, NamelessConfiguration};
use crate::types::SessionType;

use checker::{Checker, Outcome};

pub use peers::{backwards_closure_check, canonical_inhabitants, ClosureError};
pub use replay::{replay, ReplayError};
pub use verdict::{Failure, LolliCase, TermWitness, UnknownCause, ValueWitness, Verdict};

/// Bounds on the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckBudget {
    /// Silent steps explored per term-interpretation search.
    pub silent_fuel: usize,
    /// Largest residual split exhaustively at `⊗`.
    pub partition_limit: usize,
    /// Peers tried per `⊸` clause.
    pub lolli_peers: usize,
    /// Providing names each external step is validated at.
    pub name_samples: usize,
    /// Configurations one term-interpretation search may expand.
    #[serde(default = "default_state_limit")]
    pub state_limit: usize,
}

fn default_state_limit() -> usize {
    100_000
}

impl Default for CheckBudget {
    fn default() -> Self {
        CheckBudget {
            silent_fuel: 64,
            partition_limit: 12,
            lolli_peers: 3,
            name_samples: 3,
            state_limit: default_state_limit(),
        }
    }
}

impl CheckBudget {
    /// Clamps every bound but the fuel to at least 1 (2 for partitions).
    pub fn sanitized(self) -> CheckBudget {
        CheckBudget {
            silent_fuel: self.silent_fuel,
            partition_limit: self.partition_limit.max(2),
            lolli_peers: self.lolli_peers.max(1),
            name_samples: self.name_samples.max(1),
            state_limit: self.state_limit.max(1),
        }
    }
}

fn verdict(o: Outcome<TermWitness>) -> Verdict {
    match o {
        Outcome::Ok { w, approx } => Verdict::Compliant {
            witness: w,
            approximate: approx,
        },
        Outcome::Fail(reason) => Verdict::NonCompliant { reason },
        Outcome::Unknown(cause, closest) => Verdict::Unknown { cause, closest },
    }
}

/// `ω ∈ T⟦A⟧`, searched at the least name not mentioned by `ω`.
pub fn check_term(
    omega: &NamelessConfiguration,
    ty: &SessionType,
    budget: &CheckBudget,
) -> Verdict {
    let budget = budget.sanitized();
    verdict(Checker::new(&budget).term(omega, ty, None))
}

/// [`check_term`] with the providing name chosen by the caller (when it is
/// not already provided in the ambient).
pub fn check_term_at(
    omega: &NamelessConfiguration,
    ty: &SessionType,
    budget: &CheckBudget,
    provider: ChannelName,
) -> Verdict {
    let budget = budget.sanitized();
    verdict(Checker::new(&budget).term(omega, ty, Some(provider)))
}

/// `ω ∈ V⟦A⟧`: like [`check_term`] with no silent steps allowed first.
pub fn check_value(
    omega: &NamelessConfiguration,
    ty: &SessionType,
    budget: &CheckBudget,
) -> Verdict {
    let budget = budget.sanitized();
    verdict(Checker::new(&budget).value_only(omega, ty))
}

#[cfg(test)]
mod tests;
