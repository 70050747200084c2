//! A session-typed process calculus: terms, a linear typechecker,
//! substitution, its stepping rules as a process language, and the
//! machinery to state the fundamental theorem over it.

mod compl;
mod dynamics;
mod generate;
mod harness;
mod maps;
mod parse;
mod subst;
mod term;
mod typing;

pub use compl::{apply_compl, complements, extend_compl, ComplError, ComplementaryConfigs};
pub use dynamics::{proclang_accept, proclang_transitions, SessProcLanguage};
pub use generate::{canonical_term, generate_open, generate_well_typed, random_raw_term};
pub use harness::{adequacy_check, discard_check, ftlr_check, HarnessError};
pub use maps::{map_vals, related_maps, remove_key};
pub use parse::{is_valid_var, parse_term};
pub use subst::{apply_subst, single, subst_compose_check, Substitution};
pub use term::{print_term, Sym, Term};
pub use typing::{
    typecheck, typecheck_closed, Derivation, LinearityIssue, Rule, TypeError, TypeErrorKind,
    TypingContext,
};

#[cfg(test)]
mod tests;
