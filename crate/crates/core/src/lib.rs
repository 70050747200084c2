//! Protocol compliance checking for heterogeneous message-passing systems.
//!
//! Processes written in different languages (a finite-state automaton, a
//! session-typed process calculus, or anything implementing
//! [`kernel::ProcessLanguage`]) share one runtime: a multiset of atomic
//! processes that step by labelled transitions. A behavioral type is given
//! meaning purely in terms of those transitions, so compliance of an
//! arbitrary object can be decided by exploring its behavior
//! ([`logrel::check_term`]), while well-typed calculus terms are compliant
//! by construction ([`proclang`]).
//!
//! The crate is organised as:
//!
//! - [`kernel`]: channels, actions, configurations, language registry and the
//!   configuration stepping rules.
//! - [`types`]: session types with their ASCII surface syntax.
//! - [`logrel`]: the term/value interpretation checker producing replayable
//!   witnesses.
//! - [`automaton`]: user-declared finite-state machines and the built-in
//!   bit-flipping automaton.
//! - [`proclang`]: the session-typed calculus (syntax, linear typechecker,
//!   substitution, dynamics, complementary configurations, generators).
//! - [`suites`]: seeded property suites shared by the CLI and the tests.

pub mod automaton;
pub mod kernel;
pub mod logrel;
pub mod proclang;
pub mod suites;
mod syntax;
pub mod types;

pub use syntax::ParseError;
