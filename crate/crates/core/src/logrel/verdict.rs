use std::fmt;

use serde::Serialize;

use crate::kernel::{ChannelName, Configuration, NamelessConfiguration, Selector};
use crate::types::SessionType;

/// Evidence that a configuration follows a type, from the instantiated
/// start through its silent steps to the external step the type demands.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TermWitness {
    /// The providing channel the configuration was instantiated at.
    pub provider: ChannelName,
    /// Silent path; the first entry is the instantiated configuration, the
    /// last one performs the step recorded in `value`.
    pub path: Vec<Configuration>,
    pub value: ValueWitness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueWitness {
    /// `a!()` to the empty configuration.
    CloseStep,
    /// `a!c`, after which `residual` splits into a part providing `c` and a
    /// part providing `a`.
    TensorSplit {
        sent: ChannelName,
        residual: Configuration,
        left: Box<TermWitness>,
        right: Box<TermWitness>,
    },
    /// One reception per tested peer.
    LolliCases { cases: Vec<LolliCase> },
    /// Receptions of `pi1` and `pi2`.
    WithBranches {
        first: Box<TermWitness>,
        second: Box<TermWitness>,
    },
    /// Sending `which`.
    PlusChoice {
        which: Selector,
        then: Box<TermWitness>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LolliCase {
    pub peer: NamelessConfiguration,
    pub peer_channel: ChannelName,
    pub then: TermWitness,
}

impl TermWitness {
    /// Compact rendering of the witness tree, e.g.
    /// `With(Plus(pi2, Close), Plus(pi1, Close))`.
    pub fn shape(&self) -> String {
        self.value.shape()
    }

    /// Total number of silent and external steps recorded.
    pub fn steps(&self) -> usize {
        self.path.len() - 1
            + 1
            + match &self.value {
                ValueWitness::CloseStep => 0,
                ValueWitness::TensorSplit { left, right, .. } => left.steps() + right.steps(),
                ValueWitness::LolliCases { cases } => cases.iter().map(|c| c.then.steps()).sum(),
                ValueWitness::WithBranches { first, second } => first.steps() + second.steps(),
                ValueWitness::PlusChoice { then, .. } => then.steps(),
            }
    }

    /// Whether the tree has the type's shape: a leaf at `1`, two children at
    /// `⊗` and `&`, one at `⊕`, one per peer at `⊸`.
    pub fn matches_shape(&self, ty: &SessionType) -> bool {
        match (&self.value, ty) {
            (ValueWitness::CloseStep, SessionType::One) => true,
            (ValueWitness::TensorSplit { left, right, .. }, SessionType::Tensor(a, b)) => {
                left.matches_shape(a) && right.matches_shape(b)
            }
            (ValueWitness::LolliCases { cases }, SessionType::Lolli(_, b)) => {
                !cases.is_empty() && cases.iter().all(|c| c.then.matches_shape(b))
            }
            (ValueWitness::WithBranches { first, second }, SessionType::With(a, b)) => {
                first.matches_shape(a) && second.matches_shape(b)
            }
            (ValueWitness::PlusChoice { which, then }, SessionType::Plus(a, b)) => {
                then.matches_shape(if *which == Selector::Pi1 { a } else { b })
            }
            _ => false,
        }
    }
}

impl ValueWitness {
    pub fn shape(&self) -> String {
        match self {
            ValueWitness::CloseStep => "Close".into(),
            ValueWitness::TensorSplit {
                sent, left, right, ..
            } => {
                format!("Tensor({sent}, {}, {})", left.shape(), right.shape())
            }
            ValueWitness::LolliCases { cases } => {
                let inner: Vec<String> = cases.iter().map(|c| c.then.shape()).collect();
                format!("Lolli[{}]", inner.join(", "))
            }
            ValueWitness::WithBranches { first, second } => {
                format!("With({}, {})", first.shape(), second.shape())
            }
            ValueWitness::PlusChoice { which, then } => format!("Plus({which}, {})", then.shape()),
        }
    }
}

/// Why a configuration fails a clause: where in the type, which
/// configuration, and what it should have done.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    /// Clauses passed on the way down, outermost first, e.g. `["&.pi1", "(+)"]`.
    pub trail: Vec<String>,
    pub ty: SessionType,
    pub config: Configuration,
    pub provider: ChannelName,
    pub expected: String,
    pub detail: String,
}

impl Failure {
    pub fn progress(&self) -> usize {
        self.trail.len()
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = if self.trail.is_empty() {
            "top".to_string()
        } else {
            self.trail.join(" / ")
        };
        write!(
            f,
            "at {at}, type `{}`: {} (provider {}) should {}; {}",
            self.ty, self.config, self.provider, self.expected, self.detail
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UnknownCause {
    /// The silent closure was cut off by the fuel bound.
    FuelExhausted,
    /// A `⊸` clause was only tested against finitely many peers.
    LolliApproximation,
    /// A `⊗` residual had more processes than the partition limit.
    PartitionLimitExceeded,
    /// A silent search expanded more configurations than the state limit.
    StateLimitExceeded,
}

impl fmt::Display for UnknownCause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnknownCause::FuelExhausted => "silent fuel exhausted",
            UnknownCause::LolliApproximation => "-o clause checked against sampled peers only",
            UnknownCause::PartitionLimitExceeded => "residual too large to split",
            UnknownCause::StateLimitExceeded => "too many configurations to explore",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum Verdict {
    /// `approximate` is set when the witness relies on sampled `⊸` peers.
    Compliant {
        witness: TermWitness,
        approximate: bool,
    },
    NonCompliant {
        reason: Failure,
    },
    Unknown {
        cause: UnknownCause,
        closest: Option<Failure>,
    },
}

impl Verdict {
    pub fn is_compliant(&self) -> bool {
        matches!(self, Verdict::Compliant { .. })
    }

    pub fn is_non_compliant(&self) -> bool {
        matches!(self, Verdict::NonCompliant { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown { .. })
    }

    pub fn witness(&self) -> Option<&TermWitness> {
        match self {
            Verdict::Compliant { witness, .. } => Some(witness),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Compliant { .. } => "Compliant",
            Verdict::NonCompliant { .. } => "NonCompliant",
            Verdict::Unknown { .. } => "Unknown",
        }
    }

    /// Downgrades approximate compliance to `Unknown(LolliApproximation)`.
    pub fn strict(self) -> Verdict {
        match self {
            Verdict::Compliant {
                approximate: true, ..
            } => Verdict::Unknown {
                cause: UnknownCause::LolliApproximation,
                closest: None,
            },
            v => v,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Compliant {
                witness,
                approximate,
            } => {
                write!(f, "Compliant {}", witness.shape())?;
                if *approximate {
                    f.write_str(" (approximate: -o checked against sampled peers)")?;
                }
                Ok(())
            }
            Verdict::NonCompliant { reason } => write!(f, "NonCompliant {reason}"),
            Verdict::Unknown { cause, closest } => {
                write!(f, "Unknown ({cause})")?;
                if let Some(c) = closest {
                    write!(f, "; closest failure {c}")?;
                }
                Ok(())
            }
        }
    }
}
