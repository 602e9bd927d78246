use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

use crate::rules::ManipulationWitness;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The (n, m, labels) triple is unusable.
    InvalidSpec(String),
    /// An enumeration would exceed one of the configured caps.
    CapExceeded {
        cap: &'static str,
        limit: u64,
        requested: u64,
    },
    /// Restriction to the empty set of alternatives.
    EmptyRestriction,
    /// A pairwise query was asked about an alternative and itself.
    SameAlternative,
    /// Two objects built over different (n, m) were combined.
    SpecMismatch,
    /// Profile text could not be read; `token` is zero-based.
    Parse { token: usize, message: String },
    /// Pairwise majority needs an odd number of individuals.
    EvenIndividuals(usize),
    /// The profile has a Pareto-dominated alternative.
    NotNonParetian,
    /// The profile is non-Paretian but not part of the rule's domain.
    NotInDomain,
    /// The operation is only defined on the unrestricted domain.
    UnrestrictedDomainRequired,
    /// The rule was required to be strategy-proof but is not.
    Manipulable(Box<ManipulationWitness>),
    /// A stated precondition does not hold.
    Precondition(String),
    /// A construction produced a profile outside the domain.
    Construction(String),
    /// A solver solution failed independent re-validation.
    SolverUnsound(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidSpec(msg) => write!(f, "invalid domain spec: {msg}"),
            Error::CapExceeded {
                cap,
                limit,
                requested,
            } => write!(f, "cap `{cap}` exceeded: {requested} > {limit}"),
            Error::EmptyRestriction => f.write_str("restriction to an empty set of alternatives"),
            Error::SameAlternative => f.write_str("alternatives must be distinct"),
            Error::SpecMismatch => f.write_str("objects belong to different domain specs"),
            Error::Parse { token, message } => {
                write!(f, "parse error at token {}: {message}", token + 1)
            }
            Error::EvenIndividuals(n) => {
                write!(f, "pairwise majority needs an odd number of individuals, got {n}")
            }
            Error::NotNonParetian => f.write_str("profile is outside the non-Paretian domain"),
            Error::NotInDomain => f.write_str("profile is outside this rule's domain"),
            Error::UnrestrictedDomainRequired => {
                f.write_str("operation requires the unrestricted domain of all profiles")
            }
            Error::Manipulable(w) => write!(
                f,
                "rule is manipulable by individual {} at domain index {}",
                w.by + 1,
                w.at_index
            ),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::Construction(msg) => write!(f, "construction left the domain: {msg}"),
            Error::SolverUnsound(msg) => write!(f, "solver solution rejected: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
