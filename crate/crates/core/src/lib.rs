//! Exhaustive verification of strategy-proofness results on the
//! non-Paretian preference domain.
//!
//! The non-Paretian domain `NP(n, m)` contains every profile of strict
//! preferences of `n` individuals over `m` alternatives at which no
//! alternative is unanimously preferred to another one. Because it is not a
//! product set, the classical "change one voter at a time" arguments have to
//! be rebuilt inside the domain. This crate provides the pieces needed to
//! check those arguments mechanically on small instances:
//!
//! * [`order`] and [`profile`]: linear orders, profiles and Pareto checks.
//! * [`domain`]: enumeration of `NP(n, m)`, the voting-paradox profiles and
//!   the unrestricted domain, with canonical indices.
//! * [`rules`]: extensional social choice rules together with manipulation,
//!   dictatorship and universally-beneficial-manipulation checks.
//! * [`spath`]: constructive paths inside a fiber `{w : w|S = u|S}` of the
//!   domain and an independent breadth-first oracle.
//! * [`sat`] and [`verify`]: a small CDCL solver with all-solutions
//!   enumeration and the constraint model of strategy-proof rules.
//! * [`lift`]: the clone and contiguous-pair constructions used to move
//!   between domains of different sizes.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, reports and
//! the command line live in the `npsp` companion crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;

pub mod domain;
pub mod lift;
pub mod order;
pub mod profile;
pub mod rules;
pub mod sat;
pub mod spath;
pub mod verify;

pub use domain::{Caps, Domain, DomainKind, DomainSpec};
pub use error::Error;
pub use order::{AltSet, Alternative, LinearOrder, MAX_ALTERNATIVES};
pub use profile::Profile;
pub use rules::{ManipulationWitness, Rule};
pub use spath::SPath;

pub type Result<T, E = Error> = core::result::Result<T, E>;
