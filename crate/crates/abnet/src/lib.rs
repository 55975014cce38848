//! Finite abelian networks: simulation, algebraic invariants, and halting
//! certificates.
//!
//! An abelian network is a collection of communicating automata on a
//! directed graph whose per-vertex transitions and message emissions
//! commute. That local condition makes the global behaviour
//! order-independent: when a run halts, its letter-processing counts and
//! final state do not depend on the scheduler.
//!
//! The crate is organized around that pipeline:
//!
//! - [`model`]: networks, configurations, executions, schedulers, and the
//!   commutativity validator.
//! - [`monoid`]: per-vertex transformation monoids, minimal idempotents,
//!   recurrent states, and domination tracking.
//! - [`linalg`] / [`pf`]: exact lattice and rational matrix computations,
//!   plus a floating spectral-radius estimate for reporting.
//! - [`algebra`]: kernel lattices, letter periods, the production matrix
//!   `P`, the Laplacian `(I - P) D`, and the component decompositions.
//! - [`halting`]: the halts-on-all-inputs decision with machine-checkable
//!   certificates either way, and per-input halting detection.
//! - [`builders`]: toppling, sandpile, and rotor network constructors and
//!   the sandpilization transform.
//! - [`json`] / [`cli`]: stable file formats and the command-line driver.
//!
//! Every value entering a verdict is computed exactly (arbitrary-precision
//! integers and rationals); floating point appears only in the optional
//! spectral-radius report. All types are immutable after construction and
//! safe to share across threads.
//!
//! See the `examples/` directory for one runnable walk-through per major
//! capability.

pub mod algebra;
pub mod builders;
pub mod cli;
pub mod error;
pub mod halting;
pub mod json;
pub mod linalg;
pub mod model;
pub mod monoid;
pub mod pf;
pub mod simplex;

pub use error::{Error, Result};
pub use model::{Config, LetterVec, Network, ProcessorDef};
