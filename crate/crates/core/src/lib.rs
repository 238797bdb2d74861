//! Perfectly Transparent Equilibrium for extensive-form games with imperfect
//! information.
//!
//! - [`game`]: the game model, validation, navigation, canonical form and
//!   normal-form embedding.
//! - [`spacetime`]: decision points in Minkowski spacetime and the game they
//!   induce.
//! - [`solver`]: forward-induction elimination with a full per-step trace.
//! - [`oracle`]: brute-force reference implementations and generators.
//! - [`formats`]: JSON documents, trace output and DOT export.

pub mod formats;
pub mod game;
pub mod number;
pub mod oracle;
pub mod solver;
pub mod spacetime;

pub use game::{
    embed_normal_form, ActionId, Anchor, Game, GameBuilder, GameError, InfosetId, NodeId,
    NormalForm, OutcomeId, PlayerId, ValidationReport, Vertex,
};
pub use number::Exact;
pub use solver::{solve, SolveError, SolveResult, SolverState, Status};
pub use spacetime::{SetupSpec, SpacetimeSetup};
