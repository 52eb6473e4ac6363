//! Exact computation of the general position number gp(G) of finite graphs.
//!
//! The crate provides graph constructions (Kneser graphs, Cartesian
//! products, joins, coronas, line graphs), exact solvers for gp(G) and for
//! the invariants ω, α, η and ρ, closed-form predictions for the known
//! families, and a harness that checks the predictions against the solvers.

pub mod constructions;
pub mod distance;
pub mod error;
pub mod expr;
pub mod formulas;
pub mod gp;
pub mod graph;
pub mod invariants;
pub mod io;
pub mod search;
pub mod verify;

pub use distance::{diameter, distances, Distance, DistanceMatrix};
pub use error::{Error, Result};
pub use expr::parse_graph;
pub use gp::{
    characterization_check, gp_auto, gp_auto_seeded, gp_diam2, gp_exact, gp_exact_seeded, is_general_position,
    Characterization, CliquePartition, GpResult, Method,
};
pub use graph::{Graph, VertexSet};
pub use invariants::{alpha, eta, omega, rho, Invariant, InvariantResult};
pub use search::{Budget, Status};
