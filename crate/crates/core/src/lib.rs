//! Mesh-free domain-decomposition learning solvers for second-order elliptic
//! boundary value problems.
//!
//! The crate is organized around the outer-iteration structure of
//! non-overlapping domain decomposition:
//!
//! - [`diffnet`]: dense tanh networks with exact input derivatives (value,
//!   gradient, Laplacian), reverse-mode parameter gradients, and Adam.
//! - [`geometry`]: regions, interfaces, normals, and seeded Monte Carlo
//!   samplers for every partition used by the benchmark problems.
//! - [`problems`]: the registry of benchmark boundary value problems with
//!   manufactured exact solutions.
//! - [`losses`]: every subproblem training loss, assembled as Monte Carlo
//!   means over sample batches.
//! - [`orchestrator`]: outer-iteration state machines for the
//!   Dirichlet-Neumann, Neumann-Neumann, Dirichlet-Dirichlet, and Robin-Robin
//!   schemes, in both direct-flux-exchange and compensated variants.
//! - [`metrics`]: test-set evaluation, error grids, flux diagnostics, and
//!   CSV/JSON/SVG emission.

pub mod diffnet;
pub mod error;
pub mod geometry;
pub mod losses;
pub mod metrics;
pub mod orchestrator;
pub mod problems;
pub mod rng;

pub use error::{Error, Result};
