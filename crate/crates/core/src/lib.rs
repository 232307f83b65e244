//! Sidon sets and α-generalized Sidon sets in `[n] = {1, …, n}`.
//!
//! A set is Sidon when it has no 4-tuple `(a, b, c, d)` with `a + b = c + d`
//! and `{a, b} ∩ {c, d} = ∅`; it is α-generalized Sidon when it has at most
//! `α` such (ordered) tuples. The crate covers exact tuple counting, the
//! supersaturation multigraph `H^U(A)`, graph-container certificates,
//! exhaustive enumeration, the random `W` subsets and numeric audits of the
//! counting bounds.
//!
//! Real-valued code is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix it to `f64`.

pub mod bounds;
pub mod container;
pub mod enumerate;
pub mod error;
pub mod multigraph;
pub mod num;
pub mod params;
pub mod prob;
pub mod set;
pub mod tuples;

pub use error::{Error, Result, WCondition};
pub use num::Real;
pub use params::ProblemParams;
pub use set::IntSet;
pub use tuples::{count_sidon_tuples, is_sidon, vertex_stats, SidonTuple, VertexStats};

pub type Params = ProblemParams<f64>;
pub type SupersaturationReport = multigraph::SupersaturationReport<f64>;
pub type WSampleReport = prob::WSampleReport<f64>;
pub type JansonInput = prob::JansonInput<f64>;
pub type VerificationReport = container::VerificationReport<f64>;
pub type BoundReport = bounds::BoundReport<f64>;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
