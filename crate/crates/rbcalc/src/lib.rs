//! Exact-arithmetic combinatorial Hopf algebra and Rota-Baxter calculus.
//!
//! The crate provides four algebraic layers and a verification harness:
//!
//! * [`algebra`]: arbitrary-precision rationals, linear combinations over
//!   ordered bases, degree-truncated series with exp/log, JSON and LaTeX
//!   emitters, exact rank computation.
//! * [`permutations`]: the Hopf algebra of permutations, half-shuffles,
//!   the insertion product, Solomon's descent subalgebra, and the
//!   continuous BCH element with its right-nested Lie bracket expansion.
//! * [`trees`]: planar binary trees with the simplex-subdivision product
//!   and their arborification into permutations; labeled rooted trees
//!   with grafting, symmetric braces, the enveloping product, and the
//!   Magnus element.
//! * [`words`]: shuffle and quasi-shuffle products on words, the
//!   recursive half-shuffles, and the half-shuffle word basis with its
//!   rank certificate.
//! * [`rota_baxter`]: the Rota-Baxter operator interface with concrete
//!   instances (summation, triangular projection, pole subtraction,
//!   integration, and the free construction), derived pre-Lie/post-Lie
//!   structures, Atkinson factorization, Bogoliubov recursion, Spitzer
//!   and Bohnenblust-Spitzer identities, and the pre-Lie Magnus
//!   expansion.
//!
//! All arithmetic is exact; every identity check reports an explicit
//! residual instead of relying on tolerances.

pub mod algebra;
pub mod error;
pub mod permutations;
pub mod rota_baxter;
pub mod trees;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
