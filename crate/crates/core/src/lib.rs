//! Finitely presented C∞-rings and the machinery around them.
//!
//! The crate works with presentations `C∞(ℝⁿ)/(f_1, …, f_k)` whose relations
//! are symbolic [`expr::SmoothExpr`]s. On top of that it provides Weil
//! algebras with their Taylor-expansion C∞-structure, finitely presented
//! modules and cotangent modules, embedded manifolds and fibre products, and
//! finite-group quotients. Statements that are not decidable symbolically
//! (ideal membership, exactness of module sequences) are checked numerically
//! at real points of the presentations, with explicit tolerances.

pub mod cli;
pub mod cmodule;
pub mod cring;
pub mod error;
pub mod expr;
pub mod geom;
pub mod linalg;
pub mod poly;
pub mod quotient;
pub mod weil;
pub mod workspace;

pub use cring::{Ring, RingElement, RingMorphism, RingPresentation};
pub use error::{DomainError, Error, Result};
pub use expr::{parse, SmoothExpr};
