//! Exact-arithmetic engine for invariant generalized complex structures on
//! semisimple Lie groups.
//!
//! The pipeline: build a root system (A_n, D_n or E6) and a normalized Weyl
//! basis of the corresponding complex Lie algebra, encode an antiinvolution
//! selecting a real form, classify the sigma-positive root subsystems, solve
//! exactly for closed invariant 2-forms on regular subalgebras, check
//! admissibility, and assemble the resulting generalized complex structure.
//! Every computation is over Q(i, sqrt(p)); there are no floating point
//! tolerances anywhere.

pub mod chevalley;
pub mod forms;
pub mod gcs;
pub mod matrix;
pub mod real_forms;
pub mod root_system;
pub mod scalar;
pub mod sigma_systems;

pub use root_system::{Family, RootSet, RootSystem};
pub use scalar::{QuadField, Scalar};
