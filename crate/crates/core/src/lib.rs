//! Dirichlet characters, theta functions and L-values on the critical line.
//!
//! The numerical kernels (Hurwitz zeta, log-Gamma, the character-group
//! transform, theta and L-values) are generic over [`Real`]; the aliases
//! below fix the scalar to `f64` or `f32`.

pub mod approx;
pub mod bounds;
pub mod characters;
pub mod error;
pub mod lfunc;
pub mod numtheory;
pub mod randmodel;
pub mod report;
pub mod scalar;
pub mod specfun;
pub mod sum;
pub mod theta;
pub mod transform;

pub use approx::ComplexApprox;
pub use characters::{build_group, Character, CharacterGroup, Parity};
pub use error::{Error, Result};
pub use lfunc::ShiftTuple;
pub use report::{Family, MomentReport};
pub use scalar::Real;

pub type Complex64 = num_complex::Complex<f64>;
pub type Complex32 = num_complex::Complex<f32>;
pub type ComplexApprox64 = ComplexApprox<f64>;
pub type ComplexApprox32 = ComplexApprox<f32>;
pub type LValueGrid64 = lfunc::LValueGrid<f64>;
pub type LValueGrid32 = lfunc::LValueGrid<f32>;
pub type CharacterTransform64 = transform::CharacterTransform<f64>;
pub type CharacterTransform32 = transform::CharacterTransform<f32>;
