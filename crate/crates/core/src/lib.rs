//! Dimension numerics for solenoidal attractors of skew-product maps
//! `T(x, y, z) = (Mx mod 1, λ(x)R(θ(x))y + f(x), λ̃z + g(x))` on
//! `T^l × R^p × R^d`.
//!
//! The crate builds the symbolic coding of the attractor, solves Bowen's
//! equation for the predicted slice dimension `d₀`, estimates box-counting
//! dimensions of slices and of the attractor from point clouds, and scans
//! for near-overlaps to measure transversality margins.
//!
//! ```
//! use solenoid_dim::{presets, thermo};
//!
//! let spec = presets::interval_constant(0.25);
//! let root = thermo::bowen_root(&spec, 1e-12, 10).unwrap();
//! assert!((root.d0 - 0.5).abs() < 1e-10);
//! ```

pub mod boxdim;
pub mod cli;
pub mod config;
pub mod error;
pub mod linalg;
pub mod manifold;
pub mod model;
pub mod numerics;
pub mod presets;
pub mod symbolic;
pub mod thermo;
pub mod transversality;
pub mod trig;

pub use error::{Error, Result};
pub use model::{Point, SolenoidParams, SolenoidSpec};
pub use symbolic::Word;
