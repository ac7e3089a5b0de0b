//! Heat kernels and regularized heat traces on hyperbolic cones and
//! finite-volume hyperbolic surfaces.
//!
//! The pieces, from the bottom up:
//!
//! - [`numerics`]: adaptive Gauss–Kronrod quadrature with error estimates,
//!   Gaussian-tail truncation, and a few special functions.
//! - [`hk_plane`]: the heat kernel of the hyperbolic plane at real and
//!   complex time.
//! - [`geometry`]: cones, cusps, truncations and orbifold signatures.
//! - [`cone_trace`]: elliptic heat traces of a cone and the truncated trace
//!   `I_{q,delta}` with its q-independent bound.
//! - [`surface`]: hyperbolic, elliptic, standard and reduced heat traces of
//!   a surface, and both sides of the Selberg trace formula.
//! - [`hecke`]: Hecke triangle groups and their primitive length spectra.
//! - [`experiments`]: the grid runs behind the `hyperheat` command.
//!
//! ```
//! use hyperheat::cone_trace::{elliptic_cone_trace, elliptic_cone_trace_hejhal};
//! use hyperheat::geometry::ConeParams;
//! use hyperheat::{ComplexTime, TraceConfig};
//!
//! let cfg = TraceConfig::default();
//! let cone = ConeParams::new(5)?;
//! let heat = elliptic_cone_trace(cone, ComplexTime::real(1.0)?, &cfg)?;
//! let fourier = elliptic_cone_trace_hejhal(cone, 1.0, &cfg)?;
//! assert!((heat.value - fourier.value).norm() < 1e-12);
//! # Ok::<(), hyperheat::Error>(())
//! ```

// Argument checks are written `!(x > 0.0)` on purpose so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cone_trace;
pub mod config;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod hecke;
pub mod hk_plane;
pub mod numerics;
pub mod surface;

pub use config::{InverseClassConvention, TraceConfig};
pub use error::{Error, Result};
pub use hk_plane::ComplexTime;
pub use numerics::{IntegralResult, QuadratureConfig};
