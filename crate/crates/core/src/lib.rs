//! Numerical chain for the quasiconformal constant of the nearest point
//! retraction, plus a laboratory for bent geodesics in hyperbolic space.
//!
//! The pipeline runs
//! hill function → `G(L)` → `Q(L, x)` → certified step function → staircase
//! polygon → Schwarz–Christoffel map → Poincaré distance → `K(L) = exp(H)`.
//!
//! Module map:
//!
//! * [`specialfn`]: hill function and the tangent-line problem for `G(L)`.
//! * [`bendbounds`]: `c₁(L)`, the shear bounds `f`, `g`, the threshold `L₀` and `Q(L, x)`.
//! * [`region`]: step function `s ≤ Q` and the generalized polygon it bounds.
//! * [`scmap`]: half-plane Schwarz–Christoffel maps onto generalized polygons.
//! * [`hypmetric`]: hyperbolic distances and the analytic sandwich bounds.
//! * [`geodesiclab`]: piecewise geodesics in H² and H³.
//! * [`pipeline`]: orchestration used by the command line tool.

pub mod bendbounds;
pub mod error;
pub mod geodesiclab;
pub mod hypmetric;
pub mod numerics;
pub mod pipeline;
pub mod region;
pub mod scmap;
pub mod specialfn;

pub use error::{Error, Result};
pub use num_complex::Complex64;
