//! Scalar numerical building blocks shared by the higher level modules.

pub mod golden;
pub mod quadrature;
pub mod roots;

pub use golden::{golden_section, Minimum};
pub use quadrature::{GaussJacobi, RuleCache};
pub use roots::{brent, Root, RootOptions};
