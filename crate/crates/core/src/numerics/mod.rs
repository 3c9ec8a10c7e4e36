//! Quadrature, special functions and bracketing root finding used by the
//! field-model integrals.

pub mod quadrature;
pub mod roots;
pub mod special;

pub use quadrature::{integrate, integrate_semi_infinite, QuadratureResult, DEFAULT_REL_TOL};
pub use roots::bisect_monotone;
pub use special::{coth_stable, gamma_fn, tricomi_u};
