//! Desk-scale experiments on the four-corner Cantor set, its projections,
//! the lacunary cosine products `P_K(s) = prod_{l<K} cos^2(2 pi 4^l s)`
//! and toy Furstenberg sets.
//!
//! Exact arithmetic is used wherever the objects are finite (point sets,
//! measures, polynomial coefficients and their `L^p` integrals); integral
//! estimates are evaluated in floating point with explicit error bounds.

pub mod boxdim;
pub mod cli;
pub mod digit_sets;
pub mod error;
pub mod exact;
pub mod furstenberg;
pub mod integrals;
pub mod quadrature;
pub mod spectral;

pub use digit_sets::{
    enumerate_points, four_corner, make_spec, natural_measure, Budget, CantorSpec,
    DiscreteMeasure, PlanarPointSet, PointSet1D,
};
pub use error::{Error, Result};
pub use exact::Rational;
