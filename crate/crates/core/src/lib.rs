//! Exact verification toolkit for parabolic geometries of free distributions:
//! the graded algebra so(n+1,n), its Lie algebra homology, split octonions,
//! the Fefferman-type inclusions, explicit flat models with holonomy R^p,
//! the n = 3 conformal construction and pointwise tractor algebra.

pub mod conformal3;
pub mod error;
pub mod flatmodels;
pub mod exactalg;
pub mod homology;
pub mod octonion;
pub mod poly;
pub mod spin_incl;
pub mod suite;
pub mod tractorpt;
pub mod report;

pub use error::{Error, Result};
pub use report::{CheckReport, Status};
