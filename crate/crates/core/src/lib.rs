//! Generalized holographic complexity growth rates for static AdS black holes.

pub mod app;
pub mod criticality;
pub mod curvature;
pub mod error;
pub mod fg;
pub mod functional;
pub mod geometry;
pub mod io;
pub mod jumps;
pub mod quadrature;
pub mod roots;
pub mod surfaces;

pub use error::{LabError, Result};
pub use geometry::{BulkModel, CurvatureSample, Family};
