//! Sharpness constructions: the `f_r` family, the rectangle map and the
//! `p > 2` ratio explorer.

mod explorer;
mod family;
mod rectmap;
mod simplex;

use thiserror::Error;

use crate::model::ModelError;
use crate::quadrature::QuadratureError;
use crate::special::ConstantError;

pub use explorer::{conjecture_explore, explorer_ratio, ExplorerResult, EXPLORER_DEGREE};
pub use family::{
    kernel_identity_check, kernel_integral, sharpness_sweep, sharpness_sweep_defects, ExtremalP, KernelCheck, SweepPoint,
};
pub use rectmap::{
    rectmap_boundary_integrals, rectmap_diameter, rectmap_f, rectmap_solve, theorem4_sharpness, RectangleMap,
    Theorem4Sharpness,
};
pub use simplex::{nelder_mead, SimplexResult};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExtremalError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("eps = {eps} outside the bracket [{lo}, {hi}] reachable by the prevertex bisection")]
    NoBracket { eps: f64, lo: f64, hi: f64 },
    #[error("evaluation at a prevertex ({re}, {im})")]
    Prevertex { re: f64, im: f64 },
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Constant(#[from] ConstantError),
    #[error(transparent)]
    Model(#[from] ModelError),
}
