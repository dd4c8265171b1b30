//! Inverse problems on the salary model: exponent solving, fitting
//! parameters to anchor values, and finite-difference sensitivity.

mod anchors;
mod exponent;
mod sensitivity;

pub use anchors::{
    calibrate_from_anchors, dependencies, Anchor, AnchorResidual, AnchorSet, CalibrationReport, SolvedParam,
};
pub use exponent::{bisect, solve_exponent, Bisection, ExponentSolve};
pub use sensitivity::{
    central_difference, diminishing_marginal_check, sensitivity, sensitivity_table, DifferenceScheme, MarginPoint,
    MarginalReport, SensitivityReport,
};

use thiserror::Error;

use crate::error::ModelError;
use crate::model::Component;
use crate::params::ParamId;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CalibrationError {
    #[error("target {target} is not reachable as {base}^x for x in [{lo}, {hi}]")]
    NotBracketable { base: f64, target: f64, lo: f64, hi: f64 },

    #[error("bisection stopped after {iterations} iterations without meeting tolerance")]
    IterationLimit { iterations: usize },

    #[error("invalid exponent problem: {0}")]
    InvalidProblem(String),

    #[error("no anchors supplied")]
    NoAnchors,

    #[error("under-determined: no anchor isolates {}", names(.params))]
    UnderDetermined { params: Vec<ParamId> },

    #[error("anchor `{anchor}`: {param} cannot be isolated from the {component} component")]
    NotIsolatable {
        anchor: String,
        param: ParamId,
        component: Component,
    },

    #[error("anchor `{anchor}`: {reason}")]
    InvalidAnchor { anchor: String, reason: String },

    #[error(transparent)]
    Model(#[from] ModelError),
}

fn names(params: &[ParamId]) -> String {
    params.iter().map(|p| p.name()).collect::<Vec<_>>().join(", ")
}
