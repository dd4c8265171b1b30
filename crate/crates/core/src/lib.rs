//! Nonlinear salary model for researchers.
//!
//! The total salary is the sum of six components: a base part driven by
//! experience and qualification, a performance part (publications,
//! H-index, grants), and four saturating parts for internal projects,
//! certifications, distinctions and international projects. On top of the
//! model sit the salary envelope (minimum, maximum and their geometric
//! mean), an expectancy-theory motivational-force gate, and calibration
//! tools that recover under-specified exponents from worked values.
//!
//! ```
//! use salary_model::{envelope, EnvelopeMode, ModelParameters};
//!
//! let params = ModelParameters::default();
//! let env = envelope(&params, EnvelopeMode::Consistent).unwrap();
//! assert_eq!(env.minimum.whole_kzt(), 209_000);
//! assert!(env.minimum <= env.optimal && env.optimal <= env.maximum);
//! ```

pub mod calibration;
pub mod envelope;
mod error;
pub mod io;
pub mod model;
mod money;
pub mod params;
pub mod profile;

pub use calibration::{
    calibrate_from_anchors, diminishing_marginal_check, sensitivity, sensitivity_table, solve_exponent, AnchorSet,
    CalibrationError, CalibrationReport, ExponentSolve, SensitivityReport,
};
pub use envelope::{
    envelope, figure_data, motivational_force, optimal_salary, salary_max, salary_min, EnvelopeMode,
    MotivationAssessment, MotivationBand, SalaryEnvelope,
};
pub use error::ModelError;
pub use model::{
    base_component, citation_term, grant_term, performance_component, publication_term, saturating_component,
    total_salary, Component, ComponentBreakdown, Performance, Saturating,
};
pub use money::{group_thousands, Money};
pub use params::{BaseForm, GrantSemantics, ModelParameters, ParamId, Provenance};
pub use profile::{Metric, Metrics, ResearcherProfile};
