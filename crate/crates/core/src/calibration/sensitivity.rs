//! Finite-difference sensitivity of the total salary to each metric, and
//! a concavity check for individual components.

use serde::Serialize;

use super::CalibrationError;
use crate::model::{self, Component, Saturating};
use crate::money::Money;
use crate::params::ModelParameters;
use crate::profile::{Metric, ResearcherProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DifferenceScheme {
    Central,
    /// Used at a lower domain boundary.
    Forward,
    /// Used at an upper boundary (a cap or the top qualification level).
    Backward,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityReport {
    pub metric: Metric,
    /// Metric value the derivative is taken at.
    pub at: f64,
    /// Total salary at the profile.
    pub salary: Money,
    /// d(total)/d(metric), KZT per unit of the metric.
    pub gradient: f64,
    /// `(x / S) * dS/dx`.
    pub elasticity: f64,
    pub step: f64,
    pub scheme: DifferenceScheme,
    /// Set when a one-sided difference had to be used.
    pub boundary: bool,
    /// Discrete marginal for count metrics: `S(x + 1) - S(x)`, or
    /// `S(x) - S(x - 1)` where `x + 1` leaves the domain.
    pub unit_step_delta: Option<f64>,
    pub evaluated_at: ResearcherProfile,
}

/// `(f(x + h) - f(x - h)) / 2h`.
pub fn central_difference<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Domain of a metric: `(lower, upper, cap)`. The cap, when present, is
/// where the component stops responding.
fn domain(metric: Metric, params: &ModelParameters) -> (f64, f64, Option<f64>) {
    let cap = match metric {
        Metric::GrantCount => Some(f64::from(params.grant_count_cap)),
        Metric::InternalProjects => Some(f64::from(params.cap_internal_projects)),
        Metric::Certifications => Some(f64::from(params.cap_certifications)),
        Metric::Insignia => Some(f64::from(params.cap_insignia)),
        Metric::IntlProjects => Some(f64::from(params.cap_intl_projects)),
        _ => None,
    };
    match metric {
        Metric::QualificationLevel => (1.0, 3.0, None),
        _ => (0.0, f64::INFINITY, cap),
    }
}

/// Sensitivity of the total salary to one metric.
///
/// Uses a central difference with step `max(1e-6, 1e-6 |x|)` on the
/// real-valued extension of the model. At a lower boundary the difference
/// is forward; at an upper boundary or a cap it is backward, so a metric
/// sitting exactly on its cap reports the left derivative of its curve.
pub fn sensitivity(
    profile: &ResearcherProfile,
    params: &ModelParameters,
    metric: Metric,
) -> Result<SensitivityReport, CalibrationError> {
    profile.validate()?;
    params.validate()?;
    let base = profile.metrics();
    let x = base.get(metric);
    let total_at = |v: f64| -> Result<f64, CalibrationError> {
        Ok(model::evaluate(&base.with(metric, v), params)?.total.amount())
    };
    let salary = total_at(x)?;
    let h = (1e-6 * x.abs()).max(1e-6);
    let (lower, upper, cap) = domain(metric, params);
    let upper_edge = cap.map_or(upper, |c| c.min(upper));

    let (scheme, gradient) = if x - h < lower {
        (DifferenceScheme::Forward, (total_at(x + h)? - salary) / h)
    } else if x + h > upper_edge && x <= upper_edge {
        (DifferenceScheme::Backward, (salary - total_at(x - h)?) / h)
    } else {
        let plus = total_at(x + h)?;
        let minus = total_at(x - h)?;
        (DifferenceScheme::Central, (plus - minus) / (2.0 * h))
    };

    let unit_step_delta = if metric.is_count() {
        if x + 1.0 <= upper {
            Some(total_at(x + 1.0)? - salary)
        } else if x - 1.0 >= lower {
            Some(salary - total_at(x - 1.0)?)
        } else {
            None
        }
    } else {
        None
    };

    let elasticity = if salary > 0.0 { x / salary * gradient } else { 0.0 };
    Ok(SensitivityReport {
        metric,
        at: x,
        salary: Money::new(salary)?,
        gradient,
        elasticity,
        step: h,
        scheme,
        boundary: scheme != DifferenceScheme::Central,
        unit_step_delta,
        evaluated_at: profile.clone(),
    })
}

/// One report per metric, in [`Metric::ALL`] order.
pub fn sensitivity_table(
    profile: &ResearcherProfile,
    params: &ModelParameters,
) -> Result<Vec<SensitivityReport>, CalibrationError> {
    Metric::ALL
        .into_iter()
        .map(|m| sensitivity(profile, params, m))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarginPoint {
    pub x: u32,
    /// `f(x + 1) - 2 f(x) + f(x - 1)`.
    pub second_difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginalReport {
    pub component: Component,
    pub points: Vec<MarginPoint>,
    /// True when every second difference is negative.
    pub diminishing: bool,
}

/// Checks whether a component's curve has diminishing marginal returns on
/// the integer grid `lo..=hi`, via unit-step second differences at the
/// interior points.
///
/// Saturating components are examined on their uncapped curve
/// `lambda * (1 - exp(-mu x))`. Power terms (publications, citations) and
/// the base component (over experience years, at level 1) are accepted too,
/// so their shape can be compared.
pub fn diminishing_marginal_check(
    component: Component,
    params: &ModelParameters,
    lo: u32,
    hi: u32,
) -> Result<MarginalReport, CalibrationError> {
    if hi < lo + 2 {
        return Err(CalibrationError::InvalidProblem(format!(
            "range {lo}..={hi} has no interior points"
        )));
    }
    let curve = |x: f64| -> Result<f64, CalibrationError> {
        let v = match component {
            Component::Base => model::base_at(x, 1.0, params)?,
            Component::Publication => model::publication_term(x, params)?,
            Component::Citation => model::citation_term(x, params)?,
            c => match c.saturating() {
                Some(s) => {
                    let (lambda, mu, _) = Saturating::coefficients(s, params);
                    model::saturating_component(x, lambda, mu, f64::INFINITY)?
                }
                None => {
                    return Err(CalibrationError::InvalidProblem(format!(
                        "no single-metric curve for the {c} component"
                    )))
                }
            },
        };
        Ok(v.amount())
    };
    let values = (lo..=hi).map(|x| curve(f64::from(x))).collect::<Result<Vec<_>, _>>()?;
    let points: Vec<MarginPoint> = values
        .windows(3)
        .zip(lo + 1..hi)
        .map(|(w, x)| MarginPoint {
            x,
            second_difference: w[2] - 2.0 * w[1] + w[0],
        })
        .collect();
    let diminishing = points.iter().all(|p| p.second_difference < 0.0);
    Ok(MarginalReport {
        component,
        points,
        diminishing,
    })
}
