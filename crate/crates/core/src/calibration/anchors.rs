//! Sequential calibration of free parameters against anchor values.
//!
//! Each round picks the anchors that depend on exactly one still-unknown
//! parameter, solves that parameter in closed form (or by exponent
//! bisection), and repeats until nothing more can be isolated. Several
//! anchors isolating the same parameter in one round are averaged; their
//! residuals show up in the report.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{solve_exponent, CalibrationError};
use crate::model::{self, Component, ComponentBreakdown, Saturating};
use crate::money::Money;
use crate::params::{BaseForm, ModelParameters, ParamId, Provenance};
use crate::profile::ResearcherProfile;

/// Largest relative tolerance an anchor may carry.
pub const MAX_ANCHOR_TOLERANCE: f64 = 0.05;

/// Relative tolerance used when an anchor does not state one.
pub const DEFAULT_ANCHOR_TOLERANCE: f64 = 1e-3;

fn default_tolerance() -> f64 {
    DEFAULT_ANCHOR_TOLERANCE
}

/// A worked value the model should reproduce.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Anchor {
    pub label: String,
    pub component: Component,
    /// Metrics the component is evaluated at; omitted fields are entry-level.
    #[serde(default)]
    pub profile: ResearcherProfile,
    pub target_kzt: f64,
    /// Relative tolerance in (0, 0.05].
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    /// Only verified, never used to solve a parameter.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub check_only: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnchorSet {
    /// Parameters to solve for; all others are taken from the seed.
    #[serde(default)]
    pub free: Vec<ParamId>,
    #[serde(default)]
    pub anchors: Vec<Anchor>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolvedParam {
    pub param: ParamId,
    pub value: f64,
    pub anchors: Vec<String>,
    pub round: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnchorResidual {
    pub label: String,
    pub component: Component,
    pub target_kzt: f64,
    pub model_kzt: f64,
    /// `(model - target) / target`.
    pub relative_residual: f64,
    pub tolerance: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationReport {
    pub params: ModelParameters,
    pub solved: Vec<SolvedParam>,
    pub residuals: Vec<AnchorResidual>,
}

impl CalibrationReport {
    pub fn flagged(&self) -> impl Iterator<Item = &AnchorResidual> {
        self.residuals.iter().filter(|r| r.flagged)
    }
}

impl AnchorSet {
    /// Worked values from the published examples: the entry-level base, the
    /// three performance sub-terms of the high-achiever profile, and the
    /// base and saturating maxima as checks. Solves `base_w0`, `pub_delta`,
    /// `cit_delta` and `grant_impact`.
    pub fn reference() -> AnchorSet {
        let senior = ResearcherProfile {
            experience_years: 40.0,
            qualification_level: 3,
            publications: 100,
            h_index: 50,
            grant_count: 3,
            grant_total_kzt: 50_000_000.0,
            ..ResearcherProfile::default()
        };
        let anchor = |label: &str, component, profile: ResearcherProfile, target_kzt, tolerance, source: &str| Anchor {
            label: label.to_string(),
            component,
            profile,
            target_kzt,
            tolerance,
            check_only: false,
            source: Some(source.to_string()),
        };
        let check = |a: Anchor| Anchor { check_only: true, ..a };
        let only = |f: fn(&mut ResearcherProfile)| {
            let mut p = ResearcherProfile::default();
            f(&mut p);
            p
        };
        AnchorSet {
            free: vec![
                ParamId::BaseW0,
                ParamId::PubDelta,
                ParamId::CitDelta,
                ParamId::GrantImpact,
            ],
            anchors: vec![
                anchor(
                    "base_entry",
                    Component::Base,
                    ResearcherProfile::default(),
                    209_000.0,
                    1e-6,
                    "base salary, Master's degree, first year",
                ),
                check(anchor(
                    "base_senior",
                    Component::Base,
                    senior.clone(),
                    279_911.0,
                    1e-4,
                    "base salary, Doctor of Science, 40 years",
                )),
                anchor(
                    "publications_100",
                    Component::Publication,
                    senior.clone(),
                    1_888_350.0,
                    1e-3,
                    "15000 x 125.89",
                ),
                anchor(
                    "h_index_50",
                    Component::Citation,
                    senior.clone(),
                    631_000.0,
                    1e-3,
                    "10000 x 63.10",
                ),
                anchor(
                    "grants_3_of_50m",
                    Component::Grant,
                    senior.clone(),
                    304_800.0,
                    1e-3,
                    "20000 x 1.618 x 9.42",
                ),
                check(anchor(
                    "performance_senior",
                    Component::Performance,
                    senior,
                    2_824_150.0,
                    5e-3,
                    "1888350 + 631000 + 304800",
                )),
                check(anchor(
                    "collaborative_max",
                    Component::Collaborative,
                    only(|p| p.internal_projects = 20),
                    43_233.0,
                    1e-4,
                    "C = 20",
                )),
                check(anchor(
                    "competency_max",
                    Component::Competency,
                    only(|p| p.certifications = 10),
                    31_075.0,
                    1e-4,
                    "K = 10",
                )),
                check(anchor(
                    "insignia_max",
                    Component::Insignia,
                    only(|p| p.insignia_count = 10),
                    44_248.0,
                    1e-4,
                    "I = 10",
                )),
                check(anchor(
                    "intl_collab_max",
                    Component::IntlCollab,
                    only(|p| p.intl_projects = 10),
                    86_467.0,
                    1e-4,
                    "SC = 10",
                )),
            ],
        }
    }
}

/// Parameters a component's value depends on.
pub fn dependencies(component: Component, params: &ModelParameters) -> Vec<ParamId> {
    use ParamId::*;
    match component {
        Component::Base => match params.base_form {
            BaseForm::WorkedExample => vec![BaseW0, BaseAlpha, BaseBeta, BaseT0, BaseLambda],
            BaseForm::Additive => vec![BaseW0, BaseAdditiveAlpha, BaseBeta, BaseT0, BaseLambda],
        },
        Component::Publication => vec![PubGamma, PubDelta],
        Component::Citation => vec![CitGamma, CitDelta],
        Component::Grant => vec![GrantGamma, GoldenPhi, GrantImpact, GrantCountCap],
        Component::Collaborative => vec![CollabLambda, CollabMu, CapInternalProjects],
        Component::Competency => vec![SkillLambda, SkillMu, CapCertifications],
        Component::Insignia => vec![InsigLambda, InsigMu, CapInsignia],
        Component::IntlCollab => vec![IntlLambda, IntlMu, CapIntlProjects],
        Component::Performance => [Component::Publication, Component::Citation, Component::Grant]
            .into_iter()
            .flat_map(|c| dependencies(c, params))
            .collect(),
        Component::Total => {
            let mut all: Vec<ParamId> = Component::ALL[..Component::ALL.len() - 1]
                .iter()
                .filter(|c| **c != Component::Performance)
                .flat_map(|c| dependencies(*c, params))
                .collect();
            all.sort();
            all.dedup();
            all
        }
    }
}

fn is_composite(component: Component) -> bool {
    matches!(component, Component::Performance | Component::Total)
}

fn component_value(anchor: &Anchor, params: &ModelParameters) -> Result<Money, CalibrationError> {
    let b: ComponentBreakdown = model::total_salary(&anchor.profile, params)?;
    Ok(b.get(anchor.component))
}

fn invalid(anchor: &Anchor, reason: impl Into<String>) -> CalibrationError {
    CalibrationError::InvalidAnchor {
        anchor: anchor.label.clone(),
        reason: reason.into(),
    }
}

/// Ensures an isolated value is usable.
fn finite(anchor: &Anchor, param: ParamId, value: f64) -> Result<f64, CalibrationError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(invalid(anchor, format!("{param} has no finite solution")))
    }
}

/// Solves `param` so that the anchor's component hits its target, all
/// other parameters fixed.
fn isolate(anchor: &Anchor, param: ParamId, params: &ModelParameters) -> Result<f64, CalibrationError> {
    use ParamId::*;
    let t = anchor.target_kzt;
    let p = &anchor.profile;
    let years = p.experience_years;
    let level = f64::from(p.qualification_level);
    let log_years = (years / params.base_t0).ln_1p();
    let qualification = 1.0 + params.base_lambda * level;
    let not_isolatable = || CalibrationError::NotIsolatable {
        anchor: anchor.label.clone(),
        param,
        component: anchor.component,
    };
    let value = match (anchor.component, param, params.base_form) {
        (Component::Base, BaseW0, BaseForm::WorkedExample) => {
            t / ((1.0 + params.base_alpha * log_years).powf(params.base_beta) * qualification)
        }
        (Component::Base, BaseW0, BaseForm::Additive) => {
            t - params.base_additive_alpha * qualification * log_years.powf(params.base_beta)
        }
        (Component::Base, BaseLambda, BaseForm::WorkedExample) => {
            (t / (params.base_w0 * (1.0 + params.base_alpha * log_years).powf(params.base_beta)) - 1.0) / level
        }
        (Component::Base, BaseBeta, BaseForm::WorkedExample) => {
            if years == 0.0 {
                return Err(invalid(anchor, "base_beta needs experience_years > 0"));
            }
            solve_exponent(
                1.0 + params.base_alpha * log_years,
                t / (params.base_w0 * qualification),
            )?
            .solution
        }
        (Component::Base, BaseAdditiveAlpha, BaseForm::Additive) => {
            if years == 0.0 {
                return Err(invalid(anchor, "base_additive_alpha needs experience_years > 0"));
            }
            (t - params.base_w0) / (qualification * log_years.powf(params.base_beta))
        }
        (Component::Publication, PubGamma, _) => t / f64::from(p.publications).powf(params.pub_delta),
        (Component::Publication, PubDelta, _) => {
            solve_exponent(f64::from(p.publications), t / params.pub_gamma)?.solution
        }
        (Component::Citation, CitGamma, _) => t / f64::from(p.h_index).powf(params.cit_delta),
        (Component::Citation, CitDelta, _) => solve_exponent(f64::from(p.h_index), t / params.cit_gamma)?.solution,
        (Component::Grant, GrantGamma | GrantImpact | GoldenPhi, _) => {
            let cap = f64::from(params.grant_count_cap);
            let count = f64::from(p.grant_count).min(cap);
            let volume = model::grant_amount(f64::from(p.grant_count), p.grant_total_kzt, params) / 1e6;
            if count == 0.0 || volume == 0.0 {
                return Err(invalid(anchor, "grant anchors need grants and a non-zero grant total"));
            }
            let count_factor = params.golden_phi.powf(count / cap);
            let volume_factor = volume.powf(params.grant_impact);
            match param {
                GrantGamma => t / (count_factor * volume_factor),
                GrantImpact => solve_exponent(volume, t / (params.grant_gamma * count_factor))?.solution,
                _ => (t / (params.grant_gamma * volume_factor)).powf(cap / count),
            }
        }
        (c, _, _) if c.saturating().is_some() => {
            let s: Saturating = c.saturating().expect("checked");
            let (lambda, mu, cap) = s.coefficients(params);
            let x = p.metric(s.metric()).min(cap);
            if x == 0.0 {
                return Err(invalid(anchor, "saturating anchors need a positive count"));
            }
            let lambda_id = dependencies(c, params)[0];
            let mu_id = dependencies(c, params)[1];
            if param == lambda_id {
                t / -(-mu * x).exp_m1()
            } else if param == mu_id {
                if t >= lambda {
                    return Err(invalid(anchor, format!("target {t} is not below lambda {lambda}")));
                }
                -(-t / lambda).ln_1p() / x
            } else {
                return Err(not_isolatable());
            }
        }
        (Component::Performance | Component::Total, _, _) => return isolate_by_bisection(anchor, param, params),
        _ => return Err(not_isolatable()),
    };
    finite(anchor, param, value)
}

/// Solves a summed component for one parameter by bracketing and bisecting
/// on the parameter. Every component is monotone in each of its
/// parameters, so a sign change brackets the unique solution.
fn isolate_by_bisection(anchor: &Anchor, param: ParamId, params: &ModelParameters) -> Result<f64, CalibrationError> {
    let start = params.get(param);
    if start <= 0.0 || matches!(param, ParamId::GrantCountCap) || param.name().starts_with("cap_") {
        return Err(CalibrationError::NotIsolatable {
            anchor: anchor.label.clone(),
            param,
            component: anchor.component,
        });
    }
    let residual = |v: f64| -> f64 {
        let mut trial = params.clone();
        if trial.set(param, v).is_err() {
            return f64::NAN;
        }
        match component_value(anchor, &trial) {
            Ok(m) => m.amount() - anchor.target_kzt,
            Err(_) => f64::NAN,
        }
    };
    let at_start = residual(start);
    if at_start == 0.0 {
        return Ok(start);
    }
    // Widen geometrically around the current value until the sign flips.
    let mut bracket = None;
    for k in 1..=60 {
        let factor = 2f64.powi(k);
        for candidate in [start * factor, start / factor] {
            let r = residual(candidate);
            if r.is_finite() && r.signum() != at_start.signum() {
                bracket = Some((start.min(candidate), start.max(candidate)));
                break;
            }
        }
        if bracket.is_some() {
            break;
        }
    }
    let (lo, hi) = bracket.ok_or_else(|| invalid(anchor, format!("could not bracket a solution for {param}")))?;
    let tolerance = 1e-12 * hi.abs().max(1.0);
    Ok(super::bisect(residual, lo, hi, tolerance, 400)?.root)
}

fn check_anchor(anchor: &Anchor) -> Result<(), CalibrationError> {
    if !(anchor.target_kzt.is_finite() && anchor.target_kzt > 0.0) {
        return Err(invalid(anchor, "target must be positive"));
    }
    if !(anchor.tolerance > 0.0 && anchor.tolerance <= MAX_ANCHOR_TOLERANCE) {
        return Err(invalid(
            anchor,
            format!("tolerance must lie in (0, {MAX_ANCHOR_TOLERANCE}]"),
        ));
    }
    anchor.profile.validate().map_err(|e| invalid(anchor, e.to_string()))
}

/// Fits `anchors.free` starting from `seed` and reports one residual per
/// anchor.
pub fn calibrate_from_anchors(
    anchors: &AnchorSet,
    seed: &ModelParameters,
) -> Result<CalibrationReport, CalibrationError> {
    if anchors.anchors.is_empty() {
        return Err(CalibrationError::NoAnchors);
    }
    seed.validate()?;
    anchors.anchors.iter().try_for_each(check_anchor)?;

    let mut params = seed.clone();
    let mut unsolved: Vec<ParamId> = Vec::new();
    for &p in &anchors.free {
        if !unsolved.contains(&p) {
            unsolved.push(p);
        }
    }
    let mut solved = Vec::new();
    let mut round = 0;
    loop {
        let mut isolating: BTreeMap<ParamId, Vec<&Anchor>> = BTreeMap::new();
        for anchor in anchors.anchors.iter().filter(|a| !a.check_only) {
            let unknown: Vec<ParamId> = dependencies(anchor.component, &params)
                .into_iter()
                .filter(|p| unsolved.contains(p))
                .collect();
            if let [param] = unknown[..] {
                isolating.entry(param).or_default().push(anchor);
            }
        }
        if isolating.is_empty() {
            break;
        }
        // Single-term anchors take precedence over summed components.
        for group in isolating.values_mut() {
            if group.iter().any(|a| !is_composite(a.component)) {
                group.retain(|a| !is_composite(a.component));
            }
        }
        round += 1;
        // Solve against the parameters as they stood at the start of the round.
        let frozen = params.clone();
        for (param, group) in isolating {
            let values = group
                .iter()
                .map(|a| isolate(a, param, &frozen))
                .collect::<Result<Vec<_>, _>>()?;
            let value = values.iter().sum::<f64>() / values.len() as f64;
            params.set(param, value)?;
            params.set_provenance(param, Provenance::ExampleImplied);
            unsolved.retain(|p| *p != param);
            solved.push(SolvedParam {
                param,
                value,
                anchors: group.iter().map(|a| a.label.clone()).collect(),
                round,
            });
        }
    }
    if !unsolved.is_empty() {
        return Err(CalibrationError::UnderDetermined { params: unsolved });
    }
    params.validate()?;

    let residuals = anchors
        .anchors
        .iter()
        .map(|a| {
            let model_kzt = component_value(a, &params)?.amount();
            let relative_residual = (model_kzt - a.target_kzt) / a.target_kzt;
            Ok(AnchorResidual {
                label: a.label.clone(),
                component: a.component,
                target_kzt: a.target_kzt,
                model_kzt,
                relative_residual,
                tolerance: a.tolerance,
                flagged: relative_residual.abs() > a.tolerance,
            })
        })
        .collect::<Result<Vec<_>, CalibrationError>>()?;

    Ok(CalibrationReport {
        params,
        solved,
        residuals,
    })
}
