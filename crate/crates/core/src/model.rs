//! Salary components and their sum.
//!
//! Every component is a closed-form function of one or two metrics. The
//! functions here take real-valued metrics so that the same code serves
//! whole-number profiles and the continuous extension used for
//! sensitivity analysis.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::money::Money;
use crate::params::{BaseForm, GrantSemantics, ModelParameters};
use crate::profile::{Metric, Metrics, ResearcherProfile};

/// Grant amounts enter the volume factor in millions of KZT.
const GRANT_UNIT_KZT: f64 = 1e6;

/// Salary components, in evaluation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    Base,
    Publication,
    Citation,
    Grant,
    Performance,
    Collaborative,
    Competency,
    Insignia,
    IntlCollab,
    Total,
}

impl Component {
    pub const ALL: [Component; 10] = [
        Component::Base,
        Component::Publication,
        Component::Citation,
        Component::Grant,
        Component::Performance,
        Component::Collaborative,
        Component::Competency,
        Component::Insignia,
        Component::IntlCollab,
        Component::Total,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Component::Base => "base",
            Component::Publication => "publication",
            Component::Citation => "citation",
            Component::Grant => "grant",
            Component::Performance => "performance",
            Component::Collaborative => "collaborative",
            Component::Competency => "competency",
            Component::Insignia => "insignia",
            Component::IntlCollab => "intl_collab",
            Component::Total => "total",
        }
    }

    pub fn saturating(self) -> Option<Saturating> {
        match self {
            Component::Collaborative => Some(Saturating::Collaborative),
            Component::Competency => Some(Saturating::Competency),
            Component::Insignia => Some(Saturating::Insignia),
            Component::IntlCollab => Some(Saturating::IntlCollab),
            _ => None,
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Component {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Component::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown component `{s}`"))
    }
}

/// The four components of the form `lambda * (1 - exp(-mu * x))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Saturating {
    /// Internal research projects.
    Collaborative,
    /// Courses and certifications.
    Competency,
    /// Awards, memberships and honours.
    Insignia,
    /// International research projects.
    IntlCollab,
}

impl Saturating {
    pub const ALL: [Saturating; 4] = [
        Saturating::Collaborative,
        Saturating::Competency,
        Saturating::Insignia,
        Saturating::IntlCollab,
    ];

    pub fn component(self) -> Component {
        match self {
            Saturating::Collaborative => Component::Collaborative,
            Saturating::Competency => Component::Competency,
            Saturating::Insignia => Component::Insignia,
            Saturating::IntlCollab => Component::IntlCollab,
        }
    }

    pub fn metric(self) -> Metric {
        match self {
            Saturating::Collaborative => Metric::InternalProjects,
            Saturating::Competency => Metric::Certifications,
            Saturating::Insignia => Metric::Insignia,
            Saturating::IntlCollab => Metric::IntlProjects,
        }
    }

    /// `(lambda, mu, cap)` for this component.
    pub fn coefficients(self, params: &ModelParameters) -> (f64, f64, f64) {
        match self {
            Saturating::Collaborative => (
                params.collab_lambda,
                params.collab_mu,
                f64::from(params.cap_internal_projects),
            ),
            Saturating::Competency => (
                params.skill_lambda,
                params.skill_mu,
                f64::from(params.cap_certifications),
            ),
            Saturating::Insignia => (params.insig_lambda, params.insig_mu, f64::from(params.cap_insignia)),
            Saturating::IntlCollab => (params.intl_lambda, params.intl_mu, f64::from(params.cap_intl_projects)),
        }
    }

    pub fn evaluate(self, x: f64, params: &ModelParameters) -> Result<Money, ModelError> {
        let (lambda, mu, cap) = self.coefficients(params);
        saturating_component(x, lambda, mu, cap)
    }
}

/// Per-component salary, all in KZT.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComponentBreakdown {
    pub base: Money,
    pub performance_pub: Money,
    pub performance_cit: Money,
    pub performance_grant: Money,
    pub performance_total: Money,
    pub collaborative: Money,
    pub competency: Money,
    pub insignia: Money,
    pub intl_collab: Money,
    pub total: Money,
}

impl ComponentBreakdown {
    pub fn get(&self, component: Component) -> Money {
        match component {
            Component::Base => self.base,
            Component::Publication => self.performance_pub,
            Component::Citation => self.performance_cit,
            Component::Grant => self.performance_grant,
            Component::Performance => self.performance_total,
            Component::Collaborative => self.collaborative,
            Component::Competency => self.competency,
            Component::Insignia => self.insignia,
            Component::IntlCollab => self.intl_collab,
            Component::Total => self.total,
        }
    }

    /// Rebuilds a breakdown with a substituted performance total, keeping
    /// the six-way sum consistent.
    pub fn with_performance_total(mut self, performance_total: Money) -> Self {
        self.performance_total = performance_total;
        self.total = self.base
            + self.performance_total
            + self.collaborative
            + self.competency
            + self.insignia
            + self.intl_collab;
        self
    }
}

/// Performance sub-terms and their sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Performance {
    pub publications: Money,
    pub citations: Money,
    pub grants: Money,
    pub total: Money,
}

fn check_metric(field: &'static str, x: f64) -> Result<(), ModelError> {
    if !x.is_finite() || x < 0.0 {
        return Err(ModelError::profile(
            field,
            format!("must be finite and non-negative, got {x}"),
        ));
    }
    Ok(())
}

/// Base component for experience `years` and qualification `level`.
///
/// `level` is normally 1, 2 or 3; any real in `[1, 3]` is accepted.
pub fn base_at(years: f64, level: f64, params: &ModelParameters) -> Result<Money, ModelError> {
    check_metric("experience_years", years)?;
    if !(1.0..=3.0).contains(&level) {
        return Err(ModelError::profile(
            "qualification_level",
            format!("must lie in [1, 3], got {level}"),
        ));
    }
    let log_years = (years / params.base_t0).ln_1p();
    let qualification = 1.0 + params.base_lambda * level;
    let value = match params.base_form {
        BaseForm::WorkedExample => {
            params.base_w0 * (1.0 + params.base_alpha * log_years).powf(params.base_beta) * qualification
        }
        BaseForm::Additive => {
            params.base_w0 + params.base_additive_alpha * qualification * log_years.powf(params.base_beta)
        }
    };
    Money::new(value)
}

pub fn base_component(profile: &ResearcherProfile, params: &ModelParameters) -> Result<Money, ModelError> {
    profile.validate()?;
    base_at(profile.experience_years, f64::from(profile.qualification_level), params)
}

/// `gamma_1 * P^delta_1`.
pub fn publication_term(publications: f64, params: &ModelParameters) -> Result<Money, ModelError> {
    check_metric("publications", publications)?;
    Money::new(params.pub_gamma * publications.powf(params.pub_delta))
}

/// `gamma_2 * H^delta_2`.
pub fn citation_term(h_index: f64, params: &ModelParameters) -> Result<Money, ModelError> {
    check_metric("h_index", h_index)?;
    Money::new(params.cit_gamma * h_index.powf(params.cit_delta))
}

/// Amount `G` (KZT) that enters the grant volume factor.
pub fn grant_amount(grant_count: f64, grant_total_kzt: f64, params: &ModelParameters) -> f64 {
    let count = grant_count.min(f64::from(params.grant_count_cap));
    match params.grant_amount_semantics {
        GrantSemantics::Total => grant_total_kzt,
        GrantSemantics::PerGrantAverage if count > 0.0 => grant_total_kzt / count,
        GrantSemantics::PerGrantAverage => 0.0,
    }
}

/// `gamma_3 * phi^(G_p / max G_p) * (G / 10^6)^gif`, with `G_p` clamped to
/// the grant count cap.
pub fn grant_term(grant_count: f64, grant_total_kzt: f64, params: &ModelParameters) -> Result<Money, ModelError> {
    check_metric("grant_count", grant_count)?;
    check_metric("grant_total_kzt", grant_total_kzt)?;
    let cap = f64::from(params.grant_count_cap);
    let count = grant_count.min(cap);
    let amount = grant_amount(grant_count, grant_total_kzt, params);
    if count == 0.0 || amount == 0.0 {
        return Ok(Money::ZERO);
    }
    let count_factor = params.golden_phi.powf(count / cap);
    let volume_factor = (amount / GRANT_UNIT_KZT).powf(params.grant_impact);
    Money::new(params.grant_gamma * count_factor * volume_factor)
}

fn performance_at(metrics: &Metrics, params: &ModelParameters) -> Result<Performance, ModelError> {
    let publications = publication_term(metrics.get(Metric::Publications), params)?;
    let citations = citation_term(metrics.get(Metric::HIndex), params)?;
    let grants = grant_term(metrics.get(Metric::GrantCount), metrics.get(Metric::GrantTotal), params)?;
    Ok(Performance {
        publications,
        citations,
        grants,
        total: publications + citations + grants,
    })
}

pub fn performance_component(profile: &ResearcherProfile, params: &ModelParameters) -> Result<Performance, ModelError> {
    profile.validate()?;
    performance_at(&profile.metrics(), params)
}

/// `lambda * (1 - exp(-mu * min(x, cap)))`.
pub fn saturating_component(x: f64, lambda: f64, mu: f64, cap: f64) -> Result<Money, ModelError> {
    if !x.is_finite() || x < 0.0 {
        return Err(ModelError::Domain(format!(
            "count must be finite and non-negative, got {x}"
        )));
    }
    Money::new(lambda * -(-mu * x.min(cap)).exp_m1())
}

/// Evaluates every component on a real-valued metric vector.
pub fn evaluate(metrics: &Metrics, params: &ModelParameters) -> Result<ComponentBreakdown, ModelError> {
    metrics.validate()?;
    let base = base_at(
        metrics.get(Metric::ExperienceYears),
        metrics.get(Metric::QualificationLevel),
        params,
    )?;
    let perf = performance_at(metrics, params)?;
    let [collaborative, competency, insignia, intl_collab] =
        Saturating::ALL.map(|s| s.evaluate(metrics.get(s.metric()), params));
    let breakdown = ComponentBreakdown {
        base,
        performance_pub: perf.publications,
        performance_cit: perf.citations,
        performance_grant: perf.grants,
        performance_total: perf.total,
        collaborative: collaborative?,
        competency: competency?,
        insignia: insignia?,
        intl_collab: intl_collab?,
        total: Money::ZERO,
    };
    Ok(breakdown.with_performance_total(perf.total))
}

/// Full breakdown for one profile.
pub fn total_salary(profile: &ResearcherProfile, params: &ModelParameters) -> Result<ComponentBreakdown, ModelError> {
    profile.validate()?;
    evaluate(&profile.metrics(), params)
}

/// Per-component formulas with the profile's values substituted, one line
/// per component.
pub fn explain(profile: &ResearcherProfile, params: &ModelParameters) -> Result<Vec<String>, ModelError> {
    let b = total_salary(profile, params)?;
    let t = profile.experience_years;
    let l = profile.qualification_level;
    let mut lines = Vec::new();
    lines.push(match params.base_form {
        BaseForm::WorkedExample => format!(
            "S_b = {} * (1 + {} * ln(1 + {t}/{}))^{} * (1 + {} * {l}) = {:.2}",
            params.base_w0,
            params.base_alpha,
            params.base_t0,
            params.base_beta,
            params.base_lambda,
            b.base.amount()
        ),
        BaseForm::Additive => format!(
            "S_b = {} + {} * (1 + {} * {l}) * ln(1 + {t}/{})^{} = {:.2}",
            params.base_w0,
            params.base_additive_alpha,
            params.base_lambda,
            params.base_t0,
            params.base_beta,
            b.base.amount()
        ),
    });
    lines.push(format!(
        "S_P = {} * {}^{:.6} = {:.2}",
        params.pub_gamma,
        profile.publications,
        params.pub_delta,
        b.performance_pub.amount()
    ));
    lines.push(format!(
        "S_H = {} * {}^{:.6} = {:.2}",
        params.cit_gamma,
        profile.h_index,
        params.cit_delta,
        b.performance_cit.amount()
    ));
    let count = profile.grant_count.min(params.grant_count_cap);
    let amount = grant_amount(f64::from(profile.grant_count), profile.grant_total_kzt, params);
    lines.push(format!(
        "S_G = {} * {}^({count}/{}) * ({:.2}/1e6)^{:.6} = {:.2}",
        params.grant_gamma,
        params.golden_phi,
        params.grant_count_cap,
        amount,
        params.grant_impact,
        b.performance_grant.amount()
    ));
    lines.push(format!(
        "S_r = {:.2} + {:.2} + {:.2} = {:.2}",
        b.performance_pub.amount(),
        b.performance_cit.amount(),
        b.performance_grant.amount(),
        b.performance_total.amount()
    ));
    for (symbol, s) in ["S_c", "S_s", "S_i", "S_g"].into_iter().zip(Saturating::ALL) {
        let (lambda, mu, cap) = s.coefficients(params);
        let x = profile.metric(s.metric());
        lines.push(format!(
            "{symbol} = {lambda} * (1 - exp(-{mu} * min({x}, {cap}))) = {:.2}",
            b.get(s.component()).amount()
        ));
    }
    lines.push(format!("S = {:.2}", b.total.amount()));
    Ok(lines)
}
