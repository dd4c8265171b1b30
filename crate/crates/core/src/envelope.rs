//! Minimum, maximum and optimal salary, and the motivational-force gate.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::model::{total_salary, ComponentBreakdown};
use crate::money::Money;
use crate::params::ModelParameters;
use crate::profile::ResearcherProfile;

/// Printed maximum of the performance component used by the replication
/// mode. It disagrees with the sum of its own printed sub-terms
/// (2,824,150 KZT).
pub const PRINTED_MAX_PERFORMANCE: f64 = 3_128_133.0;

/// How the maximum salary is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvelopeMode {
    /// Substitutes the printed performance maximum to reproduce the
    /// published envelope.
    PaperReplication,
    /// Everything recomputed from the model.
    #[default]
    Consistent,
}

impl EnvelopeMode {
    pub fn name(self) -> &'static str {
        match self {
            EnvelopeMode::PaperReplication => "paper_replication",
            EnvelopeMode::Consistent => "consistent",
        }
    }
}

impl fmt::Display for EnvelopeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EnvelopeMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" | "paper_replication" => Ok(EnvelopeMode::PaperReplication),
            "consistent" => Ok(EnvelopeMode::Consistent),
            _ => Err(format!("unknown mode `{s}` (expected paper or consistent)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SalaryEnvelope {
    pub minimum: Money,
    pub maximum: Money,
    pub optimal: Money,
    pub min_profile: ResearcherProfile,
    pub max_profile: ResearcherProfile,
    pub mode: EnvelopeMode,
}

/// Entry-level profile: no experience, Master's degree, no metrics.
pub fn min_profile() -> ResearcherProfile {
    ResearcherProfile::default()
}

pub fn salary_min(params: &ModelParameters) -> Result<Money, ModelError> {
    params.validate()?;
    Ok(total_salary(&min_profile(), params)?.total)
}

/// Breakdown at `params.max_profile`. Every component is non-decreasing in
/// its metrics, so this corner of the admissible box is the maximum.
pub fn max_breakdown(params: &ModelParameters, mode: EnvelopeMode) -> Result<ComponentBreakdown, ModelError> {
    params.validate()?;
    let breakdown = total_salary(&params.max_profile, params)?;
    Ok(match mode {
        EnvelopeMode::Consistent => breakdown,
        EnvelopeMode::PaperReplication => breakdown.with_performance_total(Money::new(PRINTED_MAX_PERFORMANCE)?),
    })
}

pub fn salary_max(params: &ModelParameters, mode: EnvelopeMode) -> Result<Money, ModelError> {
    Ok(max_breakdown(params, mode)?.total)
}

/// Geometric mean of the envelope endpoints.
pub fn optimal_salary(minimum: Money, maximum: Money) -> Result<Money, ModelError> {
    let (a, b) = (minimum.amount(), maximum.amount());
    if a <= 0.0 {
        return Err(ModelError::Domain(format!("minimum salary must be positive, got {a}")));
    }
    if b < a {
        return Err(ModelError::Domain(format!("maximum {b} is below minimum {a}")));
    }
    Money::new((a * b).sqrt())
}

/// Classical logarithmic mean `(b - a) / (ln b - ln a)`. Not used for the
/// envelope; kept for comparison with [`optimal_salary`].
pub fn logarithmic_mean(minimum: Money, maximum: Money) -> Result<Money, ModelError> {
    let (a, b) = (minimum.amount(), maximum.amount());
    if a <= 0.0 || b < a {
        return Err(ModelError::Domain(format!("need 0 < a <= b, got a = {a}, b = {b}")));
    }
    if a == b {
        return Ok(minimum);
    }
    Money::new((b - a) / (b.ln() - a.ln()))
}

pub fn envelope(params: &ModelParameters, mode: EnvelopeMode) -> Result<SalaryEnvelope, ModelError> {
    let minimum = salary_min(params)?;
    let maximum = salary_max(params, mode)?;
    let optimal = optimal_salary(minimum, maximum)?;
    Ok(SalaryEnvelope {
        minimum,
        maximum,
        optimal,
        min_profile: min_profile(),
        max_profile: params.max_profile.clone(),
        mode,
    })
}

/// `(label, amount)` series in ascending order, for plotting.
pub fn figure_data(envelope: &SalaryEnvelope) -> Vec<(&'static str, Money)> {
    vec![
        ("min", envelope.minimum),
        ("opt", envelope.optimal),
        ("max", envelope.maximum),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MotivationBand {
    /// `mf < 0.5`.
    SubThreshold,
    /// `0.5 < mf < 1`.
    EmergenceBand,
    /// `mf` exactly 0.5 or 1.
    Boundary,
}

impl MotivationBand {
    pub fn name(self) -> &'static str {
        match self {
            MotivationBand::SubThreshold => "sub_threshold",
            MotivationBand::EmergenceBand => "emergence_band",
            MotivationBand::Boundary => "boundary",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MotivationAssessment {
    pub mf: f64,
    pub band: MotivationBand,
}

impl MotivationAssessment {
    /// `mf` to two decimals.
    pub fn display(&self) -> String {
        format!("{:.2}", self.mf)
    }
}

/// Expectancy x instrumentality x valence, classified against the open
/// band (0.5, 1).
pub fn motivational_force(
    expectancy: f64,
    instrumentality: f64,
    valence: f64,
) -> Result<MotivationAssessment, ModelError> {
    for (field, v) in [
        ("expectancy", expectancy),
        ("instrumentality", instrumentality),
        ("valence", valence),
    ] {
        if !(0.0..=1.0).contains(&v) {
            return Err(ModelError::profile(field, format!("must lie in [0, 1], got {v}")));
        }
    }
    let mf = expectancy * instrumentality * valence;
    let band = if mf > 0.5 && mf < 1.0 {
        MotivationBand::EmergenceBand
    } else if mf == 0.5 || mf == 1.0 {
        MotivationBand::Boundary
    } else {
        MotivationBand::SubThreshold
    };
    Ok(MotivationAssessment { mf, band })
}

pub fn profile_motivation(profile: &ResearcherProfile) -> Result<MotivationAssessment, ModelError> {
    motivational_force(profile.expectancy, profile.instrumentality, profile.valence)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimum_defaults_and_scaling() {
        let params = ModelParameters::default();
        assert_eq!(salary_min(&params).unwrap().whole_kzt(), 209_000);

        let mut doubled = params.clone();
        doubled.base_w0 *= 2.0;
        assert_eq!(salary_min(&doubled).unwrap().whole_kzt(), 418_000);

        let mut lam = params.clone();
        lam.base_lambda = 0.3;
        let ratio = salary_min(&lam).unwrap().amount() / salary_min(&params).unwrap().amount();
        assert!((ratio - 1.3 / 1.1).abs() < 1e-12);
    }

    #[test]
    fn maximum_in_both_modes() {
        let params = ModelParameters::default();
        let consistent = salary_max(&params, EnvelopeMode::Consistent).unwrap().amount();
        assert!((consistent - 3_309_084.0).abs() / 3_309_084.0 < 5e-3);
        let paper = salary_max(&params, EnvelopeMode::PaperReplication).unwrap().amount();
        assert!((paper - 3_613_066.0).abs() <= 1.0, "{paper}");
    }

    #[test]
    fn zeroed_max_profile_collapses_to_minimum() {
        let mut params = ModelParameters::default();
        params.cap_internal_projects = 0;
        params.cap_certifications = 0;
        params.cap_insignia = 0;
        params.cap_intl_projects = 0;
        params.max_profile = min_profile();
        assert_eq!(
            salary_max(&params, EnvelopeMode::Consistent).unwrap(),
            salary_min(&params).unwrap()
        );
    }

    #[test]
    fn optimal_is_geometric_mean() {
        let a = Money::new(209_000.0).unwrap();
        let b = Money::new(3_613_066.0).unwrap();
        let opt = optimal_salary(a, b).unwrap().amount();
        assert!((opt - (209_000.0f64 * 3_613_066.0).sqrt()).abs() < 1e-6);
        assert!((opt - 868_983.0).abs() <= 5.0);
        // The classical logarithmic mean lands far away.
        let lm = logarithmic_mean(a, b).unwrap().amount();
        assert!((lm - 1_194_000.0).abs() < 1_000.0, "{lm}");

        assert_eq!(optimal_salary(a, a).unwrap(), a);
        let k = 2.5;
        let scaled = optimal_salary(a.scale(k).unwrap(), b.scale(k).unwrap())
            .unwrap()
            .amount();
        assert!((scaled - k * opt).abs() / scaled < 1e-12);

        assert!(optimal_salary(Money::ZERO, b).is_err());
        assert!(optimal_salary(b, a).is_err());
    }

    #[test]
    fn figure_series() {
        let params = ModelParameters::default();
        let env = envelope(&params, EnvelopeMode::PaperReplication).unwrap();
        let fig = figure_data(&env);
        let labels: Vec<_> = fig.iter().map(|(l, _)| *l).collect();
        assert_eq!(labels, ["min", "opt", "max"]);
        let whole: Vec<_> = fig.iter().map(|(_, m)| m.whole_kzt()).collect();
        assert_eq!(whole[0], 209_000);
        assert!(whole[1].abs_diff(868_983) <= 5);
        assert!(whole[2].abs_diff(3_613_066) <= 1);

        let env = envelope(&params, EnvelopeMode::Consistent).unwrap();
        let fig = figure_data(&env);
        let oracle = (209_000.0f64 * env.maximum.amount()).sqrt();
        assert!((fig[1].1.amount() - oracle).abs() / oracle < 1e-12);
        assert!((fig[1].1.amount() - 831_600.0).abs() / 831_600.0 < 5e-3);

        let a = Money::new(5.0).unwrap();
        let flat = SalaryEnvelope {
            minimum: a,
            maximum: a,
            optimal: a,
            min_profile: min_profile(),
            max_profile: min_profile(),
            mode: EnvelopeMode::Consistent,
        };
        assert!(figure_data(&flat).iter().all(|(_, m)| *m == a));
    }

    #[test]
    fn motivation_examples() {
        let m = motivational_force(0.8, 0.9, 0.9).unwrap();
        assert!((m.mf - 0.648).abs() < 1e-15);
        assert_eq!(m.display(), "0.65");
        assert_eq!(m.band, MotivationBand::EmergenceBand);

        let zero = motivational_force(0.0, 0.7, 0.3).unwrap();
        assert_eq!((zero.mf, zero.band), (0.0, MotivationBand::SubThreshold));

        let one = motivational_force(1.0, 1.0, 1.0).unwrap();
        assert_eq!((one.mf, one.band), (1.0, MotivationBand::Boundary));

        let half = motivational_force(0.5, 1.0, 1.0).unwrap();
        assert_eq!(half.band, MotivationBand::Boundary);

        assert!(motivational_force(1.1, 0.5, 0.5).is_err());
        assert!(motivational_force(0.5, -0.1, 0.5).is_err());
        assert!(motivational_force(0.5, 0.5, f64::NAN).is_err());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("paper".parse::<EnvelopeMode>().unwrap(), EnvelopeMode::PaperReplication);
        assert_eq!("consistent".parse::<EnvelopeMode>().unwrap(), EnvelopeMode::Consistent);
        assert!("fast".parse::<EnvelopeMode>().is_err());
        assert_eq!(EnvelopeMode::default(), EnvelopeMode::Consistent);
    }
}
