//! Researcher metrics.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

/// One researcher's metrics.
///
/// Counts are whole numbers. Fields left out of a profile file take the
/// entry-level default (no experience, Master's degree, zero metrics, zero
/// expectancy inputs).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResearcherProfile {
    /// Years of research experience.
    pub experience_years: f64,
    /// 1 = Master's, 2 = PhD, 3 = Doctor of Science.
    pub qualification_level: u8,
    pub publications: u32,
    pub h_index: u32,
    /// Grant projects held; clamped to the parameter cap during evaluation.
    pub grant_count: u32,
    /// Total attracted grant funding in KZT.
    pub grant_total_kzt: f64,
    pub internal_projects: u32,
    pub certifications: u32,
    pub insignia_count: u32,
    pub intl_projects: u32,
    pub expectancy: f64,
    pub instrumentality: f64,
    pub valence: f64,
}

impl Default for ResearcherProfile {
    /// The entry-level profile: Master's degree, no experience, no metrics.
    fn default() -> Self {
        ResearcherProfile {
            experience_years: 0.0,
            qualification_level: 1,
            publications: 0,
            h_index: 0,
            grant_count: 0,
            grant_total_kzt: 0.0,
            internal_projects: 0,
            certifications: 0,
            insignia_count: 0,
            intl_projects: 0,
            expectancy: 0.0,
            instrumentality: 0.0,
            valence: 0.0,
        }
    }
}

impl ResearcherProfile {
    pub fn validate(&self) -> Result<(), ModelError> {
        if !self.experience_years.is_finite() || self.experience_years < 0.0 {
            return Err(ModelError::profile(
                "experience_years",
                format!("must be a finite non-negative number, got {}", self.experience_years),
            ));
        }
        if !(1..=3).contains(&self.qualification_level) {
            return Err(ModelError::profile(
                "qualification_level",
                format!("must be 1, 2 or 3, got {}", self.qualification_level),
            ));
        }
        if !self.grant_total_kzt.is_finite() || self.grant_total_kzt < 0.0 {
            return Err(ModelError::profile(
                "grant_total_kzt",
                format!("must be a finite non-negative amount, got {}", self.grant_total_kzt),
            ));
        }
        for (field, v) in [
            ("expectancy", self.expectancy),
            ("instrumentality", self.instrumentality),
            ("valence", self.valence),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(ModelError::profile(field, format!("must lie in [0, 1], got {v}")));
            }
        }
        Ok(())
    }

    pub fn metrics(&self) -> Metrics {
        let mut m = Metrics::default();
        for metric in Metric::ALL {
            m.set(metric, self.metric(metric));
        }
        m
    }

    pub fn metric(&self, metric: Metric) -> f64 {
        match metric {
            Metric::ExperienceYears => self.experience_years,
            Metric::QualificationLevel => f64::from(self.qualification_level),
            Metric::Publications => f64::from(self.publications),
            Metric::HIndex => f64::from(self.h_index),
            Metric::GrantCount => f64::from(self.grant_count),
            Metric::GrantTotal => self.grant_total_kzt,
            Metric::InternalProjects => f64::from(self.internal_projects),
            Metric::Certifications => f64::from(self.certifications),
            Metric::Insignia => f64::from(self.insignia_count),
            Metric::IntlProjects => f64::from(self.intl_projects),
        }
    }
}

/// The ten salary-relevant metrics of a profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    ExperienceYears,
    QualificationLevel,
    Publications,
    HIndex,
    GrantCount,
    #[serde(rename = "grant_total_kzt")]
    GrantTotal,
    InternalProjects,
    Certifications,
    #[serde(rename = "insignia_count")]
    Insignia,
    IntlProjects,
}

impl Metric {
    pub const ALL: [Metric; 10] = [
        Metric::ExperienceYears,
        Metric::QualificationLevel,
        Metric::Publications,
        Metric::HIndex,
        Metric::GrantCount,
        Metric::GrantTotal,
        Metric::InternalProjects,
        Metric::Certifications,
        Metric::Insignia,
        Metric::IntlProjects,
    ];

    /// Profile field name.
    pub fn name(self) -> &'static str {
        match self {
            Metric::ExperienceYears => "experience_years",
            Metric::QualificationLevel => "qualification_level",
            Metric::Publications => "publications",
            Metric::HIndex => "h_index",
            Metric::GrantCount => "grant_count",
            Metric::GrantTotal => "grant_total_kzt",
            Metric::InternalProjects => "internal_projects",
            Metric::Certifications => "certifications",
            Metric::Insignia => "insignia_count",
            Metric::IntlProjects => "intl_projects",
        }
    }

    /// Whether the metric is a whole-number count in profiles.
    pub fn is_count(self) -> bool {
        !matches!(self, Metric::ExperienceYears | Metric::GrantTotal)
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown metric `{s}`"))
    }
}

/// Real-valued metric vector.
///
/// Every formula in the model is defined for real arguments, so the
/// evaluator works on this continuous extension of a profile. Sensitivity
/// analysis perturbs it directly.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Metrics([f64; 10]);

impl Metrics {
    pub fn get(&self, metric: Metric) -> f64 {
        self.0[metric.index()]
    }

    pub fn set(&mut self, metric: Metric, value: f64) {
        self.0[metric.index()] = value;
    }

    pub fn with(mut self, metric: Metric, value: f64) -> Self {
        self.set(metric, value);
        self
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        for metric in Metric::ALL {
            let v = self.get(metric);
            if !v.is_finite() || v < 0.0 {
                return Err(ModelError::profile(
                    metric.name(),
                    format!("must be finite and non-negative, got {v}"),
                ));
            }
        }
        let level = self.get(Metric::QualificationLevel);
        if !(1.0..=3.0).contains(&level) {
            return Err(ModelError::profile(
                "qualification_level",
                format!("must lie in [1, 3], got {level}"),
            ));
        }
        Ok(())
    }
}
