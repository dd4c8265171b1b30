//! Model coefficients, exponents and caps, each tagged with where its
//! value came from.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::calibration::solve_exponent;
use crate::error::ModelError;
use crate::profile::ResearcherProfile;

/// Where a parameter value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Printed as a model constant.
    PaperStated,
    /// Recovered from a worked numerical example.
    ExampleImplied,
    /// Chosen here; no source value exists.
    #[default]
    Assumed,
}

/// Which functional form the base component uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseForm {
    /// `W0 * (1 + alpha*ln(1 + T/T0))^beta * (1 + lambda*L)`.
    #[default]
    WorkedExample,
    /// `W0 + alpha' * (1 + lambda*L) * ln(1 + T/T0)^beta`, with the money
    /// weight `alpha'` taken from `base_additive_alpha`.
    Additive,
}

/// How the grant amount `G` is derived from a profile's grant total.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrantSemantics {
    /// `G = grant_total / grant_count` (count after clamping).
    #[default]
    PerGrantAverage,
    /// `G = grant_total`.
    Total,
}

/// Conversion between a parameter's storage type and `f64`.
pub(crate) trait ParamValue: Copy {
    fn to_f64(self) -> f64;
    fn from_f64(v: f64) -> Option<Self>;
}

impl ParamValue for f64 {
    fn to_f64(self) -> f64 {
        self
    }
    fn from_f64(v: f64) -> Option<Self> {
        v.is_finite().then_some(v)
    }
}

impl ParamValue for u32 {
    fn to_f64(self) -> f64 {
        f64::from(self)
    }
    fn from_f64(v: f64) -> Option<Self> {
        (v.is_finite() && v >= 0.0 && v.fract() == 0.0 && v <= f64::from(u32::MAX)).then_some(v as u32)
    }
}

/// A numeric entry together with its provenance, as stored in parameter files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tagged<T> {
    pub value: T,
    /// Entries without a tag are treated as assumed.
    #[serde(default)]
    pub provenance: Provenance,
}

macro_rules! parameter_table {
    ($( $variant:ident => $field:ident : $ty:ty ),* $(,)?) => {
        /// Identifies one numeric model parameter. The name is the field name.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(rename_all = "snake_case")]
        pub enum ParamId {
            $( $variant, )*
        }

        impl ParamId {
            pub const ALL: &'static [ParamId] = &[ $( ParamId::$variant, )* ];

            pub fn name(self) -> &'static str {
                match self {
                    $( ParamId::$variant => stringify!($field), )*
                }
            }
        }

        /// Every coefficient, exponent and cap of the salary model.
        #[derive(Debug, Clone, PartialEq)]
        pub struct ModelParameters {
            $( pub $field: $ty, )*
            /// Profile at which the maximum salary is attained.
            pub max_profile: ResearcherProfile,
            pub base_form: BaseForm,
            pub grant_amount_semantics: GrantSemantics,
            provenance: BTreeMap<ParamId, Provenance>,
        }

        impl ModelParameters {
            pub fn get(&self, id: ParamId) -> f64 {
                match id {
                    $( ParamId::$variant => ParamValue::to_f64(self.$field), )*
                }
            }

            /// Sets a parameter from an `f64`. Count-valued parameters
            /// reject non-integral values.
            pub fn set(&mut self, id: ParamId, value: f64) -> Result<(), ModelError> {
                match id {
                    $( ParamId::$variant => {
                        self.$field = <$ty as ParamValue>::from_f64(value).ok_or_else(|| {
                            ModelError::parameter(id.name(), format!("unrepresentable value {value}"))
                        })?;
                    } )*
                }
                Ok(())
            }
        }

        /// On-disk shape of a parameters file. Absent entries fall back to
        /// the defaults.
        #[derive(Debug, Default, Serialize, Deserialize)]
        #[serde(deny_unknown_fields)]
        pub(crate) struct ParamsFile {
            #[serde(default, skip_serializing_if = "Option::is_none")]
            pub base_form: Option<BaseForm>,
            #[serde(default, skip_serializing_if = "Option::is_none")]
            pub grant_amount_semantics: Option<GrantSemantics>,
            $(
                #[serde(default, skip_serializing_if = "Option::is_none")]
                pub $field: Option<Tagged<$ty>>,
            )*
            #[serde(default, skip_serializing_if = "Option::is_none")]
            pub max_profile: Option<ResearcherProfile>,
        }

        impl ParamsFile {
            pub(crate) fn from_params(p: &ModelParameters) -> Self {
                ParamsFile {
                    base_form: Some(p.base_form),
                    grant_amount_semantics: Some(p.grant_amount_semantics),
                    $( $field: Some(Tagged { value: p.$field, provenance: p.provenance(ParamId::$variant) }), )*
                    max_profile: Some(p.max_profile.clone()),
                }
            }

            pub(crate) fn into_params(self) -> ModelParameters {
                let mut p = ModelParameters::default();
                if let Some(v) = self.base_form {
                    p.base_form = v;
                }
                if let Some(v) = self.grant_amount_semantics {
                    p.grant_amount_semantics = v;
                }
                $(
                    if let Some(t) = self.$field {
                        p.$field = t.value;
                        p.provenance.insert(ParamId::$variant, t.provenance);
                    }
                )*
                if let Some(v) = self.max_profile {
                    p.max_profile = v;
                }
                p
            }
        }
    };
}

parameter_table! {
    BaseW0 => base_w0: f64,
    BaseAlpha => base_alpha: f64,
    BaseBeta => base_beta: f64,
    BaseT0 => base_t0: f64,
    BaseLambda => base_lambda: f64,
    BaseAdditiveAlpha => base_additive_alpha: f64,
    PubGamma => pub_gamma: f64,
    PubDelta => pub_delta: f64,
    CitGamma => cit_gamma: f64,
    CitDelta => cit_delta: f64,
    GrantGamma => grant_gamma: f64,
    GoldenPhi => golden_phi: f64,
    GrantImpact => grant_impact: f64,
    GrantCountCap => grant_count_cap: u32,
    CollabLambda => collab_lambda: f64,
    CollabMu => collab_mu: f64,
    SkillLambda => skill_lambda: f64,
    SkillMu => skill_mu: f64,
    InsigLambda => insig_lambda: f64,
    InsigMu => insig_mu: f64,
    IntlLambda => intl_lambda: f64,
    IntlMu => intl_mu: f64,
    CapInternalProjects => cap_internal_projects: u32,
    CapCertifications => cap_certifications: u32,
    CapInsignia => cap_insignia: u32,
    CapIntlProjects => cap_intl_projects: u32,
}

impl fmt::Display for ParamId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ParamId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ParamId::ALL
            .iter()
            .copied()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown parameter `{s}`"))
    }
}

/// Publication-count factor printed in the high-achiever example (`P = 100`).
pub const PUBLICATION_FACTOR_ANCHOR: f64 = 125.89;
/// Citation factor printed for `H = 50`.
pub const CITATION_FACTOR_ANCHOR: f64 = 63.10;
/// Grant-volume factor printed for three grants totalling 50 million KZT.
pub const GRANT_VOLUME_FACTOR_ANCHOR: f64 = 9.42;

struct ImpliedExponents {
    cit_delta: f64,
    grant_impact: f64,
}

/// Exponents that are only pinned down by worked numbers; solved once.
fn implied_exponents() -> &'static ImpliedExponents {
    static CELL: OnceLock<ImpliedExponents> = OnceLock::new();
    CELL.get_or_init(|| ImpliedExponents {
        cit_delta: solve_exponent(50.0, CITATION_FACTOR_ANCHOR)
            .expect("citation anchor is bracketable")
            .solution,
        grant_impact: solve_exponent(50.0 / 3.0, GRANT_VOLUME_FACTOR_ANCHOR)
            .expect("grant anchor is bracketable")
            .solution,
    })
}

impl Default for ModelParameters {
    fn default() -> Self {
        use Provenance::*;
        let implied = implied_exponents();
        let mut p = ModelParameters {
            base_w0: 190_000.0,
            base_alpha: 0.05,
            base_beta: 1.2,
            base_t0: 5.0,
            base_lambda: 0.1,
            base_additive_alpha: 0.0,
            pub_gamma: 15_000.0,
            pub_delta: 1.05,
            cit_gamma: 10_000.0,
            cit_delta: implied.cit_delta,
            grant_gamma: 20_000.0,
            golden_phi: 1.618,
            grant_impact: implied.grant_impact,
            grant_count_cap: 3,
            collab_lambda: 50_000.0,
            collab_mu: 0.1,
            skill_lambda: 40_000.0,
            skill_mu: 0.15,
            insig_lambda: 70_000.0,
            insig_mu: 0.1,
            intl_lambda: 100_000.0,
            intl_mu: 0.2,
            cap_internal_projects: 20,
            cap_certifications: 10,
            cap_insignia: 10,
            cap_intl_projects: 10,
            max_profile: ResearcherProfile::default(),
            base_form: BaseForm::WorkedExample,
            grant_amount_semantics: GrantSemantics::PerGrantAverage,
            provenance: BTreeMap::new(),
        };
        for &id in ParamId::ALL {
            let tag = match id {
                ParamId::BaseT0 | ParamId::PubDelta | ParamId::CitDelta | ParamId::GrantImpact => ExampleImplied,
                ParamId::BaseAdditiveAlpha => Assumed,
                _ => PaperStated,
            };
            p.provenance.insert(id, tag);
        }
        p.max_profile = p.default_max_profile();
        p
    }
}

impl ModelParameters {
    pub fn provenance(&self, id: ParamId) -> Provenance {
        // Every constructor fills all ids.
        self.provenance.get(&id).copied().unwrap_or(Provenance::Assumed)
    }

    pub fn set_provenance(&mut self, id: ParamId, provenance: Provenance) {
        self.provenance.insert(id, provenance);
    }

    /// The highest-achievement profile: 40 years, Doctor of Science,
    /// 100 publications, H-index 50, capped grant count sharing 50 million
    /// KZT, and every saturating metric at its cap.
    pub fn default_max_profile(&self) -> ResearcherProfile {
        ResearcherProfile {
            experience_years: 40.0,
            qualification_level: 3,
            publications: 100,
            h_index: 50,
            grant_count: self.grant_count_cap,
            grant_total_kzt: 50_000_000.0,
            internal_projects: self.cap_internal_projects,
            certifications: self.cap_certifications,
            insignia_count: self.cap_insignia,
            intl_projects: self.cap_intl_projects,
            ..ResearcherProfile::default()
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        for &id in ParamId::ALL {
            let v = self.get(id);
            if !v.is_finite() {
                return Err(ModelError::parameter(id.name(), format!("must be finite, got {v}")));
            }
        }
        let positive = [
            ParamId::BaseW0,
            ParamId::BaseT0,
            ParamId::PubDelta,
            ParamId::CitDelta,
            ParamId::GoldenPhi,
            ParamId::GrantImpact,
            ParamId::CollabMu,
            ParamId::SkillMu,
            ParamId::InsigMu,
            ParamId::IntlMu,
        ];
        for id in positive {
            if self.get(id) <= 0.0 {
                return Err(ModelError::parameter(id.name(), "must be strictly positive"));
            }
        }
        // Money weights may be zero, which switches a term off.
        let non_negative = [
            ParamId::BaseAlpha,
            ParamId::BaseLambda,
            ParamId::BaseAdditiveAlpha,
            ParamId::PubGamma,
            ParamId::CitGamma,
            ParamId::GrantGamma,
            ParamId::CollabLambda,
            ParamId::SkillLambda,
            ParamId::InsigLambda,
            ParamId::IntlLambda,
        ];
        for id in non_negative {
            if self.get(id) < 0.0 {
                return Err(ModelError::parameter(id.name(), "must be non-negative"));
            }
        }
        if self.base_beta <= 1.0 {
            return Err(ModelError::parameter("base_beta", "must be greater than 1"));
        }
        if self.grant_count_cap < 1 {
            return Err(ModelError::parameter("grant_count_cap", "must be at least 1"));
        }
        if self.base_form == BaseForm::Additive && self.base_additive_alpha <= 0.0 {
            return Err(ModelError::parameter(
                "base_additive_alpha",
                "additive base form needs a positive money weight",
            ));
        }
        self.max_profile.validate().map_err(|e| match e {
            ModelError::InvalidProfile { field, reason } => {
                ModelError::parameter("max_profile", format!("{field}: {reason}"))
            }
            other => other,
        })
    }

    /// Money-valued coefficients: the base wage, the additive experience
    /// weight and every gamma/lambda multiplier.
    pub const MONEY_PARAMS: [ParamId; 9] = [
        ParamId::BaseW0,
        ParamId::BaseAdditiveAlpha,
        ParamId::PubGamma,
        ParamId::CitGamma,
        ParamId::GrantGamma,
        ParamId::CollabLambda,
        ParamId::SkillLambda,
        ParamId::InsigLambda,
        ParamId::IntlLambda,
    ];

    /// Copy with every money-valued coefficient multiplied by `k`.
    pub fn scaled_money(&self, k: f64) -> ModelParameters {
        let mut p = self.clone();
        for id in Self::MONEY_PARAMS {
            p.set(id, self.get(id) * k)
                .expect("scaled money parameter stays finite");
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate_and_are_fully_tagged() {
        let p = ModelParameters::default();
        p.validate().unwrap();
        for &id in ParamId::ALL {
            assert!(p.provenance.contains_key(&id), "{id} untagged");
        }
        assert_eq!(p.golden_phi, 1.618);
        assert_eq!(p.provenance(ParamId::PubDelta), Provenance::ExampleImplied);
        assert_eq!(p.provenance(ParamId::GrantImpact), Provenance::ExampleImplied);
        assert_eq!(p.provenance(ParamId::BaseW0), Provenance::PaperStated);
    }

    #[test]
    fn implied_exponents_match_log_ratios() {
        let p = ModelParameters::default();
        assert!((p.cit_delta - 63.10f64.ln() / 50f64.ln()).abs() < 1e-9);
        assert!((p.grant_impact - 9.42f64.ln() / (50.0f64 / 3.0).ln()).abs() < 1e-9);
        assert!((p.cit_delta - 1.0595).abs() < 1e-3);
        assert!((p.grant_impact - 0.797).abs() < 1e-3);
    }

    #[test]
    fn max_profile_tracks_caps() {
        let p = ModelParameters::default();
        let m = &p.max_profile;
        assert_eq!(m.experience_years, 40.0);
        assert_eq!(m.qualification_level, 3);
        assert_eq!((m.publications, m.h_index, m.grant_count), (100, 50, 3));
        assert_eq!(m.grant_total_kzt, 50_000_000.0);
        assert_eq!(m.internal_projects, 20);
        assert_eq!((m.certifications, m.insignia_count, m.intl_projects), (10, 10, 10));
    }

    #[test]
    fn get_set_round_trip_and_count_guard() {
        let mut p = ModelParameters::default();
        for &id in ParamId::ALL {
            let v = p.get(id);
            p.set(id, v).unwrap();
            assert_eq!(p.get(id), v);
        }
        assert!(p.set(ParamId::GrantCountCap, 2.5).is_err());
        assert!(p.set(ParamId::CapInsignia, -1.0).is_err());
        assert!(p.set(ParamId::BaseW0, f64::NAN).is_err());
    }

    #[test]
    fn validation_errors_name_the_field() {
        let mut p = ModelParameters::default();
        p.base_beta = 1.0;
        assert_eq!(p.validate().unwrap_err().field(), Some("base_beta"));

        let mut p = ModelParameters::default();
        p.grant_count_cap = 0;
        assert_eq!(p.validate().unwrap_err().field(), Some("grant_count_cap"));

        let mut p = ModelParameters::default();
        p.pub_gamma = -1.0;
        assert_eq!(p.validate().unwrap_err().field(), Some("pub_gamma"));

        let mut p = ModelParameters::default();
        p.base_form = BaseForm::Additive;
        assert_eq!(p.validate().unwrap_err().field(), Some("base_additive_alpha"));
        p.base_additive_alpha = 25_000.0;
        p.validate().unwrap();

        let mut p = ModelParameters::default();
        p.max_profile.qualification_level = 9;
        assert_eq!(p.validate().unwrap_err().field(), Some("max_profile"));
    }

    #[test]
    fn param_names_parse() {
        for &id in ParamId::ALL {
            assert_eq!(id.name().parse::<ParamId>().unwrap(), id);
        }
        assert_eq!("grant_impact".parse::<ParamId>().unwrap(), ParamId::GrantImpact);
    }

    #[test]
    fn scaling_touches_only_money() {
        let p = ModelParameters::default();
        let q = p.scaled_money(3.0);
        assert_eq!(q.base_w0, 3.0 * p.base_w0);
        assert_eq!(q.intl_lambda, 3.0 * p.intl_lambda);
        assert_eq!(q.base_lambda, p.base_lambda);
        assert_eq!(q.pub_delta, p.pub_delta);
        assert_eq!(q.intl_mu, p.intl_mu);
    }
}
