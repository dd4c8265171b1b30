//! JSON file formats for parameters, profiles and anchors.
//!
//! These are the entry points for untrusted input: every parser returns a
//! [`FileError`] instead of panicking, with line and column for syntax and
//! type errors and the offending field for semantic ones.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calibration::AnchorSet;
use crate::error::ModelError;
use crate::params::{ModelParameters, ParamsFile};
use crate::profile::ResearcherProfile;

#[derive(Debug, Error)]
pub enum FileError {
    /// Malformed JSON or a value of the wrong shape.
    #[error("{file}: line {line}, column {column}: {message}")]
    Parse {
        file: &'static str,
        line: usize,
        column: usize,
        message: String,
    },

    /// Well-formed input that violates a model constraint.
    #[error("{file}: {context}: {source}")]
    Validation {
        file: &'static str,
        context: String,
        #[source]
        source: ModelError,
    },

    #[error("{file}: {message}")]
    Duplicate { file: &'static str, message: String },
}

impl FileError {
    fn parse(file: &'static str, err: serde_json::Error) -> Self {
        // serde_json appends " at line L column C"; keep only the message.
        let text = err.to_string();
        let message = match text.rfind(" at line ") {
            Some(idx) => text[..idx].to_string(),
            None => text,
        };
        FileError::Parse {
            file,
            line: err.line(),
            column: err.column(),
            message,
        }
    }

    pub fn is_parse(&self) -> bool {
        matches!(self, FileError::Parse { .. })
    }
}

/// A profile with the name it is reported under.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedProfile {
    pub name: String,
    /// Free-text origin of the numbers.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    pub profile: ResearcherProfile,
}

/// Parses and validates a parameters file. Entries that are left out keep
/// their default value and provenance.
pub fn parse_params(text: &str) -> Result<ModelParameters, FileError> {
    let file: ParamsFile = serde_json::from_str(text).map_err(|e| FileError::parse("parameters", e))?;
    let params = file.into_params();
    params.validate().map_err(|source| FileError::Validation {
        file: "parameters",
        context: "parameter set".to_string(),
        source,
    })?;
    Ok(params)
}

/// Every parameter with its provenance, pretty-printed with a trailing
/// newline.
pub fn params_to_json(params: &ModelParameters) -> String {
    let mut out = serde_json::to_string_pretty(&ParamsFile::from_params(params)).expect("parameters serialize");
    out.push('\n');
    out
}

/// Parses a JSON array of named profiles and validates each one.
pub fn parse_profiles(text: &str) -> Result<Vec<NamedProfile>, FileError> {
    let profiles: Vec<NamedProfile> = serde_json::from_str(text).map_err(|e| FileError::parse("profiles", e))?;
    let mut seen = BTreeSet::new();
    for p in &profiles {
        if !seen.insert(p.name.as_str()) {
            return Err(FileError::Duplicate {
                file: "profiles",
                message: format!("profile name `{}` appears more than once", p.name),
            });
        }
        p.profile.validate().map_err(|source| FileError::Validation {
            file: "profiles",
            context: format!("profile `{}`", p.name),
            source,
        })?;
    }
    Ok(profiles)
}

pub fn profiles_to_json(profiles: &[NamedProfile]) -> String {
    let mut out = serde_json::to_string_pretty(profiles).expect("profiles serialize");
    out.push('\n');
    out
}

/// Parses an anchors file. A blank file is an empty anchor set.
pub fn parse_anchors(text: &str) -> Result<AnchorSet, FileError> {
    if text.trim().is_empty() {
        return Ok(AnchorSet::default());
    }
    serde_json::from_str(text).map_err(|e| FileError::parse("anchors", e))
}

pub fn anchors_to_json(anchors: &AnchorSet) -> String {
    let mut out = serde_json::to_string_pretty(anchors).expect("anchors serialize");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{GrantSemantics, ParamId, Provenance};
    use proptest::prelude::*;

    #[test]
    fn params_round_trip_is_exact() {
        let p = ModelParameters::default();
        let text = params_to_json(&p);
        let back = parse_params(&text).unwrap();
        assert_eq!(back, p);
        assert_eq!(params_to_json(&back), text);
        assert!(text.contains("\"base_w0\": {\n    \"value\": 190000.0,\n    \"provenance\": \"paper_stated\""));
    }

    #[test]
    fn partial_params_fill_defaults() {
        let p = parse_params(r#"{"base_w0": {"value": 380000, "provenance": "assumed"}}"#).unwrap();
        assert_eq!(p.base_w0, 380_000.0);
        assert_eq!(p.provenance(ParamId::BaseW0), Provenance::Assumed);
        assert_eq!(p.pub_gamma, 15_000.0);
        let p = parse_params(r#"{"grant_amount_semantics": "total"}"#).unwrap();
        assert_eq!(p.grant_amount_semantics, GrantSemantics::Total);
    }

    #[test]
    fn params_parse_errors_carry_position() {
        let p = parse_params("{\n  \"base_w0\": {\"value\": 1}\n}").unwrap();
        assert_eq!(p.provenance(ParamId::BaseW0), Provenance::Assumed);
        let err = parse_params("{\n  \"base_w0\": {\"provenance\": \"assumed\"}\n}").unwrap_err();
        match err {
            FileError::Parse { line, message, .. } => {
                assert_eq!(line, 2);
                assert!(message.contains("value"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        let err = parse_params("{\"base_wO\": 3}").unwrap_err();
        assert!(err.to_string().contains("unknown field `base_wO`"));
        assert!(parse_params("not json").unwrap_err().is_parse());
        assert!(
            parse_params(r#"{"grant_count_cap": {"value": 2.5, "provenance": "assumed"}}"#)
                .unwrap_err()
                .is_parse()
        );
    }

    #[test]
    fn params_validation_errors() {
        let err = parse_params(r#"{"base_beta": {"value": 0.9, "provenance": "assumed"}}"#).unwrap_err();
        match err {
            FileError::Validation { source, .. } => assert_eq!(source.field(), Some("base_beta")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn profiles_parse_and_validate() {
        let text = r#"[
            {"name": "entry", "profile": {}},
            {"name": "senior", "source": "worked example", "profile": {"experience_years": 40, "qualification_level": 3, "publications": 100}}
        ]"#;
        let ps = parse_profiles(text).unwrap();
        assert_eq!(ps.len(), 2);
        assert_eq!(ps[0].profile, ResearcherProfile::default());
        assert_eq!(ps[1].profile.publications, 100);
        assert_eq!(parse_profiles("[]").unwrap(), vec![]);

        let bad = r#"[{"name": "x", "profile": {"qualification_level": 5}}]"#;
        match parse_profiles(bad).unwrap_err() {
            FileError::Validation { context, source, .. } => {
                assert_eq!(context, "profile `x`");
                assert_eq!(source.field(), Some("qualification_level"));
            }
            other => panic!("{other:?}"),
        }
        let typo = r#"[{"name": "x", "profile": {"publicatons": 5}}]"#;
        assert!(parse_profiles(typo).unwrap_err().is_parse());
        let dup = r#"[{"name": "x", "profile": {}}, {"name": "x", "profile": {}}]"#;
        assert!(matches!(parse_profiles(dup).unwrap_err(), FileError::Duplicate { .. }));
    }

    #[test]
    fn anchors_parse() {
        let set = AnchorSet::reference();
        let text = anchors_to_json(&set);
        assert_eq!(parse_anchors(&text).unwrap(), set);
        assert_eq!(parse_anchors("  \n").unwrap(), AnchorSet::default());
        assert_eq!(parse_anchors("{}").unwrap(), AnchorSet::default());
        assert!(parse_anchors("{\"free\": [\"nope\"]}").unwrap_err().is_parse());
    }

    proptest! {
        #[test]
        fn params_round_trip_random(
            w0 in 1.0f64..1e7,
            delta in 0.5f64..2.0,
            cap in 1u32..50,
            lambda in 0.0f64..1e6,
        ) {
            let mut p = ModelParameters::default();
            p.base_w0 = w0;
            p.pub_delta = delta;
            p.grant_count_cap = cap;
            p.intl_lambda = lambda;
            p.set_provenance(ParamId::IntlLambda, Provenance::Assumed);
            let back = parse_params(&params_to_json(&p)).unwrap();
            prop_assert_eq!(back, p);
        }

        #[test]
        fn parsers_never_panic(text in ".{0,200}") {
            let _ = parse_params(&text);
            let _ = parse_profiles(&text);
            let _ = parse_anchors(&text);
        }
    }
}
