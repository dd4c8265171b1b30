use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use salary_model::calibration::CalibrationError;
use salary_model::io::{self, FileError, NamedProfile};
use salary_model::{envelope as env, model, AnchorSet, EnvelopeMode, ModelParameters, Provenance};

use crate::render;
use crate::{Common, ModeArg};

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input.
    Parse(String),
    /// Input that violates a model constraint.
    Validation(String),
    /// Calibration could not determine the free parameters.
    Calibration(String),
    /// Writing a report or file failed.
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Calibration(_) => 4,
            CliError::Output(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) | CliError::Validation(m) | CliError::Calibration(m) | CliError::Output(m) => {
                f.write_str(m)
            }
        }
    }
}

impl From<FileError> for CliError {
    fn from(err: FileError) -> Self {
        if err.is_parse() {
            CliError::Parse(err.to_string())
        } else {
            CliError::Validation(err.to_string())
        }
    }
}

impl From<salary_model::ModelError> for CliError {
    fn from(err: salary_model::ModelError) -> Self {
        CliError::Validation(err.to_string())
    }
}

impl From<CalibrationError> for CliError {
    fn from(err: CalibrationError) -> Self {
        match err {
            CalibrationError::Model(e) => CliError::Validation(e.to_string()),
            other => CliError::Calibration(other.to_string()),
        }
    }
}

fn read(path: &Path, what: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Parse(format!("cannot read {what} file {}: {e}", path.display())))
}

fn load_params(common: &Common) -> Result<ModelParameters, CliError> {
    match &common.params {
        Some(path) => Ok(io::parse_params(&read(path, "parameters")?)?),
        None => Ok(ModelParameters::default()),
    }
}

fn load_profiles(common: &Common) -> Result<Vec<NamedProfile>, CliError> {
    let path = common
        .profiles
        .as_ref()
        .ok_or_else(|| CliError::Parse("--profiles is required for this command".to_string()))?;
    Ok(io::parse_profiles(&read(path, "profiles")?)?)
}

fn emit(common: &Common, report: &str) -> Result<(), CliError> {
    match &common.out {
        Some(path) => {
            fs::write(path, report).map_err(|e| CliError::Output(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            std::io::stdout().write_all(report.as_bytes())?;
            Ok(())
        }
    }
}

fn mode(common: &Common) -> EnvelopeMode {
    match common.mode {
        ModeArg::Paper => EnvelopeMode::PaperReplication,
        ModeArg::Consistent => EnvelopeMode::Consistent,
    }
}

pub fn evaluate(common: &Common) -> Result<(), CliError> {
    let params = load_params(common)?;
    let profiles = load_profiles(common)?;
    let mut rows = Vec::with_capacity(profiles.len());
    for named in &profiles {
        let breakdown = model::total_salary(&named.profile, &params)
            .map_err(|e| CliError::Validation(format!("profile `{}`: {e}", named.name)))?;
        let motivation = env::profile_motivation(&named.profile)
            .map_err(|e| CliError::Validation(format!("profile `{}`: {e}", named.name)))?;
        if common.explain {
            eprintln!("# {}", named.name);
            for line in model::explain(&named.profile, &params)? {
                eprintln!("  {line}");
            }
        }
        rows.push(render::EvaluationRow {
            name: named.name.clone(),
            breakdown,
            motivation,
        });
    }
    emit(common, &render::evaluation(&rows, common.format)?)
}

pub fn envelope(common: &Common, figure: &Path) -> Result<(), CliError> {
    let params = load_params(common)?;
    let mode = mode(common);
    let envelope = env::envelope(&params, mode)?;
    if common.explain {
        eprintln!("# maximum profile ({mode})");
        for line in model::explain(&params.max_profile, &params)? {
            eprintln!("  {line}");
        }
        if mode == EnvelopeMode::PaperReplication {
            eprintln!("  S_r replaced by printed maximum {}", env::PRINTED_MAX_PERFORMANCE);
        }
        eprintln!("  S_opt = sqrt(S_min * S_max)");
    }
    let figure_csv = render::figure_csv(&env::figure_data(&envelope))?;
    fs::write(figure, figure_csv).map_err(|e| CliError::Output(format!("cannot write {}: {e}", figure.display())))?;
    emit(common, &render::envelope(&envelope, common.format)?)
}

pub fn calibrate(common: &Common, anchors: Option<&Path>, fitted: &Path) -> Result<(), CliError> {
    let seed = load_params(common)?;
    let anchors = match anchors {
        Some(path) => io::parse_anchors(&read(path, "anchors")?)?,
        None => AnchorSet::reference(),
    };
    let report = salary_model::calibrate_from_anchors(&anchors, &seed)?;
    let mut params = report.params.clone();
    for solved in &report.solved {
        params.set_provenance(solved.param, Provenance::ExampleImplied);
    }
    fs::write(fitted, io::params_to_json(&params))
        .map_err(|e| CliError::Output(format!("cannot write {}: {e}", fitted.display())))?;
    let flagged = report.flagged().count();
    if flagged > 0 {
        eprintln!("warning: {flagged} anchor(s) outside tolerance");
    }
    emit(common, &render::calibration(&report, common.format)?)
}

pub fn sensitivity(common: &Common, profile: &str) -> Result<(), CliError> {
    let params = load_params(common)?;
    let profiles = load_profiles(common)?;
    let named = profiles
        .iter()
        .find(|p| p.name == profile)
        .ok_or_else(|| CliError::Validation(format!("no profile named `{profile}`")))?;
    let table = salary_model::sensitivity_table(&named.profile, &params)?;
    if common.explain {
        for line in model::explain(&named.profile, &params)? {
            eprintln!("  {line}");
        }
    }
    emit(common, &render::sensitivity(&table, common.format)?)
}
