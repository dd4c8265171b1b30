//! Report rendering. Money is always written as whole KZT.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;

use salary_model::calibration::SensitivityReport;
use salary_model::{
    group_thousands, CalibrationReport, ComponentBreakdown, Money, MotivationAssessment, SalaryEnvelope,
};

use crate::commands::CliError;
use crate::Format;

pub struct EvaluationRow {
    pub name: String,
    pub breakdown: ComponentBreakdown,
    pub motivation: MotivationAssessment,
}

fn csv_string<F>(write_rows: F) -> Result<String, CliError>
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>,
{
    let mut writer = csv::Writer::from_writer(Vec::new());
    write_rows(&mut writer).map_err(|e| CliError::Output(e.to_string()))?;
    let bytes = writer.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
}

fn json_string<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Output(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn kzt(m: Money) -> String {
    m.whole_kzt().to_string()
}

/// Left-aligned first column, right-aligned rest.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut line = |cells: Vec<&str>| {
        let mut text = String::new();
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i == 0 {
                let _ = write!(text, "{cell:<w$}");
            } else {
                let _ = write!(text, "  {cell:>w$}");
            }
        }
        out.push_str(text.trim_end());
        out.push('\n');
    };
    line(header.to_vec());
    for row in rows {
        line(row.iter().map(String::as_str).collect());
    }
    out
}

pub fn evaluation(rows: &[EvaluationRow], format: Format) -> Result<String, CliError> {
    match format {
        Format::Table => {
            let header = [
                "profile",
                "base",
                "performance",
                "collaborative",
                "competency",
                "insignia",
                "intl_collab",
                "total",
                "mf",
                "band",
            ];
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let b = &r.breakdown;
                    let mut cells = vec![r.name.clone()];
                    cells.extend(
                        [
                            b.base,
                            b.performance_total,
                            b.collaborative,
                            b.competency,
                            b.insignia,
                            b.intl_collab,
                            b.total,
                        ]
                        .map(|m| group_thousands(m.whole_kzt())),
                    );
                    cells.push(r.motivation.display());
                    cells.push(r.motivation.band.name().to_string());
                    cells
                })
                .collect();
            Ok(table(&header, &body))
        }
        Format::Csv => csv_string(|w| {
            w.write_record([
                "profile",
                "base",
                "performance_pub",
                "performance_cit",
                "performance_grant",
                "performance_total",
                "collaborative",
                "competency",
                "insignia",
                "intl_collab",
                "total",
                "mf",
                "band",
            ])?;
            for r in rows {
                let b = &r.breakdown;
                let mut record = vec![r.name.clone()];
                record.extend(
                    [
                        b.base,
                        b.performance_pub,
                        b.performance_cit,
                        b.performance_grant,
                        b.performance_total,
                        b.collaborative,
                        b.competency,
                        b.insignia,
                        b.intl_collab,
                        b.total,
                    ]
                    .map(kzt),
                );
                record.push(r.motivation.display());
                record.push(r.motivation.band.name().to_string());
                w.write_record(&record)?;
            }
            Ok(())
        }),
        Format::Json => {
            let profiles: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({
                        "name": r.name,
                        "breakdown": r.breakdown,
                        "motivation": {
                            "mf": r.motivation.mf,
                            "display": r.motivation.display(),
                            "band": r.motivation.band,
                        },
                    })
                })
                .collect();
            json_string(&json!({ "profiles": profiles }))
        }
    }
}

pub fn envelope(envelope: &SalaryEnvelope, format: Format) -> Result<String, CliError> {
    match format {
        Format::Table => {
            let rows = vec![
                vec!["minimum".to_string(), group_thousands(envelope.minimum.whole_kzt())],
                vec!["optimal".to_string(), group_thousands(envelope.optimal.whole_kzt())],
                vec!["maximum".to_string(), group_thousands(envelope.maximum.whole_kzt())],
            ];
            Ok(format!("mode: {}\n{}", envelope.mode, table(&["salary", "kzt"], &rows)))
        }
        Format::Csv => csv_string(|w| {
            w.write_record(["mode", "minimum_kzt", "optimal_kzt", "maximum_kzt"])?;
            w.write_record([
                envelope.mode.name().to_string(),
                kzt(envelope.minimum),
                kzt(envelope.optimal),
                kzt(envelope.maximum),
            ])
        }),
        Format::Json => json_string(envelope),
    }
}

/// Figure data with the exact header `label,amount_kzt`.
pub fn figure_csv(series: &[(&str, Money)]) -> Result<String, CliError> {
    csv_string(|w| {
        w.write_record(["label", "amount_kzt"])?;
        for (label, amount) in series {
            w.write_record([label.to_string(), kzt(*amount)])?;
        }
        Ok(())
    })
}

pub fn calibration(report: &CalibrationReport, format: Format) -> Result<String, CliError> {
    match format {
        Format::Table => {
            let mut out = String::new();
            let solved: Vec<Vec<String>> = report
                .solved
                .iter()
                .map(|s| {
                    vec![
                        s.param.name().to_string(),
                        format!("{:.9}", s.value),
                        s.round.to_string(),
                        s.anchors.join(" "),
                    ]
                })
                .collect();
            out.push_str(&table(&["parameter", "value", "round", "anchors"], &solved));
            out.push('\n');
            let residuals: Vec<Vec<String>> = report
                .residuals
                .iter()
                .map(|r| {
                    vec![
                        r.label.clone(),
                        r.component.name().to_string(),
                        group_thousands((r.target_kzt + 0.5).floor() as u64),
                        group_thousands((r.model_kzt + 0.5).floor() as u64),
                        format!("{:+.3e}", r.relative_residual),
                        format!("{:.1e}", r.tolerance),
                        if r.flagged { "FLAGGED" } else { "ok" }.to_string(),
                    ]
                })
                .collect();
            out.push_str(&table(
                &[
                    "anchor",
                    "component",
                    "target",
                    "model",
                    "rel_residual",
                    "tolerance",
                    "status",
                ],
                &residuals,
            ));
            Ok(out)
        }
        Format::Csv => csv_string(|w| {
            w.write_record([
                "anchor",
                "component",
                "target_kzt",
                "model_kzt",
                "relative_residual",
                "tolerance",
                "flagged",
            ])?;
            for r in &report.residuals {
                w.write_record([
                    r.label.clone(),
                    r.component.name().to_string(),
                    format!("{}", r.target_kzt),
                    format!("{:.0}", (r.model_kzt + 0.5).floor()),
                    format!("{:.9e}", r.relative_residual),
                    format!("{}", r.tolerance),
                    r.flagged.to_string(),
                ])?;
            }
            Ok(())
        }),
        Format::Json => json_string(&json!({
            "solved": report.solved,
            "residuals": report.residuals,
        })),
    }
}

pub fn sensitivity(rows: &[SensitivityReport], format: Format) -> Result<String, CliError> {
    match format {
        Format::Table => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.metric.name().to_string(),
                        format!("{:.4}", r.gradient),
                        format!("{:.6}", r.elasticity),
                    ]
                })
                .collect();
            Ok(table(&["metric", "gradient_kzt", "elasticity"], &body))
        }
        Format::Csv => csv_string(|w| {
            w.write_record(["metric", "gradient_kzt", "elasticity"])?;
            for r in rows {
                w.write_record([
                    r.metric.name().to_string(),
                    format!("{:.4}", r.gradient),
                    format!("{:.6}", r.elasticity),
                ])?;
            }
            Ok(())
        }),
        Format::Json => {
            let out: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({
                        "metric": r.metric,
                        "gradient_kzt": r.gradient,
                        "elasticity": r.elasticity,
                        "scheme": r.scheme,
                        "boundary": r.boundary,
                        "unit_step_delta": r.unit_step_delta,
                    })
                })
                .collect();
            json_string(&out)
        }
    }
}
