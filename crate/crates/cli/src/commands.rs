use serde_json::{json, Value};
use stci_core::{
    build_system_with_pins, enumerate_decompositions, full_verify, select_decomposition, CurveSpec,
    EquationSystem, Verdict,
};

use crate::config::{Format, RunConfig};
use crate::error::CliError;
use crate::family::FamilySpec;
use crate::output;

/// Rendered output of one command and the exit code it asks for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rendered {
    pub text: String,
    pub code: i32,
    /// Machine-readable form, used to merge batch results into one document.
    pub json: Option<Value>,
}

impl Rendered {
    fn ok(text: String) -> Self {
        Rendered {
            text,
            code: 0,
            json: None,
        }
    }

    fn json(value: Value) -> Self {
        Rendered {
            text: pretty(&value),
            code: 0,
            json: Some(value),
        }
    }
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json values serialize");
    s.push('\n');
    s
}

fn unsupported(format: Format, command: &str) -> CliError {
    CliError::Input(format!("format {format:?} is not available for {command}").to_lowercase())
}

pub fn cmd_decompose(curve: &CurveSpec, cfg: &RunConfig) -> Result<Rendered, CliError> {
    let mut levels = Vec::new();
    for level in curve.levels() {
        let pairs = enumerate_decompositions(curve, level)?;
        let selected = select_decomposition(curve, level, cfg.selection_policy()).ok();
        levels.push((level, pairs, selected));
    }
    match cfg.format {
        Format::Text => {
            let listing: Vec<_> = levels
                .iter()
                .map(|(l, pairs, sel)| (*l, pairs.clone(), sel.map(|s| s.pair)))
                .collect();
            Ok(Rendered::ok(output::decomposition_text(curve, &listing)))
        }
        Format::Json => {
            let levels: Vec<Value> = levels
                .iter()
                .map(|(level, pairs, sel)| {
                    let pairs: Vec<Value> = pairs
                        .iter()
                        .map(|p| {
                            let mut v = output::pair_json(p);
                            v["selected"] = Value::Bool(sel.map(|s| s.pair) == Some(*p));
                            v
                        })
                        .collect();
                    json!({
                        "level": level,
                        "pairs": pairs,
                        "admitted_by": sel.map(|s| s.admitted_by.to_string()),
                    })
                })
                .collect();
            Ok(Rendered::json(json!({
                "curve": output::curve_json(curve),
                "levels": levels,
            })))
        }
        other => Err(unsupported(other, "decompose")),
    }
}

pub fn build(curve: &CurveSpec, cfg: &RunConfig) -> Result<EquationSystem, CliError> {
    Ok(build_system_with_pins(
        curve,
        cfg.selection_policy(),
        &cfg.pins,
    )?)
}

fn render_system(system: &EquationSystem, format: Format) -> Rendered {
    match format {
        Format::Text => Rendered::ok(output::system_text(system)),
        Format::Json => Rendered::json(output::system_json(system)),
        Format::Latex => Rendered::ok(output::system_latex(system)),
        Format::M2 => Rendered::ok(output::system_m2(system)),
        Format::Singular => Rendered::ok(output::system_singular(system)),
    }
}

pub fn cmd_build(curve: &CurveSpec, cfg: &RunConfig) -> Result<Rendered, CliError> {
    match cfg.format {
        Format::Text | Format::Json | Format::Latex => {
            Ok(render_system(&build(curve, cfg)?, cfg.format))
        }
        other => Err(CliError::Input(format!(
            "use `emit` for {} scripts",
            format!("{other:?}").to_lowercase()
        ))),
    }
}

pub fn cmd_emit(curve: &CurveSpec, cfg: &RunConfig) -> Result<Rendered, CliError> {
    Ok(render_system(&build(curve, cfg)?, cfg.format))
}

pub fn cmd_verify(curve: &CurveSpec, cfg: &RunConfig) -> Result<Rendered, CliError> {
    let system = build(curve, cfg)?;
    let report = full_verify(&system, &cfg.field);
    let tree = report.to_tree();
    let code = if report.overall == Verdict::Fail {
        5
    } else {
        0
    };
    let mut rendered = match cfg.format {
        Format::Text => {
            let mut text = output::system_text(&system);
            text.push('\n');
            text.push_str(&tree.render_text());
            Rendered::ok(text)
        }
        Format::Json => {
            let mut v = output::system_json(&system);
            v["verification"] = output::report_json(&tree);
            Rendered::json(v)
        }
        other => return Err(unsupported(other, "verify")),
    };
    rendered.code = code;
    Ok(rendered)
}

/// One line of a family scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRow {
    pub value: u64,
    pub exponents: String,
    pub decompositions: String,
    pub sufficient: String,
    pub admitted: String,
    pub status: String,
    pub json: Value,
}

/// Summary row for one curve: the chosen decomposition per level, flags and
/// the build or verification outcome. Shared by `scan` and batch callers so
/// a row always agrees with the standalone commands.
pub fn summary_row(value: u64, curve: &CurveSpec, cfg: &RunConfig, verify: bool) -> ScanRow {
    let exponents = curve.to_csv();
    let mut row = ScanRow {
        value,
        exponents: exponents.clone(),
        decompositions: "-".into(),
        sufficient: "-".into(),
        admitted: "-".into(),
        status: String::new(),
        json: json!({"value": value.to_string(), "curve": output::curve_json(curve)}),
    };
    let system = match build(curve, cfg) {
        Ok(s) => s,
        Err(e) => {
            row.status = format!("error {}: {e}", e.exit_code());
            row.json["status"] = Value::String(row.status.clone());
            return row;
        }
    };
    let levels = system.levels();
    if !levels.is_empty() {
        let join = |f: &dyn Fn(&stci_core::equations::LevelBuild) -> String| {
            levels.iter().map(f).collect::<Vec<_>>().join(" ")
        };
        row.decompositions = join(&|l| {
            let s = l.selection.pair.signed;
            format!("{}:({},{},{})", l.level, s.alpha, s.beta, s.gamma)
        });
        row.sufficient =
            join(&|l| output::yes_no(l.selection.pair.sufficient_conditions_met).into());
        row.admitted = join(&|l| l.selection.admitted_by.to_string());
    }
    let decomps: Vec<Value> = output::system_json(&system)["decompositions"]
        .as_array()
        .cloned()
        .unwrap_or_default();
    row.json["decompositions"] = Value::Array(decomps);
    if verify {
        let report = full_verify(&system, &cfg.field);
        row.status = report.overall.to_string();
        if !report.skipped.is_empty() {
            row.status
                .push_str(&format!(" ({} skipped)", report.skipped.len()));
        }
        row.json["verdict"] = Value::String(report.overall.to_string());
    } else {
        row.status = "built".into();
    }
    row.json["status"] = Value::String(row.status.clone());
    row
}

pub fn scan_rows(family: &FamilySpec, cfg: &RunConfig, verify: bool) -> Vec<ScanRow> {
    family
        .members()
        .into_iter()
        .map(|m| match &m.curve {
            Ok(curve) => summary_row(m.value, curve, cfg, verify),
            Err(e) => {
                let exponents = m
                    .exponents
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                let status = format!("skipped: {e}");
                ScanRow {
                    value: m.value,
                    json: json!({
                        "value": m.value.to_string(),
                        "curve": m.exponents.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                        "status": status,
                    }),
                    exponents,
                    decompositions: "-".into(),
                    sufficient: "-".into(),
                    admitted: "-".into(),
                    status,
                }
            }
        })
        .collect()
}

pub fn cmd_scan(family: &FamilySpec, cfg: &RunConfig, verify: bool) -> Result<Rendered, CliError> {
    let rows = scan_rows(family, cfg, verify);
    match cfg.format {
        Format::Text => Ok(Rendered::ok(scan_table(&rows))),
        Format::Json => Ok(Rendered::json(Value::Array(
            rows.into_iter().map(|r| r.json).collect(),
        ))),
        other => Err(unsupported(other, "scan")),
    }
}

fn scan_table(rows: &[ScanRow]) -> String {
    let header = [
        "M",
        "curve",
        "decompositions",
        "sufficient",
        "admitted",
        "status",
    ];
    let cells: Vec<[String; 6]> = rows
        .iter()
        .map(|r| {
            [
                r.value.to_string(),
                r.exponents.clone(),
                r.decompositions.clone(),
                r.sufficient.clone(),
                r.admitted.clone(),
                r.status.clone(),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let line = |items: &[&str]| {
        let mut s = items
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ");
        s.truncate(s.trim_end().len());
        s.push('\n');
        s
    };
    let mut out = line(&header);
    for row in &cells {
        out.push_str(&line(&row.iter().map(String::as_str).collect::<Vec<_>>()));
    }
    out
}
