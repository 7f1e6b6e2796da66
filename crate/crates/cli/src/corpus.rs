//! The bundled corpus: seven worked problems with known entire solutions,
//! each verified by substitution. The sources live in `corpus/` at the
//! workspace root and are embedded at compile time so the command runs from
//! any directory.

use fermat_core::{construct_t1_case4, Classification};

use crate::error::CliError;
use crate::problem::ProblemFile;
use crate::report::{residual_verdict, Verdict};

pub struct CorpusEntry {
    pub name: &'static str,
    pub source: &'static str,
    /// Expected case tag, checked when the hypotheses hold.
    pub expected_case: Option<&'static str>,
    /// Substring of the expected hypothesis violation; the entry still must
    /// verify by substitution.
    pub expected_violation: Option<&'static str>,
    /// Additionally run the case-4 constructor and compare against `f`.
    pub construct_check: bool,
}

macro_rules! corpus_file {
    ($name:literal) => {
        include_str!(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../../corpus/",
            $name,
            ".json"
        ))
    };
}

pub fn entries() -> Vec<CorpusEntry> {
    vec![
        CorpusEntry {
            name: "periodic-shift-c1",
            source: corpus_file!("periodic_shift_c1"),
            expected_case: Some("T1/C1"),
            expected_violation: None,
            construct_check: false,
        },
        CorpusEntry {
            name: "second-derivative-c2",
            source: corpus_file!("second_derivative_c2"),
            expected_case: Some("T1/C2"),
            expected_violation: None,
            construct_check: false,
        },
        CorpusEntry {
            name: "mixed-difference-c3",
            source: corpus_file!("mixed_difference_c3"),
            expected_case: Some("T1/C3"),
            expected_violation: None,
            construct_check: false,
        },
        CorpusEntry {
            name: "gaussian-c4",
            source: corpus_file!("gaussian_c4"),
            expected_case: Some("T1/C4"),
            expected_violation: None,
            construct_check: true,
        },
        CorpusEntry {
            name: "q-cube-root-counterexample",
            source: corpus_file!("q_cube_root_counterexample"),
            expected_case: None,
            expected_violation: Some("q^3 = 1"),
            construct_check: false,
        },
        CorpusEntry {
            name: "q-identity-c1",
            source: corpus_file!("q_identity_c1"),
            expected_case: Some("T2/C1"),
            expected_violation: None,
            construct_check: false,
        },
        CorpusEntry {
            name: "q-second-derivative-c3",
            source: corpus_file!("q_second_derivative_c3"),
            expected_case: Some("T2/C3"),
            expected_violation: None,
            construct_check: false,
        },
    ]
}

pub struct CorpusRow {
    pub name: &'static str,
    pub case: String,
    pub residual_norm: f64,
    pub verdict: Verdict,
    pub notes: Vec<String>,
    pub pass: bool,
}

fn run_entry(entry: &CorpusEntry, n_max: u32) -> Result<CorpusRow, CliError> {
    let file = ProblemFile::from_json(entry.source)?;
    let spec = file.to_spec()?;
    let mut notes = Vec::new();
    let mut pass = true;

    let violations = spec.check_hypotheses(n_max);
    match entry.expected_violation {
        Some(expected) => {
            let hit = violations.iter().any(|v| v.to_string().contains(expected));
            if hit {
                notes.push(format!("expected hypothesis violation: {expected}"));
            } else {
                notes.push(format!("missing expected violation {expected:?}"));
                pass = false;
            }
        }
        None => {
            if !violations.is_empty() {
                for v in &violations {
                    notes.push(format!("unexpected violation: {v}"));
                }
                pass = false;
            }
        }
    }

    let mut case = "-".to_string();
    if violations.is_empty() {
        let params = file.free_params(None)?;
        match spec.classify_with(params.p_linear, n_max)? {
            Classification::Family(tag) => case = tag.to_string(),
            Classification::Outside(reason) => case = format!("outside: {reason}"),
        }
        if let Some(expected) = entry.expected_case {
            if case != expected {
                notes.push(format!("expected case {expected}, classified {case}"));
                pass = false;
            }
        }
    }

    let candidate = file
        .candidate()?
        .ok_or_else(|| CliError::Parse(format!("{}: corpus entry lacks f", entry.name)))?;
    let residual = spec.residual(&candidate)?;
    let rhs_scale = spec.rhs()?.max_coeff_norm();
    let verdict = residual_verdict(&residual, rhs_scale);
    if verdict != Verdict::Solves {
        notes.push("substitution check failed".to_string());
        pass = false;
    }

    if entry.construct_check {
        let family = construct_t1_case4(&spec).map_err(CliError::from)?;
        if !family.candidate.approx_eq(&candidate) {
            notes.push("constructed candidate differs from the known solution".to_string());
            pass = false;
        }
        let constructed_residual = spec.residual(&family.candidate)?;
        if residual_verdict(&constructed_residual, rhs_scale) != Verdict::Solves {
            notes.push("constructed candidate fails substitution".to_string());
            pass = false;
        } else {
            notes.push("constructor output matches the known solution".to_string());
        }
    }

    Ok(CorpusRow {
        name: entry.name,
        case,
        residual_norm: residual.max_coeff_norm,
        verdict,
        notes,
        pass,
    })
}

pub fn run_corpus(n_max: u32) -> Result<Vec<CorpusRow>, CliError> {
    entries().iter().map(|e| run_entry(e, n_max)).collect()
}

pub fn render_table(rows: &[CorpusRow]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<30} {:<18} {:<12} {:<8} notes\n",
        "entry", "case", "residual", "status"
    ));
    for row in rows {
        out.push_str(&format!(
            "{:<30} {:<18} {:<12} {:<8} {}\n",
            row.name,
            row.case,
            if row.residual_norm == 0.0 {
                "empty".to_string()
            } else {
                format!("{:.2e}", row.residual_norm)
            },
            if row.pass { "PASS" } else { "FAIL" },
            row.notes.join("; ")
        ));
    }
    let passed = rows.iter().filter(|r| r.pass).count();
    out.push_str(&format!("total: {passed}/{} pass\n", rows.len()));
    out
}

pub fn render_json(rows: &[CorpusRow]) -> serde_json::Value {
    serde_json::json!(rows
        .iter()
        .map(|row| serde_json::json!({
            "name": row.name,
            "case": row.case,
            "residual_norm": row.residual_norm,
            "verdict": row.verdict.as_str(),
            "notes": row.notes,
            "pass": row.pass,
        }))
        .collect::<Vec<_>>())
}
