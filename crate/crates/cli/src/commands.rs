//! The three file-driven commands: classify, verify, construct.

use std::path::Path;

use fermat_core::{construct, Case1Branch, Classification, ProblemSpec, SolutionFamily};

use crate::error::CliError;
use crate::problem::ProblemFile;
use crate::report::{residual_verdict, resonance_str, ConditionReport, FamilyReport, Report};

pub struct CommandOutput {
    pub report: Report,
    pub exit_code: i32,
}

fn base_report(problem: String, spec: &ProblemSpec, n_max: u32) -> Report {
    Report {
        problem,
        derived: Some(spec.derived()),
        violations: spec
            .check_hypotheses(n_max)
            .iter()
            .map(|v| v.to_string())
            .collect(),
        ..Report::default()
    }
}

/// Classify the problem: derived quantities plus the case tag.
/// Exit 0 on success (including the documented outside-family outcomes),
/// 2 when a standing hypothesis fails.
pub fn cmd_classify(path: &Path, n_max: u32) -> Result<CommandOutput, CliError> {
    let file = ProblemFile::load(path)?;
    let spec = file.to_spec()?;
    let params = file.free_params(None)?;
    let mut report = base_report(path.display().to_string(), &spec, n_max);
    if !report.violations.is_empty() {
        return Ok(CommandOutput {
            report,
            exit_code: 2,
        });
    }
    match spec.classify_with(params.p_linear, n_max)? {
        Classification::Family(tag) => {
            report.case = Some(tag.to_string());
            report.resonance = Some(resonance_str(tag.resonance));
        }
        Classification::Outside(reason) => {
            report.outside_reason = Some(reason.to_string());
        }
    }
    Ok(CommandOutput {
        report,
        exit_code: 0,
    })
}

/// Substitute the file's candidate `f` and report the residual verdict.
/// Hypothesis violations are reported but do not block the substitution
/// check (counterexample instances are exactly the interesting ones).
pub fn cmd_verify(path: &Path, n_max: u32) -> Result<CommandOutput, CliError> {
    let file = ProblemFile::load(path)?;
    let spec = file.to_spec()?;
    let candidate = file
        .candidate()?
        .ok_or_else(|| CliError::Parse("verify requires the \"f\" field".into()))?;
    let params = file.free_params(None)?;

    let mut report = base_report(path.display().to_string(), &spec, n_max);
    if report.violations.is_empty() {
        match spec.classify_with(params.p_linear, n_max)? {
            Classification::Family(tag) => {
                report.case = Some(tag.to_string());
                report.resonance = Some(resonance_str(tag.resonance));
            }
            Classification::Outside(reason) => {
                report.outside_reason = Some(reason.to_string());
            }
        }
    }

    let residual = spec.residual(&candidate)?;
    let rhs_scale = spec.rhs()?.max_coeff_norm();
    report.candidate = Some(fermat_core::format_expr(&candidate));
    report.residual_norm = Some(residual.max_coeff_norm);
    report.rhs_scale = Some(rhs_scale);
    report.verdict = Some(residual_verdict(&residual, rhs_scale));
    Ok(CommandOutput {
        report,
        exit_code: 0,
    })
}

pub fn family_report(
    spec: &ProblemSpec,
    family: &SolutionFamily,
) -> Result<FamilyReport, CliError> {
    let residual = spec.residual(&family.candidate)?;
    let rhs_scale = spec.rhs()?.max_coeff_norm();
    Ok(FamilyReport {
        candidate: fermat_core::format_expr(&family.candidate),
        conditions: family
            .conditions
            .iter()
            .map(|c| ConditionReport {
                description: c.description.clone(),
                value: c.value,
                satisfied: c.is_satisfied(),
            })
            .collect(),
        warnings: family.warnings.clone(),
        residual_norm: residual.max_coeff_norm,
        verdict: residual_verdict(&residual, rhs_scale),
    })
}

/// Construct the closed-form family for the file's case and report the
/// candidate, its condition scalars, and the full-residual verdict.
/// Exit 3 when the problem falls outside every classified family.
pub fn cmd_construct(
    path: &Path,
    branch: Option<Case1Branch>,
    n_max: u32,
) -> Result<CommandOutput, CliError> {
    let file = ProblemFile::load(path)?;
    let spec = file.to_spec()?;
    let params = file.free_params(branch)?;

    let report_violations = spec.check_hypotheses(n_max);
    if !report_violations.is_empty() {
        return Err(CliError::Hypothesis(
            report_violations
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("; "),
        ));
    }
    let mut report = base_report(path.display().to_string(), &spec, n_max);
    let family = construct(&spec, &params)?;
    report.case = Some(family.tag.to_string());
    report.resonance = Some(resonance_str(family.tag.resonance));
    let fam_report = family_report(&spec, &family)?;
    report.verdict = Some(fam_report.verdict);
    report.rhs_scale = Some(spec.rhs()?.max_coeff_norm());
    report.families.push(fam_report);
    Ok(CommandOutput {
        report,
        exit_code: 0,
    })
}
