//! Report structure shared by the commands, with aligned human rendering and
//! a `--json` machine form. Rendering is deterministic byte-for-byte for a
//! given input file and tolerance.

use serde_json::{json, Value};

use fermat_core::{format_complex, DerivedQuantities, Residual, Resonance, Scalar};

/// Verdict of a residual check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Solves,
    Fails,
    OutsideClassifiedFamilies,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Solves => "solves",
            Verdict::Fails => "fails",
            Verdict::OutsideClassifiedFamilies => "outside-classified-families",
        }
    }
}

/// A residual check certifies a solution when it is empty in canonical form
/// or its largest coefficient stays below `1e-8` relative to the coefficient
/// scale of `e^{2g}`.
pub fn residual_verdict(residual: &Residual, rhs_scale: f64) -> Verdict {
    if residual.is_empty() || residual.max_coeff_norm <= 1e-8 * rhs_scale {
        Verdict::Solves
    } else {
        Verdict::Fails
    }
}

#[derive(Debug, Clone)]
pub struct ConditionReport {
    pub description: String,
    pub value: Scalar,
    pub satisfied: bool,
}

#[derive(Debug, Clone)]
pub struct FamilyReport {
    pub candidate: String,
    pub conditions: Vec<ConditionReport>,
    pub warnings: Vec<String>,
    pub residual_norm: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub problem: String,
    pub derived: Option<DerivedQuantities>,
    pub violations: Vec<String>,
    pub case: Option<String>,
    pub resonance: Option<&'static str>,
    pub outside_reason: Option<String>,
    pub candidate: Option<String>,
    pub families: Vec<FamilyReport>,
    pub residual_norm: Option<f64>,
    pub rhs_scale: Option<f64>,
    pub verdict: Option<Verdict>,
}

pub fn resonance_str(r: Resonance) -> &'static str {
    match r {
        Resonance::None => "none",
        Resonance::K1 => "k1",
        Resonance::K2 => "k2",
        Resonance::Double => "double",
    }
}

impl Report {
    pub fn render_human(&self) -> String {
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        line(format!("problem: {}", self.problem));
        if let Some(d) = &self.derived {
            line(format!(
                "derived: A1 = {}, A2 = {}, A3 = {}",
                format_complex(d.a1),
                format_complex(d.a2),
                format_complex(d.a3)
            ));
            line(format!(
                "         omega1 = {}, omega2 = {}, rank(A) = {}",
                format_complex(d.omega1),
                format_complex(d.omega2),
                d.rank
            ));
        }
        if self.violations.is_empty() {
            line("hypotheses: ok".to_string());
        } else {
            for v in &self.violations {
                line(format!("hypothesis violation: {v}"));
            }
        }
        if let Some(case) = &self.case {
            match self.resonance {
                Some(r) => line(format!("classification: {case} (resonance: {r})")),
                None => line(format!("classification: {case}")),
            }
        }
        if let Some(reason) = &self.outside_reason {
            line(format!("classification: {reason}"));
        }
        if let Some(candidate) = &self.candidate {
            line(format!("candidate: {candidate}"));
        }
        for family in &self.families {
            line(format!("family candidate: {}", family.candidate));
            for c in &family.conditions {
                line(format!(
                    "  condition [{}] {} = {}",
                    if c.satisfied { "ok" } else { "NOT MET" },
                    c.description,
                    format_complex(c.value)
                ));
            }
            for w in &family.warnings {
                line(format!("  warning: {w}"));
            }
            line(format!(
                "  residual max coefficient norm: {:e}",
                family.residual_norm
            ));
            line(format!("  verdict: {}", family.verdict.as_str()));
        }
        if let Some(norm) = self.residual_norm {
            line(format!("residual max coefficient norm: {norm:e}"));
        }
        if let Some(scale) = self.rhs_scale {
            line(format!("right-hand side coefficient scale: {scale:e}"));
        }
        if let Some(v) = self.verdict {
            line(format!("verdict: {}", v.as_str()));
        }
        out
    }

    pub fn render_json(&self) -> Value {
        let derived = self.derived.as_ref().map(|d| {
            json!({
                "a1": format_complex(d.a1),
                "a2": format_complex(d.a2),
                "a3": format_complex(d.a3),
                "omega1": format_complex(d.omega1),
                "omega2": format_complex(d.omega2),
                "rank": d.rank,
            })
        });
        let families: Vec<Value> = self
            .families
            .iter()
            .map(|f| {
                json!({
                    "candidate": f.candidate,
                    "conditions": f.conditions.iter().map(|c| json!({
                        "description": c.description,
                        "value": format_complex(c.value),
                        "satisfied": c.satisfied,
                    })).collect::<Vec<_>>(),
                    "warnings": f.warnings,
                    "residual_norm": f.residual_norm,
                    "verdict": f.verdict.as_str(),
                })
            })
            .collect();
        json!({
            "problem": self.problem,
            "derived": derived,
            "violations": self.violations,
            "classification": self.case,
            "resonance": self.resonance,
            "outside_reason": self.outside_reason,
            "candidate": self.candidate,
            "families": families,
            "residual_norm": self.residual_norm,
            "rhs_scale": self.rhs_scale,
            "verdict": self.verdict.map(|v| v.as_str()),
        })
    }
}
