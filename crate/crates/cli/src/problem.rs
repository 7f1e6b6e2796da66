//! Problem files: a JSON document whose complex values are expression
//! strings, so constants like `ln(6)/2` or `-1/2 + sqrt(3)/2*i` survive
//! verbatim.
//!
//! ```json
//! {
//!   "a": ["1", "0", "0"],
//!   "b": ["0", "0", "1"],
//!   "omega": "2",
//!   "mode": "shift",
//!   "param": "2*pi*i",
//!   "g": "z + ln(6)/2",
//!   "f": "e^(z)",
//!   "params": { "A": "0", "B": "0", "branch": "viaA3", "C": ["0", "0"] }
//! }
//! ```
//!
//! `f` and `params` are optional; unknown keys are rejected.

use serde::Deserialize;

use fermat_core::{
    parse_complex, parse_expr, parse_poly, Case1Branch, ExpPoly, FreeParams, OperatorMode,
    ProblemSpec, Scalar,
};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeField {
    Shift,
    QScale,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsFile {
    #[serde(rename = "A", default)]
    pub a: Option<String>,
    #[serde(rename = "B", default)]
    pub b: Option<String>,
    #[serde(default)]
    pub branch: Option<String>,
    #[serde(rename = "C", default)]
    pub c: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub a: [String; 3],
    pub b: [String; 3],
    pub omega: String,
    pub mode: ModeField,
    pub param: String,
    pub g: String,
    #[serde(default)]
    pub f: Option<String>,
    #[serde(default)]
    pub params: Option<ParamsFile>,
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("problem file: {e}")))
    }

    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    fn field(&self, name: &str, value: &str) -> Result<Scalar, CliError> {
        parse_complex(value).map_err(|e| CliError::Parse(format!("field {name:?}: {e}")))
    }

    pub fn to_spec(&self) -> Result<ProblemSpec, CliError> {
        let a = [
            self.field("a[0]", &self.a[0])?,
            self.field("a[1]", &self.a[1])?,
            self.field("a[2]", &self.a[2])?,
        ];
        let b = [
            self.field("b[0]", &self.b[0])?,
            self.field("b[1]", &self.b[1])?,
            self.field("b[2]", &self.b[2])?,
        ];
        let omega = self.field("omega", &self.omega)?;
        let param = self.field("param", &self.param)?;
        let g = parse_poly(&self.g)
            .map_err(|e| CliError::Parse(format!("field \"g\": {e}")))?;
        let mode = match self.mode {
            ModeField::Shift => OperatorMode::Shift,
            ModeField::QScale => OperatorMode::QScale,
        };
        ProblemSpec::new(a, b, omega, mode, param, g)
            .map_err(|e| CliError::Parse(e.to_string()))
    }

    /// The candidate function, when the file provides one.
    pub fn candidate(&self) -> Result<Option<ExpPoly>, CliError> {
        match &self.f {
            None => Ok(None),
            Some(text) => parse_expr(text)
                .map(Some)
                .map_err(|e| CliError::Parse(format!("field \"f\": {e}"))),
        }
    }

    /// Free parameters for the constructors; `branch_override` wins over the
    /// file's `params.branch`.
    pub fn free_params(
        &self,
        branch_override: Option<Case1Branch>,
    ) -> Result<FreeParams, CliError> {
        let mut out = FreeParams::default();
        if let Some(p) = &self.params {
            if let Some(a) = &p.a {
                out.p_linear = self.field("params.A", a)?;
            }
            if let Some(b) = &p.b {
                out.p_const = self.field("params.B", b)?;
            }
            for (i, c) in p.c.iter().enumerate() {
                out.extra.push(self.field(&format!("params.C[{i}]"), c)?);
            }
            if let Some(branch) = &p.branch {
                out.branch = Some(parse_branch(branch)?);
            }
        }
        if branch_override.is_some() {
            out.branch = branch_override;
        }
        Ok(out)
    }
}

pub fn parse_branch(text: &str) -> Result<Case1Branch, CliError> {
    match text {
        "viaA3" => Ok(Case1Branch::ViaA3),
        "viaA1" => Ok(Case1Branch::ViaA1),
        other => Err(CliError::Parse(format!(
            "branch must be \"viaA3\" or \"viaA1\", got {other:?}"
        ))),
    }
}
