//! Shared fixtures: the worked problem instances with their known entire
//! solutions, used across the property suites.

use fermat_core::{parse_expr, parse_poly, ExpPoly, OperatorMode, ProblemSpec};

pub struct Instance {
    pub name: &'static str,
    pub spec: ProblemSpec,
    pub solution: ExpPoly,
    /// True when the instance deliberately violates a standing hypothesis
    /// (it still solves the equation; that is the point).
    #[allow(dead_code)] // not every suite checks the flag
    pub violates_hypotheses: bool,
}

#[allow(clippy::too_many_arguments)]
fn build(
    name: &'static str,
    a: [&str; 3],
    b: [&str; 3],
    omega: &str,
    mode: OperatorMode,
    param: &str,
    g: &str,
    f: &str,
    violates_hypotheses: bool,
) -> Instance {
    let parse_c = |s: &str| fermat_core::parse_complex(s).unwrap();
    let spec = ProblemSpec::new(
        [parse_c(a[0]), parse_c(a[1]), parse_c(a[2])],
        [parse_c(b[0]), parse_c(b[1]), parse_c(b[2])],
        parse_c(omega),
        mode,
        parse_c(param),
        parse_poly(g).unwrap(),
    )
    .unwrap();
    Instance {
        name,
        spec,
        solution: parse_expr(f).unwrap(),
        violates_hypotheses,
    }
}

/// All seven worked instances. Each `solution` has an identically vanishing
/// residual (the q-root entry also trips the `q^n != ±1` hypothesis).
pub fn paper_instances() -> Vec<Instance> {
    vec![
        build(
            "periodic-shift-c1",
            ["1", "0", "0"],
            ["0", "0", "1"],
            "2",
            OperatorMode::Shift,
            "2*pi*i",
            "z + ln(6)/2",
            "e^(z)",
            false,
        ),
        build(
            "second-derivative-c2",
            ["0", "1", "1"],
            ["0", "1", "-1"],
            "2",
            OperatorMode::Shift,
            "2*pi*i",
            "z + ln(2)",
            "e^(z)",
            false,
        ),
        build(
            "mixed-difference-c3",
            ["1", "0", "-1"],
            ["1", "-1", "0"],
            "pi/(2*i)",
            OperatorMode::Shift,
            "2*pi*i",
            "z + ln(2)",
            "z*e^(z)",
            false,
        ),
        build(
            "gaussian-c4",
            ["-(2 + sqrt(3))", "0", "2 - sqrt(3)"],
            ["1", "0", "-1"],
            "2",
            OperatorMode::Shift,
            "2",
            "z^2",
            "-sqrt(3)/6 * e^(z^2 - 2*z)",
            false,
        ),
        build(
            "q-cube-root-counterexample",
            ["0", "0", "1"],
            ["1", "0", "0"],
            "2",
            OperatorMode::QScale,
            "-1/2 + sqrt(3)/2*i",
            "z^3/2",
            "sqrt(6)/6 * e^(z^3/2)",
            true,
        ),
        build(
            "q-identity-c1",
            ["1", "0", "0"],
            ["0", "1", "0"],
            "2",
            OperatorMode::QScale,
            "3",
            "z",
            "1/sqrt(6) * e^(z)",
            false,
        ),
        build(
            "q-second-derivative-c3",
            ["1", "-1/4", "2"],
            ["1", "-1/4", "1"],
            "2",
            OperatorMode::QScale,
            "3",
            "6*z + ln(13)/2",
            "e^(2*z)",
            false,
        ),
    ]
}
