//! Trace files: a run's modification steps together with the problem that
//! produced them.

use langton_core::arith::{Mat, PrimeField, Subspace};
use langton_core::filtration::Slope;
use langton_core::langton::{LangtonStep, LangtonTrace};
use langton_core::ChainScalar;
use serde::{Deserialize, Serialize};

use crate::problem::{format_lattice, parse_lattice, ProblemFile, RowsFile};
use crate::CliError;

pub const VERDICT_SEMISTABLE: &str = "semistable";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepFile {
    pub lattice: RowsFile,
    pub reduction_dims: Vec<Vec<usize>>,
    /// Reduced echelon basis over `F_p`, in lattice coordinates.
    pub destabilizer: Vec<Vec<u64>>,
    pub slope: String,
    pub dim: usize,
    pub lift_order: u32,
    /// Integers in `[0, p^m)`.
    pub lift_generators: Vec<Vec<String>>,
    pub modified_lattice: RowsFile,
    pub no_splitting: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceFile {
    pub problem: ProblemFile,
    pub steps: Vec<StepFile>,
    pub final_lattice: RowsFile,
    pub final_reduction_dims: Vec<Vec<usize>>,
    pub verdict: String,
}

fn parse_slope(s: &str, at: &str) -> Result<Slope, CliError> {
    let bad = || CliError::Parse(format!("{at}: malformed slope {s:?}"));
    let (a, b) = s.split_once('/').unwrap_or((s, "1"));
    let (a, b): (i64, i64) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
    if b <= 0 {
        return Err(bad());
    }
    Ok(Slope::new(a, b))
}

impl StepFile {
    pub fn from_step(step: &LangtonStep) -> Self {
        StepFile {
            lattice: format_lattice(&step.lattice),
            reduction_dims: step.reduction_dims.clone(),
            destabilizer: step.destabilizer.basis().to_rows(),
            slope: step.slope.to_string(),
            dim: step.dim,
            lift_order: step.lift_order,
            lift_generators: step.lift_generators.rows().map(|r| r.iter().map(ToString::to_string).collect()).collect(),
            modified_lattice: format_lattice(&step.modified),
            no_splitting: step.no_splitting,
        }
    }

    pub fn to_step(&self, p: u64, n: usize, k: usize) -> Result<LangtonStep, CliError> {
        let at = |field: &str| format!("steps[{k}].{field}");
        let field = PrimeField::new(p);
        if self.destabilizer.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= p)) {
            return Err(CliError::Parse(format!("{}: rows must have {n} entries in [0, {p})", at("destabilizer"))));
        }
        let destabilizer = Subspace::span(&field, &Mat::from_rows(n, self.destabilizer.clone()));
        let gens = self
            .lift_generators
            .iter()
            .map(|r| {
                if r.len() != n {
                    return Err(CliError::Parse(format!("{}: rows must have {n} entries", at("lift_generators"))));
                }
                r.iter()
                    .map(|x| {
                        x.parse::<ChainScalar>()
                            .map_err(|_| CliError::Parse(format!("{}: malformed integer {x:?}", at("lift_generators"))))
                    })
                    .collect()
            })
            .collect::<Result<Vec<Vec<ChainScalar>>, _>>()?;
        Ok(LangtonStep {
            lattice: parse_lattice(&self.lattice, n, &at("lattice"))?,
            reduction_dims: self.reduction_dims.clone(),
            destabilizer,
            slope: parse_slope(&self.slope, &at("slope"))?,
            dim: self.dim,
            lift_order: self.lift_order,
            lift_generators: Mat::from_rows(n, gens),
            witness: None,
            modified: parse_lattice(&self.modified_lattice, n, &at("modified_lattice"))?,
            no_splitting: self.no_splitting,
        })
    }
}

impl TraceFile {
    pub fn new(problem: ProblemFile, trace: &LangtonTrace) -> Self {
        TraceFile {
            problem,
            steps: trace.steps.iter().map(StepFile::from_step).collect(),
            final_lattice: format_lattice(&trace.final_lattice),
            final_reduction_dims: trace.final_reduction_dims.clone(),
            verdict: VERDICT_SEMISTABLE.to_string(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("trace: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace files serialize")
    }

    /// The recorded trace, starting from the echoed problem's lattice.
    pub fn to_trace(&self) -> Result<LangtonTrace, CliError> {
        let problem = self.problem.parse()?;
        let (p, n) = (self.problem.p, self.problem.n);
        let steps = self.steps.iter().enumerate().map(|(k, s)| s.to_step(p, n, k)).collect::<Result<Vec<_>, _>>()?;
        Ok(LangtonTrace {
            initial: problem.lattice,
            steps,
            final_lattice: parse_lattice(&self.final_lattice, n, "final_lattice")?,
            final_reduction_dims: self.final_reduction_dims.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slopes_parse() {
        assert_eq!(parse_slope("3/2", "s").unwrap(), Slope::new(3, 2));
        assert_eq!(parse_slope("2", "s").unwrap(), Slope::new(2, 1));
        assert!(parse_slope("1/0", "s").is_err());
        assert!(parse_slope("x", "s").is_err());
    }
}
