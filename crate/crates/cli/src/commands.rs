use std::fmt;

use langton_core::arith::{is_prime, PrimeField};
use langton_core::filtration::{is_semistable, Slope};
use langton_core::flags::count_semistable;
use langton_core::gen::{random_instance, InstanceParams};
use langton_core::langton::{check_generic_fiber, langton_run, verify_trace, GenericVerdict};
use langton_core::lattice::residue_filtration;
use langton_core::SubspaceF;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::flags::TypeFile;
use crate::problem::{Problem, ProblemFile};
use crate::trace::{TraceFile, VERDICT_SEMISTABLE};
use crate::CliError;

/// Stability of the reduction of the problem's lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub dim: usize,
    pub weight: usize,
    pub slope: Slope,
    pub semistable: bool,
    /// The maximal destabilizer and its slope, when unstable.
    pub witness: Option<(SubspaceF, Slope)>,
}

fn format_span(w: &SubspaceF) -> String {
    let rows: Vec<String> = w
        .basis()
        .rows()
        .map(|r| format!("({})", r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("span({})", rows.join(", "))
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => writeln!(f, "semistable, μ = {}", self.slope)?,
            Some((w, s)) => writeln!(f, "unstable, witness {}, μ = {} > {}", format_span(w), s, self.slope)?,
        }
        write!(f, "weight {}, dimension {}", self.weight, self.dim)
    }
}

pub fn cmd_check(problem: &Problem) -> Result<CheckReport, CliError> {
    let field = PrimeField::new(problem.dvr.prime());
    let red = residue_filtration(&problem.dvr, &problem.lattice, &problem.fil)?;
    let report = is_semistable(&field, &red, problem.caps.enum_cap)?;
    Ok(CheckReport {
        dim: red.dim(),
        weight: report.weight,
        slope: report.slope,
        semistable: report.semistable,
        witness: report.witness.map(|d| (d.subspace, d.slope)),
    })
}

pub fn cmd_run(file: &ProblemFile) -> Result<TraceFile, CliError> {
    let problem = file.parse()?;
    let (_, trace) = langton_run(&problem.dvr, &problem.fil, Some(&problem.lattice), &problem.caps)?;
    Ok(TraceFile::new(file.clone(), &trace))
}

/// Checks that `trace` was produced for `file` and re-verifies every step.
pub fn cmd_verify(file: &ProblemFile, trace: &TraceFile) -> Result<(), CliError> {
    let problem = file.parse()?;
    if !problem.same_as(&trace.problem.parse()?) {
        return Err(CliError::EchoMismatch);
    }
    if trace.verdict != VERDICT_SEMISTABLE {
        return Err(CliError::Failed(format!("unknown verdict {:?}", trace.verdict)));
    }
    let recorded = trace.to_trace()?;
    verify_trace(&problem.dvr, &problem.fil, &problem.lattice, &recorded, &problem.caps)?;
    Ok(())
}

/// CSV with header `q,type,total,semistable`, one row per prime and type.
pub fn cmd_count_flags(primes: &[u64], types: &[TypeFile], cap: u128) -> Result<String, CliError> {
    let mut out = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Io(e.into());
    out.write_record(["q", "type", "total", "semistable"]).map_err(csv_err)?;
    for &q in primes {
        if !is_prime(q) {
            return Err(CliError::Parse(format!("{q} is not a prime")));
        }
        let field = PrimeField::new(q);
        for t in types {
            let c = count_semistable(&field, &t.datum()?, cap)?;
            out.write_record([q.to_string(), t.id.clone(), c.total.to_string(), c.semistable.to_string()]).map_err(csv_err)?;
        }
    }
    let bytes = out.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FuzzReport {
    pub instances: usize,
    pub steps: usize,
    pub max_steps: usize,
    pub skipped_unstable: usize,
    pub skipped_undetermined: usize,
    pub failures: Vec<String>,
}

impl fmt::Display for FuzzReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "instances {}, steps {} (at most {} per run), skipped {} unstable and {} undetermined generic fibers, failures {}",
            self.instances,
            self.steps,
            self.max_steps,
            self.skipped_unstable,
            self.skipped_undetermined,
            self.failures.len()
        )?;
        for line in &self.failures {
            write!(f, "\n  {line}")?;
        }
        Ok(())
    }
}

/// Runs `count` random instances whose generic fiber is certified
/// semistable, and checks each trace: JSON round trip, no filtered splitting
/// after every step, and independent verification.
pub fn cmd_fuzz(seed: u64, count: usize, params: &InstanceParams) -> Result<FuzzReport, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = FuzzReport::default();
    let mut index = 0usize;
    while report.instances < count {
        let inst = random_instance(&mut rng, params);
        index += 1;
        match check_generic_fiber(&inst.fil, inst.p, 4, 500, 1_000_000)? {
            GenericVerdict::Semistable { .. } => {}
            GenericVerdict::Unstable { .. } => {
                report.skipped_unstable += 1;
                continue;
            }
            GenericVerdict::Undetermined => {
                report.skipped_undetermined += 1;
                continue;
            }
        }
        report.instances += 1;
        let file = ProblemFile::from_filtration(inst.p, &inst.fil, None);
        let fail = |why: String| format!("instance {index}: {why}\n{}", file.to_json());
        let trace = match cmd_run(&file) {
            Ok(t) => t,
            Err(e) => {
                report.failures.push(fail(e.to_string()));
                continue;
            }
        };
        report.steps += trace.steps.len();
        report.max_steps = report.max_steps.max(trace.steps.len());
        if TraceFile::from_json(&trace.to_json()).ok().as_ref() != Some(&trace) {
            report.failures.push(fail("trace does not round-trip".into()));
        }
        if let Some(k) = trace.steps.iter().position(|s| s.no_splitting != Some(true)) {
            report.failures.push(fail(format!("step {k}: residue sequence splits or was not checked")));
        }
        if let Err(e) = cmd_verify(&file, &trace) {
            report.failures.push(fail(e.to_string()));
        }
    }
    Ok(report)
}
