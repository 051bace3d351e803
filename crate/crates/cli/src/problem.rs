//! Problem files: a prime, a dimension, filtration steps over `Q` and an
//! optional starting lattice, all entries as rational strings.

use langton_core::arith::{format_rational, parse_rational, Dvr, Mat, Rationals, Subspace};
use langton_core::filtration::MultiFiltration;
use langton_core::langton::Caps;
use langton_core::lattice::Lattice;
use langton_core::{Error, KSubspace, ValuedScalar};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Rows of rational strings.
pub type RowsFile = Vec<Vec<String>>;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapsFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enum_cap: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lift_cap: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<u64>,
}

impl CapsFile {
    /// Unset caps take the library defaults. The enumeration cap bounds every
    /// brute-force search.
    pub fn resolve(&self) -> Caps {
        let mut caps = Caps::default();
        if let Some(e) = self.enum_cap {
            caps.enum_cap = e.into();
            caps.search_cap = e.into();
        }
        if let Some(l) = self.lift_cap {
            caps.lift_cap = l;
        }
        if let Some(m) = self.max_iter {
            caps.max_iter = m as usize;
        }
        caps
    }

    /// `other`'s caps where set, else these.
    pub fn overridden_by(&self, other: &CapsFile) -> CapsFile {
        CapsFile {
            enum_cap: other.enum_cap.or(self.enum_cap),
            lift_cap: other.lift_cap.or(self.lift_cap),
            max_iter: other.max_iter.or(self.max_iter),
        }
    }
}

/// `chains[i]` lists `Fil_i^1, Fil_i^2, ...`, each by basis rows; the whole
/// space `Fil_i^0` is implicit and a trailing zero step may be omitted.
/// `lattice` lists basis vectors; the standard lattice when absent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub p: u64,
    pub n: usize,
    pub chains: Vec<Vec<RowsFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<RowsFile>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub caps: CapsFile,
}

fn is_default(c: &CapsFile) -> bool {
    *c == CapsFile::default()
}

/// A validated problem.
#[derive(Clone, Debug)]
pub struct Problem {
    pub dvr: Dvr,
    pub fil: MultiFiltration<ValuedScalar>,
    pub lattice: Lattice,
    pub caps: Caps,
}

impl Problem {
    /// Same prime, filtration and starting lattice; caps are ignored.
    pub fn same_as(&self, other: &Problem) -> bool {
        self.dvr.prime() == other.dvr.prime()
            && self.fil == other.fil
            && self.lattice.same_as(&self.dvr, &other.lattice)
    }
}

pub fn parse_rows(rows: &RowsFile, width: usize, at: &str) -> Result<Vec<Vec<ValuedScalar>>, CliError> {
    rows.iter()
        .enumerate()
        .map(|(r, row)| {
            if row.len() != width {
                return Err(CliError::Parse(format!("{at}[{r}]: expected {width} entries, found {}", row.len())));
            }
            row.iter()
                .enumerate()
                .map(|(c, x)| {
                    parse_rational(x).map_err(|e| match e {
                        Error::Parse(why) => CliError::Parse(format!("{at}[{r}][{c}]: {why}")),
                        e => CliError::Parse(format!("{at}[{r}][{c}]: {e}")),
                    })
                })
                .collect()
        })
        .collect()
}

pub fn format_rows<'a>(rows: impl IntoIterator<Item = &'a [ValuedScalar]>) -> RowsFile {
    rows.into_iter().map(|r| r.iter().map(format_rational).collect()).collect()
}

pub fn parse_lattice(rows: &RowsFile, n: usize, at: &str) -> Result<Lattice, CliError> {
    if rows.len() != n {
        return Err(CliError::Parse(format!("{at}: expected {n} basis vectors, found {}", rows.len())));
    }
    Lattice::from_vectors(n, parse_rows(rows, n, at)?).map_err(|e| CliError::Parse(format!("{at}: {e}")))
}

pub fn format_lattice(l: &Lattice) -> RowsFile {
    l.basis_vectors().iter().map(|v| v.iter().map(format_rational).collect()).collect()
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("problem: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files serialize")
    }

    pub fn parse(&self) -> Result<Problem, CliError> {
        let dvr = Dvr::new(self.p).map_err(|e| CliError::Parse(e.to_string()))?;
        let q = Rationals::new();
        let n = self.n;
        if n == 0 {
            return Err(CliError::Parse("n must be positive".into()));
        }
        let mut steps = Vec::with_capacity(self.chains.len());
        for (i, chain) in self.chains.iter().enumerate() {
            let mut parsed: Vec<KSubspace> = Vec::with_capacity(chain.len());
            for (j, rows) in chain.iter().enumerate() {
                let rows = parse_rows(rows, n, &format!("chains[{i}][{j}]"))?;
                parsed.push(Subspace::span(&q, &Mat::from_rows(n, rows)));
            }
            steps.push(parsed);
        }
        let fil = MultiFiltration::from_steps(&q, n, steps).map_err(|e| CliError::Parse(e.to_string()))?;
        let lattice = match &self.lattice {
            Some(rows) => parse_lattice(rows, n, "lattice")?,
            None => Lattice::standard(n),
        };
        Ok(Problem { dvr, fil, lattice, caps: self.caps.resolve() })
    }

    /// The file for a filtration, listing each chain's steps after the
    /// whole space and before the final zero.
    pub fn from_filtration(p: u64, fil: &MultiFiltration<ValuedScalar>, lattice: Option<&Lattice>) -> Self {
        let chains = fil
            .chains()
            .iter()
            .map(|c| c[1..c.len() - 1].iter().map(|s| format_rows(s.basis().rows())).collect())
            .collect();
        ProblemFile { p, n: fil.dim(), chains, lattice: lattice.map(format_lattice), caps: CapsFile::default() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const INSTANCE_A: &str = r#"{"p": 2, "n": 2, "chains": [[[["1", "0"]]], [[["1", "2"]]]]}"#;

    #[test]
    fn parses_and_reserializes() {
        let file = ProblemFile::from_json(INSTANCE_A).unwrap();
        let problem = file.parse().unwrap();
        assert_eq!(problem.fil.num_chains(), 2);
        assert_eq!(problem.fil.dims(), vec![vec![2, 1, 0], vec![2, 1, 0]]);
        assert_eq!(ProblemFile::from_json(&file.to_json()).unwrap(), file);
        let again = ProblemFile::from_filtration(2, &problem.fil, None);
        assert!(again.parse().unwrap().same_as(&problem));
    }

    #[test]
    fn malformed_rationals_are_located() {
        let text = INSTANCE_A.replace(r#""1", "2""#, r#""1//2", "2""#);
        let err = ProblemFile::from_json(&text).unwrap().parse().unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("chains[1][0][0][0]") && msg.contains("1//2"), "{msg}");
    }

    #[test]
    fn rejects_bad_shapes() {
        let short = r#"{"p": 2, "n": 2, "chains": [[[["1"]]]]}"#;
        assert!(ProblemFile::from_json(short).unwrap().parse().is_err());
        let not_prime = r#"{"p": 4, "n": 2, "chains": []}"#;
        assert!(ProblemFile::from_json(not_prime).unwrap().parse().is_err());
        let increasing = r#"{"p": 2, "n": 2, "chains": [[[["1", "0"]], [["1", "0"], ["0", "1"]]]]}"#;
        assert!(ProblemFile::from_json(increasing).unwrap().parse().is_err());
        let json = r#"{"p": 2, "n": 2, "chains": [}"#;
        assert!(ProblemFile::from_json(json).unwrap_err().to_string().contains("line 1"));
    }
}
