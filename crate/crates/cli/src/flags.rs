//! Type files for `count-flags`: `{"id", "s", "n", "l"}` where `l[i]` is the
//! jump table `[[j, l_i(j)], ...]`, or a list of such objects.

use langton_core::flags::TypeDatum;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeFile {
    pub id: String,
    pub s: usize,
    pub n: usize,
    pub l: Vec<Vec<(usize, usize)>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(TypeFile),
    Many(Vec<TypeFile>),
}

impl TypeFile {
    pub fn datum(&self) -> Result<TypeDatum, CliError> {
        TypeDatum::new(self.s, self.n, self.l.clone()).map_err(|e| CliError::Parse(format!("type {:?}: {e}", self.id)))
    }
}

pub fn parse_types(text: &str) -> Result<Vec<TypeFile>, CliError> {
    match serde_json::from_str(text).map_err(|e| CliError::Parse(format!("type file: {e}")))? {
        OneOrMany::One(t) => Ok(vec![t]),
        OneOrMany::Many(ts) => Ok(ts),
    }
}
