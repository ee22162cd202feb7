//! Fan and divisor documents.
//!
//! A fan file is `{"dim": 2, "rays": [[1,0],[0,1],[-1,-1]], "cones": [[0,1],[1,2],[2,0]]}`
//! listing maximal cones by ray index. A divisor file is
//! `{"coeffs": ["3", "-1/2", 0]}`; entries are integers or `"p/q"` strings.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use toric_core::rational::parse_q;
use toric_core::{Fan, RawFan, TWeilDivisor};

use crate::CliError;

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FanDocument {
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub cones: Vec<Vec<usize>>,
}

impl FanDocument {
    pub fn from_fan(fan: &Fan) -> Self {
        FanDocument {
            dim: fan.dim(),
            rays: fan.rays().to_vec(),
            cones: fan.max_cones().iter().map(|c| c.to_vec()).collect(),
        }
    }

    pub fn raw(&self) -> RawFan {
        RawFan::new(self.dim, self.rays.clone(), self.cones.clone())
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Coefficient {
    Int(i64),
    Text(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DivisorDocument {
    coeffs: Vec<Coefficient>,
}

/// File contents with their SHA-256 digest.
pub struct Loaded<T> {
    pub value: T,
    pub sha256: String,
}

fn read(path: &Path) -> Result<(Vec<u8>, String), CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let digest = hex::encode(Sha256::digest(&bytes));
    Ok((bytes, digest))
}

pub fn load_fan(path: &Path) -> Result<Loaded<FanDocument>, CliError> {
    let (bytes, sha256) = read(path)?;
    let value = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::Input(format!("{}: malformed fan document: {e}", path.display())))?;
    Ok(Loaded { value, sha256 })
}

pub fn load_divisor(path: &Path) -> Result<Loaded<TWeilDivisor>, CliError> {
    let (bytes, sha256) = read(path)?;
    let doc: DivisorDocument = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::Input(format!("{}: malformed divisor document: {e}", path.display())))?;
    let coeffs = doc
        .coeffs
        .into_iter()
        .enumerate()
        .map(|(i, c)| match c {
            Coefficient::Int(n) => Ok(toric_core::Q::from_integer(n.into())),
            Coefficient::Text(s) => {
                parse_q(&s).ok_or_else(|| CliError::Input(format!("coefficient {i}: cannot parse {s:?} as a rational")))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Loaded { value: TWeilDivisor::new(coeffs), sha256 })
}
