//! State files and the short CV state specifications.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Deserialize;
use weylswap_core::cv::{coherent_state, FockMode};
use weylswap_core::{DensityMatrix, DimSpec, Partition, StateVector};

use crate::error::CliError;

/// On-disk state: `{"dims": [...], "amplitudes": [[re, im], ...], "meta": {...}}`,
/// or `"density"` rows of `[re, im]` pairs in place of `"amplitudes"`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<usize>,
    #[serde(default)]
    pub amplitudes: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub density: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default)]
    pub meta: Option<serde_json::Map<String, serde_json::Value>>,
}

/// A loaded input: a pure state or a density matrix.
#[derive(Debug, Clone)]
pub enum Loaded {
    Pure(StateVector),
    Mixed(DensityMatrix),
}

fn parse_err(path: &Path, message: impl Into<String>) -> CliError {
    CliError::Parse {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

fn complex(path: &Path, [re, im]: [f64; 2]) -> Result<Complex64, CliError> {
    if !re.is_finite() || !im.is_finite() {
        return Err(parse_err(path, "non-finite number"));
    }
    Ok(Complex64::new(re, im))
}

pub fn load(path: &Path) -> Result<Loaded, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let file: StateFile =
        serde_json::from_str(&text).map_err(|e| parse_err(path, e.to_string()))?;
    let dims = DimSpec::new(file.dims.clone()).map_err(|e| parse_err(path, e.to_string()))?;
    let n = dims.total_dim();
    match (file.amplitudes, file.density) {
        (Some(amps), None) => {
            if amps.len() != n {
                return Err(parse_err(
                    path,
                    format!("{} amplitudes for dims {dims}, expected {n}", amps.len()),
                ));
            }
            let amps = amps
                .into_iter()
                .map(|p| complex(path, p))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Loaded::Pure(StateVector::new(dims, amps)?))
        }
        (None, Some(rows)) => {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(parse_err(
                    path,
                    format!("density must be {n}x{n} for dims {dims}"),
                ));
            }
            let mut mat = DMatrix::zeros(n, n);
            for (i, row) in rows.into_iter().enumerate() {
                for (j, p) in row.into_iter().enumerate() {
                    mat[(i, j)] = complex(path, p)?;
                }
            }
            Ok(Loaded::Mixed(DensityMatrix::new(dims, mat)?))
        }
        (Some(_), Some(_)) => Err(parse_err(
            path,
            "give either amplitudes or density, not both",
        )),
        (None, None) => Err(parse_err(path, "missing amplitudes")),
    }
}

pub fn load_pure(path: &Path) -> Result<StateVector, CliError> {
    match load(path)? {
        Loaded::Pure(s) => Ok(s),
        Loaded::Mixed(_) => Err(CliError::Precondition(format!(
            "{} holds a density matrix, this command needs a pure state",
            path.display()
        ))),
    }
}

/// Comma-separated qudit positions, e.g. `0,2`.
pub fn parse_positions(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Argument(format!("bad qudit position {t:?} in {s:?}")))
        })
        .collect()
}

pub fn partition(dims: &DimSpec, s: &str) -> Result<Partition, CliError> {
    Ok(Partition::new(dims, parse_positions(s)?)?)
}

pub fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    let z = Complex64::from_str(s.trim())
        .map_err(|_| CliError::Argument(format!("bad complex number {s:?}, expected RE+IMi")))?;
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(CliError::Argument(format!(
            "non-finite complex number {s:?}"
        )));
    }
    Ok(z)
}

/// `vacuum`, `coherent:RE+IMi`, `fock:n`, or a path to a state file.
#[derive(Debug, Clone, PartialEq)]
pub enum CvSpec {
    Vacuum,
    Coherent(Complex64),
    Fock(usize),
    File(PathBuf),
}

impl FromStr for CvSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        if s == "vacuum" {
            return Ok(CvSpec::Vacuum);
        }
        if let Some(z) = s.strip_prefix("coherent:") {
            return Ok(CvSpec::Coherent(parse_complex(z)?));
        }
        if let Some(n) = s.strip_prefix("fock:") {
            return n
                .parse()
                .map(CvSpec::Fock)
                .map_err(|_| CliError::Argument(format!("bad Fock number in {s:?}")));
        }
        Ok(CvSpec::File(PathBuf::from(s)))
    }
}

/// A CV state and the norm its truncation dropped (zero unless coherent).
#[derive(Debug, Clone)]
pub struct CvState {
    pub state: StateVector,
    pub deficit: f64,
}

pub fn cv_state(spec: &CvSpec, cutoff: Option<usize>) -> Result<CvState, CliError> {
    let mode = || FockMode::new(cutoff.unwrap_or(crate::args::DEFAULT_CUTOFF));
    match spec {
        CvSpec::Vacuum => Ok(CvState {
            state: mode()?.number_state(0)?,
            deficit: 0.0,
        }),
        CvSpec::Fock(n) => Ok(CvState {
            state: mode()?.number_state(*n)?,
            deficit: 0.0,
        }),
        CvSpec::Coherent(w) => {
            let t = coherent_state(&mode()?, *w);
            Ok(CvState {
                state: t.state,
                deficit: t.deficit,
            })
        }
        CvSpec::File(path) => {
            let state = load_pure(path)?;
            if let Some(c) = cutoff {
                if state.dims().dims().iter().any(|&d| d != c + 1) {
                    return Err(CliError::Precondition(format!(
                        "--cutoff {c} does not match file dims {}",
                        state.dims()
                    )));
                }
            }
            Ok(CvState {
                state,
                deficit: 0.0,
            })
        }
    }
}
