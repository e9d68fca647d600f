//! JSON file forms.
//!
//! * state: `{"dim": n, "amp": [[re, im], ...]}`
//! * oracle: `{"dim": n, "kind": "unitary"|"antiunitary", "matrix": [[[re, im], ...], ...]}`
//!   (row major)
//! * lifted symmetry: the oracle form plus `"antiunitary"`, `"reference"`,
//!   `"reference_image"` and `"chi"`.
//!
//! Doubles are written in shortest round-trip form, so parse → serialize is
//! byte-stable.

use std::path::Path;

use num_complex::Complex64;
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{project_to_ray, Ray, StateVector, Tolerances};
use crate::linalg::CMatrix;
use crate::oracle::RayMapOracle;
use crate::wigner::{ChiKind, LiftedSymmetry};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateJson {
    pub dim: usize,
    pub amp: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    Unitary,
    Antiunitary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleJson {
    pub dim: usize,
    pub kind: MatrixKind,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftedSymmetryJson {
    pub dim: usize,
    pub kind: MatrixKind,
    pub antiunitary: bool,
    pub matrix: Vec<Vec<[f64; 2]>>,
    pub reference: StateJson,
    pub reference_image: StateJson,
    pub chi: ChiKind,
}

fn pair(z: &Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn complex(p: &[f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

impl From<&StateVector> for StateJson {
    fn from(v: &StateVector) -> Self {
        Self {
            dim: v.dim(),
            amp: v.amplitudes().iter().map(pair).collect(),
        }
    }
}

impl TryFrom<&StateJson> for StateVector {
    type Error = Error;
    fn try_from(j: &StateJson) -> Result<Self> {
        if j.amp.len() != j.dim {
            return Err(Error::Parse(format!(
                "\"dim\" is {} but {} amplitudes were given",
                j.dim,
                j.amp.len()
            )));
        }
        StateVector::new(j.amp.iter().map(complex).collect())
    }
}

fn matrix_json(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    m.rows().map(|row| row.iter().map(pair).collect()).collect()
}

fn matrix_from_json(dim: usize, rows: &[Vec<[f64; 2]>]) -> Result<CMatrix> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::Parse(format!("matrix must be {dim}x{dim}")));
    }
    CMatrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(complex).collect())
            .collect(),
    )
}

impl OracleJson {
    pub fn from_matrix(m: &CMatrix, antiunitary: bool) -> Self {
        Self {
            dim: m.dim(),
            kind: if antiunitary {
                MatrixKind::Antiunitary
            } else {
                MatrixKind::Unitary
            },
            matrix: matrix_json(m),
        }
    }

    pub fn to_oracle(&self, tol: &Tolerances) -> Result<RayMapOracle> {
        let m = matrix_from_json(self.dim, &self.matrix)?;
        match self.kind {
            MatrixKind::Unitary => RayMapOracle::linear(m, tol),
            MatrixKind::Antiunitary => RayMapOracle::antilinear(m, tol),
        }
    }
}

impl From<&LiftedSymmetry> for LiftedSymmetryJson {
    fn from(l: &LiftedSymmetry) -> Self {
        Self {
            dim: l.dim(),
            kind: if l.antiunitary {
                MatrixKind::Antiunitary
            } else {
                MatrixKind::Unitary
            },
            antiunitary: l.antiunitary,
            matrix: matrix_json(&l.matrix),
            reference: (&l.reference).into(),
            reference_image: (&l.reference_image).into(),
            chi: l.chi(),
        }
    }
}

impl TryFrom<&LiftedSymmetryJson> for LiftedSymmetry {
    type Error = Error;
    fn try_from(j: &LiftedSymmetryJson) -> Result<Self> {
        let antiunitary = j.kind == MatrixKind::Antiunitary;
        if antiunitary != j.antiunitary || j.chi.is_antiunitary() != antiunitary {
            return Err(Error::Parse(
                "\"kind\", \"antiunitary\" and \"chi\" disagree".into(),
            ));
        }
        Ok(Self {
            matrix: matrix_from_json(j.dim, &j.matrix)?,
            antiunitary,
            reference: (&j.reference).try_into()?,
            reference_image: (&j.reference_image).try_into()?,
        })
    }
}

pub fn from_json_str<T: DeserializeOwned>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes")
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn parse_state(s: &str) -> Result<StateVector> {
    (&from_json_str::<StateJson>(s)?).try_into()
}

pub fn state_to_json(v: &StateVector) -> String {
    to_json_string(&StateJson::from(v))
}

/// A ray is written as its canonical representative.
pub fn ray_to_json(r: &Ray) -> String {
    state_to_json(r.rep())
}

pub fn read_state(path: &Path) -> Result<StateVector> {
    parse_state(&read(path)?)
}

pub fn read_ray(path: &Path, tol: &Tolerances) -> Result<Ray> {
    project_to_ray(&read_state(path)?, tol)
}

pub fn parse_oracle(s: &str, tol: &Tolerances) -> Result<RayMapOracle> {
    from_json_str::<OracleJson>(s)?.to_oracle(tol)
}

pub fn read_oracle(path: &Path, tol: &Tolerances) -> Result<RayMapOracle> {
    parse_oracle(&read(path)?, tol)
}

pub fn parse_lifted(s: &str) -> Result<LiftedSymmetry> {
    (&from_json_str::<LiftedSymmetryJson>(s)?).try_into()
}

pub fn lifted_to_json(l: &LiftedSymmetry) -> String {
    to_json_pretty(&LiftedSymmetryJson::from(l))
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
