//! Black-box maps on ray space.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::hilbert::{overlap, project_to_ray, random_ray, Ray, StateVector, Tolerances};
use crate::linalg::CMatrix;

/// Signature of a user-supplied ray map.
pub type RayFn = dyn Fn(&Ray) -> Result<Ray> + Send + Sync;

/// A map `T: R → R` on the rays of a `dim`-dimensional space.
#[derive(Clone)]
pub enum RayMapOracle {
    /// `Ψ ↦ Π(M·ψ)`.
    Linear(CMatrix),
    /// `Ψ ↦ Π(M·ψ̄)`, conjugation in the computational basis.
    Antilinear(CMatrix),
    /// Finitely many `(input, image)` pairs.
    Table {
        dim: usize,
        entries: Vec<(Ray, Ray)>,
    },
    /// Applies the inner maps left to right.
    Composite(Vec<RayMapOracle>),
    Callable {
        dim: usize,
        f: Arc<RayFn>,
    },
}

impl fmt::Debug for RayMapOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Linear(m) => f.debug_tuple("Linear").field(m).finish(),
            Self::Antilinear(m) => f.debug_tuple("Antilinear").field(m).finish(),
            Self::Table { dim, entries } => f
                .debug_struct("Table")
                .field("dim", dim)
                .field("entries", &entries.len())
                .finish(),
            Self::Composite(parts) => f.debug_tuple("Composite").field(parts).finish(),
            Self::Callable { dim, .. } => f.debug_struct("Callable").field("dim", dim).finish(),
        }
    }
}

fn check_invertible(m: &CMatrix, tol: &Tolerances) -> Result<()> {
    let scale = m
        .rows()
        .flatten()
        .map(|z| z.norm())
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let det = m.determinant().norm() / scale.powi(m.dim() as i32);
    if !(det > tol.orth_tol) {
        return Err(Error::InvalidInput("oracle matrix is singular".into()));
    }
    Ok(())
}

impl RayMapOracle {
    pub fn linear(m: CMatrix, tol: &Tolerances) -> Result<Self> {
        check_invertible(&m, tol)?;
        Ok(Self::Linear(m))
    }

    pub fn antilinear(m: CMatrix, tol: &Tolerances) -> Result<Self> {
        check_invertible(&m, tol)?;
        Ok(Self::Antilinear(m))
    }

    pub fn identity(dim: usize) -> Self {
        Self::Linear(CMatrix::identity(dim))
    }

    /// Complex conjugation of amplitudes.
    pub fn conjugation(dim: usize) -> Self {
        Self::Antilinear(CMatrix::identity(dim))
    }

    pub fn table(entries: Vec<(Ray, Ray)>) -> Result<Self> {
        let dim = entries
            .first()
            .map(|(r, _)| r.dim())
            .ok_or_else(|| Error::InvalidInput("empty oracle table".into()))?;
        for (a, b) in &entries {
            for d in [a.dim(), b.dim()] {
                if d != dim {
                    return Err(Error::Dimension {
                        expected: dim,
                        found: d,
                    });
                }
            }
        }
        Ok(Self::Table { dim, entries })
    }

    pub fn composite(parts: Vec<RayMapOracle>) -> Result<Self> {
        let dim = parts
            .first()
            .map(|p| p.dim())
            .ok_or_else(|| Error::InvalidInput("empty composite oracle".into()))?;
        if let Some(p) = parts.iter().find(|p| p.dim() != dim) {
            return Err(Error::Dimension {
                expected: dim,
                found: p.dim(),
            });
        }
        Ok(Self::Composite(parts))
    }

    pub fn callable<F>(dim: usize, f: F) -> Self
    where
        F: Fn(&Ray) -> Result<Ray> + Send + Sync + 'static,
    {
        Self::Callable {
            dim,
            f: Arc::new(f),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Linear(m) | Self::Antilinear(m) => m.dim(),
            Self::Table { dim, .. } | Self::Callable { dim, .. } => *dim,
            Self::Composite(parts) => parts[0].dim(),
        }
    }

    /// The underlying matrix and whether it acts antilinearly, for matrix kinds.
    pub fn matrix(&self) -> Option<(&CMatrix, bool)> {
        match self {
            Self::Linear(m) => Some((m, false)),
            Self::Antilinear(m) => Some((m, true)),
            _ => None,
        }
    }

    pub fn apply(&self, r: &Ray, tol: &Tolerances) -> Result<Ray> {
        if r.dim() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: r.dim(),
            });
        }
        match self {
            Self::Linear(m) => {
                project_to_ray(&StateVector::new(m.mul_vec(r.rep().amplitudes()))?, tol)
            }
            Self::Antilinear(m) => {
                let conj: Vec<Complex64> = r.rep().amplitudes().iter().map(|z| z.conj()).collect();
                project_to_ray(&StateVector::new(m.mul_vec(&conj))?, tol)
            }
            Self::Table { entries, .. } => entries
                .iter()
                .find(|(from, _)| from.approx_eq(r, tol))
                .map(|(_, to)| to.clone())
                .ok_or(Error::NotCovered),
            Self::Composite(parts) => parts
                .iter()
                .try_fold(r.clone(), |acc, p| p.apply(&acc, tol)),
            Self::Callable { f, .. } => f(r),
        }
    }

    /// Rays on which the oracle is known to be defined, for table kinds.
    pub(crate) fn domain(&self) -> Option<Vec<Ray>> {
        match self {
            Self::Table { entries, .. } => Some(entries.iter().map(|(r, _)| r.clone()).collect()),
            _ => None,
        }
    }
}

/// Outcome of the sampled isometry test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsometryCheck {
    pub is_isometry: bool,
    /// Largest `| |A'·B'| − |A·B| |` seen.
    pub max_deviation: f64,
}

/// Compares overlaps before and after the map on `trials` random ray pairs
/// (for table oracles, on every pair of tabulated rays).
pub fn is_isometry_sampled<R: Rng + ?Sized>(
    map: &RayMapOracle,
    trials: usize,
    rng: &mut R,
    tol: &Tolerances,
) -> Result<IsometryCheck> {
    let mut worst = 0.0f64;
    let mut record = |a: &Ray, b: &Ray| -> Result<()> {
        let before = overlap(a, b)?;
        let after = overlap(&map.apply(a, tol)?, &map.apply(b, tol)?)?;
        worst = worst.max((after - before).abs());
        Ok(())
    };
    if let Some(domain) = map.domain() {
        for (i, a) in domain.iter().enumerate() {
            for b in &domain[i + 1..] {
                record(a, b)?;
            }
        }
    } else {
        let dim = map.dim();
        for _ in 0..trials.max(1) {
            let a = random_ray(dim, rng, tol);
            let b = random_ray(dim, rng, tol);
            record(&a, &b)?;
        }
    }
    Ok(IsometryCheck {
        is_isometry: worst < tol.eq_tol,
        max_deviation: worst,
    })
}
