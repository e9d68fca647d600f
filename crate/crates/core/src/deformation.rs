//! Sign of `Im Δ_ABC` along the two-stage deformation of `C` that shows each
//! sign region of ray space is path connected.
//!
//! Stage one shrinks the component of `C` orthogonal to the `A`–`B` plane to
//! zero; that component never reaches the numerator of `Δ`, so `Im Δ` keeps its
//! sign. Stage two moves the in-plane ray along a great-circle arc on the plane's
//! Poincaré sphere to the pole of its hemisphere, away from the circle through
//! `A` and `B` on which `Im Δ` vanishes.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{dot, norm, project_to_ray, Ray, StateVector, Tolerances};
use crate::pancharatnam::{bargmann_invariant, GeodesicSegment};

/// Sampled `Im Δ` along both stages.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformationTrace {
    pub stage_one: Vec<f64>,
    pub stage_two: Vec<f64>,
}

impl DeformationTrace {
    /// Signs of every sample, stage one first.
    pub fn signs(&self) -> Vec<i8> {
        self.stage_one
            .iter()
            .chain(&self.stage_two)
            .map(|&v| {
                if v > 0.0 {
                    1
                } else if v < 0.0 {
                    -1
                } else {
                    0
                }
            })
            .collect()
    }

    pub fn is_sign_constant(&self) -> bool {
        let signs = self.signs();
        signs
            .first()
            .is_some_and(|&s| s != 0 && signs.iter().all(|&x| x == s))
    }

    /// Smallest `|Im Δ|` seen along the path.
    pub fn min_abs(&self) -> f64 {
        self.stage_one
            .iter()
            .chain(&self.stage_two)
            .fold(f64::INFINITY, |m, v| m.min(v.abs()))
    }
}

fn im_delta(ra: &Ray, rb: &Ray, c: &[Complex64], tol: &Tolerances) -> Result<f64> {
    let rc = project_to_ray(&StateVector::new(c.to_vec())?, tol)?;
    Ok(bargmann_invariant(ra, rb, &rc, tol)?.delta.im)
}

fn grid(steps: usize) -> impl Iterator<Item = f64> {
    let last = (steps.max(2) - 1) as f64;
    (0..steps).map(move |k| if steps == 1 { 0.0 } else { k as f64 / last })
}

/// Samples `Im Δ_ABC` at `steps` points on each stage of the deformation of `C`.
pub fn imdelta_deformation_check(
    ra: &Ray,
    rb: &Ray,
    rc: &Ray,
    steps: usize,
    tol: &Tolerances,
) -> Result<DeformationTrace> {
    if steps == 0 {
        return Err(Error::Domain("steps must be positive".into()));
    }
    let dim = ra.dim();
    for d in [rb.dim(), rc.dim()] {
        if d != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: d,
            });
        }
    }
    if dim < 2 {
        return Err(Error::UnsupportedDimension(
            dim,
            "deformation needs dim >= 2",
        ));
    }
    let start = bargmann_invariant(ra, rb, rc, tol)?.delta.im;
    if start.abs() <= tol.orth_tol {
        return Err(Error::OnBoundary);
    }

    // orthonormal frame (a, u) of the A-B plane
    let a = ra.rep().amplitudes();
    let b = rb.rep().amplitudes();
    let ab = dot(a, b);
    let u_raw: Vec<Complex64> = b.iter().zip(a).map(|(bi, ai)| bi - ab * ai).collect();
    let u_norm = norm(&u_raw);
    if u_norm <= tol.orth_tol {
        return Err(Error::DegenerateTriangle("rays A and B coincide".into()));
    }
    let u: Vec<Complex64> = u_raw.iter().map(|z| z / u_norm).collect();

    let c = rc.rep().amplitudes();
    let (ca, cu) = (dot(a, c), dot(&u, c));
    let parallel: Vec<Complex64> = a.iter().zip(&u).map(|(ai, ui)| ca * ai + cu * ui).collect();
    let perpendicular: Vec<Complex64> = c.iter().zip(&parallel).map(|(ci, pi)| ci - pi).collect();

    let stage_one = grid(steps)
        .map(|t| {
            let ct: Vec<Complex64> = parallel
                .iter()
                .zip(&perpendicular)
                .map(|(p, q)| p + q * (1.0 - t))
                .collect();
            im_delta(ra, rb, &ct, tol)
        })
        .collect::<Result<Vec<_>>>()?;

    // Pole of C's hemisphere: (a ± i u')/√2, with u' rephased so that B's ray is
    // cos(c/2) a + sin(c/2) u' with real coefficients.
    let rephase = ab.conj() / ab.norm();
    let u_aligned: Vec<Complex64> = u.iter().map(|z| z * rephase).collect();
    let side = if start > 0.0 { 1.0 } else { -1.0 };
    let pole_of = |s: f64| -> Result<Ray> {
        let v: Vec<Complex64> = a
            .iter()
            .zip(&u_aligned)
            .map(|(ai, ui)| (ai + ui * Complex64::new(0.0, s)) / 2f64.sqrt())
            .collect();
        project_to_ray(&StateVector::new(v)?, tol)
    };
    let mut pole = pole_of(side)?;
    if (im_delta(ra, rb, pole.rep().amplitudes(), tol)? > 0.0) != (start > 0.0) {
        pole = pole_of(-side)?;
    }

    let c_par = StateVector::new(parallel)?.normalized();
    let stage_two = match GeodesicSegment::new(&c_par, &pole, tol) {
        Ok(seg) => grid(steps)
            .map(|t| im_delta(ra, rb, seg.point(t)?.amplitudes(), tol))
            .collect::<Result<Vec<_>>>()?,
        // already at the pole
        Err(Error::DegenerateGeodesic { .. }) => {
            let v = im_delta(ra, rb, c_par.amplitudes(), tol)?;
            vec![v; steps]
        }
        Err(e) => return Err(e),
    };
    Ok(DeformationTrace {
        stage_one,
        stage_two,
    })
}
