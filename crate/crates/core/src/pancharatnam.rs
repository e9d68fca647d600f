//! The Pancharatnam connection.
//!
//! Two non-orthogonal vectors are *in phase* when their inner product is real and
//! positive. Fixing a reference vector, every non-orthogonal ray has exactly one
//! representative in phase with it and of the same norm (its Pancharatnam lift).
//! Folding that rule around a loop of rays produces a phase governed by the
//! Bargmann invariant
//!
//! ```text
//! Δ_ABC = <A|B><B|C><C|A> / (<A|A><B|B><C|C>) = ρ e^{iβ}
//! ```
//!
//! and the geodesic triangle spanned by the three rays ties `cos β` to the
//! sides `(a, b, c)` and the vertex angle `A`:
//!
//! ```text
//! cos A = (cos(a/2) cos β − cos(b/2) cos(c/2)) / (sin(c/2) sin(b/2))
//! cos β = (cos A sin(c/2) sin(b/2) + cos(b/2) cos(c/2)) / cos(a/2)
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{dot, inner_product, overlap, project_to_ray, Ray, StateVector, Tolerances};

/// Transporting a vector once around the loop A→B→C→A with Pancharatnam lifts
/// multiplies it by `exp(i · HOLONOMY_SIGN · β)`, β the phase of `Δ_ABC`.
pub const HOLONOMY_SIGN: f64 = -1.0;

/// True iff `<a|b>` is real and positive. Orthogonal inputs have no phase relation.
pub fn in_phase(a: &StateVector, b: &StateVector, tol: &Tolerances) -> Result<bool> {
    let z = inner_product(a, b)?;
    let m = z.norm();
    if m <= tol.orth_tol * a.norm() * b.norm() {
        return Err(Error::Orthogonality { index: None });
    }
    Ok(z.im.abs() <= tol.eq_tol * m && z.re > 0.0)
}

/// The representative of `target` in phase with `reference` and of the same norm.
pub fn pancharatnam_lift(
    reference: &StateVector,
    target: &Ray,
    tol: &Tolerances,
) -> Result<StateVector> {
    let rep = target.rep();
    let z = inner_product(rep, reference)?;
    let r = reference.norm();
    let m = z.norm();
    if m <= tol.orth_tol * r {
        return Err(Error::Orthogonality { index: None });
    }
    rep.scaled(z * (r / m))
}

/// `Δ` together with its modulus and (when defined) its phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BargmannInvariant {
    pub delta: Complex64,
    pub rho: f64,
    /// Phase in `(−π, π]`; `None` when `rho <= orth_tol`.
    pub beta: Option<f64>,
}

impl BargmannInvariant {
    pub fn from_delta(delta: Complex64, tol: &Tolerances) -> Self {
        let rho = delta.norm();
        let beta = (rho > tol.orth_tol).then(|| principal_angle(delta.arg()));
        Self { delta, rho, beta }
    }

    pub fn cos_beta(&self) -> Option<f64> {
        (self.rho > 0.0 && self.beta.is_some()).then(|| self.delta.re / self.rho)
    }
}

/// Maps an angle onto `(−π, π]`.
pub fn principal_angle(x: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let mut y = x.rem_euclid(TAU);
    if y > PI {
        y -= TAU;
    }
    y
}

/// Bargmann invariant of three rays.
pub fn bargmann_invariant(
    ra: &Ray,
    rb: &Ray,
    rc: &Ray,
    tol: &Tolerances,
) -> Result<BargmannInvariant> {
    let delta = bargmann_from_vectors(ra.rep(), rb.rep(), rc.rep())?;
    Ok(BargmannInvariant::from_delta(delta, tol))
}

/// `Δ` evaluated directly on arbitrary (not necessarily normalized) representatives.
pub fn bargmann_from_vectors(
    a: &StateVector,
    b: &StateVector,
    c: &StateVector,
) -> Result<Complex64> {
    let num = inner_product(a, b)? * inner_product(b, c)? * inner_product(c, a)?;
    Ok(num / (a.norm_sqr() * b.norm_sqr() * c.norm_sqr()))
}

/// Horizontal lift of the shortest geodesic from `start`'s ray to a target ray.
#[derive(Debug, Clone)]
pub struct GeodesicSegment {
    pub start: StateVector,
    /// Pancharatnam lift of the target ray with `start` as reference.
    pub end: StateVector,
    /// Unit vector along the component of `end` orthogonal to `start`.
    pub mu_hat: StateVector,
    /// Fubini-Study length, in `(0, π)`.
    pub length: f64,
}

impl GeodesicSegment {
    pub fn new(start: &StateVector, target: &Ray, tol: &Tolerances) -> Result<Self> {
        if start.dim() != target.dim() {
            return Err(Error::Dimension {
                expected: start.dim(),
                found: target.dim(),
            });
        }
        if (start.norm() - 1.0).abs() > tol.eq_tol {
            return Err(Error::InvalidInput(format!(
                "geodesic start must have unit norm (got {})",
                start.norm()
            )));
        }
        let ov = overlap(&project_to_ray(start, tol)?, target)?;
        if !(ov > tol.orth_tol && ov < 1.0 - tol.orth_tol) {
            return Err(Error::DegenerateGeodesic { overlap: ov });
        }
        let end = pancharatnam_lift(start, target, tol)?;
        let cos_half = dot(start.amplitudes(), end.amplitudes()).re;
        let mu: Vec<Complex64> = end
            .amplitudes()
            .iter()
            .zip(start.amplitudes())
            .map(|(b, a)| b - a * cos_half)
            .collect();
        let sin_half = crate::hilbert::norm(&mu);
        let mu_hat = StateVector::new(mu.into_iter().map(|z| z / sin_half).collect())?;
        Ok(Self {
            start: start.clone(),
            end,
            mu_hat,
            length: 2.0 * sin_half.atan2(cos_half),
        })
    }

    fn combine(&self, s: f64, m: f64) -> Vec<Complex64> {
        self.start
            .amplitudes()
            .iter()
            .zip(self.mu_hat.amplitudes())
            .map(|(a, u)| a * s + u * m)
            .collect()
    }

    /// Point at parameter `lambda ∈ [0, 1]`.
    pub fn point(&self, lambda: f64) -> Result<StateVector> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::Domain(format!("lambda = {lambda} outside [0, 1]")));
        }
        let h = self.length / 2.0;
        StateVector::new(self.combine((lambda * h).cos(), (lambda * h).sin()))
    }

    /// `dγ/dλ` at `lambda`; at 0 this is `(length/2) · mu_hat`.
    pub fn tangent(&self, lambda: f64) -> Vec<Complex64> {
        let h = self.length / 2.0;
        self.combine(-h * (lambda * h).sin(), h * (lambda * h).cos())
    }
}

/// Point at `lambda` on the horizontal lift, starting at `a_vec`, of the shortest
/// geodesic to `b_ray`.
pub fn horizontal_geodesic(
    a_vec: &StateVector,
    b_ray: &Ray,
    lambda: f64,
    tol: &Tolerances,
) -> Result<StateVector> {
    GeodesicSegment::new(a_vec, b_ray, tol)?.point(lambda)
}

/// Lifts a discrete sequence of rays by successive Pancharatnam lifts, returning
/// the last lifted vector.
pub fn discrete_lift(curve: &[Ray], start: &StateVector, tol: &Tolerances) -> Result<StateVector> {
    let first = curve
        .first()
        .ok_or_else(|| Error::InvalidInput("empty curve".into()))?;
    if !project_to_ray(start, tol)?.approx_eq(first, tol) {
        return Err(Error::InvalidInput(
            "start vector does not lie on the first ray of the curve".into(),
        ));
    }
    curve
        .iter()
        .enumerate()
        .skip(1)
        .try_fold(start.clone(), |v, (i, ray)| {
            pancharatnam_lift(&v, ray, tol).map_err(|e| match e {
                Error::Orthogonality { .. } => Error::Orthogonality { index: Some(i) },
                other => other,
            })
        })
}

/// Phase acquired by the canonical representative of `rays[0]` when lifted
/// around the closed loop `rays[0] → … → rays[n−1] → rays[0]`.
pub fn holonomy_phase(rays: &[Ray], tol: &Tolerances) -> Result<f64> {
    let first = rays
        .first()
        .ok_or_else(|| Error::InvalidInput("empty loop".into()))?;
    let mut closed = rays.to_vec();
    closed.push(first.clone());
    let end = discrete_lift(&closed, first.rep(), tol)?;
    Ok(inner_product(first.rep(), &end)?.arg())
}

/// Sides and the angle at the first vertex of a ray-space geodesic triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicTriangle {
    /// δ(B, C)
    pub a: f64,
    /// δ(C, A)
    pub b: f64,
    /// δ(A, B)
    pub c: f64,
    /// Angle at vertex A, in `[0, π]`.
    pub angle_a: f64,
}

fn checked_overlap(r1: &Ray, r2: &Ray, label: &str, tol: &Tolerances) -> Result<f64> {
    let o = overlap(r1, r2)?;
    if o >= 1.0 - tol.orth_tol {
        return Err(Error::DegenerateTriangle(format!("rays {label} coincide")));
    }
    if o <= tol.orth_tol {
        return Err(Error::DegenerateTriangle(format!(
            "rays {label} are orthogonal"
        )));
    }
    Ok(o)
}

/// Sides from pairwise distances and the angle at A from the closed-form cosine rule.
pub fn triangle_geometry(
    ra: &Ray,
    rb: &Ray,
    rc: &Ray,
    tol: &Tolerances,
) -> Result<GeodesicTriangle> {
    let cos_c = checked_overlap(ra, rb, "A,B", tol)?;
    let cos_b = checked_overlap(rc, ra, "C,A", tol)?;
    let cos_a = checked_overlap(rb, rc, "B,C", tol)?;
    let inv = bargmann_invariant(ra, rb, rc, tol)?;
    let cos_beta = inv
        .cos_beta()
        .ok_or_else(|| Error::DegenerateTriangle("Bargmann invariant vanishes".into()))?;
    let sin_b = (1.0 - cos_b * cos_b).sqrt();
    let sin_c = (1.0 - cos_c * cos_c).sqrt();
    let cos_angle = (cos_a * cos_beta - cos_b * cos_c) / (sin_c * sin_b);
    if cos_angle.abs() > 1.0 + tol.eq_tol {
        return Err(Error::Consistency(format!(
            "cosine of vertex angle is {cos_angle}"
        )));
    }
    Ok(GeodesicTriangle {
        a: 2.0 * cos_a.acos(),
        b: 2.0 * cos_b.acos(),
        c: 2.0 * cos_c.acos(),
        angle_a: cos_angle.clamp(-1.0, 1.0).acos(),
    })
}

/// Angle at A between the geodesics A→B and A→C, measured from the tangent
/// vectors of their horizontal lifts: `cos A = Re<γ̇_B|γ̇_C> / (|γ̇_B| |γ̇_C|)`.
pub fn vertex_angle_from_tangents(ra: &Ray, rb: &Ray, rc: &Ray, tol: &Tolerances) -> Result<f64> {
    let to_b = GeodesicSegment::new(ra.rep(), rb, tol)?;
    let to_c = GeodesicSegment::new(ra.rep(), rc, tol)?;
    let tb = to_b.tangent(0.0);
    let tc = to_c.tangent(0.0);
    let cos_angle = dot(&tb, &tc).re / (crate::hilbert::norm(&tb) * crate::hilbert::norm(&tc));
    Ok(cos_angle.clamp(-1.0, 1.0).acos())
}

/// `cos β` recovered from the isometry invariants `(a, b, c, A)`.
pub fn cos_beta_from_triangle(tri: &GeodesicTriangle) -> f64 {
    let (hb, hc) = (tri.b / 2.0, tri.c / 2.0);
    (tri.angle_a.cos() * hc.sin() * hb.sin() + hb.cos() * hc.cos()) / (tri.a / 2.0).cos()
}

/// Machine-readable summary of a ray triple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriangleReport {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    #[serde(rename = "angleA")]
    pub angle_a: f64,
    pub rho: f64,
    pub beta: Option<f64>,
    pub cos_beta_formula: f64,
    pub cos_beta_direct: f64,
}

pub fn triangle_report(ra: &Ray, rb: &Ray, rc: &Ray, tol: &Tolerances) -> Result<TriangleReport> {
    let tri = triangle_geometry(ra, rb, rc, tol)?;
    let inv = bargmann_invariant(ra, rb, rc, tol)?;
    Ok(TriangleReport {
        a: tri.a,
        b: tri.b,
        c: tri.c,
        angle_a: tri.angle_a,
        rho: inv.rho,
        beta: inv.beta,
        cos_beta_formula: cos_beta_from_triangle(&tri),
        cos_beta_direct: inv.cos_beta().unwrap_or(f64::NAN),
    })
}
