//! Two-state rays on the Poincaré (Bloch) sphere.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{project_to_ray, Ray, StateVector, Tolerances};
use crate::pancharatnam::{bargmann_invariant, holonomy_phase, principal_angle};

/// Relation between the excess phase of a two-state triple and the signed solid
/// angle of its sphere image: `β = ORIENTATION_SIGN · Ω / 2`.
///
/// Pinned by the octant triple `(1,0)`, `(1,1)/√2`, `(1,i)/√2`, for which
/// `β = π/4` and the image `(ẑ, x̂, ŷ)` is positively oriented with `Ω = π/2`.
pub const ORIENTATION_SIGN: f64 = 1.0;

/// Unit vector on the sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SpherePoint {
    pub fn new(x: f64, y: f64, z: f64, tol: &Tolerances) -> Result<Self> {
        let p = Self { x, y, z };
        if (p.dot(&p) - 1.0).abs() > tol.eq_tol {
            return Err(Error::Domain(format!(
                "({x}, {y}, {z}) is not a unit vector"
            )));
        }
        Ok(p)
    }

    /// Unit vector from polar and azimuthal angles.
    pub fn from_angles(polar: f64, azimuth: f64) -> Self {
        Self {
            x: polar.sin() * azimuth.cos(),
            y: polar.sin() * azimuth.sin(),
            z: polar.cos(),
        }
    }

    pub fn dot(&self, o: &Self) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(&self, o: &Self) -> [f64; 3] {
        [
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        ]
    }

    /// Great-circle angle to `o`.
    pub fn angle_to(&self, o: &Self) -> f64 {
        let c = self.cross(o);
        (c[0] * c[0] + c[1] * c[1] + c[2] * c[2])
            .sqrt()
            .atan2(self.dot(o))
    }

    fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

/// Sphere image of a two-state ray: for rep `(α, β)`,
/// `x = 2 Re(ᾱβ)`, `y = 2 Im(ᾱβ)`, `z = |α|² − |β|²`.
pub fn bloch_map(r: &Ray) -> Result<SpherePoint> {
    if r.dim() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            found: r.dim(),
        });
    }
    let a = r.rep().amplitudes();
    let cross = a[0].conj() * a[1];
    let (x, y, z) = (
        2.0 * cross.re,
        2.0 * cross.im,
        a[0].norm_sqr() - a[1].norm_sqr(),
    );
    let n = (x * x + y * y + z * z).sqrt();
    Ok(SpherePoint {
        x: x / n,
        y: y / n,
        z: z / n,
    })
}

/// Inverse of [`bloch_map`].
pub fn ray_from_sphere(p: &SpherePoint, tol: &Tolerances) -> Result<Ray> {
    let polar = p.z.clamp(-1.0, 1.0).acos();
    let azimuth = p.y.atan2(p.x);
    let v = StateVector::from_pairs(&[
        ((polar / 2.0).cos(), 0.0),
        (
            (polar / 2.0).sin() * azimuth.cos(),
            (polar / 2.0).sin() * azimuth.sin(),
        ),
    ])?;
    project_to_ray(&v, tol)
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm3(a: [f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Interior angle at `v` of the spherical triangle with neighbours `p` and `q`.
fn vertex_angle(v: &SpherePoint, p: &SpherePoint, q: &SpherePoint) -> f64 {
    let va = v.as_array();
    let tp = sub(p.as_array(), va.map(|c| c * v.dot(p)));
    let tq = sub(q.as_array(), va.map(|c| c * v.dot(q)));
    norm3(cross3(tp, tq)).atan2(dot3(tp, tq))
}

/// Signed solid angle of the geodesic triangle `(p1, p2, p3)`: the spherical
/// excess `A + B + C − π`, signed by the orientation `sign(p1 · (p2 × p3))`.
pub fn solid_angle(
    p1: &SpherePoint,
    p2: &SpherePoint,
    p3: &SpherePoint,
    tol: &Tolerances,
) -> Result<f64> {
    for (a, b, label) in [(p1, p2, "1,2"), (p2, p3, "2,3"), (p3, p1, "3,1")] {
        let d = a.dot(b);
        if d >= 1.0 - tol.orth_tol {
            return Err(Error::DegenerateTriangle(format!(
                "points {label} coincide"
            )));
        }
        if d <= -1.0 + tol.orth_tol {
            return Err(Error::DegenerateTriangle(format!(
                "points {label} are antipodal"
            )));
        }
    }
    let excess =
        vertex_angle(p1, p2, p3) + vertex_angle(p2, p3, p1) + vertex_angle(p3, p1, p2) - PI;
    let orientation = dot3(p1.as_array(), p2.cross(p3));
    Ok(if orientation < 0.0 { -excess } else { excess })
}

/// Comparison of the excess phase with half the solid angle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfSolidAngleReport {
    pub beta: f64,
    pub solid_angle: f64,
    pub half: f64,
    pub sign: i32,
    pub residual: f64,
}

pub fn check_half_solid_angle(
    ra: &Ray,
    rb: &Ray,
    rc: &Ray,
    tol: &Tolerances,
) -> Result<HalfSolidAngleReport> {
    let (pa, pb, pc) = (bloch_map(ra)?, bloch_map(rb)?, bloch_map(rc)?);
    let omega = solid_angle(&pa, &pb, &pc, tol)?;
    let beta = bargmann_invariant(ra, rb, rc, tol)?
        .beta
        .ok_or_else(|| Error::DegenerateTriangle("Bargmann invariant vanishes".into()))?;
    let half = omega / 2.0;
    Ok(HalfSolidAngleReport {
        beta,
        solid_angle: omega,
        half,
        sign: ORIENTATION_SIGN as i32,
        residual: principal_angle(beta - ORIENTATION_SIGN * half).abs(),
    })
}

/// Rays at polar angle `polar` and `n` equally spaced azimuths, in increasing
/// azimuth order.
pub fn small_circle(polar: f64, n: usize, tol: &Tolerances) -> Result<Vec<Ray>> {
    (0..n)
        .map(|k| {
            ray_from_sphere(
                &SpherePoint::from_angles(polar, TAU * k as f64 / n as f64),
                tol,
            )
        })
        .collect()
}

/// Excess phase of the closed `n`-gon of rays on the circle of polar angle
/// `polar`, recovered from the holonomy of its discrete Pancharatnam lift.
///
/// Tends to `ORIENTATION_SIGN · π (1 − cos polar)` (mod 2π) as `n` grows.
pub fn small_circle_phase(polar: f64, n: usize, tol: &Tolerances) -> Result<f64> {
    if !(polar > 0.0 && polar < PI) {
        return Err(Error::Domain(format!("polar angle {polar} outside (0, π)")));
    }
    if n < 3 {
        return Err(Error::Domain(format!("need at least 3 points, got {n}")));
    }
    let rays = small_circle(polar, n, tol)?;
    Ok(principal_angle(
        holonomy_phase(&rays, tol)? / crate::pancharatnam::HOLONOMY_SIGN,
    ))
}

/// Limit of [`small_circle_phase`]: half the solid angle of the polar cap, wrapped.
pub fn cap_phase(polar: f64) -> f64 {
    principal_angle(ORIENTATION_SIGN * PI * (1.0 - polar.cos()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{random_ray, ray_distance};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn ray(pairs: &[(f64, f64)]) -> Ray {
        project_to_ray(&StateVector::from_pairs(pairs).unwrap(), &tol()).unwrap()
    }

    fn octant() -> (Ray, Ray, Ray) {
        (
            ray(&[(1.0, 0.0), (0.0, 0.0)]),
            ray(&[(1.0, 0.0), (1.0, 0.0)]),
            ray(&[(1.0, 0.0), (0.0, 1.0)]),
        )
    }

    fn assert_point(p: SpherePoint, x: f64, y: f64, z: f64) {
        assert_abs_diff_eq!(p.x, x, epsilon = 1e-15);
        assert_abs_diff_eq!(p.y, y, epsilon = 1e-15);
        assert_abs_diff_eq!(p.z, z, epsilon = 1e-15);
    }

    #[test]
    fn bloch_map_examples() {
        let (a, b, c) = octant();
        assert_point(bloch_map(&a).unwrap(), 0.0, 0.0, 1.0);
        assert_point(bloch_map(&b).unwrap(), 1.0, 0.0, 0.0);
        assert_point(bloch_map(&c).unwrap(), 0.0, 1.0, 0.0);
        let r3 = ray(&[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
        assert!(matches!(bloch_map(&r3), Err(Error::Dimension { .. })));
    }

    #[test]
    fn bloch_map_is_an_isometry() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..500 {
            let (r1, r2) = (
                random_ray(2, &mut rng, &tol()),
                random_ray(2, &mut rng, &tol()),
            );
            let d = ray_distance(&r1, &r2).unwrap();
            let g = bloch_map(&r1).unwrap().angle_to(&bloch_map(&r2).unwrap());
            assert!((d - g).abs() < 1e-7, "{d} vs {g}");
            let back = ray_from_sphere(&bloch_map(&r1).unwrap(), &tol()).unwrap();
            assert!(back.approx_eq(&r1, &tol()));
        }
    }

    #[test]
    fn octant_solid_angle() {
        let t = tol();
        let z = SpherePoint::new(0.0, 0.0, 1.0, &t).unwrap();
        let x = SpherePoint::new(1.0, 0.0, 0.0, &t).unwrap();
        let y = SpherePoint::new(0.0, 1.0, 0.0, &t).unwrap();
        assert_abs_diff_eq!(
            solid_angle(&z, &x, &y, &t).unwrap(),
            FRAC_PI_2,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            solid_angle(&z, &y, &x, &t).unwrap(),
            -FRAC_PI_2,
            epsilon = 1e-15
        );
        assert!(matches!(
            solid_angle(&z, &z, &y, &t),
            Err(Error::DegenerateTriangle(_))
        ));
        let south = SpherePoint::new(0.0, 0.0, -1.0, &t).unwrap();
        assert!(matches!(
            solid_angle(&z, &x, &south, &t),
            Err(Error::DegenerateTriangle(_))
        ));
        assert!(SpherePoint::new(1.0, 1.0, 0.0, &t).is_err());
    }

    /// Fraction of uniform sphere samples that fall inside the triangle, times 4π.
    fn monte_carlo_area(p: [SpherePoint; 3], samples: usize, rng: &mut ChaCha8Rng) -> f64 {
        let orient = dot3(p[0].as_array(), p[1].cross(&p[2])).signum();
        let normals = [p[0].cross(&p[1]), p[1].cross(&p[2]), p[2].cross(&p[0])];
        let mut inside = 0usize;
        for _ in 0..samples {
            let z: f64 = rng.random_range(-1.0..1.0);
            let phi: f64 = rng.random_range(0.0..TAU);
            let r = (1.0 - z * z).sqrt();
            let q = [r * phi.cos(), r * phi.sin(), z];
            if normals.iter().all(|n| dot3(*n, q) * orient > 0.0) {
                inside += 1;
            }
        }
        4.0 * PI * inside as f64 / samples as f64
    }

    #[test]
    fn solid_angle_matches_monte_carlo() {
        let t = tol();
        let mut rng = ChaCha8Rng::seed_from_u64(4242);
        for _ in 0..3 {
            let p: [SpherePoint; 3] =
                std::array::from_fn(|_| bloch_map(&random_ray(2, &mut rng, &t)).unwrap());
            let omega = solid_angle(&p[0], &p[1], &p[2], &t).unwrap();
            let mc = monte_carlo_area(p, 1_000_000, &mut rng);
            assert!((omega.abs() - mc).abs() < 0.01, "Ω = {omega}, MC = {mc}");
        }
    }

    #[test]
    fn solid_angle_matches_tangent_half_angle_formula() {
        // tan(Ω/2) = p1·(p2×p3) / (1 + p1·p2 + p2·p3 + p3·p1)
        let t = tol();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..1000 {
            let p: [SpherePoint; 3] =
                std::array::from_fn(|_| bloch_map(&random_ray(2, &mut rng, &t)).unwrap());
            let omega = solid_angle(&p[0], &p[1], &p[2], &t).unwrap();
            let num = dot3(p[0].as_array(), p[1].cross(&p[2]));
            let den = 1.0 + p[0].dot(&p[1]) + p[1].dot(&p[2]) + p[2].dot(&p[0]);
            let reference = 2.0 * num.atan2(den);
            assert!(principal_angle(omega - reference).abs() < 1e-9);
        }
    }

    #[test]
    fn half_solid_angle_octant_and_random() {
        let t = tol();
        let (a, b, c) = octant();
        let r = check_half_solid_angle(&a, &b, &c, &t).unwrap();
        assert_abs_diff_eq!(r.beta, FRAC_PI_4, epsilon = 1e-15);
        assert_abs_diff_eq!(r.half, FRAC_PI_4, epsilon = 1e-15);
        assert_eq!(r.sign, 1);
        assert!(r.residual < 1e-15);
        assert!(check_half_solid_angle(&a, &a, &c, &t).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut worst = 0.0f64;
        for _ in 0..1000 {
            let (a, b, c) = (
                random_ray(2, &mut rng, &t),
                random_ray(2, &mut rng, &t),
                random_ray(2, &mut rng, &t),
            );
            worst = worst.max(check_half_solid_angle(&a, &b, &c, &t).unwrap().residual);
        }
        assert!(worst < 1e-8, "max residual {worst}");
    }

    #[test]
    fn small_circle_examples() {
        let t = tol();
        // equatorial triangle: Δ = ((1 + e^{2πi/3})/2)^3 = −1/8, so |β| = π
        let phase = small_circle_phase(FRAC_PI_2, 3, &t).unwrap();
        assert_abs_diff_eq!(phase.abs(), PI, epsilon = 1e-12);
        let rays = small_circle(FRAC_PI_2, 3, &t).unwrap();
        let d = bargmann_invariant(&rays[0], &rays[1], &rays[2], &t).unwrap();
        assert_abs_diff_eq!(d.delta.re, -0.125, epsilon = 1e-15);

        assert!(small_circle_phase(1e-4, 5, &t).unwrap().abs() < 1e-7);

        let phase = small_circle_phase(FRAC_PI_3, 512, &t).unwrap();
        assert!((phase - cap_phase(FRAC_PI_3)).abs() < 1e-3);
        assert_abs_diff_eq!(cap_phase(FRAC_PI_3), FRAC_PI_2, epsilon = 1e-15);

        assert!(matches!(
            small_circle_phase(0.0, 8, &t),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            small_circle_phase(PI, 8, &t),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            small_circle_phase(1.0, 2, &t),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn small_circle_error_decreases_with_n() {
        let t = tol();
        for polar in [0.3, FRAC_PI_3, 2.0] {
            let errs: Vec<f64> = [8usize, 32, 128, 512]
                .iter()
                .map(|&n| {
                    principal_angle(small_circle_phase(polar, n, &t).unwrap() - cap_phase(polar))
                        .abs()
                })
                .collect();
            assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
        }
    }
}
