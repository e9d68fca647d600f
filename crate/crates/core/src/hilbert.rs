//! Complex amplitude vectors, the ray quotient and the overlap metric on ray space.
//!
//! A [`Ray`] is stored through a canonical representative: unit norm, with the
//! first significant amplitude rotated onto the positive real axis. Equality of
//! rays is decided by the overlap, never by comparing amplitudes.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Numerical thresholds shared by every operation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Equality of reals and complex numbers.
    pub eq_tol: f64,
    /// Inner products below this modulus count as exactly zero.
    pub orth_tol: f64,
    /// Amplitudes below this modulus are skipped when fixing the ray gauge.
    pub canon_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eq_tol: 1e-10,
            orth_tol: 1e-12,
            canon_tol: 1e-12,
        }
    }
}

impl Tolerances {
    pub fn new(eq_tol: f64, orth_tol: f64, canon_tol: f64) -> Result<Self> {
        let t = Self {
            eq_tol,
            orth_tol,
            canon_tol,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn with_eq_tol(self, eq_tol: f64) -> Result<Self> {
        Self::new(eq_tol, self.orth_tol, self.canon_tol)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("eq_tol", self.eq_tol),
            ("orth_tol", self.orth_tol),
            ("canon_tol", self.canon_tol),
        ] {
            if !(v > 0.0 && v < 1e-3) {
                return Err(Error::Domain(format!("{name} = {v} must lie in (0, 1e-3)")));
            }
        }
        Ok(())
    }
}

/// A nonzero vector of complex amplitudes.
#[derive(Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Builds a state from its amplitudes; rejects empty, non-finite or all-zero input.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::UnsupportedDimension(
                0,
                "a state needs at least one amplitude",
            ));
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        if amps.iter().all(|z| z.norm() == 0.0) {
            return Err(Error::ZeroVector);
        }
        Ok(Self { amps })
    }

    /// Convenience constructor from `(re, im)` pairs.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|&(re, im)| Complex64::new(re, im))
                .collect(),
        )
    }

    /// Convenience constructor from real amplitudes.
    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&re| Complex64::new(re, 0.0)).collect())
    }

    /// The `i`-th standard basis vector of dimension `dim`.
    pub fn basis(dim: usize, i: usize) -> Result<Self> {
        if i >= dim {
            return Err(Error::Domain(format!(
                "basis index {i} out of range for dim {dim}"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[i] = Complex64::new(1.0, 0.0);
        Self::new(amps)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amps)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `alpha * self`; fails only when the product underflows to zero.
    pub fn scaled(&self, alpha: Complex64) -> Result<Self> {
        Self::new(self.amps.iter().map(|z| z * alpha).collect())
    }

    /// Complex conjugate in the computational basis.
    pub fn conj(&self) -> Self {
        Self {
            amps: self.amps.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Self {
            amps: self.amps.iter().map(|z| z / n).collect(),
        }
    }
}

impl fmt::Debug for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.amps.iter()).finish()
    }
}

/// A one-dimensional subspace, held through its canonical unit representative.
#[derive(Clone, Debug)]
pub struct Ray {
    rep: StateVector,
}

impl Ray {
    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    /// Canonical representative: unit norm, first significant amplitude real positive.
    pub fn rep(&self) -> &StateVector {
        &self.rep
    }

    /// Rays are equal when their overlap is 1 within `tol.eq_tol`.
    pub fn approx_eq(&self, other: &Ray, tol: &Tolerances) -> bool {
        match overlap(self, other) {
            Ok(o) => 1.0 - o < tol.eq_tol,
            Err(_) => false,
        }
    }
}

impl PartialEq for Ray {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other, &Tolerances::default())
    }
}

pub(crate) fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::Dimension {
            expected: a,
            found: b,
        });
    }
    Ok(())
}

/// Hermitian product, conjugate-linear in the first argument.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    check_dims(a.dim(), b.dim())?;
    Ok(dot(&a.amps, &b.amps))
}

/// The projection Π from nonzero vectors onto rays.
pub fn project_to_ray(v: &StateVector, tol: &Tolerances) -> Result<Ray> {
    let n = v.norm();
    if !(n > tol.orth_tol) {
        return Err(Error::ZeroVector);
    }
    let mut amps: Vec<Complex64> = v.amps.iter().map(|z| z / n).collect();
    if let Some(lead) = amps.iter().copied().find(|z| z.norm() > tol.canon_tol) {
        let gauge = lead.conj() / lead.norm();
        for z in amps.iter_mut() {
            *z *= gauge;
        }
        // Exactly real on the leading amplitude.
        if let Some(z) = amps.iter_mut().find(|z| z.norm() > tol.canon_tol) {
            *z = Complex64::new(z.norm(), 0.0);
        }
    }
    Ok(Ray {
        rep: StateVector { amps },
    })
}

/// Modulus of the normalized inner product between two rays, in `[0, 1]`.
///
/// This is the square root of the transition probability.
pub fn overlap(r1: &Ray, r2: &Ray) -> Result<f64> {
    check_dims(r1.dim(), r2.dim())?;
    Ok(dot(&r1.rep.amps, &r2.rep.amps).norm().clamp(0.0, 1.0))
}

/// Fubini-Study distance `δ = 2 arccos(overlap)`, in `[0, π]`.
pub fn ray_distance(r1: &Ray, r2: &Ray) -> Result<f64> {
    Ok(2.0 * overlap(r1, r2)?.acos())
}

/// Unit vector with i.i.d. standard complex Gaussian amplitudes before normalization.
///
/// The induced distribution on rays is the unitarily invariant (Fubini-Study) measure.
pub fn random_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> StateVector {
    assert!(dim >= 1, "random_state needs dim >= 1");
    loop {
        let amps: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let n = norm(&amps);
        if n > 0.0 {
            return StateVector {
                amps: amps.into_iter().map(|z| z / n).collect(),
            };
        }
    }
}

/// A uniformly distributed random ray.
pub fn random_ray<R: Rng + ?Sized>(dim: usize, rng: &mut R, tol: &Tolerances) -> Ray {
    project_to_ray(&random_state(dim, rng), tol).expect("unit vector projects")
}

/// Random nonzero complex scalar with log-uniform modulus in `[0.1, 10]`.
pub fn random_scalar<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let modulus = 10f64.powf(rng.random_range(-1.0..=1.0));
    Complex64::from_polar(
        modulus,
        rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ray(pairs: &[(f64, f64)]) -> Ray {
        project_to_ray(
            &StateVector::from_pairs(pairs).unwrap(),
            &Tolerances::default(),
        )
        .unwrap()
    }

    #[test]
    fn inner_product_examples() {
        let e0 = StateVector::from_real(&[1.0, 0.0]).unwrap();
        let e1 = StateVector::from_real(&[0.0, 1.0]).unwrap();
        let plus_i =
            StateVector::from_pairs(&[(FRAC_1_SQRT_2, 0.0), (0.0, FRAC_1_SQRT_2)]).unwrap();
        assert_eq!(inner_product(&e0, &e1).unwrap(), c(0.0, 0.0));
        assert_eq!(inner_product(&e0, &e0).unwrap(), c(1.0, 0.0));
        let z = inner_product(&e0, &plus_i).unwrap();
        assert_abs_diff_eq!(z.re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-12);
        assert_abs_diff_eq!(z.im, 0.0);
    }

    #[test]
    fn inner_product_is_conjugate_linear_in_first_slot() {
        let a = StateVector::from_pairs(&[(1.0, 2.0), (0.5, -1.0)]).unwrap();
        let b = StateVector::from_pairs(&[(0.0, 1.0), (3.0, 0.25)]).unwrap();
        let ab = inner_product(&a, &b).unwrap();
        let ba = inner_product(&b, &a).unwrap();
        assert_abs_diff_eq!((ab - ba.conj()).norm(), 0.0, epsilon = 1e-15);
        let ia = a.scaled(c(0.0, 1.0)).unwrap();
        let z = inner_product(&ia, &b).unwrap();
        assert_abs_diff_eq!((z - c(0.0, -1.0) * ab).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn dimension_mismatch() {
        let a = StateVector::from_real(&[1.0, 0.0]).unwrap();
        let b = StateVector::from_real(&[1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            inner_product(&a, &b),
            Err(Error::Dimension { .. })
        ));
        let ra = project_to_ray(&a, &Tolerances::default()).unwrap();
        let rb = project_to_ray(&b, &Tolerances::default()).unwrap();
        assert!(matches!(overlap(&ra, &rb), Err(Error::Dimension { .. })));
        assert!(matches!(
            ray_distance(&ra, &rb),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn state_validation() {
        assert_eq!(StateVector::from_real(&[0.0, 0.0]), Err(Error::ZeroVector));
        assert_eq!(
            StateVector::from_real(&[f64::NAN, 1.0]),
            Err(Error::NonFinite)
        );
        assert_eq!(
            StateVector::from_real(&[f64::INFINITY]),
            Err(Error::NonFinite)
        );
        assert!(StateVector::new(vec![]).is_err());
    }

    #[test]
    fn projection_examples() {
        let r = ray(&[(2.0, 0.0), (0.0, 0.0)]);
        assert_eq!(r.rep().amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0)]);

        let r = ray(&[(0.0, 1.0), (0.0, 1.0)]);
        for z in r.rep().amplitudes() {
            assert_abs_diff_eq!(z.re, FRAC_1_SQRT_2, epsilon = 1e-15);
            assert_abs_diff_eq!(z.im, 0.0, epsilon = 1e-15);
        }

        let r = ray(&[(0.0, 0.0), (3.0, -4.0)]);
        assert_eq!(r.rep().amplitudes()[0], c(0.0, 0.0));
        assert_abs_diff_eq!(r.rep().amplitudes()[1].re, 1.0, epsilon = 1e-15);
        assert_eq!(r.rep().amplitudes()[1].im, 0.0);
    }

    #[test]
    fn projection_rejects_tiny_vectors() {
        let v = StateVector::from_real(&[1e-14, 0.0]).unwrap();
        assert_eq!(
            project_to_ray(&v, &Tolerances::default()).unwrap_err(),
            Error::ZeroVector
        );
    }

    #[test]
    fn overlap_and_distance_examples() {
        let a = ray(&[(1.0, 0.0), (0.0, 0.0)]);
        let b = ray(&[(0.0, 0.0), (1.0, 0.0)]);
        let p = ray(&[(1.0, 0.0), (1.0, 0.0)]);
        assert_eq!(overlap(&a, &a).unwrap(), 1.0);
        assert_eq!(overlap(&a, &b).unwrap(), 0.0);
        assert_abs_diff_eq!(overlap(&a, &p).unwrap(), FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_eq!(ray_distance(&a, &a).unwrap(), 0.0);
        assert_abs_diff_eq!(ray_distance(&a, &b).unwrap(), PI, epsilon = 1e-15);
        assert_abs_diff_eq!(ray_distance(&a, &p).unwrap(), PI / 2.0, epsilon = 1e-15);
        assert_eq!(a, a.clone());
        assert_ne!(a, p);
    }

    #[test]
    fn random_state_is_deterministic_and_unit() {
        let v1 = random_state(2, &mut ChaCha8Rng::seed_from_u64(9));
        let v2 = random_state(2, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(v1, v2);
        let v = random_state(4, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(v.dim(), 4);
        assert_abs_diff_eq!(v.norm(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn random_rays_are_uniform_on_the_bloch_sphere() {
        // For the uniform measure on CP^1, |<fixed|random>|^2 is uniform on [0,1].
        let tol = Tolerances::default();
        let fixed = ray(&[(1.0, 0.0), (0.0, 0.0)]);
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let n = 10_000;
        let mean: f64 = (0..n)
            .map(|_| {
                overlap(&fixed, &random_ray(2, &mut rng, &tol))
                    .unwrap()
                    .powi(2)
            })
            .sum::<f64>()
            / n as f64;
        assert!((mean - 0.5).abs() < 0.02, "mean overlap^2 = {mean}");
    }

    #[test]
    fn tolerances_validate() {
        assert!(Tolerances::default().validate().is_ok());
        assert!(Tolerances::new(0.0, 1e-12, 1e-12).is_err());
        assert!(Tolerances::new(1e-2, 1e-12, 1e-12).is_err());
        assert!(Tolerances::default().with_eq_tol(1e-8).is_ok());
    }
}
