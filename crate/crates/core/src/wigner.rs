//! Lifting ray-space isometries to (anti)unitary maps on the state space.
//!
//! Fix a reference vector `e` and a representative `e'` of its image ray with the
//! same norm. Every `ψ` with `<e|ψ> ≠ 0` is sent to the unique `ψ'` on the image
//! ray with `|ψ'| = |ψ|` and `<e'|ψ'> = χ(<e|ψ>)`; vectors orthogonal to `e` are
//! reached by superposition, `φ = (φ − e) + e`. Here `χ` is either the identity
//! or complex conjugation, read off from how the map transforms Bargmann
//! invariants.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{
    dot, inner_product, norm, project_to_ray, random_ray, random_scalar, random_state, StateVector,
    Tolerances,
};
use crate::linalg::CMatrix;
use crate::oracle::{is_isometry_sampled, RayMapOracle};
use crate::pancharatnam::bargmann_invariant;

/// Triples with `|Im Δ|` below `IM_DELTA_FACTOR · orth_tol` cannot tell χ apart.
pub const IM_DELTA_FACTOR: f64 = 10.0;
/// Random triples drawn before giving up on finding a usable one.
pub const CHI_SEARCH_DRAWS: usize = 1000;
/// Independent triples that must agree on χ.
pub const CHI_VOTES: usize = 10;
/// Ray pairs sampled before a lift is attempted.
pub const ISOMETRY_PAIRS: usize = 64;

/// How the map acts on Bargmann invariants: `Δ' = χ(Δ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChiKind {
    Identity,
    Conjugation,
}

impl ChiKind {
    pub fn apply(self, z: Complex64) -> Complex64 {
        match self {
            ChiKind::Identity => z,
            ChiKind::Conjugation => z.conj(),
        }
    }

    pub fn is_antiunitary(self) -> bool {
        self == ChiKind::Conjugation
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ChiKind::Identity => "identity",
            ChiKind::Conjugation => "conjugation",
        }
    }
}

fn vote(
    map: &RayMapOracle,
    rays: [&crate::hilbert::Ray; 3],
    tol: &Tolerances,
) -> Result<Option<ChiKind>> {
    let before = bargmann_invariant(rays[0], rays[1], rays[2], tol)?.delta;
    if before.im.abs() <= IM_DELTA_FACTOR * tol.orth_tol {
        return Ok(None);
    }
    let images = [
        map.apply(rays[0], tol)?,
        map.apply(rays[1], tol)?,
        map.apply(rays[2], tol)?,
    ];
    let after = bargmann_invariant(&images[0], &images[1], &images[2], tol)?.delta;
    Ok(Some(
        if (after - before).norm() < (after - before.conj()).norm() {
            ChiKind::Identity
        } else {
            ChiKind::Conjugation
        },
    ))
}

/// Classifies an isometry by comparing `Δ'` with `Δ` and `Δ̄` on ray triples with
/// nonzero `Im Δ`; up to [`CHI_VOTES`] triples must agree.
pub fn determine_chi<R: Rng + ?Sized>(
    map: &RayMapOracle,
    rng: &mut R,
    tol: &Tolerances,
) -> Result<ChiKind> {
    let dim = map.dim();
    if dim < 2 {
        return Err(Error::UnsupportedDimension(
            dim,
            "χ is undetermined for dim < 2",
        ));
    }
    let mut votes = Vec::with_capacity(CHI_VOTES);
    if let Some(domain) = map.domain() {
        'outer: for i in 0..domain.len() {
            for j in i + 1..domain.len() {
                for k in j + 1..domain.len() {
                    if let Some(v) = vote(map, [&domain[i], &domain[j], &domain[k]], tol)? {
                        votes.push(v);
                        if votes.len() == CHI_VOTES {
                            break 'outer;
                        }
                    }
                }
            }
        }
        if votes.is_empty() {
            return Err(Error::SearchExhausted(0));
        }
    } else {
        let mut draws = 0;
        while votes.len() < CHI_VOTES && draws < CHI_SEARCH_DRAWS {
            draws += 1;
            let rays = [
                random_ray(dim, rng, tol),
                random_ray(dim, rng, tol),
                random_ray(dim, rng, tol),
            ];
            if let Some(v) = vote(map, [&rays[0], &rays[1], &rays[2]], tol)? {
                votes.push(v);
            }
        }
        if votes.is_empty() {
            return Err(Error::SearchExhausted(draws));
        }
    }
    let first = votes[0];
    if votes.iter().any(|&v| v != first) {
        let dissent = votes.iter().filter(|&&v| v != first).count();
        return Err(Error::NotIsometry(dissent as f64 / votes.len() as f64));
    }
    Ok(first)
}

/// The pointwise Pancharatnam lift `ψ ↦ ψ'` for a fixed reference pair `(e, e')`.
#[derive(Debug, Clone)]
pub struct PancharatnamLifter<'a> {
    map: &'a RayMapOracle,
    e: StateVector,
    e_img: StateVector,
    chi: ChiKind,
    tol: Tolerances,
}

impl<'a> PancharatnamLifter<'a> {
    pub fn new(
        map: &'a RayMapOracle,
        e: StateVector,
        e_img: StateVector,
        chi: ChiKind,
        tol: &Tolerances,
    ) -> Result<Self> {
        for d in [e.dim(), e_img.dim()] {
            if d != map.dim() {
                return Err(Error::Dimension {
                    expected: map.dim(),
                    found: d,
                });
            }
        }
        if (e_img.norm() - e.norm()).abs() > tol.eq_tol * e.norm() {
            return Err(Error::InvalidInput(
                "reference image must have the same norm as the reference".into(),
            ));
        }
        let image_ray = map.apply(&project_to_ray(&e, tol)?, tol)?;
        if !project_to_ray(&e_img, tol)?.approx_eq(&image_ray, tol) {
            return Err(Error::InvalidInput(
                "reference image does not lie on the image of the reference ray".into(),
            ));
        }
        Ok(Self {
            map,
            e,
            e_img,
            chi,
            tol: *tol,
        })
    }

    pub fn chi(&self) -> ChiKind {
        self.chi
    }

    pub fn reference(&self) -> &StateVector {
        &self.e
    }

    pub fn reference_image(&self) -> &StateVector {
        &self.e_img
    }

    /// Lift of a vector not orthogonal to the reference.
    pub fn lift(&self, psi: &StateVector) -> Result<StateVector> {
        let z = inner_product(&self.e, psi)?;
        let psi_norm = psi.norm();
        if z.norm() <= self.tol.orth_tol * self.e.norm() * psi_norm {
            return Err(Error::NotInPc);
        }
        let image = self
            .map
            .apply(&project_to_ray(psi, &self.tol)?, &self.tol)?;
        let rep = image.rep();
        let z_img = inner_product(&self.e_img, rep)?;
        if z_img.norm() <= self.tol.orth_tol * self.e_img.norm() {
            return Err(Error::NotIsometry(z.norm() / (self.e.norm() * psi_norm)));
        }
        let phase = self.chi.apply(z) / z_img;
        rep.scaled(phase / phase.norm() * psi_norm)
    }

    /// Lift of any nonzero vector, going through `φ = (φ − αe) + αe` when `φ ⟂ e`.
    pub fn lift_any(&self, phi: &[Complex64]) -> Result<Vec<Complex64>> {
        let z = dot(self.e.amplitudes(), phi);
        if z.norm() > self.tol.orth_tol * self.e.norm() * norm(phi) {
            Ok(self
                .lift(&StateVector::new(phi.to_vec())?)?
                .into_amplitudes())
        } else {
            self.lift_split(phi, Complex64::new(1.0, 0.0))
        }
    }

    /// `T(φ − αe) + T(αe)` for a nonzero shift `α`.
    pub fn lift_split(&self, phi: &[Complex64], alpha: Complex64) -> Result<Vec<Complex64>> {
        let shifted: Vec<Complex64> = phi
            .iter()
            .zip(self.e.amplitudes())
            .map(|(p, e)| p - alpha * e)
            .collect();
        let a = self.lift(&StateVector::new(shifted)?)?;
        let b = self.lift(&self.e.scaled(alpha)?)?;
        Ok(a.amplitudes()
            .iter()
            .zip(b.amplitudes())
            .map(|(x, y)| x + y)
            .collect())
    }
}

/// Lift of `psi` for the reference pair `(e, e_img)`; see [`PancharatnamLifter`].
pub fn pointwise_lift(
    map: &RayMapOracle,
    e: &StateVector,
    e_img: &StateVector,
    chi: ChiKind,
    psi: &StateVector,
    tol: &Tolerances,
) -> Result<StateVector> {
    PancharatnamLifter::new(map, e.clone(), e_img.clone(), chi, tol)?.lift(psi)
}

/// A reconstructed lift: `v ↦ M v`, or `v ↦ M v̄` when antiunitary.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedSymmetry {
    pub matrix: CMatrix,
    pub antiunitary: bool,
    pub reference: StateVector,
    pub reference_image: StateVector,
}

impl LiftedSymmetry {
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn chi(&self) -> ChiKind {
        if self.antiunitary {
            ChiKind::Conjugation
        } else {
            ChiKind::Identity
        }
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        if self.antiunitary {
            let conj: Vec<Complex64> = v.iter().map(|z| z.conj()).collect();
            self.matrix.mul_vec(&conj)
        } else {
            self.matrix.mul_vec(v)
        }
    }

    /// `|tr(M† U)| / dim` against a reference matrix.
    pub fn fidelity(&self, reference: &CMatrix) -> f64 {
        self.matrix.phase_fidelity(reference)
    }

    pub fn lifter<'a>(
        &self,
        map: &'a RayMapOracle,
        tol: &Tolerances,
    ) -> Result<PancharatnamLifter<'a>> {
        PancharatnamLifter::new(
            map,
            self.reference.clone(),
            self.reference_image.clone(),
            self.chi(),
            tol,
        )
    }
}

/// Builds the matrix of the Wigner lift of `map`, column by column from the
/// images of the standard basis.
///
/// Consumes `rng` in this order: the isometry pre-check, the phase of `e'`,
/// the χ search, the final agreement check.
pub fn wigner_lift<R: Rng + ?Sized>(
    map: &RayMapOracle,
    reference: Option<&StateVector>,
    rng: &mut R,
    tol: &Tolerances,
) -> Result<LiftedSymmetry> {
    let dim = map.dim();
    if dim < 2 {
        return Err(Error::UnsupportedDimension(dim, "lifting needs dim >= 2"));
    }
    let check = is_isometry_sampled(map, ISOMETRY_PAIRS, rng, tol)?;
    if !check.is_isometry {
        return Err(Error::NotIsometry(check.max_deviation));
    }
    let e = match reference {
        Some(e) if e.dim() != dim => {
            return Err(Error::Dimension {
                expected: dim,
                found: e.dim(),
            })
        }
        Some(e) => e.clone(),
        None => StateVector::basis(dim, 0)?,
    };
    let image = map.apply(&project_to_ray(&e, tol)?, tol)?;
    let phase = Complex64::from_polar(
        e.norm(),
        rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
    );
    let e_img = image.rep().scaled(phase)?;
    let chi = determine_chi(map, rng, tol)?;
    let lifter = PancharatnamLifter::new(map, e, e_img, chi, tol)?;

    let columns = (0..dim)
        .map(|i| lifter.lift_any(StateVector::basis(dim, i)?.amplitudes()))
        .collect::<Result<Vec<_>>>()?;
    let lifted = LiftedSymmetry {
        matrix: CMatrix::from_columns(&columns)?,
        antiunitary: chi.is_antiunitary(),
        reference: lifter.e.clone(),
        reference_image: lifter.e_img.clone(),
    };

    let residual = lifted.matrix.unitarity_residual();
    if residual > tol.eq_tol {
        return Err(Error::NotIsometry(residual));
    }
    for _ in 0..8 {
        let v = random_state(dim, rng);
        let via_matrix = project_to_ray(&StateVector::new(lifted.apply(v.amplitudes()))?, tol)?;
        let via_map = map.apply(&project_to_ray(&v, tol)?, tol)?;
        if !via_matrix.approx_eq(&via_map, tol) {
            return Err(Error::NotIsometry(
                1.0 - crate::hilbert::overlap(&via_matrix, &via_map)?,
            ));
        }
    }
    Ok(lifted)
}

/// Worst residuals of the intensity (W1) and superposition (W2) laws.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct W1W2Report {
    pub trials: usize,
    /// `| |T(A)| − |A| | / |A|`
    pub w1_max_residual: f64,
    /// `|T(A+B) − T(A) − T(B)| / (|A| + |B|)`
    pub w2_max_residual: f64,
    /// `|T(A) + T(B) − T(C) − T(D)| / (|A| + |B|)` with `A + B = C + D`
    pub four_term_max_residual: f64,
    /// `|T(αA) − χ(α) T(A)| / (|α| |A|)`
    pub homogeneity_max_residual: f64,
    /// `|<T(A)|T(B)> − χ(<A|B>)| / (|A| |B|)`
    pub pair_law_max_residual: f64,
    /// `|M·A − T(A)| / |A|`, the matrix against the pointwise lift
    pub matrix_max_residual: f64,
}

impl W1W2Report {
    pub fn merge(self, o: Self) -> Self {
        Self {
            trials: self.trials + o.trials,
            w1_max_residual: self.w1_max_residual.max(o.w1_max_residual),
            w2_max_residual: self.w2_max_residual.max(o.w2_max_residual),
            four_term_max_residual: self.four_term_max_residual.max(o.four_term_max_residual),
            homogeneity_max_residual: self
                .homogeneity_max_residual
                .max(o.homogeneity_max_residual),
            pair_law_max_residual: self.pair_law_max_residual.max(o.pair_law_max_residual),
            matrix_max_residual: self.matrix_max_residual.max(o.matrix_max_residual),
        }
    }

    pub fn max_residual(&self) -> f64 {
        [
            self.w1_max_residual,
            self.w2_max_residual,
            self.four_term_max_residual,
            self.homogeneity_max_residual,
            self.pair_law_max_residual,
            self.matrix_max_residual,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn diff_norm(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

fn add(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn random_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> StateVector {
    random_state(dim, rng)
        .scaled(random_scalar(rng))
        .expect("nonzero scalar")
}

/// One randomized round of the W1/W2 checks.
pub fn w1_w2_trial<R: Rng + ?Sized>(
    lifter: &PancharatnamLifter<'_>,
    lift: &LiftedSymmetry,
    rng: &mut R,
) -> Result<W1W2Report> {
    let dim = lift.dim();
    let chi = lifter.chi();
    let a = random_vector(dim, rng);
    let b = random_vector(dim, rng);
    let w = random_vector(dim, rng);
    let alpha = random_scalar(rng);

    let (na, nb) = (a.norm(), b.norm());
    let ta = lifter.lift_any(a.amplitudes())?;
    let tb = lifter.lift_any(b.amplitudes())?;
    let sum = add(a.amplitudes(), b.amplitudes());
    let tsum = lifter.lift_any(&sum)?;
    let c: Vec<Complex64> = add(a.amplitudes(), w.amplitudes());
    let d: Vec<Complex64> = b
        .amplitudes()
        .iter()
        .zip(w.amplitudes())
        .map(|(x, y)| x - y)
        .collect();
    let tc = lifter.lift_any(&c)?;
    let td = lifter.lift_any(&d)?;
    let scaled: Vec<Complex64> = a.amplitudes().iter().map(|z| z * alpha).collect();
    let tscaled = lifter.lift_any(&scaled)?;
    let chi_ta: Vec<Complex64> = ta.iter().map(|z| z * chi.apply(alpha)).collect();

    let pair = dot(&ta, &tb) - chi.apply(dot(a.amplitudes(), b.amplitudes()));
    Ok(W1W2Report {
        trials: 1,
        w1_max_residual: (norm(&ta) - na).abs() / na,
        w2_max_residual: diff_norm(&tsum, &add(&ta, &tb)) / (na + nb),
        four_term_max_residual: diff_norm(&add(&ta, &tb), &add(&tc, &td)) / (na + nb),
        homogeneity_max_residual: diff_norm(&tscaled, &chi_ta) / (alpha.norm() * na),
        pair_law_max_residual: pair.norm() / (na * nb),
        matrix_max_residual: diff_norm(&lift.apply(a.amplitudes()), &ta) / na,
    })
}

/// Randomized check of W1, W2, the four-term law, homogeneity and the pair law
/// `<A'|B'> = χ(<A|B>)` for the pointwise lift defined by `lift`'s reference pair.
pub fn verify_w1_w2<R: Rng + ?Sized>(
    map: &RayMapOracle,
    lift: &LiftedSymmetry,
    trials: usize,
    rng: &mut R,
    tol: &Tolerances,
) -> Result<W1W2Report> {
    let lifter = lift.lifter(map, tol)?;
    (0..trials).try_fold(W1W2Report::default(), |acc, _| {
        Ok(acc.merge(w1_w2_trial(&lifter, lift, rng)?))
    })
}

/// Summary of a reconstruction against a known matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    pub chi: ChiKind,
    pub fidelity: Option<f64>,
    pub w1_max_residual: f64,
    pub w2_max_residual: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{bit_flip, haar_unitary};
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn chi_examples() {
        let t = tol();
        let u = haar_unitary(3, &mut rng(1));
        assert_eq!(
            determine_chi(
                &RayMapOracle::linear(u.clone(), &t).unwrap(),
                &mut rng(2),
                &t
            )
            .unwrap(),
            ChiKind::Identity
        );
        assert_eq!(
            determine_chi(&RayMapOracle::conjugation(2), &mut rng(3), &t).unwrap(),
            ChiKind::Conjugation
        );
        let flip_conj = RayMapOracle::antilinear(bit_flip(), &t).unwrap();
        assert_eq!(
            determine_chi(&flip_conj, &mut rng(4), &t).unwrap(),
            ChiKind::Conjugation
        );
        // composing two antilinear maps is linear
        let both = RayMapOracle::composite(vec![flip_conj, RayMapOracle::conjugation(2)]).unwrap();
        assert_eq!(
            determine_chi(&both, &mut rng(5), &t).unwrap(),
            ChiKind::Identity
        );
        assert!(matches!(
            determine_chi(&RayMapOracle::identity(1), &mut rng(6), &t),
            Err(Error::UnsupportedDimension(1, _))
        ));
    }

    #[test]
    fn chi_of_bit_flip_conjugation_on_octant() {
        // Δ_octant = (1+i)/4; X·conj sends the octant triple to one with Δ' = (1−i)/4
        let t = tol();
        let map = RayMapOracle::antilinear(bit_flip(), &t).unwrap();
        let rays: Vec<_> = [
            [(1.0, 0.0), (0.0, 0.0)],
            [(1.0, 0.0), (1.0, 0.0)],
            [(1.0, 0.0), (0.0, 1.0)],
        ]
        .iter()
        .map(|p| project_to_ray(&StateVector::from_pairs(p).unwrap(), &t).unwrap())
        .collect();
        let images: Vec<_> = rays.iter().map(|r| map.apply(r, &t).unwrap()).collect();
        let d = bargmann_invariant(&images[0], &images[1], &images[2], &t)
            .unwrap()
            .delta;
        assert_abs_diff_eq!(d.re, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(d.im, -0.25, epsilon = 1e-15);
        assert_eq!(
            vote(&map, [&rays[0], &rays[1], &rays[2]], &t).unwrap(),
            Some(ChiKind::Conjugation)
        );
    }

    #[test]
    fn chi_from_table_oracle() {
        let t = tol();
        let map = RayMapOracle::conjugation(2);
        let mut g = rng(11);
        let rays: Vec<_> = (0..4).map(|_| random_ray(2, &mut g, &t)).collect();
        let table = RayMapOracle::table(
            rays.iter()
                .map(|r| (r.clone(), map.apply(r, &t).unwrap()))
                .collect(),
        )
        .unwrap();
        assert_eq!(
            determine_chi(&table, &mut g, &t).unwrap(),
            ChiKind::Conjugation
        );

        // three rays on one great circle have real Δ
        let real: Vec<_> = [[1.0, 0.0], [1.0, 1.0], [1.0, -2.0]]
            .iter()
            .map(|v| project_to_ray(&StateVector::from_real(v).unwrap(), &t).unwrap())
            .collect();
        let flat =
            RayMapOracle::table(real.iter().map(|r| (r.clone(), r.clone())).collect()).unwrap();
        assert!(matches!(
            determine_chi(&flat, &mut g, &t),
            Err(Error::SearchExhausted(_))
        ));
    }

    #[test]
    fn pointwise_lift_examples() {
        let t = tol();
        let mut g = rng(20);
        let id = RayMapOracle::identity(3);
        let e = random_state(3, &mut g);
        for _ in 0..10 {
            let psi = random_vector(3, &mut g);
            let l = pointwise_lift(&id, &e, &e, ChiKind::Identity, &psi, &t).unwrap();
            assert!(diff_norm(l.amplitudes(), psi.amplitudes()) < 1e-14 * psi.norm());
        }

        let u = haar_unitary(3, &mut g);
        let map = RayMapOracle::linear(u.clone(), &t).unwrap();
        let e_img = StateVector::new(u.mul_vec(e.amplitudes())).unwrap();
        for _ in 0..10 {
            let psi = random_vector(3, &mut g);
            let l = pointwise_lift(&map, &e, &e_img, ChiKind::Identity, &psi, &t).unwrap();
            let expected = u.mul_vec(psi.amplitudes());
            assert!(diff_norm(l.amplitudes(), &expected) < 1e-13 * psi.norm());
        }

        let conj = RayMapOracle::conjugation(2);
        let e0 = StateVector::from_real(&[1.0, 0.0]).unwrap();
        let psi = StateVector::from_pairs(&[(FRAC_1_SQRT_2, 0.0), (0.0, FRAC_1_SQRT_2)]).unwrap();
        let l = pointwise_lift(&conj, &e0, &e0, ChiKind::Conjugation, &psi, &t).unwrap();
        let expected = [
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(0.0, -FRAC_1_SQRT_2),
        ];
        assert!(diff_norm(l.amplitudes(), &expected) < 1e-15);

        let e1 = StateVector::from_real(&[0.0, 1.0]).unwrap();
        assert_eq!(
            pointwise_lift(&conj, &e0, &e0, ChiKind::Conjugation, &e1, &t).unwrap_err(),
            Error::NotInPc
        );
        // a wrong reference image is refused
        assert!(pointwise_lift(&conj, &e0, &e1, ChiKind::Conjugation, &psi, &t).is_err());
    }

    #[test]
    fn pair_law_holds_for_pointwise_lifts() {
        let t = tol();
        let mut g = rng(21);
        for anti in [false, true] {
            let u = haar_unitary(4, &mut g);
            let map = if anti {
                RayMapOracle::antilinear(u, &t).unwrap()
            } else {
                RayMapOracle::linear(u, &t).unwrap()
            };
            let lift = wigner_lift(&map, None, &mut g, &t).unwrap();
            let lifter = lift.lifter(&map, &t).unwrap();
            for _ in 0..50 {
                let a = random_vector(4, &mut g);
                let b = random_vector(4, &mut g);
                let (ta, tb) = (lifter.lift(&a).unwrap(), lifter.lift(&b).unwrap());
                let lhs = inner_product(&ta, &tb).unwrap();
                let rhs = lift.chi().apply(inner_product(&a, &b).unwrap());
                assert!((lhs - rhs).norm() < 1e-12 * a.norm() * b.norm());
            }
        }
    }

    #[test]
    fn identity_oracle_lifts_to_phase_times_identity() {
        let t = tol();
        let lift = wigner_lift(&RayMapOracle::identity(3), None, &mut rng(30), &t).unwrap();
        assert!(!lift.antiunitary);
        assert_abs_diff_eq!(lift.fidelity(&CMatrix::identity(3)), 1.0, epsilon = 1e-12);
        let p = lift.matrix[(0, 0)];
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { p } else { Complex64::new(0.0, 0.0) };
                assert!((lift.matrix[(i, j)] - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn reconstruction_recovers_haar_matrices() {
        let t = tol();
        let mut g = rng(31);
        for dim in 2..=6 {
            let u = haar_unitary(dim, &mut g);
            for anti in [false, true] {
                let map = if anti {
                    RayMapOracle::antilinear(u.clone(), &t).unwrap()
                } else {
                    RayMapOracle::linear(u.clone(), &t).unwrap()
                };
                let lift = wigner_lift(&map, None, &mut g, &t).unwrap();
                assert_eq!(lift.antiunitary, anti);
                assert!((lift.fidelity(&u) - 1.0).abs() < 1e-9);
                let report = verify_w1_w2(&map, &lift, 100, &mut g, &t).unwrap();
                assert!(report.max_residual() < 1e-9, "{report:?}");
            }
        }
    }

    #[test]
    fn lifts_differ_only_by_global_phase() {
        let t = tol();
        let mut g = rng(32);
        let map = RayMapOracle::antilinear(haar_unitary(4, &mut g), &t).unwrap();
        let l1 = wigner_lift(&map, None, &mut rng(1), &t).unwrap();
        let l2 = wigner_lift(&map, None, &mut rng(2), &t).unwrap();
        assert!(
            diff_norm(
                l1.reference_image.amplitudes(),
                l2.reference_image.amplitudes()
            ) > 1e-3
        );
        assert_abs_diff_eq!(l1.matrix.phase_fidelity(&l2.matrix), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn custom_reference_vector() {
        let t = tol();
        let mut g = rng(33);
        let u = haar_unitary(3, &mut g);
        let map = RayMapOracle::linear(u.clone(), &t).unwrap();
        let e = random_vector(3, &mut g);
        let lift = wigner_lift(&map, Some(&e), &mut g, &t).unwrap();
        assert!((lift.fidelity(&u) - 1.0).abs() < 1e-9);
        let bad = random_state(2, &mut g);
        assert!(matches!(
            wigner_lift(&map, Some(&bad), &mut g, &t),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn extension_to_orthogonal_vectors_is_split_independent() {
        let t = tol();
        let mut g = rng(34);
        let map = RayMapOracle::antilinear(haar_unitary(4, &mut g), &t).unwrap();
        let lift = wigner_lift(&map, None, &mut g, &t).unwrap();
        let lifter = lift.lifter(&map, &t).unwrap();
        for i in 1..4 {
            let b = StateVector::basis(4, i).unwrap();
            let one = lifter
                .lift_split(b.amplitudes(), Complex64::new(1.0, 0.0))
                .unwrap();
            let two = lifter
                .lift_split(b.amplitudes(), Complex64::new(2.0, 0.0))
                .unwrap();
            let odd = lifter
                .lift_split(b.amplitudes(), Complex64::new(-0.4, 1.3))
                .unwrap();
            assert!(diff_norm(&one, &two) < 1e-12);
            assert!(diff_norm(&one, &odd) < 1e-12);
        }
    }

    #[test]
    fn antiunitary_homogeneity_with_i() {
        let t = tol();
        let mut g = rng(35);
        let map = RayMapOracle::antilinear(haar_unitary(3, &mut g), &t).unwrap();
        let lift = wigner_lift(&map, None, &mut g, &t).unwrap();
        let lifter = lift.lifter(&map, &t).unwrap();
        let a = random_vector(3, &mut g);
        let ta = lifter.lift(&a).unwrap();
        let tia = lifter
            .lift(&a.scaled(Complex64::new(0.0, 1.0)).unwrap())
            .unwrap();
        let minus_i_ta: Vec<Complex64> = ta
            .amplitudes()
            .iter()
            .map(|z| z * Complex64::new(0.0, -1.0))
            .collect();
        assert!(diff_norm(tia.amplitudes(), &minus_i_ta) < 1e-13);
    }

    #[test]
    fn identity_oracle_w1_w2() {
        let t = tol();
        let map = RayMapOracle::identity(3);
        let lift = wigner_lift(&map, None, &mut rng(36), &t).unwrap();
        let r = verify_w1_w2(&map, &lift, 200, &mut rng(37), &t).unwrap();
        assert_eq!(r.trials, 200);
        assert!(r.max_residual() < 1e-12, "{r:?}");
    }

    #[test]
    fn non_isometries_are_refused() {
        let t = tol();
        let m = CMatrix::diagonal(&[Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)]);
        let map = RayMapOracle::linear(m, &t).unwrap();
        assert!(matches!(
            wigner_lift(&map, None, &mut rng(40), &t),
            Err(Error::NotIsometry(_))
        ));
        assert!(matches!(
            wigner_lift(&RayMapOracle::identity(1), None, &mut rng(41), &t),
            Err(Error::UnsupportedDimension(1, _))
        ));
    }
}
