//! Seeded property suites behind `raywig verify`.
//!
//! Every trial draws from its own ChaCha8 stream, selected by the run seed and
//! `(suite, trial index)`, so a report does not depend on whether trials run on
//! one thread or on the rayon pool.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::deformation::imdelta_deformation_check;
use crate::error::{Error, Result};
use crate::hilbert::{
    project_to_ray, random_ray, random_scalar, random_state, Ray, StateVector, Tolerances,
};
use crate::linalg::haar_unitary;
use crate::oracle::RayMapOracle;
use crate::pancharatnam::{
    bargmann_from_vectors, bargmann_invariant, cos_beta_from_triangle, discrete_lift,
    triangle_geometry, vertex_angle_from_tangents, GeodesicSegment, GeodesicTriangle,
};
use crate::poincare::{cap_phase, check_half_solid_angle, small_circle_phase};
use crate::wigner::{verify_w1_w2, wigner_lift, ChiKind};

/// Thresholds, pinned to the acceptance levels.
pub mod thresholds {
    pub const GAUGE_RELATIVE: f64 = 1e-12;
    pub const TRIANGLE_IDENTITY: f64 = 1e-10;
    pub const ISOMETRY_INVARIANCE: f64 = 1e-10;
    pub const OCTANT: f64 = 1e-9;
    pub const HALF_SOLID_ANGLE: f64 = 1e-8;
    pub const GEODESIC_RULE: f64 = 1e-10;
    pub const CONTINUUM: f64 = 1e-3;
    pub const RECONSTRUCTION_FIDELITY: f64 = 1e-9;
    pub const W1_W2: f64 = 1e-9;
}

/// Default trial counts.
pub mod defaults {
    pub const GAUGE_PER_DIM: usize = 1000;
    pub const TRIANGLE_PER_DIM: usize = 1000;
    pub const ISOMETRY_ORACLES: usize = 100;
    pub const TRIPLES_PER_ORACLE: usize = 10;
    pub const SOLID_ANGLE_TRIPLES: usize = 1000;
    pub const GEODESICS: usize = 100;
    pub const RECONSTRUCTIONS_PER_KIND: usize = 100;
    pub const W1_W2_CHECKS: usize = 500;
    pub const APPENDIX_TRIPLES: usize = 200;
    pub const APPENDIX_STEPS_PER_STAGE: usize = 50;
    pub const APPENDIX_MIN_IM_DELTA: f64 = 1e-6;
    pub const DIMS: std::ops::RangeInclusive<usize> = 2..=8;
    pub const RECONSTRUCTION_DIMS: std::ops::RangeInclusive<usize> = 2..=6;
    pub const ISOMETRY_DIM: usize = 4;
    pub const GEODESIC_SAMPLES: [usize; 3] = [2, 10, 100];
    pub const CONTINUUM_SAMPLES: [usize; 4] = [8, 32, 128, 512];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Gauge,
    Triangle,
    Isometry,
    SolidAngle,
    GeodesicRule,
    Continuum,
    Reconstruction,
    AppendixPath,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Gauge,
        Suite::Triangle,
        Suite::Isometry,
        Suite::SolidAngle,
        Suite::GeodesicRule,
        Suite::Continuum,
        Suite::Reconstruction,
        Suite::AppendixPath,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Gauge => "gauge",
            Suite::Triangle => "triangle",
            Suite::Isometry => "isometry",
            Suite::SolidAngle => "solid-angle",
            Suite::GeodesicRule => "geodesic-rule",
            Suite::Continuum => "continuum",
            Suite::Reconstruction => "reconstruction",
            Suite::AppendixPath => "appendix-path",
        }
    }

    fn tag(self) -> u64 {
        self as u64 + 1
    }

    /// Parses a suite name; `"all"` selects every suite.
    pub fn parse_selection(name: &str) -> Result<Vec<Suite>> {
        if name == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        Ok(vec![name.parse()?])
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown suite {s:?}")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(Error::InvalidInput(format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    /// Restricts suites to one dimension; suites pick their own range when `None`.
    pub dim: Option<usize>,
    /// Overrides each suite's default trial count.
    pub trials: Option<usize>,
    pub tol: Tolerances,
    pub format: OutputFormat,
    pub parallel: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            dim: None,
            trials: None,
            tol: Tolerances::default(),
            format: OutputFormat::Json,
            parallel: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == Some(0) {
            return Err(Error::Domain("trials must be at least 1".into()));
        }
        if let Some(d) = self.dim {
            if d < 2 {
                return Err(Error::UnsupportedDimension(d, "suites need dim >= 2"));
            }
        }
        self.tol.validate()
    }

    fn trials_or(&self, default: usize) -> usize {
        self.trials.unwrap_or(default)
    }

    fn dims(&self, range: std::ops::RangeInclusive<usize>) -> Vec<usize> {
        match self.dim {
            Some(d) => vec![d],
            None => range.collect(),
        }
    }
}

/// RNG for one trial: stream `(suite, index)` of the run seed.
pub fn trial_rng(seed: u64, suite: Suite, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((suite.tag() << 48) ^ index);
    rng
}

/// Maps `f` over `0..n`, on the rayon pool when requested and compiled in.
pub fn map_trials<T, F>(n: usize, parallel: bool, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = parallel;
    (0..n).map(f).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyResult {
    pub name: String,
    pub count: usize,
    pub failures: usize,
    pub max_residual: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl PropertyResult {
    fn new(name: &str, residuals: impl IntoIterator<Item = Option<f64>>, threshold: f64) -> Self {
        let mut count = 0;
        let mut failures = 0;
        let mut worst = 0.0f64;
        for r in residuals {
            count += 1;
            match r {
                Some(v) if v.is_finite() => {
                    worst = worst.max(v);
                    if !(v < threshold) {
                        failures += 1;
                    }
                }
                _ => {
                    failures += 1;
                    worst = f64::INFINITY;
                }
            }
        }
        Self {
            name: name.to_string(),
            count,
            failures,
            max_residual: worst,
            threshold,
            passed: failures == 0 && count > 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub properties: Vec<PropertyResult>,
}

impl SuiteReport {
    fn new(suite: Suite, properties: Vec<PropertyResult>) -> Self {
        Self {
            suite: suite.name().to_string(),
            passed: properties.iter().all(|p| p.passed),
            properties,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        crate::io::to_json_string(self)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,property,count,failures,max_residual,threshold,passed\n");
        for s in &self.suites {
            for p in &s.properties {
                out.push_str(&format!(
                    "{},{},{},{},{:e},{:e},{}\n",
                    s.suite, p.name, p.count, p.failures, p.max_residual, p.threshold, p.passed
                ));
            }
        }
        out
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => self.to_csv(),
        }
    }
}

pub fn run(suites: &[Suite], cfg: &RunConfig) -> Result<VerifyReport> {
    cfg.validate()?;
    let reports: Vec<SuiteReport> = suites.iter().map(|&s| run_suite(s, cfg)).collect();
    Ok(VerifyReport {
        seed: cfg.seed,
        passed: reports.iter().all(|r| r.passed),
        suites: reports,
    })
}

pub fn run_suite(suite: Suite, cfg: &RunConfig) -> SuiteReport {
    let props = match suite {
        Suite::Gauge => gauge(cfg),
        Suite::Triangle => triangle(cfg),
        Suite::Isometry => isometry(cfg),
        Suite::SolidAngle => solid_angle(cfg),
        Suite::GeodesicRule => geodesic_rule(cfg),
        Suite::Continuum => continuum(cfg),
        Suite::Reconstruction => reconstruction(cfg),
        Suite::AppendixPath => appendix_path(cfg),
    };
    SuiteReport::new(suite, props)
}

/// Runs `trials` per dimension and transposes the per-trial residual tuples.
fn per_dim_trials<const K: usize>(
    cfg: &RunConfig,
    suite: Suite,
    dims: &[usize],
    trials: usize,
    f: impl Fn(usize, &mut ChaCha8Rng) -> Option<[f64; K]> + Sync + Send,
) -> [Vec<Option<f64>>; K] {
    let jobs: Vec<(usize, usize)> = dims
        .iter()
        .flat_map(|&d| (0..trials).map(move |i| (d, i)))
        .collect();
    let rows = map_trials(jobs.len(), cfg.parallel, |j| {
        let (dim, _) = jobs[j];
        let mut rng = trial_rng(cfg.seed, suite, j as u64);
        f(dim, &mut rng)
    });
    std::array::from_fn(|k| rows.iter().map(|r| r.map(|v| v[k])).collect())
}

fn relative(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn rescaled<R: rand::Rng>(v: &StateVector, rng: &mut R) -> StateVector {
    v.scaled(random_scalar(rng)).expect("nonzero scalar")
}

fn gauge(cfg: &RunConfig) -> Vec<PropertyResult> {
    let t = cfg.tol;
    let [vectors, rays, cyclic, reversal] = per_dim_trials(
        cfg,
        Suite::Gauge,
        &cfg.dims(defaults::DIMS),
        cfg.trials_or(defaults::GAUGE_PER_DIM),
        |dim, rng| {
            let (a, b, c) = (
                random_state(dim, rng),
                random_state(dim, rng),
                random_state(dim, rng),
            );
            let base = bargmann_from_vectors(&a, &b, &c).ok()?;
            let (a2, b2, c2) = (rescaled(&a, rng), rescaled(&b, rng), rescaled(&c, rng));
            let moved = bargmann_from_vectors(&a2, &b2, &c2).ok()?;
            let ray = |v: &StateVector| project_to_ray(v, &t).ok();
            let (ra, rb, rc) = (ray(&a2)?, ray(&b2)?, ray(&c2)?);
            let via_rays = bargmann_invariant(&ra, &rb, &rc, &t).ok()?.delta;
            let bca = bargmann_invariant(&rb, &rc, &ra, &t).ok()?.delta;
            let acb = bargmann_invariant(&ra, &rc, &rb, &t).ok()?.delta;
            Some([
                relative(moved, base),
                relative(via_rays, base),
                relative(bca, via_rays),
                relative(acb, via_rays.conj()),
            ])
        },
    );
    vec![
        PropertyResult::new(
            "rescaled_representatives",
            vectors,
            thresholds::GAUGE_RELATIVE,
        ),
        PropertyResult::new("canonical_rays", rays, thresholds::GAUGE_RELATIVE),
        PropertyResult::new("cyclic_symmetry", cyclic, thresholds::GAUGE_RELATIVE),
        PropertyResult::new("reversal_conjugates", reversal, thresholds::GAUGE_RELATIVE),
    ]
}

fn nondegenerate_triple(
    dim: usize,
    rng: &mut ChaCha8Rng,
    t: &Tolerances,
) -> (Ray, Ray, Ray, GeodesicTriangle) {
    loop {
        let (a, b, c) = (
            random_ray(dim, rng, t),
            random_ray(dim, rng, t),
            random_ray(dim, rng, t),
        );
        if let Ok(tri) = triangle_geometry(&a, &b, &c, t) {
            return (a, b, c, tri);
        }
    }
}

fn triangle(cfg: &RunConfig) -> Vec<PropertyResult> {
    let t = cfg.tol;
    let [identity, cosine_rule] = per_dim_trials(
        cfg,
        Suite::Triangle,
        &cfg.dims(defaults::DIMS),
        cfg.trials_or(defaults::TRIANGLE_PER_DIM),
        |dim, rng| {
            let (a, b, c, tri) = nondegenerate_triple(dim, rng, &t);
            let angle = vertex_angle_from_tangents(&a, &b, &c, &t).ok()?;
            let direct = bargmann_invariant(&a, &b, &c, &t).ok()?.cos_beta()?;
            let formula = cos_beta_from_triangle(&GeodesicTriangle {
                angle_a: angle,
                ..tri
            });
            Some([
                (formula - direct).abs(),
                (tri.angle_a.cos() - angle.cos()).abs(),
            ])
        },
    );
    vec![
        PropertyResult::new("cos_beta_identity", identity, thresholds::TRIANGLE_IDENTITY),
        PropertyResult::new(
            "cosine_rule_vs_tangents",
            cosine_rule,
            thresholds::TRIANGLE_IDENTITY,
        ),
    ]
}

fn isometry(cfg: &RunConfig) -> Vec<PropertyResult> {
    let t = cfg.tol;
    let dim = cfg.dim.unwrap_or(defaults::ISOMETRY_DIM);
    let n = cfg.trials_or(defaults::ISOMETRY_ORACLES);
    let rows = map_trials(2 * n, cfg.parallel, |j| -> Option<[f64; 3]> {
        let mut rng = trial_rng(cfg.seed, Suite::Isometry, j as u64);
        let anti = j >= n;
        let u = haar_unitary(dim, &mut rng);
        let map = if anti {
            RayMapOracle::antilinear(u, &t).ok()?
        } else {
            RayMapOracle::linear(u, &t).ok()?
        };
        let mut worst = [0.0f64; 3];
        for _ in 0..defaults::TRIPLES_PER_ORACLE {
            let rays: Vec<Ray> = (0..3).map(|_| random_ray(dim, &mut rng, &t)).collect();
            let imgs: Vec<Ray> = rays
                .iter()
                .map(|r| map.apply(r, &t))
                .collect::<Result<_>>()
                .ok()?;
            let d = bargmann_invariant(&rays[0], &rays[1], &rays[2], &t).ok()?;
            let d2 = bargmann_invariant(&imgs[0], &imgs[1], &imgs[2], &t).ok()?;
            let expected_im = if anti { -d.delta.im } else { d.delta.im };
            worst[0] = worst[0].max((d2.rho - d.rho).abs());
            worst[1] = worst[1].max((d2.delta.re - d.delta.re).abs());
            worst[2] = worst[2].max((d2.delta.im - expected_im).abs());
        }
        Some(worst)
    });
    let col = |k: usize| rows.iter().map(move |r| r.map(|v| v[k]));
    vec![
        PropertyResult::new("rho_invariant", col(0), thresholds::ISOMETRY_INVARIANCE),
        PropertyResult::new(
            "re_delta_invariant",
            col(1),
            thresholds::ISOMETRY_INVARIANCE,
        ),
        PropertyResult::new("im_delta_chi", col(2), thresholds::ISOMETRY_INVARIANCE),
    ]
}

fn octant() -> [Ray; 3] {
    let t = Tolerances::default();
    [
        [(1.0, 0.0), (0.0, 0.0)],
        [(1.0, 0.0), (1.0, 0.0)],
        [(1.0, 0.0), (0.0, 1.0)],
    ]
    .map(|p| project_to_ray(&StateVector::from_pairs(&p).unwrap(), &t).unwrap())
}

fn solid_angle(cfg: &RunConfig) -> Vec<PropertyResult> {
    let t = cfg.tol;
    let [a, b, c] = octant();
    let oct = check_half_solid_angle(&a, &b, &c, &t).ok();
    let octant_residual = oct.map(|r| {
        (r.beta - FRAC_PI_4)
            .abs()
            .max((r.solid_angle - FRAC_PI_2).abs())
    });
    let n = cfg.trials_or(defaults::SOLID_ANGLE_TRIPLES);
    let residuals = map_trials(n, cfg.parallel, |j| {
        let mut rng = trial_rng(cfg.seed, Suite::SolidAngle, j as u64);
        let rays: Vec<Ray> = (0..3).map(|_| random_ray(2, &mut rng, &t)).collect();
        check_half_solid_angle(&rays[0], &rays[1], &rays[2], &t)
            .ok()
            .map(|r| r.residual)
    });
    vec![
        PropertyResult::new("octant", [octant_residual], thresholds::OCTANT),
        PropertyResult::new("half_solid_angle", residuals, thresholds::HALF_SOLID_ANGLE),
    ]
}

fn geodesic_rule(cfg: &RunConfig) -> Vec<PropertyResult> {
    let t = cfg.tol;
    let n = cfg.trials_or(defaults::GEODESICS);
    let dims = cfg.dims(defaults::DIMS);
    let residuals = map_trials(n, cfg.parallel, |j| {
        let mut rng = trial_rng(cfg.seed, Suite::GeodesicRule, j as u64);
        let dim = dims[j % dims.len()];
        let start = random_state(dim, &mut rng);
        let seg = loop {
            if let Ok(seg) = GeodesicSegment::new(&start, &random_ray(dim, &mut rng, &t), &t) {
                break seg;
            }
        };
        let mut worst = 0.0f64;
        for samples in defaults::GEODESIC_SAMPLES {
            let curve: Vec<Ray> = (0..samples)
                .map(|k| {
                    let lambda = k as f64 / (samples - 1) as f64;
                    project_to_ray(&seg.point(lambda)?, &t)
                })
                .collect::<Result<_>>()
                .ok()?;
            let end = discrete_lift(&curve, &start, &t).ok()?;
            let err = end
                .amplitudes()
                .iter()
                .zip(seg.end.amplitudes())
                .map(|(x, y)| (x - y).norm_sqr())
                .sum::<f64>()
                .sqrt();
            worst = worst.max(err);
        }
        Some(worst)
    });
    vec![PropertyResult::new(
        "discrete_matches_horizontal",
        residuals,
        thresholds::GEODESIC_RULE,
    )]
}

fn continuum(cfg: &RunConfig) -> Vec<PropertyResult> {
    let t = cfg.tol;
    let errors: Vec<Option<f64>> = defaults::CONTINUUM_SAMPLES
        .iter()
        .map(|&n| {
            small_circle_phase(FRAC_PI_3, n, &t)
                .ok()
                .map(|p| crate::pancharatnam::principal_angle(p - cap_phase(FRAC_PI_3)).abs())
        })
        .collect();
    let last = *errors.last().unwrap();
    // ratio of consecutive errors; strictly below 1 means monotone decrease
    let ratios: Vec<Option<f64>> = errors.windows(2).map(|w| Some(w[1]? / w[0]?)).collect();
    vec![
        PropertyResult::new("cap_limit_n512", [last], thresholds::CONTINUUM),
        PropertyResult::new("monotone_error_ratio", ratios, 1.0),
    ]
}

fn reconstruction(cfg: &RunConfig) -> Vec<PropertyResult> {
    let t = cfg.tol;
    let n = cfg.trials_or(defaults::RECONSTRUCTIONS_PER_KIND);
    let dims = cfg.dims(defaults::RECONSTRUCTION_DIMS);
    let rows = map_trials(2 * n, cfg.parallel, |j| -> Option<[f64; 4]> {
        let mut rng = trial_rng(cfg.seed, Suite::Reconstruction, j as u64);
        let anti = j >= n;
        let dim = dims[(j % n) % dims.len()];
        let u = haar_unitary(dim, &mut rng);
        let map = if anti {
            RayMapOracle::antilinear(u.clone(), &t).ok()?
        } else {
            RayMapOracle::linear(u.clone(), &t).ok()?
        };
        let lift = wigner_lift(&map, None, &mut rng, &t).ok()?;
        let expected = if anti {
            ChiKind::Conjugation
        } else {
            ChiKind::Identity
        };
        let chi_wrong = if lift.chi() == expected { 0.0 } else { 1.0 };
        let report = verify_w1_w2(&map, &lift, defaults::W1_W2_CHECKS, &mut rng, &t).ok()?;
        Some([
            chi_wrong,
            1.0 - lift.fidelity(&u),
            report.w1_max_residual,
            report
                .w2_max_residual
                .max(report.four_term_max_residual)
                .max(report.homogeneity_max_residual)
                .max(report.pair_law_max_residual)
                .max(report.matrix_max_residual),
        ])
    });
    let col = |k: usize| rows.iter().map(move |r| r.map(|v| v[k]));
    vec![
        PropertyResult::new("chi_misclassified", col(0), 0.5),
        PropertyResult::new(
            "one_minus_fidelity",
            col(1),
            thresholds::RECONSTRUCTION_FIDELITY,
        ),
        PropertyResult::new("w1", col(2), thresholds::W1_W2),
        PropertyResult::new("w2", col(3), thresholds::W1_W2),
    ]
}

fn appendix_path(cfg: &RunConfig) -> Vec<PropertyResult> {
    let t = cfg.tol;
    let dim = cfg.dim.unwrap_or(3);
    let n = cfg.trials_or(defaults::APPENDIX_TRIPLES);
    let rows = map_trials(n, cfg.parallel, |j| {
        let mut rng = trial_rng(cfg.seed, Suite::AppendixPath, j as u64);
        let (a, b, c) = loop {
            let (a, b, c) = (
                random_ray(dim, &mut rng, &t),
                random_ray(dim, &mut rng, &t),
                random_ray(dim, &mut rng, &t),
            );
            if bargmann_invariant(&a, &b, &c, &t).ok()?.delta.im.abs()
                > defaults::APPENDIX_MIN_IM_DELTA
            {
                break (a, b, c);
            }
        };
        let trace =
            imdelta_deformation_check(&a, &b, &c, defaults::APPENDIX_STEPS_PER_STAGE, &t).ok()?;
        Some(if trace.is_sign_constant() { 0.0 } else { 1.0 })
    });
    vec![PropertyResult::new("sign_changes", rows, 0.5)]
}
