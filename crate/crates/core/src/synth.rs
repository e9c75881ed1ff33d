//! Seeded synthetic data: four-type mass contours from a polar boundary
//! model, conditionally independent expert vote matrices, and
//! class-conditioned texture fields. These stand in for clinical data in
//! every pipeline and calibration test; the per-type malignancy rates are
//! generator configuration, not a claim of clinical fidelity.

use alloc::vec;
use alloc::vec::Vec;
#[cfg(not(feature = "std"))]
use num_traits::Float as _;
use thiserror::Error;

use crate::features::{Diagnosis, GrayImage, ShapeType};
use crate::geometry::{Contour, Point2};
use crate::rng::{derive_seed, Rng};
use crate::Vote;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthError {
    #[error("type priors must be non-negative and sum to 1")]
    BadPriors,
    #[error("expert competencies must lie in (0, 1)")]
    BadCompetency,
    #[error("class prior must lie strictly inside (0, 1)")]
    BadPrior,
    #[error("texture images must be at least 64 pixels on a side, got {0}")]
    ImageTooSmall(usize),
    #[error("generator configuration is invalid: {0}")]
    BadConfig(&'static str),
}

/// Polar boundary model parameters for one shape type.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeShapeParams {
    /// Base radius R0 in pixels.
    pub base_radius: f64,
    /// Lobulation amplitude range; drawn uniformly per contour.
    pub amplitude: (f64, f64),
    /// Inclusive lobe (or spike) count range.
    pub lobes: (u32, u32),
    /// Exponent of the raised-cosine spike profile (stellate only);
    /// 1 leaves plain sinusoidal lobes.
    pub spike_sharpness: f64,
    /// Standard deviation of the additive radial noise.
    pub noise_sigma: f64,
    /// Circular moving-average window applied to the noise (1 = none).
    pub noise_smooth: usize,
    /// P(malignant | this shape type).
    pub malignancy_rate: f64,
}

/// Generator configuration for all four shape types.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeGenConfig {
    pub round: TypeShapeParams,
    pub lobulated: TypeShapeParams,
    pub microlobulated: TypeShapeParams,
    pub stellate: TypeShapeParams,
}

impl Default for ShapeGenConfig {
    fn default() -> Self {
        ShapeGenConfig {
            round: TypeShapeParams {
                base_radius: 100.0,
                amplitude: (0.0, 0.02),
                lobes: (2, 3),
                spike_sharpness: 1.0,
                noise_sigma: 0.004,
                noise_smooth: 15,
                malignancy_rate: 0.17,
            },
            lobulated: TypeShapeParams {
                base_radius: 100.0,
                amplitude: (0.1, 0.25),
                lobes: (3, 5),
                spike_sharpness: 1.0,
                noise_sigma: 0.01,
                noise_smooth: 5,
                malignancy_rate: 0.05,
            },
            microlobulated: TypeShapeParams {
                base_radius: 100.0,
                amplitude: (0.03, 0.08),
                lobes: (15, 30),
                spike_sharpness: 1.0,
                noise_sigma: 0.01,
                noise_smooth: 3,
                malignancy_rate: 0.95,
            },
            stellate: TypeShapeParams {
                base_radius: 100.0,
                amplitude: (0.3, 0.6),
                lobes: (5, 12),
                spike_sharpness: 6.0,
                noise_sigma: 0.02,
                noise_smooth: 1,
                malignancy_rate: 0.97,
            },
        }
    }
}

impl ShapeGenConfig {
    pub fn params(&self, ty: ShapeType) -> &TypeShapeParams {
        match ty {
            ShapeType::Round => &self.round,
            ShapeType::Lobulated => &self.lobulated,
            ShapeType::Microlobulated => &self.microlobulated,
            ShapeType::Stellate => &self.stellate,
        }
    }

    pub fn malignancy_rates(&self) -> [f64; 4] {
        [
            self.round.malignancy_rate,
            self.lobulated.malignancy_rate,
            self.microlobulated.malignancy_rate,
            self.stellate.malignancy_rate,
        ]
    }

    fn validate(&self) -> Result<(), SynthError> {
        for ty in ShapeType::ALL {
            let p = self.params(ty);
            if p.base_radius <= 0.0 {
                return Err(SynthError::BadConfig("base_radius must be positive"));
            }
            if p.amplitude.0 < 0.0 || p.amplitude.1 < p.amplitude.0 {
                return Err(SynthError::BadConfig("amplitude range is invalid"));
            }
            if p.lobes.1 < p.lobes.0 {
                return Err(SynthError::BadConfig("lobe range is invalid"));
            }
            if !(0.0..=1.0).contains(&p.malignancy_rate) {
                return Err(SynthError::BadConfig("malignancy rate outside [0, 1]"));
            }
            if p.noise_smooth == 0 {
                return Err(SynthError::BadConfig("noise_smooth must be >= 1"));
            }
        }
        Ok(())
    }
}

const CONTOUR_VERTICES: usize = 256;
/// Radii are clipped below at this fraction of the base radius.
const MIN_RADIUS_FRACTION: f64 = 0.1;

/// Circular moving average with the given window (centered).
fn smooth_circular(values: &[f64], window: usize) -> Vec<f64> {
    if window <= 1 {
        return values.to_vec();
    }
    let n = values.len();
    let half = window / 2;
    (0..n)
        .map(|i| {
            let mut acc = 0.0;
            for d in 0..window {
                acc += values[(i + n + d - half) % n];
            }
            acc / window as f64
        })
        .collect()
}

/// Generates one contour of the given type from the polar model
/// `r(θ) = R0·(1 + a·lobe(θ) + noise(θ))` sampled at 256 uniform angles.
///
/// Lobulated profiles use a random-phase sinusoid with the drawn lobe
/// count; stellate profiles sharpen it into spikes by exponentiating the
/// raised cosine. Radii are clipped at `0.1·R0`, so the polygon is always
/// a valid star-shaped (hence simple) contour.
pub fn gen_contour(ty: ShapeType, cfg: &ShapeGenConfig, seed: u64) -> Contour {
    let p = cfg.params(ty);
    let mut rng = Rng::new(derive_seed(seed, ty.index() as u64));
    let amplitude = rng.uniform(p.amplitude.0, p.amplitude.1);
    let lobes = f64::from(rng.int_inclusive(p.lobes.0, p.lobes.1));
    let phase = rng.uniform(0.0, 2.0 * core::f64::consts::PI);

    let raw_noise: Vec<f64> = (0..CONTOUR_VERTICES)
        .map(|_| rng.gauss() * p.noise_sigma)
        .collect();
    let noise = smooth_circular(&raw_noise, p.noise_smooth);

    let points = (0..CONTOUR_VERTICES)
        .map(|k| {
            let theta = 2.0 * core::f64::consts::PI * k as f64 / CONTOUR_VERTICES as f64;
            let lobe = if p.spike_sharpness > 1.0 {
                // raised cosine in [0, 1], exponentiated into sharp spikes
                let bump = 0.5 * (1.0 + (lobes * theta + phase).cos());
                bump.powf(p.spike_sharpness)
            } else {
                (lobes * theta + phase).sin()
            };
            let r = (p.base_radius * (1.0 + amplitude * lobe + noise[k]))
                .max(MIN_RADIUS_FRACTION * p.base_radius);
            Point2::new(r * theta.cos(), r * theta.sin())
        })
        .collect();
    Contour::new(points).expect("polar model yields a valid contour")
}

/// One generated mass: contour plus shape and diagnosis labels, with the
/// per-sample seed recorded for reproduction.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeSample {
    pub contour: Contour,
    pub shape_type: ShapeType,
    pub diagnosis: Diagnosis,
    pub seed: u64,
}

/// Draws `n` masses: the type from `type_priors`, the diagnosis from the
/// configured per-type malignancy rate, and the contour from the polar
/// model. Sample `i` depends only on `(cfg, derive_seed(seed, i))`.
pub fn gen_shape_dataset(
    n: usize,
    cfg: &ShapeGenConfig,
    type_priors: &[f64; 4],
    seed: u64,
) -> Result<Vec<ShapeSample>, SynthError> {
    cfg.validate()?;
    if type_priors.iter().any(|&p| p < 0.0)
        || (type_priors.iter().sum::<f64>() - 1.0).abs() > 1e-9
    {
        return Err(SynthError::BadPriors);
    }
    let mut samples = Vec::with_capacity(n);
    for i in 0..n {
        let sample_seed = derive_seed(seed, i as u64);
        let mut rng = Rng::new(sample_seed);
        let u = rng.next_f64();
        let mut acc = 0.0;
        let mut ty = ShapeType::Stellate; // falls through on u ≈ 1
        for (t, &prior) in ShapeType::ALL.iter().zip(type_priors) {
            acc += prior;
            if u < acc {
                ty = *t;
                break;
            }
        }
        let diagnosis = if rng.bernoulli(cfg.params(ty).malignancy_rate) {
            Diagnosis::Malignant
        } else {
            Diagnosis::Benign
        };
        let contour = gen_contour(ty, cfg, derive_seed(sample_seed, 1));
        samples.push(ShapeSample {
            contour,
            shape_type: ty,
            diagnosis,
            seed: sample_seed,
        });
    }
    Ok(samples)
}

/// Configuration of a conditionally independent expert panel.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpertGenConfig {
    /// Per-expert probability of voting correctly.
    pub competencies: Vec<f64>,
    /// P(truth = +1).
    pub prior_pos: f64,
    pub trials: usize,
}

/// Truth labels and the trials × experts vote matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpertVotes {
    pub truth: Vec<Vote>,
    pub votes: Vec<Vec<Vote>>,
}

/// Simulates the panel: per trial the truth is Bernoulli(prior_pos) mapped
/// to ±1 and each expert reports it with probability `p_i`, flipping it
/// otherwise, independently across experts and trials.
pub fn gen_expert_votes(cfg: &ExpertGenConfig, seed: u64) -> Result<ExpertVotes, SynthError> {
    if cfg.competencies.is_empty()
        || cfg.competencies.iter().any(|&p| !(p > 0.0 && p < 1.0))
    {
        return Err(SynthError::BadCompetency);
    }
    if !(cfg.prior_pos > 0.0 && cfg.prior_pos < 1.0) {
        return Err(SynthError::BadPrior);
    }
    let mut rng = Rng::new(seed);
    let mut truth = Vec::with_capacity(cfg.trials);
    let mut votes = Vec::with_capacity(cfg.trials);
    for _ in 0..cfg.trials {
        let t: Vote = if rng.bernoulli(cfg.prior_pos) { 1 } else { -1 };
        truth.push(t);
        votes.push(
            cfg.competencies
                .iter()
                .map(|&p| if rng.bernoulli(p) { t } else { -t })
                .collect(),
        );
    }
    Ok(ExpertVotes { truth, votes })
}

/// Texture classes for the synthetic field generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TextureClass {
    /// Smoother field (Gaussian smoothing radius 4).
    BenignLike,
    /// Rougher field (Gaussian smoothing radius 1).
    MalignantLike,
}

impl TextureClass {
    pub fn name(&self) -> &'static str {
        match self {
            TextureClass::BenignLike => "benign_like",
            TextureClass::MalignantLike => "malignant_like",
        }
    }

    pub fn from_name(name: &str) -> Option<TextureClass> {
        match name {
            "benign_like" => Some(TextureClass::BenignLike),
            "malignant_like" => Some(TextureClass::MalignantLike),
            _ => None,
        }
    }

    fn smoothing_sigma(&self) -> f64 {
        match self {
            TextureClass::BenignLike => 4.0,
            TextureClass::MalignantLike => 1.0,
        }
    }
}

/// Gaussian random field: white noise convolved with a separable Gaussian
/// kernel (periodic boundaries), min–max rescaled to [0, 1].
pub fn gen_texture_image(
    class: TextureClass,
    size: usize,
    seed: u64,
) -> Result<GrayImage, SynthError> {
    if size < 64 {
        return Err(SynthError::ImageTooSmall(size));
    }
    let mut rng = Rng::new(seed);
    let mut field: Vec<f64> = (0..size * size).map(|_| rng.gauss()).collect();

    let sigma = class.smoothing_sigma();
    let half = (3.0 * sigma).ceil() as i64;
    let kernel: Vec<f64> = (-half..=half)
        .map(|d| (-0.5 * (d as f64 / sigma) * (d as f64 / sigma)).exp())
        .collect();
    let ksum: f64 = kernel.iter().sum();
    let kernel: Vec<f64> = kernel.iter().map(|k| k / ksum).collect();

    // separable blur, horizontal then vertical, wrapping at the borders
    let n = size as i64;
    let mut tmp = vec![0.0; size * size];
    for y in 0..size {
        for x in 0..size {
            let mut acc = 0.0;
            for (ki, k) in kernel.iter().enumerate() {
                let sx = (x as i64 + ki as i64 - half).rem_euclid(n) as usize;
                acc += k * field[y * size + sx];
            }
            tmp[y * size + x] = acc;
        }
    }
    for y in 0..size {
        for x in 0..size {
            let mut acc = 0.0;
            for (ki, k) in kernel.iter().enumerate() {
                let sy = (y as i64 + ki as i64 - half).rem_euclid(n) as usize;
                acc += k * tmp[sy * size + x];
            }
            field[y * size + x] = acc;
        }
    }

    let min = field.iter().copied().fold(f64::INFINITY, f64::min);
    let max = field.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let pixels = if max > min {
        field.iter().map(|v| (v - min) / (max - min)).collect()
    } else {
        vec![0.5; size * size]
    };
    Ok(GrayImage::new(size, size, pixels).expect("rescaled into range"))
}
