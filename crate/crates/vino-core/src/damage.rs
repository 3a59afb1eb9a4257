//! Random and parametric damage fields.
//!
//! Smooth random fields come from a squared-exponential Gaussian random
//! field, clamped into [0, delta_max]; single-bump fields support the
//! controlled localization studies.

use crate::beam::DamageField;
use crate::error::{Result, VinoError};
use crate::linalg::dense_cholesky;
use crate::rng::Rng;

/// Gaussian-random-field sampler configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrfConfig {
    /// Correlation length of the squared-exponential kernel, m.
    pub length_scale: f64,
    /// Pointwise standard deviation before clamping.
    pub std_dev: f64,
    /// Pointwise mean before clamping.
    pub mean: f64,
    /// Clamp ceiling.
    pub delta_max: f64,
    pub seed: u64,
}

impl GrfConfig {
    pub fn validate(&self) -> Result<()> {
        if self.length_scale <= 0.0 || self.std_dev < 0.0 {
            return Err(VinoError::NegativeInput(
                "length_scale must be > 0 and std_dev >= 0".into(),
            ));
        }
        if !(0.0..self.delta_max).contains(&self.mean) {
            return Err(VinoError::Config(format!(
                "grf mean {} must lie in [0, delta_max = {})",
                self.mean, self.delta_max
            )));
        }
        Ok(())
    }
}

/// Factored GRF covariance over a fixed grid; draws are cheap after the
/// one-time Cholesky.
pub struct GrfSampler {
    cfg: GrfConfig,
    grid: Vec<f64>,
    /// Lower Cholesky factor of Sigma + 1e-10 I, row-major.
    chol: Vec<f64>,
}

impl GrfSampler {
    pub fn new(cfg: &GrfConfig, grid: &[f64]) -> Result<Self> {
        cfg.validate()?;
        if grid.len() < 2 || grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(VinoError::Config(
                "grf grid must be strictly increasing with >= 2 points".into(),
            ));
        }
        let n = grid.len();
        let mut sigma = vec![0.0; n * n];
        let s2 = cfg.std_dev * cfg.std_dev;
        let inv_2l2 = 1.0 / (2.0 * cfg.length_scale * cfg.length_scale);
        for i in 0..n {
            for j in 0..n {
                let d = grid[i] - grid[j];
                sigma[i * n + j] = s2 * (-d * d * inv_2l2).exp();
            }
            sigma[i * n + i] += 1e-10;
        }
        let chol = dense_cholesky(&sigma, n)?;
        Ok(Self {
            cfg: *cfg,
            grid: grid.to_vec(),
            chol,
        })
    }

    /// Draws one clamped field with the given stream seed.
    pub fn sample(&self, seed: u64) -> DamageField {
        let n = self.grid.len();
        let mut rng = Rng::new(seed);
        let z: Vec<f64> = (0..n).map(|_| rng.gauss()).collect();
        let mut values = vec![0.0; n];
        for i in 0..n {
            let mut acc = self.cfg.mean;
            for k in 0..=i {
                acc += self.chol[i * n + k] * z[k];
            }
            values[i] = acc.clamp(0.0, self.cfg.delta_max);
        }
        DamageField::new(self.grid.clone(), values, self.cfg.delta_max)
            .expect("clamped draw satisfies the field invariants")
    }
}

/// One GRF draw: y ~ N(mean 1, Sigma) via Cholesky of Sigma + 1e-10 I,
/// clamped into [0, delta_max].
pub fn sample_damage_field(cfg: &GrfConfig, grid: &[f64]) -> Result<DamageField> {
    Ok(GrfSampler::new(cfg, grid)?.sample(cfg.seed))
}

/// Gaussian bump delta(x) = peak exp(-(x - center)^2 / (2 width^2)).
pub fn bump_damage(
    center: f64,
    width: f64,
    peak: f64,
    grid: &[f64],
    delta_max: f64,
) -> Result<DamageField> {
    if !(0.0..=delta_max).contains(&peak) {
        return Err(VinoError::PeakOutOfRange { peak, delta_max });
    }
    if width <= 0.0 {
        return Err(VinoError::NegativeInput("bump width must be > 0".into()));
    }
    let values: Vec<f64> = grid
        .iter()
        .map(|&x| {
            let d = x - center;
            peak * (-d * d / (2.0 * width * width)).exp()
        })
        .collect();
    DamageField::new(grid.to_vec(), values, delta_max)
}

/// Pointwise clamped sum of two fields on the same grid.
pub fn clamped_sum(a: &DamageField, b: &DamageField) -> Result<DamageField> {
    if a.grid() != b.grid() {
        return Err(VinoError::Config("fields live on different grids".into()));
    }
    let delta_max = a.delta_max().min(b.delta_max());
    let values: Vec<f64> = a
        .values()
        .iter()
        .zip(b.values().iter())
        .map(|(x, y)| (x + y).clamp(0.0, delta_max))
        .collect();
    DamageField::new(a.grid().to_vec(), values, delta_max)
}
