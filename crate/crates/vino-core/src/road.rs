//! Road irregularity profiles: PSD-based synthesis, file loading, and
//! (r, r') evaluation for the coupled solver.

use crate::error::{Result, VinoError};
use crate::rng::Rng;
use std::f64::consts::PI;
use std::io::{BufRead, Write};
use std::path::Path;

/// Reference spatial frequency of the roughness PSD, cycles/m.
pub const N0: f64 = 0.1;

/// Roughness-class description: G_d(n) = g_d_n0 (n/n0)^-w over a band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoadClassSpec {
    /// PSD value at n0 = 0.1 cycle/m, in m^3.
    pub g_d_n0: f64,
    /// Spectral exponent (2 for the standard classes).
    pub exponent: f64,
    /// Band lower edge, cycles/m.
    pub n_min: f64,
    /// Band upper edge, cycles/m.
    pub n_max: f64,
    /// Sampling interval, cycles/m.
    pub delta_n: f64,
    /// Phase seed.
    pub seed: u64,
}

impl RoadClassSpec {
    pub fn validate(&self) -> Result<()> {
        if self.g_d_n0 < 0.0 {
            return Err(VinoError::NegativeInput("g_d_n0 must be >= 0".into()));
        }
        if self.n_min <= 0.0 || self.n_min >= self.n_max || self.delta_n <= 0.0 {
            return Err(VinoError::Config(format!(
                "require 0 < n_min < n_max and delta_n > 0, got [{}, {}] step {}",
                self.n_min, self.n_max, self.delta_n
            )));
        }
        Ok(())
    }
}

/// One-sided displacement PSD G_d(n) = g_d_n0 (n/n0)^-w.
pub fn psd_value(spec: &RoadClassSpec, n: f64) -> Result<f64> {
    if n <= 0.0 {
        return Err(VinoError::NonPositiveFrequency(n));
    }
    Ok(spec.g_d_n0 * (n / N0).powf(-spec.exponent))
}

/// A road profile, either as a cosine series or as sampled data.
#[derive(Debug, Clone, PartialEq)]
pub enum RoadProfile {
    /// r(x) = sum_i d_i cos(2 pi n_i x + theta_i), n_i in cycles/m.
    Spectral {
        components: Vec<SpectralComponent>,
    },
    /// Tabulated (x, r) pairs; linear interpolation between points.
    Sampled { x: Vec<f64>, r: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralComponent {
    /// Amplitude, m.
    pub amplitude: f64,
    /// Spatial frequency, cycles/m.
    pub frequency: f64,
    /// Phase, rad.
    pub phase: f64,
}

impl RoadProfile {
    /// Perfectly smooth road.
    pub fn flat() -> Self {
        RoadProfile::Spectral {
            components: Vec::new(),
        }
    }

    /// (r, dr/dx) at position x.
    pub fn evaluate(&self, x: f64) -> (f64, f64) {
        match self {
            RoadProfile::Spectral { components } => {
                let mut r = 0.0;
                let mut rp = 0.0;
                for c in components {
                    let w = 2.0 * PI * c.frequency;
                    let arg = w * x + c.phase;
                    r += c.amplitude * arg.cos();
                    rp -= c.amplitude * w * arg.sin();
                }
                (r, rp)
            }
            RoadProfile::Sampled { x: xs, r: rs } => {
                let n = xs.len();
                if x <= xs[0] {
                    return (rs[0], sampled_slope(xs, rs, 0));
                }
                if x >= xs[n - 1] {
                    return (rs[n - 1], sampled_slope(xs, rs, n - 1));
                }
                let j = match xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
                    Ok(j) => j,
                    Err(j) => j,
                };
                let (j0, j1) = (j - 1, j.min(n - 1));
                let t = (x - xs[j0]) / (xs[j1] - xs[j0]);
                let r = rs[j0] * (1.0 - t) + rs[j1] * t;
                (r, sampled_slope_at(xs, rs, x))
            }
        }
    }

    /// Persists a sampled form of the profile as two-column text.
    pub fn save_sampled(&self, path: &Path, x_grid: &[f64]) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(f, "# road-profile v1")?;
        for &x in x_grid {
            let (r, _) = self.evaluate(x);
            writeln!(f, "{x:.9} {r:.12e}")?;
        }
        Ok(())
    }

    /// Loads a sampled profile from two-column text with the
    /// `# road-profile v1` header.
    pub fn load_sampled(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        let reader = std::io::BufReader::new(file);
        let mut xs = Vec::new();
        let mut rs = Vec::new();
        let mut saw_header = false;
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if lineno == 0 {
                if trimmed != "# road-profile v1" {
                    return Err(VinoError::Format {
                        path: path.display().to_string(),
                        detail: "missing `# road-profile v1` header".into(),
                    });
                }
                saw_header = true;
                continue;
            }
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut parts = trimmed.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<f64> {
                tok.ok_or_else(|| VinoError::Format {
                    path: path.display().to_string(),
                    detail: format!("line {}: expected two columns", lineno + 1),
                })?
                .parse::<f64>()
                .map_err(|e| VinoError::Format {
                    path: path.display().to_string(),
                    detail: format!("line {}: {e}", lineno + 1),
                })
            };
            xs.push(parse(parts.next())?);
            rs.push(parse(parts.next())?);
        }
        if !saw_header || xs.len() < 2 {
            return Err(VinoError::Format {
                path: path.display().to_string(),
                detail: "need header and at least two samples".into(),
            });
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(VinoError::Format {
                path: path.display().to_string(),
                detail: "x column must be strictly increasing".into(),
            });
        }
        Ok(RoadProfile::Sampled { x: xs, r: rs })
    }
}

fn sampled_slope(xs: &[f64], rs: &[f64], j: usize) -> f64 {
    let n = xs.len();
    if j == 0 {
        (rs[1] - rs[0]) / (xs[1] - xs[0])
    } else if j == n - 1 {
        (rs[n - 1] - rs[n - 2]) / (xs[n - 1] - xs[n - 2])
    } else {
        (rs[j + 1] - rs[j - 1]) / (xs[j + 1] - xs[j - 1])
    }
}

/// Central finite difference on the sample grid around x.
fn sampled_slope_at(xs: &[f64], rs: &[f64], x: f64) -> f64 {
    let n = xs.len();
    let j = match xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
        Ok(j) => j,
        Err(j) => j.saturating_sub(1),
    };
    let j = j.min(n - 2);
    // inside a segment the linear-interp derivative is the segment slope
    if x > xs[j] && x < xs[j + 1] {
        (rs[j + 1] - rs[j]) / (xs[j + 1] - xs[j])
    } else {
        sampled_slope(xs, rs, j)
    }
}

/// Synthesizes a spectral profile: n_i = n_min + (i + 1/2) delta_n,
/// d_i = sqrt(2 G_d(n_i) delta_n), phases uniform on [0, 2 pi).
pub fn generate_profile(spec: &RoadClassSpec) -> Result<RoadProfile> {
    spec.validate()?;
    let mut rng = Rng::new(spec.seed);
    let mut components = Vec::new();
    let mut i = 0usize;
    loop {
        let n_i = spec.n_min + (i as f64 + 0.5) * spec.delta_n;
        if n_i > spec.n_max {
            break;
        }
        let g = psd_value(spec, n_i)?;
        components.push(SpectralComponent {
            amplitude: (2.0 * g * spec.delta_n).sqrt(),
            frequency: n_i,
            phase: rng.uniform(0.0, 2.0 * PI),
        });
        i += 1;
    }
    if components.is_empty() {
        return Err(VinoError::EmptyBand {
            n_min: spec.n_min,
            n_max: spec.n_max,
            delta_n: spec.delta_n,
        });
    }
    Ok(RoadProfile::Spectral { components })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class_a(seed: u64) -> RoadClassSpec {
        RoadClassSpec {
            g_d_n0: 1.0e-9,
            exponent: 2.0,
            n_min: 0.05,
            n_max: 10.0,
            delta_n: 0.01,
            seed,
        }
    }

    #[test]
    fn psd_at_reference_frequency() {
        let spec = class_a(0);
        assert!((psd_value(&spec, 0.1).unwrap() - 1.0e-9).abs() < 1e-24);
    }

    #[test]
    fn psd_follows_inverse_square() {
        let spec = class_a(0);
        let g = psd_value(&spec, 0.2).unwrap();
        assert!((g - 2.5e-10).abs() < 1e-24, "g = {g}");
    }

    #[test]
    fn psd_at_n0_returns_g0_for_any_exponent() {
        for w in [1.0, 2.0, 3.7] {
            let spec = RoadClassSpec {
                exponent: w,
                ..class_a(0)
            };
            assert!((psd_value(&spec, N0).unwrap() - spec.g_d_n0).abs() < 1e-24);
        }
    }

    #[test]
    fn psd_rejects_nonpositive_frequency() {
        assert!(psd_value(&class_a(0), 0.0).is_err());
        assert!(psd_value(&class_a(0), -1.0).is_err());
    }

    #[test]
    fn zero_psd_gives_flat_road() {
        let spec = RoadClassSpec {
            g_d_n0: 0.0,
            ..class_a(3)
        };
        let road = generate_profile(&spec).unwrap();
        for x in [0.0, 1.3, 5.4] {
            let (r, rp) = road.evaluate(x);
            assert_eq!(r, 0.0);
            assert_eq!(rp, 0.0);
        }
    }

    #[test]
    fn single_component_amplitude_matches_hand_value() {
        // one component at n = 0.1 with G = 8e-6: d = sqrt(2 * 8e-6 * 0.01)
        let spec = RoadClassSpec {
            g_d_n0: 8.0e-6,
            exponent: 2.0,
            n_min: 0.095,
            n_max: 0.1049,
            delta_n: 0.01,
            seed: 0,
        };
        let road = generate_profile(&spec).unwrap();
        let RoadProfile::Spectral { components } = &road else {
            panic!("expected spectral profile")
        };
        assert_eq!(components.len(), 1);
        let d = components[0].amplitude;
        assert!((d - 4.0e-4).abs() < 1e-12, "d = {d}");
        assert!((components[0].frequency - 0.1).abs() < 1e-12);
    }

    #[test]
    fn identical_seeds_reproduce_profiles() {
        let a = generate_profile(&class_a(11)).unwrap();
        let b = generate_profile(&class_a(11)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_band_is_an_error() {
        let spec = RoadClassSpec {
            n_min: 5.0,
            n_max: 5.001,
            delta_n: 0.01,
            ..class_a(0)
        };
        assert!(matches!(
            generate_profile(&spec),
            Err(VinoError::EmptyBand { .. })
        ));
    }

    #[test]
    fn flat_profile_evaluates_to_zero() {
        let (r, rp) = RoadProfile::flat().evaluate(1.7);
        assert_eq!((r, rp), (0.0, 0.0));
    }

    #[test]
    fn single_cosine_derivative_is_analytic() {
        // r(x) = cos(x - pi/2) = sin(x); r'(0) = 1
        let road = RoadProfile::Spectral {
            components: vec![SpectralComponent {
                amplitude: 1.0,
                frequency: 1.0 / (2.0 * PI),
                phase: -PI / 2.0,
            }],
        };
        let (_, rp) = road.evaluate(0.0);
        assert!((rp - 1.0).abs() < 1e-12, "r'(0) = {rp}");
    }

    #[test]
    fn spectral_derivative_matches_finite_difference() {
        let road = generate_profile(&class_a(5)).unwrap();
        let h = 1e-8;
        for x in [0.31, 2.2, 4.9] {
            let (_, rp) = road.evaluate(x);
            let (rm, _) = road.evaluate(x - h);
            let (rpl, _) = road.evaluate(x + h);
            let fd = (rpl - rm) / (2.0 * h);
            let denom = rp.abs().max(1e-12);
            assert!(
                ((rp - fd) / denom).abs() < 1e-5,
                "x={x}: analytic {rp}, fd {fd}"
            );
        }
    }

    #[test]
    fn sampled_sawtooth_slope_matches_segments() {
        let xs: Vec<f64> = (0..21).map(|i| i as f64 * 0.5).collect();
        let rs: Vec<f64> = xs.iter().map(|&x| (x % 2.0 - 1.0).abs()).collect();
        let road = RoadProfile::Sampled { x: xs, r: rs };
        // away from kinks the slope is +-1
        let (_, s1) = road.evaluate(0.25);
        assert!((s1.abs() - 1.0).abs() < 1e-6, "slope {s1}");
        let (_, s2) = road.evaluate(1.25);
        assert!((s2.abs() - 1.0).abs() < 1e-6, "slope {s2}");
    }

    #[test]
    fn sampled_roundtrip_through_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("road.txt");
        let road = generate_profile(&class_a(2)).unwrap();
        let grid: Vec<f64> = (0..109).map(|i| i as f64 * 0.05).collect();
        road.save_sampled(&path, &grid).unwrap();
        let loaded = RoadProfile::load_sampled(&path).unwrap();
        for &x in &[0.1, 2.02, 5.0] {
            let (a, _) = road.evaluate(x);
            let (b, _) = loaded.evaluate(x);
            assert!((a - b).abs() < 1e-7, "x={x}: {a} vs {b}");
        }
    }

    #[test]
    fn load_rejects_missing_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.txt");
        std::fs::write(&path, "0.0 0.0\n1.0 0.1\n").unwrap();
        assert!(RoadProfile::load_sampled(&path).is_err());
    }

    /// Periodogram of a long realization should reproduce the target PSD
    /// within a factor of two when averaged over seeds and bands.
    #[test]
    fn empirical_psd_matches_target_within_factor_two() {
        let n_fft = 32768usize;
        let dx = 0.025; // record length 819.2 m, Nyquist 20 cycles/m
        let n_seeds = 20;
        let mut mean_psd = vec![0.0; n_fft / 2 + 1];
        for seed in 0..n_seeds {
            let road = generate_profile(&class_a(100 + seed)).unwrap();
            let samples: Vec<f64> = (0..n_fft)
                .map(|i| road.evaluate(i as f64 * dx).0)
                .collect();
            let spec = crate::fft::fft_r2c(&samples);
            for (k, c) in spec.iter().enumerate() {
                // one-sided periodogram, m^3
                let scale = if k == 0 || k == n_fft / 2 { 1.0 } else { 2.0 };
                mean_psd[k] += scale * c.norm_sqr() * dx / n_fft as f64;
            }
        }
        for v in &mut mean_psd {
            *v /= n_seeds as f64;
        }
        let spec = class_a(0);
        let df = 1.0 / (n_fft as f64 * dx);
        // average over bands of 0.25 cycles/m across [0.3, 8]
        let mut band_lo = 0.3;
        while band_lo < 8.0 {
            let band_hi = band_lo + 0.25;
            let (mut acc, mut cnt, mut target) = (0.0, 0usize, 0.0);
            for k in 1..mean_psd.len() {
                let n = k as f64 * df;
                if n >= band_lo && n < band_hi {
                    acc += mean_psd[k];
                    target += psd_value(&spec, n).unwrap();
                    cnt += 1;
                }
            }
            let (avg, tgt) = (acc / cnt as f64, target / cnt as f64);
            let ratio = avg / tgt;
            assert!(
                (0.5..2.0).contains(&ratio),
                "band [{band_lo}, {band_hi}): ratio {ratio}"
            );
            band_lo = band_hi;
        }
    }
}
