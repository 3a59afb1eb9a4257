//! The run configuration document: one JSON file with a section per
//! subsystem. Every field has a default matching the reference bridge
//! and vehicle; unknown keys are rejected.

use crate::beam::{rayleigh_coefficients, BeamProperties, RayleighParams};
use crate::damage::GrfConfig;
use crate::error::{Result, VinoError};
use crate::road::RoadClassSpec;
use crate::solver::{SensorLayout, SensorQuantity, SolverConfig};
use crate::vehicle::HalfCar;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct BridgeConfig {
    /// Span length, m.
    pub length: f64,
    /// Mass per unit length, kg/m.
    pub mass_per_length: f64,
    /// Young's modulus, N/m^2.
    pub youngs_modulus: f64,
    /// Second moment of area, m^4.
    pub moment_of_inertia: f64,
    /// Element count.
    pub n_elements: usize,
    /// Rayleigh anchor frequencies (measured), Hz.
    pub rayleigh_f1: f64,
    pub rayleigh_f2: f64,
    /// Damping ratios at the anchors.
    pub zeta1: f64,
    pub zeta2: f64,
}

impl Default for BridgeConfig {
    fn default() -> Self {
        Self {
            length: 5.4,
            mass_per_length: 53.47,
            youngs_modulus: 2.1e11,
            moment_of_inertia: 5.49e-7,
            n_elements: 512,
            rayleigh_f1: 3.64,
            rayleigh_f2: 14.56,
            zeta1: 0.007,
            zeta2: 0.007,
        }
    }
}

impl BridgeConfig {
    /// Beam properties with an explicit element count.
    pub fn properties(&self, n_elements: usize) -> BeamProperties {
        BeamProperties {
            length: self.length,
            mass_per_length: self.mass_per_length,
            youngs_modulus: self.youngs_modulus,
            moment_of_inertia: self.moment_of_inertia,
            n_elements,
        }
    }

    pub fn beam(&self) -> BeamProperties {
        self.properties(self.n_elements)
    }

    pub fn rayleigh(&self) -> Result<RayleighParams> {
        rayleigh_coefficients(self.rayleigh_f1, self.rayleigh_f2, self.zeta1, self.zeta2)
    }
}

/// Lab crawl speed, m/s.
pub const LAB_SPEED: f64 = 0.55;
/// Reference vehicle speed, m/s.
pub const TABLE_SPEED: f64 = 1.35;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct VehicleConfig {
    /// Travel speed, m/s. Presets: 1.35 (reference) and 0.55 (lab crawl).
    pub speed: f64,
    /// Axle spacing, m.
    pub axle_spacing: f64,
    /// Front-axle offset from the center of mass, m (rear = spacing - front).
    pub front_offset: f64,
    /// Sprung mass, kg.
    pub sprung_mass: f64,
    /// Pitch inertia, kg m^2. None = two point masses at the axles,
    /// m (d/2)^2.
    pub pitch_inertia: Option<f64>,
    /// Suspension stiffness per axle, N/m.
    pub stiffness_axle1: f64,
    pub stiffness_axle2: f64,
    /// Suspension damping per axle, N s/m.
    pub damping_axle1: f64,
    pub damping_axle2: f64,
}

impl Default for VehicleConfig {
    fn default() -> Self {
        Self {
            speed: TABLE_SPEED,
            axle_spacing: 0.3,
            front_offset: 0.15,
            sprung_mass: 15.38,
            pitch_inertia: None,
            stiffness_axle1: 1666.0,
            stiffness_axle2: 1666.0,
            damping_axle1: 45.28,
            damping_axle2: 45.28,
        }
    }
}

impl VehicleConfig {
    pub fn half_car(&self) -> HalfCar {
        let d1 = self.front_offset;
        let d2 = self.axle_spacing - self.front_offset;
        let iv = self
            .pitch_inertia
            .unwrap_or(self.sprung_mass * (self.axle_spacing / 2.0).powi(2));
        HalfCar {
            sprung_mass: self.sprung_mass,
            pitch_inertia: iv,
            d1,
            d2,
            k1: self.stiffness_axle1,
            k2: self.stiffness_axle2,
            c1: self.damping_axle1,
            c2: self.damping_axle2,
            speed: self.speed,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct RoadConfig {
    /// PSD at the 0.1 cycle/m reference, m^3 (class A).
    pub g_d_n0: f64,
    pub exponent: f64,
    pub n_min: f64,
    pub n_max: f64,
    pub delta_n: f64,
    pub seed: u64,
    /// Optional measured-profile file (two-column text). Overrides the
    /// spectral synthesis when set.
    pub profile_file: Option<String>,
}

impl Default for RoadConfig {
    fn default() -> Self {
        Self {
            g_d_n0: 1.0e-9,
            exponent: 2.0,
            n_min: 0.05,
            n_max: 10.0,
            delta_n: 0.01,
            seed: 0,
            profile_file: None,
        }
    }
}

impl RoadConfig {
    pub fn spec(&self) -> RoadClassSpec {
        RoadClassSpec {
            g_d_n0: self.g_d_n0,
            exponent: self.exponent,
            n_min: self.n_min,
            n_max: self.n_max,
            delta_n: self.delta_n,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSection {
    /// Time step, s.
    pub dt: f64,
    pub n_steps: usize,
    pub newmark_gamma: f64,
    pub newmark_beta: f64,
    /// Initial front-axle position, m.
    pub entry_offset: f64,
}

impl Default for SolverSection {
    fn default() -> Self {
        Self {
            dt: 0.005,
            n_steps: 844,
            newmark_gamma: 0.5,
            newmark_beta: 0.25,
            entry_offset: 0.0,
        }
    }
}

impl SolverSection {
    pub fn solver(&self) -> SolverConfig {
        SolverConfig {
            dt: self.dt,
            n_steps: self.n_steps,
            newmark_gamma: self.newmark_gamma,
            newmark_beta: self.newmark_beta,
            entry_offset: self.entry_offset,
            reverse: false,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct SensorSection {
    /// Positions in units of span length; default quarter, mid,
    /// three-quarter.
    pub positions_frac: Vec<f64>,
    /// displacement | acceleration | rotation
    pub quantity: String,
}

impl Default for SensorSection {
    fn default() -> Self {
        Self {
            positions_frac: vec![0.25, 0.5, 0.75],
            quantity: "displacement".into(),
        }
    }
}

impl SensorSection {
    pub fn layout(&self, length: f64) -> Result<SensorLayout> {
        let quantity = match self.quantity.as_str() {
            "displacement" => SensorQuantity::Displacement,
            "acceleration" => SensorQuantity::Acceleration,
            "rotation" => SensorQuantity::Rotation,
            other => {
                return Err(VinoError::Config(format!(
                    "unknown sensor quantity `{other}`"
                )))
            }
        };
        Ok(SensorLayout {
            positions: self.positions_frac.iter().map(|f| f * length).collect(),
            quantity,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct GrfSection {
    /// Correlation length, m.
    pub length_scale: f64,
    pub std_dev: f64,
    pub mean: f64,
    pub delta_max: f64,
    pub seed: u64,
}

impl Default for GrfSection {
    fn default() -> Self {
        Self {
            length_scale: 0.8,
            std_dev: 0.08,
            mean: 0.08,
            delta_max: 0.5,
            seed: 0,
        }
    }
}

impl GrfSection {
    pub fn grf(&self) -> GrfConfig {
        GrfConfig {
            length_scale: self.length_scale,
            std_dev: self.std_dev,
            mean: self.mean,
            delta_max: self.delta_max,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct DatasetSection {
    /// Total sample count; split 5:1 train/test unless train_count is set.
    pub n_samples: usize,
    pub train_count: Option<usize>,
    pub root_seed: u64,
    /// Store displacement at every node instead of the 3-sensor layout.
    pub full_field: bool,
    /// Draw a fresh road realization per sample.
    pub road_per_sample: bool,
}

impl Default for DatasetSection {
    fn default() -> Self {
        Self {
            n_samples: 240,
            train_count: None,
            root_seed: 7,
            full_field: false,
            road_per_sample: false,
        }
    }
}

impl DatasetSection {
    pub fn split(&self, n: usize) -> (usize, usize) {
        let train = self.train_count.unwrap_or(n * 5 / 6).min(n);
        (train, n - train)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct FnoSection {
    /// Lifted channel width.
    pub width: usize,
    /// Retained Fourier modes per spectral block.
    pub modes: usize,
    /// Number of spectral blocks.
    pub depth: usize,
    /// gelu | identity
    pub activation: String,
}

impl Default for FnoSection {
    fn default() -> Self {
        Self {
            width: 32,
            modes: 16,
            depth: 4,
            activation: "gelu".into(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct TrainSection {
    pub learning_rate: f64,
    pub batch_size: usize,
    pub epochs: usize,
    /// Halve the learning rate every `lr_step` epochs.
    pub lr_step: usize,
    pub lr_factor: f64,
    pub weight_decay: f64,
    pub seed: u64,
    /// Grid length both inputs and outputs are resampled to.
    pub model_grid: usize,
    /// Worker threads for per-sample gradients (1 = sequential).
    pub jobs: usize,
}

impl Default for TrainSection {
    fn default() -> Self {
        Self {
            learning_rate: 1e-3,
            batch_size: 20,
            epochs: 500,
            lr_step: 100,
            lr_factor: 0.5,
            weight_decay: 1e-4,
            seed: 0,
            model_grid: 256,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct PseudoExpSection {
    /// Multiplier on both suspension damping constants.
    pub damping_scale: f64,
    /// Multiplier on the bridge Young's modulus.
    pub youngs_scale: f64,
    /// Sensor noise as a fraction of per-channel RMS.
    pub noise_std: f64,
    /// Healthy-state records generated for fine-tuning.
    pub n_int_records: usize,
    /// Bump height of the two built-in damage scenarios.
    pub bump_peak: f64,
    /// Bump width, m.
    pub bump_width: f64,
}

impl Default for PseudoExpSection {
    fn default() -> Self {
        Self {
            damping_scale: 1.5,
            youngs_scale: 0.97,
            noise_std: 0.01,
            n_int_records: 20,
            bump_peak: 0.2,
            bump_width: 0.2,
        }
    }
}

/// Full pipeline configuration.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub bridge: BridgeConfig,
    pub vehicle: VehicleConfig,
    pub road: RoadConfig,
    pub solver: SolverSection,
    pub sensors: SensorSection,
    pub grf: GrfSection,
    pub dataset: DatasetSection,
    pub fno: FnoSection,
    pub train: TrainSection,
    pub pseudo: PseudoExpSection,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| VinoError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialization cannot fail")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_roundtrips_through_json() {
        let cfg = RunConfig::default();
        let text = cfg.to_json_pretty();
        let back = RunConfig::from_json(&text).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn unknown_keys_are_rejected_with_key_name() {
        let err = RunConfig::from_json(r#"{"bridge": {"lenght": 5.0}}"#).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("lenght"), "diagnostic should name the key: {msg}");
    }

    #[test]
    fn empty_document_yields_defaults() {
        let cfg = RunConfig::from_json("{}").unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.bridge.length, 5.4);
        assert_eq!(cfg.vehicle.speed, TABLE_SPEED);
    }

    #[test]
    fn split_matches_protocol() {
        let ds = DatasetSection::default();
        assert_eq!(ds.split(1200), (1000, 200));
        assert_eq!(ds.split(240), (200, 40));
    }

    #[test]
    fn default_pitch_inertia_uses_point_masses() {
        let car = VehicleConfig::default().half_car();
        assert!((car.pitch_inertia - 15.38 * 0.15 * 0.15).abs() < 1e-12);
    }
}
