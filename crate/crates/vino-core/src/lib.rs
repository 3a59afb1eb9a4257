//! Vehicle-bridge interaction laboratory: a coupled FE simulator that
//! maps damage fields to response fields, and a from-scratch 1D Fourier
//! neural operator trained forward (fast FE surrogate) and inverse
//! (sensor responses to damage field), with projection-layer fine-tuning.

pub mod beam;
pub mod config;
pub mod damage;
pub mod error;
pub mod fft;
pub mod linalg;
pub mod rng;
pub mod road;
pub mod solver;
pub mod tensor;
pub mod vehicle;

pub use beam::{
    assemble_bridge, rayleigh_coefficients, AssembledBridge, BeamProperties, DamageField,
    RayleighParams,
};
pub use config::RunConfig;
pub use damage::{bump_damage, sample_damage_field, GrfConfig, GrfSampler};
pub use error::{Result, VinoError};
pub use road::{generate_profile, psd_value, RoadClassSpec, RoadProfile};
pub use solver::{
    extract_sensors, free_vibration, simulate, SensorLayout, SensorQuantity, SimulationResult,
    SolverConfig,
};
pub use tensor::{Scalar, Tensor};
pub use vehicle::{speed_parameter, suspension_damping, vehicle_matrices, HalfCar};
