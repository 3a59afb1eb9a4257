//! 2-DOF half-car: bounce and pitch over two suspended axles.

use crate::error::{Result, VinoError};

/// Standard gravity, m/s^2.
pub const GRAVITY: f64 = 9.81;

/// Half-car parameters. Axle 1 is the front axle (leads in the travel
/// direction), offset `d1` ahead of the center of mass; axle 2 trails by
/// `d2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfCar {
    /// Sprung mass, kg.
    pub sprung_mass: f64,
    /// Pitch moment of inertia, kg m^2.
    pub pitch_inertia: f64,
    /// Center of mass to front axle, m.
    pub d1: f64,
    /// Center of mass to rear axle, m.
    pub d2: f64,
    /// Suspension stiffness per axle, N/m.
    pub k1: f64,
    pub k2: f64,
    /// Suspension damping per axle, N s/m.
    pub c1: f64,
    pub c2: f64,
    /// Travel speed, m/s.
    pub speed: f64,
}

impl HalfCar {
    pub fn validate(&self) -> Result<()> {
        if self.sprung_mass < 0.0
            || self.pitch_inertia < 0.0
            || self.k1 < 0.0
            || self.k2 < 0.0
            || self.c1 < 0.0
            || self.c2 < 0.0
        {
            return Err(VinoError::NegativeInput(
                "vehicle masses, stiffnesses and dampings must be >= 0".into(),
            ));
        }
        if self.d1 + self.d2 <= 0.0 {
            return Err(VinoError::Config("axle spacing d1 + d2 must be > 0".into()));
        }
        if self.speed <= 0.0 {
            return Err(VinoError::Config("vehicle speed must be > 0".into()));
        }
        Ok(())
    }

    /// Axle spacing d = d1 + d2.
    pub fn axle_spacing(&self) -> f64 {
        self.d1 + self.d2
    }

    /// Static axle loads (front, rear): (d2/d) m g and (d1/d) m g.
    pub fn static_axle_loads(&self) -> (f64, f64) {
        let d = self.axle_spacing();
        let w = self.sprung_mass * GRAVITY;
        (self.d2 / d * w, self.d1 / d * w)
    }

    /// Bounce natural frequency of the symmetric car, Hz.
    pub fn bounce_frequency(&self) -> f64 {
        ((self.k1 + self.k2) / self.sprung_mass).sqrt() / (2.0 * std::f64::consts::PI)
    }
}

/// Suspension damping from the critical-damping rule c = zeta * 2 sqrt(m_a k_a)
/// with the axle mass taken as half the sprung mass.
pub fn suspension_damping(sprung_mass: f64, axle_stiffness: f64, zeta_v: f64) -> Result<f64> {
    if sprung_mass <= 0.0 || axle_stiffness <= 0.0 || zeta_v < 0.0 {
        return Err(VinoError::NegativeInput(format!(
            "suspension_damping requires m > 0, k > 0, zeta >= 0; got ({sprung_mass}, {axle_stiffness}, {zeta_v})"
        )));
    }
    let m_a = sprung_mass / 2.0;
    Ok(zeta_v * 2.0 * (m_a * axle_stiffness).sqrt())
}

/// Speed parameter gamma = v / (2 f1 L).
pub fn speed_parameter(speed: f64, f1: f64, length: f64) -> Result<f64> {
    if f1 <= 0.0 || length <= 0.0 {
        return Err(VinoError::NonPositiveDenominator(format!(
            "speed_parameter requires f1 > 0 and L > 0, got f1={f1}, L={length}"
        )));
    }
    Ok(speed / (2.0 * f1 * length))
}

/// 2x2 mass, damping, stiffness matrices over (z_v, theta_v), row-major.
///
/// K = [[k1+k2, k1 d1 - k2 d2], [k1 d1 - k2 d2, k1 d1^2 + k2 d2^2]],
/// C analogous; M = diag(m_v, I_v).
pub fn vehicle_matrices(car: &HalfCar) -> ([f64; 4], [f64; 4], [f64; 4]) {
    let m = [car.sprung_mass, 0.0, 0.0, car.pitch_inertia];
    let cpl = |a1: f64, a2: f64| -> [f64; 4] {
        let off = a1 * car.d1 - a2 * car.d2;
        [
            a1 + a2,
            off,
            off,
            a1 * car.d1 * car.d1 + a2 * car.d2 * car.d2,
        ]
    };
    (m, cpl(car.c1, car.c2), cpl(car.k1, car.k2))
}

/// Coupling vector of axle i over (z_v, theta_v): e1 = (1, d1), e2 = (1, -d2).
pub fn axle_coupling(car: &HalfCar, axle: usize) -> [f64; 2] {
    match axle {
        0 => [1.0, car.d1],
        1 => [1.0, -car.d2],
        _ => panic!("half-car has two axles"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::VehicleConfig;

    fn table2() -> HalfCar {
        VehicleConfig::default().half_car()
    }

    #[test]
    fn damping_matches_reported_value() {
        let c = suspension_damping(15.38, 1666.0, 0.2).unwrap();
        assert!((c - 45.28).abs() < 0.01, "c = {c}");
    }

    #[test]
    fn zero_damping_ratio_gives_zero() {
        assert_eq!(suspension_damping(10.0, 500.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn damping_scales_with_sqrt_mass() {
        let base = suspension_damping(10.0, 500.0, 0.3).unwrap();
        let heavy = suspension_damping(40.0, 500.0, 0.3).unwrap();
        assert!((heavy - 2.0 * base).abs() < 1e-12);
    }

    #[test]
    fn damping_rejects_nonpositive_inputs() {
        assert!(suspension_damping(-1.0, 500.0, 0.2).is_err());
        assert!(suspension_damping(1.0, 0.0, 0.2).is_err());
    }

    #[test]
    fn speed_parameter_matches_lab_values() {
        let g = speed_parameter(0.55, 3.64, 5.4).unwrap();
        assert!((g - 0.01399).abs() < 5e-6, "gamma = {g}");
    }

    #[test]
    fn speed_parameter_zero_speed() {
        assert_eq!(speed_parameter(0.0, 3.64, 5.4).unwrap(), 0.0);
    }

    #[test]
    fn speed_parameter_is_ratio_invariant() {
        let a = speed_parameter(1.2, 2.0, 6.0).unwrap();
        let b = speed_parameter(3.6, 6.0, 6.0).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn speed_parameter_rejects_bad_denominator() {
        assert!(speed_parameter(1.0, 0.0, 5.0).is_err());
    }

    #[test]
    fn symmetric_car_decouples_bounce_and_pitch() {
        let car = table2();
        let (_, c, k) = vehicle_matrices(&car);
        assert_eq!(k[1], 0.0);
        assert_eq!(c[1], 0.0);
    }

    #[test]
    fn table2_bounce_stiffness() {
        let car = table2();
        let (_, _, k) = vehicle_matrices(&car);
        assert!((k[0] - 3332.0).abs() < 1e-9);
    }

    #[test]
    fn zero_stiffness_and_damping_give_zero_matrices() {
        let car = HalfCar {
            k1: 0.0,
            k2: 0.0,
            c1: 0.0,
            c2: 0.0,
            ..table2()
        };
        let (_, c, k) = vehicle_matrices(&car);
        assert!(c.iter().all(|&v| v == 0.0));
        assert!(k.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn static_loads_sum_to_weight() {
        let car = table2();
        let (r1, r2) = car.static_axle_loads();
        assert!((r1 + r2 - car.sprung_mass * GRAVITY).abs() < 1e-12);
    }

    #[test]
    fn bounce_frequency_matches_closed_form() {
        let car = table2();
        // sqrt(3332 / 15.38) / 2 pi
        assert!((car.bounce_frequency() - 2.343).abs() < 1e-3);
    }
}
