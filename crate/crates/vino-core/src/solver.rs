//! Coupled vehicle-bridge time integration.
//!
//! The bridge and the 2-DOF half-car are advanced monolithically with
//! Newmark-beta in acceleration form. Coupling stiffness/damping blocks
//! are rebuilt every step from the Hermite shape vectors at the current
//! axle positions; with the suspension contributions they add a rank-one
//! term per axle inside the bridge band plus a 2-column border, so each
//! step costs one banded Cholesky and three banded solves.
//!
//! Sign conventions: displacements positive upward, contact forces
//! positive downward onto the deck. Suspension deflection of axle i is
//! e_i . u_v - l_i . Z_b - r(x_i) with e_1 = (1, d1), e_2 = (1, -d2).

use crate::beam::{AssembledBridge, SparseShape};
use crate::error::{Result, VinoError};
use crate::linalg::SymBand;
use crate::road::RoadProfile;
use crate::vehicle::{axle_coupling, vehicle_matrices, HalfCar, GRAVITY};
use std::sync::Arc;

/// Newmark integration settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Time step, s.
    pub dt: f64,
    /// Number of recorded steps (step 0 is the initial state).
    pub n_steps: usize,
    pub newmark_gamma: f64,
    pub newmark_beta: f64,
    /// Initial front-axle position, m (negative = before the deck).
    pub entry_offset: f64,
    /// Traverse right-to-left instead of left-to-right.
    pub reverse: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            dt: 0.005,
            n_steps: 844,
            newmark_gamma: 0.5,
            newmark_beta: 0.25,
            entry_offset: 0.0,
            reverse: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dt <= 0.0 || self.n_steps < 1 {
            return Err(VinoError::Config(
                "solver requires dt > 0 and n_steps >= 1".into(),
            ));
        }
        let (g, b) = (self.newmark_gamma, self.newmark_beta);
        if !(g >= 0.5 && 2.0 * b >= g) {
            return Err(VinoError::Config(format!(
                "Newmark parameters outside the unconditionally stable region: gamma={g}, beta={b}"
            )));
        }
        Ok(())
    }
}

/// Which kinematic field a sensor reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SensorQuantity {
    Displacement,
    Acceleration,
    Rotation,
}

/// Sensor positions along the span plus the quantity they record.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorLayout {
    pub positions: Vec<f64>,
    pub quantity: SensorQuantity,
}

impl SensorLayout {
    /// Quarter, mid, three-quarter displacement sensors.
    pub fn default_for(length: f64) -> Self {
        Self {
            positions: vec![length / 4.0, length / 2.0, 3.0 * length / 4.0],
            quantity: SensorQuantity::Displacement,
        }
    }
}

/// Full time histories of one coupled run.
#[derive(Debug, Clone)]
pub struct SimulationResult {
    pub time: Vec<f64>,
    /// step x free-DOF matrices, row per step.
    pub bridge_disp: Vec<Vec<f64>>,
    pub bridge_vel: Vec<Vec<f64>>,
    pub bridge_acc: Vec<Vec<f64>>,
    /// Per step: z_v, theta_v, their velocities, their accelerations.
    pub vehicle_state: Vec<[f64; 6]>,
    /// Per step: contact forces (R1, R2), N, positive downward.
    pub contact_forces: Vec<[f64; 2]>,
    /// Per step: axle positions (x1, x2), m.
    pub axle_positions: Vec<[f64; 2]>,
    pub bridge: Arc<AssembledBridge>,
    pub dt: f64,
}

impl SimulationResult {
    pub fn n_steps(&self) -> usize {
        self.time.len()
    }

    /// 0.5 v' M v + 0.5 u' K u of the bridge at one step.
    pub fn mechanical_energy(&self, step: usize) -> f64 {
        let u = &self.bridge_disp[step];
        let v = &self.bridge_vel[step];
        0.5 * self.bridge.m_b.quadratic_form(v) + 0.5 * self.bridge.k_b.quadratic_form(u)
    }
}

struct AxleState {
    shape: SparseShape,
    coupling: [f64; 2],
    stiffness: f64,
    damping: f64,
    static_share: f64,
    /// Road elevation and its time derivative at the contact.
    road: f64,
    road_rate: f64,
}

/// Positions of both axles at time t. Axle 1 leads the traverse.
fn axle_positions(car: &HalfCar, cfg: &SolverConfig, length: f64, t: f64) -> [f64; 2] {
    let d = car.axle_spacing();
    if cfg.reverse {
        let x1 = length - cfg.entry_offset - car.speed * t;
        [x1, x1 + d]
    } else {
        let x1 = cfg.entry_offset + car.speed * t;
        [x1, x1 - d]
    }
}

fn axle_states(
    bridge: &AssembledBridge,
    car: &HalfCar,
    road: &RoadProfile,
    cfg: &SolverConfig,
    t: f64,
) -> [AxleState; 2] {
    let length = bridge.length();
    let pos = axle_positions(car, cfg, length, t);
    let x_rate = if cfg.reverse { -car.speed } else { car.speed };
    let (share1, share2) = car.static_axle_loads();
    let mk = |axle: usize, x: f64, k: f64, c: f64, share: f64| -> AxleState {
        let on_deck = (0.0..=length).contains(&x);
        let (r, rp) = if on_deck { road.evaluate(x) } else { (0.0, 0.0) };
        AxleState {
            shape: bridge.shape_sparse(x),
            coupling: axle_coupling(car, axle),
            stiffness: k,
            damping: c,
            static_share: share,
            road: r,
            road_rate: x_rate * rp,
        }
    };
    [
        mk(0, pos[0], car.k1, car.c1, share1),
        mk(1, pos[1], car.k2, car.c2, share2),
    ]
}

/// C(t) or K(t) applied to a full state vector [w_b; w_v]; `select`
/// picks the per-axle coefficient (damping or stiffness).
fn coupled_matvec(
    base: &SymBand,
    vehicle_block: &[f64; 4],
    axles: &[AxleState; 2],
    select: fn(&AxleState) -> f64,
    w_b: &[f64],
    w_v: &[f64; 2],
    out_b: &mut [f64],
    out_v: &mut [f64; 2],
) {
    base.matvec(w_b, out_b);
    out_v[0] = vehicle_block[0] * w_v[0] + vehicle_block[1] * w_v[1];
    out_v[1] = vehicle_block[2] * w_v[0] + vehicle_block[3] * w_v[1];
    for ax in axles {
        let coef = select(ax);
        if coef == 0.0 {
            continue;
        }
        let s_dot_wb = ax.shape.dot(w_b);
        let e_dot_wv = ax.coupling[0] * w_v[0] + ax.coupling[1] * w_v[1];
        ax.shape.axpy_into(coef * (s_dot_wb - e_dot_wv), out_b);
        out_v[0] -= coef * ax.coupling[0] * s_dot_wb;
        out_v[1] -= coef * ax.coupling[1] * s_dot_wb;
    }
}

/// External force at time t: static shares and road forcing.
fn external_force(axles: &[AxleState; 2], f_b: &mut [f64], f_v: &mut [f64; 2]) {
    f_b.fill(0.0);
    *f_v = [0.0, 0.0];
    for ax in axles {
        let q = ax.stiffness * ax.road + ax.damping * ax.road_rate;
        ax.shape.axpy_into(-(ax.static_share + q), f_b);
        f_v[0] += ax.coupling[0] * q;
        f_v[1] += ax.coupling[1] * q;
    }
}

/// Solves the bordered effective system
/// [A_bb  B; B' D] [a_b; a_v] = [r_b; r_v]
/// with A_bb banded SPD and a 2x2 Schur complement.
fn solve_bordered(
    a_bb: SymBand,
    b_cols: &[Vec<f64>; 2],
    d: &[f64; 4],
    r_b: &[f64],
    r_v: &[f64; 2],
    step: usize,
) -> Result<(Vec<f64>, [f64; 2])> {
    let chol = a_bb.cholesky().map_err(|e| VinoError::SingularEffectiveMatrix {
        step,
        detail: e.to_string(),
    })?;
    let y0 = chol.solve(&b_cols[0]);
    let y1 = chol.solve(&b_cols[1]);
    let yf = chol.solve(r_b);
    let dot = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };
    let s = [
        d[0] - dot(&b_cols[0], &y0),
        d[1] - dot(&b_cols[0], &y1),
        d[2] - dot(&b_cols[1], &y0),
        d[3] - dot(&b_cols[1], &y1),
    ];
    let rhs = [r_v[0] - dot(&b_cols[0], &yf), r_v[1] - dot(&b_cols[1], &yf)];
    let det = s[0] * s[3] - s[1] * s[2];
    if det.abs() < 1e-300 || !det.is_finite() {
        return Err(VinoError::SingularEffectiveMatrix {
            step,
            detail: format!("vehicle Schur complement determinant {det}"),
        });
    }
    let a_v = [
        (s[3] * rhs[0] - s[1] * rhs[1]) / det,
        (-s[2] * rhs[0] + s[0] * rhs[1]) / det,
    ];
    let mut a_b = yf;
    for (o, (c0, c1)) in a_b.iter_mut().zip(y0.iter().zip(y1.iter())) {
        *o -= c0 * a_v[0] + c1 * a_v[1];
    }
    Ok((a_b, a_v))
}

/// Integrates the coupled vehicle-bridge system.
pub fn simulate(
    bridge: &AssembledBridge,
    car: &HalfCar,
    road: &RoadProfile,
    cfg: &SolverConfig,
) -> Result<SimulationResult> {
    cfg.validate()?;
    car.validate()?;
    let n = bridge.n_free_dofs();
    let dt = cfg.dt;
    let (gamma, beta) = (cfg.newmark_gamma, cfg.newmark_beta);

    let (m_v, c_v, k_v) = vehicle_matrices(car);

    // constant part of the effective matrix
    let mut a0 = bridge.m_b.clone();
    a0.axpy(gamma * dt, &bridge.c_b);
    a0.axpy(beta * dt * dt, &bridge.k_b);
    let mut d0 = [0.0; 4];
    for i in 0..4 {
        d0[i] = m_v[i] + gamma * dt * c_v[i] + beta * dt * dt * k_v[i];
    }

    let mut u_b = vec![0.0; n];
    let mut v_b = vec![0.0; n];
    let mut u_v = [0.0; 2];
    let mut v_v = [0.0; 2];

    // initial accelerations from the t = 0 equilibrium of the coupled
    // system with zero displacement and velocity: M a0 = f(0)
    let axles0 = axle_states(bridge, car, road, cfg, 0.0);
    let mut f_b = vec![0.0; n];
    let mut f_v = [0.0; 2];
    external_force(&axles0, &mut f_b, &mut f_v);
    let chol_m = bridge
        .m_b
        .clone()
        .cholesky()
        .map_err(|e| VinoError::SingularEffectiveMatrix {
            step: 0,
            detail: e.to_string(),
        })?;
    let mut a_b = chol_m.solve(&f_b);
    let mut a_v = [f_v[0] / m_v[0], f_v[1] / m_v[3]];

    let mut out = SimulationResult {
        time: Vec::with_capacity(cfg.n_steps),
        bridge_disp: Vec::with_capacity(cfg.n_steps),
        bridge_vel: Vec::with_capacity(cfg.n_steps),
        bridge_acc: Vec::with_capacity(cfg.n_steps),
        vehicle_state: Vec::with_capacity(cfg.n_steps),
        contact_forces: Vec::with_capacity(cfg.n_steps),
        axle_positions: Vec::with_capacity(cfg.n_steps),
        bridge: Arc::new(bridge.clone()),
        dt,
    };

    #[allow(clippy::too_many_arguments)]
    fn record(
        out: &mut SimulationResult,
        t: f64,
        u_b: &[f64],
        v_b: &[f64],
        a_b: &[f64],
        u_v: &[f64; 2],
        v_v: &[f64; 2],
        a_v: &[f64; 2],
        axles: &[AxleState; 2],
        positions: [f64; 2],
    ) {
        let contact = |ax: &AxleState| -> f64 {
            let defl = ax.coupling[0] * u_v[0] + ax.coupling[1] * u_v[1]
                - ax.shape.dot(u_b)
                - ax.road;
            let rate = ax.coupling[0] * v_v[0] + ax.coupling[1] * v_v[1]
                - ax.shape.dot(v_b)
                - ax.road_rate;
            ax.static_share - ax.stiffness * defl - ax.damping * rate
        };
        out.time.push(t);
        out.bridge_disp.push(u_b.to_vec());
        out.bridge_vel.push(v_b.to_vec());
        out.bridge_acc.push(a_b.to_vec());
        out.vehicle_state
            .push([u_v[0], u_v[1], v_v[0], v_v[1], a_v[0], a_v[1]]);
        out.contact_forces
            .push([contact(&axles[0]), contact(&axles[1])]);
        out.axle_positions.push(positions);
    }
    record(
        &mut out,
        0.0,
        &u_b,
        &v_b,
        &a_b,
        &u_v,
        &v_v,
        &a_v,
        &axles0,
        axle_positions(car, cfg, bridge.length(), 0.0),
    );

    let mut scratch_b = vec![0.0; n];
    let mut pred_u = vec![0.0; n];
    let mut pred_v = vec![0.0; n];

    for step in 1..cfg.n_steps {
        let t_next = step as f64 * dt;
        let axles = axle_states(bridge, car, road, cfg, t_next);

        // predictors
        for i in 0..n {
            pred_v[i] = v_b[i] + dt * (1.0 - gamma) * a_b[i];
            pred_u[i] = u_b[i] + dt * v_b[i] + dt * dt * (0.5 - beta) * a_b[i];
        }
        let pred_vv = [
            v_v[0] + dt * (1.0 - gamma) * a_v[0],
            v_v[1] + dt * (1.0 - gamma) * a_v[1],
        ];
        let pred_uv = [
            u_v[0] + dt * v_v[0] + dt * dt * (0.5 - beta) * a_v[0],
            u_v[1] + dt * v_v[1] + dt * dt * (0.5 - beta) * a_v[1],
        ];

        // rhs = f - C(t) v_pred - K(t) u_pred
        external_force(&axles, &mut f_b, &mut f_v);
        let mut rhs_b = f_b.clone();
        let mut rhs_v = f_v;
        let mut tmp_v = [0.0; 2];
        coupled_matvec(
            &bridge.c_b,
            &c_v,
            &axles,
            |ax| ax.damping,
            &pred_v,
            &pred_vv,
            &mut scratch_b,
            &mut tmp_v,
        );
        for (r, s) in rhs_b.iter_mut().zip(scratch_b.iter()) {
            *r -= s;
        }
        rhs_v[0] -= tmp_v[0];
        rhs_v[1] -= tmp_v[1];
        coupled_matvec(
            &bridge.k_b,
            &k_v,
            &axles,
            |ax| ax.stiffness,
            &pred_u,
            &pred_uv,
            &mut scratch_b,
            &mut tmp_v,
        );
        for (r, s) in rhs_b.iter_mut().zip(scratch_b.iter()) {
            *r -= s;
        }
        rhs_v[0] -= tmp_v[0];
        rhs_v[1] -= tmp_v[1];

        // effective matrix: band + rank-one axle terms + 2-column border
        let mut a_bb = a0.clone();
        let mut b_cols = [vec![0.0; n], vec![0.0; n]];
        for ax in &axles {
            let sigma = gamma * dt * ax.damping + beta * dt * dt * ax.stiffness;
            if sigma == 0.0 {
                continue;
            }
            for p in 0..ax.shape.len {
                for q in 0..=p {
                    a_bb.add(
                        ax.shape.idx[p],
                        ax.shape.idx[q],
                        sigma * ax.shape.val[p] * ax.shape.val[q],
                    );
                }
            }
            for (col, b) in b_cols.iter_mut().enumerate() {
                ax.shape.axpy_into(-sigma * ax.coupling[col], b);
            }
        }

        let (na_b, na_v) = solve_bordered(a_bb, &b_cols, &d0, &rhs_b, &rhs_v, step)?;

        // Newmark updates
        for i in 0..n {
            v_b[i] = pred_v[i] + dt * gamma * na_b[i];
            u_b[i] = pred_u[i] + dt * dt * beta * na_b[i];
        }
        for i in 0..2 {
            v_v[i] = pred_vv[i] + dt * gamma * na_v[i];
            u_v[i] = pred_uv[i] + dt * dt * beta * na_v[i];
        }
        a_b = na_b;
        a_v = na_v;

        let state_norm = a_v[0].abs()
            + a_v[1].abs()
            + u_b.iter().map(|v| v.abs()).fold(0.0, f64::max);
        if !state_norm.is_finite() {
            return Err(VinoError::NonFiniteState {
                step,
                time: t_next,
            });
        }

        record(
            &mut out,
            t_next,
            &u_b,
            &v_b,
            &a_b,
            &u_v,
            &v_v,
            &a_v,
            &axles,
            axle_positions(car, cfg, bridge.length(), t_next),
        );
    }

    Ok(out)
}

/// Newmark integration of a constant linear system M a + C v + K u = 0,
/// factored once. Shared by free vibration and the SDOF reduction checks.
pub fn integrate_linear(
    m: &SymBand,
    c: &SymBand,
    k: &SymBand,
    u0: &[f64],
    v0: &[f64],
    cfg: &SolverConfig,
) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    cfg.validate()?;
    let n = m.n();
    let dt = cfg.dt;
    let (gamma, beta) = (cfg.newmark_gamma, cfg.newmark_beta);

    let mut a_eff = m.clone();
    a_eff.axpy(gamma * dt, c);
    a_eff.axpy(beta * dt * dt, k);
    let chol = a_eff
        .cholesky()
        .map_err(|e| VinoError::SingularEffectiveMatrix {
            step: 0,
            detail: e.to_string(),
        })?;

    let mut u = u0.to_vec();
    let mut v = v0.to_vec();
    // a0 = M^-1 (-C v0 - K u0)
    let mut rhs = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    c.matvec(&v, &mut rhs);
    k.matvec(&u, &mut tmp);
    for (r, t) in rhs.iter_mut().zip(tmp.iter()) {
        *r = -*r - t;
    }
    let chol_m = m
        .clone()
        .cholesky()
        .map_err(|e| VinoError::SingularEffectiveMatrix {
            step: 0,
            detail: e.to_string(),
        })?;
    let mut a = chol_m.solve(&rhs);

    let mut disp = Vec::with_capacity(cfg.n_steps);
    let mut vel = Vec::with_capacity(cfg.n_steps);
    let mut acc = Vec::with_capacity(cfg.n_steps);
    disp.push(u.clone());
    vel.push(v.clone());
    acc.push(a.clone());

    let mut pred_u = vec![0.0; n];
    let mut pred_v = vec![0.0; n];
    for step in 1..cfg.n_steps {
        for i in 0..n {
            pred_v[i] = v[i] + dt * (1.0 - gamma) * a[i];
            pred_u[i] = u[i] + dt * v[i] + dt * dt * (0.5 - beta) * a[i];
        }
        c.matvec(&pred_v, &mut rhs);
        k.matvec(&pred_u, &mut tmp);
        for (r, t) in rhs.iter_mut().zip(tmp.iter()) {
            *r = -*r - t;
        }
        chol.solve_in_place(&mut rhs);
        for i in 0..n {
            v[i] = pred_v[i] + dt * gamma * rhs[i];
            u[i] = pred_u[i] + dt * dt * beta * rhs[i];
        }
        a.copy_from_slice(&rhs);
        if a.iter().any(|x| !x.is_finite()) {
            return Err(VinoError::NonFiniteState {
                step,
                time: step as f64 * dt,
            });
        }
        disp.push(u.clone());
        vel.push(v.clone());
        acc.push(a.clone());
    }
    Ok((disp, vel, acc))
}

/// Free vibration of the bare bridge started from a mass-normalized mode.
pub fn free_vibration(
    bridge: &AssembledBridge,
    initial_mode: usize,
    amplitude: f64,
    cfg: &SolverConfig,
) -> Result<SimulationResult> {
    let (_, modes) = bridge.natural_modes(initial_mode + 1)?;
    let shape = &modes[initial_mode];
    let u0: Vec<f64> = shape.iter().map(|v| amplitude * v).collect();
    let v0 = vec![0.0; u0.len()];
    let (disp, vel, acc) = integrate_linear(&bridge.m_b, &bridge.c_b, &bridge.k_b, &u0, &v0, cfg)?;
    let n_rec = disp.len();
    Ok(SimulationResult {
        time: (0..n_rec).map(|i| i as f64 * cfg.dt).collect(),
        bridge_disp: disp,
        bridge_vel: vel,
        bridge_acc: acc,
        vehicle_state: vec![[0.0; 6]; n_rec],
        contact_forces: vec![[0.0; 2]; n_rec],
        axle_positions: vec![[f64::NAN; 2]; n_rec],
        bridge: Arc::new(bridge.clone()),
        dt: cfg.dt,
    })
}

/// Interpolates the requested kinematic field at each sensor position.
/// Returns one Vec per sensor over all steps.
pub fn extract_sensors(result: &SimulationResult, layout: &SensorLayout) -> Result<Vec<Vec<f64>>> {
    let bridge = &result.bridge;
    let span = bridge.length();
    let mut channels = Vec::with_capacity(layout.positions.len());
    for &x in &layout.positions {
        if !(0.0..=span).contains(&x) {
            return Err(VinoError::OutOfSpan { position: x, span });
        }
        let (shape, field) = match layout.quantity {
            SensorQuantity::Displacement => (bridge.shape_sparse(x), &result.bridge_disp),
            SensorQuantity::Acceleration => (bridge.shape_sparse(x), &result.bridge_acc),
            SensorQuantity::Rotation => (bridge.shape_deriv_sparse(x), &result.bridge_disp),
        };
        channels.push(field.iter().map(|row| shape.dot(row)).collect());
    }
    Ok(channels)
}

/// Static mid-span-style deflection envelope oracle: maximum deflection
/// at `probe` as the two axle loads sweep the span quasi-statically.
pub fn static_influence_envelope(
    bridge: &AssembledBridge,
    probe: f64,
    load_front: f64,
    load_rear: f64,
    axle_spacing: f64,
) -> Result<f64> {
    let length = bridge.length();
    let chol = bridge.k_b.clone().cholesky()?;
    let probe_shape = bridge.shape_sparse(probe);
    let n = bridge.n_free_dofs();
    let mut worst: f64 = 0.0;
    let n_pos = 4 * bridge.props.n_elements;
    for i in 0..=n_pos {
        let x1 = (length + axle_spacing) * i as f64 / n_pos as f64;
        let x2 = x1 - axle_spacing;
        let mut f = vec![0.0; n];
        bridge.shape_sparse(x1).axpy_into(-load_front, &mut f);
        bridge.shape_sparse(x2).axpy_into(-load_rear, &mut f);
        let u = chol.solve(&f);
        worst = worst.max(probe_shape.dot(&u).abs());
    }
    Ok(worst)
}
