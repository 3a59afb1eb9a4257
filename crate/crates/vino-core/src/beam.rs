//! Damaged Euler-Bernoulli beam on pin-roller supports.
//!
//! Element stiffness is scaled by (1 - delta) where delta is the damage
//! field interpolated at the element midpoint; mass is untouched. All
//! matrices are assembled into symmetric bands (half-bandwidth 3).

use crate::error::{Result, VinoError};
use crate::linalg::{dense_geig, SymBand};
use crate::rng::Rng;

/// Half-bandwidth of the assembled beam matrices in free-DOF numbering.
pub const BEAM_HALF_BANDWIDTH: usize = 3;

/// Geometry and material of the uniform beam.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamProperties {
    /// Span length in meters.
    pub length: f64,
    /// Mass per unit length in kg/m.
    pub mass_per_length: f64,
    /// Young's modulus in N/m^2.
    pub youngs_modulus: f64,
    /// Second moment of area in m^4.
    pub moment_of_inertia: f64,
    /// Number of beam elements (>= 2).
    pub n_elements: usize,
}

impl BeamProperties {
    pub fn validate(&self) -> Result<()> {
        if self.length <= 0.0
            || self.mass_per_length <= 0.0
            || self.youngs_modulus <= 0.0
            || self.moment_of_inertia <= 0.0
        {
            return Err(VinoError::NegativeInput(
                "beam properties must be positive".into(),
            ));
        }
        if self.n_elements < 2 {
            return Err(VinoError::Config(format!(
                "n_elements must be >= 2, got {}",
                self.n_elements
            )));
        }
        Ok(())
    }

    pub fn n_nodes(&self) -> usize {
        self.n_elements + 1
    }

    /// Free DOFs after fixing the two end translations.
    pub fn n_free_dofs(&self) -> usize {
        2 * self.n_nodes() - 2
    }

    /// Closed-form first bending frequency of the undamaged simply
    /// supported beam, (pi / 2 L^2) sqrt(EI / m), in Hz.
    pub fn analytic_frequency(&self, mode: usize) -> f64 {
        let n = mode as f64;
        n * n * std::f64::consts::PI / (2.0 * self.length * self.length)
            * (self.youngs_modulus * self.moment_of_inertia / self.mass_per_length).sqrt()
    }
}

/// Fractional stiffness reduction delta(x) sampled on a spatial grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DamageField {
    grid: Vec<f64>,
    values: Vec<f64>,
    delta_max: f64,
}

/// Default cap on pointwise damage.
pub const DEFAULT_DELTA_MAX: f64 = 0.5;

impl DamageField {
    pub fn new(grid: Vec<f64>, values: Vec<f64>, delta_max: f64) -> Result<Self> {
        if grid.len() != values.len() || grid.len() < 2 {
            return Err(VinoError::InvalidDamage(format!(
                "grid ({}) and values ({}) must have equal length >= 2",
                grid.len(),
                values.len()
            )));
        }
        if !(0.0..1.0).contains(&delta_max) && delta_max != 0.0 {
            return Err(VinoError::InvalidDamage(format!(
                "delta_max {delta_max} must lie in [0, 1)"
            )));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(VinoError::InvalidDamage(
                "grid must be strictly increasing".into(),
            ));
        }
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() || v < 0.0 || v > delta_max {
                return Err(VinoError::InvalidDamage(format!(
                    "value {v} at grid index {i} outside [0, {delta_max}]"
                )));
            }
        }
        Ok(Self {
            grid,
            values,
            delta_max,
        })
    }

    /// Zero damage on a uniform grid over [0, length].
    pub fn zero(length: f64, n_points: usize) -> Self {
        let grid = uniform_grid(length, n_points);
        Self {
            values: vec![0.0; grid.len()],
            grid,
            delta_max: DEFAULT_DELTA_MAX,
        }
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn delta_max(&self) -> f64 {
        self.delta_max
    }

    /// Linear interpolation; clamps outside the grid.
    pub fn interp(&self, x: f64) -> f64 {
        let g = &self.grid;
        if x <= g[0] {
            return self.values[0];
        }
        if x >= *g.last().unwrap() {
            return *self.values.last().unwrap();
        }
        let j = match g.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(j) => return self.values[j],
            Err(j) => j,
        };
        let t = (x - g[j - 1]) / (g[j] - g[j - 1]);
        self.values[j - 1] * (1.0 - t) + self.values[j] * t
    }
}

/// Uniform grid of `n` points spanning [0, length].
pub fn uniform_grid(length: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    (0..n)
        .map(|i| length * i as f64 / (n - 1) as f64)
        .collect()
}

/// Rayleigh damping C = alpha_dm M + beta_dk K anchored at two modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayleighParams {
    pub f1: f64,
    pub f2: f64,
    pub zeta1: f64,
    pub zeta2: f64,
    /// Mass coefficient, 1/s.
    pub alpha_dm: f64,
    /// Stiffness coefficient, s.
    pub beta_dk: f64,
}

impl RayleighParams {
    /// Modal damping ratio implied at frequency f: alpha/(4 pi f) + pi beta f.
    pub fn zeta_at(&self, f_hz: f64) -> f64 {
        self.alpha_dm / (4.0 * std::f64::consts::PI * f_hz)
            + std::f64::consts::PI * self.beta_dk * f_hz
    }
}

/// Computes the Rayleigh coefficients from two anchor modes:
/// alpha = 4 pi f1 f2 (z1 f2 - z2 f1) / (f2^2 - f1^2),
/// beta  = (z2 f2 - z1 f1) / (pi (f2^2 - f1^2)).
pub fn rayleigh_coefficients(f1: f64, f2: f64, zeta1: f64, zeta2: f64) -> Result<RayleighParams> {
    if f1 <= 0.0 || f1 >= f2 {
        return Err(VinoError::DegenerateFrequencies { f1, f2 });
    }
    if zeta1 < 0.0 || zeta2 < 0.0 {
        return Err(VinoError::NegativeInput("damping ratios must be >= 0".into()));
    }
    let pi = std::f64::consts::PI;
    let denom = f2 * f2 - f1 * f1;
    let alpha_dm = 4.0 * pi * f1 * f2 * (zeta1 * f2 - zeta2 * f1) / denom;
    let beta_dk = (zeta2 * f2 - zeta1 * f1) / (pi * denom);
    Ok(RayleighParams {
        f1,
        f2,
        zeta1,
        zeta2,
        alpha_dm,
        beta_dk,
    })
}

/// Translation/rotation free-DOF indices for one node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeDofs {
    /// None when the translation is fixed (end supports).
    pub translation: Option<usize>,
    pub rotation: usize,
}

/// Assembled FE model of the damaged bridge.
#[derive(Debug, Clone)]
pub struct AssembledBridge {
    pub props: BeamProperties,
    pub m_b: SymBand,
    pub c_b: SymBand,
    pub k_b: SymBand,
    pub rayleigh: RayleighParams,
    pub dof_map: Vec<NodeDofs>,
    pub element_lengths: Vec<f64>,
    pub element_damage: Vec<f64>,
}

/// Shape-function values scattered into at most four free DOFs.
#[derive(Debug, Clone, Copy, Default)]
pub struct SparseShape {
    pub idx: [usize; 4],
    pub val: [f64; 4],
    pub len: usize,
}

impl SparseShape {
    pub fn dot(&self, x: &[f64]) -> f64 {
        (0..self.len).map(|k| self.val[k] * x[self.idx[k]]).sum()
    }

    /// y += scale * shape
    pub fn axpy_into(&self, scale: f64, y: &mut [f64]) {
        for k in 0..self.len {
            y[self.idx[k]] += scale * self.val[k];
        }
    }

    pub fn to_dense(&self, n: usize) -> Vec<f64> {
        let mut v = vec![0.0; n];
        self.axpy_into(1.0, &mut v);
        v
    }
}

/// 4x4 Euler-Bernoulli element stiffness, EI/L^3 scaled.
fn element_stiffness(ei: f64, le: f64) -> [[f64; 4]; 4] {
    let c = ei / (le * le * le);
    let l = le;
    [
        [12.0 * c, 6.0 * l * c, -12.0 * c, 6.0 * l * c],
        [6.0 * l * c, 4.0 * l * l * c, -6.0 * l * c, 2.0 * l * l * c],
        [-12.0 * c, -6.0 * l * c, 12.0 * c, -6.0 * l * c],
        [6.0 * l * c, 2.0 * l * l * c, -6.0 * l * c, 4.0 * l * l * c],
    ]
}

/// 4x4 consistent mass, m L / 420 scaled.
fn element_mass(m: f64, le: f64) -> [[f64; 4]; 4] {
    let c = m * le / 420.0;
    let l = le;
    [
        [156.0 * c, 22.0 * l * c, 54.0 * c, -13.0 * l * c],
        [22.0 * l * c, 4.0 * l * l * c, 13.0 * l * c, -3.0 * l * l * c],
        [54.0 * c, 13.0 * l * c, 156.0 * c, -22.0 * l * c],
        [-13.0 * l * c, -3.0 * l * l * c, -22.0 * l * c, 4.0 * l * l * c],
    ]
}

/// Builds the damaged bridge model: element matrices, assembly onto free
/// DOFs (pin-roller: end translations eliminated), Rayleigh damping.
pub fn assemble_bridge(
    props: &BeamProperties,
    damage: &DamageField,
    rayleigh: &RayleighParams,
) -> Result<AssembledBridge> {
    props.validate()?;
    let grid = damage.grid();
    let span_tol = 1e-9 * props.length.max(1.0);
    if grid[0] > span_tol || *grid.last().unwrap() < props.length - span_tol {
        return Err(VinoError::InvalidDamage(format!(
            "damage grid [{}, {}] does not span [0, {}]",
            grid[0],
            grid.last().unwrap(),
            props.length
        )));
    }

    let n_el = props.n_elements;
    let le = props.length / n_el as f64;
    let n_free = props.n_free_dofs();
    let dof_map = build_dof_map(props.n_nodes());

    let mut m_b = SymBand::zeros(n_free, BEAM_HALF_BANDWIDTH);
    let mut k_b = SymBand::zeros(n_free, BEAM_HALF_BANDWIDTH);
    let mut element_damage = Vec::with_capacity(n_el);

    for e in 0..n_el {
        let mid = (e as f64 + 0.5) * le;
        let delta = damage.interp(mid);
        if !(0.0..1.0).contains(&delta) {
            return Err(VinoError::InvalidDamage(format!(
                "interpolated damage {delta} at element {e} outside [0, 1)"
            )));
        }
        element_damage.push(delta);
        let ei = props.youngs_modulus * props.moment_of_inertia * (1.0 - delta);
        let ke = element_stiffness(ei, le);
        let me = element_mass(props.mass_per_length, le);
        let freedofs = element_free_dofs(&dof_map, e);
        for a in 0..4 {
            let Some(fa) = freedofs[a] else { continue };
            for b in 0..=a {
                let Some(fb) = freedofs[b] else { continue };
                k_b.add(fa, fb, ke[a][b]);
                m_b.add(fa, fb, me[a][b]);
            }
        }
    }

    let mut c_b = SymBand::zeros(n_free, BEAM_HALF_BANDWIDTH);
    c_b.axpy(rayleigh.alpha_dm, &m_b);
    c_b.axpy(rayleigh.beta_dk, &k_b);

    Ok(AssembledBridge {
        props: *props,
        m_b,
        c_b,
        k_b,
        rayleigh: *rayleigh,
        dof_map,
        element_lengths: vec![le; n_el],
        element_damage,
    })
}

fn build_dof_map(n_nodes: usize) -> Vec<NodeDofs> {
    // full numbering: node i -> (2i translation, 2i+1 rotation);
    // translations at node 0 and node n-1 eliminated.
    let last = n_nodes - 1;
    (0..n_nodes)
        .map(|i| {
            let full_t = 2 * i;
            let full_r = 2 * i + 1;
            let to_free = |full: usize| -> usize {
                // indices 0 and 2*last are gone
                if full > 2 * last {
                    full - 2
                } else {
                    full - 1
                }
            };
            NodeDofs {
                translation: if i == 0 || i == last {
                    None
                } else {
                    Some(to_free(full_t))
                },
                rotation: to_free(full_r),
            }
        })
        .collect()
}

fn element_free_dofs(dof_map: &[NodeDofs], e: usize) -> [Option<usize>; 4] {
    let n1 = dof_map[e];
    let n2 = dof_map[e + 1];
    [
        n1.translation,
        Some(n1.rotation),
        n2.translation,
        Some(n2.rotation),
    ]
}

/// Hermite cubic values (N1..N4) at local coordinate xi in [0, 1].
fn hermite(xi: f64, le: f64) -> [f64; 4] {
    let xi2 = xi * xi;
    let xi3 = xi2 * xi;
    [
        1.0 - 3.0 * xi2 + 2.0 * xi3,
        le * (xi - 2.0 * xi2 + xi3),
        3.0 * xi2 - 2.0 * xi3,
        le * (xi3 - xi2),
    ]
}

/// d/dx of the Hermite cubics at xi.
fn hermite_deriv(xi: f64, le: f64) -> [f64; 4] {
    let xi2 = xi * xi;
    [
        (-6.0 * xi + 6.0 * xi2) / le,
        1.0 - 4.0 * xi + 3.0 * xi2,
        (6.0 * xi - 6.0 * xi2) / le,
        3.0 * xi2 - 2.0 * xi,
    ]
}

impl AssembledBridge {
    pub fn n_free_dofs(&self) -> usize {
        self.m_b.n()
    }

    pub fn length(&self) -> f64 {
        self.props.length
    }

    fn locate(&self, x: f64) -> Option<(usize, f64, f64)> {
        let l = self.props.length;
        if x < 0.0 || x > l {
            return None;
        }
        let n_el = self.props.n_elements;
        let le = self.element_lengths[0];
        let e = ((x / le) as usize).min(n_el - 1);
        let xi = (x - e as f64 * le) / le;
        Some((e, xi, le))
    }

    /// Hermite interpolation vector at position x, scattered into free
    /// DOFs; zero for x outside [0, L].
    pub fn shape_sparse(&self, x: f64) -> SparseShape {
        self.shape_with(x, hermite)
    }

    /// Spatial derivative of the interpolation (rotation extraction).
    pub fn shape_deriv_sparse(&self, x: f64) -> SparseShape {
        self.shape_with(x, hermite_deriv)
    }

    fn shape_with(&self, x: f64, f: fn(f64, f64) -> [f64; 4]) -> SparseShape {
        let mut out = SparseShape::default();
        let Some((e, xi, le)) = self.locate(x) else {
            return out;
        };
        let vals = f(xi, le);
        let dofs = element_free_dofs(&self.dof_map, e);
        for (v, d) in vals.iter().zip(dofs.iter()) {
            if let Some(fd) = d {
                out.idx[out.len] = *fd;
                out.val[out.len] = *v;
                out.len += 1;
            }
        }
        out
    }

    /// Dense shape vector over free DOFs (zero vector off-bridge).
    pub fn shape_vector(&self, x: f64) -> Vec<f64> {
        self.shape_sparse(x).to_dense(self.n_free_dofs())
    }

    /// Static solve K u = f over free DOFs.
    pub fn static_solve(&self, f: &[f64]) -> Result<Vec<f64>> {
        let chol = self.k_b.clone().cholesky()?;
        Ok(chol.solve(f))
    }

    /// Support reactions (left, right) for a static displacement state,
    /// positive in the load direction of `u`'s defining force.
    pub fn support_reactions(&self, u_free: &[f64]) -> (f64, f64) {
        let n_el = self.props.n_elements;
        let le = self.element_lengths[0];
        let ei_left = self.props.youngs_modulus
            * self.props.moment_of_inertia
            * (1.0 - self.element_damage[0]);
        let ei_right = self.props.youngs_modulus
            * self.props.moment_of_inertia
            * (1.0 - self.element_damage[n_el - 1]);
        let gather = |e: usize| -> [f64; 4] {
            let dofs = element_free_dofs(&self.dof_map, e);
            let mut out = [0.0; 4];
            for (o, d) in out.iter_mut().zip(dofs.iter()) {
                if let Some(fd) = d {
                    *o = u_free[*fd];
                }
            }
            out
        };
        let u0 = gather(0);
        let ke0 = element_stiffness(ei_left, le);
        let r_left: f64 = (0..4).map(|j| ke0[0][j] * u0[j]).sum();
        let ul = gather(n_el - 1);
        let kel = element_stiffness(ei_right, le);
        let r_right: f64 = (0..4).map(|j| kel[2][j] * ul[j]).sum();
        (r_left, r_right)
    }

    /// k lowest natural frequencies in Hz, ascending.
    pub fn natural_frequencies(&self, k: usize) -> Result<Vec<f64>> {
        Ok(self.natural_modes(k)?.0)
    }

    /// k lowest natural frequencies plus mass-normalized mode shapes
    /// (one Vec per mode over free DOFs).
    ///
    /// Shift-invert subspace iteration on (K, M) with Rayleigh-Ritz
    /// projection; relative eigenvalue tolerance 1e-10.
    pub fn natural_modes(&self, k: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
        let n = self.n_free_dofs();
        if k == 0 {
            return Ok((Vec::new(), Vec::new()));
        }
        if k > n {
            return Err(VinoError::Config(format!(
                "requested {k} modes but only {n} free DOFs"
            )));
        }
        let m_sub = (k + 8).min(n);
        let chol_k = self.k_b.clone().cholesky()?;

        let mut rng = Rng::new(0x0BEA_u64.wrapping_add(n as u64));
        let mut x: Vec<Vec<f64>> = (0..m_sub)
            .map(|_| (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect())
            .collect();

        let tol = 1e-10;
        let max_iter = 400;
        let mut prev: Vec<f64> = vec![f64::INFINITY; k];
        let mut scratch = vec![0.0; n];
        for iter in 0..max_iter {
            // Y_j = K^-1 M x_j
            let mut y: Vec<Vec<f64>> = Vec::with_capacity(m_sub);
            for xj in &x {
                self.m_b.matvec(xj, &mut scratch);
                y.push(chol_k.solve(&scratch));
            }
            // Rayleigh-Ritz: Kr = Y' M X (== Y' K Y exactly), Mr = Y' M Y
            let mut my: Vec<Vec<f64>> = Vec::with_capacity(m_sub);
            for yj in &y {
                self.m_b.matvec(yj, &mut scratch);
                my.push(scratch.clone());
            }
            let mut kr = vec![0.0; m_sub * m_sub];
            let mut mr = vec![0.0; m_sub * m_sub];
            for i in 0..m_sub {
                for j in 0..m_sub {
                    kr[i * m_sub + j] = dot(&y[i], &x[j]).min(f64::MAX); // filled below properly
                }
            }
            // Kr[i][j] = y_i' M x_j; use precomputed M x via scratch per column
            for j in 0..m_sub {
                self.m_b.matvec(&x[j], &mut scratch);
                for i in 0..m_sub {
                    kr[i * m_sub + j] = dot(&y[i], &scratch);
                }
            }
            for i in 0..m_sub {
                for j in 0..m_sub {
                    mr[i * m_sub + j] = dot(&y[i], &my[j]);
                }
            }
            symmetrize(&mut kr, m_sub);
            symmetrize(&mut mr, m_sub);
            let (theta, q) = dense_geig(&kr, &mr, m_sub)?;

            // next subspace: X = Y Q
            let mut xn: Vec<Vec<f64>> = vec![vec![0.0; n]; m_sub];
            for (col, xcol) in xn.iter_mut().enumerate() {
                for (j, yj) in y.iter().enumerate() {
                    let w = q[j * m_sub + col];
                    if w != 0.0 {
                        for (o, v) in xcol.iter_mut().zip(yj.iter()) {
                            *o += w * v;
                        }
                    }
                }
            }
            x = xn;

            let worst = (0..k)
                .map(|i| {
                    let t = theta[i];
                    ((t - prev[i]) / t.max(f64::MIN_POSITIVE)).abs()
                })
                .fold(0.0_f64, f64::max);
            prev = theta[..k].to_vec();
            if worst < tol && iter > 0 {
                let freqs: Vec<f64> = prev
                    .iter()
                    .map(|&l| l.max(0.0).sqrt() / (2.0 * std::f64::consts::PI))
                    .collect();
                let modes: Vec<Vec<f64>> = x[..k].to_vec();
                return Ok((freqs, modes));
            }
        }
        Err(VinoError::NonConvergence {
            iterations: max_iter,
            residual: prev.first().copied().unwrap_or(f64::NAN),
        })
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

fn symmetrize(a: &mut [f64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (a[i * n + j] + a[j * n + i]);
            a[i * n + j] = avg;
            a[j * n + i] = avg;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::BridgeConfig;

    fn table1() -> BeamProperties {
        BridgeConfig::default().properties(64)
    }

    fn zero_rayleigh() -> RayleighParams {
        rayleigh_coefficients(1.0, 2.0, 0.0, 0.0).unwrap()
    }

    #[test]
    fn rayleigh_matches_reported_coefficients() {
        let r = rayleigh_coefficients(3.64, 14.56, 0.007, 0.007).unwrap();
        assert!(
            (r.alpha_dm - 0.2562).abs() / 0.2562 < 1e-3,
            "alpha {}",
            r.alpha_dm
        );
        assert!(
            (r.beta_dk - 1.224e-4).abs() / 1.224e-4 < 1e-3,
            "beta {}",
            r.beta_dk
        );
    }

    #[test]
    fn rayleigh_zero_damping_gives_zero_coefficients() {
        let r = zero_rayleigh();
        assert_eq!(r.alpha_dm, 0.0);
        assert_eq!(r.beta_dk, 0.0);
    }

    #[test]
    fn rayleigh_rejects_equal_frequencies() {
        assert!(matches!(
            rayleigh_coefficients(2.0, 2.0, 0.007, 0.007),
            Err(VinoError::DegenerateFrequencies { .. })
        ));
    }

    #[test]
    fn rayleigh_coefficients_reproduce_closed_form_exactly() {
        let r = rayleigh_coefficients(2.5, 10.0, 0.01, 0.02).unwrap();
        let pi = std::f64::consts::PI;
        let denom = 10.0f64.powi(2) - 2.5f64.powi(2);
        let alpha = 4.0 * pi * 2.5 * 10.0 * (0.01 * 10.0 - 0.02 * 2.5) / denom;
        let beta = (0.02 * 10.0 - 0.01 * 2.5) / (pi * denom);
        assert!((r.alpha_dm - alpha).abs() <= 1e-12 * alpha.abs());
        assert!((r.beta_dk - beta).abs() <= 1e-12 * beta.abs());
        // and the implied modal damping at the anchors returns zeta
        assert!((r.zeta_at(2.5) - 0.01).abs() < 1e-12);
        assert!((r.zeta_at(10.0) - 0.02).abs() < 1e-12);
    }

    #[test]
    fn zero_damage_matches_undamaged_bitwise() {
        let props = table1();
        let damage = DamageField::zero(props.length, 11);
        let r = zero_rayleigh();
        let a = assemble_bridge(&props, &damage, &r).unwrap();
        let b = assemble_bridge(&props, &DamageField::zero(props.length, 257), &r).unwrap();
        assert_eq!(a.k_b, b.k_b);
        assert_eq!(a.m_b, b.m_b);
    }

    #[test]
    fn uniform_damage_scales_stiffness_only() {
        let props = table1();
        let r = zero_rayleigh();
        let healthy = assemble_bridge(&props, &DamageField::zero(props.length, 11), &r).unwrap();
        let grid = uniform_grid(props.length, 11);
        let damaged = DamageField::new(grid, vec![0.5; 11], 0.5).unwrap();
        let worn = assemble_bridge(&props, &damaged, &r).unwrap();
        assert_eq!(worn.m_b, healthy.m_b);
        let n = healthy.n_free_dofs();
        for i in 0..n {
            for d in 0..=BEAM_HALF_BANDWIDTH.min(n - 1 - i) {
                let h = healthy.k_b.get(i + d, i);
                let w = worn.k_b.get(i + d, i);
                assert!((w - 0.5 * h).abs() <= 1e-12 * h.abs().max(1.0));
            }
        }
    }

    #[test]
    fn first_frequency_matches_closed_form_at_512_elements() {
        let props = BridgeConfig::default().properties(512);
        let damage = DamageField::zero(props.length, 513);
        let bridge = assemble_bridge(&props, &damage, &zero_rayleigh()).unwrap();
        let f = bridge.natural_frequencies(1).unwrap()[0];
        let exact = props.analytic_frequency(1);
        assert!(
            (f - exact).abs() / exact < 0.002,
            "f1 = {f}, analytic = {exact}"
        );
    }

    #[test]
    fn frequency_ratio_follows_n_squared_law() {
        let props = BridgeConfig::default().properties(128);
        let bridge =
            assemble_bridge(&props, &DamageField::zero(props.length, 129), &zero_rayleigh())
                .unwrap();
        let f = bridge.natural_frequencies(2).unwrap();
        let ratio = f[1] / f[0];
        assert!((ratio - 4.0).abs() / 4.0 < 0.005, "ratio {ratio}");
    }

    #[test]
    fn uniform_damage_scales_every_frequency_by_sqrt() {
        let props = table1();
        let r = zero_rayleigh();
        let healthy =
            assemble_bridge(&props, &DamageField::zero(props.length, 11), &r).unwrap();
        let grid = uniform_grid(props.length, 11);
        let worn = assemble_bridge(
            &props,
            &DamageField::new(grid, vec![0.19; 11], 0.5).unwrap(),
            &r,
        )
        .unwrap();
        let fh = healthy.natural_frequencies(3).unwrap();
        let fw = worn.natural_frequencies(3).unwrap();
        for (h, w) in fh.iter().zip(fw.iter()) {
            assert!(
                (w / h - 0.9).abs() < 1e-6,
                "expected sqrt(0.81) scaling, got {}",
                w / h
            );
        }
    }

    #[test]
    fn zero_modes_requested_gives_empty() {
        let props = table1();
        let bridge =
            assemble_bridge(&props, &DamageField::zero(props.length, 11), &zero_rayleigh())
                .unwrap();
        assert!(bridge.natural_frequencies(0).unwrap().is_empty());
    }

    #[test]
    fn shape_vector_at_interior_node_is_unit() {
        let props = table1();
        let bridge =
            assemble_bridge(&props, &DamageField::zero(props.length, 11), &zero_rayleigh())
                .unwrap();
        let le = bridge.element_lengths[0];
        let node = 5;
        let v = bridge.shape_vector(node as f64 * le);
        let tdof = bridge.dof_map[node].translation.unwrap();
        for (i, &x) in v.iter().enumerate() {
            if i == tdof {
                assert!((x - 1.0).abs() < 1e-12);
            } else {
                assert!(x.abs() < 1e-12, "dof {i} = {x}");
            }
        }
    }

    #[test]
    fn shape_vector_at_midpoint_matches_hermite_values() {
        let props = table1();
        let bridge =
            assemble_bridge(&props, &DamageField::zero(props.length, 11), &zero_rayleigh())
                .unwrap();
        let le = bridge.element_lengths[0];
        // midpoint of element 3
        let x = 3.0 * le + 0.5 * le;
        let s = bridge.shape_sparse(x);
        let expect = [0.5, le / 8.0, 0.5, -le / 8.0];
        assert_eq!(s.len, 4);
        for (v, e) in s.val.iter().zip(expect.iter()) {
            assert!((v - e).abs() < 1e-12, "{v} vs {e}");
        }
    }

    #[test]
    fn shape_vector_off_bridge_is_zero() {
        let props = table1();
        let bridge =
            assemble_bridge(&props, &DamageField::zero(props.length, 11), &zero_rayleigh())
                .unwrap();
        assert!(bridge.shape_vector(-0.1).iter().all(|&v| v == 0.0));
        assert!(bridge
            .shape_vector(props.length + 0.1)
            .iter()
            .all(|&v| v == 0.0));
    }

    #[test]
    fn static_point_load_reactions_sum_to_unity() {
        let props = table1();
        let bridge =
            assemble_bridge(&props, &DamageField::zero(props.length, 11), &zero_rayleigh())
                .unwrap();
        for frac in [0.13, 0.37, 0.5, 0.81] {
            let x = frac * props.length;
            let f = bridge.shape_vector(x);
            let u = bridge.static_solve(&f).unwrap();
            let (rl, rr) = bridge.support_reactions(&u);
            assert!(
                (rl + rr - 1.0).abs() < 1e-9,
                "reactions {rl} + {rr} at x={x}"
            );
        }
    }

    #[test]
    fn convergence_toward_analytic_frequency_is_monotone() {
        let mut errors = Vec::new();
        for n_el in [8usize, 32, 128, 512] {
            let props = BridgeConfig::default().properties(n_el);
            let bridge = assemble_bridge(
                &props,
                &DamageField::zero(props.length, n_el + 1),
                &zero_rayleigh(),
            )
            .unwrap();
            let f1 = bridge.natural_frequencies(1).unwrap()[0];
            errors.push((f1 - props.analytic_frequency(1)).abs());
        }
        for w in errors.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-9), "errors not decreasing: {errors:?}");
        }
        assert!(errors[3] < errors[0]);
    }

    #[test]
    fn damage_field_rejects_bad_inputs() {
        assert!(DamageField::new(vec![0.0, 1.0], vec![0.1], 0.5).is_err());
        assert!(DamageField::new(vec![0.0, 0.0], vec![0.1, 0.1], 0.5).is_err());
        assert!(DamageField::new(vec![0.0, 1.0], vec![0.1, 0.6], 0.5).is_err());
        assert!(DamageField::new(vec![0.0, 1.0], vec![-0.1, 0.2], 0.5).is_err());
    }
}
