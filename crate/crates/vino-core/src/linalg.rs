//! Dense and banded symmetric linear algebra used by the FE layer.
//!
//! The beam matrices couple only adjacent nodes, so everything on the
//! structural side is stored as a symmetric band (half-bandwidth 3 for
//! cubic Hermite elements). Cholesky on that band plus a 2x2 Schur
//! complement for the vehicle DOFs keeps each Newmark step at O(n).

use crate::error::{Result, VinoError};

/// Symmetric matrix stored as its lower band.
///
/// Entry `(i, j)` with `i >= j` and `i - j <= hb` lives at
/// `data[j * (hb + 1) + (i - j)]`; everything below the band is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SymBand {
    n: usize,
    hb: usize,
    data: Vec<f64>,
}

impl SymBand {
    pub fn zeros(n: usize, hb: usize) -> Self {
        Self {
            n,
            hb,
            data: vec![0.0; n * (hb + 1)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half_bandwidth(&self) -> usize {
        self.hb
    }

    #[inline]
    fn idx(&self, col: usize, d: usize) -> usize {
        col * (self.hb + 1) + d
    }

    /// Symmetric read; returns 0 outside the band.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        if hi - lo > self.hb {
            0.0
        } else {
            self.data[self.idx(lo, hi - lo)]
        }
    }

    /// Adds `v` to entry `(i, j)` (and by symmetry `(j, i)`).
    ///
    /// Panics if the entry lies outside the band.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        assert!(hi - lo <= self.hb, "entry ({i},{j}) outside band");
        let k = self.idx(lo, hi - lo);
        self.data[k] += v;
    }

    /// self += alpha * other (same shape).
    pub fn axpy(&mut self, alpha: f64, other: &SymBand) {
        assert_eq!(self.n, other.n);
        assert_eq!(self.hb, other.hb);
        for (a, b) in self.data.iter_mut().zip(other.data.iter()) {
            *a += alpha * b;
        }
    }

    pub fn scale(&mut self, alpha: f64) {
        for a in &mut self.data {
            *a *= alpha;
        }
    }

    /// y = A x.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        y.fill(0.0);
        let hb = self.hb;
        for j in 0..self.n {
            let xj = x[j];
            let dmax = hb.min(self.n - 1 - j);
            let base = self.idx(j, 0);
            y[j] += self.data[base] * xj;
            for d in 1..=dmax {
                let v = self.data[base + d];
                y[j + d] += v * xj;
                y[j] += v * x[j + d];
            }
        }
    }

    /// x' A x.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        let mut y = vec![0.0; self.n];
        self.matvec(x, &mut y);
        x.iter().zip(y.iter()).map(|(a, b)| a * b).sum()
    }

    /// Materializes the full dense matrix (tests and small systems only).
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = self.get(i, j);
            }
        }
        out
    }

    /// In-place Cholesky A = L L'; the band is overwritten by L.
    pub fn cholesky(mut self) -> Result<BandCholesky> {
        let n = self.n;
        let hb = self.hb;
        let stride = hb + 1;
        for j in 0..n {
            let kmin = j.saturating_sub(hb);
            let mut s = self.data[j * stride];
            for k in kmin..j {
                let l_jk = self.data[k * stride + (j - k)];
                s -= l_jk * l_jk;
            }
            if s <= 0.0 || !s.is_finite() {
                return Err(VinoError::CholeskyFailure { pivot: j, value: s });
            }
            let l_jj = s.sqrt();
            self.data[j * stride] = l_jj;
            let imax = (j + hb).min(n - 1);
            for i in (j + 1)..=imax {
                let kmin_i = i.saturating_sub(hb).max(kmin);
                let mut s = self.data[j * stride + (i - j)];
                for k in kmin_i..j {
                    s -= self.data[k * stride + (i - k)] * self.data[k * stride + (j - k)];
                }
                self.data[j * stride + (i - j)] = s / l_jj;
            }
        }
        Ok(BandCholesky { band: self })
    }
}

/// Banded Cholesky factor; solves A x = b via two triangular sweeps.
#[derive(Debug, Clone)]
pub struct BandCholesky {
    band: SymBand,
}

impl BandCholesky {
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.band.n;
        let hb = self.band.hb;
        assert_eq!(b.len(), n);
        // forward: L y = b
        for i in 0..n {
            let kmin = i.saturating_sub(hb);
            let mut s = b[i];
            for k in kmin..i {
                s -= self.band.data[self.band.idx(k, i - k)] * b[k];
            }
            b[i] = s / self.band.data[self.band.idx(i, 0)];
        }
        // backward: L' x = y
        for i in (0..n).rev() {
            let kmax = (i + hb).min(n - 1);
            let mut s = b[i];
            for k in (i + 1)..=kmax {
                s -= self.band.data[self.band.idx(i, k - i)] * b[k];
            }
            b[i] = s / self.band.data[self.band.idx(i, 0)];
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}

/// Dense Cholesky of a symmetric positive definite matrix in row-major order.
///
/// Returns the lower factor L (row-major) with the upper triangle zeroed.
pub fn dense_cholesky(a: &[f64], n: usize) -> Result<Vec<f64>> {
    assert_eq!(a.len(), n * n);
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut s = a[j * n + j];
        for k in 0..j {
            s -= l[j * n + k] * l[j * n + k];
        }
        if s <= 0.0 || !s.is_finite() {
            return Err(VinoError::CholeskyFailure { pivot: j, value: s });
        }
        let d = s.sqrt();
        l[j * n + j] = d;
        for i in (j + 1)..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / d;
        }
    }
    Ok(l)
}

/// Solves L y = b for lower-triangular L (row-major).
pub fn forward_substitute(l: &[f64], n: usize, b: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * n + k] * y[k];
        }
        y[i] = s / l[i * n + i];
    }
    y
}

/// Solves L' x = y for lower-triangular L (row-major).
pub fn backward_substitute(l: &[f64], n: usize, y: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in (i + 1)..n {
            s -= l[k * n + i] * x[k];
        }
        x[i] = s / l[i * n + i];
    }
    x
}

/// Eigen-decomposition of a small dense symmetric matrix by cyclic Jacobi.
///
/// Returns eigenvalues ascending and eigenvectors as columns of a
/// row-major matrix. Intended for the Rayleigh-Ritz projections of the
/// subspace eigensolver (m <= a few tens).
pub fn jacobi_eigh(a: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let max_sweeps = 64;
    for _ in 0..max_sweeps {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += m[i * n + j] * m[i * n + j];
            }
        }
        if off.sqrt() < 1e-14 * (1.0 + frobenius(&m, n)) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].partial_cmp(&m[j * n + j]).unwrap());
    let eigvals: Vec<f64> = order.iter().map(|&i| m[i * n + i]).collect();
    let mut eigvecs = vec![0.0; n * n];
    for (newcol, &oldcol) in order.iter().enumerate() {
        for r in 0..n {
            eigvecs[r * n + newcol] = v[r * n + oldcol];
        }
    }
    (eigvals, eigvecs)
}

fn frobenius(a: &[f64], n: usize) -> f64 {
    a.iter().take(n * n).map(|x| x * x).sum::<f64>().sqrt()
}

/// Generalized symmetric eigenproblem K phi = lambda M phi for small dense
/// matrices, via M = L L' and a standard Jacobi solve.
pub fn dense_geig(k: &[f64], m: &[f64], n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let l = dense_cholesky(m, n)?;
    // C = L^-1 K L^-T, built column by column.
    let mut c = vec![0.0; n * n];
    for j in 0..n {
        // column j of K
        let kj: Vec<f64> = (0..n).map(|i| k[i * n + j]).collect();
        let w = forward_substitute(&l, n, &kj);
        for i in 0..n {
            c[i * n + j] = w[i];
        }
    }
    // now rows: C <- C L^-T means solving on the right; transpose trick
    let mut ct = vec![0.0; n * n];
    for i in 0..n {
        let row: Vec<f64> = (0..n).map(|j| c[i * n + j]).collect();
        let w = forward_substitute(&l, n, &row);
        for j in 0..n {
            ct[i * n + j] = w[j];
        }
    }
    // symmetrize to shed roundoff
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (ct[i * n + j] + ct[j * n + i]);
            ct[i * n + j] = avg;
            ct[j * n + i] = avg;
        }
    }
    let (vals, vecs) = jacobi_eigh(&ct, n);
    // phi = L^-T y per column
    let mut phi = vec![0.0; n * n];
    for col in 0..n {
        let y: Vec<f64> = (0..n).map(|r| vecs[r * n + col]).collect();
        let x = backward_substitute(&l, n, &y);
        for r in 0..n {
            phi[r * n + col] = x[r];
        }
    }
    Ok((vals, phi))
}
