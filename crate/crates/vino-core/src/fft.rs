//! Discrete Fourier transforms for the spectral layers.
//!
//! `fft_r2c` is the real-input half-spectrum transform
//! X_k = sum_n x_n e^{-2 pi i k n / N}, k = 0..floor(N/2); `ifft_c2r` is
//! its exact inverse (1/N-scaled Hermitian reconstruction). Power-of-two
//! lengths run on an iterative radix-2 kernel, everything else through
//! Bluestein's chirp-z reduction. The two `adjoint_*` maps are the exact
//! transposes of the forward real-linear maps; the spectral-block
//! backward pass is built from them.

use crate::tensor::Scalar;
use num_complex::Complex;
use std::f64::consts::PI;

/// Reusable transform plan for one logical length.
pub struct FftPlan<T> {
    n: usize,
    /// Power-of-two working size (== n when n is a power of two).
    work: usize,
    /// twiddles[k] = e^{-2 pi i k / work}, k < work/2.
    twiddles: Vec<Complex<T>>,
    bluestein: Option<Bluestein<T>>,
}

struct Bluestein<T> {
    /// Chirp a_n = e^{-i pi n^2 / n_logical}, length n.
    chirp: Vec<Complex<T>>,
    /// DFT of the wrapped conjugate chirp, length work.
    chirp_spectrum: Vec<Complex<T>>,
}

impl<T: Scalar> FftPlan<T> {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "transform length must be >= 1");
        if n.is_power_of_two() {
            Self {
                n,
                work: n,
                twiddles: make_twiddles(n),
                bluestein: None,
            }
        } else {
            let work = (2 * n - 1).next_power_of_two();
            let twiddles = make_twiddles(work);
            // chirp phases use n^2 mod 2N to stay accurate for large n
            let chirp: Vec<Complex<T>> = (0..n)
                .map(|i| {
                    let sq = ((i as u64 * i as u64) % (2 * n as u64)) as f64;
                    let ang = -PI * sq / n as f64;
                    Complex::new(T::of64(ang.cos()), T::of64(ang.sin()))
                })
                .collect();
            let mut b = vec![Complex::new(T::zero(), T::zero()); work];
            for i in 0..n {
                let conj = chirp[i].conj();
                b[i] = conj;
                if i > 0 {
                    b[work - i] = conj;
                }
            }
            fft_pow2(&mut b, &twiddles);
            Self {
                n,
                work,
                twiddles,
                bluestein: Some(Bluestein {
                    chirp,
                    chirp_spectrum: b,
                }),
            }
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Unnormalized forward DFT.
    pub fn dft(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(x.len(), self.n);
        match &self.bluestein {
            None => {
                let mut buf = x.to_vec();
                fft_pow2(&mut buf, &self.twiddles);
                buf
            }
            Some(bs) => {
                let mut a = vec![Complex::new(T::zero(), T::zero()); self.work];
                for i in 0..self.n {
                    a[i] = x[i] * bs.chirp[i];
                }
                fft_pow2(&mut a, &self.twiddles);
                for (ai, bi) in a.iter_mut().zip(bs.chirp_spectrum.iter()) {
                    *ai = *ai * *bi;
                }
                ifft_pow2(&mut a, &self.twiddles);
                (0..self.n).map(|k| a[k] * bs.chirp[k]).collect()
            }
        }
    }

    /// Unnormalized inverse DFT (no 1/N): conj(DFT(conj(x))).
    pub fn idft_unnorm(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        let conj: Vec<Complex<T>> = x.iter().map(|c| c.conj()).collect();
        self.dft(&conj).into_iter().map(|c| c.conj()).collect()
    }

    /// Real-to-complex half spectrum, length floor(N/2)+1.
    pub fn r2c(&self, x: &[T]) -> Vec<Complex<T>> {
        assert_eq!(x.len(), self.n);
        let buf: Vec<Complex<T>> = x.iter().map(|&v| Complex::new(v, T::zero())).collect();
        let full = self.dft(&buf);
        full[..self.n / 2 + 1].to_vec()
    }

    /// Inverse of `r2c`: Hermitian extension, inverse DFT, 1/N scale.
    pub fn c2r(&self, half: &[Complex<T>]) -> Vec<T> {
        let n = self.n;
        assert_eq!(half.len(), n / 2 + 1);
        let mut full = vec![Complex::new(T::zero(), T::zero()); n];
        full[..half.len()].copy_from_slice(half);
        for k in 1..n.div_ceil(2) {
            full[n - k] = half[k].conj();
        }
        let inv = self.idft_unnorm(&full);
        let scale = T::of64(1.0 / n as f64);
        inv.into_iter().map(|c| c.re * scale).collect()
    }

    /// Adjoint of `r2c` as a real-linear map: maps a half-spectrum
    /// cotangent to an input cotangent. No Hermitian doubling, no 1/N.
    pub fn adjoint_r2c(&self, cotangent: &[Complex<T>]) -> Vec<T> {
        let n = self.n;
        assert!(cotangent.len() <= n / 2 + 1);
        let mut full = vec![Complex::new(T::zero(), T::zero()); n];
        full[..cotangent.len()].copy_from_slice(cotangent);
        let inv = self.idft_unnorm(&full);
        inv.into_iter().map(|c| c.re).collect()
    }

    /// Adjoint of `c2r`: maps an output cotangent to a half-spectrum
    /// cotangent. Interior bins carry the Hermitian factor 2/N; the DC
    /// and (even N) Nyquist bins carry 1/N with zero imaginary part.
    pub fn adjoint_c2r(&self, cotangent: &[T]) -> Vec<Complex<T>> {
        let n = self.n;
        assert_eq!(cotangent.len(), n);
        let buf: Vec<Complex<T>> = cotangent
            .iter()
            .map(|&v| Complex::new(v, T::zero()))
            .collect();
        let spec = self.dft(&buf);
        let inv_n = 1.0 / n as f64;
        let half = n / 2 + 1;
        (0..half)
            .map(|k| {
                let edge = k == 0 || (n % 2 == 0 && k == n / 2);
                let scale = T::of64(if edge { inv_n } else { 2.0 * inv_n });
                let g = spec[k] * scale;
                if edge {
                    Complex::new(g.re, T::zero())
                } else {
                    g
                }
            })
            .collect()
    }
}

fn make_twiddles<T: Scalar>(m: usize) -> Vec<Complex<T>> {
    (0..m / 2)
        .map(|k| {
            let ang = -2.0 * PI * k as f64 / m as f64;
            Complex::new(T::of64(ang.cos()), T::of64(ang.sin()))
        })
        .collect()
}

/// Iterative radix-2 DIT, in place. `twiddles[k] = e^{-2 pi i k / m}`.
fn fft_pow2<T: Scalar>(data: &mut [Complex<T>], twiddles: &[Complex<T>]) {
    let m = data.len();
    debug_assert!(m.is_power_of_two());
    if m <= 1 {
        return;
    }
    // bit-reversal permutation
    let bits = m.trailing_zeros();
    for i in 0..m {
        let j = (i.reverse_bits() >> (usize::BITS - bits)) as usize;
        if j > i {
            data.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= m {
        let half = len / 2;
        let stride = m / len;
        for start in (0..m).step_by(len) {
            for k in 0..half {
                let w = twiddles[k * stride];
                let a = data[start + k];
                let b = data[start + k + half] * w;
                data[start + k] = a + b;
                data[start + k + half] = a - b;
            }
        }
        len *= 2;
    }
}

/// Normalized (1/M) inverse used inside the Bluestein convolution.
fn ifft_pow2<T: Scalar>(data: &mut [Complex<T>], twiddles: &[Complex<T>]) {
    for c in data.iter_mut() {
        *c = c.conj();
    }
    fft_pow2(data, twiddles);
    let scale = T::of64(1.0 / data.len() as f64);
    for c in data.iter_mut() {
        *c = c.conj() * scale;
    }
}

/// One-shot real-to-complex transform.
pub fn fft_r2c<T: Scalar>(x: &[T]) -> Vec<Complex<T>> {
    FftPlan::new(x.len()).r2c(x)
}

/// One-shot inverse of [`fft_r2c`].
pub fn ifft_c2r<T: Scalar>(half: &[Complex<T>], n: usize) -> Vec<T> {
    FftPlan::new(n).c2r(half)
}
