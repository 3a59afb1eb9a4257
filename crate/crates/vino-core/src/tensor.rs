//! Minimal tensor type for the neural core.
//!
//! Training runs in f32, gradient verification in f64; everything in the
//! neural core is generic over [`Scalar`].

use num_traits::{Float, FromPrimitive};
use std::fmt::{Debug, Display};

/// Element type of the compute core (f32 or f64).
pub trait Scalar:
    Float + FromPrimitive + Default + Debug + Display + Send + Sync + 'static
{
    const NAME: &'static str;

    fn of64(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 converts")
    }

    fn as_f64(self) -> f64;
}

impl Scalar for f32 {
    const NAME: &'static str = "f32";

    fn as_f64(self) -> f64 {
        self as f64
    }
}

impl Scalar for f64 {
    const NAME: &'static str = "f64";

    fn as_f64(self) -> f64 {
        self
    }
}

/// Dense (batch, channel, grid) tensor, row-major with grid fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor<T> {
    pub batch: usize,
    pub channels: usize,
    pub len: usize,
    data: Vec<T>,
}

impl<T: Scalar> Tensor<T> {
    pub fn zeros(batch: usize, channels: usize, len: usize) -> Self {
        assert!(batch > 0 && channels > 0 && len > 0, "dims must be positive");
        Self {
            batch,
            channels,
            len,
            data: vec![T::zero(); batch * channels * len],
        }
    }

    pub fn from_fn(batch: usize, channels: usize, len: usize, mut f: impl FnMut(usize, usize, usize) -> T) -> Self {
        let mut t = Self::zeros(batch, channels, len);
        for b in 0..batch {
            for c in 0..channels {
                for g in 0..len {
                    let v = f(b, c, g);
                    t.set(b, c, g, v);
                }
            }
        }
        t
    }

    pub fn from_vec(batch: usize, channels: usize, len: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), batch * channels * len, "payload size mismatch");
        Self {
            batch,
            channels,
            len,
            data,
        }
    }

    #[inline]
    pub fn get(&self, b: usize, c: usize, g: usize) -> T {
        self.data[(b * self.channels + c) * self.len + g]
    }

    #[inline]
    pub fn set(&mut self, b: usize, c: usize, g: usize, v: T) {
        self.data[(b * self.channels + c) * self.len + g] = v;
    }

    /// Contiguous grid slice for one (batch, channel).
    #[inline]
    pub fn row(&self, b: usize, c: usize) -> &[T] {
        let start = (b * self.channels + c) * self.len;
        &self.data[start..start + self.len]
    }

    #[inline]
    pub fn row_mut(&mut self, b: usize, c: usize) -> &mut [T] {
        let start = (b * self.channels + c) * self.len;
        &mut self.data[start..start + self.len]
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.batch == other.batch && self.channels == other.channels && self.len == other.len
    }

    /// Debug-mode guard: every stored value is finite.
    pub fn debug_assert_finite(&self, context: &str) {
        if cfg!(debug_assertions) {
            for (i, v) in self.data.iter().enumerate() {
                debug_assert!(v.is_finite(), "non-finite value {v} at flat index {i} in {context}");
            }
        }
    }

    /// Casts elementwise through f64.
    pub fn cast<U: Scalar>(&self) -> Tensor<U> {
        Tensor {
            batch: self.batch,
            channels: self.channels,
            len: self.len,
            data: self.data.iter().map(|v| U::of64(v.as_f64())).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_is_row_major_grid_fastest() {
        let t = Tensor::<f64>::from_fn(2, 3, 4, |b, c, g| (b * 100 + c * 10 + g) as f64);
        assert_eq!(t.get(1, 2, 3), 123.0);
        assert_eq!(t.row(1, 2), &[120.0, 121.0, 122.0, 123.0]);
    }

    #[test]
    fn cast_roundtrip_preserves_f32_values() {
        let t = Tensor::<f32>::from_fn(1, 2, 3, |_, c, g| (c + g) as f32 * 0.5);
        let back: Tensor<f32> = t.cast::<f64>().cast();
        assert_eq!(t, back);
    }

    #[test]
    #[should_panic(expected = "dims must be positive")]
    fn zero_dims_panic() {
        let _ = Tensor::<f64>::zeros(0, 1, 1);
    }
}
