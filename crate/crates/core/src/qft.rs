//! Unitary quantum Fourier transform on an `l`-qubit register.
//!
//! `QFT |k> = 2^{-l/2} sum_j exp(+2 pi i j k / 2^l) |j>`; the inverse uses the
//! negative exponent.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Widest register the transform accepts.
pub const MAX_QFT_WIDTH: usize = 24;

pub struct Qft {
    len: usize,
    scale: f64,
    positive: Arc<dyn Fft<f64>>,
    negative: Arc<dyn Fft<f64>>,
}

impl Qft {
    pub fn new(l: usize) -> Result<Self> {
        if l == 0 || l > MAX_QFT_WIDTH {
            return Err(Error::RegisterWidth(l));
        }
        let len = 1usize << l;
        let mut planner = FftPlanner::new();
        Ok(Qft {
            len,
            scale: 1.0 / (len as f64).sqrt(),
            // rustfft's "forward" carries exp(-2 pi i jk/N)
            positive: planner.plan_fft_inverse(len),
            negative: planner.plan_fft_forward(len),
        })
    }

    /// Register dimension `2^l`.
    pub fn size(&self) -> usize {
        self.len
    }

    fn run(&self, plan: &Arc<dyn Fft<f64>>, buf: &mut [Complex64]) {
        assert_eq!(buf.len() % self.len, 0, "buffer is not a whole number of registers");
        plan.process(buf);
        for a in buf.iter_mut() {
            *a *= self.scale;
        }
    }

    /// Applies the QFT to every consecutive `2^l` block of `buf`.
    pub fn forward(&self, buf: &mut [Complex64]) {
        self.run(&self.positive, buf);
    }

    /// Applies the inverse QFT to every consecutive `2^l` block of `buf`.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.run(&self.negative, buf);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn dft(x: &[Complex64], sign: f64) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|j| {
                x.iter()
                    .enumerate()
                    .map(|(k, a)| a * Complex64::from_polar(1.0, sign * 2.0 * PI * (j * k) as f64 / n as f64))
                    .sum::<Complex64>()
                    / (n as f64).sqrt()
            })
            .collect()
    }

    #[test]
    fn rejects_bad_width() {
        assert!(matches!(Qft::new(0), Err(Error::RegisterWidth(0))));
        assert!(Qft::new(25).is_err());
    }

    #[test]
    fn basis_zero_maps_to_uniform() {
        let q = Qft::new(3).unwrap();
        let mut buf = vec![Complex64::new(0.0, 0.0); 8];
        buf[0] = Complex64::new(1.0, 0.0);
        q.forward(&mut buf);
        for a in &buf {
            assert!((a - Complex64::new(8f64.sqrt().recip(), 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn inverse_concentrates_representable_phase() {
        // phase 3/8 on |k>: the inverse transform lands on j = 3
        let q = Qft::new(3).unwrap();
        let mut buf: Vec<Complex64> =
            (0..8).map(|k| Complex64::from_polar(8f64.sqrt().recip(), 2.0 * PI * 3.0 * k as f64 / 8.0)).collect();
        q.inverse(&mut buf);
        assert!((buf[3].norm_sqr() - 1.0).abs() < 1e-12);
    }

    fn vec_strategy(l: usize) -> impl Strategy<Value = Vec<Complex64>> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << l)
            .prop_map(|v| v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
    }

    proptest! {
        #[test]
        fn round_trip_and_reference(x in (1usize..=6).prop_flat_map(vec_strategy)) {
            let l = x.len().trailing_zeros() as usize;
            let q = Qft::new(l).unwrap();

            let mut y = x.clone();
            q.forward(&mut y);
            let want = dft(&x, 1.0);
            for (a, b) in y.iter().zip(&want) {
                prop_assert!((a - b).norm() < 1e-10);
            }
            let n_in: f64 = x.iter().map(Complex64::norm_sqr).sum();
            let n_out: f64 = y.iter().map(Complex64::norm_sqr).sum();
            prop_assert!((n_in - n_out).abs() < 1e-10);

            q.inverse(&mut y);
            for (a, b) in y.iter().zip(&x) {
                prop_assert!((a - b).norm() < 1e-10);
            }

            let mut z = x.clone();
            q.inverse(&mut z);
            for (a, b) in z.iter().zip(&dft(&x, -1.0)) {
                prop_assert!((a - b).norm() < 1e-10);
            }
        }

        #[test]
        fn blocks_are_independent(a in vec_strategy(3), b in vec_strategy(3)) {
            let q = Qft::new(3).unwrap();
            let mut both: Vec<Complex64> = a.iter().chain(&b).copied().collect();
            q.inverse(&mut both);
            let (mut a2, mut b2) = (a.clone(), b.clone());
            q.inverse(&mut a2);
            q.inverse(&mut b2);
            for (x, y) in both.iter().zip(a2.iter().chain(&b2)) {
                prop_assert!((x - y).norm() < 1e-12);
            }
        }
    }
}
