//! Unitary DFT helpers over `rustfft`.

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Unitary forward DFT: `X[k] = N^{-1/2} Σ x[n] e^{-j2πkn/N}`.
pub(crate) fn dft(x: &[Complex64]) -> Vec<Complex64> {
    transform(x, false)
}

/// Unitary inverse DFT.
pub(crate) fn idft(x: &[Complex64]) -> Vec<Complex64> {
    transform(x, true)
}

fn transform(x: &[Complex64], inverse: bool) -> Vec<Complex64> {
    let n = x.len();
    if n == 0 {
        return Vec::new();
    }
    let fft = PLANNER.with(|p| {
        let mut planner = p.borrow_mut();
        if inverse {
            planner.plan_fft_inverse(n)
        } else {
            planner.plan_fft_forward(n)
        }
    });
    let mut buf = x.to_vec();
    fft.process(&mut buf);
    let scale = 1.0 / (n as f64).sqrt();
    for v in &mut buf {
        *v *= scale;
    }
    buf
}

/// Signed frequency index of DFT bin `k` in an `n`-point transform, in `[-n/2, n/2)`.
pub(crate) fn signed_bin(k: usize, n: usize) -> i64 {
    if k < n.div_ceil(2) && !(n % 2 == 0 && k == n / 2) {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// DFT bin holding signed frequency `f` in an `n`-point transform.
pub(crate) fn bin_of(f: i64, n: usize) -> usize {
    f.rem_euclid(n as i64) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_parseval() {
        let x: Vec<Complex64> = (0..12)
            .map(|i| Complex64::new((i as f64).sin(), (0.3 * i as f64).cos()))
            .collect();
        let y = dft(&x);
        let e_x: f64 = x.iter().map(|v| v.norm_sqr()).sum();
        let e_y: f64 = y.iter().map(|v| v.norm_sqr()).sum();
        assert!((e_x - e_y).abs() < 1e-12);
        let z = idft(&y);
        for (a, b) in x.iter().zip(&z) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn signed_bins() {
        assert_eq!(signed_bin(0, 8), 0);
        assert_eq!(signed_bin(3, 8), 3);
        assert_eq!(signed_bin(4, 8), -4);
        assert_eq!(signed_bin(7, 8), -1);
        assert_eq!(signed_bin(2, 5), 2);
        assert_eq!(signed_bin(3, 5), -2);
        assert_eq!(bin_of(-1, 8), 7);
    }
}
