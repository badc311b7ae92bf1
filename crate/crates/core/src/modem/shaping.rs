use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fft::signed_bin;

/// Raised-cosine spectrum at normalised frequency `x = f/R` (symbol rate `R`).
/// Equals 1/2 at `|x| = 1/2` for every roll-off, so folded copies sum to one.
pub fn raised_cosine(x: f64, beta: f64) -> f64 {
    let ax = x.abs();
    let lo = (1.0 - beta) / 2.0;
    let hi = (1.0 + beta) / 2.0;
    if beta <= 0.0 {
        return if ax < 0.5 {
            1.0
        } else if ax == 0.5 {
            0.5
        } else {
            0.0
        };
    }
    if ax <= lo {
        1.0
    } else if ax >= hi {
        0.0
    } else {
        0.5 * (1.0 + (PI / beta * (ax - lo)).cos())
    }
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// Raised-cosine impulse response at `t` in symbol periods (peak 1 at `t = 0`).
pub fn rc_pulse(t: f64, beta: f64) -> f64 {
    if beta > 0.0 && (2.0 * beta * t).abs() == 1.0 {
        return PI / 4.0 * sinc(1.0 / (2.0 * beta));
    }
    sinc(t) * (PI * beta * t).cos() / (1.0 - (2.0 * beta * t).powi(2))
}

/// Square-root raised-cosine impulse response at `t` in symbol periods, unit energy
/// over the whole real line.
pub fn srrc_pulse(t: f64, beta: f64) -> f64 {
    if beta <= 0.0 {
        return sinc(t);
    }
    if t == 0.0 {
        return 1.0 - beta + 4.0 * beta / PI;
    }
    if (4.0 * beta * t).abs() == 1.0 {
        let a = PI / (4.0 * beta);
        return beta / 2f64.sqrt() * ((1.0 + 2.0 / PI) * a.sin() + (1.0 - 2.0 / PI) * a.cos());
    }
    let num = (PI * t * (1.0 - beta)).sin() + 4.0 * beta * t * (PI * t * (1.0 + beta)).cos();
    num / (PI * t * (1.0 - (4.0 * beta * t).powi(2)))
}

/// Square-root Nyquist amplitude for each bin of an `m`-point DFT carrying an
/// `n`-chip sequence. With `beta = 0` this is the half-open brick wall `[-n/2, n/2)`.
pub fn nyquist_weights(n: usize, m: usize, beta: f64) -> Result<Vec<f64>> {
    if n == 0 || m < n {
        return Err(Error::ConfigInvariantViolated(format!(
            "cannot place {n} chips in {m} bins"
        )));
    }
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::ConfigInvariantViolated(format!(
            "roll-off {beta} outside [0, 1]"
        )));
    }
    let half_excess = ((1.0 + beta) * n as f64 / 2.0).ceil() as usize;
    if beta > 0.0 && 2 * half_excess > m {
        return Err(Error::ConfigInvariantViolated(format!(
            "roll-off {beta} needs more than {m} bins for {n} chips"
        )));
    }
    let half = (n / 2) as i64;
    Ok((0..m)
        .map(|k| {
            let nu = signed_bin(k, m);
            if beta <= 0.0 {
                if nu >= -half && nu < n as i64 - half {
                    1.0
                } else {
                    0.0
                }
            } else {
                raised_cosine(nu as f64 / n as f64, beta).sqrt()
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nyquist_folding() {
        for &beta in &[0.0, 0.2, 0.5, 1.0] {
            let n = 16;
            let m = 64;
            let w = nyquist_weights(n, m, beta).unwrap();
            for k in 0..n {
                let s: f64 = (0..m)
                    .filter(|&b| signed_bin(b, m).rem_euclid(n as i64) as usize == k)
                    .map(|b| w[b] * w[b])
                    .sum();
                assert!((s - 1.0).abs() < 1e-12, "beta {beta} k {k}: {s}");
            }
        }
    }

    #[test]
    fn rolloff_needs_room() {
        assert!(nyquist_weights(16, 16, 0.2).is_err());
        assert!(nyquist_weights(16, 16, 0.0).is_ok());
        assert!(nyquist_weights(16, 8, 0.0).is_err());
    }

    #[test]
    fn pulses_near_singular_points_are_continuous() {
        for &beta in &[0.22, 0.5] {
            let t = 1.0 / (4.0 * beta);
            assert!((srrc_pulse(t, beta) - srrc_pulse(t + 1e-7, beta)).abs() < 1e-5);
            let t = 1.0 / (2.0 * beta);
            assert!((rc_pulse(t, beta) - rc_pulse(t + 1e-7, beta)).abs() < 1e-5);
        }
        assert!((srrc_pulse(1e-9, 0.3) - srrc_pulse(0.0, 0.3)).abs() < 1e-6);
    }

    #[test]
    fn srrc_energy_and_rc_zero_crossings() {
        let dt = 1.0 / 64.0;
        let e: f64 = (-64 * 60..=64 * 60)
            .map(|i| srrc_pulse(i as f64 * dt, 0.5).powi(2))
            .sum::<f64>()
            * dt;
        assert!((e - 1.0).abs() < 1e-3, "{e}");
        for k in 1..6 {
            assert!(rc_pulse(k as f64, 0.3).abs() < 1e-15);
        }
    }

    #[test]
    fn raised_cosine_shape() {
        assert_eq!(raised_cosine(0.0, 0.3), 1.0);
        assert!((raised_cosine(0.5, 0.3) - 0.5).abs() < 1e-15);
        assert_eq!(raised_cosine(0.66, 0.3), 0.0);
        assert_eq!(raised_cosine(0.49, 0.0), 1.0);
    }
}
