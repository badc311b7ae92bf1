//! Wavelet and pulse design: the modified-Gaussian scaling function, cascade
//! sampling of filter-bank wavelets, sidelobe measurement and dyadic pulse sets.

mod cascade;
mod modgauss;
mod pulses;
mod sidelobe;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use cascade::{cascade, Cascade};
pub use modgauss::{
    derive_scaling_filter, lattice_power_sum, mod_gauss_spectrum, mod_gauss_time, mod_gauss_value,
    ModifiedGaussianParams, ScalingFilter, DEFAULT_L_MAX,
};
pub use pulses::{dyadic_pulse_set, dyadic_translates};
pub use sidelobe::sidelobe_level;

/// Uniformly sampled time-domain waveform: sample `i` sits at `t0 + i·dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledWaveform {
    pub samples: Vec<Complex64>,
    pub dt: f64,
    pub t0: f64,
}

impl SampledWaveform {
    pub fn new(samples: Vec<Complex64>, dt: f64, t0: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) || !t0.is_finite() {
            return Err(Error::InvalidParameter(format!("dt={dt}, t0={t0}")));
        }
        if samples.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite sample".into()));
        }
        Ok(SampledWaveform { samples, dt, t0 })
    }

    pub fn from_real(samples: &[f64], dt: f64, t0: f64) -> Result<Self> {
        Self::new(
            samples.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            dt,
            t0,
        )
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    /// Continuous-time energy `Σ|x|²·dt`.
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.dt
    }

    /// `∫ x(t) y*(t) dt` over the overlap of two waveforms on the same grid spacing.
    pub fn inner(&self, other: &SampledWaveform) -> Result<Complex64> {
        if (self.dt - other.dt).abs() > 1e-12 * self.dt {
            return Err(Error::GridMismatch(format!("dt {} vs {}", self.dt, other.dt)));
        }
        let offset = (other.t0 - self.t0) / self.dt;
        let shift = offset.round();
        if (offset - shift).abs() > 1e-6 {
            return Err(Error::GridMismatch(format!(
                "t0 offset {offset} is not a whole number of samples"
            )));
        }
        let shift = shift as i64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &y) in other.samples.iter().enumerate() {
            let i = j as i64 + shift;
            if i >= 0 && (i as usize) < self.samples.len() {
                acc += self.samples[i as usize] * y.conj();
            }
        }
        Ok(acc * self.dt)
    }

    /// Copy delayed by `delay` seconds.
    pub fn shifted(&self, delay: f64) -> SampledWaveform {
        SampledWaveform {
            samples: self.samples.clone(),
            dt: self.dt,
            t0: self.t0 + delay,
        }
    }

    /// Largest `|Im|` over the samples.
    pub fn max_imag(&self) -> f64 {
        self.samples.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }
}

/// Uniformly sampled magnitude spectrum: value `i` sits at `f0 + i·df`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSamples {
    pub values: Vec<f64>,
    pub df: f64,
    pub f0: f64,
}

impl SpectrumSamples {
    pub fn freq(&self, i: usize) -> f64 {
        self.f0 + i as f64 * self.df
    }
}

/// Descriptor of a uniform frequency grid with `n` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyGrid {
    pub f0: f64,
    pub df: f64,
    pub n: usize,
}

impl FrequencyGrid {
    /// `n` points spanning `[-f_max, f_max]` inclusive (symmetric about zero).
    pub fn symmetric(f_max: f64, n: usize) -> Self {
        let n = n.max(2);
        FrequencyGrid {
            f0: -f_max,
            df: 2.0 * f_max / (n - 1) as f64,
            n,
        }
    }

    pub fn freq(&self, i: usize) -> f64 {
        self.f0 + i as f64 * self.df
    }
}
