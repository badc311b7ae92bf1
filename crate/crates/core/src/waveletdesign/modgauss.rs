use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use super::{FrequencyGrid, SampledWaveform, SpectrumSamples};
use crate::error::{Error, Result};
use crate::filterbank::{WaveletFamily, WaveletFilterPair};

pub const DEFAULT_L_MAX: usize = 8;

/// Shape of the orthonormalised Gaussian scaling function.
///
/// `sigma` is dimensionless; the spectral width is set by the product `sigma·t_symbol`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModifiedGaussianParams {
    sigma: f64,
    t_symbol: f64,
    l_max: usize,
}

impl ModifiedGaussianParams {
    pub fn new(sigma: f64, t_symbol: f64, l_max: usize) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!("sigma must be > 0, got {sigma}")));
        }
        if !(t_symbol > 0.0 && t_symbol.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "symbol period must be > 0, got {t_symbol}"
            )));
        }
        if l_max == 0 {
            return Err(Error::InvalidParameter("l_max must be >= 1".into()));
        }
        Ok(ModifiedGaussianParams {
            sigma,
            t_symbol,
            l_max,
        })
    }

    pub fn with_default_lmax(sigma: f64, t_symbol: f64) -> Result<Self> {
        Self::new(sigma, t_symbol, DEFAULT_L_MAX)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn t_symbol(&self) -> f64 {
        self.t_symbol
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    /// Size of the first dropped lattice term, `exp(-8σ²π²·l_max²)`.
    /// Callers wanting a 1e-14 truncation should enlarge `l_max` when this exceeds it.
    pub fn tail_bound(&self) -> f64 {
        let l = self.l_max as f64;
        (-8.0 * self.sigma * self.sigma * PI * PI * l * l).exp()
    }

    pub fn tail_ok(&self) -> bool {
        self.tail_bound() < 1e-14
    }
}

/// Periodised power `Σ_{|l - l0| ≤ l_max} exp(-8σ²π²(u + l)²)` with `u = |f|·T` and the
/// window centred on the dominant term `l0 = -round(u)`.
pub fn lattice_power_sum(params: &ModifiedGaussianParams, f: f64) -> f64 {
    let u = (f * params.t_symbol).abs();
    let a = 8.0 * params.sigma * params.sigma * PI * PI;
    let l0 = -(u.round() as i64);
    let lm = params.l_max as i64;
    let mut terms: Vec<f64> = (l0 - lm..=l0 + lm)
        .map(|l| {
            let x = u + l as f64;
            (-a * x * x).exp()
        })
        .collect();
    // smallest first
    terms.sort_by(|x, y| x.partial_cmp(y).unwrap());
    terms.iter().sum()
}

/// Spectrum value at frequency `f` (Hz).
pub fn mod_gauss_value(params: &ModifiedGaussianParams, f: f64) -> f64 {
    let u = (f * params.t_symbol).abs();
    let s2 = params.sigma * params.sigma;
    let log_num = -4.0 * PI * PI * s2 * u * u;
    let log_den = 0.5 * lattice_power_sum(params, u / params.t_symbol).ln();
    (log_num - log_den).exp()
}

pub fn mod_gauss_spectrum(params: &ModifiedGaussianParams, grid: &FrequencyGrid) -> SpectrumSamples {
    let values = (0..grid.n)
        .map(|i| mod_gauss_value(params, grid.freq(i)))
        .collect();
    SpectrumSamples {
        values,
        df: grid.df,
        f0: grid.f0,
    }
}

/// Samples the scaling function by trapezoidal inversion of its spectrum.
///
/// The grid is `t0 = -floor(n/2)·dt`, so odd `n` is symmetric about zero.
/// The frequency span is `±(l_max + 1)/T` and the step is chosen so the implied
/// time period is at least four times the sampled span.
pub fn mod_gauss_time(
    params: &ModifiedGaussianParams,
    n_samples: usize,
    dt: f64,
) -> Result<SampledWaveform> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter(format!("dt must be > 0, got {dt}")));
    }
    let half = (n_samples / 2) as f64;
    let t0 = -half * dt;
    let t_last = t0 + n_samples.saturating_sub(1) as f64 * dt;
    let have = (-t0).min(t_last);
    let needed = 8.0 * params.sigma * params.t_symbol;
    if n_samples == 0 || have < needed {
        return Err(Error::SpanTooSmall { needed, have });
    }

    let f_max = (params.l_max as f64 + 1.0) / params.t_symbol;
    let span = t_last - t0;
    let df_limit = 1.0 / (4.0 * span.max(params.t_symbol));
    let k_max = (f_max / df_limit).ceil() as usize;
    let df = f_max / k_max as f64;

    // Φ is even: keep k ≥ 0 and double the positive half.
    let weights: Vec<f64> = (0..=k_max)
        .map(|k| {
            let v = mod_gauss_value(params, k as f64 * df);
            let w = if k == 0 || k == k_max { 1.0 } else { 2.0 };
            v * w * df
        })
        .collect();

    let samples: Vec<Complex64> = (0..n_samples)
        .map(|i| {
            let t = t0 + i as f64 * dt;
            let step = Complex64::from_polar(1.0, 2.0 * PI * df * t);
            let mut rot = Complex64::new(1.0, 0.0);
            let mut acc = 0.0;
            for (k, &w) in weights.iter().enumerate() {
                if k % 64 == 0 {
                    rot = Complex64::from_polar(1.0, 2.0 * PI * df * t * k as f64);
                }
                acc += w * rot.re;
                rot *= step;
            }
            Complex64::new(acc, 0.0)
        })
        .collect();
    SampledWaveform::new(samples, dt, t0)
}

/// Two-scale lowpass filter of a sampled scaling function.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFilter {
    /// `taps[i]` is the coefficient at index `first_index + i`.
    pub taps: Vec<f64>,
    pub first_index: i64,
    /// End coefficients still exceed 1e-8 in magnitude.
    pub truncated: bool,
}

impl ScalingFilter {
    pub fn sum(&self) -> f64 {
        self.taps.iter().sum()
    }

    pub fn energy(&self) -> f64 {
        self.taps.iter().map(|v| v * v).sum()
    }

    /// Causal filter pair (padded to even length with a trailing zero).
    pub fn to_filter_pair(&self) -> WaveletFilterPair {
        let mut h = self.taps.clone();
        if h.len() % 2 == 1 {
            h.push(0.0);
        }
        let l = h.len();
        let g = (0..l)
            .map(|n| {
                let s = if n % 2 == 0 { 1.0 } else { -1.0 };
                s * h[l - 1 - n]
            })
            .collect();
        WaveletFilterPair::from_taps_unchecked(h, g, WaveletFamily::Custom("modgauss".into()))
    }
}

const TAP_FLOOR: f64 = 1e-12;
const TRUNCATION_FLAG: f64 = 1e-8;

/// `h[n] = √2 ∫ φ(t) φ(2t - nT) dt`, evaluated on the sample grid of `phi`.
///
/// Requires `T/dt` and `t0/dt` to be integers so the dilated and shifted copy lands on
/// existing samples.
pub fn derive_scaling_filter(
    phi: &SampledWaveform,
    params: &ModifiedGaussianParams,
) -> Result<ScalingFilter> {
    let dt = phi.dt;
    let per = params.t_symbol / dt;
    let off = phi.t0 / dt;
    if (per - per.round()).abs() > 1e-9 || (off - off.round()).abs() > 1e-9 {
        return Err(Error::GridMismatch(format!(
            "T/dt = {per}, t0/dt = {off} must both be integers"
        )));
    }
    let per = per.round() as i64;
    let off = off.round() as i64;
    let len = phi.len() as i64;
    let re: Vec<f64> = phi.samples.iter().map(|v| v.re).collect();

    // sample of φ(2t_i - nT) sits at index 2i + off - n·per
    let tap = |n: i64| -> f64 {
        let mut acc = 0.0;
        for i in 0..len {
            let j = 2 * i + off - n * per;
            if j >= 0 && j < len {
                acc += re[i as usize] * re[j as usize];
            }
        }
        SQRT_2 * acc * dt
    };

    let n_max = (2 * len) / per.max(1) + 1;
    let full: Vec<f64> = (-n_max..=n_max).map(tap).collect();
    let centre = n_max as usize;
    let mut reach = 0usize;
    for (i, v) in full.iter().enumerate() {
        if v.abs() >= TAP_FLOOR {
            reach = reach.max(i.abs_diff(centre));
        }
    }
    let taps = full[centre - reach..=centre + reach].to_vec();
    let truncated = taps[0].abs() > TRUNCATION_FLAG || taps[taps.len() - 1].abs() > TRUNCATION_FLAG;
    let out = ScalingFilter {
        taps,
        first_index: -(reach as i64),
        truncated,
    };
    let s = out.sum();
    if (s - SQRT_2).abs() > 1e-4 {
        return Err(Error::NotConverged(format!("sum of taps {s}, expected sqrt(2)")));
    }
    Ok(out)
}
