use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::{dft, signed_bin};
use crate::modem::BasebandFrame;
use crate::waveletdesign::SampledWaveform;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Window {
    Rectangular,
    Hann,
}

impl Window {
    fn coefficients(self, n: usize) -> Vec<f64> {
        match self {
            Window::Rectangular => vec![1.0; n],
            // periodic Hann, so 50% overlap sums to a constant
            Window::Hann => (0..n)
                .map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / n as f64).cos())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsdMethod {
    Periodogram,
    Welch {
        segment: usize,
        overlap: usize,
        window: Window,
    },
    /// Computed from known pulse spectra rather than estimated from a realisation.
    Analytic,
}

/// Two-sided power spectral density on an ascending frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdEstimate {
    pub freqs: Vec<f64>,
    pub power_db: Vec<f64>,
    /// Linear density (power per Hz) behind `power_db`.
    pub density: Vec<f64>,
    pub resolution_bw: f64,
    pub method: PsdMethod,
}

const DB_FLOOR: f64 = -3000.0;

impl PsdEstimate {
    pub fn from_density(freqs: Vec<f64>, density: Vec<f64>, resolution_bw: f64, method: PsdMethod) -> Self {
        let power_db = density
            .iter()
            .map(|&p| if p > 0.0 { (10.0 * p.log10()).max(DB_FLOOR) } else { DB_FLOOR })
            .collect();
        PsdEstimate {
            freqs,
            power_db,
            density,
            resolution_bw,
            method,
        }
    }

    /// `∫ S(f) df` as a rectangle sum.
    pub fn total_power(&self) -> f64 {
        self.density.iter().sum::<f64>() * self.resolution_bw
    }

    pub fn peak_freq(&self) -> f64 {
        let i = self
            .density
            .iter()
            .enumerate()
            .fold(0, |b, (i, &p)| if p > self.density[b] { i } else { b });
        self.freqs[i]
    }

    /// Two-column CSV: `freq_hz,power_db`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("freq_hz,power_db\n");
        for (f, p) in self.freqs.iter().zip(&self.power_db) {
            let _ = writeln!(s, "{f},{p}");
        }
        s
    }
}

fn centred_order(n: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by_key(|&k| signed_bin(k, n));
    idx
}

/// Averaged modified periodogram, scaled so the density integrates to the frame's
/// mean sample power.
pub fn psd(frame: &BasebandFrame, method: PsdMethod) -> Result<PsdEstimate> {
    let (segment, overlap, window) = match method {
        PsdMethod::Periodogram => (frame.len(), 0, Window::Rectangular),
        PsdMethod::Welch {
            segment,
            overlap,
            window,
        } => (segment, overlap, window),
        PsdMethod::Analytic => {
            return Err(Error::InvalidParameter(
                "analytic spectra come from pulse_set_psd".into(),
            ))
        }
    };
    if segment == 0 || overlap >= segment {
        return Err(Error::InvalidParameter(format!(
            "segment {segment} with overlap {overlap}"
        )));
    }
    if frame.len() < segment {
        return Err(Error::FrameTooShort {
            len: frame.len(),
            segment,
        });
    }
    let fs = frame.sample_rate;
    let w = window.coefficients(segment);
    let w_energy: f64 = w.iter().map(|v| v * v).sum();
    let step = segment - overlap;
    let n_seg = (frame.len() - segment) / step + 1;
    let mut acc = vec![0.0f64; segment];
    for s in 0..n_seg {
        let start = s * step;
        let seg: Vec<Complex64> = frame.samples[start..start + segment]
            .iter()
            .zip(&w)
            .map(|(x, &wi)| x * wi)
            .collect();
        // unitary DFT: |X_raw|² = segment·|X|²
        for (a, x) in acc.iter_mut().zip(dft(&seg)) {
            *a += x.norm_sqr();
        }
    }
    let scale = segment as f64 / (n_seg as f64 * fs * w_energy);
    let order = centred_order(segment);
    let df = fs / segment as f64;
    let freqs = order.iter().map(|&k| signed_bin(k, segment) as f64 * df).collect();
    let density = order.iter().map(|&k| acc[k] * scale).collect();
    Ok(PsdEstimate::from_density(freqs, density, df, method))
}

/// Expected PSD of independent unit-energy symbols on each pulse, one symbol per
/// pulse per `symbol_period`: `S(f) = Σ_p |P_p(f)|² / T`.
pub fn pulse_set_psd(pulses: &[SampledWaveform], symbol_period: f64, n_fft: usize) -> Result<PsdEstimate> {
    let dt = pulses.first().map(|p| p.dt).ok_or(Error::EmptySpectrum)?;
    if !(symbol_period > 0.0) {
        return Err(Error::InvalidParameter(format!("symbol period {symbol_period}")));
    }
    let mut acc = vec![0.0f64; n_fft];
    for p in pulses {
        if (p.dt - dt).abs() > 1e-12 * dt {
            return Err(Error::GridMismatch("pulses use different sample spacings".into()));
        }
        if p.len() > n_fft {
            return Err(Error::FrameTooShort {
                len: n_fft,
                segment: p.len(),
            });
        }
        let mut buf = p.samples.clone();
        buf.resize(n_fft, Complex64::new(0.0, 0.0));
        // continuous-time transform ≈ dt·Σ x e^{-j2πft} = dt·√n·(unitary DFT)
        let s = dt * dt * n_fft as f64;
        for (a, x) in acc.iter_mut().zip(dft(&buf)) {
            *a += x.norm_sqr() * s;
        }
    }
    let fs = 1.0 / dt;
    let df = fs / n_fft as f64;
    let order = centred_order(n_fft);
    let freqs = order.iter().map(|&k| signed_bin(k, n_fft) as f64 * df).collect();
    let density = order.iter().map(|&k| acc[k] / symbol_period).collect();
    Ok(PsdEstimate::from_density(freqs, density, df, PsdMethod::Analytic))
}

/// Width of the smallest band, symmetric about the power centroid, that holds
/// `containment` of the total power. Bins are added nearest-first and the width is
/// the number of bins taken times the resolution bandwidth.
pub fn occupied_bandwidth(psd: &PsdEstimate, containment: f64) -> Result<f64> {
    if !(containment > 0.0 && containment < 1.0) {
        return Err(Error::InvalidParameter(format!("containment {containment}")));
    }
    let total: f64 = psd.density.iter().sum();
    if !(total > 0.0) {
        return Err(Error::ZeroBandwidth);
    }
    let centroid: f64 = psd
        .freqs
        .iter()
        .zip(&psd.density)
        .map(|(f, p)| f * p)
        .sum::<f64>()
        / total;
    let mut idx: Vec<usize> = (0..psd.freqs.len()).collect();
    idx.sort_by(|&a, &b| {
        let da = (psd.freqs[a] - centroid).abs();
        let db = (psd.freqs[b] - centroid).abs();
        da.partial_cmp(&db).unwrap().then(a.cmp(&b))
    });
    let target = containment * total * (1.0 - 1e-12);
    let mut acc = 0.0;
    let mut count = 0usize;
    for &i in &idx {
        acc += psd.density[i];
        count += 1;
        if acc >= target {
            break;
        }
    }
    Ok(count as f64 * psd.resolution_bw)
}

pub fn spectral_efficiency(bit_rate: f64, bandwidth: f64) -> Result<f64> {
    if !(bandwidth > 0.0 && bandwidth.is_finite()) {
        return Err(Error::ZeroBandwidth);
    }
    Ok(bit_rate / bandwidth)
}
