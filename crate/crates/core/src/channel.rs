//! AWGN, static multipath and perfect-CSI zero-forcing equalisation.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::fft::{dft, idft, signed_bin};
use crate::modem::{nyquist_weights, BasebandFrame, OfdmConfig};
use crate::rng::rng_from_seed;

/// Magnitude below which a channel bin counts as a null.
pub const ZF_EPSILON: f64 = 1e-6;

/// How `snr_db` relates signal energy to the noise variance `N0` of each complex sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SnrReference {
    /// Average power per sample over `N0`.
    PerSample,
    /// Energy per symbol over `N0`; a symbol spans `samples_per_symbol` samples.
    EsN0 { samples_per_symbol: f64 },
    /// Energy per bit over `N0`.
    EbN0 {
        samples_per_symbol: f64,
        bits_per_symbol: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AwgnSpec {
    /// `f64::INFINITY` disables the noise.
    pub snr_db: f64,
    pub reference: SnrReference,
    pub seed: u64,
}

impl AwgnSpec {
    pub fn new(snr_db: f64, reference: SnrReference, seed: u64) -> Result<Self> {
        if snr_db.is_nan() || snr_db == f64::NEG_INFINITY {
            return Err(Error::InvalidParameter(format!("snr {snr_db} dB")));
        }
        match reference {
            SnrReference::EsN0 { samples_per_symbol } | SnrReference::EbN0 { samples_per_symbol, .. }
                if !(samples_per_symbol > 0.0) =>
            {
                return Err(Error::InvalidParameter(format!(
                    "samples per symbol {samples_per_symbol}"
                )))
            }
            SnrReference::EbN0 { bits_per_symbol: 0, .. } => {
                return Err(Error::InvalidParameter("zero bits per symbol".into()))
            }
            _ => {}
        }
        Ok(AwgnSpec {
            snr_db,
            reference,
            seed,
        })
    }

    /// Complex noise variance for a frame of average sample power `power`.
    pub fn noise_variance(&self, power: f64) -> f64 {
        if self.snr_db == f64::INFINITY {
            return 0.0;
        }
        let snr = 10f64.powf(self.snr_db / 10.0);
        match self.reference {
            SnrReference::PerSample => power / snr,
            SnrReference::EsN0 { samples_per_symbol } => power * samples_per_symbol / snr,
            SnrReference::EbN0 {
                samples_per_symbol,
                bits_per_symbol,
            } => power * samples_per_symbol / (snr * bits_per_symbol as f64),
        }
    }
}

/// Adds circularly symmetric complex Gaussian noise scaled to the frame's measured power.
pub fn awgn(frame: &BasebandFrame, spec: &AwgnSpec) -> Result<BasebandFrame> {
    awgn_with_power(frame, spec, frame.mean_power())
}

/// Adds noise scaled to a caller-supplied reference power, e.g. the transmitted
/// power measured before a fading channel or without the cyclic prefix.
pub fn awgn_with_power(frame: &BasebandFrame, spec: &AwgnSpec, power: f64) -> Result<BasebandFrame> {
    if frame.is_empty() {
        return Err(Error::EmptyFrame);
    }
    if spec.snr_db == f64::INFINITY {
        return Ok(frame.clone());
    }
    if !(power > 0.0) {
        return Err(Error::ZeroEnergy);
    }
    let sd = (spec.noise_variance(power) / 2.0).sqrt();
    let mut rng = rng_from_seed(spec.seed);
    let samples = frame
        .samples
        .iter()
        .map(|&v| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            v + Complex64::new(re * sd, im * sd)
        })
        .collect();
    Ok(frame.with_samples(samples))
}

/// Ideal low-pass receive filter over the symbol body. Keeps the DFT bins
/// `-c·N/2 <= ν < c·N/2` where `N` is the number of chips and `c` the fraction of the
/// signal bandwidth retained, so `c = 1` passes a brick-wall signal unchanged.
pub fn brickwall_receive_filter(frame: &BasebandFrame, cfg: &OfdmConfig, fraction: f64) -> Result<BasebandFrame> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::InvalidParameter(format!("bandwidth fraction {fraction}")));
    }
    if frame.len() != cfg.frame_len() {
        return Err(Error::LengthMismatch {
            expected: cfg.frame_len(),
            got: frame.len(),
        });
    }
    let cp = cfg.cp_len();
    let m = cfg.body_len();
    let edge = fraction * cfg.n_subcarriers as f64 / 2.0;
    let mut spec = dft(&frame.samples[cp..]);
    for (k, v) in spec.iter_mut().enumerate() {
        let nu = signed_bin(k, m) as f64;
        if !(nu >= -edge && nu < edge) {
            *v = Complex64::new(0.0, 0.0);
        }
    }
    let body = idft(&spec);
    let mut samples = Vec::with_capacity(cp + m);
    samples.extend_from_slice(&body[m - cp..]);
    samples.extend_from_slice(&body);
    Ok(frame.with_samples(samples))
}

/// Sparse static impulse response.
#[derive(Debug, Clone, PartialEq)]
pub struct MultipathSpec {
    tap_delays: Vec<usize>,
    tap_gains: Vec<Complex64>,
    normalize: bool,
}

impl MultipathSpec {
    /// Delays must start at 0 and never decrease. With `normalize` the gains are
    /// rescaled to unit total power.
    pub fn new(tap_delays: Vec<usize>, tap_gains: Vec<Complex64>, normalize: bool) -> Result<Self> {
        if tap_delays.is_empty() || tap_delays.len() != tap_gains.len() {
            return Err(Error::LengthMismatch {
                expected: tap_delays.len(),
                got: tap_gains.len(),
            });
        }
        if tap_delays[0] != 0 || tap_delays.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidParameter(
                "tap delays must start at 0 and be nondecreasing".into(),
            ));
        }
        let mut gains = tap_gains;
        if normalize {
            let p: f64 = gains.iter().map(|g| g.norm_sqr()).sum();
            if !(p > 0.0) {
                return Err(Error::ZeroEnergy);
            }
            let s = 1.0 / p.sqrt();
            for g in gains.iter_mut() {
                *g *= s;
            }
        }
        Ok(MultipathSpec {
            tap_delays,
            tap_gains: gains,
            normalize,
        })
    }

    pub fn identity() -> Self {
        MultipathSpec {
            tap_delays: vec![0],
            tap_gains: vec![Complex64::new(1.0, 0.0)],
            normalize: true,
        }
    }

    /// Ten taps at delays 0..9 with a 3 dB/tap exponential power profile and complex
    /// Gaussian gains drawn from `seed`, normalised to unit power.
    pub fn default_ten_path(seed: u64) -> Self {
        let mut rng = rng_from_seed(seed);
        let gains: Vec<Complex64> = (0..10)
            .map(|d| {
                let amp = (10f64.powf(-0.3 * d as f64) / 2.0).sqrt();
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(re, im) * amp
            })
            .collect();
        MultipathSpec::new((0..10).collect(), gains, true).expect("valid default profile")
    }

    /// Parses `delay gain_re gain_im` lines; `#` starts a comment.
    pub fn parse_profile(text: &str, normalize: bool) -> Result<Self> {
        let mut delays = Vec::new();
        let mut gains = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::Config(format!("channel profile line {}: '{raw}'", no + 1));
            if f.len() != 3 {
                return Err(bad());
            }
            delays.push(f[0].parse::<usize>().map_err(|_| bad())?);
            let re = f[1].parse::<f64>().map_err(|_| bad())?;
            let im = f[2].parse::<f64>().map_err(|_| bad())?;
            gains.push(Complex64::new(re, im));
        }
        MultipathSpec::new(delays, gains, normalize).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path, normalize: bool) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse_profile(&text, normalize)
    }

    pub fn to_profile_text(&self) -> String {
        self.tap_delays
            .iter()
            .zip(&self.tap_gains)
            .map(|(d, g)| format!("{d} {:.17e} {:.17e}\n", g.re, g.im))
            .collect()
    }

    pub fn tap_delays(&self) -> &[usize] {
        &self.tap_delays
    }

    pub fn tap_gains(&self) -> &[Complex64] {
        &self.tap_gains
    }

    pub fn normalize(&self) -> bool {
        self.normalize
    }

    pub fn max_delay(&self) -> usize {
        *self.tap_delays.last().unwrap_or(&0)
    }

    pub fn power(&self) -> f64 {
        self.tap_gains.iter().map(|g| g.norm_sqr()).sum()
    }

    /// `H[k] = Σ g·exp(-j2πk·d/n)` on an `n`-point grid.
    pub fn frequency_response(&self, n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|k| {
                self.tap_delays
                    .iter()
                    .zip(&self.tap_gains)
                    .map(|(&d, &g)| {
                        let ph = -2.0 * PI * ((k * d) % n) as f64 / n as f64;
                        g * Complex64::from_polar(1.0, ph)
                    })
                    .sum()
            })
            .collect()
    }
}

/// Linear convolution with the tap response; the output grows by the largest delay.
pub fn apply_multipath(frame: &BasebandFrame, spec: &MultipathSpec) -> Result<BasebandFrame> {
    let n = frame.len();
    if n == 0 {
        return Err(Error::EmptyFrame);
    }
    let dmax = spec.max_delay();
    if dmax >= n {
        return Err(Error::DelayExceedsFrame { delay: dmax, len: n });
    }
    let mut out = vec![Complex64::new(0.0, 0.0); n + dmax];
    for (&d, &g) in spec.tap_delays.iter().zip(&spec.tap_gains) {
        for (i, &x) in frame.samples.iter().enumerate() {
            out[i + d] += g * x;
        }
    }
    Ok(frame.with_samples(out))
}

fn check_bins(h: &[Complex64], used: impl Fn(usize) -> bool) -> Result<()> {
    for (k, v) in h.iter().enumerate() {
        if used(k) && v.norm() < ZF_EPSILON {
            return Err(Error::SingularChannel {
                bin: k,
                magnitude: v.norm(),
            });
        }
    }
    Ok(())
}

/// Zero-forcing with perfect channel knowledge; returns a frame laid out like the
/// transmitted one.
///
/// When the cyclic prefix covers the delay spread each used bin of the symbol body
/// is divided by the channel response. Otherwise (wavelet-packet frames, short
/// prefixes) the whole received frame is deconvolved on a grid of
/// `len + max_delay` points.
pub fn equalize(received: &BasebandFrame, channel: &MultipathSpec, cfg: &OfdmConfig) -> Result<BasebandFrame> {
    let frame_len = cfg.frame_len();
    let dmax = channel.max_delay();
    if received.len() < frame_len {
        return Err(Error::LengthMismatch {
            expected: frame_len,
            got: received.len(),
        });
    }
    let cp = cfg.cp_len();
    if !cfg.is_wavelet() && cp >= dmax {
        let m = cfg.body_len();
        let body = &received.samples[cp..frame_len];
        let h = channel.frequency_response(m);
        let w = nyquist_weights(cfg.n_subcarriers, m, cfg.rolloff)?;
        check_bins(&h, |k| w[k] > 0.0)?;
        let y = dft(body);
        let x: Vec<Complex64> = y
            .iter()
            .zip(&h)
            .zip(&w)
            .map(|((&y, &h), &w)| if w > 0.0 { y / h } else { Complex64::new(0.0, 0.0) })
            .collect();
        let body = idft(&x);
        let mut samples = Vec::with_capacity(frame_len);
        samples.extend_from_slice(&body[m - cp..]);
        samples.extend_from_slice(&body);
        return Ok(received.with_samples(samples));
    }
    let total = frame_len + dmax;
    let mut buf = vec![Complex64::new(0.0, 0.0); total];
    let take = received.len().min(total);
    buf[..take].copy_from_slice(&received.samples[..take]);
    let h = channel.frequency_response(total);
    check_bins(&h, |_| true)?;
    let y = dft(&buf);
    let x: Vec<Complex64> = y.iter().zip(&h).map(|(&y, &h)| y / h).collect();
    let mut samples = idft(&x);
    samples.truncate(frame_len);
    Ok(received.with_samples(samples))
}
