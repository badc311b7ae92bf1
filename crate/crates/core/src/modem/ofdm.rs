use num_complex::Complex64;

use super::shaping::nyquist_weights;
use super::{BasebandFrame, FrameMeta};
use crate::error::{Error, Result};
use crate::fft::{dft, idft};
use crate::filterbank::{dwt, idwt, iwpt, wpt, SubbandSet, TreeKind, WaveletFilterPair};

/// Inverse transform that turns `N` (precoded) symbols into `N` chips.
#[derive(Debug, Clone, PartialEq)]
pub enum Transform {
    Fourier,
    WaveletPacket { pair: WaveletFilterPair, levels: u32 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Precoder {
    None,
    Dft,
    /// `levels = None` uses the wavelet-packet depth, or `log2 N` on the Fourier chain.
    Dwt {
        pair: WaveletFilterPair,
        levels: Option<u32>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OfdmConfig {
    pub n_subcarriers: usize,
    pub transform: Transform,
    pub oversampling: usize,
    /// Cyclic prefix as a fraction of the (oversampled) symbol length.
    pub cp_fraction: f64,
    pub precoder: Precoder,
    /// Square-root raised-cosine roll-off of the transmit interpolator; 0 is a brick wall.
    pub rolloff: f64,
}

impl OfdmConfig {
    pub fn fourier(n_subcarriers: usize) -> Self {
        OfdmConfig {
            n_subcarriers,
            transform: Transform::Fourier,
            oversampling: 1,
            cp_fraction: 0.0,
            precoder: Precoder::None,
            rolloff: 0.0,
        }
    }

    pub fn wavelet_packet(pair: WaveletFilterPair, levels: u32) -> Self {
        OfdmConfig {
            n_subcarriers: 1usize << levels,
            transform: Transform::WaveletPacket { pair, levels },
            oversampling: 1,
            cp_fraction: 0.0,
            precoder: Precoder::None,
            rolloff: 0.0,
        }
    }

    pub fn with_oversampling(mut self, os: usize) -> Self {
        self.oversampling = os;
        self
    }

    pub fn with_cp(mut self, fraction: f64) -> Self {
        self.cp_fraction = fraction;
        self
    }

    pub fn with_precoder(mut self, precoder: Precoder) -> Self {
        self.precoder = precoder;
        self
    }

    pub fn with_rolloff(mut self, beta: f64) -> Self {
        self.rolloff = beta;
        self
    }

    pub fn is_wavelet(&self) -> bool {
        matches!(self.transform, Transform::WaveletPacket { .. })
    }

    /// Short scheme name: `ofdm`, `sc-ofdm`, `wpm`, `sc-wpm`, with `+dwt` for the
    /// mixed combinations.
    pub fn label(&self) -> &'static str {
        match (&self.transform, &self.precoder) {
            (Transform::Fourier, Precoder::None) => "ofdm",
            (Transform::Fourier, Precoder::Dft) => "sc-ofdm",
            (Transform::Fourier, Precoder::Dwt { .. }) => "ofdm+dwt",
            (Transform::WaveletPacket { .. }, Precoder::None) => "wpm",
            (Transform::WaveletPacket { .. }, Precoder::Dwt { .. }) => "sc-wpm",
            (Transform::WaveletPacket { .. }, Precoder::Dft) => "wpm+dft",
        }
    }

    pub fn precoder_levels(&self) -> Option<u32> {
        match &self.precoder {
            Precoder::Dwt { levels: Some(l), .. } => Some(*l),
            Precoder::Dwt { levels: None, .. } => Some(match &self.transform {
                Transform::WaveletPacket { levels, .. } => *levels,
                Transform::Fourier => self.n_subcarriers.trailing_zeros(),
            }),
            _ => None,
        }
    }

    /// Samples per symbol after oversampling, before the cyclic prefix.
    pub fn body_len(&self) -> usize {
        self.n_subcarriers * self.oversampling
    }

    pub fn cp_len(&self) -> usize {
        (self.body_len() as f64 * self.cp_fraction).round() as usize
    }

    pub fn frame_len(&self) -> usize {
        self.body_len() + self.cp_len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_subcarriers;
        let bad = |m: String| Err(Error::ConfigInvariantViolated(m));
        if n == 0 || !n.is_power_of_two() {
            return bad(format!("subcarrier count {n} is not a power of two"));
        }
        if self.oversampling == 0 {
            return bad("oversampling must be >= 1".into());
        }
        if !(self.cp_fraction >= 0.0 && self.cp_fraction < 1.0) {
            return bad(format!("cp fraction {} outside [0, 1)", self.cp_fraction));
        }
        let cp = self.body_len() as f64 * self.cp_fraction;
        if (cp - cp.round()).abs() > 1e-9 {
            return bad(format!("cyclic prefix of {cp} samples is not an integer"));
        }
        if let Transform::WaveletPacket { levels, .. } = &self.transform {
            if self.cp_fraction != 0.0 {
                return bad("wavelet-packet frames carry no cyclic prefix".into());
            }
            if *levels >= usize::BITS || 1usize << levels != n {
                return bad(format!("2^{levels} != {n} subcarriers"));
            }
        }
        if let Some(l) = self.precoder_levels() {
            if l == 0 || l >= usize::BITS || n % (1usize << l) != 0 {
                return bad(format!("DWT precoder depth {l} does not divide {n}"));
            }
        }
        nyquist_weights(n, self.body_len(), self.rolloff)?;
        Ok(())
    }
}

pub fn precode(symbols: &[Complex64], cfg: &OfdmConfig) -> Result<Vec<Complex64>> {
    match &cfg.precoder {
        Precoder::None => Ok(symbols.to_vec()),
        Precoder::Dft => Ok(dft(symbols)),
        Precoder::Dwt { pair, .. } => {
            let levels = cfg.precoder_levels().unwrap_or(1);
            Ok(dwt(symbols, pair, levels)?.flatten())
        }
    }
}

pub fn unprecode(coeffs: &[Complex64], cfg: &OfdmConfig) -> Result<Vec<Complex64>> {
    match &cfg.precoder {
        Precoder::None => Ok(coeffs.to_vec()),
        Precoder::Dft => Ok(idft(coeffs)),
        Precoder::Dwt { pair, .. } => {
            let levels = cfg.precoder_levels().unwrap_or(1);
            let set = SubbandSet::from_flat(TreeKind::DwtPruned, levels, coeffs)?;
            idwt(&set, pair)
        }
    }
}

/// Subcarrier values to chips: inverse DFT, or inverse wavelet packet with one
/// coefficient per leaf.
pub fn transmit_chips(carriers: &[Complex64], cfg: &OfdmConfig) -> Result<Vec<Complex64>> {
    match &cfg.transform {
        Transform::Fourier => Ok(idft(carriers)),
        Transform::WaveletPacket { pair, levels } => {
            let set = SubbandSet::from_flat(TreeKind::WptFull, *levels, carriers)?;
            iwpt(&set, pair)
        }
    }
}

pub fn receive_chips(chips: &[Complex64], cfg: &OfdmConfig) -> Result<Vec<Complex64>> {
    match &cfg.transform {
        Transform::Fourier => Ok(dft(chips)),
        Transform::WaveletPacket { pair, levels } => Ok(wpt(chips, pair, *levels)?.flatten()),
    }
}

/// Band-limited interpolation of `n` chips onto `n·os` samples through the DFT
/// domain, weighting each bin by the square-root Nyquist response.
pub fn interpolate(chips: &[Complex64], os: usize, rolloff: f64) -> Result<Vec<Complex64>> {
    let n = chips.len();
    let m = n * os;
    let w = nyquist_weights(n, m, rolloff)?;
    if os == 1 && rolloff == 0.0 {
        return Ok(chips.to_vec());
    }
    let c = dft(chips);
    let spread: Vec<Complex64> = (0..m)
        .map(|k| if w[k] == 0.0 { Complex64::new(0.0, 0.0) } else { c[k % n] * w[k] })
        .collect();
    Ok(idft(&spread))
}

/// Adjoint of [`interpolate`]: matched filtering and folding back to `n` chips.
pub fn decimate(samples: &[Complex64], n: usize, rolloff: f64) -> Result<Vec<Complex64>> {
    let m = samples.len();
    if n == 0 || m % n != 0 {
        return Err(Error::LengthMismatch { expected: n, got: m });
    }
    let w = nyquist_weights(n, m, rolloff)?;
    if m == n && rolloff == 0.0 {
        return Ok(samples.to_vec());
    }
    let y = dft(samples);
    let mut c = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..m {
        if w[k] != 0.0 {
            c[k % n] += y[k] * w[k];
        }
    }
    Ok(idft(&c))
}

pub fn ofdm_modulate(symbols: &[Complex64], cfg: &OfdmConfig) -> Result<BasebandFrame> {
    cfg.validate()?;
    if symbols.len() != cfg.n_subcarriers {
        return Err(Error::ConfigInvariantViolated(format!(
            "{} symbols for {} subcarriers",
            symbols.len(),
            cfg.n_subcarriers
        )));
    }
    let carriers = precode(symbols, cfg)?;
    let chips = transmit_chips(&carriers, cfg)?;
    let body = interpolate(&chips, cfg.oversampling, cfg.rolloff)?;
    let cp = cfg.cp_len();
    let mut samples = Vec::with_capacity(body.len() + cp);
    samples.extend_from_slice(&body[body.len() - cp..]);
    samples.extend_from_slice(&body);
    Ok(BasebandFrame {
        samples,
        sample_rate: cfg.oversampling as f64,
        meta: FrameMeta {
            label: cfg.label(),
            symbols: cfg.n_subcarriers,
            oversampling: cfg.oversampling,
            cp_len: cp,
        },
    })
}

pub fn ofdm_demodulate(frame: &BasebandFrame, cfg: &OfdmConfig) -> Result<Vec<Complex64>> {
    cfg.validate()?;
    if frame.len() != cfg.frame_len() {
        return Err(Error::LengthMismatch {
            expected: cfg.frame_len(),
            got: frame.len(),
        });
    }
    let body = &frame.samples[cfg.cp_len()..];
    let chips = decimate(body, cfg.n_subcarriers, cfg.rolloff)?;
    let carriers = receive_chips(&chips, cfg)?;
    unprecode(&carriers, cfg)
}
