use super::SpectrumSamples;
use crate::error::{Error, Result};

// Relative rise below which neighbouring samples count as equal (rounding noise).
const RISE_TOL: f64 = 1e-12;

const HALF_POWER: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn rises(from: f64, to: f64) -> bool {
    to > from * (1.0 + RISE_TOL) && to > 0.0
}

/// Highest sidelobe relative to the peak, in dB of power.
///
/// `values` are magnitudes. The main lobe runs from the peak out to the first local
/// minimum on each side that lies at least 3 dB below the peak, so passband ripple of
/// flat-topped spectra stays inside it; the result is `10·log10` of the power ratio between the
/// largest local maximum beyond those minima and the peak. Returns `-∞` when nothing
/// rises again outside the main lobe.
pub fn sidelobe_level(spec: &SpectrumSamples) -> Result<f64> {
    let v: Vec<f64> = spec.values.iter().map(|x| x.abs()).collect();
    if v.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    let (peak_idx, peak) = v
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, x)| if x > acc.1 { (i, x) } else { acc });
    if !(peak > 0.0) {
        return Err(Error::EmptySpectrum);
    }

    let edge = peak * HALF_POWER;
    let mut right = peak_idx;
    while right + 1 < v.len() && (v[right] > edge || !rises(v[right], v[right + 1])) {
        right += 1;
    }
    let mut left = peak_idx;
    while left > 0 && (v[left] > edge || !rises(v[left], v[left - 1])) {
        left -= 1;
    }

    let mut best = 0.0f64;
    // a local maximum on the right is where a rise is followed by a non-rise
    let mut i = right + 1;
    while i < v.len() {
        if rises(v[i - 1], v[i]) && (i + 1 == v.len() || !rises(v[i], v[i + 1])) {
            best = best.max(v[i]);
        }
        i += 1;
    }
    let mut i = left as i64 - 1;
    while i >= 0 {
        let k = i as usize;
        if rises(v[k + 1], v[k]) && (k == 0 || !rises(v[k], v[k - 1])) {
            best = best.max(v[k]);
        }
        i -= 1;
    }
    if best == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(10.0 * (best * best / (peak * peak)).log10())
}
