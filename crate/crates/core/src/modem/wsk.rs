use num_complex::Complex64;

use super::{BasebandFrame, FrameMeta};
use crate::error::{Error, Result};
use crate::waveletdesign::SampledWaveform;

pub(super) fn samples_per_period(dt: f64, period: f64) -> Result<usize> {
    if !(period > 0.0 && period.is_finite()) {
        return Err(Error::InvalidParameter(format!("symbol period {period}")));
    }
    let p = period / dt;
    if (p - p.round()).abs() > 1e-9 * p.max(1.0) {
        return Err(Error::GridMismatch(format!(
            "symbol period is {p} samples, expected an integer"
        )));
    }
    Ok(p.round() as usize)
}

/// Antipodal wavelet shift keying: bit `b` sends `(2b - 1)·ψ` in its own slot.
pub fn wsk_modulate(bits: &[u8], mother: &SampledWaveform, symbol_period: f64) -> Result<BasebandFrame> {
    let p = samples_per_period(mother.dt, symbol_period)?;
    if p < mother.len() {
        return Err(Error::PeriodTooShort {
            period: symbol_period,
            support: mother.len() as f64 * mother.dt,
        });
    }
    let mut samples = vec![Complex64::new(0.0, 0.0); bits.len() * p];
    for (k, &b) in bits.iter().enumerate() {
        let sign = if b & 1 == 1 { 1.0 } else { -1.0 };
        for (i, &v) in mother.samples.iter().enumerate() {
            samples[k * p + i] = v * sign;
        }
    }
    Ok(BasebandFrame {
        samples,
        sample_rate: 1.0 / mother.dt,
        meta: FrameMeta {
            label: "wsk",
            symbols: bits.len(),
            oversampling: p,
            cp_len: 0,
        },
    })
}

/// Matched-filter correlation per slot followed by a sign decision.
pub fn wsk_demodulate(frame: &BasebandFrame, mother: &SampledWaveform, symbol_period: f64) -> Result<Vec<u8>> {
    let p = samples_per_period(mother.dt, symbol_period)?;
    if p < mother.len() {
        return Err(Error::PeriodTooShort {
            period: symbol_period,
            support: mother.len() as f64 * mother.dt,
        });
    }
    if frame.len() % p != 0 {
        return Err(Error::LengthMismatch {
            expected: (frame.len() / p + 1) * p,
            got: frame.len(),
        });
    }
    Ok(frame
        .samples
        .chunks(p)
        .map(|slot| {
            let corr: f64 = slot
                .iter()
                .zip(&mother.samples)
                .map(|(y, m)| (y * m.conj()).re)
                .sum();
            u8::from(corr > 0.0)
        })
        .collect())
}
