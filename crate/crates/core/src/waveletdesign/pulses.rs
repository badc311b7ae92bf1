use num_complex::Complex64;

use super::SampledWaveform;
use crate::error::{Error, Result};

const MAX_DYADICS: usize = 2;
const MIN_SAMPLES_PER_CYCLE: f64 = 4.0;

fn zero_crossings(x: &[Complex64]) -> usize {
    let mut count = 0;
    let mut last = 0.0f64;
    for v in x {
        if v.re != 0.0 {
            if last != 0.0 && (v.re > 0.0) != (last > 0.0) {
                count += 1;
            }
            last = v.re;
        }
    }
    count
}

fn normalise(mut w: SampledWaveform) -> Result<SampledWaveform> {
    let e = w.energy();
    if !(e > 0.0) {
        return Err(Error::ZeroEnergy);
    }
    let s = 1.0 / e.sqrt();
    for v in w.samples.iter_mut() {
        *v *= s;
    }
    Ok(w)
}

/// `ψ(t)`, `√2·ψ(2t)` and `2·ψ(4t)` for `n_dyadics` = 0, 1 or 2, each scaled to unit energy.
///
/// Dilations are taken by decimating the mother, so every pulse keeps the mother's
/// sample spacing.
pub fn dyadic_pulse_set(mother: &SampledWaveform, n_dyadics: usize) -> Result<Vec<SampledWaveform>> {
    if n_dyadics > MAX_DYADICS {
        return Err(Error::InvalidParameter(format!(
            "n_dyadics must be 0, 1 or 2, got {n_dyadics}"
        )));
    }
    if mother.is_empty() {
        return Err(Error::UndersampledMother("empty mother wavelet".into()));
    }
    let factor = 1usize << n_dyadics;
    let cycles = (zero_crossings(&mother.samples) as f64 + 1.0) / 2.0;
    let per_cycle = mother.len() as f64 / cycles / factor as f64;
    if per_cycle < MIN_SAMPLES_PER_CYCLE {
        return Err(Error::UndersampledMother(format!(
            "{per_cycle:.2} samples per cycle at the finest dilation"
        )));
    }

    (0..=n_dyadics)
        .map(|m| {
            let step = 1usize << m;
            let amp = (step as f64).sqrt();
            let samples: Vec<Complex64> = mother
                .samples
                .iter()
                .step_by(step)
                .map(|&v| v * amp)
                .collect();
            normalise(SampledWaveform::new(samples, mother.dt, mother.t0 / step as f64)?)
        })
        .collect()
}

/// Full dyadic frame for one symbol period: at dilation level `m` the pulse of
/// [`dyadic_pulse_set`] is repeated `2^m` times at offsets `k·period/2^m`.
///
/// Ordering is level-major, so `n_dyadics = 2` gives `1 + 2 + 4 = 7` pulses.
pub fn dyadic_translates(
    mother: &SampledWaveform,
    n_dyadics: usize,
    period: f64,
) -> Result<Vec<SampledWaveform>> {
    if !(period > 0.0 && period.is_finite()) {
        return Err(Error::InvalidParameter(format!("period must be > 0, got {period}")));
    }
    let set = dyadic_pulse_set(mother, n_dyadics)?;
    let mut out = Vec::with_capacity((1 << (n_dyadics + 1)) - 1);
    for (m, pulse) in set.iter().enumerate() {
        let count = 1usize << m;
        let hop = period / count as f64;
        for k in 0..count {
            out.push(pulse.shifted(k as f64 * hop));
        }
    }
    Ok(out)
}
