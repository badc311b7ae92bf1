use num_complex::Complex64;

use super::wsk::samples_per_period;
use super::{BasebandFrame, FrameMeta};
use crate::error::{Error, Result};
use crate::waveletdesign::SampledWaveform;

fn offsets(pulses: &[SampledWaveform]) -> Result<(f64, Vec<usize>)> {
    let dt = pulses.first().map(|p| p.dt).ok_or(Error::EmptyFrame)?;
    pulses
        .iter()
        .map(|p| {
            if (p.dt - dt).abs() > 1e-12 * dt {
                return Err(Error::GridMismatch("pulses use different sample spacings".into()));
            }
            let o = p.t0 / dt;
            if o < -1e-9 || (o - o.round()).abs() > 1e-9 {
                return Err(Error::GridMismatch(format!(
                    "pulse start {} is not a non-negative whole sample",
                    p.t0
                )));
            }
            Ok(o.round() as usize)
        })
        .collect::<Result<Vec<_>>>()
        .map(|o| (dt, o))
}

/// `Σ_m Σ_k s_m[k]·p_m(t - k·T)`: stream `m` rides on pulse `m`.
pub fn pulse_shape_dyadic(
    symbol_streams: &[Vec<Complex64>],
    pulses: &[SampledWaveform],
    symbol_period: f64,
) -> Result<BasebandFrame> {
    if symbol_streams.len() != pulses.len() {
        return Err(Error::StreamPulseCountMismatch {
            streams: symbol_streams.len(),
            pulses: pulses.len(),
        });
    }
    let (dt, offs) = offsets(pulses)?;
    let p = samples_per_period(dt, symbol_period)?;
    let len = symbol_streams
        .iter()
        .zip(pulses)
        .zip(&offs)
        .filter(|((s, _), _)| !s.is_empty())
        .map(|((s, pulse), &o)| (s.len() - 1) * p + o + pulse.len())
        .max()
        .unwrap_or(0);
    let mut samples = vec![Complex64::new(0.0, 0.0); len];
    for ((stream, pulse), &o) in symbol_streams.iter().zip(pulses).zip(&offs) {
        for (k, &s) in stream.iter().enumerate() {
            let base = k * p + o;
            for (i, &v) in pulse.samples.iter().enumerate() {
                samples[base + i] += s * v;
            }
        }
    }
    Ok(BasebandFrame {
        samples,
        sample_rate: 1.0 / dt,
        meta: FrameMeta {
            label: "dyadic",
            symbols: symbol_streams.iter().map(Vec::len).sum(),
            oversampling: p,
            cp_len: 0,
        },
    })
}

/// Per-stream correlation `∫ y(t) p_m*(t - k·T) dt` for `k < n_symbols`.
pub fn matched_filter_dyadic(
    frame: &BasebandFrame,
    pulses: &[SampledWaveform],
    symbol_period: f64,
    n_symbols: usize,
) -> Result<Vec<Vec<Complex64>>> {
    let (dt, offs) = offsets(pulses)?;
    let p = samples_per_period(dt, symbol_period)?;
    Ok(pulses
        .iter()
        .zip(&offs)
        .map(|(pulse, &o)| {
            (0..n_symbols)
                .map(|k| {
                    let base = k * p + o;
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (i, &v) in pulse.samples.iter().enumerate() {
                        if let Some(y) = frame.samples.get(base + i) {
                            acc += y * v.conj();
                        }
                    }
                    acc * dt
                })
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filterbank::{make_filter, FamilyKind};
    use crate::modem::{map_bits, ConstellationSpec};
    use crate::rng::rng_from_seed;
    use crate::waveletdesign::{cascade, dyadic_pulse_set, dyadic_translates};
    use rand::Rng;

    fn haar_mother() -> SampledWaveform {
        cascade(&make_filter(FamilyKind::Haar, 1).unwrap(), 6).unwrap().psi
    }

    fn stream(n: usize, seed: u64) -> Vec<Complex64> {
        let mut rng = rng_from_seed(seed);
        let bits: Vec<u8> = (0..2 * n).map(|_| rng.random_range(0..2u8)).collect();
        map_bits(&bits, &ConstellationSpec::QPSK).unwrap()
    }

    #[test]
    fn single_pulse_is_pam() {
        let m = haar_mother();
        let s = stream(5, 1);
        let f = pulse_shape_dyadic(&[s.clone()], &[m.clone()], 1.0).unwrap();
        assert_eq!(f.len(), 5 * 64);
        for k in 0..5 {
            for i in 0..64 {
                assert_eq!(f.samples[k * 64 + i], s[k] * m.samples[i]);
            }
        }
    }

    #[test]
    fn haar_dyadic_streams_recovered() {
        let set = dyadic_pulse_set(&haar_mother(), 1).unwrap();
        let streams = vec![stream(50, 2), stream(50, 3)];
        let f = pulse_shape_dyadic(&streams, &set, 1.0).unwrap();
        let r = matched_filter_dyadic(&f, &set, 1.0, 50).unwrap();
        for (a, b) in r.iter().zip(&streams) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn seven_translates_recovered() {
        let set = dyadic_translates(&haar_mother(), 2, 1.0).unwrap();
        let streams: Vec<Vec<Complex64>> = (0..7).map(|m| stream(20, 10 + m)).collect();
        let f = pulse_shape_dyadic(&streams, &set, 1.0).unwrap();
        let r = matched_filter_dyadic(&f, &set, 1.0, 20).unwrap();
        for (a, b) in r.iter().zip(&streams) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn counts_must_match() {
        let set = dyadic_pulse_set(&haar_mother(), 1).unwrap();
        assert!(matches!(
            pulse_shape_dyadic(&[stream(3, 1)], &set, 1.0),
            Err(Error::StreamPulseCountMismatch { streams: 1, pulses: 2 })
        ));
    }
}
