use std::f64::consts::SQRT_2;

use super::SampledWaveform;
use crate::error::{Error, Result};
use crate::filterbank::WaveletFilterPair;

/// Scaling function and mother wavelet sampled by the cascade algorithm.
#[derive(Debug, Clone, PartialEq)]
pub struct Cascade {
    pub phi: SampledWaveform,
    pub psi: SampledWaveform,
}

fn iterate(mut c: Vec<f64>, h: &[f64], from: u32, to: u32) -> Vec<f64> {
    for j in from..to {
        let stride = 1usize << j;
        let mut next = vec![0.0; c.len() + (h.len() - 1) * stride];
        for (k, &hk) in h.iter().enumerate() {
            let s = k * stride;
            for (n, &v) in c.iter().enumerate() {
                next[n + s] += SQRT_2 * hk * v;
            }
        }
        c = next;
    }
    c
}

// unit integral on a grid of spacing 2^-level
fn normalised(mut c: Vec<f64>, level: u32) -> Result<Vec<f64>> {
    let dt = 1.0 / (1u64 << level) as f64;
    let integral: f64 = c.iter().sum::<f64>() * dt;
    if integral.abs() < 1e-12 {
        return Err(Error::Numerical("cascade produced zero-mean scaling function".into()));
    }
    for v in c.iter_mut() {
        *v /= integral;
    }
    Ok(c)
}

/// Iterates the two-scale relation `iterations` times starting from a unit impulse.
///
/// Both outputs start at `t = 0` with spacing `2^-iterations` (unit symbol period);
/// `phi` is normalised to unit integral.
pub fn cascade(pair: &WaveletFilterPair, iterations: u32) -> Result<Cascade> {
    if iterations == 0 || iterations > 20 {
        return Err(Error::InvalidParameter(format!(
            "cascade iterations must be in 1..=20, got {iterations}"
        )));
    }
    let h = pair.h();
    let g = pair.g();
    // ψ on the fine grid is g (upsampled) applied to φ one level coarser, so its
    // spectrum is an exact product of |G| and |H| factors.
    let coarse = normalised(iterate(vec![1.0], h, 0, iterations - 1), iterations - 1)?;
    let stride = 1usize << (iterations - 1);
    let mut psi = vec![0.0; coarse.len() + (g.len() - 1) * stride];
    for (k, &gk) in g.iter().enumerate() {
        for (n, &v) in coarse.iter().enumerate() {
            psi[n + k * stride] += SQRT_2 * gk * v;
        }
    }
    let c = normalised(iterate(coarse, h, iterations - 1, iterations), iterations)?;
    let dt = 1.0 / (1u64 << iterations) as f64;

    Ok(Cascade {
        phi: SampledWaveform::from_real(&c, dt, 0.0)?,
        psi: SampledWaveform::from_real(&psi, dt, 0.0)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filterbank::{FamilyKind, make_filter};

    #[test]
    fn haar_cascade_is_exact() {
        let pair = make_filter(FamilyKind::Haar, 1).unwrap();
        let c = cascade(&pair, 6).unwrap();
        assert_eq!(c.phi.len(), 64);
        assert!(c.phi.samples.iter().all(|v| (v.re - 1.0).abs() < 1e-12));
        for (i, v) in c.psi.samples.iter().enumerate() {
            let want = if i < 32 { 1.0 } else { -1.0 };
            assert!((v.re - want).abs() < 1e-12);
        }
    }

    #[test]
    fn db4_cascade_is_orthonormal() {
        let pair = make_filter(FamilyKind::Daubechies, 4).unwrap();
        let c = cascade(&pair, 10).unwrap();
        assert!((c.phi.energy() - 1.0).abs() < 1e-3, "{}", c.phi.energy());
        assert!((c.psi.energy() - 1.0).abs() < 1e-3, "{}", c.psi.energy());
        assert!(c.phi.inner(&c.psi).unwrap().norm() < 1e-3);
        assert!(c.phi.inner(&c.phi.shifted(1.0)).unwrap().norm() < 1e-3);
        let mean: f64 = c.psi.samples.iter().map(|v| v.re).sum::<f64>() * c.psi.dt;
        assert!(mean.abs() < 1e-9);
    }

    #[test]
    fn rejects_zero_iterations() {
        let pair = make_filter(FamilyKind::Haar, 1).unwrap();
        assert!(cascade(&pair, 0).is_err());
    }
}
