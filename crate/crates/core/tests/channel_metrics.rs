use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use wavemod::channel::{apply_multipath, awgn, AwgnSpec, MultipathSpec, SnrReference};
use wavemod::metrics::{
    evm, papr_ccdf, papr_db, psd, BerCounter, CcdfCurve, EvmInput, PsdMethod, Window,
};
use wavemod::modem::{map_bits, ofdm_modulate, BasebandFrame, ConstellationSpec, FrameMeta, OfdmConfig};
use wavemod::rng::rng_from_seed;

fn frame(samples: Vec<Complex64>) -> BasebandFrame {
    BasebandFrame {
        samples,
        sample_rate: 1.0,
        meta: FrameMeta {
            label: "test",
            symbols: 0,
            oversampling: 1,
            cp_len: 0,
        },
    }
}

fn gaussian(n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = rng_from_seed(seed);
    (0..n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multipath_is_linear(
        seed in any::<u64>(),
        len in 16usize..256,
        a_re in -2.0f64..2.0,
        a_im in -2.0f64..2.0,
        b_re in -2.0f64..2.0,
    ) {
        let ch = MultipathSpec::default_ten_path(seed);
        let x = gaussian(len, seed ^ 1);
        let y = gaussian(len, seed ^ 2);
        let a = Complex64::new(a_re, a_im);
        let b = Complex64::new(b_re, 0.0);
        let mix: Vec<Complex64> = x.iter().zip(&y).map(|(p, q)| a * p + b * q).collect();
        let lhs = apply_multipath(&frame(mix), &ch).unwrap();
        let cx = apply_multipath(&frame(x), &ch).unwrap();
        let cy = apply_multipath(&frame(y), &ch).unwrap();
        for i in 0..lhs.len() {
            let rhs = a * cx.samples[i] + b * cy.samples[i];
            prop_assert!((lhs.samples[i] - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn evm_is_rotation_invariant(seed in any::<u64>(), theta in -3.2f64..3.2, n in 1usize..200) {
        let mut rng = rng_from_seed(seed);
        let bits: Vec<u8> = (0..2 * n).map(|_| rng.random_range(0..2u8)).collect();
        let d = map_bits(&bits, &ConstellationSpec::QPSK).unwrap();
        let noise = gaussian(n, seed ^ 7);
        let r: Vec<Complex64> = d.iter().zip(&noise).map(|(s, e)| s + 0.1 * e).collect();
        let rot = Complex64::from_polar(1.0, theta);
        let base = evm(&EvmInput::new(r.clone(), d.clone()).unwrap());
        let turned = evm(&EvmInput::new(
            r.iter().map(|v| v * rot).collect(),
            d.iter().map(|v| v * rot).collect(),
        ).unwrap());
        prop_assert!((base - turned).abs() < 1e-12 * base.max(1.0));
    }

    #[test]
    fn ccdf_is_monotone_and_bounded(seed in any::<u64>(), log_n in 3u32..=7) {
        let n = 1usize << log_n;
        let th: Vec<f64> = (0..=60).map(|i| -1.0 + 0.5 * i as f64).collect();
        let c = papr_ccdf(&OfdmConfig::fourier(n), &ConstellationSpec::QPSK, 200, &th, seed).unwrap();
        prop_assert!(c.probabilities.windows(2).all(|w| w[1] <= w[0]));
        let bound = 10.0 * (n as f64).log10();
        for (t, p) in th.iter().zip(&c.probabilities) {
            if *t < 0.0 {
                prop_assert_eq!(*p, 1.0);
            }
            if *t >= bound {
                prop_assert_eq!(*p, 0.0);
            }
        }
    }

    #[test]
    fn papr_lies_between_zero_and_the_coherent_bound(seed in any::<u64>(), log_n in 1u32..=9) {
        let n = 1usize << log_n;
        let mut rng = rng_from_seed(seed);
        let bits: Vec<u8> = (0..2 * n).map(|_| rng.random_range(0..2u8)).collect();
        let f = ofdm_modulate(&map_bits(&bits, &ConstellationSpec::QPSK).unwrap(), &OfdmConfig::fourier(n)).unwrap();
        let p = papr_db(&f).unwrap();
        prop_assert!(p >= 0.0);
        prop_assert!(p <= 10.0 * (n as f64).log10() + 1e-9);
    }

    #[test]
    fn counter_merge_is_associative_and_commutative(
        a in (0u64..1000, 1000u64..2000),
        b in (0u64..1000, 1000u64..2000),
        c in (0u64..1000, 1000u64..2000),
    ) {
        let [a, b, c] = [a, b, c].map(|(errors, bits)| BerCounter { errors, bits });
        prop_assert_eq!(a.merge(b).merge(c), a.merge(b.merge(c)));
        prop_assert_eq!(a.merge(b), b.merge(a));
    }

    #[test]
    fn ccdf_merge_equals_single_pass(split in 1usize..99, seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let xs: Vec<f64> = (0..100).map(|_| rng.random_range(0.0..12.0)).collect();
        let th: Vec<f64> = (0..24).map(|i| 0.5 * i as f64).collect();
        let whole = CcdfCurve::from_samples(&th, &xs).unwrap();
        let mut parts = CcdfCurve::from_samples(&th, &xs[split..]).unwrap();
        parts.merge(&CcdfCurve::from_samples(&th, &xs[..split]).unwrap()).unwrap();
        prop_assert_eq!(parts, whole);
    }
}

#[test]
fn awgn_mean_and_variance_match_the_target() {
    let n = 1_000_000;
    let f = frame(vec![Complex64::new(0.0, 1.0); n]);
    let spec = AwgnSpec::new(10.0, SnrReference::EsN0 { samples_per_symbol: 1.0 }, 11).unwrap();
    let y = awgn(&f, &spec).unwrap();
    let e: Vec<Complex64> = y.samples.iter().zip(&f.samples).map(|(a, b)| a - b).collect();
    let mean = e.iter().sum::<Complex64>() / n as f64;
    let var = e.iter().map(|v| v.norm_sqr()).sum::<f64>() / n as f64;
    assert!((var - 0.1).abs() < 0.001, "{var}");
    let sd_mean = (0.1f64 / 2.0 / n as f64).sqrt();
    assert!(mean.re.abs() < 3.0 * sd_mean && mean.im.abs() < 3.0 * sd_mean, "{mean}");
}

#[test]
fn welch_estimates_of_shifted_frames_agree() {
    let x = gaussian(1 << 14, 3);
    let mut shifted = x.clone();
    shifted.rotate_left(777);
    let m = PsdMethod::Welch {
        segment: 256,
        overlap: 128,
        window: Window::Hann,
    };
    let a = psd(&frame(x), m).unwrap();
    let b = psd(&frame(shifted), m).unwrap();
    // 127 averaged segments: each bin has a relative standard deviation near 1/√127
    let worst = a
        .density
        .iter()
        .zip(&b.density)
        .map(|(p, q)| (p / q).log10().abs() * 10.0)
        .fold(0.0, f64::max);
    assert!(worst < 3.0, "{worst} dB");
    assert!((a.total_power() / b.total_power() - 1.0).abs() < 0.02);
}
