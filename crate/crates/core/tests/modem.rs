use proptest::prelude::*;
use rand::Rng;
use statrs::distribution::{ContinuousCDF, Normal};
use wavemod::channel::{awgn, AwgnSpec, SnrReference};
use wavemod::filterbank::{make_filter, FamilyKind};
use wavemod::modem::{
    demap_symbols, map_bits, ofdm_demodulate, ofdm_modulate, wsk_demodulate, wsk_modulate, ConstellationKind,
    ConstellationSpec, OfdmConfig, Precoder,
};
use wavemod::rng::rng_from_seed;
use wavemod::waveletdesign::cascade;

fn random_bits(n: usize, seed: u64) -> Vec<u8> {
    let mut rng = rng_from_seed(seed);
    (0..n).map(|_| rng.random_range(0..2u8)).collect()
}

fn q_function(x: f64) -> f64 {
    1.0 - Normal::standard().cdf(x)
}

fn build_config(kind: u8, log_n: u32, os: usize, precoder: u8, cp: bool, rolloff: bool) -> OfdmConfig {
    let n = 1usize << log_n;
    let pair = match kind % 3 {
        0 => None,
        1 => Some(make_filter(FamilyKind::Haar, 1).unwrap()),
        _ => Some(make_filter(FamilyKind::Daubechies, 4).unwrap()),
    };
    let mut cfg = match &pair {
        None => OfdmConfig::fourier(n).with_cp(if cp { 0.25 } else { 0.0 }),
        Some(p) => OfdmConfig::wavelet_packet(p.clone(), log_n),
    };
    cfg = cfg.with_oversampling(os);
    if rolloff && os >= 2 {
        cfg = cfg.with_rolloff(0.25);
    }
    cfg.with_precoder(match precoder % 3 {
        0 => Precoder::None,
        1 => Precoder::Dft,
        _ => Precoder::Dwt {
            pair: make_filter(FamilyKind::Symlet, 4).unwrap(),
            levels: None,
        },
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn modulation_is_unitary(
        kind in 0u8..3,
        log_n in 2u32..=9,
        os in 1usize..=4,
        precoder in 0u8..3,
        cp in any::<bool>(),
        rolloff in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let cfg = build_config(kind, log_n, os, precoder, cp, rolloff);
        prop_assume!(cfg.validate().is_ok());
        let n = cfg.n_subcarriers;
        let c = ConstellationSpec::new(ConstellationKind::Qam16);
        let sym = map_bits(&random_bits(4 * n, seed), &c).unwrap();
        let frame = ofdm_modulate(&sym, &cfg).unwrap();
        prop_assert_eq!(frame.len(), cfg.frame_len());

        let body: f64 = frame.samples[cfg.cp_len()..].iter().map(|v| v.norm_sqr()).sum();
        let e: f64 = sym.iter().map(|v| v.norm_sqr()).sum();
        prop_assert!((body - e).abs() < 1e-9 * e);

        let back = ofdm_demodulate(&frame, &cfg).unwrap();
        let err = back.iter().zip(&sym).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-9, "{err}");
        prop_assert_eq!(demap_symbols(&back, &c), random_bits(4 * n, seed));
    }

    #[test]
    fn dft_precoded_fourier_is_single_carrier(log_n in 1u32..=10, seed in any::<u64>()) {
        let n = 1usize << log_n;
        let cfg = OfdmConfig::fourier(n).with_precoder(Precoder::Dft);
        let sym = map_bits(&random_bits(2 * n, seed), &ConstellationSpec::QPSK).unwrap();
        let frame = ofdm_modulate(&sym, &cfg).unwrap();
        let err = frame.samples.iter().zip(&sym).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-9);
    }
}

#[test]
fn wsk_bits_one_and_zero_are_antipodal_copies() {
    let mother = cascade(&make_filter(FamilyKind::Haar, 1).unwrap(), 5).unwrap().psi;
    let p = mother.len();
    let frame = wsk_modulate(&[1, 0], &mother, p as f64 * mother.dt).unwrap();
    assert_eq!(frame.len(), 2 * p);
    for (i, &m) in mother.samples.iter().enumerate() {
        assert_eq!(frame.samples[i], m);
        assert_eq!(frame.samples[p + i], -m);
    }
}

#[test]
fn wsk_noiseless_roundtrip() {
    let mother = cascade(&make_filter(FamilyKind::Daubechies, 3).unwrap(), 5).unwrap().psi;
    let period = mother.len() as f64 * mother.dt;
    let bits = random_bits(10_000, 17);
    let frame = wsk_modulate(&bits, &mother, period).unwrap();
    assert_eq!(wsk_demodulate(&frame, &mother, period).unwrap(), bits);
}

#[test]
fn wsk_awgn_matches_antipodal_theory() {
    let mother = cascade(&make_filter(FamilyKind::Daubechies, 3).unwrap(), 4).unwrap().psi;
    let p = mother.len();
    let period = p as f64 * mother.dt;
    let n_bits = 100_000;
    let bits = random_bits(n_bits, 2024);
    let frame = wsk_modulate(&bits, &mother, period).unwrap();
    let spec = AwgnSpec::new(
        4.0,
        SnrReference::EbN0 {
            samples_per_symbol: p as f64,
            bits_per_symbol: 1,
        },
        99,
    )
    .unwrap();
    let rx = wsk_demodulate(&awgn(&frame, &spec).unwrap(), &mother, period).unwrap();
    let errors = bits.iter().zip(&rx).filter(|(a, b)| a != b).count() as f64;
    let ber = errors / n_bits as f64;
    let theory = q_function((2.0 * 10f64.powf(0.4)).sqrt());
    let sigma = (theory * (1.0 - theory) / n_bits as f64).sqrt();
    assert!((theory - 1.25e-2).abs() < 1e-4, "{theory}");
    assert!((ber - theory).abs() < 3.0 * sigma, "ber {ber} vs {theory} (sigma {sigma})");
}

#[test]
fn haar_level_nine_packet_roundtrip() {
    let cfg = OfdmConfig::wavelet_packet(make_filter(FamilyKind::Haar, 1).unwrap(), 9);
    let bits = random_bits(1024, 5);
    let sym = map_bits(&bits, &ConstellationSpec::QPSK).unwrap();
    let frame = ofdm_modulate(&sym, &cfg).unwrap();
    assert_eq!(frame.len(), 512);
    let back = ofdm_demodulate(&frame, &cfg).unwrap();
    assert_eq!(demap_symbols(&back, &ConstellationSpec::QPSK), bits);
    assert!(back.iter().zip(&sym).all(|(a, b)| (a - b).norm() < 1e-9));
}
