//! Wavelet-based single-carrier and multicarrier modulation.
//!
//! The crate is organised bottom-up:
//!
//! - [`filterbank`]: orthogonal two-channel banks, DWT and full wavelet-packet trees.
//! - [`waveletdesign`]: the modified-Gaussian scaling function, cascade sampling of
//!   wavelets and dyadic pulse sets.
//! - [`modem`]: constellations, Fourier / wavelet-packet OFDM with optional DFT or DWT
//!   precoding (SC-FDMA), wavelet shift keying and dyadic pulse shaping.
//! - [`channel`]: AWGN, static multipath and perfect-CSI equalisation.
//! - [`metrics`]: PAPR and its CCDF, EVM, BER, PSD, occupied bandwidth.
//! - [`experiment`]: declarative experiment configs, runners and CSV result tables.

pub mod channel;
pub mod error;
pub mod experiment;
pub mod filterbank;
pub mod metrics;
pub mod modem;
pub mod waveletdesign;

mod fft;
pub mod rng;

pub use error::{Error, Result};
pub use num_complex::Complex64;
