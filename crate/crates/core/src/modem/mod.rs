//! Transmitter and receiver chains.
//!
//! Multicarrier frames are built in three steps: an optional precoder (DFT or DWT,
//! turning OFDM into SC-FDMA), a size-`N` inverse transform producing `N` chips
//! (inverse DFT or inverse wavelet packet), and a frequency-domain Nyquist
//! interpolator that raises the rate by the oversampling factor. The Fourier chain
//! then prepends a cyclic prefix. Every step is unitary.

mod constellation;
mod dyadic;
mod ofdm;
mod shaping;
mod wsk;

use num_complex::Complex64;

pub use constellation::{demap_symbols, map_bits, ConstellationKind, ConstellationSpec};
pub use dyadic::{matched_filter_dyadic, pulse_shape_dyadic};
pub use ofdm::{
    decimate, interpolate, ofdm_demodulate, ofdm_modulate, precode, receive_chips,
    transmit_chips, unprecode, OfdmConfig, Precoder, Transform,
};
pub use shaping::{nyquist_weights, raised_cosine, rc_pulse, srrc_pulse};
pub use wsk::{wsk_demodulate, wsk_modulate};

/// What produced a frame and how it is laid out.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameMeta {
    pub label: &'static str,
    /// Constellation symbols carried by the frame.
    pub symbols: usize,
    pub oversampling: usize,
    /// Cyclic-prefix samples at the front of the frame.
    pub cp_len: usize,
}

/// Complex baseband samples at `sample_rate` (chips per symbol period = 1 Hz unless
/// the caller says otherwise).
#[derive(Debug, Clone, PartialEq)]
pub struct BasebandFrame {
    pub samples: Vec<Complex64>,
    pub sample_rate: f64,
    pub meta: FrameMeta,
}

impl BasebandFrame {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn mean_power(&self) -> f64 {
        if self.samples.is_empty() {
            0.0
        } else {
            self.energy() / self.samples.len() as f64
        }
    }

    pub fn with_samples(&self, samples: Vec<Complex64>) -> BasebandFrame {
        BasebandFrame {
            samples,
            sample_rate: self.sample_rate,
            meta: self.meta.clone(),
        }
    }
}
