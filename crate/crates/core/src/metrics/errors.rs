use num_complex::Complex64;

use crate::error::{Error, Result};

/// Received symbols paired with the symbols that were sent.
#[derive(Debug, Clone, PartialEq)]
pub struct EvmInput {
    received: Vec<Complex64>,
    reference: Vec<Complex64>,
}

impl EvmInput {
    pub fn new(received: Vec<Complex64>, reference: Vec<Complex64>) -> Result<Self> {
        if received.len() != reference.len() {
            return Err(Error::LengthMismatch {
                expected: reference.len(),
                got: received.len(),
            });
        }
        if reference.is_empty() {
            return Err(Error::EmptyFrame);
        }
        if let Some(i) = reference.iter().position(|d| d.norm_sqr() == 0.0) {
            return Err(Error::ZeroReferenceSymbol(i));
        }
        Ok(EvmInput { received, reference })
    }

    pub fn len(&self) -> usize {
        self.reference.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reference.is_empty()
    }
}

/// Mean of per-symbol error-to-reference power ratios, `(1/L)·Σ|d̂ - d|²/|d|²`.
///
/// This is a linear power ratio: no square root and no dB scaling.
pub fn evm(input: &EvmInput) -> f64 {
    let sum: f64 = input
        .received
        .iter()
        .zip(&input.reference)
        .map(|(r, d)| (r - d).norm_sqr() / d.norm_sqr())
        .sum();
    sum / input.len() as f64
}

pub fn ber(tx_bits: &[u8], rx_bits: &[u8]) -> Result<f64> {
    let c = BerCounter::count(tx_bits, rx_bits)?;
    if c.bits == 0 {
        return Err(Error::EmptyFrame);
    }
    Ok(c.rate())
}

/// Running error count; merging is plain addition.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BerCounter {
    pub errors: u64,
    pub bits: u64,
}

impl BerCounter {
    pub fn count(tx_bits: &[u8], rx_bits: &[u8]) -> Result<Self> {
        if tx_bits.len() != rx_bits.len() {
            return Err(Error::LengthMismatch {
                expected: tx_bits.len(),
                got: rx_bits.len(),
            });
        }
        let errors = tx_bits
            .iter()
            .zip(rx_bits)
            .filter(|(a, b)| (*a & 1) != (*b & 1))
            .count() as u64;
        Ok(BerCounter {
            errors,
            bits: tx_bits.len() as u64,
        })
    }

    pub fn merge(self, other: BerCounter) -> BerCounter {
        BerCounter {
            errors: self.errors + other.errors,
            bits: self.bits + other.bits,
        }
    }

    pub fn rate(&self) -> f64 {
        if self.bits == 0 {
            0.0
        } else {
            self.errors as f64 / self.bits as f64
        }
    }

    /// Binomial standard deviation of the rate estimate around `p`.
    pub fn std_error(&self, p: f64) -> f64 {
        if self.bits == 0 {
            0.0
        } else {
            (p * (1.0 - p) / self.bits as f64).sqrt()
        }
    }

    /// Wilson score interval at `z` standard deviations.
    pub fn wilson_interval(&self, z: f64) -> (f64, f64) {
        if self.bits == 0 {
            return (0.0, 1.0);
        }
        let n = self.bits as f64;
        let p = self.rate();
        let z2 = z * z;
        let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
        let half = z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
        // the closed form is exactly 0 / 1 at the edges; rounding is not
        let lo = if self.errors == 0 { 0.0 } else { (centre - half).max(0.0) };
        let hi = if self.errors == self.bits { 1.0 } else { (centre + half).min(1.0) };
        (lo, hi)
    }
}
