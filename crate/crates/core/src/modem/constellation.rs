use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstellationKind {
    Bpsk,
    Qpsk,
    Qam16,
}

/// Gray-mapped, unit-average-energy constellation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConstellationSpec {
    pub kind: ConstellationKind,
}

impl ConstellationSpec {
    pub const BPSK: ConstellationSpec = ConstellationSpec {
        kind: ConstellationKind::Bpsk,
    };
    pub const QPSK: ConstellationSpec = ConstellationSpec {
        kind: ConstellationKind::Qpsk,
    };
    pub const QAM16: ConstellationSpec = ConstellationSpec {
        kind: ConstellationKind::Qam16,
    };

    pub fn new(kind: ConstellationKind) -> Self {
        ConstellationSpec { kind }
    }

    pub fn bits_per_symbol(&self) -> usize {
        match self.kind {
            ConstellationKind::Bpsk => 1,
            ConstellationKind::Qpsk => 2,
            ConstellationKind::Qam16 => 4,
        }
    }

    pub fn is_gray(&self) -> bool {
        true
    }

    /// Every point, indexed by the integer whose bits (first bit most significant)
    /// map to it.
    pub fn alphabet(&self) -> Vec<Complex64> {
        let k = self.bits_per_symbol();
        (0..1usize << k)
            .map(|v| {
                let bits: Vec<u8> = (0..k).map(|i| ((v >> (k - 1 - i)) & 1) as u8).collect();
                map_one(&bits, self.kind)
            })
            .collect()
    }
}

impl fmt::Display for ConstellationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstellationKind::Bpsk => "bpsk",
            ConstellationKind::Qpsk => "qpsk",
            ConstellationKind::Qam16 => "qam16",
        })
    }
}

impl FromStr for ConstellationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bpsk" => Ok(ConstellationKind::Bpsk),
            "qpsk" => Ok(ConstellationKind::Qpsk),
            "qam16" | "16qam" | "16-qam" => Ok(ConstellationKind::Qam16),
            other => Err(Error::Config(format!("unknown constellation '{other}'"))),
        }
    }
}

fn pm(b: u8) -> f64 {
    1.0 - 2.0 * f64::from(b & 1)
}

fn map_one(b: &[u8], kind: ConstellationKind) -> Complex64 {
    match kind {
        ConstellationKind::Bpsk => Complex64::new(pm(b[0]), 0.0),
        ConstellationKind::Qpsk => {
            Complex64::new(pm(b[0]), pm(b[1])) * std::f64::consts::FRAC_1_SQRT_2
        }
        ConstellationKind::Qam16 => {
            let s = 1.0 / 10f64.sqrt();
            let i = pm(b[0]) * (1.0 + 2.0 * f64::from(b[2] & 1));
            let q = pm(b[1]) * (1.0 + 2.0 * f64::from(b[3] & 1));
            Complex64::new(i * s, q * s)
        }
    }
}

/// Maps bits (values 0/1) to symbols, `bits_per_symbol` bits at a time.
pub fn map_bits(bits: &[u8], c: &ConstellationSpec) -> Result<Vec<Complex64>> {
    let k = c.bits_per_symbol();
    if bits.len() % k != 0 {
        return Err(Error::BitCountMismatch {
            bits: bits.len(),
            per_symbol: k,
        });
    }
    Ok(bits.chunks(k).map(|b| map_one(b, c.kind)).collect())
}

// 16-QAM axis levels ±1, ±3 (scaled); returns (sign bit, magnitude bit).
fn slice_qam_axis(v: f64) -> (u8, u8) {
    let sign = u8::from(v < 0.0);
    let mag = u8::from(v.abs() > 2.0 / 10f64.sqrt());
    (sign, mag)
}

/// Hard minimum-distance decisions.
pub fn demap_symbols(symbols: &[Complex64], c: &ConstellationSpec) -> Vec<u8> {
    let mut out = Vec::with_capacity(symbols.len() * c.bits_per_symbol());
    for s in symbols {
        match c.kind {
            ConstellationKind::Bpsk => out.push(u8::from(s.re < 0.0)),
            ConstellationKind::Qpsk => {
                out.push(u8::from(s.re < 0.0));
                out.push(u8::from(s.im < 0.0));
            }
            ConstellationKind::Qam16 => {
                let (b0, b2) = slice_qam_axis(s.re);
                let (b1, b3) = slice_qam_axis(s.im);
                out.extend_from_slice(&[b0, b1, b2, b3]);
            }
        }
    }
    out
}
