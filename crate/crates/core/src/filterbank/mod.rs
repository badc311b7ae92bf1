//! Orthogonal two-channel filter banks.
//!
//! Conventions used throughout:
//!
//! - `h` is the lowpass (scaling) filter and drives the approximation `a[k]`;
//!   `g` is the highpass (wavelet) filter and drives the detail `d[k]`.
//! - `g[n] = (-1)^n h[L-1-n]`, so `Σh = √2`, `Σg = 0` and `Σh² = 1`.
//! - Frames are finite and periodically extended, which keeps every stage an
//!   orthogonal matrix (Parseval holds exactly, roundtrips have zero delay).

mod coeffs;
mod transform;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use transform::{
    analysis_step, dwt, idwt, iwpt, synthesis_step, wpt, Sample, SubbandSet, TreeKind,
};

/// Tolerance for the sum/energy invariants of a filter pair.
pub const INVARIANT_TOL: f64 = 1e-10;

/// Wavelet family tag carried by a filter pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum WaveletFamily {
    Haar,
    Daubechies(usize),
    Symlet(usize),
    Coiflet(usize),
    Custom(String),
}

/// Family selector for [`make_filter`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Haar,
    Daubechies,
    Symlet,
    Coiflet,
}

impl fmt::Display for WaveletFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WaveletFamily::Haar => write!(f, "haar"),
            WaveletFamily::Daubechies(n) => write!(f, "db{n}"),
            WaveletFamily::Symlet(n) => write!(f, "sym{n}"),
            WaveletFamily::Coiflet(n) => write!(f, "coif{n}"),
            WaveletFamily::Custom(name) => write!(f, "{name}"),
        }
    }
}

impl FromStr for WaveletFamily {
    type Err = Error;

    /// Parses `haar`, `dbN`, `symN` and `coifN`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let parse_order = |digits: &str| {
            digits
                .parse::<usize>()
                .map_err(|_| Error::UnsupportedFamily(s.clone()))
        };
        if s == "haar" {
            Ok(WaveletFamily::Haar)
        } else if let Some(d) = s.strip_prefix("coif") {
            Ok(WaveletFamily::Coiflet(parse_order(d)?))
        } else if let Some(d) = s.strip_prefix("sym") {
            Ok(WaveletFamily::Symlet(parse_order(d)?))
        } else if let Some(d) = s.strip_prefix("db") {
            Ok(WaveletFamily::Daubechies(parse_order(d)?))
        } else {
            Err(Error::UnsupportedFamily(s))
        }
    }
}

impl WaveletFamily {
    /// Builds the shipped filter pair for this family.
    pub fn filter(&self) -> Result<WaveletFilterPair> {
        match self {
            WaveletFamily::Haar => make_filter(FamilyKind::Haar, 1),
            WaveletFamily::Daubechies(n) => make_filter(FamilyKind::Daubechies, *n),
            WaveletFamily::Symlet(n) => make_filter(FamilyKind::Symlet, *n),
            WaveletFamily::Coiflet(n) => make_filter(FamilyKind::Coiflet, *n),
            WaveletFamily::Custom(name) => Err(Error::UnsupportedFamily(name.clone())),
        }
    }

    /// Every family/order combination with embedded coefficients.
    pub fn supported() -> Vec<WaveletFamily> {
        let mut all = vec![WaveletFamily::Haar];
        all.extend((2..=20).map(WaveletFamily::Daubechies));
        all.extend((2..=10).map(WaveletFamily::Symlet));
        all.extend((1..=5).map(WaveletFamily::Coiflet));
        all
    }
}

/// Lowpass/highpass analysis pair of an orthogonal two-channel bank.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletFilterPair {
    h: Vec<f64>,
    g: Vec<f64>,
    family: WaveletFamily,
}

impl WaveletFilterPair {
    /// Builds a pair from its lowpass filter, deriving `g[n] = (-1)^n h[L-1-n]`
    /// and checking the sum and energy invariants.
    pub fn from_lowpass(h: Vec<f64>, family: WaveletFamily) -> Result<Self> {
        let g = quadrature_mirror(&h);
        let pair = WaveletFilterPair { h, g, family };
        pair.check_invariants()?;
        Ok(pair)
    }

    /// Builds a pair without any validation. Used to probe [`verify_pr`] with
    /// deliberately broken banks.
    pub fn from_taps_unchecked(h: Vec<f64>, g: Vec<f64>, family: WaveletFamily) -> Self {
        WaveletFilterPair { h, g, family }
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn g(&self) -> &[f64] {
        &self.g
    }

    pub fn family(&self) -> &WaveletFamily {
        &self.family
    }

    /// Filter length `L`.
    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    /// Checks even length, the alternating-sign relation, `Σh = √2`, `Σg = 0`
    /// and `Σh² = 1`.
    pub fn check_invariants(&self) -> Result<()> {
        let l = self.h.len();
        if l == 0 || l % 2 != 0 || self.g.len() != l {
            return Err(Error::InvalidFilter(format!(
                "lengths h={} g={} must be equal and even",
                l,
                self.g.len()
            )));
        }
        for n in 0..l {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            if (self.h[l - 1 - n] - sign * self.g[n]).abs() > INVARIANT_TOL {
                return Err(Error::InvalidFilter(format!(
                    "alternating-sign relation fails at n={n}"
                )));
            }
        }
        let sum_h: f64 = self.h.iter().sum();
        let sum_g: f64 = self.g.iter().sum();
        let energy: f64 = self.h.iter().map(|v| v * v).sum();
        if (sum_h - std::f64::consts::SQRT_2).abs() > INVARIANT_TOL {
            return Err(Error::InvalidFilter(format!("sum(h) = {sum_h}")));
        }
        if sum_g.abs() > INVARIANT_TOL {
            return Err(Error::InvalidFilter(format!("sum(g) = {sum_g}")));
        }
        if (energy - 1.0).abs() > INVARIANT_TOL {
            return Err(Error::InvalidFilter(format!("sum(h^2) = {energy}")));
        }
        Ok(())
    }
}

fn quadrature_mirror(h: &[f64]) -> Vec<f64> {
    let l = h.len();
    (0..l)
        .map(|n| {
            let v = h[l - 1 - n];
            if n % 2 == 0 {
                v
            } else {
                -v
            }
        })
        .collect()
}

/// Returns the embedded filter pair for a family/order combination.
///
/// Supported: Haar (order 1), Daubechies 2..=20, Symlet 2..=10, Coiflet 1..=5.
pub fn make_filter(kind: FamilyKind, order: usize) -> Result<WaveletFilterPair> {
    let (family, taps) = match kind {
        FamilyKind::Haar if order == 1 => (WaveletFamily::Haar, Some(&coeffs::HAAR[..])),
        FamilyKind::Haar => (WaveletFamily::Haar, None),
        FamilyKind::Daubechies => (WaveletFamily::Daubechies(order), coeffs::daubechies(order)),
        FamilyKind::Symlet => (WaveletFamily::Symlet(order), coeffs::symlet(order)),
        FamilyKind::Coiflet => (WaveletFamily::Coiflet(order), coeffs::coiflet(order)),
    };
    let taps = taps.ok_or_else(|| Error::UnsupportedFamily(format!("{kind:?}({order})")))?;
    WaveletFilterPair::from_lowpass(taps.to_vec(), family)
}

/// Maximum deviations of the two perfect-reconstruction conditions on the unit circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrResiduals {
    /// `max |G0(-z)G1(z) + H0(-z)H1(z)|`
    pub alias: f64,
    /// `max |G0(z)G1(z) + H0(z)H1(z) - 2 z^{-(L-1)}|`
    pub amplitude: f64,
}

/// Evaluates the aliasing-free and unit-amplitude conditions on `grid_size`
/// equispaced points of the unit circle (at least `2L` points are always used).
///
/// Synthesis filters are the time-reversed analysis filters, `H1(z) = z^{-(L-1)} H0(z^{-1})`,
/// so the distortion term is `2 z^{-(L-1)}`.
pub fn verify_pr(pair: &WaveletFilterPair, grid_size: usize) -> PrResiduals {
    let l = pair.len().max(pair.g.len());
    let m = grid_size.max(2 * l).max(2);
    let h_rev: Vec<f64> = pair.h.iter().rev().copied().collect();
    let g_rev: Vec<f64> = pair.g.iter().rev().copied().collect();
    let delay = l.saturating_sub(1) as f64;
    let mut alias: f64 = 0.0;
    let mut amplitude: f64 = 0.0;
    for k in 0..m {
        let w = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
        let z = Complex64::from_polar(1.0, w);
        let h0 = poly_inv(&pair.h, z);
        let g0 = poly_inv(&pair.g, z);
        let h0m = poly_inv(&pair.h, -z);
        let g0m = poly_inv(&pair.g, -z);
        let h1 = poly_inv(&h_rev, z);
        let g1 = poly_inv(&g_rev, z);
        let a = g0m * g1 + h0m * h1;
        let d = g0 * g1 + h0 * h1 - 2.0 * Complex64::from_polar(1.0, -w * delay);
        alias = alias.max(a.norm());
        amplitude = amplitude.max(d.norm());
    }
    PrResiduals { alias, amplitude }
}

/// `Σ c[n] z^{-n}` by Horner's rule in `z^{-1}`.
fn poly_inv(c: &[f64], z: Complex64) -> Complex64 {
    let zi = z.inv();
    c.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &v| acc * zi + v)
}
