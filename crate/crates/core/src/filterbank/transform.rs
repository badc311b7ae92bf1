use std::fmt::Debug;
use std::ops::{Add, AddAssign, Mul};

use num_complex::Complex64;
use num_traits::Zero;

use super::WaveletFilterPair;
use crate::error::{Error, Result};

/// Scalar type a filter bank can run on (real or complex baseband samples).
pub trait Sample:
    Copy + Debug + Zero + Add<Output = Self> + AddAssign + Mul<f64, Output = Self> + Send + Sync
{
    fn energy(self) -> f64;
}

impl Sample for f64 {
    fn energy(self) -> f64 {
        self * self
    }
}

impl Sample for Complex64 {
    fn energy(self) -> f64 {
        self.norm_sqr()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeKind {
    /// Only the approximation branch is recursed: `J + 1` bands.
    DwtPruned,
    /// Both branches are recursed: `2^J` equal-length bands.
    WptFull,
}

/// Subband coefficients of a multi-level decomposition.
///
/// DWT bands are ordered `[a_J, d_J, d_{J-1}, ..., d_1]`; WPT bands are in
/// natural (tree) order, low branch before high branch at every node.
#[derive(Debug, Clone, PartialEq)]
pub struct SubbandSet<T> {
    pub bands: Vec<Vec<T>>,
    pub tree_kind: TreeKind,
    pub levels: u32,
    pub original_length: usize,
}

impl<T: Sample> SubbandSet<T> {
    /// Concatenates the bands in order.
    pub fn flatten(&self) -> Vec<T> {
        self.bands.iter().flatten().copied().collect()
    }

    /// Splits a flat coefficient vector back into the band layout of a
    /// `levels`-deep tree of the given kind.
    pub fn from_flat(tree_kind: TreeKind, levels: u32, data: &[T]) -> Result<Self> {
        let n = data.len();
        check_divisible(n, levels)?;
        let bands = match tree_kind {
            TreeKind::WptFull => {
                let width = n >> levels;
                data.chunks(width.max(1)).map(|c| c.to_vec()).collect()
            }
            TreeKind::DwtPruned => {
                let mut bands = Vec::with_capacity(levels as usize + 1);
                let mut start = 0;
                let coarse = n >> levels;
                bands.push(data[..coarse].to_vec());
                start += coarse;
                for j in (1..=levels).rev() {
                    let width = n >> j;
                    bands.push(data[start..start + width].to_vec());
                    start += width;
                }
                bands
            }
        };
        Ok(SubbandSet {
            bands,
            tree_kind,
            levels,
            original_length: n,
        })
    }

    pub fn energy(&self) -> f64 {
        self.bands.iter().flatten().map(|v| v.energy()).sum()
    }

    pub fn coefficient_count(&self) -> usize {
        self.bands.iter().map(Vec::len).sum()
    }
}

fn check_divisible(len: usize, levels: u32) -> Result<()> {
    if levels == 0 || levels >= usize::BITS || len == 0 || len % (1usize << levels) != 0 {
        return Err(Error::BadLength { len, levels });
    }
    Ok(())
}

/// One analysis stage with periodic extension:
/// `a[k] = Σ_n h[n-2k] x[n]`, `d[k] = Σ_n g[n-2k] x[n]`.
pub fn analysis_step<T: Sample>(x: &[T], pair: &WaveletFilterPair) -> Result<(Vec<T>, Vec<T>)> {
    let n = x.len();
    if n % 2 != 0 {
        return Err(Error::OddLength(n));
    }
    let half = n / 2;
    let (h, g) = (pair.h(), pair.g());
    let mut a = vec![T::zero(); half];
    let mut d = vec![T::zero(); half];
    for k in 0..half {
        let mut acc_a = T::zero();
        let mut acc_d = T::zero();
        let base = 2 * k;
        for (m, (&hm, &gm)) in h.iter().zip(g).enumerate() {
            let v = x[(base + m) % n];
            acc_a += v * hm;
            acc_d += v * gm;
        }
        a[k] = acc_a;
        d[k] = acc_d;
    }
    Ok((a, d))
}

/// One synthesis stage, the transpose of [`analysis_step`]:
/// `x[n] = Σ_k a[k] h[n-2k] + d[k] g[n-2k]` (periodic, zero net delay).
pub fn synthesis_step<T: Sample>(a: &[T], d: &[T], pair: &WaveletFilterPair) -> Result<Vec<T>> {
    if a.len() != d.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            got: d.len(),
        });
    }
    let n = 2 * a.len();
    let (h, g) = (pair.h(), pair.g());
    let mut x = vec![T::zero(); n];
    for (k, (&ak, &dk)) in a.iter().zip(d).enumerate() {
        let base = 2 * k;
        for (m, (&hm, &gm)) in h.iter().zip(g).enumerate() {
            x[(base + m) % n] += ak * hm + dk * gm;
        }
    }
    Ok(x)
}

/// Multi-level DWT: analysis recursed on the approximation branch only.
pub fn dwt<T: Sample>(x: &[T], pair: &WaveletFilterPair, levels: u32) -> Result<SubbandSet<T>> {
    check_divisible(x.len(), levels)?;
    let mut details = Vec::with_capacity(levels as usize);
    let mut approx = x.to_vec();
    for _ in 0..levels {
        let (a, d) = analysis_step(&approx, pair)?;
        details.push(d);
        approx = a;
    }
    let mut bands = Vec::with_capacity(levels as usize + 1);
    bands.push(approx);
    bands.extend(details.into_iter().rev());
    Ok(SubbandSet {
        bands,
        tree_kind: TreeKind::DwtPruned,
        levels,
        original_length: x.len(),
    })
}

pub fn idwt<T: Sample>(set: &SubbandSet<T>, pair: &WaveletFilterPair) -> Result<Vec<T>> {
    expect_kind(set, TreeKind::DwtPruned)?;
    let mut approx = set.bands[0].clone();
    for d in &set.bands[1..] {
        approx = synthesis_step(&approx, d, pair)?;
    }
    Ok(approx)
}

/// Full wavelet-packet tree: both branches recursed, `2^levels` bands.
pub fn wpt<T: Sample>(x: &[T], pair: &WaveletFilterPair, levels: u32) -> Result<SubbandSet<T>> {
    check_divisible(x.len(), levels)?;
    let mut bands = vec![x.to_vec()];
    for _ in 0..levels {
        let mut next = Vec::with_capacity(bands.len() * 2);
        for band in &bands {
            let (a, d) = analysis_step(band, pair)?;
            next.push(a);
            next.push(d);
        }
        bands = next;
    }
    Ok(SubbandSet {
        bands,
        tree_kind: TreeKind::WptFull,
        levels,
        original_length: x.len(),
    })
}

pub fn iwpt<T: Sample>(set: &SubbandSet<T>, pair: &WaveletFilterPair) -> Result<Vec<T>> {
    expect_kind(set, TreeKind::WptFull)?;
    let mut bands = set.bands.clone();
    while bands.len() > 1 {
        let mut next = Vec::with_capacity(bands.len() / 2);
        for pairs in bands.chunks(2) {
            next.push(synthesis_step(&pairs[0], &pairs[1], pair)?);
        }
        bands = next;
    }
    Ok(bands.pop().unwrap_or_default())
}

fn expect_kind<T>(set: &SubbandSet<T>, kind: TreeKind) -> Result<()> {
    let expected_bands = match kind {
        TreeKind::DwtPruned => set.levels as usize + 1,
        TreeKind::WptFull => 1usize << set.levels,
    };
    if set.tree_kind != kind || set.bands.len() != expected_bands {
        return Err(Error::LengthMismatch {
            expected: expected_bands,
            got: set.bands.len(),
        });
    }
    Ok(())
}
