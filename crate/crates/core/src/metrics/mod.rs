//! Signal and link quality measures.

mod errors;
mod papr;
mod spectrum;

pub use errors::{ber, evm, BerCounter, EvmInput};
pub use papr::{papr_at_ccdf, papr_ccdf, papr_db, papr_samples, CcdfCurve};
pub use spectrum::{
    occupied_bandwidth, psd, pulse_set_psd, spectral_efficiency, PsdEstimate, PsdMethod, Window,
};

/// Default power containment for occupied bandwidth.
pub const DEFAULT_CONTAINMENT: f64 = 0.99;
