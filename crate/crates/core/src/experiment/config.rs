use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::filterbank::WaveletFamily;
use crate::modem::{ConstellationKind, ConstellationSpec, OfdmConfig, Precoder};

/// Flat `key = value` document with dotted keys. `#` starts a comment.
#[derive(Debug, Clone, Default)]
pub struct ConfigMap {
    entries: BTreeMap<String, String>,
    used: RefCell<BTreeSet<String>>,
}

impl ConfigMap {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected 'key = value'", no + 1)))?;
            let k = k.trim();
            let v = v.trim();
            if k.is_empty() || k.contains(char::is_whitespace) {
                return Err(Error::Config(format!("line {}: bad key '{k}'", no + 1)));
            }
            if entries.insert(k.to_string(), v.to_string()).is_some() {
                return Err(Error::Config(format!("line {}: duplicate key '{k}'", no + 1)));
            }
        }
        Ok(ConfigMap {
            entries,
            used: RefCell::new(BTreeSet::new()),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.entries.insert(key.to_string(), value.to_string());
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.used.borrow_mut().insert(key.to_string());
        self.entries.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => parse_value(key, v),
        }
    }

    pub fn get_opt<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.raw(key).map(|v| parse_value(key, v)).transpose()
    }

    pub fn get_list<T: FromStr>(&self, key: &str, default: Vec<T>) -> Result<Vec<T>> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| parse_value(key, s))
                .collect(),
        }
    }

    /// Keys present in the document that no accessor asked for.
    pub fn unused_keys(&self) -> Vec<String> {
        let used = self.used.borrow();
        self.entries
            .keys()
            .filter(|k| !used.contains(*k))
            .cloned()
            .collect()
    }
}

fn parse_value<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse::<T>()
        .map_err(|_| Error::Config(format!("cannot parse '{v}' for key '{key}'")))
}

/// Parses `inf`, `+inf` and `-inf` as well as plain numbers.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Real(pub f64);

impl FromStr for Real {
    type Err = ();

    fn from_str(s: &str) -> std::result::Result<Self, ()> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "+inf" | "infinity" => Ok(Real(f64::INFINITY)),
            "-inf" | "-infinity" => Ok(Real(f64::NEG_INFINITY)),
            other => other.parse::<f64>().map(Real).map_err(|_| ()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    PaprCcdfCompare,
    EvmBandwidthSweep,
    BerFading,
    SpectralEfficiencyTable,
    ModGaussReport,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 5] = [
        ExperimentKind::PaprCcdfCompare,
        ExperimentKind::EvmBandwidthSweep,
        ExperimentKind::BerFading,
        ExperimentKind::SpectralEfficiencyTable,
        ExperimentKind::ModGaussReport,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::PaprCcdfCompare => "papr_ccdf_compare",
            ExperimentKind::EvmBandwidthSweep => "evm_bandwidth_sweep",
            ExperimentKind::BerFading => "ber_fading",
            ExperimentKind::SpectralEfficiencyTable => "spectral_efficiency_table",
            ExperimentKind::ModGaussReport => "modgauss_report",
        }
    }

    fn default_trials(self) -> usize {
        match self {
            ExperimentKind::PaprCcdfCompare => 10_000,
            ExperimentKind::EvmBandwidthSweep => 100,
            ExperimentKind::BerFading => 200,
            ExperimentKind::SpectralEfficiencyTable | ExperimentKind::ModGaussReport => 1,
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('-', "_");
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == norm)
            .ok_or_else(|| Error::Config(format!("unknown experiment '{s}'")))
    }
}

/// One of the four compared transmitters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemKind {
    Ofdm,
    ScOfdm,
    Wpm,
    ScWpm,
}

impl SystemKind {
    pub fn name(self) -> &'static str {
        match self {
            SystemKind::Ofdm => "ofdm",
            SystemKind::ScOfdm => "sc-ofdm",
            SystemKind::Wpm => "wpm",
            SystemKind::ScWpm => "sc-wpm",
        }
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SystemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "ofdm" | "ft-ofdm" => Ok(SystemKind::Ofdm),
            "sc-ofdm" | "sc-fdma" => Ok(SystemKind::ScOfdm),
            "wpm" | "wt-ofdm" => Ok(SystemKind::Wpm),
            "sc-wpm" => Ok(SystemKind::ScWpm),
            other => Err(Error::Config(format!("unknown system '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModemParams {
    pub constellation: ConstellationKind,
    pub n_subcarriers: usize,
    pub oversampling: usize,
    pub cp_fraction: f64,
    pub rolloff: f64,
    pub wavelet: WaveletFamily,
    pub levels: u32,
    pub precoder_wavelet: WaveletFamily,
    pub precoder_levels: u32,
    pub systems: Vec<SystemKind>,
}

impl ModemParams {
    pub fn constellation_spec(&self) -> ConstellationSpec {
        ConstellationSpec::new(self.constellation)
    }

    pub fn system_config(&self, system: SystemKind) -> Result<OfdmConfig> {
        let n = self.n_subcarriers;
        let cfg = match system {
            SystemKind::Ofdm | SystemKind::ScOfdm => OfdmConfig::fourier(n).with_cp(self.cp_fraction),
            SystemKind::Wpm | SystemKind::ScWpm => {
                let mut c = OfdmConfig::wavelet_packet(self.wavelet.filter()?, self.levels);
                c.n_subcarriers = n;
                c
            }
        };
        let cfg = match system {
            SystemKind::ScOfdm => cfg.with_precoder(Precoder::Dft),
            SystemKind::ScWpm => cfg.with_precoder(Precoder::Dwt {
                pair: self.precoder_wavelet.filter()?,
                levels: Some(self.precoder_levels),
            }),
            _ => cfg,
        }
        .with_oversampling(self.oversampling)
        .with_rolloff(self.rolloff);
        cfg.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChannelProfile {
    /// Ten-tap exponential profile drawn from `channel.seed`.
    Default,
    /// Single unit tap: AWGN only.
    Awgn,
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelParams {
    pub profile: ChannelProfile,
    pub seed: u64,
    pub normalize: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PaprParams {
    pub thresholds_db: Vec<f64>,
    pub ccdf_probe: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvmParams {
    pub cutoffs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerParams {
    pub ebn0_db: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PulseLayout {
    /// `2^m` translates at dilation level `m` in every symbol period.
    Translates,
    /// One pulse per dilation level.
    PerScale,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeParams {
    pub families: Vec<WaveletFamily>,
    pub dyadics: Vec<usize>,
    pub layout: PulseLayout,
    pub cascade_levels: u32,
    pub fft_len: usize,
    pub containment: f64,
    pub bits_per_symbol: usize,
    pub rc_rolloffs: Vec<f64>,
    pub rc_span: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModGaussParams {
    pub sigma_t: Vec<f64>,
    pub l_max: usize,
    pub grid_points: usize,
    pub f_max: f64,
    pub containment: f64,
    pub srrc_rolloffs: Vec<f64>,
    pub srrc_span: f64,
}

/// Fully resolved experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub seed: u64,
    pub n_trials: usize,
    pub output_path: Option<PathBuf>,
    pub modem: ModemParams,
    pub channel: ChannelParams,
    pub papr: PaprParams,
    pub evm: EvmParams,
    pub ber: BerParams,
    pub se: SeParams,
    pub modgauss: ModGaussParams,
}

fn arange(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let n = ((stop - start) / step + 1e-9).floor() as i64;
    (0..=n.max(0)).map(|i| start + i as f64 * step).collect()
}

fn reals(v: Vec<Real>) -> Vec<f64> {
    v.into_iter().map(|r| r.0).collect()
}

fn real_list(map: &ConfigMap, key: &str, default: Vec<f64>) -> Result<Vec<f64>> {
    Ok(reals(map.get_list(key, default.into_iter().map(Real).collect())?))
}

impl ExperimentConfig {
    pub fn defaults(kind: ExperimentKind) -> Self {
        Self::from_map(kind, &ConfigMap::default()).expect("defaults are valid")
    }

    /// Reads every known key (falling back to the defaults for `kind`) and rejects
    /// unknown keys.
    pub fn from_map(kind: ExperimentKind, map: &ConfigMap) -> Result<Self> {
        if let Some(e) = map.get_opt::<String>("experiment")? {
            let named: ExperimentKind = e.parse()?;
            if named != kind {
                return Err(Error::Config(format!(
                    "config is for '{named}' but '{kind}' was requested"
                )));
            }
        }
        let evm = kind == ExperimentKind::EvmBandwidthSweep;
        let n_subcarriers: usize = map.get("modem.n_subcarriers", 512)?;
        if n_subcarriers == 0 || !n_subcarriers.is_power_of_two() {
            return Err(Error::Config(format!(
                "modem.n_subcarriers = {n_subcarriers} is not a power of two"
            )));
        }
        let levels: u32 = map.get("modem.levels", n_subcarriers.trailing_zeros())?;
        let wavelet: WaveletFamily = map.get(
            "modem.wavelet",
            if evm { WaveletFamily::Daubechies(10) } else { WaveletFamily::Haar },
        )?;
        let systems_default = if evm {
            vec![SystemKind::Ofdm, SystemKind::Wpm]
        } else {
            vec![SystemKind::Wpm, SystemKind::Ofdm, SystemKind::ScWpm, SystemKind::ScOfdm]
        };
        let modem = ModemParams {
            constellation: map.get("modem.constellation", ConstellationKind::Qpsk)?,
            n_subcarriers,
            oversampling: map.get("modem.oversampling", if evm { 2 } else { 4 })?,
            cp_fraction: map.get("modem.cp_fraction", if evm { 0.0 } else { 0.125 })?,
            rolloff: map.get("modem.rolloff", 0.0)?,
            precoder_wavelet: map.get("modem.precoder_wavelet", wavelet.clone())?,
            precoder_levels: map.get("modem.precoder_levels", levels)?,
            wavelet,
            levels,
            systems: map.get_list("modem.systems", systems_default)?,
        };
        let profile = match map.get::<String>("channel.profile", "default".into())?.as_str() {
            "default" | "ten_path" | "10path" => ChannelProfile::Default,
            "awgn" | "flat" => ChannelProfile::Awgn,
            path => ChannelProfile::File(PathBuf::from(path)),
        };
        let channel = ChannelParams {
            profile,
            seed: map.get("channel.seed", 2024)?,
            normalize: map.get("channel.normalize", true)?,
        };
        let thresholds = match map.get_opt::<String>("papr.thresholds_db")? {
            Some(_) => real_list(map, "papr.thresholds_db", vec![])?,
            None => arange(
                map.get("papr.threshold_start", 4.0)?,
                map.get("papr.threshold_stop", 12.0)?,
                map.get("papr.threshold_step", 0.1)?,
            ),
        };
        let papr = PaprParams {
            thresholds_db: thresholds,
            ccdf_probe: map.get("papr.ccdf_probe", 1e-3)?,
        };
        let evm_params = EvmParams {
            cutoffs: real_list(map, "evm.cutoffs", arange(0.1, 1.0, 0.1))?,
        };
        let ber = BerParams {
            ebn0_db: real_list(map, "ber.ebn0_db", arange(0.0, 20.0, 2.0))?,
        };
        let layout = match map.get::<String>("se.pulse_layout", "translates".into())?.as_str() {
            "translates" => PulseLayout::Translates,
            "per_scale" => PulseLayout::PerScale,
            other => return Err(Error::Config(format!("unknown se.pulse_layout '{other}'"))),
        };
        let se = SeParams {
            families: map.get_list(
                "se.families",
                vec![
                    WaveletFamily::Daubechies(10),
                    WaveletFamily::Symlet(10),
                    WaveletFamily::Coiflet(3),
                ],
            )?,
            dyadics: map.get_list("se.dyadics", vec![0, 1, 2])?,
            layout,
            cascade_levels: map.get("se.cascade_levels", 8)?,
            fft_len: map.get("se.fft_len", 1 << 16)?,
            containment: map.get("se.containment", 0.99)?,
            bits_per_symbol: map.get("se.bits_per_symbol", 1)?,
            rc_rolloffs: real_list(map, "se.rc_rolloffs", vec![0.22])?,
            rc_span: map.get("se.rc_span", 32.0)?,
        };
        let modgauss = ModGaussParams {
            sigma_t: real_list(map, "modgauss.sigma_t", vec![0.25, 0.5, 1.0])?,
            l_max: map.get("modgauss.l_max", 8)?,
            grid_points: map.get("modgauss.grid_points", 10_001)?,
            f_max: map.get("modgauss.f_max", 4.0)?,
            containment: map.get("modgauss.containment", 0.99)?,
            srrc_rolloffs: real_list(map, "modgauss.srrc_rolloffs", vec![0.2, 0.5])?,
            srrc_span: map.get("modgauss.srrc_span", 8.0)?,
        };
        let cfg = ExperimentConfig {
            experiment: kind,
            seed: map.get("seed", 1)?,
            n_trials: map.get("trials", kind.default_trials())?,
            output_path: map.get_opt::<String>("output.path")?.map(PathBuf::from),
            modem,
            channel,
            papr,
            evm: evm_params,
            ber,
            se,
            modgauss,
        };
        let unused = map.unused_keys();
        if !unused.is_empty() {
            return Err(Error::Config(format!("unknown keys: {}", unused.join(", "))));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.n_trials == 0 {
            return bad("trials must be >= 1".into());
        }
        if self.modem.systems.is_empty() {
            return bad("modem.systems is empty".into());
        }
        if self.experiment != ExperimentKind::SpectralEfficiencyTable
            && self.experiment != ExperimentKind::ModGaussReport
        {
            for &s in &self.modem.systems {
                self.modem.system_config(s)?;
            }
        }
        if self.papr.thresholds_db.windows(2).any(|w| !(w[1] > w[0])) {
            return bad("papr thresholds must be strictly ascending".into());
        }
        if !(self.papr.ccdf_probe > 0.0 && self.papr.ccdf_probe < 1.0) {
            return bad(format!("papr.ccdf_probe = {}", self.papr.ccdf_probe));
        }
        if self.evm.cutoffs.iter().any(|&c| !(c > 0.0 && c <= 1.0)) {
            return bad("evm.cutoffs must lie in (0, 1]".into());
        }
        if self.ber.ebn0_db.iter().any(|v| v.is_nan() || *v == f64::NEG_INFINITY) {
            return bad("ber.ebn0_db must be finite or +inf".into());
        }
        for f in &self.se.families {
            f.filter().map_err(|e| Error::Config(e.to_string()))?;
        }
        if self.se.dyadics.iter().any(|&d| d > 2) {
            return bad("se.dyadics must be 0, 1 or 2".into());
        }
        if !(self.se.containment > 0.0 && self.se.containment < 1.0)
            || !(self.modgauss.containment > 0.0 && self.modgauss.containment < 1.0)
        {
            return bad("containment must lie in (0, 1)".into());
        }
        if self.se.cascade_levels == 0 || self.se.cascade_levels > 14 {
            return bad("se.cascade_levels must be in 1..=14".into());
        }
        if self.modgauss.sigma_t.iter().any(|&s| !(s > 0.0)) || self.modgauss.l_max == 0 {
            return bad("modgauss.sigma_t must be positive and modgauss.l_max >= 1".into());
        }
        if self.modgauss.grid_points < 3 || !(self.modgauss.f_max > 0.0) {
            return bad("modgauss grid needs >= 3 points and f_max > 0".into());
        }
        Ok(())
    }

    /// Sorted `key = value` rendering of every parameter that can change the results.
    pub fn canonical(&self) -> String {
        let list = |v: &[f64]| v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(",");
        let m = &self.modem;
        let mut kv: BTreeMap<&str, String> = BTreeMap::new();
        kv.insert("experiment", self.experiment.to_string());
        kv.insert("seed", self.seed.to_string());
        kv.insert("trials", self.n_trials.to_string());
        kv.insert("modem.constellation", m.constellation.to_string());
        kv.insert("modem.n_subcarriers", m.n_subcarriers.to_string());
        kv.insert("modem.oversampling", m.oversampling.to_string());
        kv.insert("modem.cp_fraction", format!("{}", m.cp_fraction));
        kv.insert("modem.rolloff", format!("{}", m.rolloff));
        kv.insert("modem.wavelet", m.wavelet.to_string());
        kv.insert("modem.levels", m.levels.to_string());
        kv.insert("modem.precoder_wavelet", m.precoder_wavelet.to_string());
        kv.insert("modem.precoder_levels", m.precoder_levels.to_string());
        kv.insert(
            "modem.systems",
            m.systems.iter().map(|s| s.name()).collect::<Vec<_>>().join(","),
        );
        kv.insert(
            "channel.profile",
            match &self.channel.profile {
                ChannelProfile::Default => "default".to_string(),
                ChannelProfile::Awgn => "awgn".to_string(),
                ChannelProfile::File(p) => p.display().to_string(),
            },
        );
        kv.insert("channel.seed", self.channel.seed.to_string());
        kv.insert("channel.normalize", self.channel.normalize.to_string());
        kv.insert("papr.thresholds_db", list(&self.papr.thresholds_db));
        kv.insert("papr.ccdf_probe", format!("{}", self.papr.ccdf_probe));
        kv.insert("evm.cutoffs", list(&self.evm.cutoffs));
        kv.insert("ber.ebn0_db", list(&self.ber.ebn0_db));
        let s = &self.se;
        kv.insert(
            "se.families",
            s.families.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(","),
        );
        kv.insert(
            "se.dyadics",
            s.dyadics.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(","),
        );
        kv.insert(
            "se.pulse_layout",
            match s.layout {
                PulseLayout::Translates => "translates".into(),
                PulseLayout::PerScale => "per_scale".into(),
            },
        );
        kv.insert("se.cascade_levels", s.cascade_levels.to_string());
        kv.insert("se.fft_len", s.fft_len.to_string());
        kv.insert("se.containment", format!("{}", s.containment));
        kv.insert("se.bits_per_symbol", s.bits_per_symbol.to_string());
        kv.insert("se.rc_rolloffs", list(&s.rc_rolloffs));
        kv.insert("se.rc_span", format!("{}", s.rc_span));
        let g = &self.modgauss;
        kv.insert("modgauss.sigma_t", list(&g.sigma_t));
        kv.insert("modgauss.l_max", g.l_max.to_string());
        kv.insert("modgauss.grid_points", g.grid_points.to_string());
        kv.insert("modgauss.f_max", format!("{}", g.f_max));
        kv.insert("modgauss.containment", format!("{}", g.containment));
        kv.insert("modgauss.srrc_rolloffs", list(&g.srrc_rolloffs));
        kv.insert("modgauss.srrc_span", format!("{}", g.srrc_span));
        kv.into_iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    /// SHA-256 of [`canonical`](Self::canonical), hex encoded.
    pub fn config_hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}
