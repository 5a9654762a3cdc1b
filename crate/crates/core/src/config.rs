//! Experiment configuration: a strict `key = value` text format.
//!
//! Blank lines and lines starting with `#` are ignored. Lists are comma
//! separated. `preset = paper-sec4` may appear as the first setting and
//! loads the defaults that later keys override. Unknown keys, repeated keys
//! and malformed values are errors carrying the line number.

use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::channel::{LsrParams, NsddChannelSpec};
use crate::error::{invalid, Error, Result};
use crate::sinr::{NoiseModel, SinrConfig};
use crate::waveform::{make_gaussian_pulse, LatticeParams, PrototypePulse};

pub const PRESET_PAPER: &str = "paper-sec4";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Fig1,
    Fig2,
    Fig3,
    Custom,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Fig1 => "fig1",
            Mode::Fig2 => "fig2",
            Mode::Fig3 => "fig3",
            Mode::Custom => "sweep",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig1" => Ok(Mode::Fig1),
            "fig2" => Ok(Mode::Fig2),
            "fig3" => Ok(Mode::Fig3),
            "sweep" | "custom" => Ok(Mode::Custom),
            other => Err(invalid(format!("unknown mode '{other}'"))),
        }
    }
}

/// Link and waveform parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub symbol_period: f64,
    pub subcarrier_spacing: f64,
    pub num_subcarriers: usize,
    /// Symbols per coset in a simulated frame.
    pub num_symbols: usize,
    /// Pulse length in samples.
    pub pulse_len: usize,
    pub sampling_interval: f64,
    pub sigma: f64,
    /// Carried as metadata; the simulation is baseband.
    pub carrier_frequency: f64,
}

/// The grid of channel and SNR points an experiment visits.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepParams {
    /// Channel spread factors `G = tau_rms f_max`.
    pub csf: Vec<f64>,
    pub snr_db: Vec<f64>,
    /// Fixed maximum Doppler; `tau_rms = G / f_max`.
    pub f_max: f64,
    /// `tau_rms` estimate over true value, for the robustness sweep.
    pub error_ratios: Vec<f64>,
}

/// Monte Carlo settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloParams {
    pub enabled: bool,
    pub min_frames: usize,
    pub max_frames: usize,
    pub target_half_width_db: f64,
    pub lsr_duration: f64,
}

/// Quadrature and lattice truncation of the analytic SINR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericsParams {
    pub lattice_sum_extent: usize,
    pub delay_nodes: usize,
    pub doppler_nodes: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub system: SystemParams,
    pub sweep: SweepParams,
    pub monte_carlo: MonteCarloParams,
    pub numerics: NumericsParams,
    pub noise_model: NoiseModel,
    pub seed: u64,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Values of the section 4 simulation setup.
    pub fn paper_sec4() -> Self {
        let t = 1e-4;
        let f = 2.5e4;
        Self {
            mode: Mode::Fig2,
            system: SystemParams {
                symbol_period: t,
                subcarrier_spacing: f,
                num_subcarriers: 40,
                num_symbols: 20,
                pulse_len: 600,
                sampling_interval: 1e-6,
                sigma: t / (3f64.sqrt() * f),
                carrier_frequency: 5e9,
            },
            sweep: SweepParams {
                csf: vec![1e-4, 3e-4, 1e-3, 3e-3, 1e-2],
                snr_db: vec![10.0, 30.0],
                f_max: 100.0,
                error_ratios: vec![0.5, 0.7, 0.9, 1.0, 1.1, 1.3, 1.5],
            },
            monte_carlo: MonteCarloParams {
                enabled: true,
                min_frames: 20,
                max_frames: 160,
                target_half_width_db: 0.2,
                lsr_duration: 1e-2,
            },
            numerics: NumericsParams {
                lattice_sum_extent: 3,
                delay_nodes: 32,
                doppler_nodes: 32,
            },
            noise_model: NoiseModel::AsPrinted,
            seed: 1,
            output: None,
        }
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            PRESET_PAPER => Ok(Self::paper_sec4()),
            other => Err(invalid(format!("unknown preset '{other}'"))),
        }
    }

    pub fn lattice(&self) -> Result<LatticeParams> {
        let s = &self.system;
        LatticeParams::new(
            s.symbol_period,
            s.subcarrier_spacing,
            s.num_subcarriers,
            s.num_symbols,
        )
    }

    pub fn pulse(&self) -> Result<PrototypePulse> {
        make_gaussian_pulse(
            self.system.sigma,
            self.system.pulse_len,
            self.system.sampling_interval,
        )
    }

    pub fn sinr_config(&self, snr_db: f64) -> Result<SinrConfig> {
        let cfg = SinrConfig {
            lattice: self.lattice()?,
            sigma: self.system.sigma,
            sigma_c2: 1.0,
            sigma_w2: 1.0,
            lattice_sum_extent: self.numerics.lattice_sum_extent,
            delay_nodes: self.numerics.delay_nodes,
            doppler_nodes: self.numerics.doppler_nodes,
            noise_model: self.noise_model,
        }
        .with_snr_db(snr_db);
        cfg.validate()?;
        Ok(cfg)
    }

    /// One LSR per CSF grid point.
    pub fn lsrs(&self) -> Result<Vec<LsrParams>> {
        self.sweep
            .csf
            .iter()
            .map(|&g| LsrParams::from_csf(g, self.sweep.f_max))
            .collect()
    }

    pub fn channel_spec(&self, lsr: LsrParams, snr_db: f64) -> NsddChannelSpec {
        NsddChannelSpec {
            lsrs: vec![lsr],
            snr_db,
            lsr_duration: self.monte_carlo.lsr_duration,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.lattice()?;
        self.pulse()?;
        let sw = &self.sweep;
        if sw.csf.is_empty() {
            return Err(invalid("sweep grid is empty: no csf values"));
        }
        if sw.snr_db.is_empty() {
            return Err(invalid("sweep grid is empty: no snr_db values"));
        }
        if self.mode == Mode::Fig3 && sw.error_ratios.is_empty() {
            return Err(invalid("sweep grid is empty: no error_ratios values"));
        }
        if sw.snr_db.iter().any(|s| !s.is_finite()) {
            return Err(invalid("SNR values must be finite"));
        }
        if sw.error_ratios.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
            return Err(invalid("error ratios must be positive"));
        }
        self.lsrs()?;
        let mc = &self.monte_carlo;
        if mc.min_frames == 0 || mc.max_frames < mc.min_frames {
            return Err(invalid(
                "need mc_min_frames >= 1 and mc_max_frames >= mc_min_frames",
            ));
        }
        if !(mc.target_half_width_db > 0.0) || !(mc.lsr_duration > 0.0) {
            return Err(invalid(
                "mc_target_half_width_db and lsr_duration must be positive",
            ));
        }
        self.sinr_config(0.0)?;
        Ok(())
    }

    /// Serializes every setting; [`parse_config_str`] reads it back unchanged.
    pub fn to_config_string(&self) -> String {
        let s = &self.system;
        let sw = &self.sweep;
        let mc = &self.monte_carlo;
        let nm = &self.numerics;
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        kv("mode", self.mode.to_string());
        kv("symbol_period", s.symbol_period.to_string());
        kv("subcarrier_spacing", s.subcarrier_spacing.to_string());
        kv("num_subcarriers", s.num_subcarriers.to_string());
        kv("num_symbols", s.num_symbols.to_string());
        kv("pulse_length", s.pulse_len.to_string());
        kv("sampling_interval", s.sampling_interval.to_string());
        kv("sigma", s.sigma.to_string());
        kv("carrier_frequency", s.carrier_frequency.to_string());
        kv("csf", join(&sw.csf));
        kv("snr_db", join(&sw.snr_db));
        kv("f_max", sw.f_max.to_string());
        kv("error_ratios", join(&sw.error_ratios));
        kv("noise_model", self.noise_model.to_string());
        kv("seed", self.seed.to_string());
        kv("monte_carlo", mc.enabled.to_string());
        kv("mc_min_frames", mc.min_frames.to_string());
        kv("mc_max_frames", mc.max_frames.to_string());
        kv(
            "mc_target_half_width_db",
            mc.target_half_width_db.to_string(),
        );
        kv("lsr_duration", mc.lsr_duration.to_string());
        kv("lattice_sum_extent", nm.lattice_sum_extent.to_string());
        kv("delay_nodes", nm.delay_nodes.to_string());
        kv("doppler_nodes", nm.doppler_nodes.to_string());
        if let Some(p) = &self.output {
            kv("output", p.display().to_string());
        }
        out
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(", ")
}

fn cfg_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Config {
        line,
        msg: msg.into(),
    }
}

fn num<T: FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| cfg_err(line, format!("malformed value '{v}' for '{key}'")))
}

fn list(line: usize, key: &str, v: &str) -> Result<Vec<f64>> {
    if v.trim().is_empty() {
        return Ok(Vec::new());
    }
    v.split(',').map(|x| num(line, key, x.trim())).collect()
}

/// Parses configuration text. Without a `preset` line every setting starts
/// from the `paper-sec4` values.
pub fn parse_config_str(text: &str) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::paper_sec4();
    let mut seen = std::collections::HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| cfg_err(line, format!("expected 'key = value', got '{body}'")))?;
        let (key, v) = (key.trim(), value.trim());
        if !seen.insert(key.to_string()) {
            return Err(cfg_err(line, format!("duplicate key '{key}'")));
        }
        let s = &mut cfg.system;
        match key {
            "preset" => {
                if seen.len() != 1 {
                    return Err(cfg_err(line, "'preset' must be the first setting"));
                }
                cfg = ExperimentConfig::preset(v).map_err(|e| cfg_err(line, e.to_string()))?;
            }
            "mode" => cfg.mode = v.parse().map_err(|e: Error| cfg_err(line, e.to_string()))?,
            "symbol_period" => s.symbol_period = num(line, key, v)?,
            "subcarrier_spacing" => s.subcarrier_spacing = num(line, key, v)?,
            "num_subcarriers" => s.num_subcarriers = num(line, key, v)?,
            "num_symbols" => s.num_symbols = num(line, key, v)?,
            "pulse_length" => s.pulse_len = num(line, key, v)?,
            "sampling_interval" => s.sampling_interval = num(line, key, v)?,
            "sigma" => {
                s.sigma = if v == "balanced" {
                    s.symbol_period / (3f64.sqrt() * s.subcarrier_spacing)
                } else {
                    num(line, key, v)?
                }
            }
            "carrier_frequency" => s.carrier_frequency = num(line, key, v)?,
            "csf" => cfg.sweep.csf = list(line, key, v)?,
            "snr_db" => cfg.sweep.snr_db = list(line, key, v)?,
            "f_max" => cfg.sweep.f_max = num(line, key, v)?,
            "error_ratios" => cfg.sweep.error_ratios = list(line, key, v)?,
            "noise_model" => {
                cfg.noise_model = v.parse().map_err(|e: Error| cfg_err(line, e.to_string()))?
            }
            "seed" => cfg.seed = num(line, key, v)?,
            "monte_carlo" => cfg.monte_carlo.enabled = num(line, key, v)?,
            "mc_min_frames" => cfg.monte_carlo.min_frames = num(line, key, v)?,
            "mc_max_frames" => cfg.monte_carlo.max_frames = num(line, key, v)?,
            "mc_target_half_width_db" => cfg.monte_carlo.target_half_width_db = num(line, key, v)?,
            "lsr_duration" => cfg.monte_carlo.lsr_duration = num(line, key, v)?,
            "lattice_sum_extent" => cfg.numerics.lattice_sum_extent = num(line, key, v)?,
            "delay_nodes" => cfg.numerics.delay_nodes = num(line, key, v)?,
            "doppler_nodes" => cfg.numerics.doppler_nodes = num(line, key, v)?,
            "output" => cfg.output = Some(PathBuf::from(v)),
            other => return Err(cfg_err(line, format!("unknown key '{other}'"))),
        }
    }
    Ok(cfg)
}

pub fn parse_config(path: &Path) -> Result<ExperimentConfig> {
    parse_config_str(&std::fs::read_to_string(path)?)
}
