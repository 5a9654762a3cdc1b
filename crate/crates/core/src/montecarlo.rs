//! End-to-end link simulation: modulate random QPSK frames, pass them
//! through realized LSR channels and AWGN, project with delayed receive
//! pulses and measure the SINR on interior lattice points.
//!
//! The desired term of every projected symbol is the symbol times its own
//! channel gain `H_jj`, computed exactly from the channel realization; the
//! rest of the projection is interference plus noise. Frames are pooled with
//! the mean channel power as a control variate (its expectation is exactly
//! one), which removes most of the frame-to-frame fading variance.

use std::f64::consts::{LN_10, PI};

use log::{debug, warn};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{
    add_awgn, noise_power, realize_lsr_channel, ChannelRealization, LsrParams, NsddChannelSpec,
};
use crate::error::{invalid, Error, Result};
use crate::waveform::{
    frame_len, modulate, point_offset, project, BasebandSignal, Coset, LatticeParams,
    PrototypePulse, SymbolGrid,
};

/// Interior margin (symbols and subcarriers) excluded at each grid edge.
pub const DEFAULT_MARGIN: usize = 2;
/// Reported SINR when the interference-plus-noise power is zero.
pub const SINR_CAP_DB: f64 = 200.0;
/// Below this many symbols an estimate carries a warning.
pub const MIN_SYMBOLS: usize = 100;

const STREAM_SYMBOLS: u64 = 1;
const STREAM_CHANNEL: u64 = 2;
const STREAM_NOISE: u64 = 3;

#[derive(Debug, Clone, PartialEq)]
pub enum TrialChannel {
    Nsdd(NsddChannelSpec),
    /// `h(t, tau) = delta(tau)`; `snr_db = inf` disables noise.
    Ideal {
        snr_db: f64,
    },
}

impl TrialChannel {
    pub fn snr_db(&self) -> f64 {
        match self {
            TrialChannel::Nsdd(spec) => spec.snr_db,
            TrialChannel::Ideal { snr_db } => *snr_db,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrialConfig {
    pub lattice: LatticeParams,
    pub pulse: PrototypePulse,
    pub channel: TrialChannel,
    /// Receive-pulse offsets in seconds, each in `[0, T/2]`.
    pub offsets: Vec<f64>,
    /// Initial number of frames (channel realizations) per LSR.
    pub num_frames: usize,
    /// Frames are doubled until every half-width is below the target or
    /// this cap is reached.
    pub max_frames: usize,
    pub target_half_width_db: f64,
    pub margin: usize,
    pub seed: u64,
}

impl TrialConfig {
    pub fn new(
        lattice: LatticeParams,
        pulse: PrototypePulse,
        channel: TrialChannel,
        offsets: Vec<f64>,
        seed: u64,
    ) -> Self {
        Self {
            lattice,
            pulse,
            channel,
            offsets,
            num_frames: 20,
            max_frames: 160,
            target_half_width_db: 0.2,
            margin: DEFAULT_MARGIN,
            seed,
        }
    }

    /// Exactly `n` frames, no adaptive doubling.
    pub fn fixed_frames(mut self, n: usize) -> Self {
        self.num_frames = n;
        self.max_frames = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.lattice.validate()?;
        if self.num_frames == 0 || self.max_frames < self.num_frames {
            return Err(invalid("need num_frames >= 1 and max_frames >= num_frames"));
        }
        if self.offsets.is_empty() {
            return Err(invalid("no receiver offsets to evaluate"));
        }
        let half = 0.5 * self.lattice.symbol_period;
        if let Some(bad) = self.offsets.iter().find(|&&o| !(0.0..=half).contains(&o)) {
            return Err(invalid(format!("offset {bad} s is outside [0, T/2]")));
        }
        if 2 * self.margin >= self.lattice.num_symbols.min(self.lattice.num_subcarriers) {
            return Err(invalid(format!(
                "margin {} leaves no interior points on a {}x{} grid",
                self.margin, self.lattice.num_symbols, self.lattice.num_subcarriers
            )));
        }
        if let TrialChannel::Nsdd(spec) = &self.channel {
            spec.validate(self.lattice.symbol_period)?;
        }
        if self.channel.snr_db().is_nan() {
            return Err(invalid("SNR is NaN"));
        }
        Ok(())
    }
}

/// Measured SINR for one (LSR, SNR, offset).
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalSinr {
    pub lsr_index: usize,
    /// Zero for the ideal channel.
    pub tau_rms: f64,
    pub f_max: f64,
    pub snr_db: f64,
    pub delta_t: f64,
    /// Mean desired-symbol gain.
    pub h_eff: Complex64,
    pub p_signal: f64,
    pub p_interf_noise: f64,
    pub sinr_db: f64,
    pub n_symbols: usize,
    pub n_frames: usize,
    /// 95 % confidence half-width of `sinr_db`.
    pub ci_half_width_db: f64,
    pub warning: Option<String>,
}

fn ratio_db(p_signal: f64, p_interf_noise: f64) -> f64 {
    if p_interf_noise <= 0.0 {
        return SINR_CAP_DB;
    }
    if p_signal <= 0.0 {
        return -SINR_CAP_DB;
    }
    (10.0 * (p_signal / p_interf_noise).log10()).clamp(-SINR_CAP_DB, SINR_CAP_DB)
}

/// Common-gain estimator over interior points (margin [`DEFAULT_MARGIN`]):
/// `h = <rx, tx> / (n sigma_c^2)`, `p_signal = |h|^2 sigma_c^2`,
/// `p_interf_noise = mean |rx - h tx|^2`.
pub fn estimate_sinr(tx: &SymbolGrid, rx: &SymbolGrid) -> Result<EmpiricalSinr> {
    estimate_sinr_with_margin(tx, rx, DEFAULT_MARGIN)
}

pub fn estimate_sinr_with_margin(
    tx: &SymbolGrid,
    rx: &SymbolGrid,
    margin: usize,
) -> Result<EmpiricalSinr> {
    if tx.dims() != rx.dims() {
        return Err(Error::DimensionMismatch(format!(
            "transmitted grid {:?} vs received {:?}",
            tx.dims(),
            rx.dims()
        )));
    }
    let points: Vec<_> = tx.interior(margin).collect();
    let n = points.len();
    if n == 0 {
        return Err(invalid("no interior symbols"));
    }
    let corr: Complex64 = points
        .iter()
        .map(|&(c, m, k)| rx.get(c, m, k) * tx.get(c, m, k).conj())
        .sum();
    let h = corr / (n as f64 * tx.sigma_c2);
    let p_interf_noise = points
        .iter()
        .map(|&(c, m, k)| (rx.get(c, m, k) - h * tx.get(c, m, k)).norm_sqr())
        .sum::<f64>()
        / n as f64;
    let p_signal = h.norm_sqr() * tx.sigma_c2;
    let warning = (n < MIN_SYMBOLS)
        .then(|| format!("only {n} interior symbols; estimate is statistically unreliable"));
    Ok(EmpiricalSinr {
        lsr_index: 0,
        tau_rms: 0.0,
        f_max: 0.0,
        snr_db: f64::INFINITY,
        delta_t: 0.0,
        h_eff: h,
        p_signal,
        p_interf_noise,
        sinr_db: ratio_db(p_signal, p_interf_noise),
        n_symbols: n,
        n_frames: 1,
        ci_half_width_db: f64::INFINITY,
        warning,
    })
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Independent per-(LSR, frame, stream) seed derived from the master seed.
pub fn derive_seed(base: u64, lsr_index: usize, frame: usize, stream: u64) -> u64 {
    [lsr_index as u64, frame as u64, stream]
        .iter()
        .fold(splitmix64(base), |h, &v| splitmix64(h ^ v))
}

/// Lattice rows and subcarrier columns whose desired gains are tracked.
struct GainPlan<'a> {
    lattice: &'a LatticeParams,
    pulse: &'a PrototypePulse,
    rows: Vec<(Coset, usize)>,
    cols: std::ops::Range<usize>,
    envelopes: Vec<(isize, Vec<f64>)>,
}

impl GainPlan<'_> {
    fn ncols(&self) -> usize {
        self.cols.len()
    }
}

/// Channel output plus the desired gains `H[offset][row * ncols + col]`,
/// and the mean of `sum_taps |gain|^2` over `power_window`.
struct Propagated {
    received: BasebandSignal,
    gains: Vec<Vec<Complex64>>,
    mean_power: f64,
}

/// Applies `ch` to `x` and, tap by tap, accumulates
/// `H = ts sum_tap exp(-j 2 pi f_n d ts) sum_u gain(t) g[u] psi[u + d - shift]`.
fn propagate(
    x: &BasebandSignal,
    ch: &ChannelRealization,
    plan: &GainPlan<'_>,
    power_window: std::ops::Range<usize>,
) -> Result<Propagated> {
    if ((x.ts - ch.ts) / x.ts).abs() > 1e-9 {
        return Err(Error::DimensionMismatch(format!(
            "signal sampled at {} s but channel at {} s",
            x.ts, ch.ts
        )));
    }
    let len = x.len();
    if ch.max_delay() >= len || power_window.end > len {
        return Err(Error::InsufficientSpan(format!(
            "channel delay of {} samples does not fit the {len}-sample signal",
            ch.max_delay()
        )));
    }
    let ts = x.ts;
    let g = plan.pulse.samples();
    let ng = g.len();
    let f = plan.lattice.subcarrier_spacing;
    let ncols = plan.ncols();
    let mut received = BasebandSignal::zeros(len, ts, x.t0);
    let mut gains = vec![vec![Complex64::ZERO; plan.rows.len() * ncols]; plan.envelopes.len()];
    let mut power = 0.0;
    let mut product = vec![0.0; ng];

    for tap in &ch.taps {
        let d = tap.delay;
        let seq = tap.gain_sequence(x.t0, ts, len);
        for ((out, g), v) in received.samples[d..len]
            .iter_mut()
            .zip(&seq[d..])
            .zip(&x.samples)
        {
            *out += g * v;
        }
        power += seq[power_window.clone()]
            .iter()
            .map(|v| v.norm_sqr())
            .sum::<f64>();

        for (oi, (shift, env)) in plan.envelopes.iter().enumerate() {
            // g[u] psi[u + d - shift], trimmed to its numerically nonzero span
            let lag = d as isize - shift;
            let mut lo = ng;
            let mut hi = 0;
            let mut peak: f64 = 0.0;
            for (u, p) in product.iter_mut().enumerate() {
                let e = u as isize + lag;
                *p = if e >= 0 && (e as usize) < ng {
                    g[u] * env[e as usize]
                } else {
                    0.0
                };
                peak = peak.max(p.abs());
            }
            if peak == 0.0 {
                continue;
            }
            for (u, p) in product.iter().enumerate() {
                if p.abs() > 1e-18 * peak {
                    lo = lo.min(u);
                    hi = u + 1;
                }
            }
            for (ri, &(coset, m)) in plan.rows.iter().enumerate() {
                let base = point_offset(plan.lattice, coset, m, ts) as usize + d;
                if base + hi > len {
                    return Err(Error::InsufficientSpan(format!(
                        "delayed pulse of symbol {m} runs past the {len}-sample signal"
                    )));
                }
                let w: Complex64 = (lo..hi)
                    .map(|u| seq[base + u] * product[u])
                    .sum::<Complex64>()
                    * ts;
                let h = coset.half();
                let fd = -2.0 * PI * f * d as f64 * ts;
                let mut ph = w * Complex64::cis(fd * (plan.cols.start as f64 + h));
                let step = Complex64::cis(fd);
                for slot in &mut gains[oi][ri * ncols..(ri + 1) * ncols] {
                    *slot += ph;
                    ph *= step;
                }
            }
        }
    }
    let mean_power = if power_window.is_empty() {
        0.0
    } else {
        power / power_window.len() as f64
    };
    Ok(Propagated {
        received,
        gains,
        mean_power,
    })
}

/// Exact desired gains `H_jj` of every lattice point of a frame modulated
/// with `lattice` and `pulse`, received through `ch` with offset `delta_t`.
pub fn desired_gains(
    ch: &ChannelRealization,
    lattice: &LatticeParams,
    pulse: &PrototypePulse,
    delta_t: f64,
) -> Result<SymbolGrid> {
    lattice.validate()?;
    let rows: Vec<_> = Coset::BOTH
        .into_iter()
        .flat_map(|c| (0..lattice.num_symbols).map(move |m| (c, m)))
        .collect();
    let plan = GainPlan {
        lattice,
        pulse,
        rows,
        cols: 0..lattice.num_subcarriers,
        envelopes: vec![pulse.receive_envelope(delta_t)],
    };
    let pad = ch.max_delay() + (delta_t / pulse.ts()).round() as usize + 1;
    let len = frame_len(lattice, pulse) + pad;
    let x = BasebandSignal::zeros(len, pulse.ts(), -(pulse.center() as f64) * pulse.ts());
    let prop = propagate(&x, ch, &plan, 0..0)?;
    let mut out = SymbolGrid::for_lattice(lattice);
    let n = lattice.num_subcarriers;
    for (ri, &(c, m)) in plan.rows.iter().enumerate() {
        for k in 0..n {
            out.set(c, m, k, prop.gains[0][ri * n + k]);
        }
    }
    Ok(out)
}

/// Per-frame interior means for one offset.
#[derive(Debug, Clone, Copy, Default)]
struct OffsetStats {
    /// `|H c|^2`
    signal: f64,
    /// `|y - H c|^2` without noise
    interference: f64,
    /// `|n|^2` for unit noise power
    noise: f64,
    /// `Re((y - H c) conj(n))`
    cross: f64,
    gain: Complex64,
}

#[derive(Debug, Clone)]
struct FrameStats {
    mean_power: f64,
    n_symbols: usize,
    offsets: Vec<OffsetStats>,
}

/// Frame layout shared by every frame of one LSR.
struct FrameLayout {
    tx_lattice: LatticeParams,
    rows: Vec<(Coset, usize)>,
    cols: std::ops::Range<usize>,
    envelopes: Vec<(isize, Vec<f64>)>,
    pad: usize,
    power_window: std::ops::Range<usize>,
}

impl FrameLayout {
    /// `guard` extra symbols are sent ahead of the frame so that interior
    /// symbols also see interference arriving over the full delay spread.
    fn new(cfg: &TrialConfig, max_delay: usize) -> Result<Self> {
        let ts = cfg.pulse.ts();
        let t = cfg.lattice.symbol_period;
        let guard = ((max_delay as f64 * ts) / t).ceil() as usize;
        let mut tx_lattice = cfg.lattice;
        tx_lattice.num_symbols += guard;
        if let TrialChannel::Nsdd(spec) = &cfg.channel {
            let duration = tx_lattice.num_symbols as f64 * t;
            if duration > spec.lsr_duration * (1.0 + 1e-12) {
                return Err(invalid(format!(
                    "frame of {} symbols ({duration} s) is longer than the LSR duration {} s",
                    tx_lattice.num_symbols, spec.lsr_duration
                )));
            }
        }
        let margin = cfg.margin;
        let m_range = guard + margin..guard + cfg.lattice.num_symbols - margin;
        let rows: Vec<_> = Coset::BOTH
            .into_iter()
            .flat_map(|c| m_range.clone().map(move |m| (c, m)))
            .collect();
        let max_shift = cfg
            .offsets
            .iter()
            .map(|o| (o / ts).round() as usize)
            .max()
            .unwrap_or(0);
        let first = point_offset(&tx_lattice, Coset::First, m_range.start, ts) as usize;
        let last = point_offset(&tx_lattice, Coset::Second, m_range.end - 1, ts) as usize
            + cfg.pulse.len();
        Ok(Self {
            tx_lattice,
            rows,
            cols: margin..cfg.lattice.num_subcarriers - margin,
            envelopes: cfg
                .offsets
                .iter()
                .map(|&o| cfg.pulse.receive_envelope(o))
                .collect(),
            pad: max_delay + max_shift + 1,
            power_window: first..last,
        })
    }
}

fn simulate_frame(
    cfg: &TrialConfig,
    layout: &FrameLayout,
    ch: &ChannelRealization,
    lsr_index: usize,
    frame: usize,
) -> Result<FrameStats> {
    let lattice = &layout.tx_lattice;
    let mut rng =
        ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, lsr_index, frame, STREAM_SYMBOLS));
    let tx = SymbolGrid::qpsk(lattice.num_symbols, lattice.num_subcarriers, &mut rng);
    let x = modulate(&tx, lattice, &cfg.pulse)?.padded(layout.pad);
    let plan = GainPlan {
        lattice,
        pulse: &cfg.pulse,
        rows: layout.rows.clone(),
        cols: layout.cols.clone(),
        envelopes: layout.envelopes.clone(),
    };
    let prop = propagate(&x, ch, &plan, layout.power_window.clone())?;
    let unit_noise = add_awgn(
        &BasebandSignal::zeros(x.len(), x.ts, x.t0),
        1.0,
        derive_seed(cfg.seed, lsr_index, frame, STREAM_NOISE),
    )?;

    let ncols = plan.ncols();
    let n_symbols = layout.rows.len() * ncols;
    let mut offsets = Vec::with_capacity(cfg.offsets.len());
    for (oi, &dt) in cfg.offsets.iter().enumerate() {
        let rx = project(&prop.received, lattice, &cfg.pulse, dt)?;
        let rn = project(&unit_noise, lattice, &cfg.pulse, dt)?;
        let mut st = OffsetStats::default();
        for (ri, &(c, m)) in layout.rows.iter().enumerate() {
            for (ci, k) in layout.cols.clone().enumerate() {
                let h = prop.gains[oi][ri * ncols + ci];
                let desired = h * tx.get(c, m, k);
                let resid = rx.get(c, m, k) - desired;
                let noise = rn.get(c, m, k);
                st.signal += desired.norm_sqr();
                st.interference += resid.norm_sqr();
                st.noise += noise.norm_sqr();
                st.cross += (resid * noise.conj()).re;
                st.gain += h;
            }
        }
        let inv = 1.0 / n_symbols as f64;
        st.signal *= inv;
        st.interference *= inv;
        st.noise *= inv;
        st.cross *= inv;
        st.gain *= inv;
        offsets.push(st);
    }
    Ok(FrameStats {
        mean_power: prop.mean_power,
        n_symbols,
        offsets,
    })
}

/// Control-variate mean of `v` with covariate `z` of known mean one.
fn cv_adjusted(v: &[f64], z: &[f64]) -> Vec<f64> {
    let n = v.len() as f64;
    let zm = z.iter().sum::<f64>() / n;
    let vm = v.iter().sum::<f64>() / n;
    let var_z: f64 = z.iter().map(|zi| (zi - zm).powi(2)).sum();
    let beta = if var_z > 1e-24 * n {
        z.iter()
            .zip(v)
            .map(|(zi, vi)| (zi - zm) * (vi - vm))
            .sum::<f64>()
            / var_z
    } else {
        0.0
    };
    v.iter()
        .zip(z)
        .map(|(vi, zi)| vi - beta * (zi - 1.0))
        .collect()
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Pools frames into (signal, interference-plus-noise, 95 % half-width in dB).
fn pool(frames: &[FrameStats], oi: usize, sigma_w2: f64, use_cv: bool) -> (f64, f64, f64) {
    let sw = sigma_w2.sqrt();
    let z: Vec<f64> = frames.iter().map(|f| f.mean_power).collect();
    let s: Vec<f64> = frames.iter().map(|f| f.offsets[oi].signal).collect();
    let d: Vec<f64> = frames
        .iter()
        .map(|f| {
            let o = &f.offsets[oi];
            o.interference + sigma_w2 * o.noise + 2.0 * sw * o.cross
        })
        .collect();
    let (s, d) = if use_cv {
        (cv_adjusted(&s, &z), cv_adjusted(&d, &z))
    } else {
        (s, d)
    };
    let (sm, dm) = (mean(&s), mean(&d));
    let n = frames.len();
    let half_width = if n < 2 || sm <= 0.0 || dm <= 0.0 {
        f64::INFINITY
    } else {
        let e: Vec<f64> = s.iter().zip(&d).map(|(a, b)| a / sm - b / dm).collect();
        let em = mean(&e);
        let var = e.iter().map(|x| (x - em).powi(2)).sum::<f64>() / (n - 1) as f64;
        1.96 * 10.0 / LN_10 * (var / n as f64).sqrt()
    };
    (sm, dm, half_width)
}

/// Runs the trial at the channel's SNR.
pub fn run_trial(cfg: &TrialConfig) -> Result<Vec<EmpiricalSinr>> {
    run_trial_snrs(cfg, &[cfg.channel.snr_db()])
}

/// Runs the trial once per LSR and evaluates every listed SNR on the same
/// channel, symbol and unit-noise draws. Records are ordered by LSR, then
/// SNR, then offset.
pub fn run_trial_snrs(cfg: &TrialConfig, snrs_db: &[f64]) -> Result<Vec<EmpiricalSinr>> {
    cfg.validate()?;
    if snrs_db.is_empty() || snrs_db.iter().any(|s| s.is_nan()) {
        return Err(invalid("need at least one SNR and no NaN"));
    }
    let ts = cfg.pulse.ts();
    let lsrs: Vec<Option<LsrParams>> = match &cfg.channel {
        TrialChannel::Nsdd(spec) => spec.lsrs.iter().copied().map(Some).collect(),
        TrialChannel::Ideal { .. } => vec![None],
    };
    let mut out = Vec::new();
    for (li, lsr) in lsrs.iter().enumerate() {
        let realize = |frame: usize| -> Result<ChannelRealization> {
            match lsr {
                Some(p) => realize_lsr_channel(
                    &p.with_seed(derive_seed(cfg.seed, li, frame, STREAM_CHANNEL)),
                    ts,
                ),
                None => Ok(ChannelRealization::identity(ts)),
            }
        };
        let layout = FrameLayout::new(cfg, realize(0)?.max_delay())?;
        let run = |range: std::ops::Range<usize>| -> Result<Vec<FrameStats>> {
            range
                .into_par_iter()
                .map(|frame| simulate_frame(cfg, &layout, &realize(frame)?, li, frame))
                .collect()
        };

        let mut frames = run(0..cfg.num_frames)?;
        let records = loop {
            let records: Vec<EmpiricalSinr> = snrs_db
                .iter()
                .flat_map(|&snr| {
                    let frames = &frames;
                    cfg.offsets.iter().enumerate().map(move |(oi, &dt)| {
                        let sigma_w2 = noise_power(1.0, snr);
                        let (p_signal, p_in, hw) = pool(frames, oi, sigma_w2, lsr.is_some());
                        let n_frames = frames.len();
                        let n_symbols: usize = frames.iter().map(|f| f.n_symbols).sum();
                        let h_eff = frames.iter().map(|f| f.offsets[oi].gain).sum::<Complex64>()
                            / n_frames as f64;
                        EmpiricalSinr {
                            lsr_index: li,
                            tau_rms: lsr.map_or(0.0, |p| p.tau_rms),
                            f_max: lsr.map_or(0.0, |p| p.f_max),
                            snr_db: snr,
                            delta_t: dt,
                            h_eff,
                            p_signal,
                            p_interf_noise: p_in,
                            sinr_db: ratio_db(p_signal, p_in),
                            n_symbols,
                            n_frames,
                            ci_half_width_db: hw,
                            warning: (n_symbols < MIN_SYMBOLS).then(|| {
                                format!("only {n_symbols} interior symbols; estimate is statistically unreliable")
                            }),
                        }
                    })
                })
                .collect();
            let worst = records
                .iter()
                .map(|r| r.ci_half_width_db)
                .fold(0.0, f64::max);
            if worst < cfg.target_half_width_db || frames.len() >= cfg.max_frames {
                if worst >= cfg.target_half_width_db {
                    warn!(
                        "LSR {li}: half-width {worst:.3} dB still above {} dB after {} frames",
                        cfg.target_half_width_db,
                        frames.len()
                    );
                }
                break records;
            }
            let next = (2 * frames.len()).min(cfg.max_frames);
            debug!("LSR {li}: half-width {worst:.3} dB, extending to {next} frames");
            let more = run(frames.len()..next)?;
            frames.extend(more);
        };
        out.extend(records);
    }
    Ok(out)
}
