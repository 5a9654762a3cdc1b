//! Theoretical SINR of the projection receiver with a delayed Gaussian
//! receive pulse, its maximum over the timing offset, and the closed-form
//! Max-SINR offset.
//!
//! With `psi(t) = g(t - dt)` the squared cross-ambiguity is
//! `exp(-pi ((tau - dt)^2 / sigma + sigma nu^2))`, which factors into a delay
//! part and a Doppler part. The scattering function factors the same way,
//! so every energy term here is a sum of products of two 1-D integrals:
//!
//! * delay: composite Gauss-Legendre on `[0, tau_max]` with panels no wider
//!   than `min(tau_rms, sqrt(sigma / 2 pi))`;
//! * Doppler: `nu = f_max sin(theta)`, which removes the `1/sqrt(1 - x^2)`
//!   endpoint singularity, then Gauss-Legendre in `theta`.
//!
//! Lattice sums run over the `2K + 1` points of each coset nearest to the
//! argument, `K = lattice_sum_extent`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use log::warn;

use crate::channel::{noise_power, LsrParams};
use crate::error::{invalid, Error, Result};
use crate::quadrature::GaussLegendre;
use crate::search::{golden_section_max, grid_golden_max};
use crate::special::{erfc, ln_erfc};
use crate::waveform::{gaussian_cross_ambiguity, Coset, LatticeParams};

/// How the noise term of the interference-plus-noise energy depends on the
/// receive-pulse offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum NoiseModel {
    /// `sigma_w^2 |A(0, 0)|`, which shrinks as the offset grows.
    #[default]
    AsPrinted,
    /// `sigma_w^2 ||psi||^2 = sigma_w^2`, independent of the offset. This is
    /// the noise power a unit-energy projection actually collects.
    UnitPulseEnergy,
}

impl NoiseModel {
    pub fn as_str(self) -> &'static str {
        match self {
            NoiseModel::AsPrinted => "as-printed",
            NoiseModel::UnitPulseEnergy => "unit-energy",
        }
    }
}

impl fmt::Display for NoiseModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NoiseModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "as-printed" | "as_printed" => Ok(NoiseModel::AsPrinted),
            "unit-energy" | "unit_energy" | "unit_pulse_energy" => Ok(NoiseModel::UnitPulseEnergy),
            other => Err(invalid(format!("unknown noise model '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinrConfig {
    pub lattice: LatticeParams,
    /// Pulse parameter in seconds squared.
    pub sigma: f64,
    pub sigma_c2: f64,
    pub sigma_w2: f64,
    /// `K`: lattice points per coset and axis on each side of the nearest one.
    pub lattice_sum_extent: usize,
    /// Gauss-Legendre nodes per delay panel.
    pub delay_nodes: usize,
    /// Gauss-Legendre nodes over the Doppler angle.
    pub doppler_nodes: usize,
    pub noise_model: NoiseModel,
}

impl SinrConfig {
    pub fn paper(snr_db: f64) -> Self {
        let lattice = LatticeParams::paper();
        Self {
            lattice,
            sigma: lattice.balanced_sigma(),
            sigma_c2: 1.0,
            sigma_w2: noise_power(1.0, snr_db),
            lattice_sum_extent: 3,
            delay_nodes: 32,
            doppler_nodes: 32,
            noise_model: NoiseModel::AsPrinted,
        }
    }

    pub fn with_snr_db(mut self, snr_db: f64) -> Self {
        self.sigma_w2 = noise_power(self.sigma_c2, snr_db);
        self
    }

    pub fn with_noise_model(mut self, noise_model: NoiseModel) -> Self {
        self.noise_model = noise_model;
        self
    }

    pub fn with_orders(mut self, delay_nodes: usize, doppler_nodes: usize) -> Self {
        self.delay_nodes = delay_nodes;
        self.doppler_nodes = doppler_nodes;
        self
    }

    pub fn snr_db(&self) -> f64 {
        10.0 * (self.sigma_c2 / self.sigma_w2).log10()
    }

    /// Upper end of the offset search interval, `T/2`.
    pub fn max_offset(&self) -> f64 {
        0.5 * self.lattice.symbol_period
    }

    pub fn validate(&self) -> Result<()> {
        self.lattice.validate()?;
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(invalid(format!(
                "sigma must be positive, got {}",
                self.sigma
            )));
        }
        if !(self.sigma_c2 > 0.0) || !(self.sigma_w2 >= 0.0) {
            return Err(invalid(
                "symbol power must be positive and noise power non-negative",
            ));
        }
        if self.lattice_sum_extent < 2 {
            return Err(invalid("lattice_sum_extent must be at least 2"));
        }
        if self.delay_nodes < 32 || self.doppler_nodes < 32 {
            return Err(invalid("quadrature orders must be at least 32"));
        }
        Ok(())
    }
}

/// Signal, interference and noise energies of one received symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyTerms {
    pub signal: f64,
    pub interference: f64,
    pub noise: f64,
}

impl EnergyTerms {
    pub fn interference_noise(&self) -> f64 {
        self.interference + self.noise
    }

    pub fn sinr(&self) -> f64 {
        self.signal / self.interference_noise()
    }
}

/// Raw quadrature nodes used for one LSR: delay nodes in seconds and
/// Doppler nodes as angles `theta` with `nu = f_max sin(theta)`.
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    pub delay: Vec<(f64, f64)>,
    pub doppler_theta: Vec<(f64, f64)>,
}

const MAX_DELAY_PANELS: usize = 1 << 14;

/// Quadrature nodes for offsets up to `max_offset`.
pub fn quadrature_grid(
    lsr: &LsrParams,
    cfg: &SinrConfig,
    max_offset: f64,
    order_scale: usize,
) -> Result<QuadratureGrid> {
    let gauss_width = (cfg.sigma / (2.0 * PI)).sqrt();
    let upper = (20.0 * lsr.tau_rms)
        .max(max_offset + 8.0 * gauss_width)
        .min(40.0 * lsr.tau_rms);
    let panel = lsr.tau_rms.min(gauss_width);
    if upper / panel > MAX_DELAY_PANELS as f64 {
        return Err(invalid(format!(
            "delay range {upper} s needs more than {MAX_DELAY_PANELS} quadrature panels"
        )));
    }
    let delay =
        GaussLegendre::new(cfg.delay_nodes * order_scale).composite_nodes(0.0, upper, panel);
    let doppler_theta = GaussLegendre::new(cfg.doppler_nodes * order_scale)
        .mapped(-0.5 * PI, 0.5 * PI)
        .collect();
    Ok(QuadratureGrid {
        delay,
        doppler_theta,
    })
}

/// Lattice coordinates `k + half` of the `2K + 1` coset points nearest to
/// `-x / spacing`, and whether `k = 0` is among them.
fn nearest_window(x: f64, spacing: f64, half: f64, extent: usize) -> (i64, bool) {
    let k0 = (-x / spacing - half).round() as i64;
    (k0, k0.unsigned_abs() as usize <= extent)
}

/// Precomputed quadrature for one LSR; evaluates all energy terms at any
/// offset up to the `max_offset` it was built for.
#[derive(Debug, Clone)]
pub struct SinrEvaluator {
    cfg: SinrConfig,
    /// Delay nodes with the weight already multiplied by `exp(-tau / tau_rms) / tau_rms`.
    delay: Vec<(f64, f64)>,
    dop_signal: f64,
    dop_coset: [f64; 2],
    dop_origin: f64,
}

impl SinrEvaluator {
    pub fn new(lsr: &LsrParams, cfg: &SinrConfig, max_offset: f64) -> Result<Self> {
        Self::with_order_scale(lsr, cfg, max_offset, 1)
    }

    fn with_order_scale(
        lsr: &LsrParams,
        cfg: &SinrConfig,
        max_offset: f64,
        order_scale: usize,
    ) -> Result<Self> {
        cfg.validate()?;
        lsr.validate()?;
        let grid = quadrature_grid(lsr, cfg, max_offset, order_scale)?;
        let delay = grid
            .delay
            .iter()
            .map(|&(t, w)| (t, w * (-t / lsr.tau_rms).exp() / lsr.tau_rms))
            .collect();

        let sigma = cfg.sigma;
        let f = cfg.lattice.subcarrier_spacing;
        let k = cfg.lattice_sum_extent as i64;
        let mut dop_signal = 0.0;
        let mut dop_coset = [0.0; 2];
        let mut dop_origin = 0.0;
        for &(theta, w) in &grid.doppler_theta {
            let nu = lsr.f_max * theta.sin();
            let q = w / PI;
            let centre = (-PI * sigma * nu * nu).exp();
            dop_signal += q * centre;
            for coset in Coset::BOTH {
                let h = coset.half();
                let (n0, has_origin) = nearest_window(nu, f, h, cfg.lattice_sum_extent);
                let s: f64 = (n0 - k..=n0 + k)
                    .map(|n| {
                        let fr = (n as f64 + h) * f + nu;
                        (-PI * sigma * fr * fr).exp()
                    })
                    .sum();
                dop_coset[coset.index()] += q * s;
                if coset == Coset::First && has_origin {
                    dop_origin += q * centre;
                }
            }
        }
        Ok(Self {
            cfg: *cfg,
            delay,
            dop_signal,
            dop_coset,
            dop_origin,
        })
    }

    pub fn config(&self) -> &SinrConfig {
        &self.cfg
    }

    pub fn terms(&self, delta_t: f64) -> EnergyTerms {
        let sigma = self.cfg.sigma;
        let t = self.cfg.lattice.symbol_period;
        let k = self.cfg.lattice_sum_extent as i64;
        let mut p_signal = 0.0;
        let mut p_coset = [0.0; 2];
        let mut p_origin = 0.0;
        for &(tau, w) in &self.delay {
            let x = tau - delta_t;
            let centre = (-PI * x * x / sigma).exp();
            p_signal += w * centre;
            for coset in Coset::BOTH {
                let h = coset.half();
                let (m0, has_origin) = nearest_window(x, t, h, self.cfg.lattice_sum_extent);
                let s: f64 = (m0 - k..=m0 + k)
                    .map(|m| {
                        let a = (m as f64 + h) * t + x;
                        (-PI * a * a / sigma).exp()
                    })
                    .sum();
                p_coset[coset.index()] += w * s;
                if coset == Coset::First && has_origin {
                    p_origin += w * centre;
                }
            }
        }
        let c2 = self.cfg.sigma_c2;
        let lattice_total = p_coset[0] * self.dop_coset[0] + p_coset[1] * self.dop_coset[1];
        let noise = match self.cfg.noise_model {
            NoiseModel::AsPrinted => {
                self.cfg.sigma_w2 * gaussian_cross_ambiguity(sigma, delta_t, 0.0, 0.0).norm()
            }
            NoiseModel::UnitPulseEnergy => self.cfg.sigma_w2,
        };
        EnergyTerms {
            signal: c2 * p_signal * self.dop_signal,
            interference: c2 * (lattice_total - p_origin * self.dop_origin).max(0.0),
            noise,
        }
    }

    pub fn sinr(&self, delta_t: f64) -> f64 {
        self.terms(delta_t).sinr()
    }
}

const CONVERGENCE_REL: f64 = 1e-8;

fn rel_diff(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// Energy terms at `delta_t`, verified against a doubled quadrature order.
pub fn energy_terms(delta_t: f64, lsr: &LsrParams, cfg: &SinrConfig) -> Result<EnergyTerms> {
    let max_offset = delta_t.max(cfg.max_offset());
    let base = SinrEvaluator::new(lsr, cfg, max_offset)?.terms(delta_t);
    let fine = SinrEvaluator::with_order_scale(lsr, cfg, max_offset, 2)?.terms(delta_t);
    for (name, a, b) in [
        ("signal", base.signal, fine.signal),
        ("interference", base.interference, fine.interference),
    ] {
        if rel_diff(a, b) > CONVERGENCE_REL {
            return Err(Error::Convergence(format!(
                "{name} energy changed by {:.3e} (relative) when doubling the order at dt = {delta_t}",
                rel_diff(a, b)
            )));
        }
    }
    Ok(base)
}

/// Received signal energy `sigma_c^2 integral C(tau, nu) |A(tau, nu)|^2`.
pub fn signal_energy(delta_t: f64, lsr: &LsrParams, cfg: &SinrConfig) -> Result<f64> {
    Ok(energy_terms(delta_t, lsr, cfg)?.signal)
}

/// Interference from every other lattice point of both cosets plus noise.
pub fn interference_noise_energy(delta_t: f64, lsr: &LsrParams, cfg: &SinrConfig) -> Result<f64> {
    Ok(energy_terms(delta_t, lsr, cfg)?.interference_noise())
}

/// Theoretical SINR (linear ratio) at receive-pulse offset `delta_t`.
pub fn sinr_theoretical(delta_t: f64, lsr: &LsrParams, cfg: &SinrConfig) -> Result<f64> {
    Ok(energy_terms(delta_t, lsr, cfg)?.sinr())
}

/// Maximum of the theoretical SINR over the offset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperBound {
    pub delta_t: f64,
    pub sinr: f64,
    pub multimodal: bool,
}

pub const UPPER_BOUND_GRID: usize = 64;
const OFFSET_TOL: f64 = 1e-9;
const TIE_REL: f64 = 1e-9;

/// Maximizes [`sinr_theoretical`] over `[0, T/2]`.
pub fn sinr_upper_bound(lsr: &LsrParams, cfg: &SinrConfig) -> Result<UpperBound> {
    sinr_upper_bound_with_grid(lsr, cfg, UPPER_BOUND_GRID)
}

pub fn sinr_upper_bound_with_grid(
    lsr: &LsrParams,
    cfg: &SinrConfig,
    grid_points: usize,
) -> Result<UpperBound> {
    if grid_points < UPPER_BOUND_GRID {
        return Err(invalid(format!(
            "bracketing grid needs at least {UPPER_BOUND_GRID} points"
        )));
    }
    let evaluator = SinrEvaluator::new(lsr, cfg, cfg.max_offset())?;
    let best = grid_golden_max(
        |dt| evaluator.sinr(dt),
        0.0,
        cfg.max_offset(),
        grid_points,
        OFFSET_TOL,
        TIE_REL,
    );
    if best.multimodal {
        warn!(
            "SINR over the offset has several local maxima (tau_rms = {}, f_max = {}); keeping dt = {}",
            lsr.tau_rms, lsr.f_max, best.x
        );
    }
    // order-doubling check at the optimum
    let checked = energy_terms(best.x, lsr, cfg)?.sinr();
    Ok(UpperBound {
        delta_t: best.x,
        sinr: best.value.max(checked),
        multimodal: best.multimodal,
    })
}

/// Approximation `erfc(x / sqrt(2)) ~ 2 exp(-x^2 / 2) / (1.64 x + sqrt(0.76 x^2 + 4))`
/// for `x >= 0`; exact at zero.
pub fn erfc_approx(x: f64) -> Result<f64> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(invalid(format!(
            "erfc approximation needs a non-negative argument, got {x}"
        )));
    }
    Ok(2.0 * (-0.5 * x * x).exp() / (1.64 * x + (0.76 * x * x + 4.0).sqrt()))
}

/// `sqrt(pi / sigma) (sigma / (2 pi tau_rms) - delta_t)`, the argument of
/// the complementary error function in `b`.
fn erfc_argument(delta_t: f64, sigma: f64, tau_rms: f64) -> f64 {
    (PI / sigma).sqrt() * (sigma / (2.0 * PI * tau_rms) - delta_t)
}

/// The delay integral `int_0^inf exp(-tau/tau_rms) exp(-pi (tau - dt)^2 / sigma) dtau`
/// written as `a(dt) b(dt)` after completing the square:
///
/// `a(dt) = exp(sigma / (4 pi tau_rms^2)) exp(-dt / tau_rms)`
/// `b(dt) = sqrt(sigma) / 2 erfc(sqrt(pi / sigma) (sigma / (2 pi tau_rms) - dt))`
///
/// May overflow `a` for `tau_rms` far below `sqrt(sigma)`; see
/// [`ln_objective_ab`] for a safe product.
pub fn objective_factors(delta_t: f64, sigma: f64, tau_rms: f64) -> (f64, f64) {
    let a = (sigma / (4.0 * PI * tau_rms * tau_rms) - delta_t / tau_rms).exp();
    let b = 0.5 * sigma.sqrt() * erfc(erfc_argument(delta_t, sigma, tau_rms));
    (a, b)
}

/// Closed forms `(da/d dt, db/d dt) = (-a / tau_rms, exp(-L^2))` with `L`
/// the erfc argument.
pub fn objective_gradients(delta_t: f64, sigma: f64, tau_rms: f64) -> (f64, f64) {
    let (a, _) = objective_factors(delta_t, sigma, tau_rms);
    let l = erfc_argument(delta_t, sigma, tau_rms);
    (-a / tau_rms, (-l * l).exp())
}

pub fn ln_objective_ab(delta_t: f64, sigma: f64, tau_rms: f64) -> f64 {
    sigma / (4.0 * PI * tau_rms * tau_rms) - delta_t / tau_rms
        + (0.5 * sigma.sqrt()).ln()
        + ln_erfc(erfc_argument(delta_t, sigma, tau_rms))
}

/// `a(dt) b(dt)` with the exact complementary error function.
pub fn objective_ab(delta_t: f64, sigma: f64, tau_rms: f64) -> f64 {
    ln_objective_ab(delta_t, sigma, tau_rms).exp()
}

const ARGMAX_GRID: usize = 256;
const ARGMAX_TOL: f64 = 1e-12;

/// Numerical maximizer of [`objective_ab`] over `[0, max_offset]`.
pub fn objective_argmax(sigma: f64, tau_rms: f64, max_offset: f64) -> Result<f64> {
    if !(sigma > 0.0 && tau_rms > 0.0 && max_offset > 0.0) {
        return Err(invalid(
            "sigma, tau_rms and the search interval must be positive",
        ));
    }
    let f = |dt| ln_objective_ab(dt, sigma, tau_rms);
    let coarse = grid_golden_max(f, 0.0, max_offset, ARGMAX_GRID, ARGMAX_TOL, 0.0);
    let (x, _) = golden_section_max(
        f,
        (coarse.x - 2.0 * ARGMAX_TOL.max(1e-10)).max(0.0),
        (coarse.x + 2.0 * ARGMAX_TOL.max(1e-10)).min(max_offset),
        ARGMAX_TOL,
    );
    Ok(if f(x) >= coarse.value { x } else { coarse.x })
}

/// `s = sqrt(sigma) / tau_rms`; the stationarity condition with the erfc
/// approximation reduces to `1.9296 x^2 - 3.28 s x + (s^2 - 4) = 0` in
/// `x = sqrt(2 pi / sigma) (sigma / (2 pi tau_rms) - dt)`. Returns the
/// smaller root, which must be non-negative for the approximation to hold.
fn quadratic_root(sigma: f64, tau_rms: f64) -> Result<f64> {
    if !(sigma > 0.0 && tau_rms > 0.0) {
        return Err(invalid("sigma and tau_rms must be positive"));
    }
    let s = sigma.sqrt() / tau_rms;
    let inner = 3.28 * 3.28 * s * s - 7.7184 * (s * s - 4.0);
    if inner < 0.0 {
        return Err(Error::ClosedFormInapplicable(format!(
            "negative discriminant {inner} at sigma/tau_rms^2 = {}",
            s * s
        )));
    }
    let x = (3.28 * s - inner.sqrt()) / 3.8592;
    if x < 0.0 {
        return Err(Error::ClosedFormInapplicable(format!(
            "erfc argument {x} is negative (sigma/tau_rms^2 = {} < 4)",
            s * s
        )));
    }
    Ok(x)
}

/// Closed-form Max-SINR timing offset
///
/// `dt = sigma / (2 pi tau_rms) - sqrt(sigma / 2 pi) (3.28 s - sqrt(3.28^2 s^2 - 7.7184 (s^2 - 4))) / 3.8592`
///
/// with `s = sqrt(sigma) / tau_rms`, clamped at zero. Fails when
/// `sigma / tau_rms^2 < 4`, where the erfc approximation it rests on is
/// used outside its domain.
pub fn closed_form_offset(sigma: f64, tau_rms: f64) -> Result<f64> {
    let x = quadratic_root(sigma, tau_rms)?;
    let dt = sigma / (2.0 * PI * tau_rms) - (sigma / (2.0 * PI)).sqrt() * x;
    Ok(dt.max(0.0))
}

/// The same root with the radical extended over the whole bracket,
/// `sigma / (2 pi tau_rms) - (1 / 3.8592) sqrt((sigma / 2 pi) (3.28 s - sqrt(...)))`.
/// It does not solve the stationarity condition and is kept only for
/// comparison; receivers use [`closed_form_offset`].
pub fn closed_form_offset_as_printed(sigma: f64, tau_rms: f64) -> Result<f64> {
    let x = quadratic_root(sigma, tau_rms)?;
    let dt = sigma / (2.0 * PI * tau_rms) - (sigma / (2.0 * PI) * 3.8592 * x).sqrt() / 3.8592;
    Ok(dt.max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OffsetSource {
    ClosedForm,
    /// Closed form not applicable; numerical argmax of `a b` used instead.
    ObjectiveArgmax,
}

impl OffsetSource {
    pub fn as_str(self) -> &'static str {
        match self {
            OffsetSource::ClosedForm => "ok",
            OffsetSource::ObjectiveArgmax => "closed_form_inapplicable",
        }
    }
}

/// [`closed_form_offset`] with fallback to [`objective_argmax`].
pub fn closed_form_or_fallback(
    sigma: f64,
    tau_rms: f64,
    max_offset: f64,
) -> Result<(f64, OffsetSource)> {
    match closed_form_offset(sigma, tau_rms) {
        Ok(dt) => Ok((dt, OffsetSource::ClosedForm)),
        Err(Error::ClosedFormInapplicable(_)) => Ok((
            objective_argmax(sigma, tau_rms, max_offset)?,
            OffsetSource::ObjectiveArgmax,
        )),
        Err(e) => Err(e),
    }
}

pub fn to_db(ratio: f64) -> f64 {
    10.0 * ratio.log10()
}

/// Per-LSR comparison of the three receivers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinrRecord {
    pub csf: f64,
    pub tau_rms: f64,
    pub f_max: f64,
    pub delta_t_tpr: f64,
    pub delta_t_closed: f64,
    pub closed_source: OffsetSource,
    pub delta_t_numeric: f64,
    pub sinr_tpr_db: f64,
    pub sinr_closed_db: f64,
    pub sinr_ub_db: f64,
    pub multimodal: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SinrReport {
    pub records: Vec<SinrRecord>,
}

pub fn analyze_lsr(lsr: &LsrParams, cfg: &SinrConfig) -> Result<SinrRecord> {
    let (delta_t_closed, closed_source) =
        closed_form_or_fallback(cfg.sigma, lsr.tau_rms, cfg.max_offset())?;
    let ub = sinr_upper_bound(lsr, cfg)?;
    let tpr = sinr_theoretical(0.0, lsr, cfg)?;
    let closed = sinr_theoretical(delta_t_closed, lsr, cfg)?;
    Ok(SinrRecord {
        csf: lsr.csf(),
        tau_rms: lsr.tau_rms,
        f_max: lsr.f_max,
        delta_t_tpr: 0.0,
        delta_t_closed,
        closed_source,
        delta_t_numeric: ub.delta_t,
        sinr_tpr_db: to_db(tpr),
        sinr_closed_db: to_db(closed),
        sinr_ub_db: to_db(ub.sinr),
        multimodal: ub.multimodal,
    })
}

pub fn sinr_report(lsrs: &[LsrParams], cfg: &SinrConfig) -> Result<SinrReport> {
    let records = lsrs
        .iter()
        .map(|lsr| analyze_lsr(lsr, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(SinrReport { records })
}
