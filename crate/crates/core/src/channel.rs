//! Non-stationary doubly dispersive channel.
//!
//! Each local stationarity region (LSR) is WSSUS with an exponential power
//! delay profile and a U-shaped (Jakes) Doppler spectrum. Realizations are
//! tapped delay lines on the sampling grid whose tap gains are sums of
//! equal-power sinusoids.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{invalid, Error, Result};
use crate::waveform::BasebandSignal;

/// Scattering statistics of one LSR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LsrParams {
    /// RMS delay spread in seconds.
    pub tau_rms: f64,
    /// Maximum Doppler shift in Hz.
    pub f_max: f64,
    /// Upper bound on the number of taps of a realization.
    pub num_taps: usize,
    /// Sinusoids per tap.
    pub num_doppler_components: usize,
    pub seed: u64,
}

impl LsrParams {
    pub const DEFAULT_MAX_TAPS: usize = 1024;
    pub const DEFAULT_DOPPLER_COMPONENTS: usize = 16;

    pub fn new(tau_rms: f64, f_max: f64) -> Result<Self> {
        let p = Self {
            tau_rms,
            f_max,
            num_taps: Self::DEFAULT_MAX_TAPS,
            num_doppler_components: Self::DEFAULT_DOPPLER_COMPONENTS,
            seed: 0,
        };
        p.validate()?;
        Ok(p)
    }

    /// Splits a channel spread factor `G = tau_rms f_max` at fixed `f_max`.
    pub fn from_csf(csf: f64, f_max: f64) -> Result<Self> {
        Self::new(csf / f_max, f_max)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Channel spread factor `tau_rms * f_max`.
    pub fn csf(&self) -> f64 {
        self.tau_rms * self.f_max
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau_rms > 0.0 && self.tau_rms.is_finite()) {
            return Err(invalid(format!(
                "tau_rms must be positive, got {}",
                self.tau_rms
            )));
        }
        if !(self.f_max > 0.0 && self.f_max.is_finite()) {
            return Err(invalid(format!(
                "f_max must be positive, got {}",
                self.f_max
            )));
        }
        if self.csf() >= 0.1 {
            return Err(invalid(format!(
                "channel spread factor {} is not underspread (< 0.1)",
                self.csf()
            )));
        }
        Ok(())
    }
}

/// Per-LSR statistics of a non-stationary channel and the link SNR.
#[derive(Debug, Clone, PartialEq)]
pub struct NsddChannelSpec {
    pub lsrs: Vec<LsrParams>,
    /// `sigma_c^2 / sigma_w^2` in dB.
    pub snr_db: f64,
    /// Duration of each LSR in seconds.
    pub lsr_duration: f64,
}

impl NsddChannelSpec {
    pub fn validate(&self, symbol_period: f64) -> Result<()> {
        if self.lsrs.is_empty() {
            return Err(invalid("channel needs at least one LSR"));
        }
        for lsr in &self.lsrs {
            lsr.validate()?;
        }
        if self.snr_db.is_nan() {
            return Err(invalid("SNR is NaN"));
        }
        if !(self.lsr_duration >= 10.0 * symbol_period) {
            return Err(invalid(format!(
                "LSR duration {} s is shorter than 10 symbol periods",
                self.lsr_duration
            )));
        }
        Ok(())
    }
}

/// Noise power `sigma_w^2` for symbol power `sigma_c2` at `snr_db`.
pub fn noise_power(sigma_c2: f64, snr_db: f64) -> f64 {
    sigma_c2 * 10f64.powf(-snr_db / 10.0)
}

/// `C(tau, nu) = exp(-tau / tau_rms) / (pi tau_rms f_max sqrt(1 - (nu / f_max)^2))`
/// on `tau >= 0, |nu| < f_max`, zero elsewhere.
pub fn scattering_function(tau: f64, nu: f64, p: &LsrParams) -> f64 {
    if tau < 0.0 || nu.abs() >= p.f_max {
        return 0.0;
    }
    let r = nu / p.f_max;
    (-tau / p.tau_rms).exp() / (PI * p.tau_rms * p.f_max * (1.0 - r * r).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DopplerComponent {
    pub amplitude: f64,
    /// Doppler frequency in Hz.
    pub doppler: f64,
    /// Initial phase in radians.
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tap {
    /// Delay in samples.
    pub delay: usize,
    pub components: Vec<DopplerComponent>,
}

impl Tap {
    /// Complex gain at absolute time `t`.
    pub fn gain(&self, t: f64) -> Complex64 {
        self.components
            .iter()
            .map(|c| Complex64::from_polar(c.amplitude, 2.0 * PI * c.doppler * t + c.phase))
            .sum()
    }

    /// Gains at `t0 + k ts`, `k = 0..len`.
    pub fn gain_sequence(&self, t0: f64, ts: f64, len: usize) -> Vec<Complex64> {
        const REANCHOR: usize = 256;
        let mut out = vec![Complex64::ZERO; len];
        for c in &self.components {
            let rot = Complex64::cis(2.0 * PI * c.doppler * ts);
            let mut start = 0;
            while start < len {
                let t = t0 + start as f64 * ts;
                let mut ph = Complex64::from_polar(c.amplitude, 2.0 * PI * c.doppler * t + c.phase);
                for o in &mut out[start..(start + REANCHOR).min(len)] {
                    *o += ph;
                    ph *= rot;
                }
                start += REANCHOR;
            }
        }
        out
    }

    /// Mean power `sum amplitude^2`.
    pub fn mean_power(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.amplitude * c.amplitude)
            .sum()
    }
}

/// One sample path of the time-varying impulse response.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub ts: f64,
    pub taps: Vec<Tap>,
}

impl ChannelRealization {
    /// `h(t, tau) = delta(tau)`.
    pub fn identity(ts: f64) -> Self {
        Self::frozen_tap(0, Complex64::ONE, ts)
    }

    /// A single time-invariant tap with the given gain.
    pub fn frozen_tap(delay: usize, gain: Complex64, ts: f64) -> Self {
        Self {
            ts,
            taps: vec![Tap {
                delay,
                components: vec![DopplerComponent {
                    amplitude: gain.norm(),
                    doppler: 0.0,
                    phase: gain.arg(),
                }],
            }],
        }
    }

    pub fn max_delay(&self) -> usize {
        self.taps.iter().map(|t| t.delay).max().unwrap_or(0)
    }

    pub fn mean_power(&self) -> f64 {
        self.taps.iter().map(Tap::mean_power).sum()
    }

    /// `sum_taps |gain(t)|^2`
    pub fn instantaneous_power(&self, t: f64) -> f64 {
        self.taps.iter().map(|tap| tap.gain(t).norm_sqr()).sum()
    }
}

/// Draws a sum-of-sinusoids realization of the LSR.
///
/// Taps sit on the sampling grid over `[0, 10 tau_rms]` (spaced by whole
/// samples so that at most `num_taps` taps are used). Tap `k` carries the
/// exponential profile integrated over its bin
/// `[max(0, tau_k - s/2), tau_k + s/2]`, `s` the tap spacing, normalized to
/// unit total; sampling the profile at the tap delays instead would shorten
/// the mean delay by about half a sample. Each tap is a sum of
/// `num_doppler_components` equal-power sinusoids at `f_max cos(theta)`
/// with uniform `theta` and uniform phase.
pub fn realize_lsr_channel(p: &LsrParams, ts: f64) -> Result<ChannelRealization> {
    p.validate()?;
    if !(ts > 0.0 && ts.is_finite()) {
        return Err(invalid(format!(
            "sampling interval must be positive, got {ts}"
        )));
    }
    if p.num_taps < 8 {
        return Err(invalid(format!(
            "num_taps must be at least 8, got {}",
            p.num_taps
        )));
    }
    if p.num_doppler_components < 16 {
        return Err(invalid(format!(
            "num_doppler_components must be at least 16, got {}",
            p.num_doppler_components
        )));
    }
    let span = (10.0 * p.tau_rms / ts).floor() as usize;
    let spacing = (span + 1).div_ceil(p.num_taps).max(1);
    let delays: Vec<usize> = (0..=span).step_by(spacing).collect();
    let weights: Vec<f64> = delays
        .iter()
        .map(|&d| {
            let lo = (d as f64 - 0.5 * spacing as f64).max(0.0) * ts;
            let hi = (d as f64 + 0.5 * spacing as f64) * ts;
            (-lo / p.tau_rms).exp() - (-hi / p.tau_rms).exp()
        })
        .collect();
    let total: f64 = weights.iter().sum();

    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let k = p.num_doppler_components;
    let taps = delays
        .iter()
        .zip(&weights)
        .map(|(&delay, &w)| {
            let amplitude = (w / total / k as f64).sqrt();
            let components = (0..k)
                .map(|_| {
                    let doppler = loop {
                        let theta: f64 = rng.random_range(0.0..2.0 * PI);
                        let f = p.f_max * theta.cos();
                        if f.abs() < p.f_max {
                            break f;
                        }
                    };
                    let phase = rng.random_range(0.0..2.0 * PI);
                    DopplerComponent {
                        amplitude,
                        doppler,
                        phase,
                    }
                })
                .collect();
            Tap { delay, components }
        })
        .collect();
    Ok(ChannelRealization { ts, taps })
}

/// `y[k] = sum_taps gain_tap(t_k) x[k - delay]`; output has the input's
/// length and start time.
pub fn apply_channel(x: &BasebandSignal, ch: &ChannelRealization) -> Result<BasebandSignal> {
    if ((x.ts - ch.ts) / x.ts).abs() > 1e-9 {
        return Err(Error::DimensionMismatch(format!(
            "signal sampled at {} s but channel at {} s",
            x.ts, ch.ts
        )));
    }
    if ch.max_delay() >= x.len() {
        return Err(Error::InsufficientSpan(format!(
            "channel delay of {} samples exceeds the {}-sample signal",
            ch.max_delay(),
            x.len()
        )));
    }
    let mut y = BasebandSignal::zeros(x.len(), x.ts, x.t0);
    for tap in &ch.taps {
        let gains = tap.gain_sequence(x.t0, x.ts, x.len());
        for ((out, g), v) in y.samples[tap.delay..]
            .iter_mut()
            .zip(&gains[tap.delay..])
            .zip(&x.samples)
        {
            *out += g * v;
        }
    }
    Ok(y)
}

/// Adds circular complex white Gaussian noise of per-sample variance
/// `sigma_w2 / ts`, so that projection onto a unit-energy pulse carries
/// noise power `sigma_w2`.
pub fn add_awgn(x: &BasebandSignal, sigma_w2: f64, seed: u64) -> Result<BasebandSignal> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    add_awgn_with(x, sigma_w2, &mut rng)
}

pub fn add_awgn_with<R: Rng + ?Sized>(
    x: &BasebandSignal,
    sigma_w2: f64,
    rng: &mut R,
) -> Result<BasebandSignal> {
    if !(sigma_w2 >= 0.0 && sigma_w2.is_finite()) {
        return Err(invalid(format!(
            "noise power must be non-negative, got {sigma_w2}"
        )));
    }
    let mut y = x.clone();
    if sigma_w2 == 0.0 {
        return Ok(y);
    }
    let s = (sigma_w2 / x.ts / 2.0).sqrt();
    for v in &mut y.samples {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        *v += Complex64::new(s * re, s * im);
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lsr() -> LsrParams {
        LsrParams::new(5e-6, 100.0).unwrap().with_seed(11)
    }

    #[test]
    fn scattering_examples() {
        let p = lsr();
        let v = scattering_function(p.tau_rms, 0.0, &p);
        let want = (-1f64).exp() / (PI * p.tau_rms * p.f_max);
        assert!((v - want).abs() / want < 1e-14);
        for &(t, nu) in &[(0.0, 30.0), (2e-6, 99.0), (1e-5, 55.5)] {
            assert_eq!(
                scattering_function(t, nu, &p),
                scattering_function(t, -nu, &p)
            );
        }
        assert_eq!(scattering_function(-1e-9, 0.0, &p), 0.0);
        assert_eq!(scattering_function(0.0, 100.0, &p), 0.0);
        assert_eq!(scattering_function(0.0, -150.0, &p), 0.0);
    }

    #[test]
    fn lsr_validation() {
        assert!(LsrParams::new(0.0, 100.0).is_err());
        assert!(LsrParams::new(1e-6, 0.0).is_err());
        assert!(LsrParams::new(1e-3, 100.0).is_err());
        assert!((LsrParams::from_csf(1e-3, 100.0).unwrap().tau_rms - 1e-5).abs() < 1e-20);
    }

    #[test]
    fn realization_is_deterministic_and_normalized() {
        let a = realize_lsr_channel(&lsr(), 1e-6).unwrap();
        let b = realize_lsr_channel(&lsr(), 1e-6).unwrap();
        assert_eq!(a, b);
        assert!((a.mean_power() - 1.0).abs() < 1e-12);
        assert_eq!(a.taps.len(), 51);
        assert_eq!(a.max_delay(), 50);
        for tap in &a.taps {
            assert!(tap.components.iter().all(|c| c.doppler.abs() < 100.0));
        }
    }

    #[test]
    fn realization_respects_tap_cap() {
        let mut p = LsrParams::new(1e-4, 100.0).unwrap();
        p.num_taps = 100;
        let ch = realize_lsr_channel(&p, 1e-6).unwrap();
        assert!(ch.taps.len() <= 100);
        assert!(ch.max_delay() <= 1000);
        assert!((ch.mean_power() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn realization_preconditions() {
        let mut p = lsr();
        p.num_taps = 4;
        assert!(realize_lsr_channel(&p, 1e-6).is_err());
        let mut p = lsr();
        p.num_doppler_components = 8;
        assert!(realize_lsr_channel(&p, 1e-6).is_err());
    }

    fn random_signal(len: usize, seed: u64) -> BasebandSignal {
        let z = BasebandSignal::zeros(len, 1e-6, -3e-4);
        add_awgn(&z, 1e-6, seed).unwrap()
    }

    #[test]
    fn identity_and_pure_delay() {
        let x = random_signal(500, 1);
        let y = apply_channel(&x, &ChannelRealization::identity(1e-6)).unwrap();
        let err = x
            .samples
            .iter()
            .zip(&y.samples)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err <= 1e-12);

        let y =
            apply_channel(&x, &ChannelRealization::frozen_tap(7, Complex64::ONE, 1e-6)).unwrap();
        assert!(y.samples[..7].iter().all(|v| v.norm() == 0.0));
        for k in 7..x.len() {
            assert!((y.samples[k] - x.samples[k - 7]).norm() <= 1e-12);
        }
    }

    #[test]
    fn channel_is_linear() {
        let ch = realize_lsr_channel(&lsr(), 1e-6).unwrap();
        let x1 = random_signal(400, 2);
        let x2 = random_signal(400, 3);
        let a = Complex64::new(0.3, -1.7);
        let mut comb = x1.clone();
        for (c, (p, q)) in comb
            .samples
            .iter_mut()
            .zip(x1.samples.iter().zip(&x2.samples))
        {
            *c = a * p + q;
        }
        let y = apply_channel(&comb, &ch).unwrap();
        let y1 = apply_channel(&x1, &ch).unwrap();
        let y2 = apply_channel(&x2, &ch).unwrap();
        let err = y
            .samples
            .iter()
            .zip(y1.samples.iter().zip(&y2.samples))
            .map(|(s, (p, q))| (s - a * p - q).norm())
            .fold(0.0, f64::max);
        assert!(err <= 1e-12, "{err}");
    }

    #[test]
    fn gain_sequence_matches_direct_evaluation() {
        let ch = realize_lsr_channel(&lsr(), 1e-6).unwrap();
        let tap = &ch.taps[3];
        let seq = tap.gain_sequence(-3e-4, 1e-6, 3000);
        for k in [0, 1, 255, 256, 1234, 2999] {
            let want = tap.gain(-3e-4 + k as f64 * 1e-6);
            assert!((seq[k] - want).norm() < 1e-12);
        }
    }

    #[test]
    fn apply_rejects_long_channels() {
        let ch = ChannelRealization::frozen_tap(50, Complex64::ONE, 1e-6);
        assert!(apply_channel(&random_signal(40, 1), &ch).is_err());
        let ch = ChannelRealization::identity(2e-6);
        assert!(apply_channel(&random_signal(40, 1), &ch).is_err());
    }

    #[test]
    fn awgn_zero_variance_and_determinism() {
        let x = random_signal(100, 5);
        assert_eq!(add_awgn(&x, 0.0, 9).unwrap(), x);
        assert_eq!(add_awgn(&x, 0.5, 9).unwrap(), add_awgn(&x, 0.5, 9).unwrap());
        assert_ne!(
            add_awgn(&x, 0.5, 9).unwrap(),
            add_awgn(&x, 0.5, 10).unwrap()
        );
        assert!(add_awgn(&x, -1.0, 9).is_err());
    }

    #[test]
    fn awgn_variance() {
        let ts = 1e-6;
        let sigma_w2 = 0.1;
        let x = BasebandSignal::zeros(1_000_000, ts, 0.0);
        let y = add_awgn(&x, sigma_w2, 77).unwrap();
        let var = y.samples.iter().map(|v| v.norm_sqr()).sum::<f64>() / y.len() as f64;
        let target = sigma_w2 / ts;
        assert!((var - target).abs() / target < 0.01, "{var} vs {target}");
    }
}
