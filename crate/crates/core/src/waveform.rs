//! Hexagonal time-frequency lattice modulation and projection demodulation
//! with Gaussian prototype pulses.
//!
//! The lattice is the disjoint union of the rectangular sublattice
//! `(mT, nF)` and its coset shifted by `(T/2, F/2)`. A symbol at lattice
//! point `(t_p, f_p)` is carried by `g(t - t_p) exp(j 2 pi f_p t)`, where
//! `t` is absolute time with lattice point `(0, 0)` at `t = 0`.
//!
//! The receiver projects onto `psi(t) = g(t - dt)` shifted to each lattice
//! point; `dt = 0` is the traditional projection receiver.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{invalid, Error, Result};

/// Geometry of the hexagonal lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeParams {
    /// Symbol period `T` in seconds.
    pub symbol_period: f64,
    /// Subcarrier separation `F` in Hz.
    pub subcarrier_spacing: f64,
    /// Subcarriers per coset (`N`).
    pub num_subcarriers: usize,
    /// Multicarrier symbols per coset (`M`).
    pub num_symbols: usize,
}

impl LatticeParams {
    pub fn new(
        symbol_period: f64,
        subcarrier_spacing: f64,
        num_subcarriers: usize,
        num_symbols: usize,
    ) -> Result<Self> {
        let lattice = Self {
            symbol_period,
            subcarrier_spacing,
            num_subcarriers,
            num_symbols,
        };
        lattice.validate()?;
        Ok(lattice)
    }

    /// T = 100 us, F = 25 kHz, N = 40 subcarriers, M = 20 symbols.
    pub fn paper() -> Self {
        Self {
            symbol_period: 1e-4,
            subcarrier_spacing: 2.5e4,
            num_subcarriers: 40,
            num_symbols: 20,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.symbol_period > 0.0 && self.symbol_period.is_finite()) {
            return Err(invalid(format!(
                "symbol period must be positive, got {}",
                self.symbol_period
            )));
        }
        if !(self.subcarrier_spacing > 0.0 && self.subcarrier_spacing.is_finite()) {
            return Err(invalid(format!(
                "subcarrier spacing must be positive, got {}",
                self.subcarrier_spacing
            )));
        }
        if self.num_subcarriers == 0 || self.num_symbols == 0 {
            return Err(invalid(
                "lattice needs at least one symbol and one subcarrier",
            ));
        }
        if self.time_frequency_product() <= 1.0 {
            return Err(invalid(format!(
                "TF = {} must exceed 1",
                self.time_frequency_product()
            )));
        }
        Ok(())
    }

    pub fn time_frequency_product(&self) -> f64 {
        self.symbol_period * self.subcarrier_spacing
    }

    /// `T / (sqrt(3) F)`, the pulse parameter that puts the six nearest
    /// neighbours of a hexagonal lattice point at equal ambiguity distance.
    pub fn balanced_sigma(&self) -> f64 {
        self.symbol_period / (3f64.sqrt() * self.subcarrier_spacing)
    }

    /// Time and frequency of lattice point `(coset, m, n)`.
    pub fn point(&self, coset: Coset, m: isize, n: isize) -> (f64, f64) {
        let h = coset.half();
        (
            (m as f64 + h) * self.symbol_period,
            (n as f64 + h) * self.subcarrier_spacing,
        )
    }
}

/// The two rectangular cosets of the hexagonal lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coset {
    /// `(mT, nF)`
    First,
    /// `(mT + T/2, nF + F/2)`
    Second,
}

impl Coset {
    pub const BOTH: [Coset; 2] = [Coset::First, Coset::Second];

    pub fn index(self) -> usize {
        match self {
            Coset::First => 0,
            Coset::Second => 1,
        }
    }

    /// Fractional lattice shift of the coset, 0 or 1/2.
    pub fn half(self) -> f64 {
        match self {
            Coset::First => 0.0,
            Coset::Second => 0.5,
        }
    }
}

/// Unit-energy Gaussian `g(t) = (2/sigma)^{1/4} exp(-pi t^2 / sigma)`
/// sampled at `ts` on `len` samples, centred on sample `len / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrototypePulse {
    sigma: f64,
    ts: f64,
    samples: Vec<f64>,
    scale: f64,
}

/// Builds the sampled prototype pulse and normalizes its discrete energy
/// `sum g[k]^2 ts` to one.
pub fn make_gaussian_pulse(sigma: f64, len: usize, ts: f64) -> Result<PrototypePulse> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(invalid(format!("sigma must be positive, got {sigma}")));
    }
    if len == 0 {
        return Err(invalid("pulse length must be at least one sample"));
    }
    if !(ts > 0.0 && ts.is_finite()) {
        return Err(invalid(format!(
            "sampling interval must be positive, got {ts}"
        )));
    }
    let required = 8.0 * (sigma / (2.0 * PI)).sqrt();
    if (len as f64) * ts < required {
        return Err(invalid(format!(
            "pulse support {} s is shorter than 8 sqrt(sigma / 2 pi) = {} s",
            len as f64 * ts,
            required
        )));
    }
    let mut pulse = PrototypePulse {
        sigma,
        ts,
        samples: Vec::new(),
        scale: 1.0,
    };
    let center = len / 2;
    let raw: Vec<f64> = (0..len)
        .map(|k| pulse.eval((k as f64 - center as f64) * ts))
        .collect();
    let energy: f64 = raw.iter().map(|g| g * g).sum::<f64>() * ts;
    if !(energy > 0.0 && energy.is_finite()) {
        return Err(invalid("pulse energy is not normalizable"));
    }
    pulse.scale = energy.sqrt().recip();
    pulse.samples = raw.iter().map(|g| g * pulse.scale).collect();
    Ok(pulse)
}

impl PrototypePulse {
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn ts(&self) -> f64 {
        self.ts
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Index of the sample at `t = 0`.
    pub fn center(&self) -> usize {
        self.samples.len() / 2
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Continuous pulse (with the discrete normalization applied) at time
    /// `t` relative to the pulse centre.
    pub fn eval(&self, t: f64) -> f64 {
        self.scale * (2.0 / self.sigma).powf(0.25) * (-PI * t * t / self.sigma).exp()
    }

    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|g| g * g).sum::<f64>() * self.ts
    }

    /// Receive pulse `g(t - delta_t)` on a window of `len()` samples.
    ///
    /// The window is moved by the whole-sample part of `delta_t` so the
    /// pulse stays centred; returns that sample shift and the envelope.
    pub fn receive_envelope(&self, delta_t: f64) -> (isize, Vec<f64>) {
        let shift = (delta_t / self.ts).round();
        let frac = delta_t - shift * self.ts;
        let center = self.center() as f64;
        let env = (0..self.len())
            .map(|j| self.eval((j as f64 - center) * self.ts - frac))
            .collect();
        (shift as isize, env)
    }
}

/// Symbols of both cosets, each `M x N`, stored row-major in `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolGrid {
    num_symbols: usize,
    num_subcarriers: usize,
    cosets: [Vec<Complex64>; 2],
    /// Average symbol power.
    pub sigma_c2: f64,
}

impl SymbolGrid {
    pub fn zeros(num_symbols: usize, num_subcarriers: usize) -> Self {
        let n = num_symbols * num_subcarriers;
        Self {
            num_symbols,
            num_subcarriers,
            cosets: [vec![Complex64::ZERO; n], vec![Complex64::ZERO; n]],
            sigma_c2: 1.0,
        }
    }

    pub fn for_lattice(lattice: &LatticeParams) -> Self {
        Self::zeros(lattice.num_symbols, lattice.num_subcarriers)
    }

    /// i.i.d. unit-power QPSK symbols `(+-1 +- j) / sqrt(2)`.
    pub fn qpsk<R: Rng + ?Sized>(num_symbols: usize, num_subcarriers: usize, rng: &mut R) -> Self {
        let a = std::f64::consts::FRAC_1_SQRT_2;
        let mut grid = Self::zeros(num_symbols, num_subcarriers);
        for coset in grid.cosets.iter_mut() {
            for c in coset.iter_mut() {
                let bits: u8 = rng.random_range(0..4);
                let re = if bits & 1 == 0 { a } else { -a };
                let im = if bits & 2 == 0 { a } else { -a };
                *c = Complex64::new(re, im);
            }
        }
        grid
    }

    /// Circularly symmetric complex Gaussian symbols of power `sigma_c2`.
    pub fn gaussian<R: Rng + ?Sized>(
        num_symbols: usize,
        num_subcarriers: usize,
        sigma_c2: f64,
        rng: &mut R,
    ) -> Self {
        use rand_distr::{Distribution, StandardNormal};
        let s = (sigma_c2 / 2.0).sqrt();
        let mut grid = Self::zeros(num_symbols, num_subcarriers);
        grid.sigma_c2 = sigma_c2;
        for coset in grid.cosets.iter_mut() {
            for c in coset.iter_mut() {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                *c = Complex64::new(s * re, s * im);
            }
        }
        grid
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.num_symbols, self.num_subcarriers)
    }

    pub fn get(&self, coset: Coset, m: usize, n: usize) -> Complex64 {
        self.cosets[coset.index()][m * self.num_subcarriers + n]
    }

    pub fn set(&mut self, coset: Coset, m: usize, n: usize, value: Complex64) {
        self.cosets[coset.index()][m * self.num_subcarriers + n] = value;
    }

    pub fn coset(&self, coset: Coset) -> &[Complex64] {
        &self.cosets[coset.index()]
    }

    pub fn coset_mut(&mut self, coset: Coset) -> &mut [Complex64] {
        &mut self.cosets[coset.index()]
    }

    fn check_same_dims(&self, other: &SymbolGrid) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch(format!(
                "grid {:?} vs {:?}",
                self.dims(),
                other.dims()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &SymbolGrid) -> Result<SymbolGrid> {
        self.check_same_dims(other)?;
        let mut out = self.clone();
        for c in Coset::BOTH {
            for (a, b) in out.coset_mut(c).iter_mut().zip(other.coset(c)) {
                *a += b;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, factor: Complex64) -> SymbolGrid {
        let mut out = self.clone();
        for c in Coset::BOTH {
            for a in out.coset_mut(c) {
                *a *= factor;
            }
        }
        out
    }

    /// Lattice points at least `margin` symbols and subcarriers away from
    /// every grid edge, in (coset, m, n) order.
    pub fn interior(&self, margin: usize) -> impl Iterator<Item = (Coset, usize, usize)> + '_ {
        let (nm, nn) = self.dims();
        let ms = margin..nm.saturating_sub(margin);
        Coset::BOTH.into_iter().flat_map(move |c| {
            let ms = ms.clone();
            ms.flat_map(move |m| (margin..nn.saturating_sub(margin)).map(move |n| (c, m, n)))
        })
    }
}

/// Complex baseband samples; sample `k` is taken at `t0 + k ts`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasebandSignal {
    pub samples: Vec<Complex64>,
    pub ts: f64,
    pub t0: f64,
}

impl BasebandSignal {
    pub fn zeros(len: usize, ts: f64, t0: f64) -> Self {
        Self {
            samples: vec![Complex64::ZERO; len],
            ts,
            t0,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.ts
    }

    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 * self.ts
    }

    /// `sum |x[k]|^2 ts`
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|x| x.norm_sqr()).sum::<f64>() * self.ts
    }

    /// Appends `extra` zero samples.
    pub fn padded(mut self, extra: usize) -> Self {
        self.samples
            .resize(self.samples.len() + extra, Complex64::ZERO);
        self
    }

    /// Index of the sample at `t = 0`, which must lie on the sample grid.
    pub(crate) fn origin_index(&self) -> Result<isize> {
        let i0 = -self.t0 / self.ts;
        let r = i0.round();
        if (i0 - r).abs() > 1e-6 {
            return Err(Error::DimensionMismatch(format!(
                "signal start {} s is not on the {} s sample grid",
                self.t0, self.ts
            )));
        }
        Ok(r as isize)
    }
}

/// Sample index (relative to the lattice origin) of the centre of the pulse
/// carrying lattice point `(coset, m, *)`.
pub(crate) fn point_offset(lattice: &LatticeParams, coset: Coset, m: usize, ts: f64) -> isize {
    ((m as f64 + coset.half()) * lattice.symbol_period / ts).round() as isize
}

/// Number of samples needed to hold a modulated frame.
pub fn frame_len(lattice: &LatticeParams, pulse: &PrototypePulse) -> usize {
    let last = point_offset(lattice, Coset::Second, lattice.num_symbols - 1, pulse.ts()) as usize;
    last + pulse.len()
}

fn check_grid(grid: &SymbolGrid, lattice: &LatticeParams) -> Result<()> {
    if grid.dims() != (lattice.num_symbols, lattice.num_subcarriers) {
        return Err(Error::DimensionMismatch(format!(
            "symbol grid is {:?} but lattice is {}x{}",
            grid.dims(),
            lattice.num_symbols,
            lattice.num_subcarriers
        )));
    }
    Ok(())
}

/// Discrete evaluation of the hexagonal multicarrier signal.
///
/// The output starts `pulse.center()` samples before the lattice origin and
/// ends with the last sample of the last pulse.
pub fn modulate(
    grid: &SymbolGrid,
    lattice: &LatticeParams,
    pulse: &PrototypePulse,
) -> Result<BasebandSignal> {
    lattice.validate()?;
    check_grid(grid, lattice)?;
    let ts = pulse.ts();
    let center = pulse.center();
    let mut out = BasebandSignal::zeros(frame_len(lattice, pulse), ts, -(center as f64) * ts);
    let f = lattice.subcarrier_spacing;
    let nsub = lattice.num_subcarriers;

    for coset in Coset::BOTH {
        let half_f = coset.half() * f;
        for m in 0..lattice.num_symbols {
            let row = &grid.coset(coset)[m * nsub..(m + 1) * nsub];
            if row.iter().all(|c| *c == Complex64::ZERO) {
                continue;
            }
            let start = point_offset(lattice, coset, m, ts) as usize;
            for (j, &g) in pulse.samples().iter().enumerate() {
                let k = start + j;
                let t = out.time(k);
                let z = Complex64::cis(2.0 * PI * f * t);
                // Horner evaluation of sum_n c_n z^n
                let poly = row
                    .iter()
                    .rev()
                    .fold(Complex64::ZERO, |acc, &c| acc * z + c);
                out.samples[k] += poly * Complex64::cis(2.0 * PI * half_f * t) * g;
            }
        }
    }
    Ok(out)
}

/// Projects `received` onto the receive pulses `g(t - delta_t)` placed on
/// every lattice point of both cosets.
pub fn project(
    received: &BasebandSignal,
    lattice: &LatticeParams,
    pulse: &PrototypePulse,
    delta_t: f64,
) -> Result<SymbolGrid> {
    lattice.validate()?;
    if ((received.ts - pulse.ts()) / pulse.ts()).abs() > 1e-9 {
        return Err(Error::DimensionMismatch(format!(
            "signal sampled at {} s but pulse at {} s",
            received.ts,
            pulse.ts()
        )));
    }
    let ts = pulse.ts();
    let origin = received.origin_index()?;
    let (shift, env) = pulse.receive_envelope(delta_t);
    let center = pulse.center() as isize;
    let f = lattice.subcarrier_spacing;
    let nsub = lattice.num_subcarriers;
    let mut out = SymbolGrid::for_lattice(lattice);
    let mut acc = vec![Complex64::ZERO; nsub];

    for coset in Coset::BOTH {
        let half_f = coset.half() * f;
        for m in 0..lattice.num_symbols {
            let k0 = origin + point_offset(lattice, coset, m, ts) + shift - center;
            if k0 < 0 || k0 as usize + env.len() > received.len() {
                return Err(Error::InsufficientSpan(format!(
                    "receive window [{}, {}) for symbol {m} lies outside the {} received samples",
                    k0,
                    k0 + env.len() as isize,
                    received.len()
                )));
            }
            acc.iter_mut().for_each(|a| *a = Complex64::ZERO);
            for (j, &psi) in env.iter().enumerate() {
                let k = k0 as usize + j;
                let t = received.time(k);
                let mut w = received.samples[k] * psi * Complex64::cis(-2.0 * PI * half_f * t);
                let z = Complex64::cis(-2.0 * PI * f * t);
                for a in acc.iter_mut() {
                    *a += w;
                    w *= z;
                }
            }
            let row = &mut out.coset_mut(coset)[m * nsub..(m + 1) * nsub];
            for (dst, a) in row.iter_mut().zip(&acc) {
                *dst = a * ts;
            }
        }
    }
    Ok(out)
}

/// Closed-form cross-ambiguity between the transmit pulse displaced by
/// delay `tau` and Doppler `nu` and the receive pulse `g(t - delta_t)`:
///
/// `A(tau, nu) = integral g(t - tau) g(t - delta_t) exp(-j 2 pi nu t) dt`
/// `           = exp(-pi (tau - delta_t)^2 / (2 sigma)) exp(-pi sigma nu^2 / 2) exp(-j pi nu (tau + delta_t))`
///
/// so `|A|^2 = exp(-pi ((tau - delta_t)^2 / sigma + sigma nu^2))`. With
/// `delta_t = 0` this is the auto-ambiguity of `g`.
pub fn gaussian_cross_ambiguity(sigma: f64, delta_t: f64, tau: f64, nu: f64) -> Complex64 {
    let d = tau - delta_t;
    let mag = (-PI * d * d / (2.0 * sigma) - PI * sigma * nu * nu / 2.0).exp();
    Complex64::from_polar(mag, -PI * nu * (tau + delta_t))
}

/// Closed-form `<g_j, psi_i>` between the transmit pulse at lattice point
/// `(t_j, f_j)` and the receive pulse at `(t_i, f_i)`.
pub fn lattice_inner_product(
    sigma: f64,
    delta_t: f64,
    (t_j, f_j): (f64, f64),
    (t_i, f_i): (f64, f64),
) -> Complex64 {
    let df = f_j - f_i;
    Complex64::cis(2.0 * PI * df * t_i) * gaussian_cross_ambiguity(sigma, delta_t, t_j - t_i, -df)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn paper_pulse() -> PrototypePulse {
        let lattice = LatticeParams::paper();
        make_gaussian_pulse(lattice.balanced_sigma(), 600, 1e-6).unwrap()
    }

    #[test]
    fn paper_sigma_value() {
        let s = LatticeParams::paper().balanced_sigma();
        assert!((s - 2.3094e-9).abs() < 1e-13, "{s}");
    }

    #[test]
    fn pulse_has_unit_energy_and_is_symmetric() {
        let p = paper_pulse();
        assert!((p.energy() - 1.0).abs() < 1e-12);
        let c = p.center();
        let g = p.samples();
        for k in 1..c {
            assert_eq!(g[c + k], g[c - k]);
        }
        assert!(g[c] > g[c + 1]);
    }

    #[test]
    fn pulse_rejects_bad_inputs() {
        assert!(make_gaussian_pulse(0.0, 600, 1e-6).is_err());
        assert!(make_gaussian_pulse(-1e-9, 600, 1e-6).is_err());
        assert!(make_gaussian_pulse(2.3e-9, 0, 1e-6).is_err());
        assert!(make_gaussian_pulse(2.3e-9, 600, 0.0).is_err());
        // 8 sqrt(sigma / 2 pi) is about 153 samples here
        assert!(make_gaussian_pulse(2.3094e-9, 100, 1e-6).is_err());
        assert!(make_gaussian_pulse(2.3094e-9, 160, 1e-6).is_ok());
    }

    #[test]
    fn lattice_validation() {
        assert!(LatticeParams::new(1e-4, 2.5e4, 40, 20).is_ok());
        assert!(LatticeParams::new(1e-4, 1e4, 40, 20).is_err());
        assert!(LatticeParams::new(0.0, 2.5e4, 40, 20).is_err());
        assert!(LatticeParams::new(1e-4, 2.5e4, 0, 20).is_err());
    }

    #[test]
    fn ambiguity_at_origin_is_one() {
        let a = gaussian_cross_ambiguity(2.3094e-9, 0.0, 0.0, 0.0);
        assert!((a - Complex64::ONE).norm() < 1e-15);
    }

    #[test]
    fn single_first_coset_symbol_reproduces_pulse() {
        let lattice = LatticeParams::paper();
        let pulse = paper_pulse();
        let mut grid = SymbolGrid::for_lattice(&lattice);
        grid.set(Coset::First, 0, 0, Complex64::ONE);
        let x = modulate(&grid, &lattice, &pulse).unwrap();
        for (k, &g) in pulse.samples().iter().enumerate() {
            assert!((x.samples[k] - g).norm() < 1e-15);
        }
        assert!(x.samples[pulse.len()..].iter().all(|s| s.norm() == 0.0));
    }

    #[test]
    fn single_second_coset_symbol_is_shifted_and_modulated() {
        let lattice = LatticeParams::paper();
        let pulse = paper_pulse();
        let mut grid = SymbolGrid::for_lattice(&lattice);
        grid.set(Coset::Second, 0, 0, Complex64::ONE);
        let x = modulate(&grid, &lattice, &pulse).unwrap();
        let shift = 50;
        for (j, &g) in pulse.samples().iter().enumerate() {
            let k = j + shift;
            let want = Complex64::cis(2.0 * PI * 0.5 * lattice.subcarrier_spacing * x.time(k)) * g;
            assert!((x.samples[k] - want).norm() < 1e-12);
        }
        assert!(x.samples[..shift].iter().all(|s| s.norm() == 0.0));
    }

    #[test]
    fn modulation_is_linear() {
        let lattice = LatticeParams::paper();
        let pulse = paper_pulse();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = SymbolGrid::gaussian(20, 40, 1.0, &mut rng);
        let b = SymbolGrid::gaussian(20, 40, 1.0, &mut rng);
        let xa = modulate(&a, &lattice, &pulse).unwrap();
        let xb = modulate(&b, &lattice, &pulse).unwrap();
        let xab = modulate(&a.add(&b).unwrap(), &lattice, &pulse).unwrap();
        let err = xab
            .samples
            .iter()
            .zip(xa.samples.iter().zip(&xb.samples))
            .map(|(s, (p, q))| (s - p - q).norm())
            .fold(0.0, f64::max);
        let peak = xab.samples.iter().map(|s| s.norm()).fold(0.0, f64::max);
        assert!(err <= 1e-12 * peak, "{err} vs peak {peak}");
    }

    #[test]
    fn modulate_rejects_mismatched_grid() {
        let lattice = LatticeParams::paper();
        let grid = SymbolGrid::zeros(3, 4);
        assert!(matches!(
            modulate(&grid, &lattice, &paper_pulse()),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn matched_projection_of_single_symbol() {
        let lattice = LatticeParams::paper();
        let pulse = paper_pulse();
        let sigma = pulse.sigma();
        let mut grid = SymbolGrid::for_lattice(&lattice);
        grid.set(Coset::First, 0, 0, Complex64::ONE);
        let x = modulate(&grid, &lattice, &pulse).unwrap().padded(200);

        let est = project(&x, &lattice, &pulse, 0.0).unwrap();
        assert!((est.get(Coset::First, 0, 0) - Complex64::ONE).norm() < 1e-6);
        let t = lattice.symbol_period;
        let want = (-PI * t * t / (2.0 * sigma)).exp();
        assert!((est.get(Coset::First, 1, 0).norm() - want).abs() < 1e-6);

        let d = 7.3e-6;
        let est = project(&x, &lattice, &pulse, d).unwrap();
        let want = (-PI * d * d / (2.0 * sigma)).exp();
        assert!((est.get(Coset::First, 0, 0).norm() - want).abs() < 1e-6);
    }

    #[test]
    fn projection_needs_span() {
        let lattice = LatticeParams::paper();
        let pulse = paper_pulse();
        let grid = SymbolGrid::for_lattice(&lattice);
        let x = modulate(&grid, &lattice, &pulse).unwrap();
        // the last coset-2 window runs past the frame once shifted
        assert!(matches!(
            project(&x, &lattice, &pulse, 2e-5),
            Err(Error::InsufficientSpan(_))
        ));
        assert!(project(&x.padded(20), &lattice, &pulse, 2e-5).is_ok());
    }

    #[test]
    fn interior_points() {
        let grid = SymbolGrid::zeros(20, 40);
        let pts: Vec<_> = grid.interior(2).collect();
        assert_eq!(pts.len(), 2 * 16 * 36);
        assert!(pts
            .iter()
            .all(|&(_, m, n)| (2..18).contains(&m) && (2..38).contains(&n)));
    }
}
