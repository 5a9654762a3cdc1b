use std::f64::consts::PI;

use hmct::waveform::{
    gaussian_cross_ambiguity, lattice_inner_product, make_gaussian_pulse, modulate, project,
    BasebandSignal, Coset, LatticeParams, SymbolGrid,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SIGMA: f64 = 2.309_401_076_758_503e-9;

/// Trapezoidal evaluation of `integral g(t - tau) g(t - dt) exp(-j 2 pi nu t) dt`
/// with the continuous unit-energy Gaussian.
fn ambiguity_by_trapezoid(sigma: f64, dt: f64, tau: f64, nu: f64, points: usize) -> Complex64 {
    let g = |t: f64| (2.0 / sigma).powf(0.25) * (-PI * t * t / sigma).exp();
    let centre = 0.5 * (tau + dt);
    let half = 0.5 * (tau - dt).abs() + 12.0 * sigma.sqrt();
    let (a, b) = (centre - half, centre + half);
    let h = (b - a) / (points - 1) as f64;
    let mut acc = Complex64::ZERO;
    for k in 0..points {
        let t = a + k as f64 * h;
        let w = if k == 0 || k == points - 1 { 0.5 } else { 1.0 };
        acc += w * g(t - tau) * g(t - dt) * Complex64::cis(-2.0 * PI * nu * t);
    }
    acc * h
}

#[test]
fn ambiguity_at_one_pulse_width() {
    let a = gaussian_cross_ambiguity(SIGMA, 0.0, SIGMA.sqrt(), 0.0);
    assert!((a.norm() - (-PI / 2.0).exp()).abs() < 1e-12);
    let num = ambiguity_by_trapezoid(SIGMA, 0.0, SIGMA.sqrt(), 0.0, 100_001);
    assert!((num - a).norm() <= 1e-6, "{num} vs {a}");
    assert!((a.norm() - 0.20788).abs() < 1e-5);
}

#[test]
fn ambiguity_matches_defining_integral() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let s = SIGMA.sqrt();
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let dt = rng.random_range(0.0..0.5 * s);
        let tau = rng.random_range(-2.0 * s..2.0 * s);
        let nu = rng.random_range(-2.0 / s..2.0 / s);
        let closed = gaussian_cross_ambiguity(SIGMA, dt, tau, nu);
        let num = ambiguity_by_trapezoid(SIGMA, dt, tau, nu, 100_001);
        worst = worst.max((closed - num).norm());
    }
    assert!(worst <= 1e-6, "max abs error {worst}");
}

fn small_setup() -> (LatticeParams, hmct::waveform::PrototypePulse) {
    let lattice = LatticeParams::new(1e-4, 2.5e4, 4, 4).unwrap();
    let pulse = make_gaussian_pulse(SIGMA, 600, 1e-6).unwrap();
    (lattice, pulse)
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

#[test]
fn projection_is_adjoint_of_modulation() {
    let (lattice, pulse) = small_setup();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        let c = SymbolGrid::gaussian(4, 4, 1.0, &mut rng);
        let x = modulate(&c, &lattice, &pulse).unwrap();
        let mut y = BasebandSignal::zeros(x.len(), x.ts, x.t0);
        for v in &mut y.samples {
            *v = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
        let lhs = inner(&x.samples, &y.samples) * x.ts;
        let py = project(&y, &lattice, &pulse, 0.0).unwrap();
        let rhs: Complex64 = Coset::BOTH
            .iter()
            .map(|&k| inner(c.coset(k), py.coset(k)))
            .sum();
        assert!(
            (lhs - rhs).norm() <= 1e-10 * lhs.norm().max(1.0),
            "{lhs} vs {rhs}"
        );
    }
}

#[test]
fn ideal_channel_responses_follow_closed_form() {
    let (lattice, pulse) = small_setup();
    for dt in [0.0, 6e-6] {
        for (cj, mj, nj) in [(Coset::First, 1usize, 1usize), (Coset::Second, 2, 0)] {
            let mut c = SymbolGrid::for_lattice(&lattice);
            c.set(cj, mj, nj, Complex64::ONE);
            let x = modulate(&c, &lattice, &pulse).unwrap().padded(64);
            let rx = project(&x, &lattice, &pulse, dt).unwrap();
            let pj = lattice.point(cj, mj as isize, nj as isize);
            for ci in Coset::BOTH {
                for m in 0..4 {
                    for n in 0..4 {
                        let pi = lattice.point(ci, m as isize, n as isize);
                        let want = lattice_inner_product(SIGMA, dt, pj, pi);
                        let got = rx.get(ci, m, n);
                        assert!(
                            (got - want).norm() < 1e-9,
                            "dt={dt} {ci:?} ({m},{n}): {got} vs {want}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn qpsk_symbols_are_unit_power_and_zero_mean() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let grid = SymbolGrid::qpsk(100, 64, &mut rng);
    let all: Vec<Complex64> = Coset::BOTH
        .iter()
        .flat_map(|&c| grid.coset(c).to_vec())
        .collect();
    let n = all.len() as f64;
    assert!(n >= 1e4);
    let mean: Complex64 = all.iter().sum::<Complex64>() / n;
    let power = all.iter().map(|c| c.norm_sqr()).sum::<f64>() / n;
    // component variance 1/2 per axis
    let three_sigma = 3.0 * (0.5 / n).sqrt();
    assert!(
        mean.re.abs() < three_sigma && mean.im.abs() < three_sigma,
        "{mean}"
    );
    assert!((power - 1.0).abs() < 1e-12);

    let g = SymbolGrid::gaussian(100, 64, 2.0, &mut rng);
    let p = Coset::BOTH
        .iter()
        .flat_map(|&c| g.coset(c).iter().map(|v| v.norm_sqr()).collect::<Vec<_>>())
        .sum::<f64>()
        / n;
    // |c|^2 is exponential with mean 2 and standard deviation 2
    assert!((p - 2.0).abs() < 3.0 * 2.0 / n.sqrt(), "{p}");
}
