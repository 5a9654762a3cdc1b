//! Derivative-free scalar maximization: a bracketing grid followed by
//! golden-section refinement.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a maximum of `f` on `[lo, hi]`; stops when the
/// bracket is narrower than `tol`. Returns the best evaluated point.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iters = 0;
    while (b - a) > tol && iters < 500 {
        // ties move towards the lower end so the smaller abscissa wins
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        iters += 1;
    }
    let candidates = [(a, f(a)), (c, fc), (d, fd), (b, f(b))];
    let mut best = candidates[0];
    for &(x, v) in &candidates[1..] {
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

/// Result of [`grid_golden_max`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
    /// The bracketing grid showed more than one local maximum whose values
    /// differ by more than the relative tolerance.
    pub multimodal: bool,
}

/// Evaluates `f` on `points` equispaced abscissae over `[lo, hi]`, takes the
/// best grid point (smallest abscissa among values equal within `tie_rel`)
/// and refines it with golden-section search inside its neighbouring cells.
pub fn grid_golden_max<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    points: usize,
    tol: f64,
    tie_rel: f64,
) -> Maximum {
    let points = points.max(3);
    let step = (hi - lo) / (points - 1) as f64;
    let xs: Vec<f64> = (0..points).map(|i| lo + step * i as f64).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();

    let vmax = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let best = vals
        .iter()
        .position(|&v| v >= vmax - tie_rel * vmax.abs())
        .unwrap_or(0);

    let local_max: Vec<f64> = (0..points)
        .filter(|&i| {
            let left = i == 0 || vals[i] > vals[i - 1];
            let right = i + 1 == points || vals[i] >= vals[i + 1];
            left && right
        })
        .map(|i| vals[i])
        .collect();
    let multimodal =
        local_max.len() > 1 && local_max.iter().any(|&v| (vmax - v) > 1e-6 * vmax.abs());

    let a = xs[best.saturating_sub(1)];
    let b = xs[(best + 1).min(points - 1)];
    let (x, value) = golden_section_max(&f, a, b, tol);
    if value >= vals[best] {
        Maximum {
            x,
            value,
            multimodal,
        }
    } else {
        Maximum {
            x: xs[best],
            value: vals[best],
            multimodal,
        }
    }
}
