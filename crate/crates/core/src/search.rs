//! Scalar bracketing searches: uniform-grid scan, golden-section refinement
//! and bisection root finding. These back the qubit-bound minimization and
//! the critical-angle solve, and serve as independent oracles in tests.

const INV_GOLDEN: f64 = 0.618_033_988_749_894_9; // (sqrt(5) - 1) / 2

/// Minimum of `f` over the closed interval `[a, b]` by golden-section search.
/// Returns `(x_min, f(x_min))` once the bracket is narrower than `tol`.
/// Requires a unimodal `f` on the bracket for a guaranteed result; on
/// multimodal input it converges to some local minimum inside the bracket.
pub fn golden_section_min<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    assert!(a <= b && tol > 0.0);
    let mut lo = a;
    let mut hi = b;
    let mut x1 = hi - INV_GOLDEN * (hi - lo);
    let mut x2 = lo + INV_GOLDEN * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_GOLDEN * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_GOLDEN * (hi - lo);
            f2 = f(x2);
        }
    }
    // include the endpoints so boundary minima are not missed
    let candidates = [(lo, f(lo)), (x1, f1), (x2, f2), (hi, f(hi))];
    candidates
        .into_iter()
        .min_by(|p, q| p.1.total_cmp(&q.1))
        .unwrap()
}

/// Minimum of `f` over `n + 1` uniform samples of `[a, b]`.
pub fn grid_min<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> (f64, f64) {
    assert!(n >= 1 && a <= b);
    let step = (b - a) / n as f64;
    let mut best = (a, f(a));
    for k in 1..=n {
        let x = a + step * k as f64;
        let y = f(x);
        if y < best.1 {
            best = (x, y);
        }
    }
    best
}

/// Uniform grid scan followed by golden-section refinement of the cell
/// around the best grid point. `tol` bounds the final bracket width.
pub fn grid_refine_min<F: Fn(f64) -> f64 + Copy>(
    f: F,
    a: f64,
    b: f64,
    n: usize,
    tol: f64,
) -> (f64, f64) {
    let (x0, _) = grid_min(f, a, b, n);
    let step = (b - a) / n as f64;
    golden_section_min(f, (x0 - step).max(a), (x0 + step).min(b), tol)
}

/// Maximum variants of the same searches.
pub fn grid_refine_max<F: Fn(f64) -> f64 + Copy>(
    f: F,
    a: f64,
    b: f64,
    n: usize,
    tol: f64,
) -> (f64, f64) {
    let (x, neg) = grid_refine_min(move |t| -f(t), a, b, n, tol);
    (x, -neg)
}

/// Root of `f` on `[a, b]` by bisection. Panics unless `f(a)` and `f(b)`
/// have opposite signs; the bracket is halved until narrower than `tol` or
/// `max_iterations` is reached.
pub fn bisect_root<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_iterations: usize,
) -> f64 {
    let (mut lo, mut hi) = (a, b);
    let mut flo = f(lo);
    let fhi = f(hi);
    assert!(
        flo * fhi < 0.0,
        "bisect_root: no sign change on [{lo}, {hi}] (f = {flo}, {fhi})"
    );
    for _ in 0..max_iterations {
        if hi - lo < tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fmid = f(mid);
        if fmid == 0.0 {
            return mid;
        }
        if flo * fmid < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    0.5 * (lo + hi)
}
