//! Small quadrature helpers shared by the law and body code.

use gauss_quad::legendre::GaussLegendre;
use std::sync::OnceLock;

fn rule(n: usize) -> &'static GaussLegendre {
    static R16: OnceLock<GaussLegendre> = OnceLock::new();
    static R32: OnceLock<GaussLegendre> = OnceLock::new();
    static R64: OnceLock<GaussLegendre> = OnceLock::new();
    let (cell, deg) = match n {
        0..=16 => (&R16, 16),
        17..=32 => (&R32, 32),
        _ => (&R64, 64),
    };
    cell.get_or_init(|| GaussLegendre::new(deg.try_into().unwrap()))
}

/// Gauss-Legendre nodes and weights on `[a, b]` (degree 16, 32 or 64).
pub fn gl_nodes(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    rule(n)
        .as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (mid + half * x, half * w))
        .collect()
}

/// Composite 64-point Gauss-Legendre on `panels` equal subintervals of `[a, b]`.
pub fn gl_composite(panels: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let h = (b - a) / panels as f64;
    (0..panels).flat_map(|k| gl_nodes(64, a + k as f64 * h, a + (k + 1) as f64 * h)).collect()
}

/// Fixed-order Gauss-Legendre over each piece between consecutive `knots`.
pub fn gl_piecewise(knots: &[f64], n: usize, mut f: impl FnMut(f64) -> f64) -> f64 {
    let mut total = 0.0;
    for w in knots.windows(2) {
        if w[1] > w[0] {
            total += rule(n).integrate(w[0], w[1], &mut f);
        }
    }
    total
}

/// Tanh-sinh quadrature over each piece; tolerates endpoint singularities.
pub fn de_piecewise(knots: &[f64], tol: f64, f: impl Fn(f64) -> f64) -> f64 {
    let mut total = 0.0;
    for w in knots.windows(2) {
        if w[1] > w[0] {
            total += quadrature::double_exponential::integrate(&f, w[0], w[1], tol).integral;
        }
    }
    total
}

/// Bisection for the root of a monotone function on `[lo, hi]`, run until the
/// bracket cannot be split further in floating point.
pub fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    let lo_positive = flo > 0.0;
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        if v == 0.0 {
            return mid;
        }
        if (v > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
