//! One-dimensional quadrature: adaptive Simpson with error control and
//! fixed-order Gauss–Legendre panels.
//!
//! Adaptive Simpson is used where integrands have mild endpoint behaviour
//! after a softening substitution (radial ODE barriers, capacity potentials
//! in time). Fixed Gauss–Legendre panels are used where an integral must be
//! a *smooth* function of its limits, so that finite differences of the
//! result stay clean.

use crate::error::{Error, Result};
use std::sync::OnceLock;

/// Adaptive Simpson quadrature of `f` on `[a, b]` to absolute tolerance `tol`.
///
/// The first few levels subdivide unconditionally, so integrands
/// concentrated far from the interval midpoints cannot fool the error
/// estimate into accepting zero.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 48, 6)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    force: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    // an interval at ULP scale cannot be refined further; its contribution
    // is below f64 resolution anyway
    let at_ulp = (b - a).abs() <= 8.0 * f64::EPSILON * a.abs().max(b.abs()).max(1e-30);
    if (force == 0 && delta.abs() <= 15.0 * tol) || at_ulp {
        if !delta.is_finite() {
            return Err(Error::QuadratureNonconvergence(format!(
                "non-finite integrand near [{a}, {b}]"
            )));
        }
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::QuadratureNonconvergence(format!(
            "max bisection depth reached on [{a}, {b}]"
        )));
    }
    let next_force = force.saturating_sub(1);
    let lv = simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, next_force)?;
    let rv = simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, next_force)?;
    Ok(lv + rv)
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on [-1, 1].
///
/// Computed once by Newton iteration on the Legendre polynomial and cached;
/// only a handful of orders are ever requested.
pub fn gauss_legendre(n: usize) -> &'static (Vec<f64>, Vec<f64>) {
    type NodeTable = Vec<(usize, (Vec<f64>, Vec<f64>))>;
    static CACHE: OnceLock<NodeTable> = OnceLock::new();
    let cache = CACHE.get_or_init(|| {
        [16usize, 24, 32, 64]
            .iter()
            .map(|&m| (m, legendre_nodes(m)))
            .collect()
    });
    cache
        .iter()
        .find(|(m, _)| *m == n)
        .map(|(_, nw)| nw)
        .unwrap_or_else(|| panic!("unsupported Gauss-Legendre order {n}"))
}

fn legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Chebyshev-based starting guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_eval(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_eval(n, x);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn legendre_eval(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Fixed Gauss–Legendre integration of `f` over `[a, b]` with `panels`
/// equal panels of order `order`. Deterministic node placement relative to
/// the interval, so the result is smooth in `a` and `b`.
pub fn gauss_panels<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, order: usize, panels: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(order);
    let mut total = 0.0;
    let width = (b - a) / panels as f64;
    for p in 0..panels {
        let lo = a + p as f64 * width;
        let mid = lo + 0.5 * width;
        let half = 0.5 * width;
        let mut acc = 0.0;
        for (x, w) in nodes.iter().zip(weights) {
            acc += w * f(mid + half * x);
        }
        total += acc * half;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_polynomial_is_exact() {
        let v = adaptive_simpson(&|x: f64| x * x * x - 2.0 * x, 0.0, 2.0, 1e-12).unwrap();
        assert!((v - 0.0).abs() < 1e-10, "got {v}");
    }

    #[test]
    fn simpson_handles_gaussian() {
        let v = adaptive_simpson(&|x: f64| (-x * x).exp(), -8.0, 8.0, 1e-12).unwrap();
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn gauss_legendre_weights_sum_to_two() {
        for n in [16, 24, 32, 64] {
            let (_, w) = gauss_legendre(n);
            let s: f64 = w.iter().sum();
            assert!((s - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn gauss_panels_matches_simpson() {
        let f = |x: f64| (3.0 * x).sin() + x.exp();
        let a = adaptive_simpson(&f, 0.0, 1.5, 1e-12).unwrap();
        let b = gauss_panels(&f, 0.0, 1.5, 32, 2);
        assert!((a - b).abs() < 1e-11);
    }
}
