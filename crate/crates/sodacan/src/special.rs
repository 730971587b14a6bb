//! Small special-function kit: unit ball volumes, erf, a scaled modified
//! Bessel function, and the regularized incomplete gamma at half-integer
//! order. Everything the heat-kernel machinery needs, nothing more.

use std::f64::consts::PI;

/// Volume of the unit ball in R^n.
pub fn unit_ball_volume(n: usize) -> f64 {
    // ω_0 = 1, ω_1 = 2, ω_n = ω_{n-2} · 2π/n
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(n - 2) * 2.0 * PI / n as f64,
    }
}

/// Surface area of the unit sphere S^{n-1} in R^n.
pub fn unit_sphere_area(n: usize) -> f64 {
    n as f64 * unit_ball_volume(n)
}

/// Error function, Abramowitz–Stegun 7.1.26 (|error| < 1.5e-7).
pub fn erf(x: f64) -> f64 {
    let sign = if x < 0.0 { -1.0 } else { 1.0 };
    let x = x.abs();
    let t = 1.0 / (1.0 + 0.3275911 * x);
    let poly = t
        * (0.254829592
            + t * (-0.284496736 + t * (1.421413741 + t * (-1.453152027 + t * 1.061405429))));
    sign * (1.0 - poly * (-x * x).exp())
}

/// e^{-z} I₀(z) for z ≥ 0 (Abramowitz–Stegun 9.8.1–9.8.2).
pub fn bessel_i0_scaled(z: f64) -> f64 {
    debug_assert!(z >= 0.0);
    if z < 3.75 {
        let t = z / 3.75;
        let t2 = t * t;
        let i0 = 1.0
            + t2 * (3.5156229
                + t2 * (3.0899424 + t2 * (1.2067492 + t2 * (0.2659732 + t2 * (0.0360768 + t2 * 0.0045813)))));
        i0 * (-z).exp()
    } else {
        let t = 3.75 / z;
        let poly = 0.39894228
            + t * (0.01328592
                + t * (0.00225319
                    + t * (-0.00157565
                        + t * (0.00916281
                            + t * (-0.02057706
                                + t * (0.02635537 + t * (-0.01647633 + t * 0.00392377)))))));
        poly / z.sqrt()
    }
}

/// Regularized lower incomplete gamma P(n/2, x), i.e. the Gaussian mass
/// ∫_{B(0,r)} (4πσ)^{-n/2} e^{-|y|²/4σ} dy with x = r²/(4σ).
///
/// Built from P(1, x) = 1 - e^{-x} and P(1/2, x) = erf(√x) by the downward
/// identity P(a+1, x) = P(a, x) - x^a e^{-x}/Γ(a+1).
pub fn gamma_p_half(n: usize, x: f64) -> f64 {
    debug_assert!(n >= 1);
    if x <= 0.0 {
        return 0.0;
    }
    if !x.is_finite() || x > 700.0 {
        // the tail corrections are below f64 resolution
        return 1.0;
    }
    let (mut a, mut p) = if n.is_multiple_of(2) {
        (1.0, -(-x).exp_m1())
    } else {
        (0.5, erf(x.sqrt()))
    };
    let mut log_gamma_a1 = if n.is_multiple_of(2) {
        0.0 // ln Γ(2) = 0
    } else {
        0.5 * PI.ln() - std::f64::consts::LN_2 // ln Γ(3/2) = ln(√π/2)
    };
    while 2.0 * a + 0.5 < n as f64 {
        p -= (a * x.ln() - x - log_gamma_a1).exp();
        log_gamma_a1 += (a + 1.0).ln();
        a += 1.0;
    }
    p.clamp(0.0, 1.0)
}
