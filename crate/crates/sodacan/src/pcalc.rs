//! Closed-form radial p-parabolic calculus and an independent
//! finite-difference residual oracle.
//!
//! Every candidate function in this crate is radial in x, so the operator
//! reduces to the polar form
//!
//! ```text
//! Δₚu = |u'|^{p-2} ( (p-1) u'' + u' (n-1)/r ),
//! ```
//!
//! and the residual convention throughout is `∂ₜu - Δₚu`, so that a
//! supersolution has nonnegative residual. The oracle differentiates only
//! the raw evaluation closure, never the stored closed-form derivatives, so
//! it independently checks every closed-form claim.

use crate::error::{Error, Result};
use std::sync::Arc;

type EvalFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// An evaluable radial space-time function, optionally with closed-form
/// derivatives. `eval(r, t)` is the value at |x| = r.
#[derive(Clone)]
pub struct CandidateFunction {
    label: String,
    eval: EvalFn,
    dr: Option<EvalFn>,
    drr: Option<EvalFn>,
    dt: Option<EvalFn>,
    /// Sign flags the active branch of a pasted candidate; the function is
    /// only Lipschitz where the sign changes, so stencils must not straddle
    /// such a crossing.
    branch: Option<EvalFn>,
}

impl std::fmt::Debug for CandidateFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CandidateFunction")
            .field("label", &self.label)
            .field("dr", &self.dr.is_some())
            .field("drr", &self.drr.is_some())
            .field("dt", &self.dt.is_some())
            .finish()
    }
}

impl CandidateFunction {
    pub fn new<F>(label: impl Into<String>, eval: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            label: label.into(),
            eval: Arc::new(eval),
            dr: None,
            drr: None,
            dt: None,
            branch: None,
        }
    }

    pub fn with_dr<F: Fn(f64, f64) -> f64 + Send + Sync + 'static>(mut self, f: F) -> Self {
        self.dr = Some(Arc::new(f));
        self
    }

    pub fn with_drr<F: Fn(f64, f64) -> f64 + Send + Sync + 'static>(mut self, f: F) -> Self {
        self.drr = Some(Arc::new(f));
        self
    }

    pub fn with_dt<F: Fn(f64, f64) -> f64 + Send + Sync + 'static>(mut self, f: F) -> Self {
        self.dt = Some(Arc::new(f));
        self
    }

    pub fn with_branch<F: Fn(f64, f64) -> f64 + Send + Sync + 'static>(mut self, f: F) -> Self {
        self.branch = Some(Arc::new(f));
        self
    }

    /// True when the finite-difference stencil of relative width `h` at
    /// (r, t) stays on one branch of a pasted candidate.
    pub fn stencil_on_one_branch(&self, r: f64, t: f64, h: f64) -> bool {
        let Some(branch) = &self.branch else {
            return true;
        };
        let hr = 2.0 * h * r.abs().max(1e-2);
        let ht = 2.0 * h * t.abs().max(1e-2);
        let s0 = branch(r, t).signum();
        [
            branch(r - hr, t),
            branch(r + hr, t),
            branch(r, t - ht),
            branch(r, t + ht),
        ]
        .iter()
        .all(|v| v.signum() == s0)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, r: f64, t: f64) -> f64 {
        (self.eval)(r, t)
    }

    pub fn dr(&self, r: f64, t: f64) -> Option<f64> {
        self.dr.as_ref().map(|f| f(r, t))
    }

    pub fn drr(&self, r: f64, t: f64) -> Option<f64> {
        self.drr.as_ref().map(|f| f(r, t))
    }

    pub fn dt(&self, r: f64, t: f64) -> Option<f64> {
        self.dt.as_ref().map(|f| f(r, t))
    }

    /// Check the stored closed-form derivatives against finite differences
    /// of `eval` at the given interior points. Returns the worst relative
    /// disagreement, normalized by 1 + |derivative|.
    pub fn derivative_consistency(&self, samples: &[(f64, f64)], h: f64) -> f64 {
        let mut worst: f64 = 0.0;
        for &(r, t) in samples {
            let hr = h * r.abs().max(1e-2);
            let ht = h * t.abs().max(1e-2);
            if let Some(v) = self.dr(r, t) {
                let fd = fd_first(|x| self.eval(x, t), r, hr);
                worst = worst.max((v - fd).abs() / (1.0 + v.abs()));
            }
            if let Some(v) = self.drr(r, t) {
                let fd = fd_second(|x| self.eval(x, t), r, hr);
                worst = worst.max((v - fd).abs() / (1.0 + v.abs()));
            }
            if let Some(v) = self.dt(r, t) {
                let fd = fd_first(|s| self.eval(r, s), t, ht);
                worst = worst.max((v - fd).abs() / (1.0 + v.abs()));
            }
        }
        worst
    }
}

/// Fourth-order central first derivative.
fn fd_first<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

/// Fourth-order central second derivative.
fn fd_second<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (-f(x - 2.0 * h) + 16.0 * f(x - h) - 30.0 * f(x) + 16.0 * f(x + h) - f(x + 2.0 * h))
        / (12.0 * h * h)
}

/// Δₚ(C |x|^α) at |x| = r, in closed form:
///
/// ```text
/// Cα |Cα|^{p-2} (n + (α-1)(p-1) - 1) r^{(α-1)(p-1)-1}.
/// ```
///
/// In particular Δₚ(C|x|^{p/(p-1)}) = (Cp/(p-1))^{p-1} n for C ≥ 0, with no
/// r-dependence.
pub fn delta_p_radial_power(c: f64, alpha: f64, p: f64, n: usize, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("r must be > 0, got {r}")));
    }
    let ca = c * alpha;
    if ca == 0.0 {
        return Ok(0.0);
    }
    let coeff = n as f64 + (alpha - 1.0) * (p - 1.0) - 1.0;
    let expo = (alpha - 1.0) * (p - 1.0) - 1.0;
    Ok(ca * ca.abs().powf(p - 2.0) * coeff * r.powf(expo))
}

/// The polar p-Laplacian u'^{p-2} ((p-1) u'' + u'(n-1)/r) for u' ≥ 0.
///
/// When u' = 0 and p < 2 the prefactor is unbounded; the value is 0 if u''
/// also vanishes and a `DegenerateGradient` error otherwise.
pub fn radial_p_laplacian(uprime: f64, usecond: f64, p: f64, n: usize, r: f64) -> Result<f64> {
    if uprime < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "radial_p_laplacian assumes u' >= 0, got {uprime}"
        )));
    }
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("r must be > 0, got {r}")));
    }
    let inner = (p - 1.0) * usecond + uprime * (n as f64 - 1.0) / r;
    if uprime == 0.0 {
        if p >= 2.0 {
            // 0^{p-2} with p > 2 kills the bracket; for p = 2 the prefactor is 1.
            return Ok(if p == 2.0 { inner } else { 0.0 });
        }
        if usecond == 0.0 {
            return Ok(0.0);
        }
        return Err(Error::DegenerateGradient { p });
    }
    Ok(uprime.powf(p - 2.0) * inner)
}

/// Sign-aware polar p-Laplacian |u'|^{p-2}((p-1)u'' + u'(n-1)/r) for
/// arbitrary u', with the gradient floor `g_min` guarding |u'|^{p-2} in the
/// singular range p < 2. Returns the value and whether the floor was active.
fn polar_p_laplacian_clamped(
    uprime: f64,
    usecond: f64,
    p: f64,
    n: usize,
    r: f64,
    g_min: f64,
) -> (f64, bool) {
    let mag = uprime.abs();
    let inner = (p - 1.0) * usecond + uprime * (n as f64 - 1.0) / r;
    if p < 2.0 && mag < g_min {
        (g_min.powf(p - 2.0) * inner, true)
    } else if mag == 0.0 {
        // p >= 2: prefactor is 0 (p > 2) or 1 (p = 2).
        (if p == 2.0 { inner } else { 0.0 }, false)
    } else {
        (mag.powf(p - 2.0) * inner, false)
    }
}

/// Gradient regularization floor for the oracle in the singular range p < 2.
pub const ORACLE_G_MIN: f64 = 1e-8;

/// Default relative step for the residual oracle. Fourth-order stencils at
/// this step keep both the truncation error and the f64 rounding floor of
/// the second difference below the 1e-8 tolerance the exact-solution checks
/// run at; second-order stencils cannot reach that in double precision.
pub const ORACLE_H: f64 = 4e-3;

/// A residual sample from the finite-difference oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualSample {
    /// ∂ₜf - Δₚf from central differences of the evaluation closure only.
    pub value: f64,
    /// True when the |u'|^{p-2} floor was active (p < 2, u' ≈ 0).
    pub clamped: bool,
}

/// Finite-difference residual ∂ₜf - Δₚf at (r, t).
///
/// Fourth-order central stencils with steps h·max(r, 1e-2) in r and
/// h·max(|t|, 1e-2) in t; only `f.eval` is consulted. The caller must supply
/// a point with margin ≥ 2h (relative) inside the evaluation domain.
pub fn residual(f: &CandidateFunction, p: f64, n: usize, r: f64, t: f64, h: f64) -> Result<ResidualSample> {
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("r must be > 0, got {r}")));
    }
    let hr = h * r.abs().max(1e-2);
    let ht = h * t.abs().max(1e-2);
    if r - 2.0 * hr <= 0.0 {
        return Err(Error::StepTooLarge { h: hr, r });
    }
    let ur = fd_first(|x| f.eval(x, t), r, hr);
    let urr = fd_second(|x| f.eval(x, t), r, hr);
    let ut = fd_first(|s| f.eval(r, s), t, ht);
    if !(ur.is_finite() && urr.is_finite() && ut.is_finite()) {
        return Err(Error::QuadratureNonconvergence(format!(
            "non-finite stencil values at (r, t) = ({r}, {t})"
        )));
    }
    let (lap, clamped) = polar_p_laplacian_clamped(ur, urr, p, n, r, ORACLE_G_MIN);
    Ok(ResidualSample {
        value: ut - lap,
        clamped,
    })
}

/// Finite-difference Δₚ of a time-independent radial function; used by the
/// oracle-vs-closed-form tests.
pub fn fd_delta_p<F: Fn(f64) -> f64>(g: F, p: f64, n: usize, r: f64, h: f64) -> f64 {
    let hr = h * r.abs().max(1e-2);
    let ur = fd_first(&g, r, hr);
    let urr = fd_second(&g, r, hr);
    polar_p_laplacian_clamped(ur, urr, p, n, r, ORACLE_G_MIN).0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_laplacian_conjugate_exponent() {
        // Δₚ(|x|^{p/(p-1)}) = (p/(p-1))^{p-1} n, independent of r.
        let p = 3.0;
        let v1 = delta_p_radial_power(1.0, p / (p - 1.0), p, 2, 0.7).unwrap();
        let v2 = delta_p_radial_power(1.0, p / (p - 1.0), p, 2, 0.1).unwrap();
        assert!((v1 - 4.5).abs() < 1e-12, "got {v1}");
        assert!((v1 - v2).abs() < 1e-12);
    }

    #[test]
    fn power_laplacian_trivial_cases() {
        // constants
        assert_eq!(delta_p_radial_power(5.0, 0.0, 3.3, 4, 0.2).unwrap(), 0.0);
        // unit gradient: Δₚ(|x|) = (n-1)/r for every p
        let v = delta_p_radial_power(1.0, 1.0, 2.7, 3, 0.5).unwrap();
        assert!((v - 4.0).abs() < 1e-12, "got {v}");
        assert!(delta_p_radial_power(1.0, 1.0, 2.0, 3, 0.0).is_err());
    }

    #[test]
    fn power_laplacian_homogeneity() {
        // (p-1)-homogeneity in C > 0.
        for (c, alpha, p, n) in [(0.7, 1.3, 2.5, 2usize), (2.0, -0.7, 1.6, 4), (1.1, 0.4, 3.2, 3)] {
            let v1 = delta_p_radial_power(c, alpha, p, n, 0.8).unwrap();
            let v2 = delta_p_radial_power(2.0 * c, alpha, p, n, 0.8).unwrap();
            let expect = 2f64.powf(p - 1.0) * v1;
            assert!(
                (v2 - expect).abs() <= 1e-12 * expect.abs().max(1.0),
                "c={c} alpha={alpha} p={p}: {v2} vs {expect}"
            );
        }
    }

    #[test]
    fn polar_form_matches_known_values() {
        // quadratic under the heat operator: Δ(|x|²) = 2n
        let v = radial_p_laplacian(2.0, 2.0, 2.0, 3, 1.0).unwrap();
        assert!((v - 6.0).abs() < 1e-12);
        // plug-in check of the displayed expression
        let v = radial_p_laplacian(1.0, 0.0, 4.0, 2, 0.5).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
        // degenerate p > 2 case with vanishing gradient
        let v = radial_p_laplacian(0.0, 0.0, 3.0, 3, 1.0).unwrap();
        assert_eq!(v, 0.0);
        // p < 2 with u' = 0, u'' != 0 must refuse
        assert!(matches!(
            radial_p_laplacian(0.0, 1.0, 1.5, 3, 1.0),
            Err(Error::DegenerateGradient { .. })
        ));
        assert!(radial_p_laplacian(-1.0, 0.0, 2.0, 3, 1.0).is_err());
    }

    #[test]
    fn oracle_on_time_independent_profile() {
        // f(r,t) = r with p = 2, n = 3: residual = -(n-1)/r = -4 at r = 0.5.
        let f = CandidateFunction::new("linear-in-r", |r, _| r);
        let s = residual(&f, 2.0, 3, 0.5, -0.3, 1e-4).unwrap();
        assert!((s.value + 4.0).abs() < 1e-6, "got {}", s.value);
        assert!(!s.clamped);
    }

    #[test]
    fn oracle_flags_clamp_in_singular_range() {
        // constant profile, p < 2: u' = 0 forces the floor; the residual is 0
        // because the bracket also vanishes (up to rounding).
        let f = CandidateFunction::new("constant", |_, _| 1.0);
        let s = residual(&f, 1.5, 2, 0.5, -0.2, 1e-4).unwrap();
        assert!(s.clamped);
        assert!(s.value.abs() < 1e-6);
    }

    #[test]
    fn oracle_agrees_with_closed_form_on_powers() {
        // deterministic pseudo-random sweep, exponents away from degeneracies
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..100 {
            let c = 0.3 + 1.7 * next();
            let mut alpha = -1.5 + 4.0 * next();
            if alpha.abs() < 0.2 {
                alpha += 0.4;
            }
            let p = 1.3 + 3.0 * next();
            let n = 1 + (next() * 4.0) as usize;
            let r = 0.4 + 1.2 * next();
            let closed = delta_p_radial_power(c, alpha, p, n, r).unwrap();
            let fd = fd_delta_p(|s| c * s.powf(alpha), p, n, r, 1e-3);
            let rel = (closed - fd).abs() / (1.0 + closed.abs());
            assert!(rel < 1e-5, "c={c} a={alpha} p={p} n={n} r={r}: {closed} vs {fd}");
        }
    }

    #[test]
    fn richardson_consistency_of_the_stencil() {
        // halving h must shrink the oracle's self-disagreement >= 3x
        let f = CandidateFunction::new("smooth", |r: f64, t: f64| r.exp() * (1.0 + 0.3 * t));
        let p = 3.0;
        let r0 = 0.7;
        let t0 = -0.4;
        let v1 = residual(&f, p, 2, r0, t0, 4e-2).unwrap().value;
        let v2 = residual(&f, p, 2, r0, t0, 2e-2).unwrap().value;
        let v4 = residual(&f, p, 2, r0, t0, 1e-2).unwrap().value;
        let d1 = (v1 - v2).abs();
        let d2 = (v2 - v4).abs();
        assert!(d1 >= 3.0 * d2, "d1 = {d1}, d2 = {d2}");
    }

    #[test]
    fn derivative_consistency_helper() {
        let f = CandidateFunction::new("power", |r: f64, t: f64| r.powf(1.5) - (-t).powf(1.5))
            .with_dr(|r, _| 1.5 * r.powf(0.5))
            .with_drr(|r, _| 0.75 * r.powf(-0.5))
            .with_dt(|_, t: f64| 1.5 * (-t).powf(0.5));
        let samples: Vec<(f64, f64)> = (1..10).map(|i| (0.2 + 0.08 * i as f64, -0.3)).collect();
        assert!(f.derivative_consistency(&samples, 1e-3) < 1e-6);
    }
}
