//! Explicit barriers and supersolutions at the origin of soda can domains,
//! together with the verification predicates that certify them.
//!
//! A *barrier* at a boundary point ξ₀ is a positive p-superparabolic
//! function w with w(ζ) → 0 as ζ → ξ₀ and liminf w > 0 at every other
//! boundary point. A *barrier family* {w_j} additionally reaches level k at
//! distance 1/k from ξ₀ for every k; its existence characterizes regularity.
//!
//! The constructions here:
//!
//! - power barriers u_j = j(|x|^α - (-t)^α), α = 1 - p/l, for 1 < p < 2 and
//!   l > p (in the reduced range p < l < 2, θ < 1);
//! - the exact one-parameter solutions v_κ = κ(p-1)/p |x|^{p/(p-1)} + nκ^{p-1}t
//!   for p > 2, with the threshold κ̃ and the min-pasting that converts them
//!   into small-data barriers;
//! - radial ODE barriers solving Δₚu = -j on a punctured ball for p > n;
//! - the fast-diffusion supersolution C((-t)/|x|^l)^{1/(2-p)} witnessing
//!   irregularity for 1 < p < 2 ≤ n;
//! - the Barenblatt solution B_{p,C} and the barrier w_ε = t_ε^{-n/λ} - B_p
//!   carved out of it, including the explicit smallness certificates.

use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, Params, SpaceTimePoint, TimeSlice};
use crate::pcalc::{self, CandidateFunction};
use crate::quad::{adaptive_simpson, gauss_panels};
use crate::sample::{boundary_samples, corner_paths, interior_cloud, time_extent};
use serde::Serialize;

// ---------------------------------------------------------------------------
// Power barriers (1 < p < 2, l > p)
// ---------------------------------------------------------------------------

/// u_j(x,t) = j(|x|^α - (-t)^α) with α = 1 - p/l > 0.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PowerBarrier {
    pub j: f64,
    pub alpha: f64,
    pub p: f64,
    pub l: f64,
    pub theta: f64,
}

impl PowerBarrier {
    pub fn candidate(&self) -> CandidateFunction {
        let (j, a) = (self.j, self.alpha);
        CandidateFunction::new(format!("power-barrier j={j}"), move |r, t| {
            j * (r.powf(a) - (-t).powf(a))
        })
        .with_dr(move |r, _| j * a * r.powf(a - 1.0))
        .with_drr(move |r, _| j * a * (a - 1.0) * r.powf(a - 2.0))
        .with_dt(move |_, t| j * a * (-t).powf(a - 1.0))
    }
}

/// Smallest j for which u_j is a supersolution throughout Θ_{l,θ}.
///
/// The residual factors as jα(-t)^{α-1}(1 - (jα)^{p-2} δ (-t)^{1-α}
/// |x|^{(α-1)(p-1)-1}) with δ = n + (α-1)(p-1) - 1, and inside Θ_{l,θ} with
/// θ < 1 the t-x factor is < 1. The analytic sufficient certificate is
/// therefore (jα)^{p-2} δ ≤ 1, solved exactly for the minimal j.
pub fn power_barrier_min_j(params: &Params) -> Result<(f64, PowerBarrier)> {
    let Params { n, p, l, theta } = *params;
    if !(p > 1.0 && p < 2.0) {
        return Err(Error::InvalidParameter(format!(
            "power barrier needs 1 < p < 2, got p = {p}"
        )));
    }
    if !(l > p && l < 2.0) {
        return Err(Error::InvalidParameter(format!(
            "power barrier reduction needs p < l < 2, got l = {l}"
        )));
    }
    if !(theta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "power barrier reduction needs theta < 1, got theta = {theta}"
        )));
    }
    let alpha = 1.0 - p / l;
    let delta = n as f64 + (alpha - 1.0) * (p - 1.0) - 1.0;
    let j0 = if delta <= 0.0 {
        // the subtracted term is nonpositive; every j > 0 works
        1.0
    } else {
        (1.0 / delta).powf(1.0 / (p - 2.0)) / alpha
    };
    // re-verify the certificate at the returned parameter
    if delta > 0.0 {
        let cert = (j0 * alpha).powf(p - 2.0) * delta;
        if cert > 1.0 + 1e-9 {
            return Err(Error::SearchFailed(format!(
                "supersolution certificate violated: (jα)^(p-2) δ = {cert}"
            )));
        }
    }
    Ok((
        j0,
        PowerBarrier {
            j: j0,
            alpha,
            p,
            l,
            theta,
        },
    ))
}

// ---------------------------------------------------------------------------
// κ-barriers and the small-data pasting (p > 2)
// ---------------------------------------------------------------------------

/// v_κ(x,t) = κ(p-1)/p |x|^{p/(p-1)} + n κ^{p-1} t, an exact solution.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct KappaBarrier {
    pub kappa: f64,
    pub p: f64,
    pub n: usize,
}

impl KappaBarrier {
    pub fn new(kappa: f64, p: f64, n: usize) -> Result<Self> {
        if !(kappa > 0.0 && p > 1.0 && n >= 1) {
            return Err(Error::InvalidParameter(
                "kappa barrier needs kappa > 0, p > 1, n >= 1".into(),
            ));
        }
        Ok(Self { kappa, p, n })
    }

    pub fn candidate(&self) -> CandidateFunction {
        let Self { kappa, p, n } = *self;
        let q = p / (p - 1.0);
        let coef = kappa * (p - 1.0) / p;
        let drift = n as f64 * kappa.powf(p - 1.0);
        CandidateFunction::new(format!("kappa-barrier kappa={kappa}"), move |r, t| {
            coef * r.powf(q) + drift * t
        })
        .with_dr(move |r, _| kappa * r.powf(1.0 / (p - 1.0)))
        .with_drr(move |r, _| kappa / (p - 1.0) * r.powf(1.0 / (p - 1.0) - 1.0))
        .with_dt(move |_, _| drift)
    }
}

/// κ̃ = ((p-1)/(npθ))^{1/(p-2)}: v_κ is a barrier for Θ_{l,θ} at the origin
/// whenever 0 < κ < κ̃ and l ≥ p/(p-1).
pub fn kappa_threshold(params: &Params) -> Result<f64> {
    let Params { n, p, theta, .. } = *params;
    if !(p > 2.0) {
        return Err(Error::InvalidParameter(format!(
            "kappa threshold needs p > 2, got {p}"
        )));
    }
    Ok(((p - 1.0) / (n as f64 * p * theta)).powf(1.0 / (p - 2.0)))
}

fn require_small_data_range(params: &Params, delta: f64) -> Result<()> {
    let Params { p, l, .. } = *params;
    if !(p > 2.0) {
        return Err(Error::InvalidParameter(format!("needs p > 2, got {p}")));
    }
    if !(l >= p / (p - 1.0)) {
        return Err(Error::InvalidParameter(format!(
            "needs l >= p/(p-1) = {}, got l = {l}",
            p / (p - 1.0)
        )));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "delta must lie in (0, 1], got {delta}"
        )));
    }
    Ok(())
}

/// The pasting level m_δ = (p-2)/p (1/(npθ))^{1/(p-2)} δ^{(p-l)/(p-2)}.
pub fn m_delta(params: &Params, delta: f64) -> Result<f64> {
    require_small_data_range(params, delta)?;
    let Params { n, p, theta, l } = *params;
    Ok((p - 2.0) / p
        * (1.0 / (n as f64 * p * theta)).powf(1.0 / (p - 2.0))
        * delta.powf((p - l) / (p - 2.0)))
}

/// The admissible boundary oscillation
/// (p-2)/p (δ^{p/(p-1)-l}/(npθ))^{1/(p-2)} min{|x|, δ}^{p/(p-1)} at |x| = r.
pub fn small_data_bound(params: &Params, delta: f64, r: f64) -> Result<f64> {
    require_small_data_range(params, delta)?;
    if r < 0.0 {
        return Err(Error::InvalidParameter(format!("r must be >= 0, got {r}")));
    }
    let Params { n, p, theta, l } = *params;
    let q = p / (p - 1.0);
    let coeff = (p - 2.0) / p * (delta.powf(q - l) / (n as f64 * p * theta)).powf(1.0 / (p - 2.0));
    Ok(coeff * r.min(delta).powf(q))
}

/// The κ maximizing the lower bound of v_κ on {|x| ≤ δ}, used for pasting.
pub fn pasting_kappa(params: &Params, delta: f64) -> Result<f64> {
    require_small_data_range(params, delta)?;
    let Params { n, p, theta, l } = *params;
    let q = p / (p - 1.0);
    Ok((delta.powf(q - l) / (n as f64 * p * theta)).powf(1.0 / (p - 2.0)))
}

/// The pasted barrier ṽ_δ = min{v_κ, m_δ} on |x| < δ, = m_δ outside.
pub fn vtilde_delta(params: &Params, delta: f64) -> Result<PastedCandidate> {
    let kappa = pasting_kappa(params, delta)?;
    let cap = m_delta(params, delta)?;
    let inner = KappaBarrier::new(kappa, params.p, params.n)?.candidate();
    paste_min_with_constant(inner, cap, delta, &DomainSpec::soda_can(*params))
}

// ---------------------------------------------------------------------------
// Irregularity supersolution (1 < p < 2 ≤ n)
// ---------------------------------------------------------------------------

/// u(x,t) = C ((-t)/|x|^l)^β with β = 1/(2-p); a supersolution on Θ_{l,1}
/// vanishing on the top face, which is exactly why it certifies
/// irregularity of the origin rather than regularity.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct IrregularitySupersolution {
    pub c: f64,
    pub beta: f64,
    pub delta_coef: f64,
    pub n: usize,
    pub p: f64,
    pub l: f64,
}

impl IrregularitySupersolution {
    pub fn candidate(&self) -> CandidateFunction {
        let (c, beta, l) = (self.c, self.beta, self.l);
        let bl = beta * l;
        CandidateFunction::new(format!("irregularity-supersolution C={c}"), move |r, t| {
            c * (-t).powf(beta) * r.powf(-bl)
        })
        .with_dr(move |r, t| -c * bl * (-t).powf(beta) * r.powf(-bl - 1.0))
        .with_drr(move |r, t| c * bl * (bl + 1.0) * (-t).powf(beta) * r.powf(-bl - 2.0))
        .with_dt(move |r, t| -c * beta * (-t).powf(beta - 1.0) * r.powf(-bl))
    }
}

/// Builds the irregularity supersolution, choosing C so that the residual
/// bracket -β + C^{p-2} δ (βl)^{p-1} vanishes.
pub fn build_irregularity_supersolution(n: usize, p: f64, l: f64) -> Result<IrregularitySupersolution> {
    if !(p > 1.0 && p < 2.0 && n >= 2) {
        return Err(Error::InvalidParameter(format!(
            "needs 1 < p < 2 <= n, got p = {p}, n = {n}"
        )));
    }
    if !(l > 0.0 && l <= p) {
        return Err(Error::InvalidParameter(format!(
            "needs 0 < l <= p (so |x|^(l-p) >= 1 on the unit can), got l = {l}"
        )));
    }
    let beta = 1.0 / (2.0 - p);
    let delta_coef = n as f64 - (beta * l + 1.0) * (p - 1.0) - 1.0;
    if !(delta_coef > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "delta = n - (βl+1)(p-1) - 1 = {delta_coef} <= 0: l outside the irregularity range"
        )));
    }
    let c = (beta / (delta_coef * (beta * l).powf(p - 1.0))).powf(1.0 / (p - 2.0));
    Ok(IrregularitySupersolution {
        c,
        beta,
        delta_coef,
        n,
        p,
        l,
    })
}

// ---------------------------------------------------------------------------
// Radial ODE barriers (p > n)
// ---------------------------------------------------------------------------

/// The barrier w_j(x,t) = u_j(|x|) - j t where u_j solves Δₚu_j = -j on the
/// punctured unit ball with u_j(0) = 0, u_j(1) = a_j, via
/// u_j'(r) = (C_j r^{1-n} - j r/n)^{1/(p-1)}.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RadialOdeBarrier {
    pub j: f64,
    pub n: usize,
    pub p: f64,
    pub c_j: f64,
    pub a_j: f64,
    pub a_j_prime: f64,
}

impl RadialOdeBarrier {
    /// u_j(r) by fixed-panel Gauss quadrature after the substitution
    /// ρ = r s^{1/(1-a)}, a = (n-1)/(p-1), which removes the endpoint
    /// singularity and keeps the value smooth in r.
    pub fn u(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        let a = (self.n as f64 - 1.0) / (self.p - 1.0);
        let inv = 1.0 / (1.0 - a);
        let (c, j, n, p) = (self.c_j, self.j, self.n as f64, self.p);
        let integrand = |s: f64| {
            let rho = r * s.powf(inv);
            (c - j * rho.powf(n) / n).max(0.0).powf(1.0 / (p - 1.0))
        };
        r.powf(1.0 - a) * inv * gauss_panels(&integrand, 0.0, 1.0, 64, 2)
    }

    pub fn uprime(&self, r: f64) -> f64 {
        (self.c_j * r.powf(1.0 - self.n as f64) - self.j * r / self.n as f64)
            .max(0.0)
            .powf(1.0 / (self.p - 1.0))
    }

    pub fn candidate(&self) -> CandidateFunction {
        let this = *self;
        let (j, n, p, c) = (self.j, self.n as f64, self.p, self.c_j);
        CandidateFunction::new(format!("radial-ode-barrier j={j}"), move |r, t| {
            this.u(r) - j * t
        })
        .with_dr(move |r, _| this.uprime(r))
        .with_drr(move |r, _| {
            let base = c * r.powf(1.0 - n) - j * r / n;
            (1.0 / (p - 1.0))
                * base.max(0.0).powf(1.0 / (p - 1.0) - 1.0)
                * ((1.0 - n) * c * r.powf(-n) - j / n)
        })
        .with_dt(move |_, _| -j)
    }
}

/// Builds the radial ODE barrier: a_j' by adaptive quadrature (integrable
/// singularity at 0 because p > n), a_j = max{j, a_j'}, then C_j ≥ j/n by
/// monotone bisection so that u_j(1) = a_j.
pub fn build_radial_ode_barrier(n: usize, p: f64, j: f64) -> Result<RadialOdeBarrier> {
    if !(p > n as f64 && n >= 1) {
        return Err(Error::InvalidParameter(format!(
            "radial ODE barrier needs p > n >= 1, got p = {p}, n = {n}"
        )));
    }
    if !(j > 0.0) {
        return Err(Error::InvalidParameter(format!("j must be > 0, got {j}")));
    }
    let nf = n as f64;
    let a = (nf - 1.0) / (p - 1.0); // in [0, 1)
    let inv = 1.0 / (1.0 - a);
    // a_j' = (j/n)^{1/(p-1)} ∫₀¹ (ρ^{1-n} - ρ)^{1/(p-1)} dρ, softened at ρ = 0
    // by the substitution behind `inv` and at ρ = 1 by s = 1 - u²
    let softened = |s: f64| (1.0 - s.powf(nf * inv)).max(0.0).powf(1.0 / (p - 1.0));
    let head = adaptive_simpson(&softened, 0.0, 0.5, 1e-12)?;
    let tail = adaptive_simpson(
        &|u: f64| 2.0 * u * softened(1.0 - u * u),
        0.0,
        0.5f64.sqrt(),
        1e-12,
    )?;
    let a_j_prime = (j / nf).powf(1.0 / (p - 1.0)) * inv * (head + tail);
    let a_j = j.max(a_j_prime);

    let u_at_one = |c: f64| {
        let barrier = RadialOdeBarrier {
            j,
            n,
            p,
            c_j: c,
            a_j,
            a_j_prime,
        };
        barrier.u(1.0)
    };

    // bracket the shooting constant, then bisect: u(1; C) is increasing in C
    let mut lo = j / nf;
    let mut hi = lo.max(1e-12) * 2.0;
    let mut guard = 0;
    while u_at_one(hi) < a_j {
        hi *= 2.0;
        guard += 1;
        if guard > 200 {
            return Err(Error::SearchFailed("shooting constant bracket blew up".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if u_at_one(mid) < a_j {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) <= 1e-14 * hi.max(1.0) {
            break;
        }
    }
    let c_j = 0.5 * (lo + hi);
    let built = RadialOdeBarrier {
        j,
        n,
        p,
        c_j,
        a_j,
        a_j_prime,
    };
    let resid = (built.u(1.0) - a_j).abs();
    if resid > 1e-8 * a_j.max(1.0) {
        return Err(Error::SearchFailed(format!(
            "shooting failed: |u(1) - a_j| = {resid}"
        )));
    }
    Ok(built)
}

// ---------------------------------------------------------------------------
// Barenblatt solutions and barriers (p > 2)
// ---------------------------------------------------------------------------

/// The compactly supported self-similar solution
///
/// ```text
/// B_{p,C}(x,t) = t^{-n/λ} [ C - (p-2)/(pλ^{1/(p-1)}) (|x|/t^{1/λ})^{p/(p-1)} ]₊^{(p-1)/(p-2)},
/// ```
///
/// with λ = n(p-2) + p, p-parabolic in the whole upper half-space.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BarenblattSolution {
    pub n: usize,
    pub p: f64,
    pub c: f64,
    pub lambda: f64,
    /// M = (p-2)/(p λ^{1/(p-1)}).
    pub m_coef: f64,
}

impl BarenblattSolution {
    pub fn new(n: usize, p: f64, c: f64) -> Result<Self> {
        if !(p > 2.0 && n >= 1 && c > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "Barenblatt solution needs p > 2, n >= 1, C > 0; got p = {p}, n = {n}, C = {c}"
            )));
        }
        let lambda = n as f64 * (p - 2.0) + p;
        let m_coef = (p - 2.0) / (p * lambda.powf(1.0 / (p - 1.0)));
        Ok(Self {
            n,
            p,
            c,
            lambda,
            m_coef,
        })
    }

    fn bracket(&self, r: f64, t: f64) -> f64 {
        let q = self.p / (self.p - 1.0);
        let en = self.n as f64 * (2.0 - self.p) / (self.lambda * (self.p - 1.0));
        self.c * t.powf(en) - self.m_coef * r.powf(q) / t.powf(1.0 / (self.p - 1.0))
    }

    /// B_{p,C}(x, t) at |x| = r; exactly 0 outside the support.
    pub fn eval(&self, r: f64, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "Barenblatt solution is defined for t > 0, got {t}"
            )));
        }
        let b = self.bracket(r, t);
        Ok(if b <= 0.0 {
            0.0
        } else {
            b.powf((self.p - 1.0) / (self.p - 2.0))
        })
    }

    /// Radius of the support at time t: the positive root of the bracket.
    pub fn support_radius(&self, t: f64) -> f64 {
        (self.c / self.m_coef).powf((self.p - 1.0) / self.p) * t.powf(1.0 / self.lambda)
    }

    /// A with B_{p,C}(x,t) = B_{p,1}(x/A, t/A^p).
    pub fn scaling_factor(&self) -> f64 {
        self.c
            .powf(self.lambda * (self.p - 1.0) / (self.p * (self.lambda - self.p)))
    }

    pub fn candidate(&self) -> CandidateFunction {
        let s = *self;
        let q = s.p / (s.p - 1.0);
        let e = (s.p - 1.0) / (s.p - 2.0);
        let b_t = 1.0 / (s.p - 1.0);
        let en = s.n as f64 * (2.0 - s.p) / (s.lambda * (s.p - 1.0));
        CandidateFunction::new(format!("barenblatt n={} p={} C={}", s.n, s.p, s.c), move |r, t| {
            let b = s.bracket(r, t);
            if b <= 0.0 {
                0.0
            } else {
                b.powf(e)
            }
        })
        .with_dr(move |r, t| {
            let b = s.bracket(r, t);
            if b <= 0.0 {
                0.0
            } else {
                e * b.powf(e - 1.0) * (-s.m_coef * q * r.powf(q - 1.0) * t.powf(-b_t))
            }
        })
        .with_drr(move |r, t| {
            let b = s.bracket(r, t);
            if b <= 0.0 {
                0.0
            } else {
                let db = -s.m_coef * q * r.powf(q - 1.0) * t.powf(-b_t);
                let d2b = -s.m_coef * q * (q - 1.0) * r.powf(q - 2.0) * t.powf(-b_t);
                e * (e - 1.0) * b.powf(e - 2.0) * db * db + e * b.powf(e - 1.0) * d2b
            }
        })
        .with_dt(move |r, t| {
            let b = s.bracket(r, t);
            if b <= 0.0 {
                0.0
            } else {
                let dbt = s.c * en * t.powf(en - 1.0)
                    + s.m_coef * b_t * r.powf(q) * t.powf(-b_t - 1.0);
                e * b.powf(e - 1.0) * dbt
            }
        })
    }
}

/// w_ε(x,t) = t_ε^{-n/λ} - B_{p,1}(x,t), a barrier at (0, t_ε) for the
/// translated truncated can Θ_ε = {t_ε - θ₀|x|^l < t < t_ε, |x| < δ_ε},
/// with the canonical θ₀ = λ^{(p-2)/(p-1)}/(np).
#[derive(Debug, Clone, Serialize)]
pub struct BarenblattBarrier {
    pub n: usize,
    pub p: f64,
    pub l: f64,
    pub epsilon: f64,
    pub theta0: f64,
    pub m_coef: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub tau: f64,
    /// Smallness level on which both Taylor certificates hold on [0, δ₀].
    pub delta0: f64,
    pub delta_eps: f64,
    pub t_eps: f64,
    /// Sampled minimum margin of the pointwise lower bound
    /// w_ε ≥ M(1-ε)²|x|^{p/(p-1)} / t_ε^{(λ+n)/(λ(p-1))} on the closure.
    pub lower_bound_margin: f64,
    #[serde(skip)]
    solution: BarenblattSolution,
}

impl BarenblattBarrier {
    pub fn lambda(&self) -> f64 {
        self.solution.lambda
    }

    /// w_ε(r, t) for t near t_ε (uses absolute time of the Barenblatt frame).
    pub fn w(&self, r: f64, t: f64) -> f64 {
        let head = self.t_eps.powf(-(self.n as f64) / self.solution.lambda);
        let b = self.solution.eval(r, t).unwrap_or(f64::NAN);
        head - b
    }

    /// The barrier in the frame of Θ_{l,θ₀} at the origin:
    /// (r, t) ↦ w_ε(r, t + t_ε) for t ∈ (-θ₀ r^l, 0).
    pub fn shifted_candidate(&self) -> CandidateFunction {
        let this = self.clone();
        CandidateFunction::new(
            format!("barenblatt-barrier eps={} delta_eps={}", this.epsilon, this.delta_eps),
            move |r, t| this.w(r, t + this.t_eps),
        )
    }

    /// Pasting level M(1-ε)² δ_ε^τ with τ = (p-l)/(p-2).
    pub fn cap(&self) -> f64 {
        self.m_coef * (1.0 - self.epsilon).powi(2) * self.delta_eps.powf(self.tau)
    }

    /// min{w_ε(·, ·+t_ε), cap} inside |x| < δ_ε, the cap outside; a barrier
    /// for the full can Θ_{l,θ₀} at the origin.
    pub fn pasted(&self) -> Result<PastedCandidate> {
        let params = Params::new(self.n, self.p, self.l, self.theta0)?;
        paste_min_with_constant(
            self.shifted_candidate(),
            self.cap(),
            self.delta_eps,
            &DomainSpec::soda_can(params),
        )
    }
}

/// Builds w_ε, resolving "sufficiently small" δ₀ and δ_ε by geometric search
/// over the explicit closed-form certificates, with
/// t_ε = δ_ε^{λ(l(p-1)-p)/((p-2)(λ+n))}.
pub fn build_barenblatt_barrier(n: usize, p: f64, l: f64, epsilon: f64) -> Result<BarenblattBarrier> {
    build_barenblatt_inner(n, p, l, epsilon, None)
}

/// Same construction with a caller-chosen δ_ε (validated against the same
/// certificates); the barrier-family members use δ_ε = 1/j.
pub fn build_barenblatt_barrier_with_delta(
    n: usize,
    p: f64,
    l: f64,
    epsilon: f64,
    delta_eps: f64,
) -> Result<BarenblattBarrier> {
    if !(delta_eps > 0.0 && delta_eps <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "delta_eps must lie in (0, 1], got {delta_eps}"
        )));
    }
    build_barenblatt_inner(n, p, l, epsilon, Some(delta_eps))
}

fn build_barenblatt_inner(
    n: usize,
    p: f64,
    l: f64,
    epsilon: f64,
    delta_override: Option<f64>,
) -> Result<BarenblattBarrier> {
    if !(p > 2.0) {
        return Err(Error::InvalidParameter(format!("needs p > 2, got {p}")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0,1), got {epsilon}"
        )));
    }
    let solution = BarenblattSolution::new(n, p, 1.0)?;
    let lambda = solution.lambda;
    let q = p / (p - 1.0);
    if !(l >= q && l < lambda) {
        return Err(Error::InvalidParameter(format!(
            "needs p/(p-1) = {q} <= l < lambda = {lambda}, got l = {l}"
        )));
    }
    let nf = n as f64;
    let theta0 = lambda.powf((p - 2.0) / (p - 1.0)) / (nf * p);
    let m_coef = solution.m_coef;
    let alpha = (p - 2.0) * (lambda + nf) / (lambda * (p - 1.0));
    let gamma = (lambda - l) / (alpha * lambda);
    let tau = (p - l) / (p - 2.0);

    // Taylor certificates defining "δ₀ small enough":
    //  (1-δ)^{-κ₁} ≤ 1 + (1+ε(p-2)) κ₁ δ      with κ₁ = n(p-2)/(λ(p-1)),
    //  (1-δ)^{(p-1)/(p-2)} ≤ 1 - (1-ε)(p-1)/(p-2) δ,
    //  δ₀ ≤ (p-2)/((p-1)(1-ε))     (so the positive part can be dropped).
    let kappa1 = nf * (p - 2.0) / (lambda * (p - 1.0));
    let holds_on = |d0: f64| {
        if d0 > (p - 2.0) / ((p - 1.0) * (1.0 - epsilon)) {
            return false;
        }
        let steps = 64;
        for i in 0..=steps {
            let d = d0 * i as f64 / steps as f64;
            let lhs1 = (1.0 - d).powf(-kappa1);
            let rhs1 = 1.0 + (1.0 + epsilon * (p - 2.0)) * kappa1 * d;
            if lhs1 > rhs1 + 1e-14 {
                return false;
            }
            let lhs2 = (1.0 - d).powf((p - 1.0) / (p - 2.0));
            let rhs2 = 1.0 - (1.0 - epsilon) * (p - 1.0) / (p - 2.0) * d;
            if lhs2 > rhs2 + 1e-14 {
                return false;
            }
        }
        // endpoint slope comparison at 0: both right-hand sides must start
        // steeper than the left-hand sides, or the grid check is meaningless
        let eps_d = 1e-7f64;
        let s1 = ((1.0 - eps_d).powf(-kappa1) - 1.0) / eps_d;
        let s2 = ((1.0 - eps_d).powf((p - 1.0) / (p - 2.0)) - 1.0) / eps_d;
        s1 < (1.0 + epsilon * (p - 2.0)) * kappa1 && s2 < -(1.0 - epsilon) * (p - 1.0) / (p - 2.0) + 1e-6
    };
    let mut delta0 = 0.5;
    while delta0 > 1e-12 && !holds_on(delta0) {
        delta0 *= 0.5;
    }
    if delta0 <= 1e-12 {
        return Err(Error::SearchFailed(
            "no admissible delta_0 above the 1e-12 floor".into(),
        ));
    }

    // δ_ε small enough that both smallness conditions hold with
    // t_ε = δ_ε^{(l - p/(p-1))/α}:
    let e_t = (l - q) / alpha;
    let admissible = |d: f64| {
        let t_eps = d.powf(e_t);
        let c1 = theta0 * d.powf(l) / t_eps <= delta0;
        let c2 = m_coef * (1.0 - epsilon) * (p - 2.0) / (p - 1.0)
            * (d / t_eps.powf(1.0 / lambda)).powf(q)
            <= delta0;
        c1 && c2
    };
    let delta_eps = match delta_override {
        Some(d) => {
            if !admissible(d) {
                return Err(Error::InvalidParameter(format!(
                    "delta_eps = {d} violates the smallness certificates"
                )));
            }
            d
        }
        None => {
            let mut d = 0.5;
            while d > 1e-12 && !admissible(d) {
                d *= 0.5;
            }
            if d <= 1e-12 {
                return Err(Error::SearchFailed(
                    "no admissible delta_eps above the 1e-12 floor".into(),
                ));
            }
            d
        }
    };
    let t_eps = delta_eps.powf(e_t);

    let mut barrier = BarenblattBarrier {
        n,
        p,
        l,
        epsilon,
        theta0,
        m_coef,
        alpha,
        gamma,
        tau,
        delta0,
        delta_eps,
        t_eps,
        lower_bound_margin: f64::INFINITY,
        solution,
    };

    // Sample-verify the pointwise lower bound on the closure of Θ_ε.
    let denom = t_eps.powf((lambda + nf) / (lambda * (p - 1.0)));
    let scale = m_coef * (1.0 - epsilon).powi(2);
    let mut margin = f64::INFINITY;
    for i in 0..=40 {
        let r = delta_eps * i as f64 / 40.0;
        for jt in 0..=8 {
            let t = t_eps - theta0 * r.powf(l) * jt as f64 / 8.0;
            let lower = scale * r.powf(q) / denom;
            margin = margin.min(barrier.w(r, t) - lower);
        }
    }
    if margin < -1e-9 {
        return Err(Error::SearchFailed(format!(
            "Barenblatt lower bound violated by {margin}"
        )));
    }
    barrier.lower_bound_margin = margin;
    Ok(barrier)
}

/// The Barenblatt route to small-data regularity: scales w_ε from its
/// canonical frame onto {(x,t) ∈ Θ_{l,θ} : |x| < δ} by
/// u_ε(x,t) = A·w_ε(ax, bt + t_ε) with a = δ_ε/δ, b = (θ₀/θ)a^l, and pastes
/// against the cap M_θ(1-ε)² δ^τ. On the way down this reproduces, up to
/// the factor (1-ε)², the same admissible-oscillation coefficient as the
/// κ-barrier route.
pub fn u_tilde_epsilon(params: &Params, delta: f64, epsilon: f64) -> Result<PastedCandidate> {
    let Params { n, p, l, theta } = *params;
    require_small_data_range(params, delta)?;
    if !(l <= p) {
        return Err(Error::InvalidParameter(format!(
            "the scaled Barenblatt paste covers p/(p-1) <= l <= p, got l = {l}"
        )));
    }
    let bb = build_barenblatt_barrier(n, p, l, epsilon)?;
    let a = bb.delta_eps / delta;
    let b = (bb.theta0 / theta) * a.powf(l);
    let amp = (b / a.powf(p)).powf(1.0 / (p - 2.0));
    let t_eps = bb.t_eps;
    let inner = CandidateFunction::new(
        format!("scaled-barenblatt-barrier delta={delta} eps={epsilon}"),
        move |r, t| amp * bb.w(a * r, b * t + t_eps),
    );
    let m_theta = (p - 2.0) / p * (1.0 / (n as f64 * p * theta)).powf(1.0 / (p - 2.0));
    let tau = (p - l) / (p - 2.0);
    let cap = m_theta * (1.0 - epsilon).powi(2) * delta.powf(tau);
    paste_min_with_constant(inner, cap, delta, &DomainSpec::soda_can(*params))
}

// ---------------------------------------------------------------------------
// Min-pasting
// ---------------------------------------------------------------------------

/// min{inner, cap} inside the paste sphere, the constant cap outside.
/// Lower semicontinuity of the paste requires inner ≥ cap on the interface,
/// which is checked by dense sampling at construction.
#[derive(Clone)]
pub struct PastedCandidate {
    pub inner: CandidateFunction,
    pub cap_value: f64,
    pub paste_radius: f64,
    /// Minimum of inner - cap over the sampled interface.
    pub interface_margin: f64,
}

impl std::fmt::Debug for PastedCandidate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PastedCandidate")
            .field("inner", &self.inner.label())
            .field("cap_value", &self.cap_value)
            .field("paste_radius", &self.paste_radius)
            .field("interface_margin", &self.interface_margin)
            .finish()
    }
}

impl PastedCandidate {
    pub fn eval(&self, r: f64, t: f64) -> f64 {
        if r < self.paste_radius {
            self.inner.eval(r, t).min(self.cap_value)
        } else {
            self.cap_value
        }
    }

    pub fn candidate(&self) -> CandidateFunction {
        let this = self.clone();
        let branch = self.clone();
        CandidateFunction::new(
            format!("pasted({}, cap={})", self.inner.label(), self.cap_value),
            move |r, t| this.eval(r, t),
        )
        // negative on the inner branch, positive where the cap is active
        .with_branch(move |r, t| {
            if r >= branch.paste_radius {
                1.0
            } else {
                branch.inner.eval(r, t) - branch.cap_value
            }
        })
    }
}

/// Pastes `inner` against the constant `cap_value` at `paste_radius`,
/// verifying inner ≥ cap on the interface sphere within the domain.
pub fn paste_min_with_constant(
    inner: CandidateFunction,
    cap_value: f64,
    paste_radius: f64,
    domain: &DomainSpec,
) -> Result<PastedCandidate> {
    if !(paste_radius > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "paste radius must be > 0, got {paste_radius}"
        )));
    }
    let (t_lo, t_hi) = time_extent(domain);
    let span = t_hi - t_lo;
    let mut margin = f64::INFINITY;
    for i in 1..=512u64 {
        let t = t_lo + span * crate::sample::halton(i, 2);
        let on_interface = match domain.time_slice(t) {
            TimeSlice::Annulus { inner: a, outer: b } => a <= paste_radius && paste_radius <= b,
            TimeSlice::Ball { radius } => paste_radius <= radius,
            TimeSlice::Empty => false,
        };
        if on_interface {
            let v = inner.eval(paste_radius, t);
            if v.is_finite() {
                margin = margin.min(v - cap_value);
            }
        }
    }
    if margin < -1e-9 * (1.0 + cap_value.abs()) {
        return Err(Error::InterfaceCheckFailed {
            margin,
            radius: paste_radius,
        });
    }
    Ok(PastedCandidate {
        inner,
        cap_value,
        paste_radius,
        interface_margin: margin,
    })
}

// ---------------------------------------------------------------------------
// Barrier predicates
// ---------------------------------------------------------------------------

/// Sampler and tolerance configuration for `verify_barrier`.
#[derive(Debug, Clone, Serialize)]
pub struct SamplerConfig {
    /// Interior Halton cloud budget.
    pub interior_points: usize,
    /// Boundary samples per boundary piece.
    pub boundary_points: usize,
    /// Relative step for the residual oracle stencils.
    pub residual_h: f64,
    /// The supersolution check passes when min residual ≥ -residual_tol.
    pub residual_tol: f64,
    /// Residual samples below this radius are skipped: the polar form
    /// carries an (n-1)/r factor and the stencil floor makes finite
    /// differences untrustworthy against r^{1/2}-type profiles there.
    pub residual_r_floor: f64,
    /// Tail-to-head decay ratio required along the corner approach paths.
    pub limit_decay: f64,
    /// Steps per approach path (radius halves each step).
    pub path_steps: usize,
    /// Positivity is checked at boundary samples at distance ≥ d0 from ξ₀.
    pub d0: f64,
    /// The positivity check passes when the far-boundary minimum exceeds this.
    pub positivity_floor: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            interior_points: 1000,
            boundary_points: 256,
            residual_h: pcalc::ORACLE_H,
            residual_tol: 1e-6,
            residual_r_floor: 0.02,
            limit_decay: 0.02,
            path_steps: 60,
            d0: 0.05,
            positivity_floor: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualCheck {
    pub samples: usize,
    pub skipped: usize,
    pub clamped: usize,
    pub min: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitCheck {
    /// (head, tail) per approach path: the max |f| over the whole path and
    /// over its three innermost points.
    pub paths: Vec<(f64, f64)>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PositivityCheck {
    pub far_samples: usize,
    pub min_value: f64,
    pub pass: bool,
}

/// Outcome of the three barrier predicates for one candidate.
#[derive(Debug, Clone, Serialize)]
pub struct BarrierReport {
    pub label: String,
    pub residual: ResidualCheck,
    pub limit: LimitCheck,
    pub positivity: PositivityCheck,
    pub pass: bool,
    /// Residual samples (r, t, value) retained for export.
    pub residual_samples: Vec<(f64, f64, f64)>,
}

/// Checks the three barrier properties of `f` on `domain` at `xi0`:
/// nonnegative oracle residual on an interior cloud, decay to zero along
/// corner approach paths, and positivity on the boundary away from ξ₀.
pub fn verify_barrier(
    f: &CandidateFunction,
    domain: &DomainSpec,
    xi0: &SpaceTimePoint,
    p: f64,
    config: &SamplerConfig,
) -> BarrierReport {
    let n = domain.dim();

    // (a) supersolution check
    let cloud = interior_cloud(domain, config.interior_points);
    let mut min_res = f64::INFINITY;
    let mut clamped = 0usize;
    let mut skipped = 0usize;
    let mut samples = Vec::new();
    for pt in &cloud {
        if pt.r < config.residual_r_floor || !f.stencil_on_one_branch(pt.r, pt.t, config.residual_h)
        {
            skipped += 1;
            continue;
        }
        match pcalc::residual(f, p, n, pt.r, pt.t, config.residual_h) {
            Ok(s) if s.value.is_finite() => {
                min_res = min_res.min(s.value);
                if s.clamped {
                    clamped += 1;
                }
                samples.push((pt.r, pt.t, s.value));
            }
            _ => skipped += 1,
        }
    }
    let residual_check = ResidualCheck {
        samples: samples.len(),
        skipped,
        clamped,
        min: min_res,
        pass: samples.len() >= cloud.len() / 2 && min_res >= -config.residual_tol,
    };

    // (b) limit-zero check along interior approach paths
    let mut paths_out = Vec::new();
    let mut limit_pass = true;
    for path in corner_paths(domain, config.path_steps) {
        if path.len() < 6 {
            continue;
        }
        let vals: Vec<f64> = path.iter().map(|pt| f.eval(pt.r, pt.t).abs()).collect();
        let head = vals.iter().cloned().fold(0.0f64, f64::max);
        let tail = vals[vals.len() - 3..].iter().cloned().fold(0.0f64, f64::max);
        let ok = tail <= (config.limit_decay * head).max(1e-12);
        limit_pass &= ok;
        paths_out.push((head, tail));
    }
    let limit_check = LimitCheck {
        paths: paths_out,
        pass: limit_pass,
    };

    // (c) positivity on the far boundary
    let mut far = 0usize;
    let mut min_far = f64::INFINITY;
    for b in boundary_samples(domain, config.boundary_points) {
        let pt = SpaceTimePoint::radial(n, b.r, b.t);
        if pt.dist(xi0) < config.d0 {
            continue;
        }
        let v = f.eval(b.r, b.t);
        if v.is_finite() {
            far += 1;
            min_far = min_far.min(v);
        }
    }
    let positivity_check = PositivityCheck {
        far_samples: far,
        min_value: min_far,
        pass: far > 0 && min_far > config.positivity_floor,
    };

    let pass = residual_check.pass && limit_check.pass && positivity_check.pass;
    BarrierReport {
        label: f.label().to_string(),
        residual: residual_check,
        limit: limit_check,
        positivity: positivity_check,
        pass,
        residual_samples: samples,
    }
}

/// Witness table for the barrier-family growth property: for each k ≤ k_max,
/// the index of a member whose boundary values at distance ≥ 1/k from ξ₀
/// all exceed k.
#[derive(Debug, Clone, Serialize)]
pub struct GrowthReport {
    pub witnesses: Vec<Option<usize>>,
    pub pass: bool,
}

pub fn barrier_family_growth_check(
    family: &[CandidateFunction],
    domain: &DomainSpec,
    xi0: &SpaceTimePoint,
    k_max: usize,
) -> GrowthReport {
    let n = domain.dim();
    let boundary = boundary_samples(domain, 256);
    let mut witnesses = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let needed = k as f64;
        let radius = 1.0 / needed;
        let mut witness = None;
        'members: for (idx, f) in family.iter().enumerate() {
            for b in &boundary {
                let pt = SpaceTimePoint::radial(n, b.r, b.t);
                if pt.dist(xi0) < radius {
                    continue;
                }
                let v = f.eval(b.r, b.t);
                if !(v.is_finite() && v >= needed) {
                    continue 'members;
                }
            }
            witness = Some(idx);
            break;
        }
        witnesses.push(witness);
    }
    let pass = witnesses.iter().all(|w| w.is_some());
    GrowthReport { witnesses, pass }
}
