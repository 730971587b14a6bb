//! The parabolic scaling transform ũ(x,t) = A u(ax, bt) with
//! A = (b/a^p)^{1/(p-2)}, which maps solutions to solutions,
//! supersolutions to supersolutions and barriers to barriers (p ≠ 2).
//!
//! On power-type domains the transform carries Θ_{l,θ} to Θ_{l,θ̃} with
//! θ̃ = a^l θ / b, so boundary regularity of the origin is independent of θ
//! whenever p ≠ 2.

use crate::error::{Error, Result};
use crate::geometry::Params;
use crate::pcalc::CandidateFunction;
use serde::Serialize;

/// A spatial/time dilation pair with its induced amplitude factor.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScalingTransform {
    pub a: f64,
    pub b: f64,
    pub p: f64,
    /// A = (b/a^p)^{1/(p-2)}; undefined at p = 2, which is rejected.
    pub amplitude: f64,
}

impl ScalingTransform {
    pub fn new(a: f64, b: f64, p: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::InvalidParameter(
                "scaling factors must be positive".into(),
            ));
        }
        if p == 2.0 {
            return Err(Error::InvalidParameter(
                "the amplitude (b/a^p)^{1/(p-2)} degenerates at p = 2".into(),
            ));
        }
        if !(p > 1.0) {
            return Err(Error::InvalidParameter(format!("p must be > 1, got {p}")));
        }
        let amplitude = (b / a.powf(p)).powf(1.0 / (p - 2.0));
        Ok(Self { a, b, p, amplitude })
    }

    /// θ̃ = a^l θ / b for a power-type domain with cusp exponent l.
    pub fn transformed_theta(&self, l: f64, theta: f64) -> f64 {
        self.a.powf(l) * theta / self.b
    }

    pub fn inverse(&self) -> Self {
        // A(1/a, 1/b) = 1/A(a, b)
        Self {
            a: 1.0 / self.a,
            b: 1.0 / self.b,
            p: self.p,
            amplitude: 1.0 / self.amplitude,
        }
    }
}

/// ũ(x,t) = A u(ax, bt), with chain-ruled closed-form derivatives carried
/// over when present.
pub fn transform_function(t: &ScalingTransform, u: &CandidateFunction) -> CandidateFunction {
    let (a, b, amp) = (t.a, t.b, t.amplitude);
    let label = format!("scaled(a={a}, b={b}; {})", u.label());
    let u0 = u.clone();
    let mut out = CandidateFunction::new(label, move |r, tt| amp * u0.eval(a * r, b * tt));
    if u.dr(1.0, -0.5).is_some() {
        let u1 = u.clone();
        out = out.with_dr(move |r, tt| amp * a * u1.dr(a * r, b * tt).unwrap());
    }
    if u.drr(1.0, -0.5).is_some() {
        let u2 = u.clone();
        out = out.with_drr(move |r, tt| amp * a * a * u2.drr(a * r, b * tt).unwrap());
    }
    if u.dt(1.0, -0.5).is_some() {
        let u3 = u.clone();
        out = out.with_dt(move |r, tt| amp * b * u3.dt(a * r, b * tt).unwrap());
    }
    out
}

/// Normalization target for `normalize_soda_can`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormalizeMode {
    /// Carry Θ_{l,θ} to Θ_{l,1} (a = 1, b = θ).
    UnitTheta,
    /// Carry the δ-truncated can to the full can with the same θ
    /// (a = δ, b = δ^l).
    UnitRadius { delta: f64 },
}

/// The transform normalizing a soda can, and the parameters of its image.
pub fn normalize_soda_can(params: &Params, mode: NormalizeMode) -> Result<(ScalingTransform, Params)> {
    let Params { n, p, l, theta } = *params;
    let t = match mode {
        NormalizeMode::UnitTheta => ScalingTransform::new(1.0, theta, p)?,
        NormalizeMode::UnitRadius { delta } => {
            if !(delta > 0.0) {
                return Err(Error::InvalidParameter("delta must be > 0".into()));
            }
            ScalingTransform::new(delta, delta.powf(l), p)?
        }
    };
    let new_theta = t.transformed_theta(l, theta);
    Ok((t, Params::new(n, p, l, new_theta)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barriers::{BarenblattSolution, KappaBarrier};
    use crate::geometry::DomainSpec;
    use crate::pcalc::residual;

    #[test]
    fn identity_and_arithmetic() {
        let t = ScalingTransform::new(1.0, 1.0, 3.0).unwrap();
        assert_eq!(t.amplitude, 1.0);
        let t = ScalingTransform::new(2.0, 8.0, 4.0).unwrap();
        assert!((t.amplitude - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(ScalingTransform::new(1.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn normalization_modes() {
        let params = Params::new(2, 3.0, 2.0, 4.0).unwrap();
        let (t, image) = normalize_soda_can(&params, NormalizeMode::UnitTheta).unwrap();
        assert_eq!((t.a, t.b), (1.0, 4.0));
        assert!((image.theta - 1.0).abs() < 1e-15);

        let (t, image) = normalize_soda_can(&params, NormalizeMode::UnitRadius { delta: 0.5 }).unwrap();
        assert_eq!((t.a, t.b), (0.5, 0.25));
        assert!((image.theta - params.theta).abs() < 1e-12);
    }

    #[test]
    fn compose_with_inverse_is_identity() {
        let t = ScalingTransform::new(0.5, 0.25, 3.0).unwrap();
        let inv = t.inverse();
        let u = KappaBarrier::new(0.4, 3.0, 2).unwrap().candidate();
        let tu = transform_function(&t, &u);
        let back = transform_function(&inv, &tu);
        for i in 1..10 {
            let r = 0.1 * i as f64;
            let v0 = u.eval(r, -0.3);
            let v1 = back.eval(r, -0.3);
            assert!((v0 - v1).abs() < 1e-12 * (1.0 + v0.abs()));
        }
    }

    #[test]
    fn transformed_solutions_stay_solutions() {
        // v_kappa and the Barenblatt solution keep a vanishing residual
        // after an admissible scaling
        let p = 3.0;
        let t = ScalingTransform::new(1.7, 0.6, p).unwrap();

        let v = KappaBarrier::new(0.5, p, 2).unwrap().candidate();
        let tv = transform_function(&t, &v);
        let s = residual(&tv, p, 2, 0.5, -0.2, 1e-4).unwrap();
        assert!(s.value.abs() < 1e-6, "v_kappa residual {}", s.value);

        let b = BarenblattSolution::new(2, p, 1.0).unwrap().candidate();
        let tb = transform_function(&t, &b);
        // pick a point well inside the transformed support
        let s = residual(&tb, p, 2, 0.4, 1.2, 1e-4).unwrap();
        assert!(s.value.abs() < 1e-4, "Barenblatt residual {}", s.value);
    }

    #[test]
    fn domain_covariance() {
        // pt ∈ Θ_{l,θ̃} ⟺ (a x, b t) ∈ Θ_{l,θ}
        let params = Params::new(2, 3.0, 2.0, 4.0).unwrap();
        let (t, image) = normalize_soda_can(&params, NormalizeMode::UnitTheta).unwrap();
        let outer = DomainSpec::soda_can(params);
        let inner = DomainSpec::soda_can(image);
        for i in 1..25 {
            for j in 1..25 {
                let r = i as f64 / 25.0;
                let tt = -(j as f64) / 25.0;
                assert_eq!(
                    inner.contains_rt(r, tt),
                    outer.contains_rt(t.a * r, t.b * tt),
                    "({r}, {tt})"
                );
            }
        }
    }
}
