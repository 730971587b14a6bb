//! Space-time domains whose final point is probed for boundary regularity.
//!
//! The central family is the *soda can*
//!
//! ```text
//! Θ_{l,θ} = {(x,t) ∈ R^{n+1} : 0 < -t < θ|x|^l < θ},
//! ```
//!
//! whose time slices are annuli with inner radius (-t/θ)^{1/l} shrinking to
//! a point at t = 0. The other variants are the companion sets used by the
//! regularity arguments: the complementary Petrovskii set, generalized soda
//! cans Φ_ρ driven by a radial profile ρ, punctured cylinders, truncated
//! cans, and parabolic-scaling images.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// The parameter quadruple (n, p, l, θ): spatial dimension, nonlinearity
/// exponent of ∂ₜu = Δₚu, cusp power, and cusp width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub n: usize,
    pub p: f64,
    pub l: f64,
    pub theta: f64,
}

impl Params {
    pub fn new(n: usize, p: f64, l: f64, theta: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameter("n must be >= 1".into()));
        }
        if !(p > 1.0) || !p.is_finite() {
            return Err(Error::InvalidParameter(format!("p must be > 1, got {p}")));
        }
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::InvalidParameter(format!("l must be > 0, got {l}")));
        }
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "theta must be > 0, got {theta}"
            )));
        }
        Ok(Self { n, p, l, theta })
    }

    /// Conjugate-type exponent p/(p-1), the natural barrier growth power.
    pub fn p_conj(&self) -> f64 {
        self.p / (self.p - 1.0)
    }
}

/// A point ξ = (x, t) with the radial coordinate r = |x| cached.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceTimePoint {
    pub x: Vec<f64>,
    pub t: f64,
    r: f64,
}

impl SpaceTimePoint {
    pub fn new(x: Vec<f64>, t: f64) -> Self {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        Self { x, t, r }
    }

    /// A point on the first coordinate axis at distance `r`, in dimension `n`.
    pub fn radial(n: usize, r: f64, t: f64) -> Self {
        let mut x = vec![0.0; n];
        if n > 0 {
            x[0] = r;
        }
        Self::new(x, t)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// Euclidean distance in space-time.
    pub fn dist(&self, other: &SpaceTimePoint) -> f64 {
        let dt = self.t - other.t;
        let dx: f64 = self
            .x
            .iter()
            .zip(&other.x)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        (dx + dt * dt).sqrt()
    }
}

/// A nondecreasing radial profile ρ : (0, 1] → (0, ∞) controlling the inner
/// boundary (-t)^{1/2} ρ(-t) of a generalized soda can.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadialProfile {
    /// ρ(τ) = τ^{1/l - 1/2} / θ^{1/l}, the profile realizing Θ_{l,θ}.
    PowerType { l: f64, theta: f64 },
    /// Monotone piecewise-linear interpolation of sample points, clamped to
    /// the endpoint values outside the sampled range.
    Tabulated { tau: Vec<f64>, rho: Vec<f64> },
}

impl RadialProfile {
    pub fn power(l: f64, theta: f64) -> Result<Self> {
        if !(l > 0.0 && theta > 0.0) {
            return Err(Error::InvalidParameter(
                "power profile needs l > 0 and theta > 0".into(),
            ));
        }
        Ok(Self::PowerType { l, theta })
    }

    /// Build a tabulated profile; monotonicity is validated at load time.
    pub fn tabulated(tau: Vec<f64>, rho: Vec<f64>) -> Result<Self> {
        if tau.len() != rho.len() || tau.len() < 2 {
            return Err(Error::InvalidParameter(
                "tabulated profile needs matching tau/rho with >= 2 samples".into(),
            ));
        }
        for w in tau.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidParameter(
                    "tabulated tau must be strictly increasing".into(),
                ));
            }
        }
        for w in rho.windows(2) {
            if w[1] < w[0] {
                return Err(Error::InvalidParameter(
                    "tabulated rho must be nondecreasing".into(),
                ));
            }
        }
        if rho.iter().any(|v| *v < 0.0) {
            return Err(Error::InvalidParameter(
                "tabulated rho must be nonnegative".into(),
            ));
        }
        Ok(Self::Tabulated { tau, rho })
    }

    pub fn eval(&self, tau: f64) -> f64 {
        match self {
            Self::PowerType { l, theta } => tau.powf(1.0 / l - 0.5) / theta.powf(1.0 / l),
            Self::Tabulated { tau: ts, rho } => {
                if tau <= ts[0] {
                    return rho[0];
                }
                if tau >= ts[ts.len() - 1] {
                    return rho[rho.len() - 1];
                }
                let i = ts.partition_point(|v| *v < tau).max(1);
                let (t0, t1) = (ts[i - 1], ts[i]);
                let (r0, r1) = (rho[i - 1], rho[i]);
                r0 + (r1 - r0) * (tau - t0) / (t1 - t0)
            }
        }
    }

    /// Whether ρ(τ) → 0 as τ → 0+, checked at a geometric sample sequence.
    /// Power profiles are decided analytically by the exponent sign.
    pub fn vanishes_at_zero(&self) -> bool {
        match self {
            Self::PowerType { l, .. } => 1.0 / l - 0.5 > 0.0,
            Self::Tabulated { .. } => {
                let mut tau = 1.0;
                for _ in 0..60 {
                    tau *= 0.5;
                }
                self.eval(tau) < 1e-9
            }
        }
    }

    /// Nondecreasing on (0,1]; analytic for power profiles, sampled otherwise.
    pub fn is_nondecreasing(&self) -> bool {
        match self {
            Self::PowerType { l, .. } => 1.0 / l - 0.5 >= 0.0,
            Self::Tabulated { rho, .. } => rho.windows(2).all(|w| w[1] >= w[0]),
        }
    }
}

/// The spatial cross-section of a domain at a fixed time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum TimeSlice {
    Empty,
    /// Open annulus inner < |x| < outer.
    Annulus { inner: f64, outer: f64 },
    /// Open ball |x| < radius (center included).
    Ball { radius: f64 },
}

impl TimeSlice {
    pub fn contains_radius(&self, r: f64) -> bool {
        match *self {
            TimeSlice::Empty => false,
            TimeSlice::Annulus { inner, outer } => r > inner && r < outer,
            TimeSlice::Ball { radius } => r < radius,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, TimeSlice::Empty)
    }
}

/// The space-time domains of interest. All variants are open sets; boundary
/// points are not members.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum DomainSpec {
    /// Θ_{l,θ} = {0 < -t < θ|x|^l < θ}.
    SodaCan {
        #[serde(flatten)]
        params: Params,
    },
    /// {(x,t) : -t > θ|x|^l, -1 < t < 0}, the complementary paraboloid cusp.
    PetrovskiiSet {
        #[serde(flatten)]
        params: Params,
    },
    /// Φ_ρ = {(-t)^{1/2} ρ(-t) < |x| < ρ(1), -1 < t < 0}.
    GeneralizedSodaCan { n: usize, profile: RadialProfile },
    /// (B(0, r0) \ {0}) × (-t0, 0).
    PuncturedCylinder { n: usize, r0: f64, t0: f64 },
    /// {0 < -t < θ|x|^l, |x| < delta}.
    TruncatedSodaCan {
        #[serde(flatten)]
        params: Params,
        delta: f64,
    },
    /// Image of `inner` under (x, t) ↦ (x/a, t/b).
    ScaledImage {
        inner: Box<DomainSpec>,
        a: f64,
        b: f64,
    },
}

impl DomainSpec {
    pub fn soda_can(params: Params) -> Self {
        Self::SodaCan { params }
    }

    pub fn truncated_soda_can(params: Params, delta: f64) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(Error::InvalidParameter("delta must be > 0".into()));
        }
        Ok(Self::TruncatedSodaCan { params, delta })
    }

    pub fn punctured_cylinder(n: usize, r0: f64, t0: f64) -> Result<Self> {
        if !(r0 > 0.0 && t0 > 0.0) {
            return Err(Error::InvalidParameter(
                "punctured cylinder needs r0 > 0 and t0 > 0".into(),
            ));
        }
        Ok(Self::PuncturedCylinder { n, r0, t0 })
    }

    pub fn generalized(n: usize, profile: RadialProfile) -> Result<Self> {
        if !profile.is_nondecreasing() {
            return Err(Error::InvalidParameter(
                "generalized soda can requires a nondecreasing profile".into(),
            ));
        }
        Ok(Self::GeneralizedSodaCan { n, profile })
    }

    pub fn scaled(inner: DomainSpec, a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::InvalidParameter(
                "scaling factors must be positive".into(),
            ));
        }
        Ok(Self::ScaledImage {
            inner: Box::new(inner),
            a,
            b,
        })
    }

    /// Spatial dimension of the ambient space.
    pub fn dim(&self) -> usize {
        match self {
            Self::SodaCan { params }
            | Self::PetrovskiiSet { params }
            | Self::TruncatedSodaCan { params, .. } => params.n,
            Self::GeneralizedSodaCan { n, .. } | Self::PuncturedCylinder { n, .. } => *n,
            Self::ScaledImage { inner, .. } => inner.dim(),
        }
    }

    /// Membership in the open set. Boundary points return false; radii are
    /// compared exactly against the closed-form slice description.
    pub fn contains(&self, pt: &SpaceTimePoint) -> Result<bool> {
        if pt.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                point: pt.dim(),
                domain: self.dim(),
            });
        }
        Ok(self.contains_rt(pt.r(), pt.t))
    }

    /// Membership in radial coordinates (all variants are rotationally
    /// symmetric).
    pub fn contains_rt(&self, r: f64, t: f64) -> bool {
        self.time_slice(t).contains_radius(r)
    }

    /// The spatial cross-section {r : (x, t) ∈ domain, |x| = r} at time `t`.
    pub fn time_slice(&self, t: f64) -> TimeSlice {
        match self {
            Self::SodaCan { params } => {
                let Params { l, theta, .. } = *params;
                if t >= 0.0 || t <= -theta {
                    return TimeSlice::Empty;
                }
                let inner = (-t / theta).powf(1.0 / l);
                if inner >= 1.0 {
                    TimeSlice::Empty
                } else {
                    TimeSlice::Annulus { inner, outer: 1.0 }
                }
            }
            Self::PetrovskiiSet { params } => {
                let Params { l, theta, .. } = *params;
                if t >= 0.0 || t <= -1.0 {
                    return TimeSlice::Empty;
                }
                TimeSlice::Ball {
                    radius: (-t / theta).powf(1.0 / l),
                }
            }
            Self::GeneralizedSodaCan { profile, .. } => {
                if t >= 0.0 || t <= -1.0 {
                    return TimeSlice::Empty;
                }
                let tau = -t;
                let inner = tau.sqrt() * profile.eval(tau);
                let outer = profile.eval(1.0);
                if inner >= outer {
                    TimeSlice::Empty
                } else {
                    TimeSlice::Annulus { inner, outer }
                }
            }
            Self::PuncturedCylinder { r0, t0, .. } => {
                if t >= 0.0 || t <= -t0 {
                    TimeSlice::Empty
                } else {
                    TimeSlice::Annulus {
                        inner: 0.0,
                        outer: *r0,
                    }
                }
            }
            Self::TruncatedSodaCan { params, delta } => {
                let Params { l, theta, .. } = *params;
                if t >= 0.0 || t <= -theta * delta.powf(l) {
                    return TimeSlice::Empty;
                }
                let inner = (-t / theta).powf(1.0 / l);
                if inner >= *delta {
                    TimeSlice::Empty
                } else {
                    TimeSlice::Annulus {
                        inner,
                        outer: *delta,
                    }
                }
            }
            Self::ScaledImage { inner, a, b } => match inner.time_slice(b * t) {
                TimeSlice::Empty => TimeSlice::Empty,
                TimeSlice::Annulus { inner: i, outer: o } => TimeSlice::Annulus {
                    inner: i / a,
                    outer: o / a,
                },
                TimeSlice::Ball { radius } => TimeSlice::Ball { radius: radius / a },
            },
        }
    }

    /// Inner lateral boundary radius r_t = (-t/θ)^{1/l} of a (possibly
    /// truncated) soda can, for -θ < t < 0.
    pub fn lateral_boundary_radius(&self, t: f64) -> Result<f64> {
        let params = match self {
            Self::SodaCan { params } | Self::TruncatedSodaCan { params, .. } => params,
            _ => {
                return Err(Error::InvalidParameter(
                    "lateral boundary radius is defined for soda can variants".into(),
                ))
            }
        };
        if !(t > -params.theta && t < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "t = {t} outside (-theta, 0) = (-{}, 0)",
                params.theta
            )));
        }
        Ok((-t / params.theta).powf(1.0 / params.l))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("domain serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidParameter(format!("bad domain JSON: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn can(n: usize, p: f64, l: f64, theta: f64) -> DomainSpec {
        DomainSpec::soda_can(Params::new(n, p, l, theta).unwrap())
    }

    #[test]
    fn params_validation() {
        assert!(Params::new(0, 2.0, 1.0, 1.0).is_err());
        assert!(Params::new(2, 1.0, 1.0, 1.0).is_err());
        assert!(Params::new(2, 2.0, 0.0, 1.0).is_err());
        assert!(Params::new(2, 2.0, 1.0, -1.0).is_err());
        assert!(Params::new(3, 2.5, 2.0, 1.0).is_ok());
    }

    #[test]
    fn soda_can_membership() {
        let d = can(2, 2.0, 2.0, 1.0);
        // 0 < 0.1 < 0.25 < 1
        let inside = SpaceTimePoint::new(vec![0.5, 0.0], -0.1);
        assert!(d.contains(&inside).unwrap());
        // the axis |x| = 0 never satisfies 0 < -t < 0
        let axis = SpaceTimePoint::new(vec![0.0, 0.0], -0.1);
        assert!(!d.contains(&axis).unwrap());
        // 0.3 > theta |x|^l = 0.25
        let below = SpaceTimePoint::new(vec![0.5, 0.0], -0.3);
        assert!(!d.contains(&below).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let d = can(3, 2.0, 2.0, 1.0);
        let pt = SpaceTimePoint::new(vec![0.5, 0.0], -0.1);
        assert!(matches!(
            d.contains(&pt),
            Err(Error::DimensionMismatch { point: 2, domain: 3 })
        ));
    }

    #[test]
    fn soda_can_slices() {
        let d = can(2, 2.0, 2.0, 1.0);
        match d.time_slice(-0.25) {
            TimeSlice::Annulus { inner, outer } => {
                assert!((inner - 0.5).abs() < 1e-15);
                assert_eq!(outer, 1.0);
            }
            other => panic!("expected annulus, got {other:?}"),
        }
        // slice shrinks to empty exactly at t = -theta
        assert!(d.time_slice(-1.0).is_empty());
        assert!(d.time_slice(0.0).is_empty());
        assert!(d.time_slice(-0.999999).contains_radius(0.9999999));
    }

    #[test]
    fn punctured_cylinder_slices_are_constant() {
        let d = DomainSpec::punctured_cylinder(2, 1.0, 1.0).unwrap();
        match d.time_slice(-0.5) {
            TimeSlice::Annulus { inner, outer } => {
                assert_eq!(inner, 0.0);
                assert_eq!(outer, 1.0);
            }
            other => panic!("{other:?}"),
        }
        // the puncture excludes the axis
        assert!(!d.contains_rt(0.0, -0.5));
    }

    #[test]
    fn lateral_boundary_radius_matches_closed_form() {
        let d = can(2, 2.0, 2.0, 1.0);
        assert!((d.lateral_boundary_radius(-0.25).unwrap() - 0.5).abs() < 1e-15);

        let d = can(2, 2.0, 1.0, 1.0);
        assert!(d.lateral_boundary_radius(-1e-12).unwrap() < 1e-11);

        let d = can(2, 2.0, 3.0, 0.5);
        let r = d.lateral_boundary_radius(-0.25).unwrap();
        assert!((r - 0.5f64.powf(1.0 / 3.0)).abs() < 1e-12);
        assert!((r - 0.7937).abs() < 1e-4);

        assert!(d.lateral_boundary_radius(-0.6).is_err());
        assert!(d.lateral_boundary_radius(0.0).is_err());
    }

    #[test]
    fn soda_can_and_petrovskii_are_disjoint() {
        let params = Params::new(2, 1.5, 2.0, 1.0).unwrap();
        let can = DomainSpec::soda_can(params);
        let pet = DomainSpec::PetrovskiiSet { params };
        for i in 1..40 {
            for j in 1..40 {
                let r = i as f64 / 40.0;
                let t = -(j as f64) / 40.0 * 0.999;
                let in_can = can.contains_rt(r, t);
                let in_pet = pet.contains_rt(r, t);
                assert!(!(in_can && in_pet), "overlap at ({r}, {t})");
                // the graph -t = theta r^l belongs to neither
                let tg = -params.theta * r.powf(params.l);
                assert!(!can.contains_rt(r, tg) && !pet.contains_rt(r, tg));
            }
        }
    }

    #[test]
    fn scaled_image_membership() {
        let inner = can(2, 3.0, 2.0, 1.0);
        let scaled = DomainSpec::scaled(inner.clone(), 2.0, 8.0).unwrap();
        for i in 1..20 {
            for j in 1..20 {
                let r = i as f64 / 10.0;
                let t = -(j as f64) / 20.0;
                assert_eq!(
                    scaled.contains_rt(r, t),
                    inner.contains_rt(2.0 * r, 8.0 * t),
                    "mismatch at ({r}, {t})"
                );
            }
        }
    }

    #[test]
    fn tabulated_profile_interpolation_and_clamping() {
        let p = RadialProfile::tabulated(vec![0.1, 0.5, 1.0], vec![0.2, 0.4, 0.4]).unwrap();
        assert!((p.eval(0.3) - 0.3).abs() < 1e-15);
        assert_eq!(p.eval(0.05), 0.2); // clamped below
        assert_eq!(p.eval(2.0), 0.4); // clamped above
        assert!(RadialProfile::tabulated(vec![0.1, 0.5], vec![0.4, 0.2]).is_err());
    }

    #[test]
    fn profile_vanishing_checks() {
        assert!(RadialProfile::power(1.5, 1.0).unwrap().vanishes_at_zero());
        assert!(!RadialProfile::power(2.0, 1.0).unwrap().vanishes_at_zero());
        assert!(!RadialProfile::power(3.0, 1.0).unwrap().is_nondecreasing());
    }

    #[test]
    fn domain_json_round_trip() {
        let d = can(3, 2.5, 2.0, 1.0);
        let s = d.to_json();
        assert!(s.contains("\"variant\":\"soda_can\""), "{s}");
        assert_eq!(DomainSpec::from_json(&s).unwrap(), d);

        let g = DomainSpec::generalized(3, RadialProfile::power(1.5, 1.0).unwrap()).unwrap();
        let s = g.to_json();
        assert_eq!(DomainSpec::from_json(&s).unwrap(), g);

        let t = DomainSpec::from_json(
            r#"{"variant":"soda_can","n":3,"p":2.5,"l":2.0,"theta":1.0}"#,
        )
        .unwrap();
        assert_eq!(t, d);
    }
}
