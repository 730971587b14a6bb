//! Property-based invariants across the crate.

use proptest::prelude::*;
use sodacan::barriers::paste_min_with_constant;
use sodacan::geometry::{DomainSpec, Params, TimeSlice};
use sodacan::pcalc::{delta_p_radial_power, CandidateFunction};
use sodacan::wiener::{parabolic_potential, Slice, SliceMeasure};

fn can_strategy() -> impl Strategy<Value = Params> {
    (2..=4usize, 1.2f64..4.0, 0.3f64..3.0, 0.2f64..2.0)
        .prop_map(|(n, p, l, theta)| Params::new(n, p, l, theta).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn membership_matches_time_slice(params in can_strategy(), r in 0.0f64..1.5, s in 0.0f64..1.2) {
        for domain in [
            DomainSpec::soda_can(params),
            DomainSpec::PetrovskiiSet { params },
            DomainSpec::punctured_cylinder(params.n, 1.0, params.theta).unwrap(),
        ] {
            let t = -s * params.theta.min(1.0) * 0.999;
            let inside = domain.contains_rt(r, t);
            let by_slice = domain.time_slice(t).contains_radius(r);
            prop_assert_eq!(inside, by_slice);
        }
    }

    #[test]
    fn scaled_image_membership(params in can_strategy(), a in 0.3f64..3.0, b in 0.3f64..3.0,
                               r in 0.0f64..2.0, s in 0.0f64..1.0) {
        let inner = DomainSpec::soda_can(params);
        let scaled = DomainSpec::scaled(inner.clone(), a, b).unwrap();
        let t = -s * params.theta / b;
        prop_assert_eq!(scaled.contains_rt(r, t), inner.contains_rt(a * r, b * t));
    }

    #[test]
    fn power_laplacian_homogeneity(c in 0.1f64..3.0, alpha in -1.4f64..2.4,
                                   p in 1.3f64..4.5, n in 1..=5usize) {
        prop_assume!(alpha.abs() > 0.05);
        let r = 0.8;
        let v1 = delta_p_radial_power(c, alpha, p, n, r).unwrap();
        let v2 = delta_p_radial_power(2.0 * c, alpha, p, n, r).unwrap();
        let expect = (2.0f64).powf(p - 1.0) * v1;
        prop_assert!((v2 - expect).abs() <= 1e-11 * expect.abs().max(1.0));
    }

    #[test]
    fn pasted_equals_min_pointwise(cap in 0.1f64..2.0, radius in 0.2f64..0.9,
                                   slope in 0.5f64..4.0, r in 0.01f64..1.2) {
        let params = Params::new(2, 3.0, 2.0, 1.0).unwrap();
        let domain = DomainSpec::soda_can(params);
        let inner = CandidateFunction::new("ramp", move |x, _| slope * x);
        // only paste when the interface check can succeed
        prop_assume!(slope * radius >= cap);
        let pasted = paste_min_with_constant(inner, cap, radius, &domain).unwrap();
        let expected = if r < radius { (slope * r).min(cap) } else { cap };
        prop_assert_eq!(pasted.eval(r, -0.05), expected);
    }

    #[test]
    fn potential_monotone_under_enlargement(r1 in 0.2f64..1.0, grow in 0.05f64..1.0,
                                            d in 0.0f64..1.5, t0 in 0.05f64..2.0) {
        let base = SliceMeasure::new(vec![Slice { time: 0.0, radius: r1, weight: 1.0 }]);
        let bigger = SliceMeasure::new(vec![Slice { time: 0.0, radius: r1 + grow, weight: 1.0 }]);
        let added = SliceMeasure::new(vec![
            Slice { time: 0.0, radius: r1, weight: 1.0 },
            Slice { time: t0 * 0.5, radius: r1, weight: 0.5 },
        ]);
        let p0 = parabolic_potential(3, &base, d, t0).unwrap();
        prop_assert!(parabolic_potential(3, &bigger, d, t0).unwrap() >= p0 - 1e-12);
        prop_assert!(parabolic_potential(3, &added, d, t0).unwrap() >= p0 - 1e-12);
    }

    #[test]
    fn slice_mass_formula(r in 0.1f64..2.0, w in 0.1f64..3.0, n in 2..=5usize) {
        let mu = SliceMeasure::new(vec![
            Slice { time: 0.0, radius: r, weight: w },
            Slice { time: 1.0, radius: 2.0 * r, weight: 0.5 },
        ]);
        let omega = sodacan::special::unit_ball_volume(n);
        let expect = w * omega * r.powi(n as i32)
            + 0.5 * omega * (2.0 * r).powi(n as i32);
        prop_assert!((mu.total_mass(n) - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn slices_never_disagree_with_lateral_radius(params in can_strategy(), s in 0.01f64..0.99) {
        let domain = DomainSpec::soda_can(params);
        let t = -s * params.theta;
        let lateral = domain.lateral_boundary_radius(t).unwrap();
        match domain.time_slice(t) {
            TimeSlice::Annulus { inner, .. } => prop_assert!((inner - lateral).abs() < 1e-12),
            TimeSlice::Empty => prop_assert!(lateral >= 1.0),
            TimeSlice::Ball { .. } => prop_assert!(false, "soda can slices are annuli"),
        }
    }
}
