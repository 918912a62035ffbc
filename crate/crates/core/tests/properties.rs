//! Randomized invariants of the geometry, controller, and governor.

use std::f64::consts::PI;

use proptest::prelude::*;

use unicycle_core::environment::Environment;
use unicycle_core::geometry::{
    Ball, HalfPlane, IceCreamCone, Point2, Polygon, Region, Segment, Shape, SolidCone,
    TruncatedIceCreamCone, PaddedPolyline,
};
use unicycle_core::navigation::governor_velocity;
use unicycle_core::prediction::{MotionPrediction, Predictor, PredictorKind};
use unicycle_core::unicycle::{
    forward_control, goal_alignment, perpendicular_alignment_distance, wrap_angle, ControlGains, Pose,
};

fn point() -> impl Strategy<Value = Point2> {
    (-5.0..5.0f64, -5.0..5.0f64).prop_map(|(x, y)| Point2::new(x, y))
}

fn pose() -> impl Strategy<Value = Pose> {
    (point(), -PI..PI).prop_map(|(p, th)| Pose::new(p, th))
}

fn convex_region() -> impl Strategy<Value = Region> {
    (point(), point(), 0.0..1.0f64, 0usize..4).prop_map(|(a, b, f, k)| {
        let d = a.distance(b);
        match k {
            0 => Region::Ball(Ball::new(a, 3.0 * f)),
            1 => Region::HalfPlane(HalfPlane::new(a, b)),
            2 => Region::SolidCone(SolidCone::new(a, b, f * d)),
            _ => Region::IceCreamCone(IceCreamCone::new(a, b, f * d)),
        }
    })
}

fn any_region() -> impl Strategy<Value = Region> {
    prop_oneof![
        3 => convex_region(),
        1 => (point(), point(), -PI..PI)
            .prop_map(|(a, b, h)| Region::TruncatedIceCreamCone(TruncatedIceCreamCone::new(a, b, h))),
        1 => (prop::collection::vec(point(), 1..5), 0.0..0.5f64)
            .prop_map(|(pts, pad)| Region::PaddedPolyline(PaddedPolyline::new(pts, pad))),
    ]
}

fn office() -> Environment {
    Environment::new(
        Polygon::rectangle(0.0, 0.0, 12.0, 8.0).unwrap(),
        vec![
            Polygon::rectangle(3.0, 0.0, 3.5, 5.5).unwrap(),
            Polygon::rectangle(7.0, 2.5, 7.5, 8.0).unwrap(),
            Polygon::rectangle(5.0, 0.8, 6.0, 1.8).unwrap(),
        ],
        0.25,
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn wrap_lands_in_half_open_range(a in -100.0..100.0f64) {
        let w = wrap_angle(a);
        prop_assert!((-PI..PI).contains(&w));
        let turns = (a - w) / (2.0 * PI);
        prop_assert!((turns - turns.round()).abs() < 1e-9);
    }

    #[test]
    fn alignment_components_recover_distance(p in pose(), g in point()) {
        let along = goal_alignment(&p, g);
        let lateral = perpendicular_alignment_distance(&p, g);
        let d = p.position.distance(g);
        prop_assert!((along.hypot(lateral) - d).abs() < 1e-9);
    }

    #[test]
    fn forward_speed_is_nonnegative(p in pose(), g in point(), kv in 0.1..5.0f64, kw in 0.1..5.0f64) {
        let u = forward_control(&p, g, &ControlGains::new(kv, kw).unwrap());
        prop_assert!(u.v >= 0.0);
        prop_assert!(u.omega.abs() <= kw * PI + 1e-12);
    }

    #[test]
    fn projection_is_a_fixed_point(r in convex_region(), q in point()) {
        let once = r.project(q).unwrap();
        prop_assert!(r.contains(once, 1e-9));
        let twice = r.project(once).unwrap();
        prop_assert!(once.distance(twice) < 1e-9);
    }

    #[test]
    fn zero_distance_means_membership(r in any_region(), q in point()) {
        let d = r.point_distance(q);
        prop_assert!(d >= 0.0);
        if d == 0.0 {
            prop_assert!(r.contains(q, 1e-9));
        }
        if r.contains(q, 0.0) {
            prop_assert!(d <= 1e-9);
        }
        if d > 1e-9 {
            prop_assert!(!r.contains(q, 0.0));
        }
    }

    #[test]
    fn segment_distance_is_below_sampled_points(r in any_region(), a in point(), b in point()) {
        let s = Segment::new(a, b);
        let d = r.segment_distance(&s);
        for q in [a, b, a.lerp(b, 0.5)] {
            prop_assert!(d <= r.point_distance(q) + 1e-9);
        }
    }

    #[test]
    fn governor_speed_is_bounded(fx in -10.0..10.0f64, fy in -10.0..10.0f64, sigma in 0.0..3.0f64, k in 0.1..10.0f64) {
        let u = governor_velocity(Point2::new(fx, fy), sigma, k);
        prop_assert!(u.norm() <= k * sigma + 1e-9);
    }

    #[test]
    fn safety_level_follows_inclusion(x in (0.3..11.7f64, 0.3..7.7f64), g in (0.3..11.7f64, 0.3..7.7f64), th in -PI..PI) {
        let env = office();
        let x = Point2::new(x.0, x.1);
        let g = Point2::new(g.0, g.1);
        prop_assume!(env.in_free_space(x) && env.in_free_space(g));
        let pose = Pose::new(x, th);
        let sigma = |kind| {
            let region: MotionPrediction = Predictor::new(kind, ControlGains::default()).predict(&pose, g);
            env.region_clearance(&region, x).sigma
        };
        let [b, bc, ic, tc] = [
            PredictorKind::Ball,
            PredictorKind::BoundedCone,
            PredictorKind::IceCream,
            PredictorKind::TruncatedIceCream,
        ]
        .map(sigma);
        prop_assert!(tc >= ic - 1e-9, "tc {tc} ic {ic}");
        prop_assert!(ic >= bc - 1e-9, "ic {ic} bc {bc}");
        prop_assert!(bc >= b - 1e-9, "bc {bc} b {b}");
        prop_assert!(b >= 0.0);
    }

    #[test]
    fn positive_safety_keeps_region_clear(x in (0.3..11.7f64, 0.3..7.7f64), g in (0.3..11.7f64, 0.3..7.7f64), th in -PI..PI) {
        let env = office();
        let x = Point2::new(x.0, x.1);
        let g = Point2::new(g.0, g.1);
        prop_assume!(env.in_free_space(x) && env.in_free_space(g));
        let pose = Pose::new(x, th);
        let region = Predictor::new(PredictorKind::TruncatedIceCream, ControlGains::default()).predict(&pose, g);
        let report = env.region_clearance(&region, x);
        if report.sigma > 0.0 {
            let gap = report.witness_region_point.distance(report.witness_boundary_point);
            prop_assert!((gap - report.sigma).abs() < 1e-6, "gap {gap} sigma {}", report.sigma);
            let MotionPrediction::Region(r) = &region else { unreachable!() };
            if let Some(bb) = r.bounding_ball() {
                for k in 0..64 {
                    let q = r.closest_point(bb.center + Point2::from_angle(k as f64 * PI / 32.0) * (2.0 * bb.radius));
                    prop_assert!(env.boundary_distance(q) >= report.sigma - 1e-6);
                }
            }
        }
    }
}
