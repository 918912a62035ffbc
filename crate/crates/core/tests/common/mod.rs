//! Helpers shared by the integration tests: random inputs, region samplers,
//! and brute-force oracles written without the library's geometry code.
#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use unicycle_core::geometry::{
    Ball, HalfPlane, IceCreamCone, PaddedPolyline, Point2, Region, Shape, SolidCone,
    TruncatedIceCreamCone,
};
use unicycle_core::prediction::{
    predict_ball, predict_bounded_cone, predict_ice_cream, predict_truncated, BoundedConePrediction,
    MotionPrediction,
};
use unicycle_core::unicycle::{
    goal_alignment, perpendicular_alignment_distance, simulate_to_goal, ClosedLoopTrajectory,
    ControlGains, Pose,
};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_point(rng: &mut StdRng, extent: f64) -> Point2 {
    Point2::new(rng.random_range(-extent..extent), rng.random_range(-extent..extent))
}

pub fn random_pose(rng: &mut StdRng, extent: f64) -> Pose {
    Pose::new(random_point(rng, extent), rng.random_range(-PI..PI))
}

/// Pose facing at most 90° away from the goal.
pub fn random_aligned_pose(rng: &mut StdRng, goal: Point2, extent: f64) -> Pose {
    let position = random_point(rng, extent);
    let bearing = (goal.y - position.y).atan2(goal.x - position.x);
    Pose::new(position, bearing + rng.random_range(-FRAC_PI_2..FRAC_PI_2))
}

/// A random region of any kind, including ball ∩ cone.
pub fn random_region(rng: &mut StdRng) -> MotionPrediction {
    let a = random_point(rng, 5.0);
    let b = random_point(rng, 5.0);
    let d = a.distance(b);
    match rng.random_range(0..7) {
        0 => MotionPrediction::Region(Region::Ball(Ball::new(a, rng.random_range(0.0..3.0)))),
        1 => MotionPrediction::Region(Region::HalfPlane(HalfPlane::new(a, b))),
        2 => MotionPrediction::Region(Region::SolidCone(SolidCone::new(a, b, rng.random_range(0.0..d)))),
        3 => MotionPrediction::Region(Region::IceCreamCone(IceCreamCone::new(
            a,
            b,
            rng.random_range(0.0..d),
        ))),
        4 => MotionPrediction::Region(Region::TruncatedIceCreamCone(TruncatedIceCreamCone::new(
            a,
            b,
            rng.random_range(-3.0..3.0),
        ))),
        5 => {
            let pts = (0..rng.random_range(1..6)).map(|_| random_point(rng, 5.0)).collect();
            MotionPrediction::Region(Region::PaddedPolyline(PaddedPolyline::new(
                pts,
                rng.random_range(0.0..0.5),
            )))
        }
        _ => {
            let pose = random_pose(rng, 5.0);
            MotionPrediction::BoundedCone(predict_bounded_cone(&pose, b))
        }
    }
}

// Oracles. Each returns the Euclidean distance from `p` to a set.

fn norm(v: Point2) -> f64 {
    (v.x * v.x + v.y * v.y).sqrt()
}

pub fn point_segment(a: Point2, b: Point2, p: Point2) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0)
    };
    norm(Point2::new(a.x + t * dx - p.x, a.y + t * dy - p.y))
}

pub fn ball(c: Point2, r: f64, p: Point2) -> f64 {
    (norm(p - c) - r).max(0.0)
}

pub fn half_plane(anchor: Point2, toward: Point2, p: Point2) -> f64 {
    let n = toward - anchor;
    let len = norm(n);
    if len == 0.0 {
        return 0.0;
    }
    (-((p - anchor).dot(n)) / len).max(0.0)
}

/// Angle between `v` and `axis` in `[0, π]`.
fn angle_between(v: Point2, axis: Point2) -> f64 {
    let c = v.dot(axis) / (norm(v) * norm(axis));
    c.clamp(-1.0, 1.0).acos()
}

pub fn cone(apex: Point2, base: Point2, clearance: f64, p: Point2) -> f64 {
    let axis = base - apex;
    let d = norm(axis);
    if clearance > d {
        return 0.0;
    }
    let rel = p - apex;
    let dist = norm(rel);
    if d == 0.0 || dist == 0.0 {
        return dist;
    }
    let beta = (clearance / d).min(1.0).asin();
    let phi = angle_between(rel, axis);
    if phi <= beta {
        0.0
    } else if phi >= beta + FRAC_PI_2 {
        dist
    } else {
        dist * (phi - beta).sin()
    }
}

fn in_triangle(a: Point2, b: Point2, c: Point2, p: Point2) -> bool {
    let s1 = (b - a).cross(p - a);
    let s2 = (c - b).cross(p - b);
    let s3 = (a - c).cross(p - c);
    let area = (b - a).cross(c - a);
    if area.abs() < 1e-300 {
        return false;
    }
    (s1 >= 0.0 && s2 >= 0.0 && s3 >= 0.0) || (s1 <= 0.0 && s2 <= 0.0 && s3 <= 0.0)
}

pub fn triangle(a: Point2, b: Point2, c: Point2, p: Point2) -> f64 {
    if in_triangle(a, b, c, p) {
        return 0.0;
    }
    point_segment(a, b, p)
        .min(point_segment(b, c, p))
        .min(point_segment(c, a, p))
}

/// Tangent points from `apex` to the circle `(c, r)`, via polar angles.
pub fn tangent_points(apex: Point2, c: Point2, r: f64) -> [Point2; 2] {
    let d = norm(c - apex);
    let axis_angle = (c.y - apex.y).atan2(c.x - apex.x);
    let beta = (r / d).asin();
    let len = (d * d - r * r).max(0.0).sqrt();
    [axis_angle + beta, axis_angle - beta]
        .map(|a| Point2::new(apex.x + len * a.cos(), apex.y + len * a.sin()))
}

pub fn ice_cream(apex: Point2, c: Point2, r: f64, p: Point2) -> f64 {
    if r >= norm(c - apex) {
        return ball(c, r, p);
    }
    let [t1, t2] = tangent_points(apex, c, r);
    if ball(c, r, p) == 0.0 || in_triangle(apex, t1, t2, p) {
        return 0.0;
    }
    ball(c, r, p)
        .min(point_segment(apex, t1, p))
        .min(point_segment(apex, t2, p))
}

pub fn truncated(apex: Point2, base: Point2, heading: f64, p: Point2) -> f64 {
    let o = Point2::new(heading.cos(), heading.sin());
    let n = Point2::new(-heading.sin(), heading.cos());
    let foot = apex + o * o.dot(base - apex);
    let r = n.dot(base - apex).abs();
    triangle(apex, base, foot, p).min(ball(base, r, p))
}

pub fn padded_polyline(points: &[Point2], pad: f64, p: Point2) -> f64 {
    let core = if points.len() == 1 {
        norm(p - points[0])
    } else {
        points
            .windows(2)
            .map(|w| point_segment(w[0], w[1], p))
            .fold(f64::INFINITY, f64::min)
    };
    (core - pad).max(0.0)
}

/// Points where the ray `apex + s·e` (`s ≥ 0`) stays inside the circle.
fn ray_in_circle(apex: Point2, e: Point2, c: Point2, r: f64) -> Option<(Point2, Point2)> {
    let rel = apex - c;
    let b = e.dot(rel);
    let disc = b * b - (rel.dot(rel) - r * r);
    if disc < 0.0 {
        return None;
    }
    let (s0, s1) = ((-b - disc.sqrt()).max(0.0), -b + disc.sqrt());
    (s1 >= 0.0).then(|| (apex + e * s0, apex + e * s1))
}

pub fn bounded_cone(bc: &BoundedConePrediction, p: Point2) -> f64 {
    let (c, big_r) = (bc.ball.center, bc.ball.radius);
    let Some(k) = bc.cone else {
        return ball(c, big_r, p);
    };
    let d = norm(k.base - k.apex);
    if k.base_clearance > d {
        return ball(c, big_r, p);
    }
    if d == 0.0 {
        return norm(p - k.apex);
    }
    let inside = |q: Point2, tol: f64| ball(c, big_r, q) <= tol && cone(k.apex, k.base, k.base_clearance, q) <= tol;
    if inside(p, 0.0) {
        return 0.0;
    }
    // Boundary pieces: the arc inside the cone and the ray pieces inside the ball.
    let mut best = f64::INFINITY;
    let on_circle = if norm(p - c) > 0.0 { c + (p - c) * (big_r / norm(p - c)) } else { c };
    if cone(k.apex, k.base, k.base_clearance, on_circle) <= 1e-12 {
        best = best.min(norm(p - on_circle));
    }
    let axis_angle = (k.base.y - k.apex.y).atan2(k.base.x - k.apex.x);
    let beta = (k.base_clearance / d).min(1.0).asin();
    for a in [axis_angle + beta, axis_angle - beta] {
        let e = Point2::new(a.cos(), a.sin());
        if let Some((q0, q1)) = ray_in_circle(k.apex, e, c, big_r) {
            best = best.min(point_segment(q0, q1, p));
        }
    }
    if ball(c, big_r, k.apex) == 0.0 {
        best = best.min(norm(p - k.apex));
    }
    best
}

pub fn region(r: &Region, p: Point2) -> f64 {
    match r {
        Region::Ball(b) => ball(b.center, b.radius, p),
        Region::HalfPlane(h) => half_plane(h.anchor, h.toward, p),
        Region::SolidCone(c) => cone(c.apex, c.base, c.base_clearance, p),
        Region::IceCreamCone(ic) => ice_cream(ic.apex, ic.base, ic.base_radius, p),
        Region::TruncatedIceCreamCone(tc) => truncated(tc.apex, tc.base, tc.heading, p),
        Region::PaddedPolyline(pl) => padded_polyline(&pl.points, pl.pad, p),
    }
}

pub fn prediction(m: &MotionPrediction, p: Point2) -> f64 {
    match m {
        MotionPrediction::Region(r) => region(r, p),
        MotionPrediction::BoundedCone(bc) => bounded_cone(bc, p),
    }
}

/// Minimum of `f` over `n + 1` evenly spaced points of the segment `a b`.
pub fn brute_segment_min(a: Point2, b: Point2, n: usize, f: impl Fn(Point2) -> f64) -> f64 {
    (0..=n)
        .map(|i| f(a.lerp(b, i as f64 / n as f64)))
        .fold(f64::INFINITY, f64::min)
}

// Dykstra's alternating projections onto a ball and a solid cone.

fn project_ball(c: Point2, r: f64, p: Point2) -> Point2 {
    let d = norm(p - c);
    if d <= r {
        p
    } else {
        c + (p - c) * (r / d)
    }
}

fn project_cone(apex: Point2, base: Point2, clearance: f64, p: Point2) -> Point2 {
    let axis = base - apex;
    let d = norm(axis);
    if clearance > d {
        return p;
    }
    let rel = p - apex;
    if d == 0.0 || norm(rel) == 0.0 {
        return apex;
    }
    let beta = (clearance / d).min(1.0).asin();
    let phi = angle_between(rel, axis);
    if phi <= beta {
        return p;
    }
    if phi >= beta + FRAC_PI_2 {
        return apex;
    }
    let side = if axis.cross(rel) >= 0.0 { 1.0 } else { -1.0 };
    let a = axis.y.atan2(axis.x) + side * beta;
    let e = Point2::new(a.cos(), a.sin());
    apex + e * e.dot(rel)
}

pub fn dykstra_bounded_cone(bc: &BoundedConePrediction, p: Point2, iters: usize) -> Point2 {
    let Some(k) = bc.cone else {
        return project_ball(bc.ball.center, bc.ball.radius, p);
    };
    let mut x = p;
    let (mut pa, mut qa) = (Point2::ORIGIN, Point2::ORIGIN);
    for _ in 0..iters {
        let y = project_ball(bc.ball.center, bc.ball.radius, x + pa);
        pa = x + pa - y;
        let next = project_cone(k.apex, k.base, k.base_clearance, y + qa);
        qa = y + qa - next;
        let moved = norm(next - x);
        x = next;
        if moved < 1e-15 {
            break;
        }
    }
    x
}

/// Points of a bounded shape: half drawn uniformly from the bounding ball and
/// kept if inside, half pulled onto the set from random outside points.
pub fn sample_points(shape: &dyn Shape, rng: &mut StdRng, n: usize) -> Vec<Point2> {
    let bb = shape.bounding_ball().expect("sampling needs a bounded shape");
    let reach = bb.radius.max(1e-9);
    let mut out = Vec::with_capacity(n);
    let mut attempts = 0;
    while out.len() < n / 2 && attempts < 50 * n {
        attempts += 1;
        let q = bb.center + random_point(rng, reach);
        if shape.contains(q, 0.0) {
            out.push(q);
        }
    }
    while out.len() < n {
        let q = bb.center + random_point(rng, 2.0 * reach);
        out.push(shape.closest_point(q));
    }
    out
}

// Property checkers shared by the integration tests and the acceptance run.
// Each returns a description of the first violation found.

pub const SAMPLE_DT: f64 = 0.01;
pub const SAMPLE_HORIZON: f64 = 60.0;
pub const SAMPLE_CAPTURE: f64 = 1e-3;

/// Random start pose and goal, the goal at least 0.1 away.
pub fn random_pair(rng: &mut StdRng, extent: f64) -> (Pose, Point2) {
    loop {
        let pose = random_pose(rng, extent);
        let goal = random_point(rng, extent);
        if pose.position.distance(goal) > 0.1 {
            return (pose, goal);
        }
    }
}

pub fn trajectory(pose: Pose, goal: Point2, gains: &ControlGains) -> ClosedLoopTrajectory {
    simulate_to_goal(pose, goal, gains, SAMPLE_DT, SAMPLE_HORIZON, SAMPLE_CAPTURE)
}

/// The four closed-form predictions at one pose, with their labels.
pub fn closed_form(pose: &Pose, goal: Point2) -> [(&'static str, MotionPrediction); 4] {
    [
        ("ball", MotionPrediction::Region(predict_ball(pose, goal))),
        ("bc", MotionPrediction::BoundedCone(predict_bounded_cone(pose, goal))),
        ("ic", MotionPrediction::Region(predict_ice_cream(pose, goal))),
        ("tc", MotionPrediction::Region(predict_truncated(pose, goal))),
    ]
}

/// Every pose of the closed-loop trajectory lies in each prediction made at
/// the start.
pub fn check_containment(pose: Pose, goal: Point2, gains: &ControlGains, tol: f64) -> Result<usize, String> {
    let traj = trajectory(pose, goal, gains);
    for (name, region) in closed_form(&pose, goal) {
        for (t, q) in traj.times.iter().zip(&traj.poses) {
            let d = region.point_distance(q.position);
            if d > tol {
                return Err(format!("{name}: {pose:?} -> {goal:?} leaves at t = {t} by {d}"));
            }
        }
    }
    Ok(traj.poses.len())
}

/// Sampled points of the later prediction lie in the earlier one, for
/// `pairs` random time pairs along the trajectory.
pub fn check_positive_inclusion(
    rng: &mut StdRng,
    traj: &ClosedLoopTrajectory,
    goal: Point2,
    predict: impl Fn(&Pose, Point2) -> Region,
    pairs: usize,
    samples: usize,
    tol: f64,
) -> Result<(), String> {
    let n = traj.poses.len();
    if n < 2 {
        return Ok(());
    }
    for _ in 0..pairs {
        let i = rng.random_range(0..n - 1);
        let j = rng.random_range(i + 1..n);
        let early = predict(&traj.poses[i], goal);
        let late = predict(&traj.poses[j], goal);
        for q in sample_points(&late, rng, samples) {
            let d = early.point_distance(q);
            if d > tol {
                return Err(format!(
                    "t = {} vs t' = {}: {q:?} outside by {d}",
                    traj.times[i], traj.times[j]
                ));
            }
        }
    }
    Ok(())
}

/// TC ⊆ IC ⊆ BC ⊆ B by sampling each smaller set.
pub fn check_inclusion_chain(rng: &mut StdRng, pose: &Pose, goal: Point2, samples: usize, tol: f64) -> Result<(), String> {
    let [(_, b), (_, bc), (_, ic), (_, tc)] = closed_form(pose, goal);
    for (inner_name, inner, outer_name, outer) in
        [("tc", &tc, "ic", &ic), ("ic", &ic, "bc", &bc), ("bc", &bc, "ball", &b)]
    {
        for q in sample_points(inner, rng, samples) {
            let d = outer.point_distance(q);
            if d > tol {
                return Err(format!("{pose:?} -> {goal:?}: {inner_name} point {q:?} outside {outer_name} by {d}"));
            }
        }
    }
    Ok(())
}

/// Closed-loop controller properties along one trajectory: distance to the goal never
/// grows, alignment is reached by `1/k_omega` and then kept, the lateral
/// offset shrinks while aligned, and (if `converge`) the goal is reached
/// within the horizon.
pub fn check_closed_loop(pose: Pose, goal: Point2, gains: &ControlGains, slack: f64, converge: bool) -> Result<(), String> {
    let traj = trajectory(pose, goal, gains);
    let tag = format!("{pose:?} -> {goal:?}");
    let dist: Vec<f64> = traj.poses.iter().map(|p| p.position.distance(goal)).collect();
    for (k, w) in dist.windows(2).enumerate() {
        if w[1] > w[0] + slack {
            return Err(format!("{tag}: distance grew at step {k}: {} -> {}", w[0], w[1]));
        }
    }

    let align: Vec<f64> = traj.poses.iter().map(|p| goal_alignment(p, goal)).collect();
    let t_align = 1.0 / gains.k_omega;
    if let Some(k) = traj.times.iter().position(|&t| t >= t_align - 1e-12) {
        if align[k] <= 0.0 {
            return Err(format!("{tag}: not aligned at t = {} ({})", traj.times[k], align[k]));
        }
    }
    if let Some(first) = align.iter().position(|&a| a >= 0.0) {
        if let Some(k) = (first..align.len()).find(|&k| align[k] < -slack) {
            return Err(format!("{tag}: lost alignment at t = {} ({})", traj.times[k], align[k]));
        }
        for k in first..traj.poses.len() - 1 {
            let a = perpendicular_alignment_distance(&traj.poses[k], goal);
            let b = perpendicular_alignment_distance(&traj.poses[k + 1], goal);
            if b > a + slack {
                return Err(format!("{tag}: lateral offset grew at t = {}: {a} -> {b}", traj.times[k]));
            }
        }
    }

    if converge && !dist.iter().any(|&d| d < 1e-2) {
        return Err(format!("{tag}: still {} away after the horizon", dist[dist.len() - 1]));
    }
    Ok(())
}
