//! Scene and speed-profile drawings.

use std::fmt::Write;

use unicycle_core::environment::Environment;
use unicycle_core::geometry::{Point2, Region, Shape};
use unicycle_core::navigation::{LogRow, Scenario};
use unicycle_core::prediction::{MotionPrediction, PredictorKind};
use unicycle_core::unicycle::Pose;

fn color(kind: PredictorKind) -> &'static str {
    match kind {
        PredictorKind::Ball => "#d4a017",
        PredictorKind::BoundedCone => "#2e8b57",
        PredictorKind::IceCream => "#1f77b4",
        PredictorKind::TruncatedIceCream => "#9467bd",
        PredictorKind::ForwardSim => "#d62728",
    }
}

fn points_attr(points: impl IntoIterator<Item = Point2>) -> String {
    let mut s = String::new();
    for (i, p) in points.into_iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{:.4},{:.4}", p.x, p.y);
    }
    s
}

/// Boundary of a region that is star-shaped about `center`, traced by
/// bisection along rays.
fn radial_outline(shape: &dyn Shape, center: Point2, reach: f64, rays: usize) -> Vec<Point2> {
    (0..rays)
        .map(|k| {
            let dir = Point2::from_angle(k as f64 * std::f64::consts::TAU / rays as f64);
            let (mut lo, mut hi) = (0.0, reach);
            for _ in 0..40 {
                let mid = 0.5 * (lo + hi);
                if shape.contains(center + dir * mid, 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            center + dir * lo
        })
        .collect()
}

/// SVG element drawing a prediction made toward `goal`.
fn prediction_element(pred: &MotionPrediction, goal: Point2, style: &str) -> String {
    match pred {
        MotionPrediction::Region(Region::Ball(b)) => format!(
            r#"<circle cx="{:.4}" cy="{:.4}" r="{:.4}" {style}/>"#,
            b.center.x, b.center.y, b.radius
        ),
        MotionPrediction::Region(Region::PaddedPolyline(pl)) => format!(
            r#"<polyline points="{}" fill="none" stroke-linecap="round" stroke-linejoin="round" stroke-width="{:.4}" {style}/>"#,
            points_attr(pl.points.iter().copied()),
            (2.0 * pl.pad).max(1e-3)
        ),
        other => {
            let reach = other
                .bounding_ball()
                .map_or(1.0, |b| b.center.distance(goal) + b.radius);
            format!(
                r#"<polygon points="{}" {style}/>"#,
                points_attr(radial_outline(other, goal, reach, 360))
            )
        }
    }
}

fn polygon_element(vertices: &[Point2], style: &str) -> String {
    format!(r#"<polygon points="{}" {style}/>"#, points_attr(vertices.iter().copied()))
}

struct Frame {
    lo: Point2,
    hi: Point2,
    /// Stroke width in world units.
    line: f64,
}

impl Frame {
    fn new(env: &Environment) -> Self {
        let (lo, hi) = env.workspace().bounds();
        let line = (hi.x - lo.x).max(hi.y - lo.y) / 400.0;
        Self { lo, hi, line }
    }

    fn open(&self, out: &mut String) {
        let (w, h) = (self.hi.x - self.lo.x, self.hi.y - self.lo.y);
        let px = 800.0 / w.max(h);
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="{} {} {} {}">"#,
            w * px,
            h * px,
            self.lo.x,
            self.lo.y,
            w,
            h
        );
        // World y points up.
        let _ = writeln!(
            out,
            r#"<g transform="matrix(1 0 0 -1 0 {})">"#,
            self.lo.y + self.hi.y
        );
    }
}

/// Environment, path, robot and governor trajectories, and prediction
/// snapshots every `snapshot_interval` seconds.
pub fn scene_svg(scenario: &Scenario, rows: &[LogRow], snapshot_interval: f64) -> String {
    let env = &scenario.environment;
    let frame = Frame::new(env);
    let lw = frame.line;
    let mut out = String::new();
    frame.open(&mut out);

    let ws_style = format!(r##"fill="#ffffff" stroke="#000000" stroke-width="{:.4}""##, 2.0 * lw);
    let _ = writeln!(out, "{}", polygon_element(env.workspace().vertices(), &ws_style));
    for obs in env.obstacles() {
        let _ = writeln!(
            out,
            "{}",
            polygon_element(obs.vertices(), r##"fill="#808080" stroke="none""##)
        );
    }

    let kind = scenario.predictor.kind;
    let snap_style = format!(
        r#"fill="{0}" fill-opacity="0.12" stroke="{0}" stroke-opacity="0.6" stroke-width="{1:.4}""#,
        color(kind),
        0.5 * lw
    );
    let mut next_snapshot = 0.0;
    for r in rows {
        if r.t + 1e-9 < next_snapshot {
            continue;
        }
        next_snapshot += snapshot_interval;
        let pose = Pose::new(Point2::new(r.x, r.y), r.theta);
        let goal = Point2::new(r.gx, r.gy);
        let pred = scenario.predictor.predict(&pose, goal);
        let style = if matches!(pred, MotionPrediction::Region(Region::PaddedPolyline(_))) {
            format!(r#"stroke="{}" stroke-opacity="0.25""#, color(kind))
        } else {
            snap_style.clone()
        };
        let _ = writeln!(out, "{}", prediction_element(&pred, goal, &style));
    }

    let _ = writeln!(
        out,
        r##"<polyline points="{}" fill="none" stroke="#ff8c00" stroke-dasharray="{:.4}" stroke-width="{:.4}"/>"##,
        points_attr(scenario.path.waypoints().iter().copied()),
        4.0 * lw,
        1.5 * lw
    );
    let _ = writeln!(
        out,
        r##"<polyline points="{}" fill="none" stroke="#000000" stroke-width="{:.4}"/>"##,
        points_attr(rows.iter().map(|r| Point2::new(r.x, r.y))),
        1.5 * lw
    );
    let _ = writeln!(
        out,
        r##"<polyline points="{}" fill="none" stroke="#0000cd" stroke-width="{:.4}"/>"##,
        points_attr(rows.iter().map(|r| Point2::new(r.gx, r.gy))),
        lw
    );
    if let Some(last) = rows.last() {
        let _ = writeln!(
            out,
            r##"<circle cx="{:.4}" cy="{:.4}" r="{:.4}" fill="none" stroke="#000000" stroke-width="{:.4}"/>"##,
            last.x,
            last.y,
            env.robot_radius(),
            lw
        );
    }
    out.push_str("</g>\n</svg>\n");
    out
}

/// Speed against time, one line per run.
pub fn speeds_svg(runs: &[(PredictorKind, &[LogRow])]) -> String {
    let (w, h, margin) = (800.0, 400.0, 50.0);
    let t_max = runs
        .iter()
        .filter_map(|(_, rows)| rows.last().map(|r| r.t))
        .fold(1e-9, f64::max);
    let v_max = runs
        .iter()
        .flat_map(|(_, rows)| rows.iter().map(|r| r.v))
        .fold(1e-9, f64::max)
        * 1.05;
    let sx = |t: f64| margin + t / t_max * (w - 2.0 * margin);
    let sy = |v: f64| h - margin - v / v_max * (h - 2.0 * margin);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(
        out,
        r##"<rect x="0" y="0" width="{w}" height="{h}" fill="#ffffff"/>"##
    );
    let _ = writeln!(
        out,
        r##"<polyline points="{x0},{y1} {x0},{y0} {x1},{y0}" fill="none" stroke="#000000"/>"##,
        x0 = margin,
        y0 = h - margin,
        x1 = w - margin,
        y1 = margin
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">time (s), 0 to {t_max:.1}</text>"#,
        w / 2.0,
        h - 15.0
    );
    let _ = writeln!(
        out,
        r#"<text x="15" y="{}" font-size="12" transform="rotate(-90 15 {})" text-anchor="middle">speed (m/s), 0 to {v_max:.2}</text>"#,
        h / 2.0,
        h / 2.0
    );
    for (i, (kind, rows)) in runs.iter().enumerate() {
        // At most ~2000 vertices per line.
        let stride = (rows.len() / 2000).max(1);
        let pts = rows
            .iter()
            .step_by(stride)
            .map(|r| format!("{:.2},{:.2}", sx(r.t), sy(r.v)))
            .collect::<Vec<_>>()
            .join(" ");
        let _ = writeln!(
            out,
            r#"<polyline points="{pts}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
            color(*kind)
        );
        let ly = margin + 16.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{ly}" font-size="12" fill="{}">{}</text>"#,
            w - margin - 40.0,
            color(*kind),
            kind.label()
        );
    }
    out.push_str("</svg>\n");
    out
}
