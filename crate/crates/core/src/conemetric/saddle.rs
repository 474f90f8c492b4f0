//! Geodesic segments joining singular points, found by propagating angular
//! windows of directions through the developed triangles.

use serde::{Deserialize, Serialize};

use super::trace::{geodesic_trace, Termination, TraceStart};
use super::{arc_length, ConeSphericalMetric, Point3, SideRef};
use crate::error::Result;

/// A geodesic from one singular point to another with no singular point in between.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaddleConnection {
    pub from: usize,
    /// Departure angle coordinate at `from`.
    pub from_angle: f64,
    pub to: usize,
    /// Angle coordinate at `to` of the incoming direction.
    pub to_angle: f64,
    pub length: f64,
    /// Number of triangles crossed.
    pub crossings: usize,
}

/// Result of a connection search.
#[derive(Debug, Clone, Default)]
pub struct ConnectionSearch {
    pub connections: Vec<SaddleConnection>,
    /// Whether some window was dropped because of the depth budget.
    pub depth_limited: bool,
}

#[derive(Clone)]
struct Window {
    triangle: usize,
    entry: usize,
    source: Point3,
    /// Tangent at the source along the low boundary of the window.
    low_tangent: Point3,
    low_angle: f64,
    high_angle: f64,
    low_normal: Point3,
    high_normal: Point3,
    depth: usize,
}

fn tangent_towards(p: &Point3, q: &Point3) -> Point3 {
    (q - p * p.dot(q)).normalize()
}

/// Distance from `s` to the great-circle arc from `a` to `b` (shorter than `π`).
fn distance_to_arc(s: &Point3, a: &Point3, b: &Point3) -> f64 {
    let ends = arc_length(s, a).min(arc_length(s, b));
    let n = a.cross(b).normalize();
    let foot = s - n * n.dot(s);
    if foot.norm() < 1e-15 {
        return ends;
    }
    let foot = foot.normalize();
    if a.cross(&foot).dot(&n) >= 0.0 && foot.cross(b).dot(&n) >= 0.0 {
        arc_length(s, &foot).min(ends)
    } else {
        ends
    }
}

/// All connections of length below `max_length` leaving the singular points
/// of `m`, using at most `depth` triangle crossings per window.
pub fn saddle_connections(
    m: &ConeSphericalMetric,
    max_length: f64,
    depth: usize,
) -> Result<ConnectionSearch> {
    let mut out = ConnectionSearch::default();
    for p in 0..m.num_points() {
        if m.is_singular(p) && !m.point(p).boundary {
            let found = connections_from(m, p, max_length, depth)?;
            out.depth_limited |= found.depth_limited;
            out.connections.extend(found.connections);
        }
    }
    Ok(out)
}

/// Connections leaving point `p`.
pub fn connections_from(
    m: &ConeSphericalMetric,
    p: usize,
    max_length: f64,
    depth: usize,
) -> Result<ConnectionSearch> {
    let max_length = max_length.min(std::f64::consts::PI - 1e-9);
    let mut out = ConnectionSearch::default();
    let mut stack = Vec::new();
    for &(t, c) in m.link(p) {
        // Along the first side of the sector.
        let start = m.offset(t, c);
        let path = geodesic_trace(
            m,
            TraceStart::AtPoint {
                point: p,
                angle: start,
            },
            max_length,
        )?;
        if let Termination::ConePoint { point, arrival } = path.termination {
            out.connections.push(SaddleConnection {
                from: p,
                from_angle: start,
                to: point,
                to_angle: arrival,
                length: path.length,
                crossings: path.crossings.len(),
            });
        }
        // The open sector: its window is the opposite side.
        let e = m.embedding(t);
        let s = e[c];
        let (a, b) = (e[(c + 1) % 3], e[(c + 2) % 3]);
        push_across(
            m,
            &mut stack,
            &mut out,
            Window {
                triangle: t,
                entry: usize::MAX,
                source: s,
                low_tangent: tangent_towards(&s, &a),
                low_angle: start,
                high_angle: start + m.triangle(t).angle(c),
                low_normal: s.cross(&a).normalize(),
                high_normal: s.cross(&b).normalize(),
                depth: 0,
            },
            (c + 1) % 3,
            max_length,
            depth,
        );
    }

    while let Some(w) = stack.pop() {
        let e = *m.embedding(w.triangle);
        let j = w.entry;
        let (ea, eb) = ((j + 1) % 3, j);
        let apex = (j + 2) % 3;
        let c = e[apex];
        let s = w.source;
        // Which end of the entry side lies on the low side of the window.
        let (low_end, high_end) = if s.dot(&e[ea].cross(&e[eb])) > 0.0 {
            (ea, eb)
        } else {
            (eb, ea)
        };
        let side_between = |x: usize, y: usize| -> usize {
            // Side of the triangle joining corners x and y.
            if (x + 1) % 3 == y {
                x
            } else {
                y
            }
        };
        let low_side = side_between(low_end, apex);
        let high_side = side_between(apex, high_end);

        let lc = w.low_normal.dot(&c);
        let hc = w.high_normal.dot(&c);
        if lc > 1e-13 && hc < -1e-13 {
            let tc = tangent_towards(&s, &c);
            let angle_c = w.low_angle
                + w.low_tangent
                    .cross(&tc)
                    .dot(&s)
                    .atan2(w.low_tangent.dot(&tc));
            let dist = arc_length(&s, &c);
            if dist < max_length {
                let q = m.corners(w.triangle)[apex];
                let back = tangent_towards(&c, &s);
                let first = tangent_towards(&c, &e[(apex + 1) % 3]);
                let inside = first
                    .cross(&back)
                    .dot(&c)
                    .atan2(first.dot(&back))
                    .clamp(0.0, m.triangle(w.triangle).angle(apex));
                let arrival = m.offset(w.triangle, apex) + inside;
                if m.is_singular(q) {
                    out.connections.push(SaddleConnection {
                        from: p,
                        from_angle: angle_c,
                        to: q,
                        to_angle: arrival,
                        length: dist,
                        crossings: w.depth + 1,
                    });
                } else {
                    // Straight on through a regular point.
                    let path = geodesic_trace(
                        m,
                        TraceStart::AtPoint {
                            point: q,
                            angle: arrival + std::f64::consts::PI,
                        },
                        max_length - dist,
                    )?;
                    if let Termination::ConePoint { point, arrival } = path.termination {
                        out.connections.push(SaddleConnection {
                            from: p,
                            from_angle: angle_c,
                            to: point,
                            to_angle: arrival,
                            length: dist + path.length,
                            crossings: w.depth + 1 + path.crossings.len(),
                        });
                    }
                }
            }
            let nc = s.cross(&c).normalize();
            push_across(
                m,
                &mut stack,
                &mut out,
                Window {
                    high_angle: angle_c,
                    high_normal: nc,
                    ..w.clone()
                },
                low_side,
                max_length,
                depth,
            );
            push_across(
                m,
                &mut stack,
                &mut out,
                Window {
                    low_tangent: tc,
                    low_angle: angle_c,
                    low_normal: nc,
                    ..w
                },
                high_side,
                max_length,
                depth,
            );
        } else if lc <= 1e-13 {
            push_across(m, &mut stack, &mut out, w, high_side, max_length, depth);
        } else {
            push_across(m, &mut stack, &mut out, w, low_side, max_length, depth);
        }
    }
    Ok(out)
}

/// Moves a window across side `side` of its triangle into the neighbour.
fn push_across(
    m: &ConeSphericalMetric,
    stack: &mut Vec<Window>,
    out: &mut ConnectionSearch,
    w: Window,
    side: usize,
    max_length: f64,
    depth: usize,
) {
    if w.high_angle - w.low_angle < 1e-13 {
        return;
    }
    let e = m.embedding(w.triangle);
    if distance_to_arc(&w.source, &e[side], &e[(side + 1) % 3]) >= max_length {
        return;
    }
    let Some(there) = m.partner(SideRef::new(w.triangle, side)) else {
        return;
    };
    if w.depth + 1 > depth {
        out.depth_limited = true;
        return;
    }
    let r = m.transition(w.triangle, side).expect("glued side");
    stack.push(Window {
        triangle: there.triangle,
        entry: there.side,
        source: r * w.source,
        low_tangent: r * w.low_tangent,
        low_angle: w.low_angle,
        high_angle: w.high_angle,
        low_normal: r * w.low_normal,
        high_normal: r * w.high_normal,
        depth: w.depth + 1,
    });
}
