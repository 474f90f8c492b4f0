//! Geodesics on a cone-spherical complex, followed by developing each
//! triangle into the round sphere.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{ConeSphericalMetric, Point3, SideRef};
use crate::error::{Error, Result};

/// Distance below which a geodesic is considered to hit a corner.
pub const HIT_TOL: f64 = 1e-9;
/// Position and direction tolerance for detecting closure.
pub const CLOSURE_TOL: f64 = 1e-7;

/// Where a geodesic starts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceStart {
    /// At fraction `position ∈ (0, 1)` along a side, heading into the
    /// triangle at `angle ∈ (0, π)` from the side's direction.
    OnSide {
        side: SideRef,
        position: f64,
        angle: f64,
    },
    /// Leaving a point at the given angle coordinate around it.
    AtPoint { point: usize, angle: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Termination {
    MaxLength,
    /// Stopped at a point; `arrival` is the angle coordinate of the incoming
    /// geodesic, seen from the point.
    ConePoint {
        point: usize,
        arrival: f64,
    },
    Boundary {
        side: SideRef,
    },
    Closed,
}

/// A straight piece of the geodesic inside one triangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub triangle: usize,
    pub entry: [f64; 3],
    pub exit: [f64; 3],
    pub length: f64,
    /// Set when the piece runs along this side of the triangle.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub along: Option<usize>,
}

/// Passage through a point of the complex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Passage {
    pub point: usize,
    pub arrival: f64,
    pub departure: f64,
    /// Length travelled when the point was reached.
    pub at_length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicPath {
    pub crossings: Vec<Crossing>,
    pub passages: Vec<Passage>,
    pub length: f64,
    pub termination: Termination,
}

impl GeodesicPath {
    /// Number of transverse self-crossings: pairs of pieces in the same
    /// triangle whose arcs cross at interior points of both.
    pub fn self_crossings(&self) -> usize {
        let v = |a: &[f64; 3]| Point3::new(a[0], a[1], a[2]);
        let mut count = 0;
        for (i, a) in self.crossings.iter().enumerate() {
            for b in &self.crossings[i + 1..] {
                if a.triangle != b.triangle || a.along.is_some() || b.along.is_some() {
                    continue;
                }
                let (p, q) = (v(&a.entry), v(&a.exit));
                let (r, s) = (v(&b.entry), v(&b.exit));
                let n = p.cross(&q);
                let m = r.cross(&s);
                let eps = 1e-12;
                if n.dot(&r) * n.dot(&s) < -eps && m.dot(&p) * m.dot(&q) < -eps {
                    count += 1;
                }
            }
        }
        count
    }
}

fn arr(p: &Point3) -> [f64; 3] {
    [p.x, p.y, p.z]
}

/// Inward unit normal of side `j` of an embedded counterclockwise triangle.
fn side_normal(e: &[Point3; 3], j: usize) -> Point3 {
    e[j].cross(&e[(j + 1) % 3]).normalize()
}

/// Unit tangent at `p` pointing towards `q`.
fn tangent_towards(p: &Point3, q: &Point3) -> Point3 {
    (q - p * p.dot(q)).normalize()
}

/// Signed angle at `p` from tangent `a` to tangent `b`, counterclockwise.
fn signed_angle(p: &Point3, a: &Point3, b: &Point3) -> f64 {
    a.cross(b).dot(p).atan2(a.dot(b))
}

struct State {
    triangle: usize,
    point: Point3,
    direction: Point3,
    /// Sides the current point lies on; never exits through these.
    skip: [Option<usize>; 2],
}

enum Next {
    Inside(State),
    Hit { point: usize, arrival: f64 },
    Stop(Termination),
}

/// Traces with the default rule: straight through regular points, stopping at
/// singular ones.
pub fn geodesic_trace(
    m: &ConeSphericalMetric,
    start: TraceStart,
    max_length: f64,
) -> Result<GeodesicPath> {
    trace_with(m, start, max_length, &mut |_, _| None)
}

fn angle_close(a: f64, b: f64, total: f64) -> bool {
    let d = (a - b).rem_euclid(total);
    d.min(total - d) < CLOSURE_TOL
}

/// Traces a geodesic. At a singular point `rule(point, arrival)` gives the
/// departure angle coordinate, or `None` to stop there. Regular points are
/// always crossed straight.
pub fn trace_with(
    m: &ConeSphericalMetric,
    start: TraceStart,
    max_length: f64,
    rule: &mut dyn FnMut(usize, f64) -> Option<f64>,
) -> Result<GeodesicPath> {
    let mut path = GeodesicPath {
        crossings: Vec::new(),
        passages: Vec::new(),
        length: 0.0,
        termination: Termination::MaxLength,
    };
    let mut start_side = None;
    let mut start_vectors = None;
    let mut start_point = None;
    let mut next = match start {
        TraceStart::OnSide {
            side,
            position,
            angle,
        } => {
            if !(position > 0.0 && position < 1.0 && angle > 0.0 && angle < PI) {
                return Err(Error::InvalidInput(format!(
                    "start position {position} or angle {angle} out of range"
                )));
            }
            let e = m.embedding(side.triangle);
            let (a, b) = (e[side.side], e[(side.side + 1) % 3]);
            let len = m.triangle(side.triangle).side(side.side);
            let along = tangent_towards(&a, &b);
            let x = a * (position * len).cos() + along * (position * len).sin();
            let forward = tangent_towards(&x, &b);
            let inward = side_normal(e, side.side);
            let d = forward * angle.cos() + inward * angle.sin();
            start_side = Some(side);
            start_vectors = Some((x, d));
            Next::Inside(State {
                triangle: side.triangle,
                point: x,
                direction: d,
                skip: [Some(side.side), None],
            })
        }
        TraceStart::AtPoint { point, angle } => {
            if point >= m.num_points() {
                return Err(Error::InvalidInput(format!("no point {point}")));
            }
            start_point = Some((point, angle));
            depart(m, point, angle, &mut path, max_length)
        }
    };

    // Bound on the number of pieces, for safety on degenerate inputs.
    for _ in 0..1_000_000 {
        next = match next {
            Next::Stop(t) => {
                path.termination = t;
                return Ok(path);
            }
            Next::Hit { point, arrival } => {
                let departure = if m.is_singular(point) {
                    match rule(point, arrival) {
                        Some(dep) => dep,
                        None => {
                            path.termination = Termination::ConePoint { point, arrival };
                            return Ok(path);
                        }
                    }
                } else {
                    arrival + PI
                };
                path.passages.push(Passage {
                    point,
                    arrival,
                    departure,
                    at_length: path.length,
                });
                if let Some((sp, sa)) = start_point {
                    if sp == point && angle_close(departure, sa, m.point(point).angle) {
                        path.termination = Termination::Closed;
                        return Ok(path);
                    }
                }
                depart(m, point, departure, &mut path, max_length)
            }
            Next::Inside(state) => step(m, state, &mut path, max_length, start_side, start_vectors),
        };
    }
    Err(Error::InvalidMetric(
        "geodesic trace did not terminate".into(),
    ))
}

/// Follows the geodesic across one triangle.
fn step(
    m: &ConeSphericalMetric,
    state: State,
    path: &mut GeodesicPath,
    max_length: f64,
    start_side: Option<SideRef>,
    start_vectors: Option<(Point3, Point3)>,
) -> Next {
    let t = state.triangle;
    let e = *m.embedding(t);
    let (x, d) = (state.point, state.direction);
    let mut best: Option<(f64, usize)> = None;
    for j in 0..3 {
        if state.skip.contains(&Some(j)) {
            continue;
        }
        let n = side_normal(&e, j);
        let a = n.dot(&x).max(0.0);
        let b = n.dot(&d);
        let s = a.atan2(-b);
        if best.is_none_or(|(bs, _)| s < bs) {
            best = Some((s, j));
        }
    }
    let (s, j) = best.expect("a triangle has an exit side");
    let remaining = max_length - path.length;
    if s >= remaining {
        let y = x * remaining.cos() + d * remaining.sin();
        path.crossings.push(Crossing {
            triangle: t,
            entry: arr(&x),
            exit: arr(&y),
            length: remaining,
            along: None,
        });
        path.length = max_length;
        return Next::Stop(Termination::MaxLength);
    }
    let y = (x * s.cos() + d * s.sin()).normalize();
    let dy = -x * s.sin() + d * s.cos();
    let dy = (dy - y * y.dot(&dy)).normalize();
    path.crossings.push(Crossing {
        triangle: t,
        entry: arr(&x),
        exit: arr(&y),
        length: s,
        along: None,
    });
    path.length += s;

    // A hit on either end of the exit side is a hit on a point.
    if let Some(k) = [j, (j + 1) % 3]
        .into_iter()
        .find(|&k| super::arc_length(&y, &e[k]) < HIT_TOL)
    {
        let back = tangent_towards(&e[k], &x);
        let first = tangent_towards(&e[k], &e[(k + 1) % 3]);
        let inside = signed_angle(&e[k], &first, &back).clamp(0.0, m.triangle(t).angle(k));
        return Next::Hit {
            point: m.corners(t)[k],
            arrival: m.offset(t, k) + inside,
        };
    }

    let here = SideRef::new(t, j);
    let Some(there) = m.partner(here) else {
        return Next::Stop(Termination::Boundary { side: here });
    };
    let r = m.transition(t, j).expect("glued side has a transition");
    let (ny, nd) = (r * y, r * dy);
    if Some(there) == start_side {
        if let Some((x0, d0)) = start_vectors {
            if (ny - x0).norm() < CLOSURE_TOL && (nd - d0).norm() < CLOSURE_TOL {
                return Next::Stop(Termination::Closed);
            }
        }
    }
    Next::Inside(State {
        triangle: there.triangle,
        point: ny,
        direction: nd,
        skip: [Some(there.side), None],
    })
}

/// Leaves point `p` at angle coordinate `angle`.
fn depart(
    m: &ConeSphericalMetric,
    p: usize,
    angle: f64,
    path: &mut GeodesicPath,
    max_length: f64,
) -> Next {
    let Some((mut t, mut k, mut inside)) = m.locate_direction(p, angle) else {
        // Leaving a boundary point towards the outside.
        return Next::Stop(Termination::ConePoint {
            point: p,
            arrival: angle,
        });
    };
    let width = m.triangle(t).angle(k);
    if inside > width - 1e-12 {
        // Exactly along the far side: the start of the next sector.
        match m.partner(SideRef::new(t, (k + 2) % 3)) {
            Some(s) => (t, k, inside) = (s.triangle, s.side, 0.0),
            None => {
                // Along a boundary side, backwards.
                let kp = (k + 2) % 3;
                return along_side(m, t, kp, true, path, max_length);
            }
        }
    }
    if inside < 1e-12 {
        return along_side(m, t, k, false, path, max_length);
    }
    let e = *m.embedding(t);
    let x = e[k];
    let first = tangent_towards(&x, &e[(k + 1) % 3]);
    let d = (first * inside.cos() + x.cross(&first) * inside.sin()).normalize();
    Next::Inside(State {
        triangle: t,
        point: x,
        direction: d,
        skip: [Some(k), Some((k + 2) % 3)],
    })
}

/// Runs along side `j` of triangle `t`, forwards or backwards, to the corner
/// at its other end.
fn along_side(
    m: &ConeSphericalMetric,
    t: usize,
    j: usize,
    backwards: bool,
    path: &mut GeodesicPath,
    max_length: f64,
) -> Next {
    let e = *m.embedding(t);
    let (from, to) = if backwards {
        ((j + 1) % 3, j)
    } else {
        (j, (j + 1) % 3)
    };
    let len = m.triangle(t).side(j);
    let remaining = max_length - path.length;
    let travel = len.min(remaining);
    let dir = tangent_towards(&e[from], &e[to]);
    let y = e[from] * travel.cos() + dir * travel.sin();
    path.crossings.push(Crossing {
        triangle: t,
        entry: arr(&e[from]),
        exit: arr(&y),
        length: travel,
        along: Some(j),
    });
    path.length += travel;
    if remaining <= len {
        return Next::Stop(Termination::MaxLength);
    }
    // The incoming direction, seen from the arrival corner, is the far end of
    // its sector when going forwards and the start when going backwards.
    let arrival = if backwards {
        m.offset(t, to)
    } else {
        m.offset(t, to) + m.triangle(t).angle(to)
    };
    Next::Hit {
        point: m.corners(t)[to],
        arrival,
    }
}
