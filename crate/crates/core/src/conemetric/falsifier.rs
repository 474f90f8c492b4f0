//! Budgeted search for short closed geodesics.
//!
//! Two strategies run side by side: concatenating saddle connections into
//! cycles that turn by at least `π` on both sides at every singular point,
//! and shooting geodesics from random side points. Finding nothing is not a
//! proof that no short closed geodesic exists.

use std::collections::BTreeSet;
use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::saddle::saddle_connections;
use super::trace::{geodesic_trace, trace_with, GeodesicPath, Termination, TraceStart};
use super::{ConeSphericalMetric, SaddleConnection, SideRef, REGULAR_TOL};
use crate::error::Result;

/// Search limits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    /// Triangle crossings allowed per saddle connection.
    pub depth: usize,
    /// Number of random shots.
    pub shots: usize,
    pub seed: u64,
    /// Slack added to `2π` in the length bound.
    pub margin: f64,
    /// Largest number of saddle connections in one cycle.
    pub cycle_connections: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            depth: 12,
            shots: 10_000,
            seed: 0,
            margin: 1e-6,
            cycle_connections: 16,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// Made of saddle connections.
    SaddleCycle,
    /// Avoids all singular points.
    Smooth,
}

/// A closed geodesic, re-traced from its description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub length: f64,
    /// The saddle connections, for cycle witnesses.
    pub connections: Vec<SaddleConnection>,
    /// Re-traced path.
    pub path: GeodesicPath,
    /// Difference between the re-traced length and the claimed one.
    pub retrace_error: f64,
    /// The geodesic bounds a disc isometric to a round hemisphere.
    pub hemisphere_boundary: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FalsifierReport {
    /// Shortest closed geodesic within the bound that is not a hemisphere boundary.
    pub witness: Option<Witness>,
    /// Hemisphere boundaries found within the bound.
    pub exceptions: Vec<Witness>,
    pub connections: usize,
    /// Some windows were cut by the depth budget.
    pub depth_limited: bool,
    /// Set when the search ended without a witness: the budget was used up.
    pub budget_exhausted: bool,
}

fn junction_ok(arrival: f64, departure: f64, cone_angle: f64) -> bool {
    let turn = (departure - arrival).rem_euclid(cone_angle);
    turn >= PI - 1e-9 && turn <= cone_angle - PI + 1e-9
}

fn angle_close(a: f64, b: f64, total: f64, tol: f64) -> bool {
    let d = (a - b).rem_euclid(total);
    d.min(total - d) < tol
}

/// Searches for a closed geodesic of length at most `length_bound`.
pub fn closed_geodesic_falsifier(
    m: &ConeSphericalMetric,
    length_bound: f64,
    budget: &Budget,
) -> Result<FalsifierReport> {
    let search = saddle_connections(m, length_bound.min(PI), budget.depth)?;
    let connections = search.connections;

    let mut candidates = Vec::new();
    for cycle in connection_cycles(m, &connections, length_bound, budget.cycle_connections) {
        let chain: Vec<SaddleConnection> = cycle.iter().map(|&i| connections[i].clone()).collect();
        if let Some(w) = retrace_cycle(m, &chain)? {
            candidates.push(w);
        }
    }
    candidates.extend(shoot(m, length_bound, budget)?);

    let mut exceptions = Vec::new();
    let mut seen = BTreeSet::new();
    let mut witness: Option<Witness> = None;
    for mut w in candidates {
        if w.retrace_error >= 1e-9 {
            continue;
        }
        w.hemisphere_boundary = bounds_hemisphere(m, &w.path);
        if w.hemisphere_boundary {
            let mut key: Vec<usize> = w.path.passages.iter().map(|p| p.point).collect();
            key.sort_unstable();
            key.push((w.length * 1e6).round() as usize);
            if seen.insert(key) {
                exceptions.push(w);
            }
        } else if witness.as_ref().is_none_or(|b| w.length < b.length) {
            witness = Some(w);
        }
    }
    Ok(FalsifierReport {
        budget_exhausted: witness.is_none(),
        witness,
        exceptions,
        connections: connections.len(),
        depth_limited: search.depth_limited,
    })
}

/// Index lists of connection cycles satisfying the junction condition,
/// each listed once starting from its smallest index.
fn connection_cycles(
    m: &ConeSphericalMetric,
    connections: &[SaddleConnection],
    bound: f64,
    max_len: usize,
) -> Vec<Vec<usize>> {
    let mut by_source: Vec<Vec<usize>> = vec![Vec::new(); m.num_points()];
    for (i, c) in connections.iter().enumerate() {
        by_source[c.from].push(i);
    }
    let mut out = Vec::new();
    for first in 0..connections.len() {
        let mut chain = vec![first];
        extend(
            m,
            connections,
            &by_source,
            first,
            connections[first].length,
            bound,
            max_len,
            &mut chain,
            &mut out,
        );
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn extend(
    m: &ConeSphericalMetric,
    connections: &[SaddleConnection],
    by_source: &[Vec<usize>],
    first: usize,
    length: f64,
    bound: f64,
    max_len: usize,
    chain: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    let last = &connections[*chain.last().expect("non-empty chain")];
    let at = last.to;
    let cone = m.point(at).angle;
    for &next in &by_source[at] {
        if next < first {
            continue;
        }
        let c = &connections[next];
        if !junction_ok(last.to_angle, c.from_angle, cone) {
            continue;
        }
        if next == first {
            out.push(chain.clone());
            continue;
        }
        if chain.contains(&next) || chain.len() >= max_len || length + c.length > bound {
            continue;
        }
        chain.push(next);
        extend(
            m,
            connections,
            by_source,
            first,
            length + c.length,
            bound,
            max_len,
            chain,
            out,
        );
        chain.pop();
    }
}

/// Re-traces a cycle of connections, checking every junction on the way.
fn retrace_cycle(m: &ConeSphericalMetric, chain: &[SaddleConnection]) -> Result<Option<Witness>> {
    let claimed: f64 = chain.iter().map(|c| c.length).sum();
    let mut index = 0;
    let mut failed = false;
    let start = TraceStart::AtPoint {
        point: chain[0].from,
        angle: chain[0].from_angle,
    };
    let path = trace_with(m, start, claimed + 1e-6, &mut |p, arrival| {
        let c = &chain[index];
        if p != c.to || !angle_close(arrival, c.to_angle, m.point(p).angle, 1e-7) {
            failed = true;
            return None;
        }
        index = (index + 1) % chain.len();
        Some(chain[index].from_angle)
    })?;
    if failed || path.termination != Termination::Closed {
        return Ok(None);
    }
    Ok(Some(Witness {
        kind: WitnessKind::SaddleCycle,
        length: claimed,
        connections: chain.to_vec(),
        retrace_error: (path.length - claimed).abs(),
        path,
        hemisphere_boundary: false,
    }))
}

/// Random shots from side points; returns the closed ones.
fn shoot(m: &ConeSphericalMetric, bound: f64, budget: &Budget) -> Result<Vec<Witness>> {
    let sides: Vec<SideRef> = (0..m.num_triangles())
        .flat_map(|t| (0..3).map(move |j| SideRef::new(t, j)))
        .filter(|s| m.partner(*s).is_some())
        .collect();
    if sides.is_empty() || budget.shots == 0 {
        return Ok(Vec::new());
    }
    let found: Vec<Result<Option<(usize, Witness)>>> = (0..budget.shots)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed.wrapping_add(i as u64));
            let side = sides[rng.gen_range(0..sides.len())];
            let position = rng.gen_range(0.05..0.95);
            let angle = rng.gen_range(0.01..PI - 0.01);
            let w = shot(m, side, position, angle, bound)?;
            Ok(w.map(|w| (i, w)))
        })
        .collect();
    let mut out = Vec::new();
    for r in found {
        if let Some((_, w)) = r? {
            out.push(w);
        }
    }
    Ok(out)
}

fn shot(
    m: &ConeSphericalMetric,
    side: SideRef,
    position: f64,
    angle: f64,
    bound: f64,
) -> Result<Option<Witness>> {
    let start = TraceStart::OnSide {
        side,
        position,
        angle,
    };
    let path = geodesic_trace(m, start, bound)?;
    if path.termination == Termination::Closed {
        return Ok(Some(smooth_witness(path)));
    }
    // Near misses are refined by bisection on the direction.
    let Some((p1, _)) = first_return(m, &path, side) else {
        return Ok(None);
    };
    if (p1 - position).abs() > 0.05 {
        return Ok(None);
    }
    let miss = |a: f64| -> Result<Option<f64>> {
        if !(a > 0.0 && a < PI) {
            return Ok(None);
        }
        let start = TraceStart::OnSide {
            side,
            position,
            angle: a,
        };
        let path = geodesic_trace(m, start, bound)?;
        if path.termination == Termination::Closed {
            return Ok(Some(0.0));
        }
        Ok(first_return(m, &path, side).map(|(p, _)| p - position))
    };
    let f0 = miss(angle)?.unwrap_or(f64::NAN);
    for delta in [1e-3, 1e-2, 3e-2] {
        for other in [angle - delta, angle + delta] {
            let Some(f1) = miss(other)? else { continue };
            if f0.is_nan() || f0.signum() == f1.signum() {
                continue;
            }
            let (mut lo, mut hi) = if other < angle {
                (other, angle)
            } else {
                (angle, other)
            };
            let mut flo = if other < angle { f1 } else { f0 };
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                let Some(fm) = miss(mid)? else { break };
                if fm == 0.0 {
                    lo = mid;
                    break;
                }
                if fm.signum() == flo.signum() {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            let start = TraceStart::OnSide {
                side,
                position,
                angle: lo,
            };
            let path = geodesic_trace(m, start, bound)?;
            if path.termination == Termination::Closed {
                return Ok(Some(smooth_witness(path)));
            }
            return Ok(None);
        }
    }
    Ok(None)
}

fn smooth_witness(path: GeodesicPath) -> Witness {
    Witness {
        kind: WitnessKind::Smooth,
        length: path.length,
        connections: Vec::new(),
        retrace_error: 0.0,
        path,
        hemisphere_boundary: false,
    }
}

/// Position fraction and direction angle of the first return across `side`.
fn first_return(m: &ConeSphericalMetric, path: &GeodesicPath, side: SideRef) -> Option<(f64, f64)> {
    let e = m.embedding(side.triangle);
    let (a, b) = (e[side.side], e[(side.side + 1) % 3]);
    let n = a.cross(&b).normalize();
    let len = m.triangle(side.triangle).side(side.side);
    path.crossings.iter().skip(1).find_map(|c| {
        if c.triangle != side.triangle || c.along.is_some() {
            return None;
        }
        let x = super::Point3::new(c.entry[0], c.entry[1], c.entry[2]);
        if n.dot(&x).abs() > 1e-12 {
            return None;
        }
        let y = super::Point3::new(c.exit[0], c.exit[1], c.exit[2]);
        let forward = (b - x * x.dot(&b)).normalize();
        let dir = (y - x * x.dot(&y)).normalize();
        let angle = forward.cross(&dir).dot(&x).atan2(forward.dot(&dir));
        Some((super::arc_length(&a, &x) / len, angle))
    })
}

/// Whether a closed path runs along triangle sides and cuts off a disc of
/// area `2π` containing only regular points.
fn bounds_hemisphere(m: &ConeSphericalMetric, path: &GeodesicPath) -> bool {
    if (path.length - TAU).abs() > 1e-7 || path.crossings.iter().any(|c| c.along.is_none()) {
        return false;
    }
    let mut cut = BTreeSet::new();
    for c in &path.crossings {
        let s = SideRef::new(c.triangle, c.along.expect("checked above"));
        cut.insert(s);
        if let Some(p) = m.partner(s) {
            cut.insert(p);
        }
    }
    let first = &path.crossings[0];
    let s = SideRef::new(first.triangle, first.along.expect("checked above"));
    let mut seeds = vec![s.triangle];
    if let Some(p) = m.partner(s) {
        seeds.push(p.triangle);
    }
    seeds.into_iter().any(|seed| {
        let mut inside = vec![false; m.num_triangles()];
        inside[seed] = true;
        let mut stack = vec![seed];
        while let Some(t) = stack.pop() {
            for j in 0..3 {
                let here = SideRef::new(t, j);
                if cut.contains(&here) {
                    continue;
                }
                if let Some(p) = m.partner(here) {
                    if !inside[p.triangle] {
                        inside[p.triangle] = true;
                        stack.push(p.triangle);
                    }
                }
            }
        }
        let area: f64 = (0..m.num_triangles())
            .filter(|&t| inside[t])
            .map(|t| m.triangle(t).area())
            .sum();
        if (area - TAU).abs() > 1e-7 {
            return false;
        }
        // Points all of whose corners are inside the disc must be regular.
        (0..m.num_points()).all(|p| {
            let link = m.link(p);
            !link.iter().all(|&(t, _)| inside[t]) || (m.point(p).angle - TAU).abs() <= REGULAR_TOL
        })
    })
}
