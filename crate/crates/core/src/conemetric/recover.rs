//! Reading the dual graph back off a metric.
//!
//! At a face point of cone angle `kπ` the seams leave in directions spaced by
//! `π`. The shortest connection to another face point fixes one of them; the
//! others follow by turning in steps of `π`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::saddle::connections_from;
use super::trace::{geodesic_trace, Termination, TraceStart};
use super::{ConeSphericalMetric, PointLabel};
use crate::error::{Error, Result};
use crate::polyhedron::Combinatorics;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveredEdge {
    /// Point ids of the two ends.
    pub points: [usize; 2],
    pub labels: [PointLabel; 2],
    pub length: f64,
}

/// The graph drawn by the seams between face points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveredGraph {
    pub face_points: Vec<usize>,
    pub edges: Vec<RecoveredEdge>,
}

impl RecoveredGraph {
    /// Whether the edges join exactly the face pairs adjacent in `c`, with the
    /// face points labelled by their face ids.
    pub fn matches(&self, c: &Combinatorics) -> bool {
        let mut found: Vec<[usize; 2]> = Vec::new();
        for e in &self.edges {
            match e.labels {
                [PointLabel::Face(a), PointLabel::Face(b)] => found.push([a.min(b), a.max(b)]),
                _ => return false,
            }
        }
        found.sort_unstable();
        let mut expected: Vec<[usize; 2]> = c
            .edges()
            .iter()
            .map(|e| [e.faces[0].min(e.faces[1]), e.faces[0].max(e.faces[1])])
            .collect();
        expected.sort_unstable();
        found == expected
    }

    /// Seam lengths keyed by face pair.
    pub fn lengths(&self) -> BTreeMap<[PointLabel; 2], f64> {
        self.edges.iter().map(|e| (e.labels, e.length)).collect()
    }
}

/// Recovers the seam graph of a metric whose face points carry `Face` labels.
pub fn recover_combinatorics(m: &ConeSphericalMetric, depth: usize) -> Result<RecoveredGraph> {
    let face_points: Vec<usize> = (0..m.num_points())
        .filter(|&p| matches!(m.point(p).label, PointLabel::Face(_)))
        .collect();
    if face_points.is_empty() {
        return Err(Error::NotQGamma("no face points".into()));
    }
    let is_face = |p: usize| matches!(m.point(p).label, PointLabel::Face(_));

    let mut found: BTreeMap<(usize, usize), Vec<f64>> = BTreeMap::new();
    for &f in &face_points {
        let cone = m.point(f).angle;
        let k = (cone / PI).round();
        if (cone / PI - k).abs() > 1e-8 || k < 3.0 {
            return Err(Error::NotQGamma(format!(
                "face point {f} has cone angle {cone}, not a multiple of pi of at least 3pi"
            )));
        }
        let search = connections_from(m, f, PI, depth)?;
        let first = search
            .connections
            .iter()
            .filter(|c| is_face(c.to))
            .min_by(|a, b| a.length.total_cmp(&b.length))
            .ok_or_else(|| Error::NotQGamma(format!("face point {f} sees no other face point")))?;
        for i in 0..k as usize {
            let angle = first.from_angle + i as f64 * PI;
            let path = geodesic_trace(m, TraceStart::AtPoint { point: f, angle }, PI)?;
            match path.termination {
                Termination::ConePoint { point, .. } if is_face(point) && path.length < PI => {
                    found.entry((f, point)).or_default().push(path.length);
                }
                _ => {
                    return Err(Error::NotQGamma(format!(
                        "direction {angle} at face point {f} does not reach a face point within pi"
                    )))
                }
            }
        }
    }

    let mut edges = Vec::new();
    for (&(a, b), lengths) in &found {
        if lengths.len() != 1 {
            return Err(Error::NotQGamma(format!(
                "face points {a} and {b} are joined {} times",
                lengths.len()
            )));
        }
        let back = found
            .get(&(b, a))
            .ok_or_else(|| Error::NotQGamma(format!("connection {a} to {b} has no reverse")))?;
        if (back[0] - lengths[0]).abs() > 1e-8 {
            return Err(Error::NotQGamma(format!(
                "connection {a} to {b} is not symmetric"
            )));
        }
        if a < b {
            edges.push(RecoveredEdge {
                points: [a, b],
                labels: [m.point(a).label, m.point(b).label],
                length: lengths[0],
            });
        }
    }

    // Connectivity by union-find over point ids.
    let mut root: Vec<usize> = (0..m.num_points()).collect();
    fn find(root: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while root[x] != x {
            root[x] = root[root[x]];
            x = root[x];
        }
        x
    }
    for e in &edges {
        let (a, b) = (find(&mut root, e.points[0]), find(&mut root, e.points[1]));
        root[a] = b;
    }
    let r0 = find(&mut root, face_points[0]);
    if face_points.iter().any(|&f| find(&mut root, f) != r0) {
        return Err(Error::NotQGamma("seam graph is disconnected".into()));
    }
    Ok(RecoveredGraph { face_points, edges })
}
