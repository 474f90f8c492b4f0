//! Cone-spherical surfaces built from glued spherical triangles.
//!
//! A metric is a list of triangles with labelled corner points and side
//! identifications. Everything else (cone angles, the cyclic order of corners
//! around each point, transition rotations between neighbouring triangles) is
//! derived when the complex is assembled.

use std::f64::consts::{PI, TAU};

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyhedron::Combinatorics;

mod falsifier;
mod hemisphere;
mod qgamma;
mod recover;
mod saddle;
mod trace;
mod triangle;

pub use falsifier::{closed_geodesic_falsifier, Budget, FalsifierReport, Witness, WitnessKind};
pub use hemisphere::nega_hemisphere;
pub use qgamma::{build_q_gamma, build_q_gamma_relaxed};
pub use recover::{recover_combinatorics, RecoveredEdge, RecoveredGraph};
pub use saddle::{saddle_connections, SaddleConnection};
pub use trace::{
    geodesic_trace, trace_with, Crossing, GeodesicPath, Passage, Termination, TraceStart,
};
pub use triangle::{arc_length, Point3, SphericalTriangle};

/// Tolerance on glued side lengths.
pub const GLUING_TOL: f64 = 1e-8;
/// A point whose cone angle is within this of `2π` is regular.
pub const REGULAR_TOL: f64 = 1e-9;

/// Role of a point of the complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "type", content = "id")]
pub enum PointLabel {
    /// Apex of the (nega-)hemisphere of a hyperideal vertex.
    #[serde(rename = "h")]
    Hyperideal(usize),
    /// Dual vertex of a face.
    #[serde(rename = "f")]
    Face(usize),
    /// Center of the round hemisphere of an ideal vertex.
    #[serde(rename = "pole")]
    Pole(usize),
    /// Apex of a standalone hemisphere fragment.
    #[serde(rename = "apex")]
    Apex,
    /// Marked boundary point of a fragment.
    #[serde(rename = "boundary")]
    Boundary(usize),
    /// Auxiliary fan center used to triangulate a polygon.
    #[serde(rename = "center")]
    Center(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SideRef {
    pub triangle: usize,
    pub side: usize,
}

impl SideRef {
    pub fn new(triangle: usize, side: usize) -> Self {
        SideRef { triangle, side }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConePoint {
    pub label: PointLabel,
    pub angle: f64,
    pub boundary: bool,
}

/// A gluing seam: the sides realizing one edge of the dual graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Seam {
    /// Primal edge id.
    pub edge: usize,
    /// The two face points the seam joins.
    pub faces: [usize; 2],
    pub sides: Vec<SideRef>,
    pub length: f64,
}

/// The dual graph drawn on a metric: its primal combinatorics and one seam per edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Marking {
    pub combinatorics: Combinatorics,
    pub seams: Vec<Seam>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct MetricData {
    triangles: Vec<SphericalTriangle>,
    corners: Vec<[usize; 3]>,
    gluings: Vec<[SideRef; 2]>,
    labels: Vec<PointLabel>,
    closed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    marking: Option<Marking>,
}

/// A cone-spherical surface, possibly with boundary.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "MetricData", into = "MetricData")]
pub struct ConeSphericalMetric {
    data: MetricData,
    points: Vec<ConePoint>,
    partner: Vec<[Option<SideRef>; 3]>,
    /// Angle coordinate at which each corner's sector starts around its point.
    offsets: Vec<[f64; 3]>,
    /// Corners around each point in counterclockwise order.
    links: Vec<Vec<(usize, usize)>>,
    embeddings: Vec<[Point3; 3]>,
    /// Rotation taking the frame of a triangle to the frame of the neighbour across a side.
    transitions: Vec<[Option<Matrix3<f64>>; 3]>,
}

impl From<ConeSphericalMetric> for MetricData {
    fn from(m: ConeSphericalMetric) -> Self {
        m.data
    }
}

impl TryFrom<MetricData> for ConeSphericalMetric {
    type Error = Error;
    fn try_from(data: MetricData) -> Result<Self> {
        ConeSphericalMetric::assemble(data)
    }
}

/// Incremental construction of a complex.
#[derive(Debug, Default)]
pub struct MetricBuilder {
    triangles: Vec<SphericalTriangle>,
    corners: Vec<[usize; 3]>,
    gluings: Vec<[SideRef; 2]>,
    labels: Vec<PointLabel>,
}

impl MetricBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_point(&mut self, label: PointLabel) -> usize {
        self.labels.push(label);
        self.labels.len() - 1
    }

    /// Adds a triangle whose corners are the given points, counterclockwise.
    pub fn add_triangle(&mut self, triangle: SphericalTriangle, corners: [usize; 3]) -> usize {
        self.triangles.push(triangle);
        self.corners.push(corners);
        self.triangles.len() - 1
    }

    /// Identifies two sides, reversing orientation. Checks lengths and endpoints.
    pub fn glue(&mut self, a: SideRef, b: SideRef) -> Result<()> {
        let la = self.triangles[a.triangle].side(a.side);
        let lb = self.triangles[b.triangle].side(b.side);
        if (la - lb).abs() > GLUING_TOL {
            return Err(Error::GluingMismatch((la - lb).abs()));
        }
        let ca = self.corners[a.triangle];
        let cb = self.corners[b.triangle];
        if ca[a.side] != cb[(b.side + 1) % 3] || ca[(a.side + 1) % 3] != cb[b.side] {
            return Err(Error::InvalidMetric(format!(
                "glued sides {a:?} and {b:?} have different endpoints"
            )));
        }
        self.gluings.push([a, b]);
        Ok(())
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    /// Assembles the complex. A closed complex must glue every side and be a sphere.
    pub fn build(self, closed: bool) -> Result<ConeSphericalMetric> {
        ConeSphericalMetric::assemble(MetricData {
            triangles: self.triangles,
            corners: self.corners,
            gluings: self.gluings,
            labels: self.labels,
            closed,
            marking: None,
        })
    }
}

fn frame(u: &Point3, w: &Point3) -> Matrix3<f64> {
    let e1 = u.normalize();
    let e2 = (w - e1 * e1.dot(w)).normalize();
    let e3 = e1.cross(&e2);
    Matrix3::from_columns(&[e1, e2, e3])
}

impl ConeSphericalMetric {
    fn assemble(data: MetricData) -> Result<Self> {
        let n = data.triangles.len();
        if data.corners.len() != n {
            return Err(Error::InvalidMetric(
                "corner list does not match triangles".into(),
            ));
        }
        for (t, tri) in data.triangles.iter().enumerate() {
            if tri.law_of_cosines_defect() > 1e-9 || tri.area() <= 0.0 {
                return Err(Error::InvalidMetric(format!(
                    "triangle {t} is inconsistent"
                )));
            }
            for &p in &data.corners[t] {
                if p >= data.labels.len() {
                    return Err(Error::InvalidMetric(format!(
                        "triangle {t} uses unknown point {p}"
                    )));
                }
            }
        }
        let mut partner = vec![[None; 3]; n];
        for [a, b] in &data.gluings {
            for s in [a, b] {
                if s.triangle >= n || s.side >= 3 {
                    return Err(Error::InvalidMetric(format!(
                        "gluing refers to missing side {s:?}"
                    )));
                }
            }
            let la = data.triangles[a.triangle].side(a.side);
            let lb = data.triangles[b.triangle].side(b.side);
            if (la - lb).abs() > GLUING_TOL {
                return Err(Error::GluingMismatch((la - lb).abs()));
            }
            if a == b
                || partner[a.triangle][a.side].is_some()
                || partner[b.triangle][b.side].is_some()
            {
                return Err(Error::InvalidMetric(format!(
                    "side {a:?} or {b:?} glued twice"
                )));
            }
            partner[a.triangle][a.side] = Some(*b);
            partner[b.triangle][b.side] = Some(*a);
        }
        if data.closed {
            for (t, sides) in partner.iter().enumerate() {
                if let Some(s) = sides.iter().position(|p| p.is_none()) {
                    return Err(Error::InvalidMetric(format!(
                        "side {s} of triangle {t} is not glued"
                    )));
                }
            }
        }

        // Corners around each point, walked counterclockwise.
        let num_points = data.labels.len();
        let mut corners_of = vec![Vec::new(); num_points];
        for (t, c) in data.corners.iter().enumerate() {
            for (k, &p) in c.iter().enumerate() {
                corners_of[p].push((t, k));
            }
        }
        let mut offsets = vec![[0.0; 3]; n];
        let mut links = Vec::with_capacity(num_points);
        let mut points = Vec::with_capacity(num_points);
        for (p, corners) in corners_of.iter().enumerate() {
            if corners.is_empty() {
                return Err(Error::InvalidMetric(format!("point {p} has no triangles")));
            }
            let start = corners
                .iter()
                .copied()
                .find(|&(t, k)| partner[t][k].is_none())
                .unwrap_or(corners[0]);
            let boundary = partner[start.0][start.1].is_none();
            let mut link = vec![start];
            let mut angle = 0.0;
            let (mut t, mut k) = start;
            loop {
                offsets[t][k] = angle;
                angle += data.triangles[t].angle(k);
                match partner[t][(k + 2) % 3] {
                    None => break,
                    Some(s) => {
                        (t, k) = (s.triangle, s.side);
                        if (t, k) == start {
                            break;
                        }
                        if link.len() > corners.len() {
                            break;
                        }
                        link.push((t, k));
                    }
                }
            }
            if link.len() != corners.len() {
                return Err(Error::InvalidMetric(format!(
                    "the triangles around point {p} do not form a single fan"
                )));
            }
            links.push(link);
            points.push(ConePoint {
                label: data.labels[p],
                angle,
                boundary,
            });
        }

        if data.closed {
            let euler = num_points as i64 - (3 * n / 2) as i64 + n as i64;
            if euler != 2 {
                return Err(Error::InvalidMetric(format!(
                    "Euler characteristic {euler}"
                )));
            }
        }

        let embeddings: Vec<[Point3; 3]> = data.triangles.iter().map(|t| t.embedding()).collect();
        let transitions = (0..n)
            .map(|t| {
                std::array::from_fn(|j| {
                    partner[t][j].map(|s: SideRef| {
                        let here = &embeddings[t];
                        let there = &embeddings[s.triangle];
                        let f = frame(&here[j], &here[(j + 1) % 3]);
                        let g = frame(&there[(s.side + 1) % 3], &there[s.side]);
                        g * f.transpose()
                    })
                })
            })
            .collect();

        Ok(ConeSphericalMetric {
            data,
            points,
            partner,
            offsets,
            links,
            embeddings,
            transitions,
        })
    }

    pub fn triangles(&self) -> &[SphericalTriangle] {
        &self.data.triangles
    }

    pub fn triangle(&self, t: usize) -> &SphericalTriangle {
        &self.data.triangles[t]
    }

    pub fn num_triangles(&self) -> usize {
        self.data.triangles.len()
    }

    /// Point ids at the corners of triangle `t`.
    pub fn corners(&self, t: usize) -> [usize; 3] {
        self.data.corners[t]
    }

    pub fn gluings(&self) -> &[[SideRef; 2]] {
        &self.data.gluings
    }

    pub fn points(&self) -> &[ConePoint] {
        &self.points
    }

    pub fn point(&self, p: usize) -> &ConePoint {
        &self.points[p]
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn is_closed(&self) -> bool {
        self.data.closed
    }

    pub fn partner(&self, s: SideRef) -> Option<SideRef> {
        self.partner[s.triangle][s.side]
    }

    pub fn marking(&self) -> Option<&Marking> {
        self.data.marking.as_ref()
    }

    pub(crate) fn set_marking(&mut self, marking: Marking) {
        self.data.marking = Some(marking);
    }

    /// The first point carrying `label`.
    pub fn find_point(&self, label: PointLabel) -> Option<usize> {
        self.points.iter().position(|p| p.label == label)
    }

    /// Whether `p` is a genuine singularity or a boundary point.
    pub fn is_singular(&self, p: usize) -> bool {
        let q = &self.points[p];
        q.boundary || (q.angle - TAU).abs() > REGULAR_TOL
    }

    pub(crate) fn offset(&self, t: usize, k: usize) -> f64 {
        self.offsets[t][k]
    }

    pub(crate) fn link(&self, p: usize) -> &[(usize, usize)] {
        &self.links[p]
    }

    pub(crate) fn embedding(&self, t: usize) -> &[Point3; 3] {
        &self.embeddings[t]
    }

    pub(crate) fn transition(&self, t: usize, j: usize) -> Option<&Matrix3<f64>> {
        self.transitions[t][j].as_ref()
    }

    pub fn total_area(&self) -> f64 {
        self.data.triangles.iter().map(|t| t.area()).sum()
    }

    /// `Σ area − 4π − Σ (cone angle − 2π)`; zero for a closed cone-spherical sphere.
    pub fn gauss_bonnet_defect(&self) -> f64 {
        let curvature: f64 = self.points.iter().map(|p| p.angle - TAU).sum();
        self.total_area() - 2.0 * TAU - curvature
    }

    pub fn euler_characteristic(&self) -> i64 {
        let glued = self.data.gluings.len();
        let sides = 3 * self.num_triangles() - glued;
        self.num_points() as i64 - sides as i64 + self.num_triangles() as i64
    }

    /// Length of the boundary.
    pub fn boundary_length(&self) -> f64 {
        let mut total = 0.0;
        for t in 0..self.num_triangles() {
            for j in 0..3 {
                if self.partner[t][j].is_none() {
                    total += self.data.triangles[t].side(j);
                }
            }
        }
        total
    }

    /// Corner `(t, k)` whose sector around `p` contains angle coordinate
    /// `angle`, with the offset of `angle` inside the sector. Angles are taken
    /// modulo the cone angle at interior points.
    pub(crate) fn locate_direction(&self, p: usize, angle: f64) -> Option<(usize, usize, f64)> {
        let total = self.points[p].angle;
        let a = if self.points[p].boundary {
            if angle < -1e-12 || angle > total + 1e-12 {
                return None;
            }
            angle.clamp(0.0, total)
        } else {
            angle.rem_euclid(total)
        };
        let link = &self.links[p];
        for (i, &(t, k)) in link.iter().enumerate() {
            let start = self.offsets[t][k];
            let width = self.data.triangles[t].angle(k);
            if a < start + width || i + 1 == link.len() {
                return Some((t, k, (a - start).clamp(0.0, width)));
            }
        }
        None
    }

    /// The same complex with every point label passed through `relabel`.
    /// The marking is dropped.
    pub fn relabeled(&self, relabel: impl Fn(PointLabel) -> PointLabel) -> Result<Self> {
        let mut data = self.data.clone();
        data.labels = data.labels.into_iter().map(relabel).collect();
        data.marking = None;
        ConeSphericalMetric::assemble(data)
    }

    /// Check that the cone-angle labels obey their type constraints: `h`
    /// points above `2π`, singular `f` points at multiples of `π` and at least `3π`.
    pub fn label_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, p) in self.points.iter().enumerate() {
            match p.label {
                PointLabel::Hyperideal(_) if p.angle <= TAU => {
                    out.push(format!("h point {i} has cone angle {} <= 2pi", p.angle))
                }
                PointLabel::Face(_) => {
                    let k = p.angle / PI;
                    if (k - k.round()).abs() > 1e-8 || k.round() < 3.0 {
                        out.push(format!("f point {i} has cone angle {}", p.angle));
                    }
                }
                _ => {}
            }
        }
        out
    }
}

/// Lengths of the marked seams indexed by primal edge.
pub fn metric_to_lengths(m: &ConeSphericalMetric) -> Result<Vec<f64>> {
    let marking = m.marking().ok_or(Error::Unmarked)?;
    let mut out = vec![f64::NAN; marking.combinatorics.num_edges()];
    for seam in &marking.seams {
        let lengths: Vec<f64> = seam
            .sides
            .iter()
            .map(|s| m.triangle(s.triangle).side(s.side))
            .collect();
        let spread = lengths
            .iter()
            .fold(0.0f64, |a, l| a.max((l - lengths[0]).abs()));
        if spread > GLUING_TOL {
            return Err(Error::GluingMismatch(spread));
        }
        out[seam.edge] = lengths[0];
    }
    if out.iter().any(|x| x.is_nan()) {
        return Err(Error::InvalidMetric("marking misses an edge".into()));
    }
    Ok(out)
}

/// Record of the seam data for a face pair, used when assembling markings.
pub(crate) fn seam_from_sides(
    m: &ConeSphericalMetric,
    combinatorics: &Combinatorics,
    faces: [usize; 2],
    sides: Vec<SideRef>,
) -> Result<Seam> {
    let edge = combinatorics
        .edge_between_faces(faces[0], faces[1])
        .ok_or_else(|| Error::InvalidMetric(format!("faces {faces:?} are not adjacent")))?;
    let length = m.triangle(sides[0].triangle).side(sides[0].side);
    Ok(Seam {
        edge,
        faces,
        sides,
        length,
    })
}

/// Builds the marking of a metric whose face points carry `Face(f)` labels:
/// every side joining two face points is a seam.
pub fn mark_face_seams(m: &mut ConeSphericalMetric, combinatorics: &Combinatorics) -> Result<()> {
    let mut seams: std::collections::BTreeMap<[usize; 2], Vec<SideRef>> = Default::default();
    for t in 0..m.num_triangles() {
        let c = m.corners(t);
        for j in 0..3 {
            let (a, b) = (m.point(c[j]).label, m.point(c[(j + 1) % 3]).label);
            if let (PointLabel::Face(fa), PointLabel::Face(fb)) = (a, b) {
                seams
                    .entry([fa.min(fb), fa.max(fb)])
                    .or_default()
                    .push(SideRef::new(t, j));
            }
        }
    }
    let mut out = Vec::new();
    for (faces, sides) in seams {
        out.push(seam_from_sides(m, combinatorics, faces, sides)?);
    }
    if out.len() != combinatorics.num_edges() {
        return Err(Error::InvalidMetric(format!(
            "{} seams for {} edges",
            out.len(),
            combinatorics.num_edges()
        )));
    }
    out.sort_by_key(|s| s.edge);
    m.set_marking(Marking {
        combinatorics: combinatorics.clone(),
        seams: out,
    });
    Ok(())
}

/// Comparable summary of a marked complex: cone angles per label, seams
/// by face pair, and the sides joining face points to other labelled points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkedSummary {
    pub cone_angles: Vec<(PointLabel, f64)>,
    pub seams: Vec<([usize; 2], f64)>,
    pub spokes: Vec<(PointLabel, PointLabel, f64)>,
}

impl MarkedSummary {
    pub fn of(m: &ConeSphericalMetric) -> Self {
        let mut cone_angles: Vec<(PointLabel, f64)> = m
            .points()
            .iter()
            .filter(|p| !matches!(p.label, PointLabel::Center(_)))
            .map(|p| (p.label, p.angle))
            .collect();
        cone_angles.sort_by_key(|a| a.0);
        let mut seams = Vec::new();
        let mut spokes = Vec::new();
        for t in 0..m.num_triangles() {
            let c = m.corners(t);
            for j in 0..3 {
                let (a, b) = (m.point(c[j]).label, m.point(c[(j + 1) % 3]).label);
                let len = m.triangle(t).side(j);
                match (a, b) {
                    (PointLabel::Face(x), PointLabel::Face(y)) if x < y => {
                        seams.push(([x, y], len))
                    }
                    (PointLabel::Face(_), PointLabel::Face(_)) => {}
                    (PointLabel::Center(_), _) | (_, PointLabel::Center(_)) => {}
                    (x, y) if x < y => spokes.push((x, y, len)),
                    _ => {}
                }
            }
        }
        seams.sort_by_key(|a| a.0);
        seams.dedup_by(|a, b| a.0 == b.0);
        spokes.sort_by_key(|a| (a.0, a.1));
        spokes.dedup_by(|a, b| (a.0, a.1) == (b.0, b.1));
        MarkedSummary {
            cone_angles,
            seams,
            spokes,
        }
    }

    /// Largest numeric difference, or `None` when the labelled structure differs.
    pub fn distance(&self, other: &MarkedSummary) -> Option<f64> {
        if self.cone_angles.len() != other.cone_angles.len()
            || self.seams.len() != other.seams.len()
            || self.spokes.len() != other.spokes.len()
        {
            return None;
        }
        let mut worst: f64 = 0.0;
        for (a, b) in self.cone_angles.iter().zip(&other.cone_angles) {
            if a.0 != b.0 {
                return None;
            }
            worst = worst.max((a.1 - b.1).abs());
        }
        for (a, b) in self.seams.iter().zip(&other.seams) {
            if a.0 != b.0 {
                return None;
            }
            worst = worst.max((a.1 - b.1).abs());
        }
        for (a, b) in self.spokes.iter().zip(&other.spokes) {
            if (a.0, a.1) != (b.0, b.1) {
                return None;
            }
            worst = worst.max((a.2 - b.2).abs());
        }
        Some(worst)
    }
}

#[cfg(test)]
mod tests;
