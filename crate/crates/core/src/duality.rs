//! The polar dual of a polyhedron in de Sitter space and its induced metric.
//!
//! The dual vertices are the unit face normals. Around a finite primal vertex
//! `v` they lie on the unit sphere of the spacelike space `v^⊥` and span a
//! convex spherical polygon whose sides are the exterior angles of the edges
//! at `v` and whose corners are `π` minus the face angles at `v`. Gluing these
//! polygons gives a cone-spherical metric with one cone point per face.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::conemetric::{
    mark_face_seams, ConeSphericalMetric, MetricBuilder, PointLabel, SideRef, SphericalTriangle,
};
use crate::error::{Error, Result};
use crate::minkowski::{desitter_distance, inner, DSPoint, MVector};
use crate::polyhedron::{Combinatorics, ProjectivePolyhedron, VertexClass};

/// Corner angles from the law of cosines must match the primal face angles this closely.
pub const CORNER_TOL: f64 = 1e-8;

/// The spherical polygon dual to a primal vertex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualPolygon {
    pub vertex: usize,
    /// Primal faces around the vertex, in order.
    pub faces: Vec<usize>,
    /// `sides[i]` is the exterior angle of the edge between `faces[i]` and `faces[i + 1]`.
    pub sides: Vec<f64>,
    /// `corners[i]` is the polygon angle at `faces[i]`.
    pub corners: Vec<f64>,
}

impl DualPolygon {
    /// Spherical area `Σ corners − (k − 2)π`.
    pub fn area(&self) -> f64 {
        self.corners.iter().sum::<f64>() - (self.corners.len() as f64 - 2.0) * PI
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualPolyhedron {
    /// One de Sitter point per primal face.
    pub vertices: Vec<DSPoint>,
    /// Transpose of the primal combinatorics.
    pub combinatorics: Combinatorics,
    /// Dual edge id of each primal edge.
    pub edge_map: Vec<usize>,
    /// Length of the dual of each primal edge, indexed by primal edge.
    pub edge_lengths: Vec<f64>,
    /// One polygon per primal vertex.
    pub polygons: Vec<DualPolygon>,
}

fn require_no_hyperideal(p: &ProjectivePolyhedron) -> Result<()> {
    match p.hyperideal_vertices().first() {
        Some(&v) => Err(Error::TruncateFirst(v)),
        None => Ok(()),
    }
}

/// The dual of a compact or semi-ideal polyhedron.
pub fn dual(p: &ProjectivePolyhedron) -> Result<DualPolyhedron> {
    require_no_hyperideal(p)?;
    let c = p.combinatorics();
    let vertices = (0..p.num_faces())
        .map(|f| DSPoint::new(p.normal(f)))
        .collect::<Result<Vec<_>>>()?;
    let (combinatorics, edge_map) = c.transpose();
    let edge_lengths = c
        .edges()
        .iter()
        .map(|e| desitter_distance(&vertices[e.faces[0]], &vertices[e.faces[1]]))
        .collect::<Result<Vec<_>>>()?;

    let mut polygons = Vec::with_capacity(p.num_vertices());
    for v in 0..p.num_vertices() {
        let faces = c.vertex_faces(v).to_vec();
        let sides: Vec<f64> = c.vertex_edges(v).iter().map(|&e| edge_lengths[e]).collect();
        let k = faces.len();
        let mut corners = Vec::with_capacity(k);
        for i in 0..k {
            let expected = PI - p.face_angle(faces[i], v)?;
            let corner = if p.class(v) == VertexClass::Ideal {
                // The adjacent sides continue each other along a horocycle.
                PI
            } else {
                let (a, b) = (sides[(i + k - 1) % k], sides[i]);
                let diagonal = desitter_distance(
                    &vertices[faces[(i + k - 1) % k]],
                    &vertices[faces[(i + 1) % k]],
                )?;
                ((diagonal.cos() - a.cos() * b.cos()) / (a.sin() * b.sin()))
                    .clamp(-1.0, 1.0)
                    .acos()
            };
            if (corner - expected).abs() > CORNER_TOL {
                return Err(Error::InvalidMetric(format!(
                    "dual corner at face {} of vertex {v} is {corner}, expected {expected}",
                    faces[i]
                )));
            }
            corners.push(corner);
        }
        polygons.push(DualPolygon {
            vertex: v,
            faces,
            sides,
            corners,
        });
    }
    Ok(DualPolyhedron {
        vertices,
        combinatorics,
        edge_map,
        edge_lengths,
        polygons,
    })
}

/// The cone-spherical metric obtained by gluing the dual polygons, marked
/// by the primal edges.
///
/// Triangular polygons become single triangles, larger ones are fanned
/// from an interior center point, and the polygon of an ideal vertex is a
/// round hemisphere with a pole at its center.
pub fn dual_metric(p: &ProjectivePolyhedron) -> Result<ConeSphericalMetric> {
    let d = dual(p)?;
    let c = p.combinatorics();
    let mut b = MetricBuilder::new();
    let face_points: Vec<usize> = (0..p.num_faces())
        .map(|f| b.add_point(PointLabel::Face(f)))
        .collect();
    // Side carrying the i-th edge of each vertex.
    let mut edge_sides: Vec<Vec<SideRef>> = Vec::with_capacity(p.num_vertices());
    for poly in &d.polygons {
        let v = poly.vertex;
        let k = poly.faces.len();
        let corner = |i: usize| face_points[poly.faces[i % k]];
        let sides = if p.class(v) == VertexClass::Ideal {
            let pole = b.add_point(PointLabel::Pole(v));
            fan(&mut b, pole, k, &corner, |i| {
                SphericalTriangle::doubly_right(poly.sides[i])
            })?
        } else if k == 3 {
            let t = b.add_triangle(
                SphericalTriangle::from_sides([poly.sides[0], poly.sides[1], poly.sides[2]])?,
                [corner(0), corner(1), corner(2)],
            );
            (0..3).map(|j| SideRef::new(t, j)).collect()
        } else {
            let normals: Vec<MVector> = poly.faces.iter().map(|&f| p.normal(f)).collect();
            let sum = normals.iter().fold(MVector::ZERO, |acc, n| acc + *n);
            let center = DSPoint::new(sum / inner(&sum, &sum).sqrt())?;
            let spokes = normals
                .iter()
                .map(|n| desitter_distance(&center, &DSPoint::new(*n)?))
                .collect::<Result<Vec<f64>>>()?;
            let hub = b.add_point(PointLabel::Center(v));
            fan(&mut b, hub, k, &corner, |i| {
                SphericalTriangle::from_sides([spokes[i], poly.sides[i], spokes[(i + 1) % k]])
            })?
        };
        edge_sides.push(sides);
    }
    for (id, e) in c.edges().iter().enumerate() {
        let at = |v: usize| {
            let i = c
                .vertex_edges(v)
                .iter()
                .position(|&x| x == id)
                .expect("edge at its endpoint");
            edge_sides[v][i]
        };
        b.glue(at(e.vertices[0]), at(e.vertices[1]))?;
    }
    let mut m = b.build(true)?;
    mark_face_seams(&mut m, c)?;
    Ok(m)
}

/// Fan of `k` triangles around `hub`; returns the outer side of each.
fn fan(
    b: &mut MetricBuilder,
    hub: usize,
    k: usize,
    corner: &dyn Fn(usize) -> usize,
    triangle: impl Fn(usize) -> Result<SphericalTriangle>,
) -> Result<Vec<SideRef>> {
    let mut tris = Vec::with_capacity(k);
    for i in 0..k {
        tris.push(b.add_triangle(triangle(i)?, [hub, corner(i), corner(i + 1)]));
    }
    for i in 0..k {
        b.glue(SideRef::new(tris[i], 2), SideRef::new(tris[(i + 1) % k], 0))?;
    }
    Ok(tris.into_iter().map(|t| SideRef::new(t, 1)).collect())
}

/// Cone angle of the dual metric at a face point, next to the face's area.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeAngleEntry {
    pub face: usize,
    pub cone_angle: f64,
    pub area: f64,
    /// `cone_angle − 2π − area`.
    pub defect: f64,
}

/// Compares every cone angle of the dual metric with `2π` plus the area of the face.
pub fn cone_angle_report(p: &ProjectivePolyhedron) -> Result<Vec<ConeAngleEntry>> {
    let m = dual_metric(p)?;
    (0..p.num_faces())
        .map(|f| {
            let point = m
                .find_point(PointLabel::Face(f))
                .expect("every face has a point");
            let cone_angle = m.point(point).angle;
            let area = p.face_area(f)?;
            Ok(ConeAngleEntry {
                face: f,
                cone_angle,
                area,
                defect: cone_angle - 2.0 * PI - area,
            })
        })
        .collect()
}
