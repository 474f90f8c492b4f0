//! Truncation of hyperideal vertices by their polar planes, and its inverse.
//!
//! The polar plane of a hyperideal vertex `x` is `x^⊥`. Every face through `x`
//! has a normal orthogonal to `x`, so it meets the polar plane at a right
//! angle; cutting along all polar planes yields a semi-ideal polyhedron.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::angles::{VertexKind, WeightedDualGraph};
use crate::conemetric::{mark_face_seams, ConeSphericalMetric, PointLabel};
use crate::duality::dual_metric;
use crate::error::{Error, Result};
use crate::minkowski::{inner, DSPoint, HPlane, MVector};
use crate::polyhedron::{Combinatorics, ProjectivePolyhedron, VertexClass};

/// Tolerance for right angles between truncation faces and their neighbours.
pub const PERPENDICULAR_TOL: f64 = 1e-8;
/// Polar normals `u, v` of distinct vertices must satisfy `⟨u, v⟩ < −1 + DISJOINT_TOL`.
pub const DISJOINT_TOL: f64 = 1e-9;

/// The plane `x^⊥`, oriented to keep the side away from `x`.
pub fn polar_plane(x: &DSPoint) -> HPlane {
    HPlane::new(-x.vector()).expect("de Sitter points are spacelike")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedPolyhedron {
    pub polyhedron: ProjectivePolyhedron,
    /// Number of faces of the original polyhedron; they keep their ids.
    pub original_faces: usize,
    /// `(original vertex, truncation face)` pairs, in vertex order.
    pub truncation_faces: Vec<(usize, usize)>,
    /// `(original vertex, vertex of the truncation)` for the ideal vertices.
    pub ideal_vertices: Vec<(usize, usize)>,
}

fn unit_normal(p: &ProjectivePolyhedron, f: usize) -> MVector {
    let n = p.normal(f);
    n / inner(&n, &n).sqrt()
}

/// Faces adjacent to `f`, in the cyclic order of its boundary.
fn neighbours(p: &ProjectivePolyhedron, f: usize) -> Vec<usize> {
    let c = p.combinatorics();
    c.face_edges(f)
        .iter()
        .map(|&e| {
            let [a, b] = c.edge(e).faces;
            if a == f {
                b
            } else {
                a
            }
        })
        .collect()
}

fn check_perpendicular(p: &ProjectivePolyhedron, f: usize) -> Result<()> {
    let n = unit_normal(p, f);
    for g in neighbours(p, f) {
        let c = inner(&n, &unit_normal(p, g));
        if c.abs() > PERPENDICULAR_TOL {
            return Err(Error::NotTruncation(format!(
                "face {f} meets face {g} with cosine {c:e}"
            )));
        }
    }
    Ok(())
}

/// Same cyclic sequence up to rotation and reversal.
fn same_cycle(a: &[usize], b: &[usize]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let n = a.len();
    let rev: Vec<usize> = b.iter().rev().copied().collect();
    (0..n)
        .any(|s| (0..n).all(|i| a[i] == b[(i + s) % n]) || (0..n).all(|i| a[i] == rev[(i + s) % n]))
}

/// Cuts off every strictly hyperideal vertex.
pub fn truncate(p: &ProjectivePolyhedron) -> Result<TruncatedPolyhedron> {
    let n = p.num_faces();
    let cut = p.hyperideal_vertices();
    let poles = cut
        .iter()
        .map(|&v| DSPoint::new(p.vertex(v)))
        .collect::<Result<Vec<_>>>()?;
    let polars: Vec<HPlane> = poles.iter().map(polar_plane).collect();
    for i in 0..polars.len() {
        for j in (i + 1)..polars.len() {
            let c = inner(&polars[i].normal(), &polars[j].normal());
            if c >= -1.0 + DISJOINT_TOL {
                return Err(Error::NotTruncation(format!(
                    "polar planes of vertices {} and {} intersect ({c})",
                    cut[i], cut[j]
                )));
            }
        }
    }

    let mut planes = p.planes().to_vec();
    planes.extend(polars);
    let t = ProjectivePolyhedron::from_planes(&planes)?;
    if t.has_hyperideal() {
        return Err(Error::NotTruncation(
            "truncation still has hyperideal vertices".into(),
        ));
    }
    let mut truncation_faces = Vec::with_capacity(cut.len());
    for (i, &v) in cut.iter().enumerate() {
        let face = n + i;
        check_perpendicular(&t, face)?;
        if !same_cycle(&neighbours(&t, face), p.combinatorics().vertex_faces(v)) {
            return Err(Error::NotTruncation(format!(
                "truncation face {face} does not follow the star of vertex {v}"
            )));
        }
        truncation_faces.push((v, face));
    }
    let ideal_vertices = ideal_vertex_map(p, &t)?;
    Ok(TruncatedPolyhedron {
        polyhedron: t,
        original_faces: n,
        truncation_faces,
        ideal_vertices,
    })
}

fn ideal_vertex_map(
    p: &ProjectivePolyhedron,
    t: &ProjectivePolyhedron,
) -> Result<Vec<(usize, usize)>> {
    (0..p.num_vertices())
        .filter(|&v| p.class(v) == VertexClass::Ideal)
        .map(|v| {
            (0..t.num_vertices())
                .find(|&w| {
                    t.class(w) == VertexClass::Ideal && (t.vertex(w) - p.vertex(v)).max_abs() < 1e-7
                })
                .map(|w| (v, w))
                .ok_or_else(|| Error::NotTruncation(format!("ideal vertex {v} was lost")))
        })
        .collect()
}

/// Removes the given truncation faces and recovers the hyperideal vertices
/// as their poles.
pub fn untruncate(t: &ProjectivePolyhedron, faces: &[usize]) -> Result<ProjectivePolyhedron> {
    let c = t.combinatorics();
    if let Some(&f) = faces.iter().find(|&&f| f >= t.num_faces()) {
        return Err(Error::NotTruncation(format!("face {f} does not exist")));
    }
    for (i, &f) in faces.iter().enumerate() {
        for &g in &faces[i + 1..] {
            if f == g || c.edge_between_faces(f, g).is_some() {
                return Err(Error::NotTruncation(format!(
                    "faces {f} and {g} are adjacent"
                )));
            }
        }
        check_perpendicular(t, f)?;
    }
    for v in 0..t.num_vertices() {
        if t.class(v) == VertexClass::Finite && !faces.iter().any(|&f| c.face_contains(f, v)) {
            return Err(Error::NotTruncation(format!(
                "finite vertex {v} is on no listed face"
            )));
        }
    }
    let planes: Vec<HPlane> = (0..t.num_faces())
        .filter(|f| !faces.contains(f))
        .map(|f| t.planes()[f])
        .collect();
    let p = ProjectivePolyhedron::from_planes(&planes)?;
    let hyper = p.hyperideal_vertices();
    let recovered = hyper.len() as isize - t.hyperideal_vertices().len() as isize;
    if recovered != faces.len() as isize {
        return Err(Error::NotTruncation(format!(
            "{recovered} hyperideal vertices recovered for {} truncation faces",
            faces.len()
        )));
    }
    for &f in faces {
        let pole = -unit_normal(t, f);
        if !hyper.iter().any(|&v| (p.vertex(v) - pole).max_abs() < 1e-7) {
            return Err(Error::NotTruncation(format!(
                "the pole of face {f} is not a vertex"
            )));
        }
    }
    Ok(p)
}

/// Exterior dihedral angles of a polyhedron whose vertices are all ideal or
/// hyperideal, with the vertex kinds declared from its classification.
pub fn hyperideal_angles(p: &ProjectivePolyhedron) -> Result<WeightedDualGraph> {
    let declared = p
        .classes()
        .iter()
        .enumerate()
        .map(|(v, class)| match class {
            VertexClass::Ideal => Ok(Some(VertexKind::Ideal)),
            VertexClass::Hyperideal => Ok(Some(VertexKind::Hyperideal)),
            VertexClass::Finite => Err(Error::InvalidInput(format!("vertex {v} is finite"))),
        })
        .collect::<Result<Vec<_>>>()?;
    let weights = (0..p.num_edges())
        .map(|e| p.exterior_angle(e))
        .collect::<Result<Vec<_>>>()?;
    debug_assert!(weights.iter().all(|w| *w > 0.0 && *w <= PI));
    WeightedDualGraph::new(p.combinatorics().clone(), weights, declared)
}

/// The dual metric of the truncation, with truncation-face points renamed
/// after the vertices they cut off and poles after the original ideal
/// vertices, marked by the original combinatorics.
pub fn marked_dual_metric(
    t: &TruncatedPolyhedron,
    original: &Combinatorics,
) -> Result<ConeSphericalMetric> {
    let m = dual_metric(&t.polyhedron)?;
    let mut m = m.relabeled(|label| match label {
        PointLabel::Face(f) => t
            .truncation_faces
            .iter()
            .find(|&&(_, face)| face == f)
            .map_or(label, |&(v, _)| PointLabel::Hyperideal(v)),
        PointLabel::Pole(w) => t
            .ideal_vertices
            .iter()
            .find(|&&(_, tw)| tw == w)
            .map_or(label, |&(v, _)| PointLabel::Pole(v)),
        other => other,
    })?;
    mark_face_seams(&mut m, original)?;
    Ok(m)
}
