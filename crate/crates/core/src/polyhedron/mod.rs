//! Convex projective polyhedra cut out by hyperbolic half-spaces.
//!
//! A polyhedron is the cone `{y : ⟨y, n_f⟩ ≥ 0 for every face f}` over a
//! convex polytope of projective space. Its vertices are the extreme rays of
//! that cone; a vertex is finite, ideal or hyperideal according to whether it
//! lies inside, on or outside the light cone.

mod combinatorics;

pub use combinatorics::{platonic, Combinatorics, Edge, FaceList};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::minkowski::{
    classify, det4, inner, orthogonal_complement, CausalClass, HPlane, Isometry, MVector,
};

/// Incidence tolerance for `⟨v, n⟩` on Euclidean-normalized vertices.
pub const INCIDENCE_TOL: f64 = 1e-8;
/// Two vertex rays closer than this (as Euclidean unit vectors) are merged.
pub const DEDUPE_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexClass {
    Finite,
    Ideal,
    Hyperideal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectivePolyhedron {
    planes: Vec<HPlane>,
    combinatorics: Combinatorics,
    vertices: Vec<MVector>,
    classes: Vec<VertexClass>,
}

/// Normalizes a vertex ray: `⟨v,v⟩ = −1` with `x0 > 0` if timelike, `x0 = 1`
/// if lightlike, `⟨v,v⟩ = 1` (keeping the ray) if spacelike.
pub fn normalize_vertex(v: &MVector) -> Result<(MVector, VertexClass)> {
    Ok(match classify(v)? {
        CausalClass::Timelike => {
            let u = v.unit()?;
            (if u[0] < 0.0 { -u } else { u }, VertexClass::Finite)
        }
        CausalClass::Lightlike => (*v / v[0], VertexClass::Ideal),
        CausalClass::Spacelike => (v.unit()?, VertexClass::Hyperideal),
    })
}

/// A future timelike point on the segment of positive combinations of `u`
/// and `w`, if there is one.
pub fn segment_timelike_point(u: &MVector, w: &MVector) -> Option<MVector> {
    let (u, w) = (u.euclidean_unit().ok()?, w.euclidean_unit().ok()?);
    let (a, b, c) = (u.norm_sq(), inner(&u, &w), w.norm_sq());
    // Minimize a s² + 2b s t + c t² over s, t ≥ 0 with s + t = 1.
    let mut candidates = vec![0.0, 1.0];
    let denom = a - 2.0 * b + c;
    if denom.abs() > 1e-300 {
        candidates.push(((c - b) / denom).clamp(0.0, 1.0));
    }
    let best = candidates
        .into_iter()
        .map(|s| u * s + w * (1.0 - s))
        .min_by(|p, q| p.norm_sq().total_cmp(&q.norm_sq()))?;
    (best.norm_sq() < -1e-12 * best.dot(&best)).then_some(best)
}

/// Cyclically orders the vertices of a face from its edge list.
fn order_face(face: usize, vertices: &[usize], edges: &[(usize, usize)]) -> Result<Vec<usize>> {
    let mut adjacent: std::collections::BTreeMap<usize, Vec<usize>> =
        vertices.iter().map(|&v| (v, Vec::new())).collect();
    for &(u, v) in edges {
        if let Some(a) = adjacent.get_mut(&u) {
            a.push(v)
        }
        if let Some(a) = adjacent.get_mut(&v) {
            a.push(u)
        }
    }
    if adjacent.values().any(|a| a.len() != 2) {
        return Err(Error::NonPolyhedral(format!(
            "face {face} is not a simple polygon"
        )));
    }
    let start = vertices[0];
    let mut cycle = vec![start];
    let mut prev = start;
    let mut cur = adjacent[&start][0];
    while cur != start {
        cycle.push(cur);
        let next = adjacent[&cur]
            .iter()
            .copied()
            .find(|&x| x != prev)
            .expect("degree 2");
        prev = cur;
        cur = next;
        if cycle.len() > vertices.len() {
            break;
        }
    }
    if cycle.len() != vertices.len() {
        return Err(Error::NonPolyhedral(format!(
            "face {face} is not a single cycle"
        )));
    }
    Ok(cycle)
}

impl ProjectivePolyhedron {
    /// Intersects the half-spaces of the planes and recovers the cell structure.
    pub fn from_planes(planes: &[HPlane]) -> Result<Self> {
        let n = planes.len();
        if n < 4 {
            return Err(Error::InvalidInput(format!("{n} planes, need at least 4")));
        }
        let normals: Vec<MVector> = planes.iter().map(|p| p.normal()).collect();
        let scales: Vec<f64> = normals.iter().map(|n| n.euclidean_norm()).collect();

        // Extreme rays of the cone: one per non-degenerate triple of tight constraints.
        let mut rays: Vec<MVector> = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                for c in (b + 1)..n {
                    let v = orthogonal_complement(&normals[a], &normals[b], &normals[c]);
                    let size = v.euclidean_norm();
                    if size <= 1e-9 * scales[a] * scales[b] * scales[c] {
                        continue;
                    }
                    let v = v / size;
                    let evals: Vec<f64> = normals.iter().map(|nf| inner(&v, nf)).collect();
                    let fits = |s: f64| {
                        evals
                            .iter()
                            .zip(&scales)
                            .all(|(e, sc)| s * e >= -INCIDENCE_TOL * sc)
                    };
                    let ray = if fits(1.0) {
                        v
                    } else if fits(-1.0) {
                        -v
                    } else {
                        continue;
                    };
                    if !rays.iter().any(|r| r.distance_euclidean(&ray) < DEDUPE_TOL) {
                        rays.push(ray);
                    }
                }
            }
        }

        // Incidences.
        let mut vertex_faces: Vec<Vec<usize>> = Vec::with_capacity(rays.len());
        for (i, r) in rays.iter().enumerate() {
            let faces: Vec<usize> = (0..n)
                .filter(|&f| inner(r, &normals[f]).abs() <= INCIDENCE_TOL * scales[f])
                .collect();
            if faces.len() < 3 {
                return Err(Error::NonPolyhedral(format!(
                    "vertex {i} lies on only {} faces",
                    faces.len()
                )));
            }
            vertex_faces.push(faces);
        }
        let mut face_vertices: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (v, faces) in vertex_faces.iter().enumerate() {
            for &f in faces {
                face_vertices[f].push(v);
            }
        }
        if let Some(f) = face_vertices.iter().position(|vs| vs.len() < 3) {
            return Err(Error::RedundantPlane(f));
        }

        // Edges: pairs of faces sharing exactly two vertices.
        let mut face_edge_lists: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for f in 0..n {
            for g in (f + 1)..n {
                let shared: Vec<usize> = face_vertices[f]
                    .iter()
                    .copied()
                    .filter(|v| face_vertices[g].contains(v))
                    .collect();
                if shared.len() > 2 {
                    return Err(Error::NonPolyhedral(format!(
                        "faces {f} and {g} share {} vertices",
                        shared.len()
                    )));
                }
                if shared.len() == 2 {
                    face_edge_lists[f].push((shared[0], shared[1]));
                    face_edge_lists[g].push((shared[0], shared[1]));
                }
            }
        }

        // Face cycles oriented by a point inside the cone.
        let interior = rays.iter().fold(MVector::ZERO, |acc, r| acc + *r);
        let mut cycles = Vec::with_capacity(n);
        for f in 0..n {
            let mut cycle = order_face(f, &face_vertices[f], &face_edge_lists[f])?;
            let k = cycle.len();
            let orientation = (0..k)
                .map(|i| {
                    det4(
                        &rays[cycle[i]],
                        &rays[cycle[(i + 1) % k]],
                        &rays[cycle[(i + 2) % k]],
                        &interior,
                    )
                })
                .max_by(|a, b| a.abs().total_cmp(&b.abs()))
                .unwrap_or(0.0);
            if orientation < 0.0 {
                cycle.reverse();
            }
            cycles.push(cycle);
        }
        let combinatorics = Combinatorics::from_face_cycles(cycles)
            .map_err(|e| Error::NonPolyhedral(e.to_string()))?;

        for e in combinatorics.edges() {
            let [u, w] = e.vertices;
            match segment_timelike_point(&rays[u], &rays[w]) {
                Some(p) if p[0] > 0.0 => {}
                Some(_) => {
                    return Err(Error::NonPolyhedral(
                        "polyhedron does not meet the upper sheet".into(),
                    ))
                }
                None => return Err(Error::EdgeMissesH3(e.faces[0], e.faces[1])),
            }
        }

        let mut vertices = Vec::with_capacity(rays.len());
        let mut classes = Vec::with_capacity(rays.len());
        for (i, r) in rays.iter().enumerate() {
            let (v, class) = normalize_ray(r)?;
            if class != VertexClass::Hyperideal && r[0] < 0.0 {
                return Err(Error::NonPolyhedral(format!(
                    "vertex {i} lies across the sphere at infinity"
                )));
            }
            vertices.push(v);
            classes.push(class);
        }
        Ok(ProjectivePolyhedron {
            planes: planes.to_vec(),
            combinatorics,
            vertices,
            classes,
        })
    }

    /// Takes the cell structure as given and places each vertex at the
    /// intersection of its faces' planes, without checking convexity; use
    /// [`validate`] to audit the result.
    pub fn with_combinatorics(planes: &[HPlane], combinatorics: Combinatorics) -> Result<Self> {
        if combinatorics.num_faces() != planes.len() {
            return Err(Error::InvalidInput(format!(
                "{} planes but {} faces",
                planes.len(),
                combinatorics.num_faces()
            )));
        }
        let normals: Vec<MVector> = planes.iter().map(|p| p.normal()).collect();
        let mut vertices = Vec::new();
        let mut classes = Vec::new();
        for v in 0..combinatorics.num_vertices() {
            let faces = combinatorics.vertex_faces(v);
            let mut best = MVector::ZERO;
            for i in 0..faces.len() {
                for j in (i + 1)..faces.len() {
                    for k in (j + 1)..faces.len() {
                        let c = orthogonal_complement(
                            &normals[faces[i]],
                            &normals[faces[j]],
                            &normals[faces[k]],
                        );
                        if c.euclidean_norm() > best.euclidean_norm() {
                            best = c;
                        }
                    }
                }
            }
            let ray = best.euclidean_unit().map_err(|_| {
                Error::NonPolyhedral(format!("the faces at vertex {v} have no common point"))
            })?;
            let satisfied = |r: &MVector| {
                normals
                    .iter()
                    .filter(|n| inner(r, n) >= -INCIDENCE_TOL)
                    .count()
            };
            let ray = if satisfied(&-ray) > satisfied(&ray) {
                -ray
            } else {
                ray
            };
            let (p, class) = normalize_ray(&ray)?;
            vertices.push(p);
            classes.push(class);
        }
        Ok(ProjectivePolyhedron {
            planes: planes.to_vec(),
            combinatorics,
            vertices,
            classes,
        })
    }

    pub fn planes(&self) -> &[HPlane] {
        &self.planes
    }

    pub fn normal(&self, face: usize) -> MVector {
        self.planes[face].normal()
    }

    pub fn combinatorics(&self) -> &Combinatorics {
        &self.combinatorics
    }

    pub fn vertices(&self) -> &[MVector] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> MVector {
        self.vertices[v]
    }

    pub fn classes(&self) -> &[VertexClass] {
        &self.classes
    }

    pub fn class(&self, v: usize) -> VertexClass {
        self.classes[v]
    }

    pub fn num_faces(&self) -> usize {
        self.planes.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.combinatorics.num_edges()
    }

    pub fn is_compact(&self) -> bool {
        self.classes.iter().all(|&c| c == VertexClass::Finite)
    }

    pub fn has_hyperideal(&self) -> bool {
        self.classes.contains(&VertexClass::Hyperideal)
    }

    /// Indices of the strictly hyperideal vertices.
    pub fn hyperideal_vertices(&self) -> Vec<usize> {
        (0..self.num_vertices())
            .filter(|&v| self.classes[v] == VertexClass::Hyperideal)
            .collect()
    }

    /// Image under an isometry of R⁴₁.
    pub fn transformed(&self, g: &Isometry) -> Result<Self> {
        let planes: Vec<HPlane> = self.planes.iter().map(|p| p.transformed(g)).collect();
        let mut vertices = Vec::with_capacity(self.vertices.len());
        for v in &self.vertices {
            vertices.push(normalize_ray(&g.apply(v))?.0);
        }
        Ok(ProjectivePolyhedron {
            planes,
            combinatorics: self.combinatorics.clone(),
            vertices,
            classes: self.classes.clone(),
        })
    }

    /// Interior dihedral angle `arccos(−⟨n_a, n_b⟩)` along an edge.
    pub fn dihedral_angle(&self, edge: usize) -> Result<f64> {
        let [a, b] = self.combinatorics.edge(edge).faces;
        let c = -inner(&self.normal(a), &self.normal(b));
        if c.abs() > 1.0 + 1e-9 {
            return Err(Error::NoHyperbolicEdge);
        }
        Ok(c.clamp(-1.0, 1.0).acos())
    }

    /// `π` minus the dihedral angle.
    pub fn exterior_angle(&self, edge: usize) -> Result<f64> {
        let [a, b] = self.combinatorics.edge(edge).faces;
        let c = inner(&self.normal(a), &self.normal(b));
        if c.abs() > 1.0 + 1e-9 {
            return Err(Error::NoHyperbolicEdge);
        }
        Ok(c.clamp(-1.0, 1.0).acos())
    }

    /// Interior angle of face `f` at its vertex `v`; zero at ideal vertices.
    pub fn face_angle(&self, f: usize, v: usize) -> Result<f64> {
        match self.classes[v] {
            VertexClass::Ideal => return Ok(0.0),
            VertexClass::Hyperideal => return Err(Error::TruncateFirst(v)),
            VertexClass::Finite => {}
        }
        let p = self.vertices[v];
        let tangent = |u: usize| {
            let q = self.vertices[u];
            q + p * inner(&q, &p)
        };
        let a = tangent(self.combinatorics.prev_on_face(f, v));
        let b = tangent(self.combinatorics.next_on_face(f, v));
        let c = inner(&a, &b) / (a.norm_sq() * b.norm_sq()).sqrt();
        Ok(c.clamp(-1.0, 1.0).acos())
    }

    /// Hyperbolic area of a face from its angle defect.
    pub fn face_area(&self, f: usize) -> Result<f64> {
        let cycle = self.combinatorics.face(f);
        let mut sum = 0.0;
        for &v in cycle {
            sum += self.face_angle(f, v)?;
        }
        Ok((cycle.len() as f64 - 2.0) * PI - sum)
    }
}

fn normalize_ray(ray: &MVector) -> Result<(MVector, VertexClass)> {
    let (v, class) = normalize_vertex(ray)?;
    // Keep the ray for spacelike vertices; finite and ideal ones are normalized
    // onto the future cone, which is where the cone over the polyhedron lives.
    Ok(match class {
        VertexClass::Hyperideal if v.dot(ray) < 0.0 => (-v, class),
        _ => (v, class),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationItem {
    pub check: String,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plane: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub classes: Vec<VertexClass>,
    pub failures: Vec<ValidationItem>,
}

/// Re-checks Euler characteristic, incidences, convexity, classification and
/// that every edge meets H³.
pub fn validate(p: &ProjectivePolyhedron) -> ValidationReport {
    let c = p.combinatorics();
    let mut failures = Vec::new();
    let mut fail = |check: &str, detail: String, plane: Option<usize>, vertex: Option<usize>| {
        failures.push(ValidationItem {
            check: check.to_string(),
            detail,
            plane,
            vertex,
        })
    };
    let euler = c.num_vertices() as i64 - c.num_edges() as i64 + c.num_faces() as i64;
    if euler != 2 {
        fail("euler", format!("V - E + F = {euler}"), None, None);
    }
    let mut classes = Vec::with_capacity(p.num_vertices());
    for v in 0..p.num_vertices() {
        let x = p.vertex(v);
        let unit = x / x.euclidean_norm();
        for f in 0..p.num_faces() {
            let n = p.normal(f);
            let value = inner(&unit, &n) / n.euclidean_norm();
            if c.face_contains(f, v) {
                if value.abs() > INCIDENCE_TOL {
                    fail(
                        "incidence",
                        format!("vertex {v} is off plane {f} by {value:e}"),
                        Some(f),
                        Some(v),
                    );
                }
            } else if value < -INCIDENCE_TOL {
                fail(
                    "convexity",
                    format!("vertex {v} violates plane {f} by {value:e}"),
                    Some(f),
                    Some(v),
                );
            }
        }
        if c.degree(v) < 3 {
            fail(
                "incidence",
                format!("vertex {v} has degree {}", c.degree(v)),
                None,
                Some(v),
            );
        }
        match normalize_vertex(&x) {
            Ok((_, class)) => {
                if class != p.class(v) {
                    fail(
                        "classification",
                        format!("vertex {v} is {class:?}, stored as {:?}", p.class(v)),
                        None,
                        Some(v),
                    );
                }
                classes.push(class);
            }
            Err(e) => {
                fail("classification", format!("vertex {v}: {e}"), None, Some(v));
                classes.push(p.class(v));
            }
        }
    }
    for e in c.edges() {
        let [u, w] = e.vertices;
        match segment_timelike_point(&p.vertex(u), &p.vertex(w)) {
            Some(x) if x[0] > 0.0 => {}
            _ => fail(
                "edge-meets-h3",
                format!(
                    "edge {u}-{w} between faces {} and {}",
                    e.faces[0], e.faces[1]
                ),
                None,
                None,
            ),
        }
    }
    ValidationReport {
        passed: failures.is_empty(),
        classes,
        failures,
    }
}
