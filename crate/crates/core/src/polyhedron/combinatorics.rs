//! Cell decompositions of the sphere given by oriented face cycles.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An undirected edge with its endpoints and the two faces it separates.
///
/// `faces[0]` traverses the edge as `vertices[0] → vertices[1]`, `faces[1]`
/// traverses it backwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub vertices: [usize; 2],
    pub faces: [usize; 2],
}

/// Combinatorics of a polyhedral sphere.
///
/// Faces are oriented coherently: every edge appears once in each direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FaceList", into = "FaceList")]
pub struct Combinatorics {
    face_cycles: Vec<Vec<usize>>,
    num_vertices: usize,
    edges: Vec<Edge>,
    edge_lookup: BTreeMap<(usize, usize), usize>,
    vertex_faces: Vec<Vec<usize>>,
    vertex_edges: Vec<Vec<usize>>,
    face_edges: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceList {
    pub faces: Vec<Vec<usize>>,
}

impl TryFrom<FaceList> for Combinatorics {
    type Error = Error;
    fn try_from(list: FaceList) -> Result<Self> {
        Combinatorics::from_face_cycles(list.faces)
    }
}

impl From<Combinatorics> for FaceList {
    fn from(c: Combinatorics) -> Self {
        FaceList {
            faces: c.face_cycles,
        }
    }
}

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

impl Combinatorics {
    /// Builds the combinatorics from face cycles, reorienting faces as needed
    /// so that adjacent faces induce opposite directions on shared edges.
    /// The orientation of face 0 is kept.
    pub fn from_face_cycles(mut cycles: Vec<Vec<usize>>) -> Result<Self> {
        if cycles.len() < 4 {
            return Err(Error::Combinatorics(format!(
                "{} faces, need at least 4",
                cycles.len()
            )));
        }
        let num_vertices = cycles.iter().flatten().max().map_or(0, |m| m + 1);
        let mut seen = vec![false; num_vertices];
        for (f, cycle) in cycles.iter().enumerate() {
            if cycle.len() < 3 {
                return Err(Error::Combinatorics(format!(
                    "face {f} has fewer than 3 vertices"
                )));
            }
            let mut sorted = cycle.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != cycle.len() {
                return Err(Error::Combinatorics(format!("face {f} repeats a vertex")));
            }
            for &v in cycle {
                seen[v] = true;
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::Combinatorics(format!(
                "vertex {v} belongs to no face"
            )));
        }

        // Undirected edge → incident faces.
        let mut incidence: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (f, cycle) in cycles.iter().enumerate() {
            for i in 0..cycle.len() {
                let (u, v) = (cycle[i], cycle[(i + 1) % cycle.len()]);
                incidence.entry(key(u, v)).or_default().push(f);
            }
        }
        let mut neighbours: Vec<Vec<usize>> = vec![Vec::new(); cycles.len()];
        for (&(u, v), faces) in &incidence {
            if faces.len() != 2 || faces[0] == faces[1] {
                return Err(Error::Combinatorics(format!(
                    "edge {u}-{v} lies on {} faces",
                    faces.len()
                )));
            }
            neighbours[faces[0]].push(faces[1]);
            neighbours[faces[1]].push(faces[0]);
        }

        // Propagate the orientation of face 0.
        let direction = |cycle: &[usize], u: usize, v: usize| -> bool {
            let i = cycle.iter().position(|&x| x == u).expect("vertex on face");
            cycle[(i + 1) % cycle.len()] == v
        };
        let mut fixed = vec![false; cycles.len()];
        fixed[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(f) = queue.pop_front() {
            let cycle = cycles[f].clone();
            for i in 0..cycle.len() {
                let (u, v) = (cycle[i], cycle[(i + 1) % cycle.len()]);
                let faces = &incidence[&key(u, v)];
                let g = if faces[0] == f { faces[1] } else { faces[0] };
                let opposite = direction(&cycles[g], v, u);
                if fixed[g] {
                    if !opposite {
                        return Err(Error::Combinatorics("surface is not orientable".into()));
                    }
                    continue;
                }
                if !opposite {
                    cycles[g].reverse();
                }
                fixed[g] = true;
                queue.push_back(g);
            }
        }
        if fixed.iter().any(|f| !f) {
            return Err(Error::Combinatorics("face graph is disconnected".into()));
        }

        let mut edges = Vec::with_capacity(incidence.len());
        let mut edge_lookup = BTreeMap::new();
        for (&(u, v), faces) in &incidence {
            let (a, b) = (faces[0], faces[1]);
            let faces = if direction(&cycles[a], u, v) {
                [a, b]
            } else {
                [b, a]
            };
            edge_lookup.insert((u, v), edges.len());
            edges.push(Edge {
                vertices: [u, v],
                faces,
            });
        }

        let face_edges: Vec<Vec<usize>> = cycles
            .iter()
            .map(|c| {
                (0..c.len())
                    .map(|i| edge_lookup[&key(c[i], c[(i + 1) % c.len()])])
                    .collect()
            })
            .collect();

        let mut combinatorics = Combinatorics {
            face_cycles: cycles,
            num_vertices,
            edges,
            edge_lookup,
            vertex_faces: Vec::new(),
            vertex_edges: Vec::new(),
            face_edges,
        };
        combinatorics.build_vertex_stars()?;

        let (v, e, f) = (
            combinatorics.num_vertices as i64,
            combinatorics.edges.len() as i64,
            combinatorics.face_cycles.len() as i64,
        );
        if v - e + f != 2 {
            return Err(Error::Combinatorics(format!(
                "Euler characteristic {} instead of 2",
                v - e + f
            )));
        }
        Ok(combinatorics)
    }

    /// Cyclic order of faces and outgoing edges around every vertex.
    fn build_vertex_stars(&mut self) -> Result<()> {
        let mut first_face = vec![usize::MAX; self.num_vertices];
        for (f, cycle) in self.face_cycles.iter().enumerate() {
            for &v in cycle {
                if first_face[v] == usize::MAX {
                    first_face[v] = f;
                }
            }
        }
        let mut degree = vec![0usize; self.num_vertices];
        for e in &self.edges {
            degree[e.vertices[0]] += 1;
            degree[e.vertices[1]] += 1;
        }
        for v in 0..self.num_vertices {
            let mut faces = Vec::new();
            let mut out_edges = Vec::new();
            let mut f = first_face[v];
            loop {
                let b = self.next_on_face(f, v);
                let e = self.edge_between(v, b).expect("face side is an edge");
                faces.push(f);
                out_edges.push(e);
                let edge = &self.edges[e];
                f = if edge.faces[0] == f {
                    edge.faces[1]
                } else {
                    edge.faces[0]
                };
                if f == first_face[v] || faces.len() > degree[v] {
                    break;
                }
            }
            if faces.len() != degree[v] {
                return Err(Error::Combinatorics(format!(
                    "the faces around vertex {v} do not form a single disc"
                )));
            }
            self.vertex_faces.push(faces);
            self.vertex_edges.push(out_edges);
        }
        Ok(())
    }

    pub fn num_faces(&self) -> usize {
        self.face_cycles.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn face_cycles(&self) -> &[Vec<usize>] {
        &self.face_cycles
    }

    pub fn face(&self, f: usize) -> &[usize] {
        &self.face_cycles[f]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    /// Index of the edge joining `u` and `v`, in either order.
    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.edge_lookup.get(&key(u, v)).copied()
    }

    /// Index of the edge separating faces `f` and `g`.
    pub fn edge_between_faces(&self, f: usize, g: usize) -> Option<usize> {
        self.face_edges[f]
            .iter()
            .copied()
            .find(|&e| self.edges[e].faces.contains(&g))
    }

    /// Faces around `v` in cyclic order; face `i` contains the outgoing edge
    /// `vertex_edges(v)[i]`, face `i + 1` lies across it.
    pub fn vertex_faces(&self, v: usize) -> &[usize] {
        &self.vertex_faces[v]
    }

    pub fn vertex_edges(&self, v: usize) -> &[usize] {
        &self.vertex_edges[v]
    }

    /// Edges of `f`; edge `i` joins cycle positions `i` and `i + 1`.
    pub fn face_edges(&self, f: usize) -> &[usize] {
        &self.face_edges[f]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.vertex_faces[v].len()
    }

    /// Successor of `v` along the cycle of `f`.
    pub fn next_on_face(&self, f: usize, v: usize) -> usize {
        let c = &self.face_cycles[f];
        let i = c.iter().position(|&x| x == v).expect("vertex on face");
        c[(i + 1) % c.len()]
    }

    /// Predecessor of `v` along the cycle of `f`.
    pub fn prev_on_face(&self, f: usize, v: usize) -> usize {
        let c = &self.face_cycles[f];
        let i = c.iter().position(|&x| x == v).expect("vertex on face");
        c[(i + c.len() - 1) % c.len()]
    }

    pub fn face_contains(&self, f: usize, v: usize) -> bool {
        self.face_cycles[f].contains(&v)
    }

    /// The dual combinatorics (faces ↔ vertices) and, for every edge here,
    /// the index of the corresponding dual edge.
    pub fn transpose(&self) -> (Combinatorics, Vec<usize>) {
        let dual = Combinatorics::from_face_cycles(self.vertex_faces.clone())
            .expect("transpose of a sphere is a sphere");
        let map = self
            .edges
            .iter()
            .map(|e| {
                dual.edge_between(e.faces[0], e.faces[1])
                    .expect("adjacent faces give a dual edge")
            })
            .collect();
        (dual, map)
    }

    /// Vertex adjacency lists.
    pub fn vertex_neighbours(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.num_vertices];
        for e in &self.edges {
            adj[e.vertices[0]].push(e.vertices[1]);
            adj[e.vertices[1]].push(e.vertices[0]);
        }
        adj
    }

    /// Whether the vertex graph stays connected after removing any two vertices.
    pub fn is_three_connected(&self) -> bool {
        let n = self.num_vertices;
        if n < 4 {
            return false;
        }
        let adj = self.vertex_neighbours();
        let connected_without = |a: usize, b: usize| -> bool {
            let start = (0..n).find(|&x| x != a && x != b).expect("n >= 4");
            let mut seen = vec![false; n];
            seen[a] = true;
            seen[b] = true;
            seen[start] = true;
            let mut stack = vec![start];
            let mut count = 1;
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        count += 1;
                        stack.push(y);
                    }
                }
            }
            count == n - 2
        };
        (0..n).all(|a| ((a + 1)..n).all(|b| connected_without(a, b)))
    }

    /// Same cell structure with vertex ids permuted by `perm` (old → new).
    pub fn relabel_vertices(&self, perm: &[usize]) -> Result<Combinatorics> {
        let cycles = self
            .face_cycles
            .iter()
            .map(|c| c.iter().map(|&v| perm[v]).collect())
            .collect();
        Combinatorics::from_face_cycles(cycles)
    }
}

/// Face cycles of the Platonic solids, with vertices numbered from 0.
pub mod platonic {
    use super::Combinatorics;

    pub fn tetrahedron() -> Combinatorics {
        Combinatorics::from_face_cycles(vec![
            vec![0, 1, 2],
            vec![0, 3, 1],
            vec![0, 2, 3],
            vec![1, 3, 2],
        ])
        .expect("valid")
    }

    pub fn cube() -> Combinatorics {
        Combinatorics::from_face_cycles(vec![
            vec![0, 1, 2, 3],
            vec![4, 7, 6, 5],
            vec![0, 4, 5, 1],
            vec![1, 5, 6, 2],
            vec![2, 6, 7, 3],
            vec![3, 7, 4, 0],
        ])
        .expect("valid")
    }

    pub fn octahedron() -> Combinatorics {
        cube().transpose().0
    }

    pub fn dodecahedron() -> Combinatorics {
        icosahedron().transpose().0
    }

    pub fn icosahedron() -> Combinatorics {
        // Top vertex 0, upper ring 1..=5, lower ring 6..=10, bottom 11.
        let mut faces = Vec::new();
        for i in 0..5 {
            let (a, b) = (1 + i, 1 + (i + 1) % 5);
            let (c, d) = (6 + i, 6 + (i + 1) % 5);
            faces.push(vec![0, a, b]);
            faces.push(vec![a, c, b]);
            faces.push(vec![b, c, d]);
            faces.push(vec![11, d, c]);
        }
        Combinatorics::from_face_cycles(faces).expect("valid")
    }
}
