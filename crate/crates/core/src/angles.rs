//! Exterior dihedral angle assignments on the dual graph and the cycle and
//! path conditions that characterize angles of hyperideal polyhedra.
//!
//! The dual graph is never built explicitly: its vertices are the faces of
//! the primal combinatorics, its edges are the primal edges, and its faces
//! are the primal vertices.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::conemetric::{build_q_gamma, build_q_gamma_relaxed, closed_geodesic_falsifier, Budget};
use crate::error::{Error, Result};
use crate::polyhedron::Combinatorics;

/// Default band for "sum equals 2π".
pub const TOL_EQ: f64 = 1e-8;
/// Sums this close to `2π` count as exact when inferring ideal vertices.
pub const EXACT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Ideal,
    Hyperideal,
}

/// A primal combinatorics with one weight per edge and optional vertex kinds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GraphFile", into = "GraphFile")]
pub struct WeightedDualGraph {
    combinatorics: Combinatorics,
    weights: Vec<f64>,
    declared: Vec<Option<VertexKind>>,
}

/// File form: `{"faces": [...], "weights": {"edge id": θ}, "vertex_kind": {"vertex id": "ideal"}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    pub faces: Vec<Vec<usize>>,
    pub weights: BTreeMap<usize, f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub vertex_kind: BTreeMap<usize, VertexKind>,
}

impl TryFrom<GraphFile> for WeightedDualGraph {
    type Error = Error;
    fn try_from(file: GraphFile) -> Result<Self> {
        let combinatorics = Combinatorics::from_face_cycles(file.faces)?;
        let e = combinatorics.num_edges();
        let mut weights = vec![f64::NAN; e];
        for (&id, &w) in &file.weights {
            if id >= e {
                return Err(Error::InvalidInput(format!("weight for missing edge {id}")));
            }
            weights[id] = w;
        }
        if let Some(id) = weights.iter().position(|w| w.is_nan()) {
            return Err(Error::InvalidInput(format!("edge {id} has no weight")));
        }
        let mut declared = vec![None; combinatorics.num_vertices()];
        for (&v, &k) in &file.vertex_kind {
            *declared
                .get_mut(v)
                .ok_or_else(|| Error::InvalidInput(format!("kind for missing vertex {v}")))? =
                Some(k);
        }
        WeightedDualGraph::new(combinatorics, weights, declared)
    }
}

impl From<WeightedDualGraph> for GraphFile {
    fn from(g: WeightedDualGraph) -> Self {
        GraphFile {
            faces: g.combinatorics.face_cycles().to_vec(),
            weights: g.weights.iter().copied().enumerate().collect(),
            vertex_kind: g
                .declared
                .iter()
                .enumerate()
                .filter_map(|(v, k)| k.map(|k| (v, k)))
                .collect(),
        }
    }
}

impl WeightedDualGraph {
    /// Weights outside `(0, π)` are accepted here and reported by [`check_k_gamma`].
    pub fn new(
        combinatorics: Combinatorics,
        weights: Vec<f64>,
        declared: Vec<Option<VertexKind>>,
    ) -> Result<Self> {
        if weights.len() != combinatorics.num_edges() {
            return Err(Error::InvalidInput(format!(
                "{} weights for {} edges",
                weights.len(),
                combinatorics.num_edges()
            )));
        }
        if declared.len() != combinatorics.num_vertices() {
            return Err(Error::InvalidInput(
                "vertex kind list has the wrong length".into(),
            ));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidInput("weights must be finite".into()));
        }
        if !combinatorics.is_three_connected() {
            return Err(Error::Combinatorics("graph is not 3-connected".into()));
        }
        Ok(WeightedDualGraph {
            combinatorics,
            weights,
            declared,
        })
    }

    /// All weights equal to `theta`, kinds undeclared.
    pub fn uniform(combinatorics: Combinatorics, theta: f64) -> Result<Self> {
        let e = combinatorics.num_edges();
        let v = combinatorics.num_vertices();
        Self::new(combinatorics, vec![theta; e], vec![None; v])
    }

    pub fn combinatorics(&self) -> &Combinatorics {
        &self.combinatorics
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, e: usize) -> f64 {
        self.weights[e]
    }

    pub fn declared(&self) -> &[Option<VertexKind>] {
        &self.declared
    }

    pub fn with_declared(mut self, v: usize, kind: VertexKind) -> Self {
        self.declared[v] = Some(kind);
        self
    }

    pub fn with_weight(mut self, e: usize, theta: f64) -> Self {
        self.weights[e] = theta;
        self
    }

    /// Sum of the weights around primal vertex `v` (a dual face).
    pub fn vertex_sum(&self, v: usize) -> f64 {
        self.combinatorics
            .vertex_edges(v)
            .iter()
            .map(|&e| self.weights[e])
            .sum()
    }

    /// Declared kind, or ideal when the sum is `2π` up to rounding.
    pub fn kind(&self, v: usize) -> VertexKind {
        self.declared[v].unwrap_or_else(|| {
            if (self.vertex_sum(v) - TAU).abs() <= EXACT_TOL {
                VertexKind::Ideal
            } else {
                VertexKind::Hyperideal
            }
        })
    }

    pub fn kinds(&self) -> Vec<VertexKind> {
        (0..self.combinatorics.num_vertices())
            .map(|v| self.kind(v))
            .collect()
    }

    /// The same graph with edges renumbered by `perm` (old → new) via a
    /// relabelling of vertices.
    pub fn relabeled(&self, vertex_perm: &[usize]) -> Result<(Self, Vec<usize>)> {
        let c = self.combinatorics.relabel_vertices(vertex_perm)?;
        let mut edge_map = vec![0; self.weights.len()];
        let mut weights = vec![0.0; self.weights.len()];
        for (e, edge) in self.combinatorics.edges().iter().enumerate() {
            let [u, v] = edge.vertices;
            let ne = c
                .edge_between(vertex_perm[u], vertex_perm[v])
                .ok_or_else(|| Error::Combinatorics("relabelling lost an edge".into()))?;
            edge_map[e] = ne;
            weights[ne] = self.weights[e];
        }
        let mut declared = vec![None; self.declared.len()];
        for (v, k) in self.declared.iter().enumerate() {
            declared[vertex_perm[v]] = *k;
        }
        Ok((WeightedDualGraph::new(c, weights, declared)?, edge_map))
    }

    /// Dual-graph adjacency: for every primal face, `(neighbouring face, edge)`.
    fn dual_adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let c = &self.combinatorics;
        (0..c.num_faces())
            .map(|f| {
                c.face_edges(f)
                    .iter()
                    .map(|&e| {
                        let [a, b] = c.edge(e).faces;
                        (if a == f { b } else { a }, e)
                    })
                    .collect()
            })
            .collect()
    }
}

/// A simple cycle or path in the dual graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualWalk {
    /// Dual vertices (primal faces) in order.
    pub vertices: Vec<usize>,
    /// Edges, sorted.
    pub edges: Vec<usize>,
    pub sum: f64,
}

/// Simple cycles of the dual graph with weight sum at most `bound`.
pub fn simple_cycles(g: &WeightedDualGraph, bound: f64) -> Vec<DualWalk> {
    let adj = g.dual_adjacency();
    let n = adj.len();
    let mut out = Vec::new();
    for s in 0..n {
        let mut on_path = vec![false; n];
        on_path[s] = true;
        let mut vertices = vec![s];
        let mut edges = Vec::new();
        cycle_dfs(
            g,
            &adj,
            s,
            0.0,
            bound,
            &mut on_path,
            &mut vertices,
            &mut edges,
            &mut out,
        );
    }
    out.sort_by(|a, b| a.edges.cmp(&b.edges));
    out
}

#[allow(clippy::too_many_arguments)]
fn cycle_dfs(
    g: &WeightedDualGraph,
    adj: &[Vec<(usize, usize)>],
    s: usize,
    sum: f64,
    bound: f64,
    on_path: &mut [bool],
    vertices: &mut Vec<usize>,
    edges: &mut Vec<usize>,
    out: &mut Vec<DualWalk>,
) {
    let here = *vertices.last().expect("path starts at s");
    for &(next, e) in &adj[here] {
        let total = sum + g.weights[e];
        if total > bound {
            continue;
        }
        if next == s {
            // Each cycle is met in both directions; keep one.
            if vertices.len() >= 3 && vertices[1] < here {
                let mut sorted = edges.clone();
                sorted.push(e);
                sorted.sort_unstable();
                out.push(DualWalk {
                    vertices: vertices.clone(),
                    edges: sorted,
                    sum: total,
                });
            }
            continue;
        }
        if next < s || on_path[next] {
            continue;
        }
        on_path[next] = true;
        vertices.push(next);
        edges.push(e);
        cycle_dfs(g, adj, s, total, bound, on_path, vertices, edges, out);
        edges.pop();
        vertices.pop();
        on_path[next] = false;
    }
}

/// Simple paths with at least one edge and weight sum at most `bound`, each
/// listed once with its smaller endpoint first.
pub fn simple_paths(g: &WeightedDualGraph, bound: f64) -> Vec<DualWalk> {
    let adj = g.dual_adjacency();
    let n = adj.len();
    let mut out = Vec::new();
    for s in 0..n {
        let mut on_path = vec![false; n];
        on_path[s] = true;
        let mut vertices = vec![s];
        let mut edges = Vec::new();
        path_dfs(
            g,
            &adj,
            0.0,
            bound,
            &mut on_path,
            &mut vertices,
            &mut edges,
            &mut out,
        );
    }
    out.sort_by(|a, b| {
        (a.vertices.first(), a.vertices.last(), &a.edges).cmp(&(
            b.vertices.first(),
            b.vertices.last(),
            &b.edges,
        ))
    });
    out
}

#[allow(clippy::too_many_arguments)]
fn path_dfs(
    g: &WeightedDualGraph,
    adj: &[Vec<(usize, usize)>],
    sum: f64,
    bound: f64,
    on_path: &mut [bool],
    vertices: &mut Vec<usize>,
    edges: &mut Vec<usize>,
    out: &mut Vec<DualWalk>,
) {
    let here = *vertices.last().expect("non-empty path");
    for &(next, e) in &adj[here] {
        let total = sum + g.weights[e];
        if total > bound || on_path[next] {
            continue;
        }
        on_path[next] = true;
        vertices.push(next);
        edges.push(e);
        if vertices[0] < next {
            let mut sorted = edges.clone();
            sorted.sort_unstable();
            out.push(DualWalk {
                vertices: vertices.clone(),
                edges: sorted,
                sum: total,
            });
        }
        path_dfs(g, adj, total, bound, on_path, vertices, edges, out);
        edges.pop();
        vertices.pop();
        on_path[next] = false;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleViolation {
    pub reason: String,
    #[serde(flatten)]
    pub cycle: DualWalk,
    /// The primal vertex whose dual face the cycle bounds, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub face: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct C1Report {
    pub passed: bool,
    /// Primal vertices whose dual faces sum to `2π` and are treated as ideal.
    pub ideal_faces: Vec<usize>,
    /// Ideal faces that were inferred rather than declared.
    pub inferred: Vec<usize>,
    pub cycles_checked: usize,
    pub violations: Vec<CycleViolation>,
}

/// Cycle condition: every simple dual cycle sums to at least `2π`, with
/// equality exactly on the boundaries of faces of ideal vertices.
pub fn check_c1(g: &WeightedDualGraph, tol_eq: f64) -> C1Report {
    let c = g.combinatorics();
    // Dual face boundaries keyed by their sorted edge sets.
    let mut face_of: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for v in 0..c.num_vertices() {
        let mut edges = c.vertex_edges(v).to_vec();
        edges.sort_unstable();
        face_of.insert(edges, v);
    }
    let cycles = simple_cycles(g, TAU + tol_eq);
    let mut violations = Vec::new();
    let mut ideal_faces = Vec::new();
    let mut inferred = Vec::new();
    for cycle in &cycles {
        let face = face_of.get(&cycle.edges).copied();
        let gap = cycle.sum - TAU;
        let reason = if gap < -tol_eq {
            Some("sum below 2pi")
        } else if gap.abs() <= tol_eq {
            match face {
                None => Some("equality on a non-face cycle"),
                Some(v) => match g.declared()[v] {
                    Some(VertexKind::Ideal) => {
                        ideal_faces.push(v);
                        None
                    }
                    Some(VertexKind::Hyperideal) => Some("equality on a face not declared ideal"),
                    None if gap.abs() <= EXACT_TOL => {
                        ideal_faces.push(v);
                        inferred.push(v);
                        None
                    }
                    None => Some("ambiguous near-equality"),
                },
            }
        } else {
            None
        };
        if let Some(reason) = reason {
            violations.push(CycleViolation {
                reason: reason.to_string(),
                cycle: cycle.clone(),
                face,
            });
        }
    }
    // Declared ideal faces must actually sum to 2π.
    for v in 0..c.num_vertices() {
        if g.declared()[v] == Some(VertexKind::Ideal) && !ideal_faces.contains(&v) {
            let sum = g.vertex_sum(v);
            if sum >= TAU - tol_eq {
                let mut edges = c.vertex_edges(v).to_vec();
                edges.sort_unstable();
                violations.push(CycleViolation {
                    reason: "declared ideal face does not sum to 2pi".into(),
                    cycle: DualWalk {
                        vertices: c.vertex_faces(v).to_vec(),
                        edges,
                        sum,
                    },
                    face: Some(v),
                });
            }
        }
    }
    ideal_faces.sort_unstable();
    inferred.sort_unstable();
    violations.sort_by(|a, b| a.cycle.edges.cmp(&b.cycle.edges));
    C1Report {
        passed: violations.is_empty(),
        ideal_faces,
        inferred,
        cycles_checked: cycles.len(),
        violations,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathViolation {
    #[serde(flatten)]
    pub path: DualWalk,
    /// Primal vertex whose dual face contains both endpoints.
    pub face: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct C2Report {
    pub passed: bool,
    pub paths_checked: usize,
    pub violations: Vec<PathViolation>,
}

/// Path condition: a simple dual path joining two vertices of a dual face,
/// not contained in that face's boundary, sums to more than `π`.
pub fn check_c2(g: &WeightedDualGraph, tol_eq: f64) -> C2Report {
    let c = g.combinatorics();
    let paths = simple_paths(g, PI + tol_eq);
    let mut violations = Vec::new();
    let mut checked = 0;
    for path in &paths {
        let (a, b) = (path.vertices[0], *path.vertices.last().expect("non-empty"));
        for v in 0..c.num_vertices() {
            let around = c.vertex_faces(v);
            if !(around.contains(&a) && around.contains(&b)) {
                continue;
            }
            let boundary = c.vertex_edges(v);
            if path.edges.iter().all(|e| boundary.contains(e)) {
                continue;
            }
            checked += 1;
            if path.sum <= PI + tol_eq {
                violations.push(PathViolation {
                    path: path.clone(),
                    face: v,
                });
            }
        }
    }
    violations.sort_by(|x, y| (&x.path.edges, x.face).cmp(&(&y.path.edges, y.face)));
    C2Report {
        passed: violations.is_empty(),
        paths_checked: checked,
        violations,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KGammaReport {
    pub member: bool,
    /// Edges whose weight is outside `(0, π)`.
    pub out_of_range: Vec<usize>,
    pub c1: C1Report,
    pub c2: C2Report,
    /// Vertex kinds implied by the equality cases; present for members.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex_kinds: Option<Vec<VertexKind>>,
}

/// Membership of the weights in the set of exterior angles of hyperideal polyhedra.
pub fn check_k_gamma(g: &WeightedDualGraph, tol_eq: f64) -> KGammaReport {
    let out_of_range: Vec<usize> = g
        .weights()
        .iter()
        .enumerate()
        .filter(|(_, &w)| !(w > 0.0 && w < PI))
        .map(|(e, _)| e)
        .collect();
    let c1 = check_c1(g, tol_eq);
    let c2 = check_c2(g, tol_eq);
    let member = out_of_range.is_empty() && c1.passed && c2.passed;
    let vertex_kinds = member.then(|| {
        (0..g.combinatorics().num_vertices())
            .map(|v| {
                if c1.ideal_faces.contains(&v) {
                    VertexKind::Ideal
                } else {
                    VertexKind::Hyperideal
                }
            })
            .collect()
    });
    KGammaReport {
        member,
        out_of_range,
        c1,
        c2,
        vertex_kinds,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub member: bool,
    /// Whether the metric had to be built without the local-sum checks.
    pub relaxed: bool,
    pub witness_length: Option<f64>,
    pub hemisphere_boundaries: usize,
    pub agree: bool,
    /// A short closed geodesic on a member's metric: a soundness failure.
    pub hard_failure: bool,
}

/// Compares the combinatorial verdict with a closed-geodesic search on the
/// metric built from the same weights.
pub fn consistency_with_metric(
    g: &WeightedDualGraph,
    tol_eq: f64,
    budget: &Budget,
) -> Result<ConsistencyReport> {
    let verdict = check_k_gamma(g, tol_eq);
    let (metric, relaxed) = match build_q_gamma(g) {
        Ok(m) => (m, false),
        Err(_) => (build_q_gamma_relaxed(g)?, true),
    };
    let search = closed_geodesic_falsifier(&metric, TAU + budget.margin, budget)?;
    let witness_length = search.witness.as_ref().map(|w| w.length);
    let found = witness_length.is_some();
    Ok(ConsistencyReport {
        member: verdict.member,
        relaxed,
        witness_length,
        hemisphere_boundaries: search.exceptions.len(),
        agree: verdict.member != found,
        hard_failure: verdict.member && found,
    })
}
