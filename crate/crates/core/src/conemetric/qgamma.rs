use std::f64::consts::TAU;

use super::{
    ConeSphericalMetric, Marking, MetricBuilder, PointLabel, Seam, SideRef, SphericalTriangle,
};
use crate::angles::{VertexKind, WeightedDualGraph, TOL_EQ};
use crate::error::{Error, Result};

/// One hemisphere per primal vertex, glued along the seams of the dual graph.
///
/// Around a vertex with incident weights `θ₀, …, θ_{k−1}` the hemisphere is
/// the fan of doubly-right triangles with those apex angles; its boundary
/// passes through the face points in order. Ideal vertices give round
/// hemispheres with a regular pole.
pub fn build_q_gamma(g: &WeightedDualGraph) -> Result<ConeSphericalMetric> {
    build(g, true)
}

/// As [`build_q_gamma`] but without the local angle-sum checks, so that
/// posi-hemispheres (apex below `2π`) can appear.
pub fn build_q_gamma_relaxed(g: &WeightedDualGraph) -> Result<ConeSphericalMetric> {
    build(g, false)
}

fn build(g: &WeightedDualGraph, strict: bool) -> Result<ConeSphericalMetric> {
    let c = g.combinatorics();
    let kinds = g.kinds();
    if strict {
        for (v, kind) in kinds.iter().enumerate() {
            let sum = g.vertex_sum(v);
            match kind {
                VertexKind::Ideal if (sum - TAU).abs() > TOL_EQ => {
                    return Err(Error::LocalSum {
                        vertex: v,
                        kind: "ideal",
                        sum,
                        expected: "2pi",
                    })
                }
                VertexKind::Hyperideal if sum <= TAU => {
                    return Err(Error::LocalSum {
                        vertex: v,
                        kind: "hyperideal",
                        sum,
                        expected: "above 2pi",
                    })
                }
                _ => {}
            }
        }
    }

    let mut b = MetricBuilder::new();
    let face_points: Vec<usize> = (0..c.num_faces())
        .map(|f| b.add_point(PointLabel::Face(f)))
        .collect();
    // Triangle of vertex v whose base is the seam of its i-th outgoing edge.
    let mut tri_of: Vec<Vec<usize>> = Vec::with_capacity(c.num_vertices());
    for (v, kind) in kinds.iter().enumerate() {
        let apex = b.add_point(match kind {
            VertexKind::Ideal => PointLabel::Pole(v),
            VertexKind::Hyperideal => PointLabel::Hyperideal(v),
        });
        let faces = c.vertex_faces(v);
        let edges = c.vertex_edges(v);
        let k = faces.len();
        let mut tris = Vec::with_capacity(k);
        for i in 0..k {
            let tri = SphericalTriangle::doubly_right(g.weight(edges[i]))?;
            tris.push(b.add_triangle(
                tri,
                [apex, face_points[faces[i]], face_points[faces[(i + 1) % k]]],
            ));
        }
        for i in 0..k {
            b.glue(SideRef::new(tris[i], 2), SideRef::new(tris[(i + 1) % k], 0))?;
        }
        tri_of.push(tris);
    }

    let mut seams = Vec::with_capacity(c.num_edges());
    for (e, edge) in c.edges().iter().enumerate() {
        let side_at = |v: usize| -> SideRef {
            let i = c
                .vertex_edges(v)
                .iter()
                .position(|&x| x == e)
                .expect("edge is incident to its endpoints");
            SideRef::new(tri_of[v][i], 1)
        };
        let [u, w] = edge.vertices;
        let (a, s) = (side_at(u), side_at(w));
        b.glue(a, s)?;
        seams.push(Seam {
            edge: e,
            faces: edge.faces,
            sides: vec![a, s],
            length: g.weight(e),
        });
    }
    let mut m = b.build(true)?;
    m.set_marking(Marking {
        combinatorics: c.clone(),
        seams,
    });
    Ok(m)
}
