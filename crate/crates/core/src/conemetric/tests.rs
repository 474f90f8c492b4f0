use std::f64::consts::{FRAC_PI_2, PI, TAU};

use proptest::prelude::*;

use super::*;
use crate::angles::{VertexKind, WeightedDualGraph};
use crate::error::Error;
use crate::polyhedron::platonic;
use crate::polyhedron::Combinatorics;

fn tetra(theta: f64) -> WeightedDualGraph {
    WeightedDualGraph::uniform(platonic::tetrahedron(), theta).unwrap()
}

fn small_budget() -> Budget {
    Budget {
        shots: 300,
        ..Budget::default()
    }
}

#[test]
fn round_hemisphere_has_boundary_two_pi() {
    let m = nega_hemisphere(TAU, &[FRAC_PI_2; 4]).unwrap();
    assert!((m.boundary_length() - TAU).abs() < 1e-12);
    assert!(!m.is_singular(0) || m.point(0).boundary);
    assert!((m.point(0).angle - TAU).abs() < 1e-12);
}

#[test]
fn nega_hemisphere_boundary_equals_apex_angle() {
    for (alpha, parts) in [
        (3.0 * PI, vec![0.75 * PI; 4]),
        (2.5 * PI, vec![2.5 * PI / 3.0; 3]),
    ] {
        let m = nega_hemisphere(alpha, &parts).unwrap();
        assert!((m.boundary_length() - alpha).abs() < 1e-12);
        assert!((m.point(0).angle - alpha).abs() < 1e-12);
        // Every rim point is a right angle on each side.
        for p in 1..m.num_points() {
            assert!((m.point(p).angle - PI).abs() < 1e-12);
            assert!(m.point(p).boundary);
        }
    }
}

#[test]
fn wide_piece_must_be_subdivided() {
    assert!(matches!(
        nega_hemisphere(3.0 * PI, &[1.5 * PI, 1.5 * PI]),
        Err(Error::SubdividePartition(_))
    ));
}

#[test]
fn chord_of_round_hemisphere_has_length_pi() {
    let m = nega_hemisphere(TAU, &[FRAC_PI_2; 4]).unwrap();
    let start = TraceStart::OnSide {
        side: SideRef::new(1, 1),
        position: 0.3,
        angle: 1.1,
    };
    let path = geodesic_trace(&m, start, 10.0).unwrap();
    assert!(matches!(path.termination, Termination::Boundary { .. }));
    assert!((path.length - PI).abs() < 1e-10, "{}", path.length);
}

#[test]
fn chord_of_nega_hemisphere_is_embedded_with_length_pi() {
    let m = nega_hemisphere(3.0 * PI, &[0.75 * PI; 4]).unwrap();
    let start = TraceStart::OnSide {
        side: SideRef::new(0, 1),
        position: 0.4,
        angle: 0.7,
    };
    let path = geodesic_trace(&m, start, 10.0).unwrap();
    assert!(matches!(path.termination, Termination::Boundary { .. }));
    assert!((path.length - PI).abs() < 1e-8);
    assert_eq!(path.self_crossings(), 0);
}

#[test]
fn q_gamma_of_ideal_tetrahedron() {
    let m = build_q_gamma(&tetra(TAU / 3.0)).unwrap();
    assert!((m.total_area() - 4.0 * TAU).abs() < 1e-9);
    assert!(m.gauss_bonnet_defect().abs() < 1e-9);
    assert_eq!(m.euler_characteristic(), 2);
    for p in m.points() {
        match p.label {
            PointLabel::Face(_) => assert!((p.angle - 3.0 * PI).abs() < 1e-9),
            PointLabel::Pole(_) => assert!((p.angle - TAU).abs() < 1e-9),
            other => panic!("unexpected label {other:?}"),
        }
    }
    assert!(m.label_violations().is_empty());
}

#[test]
fn q_gamma_of_hyperideal_tetrahedron_has_nega_apices() {
    let m = build_q_gamma(&tetra(0.8 * PI)).unwrap();
    let apices: Vec<f64> = m
        .points()
        .iter()
        .filter(|p| matches!(p.label, PointLabel::Hyperideal(_)))
        .map(|p| p.angle)
        .collect();
    assert_eq!(apices.len(), 4);
    assert!(apices.iter().all(|a| (a - 2.4 * PI).abs() < 1e-9));
    assert!(m.gauss_bonnet_defect().abs() < 1e-9);
}

#[test]
fn mixed_weights_give_one_round_hemisphere() {
    // Vertex 0 of the tetrahedron sums to 2π, the others stay above.
    let c = platonic::tetrahedron();
    let mut w = vec![0.9 * PI; c.num_edges()];
    for &e in c.vertex_edges(0) {
        w[e] = TAU / 3.0;
    }
    let g = WeightedDualGraph::new(c, w, vec![None; 4]).unwrap();
    let m = build_q_gamma(&g).unwrap();
    let poles = m
        .points()
        .iter()
        .filter(|p| matches!(p.label, PointLabel::Pole(_)))
        .count();
    assert_eq!(poles, 1);
    assert!(m.find_point(PointLabel::Pole(0)).is_some());
    assert!(m.gauss_bonnet_defect().abs() < 1e-9);
}

#[test]
fn local_sums_are_enforced() {
    let err = build_q_gamma(&tetra(0.6 * PI)).unwrap_err();
    assert!(matches!(err, Error::LocalSum { vertex: 0, .. }));
    let declared = tetra(0.8 * PI).with_declared(2, VertexKind::Ideal);
    assert!(matches!(
        build_q_gamma(&declared),
        Err(Error::LocalSum { vertex: 2, .. })
    ));
    assert!(build_q_gamma_relaxed(&tetra(0.6 * PI)).is_ok());
}

fn graph(c: Combinatorics, weights: Vec<f64>) -> WeightedDualGraph {
    let n = c.num_vertices();
    WeightedDualGraph::new(c, weights, vec![None; n]).unwrap()
}

#[test]
fn lengths_read_back_exactly() {
    for c in [
        platonic::tetrahedron(),
        platonic::cube(),
        platonic::dodecahedron(),
    ] {
        let w: Vec<f64> = (0..c.num_edges())
            .map(|i| 0.8 * PI + 0.01 * (i % 5) as f64)
            .collect();
        let m = build_q_gamma(&graph(c, w.clone())).unwrap();
        let back = metric_to_lengths(&m).unwrap();
        assert_eq!(back, w);
    }
}

#[test]
fn relabelling_permutes_lengths() {
    let c = platonic::cube();
    let w: Vec<f64> = (0..c.num_edges())
        .map(|i| 0.7 * PI + 0.02 * i as f64)
        .collect();
    let g = graph(c, w.clone());
    let perm = [3, 0, 7, 1, 5, 2, 6, 4];
    let (h, edge_map) = g.relabeled(&perm).unwrap();
    let back = metric_to_lengths(&build_q_gamma(&h).unwrap()).unwrap();
    for e in 0..w.len() {
        assert_eq!(back[edge_map[e]], w[e]);
    }
}

#[test]
fn unmarked_metric_has_no_lengths() {
    let m = nega_hemisphere(3.0 * PI, &[0.75 * PI; 4]).unwrap();
    assert!(matches!(metric_to_lengths(&m), Err(Error::Unmarked)));
}

#[test]
fn hemisphere_boundary_closes_at_two_pi() {
    let m = build_q_gamma(&tetra(TAU / 3.0)).unwrap();
    let f = m.find_point(PointLabel::Face(0)).unwrap();
    let seam = m
        .marking()
        .unwrap()
        .seams
        .iter()
        .find(|s| s.faces.contains(&0))
        .unwrap();
    // Direction of the seam at f: the start of the sector of the side's corner at f.
    let side = seam.sides[0];
    let corners = m.corners(side.triangle);
    let angle = if corners[side.side] == f {
        m.offset(side.triangle, side.side)
    } else {
        let k = (side.side + 1) % 3;
        m.offset(side.triangle, k) + m.triangle(side.triangle).angle(k)
    };
    let path = trace_with(
        &m,
        TraceStart::AtPoint { point: f, angle },
        3.0 * PI,
        &mut |p, arrival| {
            let _ = p;
            Some(arrival + PI)
        },
    )
    .unwrap();
    assert_eq!(path.termination, Termination::Closed);
    assert!((path.length - TAU).abs() < 1e-9, "{}", path.length);
    assert_eq!(path.passages.len(), 3);
}

#[test]
fn falsifier_reports_hemisphere_boundaries_of_ideal_tetrahedron() {
    let m = build_q_gamma(&tetra(TAU / 3.0)).unwrap();
    let report = closed_geodesic_falsifier(&m, TAU + 1e-6, &small_budget()).unwrap();
    assert!(
        report.witness.is_none(),
        "{:?}",
        report.witness.map(|w| w.length)
    );
    assert!(report.budget_exhausted);
    assert_eq!(report.exceptions.len(), 4);
    for w in &report.exceptions {
        assert!((w.length - TAU).abs() < 1e-9);
        assert!(w.hemisphere_boundary);
    }
}

#[test]
fn falsifier_finds_nothing_short_on_hyperideal_tetrahedron() {
    let m = build_q_gamma(&tetra(0.8 * PI)).unwrap();
    let report = closed_geodesic_falsifier(&m, TAU + 1e-6, &small_budget()).unwrap();
    assert!(report.witness.is_none());
    assert!(report.exceptions.is_empty());
    assert!(report.connections > 0);
}

#[test]
fn falsifier_finds_short_face_cycle() {
    let c = platonic::tetrahedron();
    let mut w = vec![0.9 * PI; c.num_edges()];
    let edges = c.vertex_edges(1).to_vec();
    for &e in &edges {
        w[e] = 1.9 * PI / 3.0;
    }
    let g = graph(c, w);
    assert!(build_q_gamma(&g).is_err());
    let m = build_q_gamma_relaxed(&g).unwrap();
    let report = closed_geodesic_falsifier(&m, TAU + 1e-6, &small_budget()).unwrap();
    let witness = report.witness.expect("face cycle");
    assert!((witness.length - 1.9 * PI).abs() < 1e-9);
    assert!(witness.retrace_error < 1e-9);
    assert_eq!(witness.path.termination, Termination::Closed);
}

#[test]
fn recovers_tetrahedral_graph() {
    for theta in [TAU / 3.0, 0.8 * PI] {
        let m = build_q_gamma(&tetra(theta)).unwrap();
        let g = recover_combinatorics(&m, 12).unwrap();
        assert!(g.matches(&platonic::tetrahedron()));
        assert!(g.edges.iter().all(|e| (e.length - theta).abs() < 1e-9));
    }
}

#[test]
fn recovers_cube_graph_with_mixed_lengths() {
    let c = platonic::cube();
    let w: Vec<f64> = (0..c.num_edges())
        .map(|i| 0.75 * PI + 0.015 * i as f64)
        .collect();
    let m = build_q_gamma(&graph(c.clone(), w.clone())).unwrap();
    let g = recover_combinatorics(&m, 12).unwrap();
    assert!(g.matches(&c));
    for e in &g.edges {
        let [PointLabel::Face(a), PointLabel::Face(b)] = e.labels else {
            panic!()
        };
        let id = c.edge_between_faces(a, b).unwrap();
        assert!((e.length - w[id]).abs() < 1e-9);
    }
}

/// A doubled triangle: a sphere with three cone points of angle below `3π`.
fn pillow() -> ConeSphericalMetric {
    let tri = SphericalTriangle::from_sides([1.0, 1.2, 1.4]).unwrap();
    let mut b = MetricBuilder::new();
    let p: Vec<usize> = (0..3).map(|i| b.add_point(PointLabel::Face(i))).collect();
    let front = b.add_triangle(tri, [p[0], p[1], p[2]]);
    let mirrored = SphericalTriangle::from_sides([tri.side(0), tri.side(2), tri.side(1)]).unwrap();
    let back = b.add_triangle(mirrored, [p[1], p[0], p[2]]);
    b.glue(SideRef::new(front, 0), SideRef::new(back, 0))
        .unwrap();
    b.glue(SideRef::new(front, 1), SideRef::new(back, 2))
        .unwrap();
    b.glue(SideRef::new(front, 2), SideRef::new(back, 1))
        .unwrap();
    b.build(true).unwrap()
}

#[test]
fn pillow_is_not_q_gamma() {
    let m = pillow();
    assert!(m.gauss_bonnet_defect().abs() < 1e-9);
    assert!(matches!(
        recover_combinatorics(&m, 12),
        Err(Error::NotQGamma(_))
    ));
}

#[test]
fn metric_survives_json() {
    let m = build_q_gamma(&tetra(0.8 * PI)).unwrap();
    let text = serde_json::to_string(&m).unwrap();
    let back: ConeSphericalMetric = serde_json::from_str(&text).unwrap();
    assert_eq!(
        MarkedSummary::of(&m).distance(&MarkedSummary::of(&back)),
        Some(0.0)
    );
    assert_eq!(back.marking(), m.marking());
}

#[test]
fn json_rejects_mismatched_gluing() {
    let m = build_q_gamma(&tetra(0.8 * PI)).unwrap();
    let mut value = serde_json::to_value(&m).unwrap();
    value["triangles"][0]["sides"][1] = serde_json::json!(1.0);
    assert!(serde_json::from_value::<ConeSphericalMetric>(value).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gauss_bonnet_on_q_gamma(ws in proptest::collection::vec(0.7f64..0.98, 12)) {
        let c = platonic::cube();
        let w: Vec<f64> = ws.iter().map(|x| x * PI).collect();
        let m = build_q_gamma(&graph(c, w)).unwrap();
        prop_assert!(m.gauss_bonnet_defect().abs() < 1e-7);
    }

    #[test]
    fn hemisphere_chords_have_length_pi(
        alpha in 2.05f64..3.95,
        pieces in 3usize..7,
        which in 0usize..6,
        position in 0.05f64..0.95,
        angle in 0.05f64..3.09,
    ) {
        let alpha = alpha * PI;
        let parts = vec![alpha / pieces as f64; pieces];
        prop_assume!(parts[0] < PI);
        let m = nega_hemisphere(alpha, &parts).unwrap();
        let start = TraceStart::OnSide { side: SideRef::new(which % pieces, 1), position, angle };
        let path = geodesic_trace(&m, start, 4.0 * PI).unwrap();
        if matches!(path.termination, Termination::Boundary { .. }) {
            prop_assert!((path.length - PI).abs() < 1e-8);
            prop_assert_eq!(path.self_crossings(), 0);
        } else {
            let hit_apex = matches!(path.termination, Termination::ConePoint { point: 0, .. });
            prop_assert!(hit_apex);
        }
    }
}
