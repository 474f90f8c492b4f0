//! End-to-end runs through the public API.

use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hyperideal::angles::{check_k_gamma, VertexKind, TOL_EQ};
use hyperideal::conemetric::{
    build_q_gamma, metric_to_lengths, recover_combinatorics, MarkedSummary, PointLabel,
};
use hyperideal::duality::{cone_angle_report, dual};
use hyperideal::io::{PolyhedronFile, TruncationFile};
use hyperideal::polyhedron::validate;
use hyperideal::shapes::{mixed_tetrahedron, random_hyperideal, Platonic};
use hyperideal::trunc::{hyperideal_angles, marked_dual_metric, truncate, untruncate};

#[test]
fn hyperideal_polyhedron_to_recovered_graph() {
    let p = mixed_tetrahedron();
    assert!(validate(&p).passed);

    let g = hyperideal_angles(&p).unwrap();
    let verdict = check_k_gamma(&g, TOL_EQ);
    assert!(verdict.member);
    let kinds = verdict.vertex_kinds.unwrap();
    assert_eq!(kinds.iter().filter(|&&k| k == VertexKind::Ideal).count(), 1);

    let q = build_q_gamma(&g).unwrap();
    let recovered = recover_combinatorics(&q, 16).unwrap();
    assert!(recovered.matches(p.combinatorics()));
    // The ideal vertex shows up as a round hemisphere, the others as apices above 2π.
    for point in q.points() {
        match point.label {
            PointLabel::Pole(_) => assert!((point.angle - TAU).abs() < 1e-9),
            PointLabel::Hyperideal(_) => assert!(point.angle > TAU),
            _ => {}
        }
    }

    let t = truncate(&p).unwrap();
    let m = marked_dual_metric(&t, p.combinatorics()).unwrap();
    let d = MarkedSummary::of(&m).distance(&MarkedSummary::of(&q)).unwrap();
    assert!(d < 1e-7);
}

#[test]
fn truncation_survives_file_round_trip() {
    let p = mixed_tetrahedron();
    let t = truncate(&p).unwrap();
    let text = serde_json::to_string(&TruncationFile::from(&t)).unwrap();
    let file: TruncationFile = serde_json::from_str(&text).unwrap();
    let back = untruncate(&file.to_polyhedron().unwrap(), &file.face_ids()).unwrap();
    let again = PolyhedronFile::from(&back).to_polyhedron().unwrap();
    assert_eq!(again.num_faces(), p.num_faces());
    for (a, b) in again.planes().iter().zip(p.planes()) {
        assert!((a.normal() - b.normal()).max_abs() < 1e-9);
    }
}

#[test]
fn truncation_faces_have_cone_angle_two_pi_plus_area() {
    let p = mixed_tetrahedron();
    let t = truncate(&p).unwrap();
    let report = cone_angle_report(&t.polyhedron).unwrap();
    for &(_, face) in &t.truncation_faces {
        let entry = report.iter().find(|e| e.face == face).unwrap();
        assert!(entry.defect.abs() < 1e-8);
        assert!(entry.cone_angle > TAU);
    }
    // Dual edges at a truncation face are exterior angles of right dihedral angles.
    let d = dual(&t.polyhedron).unwrap();
    let c = t.polyhedron.combinatorics();
    for (e, edge) in c.edges().iter().enumerate() {
        if t.truncation_faces.iter().any(|&(_, f)| edge.faces.contains(&f)) {
            assert!((d.edge_lengths[e] - PI / 2.0).abs() < 1e-8);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn angles_of_hyperideal_polyhedra_read_back(seed in any::<u64>(), kind in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_hyperideal(&mut rng, Platonic::ALL[kind]);
        let g = hyperideal_angles(&p).unwrap();
        prop_assert!(check_k_gamma(&g, TOL_EQ).member);
        let q = build_q_gamma(&g).unwrap();
        prop_assert!(q.gauss_bonnet_defect().abs() < 1e-7);
        let back = metric_to_lengths(&q).unwrap();
        prop_assert_eq!(back, g.weights().to_vec());
    }
}
