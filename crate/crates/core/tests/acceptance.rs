//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p hyperideal --test acceptance`.

use std::f64::consts::{FRAC_PI_3, PI, TAU};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hyperideal::angles::{
    check_k_gamma, consistency_with_metric, VertexKind, WeightedDualGraph, TOL_EQ,
};
use hyperideal::conemetric::{
    build_q_gamma, build_q_gamma_relaxed, closed_geodesic_falsifier, geodesic_trace,
    metric_to_lengths, nega_hemisphere, recover_combinatorics, Budget, ConeSphericalMetric,
    MarkedSummary, PointLabel, SideRef, Termination, TraceStart,
};
use hyperideal::duality::{cone_angle_report, dual, dual_metric};
use hyperideal::minkowski::inner;
use hyperideal::pogorelov::{
    commutation_error, infinitesimal_consistency_error, norm_difference_error, pushforward_check,
    round_trip_error, Regime,
};
use hyperideal::polyhedron::{platonic, Combinatorics, ProjectivePolyhedron};
use hyperideal::shapes::{
    mixed_tetrahedron, random_compact, random_hyperideal, tetrahedron_planes, Platonic,
};
use hyperideal::trunc::{hyperideal_angles, marked_dual_metric, truncate, untruncate};
use hyperideal::MVector;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

/// Metrics built along the way; criterion 6 audits all of them.
#[derive(Default)]
struct Built {
    metrics: Vec<(String, ConeSphericalMetric)>,
}

impl Built {
    fn keep(&mut self, what: impl Into<String>, m: &ConeSphericalMetric) {
        self.metrics.push((what.into(), m.clone()));
    }
}

fn hyperideal_sample(n: usize, seed: u64) -> Vec<ProjectivePolyhedron> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![mixed_tetrahedron()];
    for i in 0..n {
        out.push(random_hyperideal(&mut rng, Platonic::ALL[i % 4]));
    }
    out
}

fn c1_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let worst = Regime::ALL
        .iter()
        .map(|&r| round_trip_error(&mut rng, r, 1000))
        .fold(0.0, f64::max);
    outcome(
        worst < 1e-12,
        format!("max error {worst:.2e} over 4 x 1000 points"),
    )
}

fn c2_norm_difference() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let worst = Regime::ALL
        .iter()
        .map(|&r| norm_difference_error(&mut rng, r, 100))
        .fold(0.0, f64::max);
    outcome(
        worst < 1e-6,
        format!("max residual {worst:.2e} over 4 x 100 configurations"),
    )
}

fn c3_commutation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut commute, mut infinitesimal, mut killing) = (0.0f64, 0.0f64, 0.0f64);
    let mut equivalent = true;
    for r in Regime::ALL {
        commute = commute.max(commutation_error(&mut rng, r, 100));
        infinitesimal = infinitesimal.max(infinitesimal_consistency_error(&mut rng, r, 100));
        let (k, eq) = pushforward_check(&mut rng, r, 20);
        killing = killing.max(k);
        equivalent &= eq;
    }
    outcome(
        commute < 1e-8 && infinitesimal < 1e-5 && killing < 1e-5 && equivalent,
        format!(
            "commutation {commute:.2e}, pushforward {infinitesimal:.2e}, killing {killing:.2e}, verdicts preserved {equivalent}"
        ),
    )
}

fn c4_ideal_tetrahedron(built: &mut Built) -> Outcome {
    // Lightlike vertices at the corners of a regular tetrahedron inscribed in the sphere.
    let s = 1.0 / 3f64.sqrt();
    let vertices = [[1., 1., 1.], [1., -1., -1.], [-1., 1., -1.], [-1., -1., 1.]]
        .map(|u| MVector::new(1.0, s * u[0], s * u[1], s * u[2]));
    let planes = tetrahedron_planes(&vertices).expect("four ideal points span a tetrahedron");
    let p = ProjectivePolyhedron::from_planes(&planes).expect("ideal tetrahedron");
    let dihedral = (0..6)
        .map(|e| (p.dihedral_angle(e).unwrap() - FRAC_PI_3).abs())
        .fold(0.0, f64::max);
    let d = dual(&p).unwrap();
    let lengths = d
        .edge_lengths
        .iter()
        .map(|l| (l - TAU / 3.0).abs())
        .fold(0.0, f64::max);
    let g = WeightedDualGraph::new(
        p.combinatorics().clone(),
        d.edge_lengths.clone(),
        vec![None; 4],
    )
    .unwrap();
    let r = check_k_gamma(&g, TOL_EQ);
    built.keep("dual of ideal tetrahedron", &dual_metric(&p).unwrap());
    outcome(
        dihedral < 1e-9
            && lengths < 1e-9
            && r.member
            && r.c1.ideal_faces == vec![0, 1, 2, 3]
            && r.vertex_kinds == Some(vec![VertexKind::Ideal; 4]),
        format!(
            "dihedral error {dihedral:.2e}, dual length error {lengths:.2e}, member {}, ideal faces {:?}",
            r.member, r.c1.ideal_faces
        ),
    )
}

fn c5_cone_angles(built: &mut Built) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for i in 0..24 {
        let p = random_compact(&mut rng);
        for entry in cone_angle_report(&p).unwrap() {
            worst = worst.max(entry.defect.abs());
        }
        built.keep(
            format!("dual of compact sample {i}"),
            &dual_metric(&p).unwrap(),
        );
    }
    outcome(
        worst < 1e-8,
        format!("max |cone angle - 2pi - area| {worst:.2e} over 24 polyhedra"),
    )
}

fn c6_gauss_bonnet(built: &Built) -> Outcome {
    let (mut worst, mut at) = (0.0f64, String::new());
    for (what, m) in &built.metrics {
        // Open complexes have no closed-surface identity to check.
        let d = if m.is_closed() {
            m.gauss_bonnet_defect().abs()
        } else {
            f64::INFINITY
        };
        if d > worst {
            worst = d;
            at = what.clone();
        }
    }
    outcome(
        worst < 1e-7,
        format!(
            "max defect {worst:.2e} over {} metrics (worst: {at})",
            built.metrics.len()
        ),
    )
}

fn unit(v: MVector) -> MVector {
    v / inner(&v, &v).sqrt()
}

fn c7_truncation_round_trip() -> Outcome {
    let (mut planes, mut perpendicular, mut separation) = (0.0f64, 0.0f64, f64::INFINITY);
    let sample = hyperideal_sample(24, 7);
    for p in &sample {
        let t = truncate(p).unwrap();
        let faces: Vec<usize> = t.truncation_faces.iter().map(|&(_, f)| f).collect();
        let back = untruncate(&t.polyhedron, &faces).unwrap();
        if back.num_faces() != p.num_faces() {
            return outcome(false, "face count changed".into());
        }
        for (a, b) in back.planes().iter().zip(p.planes()) {
            planes = planes.max((a.normal() - b.normal()).max_abs());
        }
        let c = t.polyhedron.combinatorics();
        for e in c.edges() {
            let [f, g] = e.faces;
            if faces.contains(&f) || faces.contains(&g) {
                let cos = inner(&unit(t.polyhedron.normal(f)), &unit(t.polyhedron.normal(g)));
                perpendicular = perpendicular.max(cos.abs());
            }
        }
        // Polar planes of spacelike unit vectors are disjoint when |<x, y>| > 1.
        let hyper: Vec<MVector> = p
            .hyperideal_vertices()
            .iter()
            .map(|&v| unit(p.vertex(v)))
            .collect();
        for i in 0..hyper.len() {
            for j in (i + 1)..hyper.len() {
                separation = separation.min(inner(&hyper[i], &hyper[j]).abs() - 1.0);
            }
        }
    }
    outcome(
        planes < 1e-9 && perpendicular < 1e-8 && separation > 0.0,
        format!(
            "{} polyhedra: plane error {planes:.2e}, max |cos| at truncation faces {perpendicular:.2e}, min polar separation {separation:.3}",
            sample.len()
        ),
    )
}

fn c8_dual_of_truncation(built: &mut Built) -> Outcome {
    let mut worst: f64 = 0.0;
    let sample = hyperideal_sample(12, 8);
    for (i, p) in sample.iter().enumerate() {
        let t = truncate(p).unwrap();
        let m = marked_dual_metric(&t, p.combinatorics()).unwrap();
        let q = build_q_gamma(&hyperideal_angles(p).unwrap()).unwrap();
        let Some(d) = MarkedSummary::of(&m).distance(&MarkedSummary::of(&q)) else {
            return outcome(false, format!("polyhedron {i}: labelled structures differ"));
        };
        let lengths = metric_to_lengths(&m).unwrap();
        let expected = metric_to_lengths(&q).unwrap();
        let seam = lengths
            .iter()
            .zip(&expected)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let recovered = recover_combinatorics(&m, 16).unwrap();
        if !recovered.matches(p.combinatorics()) {
            return outcome(false, format!("polyhedron {i}: seam graph differs"));
        }
        worst = worst.max(d).max(seam);
        built.keep(format!("dual of truncation {i}"), &m);
        built.keep(format!("Q_Gamma of polyhedron {i}"), &q);
    }
    outcome(
        worst < 1e-7,
        format!("{} polyhedra: max difference {worst:.2e}", sample.len()),
    )
}

fn c9_lengths_identity(built: &mut Built) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let families = [
        platonic::tetrahedron(),
        platonic::cube(),
        platonic::octahedron(),
        platonic::dodecahedron(),
    ];
    let (mut worst, mut traced) = (0.0f64, 0.0f64);
    for i in 0..200 {
        let c: Combinatorics = families[i % 4].clone();
        let w: Vec<f64> = (0..c.num_edges())
            .map(|_| rng.gen_range(0.67..0.98) * PI)
            .collect();
        let n = c.num_vertices();
        let g = WeightedDualGraph::new(c, w.clone(), vec![None; n]).unwrap();
        if !check_k_gamma(&g, TOL_EQ).member {
            return outcome(false, format!("instance {i} is not a member"));
        }
        let m = build_q_gamma(&g).unwrap();
        let back = metric_to_lengths(&m).unwrap();
        for (a, b) in back.iter().zip(&w) {
            worst = worst.max((a - b).abs());
        }
        // Independent reading: trace the seams out of the face points.
        let recovered = recover_combinatorics(&m, 16).unwrap();
        if !recovered.matches(g.combinatorics()) {
            return outcome(false, format!("instance {i}: traced graph differs"));
        }
        for e in &recovered.edges {
            let [a, b] = e.labels.map(|l| match l {
                PointLabel::Face(f) => f,
                _ => unreachable!("matches() checked the labels"),
            });
            let edge = g.combinatorics().edge_between_faces(a, b).unwrap();
            traced = traced.max((e.length - w[edge]).abs());
        }
        if i % 20 == 0 {
            built.keep(format!("Q_Gamma instance {i}"), &m);
        }
    }
    outcome(
        worst <= 1e-10 && traced <= 1e-10,
        format!("200 instances: max length error {worst:.2e}, traced {traced:.2e}"),
    )
}

fn lopsided_pyramid() -> WeightedDualGraph {
    let c = Combinatorics::from_face_cycles(vec![
        vec![0, 1, 2],
        vec![0, 2, 3],
        vec![0, 3, 4],
        vec![0, 4, 1],
        vec![1, 4, 3, 2],
    ])
    .unwrap();
    let mut w = vec![0.95 * PI; c.num_edges()];
    for (u, v, theta) in [(1, 2, 0.4), (3, 4, 0.4), (2, 3, 0.9), (4, 1, 0.9)] {
        w[c.edge_between(u, v).unwrap()] = theta * PI;
    }
    WeightedDualGraph::new(c, w, vec![None; 5]).unwrap()
}

fn c10_checker_and_falsifier(built: &mut Built) -> Outcome {
    let tetra = |theta: f64| WeightedDualGraph::uniform(platonic::tetrahedron(), theta).unwrap();
    let light_face = {
        let c = platonic::tetrahedron();
        let mut w = vec![0.9 * PI; c.num_edges()];
        for &e in c.vertex_edges(1) {
            w[e] = 1.9 * PI / 3.0;
        }
        WeightedDualGraph::new(c, w, vec![None; 4]).unwrap()
    };
    let instances = [
        ("uniform 0.55pi", tetra(0.55 * PI)),
        ("uniform 2pi/3", tetra(TAU / 3.0)),
        ("uniform 0.8pi", tetra(0.8 * PI)),
        ("uniform 0.95pi", tetra(0.95 * PI)),
        ("face at 1.9pi", light_face),
        ("short path", lopsided_pyramid()),
        ("undeclared near-equality", tetra(TAU / 3.0 + 2e-9)),
    ];
    let budget = Budget::default();
    let mut lines = Vec::new();
    let mut passed = true;
    for (name, g) in &instances {
        let r = consistency_with_metric(g, TOL_EQ, &budget).unwrap();
        let metric = match build_q_gamma(g) {
            Ok(m) => m,
            Err(_) => build_q_gamma_relaxed(g).unwrap(),
        };
        let search = closed_geodesic_falsifier(&metric, TAU + budget.margin, &budget).unwrap();
        let retrace = search.witness.as_ref().map_or(0.0, |w| w.retrace_error);
        let closed = search
            .witness
            .as_ref()
            .is_none_or(|w| w.path.termination == Termination::Closed);
        passed &= r.agree && !r.hard_failure && retrace < 1e-9 && closed;
        lines.push(format!(
            "{name}: member {} witness {}",
            r.member,
            r.witness_length
                .map_or("none".into(), |l| format!("{:.4}pi", l / PI))
        ));
        built.keep(format!("metric of {name}"), &metric);
    }
    outcome(passed, lines.join("; "))
}

fn c11_hemisphere_chords() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut worst, mut crossings, mut chords, mut apex_hits) = (0.0f64, 0usize, 0usize, 0usize);
    while chords < 100 {
        let alpha = rng.gen_range(2.02..3.98) * PI;
        let pieces = (alpha / PI).floor() as usize + 1 + rng.gen_range(0..3);
        let m = nega_hemisphere(alpha, &vec![alpha / pieces as f64; pieces]).unwrap();
        let start = TraceStart::OnSide {
            side: SideRef::new(rng.gen_range(0..pieces), 1),
            position: rng.gen_range(0.02..0.98),
            angle: rng.gen_range(0.02..PI - 0.02),
        };
        let path = geodesic_trace(&m, start, 4.0 * PI).unwrap();
        match path.termination {
            Termination::Boundary { .. } => {
                worst = worst.max((path.length - PI).abs());
                crossings += path.self_crossings();
                chords += 1;
            }
            // Chords into the apex have no continuation; draw another.
            Termination::ConePoint { point: 0, .. } => apex_hits += 1,
            other => return outcome(false, format!("chord ended with {other:?}")),
        }
    }
    outcome(
        worst < 1e-8 && crossings == 0,
        format!("100 chords: max |length - pi| {worst:.2e}, self-crossings {crossings}, apex hits redrawn {apex_hits}"),
    )
}

fn main() {
    let mut built = Built::default();
    type Check<'a> = Box<dyn FnMut(&mut Built) -> Outcome + 'a>;
    let criteria: Vec<(&str, Option<Duration>, Check)> = vec![
        (
            "projective round trip",
            Some(Duration::from_secs(1)),
            Box::new(|_| c1_round_trip()),
        ),
        (
            "norm-difference identity",
            Some(Duration::from_secs(5)),
            Box::new(|_| c2_norm_difference()),
        ),
        (
            "isometry commutation and pushforward",
            Some(Duration::from_secs(5)),
            Box::new(|_| c3_commutation()),
        ),
        (
            "ideal regular tetrahedron",
            Some(Duration::from_secs(1)),
            Box::new(c4_ideal_tetrahedron),
        ),
        (
            "cone angle = 2pi + face area",
            Some(Duration::from_secs(10)),
            Box::new(c5_cone_angles),
        ),
        (
            "truncation round trip",
            None,
            Box::new(|_| c7_truncation_round_trip()),
        ),
        (
            "dual of truncation = Q_Gamma",
            None,
            Box::new(c8_dual_of_truncation),
        ),
        (
            "lengths read back the weights",
            None,
            Box::new(c9_lengths_identity),
        ),
        (
            "checker and falsifier agree",
            Some(Duration::from_secs(60)),
            Box::new(c10_checker_and_falsifier),
        ),
        (
            "hemisphere chords have length pi",
            None,
            Box::new(|_| c11_hemisphere_chords()),
        ),
        (
            "Gauss-Bonnet on every metric",
            None,
            Box::new(|b: &mut Built| c6_gauss_bonnet(b)),
        ),
    ];
    let numbers = [1, 2, 3, 4, 5, 7, 8, 9, 10, 11, 6];
    let mut results = Vec::new();
    for ((name, limit, mut check), number) in criteria.into_iter().zip(numbers) {
        let start = Instant::now();
        let o = check(&mut built);
        let elapsed = start.elapsed();
        let in_time = limit.is_none_or(|l| elapsed < l);
        results.push((number, name, o.passed && in_time, o.detail, elapsed, limit));
    }
    results.sort_by_key(|r| r.0);
    let mut failed = 0;
    for (number, name, passed, detail, elapsed, limit) in &results {
        let limit = limit.map_or(String::new(), |l| format!(" (limit {}s)", l.as_secs()));
        println!(
            "[{}] {number:>2}. {name}: {detail} [{:.3}s{limit}]",
            if *passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
        failed += usize::from(!passed);
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
