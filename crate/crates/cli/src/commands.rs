use std::f64::consts::TAU;

use hyperideal::angles::{check_k_gamma, WeightedDualGraph};
use hyperideal::conemetric::{
    build_q_gamma, build_q_gamma_relaxed, closed_geodesic_falsifier, Budget, ConeSphericalMetric,
};
use hyperideal::duality::{cone_angle_report, dual, dual_metric};
use hyperideal::io::{to_obj, PolyhedronFile, TruncationFile};
use hyperideal::pogorelov::selftest;
use hyperideal::polyhedron::{validate, ProjectivePolyhedron};
use hyperideal::trunc::{hyperideal_angles, truncate, untruncate};
use hyperideal::Error;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use crate::report::{to_value, Report, Verdict};

pub const CONE_ANGLE_TOL: f64 = 1e-8;
pub const GAUSS_BONNET_TOL: f64 = 1e-7;
pub const ROUND_TRIP_TOL: f64 = 1e-9;

pub struct Settings {
    pub seed: u64,
    pub budget: Budget,
    pub tol_eq: f64,
    pub samples: usize,
}

pub enum Output {
    Report(Report),
    Text(String),
}

/// Malformed input or a construction that cannot proceed: exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError(e.to_string())
    }
}

type Outcome = Result<Output, InputError>;

/// Errors that answer the question asked rather than reject the input.
fn is_verdict(e: &Error) -> bool {
    matches!(
        e,
        Error::NotTruncation(_)
            | Error::NotQGamma(_)
            | Error::LocalSum { .. }
            | Error::TruncateFirst(_)
    )
}

fn parse<T: DeserializeOwned>(input: &[u8]) -> Result<T, InputError> {
    serde_json::from_slice(input).map_err(|e| InputError(format!("malformed input: {e}")))
}

fn polyhedron(input: &[u8]) -> Result<ProjectivePolyhedron, InputError> {
    Ok(parse::<PolyhedronFile>(input)?.to_polyhedron()?)
}

fn graph(input: &[u8]) -> Result<WeightedDualGraph, InputError> {
    parse(input)
}

pub fn run(command: &str, input: &[u8], s: &Settings) -> Outcome {
    let report = |verdicts, payload| {
        Ok(Output::Report(Report::new(
            command, input, s.seed, verdicts, payload,
        )))
    };
    let failed = |e: Error| -> Outcome {
        if is_verdict(&e) {
            report(
                vec![Verdict::new("error", false, vec![json!(e.to_string())])],
                Value::Null,
            )
        } else {
            Err(e.into())
        }
    };
    match command {
        "validate" => {
            let file: PolyhedronFile = parse(input)?;
            match file.to_polyhedron() {
                Ok(p) => {
                    let r = validate(&p);
                    let items = r.failures.iter().map(to_value).collect();
                    report(
                        vec![Verdict::new("invariants", r.passed, items)],
                        json!({
                            "classes": r.classes,
                            "faces": p.num_faces(),
                            "edges": p.num_edges(),
                            "vertices": p.num_vertices(),
                        }),
                    )
                }
                Err(Error::InvalidInput(m)) => Err(InputError(m)),
                Err(e) => report(
                    vec![Verdict::new(
                        "construction",
                        false,
                        vec![json!(e.to_string())],
                    )],
                    Value::Null,
                ),
            }
        }
        "dual" => {
            let p = polyhedron(input)?;
            let d = match dual(&p) {
                Ok(d) => d,
                Err(e) => return failed(e),
            };
            let metric = dual_metric(&p)?;
            let cones = cone_angle_report(&p)?;
            let bad: Vec<Value> = cones
                .iter()
                .filter(|c| c.defect.abs() >= CONE_ANGLE_TOL)
                .map(to_value)
                .collect();
            let defect = metric.gauss_bonnet_defect();
            report(
                vec![
                    Verdict::new("cone_angle_identity", bad.is_empty(), bad),
                    Verdict::new(
                        "gauss_bonnet",
                        defect.abs() < GAUSS_BONNET_TOL,
                        vec![json!(defect)],
                    ),
                ],
                json!({
                    "dual_vertices": d.combinatorics.num_vertices(),
                    "dual_faces": d.combinatorics.num_faces(),
                    "edge_lengths": d.edge_lengths,
                    "dual": {
                        "vertices": d.vertices,
                        "faces": d.combinatorics.face_cycles(),
                        "edge_map": d.edge_map,
                        "polygons": d.polygons,
                    },
                    "cone_angles": cones,
                    "total_area": metric.total_area(),
                    "gluings": metric.gluings(),
                }),
            )
        }
        "truncate" => {
            let p = polyhedron(input)?;
            let t = match truncate(&p) {
                Ok(t) => t,
                Err(e) => return failed(e),
            };
            let file = TruncationFile::from(&t);
            let back = untruncate(&t.polyhedron, &file.face_ids())?;
            let error = back
                .planes()
                .iter()
                .zip(p.planes())
                .map(|(a, b)| (a.normal() - b.normal()).max_abs())
                .fold(0.0, f64::max);
            report(
                vec![Verdict::new(
                    "round_trip",
                    back.num_faces() == p.num_faces() && error < ROUND_TRIP_TOL,
                    vec![json!(error)],
                )],
                to_value(&file),
            )
        }
        "untruncate" => {
            let file: TruncationFile = parse(input)?;
            let t = file.to_polyhedron()?;
            match untruncate(&t, &file.face_ids()) {
                Ok(p) => report(vec![], to_value(&PolyhedronFile::from(&p))),
                Err(e) => failed(e),
            }
        }
        "angles" => {
            let p = polyhedron(input)?;
            let c = p.combinatorics();
            let edges = (0..p.num_edges())
                .map(|e| {
                    Ok(json!({
                        "edge": e,
                        "vertices": c.edge(e).vertices,
                        "faces": c.edge(e).faces,
                        "dihedral": p.dihedral_angle(e)?,
                        "exterior": p.exterior_angle(e)?,
                    }))
                })
                .collect::<Result<Vec<Value>, Error>>()?;
            let mut verdicts = vec![];
            let mut payload = json!({ "edges": edges });
            // Only polyhedra without finite vertices have a dual graph in K_Γ.
            if let Ok(g) = hyperideal_angles(&p) {
                let r = check_k_gamma(&g, s.tol_eq);
                verdicts.push(Verdict::new("k_gamma", r.member, vec![]));
                payload["graph"] = to_value(&g);
            }
            report(verdicts, payload)
        }
        "check-angles" => {
            let g = graph(input)?;
            let r = check_k_gamma(&g, s.tol_eq);
            let mut items: Vec<Value> = r.c1.violations.iter().map(to_value).collect();
            items.extend(r.c2.violations.iter().map(to_value));
            items.extend(r.out_of_range.iter().map(|e| json!({ "out_of_range": e })));
            report(vec![Verdict::new("k_gamma", r.member, items)], to_value(&r))
        }
        "metric" => {
            let g = graph(input)?;
            let m = match build_q_gamma(&g) {
                Ok(m) => m,
                Err(e) => return failed(e),
            };
            let defect = m.gauss_bonnet_defect();
            report(
                vec![Verdict::new(
                    "gauss_bonnet",
                    defect.abs() < GAUSS_BONNET_TOL,
                    vec![json!(defect)],
                )],
                json!({
                    "points": m.points(),
                    "total_area": m.total_area(),
                    "euler_characteristic": m.euler_characteristic(),
                    "gauss_bonnet_defect": defect,
                    "complex": m,
                }),
            )
        }
        "geodesic-search" => {
            let value: Value = parse(input)?;
            // A complex carries triangles; anything else is read as a graph.
            let (metric, relaxed) = if value.get("triangles").is_some() {
                (parse::<ConeSphericalMetric>(input)?, false)
            } else {
                let g = graph(input)?;
                match build_q_gamma(&g) {
                    Ok(m) => (m, false),
                    Err(_) => (build_q_gamma_relaxed(&g)?, true),
                }
            };
            let budget = Budget {
                seed: s.seed,
                ..s.budget
            };
            let r = closed_geodesic_falsifier(&metric, TAU + budget.margin, &budget)?;
            let items = r.witness.iter().map(to_value).collect();
            report(
                vec![Verdict::new(
                    "no_short_closed_geodesic",
                    r.witness.is_none(),
                    items,
                )],
                json!({ "budget": budget, "relaxed": relaxed, "search": r }),
            )
        }
        "pogorelov-selftest" => {
            let r = selftest(s.seed, s.samples);
            report(
                vec![Verdict::new("residuals", r.passed(), vec![])],
                to_value(&r),
            )
        }
        "export-obj" => {
            let p = polyhedron(input)?;
            Ok(Output::Text(to_obj(&p)?))
        }
        other => Err(InputError(format!("unknown command {other}"))),
    }
}
