//! Explicit polyhedra used as examples and test families.
//!
//! Regular polyhedra are built from planes at distance `r` from the origin
//! of H³, facing it. Their vertices move from H³ through the sphere at
//! infinity and out into de Sitter space as `r` grows; the thresholds are
//! given by each family's `ideal_tanh` and `max_tanh`.

use std::f64::consts::PI;

use rand::Rng;

use crate::error::Result;
use crate::minkowski::{
    orthogonal_complement, random_direction, HPlane, Isometry, LieElement, MVector,
};
use crate::polyhedron::ProjectivePolyhedron;

/// The Platonic families: face directions from the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Platonic {
    Tetrahedron,
    Cube,
    Octahedron,
    Dodecahedron,
}

fn normalize3(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    v.map(|x| x / n)
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

impl Platonic {
    pub const ALL: [Platonic; 4] = [
        Platonic::Tetrahedron,
        Platonic::Cube,
        Platonic::Octahedron,
        Platonic::Dodecahedron,
    ];

    /// Unit directions of the face centers.
    pub fn face_directions(self) -> Vec<[f64; 3]> {
        match self {
            Platonic::Tetrahedron => [[1., 1., 1.], [1., -1., -1.], [-1., 1., -1.], [-1., -1., 1.]]
                .into_iter()
                .map(normalize3)
                .collect(),
            Platonic::Cube => (0..3)
                .flat_map(|k| {
                    [1.0, -1.0].map(|s| {
                        let mut e = [0.0; 3];
                        e[k] = s;
                        e
                    })
                })
                .collect(),
            Platonic::Octahedron => (0..8)
                .map(|i| {
                    let s = |k: usize| if i >> k & 1 == 1 { -1.0 } else { 1.0 };
                    normalize3([s(0), s(1), s(2)])
                })
                .collect(),
            Platonic::Dodecahedron => {
                // Icosahedron vertices: cyclic permutations of (0, ±1, ±φ).
                let phi = (1.0 + 5f64.sqrt()) / 2.0;
                let mut out = Vec::new();
                for a in [1.0, -1.0] {
                    for b in [phi, -phi] {
                        out.push(normalize3([0.0, a, b]));
                        out.push(normalize3([a, b, 0.0]));
                        out.push(normalize3([b, 0.0, a]));
                    }
                }
                out
            }
        }
    }

    /// Cosine of the angle between a face center and one of its vertices.
    fn vertex_cosine(self) -> f64 {
        match self {
            Platonic::Tetrahedron => 1.0 / 3.0,
            Platonic::Cube | Platonic::Octahedron => 1.0 / 3f64.sqrt(),
            Platonic::Dodecahedron => 0.794_654_472_291_766_1,
        }
    }

    /// Cosine of the angle subtended at the origin by an edge.
    fn edge_cosine(self) -> f64 {
        match self {
            Platonic::Tetrahedron => -1.0 / 3.0,
            Platonic::Cube => 1.0 / 3.0,
            Platonic::Octahedron => 0.0,
            Platonic::Dodecahedron => 5f64.sqrt() / 3.0,
        }
    }

    /// `tanh r` at which the vertices become ideal.
    pub fn ideal_tanh(self) -> f64 {
        self.vertex_cosine()
    }

    /// Supremum of `tanh r` for which the edges still meet H³.
    pub fn max_tanh(self) -> f64 {
        // Unit vertex reps (1, w d)/√(w²−1) with w = tanh r / cos; the edge meets
        // H³ while their inner product stays below −1, i.e. w² (1 + c) < 2.
        self.vertex_cosine() * (2.0 / (1.0 + self.edge_cosine())).sqrt()
    }

    /// Face planes at distance `atanh(t)` from the origin.
    pub fn planes(self, t: f64) -> Vec<HPlane> {
        let r = t.atanh();
        self.face_directions()
            .into_iter()
            .map(|u| HPlane::at_distance(r, u))
            .collect()
    }

    pub fn polyhedron(self, t: f64) -> Result<ProjectivePolyhedron> {
        ProjectivePolyhedron::from_planes(&self.planes(t))
    }

    /// Exterior dihedral angle of the regular polyhedron at `tanh r = t`.
    pub fn exterior_angle(self, t: f64) -> f64 {
        // ⟨n_a, n_b⟩ = −sinh² r + cosh² r cos(angle between adjacent face directions).
        let dirs = self.face_directions();
        let adjacent = dirs[1..]
            .iter()
            .map(|d| dot3(dirs[0], *d))
            .filter(|c| *c < 1.0 - 1e-9)
            .fold(f64::NEG_INFINITY, f64::max);
        let c2 = 1.0 / (1.0 - t * t);
        let s2 = c2 - 1.0;
        (-s2 + c2 * adjacent).clamp(-1.0, 1.0).acos()
    }
}

/// The regular ideal tetrahedron; all dihedral angles are `π/3`.
pub fn regular_ideal_tetrahedron() -> ProjectivePolyhedron {
    Platonic::Tetrahedron
        .polyhedron(Platonic::Tetrahedron.ideal_tanh())
        .expect("valid")
}

/// Face planes of a tetrahedron with the given vertex rays.
pub fn tetrahedron_planes(vertices: &[MVector; 4]) -> Result<Vec<HPlane>> {
    let mut planes = Vec::with_capacity(4);
    for skip in 0..4 {
        let others: Vec<&MVector> = (0..4)
            .filter(|&i| i != skip)
            .map(|i| &vertices[i])
            .collect();
        let n = orthogonal_complement(others[0], others[1], others[2]);
        let n = if crate::minkowski::inner(&n, &vertices[skip]) < 0.0 {
            -n
        } else {
            n
        };
        planes.push(HPlane::from_normal(n)?);
    }
    Ok(planes)
}

/// Moves every plane by a small random isometry, then the whole set by a
/// random isometry of moderate size.
pub fn perturb_planes<R: Rng + ?Sized>(rng: &mut R, planes: &[HPlane], amount: f64) -> Vec<HPlane> {
    let global = Isometry::random(rng, 0.5);
    planes
        .iter()
        .map(|p| {
            let local = Isometry::exp(&LieElement::random(rng, amount));
            p.transformed(&local).transformed(&global)
        })
        .collect()
}

/// A random compact polyhedron: a perturbed regular cube or simplex.
pub fn random_compact<R: Rng + ?Sized>(rng: &mut R) -> ProjectivePolyhedron {
    loop {
        let kind = if rng.gen_bool(0.5) {
            Platonic::Cube
        } else {
            Platonic::Tetrahedron
        };
        let t = rng.gen_range(0.2..0.9) * kind.ideal_tanh();
        let planes = perturb_planes(rng, &kind.planes(t), 0.05);
        if let Ok(p) = ProjectivePolyhedron::from_planes(&planes) {
            if p.is_compact() && p.num_faces() == kind.face_directions().len() {
                return p;
            }
        }
    }
}

/// A random polyhedron with at least one strictly hyperideal vertex, built
/// from a perturbed Platonic family in its hyperideal range.
///
/// Octahedra only get a global isometry: splitting a vertex of degree four
/// beyond the sphere leaves an edge missing H³.
pub fn random_hyperideal<R: Rng + ?Sized>(rng: &mut R, kind: Platonic) -> ProjectivePolyhedron {
    let amount = if kind == Platonic::Octahedron {
        0.0
    } else {
        0.01
    };
    loop {
        let (lo, hi) = (kind.ideal_tanh(), kind.max_tanh());
        let t = lo + (hi - lo) * rng.gen_range(0.15..0.85);
        let planes = perturb_planes(rng, &kind.planes(t), amount);
        if let Ok(p) = ProjectivePolyhedron::from_planes(&planes) {
            if p.has_hyperideal() && p.num_faces() == kind.face_directions().len() {
                return p;
            }
        }
    }
}

/// A hyperideal tetrahedron with one ideal vertex and three hyperideal ones.
pub fn mixed_tetrahedron() -> ProjectivePolyhedron {
    let ideal = MVector::new(1.0, 0.0, 0.0, 1.0);
    let hyper = |u: [f64; 3], w: f64| MVector::new(1.0, w * u[0], w * u[1], w * u[2]);
    let base = [[1.0, 0.0, -0.3], [-0.5, 0.87, -0.3], [-0.5, -0.87, -0.3]].map(normalize3);
    let vertices = [
        ideal,
        hyper(base[0], 1.15),
        hyper(base[1], 1.15),
        hyper(base[2], 1.15),
    ];
    let planes = tetrahedron_planes(&vertices).expect("valid tetrahedron");
    ProjectivePolyhedron::from_planes(&planes).expect("valid tetrahedron")
}

/// Three coordinate planes through the origin, closed by a cap facing them.
/// The origin is a vertex where all three dihedral angles are right.
pub fn orthogonal_corner() -> ProjectivePolyhedron {
    let mut planes: Vec<HPlane> = (1..4)
        .map(|k| HPlane::new(MVector::basis(k)).expect("spacelike"))
        .collect();
    planes.push(HPlane::at_distance(0.5, [1.0 / 3f64.sqrt(); 3]));
    ProjectivePolyhedron::from_planes(&planes).expect("valid corner")
}

/// A prism over a right-angled pentagon lying in `x3 = 0`, capped above.
/// The pentagon face has index 5.
pub fn right_angled_pentagon_prism() -> ProjectivePolyhedron {
    // Adjacent side normals make an angle 2π/5 at the center; right angles
    // require −sinh²ρ + cosh²ρ cos(2π/5) = 0.
    let c = (2.0 * PI / 5.0).cos();
    let rho = (c / (1.0 - c)).sqrt().asinh();
    let mut planes: Vec<HPlane> = (0..5)
        .map(|i| {
            let a = 2.0 * PI * i as f64 / 5.0;
            HPlane::at_distance(rho, [a.cos(), a.sin(), 0.0])
        })
        .collect();
    planes.push(HPlane::new(MVector::basis(3)).expect("spacelike"));
    planes.push(HPlane::at_distance(0.3, [0.0, 0.0, 1.0]));
    ProjectivePolyhedron::from_planes(&planes).expect("valid prism")
}

/// A tetrahedron with one ideal vertex and three finite ones.
pub fn semi_ideal_tetrahedron() -> ProjectivePolyhedron {
    let ideal = MVector::new(1.0, 0.0, 0.0, 1.0);
    let finite = |u: [f64; 3]| MVector::new(1.0, 0.5 * u[0], 0.5 * u[1], 0.5 * u[2]);
    let base = [[1.0, 0.0, -0.3], [-0.5, 0.87, -0.3], [-0.5, -0.87, -0.3]].map(normalize3);
    let vertices = [ideal, finite(base[0]), finite(base[1]), finite(base[2])];
    let planes = tetrahedron_planes(&vertices).expect("valid tetrahedron");
    ProjectivePolyhedron::from_planes(&planes).expect("valid tetrahedron")
}

/// Random vertex direction on S², for callers building their own families.
pub fn random_unit<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    random_direction(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedron::VertexClass;
    use std::f64::consts::PI;

    #[test]
    fn thresholds_match_classification() {
        for kind in Platonic::ALL {
            let lo = kind.ideal_tanh();
            let hi = kind.max_tanh();
            assert!(hi > lo);
            let compact = kind.polyhedron(0.9 * lo).unwrap();
            assert!(compact.is_compact());
            let ideal = kind.polyhedron(lo).unwrap();
            assert!(ideal.classes().iter().all(|&c| c == VertexClass::Ideal));
            let hyper = kind.polyhedron(0.5 * (lo + hi)).unwrap();
            assert!(hyper
                .classes()
                .iter()
                .all(|&c| c == VertexClass::Hyperideal));
            assert!(kind.polyhedron(hi + 0.02 * (1.0 - hi)).is_err());
        }
    }

    #[test]
    fn closed_form_angles() {
        for kind in Platonic::ALL {
            for t in [
                0.5 * kind.ideal_tanh(),
                kind.ideal_tanh(),
                0.5 * (kind.ideal_tanh() + kind.max_tanh()),
            ] {
                let p = kind.polyhedron(t).unwrap();
                for e in 0..p.num_edges() {
                    assert!((p.exterior_angle(e).unwrap() - kind.exterior_angle(t)).abs() < 1e-9);
                }
            }
        }
        assert!((Platonic::Tetrahedron.exterior_angle(1.0 / 3.0) - 2.0 * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn mixed_tetrahedron_classes() {
        let p = mixed_tetrahedron();
        let mut classes = p.classes().to_vec();
        classes.sort_by_key(|c| *c as u8);
        assert_eq!(
            classes,
            vec![
                VertexClass::Ideal,
                VertexClass::Hyperideal,
                VertexClass::Hyperideal,
                VertexClass::Hyperideal
            ]
        );
    }
}
