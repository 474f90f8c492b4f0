//! File forms for polyhedra and truncations, and OBJ export.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::minkowski::{HPlane, MVector};
use crate::polyhedron::{Combinatorics, FaceList, ProjectivePolyhedron, VertexClass};
use crate::trunc::{truncate, TruncatedPolyhedron};

/// `{"planes": [[n0, n1, n2, n3], ...], "combinatorics": {"faces": [...]}}`.
///
/// Normals are inward and need not be normalized. Without `combinatorics`
/// the cell structure is computed from the planes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyhedronFile {
    pub planes: Vec<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub combinatorics: Option<FaceList>,
}

impl PolyhedronFile {
    pub fn planes(&self) -> Result<Vec<HPlane>> {
        self.planes
            .iter()
            .enumerate()
            .map(|(i, n)| {
                HPlane::from_normal(MVector(*n))
                    .map_err(|e| Error::InvalidInput(format!("plane {i}: {e}")))
            })
            .collect()
    }

    pub fn to_polyhedron(&self) -> Result<ProjectivePolyhedron> {
        let planes = self.planes()?;
        match &self.combinatorics {
            None => ProjectivePolyhedron::from_planes(&planes),
            Some(c) => {
                let c = Combinatorics::try_from(c.clone())?;
                ProjectivePolyhedron::with_combinatorics(&planes, c)
            }
        }
    }
}

impl From<&ProjectivePolyhedron> for PolyhedronFile {
    fn from(p: &ProjectivePolyhedron) -> Self {
        PolyhedronFile {
            planes: p.planes().iter().map(|h| h.normal().0).collect(),
            combinatorics: Some(FaceList::from(p.combinatorics().clone())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationFace {
    /// Vertex of the original polyhedron.
    pub vertex: usize,
    /// Face of the truncation.
    pub face: usize,
}

/// A truncation with its face id map. Faces below `original_faces` keep
/// their ids from the original polyhedron.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationFile {
    pub planes: Vec<[f64; 4]>,
    pub combinatorics: FaceList,
    pub original_faces: usize,
    pub truncation_faces: Vec<TruncationFace>,
}

impl From<&TruncatedPolyhedron> for TruncationFile {
    fn from(t: &TruncatedPolyhedron) -> Self {
        let file = PolyhedronFile::from(&t.polyhedron);
        TruncationFile {
            planes: file.planes,
            combinatorics: file.combinatorics.expect("always written"),
            original_faces: t.original_faces,
            truncation_faces: t
                .truncation_faces
                .iter()
                .map(|&(vertex, face)| TruncationFace { vertex, face })
                .collect(),
        }
    }
}

impl TruncationFile {
    pub fn to_polyhedron(&self) -> Result<ProjectivePolyhedron> {
        PolyhedronFile {
            planes: self.planes.clone(),
            combinatorics: Some(self.combinatorics.clone()),
        }
        .to_polyhedron()
    }

    pub fn face_ids(&self) -> Vec<usize> {
        self.truncation_faces.iter().map(|t| t.face).collect()
    }
}

/// Klein coordinates of a finite or ideal vertex.
fn klein(v: &MVector) -> [f64; 3] {
    [v[1] / v[0], v[2] / v[0], v[3] / v[0]]
}

/// Wavefront OBJ of the polyhedron in the Klein model. A polyhedron with
/// hyperideal vertices is replaced by its truncation.
pub fn to_obj(p: &ProjectivePolyhedron) -> Result<String> {
    let truncated;
    let p = if p.has_hyperideal() {
        truncated = truncate(p)?;
        &truncated.polyhedron
    } else {
        p
    };
    let mut out = String::new();
    writeln!(
        out,
        "# {} vertices, {} faces, Klein model",
        p.num_vertices(),
        p.num_faces()
    )
    .expect("writing to a string");
    for (v, class) in p.vertices().iter().zip(p.classes()) {
        let [x, y, z] = match class {
            VertexClass::Ideal => {
                let k = klein(v);
                let r = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
                k.map(|c| c / r)
            }
            _ => klein(v),
        };
        writeln!(out, "v {x:.12} {y:.12} {z:.12}").expect("writing to a string");
    }
    for f in 0..p.num_faces() {
        let ids: Vec<String> = p
            .combinatorics()
            .face(f)
            .iter()
            .map(|v| (v + 1).to_string())
            .collect();
        writeln!(out, "f {}", ids.join(" ")).expect("writing to a string");
    }
    Ok(out)
}
