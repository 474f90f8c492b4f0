use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Point3 = Vector3<f64>;

/// A spherical triangle with corners 0, 1, 2 in counterclockwise order.
///
/// `sides[i]` joins corner `i` to corner `i + 1`; `angles[i]` is the interior
/// angle at corner `i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalTriangle {
    sides: [f64; 3],
    angles: [f64; 3],
}

/// Angle at corner `i` from the three sides, by the half-angle formula.
fn corner_angle(sides: [f64; 3], i: usize) -> f64 {
    // Adjacent sides b, c and opposite side a.
    let b = sides[i];
    let c = sides[(i + 2) % 3];
    let a = sides[(i + 1) % 3];
    let s = 0.5 * (a + b + c);
    let num = (s - b).sin() * (s - c).sin();
    let den = s.sin() * (s - a).sin();
    2.0 * (num.max(0.0) / den.max(1e-300)).sqrt().atan()
}

/// Unsigned angle between two directions in the tangent plane at `p`.
fn angle_at(p: &Point3, q: &Point3, r: &Point3) -> f64 {
    let n1 = p.cross(q);
    let n2 = p.cross(r);
    n1.cross(&n2).norm().atan2(n1.dot(&n2))
}

/// Great-circle distance between unit vectors.
pub fn arc_length(p: &Point3, q: &Point3) -> f64 {
    p.cross(q).norm().atan2(p.dot(q))
}

impl SphericalTriangle {
    /// From three side lengths in `(0, π)`.
    pub fn from_sides(sides: [f64; 3]) -> Result<Self> {
        let total: f64 = sides.iter().sum();
        for i in 0..3 {
            let others = total - sides[i];
            if sides[i].is_nan() || sides[i] <= 0.0 || sides[i] >= others || total >= 2.0 * PI {
                return Err(Error::InvalidMetric(format!(
                    "side lengths {sides:?} do not form a spherical triangle"
                )));
            }
        }
        let angles = std::array::from_fn(|i| corner_angle(sides, i));
        Ok(SphericalTriangle { sides, angles })
    }

    /// The triangle with apex angle `theta` whose two sides at the apex are `π/2`.
    /// Corner 0 is the apex; the base (side 1) has length `theta` and both base
    /// angles are right.
    pub fn doubly_right(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < PI) {
            return Err(Error::SubdividePartition(theta));
        }
        Ok(SphericalTriangle {
            sides: [FRAC_PI_2, theta, FRAC_PI_2],
            angles: [theta, FRAC_PI_2, FRAC_PI_2],
        })
    }

    /// From unit vectors; the corners must be counterclockwise seen from outside.
    pub fn from_points(p: [Point3; 3]) -> Result<Self> {
        let det = p[0].dot(&p[1].cross(&p[2]));
        if det <= 0.0 {
            return Err(Error::InvalidMetric(
                "degenerate or clockwise triangle".into(),
            ));
        }
        let sides = std::array::from_fn(|i| arc_length(&p[i], &p[(i + 1) % 3]));
        let angles = std::array::from_fn(|i| angle_at(&p[i], &p[(i + 1) % 3], &p[(i + 2) % 3]));
        Ok(SphericalTriangle { sides, angles })
    }

    pub fn sides(&self) -> [f64; 3] {
        self.sides
    }

    pub fn angles(&self) -> [f64; 3] {
        self.angles
    }

    pub fn side(&self, i: usize) -> f64 {
        self.sides[i % 3]
    }

    pub fn angle(&self, i: usize) -> f64 {
        self.angles[i % 3]
    }

    pub fn area(&self) -> f64 {
        self.angles.iter().sum::<f64>() - PI
    }

    /// Largest defect in the spherical law of cosines over the three corners.
    pub fn law_of_cosines_defect(&self) -> f64 {
        (0..3)
            .map(|i| {
                let a = self.sides[(i + 1) % 3];
                let b = self.sides[i];
                let c = self.sides[(i + 2) % 3];
                (a.cos() - (b.cos() * c.cos() + b.sin() * c.sin() * self.angles[i].cos())).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Canonical embedding: corner 0 at the north pole, corner 1 in the
    /// `xz`-half-plane with `x > 0`, corner 2 with `y > 0`.
    pub fn embedding(&self) -> [Point3; 3] {
        let c = self.sides[0];
        let b = self.sides[2];
        let a0 = self.angles[0];
        [
            Point3::new(0.0, 0.0, 1.0),
            Point3::new(c.sin(), 0.0, c.cos()),
            Point3::new(b.sin() * a0.cos(), b.sin() * a0.sin(), b.cos()),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn octant() {
        let t = SphericalTriangle::from_sides([FRAC_PI_2; 3]).unwrap();
        for a in t.angles() {
            assert!((a - FRAC_PI_2).abs() < 1e-14);
        }
        assert!((t.area() - FRAC_PI_2).abs() < 1e-14);
    }

    #[test]
    fn doubly_right_is_consistent() {
        for theta in [0.1, 1.0, 2.0, 3.0] {
            let t = SphericalTriangle::doubly_right(theta).unwrap();
            assert!(t.law_of_cosines_defect() < 1e-12);
            assert!((t.area() - theta).abs() < 1e-15);
            let s = SphericalTriangle::from_sides(t.sides()).unwrap();
            for i in 0..3 {
                assert!((s.angle(i) - t.angle(i)).abs() < 1e-12);
            }
        }
        assert_eq!(
            SphericalTriangle::doubly_right(PI),
            Err(Error::SubdividePartition(PI))
        );
    }

    #[test]
    fn embedding_reproduces_triangle() {
        let t = SphericalTriangle::from_sides([0.7, 1.1, 0.9]).unwrap();
        let p = t.embedding();
        let back = SphericalTriangle::from_points(p).unwrap();
        for i in 0..3 {
            assert!((back.side(i) - t.side(i)).abs() < 1e-14);
            assert!((back.angle(i) - t.angle(i)).abs() < 1e-14);
        }
        assert!(t.law_of_cosines_defect() < 1e-14);
    }

    #[test]
    fn rejects_impossible_sides() {
        assert!(SphericalTriangle::from_sides([0.1, 0.1, 1.0]).is_err());
        assert!(SphericalTriangle::from_sides([3.0, 3.0, 3.0]).is_err());
    }
}
