//! Linear algebra of Minkowski space R⁴₁ with signature (−,+,+,+).
//!
//! Points of hyperbolic space H³ live on the upper sheet of `⟨x,x⟩ = −1`,
//! points of de Sitter space S³₁ on `⟨x,x⟩ = +1`. Hyperbolic planes are
//! encoded by their unit spacelike normal; the half-space of a plane is
//! `{p : ⟨p,n⟩ ≥ 0}` (inward normals).
//!
//! The projective map sends the part `Ω₀` of a unit quadric cut out by the
//! sign of `⟨x,x₀⟩` to the affine hyperplane through the center `x₀`
//! orthogonal to it. Affine points are returned as offsets from `x₀`, so
//! they satisfy `⟨y,x₀⟩ = 0`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use nalgebra::Matrix4;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative band in which `⟨v,v⟩` counts as zero.
pub const LIGHTLIKE_EPS: f64 = 1e-10;
/// Tolerance for membership of the unit quadrics.
pub const QUADRIC_TOL: f64 = 1e-9;
/// Below this `|⟨x,x₀⟩|` a point sits on the projection horizon.
pub const HORIZON_TOL: f64 = 1e-12;

/// A vector of R⁴₁; coordinate 0 is the timelike axis.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MVector(pub [f64; 4]);

impl MVector {
    pub const ZERO: MVector = MVector([0.0; 4]);

    pub const fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        MVector([x0, x1, x2, x3])
    }

    /// The i-th standard basis vector.
    pub fn basis(i: usize) -> Self {
        let mut v = [0.0; 4];
        v[i] = 1.0;
        MVector(v)
    }

    /// Point of H³ at distance `t` from the origin `(1,0,0,0)` in direction `u`.
    pub fn hyperbolic_point(t: f64, u: [f64; 3]) -> Self {
        let (s, c) = (t.sinh(), t.cosh());
        MVector([c, s * u[0], s * u[1], s * u[2]])
    }

    pub fn inner(&self, other: &MVector) -> f64 {
        inner(self, other)
    }

    pub fn norm_sq(&self) -> f64 {
        inner(self, self)
    }

    /// Plain Euclidean dot product of coordinates.
    pub fn dot(&self, other: &MVector) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn euclidean_norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// Flips the sign of the timelike coordinate, turning `⟨a,·⟩` into `a.flip()·(·)`.
    pub fn flip_time(&self) -> MVector {
        MVector([-self.0[0], self.0[1], self.0[2], self.0[3]])
    }

    /// Rescales to `|⟨v,v⟩| = 1`. Fails on lightlike vectors.
    pub fn unit(&self) -> Result<MVector> {
        let q = self.norm_sq();
        let scale = self.max_abs();
        if scale == 0.0 || q.abs() <= LIGHTLIKE_EPS * scale * scale {
            return Err(Error::DegenerateVector);
        }
        Ok(*self / q.abs().sqrt())
    }

    pub fn euclidean_unit(&self) -> Result<MVector> {
        let n = self.euclidean_norm();
        if n == 0.0 {
            return Err(Error::DegenerateVector);
        }
        Ok(*self / n)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    pub fn distance_euclidean(&self, other: &MVector) -> f64 {
        (*self - *other).euclidean_norm()
    }

    /// Spatial part `(x1, x2, x3)`.
    pub fn spatial(&self) -> [f64; 3] {
        [self.0[1], self.0[2], self.0[3]]
    }
}

impl fmt::Display for MVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {})",
            self.0[0], self.0[1], self.0[2], self.0[3]
        )
    }
}

impl Index<usize> for MVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for MVector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Add for MVector {
    type Output = MVector;
    fn add(self, o: MVector) -> MVector {
        MVector(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl AddAssign for MVector {
    fn add_assign(&mut self, o: MVector) {
        *self = *self + o;
    }
}

impl Sub for MVector {
    type Output = MVector;
    fn sub(self, o: MVector) -> MVector {
        MVector(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl SubAssign for MVector {
    fn sub_assign(&mut self, o: MVector) {
        *self = *self - o;
    }
}

impl Mul<f64> for MVector {
    type Output = MVector;
    fn mul(self, s: f64) -> MVector {
        MVector(self.0.map(|x| x * s))
    }
}

impl Mul<MVector> for f64 {
    type Output = MVector;
    fn mul(self, v: MVector) -> MVector {
        v * self
    }
}

impl Div<f64> for MVector {
    type Output = MVector;
    fn div(self, s: f64) -> MVector {
        MVector(self.0.map(|x| x / s))
    }
}

impl Neg for MVector {
    type Output = MVector;
    fn neg(self) -> MVector {
        MVector(self.0.map(|x| -x))
    }
}

/// `−a0·b0 + a1·b1 + a2·b2 + a3·b3`.
pub fn inner(a: &MVector, b: &MVector) -> f64 {
    -a.0[0] * b.0[0] + a.0[1] * b.0[1] + a.0[2] * b.0[2] + a.0[3] * b.0[3]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CausalClass {
    Timelike,
    Spacelike,
    Lightlike,
}

/// Causal type of `v`, with the lightlike band scaled by the largest coordinate.
pub fn classify(v: &MVector) -> Result<CausalClass> {
    let scale = v.max_abs();
    if scale == 0.0 {
        return Err(Error::DegenerateVector);
    }
    let q = v.norm_sq();
    let band = LIGHTLIKE_EPS * scale * scale;
    Ok(if q < -band {
        CausalClass::Timelike
    } else if q > band {
        CausalClass::Spacelike
    } else {
        CausalClass::Lightlike
    })
}

/// Vector `v` with `⟨v, a⟩ = ⟨v, b⟩ = ⟨v, c⟩ = 0`, built from 3×3 cofactors.
///
/// The result vanishes exactly when the three inputs are linearly dependent.
pub fn orthogonal_complement(a: &MVector, b: &MVector, c: &MVector) -> MVector {
    // Euclidean generalized cross product of the time-flipped vectors.
    let (a, b, c) = (a.flip_time(), b.flip_time(), c.flip_time());
    let m = |i: usize, j: usize, k: usize| -> f64 {
        a[i] * (b[j] * c[k] - b[k] * c[j]) - a[j] * (b[i] * c[k] - b[k] * c[i])
            + a[k] * (b[i] * c[j] - b[j] * c[i])
    };
    MVector([-m(1, 2, 3), m(0, 2, 3), -m(0, 1, 3), m(0, 1, 2)])
}

/// 4×4 determinant of the column vectors.
pub fn det4(a: &MVector, b: &MVector, c: &MVector, d: &MVector) -> f64 {
    Matrix4::from_columns(&[to_na(a), to_na(b), to_na(c), to_na(d)]).determinant()
}

pub(crate) fn to_na(v: &MVector) -> nalgebra::Vector4<f64> {
    nalgebra::Vector4::new(v[0], v[1], v[2], v[3])
}

pub(crate) fn from_na(v: &nalgebra::Vector4<f64>) -> MVector {
    MVector([v[0], v[1], v[2], v[3]])
}

/// A point of H³ (upper sheet of the hyperboloid).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HPoint(MVector);

impl HPoint {
    pub fn new(v: MVector) -> Result<Self> {
        let q = v.norm_sq();
        if (q + 1.0).abs() > QUADRIC_TOL || v[0] <= 0.0 {
            return Err(Error::OffQuadric(format!("{v} is not on the upper sheet")));
        }
        Ok(HPoint(v))
    }

    /// Normalizes a future timelike vector onto the hyperboloid.
    pub fn from_timelike(v: MVector) -> Result<Self> {
        if classify(&v)? != CausalClass::Timelike {
            return Err(Error::OffQuadric(format!("{v} is not timelike")));
        }
        let v = v.unit()?;
        HPoint::new(if v[0] < 0.0 { -v } else { v })
    }

    pub fn origin() -> Self {
        HPoint(MVector::basis(0))
    }

    pub fn vector(&self) -> MVector {
        self.0
    }

    /// Klein-model coordinates `x/x0`.
    pub fn klein(&self) -> [f64; 3] {
        let v = self.0;
        [v[1] / v[0], v[2] / v[0], v[3] / v[0]]
    }
}

/// A point of de Sitter space S³₁.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DSPoint(MVector);

impl DSPoint {
    pub fn new(v: MVector) -> Result<Self> {
        if (v.norm_sq() - 1.0).abs() > QUADRIC_TOL {
            return Err(Error::OffQuadric(format!(
                "{v} is not a unit spacelike vector"
            )));
        }
        Ok(DSPoint(v))
    }

    pub fn from_spacelike(v: MVector) -> Result<Self> {
        if classify(&v)? != CausalClass::Spacelike {
            return Err(Error::NotSpacelike);
        }
        DSPoint::new(v.unit()?)
    }

    pub fn vector(&self) -> MVector {
        self.0
    }
}

/// An oriented hyperbolic plane with inward unit spacelike normal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HPlane {
    normal: MVector,
}

impl HPlane {
    /// Accepts an already normalized normal.
    pub fn new(normal: MVector) -> Result<Self> {
        if (normal.norm_sq() - 1.0).abs() > QUADRIC_TOL {
            return Err(Error::NotSpacelike);
        }
        Ok(HPlane { normal })
    }

    /// Normalizes any spacelike vector.
    pub fn from_normal(normal: MVector) -> Result<Self> {
        match classify(&normal)? {
            CausalClass::Spacelike => HPlane::new(normal.unit()?),
            _ => Err(Error::NotSpacelike),
        }
    }

    /// Plane at signed distance `r` from the origin, facing direction `−u`
    /// (the origin side is the half-space when `r > 0`).
    pub fn at_distance(r: f64, u: [f64; 3]) -> Self {
        let (s, c) = (r.sinh(), r.cosh());
        HPlane {
            normal: MVector([-s, -c * u[0], -c * u[1], -c * u[2]]),
        }
    }

    pub fn normal(&self) -> MVector {
        self.normal
    }

    /// `⟨p, n⟩`; non-negative on the half-space.
    pub fn evaluate(&self, p: &MVector) -> f64 {
        inner(p, &self.normal)
    }

    pub fn flipped(&self) -> HPlane {
        HPlane {
            normal: -self.normal,
        }
    }

    pub fn transformed(&self, g: &Isometry) -> HPlane {
        HPlane {
            normal: g.apply(&self.normal),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Minus => -1.0,
            Sign::Plus => 1.0,
        }
    }

    pub fn of(x: f64) -> Sign {
        if x < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

/// Center `x₀` of a projective chart, its square norm sign `ε` and the sign
/// `μ` of the source quadric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectiveCenter {
    x0: MVector,
    epsilon: Sign,
    mu: Sign,
}

impl ProjectiveCenter {
    pub fn new(x0: MVector, mu: Sign) -> Result<Self> {
        let q = x0.norm_sq();
        if (q.abs() - 1.0).abs() > QUADRIC_TOL {
            return Err(Error::OffQuadric(format!("center {x0} is not unit")));
        }
        Ok(ProjectiveCenter {
            x0,
            epsilon: Sign::of(q),
            mu,
        })
    }

    /// The Klein chart of H³ centered at `(1,0,0,0)`.
    pub fn klein() -> Self {
        ProjectiveCenter {
            x0: MVector::basis(0),
            epsilon: Sign::Minus,
            mu: Sign::Minus,
        }
    }

    pub fn x0(&self) -> MVector {
        self.x0
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon.value()
    }

    pub fn mu(&self) -> f64 {
        self.mu.value()
    }

    pub fn epsilon_sign(&self) -> Sign {
        self.epsilon
    }

    pub fn mu_sign(&self) -> Sign {
        self.mu
    }

    /// Whether `x` lies on the source quadric inside `Ω₀`.
    pub fn in_domain(&self, x: &MVector) -> bool {
        let d = inner(x, &self.x0);
        (x.norm_sq() - self.mu()).abs() <= QUADRIC_TOL * x.max_abs().max(1.0).powi(2)
            && d.abs() > HORIZON_TOL
            && Sign::of(d) == self.epsilon
    }
}

/// `arcosh(−⟨p,q⟩)`.
pub fn hyperbolic_distance(p: &HPoint, q: &HPoint) -> Result<f64> {
    let c = -inner(&p.0, &q.0);
    if c < 1.0 - QUADRIC_TOL {
        return Err(Error::NotSameSheet);
    }
    Ok(c.max(1.0).acosh())
}

/// `arccos⟨u,v⟩` for a spacelike-connected pair of de Sitter points.
pub fn desitter_distance(u: &DSPoint, v: &DSPoint) -> Result<f64> {
    let c = inner(&u.0, &v.0);
    if c.abs() > 1.0 + QUADRIC_TOL {
        return Err(Error::NotSpacelikeConnected);
    }
    Ok(c.clamp(-1.0, 1.0).acos())
}

/// `(ε·x − ⟨x,x₀⟩·x₀) / ⟨x,x₀⟩`.
pub fn projective_map(c: &ProjectiveCenter, x: &MVector) -> Result<MVector> {
    let d = inner(x, &c.x0);
    if d.abs() < HORIZON_TOL {
        return Err(Error::OnHorizon);
    }
    Ok((*x * c.epsilon() - c.x0 * d) / d)
}

/// `(y + x₀) / sqrt(μ·⟨y+x₀, y+x₀⟩)`; the positive root keeps the image in `Ω₀`.
pub fn projective_inverse(c: &ProjectiveCenter, y: &MVector) -> Result<MVector> {
    let w = *y + c.x0;
    let q = c.mu() * w.norm_sq();
    if q <= 0.0 || !q.is_finite() {
        return Err(Error::OutsideModel);
    }
    Ok(w / q.sqrt())
}

/// A linear map of R⁴₁ preserving the quadratic form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry(pub Matrix4<f64>);

impl Isometry {
    pub fn identity() -> Self {
        Isometry(Matrix4::identity())
    }

    pub fn apply(&self, v: &MVector) -> MVector {
        from_na(&(self.0 * to_na(v)))
    }

    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry(self.0 * other.0)
    }

    pub fn inverse(&self) -> Isometry {
        // g⁻¹ = J gᵀ J for g ∈ O(3,1).
        let j = Matrix4::from_diagonal(&nalgebra::Vector4::new(-1.0, 1.0, 1.0, 1.0));
        Isometry(j * self.0.transpose() * j)
    }

    /// Boost of rapidity `t` mixing the time axis with spatial axis `axis ∈ {1,2,3}`.
    pub fn boost(axis: usize, t: f64) -> Self {
        let mut m = Matrix4::identity();
        m[(0, 0)] = t.cosh();
        m[(axis, axis)] = t.cosh();
        m[(0, axis)] = t.sinh();
        m[(axis, 0)] = t.sinh();
        Isometry(m)
    }

    /// Rotation by `angle` in the spatial plane of axes `i`, `j`.
    pub fn rotation(i: usize, j: usize, angle: f64) -> Self {
        let mut m = Matrix4::identity();
        let (s, c) = angle.sin_cos();
        m[(i, i)] = c;
        m[(j, j)] = c;
        m[(i, j)] = -s;
        m[(j, i)] = s;
        Isometry(m)
    }

    /// Random element of O⁺(3,1) with boosts of rapidity at most `max_rapidity`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, max_rapidity: f64) -> Self {
        let mut g = Isometry::identity();
        for (i, j) in [(1, 2), (2, 3), (1, 3)] {
            g = g.compose(&Isometry::rotation(i, j, rng.gen_range(-3.1..3.1)));
        }
        for axis in 1..=3 {
            g = g.compose(&Isometry::boost(
                axis,
                rng.gen_range(-max_rapidity..=max_rapidity),
            ));
        }
        g
    }

    /// `exp(A)` for a Lie algebra element.
    pub fn exp(generator: &LieElement) -> Self {
        Isometry(generator.0.exp())
    }

    /// Largest entry of `gᵀ J g − J`.
    pub fn form_defect(&self) -> f64 {
        let j = Matrix4::from_diagonal(&nalgebra::Vector4::new(-1.0, 1.0, 1.0, 1.0));
        (self.0.transpose() * j * self.0 - j).amax()
    }
}

/// An element of the Lie algebra o(3,1): `⟨Au, v⟩ + ⟨u, Av⟩ = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LieElement(pub Matrix4<f64>);

impl LieElement {
    /// The generator `u ↦ a⟨b,u⟩ − b⟨a,u⟩`.
    pub fn wedge(a: &MVector, b: &MVector) -> Self {
        let (an, bn) = (to_na(a), to_na(b));
        let (aj, bj) = (to_na(&a.flip_time()), to_na(&b.flip_time()));
        LieElement(an * bj.transpose() - bn * aj.transpose())
    }

    pub fn apply(&self, v: &MVector) -> MVector {
        from_na(&(self.0 * to_na(v)))
    }

    pub fn scaled(&self, s: f64) -> Self {
        LieElement(self.0 * s)
    }

    pub fn add(&self, other: &LieElement) -> Self {
        LieElement(self.0 + other.0)
    }

    /// Random element with entries of size about `scale`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Self {
        let basis: Vec<MVector> = (0..4).map(MVector::basis).collect();
        Self::random_in_span(rng, &basis, scale)
    }

    /// Random element of the isotropy algebra of the unit vector `x0`.
    pub fn random_isotropy<R: Rng + ?Sized>(rng: &mut R, x0: &MVector, scale: f64) -> Self {
        Self::random_in_span(rng, &orthogonal_basis(x0), scale)
    }

    fn random_in_span<R: Rng + ?Sized>(rng: &mut R, vectors: &[MVector], scale: f64) -> Self {
        let mut acc = LieElement(Matrix4::zeros());
        for i in 0..vectors.len() {
            for j in (i + 1)..vectors.len() {
                let c = rng.gen_range(-scale..=scale);
                acc = acc.add(&LieElement::wedge(&vectors[i], &vectors[j]).scaled(c));
            }
        }
        acc
    }
}

/// Three vectors spanning `x0^⊥`, orthonormal for the quadratic form.
pub fn orthogonal_basis(x0: &MVector) -> Vec<MVector> {
    let e = x0.norm_sq();
    let mut out: Vec<MVector> = Vec::with_capacity(3);
    let mut candidates: Vec<MVector> = (0..4).map(MVector::basis).collect();
    candidates.sort_by(|a, b| {
        inner(a, x0)
            .abs()
            .partial_cmp(&inner(b, x0).abs())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    for c in candidates {
        let mut v = c - *x0 * (inner(&c, x0) / e);
        for w in &out {
            v -= *w * (inner(&v, w) / w.norm_sq());
        }
        if let Ok(u) = v.unit() {
            if v.euclidean_norm() > 1e-6 {
                out.push(u);
            }
        }
        if out.len() == 3 {
            break;
        }
    }
    out
}

/// Uniform random direction on S².
pub fn random_direction<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-3 && n <= 1.0 {
            return v.map(|x| x / n);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn inner_examples() {
        let e0 = MVector::basis(0);
        assert_eq!(inner(&e0, &e0), -1.0);
        assert_eq!(inner(&MVector::basis(1), &MVector::basis(2)), 0.0);
        let p = MVector::new(1f64.cosh(), 1f64.sinh(), 0.0, 0.0);
        assert!((inner(&p, &e0) + 1.5430806348152437).abs() < 1e-15);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&MVector::basis(0)).unwrap(), CausalClass::Timelike);
        assert_eq!(
            classify(&MVector::new(1.0, 1.0, 0.0, 0.0)).unwrap(),
            CausalClass::Lightlike
        );
        assert_eq!(
            classify(&MVector::new(0.5, 1.0, 0.0, 0.0)).unwrap(),
            CausalClass::Spacelike
        );
        assert_eq!(classify(&MVector::ZERO), Err(Error::DegenerateVector));
    }

    #[test]
    fn hyperbolic_distance_examples() {
        let o = HPoint::origin();
        assert_eq!(hyperbolic_distance(&o, &o).unwrap(), 0.0);
        let p = HPoint::new(MVector::new(1f64.cosh(), 1f64.sinh(), 0.0, 0.0)).unwrap();
        assert!((hyperbolic_distance(&o, &p).unwrap() - 1.0).abs() < 1e-12);
        let q = HPoint::new(MVector::new(2f64.cosh(), 0.0, 2f64.sinh(), 0.0)).unwrap();
        assert!((hyperbolic_distance(&o, &q).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn desitter_distance_examples() {
        let a = DSPoint::new(MVector::basis(1)).unwrap();
        let b = DSPoint::new(MVector::basis(2)).unwrap();
        let c = DSPoint::new(-MVector::basis(1)).unwrap();
        assert_eq!(desitter_distance(&a, &a).unwrap(), 0.0);
        assert!((desitter_distance(&a, &b).unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!((desitter_distance(&a, &c).unwrap() - std::f64::consts::PI).abs() < 1e-15);
        let far = DSPoint::new(MVector::new(2f64.sinh(), 2f64.cosh(), 0.0, 0.0)).unwrap();
        let near = DSPoint::new(MVector::new(-(2f64.sinh()), 2f64.cosh(), 0.0, 0.0)).unwrap();
        assert_eq!(
            desitter_distance(&far, &near),
            Err(Error::NotSpacelikeConnected)
        );
    }

    #[test]
    fn projective_map_examples() {
        let klein = ProjectiveCenter::klein();
        let o = projective_map(&klein, &MVector::basis(0)).unwrap();
        assert_eq!(o, MVector::ZERO);
        let p = MVector::new(1f64.cosh(), 1f64.sinh(), 0.0, 0.0);
        let y = projective_map(&klein, &p).unwrap();
        assert!((y[1] - 1f64.tanh()).abs() < 1e-15);
        assert!((y[1] - 0.7615942).abs() < 1e-7);
        assert_eq!([y[0], y[2], y[3]], [0.0; 3]);

        let ds = ProjectiveCenter::new(MVector::basis(3), Sign::Plus).unwrap();
        assert_eq!(
            projective_map(&ds, &MVector::basis(3)).unwrap(),
            MVector::ZERO
        );

        let horizon = MVector::new(0.0, 1.0, 0.0, 0.0);
        assert_eq!(projective_map(&klein, &horizon), Err(Error::OnHorizon));
    }

    #[test]
    fn projective_inverse_examples() {
        let klein = ProjectiveCenter::klein();
        assert_eq!(
            projective_inverse(&klein, &MVector::ZERO).unwrap(),
            MVector::basis(0)
        );
        let y = MVector::new(0.0, 1f64.tanh(), 0.0, 0.0);
        let x = projective_inverse(&klein, &y).unwrap();
        assert!((x[0] - 1f64.cosh()).abs() < 1e-14);
        assert!((x[1] - 1f64.sinh()).abs() < 1e-14);
        assert_eq!(
            projective_inverse(&klein, &MVector::new(0.0, 2.0, 0.0, 0.0)),
            Err(Error::OutsideModel)
        );
    }

    #[test]
    fn orthogonal_complement_is_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let vs: Vec<MVector> = (0..3)
                .map(|_| MVector(std::array::from_fn(|_| rng.gen_range(-2.0..2.0))))
                .collect();
            let w = orthogonal_complement(&vs[0], &vs[1], &vs[2]);
            for v in &vs {
                assert!(inner(&w, v).abs() < 1e-12);
            }
            assert!(w.euclidean_norm() > 0.0);
        }
    }

    #[test]
    fn lie_exponentials_are_isometries() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let a = LieElement::random(&mut rng, 0.7);
            let g = Isometry::exp(&a);
            assert!(g.form_defect() < 1e-12);
            let x0 = MVector::new(0.3, 0.2, 1.1, -0.4).unit().unwrap();
            let iso = LieElement::random_isotropy(&mut rng, &x0, 0.7);
            assert!(iso.apply(&x0).euclidean_norm() < 1e-12);
            let rho = Isometry::exp(&iso);
            assert!((rho.apply(&x0) - x0).euclidean_norm() < 1e-12);
        }
        let g = Isometry::random(&mut rng, 1.0);
        assert!(g.form_defect() < 1e-12);
        assert!((g.compose(&g.inverse()).0 - Matrix4::identity()).amax() < 1e-12);
    }
}
