//! Global and infinitesimal Pogorelov maps.
//!
//! Given a projective center `x₀`, the global map sends a pair of points of a
//! unit quadric to a pair of points of the affine hyperplane `x₀^⊥`, in such a
//! way that pairs of isometric surfaces go to pairs of isometric surfaces.
//! The infinitesimal map transports isometric deformations in the same way.
//! Everything here is numerical verification: the identities are evaluated
//! with finite differences on seeded samples.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::minkowski::{
    classify, inner, projective_inverse, projective_map, random_direction, CausalClass, DSPoint,
    Isometry, LieElement, MVector, ProjectiveCenter, Sign, HORIZON_TOL,
};

/// Finite-difference step used by every derivative oracle.
pub const FD_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PogorelovContext {
    pub center: ProjectiveCenter,
}

impl PogorelovContext {
    pub fn new(center: ProjectiveCenter) -> Self {
        PogorelovContext { center }
    }

    fn numerator(&self, x: &MVector) -> MVector {
        let x0 = self.center.x0();
        *x * self.center.epsilon() - x0 * inner(x, &x0)
    }
}

/// Sample points with a tangent velocity at each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeformationField {
    pub base: Vec<MVector>,
    pub velocity: Vec<MVector>,
}

impl DeformationField {
    /// Points lying on a unit quadric must carry tangent velocities.
    pub fn new(base: Vec<MVector>, velocity: Vec<MVector>) -> Result<Self> {
        if base.len() != velocity.len() {
            return Err(Error::InvalidInput(format!(
                "{} points but {} velocities",
                base.len(),
                velocity.len()
            )));
        }
        for (b, v) in base.iter().zip(&velocity) {
            if (b.norm_sq().abs() - 1.0).abs() <= 1e-9 {
                let r = inner(b, v);
                if r.abs() > 1e-9 * v.max_abs().max(1.0) {
                    return Err(Error::NotTangent(r));
                }
            }
        }
        Ok(DeformationField { base, velocity })
    }

    /// Velocity field `p ↦ A p` of a one-parameter group of isometries.
    pub fn killing(base: Vec<MVector>, generator: &LieElement) -> Self {
        let velocity = base.iter().map(|p| generator.apply(p)).collect();
        DeformationField { base, velocity }
    }
}

/// `2(εx − ⟨x,x₀⟩x₀, εx′ − ⟨x′,x₀⟩x₀) / ⟨x+x′, x₀⟩`.
pub fn global_map(ctx: &PogorelovContext, x: &MVector, xp: &MVector) -> Result<(MVector, MVector)> {
    let s = inner(&(*x + *xp), &ctx.center.x0());
    if s.abs() < HORIZON_TOL {
        return Err(Error::PairOnHorizon);
    }
    Ok((ctx.numerator(x) * 2.0 / s, ctx.numerator(xp) * 2.0 / s))
}

/// Point at time `t` on the quadric geodesic through `x` with velocity `v`.
pub fn geodesic_point(x: &MVector, v: &MVector, t: f64, mu: f64) -> MVector {
    let q = v.norm_sq();
    if q.abs() < 1e-300 {
        return *x + *v * t;
    }
    let w = (q.abs()).sqrt();
    // Along the geodesic c'' = -(q/μ) c.
    let k = -q / mu;
    let (c, s) = if k < 0.0 {
        let (s, c) = (w * t).sin_cos();
        (c, s / w)
    } else {
        ((w * t).cosh(), (w * t).sinh() / w)
    };
    *x * c + *v * s
}

/// Orthogonal projection of `v` onto the tangent space of the quadric at `x`.
pub fn tangent_projection(x: &MVector, v: &MVector, mu: f64) -> MVector {
    *v - *x * (inner(v, x) / mu)
}

fn check_tangent(x: &MVector, v: &MVector) -> Result<()> {
    let r = inner(x, v);
    if r.abs() > 1e-9 * x.max_abs().max(1.0) * v.max_abs().max(1.0) {
        return Err(Error::NotTangent(r));
    }
    Ok(())
}

/// Residual of `¼⟨x+x′,x₀⟩²(‖π₁TΦ‖² − ‖π₂TΦ‖²) = ‖X‖² − ‖X′‖²` with `TΦ`
/// taken by central differences along quadric geodesics.
pub fn norm_difference_residual(
    ctx: &PogorelovContext,
    x: &MVector,
    xp: &MVector,
    tx: &MVector,
    txp: &MVector,
) -> Result<f64> {
    check_tangent(x, tx)?;
    check_tangent(xp, txp)?;
    let mu = ctx.center.mu();
    let h = FD_STEP;
    let (a_plus, b_plus) = global_map(
        ctx,
        &geodesic_point(x, tx, h, mu),
        &geodesic_point(xp, txp, h, mu),
    )?;
    let (a_minus, b_minus) = global_map(
        ctx,
        &geodesic_point(x, tx, -h, mu),
        &geodesic_point(xp, txp, -h, mu),
    )?;
    let d1 = (a_plus - a_minus) / (2.0 * h);
    let d2 = (b_plus - b_minus) / (2.0 * h);
    let s = inner(&(*x + *xp), &ctx.center.x0());
    let lhs = 0.25 * s * s * (d1.norm_sq() - d2.norm_sq());
    let rhs = tx.norm_sq() - txp.norm_sq();
    Ok((lhs - rhs).abs())
}

/// `(φ(x), (εv − ⟨v,x₀⟩x₀)/⟨x,x₀⟩)`.
pub fn infinitesimal_map(
    ctx: &PogorelovContext,
    x: &MVector,
    v: &MVector,
) -> Result<(MVector, MVector)> {
    check_tangent(x, v)?;
    let y = projective_map(&ctx.center, x)?;
    let d = inner(x, &ctx.center.x0());
    Ok((y, ctx.numerator(v) / d))
}

/// Pushes a deformation field through the infinitesimal map.
pub fn push_forward(ctx: &PogorelovContext, field: &DeformationField) -> Result<DeformationField> {
    let mut base = Vec::with_capacity(field.base.len());
    let mut velocity = Vec::with_capacity(field.base.len());
    for (p, v) in field.base.iter().zip(&field.velocity) {
        let (y, w) = infinitesimal_map(ctx, p, v)?;
        base.push(y);
        velocity.push(w);
    }
    Ok(DeformationField { base, velocity })
}

/// Largest first variation of edge length over the edges, measured with the
/// ambient quadratic form. Vanishes for isometric deformations.
pub fn discrete_lie_residual(edges: &[(usize, usize)], field: &DeformationField) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &(i, j) in edges {
        let (p, q) = (field.base.get(i), field.base.get(j));
        let (Some(p), Some(q)) = (p, q) else {
            return Err(Error::InvalidInput(format!("edge ({i}, {j}) out of range")));
        };
        let chord = *q - *p;
        let len_sq = chord.norm_sq().abs();
        if len_sq.sqrt() <= 1e-12 * p.max_abs().max(1.0) {
            return Err(Error::InvalidInput(format!("degenerate edge ({i}, {j})")));
        }
        let dv = field.velocity[j] - field.velocity[i];
        worst = worst.max(inner(&chord, &dv).abs() / len_sq.sqrt());
    }
    Ok(worst)
}

/// A vector on the positive side of every input vertex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupportingCenter {
    /// Normalized to `|⟨w,w⟩| = 1`.
    pub normal: MVector,
    pub class: CausalClass,
    /// `min ⟨u, w⟩` over the inputs.
    pub slack: f64,
}

impl SupportingCenter {
    /// The projective center whose domain contains every input vertex.
    pub fn center(&self, mu: Sign) -> Result<ProjectiveCenter> {
        let x0 = match self.class {
            CausalClass::Spacelike => self.normal,
            _ => -self.normal,
        };
        ProjectiveCenter::new(x0, mu)
    }
}

fn min_slack(points: &[MVector], w: &MVector) -> f64 {
    points
        .iter()
        .map(|u| inner(u, w))
        .fold(f64::INFINITY, f64::min)
}

/// Finds `w` with `⟨u, w⟩ > 0` for every dual vertex `u`.
///
/// Tries the vertices themselves first, then the minimum-norm point of the
/// convex hull of the (time-flipped) vertices, and finally perturbs a
/// lightlike result off the light cone with a geometric schedule of 16 steps
/// starting at half the slack.
pub fn supporting_center(dual_vertices: &[DSPoint]) -> Result<SupportingCenter> {
    if dual_vertices.is_empty() {
        return Err(Error::InvalidInput("no dual vertices".into()));
    }
    let points: Vec<MVector> = dual_vertices.iter().map(|d| d.vector()).collect();

    let best_vertex = points
        .iter()
        .map(|u| (min_slack(&points, u), *u))
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .expect("non-empty");
    if best_vertex.0 > 1e-9 {
        return Ok(SupportingCenter {
            normal: best_vertex.1,
            class: CausalClass::Spacelike,
            slack: best_vertex.0,
        });
    }

    // ⟨u, w⟩ = (Ju)·w, so a Euclidean separating direction for the Ju works.
    let dirs: Vec<MVector> = points
        .iter()
        .map(|u| u.flip_time().euclidean_unit())
        .collect::<Result<_>>()?;
    let w = min_norm_separator(&dirs).ok_or(Error::NoSupportingHyperplane)?;
    let slack = min_slack(&points, &w);

    let normalize = |w: MVector| -> Option<SupportingCenter> {
        let class = classify(&w).ok()?;
        if class == CausalClass::Lightlike {
            return None;
        }
        let normal = w.unit().ok()?;
        let slack = min_slack(&points, &normal);
        (slack > 0.0).then_some(SupportingCenter {
            normal,
            class,
            slack,
        })
    };
    if let Some(found) = normalize(w) {
        return Ok(found);
    }
    let perturbations: Vec<MVector> = (0..4)
        .flat_map(|i| [MVector::basis(i), -MVector::basis(i)])
        .collect();
    for k in 0..16 {
        let delta = 0.5 * slack * 0.5_f64.powi(k);
        for p in &perturbations {
            if let Some(found) = normalize(w + *p * delta) {
                return Ok(found);
            }
        }
    }
    Err(Error::NoSupportingHyperplane)
}

/// Frank–Wolfe descent toward the minimum-norm point of the hull of `dirs`,
/// stopped as soon as the current point separates every direction strictly.
fn min_norm_separator(dirs: &[MVector]) -> Option<MVector> {
    let mut m = dirs.iter().fold(MVector::ZERO, |acc, d| acc + *d) / dirs.len() as f64;
    for _ in 0..20_000 {
        let (idx, worst) = dirs
            .iter()
            .enumerate()
            .map(|(i, d)| (i, d.dot(&m)))
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        let norm = m.euclidean_norm();
        if norm < 1e-12 {
            return None;
        }
        if worst > 1e-12 * norm {
            return Some(m);
        }
        let step = m - dirs[idx];
        let denom = step.dot(&step);
        if denom <= 0.0 {
            return None;
        }
        let gamma = (m.dot(&step) / denom).clamp(0.0, 1.0);
        m -= step * gamma;
    }
    None
}

/// One of the four `(ε, μ)` regimes of the projective chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Regime {
    pub epsilon: Sign,
    pub mu: Sign,
}

impl Regime {
    pub const ALL: [Regime; 4] = [
        Regime {
            epsilon: Sign::Minus,
            mu: Sign::Minus,
        },
        Regime {
            epsilon: Sign::Minus,
            mu: Sign::Plus,
        },
        Regime {
            epsilon: Sign::Plus,
            mu: Sign::Minus,
        },
        Regime {
            epsilon: Sign::Plus,
            mu: Sign::Plus,
        },
    ];

    pub fn label(&self) -> String {
        let s = |x: Sign| if x == Sign::Minus { '-' } else { '+' };
        format!("eps{}mu{}", s(self.epsilon), s(self.mu))
    }

    /// A center for this regime moved by a random isometry, together with the isometry.
    pub fn random_center<R: Rng + ?Sized>(&self, rng: &mut R) -> (ProjectiveCenter, Isometry) {
        let g = Isometry::random(rng, 0.6);
        let standard = match self.epsilon {
            Sign::Minus => MVector::basis(0),
            Sign::Plus => MVector::basis(3),
        };
        let x0 = g.apply(&standard).unit().expect("isometry keeps unit norm");
        (ProjectiveCenter::new(x0, self.mu).expect("unit center"), g)
    }
}

/// A random point in the domain of `center`, away from the horizon.
pub fn sample_point<R: Rng + ?Sized>(rng: &mut R, center: &ProjectiveCenter) -> MVector {
    let x0 = center.x0();
    loop {
        let r: f64 = rng.gen_range(0.0..1.3);
        let u = random_direction(rng);
        let (s, c) = (r.sinh(), r.cosh());
        let raw = if center.mu() < 0.0 {
            MVector::new(c, s * u[0], s * u[1], s * u[2])
        } else {
            MVector::new(s, c * u[0], c * u[1], c * u[2])
        };
        // Rotate the sample into a frame adapted to the center.
        let adapted = frame_from_center(&x0).apply(&raw);
        let d = inner(&adapted, &x0);
        if d.abs() < 0.2 {
            continue;
        }
        return if (d < 0.0) == (center.epsilon() < 0.0) {
            adapted
        } else {
            -adapted
        };
    }
}

/// An isometry sending the standard center of the regime of `x0` to `x0`.
fn frame_from_center(x0: &MVector) -> Isometry {
    let basis = crate::minkowski::orthogonal_basis(x0);
    let mut m = nalgebra::Matrix4::zeros();
    if x0.norm_sq() < 0.0 {
        m.set_column(0, &crate::minkowski::to_na(x0));
        for (k, b) in basis.iter().enumerate() {
            m.set_column(k + 1, &crate::minkowski::to_na(b));
        }
    } else {
        // The timelike vector of the basis goes first, then the spacelike ones, x0 last.
        let (time, space): (Vec<MVector>, Vec<MVector>) =
            basis.into_iter().partition(|b| b.norm_sq() < 0.0);
        m.set_column(0, &crate::minkowski::to_na(&time[0]));
        m.set_column(1, &crate::minkowski::to_na(&space[0]));
        m.set_column(2, &crate::minkowski::to_na(&space[1]));
        m.set_column(3, &crate::minkowski::to_na(x0));
    }
    Isometry(m)
}

/// A random tangent vector at `x` on the quadric of sign `mu`.
pub fn sample_tangent<R: Rng + ?Sized>(rng: &mut R, x: &MVector, mu: f64, scale: f64) -> MVector {
    let v = MVector(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)));
    tangent_projection(x, &v, mu) * scale / x.max_abs().max(1.0)
}

/// Worst residuals per regime.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub regime: String,
    pub round_trip: f64,
    pub norm_difference: f64,
    pub commutation: f64,
    pub infinitesimal_consistency: f64,
    pub killing_pushforward: f64,
    pub pushforward_equivalence: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfTestReport {
    pub seed: u64,
    pub samples: usize,
    pub regimes: Vec<RegimeReport>,
}

impl SelfTestReport {
    pub fn passed(&self) -> bool {
        self.regimes.iter().all(|r| {
            r.round_trip < 1e-12
                && r.norm_difference < 1e-6
                && r.commutation < 1e-8
                && r.infinitesimal_consistency < 1e-5
                && r.killing_pushforward < 1e-6
                && r.pushforward_equivalence
        })
    }
}

/// `max |φ⁻¹(φ(x)) − x|` over `samples` random points.
pub fn round_trip_error<R: Rng + ?Sized>(rng: &mut R, regime: Regime, samples: usize) -> f64 {
    let (center, _) = regime.random_center(rng);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let x = sample_point(rng, &center);
        let y = projective_map(&center, &x).expect("sample avoids horizon");
        let back = projective_inverse(&center, &y).expect("image lies in the model");
        worst = worst.max((back - x).max_abs() / x.max_abs());
    }
    worst
}

/// Worst norm-difference residual over random tangent configurations.
pub fn norm_difference_error<R: Rng + ?Sized>(rng: &mut R, regime: Regime, samples: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let (center, _) = regime.random_center(rng);
        let ctx = PogorelovContext::new(center);
        let x = sample_point(rng, &center);
        let xp = sample_point(rng, &center);
        let tx = sample_tangent(rng, &x, center.mu(), 1.0);
        let txp = sample_tangent(rng, &xp, center.mu(), 1.0);
        let r = norm_difference_residual(&ctx, &x, &xp, &tx, &txp).expect("valid sample");
        worst = worst.max(r);
    }
    worst
}

/// Worst defect of `Φ ∘ (ρ×ρ) = (ρ̃×ρ̃) ∘ Φ` and `ρ̃ = φ∘ρ∘φ⁻¹` for isotropies `ρ` of the center.
pub fn commutation_error<R: Rng + ?Sized>(rng: &mut R, regime: Regime, samples: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let (center, _) = regime.random_center(rng);
        let ctx = PogorelovContext::new(center);
        let rho = Isometry::exp(&LieElement::random_isotropy(rng, &center.x0(), 0.8));
        let x = sample_point(rng, &center);
        let xp = sample_point(rng, &center);
        let (a, b) = global_map(&ctx, &x, &xp).expect("valid sample");
        let (ra, rb) = global_map(&ctx, &rho.apply(&x), &rho.apply(&xp)).expect("valid sample");
        let scale = a.max_abs().max(b.max_abs()).max(1.0);
        worst = worst.max((ra - rho.apply(&a)).max_abs() / scale);
        worst = worst.max((rb - rho.apply(&b)).max_abs() / scale);
        // The induced map on the affine model is the restriction of ρ.
        let y = projective_map(&center, &x).expect("valid sample");
        let moved = projective_inverse(&center, &y)
            .and_then(|p| projective_map(&center, &rho.apply(&p)))
            .expect("valid sample");
        worst = worst.max((moved - rho.apply(&y)).max_abs() / y.max_abs().max(1.0));
    }
    worst
}

/// Worst gap between `φ̃(x, v)` and the derivative of `π₂Φ(x, x_t) − π₁Φ(x, x_t)`.
pub fn infinitesimal_consistency_error<R: Rng + ?Sized>(
    rng: &mut R,
    regime: Regime,
    samples: usize,
) -> f64 {
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let (center, _) = regime.random_center(rng);
        let ctx = PogorelovContext::new(center);
        let x = sample_point(rng, &center);
        let v = sample_tangent(rng, &x, center.mu(), 1.0);
        let (_, w) = infinitesimal_map(&ctx, &x, &v).expect("valid sample");
        let diff = |t: f64| {
            let xt = geodesic_point(&x, &v, t, center.mu());
            let (a, b) = global_map(&ctx, &x, &xt).expect("valid sample");
            b - a
        };
        let h = FD_STEP;
        let fd = (diff(h) - diff(-h)) / (2.0 * h);
        worst = worst.max((fd - w).max_abs() / w.max_abs().max(1.0));
    }
    worst
}

/// A small seeded point cloud with all pairwise edges, kept away from
/// degenerate (null or very short) chords in both source and image.
fn sample_surface<R: Rng + ?Sized>(
    rng: &mut R,
    center: &ProjectiveCenter,
    count: usize,
) -> (Vec<MVector>, Vec<(usize, usize)>) {
    let mut points: Vec<MVector> = Vec::new();
    let mut images: Vec<MVector> = Vec::new();
    while points.len() < count {
        let p = sample_point(rng, center);
        let y = projective_map(center, &p).expect("sample avoids horizon");
        let ok = points
            .iter()
            .zip(&images)
            .all(|(q, z)| (p - *q).norm_sq().abs() > 1e-2 && (y - *z).norm_sq().abs() > 1e-2);
        if ok {
            points.push(p);
            images.push(y);
        }
    }
    let edges = (0..count)
        .flat_map(|i| ((i + 1)..count).map(move |j| (i, j)))
        .collect();
    (points, edges)
}

/// Worst image residual of pushed-forward Killing fields, and whether the
/// isometric/non-isometric verdict at tolerance `1e−8` survives the push
/// forward for both Killing and random fields.
pub fn pushforward_check<R: Rng + ?Sized>(
    rng: &mut R,
    regime: Regime,
    samples: usize,
) -> (f64, bool) {
    const TOL: f64 = 1e-8;
    let mut worst: f64 = 0.0;
    let mut equivalent = true;
    for _ in 0..samples {
        let (center, _) = regime.random_center(rng);
        let ctx = PogorelovContext::new(center);
        let (points, edges) = sample_surface(rng, &center, 6);

        let killing = DeformationField::killing(points.clone(), &LieElement::random(rng, 0.5));
        let src = discrete_lie_residual(&edges, &killing).expect("valid surface");
        let img =
            discrete_lie_residual(&edges, &push_forward(&ctx, &killing).expect("valid field"))
                .expect("valid surface");
        worst = worst.max(img);
        equivalent &= (src < TOL) == (img < TOL);

        let velocity = points
            .iter()
            .map(|p| sample_tangent(rng, p, center.mu(), 1.0))
            .collect();
        let random = DeformationField::new(points, velocity).expect("tangent field");
        let src = discrete_lie_residual(&edges, &random).expect("valid surface");
        let img = discrete_lie_residual(&edges, &push_forward(&ctx, &random).expect("valid field"))
            .expect("valid surface");
        equivalent &= (src < TOL) == (img < TOL);
    }
    (worst, equivalent)
}

/// Runs every numerical identity check in all four regimes.
pub fn selftest(seed: u64, samples: usize) -> SelfTestReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let regimes = Regime::ALL
        .iter()
        .map(|&regime| {
            let (killing_pushforward, pushforward_equivalence) =
                pushforward_check(&mut rng, regime, samples.div_ceil(10).max(1));
            RegimeReport {
                regime: regime.label(),
                round_trip: round_trip_error(&mut rng, regime, samples),
                norm_difference: norm_difference_error(&mut rng, regime, samples),
                commutation: commutation_error(&mut rng, regime, samples),
                infinitesimal_consistency: infinitesimal_consistency_error(
                    &mut rng, regime, samples,
                ),
                killing_pushforward,
                pushforward_equivalence,
            }
        })
        .collect();
    SelfTestReport {
        seed,
        samples,
        regimes,
    }
}


#[cfg(test)]
mod selftest_tests {
    #[test]
    fn selftest_passes() {
        let report = super::selftest(7, 100);
        for r in &report.regimes {
            eprintln!("{r:?}");
        }
        assert!(report.passed());
    }
}
