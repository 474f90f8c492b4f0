use super::{ConeSphericalMetric, MetricBuilder, PointLabel, SideRef, SphericalTriangle};
use crate::error::{Error, Result};

/// A hemisphere with apex cone angle `alpha`, cut into doubly-right
/// triangles with apex angles `partition`.
///
/// The apex is point 0 and the marked boundary points are `1..=n`, in order.
/// Boundary side of piece `i` is side 1 of triangle `i`. Any `alpha > 0` is
/// accepted: above `2π` this is a nega-hemisphere, at `2π` a round one.
pub fn nega_hemisphere(alpha: f64, partition: &[f64]) -> Result<ConeSphericalMetric> {
    if partition.len() < 2 {
        return Err(Error::InvalidInput(
            "a partition needs at least two pieces".into(),
        ));
    }
    let total: f64 = partition.iter().sum();
    if (total - alpha).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!(
            "partition sums to {total}, expected {alpha}"
        )));
    }
    let mut b = MetricBuilder::new();
    let apex = b.add_point(PointLabel::Apex);
    let n = partition.len();
    let rim: Vec<usize> = (0..n)
        .map(|i| b.add_point(PointLabel::Boundary(i)))
        .collect();
    for (i, &theta) in partition.iter().enumerate() {
        let tri = SphericalTriangle::doubly_right(theta)?;
        b.add_triangle(tri, [apex, rim[i], rim[(i + 1) % n]]);
    }
    for i in 0..n {
        b.glue(SideRef::new(i, 2), SideRef::new((i + 1) % n, 0))?;
    }
    b.build(false)
}
