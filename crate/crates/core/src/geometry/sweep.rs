//! Exact average-quantile polygons of planar discrete measures.

use super::polygon::{convex_hull, Polygon2, Vec2};
use crate::distributions::WeightedSample;
use crate::error::{domain, Result};
use rayon::prelude::*;
use std::f64::consts::{PI, TAU};

fn planar(mu: &WeightedSample) -> Result<Vec<Vec2>> {
    mu.points2().ok_or_else(|| crate::error::Error::Domain("planar measure required".into()))
}

/// Greedy top-fill touch point: weight `1/alpha` on the atoms with the largest
/// projections until the mass `alpha` is used up. Ties in projection are
/// filled in index order.
fn greedy(points: &[Vec2], weights: &[f64], alpha: f64, u: Vec2) -> (f64, Vec2) {
    let mut order: Vec<usize> = (0..points.len()).collect();
    let proj: Vec<f64> = points.iter().map(|p| p.dot(u)).collect();
    order.sort_by(|&a, &b| proj[b].total_cmp(&proj[a]).then(a.cmp(&b)));
    let mut rem = alpha;
    let mut h = 0.0;
    let mut x = Vec2::ZERO;
    for i in order {
        if rem <= 0.0 {
            break;
        }
        let take = weights[i].min(rem);
        h += take * proj[i];
        x = x + points[i] * take;
        rem -= take;
    }
    (h / alpha, x * (1.0 / alpha))
}

/// Support value of the average-quantile set in direction `u` together with
/// the boundary point `sum gamma_i p_i x_i` of the greedy dual witness.
pub fn support_touchpoint(mu: &WeightedSample, alpha: f64, u: Vec2) -> Result<(f64, Vec2)> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return domain("alpha outside (0,1]");
    }
    let pts = planar(mu)?;
    let u = u.normalized().ok_or_else(|| crate::error::Error::Domain("direction must be nonzero".into()))?;
    let (_, x) = greedy(&pts, mu.weights(), alpha, u);
    // report h as <x, u> so the touch point lies exactly on the supporting line
    Ok((x.dot(u), x))
}

/// Directions (as angles in `[0, 2pi)`) where two distinct atoms project equally.
pub fn critical_angles(points: &[Vec2]) -> Vec<f64> {
    let mut angles = Vec::with_capacity(points.len() * points.len());
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d = points[i] - points[j];
            if d.norm() == 0.0 {
                continue;
            }
            let a = d.perp().angle().rem_euclid(TAU);
            angles.push(a);
            angles.push((a + PI).rem_euclid(TAU));
        }
    }
    angles.sort_by(f64::total_cmp);
    angles.dedup();
    angles
}

/// The polygon `{sum lambda_i p_i x_i : 0 <= lambda_i <= 1/alpha, sum lambda_i p_i = 1}`.
///
/// Between consecutive critical directions the order of the projected atoms,
/// hence the greedy witness, is constant; one touch point per angular cell
/// gives every vertex.
pub fn exact_avg_quantile_body(mu: &WeightedSample, alpha: f64) -> Result<Polygon2> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return domain("alpha outside (0,1]");
    }
    let pts = planar(mu)?;
    let w = mu.weights();
    if alpha == 1.0 {
        let b = mu.barycenter();
        return Ok(Polygon2::point(Vec2::new(b[0], b[1])));
    }
    let angles = critical_angles(&pts);
    let mids: Vec<f64> = if angles.is_empty() {
        vec![0.0]
    } else {
        let k = angles.len();
        (0..k)
            .map(|i| {
                let next = if i + 1 < k { angles[i + 1] } else { angles[0] + TAU };
                0.5 * (angles[i] + next)
            })
            .collect()
    };
    let touch: Vec<Vec2> = mids.par_iter().map(|a| greedy(&pts, w, alpha, Vec2::from_angle(*a)).1).collect();
    Ok(convex_hull(&touch))
}
