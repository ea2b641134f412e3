use super::{Planar, Source};
use crate::error::{domain, Result};
use crate::geometry::{halfspace_intersection, minkowski_sum, DirectionGrid, Halfspace, Polygon2, Vec2};
use crate::numeric::gl_composite;
use rayon::prelude::*;

/// A depth-trimmed region on a direction grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthRegion {
    /// Intersection of the quantile halfplanes; may be empty.
    pub region: Polygon2,
    /// Quantile offsets `q_{1-delta}` per grid direction.
    pub offsets: Vec<f64>,
    /// Set when the source has atoms: the lower quantile is used throughout,
    /// and other quantile versions can give a different region.
    pub atomic: bool,
}

impl DepthRegion {
    pub fn is_empty(&self) -> bool {
        self.region.is_empty()
    }
}

fn offsets(planar: &Planar<'_>, grid: &DirectionGrid, delta: f64) -> Result<Vec<f64>> {
    grid.directions().par_iter().map(|u| planar.law(*u)?.quantile(1.0 - delta)).collect()
}

fn region(grid: &DirectionGrid, offsets: &[f64]) -> Result<Polygon2> {
    let hs: Vec<Halfspace> =
        grid.directions().iter().zip(offsets).map(|(u, q)| Halfspace { normal: *u, offset: *q }).collect();
    halfspace_intersection(&hs)
}

/// `D_delta = {x : <x,u> <= q_{1-delta}(<X,u>) for all grid directions u}`.
pub fn depth_region(source: &Source, delta: f64, grid: &DirectionGrid) -> Result<DepthRegion> {
    if !(delta > 0.0 && delta < 1.0) {
        return domain("depth level must lie in (0,1)");
    }
    let planar = source.prepare()?;
    let offsets = offsets(&planar, grid, delta)?;
    Ok(DepthRegion { region: region(grid, &offsets)?, offsets, atomic: source.is_atomic() })
}

/// Minkowski combination `sum w_k P_k` of nonempty polygons.
fn weighted_sum(parts: &[(f64, Polygon2)]) -> Polygon2 {
    let mut acc: Option<Polygon2> = None;
    for (w, p) in parts {
        if *w == 0.0 {
            continue;
        }
        let s = p.scale(*w);
        acc = Some(match acc {
            None => s,
            Some(a) => minkowski_sum(&a, &s),
        });
    }
    acc.unwrap_or_else(Polygon2::empty)
}

/// Depth levels in `(0, alpha)` where some grid projection of a discrete
/// source changes its `(1-t)`-quantile.
fn atomic_breaks(source: &Source, grid: &DirectionGrid, alpha: f64) -> Option<Vec<f64>> {
    let Source::Sample(s) = source else { return None };
    let pts = s.points2()?;
    let w = s.weights();
    let mut breaks: Vec<f64> = grid
        .directions()
        .par_iter()
        .flat_map_iter(|u| {
            let proj: Vec<f64> = pts.iter().map(|p| p.dot(*u)).collect();
            let mut idx: Vec<usize> = (0..pts.len()).collect();
            idx.sort_by(|&a, &b| proj[a].total_cmp(&proj[b]));
            let mut acc = 0.0;
            idx.into_iter()
                .map(|i| {
                    acc += w[i];
                    1.0 - acc
                })
                .filter(|t| *t > 0.0 && *t < alpha)
                .collect::<Vec<_>>()
        })
        .collect();
    breaks.push(0.0);
    breaks.push(alpha);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
    Some(breaks)
}

/// Largest number of constant pieces integrated exactly for atomic sources.
const MAX_EXACT_PIECES: usize = 4096;

/// The Aumann average `(1/alpha) int_0^alpha D_t dt` of depth regions, as a
/// polygon (empty when `D_alpha` is empty).
///
/// For discrete sources `t -> D_t` is piecewise constant and is integrated
/// exactly when the pieces are few; otherwise Gauss-Legendre nodes in `t`
/// are doubled from 64 until the support values settle to `1e-8`.
pub fn integrated_depth_region(source: &Source, alpha: f64, grid: &DirectionGrid) -> Result<Polygon2> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain("depth level must lie in (0,1)");
    }
    let planar = source.prepare()?;
    let at = |t: f64| -> Result<Polygon2> { region(grid, &offsets(&planar, grid, t)?) };
    if at(alpha)?.is_empty() {
        return Ok(Polygon2::empty());
    }
    if let Some(b) = atomic_breaks(source, grid, alpha).filter(|b| b.len() <= MAX_EXACT_PIECES + 1) {
        let parts: Vec<(f64, Polygon2)> = b
            .par_windows(2)
            .map(|w| Ok(((w[1] - w[0]) / alpha, at(0.5 * (w[0] + w[1]))?)))
            .collect::<Result<_>>()?;
        return Ok(weighted_sum(&parts));
    }
    let integrate = |panels: usize| -> Result<Polygon2> {
        let parts: Vec<(f64, Polygon2)> =
            gl_composite(panels, 0.0, alpha).into_par_iter().map(|(t, w)| Ok((w / alpha, at(t)?))).collect::<Result<_>>()?;
        Ok(weighted_sum(&parts))
    };
    let mut panels = 1;
    let mut cur = integrate(panels)?;
    while panels < 16 {
        panels *= 2;
        let next = integrate(panels)?;
        let change = grid
            .directions()
            .iter()
            .map(|u: &Vec2| (next.support(*u) - cur.support(*u)).abs())
            .fold(0.0, f64::max);
        cur = next;
        if change < 1e-8 {
            break;
        }
    }
    Ok(cur)
}
