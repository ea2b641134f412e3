//! Support functions sampled on direction grids and the inner/outer sandwich
//! they determine.

use super::polygon::{convex_hull, halfspace_intersection, hausdorff, Halfspace, Polygon2, Vec2};
use crate::error::{domain, Error, Result};
use std::f64::consts::TAU;

/// Unit directions in the plane, stored with their angles.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionGrid {
    angles: Vec<f64>,
    dirs: Vec<Vec2>,
    uniform: bool,
}

impl DirectionGrid {
    /// `n` equally spaced directions starting at angle zero.
    pub fn uniform(n: usize) -> Result<Self> {
        if n < 3 {
            return domain("direction grid needs at least 3 directions");
        }
        let angles: Vec<f64> = (0..n).map(|k| k as f64 * TAU / n as f64).collect();
        Ok(Self { dirs: angles.iter().map(|a| Vec2::from_angle(*a)).collect(), angles, uniform: true })
    }

    /// Directions at arbitrary angles; they must leave no angular gap of pi or more.
    pub fn from_angles(mut angles: Vec<f64>) -> Result<Self> {
        if angles.len() < 3 || angles.iter().any(|a| !a.is_finite()) {
            return domain("direction grid needs at least 3 finite angles");
        }
        for a in angles.iter_mut() {
            *a = a.rem_euclid(TAU);
        }
        angles.sort_by(f64::total_cmp);
        angles.dedup();
        let gap = angles
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(angles[0] + TAU - angles[angles.len() - 1], f64::max);
        if gap >= std::f64::consts::PI {
            return domain("direction grid does not cover the circle");
        }
        Ok(Self { dirs: angles.iter().map(|a| Vec2::from_angle(*a)).collect(), angles, uniform: false })
    }

    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }

    pub fn directions(&self) -> &[Vec2] {
        &self.dirs
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn is_uniform(&self) -> bool {
        self.uniform
    }
}

/// Support values `h(u_j)` on a grid, optionally with boundary points `x_j`
/// satisfying `<x_j, u_j> = h(u_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportField {
    pub grid: DirectionGrid,
    pub values: Vec<f64>,
    pub touch: Option<Vec<Vec2>>,
}

impl SupportField {
    pub fn new(grid: DirectionGrid, values: Vec<f64>, touch: Option<Vec<Vec2>>) -> Result<Self> {
        if values.len() != grid.len() || touch.as_ref().is_some_and(|t| t.len() != grid.len()) {
            return domain("support field length does not match its grid");
        }
        Ok(Self { grid, values, touch })
    }

    /// Support field of a polygon, with its support points as touch points.
    pub fn of_polygon(p: &Polygon2, grid: &DirectionGrid) -> Result<Self> {
        if p.is_empty() {
            return domain("support field of an empty polygon");
        }
        let dirs = grid.directions();
        let values = dirs.iter().map(|u| p.support(*u)).collect();
        let touch = dirs.iter().map(|u| p.support_point(*u).unwrap()).collect();
        Self::new(grid.clone(), values, Some(touch))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Largest violation of `h_k |u_i + u_j| <= h_i + h_j` over pairs whose sum
    /// direction lies on the grid (uniform grids only; zero otherwise).
    pub fn sublinearity_violation(&self) -> f64 {
        let n = self.grid.len();
        if !self.grid.is_uniform() {
            return 0.0;
        }
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                if (i + j) % 2 != 0 || 2 * (j - i) == n {
                    continue;
                }
                // the bisector of u_i and u_j is u_k or -u_k
                let mut k = (i + j) / 2;
                if 2 * (j - i) > n {
                    if n % 2 == 1 {
                        continue;
                    }
                    k = (k + n / 2) % n;
                }
                let len = (self.grid.dirs[i] + self.grid.dirs[j]).norm();
                let v = self.values[k] * len - self.values[i] - self.values[j];
                worst = worst.max(v);
            }
        }
        worst
    }

    pub fn halfspaces(&self) -> Vec<Halfspace> {
        self.grid
            .directions()
            .iter()
            .zip(&self.values)
            .map(|(u, h)| Halfspace { normal: *u, offset: *h })
            .collect()
    }
}

/// Certified sandwich `inner ⊆ body ⊆ outer`, with `gap` bounding the Hausdorff
/// distance of either polygon to the body.
#[derive(Debug, Clone, PartialEq)]
pub struct BodyEstimate {
    pub inner: Polygon2,
    pub outer: Polygon2,
    pub gap: f64,
}

impl BodyEstimate {
    /// An exactly known polygon.
    pub fn exact(p: Polygon2) -> Self {
        Self { inner: p.clone(), outer: p, gap: 0.0 }
    }

    pub fn support(&self, u: Vec2) -> f64 {
        self.outer.support(u)
    }
}

/// Sandwich a body from its support values on a grid.
///
/// The outer polygon is the intersection of the grid halfplanes. With touch
/// points the inner polygon is their hull and the gap is the exact Hausdorff
/// distance between the two. Without them, every edge of the outer polygon
/// meets the body, so each outer vertex lies within `L sin(theta/2)` of the
/// body (`L` the longer adjacent edge, `theta` the turn at the vertex); the
/// inner polygon is the outer one pulled in by that amount.
pub fn body_from_support(field: &SupportField) -> Result<BodyEstimate> {
    if field.grid.len() < 3 {
        return domain("body_from_support needs at least 3 directions");
    }
    if !field.is_finite() {
        return Err(Error::Unbounded);
    }
    let outer = halfspace_intersection(&field.halfspaces())?;
    if outer.is_empty() {
        return domain("support values are inconsistent: outer body is empty");
    }
    if let Some(touch) = &field.touch {
        let inner = convex_hull(touch);
        let gap = hausdorff(&inner, &outer)?;
        return Ok(BodyEstimate { inner, outer, gap });
    }
    let g = vertex_slack(&outer);
    if g == 0.0 {
        return Ok(BodyEstimate { inner: outer.clone(), outer, gap: 0.0 });
    }
    let shrunk: Vec<Halfspace> = field.halfspaces().iter().map(|h| Halfspace { normal: h.normal, offset: h.offset - g }).collect();
    let inner = halfspace_intersection(&shrunk)?;
    if inner.is_empty() {
        // only the outer polygon is certified; its vertices are within g of the body
        return Ok(BodyEstimate { inner, outer, gap: g });
    }
    let gap = hausdorff(&inner, &outer)?.max(g);
    Ok(BodyEstimate { inner, outer, gap })
}

fn vertex_slack(p: &Polygon2) -> f64 {
    let v = p.vertices();
    let n = v.len();
    if n < 3 {
        return 0.0;
    }
    (0..n)
        .map(|i| {
            let prev = v[i] - v[(i + n - 1) % n];
            let next = v[(i + 1) % n] - v[i];
            let (lp, ln) = (prev.norm(), next.norm());
            let turn = prev.cross(next).atan2(prev.dot(next)).abs();
            lp.max(ln) * (turn / 2.0).sin()
        })
        .fold(0.0, f64::max)
}

/// Weighted sum of support fields on a shared grid; touch points combine with
/// the same weights when every field has them.
pub fn aumann_integral(bodies: &[(f64, SupportField)]) -> Result<SupportField> {
    let Some((_, first)) = bodies.first() else {
        return domain("aumann integral of an empty family");
    };
    let grid = first.grid.clone();
    let n = grid.len();
    let mut values = vec![0.0; n];
    let mut touch = bodies.iter().all(|(_, f)| f.touch.is_some()).then(|| vec![Vec2::ZERO; n]);
    for (w, f) in bodies {
        if f.grid != grid {
            return domain("aumann integral needs a shared direction grid");
        }
        if !(*w >= 0.0) {
            return domain("aumann integral weights must be nonnegative");
        }
        if *w == 0.0 {
            continue;
        }
        for j in 0..n {
            values[j] += w * f.values[j];
        }
        if let (Some(acc), Some(t)) = (touch.as_mut(), f.touch.as_ref()) {
            for j in 0..n {
                acc[j] = acc[j] + t[j] * *w;
            }
        }
    }
    SupportField::new(grid, values, touch)
}
