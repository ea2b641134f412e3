//! Planar points, convex polygons and the basic polygon algebra.

use crate::error::{domain, Error, Result};
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c, s)
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn normalized(self) -> Option<Vec2> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self * (1.0 / n))
    }

    /// Counter-clockwise rotation by a right angle.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn to_array(self) -> [f64; 2] {
        [self.x, self.y]
    }
}

impl From<[f64; 2]> for Vec2 {
    fn from(a: [f64; 2]) -> Self {
        Vec2::new(a[0], a[1])
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// A convex polygon with counter-clockwise vertices. The vertex list may have
/// zero (empty set), one (a point) or two (a segment) entries.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polygon2 {
    vertices: Vec<Vec2>,
}

fn scale_of(points: &[Vec2]) -> f64 {
    points.iter().fold(0.0f64, |m, p| m.max(p.x.abs()).max(p.y.abs()))
}

/// Convex hull by the monotone chain; collinear and duplicate points are dropped.
pub fn convex_hull(points: &[Vec2]) -> Polygon2 {
    let mut pts: Vec<Vec2> = points.iter().copied().filter(|p| p.x.is_finite() && p.y.is_finite()).collect();
    if pts.is_empty() {
        return Polygon2::empty();
    }
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    let scale = scale_of(&pts).max(f64::MIN_POSITIVE);
    let same = 1e-13 * scale;
    pts.dedup_by(|a, b| (a.x - b.x).abs() <= same && (a.y - b.y).abs() <= same);
    if pts.len() <= 2 {
        return Polygon2 { vertices: pts };
    }
    let tol = 1e-12 * scale * scale;
    let mut hull: Vec<Vec2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Vec2>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                if (b - a).cross(p - a) <= tol {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        hull.pop();
    }
    if hull.len() < 3 {
        // all points collinear: keep the extreme pair
        let (a, b) = (pts[0], *pts.last().unwrap());
        return Polygon2 { vertices: vec![a, b] };
    }
    Polygon2 { vertices: hull }
}

impl Polygon2 {
    pub fn empty() -> Self {
        Self { vertices: Vec::new() }
    }

    pub fn point(p: Vec2) -> Self {
        Self { vertices: vec![p] }
    }

    /// Hull of the given vertices (order irrelevant).
    pub fn from_points(points: &[Vec2]) -> Self {
        convex_hull(points)
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// True for a polygon with interior.
    pub fn is_proper(&self) -> bool {
        self.vertices.len() >= 3
    }

    pub fn support(&self, u: Vec2) -> f64 {
        self.vertices.iter().map(|v| v.dot(u)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// A vertex attaining the support value in direction `u`.
    pub fn support_point(&self, u: Vec2) -> Option<Vec2> {
        self.vertices.iter().copied().max_by(|a, b| a.dot(u).total_cmp(&b.dot(u)))
    }

    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        if n < 3 {
            return 0.0;
        }
        0.5 * (0..n).map(|i| self.vertices[i].cross(self.vertices[(i + 1) % n])).sum::<f64>()
    }

    /// Centroid of the region (of the segment or point when degenerate).
    pub fn centroid(&self) -> Option<Vec2> {
        let n = self.vertices.len();
        match n {
            0 => None,
            1 | 2 => Some(self.vertices.iter().fold(Vec2::ZERO, |s, v| s + *v) * (1.0 / n as f64)),
            _ => {
                let o = self.vertices[0];
                let mut acc = Vec2::ZERO;
                let mut area = 0.0;
                for i in 1..n - 1 {
                    let (a, b) = (self.vertices[i] - o, self.vertices[i + 1] - o);
                    let w = a.cross(b);
                    area += w;
                    acc = acc + (a + b) * w;
                }
                Some(o + acc * (1.0 / (3.0 * area)))
            }
        }
    }

    pub fn diameter(&self) -> f64 {
        let v = &self.vertices;
        let mut d: f64 = 0.0;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                d = d.max((v[i] - v[j]).norm());
            }
        }
        d
    }

    /// Edges as outward unit normal and offset, for proper polygons.
    pub fn halfspaces(&self) -> Vec<Halfspace> {
        let n = self.vertices.len();
        if n < 3 {
            return Vec::new();
        }
        (0..n)
            .filter_map(|i| {
                let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
                let normal = (b - a).perp().neg().normalized()?;
                Some(Halfspace { normal, offset: normal.dot(a) })
            })
            .collect()
    }

    pub fn map(&self, f: impl Fn(Vec2) -> Vec2) -> Polygon2 {
        convex_hull(&self.vertices.iter().map(|v| f(*v)).collect::<Vec<_>>())
    }

    pub fn translate(&self, t: Vec2) -> Polygon2 {
        Polygon2 { vertices: self.vertices.iter().map(|v| *v + t).collect() }
    }

    pub fn scale(&self, c: f64) -> Polygon2 {
        self.map(|v| v * c)
    }

    /// Euclidean distance from `p` to the polygon (zero inside).
    pub fn distance_to(&self, p: Vec2) -> f64 {
        let v = &self.vertices;
        match v.len() {
            0 => f64::INFINITY,
            1 => (p - v[0]).norm(),
            2 => segment_distance(p, v[0], v[1]),
            n => {
                let inside = (0..n).all(|i| (v[(i + 1) % n] - v[i]).cross(p - v[i]) >= 0.0);
                if inside {
                    0.0
                } else {
                    (0..n).map(|i| segment_distance(p, v[i], v[(i + 1) % n])).fold(f64::INFINITY, f64::min)
                }
            }
        }
    }
}

fn segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let d = b - a;
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).dot(d) / len2).clamp(0.0, 1.0);
    (p - (a + d * t)).norm()
}

/// The closed halfplane `{x : <x, normal> <= offset}` with a unit normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Halfspace {
    pub normal: Vec2,
    pub offset: f64,
}

impl Halfspace {
    /// Normalises `normal`; fails on a zero normal.
    pub fn new(normal: Vec2, offset: f64) -> Result<Self> {
        let n = normal.norm();
        match normal.normalized() {
            Some(u) => Ok(Self { normal: u, offset: offset / n }),
            None => domain("halfspace normal must be nonzero"),
        }
    }

    fn line_point(&self) -> Vec2 {
        self.normal * self.offset
    }

    fn intersect(&self, o: &Halfspace) -> Vec2 {
        let det = self.normal.cross(o.normal);
        Vec2::new(
            (self.offset * o.normal.y - o.offset * self.normal.y) / det,
            (self.normal.x * o.offset - o.normal.x * self.offset) / det,
        )
    }
}

/// Intersection of halfplanes. Returns the (possibly empty or degenerate)
/// polygon, or `Error::Unbounded` when the intersection is nonempty and unbounded.
pub fn halfspace_intersection(halfspaces: &[Halfspace]) -> Result<Polygon2> {
    if halfspaces.iter().any(|h| !h.offset.is_finite() && h.offset < 0.0) {
        return Ok(Polygon2::empty());
    }
    let finite: Vec<Halfspace> = halfspaces.iter().copied().filter(|h| h.offset.is_finite()).collect();
    let scale = finite.iter().fold(1.0f64, |m, h| m.max(h.offset.abs()));
    let big = 1e6 * scale;
    let eps = 1e-12 * scale;
    let n_real = finite.len();
    let mut hs = finite;
    for u in [Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0), Vec2::new(-1.0, 0.0), Vec2::new(0.0, -1.0)] {
        hs.push(Halfspace { normal: u, offset: big });
    }
    let mut order: Vec<usize> = (0..hs.len()).collect();
    let dir = |h: &Halfspace| h.normal.perp().neg();
    order.sort_by(|&a, &b| dir(&hs[a]).angle().total_cmp(&dir(&hs[b]).angle()));
    let out = |h: &Halfspace, p: Vec2| h.normal.dot(p) - h.offset > eps;

    let mut dq: std::collections::VecDeque<usize> = std::collections::VecDeque::new();
    for &i in &order {
        let h = hs[i];
        while dq.len() > 1 && out(&h, hs[dq[dq.len() - 1]].intersect(&hs[dq[dq.len() - 2]])) {
            dq.pop_back();
        }
        while dq.len() > 1 && out(&h, hs[dq[0]].intersect(&hs[dq[1]])) {
            dq.pop_front();
        }
        if let Some(&last) = dq.back() {
            let l = hs[last];
            if h.normal.cross(l.normal).abs() < 1e-12 {
                if h.normal.dot(l.normal) < 0.0 {
                    return Ok(Polygon2::empty());
                }
                if out(&h, l.line_point()) {
                    dq.pop_back();
                } else {
                    continue;
                }
            }
        }
        dq.push_back(i);
    }
    while dq.len() > 2 && out(&hs[dq[0]], hs[dq[dq.len() - 1]].intersect(&hs[dq[dq.len() - 2]])) {
        dq.pop_back();
    }
    while dq.len() > 2 && out(&hs[dq[dq.len() - 1]], hs[dq[0]].intersect(&hs[dq[1]])) {
        dq.pop_front();
    }
    if dq.len() < 3 {
        return Ok(Polygon2::empty());
    }
    let k = dq.len();
    let pts: Vec<Vec2> = (0..k).map(|j| hs[dq[j]].intersect(&hs[dq[(j + 1) % k]])).collect();
    // a deque of lines whose consecutive intersections violate a constraint is empty
    if pts.iter().any(|p| hs[..n_real].iter().any(|h| h.normal.dot(*p) - h.offset > 1e-9 * scale)) {
        return Ok(Polygon2::empty());
    }
    if dq.iter().any(|&i| i >= n_real) {
        return Err(Error::Unbounded);
    }
    Ok(convex_hull(&pts))
}

/// Hausdorff distance between nonempty polygons.
pub fn hausdorff(p: &Polygon2, q: &Polygon2) -> Result<f64> {
    if p.is_empty() || q.is_empty() {
        return domain("hausdorff distance of an empty polygon");
    }
    let directed = |a: &Polygon2, b: &Polygon2| a.vertices.iter().map(|v| b.distance_to(*v)).fold(0.0, f64::max);
    Ok(directed(p, q).max(directed(q, p)))
}

/// Minkowski sum by merging edge sequences.
pub fn minkowski_sum(p: &Polygon2, q: &Polygon2) -> Polygon2 {
    if p.is_empty() || q.is_empty() {
        return Polygon2::empty();
    }
    if !p.is_proper() || !q.is_proper() {
        let pts: Vec<Vec2> = p.vertices.iter().flat_map(|a| q.vertices.iter().map(move |b| *a + *b)).collect();
        return convex_hull(&pts);
    }
    let start = |v: &[Vec2]| {
        (0..v.len())
            .min_by(|&i, &j| v[i].y.total_cmp(&v[j].y).then(v[i].x.total_cmp(&v[j].x)))
            .unwrap()
    };
    let (a, b) = (&p.vertices, &q.vertices);
    let (sa, sb) = (start(a), start(b));
    let (na, nb) = (a.len(), b.len());
    let edge = |v: &[Vec2], s: usize, k: usize| v[(s + k + 1) % v.len()] - v[(s + k) % v.len()];
    let mut out = Vec::with_capacity(na + nb);
    let (mut i, mut j) = (0, 0);
    let mut cur = a[sa] + b[sb];
    while i < na || j < nb {
        out.push(cur);
        let step = if i == na {
            1
        } else if j == nb {
            -1
        } else {
            let c = edge(a, sa, i).cross(edge(b, sb, j));
            if c > 0.0 {
                -1
            } else if c < 0.0 {
                1
            } else {
                0
            }
        };
        match step {
            -1 => {
                cur = cur + edge(a, sa, i);
                i += 1;
            }
            1 => {
                cur = cur + edge(b, sb, j);
                j += 1;
            }
            _ => {
                cur = cur + edge(a, sa, i) + edge(b, sb, j);
                i += 1;
                j += 1;
            }
        }
    }
    convex_hull(&out)
}

/// Polar body `{y : <x, y> <= 1 for all x in P}`; the origin must be interior.
pub fn polar(p: &Polygon2) -> Result<Polygon2> {
    if !p.is_proper() {
        return domain("polar needs a polygon with interior");
    }
    let tol = 1e-12 * p.diameter();
    let hs = p.halfspaces();
    if hs.iter().any(|h| h.offset <= tol) {
        return domain("origin is not interior to the polygon");
    }
    Ok(convex_hull(&hs.iter().map(|h| h.normal * (1.0 / h.offset)).collect::<Vec<_>>()))
}

/// True when every vertex of `q` lies in `p` up to `tol`.
pub fn contains(p: &Polygon2, q: &Polygon2, tol: f64) -> bool {
    if q.is_empty() {
        return true;
    }
    if p.is_empty() {
        return false;
    }
    if p.is_proper() {
        let hs = p.halfspaces();
        q.vertices.iter().all(|v| hs.iter().all(|h| h.normal.dot(*v) - h.offset <= tol))
    } else {
        q.vertices.iter().all(|v| p.distance_to(*v) <= tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(r: f64) -> Polygon2 {
        Polygon2::from_points(&[
            Vec2::new(-r, -r),
            Vec2::new(r, -r),
            Vec2::new(r, r),
            Vec2::new(-r, r),
        ])
    }

    #[test]
    fn hull_of_square_with_interior_and_collinear_points() {
        let mut pts = square(1.0).vertices().to_vec();
        pts.push(Vec2::new(0.0, 0.0));
        pts.push(Vec2::new(1.0, 0.0));
        let h = convex_hull(&pts);
        assert_eq!(h.len(), 4);
        assert!((h.area() - 4.0).abs() < 1e-15);
        assert_eq!(convex_hull(&[Vec2::new(1.0, 2.0)]).len(), 1);
    }

    #[test]
    fn axis_halfspaces_give_square() {
        let hs: Vec<Halfspace> = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)]
            .iter()
            .map(|&(x, y)| Halfspace::new(Vec2::new(x, y), 1.0).unwrap())
            .collect();
        let p = halfspace_intersection(&hs).unwrap();
        assert!(hausdorff(&p, &square(1.0)).unwrap() < 1e-14);
    }

    #[test]
    fn circumscribed_360_gon() {
        let hs: Vec<Halfspace> = (0..360)
            .map(|k| Halfspace::new(Vec2::from_angle(k as f64 * std::f64::consts::TAU / 360.0), 1.0).unwrap())
            .collect();
        let p = halfspace_intersection(&hs).unwrap();
        assert_eq!(p.len(), 360);
        let worst = p.vertices().iter().map(|v| v.norm() - 1.0).fold(0.0, f64::max);
        let bound = 1.0 / (std::f64::consts::PI / 360.0).cos() - 1.0;
        assert!(worst <= bound + 1e-14);
    }

    #[test]
    fn contradictory_and_unbounded() {
        let h = |x: f64, y: f64, c: f64| Halfspace::new(Vec2::new(x, y), c).unwrap();
        let empty = halfspace_intersection(&[h(1.0, 0.0, -1.0), h(-1.0, 0.0, -1.0), h(0.0, 1.0, 1.0), h(0.0, -1.0, 1.0)]);
        assert!(empty.unwrap().is_empty());
        let open = halfspace_intersection(&[h(1.0, 0.0, 1.0), h(0.0, 1.0, 1.0)]);
        assert_eq!(open, Err(Error::Unbounded));
    }

    #[test]
    fn hausdorff_examples() {
        let s = square(1.0);
        assert_eq!(hausdorff(&s, &s).unwrap(), 0.0);
        let d = hausdorff(&s, &square(0.9)).unwrap();
        assert!((d - 0.1 * 2f64.sqrt()).abs() < 1e-14);
        let t = hausdorff(&s, &s.translate(Vec2::new(0.3, 0.0))).unwrap();
        assert!((t - 0.3).abs() < 1e-14);
    }

    #[test]
    fn minkowski_examples() {
        let s = square(1.0);
        let sum = minkowski_sum(&s, &s);
        assert!(hausdorff(&sum, &square(2.0)).unwrap() < 1e-14);
        let shifted = minkowski_sum(&s, &Polygon2::point(Vec2::new(1.0, 2.0)));
        assert!(hausdorff(&shifted, &s.translate(Vec2::new(1.0, 2.0))).unwrap() < 1e-14);
        let a = Polygon2::from_points(&[Vec2::new(-1.0, 0.0), Vec2::new(1.0, 0.0)]);
        let b = Polygon2::from_points(&[Vec2::new(0.0, -1.0), Vec2::new(0.0, 1.0)]);
        assert!(hausdorff(&minkowski_sum(&a, &b), &s).unwrap() < 1e-14);
    }

    #[test]
    fn polar_of_square_is_cross_polytope() {
        let cross = Polygon2::from_points(&[
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(-1.0, 0.0),
            Vec2::new(0.0, -1.0),
        ]);
        let p = polar(&square(1.0)).unwrap();
        assert!(hausdorff(&p, &cross).unwrap() < 1e-14);
        let half = polar(&square(2.0)).unwrap();
        assert!(hausdorff(&half, &cross.scale(0.5)).unwrap() < 1e-14);
        assert!(polar(&square(1.0).translate(Vec2::new(2.0, 0.0))).is_err());
    }

    #[test]
    fn containment_examples() {
        let s = square(1.0);
        assert!(contains(&s, &s.scale(0.99), 0.0));
        assert!(!contains(&s, &s.translate(Vec2::new(0.5, 0.0)), 1e-9));
        assert!(contains(&s, &s, 1e-12));
    }
}
