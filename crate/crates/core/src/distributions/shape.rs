//! Convex bodies with exact projection laws and uniform samplers.

use super::law::{AnalyticLaw, PiecewiseLaw, ScalarLaw};
use super::sample::WeightedSample;
use crate::error::{domain, Error, Result};
use crate::geometry::{Polygon2, Vec2};
use crate::numeric::gl_nodes;
use crate::rng;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;
use std::f64::consts::PI;

/// A convex body. The ellipse is `center + matrix * (unit ball)` for a
/// symmetric positive-definite `matrix`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ConvexShape {
    Polygon { vertices: Vec<[f64; 2]> },
    Box { center: Vec<f64>, half_widths: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
    Ellipse { center: Vec<f64>, matrix: Vec<Vec<f64>> },
    #[serde(rename = "l1ball")]
    L1Ball { center: Vec<f64>, radius: f64 },
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| dot(row, v)).collect()
}

fn cholesky_ok(m: &[Vec<f64>]) -> bool {
    let n = m.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let d = m[i][i] - s;
                if !(d > 0.0) {
                    return false;
                }
                l[i][j] = d.sqrt();
            } else {
                l[i][j] = (m[i][j] - s) / l[j][j];
            }
        }
    }
    true
}

fn determinant(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    det
}

fn unit_ball_volume(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    (h * PI.ln() - ln_gamma(h + 1.0)).exp()
}

impl ConvexShape {
    pub fn polygon(vertices: &[Vec2]) -> Result<Self> {
        let s = ConvexShape::Polygon { vertices: vertices.iter().map(|v| v.to_array()).collect() };
        s.validate()?;
        Ok(s)
    }

    pub fn square(half: f64) -> Self {
        ConvexShape::Box { center: vec![0.0, 0.0], half_widths: vec![half, half] }
    }

    pub fn unit_disk() -> Self {
        ConvexShape::Ball { center: vec![0.0, 0.0], radius: 1.0 }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: ConvexShape = serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).unwrap()
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexShape::Polygon { .. } => 2,
            ConvexShape::Box { center, .. }
            | ConvexShape::Ball { center, .. }
            | ConvexShape::Ellipse { center, .. }
            | ConvexShape::L1Ball { center, .. } => center.len(),
        }
    }

    /// Checks positivity of volume and consistency of dimensions.
    pub fn validate(&self) -> Result<()> {
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        match self {
            ConvexShape::Polygon { vertices } => {
                let p = Polygon2::from_points(&vertices.iter().map(|v| Vec2::from(*v)).collect::<Vec<_>>());
                if !(p.area() > 0.0) {
                    return domain("polygon has zero area");
                }
            }
            ConvexShape::Box { center, half_widths } => {
                if center.is_empty() || half_widths.len() != center.len() || !finite(center) {
                    return domain("box center and half_widths must have equal positive length");
                }
                if half_widths.iter().any(|h| !(*h > 0.0) || !h.is_finite()) {
                    return domain("box half widths must be positive");
                }
            }
            ConvexShape::Ball { center, radius } | ConvexShape::L1Ball { center, radius } => {
                if center.is_empty() || !finite(center) || !(*radius > 0.0) || !radius.is_finite() {
                    return domain("ball needs a finite center and positive radius");
                }
            }
            ConvexShape::Ellipse { center, matrix } => {
                let d = center.len();
                if d == 0 || !finite(center) || matrix.len() != d || matrix.iter().any(|r| r.len() != d || !finite(r)) {
                    return domain("ellipse matrix must be square with the center's dimension");
                }
                for i in 0..d {
                    for j in 0..i {
                        if (matrix[i][j] - matrix[j][i]).abs() > 1e-12 * (matrix[i][j].abs() + matrix[j][i].abs() + 1.0) {
                            return domain("ellipse matrix must be symmetric");
                        }
                    }
                }
                if !cholesky_ok(matrix) {
                    return domain("ellipse matrix must be positive definite");
                }
            }
        }
        Ok(())
    }

    /// The polygon, for planar polygonal shapes.
    pub fn to_polygon(&self) -> Option<Polygon2> {
        match self {
            ConvexShape::Polygon { vertices } => {
                Some(Polygon2::from_points(&vertices.iter().map(|v| Vec2::from(*v)).collect::<Vec<_>>()))
            }
            ConvexShape::Box { center, half_widths } if center.len() == 2 => {
                let (c, h) = (Vec2::new(center[0], center[1]), Vec2::new(half_widths[0], half_widths[1]));
                Some(Polygon2::from_points(&[
                    c + Vec2::new(-h.x, -h.y),
                    c + Vec2::new(h.x, -h.y),
                    c + Vec2::new(h.x, h.y),
                    c + Vec2::new(-h.x, h.y),
                ]))
            }
            ConvexShape::L1Ball { center, radius } if center.len() == 2 => {
                let c = Vec2::new(center[0], center[1]);
                let r = *radius;
                Some(Polygon2::from_points(&[
                    c + Vec2::new(r, 0.0),
                    c + Vec2::new(0.0, r),
                    c + Vec2::new(-r, 0.0),
                    c + Vec2::new(0.0, -r),
                ]))
            }
            _ => None,
        }
    }

    pub fn volume(&self) -> f64 {
        let d = self.dim();
        match self {
            ConvexShape::Polygon { .. } => self.to_polygon().unwrap().area(),
            ConvexShape::Box { half_widths, .. } => half_widths.iter().map(|h| 2.0 * h).product(),
            ConvexShape::Ball { radius, .. } => unit_ball_volume(d) * radius.powi(d as i32),
            ConvexShape::Ellipse { matrix, .. } => unit_ball_volume(d) * determinant(matrix).abs(),
            ConvexShape::L1Ball { radius, .. } => {
                (2.0 * radius).powi(d as i32) / (1..=d).map(|k| k as f64).product::<f64>()
            }
        }
    }

    pub fn barycenter(&self) -> Vec<f64> {
        match self {
            ConvexShape::Polygon { .. } => self.to_polygon().unwrap().centroid().unwrap().to_array().to_vec(),
            ConvexShape::Box { center, .. }
            | ConvexShape::Ball { center, .. }
            | ConvexShape::Ellipse { center, .. }
            | ConvexShape::L1Ball { center, .. } => center.clone(),
        }
    }

    /// Central symmetry about the barycenter, up to `tol` on vertices.
    pub fn is_centrally_symmetric(&self, tol: f64) -> bool {
        match self {
            ConvexShape::Polygon { .. } => {
                let p = self.to_polygon().unwrap();
                let c = p.centroid().unwrap();
                p.vertices().iter().all(|v| {
                    let r = c * 2.0 - *v;
                    p.vertices().iter().any(|w| (r - *w).norm() <= tol)
                })
            }
            _ => true,
        }
    }

    fn unit(&self, u: &[f64]) -> Result<Vec<f64>> {
        if u.len() != self.dim() {
            return domain("direction dimension does not match the shape");
        }
        let n = dot(u, u).sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return domain("direction must be nonzero");
        }
        Ok(u.iter().map(|x| x / n).collect())
    }

    /// Exact law of `<X, u/|u|>` for `X` uniform on the shape.
    pub fn project(&self, u: &[f64]) -> Result<ScalarLaw> {
        self.validate()?;
        let u = self.unit(u)?;
        let d = self.dim();
        match self {
            ConvexShape::Box { center, half_widths } => Ok(AnalyticLaw::box_sum(
                dot(center, &u),
                half_widths.iter().zip(&u).map(|(h, ui)| 2.0 * h * ui.abs()).collect(),
            )),
            ConvexShape::Ball { center, radius } => Ok(ball_marginal(dot(center, &u), *radius, d)),
            ConvexShape::Ellipse { center, matrix } => {
                let mu = mat_vec(matrix, &u);
                Ok(ball_marginal(dot(center, &u), dot(&mu, &mu).sqrt(), d))
            }
            ConvexShape::L1Ball { center, radius } if d == 1 => ScalarLaw::uniform(center[0] - radius, center[0] + radius),
            ConvexShape::Polygon { .. } | ConvexShape::L1Ball { .. } => {
                if d != 2 {
                    return Err(Error::Unsupported("exact l1-ball projection is planar only".into()));
                }
                let p = self.to_polygon().unwrap();
                Ok(ScalarLaw::Piecewise(Slices::new(&p, Vec2::new(u[0], u[1])).law()?))
            }
        }
    }

    /// Planar slicing data in direction `u`, for polygonal shapes.
    pub fn slices(&self, u: Vec2) -> Option<Slices> {
        let p = self.to_polygon()?;
        Some(Slices::new(&p, u.normalized()?))
    }

    /// `n` i.i.d. uniform points with equal weights.
    pub fn sample(&self, n: usize, seed: u64) -> Result<WeightedSample> {
        if n == 0 {
            return domain("sample size must be positive");
        }
        self.validate()?;
        let mut rng = rng::stream(seed, 0);
        let pts = self.draw(&mut rng, n);
        WeightedSample::new(pts, None)
    }

    /// Draw `n` uniform points from the given generator.
    pub fn draw(&self, rng: &mut impl Rng, n: usize) -> Vec<Vec<f64>> {
        let d = self.dim();
        match self {
            ConvexShape::Box { center, half_widths } => (0..n)
                .map(|_| center.iter().zip(half_widths).map(|(c, h)| c + h * (2.0 * rng.random::<f64>() - 1.0)).collect())
                .collect(),
            ConvexShape::Ball { center, radius } => (0..n)
                .map(|_| ball_point(rng, d).iter().zip(center).map(|(y, c)| c + radius * y).collect())
                .collect(),
            ConvexShape::Ellipse { center, matrix } => (0..n)
                .map(|_| {
                    let y = ball_point(rng, d);
                    mat_vec(matrix, &y).iter().zip(center).map(|(a, c)| a + c).collect()
                })
                .collect(),
            ConvexShape::L1Ball { center, radius } => (0..n)
                .map(|_| {
                    let e: Vec<f64> = (0..=d).map(|_| Exp1.sample(rng)).collect();
                    let total: f64 = e.iter().sum();
                    (0..d)
                        .map(|i| {
                            let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                            center[i] + radius * sign * e[i] / total
                        })
                        .collect()
                })
                .collect(),
            ConvexShape::Polygon { .. } => {
                let p = self.to_polygon().unwrap();
                let v = p.vertices();
                let mut cum = Vec::with_capacity(v.len());
                let mut acc = 0.0;
                for i in 1..v.len() - 1 {
                    acc += (v[i] - v[0]).cross(v[i + 1] - v[0]);
                    cum.push(acc);
                }
                (0..n)
                    .map(|_| {
                        let t = rng.random::<f64>() * acc;
                        let k = cum.partition_point(|c| *c <= t).min(cum.len() - 1);
                        let (a, b, c) = (v[0], v[k + 1], v[k + 2]);
                        let (mut r1, mut r2): (f64, f64) = (rng.random(), rng.random());
                        if r1 + r2 > 1.0 {
                            r1 = 1.0 - r1;
                            r2 = 1.0 - r2;
                        }
                        let q = a + (b - a) * r1 + (c - a) * r2;
                        vec![q.x, q.y]
                    })
                    .collect()
            }
        }
    }

    /// Boundary points for drawing (planar shapes).
    pub fn outline(&self, k: usize) -> Vec<Vec2> {
        if let Some(p) = self.to_polygon() {
            return p.vertices().to_vec();
        }
        if self.dim() != 2 {
            return Vec::new();
        }
        let (c, m) = match self {
            ConvexShape::Ball { center, radius } => (center.clone(), vec![vec![*radius, 0.0], vec![0.0, *radius]]),
            ConvexShape::Ellipse { center, matrix } => (center.clone(), matrix.clone()),
            _ => unreachable!(),
        };
        (0..k)
            .map(|i| {
                let u = Vec2::from_angle(i as f64 * 2.0 * PI / k as f64);
                let y = mat_vec(&m, &[u.x, u.y]);
                Vec2::new(c[0] + y[0], c[1] + y[1])
            })
            .collect()
    }
}

fn ball_marginal(center: f64, radius: f64, d: usize) -> ScalarLaw {
    if d == 1 {
        ScalarLaw::Analytic(AnalyticLaw::Uniform { lo: center - radius, hi: center + radius })
    } else {
        ScalarLaw::Analytic(AnalyticLaw::BallMarginal { center, radius, dim: d as u32 })
    }
}

fn ball_point(rng: &mut impl Rng, d: usize) -> Vec<f64> {
    loop {
        let g: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        let n = dot(&g, &g).sqrt();
        if n > 0.0 {
            let r = rng.random::<f64>().powf(1.0 / d as f64);
            return g.iter().map(|x| x * r / n).collect();
        }
    }
}

/// Chord data of a polygon sliced by the lines `<x, u> = s`.
///
/// Between consecutive projected vertices the chord length and the chord
/// midpoint are affine in `s`; each piece stores their end values.
#[derive(Debug, Clone)]
pub struct Slices {
    pub direction: Vec2,
    pub knots: Vec<f64>,
    len_lo: Vec<f64>,
    len_hi: Vec<f64>,
    mid_lo: Vec<Vec2>,
    mid_hi: Vec<Vec2>,
    pub area: f64,
}

fn chord(p: &Polygon2, u: Vec2, s: f64) -> (f64, Vec2) {
    let v = p.vertices();
    let n = v.len();
    let e = u.perp();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        let (da, db) = (a.dot(u) - s, b.dot(u) - s);
        if (da <= 0.0 && db >= 0.0) || (da >= 0.0 && db <= 0.0) {
            let pts: Vec<Vec2> = if da == db { vec![a, b] } else { vec![a + (b - a) * (da / (da - db))] };
            for q in pts {
                let t = q.dot(e);
                lo = lo.min(t);
                hi = hi.max(t);
            }
        }
    }
    if lo > hi {
        return (0.0, u * s);
    }
    (hi - lo, u * s + e * (0.5 * (lo + hi)))
}

impl Slices {
    pub fn new(p: &Polygon2, u: Vec2) -> Self {
        let mut knots: Vec<f64> = p.vertices().iter().map(|v| v.dot(u)).collect();
        knots.sort_by(f64::total_cmp);
        let tol = 1e-12 * p.diameter().max(f64::MIN_POSITIVE);
        knots.dedup_by(|a, b| (*a - *b).abs() <= tol);
        let k = knots.len() - 1;
        let (mut len_lo, mut len_hi, mut mid_lo, mut mid_hi) =
            (Vec::with_capacity(k), Vec::with_capacity(k), Vec::with_capacity(k), Vec::with_capacity(k));
        for i in 0..k {
            let w = knots[i + 1] - knots[i];
            let (l1, m1) = chord(p, u, knots[i] + w / 3.0);
            let (l2, m2) = chord(p, u, knots[i] + 2.0 * w / 3.0);
            len_lo.push((2.0 * l1 - l2).max(0.0));
            len_hi.push((2.0 * l2 - l1).max(0.0));
            mid_lo.push(m1 * 2.0 - m2);
            mid_hi.push(m2 * 2.0 - m1);
        }
        Slices { direction: u, knots, len_lo, len_hi, mid_lo, mid_hi, area: p.area() }
    }

    /// Law of `<X, u>` for `X` uniform on the polygon.
    pub fn law(&self) -> Result<PiecewiseLaw> {
        if self.knots.len() < 2 || !(self.area > 0.0) {
            return domain("degenerate polygon has no projection density");
        }
        let a = self.area;
        PiecewiseLaw::new(
            self.knots.clone(),
            self.len_lo.iter().map(|l| l / a).collect(),
            self.len_hi.iter().map(|l| l / a).collect(),
        )
    }

    /// `E[g(<X,u>) X]`, with `breaks` listing discontinuities of `g`.
    /// Exact for piecewise-constant `g` (the integrand is then quadratic).
    pub fn moment(&self, g: impl Fn(f64) -> f64, breaks: &[f64]) -> Vec2 {
        let mut acc = Vec2::ZERO;
        for i in 0..self.knots.len() - 1 {
            let (x0, x1) = (self.knots[i], self.knots[i + 1]);
            let w = x1 - x0;
            let mut cuts = vec![x0];
            cuts.extend(breaks.iter().copied().filter(|b| *b > x0 && *b < x1));
            cuts.push(x1);
            cuts.sort_by(f64::total_cmp);
            for c in cuts.windows(2) {
                for (s, wt) in gl_nodes(16, c[0], c[1]) {
                    let f = (s - x0) / w;
                    let len = self.len_lo[i] + (self.len_hi[i] - self.len_lo[i]) * f;
                    let mid = self.mid_lo[i] + (self.mid_hi[i] - self.mid_lo[i]) * f;
                    acc = acc + mid * (wt * g(s) * len / self.area);
                }
            }
        }
        acc
    }

    /// The face of the polygon in direction `u` (its midpoint).
    pub fn top_point(&self) -> Vec2 {
        let k = self.knots.len() - 2;
        self.mid_hi[k]
    }
}
