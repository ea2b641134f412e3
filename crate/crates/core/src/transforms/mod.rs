//! Convex bodies generated by sublinear expectations: floating-like bodies,
//! depth-trimmed regions, Ulam floating bodies, centroid bodies, expectile
//! transforms, expected polytopes and mixtures of average-quantile bodies.

mod centroid;
mod depth;
mod integral;

pub use centroid::*;
pub use depth::*;
pub use integral::*;

#[cfg(test)]
mod tests;

use crate::distributions::{ConvexShape, ScalarLaw, WeightedSample};
use crate::error::{domain, Error, Result};
use crate::geometry::{
    body_from_support, exact_avg_quantile_body, BodyEstimate, DirectionGrid, Polygon2, SupportField, Vec2,
};
use crate::risk::{dual_kernel, dual_weights, evaluate, kusuoka_sup, ExpectationSpec, SpectralMeasure};
use rayon::prelude::*;

/// Largest discrete measure for which average-quantile bodies go through the
/// exact critical-angle sweep instead of the direction grid.
pub const SWEEP_MAX_ATOMS: usize = 200;

/// A planar probability distribution: atoms or the uniform law on a body.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Sample(WeightedSample),
    Shape(ConvexShape),
}

impl From<WeightedSample> for Source {
    fn from(s: WeightedSample) -> Self {
        Source::Sample(s)
    }
}

impl From<ConvexShape> for Source {
    fn from(s: ConvexShape) -> Self {
        Source::Shape(s)
    }
}

impl Source {
    pub fn is_atomic(&self) -> bool {
        matches!(self, Source::Sample(_))
    }

    pub fn barycenter(&self) -> Vec2 {
        let b = match self {
            Source::Sample(s) => s.barycenter(),
            Source::Shape(s) => s.barycenter(),
        };
        Vec2::new(b[0], b[1])
    }

    /// Law of `<X, u>`.
    pub fn project(&self, u: Vec2) -> Result<ScalarLaw> {
        match self {
            Source::Sample(s) => Ok(s.project(&[u.x, u.y])?.into()),
            Source::Shape(s) => s.project(&[u.x, u.y]),
        }
    }

    pub(crate) fn prepare(&self) -> Result<Planar<'_>> {
        match self {
            Source::Sample(s) => {
                let pts = s.points2().ok_or_else(|| Error::Domain("planar sample required".into()))?;
                Ok(Planar::Atoms { pts, weights: s.weights() })
            }
            Source::Shape(shape) => {
                shape.validate()?;
                if shape.dim() != 2 {
                    return Err(Error::Unsupported("planar bodies need a two-dimensional shape".into()));
                }
                match shape {
                    ConvexShape::Ball { center, radius } => Ok(Planar::Round {
                        shape,
                        center: Vec2::new(center[0], center[1]),
                        matrix: [[*radius, 0.0], [0.0, *radius]],
                    }),
                    ConvexShape::Ellipse { center, matrix } => Ok(Planar::Round {
                        shape,
                        center: Vec2::new(center[0], center[1]),
                        matrix: [[matrix[0][0], matrix[0][1]], [matrix[1][0], matrix[1][1]]],
                    }),
                    _ => Ok(Planar::Poly { shape, poly: shape.to_polygon().expect("planar shape has a polygon") }),
                }
            }
        }
    }
}

pub(crate) enum Planar<'a> {
    Atoms { pts: Vec<Vec2>, weights: &'a [f64] },
    Round { shape: &'a ConvexShape, center: Vec2, matrix: [[f64; 2]; 2] },
    Poly { shape: &'a ConvexShape, poly: Polygon2 },
}

impl Planar<'_> {
    pub(crate) fn law(&self, u: Vec2) -> Result<ScalarLaw> {
        match self {
            Planar::Atoms { pts, weights } => {
                Ok(crate::distributions::EmpiricalLaw::new(pts.iter().map(|p| p.dot(u)).collect(), weights.to_vec())?.into())
            }
            Planar::Round { shape, .. } | Planar::Poly { shape, .. } => shape.project(&[u.x, u.y]),
        }
    }

    /// Support value in direction `u` and a boundary point attaining it,
    /// `E[gamma X]` for the maximising dual density `gamma`.
    pub(crate) fn eval(&self, spec: &ExpectationSpec, u: Vec2) -> Result<(f64, Vec2)> {
        match self {
            Planar::Atoms { pts, weights } => {
                let proj: Vec<f64> = pts.iter().map(|p| p.dot(u)).collect();
                let mut idx: Vec<usize> = (0..pts.len()).collect();
                idx.sort_by(|&a, &b| proj[a].total_cmp(&proj[b]));
                let vals: Vec<f64> = idx.iter().map(|&i| proj[i]).collect();
                let probs: Vec<f64> = idx.iter().map(|&i| weights[i]).collect();
                let w = dual_weights(spec, &vals, &probs)?;
                let mut x = Vec2::ZERO;
                let mut h = 0.0;
                for (k, &i) in idx.iter().enumerate() {
                    x = x + pts[i] * w[k];
                    h += w[k] * vals[k];
                }
                Ok((h, x))
            }
            Planar::Round { center, matrix, .. } => {
                let h = evaluate(spec, &self.law(u)?)?;
                let mu = Vec2::new(matrix[0][0] * u.x + matrix[0][1] * u.y, matrix[1][0] * u.x + matrix[1][1] * u.y);
                let mmu = Vec2::new(matrix[0][0] * mu.x + matrix[1][0] * mu.y, matrix[0][1] * mu.x + matrix[1][1] * mu.y);
                let x = *center + mmu * ((h - center.dot(u)) / mu.dot(mu));
                Ok((h, x))
            }
            Planar::Poly { poly, .. } => {
                let law = self.law(u)?;
                let h = evaluate(spec, &law)?;
                if poly.area() <= 0.0 {
                    return Ok((h, poly.support_point(u).unwrap_or(Vec2::ZERO)));
                }
                let slices = crate::distributions::Slices::new(poly, u);
                let kernel = dual_kernel(spec, &law)?;
                let x = slices.moment(|s| kernel.gamma(s), &kernel.breaks) + slices.top_point() * kernel.top_mass;
                // quadrature error is moved off the supporting line, not along it
                Ok((h, x + u * (h - x.dot(u))))
            }
        }
    }
}

/// Support values and boundary points of `E_spec(source)` on `grid`.
pub fn support_field(source: &Source, spec: &ExpectationSpec, grid: &DirectionGrid) -> Result<SupportField> {
    spec.validate()?;
    let planar = source.prepare()?;
    let evals: Vec<(f64, Vec2)> =
        grid.directions().par_iter().map(|u| planar.eval(spec, *u)).collect::<Result<_>>()?;
    let (values, touch) = evals.into_iter().unzip();
    SupportField::new(grid.clone(), values, Some(touch))
}

/// Support values of `E_spec` for a shape of any dimension at the given
/// directions, from exact projection laws.
pub fn support_values(shape: &ConvexShape, spec: &ExpectationSpec, dirs: &[Vec<f64>]) -> Result<Vec<f64>> {
    spec.validate()?;
    dirs.par_iter().map(|u| evaluate(spec, &shape.project(u)?)).collect()
}

/// The floating-like body `E_spec(source)`, sandwiched on `grid`.
///
/// Average-quantile bodies of small discrete measures are computed exactly.
pub fn floating_like_body(source: &Source, spec: &ExpectationSpec, grid: &DirectionGrid) -> Result<BodyEstimate> {
    if let (Source::Sample(s), ExpectationSpec::AvgQuantile { alpha }) = (source, spec) {
        if s.len() <= SWEEP_MAX_ATOMS && s.dim() == 2 {
            spec.validate()?;
            return Ok(BodyEstimate::exact(exact_avg_quantile_body(s, *alpha)?));
        }
    }
    body_from_support(&support_field(source, spec, grid)?)
}

/// The Ulam floating body `M_delta(K)`, equal to the average-quantile body at
/// level `delta / vol(K)`.
pub fn ulam_floating(shape: &ConvexShape, delta: f64, grid: &DirectionGrid) -> Result<BodyEstimate> {
    let vol = shape.volume();
    if !(delta > 0.0 && delta <= vol * (1.0 + 1e-12)) {
        return domain("Ulam floating body needs 0 < delta <= volume");
    }
    let alpha = (delta / vol).min(1.0);
    floating_like_body(&Source::Shape(shape.clone()), &ExpectationSpec::avg_quantile(alpha), grid)
}

/// Body whose support value in each direction is the largest of the spectral
/// mixtures of average quantiles over `measures`.
pub fn kusuoka_body(source: &Source, measures: &[SpectralMeasure], grid: &DirectionGrid) -> Result<BodyEstimate> {
    if measures.is_empty() {
        return domain("kusuoka body needs at least one measure");
    }
    for nu in measures {
        nu.validate()?;
    }
    let planar = source.prepare()?;
    let evals: Vec<(f64, Vec2)> = grid
        .directions()
        .par_iter()
        .map(|u| {
            let law = planar.law(*u)?;
            let mut best = (f64::NEG_INFINITY, 0);
            for (k, nu) in measures.iter().enumerate() {
                let v = kusuoka_sup(&law, std::slice::from_ref(nu))?;
                if v > best.0 {
                    best = (v, k);
                }
            }
            planar.eval(&ExpectationSpec::Spectral(measures[best.1].clone()), *u)
        })
        .collect::<Result<_>>()?;
    let (values, touch) = evals.into_iter().unzip();
    body_from_support(&SupportField::new(grid.clone(), values, Some(touch))?)
}
