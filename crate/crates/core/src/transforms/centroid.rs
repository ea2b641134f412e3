use super::{floating_like_body, support_field, Source};
use crate::distributions::ConvexShape;
use crate::error::{domain, Result};
use crate::geometry::{body_from_support, BodyEstimate, DirectionGrid, SupportField, Vec2};
use crate::risk::ExpectationSpec;
use rayon::prelude::*;

/// `E_{p,a}(K)`: support `<x_K,u> + a (E(<X - x_K, u>)_+^p)^(1/p)`.
pub fn centroid_body(shape: &ConvexShape, p: f64, a: f64, grid: &DirectionGrid) -> Result<BodyEstimate> {
    floating_like_body(&Source::Shape(shape.clone()), &ExpectationSpec::OneSided { p, a }, grid)
}

fn require_origin_symmetric(shape: &ConvexShape) -> Result<()> {
    let scale = shape.to_polygon().map(|p| p.diameter()).unwrap_or(1.0).max(1e-300);
    let b = shape.barycenter();
    if !shape.is_centrally_symmetric(1e-9 * scale) || b.iter().any(|c| c.abs() > 1e-9 * scale) {
        return domain("shape must be symmetric about the origin");
    }
    Ok(())
}

/// The classical centroid body `Gamma K = 2 E_{1,1}(K)` of an origin-symmetric
/// shape: support `E|<X,u>|`.
pub fn classical_centroid_body(shape: &ConvexShape, grid: &DirectionGrid) -> Result<BodyEstimate> {
    require_origin_symmetric(shape)?;
    let b = centroid_body(shape, 1.0, 1.0, grid)?;
    Ok(BodyEstimate { inner: b.inner.scale(2.0), outer: b.outer.scale(2.0), gap: 2.0 * b.gap })
}

/// `c_{d,p} = E|<X,u>|^p` for `X` uniform in the unit ball of `R^d`, the
/// constant that makes the unit ball its own `L^p` centroid body.
pub fn lp_centroid_constant(d: usize, p: f64) -> Result<f64> {
    if d == 0 || !(p >= 1.0) {
        return domain("lp centroid constant needs d >= 1 and p >= 1");
    }
    let ball = ConvexShape::Ball { center: vec![0.0; d], radius: 1.0 };
    let mut e = vec![0.0; d];
    e[0] = 1.0;
    let law = ball.project(&e)?;
    // symmetric marginal: E|b|^p = 2 E(b)_+^p
    Ok(2.0 * law.upper_partial_moment(0.0, p))
}

/// The `L^p` centroid body: support `(E|<X,u>|^p / c_{d,p})^(1/p)`.
pub fn lp_centroid_body(shape: &ConvexShape, p: f64, grid: &DirectionGrid) -> Result<BodyEstimate> {
    let c = lp_centroid_constant(2, p)?;
    shape.validate()?;
    let values: Vec<f64> = grid
        .directions()
        .par_iter()
        .map(|u| {
            let law = shape.project(&[u.x, u.y])?;
            let m = law.expect(|s| s.abs().powf(p), &[law.cdf(0.0)]);
            Ok((m / c).powf(1.0 / p))
        })
        .collect::<Result<_>>()?;
    body_from_support(&SupportField::new(grid.clone(), values, None)?)
}

/// Default levels for [`centroid_via_ulam`]: 33 points on `[1/2, 1]` and a
/// coarse sweep below.
pub fn default_ulam_levels() -> Vec<f64> {
    let mut a: Vec<f64> = (0..=32).map(|k| 0.5 + k as f64 / 64.0).collect();
    a.extend((1..10).map(|k| k as f64 / 20.0));
    a
}

/// Centroid body of an origin-symmetric shape from its Ulam floating bodies:
/// support `2 sup_alpha alpha h(E_alpha(K), u)` over `levels`.
pub fn centroid_via_ulam(shape: &ConvexShape, levels: &[f64], grid: &DirectionGrid) -> Result<BodyEstimate> {
    require_origin_symmetric(shape)?;
    if levels.is_empty() || levels.iter().any(|a| !(*a > 0.0 && *a <= 1.0)) {
        return domain("levels must lie in (0,1]");
    }
    let source = Source::Shape(shape.clone());
    let fields: Vec<SupportField> = levels
        .iter()
        .map(|a| support_field(&source, &ExpectationSpec::avg_quantile(*a), grid))
        .collect::<Result<_>>()?;
    let n = grid.len();
    let mut values = vec![f64::NEG_INFINITY; n];
    let mut touch = vec![Vec2::ZERO; n];
    for (a, f) in levels.iter().zip(&fields) {
        let t = f.touch.as_ref().expect("support_field always has touch points");
        for j in 0..n {
            let v = 2.0 * a * f.values[j];
            if v > values[j] {
                values[j] = v;
                touch[j] = t[j] * (2.0 * a);
            }
        }
    }
    body_from_support(&SupportField::new(grid.clone(), values, Some(touch))?)
}

/// The two computations of the expectile body.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectileBodies {
    /// Expectile evaluated in each direction.
    pub direct: BodyEstimate,
    /// Supremum over Ulam floating bodies with the expectile weights.
    pub representation: BodyEstimate,
}

/// Expectile body at level `tau`, by direct evaluation and through
/// `x_K + sup_a c(a) (E_a(K) - x_K)` with `c(a) = a(2tau-1)/(a(2tau-1) + 1-tau)`
/// on `levels` equally spaced levels in `(0,1]`.
pub fn expectile_transform(shape: &ConvexShape, tau: f64, levels: usize, grid: &DirectionGrid) -> Result<ExpectileBodies> {
    if !(0.5..1.0).contains(&tau) {
        return domain("expectile transform needs tau in [1/2,1)");
    }
    if levels == 0 {
        return domain("expectile transform needs at least one level");
    }
    let source = Source::Shape(shape.clone());
    let direct = floating_like_body(&source, &ExpectationSpec::Expectile { tau }, grid)?;
    let xk = source.barycenter();
    let n = grid.len();
    let mut values: Vec<f64> = grid.directions().iter().map(|u| xk.dot(*u)).collect();
    let mut touch = vec![xk; n];
    let k = 2.0 * tau - 1.0;
    for i in 1..=levels {
        let a = i as f64 / levels as f64;
        let c = a * k / (a * k + 1.0 - tau);
        let f = support_field(&source, &ExpectationSpec::avg_quantile(a), grid)?;
        let t = f.touch.as_ref().expect("support_field always has touch points");
        for j in 0..n {
            let u = grid.directions()[j];
            let v = xk.dot(u) + c * (f.values[j] - xk.dot(u));
            if v > values[j] {
                values[j] = v;
                touch[j] = xk + (t[j] - xk) * c;
            }
        }
    }
    let representation = body_from_support(&SupportField::new(grid.clone(), values, Some(touch))?)?;
    Ok(ExpectileBodies { direct, representation })
}
