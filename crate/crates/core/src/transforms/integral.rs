use super::{support_field, Source};
use crate::distributions::ScalarLaw;
use crate::error::{domain, Result};
use crate::geometry::{aumann_integral, body_from_support, BodyEstimate, DirectionGrid, Polygon2, SupportField};
use crate::numeric::{de_piecewise, gl_composite};
use crate::risk::ExpectationSpec;

/// Aumann integral `int E_a(source) nu(da)` for a density `nu` on `(0,1)`,
/// on composite Gauss-Legendre grids doubled from 64 nodes until the support
/// values move by less than `tol` (at most 1024 nodes).
pub fn avg_quantile_integral(
    source: &Source,
    density: impl Fn(f64) -> f64 + Sync,
    grid: &DirectionGrid,
    tol: f64,
) -> Result<SupportField> {
    let field = |panels: usize| -> Result<SupportField> {
        let parts: Vec<(f64, SupportField)> = gl_composite(panels, 0.0, 1.0)
            .into_iter()
            .map(|(a, w)| Ok((w * density(a), support_field(source, &ExpectationSpec::avg_quantile(a), grid)?)))
            .collect::<Result<_>>()?;
        aumann_integral(&parts)
    };
    let mut panels = 1;
    let mut cur = field(panels)?;
    while panels < 16 {
        panels *= 2;
        let next = field(panels)?;
        let change = cur.values.iter().zip(&next.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        cur = next;
        if change < tol {
            break;
        }
    }
    Ok(cur)
}

/// Expected convex hull of `m` independent points from `source`, as the
/// integral of average-quantile bodies against `m(m-1) a (1-a)^(m-2) da`.
pub fn expected_polytope(source: &Source, m: u32, grid: &DirectionGrid) -> Result<BodyEstimate> {
    if m == 0 {
        return domain("expected polytope needs m >= 1");
    }
    if m == 1 {
        return Ok(BodyEstimate::exact(Polygon2::point(source.barycenter())));
    }
    let mf = m as f64;
    let nu = move |a: f64| mf * (mf - 1.0) * a * (1.0 - a).powi(m as i32 - 2);
    body_from_support(&avg_quantile_integral(source, nu, grid, 1e-8)?)
}

/// `m(c+1) int_0^1 q_s s^((c+1)m - 1) ds`: the expected maximum of `(c+1)m`
/// copies, extended to non-integer counts.
pub fn max_extension_spectral_family(law: &ScalarLaw, c: f64, m: u32) -> Result<f64> {
    if !(c >= 0.0) || m == 0 {
        return domain("fingerprint needs c >= 0 and m >= 1");
    }
    let k = (c + 1.0) * m as f64;
    if let Some(e) = law.as_empirical() {
        let mut prev = 0.0;
        return Ok(e
            .values()
            .iter()
            .zip(e.cumulative())
            .map(|(v, cum)| {
                let w = cum.powf(k) - prev;
                prev = cum.powf(k);
                v * w
            })
            .sum());
    }
    Ok(de_piecewise(&law.t_knots(), 1e-13, |s| law.quantile_unchecked(s) * k * s.powf(k - 1.0)))
}
