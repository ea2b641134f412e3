use crate::distributions::ScalarLaw;
use crate::error::{domain, Result};
use crate::numeric::gl_nodes;
use crate::risk::avg_quantile;

/// The maximum extension of the average quantile evaluated from its closed
/// form in terms of the base law,
///
/// `m(m-1)/alpha int_0^c t (1-t)^(m-2) e_t dt + m/alpha (1-alpha)^((m-1)/m) c e_c`
/// with `c = 1 - (1-alpha)^(1/m)`, by Gauss-Legendre quadrature between the
/// breakpoints of `t -> t e_t`. Independent of the max-law route.
pub fn alpha_m_direct(law: &ScalarLaw, alpha: f64, m: u32) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) || m == 0 {
        return domain("alpha in (0,1] and m >= 1 required");
    }
    if m == 1 {
        return avg_quantile(law, alpha);
    }
    let mf = m as f64;
    let c = 1.0 - (1.0 - alpha).powf(1.0 / mf);
    let mut knots: Vec<f64> = law.t_knots().into_iter().map(|t| 1.0 - t).filter(|x| *x > 0.0 && *x < c).collect();
    knots.push(0.0);
    knots.push(c);
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let mut integral = 0.0;
    for w in knots.windows(2) {
        for (t, wt) in gl_nodes(64, w[0], w[1]) {
            // t e_t is the upper quantile integral
            integral += wt * (1.0 - t).powi(m as i32 - 2) * law.qi(1.0 - t, 1.0);
        }
    }
    let tail = mf / alpha * (1.0 - alpha).powf((mf - 1.0) / mf) * c * avg_quantile(law, c)?;
    Ok(mf * (mf - 1.0) / alpha * integral + tail)
}
