use super::spec::{ExpectationSpec, SpectralMeasure};
use crate::distributions::{max_law, EmpiricalLaw, ScalarLaw};
use crate::error::{domain, Error, Result};
use crate::numeric::{bisect, de_piecewise};

/// `(1/alpha) int_{1-alpha}^1 q_t dt`.
pub fn avg_quantile(law: &ScalarLaw, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return domain(format!("alpha = {alpha} outside (0,1]"));
    }
    if alpha == 1.0 {
        return Ok(law.mean());
    }
    Ok(law.qi(1.0 - alpha, 1.0) / alpha)
}

/// Average quantile of equally weighted values, by selection instead of sorting.
/// Reorders `values`.
pub fn avg_quantile_equal_weights(values: &mut [f64], alpha: f64) -> Result<f64> {
    let n = values.len();
    if n == 0 || !(alpha > 0.0 && alpha <= 1.0) {
        return domain("avg_quantile_equal_weights needs values and alpha in (0,1]");
    }
    let k = n as f64 * alpha;
    let m = (k.ceil() as usize).clamp(1, n);
    let pivot = n - m;
    values.select_nth_unstable_by(pivot, f64::total_cmp);
    let top: f64 = values[pivot..].iter().sum();
    Ok((top - (m as f64 - k) * values[pivot]) / k)
}

/// `int e_alpha nu(d alpha)`.
pub fn spectral_value(law: &ScalarLaw, nu: &SpectralMeasure) -> Result<f64> {
    nu.validate()?;
    let mut total = 0.0;
    for &(a, m) in &nu.atoms {
        if m > 0.0 {
            total += m * avg_quantile(law, a)?;
        }
    }
    if nu.density.is_empty() {
        return Ok(total);
    }
    match law {
        ScalarLaw::Empirical(e) => {
            // alpha * e_alpha = QI(1 - alpha, 1) is affine between the levels 1 - C_i
            let mut levels: Vec<f64> = e.cumulative().iter().map(|c| 1.0 - c).filter(|x| *x > 0.0).collect();
            levels.push(0.0);
            levels.push(1.0);
            levels.sort_by(f64::total_cmp);
            levels.dedup();
            for w in levels.windows(2) {
                let (x, y) = (w[0], w[1]);
                let (fx, fy) = (law.qi(1.0 - x, 1.0), law.qi(1.0 - y, 1.0));
                let slope = (fy - fx) / (y - x);
                let icpt = fx - slope * x;
                for p in &nu.density {
                    // icpt vanishes on the top piece, where the log moment diverges
                    if icpt != 0.0 {
                        total += icpt * p.moment(-1, x, y);
                    }
                    total += slope * p.moment(0, x, y);
                }
            }
            Ok(total)
        }
        _ => {
            let mut knots: Vec<f64> = law.t_knots().into_iter().map(|t| 1.0 - t).collect();
            for p in &nu.density {
                knots.push(p.lo);
                knots.push(p.hi);
            }
            knots.sort_by(f64::total_cmp);
            knots.dedup();
            let dens = |a: f64| nu.density.iter().filter(|p| a > p.lo && a <= p.hi).map(|p| p.eval(a)).sum::<f64>();
            let v = de_piecewise(&knots, 1e-12, |a| {
                if a <= 0.0 {
                    0.0
                } else {
                    law.qi(1.0 - a, 1.0) / a * dens(a)
                }
            });
            Ok(total + v)
        }
    }
}

/// `int_0^1 q_{1-t} phi(t) dt` with `phi` the spectral function of `nu`.
/// Empirical laws are summed exactly; others use quadrature.
pub fn spectral_value_via_function(law: &ScalarLaw, nu: &SpectralMeasure) -> Result<f64> {
    nu.validate()?;
    let phi = nu.spectral_function();
    match law {
        ScalarLaw::Empirical(e) => {
            let mut prev = 0.0;
            let mut total = 0.0;
            for (v, c) in e.values().iter().zip(e.cumulative()) {
                total += v * (phi.integral(1.0 - prev) - phi.integral(1.0 - c));
                prev = *c;
            }
            Ok(total)
        }
        _ => {
            let mut knots = law.t_knots();
            knots.extend(nu.levels().iter().map(|a| 1.0 - a));
            knots.sort_by(f64::total_cmp);
            knots.dedup();
            let atoms = de_piecewise(&knots, 1e-12, |s| law.quantile_unchecked(s) * phi.eval(1.0 - s));
            Ok(atoms)
        }
    }
}

/// `E beta + a (E (beta - E beta)_+^p)^(1/p)`.
pub fn one_sided_moment(law: &ScalarLaw, p: f64, a: f64) -> Result<f64> {
    ExpectationSpec::OneSided { p, a }.validate()?;
    let m = law.mean();
    if a == 0.0 {
        return Ok(m);
    }
    Ok(m + a * law.upper_partial_moment(m, p).powf(1.0 / p))
}

/// Root `x` of `tau E(beta - x)_+ = (1 - tau) E(x - beta)_+`.
pub fn expectile(law: &ScalarLaw, tau: f64) -> Result<f64> {
    ExpectationSpec::Expectile { tau }.validate()?;
    let m = law.mean();
    if tau == 0.5 {
        return Ok(m);
    }
    let (lo, hi) = (law.ess_inf(), law.ess_sup());
    if !(hi > lo) {
        return Ok(lo);
    }
    if !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Numerical("expectile bracket is not finite".into()));
    }
    let g = |x: f64| (2.0 * tau - 1.0) * law.upper_partial_moment(x, 1.0) - (1.0 - tau) * (x - m);
    Ok(bisect(lo, hi, g))
}

pub fn ess_sup(law: &ScalarLaw) -> f64 {
    law.ess_sup()
}

/// Dispatch on the expectation type.
pub fn evaluate(spec: &ExpectationSpec, law: &ScalarLaw) -> Result<f64> {
    spec.validate()?;
    eval_unchecked(spec, law)
}

fn eval_unchecked(spec: &ExpectationSpec, law: &ScalarLaw) -> Result<f64> {
    match spec {
        ExpectationSpec::Mean => Ok(law.mean()),
        ExpectationSpec::AvgQuantile { alpha } => avg_quantile(law, *alpha),
        ExpectationSpec::Spectral(nu) => spectral_value(law, nu),
        ExpectationSpec::OneSided { p, a } => one_sided_moment(law, *p, *a),
        ExpectationSpec::Expectile { tau } => expectile(law, *tau),
        ExpectationSpec::MaxExt { base, m } => eval_unchecked(base, &max_law(law, *m)?),
        ExpectationSpec::EssSup => Ok(law.ess_sup()),
    }
}

/// Largest spectral value over a family of measures.
pub fn kusuoka_sup(law: &ScalarLaw, measures: &[SpectralMeasure]) -> Result<f64> {
    if measures.is_empty() {
        return domain("kusuoka_sup needs at least one measure");
    }
    let mut best = f64::NEG_INFINITY;
    for nu in measures {
        best = best.max(spectral_value(law, nu)?);
    }
    Ok(best)
}

/// The family `(1 - a t) delta_1 + a t delta_t`, `t` on a grid of `(0,1]`,
/// whose supremum is the one-sided first moment.
pub fn one_sided_family(a: f64, n: usize) -> Vec<SpectralMeasure> {
    (1..=n)
        .map(|k| {
            let t = k as f64 / n as f64;
            SpectralMeasure::point(1.0).mix(1.0 - a * t, &SpectralMeasure::point(t))
        })
        .collect()
}

/// The family `(1-t) delta_1 + t delta_{(1-tau)t / ((2tau-1)(1-t))}`, `t` on a
/// grid of `(0, 2 - 1/tau]`, whose supremum is the expectile.
pub fn expectile_family(tau: f64, n: usize) -> Vec<SpectralMeasure> {
    let top = 2.0 - 1.0 / tau;
    (1..=n)
        .filter_map(|k| {
            let t = top * k as f64 / n as f64;
            let level = (1.0 - tau) * t / ((2.0 * tau - 1.0) * (1.0 - t));
            (level > 0.0 && level <= 1.0 + 1e-12)
                .then(|| SpectralMeasure::point(1.0).mix(1.0 - t, &SpectralMeasure::point(level.min(1.0))))
        })
        .collect()
}

/// `inf{lambda > 0 : E psi(beta / lambda) <= 1}` for convex `psi` with `psi(0) = 0`.
pub fn orlicz_norm(law: &ScalarLaw, psi: impl Fn(f64) -> f64) -> Result<f64> {
    let phi = |lam: f64| law.expect(|s| psi(s / lam), &[]);
    let mut hi = 1.0;
    let mut steps = 0;
    while !(phi(hi) <= 1.0) {
        hi *= 2.0;
        steps += 1;
        if steps > 1100 {
            return domain("orlicz norm: expectation stays above 1");
        }
    }
    let mut lo = hi;
    while phi(lo) <= 1.0 {
        lo /= 2.0;
        if lo < 1e-300 {
            return Ok(0.0);
        }
    }
    // phi(lo) > 1 >= phi(hi)
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || (hi - lo) <= 1e-15 * hi {
            break;
        }
        if phi(mid) <= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `e(max(beta_1, ..., beta_N))` with `N` geometric with parameter `lambda`,
/// truncating the series once its mass exceeds `1 - 1e-9`.
pub fn geometric_max_extension(spec: &ExpectationSpec, law: &EmpiricalLaw, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return domain("lambda outside (0,1]");
    }
    let mut cum = vec![0.0; law.len()];
    let mut mass = 0.0;
    let mut k = 1;
    while mass < 1.0 - 1e-9 {
        let pk = lambda * (1.0 - lambda).powi(k - 1);
        for (c, base) in cum.iter_mut().zip(law.cumulative()) {
            *c += pk * base.powi(k);
        }
        mass += pk;
        k += 1;
    }
    let n = cum.len();
    cum[n - 1] = mass;
    let mut weights = Vec::with_capacity(n);
    let mut prev = 0.0;
    for c in &cum {
        weights.push((c - prev) / mass);
        prev = *c;
    }
    let keep: Vec<(f64, f64)> = law.values().iter().copied().zip(weights).filter(|x| x.1 > 0.0).collect();
    let total: f64 = keep.iter().map(|x| x.1).sum();
    let mixed = EmpiricalLaw::new(keep.iter().map(|x| x.0).collect(), keep.iter().map(|x| x.1 / total).collect())?;
    evaluate(spec, &mixed.into())
}
