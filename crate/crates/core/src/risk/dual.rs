//! Maximising dual densities: for `e(beta) = sup E[gamma beta]`, the density
//! `gamma` attaining the supremum, for discrete and continuous laws.

use super::eval::expectile;
use super::spec::ExpectationSpec;
use crate::distributions::{max_law, EmpiricalLaw, ScalarLaw};
use crate::error::{domain, Result};

/// A maximising dual density paired with the atoms of a discrete law.
#[derive(Debug, Clone, PartialEq)]
pub struct DualWitness {
    /// `gamma_i`, one per atom.
    pub gamma: Vec<f64>,
    /// `p_i`, one per atom.
    pub probs: Vec<f64>,
    /// `sum gamma_i p_i v_i`.
    pub value: f64,
}

impl DualWitness {
    pub fn normalisation_error(&self) -> f64 {
        (self.gamma.iter().zip(&self.probs).map(|(g, p)| g * p).sum::<f64>() - 1.0).abs()
    }
}

fn cumulative(probs: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut c: Vec<f64> = probs
        .iter()
        .map(|p| {
            acc += p;
            acc
        })
        .collect();
    if let Some(last) = c.last_mut() {
        *last = 1.0;
    }
    c
}

/// Weights `w_i = p_i gamma_i` of a maximising dual density for atoms given in
/// ascending order (ties allowed). `sum w_i v_i` equals the expectation.
pub fn dual_weights(spec: &ExpectationSpec, values: &[f64], probs: &[f64]) -> Result<Vec<f64>> {
    if values.len() != probs.len() || values.is_empty() {
        return domain("dual weights need matching nonempty atoms");
    }
    let n = values.len();
    Ok(match spec {
        ExpectationSpec::Mean => probs.to_vec(),
        ExpectationSpec::EssSup => {
            let mut w = vec![0.0; n];
            w[n - 1] = 1.0;
            w
        }
        ExpectationSpec::AvgQuantile { alpha } => {
            let mut w = vec![0.0; n];
            let mut rem = *alpha;
            for i in (0..n).rev() {
                if rem <= 0.0 {
                    break;
                }
                let take = probs[i].min(rem);
                w[i] = take / alpha;
                rem -= take;
            }
            w
        }
        ExpectationSpec::Spectral(nu) => {
            let phi = nu.spectral_function();
            let mut prev = 0.0;
            cumulative(probs)
                .into_iter()
                .map(|c| {
                    let w = phi.integral(1.0 - prev) - phi.integral(1.0 - c);
                    prev = c;
                    w
                })
                .collect()
        }
        ExpectationSpec::OneSided { p, a } => {
            let m: f64 = values.iter().zip(probs).map(|(v, q)| v * q).sum();
            let d: Vec<f64> = values.iter().map(|v| (v - m).max(0.0)).collect();
            let norm = d.iter().zip(probs).map(|(x, q)| q * x.powf(*p)).sum::<f64>().powf(1.0 / p);
            if !(norm > 0.0) {
                return Ok(probs.to_vec());
            }
            let zeta: Vec<f64> = d
                .iter()
                .map(|x| if *p == 1.0 { if *x > 0.0 { 1.0 } else { 0.0 } } else { (x / norm).powf(p - 1.0) })
                .collect();
            let ez: f64 = zeta.iter().zip(probs).map(|(z, q)| z * q).sum();
            zeta.iter().zip(probs).map(|(z, q)| q * (1.0 + a * (z - ez))).collect()
        }
        ExpectationSpec::Expectile { tau } => {
            let law: ScalarLaw = EmpiricalLaw::new(values.to_vec(), probs.to_vec())?.into();
            let x = expectile(&law, *tau)?;
            let raw: Vec<f64> = values.iter().zip(probs).map(|(v, q)| q * if *v > x { *tau } else { 1.0 - tau }).collect();
            let c: f64 = raw.iter().sum();
            raw.into_iter().map(|r| r / c).collect()
        }
        ExpectationSpec::MaxExt { base, m } => {
            let cum = cumulative(probs);
            let mut prev = 0.0;
            let lifted: Vec<f64> = cum
                .iter()
                .map(|c| {
                    let cm = c.powi(*m as i32);
                    let w = cm - prev;
                    prev = cm;
                    w
                })
                .collect();
            // atoms that lose all mass under the lift keep zero weight
            let keep: Vec<usize> = (0..n).filter(|&i| lifted[i] > 0.0).collect();
            let vs: Vec<f64> = keep.iter().map(|&i| values[i]).collect();
            let ps: Vec<f64> = keep.iter().map(|&i| lifted[i]).collect();
            let inner = dual_weights(base, &vs, &ps)?;
            let mut w = vec![0.0; n];
            for (k, &i) in keep.iter().enumerate() {
                w[i] = inner[k];
            }
            w
        }
    })
}

/// Dual witness for a discrete law (atoms as stored in the law).
pub fn dual_witness(spec: &ExpectationSpec, law: &EmpiricalLaw) -> Result<DualWitness> {
    spec.validate()?;
    let w = dual_weights(spec, law.values(), law.weights())?;
    let value = w.iter().zip(law.values()).map(|(a, b)| a * b).sum();
    let gamma = w.iter().zip(law.weights()).map(|(a, p)| a / p).collect();
    Ok(DualWitness { gamma, probs: law.weights().to_vec(), value })
}

/// The maximising dual measure of a continuous law: density `gamma(s)` with
/// respect to the law, plus a point mass `top_mass` at the essential supremum.
pub struct DualKernel {
    gamma: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    /// Values where `gamma` jumps or has a kink.
    pub breaks: Vec<f64>,
    pub top_mass: f64,
}

impl DualKernel {
    pub fn gamma(&self, s: f64) -> f64 {
        (self.gamma)(s)
    }
}

/// Dual kernel of `spec` at a non-atomic `law`.
pub fn dual_kernel(spec: &ExpectationSpec, law: &ScalarLaw) -> Result<DualKernel> {
    spec.validate()?;
    if law.as_empirical().is_some() {
        return domain("dual_kernel needs a continuous law; use dual_weights for atoms");
    }
    Ok(match spec {
        ExpectationSpec::Mean => DualKernel { gamma: Box::new(|_| 1.0), breaks: Vec::new(), top_mass: 0.0 },
        ExpectationSpec::EssSup => DualKernel { gamma: Box::new(|_| 0.0), breaks: Vec::new(), top_mass: 1.0 },
        ExpectationSpec::AvgQuantile { alpha } => {
            let alpha = *alpha;
            if alpha == 1.0 {
                return dual_kernel(&ExpectationSpec::Mean, law);
            }
            let q = law.quantile_unchecked(1.0 - alpha);
            DualKernel { gamma: Box::new(move |s| if s > q { 1.0 / alpha } else { 0.0 }), breaks: vec![q], top_mass: 0.0 }
        }
        ExpectationSpec::Spectral(nu) => {
            let phi = nu.spectral_function();
            let breaks = nu.levels().iter().map(|a| law.quantile_unchecked(1.0 - a)).collect();
            let l = law.clone();
            DualKernel { gamma: Box::new(move |s| phi.eval(1.0 - l.cdf(s))), breaks, top_mass: 0.0 }
        }
        ExpectationSpec::OneSided { p, a } => {
            let (p, a) = (*p, *a);
            let m = law.mean();
            let norm = law.upper_partial_moment(m, p).powf(1.0 / p);
            if !(norm > 0.0) || a == 0.0 {
                return dual_kernel(&ExpectationSpec::Mean, law);
            }
            let ez = if p == 1.0 { 1.0 - law.cdf(m) } else { law.upper_partial_moment(m, p - 1.0) / norm.powf(p - 1.0) };
            let gamma = move |s: f64| {
                let d = (s - m).max(0.0);
                let z = if p == 1.0 { if d > 0.0 { 1.0 } else { 0.0 } } else { (d / norm).powf(p - 1.0) };
                1.0 + a * (z - ez)
            };
            DualKernel { gamma: Box::new(gamma), breaks: vec![m], top_mass: 0.0 }
        }
        ExpectationSpec::Expectile { tau } => {
            let tau = *tau;
            let x = expectile(law, tau)?;
            let above = 1.0 - law.cdf(x);
            let c = 1.0 / (tau * above + (1.0 - tau) * (1.0 - above));
            DualKernel {
                gamma: Box::new(move |s| c * if s > x { tau } else { 1.0 - tau }),
                breaks: vec![x],
                top_mass: 0.0,
            }
        }
        ExpectationSpec::MaxExt { base, m } => {
            let lifted = max_law(law, *m)?;
            let inner = dual_kernel(base, &lifted)?;
            let mf = *m as f64;
            let mi = *m as i32;
            let l = law.clone();
            let breaks = inner.breaks.clone();
            let top_mass = inner.top_mass;
            let g = inner.gamma;
            DualKernel {
                gamma: Box::new(move |s| g(s) * mf * l.cdf(s).powi(mi - 1)),
                breaks,
                top_mass,
            }
        }
    })
}
