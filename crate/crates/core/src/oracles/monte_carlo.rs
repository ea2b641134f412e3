use crate::distributions::{ConvexShape, EmpiricalLaw, ScalarLaw};
use crate::error::{domain, Result};
use crate::risk::{avg_quantile_equal_weights, evaluate, ExpectationSpec};
use crate::rng;
use rand::Rng;
use rayon::prelude::*;

const SHARD: usize = 1 << 16;
const BOOTSTRAP: usize = 200;

/// A Monte Carlo value with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n: usize,
    pub seed: u64,
}

/// Projections `<X_k, u>` of `n` uniform points of `shape`, drawn in fixed
/// shards so the result does not depend on the number of workers.
pub fn sample_projections(shape: &ConvexShape, u: &[f64], n: usize, seed: u64) -> Result<Vec<f64>> {
    shape.validate()?;
    if u.len() != shape.dim() {
        return domain("direction dimension does not match the shape");
    }
    let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(norm > 0.0) {
        return domain("direction must be nonzero");
    }
    let shards = n.div_ceil(SHARD);
    let parts: Vec<Vec<f64>> = (0..shards)
        .into_par_iter()
        .map(|k| {
            let len = SHARD.min(n - k * SHARD);
            let mut r = rng::stream(seed, k as u64);
            shape
                .draw(&mut r, len)
                .into_iter()
                .map(|p| p.iter().zip(u).map(|(a, b)| a * b).sum::<f64>() / norm)
                .collect()
        })
        .collect();
    Ok(parts.concat())
}

/// Evaluate `spec` on the empirical projection law of `n` uniform samples.
///
/// The standard error is the plug-in asymptotic one for the mean and the
/// average quantile, and a 200-resample bootstrap otherwise.
pub fn mc_support(shape: &ConvexShape, spec: &ExpectationSpec, u: &[f64], n: usize, seed: u64) -> Result<McEstimate> {
    if n < 100 {
        return domain("mc_support needs n >= 100");
    }
    spec.validate()?;
    let mut values = sample_projections(shape, u, n, seed)?;
    let nf = n as f64;
    let (value, std_error) = match spec {
        ExpectationSpec::Mean => {
            let m = values.iter().sum::<f64>() / nf;
            let var = values.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (nf - 1.0);
            (m, (var / nf).sqrt())
        }
        ExpectationSpec::AvgQuantile { alpha } => {
            let alpha = *alpha;
            let v = avg_quantile_equal_weights(&mut values, alpha)?;
            // asymptotic variance of the estimator: Var((X - q)_+) / alpha^2
            let k = ((nf * (1.0 - alpha)).floor() as usize).min(n - 1);
            let (_, q, _) = values.select_nth_unstable_by(k, f64::total_cmp);
            let q = *q;
            let ex: Vec<f64> = values.iter().map(|x| (x - q).max(0.0)).collect();
            let m = ex.iter().sum::<f64>() / nf;
            let var = ex.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (nf - 1.0);
            (v, (var / nf).sqrt() / alpha)
        }
        _ => {
            let law: ScalarLaw = EmpiricalLaw::uniform_on(&values)?.into();
            let v = evaluate(spec, &law)?;
            let boots: Vec<f64> = (0..BOOTSTRAP)
                .into_par_iter()
                .map(|b| {
                    let mut r = rng::stream(rng::split(seed, 1 + b as u64), u64::MAX);
                    let re: Vec<f64> = (0..n).map(|_| values[r.random_range(0..n)]).collect();
                    let law: ScalarLaw = EmpiricalLaw::uniform_on(&re).expect("resample is a valid law").into();
                    evaluate(spec, &law).expect("spec validated above")
                })
                .collect();
            let m = boots.iter().sum::<f64>() / BOOTSTRAP as f64;
            let var = boots.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (BOOTSTRAP as f64 - 1.0);
            (v, var.sqrt())
        }
    };
    Ok(McEstimate { value, std_error, n, seed })
}

/// `E h(conv(X_1..X_m), u)` for each direction in `dirs`, from `trials`
/// independent hulls of `m` uniform points of `shape`. The same hulls are
/// used for every direction.
pub fn mc_expected_hull_support(
    shape: &ConvexShape,
    m: usize,
    dirs: &[Vec<f64>],
    trials: usize,
    seed: u64,
) -> Result<Vec<McEstimate>> {
    shape.validate()?;
    if m == 0 || trials < 2 {
        return domain("expected hull needs m >= 1 and at least two trials");
    }
    if dirs.iter().any(|u| u.len() != shape.dim()) {
        return domain("direction dimension does not match the shape");
    }
    let shard = (SHARD / m).max(1);
    let shards = trials.div_ceil(shard);
    let sums: Vec<Vec<(f64, f64)>> = (0..shards)
        .into_par_iter()
        .map(|k| {
            let len = shard.min(trials - k * shard);
            let mut r = rng::stream(seed, k as u64);
            let mut acc = vec![(0.0, 0.0); dirs.len()];
            for _ in 0..len {
                let pts = shape.draw(&mut r, m);
                for (j, u) in dirs.iter().enumerate() {
                    let h = pts
                        .iter()
                        .map(|p| p.iter().zip(u).map(|(a, b)| a * b).sum::<f64>())
                        .fold(f64::NEG_INFINITY, f64::max);
                    acc[j].0 += h;
                    acc[j].1 += h * h;
                }
            }
            acc
        })
        .collect();
    let n = trials as f64;
    Ok((0..dirs.len())
        .map(|j| {
            let (s, s2) = sums.iter().fold((0.0, 0.0), |a, v| (a.0 + v[j].0, a.1 + v[j].1));
            let mean = s / n;
            let var = ((s2 - n * mean * mean) / (n - 1.0)).max(0.0);
            McEstimate { value: mean, std_error: (var / n).sqrt(), n: trials, seed }
        })
        .collect())
}
