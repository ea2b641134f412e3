//! The dual programs of the average quantile, the one-sided first moment and
//! the expectile, solved as dense linear programs over the atoms.

use super::simplex::{lp_solve, LinearProgram};
use crate::distributions::EmpiricalLaw;
use crate::error::{domain, Result};
use crate::risk::{dual_witness, DualWitness, ExpectationSpec};

/// LP value of `max sum gamma_i p_i v_i` over `0 <= gamma_i <= 1/alpha`,
/// `sum gamma_i p_i = 1`, with the greedy top-fill witness.
pub fn dual_avg_quantile(law: &EmpiricalLaw, alpha: f64) -> Result<(f64, DualWitness)> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return domain("alpha outside (0,1]");
    }
    let p = law.weights();
    let lp = LinearProgram {
        objective: p.iter().zip(law.values()).map(|(a, b)| a * b).collect(),
        eq: vec![(p.to_vec(), 1.0)],
        bounds: vec![(0.0, 1.0 / alpha); p.len()],
        ..Default::default()
    };
    let sol = lp_solve(&lp)?;
    Ok((sol.value, dual_witness(&ExpectationSpec::avg_quantile(alpha), law)?))
}

/// LP value of `max E[beta (1 + a (zeta - E zeta))]` over `0 <= zeta <= 1`.
pub fn dual_one_sided(law: &EmpiricalLaw, a: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&a) {
        return domain("a outside [0,1]");
    }
    let (v, p) = (law.values(), law.weights());
    let mean: f64 = v.iter().zip(p).map(|(x, q)| x * q).sum();
    let lp = LinearProgram {
        objective: v.iter().zip(p).map(|(x, q)| a * q * (x - mean)).collect(),
        bounds: vec![(0.0, 1.0); p.len()],
        ..Default::default()
    };
    Ok(mean + lp_solve(&lp)?.value)
}

/// LP value of `max sum gamma_i p_i v_i` over `sum gamma_i p_i = 1` and
/// `s <= gamma_i <= s tau / (1 - tau)` for some `s >= 0`.
pub fn dual_expectile(law: &EmpiricalLaw, tau: f64) -> Result<f64> {
    if !(0.5..1.0).contains(&tau) {
        return domain("tau outside [1/2,1)");
    }
    let (v, p) = (law.values(), law.weights());
    let n = v.len();
    let ratio = tau / (1.0 - tau);
    let mut objective: Vec<f64> = v.iter().zip(p).map(|(x, q)| x * q).collect();
    objective.push(0.0);
    let mut ineq = Vec::with_capacity(2 * n);
    for i in 0..n {
        // s - gamma_i <= 0 and gamma_i - ratio s <= 0
        let mut lo = vec![0.0; n + 1];
        lo[i] = -1.0;
        lo[n] = 1.0;
        ineq.push((lo, 0.0));
        let mut hi = vec![0.0; n + 1];
        hi[i] = 1.0;
        hi[n] = -ratio;
        ineq.push((hi, 0.0));
    }
    let mut norm = p.to_vec();
    norm.push(0.0);
    let lp = LinearProgram { objective, ineq, eq: vec![(norm, 1.0)], bounds: Vec::new() };
    Ok(lp_solve(&lp)?.value)
}

/// First-order optimality of a witness for the average-quantile program: no
/// feasible exchange of mass between two atoms raises the objective. Returns
/// the largest gain over all pairwise exchanges (nonpositive at an optimum).
pub fn witness_exchange_gain(law: &EmpiricalLaw, alpha: f64, w: &DualWitness) -> f64 {
    let v = law.values();
    let cap = 1.0 / alpha;
    let mut best = f64::NEG_INFINITY;
    for i in 0..v.len() {
        for j in 0..v.len() {
            // move mass from atom j to atom i
            if i != j && w.gamma[i] < cap - 1e-12 && w.gamma[j] > 1e-12 {
                best = best.max(v[i] - v[j]);
            }
        }
    }
    best
}
