//! Dense two-phase simplex with Bland's rule.

use crate::error::{domain, Error, Result};

const EPS: f64 = 1e-11;

/// `maximize c.x` subject to `A x <= b`, `E x = f` and `lower <= x <= upper`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub ineq: Vec<(Vec<f64>, f64)>,
    pub eq: Vec<(Vec<f64>, f64)>,
    /// Per-variable `(lower, upper)`; defaults to `(0, +inf)` when empty.
    pub bounds: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub value: f64,
    pub x: Vec<f64>,
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize, obj: &mut [f64], obj_val: &mut f64) {
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        self.rhs[r] /= p;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r];
        for i in 0..self.rows.len() {
            if i != r {
                let f = self.rows[i][c];
                if f != 0.0 {
                    for (v, pv) in self.rows[i].iter_mut().zip(&prow) {
                        *v -= f * pv;
                    }
                    self.rhs[i] -= f * prhs;
                }
            }
        }
        let f = obj[c];
        if f != 0.0 {
            for (v, pv) in obj.iter_mut().zip(&prow) {
                *v -= f * pv;
            }
            *obj_val += f * prhs;
        }
        self.basis[r] = c;
    }

    /// Maximise with reduced costs `obj` (positive entries improve). Columns
    /// with `allowed[c] == false` never enter.
    fn run(&mut self, obj: &mut [f64], obj_val: &mut f64, allowed: &[bool]) -> Result<()> {
        for _ in 0..100_000 {
            let Some(c) = (0..obj.len()).find(|&c| allowed[c] && obj[c] > EPS) else {
                return Ok(());
            };
            let mut best: Option<(usize, f64)> = None;
            for r in 0..self.rows.len() {
                let a = self.rows[r][c];
                if a > EPS {
                    let ratio = self.rhs[r] / a;
                    best = match best {
                        None => Some((r, ratio)),
                        Some((br, bv)) => {
                            if ratio < bv - EPS || (ratio <= bv + EPS && self.basis[r] < self.basis[br]) {
                                Some((r, ratio))
                            } else {
                                Some((br, bv))
                            }
                        }
                    }
                }
            }
            let Some((r, _)) = best else {
                return Err(Error::UnboundedObjective);
            };
            self.pivot(r, c, obj, obj_val);
        }
        Err(Error::Numerical("simplex iteration limit".into()))
    }
}

/// Solve a linear program.
pub fn lp_solve(prog: &LinearProgram) -> Result<LpSolution> {
    let n = prog.objective.len();
    if prog.ineq.iter().chain(&prog.eq).any(|(row, _)| row.len() != n) {
        return domain("constraint rows must match the objective length");
    }
    let bounds: Vec<(f64, f64)> = if prog.bounds.is_empty() { vec![(0.0, f64::INFINITY); n] } else { prog.bounds.clone() };
    if bounds.len() != n || bounds.iter().any(|(l, u)| !l.is_finite() || !(u >= l)) {
        return domain("each variable needs a finite lower bound and upper >= lower");
    }
    // shift x = y + lower, y >= 0
    let shift = |row: &[f64], b: f64| b - row.iter().zip(&bounds).map(|(a, (l, _))| a * l).sum::<f64>();
    // (row, rhs, kind) with kind 0: <=, 1: >=, 2: =
    let mut cons: Vec<(Vec<f64>, f64, u8)> = Vec::new();
    for (row, b) in &prog.ineq {
        cons.push((row.clone(), shift(row, *b), 0));
    }
    for (j, (l, u)) in bounds.iter().enumerate() {
        if u.is_finite() {
            let mut row = vec![0.0; n];
            row[j] = 1.0;
            cons.push((row, u - l, 0));
        }
    }
    for (row, b) in &prog.eq {
        cons.push((row.clone(), shift(row, *b), 2));
    }
    for c in cons.iter_mut() {
        if c.1 < 0.0 {
            for v in c.0.iter_mut() {
                *v = -*v;
            }
            c.1 = -c.1;
            c.2 = match c.2 {
                0 => 1,
                1 => 0,
                k => k,
            };
        }
    }
    let m = cons.len();
    let n_slack = cons.iter().filter(|c| c.2 != 2).count();
    let n_art = cons.iter().filter(|c| c.2 != 0).count();
    let total = n + n_slack + n_art;
    let mut tab = Tableau { rows: vec![vec![0.0; total]; m], rhs: vec![0.0; m], basis: vec![0; m] };
    let (mut si, mut ai) = (n, n + n_slack);
    for (i, (row, b, kind)) in cons.iter().enumerate() {
        tab.rows[i][..n].copy_from_slice(row);
        tab.rhs[i] = *b;
        match kind {
            0 => {
                tab.rows[i][si] = 1.0;
                tab.basis[i] = si;
                si += 1;
            }
            1 => {
                tab.rows[i][si] = -1.0;
                si += 1;
                tab.rows[i][ai] = 1.0;
                tab.basis[i] = ai;
                ai += 1;
            }
            _ => {
                tab.rows[i][ai] = 1.0;
                tab.basis[i] = ai;
                ai += 1;
            }
        }
    }
    // phase 1: maximise -sum(artificials)
    let mut obj = vec![0.0; total];
    let mut val = 0.0;
    for i in 0..m {
        if tab.basis[i] >= n + n_slack {
            for (o, v) in obj.iter_mut().zip(&tab.rows[i]) {
                *o += v;
            }
            val -= tab.rhs[i];
        }
    }
    for c in n + n_slack..total {
        obj[c] = 0.0;
    }
    let all = vec![true; total];
    tab.run(&mut obj, &mut val, &all)?;
    let scale = 1.0 + cons.iter().map(|c| c.1.abs()).fold(0.0, f64::max);
    if val < -1e-9 * scale {
        return Err(Error::Infeasible);
    }
    // drive artificial variables out of the basis
    let mut keep = vec![true; m];
    for r in 0..m {
        if tab.basis[r] >= n + n_slack {
            if let Some(c) = (0..n + n_slack).find(|&c| tab.rows[r][c].abs() > 1e-9) {
                let mut dummy = vec![0.0; total];
                let mut dv = 0.0;
                tab.pivot(r, c, &mut dummy, &mut dv);
            } else {
                keep[r] = false;
            }
        }
    }
    let mut t2 = Tableau { rows: Vec::new(), rhs: Vec::new(), basis: Vec::new() };
    for r in 0..m {
        if keep[r] {
            t2.rows.push(tab.rows[r].clone());
            t2.rhs.push(tab.rhs[r]);
            t2.basis.push(tab.basis[r]);
        }
    }
    // phase 2
    let mut obj = vec![0.0; total];
    obj[..n].copy_from_slice(&prog.objective);
    let mut val = 0.0;
    for r in 0..t2.rows.len() {
        let c = t2.basis[r];
        let f = obj[c];
        if f != 0.0 {
            for (o, v) in obj.iter_mut().zip(&t2.rows[r]) {
                *o -= f * v;
            }
            val += f * t2.rhs[r];
        }
    }
    let allowed: Vec<bool> = (0..total).map(|c| c < n + n_slack).collect();
    t2.run(&mut obj, &mut val, &allowed)?;
    let mut y = vec![0.0; total];
    for (r, &c) in t2.basis.iter().enumerate() {
        y[c] = t2.rhs[r];
    }
    let x: Vec<f64> = (0..n).map(|j| y[j] + bounds[j].0).collect();
    let value = x.iter().zip(&prog.objective).map(|(a, b)| a * b).sum();
    Ok(LpSolution { value, x })
}
