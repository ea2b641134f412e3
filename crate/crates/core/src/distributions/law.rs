//! One-dimensional laws with exact quantile and quantile-integral queries.
//!
//! Quantiles use the inf-form `q_t = inf{s : P(X <= s) >= t}`. The integral
//! `int_a^b q_t dt` is evaluated without quadrature for empirical and
//! piecewise-linear-density laws: for continuous laws it equals
//! `G(q_b) - G(q_a)` with `G(s) = E[X; X <= s]`.

use crate::error::{domain, Result};
use crate::numeric::{bisect, de_piecewise};
use statrs::function::beta::{beta_reg, ln_beta};
use std::f64::consts::PI;

const WEIGHT_TOL: f64 = 1e-9;

/// A discrete law: strictly increasing atoms with positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalLaw {
    values: Vec<f64>,
    weights: Vec<f64>,
    cum: Vec<f64>,
}

impl EmpiricalLaw {
    /// Build from atoms and weights. Duplicate atoms are merged; weights must be
    /// positive and sum to one (they are renormalised to remove rounding).
    pub fn new(values: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.len() != weights.len() {
            return domain("empirical law needs matching nonempty values and weights");
        }
        if values.iter().any(|v| !v.is_finite()) {
            return domain("empirical law atoms must be finite");
        }
        if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return domain("empirical law weights must be positive");
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_TOL {
            return domain(format!("weights sum to {total}, not 1"));
        }
        let mut pairs: Vec<(f64, f64)> = values.into_iter().zip(weights).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut vals: Vec<f64> = Vec::with_capacity(pairs.len());
        let mut ws: Vec<f64> = Vec::with_capacity(pairs.len());
        for (v, w) in pairs {
            if vals.last() == Some(&v) {
                *ws.last_mut().unwrap() += w / total;
            } else {
                vals.push(v);
                ws.push(w / total);
            }
        }
        let mut cum = Vec::with_capacity(ws.len());
        let mut acc = 0.0;
        for w in &ws {
            acc += w;
            cum.push(acc);
        }
        *cum.last_mut().unwrap() = 1.0;
        Ok(Self { values: vals, weights: ws, cum })
    }

    /// Equal weights on the given values.
    pub fn uniform_on(values: &[f64]) -> Result<Self> {
        let n = values.len();
        Self::new(values.to_vec(), vec![1.0 / n as f64; n])
    }

    /// A single atom of mass one.
    pub fn point(c: f64) -> Self {
        Self { values: vec![c], weights: vec![1.0], cum: vec![1.0] }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Cumulative masses `P(X <= values[i])`; the last entry is exactly one.
    pub fn cumulative(&self) -> &[f64] {
        &self.cum
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Law of `scale * X + shift` for `scale >= 0`.
    pub fn affine(&self, scale: f64, shift: f64) -> Result<Self> {
        if !(scale >= 0.0) {
            return domain("affine scale must be nonnegative");
        }
        Self::new(self.values.iter().map(|v| scale * v + shift).collect(), self.weights.clone())
    }

    fn quantile(&self, t: f64) -> f64 {
        let i = self.cum.partition_point(|&c| c < t);
        self.values[i.min(self.values.len() - 1)]
    }

    fn cdf(&self, s: f64) -> f64 {
        let i = self.values.partition_point(|&v| v <= s);
        if i == 0 {
            0.0
        } else {
            self.cum[i - 1]
        }
    }

    fn quantile_integral(&self, a: f64, b: f64) -> f64 {
        let start = self.cum.partition_point(|&c| c <= a);
        let mut total = 0.0;
        let mut lo_prev = if start == 0 { 0.0 } else { self.cum[start - 1] };
        for i in start..self.values.len() {
            let lo = lo_prev.max(a);
            let hi = self.cum[i].min(b);
            if hi > lo {
                total += self.values[i] * (hi - lo);
            }
            if self.cum[i] >= b {
                break;
            }
            lo_prev = self.cum[i];
        }
        total
    }

    fn mean(&self) -> f64 {
        self.values.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }

    fn upper_partial_moment(&self, x: f64, p: f64) -> f64 {
        let start = self.values.partition_point(|&v| v <= x);
        self.values[start..]
            .iter()
            .zip(&self.weights[start..])
            .map(|(v, w)| w * if p == 1.0 { v - x } else { (v - x).powf(p) })
            .sum()
    }

    /// Law of the maximum of `m` independent copies.
    pub fn max_of(&self, m: u32) -> Self {
        let mut weights = Vec::with_capacity(self.len());
        let mut prev = 0.0;
        let mut keep = Vec::with_capacity(self.len());
        for (i, c) in self.cum.iter().enumerate() {
            let cm = c.powi(m as i32);
            let w = cm - prev;
            if w > 0.0 {
                weights.push(w);
                keep.push(self.values[i]);
            }
            prev = cm;
        }
        let mut cum = Vec::with_capacity(weights.len());
        let mut acc = 0.0;
        for w in &weights {
            acc += w;
            cum.push(acc);
        }
        *cum.last_mut().unwrap() = 1.0;
        Self { values: keep, weights, cum }
    }
}

/// A law with a piecewise-linear density, possibly discontinuous at knots.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLaw {
    knots: Vec<f64>,
    /// density at the left end of each piece (right limit)
    left: Vec<f64>,
    /// density at the right end of each piece (left limit)
    right: Vec<f64>,
    cmass: Vec<f64>,
    cmom: Vec<f64>,
}

impl PiecewiseLaw {
    /// Build from knots and end-point densities of each piece. The density is
    /// rescaled to unit mass when the input mass is within 1e-6 of one.
    pub fn new(knots: Vec<f64>, left: Vec<f64>, right: Vec<f64>) -> Result<Self> {
        let k = knots.len();
        if k < 2 || left.len() != k - 1 || right.len() != k - 1 {
            return domain("piecewise law needs k knots and k-1 pieces");
        }
        if knots.windows(2).any(|w| !(w[1] > w[0])) {
            return domain("piecewise law knots must be strictly increasing");
        }
        if left.iter().chain(&right).any(|d| !(*d >= 0.0) || !d.is_finite()) {
            return domain("density must be finite and nonnegative");
        }
        let mass: f64 = (0..k - 1).map(|i| 0.5 * (knots[i + 1] - knots[i]) * (left[i] + right[i])).sum();
        if (mass - 1.0).abs() > 1e-6 {
            return domain(format!("density integrates to {mass}, not 1"));
        }
        let left: Vec<f64> = left.iter().map(|d| d / mass).collect();
        let right: Vec<f64> = right.iter().map(|d| d / mass).collect();
        let mut cmass = vec![0.0; k];
        let mut cmom = vec![0.0; k];
        for i in 0..k - 1 {
            let w = knots[i + 1] - knots[i];
            let a = left[i];
            let b = (right[i] - left[i]) / w;
            let m = w * (a + right[i]) / 2.0;
            cmass[i + 1] = cmass[i] + m;
            cmom[i + 1] = cmom[i] + knots[i] * m + a * w * w / 2.0 + b * w * w * w / 3.0;
        }
        let total = cmass[k - 1];
        for c in cmass.iter_mut() {
            *c = (*c / total).min(1.0);
        }
        for c in cmom.iter_mut() {
            *c /= total;
        }
        let left = left.iter().map(|d| d / total).collect();
        let right = right.iter().map(|d| d / total).collect();
        cmass[k - 1] = 1.0;
        Ok(Self { knots, left, right, cmass, cmom })
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// `P(X <= knots[i])`.
    pub fn cumulative(&self) -> &[f64] {
        &self.cmass
    }

    fn piece(&self, i: usize) -> (f64, f64, f64, f64) {
        let w = self.knots[i + 1] - self.knots[i];
        let a = self.left[i];
        (self.knots[i], w, a, (self.right[i] - a) / w)
    }

    fn locate(&self, s: f64) -> usize {
        let i = self.knots.partition_point(|&x| x <= s);
        i.saturating_sub(1).min(self.knots.len() - 2)
    }

    pub fn density(&self, s: f64) -> f64 {
        if s < self.knots[0] || s > *self.knots.last().unwrap() {
            return 0.0;
        }
        let i = self.locate(s);
        let (x0, _, a, b) = self.piece(i);
        a + b * (s - x0)
    }

    fn cdf(&self, s: f64) -> f64 {
        if s <= self.knots[0] {
            return 0.0;
        }
        if s >= *self.knots.last().unwrap() {
            return 1.0;
        }
        let i = self.locate(s);
        let (x0, _, a, b) = self.piece(i);
        let z = s - x0;
        (self.cmass[i] + a * z + b * z * z / 2.0).min(1.0)
    }

    fn quantile(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return self.knots[0];
        }
        if t >= 1.0 {
            return *self.knots.last().unwrap();
        }
        // piece i with cmass[i] < t <= cmass[i+1]
        let i = (self.cmass.partition_point(|&c| c < t)).clamp(1, self.knots.len() - 1) - 1;
        let (x0, w, a, b) = self.piece(i);
        let c = t - self.cmass[i];
        let disc = (a * a + 2.0 * b * c).max(0.0);
        let denom = a + disc.sqrt();
        let z = if denom > 0.0 { 2.0 * c / denom } else { w };
        x0 + z.clamp(0.0, w)
    }

    /// `E[X; X <= s]`.
    fn partial_mean(&self, s: f64) -> f64 {
        if s <= self.knots[0] {
            return 0.0;
        }
        let k = self.knots.len();
        if s >= self.knots[k - 1] {
            return self.cmom[k - 1];
        }
        let i = self.locate(s);
        let (x0, _, a, b) = self.piece(i);
        let z = s - x0;
        self.cmom[i] + x0 * (a * z + b * z * z / 2.0) + a * z * z / 2.0 + b * z * z * z / 3.0
    }

    fn upper_partial_moment(&self, x: f64, p: f64) -> f64 {
        let mut total = 0.0;
        for i in 0..self.knots.len() - 1 {
            let hi = self.knots[i + 1];
            if hi <= x {
                continue;
            }
            let (x0, _, a, b) = self.piece(i);
            let lo = x0.max(x);
            let d_lo = a + b * (lo - x0);
            let (w0, w1) = (lo - x, hi - x);
            let big_a = d_lo - b * w0;
            total += big_a * (w1.powf(p + 1.0) - w0.powf(p + 1.0)) / (p + 1.0)
                + b * (w1.powf(p + 2.0) - w0.powf(p + 2.0)) / (p + 2.0);
        }
        total.max(0.0)
    }
}

/// Closed-form laws.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticLaw {
    /// Uniform on `[lo, hi]`.
    Uniform { lo: f64, hi: f64 },
    /// Projection of the uniform law on a `dim`-ball onto a line through its
    /// center: `center + radius * S`, where `S` has density proportional to
    /// `(1 - s^2)^((dim-1)/2)` on `[-1, 1]`.
    BallMarginal { center: f64, radius: f64, dim: u32 },
    /// `center + sum_i U_i` with `U_i` uniform on `[-w_i/2, w_i/2]`, at least two
    /// positive widths. This is the projection law of a box.
    BoxSum { center: f64, widths: Vec<f64> },
}

/// Law of `U_a + U_b` for centred uniforms of widths `a <= b`, shifted by `c`.
fn trapezoid(c: f64, a: f64, b: f64) -> ScalarLaw {
    let (s, d) = ((a + b) / 2.0, (b - a) / 2.0);
    let h = 1.0 / b;
    let law = if c - d > c - s && c + d > c - d {
        PiecewiseLaw::new(vec![c - s, c - d, c + d, c + s], vec![0.0, h, h], vec![h, h, 0.0])
    } else if c > c - s {
        PiecewiseLaw::new(vec![c - s, c, c + s], vec![0.0, h], vec![h, 0.0])
    } else {
        return ScalarLaw::Empirical(EmpiricalLaw::point(c));
    };
    law.map(ScalarLaw::Piecewise)
        .unwrap_or_else(|_| ScalarLaw::Analytic(AnalyticLaw::Uniform { lo: c - b / 2.0, hi: c + b / 2.0 }))
}

impl AnalyticLaw {
    /// Normalise a box-sum. Widths below `1e-12` of the largest are dropped
    /// and two widths give the trapezoid law directly; inclusion-exclusion
    /// loses all precision when the widths are very unequal.
    pub fn box_sum(center: f64, widths: Vec<f64>) -> ScalarLaw {
        let top = widths.iter().fold(0.0f64, |m, w| m.max(*w));
        let w: Vec<f64> = widths.into_iter().filter(|w| *w > 1e-12 * top).collect();
        match w.len() {
            0 => ScalarLaw::Empirical(EmpiricalLaw::point(center)),
            1 => ScalarLaw::Analytic(AnalyticLaw::Uniform { lo: center - w[0] / 2.0, hi: center + w[0] / 2.0 }),
            2 => trapezoid(center, w[0].min(w[1]), w[0].max(w[1])),
            _ => ScalarLaw::Analytic(AnalyticLaw::BoxSum { center, widths: w }),
        }
    }

    fn bounds(&self) -> (f64, f64) {
        match self {
            Self::Uniform { lo, hi } => (*lo, *hi),
            Self::BallMarginal { center, radius, .. } => (center - radius, center + radius),
            Self::BoxSum { center, widths } => {
                let h: f64 = widths.iter().sum::<f64>() / 2.0;
                (center - h, center + h)
            }
        }
    }

    fn mean(&self) -> f64 {
        match self {
            Self::Uniform { lo, hi } => 0.5 * (lo + hi),
            Self::BallMarginal { center, .. } | Self::BoxSum { center, .. } => *center,
        }
    }

    /// Interior points where the density is not smooth.
    fn kinks(&self) -> Vec<f64> {
        match self {
            Self::BoxSum { center, widths } => {
                let lower = center - widths.iter().sum::<f64>() / 2.0;
                let mut k: Vec<f64> = subset_sums(widths).into_iter().map(|(s, _)| lower + s).collect();
                k.sort_by(f64::total_cmp);
                k.dedup();
                k
            }
            _ => {
                let (a, b) = self.bounds();
                vec![a, b]
            }
        }
    }

    fn cdf(&self, s: f64) -> f64 {
        let (lo, hi) = self.bounds();
        if s <= lo {
            return 0.0;
        }
        if s >= hi {
            return 1.0;
        }
        match self {
            Self::Uniform { lo, hi } => (s - lo) / (hi - lo),
            Self::BallMarginal { center, radius, dim } => ball_cdf((s - center) / radius, *dim),
            Self::BoxSum { center, widths } => {
                if s > *center {
                    1.0 - box_lower_cdf(2.0 * center - s, *center, widths)
                } else {
                    box_lower_cdf(s, *center, widths)
                }
            }
        }
    }

    fn partial_mean(&self, s: f64) -> f64 {
        let (lo, hi) = self.bounds();
        if s <= lo {
            return 0.0;
        }
        let s = s.min(hi);
        match self {
            Self::Uniform { lo, hi } => (s * s - lo * lo) / (2.0 * (hi - lo)),
            Self::BallMarginal { center, radius, dim } => {
                let z = (s - center) / radius;
                center * ball_cdf(z, *dim) + radius * ball_partial_mean(z, *dim)
            }
            Self::BoxSum { center, widths } => {
                if s > *center {
                    // E[X; X > s] = 2c F(2c - s) - G(2c - s) by reflection about c
                    let r = 2.0 * center - s;
                    let upper = 2.0 * center * box_lower_cdf(r, *center, widths) - box_lower_partial_mean(r, *center, widths);
                    center - upper
                } else {
                    box_lower_partial_mean(s, *center, widths)
                }
            }
        }
    }

    fn quantile(&self, t: f64) -> f64 {
        let (lo, hi) = self.bounds();
        if t <= 0.0 {
            return lo;
        }
        if t >= 1.0 {
            return hi;
        }
        match self {
            Self::Uniform { lo, hi } => lo + t * (hi - lo),
            _ => bisect(lo, hi, |s| self.cdf(s) - t),
        }
    }

    fn density(&self, s: f64) -> f64 {
        let (lo, hi) = self.bounds();
        if s < lo || s > hi {
            return 0.0;
        }
        match self {
            Self::Uniform { lo, hi } => 1.0 / (hi - lo),
            Self::BallMarginal { center, radius, dim } => {
                let z = (s - center) / radius;
                let k = (*dim as f64 - 1.0) / 2.0;
                (1.0 - z * z).max(0.0).powf(k) / ball_norm(*dim) / radius
            }
            Self::BoxSum { center, widths } => {
                let d = widths.len() as i32;
                let lower = center - widths.iter().sum::<f64>() / 2.0;
                let prod: f64 = widths.iter().product();
                let fact: f64 = (1..d).map(|i| i as f64).product();
                subset_sums(widths)
                    .into_iter()
                    .map(|(c, sign)| sign * (s - lower - c).max(0.0).powi(d - 1))
                    .sum::<f64>()
                    / (fact * prod)
            }
        }
    }
}

fn subset_sums(widths: &[f64]) -> Vec<(f64, f64)> {
    let d = widths.len();
    (0..1usize << d)
        .map(|mask| {
            let mut s = 0.0;
            let mut sign = 1.0;
            for (i, w) in widths.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    s += w;
                    sign = -sign;
                }
            }
            (s, sign)
        })
        .collect()
}

fn box_lower_cdf(s: f64, center: f64, widths: &[f64]) -> f64 {
    let d = widths.len() as i32;
    let lower = center - widths.iter().sum::<f64>() / 2.0;
    let prod: f64 = widths.iter().product();
    let fact: f64 = (1..=d).map(|i| i as f64).product();
    let v: f64 = subset_sums(widths)
        .into_iter()
        .map(|(c, sign)| sign * (s - lower - c).max(0.0).powi(d))
        .sum();
    (v / (fact * prod)).clamp(0.0, 1.0)
}

fn box_lower_partial_mean(s: f64, center: f64, widths: &[f64]) -> f64 {
    // G(s) = s F(s) - int_{-inf}^s F
    let d = widths.len() as i32;
    let lower = center - widths.iter().sum::<f64>() / 2.0;
    let prod: f64 = widths.iter().product();
    let fact: f64 = (1..=d + 1).map(|i| i as f64).product();
    let int_f: f64 = subset_sums(widths)
        .into_iter()
        .map(|(c, sign)| sign * (s - lower - c).max(0.0).powi(d + 1))
        .sum::<f64>()
        / (fact * prod);
    s * box_lower_cdf(s, center, widths) - int_f
}

/// Normalising constant `int_{-1}^1 (1-s^2)^((d-1)/2) ds = B(1/2, (d+1)/2)`.
fn ball_norm(dim: u32) -> f64 {
    ln_beta(0.5, (dim as f64 + 1.0) / 2.0).exp()
}

fn ball_cdf(z: f64, dim: u32) -> f64 {
    let z = z.clamp(-1.0, 1.0);
    match dim {
        1 => (z + 1.0) / 2.0,
        2 => 0.5 + (z * (1.0 - z * z).sqrt() + z.asin()) / PI,
        3 => 0.5 + 0.75 * (z - z * z * z / 3.0),
        _ => {
            let k = (dim as f64 + 1.0) / 2.0;
            beta_reg(k, k, (z + 1.0) / 2.0)
        }
    }
}

fn ball_partial_mean(z: f64, dim: u32) -> f64 {
    let z = z.clamp(-1.0, 1.0);
    let k = (dim as f64 + 1.0) / 2.0;
    -(1.0 - z * z).max(0.0).powf(k) / ((dim as f64 + 1.0) * ball_norm(dim))
}

/// A one-dimensional law.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarLaw {
    Empirical(EmpiricalLaw),
    Piecewise(PiecewiseLaw),
    Analytic(AnalyticLaw),
    /// Law of the maximum of `m` i.i.d. copies of a continuous base law.
    MaxOf { base: Box<ScalarLaw>, m: u32 },
}

impl From<EmpiricalLaw> for ScalarLaw {
    fn from(l: EmpiricalLaw) -> Self {
        ScalarLaw::Empirical(l)
    }
}

impl From<PiecewiseLaw> for ScalarLaw {
    fn from(l: PiecewiseLaw) -> Self {
        ScalarLaw::Piecewise(l)
    }
}

impl From<AnalyticLaw> for ScalarLaw {
    fn from(l: AnalyticLaw) -> Self {
        ScalarLaw::Analytic(l)
    }
}

fn check_prob(t: f64) -> Result<()> {
    if t > 0.0 && t < 1.0 {
        Ok(())
    } else {
        domain(format!("probability level {t} outside (0,1)"))
    }
}

impl ScalarLaw {
    pub fn point(c: f64) -> Self {
        ScalarLaw::Empirical(EmpiricalLaw::point(c))
    }

    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        if !(hi > lo) {
            return domain("uniform law needs lo < hi");
        }
        Ok(ScalarLaw::Analytic(AnalyticLaw::Uniform { lo, hi }))
    }

    pub fn as_empirical(&self) -> Option<&EmpiricalLaw> {
        match self {
            ScalarLaw::Empirical(e) => Some(e),
            _ => None,
        }
    }

    /// `inf{s : P(X <= s) >= t}` for `t` in `(0,1)`.
    pub fn quantile(&self, t: f64) -> Result<f64> {
        check_prob(t)?;
        Ok(self.quantile_unchecked(t))
    }

    /// Quantile with `t` clamped to `[0,1]`; `q_0` and `q_1` are the support ends.
    pub(crate) fn quantile_unchecked(&self, t: f64) -> f64 {
        match self {
            ScalarLaw::Empirical(e) => {
                if t <= 0.0 {
                    e.values[0]
                } else {
                    e.quantile(t.min(1.0))
                }
            }
            ScalarLaw::Piecewise(p) => p.quantile(t),
            ScalarLaw::Analytic(a) => a.quantile(t),
            ScalarLaw::MaxOf { base, m } => base.quantile_unchecked(t.clamp(0.0, 1.0).powf(1.0 / *m as f64)),
        }
    }

    pub fn cdf(&self, s: f64) -> f64 {
        match self {
            ScalarLaw::Empirical(e) => e.cdf(s),
            ScalarLaw::Piecewise(p) => p.cdf(s),
            ScalarLaw::Analytic(a) => a.cdf(s),
            ScalarLaw::MaxOf { base, m } => base.cdf(s).powi(*m as i32),
        }
    }

    /// `int_a^b q_t dt` for `0 <= a < b <= 1`.
    pub fn quantile_integral(&self, a: f64, b: f64) -> Result<f64> {
        if !(a >= 0.0 && b <= 1.0 && a < b) {
            return domain(format!("quantile integral needs 0 <= a < b <= 1, got [{a}, {b}]"));
        }
        Ok(self.qi(a, b))
    }

    pub(crate) fn qi(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        match self {
            ScalarLaw::Empirical(e) => e.quantile_integral(a, b),
            ScalarLaw::Piecewise(p) => p.partial_mean(p.quantile(b)) - p.partial_mean(p.quantile(a)),
            ScalarLaw::Analytic(l) => l.partial_mean(l.quantile(b)) - l.partial_mean(l.quantile(a)),
            ScalarLaw::MaxOf { base, m } => {
                let mf = *m as f64;
                let (sa, sb) = (a.powf(1.0 / mf), b.powf(1.0 / mf));
                let mut knots = vec![sa];
                knots.extend(base.t_knots().into_iter().filter(|k| *k > sa && *k < sb));
                knots.push(sb);
                de_piecewise(&knots, 1e-14, |s| mf * s.powf(mf - 1.0) * base.quantile_unchecked(s))
            }
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            ScalarLaw::Empirical(e) => e.mean(),
            ScalarLaw::Piecewise(p) => *p.cmom.last().unwrap(),
            ScalarLaw::Analytic(a) => a.mean(),
            ScalarLaw::MaxOf { .. } => self.qi(0.0, 1.0),
        }
    }

    pub fn ess_sup(&self) -> f64 {
        match self {
            ScalarLaw::Empirical(e) => *e.values.last().unwrap(),
            ScalarLaw::Piecewise(p) => *p.knots.last().unwrap(),
            ScalarLaw::Analytic(a) => a.bounds().1,
            ScalarLaw::MaxOf { base, .. } => base.ess_sup(),
        }
    }

    pub fn ess_inf(&self) -> f64 {
        match self {
            ScalarLaw::Empirical(e) => e.values[0],
            ScalarLaw::Piecewise(p) => p.knots[0],
            ScalarLaw::Analytic(a) => a.bounds().0,
            ScalarLaw::MaxOf { base, .. } => base.ess_inf(),
        }
    }

    /// Probability levels where `t -> q_t` is not smooth, including 0 and 1.
    pub(crate) fn t_knots(&self) -> Vec<f64> {
        let mut k = match self {
            ScalarLaw::Empirical(e) => e.cum.clone(),
            ScalarLaw::Piecewise(p) => p.cmass.clone(),
            ScalarLaw::Analytic(a) => a.kinks().into_iter().map(|s| a.cdf(s)).collect(),
            ScalarLaw::MaxOf { base, m } => base.t_knots().into_iter().map(|t| t.powi(*m as i32)).collect(),
        };
        k.push(0.0);
        k.push(1.0);
        k.sort_by(f64::total_cmp);
        k.dedup();
        k
    }

    /// `E (X - x)_+^p` for `p >= 1`.
    pub fn upper_partial_moment(&self, x: f64, p: f64) -> f64 {
        match self {
            ScalarLaw::Empirical(e) => e.upper_partial_moment(x, p),
            ScalarLaw::Piecewise(l) => l.upper_partial_moment(x, p),
            _ if p == 1.0 => {
                let f = self.cdf(x);
                if f >= 1.0 {
                    0.0
                } else {
                    (self.qi(f, 1.0) - x * (1.0 - f)).max(0.0)
                }
            }
            _ => self.expect(|s| (s - x).max(0.0).powf(p), &[self.cdf(x)]),
        }
    }

    /// `E g(X)`, integrating over probability levels. `extra` adds levels where
    /// `g(q_t)` has kinks.
    pub fn expect(&self, g: impl Fn(f64) -> f64, extra: &[f64]) -> f64 {
        match self {
            ScalarLaw::Empirical(e) => e.values.iter().zip(&e.weights).map(|(v, w)| w * g(*v)).sum(),
            _ => {
                let mut knots = self.t_knots();
                knots.extend(extra.iter().copied().filter(|t| *t > 0.0 && *t < 1.0));
                knots.sort_by(f64::total_cmp);
                knots.dedup();
                de_piecewise(&knots, 1e-13, |t| g(self.quantile_unchecked(t)))
            }
        }
    }

    /// Density for continuous laws (`None` for atomic laws).
    pub fn density(&self, s: f64) -> Option<f64> {
        match self {
            ScalarLaw::Empirical(_) => None,
            ScalarLaw::Piecewise(p) => Some(p.density(s)),
            ScalarLaw::Analytic(a) => Some(a.density(s)),
            ScalarLaw::MaxOf { base, m } => {
                let f = base.density(s)?;
                Some(*m as f64 * base.cdf(s).powi(*m as i32 - 1) * f)
            }
        }
    }
}

/// Law whose quantile is `q_{t^{1/m}}` of `law`: the maximum of `m` i.i.d. copies.
pub fn max_law(law: &ScalarLaw, m: u32) -> Result<ScalarLaw> {
    if m == 0 {
        return domain("max_law needs m >= 1");
    }
    if m == 1 {
        return Ok(law.clone());
    }
    Ok(match law {
        ScalarLaw::Empirical(e) => ScalarLaw::Empirical(e.max_of(m)),
        ScalarLaw::MaxOf { base, m: k } => ScalarLaw::MaxOf { base: base.clone(), m: k * m },
        other => ScalarLaw::MaxOf { base: Box::new(other.clone()), m },
    })
}

impl std::fmt::Display for ScalarLaw {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScalarLaw::Empirical(e) => write!(f, "empirical({} atoms)", e.len()),
            ScalarLaw::Piecewise(p) => write!(f, "piecewise({} pieces)", p.knots.len() - 1),
            ScalarLaw::Analytic(a) => write!(f, "{a:?}"),
            ScalarLaw::MaxOf { base, m } => write!(f, "max of {m} x {base}"),
        }
    }
}
