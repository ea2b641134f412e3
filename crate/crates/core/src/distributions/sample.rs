use super::law::EmpiricalLaw;
use crate::error::{domain, Result};
use crate::geometry::Vec2;
use serde::{Deserialize, Serialize};

/// A discrete probability measure on `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSample {
    points: Vec<Vec<f64>>,
    weights: Vec<f64>,
    dim: usize,
}

#[derive(Serialize, Deserialize)]
struct SampleJson {
    points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<f64>>,
}

impl WeightedSample {
    /// Weights default to equal; given weights must be positive and sum to one.
    pub fn new(points: Vec<Vec<f64>>, weights: Option<Vec<f64>>) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return domain("sample needs at least one point");
        }
        let dim = points[0].len();
        if dim == 0 || points.iter().any(|p| p.len() != dim) {
            return domain("sample points must share a positive dimension");
        }
        if points.iter().flatten().any(|x| !x.is_finite()) {
            return domain("sample points must be finite");
        }
        let weights = match weights {
            None => vec![1.0 / n as f64; n],
            Some(w) => {
                if w.len() != n || w.iter().any(|x| !(*x > 0.0) || !x.is_finite()) {
                    return domain("sample weights must be positive, one per point");
                }
                let total: f64 = w.iter().sum();
                if (total - 1.0).abs() > 1e-9 {
                    return domain(format!("sample weights sum to {total}, not 1"));
                }
                w.into_iter().map(|x| x / total).collect()
            }
        };
        Ok(Self { points, weights, dim })
    }

    pub fn from_points2(points: &[Vec2]) -> Result<Self> {
        Self::new(points.iter().map(|p| vec![p.x, p.y]).collect(), None)
    }

    pub fn from_weighted2(points: &[Vec2], weights: Vec<f64>) -> Result<Self> {
        Self::new(points.iter().map(|p| vec![p.x, p.y]).collect(), Some(weights))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Points as planar vectors; `None` unless `dim == 2`.
    pub fn points2(&self) -> Option<Vec<Vec2>> {
        (self.dim == 2).then(|| self.points.iter().map(|p| Vec2::new(p[0], p[1])).collect())
    }

    pub fn barycenter(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.dim];
        for (p, w) in self.points.iter().zip(&self.weights) {
            for (ci, x) in c.iter_mut().zip(p) {
                *ci += w * x;
            }
        }
        c
    }

    fn projections(&self, u: &[f64]) -> Result<Vec<f64>> {
        if u.len() != self.dim {
            return domain("direction dimension does not match the sample");
        }
        let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return domain("direction must be nonzero");
        }
        Ok(self.points.iter().map(|p| p.iter().zip(u).map(|(a, b)| a * b).sum::<f64>() / norm).collect())
    }

    /// Law of `<X, u/|u|>`.
    pub fn project(&self, u: &[f64]) -> Result<EmpiricalLaw> {
        EmpiricalLaw::new(self.projections(u)?, self.weights.clone())
    }

    /// Atom indices sorted by projection onto `u` (ascending, ties by index),
    /// with the projected values.
    pub fn sorted_projection(&self, u: &[f64]) -> Result<(Vec<usize>, Vec<f64>)> {
        let v = self.projections(u)?;
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]).then(a.cmp(&b)));
        Ok((idx, v))
    }

    /// Image under `x -> A x + b`.
    pub fn affine(&self, a: &[Vec<f64>], b: &[f64]) -> Result<Self> {
        if b.len() != a.len() || a.iter().any(|row| row.len() != self.dim) {
            return domain("affine map dimensions do not match");
        }
        let points = self
            .points
            .iter()
            .map(|p| a.iter().zip(b).map(|(row, bi)| row.iter().zip(p).map(|(x, y)| x * y).sum::<f64>() + bi).collect())
            .collect();
        Self::new(points, Some(self.weights.clone()))
    }

    /// Distribution of `X + Y` for independent `X ~ self`, `Y ~ other`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return domain("convolution needs equal dimensions");
        }
        let mut points = Vec::with_capacity(self.len() * other.len());
        let mut weights = Vec::with_capacity(self.len() * other.len());
        for (p, w) in self.points.iter().zip(&self.weights) {
            for (q, v) in other.points.iter().zip(&other.weights) {
                points.push(p.iter().zip(q).map(|(a, b)| a + b).collect());
                weights.push(w * v);
            }
        }
        Self::new(points, Some(weights))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: SampleJson = serde_json::from_str(text).map_err(|e| crate::error::Error::Input(e.to_string()))?;
        Self::new(raw.points, raw.weights)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&SampleJson { points: self.points.clone(), weights: Some(self.weights.clone()) }).unwrap()
    }
}
