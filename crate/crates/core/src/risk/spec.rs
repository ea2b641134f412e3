use crate::error::{domain, Result};
use serde::{Deserialize, Serialize};

/// A polynomial density `sum_k coeffs[k] * a^k` on `(lo, hi]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityPiece {
    pub lo: f64,
    pub hi: f64,
    pub coeffs: Vec<f64>,
}

impl DensityPiece {
    pub fn eval(&self, a: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * a + c)
    }

    /// `int_x^y a^j * p(a) da` over the part of `[x, y]` inside the piece, for
    /// `j >= -1` (the `j = -1` constant term gives a logarithm).
    pub(crate) fn moment(&self, j: i32, x: f64, y: f64) -> f64 {
        let (x, y) = (x.max(self.lo), y.min(self.hi));
        if y <= x {
            return 0.0;
        }
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let e = k as i32 + j + 1;
                if e == 0 {
                    c * (y / x).ln()
                } else {
                    c * (y.powi(e) - x.powi(e)) / e as f64
                }
            })
            .sum()
    }
}

/// A probability measure on `(0, 1]`: point masses plus polynomial density pieces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralMeasure {
    #[serde(default)]
    pub atoms: Vec<(f64, f64)>,
    #[serde(default)]
    pub density: Vec<DensityPiece>,
}

impl SpectralMeasure {
    pub fn point(alpha: f64) -> Self {
        Self { atoms: vec![(alpha, 1.0)], density: Vec::new() }
    }

    /// `nu(dt) = m(m-1) t (1-t)^(m-2) dt`, whose mixture is the expected maximum of
    /// `m` copies; `m = 1` is the point mass at one.
    pub fn max_mean(m: u32) -> Self {
        if m <= 1 {
            return Self::point(1.0);
        }
        let n = (m - 2) as usize;
        let scale = (m * (m - 1)) as f64;
        let mut coeffs = vec![0.0; n + 2];
        let mut binom = 1.0;
        for k in 0..=n {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            coeffs[k + 1] = scale * sign * binom;
            binom = binom * (n - k) as f64 / (k + 1) as f64;
        }
        Self { atoms: Vec::new(), density: vec![DensityPiece { lo: 0.0, hi: 1.0, coeffs }] }
    }

    /// The uniform density on `(0, 1]`.
    pub fn uniform() -> Self {
        Self { atoms: Vec::new(), density: vec![DensityPiece { lo: 0.0, hi: 1.0, coeffs: vec![1.0] }] }
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum::<f64>()
            + self.density.iter().map(|p| p.moment(0, p.lo, p.hi)).sum::<f64>()
    }

    pub fn validate(&self) -> Result<()> {
        for &(a, m) in &self.atoms {
            if !(a > 0.0 && a <= 1.0) || !(m >= 0.0) {
                return domain("spectral atoms need locations in (0,1] and nonnegative masses");
            }
        }
        for p in &self.density {
            if !(p.lo >= 0.0 && p.lo < p.hi && p.hi <= 1.0) || p.coeffs.iter().any(|c| !c.is_finite()) {
                return domain("spectral density pieces need 0 <= lo < hi <= 1");
            }
            if (0..=64).any(|k| p.eval(p.lo + (p.hi - p.lo) * k as f64 / 64.0) < -1e-12) {
                return domain("spectral density must be nonnegative");
            }
        }
        let total = self.total_mass();
        if (total - 1.0).abs() > 1e-10 {
            return domain(format!("spectral measure has mass {total}, not 1"));
        }
        Ok(())
    }

    /// Mixture with weight `w` on `self` and `1 - w` on `other`.
    pub fn mix(&self, w: f64, other: &Self) -> Self {
        let scale = |p: &DensityPiece, s: f64| DensityPiece { lo: p.lo, hi: p.hi, coeffs: p.coeffs.iter().map(|c| c * s).collect() };
        let mut atoms: Vec<(f64, f64)> = self.atoms.iter().map(|&(a, m)| (a, m * w)).collect();
        atoms.extend(other.atoms.iter().map(|&(a, m)| (a, m * (1.0 - w))));
        atoms.retain(|a| a.1 > 0.0);
        let mut density: Vec<DensityPiece> = self.density.iter().map(|p| scale(p, w)).collect();
        density.extend(other.density.iter().map(|p| scale(p, 1.0 - w)));
        Self { atoms, density }
    }

    /// Levels in `(0,1)` where the measure has atoms or density endpoints.
    pub(crate) fn levels(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.atoms.iter().map(|a| a.0).collect();
        for p in &self.density {
            v.push(p.lo);
            v.push(p.hi);
        }
        v.retain(|a| *a > 0.0 && *a < 1.0);
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    pub fn spectral_function(&self) -> SpectralFunction {
        SpectralFunction { nu: self.clone() }
    }
}

/// `phi(t) = int_(t,1] s^-1 nu(ds)`, a nonincreasing density on `(0,1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFunction {
    nu: SpectralMeasure,
}

impl SpectralFunction {
    pub fn eval(&self, t: f64) -> f64 {
        let atoms: f64 = self.nu.atoms.iter().filter(|a| a.0 > t).map(|a| a.1 / a.0).sum();
        let dens: f64 = self.nu.density.iter().map(|p| p.moment(-1, t, p.hi)).sum();
        atoms + dens
    }

    /// `Phi(x) = int_0^x phi = nu((0,x]) + x phi(x)`.
    pub fn integral(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let below: f64 = self.nu.atoms.iter().filter(|a| a.0 <= x).map(|a| a.1).sum::<f64>()
            + self.nu.density.iter().map(|p| p.moment(0, p.lo, x)).sum::<f64>();
        below + x * self.eval(x)
    }

    pub fn measure(&self) -> &SpectralMeasure {
        &self.nu
    }
}

/// A law-determined sublinear expectation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ExpectationSpec {
    Mean,
    AvgQuantile { alpha: f64 },
    Spectral(SpectralMeasure),
    OneSided { p: f64, a: f64 },
    Expectile { tau: f64 },
    MaxExt { base: Box<ExpectationSpec>, m: u32 },
    EssSup,
}

impl ExpectationSpec {
    pub fn avg_quantile(alpha: f64) -> Self {
        ExpectationSpec::AvgQuantile { alpha }
    }

    pub fn max_ext(base: ExpectationSpec, m: u32) -> Self {
        ExpectationSpec::MaxExt { base: Box::new(base), m }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ExpectationSpec::Mean | ExpectationSpec::EssSup => Ok(()),
            ExpectationSpec::AvgQuantile { alpha } => {
                if *alpha > 0.0 && *alpha <= 1.0 {
                    Ok(())
                } else {
                    domain(format!("alpha = {alpha} outside (0,1]"))
                }
            }
            ExpectationSpec::Spectral(nu) => nu.validate(),
            ExpectationSpec::OneSided { p, a } => {
                if !(*p >= 1.0) || !p.is_finite() {
                    domain(format!("p = {p} must be at least 1"))
                } else if !(*a >= 0.0 && *a <= 1.0) {
                    domain(format!("a = {a} outside [0,1]"))
                } else {
                    Ok(())
                }
            }
            ExpectationSpec::Expectile { tau } => {
                if *tau >= 0.5 && *tau < 1.0 {
                    Ok(())
                } else {
                    domain(format!("tau = {tau} outside [1/2,1)"))
                }
            }
            ExpectationSpec::MaxExt { base, m } => {
                if *m == 0 {
                    return domain("maximum extension needs m >= 1");
                }
                base.validate()
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: ExpectationSpec =
            serde_json::from_str(text).map_err(|e| crate::error::Error::Input(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).unwrap()
    }

    /// Short label used in reports and figures.
    pub fn label(&self) -> String {
        match self {
            ExpectationSpec::Mean => "mean".into(),
            ExpectationSpec::AvgQuantile { alpha } => format!("avg_quantile({alpha})"),
            ExpectationSpec::Spectral(_) => "spectral".into(),
            ExpectationSpec::OneSided { p, a } => format!("one_sided({p},{a})"),
            ExpectationSpec::Expectile { tau } => format!("expectile({tau})"),
            ExpectationSpec::MaxExt { base, m } => format!("max_ext({},{m})", base.label()),
            ExpectationSpec::EssSup => "ess_sup".into(),
        }
    }
}
