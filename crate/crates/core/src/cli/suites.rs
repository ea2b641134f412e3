//! Verification suites: each runs a family of invariant checks and returns a
//! report with the achieved error of every check.

use super::report::{Check, Report};
use super::Params;
use crate::distributions::{ConvexShape, EmpiricalLaw, ScalarLaw, WeightedSample};
use crate::error::{Error, Result};
use crate::geometry::{
    body_from_support, exact_avg_quantile_body, hausdorff, DirectionGrid, Polygon2, SupportField, Vec2,
};
use crate::oracles::{alpha_m_direct, dual_avg_quantile, dual_expectile, dual_one_sided, lp_solve, LinearProgram};
use crate::risk::{avg_quantile, evaluate, expectile, one_sided_moment, ExpectationSpec, SpectralMeasure};
use crate::rng;
use crate::transforms::{
    centroid_via_ulam, classical_centroid_body, default_ulam_levels, depth_region, floating_like_body,
    integrated_depth_region, lp_centroid_constant, support_field, Source,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;
use statrs::function::gamma::ln_gamma;
use std::f64::consts::{E, PI};

pub const SUITES: [&str; 9] =
    ["duals", "axioms", "inclusion", "bob", "metronoid", "centroid", "continuity", "sweep", "max-extension"];

/// Run a suite by name.
pub fn run_suite(name: &str, p: &Params) -> Result<Report> {
    match name {
        "duals" => duals(p),
        "axioms" => axioms(p),
        "inclusion" => inclusion(p),
        "bob" => bob(p),
        "metronoid" => metronoid(p),
        "centroid" => centroid(p),
        "continuity" => continuity(p),
        "sweep" => sweep(p),
        "max-extension" => max_extension(p),
        _ => Err(Error::Input(format!("unknown suite '{name}'; expected one of {}", SUITES.join(", ")))),
    }
}

pub(crate) fn random_law(r: &mut ChaCha8Rng, max_atoms: usize) -> EmpiricalLaw {
    let n = r.random_range(1..=max_atoms);
    let v: Vec<f64> = (0..n).map(|_| r.random_range(-5.0..5.0)).collect();
    let w: Vec<f64> = (0..n).map(|_| r.random_range(0.05..1.0)).collect();
    let s: f64 = w.iter().sum();
    EmpiricalLaw::new(v, w.iter().map(|x| x / s).collect()).expect("valid random law")
}

/// Planar measure with `lo..=hi` atoms in `[-1,1]^2`, equal or random weights.
pub(crate) fn random_measure(r: &mut ChaCha8Rng, lo: usize, hi: usize, equal: bool) -> WeightedSample {
    let n = r.random_range(lo..=hi);
    let pts: Vec<Vec2> = (0..n).map(|_| Vec2::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))).collect();
    if equal {
        return WeightedSample::from_points2(&pts).expect("valid random measure");
    }
    let w: Vec<f64> = (0..n).map(|_| r.random_range(0.05..1.0)).collect();
    let s: f64 = w.iter().sum();
    WeightedSample::from_weighted2(&pts, w.iter().map(|x| x / s).collect()).expect("valid random measure")
}

/// Hull of 5 to 12 uniform points of the unit square, with nonzero area.
pub(crate) fn random_polygon(r: &mut ChaCha8Rng) -> ConvexShape {
    loop {
        let n = r.random_range(5..=12);
        let pts: Vec<Vec2> = (0..n).map(|_| Vec2::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))).collect();
        let p = Polygon2::from_points(&pts);
        if p.is_proper() && p.area() > 0.2 {
            return ConvexShape::polygon(p.vertices()).expect("proper polygon");
        }
    }
}

pub(crate) fn symmetric_hexagon() -> ConvexShape {
    let v: Vec<Vec2> = (0..6).map(|k| Vec2::from_angle(k as f64 * PI / 3.0 + 0.3) * (1.0 + 0.3 * (k % 3) as f64)).collect();
    let sym: Vec<Vec2> = v.iter().take(3).copied().chain(v.iter().take(3).map(|p| -*p)).collect();
    ConvexShape::polygon(&sym).expect("hexagon")
}

/// How far `inner` sticks out of `outer` (zero or negative when contained).
pub(crate) fn inclusion_excess(outer: &Polygon2, inner: &Polygon2) -> f64 {
    if inner.is_empty() {
        return 0.0;
    }
    if outer.is_empty() {
        return f64::INFINITY;
    }
    if outer.is_proper() {
        let hs = outer.halfspaces();
        return inner
            .vertices()
            .iter()
            .map(|q| hs.iter().map(|h| h.normal.dot(*q) - h.offset).fold(f64::NEG_INFINITY, f64::max))
            .fold(f64::NEG_INFINITY, f64::max)
            .max(0.0);
    }
    inner.vertices().iter().map(|q| outer.distance_to(*q)).fold(0.0, f64::max)
}

fn max_abs(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, |m, x| if x.is_nan() { f64::INFINITY } else { m.max(x.abs()) })
}

/// LP dual values against direct evaluation on random empirical laws.
pub fn duals(p: &Params) -> Result<Report> {
    let count = p.count.unwrap_or(200);
    let tol = p.tol.unwrap_or(1e-7);
    let rows: Vec<[f64; 4]> = (0..count)
        .into_par_iter()
        .map(|k| {
            let mut r = rng::stream(p.seed, k as u64);
            let law = random_law(&mut r, 12);
            let alpha = r.random_range(0.02..=1.0);
            let a = r.random_range(0.0..=1.0);
            let tau = r.random_range(0.5..0.99);
            let sl: ScalarLaw = law.clone().into();
            let (lp, w) = dual_avg_quantile(&law, alpha)?;
            let direct = avg_quantile(&sl, alpha)?;
            Ok([
                (lp - direct).abs(),
                (w.value - direct).abs().max(w.normalisation_error()),
                (dual_one_sided(&law, a)? - one_sided_moment(&sl, 1.0, a)?).abs(),
                (dual_expectile(&law, tau)? - expectile(&sl, tau)?).abs(),
            ])
        })
        .collect::<Result<_>>()?;
    let names = ["avg_quantile", "avg_quantile_witness", "one_sided", "expectile"];
    let checks = (0..4).map(|i| Check::at_most(names[i], max_abs(rows.iter().map(|r| r[i])), tol)).collect();
    Ok(Report { suite: "duals".into(), checks, seed: p.seed, params: json!({"laws": count, "max_atoms": 12, "tol": tol}) })
}

fn random_spec(r: &mut ChaCha8Rng, family: usize) -> ExpectationSpec {
    match family {
        0 => ExpectationSpec::Mean,
        1 => ExpectationSpec::avg_quantile(r.random_range(0.02..=1.0)),
        2 => ExpectationSpec::Spectral(
            SpectralMeasure::point(r.random_range(0.05..=1.0)).mix(r.random_range(0.0..1.0), &SpectralMeasure::max_mean(r.random_range(2..5))),
        ),
        3 => ExpectationSpec::OneSided { p: r.random_range(1.0..3.0), a: r.random_range(0.0..=1.0) },
        4 => ExpectationSpec::Expectile { tau: r.random_range(0.5..0.95) },
        5 => ExpectationSpec::max_ext(ExpectationSpec::avg_quantile(r.random_range(0.1..=1.0)), r.random_range(1..5)),
        _ => ExpectationSpec::EssSup,
    }
}

const FAMILIES: [&str; 7] = ["mean", "avg_quantile", "spectral", "one_sided", "expectile", "max_ext", "ess_sup"];

/// Monotonicity, translation equivariance, positive homogeneity and
/// subadditivity of every expectation family on coupled random laws.
pub fn axioms(p: &Params) -> Result<Report> {
    let trials = p.count.unwrap_or(1000);
    let tol = p.tol.unwrap_or(1e-10);
    // per trial and family: [monotone, translation, homogeneity, subadditivity]
    let rows: Vec<Vec<[f64; 4]>> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut r = rng::stream(p.seed, k as u64);
            let n = r.random_range(1..=8);
            let w: Vec<f64> = (0..n).map(|_| r.random_range(0.05..1.0)).collect();
            let s: f64 = w.iter().sum();
            let probs: Vec<f64> = w.iter().map(|x| x / s).collect();
            let x: Vec<f64> = (0..n).map(|_| r.random_range(-5.0..5.0)).collect();
            let y: Vec<f64> = (0..n).map(|_| r.random_range(-5.0..5.0)).collect();
            let d: Vec<f64> = (0..n).map(|_| r.random_range(0.0..3.0)).collect();
            let c = r.random_range(-5.0..5.0);
            let lam = r.random_range(0.1..5.0);
            let law = |v: Vec<f64>| -> Result<ScalarLaw> { Ok(EmpiricalLaw::new(v, probs.clone())?.into()) };
            let lx = law(x.clone())?;
            let ly = law(y.clone())?;
            let lxd = law(x.iter().zip(&d).map(|(a, b)| a + b).collect())?;
            let lxc = law(x.iter().map(|a| a + c).collect())?;
            let lxl = law(x.iter().map(|a| a * lam).collect())?;
            let lxy = law(x.iter().zip(&y).map(|(a, b)| a + b).collect())?;
            (0..FAMILIES.len())
                .map(|f| {
                    let spec = random_spec(&mut r, f);
                    let e = |l: &ScalarLaw| evaluate(&spec, l);
                    let (ex, ey) = (e(&lx)?, e(&ly)?);
                    let scale = 1.0 + ex.abs().max(ey.abs()).max(c.abs()) * lam.max(1.0);
                    Ok([
                        (ex - e(&lxd)?).max(0.0) / scale,
                        (e(&lxc)? - ex - c).abs() / scale,
                        (e(&lxl)? - lam * ex).abs() / scale,
                        (e(&lxy)? - ex - ey).max(0.0) / scale,
                    ])
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let axioms = ["monotone", "translation", "homogeneity", "subadditivity"];
    let mut checks = Vec::new();
    for (a, axiom) in axioms.iter().enumerate() {
        for (f, fam) in FAMILIES.iter().enumerate() {
            checks.push(Check::at_most(format!("{axiom}/{fam}"), max_abs(rows.iter().map(|r| r[f][a])), tol));
        }
    }
    Ok(Report { suite: "axioms".into(), checks, seed: p.seed, params: json!({"trials": trials, "tol": tol}) })
}

/// Exact sweep polygons against grid sandwiches of the same measures.
pub fn sweep(p: &Params) -> Result<Report> {
    let count = p.count.unwrap_or(50);
    let n = p.grid.unwrap_or(4096);
    let grid = DirectionGrid::uniform(n)?;
    let rows: Vec<[f64; 3]> = (0..count)
        .into_par_iter()
        .map(|k| {
            let mut r = rng::stream(p.seed, k as u64);
            let mu = random_measure(&mut r, 1, 40, false);
            let alpha = p.alpha.unwrap_or_else(|| r.random_range(0.05..0.95));
            let exact = exact_avg_quantile_body(&mu, alpha)?;
            let est = body_from_support(&support_field(&mu.into(), &ExpectationSpec::avg_quantile(alpha), &grid)?)?;
            // point bodies (one atom) are compared in absolute terms
            let diam = est.outer.diameter();
            let diam = if diam < 1e-9 { 1.0 } else { diam };
            Ok([
                est.gap / diam,
                (hausdorff(&exact, &est.outer)? - est.gap).max(0.0) / diam,
                inclusion_excess(&exact, &est.inner) / diam,
            ])
        })
        .collect::<Result<_>>()?;
    let tol = p.tol.unwrap_or(1e-9);
    let checks = vec![
        Check::at_most("gap_over_diameter", max_abs(rows.iter().map(|r| r[0])), 1e-3),
        Check::at_most("exact_within_gap", max_abs(rows.iter().map(|r| r[1])), tol),
        Check::at_most("inner_inside_exact", max_abs(rows.iter().map(|r| r[2])), tol),
    ];
    Ok(Report { suite: "sweep".into(), checks, seed: p.seed, params: json!({"measures": count, "grid": n, "max_atoms": 40}) })
}

/// Zonoid-trimmed (metronoid) linear programs against the quantile-integral
/// support, plus the sweep consistency checks.
pub fn metronoid(p: &Params) -> Result<Report> {
    let count = p.count.unwrap_or(30);
    let tol = p.tol.unwrap_or(1e-8);
    let errs: Vec<f64> = (0..count)
        .into_par_iter()
        .map(|k| {
            let mut r = rng::stream(p.seed, 10_000 + k as u64);
            let mu = random_measure(&mut r, 1, 12, false);
            let alpha = p.alpha.unwrap_or_else(|| r.random_range(0.05..=1.0));
            let body = exact_avg_quantile_body(&mu, alpha)?;
            let pts = mu.points2().expect("planar");
            let mut worst: f64 = 0.0;
            for j in 0..16 {
                let u = Vec2::from_angle(j as f64 * PI / 8.0 + 0.1);
                // maximise sum lambda_i p_i <x_i,u> with 0 <= lambda_i <= 1/alpha, sum lambda_i p_i = 1
                let lp = LinearProgram {
                    objective: pts.iter().zip(mu.weights()).map(|(x, w)| w * x.dot(u)).collect(),
                    eq: vec![(mu.weights().to_vec(), 1.0)],
                    bounds: vec![(0.0, 1.0 / alpha); pts.len()],
                    ..Default::default()
                };
                let v = lp_solve(&lp)?.value;
                let q = avg_quantile(&mu.project(&[u.x, u.y])?.into(), alpha)?;
                worst = worst.max((v - q).abs()).max((v - body.support(u)).abs());
            }
            Ok(worst)
        })
        .collect::<Result<_>>()?;
    let mut checks = vec![Check::at_most("lp_equals_quantile_integral", max_abs(errs), tol)];
    let sw = sweep(&Params { count: Some(p.count.unwrap_or(20)), tol: None, ..p.clone() })?;
    checks.extend(sw.checks.into_iter().map(|c| Check { name: format!("sweep/{}", c.name), ..c }));
    Ok(Report { suite: "metronoid".into(), checks, seed: p.seed, params: json!({"measures": count, "directions": 16, "tol": tol}) })
}

/// Depth-region inclusion chains: `D_a ⊆ (1/a) int_0^a D_t dt ⊆ E_a` on
/// discrete measures and `D_{(e-1)a/e} ⊆ E_a ⊆ D_{a/e}` on uniform polygons.
pub fn inclusion(p: &Params) -> Result<Report> {
    let grid = DirectionGrid::uniform(p.grid.unwrap_or(720))?;
    let slack = p.tol.unwrap_or(1e-6);
    let measures = p.count.unwrap_or(50);
    let polygons = p.count.map(|c| c.min(20)).unwrap_or(20);
    let mut checks = Vec::new();
    let chain: Vec<Vec<Check>> = (0..measures)
        .into_par_iter()
        .map(|k| {
            let mut r = rng::stream(p.seed, k as u64);
            let src: Source = random_measure(&mut r, 3, 30, true).into();
            [0.2, 0.5]
                .iter()
                .map(|&alpha| {
                    let e = body_from_support(&support_field(&src, &ExpectationSpec::avg_quantile(alpha), &grid)?)?;
                    let avg = integrated_depth_region(&src, alpha, &grid)?;
                    let d = depth_region(&src, alpha, &grid)?.region;
                    let tol = e.gap + slack;
                    Ok(vec![
                        Check::at_most(format!("body_contains_integrated_depth/{k:03}/{alpha}"), inclusion_excess(&e.outer, &avg), tol),
                        Check::at_most(format!("integrated_depth_contains_depth/{k:03}/{alpha}"), inclusion_excess(&avg, &d), slack),
                    ])
                })
                .collect::<Result<Vec<Vec<Check>>>>()
                .map(|v| v.concat())
        })
        .collect::<Result<_>>()?;
    checks.extend(chain.into_iter().flatten());
    let lower = (E - 1.0) / E;
    let upper = 1.0 / E;
    let logc: Vec<Vec<Check>> = (0..polygons)
        .into_par_iter()
        .map(|k| {
            let mut r = rng::stream(p.seed, 1_000 + k as u64);
            let src: Source = random_polygon(&mut r).into();
            (1..=5)
                .map(|i| {
                    let alpha = i as f64 / 10.0;
                    let e = body_from_support(&support_field(&src, &ExpectationSpec::avg_quantile(alpha), &grid)?)?;
                    let small = depth_region(&src, lower * alpha, &grid)?.region;
                    let big = depth_region(&src, upper * alpha, &grid)?.region;
                    let tol = e.gap + slack;
                    Ok(vec![
                        Check::at_most(format!("body_contains_deep_region/{k:03}/{alpha}"), inclusion_excess(&e.outer, &small), tol),
                        Check::at_most(format!("shallow_region_contains_body/{k:03}/{alpha}"), inclusion_excess(&big, &e.inner), tol),
                    ])
                })
                .collect::<Result<Vec<Vec<Check>>>>()
                .map(|v| v.concat())
        })
        .collect::<Result<_>>()?;
    checks.extend(logc.into_iter().flatten());
    Ok(Report {
        suite: "inclusion".into(),
        checks,
        seed: p.seed,
        params: json!({"grid": grid.len(), "measures": measures, "polygons": polygons, "slack": slack}),
    })
}

/// Depth regions of symmetric uniform bodies have support `q_{1-delta}`:
/// the grid polygon is compared with the quantile in 4999 off-grid directions.
pub fn bob(p: &Params) -> Result<Report> {
    let n = p.grid.unwrap_or(2048);
    let grid = DirectionGrid::uniform(n)?;
    let shapes = [("square", ConvexShape::square(1.0)), ("hexagon", symmetric_hexagon())];
    let deltas: Vec<f64> = (0..8).map(|k| 0.1 + 0.05 * k as f64).collect();
    let mut checks = Vec::new();
    for (name, shape) in &shapes {
        let src: Source = shape.clone().into();
        for &delta in &deltas {
            let d = depth_region(&src, delta, &grid)?;
            let gap = body_from_support(&SupportField::new(grid.clone(), d.offsets.clone(), None)?)?.gap;
            let err = (0..4999)
                .into_par_iter()
                .map(|k| {
                    let u = Vec2::from_angle(0.000_37 + k as f64 * 2.0 * PI / 4999.0);
                    let q = shape.project(&[u.x, u.y])?.quantile(1.0 - delta)?;
                    Ok((d.region.support(u) - q).abs())
                })
                .collect::<Result<Vec<f64>>>()?;
            checks.push(Check::at_most(format!("{name}/{delta:.2}"), max_abs(err), gap + p.tol.unwrap_or(1e-12)));
        }
    }
    Ok(Report { suite: "bob".into(), checks, seed: p.seed, params: json!({"grid": n, "test_directions": 4999}) })
}

fn ball_abs_moment(d: usize, p: f64) -> f64 {
    let h = d as f64 / 2.0;
    (ln_gamma((p + 1.0) / 2.0) + ln_gamma(h + 1.0) - 0.5 * PI.ln() - ln_gamma(h + p / 2.0 + 1.0)).exp()
}

/// Centroid bodies: the disk value, the Ulam-body route against the direct
/// one, and the `L^p` normalising constants.
pub fn centroid(p: &Params) -> Result<Report> {
    let grid = DirectionGrid::uniform(p.grid.unwrap_or(720))?;
    let mut checks = Vec::new();
    let disk = ConvexShape::unit_disk();
    let f = support_field(&disk.clone().into(), &ExpectationSpec::OneSided { p: 1.0, a: 1.0 }, &grid)?;
    checks.push(Check::at_most(
        "disk_value",
        max_abs(f.values.iter().map(|h| h - 2.0 / (3.0 * PI))),
        p.tol.unwrap_or(1e-6),
    ));
    for (name, shape) in [("disk", disk), ("square", ConvexShape::square(1.0))] {
        let via = centroid_via_ulam(&shape, &default_ulam_levels(), &grid)?;
        let direct = classical_centroid_body(&shape, &grid)?;
        let d = hausdorff(&via.outer, &direct.outer)?;
        checks.push(Check::at_most(format!("two_paths/{name}"), d, via.gap + direct.gap + 1e-9));
        checks.push(Check::at_most(format!("gap_over_diameter/{name}"), (via.gap + direct.gap) / direct.outer.diameter(), 5e-3));
    }
    for d in [2, 3, 4] {
        for q in [1.0, 2.0, 3.0] {
            let c = lp_centroid_constant(d, q)?;
            checks.push(Check::at_most(format!("lp_constant/{d}/{q}"), (c - ball_abs_moment(d, q)).abs(), 1e-12));
        }
    }
    Ok(Report { suite: "centroid".into(), checks, seed: p.seed, params: json!({"grid": grid.len()}) })
}

/// Hausdorff distances of bodies of shrinking vertex perturbations.
pub fn continuity(p: &Params) -> Result<Report> {
    let grid = DirectionGrid::uniform(p.grid.unwrap_or(720))?;
    let mut r = rng::stream(p.seed, 0);
    let base: Vec<Vec2> = (0..5).map(|k| Vec2::from_angle(0.4 + k as f64 * 2.0 * PI / 5.0) * 2.0).collect();
    let shifts: Vec<Vec2> = (0..5).map(|_| Vec2::from_angle(r.random_range(0.0..2.0 * PI))).collect();
    let specs = [
        ExpectationSpec::avg_quantile(0.3),
        ExpectationSpec::OneSided { p: 2.0, a: 1.0 },
        ExpectationSpec::Expectile { tau: 0.8 },
    ];
    let mut checks = Vec::new();
    let mut series = Vec::new();
    for spec in &specs {
        let limit = floating_like_body(&ConvexShape::polygon(&base)?.into(), spec, &grid)?;
        let dists: Vec<f64> = (1..=10)
            .map(|k| {
                let eps = 0.5f64.powi(k);
                let pts: Vec<Vec2> = base.iter().zip(&shifts).map(|(v, s)| *v + *s * eps).collect();
                let b = floating_like_body(&ConvexShape::polygon(&pts)?.into(), spec, &grid)?;
                hausdorff(&b.outer, &limit.outer)
            })
            .collect::<Result<_>>()?;
        let rise = dists.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
        checks.push(Check::at_most(format!("nonincreasing/{}", spec.label()), rise, p.tol.unwrap_or(1e-12)));
        checks.push(Check::at_most(format!("final/{}", spec.label()), dists[9], 1e-2));
        series.push(json!({"spec": spec.label(), "hausdorff": dists}));
    }
    Ok(Report { suite: "continuity".into(), checks, seed: p.seed, params: json!({"grid": grid.len(), "series": series}) })
}

/// Expected maxima of uniforms and the two routes to the maximum extension
/// of the average quantile.
pub fn max_extension(p: &Params) -> Result<Report> {
    let mut checks = Vec::new();
    let u = ScalarLaw::uniform(0.0, 1.0)?;
    let err = (1..=10)
        .map(|m| Ok((evaluate(&ExpectationSpec::max_ext(ExpectationSpec::Mean, m), &u)? - m as f64 / (m as f64 + 1.0)).abs()))
        .collect::<Result<Vec<f64>>>()?;
    checks.push(Check::at_most("uniform_expected_max", max_abs(err), 1e-10));
    let count = p.count.unwrap_or(50);
    let errs = (0..count)
        .into_par_iter()
        .map(|k| {
            let mut r = rng::stream(p.seed, k as u64);
            let law: ScalarLaw = match k % 3 {
                0 => random_law(&mut r, 12).into(),
                1 => ScalarLaw::uniform(r.random_range(-2.0..0.0), r.random_range(0.1..2.0))?,
                _ => ConvexShape::Ball { center: vec![0.0; 3], radius: r.random_range(0.5..2.0) }.project(&[1.0, 0.0, 0.0])?,
            };
            let alpha = r.random_range(0.05..=1.0);
            let m = r.random_range(1..=6);
            let a = alpha_m_direct(&law, alpha, m)?;
            let b = evaluate(&ExpectationSpec::max_ext(ExpectationSpec::avg_quantile(alpha), m), &law)?;
            Ok((a - b).abs())
        })
        .collect::<Result<Vec<f64>>>()?;
    checks.push(Check::at_most("alpha_m_routes", max_abs(errs), p.tol.unwrap_or(1e-9)));
    Ok(Report { suite: "max-extension".into(), checks, seed: p.seed, params: json!({"laws": count}) })
}
