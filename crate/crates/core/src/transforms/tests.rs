use super::*;
use crate::distributions::{ConvexShape, WeightedSample};
use crate::geometry::{contains, hausdorff, DirectionGrid, Polygon2, Vec2};
use crate::oracles::mc_expected_hull_support;
use crate::risk::{expectile, one_sided_family, ExpectationSpec, SpectralMeasure};
use std::f64::consts::PI;

fn l1() -> ConvexShape {
    ConvexShape::L1Ball { center: vec![0.0, 0.0], radius: 1.0 }
}

fn thin_box() -> ConvexShape {
    ConvexShape::Box { center: vec![0.0, 0.0], half_widths: vec![0.8, 0.1] }
}

fn hexagon() -> ConvexShape {
    let v: Vec<Vec2> = (0..6).map(|k| Vec2::from_angle(k as f64 * PI / 3.0 + 0.2) * 1.3).collect();
    ConvexShape::polygon(&v).unwrap()
}

fn random_sample(n: usize, seed: u64) -> WeightedSample {
    use rand::Rng;
    let mut r = crate::rng::stream(seed, 0);
    let pts: Vec<Vec2> = (0..n).map(|_| Vec2::new(r.random_range(-1.0..1.0), r.random_range(-1.0..2.0))).collect();
    WeightedSample::from_points2(&pts).unwrap()
}

/// `E|B|^p` for the first coordinate of a uniform point in the unit ball of `R^d`.
fn ball_abs_moment(d: usize, p: f64) -> f64 {
    use statrs::function::gamma::ln_gamma;
    let h = d as f64 / 2.0;
    (ln_gamma((p + 1.0) / 2.0) + ln_gamma(h + 1.0) - 0.5 * PI.ln() - ln_gamma(h + p / 2.0 + 1.0)).exp()
}

#[test]
fn closed_form_support_values() {
    let grid = DirectionGrid::uniform(720).unwrap();
    let spec = ExpectationSpec::avg_quantile(0.5);
    let e = Vec2::new(1.0, 0.0);
    let b = floating_like_body(&l1().into(), &spec, &grid).unwrap();
    assert!((b.support(e) - 1.0 / 3.0).abs() < 1e-12);
    let b = floating_like_body(&thin_box().into(), &spec, &grid).unwrap();
    assert!((b.support(e) - 0.4).abs() < 1e-12);
    assert!(b.gap < 1e-3);
}

#[test]
fn ball_bodies_are_balls() {
    let grid = DirectionGrid::uniform(256).unwrap();
    let r = 1.7;
    let disk: Source = ConvexShape::Ball { center: vec![0.0, 0.0], radius: r }.into();
    let marginal = ConvexShape::unit_disk().project(&[1.0, 0.0]).unwrap();
    for spec in [
        ExpectationSpec::avg_quantile(0.3),
        ExpectationSpec::OneSided { p: 2.0, a: 0.7 },
        ExpectationSpec::Expectile { tau: 0.8 },
        ExpectationSpec::max_ext(ExpectationSpec::Mean, 3),
    ] {
        let f = support_field(&disk, &spec, &grid).unwrap();
        let radius = r * crate::risk::evaluate(&spec, &marginal).unwrap();
        for (h, x) in f.values.iter().zip(f.touch.as_ref().unwrap()) {
            assert!((h - radius).abs() < 1e-9, "{spec:?}");
            assert!((x.norm() - radius).abs() < 1e-9);
        }
    }
}

#[test]
fn polygon_touch_points_are_on_the_body() {
    // each touch point of E_spec(K) satisfies every support inequality
    let grid = DirectionGrid::uniform(90).unwrap();
    let src: Source = hexagon().into();
    for spec in [
        ExpectationSpec::avg_quantile(0.25),
        ExpectationSpec::OneSided { p: 1.5, a: 1.0 },
        ExpectationSpec::Expectile { tau: 0.9 },
        ExpectationSpec::Spectral(SpectralMeasure::uniform()),
        ExpectationSpec::max_ext(ExpectationSpec::avg_quantile(0.5), 2),
        ExpectationSpec::EssSup,
    ] {
        let f = support_field(&src, &spec, &grid).unwrap();
        for x in f.touch.as_ref().unwrap() {
            for (u, h) in grid.directions().iter().zip(&f.values) {
                assert!(x.dot(*u) <= h + 1e-9, "{spec:?}");
            }
        }
        // a polygon edge whose normal falls between grid directions leaves an
        // outer corner at distance up to edge * spacing / 4
        let b = body_from_support(&f).unwrap();
        assert!(b.gap < 1.3 * (2.0 * PI / 90.0) / 4.0 + 1e-9, "{spec:?} {}", b.gap);
    }
}

#[test]
fn discrete_avg_quantile_bodies_agree_with_the_grid_path() {
    let grid = DirectionGrid::uniform(1024).unwrap();
    let mu = random_sample(15, 3);
    let spec = ExpectationSpec::avg_quantile(0.3);
    let exact = floating_like_body(&mu.clone().into(), &spec, &grid).unwrap();
    assert_eq!(exact.gap, 0.0);
    let approx = body_from_support(&support_field(&mu.into(), &spec, &grid).unwrap()).unwrap();
    assert!(hausdorff(&exact.outer, &approx.outer).unwrap() <= approx.gap + 1e-12);
    assert!(contains(&exact.outer, &approx.inner, 1e-12));
}

#[test]
fn depth_region_examples() {
    let grid = DirectionGrid::uniform(720).unwrap();
    let sq: Source = ConvexShape::square(1.0).into();
    let d = depth_region(&sq, 0.25, &grid).unwrap();
    assert!((d.offsets[0] - 0.5).abs() < 1e-12);
    assert!(!d.atomic);
    let disk: Source = ConvexShape::unit_disk().into();
    assert!(depth_region(&disk, 0.6, &grid).unwrap().is_empty());
    let d = depth_region(&random_sample(30, 1).into(), 0.2, &grid).unwrap();
    assert!(d.atomic);
}

#[test]
fn symmetric_depth_regions_have_quantile_support() {
    let grid = DirectionGrid::uniform(720).unwrap();
    for shape in [ConvexShape::square(1.0), hexagon()] {
        let src: Source = shape.clone().into();
        for delta in [0.1, 0.3, 0.45] {
            let d = depth_region(&src, delta, &grid).unwrap();
            let gap = body_from_support(&crate::geometry::SupportField::new(grid.clone(), d.offsets.clone(), None).unwrap())
                .unwrap()
                .gap;
            for k in 0..97 {
                let u = Vec2::from_angle(0.013 + k as f64 * 0.0647);
                let q = shape.project(&[u.x, u.y]).unwrap().quantile(1.0 - delta).unwrap();
                assert!((d.region.support(u) - q).abs() <= gap + 1e-12);
            }
        }
    }
}

#[test]
fn ulam_floating_examples() {
    let grid = DirectionGrid::uniform(360).unwrap();
    let sq = ConvexShape::square(1.0);
    let full = ulam_floating(&sq, 4.0, &grid).unwrap();
    assert!(full.outer.diameter() < 1e-12 && full.outer.vertices()[0].norm() < 1e-12);
    assert!(ulam_floating(&sq, 4.5, &grid).is_err());
    // M_delta(cK) = c M_{delta c^-2}(K)
    let big = ConvexShape::square(2.0);
    let lhs = ulam_floating(&big, 1.2, &grid).unwrap();
    let rhs = ulam_floating(&sq, 1.2 / 4.0, &grid).unwrap();
    for (a, b) in lhs.outer.vertices().iter().zip(rhs.outer.vertices()) {
        assert!((*a - *b * 2.0).norm() < 1e-9);
    }
    // alpha E_alpha grows on (0, 1/2] for symmetric K
    let mut prev: Option<Polygon2> = None;
    for k in 1..=5 {
        let a = k as f64 / 10.0;
        let b = ulam_floating(&sq, 4.0 * a, &grid).unwrap().outer.scale(a);
        if let Some(p) = prev {
            assert!(contains(&b, &p, 1e-12));
        }
        prev = Some(b);
    }
}

#[test]
fn centroid_examples() {
    let grid = DirectionGrid::uniform(720).unwrap();
    let disk = ConvexShape::unit_disk();
    let f = support_field(&disk.clone().into(), &ExpectationSpec::OneSided { p: 1.0, a: 1.0 }, &grid).unwrap();
    for h in &f.values {
        assert!((h - 2.0 / (3.0 * PI)).abs() < 1e-12);
    }
    let g = classical_centroid_body(&disk, &grid).unwrap();
    assert!((g.support(Vec2::new(0.0, 1.0)) - 4.0 / (3.0 * PI)).abs() < 1e-12);
    let shifted = ConvexShape::Ball { center: vec![0.3, -1.0], radius: 2.0 };
    let b = centroid_body(&shifted, 2.0, 0.0, &grid).unwrap();
    assert!(b.outer.diameter() < 1e-12 && (b.outer.vertices()[0] - Vec2::new(0.3, -1.0)).norm() < 1e-12);
    assert!(classical_centroid_body(&shifted, &grid).is_err());
    // symmetric laws: e_{p,1} = (E b_+^p)^(1/p) = 2^(-1/p) |b|_p
    let hex = hexagon();
    for p in [1.0, 2.0, 3.5] {
        let f = support_field(&hex.clone().into(), &ExpectationSpec::OneSided { p, a: 1.0 }, &grid).unwrap();
        for (u, h) in grid.directions().iter().zip(&f.values).step_by(37) {
            let law = hex.project(&[u.x, u.y]).unwrap();
            let norm = law.expect(|s| s.abs().powf(p), &[0.5]).powf(1.0 / p);
            assert!((h - 2f64.powf(-1.0 / p) * norm).abs() < 1e-10);
        }
    }
}

#[test]
fn lp_centroid_normalisation() {
    for d in [2, 3, 5] {
        for p in [1.0, 2.0, 4.5] {
            let c = lp_centroid_constant(d, p).unwrap();
            assert!((c - ball_abs_moment(d, p)).abs() < 1e-12, "d={d} p={p}");
        }
    }
    let grid = DirectionGrid::uniform(180).unwrap();
    let b = lp_centroid_body(&ConvexShape::unit_disk(), 3.0, &grid).unwrap();
    for u in grid.directions() {
        assert!((b.support(*u) - 1.0).abs() < 1e-10);
    }
}

#[test]
fn centroid_from_ulam_bodies() {
    let grid = DirectionGrid::uniform(720).unwrap();
    for shape in [ConvexShape::unit_disk(), ConvexShape::square(1.0)] {
        let via = centroid_via_ulam(&shape, &default_ulam_levels(), &grid).unwrap();
        let direct = classical_centroid_body(&shape, &grid).unwrap();
        let d = hausdorff(&via.outer, &direct.outer).unwrap();
        assert!(d <= via.gap + direct.gap + 1e-9, "{d}");
    }
    let disk = centroid_via_ulam(&ConvexShape::unit_disk(), &[0.5], &grid).unwrap();
    assert!((disk.support(Vec2::new(1.0, 0.0)) - 4.0 / (3.0 * PI)).abs() < 1e-12);
    let zero = centroid_via_ulam(&ConvexShape::square(1.0), &[1.0], &grid).unwrap();
    assert!(zero.outer.vertices().iter().all(|v| v.norm() < 1e-12));
    let tri = ConvexShape::polygon(&[Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)]).unwrap();
    assert!(centroid_via_ulam(&tri, &[0.5], &grid).is_err());
}

#[test]
fn expectile_examples() {
    let grid = DirectionGrid::uniform(360).unwrap();
    let sq = ConvexShape::square(1.0);
    let half = expectile_transform(&sq, 0.5, 16, &grid).unwrap();
    assert!(half.direct.outer.diameter() < 1e-9 && half.representation.outer.diameter() < 1e-12);
    let disk = ConvexShape::unit_disk();
    let b = expectile_transform(&disk, 0.9, 256, &grid).unwrap();
    let radius = expectile(&disk.project(&[1.0, 0.0]).unwrap(), 0.9).unwrap();
    assert!((b.direct.support(Vec2::new(0.0, 1.0)) - radius).abs() < 1e-10);
    let d = hausdorff(&b.direct.outer, &b.representation.outer).unwrap();
    assert!(d < 1e-3, "{d}");
    let t = expectile_transform(&sq, 0.75, 64, &grid).unwrap();
    let square = sq.to_polygon().unwrap();
    for body in [&t.direct, &t.representation] {
        assert!(contains(&body.outer, &Polygon2::point(Vec2::ZERO), 0.0));
        assert!(contains(&square, &body.outer, 1e-12));
    }
}

#[test]
fn expected_polytope_examples() {
    let grid = DirectionGrid::uniform(256).unwrap();
    let sq: Source = ConvexShape::square(1.0).into();
    let one = expected_polytope(&sq, 1, &grid).unwrap();
    assert_eq!(one.outer.vertices(), &[Vec2::ZERO]);
    let two = expected_polytope(&sq, 2, &grid).unwrap();
    let direct = support_field(&sq, &ExpectationSpec::max_ext(ExpectationSpec::Mean, 2), &grid).unwrap();
    for (u, h) in grid.directions().iter().zip(&direct.values) {
        assert!((two.support(*u) - h).abs() < 1e-8);
    }
    let mc = mc_expected_hull_support(&ConvexShape::square(1.0), 2, &[vec![1.0, 0.0]], 100_000, 0).unwrap();
    let h = two.support(Vec2::new(1.0, 0.0));
    assert!((mc[0].value - h).abs() < 3.0 * mc[0].std_error, "{} vs {h}", mc[0].value);
    let mut prev = two.outer;
    for m in [4, 8, 16] {
        let b = expected_polytope(&sq, m, &grid).unwrap();
        assert!(contains(&b.outer, &prev, 1e-9));
        prev = b.outer;
    }
}

#[test]
fn kusuoka_examples() {
    let grid = DirectionGrid::uniform(180).unwrap();
    let mu: Source = random_sample(10, 7).into();
    let single = kusuoka_body(&mu, &[SpectralMeasure::point(0.3)], &grid).unwrap();
    let direct = body_from_support(&support_field(&mu, &ExpectationSpec::avg_quantile(0.3), &grid).unwrap()).unwrap();
    assert!(hausdorff(&single.outer, &direct.outer).unwrap() < 1e-12);
    let fam = kusuoka_body(&mu, &one_sided_family(1.0, 10), &grid).unwrap();
    let one_sided =
        floating_like_body(&mu, &ExpectationSpec::OneSided { p: 1.0, a: 1.0 }, &grid).unwrap();
    assert!(hausdorff(&fam.outer, &one_sided.outer).unwrap() < 1e-8);
    let top = kusuoka_body(&mu, &[SpectralMeasure::point(1.0)], &grid).unwrap();
    assert!((top.outer.vertices()[0] - mu.barycenter()).norm() < 1e-12);
    assert!(top.outer.diameter() < 1e-12);
    assert!(kusuoka_body(&mu, &[], &grid).is_err());
}

#[test]
fn fingerprint_examples() {
    use crate::distributions::{EmpiricalLaw, ScalarLaw};
    let law: ScalarLaw = EmpiricalLaw::new(vec![-1.0, 0.5, 2.0], vec![0.2, 0.5, 0.3]).unwrap().into();
    assert!((max_extension_spectral_family(&law, 0.0, 1).unwrap() - law.mean()).abs() < 1e-15);
    let u = ScalarLaw::uniform(0.0, 1.0).unwrap();
    for m in 1..=6 {
        let v = max_extension_spectral_family(&u, 0.0, m).unwrap();
        assert!((v - m as f64 / (m as f64 + 1.0)).abs() < 1e-12);
    }
    let a: ScalarLaw = EmpiricalLaw::new(vec![-1.0, 1.0], vec![0.5, 0.5]).unwrap().into();
    let b: ScalarLaw = EmpiricalLaw::new(vec![-2.0, 0.0, 2.0], vec![0.25, 0.5, 0.25]).unwrap().into();
    assert!((a.mean() - b.mean()).abs() < 1e-15);
    let differ = (1..=8).any(|m| {
        (max_extension_spectral_family(&a, 0.5, m).unwrap() - max_extension_spectral_family(&b, 0.5, m).unwrap()).abs()
            > 1e-9
    });
    assert!(differ);
}

#[test]
fn inclusion_chain_on_a_discrete_measure() {
    let grid = DirectionGrid::uniform(360).unwrap();
    let mu: Source = random_sample(12, 11).into();
    for alpha in [0.2, 0.5] {
        let e = body_from_support(&support_field(&mu, &ExpectationSpec::avg_quantile(alpha), &grid).unwrap()).unwrap();
        let avg = integrated_depth_region(&mu, alpha, &grid).unwrap();
        let d = depth_region(&mu, alpha, &grid).unwrap().region;
        if avg.is_empty() {
            assert!(d.is_empty());
            continue;
        }
        assert!(contains(&e.outer, &avg, e.gap + 1e-6));
        if !d.is_empty() {
            assert!(contains(&avg, &d, 1e-6));
        }
    }
}

#[test]
fn integrated_depth_matches_avg_quantile_on_symmetric_shapes() {
    let grid = DirectionGrid::uniform(360).unwrap();
    let sq: Source = ConvexShape::square(1.0).into();
    for alpha in [0.2, 0.5] {
        let e = floating_like_body(&sq, &ExpectationSpec::avg_quantile(alpha), &grid).unwrap();
        let avg = integrated_depth_region(&sq, alpha, &grid).unwrap();
        let d = hausdorff(&e.outer, &avg).unwrap();
        assert!(d < e.gap + 1e-4, "{d}");
    }
}

mod props {
    use super::*;
    use crate::geometry::minkowski_sum;
    use proptest::prelude::*;

    fn measure(max: usize) -> impl Strategy<Value = WeightedSample> {
        prop::collection::vec(((-3.0f64..3.0, -3.0f64..3.0), 0.1f64..1.0), 1..max).prop_map(|atoms| {
            let pts: Vec<Vec2> = atoms.iter().map(|((x, y), _)| Vec2::new(*x, *y)).collect();
            let w: Vec<f64> = atoms.iter().map(|a| a.1).collect();
            let s: f64 = w.iter().sum();
            WeightedSample::from_weighted2(&pts, w.iter().map(|x| x / s).collect()).unwrap()
        })
    }

    fn scale(p: &Polygon2) -> f64 {
        1.0 + p.diameter()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn affine_equivariance(mu in measure(15), a in prop::array::uniform4(-2.0f64..2.0), b in prop::array::uniform2(-5.0f64..5.0), alpha in 0.05f64..1.0) {
            let m = [[a[0], a[1]], [a[2], a[3]]];
            prop_assume!((m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs() > 0.1);
            let lhs = exact_avg_quantile_body(&mu.affine(&[m[0].to_vec(), m[1].to_vec()], &b).unwrap(), alpha).unwrap();
            let body = exact_avg_quantile_body(&mu, alpha).unwrap();
            let rhs = body.map(|v| Vec2::new(m[0][0] * v.x + m[0][1] * v.y + b[0], m[1][0] * v.x + m[1][1] * v.y + b[1]));
            prop_assert!(hausdorff(&lhs, &rhs).unwrap() <= 1e-9 * scale(&lhs));
        }

        #[test]
        fn subadditivity(mu in measure(7), eta in measure(7), alpha in 0.05f64..1.0) {
            let sum = exact_avg_quantile_body(&mu.convolve(&eta).unwrap(), alpha).unwrap();
            let parts = minkowski_sum(
                &exact_avg_quantile_body(&mu, alpha).unwrap(),
                &exact_avg_quantile_body(&eta, alpha).unwrap(),
            );
            prop_assert!(contains(&parts, &sum, 1e-9 * scale(&parts)));
        }

        #[test]
        fn singleton_at_one_and_nesting(mu in measure(20), a in 0.05f64..1.0, b in 0.05f64..1.0) {
            let (lo, hi) = (a.min(b), a.max(b));
            let big = exact_avg_quantile_body(&mu, lo).unwrap();
            let small = exact_avg_quantile_body(&mu, hi).unwrap();
            prop_assert!(contains(&big, &small, 1e-9 * scale(&big)));
            let one = exact_avg_quantile_body(&mu, 1.0).unwrap();
            prop_assert_eq!(one.len(), 1);
            let c = mu.barycenter();
            prop_assert!((one.vertices()[0] - Vec2::new(c[0], c[1])).norm() <= 1e-12 * scale(&big));
        }

        #[test]
        fn support_fields_are_sublinear(mu in measure(20), which in 0usize..5) {
            let spec = [
                ExpectationSpec::avg_quantile(0.3),
                ExpectationSpec::OneSided { p: 2.0, a: 0.8 },
                ExpectationSpec::Expectile { tau: 0.85 },
                ExpectationSpec::Spectral(SpectralMeasure::max_mean(3)),
                ExpectationSpec::max_ext(ExpectationSpec::avg_quantile(0.5), 2),
            ][which].clone();
            let grid = DirectionGrid::uniform(64).unwrap();
            let f = support_field(&mu.into(), &spec, &grid).unwrap();
            prop_assert!(f.sublinearity_violation() <= 1e-9);
        }

        #[test]
        fn sweep_matches_fine_grid(mu in measure(25), alpha in 0.05f64..0.95) {
            let grid = DirectionGrid::uniform(4096).unwrap();
            let exact = exact_avg_quantile_body(&mu, alpha).unwrap();
            let est = body_from_support(&support_field(&mu.into(), &ExpectationSpec::avg_quantile(alpha), &grid).unwrap()).unwrap();
            prop_assert!(est.gap <= 1e-3 * scale(&est.outer));
            prop_assert!(hausdorff(&exact, &est.outer).unwrap() <= est.gap + 1e-9 * scale(&exact));
        }
    }
}
