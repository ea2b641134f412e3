use super::*;
use crate::distributions::{ConvexShape, EmpiricalLaw, ScalarLaw};
use crate::risk::{avg_quantile, evaluate, expectile, one_sided_moment, ExpectationSpec};
use proptest::prelude::*;

fn emp(v: &[f64]) -> EmpiricalLaw {
    EmpiricalLaw::uniform_on(v).unwrap()
}

#[test]
fn avg_quantile_dual_examples() {
    let (v, w) = dual_avg_quantile(&emp(&[1.0, 2.0, 3.0, 4.0]), 0.5).unwrap();
    assert!((v - 3.5).abs() < 1e-12);
    assert_eq!(w.gamma, vec![0.0, 0.0, 2.0, 2.0]);
    let law = emp(&[0.3, -1.0, 2.0]);
    let (v, w) = dual_avg_quantile(&law, 1.0).unwrap();
    assert!((v - law.values().iter().sum::<f64>() / 3.0).abs() < 1e-12);
    assert!(w.gamma.iter().all(|g| (g - 1.0).abs() < 1e-15));
    let skew = EmpiricalLaw::new(vec![0.0, 1.0], vec![0.9, 0.1]).unwrap();
    let (v, w) = dual_avg_quantile(&skew, 0.25).unwrap();
    assert!((v - 0.4).abs() < 1e-12);
    assert!((w.gamma[1] - 4.0).abs() < 1e-12 && (w.gamma[0] - 0.15 / 0.9 * 4.0).abs() < 1e-12);
}

#[test]
fn one_sided_and_expectile_dual_examples() {
    let two = emp(&[0.0, 1.0]);
    assert!((dual_one_sided(&two, 1.0).unwrap() - 0.75).abs() < 1e-12);
    let law = emp(&[0.2, 1.5, -3.0, 4.0]);
    let mean: f64 = law.values().iter().sum::<f64>() / 4.0;
    assert!((dual_one_sided(&law, 0.0).unwrap() - mean).abs() < 1e-12);
    assert!((dual_expectile(&law, 0.5).unwrap() - mean).abs() < 1e-12);
    assert!((dual_expectile(&two, 0.75).unwrap() - 0.75).abs() < 1e-12);
    let grid: Vec<f64> = (0..64).map(|k| (k as f64 + 0.5) / 64.0).collect();
    assert!((dual_expectile(&emp(&grid), 0.9).unwrap() - 0.75).abs() < 0.01);
}

#[test]
fn alpha_m_direct_matches_max_law_on_continuous_law() {
    let u = ScalarLaw::uniform(0.0, 1.0).unwrap();
    let spec = ExpectationSpec::max_ext(ExpectationSpec::avg_quantile(0.3), 4);
    let a = evaluate(&spec, &u).unwrap();
    let b = alpha_m_direct(&u, 0.3, 4).unwrap();
    assert!((a - b).abs() < 1e-9, "{a} {b}");
}

#[test]
fn mc_examples() {
    let l1 = ConvexShape::L1Ball { center: vec![0.0, 0.0], radius: 1.0 };
    let est = mc_support(&l1, &ExpectationSpec::avg_quantile(0.5), &[1.0, 0.0], 1_000_000, 3).unwrap();
    assert!((est.value - 1.0 / 3.0).abs() <= 3.0 * est.std_error, "{est:?}");
    let disk = ConvexShape::unit_disk();
    let est = mc_support(&disk, &ExpectationSpec::Mean, &[0.6, 0.8], 10_000, 4).unwrap();
    assert!(est.value.abs() <= 3.0 * est.std_error);
    assert_eq!(est, mc_support(&disk, &ExpectationSpec::Mean, &[0.6, 0.8], 10_000, 4).unwrap());
    let boxed = ConvexShape::square(1.0);
    let small = mc_support(&boxed, &ExpectationSpec::EssSup, &[1.0, 0.0], 100, 5).unwrap();
    let large = mc_support(&boxed, &ExpectationSpec::EssSup, &[1.0, 0.0], 100_000, 5).unwrap();
    assert!(small.value <= large.value && large.value <= 1.0 && large.value > 0.999);
    assert!(mc_support(&boxed, &ExpectationSpec::Mean, &[1.0, 0.0], 10, 5).is_err());
}

#[test]
fn mc_avg_quantile_error_bars_cover() {
    let shape = ConvexShape::polygon(&[
        crate::geometry::Vec2::new(0.0, 0.0),
        crate::geometry::Vec2::new(2.0, 0.0),
        crate::geometry::Vec2::new(0.5, 1.5),
    ])
    .unwrap();
    let u = [0.8, 0.6];
    let exact = avg_quantile(&shape.project(&u).unwrap(), 0.2).unwrap();
    let hits = (0..100)
        .filter(|&s| {
            let e = mc_support(&shape, &ExpectationSpec::avg_quantile(0.2), &u, 20_000, s).unwrap();
            (e.value - exact).abs() <= 4.0 * e.std_error
        })
        .count();
    assert!(hits >= 95, "{hits}");
}

fn arb_law() -> impl Strategy<Value = EmpiricalLaw> {
    prop::collection::vec((-4.0f64..4.0, 0.05f64..1.0), 1..=12).prop_map(|v| {
        let total: f64 = v.iter().map(|x| x.1).sum();
        EmpiricalLaw::new(v.iter().map(|x| x.0).collect(), v.iter().map(|x| x.1 / total).collect()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lp_duals_match_direct_values(law in arb_law(), alpha in 0.01f64..1.0, a in 0.0f64..1.0, tau in 0.5f64..0.99) {
        let sl: ScalarLaw = law.clone().into();
        let (v, w) = dual_avg_quantile(&law, alpha).unwrap();
        prop_assert!((v - avg_quantile(&sl, alpha).unwrap()).abs() <= 1e-8);
        prop_assert!(w.normalisation_error() <= 1e-10);
        prop_assert!(w.gamma.iter().all(|g| *g >= 0.0 && *g <= 1.0 / alpha + 1e-12));
        prop_assert!(witness_exchange_gain(&law, alpha, &w) <= 1e-12);
        prop_assert!((dual_one_sided(&law, a).unwrap() - one_sided_moment(&sl, 1.0, a).unwrap()).abs() <= 1e-8);
        prop_assert!((dual_expectile(&law, tau).unwrap() - expectile(&sl, tau).unwrap()).abs() <= 1e-7);
    }

    #[test]
    fn alpha_m_routes_agree(law in arb_law(), alpha in 0.05f64..1.0, m in 1u32..7) {
        let sl: ScalarLaw = law.into();
        let spec = ExpectationSpec::max_ext(ExpectationSpec::avg_quantile(alpha), m);
        let a = evaluate(&spec, &sl).unwrap();
        let b = alpha_m_direct(&sl, alpha, m).unwrap();
        prop_assert!((a - b).abs() <= 1e-9, "{} {}", a, b);
    }
}
