use super::*;
use crate::distributions::{max_law, EmpiricalLaw, PiecewiseLaw, ScalarLaw};
use proptest::prelude::*;

fn emp(v: &[f64]) -> ScalarLaw {
    EmpiricalLaw::uniform_on(v).unwrap().into()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn l1_marginal() -> ScalarLaw {
    // density 1 - |s| on [-1, 1]
    PiecewiseLaw::new(vec![-1.0, 0.0, 1.0], vec![0.0, 1.0], vec![1.0, 0.0]).unwrap().into()
}

#[test]
fn avg_quantile_examples() {
    assert_eq!(avg_quantile(&emp(&[1.0, 2.0, 3.0, 4.0]), 0.5).unwrap(), 3.5);
    assert!(close(avg_quantile(&l1_marginal(), 0.5).unwrap(), 1.0 / 3.0, 1e-15));
    let u = ScalarLaw::uniform(-0.8, 0.8).unwrap();
    for alpha in [0.1, 0.5, 0.9] {
        assert!(close(avg_quantile(&u, alpha).unwrap(), 0.8 * (1.0 - alpha), 1e-15));
    }
    assert!(avg_quantile(&u, 0.0).is_err());
    assert!(avg_quantile(&u, 1.5).is_err());
    let mut v = vec![1.0, 4.0, 2.0, 3.0];
    assert_eq!(avg_quantile_equal_weights(&mut v, 0.5).unwrap(), 3.5);
    let mut v = vec![1.0, 4.0, 2.0, 3.0];
    assert!(close(avg_quantile_equal_weights(&mut v, 0.3).unwrap(), (4.0 + 0.2 * 3.0) / 1.2, 1e-15));
}

#[test]
fn avg_quantile_tends_to_ess_sup() {
    let law = l1_marginal();
    let mut prev = f64::NEG_INFINITY;
    for k in 0..30 {
        let v = avg_quantile(&law, 0.5f64.powi(k)).unwrap();
        assert!(v >= prev - 1e-15);
        prev = v;
    }
    assert!(close(prev, ess_sup(&law), 1e-4));
    assert_eq!(ess_sup(&emp(&[1.0, 2.0, 3.0, 4.0])), 4.0);
    assert_eq!(ess_sup(&ScalarLaw::uniform(-1.0, 1.0).unwrap()), 1.0);
}

#[test]
fn spectral_examples() {
    let law = emp(&[0.0, 1.0, 5.0]);
    let v = spectral_value(&law, &SpectralMeasure::point(0.4)).unwrap();
    assert_eq!(v, avg_quantile(&law, 0.4).unwrap());
    let u = ScalarLaw::uniform(0.0, 1.0).unwrap();
    assert!(close(spectral_value(&u, &SpectralMeasure::max_mean(2)).unwrap(), 2.0 / 3.0, 1e-10));
    // dense grid oracle for the uniform density against {0, 1}
    let two = emp(&[0.0, 1.0]);
    let exact = spectral_value(&two, &SpectralMeasure::uniform()).unwrap();
    let n = 1_000_000;
    let riemann: f64 = (0..n).map(|k| avg_quantile(&two, (k as f64 + 0.5) / n as f64).unwrap()).sum::<f64>() / n as f64;
    assert!(close(exact, riemann, 1e-6), "{exact} {riemann}");
    // e_alpha = min(1, 1/(2 alpha)), integral = 1/2 + ln(2)/2
    assert!(close(exact, 0.5 + 0.5 * 2f64.ln(), 1e-14));
}

#[test]
fn one_sided_examples() {
    let two = emp(&[0.0, 1.0]);
    for a in [0.0, 0.3, 1.0] {
        assert!(close(one_sided_moment(&two, 1.0, a).unwrap(), 0.5 + a / 4.0, 1e-15));
    }
    let sym = emp(&[-2.0, -1.0, 1.0, 2.0]);
    let abs_dev = 1.5;
    assert!(close(one_sided_moment(&sym, 1.0, 1.0).unwrap(), abs_dev / 2.0, 1e-15));
    assert!(one_sided_moment(&two, 0.5, 1.0).is_err());
    // centred symmetric beta: E beta_+^p = E|beta|^p / 2, so the value is a 2^(-1/p) ||beta||_p
    let p2 = one_sided_moment(&sym, 2.0, 1.0).unwrap();
    assert!(close(p2, 2f64.powf(-0.5) * 2.5f64.sqrt(), 1e-12));
}

#[test]
fn expectile_examples() {
    let u = ScalarLaw::uniform(0.0, 1.0).unwrap();
    assert!(close(expectile(&u, 0.5).unwrap(), 0.5, 1e-15));
    assert!(close(expectile(&u, 0.9).unwrap(), 0.75, 1e-12));
    let two = emp(&[0.0, 1.0]);
    for tau in [0.5, 0.6, 0.75, 0.99] {
        assert!(close(expectile(&two, tau).unwrap(), tau, 1e-12));
    }
    assert!(expectile(&two, 1.0).is_err());
}

#[test]
fn evaluate_examples() {
    let u = ScalarLaw::uniform(0.0, 1.0).unwrap();
    for m in 1..=10u32 {
        let v = evaluate(&ExpectationSpec::max_ext(ExpectationSpec::Mean, m), &u).unwrap();
        assert!(close(v, m as f64 / (m as f64 + 1.0), 1e-10), "m={m}");
    }
    let five = emp(&[1.0, 2.0, 3.0, 4.0, 5.0]);
    let via_law = evaluate(&ExpectationSpec::max_ext(ExpectationSpec::avg_quantile(0.4), 3), &five).unwrap();
    let direct = crate::oracles::alpha_m_direct(&five, 0.4, 3).unwrap();
    assert!(close(via_law, direct, 1e-9), "{via_law} {direct}");
    for spec in all_specs() {
        assert!(close(evaluate(&spec, &ScalarLaw::point(2.5)).unwrap(), 2.5, 1e-12), "{}", spec.label());
    }
}

#[test]
fn kusuoka_examples() {
    let two = emp(&[0.0, 1.0]);
    let nu = SpectralMeasure::point(0.3);
    assert_eq!(kusuoka_sup(&two, &[nu.clone()]).unwrap(), spectral_value(&two, &nu).unwrap());
    assert!(kusuoka_sup(&two, &[]).is_err());
    let v = kusuoka_sup(&two, &one_sided_family(1.0, 1000)).unwrap();
    assert!(close(v, 0.75, 1e-12));
    let u = ScalarLaw::uniform(0.0, 1.0).unwrap();
    let v = kusuoka_sup(&u, &expectile_family(0.75, 1000)).unwrap();
    assert!(close(v, expectile(&u, 0.75).unwrap(), 1e-4), "{v}");
}

#[test]
fn orlicz_examples() {
    let pos = |x: f64| x.max(0.0);
    assert!(close(orlicz_norm(&ScalarLaw::point(2.0), pos).unwrap(), 2.0, 1e-10));
    let u = ScalarLaw::uniform(0.0, 1.0).unwrap();
    assert!(close(orlicz_norm(&u, |x| x * x).unwrap(), 1.0 / 3f64.sqrt(), 1e-10));
    let law = emp(&[0.5, 1.0, 4.0]);
    assert!(close(orlicz_norm(&law, pos).unwrap(), law.mean(), 1e-10));
}

#[test]
fn geometric_extension_interpolates() {
    let law = EmpiricalLaw::uniform_on(&[0.0, 1.0, 3.0]).unwrap();
    let spec = ExpectationSpec::Mean;
    let one = geometric_max_extension(&spec, &law, 1.0).unwrap();
    assert!(close(one, 4.0 / 3.0, 1e-12));
    let mut prev = one;
    for lambda in [0.8, 0.5, 0.2, 0.05] {
        let v = geometric_max_extension(&spec, &law, lambda).unwrap();
        // closed form: CDF of the max is lambda F / (1 - (1 - lambda) F)
        let g = |f: f64| lambda * f / (1.0 - (1.0 - lambda) * f);
        let exact = (g(2.0 / 3.0) - g(1.0 / 3.0)) * 1.0 + (1.0 - g(2.0 / 3.0)) * 3.0;
        assert!(close(v, exact, 1e-8), "{v} {exact}");
        assert!(v >= prev);
        prev = v;
    }
}

#[test]
fn dual_witness_examples() {
    let law = EmpiricalLaw::uniform_on(&[1.0, 2.0, 3.0, 4.0]).unwrap();
    let w = dual_witness(&ExpectationSpec::avg_quantile(0.5), &law).unwrap();
    assert_eq!(w.gamma, vec![0.0, 0.0, 2.0, 2.0]);
    assert_eq!(w.value, 3.5);
    let skew = EmpiricalLaw::new(vec![0.0, 1.0], vec![0.9, 0.1]).unwrap();
    let w = dual_witness(&ExpectationSpec::avg_quantile(0.25), &skew).unwrap();
    assert!(close(w.value, 0.4, 1e-15));
    assert!(w.normalisation_error() < 1e-12);
}

#[test]
fn continuous_kernels_reproduce_values() {
    let law = l1_marginal();
    let nu = SpectralMeasure::max_mean(3).mix(0.5, &SpectralMeasure::point(0.3));
    let specs = [
        ExpectationSpec::Mean,
        ExpectationSpec::avg_quantile(0.3),
        ExpectationSpec::Spectral(nu),
        ExpectationSpec::OneSided { p: 1.0, a: 0.7 },
        ExpectationSpec::OneSided { p: 2.0, a: 1.0 },
        ExpectationSpec::Expectile { tau: 0.8 },
        ExpectationSpec::max_ext(ExpectationSpec::avg_quantile(0.4), 3),
        ExpectationSpec::EssSup,
    ];
    for spec in &specs {
        let k = dual_kernel(spec, &law).unwrap();
        let mut knots = vec![-1.0, 0.0, 1.0];
        knots.extend(k.breaks.iter().copied().filter(|b| b.abs() < 1.0));
        knots.sort_by(f64::total_cmp);
        let dens = |s: f64| law.density(s).unwrap();
        let mass = crate::numeric::gl_piecewise(&knots, 64, |s| k.gamma(s) * dens(s)) + k.top_mass;
        let val = crate::numeric::gl_piecewise(&knots, 64, |s| s * k.gamma(s) * dens(s)) + k.top_mass * law.ess_sup();
        let want = evaluate(spec, &law).unwrap();
        assert!(close(mass, 1.0, 1e-9), "{} mass {mass}", spec.label());
        assert!(close(val, want, 1e-9), "{} {val} vs {want}", spec.label());
    }
}

fn all_specs() -> Vec<ExpectationSpec> {
    let nu = SpectralMeasure::max_mean(3).mix(0.6, &SpectralMeasure::point(0.25));
    vec![
        ExpectationSpec::Mean,
        ExpectationSpec::avg_quantile(0.3),
        ExpectationSpec::avg_quantile(1.0),
        ExpectationSpec::Spectral(nu),
        ExpectationSpec::OneSided { p: 1.0, a: 1.0 },
        ExpectationSpec::OneSided { p: 2.5, a: 0.6 },
        ExpectationSpec::Expectile { tau: 0.8 },
        ExpectationSpec::max_ext(ExpectationSpec::avg_quantile(0.5), 3),
        ExpectationSpec::max_ext(ExpectationSpec::Expectile { tau: 0.7 }, 2),
        ExpectationSpec::EssSup,
    ]
}

/// Coupled samples: atoms `(x_i, y_i)` with shared probabilities.
fn coupled() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>)> {
    prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0, 0.1f64..1.0), 1..16).prop_map(|v| {
        let total: f64 = v.iter().map(|x| x.2).sum();
        (v.iter().map(|x| x.0).collect(), v.iter().map(|x| x.1).collect(), v.iter().map(|x| x.2 / total).collect())
    })
}

fn law_of(values: &[f64], probs: &[f64]) -> ScalarLaw {
    EmpiricalLaw::new(values.to_vec(), probs.to_vec()).unwrap().into()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn axioms_hold((x, y, p) in coupled(), shift in -2.0f64..2.0, scale in 0.0f64..3.0) {
        let lx = law_of(&x, &p);
        let dominated: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b.abs()).collect();
        let sum: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        let shifted: Vec<f64> = x.iter().map(|a| a + shift).collect();
        let scaled: Vec<f64> = x.iter().map(|a| a * scale).collect();
        for spec in all_specs() {
            let ex = evaluate(&spec, &lx).unwrap();
            let ed = evaluate(&spec, &law_of(&dominated, &p)).unwrap();
            prop_assert!(ex <= ed + 1e-10, "monotone {}", spec.label());
            let es = evaluate(&spec, &law_of(&shifted, &p)).unwrap();
            prop_assert!((es - ex - shift).abs() <= 1e-10, "translation {}", spec.label());
            let ec = evaluate(&spec, &law_of(&scaled, &p)).unwrap();
            prop_assert!((ec - scale * ex).abs() <= 1e-10 * (1.0 + ex.abs()), "homogeneity {}", spec.label());
            let ey = evaluate(&spec, &law_of(&y, &p)).unwrap();
            let esum = evaluate(&spec, &law_of(&sum, &p)).unwrap();
            prop_assert!(esum <= ex + ey + 1e-10, "subadditive {}", spec.label());
            prop_assert!(lx.mean() <= ex + 1e-10, "dilatation {}", spec.label());
        }
    }

    #[test]
    fn avg_quantile_nonincreasing((x, _y, p) in coupled(), a in 0.01f64..1.0, b in 0.01f64..1.0) {
        let law = law_of(&x, &p);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(avg_quantile(&law, lo).unwrap() >= avg_quantile(&law, hi).unwrap() - 1e-12);
        prop_assert_eq!(spectral_value(&law, &SpectralMeasure::point(1.0)).unwrap(), law.mean());
    }

    #[test]
    fn spectral_round_trip((x, _y, p) in coupled(), w in 0.0f64..1.0, a0 in 0.05f64..1.0, m in 2u32..6) {
        let law = law_of(&x, &p);
        let nu = SpectralMeasure::max_mean(m).mix(w, &SpectralMeasure::point(a0)).mix(0.7, &SpectralMeasure::uniform());
        let via_mixture = spectral_value(&law, &nu).unwrap();
        let via_function = spectral_value_via_function(&law, &nu).unwrap();
        prop_assert!((via_mixture - via_function).abs() < 1e-9, "{} {}", via_mixture, via_function);
    }

    #[test]
    fn one_sided_breakpoint_identity((x, _y, p) in coupled(), a in 0.0f64..1.0) {
        let law = law_of(&x, &p);
        let m = law.mean();
        let centred = law_of(&x.iter().map(|v| v - m).collect::<Vec<_>>(), &p);
        let levels: Vec<f64> = centred.as_empirical().unwrap().cumulative().iter().map(|c| 1.0 - c).filter(|t| *t > 0.0).chain([1.0]).collect();
        let sup = levels.iter().map(|t| t * avg_quantile(&centred, *t).unwrap()).fold(0.0, f64::max);
        let direct = one_sided_moment(&law, 1.0, a).unwrap();
        prop_assert!((direct - (m + a * sup)).abs() < 1e-10);
    }

    #[test]
    fn max_ext_composes((x, _y, p) in coupled(), m in 1u32..4, k in 1u32..4) {
        let law = law_of(&x, &p);
        for base in [ExpectationSpec::Mean, ExpectationSpec::avg_quantile(0.3)] {
            let nested = ExpectationSpec::max_ext(ExpectationSpec::max_ext(base.clone(), m), k);
            let flat = ExpectationSpec::max_ext(base.clone(), m * k);
            let (a, b) = (evaluate(&nested, &law).unwrap(), evaluate(&flat, &law).unwrap());
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()), "{} {}", a, b);
        }
        let ml = max_law(&max_law(&law, m).unwrap(), k).unwrap();
        let flat = max_law(&law, m * k).unwrap();
        let (a, b) = (ml.as_empirical().unwrap(), flat.as_empirical().unwrap());
        prop_assert_eq!(a.values(), b.values());
    }

    #[test]
    fn discrete_witnesses_attain_values((x, _y, p) in coupled()) {
        let law = law_of(&x, &p);
        for spec in all_specs() {
            let w = dual_witness(&spec, law.as_empirical().unwrap()).unwrap();
            let want = evaluate(&spec, &law).unwrap();
            prop_assert!((w.value - want).abs() < 1e-10, "{} {} {}", spec.label(), w.value, want);
            prop_assert!(w.normalisation_error() < 1e-10);
            prop_assert!(w.gamma.iter().all(|g| *g >= -1e-12));
        }
    }

    #[test]
    fn greedy_witness_is_locally_optimal((x, _y, p) in coupled(), alpha in 0.05f64..1.0) {
        // moving mass eps from atom j to atom i keeps the witness feasible when
        // gamma_i < 1/alpha and gamma_j > 0; the objective changes by eps (v_i - v_j)
        let law = law_of(&x, &p);
        let emp = law.as_empirical().unwrap();
        let w = dual_witness(&ExpectationSpec::avg_quantile(alpha), emp).unwrap();
        let v = emp.values();
        for i in 0..v.len() {
            for j in 0..v.len() {
                if i != j && w.gamma[i] < 1.0 / alpha - 1e-12 && w.gamma[j] > 1e-12 {
                    prop_assert!(v[i] <= v[j] + 1e-12, "improving move {i} <- {j}");
                }
            }
        }
    }
}
