//! Every expectation on one law, plus the maximum extensions of the mean.

use sublinear_bodies::distributions::{EmpiricalLaw, ScalarLaw};
use sublinear_bodies::risk::{evaluate, ExpectationSpec, SpectralMeasure};

fn main() -> sublinear_bodies::error::Result<()> {
    let law: ScalarLaw = EmpiricalLaw::new(vec![-1.0, 0.0, 2.0, 5.0], vec![0.4, 0.3, 0.2, 0.1])?.into();
    let specs = [
        ExpectationSpec::Mean,
        ExpectationSpec::avg_quantile(0.5),
        ExpectationSpec::avg_quantile(0.1),
        ExpectationSpec::Spectral(SpectralMeasure::uniform()),
        ExpectationSpec::OneSided { p: 2.0, a: 0.5 },
        ExpectationSpec::Expectile { tau: 0.9 },
        ExpectationSpec::max_ext(ExpectationSpec::Mean, 3),
        ExpectationSpec::EssSup,
    ];
    for s in &specs {
        println!("{:<28} {:>10.6}", s.label(), evaluate(s, &law)?);
    }
    for m in 1..=5 {
        let v = evaluate(&ExpectationSpec::max_ext(ExpectationSpec::Mean, m), &law)?;
        println!("expected max of {m} copies: {v:.6}");
    }
    Ok(())
}
