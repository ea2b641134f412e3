//! Average quantile, one-sided moment and expectile of a small law, evaluated
//! directly and as linear programs over dual densities.

use sublinear_bodies::distributions::EmpiricalLaw;
use sublinear_bodies::oracles::{dual_avg_quantile, dual_expectile, dual_one_sided};
use sublinear_bodies::risk::{evaluate, ExpectationSpec};

fn main() -> sublinear_bodies::error::Result<()> {
    let law = EmpiricalLaw::new(vec![-2.0, -0.5, 0.0, 1.0, 3.0], vec![0.1, 0.3, 0.2, 0.3, 0.1])?;
    let scalar = law.clone().into();

    let (lp, witness) = dual_avg_quantile(&law, 0.25)?;
    println!("avg quantile 0.25: direct {:.12}  lp {:.12}", evaluate(&ExpectationSpec::avg_quantile(0.25), &scalar)?, lp);
    println!("  density {:?}", witness.gamma);
    let direct = evaluate(&ExpectationSpec::OneSided { p: 1.0, a: 0.6 }, &scalar)?;
    println!("one-sided a=0.6:   direct {direct:.12}  lp {:.12}", dual_one_sided(&law, 0.6)?);
    let direct = evaluate(&ExpectationSpec::Expectile { tau: 0.8 }, &scalar)?;
    println!("expectile 0.8:     direct {direct:.12}  lp {:.12}", dual_expectile(&law, 0.8)?);
    Ok(())
}
