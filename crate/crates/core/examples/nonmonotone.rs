//! A box inside the l1 ball whose average-quantile body sticks out of the
//! ball's body: the transform is not monotone under inclusion.

use sublinear_bodies::distributions::ConvexShape;
use sublinear_bodies::risk::{evaluate, ExpectationSpec};

fn main() -> sublinear_bodies::error::Result<()> {
    let a = 0.8;
    let spec = ExpectationSpec::avg_quantile(0.5);
    let ball = ConvexShape::L1Ball { center: vec![0.0, 0.0], radius: 1.0 };
    let boxed = ConvexShape::Box { center: vec![0.0, 0.0], half_widths: vec![a, 1.0 - a] };

    let outer = evaluate(&spec, &ball.project(&[1.0, 0.0])?)?;
    let inner = evaluate(&spec, &boxed.project(&[1.0, 0.0])?)?;
    println!("l1 ball  h(E, e1) = {outer:.12}  (1/3 = {:.12})", 1.0 / 3.0);
    println!("box      h(E, e1) = {inner:.12}  (a/2 = {})", a / 2.0);
    println!("box inside ball: {}, body of box inside body of ball: {}", a + (1.0 - a) <= 1.0, inner <= outer);
    Ok(())
}
