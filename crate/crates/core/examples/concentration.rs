//! Average-quantile bodies of growing uniform samples from the square converge
//! to the body of the square.

use sublinear_bodies::distributions::ConvexShape;
use sublinear_bodies::geometry::{hausdorff, DirectionGrid};
use sublinear_bodies::risk::ExpectationSpec;
use sublinear_bodies::transforms::floating_like_body;

fn main() -> sublinear_bodies::error::Result<()> {
    let square = ConvexShape::Box { center: vec![0.0, 0.0], half_widths: vec![1.0, 1.0] };
    let spec = ExpectationSpec::avg_quantile(0.3);
    let grid = DirectionGrid::uniform(128)?;
    let limit = floating_like_body(&square.clone().into(), &spec, &grid)?;
    for n in [100, 1_000, 10_000, 100_000] {
        let mut dist = Vec::new();
        for seed in 0..10 {
            let body = floating_like_body(&square.sample(n, seed)?.into(), &spec, &grid)?;
            dist.push(hausdorff(&body.outer, &limit.outer)?);
        }
        dist.sort_by(f64::total_cmp);
        println!("n={n:>6}: median distance {:.5}", dist[dist.len() / 2]);
    }
    Ok(())
}
