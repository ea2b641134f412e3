//! Average-quantile bodies of a small weighted sample: the exact polygon from
//! the critical-angle sweep next to the grid sandwich.

use sublinear_bodies::distributions::WeightedSample;
use sublinear_bodies::geometry::{body_from_support, hausdorff, DirectionGrid, Vec2};
use sublinear_bodies::risk::ExpectationSpec;
use sublinear_bodies::geometry::exact_avg_quantile_body;
use sublinear_bodies::transforms::support_field;

fn main() -> sublinear_bodies::error::Result<()> {
    let pts = [Vec2::new(0.0, 0.0), Vec2::new(2.0, 0.0), Vec2::new(2.0, 1.0), Vec2::new(0.5, 2.0), Vec2::new(1.0, 1.0)];
    let mu = WeightedSample::from_weighted2(&pts, vec![0.3, 0.2, 0.2, 0.2, 0.1])?;
    let grid = DirectionGrid::uniform(256)?;

    for alpha in [1.0, 0.6, 0.3, 0.1] {
        let exact = exact_avg_quantile_body(&mu, alpha)?;
        let est = body_from_support(&support_field(&mu.clone().into(), &ExpectationSpec::avg_quantile(alpha), &grid)?)?;
        println!(
            "alpha {alpha:>4}: {} vertices, area {:.4}, grid gap {:.2e}, distance to exact {:.2e}",
            exact.len(),
            exact.area(),
            est.gap,
            hausdorff(&exact, &est.outer)?
        );
    }
    Ok(())
}
