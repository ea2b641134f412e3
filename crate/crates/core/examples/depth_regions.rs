//! Depth-trimmed regions of a triangle and the integrated depth region that
//! sits between the floating body and the deepest region.

use sublinear_bodies::distributions::ConvexShape;
use sublinear_bodies::geometry::{DirectionGrid, Vec2};
use sublinear_bodies::risk::ExpectationSpec;
use sublinear_bodies::transforms::{depth_region, floating_like_body, integrated_depth_region, Source};

fn main() -> sublinear_bodies::error::Result<()> {
    let grid = DirectionGrid::uniform(360)?;
    let tri: Source = ConvexShape::polygon(&[Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)])?.into();
    for delta in [0.05, 0.15, 0.3, 4.0 / 9.0, 0.46] {
        let d = depth_region(&tri, delta, &grid)?;
        println!("depth {delta:.3}: {}", if d.is_empty() { "empty".to_string() } else { format!("area {:.5}", d.region.area()) });
    }
    let alpha = 0.3;
    let e = floating_like_body(&tri, &ExpectationSpec::avg_quantile(alpha), &grid)?;
    let avg = integrated_depth_region(&tri, alpha, &grid)?;
    let deepest = depth_region(&tri, alpha, &grid)?;
    println!("alpha {alpha}: body {:.5} >= integrated {:.5} >= region {:.5}", e.outer.area(), avg.area(), deepest.region.area());
    Ok(())
}
