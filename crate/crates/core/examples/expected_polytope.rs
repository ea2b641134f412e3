//! Mean width of the hull of m uniform points in the square: the spectral
//! formula against a Monte Carlo estimate.

use sublinear_bodies::distributions::ConvexShape;
use sublinear_bodies::geometry::DirectionGrid;
use sublinear_bodies::oracles::mc_expected_hull_support;
use sublinear_bodies::transforms::expected_polytope;

fn main() -> sublinear_bodies::error::Result<()> {
    let square = ConvexShape::Box { center: vec![0.0, 0.0], half_widths: vec![1.0, 1.0] };
    let grid = DirectionGrid::uniform(8)?;
    let dirs: Vec<Vec<f64>> = grid.directions().iter().map(|u| vec![u.x, u.y]).collect();
    for m in [2u32, 3, 5, 10] {
        let body = expected_polytope(&square.clone().into(), m, &grid)?;
        let mc = mc_expected_hull_support(&square, m as usize, &dirs, 20_000, 0)?;
        print!("m={m:>2}");
        for (u, e) in grid.directions().iter().zip(&mc).take(3) {
            print!("  {:.4} vs {:.4}±{:.4}", body.support(*u), e.value, e.std_error);
        }
        println!("  area {:.4}", body.outer.area());
    }
    Ok(())
}
