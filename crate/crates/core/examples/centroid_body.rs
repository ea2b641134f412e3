//! Centroid bodies of the disk and of a triangle, by the direct moment path and
//! by the union of scaled Ulam floating bodies.

use std::f64::consts::PI;
use sublinear_bodies::distributions::ConvexShape;
use sublinear_bodies::geometry::{hausdorff, DirectionGrid, Vec2};
use sublinear_bodies::transforms::{centroid_body, centroid_via_ulam, classical_centroid_body, default_ulam_levels, lp_centroid_body};

fn main() -> sublinear_bodies::error::Result<()> {
    let grid = DirectionGrid::uniform(360)?;
    let disk = ConvexShape::Ball { center: vec![0.0, 0.0], radius: 1.0 };

    let one_sided = centroid_body(&disk, 1.0, 1.0, &grid)?;
    println!("disk: one-sided radius {:.10}, 2/(3 pi) = {:.10}", one_sided.support(Vec2::new(1.0, 0.0)), 2.0 / (3.0 * PI));
    let gamma = classical_centroid_body(&disk, &grid)?;
    println!("disk: symmetric radius {:.10}, 4/(3 pi) = {:.10}", gamma.support(Vec2::new(1.0, 0.0)), 4.0 / (3.0 * PI));
    let ulam = centroid_via_ulam(&disk, &default_ulam_levels(), &grid)?;
    println!("disk: two paths differ by {:.2e}", hausdorff(&gamma.outer, &ulam.outer)?);
    // normalised so the unit disk is fixed; the square rounds off as p decreases
    let square = ConvexShape::Box { center: vec![0.0, 0.0], half_widths: vec![1.0, 1.0] };
    let diag = Vec2::new(1.0, 1.0) * std::f64::consts::FRAC_1_SQRT_2;
    for p in [1.0, 2.0, 4.0, 16.0] {
        let b = lp_centroid_body(&square, p, &grid)?;
        println!("square: L{p} centroid body, diagonal/edge support {:.6}", b.support(diag) / b.support(Vec2::new(1.0, 0.0)));
    }

    let tri = ConvexShape::polygon(&[Vec2::new(0.0, 0.0), Vec2::new(3.0, 0.0), Vec2::new(0.0, 3.0)])?;
    let one_sided = centroid_body(&tri, 1.0, 1.0, &grid)?;
    println!("triangle: one-sided body area {:.4}, gap {:.1e}", one_sided.outer.area(), one_sided.gap);
    Ok(())
}
