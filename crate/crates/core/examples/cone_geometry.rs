//! Closed-form geometry of cones and cusps: truncated cones of fixed
//! volume, distances between nested truncations, and the strip coordinates
//! in which a cone of large order looks like a cusp.
//!
//!     cargo run --example cone_geometry

use hyperheat::geometry::{
    cone_to_cusp_coords, cusp_truncated_metrics, nested_boundary_distance, orbifold_volume,
    strip_conformal_factor, truncated_cone_metrics, ConeParams, ConePoint, SurfaceSignature,
};

fn main() -> hyperheat::Result<()> {
    let eps = 0.5;
    println!("truncations of volume {eps}:");
    for q in [2, 3, 10, 100, 1000] {
        let cone = ConeParams::new(q)?;
        let m = truncated_cone_metrics(cone, eps)?;
        println!(
            "  q={q:<5} radius {:.6}  boundary {:.6}  gap to volume 2: {:.6}",
            m.radius,
            m.boundary_length,
            nested_boundary_distance(cone, eps, 2.0)?
        );
    }
    let cusp = cusp_truncated_metrics(eps)?;
    println!("  cusp     horocycle height {:.3}  boundary {:.6}", cusp.radius, cusp.boundary_length);

    println!("\nconformal factor at the image of rho = 1 (cusp factor is y²):");
    for q in [3, 30, 300] {
        let cone = ConeParams::new(q)?;
        let p = cone_to_cusp_coords(cone, ConePoint::new(1.0, 0.0)?)?;
        println!(
            "  q={q:<4} y = {:9.4}  F = {:12.4}  y² = {:12.4}",
            p.y,
            strip_conformal_factor(cone.angle(), p.y),
            p.y * p.y
        );
    }

    let sig = SurfaceSignature::new(0, 1, vec![2, 7])?;
    println!("\nvolume of (0; 1; 2, 7): {:.6}", orbifold_volume(&sig)?);
    Ok(())
}
