//! Heat kernel of the hyperbolic plane at real and complex time, against
//! the envelope `e^{s²/4t} t^{-3/2} (t²+s²)^{3/4} K_H(|z|²/t, d)`.
//!
//!     cargo run --example plane_kernel

use hyperheat::hk_plane::{complex_bound_reference, hk_plane};
use hyperheat::{ComplexTime, QuadratureConfig};

fn main() -> hyperheat::Result<()> {
    let cfg = QuadratureConfig::default();
    println!("{:>5} {:>5} {:>6} {:>24} {:>24} {:>10}", "t", "s", "d", "K_H(z,d)", "|K_H| / envelope", "error");
    for (t, s) in [(1.0, 0.0), (0.5, 1.0), (1.0, 2.0), (2.0, -3.0)] {
        let z = ComplexTime::new(t, s)?;
        for d in [0.0, 0.5, 2.0, 6.0] {
            let k = hk_plane(z, d, &cfg)?;
            let env = complex_bound_reference(z, d, &cfg)?;
            println!(
                "{t:>5} {s:>5} {d:>6} {:>24} {:>24.6} {:>10.1e}",
                format!("{:.6e}{:+.6e}i", k.value.re, k.value.im),
                k.value.norm() / env,
                k.error_estimate
            );
        }
    }
    Ok(())
}
