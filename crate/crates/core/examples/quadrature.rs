//! The numerical building blocks: adaptive Gauss–Kronrod quadrature,
//! Gaussian-tail truncation and the zeta function.
//!
//!     cargo run --example quadrature

use std::f64::consts::PI;

use hyperheat::numerics::{
    acosh1p, integrate_adaptive, integrate_gaussian_tail, riemann_zeta, GaussianDecay,
};
use hyperheat::QuadratureConfig;
use num_complex::Complex64;

fn main() -> hyperheat::Result<()> {
    let cfg = QuadratureConfig::default();

    let r = integrate_adaptive(|x| Complex64::new(x.sin(), 0.0), 0.0, PI, &cfg)?;
    println!("∫_0^π sin x dx        = {:.15} ± {:.1e}  (exact 2)", r.value.re, r.error_estimate);

    // Oscillatory complex Gaussian: ∫_0^∞ e^{-(1+2i) u²} du = sqrt(pi/(1+2i))/2.
    let a = Complex64::new(1.0, 2.0);
    let r = integrate_gaussian_tail(|u| (-a * u * u).exp(), GaussianDecay::new(1.0), &cfg)?;
    let exact = (PI / a).sqrt() / 2.0;
    println!("∫_0^∞ e^(-(1+2i)u²) du = {:.15} ± {:.1e}  (exact {exact:.15})", r.value, r.error_estimate);

    for s in [1.5, 2.0, 4.0] {
        println!("ζ({s})                  = {:.15}", riemann_zeta(s)?);
    }
    println!("ζ(2) - π²/6           = {:.1e}", riemann_zeta(2.0)? - PI * PI / 6.0);

    let x: f64 = 1e-12;
    println!(
        "acosh(1 + {x:e}): naive {:.6e}, acosh1p {:.6e}",
        (1.0 + x).acosh(),
        acosh1p(x)
    );
    Ok(())
}
