//! Heat trace of a cone outside a truncation, `I_{q,delta}(z)`: the
//! one-dimensional closed form, the brute-force double integral, and the
//! q-independent upper bound.
//!
//!     cargo run --example truncated_bound

use hyperheat::cone_trace::{
    degeneration_bound, truncated_cone_trace, truncated_cone_trace_oracle, DegenerationBoundParams,
};
use hyperheat::geometry::ConeParams;
use hyperheat::{ComplexTime, TraceConfig};

fn main() -> hyperheat::Result<()> {
    let cfg = TraceConfig::default();
    let z = ComplexTime::new(1.0, 2.0)?;
    println!("z = {z}");
    println!("{:>4} {:>5} {:>30} {:>10}", "q", "delta", "closed form", "|diff|/err");
    for q in [3, 7] {
        let cone = ConeParams::new(q)?;
        for delta in [0.0, 0.3, 1.0] {
            let a = truncated_cone_trace(cone, delta, z, &cfg)?;
            let b = truncated_cone_trace_oracle(cone, delta, z, &cfg)?;
            println!(
                "{q:>4} {delta:>5} {:>30} {:>10.1e}",
                format!("{:.10e}{:+.10e}i", a.value.re, a.value.im),
                (a.value - b.value).norm() / (a.error_estimate + b.error_estimate)
            );
        }
    }

    println!("\n|I| against the bound, and the delta -> inf decay (t = 1):");
    let z = ComplexTime::real(1.0)?;
    for delta in [0.5, 1.0, 10.0, 100.0] {
        let bound = degeneration_bound(DegenerationBoundParams::new(delta, z)?, z)?;
        let row: Vec<String> = [3, 10, 100, 1000]
            .iter()
            .map(|&q| {
                let i = truncated_cone_trace(ConeParams::new(q).unwrap(), delta, z, &cfg).unwrap();
                format!("q={q}: {:.3e}", i.value.norm())
            })
            .collect();
        println!("  delta={delta:<6} bound {bound:.3e}   {}", row.join("  "));
    }
    Ok(())
}
