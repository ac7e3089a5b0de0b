//! The elliptic trace of a cone in its heat-kernel form and in its
//! Fourier-side form, which must agree.
//!
//!     cargo run --example parseval [q] [t]

use hyperheat::cone_trace::{elliptic_cone_trace, elliptic_cone_trace_hejhal};
use hyperheat::geometry::ConeParams;
use hyperheat::{ComplexTime, TraceConfig};

fn main() -> hyperheat::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let qs: Vec<u32> = match args.first() {
        Some(q) => vec![q.parse().expect("q must be an integer")],
        None => vec![2, 3, 5, 12, 50],
    };
    let ts: Vec<f64> = match args.get(1) {
        Some(t) => vec![t.parse().expect("t must be a number")],
        None => vec![0.1, 1.0, 10.0],
    };
    let cfg = TraceConfig::default();
    println!("{:>4} {:>6} {:>22} {:>22} {:>10}", "q", "t", "heat form", "Fourier form", "rel diff");
    for &q in &qs {
        let cone = ConeParams::new(q)?;
        for &t in &ts {
            let a = elliptic_cone_trace(cone, ComplexTime::real(t)?, &cfg)?.value.re;
            let b = elliptic_cone_trace_hejhal(cone, t, &cfg)?.value.re;
            println!("{q:>4} {t:>6} {a:>22.16} {b:>22.16} {:>10.1e}", (a - b).abs() / b.abs());
        }
    }
    Ok(())
}
