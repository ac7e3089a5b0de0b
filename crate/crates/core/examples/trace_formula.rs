//! The Selberg trace formula with the Gaussian test function: the geometric
//! side equals `e^{t/4}` times the standard heat trace, term by term.
//!
//!     cargo run --example trace_formula [surface.json]

use hyperheat::geometry::SurfaceSignature;
use hyperheat::surface::{
    standard_trace, stf_geometric_side, LengthSpectrum, SurfaceData, TestFunctionPair,
};
use hyperheat::{ComplexTime, TraceConfig};

fn main() -> hyperheat::Result<()> {
    let surface = match std::env::args().nth(1) {
        Some(path) => SurfaceData::load(path)?,
        // A made-up genus-one surface with cones of order 3 and 4.
        None => SurfaceData::new(
            SurfaceSignature::new(1, 0, vec![3, 4])?,
            LengthSpectrum::new(vec![(1.76, 2), (2.63, 4), (3.34, 6)], 3.5)?,
            vec![4],
        )?,
    };
    let cfg = TraceConfig::default();
    println!("volume {:.6}", surface.volume()?);
    println!(
        "{:>5} {:>14} {:>14} {:>14} {:>18} {:>18} {:>9}",
        "t", "identity", "hyperbolic", "elliptic", "e^(-t/4) geometric", "standard trace", "rel diff"
    );
    for t in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let z = ComplexTime::real(t)?;
        let g = stf_geometric_side(&surface, &TestFunctionPair::gaussian(z), &cfg)?;
        let heat = g.total().value.re * (-t / 4.0f64).exp();
        let st = standard_trace(&surface, z, &cfg)?;
        println!(
            "{t:>5} {:>14.8} {:>14.8} {:>14.8} {heat:>18.12} {:>18.12} {:>9.1e}",
            g.identity.value.re,
            g.hyperbolic.value.re,
            g.elliptic.value.re,
            st.value.re,
            (heat - st.value.re).abs() / st.value.re
        );
    }
    Ok(())
}
