//! Reduced heat trace `HTr + ETr - DTr` of the Hecke surfaces `H/G_N` as the
//! order-N cone degenerates into a cusp, next to the limit group.
//!
//!     HYPERHEAT_CACHE_DIR=/tmp/hecke cargo run --release --example degeneration

use hyperheat::hecke::{hecke_surface, spectrum_with_cache, HeckeGroup, SpectrumCache};
use hyperheat::surface::reduced_trace;
use hyperheat::{ComplexTime, TraceConfig};

fn main() -> hyperheat::Result<()> {
    let cfg = TraceConfig::default();
    let cache = SpectrumCache::from_env();
    let z = ComplexTime::real(1.0)?;
    let mut groups: Vec<HeckeGroup> =
        [3, 4, 5, 6, 8, 12, 24, 48].iter().map(|&n| HeckeGroup::new(n)).collect::<Result<_, _>>()?;
    groups.push(HeckeGroup::limit());

    println!("{:>6} {:>8} {:>16} {:>10} {:>10} {:>10}", "group", "classes", "reduced trace", "error", "deficit", "radius");
    let mut prev: Option<f64> = None;
    for grp in groups {
        let c = spectrum_with_cache(grp, 64, 400.0, cache.as_ref())?;
        let classes = c.spectrum.class_count();
        let radius = c.spectrum.completeness_radius();
        let r = reduced_trace(&hecke_surface(grp, c.spectrum)?, z, &cfg)?;
        let gap = prev.map_or(String::new(), |p| format!("  gap {:.5}", (r.value.re - p).abs()));
        println!(
            "{:>6} {classes:>8} {:>16.10} {:>10.1e} {:>10.1e} {radius:>10.4}{gap}",
            grp.to_string(),
            r.value.re,
            r.error_estimate,
            r.completeness_deficit
        );
        prev = Some(r.value.re);
    }
    Ok(())
}
