//! Primitive length spectrum of a Hecke triangle group, optionally saved as
//! a surface JSON file usable with `hyperheat stf-eval --fixture`.
//!
//!     cargo run --example hecke_spectrum [N] [out.json]

use hyperheat::hecke::{enumerate_classes, hecke_surface, HeckeGroup};

fn main() -> hyperheat::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: u32 = args.first().map_or(5, |s| s.parse().expect("N must be an integer"));
    let grp = HeckeGroup::new(n)?;
    let e = enumerate_classes(grp, 48, 300.0)?;
    println!(
        "{grp}: lambda = {:.12}, {} primitive classes, complete up to trace {:.3} (length {:.4})",
        grp.lambda(),
        e.classes.len(),
        e.trace_radius,
        e.completeness_radius()
    );
    for w in &e.warnings {
        println!("  warning: {w}");
    }
    println!("{:>10} {:>18} {:>8}  syllables", "trace", "length", "exact");
    for c in e.classes.iter().take(15) {
        let exact = c.exact_trace.map_or("-".to_string(), |t| t.to_string());
        println!("{:>10.6} {:>18.15} {exact:>8}  {:?}", c.trace, c.length(), c.syllables);
    }
    let spectrum = e.spectrum()?;
    println!(
        "systole {:.15}; {} distinct lengths",
        spectrum.systole().unwrap_or(f64::NAN),
        spectrum.entries().len()
    );
    if let Some(path) = args.get(1) {
        hecke_surface(grp, spectrum)?.save(path)?;
        println!("wrote {path}");
    }
    Ok(())
}
