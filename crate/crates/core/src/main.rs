use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use hyperheat::config::{InverseClassConvention, TraceConfig};
use hyperheat::experiments::{
    bound_check, degeneration_gaps, degeneration_sweep, gaps_non_increasing, parseval_check,
    read_eigenvalues, stf_eval, write_report, HeckeOptions, Outcome, Sidecar, IDENTITY_TOLERANCE,
};
use hyperheat::hecke::SpectrumCache;
use hyperheat::surface::SurfaceData;

/// Heat traces on hyperbolic cones and surfaces: batch checks that write
/// CSV plus a JSON sidecar (`<out>.json`).
///
/// Exit status: 0 success, 2 tolerance violation, 3 computation failure.
#[derive(Parser, Debug)]
#[command(name = "hyperheat", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// CSV output path; the sidecar goes to `<out>.json`. Without it the CSV
    /// is printed to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Relative tolerance of every adaptive quadrature.
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Whether spectrum entries count γ and γ⁻¹ separately (`distinct`) or
    /// stand for the pair (`identified`, weight 2).
    #[arg(long, global = true, default_value = "distinct")]
    convention_inverse_classes: InverseClassConvention,
    /// Directory for cached Hecke spectra; falls back to $HYPERHEAT_CACHE_DIR.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Elliptic cone trace by the u-integral (cosh(u/2)/(sinh²(u/2)+sin²(nπ/q)))
    /// against its Fourier-side form (∫ e^{-2πnr/q - tr²}/(1+e^{-2πr}) dr);
    /// fails above relative difference 1e-8.
    ParsevalCheck {
        #[arg(long, value_delimiter = ',', default_values_t = (3..=12).collect::<Vec<u32>>())]
        grid_q: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.1, 1.0, 10.0])]
        grid_t: Vec<f64>,
    },
    /// Truncated cone trace |I_{q,δ}(t+is)| against the q-independent bound
    /// e^{-t/4}/sqrt(π|z|) (δ/2π)^{-2ηγ} [ζ(1+2ηγ) + π]; fails if the ratio
    /// exceeds 1 anywhere.
    BoundCheck {
        #[arg(long, value_delimiter = ',', default_values_t = vec![3u32, 10, 100])]
        grid_q: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 1.0, 2.0])]
        grid_delta: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 1.0])]
        grid_t: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.0, 1.0, 5.0])]
        grid_s: Vec<f64>,
    },
    /// Reduced trace HTr + ETr - DTr of the Hecke surfaces H/G_N, with the
    /// order-N cone degenerating; reports error estimates, completeness
    /// deficits and t^{3/2}|trace|.
    DegenerationSweep {
        #[arg(long, value_delimiter = ',', default_values_t = vec![3u32, 6, 12, 24, 48])]
        grid_n: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![1.0])]
        grid_t: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.0])]
        grid_s: Vec<f64>,
        /// Longest conjugacy-class word, in syllables S·U^k.
        #[arg(long, default_value_t = 64)]
        max_word_len: usize,
        /// Largest |trace| enumerated.
        #[arg(long, default_value_t = 400.0)]
        trace_bound: f64,
        /// Also evaluate the N → ∞ limit group.
        #[arg(long)]
        include_limit: bool,
    },
    /// Geometric side of the trace formula with H(r) = e^{-tr²}, compared with
    /// the standard heat trace (times e^{t/4}); spectral side Σ H(r_n) when
    /// eigenvalues are supplied.
    StfEval {
        /// Surface JSON: {"genus","cusps","cones","degenerating","spectrum","completeness_radius"}.
        #[arg(long)]
        fixture: PathBuf,
        /// Laplace eigenvalues, one per line.
        #[arg(long)]
        eigenvalues: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![1.0])]
        grid_t: Vec<f64>,
    },
}

fn run(cli: Cli) -> hyperheat::Result<Outcome> {
    let c = &cli.common;
    if let Some(n) = c.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| hyperheat::Error::InvalidSurface(format!("thread pool: {e}")))?;
    }
    let mut cfg = TraceConfig {
        convention: c.convention_inverse_classes,
        ..TraceConfig::default()
    };
    if let Some(tol) = c.rel_tol {
        cfg.quad = cfg.quad.with_rel_tol(tol);
        cfg.quad.validate()?;
    }
    let out = c.out.as_deref();

    let (text, outcome) = match &cli.command {
        Command::ParsevalCheck { grid_q, grid_t } => {
            let (rows, o) = parseval_check(grid_q, grid_t, &cfg);
            let mut sc = Sidecar::new("parseval-check", 1, cfg)
                .grid("q", grid_q)
                .grid("t", grid_t)
                .column("cone_trace_err", "error estimate of cone_trace")
                .column("hejhal_trace_err", "error estimate of hejhal_trace")
                .column("rel_diff", "|cone_trace - hejhal_trace| / max(|.|)");
            sc.tolerance = Some(IDENTITY_TOLERANCE);
            sc.summary = json!(o);
            (write_report(&rows, out, &sc)?, o)
        }
        Command::BoundCheck { grid_q, grid_delta, grid_t, grid_s } => {
            let (rows, o) = bound_check(grid_q, grid_delta, grid_t, grid_s, &cfg);
            let max_ratio = rows.iter().filter_map(|r| r.ratio).fold(0.0, f64::max);
            let mut sc = Sidecar::new("bound-check", 1, cfg)
                .grid("q", grid_q)
                .grid("delta", grid_delta)
                .grid("t", grid_t)
                .grid("s", grid_s)
                .column("trace_err", "error estimate of the truncated trace")
                .column("ratio", "trace_abs / bound; must not exceed 1");
            sc.tolerance = Some(1.0);
            sc.summary = json!({ "outcome": o, "max_ratio": max_ratio });
            (write_report(&rows, out, &sc)?, o)
        }
        Command::DegenerationSweep { grid_n, grid_t, grid_s, max_word_len, trace_bound, include_limit } => {
            let cache = c
                .cache_dir
                .clone()
                .map(SpectrumCache::new)
                .or_else(SpectrumCache::from_env);
            let opts = HeckeOptions {
                max_word_len: *max_word_len,
                trace_bound: *trace_bound,
                include_limit: *include_limit,
                cache,
            };
            let (rows, o) = degeneration_sweep(grid_n, grid_t, grid_s, &opts, &cfg);
            let gaps = degeneration_gaps(&rows);
            let trend: serde_json::Map<String, serde_json::Value> = gaps
                .iter()
                .map(|(k, g)| (k.clone(), json!({ "gaps": g, "non_increasing": gaps_non_increasing(g) })))
                .collect();
            let mut sc = Sidecar::new("degeneration-sweep", 1, cfg)
                .grid("N", grid_n)
                .grid("t", grid_t)
                .grid("s", grid_s)
                .grid("hecke", &opts)
                .column("reduced_err", "numerical error estimate of the reduced trace")
                .column("completeness_deficit", "bound on classes beyond completeness_radius")
                .column("t32_abs", "t^{3/2} |reduced trace|");
            sc.summary = json!({ "outcome": o, "trend": trend });
            (write_report(&rows, out, &sc)?, o)
        }
        Command::StfEval { fixture, eigenvalues, grid_t } => {
            let surface = SurfaceData::load(fixture)?;
            let ev = eigenvalues.as_ref().map(read_eigenvalues).transpose()?;
            let (rows, o) = stf_eval(&surface, ev.as_deref(), grid_t, &cfg);
            let mut sc = Sidecar::new("stf-eval", 1, cfg)
                .grid("t", grid_t)
                .grid("fixture", &fixture.display().to_string())
                .column("geometric_err", "error estimate of the geometric side")
                .column("standard_trace_err", "error estimate of the standard trace")
                .column("rel_diff", "|e^{-t/4} geometric - standard_trace| / |standard_trace|");
            sc.tolerance = Some(IDENTITY_TOLERANCE);
            sc.summary = json!(o);
            (write_report(&rows, out, &sc)?, o)
        }
    };
    if out.is_none() {
        print!("{text}");
    }
    eprintln!(
        "{} points, {} violations, {} failures",
        outcome.points, outcome.violations, outcome.failures
    );
    Ok(outcome)
}

fn main() -> ExitCode {
    // Clap's own usage-error status (2) would read as a tolerance violation.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(o) => ExitCode::from(o.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_quadrature_failure() { 3 } else { 1 })
        }
    }
}
