//! Batch experiments behind the `hyperheat` command: each runs a grid of
//! points in parallel, keeps the rows in grid order, and writes a CSV file
//! plus a JSON sidecar describing the run.
//!
//! Sidecar layout (`<out>.json`):
//!
//! ```text
//! {
//!   "schema": "parseval-check/1",     // CSV schema name and version
//!   "crate_version": "0.1.0",
//!   "command": "parseval-check",
//!   "config": { ...TraceConfig... },
//!   "grids": { "q": [...], "t": [...] },
//!   "tolerance": 1e-8,
//!   "columns": { "rel_diff": "...", ... },
//!   "summary": { "points": 30, "violations": 0, "failures": 0, ... }
//! }
//! ```
//!
//! A quadrature failure at one grid point leaves that row's value columns
//! empty and records the message in `status`; the run continues.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::cone_trace::{
    degeneration_bound, elliptic_cone_trace, elliptic_cone_trace_hejhal, truncated_cone_trace,
    DegenerationBoundParams,
};
use crate::config::TraceConfig;
use crate::error::{Error, Result};
use crate::geometry::ConeParams;
use crate::hecke::{hecke_surface, spectrum_with_cache, HeckeGroup, SpectrumCache};
use crate::hk_plane::ComplexTime;
use crate::surface::{
    reduced_trace, standard_trace, stf_geometric_side, stf_spectral_side_compact, SurfaceData,
    TestFunctionPair,
};

/// Relative tolerance of the Parseval and trace-formula checks.
pub const IDENTITY_TOLERANCE: f64 = 1e-8;

/// Process exit status of a finished experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub points: usize,
    /// Points that completed but broke the check's tolerance.
    pub violations: usize,
    /// Points where a computation failed.
    pub failures: usize,
}

impl Outcome {
    /// 0 on success, 3 if any point failed, else 2 on tolerance violations.
    pub fn exit_code(&self) -> i32 {
        if self.failures > 0 {
            3
        } else if self.violations > 0 {
            2
        } else {
            0
        }
    }
}

fn status_of<T>(r: &Result<T>) -> String {
    match r {
        Ok(_) => "ok".to_string(),
        Err(e) => e.to_string(),
    }
}

fn count(statuses: impl Iterator<Item = (bool, bool)>) -> Outcome {
    let mut o = Outcome {
        points: 0,
        violations: 0,
        failures: 0,
    };
    for (failed, violated) in statuses {
        o.points += 1;
        o.failures += usize::from(failed);
        o.violations += usize::from(violated);
    }
    o
}

// ----------------------------------------------------------------------------
// parseval-check

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParsevalRow {
    pub q: u32,
    pub t: f64,
    pub cone_trace: Option<f64>,
    pub cone_trace_err: Option<f64>,
    pub hejhal_trace: Option<f64>,
    pub hejhal_trace_err: Option<f64>,
    pub rel_diff: Option<f64>,
    pub status: String,
}

impl ParsevalRow {
    pub fn passes(&self) -> bool {
        matches!(self.rel_diff, Some(d) if d <= IDENTITY_TOLERANCE)
    }
}

/// Both elliptic-trace representations of one cone at real time `t`.
pub fn parseval_point(q: u32, t: f64, cfg: &TraceConfig) -> ParsevalRow {
    let res = (|| {
        let cone = ConeParams::new(q)?;
        let a = elliptic_cone_trace(cone, ComplexTime::real(t)?, cfg)?;
        let b = elliptic_cone_trace_hejhal(cone, t, cfg)?;
        Ok((a, b))
    })();
    let status = status_of(&res);
    match res {
        Ok((a, b)) => {
            let diff = (a.value - b.value).norm();
            let scale = a.value.norm().max(b.value.norm());
            ParsevalRow {
                q,
                t,
                cone_trace: Some(a.value.re),
                cone_trace_err: Some(a.error_estimate),
                hejhal_trace: Some(b.value.re),
                hejhal_trace_err: Some(b.error_estimate),
                rel_diff: Some(if scale == 0.0 { diff } else { diff / scale }),
                status,
            }
        }
        Err(_) => ParsevalRow {
            q,
            t,
            cone_trace: None,
            cone_trace_err: None,
            hejhal_trace: None,
            hejhal_trace_err: None,
            rel_diff: None,
            status,
        },
    }
}

pub fn parseval_check(qs: &[u32], ts: &[f64], cfg: &TraceConfig) -> (Vec<ParsevalRow>, Outcome) {
    let grid: Vec<(u32, f64)> = qs.iter().flat_map(|&q| ts.iter().map(move |&t| (q, t))).collect();
    let rows: Vec<ParsevalRow> = grid.par_iter().map(|&(q, t)| parseval_point(q, t, cfg)).collect();
    let outcome = count(rows.iter().map(|r| (r.rel_diff.is_none(), r.rel_diff.is_some() && !r.passes())));
    (rows, outcome)
}

// ----------------------------------------------------------------------------
// bound-check

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub q: u32,
    pub delta: f64,
    pub t: f64,
    pub s: f64,
    pub trace_re: Option<f64>,
    pub trace_im: Option<f64>,
    pub trace_abs: Option<f64>,
    pub trace_err: Option<f64>,
    pub bound: Option<f64>,
    pub ratio: Option<f64>,
    pub status: String,
}

impl BoundRow {
    /// `|I| <= bound`.
    pub fn passes(&self) -> bool {
        matches!(self.ratio, Some(r) if r <= 1.0)
    }
}

/// `|I_{q,delta}(z)|` against its q-independent bound.
pub fn bound_point(q: u32, delta: f64, t: f64, s: f64, cfg: &TraceConfig) -> BoundRow {
    let res = (|| {
        let z = ComplexTime::new(t, s)?;
        let i = truncated_cone_trace(ConeParams::new(q)?, delta, z, cfg)?;
        let b = degeneration_bound(DegenerationBoundParams::new(delta, z)?, z)?;
        Ok((i, b))
    })();
    let status = status_of(&res);
    match res {
        Ok((i, b)) => BoundRow {
            q,
            delta,
            t,
            s,
            trace_re: Some(i.value.re),
            trace_im: Some(i.value.im),
            trace_abs: Some(i.value.norm()),
            trace_err: Some(i.error_estimate),
            bound: Some(b),
            ratio: Some(i.value.norm() / b),
            status,
        },
        Err(_) => BoundRow {
            q,
            delta,
            t,
            s,
            trace_re: None,
            trace_im: None,
            trace_abs: None,
            trace_err: None,
            bound: None,
            ratio: None,
            status,
        },
    }
}

pub fn bound_check(
    qs: &[u32],
    deltas: &[f64],
    ts: &[f64],
    ss: &[f64],
    cfg: &TraceConfig,
) -> (Vec<BoundRow>, Outcome) {
    let mut grid = Vec::new();
    for &q in qs {
        for &d in deltas {
            for &t in ts {
                for &s in ss {
                    grid.push((q, d, t, s));
                }
            }
        }
    }
    let rows: Vec<BoundRow> = grid
        .par_iter()
        .map(|&(q, d, t, s)| bound_point(q, d, t, s, cfg))
        .collect();
    let outcome = count(rows.iter().map(|r| (r.bound.is_none(), r.bound.is_some() && !r.passes())));
    (rows, outcome)
}

// ----------------------------------------------------------------------------
// degeneration-sweep

/// Enumeration settings for the Hecke spectra of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeckeOptions {
    pub max_word_len: usize,
    pub trace_bound: f64,
    /// Append a row for the limit group.
    pub include_limit: bool,
    #[serde(skip)]
    pub cache: Option<SpectrumCache>,
}

impl Default for HeckeOptions {
    fn default() -> Self {
        Self {
            max_word_len: 64,
            trace_bound: 400.0,
            include_limit: false,
            cache: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegenerationRow {
    /// `N`, or `inf` for the limit group.
    pub group: String,
    pub t: f64,
    pub s: f64,
    pub reduced_re: Option<f64>,
    pub reduced_im: Option<f64>,
    pub reduced_err: Option<f64>,
    pub completeness_deficit: Option<f64>,
    pub completeness_radius: Option<f64>,
    pub classes: Option<u64>,
    /// `t^{3/2} |reduced trace|`.
    pub t32_abs: Option<f64>,
    pub warnings: usize,
    pub status: String,
}

fn group_label(g: HeckeGroup) -> String {
    match g {
        HeckeGroup::Finite(n) => n.to_string(),
        HeckeGroup::Limit => "inf".to_string(),
    }
}

/// Reduced trace `HTr + ETr - DTr` of `H / G_N` for each `N` and time.
pub fn degeneration_sweep(
    ns: &[u32],
    ts: &[f64],
    ss: &[f64],
    opts: &HeckeOptions,
    cfg: &TraceConfig,
) -> (Vec<DegenerationRow>, Outcome) {
    let mut groups: Vec<Result<HeckeGroup>> = ns.iter().map(|&n| HeckeGroup::new(n)).collect();
    if opts.include_limit {
        groups.push(Ok(HeckeGroup::Limit));
    }
    // Spectra first (one per group, possibly cached), then the time grid.
    let surfaces: Vec<Result<(SurfaceData, usize)>> = groups
        .par_iter()
        .map(|g| {
            let g = match g {
                Ok(g) => *g,
                Err(e) => return Err(Error::domain("degeneration_sweep", e.to_string())),
            };
            let c = spectrum_with_cache(g, opts.max_word_len, opts.trace_bound, opts.cache.as_ref())?;
            Ok((hecke_surface(g, c.spectrum)?, c.warnings.len()))
        })
        .collect();

    let mut grid = Vec::new();
    for (i, g) in groups.iter().enumerate() {
        for &t in ts {
            for &s in ss {
                grid.push((i, g.as_ref().ok().copied(), t, s));
            }
        }
    }
    let rows: Vec<DegenerationRow> = grid
        .par_iter()
        .map(|&(i, g, t, s)| {
            let label = g.map_or_else(|| ns.get(i).map_or("?".into(), |n| n.to_string()), group_label);
            let res = match &surfaces[i] {
                Ok((surface, warnings)) => ComplexTime::new(t, s)
                    .and_then(|z| reduced_trace(surface, z, cfg))
                    .map(|r| (r, surface, *warnings)),
                Err(e) => Err(Error::InvalidSurface(e.to_string())),
            };
            let status = status_of(&res);
            match res {
                Ok((r, surface, warnings)) => DegenerationRow {
                    group: label,
                    t,
                    s,
                    reduced_re: Some(r.value.re),
                    reduced_im: Some(r.value.im),
                    reduced_err: Some(r.error_estimate),
                    completeness_deficit: Some(r.completeness_deficit),
                    completeness_radius: Some(surface.spectrum.completeness_radius()),
                    classes: Some(surface.spectrum.class_count()),
                    t32_abs: Some(t.powf(1.5) * r.value.norm()),
                    warnings,
                    status,
                },
                Err(_) => DegenerationRow {
                    group: label,
                    t,
                    s,
                    reduced_re: None,
                    reduced_im: None,
                    reduced_err: None,
                    completeness_deficit: None,
                    completeness_radius: None,
                    classes: None,
                    t32_abs: None,
                    warnings: 0,
                    status,
                },
            }
        })
        .collect();
    let outcome = count(rows.iter().map(|r| (r.reduced_re.is_none(), false)));
    (rows, outcome)
}

/// Successive gaps `|f(N_{i+1}) - f(N_i)|` with their combined uncertainty
/// (numerical error plus completeness deficit of both endpoints).
pub fn successive_gaps(values: &[(f64, f64)]) -> Vec<(f64, f64)> {
    values
        .windows(2)
        .map(|w| ((w[1].0 - w[0].0).abs(), w[0].1 + w[1].1))
        .collect()
}

/// `true` if each gap is at most the previous one, up to their combined
/// uncertainties.
pub fn gaps_non_increasing(gaps: &[(f64, f64)]) -> bool {
    gaps.windows(2).all(|w| w[1].0 <= w[0].0 + w[0].1 + w[1].1)
}

/// Per time point, the gap sequence over the finite groups of a sweep.
pub fn degeneration_gaps(rows: &[DegenerationRow]) -> BTreeMap<String, Vec<(f64, f64)>> {
    let mut by_time: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.group != "inf") {
        if let (Some(v), Some(e), Some(d)) = (r.reduced_re, r.reduced_err, r.completeness_deficit) {
            by_time
                .entry(format!("t={},s={}", r.t, r.s))
                .or_default()
                .push((v, e + d));
        }
    }
    by_time
        .into_iter()
        .map(|(k, v)| (k, successive_gaps(&v)))
        .collect()
}

// ----------------------------------------------------------------------------
// stf-eval

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StfRow {
    pub t: f64,
    /// Geometric side with `H(r) = e^{-t r²}`.
    pub geometric: Option<f64>,
    pub geometric_err: Option<f64>,
    /// `e^{-t/4}` times the geometric side, comparable to the standard trace.
    pub geometric_heat: Option<f64>,
    pub standard_trace: Option<f64>,
    pub standard_trace_err: Option<f64>,
    pub rel_diff: Option<f64>,
    pub spectral: Option<f64>,
    /// `spectral - geometric`.
    pub spectral_minus_geometric: Option<f64>,
    pub status: String,
}

impl StfRow {
    pub fn passes(&self) -> bool {
        matches!(self.rel_diff, Some(d) if d <= IDENTITY_TOLERANCE)
    }
}

/// Both evaluations of the Gaussian-pair trace formula at real time `t`.
pub fn stf_point(surface: &SurfaceData, eigenvalues: Option<&[f64]>, t: f64, cfg: &TraceConfig) -> StfRow {
    let res = (|| {
        let z = ComplexTime::real(t)?;
        let pair = TestFunctionPair::gaussian(z);
        let g = stf_geometric_side(surface, &pair, cfg)?.total();
        let st = standard_trace(surface, z, cfg)?;
        let spectral = eigenvalues
            .map(|ev| stf_spectral_side_compact(ev, &pair))
            .transpose()?;
        Ok((g, st, spectral, z.exp_neg(0.25)))
    })();
    let status = status_of(&res);
    match res {
        Ok((g, st, spectral, norm)) => {
            let heat = g.value * norm;
            StfRow {
                t,
                geometric: Some(g.value.re),
                geometric_err: Some(g.error_estimate),
                geometric_heat: Some(heat.re),
                standard_trace: Some(st.value.re),
                standard_trace_err: Some(st.error_estimate),
                rel_diff: Some((heat - st.value).norm() / st.value.norm()),
                spectral: spectral.map(|s| s.re),
                spectral_minus_geometric: spectral.map(|s| (s - g.value).re),
                status,
            }
        }
        Err(_) => StfRow {
            t,
            geometric: None,
            geometric_err: None,
            geometric_heat: None,
            standard_trace: None,
            standard_trace_err: None,
            rel_diff: None,
            spectral: None,
            spectral_minus_geometric: None,
            status,
        },
    }
}

pub fn stf_eval(
    surface: &SurfaceData,
    eigenvalues: Option<&[f64]>,
    ts: &[f64],
    cfg: &TraceConfig,
) -> (Vec<StfRow>, Outcome) {
    let rows: Vec<StfRow> = ts
        .par_iter()
        .map(|&t| stf_point(surface, eigenvalues, t, cfg))
        .collect();
    let outcome = count(rows.iter().map(|r| (r.rel_diff.is_none(), r.rel_diff.is_some() && !r.passes())));
    (rows, outcome)
}

/// Reads eigenvalues, one per line; blank lines and `#` comments are skipped.
pub fn read_eigenvalues(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(Error::file(path))?;
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.parse::<f64>()
                .map_err(|e| Error::domain("read_eigenvalues", format!("bad eigenvalue '{l}': {e}")))
        })
        .collect()
}

// ----------------------------------------------------------------------------
// output

/// Run description written next to the CSV.
#[derive(Debug, Clone, Serialize)]
pub struct Sidecar {
    pub schema: String,
    pub crate_version: String,
    pub command: String,
    pub config: TraceConfig,
    pub grids: BTreeMap<String, serde_json::Value>,
    pub tolerance: Option<f64>,
    pub columns: BTreeMap<String, String>,
    pub summary: serde_json::Value,
}

impl Sidecar {
    pub fn new(command: &str, schema_version: u32, config: TraceConfig) -> Self {
        Self {
            schema: format!("{command}/{schema_version}"),
            crate_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config,
            grids: BTreeMap::new(),
            tolerance: None,
            columns: BTreeMap::new(),
            summary: serde_json::Value::Null,
        }
    }

    pub fn grid<T: Serialize>(mut self, name: &str, values: &T) -> Self {
        self.grids.insert(
            name.to_string(),
            serde_json::to_value(values).unwrap_or(serde_json::Value::Null),
        );
        self
    }

    pub fn column(mut self, name: &str, description: &str) -> Self {
        self.columns.insert(name.to_string(), description.to_string());
        self
    }
}

/// Path of the sidecar for a CSV output path: `<out>.json`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// Writes `rows` as CSV to `out` (or returns the CSV text when `out` is
/// `None`) and the sidecar next to it.
pub fn write_report<R: Serialize>(rows: &[R], out: Option<&Path>, sidecar: &Sidecar) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    let text = String::from_utf8(bytes).expect("csv output is utf-8");
    if let Some(path) = out {
        std::fs::write(path, &text).map_err(Error::file(path))?;
        let side = sidecar_path(path);
        std::fs::write(&side, serde_json::to_string_pretty(sidecar)?).map_err(Error::file(&side))?;
    }
    Ok(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let o = |v, f| Outcome {
            points: 3,
            violations: v,
            failures: f,
        };
        assert_eq!(o(0, 0).exit_code(), 0);
        assert_eq!(o(1, 0).exit_code(), 2);
        assert_eq!(o(1, 1).exit_code(), 3);
    }

    #[test]
    fn parseval_single_point_and_trivial_cone() {
        let cfg = TraceConfig::default();
        let (rows, out) = parseval_check(&[5], &[1.0], &cfg);
        assert_eq!(rows.len(), 1);
        assert_eq!(out.exit_code(), 0);
        let r = parseval_point(1, 1.0, &cfg);
        assert_eq!(r.cone_trace, Some(0.0));
        assert_eq!(r.hejhal_trace, Some(0.0));
    }

    #[test]
    fn failures_are_recorded_per_point() {
        let cfg = TraceConfig::default();
        let (rows, out) = parseval_check(&[3], &[-1.0, 1.0], &cfg);
        assert_eq!(rows.len(), 2);
        assert!(rows[0].rel_diff.is_none() && rows[0].status != "ok");
        assert!(rows[1].passes());
        assert_eq!(out.failures, 1);
        assert_eq!(out.exit_code(), 3);
    }

    #[test]
    fn gap_logic() {
        let g = successive_gaps(&[(1.0, 0.0), (0.5, 0.0), (0.3, 0.0), (0.25, 0.0)]);
        assert!(gaps_non_increasing(&g));
        let g = successive_gaps(&[(1.0, 0.0), (0.9, 0.0), (0.3, 0.0)]);
        assert!(!gaps_non_increasing(&g));
        let g = successive_gaps(&[(1.0, 0.3), (0.9, 0.3), (0.3, 0.0)]);
        assert!(gaps_non_increasing(&g));
    }

    #[test]
    fn report_writes_csv_and_sidecar() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("p.csv");
        let cfg = TraceConfig::default();
        let (rows, _) = parseval_check(&[3], &[1.0], &cfg);
        let sc = Sidecar::new("parseval-check", 1, cfg).grid("q", &[3]);
        let text = write_report(&rows, Some(&out), &sc).unwrap();
        assert!(text.starts_with("q,t,cone_trace"));
        let meta: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(sidecar_path(&out)).unwrap()).unwrap();
        assert_eq!(meta["schema"], "parseval-check/1");
    }
}
