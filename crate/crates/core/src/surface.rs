//! Heat traces of finite-volume hyperbolic surfaces (orbifolds) assembled
//! from a signature and a primitive length spectrum, together with both
//! sides of the Selberg trace formula.
//!
//! # Multiplicity convention
//!
//! By default a [`LengthSpectrum`] lists every primitive hyperbolic
//! conjugacy class separately, so `gamma` and `gamma^{-1}` are two classes
//! (two entries, or one entry with multiplicity 2). Set
//! [`InverseClassConvention::Identified`] in [`TraceConfig`] when each entry
//! stands for an inverse pair instead; its terms are then weighted by 2.
//!
//! # JSON schema
//!
//! ```text
//! {
//!   "genus": 0,
//!   "cusps": 1,
//!   "cones": [2, 5],
//!   "degenerating": [5],
//!   "spectrum": [[1.0613, 2], [1.5668, 2]],
//!   "completeness_radius": 6.0
//! }
//! ```
//!
//! Floats are written with round-trip precision, so `load(save(x)) == x`
//! bit for bit.

use std::f64::consts::PI;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cone_trace::{elliptic_cone_trace, hejhal_integral};
use crate::config::TraceConfig;
use crate::error::{Error, Result};
use crate::geometry::{orbifold_volume, ConeParams, SurfaceSignature};
use crate::hk_plane::{hk_plane, ComplexTime};
use crate::numerics::{integrate_adaptive, GaussianDecay, IntegralResult, QuadratureConfig};

/// Primitive hyperbolic length spectrum, possibly truncated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LengthSpectrum {
    entries: Vec<(f64, u64)>,
    completeness_radius: f64,
}

impl LengthSpectrum {
    /// `entries` must be sorted by length; equal lengths may repeat.
    pub fn new(entries: Vec<(f64, u64)>, completeness_radius: f64) -> Result<Self> {
        let s = Self {
            entries,
            completeness_radius,
        };
        s.validate()?;
        Ok(s)
    }

    /// Sorts the entries first.
    pub fn from_unsorted(mut entries: Vec<(f64, u64)>, completeness_radius: f64) -> Result<Self> {
        entries.sort_by(|a, b| a.0.total_cmp(&b.0));
        Self::new(entries, completeness_radius)
    }

    pub fn empty() -> Self {
        Self {
            entries: Vec::new(),
            completeness_radius: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.completeness_radius >= 0.0) || !self.completeness_radius.is_finite() {
            return Err(Error::InvalidSurface(format!(
                "completeness_radius must be finite and >= 0, got {}",
                self.completeness_radius
            )));
        }
        for (i, &(l, m)) in self.entries.iter().enumerate() {
            if !(l > 0.0) || !l.is_finite() {
                return Err(Error::InvalidSurface(format!("entry {i}: length {l} is not positive")));
            }
            if m == 0 {
                return Err(Error::InvalidSurface(format!("entry {i}: multiplicity 0")));
            }
            if i > 0 && self.entries[i - 1].0 > l {
                return Err(Error::InvalidSurface(format!(
                    "entries not sorted at index {i}"
                )));
            }
        }
        Ok(())
    }

    pub fn entries(&self) -> &[(f64, u64)] {
        &self.entries
    }

    pub fn completeness_radius(&self) -> f64 {
        self.completeness_radius
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of classes counted with multiplicity.
    pub fn class_count(&self) -> u64 {
        self.entries.iter().map(|e| e.1).sum()
    }

    pub fn systole(&self) -> Option<f64> {
        self.entries.first().map(|e| e.0)
    }

    /// Keeps only the classes of length at most `radius` and lowers the
    /// completeness radius accordingly.
    pub fn truncated(&self, radius: f64) -> Self {
        Self {
            entries: self.entries.iter().copied().filter(|e| e.0 <= radius).collect(),
            completeness_radius: self.completeness_radius.min(radius),
        }
    }
}

/// Signature, length spectrum and the cones flagged as degenerating.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceData {
    pub signature: SurfaceSignature,
    pub spectrum: LengthSpectrum,
    pub degenerating_orders: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct SurfaceFile {
    genus: u32,
    cusps: u32,
    cones: Vec<u32>,
    degenerating: Vec<u32>,
    spectrum: Vec<(f64, u64)>,
    completeness_radius: f64,
}

impl SurfaceData {
    pub fn new(
        signature: SurfaceSignature,
        spectrum: LengthSpectrum,
        degenerating_orders: Vec<u32>,
    ) -> Result<Self> {
        let s = Self {
            signature,
            spectrum,
            degenerating_orders,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        self.signature.validate()?;
        self.spectrum.validate()?;
        let mut pool = self.signature.cone_orders.clone();
        for &q in &self.degenerating_orders {
            match pool.iter().position(|&c| c == q) {
                Some(i) => {
                    pool.swap_remove(i);
                }
                None => {
                    return Err(Error::InvalidSurface(format!(
                        "degenerating order {q} is not among the remaining cone orders"
                    )))
                }
            }
        }
        Ok(())
    }

    pub fn volume(&self) -> Result<f64> {
        orbifold_volume(&self.signature)
    }

    pub fn to_json(&self) -> Result<String> {
        let file = SurfaceFile {
            genus: self.signature.genus,
            cusps: self.signature.cusps,
            cones: self.signature.cone_orders.clone(),
            degenerating: self.degenerating_orders.clone(),
            spectrum: self.spectrum.entries.clone(),
            completeness_radius: self.spectrum.completeness_radius,
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: SurfaceFile = serde_json::from_str(text)?;
        Self::new(
            SurfaceSignature::new(f.genus, f.cusps, f.cones)?,
            LengthSpectrum::new(f.spectrum, f.completeness_radius)?,
            f.degenerating,
        )
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()?).map_err(Error::file(path))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::from_json(&std::fs::read_to_string(path).map_err(Error::file(path))?)
    }
}

/// A trace value with its numerical error estimate and, separately, a bound
/// on what the classes missing from a truncated length spectrum could add.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceValue {
    pub value: Complex64,
    pub error_estimate: f64,
    pub completeness_deficit: f64,
}

impl TraceValue {
    pub const ZERO: TraceValue = TraceValue {
        value: Complex64::new(0.0, 0.0),
        error_estimate: 0.0,
        completeness_deficit: 0.0,
    };

    pub fn from_integral(r: IntegralResult) -> Self {
        Self {
            value: r.value,
            error_estimate: r.error_estimate,
            completeness_deficit: 0.0,
        }
    }

    /// Numerical error plus completeness deficit.
    pub fn uncertainty(&self) -> f64 {
        self.error_estimate + self.completeness_deficit
    }
}

impl std::ops::Add for TraceValue {
    type Output = TraceValue;
    fn add(self, o: TraceValue) -> TraceValue {
        TraceValue {
            value: self.value + o.value,
            error_estimate: self.error_estimate + o.error_estimate,
            completeness_deficit: self.completeness_deficit + o.completeness_deficit,
        }
    }
}

impl std::ops::Sub for TraceValue {
    type Output = TraceValue;
    fn sub(self, o: TraceValue) -> TraceValue {
        TraceValue {
            value: self.value - o.value,
            error_estimate: self.error_estimate + o.error_estimate,
            completeness_deficit: self.completeness_deficit + o.completeness_deficit,
        }
    }
}

const MAX_REPETITIONS: u64 = 1_000_000;

/// `Σ_{n>=1} ℓ / sinh(nℓ/2) g(nℓ)` for `|g(u)| <= e^{-rate u²}`, stopping
/// once a geometric bound on the remaining terms is below
/// `tol · |partial sum|`. Returns the partial sum and that bound.
fn repetition_sum<G>(l: f64, g: G, rate: f64, tol: f64) -> (Complex64, f64)
where
    G: Fn(f64) -> Complex64,
{
    let term = |n: u64| {
        let u = n as f64 * l;
        g(u) * (l / (0.5 * u).sinh())
    };
    let mut sum = Complex64::new(0.0, 0.0);
    let mut n = 1u64;
    loop {
        sum += term(n);
        let next = term(n + 1).norm();
        // |T_{m+1}/T_m| <= e^{-rate ℓ² (2m+1)}, decreasing in m.
        let ratio = (-rate * l * l * (2 * n + 3) as f64).exp();
        let tail = if ratio < 1.0 { next / (1.0 - ratio) } else { f64::INFINITY };
        if tail <= tol * sum.norm() || next == 0.0 || n >= MAX_REPETITIONS {
            return (sum, if next == 0.0 { 0.0 } else { tail });
        }
        n += 1;
    }
}

/// Sums one contribution per spectrum entry in parallel, then reduces in
/// entry order.
fn sum_classes<F>(spectrum: &LengthSpectrum, f: F) -> (Complex64, f64)
where
    F: Fn(f64) -> (Complex64, f64) + Sync,
{
    let parts: Vec<(Complex64, f64)> = spectrum
        .entries
        .par_iter()
        .map(|&(l, m)| {
            let (v, e) = f(l);
            (v * m as f64, e * m as f64)
        })
        .collect();
    parts
        .into_iter()
        .fold((Complex64::new(0.0, 0.0), 0.0), |(v, e), (pv, pe)| (v + pv, e + pe))
}

fn hyperbolic_prefactor(z: ComplexTime) -> Complex64 {
    z.exp_neg(0.25) / (16.0 * PI * z.as_complex()).sqrt()
}

/// Bound on the hyperbolic-trace contribution of the classes longer than
/// the completeness radius `R`, assuming at most `C e^ℓ dℓ` of them per unit
/// length:
/// `|prefactor| · C · 2 ∫_R^∞ e^ℓ ℓ / sinh(ℓ/2) e^{-eta ℓ²} dℓ`.
/// The factor 2 covers all repetitions `n >= 1`, since each successive
/// term is at most half the previous one.
pub fn completeness_deficit(
    radius: f64,
    z: ComplexTime,
    cfg: &TraceConfig,
) -> Result<f64> {
    let eta = z.eta();
    // e^ℓ ℓ / sinh(ℓ/2) = 2 ℓ e^{ℓ/2} / (1 - e^{-ℓ}); the exponent ℓ/2 - eta ℓ²
    // peaks at ℓ = 1/(4 eta).
    let peak = 1.0 / (4.0 * eta);
    let h = |l: f64| 0.5 * l - eta * l * l;
    let ref_exp = if radius < peak { h(peak) } else { h(radius) };
    let integrand = |l: f64| {
        let ratio = if l == 0.0 { 2.0 } else { l / (-(-l).exp_m1()) };
        Complex64::new(2.0 * ratio * (h(l) - ref_exp).exp(), 0.0)
    };
    let upper = radius.max(peak) + ((1.0 / cfg.quad.tail_cutoff_tol).ln() / eta).sqrt() + 1.0;
    let loose = QuadratureConfig {
        rel_tol: 1e-6,
        ..cfg.quad
    };
    let r = integrate_adaptive(integrand, radius, upper, &loose)?;
    let bound = (r.value.re + r.error_estimate) * ref_exp.exp();
    Ok(hyperbolic_prefactor(z).norm() * cfg.growth_constant * 2.0 * bound)
}

/// Hyperbolic heat trace
/// `e^{-z/4}/sqrt(16 pi z) Σ_γ Σ_{n>=1} ℓ_γ / sinh(nℓ_γ/2) e^{-(nℓ_γ)²/4z}`.
///
/// The formula is continued from real `t` to complex `z` verbatim.
pub fn hyperbolic_trace(
    spectrum: &LengthSpectrum,
    z: ComplexTime,
    cfg: &TraceConfig,
) -> Result<TraceValue> {
    if spectrum.is_empty() {
        return Ok(TraceValue {
            completeness_deficit: completeness_deficit(spectrum.completeness_radius, z, cfg)?,
            ..TraceValue::ZERO
        });
    }
    let eta = z.eta();
    let tol = cfg.quad.tail_cutoff_tol;
    let (sum, err) = sum_classes(spectrum, |l| repetition_sum(l, |u| z.gaussian(u), eta, tol));
    let pref = hyperbolic_prefactor(z) * cfg.convention.weight();
    let value = sum * pref;
    Ok(TraceValue {
        value,
        error_estimate: err * pref.norm() + 4.0 * f64::EPSILON * value.norm(),
        completeness_deficit: completeness_deficit(spectrum.completeness_radius, z, cfg)?,
    })
}

/// Sum of the elliptic cone traces over `orders`.
pub fn elliptic_trace(orders: &[u32], z: ComplexTime, cfg: &TraceConfig) -> Result<TraceValue> {
    let mut total = TraceValue::ZERO;
    for &q in orders {
        if q < 2 {
            return Err(Error::domain("elliptic_trace", format!("cone order {q} < 2")));
        }
        let r = elliptic_cone_trace(ConeParams::new(q)?, z, cfg)
            .map_err(|e| e.with_context(format!("elliptic trace of order {q}")))?;
        total = total + TraceValue::from_integral(r);
    }
    Ok(total)
}

/// Elliptic trace of the cones flagged as degenerating.
pub fn degenerating_trace(surface: &SurfaceData, z: ComplexTime, cfg: &TraceConfig) -> Result<TraceValue> {
    elliptic_trace(&surface.degenerating_orders, z, cfg)
}

/// `vol · K_H(z, 0)`.
pub fn identity_term(volume: f64, z: ComplexTime, cfg: &TraceConfig) -> Result<IntegralResult> {
    if !(volume > 0.0) || !volume.is_finite() {
        return Err(Error::domain("identity_term", format!("need volume > 0, got {volume}")));
    }
    Ok(hk_plane(z, 0.0, &cfg.quad)?.scale(Complex64::new(volume, 0.0)))
}

/// `(vol/4pi) ∫_ℝ e^{-(r² + 1/4) z} tanh(pi r) r dr`, the same quantity as
/// [`identity_term`] integrated over the whole line.
pub fn identity_term_symmetric(volume: f64, z: ComplexTime, cfg: &TraceConfig) -> Result<IntegralResult> {
    if !(volume > 0.0) || !volume.is_finite() {
        return Err(Error::domain(
            "identity_term_symmetric",
            format!("need volume > 0, got {volume}"),
        ));
    }
    let r = tanh_integral(|r| z.exp_neg(r * r + 0.25), z.t(), &cfg.quad)?;
    Ok(r.scale(Complex64::new(volume / (4.0 * PI), 0.0)))
}

/// `∫_ℝ h(r) tanh(pi r) r dr` for `|h(r)| <= C e^{-rate r²}`.
fn tanh_integral<H>(h: H, rate: f64, cfg: &QuadratureConfig) -> Result<IntegralResult>
where
    H: Fn(f64) -> Complex64,
{
    let upper = GaussianDecay::new(rate)
        .with_poly_degree(1)
        .truncation_radius(cfg.tail_cutoff_tol);
    let integrand = |r: f64| h(r) * ((PI * r).tanh() * r);
    let mut res = integrate_adaptive(integrand, -upper, upper, cfg)?;
    res.error_estimate += (integrand(upper).norm() + integrand(-upper).norm()) / (2.0 * rate * upper);
    Ok(res)
}

/// Standard (regularized) heat trace `vol · K_H(z,0) + HTr + ETr`.
pub fn standard_trace(surface: &SurfaceData, z: ComplexTime, cfg: &TraceConfig) -> Result<TraceValue> {
    surface.validate()?;
    let id = identity_term(surface.volume()?, z, cfg)?;
    let h = hyperbolic_trace(&surface.spectrum, z, cfg)?;
    let e = elliptic_trace(&surface.signature.cone_orders, z, cfg)?;
    Ok(TraceValue::from_integral(id) + h + e)
}

/// `HTr + ETr - DTr`.
pub fn reduced_trace(surface: &SurfaceData, z: ComplexTime, cfg: &TraceConfig) -> Result<TraceValue> {
    surface.validate()?;
    let h = hyperbolic_trace(&surface.spectrum, z, cfg)?;
    // ETr - DTr is the elliptic trace of the cones left over after removing
    // the flagged ones; summing those directly avoids a cancellation.
    let mut rest = surface.signature.cone_orders.clone();
    for q in &surface.degenerating_orders {
        if let Some(i) = rest.iter().position(|c| c == q) {
            rest.remove(i);
        }
    }
    let e = elliptic_trace(&rest, z, cfg)?;
    Ok(h + e)
}

/// Spectral test function `H(r)` (defined on the real line and on the
/// segment `[0, i/2]`) with its Fourier transform `Ĥ(u)`.
///
/// Admissibility is the caller's responsibility; the decay rates declare
/// Gaussian envelopes `|H(r)| <= C e^{-h_rate r²}`, `|Ĥ(u)| <= C e^{-hat_rate u²}`
/// used for truncation.
#[derive(Clone)]
pub struct TestFunctionPair {
    h: Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>,
    h_hat: Arc<dyn Fn(f64) -> Complex64 + Send + Sync>,
    h_rate: f64,
    hat_rate: f64,
    pub note: String,
}

impl std::fmt::Debug for TestFunctionPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TestFunctionPair")
            .field("h_rate", &self.h_rate)
            .field("hat_rate", &self.hat_rate)
            .field("note", &self.note)
            .finish()
    }
}

impl TestFunctionPair {
    pub fn new<H, G>(h: H, h_hat: G, h_rate: f64, hat_rate: f64, note: impl Into<String>) -> Result<Self>
    where
        H: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
        G: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        if !(h_rate > 0.0 && hat_rate > 0.0) {
            return Err(Error::domain(
                "TestFunctionPair",
                "decay rates must be positive",
            ));
        }
        Ok(Self {
            h: Arc::new(h),
            h_hat: Arc::new(h_hat),
            h_rate,
            hat_rate,
            note: note.into(),
        })
    }

    /// `H(r) = e^{-z r²}`, `Ĥ(u) = (4 pi z)^{-1/2} e^{-u²/4z}`.
    pub fn gaussian(z: ComplexTime) -> Self {
        let zc = z.as_complex();
        let norm = (4.0 * PI * zc).sqrt().inv();
        Self {
            h: Arc::new(move |r: Complex64| (-zc * r * r).exp()),
            h_hat: Arc::new(move |u: f64| z.gaussian(u) * norm),
            h_rate: z.t(),
            hat_rate: z.eta(),
            note: format!("gaussian pair at z = {z}"),
        }
    }

    pub fn h(&self, r: Complex64) -> Complex64 {
        (self.h)(r)
    }

    pub fn h_hat(&self, u: f64) -> Complex64 {
        (self.h_hat)(u)
    }

    /// The pair multiplied by a constant.
    pub fn scaled(&self, c: f64) -> Self {
        let (h, g) = (self.h.clone(), self.h_hat.clone());
        Self {
            h: Arc::new(move |r| h(r) * c),
            h_hat: Arc::new(move |u| g(u) * c),
            h_rate: self.h_rate,
            hat_rate: self.hat_rate,
            note: format!("{} scaled by {c}", self.note),
        }
    }
}

/// The three terms of the geometric side of the trace formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometricSide {
    pub identity: TraceValue,
    pub hyperbolic: TraceValue,
    pub elliptic: TraceValue,
}

impl GeometricSide {
    pub fn total(&self) -> TraceValue {
        self.identity + self.hyperbolic + self.elliptic
    }
}

/// Geometric side of the Selberg trace formula,
/// `(vol/4pi) ∫ H(r) tanh(pi r) r dr
///  + Σ_γ Σ_n ℓ_γ / (2 sinh(nℓ_γ/2)) Ĥ(nℓ_γ)
///  + Σ_q Σ_n 1/(2q sin(n pi/q)) ∫ H(r) e^{-2 pi n r/q} / (1 + e^{-2 pi r}) dr`.
///
/// With the Gaussian pair at time `z` this is `e^{z/4}` times
/// [`standard_trace`]; the heat-trace normalization carries an extra
/// `e^{-z/4}` that `H(r) = e^{-z r²}` does not.
pub fn stf_geometric_side(
    surface: &SurfaceData,
    pair: &TestFunctionPair,
    cfg: &TraceConfig,
) -> Result<GeometricSide> {
    surface.validate()?;
    let volume = surface.volume()?;
    let h_real = |r: f64| pair.h(Complex64::new(r, 0.0));

    let identity = tanh_integral(h_real, pair.h_rate, &cfg.quad)
        .map_err(|e| e.with_context("trace formula identity term"))?
        .scale(Complex64::new(volume / (4.0 * PI), 0.0));

    let tol = cfg.quad.tail_cutoff_tol;
    let hyperbolic = if surface.spectrum.is_empty() {
        TraceValue::ZERO
    } else {
        let (sum, err) = sum_classes(&surface.spectrum, |l| {
            repetition_sum(l, |u| pair.h_hat(u), pair.hat_rate, tol)
        });
        let w = 0.5 * cfg.convention.weight();
        TraceValue {
            value: sum * w,
            error_estimate: err * w + 4.0 * f64::EPSILON * sum.norm() * w,
            completeness_deficit: 0.0,
        }
    };

    let mut elliptic = TraceValue::ZERO;
    for &q in &surface.signature.cone_orders {
        let cone = ConeParams::new(q)?;
        for n in 1..q {
            let pref = 1.0 / (2.0 * f64::from(q) * cone.sin_rotation(i64::from(n)));
            let r = hejhal_integral(f64::from(n) / f64::from(q), h_real, pair.h_rate, &cfg.quad)
                .map_err(|e| e.with_context(format!("trace formula elliptic term q={q}, n={n}")))?;
            elliptic = elliptic + TraceValue::from_integral(r.scale(Complex64::new(pref, 0.0)));
        }
    }

    Ok(GeometricSide {
        identity: TraceValue::from_integral(identity),
        hyperbolic,
        elliptic,
    })
}

/// Spectral side `Σ H(r_n)` of the compact trace formula for the given
/// Laplace eigenvalues, with `λ = 1/4 + r²`; eigenvalues below `1/4` give
/// `r = i sqrt(1/4 - λ)`.
pub fn stf_spectral_side_compact(eigenvalues: &[f64], pair: &TestFunctionPair) -> Result<Complex64> {
    let mut total = Complex64::new(0.0, 0.0);
    for &lambda in eigenvalues {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::domain(
                "stf_spectral_side_compact",
                format!("eigenvalue {lambda} is negative or not finite"),
            ));
        }
        let r = if lambda >= 0.25 {
            Complex64::new((lambda - 0.25).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, (0.25 - lambda).sqrt())
        };
        total += pair.h(r);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::InverseClassConvention;

    fn real(t: f64) -> ComplexTime {
        ComplexTime::real(t).unwrap()
    }

    fn genus2(spectrum: LengthSpectrum) -> SurfaceData {
        SurfaceData::new(SurfaceSignature::new(2, 0, vec![]).unwrap(), spectrum, vec![]).unwrap()
    }

    #[test]
    fn spectrum_validation() {
        assert!(LengthSpectrum::new(vec![(2.0, 1), (1.0, 1)], 3.0).is_err());
        assert!(LengthSpectrum::new(vec![(0.0, 1)], 3.0).is_err());
        assert!(LengthSpectrum::new(vec![(1.0, 0)], 3.0).is_err());
        assert!(LengthSpectrum::new(vec![(1.0, 1)], -1.0).is_err());
        let s = LengthSpectrum::from_unsorted(vec![(2.0, 1), (1.0, 2), (1.0, 1)], 3.0).unwrap();
        assert_eq!(s.class_count(), 4);
        assert_eq!(s.systole(), Some(1.0));
        assert_eq!(s.truncated(1.5).entries().len(), 2);
    }

    #[test]
    fn degenerating_flags_must_be_a_sub_multiset() {
        let sig = SurfaceSignature::new(0, 1, vec![2, 5]).unwrap();
        assert!(SurfaceData::new(sig.clone(), LengthSpectrum::empty(), vec![5]).is_ok());
        assert!(SurfaceData::new(sig.clone(), LengthSpectrum::empty(), vec![5, 5]).is_err());
        assert!(SurfaceData::new(sig, LengthSpectrum::empty(), vec![7]).is_err());
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let spectrum = LengthSpectrum::new(
            vec![(0.1 + 0.2, 2), (1.0 / 3.0 * 7.0, 4), (std::f64::consts::E, 1)],
            2.0f64.sqrt() * 3.0,
        )
        .unwrap();
        let s = SurfaceData::new(
            SurfaceSignature::new(1, 2, vec![3, 7, 7]).unwrap(),
            spectrum,
            vec![7],
        )
        .unwrap();
        let back = SurfaceData::from_json(&s.to_json().unwrap()).unwrap();
        assert_eq!(back, s);
        for (a, b) in back.spectrum.entries().iter().zip(s.spectrum.entries()) {
            assert_eq!(a.0.to_bits(), b.0.to_bits());
        }
    }

    #[test]
    fn empty_spectrum_has_exact_zero_hyperbolic_trace() {
        let h = hyperbolic_trace(&LengthSpectrum::empty(), real(1.0), &TraceConfig::default()).unwrap();
        assert_eq!(h.value, Complex64::new(0.0, 0.0));
        assert_eq!(h.error_estimate, 0.0);
    }

    #[test]
    fn second_repetition_ratio() {
        let cfg = TraceConfig::default();
        for l in [0.5f64, 1.0, 2.0] {
            let z = real(1.0);
            let first = l / (0.5 * l).sinh() * (-l * l / 4.0).exp();
            let second = l / l.sinh() * (-l * l).exp();
            let expected = (-0.75 * l * l).exp() * (0.5 * l).sinh() / l.sinh();
            assert!((second / first - expected).abs() < 1e-10 * expected);
            let full = hyperbolic_trace(&LengthSpectrum::new(vec![(l, 1)], 0.0).unwrap(), z, &cfg)
                .unwrap()
                .value
                .re;
            assert!(full > first * hyperbolic_prefactor(z).re);
        }
    }

    #[test]
    fn multiplicity_is_linear() {
        let cfg = TraceConfig::default();
        let z = ComplexTime::new(0.6, 0.9).unwrap();
        let a = hyperbolic_trace(&LengthSpectrum::new(vec![(1.3, 1)], 0.0).unwrap(), z, &cfg).unwrap();
        let b = hyperbolic_trace(&LengthSpectrum::new(vec![(1.3, 2)], 0.0).unwrap(), z, &cfg).unwrap();
        assert_eq!(b.value, a.value * 2.0);
    }

    #[test]
    fn identified_convention_doubles() {
        let spec = LengthSpectrum::new(vec![(1.3, 1), (2.0, 3)], 0.0).unwrap();
        let d = TraceConfig::default();
        let i = TraceConfig {
            convention: InverseClassConvention::Identified,
            ..d
        };
        let a = hyperbolic_trace(&spec, real(1.0), &d).unwrap().value;
        let b = hyperbolic_trace(&spec, real(1.0), &i).unwrap().value;
        assert_eq!(b, a * 2.0);
    }

    #[test]
    fn elliptic_trace_examples() {
        let cfg = TraceConfig::default();
        let z = real(1.0);
        assert_eq!(elliptic_trace(&[], z, &cfg).unwrap(), TraceValue::ZERO);
        let one = elliptic_trace(&[5], z, &cfg).unwrap().value;
        assert_eq!(elliptic_trace(&[5, 5], z, &cfg).unwrap().value, one * 2.0);
        let two = elliptic_cone_trace(ConeParams::new(2).unwrap(), z, &cfg).unwrap().value;
        let three = elliptic_cone_trace(ConeParams::new(3).unwrap(), z, &cfg).unwrap().value;
        assert_eq!(elliptic_trace(&[2, 3], z, &cfg).unwrap().value, two + three);
        assert!(elliptic_trace(&[1], z, &cfg).is_err());
    }

    #[test]
    fn identity_term_two_forms_agree() {
        let cfg = TraceConfig::default();
        for t in [0.1, 1.0, 10.0] {
            let a = identity_term(4.0 * PI, real(t), &cfg).unwrap().value;
            let b = identity_term_symmetric(4.0 * PI, real(t), &cfg).unwrap().value;
            assert!((a - b).norm() <= 1e-10 * a.norm(), "t={t}: {a} vs {b}");
        }
        assert!(identity_term(0.0, real(1.0), &cfg).is_err());
    }

    #[test]
    fn empty_genus_two_standard_trace_is_identity_only() {
        let cfg = TraceConfig::default();
        let s = genus2(LengthSpectrum::empty());
        let st = standard_trace(&s, real(1.0), &cfg).unwrap();
        let id = 4.0 * PI * hk_plane(real(1.0), 0.0, &cfg.quad).unwrap().value;
        assert!((st.value - id).norm() <= 1e-15 * id.norm());
    }

    #[test]
    fn reduced_trace_flags() {
        let cfg = TraceConfig::default();
        let z = real(0.5);
        let spec = LengthSpectrum::new(vec![(1.0, 2)], 1.0).unwrap();
        let sig = SurfaceSignature::new(0, 1, vec![2, 6]).unwrap();
        let none = SurfaceData::new(sig.clone(), spec.clone(), vec![]).unwrap();
        let all = SurfaceData::new(sig.clone(), spec.clone(), vec![2, 6]).unwrap();
        let h = hyperbolic_trace(&spec, z, &cfg).unwrap();
        let e = elliptic_trace(&[2, 6], z, &cfg).unwrap();
        let r_none = reduced_trace(&none, z, &cfg).unwrap();
        assert!((r_none.value - (h.value + e.value)).norm() < 1e-15);
        assert_eq!(reduced_trace(&all, z, &cfg).unwrap().value, h.value);
    }

    #[test]
    fn spectral_side_examples() {
        let t = 0.7;
        let pair = TestFunctionPair::gaussian(real(t));
        let at = |l: f64| stf_spectral_side_compact(&[l], &pair).unwrap();
        assert!((at(0.0).re - (t / 4.0f64).exp()).abs() < 1e-15);
        assert_eq!(at(0.25).re, 1.0);
        assert!((at(1.25).re - (-t).exp()).abs() < 1e-15);
        assert!(stf_spectral_side_compact(&[-0.1], &pair).is_err());
    }

    #[test]
    fn geometric_side_scales_and_matches() {
        let cfg = TraceConfig::default();
        let z = real(1.0);
        let s = SurfaceData::new(
            SurfaceSignature::new(1, 0, vec![3]).unwrap(),
            LengthSpectrum::new(vec![(1.5, 2), (2.2, 4)], 2.2).unwrap(),
            vec![],
        )
        .unwrap();
        let pair = TestFunctionPair::gaussian(z);
        let g = stf_geometric_side(&s, &pair, &cfg).unwrap().total();
        let g2 = stf_geometric_side(&s, &pair.scaled(2.0), &cfg).unwrap().total();
        assert!((g2.value - g.value * 2.0).norm() <= 1e-15 * g.value.norm());
        let st = standard_trace(&s, z, &cfg).unwrap();
        let lhs = g.value * z.exp_neg(0.25);
        assert!((lhs - st.value).norm() <= 1e-8 * st.value.norm(), "{lhs} vs {}", st.value);
    }

    #[test]
    fn deficit_shrinks_with_radius() {
        let cfg = TraceConfig::default();
        let z = real(1.0);
        let a = completeness_deficit(2.0, z, &cfg).unwrap();
        let b = completeness_deficit(6.0, z, &cfg).unwrap();
        let c = completeness_deficit(12.0, z, &cfg).unwrap();
        assert!(a > b && b > c && c > 0.0, "{a} {b} {c}");
    }
}
