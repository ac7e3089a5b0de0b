//! Quadrature primitives and special functions shared by every trace
//! computation.
//!
//! Integration is adaptive Gauss–Kronrod (10-point Gauss nested in a 21-point
//! Kronrod rule) with global bisection of the worst segment. Complex
//! integrands are handled as a single value per node, so the real and
//! imaginary parts share one subdivision tree.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances for adaptive and Gaussian-tail quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Relative Gaussian tail mass that may be discarded when truncating a
    /// semi-infinite range.
    pub tail_cutoff_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_subdivisions: 4000,
            tail_cutoff_tol: 1e-14,
        }
    }
}

impl QuadratureConfig {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(Error::domain("QuadratureConfig", "rel_tol must be > 0"));
        }
        if !(self.abs_tol >= 0.0) {
            return Err(Error::domain("QuadratureConfig", "abs_tol must be >= 0"));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::domain(
                "QuadratureConfig",
                "max_subdivisions must be >= 1",
            ));
        }
        if !(self.tail_cutoff_tol > 0.0 && self.tail_cutoff_tol <= 1e-6) {
            return Err(Error::domain(
                "QuadratureConfig",
                "tail_cutoff_tol must lie in (0, 1e-6]",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult {
    pub value: Complex64,
    pub error_estimate: f64,
}

impl IntegralResult {
    pub const ZERO: IntegralResult = IntegralResult {
        value: Complex64::new(0.0, 0.0),
        error_estimate: 0.0,
    };

    pub fn new(value: Complex64, error_estimate: f64) -> Self {
        Self {
            value,
            error_estimate,
        }
    }

    pub fn scale(self, factor: Complex64) -> Self {
        Self {
            value: self.value * factor,
            error_estimate: self.error_estimate * factor.norm(),
        }
    }
}

impl std::ops::Add for IntegralResult {
    type Output = IntegralResult;
    fn add(self, rhs: IntegralResult) -> IntegralResult {
        IntegralResult {
            value: self.value + rhs.value,
            error_estimate: self.error_estimate + rhs.error_estimate,
        }
    }
}

impl std::iter::Sum for IntegralResult {
    fn sum<I: Iterator<Item = IntegralResult>>(iter: I) -> Self {
        iter.fold(IntegralResult::ZERO, |acc, x| acc + x)
    }
}

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    /// Part of `error` that is pure rounding noise, `50 eps ∫|f|`.
    floor: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    // Largest error first; ties broken by position so the refinement order
    // never depends on heap internals.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gk21<F>(f: &F, a: f64, b: f64) -> Result<Segment>
where
    F: Fn(f64) -> Result<(Complex64, f64)>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let (fc, ec) = f(center)?;
    let mut resk = fc * WGK[10];
    let mut resabs = fc.norm() * WGK[10];
    let mut resg = Complex64::new(0.0, 0.0);
    let mut inner_err = ec * WGK[10];
    let mut fv1 = [Complex64::new(0.0, 0.0); 10];
    let mut fv2 = [Complex64::new(0.0, 0.0); 10];

    for j in 0..10 {
        let dx = half * XGK[j];
        let (f1, e1) = f(center - dx)?;
        let (f2, e2) = f(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        resk += (f1 + f2) * WGK[j];
        resabs += (f1.norm() + f2.norm()) * WGK[j];
        inner_err += (e1 + e2) * WGK[j];
        if j % 2 == 1 {
            resg += (f1 + f2) * WG[j / 2];
        }
    }

    let mean = resk * 0.5;
    let mut resasc = (fc - mean).norm() * WGK[10];
    for j in 0..10 {
        resasc += ((fv1[j] - mean).norm() + (fv2[j] - mean).norm()) * WGK[j];
    }

    let value = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut err = ((resk - resg) * half).norm();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * resabs;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(floor);
    }
    err += inner_err * half.abs();

    if !value.re.is_finite() || !value.im.is_finite() || !err.is_finite() {
        return Err(Error::domain(
            "integrate_adaptive",
            format!("integrand produced a non-finite value on [{a}, {b}]"),
        ));
    }
    Ok(Segment {
        a,
        b,
        value,
        error: err,
        floor,
    })
}

fn adaptive_core<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<IntegralResult>
where
    F: Fn(f64) -> Result<(Complex64, f64)>,
{
    cfg.validate()?;
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        if a == b {
            return Ok(IntegralResult::ZERO);
        }
        return Err(Error::domain(
            "integrate_adaptive",
            format!("need finite a < b, got [{a}, {b}]"),
        ));
    }

    let first = gk21(&f, a, b)?;
    let mut total = first.value;
    let mut total_err = first.error;
    let mut total_floor = first.floor;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut done: Vec<Segment> = Vec::new();

    // Also stop once the estimate is within a factor of two of the rounding
    // floor: heavy cancellation (oscillatory integrands far out in a
    // Gaussian tail) can make the relative target unreachable, and further
    // bisection would only burn the subdivision budget.
    let converged = |total: Complex64, err: f64, floor: f64| {
        err <= cfg.abs_tol.max(cfg.rel_tol * total.norm()) || err <= 2.0 * floor
    };

    let mut subdivisions = 1;
    while !converged(total, total_err, total_floor) {
        if subdivisions >= cfg.max_subdivisions {
            let partial = IntegralResult::new(total, total_err);
            return Err(Error::Quadrature {
                context: format!("integrate_adaptive on [{a}, {b}]"),
                partial,
            });
        }
        let Some(worst) = heap.pop() else {
            break;
        };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b)
            || (worst.b - worst.a) <= 64.0 * f64::EPSILON * mid.abs().max(f64::MIN_POSITIVE)
        {
            // Too narrow to split any further; its error is already at the
            // roundoff floor.
            done.push(worst);
            continue;
        }
        let left = gk21(&f, worst.a, mid)?;
        let right = gk21(&f, mid, worst.b)?;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        total_floor += left.floor + right.floor - worst.floor;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
    }

    // Re-sum in positional order so the result does not carry the
    // incremental-update rounding history.
    done.extend(heap.into_vec());
    done.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value: Complex64 = done.iter().map(|s| s.value).sum();
    let error_estimate: f64 = done.iter().map(|s| s.error).sum();
    let floor: f64 = done.iter().map(|s| s.floor).sum();
    if !converged(value, error_estimate, floor) && subdivisions >= cfg.max_subdivisions {
        return Err(Error::Quadrature {
            context: format!("integrate_adaptive on [{a}, {b}]"),
            partial: IntegralResult::new(value, error_estimate),
        });
    }
    Ok(IntegralResult::new(value, error_estimate))
}

/// Adaptive Gauss–Kronrod integration of a complex-valued integrand over a
/// finite interval. Any endpoint singularity must already have been removed
/// by a change of variables.
pub fn integrate_adaptive<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<IntegralResult>
where
    F: Fn(f64) -> Complex64,
{
    adaptive_core(|x| Ok((f(x), 0.0)), a, b, cfg)
}

/// Like [`integrate_adaptive`] for integrands that are themselves computed
/// numerically. The integrand's own error estimates are propagated through
/// the Kronrod weights into the reported error.
pub fn integrate_adaptive_nested<F>(
    f: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult>
where
    F: Fn(f64) -> Result<IntegralResult>,
{
    adaptive_core(
        |x| f(x).map(|r| (r.value, r.error_estimate)),
        a,
        b,
        cfg,
    )
}

/// Declared Gaussian envelope of an integrand on `[0, inf)`:
/// `|g(u)| <= C (1 + u)^poly_degree exp(-rate u^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianDecay {
    pub rate: f64,
    pub poly_degree: u32,
}

impl GaussianDecay {
    pub fn new(rate: f64) -> Self {
        Self {
            rate,
            poly_degree: 0,
        }
    }

    pub fn with_poly_degree(mut self, degree: u32) -> Self {
        self.poly_degree = degree;
        self
    }

    /// Radius beyond which the envelope has dropped by `tol` relative to its
    /// value at the origin, including the polynomial correction.
    pub fn truncation_radius(&self, tol: f64) -> f64 {
        let log_inv = (1.0 / tol).ln();
        let base = (log_inv / self.rate).sqrt();
        if self.poly_degree == 0 {
            return base;
        }
        let correction = f64::from(self.poly_degree) * (1.0 + base).ln();
        ((log_inv + correction) / self.rate).sqrt()
    }
}

/// `∫_0^∞ g(u) du` for an integrand with a declared Gaussian envelope. The
/// range is cut analytically at the radius where the discarded mass falls
/// below `cfg.tail_cutoff_tol`; a Mills-ratio estimate of that discarded mass
/// is added to the error.
pub fn integrate_gaussian_tail<F>(
    g: F,
    decay: GaussianDecay,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult>
where
    F: Fn(f64) -> Complex64,
{
    if !(decay.rate > 0.0) || !decay.rate.is_finite() {
        return Err(Error::domain(
            "integrate_gaussian_tail",
            format!("decay rate must be positive, got {}", decay.rate),
        ));
    }
    let upper = decay.truncation_radius(cfg.tail_cutoff_tol);
    let mut res = integrate_adaptive(&g, 0.0, upper, cfg)?;
    let edge = g(upper).norm();
    res.error_estimate += edge / (2.0 * decay.rate * upper);
    Ok(res)
}

/// `acosh(1 + x)` for `x >= 0`, accurate when `x` is tiny.
pub fn acosh1p(x: f64) -> f64 {
    if x > 1e8 {
        (1.0 + x).acosh()
    } else {
        (x + (x * (2.0 + x)).sqrt()).ln_1p()
    }
}

/// `cosh(u) - cosh(d)` without cancellation.
pub fn cosh_difference(u: f64, d: f64) -> f64 {
    2.0 * (0.5 * (u + d)).sinh() * (0.5 * (u - d)).sinh()
}

// Bernoulli numbers B_2 .. B_20.
const BERNOULLI_EVEN: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Riemann zeta function for real `s > 1`, by Euler–Maclaurin summation.
pub fn riemann_zeta(s: f64) -> Result<f64> {
    if !(s > 1.0) {
        return Err(Error::domain(
            "riemann_zeta",
            format!("only s > 1 is supported, got {s}"),
        ));
    }
    if s > 60.0 {
        // 2^-s is already below machine precision relative to 1.
        return Ok(1.0 + 2f64.powf(-s) + 3f64.powf(-s));
    }
    const N: usize = 20;
    let n = N as f64;
    // Head: smallest terms first.
    let mut head = 0.0;
    for k in (1..N).rev() {
        head += (k as f64).powf(-s);
    }
    let n_pow = n.powf(-s);
    let integral_tail = n * n_pow / (s - 1.0);
    let mut correction = 0.5 * n_pow;
    // Rising factorial s(s+1)...(s+2k-2) / (2k)!, times N^{-s-2k+1}.
    let mut coeff = s / 2.0; // s / 2!
    let mut power = n_pow / n;
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        let term = b * coeff * power;
        correction += term;
        let kk = (k + 1) as f64;
        coeff *= (s + 2.0 * kk - 1.0) * (s + 2.0 * kk) / ((2.0 * kk + 1.0) * (2.0 * kk + 2.0));
        power /= n * n;
    }
    Ok(integral_tail + (head + correction))
}
