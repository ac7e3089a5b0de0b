//! Heat kernels and heat traces on the infinite hyperbolic cone `C_q`.
//!
//! Everything here is a sum over the non-trivial rotations `gamma^n`,
//! `1 <= n < q`, of the cone's isotropy group. The two elliptic-trace
//! representations (the `cosh/sinh²` integral in `u` and the Fourier-side
//! integral in `r`) are computed independently, and the truncated trace
//! `I_{q,delta}` has both a one-dimensional closed form and a direct
//! double-integral oracle.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::TraceConfig;
use crate::error::{Error, Result};
use crate::geometry::{cone_displacement, ConeParams, ConePoint};
use crate::hk_plane::{hk_plane, ComplexTime};
use crate::numerics::{
    acosh1p, integrate_adaptive, integrate_adaptive_nested, integrate_gaussian_tail,
    riemann_zeta, GaussianDecay, IntegralResult, QuadratureConfig,
};

/// Rotation indices with the weight each one carries in the `n`-sum.
fn rotation_terms(q: u32, pair_symmetric: bool) -> Vec<(u32, f64)> {
    if q < 2 {
        return Vec::new();
    }
    if !pair_symmetric {
        return (1..q).map(|n| (n, 1.0)).collect();
    }
    let mut terms: Vec<(u32, f64)> = (1..=(q - 1) / 2).map(|n| (n, 2.0)).collect();
    if q.is_multiple_of(2) {
        terms.push((q / 2, 1.0));
    }
    terms
}

/// Evaluates `f(n)` for every rotation in parallel and sums the results in a
/// fixed order.
fn sum_rotations<F>(q: u32, pair_symmetric: bool, f: F) -> Result<IntegralResult>
where
    F: Fn(u32) -> Result<IntegralResult> + Sync,
{
    let terms = rotation_terms(q, pair_symmetric);
    let parts: Vec<Result<IntegralResult>> = terms
        .par_iter()
        .map(|&(n, w)| {
            f(n).map(|r| r.scale(Complex64::new(w, 0.0)))
                .map_err(|e| e.with_context(format!("rotation n={n} of q={q}")))
        })
        .collect();
    let mut total = IntegralResult::ZERO;
    for p in parts {
        total = total + p?;
    }
    Ok(total)
}

/// Hyperbolic distance between `p1` and the rotated image `gamma^n p2`,
/// computed in the disc model where the cone angle `theta` is the polar
/// angle scaled by `1/q`.
fn rotated_distance(cone: ConeParams, p1: ConePoint, p2: ConePoint, n: u32) -> f64 {
    let q = f64::from(cone.order());
    let delta = (p1.theta - p2.theta) / q - 2.0 * PI * f64::from(n) / q;
    let half_gap = 0.5 * (p1.rho - p2.rho);
    let x = 2.0 * half_gap.sinh().powi(2)
        + 2.0 * p1.rho.sinh() * p2.rho.sinh() * (0.5 * delta).sin().powi(2);
    acosh1p(x.max(0.0))
}

/// Heat kernel of the cone: the periodization `Σ_{n=0}^{q-1} K_H(z, d(p1, gamma^n p2))`.
pub fn cone_heat_kernel(
    cone: ConeParams,
    z: ComplexTime,
    p1: ConePoint,
    p2: ConePoint,
    cfg: &TraceConfig,
) -> Result<IntegralResult> {
    let diagonal = p1 == p2;
    let terms: Vec<Result<IntegralResult>> = (0..cone.order())
        .into_par_iter()
        .map(|n| {
            let d = if diagonal {
                cone_displacement(cone, i64::from(n), p1.rho)?
            } else {
                rotated_distance(cone, p1, p2, n)
            };
            hk_plane(z, d, &cfg.quad).map_err(|e| e.with_context(format!("cone kernel n={n}")))
        })
        .collect();
    terms.into_iter().sum::<Result<IntegralResult>>()
}

/// `∫_0^∞ e^{-u²/4z} cosh(u/2) / (sinh²(u/2) + sin²(n pi/q)) du`.
pub fn elliptic_summand_integral(
    cone: ConeParams,
    n: u32,
    z: ComplexTime,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    let s2 = cone.sin_rotation(i64::from(n)).powi(2);
    if s2 == 0.0 {
        return Err(Error::domain(
            "elliptic_summand_integral",
            format!("n={n} is trivial for q={}", cone.order()),
        ));
    }
    let integrand = |u: f64| {
        let sh = (0.5 * u).sinh();
        z.gaussian(u) * ((0.5 * u).cosh() / (sh * sh + s2))
    };
    integrate_gaussian_tail(integrand, GaussianDecay::new(z.eta()), cfg)
}

fn elliptic_prefactor(q: u32, z: ComplexTime) -> Complex64 {
    let zc = z.as_complex();
    z.exp_neg(0.25) / (f64::from(q) * (16.0 * PI * zc).sqrt())
}

/// Elliptic heat trace of a single cone of order `q`:
/// `e^{-z/4} / (q sqrt(16 pi z)) Σ_{n=1}^{q-1} ∫_0^∞ e^{-u²/4z} cosh(u/2) / (sinh²(u/2) + sin²(n pi/q)) du`.
pub fn elliptic_cone_trace(
    cone: ConeParams,
    z: ComplexTime,
    cfg: &TraceConfig,
) -> Result<IntegralResult> {
    let sum = sum_rotations(cone.order(), cfg.pair_symmetric, |n| {
        elliptic_summand_integral(cone, n, z, &cfg.quad)
    })?;
    Ok(sum.scale(elliptic_prefactor(cone.order(), z)))
}

/// `e^{-2 pi (n/q) r} / (1 + e^{-2 pi r})` for `ratio = n/q` in `(0, 1)`,
/// written so neither exponential overflows.
pub(crate) fn hejhal_weight(ratio: f64, r: f64) -> f64 {
    if r >= 0.0 {
        (-2.0 * PI * ratio * r).exp() / (1.0 + (-2.0 * PI * r).exp())
    } else {
        (2.0 * PI * (1.0 - ratio) * r).exp() / (1.0 + (2.0 * PI * r).exp())
    }
}

/// `∫_ℝ h(r) e^{-2 pi n r/q} / (1 + e^{-2 pi r}) dr` for an `h` bounded by
/// `e^{-rate r²}`.
pub(crate) fn hejhal_integral<H>(
    ratio: f64,
    h: H,
    rate: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult>
where
    H: Fn(f64) -> Complex64,
{
    // The weight decays like e^{-2 pi ratio r} on the right and
    // e^{-2 pi (1 - ratio)|r|} on the left. For small `rate` those
    // exponentials, not the Gaussian, set the range; a range fixed by the
    // Gaussian alone would be so wide that the first Kronrod pass never
    // samples the peak near the origin.
    let log_inv = (1.0 / cfg.tail_cutoff_tol).ln();
    let gauss = GaussianDecay::new(rate).truncation_radius(cfg.tail_cutoff_tol);
    let exp_rate = |side: f64| 2.0 * PI * side;
    let cut = |side: f64| gauss.min(log_inv / exp_rate(side) + 1.0);
    let (hi, lo) = (cut(ratio), cut(1.0 - ratio));
    let integrand = |r: f64| h(r) * hejhal_weight(ratio, r);
    let right = integrate_adaptive(integrand, 0.0, hi, cfg)?;
    let left = integrate_adaptive(integrand, -lo, 0.0, cfg)?;
    let mut res = left + right;
    // Tail beyond each cut: the envelope is log-concave, so the discarded
    // mass is at most its edge value over its logarithmic decay rate there.
    res.error_estimate += integrand(hi).norm() / (2.0 * rate * hi + exp_rate(ratio))
        + integrand(-lo).norm() / (2.0 * rate * lo + exp_rate(1.0 - ratio));
    Ok(res)
}

/// `∫_{-∞}^{∞} e^{-2 pi n r/q - t r²} / (1 + e^{-2 pi r}) dr` (real time).
pub fn hejhal_summand_integral(
    cone: ConeParams,
    n: u32,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    let ratio = f64::from(n % cone.order().max(1)) / f64::from(cone.order());
    if ratio == 0.0 {
        return Err(Error::domain(
            "hejhal_summand_integral",
            format!("n={n} is trivial for q={}", cone.order()),
        ));
    }
    hejhal_integral(ratio, |r| Complex64::new((-t * r * r).exp(), 0.0), t, cfg)
}

/// Elliptic heat trace of a single cone in its Fourier-side form,
/// `Σ_n e^{-t/4} / (2q sin(n pi/q)) ∫ e^{-2 pi n r/q - t r²} / (1 + e^{-2 pi r}) dr`.
/// Stated for real time only.
pub fn elliptic_cone_trace_hejhal(cone: ConeParams, t: f64, cfg: &TraceConfig) -> Result<IntegralResult> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::domain(
            "elliptic_cone_trace_hejhal",
            format!("need t > 0, got {t}"),
        ));
    }
    let q = cone.order();
    sum_rotations(q, cfg.pair_symmetric, |n| {
        let sin = cone.sin_rotation(i64::from(n));
        let pref = (-t / 4.0).exp() / (2.0 * f64::from(q) * sin);
        Ok(hejhal_summand_integral(cone, n, t, &cfg.quad)?.scale(Complex64::new(pref, 0.0)))
    })
}

/// Helper quantities for the truncated cone `C_q \ C_{q,delta}` and one
/// rotation index `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationGeometry {
    pub q: u32,
    pub n: u32,
    pub delta: f64,
    /// `sin(n pi / q)`
    pub sin: f64,
    /// `1 + q delta / 2 pi`, i.e. `cosh` of the truncation radius.
    pub x0: f64,
}

impl TruncationGeometry {
    pub fn new(cone: ConeParams, n: u32, delta: f64) -> Result<Self> {
        if !(delta >= 0.0) || !delta.is_finite() {
            return Err(Error::domain(
                "TruncationGeometry",
                format!("need delta >= 0, got {delta}"),
            ));
        }
        let sin = cone.sin_rotation(i64::from(n));
        if sin == 0.0 {
            return Err(Error::domain(
                "TruncationGeometry",
                format!("n={n} is trivial for q={}", cone.order()),
            ));
        }
        let q = cone.order();
        Ok(Self {
            q,
            n,
            delta,
            sin,
            x0: 1.0 + f64::from(q) * delta / (2.0 * PI),
        })
    }

    /// Truncation radius `acosh(1 + q delta / 2 pi)`.
    pub fn radius(&self) -> f64 {
        acosh1p(f64::from(self.q) * self.delta / (2.0 * PI))
    }

    /// `a(n,q,rho) = acosh(1 + 2 sin² sinh² rho)`.
    pub fn a(&self, rho: f64) -> f64 {
        acosh1p(2.0 * (self.sin * rho.sinh()).powi(2))
    }

    /// `b(n,q,x) = acosh(1 + 2 sin² (x² - 1))`, `x >= 1`.
    pub fn b(&self, x: f64) -> f64 {
        acosh1p(2.0 * self.sin * self.sin * (x - 1.0) * (x + 1.0))
    }

    /// `c(n,q,u) = sqrt(1 + (cosh u - 1) / (2 sin²))`.
    pub fn c(&self, u: f64) -> f64 {
        (1.0 + ((0.5 * u).sinh() / self.sin).powi(2)).sqrt()
    }

    /// `d(n,q,delta) = b(n,q, 1 + q delta / 2 pi)`: lower limit of the
    /// `u`-integral.
    pub fn d(&self) -> f64 {
        let x0m1 = f64::from(self.q) * self.delta / (2.0 * PI);
        acosh1p(2.0 * self.sin * self.sin * x0m1 * (x0m1 + 2.0))
    }

    /// `f(u) = acos(sqrt(2) sin x0 / sqrt(cosh u - 1 + 2 sin²))` for `u >= d`.
    pub fn f(&self, u: f64) -> f64 {
        let sh = (0.5 * u).sinh();
        let arg = self.sin * self.x0 / (sh * sh + self.sin * self.sin).sqrt();
        arg.min(1.0).acos()
    }

    /// `f'(u)`; has an inverse-square-root singularity at `u = d`.
    pub fn f_prime(&self, u: f64) -> f64 {
        let d = self.d();
        let sh = (0.5 * u).sinh();
        let s2 = self.sin * self.sin;
        let gap = crate::numerics::cosh_difference(u, d);
        self.x0 / std::f64::consts::SQRT_2 * self.sin * u.sinh()
            / (2.0 * (sh * sh + s2))
            / gap.sqrt()
    }

    /// Inverse of `f`: the `u >= d` with `f(u) = phi`, for `phi` in `[0, pi/2)`.
    pub fn u_of_f(&self, phi: f64) -> f64 {
        let (sp, cp) = phi.sin_cos();
        let x0m1 = self.x0 - 1.0;
        // sinh(u/2) = sin sqrt(x0² sec² phi - 1) = sin sqrt((x0² - 1) + sin² phi) / cos phi
        let sh = self.sin * (x0m1 * (x0m1 + 2.0) + sp * sp).sqrt() / cp;
        2.0 * sh.asinh()
    }
}

/// `∫_{d}^{∞} e^{-u²/4z} f'(u) du`, evaluated after the substitution
/// `phi = f(u)`, which maps the range onto `[0, pi/2)` and absorbs the
/// endpoint singularity of `f'`.
pub fn truncated_summand_integral(
    geom: &TruncationGeometry,
    z: ComplexTime,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    let d = geom.d();
    let eta = z.eta();
    let u_max = (d * d + (1.0 / cfg.tail_cutoff_tol).ln() / eta).sqrt();
    let phi_max = if u_max > 1400.0 {
        0.5 * PI
    } else {
        geom.f(u_max)
    };
    let integrand = |phi: f64| z.gaussian(geom.u_of_f(phi));
    let mut res = integrate_adaptive(integrand, 0.0, phi_max, cfg)?;
    res.error_estimate += (0.5 * PI - phi_max) * (-eta * u_max * u_max).exp();
    Ok(res)
}

/// `I_{q,delta}(z)`: integral of `(K_{C_q} - K_H)(z, x, x)` over the cone
/// outside the truncation `C_{q,delta}`, in the one-dimensional form
/// `e^{-z/4} / (2q sqrt(pi z)) Σ_n (1/sin(n pi/q)) ∫_{d(n,q,delta)}^∞ e^{-u²/4z} f'(u) du`.
pub fn truncated_cone_trace(
    cone: ConeParams,
    delta: f64,
    z: ComplexTime,
    cfg: &TraceConfig,
) -> Result<IntegralResult> {
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(Error::domain(
            "truncated_cone_trace",
            format!("need delta >= 0, got {delta}"),
        ));
    }
    let q = cone.order();
    let sum = sum_rotations(q, cfg.pair_symmetric, |n| {
        let geom = TruncationGeometry::new(cone, n, delta)?;
        let inner = truncated_summand_integral(&geom, z, &cfg.quad)?;
        Ok(inner.scale(Complex64::new(1.0 / geom.sin, 0.0)))
    })?;
    let zc = z.as_complex();
    let pref = z.exp_neg(0.25) / (2.0 * f64::from(q) * (PI * zc).sqrt());
    Ok(sum.scale(pref))
}

/// Direct evaluation of `I_{q,delta}(z)` as
/// `(2 pi / q) ∫_{r(delta,q)}^∞ Σ_n K_H(z, a(n,q,rho)) sinh(rho) d rho`,
/// with `K_H` itself computed by quadrature. Independent of the algebra
/// behind [`truncated_cone_trace`]; used to check it.
pub fn truncated_cone_trace_oracle(
    cone: ConeParams,
    delta: f64,
    z: ComplexTime,
    cfg: &TraceConfig,
) -> Result<IntegralResult> {
    let q = cone.order();
    if q < 2 {
        return Ok(IntegralResult::ZERO);
    }
    let first = TruncationGeometry::new(cone, 1, delta)?;
    let r0 = first.radius();
    let eta = z.eta();
    let log_inv = (1.0 / cfg.quad.tail_cutoff_tol).ln();
    // Outer cut: the smallest displacement (n = 1) must be far enough out that
    // e^{-eta a²} beats the sinh(rho) growth of the measure.
    let rho_for = |a: f64| ((0.5 * a).sinh() / first.sin).asinh();
    let mut rho_max = rho_for((log_inv / eta).sqrt());
    for _ in 0..3 {
        rho_max = rho_for(((log_inv + rho_max) / eta).sqrt());
    }
    let rho_max = rho_max.max(r0 + 1.0);

    let terms = rotation_terms(q, cfg.pair_symmetric);
    let integrand = |rho: f64| -> Result<IntegralResult> {
        let mut total = IntegralResult::ZERO;
        for &(n, w) in &terms {
            let a = cone_displacement(cone, i64::from(n), rho)?;
            total = total + hk_plane(z, a, &cfg.quad)?.scale(Complex64::new(w, 0.0));
        }
        Ok(total.scale(Complex64::new(rho.sinh(), 0.0)))
    };
    let mut res = integrate_adaptive_nested(integrand, r0, rho_max, &cfg.quad)
        .map_err(|e| e.with_context(format!("truncated_cone_trace_oracle(q={q}, delta={delta})")))?;
    res.error_estimate += integrand(rho_max)?.value.norm();
    Ok(res.scale(Complex64::new(2.0 * PI / f64::from(q), 0.0)))
}

/// Constants `eta = t / 4(t²+s²)` and `gamma = log(1 + (delta/2pi)²)` of the
/// uniform bound on `I_{q,delta}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegenerationBoundParams {
    pub eta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl DegenerationBoundParams {
    pub fn new(delta: f64, z: ComplexTime) -> Result<Self> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::domain(
                "DegenerationBoundParams",
                format!("need delta > 0, got {delta}"),
            ));
        }
        Ok(Self {
            eta: z.eta(),
            gamma: (delta / (2.0 * PI)).powi(2).ln_1p(),
            delta,
        })
    }
}

/// q-independent bound
/// `|I_{q,delta}(z)| <= e^{-t/4} / sqrt(pi |z|) (delta/2pi)^{-2 eta gamma} [zeta(1 + 2 eta gamma) + pi]`.
pub fn degeneration_bound(params: DegenerationBoundParams, z: ComplexTime) -> Result<f64> {
    if !(params.gamma > 0.0) {
        return Err(Error::domain(
            "degeneration_bound",
            "gamma = 0 puts zeta at its pole; need delta > 0",
        ));
    }
    let exponent = 2.0 * params.eta * params.gamma;
    let lead = (-z.t() / 4.0).exp() / (PI * z.modulus()).sqrt();
    let power = (params.delta / (2.0 * PI)).powf(-exponent);
    Ok(lead * power * (riemann_zeta(1.0 + exponent)? + PI))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cone(q: u32) -> ConeParams {
        ConeParams::new(q).unwrap()
    }
    fn real(t: f64) -> ComplexTime {
        ComplexTime::real(t).unwrap()
    }

    #[test]
    fn rotation_terms_cover_every_index_once() {
        for q in 2..12u32 {
            let paired: f64 = rotation_terms(q, true).iter().map(|&(_, w)| w).sum();
            assert_eq!(paired, f64::from(q - 1));
            assert_eq!(rotation_terms(q, false).len(), (q - 1) as usize);
        }
        assert!(rotation_terms(1, true).is_empty());
    }

    #[test]
    fn trivial_cone_has_zero_traces() {
        let cfg = TraceConfig::default();
        assert_eq!(elliptic_cone_trace(cone(1), real(1.0), &cfg).unwrap().value, Complex64::new(0.0, 0.0));
        assert_eq!(elliptic_cone_trace_hejhal(cone(1), 1.0, &cfg).unwrap().value.re, 0.0);
    }

    #[test]
    fn summands_pair_exactly() {
        let cfg = QuadratureConfig::default();
        for q in [5u32, 8, 13] {
            for n in 1..q {
                let a = elliptic_summand_integral(cone(q), n, real(0.7), &cfg).unwrap();
                let b = elliptic_summand_integral(cone(q), q - n, real(0.7), &cfg).unwrap();
                assert_eq!(a.value, b.value);
            }
        }
    }

    #[test]
    fn pairing_matches_plain_sum() {
        let paired = TraceConfig::default();
        let plain = TraceConfig {
            pair_symmetric: false,
            ..paired
        };
        let z = ComplexTime::new(0.8, 0.4).unwrap();
        for q in [4u32, 7] {
            let a = elliptic_cone_trace(cone(q), z, &paired).unwrap().value;
            let b = elliptic_cone_trace(cone(q), z, &plain).unwrap().value;
            assert!((a - b).norm() <= 1e-14 * a.norm());
        }
    }

    #[test]
    fn geometry_helpers_are_consistent() {
        let g = TruncationGeometry::new(cone(7), 3, 0.8).unwrap();
        assert!((g.d() - g.b(g.x0)).abs() < 1e-13 * g.d());
        assert!(g.c(0.0) >= 1.0 && g.c(2.5) >= 1.0);
        // c solves cosh u - 1 - 2 sin² (c² - 1) = 0
        let u = 2.5f64;
        let c = g.c(u);
        assert!((u.cosh() - 1.0 - 2.0 * g.sin * g.sin * (c * c - 1.0)).abs() < 1e-12);
        // a at the truncation radius is d
        assert!((g.a(g.radius()) - g.d()).abs() < 1e-12);
        assert!(g.f(g.d()).abs() < 1e-7);
        for phi in [0.0, 0.3, 1.0, 1.5] {
            let u = g.u_of_f(phi);
            assert!(u >= g.d() - 1e-12);
            assert!((g.f(u) - phi).abs() < 1e-9, "phi={phi}");
        }
    }

    #[test]
    fn f_prime_is_positive_and_integrates_to_half_pi() {
        let cfg = QuadratureConfig::default();
        for (q, n, delta) in [(5u32, 1u32, 0.3), (7, 3, 1.0)] {
            let g = TruncationGeometry::new(cone(q), n, delta).unwrap();
            let d = g.d();
            // u = d + v²
            let integrand = |v: f64| {
                let u = d + v * v;
                let fp = if v == 0.0 {
                    // limit of 2 v f'(d + v²)
                    let sh = (0.5 * d).sinh();
                    g.x0 / std::f64::consts::SQRT_2 * g.sin * d.sinh()
                        / (2.0 * (sh * sh + g.sin * g.sin))
                        * 2.0
                        / d.sinh().sqrt()
                } else {
                    assert!(g.f_prime(u) > 0.0);
                    2.0 * v * g.f_prime(u)
                };
                Complex64::new(fp, 0.0)
            };
            // f' decays like e^{-u/2}; integrate to u = d + 100 and add the
            // remaining arc pi/2 - f(u_end).
            let v_end = 10.0;
            let body = integrate_adaptive(integrand, 0.0, v_end, &cfg).unwrap().value.re;
            let rest = 0.5 * PI - g.f(d + v_end * v_end);
            assert!(((body + rest) - 0.5 * PI).abs() < 1e-9 * 0.5 * PI, "{}", body + rest);
        }
    }

    #[test]
    fn truncated_trace_at_zero_equals_elliptic_trace() {
        let cfg = TraceConfig::default();
        for z in [real(1.0), ComplexTime::new(0.5, 1.5).unwrap()] {
            for q in [2u32, 3, 9] {
                let a = truncated_cone_trace(cone(q), 0.0, z, &cfg).unwrap().value;
                let b = elliptic_cone_trace(cone(q), z, &cfg).unwrap().value;
                assert!((a - b).norm() <= 1e-9 * b.norm(), "q={q}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn bound_params_and_errors() {
        assert!(DegenerationBoundParams::new(0.0, real(1.0)).is_err());
        let p = DegenerationBoundParams::new(2.0 * PI, real(1.0)).unwrap();
        assert!((p.gamma - 2f64.ln()).abs() < 1e-15);
        assert_eq!(p.eta, 0.25);
        let b = degeneration_bound(p, real(1.0)).unwrap();
        let expected = (-0.25f64).exp() / PI.sqrt()
            * (riemann_zeta(1.0 + 0.5 * 2f64.ln()).unwrap() + PI);
        assert!((b - expected).abs() < 1e-14 * expected);
    }

    #[test]
    fn cone_kernel_examples() {
        let cfg = TraceConfig::default();
        let z = real(1.0);
        let p = ConePoint::new(0.6, 1.0).unwrap();
        let k = cone_heat_kernel(cone(5), z, p, p, &cfg).unwrap().value.re;
        let k0 = hk_plane(z, 0.0, &cfg.quad).unwrap().value.re;
        let mut rest = 0.0;
        for n in 1..5 {
            let d = cone_displacement(cone(5), n, 0.6).unwrap();
            rest += hk_plane(z, d, &cfg.quad).unwrap().value.re;
        }
        assert!(((k - k0) - rest).abs() < 1e-13 * k);
        assert!(k > k0);

        let p2 = ConePoint::new(1.1, 4.0).unwrap();
        let one = cone_heat_kernel(cone(1), z, p, p2, &cfg).unwrap().value.re;
        let d = {
            let x = 2.0 * (0.5f64 * (0.6 - 1.1)).sinh().powi(2)
                + 2.0 * 0.6f64.sinh() * 1.1f64.sinh() * (0.5f64 * (1.0 - 4.0)).sin().powi(2);
            acosh1p(x)
        };
        assert!((one - hk_plane(z, d, &cfg.quad).unwrap().value.re).abs() < 1e-15);
    }

    #[test]
    fn off_diagonal_distance_reduces_to_displacement_on_diagonal() {
        let c = cone(6);
        let p = ConePoint::new(0.9, 2.0).unwrap();
        for n in 0..6 {
            let a = rotated_distance(c, p, p, n);
            let b = cone_displacement(c, i64::from(n), 0.9).unwrap();
            assert!((a - b).abs() < 1e-12, "n={n}");
        }
    }
}
