//! Heat kernel of the hyperbolic plane at real and complex time.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    acosh1p, cosh_difference, integrate_adaptive, GaussianDecay, IntegralResult, QuadratureConfig,
};

/// A time point `z = t + i s` in the open right half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexTime {
    t: f64,
    s: f64,
}

impl ComplexTime {
    pub fn new(t: f64, s: f64) -> Result<Self> {
        if !(t > 0.0) || !t.is_finite() || !s.is_finite() {
            return Err(Error::domain(
                "ComplexTime",
                format!("need finite t > 0 and finite s, got t={t}, s={s}"),
            ));
        }
        Ok(Self { t, s })
    }

    pub fn real(t: f64) -> Result<Self> {
        Self::new(t, 0.0)
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn is_real(&self) -> bool {
        self.s == 0.0
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.t, self.s)
    }

    pub fn conj(&self) -> Self {
        Self {
            t: self.t,
            s: -self.s,
        }
    }

    pub fn modulus(&self) -> f64 {
        self.t.hypot(self.s)
    }

    /// Gaussian decay rate of `exp(-u^2 / 4z)`: `t / (4 (t^2 + s^2))`.
    pub fn eta(&self) -> f64 {
        self.t / (4.0 * (self.t * self.t + self.s * self.s))
    }

    /// `exp(-u^2 / (4z))`.
    pub fn gaussian(&self, u: f64) -> Complex64 {
        let m2 = self.t * self.t + self.s * self.s;
        let w = u * u / (4.0 * m2);
        // u^2 / 4z = u^2 conj(z) / (4|z|^2)
        Complex64::from_polar((-w * self.t).exp(), w * self.s)
    }

    /// `exp(-a z)` for real `a`.
    pub fn exp_neg(&self, a: f64) -> Complex64 {
        Complex64::from_polar((-a * self.t).exp(), -a * self.s)
    }
}

impl std::fmt::Display for ComplexTime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.s == 0.0 {
            write!(f, "{}", self.t)
        } else {
            write!(f, "{}{:+}i", self.t, self.s)
        }
    }
}

/// `K_H(z, d)`: heat kernel of the hyperbolic plane at hyperbolic distance
/// `d`.
///
/// For `d > 0` this evaluates
/// `sqrt(2) e^{-z/4} (4 pi z)^{-3/2} ∫_d^∞ u e^{-u²/4z} / sqrt(cosh u - cosh d) du`,
/// and for `d = 0` the spectral form
/// `(1/2pi) ∫_0^∞ e^{-(1/4 + r²) z} tanh(pi r) r dr`.
pub fn hk_plane(z: ComplexTime, d: f64, cfg: &QuadratureConfig) -> Result<IntegralResult> {
    if !(d >= 0.0) || !d.is_finite() {
        return Err(Error::domain("hk_plane", format!("need d >= 0, got {d}")));
    }
    let res = if d == 0.0 {
        hk_plane_at_origin(z, cfg)
    } else {
        hk_plane_off_diagonal(z, d, cfg)
    };
    res.map_err(|e| e.with_context(format!("hk_plane(z={z}, d={d})")))
}

fn hk_plane_at_origin(z: ComplexTime, cfg: &QuadratureConfig) -> Result<IntegralResult> {
    // |e^{-r² z}| = e^{-t r²}; one power of r from the measure.
    let decay = GaussianDecay::new(z.t()).with_poly_degree(1);
    let upper = decay.truncation_radius(cfg.tail_cutoff_tol);
    let integrand = |r: f64| z.exp_neg(r * r) * ((PI * r).tanh() * r);
    let mut res = integrate_adaptive(integrand, 0.0, upper, cfg)?;
    res.error_estimate += integrand(upper).norm() / (2.0 * z.t() * upper);
    Ok(res.scale(z.exp_neg(0.25) / (2.0 * PI)))
}

fn hk_plane_off_diagonal(z: ComplexTime, d: f64, cfg: &QuadratureConfig) -> Result<IntegralResult> {
    let eta = z.eta();
    let log_inv = (1.0 / cfg.tail_cutoff_tol).ln();
    // Cut where the Gaussian has dropped by tail_cutoff_tol relative to its
    // value at the lower endpoint, with a correction for the factor u.
    let upper = (d * d + (log_inv + (2.0 + d).ln().max(0.0) * 2.0) / eta).sqrt();
    let base = 2.0 * (0.5 * d).sinh().powi(2); // cosh d - 1

    // Near the endpoint, substitute cosh u = cosh d + v²; the integrand
    // becomes 2 u e^{-u²/4z} / sinh u, smooth at v = 0.
    let near = |v: f64| {
        let u = acosh1p(base + v * v);
        let ratio = if u == 0.0 { 2.0 } else { 2.0 * u / u.sinh() };
        z.gaussian(u) * ratio
    };
    // Switch back to u one unit past the endpoint (measured in u, so the
    // substituted piece stays wide however large d is).
    let u_split = (d + 1.0).min(upper);
    let v_split = cosh_difference(u_split, d).sqrt();
    let mut res = integrate_adaptive(near, 0.0, v_split, cfg)?;

    if upper > u_split {
        let far = |u: f64| z.gaussian(u) * (u / cosh_difference(u, d).sqrt());
        let tail = integrate_adaptive(far, u_split, upper, cfg)?;
        res = res + tail;
        res.error_estimate += far(upper).norm() / (2.0 * eta * upper);
    }

    let zc = z.as_complex();
    let prefactor = std::f64::consts::SQRT_2 * z.exp_neg(0.25) / (4.0 * PI * zc).powf(1.5);
    Ok(res.scale(prefactor))
}

/// Right-hand side of the complex-time envelope
/// `|K_H(z,d)| <= e^{s²/4t} t^{-3/2} (t²+s²)^{3/4} K_H(tau, d)`, `tau = |z|²/t`.
pub fn complex_bound_reference(z: ComplexTime, d: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let (t, s) = (z.t(), z.s());
    let tau = ComplexTime::real(t + s * s / t)?;
    let k_tau = hk_plane(tau, d, cfg)?.value.re;
    if s == 0.0 {
        return Ok(k_tau);
    }
    let factor = (s * s / (4.0 * t)).exp() * t.powf(-1.5) * (t * t + s * s).powf(0.75);
    Ok(factor * k_tau)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn complex_time_rejects_nonpositive_real_part() {
        assert!(ComplexTime::new(0.0, 1.0).is_err());
        assert!(ComplexTime::new(-1.0, 0.0).is_err());
        let z = ComplexTime::new(1.0, 2.0).unwrap();
        assert!((z.eta() - 1.0 / 20.0).abs() < 1e-16);
        assert!(z.eta() <= 1.0 / (4.0 * z.t()));
    }

    #[test]
    fn gaussian_factor_matches_direct_complex_evaluation() {
        let z = ComplexTime::new(0.7, -1.3).unwrap();
        for u in [0.0, 0.5, 3.0, 9.0] {
            let direct = (-(u * u) / (4.0 * z.as_complex())).exp();
            assert!((z.gaussian(u) - direct).norm() <= 1e-14 * direct.norm().max(1e-300));
            assert!((z.gaussian(u).norm() - (-z.eta() * u * u).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn real_time_kernel_is_positive_real() {
        for d in [0.0, 0.3, 2.0] {
            let k = hk_plane(ComplexTime::real(1.0).unwrap(), d, &cfg()).unwrap();
            assert!(k.value.re > 0.0);
            assert_eq!(k.value.im, 0.0);
        }
    }

    #[test]
    fn continuity_across_the_origin_branch() {
        let z = ComplexTime::real(1.0).unwrap();
        let k0 = hk_plane(z, 0.0, &cfg()).unwrap().value.re;
        let k1 = hk_plane(z, 1e-6, &cfg()).unwrap().value.re;
        assert!(((k1 - k0) / k0).abs() < 1e-5, "{k0} vs {k1}");
    }

    #[test]
    fn decays_in_distance() {
        let z = ComplexTime::real(1.0).unwrap();
        let vals: Vec<f64> = [0.5, 1.0, 2.0, 4.0]
            .iter()
            .map(|&d| hk_plane(z, d, &cfg()).unwrap().value.re)
            .collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]), "{vals:?}");
    }

    #[test]
    fn large_time_origin_value_is_below_the_envelope() {
        for t in [5.0, 20.0, 60.0] {
            let k = hk_plane(ComplexTime::real(t).unwrap(), 0.0, &cfg()).unwrap().value.re;
            assert!(k > 0.0 && k <= (-t / 4.0).exp() / (4.0 * PI * t), "t={t}: {k}");
        }
    }

    #[test]
    fn negative_distance_is_rejected() {
        assert!(hk_plane(ComplexTime::real(1.0).unwrap(), -0.1, &cfg()).is_err());
    }

    #[test]
    fn bound_reference_reduces_to_kernel_at_real_time() {
        let z = ComplexTime::real(0.8).unwrap();
        for d in [0.0, 1.5] {
            let k = hk_plane(z, d, &cfg()).unwrap().value.re;
            assert_eq!(complex_bound_reference(z, d, &cfg()).unwrap(), k);
        }
    }

    #[test]
    fn conjugate_symmetry() {
        for t in [0.5, 1.0, 2.0] {
            for s in [0.5, 1.0, 3.0] {
                let z = ComplexTime::new(t, s).unwrap();
                for d in [0.0, 1.0] {
                    let a = hk_plane(z, d, &cfg()).unwrap().value;
                    let b = hk_plane(z.conj(), d, &cfg()).unwrap().value;
                    assert!((a - b.conj()).norm() <= 1e-13 * a.norm());
                }
            }
        }
    }
}
