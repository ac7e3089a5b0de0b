//! Closed-form geometry of hyperbolic cones, truncated cones and cusps.
//!
//! A cone `C_q` is the half-infinite cylinder `{(rho, theta)}` with metric
//! `d rho² + q^{-2} sinh²(rho) d theta²`. All formulas here are exact; no
//! quadrature is involved.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::acosh1p;

/// Cone of order `q`, i.e. apex angle `2 pi / q`.
///
/// Order 1 is admitted and stands for the plane itself (trivial isotropy);
/// every trace over such a cone is an empty sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConeParams {
    q: u32,
}

impl ConeParams {
    pub fn new(q: u32) -> Result<Self> {
        if q == 0 {
            return Err(Error::domain("ConeParams", "cone order must be >= 1"));
        }
        Ok(Self { q })
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn angle(&self) -> f64 {
        2.0 * PI / f64::from(self.q)
    }

    /// `sin(pi n / q)` with `n` reduced modulo `q` before the sine.
    pub fn sin_rotation(&self, n: i64) -> f64 {
        let q = i64::from(self.q);
        let n = n.rem_euclid(q);
        if n == 0 {
            return 0.0;
        }
        // sin(pi n/q) = sin(pi (q-n)/q); use the smaller argument.
        let m = n.min(q - n);
        (PI * m as f64 / q as f64).sin()
    }
}

/// A point of the cone in geodesic polar coordinates about the apex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConePoint {
    pub rho: f64,
    pub theta: f64,
}

impl ConePoint {
    pub fn new(rho: f64, theta: f64) -> Result<Self> {
        if !(rho >= 0.0) || !rho.is_finite() {
            return Err(Error::domain("ConePoint", format!("need rho >= 0, got {rho}")));
        }
        if !theta.is_finite() {
            return Err(Error::domain("ConePoint", "theta must be finite"));
        }
        Ok(Self {
            rho,
            theta: theta.rem_euclid(2.0 * PI),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncatedConeMetrics {
    /// Extent of the truncation. For cones this is the geodesic radius from
    /// the apex; for cusps it is the height `y` of the boundary horocycle in
    /// the width-one strip, which is not a geodesic distance.
    pub radius: f64,
    pub volume: f64,
    pub boundary_length: f64,
}

fn check_nonneg(op: &'static str, name: &str, x: f64) -> Result<()> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain(op, format!("need {name} >= 0, got {x}")));
    }
    Ok(())
}

fn check_pos(op: &'static str, name: &str, x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(op, format!("need {name} > 0, got {x}")));
    }
    Ok(())
}

/// Length of the meridian circle at distance `rho` from the apex.
pub fn meridian_length(cone: ConeParams, rho: f64) -> Result<f64> {
    check_nonneg("meridian_length", "rho", rho)?;
    Ok(cone.angle() * rho.sinh())
}

/// Displacement `d(x, gamma^n x)` of the rotation by `2 pi n / q` at a point
/// at distance `rho` from the apex:
/// `cosh d = 1 + 2 sin²(pi n / q) sinh² rho`.
pub fn cone_displacement(cone: ConeParams, n: i64, rho: f64) -> Result<f64> {
    check_nonneg("cone_displacement", "rho", rho)?;
    let s = cone.sin_rotation(n);
    Ok(acosh1p(2.0 * (s * rho.sinh()).powi(2)))
}

/// Radius, volume and boundary length of the truncated cone `C_{q,eps}` of
/// volume `eps`.
pub fn truncated_cone_metrics(cone: ConeParams, eps: f64) -> Result<TruncatedConeMetrics> {
    check_pos("truncated_cone_metrics", "eps", eps)?;
    let q = f64::from(cone.order());
    Ok(TruncatedConeMetrics {
        radius: acosh1p(eps * q / (2.0 * PI)),
        volume: eps,
        boundary_length: (4.0 * PI * eps / q + eps * eps).sqrt(),
    })
}

/// Distance between the boundaries of the nested truncations `C_{q,eps1}`
/// and `C_{q,eps2}`, `eps1 <= eps2`.
pub fn nested_boundary_distance(cone: ConeParams, eps1: f64, eps2: f64) -> Result<f64> {
    check_pos("nested_boundary_distance", "eps1", eps1)?;
    check_pos("nested_boundary_distance", "eps2", eps2)?;
    if eps1 > eps2 {
        return Err(Error::domain(
            "nested_boundary_distance",
            format!("need eps1 <= eps2, got {eps1} > {eps2}"),
        ));
    }
    let q = f64::from(cone.order());
    let g = |e: f64| e * q + 2.0 * PI + (e * q * (4.0 * PI + e * q)).sqrt();
    Ok((g(eps2) / g(eps1)).ln())
}

/// Metrics of the truncated cusp `C_{inf,eps}`: volume and boundary length
/// are both `eps/2`, and `radius` holds the boundary horocycle height
/// `2/eps` in the width-one strip.
pub fn cusp_truncated_metrics(eps: f64) -> Result<TruncatedConeMetrics> {
    check_pos("cusp_truncated_metrics", "eps", eps)?;
    Ok(TruncatedConeMetrics {
        radius: 2.0 / eps,
        volume: eps / 2.0,
        boundary_length: eps / 2.0,
    })
}

/// Coordinates on the half-infinite cylinder `[0,1) x (0, inf)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CuspPoint {
    pub x: f64,
    pub y: f64,
}

/// Change of variables `theta = 2 pi x`, `rho = 2 atanh(e^{-alpha y})` with
/// `alpha = 2 pi / q`.
pub fn cone_to_cusp_coords(cone: ConeParams, p: ConePoint) -> Result<CuspPoint> {
    if p.rho == 0.0 {
        return Err(Error::ApexAtInfinity);
    }
    let alpha = cone.angle();
    // e^{-alpha y} = tanh(rho/2)
    let y = -(0.5 * p.rho).tanh().ln() / alpha;
    Ok(CuspPoint {
        x: p.theta / (2.0 * PI),
        y,
    })
}

pub fn cusp_to_cone_coords(cone: ConeParams, p: CuspPoint) -> Result<ConePoint> {
    check_pos("cusp_to_cone_coords", "y", p.y)?;
    let alpha = cone.angle();
    let rho = 2.0 * (-alpha * p.y).exp().atanh();
    ConePoint::new(rho, 2.0 * PI * p.x)
}

/// Conformal factor `alpha^{-2} sinh²(alpha y)` of the cone metric in strip
/// coordinates; tends to the cusp factor `y²` as `alpha -> 0`.
pub fn strip_conformal_factor(alpha: f64, y: f64) -> f64 {
    if alpha == 0.0 {
        return y * y;
    }
    ((alpha * y).sinh() / alpha).powi(2)
}

/// Signature of a finite-area hyperbolic orbifold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceSignature {
    pub genus: u32,
    pub cusps: u32,
    pub cone_orders: Vec<u32>,
}

impl SurfaceSignature {
    pub fn new(genus: u32, cusps: u32, cone_orders: Vec<u32>) -> Result<Self> {
        let sig = Self {
            genus,
            cusps,
            cone_orders,
        };
        sig.validate()?;
        Ok(sig)
    }

    pub fn euler_characteristic(&self) -> f64 {
        let cone_part: f64 = self
            .cone_orders
            .iter()
            .map(|&q| 1.0 - 1.0 / f64::from(q))
            .sum();
        2.0 - 2.0 * f64::from(self.genus) - f64::from(self.cusps) - cone_part
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(q) = self.cone_orders.iter().find(|&&q| q < 2) {
            return Err(Error::domain(
                "SurfaceSignature",
                format!("cone orders must be >= 2, got {q}"),
            ));
        }
        if self.euler_characteristic() >= 0.0 {
            return Err(Error::domain(
                "SurfaceSignature",
                format!("signature {self:?} is not hyperbolic"),
            ));
        }
        Ok(())
    }

    /// Number of cusps plus cone points.
    pub fn kappa(&self) -> u32 {
        self.cusps + self.cone_orders.len() as u32
    }
}

/// Gauss–Bonnet area `2 pi (2g - 2 + p + Σ (1 - 1/q_i))`.
pub fn orbifold_volume(sig: &SurfaceSignature) -> Result<f64> {
    sig.validate()?;
    Ok(-2.0 * PI * sig.euler_characteristic())
}
