//! Torus surface parametrization and the natural chart `(k, u)` in which
//! the toroidal dipole projection acts as a plain derivative in `u`.
//!
//! Lengths are in units of the major radius `R`. The coordinate `u` is
//! stored with its `10 m_p` prefactor dropped, so this module never sees
//! the particle mass.

use std::f64::consts::TAU;
use std::sync::OnceLock;

use crate::error::{domain, Error, Result};
use crate::quadrature::{adaptive, GaussLegendre};
use crate::special::half_width_constant;

/// Rejects aspect ratios that do not describe a ring torus.
pub fn check_aspect_ratio(a: f64) -> Result<()> {
    if a.is_finite() && a > 1.0 {
        Ok(())
    } else {
        Err(domain(format!("aspect ratio a = R/r must be > 1, got {a}")))
    }
}

/// A thin-walled torus of aspect ratio `a = R/r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusGeometry {
    aspect_ratio: f64,
    major_radius: f64,
}

impl TorusGeometry {
    pub fn new(aspect_ratio: f64) -> Result<Self> {
        Self::with_major_radius(aspect_ratio, 1.0)
    }

    /// `major_radius` only matters when converting to physical units.
    pub fn with_major_radius(aspect_ratio: f64, major_radius: f64) -> Result<Self> {
        check_aspect_ratio(aspect_ratio)?;
        if !(major_radius.is_finite() && major_radius > 0.0) {
            return Err(domain(format!("major radius must be positive, got {major_radius}")));
        }
        Ok(Self { aspect_ratio, major_radius })
    }

    pub fn aspect_ratio(&self) -> f64 {
        self.aspect_ratio
    }

    pub fn major_radius(&self) -> f64 {
        self.major_radius
    }

    pub fn minor_radius(&self) -> f64 {
        self.major_radius / self.aspect_ratio
    }

    /// Cylindrical radius of the generating circle at poloidal angle
    /// `theta`, in units of `R`.
    pub fn rho(&self, theta: f64) -> f64 {
        1.0 + theta.cos() / self.aspect_ratio
    }
}

/// A point on the torus surface; `rho` and `z` in units of `R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub theta: f64,
    pub rho: f64,
    pub z: f64,
}

/// Point of the generating circle at poloidal angle `theta`.
pub fn torus_point(geom: &TorusGeometry, theta: f64) -> Result<SurfacePoint> {
    if !theta.is_finite() {
        return Err(domain(format!("poloidal angle must be finite, got {theta}")));
    }
    let theta = theta.rem_euclid(TAU);
    let a = geom.aspect_ratio();
    Ok(SurfacePoint {
        theta,
        rho: 1.0 + theta.cos() / a,
        z: theta.sin() / a,
    })
}

/// k = [ρ²(z² + ρ²)]^(1/4) = √(ρ r_sph).
pub fn k_of(rho: f64, z: f64) -> Result<f64> {
    if !(rho >= 0.0) {
        return Err(domain(format!("cylindrical radius must be non-negative, got {rho}")));
    }
    Ok((rho * rho * (z * z + rho * rho)).sqrt().sqrt())
}

/// Half-width of the `u` range at fixed `k`: `C_a / k` with
/// `C_a = Γ(1/4)Γ(1/2) / (4Γ(3/4))`.
pub fn half_width_a(k: f64) -> Result<f64> {
    check_k(k)?;
    Ok(half_width_constant() / k)
}

fn check_k(k: f64) -> Result<()> {
    if k.is_finite() && k > 0.0 {
        Ok(())
    } else {
        Err(domain(format!("k must be positive and finite, got {k}")))
    }
}

fn rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(10))
}

/// Beyond `t = TAIL_START * k` the integrand is integrated in `s = 1/t`.
const TAIL_START: f64 = 10.0;

/// u(k, z) = -∫₀^z dt / √(t⁴ + 4k⁴), in units of `10 m_p`.
///
/// `z` may be infinite, in which case the result is `-half_width_a(k)`
/// up to quadrature error.
pub fn natural_u(k: f64, z: f64, tol: f64) -> Result<f64> {
    check_k(k)?;
    if !(tol > 0.0 && tol <= 1e-3) {
        return Err(domain(format!("tolerance must lie in (0, 1e-3], got {tol}")));
    }
    if z.is_nan() {
        return Err(domain("z is NaN"));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    let k4 = 4.0 * k.powi(4);
    let zabs = z.abs();
    let split = TAIL_START * k;
    let near_end = zabs.min(split);
    let near = adaptive(rule(), |t| 1.0 / (t.powi(4) + k4).sqrt(), 0.0, near_end, tol)?;
    let mut total = near.value;
    if zabs > split {
        // t = 1/s turns the t^-2 tail into a proper integral.
        let s_lo = if zabs.is_infinite() { 0.0 } else { 1.0 / zabs };
        let far = adaptive(
            rule(),
            |s| 1.0 / (1.0 + k4 * s.powi(4)).sqrt(),
            s_lo,
            1.0 / split,
            tol,
        )?;
        total += far.value;
    }
    Ok(-z.signum() * total)
}

/// A point in the natural chart, `u` in units of `10 m_p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaturalCoords {
    pub k: f64,
    pub u: f64,
}

impl NaturalCoords {
    /// Maps cylindrical `(rho, z)` to `(k, u)`. Points on the axis
    /// (`rho = 0`) have `k = 0` where `u` is undefined.
    pub fn from_cylindrical(rho: f64, z: f64, tol: f64) -> Result<Self> {
        let k = k_of(rho, z)?;
        if k == 0.0 {
            return Err(Error::Domain("u is undefined on the symmetry axis (k = 0)".into()));
        }
        let u = natural_u(k, z, tol)?;
        Ok(Self { k, u })
    }

    pub fn half_width(&self) -> f64 {
        half_width_constant() / self.k
    }
}
