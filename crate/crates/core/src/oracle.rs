//! Independent quadrature evaluation of the operator matrix elements.
//!
//! The differential operators are applied analytically to the basis
//! functions and the poloidal integral is done numerically; the azimuthal
//! integral is done by hand (it gives `δ_{m1 m2}` and turns `∂²_φ` into
//! `-m²`). Nothing here uses the closed forms of [`crate::operators`], so
//! agreement between the two is a real check of both.
//!
//! Lengths in this module are in units of the minor radius `r`:
//! `ρ(θ) = a + cos θ`, `z(θ) = sin θ`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::geometry::check_aspect_ratio;
use crate::operators::OperatorKind;
use crate::quadrature::GaussLegendre;

/// Composite Gauss–Legendre settings for the periodic integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Initial number of equal panels over `[0, 2π)`.
    pub panels: usize,
    /// Gauss–Legendre points per panel.
    pub order: usize,
    /// Target for the change between successive panel doublings,
    /// relative to `max(1, |value|)`.
    pub tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { panels: 64, order: 16, tol: 1e-12 }
    }
}

/// Panel doublings allowed before giving up.
const MAX_DOUBLINGS: u32 = 10;

impl QuadratureSpec {
    fn validate(&self) -> Result<()> {
        if self.panels == 0 {
            return Err(domain("quadrature needs at least one panel"));
        }
        if self.order < 2 {
            return Err(domain(format!("quadrature order must be >= 2, got {}", self.order)));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(domain(format!("quadrature tolerance must be positive, got {}", self.tol)));
        }
        Ok(())
    }

    /// Integrates `f` over `[lo, hi]`, doubling the panel count until two
    /// successive results agree.
    fn converge<T, F>(&self, f: F, lo: f64, hi: f64, size: impl Fn(T) -> f64, diff: impl Fn(T, T) -> f64) -> Result<T>
    where
        T: Copy + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
        F: Fn(f64) -> T,
    {
        let rule = GaussLegendre::new(self.order);
        let mut panels = self.panels;
        let mut prev = rule.integrate_panels(&f, lo, hi, panels);
        let mut change = f64::INFINITY;
        for _ in 0..MAX_DOUBLINGS {
            panels *= 2;
            let next = rule.integrate_panels(&f, lo, hi, panels);
            change = diff(next, prev);
            let target = self.tol * size(next).max(1.0);
            if change <= target {
                return Ok(next);
            }
            prev = next;
        }
        Err(Error::QuadratureNotConverged {
            achieved: change,
            target: self.tol * size(prev).max(1.0),
        })
    }
}

/// `f_n(θ) = e^{inθ}/√ρ` and its first two θ-derivatives, coded by hand:
///
/// ```text
/// f'  = (in + sinθ/(2ρ)) f
/// f'' = [cosθ/(2ρ) + sin²θ/(2ρ²) + (in + sinθ/(2ρ))²] f
/// ```
#[derive(Debug, Clone, Copy)]
struct BasisJet {
    f: Complex64,
    d1: Complex64,
    d2: Complex64,
}

fn basis_jet(n: i64, a: f64, theta: f64) -> BasisJet {
    let (s, c) = theta.sin_cos();
    let rho = a + c;
    let f = Complex64::from_polar(rho.sqrt().recip(), n as f64 * theta);
    let g = Complex64::new(s / (2.0 * rho), n as f64);
    let dg = c / (2.0 * rho) + s * s / (2.0 * rho * rho);
    BasisJet { f, d1: g * f, d2: (g * g + dg) * f }
}

/// Coefficient of `∂_θ` in the poloidal part of the toroidal dipole:
/// `[zρ ρ̂ − (2ρ² + z²) ẑ]·l̂`.
fn t3_velocity(a: f64, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let rho = a + c;
    -s * s * rho - (2.0 * rho * rho + s * s) * c
}

/// `T_l(θ)` written out for the torus.
pub fn t_l_polynomial(a: f64, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let rho = a + c;
    -2.0 * s * rho * (2.0 * theta).cos()
        + (5.0 * rho * rho + s * s) * (2.0 * theta).sin() / 2.0
        + rho * ((2.0 * a + c) * rho + s * s) * s
}

/// `Op f_{n2}` at `θ` for the operator `kind` in sector `m`.
fn apply(kind: OperatorKind, n2: i64, m: i64, a: f64, theta: f64) -> Complex64 {
    let (s, c) = theta.sin_cos();
    let rho = a + c;
    let j = basis_jet(n2, a, theta);
    match kind {
        OperatorKind::Hamiltonian => {
            let kinetic = -(j.d2 * rho - j.d1 * s) / rho;
            let potential = 0.25 * (c / rho - 1.0).powi(2);
            let azimuthal = (m as f64).powi(2) / (rho * rho);
            kinetic + j.f * (azimuthal - potential)
        }
        OperatorKind::ToroidalDipole => {
            let v = t3_velocity(a, theta);
            let tl = t_l_polynomial(a, theta);
            -Complex64::i() * (j.d1 * v + j.f * (tl / (2.0 * rho)))
        }
    }
}

/// `⟨F_{n1,m}| Op |F_{n2,m}⟩` by quadrature, in units of `E₀` or `T₀`.
///
/// Fails with [`Error::ImaginaryResidual`] when the imaginary part exceeds
/// `10 · tol · max(1, |Re|)`; for a Hermitian operator that points at a
/// transcription error.
pub fn quad_element(kind: OperatorKind, n1: i64, n2: i64, m: i64, a: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_aspect_ratio(a)?;
    spec.validate()?;
    let integrand = |theta: f64| {
        let rho = a + theta.cos();
        basis_jet(n1, a, theta).f.conj() * apply(kind, n2, m, a, theta) * rho
    };
    let total = spec.converge(integrand, 0.0, TAU, |z: Complex64| z.norm(), |x, y| (x - y).norm())?;
    let value = total / TAU;
    let limit = 10.0 * spec.tol * value.re.abs().max(1.0);
    if value.im.abs() > limit {
        return Err(Error::ImaginaryResidual { residual: value.im.abs(), limit });
    }
    Ok(value.re)
}

/// The two halves of the boundary-term identity at `q = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TlTqTerms {
    pub t_l: f64,
    pub t_q: f64,
}

/// Direction cosines of the surface frame on the generating circle.
#[derive(Debug, Clone, Copy)]
struct Frame {
    rho_l: f64,
    z_l: f64,
    rho_q: f64,
    z_q: f64,
}

impl Frame {
    fn at(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self { rho_l: -s, z_l: c, rho_q: c, z_q: s }
    }
}

/// Builds `T_l` and `T_q` from the general frame expressions: a part
/// quadratic in the direction cosines plus a curvature part.
///
/// The generating circle has `∂l̂/∂l = −q̂/r` and `∂h_l/∂q = 1/r`; with
/// `r = 1`, `h_l = 1` at `q = 0`.
pub fn tl_tq_terms(a: f64, theta: f64) -> Result<TlTqTerms> {
    check_aspect_ratio(a)?;
    let fr = Frame::at(theta);
    let rho = a + theta.cos();
    let z = theta.sin();
    let w_rho = z * rho;
    let w_z = -(2.0 * rho * rho + z * z);
    let quadratic = |p: f64, q: f64| 2.0 * z * rho * (p * p - q * q) - (5.0 * rho * rho + z * z) * p * q;

    let h_l = 1.0;
    let dl_hat = (-fr.rho_q, -fr.z_q);
    let t_l = h_l * quadratic(fr.rho_l, fr.z_l) + rho * h_l * (w_rho * dl_hat.0 + w_z * dl_hat.1);

    let dh_l_dq = 1.0;
    let t_q = h_l * quadratic(fr.rho_q, fr.z_q) + rho * (w_rho * fr.rho_q + w_z * fr.z_q) * dh_l_dq;
    Ok(TlTqTerms { t_l, t_q })
}

/// `|T_l + T_q|` at `(a, θ)`; zero up to rounding.
pub fn tl_tq_residual(a: f64, theta: f64) -> Result<f64> {
    let t = tl_tq_terms(a, theta)?;
    Ok((t.t_l + t.t_q).abs())
}

/// Absolute difference between the explicit torus polynomial for `T_l`
/// and the frame expression of [`tl_tq_terms`].
pub fn check_t3_consistency(a: f64, theta: f64) -> Result<f64> {
    let t = tl_tq_terms(a, theta)?;
    Ok((t_l_polynomial(a, theta) - t.t_l).abs())
}

/// `∫₀^∞ dt/√(t⁴ + 4k⁴)` by composite quadrature, with `t = 1/s` beyond
/// `t = 10k`. Should reproduce [`crate::geometry::half_width_a`].
pub fn quad_half_width(k: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(k.is_finite() && k > 0.0) {
        return Err(domain(format!("k must be positive and finite, got {k}")));
    }
    spec.validate()?;
    let k4 = 4.0 * k.powi(4);
    let split = 10.0 * k;
    let near = spec.converge(|t: f64| 1.0 / (t.powi(4) + k4).sqrt(), 0.0, split, f64::abs, |x, y| (x - y).abs())?;
    let far = spec.converge(
        |s: f64| 1.0 / (1.0 + k4 * s.powi(4)).sqrt(),
        0.0,
        1.0 / split,
        f64::abs,
        |x, y| (x - y).abs(),
    )?;
    Ok(near + far)
}

/// Largest relative discrepancy between the hand-coded derivatives of
/// `f_n` and central finite differences with step `h`.
pub fn basis_derivative_residual(n: i64, a: f64, theta: f64, h: f64) -> Result<f64> {
    check_aspect_ratio(a)?;
    let at = |t: f64| basis_jet(n, a, t);
    let j = at(theta);
    let (p, q) = (at(theta + h), at(theta - h));
    let fd1 = (p.f - q.f) / (2.0 * h);
    let fd2 = (p.f - j.f * 2.0 + q.f) / (h * h);
    let rel = |x: Complex64, y: Complex64| (x - y).norm() / y.norm().max(1.0);
    Ok(rel(fd1, j.d1).max(rel(fd2, j.d2)))
}
