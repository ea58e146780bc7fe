//! Closed-form matrix elements of the quasi-2D Hamiltonian and of the
//! poloidal part of the toroidal dipole projection in the momentum basis
//!
//! ```text
//! F_{n,m}(θ, φ) = e^{i(nθ + mφ)} / (2π √ρ(θ)),   ρ(θ) = 1 + cos θ / a,
//! ```
//!
//! which is orthonormal under the measure `ρ(θ) dθ dφ`.
//!
//! Energies are in units of `E₀ = ħ²a²/(2 m_p R²)` and the toroidal dipole
//! in units of `T₀ = ħa/(10 m_p R)`. Both operators are diagonal in `m`, so
//! a block holds one `m` sector truncated to `n ∈ [-N, N]`, row `i` being
//! `n = i - N`. The constant shifts coming from the transverse (`q`)
//! motion are left out; they only move every level by the same amount.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::geometry::check_aspect_ratio;
use crate::matrix::{BandMatrix, SymMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OperatorKind {
    Hamiltonian,
    ToroidalDipole,
}

impl OperatorKind {
    pub fn name(self) -> &'static str {
        match self {
            OperatorKind::Hamiltonian => "hamiltonian",
            OperatorKind::ToroidalDipole => "toroidal",
        }
    }
}

/// Quantum numbers of a basis function: poloidal `n`, azimuthal `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisIndex {
    pub n: i64,
    pub m: i64,
}

/// Precomputed `a`-dependent factors of the Hamiltonian elements.
#[derive(Debug, Clone, Copy)]
struct HamiltonianCoeffs {
    root: f64,  // √(a²-1)
    ratio: f64, // √(a²-1) - a, |ratio| < 1
    a: f64,
    norm: f64, // (a²-1)^{3/2}
}

impl HamiltonianCoeffs {
    fn new(a: f64) -> Self {
        let s2 = a * a - 1.0;
        let root = s2.sqrt();
        Self { root, ratio: root - a, a, norm: s2 * root }
    }

    /// Geometric factor multiplying `(m² - 1/4)`; at `δn = 0` it is
    /// `a / (a²-1)^{3/2}`.
    fn coupling(&self, dn: u64) -> f64 {
        let d = dn as f64;
        let p = i32::try_from(dn).map_or(0.0, |e| self.ratio.powi(e));
        (d * self.root + self.a) * p / self.norm
    }

    fn element(&self, n1: i64, n2: i64, m: i64) -> f64 {
        let dn = n1.abs_diff(n2);
        let m_term = (m as f64).powi(2) - 0.25;
        let diag = if dn == 0 { (n1 as f64).powi(2) - 0.25 } else { 0.0 };
        diag + self.coupling(dn) * m_term
    }
}

fn toroidal_unchecked(n1: i64, n2: i64, a: f64) -> f64 {
    let band = match n1.abs_diff(n2) {
        0 => 2.5 * a,
        1 => a * a + 1.0,
        2 => 0.75 * a,
        _ => return 0.0,
    };
    // (n1 + n2) is an integer, so the sign flips exactly under n -> -n.
    -(0.5 * (n1 + n2) as f64) * band
}

/// ⟨F_{n1,m}| H |F_{n2,m}⟩ in units of `E₀`.
pub fn hamiltonian_element(n1: i64, n2: i64, m: i64, a: f64) -> Result<f64> {
    check_aspect_ratio(a)?;
    Ok(HamiltonianCoeffs::new(a).element(n1, n2, m))
}

/// ⟨F_{n1,m}| T₃ |F_{n2,m}⟩ in units of `T₀`; independent of `m` and zero
/// for `|n1 - n2| > 2`.
pub fn toroidal_element(n1: i64, n2: i64, a: f64) -> Result<f64> {
    check_aspect_ratio(a)?;
    Ok(toroidal_unchecked(n1, n2, a))
}

/// Dispersion used by the grand-canonical sums: `n² + a m² / (a²-1)^{3/2}`
/// in units of `E₀`. The `-1/4` constants of the diagonal Hamiltonian
/// element are absorbed into the chemical potential.
pub fn epsilon(n: i64, m: i64, a: f64) -> Result<f64> {
    check_aspect_ratio(a)?;
    Ok(epsilon_unchecked(n, m, azimuthal_stiffness(a)))
}

/// `a / (a²-1)^{3/2}`, the weight of `m²` in the dispersion.
pub fn azimuthal_stiffness(a: f64) -> f64 {
    let s2 = a * a - 1.0;
    a / (s2 * s2.sqrt())
}

pub(crate) fn epsilon_unchecked(n: i64, m: i64, stiffness: f64) -> f64 {
    (n as f64).powi(2) + stiffness * (m as f64).powi(2)
}

/// `F_{n,m}(θ, φ)` with lengths in units of `R`.
pub fn basis_value(n: i64, m: i64, a: f64, theta: f64, phi: f64) -> Result<Complex64> {
    check_aspect_ratio(a)?;
    let rho = 1.0 + theta.cos() / a;
    let phase = n as f64 * theta + m as f64 * phi;
    Ok(Complex64::from_polar(1.0 / (TAU * rho.sqrt()), phase))
}

/// One `m` sector of an operator, truncated to `n ∈ [-N, N]`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorBlock {
    kind: OperatorKind,
    m: i64,
    truncation: usize,
    a: f64,
    values: SymMatrix,
}

impl OperatorBlock {
    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn aspect_ratio(&self) -> f64 {
        self.a
    }

    pub fn values(&self) -> &SymMatrix {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.dim()
    }

    /// Poloidal quantum number of row `i`.
    pub fn n_of(&self, i: usize) -> i64 {
        i as i64 - self.truncation as i64
    }

    pub fn index_of(&self, n: i64) -> Option<usize> {
        let i = n + self.truncation as i64;
        (0..self.dim() as i64).contains(&i).then_some(i as usize)
    }

    /// Half-bandwidth when the block is banded.
    pub fn bandwidth(&self) -> Option<usize> {
        match self.kind {
            OperatorKind::ToroidalDipole => Some(2),
            OperatorKind::Hamiltonian => None,
        }
    }

    /// `vᵀ M v`.
    ///
    /// Row sums and the final sum are accumulated outward from the
    /// central row `n = 0` in mirror-image pairs, so for an operator odd
    /// under `n -> -n` and a vector of definite parity the result is
    /// exactly zero.
    pub fn expectation(&self, v: &[f64]) -> f64 {
        let dim = self.dim();
        assert_eq!(v.len(), dim, "vector length must match block dimension");
        let band = self.bandwidth().unwrap_or(dim.saturating_sub(1)).min(dim.saturating_sub(1));
        let m = &self.values;
        let row_dot = |i: usize| {
            let mut acc = m[(i, i)] * v[i];
            for d in 1..=band {
                let lower = (i >= d).then(|| m[(i, i - d)] * v[i - d]);
                let upper = (i + d < dim).then(|| m[(i, i + d)] * v[i + d]);
                acc += match (lower, upper) {
                    (Some(l), Some(u)) => l + u,
                    (Some(l), None) => l,
                    (None, Some(u)) => u,
                    (None, None) => break,
                };
            }
            v[i] * acc
        };
        let c = self.truncation;
        let mut total = row_dot(c);
        for d in 1..=c {
            total += row_dot(c - d) + row_dot(c + d);
        }
        total
    }
}

/// Builds the `(2N+1) x (2N+1)` block of `kind` for azimuthal number `m`.
///
/// `N = 0` is accepted only for the Hamiltonian.
pub fn assemble_block(kind: OperatorKind, truncation: usize, m: i64, a: f64) -> Result<OperatorBlock> {
    check_aspect_ratio(a)?;
    if truncation == 0 && kind == OperatorKind::ToroidalDipole {
        return Err(domain("toroidal dipole block needs truncation N >= 1"));
    }
    let dim = truncation
        .checked_mul(2)
        .and_then(|d| d.checked_add(1))
        .ok_or_else(|| domain("truncation too large"))?;
    let mut values = SymMatrix::try_zeros(dim)?;
    let n_of = |i: usize| i as i64 - truncation as i64;
    {
        let data = values.as_mut_slice();
        match kind {
            OperatorKind::Hamiltonian => {
                let coeffs = HamiltonianCoeffs::new(a);
                for i in 0..dim {
                    for j in 0..=i {
                        let v = coeffs.element(n_of(i), n_of(j), m);
                        data[i * dim + j] = v;
                        data[j * dim + i] = v;
                    }
                }
            }
            OperatorKind::ToroidalDipole => {
                for i in 0..dim {
                    for j in i.saturating_sub(2)..=i {
                        let v = toroidal_unchecked(n_of(i), n_of(j), a);
                        data[i * dim + j] = v;
                        data[j * dim + i] = v;
                    }
                }
            }
        }
    }
    Ok(OperatorBlock { kind, m, truncation, a, values })
}

/// The toroidal dipole block in band storage, for truncations too large
/// to hold densely.
pub fn assemble_toroidal_band(truncation: usize, a: f64) -> Result<BandMatrix> {
    check_aspect_ratio(a)?;
    if truncation == 0 {
        return Err(domain("toroidal dipole block needs truncation N >= 1"));
    }
    let n_of = |i: usize| i as i64 - truncation as i64;
    Ok(BandMatrix::from_lower(2 * truncation + 1, 2, |i, j| toroidal_unchecked(n_of(i), n_of(j), a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::GaussLegendre;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn hamiltonian_examples() {
        let expected = -0.25 - 0.25 * 2.0 / 3f64.powf(1.5);
        assert_relative_eq!(hamiltonian_element(0, 0, 0, 2.0).unwrap(), expected, max_relative = 1e-15);
        assert!((expected + 0.346225).abs() < 1e-6);
        let off = hamiltonian_element(1, 0, 0, 2.0).unwrap();
        assert_relative_eq!(off, 0.25 / 3f64.powf(1.5), max_relative = 1e-14);
        assert!((off - 0.048113).abs() < 1e-6);
        for a in [1.1, 2.0, 7.5] {
            assert_eq!(
                hamiltonian_element(3, 3, 1, a).unwrap(),
                hamiltonian_element(-3, -3, 1, a).unwrap()
            );
        }
    }

    #[test]
    fn toroidal_examples() {
        assert_eq!(toroidal_element(0, 0, 2.0).unwrap(), 0.0);
        assert_eq!(toroidal_element(1, 0, 2.0).unwrap(), -2.5);
        assert_eq!(toroidal_element(1, 1, 2.0).unwrap(), -5.0);
        assert_eq!(toroidal_element(-1, -1, 2.0).unwrap(), 5.0);
        assert_eq!(toroidal_element(3, 0, 2.0).unwrap(), 0.0);
        assert_eq!(toroidal_element(2, 0, 2.0).unwrap(), -1.5);
    }

    #[test]
    fn elements_reject_degenerate_geometry() {
        assert!(hamiltonian_element(0, 0, 0, 1.0).is_err());
        assert!(toroidal_element(0, 0, 0.9).is_err());
        assert!(epsilon(0, 0, 1.0).is_err());
        assert!(assemble_block(OperatorKind::Hamiltonian, 3, 0, 1.0).is_err());
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon(0, 0, 2.0).unwrap(), 0.0);
        assert_relative_eq!(epsilon(1, 1, 2.0).unwrap(), 1.0 + 2.0 / 3f64.powf(1.5), max_relative = 1e-15);
        assert!((epsilon(1, 1, 2.0).unwrap() - 1.384900).abs() < 1e-6);
        assert_eq!(epsilon(4, 2, 3.0).unwrap(), epsilon(-4, 2, 3.0).unwrap());
    }

    #[test]
    fn small_toroidal_block_matches_elements() {
        let b = assemble_block(OperatorKind::ToroidalDipole, 1, 0, 2.0).unwrap();
        let expected = SymMatrix::from_rows(&[
            vec![5.0, 2.5, 0.0],
            vec![2.5, 0.0, -2.5],
            vec![0.0, -2.5, -5.0],
        ]);
        assert_eq!(b.values(), &expected);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(b.values()[(i, j)], toroidal_element(b.n_of(i), b.n_of(j), 2.0).unwrap());
            }
        }
    }

    #[test]
    fn toroidal_block_is_pentadiagonal() {
        let b = assemble_block(OperatorKind::ToroidalDipole, 50, 0, 2.0).unwrap();
        for i in 0..b.dim() {
            for j in 0..b.dim() {
                if i.abs_diff(j) > 2 {
                    assert_eq!(b.values()[(i, j)], 0.0);
                }
            }
        }
    }

    #[test]
    fn zero_truncation() {
        let h = assemble_block(OperatorKind::Hamiltonian, 0, 2, 2.0).unwrap();
        assert_eq!(h.dim(), 1);
        assert_eq!(h.values()[(0, 0)], hamiltonian_element(0, 0, 2, 2.0).unwrap());
        assert!(assemble_block(OperatorKind::ToroidalDipole, 0, 0, 2.0).is_err());
    }

    #[test]
    fn index_mapping() {
        let b = assemble_block(OperatorKind::Hamiltonian, 4, 0, 2.0).unwrap();
        assert_eq!(b.n_of(0), -4);
        assert_eq!(b.n_of(8), 4);
        assert_eq!(b.index_of(0), Some(4));
        assert_eq!(b.index_of(5), None);
        assert_eq!(b.index_of(-5), None);
    }

    #[test]
    fn parity_of_assembled_blocks_is_exact() {
        for a in [1.2, 2.0, 3.5] {
            for m in 0..4 {
                let h = assemble_block(OperatorKind::Hamiltonian, 20, m, a).unwrap();
                assert_eq!(h.values().reversed(), *h.values());
            }
            let t = assemble_block(OperatorKind::ToroidalDipole, 20, 0, a).unwrap();
            let r = t.values().reversed();
            for i in 0..t.dim() {
                for j in 0..t.dim() {
                    assert_eq!(r[(i, j)], -t.values()[(i, j)]);
                }
            }
        }
    }

    #[test]
    fn expectation_of_parity_even_vector_under_odd_operator_is_zero() {
        let t = assemble_block(OperatorKind::ToroidalDipole, 6, 0, 2.3).unwrap();
        let v: Vec<f64> = (0..t.dim()).map(|i| 1.0 / (1.0 + (t.n_of(i) as f64).powi(2)).sqrt()).collect();
        assert_eq!(t.expectation(&v), 0.0);
        let h = assemble_block(OperatorKind::Hamiltonian, 6, 1, 2.3).unwrap();
        let dense: f64 = v.iter().zip(h.values().mul_vec(&v)).map(|(a, b)| a * b).sum();
        assert_relative_eq!(h.expectation(&v), dense, max_relative = 1e-13);
    }

    #[test]
    fn basis_examples() {
        let f = basis_value(0, 0, 2.0, 0.0, 0.0).unwrap();
        assert_relative_eq!(f.re, 1.0 / (TAU * 1.5f64.sqrt()), max_relative = 1e-15);
        assert!((f.re - 0.129949).abs() < 1e-6);
        let g = basis_value(3, -2, 2.0, 0.4, 1.1).unwrap();
        let h = basis_value(0, 0, 2.0, 0.4, 0.0).unwrap();
        assert_relative_eq!(g.norm(), h.norm(), max_relative = 1e-15);
    }

    #[test]
    fn basis_is_normalized_under_rho_weight() {
        let rule = GaussLegendre::new(16);
        let a = 1.7;
        // the φ integral is 2π times a constant
        let theta_integral: f64 = rule.integrate_panels(
            |t| {
                let f = basis_value(2, 1, a, t, 0.0).unwrap();
                f.norm_sqr() * (1.0 + t.cos() / a)
            },
            0.0,
            TAU,
            32,
        );
        assert!((theta_integral * TAU - 1.0).abs() < 1e-10);
    }

    proptest! {
        #[test]
        fn elements_are_symmetric(n1 in -40i64..40, n2 in -40i64..40, m in -6i64..6, a in 1.01f64..12.0) {
            prop_assert_eq!(hamiltonian_element(n1, n2, m, a).unwrap(), hamiltonian_element(n2, n1, m, a).unwrap());
            prop_assert_eq!(toroidal_element(n1, n2, a).unwrap(), toroidal_element(n2, n1, a).unwrap());
        }

        #[test]
        fn hamiltonian_coupling_decays(n in -20i64..20, m in -5i64..5, a in 1.01f64..10.0) {
            let mut prev = f64::INFINITY;
            for dn in 1..30 {
                let v = hamiltonian_element(n, n + dn, m, a).unwrap().abs();
                prop_assert!(v <= prev);
                prev = v;
            }
        }

        #[test]
        fn parity_relations(n1 in -30i64..30, n2 in -30i64..30, m in -4i64..4, a in 1.01f64..8.0) {
            prop_assert_eq!(hamiltonian_element(-n1, -n2, m, a).unwrap(), hamiltonian_element(n1, n2, m, a).unwrap());
            prop_assert_eq!(toroidal_element(-n1, -n2, a).unwrap(), -toroidal_element(n1, n2, a).unwrap());
            prop_assert_eq!(toroidal_element(n1, -n1, a).unwrap(), 0.0);
        }
    }
}
