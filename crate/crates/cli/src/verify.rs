//! Verification suites: each check reports a measured value against a
//! limit it must not exceed.

use std::f64::consts::TAU;

use torus_core::eigen::convergence_delta;
use torus_core::geometry::{half_width_a, natural_u};
use torus_core::operators::{hamiltonian_element, toroidal_element};
use torus_core::oracle::{quad_element, quad_half_width, tl_tq_residual, QuadratureSpec};
use torus_core::{OperatorKind, Result};

/// Reference value of the half-width constant to five decimals.
pub const HALF_WIDTH_REFERENCE: f64 = 1.31103;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub check: String,
    pub value: f64,
    pub limit: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.value <= self.limit
    }
}

/// Largest `|quad - closed| / max(1, |closed|)` over `|n1|, |n2| <= nmax`,
/// `m` in `ms`, for each aspect ratio and operator.
pub fn oracle(aspect_ratios: &[f64], ms: &[i64], nmax: i64, limit: f64) -> Result<Vec<Check>> {
    let spec = QuadratureSpec::default();
    let mut out = Vec::new();
    for &a in aspect_ratios {
        for kind in [OperatorKind::Hamiltonian, OperatorKind::ToroidalDipole] {
            let mut worst = 0.0f64;
            for &m in ms {
                for n1 in -nmax..=nmax {
                    for n2 in -nmax..=nmax {
                        let closed = match kind {
                            OperatorKind::Hamiltonian => hamiltonian_element(n1, n2, m, a)?,
                            OperatorKind::ToroidalDipole => toroidal_element(n1, n2, a)?,
                        };
                        let quad = quad_element(kind, n1, n2, m, a, &spec)?;
                        worst = worst.max((quad - closed).abs() / closed.abs().max(1.0));
                    }
                }
            }
            out.push(Check {
                suite: "oracle",
                check: format!("{}_element_rel_error a={a}", kind.name()),
                value: worst,
                limit,
            });
        }
    }
    Ok(out)
}

/// Largest `|T_l + T_q| / max(1, |T_l|)` over `samples` equally spaced
/// poloidal angles.
pub fn identity(aspect_ratios: &[f64], samples: usize, limit: f64) -> Result<Vec<Check>> {
    let mut worst = 0.0f64;
    for &a in aspect_ratios {
        for i in 0..samples {
            let theta = TAU * i as f64 / samples as f64;
            worst = worst.max(tl_tq_residual(a, theta)?);
        }
    }
    Ok(vec![Check { suite: "identity", check: "tl_plus_tq_residual".into(), value: worst, limit }])
}

/// Half-width constant against its reference value, its quadrature value
/// and the far-field limit of `u`.
pub fn natcoords() -> Result<Vec<Check>> {
    let gamma = half_width_a(1.0)?;
    let quad = quad_half_width(1.0, &QuadratureSpec::default())?;
    let far = natural_u(1.0, 1e8, 1e-10)?;
    Ok(vec![
        Check {
            suite: "natcoords",
            check: "half_width_vs_reference".into(),
            value: (gamma - HALF_WIDTH_REFERENCE).abs(),
            limit: 1e-5,
        },
        Check {
            suite: "natcoords",
            check: "half_width_quadrature_vs_gamma".into(),
            value: (quad - gamma).abs(),
            limit: 1e-8,
        },
        Check {
            suite: "natcoords",
            check: "u_far_field_vs_half_width".into(),
            value: (far + gamma).abs(),
            limit: 1e-4,
        },
    ])
}

/// Largest change of the lowest `levels` Hamiltonian eigenvalues between
/// truncations `n_small` and `n_large`, per sector.
pub fn convergence(a: f64, ms: &[i64], n_small: usize, n_large: usize, levels: usize, limit: f64) -> Result<Vec<Check>> {
    ms.iter()
        .map(|&m| {
            Ok(Check {
                suite: "convergence",
                check: format!("hamiltonian_N{n_small}_vs_N{n_large} a={a} m={m}"),
                value: convergence_delta(OperatorKind::Hamiltonian, m, a, n_small, n_large, levels)?,
                limit,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_oracle_grid_passes() {
        let checks = oracle(&[2.0], &[1], 2, 1e-8).unwrap();
        assert_eq!(checks.len(), 2);
        assert!(checks.iter().all(Check::passed), "{checks:?}");
    }

    #[test]
    fn identity_and_natcoords_pass() {
        assert!(identity(&[1.5, 2.0], 64, 1e-12).unwrap().iter().all(Check::passed));
        assert!(natcoords().unwrap().iter().all(Check::passed));
    }

    #[test]
    fn limits_are_inclusive() {
        let c = Check { suite: "x", check: "y".into(), value: 1.0, limit: 1.0 };
        assert!(c.passed());
        let c = Check { value: f64::NAN, ..c };
        assert!(!c.passed());
    }
}
