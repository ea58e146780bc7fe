//! Post-processing of Hamiltonian spectra: expansion coefficients,
//! toroidal dipole expectation values and their crossover, pairing of
//! quasi-degenerate levels, and parity classification of blocks.

use crate::eigen::{eigh, Spectrum};
use crate::error::{domain, Error, Result};
use crate::matrix::SymMatrix;
use crate::operators::{assemble_block, OperatorBlock, OperatorKind};

/// Default `|⟨T₃⟩|` threshold, in `T₀`, marking the crossover level.
pub const DEFAULT_CROSSOVER_THRESHOLD: f64 = 0.5;

/// Coefficients below this magnitude are left out of a [`LevelReport`].
const DOMINANT_CUTOFF: f64 = 0.05;

/// Summary of one energy eigenstate.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelReport {
    pub h: usize,
    pub m: i64,
    pub a: f64,
    /// In `E₀`.
    pub energy: f64,
    /// In `T₀`.
    pub t3_expectation: f64,
    /// `(n, C_n)` with `|C_n| > 0.05`, ordered by `n`.
    pub dominant_coefficients: Vec<(i64, f64)>,
}

/// Expansion coefficients `C_n` of level `h`, indexed by `n + N`.
pub fn coefficients(spectrum: &Spectrum, h: usize) -> Result<Vec<f64>> {
    if h >= spectrum.dim() {
        return Err(Error::IndexOutOfRange { index: h, dim: spectrum.dim() });
    }
    Ok(spectrum.vector(h).to_vec())
}

/// The Hamiltonian spectrum of one `m` sector together with the toroidal
/// dipole block in the same basis.
#[derive(Debug, Clone)]
pub struct Sector {
    a: f64,
    m: i64,
    spectrum: Spectrum,
    toroidal: OperatorBlock,
    t3: Vec<f64>,
}

impl Sector {
    pub fn new(a: f64, m: i64, truncation: usize) -> Result<Self> {
        let hamiltonian = assemble_block(OperatorKind::Hamiltonian, truncation, m, a)?;
        let toroidal = assemble_block(OperatorKind::ToroidalDipole, truncation, m, a)?;
        let spectrum = eigh(&hamiltonian)?;
        let t3 = (0..spectrum.dim()).map(|h| toroidal.expectation(spectrum.vector(h))).collect();
        Ok(Self { a, m, spectrum, toroidal, t3 })
    }

    pub fn aspect_ratio(&self) -> f64 {
        self.a
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn toroidal_block(&self) -> &OperatorBlock {
        &self.toroidal
    }

    pub fn energies(&self) -> &[f64] {
        self.spectrum.eigenvalues()
    }

    /// `⟨T₃⟩` of every level, in `T₀`.
    pub fn t3_expectations(&self) -> &[f64] {
        &self.t3
    }

    pub fn level_report(&self, h: usize) -> Result<LevelReport> {
        let c = coefficients(&self.spectrum, h)?;
        let dominant_coefficients = c
            .iter()
            .enumerate()
            .filter(|(_, v)| v.abs() > DOMINANT_CUTOFF)
            .map(|(i, v)| (self.toroidal.n_of(i), *v))
            .collect();
        Ok(LevelReport {
            h,
            m: self.m,
            a: self.a,
            energy: self.energies()[h],
            t3_expectation: self.t3[h],
            dominant_coefficients,
        })
    }

    /// Lowest level whose `|⟨T₃⟩|` exceeds `threshold`.
    pub fn crossover_level(&self, threshold: f64) -> Result<usize> {
        if !(threshold > 0.0) {
            return Err(domain(format!("crossover threshold must be positive, got {threshold}")));
        }
        self.t3
            .iter()
            .position(|t| t.abs() > threshold)
            .ok_or(Error::NoCrossover { threshold })
    }

    /// `E_{2j} - E_{2j-1}` for `j = 1..=pairs`.
    pub fn pairing_gaps(&self, pairs: usize) -> Result<Vec<f64>> {
        let dim = self.spectrum.dim();
        if pairs > (dim - 1) / 2 {
            return Err(domain(format!("at most {} pairs fit in dimension {dim}", (dim - 1) / 2)));
        }
        let e = self.energies();
        Ok((1..=pairs).map(|j| e[2 * j] - e[2 * j - 1]).collect())
    }
}

/// `⟨T₃⟩` in `T₀` on energy eigenstate `h` of sector `(a, m)` at
/// truncation `N`.
pub fn t3_expectation(a: f64, m: i64, truncation: usize, h: usize) -> Result<f64> {
    let sector = Sector::new(a, m, truncation)?;
    sector
        .t3_expectations()
        .get(h)
        .copied()
        .ok_or(Error::IndexOutOfRange { index: h, dim: sector.spectrum().dim() })
}

pub fn crossover_level(a: f64, m: i64, truncation: usize, threshold: f64) -> Result<usize> {
    Sector::new(a, m, truncation)?.crossover_level(threshold)
}

pub fn pairing_gaps(a: f64, m: i64, truncation: usize, pairs: usize) -> Result<Vec<f64>> {
    Sector::new(a, m, truncation)?.pairing_gaps(pairs)
}

/// `+1` if `P M P = M`, `-1` if `P M P = -M`, `0` otherwise, with `P` the
/// reversal `n -> -n` and equality exact. The zero matrix counts as `+1`.
pub fn parity_check(block: &OperatorBlock) -> i8 {
    matrix_parity(block.values())
}

pub fn matrix_parity(m: &SymMatrix) -> i8 {
    let r = m.reversed();
    if r == *m {
        1
    } else if r.as_slice().iter().zip(m.as_slice()).all(|(x, y)| *x == -*y) {
        -1
    } else {
        0
    }
}
