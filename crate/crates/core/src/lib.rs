//! Quantum mechanics of a particle confined to a thin-walled torus.
//!
//! The crate assembles the Hamiltonian and toroidal dipole operators in a
//! truncated momentum basis, diagonalizes them, analyses the resulting
//! spectra and evaluates the grand-canonical thermodynamics of an ideal
//! gas on the torus. Energies are measured in `E₀ = ħ²/(2 m_p r²)` and the
//! toroidal dipole in `T₀ = ħa/(10 m_p R)`.

pub mod eigen;
pub mod error;
pub mod geometry;
pub mod matrix;
pub mod operators;
pub mod oracle;
pub mod quadrature;
pub mod special;
pub mod spectral;
pub mod thermo;

pub use error::{Error, Result};
pub use geometry::{NaturalCoords, SurfacePoint, TorusGeometry};
pub use eigen::{eigh, Spectrum};
pub use matrix::{BandMatrix, SymMatrix};
pub use spectral::{LevelReport, Sector};
pub use thermo::{Cutoffs, FermiFillReport, FermiSea, Statistics, ThermoState};
pub use operators::{assemble_block, BasisIndex, OperatorBlock, OperatorKind};
