//! Numerical toolkit for a tile/circuit/spectral construction: Hermitian
//! lattice assembly, marker pinning energies, phase estimation with gate
//! synthesis, computation-history Hamiltonians, Wang-style tilings and the
//! energy-balance bookkeeping that combines them into a phase diagram.

pub mod balance;
pub mod error;
pub mod history;
pub mod log2;
pub mod marker;
pub mod qpe;
pub mod report;
pub mod spectra;
pub mod tiles;
pub mod tiling_ham;

pub use error::{Error, Result};
