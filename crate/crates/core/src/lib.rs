//! Simulation and parameter estimation for a quantum-Hall 2D electron gas
//! ultrastrongly coupled to a sub-THz LC resonator: Landau-polariton
//! dispersions, THz transmission maps, cavity-modified Shubnikov-de Haas
//! transport, filling-factor-gated photo-response maps, and dispersion fits.

pub mod cli;
pub mod constants;
pub mod error;
pub mod fitting;
pub mod grid;
pub mod io;
pub mod landau;
mod lineshape;
pub mod params;
pub mod photoresponse;
pub mod polariton;
pub mod transport;

pub use error::{Error, Result};
pub use grid::{Grid1D, Grid2D, Quantity, ResponseMap};
pub use params::{MaterialParams, ParamFile, ResonatorParams};
pub use polariton::{Branch, BranchPoint, PolaritonModelKind};
