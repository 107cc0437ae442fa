//! Superorbit decomposition of dynamical systems on finite topological spaces,
//! with a symbolic model for transfinite ladders.

pub mod census;
pub mod cli;
pub mod decomposition;
pub mod dot;
pub mod ladder;
pub mod error;
pub mod io;
pub mod ordinal;
pub mod partition;
pub mod stability;
pub mod topology;

pub use error::{Error, Result};
pub use ordinal::OrdinalCNF;
pub use partition::Partition;
pub use topology::{FiniteSpace, FiniteSystem, PointSet, SelfMap};
