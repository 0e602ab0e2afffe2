//! Blow-up atlas and the geometric side of the Picard actions.

pub mod certify;
pub mod charts;
pub mod germ;
pub mod pullback;

use alloc::string::String;

pub use certify::{assemble_certificate, c21_center, contraction_witnesses, intersection_suite, pseudo_iso_certificate, ContractionWitness, PseudoIsoCertificate};
pub use charts::{chart, from_base, to_base, BlowupChart, CHART_COUNT};
pub use germ::{center_dimension, Budget};
pub use pullback::{matrix_of, ColumnReport, ComponentReport, Hypersurface, Landing, PullbackReport};

use crate::bmap::BmapError;
use crate::lattice::{LatticeError, Model};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeomError {
    #[error(transparent)]
    Map(#[from] BmapError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("could not find a generic sample for {0}")]
    Sampling(String),
    #[error("interpolation failed: {0}")]
    Fit(String),
    #[error("no blow-up charts on {0}")]
    Model(Model),
}

#[cfg(test)]
mod tests;
