//! Analytic continuation of the GW I-function in `q̃₁` and/or `q̃₂`:
//! Mellin–Barnes residues, the continuation matrices as block matrices,
//! their symplectic check, term-by-term identification with the mixed and
//! FJRW I-functions, and a numerical contour-integral cross-check.

pub mod blocks;
pub mod contour;
pub mod identify;
pub mod jet;
pub mod residue;

use crate::arith::ArithError;
use crate::fan::FanError;
use crate::iseries::IseriesError;

pub use blocks::{assemble_u, check_symplectic, Block, BlockMatrix, SymplecticReport};
pub use contour::{barnes_contour_check, BarnesParams, BarnesReport, Closure, ContourSpec};
pub use identify::{identify_continued_series, IdentifyLimits, IdentifyReport};
pub use residue::{residue_expand_e, residue_factor, residue_term, ResidueFactor, SideParams};

/// Which Novikov variable is continued: `q̃₁` (curve), `q̃₂` (K3), or both.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    E,
    K,
    Both,
}

impl Side {
    pub fn parse(s: &str) -> Option<Side> {
        match s.trim().to_ascii_lowercase().as_str() {
            "e" | "curve" => Some(Side::E),
            "k" | "k3" => Some(Side::K),
            "both" | "ek" => Some(Side::Both),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Side::E => "E",
            Side::K => "K",
            Side::Both => "both",
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ContinuationError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Iseries(#[from] IseriesError),
    #[error("continuation is not available for the {0} curve")]
    UnsupportedCurve(String),
    #[error("outside the supported setting: {0}")]
    UnsupportedHypotheses(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("series does not converge: {0}")]
    NonConvergent(String),
    #[error("identification fails at {0}")]
    MismatchAt(String),
}
