//! Computations for Fermat-type Borcea–Voisin orbifolds `[E × K / ℤ₂]`:
//! Chen–Ruan, FJRW and mixed state spaces, genus-zero I-function
//! coefficients in all four GLSM phases, and numerical checks of the
//! Landau–Ginzburg/Calabi–Yau correspondence.

pub mod arith;
pub mod cli;
pub mod continuation;
pub mod fan;
pub mod iseries;
pub mod statespace;
pub mod weights;
