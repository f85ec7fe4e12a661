//! Exact rationals, truncated polynomials, Gamma-ratio collapse, Bernoulli
//! polynomials and multi-precision numerics.

pub mod bernoulli;
pub mod gamma_ratio;
pub mod mp;
pub mod poly;
pub mod rational;

pub use bernoulli::{bernoulli_numbers, bernoulli_polynomial};
pub use gamma_ratio::{pochhammer_collapse, GammaPair, GammaRatioForm};
pub use mp::{mp_gamma, mp_gamma_q, Complex, Real};
pub use poly::{Caps, Poly};
pub use rational::{fmt_q, parse_q, q, qi, Q};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ArithError {
    #[error("cannot parse rational {0:?}")]
    Parse(String),
    #[error("division by an exact zero")]
    ZeroDivision,
    #[error("Gamma pair differs by non-integer shift {0}")]
    NonIntegralShift(String),
    #[error("nilpotency map does not cover every symbol")]
    MissingNilpotency,
    #[error("Gamma pole at a non-positive integer")]
    PoleAtNonPositiveInteger,
    #[error("domain error: {0}")]
    Domain(String),
}
