//! Genus-zero I-function terms of the four phases, the twist operator Δ, and
//! mirror-map extraction.
//!
//! GW-type coefficients are polynomials in `u_E = D_E/z` and `u_K = D_K/z`;
//! a term `z^p · Σ r u_E^e u_K^k 1_b` is stored with `z_exponent = p` and
//! coefficient entries `(1_b, e, k) ↦ r`.

pub mod delta;
pub mod fjrw;
pub mod gw;
pub mod mirror;
pub mod mixed;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::arith::rational::{fmt_q, Q};
use crate::arith::ArithError;
use crate::fan::{FanError, LatticePoint};
use crate::statespace::Theory;

pub use delta::{twist_delta, DeltaSeries};
pub use fjrw::{fjrw_inputs, fjrw_term, fjrw_terms, FjrwInput};
pub use gw::{gw_prefactors, gw_term, gw_term_direct, gw_terms, homogeneity_check};
pub use mirror::{mirror_map, MirrorMapData};
pub use mixed::{mixed_term, mixed_terms, MixedIndex};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IseriesError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error("point does not lie over a sector of the orbifold")]
    NotOverOrbifold,
    #[error("multiplicity vector has {got} entries, expected {want}")]
    NonNarrowInput { got: usize, want: usize },
    #[error("coupling violated: 2c = {two_c} but the twisted insertions number {n_sigma}")]
    ConstraintViolation { two_c: String, n_sigma: u32 },
    #[error("leading z-coefficient is not a multiple of the unit: {0}")]
    NonUnitLeading(String),
    #[error("bundle degree {0} is not an integer")]
    NonIntegralBundle(String),
    #[error("point {0} has a nonzero component on the Landau-Ginzburg factor")]
    WrongSide(String),
    #[error("theory {0} is not available for this operation")]
    WrongTheory(&'static str),
}

/// One monomial `D_E^e D_K^k` on a sector (or an FJRW sector label).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CohomKey {
    /// Printable class name, e.g. `D_E*D_K^2`, `1_sigma`, `phi[J1^3]*D_K`.
    pub label: String,
    pub sector: String,
    pub e: u32,
    pub k: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CohomElement {
    pub entries: BTreeMap<CohomKey, Q>,
}

impl CohomElement {
    pub fn add(&mut self, key: CohomKey, v: Q) {
        if v.is_zero() {
            return;
        }
        let slot = self.entries.entry(key.clone()).or_insert_with(Q::zero);
        *slot += v;
        if slot.is_zero() {
            self.entries.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scale(&self, c: &Q) -> CohomElement {
        let mut out = CohomElement::default();
        for (k, v) in &self.entries {
            out.add(k.clone(), v * c);
        }
        out
    }

    pub fn add_all(&mut self, o: &CohomElement) {
        for (k, v) in &o.entries {
            self.add(k.clone(), v.clone());
        }
    }

    pub fn get(&self, label: &str) -> Q {
        self.entries.iter().find(|(k, _)| k.label == label).map(|(_, v)| v.clone()).unwrap_or_else(Q::zero)
    }
}

impl fmt::Display for CohomElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.entries.iter().map(|(k, v)| format!("({})·{}", fmt_q(v), k.label)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TermIndex {
    /// GW lattice point `(a, b, c, k)`.
    Lattice(LatticePoint),
    /// FJRW multiplicities over the degree-two narrow inputs.
    Multiplicity(Vec<u32>),
    Mixed(MixedIndex),
}

impl fmt::Display for TermIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermIndex::Lattice(p) => write!(f, "{}", fmt_point(p)),
            TermIndex::Multiplicity(n) => write!(f, "n{:?}", n),
            TermIndex::Mixed(m) => write!(f, "n{:?};{}", m.n, fmt_point(&m.point)),
        }
    }
}

pub fn fmt_point(p: &LatticePoint) -> String {
    use crate::arith::rational::fmt_q_short as s;
    if p.k.is_empty() {
        format!("({},{},{})", s(&p.a), s(&p.b), s(&p.c))
    } else {
        let ks: Vec<String> = p.k.iter().map(|k| k.to_string()).collect();
        format!("({},{},{};{})", s(&p.a), s(&p.b), s(&p.c), ks.join(","))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ISeriesTerm {
    pub theory: Theory,
    pub index: TermIndex,
    /// Power of `z` in front of the coefficient (whose monomials are in `D/z`).
    pub z_exponent: i64,
    pub coefficient: CohomElement,
    /// Novikov / insertion-variable exponents by name.
    pub novikov: Vec<(String, Q)>,
    /// Output sector label.
    pub sector: String,
    /// Complex degree of the output sector's unit.
    pub sector_degree: Q,
    /// Set when the output FJRW sector is broad.
    pub broad: bool,
    /// Truncation degree used for ordering.
    pub degree: Q,
}

/// Sorts terms by `(degree, index)`.
pub fn sort_terms(terms: &mut [ISeriesTerm]) {
    terms.sort_by(|a, b| (&a.degree, &a.index).cmp(&(&b.degree, &b.index)));
}

/// Terms of a theory up to a truncation degree.
pub fn terms_for(theory: Theory, spec: &crate::weights::OrbifoldSpec, bound: u32) -> Result<Vec<ISeriesTerm>, IseriesError> {
    match theory {
        Theory::Gw => gw_terms(spec, bound),
        Theory::Fjrw => fjrw_terms(spec, bound),
        t => mixed_terms(t, spec, bound),
    }
}
