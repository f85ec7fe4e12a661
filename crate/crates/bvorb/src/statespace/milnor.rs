//! Invariant parts of restricted Milnor rings, by direct monomial
//! enumeration.

use num_traits::Zero;

use crate::arith::rational::{qi, Q};
use crate::weights::GroupElement;

use super::StateSpaceError;

/// `W` restricted to the fixed locus of a group element: the surviving
/// coordinates and their Fermat exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MilnorRestriction {
    pub vars: Vec<usize>,
    pub exponents: Vec<u32>,
}

impl MilnorRestriction {
    pub fn new(vars: Vec<usize>, exponents: Vec<u32>) -> Self {
        assert_eq!(vars.len(), exponents.len());
        MilnorRestriction { vars, exponents }
    }

    /// Restriction of a Fermat potential with exponents `all` to the fixed
    /// coordinates of `h`.
    pub fn of(h: &GroupElement, all: &[u32]) -> Self {
        let vars = h.fixed();
        let exponents = vars.iter().map(|&k| all[k]).collect();
        MilnorRestriction { vars, exponents }
    }

    /// Monomial exponent vectors of the Milnor basis (`0 ≤ e_k ≤ a_k − 2`).
    pub fn basis(&self) -> Vec<Vec<u32>> {
        let mut out = vec![vec![]];
        for &a in &self.exponents {
            let mut next = Vec::new();
            for m in &out {
                for e in 0..a.saturating_sub(1) {
                    let mut m2 = m.clone();
                    m2.push(e);
                    next.push(m2);
                }
            }
            out = next;
        }
        out
    }
}

/// Whether `x^e · dx_F` is invariant under `g`.
pub fn is_invariant(r: &MilnorRestriction, e: &[u32], g: &GroupElement) -> bool {
    let mut s = Q::zero();
    for (i, &k) in r.vars.iter().enumerate() {
        s += &g.theta[k] * qi(e[i] as i64 + 1);
    }
    s.is_integer()
}

/// Dimension of the part of the Milnor ring (times the volume form) fixed by
/// every generator.
pub fn milnor_invariant_dim(r: &MilnorRestriction, generators: &[GroupElement]) -> Result<usize, StateSpaceError> {
    invariant_monomials(r, generators).map(|v| v.len())
}

pub fn invariant_monomials(r: &MilnorRestriction, generators: &[GroupElement]) -> Result<Vec<Vec<u32>>, StateSpaceError> {
    if r.exponents.iter().any(|&a| a < 2) {
        return Err(StateSpaceError::DegenerateRestriction);
    }
    Ok(r.basis().into_iter().filter(|e| generators.iter().all(|g| is_invariant(r, e, g))).collect())
}
