//! Ratios of Gamma functions whose arguments differ by integers, reduced to
//! finite Pochhammer products over nilpotent symbols.

use num_traits::{One, Signed, Zero};

use super::poly::{Caps, Poly};
use super::rational::{to_i64, Q};
use super::ArithError;

/// One factor `[Γ(L + offset + shift) / Γ(L + offset)]^sign`, where `L` is a
/// linear form in the symbols.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaPair {
    pub linear: Vec<Q>,
    pub offset: Q,
    pub shift: Q,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct GammaRatioForm {
    pub nsym: usize,
    pub factors: Vec<GammaPair>,
}

impl GammaRatioForm {
    pub fn new(nsym: usize) -> Self {
        GammaRatioForm { nsym, factors: Vec::new() }
    }

    /// Pushes `Γ(L + num) / Γ(L + den)`; the two arguments must differ by an
    /// integer for the form to collapse.
    pub fn push_ratio(&mut self, linear: Vec<Q>, num: Q, den: Q) {
        assert_eq!(linear.len(), self.nsym);
        let shift = &num - &den;
        self.factors.push(GammaPair { linear, offset: den, shift, sign: 1 });
    }

    pub fn push(&mut self, pair: GammaPair) {
        assert_eq!(pair.linear.len(), self.nsym);
        self.factors.push(pair);
    }
}

/// Expands the form into an exact polynomial truncated by `caps`.
pub fn pochhammer_collapse(r: &GammaRatioForm, caps: &Caps) -> Result<Poly, ArithError> {
    if caps.len() != r.nsym || caps.iter().any(|c| c.is_none()) {
        return Err(ArithError::MissingNilpotency);
    }
    let mut num = Poly::one(r.nsym);
    let mut den = Poly::one(r.nsym);
    for f in &r.factors {
        let n = to_i64(&f.shift).ok_or_else(|| ArithError::NonIntegralShift(f.shift.to_string()))?;
        // Γ(y+n)/Γ(y) = ∏_{j=0}^{n-1} (y+j) for n ≥ 0, 1/∏_{j=1}^{-n} (y-j) for n < 0.
        let (up, down): (Vec<i64>, Vec<i64>) = if n >= 0 { ((0..n).collect(), vec![]) } else { (vec![], (1..=-n).map(|j| -j).collect()) };
        let (to_num, to_den) = if f.sign > 0 { (up, down) } else { (down, up) };
        for j in to_num {
            num = num.mul(&Poly::linear(&f.offset + Q::from_integer(j.into()), &f.linear), caps);
        }
        for j in to_den {
            let c = &f.offset + Q::from_integer(j.into());
            if c.is_zero() {
                return Err(ArithError::ZeroDivision);
            }
            den = den.mul(&Poly::linear(c, &f.linear), caps);
        }
    }
    Ok(num.mul(&den.inverse(caps)?, caps))
}

/// Sum of |shift| over all pairs: the number of linear factors produced.
pub fn collapse_length(r: &GammaRatioForm) -> Q {
    r.factors.iter().fold(Q::zero(), |acc, f| acc + f.shift.abs())
}

pub fn unit_pair(nsym: usize) -> GammaPair {
    GammaPair { linear: vec![Q::zero(); nsym], offset: Q::one(), shift: Q::zero(), sign: 1 }
}
