//! Sparse multivariate polynomials over ℚ with optional per-variable
//! nilpotency (`x_i^{cap_i + 1} = 0`).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::rational::{fmt_q_short, Q};
use super::ArithError;

/// Maximum surviving power per variable; `None` means unbounded.
pub type Caps = Vec<Option<u32>>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Q>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Q::one())
    }

    /// The linear form `c + Σ coeffs[i]·x_i`.
    pub fn linear(constant: Q, coeffs: &[Q]) -> Self {
        let n = coeffs.len();
        let mut p = Poly::constant(n, constant);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Poly::zero(nvars);
        p.add_term(e, Q::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Q {
        self.terms.get(exps).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Q) {
        assert_eq!(exps.len(), self.nvars, "exponent arity");
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exps).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> Poly {
        let mut r = Poly::zero(self.nvars);
        if c.is_zero() {
            return r;
        }
        for (e, v) in &self.terms {
            r.terms.insert(e.clone(), v * c);
        }
        r
    }

    pub fn truncate(&self, caps: &Caps) -> Poly {
        let mut r = self.clone();
        r.terms.retain(|e, _| within(e, caps));
        r
    }

    pub fn mul(&self, other: &Poly, caps: &Caps) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut r = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                if within(&e, caps) {
                    r.add_term(e, c1 * c2);
                }
            }
        }
        r
    }

    pub fn pow(&self, n: u32, caps: &Caps) -> Poly {
        let mut r = Poly::one(self.nvars);
        for _ in 0..n {
            r = r.mul(self, caps);
        }
        r
    }

    /// Multiplicative inverse of a polynomial with invertible constant term,
    /// valid when every variable is capped.
    pub fn inverse(&self, caps: &Caps) -> Result<Poly, ArithError> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(ArithError::ZeroDivision);
        }
        assert!(caps.iter().all(|c| c.is_some()), "inverse needs nilpotent variables");
        let inv0 = Q::one() / &c0;
        // 1/(c0(1+n)) = inv0·Σ(-n)^j, n nilpotent.
        let n = self.scale(&inv0).sub(&Poly::one(self.nvars));
        let bound: u32 = caps.iter().map(|c| c.unwrap()).sum();
        let neg_n = n.scale(&-Q::one());
        let mut acc = Poly::one(self.nvars);
        let mut pw = Poly::one(self.nvars);
        for _ in 0..bound {
            pw = pw.mul(&neg_n, caps);
            if pw.is_zero() {
                break;
            }
            acc = acc.add(&pw);
        }
        Ok(acc.scale(&inv0))
    }

    /// Total degree of the highest nonzero monomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn map_coeffs(&self, f: impl Fn(&Q) -> Q) -> Poly {
        let mut r = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            r.add_term(e.clone(), f(c));
        }
        r
    }
}

fn within(e: &[u32], caps: &Caps) -> bool {
    e.iter().zip(caps).all(|(x, c)| c.is_none_or(|m| *x <= m))
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e.iter().enumerate().filter(|(_, p)| **p > 0).map(|(i, p)| if *p == 1 { format!("x{i}") } else { format!("x{i}^{p}") }).collect();
                if mono.is_empty() {
                    fmt_q_short(c)
                } else {
                    format!("({})*{}", fmt_q_short(c), mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{q, qi};

    #[test]
    fn nilpotent_inverse() {
        let caps = vec![Some(2)];
        let p = Poly::linear(qi(2), &[qi(1)]);
        let inv = p.inverse(&caps).unwrap();
        assert_eq!(p.mul(&inv, &caps), Poly::one(1));
        assert_eq!(inv.coeff(&[2]), q(1, 8));
    }

    #[test]
    fn zero_constant_is_not_invertible() {
        let p = Poly::var(1, 0);
        assert!(p.inverse(&vec![Some(1)]).is_err());
    }

    #[test]
    fn truncated_product() {
        let caps = vec![Some(1), None];
        let x = Poly::var(2, 0);
        assert!(x.mul(&x, &caps).is_zero());
        let y = Poly::var(2, 1);
        assert_eq!(y.pow(5, &caps).degree(), 5);
    }
}
