//! Bernoulli numbers (convention B₁ = −1/2) and polynomials.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::rational::Q;

pub const DEFAULT_MAX_DEGREE: usize = 32;

fn binom(n: usize, k: usize) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// `B_0 ..= B_n`.
pub fn bernoulli_numbers(n: usize) -> Vec<Q> {
    let mut b: Vec<Q> = Vec::with_capacity(n + 1);
    b.push(Q::one());
    for m in 1..=n {
        let mut s = Q::zero();
        for (k, bk) in b.iter().enumerate() {
            s += Q::from_integer(binom(m + 1, k)) * bk;
        }
        b.push(-s / Q::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// Exact `B_d(x)`.
pub fn bernoulli_polynomial(d: usize, x: &Q) -> Q {
    let b = bernoulli_numbers(d);
    let mut acc = Q::zero();
    let mut xp = Q::one();
    // Horner-free: Σ_k C(d,k) B_k x^{d-k}, accumulated from k = d downward.
    for k in (0..=d).rev() {
        acc += Q::from_integer(binom(d, k)) * &b[k] * &xp;
        xp *= x;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{q, qi};

    #[test]
    fn small_values() {
        assert_eq!(bernoulli_polynomial(0, &q(3, 7)), qi(1));
        assert_eq!(bernoulli_polynomial(1, &qi(0)), q(-1, 2));
        assert_eq!(bernoulli_numbers(12)[12], q(-691, 2730));
        assert_eq!(bernoulli_numbers(3)[3], qi(0));
    }

    // Independent oracle: B_n(x+1) - B_n(x) = n x^{n-1} fixes B_n(1/2) from
    // B_n(0) and B_n(1) via B_n(1/2) = (2^{1-n} - 1) B_n.
    #[test]
    fn half_point() {
        assert_eq!(bernoulli_polynomial(4, &q(1, 2)), q(7, 240));
        let b = bernoulli_numbers(20);
        for (n, bn) in b.iter().enumerate() {
            let factor = Q::new(BigInt::from(2), BigInt::from(2).pow(n as u32)) - qi(1);
            assert_eq!(bernoulli_polynomial(n, &q(1, 2)), factor * bn);
        }
    }

    #[test]
    fn difference_equation() {
        let x = q(2, 9);
        for n in 1..15usize {
            let lhs = bernoulli_polynomial(n, &(&x + qi(1))) - bernoulli_polynomial(n, &x);
            let mut rhs = Q::from_integer(BigInt::from(n));
            for _ in 0..n - 1 {
                rhs *= &x;
            }
            assert_eq!(lhs, rhs);
        }
    }
}
