//! The twist operator `Δ_h = ∏_k exp(Σ_d s_d B_{d+1}(Θ_k)/(d+1)! z^d)` as a
//! truncated formal series, and its Euler-class specialization.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::bernoulli::bernoulli_polynomial;
use crate::arith::mp::{Complex, Real};
use crate::arith::poly::{Caps, Poly};
use crate::arith::rational::{factorial, qi, Q};

/// `exp(s₀·s0_coeff) · series`, where `series` is a polynomial in
/// `(z, s₁, …, s_D)` with `z` truncated at `z_order`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaSeries {
    pub s0_coeff: Q,
    pub series: Poly,
    pub z_order: u32,
}

impl DeltaSeries {
    /// Number of `s_d` with `d ≥ 1`.
    pub fn depth(&self) -> usize {
        self.series.nvars() - 1
    }

    fn caps(&self) -> Caps {
        caps(self.z_order, self.depth())
    }

    pub fn mul(&self, o: &DeltaSeries) -> DeltaSeries {
        assert_eq!((self.z_order, self.depth()), (o.z_order, o.depth()));
        DeltaSeries { s0_coeff: &self.s0_coeff + &o.s0_coeff, series: self.series.mul(&o.series, &self.caps()), z_order: self.z_order }
    }

    /// `Δ(−z)`.
    pub fn negate_z(&self) -> DeltaSeries {
        let series = self.series.terms().fold(Poly::zero(self.series.nvars()), |mut acc, (m, v)| {
            let v = if m[0] % 2 == 1 { -v.clone() } else { v.clone() };
            acc.add_term(m.clone(), v);
            acc
        });
        DeltaSeries { s0_coeff: self.s0_coeff.clone(), series, z_order: self.z_order }
    }

    pub fn is_identity(&self) -> bool {
        self.s0_coeff.is_zero() && self.series == Poly::one(self.series.nvars())
    }

    /// Value with all `s_d = 0` (`d ≥ 1`); the `s₀` factor is dropped.
    pub fn at_zero_s(&self) -> Q {
        self.series.terms().filter(|(m, _)| m[1..].iter().all(|e| *e == 0) && m[0] == 0).map(|(_, v)| v.clone()).sum()
    }
}

fn caps(z_order: u32, depth: usize) -> Caps {
    let mut c = vec![Some(z_order)];
    c.extend(std::iter::repeat_n(None, depth));
    c
}

/// `exp(p)` for `p` without constant term, truncated by `caps`.
pub fn exp_nilpotent(p: &Poly, caps: &Caps) -> Poly {
    let mut out = Poly::one(p.nvars());
    let mut power = Poly::one(p.nvars());
    let mut j = 1i64;
    loop {
        power = power.mul(p, caps).scale(&Q::new(BigInt::one(), BigInt::from(j)));
        if power.is_zero() {
            return out;
        }
        out = out.add(&power);
        j += 1;
    }
}

/// `Δ` for the phases `theta` (one per coordinate), keeping `s₁ … s_D` with
/// `D = z_order`.
pub fn twist_delta(theta: &[Q], z_order: u32) -> DeltaSeries {
    let depth = z_order as usize;
    let nv = depth + 1;
    let cp = caps(z_order, depth);
    let s0_coeff = theta.iter().map(|x| bernoulli_polynomial(1, x)).sum();
    let mut exponent = Poly::zero(nv);
    for d in 1..=depth {
        let c: Q = theta.iter().map(|x| bernoulli_polynomial(d + 1, x)).sum::<Q>() / Q::from_integer(factorial(d as u64 + 1));
        let mut m = vec![0u32; nv];
        m[0] = d as u32;
        m[d] = 1;
        exponent.add_term(m, c);
    }
    DeltaSeries { s0_coeff, series: exp_nilpotent(&exponent, &cp), z_order }
}

/// Coefficients `e_d` (`1 ≤ d ≤ order`) of `t^d` in
/// `F(x; −z) − F(x+N; −z)` after `s₀ = −ln λ`, `s_d = (d−1)!/λ^d`,
/// `t = z/λ`; the `s₀` part contributes `N ln λ` separately.
pub fn euler_exponent(x: &Q, n: u32, order: u32) -> Vec<Q> {
    let xn = x + qi(n as i64);
    (1..=order as usize)
        .map(|d| {
            let diff = bernoulli_polynomial(d + 1, x) - bernoulli_polynomial(d + 1, &xn);
            let sign = if d % 2 == 0 { qi(1) } else { qi(-1) };
            sign * diff / qi((d * (d + 1)) as i64)
        })
        .collect()
}

/// `exp(Σ e_d t^d)` as coefficients of `t^0 … t^order`.
pub fn euler_series(x: &Q, n: u32, order: u32) -> Vec<Q> {
    let e = euler_exponent(x, n, order);
    let mut p = Poly::zero(1);
    for (d, c) in e.into_iter().enumerate() {
        p.add_term(vec![d as u32 + 1], c);
    }
    let s = exp_nilpotent(&p, &vec![Some(order)]);
    (0..=order).map(|k| s.coeff(&[k])).collect()
}

/// `λ^N Σ_k c_k (z/λ)^k` at `z = 1`, from the series coefficients. As
/// `λ → 0` this tends to `x (x+1) ⋯ (x+N−1)`.
pub fn euler_modification(x: &Q, n: u32, lambda: &Real) -> Complex {
    let prec = lambda.precision();
    let coeffs = euler_series(x, n, n + 2);
    let mut acc = Real::zero(prec);
    for (k, c) in coeffs.iter().enumerate() {
        let term = Real::from_q(c, prec).mul(&lambda.powi(n as i64 - k as i64));
        acc = acc.add(&term);
    }
    Complex::from_real(acc)
}
