//! Truncated power series in one nilpotent variable with multi-precision
//! complex coefficients.

use crate::arith::mp::{mp_gamma_real, pi, polygamma, Complex, Real};
use crate::arith::rational::{factorial, Q};
use crate::arith::ArithError;

#[derive(Clone, Debug)]
pub struct Jet {
    pub c: Vec<Complex>,
}

impl Jet {
    pub fn zero(order: usize, p: usize) -> Jet {
        Jet { c: vec![Complex::zero(p); order + 1] }
    }

    pub fn constant(v: Complex, order: usize) -> Jet {
        let p = v.precision();
        let mut j = Jet::zero(order, p);
        j.c[0] = v;
        j
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn precision(&self) -> usize {
        self.c[0].precision()
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|v| v.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Jet {
        let mut c = self.c.clone();
        c.truncate(order + 1);
        Jet { c }
    }

    pub fn add(&self, o: &Jet) -> Jet {
        Jet { c: self.c.iter().zip(&o.c).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &Jet) -> Jet {
        Jet { c: self.c.iter().zip(&o.c).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, s: &Complex) -> Jet {
        Jet { c: self.c.iter().map(|a| a.mul(s)).collect() }
    }

    pub fn scale_q(&self, s: &Q) -> Jet {
        self.scale(&Complex::from_q(s, self.precision()))
    }

    pub fn mul(&self, o: &Jet) -> Jet {
        let n = self.c.len().min(o.c.len());
        let p = self.precision();
        let mut out = vec![Complex::zero(p); n];
        for i in 0..n {
            for j in 0..n - i {
                out[i + j] = out[i + j].add(&self.c[i].mul(&o.c[j]));
            }
        }
        Jet { c: out }
    }

    /// `1/f`; the constant term must be nonzero.
    pub fn recip(&self) -> Jet {
        let n = self.c.len();
        let inv0 = self.c[0].recip();
        let mut out = vec![inv0.clone()];
        for k in 1..n {
            let mut acc = Complex::zero(self.precision());
            for j in 1..=k {
                acc = acc.add(&self.c[j].mul(&out[k - j]));
            }
            out.push(acc.mul(&inv0).neg());
        }
        Jet { c: out }
    }

    /// `exp(f)`.
    pub fn exp(&self) -> Jet {
        let n = self.c.len();
        let p = self.precision();
        // g' = f' g
        let mut g = vec![self.c[0].exp()];
        for k in 1..n {
            let mut acc = Complex::zero(p);
            for j in 1..=k {
                acc = acc.add(&self.c[j].mul(&g[k - j]).scale(&Real::from_i64(j as i64, p)));
            }
            g.push(acc.scale(&Real::one(p).div_i(k as i64)));
        }
        Jet { c: g }
    }

    /// `f(−x)`.
    pub fn reflect(&self) -> Jet {
        Jet { c: self.c.iter().enumerate().map(|(i, v)| if i % 2 == 1 { v.neg() } else { v.clone() }).collect() }
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> Real {
        let p = self.precision();
        self.c.iter().map(|v| v.abs()).fold(Real::zero(p), |a, b| if b.cmp(&a).is_gt() { b } else { a })
    }

    /// `max_i |a_i − b_i| / max(max_i |b_i|, floor)`.
    pub fn rel_dist(&self, o: &Jet) -> Real {
        let p = self.precision();
        let d = self.sub(o).max_abs();
        let m = o.max_abs().add(&Real::one(p).div(&Real::from_i64(2, p).powi(p as i64)));
        d.div(&m)
    }
}

/// `Γ(a + k x)` for rational `a > 0`, to the given order.
pub fn gamma_jet(a: &Q, k: &Q, order: usize, p: usize) -> Result<Jet, ArithError> {
    let ar = Real::from_q(a, p);
    let g0 = mp_gamma_real(a, p)?;
    let mut lg = Jet::zero(order, p);
    let kr = Real::from_q(k, p);
    for j in 1..=order {
        let psi = polygamma(j as u32 - 1, &ar)?;
        let f = Real::from_q(&Q::from_integer(factorial(j as u64)), p);
        lg.c[j] = Complex::from_real(psi.mul(&kr.powi(j as i64)).div(&f));
    }
    Ok(lg.exp().scale(&Complex::from_real(g0)))
}

/// `1/(e^{−2πi(x+y)} − 1)`; `y` must not be an integer.
pub fn geometric_jet(y: &Q, order: usize, p: usize) -> Jet {
    let two_pi = pi(p).mul_i(2);
    let mut e = Jet::zero(order, p);
    e.c[0] = Complex::new(Real::zero(p), two_pi.mul(&Real::from_q(y, p)).neg());
    if order >= 1 {
        e.c[1] = Complex::new(Real::zero(p), two_pi.neg());
    }
    let mut d = e.exp();
    d.c[0] = d.c[0].sub(&Complex::one(p));
    d.recip()
}
