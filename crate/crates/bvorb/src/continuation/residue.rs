//! Residues of the Mellin–Barnes integrand of one factor, their splitting
//! into a class-periodic factor times Gamma values, and the per-class
//! columns of the continuation matrix.
//!
//! For a factor of degree `d` with one coordinate of weight `d/2` and `n`
//! coordinates of weight one, the summand of the GW series in the factor's
//! Novikov variable is `P_c(x) Γ(d(x+s)+2c+1) / (Γ(d(x+s)/2+c+1) Γ(x+s+1)^n)`
//! with `x = D/z`. The poles on the left sit at `s = −y − x`,
//! `y = (m + 2c)/d`.

use num_traits::{One, Zero};

use super::jet::{gamma_jet, geometric_jet, Jet};
use super::ContinuationError;
use crate::arith::mp::{mp_gamma_real, pi, Complex, Real};
use crate::arith::rational::{factorial, frac, is_integer, q, qi, Q};
use crate::iseries::fjrw::factor_word;
use crate::statespace::ambient::TorusElement;
use crate::weights::{Curve, OrbifoldSpec};

/// Shape of one factor for the residue computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SideParams {
    pub curve: bool,
    pub d: i64,
    pub n_other: usize,
}

impl SideParams {
    /// Quartic curve: `X² + Y⁴ + Z⁴`.
    pub fn curve(spec: &OrbifoldSpec) -> Result<SideParams, ContinuationError> {
        if spec.curve != Curve::Quartic {
            return Err(ContinuationError::UnsupportedCurve(spec.curve.name().into()));
        }
        Ok(SideParams { curve: true, d: 4, n_other: 2 })
    }

    /// K3 surface `x² + y⁶ + z⁶ + w⁶`.
    pub fn k3(spec: &OrbifoldSpec) -> Result<SideParams, ContinuationError> {
        if spec.curve != Curve::Quartic {
            return Err(ContinuationError::UnsupportedCurve(spec.curve.name().into()));
        }
        if spec.k3_weights != [3, 1, 1, 1] {
            return Err(ContinuationError::UnsupportedHypotheses(format!("K3 weights {:?}", spec.k3_weights)));
        }
        Ok(SideParams { curve: false, d: 6, n_other: 3 })
    }

    pub fn label(&self) -> &'static str {
        if self.curve {
            "E"
        } else {
            "K"
        }
    }

    /// Highest surviving power of the divisor on the sector with `ρ₈`
    /// coefficient `c`.
    pub fn sector_order(&self, c: &Q) -> usize {
        if is_integer(c) {
            self.n_other - 1
        } else {
            self.n_other - 2
        }
    }

    pub fn y(&self, m: u32, c: &Q) -> Q {
        (qi(m as i64) + qi(2) * c) / qi(self.d)
    }

    /// `1/d`, the charge of the weight-one coordinates.
    pub fn charge(&self) -> Q {
        q(1, self.d)
    }
}

/// `1/Γ(a)`, exactly zero at the poles.
pub fn rgamma(a: &Q, p: usize) -> Result<Real, ContinuationError> {
    if is_integer(a) && *a <= Q::zero() {
        return Ok(Real::zero(p));
    }
    Ok(Real::one(p).div(&mp_gamma_real(a, p)?))
}

/// `Γ(a)/Γ(b)` for positive `a`, `b` with integral difference.
pub fn gamma_ratio_exact(a: &Q, b: &Q) -> Q {
    let mut out = Q::one();
    let mut t = b.clone();
    while t < *a {
        out *= &t;
        t += Q::one();
    }
    let mut t = a.clone();
    while t < *b {
        out /= &t;
        t += Q::one();
    }
    out
}

/// `P_c(x) = Γ(dx/2 + ⟨⟨c⟩⟩) Γ(x+1)^n / Γ(dx+1)`, the sector prefactor.
pub fn prefactor_jet(sp: &SideParams, c: &Q, order: usize, p: usize) -> Result<Jet, ContinuationError> {
    let off = Q::one() - frac(&-c);
    let mut j = gamma_jet(&off, &q(sp.d, 2), order, p)?;
    let g1 = gamma_jet(&qi(1), &qi(1), order, p)?;
    for _ in 0..sp.n_other {
        j = j.mul(&g1);
    }
    Ok(j.mul(&gamma_jet(&qi(1), &qi(sp.d), order, p)?.recip()))
}

/// `e^{−iπy}` when the number of weight-one coordinates is odd: the K3
/// factor is continued in `e^{−iπ}q̃₂`.
fn branch(sp: &SideParams, y: &Q, p: usize) -> Complex {
    if sp.n_other.is_multiple_of(2) {
        return Complex::one(p);
    }
    let a = pi(p).mul(&Real::from_q(y, p)).neg();
    Complex::new(a.cos(), a.sin())
}

fn neg_two_pi_i_over_d(sp: &SideParams, p: usize) -> Complex {
    Complex::new(Real::zero(p), pi(p).mul_i(-2).div_i(sp.d))
}

fn sin_pi(x: &Q, p: usize) -> Real {
    pi(p).mul(&Real::from_q(x, p)).sin()
}

/// The continued term: minus the residue at `s = −y − x` of
/// `2πi q̃^{s+x} F(s) / (e^{2πis} − 1)`, with `q̃^{−y}` stripped. Zero for
/// even `m` and for integral `y`.
pub fn residue_term(sp: &SideParams, m: u32, c: &Q, p: usize) -> Result<Jet, ContinuationError> {
    let order = sp.sector_order(c);
    let y = sp.y(m, c);
    if m == 0 || m.is_multiple_of(2) || is_integer(&y) {
        return Ok(Jet::zero(order, p));
    }
    // (−1)^{m−1} = 1 for odd m
    let mut k = Real::one(p).div(&Real::from_q(&Q::from_integer(factorial(m as u64 - 1)), p));
    k = k.mul(&rgamma(&(Q::one() - q(m as i64, 2)), p)?);
    let r = rgamma(&(Q::one() - &y), p)?;
    for _ in 0..sp.n_other {
        k = k.mul(&r);
    }
    let coef = neg_two_pi_i_over_d(sp, p).scale(&k).mul(&branch(sp, &y, p));
    let jet = prefactor_jet(sp, c, order, p)?.mul(&geometric_jet(&y, order, p));
    Ok(jet.scale(&coef))
}

/// The class-periodic factor of a residue; `μ = m mod 4`, `σ̃ = (m+2c) mod d`.
#[derive(Clone, Debug)]
pub struct ResidueFactor {
    pub curve: bool,
    pub mu: u32,
    pub sigma: u32,
    pub value: Jet,
}

/// `E(m, c)` such that the continued term is `E · Γ(m/2) Γ(y)^n / (m−1)!`.
pub fn residue_factor(sp: &SideParams, m: u32, c: &Q, p: usize) -> Result<ResidueFactor, ContinuationError> {
    let order = sp.sector_order(c);
    let y = sp.y(m, c);
    let s = (qi(m as i64) + qi(2) * c) % qi(sp.d);
    let sigma = crate::arith::rational::to_i64(&s).unwrap_or(0) as u32;
    let mut rf = ResidueFactor { curve: sp.curve, mu: m % 4, sigma, value: Jet::zero(order, p) };
    if m.is_multiple_of(2) || is_integer(&y) {
        return Ok(rf);
    }
    let pr = pi(p);
    let mut k = sin_pi(&q(m as i64, 2), p).div(&pr);
    let sy = sin_pi(&y, p).div(&pr);
    for _ in 0..sp.n_other {
        k = k.mul(&sy);
    }
    let coef = neg_two_pi_i_over_d(sp, p).scale(&k).mul(&branch(sp, &y, p));
    rf.value = prefactor_jet(sp, c, order, p)?.mul(&geometric_jet(&y, order, p)).scale(&coef);
    Ok(rf)
}

/// `Γ(m/2) Γ(y)^n / (m−1)!`, the part of a residue left after the
/// class-periodic factor.
pub fn residue_gamma_part(sp: &SideParams, m: u32, c: &Q, p: usize) -> Result<Real, ContinuationError> {
    let y = sp.y(m, c);
    let mut v = mp_gamma_real(&q(m as i64, 2), p)?.div(&Real::from_q(&Q::from_integer(factorial(m as u64 - 1)), p));
    let gy = mp_gamma_real(&y, p)?;
    for _ in 0..sp.n_other {
        v = v.mul(&gy);
    }
    Ok(v)
}

/// Continued terms for `m = 1 … count` on the curve side at fixed `c`.
pub fn residue_expand_e(spec: &OrbifoldSpec, c: &Q, count: u32, p: usize) -> Result<Vec<(u32, Jet)>, ContinuationError> {
    let sp = SideParams::curve(spec)?;
    (1..=count).map(|m| Ok((m, residue_term(&sp, m, c, p)?))).collect()
}

/// Data of one residue class `σ̃ ≠ 0`: which FJRW insertion class it feeds
/// and where the continuation sends it.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassInfo {
    pub sigma: u32,
    /// `σ̃/d`, the output phase of the weight-one coordinates.
    pub ybar: Q,
    /// Representative of `y` in `[1/d, 1/d + 1)`.
    pub ybar_shifted: Q,
    pub twisted: bool,
    /// Power of `z` carried by the column beyond `D^r/z^r`.
    pub z_shift: i64,
    /// Word of the factor's FJRW sector, e.g. `J1^3`.
    pub word: String,
    pub sector: TorusElement,
}

pub fn class_info(sp: &SideParams, spec: &OrbifoldSpec, sigma: u32) -> Option<ClassInfo> {
    if sigma == 0 || sigma as i64 >= sp.d {
        return None;
    }
    let ybar = q(sigma as i64, sp.d);
    let ybar_shifted = sp.charge() + frac(&(&ybar - sp.charge()));
    let twisted = sigma.is_multiple_of(2);
    let deg = qi(sp.n_other as i64) * (&ybar_shifted - sp.charge());
    let age = if twisted { q(1, 2) } else { Q::zero() };
    let shift = deg - age;
    if !is_integer(&shift) {
        return None;
    }
    let mut theta = vec![q(1, 2)];
    theta.extend(std::iter::repeat_n(ybar.clone(), sp.n_other));
    let word = factor_word(spec, &theta, sp.curve)?.label();
    let sector = if twisted { TorusElement::sigma() } else { TorusElement::identity() };
    Some(ClassInfo { sigma, ybar, ybar_shifted, twisted, z_shift: -crate::arith::rational::to_i64(&shift)?, word, sector })
}

pub fn classes(sp: &SideParams, spec: &OrbifoldSpec) -> Vec<ClassInfo> {
    (1..sp.d as u32).filter_map(|s| class_info(sp, spec, s)).collect()
}

/// Column of the continuation matrix for a class: the jet `U` with
/// `continued term / (2c)! = (−¼)^{(m−1)/2} · ω · U`, where `ω` is the
/// factor's Landau–Ginzburg coefficient.
pub fn class_column(sp: &SideParams, info: &ClassInfo, p: usize) -> Result<Jet, ContinuationError> {
    let c = q(info.sigma as i64 - 1, 2);
    let order = sp.sector_order(&c);
    let pr = pi(p);
    let mut k = pr.sqrt().div(&pr).div_i(2);
    let sy = sin_pi(&info.ybar, p).div(&pr);
    let g = mp_gamma_real(&(&info.ybar_shifted + qi(1)), p)?;
    for _ in 0..sp.n_other {
        k = k.mul(&sy).mul(&g);
    }
    let coef = neg_two_pi_i_over_d(sp, p).scale(&k).mul(&branch(sp, &info.ybar, p));
    Ok(prefactor_jet(sp, &c, order, p)?.mul(&geometric_jet(&info.ybar, order, p)).scale(&coef))
}
