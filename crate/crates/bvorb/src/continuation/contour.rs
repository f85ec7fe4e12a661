//! Numerical Mellin–Barnes check on the scalar slice `D → 0`: the contour
//! integral of `π Q^s F(s)/sin(πs)` against the GW series (closing right)
//! and the residue series (closing left).

use num_traits::Zero;

use super::residue::{rgamma, SideParams};
use super::{ContinuationError, Side};
use crate::arith::mp::{mp_gamma, mp_gamma_real, pi, Complex, Real};
use crate::arith::rational::{factorial, frac, is_integer, q, qi, Q};
use crate::weights::OrbifoldSpec;

/// Vertical contour `Re s = re`, with a semicircular detour of radius
/// `detour_radius` wherever a pole sits on the line: integers `≥ 0` are kept
/// to the right, Gamma poles to the left.
#[derive(Clone, Debug, PartialEq)]
pub struct ContourSpec {
    pub side: Side,
    pub re: Q,
    pub detour_radius: Q,
    /// Half-height of the line; chosen from the tolerance when `None`.
    pub height: Option<f64>,
    /// Largest quadrature segment length.
    pub max_step: f64,
    /// Gauss–Legendre nodes per segment.
    pub nodes: usize,
}

impl ContourSpec {
    pub fn new(side: Side) -> ContourSpec {
        ContourSpec { side, re: Q::zero(), detour_radius: q(1, 10), height: None, max_step: 2.0, nodes: 24 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BarnesParams {
    /// Coefficient of `ρ₈`.
    pub c: Q,
    /// Overall multiplier of `F`.
    pub scale: Q,
}

impl Default for BarnesParams {
    fn default() -> Self {
        BarnesParams { c: Q::zero(), scale: qi(1) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Closure {
    /// Poles at non-negative integers: the GW series.
    Right,
    /// Gamma poles: the continued series.
    Left,
}

#[derive(Clone, Debug)]
pub struct BarnesReport {
    pub q_abs: Real,
    pub integral: Complex,
    pub right_sum: Real,
    pub left_sum: Real,
    pub right_tail: Option<Real>,
    pub left_tail: Option<Real>,
    pub converging: Closure,
    /// `|integral − sum|` for the converging closure.
    pub deviation: Real,
    /// `|integral − sum|` for the other closure (meaningless outside its
    /// region, kept for display).
    pub other_deviation: Real,
    /// Ratio-test radius of the GW series.
    pub radius: f64,
    pub height: f64,
    pub segments: usize,
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(n: usize, p: usize) -> Vec<(Real, Real)> {
    let wp = p + 32;
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let guess = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        let mut x = Real::from_f64(guess, wp);
        let mut dp = Real::one(wp);
        for _ in 0..100 {
            let (pn, d) = legendre(n, &x);
            let dx = pn.div(&d);
            x = x.sub(&dx);
            dp = d;
            if dx.is_zero() || dx.abs().log10_abs() < -(wp as f64 * std::f64::consts::LOG10_2) + 2.0 {
                let (_, d) = legendre(n, &x);
                dp = d;
                break;
            }
        }
        let one = Real::one(wp);
        let w = Real::from_i64(2, wp).div(&one.sub(&x.mul(&x)).mul(&dp.mul(&dp)));
        out.push((x.with_precision(p), w.with_precision(p)));
    }
    out
}

fn legendre(n: usize, x: &Real) -> (Real, Real) {
    let p = x.precision();
    let mut p0 = Real::one(p);
    let mut p1 = x.clone();
    for k in 2..=n {
        let k = k as i64;
        let p2 = x.mul(&p1).mul_i(2 * k - 1).sub(&p0.mul_i(k - 1)).div_i(k);
        p0 = p1;
        p1 = p2;
    }
    // P_n'(x) = n (x P_n − P_{n−1}) / (x² − 1)
    let d = x.mul(&p1).sub(&p0).mul_i(n as i64).div(&x.mul(x).sub(&Real::one(p)));
    (p1, d)
}

fn side_params(side: Side, spec: &OrbifoldSpec) -> Result<SideParams, ContinuationError> {
    match side {
        Side::E => SideParams::curve(spec),
        Side::K => SideParams::k3(spec),
        Side::Both => Err(ContinuationError::UnsupportedHypotheses("a contour integral runs in one variable".into())),
    }
}

/// `P_c(0) · Γ(ds + 2c + 1) / (Γ(ds/2 + c + 1) Γ(s+1)^n)` at complex `s`.
fn f_complex(sp: &SideParams, c: &Q, k0: &Real, s: &Complex) -> Result<Complex, ContinuationError> {
    let p = s.precision();
    let d = Real::from_i64(sp.d, p);
    let one = Complex::one(p);
    let num = mp_gamma(&s.scale(&d).add(&Complex::from_q(&(qi(2) * c + qi(1)), p)))?;
    let den1 = mp_gamma(&s.scale(&d.div_i(2)).add(&Complex::from_q(&(c + qi(1)), p)))?;
    let den2 = mp_gamma(&s.add(&one))?;
    let mut den = den1;
    for _ in 0..sp.n_other {
        den = den.mul(&den2);
    }
    Ok(num.div(&den).scale(k0))
}

fn prefactor0(sp: &SideParams, params: &BarnesParams, p: usize) -> Result<Real, ContinuationError> {
    let off = qi(1) - frac(&-params.c.clone());
    let _ = sp;
    Ok(mp_gamma_real(&off, p)?.mul(&Real::from_q(&params.scale, p)))
}

enum Piece {
    Line {
        t0: Q,
        t1: Q,
    },
    /// Fraction `[u0, u1]` of the half circle; `left` bulges towards `Re s < re`.
    Arc {
        u0: u32,
        u1: u32,
        n: u32,
        left: bool,
    },
}

fn pieces(spec: &ContourSpec, height: f64, on_line: Option<bool>) -> Vec<Piece> {
    // endpoints on a dyadic grid so that adjacent pieces meet exactly
    let grid = |x: f64| Q::new(((x * 1024.0).round() as i64).max(1).into(), 1024.into());
    let r = if on_line.is_some() { spec.detour_radius.clone() } else { Q::zero() };
    let top = grid(height);
    let mut pos = Vec::new();
    let mut t = r;
    while t < top {
        let h = spec.max_step.min((0.5 * crate::arith::mp::q_to_f64(&t)).max(1e-3));
        let t1 = (&t + grid(h)).min(top.clone());
        pos.push((t.clone(), t1.clone()));
        t = t1;
    }
    let mut out: Vec<Piece> = pos.iter().rev().map(|(a, b)| Piece::Line { t0: -b.clone(), t1: -a.clone() }).collect();
    if let Some(keep_right) = on_line {
        let n = 8;
        for k in 0..n {
            out.push(Piece::Arc { u0: k, u1: k + 1, n, left: keep_right });
        }
    }
    out.extend(pos.into_iter().map(|(a, b)| Piece::Line { t0: a, t1: b }));
    out
}

/// Detour needed where the line meets the real axis: `Some(true)` keeps the
/// point to the right, `Some(false)` to the left.
fn detour_kind(sp: &SideParams, spec: &ContourSpec, c: &Q) -> Result<Option<bool>, ContinuationError> {
    let re = &spec.re;
    let gamma_pole = {
        // −(m + 2c)/d for some m ≥ 1
        let m = -(re * qi(sp.d)) - qi(2) * c;
        is_integer(&m) && m >= qi(1)
    };
    let gw_pole = is_integer(re) && *re >= Q::zero();
    match (gw_pole, gamma_pole) {
        (true, true) => Err(ContinuationError::UnsupportedHypotheses(format!("contour at Re s = {re} cannot separate coinciding poles"))),
        (true, false) => Ok(Some(true)),
        (false, true) => Ok(Some(false)),
        (false, false) => Ok(None),
    }
}

fn integrate_piece(
    piece: &Piece,
    spec: &ContourSpec,
    nodes: &[(Real, Real)],
    f: &(dyn Fn(&Complex) -> Result<Complex, ContinuationError> + Sync),
    p: usize,
) -> Result<Complex, ContinuationError> {
    let re = Real::from_q(&spec.re, p);
    let mut acc = Complex::zero(p);
    match piece {
        Piece::Line { t0, t1 } => {
            let mid = Real::from_q(&((t0 + t1) / qi(2)), p);
            let half = Real::from_q(&((t1 - t0) / qi(2)), p);
            for (x, w) in nodes {
                let t = mid.add(&half.mul(x));
                let s = Complex::new(re.clone(), t);
                // ds = i dt
                let v = f(&s)?;
                acc = acc.add(&Complex::new(v.im.neg(), v.re).scale(&w.mul(&half)));
            }
        }
        Piece::Arc { u0, u1, n, left } => {
            // φ runs from −π/2 through −π (left) or 0 (right) to ∓3π/2, π/2
            let r = Real::from_q(&spec.detour_radius, p);
            let sweep = if *left { pi(p).neg() } else { pi(p) };
            let at = |u: u32| pi(p).div_i(2).neg().add(&sweep.mul_i(u as i64).div_i(*n as i64));
            let (a, b) = (at(*u0), at(*u1));
            let mid = a.add(&b).div_i(2);
            let half = b.sub(&a).div_i(2);
            for (x, w) in nodes {
                let phi = mid.add(&half.mul(x));
                let e = Complex::new(phi.cos(), phi.sin());
                let s = Complex::new(re.clone(), Real::zero(p)).add(&e.scale(&r));
                // ds = i r e^{iφ} dφ
                let ds = Complex::new(Real::zero(p), r.clone()).mul(&e);
                acc = acc.add(&f(&s)?.mul(&ds).scale(&w.mul(&half)));
            }
        }
    }
    Ok(acc)
}

/// Integrates along the contour and compares with both closures.
pub fn barnes_contour_check(cspec: &ContourSpec, spec: &OrbifoldSpec, params: &BarnesParams, q_abs: &Real, terms: usize, tol: &Real) -> Result<BarnesReport, ContinuationError> {
    let p = q_abs.precision();
    let sp = side_params(cspec.side, spec)?;
    if !q_abs.is_positive() {
        return Err(ContinuationError::NonConvergent("|q| must be positive".into()));
    }
    let c = &params.c;
    let k0 = prefactor0(&sp, params, p)?;
    let ln_q = q_abs.ln();
    let pr = pi(p);

    let height = match cspec.height {
        Some(h) => h,
        None => {
            let target = -tol.log10_abs().min(300.0) * std::f64::consts::LN_10 + (10f64).ln();
            let shift = (crate::arith::mp::q_to_f64(&cspec.re) * ln_q.to_f64()).max(0.0);
            let mut t: f64 = 10.0;
            for _ in 0..20 {
                t = (target.abs() + shift + 3.0 * (1.0 + t).ln() + 2.0) / std::f64::consts::PI;
            }
            t
        }
    };
    let detour = detour_kind(&sp, cspec, c)?;
    let parts = pieces(cspec, height, detour);
    let nodes = gauss_legendre(cspec.nodes, p);

    let integrand = |s: &Complex| -> Result<Complex, ContinuationError> {
        let qs = s.scale(&ln_q).exp();
        let sin = s.scale(&pr).sin();
        Ok(f_complex(&sp, c, &k0, s)?.mul(&qs).scale(&pr).div(&sin))
    };
    let threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(4).min(16);
    let chunk = parts.len().div_ceil(threads);
    let partial: Vec<Result<Complex, ContinuationError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = parts
            .chunks(chunk.max(1))
            .map(|ch| {
                let nodes = &nodes;
                let integrand = &integrand;
                scope.spawn(move || {
                    let mut acc = Complex::zero(p);
                    for piece in ch {
                        acc = acc.add(&integrate_piece(piece, cspec, nodes, integrand, p)?);
                    }
                    Ok(acc)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("quadrature worker panicked")).collect()
    });
    let mut total = Complex::zero(p);
    for r in partial {
        total = total.add(&r?);
    }
    // −(1/2πi) ∫
    let integral = total.div(&Complex::new(Real::zero(p), pr.mul_i(2))).neg();

    // closing right: Σ_{a ≥ 0} F(a) (−Q)^a
    let mut right = Real::zero(p);
    let mut last_right = Real::zero(p);
    for a in 0..terms as i64 {
        let num = mp_gamma_real(&(qi(sp.d * a) + qi(2) * c + qi(1)), p)?;
        let mut den = mp_gamma_real(&(qi(sp.d * a / 2) + c + qi(1)), p)?;
        let g = Real::from_q(&Q::from_integer(factorial(a as u64)), p);
        for _ in 0..sp.n_other {
            den = den.mul(&g);
        }
        let mut t = num.div(&den).mul(&k0).mul(&q_abs.powi(a));
        if a % 2 == 1 {
            t = t.neg();
        }
        right = right.add(&t);
        last_right = t.abs();
    }
    let radius = {
        let h = (sp.d / 2) as f64;
        h.powf(h) / (sp.d as f64).powf(sp.d as f64)
    };
    let rho_r = q_abs.to_f64() / radius;
    let right_tail = if rho_r < 1.0 { Some(last_right.mul(&Real::from_f64(2.0 * rho_r / (1.0 - rho_r), p))) } else { None };

    // closing left: −Σ_m Res_{s = −(m+2c)/d}
    let mut left = Real::zero(p);
    let mut last_left = Real::zero(p);
    for m in 1..=terms as i64 {
        let s = -(qi(m) + qi(2) * c) / qi(sp.d);
        if is_integer(&s) {
            continue;
        }
        let mut k = Real::one(p).div(&Real::from_q(&Q::from_integer(factorial(m as u64 - 1)), p)).div_i(sp.d);
        if m % 2 == 0 {
            k = k.neg();
        }
        k = k.mul(&rgamma(&(&s * q(sp.d, 2) + c + qi(1)), p)?);
        let r1 = rgamma(&(&s + qi(1)), p)?;
        for _ in 0..sp.n_other {
            k = k.mul(&r1);
        }
        if k.is_zero() {
            continue;
        }
        let sr = Real::from_q(&s, p);
        let res = pr.mul(&sr.mul(&ln_q).exp()).div(&pr.mul(&sr).sin()).mul(&k).mul(&k0);
        left = left.sub(&res);
        last_left = res.abs();
    }
    let rho_l = q_abs.to_f64().powf(-1.0 / sp.d as f64) * 0.5f64.sqrt() * (sp.d as f64).powf(-(sp.n_other as f64) / sp.d as f64);
    let left_tail = if rho_l < 1.0 { Some(last_left.mul(&Real::from_f64(4.0 * rho_l / (1.0 - rho_l), p))) } else { None };

    let converging = if rho_r < 1.0 { Closure::Right } else { Closure::Left };
    let (tail, sum, other) = match converging {
        Closure::Right => (&right_tail, &right, &left),
        Closure::Left => (&left_tail, &left, &right),
    };
    match tail {
        Some(t) if t.cmp(tol).is_lt() => {}
        Some(t) => return Err(ContinuationError::NonConvergent(format!("tail {} exceeds tolerance", t.to_sci(3)))),
        None => return Err(ContinuationError::NonConvergent("neither closure converges at this |q|".into())),
    }
    let deviation = integral.dist(&Complex::from_real(sum.clone()));
    let other_deviation = integral.dist(&Complex::from_real(other.clone()));
    Ok(BarnesReport {
        q_abs: q_abs.clone(),
        integral,
        right_sum: right,
        left_sum: left,
        right_tail,
        left_tail,
        converging,
        deviation,
        other_deviation,
        radius,
        height,
        segments: parts.len(),
    })
}

/// Radius of convergence of the GW series quoted for each side, for
/// comparison with the ratio test.
pub fn stated_radius(side: Side) -> Option<f64> {
    match side {
        Side::E => Some(4f64.powi(-3)),
        Side::K => Some(6f64.powi(-4)),
        Side::Both => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::mp::ten_pow_neg;

    #[test]
    fn legendre_weights_sum_to_two() {
        let p = 128;
        let n = gauss_legendre(12, p);
        let s = n.iter().fold(Real::zero(p), |a, (_, w)| a.add(w));
        assert!(s.sub(&Real::from_i64(2, p)).abs().cmp(&ten_pow_neg(30, p)).is_lt());
        // exact on x^10
        let m = n.iter().fold(Real::zero(p), |a, (x, w)| a.add(&w.mul(&x.powi(10))));
        assert!(m.sub(&Real::from_i64(2, p).div_i(11)).abs().cmp(&ten_pow_neg(30, p)).is_lt());
    }

    #[test]
    fn detour_placement() {
        let spec = OrbifoldSpec::quartic([3, 1, 1, 1]);
        let sp = SideParams::curve(&spec).unwrap();
        let mut cs = ContourSpec::new(Side::E);
        assert_eq!(detour_kind(&sp, &cs, &qi(0)).unwrap(), Some(true));
        cs.re = q(-1, 4);
        assert_eq!(detour_kind(&sp, &cs, &qi(0)).unwrap(), Some(false));
        cs.re = q(-1, 8);
        assert_eq!(detour_kind(&sp, &cs, &qi(0)).unwrap(), None);
    }

    fn run(side: Side, qv: f64, c: Q) -> BarnesReport {
        let spec = OrbifoldSpec::quartic([3, 1, 1, 1]);
        let p = 192;
        let params = BarnesParams { c, scale: qi(1) };
        barnes_contour_check(&ContourSpec::new(side), &spec, &params, &Real::from_f64(qv, p), 200, &ten_pow_neg(20, p)).unwrap()
    }

    #[test]
    fn small_q_matches_gw_sum() {
        let r = run(Side::E, 1e-3, Q::zero());
        assert_eq!(r.converging, Closure::Right);
        assert!(r.deviation.cmp(&ten_pow_neg(20, 192)).is_lt(), "{}", r.deviation.to_sci(3));
    }

    #[test]
    fn large_q_matches_residue_sum() {
        let r = run(Side::E, 1e3, Q::zero());
        assert_eq!(r.converging, Closure::Left);
        assert!(r.deviation.cmp(&ten_pow_neg(20, 192)).is_lt(), "{}", r.deviation.to_sci(3));
    }

    #[test]
    fn k3_side_and_twisted_slice() {
        let r = run(Side::K, 1e-4, Q::zero());
        assert!(r.deviation.cmp(&ten_pow_neg(20, 192)).is_lt(), "{}", r.deviation.to_sci(3));
        let r = run(Side::E, 1e3, q(1, 2));
        assert!(r.deviation.cmp(&ten_pow_neg(20, 192)).is_lt(), "{}", r.deviation.to_sci(3));
    }
}
