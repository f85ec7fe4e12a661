//! Term-by-term identification of the continued GW series with the mixed
//! and FJRW I-functions.
//!
//! Each side is computed from its own formula: the continued GW term from
//! the unsplit residue, the Landau–Ginzburg coefficient from the iseries
//! module, and the matrix column from the class-periodic closed form. They
//! must satisfy `T/(2c)! = (−¼)^{(m−1)/2} ω U` with matching `z`-powers.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::jet::Jet;
use super::residue::{class_column, class_info, gamma_ratio_exact, residue_term, ClassInfo, SideParams};
use super::{ContinuationError, Side};
use crate::arith::gamma_ratio::{pochhammer_collapse, GammaRatioForm};
use crate::arith::mp::{Complex, Real};
use crate::arith::rational::{factorial, fmt_q, frac, q, qi, to_i64, Q};
use crate::fan::{build_fan, enumerate_box, enumerate_lambda_e, LatticePoint, StackyFanData};
use crate::iseries::fjrw::{factor_inputs, fjrw_inputs, fjrw_term, lg_side};
use crate::iseries::gw::{e_side_pairs, gw_form, k_side_pairs, NSYM};
use crate::iseries::mixed::{mixed_term, MixedIndex};
use crate::iseries::IseriesError;
use crate::statespace::Theory;
use crate::weights::{OrbifoldSpec, E_COORDS, K_COORDS};

#[derive(Clone, Debug, PartialEq)]
pub struct IdentifyLimits {
    /// Largest odd residue index `m` (and `n`).
    pub m_max: u32,
    pub c_max: Q,
    /// Bound on the Novikov degree of the geometric factor's point.
    pub geo_bound: u32,
}

impl Default for IdentifyLimits {
    fn default() -> Self {
        IdentifyLimits { m_max: 9, c_max: qi(2), geo_bound: 1 }
    }
}

#[derive(Clone, Debug)]
pub struct IdentifyRow {
    pub index: String,
    pub source: String,
    pub z_gw: i64,
    pub z_lg: i64,
    pub deviation: Real,
}

#[derive(Clone, Debug)]
pub struct IdentifyReport {
    pub side: Side,
    pub rows: Vec<IdentifyRow>,
    /// Indices whose FJRW output is broad; the continued term must vanish.
    pub vanishing: usize,
    pub max_deviation: Real,
}

fn minus_quarter_pow(n: u32) -> Q {
    let v = Q::from_integer(4.into()).pow(-(n as i32));
    if n % 2 == 1 {
        -v
    } else {
        v
    }
}

fn factorial_q(n: u32) -> Q {
    Q::from_integer(factorial(n as u64))
}

/// `Γ(y)^n / Γ(ȳ' + 1)^n` for one factor.
fn gamma_part(sp: &SideParams, y: &Q) -> Q {
    let ys = sp.charge() + frac(&(y - sp.charge()));
    let r = gamma_ratio_exact(y, &(ys + qi(1)));
    (0..sp.n_other).fold(qi(1), |a, _| a * &r)
}

fn mismatch(index: &str, what: impl std::fmt::Display) -> ContinuationError {
    ContinuationError::MismatchAt(format!("{index}: {what}"))
}

fn sigma_of(sp: &SideParams, m: u32, c: &Q) -> u32 {
    let s = (qi(m as i64) + qi(2) * c) % qi(sp.d);
    to_i64(&s).unwrap_or(0) as u32
}

/// `z`-exponent of the GW term at `point` with the continued coordinate set
/// to two representatives; both must agree.
fn gw_z(fan: &StackyFanData, point: &LatticePoint, curve: bool, index: &str) -> Result<i64, ContinuationError> {
    let mut zs = Vec::new();
    for r in [2i64, 3] {
        let mut pt = point.clone();
        if curve {
            pt.a = qi(r);
        } else {
            pt.b = qi(r);
        }
        zs.push(gw_form(fan, &pt)?.z_exponent());
    }
    if zs[0] != zs[1] {
        return Err(mismatch(index, "GW z-exponent depends on the continued degree"));
    }
    Ok(zs[0])
}

/// Points of the geometric factor carrying `ρ₈`-coefficient `c`.
fn geometric_points(fan: &StackyFanData, c: &Q, curve_lg: bool, bound: u32) -> Vec<LatticePoint> {
    let mut out = Vec::new();
    for b in enumerate_box(&fan.spec) {
        for p in enumerate_lambda_e(fan, &b, &(c + qi(bound as i64))) {
            if p.c != *c {
                continue;
            }
            let ksum: u32 = p.k.iter().sum();
            let keep = if curve_lg { p.a.is_zero() && p.b.clone() + qi(ksum as i64) <= qi(bound as i64) } else { p.b.is_zero() && ksum == 0 && p.a <= qi(bound as i64) };
            if keep && !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out
}

fn check_one_side(side: Side, spec: &OrbifoldSpec, limits: &IdentifyLimits, p: usize) -> Result<IdentifyReport, ContinuationError> {
    let curve = side == Side::E;
    let sp = if curve { SideParams::curve(spec)? } else { SideParams::k3(spec)? };
    let fan = build_fan(spec);
    let inputs = factor_inputs(spec, curve);
    if inputs.len() != 2 || inputs[0].twisted || !inputs[1].twisted {
        return Err(ContinuationError::UnsupportedHypotheses(format!("{} insertion classes on the {} side", inputs.len(), sp.label())));
    }
    let theory = if curve { Theory::MixedFg } else { Theory::MixedGf };
    let coords = if curve { E_COORDS } else { K_COORDS };
    let mut rows = Vec::new();
    let mut vanishing = 0;
    let mut max_dev = Real::zero(p);
    let n_sigma_max = to_i64(&(qi(2) * &limits.c_max)).unwrap_or(0) as u32;
    for n3 in 0..=(limits.m_max.saturating_sub(1) / 2) {
        let m = 2 * n3 + 1;
        for ns in 0..=n_sigma_max {
            let c = q(ns as i64, 2);
            let n = vec![n3, ns];
            let index = format!("{} m={m} c={}", sp.label(), fmt_q(&c));
            let lg = lg_side(spec, &inputs, &n, coords.clone())?;
            let y = sp.y(m, &c);
            if lg.theta[1] != frac(&y) {
                return Err(mismatch(&index, format!("output phase {} but pole class {}", fmt_q(&lg.theta[1]), fmt_q(&frac(&y)))));
            }
            let omega_cf = qi(2) * gamma_part(&sp, &y) / (factorial_q(n3) * factorial_q(ns));
            if lg.coefficient != omega_cf {
                return Err(mismatch(&index, format!("LG coefficient {} against closed form {}", fmt_q(&lg.coefficient), fmt_q(&omega_cf))));
            }
            let t = residue_term(&sp, m, &c, p)?.scale_q(&(qi(1) / factorial_q(ns)));
            let sigma = sigma_of(&sp, m, &c);
            if sigma == 0 {
                if !t.is_zero() || !lg.broad {
                    return Err(mismatch(&index, "broad output without a vanishing residue"));
                }
                vanishing += 1;
                continue;
            }
            let info = class_info(&sp, spec, sigma).ok_or_else(|| mismatch(&index, "no class"))?;
            let u = class_column(&sp, &info, p)?;
            let rhs = u.scale_q(&(minus_quarter_pow(n3) * &lg.coefficient));
            let dev = t.rel_dist(&rhs);
            for pt in geometric_points(&fan, &c, curve, limits.geo_bound) {
                let term = match mixed_term(theory, &MixedIndex { n: n.clone(), point: pt.clone() }, spec) {
                    Ok(t) => t,
                    Err(IseriesError::NotOverOrbifold) => continue,
                    Err(e) => return Err(e.into()),
                };
                let idx = format!("{index} point={}", crate::iseries::fmt_point(&pt));
                if !term.sector.split('|').any(|s| s == info.word) {
                    return Err(mismatch(&idx, format!("output {} but class {}", term.sector, info.word)));
                }
                let z_lg = term.z_exponent;
                let z_gw = gw_z(&fan, &pt, curve, &idx)?;
                if z_gw != z_lg - info.z_shift {
                    return Err(mismatch(&idx, format!("z-exponents {z_gw} and {z_lg} with shift {}", info.z_shift)));
                }
                check_geometric_factor(&fan, &pt, curve, &term.coefficient, &lg.coefficient, &idx)?;
                if dev.cmp(&max_dev).is_gt() {
                    max_dev = dev.clone();
                }
                rows.push(IdentifyRow { index: idx, source: info.word.clone(), z_gw, z_lg, deviation: dev.clone() });
            }
        }
    }
    Ok(IdentifyReport { side, rows, vanishing, max_deviation: max_dev })
}

/// The geometric factor of the mixed term is the GW factor of the same
/// point, times `ω`: checked exactly.
fn check_geometric_factor(fan: &StackyFanData, pt: &LatticePoint, curve_lg: bool, coef: &crate::iseries::CohomElement, omega: &Q, idx: &str) -> Result<(), ContinuationError> {
    let torus = fan.valuation(pt)?.torus;
    let spec = &fan.spec;
    let pairs = if curve_lg { k_side_pairs(fan, pt)? } else { e_side_pairs(fan, pt)? };
    let mut form = GammaRatioForm::new(NSYM);
    for pair in pairs {
        form.push(pair);
    }
    let caps = if curve_lg { vec![Some(0), Some(torus.max_k(spec))] } else { vec![Some(torus.max_e(spec)), Some(0)] };
    let poly = pochhammer_collapse(&form, &caps)?.scale(omega);
    let mut want: BTreeMap<u32, Q> = BTreeMap::new();
    for (mono, v) in poly.terms() {
        want.insert(if curve_lg { mono[1] } else { mono[0] }, v.clone());
    }
    let mut got: BTreeMap<u32, Q> = BTreeMap::new();
    for (k, v) in &coef.entries {
        if (curve_lg && k.e != 0) || (!curve_lg && k.k != 0) {
            return Err(mismatch(idx, "mixed term has a divisor power on the LG factor"));
        }
        got.insert(if curve_lg { k.k } else { k.e }, v.clone());
    }
    want.retain(|_, v| !v.is_zero());
    got.retain(|_, v| !v.is_zero());
    if want != got {
        return Err(mismatch(idx, "geometric factor differs from the GW factor"));
    }
    Ok(())
}

fn outer(a: &Jet, b: &Jet) -> Vec<Complex> {
    a.c.iter().flat_map(|x| b.c.iter().map(move |y| x.mul(y))).collect()
}

fn check_both(spec: &OrbifoldSpec, limits: &IdentifyLimits, p: usize) -> Result<IdentifyReport, ContinuationError> {
    let se = SideParams::curve(spec)?;
    let sk = SideParams::k3(spec)?;
    let fan = build_fan(spec);
    let labels: Vec<String> = fjrw_inputs(spec).into_iter().map(|h| h.label).collect();
    if labels != ["J1^3J2", "J1J2^3", "sJ1^2J2^2"] {
        return Err(ContinuationError::UnsupportedHypotheses(format!("FJRW insertions {labels:?}")));
    }
    let mut rows = Vec::new();
    let mut vanishing = 0;
    let mut max_dev = Real::zero(p);
    let top = limits.m_max.saturating_sub(1) / 2;
    let n_sigma_max = to_i64(&(qi(2) * &limits.c_max)).unwrap_or(0) as u32;
    for mm in 0..=top {
        for nn in 0..=top {
            for cc in 0..=n_sigma_max {
                let (m, n, c) = (2 * mm + 1, 2 * nn + 1, q(cc as i64, 2));
                let index = format!("EK m={m} n={n} c={}", fmt_q(&c));
                let term = fjrw_term(&[mm, nn, cc], spec)?;
                let omega = term.coefficient.entries.values().next().cloned().unwrap_or_default();
                let (ye, yk) = (se.y(m, &c), sk.y(n, &c));
                let omega_cf = qi(4) * gamma_part(&se, &ye) * gamma_part(&sk, &yk) / (factorial_q(mm) * factorial_q(nn) * factorial_q(cc));
                if omega != omega_cf {
                    return Err(mismatch(&index, format!("FJRW coefficient {} against closed form {}", fmt_q(&omega), fmt_q(&omega_cf))));
                }
                let te = residue_term(&se, m, &c, p)?;
                let tk = residue_term(&sk, n, &c, p)?.scale_q(&(qi(1) / factorial_q(cc)));
                let (ge, gk) = (sigma_of(&se, m, &c), sigma_of(&sk, n, &c));
                if ge == 0 || gk == 0 {
                    if !(te.is_zero() || tk.is_zero()) || !term.broad {
                        return Err(mismatch(&index, "broad output without a vanishing residue"));
                    }
                    vanishing += 1;
                    continue;
                }
                let ie: ClassInfo = class_info(&se, spec, ge).ok_or_else(|| mismatch(&index, "no curve class"))?;
                let ik: ClassInfo = class_info(&sk, spec, gk).ok_or_else(|| mismatch(&index, "no K3 class"))?;
                let want_label = format!("{}{}{}", if ie.twisted { "s" } else { "" }, ie.word.trim_start_matches('s'), ik.word.trim_start_matches('s'));
                if term.sector != want_label {
                    return Err(mismatch(&index, format!("output {} but classes give {want_label}", term.sector)));
                }
                let lhs = outer(&te, &tk);
                let k = minus_quarter_pow(mm + nn) * &omega;
                let rhs: Vec<Complex> = outer(&class_column(&se, &ie, p)?, &class_column(&sk, &ik, p)?).into_iter().map(|v| v.mul(&Complex::from_q(&k, p))).collect();
                let dev = Jet { c: lhs }.rel_dist(&Jet { c: rhs });
                let z_lg = term.z_exponent;
                let pt = LatticePoint::new(qi(2), qi(2), c.clone(), vec![0; fan.m()]);
                let z_gw = {
                    let z1 = gw_form(&fan, &pt)?.z_exponent();
                    let mut p2 = pt.clone();
                    p2.a = qi(3);
                    p2.b = qi(4);
                    if gw_form(&fan, &p2)?.z_exponent() != z1 {
                        return Err(mismatch(&index, "GW z-exponent depends on the continued degrees"));
                    }
                    z1
                };
                if z_gw != z_lg - ie.z_shift - ik.z_shift {
                    return Err(mismatch(&index, format!("z-exponents {z_gw} and {z_lg}")));
                }
                if dev.cmp(&max_dev).is_gt() {
                    max_dev = dev.clone();
                }
                rows.push(IdentifyRow { index, source: want_label, z_gw, z_lg, deviation: dev });
            }
        }
    }
    Ok(IdentifyReport { side: Side::Both, rows, vanishing, max_deviation: max_dev })
}

/// Verifies the identification for all indices within `limits`. Exact parts
/// (coefficients, labels, `z`-powers, the geometric factor) must agree
/// exactly; the transcendental columns within `tol`.
pub fn identify_continued_series(side: Side, spec: &OrbifoldSpec, limits: &IdentifyLimits, tol: &Real) -> Result<IdentifyReport, ContinuationError> {
    let p = tol.precision();
    let report = match side {
        Side::Both => check_both(spec, limits, p)?,
        s => check_one_side(s, spec, limits, p)?,
    };
    if let Some(r) = report.rows.iter().find(|r| r.deviation.cmp(tol).is_ge()) {
        return Err(mismatch(&r.index, format!("deviation {}", r.deviation.to_sci(3))));
    }
    Ok(report)
}
