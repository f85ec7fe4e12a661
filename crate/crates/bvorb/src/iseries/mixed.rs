//! I-function terms of the two mixed theories: Landau–Ginzburg on one factor,
//! Gromov–Witten on the other.

use num_traits::Zero;

use super::fjrw::{factor_inputs, factor_word, lg_side, multiplicities, FjrwInput};
use super::gw::{e_side_pairs, k_side_pairs, NSYM};
use super::{fmt_point, sort_terms, CohomElement, CohomKey, ISeriesTerm, IseriesError, TermIndex};
use crate::arith::gamma_ratio::{pochhammer_collapse, GammaRatioForm};
use crate::arith::rational::{fmt_q, qi, to_i64, Q};
use crate::fan::{build_fan, enumerate_box, enumerate_lambda_e, LatticePoint, StackyFanData};
use crate::statespace::ambient::{factor_class_label, monomial_label};
use crate::statespace::Theory;
use crate::weights::{OrbifoldSpec, E_COORDS, K_COORDS};

/// Multiplicities over the factor's degree-one insertions, and the lattice
/// point of the geometric factor (`a = 0` for FJRW-GW; `b = 0`, `k = 0` for
/// GW-FJRW).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MixedIndex {
    pub n: Vec<u32>,
    pub point: LatticePoint,
}

fn check_theory(theory: Theory) -> Result<bool, IseriesError> {
    match theory {
        Theory::MixedFg => Ok(true),
        Theory::MixedGf => Ok(false),
        Theory::Gw => Err(IseriesError::WrongTheory("gw")),
        Theory::Fjrw => Err(IseriesError::WrongTheory("fjrw")),
    }
}

/// Insertions of the Landau–Ginzburg factor.
pub fn mixed_inputs(theory: Theory, spec: &OrbifoldSpec) -> Result<Vec<FjrwInput>, IseriesError> {
    Ok(factor_inputs(spec, check_theory(theory)?))
}

pub fn mixed_term(theory: Theory, index: &MixedIndex, spec: &OrbifoldSpec) -> Result<ISeriesTerm, IseriesError> {
    let fan = build_fan(spec);
    let inputs = mixed_inputs(theory, spec)?;
    mixed_term_with(theory, &fan, &inputs, index)
}

fn mixed_term_with(theory: Theory, fan: &StackyFanData, inputs: &[FjrwInput], index: &MixedIndex) -> Result<ISeriesTerm, IseriesError> {
    let curve_lg = check_theory(theory)?;
    let spec = &fan.spec;
    let p = &index.point;
    let coords = if curve_lg { E_COORDS } else { K_COORDS };
    let lg = lg_side(spec, inputs, &index.n, coords.clone())?;
    let two_c = qi(2) * &p.c;
    if two_c != qi(lg.n_twisted as i64) {
        return Err(IseriesError::ConstraintViolation { two_c: fmt_q(&two_c), n_sigma: lg.n_twisted });
    }
    let off_side = if curve_lg { !p.a.is_zero() } else { !p.b.is_zero() || p.k.iter().any(|k| *k != 0) };
    if off_side {
        return Err(IseriesError::WrongSide(fmt_point(p)));
    }
    let torus = fan.valuation(p)?.torus;
    let fits = if curve_lg { torus.alpha.is_zero() && torus.fixed_k(spec).len() >= 2 } else { torus.beta.is_zero() && torus.fixed_e(spec).len() >= 2 };
    if !fits {
        return Err(IseriesError::NotOverOrbifold);
    }
    let word = factor_word(spec, &lg.theta, curve_lg).ok_or(IseriesError::NotOverOrbifold)?;
    let hlabel = word.label();

    let mut form = GammaRatioForm::new(NSYM);
    let pairs = if curve_lg { k_side_pairs(fan, p)? } else { e_side_pairs(fan, p)? };
    let mut zexp = 1 + lg.z_exponent;
    for pair in pairs {
        zexp += pair.sign as i64 * to_i64(&pair.shift).unwrap_or(0);
        form.push(pair);
    }
    let caps = if curve_lg { vec![Some(0), Some(torus.max_k(spec))] } else { vec![Some(torus.max_e(spec)), Some(0)] };
    let poly = pochhammer_collapse(&form, &caps)?.scale(&lg.coefficient);

    let charges = spec.charges();
    let lg_deg: Q = coords.clone().zip(&lg.theta).map(|(k, t)| crate::arith::rational::frac(&(t - &charges[k]))).sum();
    let (amb_label, amb_age) = if curve_lg { (torus.label_k(), torus.age_k(spec)) } else { (torus.label_e(), torus.age_e(spec)) };
    let mut coefficient = CohomElement::default();
    for (m, v) in poly.terms() {
        let amb = factor_class_label(&monomial_label(m[0], m[1]), &amb_label);
        let label = if curve_lg { format!("phi[{hlabel}]*{amb}") } else { format!("{amb}*phi[{hlabel}]") };
        coefficient.add(CohomKey { label, sector: torus.label(), e: m[0], k: m[1] }, v.clone());
    }
    let mut novikov: Vec<(String, Q)> = inputs.iter().zip(&index.n).map(|(h, m)| (format!("t[{}]", h.label), qi(*m as i64))).collect();
    let geo = if curve_lg { ("q2", p.b.clone()) } else { ("q1", p.a.clone()) };
    novikov.push((geo.0.to_string(), geo.1.clone()));
    novikov.push(("q3".to_string(), p.c.clone()));
    for (j, k) in p.k.iter().enumerate() {
        novikov.push((format!("x{}", j + 1), qi(*k as i64)));
    }
    let ksum: u32 = p.k.iter().sum();
    let nsum: u32 = index.n.iter().sum();
    let sector = if curve_lg { format!("{hlabel}|{amb_label}") } else { format!("{amb_label}|{hlabel}") };
    Ok(ISeriesTerm {
        theory,
        index: TermIndex::Mixed(index.clone()),
        z_exponent: zexp,
        coefficient,
        novikov,
        sector,
        sector_degree: lg_deg + amb_age,
        broad: lg.broad,
        degree: qi((nsum + ksum) as i64) + geo.1,
    })
}

/// All mixed terms with `|n| + (b or a) + Σk ≤ bound`.
pub fn mixed_terms(theory: Theory, spec: &OrbifoldSpec, bound: u32) -> Result<Vec<ISeriesTerm>, IseriesError> {
    let curve_lg = check_theory(theory)?;
    let fan = build_fan(spec);
    let inputs = mixed_inputs(theory, spec)?;
    let boxes = enumerate_box(spec);
    let mut out = Vec::new();
    for n in multiplicities(inputs.len(), bound) {
        let n_sigma: u32 = inputs.iter().zip(&n).filter(|(h, _)| h.twisted).map(|(_, m)| *m).sum();
        let c = Q::new(n_sigma.into(), 2.into());
        let rest = qi((bound - n.iter().sum::<u32>()) as i64);
        for b in &boxes {
            for p in enumerate_lambda_e(&fan, b, &(&rest + &c)) {
                let keep = p.c == c && if curve_lg { p.a.is_zero() } else { p.b.is_zero() && p.k.iter().all(|k| *k == 0) };
                if !keep {
                    continue;
                }
                match mixed_term_with(theory, &fan, &inputs, &MixedIndex { n: n.clone(), point: p }) {
                    Ok(t) => out.push(t),
                    Err(IseriesError::NotOverOrbifold) => {}
                    Err(e) => return Err(e),
                }
            }
        }
    }
    sort_terms(&mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::q;

    fn s311() -> OrbifoldSpec {
        OrbifoldSpec::quartic([3, 1, 1, 1])
    }

    fn origin(fan: &StackyFanData) -> LatticePoint {
        LatticePoint::new(qi(0), qi(0), qi(0), vec![0; fan.m()])
    }

    #[test]
    fn leading_terms() {
        let spec = s311();
        let fan = build_fan(&spec);
        let fg = mixed_term(Theory::MixedFg, &MixedIndex { n: vec![0, 0], point: origin(&fan) }, &spec).unwrap();
        assert_eq!(fg.z_exponent, 1);
        // 2 · Γ(¼)²/Γ(5/4)² = 2 · 4 · 4
        assert_eq!(fg.coefficient.get("phi[J1]*1_0"), qi(32));
        let gf = mixed_term(Theory::MixedGf, &MixedIndex { n: vec![0, 0], point: origin(&fan) }, &spec).unwrap();
        assert_eq!(gf.z_exponent, 1);
        assert_eq!(gf.coefficient.get("1_0*phi[J2]"), qi(2 * 6 * 6 * 6));
    }

    #[test]
    fn coupling() {
        let spec = s311();
        let fan = build_fan(&spec);
        let bad = MixedIndex { n: vec![0, 1], point: origin(&fan) };
        assert!(matches!(mixed_term(Theory::MixedFg, &bad, &spec), Err(IseriesError::ConstraintViolation { .. })));
        let good = MixedIndex { n: vec![0, 1], point: LatticePoint::new(qi(0), qi(0), q(1, 2), vec![0; fan.m()]) };
        let t = mixed_term(Theory::MixedFg, &good, &spec).unwrap();
        assert_eq!(t.z_exponent, 0);
    }

    #[test]
    fn homogeneous() {
        for spec in [s311(), OrbifoldSpec::quartic([5, 2, 2, 1])] {
            for th in [Theory::MixedFg, Theory::MixedGf] {
                let terms = mixed_terms(th, &spec, 3).unwrap();
                assert!(!terms.is_empty());
                for t in &terms {
                    assert_eq!(qi(t.z_exponent) + &t.sector_degree, qi(1), "{} {}", t.index, spec.label());
                }
            }
        }
    }
}
