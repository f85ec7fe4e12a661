//! Narrow FJRW I-function terms, and the Landau–Ginzburg side of the mixed
//! theories.

use num_traits::Zero;

use super::{sort_terms, CohomElement, CohomKey, ISeriesTerm, IseriesError, TermIndex};
use crate::arith::gamma_ratio::{pochhammer_collapse, GammaRatioForm};
use crate::arith::rational::{factorial, floor_i64, frac, qi, Q};
use crate::statespace::{e_narrow, k_narrow, narrow_sectors, Theory};
use crate::weights::{narrow_degree, sector_info, word_of, GroupElement, OrbifoldSpec, Word, E_COORDS, K_COORDS, NCOORD};

/// An insertion sector together with its `i_k = ⟨Θ_k − q_k⟩` over the
/// coordinates of the theory.
#[derive(Clone, Debug, PartialEq)]
pub struct FjrwInput {
    pub h: GroupElement,
    pub label: String,
    pub i: Vec<Q>,
    /// Contains the involution.
    pub twisted: bool,
}

fn input(spec: &OrbifoldSpec, h: GroupElement, label: String, twisted: bool, coords: std::ops::Range<usize>) -> FjrwInput {
    let c = spec.charges();
    let i = coords.map(|k| frac(&(&h.theta[k] - &c[k]))).collect();
    FjrwInput { h, label, i, twisted }
}

/// Narrow sectors of degree two, ordered by word. `J₁J₂` (degree zero) is
/// left out: its insertions only contribute the overall `e^{−z}`.
pub fn fjrw_inputs(spec: &OrbifoldSpec) -> Vec<FjrwInput> {
    narrow_sectors(spec).into_iter().filter(|(_, _, d)| *d == qi(2)).map(|(h, w, _)| input(spec, h, w.label(), w.t == 1, 0..NCOORD)).collect()
}

/// Degree-one insertions of one factor of a mixed theory: untwisted narrow
/// sectors of factor degree two and twisted ones of factor degree one.
pub fn factor_inputs(spec: &OrbifoldSpec, curve_side: bool) -> Vec<FjrwInput> {
    let mut out = Vec::new();
    for twisted in [false, true] {
        let want = if twisted { qi(1) } else { qi(2) };
        let (sectors, coords) = if curve_side { (e_narrow(spec, twisted), E_COORDS) } else { (k_narrow(spec, twisted), K_COORDS) };
        for s in sectors.into_iter().filter(|s| s.degree == want) {
            out.push(input(spec, s.h, s.label, twisted, coords.clone()));
        }
    }
    out
}

/// Result of the Landau–Ginzburg factor of a term.
#[derive(Clone, Debug, PartialEq)]
pub struct LgSide {
    pub coefficient: Q,
    /// `Σ_k ⌊S_k⌋ − |n|`; the overall leading `z` is not included.
    pub z_exponent: i64,
    /// Output phases `Θ_k = q_k + ⟨S_k⟩` over the factor's coordinates.
    pub theta: Vec<Q>,
    pub broad: bool,
    pub n_twisted: u32,
}

/// `∏_k Γ(q_k + S_k)/Γ(q_k + ⟨S_k⟩ + 1) · ∏ 1/n(h)!` with
/// `S_k = Σ_h n(h) i_k(h)`, over the coordinates `coords`.
pub fn lg_side(spec: &OrbifoldSpec, inputs: &[FjrwInput], n: &[u32], coords: std::ops::Range<usize>) -> Result<LgSide, IseriesError> {
    if n.len() != inputs.len() {
        return Err(IseriesError::NonNarrowInput { got: n.len(), want: inputs.len() });
    }
    let charges = spec.charges();
    let mut form = GammaRatioForm::new(0);
    let mut zexp = 0i64;
    let mut theta = Vec::new();
    let mut broad = false;
    for (slot, k) in coords.enumerate() {
        let s: Q = inputs.iter().zip(n).map(|(h, m)| &h.i[slot] * qi(*m as i64)).sum();
        let fs = frac(&s);
        let q = &charges[k];
        form.push_ratio(vec![], q + &s, q + &fs + qi(1));
        zexp += floor_i64(&s);
        let t = frac(&(q + &fs));
        broad |= t.is_zero();
        theta.push(t);
    }
    let mut coef = pochhammer_collapse(&form, &vec![])?.constant_term();
    for m in n {
        coef /= Q::from_integer(factorial(*m as u64));
    }
    zexp -= n.iter().map(|m| *m as i64).sum::<i64>();
    let n_twisted = inputs.iter().zip(n).filter(|(h, _)| h.twisted).map(|(_, m)| *m).sum();
    Ok(LgSide { coefficient: coef, z_exponent: zexp, theta, broad, n_twisted })
}

/// The group element with the given phases on all seven coordinates.
pub fn element_of(theta: &[Q]) -> GroupElement {
    GroupElement::from_fn(|k| theta[k].clone())
}

/// Word of a factor element `σ^t J^r` with the given phases on `coords`.
pub fn factor_word(spec: &OrbifoldSpec, theta: &[Q], curve_side: bool) -> Option<Word> {
    let (j, order, sg, coords) =
        if curve_side { (spec.j1(), spec.j1_order(), spec.sigma().e_part(), E_COORDS) } else { (spec.j2(), spec.j2_order(), spec.sigma().k_part(), K_COORDS) };
    for t in 0..2u32 {
        for r in 0..order {
            let mut h = j.pow(r as i64);
            if t == 1 {
                h = h.mul(&sg);
            }
            if coords.clone().zip(theta).all(|(k, x)| h.theta[k] == *x) {
                let (r, s) = if curve_side { (r, 0) } else { (0, r) };
                return Some(Word { t, r, s });
            }
        }
    }
    None
}

pub fn fjrw_term(n: &[u32], spec: &OrbifoldSpec) -> Result<ISeriesTerm, IseriesError> {
    fjrw_term_with(&fjrw_inputs(spec), n, spec)
}

fn fjrw_term_with(inputs: &[FjrwInput], n: &[u32], spec: &OrbifoldSpec) -> Result<ISeriesTerm, IseriesError> {
    let lg = lg_side(spec, inputs, n, 0..NCOORD)?;
    let h = element_of(&lg.theta);
    let word = word_of(spec, &h).ok_or(IseriesError::NotOverOrbifold)?;
    let info = sector_info(&h, spec);
    let deg = if info.narrow { narrow_degree(&info) } else { info.deg_w.clone() };
    let label = word.label();
    let mut coefficient = CohomElement::default();
    coefficient.add(CohomKey { label: label.clone(), sector: label.clone(), e: 0, k: 0 }, lg.coefficient);
    let novikov = inputs.iter().zip(n).map(|(h, m)| (format!("t[{}]", h.label), qi(*m as i64))).collect();
    Ok(ISeriesTerm {
        theory: Theory::Fjrw,
        index: TermIndex::Multiplicity(n.to_vec()),
        z_exponent: 1 + lg.z_exponent,
        coefficient,
        novikov,
        sector: label,
        sector_degree: deg / qi(2),
        broad: lg.broad,
        degree: qi(n.iter().map(|m| *m as i64).sum()),
    })
}

/// All multiplicity vectors of length `len` with total at most `bound`.
pub fn multiplicities(len: usize, bound: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for v in &out {
            let used: u32 = v.iter().sum();
            for m in 0..=(bound - used) {
                let mut w = v.clone();
                w.push(m);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// All FJRW terms with `|n| ≤ bound`.
pub fn fjrw_terms(spec: &OrbifoldSpec, bound: u32) -> Result<Vec<ISeriesTerm>, IseriesError> {
    let inputs = fjrw_inputs(spec);
    let mut out = Vec::new();
    for n in multiplicities(inputs.len(), bound) {
        out.push(fjrw_term_with(&inputs, &n, spec)?);
    }
    sort_terms(&mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s311() -> OrbifoldSpec {
        OrbifoldSpec::quartic([3, 1, 1, 1])
    }

    #[test]
    fn inputs_311() {
        let l: Vec<String> = fjrw_inputs(&s311()).into_iter().map(|h| h.label).collect();
        assert_eq!(l, vec!["J1^3J2", "J1J2^3", "sJ1^2J2^2"]);
    }

    #[test]
    fn vacuum_term() {
        let t = fjrw_term(&[0, 0, 0], &s311()).unwrap();
        assert_eq!(t.z_exponent, 1);
        assert_eq!(t.sector, "J1J2");
        assert_eq!(t.coefficient.get("J1J2"), qi(13824));
    }

    #[test]
    fn one_insertion() {
        let t = fjrw_term(&[1, 0, 0], &s311()).unwrap();
        assert_eq!(t.z_exponent, 0);
        assert_eq!(t.sector, "J1^3J2");
    }

    #[test]
    fn exponent_grid() {
        let spec = s311();
        for m in 0..4u32 {
            for n in 0..6u32 {
                for c in 0..24u32 {
                    let t = fjrw_term(&[m, n, c], &spec).unwrap();
                    let (mi, ni, ci) = (m as i64, n as i64, c as i64);
                    let want = 1 - mi - ni - ci + 2 * ((2 * mi + ci).div_euclid(4)) + 3 * ((2 * ni + ci).div_euclid(6));
                    assert_eq!(t.z_exponent, want, "{m} {n} {c}");
                    let r = fjrw_term(&[m % 2, n % 3, c % 12], &spec).unwrap();
                    assert_eq!(t.z_exponent, r.z_exponent);
                }
            }
        }
    }

    #[test]
    fn factor_inputs_311() {
        let spec = s311();
        let e: Vec<String> = factor_inputs(&spec, true).into_iter().map(|h| h.label).collect();
        let k: Vec<String> = factor_inputs(&spec, false).into_iter().map(|h| h.label).collect();
        assert_eq!(e, vec!["J1^3", "sJ1^2"]);
        assert_eq!(k, vec!["J2^3", "sJ2^2"]);
    }
}
