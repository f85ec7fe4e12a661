//! Splitting an assembled I-function as `f(t) z·1 + g(t) + O(z⁻¹)` and
//! forming `τ = g/f`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{terms_for, CohomElement, ISeriesTerm, IseriesError};
use crate::arith::rational::{fmt_q, Q};
use crate::statespace::ambient::{factor_class_label, monomial_label};
use crate::statespace::Theory;
use crate::weights::OrbifoldSpec;

/// Series in the Novikov/insertion variables, keyed by exponent vectors.
pub type Series<T> = BTreeMap<Vec<Q>, T>;

#[derive(Clone, Debug, PartialEq)]
pub struct MirrorMapData {
    pub theory: Theory,
    pub variables: Vec<String>,
    pub unit: String,
    /// Normalized so that `f(0) = 1`.
    pub f: Series<Q>,
    /// The raw leading coefficient `f(0)` before normalization.
    pub f0: Q,
    pub g: Series<CohomElement>,
    pub tau: Series<CohomElement>,
    /// Coefficients of `D_E`, `D_K` from the `exp(Σ D_i t_i / z)` prefactor.
    pub t_linear: Vec<(String, String)>,
    pub truncation: u32,
}

/// Label of the unit class of a theory.
pub fn unit_label(theory: Theory) -> String {
    match theory {
        Theory::Gw => "1".into(),
        Theory::Fjrw => "J1J2".into(),
        Theory::MixedFg => format!("phi[J1]*{}", factor_class_label(&monomial_label(0, 0), "0")),
        Theory::MixedGf => format!("{}*phi[J2]", factor_class_label(&monomial_label(0, 0), "0")),
    }
}

fn weighted_sum(w: &[u32], first: usize) -> String {
    let parts: Vec<String> = w.iter().enumerate().map(|(i, c)| if *c == 1 { format!("t{}", first + i) } else { format!("{}t{}", c, first + i) }).collect();
    parts.join("+")
}

pub fn t_linear_part(theory: Theory, spec: &OrbifoldSpec) -> Vec<(String, String)> {
    let e = ("D_E".to_string(), weighted_sum(&spec.curve.weights(), 1));
    let k = ("D_K".to_string(), weighted_sum(&spec.k3_weights, 4));
    match theory {
        Theory::Gw => vec![e, k],
        Theory::MixedFg => vec![k],
        Theory::MixedGf => vec![e],
        Theory::Fjrw => vec![],
    }
}

fn degree(key: &[Q]) -> Q {
    key.iter().sum()
}

fn mul_scalar(a: &Series<Q>, b: &Series<Q>, bound: &Q) -> Series<Q> {
    let mut out: Series<Q> = BTreeMap::new();
    for (ka, va) in a {
        for (kb, vb) in b {
            let k: Vec<Q> = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
            if degree(&k) > *bound {
                continue;
            }
            *out.entry(k).or_insert_with(Q::zero) += va * vb;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// `1/f` for `f(0) = 1`, truncated at total degree `bound`.
fn invert(f: &Series<Q>, nvars: usize, bound: &Q) -> Series<Q> {
    let zero = vec![Q::zero(); nvars];
    let mut h = f.clone();
    h.remove(&zero);
    let mut out: Series<Q> = BTreeMap::from([(zero.clone(), Q::one())]);
    let mut power: Series<Q> = out.clone();
    for _ in 0..256 {
        power = mul_scalar(&power, &h, bound).into_iter().map(|(k, v)| (k, -v)).collect();
        if power.is_empty() {
            break;
        }
        for (k, v) in &power {
            *out.entry(k.clone()).or_insert_with(Q::zero) += v;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Extracts `f`, `g` and `τ` from a list of terms of one theory.
pub fn mirror_map_from_terms(theory: Theory, spec: &OrbifoldSpec, terms: &[ISeriesTerm], truncation: u32) -> Result<MirrorMapData, IseriesError> {
    let unit = unit_label(theory);
    let variables: Vec<String> = terms.first().map(|t| t.novikov.iter().map(|(n, _)| n.clone()).collect()).unwrap_or_default();
    let mut f: Series<Q> = BTreeMap::new();
    let mut g: Series<CohomElement> = BTreeMap::new();
    for t in terms {
        let key: Vec<Q> = t.novikov.iter().map(|(_, v)| v.clone()).collect();
        for (ck, v) in &t.coefficient.entries {
            let zpow = t.z_exponent - ck.e as i64 - ck.k as i64;
            match zpow {
                1 => {
                    if ck.label != unit {
                        return Err(IseriesError::NonUnitLeading(format!("{} at {}", ck.label, t.index)));
                    }
                    *f.entry(key.clone()).or_insert_with(Q::zero) += v;
                }
                0 => g.entry(key.clone()).or_default().add(ck.clone(), v.clone()),
                p if p > 1 => return Err(IseriesError::NonUnitLeading(format!("z^{} at {}", p, t.index))),
                _ => {}
            }
        }
    }
    let zero = vec![Q::zero(); variables.len()];
    let f0 = f.get(&zero).cloned().ok_or_else(|| IseriesError::NonUnitLeading("no z^1 term at the origin".into()))?;
    let f: Series<Q> = f.into_iter().map(|(k, v)| (k, v / &f0)).collect();
    let bound = Q::from_integer(truncation.into());
    let finv = invert(&f, variables.len(), &bound);
    let mut tau: Series<CohomElement> = BTreeMap::new();
    for (kg, vg) in &g {
        for (kf, vf) in &finv {
            let k: Vec<Q> = kg.iter().zip(kf).map(|(x, y)| x + y).collect();
            if degree(&k) > bound {
                continue;
            }
            tau.entry(k).or_default().add_all(&vg.scale(&(vf / &f0)));
        }
    }
    tau.retain(|_, v| !v.is_zero());
    g.retain(|_, v| !v.is_zero());
    Ok(MirrorMapData { theory, variables, unit, f, f0, g, tau, t_linear: t_linear_part(theory, spec), truncation })
}

pub fn mirror_map(theory: Theory, spec: &OrbifoldSpec, truncation: u32) -> Result<MirrorMapData, IseriesError> {
    let terms = terms_for(theory, spec, truncation)?;
    mirror_map_from_terms(theory, spec, &terms, truncation)
}

impl MirrorMapData {
    pub fn tau_at_origin(&self) -> CohomElement {
        self.tau.get(&vec![Q::zero(); self.variables.len()]).cloned().unwrap_or_default()
    }

    /// Human-readable monomial for an exponent vector.
    pub fn monomial(&self, key: &[Q]) -> String {
        let parts: Vec<String> =
            self.variables.iter().zip(key).filter(|(_, e)| !e.is_zero()).map(|(v, e)| if e.is_one() { v.clone() } else { format!("{}^({})", v, fmt_q(e)) }).collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gw_311() {
        let spec = OrbifoldSpec::quartic([3, 1, 1, 1]);
        let m = mirror_map(Theory::Gw, &spec, 2).unwrap();
        assert_eq!(m.f0, Q::one());
        assert!(m.tau_at_origin().is_zero());
        assert_eq!(m.t_linear[0].1, "2t1+t2+t3");
        assert_eq!(m.t_linear[1].1, "3t4+t5+t6+t7");
    }

    #[test]
    fn fjrw_leading_on_unit() {
        let spec = OrbifoldSpec::quartic([3, 1, 1, 1]);
        let m = mirror_map(Theory::Fjrw, &spec, 4).unwrap();
        assert_eq!(m.f0, Q::from_integer(13824.into()));
        assert!(m.tau_at_origin().is_zero());
    }

    #[test]
    fn mixed_maps() {
        let spec = OrbifoldSpec::quartic([3, 1, 1, 1]);
        for th in [Theory::MixedFg, Theory::MixedGf] {
            let m = mirror_map(th, &spec, 2).unwrap();
            assert!(m.f.contains_key(&vec![Q::zero(); m.variables.len()]));
        }
    }
}
