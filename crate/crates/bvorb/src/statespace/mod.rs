//! State spaces of the four phases with grading and pairing: Chen–Ruan
//! (ambient part), FJRW (full and narrow), and the two mixed theories.

pub mod ambient;
pub mod milnor;

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::rational::{fmt_q_short, qi, Q};
use crate::weights::{build_group, narrow_degree, sector_info, GroupElement, OrbifoldSpec, Word, E_COORDS, K_COORDS};

pub use ambient::{ambient_classes, ambient_pairing, AmbientClass, TorusElement};
pub use milnor::{milnor_invariant_dim, MilnorRestriction};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StateSpaceError {
    #[error("restricted potential is degenerate (an exponent below 2)")]
    DegenerateRestriction,
    #[error("Hodge number formula gives a negative value")]
    NegativeHodgeNumber,
    #[error("basis entry index {0} out of range")]
    UnknownEntry(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Theory {
    #[serde(rename = "gw")]
    Gw,
    #[serde(rename = "fjrw")]
    Fjrw,
    /// FJRW on the curve, GW on the K3 surface.
    #[serde(rename = "mixed-fg")]
    MixedFg,
    /// GW on the curve, FJRW on the K3 surface.
    #[serde(rename = "mixed-gf")]
    MixedGf,
}

impl Theory {
    pub fn name(self) -> &'static str {
        match self {
            Theory::Gw => "gw",
            Theory::Fjrw => "fjrw",
            Theory::MixedFg => "mixed-fg",
            Theory::MixedGf => "mixed-gf",
        }
    }

    pub fn parse(s: &str) -> Option<Theory> {
        match s {
            "gw" => Some(Theory::Gw),
            "fjrw" => Some(Theory::Fjrw),
            "mixed-fg" | "fjrw-gw" => Some(Theory::MixedFg),
            "mixed-gf" | "gw-fjrw" => Some(Theory::MixedGf),
            _ => None,
        }
    }

    pub const ALL: [Theory; 4] = [Theory::Gw, Theory::Fjrw, Theory::MixedFg, Theory::MixedGf];
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HodgeDiamond {
    pub h00: u32,
    pub h11: u32,
    pub h21: u32,
    pub h30: u32,
}

impl HodgeDiamond {
    /// Real degree → total dimension.
    pub fn graded_dims(&self) -> BTreeMap<Q, usize> {
        let mut m = BTreeMap::new();
        m.insert(qi(0), self.h00 as usize);
        m.insert(qi(2), self.h11 as usize);
        m.insert(qi(3), (2 * self.h30 + 2 * self.h21) as usize);
        m.insert(qi(4), self.h11 as usize);
        m.insert(qi(6), self.h00 as usize);
        m
    }

    /// Rows of the diamond from top to bottom.
    pub fn rows(&self) -> Vec<Vec<u32>> {
        let (a, b, c, d) = (self.h00, self.h11, self.h21, self.h30);
        vec![vec![a], vec![0, 0], vec![0, b, 0], vec![d, c, c, d], vec![0, b, 0], vec![0, 0], vec![a]]
    }
}

/// `h¹¹ = 11 + 5N − N′`, `h²¹ = 11 + 5N′ − N`.
pub fn hodge_diamond(n: i64, n_prime: i64) -> Result<HodgeDiamond, StateSpaceError> {
    let h11 = 11 + 5 * n - n_prime;
    let h21 = 11 + 5 * n_prime - n;
    if n < 0 || n_prime < 0 || h11 < 0 || h21 < 0 {
        return Err(StateSpaceError::NegativeHodgeNumber);
    }
    Ok(HodgeDiamond { h00: 1, h11: h11 as u32, h21: h21 as u32, h30: 1 })
}

pub fn spec_hodge(spec: &OrbifoldSpec) -> HodgeDiamond {
    hodge_diamond(spec.nikulin.0 as i64, spec.nikulin.1 as i64).expect("table rows give nonnegative Hodge numbers")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryKind {
    Narrow,
    Broad,
    Ambient,
}

/// Identity of a basis element, used by the pairing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisKey {
    Fjrw {
        h: GroupElement,
        monomial: Vec<u32>,
    },
    Ambient(AmbientClass),
    /// Curve-side FJRW sector ⊗ K3-side ambient class.
    MixedFg {
        h: GroupElement,
        sector: TorusElement,
        k: u32,
    },
    /// Curve-side ambient class ⊗ K3-side FJRW sector.
    MixedGf {
        sector: TorusElement,
        e: u32,
        h: GroupElement,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasisEntry {
    pub label: String,
    /// Real degree.
    pub degree: Q,
    pub sector: String,
    pub kind: EntryKind,
    pub key: BasisKey,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GradedBasis {
    pub theory: Theory,
    pub entries: Vec<BasisEntry>,
}

impl GradedBasis {
    pub fn graded_dims(&self) -> BTreeMap<Q, usize> {
        graded(self.entries.iter().map(|e| &e.degree))
    }

    pub fn labels(&self) -> Vec<String> {
        self.entries.iter().map(|e| e.label.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn graded<'a>(degrees: impl Iterator<Item = &'a Q>) -> BTreeMap<Q, usize> {
    let mut m = BTreeMap::new();
    for d in degrees {
        *m.entry(d.clone()).or_insert(0) += 1;
    }
    m
}

pub fn fmt_dims(m: &BTreeMap<Q, usize>) -> BTreeMap<String, usize> {
    m.iter().filter(|(_, v)| **v > 0).map(|(k, v)| (fmt_q_short(k), *v)).collect()
}

const VAR_NAMES: [&str; 7] = ["X", "Y", "Z", "x", "y", "z", "w"];

fn milnor_label(vars: &[usize], e: &[u32]) -> String {
    let parts: Vec<String> = vars.iter().zip(e).filter(|(_, p)| **p > 0).map(|(k, p)| if *p == 1 { VAR_NAMES[*k].to_string() } else { format!("{}^{p}", VAR_NAMES[*k]) }).collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn group_generators(spec: &OrbifoldSpec) -> Vec<GroupElement> {
    vec![spec.j1(), spec.j2(), spec.sigma()]
}

/// Full FJRW state space: every sector's invariant Milnor ring, each
/// element sitting in the degree of its sector.
pub fn fjrw_state_space(spec: &OrbifoldSpec) -> Result<GradedBasis, StateSpaceError> {
    let gens = group_generators(spec);
    let ex = spec.exponents();
    let mut entries = Vec::new();
    for (h, w) in ordered_group(spec) {
        let info = sector_info(&h, spec);
        let r = MilnorRestriction::of(&h, &ex);
        for m in milnor::invariant_monomials(&r, &gens)? {
            let narrow = info.narrow;
            let label = if narrow { w.label() } else { format!("{}|{}", w.label(), milnor_label(&r.vars, &m)) };
            entries.push(BasisEntry {
                label,
                degree: info.deg_w.clone(),
                sector: w.label(),
                kind: if narrow { EntryKind::Narrow } else { EntryKind::Broad },
                key: BasisKey::Fjrw { h: h.clone(), monomial: m },
            });
        }
    }
    entries.sort_by(|a, b| a.degree.cmp(&b.degree));
    Ok(GradedBasis { theory: Theory::Fjrw, entries })
}

/// Group elements ordered by word `(t, s, r)`.
fn ordered_group(spec: &OrbifoldSpec) -> Vec<(GroupElement, Word)> {
    let mut g = build_group(spec);
    g.sort_by_key(|(_, w)| (w.t, w.s, w.r));
    g
}

/// Narrow sectors ordered by degree, then by word.
pub fn narrow_sectors(spec: &OrbifoldSpec) -> Vec<(GroupElement, Word, Q)> {
    let mut v: Vec<(GroupElement, Word, Q)> = ordered_group(spec)
        .into_iter()
        .filter(|(h, _)| h.is_narrow())
        .map(|(h, w)| {
            let d = narrow_degree(&sector_info(&h, spec));
            (h, w, d)
        })
        .collect();
    v.sort_by(|a, b| a.2.cmp(&b.2));
    v
}

pub fn fjrw_narrow_basis(spec: &OrbifoldSpec) -> GradedBasis {
    let entries = narrow_sectors(spec)
        .into_iter()
        .map(|(h, w, d)| BasisEntry { label: w.label(), degree: d, sector: w.label(), kind: EntryKind::Narrow, key: BasisKey::Fjrw { h, monomial: vec![] } })
        .collect();
    GradedBasis { theory: Theory::Fjrw, entries }
}

pub fn gw_ambient_basis(spec: &OrbifoldSpec) -> GradedBasis {
    let mut entries: Vec<BasisEntry> = ambient_classes(spec)
        .into_iter()
        .map(|c| BasisEntry { label: c.label(), degree: c.degree(spec), sector: c.sector.label(), kind: EntryKind::Ambient, key: BasisKey::Ambient(c) })
        .collect();
    entries.sort_by(|a, b| a.degree.cmp(&b.degree));
    GradedBasis { theory: Theory::Gw, entries }
}

/// A narrow sector of one factor: `σ^t J^r` restricted to that factor's
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorSector {
    pub h: GroupElement,
    pub label: String,
    /// Real degree `2 Σ i_k` over the factor's coordinates.
    pub degree: Q,
}

fn factor_narrow(spec: &OrbifoldSpec, curve_side: bool, twisted: bool) -> Vec<FactorSector> {
    let (j, coords) = if curve_side { (spec.j1(), E_COORDS) } else { (spec.j2(), K_COORDS) };
    let order = if curve_side { spec.j1_order() } else { spec.j2_order() };
    let sg = if curve_side { spec.sigma().e_part() } else { spec.sigma().k_part() };
    let c = spec.charges();
    let mut out = Vec::new();
    for r in 0..order {
        let mut h = j.pow(r as i64);
        if twisted {
            h = h.mul(&sg);
        }
        if coords.clone().any(|k| h.theta[k].is_zero()) {
            continue;
        }
        let deg: Q = coords.clone().map(|k| crate::arith::rational::frac(&(&h.theta[k] - &c[k]))).sum::<Q>() * qi(2);
        let word = Word { t: twisted as u32, r: if curve_side { r } else { 0 }, s: if curve_side { 0 } else { r } };
        out.push(FactorSector { h, label: word.label(), degree: deg });
    }
    out.sort_by(|a, b| a.degree.cmp(&b.degree));
    out
}

/// Curve-side narrow sectors with σ-parity `twisted`.
pub fn e_narrow(spec: &OrbifoldSpec, twisted: bool) -> Vec<FactorSector> {
    factor_narrow(spec, true, twisted)
}

pub fn k_narrow(spec: &OrbifoldSpec, twisted: bool) -> Vec<FactorSector> {
    factor_narrow(spec, false, twisted)
}

fn gamma_of(twisted: bool) -> Q {
    if twisted {
        crate::arith::rational::q(1, 2)
    } else {
        Q::zero()
    }
}

pub fn mixed_state_space(spec: &OrbifoldSpec, which: Theory) -> GradedBasis {
    let mut entries = Vec::new();
    for twisted in [false, true] {
        let g = gamma_of(twisted);
        match which {
            Theory::MixedFg => {
                for h in e_narrow(spec, twisted) {
                    for s in ambient::k_sectors(spec, &g) {
                        for k in 0..=s.max_k(spec) {
                            let amb = ambient::factor_class_label(&ambient::monomial_label(0, k), &s.label_k());
                            entries.push(BasisEntry {
                                label: format!("phi[{}]*{}", h.label, amb),
                                degree: &h.degree + qi(2) * (s.age_k(spec) + qi(k as i64)),
                                sector: format!("{}|{}", h.label, s.label_k()),
                                kind: EntryKind::Narrow,
                                key: BasisKey::MixedFg { h: h.h.clone(), sector: s.clone(), k },
                            });
                        }
                    }
                }
            }
            Theory::MixedGf => {
                for s in ambient::e_sectors(spec, &g) {
                    for e in 0..=s.max_e(spec) {
                        for h in k_narrow(spec, twisted) {
                            let amb = ambient::factor_class_label(&ambient::monomial_label(e, 0), &s.label_e());
                            entries.push(BasisEntry {
                                label: format!("{}*phi[{}]", amb, h.label),
                                degree: qi(2) * (s.age_e(spec) + qi(e as i64)) + &h.degree,
                                sector: format!("{}|{}", s.label_e(), h.label),
                                kind: EntryKind::Narrow,
                                key: BasisKey::MixedGf { sector: s.clone(), e, h: h.h.clone() },
                            });
                        }
                    }
                }
            }
            _ => panic!("mixed_state_space needs a mixed theory"),
        }
    }
    entries.sort_by(|a, b| a.degree.cmp(&b.degree));
    GradedBasis { theory: which, entries }
}

/// Compact-type basis of a theory: narrow sectors, ambient classes, or
/// mixed products.
pub fn compact_basis(spec: &OrbifoldSpec, theory: Theory) -> GradedBasis {
    match theory {
        Theory::Gw => gw_ambient_basis(spec),
        Theory::Fjrw => fjrw_narrow_basis(spec),
        t => mixed_state_space(spec, t),
    }
}

/// The pairing `η(x, y)` on basis entries `i`, `j`. Twisted-sector and
/// point-class normalizations are 1.
pub fn pairing(spec: &OrbifoldSpec, basis: &GradedBasis, i: usize, j: usize) -> Result<Q, StateSpaceError> {
    let x = basis.entries.get(i).ok_or(StateSpaceError::UnknownEntry(i))?;
    let y = basis.entries.get(j).ok_or(StateSpaceError::UnknownEntry(j))?;
    if &x.degree + &y.degree != qi(6) {
        return Ok(Q::zero());
    }
    let one = |b: bool| if b { qi(1) } else { Q::zero() };
    Ok(match (&x.key, &y.key) {
        (BasisKey::Fjrw { h: h1, monomial: m1 }, BasisKey::Fjrw { h: h2, monomial: m2 }) => {
            if *h2 != h1.inverse() {
                Q::zero()
            } else {
                let ex = spec.exponents();
                let vars = h1.fixed();
                one(vars.iter().enumerate().all(|(i, &k)| m1[i] + m2[i] == ex[k] - 2))
            }
        }
        (BasisKey::Ambient(a), BasisKey::Ambient(b)) => ambient_pairing(spec, a, b),
        (BasisKey::MixedFg { h: h1, sector: s1, k: k1 }, BasisKey::MixedFg { h: h2, sector: s2, k: k2 }) => {
            one(*h2 == h1.inverse() && *s2 == s1.inverse() && k1 + k2 == s1.max_k(spec))
        }
        (BasisKey::MixedGf { sector: s1, e: e1, h: h1 }, BasisKey::MixedGf { sector: s2, e: e2, h: h2 }) => {
            one(*h2 == h1.inverse() && *s2 == s1.inverse() && e1 + e2 == s1.max_e(spec))
        }
        _ => Q::zero(),
    })
}

pub fn pairing_matrix(spec: &OrbifoldSpec, basis: &GradedBasis) -> Vec<Vec<Q>> {
    let n = basis.len();
    (0..n).map(|i| (0..n).map(|j| pairing(spec, basis, i, j).unwrap()).collect()).collect()
}

/// Outcome of comparing graded dimensions across theories.
#[derive(Clone, Debug, Serialize)]
pub struct IsoReport {
    pub spec: String,
    pub full_fjrw: BTreeMap<String, usize>,
    pub full_gw: BTreeMap<String, usize>,
    pub compact: BTreeMap<String, BTreeMap<String, usize>>,
    pub passed: bool,
}

pub fn check_isomorphisms(spec: &OrbifoldSpec) -> Result<IsoReport, StateSpaceError> {
    let full_fjrw = fjrw_state_space(spec)?.graded_dims();
    let full_gw = spec_hodge(spec).graded_dims();
    let mut compact = BTreeMap::new();
    let mut dims = Vec::new();
    for t in Theory::ALL {
        let d = compact_basis(spec, t).graded_dims();
        compact.insert(t.name().to_string(), fmt_dims(&d));
        dims.push(d);
    }
    let passed = fmt_dims(&full_fjrw) == fmt_dims(&full_gw) && dims.windows(2).all(|w| w[0] == w[1]);
    Ok(IsoReport { spec: spec.label(), full_fjrw: fmt_dims(&full_fjrw), full_gw: fmt_dims(&full_gw), compact, passed })
}
