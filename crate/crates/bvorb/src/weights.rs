//! Weight systems, charges, the group ⟨J₁, J₂, σ⟩ and per-element invariants.
//!
//! Coordinates are ordered `(X, Y, Z, x, y, z, w)`: three for the elliptic
//! curve, four for the K3 surface.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::rational::{frac, q, qi, Q};

pub const NCOORD: usize = 7;
pub const E_COORDS: std::ops::Range<usize> = 0..3;
pub const K_COORDS: std::ops::Range<usize> = 3..7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Curve {
    /// X² + Y⁴ + Z⁴ in P(2,1,1)
    Quartic,
    /// X² + Y³ + Z⁶ in P(3,2,1)
    CubicSextic,
}

impl Curve {
    pub fn weights(self) -> [u32; 3] {
        match self {
            Curve::Quartic => [2, 1, 1],
            Curve::CubicSextic => [3, 2, 1],
        }
    }

    /// Degree of the curve equation.
    pub fn degree(self) -> u32 {
        2 * self.weights()[0]
    }

    pub fn exponents(self) -> [u32; 3] {
        let d = self.degree();
        self.weights().map(|w| d / w)
    }

    pub fn name(self) -> &'static str {
        match self {
            Curve::Quartic => "quartic",
            Curve::CubicSextic => "cubic-sextic",
        }
    }

    pub fn parse(s: &str) -> Option<Curve> {
        match s.trim().to_ascii_lowercase().as_str() {
            "quartic" | "2,1,1" => Some(Curve::Quartic),
            "cubic-sextic" | "cubic_sextic" | "3,2,1" => Some(Curve::CubicSextic),
            _ => None,
        }
    }
}

/// The ten Fermat-type K3 weight systems admitting x ↦ −x, with their
/// Nikulin invariants (N, N′).
pub const ADMISSIBLE: [([u32; 4], (u32, u32)); 10] = [
    ([3, 1, 1, 1], (1, 10)),
    ([5, 2, 2, 1], (2, 6)),
    ([15, 10, 3, 2], (4, 4)),
    ([21, 14, 6, 1], (6, 6)),
    ([9, 6, 2, 1], (3, 7)),
    ([4, 2, 1, 1], (1, 9)),
    ([10, 5, 4, 1], (2, 6)),
    ([6, 3, 2, 1], (1, 7)),
    ([6, 4, 1, 1], (2, 10)),
    ([12, 8, 3, 1], (3, 7)),
];

pub fn is_admissible_weight_table(w: [u32; 4]) -> Option<(u32, u32)> {
    ADMISSIBLE.iter().find(|(t, _)| *t == w).map(|(_, n)| *n)
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecError {
    #[error("K3 weights {0:?} are not one of the ten admissible Fermat weight systems")]
    NotAdmissible([u32; 4]),
    #[error("cannot parse weights {0:?}; expected four comma-separated positive integers")]
    Parse(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbifoldSpec {
    pub curve: Curve,
    pub k3_weights: [u32; 4],
    pub nikulin: (u32, u32),
}

impl OrbifoldSpec {
    pub fn new(curve: Curve, k3_weights: [u32; 4]) -> Result<Self, SpecError> {
        let nikulin = is_admissible_weight_table(k3_weights).ok_or(SpecError::NotAdmissible(k3_weights))?;
        Ok(OrbifoldSpec { curve, k3_weights, nikulin })
    }

    pub fn quartic(k3: [u32; 4]) -> Self {
        Self::new(Curve::Quartic, k3).expect("admissible weights")
    }

    pub fn all() -> Vec<OrbifoldSpec> {
        let mut v = Vec::new();
        for curve in [Curve::Quartic, Curve::CubicSextic] {
            for (w, _) in ADMISSIBLE {
                v.push(OrbifoldSpec::new(curve, w).unwrap());
            }
        }
        v
    }

    pub fn w0(&self) -> u32 {
        self.k3_weights[0]
    }

    /// Degree of the K3 equation, `2 w₀`.
    pub fn k3_degree(&self) -> u32 {
        2 * self.w0()
    }

    pub fn k3_exponents(&self) -> [u32; 4] {
        let d = self.k3_degree();
        self.k3_weights.map(|w| d / w)
    }

    /// Fermat exponents `a_k` of all seven coordinates.
    pub fn exponents(&self) -> [u32; NCOORD] {
        let e = self.curve.exponents();
        let k = self.k3_exponents();
        [e[0], e[1], e[2], k[0], k[1], k[2], k[3]]
    }

    /// Charges `q_k = 1/a_k`.
    pub fn charges(&self) -> [Q; NCOORD] {
        self.exponents().map(|a| q(1, a as i64))
    }

    /// Order of J₁ (the curve exponent lcm).
    pub fn j1_order(&self) -> u32 {
        order_of(&self.j1().theta)
    }

    pub fn j2_order(&self) -> u32 {
        order_of(&self.j2().theta)
    }

    pub fn j1(&self) -> GroupElement {
        let c = self.charges();
        GroupElement::from_fn(|k| if E_COORDS.contains(&k) { c[k].clone() } else { Q::zero() })
    }

    pub fn j2(&self) -> GroupElement {
        let c = self.charges();
        GroupElement::from_fn(|k| if K_COORDS.contains(&k) { c[k].clone() } else { Q::zero() })
    }

    pub fn sigma(&self) -> GroupElement {
        GroupElement::from_fn(|k| if k == 0 || k == 3 { q(1, 2) } else { Q::zero() })
    }

    pub fn label(&self) -> String {
        let w = self.k3_weights;
        format!("{}:{},{},{},{}", self.curve.name(), w[0], w[1], w[2], w[3])
    }
}

pub fn parse_weights(s: &str) -> Result<[u32; 4], SpecError> {
    let err = || SpecError::Parse(s.chars().take(64).collect());
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(err());
    }
    let mut w = [0u32; 4];
    for (slot, p) in w.iter_mut().zip(&parts) {
        if p.is_empty() || p.len() > 6 || !p.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        *slot = p.parse().map_err(|_| err())?;
        if *slot == 0 {
            return Err(err());
        }
    }
    Ok(w)
}

fn order_of(theta: &[Q; NCOORD]) -> u32 {
    theta.iter().fold(1u32, |acc, t| num_integer::lcm(acc, frac(t).denom().try_into().unwrap_or(1)))
}

/// A diagonal symmetry, stored as its phases Θ_k ∈ [0, 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub theta: [Q; NCOORD],
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement::from_fn(|_| Q::zero())
    }

    pub fn from_fn(f: impl Fn(usize) -> Q) -> Self {
        GroupElement { theta: std::array::from_fn(|k| frac(&f(k))) }
    }

    pub fn mul(&self, o: &GroupElement) -> GroupElement {
        GroupElement::from_fn(|k| &self.theta[k] + &o.theta[k])
    }

    pub fn pow(&self, n: i64) -> GroupElement {
        GroupElement::from_fn(|k| &self.theta[k] * qi(n))
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement::from_fn(|k| -&self.theta[k])
    }

    pub fn is_identity(&self) -> bool {
        self.theta.iter().all(Zero::is_zero)
    }

    pub fn age(&self) -> Q {
        self.theta.iter().sum()
    }

    /// Number of coordinates fixed by the element.
    pub fn fix_dim(&self) -> usize {
        self.theta.iter().filter(|t| t.is_zero()).count()
    }

    pub fn fixed(&self) -> Vec<usize> {
        (0..NCOORD).filter(|&k| self.theta[k].is_zero()).collect()
    }

    pub fn is_narrow(&self) -> bool {
        self.fix_dim() == 0
    }

    /// Restriction to the curve coordinates (K3 phases zeroed).
    pub fn e_part(&self) -> GroupElement {
        GroupElement::from_fn(|k| if E_COORDS.contains(&k) { self.theta[k].clone() } else { Q::zero() })
    }

    pub fn k_part(&self) -> GroupElement {
        GroupElement::from_fn(|k| if K_COORDS.contains(&k) { self.theta[k].clone() } else { Q::zero() })
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.theta.iter().map(crate::arith::rational::fmt_q_short).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Element `σ^t J₁^r J₂^s` together with its word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    pub t: u32,
    pub r: u32,
    pub s: u32,
}

impl Word {
    /// ASCII label: `e`, or `[s][J1[^r]][J2[^s]]`.
    pub fn label(&self) -> String {
        if self.t == 0 && self.r == 0 && self.s == 0 {
            return "e".into();
        }
        let mut out = String::new();
        if self.t == 1 {
            out.push('s');
        }
        for (name, e) in [("J1", self.r), ("J2", self.s)] {
            match e {
                0 => {}
                1 => out.push_str(name),
                _ => out.push_str(&format!("{name}^{e}")),
            }
        }
        out
    }
}

/// All elements of ⟨J₁, J₂, σ⟩ with their canonical words, ordered by Θ.
pub fn build_group(spec: &OrbifoldSpec) -> Vec<(GroupElement, Word)> {
    let (j1, j2, sg) = (spec.j1(), spec.j2(), spec.sigma());
    let (o1, o2) = (spec.j1_order(), spec.j2_order());
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for t in 0..2 {
        for r in 0..o1 {
            for s in 0..o2 {
                let g = sg.pow(t as i64).mul(&j1.pow(r as i64)).mul(&j2.pow(s as i64));
                if seen.insert(g.clone()) {
                    out.push((g, Word { t, r, s }));
                }
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Looks up the canonical word of an element.
pub fn word_of(spec: &OrbifoldSpec, g: &GroupElement) -> Option<Word> {
    build_group(spec).into_iter().find(|(h, _)| h == g).map(|(_, w)| w)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SectorInfo {
    pub element: GroupElement,
    pub fix_dim: usize,
    pub age: Q,
    pub deg_w: Q,
    pub narrow: bool,
    pub i_values: [Q; NCOORD],
}

/// Invariants of a sector. The degree is `N_h + 2(age − Σ_k q_k)`, which
/// puts the identity sector at 3 and J₁J₂ at 0.
pub fn sector_info(h: &GroupElement, spec: &OrbifoldSpec) -> SectorInfo {
    let c = spec.charges();
    let qsum: Q = c.iter().sum();
    let fix_dim = h.fix_dim();
    let age = h.age();
    let deg_w = qi(fix_dim as i64) + qi(2) * (&age - &qsum);
    let i_values = std::array::from_fn(|k| frac(&(&h.theta[k] - &c[k])));
    SectorInfo { element: h.clone(), fix_dim, narrow: fix_dim == 0, age, deg_w, i_values }
}

/// Narrow-sector degree `2 Σ_k i_k(h)`.
pub fn narrow_degree(info: &SectorInfo) -> Q {
    qi(2) * info.i_values.iter().sum::<Q>()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta(v: [(i64, i64); 7]) -> GroupElement {
        GroupElement::from_fn(|k| q(v[k].0, v[k].1))
    }

    #[test]
    fn group_orders() {
        assert_eq!(build_group(&OrbifoldSpec::quartic([3, 1, 1, 1])).len(), 48);
        assert_eq!(build_group(&OrbifoldSpec::quartic([5, 2, 2, 1])).len(), 80);
        let cs = OrbifoldSpec::new(Curve::CubicSextic, [3, 1, 1, 1]).unwrap();
        assert_eq!(build_group(&cs).len(), 2 * 6 * 6);
    }

    #[test]
    fn j1j2_is_the_degree_zero_sector() {
        let spec = OrbifoldSpec::quartic([3, 1, 1, 1]);
        let h = spec.j1().mul(&spec.j2());
        assert_eq!(h, theta([(1, 2), (1, 4), (1, 4), (1, 2), (1, 6), (1, 6), (1, 6)]));
        let info = sector_info(&h, &spec);
        assert!(info.narrow);
        assert_eq!(info.deg_w, qi(0));
        assert!(info.i_values.iter().all(Zero::is_zero));
        assert_eq!(sector_info(&GroupElement::identity(), &spec).deg_w, qi(3));
    }

    #[test]
    fn sigma_j1sq_j2sq() {
        let spec = OrbifoldSpec::quartic([3, 1, 1, 1]);
        let h = spec.sigma().mul(&spec.j1().pow(2)).mul(&spec.j2().pow(2));
        let info = sector_info(&h, &spec);
        let want = [q(0, 1), q(1, 4), q(1, 4), q(0, 1), q(1, 6), q(1, 6), q(1, 6)];
        assert_eq!(info.i_values, want);
        assert_eq!(info.deg_w, qi(2));
        assert_eq!(narrow_degree(&info), qi(2));
        let h = spec.j1().pow(3).mul(&spec.j2());
        let want = [q(0, 1), q(1, 2), q(1, 2), q(0, 1), q(0, 1), q(0, 1), q(0, 1)];
        assert_eq!(sector_info(&h, &spec).i_values, want);
    }

    #[test]
    fn table_lookup() {
        assert_eq!(is_admissible_weight_table([3, 1, 1, 1]), Some((1, 10)));
        assert_eq!(is_admissible_weight_table([15, 10, 3, 2]), Some((4, 4)));
        assert_eq!(is_admissible_weight_table([7, 3, 2, 2]), None);
        assert!(OrbifoldSpec::new(Curve::Quartic, [7, 3, 2, 2]).is_err());
    }

    #[test]
    fn labels() {
        assert_eq!(Word { t: 1, r: 2, s: 4 }.label(), "sJ1^2J2^4");
        assert_eq!(Word { t: 0, r: 1, s: 1 }.label(), "J1J2");
        assert_eq!(Word { t: 0, r: 0, s: 0 }.label(), "e");
    }

    #[test]
    fn weight_parsing() {
        assert_eq!(parse_weights("3, 1,1,1").unwrap(), [3, 1, 1, 1]);
        assert!(parse_weights("3,1,1").is_err());
        assert!(parse_weights("3,1,1,-1").is_err());
        assert!(parse_weights("0,1,1,1").is_err());
    }

    #[test]
    fn charges_sum_to_one_per_factor() {
        for spec in OrbifoldSpec::all() {
            let c = spec.charges();
            assert_eq!(c[0..3].iter().sum::<Q>(), qi(1));
            assert_eq!(c[3..7].iter().sum::<Q>(), qi(1));
        }
    }
}
