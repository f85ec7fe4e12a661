//! Sectors of the ambient quotient stack that meet the orbifold, described
//! by torus elements `(α, β, γ)` of `(ℂ*)³`, and their ambient classes.

use std::fmt;

use num_traits::Zero;

use crate::arith::rational::{fmt_q_short, frac, q, qi, Q};
use crate::weights::{OrbifoldSpec, NCOORD};

/// A torus element `(e^{2πiα}, e^{2πiβ}, e^{2πiγ})` with `γ ∈ {0, ½}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusElement {
    pub alpha: Q,
    pub beta: Q,
    pub gamma: Q,
}

impl TorusElement {
    pub fn new(alpha: Q, beta: Q, gamma: Q) -> Self {
        TorusElement { alpha: frac(&alpha), beta: frac(&beta), gamma: frac(&gamma) }
    }

    pub fn identity() -> Self {
        TorusElement::new(Q::zero(), Q::zero(), Q::zero())
    }

    pub fn sigma() -> Self {
        TorusElement::new(Q::zero(), Q::zero(), q(1, 2))
    }

    pub fn inverse(&self) -> Self {
        TorusElement::new(-&self.alpha, -&self.beta, -&self.gamma)
    }

    /// Phases on `(X, Y, Z, x, y, z, w)` in `[0, 1)`.
    pub fn phases(&self, spec: &OrbifoldSpec) -> [Q; NCOORD] {
        let e = spec.curve.weights();
        let w = spec.k3_weights;
        let (a, b, g) = (&self.alpha, &self.beta, &self.gamma);
        [
            frac(&(a * qi(e[0] as i64) + g)),
            frac(&(a * qi(e[1] as i64))),
            frac(&(a * qi(e[2] as i64))),
            frac(&(b * qi(w[0] as i64) + g)),
            frac(&(b * qi(w[1] as i64))),
            frac(&(b * qi(w[2] as i64))),
            frac(&(b * qi(w[3] as i64))),
        ]
    }

    pub fn fixed_e(&self, spec: &OrbifoldSpec) -> Vec<usize> {
        let p = self.phases(spec);
        (0..3).filter(|&k| p[k].is_zero()).collect()
    }

    pub fn fixed_k(&self, spec: &OrbifoldSpec) -> Vec<usize> {
        let p = self.phases(spec);
        (3..7).filter(|&k| p[k].is_zero()).collect()
    }

    /// Largest power of D_E surviving on the fixed locus.
    pub fn max_e(&self, spec: &OrbifoldSpec) -> u32 {
        self.fixed_e(spec).len() as u32 - 2
    }

    pub fn max_k(&self, spec: &OrbifoldSpec) -> u32 {
        self.fixed_k(spec).len() as u32 - 2
    }

    /// Whether the element has a nonempty fixed locus on the orbifold.
    pub fn meets_orbifold(&self, spec: &OrbifoldSpec) -> bool {
        self.fixed_e(spec).len() >= 2 && self.fixed_k(spec).len() >= 2
    }

    /// Age on the curve factor: ambient phases minus the equation's phase.
    pub fn age_e(&self, spec: &OrbifoldSpec) -> Q {
        let p = self.phases(spec);
        let amb: Q = p[0..3].iter().sum();
        amb - frac(&(&self.alpha * qi(spec.curve.degree() as i64)))
    }

    pub fn age_k(&self, spec: &OrbifoldSpec) -> Q {
        let p = self.phases(spec);
        let amb: Q = p[3..7].iter().sum();
        amb - frac(&(&self.beta * qi(spec.k3_degree() as i64)))
    }

    pub fn age(&self, spec: &OrbifoldSpec) -> Q {
        self.age_e(spec) + self.age_k(spec)
    }

    /// Sector name: `0`, `sigma`, or `g(α,β,γ)`.
    pub fn label(&self) -> String {
        if self.alpha.is_zero() && self.beta.is_zero() {
            if self.gamma.is_zero() {
                return "0".into();
            }
            return "sigma".into();
        }
        format!("g({},{},{})", fmt_q_short(&self.alpha), fmt_q_short(&self.beta), fmt_q_short(&self.gamma))
    }

    pub fn label_e(&self) -> String {
        match (self.alpha.is_zero(), self.gamma.is_zero()) {
            (true, true) => "0".into(),
            (true, false) => "sigmaE".into(),
            _ => format!("gE({},{})", fmt_q_short(&self.alpha), fmt_q_short(&self.gamma)),
        }
    }

    pub fn label_k(&self) -> String {
        match (self.beta.is_zero(), self.gamma.is_zero()) {
            (true, true) => "0".into(),
            (true, false) => "sigmaK".into(),
            _ => format!("gK({},{})", fmt_q_short(&self.beta), fmt_q_short(&self.gamma)),
        }
    }
}

impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

fn gammas() -> [Q; 2] {
    [Q::zero(), q(1, 2)]
}

/// Curve-side candidates `α` (with `β = 0`) for a given `γ`, having at least
/// two fixed curve coordinates.
pub fn e_sectors(spec: &OrbifoldSpec, gamma: &Q) -> Vec<TorusElement> {
    let mut v: Vec<TorusElement> = (0..12).map(|j| TorusElement::new(q(j, 12), Q::zero(), gamma.clone())).filter(|t| t.fixed_e(spec).len() >= 2).collect();
    v.sort();
    v.dedup();
    v
}

pub fn k_sectors(spec: &OrbifoldSpec, gamma: &Q) -> Vec<TorusElement> {
    let l = spec.k3_weights.iter().fold(1u32, |a, &w| num_integer::lcm(a, w)) as i64;
    let mut v: Vec<TorusElement> = (0..2 * l).map(|j| TorusElement::new(Q::zero(), q(j, 2 * l), gamma.clone())).filter(|t| t.fixed_k(spec).len() >= 2).collect();
    v.sort();
    v.dedup();
    v
}

/// All torus elements whose sectors meet the orbifold.
pub fn orbifold_sectors(spec: &OrbifoldSpec) -> Vec<TorusElement> {
    let mut out = Vec::new();
    for g in gammas() {
        for e in e_sectors(spec, &g) {
            for k in k_sectors(spec, &g) {
                out.push(TorusElement::new(e.alpha.clone(), k.beta.clone(), g.clone()));
            }
        }
    }
    out.sort();
    out
}

/// `D_E^e D_K^k · 1_g`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AmbientClass {
    pub sector: TorusElement,
    pub e: u32,
    pub k: u32,
}

impl AmbientClass {
    /// Real degree `2(age + e + k)`.
    pub fn degree(&self, spec: &OrbifoldSpec) -> Q {
        qi(2) * (self.sector.age(spec) + qi((self.e + self.k) as i64))
    }

    pub fn label(&self) -> String {
        let mono = monomial_label(self.e, self.k);
        if self.sector.label() == "0" {
            if mono.is_empty() {
                "1".into()
            } else {
                mono
            }
        } else if mono.is_empty() {
            format!("1_{}", self.sector.label())
        } else {
            format!("{mono}*1_{}", self.sector.label())
        }
    }
}

pub fn monomial_label(e: u32, k: u32) -> String {
    let mut parts = Vec::new();
    match e {
        0 => {}
        1 => parts.push("D_E".to_string()),
        _ => parts.push(format!("D_E^{e}")),
    }
    match k {
        0 => {}
        1 => parts.push("D_K".to_string()),
        _ => parts.push(format!("D_K^{k}")),
    }
    parts.join("*")
}

/// Label of a one-factor class: bare monomial on the untwisted sector,
/// `1_0` for its unit, `mono*1_<sector>` otherwise.
pub fn factor_class_label(mono: &str, sector: &str) -> String {
    match (mono.is_empty(), sector == "0") {
        (true, _) => format!("1_{sector}"),
        (false, true) => mono.to_string(),
        (false, false) => format!("{mono}*1_{sector}"),
    }
}

pub fn ambient_classes(spec: &OrbifoldSpec) -> Vec<AmbientClass> {
    let mut out = Vec::new();
    for g in orbifold_sectors(spec) {
        for e in 0..=g.max_e(spec) {
            for k in 0..=g.max_k(spec) {
                out.push(AmbientClass { sector: g.clone(), e, k });
            }
        }
    }
    out
}

/// Pairing of ambient classes: the sectors must be mutually inverse and the
/// divisor powers complementary on the common fixed locus. The point class
/// of every fixed locus is normalized to 1.
pub fn ambient_pairing(spec: &OrbifoldSpec, x: &AmbientClass, y: &AmbientClass) -> Q {
    if y.sector != x.sector.inverse() {
        return Q::zero();
    }
    if x.e + y.e == x.sector.max_e(spec) && x.k + y.k == x.sector.max_k(spec) {
        qi(1)
    } else {
        Q::zero()
    }
}
