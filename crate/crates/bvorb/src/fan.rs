//! Stacky fan of the ambient quotient `[(ℂ³ × ℂ⁴ × ℂ*) / (ℂ*)³]`: rays, the
//! Gale-dual weight matrix, Box elements, Mori cone, S-extension, valuation
//! and lattice-point enumeration.
//!
//! Rays are indexed `0..8` for `(X, Y, Z, x, y, z, w, ρ₈)`; S-extension rays
//! follow at `8..8+m`.

use std::collections::HashSet;

use num_traits::{Signed, Zero};

use crate::arith::rational::{ceil_i64, frac, q, qi, Q};
use crate::statespace::ambient::{orbifold_sectors, TorusElement};
use crate::weights::OrbifoldSpec;

pub const NRAYS: usize = 8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FanError {
    #[error("point is not in the extended lattice Λ^S")]
    NotInLambdaS,
    #[error("extension vector has {got} entries, expected {want}")]
    ExtensionLength { got: usize, want: usize },
}

/// `Σ a_i ρ_i` over the rays of one cone, `0 ≤ a_i < 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoxElement {
    pub coeffs: [Q; NRAYS],
    pub torus: TorusElement,
}

impl BoxElement {
    pub fn from_torus(t: &TorusElement, spec: &OrbifoldSpec) -> Self {
        let p = t.phases(spec);
        let coeffs = std::array::from_fn(|i| if i < 7 { p[i].clone() } else { Q::zero() });
        BoxElement { coeffs, torus: t.clone() }
    }

    pub fn label(&self) -> String {
        self.torus.label()
    }

    pub fn is_identity(&self) -> bool {
        self.coeffs.iter().all(|a| a.is_zero())
    }
}

/// Extended lattice point `(a, b, c, k₁..k_m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub a: Q,
    pub b: Q,
    pub c: Q,
    pub k: Vec<u32>,
}

impl LatticePoint {
    pub fn new(a: Q, b: Q, c: Q, k: Vec<u32>) -> Self {
        LatticePoint { a, b, c, k }
    }

    /// Truncation degree `a + b + c + Σ k_j`.
    pub fn novikov_degree(&self) -> Q {
        &self.a + &self.b + &self.c + qi(self.k.iter().map(|&x| x as i64).sum())
    }
}

#[derive(Clone, Debug)]
pub struct StackyFanData {
    pub spec: OrbifoldSpec,
    /// Ray generators in `ℚ⁵` (two curve coordinates, three K3 coordinates).
    pub rho: [[Q; 5]; NRAYS],
    /// Weights of the `(ℂ*)³` action on each coordinate.
    pub weight_matrix: [[i64; NRAYS]; 3],
    /// Extension rays `s_j` with their coefficients `s_{j,i}`.
    pub extension: Vec<BoxElement>,
    /// Representatives of `N / ℤ⁵` as fractional parts.
    quotient: HashSet<[Q; 5]>,
}

fn frac5(v: &[Q; 5]) -> [Q; 5] {
    std::array::from_fn(|i| frac(&v[i]))
}

impl StackyFanData {
    /// Whether `x` lies in the lattice `N` spanned by the rays.
    pub fn in_lattice(&self, x: &[Q; 5]) -> bool {
        self.quotient.contains(&frac5(x))
    }

    /// `Σ a_i ρ_i` over the eight base rays.
    pub fn combine(&self, coeffs: &[Q; NRAYS]) -> [Q; 5] {
        std::array::from_fn(|r| (0..NRAYS).map(|i| &coeffs[i] * &self.rho[i][r]).sum())
    }

    /// Row `i` of the kernel matrix: the `(a, b, c)`-coefficients of `λ_i`.
    pub fn kernel_row(&self, i: usize) -> [i64; 3] {
        [self.weight_matrix[0][i], self.weight_matrix[1][i], self.weight_matrix[2][i]]
    }

    /// Kernel columns pushed through the rays; zero exactly when the weight
    /// matrix is Gale dual to the rays.
    pub fn gale_residual(&self) -> [[Q; 5]; 3] {
        std::array::from_fn(|col| {
            let c: [Q; NRAYS] = std::array::from_fn(|i| qi(self.weight_matrix[col][i]));
            self.combine(&c)
        })
    }

    pub fn m(&self) -> usize {
        self.extension.len()
    }

    /// Coordinates `λ_i` for `i < 8 + m`.
    pub fn lambda(&self, p: &LatticePoint) -> Result<Vec<Q>, FanError> {
        if p.k.len() != self.m() {
            return Err(FanError::ExtensionLength { got: p.k.len(), want: self.m() });
        }
        let mut out = Vec::with_capacity(NRAYS + self.m());
        for i in 0..NRAYS {
            let r = self.kernel_row(i);
            let mut l = &p.a * qi(r[0]) + &p.b * qi(r[1]) + &p.c * qi(r[2]);
            for (j, s) in self.extension.iter().enumerate() {
                l -= &s.coeffs[i] * qi(p.k[j] as i64);
            }
            out.push(l);
        }
        out.extend(p.k.iter().map(|&k| qi(k as i64)));
        Ok(out)
    }

    /// Membership in `Λ^S`: `λ₈` integral and some curve and some K3 ray
    /// outside the supporting cone.
    pub fn in_lambda_s(&self, p: &LatticePoint) -> bool {
        let Ok(l) = self.lambda(p) else { return false };
        l[7].is_integer() && (0..3).any(|i| l[i].is_integer()) && (3..7).any(|i| l[i].is_integer())
    }

    /// `v^S(λ) = Σ ⟨−λ_i⟩ ρ_i`, together with the torus element of its sector.
    pub fn valuation(&self, p: &LatticePoint) -> Result<BoxElement, FanError> {
        if !self.in_lambda_s(p) {
            return Err(FanError::NotInLambdaS);
        }
        let t = self.point_torus(p);
        let l = self.lambda(p)?;
        let coeffs: [Q; NRAYS] = std::array::from_fn(|i| frac(&-&l[i]));
        debug_assert_eq!(BoxElement::from_torus(&t, &self.spec).coeffs, coeffs);
        Ok(BoxElement { coeffs, torus: t })
    }

    /// The torus element `Σ k_j T_j − (a, b, c)` whose phases are `⟨−λ_i⟩`.
    fn point_torus(&self, p: &LatticePoint) -> TorusElement {
        let (mut a, mut b, mut c) = (-&p.a, -&p.b, -&p.c);
        for (j, s) in self.extension.iter().enumerate() {
            let k = qi(p.k[j] as i64);
            a += &s.torus.alpha * &k;
            b += &s.torus.beta * &k;
            c += &s.torus.gamma * &k;
        }
        TorusElement::new(a, b, c)
    }
}

/// Builds the fan with the default S-extension (see [`default_extension`]).
pub fn build_fan(spec: &OrbifoldSpec) -> StackyFanData {
    let mut f = bare_fan(spec);
    f.extension = default_extension(spec);
    f
}

/// The fan with no extension rays.
pub fn bare_fan(spec: &OrbifoldSpec) -> StackyFanData {
    let e = spec.curve.weights().map(|x| x as i64);
    let w = spec.k3_weights.map(|x| x as i64);
    let z = Q::zero;
    let mut rho: [[Q; 5]; NRAYS] = std::array::from_fn(|_| std::array::from_fn(|_| z()));
    rho[0] = [q(-e[1], e[0]), q(-e[2], e[0]), z(), z(), z()];
    rho[1][0] = qi(1);
    rho[2][1] = qi(1);
    rho[3] = [z(), z(), q(-w[1], w[0]), q(-w[2], w[0]), q(-w[3], w[0])];
    rho[4][2] = qi(1);
    rho[5][3] = qi(1);
    rho[6][4] = qi(1);
    rho[7] = std::array::from_fn(|r| -(&rho[0][r] + &rho[3][r]) / qi(2));
    let weight_matrix = [[e[0], e[1], e[2], 0, 0, 0, 0, 0], [0, 0, 0, w[0], w[1], w[2], w[3], 0], [1, 0, 0, 1, 0, 0, 0, 2]];
    let quotient = lattice_quotient(&rho);
    StackyFanData { spec: spec.clone(), rho, weight_matrix, extension: Vec::new(), quotient }
}

/// Closure of the fractional parts of the rays under addition.
fn lattice_quotient(rho: &[[Q; 5]; NRAYS]) -> HashSet<[Q; 5]> {
    let zero: [Q; 5] = std::array::from_fn(|_| Q::zero());
    let mut seen = HashSet::from([zero.clone()]);
    let mut frontier = vec![zero];
    while let Some(v) = frontier.pop() {
        for r in rho {
            let s = frac5(&std::array::from_fn(|i| &v[i] + &r[i]));
            if seen.insert(s.clone()) {
                frontier.push(s);
            }
        }
    }
    seen
}

/// Extension rays: the untwisted-involution sectors of age one other than
/// the identity, i.e. the degree-two classes `1_g` coming from the K3 factor.
pub fn default_extension(spec: &OrbifoldSpec) -> Vec<BoxElement> {
    enumerate_box(spec).into_iter().filter(|b| b.torus.gamma.is_zero() && !b.is_identity() && b.torus.age(spec) == qi(1)).collect()
}

/// Box elements whose sectors meet the orbifold, identity first.
pub fn enumerate_box(spec: &OrbifoldSpec) -> Vec<BoxElement> {
    orbifold_sectors(spec).iter().map(|t| BoxElement::from_torus(t, spec)).collect()
}

/// Full Box of the ambient stack by scanning fractional combinations over
/// every maximal cone. Slow; used to cross-check [`enumerate_box`].
pub fn enumerate_box_full(fan: &StackyFanData, denom: i64) -> Vec<[Q; NRAYS]> {
    // Work in integers scaled by S so that every candidate sum is integral.
    let base = fan.rho.iter().flatten().chain(fan.quotient.iter().flatten()).fold(1i64, |l, x| num_integer::lcm(l, i64::try_from(x.denom().clone()).unwrap()));
    let s = base * denom;
    let scaled = |x: &Q| -> i64 { (x * qi(s)).to_integer().try_into().unwrap() };
    let quotient: HashSet<[i64; 5]> = fan.quotient.iter().map(|v| std::array::from_fn(|i| scaled(&v[i]))).collect();
    let rho: Vec<[i64; 5]> = fan.rho.iter().map(|r| std::array::from_fn(|i| scaled(&r[i]) / denom)).collect();
    let mut out = HashSet::new();
    for skip_e in 0..3 {
        for skip_k in 3..7 {
            let rays: Vec<usize> = (0..7).filter(|&i| i != skip_e && i != skip_k).collect();
            let total = (denom as usize).pow(rays.len() as u32);
            for code in 0..total {
                let mut js = [0i64; NRAYS];
                let mut x = code;
                for &r in &rays {
                    js[r] = (x % denom as usize) as i64;
                    x /= denom as usize;
                }
                let v: [i64; 5] = std::array::from_fn(|c| (0..NRAYS).map(|i| js[i] * rho[i][c]).sum::<i64>().rem_euclid(s));
                if quotient.contains(&v) {
                    out.insert(std::array::from_fn(|i| q(js[i], denom)));
                }
            }
        }
    }
    let mut v: Vec<[Q; NRAYS]> = out.into_iter().collect();
    v.sort();
    v
}

/// Whether a Box element (given by its coefficients) meets the orbifold:
/// at least two curve and two K3 coordinates fixed.
pub fn box_meets_orbifold(c: &[Q; NRAYS]) -> bool {
    (0..3).filter(|&i| c[i].is_zero()).count() >= 2 && (3..7).filter(|&i| c[i].is_zero()).count() >= 2
}

/// `c ≥ 0`, `e₁a + c ≥ 0`, `w₀b + c ≥ 0`.
pub fn mori_contains(a: &Q, b: &Q, c: &Q, spec: &OrbifoldSpec) -> bool {
    let e1 = qi(spec.curve.weights()[0] as i64);
    let w0 = qi(spec.w0() as i64);
    !c.is_negative() && !(e1 * a + c).is_negative() && !(w0 * b + c).is_negative()
}

/// Points of `ΛE_b` with Novikov degree at most `bound`, in lexicographic
/// order of `(degree, k, c, a, b)`.
pub fn enumerate_lambda_e(fan: &StackyFanData, target: &BoxElement, bound: &Q) -> Vec<LatticePoint> {
    let spec = &fan.spec;
    let e1 = qi(spec.curve.weights()[0] as i64);
    let w0 = qi(spec.w0() as i64);
    let m = fan.m();
    let kmax = bound.floor().to_integer().try_into().unwrap_or(0i64).max(0) as u32;
    let mut out = Vec::new();
    for k in k_vectors(m, kmax) {
        let ksum = qi(k.iter().map(|&x| x as i64).sum());
        // (a, b, c) ≡ Σ k_j T_j − T_b (mod ℤ³).
        let mut base = (-&target.torus.alpha, -&target.torus.beta, -&target.torus.gamma);
        for (j, s) in fan.extension.iter().enumerate() {
            let kj = qi(k[j] as i64);
            base.0 += &s.torus.alpha * &kj;
            base.1 += &s.torus.beta * &kj;
            base.2 += &s.torus.gamma * &kj;
        }
        let (a0, b0, c0) = (frac(&base.0), frac(&base.1), frac(&base.2));
        let mut c = c0;
        while &c + &ksum <= *bound {
            // smallest a ≡ a0 with e₁a + c ≥ 0, likewise b
            let amin = &a0 + qi(ceil_i64(&(-(&c / &e1) - &a0)));
            let bmin = &b0 + qi(ceil_i64(&(-(&c / &w0) - &b0)));
            let mut a = amin;
            while &a + &bmin + &c + &ksum <= *bound {
                let mut b = bmin.clone();
                while &a + &b + &c + &ksum <= *bound {
                    let p = LatticePoint::new(a.clone(), b.clone(), c.clone(), k.clone());
                    if fan.in_lambda_s(&p) {
                        out.push(p);
                    }
                    b += qi(1);
                }
                a += qi(1);
            }
            c += qi(1);
        }
    }
    out.sort_by(|x, y| (x.novikov_degree(), &x.k, &x.c, &x.a, &x.b).cmp(&(y.novikov_degree(), &y.k, &y.c, &y.a, &y.b)));
    out
}

fn k_vectors(m: usize, max_sum: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..m {
        let mut next = Vec::new();
        for v in &out {
            let s: u32 = v.iter().sum();
            for x in 0..=(max_sum - s) {
                let mut w = v.clone();
                w.push(x);
                next.push(w);
            }
        }
        out = next;
    }
    out
}
