//! GW I-function terms of the orbifold, from the twisted toric I-function of
//! the ambient stack.

use num_traits::{One, Zero};

use super::{sort_terms, CohomElement, CohomKey, ISeriesTerm, IseriesError, TermIndex};
use crate::arith::gamma_ratio::{pochhammer_collapse, GammaPair, GammaRatioForm};
use crate::arith::mp::{mp_gamma, Complex};
use crate::arith::poly::{Caps, Poly};
use crate::arith::rational::{ceil_i64, factorial, frac, is_integer, qi, to_i64, Q};
use crate::arith::ArithError;
use crate::fan::{build_fan, enumerate_box, enumerate_lambda_e, BoxElement, LatticePoint, StackyFanData, NRAYS};
use crate::statespace::ambient::{AmbientClass, TorusElement};
use crate::statespace::Theory;
use crate::weights::OrbifoldSpec;

/// Symbol indices: `u_E = D_E/z`, `u_K = D_K/z`.
pub const U_E: usize = 0;
pub const U_K: usize = 1;
pub const NSYM: usize = 2;

/// `D_i/z` as a linear form in `(u_E, u_K)`; zero for `ρ₈` and extension rays.
pub fn ray_linear(spec: &OrbifoldSpec, i: usize) -> Vec<Q> {
    let e = spec.curve.weights();
    let w = spec.k3_weights;
    match i {
        0..=2 => vec![qi(e[i] as i64), Q::zero()],
        3..=6 => vec![Q::zero(), qi(w[i - 3] as i64)],
        _ => vec![Q::zero(), Q::zero()],
    }
}

/// `z^{−⌈λ⌉} Γ(u + ⟨⟨λ⟩⟩) / Γ(u + λ + 1)` as a Gamma pair; the `z`-power is
/// `sign · shift`.
pub fn coordinate_pair(linear: Vec<Q>, lambda: &Q) -> GammaPair {
    let offset = Q::one() - frac(&-lambda);
    GammaPair { linear, offset, shift: qi(ceil_i64(lambda)), sign: -1 }
}

/// `∏_{l=1}^{n} (D_W + l z) = z^n Γ(u_W + n + 1) / Γ(u_W + 1)`.
pub fn bundle_pair(linear: Vec<Q>, n: &Q) -> Result<GammaPair, IseriesError> {
    if !is_integer(n) {
        return Err(IseriesError::NonIntegralBundle(n.to_string()));
    }
    Ok(GammaPair { linear, offset: Q::one(), shift: n.clone(), sign: 1 })
}

/// Degrees of the two bundle factors: `d_E a + 2c` and `2w₀ b + 2c`.
pub fn bundle_degrees(spec: &OrbifoldSpec, p: &LatticePoint) -> (Q, Q) {
    let de = qi(spec.curve.degree() as i64);
    let dk = qi(spec.k3_degree() as i64);
    (de * &p.a + qi(2) * &p.c, dk * &p.b + qi(2) * &p.c)
}

fn scaled(v: &[Q], c: i64) -> Vec<Q> {
    v.iter().map(|x| x * qi(c)).collect()
}

/// Curve-side pairs: coordinates `X, Y, Z` and the curve equation's bundle.
pub fn e_side_pairs(fan: &StackyFanData, p: &LatticePoint) -> Result<Vec<GammaPair>, IseriesError> {
    let l = fan.lambda(p)?;
    let spec = &fan.spec;
    let mut out: Vec<GammaPair> = (0..3).map(|i| coordinate_pair(ray_linear(spec, i), &l[i])).collect();
    let ue = vec![qi(1), Q::zero()];
    out.push(bundle_pair(scaled(&ue, spec.curve.degree() as i64), &bundle_degrees(spec, p).0)?);
    Ok(out)
}

/// K3-side pairs: coordinates `x, y, z, w`, extension rays, and the K3
/// equation's bundle. Shared verbatim by the pure GW and FJRW-GW terms.
pub fn k_side_pairs(fan: &StackyFanData, p: &LatticePoint) -> Result<Vec<GammaPair>, IseriesError> {
    let l = fan.lambda(p)?;
    let spec = &fan.spec;
    let mut out: Vec<GammaPair> = (3..7).map(|i| coordinate_pair(ray_linear(spec, i), &l[i])).collect();
    for li in &l[NRAYS..] {
        out.push(coordinate_pair(vec![Q::zero(), Q::zero()], li));
    }
    let uk = vec![Q::zero(), qi(1)];
    out.push(bundle_pair(scaled(&uk, spec.k3_degree() as i64), &bundle_degrees(spec, p).1)?);
    Ok(out)
}

/// Gamma-ratio form of one GW term with its sector.
#[derive(Clone, Debug)]
pub struct GwForm {
    pub point: LatticePoint,
    pub sector: TorusElement,
    pub form: GammaRatioForm,
}

impl GwForm {
    /// `1 + Σ sign · shift`.
    pub fn z_exponent(&self) -> i64 {
        1 + self.form.factors.iter().map(|f| f.sign as i64 * to_i64(&f.shift).unwrap_or(0)).sum::<i64>()
    }
}

pub fn gw_form(fan: &StackyFanData, p: &LatticePoint) -> Result<GwForm, IseriesError> {
    let b = fan.valuation(p)?;
    if !b.torus.meets_orbifold(&fan.spec) {
        return Err(IseriesError::NotOverOrbifold);
    }
    let l = fan.lambda(p)?;
    let mut form = GammaRatioForm::new(NSYM);
    for pair in e_side_pairs(fan, p)? {
        form.push(pair);
    }
    for pair in k_side_pairs(fan, p)? {
        form.push(pair);
    }
    form.push(coordinate_pair(vec![Q::zero(), Q::zero()], &l[7]));
    Ok(GwForm { point: p.clone(), sector: b.torus, form })
}

pub fn sector_caps(spec: &OrbifoldSpec, t: &TorusElement) -> Caps {
    vec![Some(t.max_e(spec)), Some(t.max_k(spec))]
}

/// Coefficient entries of a polynomial in `(u_E, u_K)` on an ambient sector.
pub fn ambient_entries(poly: &Poly, sector: &TorusElement) -> CohomElement {
    let mut c = CohomElement::default();
    for (m, v) in poly.terms() {
        let cls = AmbientClass { sector: sector.clone(), e: m[0], k: m[1] };
        c.add(CohomKey { label: cls.label(), sector: sector.label(), e: m[0], k: m[1] }, v.clone());
    }
    c
}

pub fn novikov_of(p: &LatticePoint) -> Vec<(String, Q)> {
    let mut v = vec![("q1".to_string(), p.a.clone()), ("q2".to_string(), p.b.clone()), ("q3".to_string(), p.c.clone())];
    for (j, k) in p.k.iter().enumerate() {
        v.push((format!("x{}", j + 1), qi(*k as i64)));
    }
    v
}

pub fn term_from_form(fan: &StackyFanData, f: &GwForm) -> Result<ISeriesTerm, IseriesError> {
    let spec = &fan.spec;
    let poly = pochhammer_collapse(&f.form, &sector_caps(spec, &f.sector))?;
    Ok(ISeriesTerm {
        theory: Theory::Gw,
        index: TermIndex::Lattice(f.point.clone()),
        z_exponent: f.z_exponent(),
        coefficient: ambient_entries(&poly, &f.sector),
        novikov: novikov_of(&f.point),
        sector: f.sector.label(),
        sector_degree: f.sector.age(spec),
        broad: false,
        degree: f.point.novikov_degree(),
    })
}

pub fn gw_term(fan: &StackyFanData, p: &LatticePoint) -> Result<ISeriesTerm, IseriesError> {
    term_from_form(fan, &gw_form(fan, p)?)
}

/// All GW terms with Novikov degree at most `bound`.
pub fn gw_terms(spec: &OrbifoldSpec, bound: u32) -> Result<Vec<ISeriesTerm>, IseriesError> {
    let fan = build_fan(spec);
    let mut out = Vec::new();
    for b in enumerate_box(spec) {
        for p in enumerate_lambda_e(&fan, &b, &qi(bound as i64)) {
            out.push(gw_term(&fan, &p)?);
        }
    }
    sort_terms(&mut out);
    Ok(out)
}

/// The defining product form: for each coordinate
/// `∏_{⟨d⟩=⟨λ⟩, d≤0} (D + dz) / ∏_{⟨d⟩=⟨λ⟩, d≤λ} (D + dz)`, times the bundle
/// products. Returns the overall `z`-power (including the leading `z`) and
/// the polynomial in `D/z`.
pub fn gw_term_direct(fan: &StackyFanData, p: &LatticePoint) -> Result<(i64, Poly, TorusElement), IseriesError> {
    let spec = &fan.spec;
    let b = fan.valuation(p)?;
    let caps = sector_caps(spec, &b.torus);
    let l = fan.lambda(p)?;
    let mut num = Poly::one(NSYM);
    let mut den = Poly::one(NSYM);
    let mut zpow = 1i64;
    for (i, li) in l.iter().enumerate() {
        let lin = ray_linear(spec, i);
        let f = frac(li);
        if li.is_zero() || (li < &Q::zero() && li > &-Q::one()) {
            continue;
        }
        if li > &Q::zero() {
            let mut d = if f.is_zero() { qi(1) } else { f.clone() };
            while &d <= li {
                den = den.mul(&Poly::linear(d.clone(), &lin), &caps);
                zpow -= 1;
                d += qi(1);
            }
        } else {
            // d ranges over (λ, 0] with d ≡ λ
            let mut d = li + qi(1);
            while d <= Q::zero() {
                num = num.mul(&Poly::linear(d.clone(), &lin), &caps);
                zpow += 1;
                d += qi(1);
            }
        }
    }
    let (ne, nk) = bundle_degrees(spec, p);
    for (n, lin) in [(ne, vec![qi(spec.curve.degree() as i64), Q::zero()]), (nk, vec![Q::zero(), qi(spec.k3_degree() as i64)])] {
        let n = to_i64(&n).ok_or_else(|| IseriesError::NonIntegralBundle(n.to_string()))?;
        for k in 1..=n {
            num = num.mul(&Poly::linear(qi(k), &lin), &caps);
            zpow += 1;
        }
    }
    Ok((zpow, num.mul(&den.inverse(&caps)?, &caps), b.torus))
}

/// Every term has `z_exponent + deg(1_b) = 1`. Returns the index of the first
/// violating term.
pub fn homogeneity_check(terms: &[ISeriesTerm]) -> Result<(), usize> {
    for (i, t) in terms.iter().enumerate() {
        if qi(t.z_exponent) + &t.sector_degree != qi(1) {
            return Err(i);
        }
    }
    Ok(())
}

/// A product `z^{z_power} ∏ Γ(L + arg)^{power}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaProduct {
    pub factors: Vec<(Vec<Q>, Q, i32)>,
    pub z_power: Q,
    /// Extra rational factor (factorials).
    pub scalar: Q,
}

impl GammaProduct {
    fn new() -> Self {
        GammaProduct { factors: Vec::new(), z_power: Q::zero(), scalar: Q::one() }
    }

    pub fn mul(&self, o: &GammaProduct) -> GammaProduct {
        let mut f = self.factors.clone();
        f.extend(o.factors.iter().cloned());
        GammaProduct { factors: f, z_power: &self.z_power + &o.z_power, scalar: &self.scalar * &o.scalar }
    }

    /// Pairs each numerator Gamma with a denominator Gamma of the same
    /// linear form whose argument differs by an integer.
    pub fn to_ratio_form(&self) -> Option<GammaRatioForm> {
        let mut nums: Vec<(Vec<Q>, Q)> = Vec::new();
        let mut dens: Vec<(Vec<Q>, Q)> = Vec::new();
        for (l, a, p) in &self.factors {
            for _ in 0..p.unsigned_abs() {
                if *p > 0 {
                    nums.push((l.clone(), a.clone()));
                } else {
                    dens.push((l.clone(), a.clone()));
                }
            }
        }
        let nsym = self.factors.first().map(|f| f.0.len()).unwrap_or(NSYM);
        let mut form = GammaRatioForm::new(nsym);
        for (l, a) in nums {
            let j = dens.iter().position(|(l2, a2)| *l2 == l && is_integer(&(&a - a2)))?;
            let (_, a2) = dens.remove(j);
            form.push_ratio(l, a, a2);
        }
        if !dens.is_empty() {
            return None;
        }
        Some(form)
    }

    /// Numerical value with all symbols set to zero; a reciprocal Gamma at a
    /// pole gives zero, a Gamma at a pole is an error.
    pub fn scalar_value(&self, prec: usize) -> Result<Complex, IseriesError> {
        let mut v = Complex::from_q(&self.scalar, prec);
        for (_, a, p) in &self.factors {
            if is_integer(a) && *a <= Q::zero() {
                if *p > 0 {
                    return Err(ArithError::PoleAtNonPositiveInteger.into());
                }
                return Ok(Complex::zero(prec));
            }
            let g = mp_gamma(&Complex::from_q(a, prec))?;
            for _ in 0..p.unsigned_abs() {
                v = if *p > 0 { v.mul(&g) } else { v.div(&g) };
            }
        }
        Ok(v)
    }
}

/// The sector-dependent prefactors `K_b` (curve) and `L_b` (K3):
/// `K_b = z^{−Σ_E b_i} ∏_E Γ(u_i + 1 − b_i) / Γ(d_E u_E + 1)`, likewise `L_b`.
pub fn gw_prefactors(b: &BoxElement, spec: &OrbifoldSpec) -> (GammaProduct, GammaProduct) {
    let mut k = GammaProduct::new();
    let mut l = GammaProduct::new();
    for i in 0..7 {
        let side = if i < 3 { &mut k } else { &mut l };
        side.factors.push((ray_linear(spec, i), Q::one() - &b.coeffs[i], 1));
        side.z_power -= &b.coeffs[i];
    }
    k.factors.push((vec![qi(spec.curve.degree() as i64), Q::zero()], Q::one(), -1));
    l.factors.push((vec![Q::zero(), qi(spec.k3_degree() as i64)], Q::one(), -1));
    (k, l)
}

/// Point-dependent factors `F(a, c)` (curve, including `1/(2c)!`) and
/// `G(b, c, k)` (K3, including `1/∏ k_j!`).
pub fn gw_point_factors(fan: &StackyFanData, p: &LatticePoint) -> Result<(GammaProduct, GammaProduct), IseriesError> {
    let spec = &fan.spec;
    let l = fan.lambda(p)?;
    let (ne, nk) = bundle_degrees(spec, p);
    let mut f = GammaProduct::new();
    let mut g = GammaProduct::new();
    f.factors.push((vec![qi(spec.curve.degree() as i64), Q::zero()], &ne + qi(1), 1));
    f.z_power += &ne;
    g.factors.push((vec![Q::zero(), qi(spec.k3_degree() as i64)], &nk + qi(1), 1));
    g.z_power += &nk;
    for (i, li) in l.iter().enumerate().take(7) {
        let side = if i < 3 { &mut f } else { &mut g };
        side.factors.push((ray_linear(spec, i), li + qi(1), -1));
        side.z_power -= li;
    }
    let two_c = to_i64(&(qi(2) * &p.c)).expect("2c integral");
    f.scalar /= Q::from_integer(factorial(two_c as u64));
    f.z_power -= qi(two_c);
    for k in &p.k {
        g.scalar /= Q::from_integer(factorial(*k as u64));
        g.z_power -= qi(*k as i64);
    }
    Ok((f, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::q;
    use crate::iseries::fmt_point;

    fn s311() -> OrbifoldSpec {
        OrbifoldSpec::quartic([3, 1, 1, 1])
    }

    #[test]
    fn leading_term() {
        let fan = build_fan(&s311());
        let t = gw_term(&fan, &LatticePoint::new(qi(0), qi(0), qi(0), vec![])).unwrap();
        assert_eq!(t.z_exponent, 1);
        assert_eq!(t.coefficient.get("1"), qi(1));
        assert_eq!(t.coefficient.entries.len(), 1);
    }

    #[test]
    fn degree_one_matches_direct() {
        let fan = build_fan(&s311());
        let p = LatticePoint::new(qi(1), qi(0), qi(0), vec![]);
        let t = gw_term(&fan, &p).unwrap();
        let (z, poly, _) = gw_term_direct(&fan, &p).unwrap();
        assert_eq!(t.z_exponent, z);
        // Γ(4u+5)/(Γ(2u+3)Γ(u+2)²) at u = 0 is 24/(2·1·1) = 12
        assert_eq!(t.coefficient.get("1"), qi(12));
        assert_eq!(poly.coeff(&[0, 0]), qi(12));
    }

    #[test]
    fn sigma_term() {
        let fan = build_fan(&s311());
        let t = gw_term(&fan, &LatticePoint::new(qi(0), qi(0), q(1, 2), vec![])).unwrap();
        assert_eq!(t.z_exponent, 0);
        assert_eq!(t.sector, "sigma");
        assert!(homogeneity_check(std::slice::from_ref(&t)).is_ok());
    }

    #[test]
    fn prefactors_regroup() {
        let spec = s311();
        let fan = build_fan(&spec);
        for b in enumerate_box(&spec) {
            let (k, l) = gw_prefactors(&b, &spec);
            for p in enumerate_lambda_e(&fan, &b, &qi(2)) {
                let (f, g) = gw_point_factors(&fan, &p).unwrap();
                let all = k.mul(&l).mul(&f).mul(&g);
                assert!(all.z_power.is_integer());
                let t = gw_term(&fan, &p).unwrap();
                assert_eq!(qi(1) + &all.z_power, qi(t.z_exponent));
                let poly = pochhammer_collapse(&all.to_ratio_form().unwrap(), &sector_caps(&spec, &b.torus)).unwrap().scale(&all.scalar);
                assert_eq!(ambient_entries(&poly, &b.torus), t.coefficient);
                if let Ok(num) = all.scalar_value(128) {
                    let exact = Complex::from_q(&poly.constant_term(), 128);
                    assert!(num.dist(&exact).to_f64() <= 1e-30 * (1.0 + exact.abs().to_f64()));
                }
            }
        }
    }

    #[test]
    fn homogeneous_all_specs_low_degree() {
        for spec in OrbifoldSpec::all() {
            let terms = gw_terms(&spec, 2).unwrap();
            assert!(homogeneity_check(&terms).is_ok(), "{}", spec.label());
        }
    }

    #[test]
    fn oracle_agrees_311() {
        let spec = s311();
        let fan = build_fan(&spec);
        let mut count = 0;
        for b in enumerate_box(&spec) {
            for p in enumerate_lambda_e(&fan, &b, &qi(3)) {
                let t = gw_term(&fan, &p).unwrap();
                let (z, poly, sector) = gw_term_direct(&fan, &p).unwrap();
                assert_eq!(t.z_exponent, z);
                assert_eq!(ambient_entries(&poly, &sector), t.coefficient, "{}", fmt_point(&p));
                count += 1;
            }
        }
        assert!(count > 20);
    }

    #[test]
    fn dropping_a_pair_breaks_homogeneity() {
        let fan = build_fan(&s311());
        let p = LatticePoint::new(qi(1), qi(1), q(1, 2), vec![]);
        let mut f = gw_form(&fan, &p).unwrap();
        assert!(homogeneity_check(&[term_from_form(&fan, &f).unwrap()]).is_ok());
        f.form.factors.pop();
        assert!(homogeneity_check(&[term_from_form(&fan, &f).unwrap()]).is_err());
    }
}
