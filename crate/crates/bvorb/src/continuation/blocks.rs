//! Block matrices with Laurent-polynomial entries in `z`, assembly of the
//! continuation matrices, and the symplectic check.

use std::collections::BTreeMap;

use super::residue::{class_column, classes, ClassInfo, SideParams};
use super::{ContinuationError, Side};
use crate::arith::mp::{mp_gamma_real, pi, Complex, Real};
use crate::arith::rational::q;
use crate::statespace::ambient::{factor_class_label, monomial_label, AmbientClass, TorusElement};
use crate::weights::OrbifoldSpec;

/// `Σ_k a_k z^k`.
#[derive(Clone, Debug, Default)]
pub struct Laurent(pub BTreeMap<i64, Complex>);

impl Laurent {
    pub fn monomial(k: i64, a: Complex) -> Laurent {
        Laurent(BTreeMap::from([(k, a)]))
    }

    pub fn mul(&self, o: &Laurent) -> Laurent {
        let mut out: BTreeMap<i64, Complex> = BTreeMap::new();
        for (i, a) in &self.0 {
            for (j, b) in &o.0 {
                let v = a.mul(b);
                match out.get_mut(&(i + j)) {
                    Some(x) => *x = x.add(&v),
                    None => {
                        out.insert(i + j, v);
                    }
                }
            }
        }
        Laurent(out)
    }

    pub fn add(&self, o: &Laurent) -> Laurent {
        let mut out = self.0.clone();
        for (k, v) in &o.0 {
            match out.get_mut(k) {
                Some(x) => *x = x.add(v),
                None => {
                    out.insert(*k, v.clone());
                }
            }
        }
        Laurent(out)
    }

    /// `a(−z)`.
    pub fn negate_z(&self) -> Laurent {
        Laurent(self.0.iter().map(|(k, v)| (*k, if k % 2 != 0 { v.neg() } else { v.clone() })).collect())
    }

    pub fn coeff(&self, k: i64, p: usize) -> Complex {
        self.0.get(&k).cloned().unwrap_or_else(|| Complex::zero(p))
    }
}

/// One block: columns are FJRW-side classes, rows are GW-side classes.
/// Both bases are ordered so that their pairings are anti-diagonal.
#[derive(Clone, Debug)]
pub struct Block {
    pub name: String,
    pub sources: Vec<String>,
    pub targets: Vec<String>,
    pub entries: Vec<Vec<Laurent>>,
    /// `z`-exponent of the FJRW-side term minus that of the continued GW
    /// term, per column.
    pub z_shift: Vec<i64>,
    /// `e^{k z}` carried by the whole block.
    pub exp_z: i64,
    /// Closed-form value of `M(−z)ᵀ Η M(z)` relative to the source pairing,
    /// when one is known.
    pub expected_scale: Option<Complex>,
}

impl Block {
    pub fn size(&self) -> (usize, usize) {
        (self.targets.len(), self.sources.len())
    }

    /// Copy with entry `(row, col)` multiplied by `1 + rel`.
    pub fn perturbed(&self, row: usize, col: usize, rel: f64) -> Block {
        let mut b = self.clone();
        let e = &mut b.entries[row][col];
        for v in e.0.values_mut() {
            let p = v.precision();
            *v = v.mul(&Complex::from_real(Real::one(p).add(&Real::from_f64(rel, p))));
        }
        b
    }

    /// Kronecker product; the source pairing of the product is again
    /// anti-diagonal.
    pub fn kron(&self, o: &Block, name: String, sources: Vec<String>, targets: Vec<String>) -> Block {
        let (r1, c1) = self.size();
        let (r2, c2) = o.size();
        let mut entries = vec![vec![Laurent::default(); c1 * c2]; r1 * r2];
        for i in 0..r1 {
            for j in 0..c1 {
                for k in 0..r2 {
                    for l in 0..c2 {
                        entries[i * r2 + k][j * c2 + l] = self.entries[i][j].mul(&o.entries[k][l]);
                    }
                }
            }
        }
        let z_shift = self.z_shift.iter().flat_map(|a| o.z_shift.iter().map(move |b| a + b)).collect();
        let expected_scale = match (&self.expected_scale, &o.expected_scale) {
            (Some(a), Some(b)) => Some(a.mul(b)),
            _ => None,
        };
        Block { name, sources, targets, entries, z_shift, exp_z: self.exp_z + o.exp_z, expected_scale }
    }
}

#[derive(Clone, Debug)]
pub struct BlockMatrix {
    pub side: Side,
    pub spec: String,
    pub blocks: Vec<Block>,
}

impl BlockMatrix {
    pub fn block(&self, name: &str) -> Option<&Block> {
        self.blocks.iter().find(|b| b.name == name)
    }
}

fn target_label(sp: &SideParams, info: &ClassInfo, r: u32) -> String {
    if sp.curve {
        factor_class_label(&monomial_label(r, 0), &info.sector.label_e())
    } else {
        factor_class_label(&monomial_label(0, r), &info.sector.label_k())
    }
}

/// `π A_{1/4} A_{3/4}` with `Γ(7/4) = ¾ √2 π / Γ(1/4)`: the determinant of
/// the untwisted curve block.
fn curve_untwisted_scale(p: usize) -> Complex {
    let pr = pi(p);
    let g14 = mp_gamma_real(&q(1, 4), p).expect("Γ(1/4)");
    let g54 = g14.div_i(4);
    let g74 = Real::from_i64(2, p).sqrt().mul(&pr).mul_i(3).div_i(4).div(&g14);
    let prod = g54.mul(&g74);
    // A_{1/4} A_{3/4} = −(1/64π³) Γ(5/4)² Γ(7/4)²
    let aa = prod.mul(&prod).div(&pr.powi(3).mul_i(64)).neg();
    Complex::from_real(aa.mul(&pr))
}

/// Square of the twisted curve entry `i/32`.
fn curve_twisted_scale(p: usize) -> Complex {
    Complex::from_q(&q(-1, 1024), p)
}

/// Blocks of one factor, untwisted first.
pub fn side_blocks(sp: &SideParams, spec: &OrbifoldSpec, p: usize) -> Result<Vec<Block>, ContinuationError> {
    let mut out = Vec::new();
    for twisted in [false, true] {
        let cls: Vec<ClassInfo> = classes(sp, spec).into_iter().filter(|c| c.twisted == twisted).collect();
        if cls.is_empty() {
            continue;
        }
        let rows = cls.len();
        let mut entries = vec![vec![Laurent::default(); cls.len()]; rows];
        for (j, info) in cls.iter().enumerate() {
            let col = class_column(sp, info, p)?;
            if col.order() + 1 != rows {
                return Err(ContinuationError::DimensionMismatch(format!("class {} has {} rows, block {}", info.word, col.order() + 1, rows)));
            }
            for (r, v) in col.c.iter().enumerate() {
                entries[r][j] = Laurent::monomial(-info.z_shift - r as i64, v.clone());
            }
        }
        let targets = (0..rows as u32).map(|r| target_label(sp, &cls[0], r)).collect();
        let expected_scale = match (sp.curve, twisted) {
            (true, false) => Some(curve_untwisted_scale(p)),
            (true, true) => Some(curve_twisted_scale(p)),
            _ => None,
        };
        out.push(Block {
            name: format!("{}:{}", sp.label(), if twisted { "sigma" } else { "untwisted" }),
            sources: cls.iter().map(|c| format!("phi[{}]", c.word)).collect(),
            targets,
            entries,
            z_shift: cls.iter().map(|c| c.z_shift).collect(),
            exp_z: 0,
            expected_scale,
        });
    }
    Ok(out)
}

fn strip_sigma(w: &str) -> &str {
    w.strip_prefix("phi[").and_then(|s| s.strip_suffix(']')).map(|s| s.trim_start_matches('s')).unwrap_or(w)
}

fn both_blocks(spec: &OrbifoldSpec, p: usize) -> Result<Vec<Block>, ContinuationError> {
    let e = side_blocks(&SideParams::curve(spec)?, spec, p)?;
    let k = side_blocks(&SideParams::k3(spec)?, spec, p)?;
    let mut out = Vec::new();
    for (be, bk, twisted) in [(&e[0], &k[0], false), (&e[1], &k[1], true)] {
        let sources =
            be.sources.iter().flat_map(|a| bk.sources.iter().map(move |b| format!("phi[{}{}{}]", if twisted { "s" } else { "" }, strip_sigma(a), strip_sigma(b)))).collect();
        let sector = if twisted { TorusElement::sigma() } else { TorusElement::identity() };
        let (re, rk) = (be.targets.len() as u32, bk.targets.len() as u32);
        let targets = (0..re).flat_map(|ei| (0..rk).map(move |ki| (ei, ki))).map(|(ei, ki)| AmbientClass { sector: sector.clone(), e: ei, k: ki }.label()).collect();
        let name = format!("EK:{}", if twisted { "sigma" } else { "untwisted" });
        out.push(be.kron(bk, name, sources, targets));
    }
    Ok(out)
}

/// The continuation matrix of one side, or of both (Kronecker products of
/// the matching sector blocks).
pub fn assemble_u(side: Side, spec: &OrbifoldSpec, p: usize) -> Result<BlockMatrix, ContinuationError> {
    let blocks = match side {
        Side::E => side_blocks(&SideParams::curve(spec)?, spec, p)?,
        Side::K => side_blocks(&SideParams::k3(spec)?, spec, p)?,
        Side::Both => both_blocks(spec, p)?,
    };
    Ok(BlockMatrix { side, spec: spec.label(), blocks })
}

#[derive(Clone, Debug)]
pub struct BlockReport {
    pub name: String,
    pub size: usize,
    /// Pairing normalization of source `i` against source `n−1−i`.
    pub scales: Vec<Complex>,
    /// `closed-form` or `fitted`.
    pub scale_source: &'static str,
    pub deviation: Real,
}

#[derive(Clone, Debug)]
pub struct SymplecticReport {
    pub blocks: Vec<BlockReport>,
    pub max_deviation: Real,
    pub passed: bool,
}

fn check_block(b: &Block, p: usize) -> Result<BlockReport, ContinuationError> {
    let n = b.sources.len();
    if b.targets.len() != n || b.entries.len() != n || b.entries.iter().any(|r| r.len() != n) {
        return Err(ContinuationError::DimensionMismatch(format!("block {} is {}x{}", b.name, b.targets.len(), n)));
    }
    let mut g = vec![vec![Laurent::default(); n]; n];
    for (i, gi) in g.iter_mut().enumerate() {
        for (j, gij) in gi.iter_mut().enumerate() {
            for r in 0..n {
                *gij = gij.add(&b.entries[r][i].negate_z().mul(&b.entries[n - 1 - r][j]));
            }
        }
    }
    // One normalization per dual pair of sources; the pair (i, n−1−i) and
    // its transpose must agree.
    let (scales, source) = match &b.expected_scale {
        Some(s) => (vec![s.clone(); n], "closed-form"),
        None => ((0..n).map(|i| g[i.min(n - 1 - i)][n - 1 - i.min(n - 1 - i)].coeff(0, p)).collect(), "fitted"),
    };
    let norm = scales.iter().map(|s| s.abs()).fold(Real::zero(p), |a, b| if b.cmp(&a).is_gt() { b } else { a });
    if scales.iter().any(|s| s.abs().is_zero()) {
        return Err(ContinuationError::DimensionMismatch(format!("block {} is degenerate", b.name)));
    }
    let mut dev = Real::zero(p);
    for (i, gi) in g.iter().enumerate() {
        for (j, gij) in gi.iter().enumerate() {
            let mut powers: Vec<i64> = gij.0.keys().copied().collect();
            powers.push(0);
            for k in powers {
                let want = if k == 0 && j == n - 1 - i { scales[i].clone() } else { Complex::zero(p) };
                let d = gij.coeff(k, p).dist(&want).div(&norm);
                if d.cmp(&dev).is_gt() {
                    dev = d;
                }
            }
        }
    }
    Ok(BlockReport { name: b.name.clone(), size: n, scales, scale_source: source, deviation: dev })
}

/// Checks `M(−z)ᵀ Η M(z) = s Η'` block by block, with `Η`, `Η'` the
/// anti-diagonal pairings of target and source bases and `s` the closed-form
/// normalization when known (fitted per dual pair otherwise).
pub fn check_symplectic(u: &BlockMatrix, tol: &Real) -> Result<SymplecticReport, ContinuationError> {
    let p = tol.precision();
    let results: Vec<Result<BlockReport, ContinuationError>> = std::thread::scope(|s| {
        let handles: Vec<_> = u.blocks.iter().map(|b| s.spawn(move || check_block(b, p))).collect();
        handles.into_iter().map(|h| h.join().expect("symplectic worker panicked")).collect()
    });
    let blocks = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let max_deviation = blocks.iter().map(|b| b.deviation.clone()).fold(Real::zero(p), |a, b| if b.cmp(&a).is_gt() { b } else { a });
    let passed = max_deviation.cmp(tol).is_lt();
    Ok(SymplecticReport { blocks, max_deviation, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::mp::ten_pow_neg;
    use crate::arith::rational::qi;

    const P: usize = 256;

    fn s311() -> OrbifoldSpec {
        OrbifoldSpec::quartic([3, 1, 1, 1])
    }

    #[test]
    fn identity_block() {
        let one = Complex::one(P);
        let b = Block {
            name: "id".into(),
            sources: vec!["a".into(), "b".into()],
            targets: vec!["a".into(), "b".into()],
            entries: vec![vec![Laurent::monomial(0, one.clone()), Laurent::default()], vec![Laurent::default(), Laurent::monomial(0, one)]],
            z_shift: vec![0, 0],
            exp_z: 0,
            expected_scale: Some(Complex::one(P)),
        };
        let r = check_symplectic(&BlockMatrix { side: Side::E, spec: String::new(), blocks: vec![b] }, &ten_pow_neg(40, P)).unwrap();
        assert!(r.max_deviation.is_zero());
    }

    #[test]
    fn curve_scale_is_rational() {
        let s = curve_untwisted_scale(P);
        assert!(s.dist(&Complex::from_q(&q(-9, 8192), P)).cmp(&ten_pow_neg(70, P)).is_lt());
    }

    #[test]
    fn all_sides_symplectic() {
        let tol = ten_pow_neg(40, P);
        for side in [Side::E, Side::K, Side::Both] {
            let u = assemble_u(side, &s311(), P).unwrap();
            let r = check_symplectic(&u, &tol).unwrap();
            assert!(r.passed, "{side:?}: {}", r.max_deviation.to_sci(5));
        }
    }

    #[test]
    fn twisted_curve_entry() {
        let u = assemble_u(Side::E, &s311(), P).unwrap();
        let f = u.block("E:sigma").unwrap().entries[0][0].coeff(0, P);
        let want = Complex::new(Real::zero(P), Real::from_q(&q(1, 32), P));
        assert!(f.dist(&want).cmp(&ten_pow_neg(70, P)).is_lt());
        // normalized entry is a unit: f(z) f*(−z) = 1
        let unit = f.scale(&Real::from_q(&qi(32), P));
        assert!(unit.mul(&unit.conj()).dist(&Complex::one(P)).cmp(&ten_pow_neg(70, P)).is_lt());
    }

    #[test]
    fn perturbation_detected() {
        let u = assemble_u(Side::E, &s311(), P).unwrap();
        let mut bad = u.clone();
        bad.blocks[0] = u.blocks[0].perturbed(0, 0, 1e-3);
        let r = check_symplectic(&bad, &ten_pow_neg(40, P)).unwrap();
        assert!(!r.passed);
        assert!(r.max_deviation.cmp(&ten_pow_neg(4, P)).is_ge());
    }

    #[test]
    fn fitted_block_perturbation_detected() {
        let u = assemble_u(Side::K, &s311(), P).unwrap();
        for (r, c) in [(0, 0), (1, 1), (2, 1)] {
            let mut bad = u.clone();
            bad.blocks[0] = u.blocks[0].perturbed(r, c, 1e-3);
            let rep = check_symplectic(&bad, &ten_pow_neg(40, P)).unwrap();
            assert!(rep.max_deviation.cmp(&ten_pow_neg(6, P)).is_ge(), "({r},{c})");
        }
    }
}
