//! Acceptance criteria 1–12. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails. Run with `cargo test --test acceptance`.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};

use bvorb::arith::mp::ten_pow_neg;
use bvorb::arith::{q, qi, Complex, Real, Q};
use bvorb::continuation::{assemble_u, barnes_contour_check, check_symplectic, identify_continued_series, BarnesParams, Closure, ContourSpec, IdentifyLimits, Side};
use bvorb::fan::{build_fan, enumerate_box, enumerate_lambda_e};
use bvorb::iseries::delta::euler_modification;
use bvorb::iseries::gw::{ambient_entries, gw_form, term_from_form};
use bvorb::iseries::{fjrw_term, gw_term, gw_term_direct, gw_terms, homogeneity_check, twist_delta};
use bvorb::statespace::{check_isomorphisms, fjrw_state_space, hodge_diamond, narrow_sectors, spec_hodge, BasisKey};
use bvorb::weights::{Curve, OrbifoldSpec, SpecError, ADMISSIBLE};

const P: usize = 256;

type Outcome = Result<String, String>;

/// Number, name, check, time limit.
type Criterion = (u32, &'static str, fn() -> Outcome, Option<Duration>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn s311() -> OrbifoldSpec {
    OrbifoldSpec::quartic([3, 1, 1, 1])
}

fn cli(args: &[&str]) -> i32 {
    let mut argv = vec!["bvorb"];
    argv.extend_from_slice(args);
    bvorb::cli::run(argv, &mut Vec::new(), &mut Vec::new())
}

fn c1_hodge() -> Outcome {
    let d = hodge_diamond(1, 10).map_err(|e| e.to_string())?;
    ensure((d.h11, d.h21) == (6, 60), || format!("(1,10) gave ({}, {})", d.h11, d.h21))?;
    for (w, (n, np)) in ADMISSIBLE {
        let a = hodge_diamond(n as i64, np as i64).map_err(|e| e.to_string())?;
        let b = hodge_diamond(np as i64, n as i64).map_err(|e| e.to_string())?;
        ensure(a.h11 == b.h21 && a.h21 == b.h11, || format!("{w:?}: mirror swap fails"))?;
    }
    Ok("(6,60) and mirror swap on all ten rows".into())
}

fn c2_fjrw_tables() -> Outcome {
    let spec = s311();
    let basis = fjrw_state_space(&spec).map_err(|e| e.to_string())?;
    // dimension per sector, keyed by the variables it fixes
    const VARS: [char; 7] = ['X', 'Y', 'Z', 'x', 'y', 'z', 'w'];
    let mut sectors: BTreeMap<_, (String, usize)> = BTreeMap::new();
    for e in &basis.entries {
        if let BasisKey::Fjrw { h, .. } = &e.key {
            let fixed: String = h.fixed().iter().map(|&k| VARS[k]).collect();
            sectors.entry(h.clone()).or_insert((fixed, 0)).1 += 1;
        }
    }
    let dims = |fixed: &str| -> Vec<usize> { sectors.values().filter(|(f, _)| f == fixed).map(|(_, n)| *n).collect() };
    ensure(dims("XYZxyzw") == [42], || format!("untwisted: {:?}", dims("XYZxyzw")))?;
    ensure(dims("YZyzw") == [60], || format!("YZyzw: {:?}", dims("YZyzw")))?;
    ensure(dims("yzw") == [20], || format!("yzw: {:?}", dims("yzw")))?;
    ensure(dims("YZ") == [3, 3], || format!("YZ: {:?}", dims("YZ")))?;
    let narrow = dims("");
    ensure(narrow.len() == 8 && narrow.iter().all(|&n| n == 1), || format!("narrow: {narrow:?}"))?;
    ensure(basis.len() == 136, || format!("total {}", basis.len()))?;
    let table = |w: [u32; 4]| -> Result<(usize, usize, usize), String> {
        let d = fjrw_state_space(&OrbifoldSpec::quartic(w)).map_err(|e| e.to_string())?.graded_dims();
        Ok((d.values().sum(), d[&qi(2)], (d[&qi(3)] - 2) / 2))
    };
    let t = table([6, 3, 2, 1])?;
    ensure(t == (112, 9, 45), || format!("(6,3,2,1) gave {t:?}"))?;
    let t = table([6, 4, 1, 1])?;
    ensure((t.1, t.2) == (11, 59), || format!("(6,4,1,1) gave {t:?}"))?;
    let t = table([12, 8, 3, 1])?;
    ensure((t.1, t.2) == (19, 43), || format!("(12,8,3,1) gave {t:?}"))?;
    for spec in OrbifoldSpec::all().into_iter().filter(|s| s.curve == Curve::Quartic) {
        let d = fjrw_state_space(&spec).map_err(|e| e.to_string())?.graded_dims();
        let h = spec_hodge(&spec);
        ensure(d[&qi(2)] == h.h11 as usize && d[&qi(3)] == 2 + 2 * h.h21 as usize, || format!("{} diamond mismatch", spec.label()))?;
    }
    Ok("sector dimensions 42/60/20/3+3/8×1, totals 136 and 112, diamonds for all quartic rows".into())
}

fn c3_narrow() -> Outcome {
    let check = |w: [u32; 4], want: &[(i64, &[&str])]| -> Result<(), String> {
        let v = narrow_sectors(&OrbifoldSpec::quartic(w));
        let mut got: BTreeMap<i64, Vec<String>> = BTreeMap::new();
        for (_, word, d) in &v {
            ensure(d.is_integer(), || format!("degree {d} is not an integer"))?;
            got.entry(d.to_integer().try_into().unwrap()).or_default().push(word.label());
        }
        for l in got.values_mut() {
            l.sort();
        }
        let want: BTreeMap<i64, Vec<String>> = want
            .iter()
            .map(|(d, ls)| {
                let mut l: Vec<String> = ls.iter().map(|s| s.to_string()).collect();
                l.sort();
                (*d, l)
            })
            .collect();
        ensure(got == want, || format!("{w:?}: got {got:?}"))
    };
    check([3, 1, 1, 1], &[(0, &["J1J2"]), (2, &["J1^3J2", "J1J2^3", "sJ1^2J2^2"]), (4, &["J1^3J2^3", "J1J2^5", "sJ1^2J2^4"]), (6, &["J1^3J2^5"])])?;
    check(
        [5, 2, 2, 1],
        &[(0, &["J1J2"]), (2, &["J1^3J2", "J1J2^3", "J1J2^7", "sJ1^2J2^2", "sJ1^2J2^6"]), (4, &["J1J2^9", "J1^3J2^3", "J1^3J2^7", "sJ1^2J2^8", "sJ1^2J2^4"]), (6, &["J1^3J2^9"])],
    )?;
    Ok("8 and 12 narrow sectors with labels and degrees".into())
}

fn c4_iso() -> Outcome {
    let specs = OrbifoldSpec::all();
    for spec in &specs {
        let r = check_isomorphisms(spec).map_err(|e| e.to_string())?;
        ensure(r.passed, || format!("{}: {:?}", spec.label(), r))?;
    }
    Ok(format!("{} orbifolds", specs.len()))
}

fn c5_oracle() -> Outcome {
    let spec = s311();
    let fan = build_fan(&spec);
    let mut count = 0;
    for b in enumerate_box(&spec) {
        for p in enumerate_lambda_e(&fan, &b, &qi(4)) {
            let t = gw_term(&fan, &p).map_err(|e| e.to_string())?;
            let (z, poly, sector) = gw_term_direct(&fan, &p).map_err(|e| e.to_string())?;
            ensure(t.z_exponent == z && ambient_entries(&poly, &sector) == t.coefficient, || format!("mismatch at {}", t.index))?;
            count += 1;
        }
    }
    ensure(count > 0, || "no points".into())?;
    Ok(format!("{count} points of degree ≤ 4"))
}

fn c6_homogeneity() -> Outcome {
    let terms = gw_terms(&s311(), 4).map_err(|e| e.to_string())?;
    homogeneity_check(&terms).map_err(|i| format!("term {} not homogeneous", terms[i].index))?;
    Ok(format!("{} terms", terms.len()))
}

/// `1 − |n| + Σ_k ⌊Σ_h n_h i_k(h)⌋`, with the insertions' `i_k` written out.
#[allow(clippy::needless_range_loop)]
fn brute_exponent(n: [u32; 3]) -> i64 {
    let inputs: [[Q; 7]; 3] = [
        [qi(0), q(1, 2), q(1, 2), qi(0), qi(0), qi(0), qi(0)],
        [qi(0), qi(0), qi(0), qi(0), q(1, 3), q(1, 3), q(1, 3)],
        [qi(0), q(1, 4), q(1, 4), qi(0), q(1, 6), q(1, 6), q(1, 6)],
    ];
    let mut e = 1 - n.iter().map(|&x| x as i64).sum::<i64>();
    for k in 0..7 {
        let s: Q = (0..3).map(|h| &inputs[h][k] * qi(n[h] as i64)).sum();
        e += i64::try_from(s.floor().to_integer()).unwrap();
    }
    e
}

fn c7_fjrw_exponents() -> Outcome {
    let spec = s311();
    let v = fjrw_term(&[0, 0, 0], &spec).map_err(|e| e.to_string())?;
    // ∏ 1/q_k over the seven coordinates
    let lead: Q = spec.charges().iter().map(|c| c.recip()).product();
    ensure(v.coefficient.get("J1J2") == qi(13824) && lead == qi(13824), || format!("leading coefficient {}", v.coefficient))?;
    let mut count = 0;
    for m in 0..4u32 {
        for n in 0..6u32 {
            for c in 0..24u32 {
                let t = fjrw_term(&[m, n, c], &spec).map_err(|e| e.to_string())?;
                let want = brute_exponent([m, n, c]);
                ensure(t.z_exponent == want, || format!("n = ({m},{n},{c}): {} vs {want}", t.z_exponent))?;
                let r = fjrw_term(&[m % 2, n % 3, c % 12], &spec).map_err(|e| e.to_string())?;
                ensure(r.z_exponent == t.z_exponent, || format!("periodicity fails at ({m},{n},{c})"))?;
                // every floor is at most its argument, so the exponent is ≤ 1 with
                // equality exactly when no fractional part is dropped
                let exact = (2 * m + c) % 4 == 0 && (2 * n + c) % 6 == 0;
                ensure(t.z_exponent <= 1 && (t.z_exponent == 1) == exact, || format!("exponent {} at ({m},{n},{c})", t.z_exponent))?;
                ensure((t.z_exponent == 1) == (t.sector == "J1J2"), || format!("exponent {} in sector {} at ({m},{n},{c})", t.z_exponent, t.sector))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} indices, leading 13824, z^1 only on the degree-0 sector"))
}

fn c8_delta() -> Outcome {
    let spec = s311();
    let mut checked = 0;
    for (h, _, _) in narrow_sectors(&spec) {
        let th: Vec<Q> = h.theta.iter().filter(|t| !t.is_zero()).cloned().collect();
        let inv: Vec<Q> = th.iter().map(|t| qi(1) - t).collect();
        let prod = twist_delta(&th, 6).mul(&twist_delta(&inv, 6).negate_z());
        ensure(prod.is_identity(), || format!("dual identity fails for {th:?}"))?;
        checked += 1;
    }
    let lambda = ten_pow_neg(50, P);
    let tol = ten_pow_neg(40, P);
    let mut worst = Real::zero(P);
    for i in 0..20i64 {
        let x = q(1 + 7 * i % 23, 24);
        let n = 1 + (i as u32 * 5) % 9;
        let got = euler_modification(&x, n, &lambda);
        let mut want = Real::one(P);
        for j in 0..n {
            want = want.mul(&Real::from_q(&(&x + qi(j as i64)), P));
        }
        let d = got.dist(&Complex::from_real(want));
        if d.cmp(&worst).is_gt() {
            worst = d;
        }
    }
    ensure(worst.cmp(&tol).is_lt(), || format!("Euler modification deviates by {}", worst.to_sci(3)))?;
    Ok(format!("{checked} sectors to order 6, Pochhammer limit {}", worst.to_sci(2)))
}

/// Nearest rational with denominator 1024.
fn dyadic(x: &Real) -> Q {
    q((x.to_f64() * 1024.0).round() as i64, 1024)
}

fn c9_symplectic() -> Outcome {
    let tol = ten_pow_neg(40, P);
    let mut worst = Vec::new();
    for side in [Side::E, Side::K, Side::Both] {
        let u = assemble_u(side, &s311(), P).map_err(|e| e.to_string())?;
        let r = check_symplectic(&u, &tol).map_err(|e| e.to_string())?;
        ensure(r.passed, || format!("{side:?}: {}", r.max_deviation.to_sci(3)))?;
        worst.push(format!("{}={}", side.name(), r.max_deviation.to_sci(2)));
    }
    // the twisted curve entry, normalized, is a unit Gaussian rational g with
    // f(z) = g z^k e^{ez}; then f(z) f*(−z) = |g|² (−1)^k z^{2k}
    let u = assemble_u(Side::E, &s311(), P).map_err(|e| e.to_string())?;
    let b = u.block("E:sigma").ok_or("no E:sigma block")?;
    let f = &b.entries[0][0];
    ensure(f.0.len() == 1, || format!("twisted entry has {} z-powers", f.0.len()))?;
    let (&k, c) = f.0.iter().next().unwrap();
    let c = c.scale(&Real::from_i64(32, P));
    let (a, bb) = (dyadic(&c.re), dyadic(&c.im));
    let exact = Complex::new(Real::from_q(&a, P), Real::from_q(&bb, P));
    ensure(c.dist(&exact).cmp(&ten_pow_neg(70, P)).is_lt(), || "twisted entry is not a Gaussian rational".into())?;
    let norm = &a * &a + &bb * &bb;
    let sign = if k % 2 == 0 { qi(1) } else { qi(-1) };
    ensure(norm * sign == qi(1) && 2 * k == 0, || format!("f f*(−z) ≠ 1 for g = {a} + {bb}i, k = {k}"))?;
    Ok(format!("{}; twisted unit {}{}i", worst.join(" "), a, if bb.is_negative() { format!("{bb}") } else { format!("+{bb}") }))
}

fn c10_identify() -> Outcome {
    let tol = ten_pow_neg(40, P);
    let mut parts = Vec::new();
    for side in [Side::E, Side::K, Side::Both] {
        let r = identify_continued_series(side, &s311(), &IdentifyLimits::default(), &tol).map_err(|e| format!("{side:?}: {e}"))?;
        ensure(r.max_deviation.cmp(&tol).is_lt(), || format!("{side:?}: {}", r.max_deviation.to_sci(3)))?;
        parts.push(format!("{}: {} rows ({} vanishing) {}", side.name(), r.rows.len(), r.vanishing, r.max_deviation.to_sci(2)));
    }
    Ok(parts.join("; "))
}

fn c11_barnes() -> Outcome {
    let tol = ten_pow_neg(20, P);
    let mut parts = Vec::new();
    for (qv, closure) in [(1e-3, Closure::Right), (1e3, Closure::Left)] {
        let r = barnes_contour_check(&ContourSpec::new(Side::E), &s311(), &BarnesParams::default(), &Real::from_f64(qv, P), 200, &tol).map_err(|e| e.to_string())?;
        ensure(r.converging == closure, || format!("|q| = {qv}: wrong closure {:?}", r.converging))?;
        ensure(r.deviation.cmp(&tol).is_lt(), || format!("|q| = {qv}: deviation {}", r.deviation.to_sci(3)))?;
        parts.push(format!("|q|={qv:e} {}", r.deviation.to_sci(2)));
    }
    Ok(parts.join(", "))
}

fn c12_negative() -> Outcome {
    let tol = ten_pow_neg(40, P);
    let u = assemble_u(Side::E, &s311(), P).map_err(|e| e.to_string())?;
    let mut bad = u.clone();
    bad.blocks[0] = u.blocks[0].perturbed(0, 0, 1e-3);
    let r = check_symplectic(&bad, &tol).map_err(|e| e.to_string())?;
    ensure(!r.passed, || "perturbed block passed".into())?;

    let fan = build_fan(&s311());
    let p = bvorb::fan::LatticePoint::new(qi(1), qi(1), q(1, 2), vec![]);
    let mut f = gw_form(&fan, &p).map_err(|e| e.to_string())?;
    f.form.factors.pop();
    let t = term_from_form(&fan, &f).map_err(|e| e.to_string())?;
    ensure(homogeneity_check(&[t]).is_err(), || "dropped Gamma pair stays homogeneous".into())?;

    ensure(matches!(OrbifoldSpec::new(Curve::Quartic, [7, 1, 1, 1]), Err(SpecError::NotAdmissible(_))), || "off-table weights accepted".into())?;
    let code = cli(&["state-space", "--k3", "7,1,1,1"]);
    ensure(code == 2, || format!("off-table weights exit {code}"))?;
    let code = cli(&["verify", "--check", "continuation", "--curve", "cubic-sextic"]);
    ensure(code == 4, || format!("cubic-sextic continuation exit {code}"))?;
    Ok("perturbation, dropped pair, off-table weights (exit 2), cubic-sextic (exit 4)".into())
}

fn main() {
    let criteria: [Criterion; 12] = [
        (1, "Hodge diamonds", c1_hodge, Some(Duration::from_millis(1))),
        (2, "FJRW state spaces", c2_fjrw_tables, None),
        (3, "narrow sectors", c3_narrow, None),
        (4, "state-space isomorphisms", c4_iso, Some(Duration::from_secs(10))),
        (5, "GW coefficient oracle", c5_oracle, None),
        (6, "GW homogeneity", c6_homogeneity, None),
        (7, "FJRW z-exponents", c7_fjrw_exponents, None),
        (8, "twist and Euler modification", c8_delta, None),
        (9, "symplectic transformation", c9_symplectic, Some(Duration::from_secs(5))),
        (10, "continued-series identification", c10_identify, Some(Duration::from_secs(60))),
        (11, "Barnes contour integral", c11_barnes, Some(Duration::from_secs(120))),
        (12, "negative controls", c12_negative, None),
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (n, name, f, limit) in criteria {
        if !filter.is_empty() && !filter.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let mut r = f();
        let took = start.elapsed();
        if let (Ok(_), Some(l)) = (&r, limit) {
            if took > l {
                r = Err(format!("took {took:.2?}, limit {l:?}"));
            }
        }
        match r {
            Ok(info) => println!("criterion {n:>2} PASS  {name} ({took:.2?}): {info}"),
            Err(e) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {name} ({took:.2?}): {e}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
