//! The three subcommands, each returning a renderable document.

use serde_json::{json, Value};

use super::config::{parse_tolerance, RunConfig};
use super::output::Document;
use super::CliError;
use crate::arith::mp::Real;
use crate::arith::rational::{fmt_q, fmt_q_short};
use crate::continuation::contour::stated_radius;
use crate::continuation::{assemble_u, barnes_contour_check, check_symplectic, identify_continued_series, BarnesParams, Closure, ContourSpec, IdentifyLimits, Side};
use crate::fan::{build_fan, enumerate_box, enumerate_lambda_e};
use crate::iseries::gw::{ambient_entries, gw_term_direct};
use crate::iseries::{fmt_point, gw_term, gw_terms, homogeneity_check, terms_for};
use crate::statespace::{check_isomorphisms, compact_basis, fjrw_state_space, fmt_dims, gw_ambient_basis, mixed_state_space, spec_hodge, GradedBasis, Theory};
use crate::weights::{Curve, OrbifoldSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    Homogeneity,
    Oracle,
    Symplectic,
    Continuation,
    StatespaceIso,
}

impl Check {
    pub fn parse(s: &str) -> Option<Check> {
        match s {
            "homogeneity" => Some(Check::Homogeneity),
            "oracle" => Some(Check::Oracle),
            "symplectic" => Some(Check::Symplectic),
            "continuation" => Some(Check::Continuation),
            "statespace-iso" => Some(Check::StatespaceIso),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Check::Homogeneity => "homogeneity",
            Check::Oracle => "oracle",
            Check::Symplectic => "symplectic",
            Check::Continuation => "continuation",
            Check::StatespaceIso => "statespace-iso",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerifyOptions {
    pub side: Option<Side>,
    /// `|q̃|` for the contour check; the identification runs when absent.
    pub point: Option<String>,
}

/// Result of `verify`: the document and whether the check passed.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub doc: Document,
    pub passed: bool,
}

fn meta(cfg: &RunConfig, spec: &OrbifoldSpec) -> Value {
    json!({
        "tool": "bvorb",
        "version": env!("CARGO_PKG_VERSION"),
        "curve": spec.curve.name(),
        "k3_weights": spec.k3_weights,
        "precision_bits": cfg.precision_bits,
        "novikov_degree": cfg.truncation.novikov_degree,
        "z_order": cfg.truncation.z_order,
        "seed": cfg.seed,
        "sigma_pairing_scale": "1/1",
    })
}

fn dec(r: &Real) -> String {
    r.to_sci(24)
}

fn basis_for(spec: &OrbifoldSpec, theory: Theory, narrow: bool) -> Result<(GradedBasis, &'static str), CliError> {
    Ok(match (theory, narrow) {
        (t, true) => (compact_basis(spec, t), if t == Theory::Fjrw { "narrow" } else { "ambient" }),
        (Theory::Fjrw, false) => (fjrw_state_space(spec).map_err(|e| CliError::Internal(e.to_string()))?, "full"),
        (Theory::Gw, false) => (gw_ambient_basis(spec), "ambient"),
        (t, false) => (mixed_state_space(spec, t), "ambient"),
    })
}

pub fn cmd_state_space(cfg: &RunConfig, theory: Theory, narrow: bool) -> Result<Document, CliError> {
    let spec = cfg.spec()?;
    let diamond = spec_hodge(&spec);
    let (basis, scope) = basis_for(&spec, theory, narrow)?;
    // The GW basis lists ambient classes only; its full grading comes from
    // the Hodge diamond.
    let graded = if theory == Theory::Gw && !narrow { fmt_dims(&diamond.graded_dims()) } else { fmt_dims(&basis.graded_dims()) };
    let total: usize = graded.values().sum();
    let entries: Vec<Value> = basis.entries.iter().map(|e| json!({"label": e.label, "degree": fmt_q_short(&e.degree), "sector": e.sector, "kind": e.kind})).collect();
    let rows = basis.entries.iter().map(|e| vec![e.label.clone(), fmt_q_short(&e.degree), e.sector.clone(), format!("{:?}", e.kind).to_lowercase()]).collect();
    let json = json!({
        "kind": "state-space",
        "meta": meta(cfg, &spec),
        "theory": theory.name(),
        "weights": spec.k3_weights,
        "basis_scope": scope,
        "diamond": {"h11": diamond.h11, "h21": diamond.h21, "rows": diamond.rows()},
        "graded_dims": graded,
        "total": total,
        "basis": entries,
    });
    Ok(Document { json, header: vec!["label", "degree", "sector", "kind"], rows })
}

pub fn cmd_i_function(cfg: &RunConfig, theory: Theory) -> Result<Document, CliError> {
    let spec = cfg.spec()?;
    let terms = terms_for(theory, &spec, cfg.truncation.novikov_degree).map_err(|e| CliError::Internal(e.to_string()))?;
    let mut rows = Vec::new();
    let mut out = Vec::new();
    for t in &terms {
        let index = t.index.to_string();
        let novikov: serde_json::Map<String, Value> = t.novikov.iter().map(|(k, v)| (k.clone(), Value::String(fmt_q(v)))).collect();
        let coefficient: Vec<Value> = t
            .coefficient
            .entries
            .iter()
            .map(|(k, v)| {
                rows.push(vec![index.clone(), fmt_q_short(&t.degree), t.z_exponent.to_string(), k.sector.clone(), k.label.clone(), k.e.to_string(), k.k.to_string(), fmt_q(v)]);
                json!({"sector": k.sector, "label": k.label, "dE_pow": k.e, "dK_pow": k.k, "rational": fmt_q(v)})
            })
            .collect();
        out.push(json!({
            "index": index,
            "degree": fmt_q_short(&t.degree),
            "z_exponent": t.z_exponent,
            "novikov": novikov,
            "sector": t.sector,
            "broad": t.broad,
            "coefficient": coefficient,
        }));
    }
    let json = json!({"kind": "i-function", "meta": meta(cfg, &spec), "theory": theory.name(), "terms": out});
    Ok(Document { json, header: vec!["index", "degree", "z_exponent", "sector", "label", "dE_pow", "dK_pow", "rational"], rows })
}

struct Detail {
    name: String,
    passed: bool,
    deviation: Option<Real>,
    info: Value,
}

fn unsupported_if_cubic(spec: &OrbifoldSpec, what: &str) -> Result<(), CliError> {
    if spec.curve == Curve::CubicSextic {
        return Err(CliError::Unsupported(format!("{what} needs the quartic curve; the cubic-sextic curve has no direct identification")));
    }
    Ok(())
}

fn sides_for(spec: &OrbifoldSpec, side: Option<Side>) -> Result<Vec<Side>, CliError> {
    let full = spec.k3_weights == [3, 1, 1, 1];
    match side {
        Some(Side::E) => Ok(vec![Side::E]),
        Some(s) if !full => Err(CliError::Unsupported(format!("side {} requires K3 weights 3,1,1,1", s.name()))),
        Some(s) => Ok(vec![s]),
        None if full => Ok(vec![Side::E, Side::K, Side::Both]),
        None => Ok(vec![Side::E]),
    }
}

fn verify_homogeneity(cfg: &RunConfig, spec: &OrbifoldSpec) -> Result<Vec<Detail>, CliError> {
    let terms = gw_terms(spec, cfg.truncation.novikov_degree).map_err(|e| CliError::Internal(e.to_string()))?;
    let first = homogeneity_check(&terms).err();
    Ok(vec![Detail {
        name: "gw".into(),
        passed: first.is_none(),
        deviation: None,
        info: json!({"terms": terms.len(), "first_violation": first.map(|i| terms[i].index.to_string())}),
    }])
}

fn verify_oracle(cfg: &RunConfig, spec: &OrbifoldSpec) -> Result<Vec<Detail>, CliError> {
    let fan = build_fan(spec);
    let mut count = 0;
    let mut bad = Vec::new();
    for b in enumerate_box(spec) {
        for p in enumerate_lambda_e(&fan, &b, &crate::arith::rational::qi(cfg.truncation.novikov_degree as i64)) {
            let t = gw_term(&fan, &p).map_err(|e| CliError::Internal(e.to_string()))?;
            let (z, poly, sector) = gw_term_direct(&fan, &p).map_err(|e| CliError::Internal(e.to_string()))?;
            count += 1;
            if t.z_exponent != z || ambient_entries(&poly, &sector) != t.coefficient {
                bad.push(fmt_point(&p));
            }
        }
    }
    Ok(vec![Detail { name: "gamma-ratio vs product".into(), passed: bad.is_empty(), deviation: None, info: json!({"terms": count, "mismatches": bad}) }])
}

fn verify_symplectic(cfg: &RunConfig, spec: &OrbifoldSpec, side: Option<Side>) -> Result<Vec<Detail>, CliError> {
    unsupported_if_cubic(spec, "the continuation matrix")?;
    let tol = cfg.tolerance("symplectic")?;
    let mut out = Vec::new();
    for s in sides_for(spec, side)? {
        let u = assemble_u(s, spec, cfg.precision_bits)?;
        let r = check_symplectic(&u, &tol)?;
        for b in r.blocks {
            out.push(Detail {
                name: b.name.clone(),
                passed: b.deviation.cmp(&tol).is_lt(),
                deviation: Some(b.deviation.clone()),
                info: json!({
                    "size": b.size,
                    "scale_source": b.scale_source,
                    "scales": b.scales.iter().map(|c| json!({"re": dec(&c.re), "im": dec(&c.im)})).collect::<Vec<_>>(),
                }),
            });
        }
    }
    Ok(out)
}

fn verify_continuation(cfg: &RunConfig, spec: &OrbifoldSpec, opts: &VerifyOptions) -> Result<Vec<Detail>, CliError> {
    unsupported_if_cubic(spec, "analytic continuation")?;
    let p = cfg.precision_bits;
    if let Some(pt) = &opts.point {
        let side = opts.side.unwrap_or(Side::E);
        if side == Side::Both {
            return Err(CliError::BadInput("the contour check runs in one variable; use --side e or k".into()));
        }
        sides_for(spec, Some(side))?;
        let q_abs = parse_tolerance(pt, p)?;
        let tol = cfg.tolerance("contour")?;
        let mut report = None;
        for terms in [200, 800] {
            match barnes_contour_check(&ContourSpec::new(side), spec, &BarnesParams::default(), &q_abs, terms, &tol) {
                Ok(r) => {
                    report = Some(r);
                    break;
                }
                Err(crate::continuation::ContinuationError::NonConvergent(m)) if terms == 800 => return Err(CliError::BadInput(format!("|q| = {pt}: {m}"))),
                Err(crate::continuation::ContinuationError::NonConvergent(_)) => continue,
                Err(e) => return Err(e.into()),
            }
        }
        let r = report.expect("loop returns or sets a report");
        let stated = stated_radius(side);
        let warning = stated.filter(|s| (s / r.radius - 1.0).abs() > 1e-9).map(|s| format!("ratio-test radius {:.6e} differs from the quoted {:.6e}", r.radius, s));
        return Ok(vec![Detail {
            name: format!("contour {}", side.name()),
            passed: r.deviation.cmp(&tol).is_lt(),
            deviation: Some(r.deviation.clone()),
            info: json!({
                "q_abs": pt,
                "closure": match r.converging { Closure::Right => "gw", Closure::Left => "residue" },
                "integral": {"re": dec(&r.integral.re), "im": dec(&r.integral.im)},
                "right_sum": dec(&r.right_sum),
                "left_sum": dec(&r.left_sum),
                "other_deviation": dec(&r.other_deviation),
                "radius": r.radius,
                "radius_warning": warning,
                "segments": r.segments,
            }),
        }]);
    }
    let tol = cfg.tolerance("continuation")?;
    let mut out = Vec::new();
    for s in sides_for(spec, opts.side)? {
        match identify_continued_series(s, spec, &IdentifyLimits::default(), &tol) {
            Ok(r) => out.push(Detail {
                name: format!("identify {}", s.name()),
                passed: true,
                deviation: Some(r.max_deviation.clone()),
                info: json!({"indices": r.rows.len(), "vanishing": r.vanishing}),
            }),
            Err(crate::continuation::ContinuationError::MismatchAt(m)) => {
                out.push(Detail { name: format!("identify {}", s.name()), passed: false, deviation: None, info: json!({"mismatch": m}) })
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(out)
}

fn verify_iso(spec: &OrbifoldSpec) -> Result<Vec<Detail>, CliError> {
    let r = check_isomorphisms(spec).map_err(|e| CliError::Internal(e.to_string()))?;
    Ok(vec![Detail { name: r.spec.clone(), passed: r.passed, deviation: None, info: json!({"full_fjrw": r.full_fjrw, "full_gw": r.full_gw, "compact": r.compact}) }])
}

pub fn cmd_verify(cfg: &RunConfig, check: Check, opts: &VerifyOptions) -> Result<Outcome, CliError> {
    let spec = cfg.spec()?;
    let details = match check {
        Check::Homogeneity => verify_homogeneity(cfg, &spec)?,
        Check::Oracle => verify_oracle(cfg, &spec)?,
        Check::Symplectic => verify_symplectic(cfg, &spec, opts.side)?,
        Check::Continuation => verify_continuation(cfg, &spec, opts)?,
        Check::StatespaceIso => verify_iso(&spec)?,
    };
    let passed = !details.is_empty() && details.iter().all(|d| d.passed);
    let max_dev = details.iter().filter_map(|d| d.deviation.clone()).reduce(|a, b| if b.cmp(&a).is_gt() { b } else { a });
    let rows = details.iter().map(|d| vec![d.name.clone(), d.passed.to_string(), d.deviation.as_ref().map(dec).unwrap_or_default()]).collect();
    let json = json!({
        "kind": "verify",
        "meta": meta(cfg, &spec),
        "check": check.name(),
        "passed": passed,
        "max_deviation": max_dev.as_ref().map(dec),
        "details": details.iter().map(|d| json!({"name": d.name, "passed": d.passed, "deviation": d.deviation.as_ref().map(dec), "info": d.info})).collect::<Vec<_>>(),
    });
    Ok(Outcome { doc: Document { json, header: vec!["name", "passed", "deviation"], rows }, passed })
}
