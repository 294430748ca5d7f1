//! JSON documents for every analysis.

use serde_json::{json, Map, Value};

use renewt_core::constructions::{two_periodic_residual, NonconvergentCubic};
use renewt_core::dynamics::{ConvergenceVerdict, CycleInfo, OrbitOutcome};
use renewt_core::geometry::{Line, LineFit, SymmetryEstimate};
use renewt_core::map::FixedPointRecord;
use renewt_core::mobius::MobiusMap;
use renewt_core::render::{Attractor, BasinImage};
use renewt_core::{Complex64, FactoredPolynomial, Point, RelaxedNewtonMap};

pub fn complex(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

pub fn complex_list(zs: &[Complex64]) -> Value {
    Value::Array(zs.iter().map(|&z| complex(z)).collect())
}

pub fn point(p: Point) -> Value {
    match p {
        Point::Finite(z) => complex(z),
        Point::Infinity => Value::String("infinity".into()),
    }
}

fn record(r: &FixedPointRecord) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("multiplier".into(), complex(r.multiplier));
    m.insert("class".into(), r.class.name().into());
    m.insert("index".into(), complex(r.residue_index));
    m
}

pub fn polynomial(p: &FactoredPolynomial) -> Value {
    json!({
        "leading": complex(p.leading()),
        "roots": p.roots().iter().map(|&(r, m)| json!({ "value": complex(r), "multiplicity": m })).collect::<Vec<_>>(),
    })
}

pub fn analyze(map: &RelaxedNewtonMap) -> renewt_core::Result<Value> {
    let records = map.fixed_points();
    let roots: Vec<Value> = records
        .iter()
        .filter_map(|r| {
            let z = r.location.finite()?;
            let mut m = record(r);
            m.insert("value".into(), complex(z));
            m.insert("multiplicity".into(), r.root_multiplicity.unwrap_or(0).into());
            Some(Value::Object(m))
        })
        .collect();
    let infinity = records.iter().find(|r| r.location.is_infinity()).map(|r| Value::Object(record(r)));
    let index_sum = map.residue_index_sum().ok().map(complex).unwrap_or(Value::Null);
    Ok(json!({
        "h": complex(map.h()),
        "h_in_attracting_domain": map.h_in_attracting_domain(),
        "class": map.class().name(),
        "reduced_degree": map.reduced_degree(),
        "degree": map.polynomial().degree(),
        "roots": roots,
        "infinity": infinity,
        "critical_points": complex_list(&map.critical_points()?),
        "index_sum": index_sum,
    }))
}

pub fn cycle(c: &CycleInfo) -> Value {
    json!({
        "period": c.period,
        "points": complex_list(&c.points),
        "multiplier": complex(c.multiplier),
        "class": c.class.name(),
    })
}

pub fn outcome(seed: Complex64, o: &OrbitOutcome) -> Value {
    let mut m = Map::new();
    m.insert("seed".into(), complex(seed));
    m.insert("kind".into(), o.kind().into());
    m.insert("iterations".into(), o.iterations().into());
    match o {
        OrbitOutcome::ConvergedToRoot { root, .. } => {
            m.insert("root".into(), (*root).into());
        }
        OrbitOutcome::AttractedToCycle { cycle: c, .. } => {
            m.insert("cycle".into(), cycle(c));
        }
        _ => {}
    }
    Value::Object(m)
}

pub fn verdict(v: &ConvergenceVerdict) -> Value {
    json!({
        "status": v.status.name(),
        "cycles": v.cycles().into_iter().map(cycle).collect::<Vec<_>>(),
        "orbits": v.orbits.iter().map(|o| outcome(o.seed, &o.outcome)).collect::<Vec<_>>(),
    })
}

pub fn nonconvergent(c: &NonconvergentCubic, v: &ConvergenceVerdict) -> Value {
    json!({
        "h": complex(c.h),
        "sign": c.sign.symbol().to_string(),
        "a": complex(c.a),
        "a_closed_form": complex(c.a_closed_form),
        "xi": complex(c.xi),
        "partner": complex(c.partner),
        "residuals": {
            "fix": c.report.residual_fix,
            "crit": c.report.residual_crit,
            "multiplier": c.report.multiplier_mag,
            "two_periodic": two_periodic_residual(c.h, c.a, c.xi),
        },
        "verdict": verdict(v),
    })
}

pub fn line(l: &Line) -> Value {
    json!({ "point": complex(l.point), "direction": complex(l.direction) })
}

pub fn line_test(predicate: Option<&Line>, fit: &LineFit, samples: usize) -> Value {
    json!({
        "predicate": {
            "is_line": predicate.is_some(),
            "line": predicate.map(line),
        },
        "numeric": {
            "is_line": fit.is_line,
            "max_deviation": fit.max_deviation,
            "fit": line(&fit.line),
        },
        "samples": samples,
    })
}

pub fn symmetry(est: &SymmetryEstimate, samples: usize, line_case: bool) -> Value {
    json!({
        "order": est.order,
        "tau": est.tau,
        "defects": est.defects.iter().map(|&(n, d)| json!({ "order": n, "defect": d, "verified": d < est.tau })).collect::<Vec<_>>(),
        "samples": samples,
        "line_case": line_case,
    })
}

pub fn mobius(m: &MobiusMap) -> Value {
    json!({ "a": complex(m.a), "b": complex(m.b), "c": complex(m.c), "d": complex(m.d) })
}

pub fn attractor(a: &Attractor) -> Value {
    match a {
        Attractor::Root { value, multiplicity } => {
            json!({ "kind": "root", "value": complex(*value), "multiplicity": multiplicity })
        }
        Attractor::Cycle(c) => {
            let mut v = cycle(c);
            v["kind"] = "cycle".into();
            v
        }
    }
}

pub fn legend(img: &BasinImage) -> Value {
    let counts: Vec<usize> = (0..img.legend.len() as u32)
        .map(|l| img.labels.iter().filter(|&&x| x == l).count())
        .collect();
    let undecided = img.labels.len() - counts.iter().sum::<usize>();
    json!({
        "width": img.viewport.px_width,
        "height": img.viewport.px_height,
        "center": complex(img.viewport.center),
        "span": img.viewport.width,
        "budget": img.budget,
        "attractors": img.legend.iter().zip(&counts).enumerate().map(|(i, (a, &n))| {
            let mut v = attractor(a);
            v["label"] = i.into();
            v["pixels"] = n.into();
            v
        }).collect::<Vec<_>>(),
        "undecided_pixels": undecided,
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}
