use std::fmt::Write as _;
use std::sync::Arc;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Map, Value};

use qgraph_core::basis::{self, LabeledWave, SubbasisKind};
use qgraph_core::conditions::{self, Condition, Residual};
use qgraph_core::numeric::{self, OrderSurvey, SampledCheck, SampledCondition, ORDER_STEP};
use qgraph_core::solutions::{self, Certificate, SolutionSet};
use qgraph_core::{rational, CoeffVector, Params, Wave};

use crate::config::{Format, InvalidParams, RunConfig};

/// Result of one command for one `n`.
pub struct Outcome {
    pub json: Value,
    pub text: String,
    pub pass: bool,
}

/// Sampled boundary checks pass below this relative residual.
pub const SAMPLED_TOLERANCE: f64 = 1e-2;
pub const ORDER_RANGE: (f64, f64) = (1.8, 2.2);

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn tsv_block(label: &str, w: &Wave) -> String {
    format!("# {label}\n{}", w.to_coords().to_tsv())
}

fn tsv_dump(members: &[LabeledWave]) -> String {
    members
        .iter()
        .map(|m| tsv_block(&m.label, &m.wave))
        .collect()
}

fn member_json(m: &LabeledWave) -> Value {
    let entries: Vec<Value> = m
        .wave
        .to_coords()
        .to_tsv()
        .lines()
        .map(|line| {
            let mut f = line.split('\t');
            json!({
                "region": f.next().unwrap_or_default(),
                "monomial": f.next().unwrap_or_default(),
                "coeff": f.next().unwrap_or_default(),
            })
        })
        .collect();
    json!({ "label": m.label, "entries": entries })
}

pub fn basis(cfg: &RunConfig, params: &Arc<Params>, kind: &str) -> Result<Outcome> {
    let kind = SubbasisKind::from_name(kind)
        .ok_or_else(|| InvalidParams(format!("unknown subbasis kind {kind:?}")))?;
    let gens = basis::subbasis(params, kind);
    let text = match cfg.format {
        Format::Pretty => {
            let mut s = format!("{} ({} generators)\n", kind.name(), gens.len());
            for g in &gens {
                writeln!(s, "  {}", g.label).unwrap();
            }
            s
        }
        _ => tsv_dump(&gens),
    };
    Ok(Outcome {
        json: json!({
            "kind": kind.name(),
            "expected": kind.expected_len(params.n()),
            "generators": gens.iter().map(member_json).collect::<Vec<_>>(),
        }),
        text,
        pass: true,
    })
}

fn family_json(f: &SolutionSet, expected: Option<usize>) -> Value {
    json!({
        "label": f.label,
        "count": f.len(),
        "expected": expected,
        "rank": f.rank(),
        "failing": f.failing_members(),
        "members": f.members.iter().map(|m| m.label.clone()).collect::<Vec<_>>(),
    })
}

pub fn families(params: &Arc<Params>) -> Outcome {
    let n = params.n();
    let fams = [
        (
            solutions::family_off_diagonal(params),
            solutions::expected_off_diagonal(n),
        ),
        (
            solutions::family_antisymmetric(params),
            Some(solutions::expected_antisymmetric(n)),
        ),
        (
            solutions::family_nonsmooth(params),
            Some(solutions::expected_nonsmooth(n)),
        ),
    ];
    let mut text = format!("n = {n}\n");
    let mut pass = true;
    let mut list = Vec::new();
    for (f, expected) in &fams {
        let ok = expected.is_none_or(|e| e == f.len())
            && f.is_independent()
            && f.failing_members().is_empty();
        pass &= ok;
        let exp = expected.map_or("-".to_string(), |e| e.to_string());
        writeln!(
            text,
            "  {:<14} {:>4} (expected {exp}) {}",
            f.label,
            f.len(),
            verdict(ok)
        )
        .unwrap();
        list.push(family_json(f, *expected));
    }
    let total: usize = fams.iter().map(|(f, _)| f.len()).sum();
    writeln!(text, "  {:<14} {total:>4}", "total").unwrap();
    Outcome {
        json: json!({ "families": list, "total": total, "pass": pass }),
        text,
        pass,
    }
}

pub fn enumerate(cfg: &RunConfig, params: &Arc<Params>) -> Outcome {
    let set = solutions::enumerate(params);
    let failing = set.failing_members();
    let pass = failing.is_empty();
    let text = match cfg.format {
        Format::Pretty => format!(
            "n = {}: {} independent solutions, {} failing\n",
            params.n(),
            set.len(),
            failing.len()
        ),
        _ => tsv_dump(&set.members),
    };
    Outcome {
        json: json!({
            "nullity": set.len(),
            "failing": failing,
            "members": set.members.iter().map(member_json).collect::<Vec<_>>(),
            "pass": pass,
        }),
        text,
        pass,
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn certificate_json(c: &Certificate) -> Value {
    let mut v = to_value(c);
    let obj = v.as_object_mut().expect("struct serializes to an object");
    // Headline fields next to the detailed sections.
    obj.insert("counts".into(), to_value(&c.completeness.counts));
    obj.insert("nullity".into(), json!(c.completeness.nullity));
    obj.insert("span_equal".into(), json!(c.completeness.span_equal));
    v
}

fn certificate_text(c: &Certificate) -> String {
    let k = &c.completeness;
    let mut s = format!(
        "n = {} (k1 = {}, k2 = {}, c = {})\n",
        c.n, c.params.k1, c.params.k2, c.params.c
    );
    let count = |label: &str, cc: &solutions::CountCheck| {
        let exp = cc.expected.map_or("-".into(), |e| e.to_string());
        format!(
            "  {label:<22} {:>4} (expected {exp}) {}\n",
            cc.computed,
            verdict(cc.pass)
        )
    };
    s += &count("off-diagonal", &k.counts.off_diagonal);
    s += &count("antisymmetric", &k.counts.antisymmetric);
    s += &count("nonsmooth", &k.counts.nonsmooth);
    s += &count("total (nullity)", &k.counts.total);
    let lines = [
        ("subbasis dimensions", c.subbasis_dims.pass()),
        ("generator dependencies", c.dependencies.pass),
        ("vertex conditions", c.vertex_conditions_hold),
        ("families span kernel", k.span_equal),
        ("continuous subspace", c.continuous_subspace.pass),
        ("defect range", c.defect_analysis.pass),
        (
            "defect reconciliation",
            c.defect_comparison.iter().all(|d| d.proportional),
        ),
    ];
    for (label, ok) in lines {
        writeln!(s, "  {label:<22} {}", verdict(ok)).unwrap();
    }
    writeln!(s, "  {:<22} {}", "certificate", verdict(c.pass)).unwrap();
    s
}

pub fn certify(params: &Arc<Params>) -> Outcome {
    let c = solutions::certify(params);
    Outcome {
        json: certificate_json(&c),
        text: certificate_text(&c),
        pass: c.pass,
    }
}

fn residual_json(r: &Residual) -> Value {
    let mut m = Map::new();
    m.insert("condition".into(), json!(r.condition.name()));
    let key = match r.condition {
        Condition::VertexContinuityX | Condition::KirchhoffX => "column",
        Condition::VertexContinuityY | Condition::KirchhoffY => "row",
        Condition::DiagContinuity | Condition::Dbc => "edge",
    };
    m.insert(key.into(), json!(r.index));
    if let Some(o) = r.other {
        m.insert("other".into(), json!(o));
    }
    m.insert(
        "coeffs".into(),
        json!(r.coeffs.iter().map(rational::format).collect::<Vec<_>>()),
    );
    m.insert("pass".into(), json!(r.pass()));
    Value::Object(m)
}

fn check_members(members: &[LabeledWave]) -> Outcome {
    let mut text = String::new();
    let mut pass = true;
    let mut list = Vec::new();
    for m in members {
        let residuals = conditions::all_residuals(&m.wave);
        let failing: Vec<&Residual> = residuals.iter().filter(|r| !r.pass()).collect();
        let ok = failing.is_empty();
        pass &= ok;
        writeln!(text, "{} {}", verdict(ok), m.label).unwrap();
        for r in &failing {
            writeln!(
                text,
                "    {} {} {:?} [{}]",
                r.condition.name(),
                r.index,
                r.other,
                r.coeffs
                    .iter()
                    .map(rational::format)
                    .collect::<Vec<_>>()
                    .join(", ")
            )
            .unwrap();
        }
        list.push(json!({
            "label": m.label,
            "residuals": residuals.iter().map(residual_json).collect::<Vec<_>>(),
            "pass": ok,
        }));
    }
    Outcome {
        json: json!({ "waves": list, "pass": pass }),
        text,
        pass,
    }
}

fn family_members(params: &Arc<Params>) -> Vec<LabeledWave> {
    [
        solutions::family_off_diagonal(params),
        solutions::family_antisymmetric(params),
        solutions::family_nonsmooth(params),
    ]
    .into_iter()
    .flat_map(|f| f.members)
    .collect()
}

pub fn check(params: &Arc<Params>, input: Option<&std::path::Path>) -> Result<Outcome> {
    let members = match input {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let v = CoeffVector::from_tsv(params.n(), &text)
                .map_err(|e| InvalidParams(format!("{}: {e}", path.display())))?;
            let w = Wave::from_coords(&v, params).map_err(|e| InvalidParams(e.to_string()))?;
            vec![LabeledWave::new(path.display().to_string(), w)]
        }
        None => family_members(params),
    };
    Ok(check_members(&members))
}

pub fn defects(params: &Arc<Params>) -> Outcome {
    let vectors: Vec<Value> = solutions::listed_continuous_vectors(params)
        .iter()
        .map(|v| {
            let d = conditions::defect(&v.wave).expect("listed vectors are continuous");
            json!({
                "label": v.label,
                "defect": d.iter().map(|t| json!({"edge": t.edge, "coeffs": t.coeff_strings()})).collect::<Vec<_>>(),
            })
        })
        .collect();
    let comparison = solutions::compare_defects(params);
    let subspace = solutions::continuous_nonsmooth_subspace(params);
    let analysis = solutions::defect_range_analysis(params);
    let pass = comparison.iter().all(|d| d.proportional) && subspace.pass && analysis.pass;

    let mut text = format!("n = {}\n", params.n());
    for d in &comparison {
        writeln!(
            text,
            "  {}: computed [{}] = {} x [{}] {}",
            d.label,
            d.computed.join(", "),
            d.factor,
            d.reference.join(", "),
            verdict(d.proportional)
        )
        .unwrap();
    }
    writeln!(
        text,
        "  continuous subspace dim {} (expected {}) {}",
        subspace.dimension,
        subspace.expected,
        verdict(subspace.pass)
    )
    .unwrap();
    writeln!(
        text,
        "  zero-defect dim {} = smooth-only {} + psi {} + mixed {} {}",
        analysis.zero_defect_dimension,
        analysis.smooth_only_dimension,
        analysis.psi_rank,
        analysis.mixed_rank,
        verdict(analysis.pass)
    )
    .unwrap();
    Outcome {
        json: json!({
            "continuous_vectors": vectors,
            "defect_comparison": comparison,
            "continuous_subspace": subspace,
            "defect_analysis": analysis,
            "pass": pass,
        }),
        text,
        pass,
    }
}

fn order_from(coarse: f64, fine: f64) -> Option<f64> {
    (coarse > 1e-9 && fine > 0.0).then(|| (coarse / fine).log2())
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct NumericEntry {
    check: String,
    h: f64,
    max_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    relative: Option<f64>,
    order: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    order_range: Option<[f64; 2]>,
    pass: bool,
}

fn sampled_worst(
    members: &[LabeledWave],
    cond: SampledCondition,
    samples: usize,
    h: f64,
) -> SampledCheck {
    members
        .iter()
        .map(|m| numeric::sampled_condition_check(&m.wave, cond, samples, h))
        .max_by(|a, b| a.relative.total_cmp(&b.relative))
        .expect("families are nonempty")
}

pub fn numeric_check(cfg: &RunConfig, params: &Arc<Params>) -> Result<Outcome> {
    let members = family_members(params);
    let survey: OrderSurvey = numeric::order_survey(members.iter().map(|m| &m.wave), ORDER_STEP)?;
    let order_ok = survey.within(ORDER_RANGE.0, ORDER_RANGE.1);
    let mut entries = vec![NumericEntry {
        check: "eigen-residual".into(),
        h: survey.h,
        max_residual: survey.max_residual,
        relative: None,
        order: survey.min_order,
        order_range: survey.min_order.zip(survey.max_order).map(|(a, b)| [a, b]),
        pass: order_ok,
    }];
    for cond in SampledCondition::ALL {
        let coarse = sampled_worst(&members, cond, cfg.samples, cfg.h);
        let fine = sampled_worst(&members, cond, cfg.samples, cfg.h / 2.0);
        entries.push(NumericEntry {
            check: cond.name().into(),
            h: cfg.h,
            max_residual: coarse.max_residual,
            relative: Some(coarse.relative),
            order: order_from(coarse.max_residual, fine.max_residual),
            order_range: None,
            pass: coarse.relative < SAMPLED_TOLERANCE,
        });
    }
    let pass = entries.iter().all(|e| e.pass);
    let mut text = format!("n = {} ({} waves)\n", params.n(), members.len());
    for e in &entries {
        let order = e.order.map_or("-".into(), |o| format!("{o:.4}"));
        writeln!(
            text,
            "  {:<18} h = {:<8e} max residual {:.3e} order {order} {}",
            e.check,
            e.h,
            e.max_residual,
            verdict(e.pass)
        )
        .unwrap();
    }
    Ok(Outcome {
        json: json!({ "checks": entries, "pass": pass }),
        text,
        pass,
    })
}
