//! JSON file formats for markings, chains, quasimorphism combinations and
//! metric samples, and JSON views of every certificate type.
//!
//! Rationals are written as strings (`"3/2"`); inputs also accept bare
//! integers. Every document written carries `"schema": "scl-forge/v1"`.

use serde::Deserialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::bounds::{BoundInterval, LowerCertificate, StabilizationWitness, UpperCertificate};
use crate::chains::{Chain1, Chain2};
use crate::coarse::{CoarseError, MetricSample};
use crate::lp::FillingCertificate;
use crate::marking::{Marking, MarkingError};
use crate::qm::{BrooksCombination, DefectReport, QmError};
use crate::rational::{fmt_q, qstr, ExtQ, Q};
use crate::search::{ChainClWitness, ClCertificate};
use crate::word::FreeGroup;

pub const SCHEMA: &str = "scl-forge/v1";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Marking(#[from] MarkingError),
    #[error(transparent)]
    Qm(#[from] QmError),
    #[error(transparent)]
    Coarse(#[from] CoarseError),
    #[error("quotient_matrix has {found} rows, expected one per generator ({rank})")]
    MatrixRows { found: usize, rank: usize },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MarkingFile {
    #[serde(default)]
    #[allow(dead_code)]
    schema: Option<String>,
    rank: usize,
    #[serde(default)]
    generators: Option<Vec<String>>,
    /// Row `i` is `p(xᵢ) ∈ ℤᵏ`.
    #[serde(default)]
    quotient_matrix: Vec<Vec<i64>>,
    /// Orders of cyclic factors of the quotient; only `0` (a ℤ factor) is
    /// accepted.
    #[serde(default)]
    torsion: Vec<i64>,
}

pub fn parse_marking(text: &str) -> Result<Marking, IoError> {
    let f: MarkingFile = serde_json::from_str(text)?;
    if f.torsion.iter().any(|&t| t != 0) {
        return Err(MarkingError::Torsion.into());
    }
    let group = match &f.generators {
        Some(labels) => {
            if labels.len() != f.rank {
                return Err(IoError::Invalid(format!(
                    "{} generator names for rank {}",
                    labels.len(),
                    f.rank
                )));
            }
            FreeGroup::with_labels(labels).map_err(MarkingError::from)?
        }
        None => FreeGroup::new(f.rank).map_err(MarkingError::from)?,
    };
    if f.quotient_matrix.is_empty() {
        return Ok(Marking::new(group, Vec::new())?);
    }
    if f.quotient_matrix.len() != f.rank {
        return Err(IoError::MatrixRows {
            found: f.quotient_matrix.len(),
            rank: f.rank,
        });
    }
    let k = f.quotient_matrix[0].len();
    if f.quotient_matrix.iter().any(|r| r.len() != k) {
        return Err(IoError::Invalid("quotient_matrix rows differ in length".into()));
    }
    let rows = (0..k).map(|j| f.quotient_matrix.iter().map(|r| r[j]).collect()).collect();
    Ok(Marking::new(group, rows)?)
}

pub fn marking_json(m: &Marking) -> Value {
    let k = m.quotient_rank();
    let rows: Vec<Vec<i64>> = (0..m.rank())
        .map(|i| (0..k).map(|j| m.quotient_matrix()[j][i]).collect())
        .collect();
    json!({
        "rank": m.rank(),
        "generators": m.group().labels().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "quotient_matrix": rows,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TermFile {
    word: String,
    #[serde(with = "qstr")]
    coeff: Q,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CellFile {
    pair: (String, String),
    #[serde(with = "qstr")]
    coeff: Q,
}

#[derive(Deserialize)]
struct ChainFile<T> {
    #[serde(default)]
    #[allow(dead_code)]
    schema: Option<String>,
    terms: Vec<T>,
}

pub fn parse_chain(m: &Marking, text: &str) -> Result<Chain1, IoError> {
    let f: ChainFile<TermFile> = serde_json::from_str(text)?;
    let mut c = Chain1::new();
    for t in f.terms {
        c.add_term(m.parse_word(&t.word)?, t.coeff);
    }
    Ok(c)
}

pub fn parse_chain2(m: &Marking, text: &str) -> Result<Chain2, IoError> {
    let f: ChainFile<CellFile> = serde_json::from_str(text)?;
    let mut c = Chain2::new();
    for t in f.terms {
        c.add_term(m.parse_word(&t.pair.0)?, m.parse_word(&t.pair.1)?, t.coeff);
    }
    Ok(c)
}

pub fn chain_json(m: &Marking, c: &Chain1) -> Value {
    json!({
        "terms": c.to_strings(m).into_iter().map(|(w, x)| json!({ "word": w, "coeff": x })).collect::<Vec<_>>()
    })
}

pub fn chain2_json(m: &Marking, c: &Chain2) -> Value {
    json!({
        "terms": c
            .to_strings(m)
            .into_iter()
            .map(|((g, x), k)| json!({ "pair": [g, x], "coeff": k }))
            .collect::<Vec<_>>()
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AtomFile {
    word: String,
    #[serde(with = "qstr")]
    weight: Q,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CombinationFile {
    #[serde(default)]
    #[allow(dead_code)]
    schema: Option<String>,
    atoms: Vec<AtomFile>,
    #[serde(default, with = "opt_q")]
    defect_bound: Option<Q>,
    #[serde(default)]
    window: Option<usize>,
}

mod opt_q {
    use super::*;
    use serde::Deserializer;

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "qstr")] Q);
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}

/// A combination file, or a JSON array of them. Missing bounds default to
/// the weighted atom bounds; a missing window to the default window.
pub fn parse_combinations(m: &Marking, text: &str) -> Result<Vec<BrooksCombination>, IoError> {
    let v: Value = serde_json::from_str(text)?;
    let items = match v {
        Value::Array(xs) => xs,
        other => vec![other],
    };
    items
        .into_iter()
        .map(|item| {
            let f: CombinationFile = serde_json::from_value(item)?;
            let atoms = f
                .atoms
                .into_iter()
                .map(|a| Ok((m.parse_word(&a.word)?, a.weight)))
                .collect::<Result<Vec<_>, MarkingError>>()?;
            let window = f.window.unwrap_or(crate::qm::DEFAULT_WINDOW);
            Ok(match f.defect_bound {
                Some(d) => BrooksCombination::new(atoms, d, window)?,
                None => BrooksCombination::with_default_bound(atoms, window)?,
            })
        })
        .collect()
}

pub fn combination_json(m: &Marking, c: &BrooksCombination) -> Value {
    json!({
        "atoms": c.atoms().map(|(w, x)| json!({ "word": m.format(w), "weight": fmt_q(x) })).collect::<Vec<_>>(),
        "defect_bound": fmt_q(c.defect_bound()),
        "window": c.window(),
    })
}

pub fn defect_report_json(m: &Marking, r: &DefectReport) -> Value {
    json!({
        "empirical_max": fmt_q(&r.empirical_max),
        "bound": fmt_q(&r.bound),
        "pass": r.pass,
        "witness": r.witness.as_ref().map(|(u, v)| [m.format(u), m.format(v)]),
        "window": r.window,
        "pairs_checked": r.pairs_checked,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SampleFile {
    #[serde(default)]
    #[allow(dead_code)]
    schema: Option<String>,
    points: Vec<String>,
    dist: Vec<Vec<ExtQ>>,
}

pub fn parse_sample(text: &str) -> Result<MetricSample, IoError> {
    let f: SampleFile = serde_json::from_str(text)?;
    Ok(MetricSample::new(f.points, f.dist)?)
}

pub fn cl_certificate_json(m: &Marking, c: &ClCertificate) -> Value {
    json!({
        "target": m.format(&c.target),
        "mode": c.mode,
        "terms": c.terms(),
        "pairs": c.pairs.iter().map(|(g, x)| [m.format(g), m.format(x)]).collect::<Vec<_>>(),
    })
}

pub fn chain_witness_json(m: &Marking, w: &ChainClWitness) -> Value {
    json!({
        "factors": w.factors.iter().map(|x| m.format(x)).collect::<Vec<_>>(),
        "conjugators": w.conjugators.iter().map(|x| m.format(x)).collect::<Vec<_>>(),
        "certificate": cl_certificate_json(m, &w.certificate),
    })
}

pub fn filling_json(m: &Marking, c: &FillingCertificate) -> Value {
    json!({
        "target": chain_json(m, &c.target),
        "filling": chain2_json(m, &c.filling),
        "h_adjustment": c.h_adjustment.iter().map(|t| json!({
            "x": m.format(&t.x), "k": t.k, "coeff": fmt_q(&t.coeff)
        })).collect::<Vec<_>>(),
        "value": fmt_q(&c.value),
        "dual_value": fmt_q(&c.dual_value),
        "dual": c.dual.iter().map(|(w, y)| json!({ "word": m.format(w), "weight": fmt_q(y) })).collect::<Vec<_>>(),
        "length_budget": c.length_budget,
        "allow_h": c.allow_h,
    })
}

fn lower_json(m: &Marking, c: &LowerCertificate) -> Value {
    json!({
        "combination": combination_json(m, &c.combination),
        "value": fmt_q(&c.value),
        "bound": fmt_q(&c.bound),
    })
}

fn upper_json(m: &Marking, c: &UpperCertificate) -> Value {
    match c {
        UpperCertificate::Stabilization { k, certificate } => json!({
            "kind": "stabilization", "k": k, "certificate": cl_certificate_json(m, certificate)
        }),
        UpperCertificate::ChainStabilization { k, witness } => json!({
            "kind": "chain_stabilization", "k": k, "witness": chain_witness_json(m, witness)
        }),
        UpperCertificate::Filling(f) => json!({ "kind": "filling", "certificate": filling_json(m, f) }),
        UpperCertificate::Trivial => json!({ "kind": "trivial" }),
    }
}

pub fn interval_json(m: &Marking, i: &BoundInterval) -> Value {
    json!({
        "mode": i.mode,
        "target": chain_json(m, &i.target),
        "lower": fmt_q(&i.lower),
        "upper": i.upper,
        "width": i.width(),
        "lower_certificate": i.lower_cert.as_ref().map(|c| lower_json(m, c)),
        "upper_certificate": i.upper_cert.as_ref().map(|c| upper_json(m, c)),
        "stabilization": i.stabilization.iter().map(|e| json!({
            "k": e.k,
            "terms": e.terms,
            "bound": e.bound.as_ref().map(fmt_q),
            "witness": e.witness.as_ref().map(|w| match w {
                StabilizationWitness::Word(c) => cl_certificate_json(m, c),
                StabilizationWitness::Chain(w) => chain_witness_json(m, w),
            }),
        })).collect::<Vec<_>>(),
        "lp": i.lp,
    })
}

/// Puts `schema` and `kind` first in a JSON object.
pub fn document(kind: &str, body: Value) -> Value {
    let mut out = Map::new();
    out.insert("schema".into(), json!(SCHEMA));
    out.insert("kind".into(), json!(kind));
    if let Value::Object(fields) = body {
        out.extend(fields);
    } else {
        out.insert("result".into(), body);
    }
    Value::Object(out)
}
