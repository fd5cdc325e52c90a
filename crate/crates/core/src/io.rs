//! JSON documents for spaces, elements, functions and certificates.
//!
//! Rationals are always strings. Objects are emitted with sorted keys, so
//! the same input always serializes to the same bytes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::free_space::{combine, FreeElement, LipschitzFunction, MoleculeTerm, NormCertificate};
use crate::metric::{FiniteMetricSpace, Point, PointIdx};
use crate::rational::{parse, to_canonical, to_display, zero, Rational};

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct PointDoc {
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<[String; 2]>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct SpaceDoc {
    points: Vec<PointDoc>,
    base: String,
    dist: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<Value>,
}

/// Reads a space without checking the metric axioms; structural problems
/// (unknown base, ragged matrix, bad numbers) are format errors.
pub fn parse_space_unchecked(text: &str) -> Result<FiniteMetricSpace> {
    let doc: SpaceDoc = serde_json::from_str(text)?;
    let points = doc
        .points
        .into_iter()
        .map(|p| match p.label {
            Some([a, b]) => Ok(Point::labelled(p.id, parse(&a)?, parse(&b)?)),
            None => Ok(Point::new(p.id)),
        })
        .collect::<Result<Vec<_>>>()?;
    let dist = doc
        .dist
        .iter()
        .map(|row| row.iter().map(|d| parse(d)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let space = FiniteMetricSpace::from_parts(points, dist, &doc.base)?;
    Ok(match doc.meta {
        Some(meta) => space.with_meta(meta),
        None => space,
    })
}

/// Reads and validates a space.
pub fn parse_space(text: &str) -> Result<FiniteMetricSpace> {
    let space = parse_space_unchecked(text)?;
    space.validate()?;
    Ok(space)
}

pub fn space_to_json(space: &FiniteMetricSpace) -> Value {
    let doc = SpaceDoc {
        points: space
            .points()
            .iter()
            .map(|p| PointDoc {
                id: p.id.clone(),
                label: p
                    .label
                    .as_ref()
                    .map(|[a, b]| [to_canonical(a), to_canonical(b)]),
            })
            .collect(),
        base: space.id(space.base()).to_string(),
        dist: space
            .matrix()
            .iter()
            .map(|row| row.iter().map(to_canonical).collect())
            .collect(),
        meta: space.meta().cloned(),
    };
    serde_json::to_value(doc).expect("plain data")
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDoc {
    x: String,
    y: String,
    w: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementDoc {
    masses: Option<BTreeMap<String, String>>,
    molecules: Option<Vec<TermDoc>>,
}

/// `{"masses": {...}}` or `{"molecules": [{"x","y","w"}, ...]}`.
pub fn parse_element(space: &FiniteMetricSpace, text: &str) -> Result<FreeElement> {
    let doc: ElementDoc = serde_json::from_str(text)?;
    match (doc.masses, doc.molecules) {
        (Some(masses), None) => {
            let mut values = vec![zero(); space.len()];
            for (id, m) in masses {
                values[space.index_of(&id)?] = parse(&m)?;
            }
            FreeElement::from_masses(space, values)
        }
        (None, Some(terms)) => {
            let terms = terms
                .iter()
                .map(|t| {
                    Ok(MoleculeTerm::new(
                        space.index_of(&t.x)?,
                        space.index_of(&t.y)?,
                        parse(&t.w)?,
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            combine(space, &terms)
        }
        _ => Err(Error::Format(
            "element needs exactly one of \"masses\" or \"molecules\"".into(),
        )),
    }
}

pub fn terms_to_json(space: &FiniteMetricSpace, terms: &[MoleculeTerm]) -> Value {
    Value::Array(
        terms
            .iter()
            .map(|t| json!({"x": space.id(t.x), "y": space.id(t.y), "w": to_canonical(&t.weight)}))
            .collect(),
    )
}

/// Nonzero masses keyed by id, plus the presentation when there is one.
pub fn element_to_json(space: &FiniteMetricSpace, el: &FreeElement) -> Value {
    let masses: BTreeMap<&str, String> = el
        .support()
        .into_iter()
        .map(|p| (space.id(p), to_canonical(el.mass(p))))
        .collect();
    let mut out = json!({ "masses": masses });
    if let Some(terms) = el.presentation() {
        out["molecules"] = terms_to_json(space, terms);
    }
    out
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctionDoc {
    values: BTreeMap<String, String>,
}

/// `{"values": {...}}` covering every point; must vanish at the base.
pub fn parse_function(space: &FiniteMetricSpace, text: &str) -> Result<LipschitzFunction> {
    let doc: FunctionDoc = serde_json::from_str(text)?;
    let mut values: Vec<Option<Rational>> = vec![None; space.len()];
    for (id, v) in doc.values {
        values[space.index_of(&id)?] = Some(parse(&v)?);
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(p, v)| v.ok_or_else(|| Error::Format(format!("no value for point {}", space.id(p)))))
        .collect::<Result<Vec<_>>>()?;
    LipschitzFunction::new(space, values)
}

pub fn function_to_json(space: &FiniteMetricSpace, f: &LipschitzFunction) -> Value {
    let values: BTreeMap<&str, String> = (0..space.len())
        .map(|p| (space.id(p), to_canonical(f.value(p))))
        .collect();
    json!({ "values": values })
}

pub fn certificate_to_json(space: &FiniteMetricSpace, cert: &NormCertificate) -> Value {
    let mut flow: Vec<_> = cert.flow.iter().collect();
    flow.sort_by(|a, b| {
        (space.id(a.from), space.id(a.to)).cmp(&(space.id(b.from), space.id(b.to)))
    });
    json!({
        "value": number(&cert.value),
        "flow": flow
            .iter()
            .map(|a| json!({"from": space.id(a.from), "to": space.id(a.to), "amount": to_canonical(&a.amount)}))
            .collect::<Vec<_>>(),
        "potential": function_to_json(space, &cert.potential),
    })
}

/// `{"exact": "p/q", "display": "<decimal>"}`; the decimal is for reading
/// only.
pub fn number(value: &Rational) -> Value {
    json!({"exact": to_canonical(value), "display": to_display(value)})
}

pub fn pair_to_json(space: &FiniteMetricSpace, (u, v): (PointIdx, PointIdx)) -> Value {
    json!([space.id(u), space.id(v)])
}

/// Parses `"u:v"` into a pair of points.
pub fn parse_pair(space: &FiniteMetricSpace, text: &str) -> Result<(PointIdx, PointIdx)> {
    let (u, v) = text
        .split_once(':')
        .ok_or_else(|| Error::Format(format!("expected u:v, got {text:?}")))?;
    Ok((space.index_of(u)?, space.index_of(v)?))
}
