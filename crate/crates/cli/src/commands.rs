use std::fs;

use lipfree::calculus::{f_mu, mu_set, pair_distance, pair_sum_norm, support_function, MuScope};
use lipfree::classify::{
    condition_iii_check, daugavet_witness_search, delta_scan, denting_descent, denting_set,
    is_daugavet, is_denting, Slice, WitnessOutcome, WitnessStep,
};
use lipfree::free_space::{combine, norm, FreeElement, LipschitzFunction, MoleculeTerm};
use lipfree::io::{
    certificate_to_json, element_to_json, number, pair_to_json, parse_element, parse_function,
    parse_pair, parse_space, parse_space_unchecked, space_to_json,
};
use lipfree::rational::{one, parse, pow, rat, to_canonical, two};
use lipfree::spaces::{
    example32_denting_prediction, example32_midpoint_witness, example46_balanced_function,
    example46_half_slope_function, gen_example32, gen_example46, GeneratorSpec, RandomScheme,
};
use lipfree::{Error, FiniteMetricSpace, PointIdx, Result, SegmentQuery};
use serde_json::{json, Value};

use crate::manifest::RunManifest;
use crate::{Command, Family, GenKind, SliceKind};

pub struct Outcome {
    pub text: String,
    pub code: u8,
}

impl Outcome {
    fn json(manifest: &RunManifest, mut body: Value, holds: bool) -> Self {
        body["manifest"] = manifest.to_json();
        let mut text = serde_json::to_string_pretty(&body).expect("plain data");
        text.push('\n');
        Outcome {
            text,
            code: if holds { 0 } else { 1 },
        }
    }
}

fn read(path: &str) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Format(format!("cannot read {path}: {e}")))
}

fn load_space(manifest: &mut RunManifest, path: &str) -> Result<FiniteMetricSpace> {
    let text = read(path)?;
    manifest.input("space", path, &text);
    let space = parse_space(&text)?;
    manifest.space(space.meta());
    Ok(space)
}

fn load_element(
    manifest: &mut RunManifest,
    space: &FiniteMetricSpace,
    path: &str,
) -> Result<FreeElement> {
    let text = read(path)?;
    manifest.input("element", path, &text);
    parse_element(space, &text)
}

fn step_json(space: &FiniteMetricSpace, step: &WitnessStep) -> Value {
    json!({
        "pair": pair_to_json(space, (step.u, step.v)),
        "length": number(&step.length),
        "distance": number(&step.distance),
    })
}

fn pairs_json(space: &FiniteMetricSpace, pairs: &[(PointIdx, PointIdx)]) -> Value {
    Value::Array(pairs.iter().map(|&p| pair_to_json(space, p)).collect())
}

fn slice_function(
    space: &FiniteMetricSpace,
    el: &FreeElement,
    kind: SliceKind,
) -> Result<LipschitzFunction> {
    match kind {
        SliceKind::Potential => Ok(norm(space, el)?.potential),
        SliceKind::FMu => Ok(f_mu(space, el)?.f),
        SliceKind::Support => support_function(space, el),
        SliceKind::Balanced => example46_balanced_function(space),
        SliceKind::HalfSlope => example46_half_slope_function(space),
    }
}

fn slice_name(kind: SliceKind) -> &'static str {
    match kind {
        SliceKind::Potential => "potential",
        SliceKind::FMu => "f-mu",
        SliceKind::Support => "support",
        SliceKind::Balanced => "balanced",
        SliceKind::HalfSlope => "half-slope",
    }
}

/// `x:y` (weight 1) or `x:y:w,u:v:w,...`.
fn element_from_spec(space: &FiniteMetricSpace, spec: &str) -> Result<FreeElement> {
    let terms = spec
        .split(',')
        .map(|term| {
            let parts: Vec<&str> = term.trim().split(':').collect();
            let (x, y, w) = match parts[..] {
                [x, y] => (x, y, one()),
                [x, y, w] => (x, y, parse(w)?),
                _ => return Err(Error::Format(format!("bad molecule term {term:?}"))),
            };
            Ok(MoleculeTerm::new(space.index_of(x)?, space.index_of(y)?, w))
        })
        .collect::<Result<Vec<_>>>()?;
    combine(space, &terms)
}

fn list<T>(text: &str, what: &str, item: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    let items: Vec<&str> = text
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .collect();
    if items.is_empty() {
        return Err(Error::Format(format!("{what} list is empty")));
    }
    items.into_iter().map(item).collect()
}

pub fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Validate { space } => validate(&space),
        Command::Norm { space, element } => {
            let mut m = RunManifest::new("norm");
            let s = load_space(&mut m, &space)?;
            let el = load_element(&mut m, &s, &element)?;
            let cert = norm(&s, &el)?;
            let body = json!({
                "element": element_to_json(&s, &el),
                "norm": number(&cert.value),
                "certificate": certificate_to_json(&s, &cert),
            });
            Ok(Outcome::json(&m, body, true))
        }
        Command::Pairnorm {
            space,
            first,
            second,
        } => {
            let mut m = RunManifest::new("pairnorm");
            m.param("first", first.as_str())
                .param("second", second.as_str());
            let s = load_space(&mut m, &space)?;
            let (x, y) = parse_pair(&s, &first)?;
            let (u, v) = parse_pair(&s, &second)?;
            let sum = pair_sum_norm(&s, x, y, u, v)?;
            let body = json!({
                "sum": {
                    "value": number(&sum.value),
                    "epsilon_star": number(&sum.epsilon_star),
                    "attained_by_cap": sum.attained_by_cap,
                },
                "difference": number(&pair_distance(&s, x, y, u, v)?),
            });
            Ok(Outcome::json(&m, body, true))
        }
        Command::Denting { space, pair } => {
            let mut m = RunManifest::new("denting");
            let s = load_space(&mut m, &space)?;
            match pair {
                Some(text) => {
                    m.param("pair", text.as_str());
                    let (u, v) = parse_pair(&s, &text)?;
                    let denting = is_denting(&s, u, v)?;
                    let segment: Vec<&str> =
                        s.segment(u, v)?.into_iter().map(|p| s.id(p)).collect();
                    let body = json!({
                        "pair": pair_to_json(&s, (u, v)),
                        "denting": denting,
                        "segment": segment,
                    });
                    Ok(Outcome::json(&m, body, denting))
                }
                None => {
                    let set = denting_set(&s);
                    let body = json!({"count": set.len(), "denting_set": pairs_json(&s, &set)});
                    Ok(Outcome::json(&m, body, true))
                }
            }
        }
        Command::Daugavet {
            space,
            element,
            exclude,
            condition_iii,
        } => {
            let mut m = RunManifest::new("daugavet");
            m.param("exclude", exclude.clone())
                .param("condition_iii", condition_iii);
            let s = load_space(&mut m, &space)?;
            let el = load_element(&mut m, &s, &element)?;
            let excluded = exclude
                .iter()
                .map(|p| parse_pair(&s, p))
                .collect::<Result<Vec<_>>>()?;
            let verdict = is_daugavet(&s, &el, &excluded)?;
            let mut body = json!({
                "is_daugavet": verdict.is_daugavet,
                "status": verdict.status.name(),
                "offending": verdict.offending.as_ref().map(|o| json!({
                    "pair": pair_to_json(&s, (o.u, o.v)),
                    "distance": number(&o.distance),
                    "excluded": o.excluded,
                })),
                "min_unexcluded": verdict.min_unexcluded().map(number),
                "distances": verdict.distances.iter().map(|d| json!({
                    "pair": pair_to_json(&s, (d.u, d.v)),
                    "distance": number(&d.distance),
                    "excluded": d.excluded,
                })).collect::<Vec<_>>(),
            });
            if condition_iii {
                let report = condition_iii_check(&s, &el)?;
                let row = |r: &lipfree::classify::ConditionRow| {
                    json!({
                        "pair": pair_to_json(&s, (r.u, r.v)),
                        "r_plus_s": number(&r.r_plus_s),
                        "bound": number(&r.bound),
                        "distance": number(&r.distance),
                    })
                };
                body["condition_iii"] = json!({
                    "checked": report.checked.len(),
                    "vacuous": report.vacuous,
                    "violations": report.violations.iter().map(row).collect::<Vec<_>>(),
                });
            }
            Ok(Outcome::json(&m, body, verdict.is_daugavet))
        }
        Command::MuSet {
            space,
            element,
            all_pairs,
        } => {
            let mut m = RunManifest::new("mu-set");
            m.param("all_pairs", all_pairs);
            let s = load_space(&mut m, &space)?;
            let el = load_element(&mut m, &s, &element)?;
            let scope = if all_pairs {
                MuScope::AllPairs
            } else {
                MuScope::Presentation
            };
            let set = mu_set(&s, &el, scope)?;
            let body = json!({
                "candidates": set.candidates.len(),
                "members": set.members.iter().map(|mm| json!({
                    "pair": pair_to_json(&s, (mm.u, mm.v)),
                    "lambda": number(&mm.lambda),
                    "residual": element_to_json(&s, &mm.residual),
                })).collect::<Vec<_>>(),
            });
            Ok(Outcome::json(&m, body, true))
        }
        Command::Witness {
            space,
            element,
            function,
            slice,
            alpha,
            eps,
        } => {
            let mut m = RunManifest::new("witness");
            m.param("alpha", to_canonical(&alpha))
                .param("eps", to_canonical(&eps));
            let s = load_space(&mut m, &space)?;
            let el = load_element(&mut m, &s, &element)?;
            let f = match &function {
                Some(path) => {
                    let text = read(path)?;
                    m.input("function", path, &text);
                    parse_function(&s, &text)?
                }
                None => {
                    m.param("slice", slice_name(slice));
                    slice_function(&s, &el, slice)?
                }
            };
            let sl = Slice::normalized(&s, f, alpha)?;
            let report = daugavet_witness_search(&s, &el, &sl, &eps)?;
            let outcome = match &report.outcome {
                WitnessOutcome::Found(step) => {
                    json!({"kind": "found", "step": step_json(&s, step)})
                }
                WitnessOutcome::Terminal { last, reason } => {
                    json!({"kind": "terminal", "reason": reason.name(), "step": step_json(&s, last)})
                }
            };
            let body = json!({
                "outcome": outcome,
                "path": report.path.iter().map(|st| step_json(&s, st)).collect::<Vec<_>>(),
                "steps": report.steps,
                "delta": number(&report.delta),
                "gamma": number(&report.gamma),
            });
            Ok(Outcome::json(&m, body, true))
        }
        Command::Descent {
            space,
            pair,
            r,
            s: radius,
            delta,
        } => {
            let mut m = RunManifest::new("descent");
            m.param("pair", pair.as_str())
                .param("r", to_canonical(&r))
                .param("s", to_canonical(&radius))
                .param("delta", to_canonical(&delta));
            let sp = load_space(&mut m, &space)?;
            let (u, v) = parse_pair(&sp, &pair)?;
            let out = denting_descent(&sp, u, v, &r, &radius, &delta)?;
            let body = json!({
                "result": pair_to_json(&sp, (out.x, out.y)),
                "path": pairs_json(&sp, &out.path),
            });
            Ok(Outcome::json(&m, body, true))
        }
        Command::Gen { kind } => {
            let spec = match kind {
                GenKind::Example32 { depth } => GeneratorSpec::Example32 { depth },
                GenKind::Example46 { step_exponent } => GeneratorSpec::Example46 { step_exponent },
                GenKind::Grid { rows, cols } => GeneratorSpec::Grid { rows, cols },
                GenKind::Random { n, seed, scheme } => GeneratorSpec::Random {
                    n,
                    seed,
                    scheme: RandomScheme::parse(&scheme)?,
                },
            };
            let space = spec.generate()?;
            let mut text =
                serde_json::to_string_pretty(&space_to_json(&space)).expect("plain data");
            text.push('\n');
            Ok(Outcome { text, code: 0 })
        }
        Command::ReportExample32 { depth } => report_example32(depth),
        Command::DeltaProfile {
            family,
            steps,
            element,
            slice,
            alphas,
        } => delta_profile(family, &steps, &element, slice, &alphas),
    }
}

fn validate(path: &str) -> Result<Outcome> {
    let mut m = RunManifest::new("validate");
    let text = read(path)?;
    m.input("space", path, &text);
    let space = parse_space_unchecked(&text)?;
    m.space(space.meta());
    let violation = space.validate().err();
    let body = json!({
        "valid": violation.is_none(),
        "points": space.len(),
        "violation": violation.as_ref().map(|v| json!({
            "axiom": v.axiom(),
            "witnesses": v.witnesses(),
            "message": v.to_string(),
        })),
    });
    Ok(Outcome::json(&m, body, violation.is_none()))
}

fn report_example32(depth: u32) -> Result<Outcome> {
    let mut m = RunManifest::new("report-example32");
    m.param("depth", depth);
    let s = gen_example32(depth)?;
    m.space(s.meta());
    let (x, y) = (s.index_of("x")?, s.index_of("y")?);
    let mxy = lipfree::free_space::molecule(&s, x, y)?;

    let set = denting_set(&s);
    let predicted = example32_denting_prediction(&s)?;
    let verdict = is_daugavet(&s, &mxy, &[(x, y), (y, x)])?;

    let witnesses = (1..=depth.saturating_sub(2))
        .map(|n| {
            let z = example32_midpoint_witness(&s, n)?;
            let delta = pow(&rat(1, 2), n);
            let seg = s.delta_segment(&SegmentQuery {
                u: x,
                v: y,
                delta: delta.clone(),
            })?;
            let half = rat(1, 2);
            Ok(json!({
                "n": n,
                "z": s.id(z),
                "delta": to_canonical(&delta),
                "d_xz": number(s.d(x, z)),
                "d_yz": number(s.d(y, z)),
                "in_delta_segment": seg.contains(&z),
                "outside_balls": !s.in_ball(x, z, &half) && !s.in_ball(y, z, &half),
            }))
        })
        .collect::<Result<Vec<_>>>()?;

    let all_two = verdict
        .distances
        .iter()
        .filter(|d| !d.excluded)
        .all(|d| d.distance == two());
    let body = json!({
        "space_id": GeneratorSpec::Example32 { depth }.space_id(),
        "points": s.len(),
        "denting_set": pairs_json(&s, &set),
        "matches_prediction": set == predicted,
        "distances": verdict.distances.iter().map(|d| json!({
            "pair": pair_to_json(&s, (d.u, d.v)),
            "distance": number(&d.distance),
            "excluded": d.excluded,
        })).collect::<Vec<_>>(),
        "verdict": {
            "status": verdict.status.name(),
            "excluded": pairs_json(&s, &[(x, y), (y, x)]),
            "min_unexcluded": verdict.min_unexcluded().map(number),
            "all_unexcluded_at_two": all_two,
        },
        "z_witnesses": witnesses,
    });
    Ok(Outcome::json(&m, body, true))
}

fn delta_profile(
    family: Family,
    steps: &str,
    element: &str,
    slice: SliceKind,
    alphas: &str,
) -> Result<Outcome> {
    let steps = list(steps, "step", |t| {
        t.parse::<u32>()
            .map_err(|e| Error::Format(format!("bad step {t:?}: {e}")))
    })?;
    let alphas = list(alphas, "alpha", parse)?;
    let mut m = RunManifest::new("delta-profile");
    m.param(
        "family",
        match family {
            Family::Example32 => "example32",
            Family::Example46 => "example46",
        },
    )
    .param("steps", steps.clone())
    .param("element", element)
    .param("slice", slice_name(slice))
    .param(
        "alphas",
        alphas.iter().map(to_canonical).collect::<Vec<_>>(),
    );

    let mut text = format!("# manifest: {}\n", m.to_json());
    text.push_str(
        "space_id,step,slice_id,alpha,min_length_num,min_length_den,witness_u,witness_v\n",
    );
    for &k in &steps {
        let spec = match family {
            Family::Example32 => GeneratorSpec::Example32 { depth: k },
            Family::Example46 => GeneratorSpec::Example46 { step_exponent: k },
        };
        let s = match family {
            Family::Example32 => gen_example32(k)?,
            Family::Example46 => gen_example46(k)?,
        };
        let el = element_from_spec(&s, element)?;
        let f = slice_function(&s, &el, slice)?;
        let slices = alphas
            .iter()
            .map(|a| Slice::normalized(&s, f.clone(), a.clone()))
            .collect::<Result<Vec<_>>>()?;
        for row in delta_scan(&s, &el, &slices)? {
            text.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                spec.space_id(),
                to_canonical(&pow(&rat(1, 2), k)),
                slice_name(slice),
                to_canonical(&row.alpha),
                row.min_length.numer(),
                row.min_length.denom(),
                s.id(row.witness.0),
                s.id(row.witness.1),
            ));
        }
    }
    Ok(Outcome { text, code: 0 })
}
