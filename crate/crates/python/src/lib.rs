//! Python module `lipfree_py`. Rationals cross the boundary as `"p/q"`
//! strings; points are addressed by id.

use std::collections::BTreeMap;

use lipfree::calculus::{self, MuScope};
use lipfree::classify::{self, Slice, WitnessOutcome};
use lipfree::free_space::{self, combine, FreeElement, MoleculeTerm};
use lipfree::rational::{parse, to_canonical};
use lipfree::spaces::{self, RandomScheme};
use lipfree::{io, FiniteMetricSpace, Point, PointIdx, Rational};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: lipfree::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rat(text: &str) -> PyResult<Rational> {
    parse(text).map_err(err)
}

#[pyclass(name = "MetricSpace", module = "lipfree_py", frozen)]
pub struct PyMetricSpace {
    inner: FiniteMetricSpace,
}

impl PyMetricSpace {
    fn idx(&self, id: &str) -> PyResult<PointIdx> {
        self.inner.index_of(id).map_err(err)
    }

    fn pair(&self, (u, v): (PointIdx, PointIdx)) -> (String, String) {
        (self.inner.id(u).to_string(), self.inner.id(v).to_string())
    }

    fn check(&self, el: &PyElement) -> PyResult<()> {
        if el.inner.masses().len() != self.inner.len() {
            return Err(PyValueError::new_err(
                "element belongs to a different space",
            ));
        }
        Ok(())
    }
}

#[pymethods]
impl PyMetricSpace {
    /// Validated space from ids, a distance matrix of rational strings and
    /// the base point id.
    #[new]
    fn new(ids: Vec<String>, dist: Vec<Vec<String>>, base: &str) -> PyResult<Self> {
        let dist = dist
            .iter()
            .map(|row| row.iter().map(|d| rat(d)).collect::<PyResult<Vec<_>>>())
            .collect::<PyResult<Vec<_>>>()?;
        let points = ids.into_iter().map(Point::new).collect();
        let inner = FiniteMetricSpace::new(points, dist, base).map_err(err)?;
        Ok(PyMetricSpace { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyMetricSpace {
            inner: io::parse_space(text).map_err(err)?,
        })
    }

    #[staticmethod]
    fn example32(depth: u32) -> PyResult<Self> {
        Ok(PyMetricSpace {
            inner: spaces::gen_example32(depth).map_err(err)?,
        })
    }

    #[staticmethod]
    fn example46(step_exponent: u32) -> PyResult<Self> {
        Ok(PyMetricSpace {
            inner: spaces::gen_example46(step_exponent).map_err(err)?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (n, seed, scheme = "shortest-path"))]
    fn random(n: usize, seed: u64, scheme: &str) -> PyResult<Self> {
        let scheme = RandomScheme::parse(scheme).map_err(err)?;
        Ok(PyMetricSpace {
            inner: spaces::gen_random(n, seed, scheme).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        io::space_to_json(&self.inner).to_string()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "MetricSpace(points={}, base={:?})",
            self.inner.len(),
            self.inner.id(self.inner.base())
        )
    }

    fn ids(&self) -> Vec<String> {
        self.inner.points().iter().map(|p| p.id.clone()).collect()
    }

    fn base(&self) -> String {
        self.inner.id(self.inner.base()).to_string()
    }

    fn distance(&self, u: &str, v: &str) -> PyResult<String> {
        Ok(to_canonical(self.inner.d(self.idx(u)?, self.idx(v)?)))
    }

    fn segment(&self, u: &str, v: &str) -> PyResult<Vec<String>> {
        let seg = self
            .inner
            .segment(self.idx(u)?, self.idx(v)?)
            .map_err(err)?;
        Ok(seg
            .into_iter()
            .map(|p| self.inner.id(p).to_string())
            .collect())
    }

    fn is_denting(&self, u: &str, v: &str) -> PyResult<bool> {
        classify::is_denting(&self.inner, self.idx(u)?, self.idx(v)?).map_err(err)
    }

    fn denting_set(&self) -> Vec<(String, String)> {
        classify::denting_set(&self.inner)
            .into_iter()
            .map(|p| self.pair(p))
            .collect()
    }
}

#[pyclass(name = "Element", module = "lipfree_py", frozen)]
pub struct PyElement {
    inner: FreeElement,
}

#[pymethods]
impl PyElement {
    #[staticmethod]
    fn molecule(space: &PyMetricSpace, x: &str, y: &str) -> PyResult<Self> {
        Ok(PyElement {
            inner: free_space::molecule(&space.inner, space.idx(x)?, space.idx(y)?).map_err(err)?,
        })
    }

    /// `Σ w·m_xy` over `(x, y, w)` triples, keeping the presentation.
    #[staticmethod]
    fn combination(space: &PyMetricSpace, terms: Vec<(String, String, String)>) -> PyResult<Self> {
        let terms = terms
            .iter()
            .map(|(x, y, w)| Ok(MoleculeTerm::new(space.idx(x)?, space.idx(y)?, rat(w)?)))
            .collect::<PyResult<Vec<_>>>()?;
        Ok(PyElement {
            inner: combine(&space.inner, &terms).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_json(space: &PyMetricSpace, text: &str) -> PyResult<Self> {
        Ok(PyElement {
            inner: io::parse_element(&space.inner, text).map_err(err)?,
        })
    }

    fn masses(&self, space: &PyMetricSpace) -> PyResult<BTreeMap<String, String>> {
        space.check(self)?;
        Ok(self
            .inner
            .support()
            .into_iter()
            .map(|p| {
                (
                    space.inner.id(p).to_string(),
                    to_canonical(self.inner.mass(p)),
                )
            })
            .collect())
    }

    fn __sub__(&self, other: &PyElement) -> PyElement {
        PyElement {
            inner: self.inner.minus(&other.inner),
        }
    }

    fn __add__(&self, other: &PyElement) -> PyElement {
        PyElement {
            inner: self.inner.plus(&other.inner),
        }
    }
}

#[pyfunction]
fn norm(space: &PyMetricSpace, el: &PyElement) -> PyResult<String> {
    space.check(el)?;
    Ok(to_canonical(
        &free_space::norm_value(&space.inner, &el.inner).map_err(err)?,
    ))
}

/// Certificate as a JSON document (value, flow, potential).
#[pyfunction]
fn norm_certificate(space: &PyMetricSpace, el: &PyElement) -> PyResult<String> {
    space.check(el)?;
    let cert = free_space::norm(&space.inner, &el.inner).map_err(err)?;
    Ok(io::certificate_to_json(&space.inner, &cert).to_string())
}

#[pyfunction]
fn pair_sum_norm(space: &PyMetricSpace, x: &str, y: &str, u: &str, v: &str) -> PyResult<String> {
    let s = space;
    let report = calculus::pair_sum_norm(&s.inner, s.idx(x)?, s.idx(y)?, s.idx(u)?, s.idx(v)?)
        .map_err(err)?;
    Ok(to_canonical(&report.value))
}

#[pyfunction]
fn pair_distance(space: &PyMetricSpace, x: &str, y: &str, u: &str, v: &str) -> PyResult<String> {
    let s = space;
    let d = calculus::pair_distance(&s.inner, s.idx(x)?, s.idx(y)?, s.idx(u)?, s.idx(v)?)
        .map_err(err)?;
    Ok(to_canonical(&d))
}

/// Returns `(status, offending)` with `offending = (u, v, distance)` or
/// `None`.
#[pyfunction]
#[pyo3(signature = (space, el, exclude = Vec::new()))]
fn is_daugavet(
    space: &PyMetricSpace,
    el: &PyElement,
    exclude: Vec<(String, String)>,
) -> PyResult<(String, Option<(String, String, String)>)> {
    space.check(el)?;
    let exclude = exclude
        .iter()
        .map(|(u, v)| Ok((space.idx(u)?, space.idx(v)?)))
        .collect::<PyResult<Vec<_>>>()?;
    let verdict = classify::is_daugavet(&space.inner, &el.inner, &exclude).map_err(err)?;
    let offending = verdict.offending.map(|o| {
        let (u, v) = space.pair((o.u, o.v));
        (u, v, to_canonical(&o.distance))
    });
    Ok((verdict.status.name().to_string(), offending))
}

/// Members of M(μ) as `(u, v, lambda_max)`.
#[pyfunction]
#[pyo3(signature = (space, el, all_pairs = false))]
fn mu_set(
    space: &PyMetricSpace,
    el: &PyElement,
    all_pairs: bool,
) -> PyResult<Vec<(String, String, String)>> {
    space.check(el)?;
    let scope = if all_pairs {
        MuScope::AllPairs
    } else {
        MuScope::Presentation
    };
    let set = calculus::mu_set(&space.inner, &el.inner, scope).map_err(err)?;
    Ok(set
        .members
        .iter()
        .map(|m| {
            let (u, v) = space.pair((m.u, m.v));
            (u, v, to_canonical(&m.lambda))
        })
        .collect())
}

#[pyfunction]
fn support_function(space: &PyMetricSpace, el: &PyElement) -> PyResult<BTreeMap<String, String>> {
    space.check(el)?;
    let f = calculus::support_function(&space.inner, &el.inner).map_err(err)?;
    Ok((0..space.inner.len())
        .map(|p| (space.inner.id(p).to_string(), to_canonical(f.value(p))))
        .collect())
}

fn slice_from(
    space: &PyMetricSpace,
    el: &PyElement,
    values: Option<BTreeMap<String, String>>,
    alpha: &str,
) -> PyResult<Slice> {
    let f = match values {
        Some(values) => {
            let mut v = vec![None; space.inner.len()];
            for (id, value) in &values {
                v[space.idx(id)?] = Some(rat(value)?);
            }
            let v = v.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| {
                PyValueError::new_err("function must give a value at every point")
            })?;
            free_space::LipschitzFunction::new(&space.inner, v).map_err(err)?
        }
        None => {
            free_space::norm(&space.inner, &el.inner)
                .map_err(err)?
                .potential
        }
    };
    Slice::normalized(&space.inner, f, rat(alpha)?).map_err(err)
}

/// Shortest molecule `(u, v, length)` in the slice of `values` (default:
/// the transport potential of `el`) at `alpha`.
#[pyfunction]
#[pyo3(signature = (space, el, alpha, values = None))]
fn delta_scan(
    space: &PyMetricSpace,
    el: &PyElement,
    alpha: &str,
    values: Option<BTreeMap<String, String>>,
) -> PyResult<(String, String, String)> {
    space.check(el)?;
    let slice = slice_from(space, el, values, alpha)?;
    let row = classify::delta_scan(&space.inner, &el.inner, &[slice])
        .map_err(err)?
        .remove(0);
    let (u, v) = space.pair(row.witness);
    Ok((u, v, to_canonical(&row.min_length)))
}

/// `(kind, u, v, distance)` with `kind` one of `found`, `no-split-point`,
/// `step-budget-exhausted`.
#[pyfunction]
#[pyo3(signature = (space, el, alpha, eps, values = None))]
fn witness_search(
    space: &PyMetricSpace,
    el: &PyElement,
    alpha: &str,
    eps: &str,
    values: Option<BTreeMap<String, String>>,
) -> PyResult<(String, String, String, String)> {
    space.check(el)?;
    let slice = slice_from(space, el, values, alpha)?;
    let report = classify::daugavet_witness_search(&space.inner, &el.inner, &slice, &rat(eps)?)
        .map_err(err)?;
    let (kind, step) = match &report.outcome {
        WitnessOutcome::Found(step) => ("found", step),
        WitnessOutcome::Terminal { last, reason } => (reason.name(), last),
    };
    let (u, v) = space.pair((step.u, step.v));
    Ok((kind.to_string(), u, v, to_canonical(&step.distance)))
}

#[pymodule]
fn lipfree_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMetricSpace>()?;
    m.add_class::<PyElement>()?;
    m.add_function(wrap_pyfunction!(norm, m)?)?;
    m.add_function(wrap_pyfunction!(norm_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(pair_sum_norm, m)?)?;
    m.add_function(wrap_pyfunction!(pair_distance, m)?)?;
    m.add_function(wrap_pyfunction!(is_daugavet, m)?)?;
    m.add_function(wrap_pyfunction!(mu_set, m)?)?;
    m.add_function(wrap_pyfunction!(support_function, m)?)?;
    m.add_function(wrap_pyfunction!(delta_scan, m)?)?;
    m.add_function(wrap_pyfunction!(witness_search, m)?)?;
    Ok(())
}
