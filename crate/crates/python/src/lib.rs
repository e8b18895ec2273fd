use std::fmt::Display;
use std::sync::Arc;

use gcat::catalog::group_by_name;
use gcat::colimits::{dwyer_witness, pushout_along_dwyer, pushout_oracle};
use gcat::fincat::{chain, pullback, poset_to_category, FinCat, FinFunctor};
use gcat::gaction::{fixed_category, phi, tensor, GCategory};
use gcat::group::{coset_gset, orbit_category, subgroups, FinGroup, Subgroup};
use gcat::homology::homology;
use gcat::io::{
    decode_category, decode_functor, decode_gaction, decode_sset, encode_category, encode_functor, encode_gaction, encode_ogdiagram,
    encode_group, encode_sset, parse_manifest, to_json,
};
use gcat::sset::{categorify, nerve, sd, standard_complex, StandardKind, TruncSSet};
use gcat::verify::run_suite;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: impl Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn subgroup_of(g: &FinGroup, elements: &[String]) -> PyResult<Subgroup> {
    let idx = elements
        .iter()
        .map(|e| g.element(e).ok_or_else(|| err(format!("unknown group element `{e}`"))))
        .collect::<PyResult<Vec<_>>>()?;
    g.subgroup(&idx).map_err(err)
}

#[pyclass(name = "Category", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyCategory {
    inner: Arc<FinCat>,
}

#[pymethods]
impl PyCategory {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let c = decode_category(&parse_manifest(text).map_err(err)?).map_err(err)?;
        Ok(Self { inner: Arc::new(c) })
    }

    /// The chain `0 < 1 < ... < n`.
    #[staticmethod]
    fn chain(n: usize) -> Self {
        Self { inner: Arc::new(chain(n)) }
    }

    #[staticmethod]
    fn discrete(objects: Vec<String>) -> PyResult<Self> {
        Ok(Self { inner: Arc::new(FinCat::discrete(&objects).map_err(err)?) })
    }

    /// Poset from a relation; reflexive-transitive closure is taken.
    #[staticmethod]
    fn poset(elements: Vec<String>, relation: Vec<(String, String)>) -> PyResult<Self> {
        Ok(Self { inner: Arc::new(poset_to_category(&elements, &relation).map_err(err)?) })
    }

    fn to_json(&self) -> String {
        to_json(&encode_category(&self.inner))
    }

    fn objects(&self) -> Vec<String> {
        self.inner.objects().to_vec()
    }

    /// `(id, source, target)` triples.
    fn morphisms(&self) -> Vec<(String, String, String)> {
        let c = &self.inner;
        (0..c.num_morphisms())
            .map(|m| (c.morphism_id(m).to_string(), c.object_id(c.src(m)).to_string(), c.object_id(c.tgt(m)).to_string()))
            .collect()
    }

    fn num_objects(&self) -> usize {
        self.inner.num_objects()
    }

    fn num_morphisms(&self) -> usize {
        self.inner.num_morphisms()
    }

    /// `g ∘ f` by morphism id, or `None` when not composable.
    fn compose(&self, g: &str, f: &str) -> PyResult<Option<String>> {
        let c = &self.inner;
        let look = |id: &str| c.mor(id).ok_or_else(|| err(format!("unknown morphism `{id}`")));
        Ok(c.compose(look(g)?, look(f)?).map(|m| c.morphism_id(m).to_string()))
    }

    fn is_poset(&self) -> bool {
        self.inner.is_poset()
    }

    fn nerve(&self, dim: usize) -> PySSet {
        PySSet { inner: nerve(&self.inner, dim) }
    }

    fn __eq__(&self, other: &Self) -> bool {
        *self.inner == *other.inner
    }

    fn __repr__(&self) -> String {
        format!("Category(objects={}, morphisms={})", self.inner.num_objects(), self.inner.num_morphisms())
    }
}

#[pyclass(name = "Group", frozen)]
pub struct PyGroup {
    inner: Arc<FinGroup>,
}

#[pymethods]
impl PyGroup {
    /// Named fixture group such as `C3`, `S3`, `D4` or `C2xC2`.
    #[staticmethod]
    fn by_name(name: &str) -> PyResult<Self> {
        group_by_name(name).map(|inner| Self { inner }).ok_or_else(|| err(format!("unknown group `{name}`")))
    }

    #[staticmethod]
    fn cyclic(n: usize) -> Self {
        Self { inner: Arc::new(FinGroup::cyclic(n)) }
    }

    fn order(&self) -> usize {
        self.inner.order()
    }

    fn elements(&self) -> Vec<String> {
        self.inner.elements().to_vec()
    }

    /// Every subgroup, as lists of element ids.
    fn subgroups(&self) -> Vec<Vec<String>> {
        subgroups(&self.inner)
            .iter()
            .map(|h| h.elements().iter().map(|&x| self.inner.element_id(x).to_string()).collect())
            .collect()
    }

    fn orbit_category(&self) -> PyCategory {
        PyCategory { inner: orbit_category(&self.inner).category().clone() }
    }

    fn to_json(&self) -> String {
        to_json(&encode_group(&self.inner))
    }

    fn __repr__(&self) -> String {
        format!("Group(order={})", self.inner.order())
    }
}

#[pyclass(name = "Functor", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyFunctor {
    inner: FinFunctor,
}

#[pymethods]
impl PyFunctor {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: decode_functor(&parse_manifest(text).map_err(err)?).map_err(err)? })
    }

    /// Inclusion matching object and morphism ids.
    #[staticmethod]
    fn inclusion(sub: &PyCategory, sup: &PyCategory) -> PyResult<Self> {
        Ok(Self { inner: FinFunctor::inclusion(sub.inner.clone(), sup.inner.clone()).map_err(err)? })
    }

    #[staticmethod]
    fn constant(source: &PyCategory, target: &PyCategory, object: &str) -> PyResult<Self> {
        let d = target.inner.obj(object).ok_or_else(|| err(format!("unknown object `{object}`")))?;
        Ok(Self { inner: FinFunctor::constant(source.inner.clone(), target.inner.clone(), d) })
    }

    fn to_json(&self) -> String {
        to_json(&encode_functor(&self.inner))
    }

    fn source(&self) -> PyCategory {
        PyCategory { inner: self.inner.source().clone() }
    }

    fn target(&self) -> PyCategory {
        PyCategory { inner: self.inner.target().clone() }
    }

    fn object_map(&self) -> Vec<(String, String)> {
        self.inner.id_maps().0.into_iter().collect()
    }

    fn morphism_map(&self) -> Vec<(String, String)> {
        self.inner.id_maps().1.into_iter().collect()
    }

    /// `self ∘ first`.
    fn after(&self, first: &PyFunctor) -> PyResult<Self> {
        Ok(Self { inner: self.inner.after(&first.inner).map_err(err)? })
    }

    fn is_injective(&self) -> bool {
        self.inner.is_injective()
    }

    fn is_dwyer(&self) -> PyResult<bool> {
        Ok(dwyer_witness(&self.inner).map_err(err)?.is_some())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

#[pyclass(name = "GCategory", frozen)]
pub struct PyGCategory {
    inner: GCategory,
}

#[pymethods]
impl PyGCategory {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: decode_gaction(&parse_manifest(text).map_err(err)?).map_err(err)? })
    }

    #[staticmethod]
    fn trivial(group: &PyGroup, category: &PyCategory) -> Self {
        Self { inner: GCategory::trivial(group.inner.clone(), category.inner.clone()) }
    }

    /// `G/K × A` with `G` acting on the left factor.
    #[staticmethod]
    fn tensor(group: &PyGroup, subgroup: Vec<String>, category: &PyCategory) -> PyResult<Self> {
        let k = subgroup_of(&group.inner, &subgroup)?;
        let s = coset_gset(&group.inner, &k).map_err(err)?;
        Ok(Self { inner: tensor(&s, &category.inner) })
    }

    fn to_json(&self) -> String {
        to_json(&encode_gaction(&self.inner))
    }

    fn base(&self) -> PyCategory {
        PyCategory { inner: self.inner.base().clone() }
    }

    fn fixed_points(&self, subgroup: Vec<String>) -> PyResult<PyCategory> {
        let h = subgroup_of(self.inner.group(), &subgroup)?;
        Ok(PyCategory { inner: Arc::new(fixed_category(&self.inner, &h)) })
    }

    /// The diagram of fixed points over the orbit category, as a manifest.
    fn fixed_point_diagram_json(&self) -> String {
        to_json(&encode_ogdiagram(&phi(&self.inner)))
    }
}

#[pyclass(name = "SSet", frozen)]
pub struct PySSet {
    inner: TruncSSet,
}

#[pymethods]
impl PySSet {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: decode_sset(&parse_manifest(text).map_err(err)?).map_err(err)? })
    }

    /// `kind` is one of `delta`, `boundary` or `horn`.
    #[staticmethod]
    #[pyo3(signature = (kind, m, k=None))]
    fn standard(kind: &str, m: usize, k: Option<usize>) -> PyResult<Self> {
        let kind = match kind {
            "delta" => StandardKind::Delta,
            "boundary" => StandardKind::Boundary,
            "horn" => StandardKind::Horn,
            other => return Err(err(format!("unknown kind `{other}`"))),
        };
        Ok(Self { inner: standard_complex(kind, m, k).map_err(err)? })
    }

    fn to_json(&self) -> String {
        to_json(&encode_sset(&self.inner))
    }

    fn counts(&self) -> Vec<usize> {
        self.inner.counts()
    }

    fn sd(&self) -> PyResult<Self> {
        Ok(Self { inner: sd(&self.inner).map_err(err)? })
    }

    fn categorify(&self) -> PyResult<PyCategory> {
        Ok(PyCategory { inner: Arc::new(categorify(&self.inner).map_err(err)?) })
    }

    /// `(degree, betti, torsion)` per degree; the top degree is omitted as it
    /// depends on simplices above the truncation.
    fn homology(&self) -> Vec<(usize, usize, Vec<String>)> {
        homology(&self.inner)
            .groups
            .iter()
            .filter(|g| g.complete)
            .map(|g| (g.degree, g.betti, g.torsion.iter().map(|t| t.to_string()).collect()))
            .collect()
    }
}

/// Pushout of `f` along the Dwyer map `i`: `(P, C → P, B → P)`.
#[pyfunction]
fn pushout(i: &PyFunctor, f: &PyFunctor) -> PyResult<(PyCategory, PyFunctor, PyFunctor)> {
    let p = pushout_along_dwyer(&i.inner, &f.inner, None).map_err(err)?;
    Ok((PyCategory { inner: p.category }, PyFunctor { inner: p.from_c }, PyFunctor { inner: p.from_b }))
}

/// Pushout along an injective `i`, computed from a presentation.
#[pyfunction]
#[pyo3(signature = (i, f, budget=100_000))]
fn pushout_presented(i: &PyFunctor, f: &PyFunctor, budget: u64) -> PyResult<(PyCategory, PyFunctor, PyFunctor)> {
    let p = pushout_oracle(&i.inner, &f.inner, budget).map_err(err)?;
    Ok((PyCategory { inner: p.category }, PyFunctor { inner: p.from_c }, PyFunctor { inner: p.from_b }))
}

#[pyfunction(name = "pullback")]
fn pullback_py(f: &PyFunctor, g: &PyFunctor) -> PyResult<(PyCategory, PyFunctor, PyFunctor)> {
    let p = pullback(&f.inner, &g.inner).map_err(err)?;
    Ok((PyCategory { inner: p.category }, PyFunctor { inner: p.p1 }, PyFunctor { inner: p.p2 }))
}

/// Run a verification suite and return its JSON report.
#[pyfunction]
#[pyo3(signature = (suite, seed=0, cases=20, jobs=None))]
fn verify(py: Python<'_>, suite: &str, seed: u64, cases: usize, jobs: Option<usize>) -> PyResult<String> {
    let rep = py.detach(|| run_suite(suite, seed, cases, jobs)).map_err(err)?;
    serde_json::to_string_pretty(&rep).map_err(err)
}

#[pymodule]
fn gcat_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCategory>()?;
    m.add_class::<PyGroup>()?;
    m.add_class::<PyFunctor>()?;
    m.add_class::<PyGCategory>()?;
    m.add_class::<PySSet>()?;
    m.add_function(wrap_pyfunction!(pushout, m)?)?;
    m.add_function(wrap_pyfunction!(pushout_presented, m)?)?;
    m.add_function(wrap_pyfunction!(pullback_py, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
