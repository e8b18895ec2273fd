//! Seeded verification suites with JSON reports.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::{Arc, OnceLock};

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::catalog::{
    case_seed, random_closure_instance, random_dwyer_map, random_free_category, random_functor, random_mono_chain,
    random_poset, random_pushout_square, rng, small_cells, small_diagrams, small_gcategories,
};
use crate::colimits::{
    dwyer_witness, pushout_along_dwyer, pushout_oracle, pushouts_isomorphic, verify_filtered_mono, verify_fixed_point_pushout,
    verify_preservation_closure, verify_retract, PUSHOUT_SEARCH_BUDGET,
};
use crate::fincat::{find_isomorphism, FinFunctor, DEFAULT_SEARCH_BUDGET};
use crate::gaction::{fixed_category, fixed_tensor_compare, verify_adjunction, GCategory, OGDiagram};
use crate::group::{orbit_category, subgroups, FinGroup, Subgroup};
use crate::homology::{compare_homology, homology, HomologyReport};
use crate::present::DEFAULT_CLOSURE_BUDGET;
use crate::sset::{
    acyclic_cell, categorify, cofibration_cell, csd2, equivariant_nerve, fixed_subcomplex, nerve, standard_complex, GeneratingCell,
    StandardKind,
};

pub const SUITES: [&str; 8] =
    ["pushout-explicit", "pushout-fixed", "filtered-mono", "tensor-fixed", "adjunction", "dwyer-cells", "closure", "homology-cells"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseResult {
    pub id: String,
    pub seed: u64,
    pub pass: bool,
    pub witness: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CaseResult {
    fn ok(pass: bool, witness: Value) -> CaseResult {
        CaseResult { id: String::new(), seed: 0, pass, witness, error: None }
    }

    fn failed(error: impl ToString) -> CaseResult {
        CaseResult { id: String::new(), seed: 0, pass: false, witness: Value::Null, error: Some(error.to_string()) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
    pub results: Vec<CaseResult>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

fn guarded(f: impl FnOnce() -> CaseResult) -> CaseResult {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(r) => r,
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            CaseResult::failed(format!("panic: {msg}"))
        }
    }
}

/// Runs `cases` cases of `suite`; case `k` uses the seed `case_seed(seed, k)`.
pub fn run_suite(suite: &str, seed: u64, cases: usize, jobs: Option<usize>) -> Result<SuiteReport, VerifyError> {
    if !SUITES.contains(&suite) {
        return Err(VerifyError::UnknownSuite(suite.to_string()));
    }
    let work = || -> Vec<CaseResult> { (0..cases).into_par_iter().map(|k| run_case(suite, seed, k)).collect() };
    let mut results = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| VerifyError::Pool(e.to_string()))?
            .install(work),
        None => work(),
    };
    results.sort_by(|a, b| a.id.cmp(&b.id));
    let passed = results.iter().filter(|r| r.pass).count();
    Ok(SuiteReport { suite: suite.to_string(), seed, cases, passed, failed: cases - passed, results })
}

pub fn run_case(suite: &str, seed: u64, index: usize) -> CaseResult {
    let s = case_seed(seed, index as u64);
    let mut r = guarded(|| match suite {
        "pushout-explicit" => pushout_explicit_case(s),
        "pushout-fixed" => {
            let groups = pushout_fixed_groups();
            let (name, g) = &groups[index % groups.len()];
            let subs = subgroups(g);
            let mut pick = rng(s);
            let k = subs.choose(&mut pick).unwrap().clone();
            let h = subs.choose(&mut pick).unwrap().clone();
            pushout_fixed_case(name, g, &k, &h, pick.gen())
        }
        "filtered-mono" => {
            let groups = filtered_mono_groups();
            let (name, g) = &groups[index % groups.len()];
            filtered_mono_case(name, g, s)
        }
        "tensor-fixed" => tensor_fixed_case(s),
        "adjunction" => {
            let n = adjunction_case_count();
            adjunction_case((s % n as u64) as usize)
        }
        "dwyer-cells" => dwyer_cell_case(index % dwyer_cell_count()),
        "closure" => {
            let groups = filtered_mono_groups();
            let (name, g) = &groups[index % groups.len()];
            closure_case(name, g, s, index == 0)
        }
        "homology-cells" => homology_cell_case(index % homology_cell_count()),
        _ => unreachable!("suite names checked"),
    });
    r.id = format!("{suite}-{index:05}");
    r.seed = s;
    r
}

fn named(list: &[&str]) -> Vec<(String, Arc<FinGroup>)> {
    list.iter().map(|n| (n.to_string(), crate::catalog::group_by_name(n).expect("fixture group"))).collect()
}

pub fn pushout_fixed_groups() -> Vec<(String, Arc<FinGroup>)> {
    named(&["C2", "C3", "S3"])
}

pub fn filtered_mono_groups() -> Vec<(String, Arc<FinGroup>)> {
    named(&["C2", "S3"])
}

fn label(g: &FinGroup, h: &Subgroup) -> String {
    let ids: Vec<&str> = h.elements().iter().map(|&e| g.element_id(e)).collect();
    format!("{{{}}}", ids.join(","))
}

/// Random Dwyer map of posets with at most 8 objects, random `F`, explicit
/// pushout against the presented one.
pub fn pushout_explicit_case(seed: u64) -> CaseResult {
    let mut r = rng(seed);
    let i = random_dwyer_map(&mut r, 8);
    let c = Arc::new(if r.gen_bool(0.5) { random_poset(&mut r, 6, 0.3) } else { random_free_category(&mut r, 5, 0.4) });
    let f = random_functor(&mut r, i.source(), &c).expect("target is nonempty");
    let d = match pushout_along_dwyer(&i, &f, None) {
        Ok(d) => d,
        Err(e) => return CaseResult::failed(e),
    };
    let o = match pushout_oracle(&i, &f, DEFAULT_CLOSURE_BUDGET) {
        Ok(o) => o,
        Err(e) => return CaseResult::failed(e),
    };
    let iso = pushouts_isomorphic((&d.category, &d.from_c, &d.from_b), (&o.category, &o.from_c, &o.from_b), PUSHOUT_SEARCH_BUDGET);
    match iso {
        Ok(found) => CaseResult::ok(
            found.is_some(),
            json!({
                "a": i.source().num_objects(),
                "b": i.target().num_objects(),
                "c": [c.num_objects(), c.num_morphisms()],
                "explicit": [d.category.num_objects(), d.category.num_morphisms()],
                "oracle": [o.category.num_objects(), o.category.num_morphisms()],
                "cocone_compatible_isomorphism": found.is_some(),
            }),
        ),
        Err(e) => CaseResult::failed(e),
    }
}

/// One seeded `(i, F)` for the subgroups `K`, `H` of `g`.
pub fn pushout_fixed_case(name: &str, g: &Arc<FinGroup>, k: &Subgroup, h: &Subgroup, seed: u64) -> CaseResult {
    let mut r = rng(seed);
    let sq = random_pushout_square(&mut r, g, k);
    match verify_fixed_point_pushout(k, h, &sq.cell, &sq.attach, &sq.target) {
        Ok(rep) => CaseResult::ok(
            rep.isomorphism(),
            json!({"group": name, "k": label(g, k), "h": label(g, h), "comparison": rep}),
        ),
        Err(e) => CaseResult::failed(e),
    }
}

/// A seeded chain of length at most 4, checked for every subgroup.
pub fn filtered_mono_case(name: &str, g: &Arc<FinGroup>, seed: u64) -> CaseResult {
    let mut r = rng(seed);
    let len = r.gen_range(1..=4);
    let (stages, maps) = random_mono_chain(&mut r, g, len);
    let mut reports = Vec::new();
    for h in subgroups(g) {
        match verify_filtered_mono(&stages, &maps, &h) {
            Ok(rep) => reports.push(rep),
            Err(e) => return CaseResult::failed(e),
        }
    }
    let pass = reports.iter().all(|r| r.isomorphism());
    CaseResult::ok(pass, json!({"group": name, "length": len, "comparisons": reports}))
}

/// One random `A` against every subgroup pair of every fixture group.
pub fn tensor_fixed_case(seed: u64) -> CaseResult {
    let mut r = rng(seed);
    let a = if r.gen_bool(0.5) { random_poset(&mut r, 4, 0.4) } else { random_free_category(&mut r, 3, 0.5) };
    let mut pairs = 0;
    let mut failures = Vec::new();
    for (name, g) in crate::catalog::fixture_groups() {
        let subs = subgroups(&g);
        for k in &subs {
            for h in &subs {
                pairs += 1;
                match fixed_tensor_compare(&g, k, h, &a) {
                    Ok(rep) if rep.isomorphism => {}
                    Ok(rep) => failures.push(json!({"group": name, "k": label(&g, k), "h": label(&g, h), "report": rep})),
                    Err(e) => return CaseResult::failed(e),
                }
            }
        }
    }
    CaseResult::ok(
        failures.is_empty(),
        json!({"a": [a.num_objects(), a.num_morphisms()], "pairs": pairs, "failures": failures}),
    )
}

struct AdjunctionCatalog {
    entries: Vec<(String, OGDiagram, GCategory)>,
}

fn adjunction_catalog() -> &'static AdjunctionCatalog {
    static CATALOG: OnceLock<AdjunctionCatalog> = OnceLock::new();
    CATALOG.get_or_init(|| {
        let mut entries = Vec::new();
        for (name, g) in named(&["C2", "C3"]) {
            let orbit = Arc::new(orbit_category(&g));
            let xs = small_gcategories(&g);
            let ys = small_diagrams(&orbit, &xs);
            for y in &ys {
                for x in &xs {
                    entries.push((name.clone(), y.clone(), x.clone()));
                }
            }
        }
        AdjunctionCatalog { entries }
    })
}

/// Size of the exhaustive adjunction catalog over C2 and C3.
pub fn adjunction_case_count() -> usize {
    adjunction_catalog().entries.len()
}

pub fn adjunction_case(index: usize) -> CaseResult {
    let (name, y, x) = &adjunction_catalog().entries[index];
    match verify_adjunction(y, x, DEFAULT_SEARCH_BUDGET) {
        Ok(rep) => CaseResult::ok(
            rep.bijection && rep.triangle_identities,
            json!({"group": name, "entry": index, "lambda_objects": y.value(y.orbit().trivial_index()).num_objects(), "x_objects": x.base().num_objects(), "report": rep}),
        ),
        Err(e) => CaseResult::failed(e),
    }
}

fn cells() -> &'static Vec<(String, GeneratingCell)> {
    static CELLS: OnceLock<Vec<(String, GeneratingCell)>> = OnceLock::new();
    CELLS.get_or_init(|| {
        let mut out = Vec::new();
        for m in 0..=2 {
            out.push((format!("boundary-{m}"), cofibration_cell(m).expect("generating cell")));
        }
        for m in 1..=2 {
            for k in 0..=m {
                out.push((format!("horn-{m}-{k}"), acyclic_cell(m, k).expect("generating cell").to_simplex));
            }
        }
        out
    })
}

pub fn dwyer_cell_count() -> usize {
    cells().len() + 2
}

/// Generating cells are Dwyer maps of posets; the last two cases check the
/// object counts of `cSd²Δ[1]` and `cSd²∂Δ[0]`.
pub fn dwyer_cell_case(index: usize) -> CaseResult {
    let list = cells();
    if index == list.len() {
        let n = csd2(&standard_complex(StandardKind::Delta, 1, None).expect("Δ[1]")).map(|c| c.num_objects());
        return match n {
            Ok(n) => CaseResult::ok(n == 5, json!({"complex": "csd2-delta-1", "objects": n})),
            Err(e) => CaseResult::failed(e),
        };
    }
    if index == list.len() + 1 {
        let n = csd2(&standard_complex(StandardKind::Boundary, 0, None).expect("∂Δ[0]")).map(|c| c.num_objects());
        return match n {
            Ok(n) => CaseResult::ok(n == 0, json!({"complex": "csd2-boundary-0", "objects": n})),
            Err(e) => CaseResult::failed(e),
        };
    }
    let (name, cell) = &list[index];
    let posets = cell.source.is_poset() && cell.target.is_poset();
    let witness = dwyer_witness(&cell.inclusion);
    match witness {
        Ok(w) => CaseResult::ok(
            posets && w.is_some(),
            json!({
                "cell": name,
                "source": cell.source.num_objects(),
                "target": cell.target.num_objects(),
                "posets": posets,
                "cosieve": w.map(|w| w.cosieve.len()),
            }),
        ),
        Err(e) => CaseResult::failed(e),
    }
}

/// A composite of up to three cell attachments pushed out along a random
/// map; the first case also runs the retract check.
pub fn closure_case(name: &str, g: &Arc<FinGroup>, seed: u64, with_retract: bool) -> CaseResult {
    let mut r = rng(seed);
    let subs = subgroups(g);
    let inst = match random_closure_instance(&mut r, g, 3, &small_cells()) {
        Ok(i) => i,
        Err(e) => return CaseResult::failed(e),
    };
    let report = match verify_preservation_closure(&inst.steps, &inst.map, &inst.target, &subs) {
        Ok(rep) => rep,
        Err(e) => return CaseResult::failed(e),
    };
    let mut pass = report.composite_reports.iter().all(|c| c.isomorphism())
        && report.step_reports.iter().flatten().all(|c| c.isomorphism());
    let retract = if with_retract {
        match verify_retract(&inst.steps[0], &inst.map, &inst.target, &subs) {
            Ok(rr) => {
                pass &= rr.retraction_after_section_is_identity && rr.doubled.iter().chain(&rr.retract).all(|c| c.isomorphism());
                Some(rr)
            }
            Err(e) => return CaseResult::failed(e),
        }
    } else {
        None
    };
    CaseResult::ok(pass, json!({"group": name, "cells": inst.cells, "report": report, "retract": retract}))
}

fn delta_nerve_homology(kind: StandardKind, m: usize, d: usize) -> Result<HomologyReport, String> {
    let c = csd2(&standard_complex(kind, m, None).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    Ok(homology(&nerve(&c, d)))
}

const HOMOLOGY_CASES: [&str; 9] = [
    "boundary-2",
    "boundary-3",
    "horn-1-0",
    "horn-1-1",
    "horn-2-0",
    "horn-2-1",
    "horn-2-2",
    "cofibration-2",
    "cofibration-1",
];

pub fn homology_cell_count() -> usize {
    HOMOLOGY_CASES.len()
}

fn betti_torsion_free(rep: &HomologyReport, expected: &[usize]) -> bool {
    expected.iter().enumerate().all(|(n, &b)| rep.group(n).is_some_and(|g| g.complete && g.betti == b && g.torsion.is_empty()))
}

/// Homology of `N(cSd²∂Δ[2])` and `N(cSd²∂Δ[3])`, and comparisons across
/// generating cells.
pub fn homology_cell_case(index: usize) -> CaseResult {
    let name = HOMOLOGY_CASES[index];
    match name {
        "boundary-2" | "boundary-3" => {
            let m = if name == "boundary-2" { 2 } else { 3 };
            match delta_nerve_homology(StandardKind::Boundary, m, m) {
                Ok(rep) => {
                    let expected: Vec<usize> = if m == 2 { vec![1, 1] } else { vec![1, 0, 1] };
                    let groups: Vec<String> = rep.groups.iter().map(|g| g.to_string()).collect();
                    CaseResult::ok(betti_torsion_free(&rep, &expected), json!({"case": name, "homology": groups}))
                }
                Err(e) => CaseResult::failed(e),
            }
        }
        _ => {
            let (cell, expect_equal) = if let Some(rest) = name.strip_prefix("horn-") {
                let (m, k) = rest.split_once('-').unwrap();
                (acyclic_cell(m.parse().unwrap(), k.parse().unwrap()).map(|c| c.to_simplex), true)
            } else {
                let m: usize = name.strip_prefix("cofibration-").unwrap().parse().unwrap();
                (cofibration_cell(m), false)
            };
            let cell = match cell {
                Ok(c) => c,
                Err(e) => return CaseResult::failed(e),
            };
            let cmp = compare_homology(&cell.inclusion, 3);
            let h1_differs = cmp.source.group(1) != cmp.target.group(1);
            let pass = if expect_equal { cmp.equal } else { !cmp.equal && (name != "cofibration-2" || h1_differs) };
            let show = |r: &HomologyReport| r.groups.iter().map(|g| g.to_string()).collect::<Vec<_>>();
            CaseResult::ok(
                pass,
                json!({"case": name, "source": show(&cmp.source), "target": show(&cmp.target), "equal": cmp.equal, "note": cmp.note}),
            )
        }
    }
}

/// `c(N C) ≅ C` and `N(C^H) = (N C)^H` for every subgroup.
pub fn nerve_compat_case(x: &GCategory, d: usize) -> CaseResult {
    let base = x.base();
    let c = match categorify(&nerve(base, d)) {
        Ok(c) => Arc::new(c),
        Err(e) => return CaseResult::failed(e),
    };
    let iso = matches!(find_isomorphism(&c, base, DEFAULT_SEARCH_BUDGET), Ok(Some(_)));
    let (n, action) = equivariant_nerve(x, d);
    let mut fixed_ok = Vec::new();
    for h in subgroups(x.group()) {
        let lhs = nerve(&fixed_category(x, &h), d);
        let rhs = fixed_subcomplex(&n.sset, &action, &h);
        fixed_ok.push(lhs == rhs);
    }
    CaseResult::ok(
        iso && fixed_ok.iter().all(|&b| b),
        json!({"objects": base.num_objects(), "morphisms": base.num_morphisms(), "categorified_iso": iso, "fixed": fixed_ok}),
    )
}

/// Shorthand used by tests to check one functor against the oracle directly.
pub fn explicit_matches_oracle(i: &FinFunctor, f: &FinFunctor) -> bool {
    let (Ok(d), Ok(o)) = (pushout_along_dwyer(i, f, None), pushout_oracle(i, f, DEFAULT_CLOSURE_BUDGET)) else { return false };
    matches!(
        pushouts_isomorphic((&d.category, &d.from_c, &d.from_b), (&o.category, &o.from_c, &o.from_b), PUSHOUT_SEARCH_BUDGET),
        Ok(Some(_))
    )
}

/// Categories used for the nerve checks: every small G-category over C2
/// and C3, plus random G-posets over S3.
pub fn nerve_catalog(seed: u64, random: usize) -> Vec<GCategory> {
    let mut out: Vec<GCategory> = named(&["C2", "C3"]).iter().flat_map(|(_, g)| small_gcategories(g)).collect();
    let s3 = crate::catalog::group_by_name("S3").unwrap();
    for k in 0..random {
        out.push(crate::catalog::random_gposet(&mut rng(case_seed(seed, k as u64)), &s3));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_suite_is_vacuous() {
        let r = run_suite("pushout-fixed", 1, 0, None).unwrap();
        assert!(r.all_passed());
        assert_eq!(r.cases, 0);
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert_eq!(run_suite("nope", 1, 1, None), Err(VerifyError::UnknownSuite("nope".into())));
    }

    #[test]
    fn reports_do_not_depend_on_jobs() {
        let a = run_suite("pushout-explicit", 42, 6, Some(1)).unwrap();
        let b = run_suite("pushout-explicit", 42, 6, Some(3)).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!(a.all_passed());
    }

    #[test]
    fn dwyer_cells_pass() {
        for k in 0..dwyer_cell_count() {
            let r = dwyer_cell_case(k);
            assert!(r.pass, "{r:?}");
        }
    }
}
