//! Finite categories stored with a total composition table, functors between
//! them, posets, brute-force isomorphism search and pullbacks.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default node budget for [`find_isomorphism`] and [`all_functors`].
pub const DEFAULT_SEARCH_BUDGET: u64 = 1_000_000;

/// Id of the implicit identity morphism on `object`.
pub fn identity_id(object: &str) -> String {
    format!("id_{object}")
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Morphism {
    pub id: String,
    pub src: usize,
    pub tgt: usize,
}

/// A single failed category law.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("morphism `{morphism}` has unknown endpoint `{object}`")]
    DanglingEndpoint { morphism: String, object: String },
    #[error("unknown morphism `{0}` in composition table")]
    UnknownMorphism(String),
    #[error("no composite recorded for `{g}` after `{f}`")]
    MissingComposite { g: String, f: String },
    #[error("composite recorded for non-composable pair `{g}` after `{f}`")]
    NotComposable { g: String, f: String },
    #[error("composite `{gf}` of `{g}` after `{f}` lies in the wrong hom-set")]
    CompositeOutOfHom { g: String, f: String, gf: String },
    #[error("conflicting composites for `{g}` after `{f}`")]
    ConflictingComposite { g: String, f: String },
    #[error("identity law fails for `{0}`")]
    IdentityLawViolation(String),
    #[error("associativity fails for `{h}`, `{g}`, `{f}`")]
    NonAssociative { h: String, g: String, f: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("invalid category: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("not a partial order: {0}")]
    NotAPartialOrder(String),
}

impl CategoryError {
    pub fn violations(&self) -> &[Violation] {
        match self {
            CategoryError::Invalid(v) => v,
            CategoryError::NotAPartialOrder(_) => &[],
        }
    }
}

fn join_violations<T: fmt::Display>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FunctorViolation {
    #[error("object `{0}` is not mapped")]
    UnmappedObject(String),
    #[error("morphism `{0}` is not mapped")]
    UnmappedMorphism(String),
    #[error("`{0}` is not an element of the target")]
    UnknownTarget(String),
    #[error("image of `{0}` has the wrong source or target")]
    EndpointMismatch(String),
    #[error("identity of `{0}` is not sent to an identity")]
    IdentityNotPreserved(String),
    #[error("composite `{g}` after `{f}` is not preserved")]
    CompositionNotPreserved { g: String, f: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FunctorError {
    #[error("invalid functor: {}", join_violations(.0))]
    Invalid(Vec<FunctorViolation>),
    #[error("functors are not composable")]
    NotComposable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("search exceeded its node budget of {0}")]
pub struct SearchBudgetExceeded(pub u64);

/// A validated finite category.
///
/// Identity morphisms are explicit entries of `morphisms`; the composition
/// table is total on composable pairs.
#[derive(Clone)]
pub struct FinCat {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<usize>,
    compose: HashMap<(usize, usize), usize>,
    obj_index: HashMap<String, usize>,
    mor_index: HashMap<String, usize>,
    hom: Vec<Vec<usize>>,
}

impl fmt::Debug for FinCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinCat")
            .field("objects", &self.objects)
            .field(
                "morphisms",
                &self
                    .morphisms
                    .iter()
                    .filter(|m| !self.is_identity_index(m))
                    .map(|m| format!("{}: {} -> {}", m.id, self.objects[m.src], self.objects[m.tgt]))
                    .collect::<Vec<_>>(),
            )
            .finish()
    }
}

/// Incremental constructor for [`FinCat`]. Adding an object also adds its
/// identity morphism `id_<object>`.
#[derive(Default, Clone)]
pub struct CatBuilder {
    objects: Vec<String>,
    obj_index: HashMap<String, usize>,
    morphisms: Vec<Morphism>,
    mor_index: HashMap<String, usize>,
    identities: Vec<usize>,
    compose: HashMap<(usize, usize), usize>,
    violations: Vec<Violation>,
}

impl CatBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_object(&mut self, id: impl Into<String>) -> usize {
        let id = id.into();
        if let Some(&i) = self.obj_index.get(&id) {
            self.violations.push(Violation::DuplicateId(id));
            return i;
        }
        let idx = self.objects.len();
        self.objects.push(id.clone());
        self.obj_index.insert(id.clone(), idx);
        let ident = self.push_morphism(identity_id(&id), idx, idx);
        self.identities.push(ident);
        self.compose.insert((ident, ident), ident);
        idx
    }

    /// Adds an object under `id`, or under a primed variant if `id` is taken.
    pub fn add_fresh_object(&mut self, id: &str) -> usize {
        let mut candidate = id.to_string();
        while self.obj_index.contains_key(&candidate) || self.mor_index.contains_key(&identity_id(&candidate)) {
            candidate.push('\'');
        }
        self.add_object(candidate)
    }

    fn push_morphism(&mut self, id: String, src: usize, tgt: usize) -> usize {
        if self.mor_index.contains_key(&id) {
            self.violations.push(Violation::DuplicateId(id.clone()));
        }
        let idx = self.morphisms.len();
        self.mor_index.insert(id.clone(), idx);
        self.morphisms.push(Morphism { id, src, tgt });
        idx
    }

    pub fn add_morphism(&mut self, id: impl Into<String>, src: usize, tgt: usize) -> usize {
        let m = self.push_morphism(id.into(), src, tgt);
        let (s, t) = (self.identities[src], self.identities[tgt]);
        self.compose.insert((m, s), m);
        self.compose.insert((t, m), m);
        m
    }

    /// Adds a non-identity morphism, priming the id until it is unused.
    pub fn add_fresh_morphism(&mut self, id: &str, src: usize, tgt: usize) -> usize {
        let mut candidate = id.to_string();
        while self.mor_index.contains_key(&candidate) {
            candidate.push('\'');
        }
        self.add_morphism(candidate, src, tgt)
    }

    pub fn object(&self, id: &str) -> Option<usize> {
        self.obj_index.get(id).copied()
    }

    pub fn morphism(&self, id: &str) -> Option<usize> {
        self.mor_index.get(id).copied()
    }

    pub fn identity(&self, obj: usize) -> usize {
        self.identities[obj]
    }

    pub fn endpoints(&self, m: usize) -> (usize, usize) {
        (self.morphisms[m].src, self.morphisms[m].tgt)
    }

    /// Records `g ∘ f = gf`. Entries that contradict an identity law or an
    /// earlier entry are reported at [`CatBuilder::build`].
    pub fn set_composite(&mut self, g: usize, f: usize, gf: usize) {
        let (mg, mf, mgf) = (&self.morphisms[g], &self.morphisms[f], &self.morphisms[gf]);
        if mf.tgt != mg.src {
            self.violations.push(Violation::NotComposable { g: mg.id.clone(), f: mf.id.clone() });
            return;
        }
        if mgf.src != mf.src || mgf.tgt != mg.tgt {
            self.violations.push(Violation::CompositeOutOfHom {
                g: mg.id.clone(),
                f: mf.id.clone(),
                gf: mgf.id.clone(),
            });
            return;
        }
        match self.compose.get(&(g, f)) {
            Some(&old) if old != gf => {
                let is_ident = self.identities[mg.src] == g || self.identities[mf.src] == f;
                if is_ident {
                    self.violations.push(Violation::IdentityLawViolation(if self.identities[mg.src] == g {
                        mf.id.clone()
                    } else {
                        mg.id.clone()
                    }));
                } else {
                    self.violations.push(Violation::ConflictingComposite { g: mg.id.clone(), f: mf.id.clone() });
                }
            }
            _ => {
                self.compose.insert((g, f), gf);
            }
        }
    }

    pub fn push_violation(&mut self, v: Violation) {
        self.violations.push(v);
    }

    pub fn build(self) -> Result<FinCat, CategoryError> {
        if !self.violations.is_empty() {
            return Err(CategoryError::Invalid(self.violations));
        }
        FinCat::from_parts(self.objects, self.morphisms, self.identities, self.compose)
    }
}

impl FinCat {
    /// Validates raw parts. All category laws are checked.
    pub fn from_parts(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<usize>,
        compose: HashMap<(usize, usize), usize>,
    ) -> Result<FinCat, CategoryError> {
        let mut violations = Vec::new();
        let mut obj_index = HashMap::new();
        for (i, o) in objects.iter().enumerate() {
            if obj_index.insert(o.clone(), i).is_some() {
                violations.push(Violation::DuplicateId(o.clone()));
            }
        }
        let mut mor_index = HashMap::new();
        for (i, m) in morphisms.iter().enumerate() {
            if mor_index.insert(m.id.clone(), i).is_some() {
                violations.push(Violation::DuplicateId(m.id.clone()));
            }
            if m.src >= objects.len() || m.tgt >= objects.len() {
                violations.push(Violation::DanglingEndpoint { morphism: m.id.clone(), object: "?".into() });
            }
        }
        if identities.len() != objects.len() {
            violations.push(Violation::IdentityLawViolation("identity list length".into()));
        }
        if !violations.is_empty() {
            return Err(CategoryError::Invalid(violations));
        }
        let n = objects.len();
        let mut hom = vec![Vec::new(); n * n];
        for (i, m) in morphisms.iter().enumerate() {
            hom[m.src * n + m.tgt].push(i);
        }
        let cat = FinCat { objects, morphisms, identities, compose, obj_index, mor_index, hom };
        cat.check_laws()?;
        Ok(cat)
    }

    fn check_laws(&self) -> Result<(), CategoryError> {
        let mut violations = Vec::new();
        for (x, &i) in self.identities.iter().enumerate() {
            let m = &self.morphisms[i];
            if m.src != x || m.tgt != x {
                violations.push(Violation::IdentityLawViolation(m.id.clone()));
            }
        }
        for (&(g, f), &gf) in &self.compose {
            let (mg, mf) = (&self.morphisms[g], &self.morphisms[f]);
            if mf.tgt != mg.src {
                violations.push(Violation::NotComposable { g: mg.id.clone(), f: mf.id.clone() });
            } else if self.morphisms[gf].src != mf.src || self.morphisms[gf].tgt != mg.tgt {
                violations.push(Violation::CompositeOutOfHom {
                    g: mg.id.clone(),
                    f: mf.id.clone(),
                    gf: self.morphisms[gf].id.clone(),
                });
            }
        }
        if !violations.is_empty() {
            return Err(CategoryError::Invalid(violations));
        }
        for (f, mf) in self.morphisms.iter().enumerate() {
            for &g in self.out_morphisms(mf.tgt) {
                if !self.compose.contains_key(&(g, f)) {
                    violations.push(Violation::MissingComposite {
                        g: self.morphisms[g].id.clone(),
                        f: mf.id.clone(),
                    });
                }
            }
            let left = self.compose.get(&(self.identities[mf.tgt], f));
            let right = self.compose.get(&(f, self.identities[mf.src]));
            if left.is_some_and(|&k| k != f) || right.is_some_and(|&k| k != f) {
                violations.push(Violation::IdentityLawViolation(mf.id.clone()));
            }
        }
        if !violations.is_empty() {
            return Err(CategoryError::Invalid(violations));
        }
        for f in 0..self.morphisms.len() {
            for &g in self.out_morphisms(self.morphisms[f].tgt) {
                let gf = self.compose[&(g, f)];
                for &h in self.out_morphisms(self.morphisms[g].tgt) {
                    let hg = self.compose[&(h, g)];
                    if self.compose[&(h, gf)] != self.compose[&(hg, f)] {
                        violations.push(Violation::NonAssociative {
                            h: self.morphisms[h].id.clone(),
                            g: self.morphisms[g].id.clone(),
                            f: self.morphisms[f].id.clone(),
                        });
                    }
                }
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(CategoryError::Invalid(violations))
        }
    }

    /// Re-runs every law check.
    pub fn revalidate(&self) -> Result<(), CategoryError> {
        self.check_laws()
    }

    pub fn empty() -> FinCat {
        CatBuilder::new().build().expect("empty category")
    }

    /// One object, only its identity.
    pub fn terminal() -> FinCat {
        let mut b = CatBuilder::new();
        b.add_object("*");
        b.build().expect("terminal category")
    }

    /// Category with the given objects and only identities.
    pub fn discrete<S: AsRef<str>>(objects: &[S]) -> Result<FinCat, CategoryError> {
        let mut b = CatBuilder::new();
        for o in objects {
            b.add_object(o.as_ref());
        }
        b.build()
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn object_id(&self, x: usize) -> &str {
        &self.objects[x]
    }

    pub fn morphism(&self, m: usize) -> &Morphism {
        &self.morphisms[m]
    }

    pub fn morphism_id(&self, m: usize) -> &str {
        &self.morphisms[m].id
    }

    pub fn src(&self, m: usize) -> usize {
        self.morphisms[m].src
    }

    pub fn tgt(&self, m: usize) -> usize {
        self.morphisms[m].tgt
    }

    pub fn obj(&self, id: &str) -> Option<usize> {
        self.obj_index.get(id).copied()
    }

    pub fn mor(&self, id: &str) -> Option<usize> {
        self.mor_index.get(id).copied()
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identities[x]
    }

    pub fn is_identity(&self, m: usize) -> bool {
        self.identities[self.morphisms[m].src] == m
    }

    fn is_identity_index(&self, m: &Morphism) -> bool {
        self.morphisms[self.identities[m.src]].id == m.id
    }

    /// `g ∘ f`, if composable.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.compose.get(&(g, f)).copied()
    }

    pub fn hom(&self, x: usize, y: usize) -> &[usize] {
        &self.hom[x * self.objects.len() + y]
    }

    /// All morphisms with source `x`.
    pub fn out_morphisms(&self, x: usize) -> impl Iterator<Item = &usize> + '_ {
        let n = self.objects.len();
        (0..n).flat_map(move |y| self.hom[x * n + y].iter())
    }

    /// All morphisms with target `y`.
    pub fn in_morphisms(&self, y: usize) -> impl Iterator<Item = &usize> + '_ {
        let n = self.objects.len();
        (0..n).flat_map(move |x| self.hom[x * n + y].iter())
    }

    pub fn non_identity_morphisms(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.morphisms.len()).filter(move |&m| !self.is_identity(m))
    }

    /// Composable pairs `(g, f)` of morphisms, both non-identity.
    pub fn composable_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for f in self.non_identity_morphisms() {
            for &g in self.out_morphisms(self.morphisms[f].tgt) {
                if !self.is_identity(g) {
                    out.push((g, f));
                }
            }
        }
        out
    }

    /// At most one morphism per ordered pair and no non-identity isomorphisms.
    pub fn is_poset(&self) -> bool {
        let n = self.objects.len();
        for x in 0..n {
            if self.hom(x, x).len() != 1 {
                return false;
            }
            for y in 0..n {
                if self.hom(x, y).len() > 1 {
                    return false;
                }
                if x != y && !self.hom(x, y).is_empty() && !self.hom(y, x).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    /// No cycles among non-identity morphisms and no non-identity endomorphisms.
    pub fn is_acyclic(&self) -> bool {
        let n = self.objects.len();
        let mut indeg = vec![0usize; n];
        let mut succ = vec![HashSet::new(); n];
        for m in self.non_identity_morphisms() {
            let (s, t) = (self.src(m), self.tgt(m));
            if s == t {
                return false;
            }
            if succ[s].insert(t) {
                indeg[t] += 1;
            }
        }
        let mut stack: Vec<usize> = (0..n).filter(|&x| indeg[x] == 0).collect();
        let mut seen = 0;
        while let Some(x) = stack.pop() {
            seen += 1;
            for &y in &succ[x] {
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    stack.push(y);
                }
            }
        }
        seen == n
    }

    /// `x ≤ y` in a poset-shaped category.
    pub fn le(&self, x: usize, y: usize) -> bool {
        !self.hom(x, y).is_empty()
    }

    /// The subcategory on the given object and morphism sets, keeping ids.
    /// Identities of kept objects are added automatically.
    pub fn subcategory(&self, objects: &[usize], morphisms: &[usize]) -> Result<(FinCat, Vec<usize>, Vec<usize>), CategoryError> {
        let mut keep_obj: Vec<usize> = objects.to_vec();
        keep_obj.sort_unstable();
        keep_obj.dedup();
        let obj_set: HashSet<usize> = keep_obj.iter().copied().collect();
        let mut keep_mor: Vec<usize> = morphisms.iter().copied().chain(keep_obj.iter().map(|&x| self.identities[x])).collect();
        keep_mor.sort_unstable();
        keep_mor.dedup();
        let mut violations = Vec::new();
        let mut new_obj = HashMap::new();
        for (i, &x) in keep_obj.iter().enumerate() {
            new_obj.insert(x, i);
        }
        let mut new_mor = HashMap::new();
        let mut mors = Vec::new();
        for (i, &m) in keep_mor.iter().enumerate() {
            let mm = &self.morphisms[m];
            if !obj_set.contains(&mm.src) || !obj_set.contains(&mm.tgt) {
                violations.push(Violation::DanglingEndpoint {
                    morphism: mm.id.clone(),
                    object: if obj_set.contains(&mm.src) { self.objects[mm.tgt].clone() } else { self.objects[mm.src].clone() },
                });
                continue;
            }
            new_mor.insert(m, i);
            mors.push(Morphism { id: mm.id.clone(), src: new_obj[&mm.src], tgt: new_obj[&mm.tgt] });
        }
        if !violations.is_empty() {
            return Err(CategoryError::Invalid(violations));
        }
        let mut compose = HashMap::new();
        for &f in &keep_mor {
            for &g in &keep_mor {
                if let Some(gf) = self.compose(g, f) {
                    match new_mor.get(&gf) {
                        Some(&k) => {
                            compose.insert((new_mor[&g], new_mor[&f]), k);
                        }
                        None => violations.push(Violation::MissingComposite {
                            g: self.morphisms[g].id.clone(),
                            f: self.morphisms[f].id.clone(),
                        }),
                    }
                }
            }
        }
        if !violations.is_empty() {
            return Err(CategoryError::Invalid(violations));
        }
        let identities = keep_obj.iter().map(|&x| new_mor[&self.identities[x]]).collect();
        let cat = FinCat::from_parts(keep_obj.iter().map(|&x| self.objects[x].clone()).collect(), mors, identities, compose)?;
        Ok((cat, keep_obj, keep_mor))
    }

    /// Full subcategory on a set of objects.
    pub fn full_subcategory(&self, objects: &[usize]) -> Result<FinCat, CategoryError> {
        let set: HashSet<usize> = objects.iter().copied().collect();
        let mors: Vec<usize> = (0..self.morphisms.len())
            .filter(|&m| set.contains(&self.src(m)) && set.contains(&self.tgt(m)))
            .collect();
        Ok(self.subcategory(objects, &mors)?.0)
    }

    /// Sorted multiset signature used to prune isomorphism search.
    fn object_signature(&self, x: usize) -> (usize, Vec<usize>, Vec<usize>) {
        let n = self.objects.len();
        let mut outs: Vec<usize> = (0..n).filter(|&y| y != x).map(|y| self.hom(x, y).len()).filter(|&k| k > 0).collect();
        let mut ins: Vec<usize> = (0..n).filter(|&y| y != x).map(|y| self.hom(y, x).len()).filter(|&k| k > 0).collect();
        outs.sort_unstable();
        ins.sort_unstable();
        (self.hom(x, x).len(), outs, ins)
    }

    /// Morphism id list sorted, used for id-level comparisons.
    fn id_view(&self) -> (BTreeMap<&str, (&str, &str)>, BTreeMap<(&str, &str), &str>) {
        let mors = self
            .morphisms
            .iter()
            .map(|m| (m.id.as_str(), (self.objects[m.src].as_str(), self.objects[m.tgt].as_str())))
            .collect();
        let comp = self
            .compose
            .iter()
            .map(|(&(g, f), &gf)| ((self.morphisms[g].id.as_str(), self.morphisms[f].id.as_str()), self.morphisms[gf].id.as_str()))
            .collect();
        (mors, comp)
    }
}

impl PartialEq for FinCat {
    /// Id-level equality: same object ids, same morphisms by id with the same
    /// endpoints, same composition table by id.
    fn eq(&self, other: &Self) -> bool {
        if self.objects.len() != other.objects.len() || self.morphisms.len() != other.morphisms.len() {
            return false;
        }
        let a: HashSet<&String> = self.objects.iter().collect();
        if !other.objects.iter().all(|o| a.contains(o)) {
            return false;
        }
        if self
            .identities
            .iter()
            .enumerate()
            .any(|(x, &i)| other.obj(&self.objects[x]).map(|y| other.morphisms[other.identities[y]].id != self.morphisms[i].id).unwrap_or(true))
        {
            return false;
        }
        self.id_view() == other.id_view()
    }
}

impl Eq for FinCat {}

/// Raw category description as read from a file. Identities are implicit:
/// every object `x` gets `id_x`, and `compose` lists composites of
/// non-identity pairs (entries naming identities are checked, not required).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawCategory {
    pub objects: Vec<String>,
    pub morphisms: Vec<RawMorphism>,
    #[serde(default)]
    pub compose: Vec<[String; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawMorphism {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

/// Validates a raw description, returning the category or every law violation.
pub fn validate_category(raw: &RawCategory) -> Result<FinCat, CategoryError> {
    let mut b = CatBuilder::new();
    for o in &raw.objects {
        b.add_object(o.clone());
    }
    let mut dangling = false;
    for m in &raw.morphisms {
        let (s, t) = (b.object(&m.src), b.object(&m.tgt));
        match (s, t) {
            (Some(s), Some(t)) => {
                b.add_morphism(m.id.clone(), s, t);
            }
            _ => {
                dangling = true;
                let missing = if s.is_none() { &m.src } else { &m.tgt };
                b.push_violation(Violation::DanglingEndpoint { morphism: m.id.clone(), object: missing.clone() });
            }
        }
    }
    if dangling {
        return b.build();
    }
    for [g, f, gf] in &raw.compose {
        let ids = [g, f, gf].map(|s| b.morphism(s));
        match ids {
            [Some(g), Some(f), Some(gf)] => b.set_composite(g, f, gf),
            _ => {
                for (s, i) in [g, f, gf].iter().zip(ids) {
                    if i.is_none() {
                        b.push_violation(Violation::UnknownMorphism((*s).clone()));
                    }
                }
            }
        }
    }
    b.build()
}

impl FinCat {
    /// Writes the category in the raw interchange shape.
    pub fn to_raw(&self) -> RawCategory {
        let morphisms = self
            .non_identity_morphisms()
            .map(|m| RawMorphism {
                id: self.morphisms[m].id.clone(),
                src: self.objects[self.src(m)].clone(),
                tgt: self.objects[self.tgt(m)].clone(),
            })
            .collect();
        let mut compose: Vec<[String; 3]> = self
            .composable_pairs()
            .into_iter()
            .map(|(g, f)| {
                [
                    self.morphisms[g].id.clone(),
                    self.morphisms[f].id.clone(),
                    self.morphisms[self.compose[&(g, f)]].id.clone(),
                ]
            })
            .collect();
        compose.sort();
        RawCategory { objects: self.objects.clone(), morphisms, compose }
    }
}

/// Category of a partial order: a unique morphism `x<y` whenever `x ≤ y`.
///
/// The relation must already be reflexive-transitive on the listed pairs
/// (reflexive pairs may be omitted).
pub fn poset_to_category<S: AsRef<str>>(elements: &[S], relation: &[(S, S)]) -> Result<FinCat, CategoryError> {
    let n = elements.len();
    let mut index = HashMap::new();
    for (i, e) in elements.iter().enumerate() {
        if index.insert(e.as_ref().to_string(), i).is_some() {
            return Err(CategoryError::Invalid(vec![Violation::DuplicateId(e.as_ref().to_string())]));
        }
    }
    let mut le = vec![false; n * n];
    for i in 0..n {
        le[i * n + i] = true;
    }
    for (a, b) in relation {
        let (Some(&i), Some(&j)) = (index.get(a.as_ref()), index.get(b.as_ref())) else {
            return Err(CategoryError::NotAPartialOrder(format!("unknown element in pair ({}, {})", a.as_ref(), b.as_ref())));
        };
        le[i * n + j] = true;
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && le[i * n + j] && le[j * n + i] {
                return Err(CategoryError::NotAPartialOrder(format!(
                    "cycle between {} and {}",
                    elements[i].as_ref(),
                    elements[j].as_ref()
                )));
            }
            for k in 0..n {
                if le[i * n + j] && le[j * n + k] && !le[i * n + k] {
                    return Err(CategoryError::NotAPartialOrder(format!(
                        "missing {} <= {} by transitivity",
                        elements[i].as_ref(),
                        elements[k].as_ref()
                    )));
                }
            }
        }
    }
    Ok(poset_from_matrix(&elements.iter().map(|e| e.as_ref().to_string()).collect::<Vec<_>>(), &le))
}

/// Poset category from a dense, already validated order matrix.
pub(crate) fn poset_from_matrix(elements: &[String], le: &[bool]) -> FinCat {
    let n = elements.len();
    let mut b = CatBuilder::new();
    for e in elements {
        b.add_object(e.clone());
    }
    let mut arrow = vec![usize::MAX; n * n];
    for i in 0..n {
        arrow[i * n + i] = b.identity(i);
        for j in 0..n {
            if i != j && le[i * n + j] {
                arrow[i * n + j] = b.add_morphism(format!("{}<{}", elements[i], elements[j]), i, j);
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i == j || !le[i * n + j] {
                continue;
            }
            for k in 0..n {
                if k != j && le[j * n + k] {
                    b.set_composite(arrow[j * n + k], arrow[i * n + j], arrow[i * n + k]);
                }
            }
        }
    }
    b.build().expect("validated order matrix yields a poset")
}

/// Poset from covering (or any generating) pairs, closed transitively.
pub fn poset_from_generators<S: AsRef<str>>(elements: &[S], generators: &[(usize, usize)]) -> Result<FinCat, CategoryError> {
    let n = elements.len();
    let mut le = vec![false; n * n];
    for i in 0..n {
        le[i * n + i] = true;
    }
    for &(a, b) in generators {
        le[a * n + b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if le[i * n + k] {
                for j in 0..n {
                    if le[k * n + j] {
                        le[i * n + j] = true;
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && le[i * n + j] && le[j * n + i] {
                return Err(CategoryError::NotAPartialOrder(format!(
                    "cycle between {} and {}",
                    elements[i].as_ref(),
                    elements[j].as_ref()
                )));
            }
        }
    }
    Ok(poset_from_matrix(&elements.iter().map(|e| e.as_ref().to_string()).collect::<Vec<_>>(), &le))
}

/// The chain poset `0 < 1 < ... < n`.
pub fn chain(n: usize) -> FinCat {
    let names: Vec<String> = (0..=n).map(|i| i.to_string()).collect();
    let gens: Vec<(usize, usize)> = (0..n).map(|i| (i, i + 1)).collect();
    poset_from_generators(&names, &gens).expect("chain")
}

/// A validated functor. Maps are indexed by source object/morphism position.
#[derive(Clone)]
pub struct FinFunctor {
    source: Arc<FinCat>,
    target: Arc<FinCat>,
    obj_map: Vec<usize>,
    mor_map: Vec<usize>,
}

impl fmt::Debug for FinFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let objs: BTreeMap<&str, &str> = self
            .obj_map
            .iter()
            .enumerate()
            .map(|(x, &y)| (self.source.object_id(x), self.target.object_id(y)))
            .collect();
        f.debug_struct("FinFunctor").field("objects", &objs).finish()
    }
}

fn same_category(a: &Arc<FinCat>, b: &Arc<FinCat>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl FinFunctor {
    pub fn new(source: Arc<FinCat>, target: Arc<FinCat>, obj_map: Vec<usize>, mor_map: Vec<usize>) -> Result<FinFunctor, FunctorError> {
        let mut v = Vec::new();
        if obj_map.len() != source.num_objects() || mor_map.len() != source.num_morphisms() {
            v.push(FunctorViolation::UnmappedObject("map length".into()));
            return Err(FunctorError::Invalid(v));
        }
        if obj_map.iter().any(|&y| y >= target.num_objects()) || mor_map.iter().any(|&m| m >= target.num_morphisms()) {
            v.push(FunctorViolation::UnknownTarget("index out of range".into()));
            return Err(FunctorError::Invalid(v));
        }
        for m in 0..source.num_morphisms() {
            let fm = mor_map[m];
            if target.src(fm) != obj_map[source.src(m)] || target.tgt(fm) != obj_map[source.tgt(m)] {
                v.push(FunctorViolation::EndpointMismatch(source.morphism_id(m).to_string()));
            }
        }
        for x in 0..source.num_objects() {
            if mor_map[source.identity(x)] != target.identity(obj_map[x]) {
                v.push(FunctorViolation::IdentityNotPreserved(source.object_id(x).to_string()));
            }
        }
        if !v.is_empty() {
            return Err(FunctorError::Invalid(v));
        }
        for f in 0..source.num_morphisms() {
            for &g in source.out_morphisms(source.tgt(f)) {
                let gf = source.compose(g, f).expect("total table");
                if target.compose(mor_map[g], mor_map[f]) != Some(mor_map[gf]) {
                    v.push(FunctorViolation::CompositionNotPreserved {
                        g: source.morphism_id(g).to_string(),
                        f: source.morphism_id(f).to_string(),
                    });
                }
            }
        }
        if !v.is_empty() {
            return Err(FunctorError::Invalid(v));
        }
        Ok(FinFunctor { source, target, obj_map, mor_map })
    }

    pub fn identity(c: Arc<FinCat>) -> FinFunctor {
        let obj_map = (0..c.num_objects()).collect();
        let mor_map = (0..c.num_morphisms()).collect();
        FinFunctor { source: c.clone(), target: c, obj_map, mor_map }
    }

    /// Constant functor at object `d`.
    pub fn constant(source: Arc<FinCat>, target: Arc<FinCat>, d: usize) -> FinFunctor {
        let obj_map = vec![d; source.num_objects()];
        let mor_map = vec![target.identity(d); source.num_morphisms()];
        FinFunctor { source, target, obj_map, mor_map }
    }

    /// Inclusion of `sub` into `sup`, matching objects and morphisms by id.
    /// A morphism id missing from `sup` falls back to the unique morphism
    /// between the image endpoints, if there is exactly one.
    pub fn inclusion(sub: Arc<FinCat>, sup: Arc<FinCat>) -> Result<FinFunctor, FunctorError> {
        let mut v = Vec::new();
        let obj_map: Vec<usize> = sub
            .objects()
            .iter()
            .map(|o| {
                sup.obj(o).unwrap_or_else(|| {
                    v.push(FunctorViolation::UnknownTarget(o.clone()));
                    0
                })
            })
            .collect();
        if !v.is_empty() {
            return Err(FunctorError::Invalid(v));
        }
        let mor_map: Vec<usize> = (0..sub.num_morphisms())
            .map(|m| {
                let id = sub.morphism_id(m);
                if let Some(k) = sup.mor(id) {
                    return k;
                }
                let h = sup.hom(obj_map[sub.src(m)], obj_map[sub.tgt(m)]);
                if h.len() == 1 {
                    h[0]
                } else {
                    v.push(FunctorViolation::UnknownTarget(id.to_string()));
                    0
                }
            })
            .collect();
        if !v.is_empty() {
            return Err(FunctorError::Invalid(v));
        }
        FinFunctor::new(sub, sup, obj_map, mor_map)
    }

    pub fn source(&self) -> &Arc<FinCat> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCat> {
        &self.target
    }

    pub fn obj_map(&self) -> &[usize] {
        &self.obj_map
    }

    pub fn mor_map(&self) -> &[usize] {
        &self.mor_map
    }

    pub fn on_object(&self, x: usize) -> usize {
        self.obj_map[x]
    }

    pub fn on_morphism(&self, m: usize) -> usize {
        self.mor_map[m]
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &FinFunctor) -> Result<FinFunctor, FunctorError> {
        if !same_category(&first.target, &self.source) {
            return Err(FunctorError::NotComposable);
        }
        // Index positions agree when the categories are pointer-equal; remap by id otherwise.
        let (om, mm): (Vec<usize>, Vec<usize>) = if Arc::ptr_eq(&first.target, &self.source) {
            (
                first.obj_map.iter().map(|&y| self.obj_map[y]).collect(),
                first.mor_map.iter().map(|&m| self.mor_map[m]).collect(),
            )
        } else {
            (
                first
                    .obj_map
                    .iter()
                    .map(|&y| self.obj_map[self.source.obj(first.target.object_id(y)).expect("equal categories")])
                    .collect(),
                first
                    .mor_map
                    .iter()
                    .map(|&m| self.mor_map[self.source.mor(first.target.morphism_id(m)).expect("equal categories")])
                    .collect(),
            )
        };
        Ok(FinFunctor { source: first.source.clone(), target: self.target.clone(), obj_map: om, mor_map: mm })
    }

    pub fn is_injective(&self) -> bool {
        let objs: HashSet<usize> = self.obj_map.iter().copied().collect();
        let mors: HashSet<usize> = self.mor_map.iter().copied().collect();
        objs.len() == self.obj_map.len() && mors.len() == self.mor_map.len()
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective()
            && self.obj_map.len() == self.target.num_objects()
            && self.mor_map.len() == self.target.num_morphisms()
    }

    /// Inverse of a bijective functor.
    pub fn inverse(&self) -> Option<FinFunctor> {
        if !self.is_bijective() {
            return None;
        }
        let mut om = vec![0; self.obj_map.len()];
        for (x, &y) in self.obj_map.iter().enumerate() {
            om[y] = x;
        }
        let mut mm = vec![0; self.mor_map.len()];
        for (m, &k) in self.mor_map.iter().enumerate() {
            mm[k] = m;
        }
        FinFunctor::new(self.target.clone(), self.source.clone(), om, mm).ok()
    }

    /// The same assignment with a different (id-equal or larger) target,
    /// matching by id.
    pub fn with_target(&self, target: Arc<FinCat>) -> Result<FinFunctor, FunctorError> {
        let mut v = Vec::new();
        let om = self
            .obj_map
            .iter()
            .map(|&y| {
                let id = self.target.object_id(y);
                target.obj(id).unwrap_or_else(|| {
                    v.push(FunctorViolation::UnknownTarget(id.to_string()));
                    0
                })
            })
            .collect();
        let mm = self
            .mor_map
            .iter()
            .map(|&m| {
                let id = self.target.morphism_id(m);
                target.mor(id).unwrap_or_else(|| {
                    v.push(FunctorViolation::UnknownTarget(id.to_string()));
                    0
                })
            })
            .collect();
        if !v.is_empty() {
            return Err(FunctorError::Invalid(v));
        }
        FinFunctor::new(self.source.clone(), target, om, mm)
    }

    /// Restriction to a subcategory `source` of the current source (by id),
    /// corestricted to `target` (by id).
    pub fn restrict(&self, source: Arc<FinCat>, target: Arc<FinCat>) -> Result<FinFunctor, FunctorError> {
        let mut v = Vec::new();
        let mut om = Vec::new();
        for x in source.objects() {
            let y = self.source.obj(x).map(|i| self.target.object_id(self.obj_map[i]));
            match y.and_then(|id| target.obj(id)) {
                Some(k) => om.push(k),
                None => {
                    v.push(FunctorViolation::UnknownTarget(x.clone()));
                    om.push(0)
                }
            }
        }
        let mut mm = Vec::new();
        for m in source.morphisms() {
            let y = self.source.mor(&m.id).map(|i| self.target.morphism_id(self.mor_map[i]));
            match y.and_then(|id| target.mor(id)) {
                Some(k) => mm.push(k),
                None => {
                    v.push(FunctorViolation::UnknownTarget(m.id.clone()));
                    mm.push(0)
                }
            }
        }
        if !v.is_empty() {
            return Err(FunctorError::Invalid(v));
        }
        FinFunctor::new(source, target, om, mm)
    }

    /// Object and morphism maps by id.
    pub fn id_maps(&self) -> (BTreeMap<String, String>, BTreeMap<String, String>) {
        let objs = self
            .obj_map
            .iter()
            .enumerate()
            .map(|(x, &y)| (self.source.object_id(x).to_string(), self.target.object_id(y).to_string()))
            .collect();
        let mors = self
            .mor_map
            .iter()
            .enumerate()
            .map(|(m, &k)| (self.source.morphism_id(m).to_string(), self.target.morphism_id(k).to_string()))
            .collect();
        (objs, mors)
    }
}

impl PartialEq for FinFunctor {
    fn eq(&self, other: &Self) -> bool {
        same_category(&self.source, &other.source) && same_category(&self.target, &other.target) && self.id_maps() == other.id_maps()
    }
}

/// Validates a functor given by id maps. Identity morphisms may be omitted
/// from `morphisms`; they are sent to the identity of the image object.
pub fn validate_functor(
    source: Arc<FinCat>,
    target: Arc<FinCat>,
    objects: &BTreeMap<String, String>,
    morphisms: &BTreeMap<String, String>,
) -> Result<FinFunctor, FunctorError> {
    let mut v = Vec::new();
    let mut om = Vec::with_capacity(source.num_objects());
    for x in source.objects() {
        match objects.get(x) {
            None => {
                v.push(FunctorViolation::UnmappedObject(x.clone()));
                om.push(0);
            }
            Some(y) => match target.obj(y) {
                Some(k) => om.push(k),
                None => {
                    v.push(FunctorViolation::UnknownTarget(y.clone()));
                    om.push(0);
                }
            },
        }
    }
    let mut mm = Vec::with_capacity(source.num_morphisms());
    for (i, m) in source.morphisms().iter().enumerate() {
        match morphisms.get(&m.id) {
            Some(y) => match target.mor(y) {
                Some(k) => mm.push(k),
                None => {
                    v.push(FunctorViolation::UnknownTarget(y.clone()));
                    mm.push(0);
                }
            },
            None if source.is_identity(i) && v.is_empty() => mm.push(target.identity(om[m.src])),
            None => {
                v.push(FunctorViolation::UnmappedMorphism(m.id.clone()));
                mm.push(0);
            }
        }
    }
    if !v.is_empty() {
        return Err(FunctorError::Invalid(v));
    }
    FinFunctor::new(source, target, om, mm)
}

/// Composable triples `(g, f, g∘f)` with `f` and `g` non-identity.
fn composition_constraints(c: &FinCat) -> (Vec<(usize, usize, usize)>, Vec<Vec<usize>>) {
    let triples: Vec<(usize, usize, usize)> = c
        .composable_pairs()
        .into_iter()
        .map(|(g, f)| (g, f, c.compose(g, f).expect("total")))
        .collect();
    let mut by_mor = vec![Vec::new(); c.num_morphisms()];
    for (t, &(g, f, gf)) in triples.iter().enumerate() {
        by_mor[g].push(t);
        if f != g {
            by_mor[f].push(t);
        }
        if gf != g && gf != f {
            by_mor[gf].push(t);
        }
    }
    (triples, by_mor)
}

/// Backtracking assignment of morphisms once objects are fixed.
struct MorphismSearch<'a> {
    c: &'a FinCat,
    d: &'a FinCat,
    obj_map: &'a [usize],
    order: Vec<usize>,
    triples: Vec<(usize, usize, usize)>,
    by_mor: Vec<Vec<usize>>,
    mor_map: Vec<Option<usize>>,
    used: Vec<bool>,
    injective: bool,
    nodes: &'a mut u64,
    budget: u64,
}

impl MorphismSearch<'_> {
    fn consistent(&self, m: usize) -> bool {
        for &t in &self.by_mor[m] {
            let (g, f, gf) = self.triples[t];
            if let (Some(a), Some(b), Some(c)) = (self.mor_map[g], self.mor_map[f], self.mor_map[gf]) {
                if self.d.compose(a, b) != Some(c) {
                    return false;
                }
            }
        }
        true
    }

    fn run(&mut self, k: usize, out: &mut dyn FnMut(&[Option<usize>]) -> bool) -> Result<bool, SearchBudgetExceeded> {
        *self.nodes += 1;
        if *self.nodes > self.budget {
            return Err(SearchBudgetExceeded(self.budget));
        }
        if k == self.order.len() {
            return Ok(out(&self.mor_map));
        }
        let m = self.order[k];
        if self.mor_map[m].is_some() {
            if !self.consistent(m) {
                return Ok(false);
            }
            return self.run(k + 1, out);
        }
        let (s, t) = (self.obj_map[self.c.src(m)], self.obj_map[self.c.tgt(m)]);
        let candidates: Vec<usize> = self.d.hom(s, t).to_vec();
        for cand in candidates {
            if self.injective && self.used[cand] {
                continue;
            }
            self.mor_map[m] = Some(cand);
            if self.consistent(m) {
                self.used[cand] = true;
                let stop = self.run(k + 1, out)?;
                self.used[cand] = false;
                if stop {
                    self.mor_map[m] = None;
                    return Ok(true);
                }
            }
            self.mor_map[m] = None;
        }
        Ok(false)
    }
}

/// Pre-assigned parts of an isomorphism search.
#[derive(Clone, Debug, Default)]
pub struct IsoConstraints {
    pub objects: Vec<(usize, usize)>,
    pub morphisms: Vec<(usize, usize)>,
}

/// Searches for an isomorphism of categories `c → d`.
pub fn find_isomorphism(c: &Arc<FinCat>, d: &Arc<FinCat>, budget: u64) -> Result<Option<FinFunctor>, SearchBudgetExceeded> {
    find_isomorphism_with(c, d, &IsoConstraints::default(), budget)
}

/// Isomorphism search honoring fixed object and morphism assignments.
pub fn find_isomorphism_with(
    c: &Arc<FinCat>,
    d: &Arc<FinCat>,
    constraints: &IsoConstraints,
    budget: u64,
) -> Result<Option<FinFunctor>, SearchBudgetExceeded> {
    let n = c.num_objects();
    if n != d.num_objects() || c.num_morphisms() != d.num_morphisms() {
        return Ok(None);
    }
    let sig_c: Vec<_> = (0..n).map(|x| c.object_signature(x)).collect();
    let sig_d: Vec<_> = (0..n).map(|x| d.object_signature(x)).collect();
    let mut sc = sig_c.clone();
    let mut sd = sig_d.clone();
    sc.sort();
    sd.sort();
    if sc != sd {
        return Ok(None);
    }
    let mut fixed_obj = vec![None; n];
    for &(x, y) in &constraints.objects {
        if sig_c[x] != sig_d[y] || fixed_obj[x].is_some_and(|z| z != y) {
            return Ok(None);
        }
        fixed_obj[x] = Some(y);
    }
    for &(m, k) in &constraints.morphisms {
        for (x, y) in [(c.src(m), d.src(k)), (c.tgt(m), d.tgt(k))] {
            if fixed_obj[x].is_some_and(|z| z != y) {
                return Ok(None);
            }
            fixed_obj[x] = Some(y);
        }
    }
    // Objects with rare signatures first.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| (fixed_obj[x].is_none(), sig_d.iter().filter(|s| **s == sig_c[x]).count(), x));
    let (triples, by_mor) = composition_constraints(c);
    let mut mor_order: Vec<usize> = c.non_identity_morphisms().collect();
    mor_order.sort_by_key(|&m| (d_hom_len(c, m), m));

    let mut nodes = 0u64;
    let mut obj_map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut result = None;
    let ctx = ObjSearch { c, d, sig_c: &sig_c, sig_d: &sig_d, order: &order, fixed: &fixed_obj };
    ctx.run(0, &mut obj_map, &mut used, &mut nodes, budget, &mut |obj_map, nodes| {
        let mut mor_map = vec![None; c.num_morphisms()];
        let mut used_m = vec![false; d.num_morphisms()];
        for x in 0..n {
            let (i, j) = (c.identity(x), d.identity(obj_map[x]));
            mor_map[i] = Some(j);
            used_m[j] = true;
        }
        for &(m, k) in &constraints.morphisms {
            if mor_map[m].is_some_and(|z| z != k) || (mor_map[m].is_none() && used_m[k]) {
                return Ok(false);
            }
            if d.src(k) != obj_map[c.src(m)] || d.tgt(k) != obj_map[c.tgt(m)] {
                return Ok(false);
            }
            mor_map[m] = Some(k);
            used_m[k] = true;
        }
        let mut ms = MorphismSearch {
            c,
            d,
            obj_map,
            order: mor_order.clone(),
            triples: triples.clone(),
            by_mor: by_mor.clone(),
            mor_map,
            used: used_m,
            injective: true,
            nodes,
            budget,
        };
        let mut found = None;
        ms.run(0, &mut |mm| {
            found = Some(mm.iter().map(|m| m.expect("complete")).collect::<Vec<_>>());
            true
        })?;
        if let Some(mm) = found {
            result = Some((obj_map.to_vec(), mm));
            return Ok(true);
        }
        Ok(false)
    })?;
    Ok(result.map(|(om, mm)| FinFunctor::new(c.clone(), d.clone(), om, mm).expect("search only yields functors")))
}

fn d_hom_len(c: &FinCat, m: usize) -> usize {
    c.hom(c.src(m), c.tgt(m)).len()
}

struct ObjSearch<'a> {
    c: &'a FinCat,
    d: &'a FinCat,
    sig_c: &'a [(usize, Vec<usize>, Vec<usize>)],
    sig_d: &'a [(usize, Vec<usize>, Vec<usize>)],
    order: &'a [usize],
    fixed: &'a [Option<usize>],
}

type ObjCallback<'b> = dyn FnMut(&[usize], &mut u64) -> Result<bool, SearchBudgetExceeded> + 'b;

impl ObjSearch<'_> {
    fn run(
        &self,
        k: usize,
        obj_map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        nodes: &mut u64,
        budget: u64,
        out: &mut ObjCallback<'_>,
    ) -> Result<bool, SearchBudgetExceeded> {
        *nodes += 1;
        if *nodes > budget {
            return Err(SearchBudgetExceeded(budget));
        }
        if k == self.order.len() {
            return out(obj_map, nodes);
        }
        let x = self.order[k];
        let candidates: Vec<usize> = match self.fixed[x] {
            Some(y) => vec![y],
            None => (0..self.d.num_objects()).collect(),
        };
        for y in candidates {
            if used[y] || self.sig_c[x] != self.sig_d[y] {
                continue;
            }
            let ok = self.order[..k].iter().all(|&z| {
                let w = obj_map[z];
                self.c.hom(x, z).len() == self.d.hom(y, w).len() && self.c.hom(z, x).len() == self.d.hom(w, y).len()
            });
            if !ok {
                continue;
            }
            obj_map[x] = y;
            used[y] = true;
            let stop = self.run(k + 1, obj_map, used, nodes, budget, out)?;
            used[y] = false;
            obj_map[x] = usize::MAX;
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Every functor `c → d`, by exhaustive backtracking.
pub fn all_functors(c: &Arc<FinCat>, d: &Arc<FinCat>, budget: u64) -> Result<Vec<FinFunctor>, SearchBudgetExceeded> {
    let n = c.num_objects();
    let (triples, by_mor) = composition_constraints(c);
    let mor_order: Vec<usize> = c.non_identity_morphisms().collect();
    let mut out = Vec::new();
    let mut nodes = 0u64;
    let mut obj_map = vec![0usize; n];
    fn objs(
        k: usize,
        n: usize,
        m: usize,
        obj_map: &mut Vec<usize>,
        nodes: &mut u64,
        budget: u64,
        f: &mut dyn FnMut(&[usize], &mut u64) -> Result<(), SearchBudgetExceeded>,
    ) -> Result<(), SearchBudgetExceeded> {
        *nodes += 1;
        if *nodes > budget {
            return Err(SearchBudgetExceeded(budget));
        }
        if k == n {
            return f(obj_map, nodes);
        }
        for y in 0..m {
            obj_map[k] = y;
            objs(k + 1, n, m, obj_map, nodes, budget, f)?;
        }
        Ok(())
    }
    objs(0, n, d.num_objects(), &mut obj_map, &mut nodes, budget, &mut |om, nodes| {
        // Cheap endpoint pruning before the morphism search.
        if mor_order.iter().any(|&m| d.hom(om[c.src(m)], om[c.tgt(m)]).is_empty()) {
            return Ok(());
        }
        let mut mor_map = vec![None; c.num_morphisms()];
        for x in 0..n {
            mor_map[c.identity(x)] = Some(d.identity(om[x]));
        }
        let mut ms = MorphismSearch {
            c,
            d,
            obj_map: om,
            order: mor_order.clone(),
            triples: triples.clone(),
            by_mor: by_mor.clone(),
            mor_map,
            used: vec![false; d.num_morphisms()],
            injective: false,
            nodes,
            budget,
        };
        ms.run(0, &mut |mm| {
            out.push((om.to_vec(), mm.iter().map(|m| m.expect("complete")).collect::<Vec<_>>()));
            false
        })?;
        Ok(())
    })?;
    Ok(out
        .into_iter()
        .map(|(om, mm)| FinFunctor::new(c.clone(), d.clone(), om, mm).expect("search only yields functors"))
        .collect())
}

/// A pullback square `p1: P → C`, `p2: P → D` over `F: C → E`, `G: D → E`.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub category: Arc<FinCat>,
    pub p1: FinFunctor,
    pub p2: FinFunctor,
    left: FinFunctor,
    right: FinFunctor,
    obj_pairs: HashMap<(usize, usize), usize>,
    mor_pairs: HashMap<(usize, usize), usize>,
}

/// Pullback of `f: C → E` and `g: D → E`: pairs agreeing in `E`.
pub fn pullback(f: &FinFunctor, g: &FinFunctor) -> Result<Pullback, FunctorError> {
    if !same_category(f.target(), g.target()) {
        return Err(FunctorError::NotComposable);
    }
    let (c, d) = (f.source().clone(), g.source().clone());
    let g_obj = |y: usize| g.target().object_id(g.on_object(y)).to_string();
    let g_mor = |m: usize| g.target().morphism_id(g.on_morphism(m)).to_string();
    let f_obj = |x: usize| f.target().object_id(f.on_object(x)).to_string();
    let f_mor = |m: usize| f.target().morphism_id(f.on_morphism(m)).to_string();
    let mut b = CatBuilder::new();
    let mut obj_pairs = HashMap::new();
    let mut pairs_o = Vec::new();
    for x in 0..c.num_objects() {
        for y in 0..d.num_objects() {
            if f_obj(x) == g_obj(y) {
                let i = b.add_object(format!("({},{})", c.object_id(x), d.object_id(y)));
                obj_pairs.insert((x, y), i);
                pairs_o.push((x, y));
            }
        }
    }
    let mut mor_pairs = HashMap::new();
    let mut pairs_m = Vec::new();
    for m in 0..c.num_morphisms() {
        for k in 0..d.num_morphisms() {
            let (Some(&s), Some(&t)) = (obj_pairs.get(&(c.src(m), d.src(k))), obj_pairs.get(&(c.tgt(m), d.tgt(k)))) else {
                continue;
            };
            if f_mor(m) != g_mor(k) {
                continue;
            }
            let idx = if c.is_identity(m) && d.is_identity(k) {
                b.identity(s)
            } else {
                b.add_morphism(format!("({},{})", c.morphism_id(m), d.morphism_id(k)), s, t)
            };
            mor_pairs.insert((m, k), idx);
            pairs_m.push((m, k));
        }
    }
    for &(m1, k1) in &pairs_m {
        for &(m2, k2) in &pairs_m {
            if let (Some(a), Some(bb)) = (c.compose(m2, m1), d.compose(k2, k1)) {
                b.set_composite(mor_pairs[&(m2, k2)], mor_pairs[&(m1, k1)], mor_pairs[&(a, bb)]);
            }
        }
    }
    let cat = Arc::new(b.build().map_err(|_| FunctorError::NotComposable)?);
    let mut o1 = vec![0; cat.num_objects()];
    let mut o2 = vec![0; cat.num_objects()];
    for (&(x, y), &i) in &obj_pairs {
        o1[i] = x;
        o2[i] = y;
    }
    let mut m1 = vec![0; cat.num_morphisms()];
    let mut m2 = vec![0; cat.num_morphisms()];
    for (&(m, k), &i) in &mor_pairs {
        m1[i] = m;
        m2[i] = k;
    }
    let p1 = FinFunctor::new(cat.clone(), c, o1, m1)?;
    let p2 = FinFunctor::new(cat.clone(), d, o2, m2)?;
    Ok(Pullback { category: cat, p1, p2, left: f.clone(), right: g.clone(), obj_pairs, mor_pairs })
}

impl Pullback {
    /// The unique functor `T → P` with `p1 ∘ m = u` and `p2 ∘ m = v`.
    pub fn mediate(&self, u: &FinFunctor, v: &FinFunctor) -> Result<FinFunctor, FunctorError> {
        let fu = self.left.after(u)?;
        let gv = self.right.after(v)?;
        if fu != gv {
            return Err(FunctorError::Invalid(vec![FunctorViolation::CompositionNotPreserved {
                g: "cone".into(),
                f: "does not commute".into(),
            }]));
        }
        let t = u.source().clone();
        let om = (0..t.num_objects()).map(|x| self.obj_pairs[&(u.on_object(x), v.on_object(x))]).collect();
        let mm = (0..t.num_morphisms()).map(|m| self.mor_pairs[&(u.on_morphism(m), v.on_morphism(m))]).collect();
        FinFunctor::new(t, self.category.clone(), om, mm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(objects: &[&str], morphisms: &[(&str, &str, &str)], compose: &[(&str, &str, &str)]) -> RawCategory {
        RawCategory {
            objects: objects.iter().map(|s| s.to_string()).collect(),
            morphisms: morphisms
                .iter()
                .map(|(i, s, t)| RawMorphism { id: i.to_string(), src: s.to_string(), tgt: t.to_string() })
                .collect(),
            compose: compose.iter().map(|(g, f, h)| [g.to_string(), f.to_string(), h.to_string()]).collect(),
        }
    }

    fn iso_raw() -> RawCategory {
        raw(&["x", "y"], &[("f", "x", "y"), ("g", "y", "x")], &[("g", "f", "id_x"), ("f", "g", "id_y")])
    }

    #[test]
    fn terminal_category_is_valid() {
        let c = validate_category(&raw(&["*"], &[], &[])).unwrap();
        assert_eq!(c.num_objects(), 1);
        assert_eq!(c.num_morphisms(), 1);
    }

    #[test]
    fn isomorphism_category_is_valid() {
        let c = validate_category(&iso_raw()).unwrap();
        assert_eq!(c.num_morphisms(), 4);
        assert!(!c.is_poset());
        assert!(!c.is_acyclic());
    }

    #[test]
    fn missing_composite_is_reported() {
        let mut r = iso_raw();
        r.compose.remove(0);
        let err = validate_category(&r).unwrap_err();
        assert!(err.violations().iter().any(|v| matches!(v, Violation::MissingComposite { g, f } if g == "g" && f == "f")));
    }

    #[test]
    fn non_associative_table_is_reported() {
        // (b∘a)∘b = b∘b = a, but b∘(a∘b) = b∘a = b.
        let r = raw(
            &["x"],
            &[("a", "x", "x"), ("b", "x", "x")],
            &[("a", "a", "a"), ("a", "b", "a"), ("b", "a", "b"), ("b", "b", "a")],
        );
        let err = validate_category(&r).unwrap_err();
        assert!(err.violations().iter().any(|v| matches!(v, Violation::NonAssociative { .. })));
    }

    #[test]
    fn identity_law_violation_is_reported() {
        let r = raw(&["x", "y"], &[("f", "x", "y"), ("h", "x", "y")], &[("id_y", "f", "h")]);
        let err = validate_category(&r).unwrap_err();
        assert!(err.violations().iter().any(|v| matches!(v, Violation::IdentityLawViolation(_))));
    }

    #[test]
    fn dangling_endpoint_is_reported() {
        let r = raw(&["x"], &[("f", "x", "z")], &[]);
        let err = validate_category(&r).unwrap_err();
        assert_eq!(err.violations(), &[Violation::DanglingEndpoint { morphism: "f".into(), object: "z".into() }]);
    }

    #[test]
    fn revalidation_is_silent() {
        let c = validate_category(&iso_raw()).unwrap();
        c.revalidate().unwrap();
        let again = validate_category(&c.to_raw()).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn poset_examples() {
        let c = poset_to_category(&["0", "1"], &[("0", "1")]).unwrap();
        assert_eq!((c.num_objects(), c.num_morphisms()), (2, 3));
        assert!(c.is_poset());
        let a = poset_to_category::<&str>(&["0", "1"], &[]).unwrap();
        assert_eq!((a.num_objects(), a.num_morphisms()), (2, 2));
        assert!(matches!(
            poset_to_category(&["0", "1"], &[("0", "1"), ("1", "0")]),
            Err(CategoryError::NotAPartialOrder(_))
        ));
        assert!(matches!(
            poset_to_category(&["0", "1", "2"], &[("0", "1"), ("1", "2")]),
            Err(CategoryError::NotAPartialOrder(_))
        ));
    }

    #[test]
    fn functor_examples() {
        let c = Arc::new(chain(2));
        let id = FinFunctor::identity(c.clone());
        let (o, m) = id.id_maps();
        assert!(validate_functor(c.clone(), c.clone(), &o, &m).is_ok());

        let d = Arc::new(FinCat::terminal());
        let konst = FinFunctor::constant(c.clone(), d.clone(), 0);
        let (o, m) = konst.id_maps();
        assert!(validate_functor(c.clone(), d, &o, &m).is_ok());

        let two = Arc::new(chain(1));
        let mut o = BTreeMap::new();
        o.insert("0".to_string(), "1".to_string());
        o.insert("1".to_string(), "1".to_string());
        let mut m = BTreeMap::new();
        m.insert("0<1".to_string(), "0<1".to_string());
        let err = validate_functor(two.clone(), two, &o, &m).unwrap_err();
        assert!(matches!(err, FunctorError::Invalid(v) if v.contains(&FunctorViolation::EndpointMismatch("0<1".into()))));
    }

    #[test]
    fn isomorphism_search_examples() {
        let a = Arc::new(chain(1));
        let b = Arc::new(poset_to_category(&["a", "b"], &[("a", "b")]).unwrap());
        let iso = find_isomorphism(&a, &b, DEFAULT_SEARCH_BUDGET).unwrap().unwrap();
        assert!(iso.is_bijective());
        assert!(iso.inverse().is_some());
        let anti = Arc::new(FinCat::discrete(&["p", "q"]).unwrap());
        assert!(find_isomorphism(&a, &anti, DEFAULT_SEARCH_BUDGET).unwrap().is_none());
    }

    #[test]
    fn isomorphism_search_respects_budget() {
        let a = Arc::new(FinCat::discrete(&["a", "b", "c", "d", "e", "f"]).unwrap());
        let b = Arc::new(FinCat::discrete(&["1", "2", "3", "4", "5", "6"]).unwrap());
        assert!(matches!(find_isomorphism(&a, &b, 3), Err(SearchBudgetExceeded(3))));
    }

    #[test]
    fn product_of_chains_via_pullback() {
        let c = Arc::new(chain(1));
        let t = Arc::new(FinCat::terminal());
        let f = FinFunctor::constant(c.clone(), t.clone(), 0);
        let pb = pullback(&f, &f).unwrap();
        assert_eq!(pb.category.num_objects(), 4);
        assert_eq!(pb.category.num_morphisms(), 9);
        assert!(pb.category.is_poset());
    }

    #[test]
    fn pullback_along_identity_is_a_copy() {
        let c = Arc::new(chain(2));
        let t = Arc::new(FinCat::terminal());
        let f = FinFunctor::constant(c.clone(), t.clone(), 0);
        let id = FinFunctor::identity(t.clone());
        let pb = pullback(&f, &id).unwrap();
        assert!(find_isomorphism(&pb.category, &c, DEFAULT_SEARCH_BUDGET).unwrap().is_some());
        assert!(pb.p1.is_bijective());
    }

    #[test]
    fn pullback_of_inclusions_is_intersection() {
        let b = Arc::new(chain(2));
        let lower = Arc::new(b.full_subcategory(&[0, 1]).unwrap());
        let upper = Arc::new(b.full_subcategory(&[1, 2]).unwrap());
        let i = FinFunctor::inclusion(lower, b.clone()).unwrap();
        let j = FinFunctor::inclusion(upper, b).unwrap();
        let pb = pullback(&i, &j).unwrap();
        assert_eq!(pb.category.num_objects(), 1);
        assert_eq!(pb.category.num_morphisms(), 1);
    }

    #[test]
    fn all_functors_counts_monotone_maps() {
        // Monotone maps [1] -> [2]: 6.
        let fs = all_functors(&Arc::new(chain(1)), &Arc::new(chain(2)), DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(fs.len(), 6);
    }

    #[test]
    fn empty_category_is_initial() {
        let e = Arc::new(FinCat::empty());
        let c = Arc::new(chain(3));
        let fs = all_functors(&e, &c, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(fs.len(), 1);
        assert!(e.is_poset());
        assert!(find_isomorphism(&e, &e, 10).unwrap().is_some());
    }
}
