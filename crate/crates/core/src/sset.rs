//! Truncated simplicial sets stored by nondegenerate simplices.
//!
//! A simplex of dimension `n` is written `(y, σ)` with `y` nondegenerate of
//! dimension `k` and `σ: [n] → [k]` a monotone surjection given as its list of
//! values. Faces of nondegenerate simplices are stored; every other simplicial
//! operator is computed from them. Above the truncation dimension everything
//! is degenerate, so a `TruncSSet` is really a finite-dimensional simplicial set.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fincat::{FinCat, FinFunctor, FunctorError};
use crate::gaction::GCategory;
use crate::group::Subgroup;
use crate::present::{Path, PresentError, Presentation, Presented, DEFAULT_CLOSURE_BUDGET};

/// Default node budget for map enumeration.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SSetError {
    #[error("duplicate simplex id `{id}` in dimension {dim}")]
    DuplicateId { dim: usize, id: String },
    #[error("bad face record on `{id}` (dimension {dim}): {detail}")]
    BadFace { dim: usize, id: String, detail: String },
    #[error("simplicial identity d_{i} d_{j} = d_{} d_{i} fails on `{id}`", j - 1)]
    SimplicialIdentity { id: String, i: usize, j: usize },
    #[error("simplex `{0}` has repeated vertices")]
    NotRegular(String),
    #[error("one-skeleton has a directed cycle through `{0}`")]
    CyclicOneSkeleton(String),
    #[error("congruence closure exceeded its budget of {0} pairs")]
    ClosureBudgetExceeded(u64),
    #[error("standard complex indices out of range: {0}")]
    BadIndices(String),
    #[error("map enumeration exceeded its budget of {0} nodes")]
    EnumerationBudgetExceeded(u64),
    #[error("not a simplicial map: {0}")]
    NotAMap(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Functor(#[from] FunctorError),
}

/// `(simplex, σ)`: the degeneracy `σ^*` applied to a nondegenerate simplex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimplexRef {
    pub simplex: usize,
    pub surjection: Vec<usize>,
}

impl SimplexRef {
    pub fn nondegenerate(n: usize, x: usize) -> SimplexRef {
        SimplexRef { simplex: x, surjection: (0..=n).collect() }
    }

    pub fn dim(&self) -> usize {
        self.surjection.len() - 1
    }

    /// Dimension of the underlying nondegenerate simplex.
    pub fn base_dim(&self) -> usize {
        *self.surjection.last().expect("nonempty")
    }

    pub fn is_degenerate(&self) -> bool {
        self.base_dim() < self.dim()
    }
}

fn is_surjection(s: &[usize]) -> bool {
    !s.is_empty() && s[0] == 0 && s.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1)
}

fn coface(n: usize, i: usize) -> Vec<usize> {
    (0..=n).filter(|&v| v != i).collect()
}

fn codegeneracy(n: usize, j: usize) -> Vec<usize> {
    (0..=n).map(|v| if v <= j { v } else { v - 1 }).collect()
}

/// Monotone surjections `[n] → [k]`.
fn surjections(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0];
    fn rec(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *cur.last().unwrap();
        if cur.len() == n + 1 {
            if last == k {
                out.push(cur.clone());
            }
            return;
        }
        let remaining = n + 1 - cur.len();
        for step in 0..=1 {
            let v = last + step;
            if v <= k && k - v < remaining {
                cur.push(v);
                rec(n, k, cur, out);
                cur.pop();
            }
        }
    }
    rec(n, k, &mut cur, &mut out);
    out
}

/// Appends primes to repeated ids so every id in the list is unique.
fn uniquify(ids: Vec<String>) -> Vec<String> {
    let mut seen = HashSet::new();
    ids.into_iter()
        .map(|mut id| {
            while !seen.insert(id.clone()) {
                id.push('\'');
            }
            id
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct TruncSSet {
    dim: usize,
    ids: Vec<Vec<String>>,
    faces: Vec<Vec<Vec<SimplexRef>>>,
    index: Vec<HashMap<String, usize>>,
}

/// Accumulates nondegenerate simplices; `build` validates.
#[derive(Clone, Debug)]
pub struct SSetBuilder {
    dim: usize,
    ids: Vec<Vec<String>>,
    faces: Vec<Vec<Vec<SimplexRef>>>,
}

impl SSetBuilder {
    pub fn new(dim: usize) -> SSetBuilder {
        SSetBuilder { dim, ids: vec![Vec::new(); dim + 1], faces: vec![Vec::new(); dim + 1] }
    }

    pub fn add(&mut self, n: usize, id: impl Into<String>, faces: Vec<SimplexRef>) -> usize {
        assert!(n <= self.dim, "simplex above truncation dimension");
        self.ids[n].push(id.into());
        self.faces[n].push(faces);
        self.ids[n].len() - 1
    }

    pub fn count(&self, n: usize) -> usize {
        self.ids[n].len()
    }

    pub fn build(self) -> Result<TruncSSet, SSetError> {
        let mut index = Vec::with_capacity(self.dim + 1);
        for (n, ids) in self.ids.iter().enumerate() {
            let mut m = HashMap::with_capacity(ids.len());
            for (i, id) in ids.iter().enumerate() {
                if m.insert(id.clone(), i).is_some() {
                    return Err(SSetError::DuplicateId { dim: n, id: id.clone() });
                }
            }
            index.push(m);
        }
        let x = TruncSSet { dim: self.dim, ids: self.ids, faces: self.faces, index };
        x.check()?;
        Ok(x)
    }
}

impl PartialEq for TruncSSet {
    /// Id-level equality.
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.canonical() == other.canonical()
    }
}

impl Eq for TruncSSet {}

impl TruncSSet {
    pub fn empty(dim: usize) -> TruncSSet {
        SSetBuilder::new(dim).build().expect("empty")
    }

    pub fn point(dim: usize) -> TruncSSet {
        let mut b = SSetBuilder::new(dim);
        b.add(0, "*", vec![]);
        b.build().expect("point")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn count(&self, n: usize) -> usize {
        self.ids.get(n).map_or(0, |v| v.len())
    }

    /// Nondegenerate simplex counts in dimensions `0..=dim`.
    pub fn counts(&self) -> Vec<usize> {
        (0..=self.dim).map(|n| self.count(n)).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.count(0) == 0
    }

    pub fn id(&self, n: usize, x: usize) -> &str {
        &self.ids[n][x]
    }

    pub fn find(&self, n: usize, id: &str) -> Option<usize> {
        self.index.get(n)?.get(id).copied()
    }

    /// Stored faces of a nondegenerate simplex.
    pub fn faces(&self, n: usize, x: usize) -> &[SimplexRef] {
        &self.faces[n][x]
    }

    /// `θ^*(r)` for a monotone `θ: [m] → [dim r]`.
    pub fn apply(&self, r: &SimplexRef, theta: &[usize]) -> SimplexRef {
        let comp: Vec<usize> = theta.iter().map(|&t| r.surjection[t]).collect();
        let mut img = comp.clone();
        img.dedup();
        let tau: Vec<usize> = comp.iter().map(|v| img.binary_search(v).expect("in image")).collect();
        let base = self.restrict_injective(r.base_dim(), r.simplex, &img);
        SimplexRef { simplex: base.simplex, surjection: tau.iter().map(|&t| base.surjection[t]).collect() }
    }

    fn restrict_injective(&self, k: usize, y: usize, img: &[usize]) -> SimplexRef {
        if img.len() == k + 1 {
            return SimplexRef::nondegenerate(k, y);
        }
        let i = (0..=k).find(|v| img.binary_search(v).is_err()).expect("proper subset");
        let inner: Vec<usize> = img.iter().map(|&v| if v < i { v } else { v - 1 }).collect();
        self.apply(&self.faces[k][y][i], &inner)
    }

    /// `d_i r`.
    pub fn face(&self, r: &SimplexRef, i: usize) -> SimplexRef {
        self.apply(r, &coface(r.dim(), i))
    }

    /// `s_j r`.
    pub fn degeneracy(&self, r: &SimplexRef, j: usize) -> SimplexRef {
        self.apply(r, &codegeneracy(r.dim() + 1, j))
    }

    /// Vertex indices of a nondegenerate simplex, in order.
    pub fn vertices(&self, n: usize, x: usize) -> Vec<usize> {
        let r = SimplexRef::nondegenerate(n, x);
        (0..=n).map(|v| self.apply(&r, &[v]).simplex).collect()
    }

    /// Every simplex of dimension `n`, degenerate or not.
    pub fn all_simplices(&self, n: usize) -> Vec<SimplexRef> {
        let mut out = Vec::new();
        for k in 0..=n.min(self.dim) {
            let surs = surjections(n, k);
            for y in 0..self.count(k) {
                for s in &surs {
                    out.push(SimplexRef { simplex: y, surjection: s.clone() });
                }
            }
        }
        out
    }

    fn check(&self) -> Result<(), SSetError> {
        for n in 0..=self.dim {
            for x in 0..self.count(n) {
                let fs = &self.faces[n][x];
                let bad = |detail: String| SSetError::BadFace { dim: n, id: self.ids[n][x].clone(), detail };
                let expected = if n == 0 { 0 } else { n + 1 };
                if fs.len() != expected {
                    return Err(bad(format!("expected {expected} faces, found {}", fs.len())));
                }
                for f in fs {
                    if f.surjection.len() != n || !is_surjection(&f.surjection) {
                        return Err(bad(format!("degeneracy {:?} is not a surjection from [{}]", f.surjection, n - 1)));
                    }
                    if f.simplex >= self.count(f.base_dim()) {
                        return Err(bad("face refers to a missing simplex".into()));
                    }
                }
            }
        }
        for n in 2..=self.dim {
            for x in 0..self.count(n) {
                let r = SimplexRef::nondegenerate(n, x);
                for j in 1..=n {
                    for i in 0..j {
                        let a = self.face(&self.face(&r, j), i);
                        let b = self.face(&self.face(&r, i), j - 1);
                        if a != b {
                            return Err(SSetError::SimplicialIdentity { id: self.ids[n][x].clone(), i, j });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn canonical(&self) -> Vec<BTreeMap<&str, Vec<(&str, &[usize])>>> {
        (0..=self.dim)
            .map(|n| {
                (0..self.count(n))
                    .map(|x| {
                        let fs = self.faces[n][x]
                            .iter()
                            .map(|f| (self.ids[f.base_dim()][f.simplex].as_str(), f.surjection.as_slice()))
                            .collect();
                        (self.ids[n][x].as_str(), fs)
                    })
                    .collect()
            })
            .collect()
    }

    /// The sub-simplicial set on the kept simplices, which must be closed under faces.
    pub fn subcomplex(&self, keep: &[Vec<bool>]) -> Result<TruncSSet, SSetError> {
        let mut b = SSetBuilder::new(self.dim);
        let mut new_index: Vec<Vec<Option<usize>>> = Vec::new();
        for n in 0..=self.dim {
            let mut idx = vec![None; self.count(n)];
            for x in 0..self.count(n) {
                if !keep[n][x] {
                    continue;
                }
                let faces = self.faces[n][x]
                    .iter()
                    .map(|f| {
                        new_index[f.base_dim()][f.simplex]
                            .map(|s| SimplexRef { simplex: s, surjection: f.surjection.clone() })
                            .ok_or_else(|| SSetError::Malformed(format!("face of `{}` is not kept", self.ids[n][x])))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                idx[x] = Some(b.add(n, self.ids[n][x].clone(), faces));
            }
            new_index.push(idx);
        }
        b.build()
    }

    pub fn to_raw(&self) -> RawSSet {
        let dims = (0..=self.dim)
            .map(|n| {
                let simplices = (0..self.count(n))
                    .map(|x| RawSimplex {
                        id: self.ids[n][x].clone(),
                        faces: self.faces[n][x]
                            .iter()
                            .map(|f| RawFace { simplex: self.ids[f.base_dim()][f.simplex].clone(), degeneracy: f.surjection.clone() })
                            .collect(),
                    })
                    .collect();
                (n.to_string(), simplices)
            })
            .collect();
        RawSSet { dimension: Some(self.dim), dims }
    }
}

/// Interchange form: per-dimension simplex lists with face records.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawSSet {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    pub dims: BTreeMap<String, Vec<RawSimplex>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawSimplex {
    pub id: String,
    #[serde(default)]
    pub faces: Vec<RawFace>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawFace {
    #[serde(rename = "ref")]
    pub simplex: String,
    pub degeneracy: Vec<usize>,
}

pub fn validate_sset(raw: &RawSSet) -> Result<TruncSSet, SSetError> {
    let mut levels: BTreeMap<usize, &Vec<RawSimplex>> = BTreeMap::new();
    for (k, v) in &raw.dims {
        let n: usize = k.parse().map_err(|_| SSetError::Malformed(format!("dimension key `{k}` is not a number")))?;
        levels.insert(n, v);
    }
    let top = levels.keys().next_back().copied().unwrap_or(0);
    let dim = raw.dimension.unwrap_or(top).max(top);
    let mut b = SSetBuilder::new(dim);
    let mut index: Vec<HashMap<&str, usize>> = vec![HashMap::new(); dim + 1];
    for n in 0..=dim {
        let Some(list) = levels.get(&n) else { continue };
        for s in list.iter() {
            let faces = s
                .faces
                .iter()
                .map(|f| {
                    let k = *f.degeneracy.last().ok_or_else(|| SSetError::BadFace {
                        dim: n,
                        id: s.id.clone(),
                        detail: "empty degeneracy".into(),
                    })?;
                    let bad = || SSetError::BadFace { dim: n, id: s.id.clone(), detail: format!("unknown face `{}`", f.simplex) };
                    let simplex = *index.get(k).ok_or_else(bad)?.get(f.simplex.as_str()).ok_or_else(bad)?;
                    Ok(SimplexRef { simplex, surjection: f.degeneracy.clone() })
                })
                .collect::<Result<Vec<_>, SSetError>>()?;
            let i = b.add(n, s.id.clone(), faces);
            if index[n].insert(&s.id, i).is_some() {
                return Err(SSetError::DuplicateId { dim: n, id: s.id.clone() });
            }
        }
    }
    b.build()
}

/// A simplicial map, recorded on nondegenerate simplices.
#[derive(Clone, Debug, PartialEq)]
pub struct SSetMap {
    source: Arc<TruncSSet>,
    target: Arc<TruncSSet>,
    images: Vec<Vec<SimplexRef>>,
}

impl SSetMap {
    pub fn new(source: Arc<TruncSSet>, target: Arc<TruncSSet>, images: Vec<Vec<SimplexRef>>) -> Result<SSetMap, SSetError> {
        if images.len() != source.dim() + 1 {
            return Err(SSetError::NotAMap("wrong number of dimensions".into()));
        }
        for n in 0..=source.dim() {
            if images[n].len() != source.count(n) {
                return Err(SSetError::NotAMap(format!("dimension {n} is not fully mapped")));
            }
            for r in &images[n] {
                if r.dim() != n || !is_surjection(&r.surjection) || r.base_dim() > target.dim() || r.simplex >= target.count(r.base_dim()) {
                    return Err(SSetError::NotAMap(format!("bad image in dimension {n}")));
                }
            }
        }
        let f = SSetMap { source, target, images };
        for n in 1..=f.source.dim() {
            for x in 0..f.source.count(n) {
                for (i, face) in f.source.faces(n, x).iter().enumerate() {
                    if f.target.face(&f.images[n][x], i) != f.map_ref(face) {
                        return Err(SSetError::NotAMap(format!("face {i} of `{}` not preserved", f.source.id(n, x))));
                    }
                }
            }
        }
        Ok(f)
    }

    pub fn identity(x: Arc<TruncSSet>) -> SSetMap {
        let images = (0..=x.dim()).map(|n| (0..x.count(n)).map(|i| SimplexRef::nondegenerate(n, i)).collect()).collect();
        SSetMap { source: x.clone(), target: x, images }
    }

    /// Inclusion matching simplices by id.
    pub fn inclusion(sub: Arc<TruncSSet>, sup: Arc<TruncSSet>) -> Result<SSetMap, SSetError> {
        let images = (0..=sub.dim())
            .map(|n| {
                (0..sub.count(n))
                    .map(|x| {
                        sup.find(n, sub.id(n, x))
                            .map(|y| SimplexRef::nondegenerate(n, y))
                            .ok_or_else(|| SSetError::NotAMap(format!("`{}` missing from the larger complex", sub.id(n, x))))
                    })
                    .collect()
            })
            .collect::<Result<Vec<Vec<_>>, _>>()?;
        SSetMap::new(sub, sup, images)
    }

    pub fn source(&self) -> &Arc<TruncSSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<TruncSSet> {
        &self.target
    }

    pub fn image(&self, n: usize, x: usize) -> &SimplexRef {
        &self.images[n][x]
    }

    pub fn images(&self) -> &[Vec<SimplexRef>] {
        &self.images
    }

    /// Image of an arbitrary simplex of the source.
    pub fn map_ref(&self, r: &SimplexRef) -> SimplexRef {
        self.target.apply(&self.images[r.base_dim()][r.simplex], &r.surjection)
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &SSetMap) -> SSetMap {
        let images = first.images.iter().map(|level| level.iter().map(|r| self.map_ref(r)).collect()).collect();
        SSetMap { source: first.source.clone(), target: self.target.clone(), images }
    }
}

/// Every simplicial map `X → Y`, by backtracking with face-compatible candidates.
pub fn all_maps(x: &Arc<TruncSSet>, y: &Arc<TruncSSet>, budget: u64) -> Result<Vec<SSetMap>, SSetError> {
    Ok(enumerate_maps(x, y, budget)?
        .into_iter()
        .map(|images| SSetMap { source: x.clone(), target: y.clone(), images })
        .collect())
}

fn enumerate_maps(x: &TruncSSet, y: &TruncSSet, budget: u64) -> Result<Vec<Vec<Vec<SimplexRef>>>, SSetError> {
    let top = x.dim();
    // Candidate simplices of Y in each dimension, indexed by their faces.
    let mut by_faces: Vec<HashMap<Vec<SimplexRef>, Vec<SimplexRef>>> = Vec::new();
    for n in 0..=top {
        let mut m: HashMap<Vec<SimplexRef>, Vec<SimplexRef>> = HashMap::new();
        if n > 0 {
            for r in y.all_simplices(n) {
                let fs = (0..=n).map(|i| y.face(&r, i)).collect();
                m.entry(fs).or_default().push(r);
            }
        }
        by_faces.push(m);
    }
    let vertices: Vec<SimplexRef> = (0..y.count(0)).map(|v| SimplexRef::nondegenerate(0, v)).collect();
    let mut order: Vec<(usize, usize, usize)> = Vec::new();
    for n in 0..=top {
        for s in 0..x.count(n) {
            let key = x.vertices(n, s).into_iter().max().unwrap_or(0);
            order.push((key, n, s));
        }
    }
    order.sort();
    let mut images: Vec<Vec<Option<SimplexRef>>> = (0..=top).map(|n| vec![None; x.count(n)]).collect();
    let mut out = Vec::new();
    let mut nodes = 0u64;

    #[allow(clippy::too_many_arguments)]
    fn rec(
        k: usize,
        order: &[(usize, usize, usize)],
        x: &TruncSSet,
        y: &TruncSSet,
        by_faces: &[HashMap<Vec<SimplexRef>, Vec<SimplexRef>>],
        vertices: &[SimplexRef],
        images: &mut Vec<Vec<Option<SimplexRef>>>,
        out: &mut Vec<Vec<Vec<SimplexRef>>>,
        nodes: &mut u64,
        budget: u64,
    ) -> Result<(), SSetError> {
        *nodes += 1;
        if *nodes > budget {
            return Err(SSetError::EnumerationBudgetExceeded(budget));
        }
        if k == order.len() {
            out.push(images.iter().map(|l| l.iter().map(|r| r.clone().expect("assigned")).collect()).collect());
            return Ok(());
        }
        let (_, n, s) = order[k];
        let candidates: Vec<SimplexRef> = if n == 0 {
            vertices.to_vec()
        } else {
            let fs: Vec<SimplexRef> = x
                .faces(n, s)
                .iter()
                .map(|f| {
                    let img = images[f.base_dim()][f.simplex].as_ref().expect("faces come first");
                    y.apply(img, &f.surjection)
                })
                .collect();
            by_faces[n].get(&fs).cloned().unwrap_or_default()
        };
        for c in candidates {
            images[n][s] = Some(c);
            rec(k + 1, order, x, y, by_faces, vertices, images, out, nodes, budget)?;
        }
        images[n][s] = None;
        Ok(())
    }

    rec(0, &order, x, y, &by_faces, &vertices, &mut images, &mut out, &mut nodes, budget)?;
    Ok(out)
}

/// Strict chain of identities-free morphisms plus the collapse pattern.
fn normalize_chain(c: &FinCat, start: usize, chain: &[usize]) -> (usize, Vec<usize>, Vec<usize>) {
    let mut surj = vec![0];
    let mut kept = Vec::new();
    for &m in chain {
        if c.is_identity(m) {
            surj.push(*surj.last().unwrap());
        } else {
            kept.push(m);
            surj.push(surj.last().unwrap() + 1);
        }
    }
    (start, kept, surj)
}

/// Indexing of a nerve's nondegenerate simplices by their chains.
#[derive(Clone, Debug)]
pub struct Nerve {
    pub sset: Arc<TruncSSet>,
    category: Arc<FinCat>,
    chains: Vec<Vec<(usize, Vec<usize>)>>,
    chain_index: Vec<HashMap<Vec<usize>, usize>>,
}

impl Nerve {
    /// Nondegenerate simplex for a chain of composable morphisms starting at `start`.
    pub fn simplex_of(&self, start: usize, chain: &[usize]) -> SimplexRef {
        let (v, kept, surj) = normalize_chain(&self.category, start, chain);
        let idx = if kept.is_empty() { v } else { self.chain_index[kept.len()][&kept] };
        SimplexRef { simplex: idx, surjection: surj }
    }

    pub fn chain(&self, n: usize, x: usize) -> &(usize, Vec<usize>) {
        &self.chains[n][x]
    }

    pub fn category(&self) -> &Arc<FinCat> {
        &self.category
    }
}

pub fn nerve(c: &FinCat, d: usize) -> TruncSSet {
    (*nerve_full(&Arc::new(c.clone()), d).sset).clone()
}

/// Nerve truncated at `d`: `n`-simplices are chains of `n` composable
/// non-identity morphisms. Vertex ids are object ids; chains are `[f;g;...]`.
pub fn nerve_full(c: &Arc<FinCat>, d: usize) -> Nerve {
    let mut chains: Vec<Vec<(usize, Vec<usize>)>> = vec![(0..c.num_objects()).map(|o| (o, vec![])).collect()];
    for n in 1..=d {
        let mut level = Vec::new();
        for (start, ch) in &chains[n - 1] {
            let end = ch.last().map_or(*start, |&m| c.tgt(m));
            for &m in c.out_morphisms(end) {
                if !c.is_identity(m) {
                    let mut next = ch.clone();
                    next.push(m);
                    level.push((*start, next));
                }
            }
        }
        chains.push(level);
    }
    let chain_index: Vec<HashMap<Vec<usize>, usize>> =
        chains.iter().map(|l| l.iter().enumerate().map(|(i, (_, ch))| (ch.clone(), i)).collect()).collect();
    let mut b = SSetBuilder::new(d);
    for (n, level) in chains.iter().enumerate() {
        let ids: Vec<String> = level
            .iter()
            .map(|(s, ch)| {
                if n == 0 {
                    c.object_id(*s).to_string()
                } else {
                    format!("[{}]", ch.iter().map(|&m| c.morphism_id(m)).collect::<Vec<_>>().join(";"))
                }
            })
            .collect();
        for ((start, ch), id) in level.iter().zip(uniquify(ids)) {
            let faces = if n == 0 {
                vec![]
            } else {
                (0..=n)
                    .map(|i| {
                        let (s, f): (usize, Vec<usize>) = if i == 0 {
                            (c.tgt(ch[0]), ch[1..].to_vec())
                        } else if i == n {
                            (*start, ch[..n - 1].to_vec())
                        } else {
                            let mut f = ch[..i - 1].to_vec();
                            f.push(c.compose(ch[i], ch[i - 1]).expect("composable chain"));
                            f.extend_from_slice(&ch[i + 1..]);
                            (*start, f)
                        };
                        let (v, kept, surj) = normalize_chain(c, s, &f);
                        let idx = if kept.is_empty() { v } else { chain_index[kept.len()][&kept] };
                        SimplexRef { simplex: idx, surjection: surj }
                    })
                    .collect()
            };
            b.add(n, id, faces);
        }
    }
    Nerve { sset: Arc::new(b.build().expect("nerves satisfy the simplicial identities")), category: c.clone(), chains, chain_index }
}

/// `N(F)` between nerves of the same truncation.
pub fn nerve_map(f: &FinFunctor, source: &Nerve, target: &Nerve) -> SSetMap {
    let images = (0..=source.sset.dim())
        .map(|n| {
            (0..source.sset.count(n))
                .map(|x| {
                    let (s, ch) = source.chain(n, x);
                    let img: Vec<usize> = ch.iter().map(|&m| f.on_morphism(m)).collect();
                    target.simplex_of(f.on_object(*s), &img)
                })
                .collect()
        })
        .collect();
    SSetMap::new(source.sset.clone(), target.sset.clone(), images).expect("nerve of a functor")
}

/// Simplices fixed by every element of `h` under the given automorphisms.
pub fn fixed_subcomplex(x: &TruncSSet, action: &[SSetMap], h: &Subgroup) -> TruncSSet {
    let keep: Vec<Vec<bool>> = (0..=x.dim())
        .map(|n| {
            (0..x.count(n))
                .map(|s| h.elements().iter().all(|&g| *action[g].image(n, s) == SimplexRef::nondegenerate(n, s)))
                .collect()
        })
        .collect();
    x.subcomplex(&keep).expect("fixed simplices are closed under faces")
}

/// Nerve of a G-category with the induced simplicial action.
pub fn equivariant_nerve(x: &GCategory, d: usize) -> (Nerve, Vec<SSetMap>) {
    let n = nerve_full(x.base(), d);
    let action = (0..x.group().order()).map(|g| nerve_map(x.sigma(g), &n, &n)).collect();
    (n, action)
}

/// `Sd X` with its flags recorded.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub sset: Arc<TruncSSet>,
    /// Simplices of the input, in vertex order of the subdivision.
    vertex_simplex: Vec<(usize, usize)>,
    vertex_of: HashMap<(usize, usize), usize>,
    flags: Vec<Vec<Vec<usize>>>,
    flag_index: Vec<HashMap<Vec<usize>, usize>>,
}

impl Subdivision {
    /// Input simplex `(dim, index)` behind a vertex of the subdivision.
    pub fn vertex_simplex(&self, v: usize) -> (usize, usize) {
        self.vertex_simplex[v]
    }

    pub fn flag(&self, n: usize, x: usize) -> &[usize] {
        &self.flags[n][x]
    }
}

/// True when every nondegenerate simplex has pairwise distinct vertices.
pub fn is_regular(x: &TruncSSet) -> bool {
    regular_violation(x).is_none()
}

fn regular_violation(x: &TruncSSet) -> Option<String> {
    for n in 1..=x.dim() {
        for s in 0..x.count(n) {
            let vs = x.vertices(n, s);
            let set: HashSet<_> = vs.iter().collect();
            if set.len() != vs.len() {
                return Some(x.id(n, s).to_string());
            }
        }
    }
    None
}

pub fn sd(x: &TruncSSet) -> Result<TruncSSet, SSetError> {
    Ok((*subdivide(x)?.sset).clone())
}

/// Barycentric subdivision in the flag model: `n`-simplices are chains
/// `x₀ < … < xₙ` of nondegenerate simplices under the face relation.
pub fn subdivide(x: &TruncSSet) -> Result<Subdivision, SSetError> {
    if let Some(id) = regular_violation(x) {
        return Err(SSetError::NotRegular(id));
    }
    let mut vertex_simplex = Vec::new();
    for n in 0..=x.dim() {
        for s in 0..x.count(n) {
            vertex_simplex.push((n, s));
        }
    }
    let vertex_of: HashMap<(usize, usize), usize> = vertex_simplex.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    // Proper cofaces of each simplex.
    let mut up: Vec<Vec<usize>> = vec![Vec::new(); vertex_simplex.len()];
    for (v, &(n, s)) in vertex_simplex.iter().enumerate() {
        let r = SimplexRef::nondegenerate(n, s);
        for mask in 1..(1u64 << (n + 1)) - 1 {
            let theta: Vec<usize> = (0..=n).filter(|&i| mask & (1 << i) != 0).collect();
            let f = x.apply(&r, &theta);
            up[vertex_of[&(f.base_dim(), f.simplex)]].push(v);
        }
    }
    for u in &mut up {
        u.sort();
        u.dedup();
    }
    let d = x.dim();
    let mut flags: Vec<Vec<Vec<usize>>> = vec![(0..vertex_simplex.len()).map(|v| vec![v]).collect()];
    for n in 1..=d {
        let mut level = Vec::new();
        for f in &flags[n - 1] {
            for &w in &up[*f.last().unwrap()] {
                let mut g = f.clone();
                g.push(w);
                level.push(g);
            }
        }
        flags.push(level);
    }
    let flag_index: Vec<HashMap<Vec<usize>, usize>> =
        flags.iter().map(|l| l.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect()).collect();
    let name = |v: usize| {
        let (n, s) = vertex_simplex[v];
        x.id(n, s).to_string()
    };
    let mut b = SSetBuilder::new(d);
    for (n, level) in flags.iter().enumerate() {
        let ids: Vec<String> = level
            .iter()
            .map(|f| format!("<{}>", f.iter().map(|&v| name(v)).collect::<Vec<_>>().join("|")))
            .collect();
        for (f, id) in level.iter().zip(uniquify(ids)) {
            let faces = if n == 0 {
                vec![]
            } else {
                (0..=n)
                    .map(|i| {
                        let mut g = f.clone();
                        g.remove(i);
                        SimplexRef::nondegenerate(n - 1, flag_index[n - 1][&g])
                    })
                    .collect()
            };
            b.add(n, id, faces);
        }
    }
    let sset = Arc::new(b.build().expect("flag complexes are simplicial sets"));
    Ok(Subdivision { sset, vertex_simplex, vertex_of, flags, flag_index })
}

/// `Sd f`: a vertex goes to the nondegenerate simplex underlying its image.
pub fn sd_map(f: &SSetMap, sx: &Subdivision, sy: &Subdivision) -> SSetMap {
    let images = (0..=sx.sset.dim())
        .map(|n| {
            (0..sx.sset.count(n))
                .map(|k| {
                    let mut chain: Vec<usize> = sx.flags[n][k]
                        .iter()
                        .map(|&v| {
                            let (d, s) = sx.vertex_simplex[v];
                            let img = f.image(d, s);
                            sy.vertex_of[&(img.base_dim(), img.simplex)]
                        })
                        .collect();
                    let mut surj = vec![0];
                    for w in chain.windows(2) {
                        surj.push(surj.last().unwrap() + usize::from(w[0] != w[1]));
                    }
                    chain.dedup();
                    SimplexRef { simplex: sy.flag_index[chain.len() - 1][&chain], surjection: surj }
                })
                .collect()
        })
        .collect();
    SSetMap::new(sx.sset.clone(), sy.sset.clone(), images).expect("subdivision of a map")
}

/// A categorified simplicial set together with its presentation.
#[derive(Clone, Debug)]
pub struct Categorified {
    pub category: Arc<FinCat>,
    presentation: Presentation,
    presented: Presented,
}

pub fn categorify(x: &TruncSSet) -> Result<FinCat, SSetError> {
    Ok((*categorify_with(x, DEFAULT_CLOSURE_BUDGET)?.category).clone())
}

/// `c(X)`: vertices and nondegenerate edges modulo `d₁σ = d₀σ ∘ d₂σ`.
pub fn categorify_with(x: &TruncSSet, budget: u64) -> Result<Categorified, SSetError> {
    let mut p = Presentation::default();
    for v in 0..x.count(0) {
        p.add_vertex(x.id(0, v));
    }
    if x.dim() >= 1 {
        for e in 0..x.count(1) {
            let fs = x.faces(1, e);
            p.add_edge(x.id(1, e), fs[1].simplex, fs[0].simplex);
        }
    }
    let path = |p: &Presentation, r: &SimplexRef| {
        if r.is_degenerate() {
            Path::empty(r.simplex)
        } else {
            Path::edge(p, r.simplex)
        }
    };
    if x.dim() >= 2 {
        for t in 0..x.count(2) {
            let fs = x.faces(2, t);
            let lhs = path(&p, &fs[2]).then(&path(&p, &fs[0]));
            let rhs = path(&p, &fs[1]);
            p.relate(lhs, rhs);
        }
    }
    let presented = p.present(budget).map_err(|e| match e {
        PresentError::Cyclic(v) => SSetError::CyclicOneSkeleton(v),
        PresentError::ClosureBudgetExceeded(n) => SSetError::ClosureBudgetExceeded(n),
        PresentError::Malformed(m) => SSetError::Malformed(m),
    })?;
    Ok(Categorified { category: presented.category.clone(), presentation: p, presented })
}

/// `c(f)`, built from the images of vertices and edges.
pub fn categorify_map(f: &SSetMap, cx: &Categorified, cy: &Categorified) -> Result<FinFunctor, SSetError> {
    let vmap: Vec<usize> = (0..f.source().count(0)).map(|v| f.image(0, v).simplex).collect();
    let emap: Vec<usize> = if f.source().dim() >= 1 {
        (0..f.source().count(1))
            .map(|e| {
                let r = f.image(1, e);
                if r.is_degenerate() {
                    cy.category.identity(r.simplex)
                } else {
                    cy.presented.edge_morphism[r.simplex]
                }
            })
            .collect()
    } else {
        vec![]
    };
    Ok(cx.presented.functor_from_generators(cy.category.clone(), &vmap, &emap, &cx.presentation)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StandardKind {
    Delta,
    Boundary,
    Horn,
}

fn subset_id(s: &[usize]) -> String {
    s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

/// `Δ[m]`, `∂Δ[m]` or `Λ^k[m]`, truncated at `m`. Simplices are named by
/// their vertex sets, e.g. `0,2`.
pub fn standard_complex(kind: StandardKind, m: usize, k: Option<usize>) -> Result<TruncSSet, SSetError> {
    match kind {
        StandardKind::Delta => {}
        StandardKind::Boundary if m == 0 => return Ok(TruncSSet::empty(0)),
        StandardKind::Horn => match k {
            _ if m == 0 => return Err(SSetError::BadIndices("horn needs m ≥ 1".into())),
            Some(k) if k <= m => {}
            _ => return Err(SSetError::BadIndices(format!("horn needs 0 ≤ k ≤ m, got k = {k:?}, m = {m}"))),
        },
        _ => {}
    }
    if m >= 63 {
        return Err(SSetError::BadIndices("m too large".into()));
    }
    let full: u64 = (1 << (m + 1)) - 1;
    let keep = |mask: u64| match kind {
        StandardKind::Delta => true,
        StandardKind::Boundary => mask != full,
        StandardKind::Horn => mask != full && mask != full & !(1 << k.unwrap()),
    };
    let mut by_dim: Vec<Vec<Vec<usize>>> = vec![Vec::new(); m + 1];
    for mask in 1..=full {
        if keep(mask) {
            let s: Vec<usize> = (0..=m).filter(|&i| mask & (1 << i) != 0).collect();
            by_dim[s.len() - 1].push(s);
        }
    }
    for level in &mut by_dim {
        level.sort();
    }
    let mut b = SSetBuilder::new(m);
    let mut index: Vec<HashMap<Vec<usize>, usize>> = vec![HashMap::new(); m + 1];
    for (n, level) in by_dim.iter().enumerate() {
        for s in level {
            let faces = if n == 0 {
                vec![]
            } else {
                (0..=n)
                    .map(|i| {
                        let mut t = s.clone();
                        t.remove(i);
                        SimplexRef::nondegenerate(n - 1, index[n - 1][&t])
                    })
                    .collect()
            };
            let i = b.add(n, subset_id(s), faces);
            index[n].insert(s.clone(), i);
        }
    }
    b.build()
}

/// `Δ[θ]: Δ[a] → Δ[b]` for monotone `θ: [a] → [b]`, with `Δ[b]` as built by
/// `standard_complex`.
pub fn standard_map(source: &Arc<TruncSSet>, target: &Arc<TruncSSet>, theta: &[usize]) -> SSetMap {
    let images = (0..=source.dim())
        .map(|n| {
            (0..source.count(n))
                .map(|x| {
                    let verts: Vec<usize> = source.vertices(n, x).iter().map(|&v| theta[vertex_label(source, v)]).collect();
                    let mut img = verts.clone();
                    img.dedup();
                    let surj = verts.iter().map(|v| img.binary_search(v).unwrap()).collect();
                    let y = target.find(img.len() - 1, &subset_id(&img)).expect("standard simplex");
                    SimplexRef { simplex: y, surjection: surj }
                })
                .collect()
        })
        .collect();
    SSetMap::new(source.clone(), target.clone(), images).expect("monotone maps induce simplicial maps")
}

fn vertex_label(x: &TruncSSet, v: usize) -> usize {
    x.id(0, v).parse().expect("standard vertex label")
}

/// An inclusion of posets obtained as `cSd²` of a standard inclusion.
#[derive(Clone, Debug)]
pub struct GeneratingCell {
    pub source: Arc<FinCat>,
    pub target: Arc<FinCat>,
    pub inclusion: FinFunctor,
}

/// `cSd²` of an inclusion of simplicial sets.
pub fn csd2_map(sub: &Arc<TruncSSet>, sup: &Arc<TruncSSet>) -> Result<GeneratingCell, SSetError> {
    let inc = SSetMap::inclusion(sub.clone(), sup.clone())?;
    let (s1, t1) = (subdivide(sub)?, subdivide(sup)?);
    let inc1 = sd_map(&inc, &s1, &t1);
    let (s2, t2) = (subdivide(&s1.sset)?, subdivide(&t1.sset)?);
    let inc2 = sd_map(&inc1, &s2, &t2);
    let cs = categorify_with(&s2.sset, DEFAULT_CLOSURE_BUDGET)?;
    let ct = categorify_with(&t2.sset, DEFAULT_CLOSURE_BUDGET)?;
    let inclusion = categorify_map(&inc2, &cs, &ct)?;
    Ok(GeneratingCell { source: cs.category, target: ct.category, inclusion })
}

/// `cSd² X`.
pub fn csd2(x: &TruncSSet) -> Result<FinCat, SSetError> {
    categorify(&sd(&sd(x)?)?)
}

/// `cSd²∂Δ[m] → cSd²Δ[m]`; for `m = 0` the empty category into the point.
pub fn cofibration_cell(m: usize) -> Result<GeneratingCell, SSetError> {
    let sup = Arc::new(standard_complex(StandardKind::Delta, m, None)?);
    let sub = Arc::new(standard_complex(StandardKind::Boundary, m, None)?);
    csd2_map(&sub, &sup)
}

/// The horn inclusion after `cSd²`, into both `cSd²Δ[m]` and `cSd²∂Δ[m]`.
#[derive(Clone, Debug)]
pub struct HornCell {
    pub to_simplex: GeneratingCell,
    pub to_boundary: GeneratingCell,
}

pub fn acyclic_cell(m: usize, k: usize) -> Result<HornCell, SSetError> {
    let horn = Arc::new(standard_complex(StandardKind::Horn, m, Some(k))?);
    let delta = Arc::new(standard_complex(StandardKind::Delta, m, None)?);
    let boundary = Arc::new(standard_complex(StandardKind::Boundary, m, None)?);
    Ok(HornCell { to_simplex: csd2_map(&horn, &delta)?, to_boundary: csd2_map(&horn, &boundary)? })
}

/// The cofibration cell for `k = None`, the horn cell into `cSd²Δ[m]` otherwise.
pub fn generating_cell(m: usize, k: Option<usize>) -> Result<GeneratingCell, SSetError> {
    match k {
        None => cofibration_cell(m),
        Some(k) => Ok(acyclic_cell(m, k)?.to_simplex),
    }
}

/// `Ex X` truncated at `n_max`, with the count of all (not only
/// nondegenerate) simplices per dimension.
#[derive(Clone, Debug)]
pub struct ExComplex {
    pub sset: TruncSSet,
    pub simplex_counts: Vec<usize>,
}

/// `Ex(X)ₙ = Hom(Sd Δ[n], X)`, faces by precomposition with `Sd δ_i`.
pub fn ex(x: &TruncSSet, n_max: usize, budget: u64) -> Result<ExComplex, SSetError> {
    let sds: Vec<Subdivision> = (0..=n_max)
        .map(|n| subdivide(&standard_complex(StandardKind::Delta, n, None).expect("Δ[n]")))
        .collect::<Result<_, _>>()?;
    let deltas: Vec<Arc<TruncSSet>> = (0..=n_max).map(|n| Arc::new(standard_complex(StandardKind::Delta, n, None).expect("Δ[n]"))).collect();
    let x = Arc::new(x.clone());
    let mut maps: Vec<Vec<Vec<Vec<SimplexRef>>>> = Vec::new();
    let mut lookup: Vec<HashMap<Vec<Vec<SimplexRef>>, usize>> = Vec::new();
    // For each dimension n and map f: indices of d_i f in dimension n-1.
    let mut face_idx: Vec<Vec<Vec<usize>>> = Vec::new();
    // Normal form: nondegenerate ordinal in dimension k and surjection [n] → [k].
    let mut normal: Vec<Vec<(usize, Vec<usize>)>> = Vec::new();
    let mut nondeg: Vec<Vec<usize>> = Vec::new();
    for n in 0..=n_max {
        let level = enumerate_maps(&sds[n].sset, &x, budget)?;
        let index: HashMap<_, _> = level.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
        let (mut faces, mut nf, mut nd) = (Vec::new(), Vec::new(), Vec::new());
        if n == 0 {
            for (i, _) in level.iter().enumerate() {
                faces.push(vec![]);
                nf.push((i, vec![0]));
                nd.push(i);
            }
        } else {
            let cofaces: Vec<SSetMap> = (0..=n)
                .map(|i| sd_map(&standard_map(&deltas[n - 1], &deltas[n], &coface(n, i)), &sds[n - 1], &sds[n]))
                .collect();
            let codegens: Vec<SSetMap> = (0..n)
                .map(|j| sd_map(&standard_map(&deltas[n], &deltas[n - 1], &codegeneracy(n, j)), &sds[n], &sds[n - 1]))
                .collect();
            let pre = |f: &Vec<Vec<SimplexRef>>, g: &SSetMap| -> Vec<Vec<SimplexRef>> {
                g.images().iter().map(|l| l.iter().map(|r| x.apply(&f[r.base_dim()][r.simplex], &r.surjection)).collect()).collect()
            };
            for f in &level {
                let fs: Vec<usize> = cofaces.iter().map(|c| lookup[n - 1][&pre(f, c)]).collect();
                let degenerate = (0..n).find(|&j| {
                    let g = &maps[n - 1][fs[j]];
                    pre(g, &codegens[j]) == *f
                });
                match degenerate {
                    Some(j) => {
                        let (w, tau) = &normal[n - 1][fs[j]];
                        let sj = codegeneracy(n, j);
                        nf.push((*w, sj.iter().map(|&i| tau[i]).collect()));
                    }
                    None => {
                        nf.push((nd.len(), (0..=n).collect()));
                        nd.push(faces.len());
                    }
                }
                faces.push(fs);
            }
        }
        maps.push(level);
        lookup.push(index);
        face_idx.push(faces);
        normal.push(nf);
        nondeg.push(nd);
    }
    let mut b = SSetBuilder::new(n_max);
    for n in 0..=n_max {
        for (k, &f) in nondeg[n].iter().enumerate() {
            let faces = if n == 0 {
                vec![]
            } else {
                face_idx[n][f]
                    .iter()
                    .map(|&g| {
                        let (w, s) = &normal[n - 1][g];
                        SimplexRef { simplex: *w, surjection: s.clone() }
                    })
                    .collect()
            };
            let id = if n == 0 { x.id(0, maps[0][f][0][0].simplex).to_string() } else { format!("ex{n}.{k}") };
            b.add(n, id, faces);
        }
    }
    Ok(ExComplex { sset: b.build()?, simplex_counts: maps.iter().map(|l| l.len()).collect() })
}

/// `Ex² N(C)` truncated at `n_max`.
pub fn ex2_nerve(c: &FinCat, n_max: usize, budget: u64) -> Result<ExComplex, SSetError> {
    let once = ex(&nerve(c, n_max), n_max, budget)?;
    ex(&once.sset, n_max, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{chain, find_isomorphism, poset_to_category, DEFAULT_SEARCH_BUDGET};
    use crate::gaction::{fixed_category, tensor};
    use crate::group::{coset_gset, subgroups, FinGroup};

    fn iso(a: &FinCat, b: &FinCat) -> bool {
        find_isomorphism(&Arc::new(a.clone()), &Arc::new(b.clone()), DEFAULT_SEARCH_BUDGET).unwrap().is_some()
    }

    /// Nonempty subsets of `[m]` ordered by inclusion, built directly.
    fn face_poset_of_simplex(m: usize) -> FinCat {
        let sets: Vec<u32> = (1..(1u32 << (m + 1))).collect();
        let names: Vec<String> = sets.iter().map(|s| format!("{s:b}")).collect();
        let mut rel = Vec::new();
        for a in &sets {
            for b in &sets {
                if a & b == *a {
                    rel.push((format!("{a:b}"), format!("{b:b}")));
                }
            }
        }
        poset_to_category(&names, &rel).unwrap()
    }

    #[test]
    fn surjection_enumeration() {
        assert_eq!(surjections(2, 1), vec![vec![0, 0, 1], vec![0, 1, 1]]);
        assert_eq!(surjections(3, 3).len(), 1);
        assert_eq!(surjections(4, 2).len(), 6);
    }

    #[test]
    fn nerve_examples() {
        let t = nerve(&FinCat::terminal(), 2);
        assert_eq!(t.counts(), vec![1, 0, 0]);
        let c = nerve(&chain(2), 3);
        assert_eq!(c.counts(), vec![3, 3, 1, 0]);
        assert_eq!(nerve(&FinCat::empty(), 2).counts(), vec![0, 0, 0]);
    }

    #[test]
    fn nerve_of_non_poset_has_degenerate_faces() {
        // Idempotent e with e∘e = e on one object.
        let raw = crate::fincat::RawCategory {
            objects: vec!["x".into()],
            morphisms: vec![crate::fincat::RawMorphism { id: "e".into(), src: "x".into(), tgt: "x".into() }],
            compose: vec![["e".into(), "e".into(), "e".into()]],
        };
        let c = crate::fincat::validate_category(&raw).unwrap();
        let n = nerve(&c, 3);
        assert_eq!(n.counts(), vec![1, 1, 1, 1]);
        assert!(!is_regular(&n));
        assert!(matches!(sd(&n), Err(SSetError::NotRegular(_))));
        assert!(matches!(categorify(&n), Err(SSetError::CyclicOneSkeleton(_))));
    }

    #[test]
    fn simplicial_identity_violation_is_reported() {
        let mut b = SSetBuilder::new(2);
        for v in ["a", "b", "c"] {
            b.add(0, v, vec![]);
        }
        let v = |i| SimplexRef::nondegenerate(0, i);
        let e = |i| SimplexRef::nondegenerate(1, i);
        b.add(1, "ab", vec![v(1), v(0)]);
        b.add(1, "bc", vec![v(2), v(1)]);
        b.add(1, "ac", vec![v(2), v(0)]);
        // d0 should be bc, d2 should be ab; swapped.
        b.add(2, "abc", vec![e(0), e(2), e(1)]);
        assert!(matches!(b.build(), Err(SSetError::SimplicialIdentity { .. })));
    }

    #[test]
    fn raw_round_trip() {
        let x = sd(&standard_complex(StandardKind::Delta, 2, None).unwrap()).unwrap();
        let raw = x.to_raw();
        let json = serde_json::to_string(&raw).unwrap();
        let back = validate_sset(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn subdivision_counts() {
        assert_eq!(sd(&TruncSSet::point(2)).unwrap().counts(), vec![1, 0, 0]);
        let d1 = standard_complex(StandardKind::Delta, 1, None).unwrap();
        assert_eq!(sd(&d1).unwrap().counts(), vec![3, 2]);
        let d2 = standard_complex(StandardKind::Delta, 2, None).unwrap();
        assert_eq!(sd(&d2).unwrap().counts(), vec![7, 12, 6]);
        assert_eq!(sd(&TruncSSet::empty(2)).unwrap().counts(), vec![0, 0, 0]);
    }

    #[test]
    fn standard_complex_examples() {
        assert_eq!(standard_complex(StandardKind::Delta, 0, None).unwrap().counts(), vec![1]);
        assert_eq!(standard_complex(StandardKind::Boundary, 2, None).unwrap().counts(), vec![3, 3, 0]);
        assert_eq!(standard_complex(StandardKind::Horn, 2, Some(0)).unwrap().counts(), vec![3, 2, 0]);
        assert_eq!(standard_complex(StandardKind::Horn, 1, Some(0)).unwrap().counts(), vec![1, 0]);
        assert!(matches!(standard_complex(StandardKind::Horn, 2, Some(3)), Err(SSetError::BadIndices(_))));
        assert!(standard_complex(StandardKind::Boundary, 0, None).unwrap().is_empty());
    }

    #[test]
    fn categorify_examples() {
        assert!(iso(&categorify(&nerve(&chain(1), 2)).unwrap(), &chain(1)));
        let d1 = standard_complex(StandardKind::Delta, 1, None).unwrap();
        assert!(iso(&categorify(&sd(&nerve(&chain(1), 1)).unwrap()).unwrap(), &face_poset_of_simplex(1)));
        assert!(iso(&categorify(&sd(&d1).unwrap()).unwrap(), &face_poset_of_simplex(1)));
        let d2 = standard_complex(StandardKind::Delta, 2, None).unwrap();
        assert!(iso(&categorify(&d2).unwrap(), &chain(2)));
        assert!(iso(&categorify(&sd(&d2).unwrap()).unwrap(), &face_poset_of_simplex(2)));
        assert_eq!(categorify(&TruncSSet::empty(1)).unwrap().num_objects(), 0);
        // Without 2-simplices the square does not commute.
        let b2 = standard_complex(StandardKind::Boundary, 2, None).unwrap();
        let c = categorify(&b2).unwrap();
        assert_eq!(c.hom(c.obj("0").unwrap(), c.obj("2").unwrap()).len(), 2);
    }

    #[test]
    fn categorify_counit_on_non_posets() {
        // Two parallel arrows and a non-commuting square.
        let raw = crate::fincat::RawCategory {
            objects: vec!["a".into(), "b".into()],
            morphisms: vec![
                crate::fincat::RawMorphism { id: "f".into(), src: "a".into(), tgt: "b".into() },
                crate::fincat::RawMorphism { id: "g".into(), src: "a".into(), tgt: "b".into() },
            ],
            compose: vec![],
        };
        let c = crate::fincat::validate_category(&raw).unwrap();
        assert!(iso(&categorify(&nerve(&c, 2)).unwrap(), &c));
    }

    #[test]
    fn generating_cells_small() {
        let c0 = cofibration_cell(0).unwrap();
        assert_eq!(c0.source.num_objects(), 0);
        assert_eq!(c0.target.num_objects(), 1);
        let c1 = cofibration_cell(1).unwrap();
        assert_eq!(c1.target.num_objects(), 5);
        assert_eq!(c1.target.non_identity_morphisms().count(), 4);
        assert_eq!(c1.source.num_objects(), 2);
        assert_eq!(c1.source.num_morphisms(), 2);
        assert!(c1.inclusion.is_injective());
        let c2 = cofibration_cell(2).unwrap();
        assert!(c2.source.is_poset() && c2.target.is_poset());
        assert_eq!(c2.target.num_objects(), 25);
        let h = acyclic_cell(2, 1).unwrap();
        assert!(h.to_simplex.inclusion.is_injective() && h.to_boundary.inclusion.is_injective());
        assert!(h.to_boundary.target.is_poset());
    }

    #[test]
    fn ex_examples() {
        let d1 = standard_complex(StandardKind::Delta, 1, None).unwrap();
        let e = ex(&d1, 2, DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert_eq!(e.simplex_counts[0], 2);
        assert_eq!(e.simplex_counts[1], 5);
        assert_eq!(e.sset.count(1), 3);
        let b2 = standard_complex(StandardKind::Boundary, 2, None).unwrap();
        assert_eq!(ex(&b2, 1, DEFAULT_ENUMERATION_BUDGET).unwrap().simplex_counts[0], 3);
    }

    #[test]
    fn sd_ex_adjunction_counts() {
        let catalog = vec![
            TruncSSet::point(1),
            standard_complex(StandardKind::Delta, 1, None).unwrap(),
            standard_complex(StandardKind::Horn, 2, Some(1)).unwrap(),
            standard_complex(StandardKind::Boundary, 2, None).unwrap(),
            standard_complex(StandardKind::Delta, 2, None).unwrap(),
        ];
        for xs in &catalog {
            for ys in &catalog {
                let x = Arc::new(xs.clone());
                let sdx = Arc::new(sd(xs).unwrap());
                let y = Arc::new(ys.clone());
                let exy = Arc::new(ex(ys, xs.dim(), DEFAULT_ENUMERATION_BUDGET).unwrap().sset);
                let lhs = all_maps(&sdx, &y, DEFAULT_ENUMERATION_BUDGET).unwrap().len();
                let rhs = all_maps(&x, &exy, DEFAULT_ENUMERATION_BUDGET).unwrap().len();
                assert_eq!(lhs, rhs, "{:?} {:?}", xs.counts(), ys.counts());
            }
        }
    }

    #[test]
    fn monotone_maps_count() {
        let d1 = Arc::new(standard_complex(StandardKind::Delta, 1, None).unwrap());
        let d2 = Arc::new(standard_complex(StandardKind::Delta, 2, None).unwrap());
        assert_eq!(all_maps(&d1, &d2, DEFAULT_ENUMERATION_BUDGET).unwrap().len(), 6);
        let sd1 = Arc::new(sd(&d1).unwrap());
        assert_eq!(all_maps(&sd1, &d1, DEFAULT_ENUMERATION_BUDGET).unwrap().len(), 5);
    }

    #[test]
    fn nerve_commutes_with_fixed_points() {
        let g = Arc::new(FinGroup::symmetric3());
        let subs = subgroups(&g);
        let x = tensor(&coset_gset(&g, &subs[1]).unwrap(), &chain(2));
        let (n, action) = equivariant_nerve(&x, 3);
        for h in &subs {
            let lhs = nerve(&fixed_category(&x, h), 3);
            let rhs = fixed_subcomplex(&n.sset, &action, h);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn csd_of_poset_nerves_is_the_face_poset() {
        let p = poset_to_category(&["a", "b", "c"], &[("a", "a"), ("b", "b"), ("c", "c"), ("a", "c"), ("b", "c")]).unwrap();
        let n = nerve(&p, 2);
        let c = categorify(&sd(&n).unwrap()).unwrap();
        // a, b, c, a<c, b<c and inclusions.
        assert_eq!(c.num_objects(), 5);
        assert!(c.is_poset());
        assert_eq!(c.non_identity_morphisms().count(), 4);
    }
}
