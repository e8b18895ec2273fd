//! Sieves, Dwyer maps, pushouts of categories and sequential colimits, and the
//! checks that fixed points commute with them.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::fincat::{
    find_isomorphism_with, CatBuilder, CategoryError, FinCat, FinFunctor, FunctorError, IsoConstraints, SearchBudgetExceeded,
    DEFAULT_SEARCH_BUDGET,
};
use crate::gaction::{fixed_category, fixed_functor, is_equivariant, tensor, validate_gcategory, GActionError, GCategory};
use crate::group::{coset_gset, cosets, FinGroup, Subgroup};
use crate::present::{Path, PresentError, Presentation, Presented, DEFAULT_CLOSURE_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColimitError {
    #[error("not a subcategory: {0}")]
    NotASubcategory(String),
    #[error("not a sieve inclusion: {0}")]
    NotASieve(String),
    #[error("not a Dwyer map: {0}")]
    NotDwyer(String),
    #[error("not a poset: {0}")]
    NotPoset(String),
    #[error("pushout presentation has a directed cycle through `{0}`")]
    CyclicPresentation(String),
    #[error("congruence closure exceeded its budget of {0} pairs")]
    ClosureBudgetExceeded(u64),
    #[error("chain map is not injective: {0}")]
    NotMono(String),
    #[error("not a cocone: {0}")]
    NotACocone(String),
    #[error("comparison functor is not an isomorphism: {0}")]
    ComparisonNotIso(String),
    #[error("not equivariant: {0}")]
    NotEquivariant(String),
    #[error(transparent)]
    Functor(#[from] FunctorError),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    GAction(#[from] GActionError),
    #[error(transparent)]
    Budget(#[from] SearchBudgetExceeded),
}

fn check_subcategory(b: &FinCat, objects: &[usize], morphisms: &[usize]) -> Result<(HashSet<usize>, HashSet<usize>), ColimitError> {
    let objs: HashSet<usize> = objects.iter().copied().collect();
    let mors: HashSet<usize> = morphisms.iter().copied().collect();
    for &o in &objs {
        if o >= b.num_objects() {
            return Err(ColimitError::NotASubcategory(format!("object index {o} out of range")));
        }
        if !mors.contains(&b.identity(o)) {
            return Err(ColimitError::NotASubcategory(format!("identity of `{}` missing", b.object_id(o))));
        }
    }
    for &m in &mors {
        if m >= b.num_morphisms() {
            return Err(ColimitError::NotASubcategory(format!("morphism index {m} out of range")));
        }
        if !objs.contains(&b.src(m)) || !objs.contains(&b.tgt(m)) {
            return Err(ColimitError::NotASubcategory(format!("`{}` has an endpoint outside", b.morphism_id(m))));
        }
    }
    for &g in &mors {
        for &f in &mors {
            if b.src(g) == b.tgt(f) && !mors.contains(&b.compose(g, f).expect("composable")) {
                return Err(ColimitError::NotASubcategory(format!(
                    "`{}` after `{}` leaves the subcategory",
                    b.morphism_id(g),
                    b.morphism_id(f)
                )));
            }
        }
    }
    Ok((objs, mors))
}

/// Every morphism of `b` with target in the subcategory lies in it.
pub fn is_sieve(b: &FinCat, objects: &[usize], morphisms: &[usize]) -> Result<bool, ColimitError> {
    let (objs, mors) = check_subcategory(b, objects, morphisms)?;
    Ok((0..b.num_morphisms()).all(|m| !objs.contains(&b.tgt(m)) || mors.contains(&m)))
}

/// Every morphism of `b` with source in the subcategory lies in it.
pub fn is_cosieve(b: &FinCat, objects: &[usize], morphisms: &[usize]) -> Result<bool, ColimitError> {
    let (objs, mors) = check_subcategory(b, objects, morphisms)?;
    Ok((0..b.num_morphisms()).all(|m| !objs.contains(&b.src(m)) || mors.contains(&m)))
}

/// All morphisms between the given objects.
pub fn full_morphisms(b: &FinCat, objects: &[usize]) -> Vec<usize> {
    let objs: HashSet<usize> = objects.iter().copied().collect();
    (0..b.num_morphisms()).filter(|&m| objs.contains(&b.src(m)) && objs.contains(&b.tgt(m))).collect()
}

/// True when `i` is injective with image a sieve.
pub fn is_sieve_inclusion(i: &FinFunctor) -> bool {
    i.is_injective() && is_sieve(i.target(), i.obj_map(), i.mor_map()).unwrap_or(false)
}

/// A cosieve `W ⊇ A`, the right adjoint `r: W → A` of the inclusion with
/// `r i = id`, and the counit `ε_w: i r(w) → w`, which is the identity on `A`.
#[derive(Clone, Debug)]
pub struct DwyerWitness {
    /// Objects of `B` in the cosieve, ascending.
    pub cosieve: Vec<usize>,
    pub w: Arc<FinCat>,
    pub retraction: FinFunctor,
    /// For each object of `B` in the cosieve, `(r(w), ε_w)`.
    counit: Vec<Option<(usize, usize)>>,
    i: FinFunctor,
    preimage: HashMap<usize, usize>,
}

impl DwyerWitness {
    pub fn contains(&self, b: usize) -> bool {
        self.counit[b].is_some()
    }

    /// `r(b)` as an object of `A`.
    pub fn r_object(&self, b: usize) -> usize {
        self.counit[b].expect("in the cosieve").0
    }

    /// `ε_b` as a morphism of `B`.
    pub fn counit(&self, b: usize) -> usize {
        self.counit[b].expect("in the cosieve").1
    }

    /// `r(β)` for a morphism of `B` between cosieve objects.
    pub fn r_morphism(&self, beta: usize) -> usize {
        let b = self.i.target();
        let wm = self.w.mor(b.morphism_id(beta)).expect("morphism of the cosieve");
        self.retraction.on_morphism(wm)
    }

    /// The unique `f: a → r(w)` with `ε_w ∘ i(f) = β` for `β: i(a) → w`.
    pub fn transpose(&self, beta: usize) -> usize {
        let (a_cat, b) = (self.i.source(), self.i.target());
        let a = self.preimage[&b.src(beta)];
        let w = b.tgt(beta);
        let (rw, eps) = self.counit[w].expect("in the cosieve");
        *a_cat
            .hom(a, rw)
            .iter()
            .find(|&&f| b.compose(eps, self.i.on_morphism(f)) == Some(beta))
            .expect("universal arrow")
    }
}

fn preimages(i: &FinFunctor) -> HashMap<usize, usize> {
    i.obj_map().iter().enumerate().map(|(a, &b)| (b, a)).collect()
}

/// Searches for a Dwyer witness over the cosieve generated by the image of
/// `i`. Any larger cosieve contains this one, and the adjoint condition is
/// checked object by object, so a failure here is final.
pub fn dwyer_witness(i: &FinFunctor) -> Result<Option<DwyerWitness>, ColimitError> {
    if !i.is_injective() {
        return Err(ColimitError::NotASieve("functor is not injective".into()));
    }
    if !is_sieve(i.target(), i.obj_map(), i.mor_map())? {
        return Err(ColimitError::NotASieve("image is not closed under precomposition".into()));
    }
    let (a, b) = (i.source().clone(), i.target().clone());
    let pre = preimages(i);
    let mut in_w = vec![false; b.num_objects()];
    for &x in i.obj_map() {
        for &m in b.out_morphisms(x) {
            in_w[b.tgt(m)] = true;
        }
    }
    let mut counit: Vec<Option<(usize, usize)>> = vec![None; b.num_objects()];
    for w in 0..b.num_objects() {
        if !in_w[w] {
            continue;
        }
        if let Some(&aw) = pre.get(&w) {
            counit[w] = Some((aw, b.identity(w)));
            continue;
        }
        let universal = (0..a.num_objects()).find_map(|cand| {
            b.hom(i.on_object(cand), w).iter().copied().find(|&e| {
                (0..a.num_objects()).all(|a2| {
                    let lhs = a.hom(a2, cand);
                    let rhs = b.hom(i.on_object(a2), w);
                    if lhs.len() != rhs.len() {
                        return false;
                    }
                    let imgs: HashSet<usize> = lhs.iter().map(|&f| b.compose(e, i.on_morphism(f)).expect("composable")).collect();
                    imgs.len() == rhs.len()
                })
            })
            .map(|e| (cand, e))
        });
        match universal {
            Some(u) => counit[w] = Some(u),
            None => return Ok(None),
        }
    }
    let cosieve: Vec<usize> = (0..b.num_objects()).filter(|&w| in_w[w]).collect();
    let wcat = Arc::new(b.full_subcategory(&cosieve)?);
    let om: Vec<usize> = (0..wcat.num_objects()).map(|x| counit[b.obj(wcat.object_id(x)).unwrap()].unwrap().0).collect();
    let mm: Vec<usize> = (0..wcat.num_morphisms())
        .map(|m| {
            let beta = b.mor(wcat.morphism_id(m)).unwrap();
            let (s, t) = (b.src(beta), b.tgt(beta));
            let (rs, es) = counit[s].unwrap();
            let (rt, et) = counit[t].unwrap();
            let target = b.compose(beta, es).expect("composable");
            *a.hom(rs, rt)
                .iter()
                .find(|&&f| b.compose(et, i.on_morphism(f)) == Some(target))
                .expect("universal arrow factors every map")
        })
        .collect();
    let retraction = FinFunctor::new(wcat.clone(), a.clone(), om, mm)?;
    Ok(Some(DwyerWitness { cosieve, w: wcat, retraction, counit, i: i.clone(), preimage: pre }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Piece {
    C(usize),
    B(usize),
    /// `(ε_b, γ)` with `γ: c → F(r b)`.
    Mixed(usize, usize),
}

/// The pushout of a Dwyer map of posets `i: A → B` along `F: A → C`, built
/// from `D(c, b) ≅ C(c, F(r b))` for `b` in the cosieve.
#[derive(Clone, Debug)]
pub struct DwyerPushout {
    pub category: Arc<FinCat>,
    pub from_c: FinFunctor,
    pub from_b: FinFunctor,
    pub witness: DwyerWitness,
    pieces: Vec<Piece>,
    b_object: Vec<Option<usize>>,
}

pub fn pushout_along_dwyer(i: &FinFunctor, f: &FinFunctor, witness: Option<DwyerWitness>) -> Result<DwyerPushout, ColimitError> {
    if **i.source() != **f.source() {
        return Err(ColimitError::Functor(FunctorError::NotComposable));
    }
    let (a, b, c) = (i.source().clone(), i.target().clone(), f.target().clone());
    if !a.is_poset() {
        return Err(ColimitError::NotPoset("source of the Dwyer map".into()));
    }
    if !b.is_poset() {
        return Err(ColimitError::NotPoset("target of the Dwyer map".into()));
    }
    let wit = match witness {
        Some(w) => w,
        None => dwyer_witness(i)?.ok_or_else(|| ColimitError::NotDwyer("no right adjoint on the generated cosieve".into()))?,
    };
    let f = f.restrict(a.clone(), c.clone())?;
    let pre = preimages(i);

    let mut bld = CatBuilder::new();
    let mut pieces: Vec<Piece> = Vec::new();
    let mut index: HashMap<Piece, usize> = HashMap::new();
    let record = |pieces: &mut Vec<Piece>, index: &mut HashMap<Piece, usize>, m: usize, p: Piece| {
        if pieces.len() <= m {
            pieces.resize(m + 1, Piece::C(usize::MAX));
        }
        pieces[m] = p;
        index.insert(p, m);
    };
    for x in 0..c.num_objects() {
        let o = bld.add_object(c.object_id(x));
        record(&mut pieces, &mut index, bld.identity(o), Piece::C(c.identity(x)));
    }
    let mut b_object = vec![None; b.num_objects()];
    for y in 0..b.num_objects() {
        if !pre.contains_key(&y) {
            let o = bld.add_fresh_object(b.object_id(y));
            b_object[y] = Some(o);
            record(&mut pieces, &mut index, bld.identity(o), Piece::B(b.identity(y)));
        }
    }
    for m in c.non_identity_morphisms() {
        let d = bld.add_fresh_morphism(c.morphism_id(m), c.src(m), c.tgt(m));
        record(&mut pieces, &mut index, d, Piece::C(m));
    }
    for m in b.non_identity_morphisms() {
        if let (Some(s), Some(t)) = (b_object[b.src(m)], b_object[b.tgt(m)]) {
            let d = bld.add_fresh_morphism(b.morphism_id(m), s, t);
            record(&mut pieces, &mut index, d, Piece::B(m));
        }
    }
    for y in 0..b.num_objects() {
        let Some(ty) = b_object[y] else { continue };
        if !wit.contains(y) {
            continue;
        }
        let fr = f.on_object(wit.r_object(y));
        let eps = wit.counit(y);
        for x in 0..c.num_objects() {
            for &g in c.hom(x, fr) {
                let id = format!("({},{})", b.morphism_id(eps), c.morphism_id(g));
                let d = bld.add_fresh_morphism(&id, x, ty);
                record(&mut pieces, &mut index, d, Piece::Mixed(y, g));
            }
        }
    }
    let n = pieces.len();
    let tgt_of = |p: Piece| match p {
        Piece::C(m) => (0, c.tgt(m)),
        Piece::B(m) => (1, b.tgt(m)),
        Piece::Mixed(y, _) => (1, y),
    };
    let src_of = |p: Piece| match p {
        Piece::C(m) => (0, c.src(m)),
        Piece::B(m) => (1, b.src(m)),
        Piece::Mixed(_, g) => (0, c.src(g)),
    };
    for gd in 0..n {
        for fd in 0..n {
            if src_of(pieces[gd]) != tgt_of(pieces[fd]) {
                continue;
            }
            let comp = match (pieces[gd], pieces[fd]) {
                (Piece::C(g), Piece::C(h)) => Piece::C(c.compose(g, h).expect("composable")),
                (Piece::B(g), Piece::B(h)) => Piece::B(b.compose(g, h).expect("composable")),
                (Piece::B(beta), Piece::Mixed(_, gamma)) => {
                    let rb = f.on_morphism(wit.r_morphism(beta));
                    Piece::Mixed(b.tgt(beta), c.compose(rb, gamma).expect("composable"))
                }
                (Piece::Mixed(y, gamma), Piece::C(delta)) => Piece::Mixed(y, c.compose(gamma, delta).expect("composable")),
                _ => unreachable!("no morphisms from the new part back into C"),
            };
            bld.set_composite(gd, fd, index[&comp]);
        }
    }
    let category = Arc::new(bld.build()?);
    let from_c = FinFunctor::new(
        Arc::new((*c).clone()),
        category.clone(),
        (0..c.num_objects()).collect(),
        (0..c.num_morphisms()).map(|m| index[&Piece::C(m)]).collect(),
    )?
    .restrict(c.clone(), category.clone())?;
    let b_om: Vec<usize> = (0..b.num_objects())
        .map(|y| match pre.get(&y) {
            Some(&x) => f.on_object(x),
            None => b_object[y].unwrap(),
        })
        .collect();
    let b_mm: Vec<usize> = (0..b.num_morphisms())
        .map(|m| {
            let (s, t) = (b.src(m), b.tgt(m));
            match (pre.get(&s), pre.get(&t)) {
                (Some(_), Some(_)) => {
                    let alpha = i.mor_map().iter().position(|&x| x == m).expect("sieve is full");
                    index[&Piece::C(f.on_morphism(alpha))]
                }
                (Some(_), None) => index[&Piece::Mixed(t, f.on_morphism(wit.transpose(m)))],
                (None, None) => index[&Piece::B(m)],
                (None, Some(_)) => unreachable!("sieve"),
            }
        })
        .collect();
    let from_b = FinFunctor::new(b.clone(), category.clone(), b_om, b_mm)?;
    Ok(DwyerPushout { category, from_c, from_b, witness: wit, pieces, b_object })
}

impl DwyerPushout {
    /// The unique functor `D → E` through which `u: C → E`, `v: B → E` factor.
    pub fn mediate(&self, u: &FinFunctor, v: &FinFunctor) -> Result<FinFunctor, ColimitError> {
        let e = u.target().clone();
        if **v.target() != *e {
            return Err(ColimitError::Functor(FunctorError::NotComposable));
        }
        let v = v.with_target(e.clone())?;
        let d = &self.category;
        let c_objects = self.from_c.source().num_objects();
        let om: Vec<usize> = (0..d.num_objects())
            .map(|x| {
                if x < c_objects {
                    u.on_object(x)
                } else {
                    let y = self.b_object.iter().position(|&o| o == Some(x)).expect("new object");
                    v.on_object(y)
                }
            })
            .collect();
        let mm: Vec<usize> = self
            .pieces
            .iter()
            .map(|p| match *p {
                Piece::C(m) => u.on_morphism(m),
                Piece::B(m) => v.on_morphism(m),
                Piece::Mixed(y, g) => e.compose(v.on_morphism(self.witness.counit(y)), u.on_morphism(g)).expect("cocone"),
            })
            .collect();
        let m = FinFunctor::new(d.clone(), e, om, mm).map_err(|err| ColimitError::NotACocone(err.to_string()))?;
        if m.after(&self.from_c)? != *u || m.after(&self.from_b)? != v {
            return Err(ColimitError::NotACocone("legs do not agree on A".into()));
        }
        Ok(m)
    }
}

#[derive(Clone, Copy, Debug)]
enum OracleEdge {
    C(usize),
    B(usize),
}

/// The pushout computed from a presentation: generators are the morphisms
/// of `C` and of `B` outside the image of `i`; relations are the composition
/// tables of both, with `i(α)` replaced by `F(α)`.
#[derive(Clone, Debug)]
pub struct OraclePushout {
    pub category: Arc<FinCat>,
    pub from_c: FinFunctor,
    pub from_b: FinFunctor,
    presentation: Presentation,
    presented: Presented,
    c_objects: usize,
    b_vertex: Vec<Option<usize>>,
    edges: Vec<OracleEdge>,
}

pub fn pushout_oracle(i: &FinFunctor, f: &FinFunctor, budget: u64) -> Result<OraclePushout, ColimitError> {
    if **i.source() != **f.source() {
        return Err(ColimitError::Functor(FunctorError::NotComposable));
    }
    if !i.is_injective() {
        return Err(ColimitError::NotMono("the identified functor must be injective".into()));
    }
    let (a, b, c) = (i.source().clone(), i.target().clone(), f.target().clone());
    let f = f.restrict(a.clone(), c.clone())?;
    let pre = preimages(i);
    let mut p = Presentation::default();
    let mut names: HashSet<String> = HashSet::new();
    let mut fresh = |s: &str| {
        let mut id = s.to_string();
        while !names.insert(id.clone()) {
            id.push('\'');
        }
        id
    };
    for x in 0..c.num_objects() {
        p.add_vertex(fresh(c.object_id(x)));
    }
    let mut b_vertex = vec![None; b.num_objects()];
    for y in 0..b.num_objects() {
        if !pre.contains_key(&y) {
            b_vertex[y] = Some(p.add_vertex(fresh(b.object_id(y))));
        }
    }
    let vertex = |y: usize| match pre.get(&y) {
        Some(&x) => f.on_object(x),
        None => b_vertex[y].unwrap(),
    };
    let mut edge_names: HashSet<String> = HashSet::new();
    let mut fresh_edge = |s: &str| {
        let mut id = s.to_string();
        while !edge_names.insert(id.clone()) {
            id.push('\'');
        }
        id
    };
    let mut edges = Vec::new();
    let mut c_edge = vec![None; c.num_morphisms()];
    for m in c.non_identity_morphisms() {
        c_edge[m] = Some(p.add_edge(fresh_edge(c.morphism_id(m)), c.src(m), c.tgt(m)));
        edges.push(OracleEdge::C(m));
    }
    let b_image: HashMap<usize, usize> = i.mor_map().iter().enumerate().map(|(al, &m)| (m, al)).collect();
    let mut b_edge = vec![None; b.num_morphisms()];
    for m in b.non_identity_morphisms() {
        if !b_image.contains_key(&m) {
            b_edge[m] = Some(p.add_edge(fresh_edge(b.morphism_id(m)), vertex(b.src(m)), vertex(b.tgt(m))));
            edges.push(OracleEdge::B(m));
        }
    }
    let c_path = |m: usize| match c_edge[m] {
        Some(e) => Path { start: c.src(m), edges: vec![e] },
        None => Path::empty(c.src(m)),
    };
    let b_path = |m: usize| match b_image.get(&m) {
        Some(&al) => c_path(f.on_morphism(al)),
        None => match b_edge[m] {
            Some(e) => Path { start: vertex(b.src(m)), edges: vec![e] },
            None => Path::empty(vertex(b.src(m))),
        },
    };
    for (g, h) in c.composable_pairs() {
        if !c.is_identity(g) && !c.is_identity(h) {
            p.relate(c_path(h).then(&c_path(g)), c_path(c.compose(g, h).unwrap()));
        }
    }
    for (g, h) in b.composable_pairs() {
        if !b.is_identity(g) && !b.is_identity(h) {
            p.relate(b_path(h).then(&b_path(g)), b_path(b.compose(g, h).unwrap()));
        }
    }
    let presented = p.present(budget).map_err(|e| match e {
        PresentError::Cyclic(v) => ColimitError::CyclicPresentation(v),
        PresentError::ClosureBudgetExceeded(n) => ColimitError::ClosureBudgetExceeded(n),
        PresentError::Malformed(m) => ColimitError::NotACocone(m),
    })?;
    let category = presented.category.clone();
    let from_c = FinFunctor::new(
        c.clone(),
        category.clone(),
        (0..c.num_objects()).collect(),
        (0..c.num_morphisms()).map(|m| presented.class_of(&c_path(m)).expect("path exists")).collect(),
    )?;
    let from_b = FinFunctor::new(
        b.clone(),
        category.clone(),
        (0..b.num_objects()).map(vertex).collect(),
        (0..b.num_morphisms()).map(|m| presented.class_of(&b_path(m)).expect("path exists")).collect(),
    )?;
    Ok(OraclePushout { category, from_c, from_b, presentation: p, presented, c_objects: c.num_objects(), b_vertex, edges })
}

impl OraclePushout {
    /// The functor out of the presented pushout determined by a cocone.
    pub fn mediate(&self, u: &FinFunctor, v: &FinFunctor) -> Result<FinFunctor, ColimitError> {
        let e = u.target().clone();
        let v = v.with_target(e.clone())?;
        let mut vmap = vec![0; self.presentation.vertices.len()];
        for (x, slot) in vmap.iter_mut().enumerate().take(self.c_objects) {
            *slot = u.on_object(x);
        }
        for (y, bv) in self.b_vertex.iter().enumerate() {
            if let Some(k) = bv {
                vmap[*k] = v.on_object(y);
            }
        }
        let emap: Vec<usize> = self
            .edges
            .iter()
            .map(|ed| match *ed {
                OracleEdge::C(m) => u.on_morphism(m),
                OracleEdge::B(m) => v.on_morphism(m),
            })
            .collect();
        let m = self
            .presented
            .functor_from_generators(e, &vmap, &emap, &self.presentation)
            .map_err(|err| ColimitError::NotACocone(err.to_string()))?;
        if m.after(&self.from_c)? != *u || m.after(&self.from_b)? != v {
            return Err(ColimitError::NotACocone("legs do not agree on A".into()));
        }
        Ok(m)
    }
}

/// Searches for an isomorphism between two pushouts that commutes with both
/// cocone legs.
pub fn pushouts_isomorphic(
    d: (&Arc<FinCat>, &FinFunctor, &FinFunctor),
    p: (&Arc<FinCat>, &FinFunctor, &FinFunctor),
    budget: u64,
) -> Result<Option<FinFunctor>, ColimitError> {
    let (dc, d1, d2) = d;
    let (pc, p1, p2) = p;
    let mut obj = HashMap::new();
    let mut mor = HashMap::new();
    for (x, y) in [(d1, p1), (d2, p2)] {
        for o in 0..x.source().num_objects() {
            if *obj.entry(x.on_object(o)).or_insert(y.on_object(o)) != y.on_object(o) {
                return Ok(None);
            }
        }
        for m in 0..x.source().num_morphisms() {
            if *mor.entry(x.on_morphism(m)).or_insert(y.on_morphism(m)) != y.on_morphism(m) {
                return Ok(None);
            }
        }
    }
    let mut constraints = IsoConstraints { objects: obj.into_iter().collect(), morphisms: mor.into_iter().collect() };
    constraints.objects.sort();
    constraints.morphisms.sort();
    let Some(iso) = find_isomorphism_with(dc, pc, &constraints, budget)? else { return Ok(None) };
    if iso.after(d1)? != *p1 || iso.after(d2)? != *p2 {
        return Ok(None);
    }
    Ok(Some(iso))
}

/// The union of a chain of injective functors, with every element keeping the
/// id it had at the stage where it first appeared.
#[derive(Clone, Debug)]
pub struct SequentialColimit {
    pub category: Arc<FinCat>,
    pub legs: Vec<FinFunctor>,
    stages: Vec<Arc<FinCat>>,
    maps: Vec<FinFunctor>,
}

pub fn sequential_colimit(base: &Arc<FinCat>, maps: &[FinFunctor]) -> Result<SequentialColimit, ColimitError> {
    let mut stages = vec![base.clone()];
    for (k, f) in maps.iter().enumerate() {
        if **f.source() != *stages[k] {
            return Err(ColimitError::Functor(FunctorError::NotComposable));
        }
        if !f.is_injective() {
            return Err(ColimitError::NotMono(format!("map {k} identifies two elements")));
        }
        stages.push(f.target().clone());
    }
    let n = maps.len();
    let top = stages[n].clone();
    let mut legs_top: Vec<FinFunctor> = vec![FinFunctor::identity(top.clone())];
    for k in (0..n).rev() {
        let next = legs_top.last().unwrap().after(&maps[k].restrict(stages[k].clone(), stages[k + 1].clone())?)?;
        legs_top.push(next);
    }
    legs_top.reverse();
    let mut obj_name: Vec<Option<String>> = vec![None; top.num_objects()];
    let mut mor_name: Vec<Option<String>> = vec![None; top.num_morphisms()];
    for (k, leg) in legs_top.iter().enumerate() {
        for o in 0..stages[k].num_objects() {
            obj_name[leg.on_object(o)].get_or_insert_with(|| stages[k].object_id(o).to_string());
        }
        for m in 0..stages[k].num_morphisms() {
            mor_name[leg.on_morphism(m)].get_or_insert_with(|| stages[k].morphism_id(m).to_string());
        }
    }
    let mut bld = CatBuilder::new();
    for name in &obj_name {
        bld.add_fresh_object(name.as_ref().unwrap());
    }
    let mut mor_index = vec![0; top.num_morphisms()];
    for m in 0..top.num_morphisms() {
        mor_index[m] = if top.is_identity(m) {
            bld.identity(top.src(m))
        } else {
            bld.add_fresh_morphism(mor_name[m].as_ref().unwrap(), top.src(m), top.tgt(m))
        };
    }
    for (g, f) in top.composable_pairs() {
        bld.set_composite(mor_index[g], mor_index[f], mor_index[top.compose(g, f).unwrap()]);
    }
    let category = Arc::new(bld.build()?);
    let relabel = FinFunctor::new(top.clone(), category.clone(), (0..top.num_objects()).collect(), mor_index)?;
    let legs = legs_top.iter().map(|l| relabel.after(l)).collect::<Result<Vec<_>, _>>()?;
    Ok(SequentialColimit { category, legs, stages, maps: maps.to_vec() })
}

impl SequentialColimit {
    pub fn stages(&self) -> &[Arc<FinCat>] {
        &self.stages
    }

    /// The functor out of the colimit induced by compatible `u_k: X_k → E`.
    pub fn mediate(&self, cocone: &[FinFunctor]) -> Result<FinFunctor, ColimitError> {
        if cocone.len() != self.stages.len() {
            return Err(ColimitError::NotACocone("one functor per stage required".into()));
        }
        for (k, f) in self.maps.iter().enumerate() {
            let f = f.restrict(self.stages[k].clone(), self.stages[k + 1].clone())?;
            if cocone[k + 1].after(&f)? != cocone[k] {
                return Err(ColimitError::NotACocone(format!("stage {k} does not commute")));
            }
        }
        let last = self.legs.last().unwrap();
        let inv = last.inverse().expect("last leg is an isomorphism");
        Ok(cocone.last().unwrap().after(&inv)?)
    }
}

/// Sizes of both sides of a fixed-point comparison and whether the canonical
/// comparison functor is bijective on objects and on morphisms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonReport {
    pub subgroup: Vec<String>,
    pub colimit_of_fixed: [usize; 2],
    pub fixed_of_colimit: [usize; 2],
    pub objects_bijective: bool,
    pub morphisms_bijective: bool,
}

impl ComparisonReport {
    pub fn isomorphism(&self) -> bool {
        self.objects_bijective && self.morphisms_bijective
    }
}

fn compare(comparison: &FinFunctor, g: &FinGroup, h: &Subgroup) -> Result<ComparisonReport, ColimitError> {
    let (s, t) = (comparison.source(), comparison.target());
    let bij = |v: &[usize], n: usize| v.len() == n && v.iter().copied().collect::<HashSet<_>>().len() == n;
    let report = ComparisonReport {
        subgroup: h.elements().iter().map(|&e| g.element_id(e).to_string()).collect(),
        colimit_of_fixed: [s.num_objects(), s.num_morphisms()],
        fixed_of_colimit: [t.num_objects(), t.num_morphisms()],
        objects_bijective: bij(comparison.obj_map(), t.num_objects()),
        morphisms_bijective: bij(comparison.mor_map(), t.num_morphisms()),
    };
    if !report.isomorphism() {
        return Err(ColimitError::ComparisonNotIso(format!("{report:?}")));
    }
    Ok(report)
}

/// `colim(X_k^H) → (colim X_k)^H` for a chain of equivariant monomorphisms.
pub fn verify_filtered_mono(stages: &[GCategory], maps: &[FinFunctor], h: &Subgroup) -> Result<ComparisonReport, ColimitError> {
    for (k, f) in maps.iter().enumerate() {
        if !is_equivariant(f, &stages[k], &stages[k + 1]) {
            return Err(ColimitError::NotEquivariant(format!("chain map {k}")));
        }
    }
    let g = stages[0].group().clone();
    let colim = sequential_colimit(stages[0].base(), maps)?;
    let last = colim.legs.last().unwrap();
    let inv = last.inverse().expect("isomorphism");
    let top = stages.last().unwrap();
    let action = (0..g.order()).map(|e| last.after(top.sigma(e))?.after(&inv)).collect::<Result<Vec<_>, _>>()?;
    let cx = validate_gcategory(g.clone(), colim.category.clone(), action)?;
    let fixed_of_colim = Arc::new(fixed_category(&cx, h));

    let fixed_stages: Vec<Arc<FinCat>> = stages.iter().map(|x| Arc::new(fixed_category(x, h))).collect();
    let fixed_maps = maps
        .iter()
        .enumerate()
        .map(|(k, f)| f.restrict(fixed_stages[k].clone(), fixed_stages[k + 1].clone()))
        .collect::<Result<Vec<_>, _>>()?;
    let colim_fixed = sequential_colimit(&fixed_stages[0], &fixed_maps)?;
    let cocone = colim
        .legs
        .iter()
        .enumerate()
        .map(|(k, leg)| leg.restrict(fixed_stages[k].clone(), fixed_of_colim.clone()))
        .collect::<Result<Vec<_>, _>>()?;
    let comparison = colim_fixed.mediate(&cocone)?;
    compare(&comparison, &g, h)
}

/// `σ_g` on a pushout, induced by the actions on `C` and `B`.
fn induced_dwyer_action(d: &DwyerPushout, b: &GCategory, c: &GCategory) -> Result<GCategory, ColimitError> {
    let g = c.group().clone();
    let action = (0..g.order())
        .map(|e| d.mediate(&d.from_c.after(c.sigma(e))?, &d.from_b.after(b.sigma(e))?))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(validate_gcategory(g, d.category.clone(), action)?)
}

fn induced_oracle_action(p: &OraclePushout, b: &GCategory, c: &GCategory) -> Result<GCategory, ColimitError> {
    let g = c.group().clone();
    let action = (0..g.order())
        .map(|e| p.mediate(&p.from_c.after(c.sigma(e))?, &p.from_b.after(b.sigma(e))?))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(validate_gcategory(g, p.category.clone(), action)?)
}

/// For an equivariant Dwyer map `i: A → B` and equivariant `F: A → C`:
/// the pushout `P` of `i^H` along `F^H` against `D^H`, where `D` is the
/// pushout of `i` along `F`.
pub fn verify_fixed_point_pushout_equivariant(
    i: &FinFunctor,
    a: &GCategory,
    b: &GCategory,
    f: &FinFunctor,
    c: &GCategory,
    h: &Subgroup,
) -> Result<ComparisonReport, ColimitError> {
    if !is_equivariant(i, a, b) || !is_equivariant(f, a, c) {
        return Err(ColimitError::NotEquivariant("legs of the square".into()));
    }
    let d = pushout_along_dwyer(i, f, None)?;
    let dx = induced_dwyer_action(&d, b, c)?;
    let dh = Arc::new(fixed_category(&dx, h));
    let ih = fixed_functor(i, a, b, h)?;
    let fh = fixed_functor(f, a, c, h)?;
    let p = pushout_along_dwyer(&ih, &fh, None)?;
    let u = d.from_c.restrict(fh.target().clone(), dh.clone())?;
    let v = d.from_b.restrict(ih.target().clone(), dh.clone())?;
    let comparison = p.mediate(&u, &v)?;
    compare(&comparison, c.group(), h)
}

/// Coset representatives of `G/K` in the order used by `coset_gset`.
fn coset_reps(g: &FinGroup, k: &Subgroup) -> Vec<usize> {
    cosets(g, k).into_iter().map(|c| c[0]).collect()
}

/// A cell `G/K ⊗ A → G/K ⊗ B` with its equivariant attaching map
/// `(gK, a) ↦ σ_g(attach(a))`, where `attach` lands in `X^K`.
#[derive(Clone, Debug)]
pub struct InducedCell {
    pub source: GCategory,
    pub target: GCategory,
    pub inclusion: FinFunctor,
    pub attaching: FinFunctor,
}

pub fn induced_cell(k: &Subgroup, cell: &FinFunctor, attach: &FinFunctor, x: &GCategory) -> Result<InducedCell, ColimitError> {
    let g = x.group().clone();
    let gk = coset_gset(&g, k).map_err(GActionError::from)?;
    let reps = coset_reps(&g, k);
    let (a, b) = (cell.source(), cell.target());
    let ta = tensor(&gk, a);
    let tb = tensor(&gk, b);
    let inclusion = crate::gaction::tensor_functor(&gk, cell, &ta, &tb)?;
    let xk = fixed_category(x, k);
    for o in 0..a.num_objects() {
        if xk.obj(x.base().object_id(attach.on_object(o))).is_none() {
            return Err(ColimitError::NotEquivariant("attaching map leaves the K-fixed points".into()));
        }
    }
    for m in 0..a.num_morphisms() {
        if xk.mor(x.base().morphism_id(attach.on_morphism(m))).is_none() {
            return Err(ColimitError::NotEquivariant("attaching map leaves the K-fixed points".into()));
        }
    }
    let (na, base) = (a.num_objects(), ta.base().clone());
    let om = (0..base.num_objects()).map(|o| x.act_object(reps[o / na], attach.on_object(o % na))).collect();
    let mm = (0..base.num_morphisms())
        .map(|m| {
            let p = base.src(m) / na;
            let local_id = base.morphism_id(m);
            let local = if base.is_identity(m) {
                a.identity(base.src(m) % na)
            } else {
                a.mor(local_id.split_once('|').expect("tensor id").1).expect("copy of a morphism")
            };
            x.act_morphism(reps[p], attach.on_morphism(local))
        })
        .collect();
    let attaching = FinFunctor::new(base.clone(), x.base().clone(), om, mm)?;
    if !is_equivariant(&attaching, &ta, x) {
        return Err(ColimitError::NotEquivariant("induced attaching map".into()));
    }
    Ok(InducedCell { source: ta, target: tb, inclusion, attaching })
}

/// The square `G/K ⊗ A → G/K ⊗ B`, `F: G/K ⊗ A → C` with `F` induced from
/// `attach: A → C^K`, checked under `H`-fixed points.
pub fn verify_fixed_point_pushout(
    k: &Subgroup,
    h: &Subgroup,
    cell: &FinFunctor,
    attach: &FinFunctor,
    c: &GCategory,
) -> Result<ComparisonReport, ColimitError> {
    let ic = induced_cell(k, cell, attach, c)?;
    verify_fixed_point_pushout_equivariant(&ic.inclusion, &ic.source, &ic.target, &ic.attaching, c, h)
}

/// One stage `X → X'` of a relative cell complex.
#[derive(Clone, Debug)]
pub struct CellStep {
    pub before: GCategory,
    pub after: GCategory,
    pub inclusion: FinFunctor,
    /// The pushout square at this stage under each subgroup's fixed points.
    pub reports: Vec<ComparisonReport>,
}

/// Attaches `G/K ⊗ cell` to `x` along `attach`, checking every subgroup.
pub fn attach_cell(x: &GCategory, k: &Subgroup, cell: &FinFunctor, attach: &FinFunctor, subgroups: &[Subgroup]) -> Result<CellStep, ColimitError> {
    let ic = induced_cell(k, cell, attach, x)?;
    let d = pushout_along_dwyer(&ic.inclusion, &ic.attaching, None)?;
    let after = induced_dwyer_action(&d, &ic.target, x)?;
    let reports = subgroups
        .iter()
        .map(|h| verify_fixed_point_pushout_equivariant(&ic.inclusion, &ic.source, &ic.target, &ic.attaching, x, h))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CellStep { before: x.clone(), after, inclusion: d.from_c, reports })
}

/// Outcome of pushing out a composite of cell attachments.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    pub steps: usize,
    pub step_reports: Vec<Vec<ComparisonReport>>,
    pub composite_reports: Vec<ComparisonReport>,
}

/// Pushout of an equivariant square with injective top map, under `H`-fixed
/// points, compared against the presented pushout of the fixed parts.
pub fn verify_oracle_square(
    j: &FinFunctor,
    x0: &GCategory,
    xn: &GCategory,
    f: &FinFunctor,
    y: &GCategory,
    h: &Subgroup,
) -> Result<ComparisonReport, ColimitError> {
    if !is_equivariant(j, x0, xn) || !is_equivariant(f, x0, y) {
        return Err(ColimitError::NotEquivariant("legs of the square".into()));
    }
    let q = pushout_oracle(j, f, DEFAULT_CLOSURE_BUDGET)?;
    let qx = induced_oracle_action(&q, xn, y)?;
    let qh = Arc::new(fixed_category(&qx, h));
    let jh = fixed_functor(j, x0, xn, h)?;
    let fh = fixed_functor(f, x0, y, h)?;
    let p = pushout_oracle(&jh, &fh, DEFAULT_CLOSURE_BUDGET)?;
    let u = q.from_c.restrict(fh.target().clone(), qh.clone())?;
    let v = q.from_b.restrict(jh.target().clone(), qh.clone())?;
    let comparison = p.mediate(&u, &v)?;
    compare(&comparison, y.group(), h)
}

/// Composes the stage inclusions into `j: X₀ → Xₙ` and checks that
/// `(−)^H` carries the pushout of `j` along `f: X₀ → Y` to a pushout.
pub fn verify_preservation_closure(steps: &[CellStep], f: &FinFunctor, y: &GCategory, subgroups: &[Subgroup]) -> Result<ClosureReport, ColimitError> {
    let first = steps.first().ok_or_else(|| ColimitError::NotACocone("at least one cell required".into()))?;
    let mut j = FinFunctor::identity(first.before.base().clone());
    for s in steps {
        j = s.inclusion.after(&j.with_target(s.inclusion.source().clone())?)?;
    }
    let xn = &steps.last().unwrap().after;
    let composite_reports = subgroups
        .iter()
        .map(|h| verify_oracle_square(&j, &first.before, xn, f, y, h))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ClosureReport { steps: steps.len(), step_reports: steps.iter().map(|s| s.reports.clone()).collect(), composite_reports })
}

/// Coproduct of G-categories, ids prefixed by the summand index.
pub fn gcat_coproduct(parts: &[&GCategory]) -> Result<(GCategory, Vec<FinFunctor>), ColimitError> {
    let g = parts[0].group().clone();
    let mut bld = CatBuilder::new();
    let mut obj_off = Vec::new();
    let mut mor_of: Vec<Vec<usize>> = Vec::new();
    let mut next = 0;
    for (k, x) in parts.iter().enumerate() {
        let c = x.base();
        obj_off.push(next);
        for o in 0..c.num_objects() {
            bld.add_object(format!("{k}|{}", c.object_id(o)));
        }
        next += c.num_objects();
        let mut mm = vec![0; c.num_morphisms()];
        for m in 0..c.num_morphisms() {
            mm[m] = if c.is_identity(m) {
                bld.identity(obj_off[k] + c.src(m))
            } else {
                bld.add_morphism(format!("{k}|{}", c.morphism_id(m)), obj_off[k] + c.src(m), obj_off[k] + c.tgt(m))
            };
        }
        for (a, b) in c.composable_pairs() {
            bld.set_composite(mm[a], mm[b], mm[c.compose(a, b).unwrap()]);
        }
        mor_of.push(mm);
    }
    let cat = Arc::new(bld.build()?);
    let injections = parts
        .iter()
        .enumerate()
        .map(|(k, x)| {
            let c = x.base();
            FinFunctor::new(c.clone(), cat.clone(), (0..c.num_objects()).map(|o| obj_off[k] + o).collect(), mor_of[k].clone())
        })
        .collect::<Result<Vec<_>, _>>()?;
    let action = (0..g.order())
        .map(|e| {
            let om: Vec<usize> = (0..cat.num_objects())
                .map(|o| {
                    let k = (0..parts.len()).rev().find(|&k| obj_off[k] <= o && o < obj_off[k] + parts[k].base().num_objects()).unwrap();
                    obj_off[k] + parts[k].act_object(e, o - obj_off[k])
                })
                .collect();
            let mut mm = vec![0; cat.num_morphisms()];
            for (k, x) in parts.iter().enumerate() {
                for m in 0..x.base().num_morphisms() {
                    mm[mor_of[k][m]] = mor_of[k][x.act_morphism(e, m)];
                }
            }
            FinFunctor::new(cat.clone(), cat.clone(), om, mm)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((validate_gcategory(g, cat, action)?, injections))
}

/// Outcome of the retract check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RetractReport {
    pub retraction_after_section_is_identity: bool,
    pub doubled: Vec<ComparisonReport>,
    pub retract: Vec<ComparisonReport>,
}

/// The square for `j: X → X'` along `f: X → Y` is a retract of the square for
/// `j ⊔ j` along `f ⊔ f`, with the first summand inclusion as section and
/// the fold map as retraction. Checks that the retraction of the induced
/// pushout maps is the identity and that both squares stay pushouts under
/// fixed points.
pub fn verify_retract(step: &CellStep, f: &FinFunctor, y: &GCategory, subgroups: &[Subgroup]) -> Result<RetractReport, ColimitError> {
    let (x, x1) = (&step.before, &step.after);
    let (xx, ix) = gcat_coproduct(&[x, x])?;
    let (xx1, ix1) = gcat_coproduct(&[x1, x1])?;
    let (yy, iy) = gcat_coproduct(&[y, y])?;
    let fold = |parts: &GCategory, into: &GCategory| -> Result<FinFunctor, ColimitError> {
        let c = parts.base();
        let n = into.base().num_objects();
        let om = (0..c.num_objects()).map(|o| o % n.max(1)).collect();
        let mm = (0..c.num_morphisms())
            .map(|m| {
                if c.is_identity(m) {
                    into.base().identity(c.src(m) % n.max(1))
                } else {
                    into.base().mor(c.morphism_id(m).split_once('|').unwrap().1).unwrap()
                }
            })
            .collect();
        Ok(FinFunctor::new(c.clone(), into.base().clone(), om, mm)?)
    };
    let (rx, rx1, ry) = (fold(&xx, x)?, fold(&xx1, x1)?, fold(&yy, y)?);
    // j ⊔ j and f ⊔ f.
    let jj = coproduct_map(&xx, &xx1, &[&step.inclusion, &step.inclusion])?;
    let ff = coproduct_map(&xx, &yy, &[f, f])?;
    // Section and retraction are maps of squares.
    for (s, r, big, small) in [(&ix[0], &rx, &xx, x), (&ix1[0], &rx1, &xx1, x1), (&iy[0], &ry, &yy, y)] {
        if r.after(s)? != FinFunctor::identity(small.base().clone()) || !is_equivariant(s, small, big) || !is_equivariant(r, big, small) {
            return Err(ColimitError::NotACocone("retract data".into()));
        }
    }
    if jj.after(&ix[0])? != ix1[0].after(&step.inclusion)? || step.inclusion.after(&rx)? != rx1.after(&jj)? {
        return Err(ColimitError::NotACocone("retract square does not commute with j".into()));
    }
    if ff.after(&ix[0])? != iy[0].after(f)? || f.after(&rx)? != ry.after(&ff)? {
        return Err(ColimitError::NotACocone("retract square does not commute with f".into()));
    }
    let q = pushout_oracle(&jj, &ff, DEFAULT_CLOSURE_BUDGET)?;
    let q1 = pushout_oracle(&step.inclusion, f, DEFAULT_CLOSURE_BUDGET)?;
    let s_q = q1.mediate(&q.from_c.after(&iy[0])?, &q.from_b.after(&ix1[0])?)?;
    let r_q = q.mediate(&q1.from_c.after(&ry)?, &q1.from_b.after(&rx1)?)?;
    let identity = r_q.after(&s_q)? == FinFunctor::identity(q1.category.clone());
    let doubled = subgroups.iter().map(|h| verify_oracle_square(&jj, &xx, &xx1, &ff, &yy, h)).collect::<Result<Vec<_>, _>>()?;
    let retract = subgroups.iter().map(|h| verify_oracle_square(&step.inclusion, x, x1, f, y, h)).collect::<Result<Vec<_>, _>>()?;
    if !identity {
        return Err(ColimitError::ComparisonNotIso("retraction of pushouts is not the identity".into()));
    }
    Ok(RetractReport { retraction_after_section_is_identity: identity, doubled, retract })
}

/// `f₀ ⊔ f₁ ⊔ …` between coproducts built by `gcat_coproduct`.
fn coproduct_map(source: &GCategory, target: &GCategory, parts: &[&FinFunctor]) -> Result<FinFunctor, ColimitError> {
    let (s, t) = (source.base(), target.base());
    let split = |id: &str| -> (usize, String) {
        let (k, rest) = id.split_once('|').expect("summand prefix");
        (k.parse().expect("summand index"), rest.to_string())
    };
    let om = (0..s.num_objects())
        .map(|o| {
            let (k, rest) = split(s.object_id(o));
            let f = parts[k];
            let local = f.source().obj(&rest).expect("summand object");
            t.obj(&format!("{k}|{}", f.target().object_id(f.on_object(local)))).expect("image")
        })
        .collect();
    let mm = (0..s.num_morphisms())
        .map(|m| {
            if s.is_identity(m) {
                let (k, rest) = split(s.object_id(s.src(m)));
                let f = parts[k];
                let local = f.source().obj(&rest).unwrap();
                return t.identity(t.obj(&format!("{k}|{}", f.target().object_id(f.on_object(local)))).unwrap());
            }
            let (k, rest) = split(s.morphism_id(m));
            let f = parts[k];
            let img = f.on_morphism(f.source().mor(&rest).expect("summand morphism"));
            if f.target().is_identity(img) {
                t.identity(t.obj(&format!("{k}|{}", f.target().object_id(f.target().src(img)))).unwrap())
            } else {
                t.mor(&format!("{k}|{}", f.target().morphism_id(img))).unwrap()
            }
        })
        .collect();
    Ok(FinFunctor::new(s.clone(), t.clone(), om, mm)?)
}

/// Default budget for pushout isomorphism searches.
pub const PUSHOUT_SEARCH_BUDGET: u64 = DEFAULT_SEARCH_BUDGET;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{all_functors, chain, poset_from_generators, poset_to_category};
    use crate::group::subgroups;
    use crate::sset::cofibration_cell;

    fn arrow() -> Arc<FinCat> {
        Arc::new(chain(1))
    }

    fn point() -> Arc<FinCat> {
        Arc::new(FinCat::terminal())
    }

    /// {a} ↪ {a → b}
    fn basic_cell() -> FinFunctor {
        let a = Arc::new(FinCat::discrete(&["0"]).unwrap());
        FinFunctor::inclusion(a, arrow()).unwrap()
    }

    #[test]
    fn sieve_examples() {
        let b = chain(1);
        let a0 = [b.obj("0").unwrap()];
        let a1 = [b.obj("1").unwrap()];
        assert!(is_sieve(&b, &a0, &full_morphisms(&b, &a0)).unwrap());
        assert!(!is_sieve(&b, &a1, &full_morphisms(&b, &a1)).unwrap());
        assert!(is_cosieve(&b, &a1, &full_morphisms(&b, &a1)).unwrap());
        assert!(matches!(is_sieve(&b, &a0, &[]), Err(ColimitError::NotASubcategory(_))));
    }

    #[test]
    fn dwyer_witness_examples() {
        let w = dwyer_witness(&basic_cell()).unwrap().unwrap();
        assert_eq!(w.cosieve.len(), 2);
        assert_eq!(w.r_object(1), 0);
        // Antichain {a1, a2} below w: no maximum.
        let b = Arc::new(poset_from_generators(&["a1", "a2", "w"], &[(0, 2), (1, 2)]).unwrap());
        let a = Arc::new(FinCat::discrete(&["a1", "a2"]).unwrap());
        let i = FinFunctor::inclusion(a, b).unwrap();
        assert!(dwyer_witness(&i).unwrap().is_none());
        let up = FinFunctor::inclusion(Arc::new(FinCat::discrete(&["1"]).unwrap()), arrow()).unwrap();
        assert!(matches!(dwyer_witness(&up), Err(ColimitError::NotASieve(_))));
    }

    #[test]
    fn poset_retraction_is_the_maximum_below() {
        let b = Arc::new(poset_from_generators(&["a", "a2", "x", "y"], &[(0, 1), (1, 2), (0, 3)]).unwrap());
        let a = Arc::new(poset_from_generators(&["a", "a2"], &[(0, 1)]).unwrap());
        let i = FinFunctor::inclusion(a.clone(), b.clone()).unwrap();
        let w = dwyer_witness(&i).unwrap().unwrap();
        assert_eq!(a.object_id(w.r_object(b.obj("x").unwrap())), "a2");
        assert_eq!(a.object_id(w.r_object(b.obj("y").unwrap())), "a");
    }

    #[test]
    fn explicit_pushout_basic() {
        let i = basic_cell();
        let f = FinFunctor::constant(i.source().clone(), point(), 0);
        let d = pushout_along_dwyer(&i, &f, None).unwrap();
        assert_eq!(d.category.num_objects(), 2);
        assert_eq!(d.category.num_morphisms(), 3);
        let o = pushout_oracle(&i, &f, DEFAULT_CLOSURE_BUDGET).unwrap();
        assert!(pushouts_isomorphic((&d.category, &d.from_c, &d.from_b), (&o.category, &o.from_c, &o.from_b), PUSHOUT_SEARCH_BUDGET)
            .unwrap()
            .is_some());
    }

    #[test]
    fn pushout_along_identity_is_c() {
        let b = arrow();
        let i = FinFunctor::identity(b.clone());
        let c = Arc::new(chain(2));
        let f = FinFunctor::inclusion(b.clone(), c.clone()).unwrap();
        let d = pushout_along_dwyer(&i, &f, None).unwrap();
        assert_eq!(*d.category, *c);
        let o = pushout_oracle(&i, &f, DEFAULT_CLOSURE_BUDGET).unwrap();
        assert_eq!(o.category.num_morphisms(), c.num_morphisms());
    }

    #[test]
    fn outside_the_cosieve_hom_sets_are_empty() {
        // A = {a}, B = {a < b, z} with z unrelated.
        let b = Arc::new(poset_from_generators(&["a", "b", "z"], &[(0, 1)]).unwrap());
        let a = Arc::new(FinCat::discrete(&["a"]).unwrap());
        let i = FinFunctor::inclusion(a.clone(), b.clone()).unwrap();
        let f = FinFunctor::constant(a, point(), 0);
        let d = pushout_along_dwyer(&i, &f, None).unwrap();
        let z = d.from_b.on_object(b.obj("z").unwrap());
        let star = d.from_c.on_object(0);
        assert!(d.category.hom(star, z).is_empty());
        assert_eq!(d.category.hom(star, d.from_b.on_object(1)).len(), 1);
    }

    #[test]
    fn universal_property_is_exhaustive_on_small_targets() {
        let i = basic_cell();
        let c = Arc::new(poset_from_generators(&["p", "q"], &[(0, 1)]).unwrap());
        let f = FinFunctor::constant(i.source().clone(), c.clone(), 1);
        let d = pushout_along_dwyer(&i, &f, None).unwrap();
        let e = Arc::new(chain(2));
        let b = i.target().clone();
        let budget = DEFAULT_SEARCH_BUDGET;
        let all_d = all_functors(&d.category, &e, budget).unwrap();
        for u in all_functors(&c, &e, budget).unwrap() {
            for v in all_functors(&b, &e, budget).unwrap() {
                if u.after(&f).unwrap() != v.after(&i).unwrap() {
                    continue;
                }
                let m = d.mediate(&u, &v).unwrap();
                let matching = all_d
                    .iter()
                    .filter(|x| x.after(&d.from_c).unwrap() == u && x.after(&d.from_b).unwrap() == v)
                    .count();
                assert_eq!(matching, 1);
                assert!(all_d.contains(&m));
            }
        }
    }

    #[test]
    fn generating_cells_pushout_against_oracle() {
        let cell = cofibration_cell(1).unwrap();
        let c = Arc::new(chain(2));
        for f in all_functors(cell.inclusion.source(), &c, DEFAULT_SEARCH_BUDGET).unwrap() {
            let d = pushout_along_dwyer(&cell.inclusion, &f, None).unwrap();
            let o = pushout_oracle(&cell.inclusion, &f, DEFAULT_CLOSURE_BUDGET).unwrap();
            assert!(pushouts_isomorphic((&d.category, &d.from_c, &d.from_b), (&o.category, &o.from_c, &o.from_b), PUSHOUT_SEARCH_BUDGET)
                .unwrap()
                .is_some());
        }
    }

    #[test]
    fn sequential_colimit_examples() {
        let c0 = Arc::new(chain(0));
        let c1 = Arc::new(chain(1));
        let c2 = Arc::new(chain(2));
        let f0 = FinFunctor::inclusion(c0.clone(), c1.clone()).unwrap();
        let f1 = FinFunctor::inclusion(c1, c2.clone()).unwrap();
        let s = sequential_colimit(&c0, &[f0, f1]).unwrap();
        assert_eq!(*s.category, *c2);
        let id = FinFunctor::identity(c0.clone());
        let s = sequential_colimit(&c0, &[id.clone(), id]).unwrap();
        assert_eq!(*s.category, *c0);
        let collapse = FinFunctor::constant(Arc::new(chain(1)), c0.clone(), 0);
        assert!(matches!(sequential_colimit(&Arc::new(chain(1)), &[collapse]), Err(ColimitError::NotMono(_))));
    }

    fn swap_points_over(n: usize) -> GCategory {
        let g = Arc::new(FinGroup::cyclic(2));
        tensor(&coset_gset(&g, &g.trivial_subgroup()).unwrap(), &chain(n))
    }

    #[test]
    fn filtered_mono_under_c2() {
        let x0 = swap_points_over(0);
        let g = x0.group().clone();
        // Add a fixed top above everything.
        let names: Vec<String> = x0.base().objects().iter().cloned().chain(["top".to_string()]).collect();
        let rel: Vec<(String, String)> = names.iter().flat_map(|n| [(n.clone(), n.clone()), (n.clone(), "top".to_string())]).collect();
        let rel: Vec<(String, String)> = rel.into_iter().collect::<HashSet<_>>().into_iter().collect();
        let x1c = Arc::new(poset_to_category(&names, &rel).unwrap());
        let swap = FinFunctor::new(
            x1c.clone(),
            x1c.clone(),
            vec![1, 0, 2],
            (0..x1c.num_morphisms())
                .map(|m| {
                    let p = [1, 0, 2];
                    x1c.hom(p[x1c.src(m)], p[x1c.tgt(m)])[0]
                })
                .collect(),
        )
        .unwrap();
        let x1 = validate_gcategory(g.clone(), x1c.clone(), vec![FinFunctor::identity(x1c.clone()), swap]).unwrap();
        let inc = FinFunctor::inclusion(x0.base().clone(), x1c).unwrap();
        for h in subgroups(&g) {
            let r = verify_filtered_mono(&[x0.clone(), x1.clone()], std::slice::from_ref(&inc), &h).unwrap();
            assert!(r.isomorphism());
        }
    }

    #[test]
    fn fixed_point_pushout_examples() {
        let g = Arc::new(FinGroup::cyclic(2));
        let c = GCategory::trivial(g.clone(), point());
        let cell = basic_cell();
        let attach = FinFunctor::constant(cell.source().clone(), point(), 0);
        let r = verify_fixed_point_pushout(&g.trivial_subgroup(), &g.whole(), &cell, &attach, &c).unwrap();
        assert_eq!(r.fixed_of_colimit, [1, 1]);
        assert!(r.isomorphism());
        let r = verify_fixed_point_pushout(&g.trivial_subgroup(), &g.trivial_subgroup(), &cell, &attach, &c).unwrap();
        assert_eq!(r.fixed_of_colimit[0], 3);

        let s3 = Arc::new(FinGroup::symmetric3());
        let c3 = subgroups(&s3).into_iter().find(|h| h.order() == 3).unwrap();
        let c = GCategory::trivial(s3.clone(), point());
        let r = verify_fixed_point_pushout(&c3, &c3, &cell, &attach, &c).unwrap();
        // The point plus the two fixed copies of b.
        assert_eq!(r.fixed_of_colimit[0], 3);
    }

    #[test]
    fn closure_and_retract() {
        let g = Arc::new(FinGroup::cyclic(2));
        let subs = subgroups(&g);
        let x0 = GCategory::trivial(g.clone(), point());
        let cell = basic_cell();
        let attach = FinFunctor::constant(cell.source().clone(), point(), 0);
        let s1 = attach_cell(&x0, &g.trivial_subgroup(), &cell, &attach, &subs).unwrap();
        let attach2 = FinFunctor::constant(cell.source().clone(), s1.after.base().clone(), 0);
        let s2 = attach_cell(&s1.after, &g.whole(), &cell, &attach2, &subs).unwrap();
        let y = GCategory::trivial(g.clone(), Arc::new(chain(1)));
        let f = FinFunctor::constant(x0.base().clone(), y.base().clone(), 1);
        let r = verify_preservation_closure(&[s1.clone(), s2], &f, &y, &subs).unwrap();
        assert!(r.composite_reports.iter().all(|c| c.isomorphism()));
        let rr = verify_retract(&s1, &f, &y, &subs).unwrap();
        assert!(rr.retraction_after_section_is_identity);
    }
}
