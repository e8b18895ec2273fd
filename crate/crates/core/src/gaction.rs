//! Strict group actions on finite categories, fixed-point subcategories, the
//! functors Φ (fixed points on every orbit) and Λ (evaluation at `G/e`), the
//! tensor `S ⊗ A`, and a brute-force check of the adjunction `Λ ⊣ Φ`.

use std::collections::HashSet;
use std::sync::Arc;

use thiserror::Error;

use crate::fincat::{all_functors, pullback, CatBuilder, CategoryError, FinCat, FinFunctor, FunctorError, SearchBudgetExceeded};
use crate::group::{coset_gset, gset_fixed_points, orbit_category, FinGroup, GSet, GroupError, OrbitCategory, Subgroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GActionError {
    #[error("sigma_e is not the identity functor")]
    IdentityNotIdentity,
    #[error("sigma_{0} sigma_{1} differs from sigma_({0}{1})")]
    NotAGroupHomomorphism(String, String),
    #[error("action has {got} functors for a group of order {expected}")]
    WrongActionSize { expected: usize, got: usize },
    #[error("functor is not equivariant: {0}")]
    NotEquivariant(String),
    #[error("diagram is not a functor on the orbit category: {0}")]
    NotADiagram(String),
    #[error("adjunction transposition failed: {0}")]
    TranspositionMismatch(String),
    #[error("comparison functor is not an isomorphism: {0}")]
    ComparisonNotIso(String),
    #[error("groups differ")]
    GroupMismatch,
    #[error(transparent)]
    Functor(#[from] FunctorError),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Budget(#[from] SearchBudgetExceeded),
}

/// A finite category with a strict action: `σ_e = id` and `σ_g σ_h = σ_{gh}`.
#[derive(Clone, Debug)]
pub struct GCategory {
    group: Arc<FinGroup>,
    base: Arc<FinCat>,
    action: Vec<FinFunctor>,
}

/// Checks the action laws on the nose.
pub fn validate_gcategory(group: Arc<FinGroup>, base: Arc<FinCat>, action: Vec<FinFunctor>) -> Result<GCategory, GActionError> {
    if action.len() != group.order() {
        return Err(GActionError::WrongActionSize { expected: group.order(), got: action.len() });
    }
    let action: Vec<FinFunctor> = action
        .into_iter()
        .map(|s| {
            if Arc::ptr_eq(s.source(), &base) && Arc::ptr_eq(s.target(), &base) {
                Ok(s)
            } else if **s.source() == *base && **s.target() == *base {
                s.restrict(base.clone(), base.clone())
            } else {
                Err(FunctorError::NotComposable)
            }
        })
        .collect::<Result<_, _>>()?;
    let id = FinFunctor::identity(base.clone());
    if action[group.identity()] != id {
        return Err(GActionError::IdentityNotIdentity);
    }
    for g in 0..group.order() {
        for h in 0..group.order() {
            let gh = action[g].after(&action[h])?;
            if gh != action[group.mul(g, h)] {
                return Err(GActionError::NotAGroupHomomorphism(
                    group.element_id(g).to_string(),
                    group.element_id(h).to_string(),
                ));
            }
        }
    }
    Ok(GCategory { group, base, action })
}

impl GCategory {
    /// `G` acting by identities.
    pub fn trivial(group: Arc<FinGroup>, base: Arc<FinCat>) -> GCategory {
        let action = (0..group.order()).map(|_| FinFunctor::identity(base.clone())).collect();
        GCategory { group, base, action }
    }

    pub fn group(&self) -> &Arc<FinGroup> {
        &self.group
    }

    pub fn base(&self) -> &Arc<FinCat> {
        &self.base
    }

    pub fn sigma(&self, g: usize) -> &FinFunctor {
        &self.action[g]
    }

    pub fn act_object(&self, g: usize, x: usize) -> usize {
        self.action[g].on_object(x)
    }

    pub fn act_morphism(&self, g: usize, m: usize) -> usize {
        self.action[g].on_morphism(m)
    }
}

/// Objects and morphisms fixed by every element of `h`, with original ids.
pub fn fixed_category(x: &GCategory, h: &Subgroup) -> FinCat {
    let c = x.base();
    let objs: Vec<usize> = (0..c.num_objects()).filter(|&o| h.elements().iter().all(|&g| x.act_object(g, o) == o)).collect();
    let mors: Vec<usize> = (0..c.num_morphisms()).filter(|&m| h.elements().iter().all(|&g| x.act_morphism(g, m) == m)).collect();
    c.subcategory(&objs, &mors).expect("fixed points form a subcategory").0
}

/// True when `f ∘ σ_g = σ_g ∘ f` for every `g`.
pub fn is_equivariant(f: &FinFunctor, x: &GCategory, y: &GCategory) -> bool {
    (0..x.group().order()).all(|g| {
        let a = f.after(x.sigma(g));
        let b = y.sigma(g).after(f);
        matches!((a, b), (Ok(a), Ok(b)) if a == b)
    })
}

/// Restriction of an equivariant functor to `H`-fixed points.
pub fn fixed_functor(f: &FinFunctor, x: &GCategory, y: &GCategory, h: &Subgroup) -> Result<FinFunctor, GActionError> {
    let xs = Arc::new(fixed_category(x, h));
    let ys = Arc::new(fixed_category(y, h));
    Ok(f.restrict(xs, ys)?)
}

/// A contravariant functor from the orbit category to finite categories.
#[derive(Clone, Debug)]
pub struct OGDiagram {
    orbit: Arc<OrbitCategory>,
    values: Vec<Arc<FinCat>>,
    /// Indexed by orbit-category morphism `a: G/H → G/K`; maps `Y(G/K) → Y(G/H)`.
    restriction: Vec<FinFunctor>,
}

impl OGDiagram {
    /// Validates contravariant functoriality.
    pub fn new(orbit: Arc<OrbitCategory>, values: Vec<Arc<FinCat>>, restriction: Vec<FinFunctor>) -> Result<OGDiagram, GActionError> {
        let oc = orbit.category().clone();
        if values.len() != oc.num_objects() || restriction.len() != oc.num_morphisms() {
            return Err(GActionError::NotADiagram("wrong number of values or restrictions".into()));
        }
        for (a, r) in restriction.iter().enumerate() {
            let (h, k) = (oc.src(a), oc.tgt(a));
            if **r.source() != *values[k] || **r.target() != *values[h] {
                return Err(GActionError::NotADiagram(format!("restriction along `{}` has wrong endpoints", oc.morphism_id(a))));
            }
        }
        let y = OGDiagram { orbit, values, restriction };
        for x in 0..oc.num_objects() {
            if y.restriction[oc.identity(x)] != FinFunctor::identity(y.values[x].clone()) {
                return Err(GActionError::NotADiagram(format!("identity of `{}` not preserved", oc.object_id(x))));
            }
        }
        for (b, a) in oc.composable_pairs() {
            let ba = oc.compose(b, a).expect("composable");
            let lhs = &y.restriction[ba];
            let rhs = y.restriction[a].after(&y.restriction[b])?;
            if *lhs != rhs {
                return Err(GActionError::NotADiagram(format!(
                    "composite `{}` after `{}` not preserved",
                    oc.morphism_id(b),
                    oc.morphism_id(a)
                )));
            }
        }
        Ok(y)
    }

    pub fn orbit(&self) -> &Arc<OrbitCategory> {
        &self.orbit
    }

    pub fn group(&self) -> &Arc<FinGroup> {
        self.orbit.group()
    }

    pub fn value(&self, h: usize) -> &Arc<FinCat> {
        &self.values[h]
    }

    pub fn values(&self) -> &[Arc<FinCat>] {
        &self.values
    }

    pub fn restriction(&self, a: usize) -> &FinFunctor {
        &self.restriction[a]
    }

    pub fn restrictions(&self) -> &[FinFunctor] {
        &self.restriction
    }
}

/// `Φ(X)(G/H) = X^H`; along `gK: G/H → G/K` the restriction is `x ↦ σ_g(x)`.
pub fn phi(x: &GCategory) -> OGDiagram {
    phi_with(x, Arc::new(orbit_category(x.group())))
}

pub fn phi_with(x: &GCategory, orbit: Arc<OrbitCategory>) -> OGDiagram {
    let values: Vec<Arc<FinCat>> = orbit.subgroups().iter().map(|h| Arc::new(fixed_category(x, h))).collect();
    let oc = orbit.category().clone();
    let restriction = (0..oc.num_morphisms())
        .map(|a| {
            let name = orbit.name(a);
            x.sigma(name.rep)
                .restrict(values[name.target].clone(), values[name.source].clone())
                .expect("σ_g maps K-fixed points to H-fixed points when g⁻¹Hg ⊆ K")
        })
        .collect();
    OGDiagram::new(orbit, values, restriction).expect("Φ(X) is a diagram")
}

/// `Λ(Y) = Y(G/e)` with `σ_g` the restriction along the automorphism of
/// `G/e` named by `g`. Since `a_h ∘ a_g = a_{gh}` and restriction is
/// contravariant, `σ_g σ_h = σ_{gh}` holds without inverting `g`.
pub fn lambda(y: &OGDiagram) -> GCategory {
    let e = y.orbit().trivial_index();
    let base = y.value(e).clone();
    let g = y.group().clone();
    let action = (0..g.order()).map(|x| y.restriction(y.orbit().automorphism(x)).clone()).collect();
    validate_gcategory(g, base, action).expect("Λ(Y) is a G-category")
}

/// Morphism of diagrams: one functor per subgroup.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagramMap {
    pub components: Vec<FinFunctor>,
}

/// Checks `η_H ∘ Y(a) = Y'(a) ∘ η_K` for every orbit morphism `a`.
pub fn is_natural(source: &OGDiagram, target: &OGDiagram, eta: &DiagramMap) -> bool {
    let oc = source.orbit().category();
    (0..oc.num_morphisms()).all(|a| {
        let (h, k) = (oc.src(a), oc.tgt(a));
        let lhs = eta.components[h].after(source.restriction(a));
        let rhs = target.restriction(a).after(&eta.components[k]);
        matches!((lhs, rhs), (Ok(l), Ok(r)) if l == r)
    })
}

/// Transpose of an equivariant `F: Λ(Y) → X`: `η_H = F ∘ Y(G/e → G/H)`.
pub fn transpose_to_diagram(y: &OGDiagram, phi_x: &OGDiagram, f: &FinFunctor) -> Result<DiagramMap, GActionError> {
    let orbit = y.orbit();
    let components = (0..orbit.subgroups().len())
        .map(|h| {
            let proj = y.restriction(orbit.projection(h));
            let full = f.after(proj)?;
            full.restrict(y.value(h).clone(), phi_x.value(h).clone())
                .map_err(|_| GActionError::TranspositionMismatch(format!("component at H{h} leaves the fixed points")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DiagramMap { components })
}

/// Transpose of a diagram map `η: Y → Φ(X)`: its component at `G/e`.
pub fn transpose_to_gcat(y: &OGDiagram, x: &GCategory, eta: &DiagramMap) -> Result<FinFunctor, GActionError> {
    let e = y.orbit().trivial_index();
    Ok(eta.components[e].with_target(x.base().clone())?)
}

/// Which side of the adjunction a map lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdjointDirection {
    /// From `Λ(Y) → X` to `Y → Φ(X)`.
    ToDiagram,
    /// From `Y → Φ(X)` to `Λ(Y) → X`.
    ToGCategory,
}

/// Either side of the hom-set bijection.
#[derive(Clone, Debug, PartialEq)]
pub enum AdjointMap {
    GCat(FinFunctor),
    Diagram(DiagramMap),
}

pub fn adjoint_transpose(direction: AdjointDirection, y: &OGDiagram, x: &GCategory, f: &AdjointMap) -> Result<AdjointMap, GActionError> {
    match (direction, f) {
        (AdjointDirection::ToDiagram, AdjointMap::GCat(f)) => {
            Ok(AdjointMap::Diagram(transpose_to_diagram(y, &phi_with(x, y.orbit().clone()), f)?))
        }
        (AdjointDirection::ToGCategory, AdjointMap::Diagram(eta)) => Ok(AdjointMap::GCat(transpose_to_gcat(y, x, eta)?)),
        _ => Err(GActionError::TranspositionMismatch("direction does not match the map".into())),
    }
}

/// Every equivariant functor `Λ(Y) → X`.
pub fn equivariant_functors(source: &GCategory, target: &GCategory, budget: u64) -> Result<Vec<FinFunctor>, GActionError> {
    Ok(all_functors(source.base(), target.base(), budget)?
        .into_iter()
        .filter(|f| is_equivariant(f, source, target))
        .collect())
}

/// Every natural transformation `Y → Y'`, by per-level enumeration.
pub fn diagram_maps(source: &OGDiagram, target: &OGDiagram, budget: u64) -> Result<Vec<DiagramMap>, GActionError> {
    let n = source.values().len();
    let per_level: Vec<Vec<FinFunctor>> = (0..n)
        .map(|h| all_functors(source.value(h), target.value(h), budget))
        .collect::<Result<_, _>>()?;
    let oc = source.orbit().category().clone();
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    fn rec(
        k: usize,
        n: usize,
        per_level: &[Vec<FinFunctor>],
        chosen: &mut Vec<usize>,
        oc: &FinCat,
        source: &OGDiagram,
        target: &OGDiagram,
        out: &mut Vec<DiagramMap>,
    ) {
        if k == n {
            out.push(DiagramMap { components: chosen.iter().enumerate().map(|(h, &i)| per_level[h][i].clone()).collect() });
            return;
        }
        for i in 0..per_level[k].len() {
            chosen.push(i);
            // Naturality squares whose endpoints are both chosen.
            let ok = (0..oc.num_morphisms()).all(|a| {
                let (h, kk) = (oc.src(a), oc.tgt(a));
                if h > k || kk > k || (h != k && kk != k) {
                    return true;
                }
                let lhs = per_level[h][chosen[h]].after(source.restriction(a));
                let rhs = target.restriction(a).after(&per_level[kk][chosen[kk]]);
                matches!((lhs, rhs), (Ok(l), Ok(r)) if l == r)
            });
            if ok {
                rec(k + 1, n, per_level, chosen, oc, source, target, out);
            }
            chosen.pop();
        }
    }
    rec(0, n, &per_level, &mut chosen, &oc, source, target, &mut out);
    Ok(out)
}

/// Outcome of an exhaustive adjunction check on one `(Y, X)` pair.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct AdjunctionReport {
    pub gcat_maps: usize,
    pub diagram_maps: usize,
    pub bijection: bool,
    pub triangle_identities: bool,
}

/// Enumerates `Hom(Λ Y, X)` and `Hom(Y, Φ X)`, checks that transposition is a
/// bijection with inverse the reverse transposition, and checks both triangle
/// identities for the unit `Y → ΦΛY` and counit `ΛΦX → X`.
pub fn verify_adjunction(y: &OGDiagram, x: &GCategory, budget: u64) -> Result<AdjunctionReport, GActionError> {
    if **y.group() != **x.group() {
        return Err(GActionError::GroupMismatch);
    }
    let orbit = y.orbit().clone();
    let ly = lambda(y);
    let phi_x = phi_with(x, orbit.clone());
    let left = equivariant_functors(&ly, x, budget)?;
    let right = diagram_maps(y, &phi_x, budget)?;
    if left.len() != right.len() {
        return Err(GActionError::TranspositionMismatch(format!("{} equivariant functors vs {} diagram maps", left.len(), right.len())));
    }
    let mut hit = HashSet::new();
    for f in &left {
        let eta = transpose_to_diagram(y, &phi_x, f)?;
        if !is_natural(y, &phi_x, &eta) {
            return Err(GActionError::TranspositionMismatch("transpose is not natural".into()));
        }
        let idx = right
            .iter()
            .position(|r| *r == eta)
            .ok_or_else(|| GActionError::TranspositionMismatch("transpose not among diagram maps".into()))?;
        if !hit.insert(idx) {
            return Err(GActionError::TranspositionMismatch("two functors share a transpose".into()));
        }
        if transpose_to_gcat(y, x, &eta)? != *f {
            return Err(GActionError::TranspositionMismatch("round trip through Y → Φ(X) is not the identity".into()));
        }
    }
    for eta in &right {
        let f = transpose_to_gcat(y, x, eta)?;
        if !is_equivariant(&f, &ly, x) {
            return Err(GActionError::TranspositionMismatch("transpose is not equivariant".into()));
        }
        if transpose_to_diagram(y, &phi_x, &f)? != *eta {
            return Err(GActionError::TranspositionMismatch("round trip through Λ(Y) → X is not the identity".into()));
        }
    }
    check_triangles(y, x)?;
    Ok(AdjunctionReport { gcat_maps: left.len(), diagram_maps: right.len(), bijection: true, triangle_identities: true })
}

/// Unit at `Y`: the components `Y(G/H) → Y(G/e)^H` of restriction along projections.
pub fn unit(y: &OGDiagram) -> Result<DiagramMap, GActionError> {
    let ly = lambda(y);
    let plly = phi_with(&ly, y.orbit().clone());
    let comps = (0..y.values().len())
        .map(|h| y.restriction(y.orbit().projection(h)).restrict(y.value(h).clone(), plly.value(h).clone()))
        .collect::<Result<Vec<_>, _>>()?;
    let eta = DiagramMap { components: comps };
    if !is_natural(y, &plly, &eta) {
        return Err(GActionError::TranspositionMismatch("unit is not natural".into()));
    }
    Ok(eta)
}

/// Counit at `X`: `ΛΦ(X) = X^e → X`, checked equivariant.
pub fn counit(x: &GCategory) -> Result<FinFunctor, GActionError> {
    let lpx = lambda(&phi(x));
    let eps = FinFunctor::inclusion(lpx.base().clone(), x.base().clone())?;
    if !is_equivariant(&eps, &lpx, x) {
        return Err(GActionError::TranspositionMismatch("counit is not equivariant".into()));
    }
    Ok(eps)
}

fn check_triangles(y: &OGDiagram, x: &GCategory) -> Result<(), GActionError> {
    // ε_{ΛY} ∘ Λ(η_Y) = id_{ΛY}
    let eta = unit(y)?;
    let ly = lambda(y);
    let e = y.orbit().trivial_index();
    let lambda_eta = &eta.components[e];
    let eps_ly = counit(&ly)?;
    let comp = eps_ly.after(&lambda_eta.with_target(eps_ly.source().clone())?)?;
    if comp != FinFunctor::identity(ly.base().clone()) {
        return Err(GActionError::TranspositionMismatch("ε_Λ ∘ Λη is not the identity".into()));
    }
    // Φ(ε_X) ∘ η_{ΦX} = id_{ΦX}
    let phi_x = phi_with(x, y.orbit().clone());
    let eta_phi = unit(&phi_x)?;
    let eps = counit(x)?;
    let lpx = lambda(&phi_x);
    for (h, sub) in y.orbit().subgroups().iter().enumerate() {
        let phi_eps = fixed_functor(&eps, &lpx, x, sub)?;
        let comp = phi_eps.after(&eta_phi.components[h].with_target(phi_eps.source().clone())?)?;
        if comp != FinFunctor::identity(phi_x.value(h).clone()) {
            return Err(GActionError::TranspositionMismatch(format!("Φε ∘ ηΦ is not the identity at H{h}")));
        }
    }
    Ok(())
}

/// Object id of the copy of `a` over point `p` in a tensor.
pub fn tensor_object_id(p: &str, a: &str) -> String {
    format!("{p}|{a}")
}

/// Disjoint union of copies of `a`, one per listed point, with ids `p|x`.
pub fn tensor_category(points: &[String], a: &FinCat) -> FinCat {
    let mut b = CatBuilder::new();
    let mut obj = vec![vec![0; a.num_objects()]; points.len()];
    for (pi, p) in points.iter().enumerate() {
        for x in 0..a.num_objects() {
            obj[pi][x] = b.add_object(tensor_object_id(p, a.object_id(x)));
        }
    }
    let mut mor = vec![vec![0; a.num_morphisms()]; points.len()];
    for (pi, p) in points.iter().enumerate() {
        for m in 0..a.num_morphisms() {
            mor[pi][m] = if a.is_identity(m) {
                b.identity(obj[pi][a.src(m)])
            } else {
                b.add_morphism(tensor_object_id(p, a.morphism_id(m)), obj[pi][a.src(m)], obj[pi][a.tgt(m)])
            };
        }
        for (g, f) in a.composable_pairs() {
            b.set_composite(mor[pi][g], mor[pi][f], mor[pi][a.compose(g, f).expect("composable")]);
        }
    }
    b.build().expect("coproduct of copies")
}

/// `S ⊗ A`: copies of `A` permuted by the action on `S`.
pub fn tensor(s: &GSet, a: &FinCat) -> GCategory {
    let base = Arc::new(tensor_category(&s.points, a));
    let no = a.num_objects();
    let action = (0..s.group.order())
        .map(|g| {
            let om = (0..base.num_objects()).map(|i| s.act(g, i / no) * no + i % no).collect();
            let mm = (0..base.num_morphisms())
                .map(|m| {
                    let p = base.src(m) / no;
                    let local = a_index_of(&base, a, m, p, &s.points);
                    tensor_morphism_index(&base, a, s.act(g, p), local, &s.points)
                })
                .collect();
            FinFunctor::new(base.clone(), base.clone(), om, mm).expect("permutation of copies")
        })
        .collect();
    validate_gcategory(s.group.clone(), base, action).expect("tensor action")
}

fn a_index_of(base: &FinCat, a: &FinCat, m: usize, p: usize, points: &[String]) -> usize {
    if base.is_identity(m) {
        let x = base.src(m) % a.num_objects();
        return a.identity(x);
    }
    let prefix = format!("{}|", points[p]);
    let id = base.morphism_id(m).strip_prefix(&prefix).expect("tensor morphism id");
    a.mor(id).expect("copy of a morphism of A")
}

fn tensor_morphism_index(base: &FinCat, a: &FinCat, q: usize, local: usize, points: &[String]) -> usize {
    if a.is_identity(local) {
        let x = a.src(local);
        return base.identity(q * a.num_objects() + x);
    }
    base.mor(&tensor_object_id(&points[q], a.morphism_id(local))).expect("copy exists")
}

/// `S ⊗ f` for a functor `f: A → B`, between `S ⊗ A` and `S ⊗ B`.
pub fn tensor_functor(s: &GSet, f: &FinFunctor, sa: &GCategory, sb: &GCategory) -> Result<FinFunctor, GActionError> {
    let (a, bcat) = (f.source(), f.target());
    let (sa_base, sb_base) = (sa.base(), sb.base());
    let om = (0..sa_base.num_objects())
        .map(|i| {
            let (p, x) = (i / a.num_objects(), i % a.num_objects());
            p * bcat.num_objects() + f.on_object(x)
        })
        .collect();
    let mm = (0..sa_base.num_morphisms())
        .map(|m| {
            let p = sa_base.src(m) / a.num_objects();
            let local = a_index_of(sa_base, a, m, p, &s.points);
            tensor_morphism_index(sb_base, bcat, p, f.on_morphism(local), &s.points)
        })
        .collect();
    let tf = FinFunctor::new(sa_base.clone(), sb_base.clone(), om, mm)?;
    if !is_equivariant(&tf, sa, sb) {
        return Err(GActionError::NotEquivariant("tensor of a functor".into()));
    }
    Ok(tf)
}

/// Both sides of `(G/K)^H ⊗ A → (G/K ⊗ A)^H` and whether the comparison is
/// an isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct TensorFixedReport {
    pub fixed_points: usize,
    pub lhs_objects: usize,
    pub lhs_morphisms: usize,
    pub rhs_objects: usize,
    pub rhs_morphisms: usize,
    pub isomorphism: bool,
}

pub fn fixed_tensor_compare(g: &Arc<FinGroup>, k: &Subgroup, h: &Subgroup, a: &FinCat) -> Result<TensorFixedReport, GActionError> {
    g.subgroup(h.elements())?;
    let gk = coset_gset(g, k)?;
    let fixed: Vec<String> = gset_fixed_points(&gk, h).into_iter().map(|p| gk.points[p].clone()).collect();
    let lhs = Arc::new(tensor_category(&fixed, a));
    let rhs = Arc::new(fixed_category(&tensor(&gk, a), h));
    let cmp = FinFunctor::inclusion(lhs.clone(), rhs.clone())
        .map_err(|e| GActionError::ComparisonNotIso(format!("comparison is not a functor: {e}")))?;
    let report = TensorFixedReport {
        fixed_points: fixed.len(),
        lhs_objects: lhs.num_objects(),
        lhs_morphisms: lhs.num_morphisms(),
        rhs_objects: rhs.num_objects(),
        rhs_morphisms: rhs.num_morphisms(),
        isomorphism: cmp.is_bijective(),
    };
    if !report.isomorphism {
        return Err(GActionError::ComparisonNotIso(format!("{report:?}")));
    }
    Ok(report)
}

/// Pullback of equivariant functors with the diagonal action.
pub fn gcat_pullback(f: &FinFunctor, x: &GCategory, g: &FinFunctor, y: &GCategory, z: &GCategory) -> Result<(GCategory, FinFunctor, FinFunctor), GActionError> {
    if !is_equivariant(f, x, z) || !is_equivariant(g, y, z) {
        return Err(GActionError::NotEquivariant("pullback legs".into()));
    }
    let pb = pullback(f, g)?;
    let action = (0..x.group().order())
        .map(|e| {
            let u = x.sigma(e).after(&pb.p1)?;
            let v = y.sigma(e).after(&pb.p2)?;
            pb.mediate(&u, &v)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let gc = validate_gcategory(x.group().clone(), pb.category.clone(), action)?;
    Ok((gc, pb.p1, pb.p2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{chain, find_isomorphism, DEFAULT_SEARCH_BUDGET};
    use crate::group::subgroups;

    fn c2() -> Arc<FinGroup> {
        Arc::new(FinGroup::cyclic(2))
    }

    /// C2 swapping the coordinates of chain2 × chain2.
    fn swapped_square() -> GCategory {
        let c = Arc::new(chain(1));
        let t = Arc::new(FinCat::terminal());
        let f = FinFunctor::constant(c.clone(), t, 0);
        let pb = pullback(&f, &f).unwrap();
        let swap = pb.mediate(&pb.p2, &pb.p1).unwrap();
        validate_gcategory(c2(), pb.category.clone(), vec![FinFunctor::identity(pb.category.clone()), swap]).unwrap()
    }

    fn swapped_points() -> GCategory {
        let g = c2();
        let s = coset_gset(&g, &g.trivial_subgroup()).unwrap();
        tensor(&s, &FinCat::terminal())
    }

    #[test]
    fn trivial_action_is_valid() {
        let x = GCategory::trivial(Arc::new(FinGroup::symmetric3()), Arc::new(chain(2)));
        assert!(validate_gcategory(x.group().clone(), x.base().clone(), (0..6).map(|g| x.sigma(g).clone()).collect()).is_ok());
    }

    #[test]
    fn non_involutive_action_is_rejected() {
        let c = Arc::new(chain(1));
        let t = Arc::new(FinCat::terminal());
        let f = FinFunctor::constant(c.clone(), t, 0);
        let pb = pullback(&f, &f).unwrap();
        // Constant functor at (0,0) is idempotent but not an involution.
        let k = FinFunctor::constant(pb.category.clone(), pb.category.clone(), 0);
        let err = validate_gcategory(c2(), pb.category.clone(), vec![FinFunctor::identity(pb.category.clone()), k]).unwrap_err();
        assert!(matches!(err, GActionError::NotAGroupHomomorphism(..)));
    }

    #[test]
    fn fixed_category_examples() {
        let x = swapped_square();
        let e = fixed_category(&x, &x.group().trivial_subgroup());
        assert_eq!(e, **x.base());
        let diag = fixed_category(&x, &x.group().whole());
        let mut objs = diag.objects().to_vec();
        objs.sort();
        assert_eq!(objs, vec!["(0,0)", "(1,1)"]);
        assert_eq!(diag.num_morphisms(), 3);
        let pts = swapped_points();
        assert_eq!(fixed_category(&pts, &pts.group().whole()).num_objects(), 0);
    }

    #[test]
    fn phi_of_swapped_points() {
        let x = swapped_points();
        let y = phi(&x);
        assert_eq!(y.value(y.orbit().trivial_index()).num_objects(), 2);
        assert_eq!(y.value(y.orbit().whole_index()).num_objects(), 0);
    }

    #[test]
    fn lambda_phi_recovers_the_action() {
        for x in [swapped_points(), swapped_square()] {
            let lp = lambda(&phi(&x));
            assert_eq!(**lp.base(), **x.base());
            for g in 0..2 {
                assert_eq!(*lp.sigma(g), *x.sigma(g));
            }
        }
    }

    #[test]
    fn phi_is_functorial_on_s3() {
        let g = Arc::new(FinGroup::symmetric3());
        let s = coset_gset(&g, &subgroups(&g)[1]).unwrap();
        let x = tensor(&s, &chain(1));
        // OGDiagram::new checks contravariant functoriality over all composable pairs.
        let y = phi(&x);
        assert_eq!(y.values().len(), 6);
        let back = lambda(&y);
        for e in 0..6 {
            assert_eq!(*back.sigma(e), *x.sigma(e));
        }
    }

    #[test]
    fn constant_diagram_gives_trivial_action() {
        let x = GCategory::trivial(c2(), Arc::new(chain(1)));
        let y = phi(&x);
        let l = lambda(&y);
        for g in 0..2 {
            assert_eq!(*l.sigma(g), FinFunctor::identity(l.base().clone()));
        }
    }

    #[test]
    fn adjunction_on_small_pairs() {
        let xs = [swapped_points(), swapped_square(), GCategory::trivial(c2(), Arc::new(chain(1)))];
        for y_src in &xs {
            let y = phi(y_src);
            for x in &xs {
                let r = verify_adjunction(&y, x, DEFAULT_SEARCH_BUDGET).unwrap();
                assert_eq!(r.gcat_maps, r.diagram_maps);
                assert!(r.bijection && r.triangle_identities);
            }
        }
    }

    #[test]
    fn adjunction_with_trivial_actions_counts_plain_functors() {
        let a = Arc::new(chain(1));
        let b = Arc::new(chain(2));
        let y = phi(&GCategory::trivial(c2(), a.clone()));
        let x = GCategory::trivial(c2(), b.clone());
        let r = verify_adjunction(&y, &x, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(r.gcat_maps, all_functors(&a, &b, DEFAULT_SEARCH_BUDGET).unwrap().len());
    }

    #[test]
    fn tensor_examples() {
        let x = swapped_points();
        assert_eq!(x.base().num_objects(), 2);
        assert_eq!(x.act_object(1, 0), 1);
        let g = c2();
        let pt = coset_gset(&g, &g.whole()).unwrap();
        let t = tensor(&pt, &chain(2));
        assert!(find_isomorphism(t.base(), &Arc::new(chain(2)), DEFAULT_SEARCH_BUDGET).unwrap().is_some());
        assert_eq!(*t.sigma(1), FinFunctor::identity(t.base().clone()));

        let s3 = Arc::new(FinGroup::symmetric3());
        let k = subgroups(&s3).into_iter().find(|h| h.order() == 2).unwrap();
        let three = tensor(&coset_gset(&s3, &k).unwrap(), &chain(1));
        assert_eq!(three.base().num_objects(), 6);
        assert_eq!(three.base().num_morphisms(), 9);
        // Every element permutes the three copies as it permutes the cosets.
        let gk = coset_gset(&s3, &k).unwrap();
        for e in 0..6 {
            for p in 0..3 {
                let obj = three.base().obj(&tensor_object_id(&gk.points[p], "0")).unwrap();
                let img = three.base().object_id(three.act_object(e, obj)).to_string();
                assert_eq!(img, tensor_object_id(&gk.points[gk.act(e, p)], "0"));
            }
        }
    }

    #[test]
    fn tensor_fixed_point_comparison() {
        let g = c2();
        let r = fixed_tensor_compare(&g, &g.trivial_subgroup(), &g.whole(), &chain(1)).unwrap();
        assert_eq!((r.lhs_objects, r.rhs_objects), (0, 0));
        let r = fixed_tensor_compare(&g, &g.trivial_subgroup(), &g.trivial_subgroup(), &chain(1)).unwrap();
        assert_eq!((r.lhs_objects, r.lhs_morphisms), (4, 6));
        let s3 = Arc::new(FinGroup::symmetric3());
        let c3 = subgroups(&s3).into_iter().find(|h| h.order() == 3).unwrap();
        let r = fixed_tensor_compare(&s3, &c3, &c3, &FinCat::terminal()).unwrap();
        assert_eq!((r.fixed_points, r.lhs_objects, r.rhs_objects), (2, 2, 2));
    }

    #[test]
    fn fixed_points_are_monotone_in_the_subgroup() {
        let s3 = Arc::new(FinGroup::symmetric3());
        let subs = subgroups(&s3);
        let x = tensor(&coset_gset(&s3, &subs[1]).unwrap(), &chain(1));
        for k in &subs {
            for h in &subs {
                if k.is_subset_of(h) {
                    let big = Arc::new(fixed_category(&x, k));
                    let small = Arc::new(fixed_category(&x, h));
                    assert!(FinFunctor::inclusion(small, big).is_ok());
                }
            }
        }
    }

    #[test]
    fn phi_commutes_with_pullbacks() {
        let x = swapped_square();
        let z = GCategory::trivial(c2(), Arc::new(FinCat::terminal()));
        let f = FinFunctor::constant(x.base().clone(), z.base().clone(), 0);
        let (p, _, _) = gcat_pullback(&f, &x, &f, &x, &z).unwrap();
        let g = x.group().clone();
        for h in subgroups(&g) {
            let lhs = Arc::new(fixed_category(&p, &h));
            let xh = Arc::new(fixed_category(&x, &h));
            let zh = Arc::new(fixed_category(&z, &h));
            let fh = f.restrict(xh.clone(), zh).unwrap();
            let rhs = pullback(&fh, &fh).unwrap();
            assert!(find_isomorphism(&lhs, &rhs.category, DEFAULT_SEARCH_BUDGET).unwrap().is_some());
        }
    }
}
