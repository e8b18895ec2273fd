//! Finite groups as Cayley tables, subgroup enumeration, coset G-sets and the
//! orbit category.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::fincat::{CatBuilder, FinCat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("malformed Cayley table: {0}")]
    Malformed(String),
    #[error("multiplication is not associative at ({0}, {1}, {2})")]
    NonAssociative(String, String, String),
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element `{0}` has no inverse")]
    NoInverse(String),
    #[error("subset is not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("action violates {0}")]
    BadAction(String),
}

/// A finite group given by its multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct FinGroup {
    elements: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    index: HashMap<String, usize>,
}

impl fmt::Debug for FinGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinGroup{:?}", self.elements)
    }
}

/// Validates a Cayley table given by element ids: `table[i][j]` is the id of
/// `elements[i] * elements[j]`.
pub fn validate_group(elements: &[String], table: &[Vec<String>]) -> Result<FinGroup, GroupError> {
    let n = elements.len();
    let mut index = HashMap::new();
    for (i, e) in elements.iter().enumerate() {
        if index.insert(e.clone(), i).is_some() {
            return Err(GroupError::Malformed(format!("duplicate element `{e}`")));
        }
    }
    if table.len() != n || table.iter().any(|r| r.len() != n) {
        return Err(GroupError::Malformed("table is not square over the element list".into()));
    }
    let mut t = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            t[i][j] = *index
                .get(&table[i][j])
                .ok_or_else(|| GroupError::Malformed(format!("unknown element `{}`", table[i][j])))?;
        }
    }
    FinGroup::from_table(elements.to_vec(), t)
}

impl FinGroup {
    pub fn from_table(elements: Vec<String>, table: Vec<Vec<usize>>) -> Result<FinGroup, GroupError> {
        let n = elements.len();
        if n == 0 {
            return Err(GroupError::NoIdentity);
        }
        if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(GroupError::Malformed("table is not square over the element list".into()));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(GroupError::NonAssociative(elements[a].clone(), elements[b].clone(), elements[c].clone()));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(GroupError::NoIdentity)?;
        let mut inverse = vec![0; n];
        for x in 0..n {
            inverse[x] = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or_else(|| GroupError::NoInverse(elements[x].clone()))?;
        }
        let index = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        Ok(FinGroup { elements, table, identity, inverse, index })
    }

    /// The cyclic group of order `n`, elements `e, r, r2, ...`.
    pub fn cyclic(n: usize) -> FinGroup {
        assert!(n >= 1);
        let names = (0..n)
            .map(|k| match k {
                0 => "e".to_string(),
                1 => "r".to_string(),
                _ => format!("r{k}"),
            })
            .collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FinGroup::from_table(names, table).expect("cyclic group")
    }

    /// Group generated by permutations of `{0..degree}`, elements named in
    /// cycle notation. Composition `(p * q)(x) = p(q(x))`.
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>]) -> FinGroup {
        let id: Vec<usize> = (0..degree).collect();
        let mut elems = vec![id.clone()];
        let mut seen: BTreeSet<Vec<usize>> = elems.iter().cloned().collect();
        let mut frontier = elems.clone();
        while let Some(p) = frontier.pop() {
            for g in generators {
                let q: Vec<usize> = (0..degree).map(|x| g[p[x]]).collect();
                if seen.insert(q.clone()) {
                    elems.push(q.clone());
                    frontier.push(q);
                }
            }
        }
        elems[1..].sort_by(|a, b| cycle_name(a).len().cmp(&cycle_name(b).len()).then(cycle_name(a).cmp(&cycle_name(b))));
        let pos: HashMap<Vec<usize>, usize> = elems.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let table = elems
            .iter()
            .map(|p| elems.iter().map(|q| pos[&(0..degree).map(|x| p[q[x]]).collect::<Vec<_>>()]).collect())
            .collect();
        FinGroup::from_table(elems.iter().map(|p| cycle_name(p)).collect(), table).expect("permutation group")
    }

    pub fn symmetric3() -> FinGroup {
        FinGroup::from_permutations(3, &[vec![1, 0, 2], vec![1, 2, 0]])
    }

    /// Dihedral group of order `2n` acting on an `n`-gon.
    pub fn dihedral(n: usize) -> FinGroup {
        let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        FinGroup::from_permutations(n, &[rot, refl])
    }

    /// Quaternion group of order 8.
    pub fn quaternion() -> FinGroup {
        // Units ±1, ±i, ±j, ±k encoded as (sign, axis) with axis 0 = 1.
        let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"];
        let enc = |s: usize| (s % 2, s / 2);
        let dec = |neg: usize, axis: usize| axis * 2 + neg;
        let unit = |a: usize, b: usize| -> (usize, usize) {
            match (a, b) {
                (0, x) | (x, 0) => (0, x),
                (x, y) if x == y => (1, 0),
                (1, 2) => (0, 3),
                (2, 3) => (0, 1),
                (3, 1) => (0, 2),
                (2, 1) => (1, 3),
                (3, 2) => (1, 1),
                (1, 3) => (1, 2),
                _ => unreachable!(),
            }
        };
        let table = (0..8)
            .map(|p| {
                (0..8)
                    .map(|q| {
                        let ((sa, a), (sb, b)) = (enc(p), enc(q));
                        let (s, c) = unit(a, b);
                        dec((sa + sb + s) % 2, c)
                    })
                    .collect()
            })
            .collect();
        FinGroup::from_table(names.iter().map(|s| s.to_string()).collect(), table).expect("quaternion group")
    }

    pub fn direct_product(a: &FinGroup, b: &FinGroup) -> FinGroup {
        let (n, m) = (a.order(), b.order());
        let mut order: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..m).map(move |j| (i, j))).collect();
        // Identity first.
        order.sort_by_key(|&(i, j)| (i != a.identity || j != b.identity, i, j));
        let pos: HashMap<(usize, usize), usize> = order.iter().copied().enumerate().map(|(k, p)| (p, k)).collect();
        let names = order
            .iter()
            .map(|&(i, j)| format!("({},{})", a.elements[i], b.elements[j]))
            .collect();
        let table = order
            .iter()
            .map(|&(i, j)| order.iter().map(|&(k, l)| pos[&(a.table[i][k], b.table[j][l])]).collect())
            .collect();
        FinGroup::from_table(names, table).expect("direct product")
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn element_id(&self, g: usize) -> &str {
        &self.elements[g]
    }

    pub fn element(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// Cayley table by ids, the interchange shape.
    pub fn table_ids(&self) -> Vec<Vec<String>> {
        self.table.iter().map(|r| r.iter().map(|&x| self.elements[x].clone()).collect()).collect()
    }

    /// Smallest subgroup containing `gens`.
    pub fn generated(&self, gens: &[usize]) -> Subgroup {
        let mut set: BTreeSet<usize> = BTreeSet::from([self.identity]);
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        Subgroup { elements: set.into_iter().collect() }
    }

    /// Validates a subset as a subgroup.
    pub fn subgroup(&self, elements: &[usize]) -> Result<Subgroup, GroupError> {
        let set: BTreeSet<usize> = elements.iter().copied().collect();
        if set.iter().any(|&x| x >= self.order()) {
            return Err(GroupError::NotASubgroup("unknown element".into()));
        }
        if !set.contains(&self.identity) {
            return Err(GroupError::NotASubgroup("missing identity".into()));
        }
        for &a in &set {
            for &b in &set {
                if !set.contains(&self.mul(a, b)) {
                    return Err(GroupError::NotASubgroup(format!(
                        "{} * {} leaves the subset",
                        self.elements[a], self.elements[b]
                    )));
                }
            }
        }
        Ok(Subgroup { elements: set.into_iter().collect() })
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { elements: vec![self.identity] }
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup { elements: (0..self.order()).collect() }
    }

    /// `g H g⁻¹`.
    pub fn conjugate(&self, h: &Subgroup, g: usize) -> Subgroup {
        let gi = self.inv(g);
        let mut e: Vec<usize> = h.elements.iter().map(|&x| self.mul(self.mul(g, x), gi)).collect();
        e.sort_unstable();
        Subgroup { elements: e }
    }
}

fn cycle_name(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            out.push_str(&x.to_string());
            x = p[x];
        }
        out.push(')');
    }
    if out.is_empty() {
        "e".into()
    } else {
        out
    }
}

/// A subgroup as a sorted element subset of its ambient group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }
}

/// Every subgroup of `g`, sorted by order then elements. The first entry is
/// the trivial subgroup and the last is `g` itself.
pub fn subgroups(g: &FinGroup) -> Vec<Subgroup> {
    let mut found: BTreeSet<Subgroup> = (0..g.order()).map(|x| g.generated(&[x])).collect();
    loop {
        let current: Vec<Subgroup> = found.iter().cloned().collect();
        let mut grew = false;
        for (i, a) in current.iter().enumerate() {
            for b in &current[i + 1..] {
                let gens: Vec<usize> = a.elements.iter().chain(b.elements.iter()).copied().collect();
                if found.insert(g.generated(&gens)) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let mut out: Vec<Subgroup> = found.into_iter().collect();
    out.sort_by(|a, b| a.order().cmp(&b.order()).then(a.elements.cmp(&b.elements)));
    out
}

/// A finite set with a left action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GSet {
    pub group: Arc<FinGroup>,
    pub points: Vec<String>,
    /// `action[g][x]` is `g · x`.
    pub action: Vec<Vec<usize>>,
}

impl GSet {
    pub fn new(group: Arc<FinGroup>, points: Vec<String>, action: Vec<Vec<usize>>) -> Result<GSet, GroupError> {
        let n = points.len();
        if action.len() != group.order() || action.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(GroupError::Malformed("action table shape".into()));
        }
        if (0..n).any(|x| action[group.identity()][x] != x) {
            return Err(GroupError::BadAction("e·x = x".into()));
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                for x in 0..n {
                    if action[g][action[h][x]] != action[group.mul(g, h)][x] {
                        return Err(GroupError::BadAction("g·(h·x) = (gh)·x".into()));
                    }
                }
            }
        }
        Ok(GSet { group, points, action })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action[g][x]
    }
}

/// Left cosets `gK` ordered by least element, labelled `<rep>K`.
pub fn cosets(g: &FinGroup, k: &Subgroup) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut seen = vec![false; g.order()];
    for x in 0..g.order() {
        if seen[x] {
            continue;
        }
        let mut c: Vec<usize> = k.elements.iter().map(|&y| g.mul(x, y)).collect();
        c.sort_unstable();
        for &y in &c {
            seen[y] = true;
        }
        out.push(c);
    }
    out
}

/// The G-set `G/K` of left cosets with `h·(gK) = (hg)K`.
pub fn coset_gset(g: &Arc<FinGroup>, k: &Subgroup) -> Result<GSet, GroupError> {
    g.subgroup(k.elements())?;
    let cs = cosets(g, k);
    let mut which = vec![0; g.order()];
    for (i, c) in cs.iter().enumerate() {
        for &x in c {
            which[x] = i;
        }
    }
    let points = cs.iter().map(|c| format!("{}K", g.element_id(c[0]))).collect();
    let action = (0..g.order())
        .map(|h| cs.iter().map(|c| which[g.mul(h, c[0])]).collect())
        .collect();
    GSet::new(g.clone(), points, action)
}

/// Points fixed by every element of `h`.
pub fn gset_fixed_points(x: &GSet, h: &Subgroup) -> Vec<usize> {
    (0..x.len()).filter(|&p| h.elements().iter().all(|&g| x.act(g, p) == p)).collect()
}

/// Which coset of `k` a morphism is named by, together with its endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OrbitMorphism {
    pub source: usize,
    pub target: usize,
    /// Least element of the naming coset `gK`.
    pub rep: usize,
}

/// The orbit category: one object `G/H` per subgroup, morphisms the
/// equivariant maps. The map named by the coset `gK` sends `xH ↦ xgK`.
#[derive(Clone, Debug)]
pub struct OrbitCategory {
    group: Arc<FinGroup>,
    subgroups: Vec<Subgroup>,
    category: Arc<FinCat>,
    names: Vec<OrbitMorphism>,
    lookup: HashMap<OrbitMorphism, usize>,
    coset_rep: Vec<Vec<usize>>,
}

pub fn orbit_category(g: &Arc<FinGroup>) -> OrbitCategory {
    let subs = subgroups(g);
    let n = subs.len();
    // coset_rep[k][x]: least element of x·K_k.
    let coset_rep: Vec<Vec<usize>> = subs
        .iter()
        .map(|k| (0..g.order()).map(|x| k.elements.iter().map(|&y| g.mul(x, y)).min().expect("nonempty")).collect())
        .collect();
    let mut b = CatBuilder::new();
    for i in 0..n {
        b.add_object(format!("G/H{i}"));
    }
    let mut names = Vec::new();
    let mut lookup = HashMap::new();
    let mut index_of: HashMap<OrbitMorphism, usize> = HashMap::new();
    for (hi, h) in subs.iter().enumerate() {
        for (ki, k) in subs.iter().enumerate() {
            let mut reps: Vec<usize> = (0..g.order()).map(|x| coset_rep[ki][x]).collect();
            reps.sort_unstable();
            reps.dedup();
            for rep in reps {
                let gi = g.inv(rep);
                if !h.elements.iter().all(|&x| k.contains(g.mul(g.mul(gi, x), rep))) {
                    continue;
                }
                let name = OrbitMorphism { source: hi, target: ki, rep };
                let m = if hi == ki && rep == coset_rep[ki][g.identity()] {
                    b.identity(hi)
                } else {
                    b.add_morphism(format!("G/H{hi}->G/H{ki}:{}", g.element_id(rep)), hi, ki)
                };
                index_of.insert(name, m);
                names.push((m, name));
            }
        }
    }
    // Composite of (gK: H→K) then (g'L: K→L) is named by gg'L.
    let pairs = names.clone();
    for &(m1, a) in &pairs {
        for &(m2, c) in &pairs {
            if a.target != c.source {
                continue;
            }
            let rep = coset_rep[c.target][g.mul(a.rep, c.rep)];
            let comp = index_of[&OrbitMorphism { source: a.source, target: c.target, rep }];
            b.set_composite(m2, m1, comp);
        }
    }
    let category = Arc::new(b.build().expect("orbit category"));
    let mut ordered = vec![OrbitMorphism { source: 0, target: 0, rep: 0 }; category.num_morphisms()];
    for (m, name) in pairs {
        ordered[m] = name;
        lookup.insert(name, m);
    }
    OrbitCategory { group: g.clone(), subgroups: subs, category, names: ordered, lookup, coset_rep }
}

impl OrbitCategory {
    pub fn group(&self) -> &Arc<FinGroup> {
        &self.group
    }

    pub fn category(&self) -> &Arc<FinCat> {
        &self.category
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn subgroup_label(&self, i: usize) -> String {
        format!("H{i}")
    }

    pub fn subgroup_index(&self, h: &Subgroup) -> Option<usize> {
        self.subgroups.iter().position(|s| s == h)
    }

    pub fn trivial_index(&self) -> usize {
        0
    }

    pub fn whole_index(&self) -> usize {
        self.subgroups.len() - 1
    }

    pub fn name(&self, m: usize) -> OrbitMorphism {
        self.names[m]
    }

    /// The morphism `G/H_source → G/H_target` named by the coset of `g`.
    pub fn named(&self, source: usize, target: usize, g: usize) -> Option<usize> {
        let rep = self.coset_rep[target][g];
        self.lookup.get(&OrbitMorphism { source, target, rep }).copied()
    }

    /// The automorphism of `G/e` named by `g`, i.e. `x ↦ xg`.
    pub fn automorphism(&self, g: usize) -> usize {
        let e = self.trivial_index();
        self.named(e, e, g).expect("every element names an automorphism of G/e")
    }

    /// The projection `G/e → G/H`, `x ↦ xH`.
    pub fn projection(&self, h: usize) -> usize {
        self.named(self.trivial_index(), h, self.group.identity()).expect("projection")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_subgroups(g: &FinGroup) -> usize {
        let n = g.order();
        (0u32..(1 << n)).filter(|mask| {
            let els: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            g.subgroup(&els).is_ok()
        }).count()
    }

    /// Counts equivariant maps `G/H → G/K` by enumerating all functions.
    fn brute_force_equivariant(g: &Arc<FinGroup>, h: &Subgroup, k: &Subgroup) -> usize {
        let a = coset_gset(g, h).unwrap();
        let b = coset_gset(g, k).unwrap();
        let (n, m) = (a.len(), b.len());
        let total = m.pow(n as u32);
        (0..total)
            .filter(|&code| {
                let f: Vec<usize> = (0..n).map(|i| (code / m.pow(i as u32)) % m).collect();
                (0..g.order()).all(|x| (0..n).all(|p| f[a.act(x, p)] == b.act(x, f[p])))
            })
            .count()
    }

    #[test]
    fn validates_small_groups() {
        let c2 = FinGroup::cyclic(2);
        assert!(validate_group(c2.elements(), &c2.table_ids()).is_ok());
        let s3 = FinGroup::symmetric3();
        assert_eq!(s3.order(), 6);
        assert!(validate_group(s3.elements(), &s3.table_ids()).is_ok());
    }

    #[test]
    fn non_invertible_row_is_rejected() {
        let els = vec!["e".to_string(), "a".to_string()];
        let t = vec![vec!["e".to_string(), "a".to_string()], vec!["a".to_string(), "a".to_string()]];
        assert_eq!(validate_group(&els, &t), Err(GroupError::NoInverse("a".into())));
    }

    #[test]
    fn subgroup_counts_match_brute_force() {
        for (g, expected) in [(FinGroup::cyclic(2), 2), (FinGroup::symmetric3(), 6), (FinGroup::cyclic(4), 3)] {
            assert_eq!(brute_force_subgroups(&g), expected);
            assert_eq!(subgroups(&g).len(), expected);
        }
        for g in [FinGroup::dihedral(4), FinGroup::quaternion(), FinGroup::direct_product(&FinGroup::cyclic(2), &FinGroup::cyclic(4))] {
            assert_eq!(subgroups(&g).len(), brute_force_subgroups(&g));
        }
    }

    #[test]
    fn subgroups_are_closed_under_conjugation() {
        for g in [FinGroup::symmetric3(), FinGroup::dihedral(4), FinGroup::quaternion()] {
            let subs = subgroups(&g);
            for h in &subs {
                for x in 0..g.order() {
                    assert!(subs.contains(&g.conjugate(h, x)));
                }
            }
        }
    }

    #[test]
    fn coset_gsets() {
        let c2 = Arc::new(FinGroup::cyclic(2));
        let free = coset_gset(&c2, &c2.trivial_subgroup()).unwrap();
        assert_eq!(free.len(), 2);
        assert_eq!(free.act(1, 0), 1);
        let s3 = Arc::new(FinGroup::symmetric3());
        let order2 = subgroups(&s3).into_iter().find(|h| h.order() == 2).unwrap();
        assert_eq!(coset_gset(&s3, &order2).unwrap().len(), 3);
        let pt = coset_gset(&s3, &s3.whole()).unwrap();
        assert_eq!(pt.len(), 1);
        assert!(matches!(coset_gset(&s3, &Subgroup { elements: vec![0, 1, 2] }), Err(GroupError::NotASubgroup(_))));
    }

    #[test]
    fn fixed_points_of_cosets() {
        let c2 = Arc::new(FinGroup::cyclic(2));
        let free = coset_gset(&c2, &c2.trivial_subgroup()).unwrap();
        assert!(gset_fixed_points(&free, &c2.whole()).is_empty());
        let pt = coset_gset(&c2, &c2.whole()).unwrap();
        assert_eq!(gset_fixed_points(&pt, &c2.whole()), vec![0]);
        assert_eq!(gset_fixed_points(&free, &c2.trivial_subgroup()).len(), 2);
    }

    #[test]
    fn orbit_category_of_c2() {
        let c2 = Arc::new(FinGroup::cyclic(2));
        let o = orbit_category(&c2);
        let c = o.category();
        let (e, g) = (o.trivial_index(), o.whole_index());
        assert_eq!(c.hom(e, e).len(), 2);
        assert_eq!(c.hom(e, g).len(), 1);
        assert_eq!(c.hom(g, e).len(), 0);
        assert_eq!(c.hom(g, g).len(), 1);
    }

    #[test]
    fn orbit_hom_sets_match_equivariant_maps_and_fixed_points() {
        for g in [FinGroup::cyclic(2), FinGroup::cyclic(4), FinGroup::symmetric3(), FinGroup::dihedral(4), FinGroup::quaternion()] {
            let g = Arc::new(g);
            let o = orbit_category(&g);
            let subs = o.subgroups();
            for (hi, h) in subs.iter().enumerate() {
                for (ki, k) in subs.iter().enumerate() {
                    let homs = o.category().hom(hi, ki).len();
                    let fixed = gset_fixed_points(&coset_gset(&g, k).unwrap(), h).len();
                    assert_eq!(homs, fixed);
                    if g.order() <= 6 {
                        assert_eq!(homs, brute_force_equivariant(&g, h, k));
                    }
                }
            }
            assert_eq!(o.category().hom(0, 0).len(), g.order());
        }
    }

    #[test]
    fn automorphisms_of_free_orbit_compose_opposite() {
        let g = Arc::new(FinGroup::symmetric3());
        let o = orbit_category(&g);
        for a in 0..g.order() {
            for b in 0..g.order() {
                // a_b ∘ a_a is named by ab.
                let comp = o.category().compose(o.automorphism(b), o.automorphism(a)).unwrap();
                assert_eq!(comp, o.automorphism(g.mul(a, b)));
            }
        }
    }

    #[test]
    fn s3_orbit_category_has_six_objects() {
        let o = orbit_category(&Arc::new(FinGroup::symmetric3()));
        assert_eq!(o.category().num_objects(), 6);
    }
}
