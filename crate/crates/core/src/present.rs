//! Categories presented by a directed graph and path relations.
//!
//! The graph must be acyclic, so the free category on it is finite. The
//! congruence generated by the relations is computed exactly: a union-find
//! over all paths, closed under pre- and post-composition with single edges.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use thiserror::Error;

use crate::fincat::{CatBuilder, FinCat, FinFunctor, FunctorError};

/// Default limit on congruence pairs processed during closure.
pub const DEFAULT_CLOSURE_BUDGET: u64 = 100_000;

const MAX_PATHS: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub start: usize,
    pub edges: Vec<usize>,
}

impl Path {
    pub fn empty(v: usize) -> Path {
        Path { start: v, edges: Vec::new() }
    }

    pub fn edge(p: &Presentation, e: usize) -> Path {
        Path { start: p.edges[e].src, edges: vec![e] }
    }

    pub fn end(&self, p: &Presentation) -> usize {
        self.edges.last().map(|&e| p.edges[e].tgt).unwrap_or(self.start)
    }

    pub fn then(&self, other: &Path) -> Path {
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Path { start: self.start, edges }
    }
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub id: String,
    pub src: usize,
    pub tgt: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentError {
    #[error("presentation graph has a cycle through `{0}`")]
    Cyclic(String),
    #[error("congruence closure exceeded its budget of {0} pairs")]
    ClosureBudgetExceeded(u64),
    #[error("malformed relation: {0}")]
    Malformed(String),
}

/// Graph plus relations between parallel paths.
#[derive(Clone, Debug, Default)]
pub struct Presentation {
    pub vertices: Vec<String>,
    pub edges: Vec<Edge>,
    pub relations: Vec<(Path, Path)>,
}

/// The presented category with its path bookkeeping.
#[derive(Clone, Debug)]
pub struct Presented {
    pub category: Arc<FinCat>,
    /// Morphism of `category` named by each generating edge.
    pub edge_morphism: Vec<usize>,
    paths: Vec<Path>,
    path_index: HashMap<Path, usize>,
    path_morphism: Vec<usize>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
}

impl Presentation {
    pub fn add_vertex(&mut self, id: impl Into<String>) -> usize {
        self.vertices.push(id.into());
        self.vertices.len() - 1
    }

    pub fn add_edge(&mut self, id: impl Into<String>, src: usize, tgt: usize) -> usize {
        self.edges.push(Edge { id: id.into(), src, tgt });
        self.edges.len() - 1
    }

    pub fn relate(&mut self, a: Path, b: Path) {
        self.relations.push((a, b));
    }

    fn topological_check(&self) -> Result<(), PresentError> {
        let n = self.vertices.len();
        let mut indeg = vec![0usize; n];
        let mut succ = vec![Vec::new(); n];
        for e in &self.edges {
            if e.src == e.tgt {
                return Err(PresentError::Cyclic(self.vertices[e.src].clone()));
            }
            succ[e.src].push(e.tgt);
            indeg[e.tgt] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &w in &succ[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
        if seen != n {
            let v = (0..n).find(|&v| indeg[v] > 0).unwrap_or(0);
            return Err(PresentError::Cyclic(self.vertices[v].clone()));
        }
        Ok(())
    }

    fn check_path(&self, p: &Path) -> Result<(), PresentError> {
        if p.start >= self.vertices.len() {
            return Err(PresentError::Malformed("unknown start vertex".into()));
        }
        let mut at = p.start;
        for &e in &p.edges {
            let edge = self.edges.get(e).ok_or_else(|| PresentError::Malformed("unknown edge".into()))?;
            if edge.src != at {
                return Err(PresentError::Malformed(format!("edge `{}` does not continue the path", edge.id)));
            }
            at = edge.tgt;
        }
        Ok(())
    }

    /// Computes the presented category.
    pub fn present(&self, budget: u64) -> Result<Presented, PresentError> {
        self.topological_check()?;
        for (a, b) in &self.relations {
            self.check_path(a)?;
            self.check_path(b)?;
            if a.start != b.start || a.end(self) != b.end(self) {
                return Err(PresentError::Malformed("related paths are not parallel".into()));
            }
        }
        let n = self.vertices.len();
        let mut out_edges = vec![Vec::new(); n];
        let mut in_edges = vec![Vec::new(); n];
        for (i, e) in self.edges.iter().enumerate() {
            out_edges[e.src].push(i);
            in_edges[e.tgt].push(i);
        }

        let mut paths = Vec::new();
        let mut stack: Vec<Path> = (0..n).map(Path::empty).collect();
        stack.reverse();
        while let Some(p) = stack.pop() {
            let end = p.end(self);
            for &e in out_edges[end].iter().rev() {
                let mut q = p.clone();
                q.edges.push(e);
                stack.push(q);
            }
            paths.push(p);
            if paths.len() > MAX_PATHS {
                return Err(PresentError::ClosureBudgetExceeded(budget));
            }
        }
        let path_index: HashMap<Path, usize> = paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();

        let mut uf = UnionFind { parent: (0..paths.len()).collect() };
        let mut pending: VecDeque<(usize, usize)> = self.relations.iter().map(|(a, b)| (path_index[a], path_index[b])).collect();
        let mut processed = 0u64;
        while let Some((p, q)) = pending.pop_front() {
            processed += 1;
            if processed > budget {
                return Err(PresentError::ClosureBudgetExceeded(budget));
            }
            let (rp, rq) = (uf.find(p), uf.find(q));
            if rp == rq {
                continue;
            }
            uf.parent[rq] = rp;
            let (pp, qq) = (&paths[p], &paths[q]);
            for &e in &in_edges[pp.start] {
                let ep = Path { start: self.edges[e].src, edges: std::iter::once(e).chain(pp.edges.iter().copied()).collect() };
                let eq = Path { start: self.edges[e].src, edges: std::iter::once(e).chain(qq.edges.iter().copied()).collect() };
                pending.push_back((path_index[&ep], path_index[&eq]));
            }
            for &e in &out_edges[pp.end(self)] {
                let mut pe = pp.clone();
                pe.edges.push(e);
                let mut qe = qq.clone();
                qe.edges.push(e);
                pending.push_back((path_index[&pe], path_index[&qe]));
            }
        }

        // Representative of each class: shortest, then lexicographically least.
        let mut rep: HashMap<usize, usize> = HashMap::new();
        for i in 0..paths.len() {
            let r = uf.find(i);
            let entry = rep.entry(r).or_insert(i);
            let cur = &paths[*entry];
            if (paths[i].edges.len(), &paths[i].edges) < (cur.edges.len(), &cur.edges) {
                *entry = i;
            }
        }
        let mut b = CatBuilder::new();
        for v in &self.vertices {
            b.add_object(v.clone());
        }
        let mut class_morphism: HashMap<usize, usize> = HashMap::new();
        let mut roots: Vec<usize> = rep.keys().copied().collect();
        roots.sort_by_key(|r| &paths[rep[r]]);
        for &r in &roots {
            let p = &paths[rep[&r]];
            let m = if p.edges.is_empty() {
                b.identity(p.start)
            } else {
                let id = p.edges.iter().map(|&e| self.edges[e].id.as_str()).collect::<Vec<_>>().join(";");
                b.add_fresh_morphism(&id, p.start, p.end(self))
            };
            class_morphism.insert(r, m);
        }
        let mut by_src: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &r in &roots {
            by_src[paths[rep[&r]].start].push(r);
        }
        for &r1 in &roots {
            let p1 = &paths[rep[&r1]];
            for &r2 in &by_src[p1.end(self)] {
                let p2 = &paths[rep[&r2]];
                let joined = path_index[&p1.then(p2)];
                let r = uf.find(joined);
                b.set_composite(class_morphism[&r2], class_morphism[&r1], class_morphism[&r]);
            }
        }
        let category = Arc::new(b.build().expect("quotient of a free category is a category"));
        let path_morphism: Vec<usize> = (0..paths.len()).map(|i| class_morphism[&uf.find(i)]).collect();
        let edge_morphism = (0..self.edges.len()).map(|e| path_morphism[path_index[&Path::edge(self, e)]]).collect();
        Ok(Presented { category, edge_morphism, paths, path_index, path_morphism })
    }
}

impl Presented {
    /// Morphism represented by a path, if the path exists.
    pub fn class_of(&self, p: &Path) -> Option<usize> {
        self.path_index.get(p).map(|&i| self.path_morphism[i])
    }

    pub fn num_paths(&self) -> usize {
        self.paths.len()
    }

    /// The functor induced by sending vertices and edges into `target`.
    /// Fails if the images do not respect the relations.
    pub fn functor_from_generators(
        &self,
        target: Arc<FinCat>,
        vertex_map: &[usize],
        edge_map: &[usize],
        presentation: &Presentation,
    ) -> Result<FinFunctor, FunctorError> {
        let mut mor_map = vec![None; self.category.num_morphisms()];
        for (i, p) in self.paths.iter().enumerate() {
            let mut m = target.identity(vertex_map[p.start]);
            for &e in &p.edges {
                let (s, t) = (presentation.edges[e].src, presentation.edges[e].tgt);
                let img = edge_map[e];
                if target.src(img) != vertex_map[s] || target.tgt(img) != vertex_map[t] {
                    return Err(FunctorError::Invalid(vec![crate::fincat::FunctorViolation::EndpointMismatch(
                        presentation.edges[e].id.clone(),
                    )]));
                }
                m = target.compose(img, m).expect("endpoints checked");
            }
            let k = self.path_morphism[i];
            match mor_map[k] {
                None => mor_map[k] = Some(m),
                Some(prev) if prev != m => {
                    return Err(FunctorError::Invalid(vec![crate::fincat::FunctorViolation::CompositionNotPreserved {
                        g: self.category.morphism_id(k).to_string(),
                        f: "relation".into(),
                    }]))
                }
                _ => {}
            }
        }
        let om = vertex_map.to_vec();
        let mm = mor_map.into_iter().map(|m| m.expect("every class has a path")).collect();
        FinFunctor::new(self.category.clone(), target, om, mm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commutative_square_identifies_paths() {
        let mut p = Presentation::default();
        let v: Vec<usize> = ["a", "b", "c", "d"].iter().map(|s| p.add_vertex(*s)).collect();
        let ab = p.add_edge("ab", v[0], v[1]);
        let bd = p.add_edge("bd", v[1], v[3]);
        let ac = p.add_edge("ac", v[0], v[2]);
        let cd = p.add_edge("cd", v[2], v[3]);
        p.relate(Path { start: v[0], edges: vec![ab, bd] }, Path { start: v[0], edges: vec![ac, cd] });
        let pr = p.present(DEFAULT_CLOSURE_BUDGET).unwrap();
        // 4 identities + 4 edges + 1 diagonal.
        assert_eq!(pr.category.num_morphisms(), 9);
        assert!(pr.category.is_poset());
    }

    #[test]
    fn free_square_keeps_two_diagonals() {
        let mut p = Presentation::default();
        let v: Vec<usize> = ["a", "b", "c", "d"].iter().map(|s| p.add_vertex(*s)).collect();
        p.add_edge("ab", v[0], v[1]);
        p.add_edge("bd", v[1], v[3]);
        p.add_edge("ac", v[0], v[2]);
        p.add_edge("cd", v[2], v[3]);
        let pr = p.present(DEFAULT_CLOSURE_BUDGET).unwrap();
        assert_eq!(pr.category.num_morphisms(), 10);
        assert_eq!(pr.category.hom(0, 3).len(), 2);
    }

    #[test]
    fn whiskering_propagates() {
        // x -> a => b -> y with the two a=>b edges identified.
        let mut p = Presentation::default();
        let v: Vec<usize> = ["x", "a", "b", "y"].iter().map(|s| p.add_vertex(*s)).collect();
        let xa = p.add_edge("xa", v[0], v[1]);
        let f = p.add_edge("f", v[1], v[2]);
        let g = p.add_edge("g", v[1], v[2]);
        let by = p.add_edge("by", v[2], v[3]);
        p.relate(Path::edge(&p, f), Path::edge(&p, g));
        let pr = p.present(DEFAULT_CLOSURE_BUDGET).unwrap();
        assert_eq!(pr.category.hom(0, 3).len(), 1);
        assert_eq!(
            pr.class_of(&Path { start: 0, edges: vec![xa, f, by] }),
            pr.class_of(&Path { start: 0, edges: vec![xa, g, by] })
        );
    }

    #[test]
    fn cycles_are_rejected() {
        let mut p = Presentation::default();
        let a = p.add_vertex("a");
        let b = p.add_vertex("b");
        p.add_edge("f", a, b);
        p.add_edge("g", b, a);
        assert!(matches!(p.present(DEFAULT_CLOSURE_BUDGET), Err(PresentError::Cyclic(_))));
    }

    #[test]
    fn budget_is_enforced() {
        let mut p = Presentation::default();
        let a = p.add_vertex("a");
        let b = p.add_vertex("b");
        let f = p.add_edge("f", a, b);
        let g = p.add_edge("g", a, b);
        p.relate(Path::edge(&p, f), Path::edge(&p, g));
        assert!(matches!(p.present(0), Err(PresentError::ClosureBudgetExceeded(0))));
    }
}
