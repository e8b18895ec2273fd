//! Integer simplicial homology over the normalized chain complex.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::fincat::FinFunctor;
use crate::sset::{nerve, SimplexRef, TruncSSet};

#[derive(Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect()).collect();
        write!(f, "{}x{} {:?}", self.rows, self.cols, rows)
    }
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntegerMatrix {
        IntegerMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: &[Vec<i64>]) -> IntegerMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = IntegerMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, BigInt::from(v));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntegerMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "square matrix required");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += k · row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(src, j) * k;
            if !v.is_zero() {
                self.data[dst * self.cols + j] += v;
            }
        }
    }

    /// col[dst] += k · col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, src) * k;
            if !v.is_zero() {
                self.data[i * self.cols + dst] += v;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let idx = r * self.cols + j;
            self.data[idx] = -&self.data[idx];
        }
    }

    /// Diagonal with nonnegative entries, each dividing the next nonzero one.
    pub fn is_smith_form(&self) -> bool {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j && !self.get(i, j).is_zero() {
                    return false;
                }
            }
        }
        let diag: Vec<&BigInt> = (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect();
        if diag.iter().any(|d| d.is_negative()) {
            return false;
        }
        let nonzero = diag.iter().take_while(|d| !d.is_zero()).count();
        diag[nonzero..].iter().all(|d| d.is_zero()) && diag[..nonzero].windows(2).all(|w| (w[1] % w[0]).is_zero())
    }
}

/// `U · M · V = D` with `U`, `V` unimodular and `D` in Smith form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub d: IntegerMatrix,
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries.
    pub fn divisors(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.get(i, i).clone()).filter(|x| !x.is_zero()).collect()
    }
}

pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let mut u = IntegerMatrix::identity(m.rows);
    let mut v = IntegerMatrix::identity(m.cols);
    let d = reduce(m.clone(), Some((&mut u, &mut v)));
    SmithForm { d, u, v }
}

/// Nonzero elementary divisors, in divisibility order.
pub fn elementary_divisors(m: &IntegerMatrix) -> Vec<BigInt> {
    let d = reduce(m.clone(), None);
    (0..d.rows.min(d.cols)).map(|i| d.get(i, i).clone()).filter(|x| !x.is_zero()).collect()
}

fn reduce(mut a: IntegerMatrix, mut track: Option<(&mut IntegerMatrix, &mut IntegerMatrix)>) -> IntegerMatrix {
    let (r, c) = (a.rows, a.cols);
    let mut t = 0;
    while t < r.min(c) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                let x = a.get(i, j);
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        if let Some((u, v)) = track.as_mut() {
            u.swap_rows(t, pi);
            v.swap_cols(t, pj);
        }
        loop {
            let mut changed = false;
            for i in t + 1..r {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = -(a.get(i, t).div_floor(a.get(t, t)));
                a.add_row(i, t, &q);
                if let Some((u, _)) = track.as_mut() {
                    u.add_row(i, t, &q);
                }
                if !a.get(i, t).is_zero() {
                    changed = true;
                }
            }
            for j in t + 1..c {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = -(a.get(t, j).div_floor(a.get(t, t)));
                a.add_col(j, t, &q);
                if let Some((_, v)) = track.as_mut() {
                    v.add_col(j, t, &q);
                }
                if !a.get(t, j).is_zero() {
                    changed = true;
                }
            }
            if changed {
                // Move the smallest remainder in row or column t into the pivot.
                let mut best = (t, t);
                for i in t + 1..r {
                    if !a.get(i, t).is_zero() && a.get(i, t).abs() < a.get(best.0, best.1).abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..c {
                    if !a.get(t, j).is_zero() && a.get(t, j).abs() < a.get(best.0, best.1).abs() {
                        best = (t, j);
                    }
                }
                a.swap_rows(t, best.0);
                a.swap_cols(t, best.1);
                if let Some((u, v)) = track.as_mut() {
                    u.swap_rows(t, best.0);
                    v.swap_cols(t, best.1);
                }
                continue;
            }
            // Divisibility: fold an offending row into the pivot row.
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !(a.get(i, j) % a.get(t, t)).is_zero()));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row(t, i, &one);
                    if let Some((u, _)) = track.as_mut() {
                        u.add_row(t, i, &one);
                    }
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            if let Some((u, _)) = track.as_mut() {
                u.negate_row(t);
            }
        }
        t += 1;
    }
    a
}

/// Elementary divisors of a sparse matrix: unit pivots are eliminated
/// sparsely, the remainder goes through dense reduction.
fn sparse_divisors(rows: usize, cols: usize, entries: Vec<BTreeMap<usize, BigInt>>) -> Vec<BigInt> {
    let mut rowv = entries;
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); cols];
    for (i, r) in rowv.iter().enumerate() {
        for &j in r.keys() {
            col_rows[j].insert(i);
        }
    }
    let mut row_alive = vec![true; rows];
    let mut col_alive = vec![true; cols];
    let mut units = 0usize;
    loop {
        // Unit pivot in the sparsest live row.
        let mut pick: Option<(usize, usize, usize)> = None;
        for i in 0..rows {
            if !row_alive[i] {
                continue;
            }
            let len = rowv[i].len();
            if pick.is_some_and(|(_, _, l)| l <= len) {
                continue;
            }
            if let Some((&j, _)) = rowv[i].iter().find(|(_, v)| v.abs().is_one()) {
                pick = Some((i, j, len));
            }
        }
        let Some((pi, pj, _)) = pick else { break };
        let pv = rowv[pi][&pj].clone();
        let pivot_row = rowv[pi].clone();
        let others: Vec<usize> = col_rows[pj].iter().copied().filter(|&i| i != pi).collect();
        for i in others {
            let factor = -(&rowv[i][&pj] * &pv);
            for (&j, x) in &pivot_row {
                let entry = rowv[i].entry(j).or_insert_with(BigInt::zero);
                *entry += &factor * x;
                if entry.is_zero() {
                    rowv[i].remove(&j);
                    col_rows[j].remove(&i);
                } else {
                    col_rows[j].insert(i);
                }
            }
        }
        for &j in pivot_row.keys() {
            col_rows[j].remove(&pi);
        }
        rowv[pi].clear();
        row_alive[pi] = false;
        col_alive[pj] = false;
        units += 1;
    }
    let live_rows: Vec<usize> = (0..rows).filter(|&i| row_alive[i] && !rowv[i].is_empty()).collect();
    let live_cols: Vec<usize> = (0..cols).filter(|&j| col_alive[j] && !col_rows[j].is_empty()).collect();
    let mut out = vec![BigInt::one(); units];
    if !live_rows.is_empty() && !live_cols.is_empty() {
        let col_pos: BTreeMap<usize, usize> = live_cols.iter().enumerate().map(|(p, &j)| (j, p)).collect();
        let mut m = IntegerMatrix::zeros(live_rows.len(), live_cols.len());
        for (p, &i) in live_rows.iter().enumerate() {
            for (j, x) in &rowv[i] {
                m.set(p, col_pos[j], x.clone());
            }
        }
        out.extend(elementary_divisors(&m));
    }
    out.sort();
    out
}

/// Boundary matrices `∂ₙ: Cₙ → Cₙ₋₁` for `n = 1..=dim`, rows indexed by
/// `(n-1)`-simplices. Degenerate faces contribute zero.
pub fn chain_complex(x: &TruncSSet) -> Vec<IntegerMatrix> {
    let out: Vec<IntegerMatrix> = (1..=x.dim())
        .map(|n| {
            let mut m = IntegerMatrix::zeros(x.count(n - 1), x.count(n));
            for (j, col) in boundary_columns(x, n).into_iter().enumerate() {
                for (i, v) in col {
                    m.set(i, j, v);
                }
            }
            m
        })
        .collect();
    for w in out.windows(2) {
        assert!(w[0].mul(&w[1]).is_zero(), "boundary of a boundary is nonzero");
    }
    out
}

fn boundary_columns(x: &TruncSSet, n: usize) -> Vec<BTreeMap<usize, BigInt>> {
    (0..x.count(n))
        .map(|s| {
            let mut col: BTreeMap<usize, BigInt> = BTreeMap::new();
            let r = SimplexRef::nondegenerate(n, s);
            for i in 0..=n {
                let f = x.face(&r, i);
                if f.is_degenerate() {
                    continue;
                }
                let sign = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                *col.entry(f.simplex).or_insert_with(BigInt::zero) += sign;
            }
            col.retain(|_, v| !v.is_zero());
            col
        })
        .collect()
}

fn serialize_bigints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub degree: usize,
    pub betti: usize,
    #[serde(serialize_with = "serialize_bigints")]
    pub torsion: Vec<BigInt>,
    /// False in the top degree, where boundaries from above are truncated away.
    pub complete: bool,
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".into()),
            b => parts.push(format!("Z^{b}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        let body = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
        write!(f, "H{} = {}{}", self.degree, body, if self.complete { "" } else { " (truncated)" })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyReport {
    pub groups: Vec<HomologyGroup>,
}

impl HomologyReport {
    pub fn group(&self, n: usize) -> Option<&HomologyGroup> {
        self.groups.get(n)
    }

    pub fn betti(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.betti).collect()
    }

    /// Drops the truncated top degree.
    pub fn complete_part(&self) -> Vec<(usize, Vec<BigInt>)> {
        self.groups.iter().filter(|g| g.complete).map(|g| (g.betti, g.torsion.clone())).collect()
    }
}

/// `Hₙ` for `n = 0..=dim`; the top degree is flagged incomplete.
pub fn homology(x: &TruncSSet) -> HomologyReport {
    let d = x.dim();
    // divisors[n] = elementary divisors of ∂ₙ, for n = 1..=d.
    let mut divisors: Vec<Vec<BigInt>> = vec![Vec::new()];
    for n in 1..=d {
        let cols = boundary_columns(x, n);
        let mut rows: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); x.count(n - 1)];
        for (j, col) in cols.into_iter().enumerate() {
            for (i, v) in col {
                rows[i].insert(j, v);
            }
        }
        divisors.push(sparse_divisors(x.count(n - 1), x.count(n), rows));
    }
    divisors.push(Vec::new());
    let groups = (0..=d)
        .map(|n| {
            let rank_out = divisors[n].len();
            let incoming = &divisors[n + 1];
            HomologyGroup {
                degree: n,
                betti: x.count(n) - rank_out - incoming.len(),
                torsion: incoming.iter().filter(|t| !t.is_one()).cloned().collect(),
                complete: n < d,
            }
        })
        .collect();
    HomologyReport { groups }
}

/// Homology of both nerves of a functor. Equal homology is necessary, not
/// sufficient, for the functor to be a weak equivalence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyComparison {
    pub source: HomologyReport,
    pub target: HomologyReport,
    pub equal: bool,
    pub note: String,
}

/// Compares `H_n` of `N(C)` and `N(D)` for `n < d`.
pub fn compare_homology(f: &FinFunctor, d: usize) -> HomologyComparison {
    let trim = |r: HomologyReport| HomologyReport { groups: r.groups.into_iter().filter(|g| g.complete).collect() };
    let source = trim(homology(&nerve(f.source(), d)));
    let target = trim(homology(&nerve(f.target(), d)));
    let equal = source.complete_part() == target.complete_part();
    let note = if equal {
        format!("homology agrees through degree {}: necessary, not sufficient, for a weak equivalence", d.saturating_sub(1))
    } else {
        "homology differs: not a weak equivalence".to_string()
    };
    HomologyComparison { source, target, equal, note }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::chain;
    use crate::sset::{standard_complex, StandardKind};
    use proptest::prelude::*;

    fn z(b: usize) -> (usize, Vec<BigInt>) {
        (b, vec![])
    }

    #[test]
    fn smith_examples() {
        let m = IntegerMatrix::from_rows(&[vec![1, 0], vec![0, 2]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.d, m);
        assert_eq!(s.u, IntegerMatrix::identity(2));
        assert_eq!(s.v, IntegerMatrix::identity(2));
        let zero = IntegerMatrix::from_rows(&[vec![0]]);
        assert_eq!(smith_normal_form(&zero).d, zero);
        let m = IntegerMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.d, IntegerMatrix::from_rows(&[vec![2, 0], vec![0, 4]]));
        assert_eq!(s.u.mul(&m).mul(&s.v), s.d);
    }

    #[test]
    fn torsion_appears() {
        let m = IntegerMatrix::from_rows(&[vec![2, 0, 0], vec![0, 3, 0]]);
        assert_eq!(elementary_divisors(&m), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn chain_complex_examples() {
        let p = standard_complex(StandardKind::Delta, 0, None).unwrap();
        assert!(chain_complex(&p).is_empty());
        let b = standard_complex(StandardKind::Boundary, 2, None).unwrap();
        let d = chain_complex(&b);
        assert_eq!((d[0].rows(), d[0].cols()), (3, 3));
        for j in 0..3 {
            let s: BigInt = (0..3).map(|i| d[0].get(i, j).clone()).sum();
            assert!(s.is_zero());
        }
        let n = nerve(&chain(2), 3);
        let d = chain_complex(&n);
        assert!(d[0].mul(&d[1]).is_zero());
    }

    #[test]
    fn homology_examples() {
        let d2 = standard_complex(StandardKind::Delta, 2, None).unwrap();
        assert_eq!(homology(&d2).complete_part(), vec![z(1), z(0)]);
        let b2 = standard_complex(StandardKind::Boundary, 2, None).unwrap();
        assert_eq!(homology(&b2).complete_part(), vec![z(1), z(1)]);
        let b3 = standard_complex(StandardKind::Boundary, 3, None).unwrap();
        assert_eq!(homology(&b3).complete_part(), vec![z(1), z(0), z(1)]);
        assert_eq!(homology(&TruncSSet::empty(1)).complete_part(), vec![z(0)]);
    }

    #[test]
    fn rp2_has_torsion() {
        // Minimal 6-vertex triangulation of the projective plane.
        let tris: [[usize; 3]; 10] = [
            [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 1, 5],
            [1, 2, 4], [2, 3, 5], [1, 3, 4], [2, 4, 5], [1, 3, 5],
        ];
        let mut elements: Vec<String> = (0..6).map(|v| v.to_string()).collect();
        let mut rel: Vec<(String, String)> = Vec::new();
        let mut edges = BTreeSet::new();
        for t in &tris {
            for a in 0..3 {
                for b in a + 1..3 {
                    edges.insert((t[a], t[b]));
                }
            }
        }
        let name = |s: &[usize]| s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("");
        for &(a, b) in &edges {
            elements.push(name(&[a, b]));
        }
        for t in &tris {
            elements.push(name(t));
        }
        let faces = |s: &str| -> Vec<String> {
            let v: Vec<char> = s.chars().collect();
            let mut out = vec![];
            for mask in 1u32..(1 << v.len()) {
                out.push((0..v.len()).filter(|i| mask & (1 << i) != 0).map(|i| v[i]).collect());
            }
            out
        };
        for e in &elements {
            for f in faces(e) {
                rel.push((f, e.clone()));
            }
        }
        let p = crate::fincat::poset_to_category(&elements, &rel).unwrap();
        let h = homology(&nerve(&p, 3));
        assert_eq!(h.group(0).unwrap().betti, 1);
        assert_eq!(h.group(1).unwrap().betti, 0);
        assert_eq!(h.group(1).unwrap().torsion, vec![BigInt::from(2)]);
        assert_eq!(h.group(2).unwrap().betti, 0);
    }

    #[test]
    fn compare_identity() {
        let c = chain(2);
        let f = FinFunctor::identity(std::sync::Arc::new(c));
        let r = compare_homology(&f, 3);
        assert!(r.equal);
        assert!(r.note.contains("not sufficient"));
    }

    fn small_matrix() -> impl Strategy<Value = IntegerMatrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-6i64..7, c), r).prop_map(|rows| IntegerMatrix::from_rows(&rows))
        })
    }

    proptest! {
        #[test]
        fn smith_form_is_certified(m in small_matrix()) {
            let s = smith_normal_form(&m);
            prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
            prop_assert!(s.d.is_smith_form());
            prop_assert!(s.u.determinant().abs().is_one());
            prop_assert!(s.v.determinant().abs().is_one());
            prop_assert_eq!(elementary_divisors(&m), s.divisors());
        }

        #[test]
        fn sparse_path_matches_dense(m in small_matrix()) {
            let rows: Vec<BTreeMap<usize, BigInt>> = (0..m.rows())
                .map(|i| (0..m.cols()).filter(|&j| !m.get(i, j).is_zero()).map(|j| (j, m.get(i, j).clone())).collect())
                .collect();
            let mut dense = elementary_divisors(&m);
            dense.sort();
            prop_assert_eq!(sparse_divisors(m.rows(), m.cols(), rows), dense);
        }
    }
}
