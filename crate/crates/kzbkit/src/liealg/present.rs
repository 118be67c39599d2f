//! Finitely presented graded Lie algebras, truncated by bracket length.
//!
//! The relation ideal is generated degreewise by iterated ad-closure and
//! echelonized inside each (length, x-degree) slice of the free Lie algebra;
//! quotient dimensions and a reduction map fall out. A second implementation
//! working with left-normed tensor-algebra coordinates provides an
//! independent dimension oracle.

use std::collections::BTreeMap;

use super::lyndon::{assoc_commutator, lyndon_count, lyndon_words, FreeLie, LieElem, Word};
use crate::exactalg::linalg::{Echelon, SparseVec};
use crate::exactalg::Rat;
use crate::{Error, Result};

/// Generators of the braid-type presented algebra: x_1..x_n then y_1..y_n.
pub fn x_gen(n: usize, i: usize) -> u16 {
    debug_assert!(1 <= i && i <= n);
    (i - 1) as u16
}

pub fn y_gen(n: usize, i: usize) -> u16 {
    debug_assert!(1 <= i && i <= n);
    (n + i - 1) as u16
}

/// x-degree of a word over the braid alphabet (letters below n are x's).
fn x_degree(n: usize, w: &Word) -> usize {
    w.iter().filter(|&&g| (g as usize) < n).count()
}

/// The defining relations, all homogeneous in length and x-degree:
/// commuting x's and y's, the symmetry and trace relations of the mixed
/// brackets t_{ij} = [x_i, y_j], and the centralizer relations.
pub fn t1n_relations(n: usize, alg: &FreeLie) -> Vec<LieElem> {
    let x = |i: usize| LieElem::generator(x_gen(n, i));
    let y = |i: usize| LieElem::generator(y_gen(n, i));
    // t_ij for unordered pairs is represented by [x_min, y_max]
    let t = |i: usize, j: usize| {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        alg.bracket(&x(a), &y(b))
    };
    let mut rels = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            rels.push(alg.bracket(&x(i), &x(j)));
            rels.push(alg.bracket(&y(i), &y(j)));
            // [x_i, y_j] = [x_j, y_i]
            rels.push(alg.bracket(&x(i), &y(j)).sub(&alg.bracket(&x(j), &y(i))));
        }
    }
    for i in 1..=n {
        // [x_i, y_i] + sum_{j != i} t_ij
        let mut r = alg.bracket(&x(i), &y(i));
        for j in 1..=n {
            if j != i {
                r = r.add(&t(i, j));
            }
        }
        rels.push(r);
    }
    for i in 1..=n {
        for j in i + 1..=n {
            for k in 1..=n {
                if k == i || k == j {
                    continue;
                }
                rels.push(alg.bracket(&x(k), &t(i, j)));
                rels.push(alg.bracket(&y(k), &t(i, j)));
            }
            rels.push(alg.bracket(&x(i).add(&x(j)), &t(i, j)));
            rels.push(alg.bracket(&y(i).add(&y(j)), &t(i, j)));
        }
    }
    rels.retain(|r| !r.is_zero());
    rels
}

/// One (length, x-degree) slice of the echelonized relation ideal.
struct Slice {
    cols: BTreeMap<Word, u64>,
    echelon: Echelon,
    /// relation-space basis elements (for the next ad-closure step)
    basis: Vec<LieElem>,
}

impl Slice {
    fn new(n: usize, len: usize, xdeg: usize, num_gens: u16) -> Self {
        let mut cols = BTreeMap::new();
        for w in lyndon_words(num_gens, len) {
            if x_degree(n, &w) == xdeg {
                let next = cols.len() as u64;
                cols.insert(w, next);
            }
        }
        Slice {
            cols,
            echelon: Echelon::new(),
            basis: Vec::new(),
        }
    }

    fn to_vec(&self, e: &LieElem) -> SparseVec {
        SparseVec::new(
            e.terms
                .iter()
                .map(|(w, c)| (*self.cols.get(w).expect("monomial in slice"), c.clone()))
                .collect(),
        )
    }

    fn from_vec(&self, v: &SparseVec) -> LieElem {
        let rev: BTreeMap<u64, &Word> = self.cols.iter().map(|(w, &i)| (i, w)).collect();
        let mut out = LieElem::zero();
        for (i, c) in &v.entries {
            out.add_term((*rev[i]).clone(), c);
        }
        out
    }

    fn insert(&mut self, e: &LieElem) {
        let v = self.to_vec(e);
        let reduced = self.echelon.reduce(v);
        if !reduced.is_zero() {
            let elem = self.from_vec(&reduced);
            self.echelon.insert(reduced);
            self.basis.push(elem);
        }
    }

    fn reduce(&self, e: &LieElem) -> LieElem {
        self.from_vec(&self.echelon.reduce(self.to_vec(e)))
    }

    fn dim_quotient(&self) -> usize {
        self.cols.len() - self.echelon.rank()
    }
}

/// Echelonized graded quotient of the braid-type presentation, truncated at
/// bracket length `max_len`. Slices may be restricted to the x-degree cone
/// needed for a set of targets.
pub struct GradedQuotient {
    pub n: usize,
    pub max_len: usize,
    pub alg: FreeLie,
    slices: BTreeMap<(usize, usize), Slice>,
}

impl GradedQuotient {
    /// Build every slice up to `max_len`.
    pub fn present_t1n(n: usize, max_len: usize) -> Result<Self> {
        let targets: Vec<(usize, usize)> = (1..=max_len)
            .flat_map(|l| (0..=l).map(move |d| (l, d)))
            .collect();
        GradedQuotient::present_t1n_cone(n, max_len, &targets)
    }

    /// Build only the slices in the downward cone of the given
    /// (length, x-degree) targets.
    pub fn present_t1n_cone(
        n: usize,
        max_len: usize,
        targets: &[(usize, usize)],
    ) -> Result<Self> {
        if n < 2 || max_len < 2 {
            return Err(Error::InvalidConfig(
                "presentation needs n >= 2 and depth >= 2".into(),
            ));
        }
        let num_gens = (2 * n) as u16;
        let alg = FreeLie::new(num_gens);
        // cone closure: (l, d) requires (l-1, d-1) and (l-1, d)
        let mut wanted: std::collections::BTreeSet<(usize, usize)> = Default::default();
        let mut stack: Vec<(usize, usize)> = targets
            .iter()
            .copied()
            .filter(|&(l, d)| l <= max_len && d <= l)
            .collect();
        while let Some((l, d)) = stack.pop() {
            if !wanted.insert((l, d)) {
                continue;
            }
            if l > 1 {
                if d > 0 {
                    stack.push((l - 1, d - 1));
                }
                if d <= l - 1 {
                    stack.push((l - 1, d));
                }
            }
        }
        let mut slices: BTreeMap<(usize, usize), Slice> = BTreeMap::new();
        for &(l, d) in &wanted {
            slices.insert((l, d), Slice::new(n, l, d, num_gens));
        }
        // defining relations, split by slice
        let rels = t1n_relations(n, &alg);
        let mut rels_by_slice: BTreeMap<(usize, usize), Vec<LieElem>> = BTreeMap::new();
        for r in rels {
            let len = r.length().ok_or_else(|| {
                Error::Domain("defining relation is not length-homogeneous".into())
            })?;
            let d = {
                let degs: std::collections::BTreeSet<usize> =
                    r.terms.keys().map(|w| x_degree(n, w)).collect();
                if degs.len() != 1 {
                    return Err(Error::Domain(
                        "defining relation is not x-degree homogeneous".into(),
                    ));
                }
                *degs.iter().next().unwrap()
            };
            rels_by_slice.entry((len, d)).or_default().push(r);
        }
        // degreewise: ad-closure of the previous level plus new relations
        for l in 2..=max_len {
            for d in 0..=l {
                if !wanted.contains(&(l, d)) {
                    continue;
                }
                let mut incoming: Vec<LieElem> = Vec::new();
                if let Some(rs) = rels_by_slice.get(&(l, d)) {
                    incoming.extend(rs.iter().cloned());
                }
                // bracket generators with the previous level's relation basis
                for g in 0..(2 * n) as u16 {
                    let gd = if (g as usize) < n { 1 } else { 0 };
                    if d < gd {
                        continue;
                    }
                    if let Some(prev) = slices.get(&(l - 1, d - gd)) {
                        for r in &prev.basis {
                            let br = alg.bracket_word_elem(&vec![g], r);
                            if !br.is_zero() {
                                incoming.push(br);
                            }
                        }
                    }
                }
                incoming.sort_by_key(|e| e.terms.len());
                let slice = slices.get_mut(&(l, d)).unwrap();
                for e in incoming {
                    slice.insert(&e);
                }
            }
        }
        Ok(GradedQuotient {
            n,
            max_len,
            alg,
            slices,
        })
    }

    /// Reduce an element to its canonical representative modulo the
    /// relation ideal; errors when a needed slice was not built.
    pub fn reduce(&self, e: &LieElem) -> Result<LieElem> {
        let mut out = LieElem::zero();
        for (w, c) in &e.terms {
            let key = (w.len(), x_degree(self.n, w));
            if w.len() == 1 {
                out.add_term(w.clone(), c);
                continue;
            }
            let slice = self.slices.get(&key).ok_or_else(|| {
                Error::IndexOutOfRange(format!("slice {key:?} not built (raise depth)"))
            })?;
            let part = slice.reduce(&LieElem::monomial(w.clone(), c.clone()));
            for (w2, c2) in &part.terms {
                out.add_term(w2.clone(), c2);
            }
        }
        Ok(out)
    }

    /// Quotient dimension of the full length-l component.
    pub fn dim(&self, l: usize) -> Result<usize> {
        if l == 1 {
            return Ok(2 * self.n);
        }
        let mut total = 0;
        for d in 0..=l {
            let slice = self
                .slices
                .get(&(l, d))
                .ok_or_else(|| Error::IndexOutOfRange(format!("slice ({l},{d}) not built")))?;
            total += slice.dim_quotient();
        }
        Ok(total)
    }

    pub fn dims(&self) -> Result<Vec<usize>> {
        (1..=self.max_len).map(|l| self.dim(l)).collect()
    }

    /// The canonical class of t_{ij} = [x_i, y_j].
    pub fn t_class(&self, i: usize, j: usize) -> Result<LieElem> {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        let t = self.alg.bracket(
            &LieElem::generator(x_gen(self.n, a)),
            &LieElem::generator(y_gen(self.n, b)),
        );
        self.reduce(&t)
    }
}

/// Independent dimension oracle: span the relation ideal in tensor-algebra
/// (left-normed word) coordinates and subtract its rank from the Witt count.
pub fn dims_left_normed(n: usize, max_len: usize) -> Result<Vec<usize>> {
    let num_gens = (2 * n) as u16;
    let alg = FreeLie::new(num_gens);
    let rels = t1n_relations(n, &alg);
    // associative coordinates of the defining relations
    let mut level: BTreeMap<usize, Vec<BTreeMap<Word, Rat>>> = BTreeMap::new();
    for r in &rels {
        let len = r.length().unwrap();
        level.entry(len).or_default().push(alg.to_assoc(r));
    }
    let gens: Vec<BTreeMap<Word, Rat>> = (0..num_gens)
        .map(|g| {
            let mut m = BTreeMap::new();
            m.insert(vec![g], Rat::one());
            m
        })
        .collect();
    let mut dims = vec![2 * n];
    let mut prev_basis: Vec<BTreeMap<Word, Rat>> = Vec::new();
    for l in 2..=max_len {
        let mut incoming: Vec<BTreeMap<Word, Rat>> = Vec::new();
        if let Some(rs) = level.get(&l) {
            incoming.extend(rs.iter().cloned());
        }
        for g in &gens {
            for r in &prev_basis {
                incoming.push(assoc_commutator(g, r));
            }
        }
        // echelonize in word coordinates
        let mut word_ids: BTreeMap<Word, u64> = BTreeMap::new();
        let mut ech = Echelon::new();
        let mut basis: Vec<BTreeMap<Word, Rat>> = Vec::new();
        incoming.sort_by_key(|m| m.len());
        for m in incoming {
            let entries: Vec<(u64, Rat)> = m
                .iter()
                .map(|(w, c)| {
                    let next = word_ids.len() as u64;
                    let id = *word_ids.entry(w.clone()).or_insert(next);
                    (id, c.clone())
                })
                .collect();
            if ech.insert(SparseVec::new(entries)) {
                basis.push(m);
            }
        }
        dims.push(lyndon_count(num_gens as u64, l as u64) as usize - ech.rank());
        prev_basis = basis;
    }
    Ok(dims)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_dimensions() {
        // n = 2: two central elements at length one plus a free rank-two
        // part: dims (4, 1, 2, 3, 6, 9).
        let q = GradedQuotient::present_t1n(2, 6).unwrap();
        assert_eq!(q.dims().unwrap(), vec![4, 1, 2, 3, 6, 9]);
    }

    #[test]
    fn t_symmetry_in_the_quotient() {
        // [x_1, y_2] = [x_2, y_1] modulo relations
        let q = GradedQuotient::present_t1n(2, 4).unwrap();
        let t12 = q
            .alg
            .bracket(&LieElem::generator(x_gen(2, 1)), &LieElem::generator(y_gen(2, 2)));
        let t21 = q
            .alg
            .bracket(&LieElem::generator(x_gen(2, 2)), &LieElem::generator(y_gen(2, 1)));
        let diff = q.reduce(&t12.sub(&t21)).unwrap();
        assert!(diff.is_zero());
    }

    #[test]
    fn dims_agree_between_the_two_routes() {
        for n in [2usize, 3] {
            let max_len = if n == 2 { 6 } else { 5 };
            let q = GradedQuotient::present_t1n(n, max_len).unwrap();
            let a = q.dims().unwrap();
            let b = dims_left_normed(n, max_len).unwrap();
            assert_eq!(a, b, "n = {n}");
        }
    }

    #[test]
    fn center_probe_at_two_points() {
        // x_1 + x_2 and y_1 + y_2 commute with every generator.
        let q = GradedQuotient::present_t1n(2, 5).unwrap();
        let xsum = LieElem::generator(x_gen(2, 1)).add(&LieElem::generator(x_gen(2, 2)));
        let ysum = LieElem::generator(y_gen(2, 1)).add(&LieElem::generator(y_gen(2, 2)));
        for g in 0..4u16 {
            let gelem = LieElem::generator(g);
            for central in [&xsum, &ysum] {
                let br = q.alg.bracket(central, &gelem);
                assert!(q.reduce(&br).unwrap().is_zero(), "generator {g}");
            }
        }
    }

    #[test]
    fn cone_slices_match_full_construction() {
        let full = GradedQuotient::present_t1n(3, 5).unwrap();
        let cone = GradedQuotient::present_t1n_cone(3, 5, &[(5, 3)]).unwrap();
        // reduce a degree-(5,3) element in both
        let alg = &full.alg;
        let x1 = LieElem::generator(x_gen(3, 1));
        let t12 = alg.bracket(&x1, &LieElem::generator(y_gen(3, 2)));
        let e = alg.ad_pow(&x1, 2, &alg.bracket(&LieElem::generator(y_gen(3, 3)), &t12));
        let r1 = full.reduce(&e).unwrap();
        let r2 = cone.reduce(&e).unwrap();
        assert_eq!(r1, r2);
    }
}
