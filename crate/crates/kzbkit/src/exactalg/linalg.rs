//! Exact sparse row reduction over the rationals.
//!
//! Rows are sorted `(column, coefficient)` pairs. The echelon keeps pivot
//! rows normalized to a leading 1 and content-reduced, which keeps bigint
//! growth in check during large eliminations.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::{Integer, One, Zero};

use super::rat::Rat;

/// A sparse vector with strictly increasing column indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseVec {
    pub entries: Vec<(u64, Rat)>,
}

impl SparseVec {
    pub fn new(mut entries: Vec<(u64, Rat)>) -> Self {
        entries.retain(|(_, c)| !c.is_zero());
        entries.sort_by_key(|(i, _)| *i);
        let mut merged: Vec<(u64, Rat)> = Vec::with_capacity(entries.len());
        for (i, c) in entries {
            match merged.last_mut() {
                Some((j, acc)) if *j == i => {
                    *acc += c;
                }
                _ => merged.push((i, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        SparseVec { entries: merged }
    }

    pub fn from_map(map: BTreeMap<u64, Rat>) -> Self {
        SparseVec {
            entries: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn leading(&self) -> Option<(u64, &Rat)> {
        self.entries.first().map(|(i, c)| (*i, c))
    }

    pub fn scale(&mut self, c: &Rat) {
        if c.is_zero() {
            self.entries.clear();
            return;
        }
        for (_, v) in &mut self.entries {
            *v *= c.clone();
        }
    }

    /// self += c * other (sorted merge).
    pub fn axpy(&mut self, c: &Rat, other: &SparseVec) {
        if c.is_zero() || other.is_zero() {
            return;
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let mut a = self.entries.iter().peekable();
        let mut b = other.entries.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some((ia, _)), Some((ib, _))) if ia < ib => {
                    out.push(a.next().unwrap().clone());
                }
                (Some((ia, _)), Some((ib, _))) if ia > ib => {
                    let (i, v) = b.next().unwrap();
                    out.push((*i, c * v));
                }
                (Some(_), Some(_)) => {
                    let (i, va) = a.next().unwrap();
                    let (_, vb) = b.next().unwrap();
                    let v = va + &(c * vb);
                    if !v.is_zero() {
                        out.push((*i, v));
                    }
                }
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => {
                    let (i, v) = b.next().unwrap();
                    out.push((*i, c * v));
                }
                (None, None) => break,
            }
        }
        self.entries = out;
    }

    /// Divide by the gcd of numerators times the lcm of denominators, keeping
    /// the sign of the leading entry positive.
    pub fn content_reduce(&mut self) {
        if self.entries.is_empty() {
            return;
        }
        let mut g = BigInt::zero();
        let mut l = BigInt::one();
        for (_, c) in &self.entries {
            g = g.gcd(c.numer());
            l = l.lcm(c.denom());
        }
        if g.is_zero() {
            return;
        }
        if self.entries[0].1.is_negative() {
            g = -g;
        }
        let factor = Rat::from_big(l, g);
        self.scale(&factor);
    }
}

/// Incremental echelon form: inserted rows are reduced against existing
/// pivots; surviving rows become new pivots with leading coefficient 1.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pivots: BTreeMap<u64, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_cols(&self) -> impl Iterator<Item = u64> + '_ {
        self.pivots.keys().copied()
    }

    pub fn has_pivot(&self, col: u64) -> bool {
        self.pivots.contains_key(&col)
    }

    /// Reduce a vector against the echelon (returns the remainder).
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        let mut k = 0usize;
        loop {
            let hit = v.entries[k..]
                .iter()
                .enumerate()
                .find_map(|(off, (col, _))| self.pivots.contains_key(col).then_some(k + off));
            match hit {
                Some(pos) => {
                    let (col, coeff) = (v.entries[pos].0, v.entries[pos].1.clone());
                    k = pos;
                    let pivot = &self.pivots[&col];
                    v.axpy(&-coeff, pivot);
                }
                None => break,
            }
        }
        v
    }

    /// Insert a row; returns true when it increased the rank.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let mut r = self.reduce(v);
        r.content_reduce();
        match r.leading() {
            None => false,
            Some((col, lead)) => {
                let inv = lead.inv().expect("nonzero leading entry");
                r.scale(&inv);
                self.pivots.insert(col, r);
                true
            }
        }
    }

    /// Member of the row space?
    pub fn contains(&self, v: SparseVec) -> bool {
        self.reduce(v).is_zero()
    }
}

/// Dense reduced row echelon form; returns (rref matrix, pivot columns).
pub fn rref_dense(mut m: Vec<Vec<Rat>>) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let rows = m.len();
    if rows == 0 {
        return (m, vec![]);
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].inv().unwrap();
        for x in &mut m[r] {
            *x *= inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    (m, pivots)
}

/// Basis of the right nullspace of a dense matrix.
pub fn nullspace_dense(m: Vec<Vec<Rat>>, cols: usize) -> Vec<Vec<Rat>> {
    let (rref, pivots) = rref_dense(m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free {
        let mut v = vec![Rat::zero(); cols];
        v[fc] = Rat::one();
        for (r, &pc) in pivots.iter().enumerate() {
            if fc < rref[r].len() {
                v[pc] = -rref[r][fc].clone();
            }
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(entries: &[(u64, i64)]) -> SparseVec {
        SparseVec::new(
            entries
                .iter()
                .map(|&(i, c)| (i, Rat::from_int(c)))
                .collect(),
        )
    }

    #[test]
    fn rank_and_membership() {
        let mut e = Echelon::new();
        assert!(e.insert(row(&[(0, 1), (1, 2)])));
        assert!(e.insert(row(&[(1, 1), (2, 1)])));
        // dependent row
        assert!(!e.insert(row(&[(0, 1), (1, 3), (2, 1)])));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(row(&[(0, 2), (1, 6), (2, 2)])));
        assert!(!e.contains(row(&[(2, 1)])));
    }

    #[test]
    fn dense_nullspace() {
        // x + y + z = 0, y - z = 0  =>  kernel spanned by (-2, 1, 1)
        let m = vec![
            vec![Rat::one(), Rat::one(), Rat::one()],
            vec![Rat::zero(), Rat::one(), -Rat::one()],
        ];
        let ns = nullspace_dense(m, 3);
        assert_eq!(ns.len(), 1);
        let v = &ns[0];
        // check m v = 0
        assert_eq!(&v[0] + &(&v[1] + &v[2]), Rat::zero());
        assert_eq!(&v[1] - &v[2], Rat::zero());
    }

    #[test]
    fn content_reduction_keeps_left_lead_positive() {
        let mut v = row(&[(3, -4), (5, 6)]);
        v.content_reduce();
        assert_eq!(v.entries[0].1, Rat::from_int(2));
        assert_eq!(v.entries[1].1, Rat::from_int(-3));
    }
}
