//! Free Lie algebras on Lyndon bases.
//!
//! Basis monomials are Lyndon words with their standard (right) bracketing;
//! brackets of basis monomials are rewritten recursively into the basis. An
//! associative expansion into the tensor algebra serves as an independent
//! oracle for the rewriting.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use crate::exactalg::Rat;

pub type Word = Vec<u16>;

/// An element of the free Lie algebra: a rational combination of Lyndon
/// basis monomials.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct LieElem {
    pub terms: BTreeMap<Word, Rat>,
}

impl LieElem {
    pub fn zero() -> Self {
        LieElem::default()
    }

    pub fn generator(g: u16) -> Self {
        let mut e = LieElem::zero();
        e.terms.insert(vec![g], Rat::one());
        e
    }

    pub fn monomial(w: Word, c: Rat) -> Self {
        let mut e = LieElem::zero();
        if !c.is_zero() {
            e.terms.insert(w, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Word, c: &Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c.clone();
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &LieElem) -> LieElem {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &LieElem) -> LieElem {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LieElem {
        let mut out = LieElem::zero();
        for (w, c) in &self.terms {
            out.terms.insert(w.clone(), -c);
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> LieElem {
        if c.is_zero() {
            return LieElem::zero();
        }
        let mut out = LieElem::zero();
        for (w, v) in &self.terms {
            out.terms.insert(w.clone(), v * c);
        }
        out
    }

    /// Bracket length when homogeneous.
    pub fn length(&self) -> Option<usize> {
        let mut len = None;
        for w in self.terms.keys() {
            match len {
                None => len = Some(w.len()),
                Some(l) if l != w.len() => return None,
                _ => {}
            }
        }
        len
    }

    /// Split into length-homogeneous parts.
    pub fn by_length(&self) -> BTreeMap<usize, LieElem> {
        let mut out: BTreeMap<usize, LieElem> = BTreeMap::new();
        for (w, c) in &self.terms {
            out.entry(w.len())
                .or_insert_with(LieElem::zero)
                .add_term(w.clone(), c);
        }
        out
    }
}

/// Is `w` a Lyndon word (strictly smaller than all proper rotations)?
pub fn is_lyndon(w: &[u16]) -> bool {
    if w.is_empty() {
        return false;
    }
    for k in 1..w.len() {
        let rot: Vec<u16> = w[k..].iter().chain(w[..k].iter()).copied().collect();
        if rot.as_slice() <= w {
            return false;
        }
    }
    true
}

/// All Lyndon words over `k` letters of length exactly `len` (Duval).
pub fn lyndon_words(k: u16, len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if len == 0 || k == 0 {
        return out;
    }
    let mut w: Vec<u16> = vec![0];
    loop {
        if w.len() == len {
            out.push(w.clone());
        }
        // extend periodically to max length
        let base = w.clone();
        while w.len() < len {
            w.push(base[(w.len() - base.len()) % base.len()]);
        }
        // backtrack
        while let Some(&last) = w.last() {
            if last == k - 1 {
                w.pop();
            } else {
                break;
            }
        }
        match w.last_mut() {
            None => break,
            Some(last) => *last += 1,
        }
    }
    out.sort();
    out
}

/// Necklace-type count of Lyndon words (dimension of the free Lie component).
pub fn lyndon_count(k: u64, len: u64) -> u64 {
    fn moebius(mut n: u64) -> i64 {
        let mut m = 1i64;
        let mut p = 2u64;
        while p * p <= n {
            if n % p == 0 {
                n /= p;
                if n % p == 0 {
                    return 0;
                }
                m = -m;
            }
            p += 1;
        }
        if n > 1 {
            m = -m;
        }
        m
    }
    let mut acc: i64 = 0;
    for d in 1..=len {
        if len % d == 0 {
            acc += moebius(len / d) * (k as i64).pow(d as u32) as i64;
        }
    }
    (acc / len as i64) as u64
}

/// The standard right factorization of a Lyndon word of length >= 2:
/// the longest proper Lyndon suffix and its complementary prefix.
pub fn std_factorization(w: &[u16]) -> (Word, Word) {
    debug_assert!(w.len() >= 2);
    for start in 1..w.len() {
        if is_lyndon(&w[start..]) {
            return (w[..start].to_vec(), w[start..].to_vec());
        }
    }
    unreachable!("every Lyndon word of length >= 2 factorizes");
}

/// Free Lie algebra with a memoized basis-bracket rewriter.
pub struct FreeLie {
    pub num_gens: u16,
    cache: RefCell<HashMap<(Word, Word), LieElem>>,
}

impl FreeLie {
    pub fn new(num_gens: u16) -> Self {
        FreeLie {
            num_gens,
            cache: RefCell::new(HashMap::new()),
        }
    }

    /// Bracket of two Lyndon basis monomials, in normal form.
    pub fn bracket_words(&self, u: &Word, v: &Word) -> LieElem {
        if u == v {
            return LieElem::zero();
        }
        if u > v {
            return self.bracket_words(v, u).neg();
        }
        if let Some(hit) = self.cache.borrow().get(&(u.clone(), v.clone())) {
            return hit.clone();
        }
        // (u, v) is the standard factorization of uv iff u is a letter or
        // the right factor of u dominates v.
        let standard = u.len() == 1 || {
            let (_, u2) = std_factorization(u);
            u2.as_slice() >= v.as_slice()
        };
        let result = if standard {
            let mut w = u.clone();
            w.extend_from_slice(v);
            debug_assert!(is_lyndon(&w));
            LieElem::monomial(w, Rat::one())
        } else {
            // u = u1 u2 with u2 < v: [[u1,u2],v] = [u1,[u2,v]] - [u2,[u1,v]]
            let (u1, u2) = std_factorization(u);
            let u2v = self.bracket_words(&u2, v);
            let t1 = self.bracket_word_elem(&u1, &u2v);
            let u1v = self.bracket_words(&u1, v);
            let t2 = self.bracket_word_elem(&u2, &u1v);
            t1.sub(&t2)
        };
        self.cache
            .borrow_mut()
            .insert((u.clone(), v.clone()), result.clone());
        result
    }

    pub fn bracket_elem_word(&self, a: &LieElem, w: &Word) -> LieElem {
        let mut out = LieElem::zero();
        for (u, c) in &a.terms {
            let b = self.bracket_words(u, w);
            for (m, d) in &b.terms {
                out.add_term(m.clone(), &(c * d));
            }
        }
        out
    }

    pub fn bracket_word_elem(&self, w: &Word, a: &LieElem) -> LieElem {
        self.bracket_elem_word(a, w).neg()
    }

    pub fn bracket(&self, a: &LieElem, b: &LieElem) -> LieElem {
        let mut out = LieElem::zero();
        for (u, cu) in &a.terms {
            for (v, cv) in &b.terms {
                let k = self.bracket_words(u, v);
                for (m, d) in &k.terms {
                    out.add_term(m.clone(), &(&(cu * cv) * d));
                }
            }
        }
        out
    }

    /// (ad a)^k (b).
    pub fn ad_pow(&self, a: &LieElem, k: u32, b: &LieElem) -> LieElem {
        let mut out = b.clone();
        for _ in 0..k {
            out = self.bracket(a, &out);
        }
        out
    }

    /// Expand the standard bracketing of a Lyndon word in the tensor algebra.
    pub fn word_to_assoc(&self, w: &Word) -> BTreeMap<Word, Rat> {
        if w.len() == 1 {
            let mut m = BTreeMap::new();
            m.insert(w.clone(), Rat::one());
            return m;
        }
        let (u, v) = std_factorization(w);
        let a = self.word_to_assoc(&u);
        let b = self.word_to_assoc(&v);
        assoc_commutator(&a, &b)
    }

    /// Expand a Lie element into tensor-algebra coordinates.
    pub fn to_assoc(&self, e: &LieElem) -> BTreeMap<Word, Rat> {
        let mut out: BTreeMap<Word, Rat> = BTreeMap::new();
        for (w, c) in &e.terms {
            for (m, d) in self.word_to_assoc(w) {
                let slot = out.entry(m).or_insert_with(Rat::zero);
                *slot += c * &d;
                if slot.is_zero() {
                    // cleanup happens at the end
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }
}

fn assoc_mul(a: &BTreeMap<Word, Rat>, b: &BTreeMap<Word, Rat>) -> BTreeMap<Word, Rat> {
    let mut out: BTreeMap<Word, Rat> = BTreeMap::new();
    for (wa, ca) in a {
        for (wb, cb) in b {
            let mut w = wa.clone();
            w.extend_from_slice(wb);
            let slot = out.entry(w).or_insert_with(Rat::zero);
            *slot += ca * cb;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

pub fn assoc_commutator(
    a: &BTreeMap<Word, Rat>,
    b: &BTreeMap<Word, Rat>,
) -> BTreeMap<Word, Rat> {
    let mut out = assoc_mul(a, b);
    for (w, c) in assoc_mul(b, a) {
        let slot = out.entry(w).or_insert_with(Rat::zero);
        *slot -= c;
    }
    out.retain(|_, v| !v.is_zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lyndon_counts_match_the_necklace_formula() {
        for k in 2..=3u16 {
            for len in 1..=6usize {
                let words = lyndon_words(k, len);
                assert_eq!(
                    words.len() as u64,
                    lyndon_count(k as u64, len as u64),
                    "k={k}, len={len}"
                );
                for w in &words {
                    assert!(is_lyndon(w));
                }
            }
        }
        // two generators: one monomial at length 2, two at length 3
        assert_eq!(lyndon_words(2, 2).len(), 1);
        assert_eq!(lyndon_words(2, 3).len(), 2);
        assert_eq!(lyndon_words(3, 1).len(), 3);
    }

    #[test]
    fn bracket_matches_associative_expansion() {
        // The Lyndon rewriting agrees with the tensor-algebra commutator on
        // every pair of basis monomials up to length 5 over two letters.
        let alg = FreeLie::new(2);
        let mut monos: Vec<Word> = Vec::new();
        for len in 1..=4 {
            monos.extend(lyndon_words(2, len));
        }
        for u in &monos {
            for v in &monos {
                if u.len() + v.len() > 5 {
                    continue;
                }
                let left = alg.to_assoc(&alg.bracket_words(u, v));
                let right = assoc_commutator(&alg.word_to_assoc(u), &alg.word_to_assoc(v));
                assert_eq!(left, right, "pair {u:?}, {v:?}");
            }
        }
    }

    #[test]
    fn antisymmetry_and_self_bracket() {
        let alg = FreeLie::new(3);
        let a = LieElem::generator(0);
        assert!(alg.bracket(&a, &a).is_zero());
        let b = LieElem::generator(1).add(&LieElem::generator(2).scale(&Rat::from_int(2)));
        let ab = alg.bracket(&a, &b);
        let ba = alg.bracket(&b, &a);
        assert_eq!(ab, ba.neg());
    }

    #[test]
    fn jacobi_on_sample_triples() {
        let alg = FreeLie::new(3);
        let samples = [
            (LieElem::generator(0), LieElem::generator(1), LieElem::generator(2)),
            (
                LieElem::generator(0),
                alg.bracket(&LieElem::generator(0), &LieElem::generator(1)),
                LieElem::generator(2),
            ),
            (
                alg.bracket(&LieElem::generator(2), &LieElem::generator(1)),
                LieElem::generator(1),
                alg.bracket(&LieElem::generator(0), &LieElem::generator(2)),
            ),
        ];
        for (a, b, c) in samples {
            let j = alg
                .bracket(&a, &alg.bracket(&b, &c))
                .add(&alg.bracket(&b, &alg.bracket(&c, &a)))
                .add(&alg.bracket(&c, &alg.bracket(&a, &b)));
            assert!(j.is_zero(), "jacobi fails");
        }
    }

    #[test]
    fn left_normed_reduction_oracle() {
        // [x, [x, y]] style left-normed brackets re-expanded through the
        // normal form agree with direct associative computation.
        let alg = FreeLie::new(3);
        let x = LieElem::generator(0);
        let yz = alg.bracket(&LieElem::generator(1), &LieElem::generator(2));
        let nested = alg.bracket(&x, &yz);
        let left = alg.to_assoc(&nested);
        let right = assoc_commutator(
            &alg.to_assoc(&x),
            &assoc_commutator(&alg.to_assoc(&LieElem::generator(1)), &alg.to_assoc(&LieElem::generator(2))),
        );
        assert_eq!(left, right);
    }
}
