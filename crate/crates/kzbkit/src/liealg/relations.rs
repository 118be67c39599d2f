//! The dual presented Lie algebra: generators dual to the 1-form basis,
//! the relation table read off from the flatness expansion, and the two
//! morphisms connecting it to the braid-type presentation.

use std::collections::BTreeMap;

use super::lyndon::{FreeLie, LieElem};
use super::present::{x_gen, y_gen, GradedQuotient};
use crate::elliptic::Fault;
use crate::exactalg::linalg::{Echelon, SparseVec};
use crate::exactalg::Rat;
use crate::forms::IBasisIdx;
use crate::{Error, Result};

/// Generator symbols of the dual presentation.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum GenSymbol {
    X(u8),
    Y(u8),
    /// T(i, j, alpha) with i < j.
    T(u8, u8, u32),
}

impl GenSymbol {
    pub fn degree(&self) -> u32 {
        match self {
            GenSymbol::X(_) => 1,
            GenSymbol::Y(_) => 0,
            GenSymbol::T(_, _, a) => a + 1,
        }
    }
}

/// Index table for the dual alphabet at point count `n` with pole indices
/// up to `t_bound` (inclusive).
#[derive(Clone, Debug)]
pub struct GAlphabet {
    pub n: u8,
    pub t_bound: u32,
    pairs: Vec<(u8, u8)>,
}

impl GAlphabet {
    pub fn new(n: u8, t_bound: u32) -> Self {
        let mut pairs = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                pairs.push((i, j));
            }
        }
        GAlphabet { n, t_bound, pairs }
    }

    pub fn num_gens(&self) -> u16 {
        (2 * self.n as usize + self.pairs.len() * (self.t_bound as usize + 1)) as u16
    }

    pub fn index(&self, g: GenSymbol) -> u16 {
        match g {
            GenSymbol::X(i) => (i - 1) as u16,
            GenSymbol::Y(i) => (self.n + i - 1) as u16,
            GenSymbol::T(i, j, a) => {
                assert!(a <= self.t_bound, "pole index beyond alphabet bound");
                let pair_pos = self
                    .pairs
                    .iter()
                    .position(|&p| p == (i, j))
                    .expect("ordered pair");
                (2 * self.n as usize + pair_pos * (self.t_bound as usize + 1) + a as usize) as u16
            }
        }
    }

    pub fn x(&self, i: u8) -> LieElem {
        LieElem::generator(self.index(GenSymbol::X(i)))
    }

    pub fn y(&self, i: u8) -> LieElem {
        LieElem::generator(self.index(GenSymbol::Y(i)))
    }

    pub fn t(&self, i: u8, j: u8, a: u32) -> LieElem {
        LieElem::generator(self.index(GenSymbol::T(i, j, a)))
    }
}

/// The relation table of the dual presentation, keyed by the 2-form basis
/// index whose flatness coefficient the entry is.
pub struct RelationTable {
    pub alphabet: GAlphabet,
    pub alg: FreeLie,
    pub entries: BTreeMap<IBasisIdx, LieElem>,
}

/// Instantiate the relation families for point count `n`, with table indices
/// bounded so that every entry only references generators T^a, a <= t_bound.
/// Entries are keyed by 2-form basis indices with pole indices <= a_max.
pub fn relations_g(n: u8, a_max: u32, fault: Option<Fault>) -> RelationTable {
    // the two-index sums reference T^{a+b}; the step relations T^{a+1}
    let t_bound = (2 * a_max).max(a_max + 1);
    let alphabet = GAlphabet::new(n, t_bound);
    let alg = FreeLie::new(alphabet.num_gens());
    let mut entries = BTreeMap::new();
    let br = |a: &LieElem, b: &LieElem| alg.bracket(a, b);
    let x = |i: u8| alphabet.x(i);
    let y = |i: u8| alphabet.y(i);
    let t = |i: u8, j: u8, a: u32| alphabet.t(i, j, a);
    let sigma_binom = |a: u32, g: u32| {
        if fault == Some(Fault::SigmaBinomial) {
            Rat::binomial(a + 1, g)
        } else {
            Rat::binomial(a, g)
        }
    };
    // cc family
    for i in 1..=n {
        for j in i + 1..=n {
            entries.insert(IBasisIdx::Cc(i, j), br(&x(i), &x(j)));
        }
    }
    // cp family
    for i in 1..=n {
        let mut r = br(&x(i), &y(i));
        for j in 1..=n {
            if j > i {
                r = r.sub(&t(i, j, 0));
            } else if j < i {
                r = r.sub(&t(j, i, 0));
            }
        }
        entries.insert(IBasisIdx::CpDp(i, i), r);
        for j in 1..=n {
            if j == i {
                continue;
            }
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            entries.insert(IBasisIdx::CpDp(i, j), br(&x(i), &y(j)).add(&t(a, b, 0)));
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            for a in 0..=a_max {
                for k in 1..=n {
                    if k == i || k == j {
                        continue;
                    }
                    entries.insert(IBasisIdx::CpOm(k, i, j, a), br(&x(k), &t(i, j, a)));
                }
                entries.insert(
                    IBasisIdx::CpOm(i, i, j, a),
                    br(&x(i), &t(i, j, a)).sub(&t(i, j, a + 1)),
                );
                entries.insert(
                    IBasisIdx::CpOm(j, i, j, a),
                    br(&x(j), &t(i, j, a)).add(&t(i, j, a + 1)),
                );
            }
        }
    }
    // pp family
    for i in 1..=n {
        for j in i + 1..=n {
            entries.insert(IBasisIdx::P(i, j), br(&y(i), &y(j)));
        }
    }
    // four distinct indices
    for i in 1..=n {
        for j in i + 1..=n {
            for k in i + 1..=n {
                if k == j {
                    continue;
                }
                for l in k + 1..=n {
                    if l == i || l == j {
                        continue;
                    }
                    for a in 0..=a_max {
                        for b in 0..=a_max {
                            entries.insert(
                                IBasisIdx::S4(i, j, k, l, a, b),
                                br(&t(i, j, a), &t(k, l, b)),
                            );
                        }
                    }
                }
            }
        }
    }
    // two three-index families
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                for a in 0..=a_max {
                    for b in 0..=a_max {
                        // sigma''(i,j,k,a,b) = [T_ij^a, T_jk^b]
                        //   + sum_{g+d=a+b} C(a,g) [T_ij^g, T_ik^d]
                        let mut r = br(&t(i, j, a), &t(j, k, b));
                        for g in 0..=a + b {
                            let d = a + b - g;
                            let c = sigma_binom(a, g);
                            if !c.is_zero() {
                                r = r.add(&br(&t(i, j, g), &t(i, k, d)).scale(&c));
                            }
                        }
                        entries.insert(IBasisIdx::S2(i, j, k, a, b), r);
                        // sigma'''(i,j,k,a,b) = [T_ik^a, T_jk^b]
                        //   + sum (-1)^{b+1} C(a,d) [T_ij^g, T_ik^d]
                        let mut r = br(&t(i, k, a), &t(j, k, b));
                        let sign = if b % 2 == 0 { -Rat::one() } else { Rat::one() };
                        for g in 0..=a + b {
                            let d = a + b - g;
                            let c = Rat::binomial(a, d);
                            if !c.is_zero() {
                                r = r.add(&br(&t(i, j, g), &t(i, k, d)).scale(&(sign.clone() * c)));
                            }
                        }
                        entries.insert(IBasisIdx::S3(i, j, k, a, b), r);
                    }
                }
            }
        }
    }
    // mixed bracket with the zero-degree generators
    for i in 1..=n {
        for j in i + 1..=n {
            for a in 0..=a_max {
                for k in 1..=n {
                    if k == i || k == j {
                        continue;
                    }
                    let mut r = br(&y(k), &t(i, j, a));
                    if a >= 1 {
                        for g in 0..=a - 1 {
                            let d = a - 1 - g;
                            if k < i {
                                let sign = if g % 2 == 0 { Rat::one() } else { -Rat::one() };
                                r = r.add(&br(&t(k, i, g), &t(k, j, d)).scale(&sign));
                            } else if k < j {
                                r = r.sub(&br(&t(i, k, g), &t(i, j, d)).scale(&Rat::binomial(a, d)));
                            } else {
                                r = r.add(&br(&t(i, j, g), &t(i, k, d)).scale(&Rat::binomial(a, g)));
                            }
                        }
                    }
                    entries.insert(IBasisIdx::Q(k, i, j, a), r);
                }
                // kappa'(i,j,a) = [Y_i + Y_j, T_ij^a] + corrections
                let mut r = br(&y(i).add(&y(j)), &t(i, j, a));
                if a >= 1 {
                    for g in 0..=a - 1 {
                        let d = a - 1 - g;
                        for k in 1..=n {
                            if k == i || k == j {
                                continue;
                            }
                            if i < k && k < j {
                                r = r.add(&br(&t(i, k, g), &t(i, j, d)).scale(&Rat::binomial(a, d)));
                            } else if k > j {
                                r = r.sub(&br(&t(i, j, g), &t(i, k, d)).scale(&Rat::binomial(a, g)));
                            } else {
                                let sign = if g % 2 == 0 { -Rat::one() } else { Rat::one() };
                                r = r.add(&br(&t(k, i, g), &t(k, j, d)).scale(&sign));
                            }
                        }
                    }
                }
                entries.insert(IBasisIdx::Qp(i, j, a), r);
            }
        }
    }
    RelationTable {
        alphabet,
        alg,
        entries,
    }
}

/// X-type degree of a dual-alphabet monomial: the sum of generator degrees.
pub fn g_degree(alphabet: &GAlphabet, w: &[u16]) -> u32 {
    let n = alphabet.n as usize;
    let t0 = 2 * n;
    let span = alphabet.t_bound as usize + 1;
    w.iter()
        .map(|&g| {
            let g = g as usize;
            if g < n {
                1
            } else if g < t0 {
                0
            } else {
                ((g - t0) % span) as u32 + 1
            }
        })
        .sum()
}

/// Every relation entry is homogeneous for the generator-degree grading.
pub fn check_table_homogeneity(table: &RelationTable) -> Result<()> {
    for (key, e) in &table.entries {
        let degs: std::collections::BTreeSet<u32> = e
            .terms
            .keys()
            .map(|w| g_degree(&table.alphabet, w))
            .collect();
        if degs.len() > 1 {
            return Err(Error::VerificationFailed {
                item: "relation-table".into(),
                detail: format!("entry {key:?} is not degree-homogeneous: {degs:?}"),
            });
        }
        if let Some(&d) = degs.iter().next() {
            if d != key.degree() {
                return Err(Error::VerificationFailed {
                    item: "relation-table".into(),
                    detail: format!("entry {key:?} has degree {d}, key demands {}", key.degree()),
                });
            }
        }
    }
    Ok(())
}

/// The morphism from the braid-type presentation into the dual presentation:
/// x_i -> X_i, y_i -> Y_i, t_{ij} -> -T_{ij}^0. Every defining relation must
/// land in the linear span of the relation table (no ideal closure).
pub fn phi_check(n: u8, a_max: u32) -> Result<usize> {
    let table = relations_g(n, a_max, None);
    let alphabet = &table.alphabet;
    let alg = &table.alg;
    // span of the table entries over global monomial coordinates
    let mut word_ids: BTreeMap<Vec<u16>, u64> = BTreeMap::new();
    let mut ech = Echelon::new();
    let to_vec = |e: &LieElem, ids: &mut BTreeMap<Vec<u16>, u64>| -> SparseVec {
        SparseVec::new(
            e.terms
                .iter()
                .map(|(w, c)| {
                    let next = ids.len() as u64;
                    (*ids.entry(w.clone()).or_insert(next), c.clone())
                })
                .collect(),
        )
    };
    for e in table.entries.values() {
        let v = to_vec(e, &mut word_ids);
        ech.insert(v);
    }
    let x = |i: u8| alphabet.x(i);
    let y = |i: u8| alphabet.y(i);
    let tphi = |i: u8, j: u8| {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        alphabet.t(a, b, 0).neg()
    };
    // images of the defining relations
    let mut images: Vec<(String, LieElem)> = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i < j {
                images.push((format!("[x{i},x{j}]"), alg.bracket(&x(i), &x(j))));
                images.push((format!("[y{i},y{j}]"), alg.bracket(&y(i), &y(j))));
                images.push((
                    format!("[x{i},y{j}]-t{i}{j}"),
                    alg.bracket(&x(i), &y(j)).sub(&tphi(i, j)),
                ));
                images.push((
                    format!("[x{j},y{i}]-t{j}{i}"),
                    alg.bracket(&x(j), &y(i)).sub(&tphi(j, i)),
                ));
            }
        }
        let mut r = alg.bracket(&x(i), &y(i));
        for j in 1..=n {
            if j != i {
                r = r.add(&tphi(i, j));
            }
        }
        images.push((format!("[x{i},y{i}]+sum t"), r));
    }
    for i in 1..=n {
        for j in i + 1..=n {
            for k in 1..=n {
                if k == i || k == j {
                    continue;
                }
                images.push((
                    format!("[x{k},t{i}{j}]"),
                    alg.bracket(&x(k), &tphi(i, j)),
                ));
                images.push((
                    format!("[y{k},t{i}{j}]"),
                    alg.bracket(&y(k), &tphi(i, j)),
                ));
            }
            images.push((
                format!("[x{i}+x{j},t{i}{j}]"),
                alg.bracket(&x(i).add(&x(j)), &tphi(i, j)),
            ));
            images.push((
                format!("[y{i}+y{j},t{i}{j}]"),
                alg.bracket(&y(i).add(&y(j)), &tphi(i, j)),
            ));
        }
    }
    let count = images.len();
    for (name, img) in images {
        if img.is_zero() {
            continue;
        }
        let v = to_vec(&img, &mut word_ids);
        if !ech.contains(v) {
            return Err(Error::VerificationFailed {
                item: "phi-welldef".into(),
                detail: format!("image of {name} is outside the relation span"),
            });
        }
    }
    Ok(count)
}

/// The image of T_{ij}^a under the inverse-direction morphism,
/// -(ad x_i)^a (t_{ij}), inside the free braid-type algebra.
pub fn psi_t(alg: &FreeLie, n: usize, i: u8, j: u8, a: u32) -> LieElem {
    let t = alg.bracket(
        &LieElem::generator(x_gen(n, i as usize)),
        &LieElem::generator(y_gen(n, j as usize)),
    );
    alg.ad_pow(&LieElem::generator(x_gen(n, i as usize)), a, &t).neg()
}

/// Map a relation-table element through the inverse-direction morphism.
pub fn psi_image(q: &GradedQuotient, alphabet: &GAlphabet, e: &LieElem) -> LieElem {
    // expand each monomial as a nested bracket of generator images
    let n = q.n;
    let img_of_gen = |g: u16| -> LieElem {
        let gu = g as usize;
        let nn = alphabet.n as usize;
        if gu < nn {
            LieElem::generator(x_gen(n, gu + 1))
        } else if gu < 2 * nn {
            LieElem::generator(y_gen(n, gu - nn + 1))
        } else {
            let span = alphabet.t_bound as usize + 1;
            let rel = gu - 2 * nn;
            let pair = alphabet.pairs[rel / span];
            psi_t(&q.alg, n, pair.0, pair.1, (rel % span) as u32)
        }
    };
    fn map_word(
        q: &GradedQuotient,
        img: &dyn Fn(u16) -> LieElem,
        w: &[u16],
    ) -> LieElem {
        if w.len() == 1 {
            return img(w[0]);
        }
        let (u, v) = super::lyndon::std_factorization(&w.to_vec());
        let a = map_word(q, img, &u);
        let b = map_word(q, img, &v);
        q.alg.bracket(&a, &b)
    }
    let mut out = LieElem::zero();
    for (w, c) in &e.terms {
        let m = map_word(q, &img_of_gen, w);
        out = out.add(&m.scale(c));
    }
    out
}

/// Bracket length of the psi-image of a table entry (for depth gating).
pub fn psi_image_length(alphabet: &GAlphabet, e: &LieElem) -> usize {
    let nn = alphabet.n as usize;
    let span = alphabet.t_bound as usize + 1;
    e.terms
        .keys()
        .map(|w| {
            w.iter()
                .map(|&g| {
                    let gu = g as usize;
                    if gu < 2 * nn {
                        1
                    } else {
                        ((gu - 2 * nn) % span) + 2
                    }
                })
                .sum::<usize>()
        })
        .max()
        .unwrap_or(0)
}

pub struct PsiOutcome {
    pub checked: usize,
    pub skipped: usize,
}

/// Map every relation-table entry into the truncated braid-type quotient and
/// assert exact vanishing; entries whose image exceeds the depth are
/// reported as skipped.
pub fn psi_check(n: u8, depth: usize, a_max: u32, fault: Option<Fault>) -> Result<PsiOutcome> {
    let table = relations_g(n, a_max, fault);
    check_table_homogeneity(&table)?;
    // collect the (length, x-degree) slices actually needed
    let mut targets: Vec<(usize, usize)> = Vec::new();
    let mut items: Vec<(IBasisIdx, &LieElem, usize)> = Vec::new();
    let mut skipped = 0usize;
    for (key, e) in &table.entries {
        let len = psi_image_length(&table.alphabet, e);
        if len > depth {
            skipped += 1;
            continue;
        }
        let deg = key.degree() as usize;
        targets.push((len, deg));
        items.push((*key, e, len));
    }
    targets.sort();
    targets.dedup();
    let q = GradedQuotient::present_t1n_cone(n as usize, depth, &targets)?;
    for (key, e, _) in &items {
        let img = psi_image(&q, &table.alphabet, e);
        let reduced = q.reduce(&img)?;
        if !reduced.is_zero() {
            return Err(Error::VerificationFailed {
                item: "psi-welldef".into(),
                detail: format!(
                    "image of the relation at {key:?} survives in the quotient: {:?}",
                    reduced.terms.keys().next()
                ),
            });
        }
    }
    Ok(PsiOutcome {
        checked: items.len(),
        skipped,
    })
}

/// Round-trip analysis: the composite fixes the braid-type generators
/// syntactically, and on the dual side the defect of T_{ij}^a is a
/// combination of ad-closures of the step relations
/// [X_i, T^k] - T^{k+1}.
pub fn iso_roundtrip_check(n: u8, a_max: u32) -> Result<()> {
    let t_bound = a_max + 1;
    let alphabet = GAlphabet::new(n, t_bound);
    let alg = FreeLie::new(alphabet.num_gens());
    // one direction is syntactic: psi(phi(x)) = x, psi(phi(y)) = y, and
    // psi(phi(t_ij)) = psi(-T_ij^0) = (ad x_i)^0(t_ij) = t_ij
    {
        let braid = FreeLie::new(2 * n as u16);
        let nn = n as usize;
        for i in 1..=nn {
            for j in i + 1..=nn {
                let t_ij = braid.bracket(
                    &LieElem::generator(x_gen(nn, i)),
                    &LieElem::generator(y_gen(nn, j)),
                );
                let roundtrip = psi_t(&braid, nn, i as u8, j as u8, 0).neg();
                if roundtrip != t_ij {
                    return Err(Error::VerificationFailed {
                        item: "iso-roundtrip".into(),
                        detail: format!("composite does not fix t({i},{j})"),
                    });
                }
            }
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            for a in 0..=a_max {
                // phi(psi(T^a)) = (ad X_i)^a T^0
                let roundtrip = alg.ad_pow(&alphabet.x(i), a, &alphabet.t(i, j, 0));
                let defect = roundtrip.sub(&alphabet.t(i, j, a));
                if a == 0 {
                    if !defect.is_zero() {
                        return Err(Error::VerificationFailed {
                            item: "iso-roundtrip".into(),
                            detail: "zero-index generator is not fixed".into(),
                        });
                    }
                    continue;
                }
                // membership in span{(ad X_i)^m ([X_i,T^k] - T^{k+1})}
                let mut word_ids: BTreeMap<Vec<u16>, u64> = BTreeMap::new();
                let intern = |w: &Vec<u16>, ids: &mut BTreeMap<Vec<u16>, u64>| -> u64 {
                    let next = ids.len() as u64;
                    *ids.entry(w.clone()).or_insert(next)
                };
                let mut ech = Echelon::new();
                let mut closure: Vec<LieElem> = Vec::new();
                for k in 0..a {
                    let step = alg
                        .bracket(&alphabet.x(i), &alphabet.t(i, j, k))
                        .sub(&alphabet.t(i, j, k + 1));
                    for m in 0..a {
                        closure.push(alg.ad_pow(&alphabet.x(i), m, &step));
                    }
                }
                for e in &closure {
                    let v = SparseVec::new(
                        e.terms
                            .iter()
                            .map(|(w, c)| (intern(w, &mut word_ids), c.clone()))
                            .collect(),
                    );
                    ech.insert(v);
                }
                let dv = SparseVec::new(
                    defect
                        .terms
                        .iter()
                        .map(|(w, c)| (intern(w, &mut word_ids), c.clone()))
                        .collect(),
                );
                if !ech.contains(dv) {
                    return Err(Error::VerificationFailed {
                        item: "iso-roundtrip".into(),
                        detail: format!("defect of T({i},{j},{a}) is outside the step-relation closure"),
                    });
                }
                // explicit telescoping witness:
                // (ad X)^a T^0 - T^a = sum_k (ad X)^{a-1-k} ([X,T^k] - T^{k+1})
                let mut telescoped = LieElem::zero();
                for k in 0..a {
                    let step = alg
                        .bracket(&alphabet.x(i), &alphabet.t(i, j, k))
                        .sub(&alphabet.t(i, j, k + 1));
                    telescoped = telescoped.add(&alg.ad_pow(&alphabet.x(i), a - 1 - k, &step));
                }
                if telescoped != defect {
                    return Err(Error::VerificationFailed {
                        item: "iso-roundtrip".into(),
                        detail: format!("telescoping witness fails at T({i},{j},{a})"),
                    });
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_entries_ground_truth() {
        let table = relations_g(3, 2, None);
        let al = &table.alphabet;
        let alg = &table.alg;
        // Cc entry
        assert_eq!(
            table.entries[&IBasisIdx::Cc(1, 2)],
            alg.bracket(&al.x(1), &al.x(2))
        );
        // sigma''(1,2,3,0,0) = [T12^0, T23^0] + [T12^0, T13^0]
        let expected = alg
            .bracket(&al.t(1, 2, 0), &al.t(2, 3, 0))
            .add(&alg.bracket(&al.t(1, 2, 0), &al.t(1, 3, 0)));
        assert_eq!(table.entries[&IBasisIdx::S2(1, 2, 3, 0, 0)], expected);
        // kappa'(1,2,0) = [Y1+Y2, T12^0] (correction sums are empty)
        let expected = alg.bracket(&al.y(1).add(&al.y(2)), &al.t(1, 2, 0));
        assert_eq!(table.entries[&IBasisIdx::Qp(1, 2, 0)], expected);
        check_table_homogeneity(&table).unwrap();
    }

    #[test]
    fn phi_spans() {
        phi_check(3, 2).unwrap();
    }

    #[test]
    fn psi_kills_relations_small() {
        let out = psi_check(3, 6, 2, None).unwrap();
        assert!(out.checked > 0);
    }

    #[test]
    fn psi_depth_seven_covers_total_index_three() {
        // the two-index families with a+b <= 3 have images of length <= 7
        let out = psi_check(3, 7, 3, None).unwrap();
        assert!(out.checked >= 95);
    }

    #[test]
    fn psi_detects_binomial_mutation() {
        assert!(matches!(
            psi_check(3, 6, 2, Some(Fault::SigmaBinomial)),
            Err(Error::VerificationFailed { .. })
        ));
    }

    #[test]
    fn roundtrip_small() {
        iso_roundtrip_check(3, 3).unwrap();
    }
}
