//! Logarithmic differential-form calculus on the n-fold product: the graded
//! basis of 1-forms, the image basis of the wedge map, the differential, and
//! the wedge-kernel generator families.
//!
//! The 2-form space is presented abstractly on the complement basis; wedge
//! products are rewritten into it using the kernel relations (the two
//! one-pair families and the three-index family produced by the Fay
//! identity). The series realization lives in [`realize`] and is used as an
//! independent oracle.

pub mod realize;
pub mod residues;

use std::collections::BTreeMap;
use std::fmt;

use crate::exactalg::Rat;

/// Basis indices of the space of logarithmic 1-forms.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum FormIdx {
    /// Invariant fiber frame dc_i.
    Dc(u8),
    /// Invariant base frame dp_i.
    Dp(u8),
    /// Logarithmic form om_{ij}^alpha with i < j.
    Om(u8, u8, u32),
}

impl FormIdx {
    pub fn degree(&self) -> u32 {
        match self {
            FormIdx::Dc(_) => 1,
            FormIdx::Dp(_) => 0,
            FormIdx::Om(_, _, a) => a + 1,
        }
    }

    pub fn check(&self, n: u8) {
        match *self {
            FormIdx::Dc(i) | FormIdx::Dp(i) => assert!(1 <= i && i <= n, "index out of range"),
            FormIdx::Om(i, j, _) => {
                assert!(1 <= i && i < j && j <= n, "pair out of range")
            }
        }
    }

    /// All basis indices for point count `n` and pole index at most `a_max`.
    pub fn basis(n: u8, a_max: u32) -> Vec<FormIdx> {
        let mut out = Vec::new();
        for i in 1..=n {
            out.push(FormIdx::Dc(i));
        }
        for i in 1..=n {
            out.push(FormIdx::Dp(i));
        }
        for i in 1..=n {
            for j in i + 1..=n {
                for a in 0..=a_max {
                    out.push(FormIdx::Om(i, j, a));
                }
            }
        }
        out
    }
}

/// A finitely supported 1-form in the abstract basis.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct Form1 {
    pub coeffs: BTreeMap<FormIdx, Rat>,
}

impl Form1 {
    pub fn basis(idx: FormIdx) -> Self {
        let mut f = Form1::default();
        f.coeffs.insert(idx, Rat::one());
        f
    }

    pub fn add_term(&mut self, idx: FormIdx, c: Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(idx).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&idx);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// Basis indices of the image of the wedge map: the two c-type families plus
/// the complement basis of the pure base part.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum IBasisIdx {
    /// dc_i wedge dc_j, i < j.
    Cc(u8, u8),
    /// dc_i wedge dp_j (all i, j).
    CpDp(u8, u8),
    /// dc_k wedge om_{ij}^alpha (all k, i < j).
    CpOm(u8, u8, u8, u32),
    /// dp_i wedge dp_j, i < j.
    P(u8, u8),
    /// dp_i wedge om_{jk}^alpha, i not in {j,k}, j < k.
    Q(u8, u8, u8, u32),
    /// dp_i wedge om_{ij}^alpha, i < j.
    Qp(u8, u8, u32),
    /// om_{ij}^alpha wedge om_{jk}^beta, i < j < k.
    S2(u8, u8, u8, u32, u32),
    /// om_{ik}^alpha wedge om_{jk}^beta, i < j < k.
    S3(u8, u8, u8, u32, u32),
    /// om_{ij}^alpha wedge om_{kl}^beta, all distinct, i < j, k < l, i < k.
    S4(u8, u8, u8, u8, u32, u32),
}

impl IBasisIdx {
    pub fn degree(&self) -> u32 {
        match self {
            IBasisIdx::Cc(_, _) => 2,
            IBasisIdx::CpDp(_, _) => 1,
            IBasisIdx::CpOm(_, _, _, a) => a + 2,
            IBasisIdx::P(_, _) => 0,
            IBasisIdx::Q(_, _, _, a) | IBasisIdx::Qp(_, _, a) => a + 1,
            IBasisIdx::S2(_, _, _, a, b)
            | IBasisIdx::S3(_, _, _, a, b)
            | IBasisIdx::S4(_, _, _, _, a, b) => a + b + 2,
        }
    }

    /// The pure-base complement basis for `n` points, pole indices <= a_max.
    pub fn sigma_basis(n: u8, a_max: u32) -> Vec<IBasisIdx> {
        let mut out = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                out.push(IBasisIdx::P(i, j));
            }
        }
        for j in 1..=n {
            for k in j + 1..=n {
                for i in 1..=n {
                    if i != j && i != k {
                        for a in 0..=a_max {
                            out.push(IBasisIdx::Q(i, j, k, a));
                        }
                    }
                }
            }
        }
        for i in 1..=n {
            for j in i + 1..=n {
                for a in 0..=a_max {
                    out.push(IBasisIdx::Qp(i, j, a));
                }
            }
        }
        for i in 1..=n {
            for j in i + 1..=n {
                for k in j + 1..=n {
                    for a in 0..=a_max {
                        for b in 0..=a_max {
                            out.push(IBasisIdx::S2(i, j, k, a, b));
                            out.push(IBasisIdx::S3(i, j, k, a, b));
                        }
                    }
                }
            }
        }
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
                                out.push(IBasisIdx::S4(i, j, k, l, a, b));
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// A finitely supported 2-form on the image basis.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct Form2InI {
    pub coeffs: BTreeMap<IBasisIdx, Rat>,
}

impl Form2InI {
    pub fn add_term(&mut self, idx: IBasisIdx, c: Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(idx).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&idx);
        }
    }

    pub fn add_scaled(&mut self, other: &Form2InI, c: &Rat) {
        for (idx, v) in &other.coeffs {
            self.add_term(*idx, c * v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn neg(&self) -> Form2InI {
        let mut out = Form2InI::default();
        for (idx, v) in &self.coeffs {
            out.coeffs.insert(*idx, -v);
        }
        out
    }
}

/// Rewrite `om_{ij}^alpha wedge om_{ik}^beta` (i < j < k) into the complement
/// basis using the three-index kernel relation.
fn rewrite_mixed_first(i: u8, j: u8, k: u8, alpha: u32, beta: u32) -> Form2InI {
    let s = alpha + beta + 1;
    let mut out = Form2InI::default();
    for gamma in 0..=alpha + beta {
        let delta = alpha + beta - gamma;
        // + C(delta, alpha) S2(i,j,k,delta,gamma)
        out.add_term(IBasisIdx::S2(i, j, k, delta, gamma), Rat::binomial(delta, alpha));
        // - (-1)^delta C(gamma, beta) S3(i,j,k,gamma,delta)
        let sign = if delta % 2 == 0 { Rat::one() } else { -Rat::one() };
        out.add_term(
            IBasisIdx::S3(i, j, k, gamma, delta),
            -(sign * Rat::binomial(gamma, beta)),
        );
    }
    let b1 = Rat::binomial(s, beta);
    let b2 = Rat::binomial(s, alpha);
    // + B1 (Qp(i,k,s) - Q(j,i,k,s))
    out.add_term(IBasisIdx::Qp(i, k, s), b1.clone());
    out.add_term(IBasisIdx::Q(j, i, k, s), -b1);
    // - B2 (Q''(i,j,s) - Q(k,i,j,s)) with Q'' == Qp in the quotient
    out.add_term(IBasisIdx::Qp(i, j, s), -b2.clone());
    out.add_term(IBasisIdx::Q(k, i, j, s), b2);
    // + (-1)^alpha (Q(i,j,k,s) - Q''(j,k,s))
    let sa = if alpha % 2 == 0 { Rat::one() } else { -Rat::one() };
    out.add_term(IBasisIdx::Q(i, j, k, s), sa.clone());
    out.add_term(IBasisIdx::Qp(j, k, s), -sa);
    out
}

/// Wedge of two basis 1-forms, expressed in the image basis.
pub fn wedge_basis(a: FormIdx, b: FormIdx) -> Form2InI {
    use FormIdx::*;
    let mut out = Form2InI::default();
    match (a, b) {
        (Dc(i), Dc(j)) => {
            if i < j {
                out.add_term(IBasisIdx::Cc(i, j), Rat::one());
            } else if i > j {
                out.add_term(IBasisIdx::Cc(j, i), -Rat::one());
            }
        }
        (Dc(i), Dp(j)) => out.add_term(IBasisIdx::CpDp(i, j), Rat::one()),
        (Dp(j), Dc(i)) => out.add_term(IBasisIdx::CpDp(i, j), -Rat::one()),
        (Dc(k), Om(i, j, a)) => out.add_term(IBasisIdx::CpOm(k, i, j, a), Rat::one()),
        (Om(i, j, a), Dc(k)) => out.add_term(IBasisIdx::CpOm(k, i, j, a), -Rat::one()),
        (Dp(i), Dp(j)) => {
            if i < j {
                out.add_term(IBasisIdx::P(i, j), Rat::one());
            } else if i > j {
                out.add_term(IBasisIdx::P(j, i), -Rat::one());
            }
        }
        (Dp(x), Om(i, j, a)) => {
            if x == i || x == j {
                // dp_j wedge om_ij = dp_i wedge om_ij modulo the kernel
                out.add_term(IBasisIdx::Qp(i, j, a), Rat::one());
            } else {
                out.add_term(IBasisIdx::Q(x, i, j, a), Rat::one());
            }
        }
        (Om(i, j, a), Dp(x)) => {
            out = wedge_basis(Dp(x), Om(i, j, a)).neg();
        }
        (Om(i, j, a), Om(k, l, b)) => {
            if (i, j) == (k, l) {
                // same-pair products die in the quotient
            } else if i == k {
                // om_ij ^ om_il
                if j < l {
                    out = rewrite_mixed_first(i, j, l, a, b);
                } else {
                    out = rewrite_mixed_first(i, l, j, b, a).neg();
                }
            } else if j == l {
                if i < k {
                    out.add_term(IBasisIdx::S3(i, k, j, a, b), Rat::one());
                } else {
                    out.add_term(IBasisIdx::S3(k, i, j, b, a), -Rat::one());
                }
            } else if j == k {
                out.add_term(IBasisIdx::S2(i, j, l, a, b), Rat::one());
            } else if i == l {
                out.add_term(IBasisIdx::S2(k, i, j, b, a), -Rat::one());
            } else {
                // four distinct indices
                if i < k {
                    out.add_term(IBasisIdx::S4(i, j, k, l, a, b), Rat::one());
                } else {
                    out.add_term(IBasisIdx::S4(k, l, i, j, b, a), -Rat::one());
                }
            }
        }
    }
    out
}

/// Bilinear, antisymmetric wedge on abstract 1-forms, valued in the image
/// basis.
pub fn wedge_abstract(a: &Form1, b: &Form1) -> Form2InI {
    let mut out = Form2InI::default();
    for (ia, ca) in &a.coeffs {
        for (ib, cb) in &b.coeffs {
            out.add_scaled(&wedge_basis(*ia, *ib), &(ca * cb));
        }
    }
    out
}

/// The differential on basis 1-forms: kills the invariant frames and sends
/// om_{ij}^alpha to -dc_{ij} wedge om_{ij}^{alpha-1} (with om^{-1} = dp_{ij}).
pub fn d_basis(idx: FormIdx) -> Form2InI {
    let mut out = Form2InI::default();
    if let FormIdx::Om(i, j, a) = idx {
        if a > 0 {
            out.add_term(IBasisIdx::CpOm(i, i, j, a - 1), -Rat::one());
            out.add_term(IBasisIdx::CpOm(j, i, j, a - 1), Rat::one());
        } else {
            // -(dc_i - dc_j) ^ (dp_i - dp_j)
            out.add_term(IBasisIdx::CpDp(i, i), -Rat::one());
            out.add_term(IBasisIdx::CpDp(i, j), Rat::one());
            out.add_term(IBasisIdx::CpDp(j, i), Rat::one());
            out.add_term(IBasisIdx::CpDp(j, j), -Rat::one());
        }
    }
    out
}

pub fn d_abstract(f: &Form1) -> Form2InI {
    let mut out = Form2InI::default();
    for (idx, c) in &f.coeffs {
        out.add_scaled(&d_basis(*idx), c);
    }
    out
}

/// Kernel generator families of the wedge map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KGen {
    /// dp_{ij} wedge om_{ij}^alpha, i < j.
    R(u8, u8, u32),
    /// om_{ij}^alpha wedge om_{ij}^beta, i < j, alpha > beta.
    S(u8, u8, u32, u32),
    /// The three-index combination produced by the Fay identity, i < j < k.
    T(u8, u8, u8, u32, u32),
}

impl KGen {
    /// The generator as a combination of wedge pairs in the exterior square
    /// (before passing to the quotient).
    pub fn as_pairs(&self) -> Vec<(Rat, FormIdx, FormIdx)> {
        use FormIdx::*;
        match *self {
            KGen::R(i, j, a) => vec![
                (Rat::one(), Dp(i), Om(i, j, a)),
                (-Rat::one(), Dp(j), Om(i, j, a)),
            ],
            KGen::S(i, j, a, b) => {
                assert!(a > b, "one-pair family needs alpha > beta");
                vec![(Rat::one(), Om(i, j, a), Om(i, j, b))]
            }
            KGen::T(i, j, k, a, b) => {
                let s = a + b + 1;
                let mut out = vec![(Rat::one(), Om(i, j, a), Om(i, k, b))];
                for gamma in 0..=a + b {
                    let delta = a + b - gamma;
                    out.push((-Rat::binomial(delta, a), Om(i, j, delta), Om(j, k, gamma)));
                    let sign = if delta % 2 == 0 { Rat::one() } else { -Rat::one() };
                    out.push((sign * Rat::binomial(gamma, b), Om(i, k, gamma), Om(j, k, delta)));
                }
                let b1 = Rat::binomial(s, b);
                let b2 = Rat::binomial(s, a);
                out.push((-b1.clone(), Dp(i), Om(i, k, s)));
                out.push((b1, Dp(j), Om(i, k, s)));
                out.push((b2.clone(), Dp(j), Om(i, j, s)));
                out.push((-b2, Dp(k), Om(i, j, s)));
                let sa = if a % 2 == 0 { -Rat::one() } else { Rat::one() };
                out.push((sa.clone(), Dp(i), Om(j, k, s)));
                out.push((-sa, Dp(k), Om(j, k, s)));
                out
            }
        }
    }

    /// Pass the generator through the abstract wedge; everything in the
    /// kernel must map to zero.
    pub fn wedge_image(&self) -> Form2InI {
        let mut out = Form2InI::default();
        for (c, a, b) in self.as_pairs() {
            out.add_scaled(&wedge_basis(a, b), &c);
        }
        out
    }
}

impl fmt::Display for KGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KGen::R(i, j, a) => write!(f, "R({i},{j},{a})"),
            KGen::S(i, j, a, b) => write!(f, "S({i},{j},{a},{b})"),
            KGen::T(i, j, k, a, b) => write!(f, "T({i},{j},{k},{a},{b})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedge_of_base_frames() {
        let got = wedge_basis(FormIdx::Dp(1), FormIdx::Dp(2));
        assert_eq!(got.coeffs.len(), 1);
        assert_eq!(got.coeffs[&IBasisIdx::P(1, 2)], Rat::one());
        // antisymmetry
        let rev = wedge_basis(FormIdx::Dp(2), FormIdx::Dp(1));
        assert_eq!(rev, got.neg());
        assert!(wedge_basis(FormIdx::Dp(1), FormIdx::Dp(1)).is_zero());
    }

    #[test]
    fn dp_pair_kills_its_log_form() {
        // (dp_1 - dp_2) ^ om_12^a = 0 after the quotient rewriting
        for a in 0..4 {
            let mut f = Form1::basis(FormIdx::Dp(1));
            f.add_term(FormIdx::Dp(2), -Rat::one());
            let w = wedge_abstract(&f, &Form1::basis(FormIdx::Om(1, 2, a)));
            assert!(w.is_zero(), "alpha = {a}");
        }
    }

    #[test]
    fn same_pair_log_forms_vanish() {
        for (a, b) in [(0, 0), (0, 1), (2, 1), (3, 3)] {
            let w = wedge_basis(FormIdx::Om(1, 2, a), FormIdx::Om(1, 2, b));
            assert!(w.is_zero());
        }
    }

    #[test]
    fn mixed_first_pair_rewrites_like_the_kernel_relation() {
        // om_12^0 ^ om_13^0 expands with the frozen coefficients.
        let w = wedge_basis(FormIdx::Om(1, 2, 0), FormIdx::Om(1, 3, 0));
        let mut expected = Form2InI::default();
        expected.add_term(IBasisIdx::S2(1, 2, 3, 0, 0), Rat::one());
        expected.add_term(IBasisIdx::S3(1, 2, 3, 0, 0), -Rat::one());
        expected.add_term(IBasisIdx::Qp(1, 3, 1), Rat::one());
        expected.add_term(IBasisIdx::Q(2, 1, 3, 1), -Rat::one());
        expected.add_term(IBasisIdx::Qp(1, 2, 1), -Rat::one());
        expected.add_term(IBasisIdx::Q(3, 1, 2, 1), Rat::one());
        expected.add_term(IBasisIdx::Q(1, 2, 3, 1), Rat::one());
        expected.add_term(IBasisIdx::Qp(2, 3, 1), -Rat::one());
        assert_eq!(w, expected);
    }

    #[test]
    fn kernel_generators_die_in_the_quotient() {
        let gens = [
            KGen::R(1, 2, 0),
            KGen::R(1, 3, 2),
            KGen::S(1, 2, 3, 1),
            KGen::S(2, 3, 2, 0),
            KGen::T(1, 2, 3, 0, 0),
            KGen::T(1, 2, 3, 1, 2),
            KGen::T(2, 3, 4, 2, 1),
        ];
        for g in gens {
            assert!(g.wedge_image().is_zero(), "generator {g}");
        }
    }

    #[test]
    fn differential_kills_invariant_frames_and_preserves_degree() {
        assert!(d_basis(FormIdx::Dc(1)).is_zero());
        assert!(d_basis(FormIdx::Dp(2)).is_zero());
        for idx in FormIdx::basis(3, 3) {
            let d = d_basis(idx);
            for (out, _) in &d.coeffs {
                assert_eq!(out.degree(), idx.degree(), "degree drift at {idx:?}");
            }
        }
        // d(om_12^3) = -dc_12 ^ om_12^2 expanded
        let d = d_basis(FormIdx::Om(1, 2, 3));
        let mut expected = Form2InI::default();
        expected.add_term(IBasisIdx::CpOm(1, 1, 2, 2), -Rat::one());
        expected.add_term(IBasisIdx::CpOm(2, 1, 2, 2), Rat::one());
        assert_eq!(d, expected);
    }

    #[test]
    fn wedge_is_degree_zero_for_the_grading() {
        for a in FormIdx::basis(3, 2) {
            for b in FormIdx::basis(3, 2) {
                let w = wedge_basis(a, b);
                for (out, _) in &w.coeffs {
                    assert_eq!(
                        out.degree(),
                        a.degree() + b.degree(),
                        "grading broken at {a:?} ^ {b:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn wedge_antisymmetry_on_all_basis_pairs() {
        for a in FormIdx::basis(3, 2) {
            for b in FormIdx::basis(3, 2) {
                let ab = wedge_basis(a, b);
                let ba = wedge_basis(b, a);
                assert_eq!(ab, ba.neg(), "antisymmetry at {a:?}, {b:?}");
            }
        }
    }
}
