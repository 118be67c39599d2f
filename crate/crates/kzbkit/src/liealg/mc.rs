//! Flatness of the canonical connection form and the gauge identity linking
//! it to the configuration-space connection.
//!
//! The canonical 1-form pairs each dual generator with its basis 1-form;
//! the coefficient of every 2-form basis element in `d omega + omega^2/2`
//! must reproduce the relation table on the nose.

use std::collections::BTreeMap;

use super::lyndon::{FreeLie, LieElem};
use super::present::{x_gen, GradedQuotient};
use super::relations::{relations_g, GAlphabet, RelationTable};
use crate::elliptic::fay::phi_vector;
use crate::exactalg::{LinearForm, Rat, VarTable};
use crate::forms::{d_basis, wedge_basis, FormIdx, IBasisIdx};
use crate::{Error, Result};

/// Compute the coefficients of `d omega + omega^2 / 2` on the 2-form image
/// basis, where omega pairs X_i with dc_i, Y_i with dp_i, and T_{ij}^a with
/// om_{ij}^a for a <= a_max.
pub fn maurer_cartan(n: u8, a_max: u32) -> (GAlphabet, FreeLie, BTreeMap<IBasisIdx, LieElem>) {
    let table = relations_g(n, a_max, None);
    let alphabet = table.alphabet.clone();
    let alg = FreeLie::new(alphabet.num_gens());
    let mut omega: Vec<(LieElem, FormIdx)> = Vec::new();
    for i in 1..=n {
        omega.push((alphabet.x(i), FormIdx::Dc(i)));
        omega.push((alphabet.y(i), FormIdx::Dp(i)));
    }
    for i in 1..=n {
        for j in i + 1..=n {
            for a in 0..=a_max {
                omega.push((alphabet.t(i, j, a), FormIdx::Om(i, j, a)));
            }
        }
    }
    let mut coeffs: BTreeMap<IBasisIdx, LieElem> = BTreeMap::new();
    let mut add = |idx: IBasisIdx, e: LieElem| {
        if e.is_zero() {
            return;
        }
        let slot = coeffs.entry(idx).or_insert_with(LieElem::zero);
        *slot = slot.add(&e);
        if slot.is_zero() {
            coeffs.remove(&idx);
        }
    };
    // d omega
    for (gen, form) in &omega {
        for (idx, c) in &d_basis(*form).coeffs {
            add(*idx, gen.scale(c));
        }
    }
    // omega^2 / 2
    let half = Rat::new(1, 2);
    for (ga, fa) in &omega {
        for (gb, fb) in &omega {
            let br = alg.bracket(ga, gb);
            if br.is_zero() {
                continue;
            }
            for (idx, c) in &wedge_basis(*fa, *fb).coeffs {
                add(*idx, br.scale(&(c * &half)));
            }
        }
    }
    (alphabet, alg, coeffs)
}

/// Complete-range comparison of the flatness coefficients against the
/// relation table; indices whose coefficient would need generators beyond
/// a_max are outside the certified range and are ignored on both sides.
pub fn maurer_cartan_check(n: u8, a_max: u32) -> Result<usize> {
    let (_, _, coeffs) = maurer_cartan(n, a_max);
    let table: RelationTable = relations_g(n, a_max, None);
    let in_range = |idx: &IBasisIdx| -> bool {
        match *idx {
            IBasisIdx::Cc(_, _) | IBasisIdx::CpDp(_, _) | IBasisIdx::P(_, _) => true,
            IBasisIdx::CpOm(_, _, _, a) => a + 1 <= a_max,
            IBasisIdx::Q(_, _, _, s) | IBasisIdx::Qp(_, _, s) => s <= a_max,
            IBasisIdx::S2(_, _, _, a, b) | IBasisIdx::S3(_, _, _, a, b) => a + b <= a_max,
            IBasisIdx::S4(_, _, _, _, a, b) => a <= a_max && b <= a_max,
        }
    };
    let mut checked = 0usize;
    for (idx, entry) in &table.entries {
        if !in_range(idx) {
            continue;
        }
        let got = coeffs.get(idx).cloned().unwrap_or_else(LieElem::zero);
        if &got != entry {
            return Err(Error::VerificationFailed {
                item: "maurer-cartan-flat".into(),
                detail: format!("coefficient of {idx:?} differs from the relation table"),
            });
        }
        checked += 1;
    }
    // no spurious in-range coefficients outside the table
    for idx in coeffs.keys() {
        if in_range(idx) && !table.entries.contains_key(idx) {
            return Err(Error::VerificationFailed {
                item: "maurer-cartan-flat".into(),
                detail: format!("unexpected coefficient at {idx:?}"),
            });
        }
    }
    Ok(checked)
}

/// A Lie-algebra element with polynomial coefficients in the fiber
/// translation parameters c_1..c_n: a map from c-exponent vectors to
/// rational Lie elements.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PolyLie {
    pub terms: BTreeMap<Vec<u16>, LieElem>,
}

impl PolyLie {
    fn add_term(&mut self, exps: Vec<u16>, e: &LieElem) {
        if e.is_zero() {
            return;
        }
        let slot = self.terms.entry(exps).or_insert_with(LieElem::zero);
        *slot = slot.add(e);
        if slot.is_zero() {
            let dead: Vec<Vec<u16>> = self
                .terms
                .iter()
                .filter(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in dead {
                self.terms.remove(&k);
            }
        }
    }
}

/// Verify, in the truncated braid-type quotient with symbolic translation
/// parameters, that conjugating t_{ij} by exp(sum c_k x_k) agrees with
/// exp(c_{ij} ad x_i) applied to t_{ij}, through bracket length `depth`.
pub fn kzb_gauge_check(n: u8, depth: usize, order: usize) -> Result<()> {
    let q = GradedQuotient::present_t1n(n as usize, depth)?;
    let nn = n as usize;
    for i in 1..=nn {
        for j in i + 1..=nn {
            let t_bar = q.t_class(i, j)?;
            // left side: exp(ad u)(t) with u = sum c_k x_k
            let mut lhs = PolyLie::default();
            lhs.add_term(vec![0; nn], &t_bar);
            let mut layer = PolyLie::default();
            layer.add_term(vec![0; nn], &t_bar);
            // the m-th layer has bracket length m + 2
            for m in 1..=depth.saturating_sub(2) as u32 {
                let mut next = PolyLie::default();
                for (exps, v) in &layer.terms {
                    for k in 1..=nn {
                        let br =
                            q.reduce(&q.alg.bracket(&LieElem::generator(x_gen(nn, k)), v))?;
                        if br.is_zero() {
                            continue;
                        }
                        let mut e2 = exps.clone();
                        e2[k - 1] += 1;
                        next.add_term(e2, &br.scale(&Rat::from_int(m as i64).inv()?));
                    }
                }
                layer = next;
                if layer.terms.is_empty() {
                    break;
                }
                for (exps, v) in &layer.terms {
                    lhs.add_term(exps.clone(), v);
                }
            }
            // right side: sum_m (c_i - c_j)^m / m! (ad x_i)^m (t)
            let mut rhs = PolyLie::default();
            let mut w = t_bar.clone();
            for mm in 0..=depth.saturating_sub(2) as u32 {
                if mm > 0 {
                    w = q.reduce(&q.alg.bracket(&LieElem::generator(x_gen(nn, i)), &w))?;
                    if w.is_zero() {
                        break;
                    }
                }
                // expand (c_i - c_j)^mm into exponent vectors
                for r in 0..=mm {
                    let sign = if (mm - r) % 2 == 0 { Rat::one() } else { -Rat::one() };
                    let coeff = Rat::binomial(mm, r) * sign / Rat::factorial(mm);
                    let mut exps = vec![0u16; nn];
                    exps[i - 1] = r as u16;
                    exps[j - 1] = (mm - r) as u16;
                    rhs.add_term(exps, &w.scale(&coeff));
                }
            }
            if lhs != rhs {
                let witness = lhs
                    .terms
                    .iter()
                    .find(|(k, v)| rhs.terms.get(*k) != Some(v))
                    .map(|(k, _)| k.clone());
                return Err(Error::VerificationFailed {
                    item: "kzb-gauge".into(),
                    detail: format!(
                        "conjugation mismatch for pair ({i},{j}), first differing c-monomial {witness:?}"
                    ),
                });
            }
        }
    }
    // bookkeeping identity at the level of the universal generating
    // function: the coefficients of the connection satisfy
    // G_a(-p) = (-1)^{a+1} G_a(p), and in the quotient
    // (ad x_j)^a(t_ij) = (-1)^a (ad x_i)^a(t_ij); together the two
    // half-sum terms of the connection cancel pairwise.
    gauge_antisymmetrization_check(&q, order)?;
    Ok(())
}

fn gauge_antisymmetrization_check(q: &GradedQuotient, order: usize) -> Result<()> {
    let a_bound = (q.max_len.saturating_sub(2)).min(4) as i64;
    // parity of the expansion coefficients of F(p, x) - 1/x at t = 0
    let phi = phi_vector(a_bound as usize, order)?;
    let fv = VarTable::of(&["p", "w"]);
    let t_idx = 2usize; // parameter order: g2, g3, t
    for a in 0..=a_bound {
        let g = phi[(a + 1) as usize].specialize_params(&[(t_idx, Rat::zero())]);
        let minus_p = LinearForm::var(&fv, "p")?.negate();
        let flipped = g.substitute(&fv, &[("p", minus_p)])?;
        let sign = if (a + 1) % 2 == 0 { Rat::one() } else { -Rat::one() };
        let expected = g.scale(&sign);
        if !flipped.frac_equal(&expected)?.equal {
            return Err(Error::VerificationFailed {
                item: "kzb-gauge".into(),
                detail: format!("expansion coefficient {a} has the wrong parity"),
            });
        }
    }
    // bracket side, e.g. for the pair (1,2)
    let nn = q.n;
    let t_bar = q.t_class(1, 2)?;
    for a in 0..=(q.max_len.saturating_sub(2)).min(4) as u32 {
        let lhs = q.reduce(&q.alg.ad_pow(&LieElem::generator(x_gen(nn, 2)), a, &t_bar))?;
        let rhs = q.reduce(&q.alg.ad_pow(&LieElem::generator(x_gen(nn, 1)), a, &t_bar))?;
        let sign = if a % 2 == 0 { Rat::one() } else { -Rat::one() };
        if lhs != rhs.scale(&sign) {
            return Err(Error::VerificationFailed {
                item: "kzb-gauge".into(),
                detail: format!("bracket parity fails at power {a}"),
            });
        }
    }
    Ok(())
}

/// The c-specialization sanity check: setting c_2 = c_1 collapses both
/// sides of the gauge identity to the bare class of t_{12}.
pub fn gauge_specialization_check(n: u8, depth: usize) -> Result<()> {
    let q = GradedQuotient::present_t1n(n as usize, depth)?;
    let nn = n as usize;
    let t_bar = q.t_class(1, 2)?;
    // exp(ad c_1 (x_1 + x_2))(t_12) with the substitution c_2 -> c_1:
    // [x_1 + x_2, t_12] = 0, so only the m = 0 layer survives.
    let xsum = LieElem::generator(x_gen(nn, 1)).add(&LieElem::generator(x_gen(nn, 2)));
    let br = q.reduce(&q.alg.bracket(&xsum, &t_bar))?;
    if !br.is_zero() {
        return Err(Error::VerificationFailed {
            item: "kzb-gauge".into(),
            detail: "[x_1 + x_2, t_12] does not vanish in the quotient".into(),
        });
    }
    // first-order term in c: [sum c_k x_k, t_12] = c_12 [x_1, t_12]
    let mut first_order: BTreeMap<usize, LieElem> = BTreeMap::new();
    for k in 1..=nn {
        let v = q.reduce(&q.alg.bracket(&LieElem::generator(x_gen(nn, k)), &t_bar))?;
        if !v.is_zero() {
            first_order.insert(k, v);
        }
    }
    let x1t = q.reduce(&q.alg.bracket(&LieElem::generator(x_gen(nn, 1)), &t_bar))?;
    let expected: BTreeMap<usize, LieElem> =
        [(1usize, x1t.clone()), (2usize, x1t.neg())].into_iter().collect();
    if first_order != expected {
        return Err(Error::VerificationFailed {
            item: "kzb-gauge".into(),
            detail: "first-order term is not c_12 [x_1, t_12]".into(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flatness_coefficients_reproduce_the_table() {
        let checked = maurer_cartan_check(3, 2).unwrap();
        assert!(checked > 0);
        maurer_cartan_check(2, 3).unwrap();
    }

    #[test]
    fn flatness_spot_values() {
        let (alphabet, alg, coeffs) = maurer_cartan(3, 1);
        // coefficient of the fiber-pair form is [X_1, X_2]
        assert_eq!(
            coeffs[&IBasisIdx::Cc(1, 2)],
            alg.bracket(&alphabet.x(1), &alphabet.x(2))
        );
        // coefficient of the base pair is [Y_1, Y_2]
        assert_eq!(
            coeffs[&IBasisIdx::P(1, 2)],
            alg.bracket(&alphabet.y(1), &alphabet.y(2))
        );
        // coefficient of Q'(1,2,0) is [Y_1 + Y_2, T_12^0]
        assert_eq!(
            coeffs[&IBasisIdx::Qp(1, 2, 0)],
            alg.bracket(&alphabet.y(1).add(&alphabet.y(2)), &alphabet.t(1, 2, 0))
        );
    }

    #[test]
    fn gauge_identity_two_points() {
        kzb_gauge_check(2, 5, 8).unwrap();
        gauge_specialization_check(2, 5).unwrap();
    }
}
