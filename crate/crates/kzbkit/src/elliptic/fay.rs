//! Fay identities: the three-term quadratic identity for the theta quotient
//! `F(p,z) = theta(p+z)/(theta(p)theta(z))` in four formal variables, and its
//! pullback to the n-point model along the difference dictionary
//! `p -> p_i - p_j`, `t -> t_i - t_j`.

use super::{theta_tilde_univ, theta_unit, Fault, UniversalCurve};
use crate::exactalg::{FracSeries, LinearForm, MultiPoly, Rat, TruncatedSeries, VarTable};
use crate::{Error, Result};

/// Substituted theta quotient `F(a, b) = theta(a+b)/(theta(a) theta(b))` as a
/// fraction with denominators `{a, b}`.
fn theta_quotient(
    theta_1var: &TruncatedSeries,
    inv_unit_1var: &TruncatedSeries,
    target: &VarTable,
    a: &LinearForm,
    b: &LinearForm,
) -> Result<FracSeries> {
    let apb_entries: Vec<(&str, Rat)> = {
        let mut acc: std::collections::BTreeMap<usize, Rat> = std::collections::BTreeMap::new();
        for (i, c) in a.coeffs() {
            *acc.entry(i).or_insert_with(Rat::zero) += c.clone();
        }
        for (i, c) in b.coeffs() {
            *acc.entry(i).or_insert_with(Rat::zero) += c.clone();
        }
        acc.into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (target.name(i), c))
            .collect()
    };
    let apb = LinearForm::new(target, &apb_entries)?;
    let theta_sum = theta_1var.substitute(target, &[("u", apb)])?;
    let inv_a = inv_unit_1var.substitute(target, &[("u", a.clone())])?;
    let inv_b = inv_unit_1var.substitute(target, &[("u", b.clone())])?;
    let numer = theta_sum.mul(&inv_a)?.mul(&inv_b)?;
    FracSeries::new(numer, vec![a.clone(), b.clone()])
}

/// Verify the three-term identity
/// `F(p,z)F(p+p',z') - F(p',z')F(p,z+z') + F(p+p',z+z')F(p',-z) = 0`
/// with symbolic invariants, through the given total order. Returns the
/// certified order of the cleared residual.
pub fn fay_universal(order: usize, fault: Option<Fault>) -> Result<usize> {
    if order < 6 {
        return Err(Error::InvalidConfig("fay check needs order >= 6".into()));
    }
    let internal = order + 6;
    let curve = UniversalCurve::generate(internal, None);
    let params = super::g_params();
    let one_var = VarTable::of(&["u"]);
    let theta = theta_tilde_univ(&curve, &one_var, &params, "u", internal)?;
    let inv_unit = theta_unit(&curve, &one_var, &params, "u", internal)?.inv()?;
    let fv = VarTable::of(&["p", "pp", "z", "zp"]);
    let form = |entries: &[(&str, i64)]| -> LinearForm {
        let e: Vec<(&str, Rat)> = entries.iter().map(|&(n, c)| (n, Rat::from_int(c))).collect();
        LinearForm::new(&fv, &e).unwrap()
    };
    let p = form(&[("p", 1)]);
    let ppr = form(&[("pp", 1)]);
    let z = form(&[("z", 1)]);
    let zpr = form(&[("zp", 1)]);
    let p_sum = form(&[("p", 1), ("pp", 1)]);
    let z_sum = form(&[("z", 1), ("zp", 1)]);
    let minus_z = form(&[("z", -1)]);

    let t1 = theta_quotient(&theta, &inv_unit, &fv, &p, &z)?
        .mul(&theta_quotient(&theta, &inv_unit, &fv, &p_sum, &zpr)?)?;
    let t2 = theta_quotient(&theta, &inv_unit, &fv, &ppr, &zpr)?
        .mul(&theta_quotient(&theta, &inv_unit, &fv, &p, &z_sum)?)?;
    let mut t3 = theta_quotient(&theta, &inv_unit, &fv, &p_sum, &z_sum)?
        .mul(&theta_quotient(&theta, &inv_unit, &fv, &ppr, &minus_z)?)?;
    if fault == Some(Fault::FayThirdTermSign) {
        t3 = t3.neg();
    }
    let residual = t1.sub(&t2)?.add(&t3)?;
    let certified = residual
        .sub(&FracSeries::zero(&fv, &params, order))?
        .certify_zero()
        .map_err(|e| match e {
            Error::VerificationFailed { detail, .. } => Error::VerificationFailed {
                item: "fay-universal".into(),
                detail,
            },
            other => other,
        })?;
    Ok(certified)
}

/// The n-point parameter table g2, g3, t1..tn.
pub fn npoint_params(n: usize) -> VarTable {
    let mut names = vec!["g2".to_string(), "g3".to_string()];
    names.extend(VarTable::indexed("t", n));
    VarTable::new(names)
}

/// The n-point formal table p1..pn, optionally with extra expansion variables.
pub fn npoint_formal(n: usize, extra: &[&str]) -> VarTable {
    let mut names = VarTable::indexed("p", n);
    names.extend(extra.iter().map(|s| s.to_string()));
    VarTable::new(names)
}

pub fn t_diff(params: &VarTable, i: usize, j: usize) -> MultiPoly {
    let ti = MultiPoly::var(params, &format!("t{i}")).unwrap();
    let tj = MultiPoly::var(params, &format!("t{j}")).unwrap();
    ti.sub(&tj).unwrap()
}

pub fn p_diff(formal: &VarTable, i: usize, j: usize) -> LinearForm {
    LinearForm::diff(formal, &format!("p{i}"), &format!("p{j}")).unwrap()
}

/// Laurent coefficients of `F(p, w) e^{-t w}` in `w`, from `w^{-1}` up to
/// `w^{a_max}`: entry m is the coefficient of `w^{m-1}` as a fraction in `p`
/// (entry 0 is the constant 1).
pub fn phi_vector(a_max: usize, order: usize) -> Result<Vec<FracSeries>> {
    let internal = order + a_max + 3;
    let curve = UniversalCurve::generate(internal, None);
    let params = super::can_params();
    let one_var = VarTable::of(&["u"]);
    let theta = theta_tilde_univ(&curve, &one_var, &params, "u", internal)?;
    let inv_unit = theta_unit(&curve, &one_var, &params, "u", internal)?.inv()?;
    let fv = VarTable::of(&["p", "w"]);
    let p = LinearForm::var(&fv, "p")?;
    let w = LinearForm::var(&fv, "w")?;
    let f = theta_quotient(&theta, &inv_unit, &fv, &p, &w)?;
    // e^{-t w}
    let t = MultiPoly::var(&params, "t").unwrap();
    let arg = TruncatedSeries::from_linear_form(&w, &params, internal).scale_poly(&t.neg())?;
    let g = f.mul_series(&arg.exp()?)?;
    g.laurent_coeffs_in_var("w", -1, a_max as i64 + 1)
}

/// Pull a one-point fraction in `(p; t)` back along `p -> p_i - p_j`,
/// `t -> t_i - t_j`.
pub fn pullback_pair(
    value: &FracSeries,
    formal: &VarTable,
    params: &VarTable,
    i: usize,
    j: usize,
) -> Result<FracSeries> {
    let pij = p_diff(formal, i, j);
    // strip the unused w slot by substituting w -> w... the one-point table
    // is (p, w); map p to the difference and w to any fresh slot is not
    // needed since w no longer occurs.
    let subbed = value.substitute(formal, &[("p", pij), ("w", dummy_form(formal))])?;
    let g2 = MultiPoly::var(params, "g2").unwrap();
    let g3 = MultiPoly::var(params, "g3").unwrap();
    subbed.substitute_params(params, &[g2, g3, t_diff(params, i, j)])
}

fn dummy_form(formal: &VarTable) -> LinearForm {
    LinearForm::var(formal, formal.name(0)).unwrap()
}

/// Result of the n-point Fay verification.
pub struct NPointFay {
    pub certified_order: usize,
    /// Number of coefficientwise pulled-back relations certified by the
    /// independent expansion route.
    pub relations_checked: usize,
}

/// Verify the three-term identity among the pulled-back generating series
/// attached to a triple `i < j < k` inside the n-point model, then certify
/// the coefficientwise relations among the pulled-back functions by an
/// independent expansion route.
pub fn fay_npoint(
    n: usize,
    (i, j, k): (usize, usize, usize),
    a_max: usize,
    order: usize,
    fault: Option<Fault>,
) -> Result<NPointFay> {
    if !(1 <= i && i < j && j < k && k <= n) {
        return Err(Error::IndexOutOfRange(format!("triple ({i},{j},{k}) in [{n}]")));
    }
    let internal = order + 4;
    let curve = UniversalCurve::generate(internal + a_max + 2, None);
    let params = npoint_params(n);
    let one_var = VarTable::of(&["u"]);
    let theta = theta_tilde_univ(&curve, &one_var, &params, "u", internal)?;
    let inv_unit = theta_unit(&curve, &one_var, &params, "u", internal)?.inv()?;
    let fv = npoint_formal(n, &["z", "zp"]);
    let z = LinearForm::var(&fv, "z")?;
    let zp = LinearForm::var(&fv, "zp")?;
    let z_sum = LinearForm::sum(&fv, "z", "zp")?;
    let minus_z = z.negate();

    // f_ab(w) = F(p_a - p_b, w) e^{-(t_a - t_b) w}
    let factor = |a: usize, b: usize, w: &LinearForm| -> Result<FracSeries> {
        let pab = p_diff(&fv, a, b);
        let f = theta_quotient(&theta, &inv_unit, &fv, &pab, w)?;
        let arg = TruncatedSeries::from_linear_form(w, &params, internal)
            .scale_poly(&t_diff(&params, a, b).neg())?;
        f.mul_series(&arg.exp()?)
    };

    let t1 = factor(i, j, &z)?.mul(&factor(i, k, &zp)?)?;
    let t2 = factor(i, j, &z_sum)?.mul(&factor(j, k, &zp)?)?;
    let mut t3 = factor(j, k, &minus_z)?.mul(&factor(i, k, &z_sum)?)?;
    if fault == Some(Fault::FayThirdTermSign) {
        t3 = t3.neg();
    }
    let residual = t1.sub(&t2)?.add(&t3)?;
    let capped = residual.sub(&FracSeries::zero(&fv, &params, order))?;
    let certified = capped.certify_zero().map_err(|e| match e {
        Error::VerificationFailed { detail, .. } => Error::VerificationFailed {
            item: "fay-npoint".into(),
            detail,
        },
        other => other,
    })?;

    // Independent route: expand each factor as a Laurent vector in its own
    // expansion variable and assemble the cleared identity coefficientwise.
    let relations = npoint_fay_coefficients(n, (i, j, k), a_max, order)?;
    for ((a, b), value) in &relations {
        value.certify_zero().map_err(|e| match e {
            Error::VerificationFailed { detail, .. } => Error::VerificationFailed {
                item: "fay-npoint".into(),
                detail: format!("coefficient route at z^{a} zp^{b}: {detail}"),
            },
            other => other,
        })?;
    }
    Ok(NPointFay {
        certified_order: certified,
        relations_checked: relations.len(),
    })
}

/// Coefficients of `z z' (z+z') (T1 - T2 + T3)` at `z^a z'^b`, computed from
/// the Laurent vectors of the three pulled-back series (no two-variable
/// expansion machinery involved).
pub fn npoint_fay_coefficients(
    n: usize,
    (i, j, k): (usize, usize, usize),
    a_max: usize,
    order: usize,
) -> Result<Vec<((usize, usize), FracSeries)>> {
    let params = npoint_params(n);
    let formal_1pt = VarTable::of(&["p", "w"]);
    let phi = phi_vector(a_max + 2, order + 2)?;
    let fv = npoint_formal(n, &[]);
    let pull = |a: usize, b: usize| -> Result<Vec<FracSeries>> {
        phi.iter()
            .map(|v| {
                let g2 = MultiPoly::var(&params, "g2").unwrap();
                let g3 = MultiPoly::var(&params, "g3").unwrap();
                let one_pt_params = super::can_params();
                let _ = &one_pt_params;
                let moved = v.substitute(&fv, &[
                    ("p", p_diff(&fv, a, b)),
                    ("w", LinearForm::var(&fv, "p1").unwrap()),
                ])?;
                moved.substitute_params(&params, &[g2, g3, t_diff(&params, a, b)])
            })
            .collect()
    };
    let _ = formal_1pt;
    let phi_ij = pull(i, j)?;
    let phi_ik = pull(i, k)?;
    let phi_jk = pull(j, k)?;
    let zero = FracSeries::zero(&fv, &params, order);
    let get = |v: &Vec<FracSeries>, m: i64| -> FracSeries {
        if m < 0 || m as usize >= v.len() {
            zero.clone()
        } else {
            v[m as usize].clone()
        }
    };
    let binom = |n: usize, k: usize| Rat::binomial(n as u32, k as u32);
    let mut out = Vec::new();
    let bound = a_max + 1;
    for a in 0..=bound {
        for b in 0..=bound.saturating_sub(a) {
            // T1: A_{a-1} B_b + A_a B_{b-1}
            let mut acc = get(&phi_ij, a as i64 - 1)
                .mul(&get(&phi_ik, b as i64))?
                .add(&get(&phi_ij, a as i64).mul(&get(&phi_ik, b as i64 - 1))?)?;
            // T2: - sum_{b1+b2=b} Phi_ij[a-1+b1] C(a-1+b1, a-1) Phi_jk[b2]
            if a >= 1 {
                for b1 in 0..=b {
                    let b2 = b - b1;
                    let d = get(&phi_ij, (a - 1 + b1) as i64)
                        .scale(&binom(a - 1 + b1, a - 1));
                    acc = acc.sub(&d.mul(&get(&phi_jk, b2 as i64))?)?;
                }
            }
            // T3: sum_{a1+a2=a} (-1)^{a1-1} Phi_jk[a1] Phi_ik[a2+b-1] C(a2+b-1, a2)
            if b >= 1 {
                for a1 in 0..=a {
                    let a2 = a - a1;
                    let sign = if (a1 as i64 - 1).rem_euclid(2) == 0 {
                        Rat::one()
                    } else {
                        -Rat::one()
                    };
                    let g = get(&phi_ik, (a2 + b - 1) as i64)
                        .scale(&binom(a2 + b - 1, a2));
                    acc = acc.add(&get(&phi_jk, a1 as i64).mul(&g)?.scale(&sign))?;
                }
            }
            out.push(((a, b), acc));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn universal_fay_passes() {
        let certified = fay_universal(6, None).unwrap();
        assert!(certified >= 6);
    }

    #[test]
    fn universal_fay_degenerate_invariants() {
        // With g2 = g3 = 0 the quotient degenerates to (p+z)/(pz) and the
        // identity becomes a rational-function identity; check it directly.
        let order = 8;
        let fv = VarTable::of(&["p", "pp", "z", "zp"]);
        let params = super::super::g_params();
        let mk = |a: &LinearForm, b: &LinearForm| -> FracSeries {
            // (a+b)/(a*b)
            let mut entries: std::collections::BTreeMap<usize, Rat> = Default::default();
            for (i, c) in a.coeffs() {
                *entries.entry(i).or_insert_with(Rat::zero) += c.clone();
            }
            for (i, c) in b.coeffs() {
                *entries.entry(i).or_insert_with(Rat::zero) += c.clone();
            }
            let list: Vec<(&str, Rat)> = entries
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (fv.name(i), c))
                .collect();
            let apb = LinearForm::new(&fv, &list).unwrap();
            let numer = TruncatedSeries::from_linear_form(&apb, &params, order);
            FracSeries::new(numer, vec![a.clone(), b.clone()]).unwrap()
        };
        let f = |names: &[(&str, i64)]| -> LinearForm {
            let e: Vec<(&str, Rat)> = names.iter().map(|&(n, c)| (n, Rat::from_int(c))).collect();
            LinearForm::new(&fv, &e).unwrap()
        };
        let (p, ppr, z, zpr) = (
            f(&[("p", 1)]),
            f(&[("pp", 1)]),
            f(&[("z", 1)]),
            f(&[("zp", 1)]),
        );
        let p_sum = f(&[("p", 1), ("pp", 1)]);
        let z_sum = f(&[("z", 1), ("zp", 1)]);
        let minus_z = f(&[("z", -1)]);
        let residual = mk(&p, &z)
            .mul(&mk(&p_sum, &zpr))
            .unwrap()
            .sub(&mk(&ppr, &zpr).mul(&mk(&p, &z_sum)).unwrap())
            .unwrap()
            .add(&mk(&p_sum, &z_sum).mul(&mk(&ppr, &minus_z)).unwrap())
            .unwrap();
        residual.certify_zero().unwrap();
        // And the full residual specializes to it at g2 = g3 = 0.
        let full = {
            let internal = order + 6;
            let curve = UniversalCurve::generate(internal, None);
            let one_var = VarTable::of(&["u"]);
            let theta = theta_tilde_univ(&curve, &one_var, &params, "u", internal).unwrap();
            let inv_unit = theta_unit(&curve, &one_var, &params, "u", internal)
                .unwrap()
                .inv()
                .unwrap();
            theta_quotient(&theta, &inv_unit, &fv, &p, &z).unwrap()
        };
        let specialized = full.specialize_params(&[(0, Rat::zero()), (1, Rat::zero())]);
        assert!(specialized.frac_equal(&mk(&p, &z)).unwrap().equal);
    }

    #[test]
    fn universal_fay_mutation_detected() {
        assert!(matches!(
            fay_universal(6, Some(Fault::FayThirdTermSign)),
            Err(Error::VerificationFailed { .. })
        ));
    }

    #[test]
    fn npoint_fay_three_points() {
        let res = fay_npoint(3, (1, 2, 3), 2, 6, None).unwrap();
        assert!(res.certified_order >= 6);
        assert!(res.relations_checked > 0);
    }

    #[test]
    fn npoint_fay_mutation_detected() {
        assert!(matches!(
            fay_npoint(3, (1, 2, 3), 1, 6, Some(Fault::FayThirdTermSign)),
            Err(Error::VerificationFailed { .. })
        ));
    }

    #[test]
    fn zp_limit_is_trivial() {
        // z' * (T1 - T2 + T3) at z' = 0 reduces to f_ij(z) - f_ij(z) = 0:
        // with Laurent vectors, both surviving terms are the same vector.
        let phi = phi_vector(3, 6).unwrap();
        let params = super::super::can_params();
        let _ = params;
        for (m, v) in phi.iter().enumerate() {
            let diff = v.sub(v).unwrap();
            assert!(diff.is_zero(), "slot {m}");
        }
    }

    #[test]
    fn coefficient_2_2_direct_expansion() {
        // Freeze the (2,2) coefficient of the cleared identity by hand and
        // check it against the generic assembly.
        let n = 3;
        let (i, j, k) = (1, 2, 3);
        let order = 6;
        let rels = npoint_fay_coefficients(n, (i, j, k), 3, order).unwrap();
        let at22 = rels
            .iter()
            .find(|((a, b), _)| *a == 2 && *b == 2)
            .map(|(_, v)| v.clone());
        // Assembled by hand:
        // phi_ij^0 phi_ik^1 + phi_ij^1 phi_ik^0
        //   - (phi_ij^0 phi_jk^1 + 2 phi_ij^1 phi_jk^0 + 3 phi_ij^2)
        //   + (-3 phi_ik^2 + 2 phi_jk^0 phi_ik^1 - phi_jk^1 phi_ik^0)
        let params = npoint_params(n);
        let fv = npoint_formal(n, &[]);
        let phi = phi_vector(4, order + 2).unwrap();
        let pull = |a: usize, b: usize, m: usize| -> FracSeries {
            let g2 = MultiPoly::var(&params, "g2").unwrap();
            let g3 = MultiPoly::var(&params, "g3").unwrap();
            phi[m + 1]
                .substitute(
                    &fv,
                    &[
                        ("p", p_diff(&fv, a, b)),
                        ("w", LinearForm::var(&fv, "p1").unwrap()),
                    ],
                )
                .unwrap()
                .substitute_params(&params, &[g2, g3, t_diff(&params, a, b)])
                .unwrap()
        };
        let two = Rat::from_int(2);
        let three = Rat::from_int(3);
        let hand = pull(i, j, 0)
            .mul(&pull(i, k, 1))
            .unwrap()
            .add(&pull(i, j, 1).mul(&pull(i, k, 0)).unwrap())
            .unwrap()
            .sub(&pull(i, j, 0).mul(&pull(j, k, 1)).unwrap())
            .unwrap()
            .sub(&pull(i, j, 1).mul(&pull(j, k, 0)).unwrap().scale(&two))
            .unwrap()
            .sub(&pull(i, j, 2).scale(&three))
            .unwrap()
            .sub(&pull(i, k, 2).scale(&three))
            .unwrap()
            .add(&pull(j, k, 0).mul(&pull(i, k, 1)).unwrap().scale(&two))
            .unwrap()
            .sub(&pull(j, k, 1).mul(&pull(i, k, 0)).unwrap())
            .unwrap();
        hand.certify_zero().unwrap();
        if let Some(generic) = at22 {
            assert!(generic.frac_equal(&hand).unwrap().equal);
        } else {
            panic!("missing (2,2) coefficient");
        }
    }
}
