//! Universal elliptic series and the function theory of the extended curve:
//! the Weierstrass series with symbolic invariants, the coordinate ring with
//! its derivation and formal embedding, the simple-pole function family, and
//! the Fay identities.

pub mod aelem;
pub mod falpha;
pub mod fay;

pub use aelem::{AElem, CanCtx};
pub use falpha::{mu_restrict, verify_interm, FSeriesGen};
pub use fay::{fay_npoint, fay_universal};

use crate::exactalg::{FracSeries, LinearForm, MultiPoly, Rat, TruncatedSeries, VarTable};
use crate::{Error, Result};

/// Deliberate single-constant mutations for harness sensitivity testing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Replace the first Weierstrass coefficient g2/20 by g2/19.
    WpA2Denominator,
    /// Flip the sign of the third term of the four-variable Fay identity.
    FayThirdTermSign,
    /// Bump one binomial coefficient in the mixed two-index relation family.
    SigmaBinomial,
}

pub fn g_params() -> VarTable {
    VarTable::of(&["g2", "g3"])
}

/// Parameter table for the one-point formal model: curve invariants plus the
/// fiber coordinate.
pub fn can_params() -> VarTable {
    VarTable::of(&["g2", "g3", "t"])
}

/// Coefficients of the universal Weierstrass series: `1/p^2 + sum a_n p^n`
/// with `a_n` a polynomial in the symbolic invariants.
#[derive(Clone, Debug)]
pub struct UniversalCurve {
    a: Vec<MultiPoly>,
    vars: VarTable,
}

impl UniversalCurve {
    /// Compute `a_0 ... a_nmax`. The differential equation forces
    /// `a_0 = 0`, `a_2 = g2/20`, `a_4 = g3/28`, all odd coefficients zero,
    /// and for even `n >= 6`
    /// `(n^2 - n - 12) a_n = 6 sum_{p,q>=2, p+q=n-2} a_p a_q`.
    pub fn generate(n_max: usize, fault: Option<Fault>) -> Self {
        let vars = g_params();
        let zero = MultiPoly::zero(&vars);
        let mut a = vec![zero.clone(); n_max + 1];
        if n_max >= 2 {
            let den = if fault == Some(Fault::WpA2Denominator) { 19 } else { 20 };
            a[2] = MultiPoly::var(&vars, "g2").unwrap().scale(&Rat::new(1, den));
        }
        if n_max >= 4 {
            a[4] = MultiPoly::var(&vars, "g3").unwrap().scale(&Rat::new(1, 28));
        }
        for n in (6..=n_max).step_by(2) {
            let mut sum = zero.clone();
            for p in (2..=n - 4).step_by(2) {
                let q = n - 2 - p;
                sum = sum.add(&a[p].mul(&a[q]).unwrap()).unwrap();
            }
            let scale = Rat::from_int(6) / Rat::from_int((n * n - n - 12) as i64);
            a[n] = sum.scale(&scale);
        }
        UniversalCurve { a, vars }
    }

    pub fn n_max(&self) -> usize {
        self.a.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &MultiPoly {
        &self.a[n]
    }

    pub fn invariant_vars(&self) -> &VarTable {
        &self.vars
    }

    /// Every coefficient `a_n` is weight-homogeneous of weight `n + 2` under
    /// `wt(g2) = 4`, `wt(g3) = 6`.
    pub fn check_weights(&self) -> Result<()> {
        for (n, an) in self.a.iter().enumerate() {
            if !an.is_zero() && !an.is_weight_homogeneous(&[4, 6], n as u32 + 2) {
                return Err(Error::VerificationFailed {
                    item: "weight-homogeneity".into(),
                    detail: format!("a_{n} is not of weight {}", n + 2),
                });
            }
        }
        Ok(())
    }
}

/// Map a polynomial in g2, g3 into a larger parameter table by name.
pub(crate) fn embed_coeff(c: &MultiPoly, params: &VarTable) -> MultiPoly {
    let images: Vec<MultiPoly> = c
        .vars()
        .names()
        .iter()
        .map(|n| MultiPoly::var(params, n).expect("parameter table contains the invariants"))
        .collect();
    c.substitute(params, &images).expect("embedding by name")
}

/// The unit series `theta / p = exp(-sum a_n p^{n+2} / ((n+1)(n+2)))`.
pub fn theta_unit(
    curve: &UniversalCurve,
    formal: &VarTable,
    params: &VarTable,
    var: &str,
    order: usize,
) -> Result<TruncatedSeries> {
    let mut arg = TruncatedSeries::zero(formal, params, order);
    let idx = formal.index_of(var)?;
    for n in 0..=curve.n_max().min(order.saturating_sub(3)) {
        if curve.coeff(n).is_zero() {
            continue;
        }
        let scale = -(Rat::one() / Rat::from_int(((n + 1) * (n + 2)) as i64));
        let c = embed_coeff(curve.coeff(n), params).scale(&scale);
        let mut e = vec![0u16; formal.len()];
        e[idx] = (n + 2) as u16;
        arg = arg.add(&TruncatedSeries::monomial(formal, params, e, c, order))?;
    }
    arg.exp()
}

/// `theta = p * theta_unit`, a series of valuation exactly one.
pub fn theta_tilde_univ(
    curve: &UniversalCurve,
    formal: &VarTable,
    params: &VarTable,
    var: &str,
    order: usize,
) -> Result<TruncatedSeries> {
    let unit = theta_unit(curve, formal, params, var, order)?;
    let v = TruncatedSeries::var(formal, params, var, order + 1)?;
    unit.mul_exact(&v)
}

/// The Weierstrass series as `(1 + sum a_n p^{n+2}) / p^2`.
pub fn wp_univ(
    curve: &UniversalCurve,
    formal: &VarTable,
    params: &VarTable,
    var: &str,
    order: usize,
) -> Result<FracSeries> {
    let mut numer = TruncatedSeries::one(formal, params, order);
    let idx = formal.index_of(var)?;
    for n in 0..=curve.n_max().min(order.saturating_sub(3)) {
        if curve.coeff(n).is_zero() {
            continue;
        }
        let c = embed_coeff(curve.coeff(n), params);
        let mut e = vec![0u16; formal.len()];
        e[idx] = (n + 2) as u16;
        numer = numer.add(&TruncatedSeries::monomial(formal, params, e, c, order))?;
    }
    let p = LinearForm::var(formal, var)?;
    FracSeries::new(numer, vec![p.clone(), p])
}

/// The zeta-type primitive: `(1 - sum a_n p^{n+2} / (n+1)) / p`.
pub fn zeta_univ(
    curve: &UniversalCurve,
    formal: &VarTable,
    params: &VarTable,
    var: &str,
    order: usize,
) -> Result<FracSeries> {
    let mut numer = TruncatedSeries::one(formal, params, order);
    let idx = formal.index_of(var)?;
    for n in 0..=curve.n_max().min(order.saturating_sub(3)) {
        if curve.coeff(n).is_zero() {
            continue;
        }
        let c = embed_coeff(curve.coeff(n), params)
            .scale(&-(Rat::one() / Rat::from_int(n as i64 + 1)));
        let mut e = vec![0u16; formal.len()];
        e[idx] = (n + 2) as u16;
        numer = numer.add(&TruncatedSeries::monomial(formal, params, e, c, order))?;
    }
    FracSeries::new(numer, vec![LinearForm::var(formal, var)?])
}

/// Check `(wp')^2 = 4 wp^3 - g2 wp - g3` through order `n`; returns the
/// certified order of the cleared residual.
pub fn verify_weierstrass(n: usize, fault: Option<Fault>) -> Result<usize> {
    if n < 8 {
        return Err(Error::InvalidConfig(
            "weierstrass check needs order >= 8".into(),
        ));
    }
    let curve = UniversalCurve::generate(n, fault);
    let formal = VarTable::of(&["p"]);
    let params = g_params();
    let wp = wp_univ(&curve, &formal, &params, "p", n + 1)?;
    let wp_p = wp.deriv("p")?;
    let g2 = MultiPoly::var(&params, "g2").unwrap();
    let g3 = MultiPoly::var(&params, "g3").unwrap();
    let lhs = wp_p.mul(&wp_p)?;
    let rhs = wp
        .pow(3)?
        .scale(&Rat::from_int(4))
        .sub(&wp.scale_poly(&g2)?)?
        .sub(&FracSeries::from_series(TruncatedSeries::constant(
            &formal,
            &params,
            g3,
            n + 1,
        )))?;
    let residual = lhs.sub(&rhs)?;
    residual.certify_zero().map_err(|e| match e {
        Error::VerificationFailed { detail, .. } => Error::VerificationFailed {
            item: "weierstrass-ode".into(),
            detail,
        },
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_coefficients() {
        let c = UniversalCurve::generate(8, None);
        let vars = c.invariant_vars().clone();
        let g2 = MultiPoly::var(&vars, "g2").unwrap();
        let g3 = MultiPoly::var(&vars, "g3").unwrap();
        assert!(c.coeff(0).is_zero());
        assert!(c.coeff(1).is_zero() && c.coeff(3).is_zero() && c.coeff(5).is_zero());
        assert_eq!(c.coeff(2), &g2.scale(&Rat::new(1, 20)));
        assert_eq!(c.coeff(4), &g3.scale(&Rat::new(1, 28)));
        // a6 = g2^2/1200, a8 = 3 g2 g3 / 6160
        assert_eq!(c.coeff(6), &g2.pow(2).unwrap().scale(&Rat::new(1, 1200)));
        assert_eq!(c.coeff(8), &g2.mul(&g3).unwrap().scale(&Rat::new(3, 6160)));
        c.check_weights().unwrap();
    }

    /// Independent oracle: solve the cleared first-order equation directly,
    /// coefficient by coefficient, and compare with the recursion output.
    #[test]
    fn ode_coefficient_oracle() {
        let n_max = 14;
        let c = UniversalCurve::generate(n_max, None);
        let vars = c.invariant_vars().clone();
        let formal = VarTable::of(&["p"]);
        let order = n_max + 4;
        let mut b: Vec<MultiPoly> = vec![MultiPoly::zero(&vars); n_max + 1];
        for n in (2..=n_max).step_by(2) {
            // Residual (W' p - 2 W)^2 - 4 W^3 + g2 W p^4 + g3 p^6 with
            // W = 1 + sum b_m p^{m+2}; the coefficient b_n enters the
            // p^{n+2} slot linearly, so two evaluations determine it.
            let make = |bn: &MultiPoly| -> TruncatedSeries {
                let mut w = TruncatedSeries::one(&formal, &vars, order);
                for m in (2..=n).step_by(2) {
                    let cm = if m == n { bn.clone() } else { b[m].clone() };
                    if cm.is_zero() {
                        continue;
                    }
                    w = w
                        .add(&TruncatedSeries::monomial(
                            &formal,
                            &vars,
                            vec![(m + 2) as u16],
                            cm,
                            order,
                        ))
                        .unwrap();
                }
                let p = TruncatedSeries::var(&formal, &vars, "p", order).unwrap();
                let wprime = w.deriv("p").unwrap();
                let lhs = wprime
                    .mul(&p)
                    .unwrap()
                    .sub(&w.scale(&Rat::from_int(2)))
                    .unwrap();
                let lhs2 = lhs.mul(&lhs).unwrap();
                let g2 = MultiPoly::var(&vars, "g2").unwrap();
                let g3 = MultiPoly::var(&vars, "g3").unwrap();
                let p4 = p.pow(4).unwrap();
                let p6 = p.pow(6).unwrap();
                lhs2.sub(&w.pow(3).unwrap().scale(&Rat::from_int(4)))
                    .unwrap()
                    .add(&w.mul(&p4).unwrap().scale_poly(&g2).unwrap())
                    .unwrap()
                    .add(&p6.scale_poly(&g3).unwrap())
                    .unwrap()
            };
            let at0 = make(&MultiPoly::zero(&vars));
            let at1 = make(&MultiPoly::one(&vars));
            let target = vec![(n + 2) as u16];
            let r0 = at0.coeff(&target);
            let r1 = at1.coeff(&target);
            let slope = r1.sub(&r0).unwrap();
            let slope_c = slope.as_constant().expect("linear coefficient is rational");
            b[n] = r0.scale(&(-slope_c.inv().unwrap()));
        }
        for m in 0..=n_max {
            assert_eq!(&b[m], c.coeff(m), "coefficient a_{m} disagrees");
        }
    }

    #[test]
    fn theta_is_odd_and_unit_is_even() {
        let curve = UniversalCurve::generate(10, None);
        let formal = VarTable::of(&["p"]);
        let params = g_params();
        let theta = theta_tilde_univ(&curve, &formal, &params, "p", 10).unwrap();
        let minus_p = LinearForm::var(&formal, "p").unwrap().negate();
        let flipped = theta.substitute(&formal, &[("p", minus_p)]).unwrap();
        assert_eq!(flipped, theta.neg().truncate(flipped.order()));
        let unit = theta_unit(&curve, &formal, &params, "p", 9).unwrap();
        assert_eq!(unit.constant_term().as_constant(), Some(Rat::one()));
    }

    #[test]
    fn theta_unit_inverse_low_terms() {
        // 1/(theta/p) = 1 + (g2/240) p^4 + O(p^6), and unit * inv = 1.
        let curve = UniversalCurve::generate(8, None);
        let formal = VarTable::of(&["p"]);
        let params = g_params();
        let unit = theta_unit(&curve, &formal, &params, "p", 6).unwrap();
        let inv = unit.inv().unwrap();
        let g2 = MultiPoly::var(&params, "g2").unwrap();
        assert_eq!(inv.coeff(&[0]), MultiPoly::one(&params));
        assert!(inv.coeff(&[1]).is_zero());
        assert!(inv.coeff(&[2]).is_zero());
        assert!(inv.coeff(&[3]).is_zero());
        assert_eq!(inv.coeff(&[4]), g2.scale(&Rat::new(1, 240)));
        assert!(unit
            .mul(&inv)
            .unwrap()
            .sub(&TruncatedSeries::one(&formal, &params, 6))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn wp_equals_minus_second_log_derivative_of_theta() {
        let n = 12;
        let curve = UniversalCurve::generate(n, None);
        let formal = VarTable::of(&["p"]);
        let params = g_params();
        let wp = wp_univ(&curve, &formal, &params, "p", n).unwrap();
        let unit = theta_unit(&curve, &formal, &params, "p", n).unwrap();
        let dd = unit.log().unwrap().deriv("p").unwrap().deriv("p").unwrap();
        // wp = 1/p^2 - (log unit)''
        let p = LinearForm::var(&formal, "p").unwrap();
        let one = TruncatedSeries::one(&formal, &params, n);
        let inv_p2 = FracSeries::new(one, vec![p.clone(), p]).unwrap();
        let rhs = inv_p2.sub(&FracSeries::from_series(dd)).unwrap();
        assert!(wp.frac_equal(&rhs).unwrap().equal);
    }

    #[test]
    fn zeta_is_dlog_theta() {
        let n = 10;
        let curve = UniversalCurve::generate(n, None);
        let formal = VarTable::of(&["p"]);
        let params = g_params();
        let zeta = zeta_univ(&curve, &formal, &params, "p", n).unwrap();
        let unit = theta_unit(&curve, &formal, &params, "p", n).unwrap();
        let dlog = unit.log().unwrap().deriv("p").unwrap();
        let p = LinearForm::var(&formal, "p").unwrap();
        let inv_p =
            FracSeries::new(TruncatedSeries::one(&formal, &params, n), vec![p]).unwrap();
        let rhs = inv_p.add(&FracSeries::from_series(dlog)).unwrap();
        assert!(zeta.frac_equal(&rhs).unwrap().equal);
    }

    #[test]
    fn wp_times_theta_squared_convolution_oracle() {
        // wp * theta^2 at order 8 has constant term 1; every coefficient is
        // cross-checked against a naive term-by-term convolution.
        let order = 8;
        let curve = UniversalCurve::generate(order, None);
        let formal = VarTable::of(&["p"]);
        let params = g_params();
        let wp = wp_univ(&curve, &formal, &params, "p", order).unwrap();
        let theta = theta_tilde_univ(&curve, &formal, &params, "p", order).unwrap();
        let theta2 = theta.mul(&theta).unwrap();
        // wp * theta^2 = W * unit^2 where W is the numerator of wp.
        let prod = wp.mul_series(&theta2).unwrap();
        // prod = (W * theta^2) / p^2; theta^2 has valuation 2, so the value
        // is a power series. Clear by dividing twice.
        let p = LinearForm::var(&formal, "p").unwrap();
        let cleared = prod
            .numer()
            .div_linear_form(&p)
            .unwrap()
            .div_linear_form(&p)
            .unwrap();
        assert_eq!(cleared.coeff(&[0]), MultiPoly::one(&params));
        // Naive convolution oracle with plain Vec arithmetic.
        let w = wp.numer();
        let naive_order = cleared.order();
        let mut conv: Vec<MultiPoly> = vec![MultiPoly::zero(&params); naive_order];
        let unit = theta_unit(&curve, &formal, &params, "p", order).unwrap();
        let unit2_terms: Vec<MultiPoly> = (0..naive_order)
            .map(|k| {
                let mut acc = MultiPoly::zero(&params);
                for a in 0..=k {
                    acc = acc
                        .add(&unit.coeff(&[a as u16]).mul(&unit.coeff(&[(k - a) as u16])).unwrap())
                        .unwrap();
                }
                acc
            })
            .collect();
        for k in 0..naive_order {
            let mut acc = MultiPoly::zero(&params);
            for a in 0..=k {
                acc = acc
                    .add(&w.coeff(&[a as u16]).mul(&unit2_terms[k - a]).unwrap())
                    .unwrap();
            }
            conv[k] = acc;
        }
        for k in 0..naive_order {
            assert_eq!(cleared.coeff(&[k as u16]), conv[k], "coefficient of p^{k}");
        }
    }

    #[test]
    fn weierstrass_ode_passes_and_mutation_fails() {
        let ord = verify_weierstrass(12, None).unwrap();
        assert!(ord >= 12);
        let err = verify_weierstrass(12, Some(Fault::WpA2Denominator));
        assert!(matches!(err, Err(Error::VerificationFailed { .. })));
    }
}
