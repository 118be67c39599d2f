//! The distinguished functions f_alpha with at most a simple pole along the
//! fiber over the origin, extracted from the generating series
//! `(1/theta(z)) exp(-c z - sum_{k>=2} d^{k-2}(x) z^k / k!)`.

use super::aelem::{AElem, CanCtx};
use super::{theta_unit, UniversalCurve};
use crate::exactalg::{FracSeries, MultiPoly, Rat, TruncatedSeries, VarTable};
use crate::{Error, Result};

/// A power series in one formal variable with coefficients in the coordinate
/// ring; index k holds the coefficient of z^k.
#[derive(Clone, Debug)]
struct ARing {
    coeffs: Vec<AElem>,
}

impl ARing {
    fn zero(len: usize) -> Self {
        ARing {
            coeffs: vec![AElem::zero(); len],
        }
    }

    fn len(&self) -> usize {
        self.coeffs.len()
    }

    fn mul(&self, other: &ARing) -> ARing {
        let len = self.len().min(other.len());
        let mut out = ARing::zero(len);
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                out.coeffs[i + j] = out.coeffs[i + j].add(&a.mul(b));
            }
        }
        out
    }

    fn add(&self, other: &ARing) -> ARing {
        let len = self.len().min(other.len());
        let mut out = ARing::zero(len);
        for k in 0..len {
            out.coeffs[k] = self.coeffs[k].add(&other.coeffs[k]);
        }
        out
    }

    fn scale(&self, c: &Rat) -> ARing {
        ARing {
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
        }
    }

    fn one(len: usize) -> Self {
        let mut out = ARing::zero(len);
        out.coeffs[0] = AElem::one();
        out
    }

    /// exp of a series with zero constant term.
    fn exp(&self) -> ARing {
        assert!(self.coeffs[0].is_zero(), "exp needs zero constant term");
        let len = self.len();
        let mut acc = ARing::one(len);
        let mut power = ARing::one(len);
        for k in 1..len {
            power = power.mul(self);
            acc = acc.add(&power.scale(&Rat::factorial(k as u32).inv().unwrap()));
        }
        acc
    }

    /// Inverse of a series with constant term 1.
    fn inv(&self) -> ARing {
        assert_eq!(self.coeffs[0], AElem::one(), "inv needs constant term 1");
        let len = self.len();
        let mut out = ARing::zero(len);
        out.coeffs[0] = AElem::one();
        for k in 1..len {
            let mut acc = AElem::zero();
            for j in 1..=k {
                acc = acc.add(&self.coeffs[j].mul(&out.coeffs[k - j]));
            }
            out.coeffs[k] = acc.neg();
        }
        out
    }
}

/// The family f_{-1} .. f_A, each certified to have at most a simple pole.
pub struct FSeriesGen {
    /// f_alphas[k] is f_{k-1}; so index 0 holds f_{-1} = 1.
    f_alphas: Vec<AElem>,
    pub max_alpha: i64,
}

impl FSeriesGen {
    /// Extract f_{-1} .. f_A from the generating series.
    pub fn generate(max_alpha: usize) -> Result<FSeriesGen> {
        let len = max_alpha + 2; // powers z^0 .. z^{A+1} of the unit part
        let curve = UniversalCurve::generate(len + 2, None);
        let formal_z = VarTable::of(&["z"]);
        let gvars = super::g_params();
        // theta(z)/z as a series with constant coefficients.
        let unit = theta_unit(&curve, &formal_z, &gvars, "z", len)?;
        let mut unit_a = ARing::zero(len);
        for (k, slot) in unit_a.coeffs.iter_mut().enumerate() {
            *slot = AElem::constant(unit.coeff(&[k as u16]));
        }
        // exponent argument: -c z - sum_{k>=2} d^{k-2}(x) z^k / k!
        let mut arg = ARing::zero(len);
        if len > 1 {
            arg.coeffs[1] = AElem::c_tilde().neg();
        }
        let mut dx = AElem::x();
        for k in 2..len {
            arg.coeffs[k] = dx.scale(&(-Rat::factorial(k as u32).inv()?));
            dx = dx.derive();
        }
        let series = unit_a.inv().mul(&arg.exp());
        Ok(FSeriesGen {
            f_alphas: series.coeffs[..=max_alpha + 1].to_vec(),
            max_alpha: max_alpha as i64,
        })
    }

    /// f_alpha for alpha >= -1.
    pub fn f(&self, alpha: i64) -> &AElem {
        assert!(alpha >= -1 && alpha <= self.max_alpha, "alpha out of range");
        &self.f_alphas[(alpha + 1) as usize]
    }

    /// Certify that every f_alpha embeds with at most a simple pole.
    pub fn certify_simple_poles(&self, ctx: &CanCtx) -> Result<()> {
        for alpha in 0..=self.max_alpha {
            mu_restrict(self.f(alpha), ctx)?;
        }
        Ok(())
    }
}

/// The leading-coefficient map: `(p * can(a))` evaluated at `p = 0`.
/// Errors when the embedded image has a pole of order two or more.
pub fn mu_restrict(a: &AElem, ctx: &CanCtx) -> Result<MultiPoly> {
    let img = ctx.embed(a)?;
    let p = ctx.p_form();
    let m = img.denom_multiplicity(&p);
    if img
        .denoms()
        .any(|(f, _)| f != &p.canonical().1)
    {
        return Err(Error::Domain("unexpected denominator in embedded image".into()));
    }
    if m == 0 {
        // regular function: p * can(a) vanishes at p = 0
        return Ok(MultiPoly::zero(&ctx.params));
    }
    let mut numer = img.numer().clone();
    for _ in 0..m - 1 {
        numer = numer.div_linear_form(&p).map_err(|_| {
            Error::NotASimplePole(format!("pole order exceeds 1 for {a:?}"))
        })?;
    }
    Ok(numer.coeff(&[0]))
}

/// Verify the generating identity
/// `theta(z) (1/z + sum can(f_alpha) z^alpha) = e^{-t z} theta(p+z)/theta(p)`
/// coefficientwise in z, for alpha = 0..A, through the p-order of `ctx`.
/// `mutate_f0` flips the sign of f_0 to exercise failure reporting.
pub fn verify_interm(max_alpha: usize, order: usize, mutate_f0: bool) -> Result<(usize, usize)> {
    let ctx = CanCtx::new(order)?;
    let mut gen = FSeriesGen::generate(max_alpha)?;
    if mutate_f0 {
        gen.f_alphas[1] = gen.f_alphas[1].neg();
    }
    let curve = &ctx.curve;
    let formal = &ctx.formal;
    let params = &ctx.params;
    // theta coefficients theta_m (rational constants embedded into params).
    let theta_len = max_alpha + 3;
    let formal_z = VarTable::of(&["z"]);
    let theta_z = super::theta_tilde_univ(curve, &formal_z, params, "z", theta_len)?;
    let theta_coeff = |m: i64| -> MultiPoly {
        if m < 0 {
            MultiPoly::zero(params)
        } else {
            theta_z.coeff(&[m as u16])
        }
    };
    // can images of f_beta.
    let mut can_f: Vec<FracSeries> = Vec::new();
    for alpha in 0..=max_alpha as i64 {
        can_f.push(ctx.embed(gen.f(alpha))?);
    }
    // theta(p) data for the right side.
    let theta_p = super::theta_tilde_univ(curve, formal, params, "p", order)?;
    let inv_unit = ctx.theta_unit()?.inv()?;
    let p_form = ctx.p_form();
    let minus_t = MultiPoly::var(params, "t").unwrap().neg();
    for alpha in 0..=max_alpha {
        // left side z^alpha coefficient: theta_{alpha+1} + sum_beta theta_{alpha-beta} can(f_beta)
        let mut lhs = FracSeries::from_series(TruncatedSeries::constant(
            formal,
            params,
            theta_coeff(alpha as i64 + 1),
            order,
        ));
        for beta in 0..alpha {
            let tcoef = theta_coeff((alpha - beta) as i64);
            if tcoef.is_zero() {
                continue;
            }
            lhs = lhs.add(&can_f[beta].scale_poly(&tcoef)?)?;
        }
        // right side z^alpha coefficient:
        // (sum_{m+k=alpha} (-t)^m/m! * theta^{(k)}(p)/k!) / theta(p)
        let mut numer = TruncatedSeries::zero(formal, params, order);
        let mut dtheta = theta_p.clone();
        for k in 0..=alpha {
            let m = alpha - k;
            let c = minus_t
                .pow(m as u32)
                .unwrap()
                .scale(&(Rat::factorial(m as u32).inv()? * Rat::factorial(k as u32).inv()?));
            numer = numer.add(&dtheta.scale_poly(&c)?)?;
            dtheta = dtheta.deriv("p")?;
        }
        let rhs = FracSeries::new(numer.mul(&inv_unit)?, vec![p_form.clone()])?;
        let eq = lhs.frac_equal(&rhs)?;
        if !eq.equal {
            let diff = lhs.sub(&rhs)?;
            let (e, c) = diff.numer().terms().next().unwrap();
            return Err(Error::VerificationFailed {
                item: "interm".into(),
                detail: format!(
                    "mismatch at z^{alpha}, first offending p-power {:?} with coefficient {:?}",
                    e, c
                ),
            });
        }
    }
    Ok((max_alpha, order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Rat;

    #[test]
    fn ground_truth_low_f() {
        let gen = FSeriesGen::generate(4).unwrap();
        assert_eq!(gen.f(-1), &AElem::one());
        assert_eq!(gen.f(0), &AElem::c_tilde().neg());
        // f_1 = (c^2 - x)/2
        let expected = AElem::c_tilde()
            .mul(&AElem::c_tilde())
            .sub(&AElem::x())
            .scale(&Rat::new(1, 2));
        assert_eq!(gen.f(1), &expected);
    }

    #[test]
    fn regeneration_at_higher_truncation_is_stable() {
        let g1 = FSeriesGen::generate(5).unwrap();
        let g2 = FSeriesGen::generate(9).unwrap();
        for alpha in -1..=5 {
            assert_eq!(g1.f(alpha), g2.f(alpha), "f_{alpha} changed");
        }
    }

    #[test]
    fn mu_of_f_alpha() {
        let ctx = CanCtx::new(14).unwrap();
        let gen = FSeriesGen::generate(8).unwrap();
        let t = MultiPoly::var(&ctx.params, "t").unwrap();
        for alpha in 0..=8i64 {
            let mu = mu_restrict(gen.f(alpha), &ctx).unwrap();
            let expected = t
                .neg()
                .pow(alpha as u32)
                .unwrap()
                .scale(&Rat::factorial(alpha as u32).inv().unwrap());
            assert_eq!(mu, expected, "mu(f_{alpha})");
        }
        // mu kills the constants
        assert!(mu_restrict(&AElem::one(), &ctx).unwrap().is_zero());
        // mu is linear on a sample
        let combo = gen.f(2).scale(&Rat::from_int(3)).add(gen.f(0));
        let got = mu_restrict(&combo, &ctx).unwrap();
        let expected = mu_restrict(gen.f(2), &ctx)
            .unwrap()
            .scale(&Rat::from_int(3))
            .add(&mu_restrict(gen.f(0), &ctx).unwrap())
            .unwrap();
        assert_eq!(got, expected);
    }

    #[test]
    fn mu_rejects_double_pole() {
        let ctx = CanCtx::new(10).unwrap();
        // x embeds with a double pole.
        assert!(matches!(
            mu_restrict(&AElem::x(), &ctx),
            Err(Error::NotASimplePole(_))
        ));
    }

    #[test]
    fn interm_identity_holds() {
        verify_interm(4, 10, false).unwrap();
    }

    #[test]
    fn interm_alpha_zero_by_hand() {
        // z^0 slot: theta_1 + 0 = (coefficient k=0, m=0 of e^{-tz} theta(p+z)) / theta(p)
        // i.e. 1 = theta(p)/theta(p); the first nontrivial content appears at
        // z^1 where can(f_0) = t - dlog theta must match -t + theta'/theta.
        let ctx = CanCtx::new(10).unwrap();
        let gen = FSeriesGen::generate(2).unwrap();
        let can_f0 = ctx.embed(gen.f(0)).unwrap();
        // -(t - zeta) = can(-c) = can(f_0)
        let expected = ctx.c_image().neg();
        assert!(can_f0.frac_equal(&expected).unwrap().equal);
    }

    #[test]
    fn interm_mutation_detected() {
        assert!(matches!(
            verify_interm(3, 9, true),
            Err(Error::VerificationFailed { .. })
        ));
    }

    #[test]
    fn simple_pole_certification() {
        let ctx = CanCtx::new(12).unwrap();
        let gen = FSeriesGen::generate(6).unwrap();
        gen.certify_simple_poles(&ctx).unwrap();
    }
}
