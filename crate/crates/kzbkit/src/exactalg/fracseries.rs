//! Series divided by a multiset of linear forms.
//!
//! Poles along sums of variables are not monomial, so Laurent expansion is
//! not available; equality is decided by clearing denominators and comparing
//! truncated numerators, exactly as the identities themselves are proved.

use std::collections::BTreeMap;
use std::fmt;

use super::linform::LinearForm;
use super::multipoly::MultiPoly;
use super::rat::Rat;
use super::series::TruncatedSeries;
use super::vars::VarTable;
use crate::{Error, Result};

/// `numer / prod(denoms)` with canonical denominator forms.
#[derive(Clone, PartialEq, Eq)]
pub struct FracSeries {
    numer: TruncatedSeries,
    denoms: BTreeMap<LinearForm, u32>,
}

/// Outcome of a cross-multiplied comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CertifiedEq {
    pub equal: bool,
    /// Order (of the cleared numerators) through which the answer is certified.
    pub certified_order: usize,
}

impl FracSeries {
    pub fn from_series(numer: TruncatedSeries) -> Self {
        FracSeries {
            numer,
            denoms: BTreeMap::new(),
        }
    }

    pub fn zero(formal: &VarTable, params: &VarTable, order: usize) -> Self {
        FracSeries::from_series(TruncatedSeries::zero(formal, params, order))
    }

    /// Build `numer / prod(denoms)`, canonicalizing the forms and folding
    /// their scales into the numerator.
    pub fn new<I: IntoIterator<Item = LinearForm>>(numer: TruncatedSeries, denoms: I) -> Result<Self> {
        let mut scale = Rat::one();
        let mut map: BTreeMap<LinearForm, u32> = BTreeMap::new();
        for f in denoms {
            numer.formal_vars().check_same(f.vars())?;
            let (s, canon) = f.canonical();
            scale *= s;
            *map.entry(canon).or_insert(0) += 1;
        }
        Ok(FracSeries {
            numer: numer.scale(&scale.inv()?),
            denoms: map,
        })
    }

    pub fn numer(&self) -> &TruncatedSeries {
        &self.numer
    }

    pub fn denoms(&self) -> impl Iterator<Item = (&LinearForm, u32)> {
        self.denoms.iter().map(|(f, &m)| (f, m))
    }

    pub fn denom_multiplicity(&self, f: &LinearForm) -> u32 {
        let (_, canon) = f.canonical();
        self.denoms.get(&canon).copied().unwrap_or(0)
    }

    pub fn formal_vars(&self) -> &VarTable {
        self.numer.formal_vars()
    }

    pub fn param_vars(&self) -> &VarTable {
        self.numer.param_vars()
    }

    /// Total valuation claimed by the denominator multiset.
    pub fn denom_valuation(&self) -> usize {
        self.denoms.values().map(|&m| m as usize).sum()
    }

    /// Numerator accuracy order.
    pub fn order(&self) -> usize {
        self.numer.order()
    }

    /// Stored numerator vanishes; the value is 0 + O(order) after clearing.
    pub fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }

    fn clear_against(&self, common: &BTreeMap<LinearForm, u32>) -> Result<TruncatedSeries> {
        let mut out = self.numer.clone();
        for (f, &m) in common {
            let have = self.denoms.get(f).copied().unwrap_or(0);
            debug_assert!(have <= m);
            for _ in 0..m - have {
                let fs = TruncatedSeries::from_linear_form(f, self.param_vars(), out.order() + 1);
                out = out.mul_exact(&fs)?;
            }
        }
        Ok(out)
    }

    fn common_denoms(&self, other: &FracSeries) -> BTreeMap<LinearForm, u32> {
        let mut common = self.denoms.clone();
        for (f, &m) in &other.denoms {
            let e = common.entry(f.clone()).or_insert(0);
            *e = (*e).max(m);
        }
        common
    }

    pub fn add(&self, other: &FracSeries) -> Result<FracSeries> {
        self.numer.formal_vars().check_same(other.formal_vars())?;
        let common = self.common_denoms(other);
        let a = self.clear_against(&common)?;
        let b = other.clear_against(&common)?;
        Ok(FracSeries {
            numer: a.add(&b)?,
            denoms: common,
        })
    }

    pub fn sub(&self, other: &FracSeries) -> Result<FracSeries> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FracSeries {
        FracSeries {
            numer: self.numer.neg(),
            denoms: self.denoms.clone(),
        }
    }

    pub fn scale(&self, c: &Rat) -> FracSeries {
        FracSeries {
            numer: self.numer.scale(c),
            denoms: self.denoms.clone(),
        }
    }

    pub fn scale_poly(&self, c: &MultiPoly) -> Result<FracSeries> {
        Ok(FracSeries {
            numer: self.numer.scale_poly(c)?,
            denoms: self.denoms.clone(),
        })
    }

    pub fn mul(&self, other: &FracSeries) -> Result<FracSeries> {
        let mut denoms = self.denoms.clone();
        for (f, &m) in &other.denoms {
            *denoms.entry(f.clone()).or_insert(0) += m;
        }
        Ok(FracSeries {
            numer: self.numer.mul(&other.numer)?,
            denoms,
        })
    }

    pub fn mul_series(&self, s: &TruncatedSeries) -> Result<FracSeries> {
        Ok(FracSeries {
            numer: self.numer.mul(s)?,
            denoms: self.denoms.clone(),
        })
    }

    pub fn pow(&self, e: u32) -> Result<FracSeries> {
        let mut acc = FracSeries::from_series(TruncatedSeries::one(
            self.formal_vars(),
            self.param_vars(),
            self.order(),
        ));
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Equality through cross-multiplication. Errors with
    /// [`Error::Inconclusive`] when the certified order is not positive.
    pub fn frac_equal(&self, other: &FracSeries) -> Result<CertifiedEq> {
        let diff = self.sub(other)?;
        let certified = diff.numer.order();
        if certified == 0 {
            return Err(Error::Inconclusive { certified: 0 });
        }
        Ok(CertifiedEq {
            equal: diff.numer.is_zero(),
            certified_order: certified,
        })
    }

    /// The denominator multiset as a map.
    pub fn denom_map(&self) -> BTreeMap<LinearForm, u32> {
        self.denoms.clone()
    }

    /// Clear this value against a denominator multiset containing its own:
    /// returns the numerator after multiplying in the missing forms.
    pub fn cleared_against(&self, common: &BTreeMap<LinearForm, u32>) -> Result<TruncatedSeries> {
        self.clear_against(common)
    }

    /// Equality with the cleared comparison capped at `order`.
    pub fn frac_equal_to(&self, other: &FracSeries, order: usize) -> Result<CertifiedEq> {
        let diff = self.sub(other)?;
        let capped = diff.numer.truncate(order);
        if capped.order() == 0 {
            return Err(Error::Inconclusive { certified: 0 });
        }
        Ok(CertifiedEq {
            equal: capped.is_zero(),
            certified_order: capped.order(),
        })
    }

    /// Certified vanishing: `Ok(order)` when the cleared numerator is zero.
    pub fn certify_zero(&self) -> Result<usize> {
        if self.numer.order() == 0 {
            return Err(Error::Inconclusive { certified: 0 });
        }
        if self.numer.is_zero() {
            Ok(self.numer.order())
        } else {
            let (e, c) = self.numer.terms().next().unwrap();
            Err(Error::VerificationFailed {
                item: "certify_zero".into(),
                detail: format!("first offending monomial {:?} with coefficient {:?}", e, c),
            })
        }
    }

    /// Residue along a simple-pole form: change coordinates so the form is a
    /// variable `u` (eliminating `pivot`), and return the coefficient of
    /// `u^{-1}` restricted to `u = 0`. A value whose denominator omits the
    /// form has no pole there, so its residue is zero.
    pub fn residue_in(&self, f: &LinearForm, pivot: usize) -> Result<FracSeries> {
        self.formal_vars().check_same(f.vars())?;
        let (scale, canon) = f.canonical();
        if canon.coeff_of(pivot).is_zero() {
            return Err(Error::Domain(
                "pivot has zero coefficient in the residue form".into(),
            ));
        }
        match self.denoms.get(&canon).copied().unwrap_or(0) {
            0 => Ok(FracSeries::zero(
                self.formal_vars(),
                self.param_vars(),
                self.numer.order(),
            )),
            1 => {
                let numer = self.numer.restrict_to_zero_locus(&canon, pivot)?;
                let mut rest: Vec<LinearForm> = Vec::new();
                for (g, &m) in &self.denoms {
                    if g == &canon {
                        continue;
                    }
                    let g2 = restrict_form(g, &canon, pivot)?;
                    for _ in 0..m {
                        rest.push(g2.clone());
                    }
                }
                // Res(N/(s*u*rest)) = (1/s) * (N/rest)|_{u=0}.
                Ok(FracSeries::new(numer.scale(&scale.inv()?), rest)?)
            }
            m => Err(Error::NotASimplePole(format!(
                "form {canon:?} has multiplicity {m}"
            ))),
        }
    }

    /// Laurent coefficients in a variable that occurs in the denominator only
    /// as the bare form `var` (a monomial pole). Returns the coefficients of
    /// `var^k` for `k` in `lo..hi`, each free of `var`.
    pub fn laurent_coeffs_in_var(&self, var: &str, lo: i64, hi: i64) -> Result<Vec<FracSeries>> {
        let idx = self.formal_vars().index_of(var)?;
        let form = LinearForm::var(self.formal_vars(), var)?;
        let m = self.denoms.get(&form).copied().unwrap_or(0) as i64;
        for (g, _) in &self.denoms {
            if g != &form && !g.coeff_of(idx).is_zero() {
                return Err(Error::Domain(format!(
                    "variable {var} occurs in the non-monomial denominator {g:?}"
                )));
            }
        }
        let slices = self.numer.coeffs_in_var(var)?;
        let mut out = Vec::new();
        for k in lo..hi {
            let shifted = k + m; // numerator power contributing to var^k
            let numer = if shifted < 0 || shifted as usize >= slices.len() {
                TruncatedSeries::zero(
                    self.formal_vars(),
                    self.param_vars(),
                    self.numer.order().saturating_sub(m.max(0) as usize),
                )
            } else {
                slices[shifted as usize].clone()
            };
            let rest: Vec<LinearForm> = self
                .denoms
                .iter()
                .filter(|(g, _)| *g != &form)
                .flat_map(|(g, &mult)| std::iter::repeat(g.clone()).take(mult as usize))
                .collect();
            out.push(FracSeries::new(numer, rest)?);
        }
        Ok(out)
    }

    /// Derivative with respect to a formal variable (quotient rule).
    pub fn deriv(&self, var: &str) -> Result<FracSeries> {
        let idx = self.formal_vars().index_of(var)?;
        let mut out = FracSeries {
            numer: self.numer.deriv(var)?,
            denoms: self.denoms.clone(),
        };
        for (f, &m) in &self.denoms {
            let c = f.coeff_of(idx);
            if c.is_zero() {
                continue;
            }
            let mut denoms = self.denoms.clone();
            *denoms.get_mut(f).unwrap() += 1;
            let term = FracSeries {
                numer: self
                    .numer
                    .scale(&(-Rat::from_int(m as i64) * c))
                    .truncate(self.numer.order().saturating_sub(1)),
                denoms,
            };
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Substitute formal variables by linear forms (numerator and forms).
    pub fn substitute(
        &self,
        target: &VarTable,
        assignments: &[(&str, LinearForm)],
    ) -> Result<FracSeries> {
        let numer = self.numer.substitute(target, assignments)?;
        let mut forms = Vec::new();
        for (f, &m) in &self.denoms {
            let g = substitute_form(f, target, assignments)?;
            for _ in 0..m {
                forms.push(g.clone());
            }
        }
        FracSeries::new(numer, forms)
    }

    pub fn substitute_params(&self, target: &VarTable, images: &[MultiPoly]) -> Result<FracSeries> {
        Ok(FracSeries {
            numer: self.numer.substitute_params(target, images)?,
            denoms: self.denoms.clone(),
        })
    }

    pub fn specialize_params(&self, assignments: &[(usize, Rat)]) -> FracSeries {
        FracSeries {
            numer: self.numer.specialize_params(assignments),
            denoms: self.denoms.clone(),
        }
    }

    /// Cancel denominator forms that divide the numerator exactly. Each
    /// cancellation costs one order of accuracy.
    pub fn reduced(&self) -> FracSeries {
        let mut numer = self.numer.clone();
        let mut denoms = self.denoms.clone();
        loop {
            let mut progress = false;
            for f in denoms.keys().cloned().collect::<Vec<_>>() {
                if let Ok(q) = numer.div_linear_form(&f) {
                    numer = q;
                    let m = denoms.get_mut(&f).unwrap();
                    *m -= 1;
                    if *m == 0 {
                        denoms.remove(&f);
                    }
                    progress = true;
                }
            }
            if !progress {
                break;
            }
        }
        FracSeries { numer, denoms }
    }
}

/// Restrict a linear form to the zero locus of `on` by eliminating `pivot`.
fn restrict_form(g: &LinearForm, on: &LinearForm, pivot: usize) -> Result<LinearForm> {
    let cp = g.coeff_of(pivot);
    if cp.is_zero() {
        return Ok(g.clone());
    }
    let sol = on.solve_for(pivot)?;
    let vars = g.vars().clone();
    let mut entries: Vec<(&str, Rat)> = Vec::new();
    for (i, c) in g.coeffs() {
        if i != pivot {
            entries.push((vars.name(i), c.clone()));
        }
    }
    for (i, c) in &sol {
        entries.push((vars.name(*i), c * &cp));
    }
    LinearForm::new(&vars, &entries).map_err(|_| {
        Error::NotASimplePole(format!(
            "denominator {g:?} vanishes on the residue locus (higher-order pole)"
        ))
    })
}

/// Apply a linear substitution to a linear form.
fn substitute_form(
    f: &LinearForm,
    target: &VarTable,
    assignments: &[(&str, LinearForm)],
) -> Result<LinearForm> {
    let src = f.vars().clone();
    let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
    for (i, c) in f.coeffs() {
        let name = src.name(i);
        match assignments.iter().find(|(n, _)| *n == name) {
            Some((_, img)) => {
                target.check_same(img.vars())?;
                for (j, d) in img.coeffs() {
                    let slot = acc.entry(j).or_insert_with(Rat::zero);
                    *slot += c * d;
                }
            }
            None => {
                let j = target.index_of(name)?;
                let slot = acc.entry(j).or_insert_with(Rat::zero);
                *slot += c.clone();
            }
        }
    }
    let entries: Vec<(&str, Rat)> = acc
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| (target.name(j), c))
        .collect();
    LinearForm::new(target, &entries)
        .map_err(|_| Error::Domain(format!("substitution maps denominator {f:?} to zero")))
}

impl fmt::Debug for FracSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}]", self.numer)?;
        for (form, m) in &self.denoms {
            write!(f, " / ({form:?})^{m}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup2() -> (VarTable, VarTable) {
        (VarTable::of(&["p", "q"]), VarTable::of(&["t"]))
    }

    fn one_over(fv: &VarTable, pv: &VarTable, form: LinearForm, order: usize) -> FracSeries {
        FracSeries::new(TruncatedSeries::one(fv, pv, order), vec![form]).unwrap()
    }

    #[test]
    fn cancel_common_factor() {
        // 1/p equals q/(p*q).
        let (fv, pv) = setup2();
        let p = LinearForm::var(&fv, "p").unwrap();
        let q = LinearForm::var(&fv, "q").unwrap();
        let a = one_over(&fv, &pv, p.clone(), 6);
        let qs = TruncatedSeries::var(&fv, &pv, "q", 6).unwrap();
        let b = FracSeries::new(qs, vec![p.clone(), q.clone()]).unwrap();
        let eq = a.frac_equal(&b).unwrap();
        assert!(eq.equal);
        // 1/p and 1/q differ.
        let c = one_over(&fv, &pv, q, 6);
        assert!(!a.frac_equal(&c).unwrap().equal);
    }

    #[test]
    fn geometric_expansion_matches_after_clearing() {
        // 1/(p+q) vs the K-term expansion (1/p) * sum (-q/p)^k: structurally
        // different denominators; the values agree through cleared order K
        // while the full comparison sees the q^K tail of the finite sum.
        let (fv, pv) = setup2();
        for k_terms in [4usize, 7] {
            let pq = LinearForm::sum(&fv, "p", "q").unwrap();
            let lhs = one_over(&fv, &pv, pq, k_terms + 2);
            let mut rhs = FracSeries::zero(&fv, &pv, k_terms + 2);
            let p = LinearForm::var(&fv, "p").unwrap();
            let q = TruncatedSeries::var(&fv, &pv, "q", k_terms + 2).unwrap();
            for k in 0..k_terms as u32 {
                let sign = if k % 2 == 0 { Rat::one() } else { -Rat::one() };
                let numer = q.pow(k).unwrap().scale(&sign);
                let term =
                    FracSeries::new(numer, std::iter::repeat(p.clone()).take(k as usize + 1))
                        .unwrap();
                rhs = rhs.add(&term).unwrap();
            }
            let capped = lhs.frac_equal_to(&rhs, k_terms).unwrap();
            assert!(capped.equal, "equal through cleared order {k_terms}");
            let full = lhs.frac_equal(&rhs).unwrap();
            assert!(!full.equal, "finite sum differs at degree {k_terms}");
        }
    }

    #[test]
    fn residue_basics() {
        let (fv, pv) = setup2();
        // residue of 1/p in p at pivot p -> 1
        let p = LinearForm::var(&fv, "p").unwrap();
        let a = one_over(&fv, &pv, p.clone(), 6);
        let r = a.residue_in(&p, 0).unwrap();
        let one = FracSeries::from_series(TruncatedSeries::one(&fv, &pv, 6));
        assert!(r.frac_equal(&one).unwrap().equal);
        // residue of t/(p-q) in p-q at pivot p -> t
        let pmq = LinearForm::diff(&fv, "p", "q").unwrap();
        let t = MultiPoly::var(&pv, "t").unwrap();
        let b = FracSeries::new(
            TruncatedSeries::one(&fv, &pv, 6).scale_poly(&t).unwrap(),
            vec![pmq.clone()],
        )
        .unwrap();
        let r2 = b.residue_in(&pmq, 0).unwrap();
        let t_series = FracSeries::from_series(
            TruncatedSeries::one(&fv, &pv, 6).scale_poly(&t).unwrap(),
        );
        assert!(r2.frac_equal(&t_series).unwrap().equal);
        // a value with no pole along the form has residue zero
        let r3 = a.residue_in(&pmq, 0).unwrap();
        assert!(r3.is_zero());
    }

    #[test]
    fn residue_rejects_double_pole() {
        let (fv, pv) = setup2();
        let p = LinearForm::var(&fv, "p").unwrap();
        let a = FracSeries::new(
            TruncatedSeries::one(&fv, &pv, 6),
            vec![p.clone(), p.clone()],
        )
        .unwrap();
        assert!(matches!(
            a.residue_in(&p, 0),
            Err(Error::NotASimplePole(_))
        ));
    }

    #[test]
    fn residue_is_linear() {
        let (fv, pv) = setup2();
        let p = LinearForm::var(&fv, "p").unwrap();
        let q = LinearForm::var(&fv, "q").unwrap();
        let a = one_over(&fv, &pv, p.clone(), 7);
        let b = FracSeries::new(TruncatedSeries::one(&fv, &pv, 7), vec![p.clone(), q.clone()])
            .unwrap();
        let sum = a.add(&b).unwrap();
        let lhs = sum.residue_in(&p, 0).unwrap();
        let rhs = a
            .residue_in(&p, 0)
            .unwrap()
            .add(&b.residue_in(&p, 0).unwrap())
            .unwrap();
        assert!(lhs.frac_equal(&rhs).unwrap().equal);
    }

    #[test]
    fn equality_invariant_under_common_factor() {
        let (fv, pv) = setup2();
        let p = LinearForm::var(&fv, "p").unwrap();
        let pq = LinearForm::sum(&fv, "p", "q").unwrap();
        let a = one_over(&fv, &pv, p.clone(), 8);
        // multiply numerator and denominator by (p+q)
        let pq_series = TruncatedSeries::from_linear_form(&pq, &pv, 8);
        let b = FracSeries::new(pq_series, vec![p, pq]).unwrap();
        assert!(a.frac_equal(&b).unwrap().equal);
    }

    #[test]
    fn derivative_quotient_rule() {
        // d/dp (1/p) = -1/p^2
        let (fv, pv) = setup2();
        let p = LinearForm::var(&fv, "p").unwrap();
        let a = one_over(&fv, &pv, p.clone(), 8);
        let da = a.deriv("p").unwrap();
        let expected = FracSeries::new(
            TruncatedSeries::one(&fv, &pv, 7).neg(),
            vec![p.clone(), p.clone()],
        )
        .unwrap();
        assert!(da.frac_equal(&expected).unwrap().equal);
    }
}
