//! Truncated multivariate power series.
//!
//! A series lives over a table of formal variables (which are truncated in
//! total degree) with coefficients that are polynomials in a separate table of
//! parameter variables (which are never truncated). The `order` field is the
//! certified accuracy: stored terms all have total degree `< order`, and
//! arithmetic never claims accuracy beyond what the operands support.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::linform::LinearForm;
use super::multipoly::MultiPoly;
use super::rat::Rat;
use super::vars::VarTable;
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    formal: VarTable,
    params: VarTable,
    order: usize,
    terms: BTreeMap<Vec<u16>, MultiPoly>,
}

impl TruncatedSeries {
    pub fn zero(formal: &VarTable, params: &VarTable, order: usize) -> Self {
        TruncatedSeries {
            formal: formal.clone(),
            params: params.clone(),
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(formal: &VarTable, params: &VarTable, c: MultiPoly, order: usize) -> Self {
        params.check_same(c.vars()).expect("parameter table mismatch");
        let mut s = TruncatedSeries::zero(formal, params, order);
        s.set_term(vec![0; formal.len()], c);
        s
    }

    pub fn one(formal: &VarTable, params: &VarTable, order: usize) -> Self {
        TruncatedSeries::constant(formal, params, MultiPoly::one(params), order)
    }

    pub fn rational(formal: &VarTable, params: &VarTable, c: Rat, order: usize) -> Self {
        TruncatedSeries::constant(formal, params, MultiPoly::constant(params, c), order)
    }

    /// The formal variable `name` as a series.
    pub fn var(formal: &VarTable, params: &VarTable, name: &str, order: usize) -> Result<Self> {
        let idx = formal.index_of(name)?;
        let mut e = vec![0u16; formal.len()];
        e[idx] = 1;
        let mut s = TruncatedSeries::zero(formal, params, order);
        if order > 1 {
            s.set_term(e, MultiPoly::one(params));
        }
        Ok(s)
    }

    /// A linear form as a (degree-one, exact) series.
    pub fn from_linear_form(f: &LinearForm, params: &VarTable, order: usize) -> Self {
        let mut s = TruncatedSeries::zero(f.vars(), params, order);
        if order > 1 {
            for (idx, c) in f.coeffs() {
                let mut e = vec![0u16; f.vars().len()];
                e[idx] = 1;
                s.set_term(e, MultiPoly::constant(params, c.clone()));
            }
        }
        s
    }

    /// Monomial `coeff * prod formal^exps`.
    pub fn monomial(
        formal: &VarTable,
        params: &VarTable,
        exps: Vec<u16>,
        coeff: MultiPoly,
        order: usize,
    ) -> Self {
        let mut s = TruncatedSeries::zero(formal, params, order);
        let deg: usize = exps.iter().map(|&x| x as usize).sum();
        if deg < order {
            s.set_term(exps, coeff);
        }
        s
    }

    pub fn formal_vars(&self) -> &VarTable {
        &self.formal
    }

    pub fn param_vars(&self) -> &VarTable {
        &self.params
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u16>, &MultiPoly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// All stored coefficients vanish (the series is 0 + O(order)).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Minimal total degree among stored terms; `None` for a stored zero.
    pub fn valuation(&self) -> Option<usize> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .min()
    }

    fn set_term(&mut self, exps: Vec<u16>, c: MultiPoly) {
        if !c.is_zero() {
            self.terms.insert(exps, c);
        }
    }

    fn add_term(&mut self, exps: Vec<u16>, c: &MultiPoly) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                let s = o.get().add(c).expect("same parameter table");
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn coeff(&self, exps: &[u16]) -> MultiPoly {
        self.terms
            .get(exps)
            .cloned()
            .unwrap_or_else(|| MultiPoly::zero(&self.params))
    }

    pub fn constant_term(&self) -> MultiPoly {
        self.coeff(&vec![0; self.formal.len()])
    }

    fn check_compatible(&self, other: &TruncatedSeries) -> Result<()> {
        self.formal.check_same(&other.formal)?;
        self.params.check_same(&other.params)
    }

    /// Drop stored terms of total degree >= new_order and lower the accuracy.
    pub fn truncate(&self, new_order: usize) -> TruncatedSeries {
        let order = self.order.min(new_order);
        let mut out = TruncatedSeries::zero(&self.formal, &self.params, order);
        for (e, c) in &self.terms {
            let deg: usize = e.iter().map(|&x| x as usize).sum();
            if deg < order {
                out.set_term(e.clone(), c.clone());
            }
        }
        out
    }

    pub fn add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_compatible(other)?;
        let order = self.order.min(other.order);
        let mut out = self.truncate(order);
        for (e, c) in &other.terms {
            let deg: usize = e.iter().map(|&x| x as usize).sum();
            if deg < order {
                out.add_term(e.clone(), c);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TruncatedSeries {
        let mut out = TruncatedSeries::zero(&self.formal, &self.params, self.order);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c.neg());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> TruncatedSeries {
        let mut out = TruncatedSeries::zero(&self.formal, &self.params, self.order);
        if c.is_zero() {
            return out;
        }
        for (e, a) in &self.terms {
            out.terms.insert(e.clone(), a.scale(c));
        }
        out
    }

    pub fn scale_poly(&self, c: &MultiPoly) -> Result<TruncatedSeries> {
        self.params.check_same(c.vars())?;
        let mut out = TruncatedSeries::zero(&self.formal, &self.params, self.order);
        for (e, a) in &self.terms {
            out.set_term(e.clone(), a.mul(c)?);
        }
        Ok(out)
    }

    fn mul_to_order(&self, other: &TruncatedSeries, order: usize) -> Result<TruncatedSeries> {
        self.check_compatible(other)?;
        let mut out = TruncatedSeries::zero(&self.formal, &self.params, order);
        for (ea, ca) in &self.terms {
            let da: usize = ea.iter().map(|&x| x as usize).sum();
            if da >= order {
                continue;
            }
            for (eb, cb) in &other.terms {
                let db: usize = eb.iter().map(|&x| x as usize).sum();
                if da + db >= order {
                    continue;
                }
                let e: Vec<u16> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, &ca.mul(cb)?);
            }
        }
        Ok(out)
    }

    /// Product truncated to `min(ord(a), ord(b))`.
    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.mul_to_order(other, self.order.min(other.order))
    }

    /// Product with an exact polynomial (the polynomial carries no truncation
    /// error, so accuracy improves by its valuation).
    pub fn mul_exact(&self, poly: &TruncatedSeries) -> Result<TruncatedSeries> {
        let val = poly.valuation().unwrap_or(0);
        self.mul_to_order(poly, self.order + val)
    }

    pub fn pow(&self, e: u32) -> Result<TruncatedSeries> {
        let mut acc = TruncatedSeries::one(&self.formal, &self.params, self.order);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// exp of a series with zero constant term.
    pub fn exp(&self) -> Result<TruncatedSeries> {
        if !self.constant_term().is_zero() {
            return Err(Error::Domain(
                "exp requires a zero constant term".into(),
            ));
        }
        let mut acc = TruncatedSeries::one(&self.formal, &self.params, self.order);
        let mut power = TruncatedSeries::one(&self.formal, &self.params, self.order);
        for k in 1..self.order {
            power = power.mul(self)?;
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power.scale(&Rat::factorial(k as u32).inv()?))?;
        }
        Ok(acc)
    }

    /// log of a series with constant term 1.
    pub fn log(&self) -> Result<TruncatedSeries> {
        if self.constant_term().as_constant() != Some(Rat::one()) {
            return Err(Error::Domain("log requires constant term 1".into()));
        }
        let u = self.sub(&TruncatedSeries::one(&self.formal, &self.params, self.order))?;
        let mut acc = TruncatedSeries::zero(&self.formal, &self.params, self.order);
        let mut power = TruncatedSeries::one(&self.formal, &self.params, self.order);
        for k in 1..self.order {
            power = power.mul(&u)?;
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { Rat::one() } else { -Rat::one() };
            acc = acc.add(&power.scale(&(sign / Rat::from_int(k as i64))))?;
        }
        Ok(acc)
    }

    /// Multiplicative inverse; the constant term must be a nonzero rational
    /// free of parameters. Callers must factor out any linear form first.
    pub fn inv(&self) -> Result<TruncatedSeries> {
        let c0 = self.constant_term();
        let c = c0.as_constant().ok_or_else(|| {
            Error::NonInvertibleConstant(format!("constant term {c0:?} involves parameters"))
        })?;
        if c.is_zero() {
            return Err(Error::NonInvertibleConstant(
                "zero constant term (factor a linear form first)".into(),
            ));
        }
        let cinv = c.inv()?;
        // u = 1 - self/c has valuation >= 1; inv = (1/c) sum u^k.
        let u = TruncatedSeries::one(&self.formal, &self.params, self.order)
            .sub(&self.scale(&cinv))?;
        let mut acc = TruncatedSeries::one(&self.formal, &self.params, self.order);
        let mut power = TruncatedSeries::one(&self.formal, &self.params, self.order);
        for _ in 1..self.order {
            power = power.mul(&u)?;
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power)?;
        }
        Ok(acc.scale(&cinv))
    }

    /// Partial derivative with respect to a formal variable.
    pub fn deriv(&self, var: &str) -> Result<TruncatedSeries> {
        let idx = self.formal.index_of(var)?;
        let order = self.order.saturating_sub(1);
        let mut out = TruncatedSeries::zero(&self.formal, &self.params, order);
        for (e, c) in &self.terms {
            if e[idx] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[idx] -= 1;
            out.add_term(e2, &c.scale(&Rat::from_int(e[idx] as i64)));
        }
        Ok(out)
    }

    /// Substitute formal variables by linear forms over a target table.
    /// Variables without an assignment map to the same-named target variable.
    pub fn substitute(
        &self,
        target: &VarTable,
        assignments: &[(&str, LinearForm)],
    ) -> Result<TruncatedSeries> {
        let mut images: Vec<LinearForm> = Vec::with_capacity(self.formal.len());
        for i in 0..self.formal.len() {
            let name = self.formal.name(i);
            let assigned = assignments.iter().find(|(n, _)| *n == name);
            let img = match assigned {
                Some((_, f)) => {
                    target.check_same(f.vars())?;
                    f.clone()
                }
                None => LinearForm::var(target, name)?,
            };
            images.push(img);
        }
        let mut out = TruncatedSeries::zero(target, &self.params, self.order);
        for (e, c) in &self.terms {
            let mut term =
                TruncatedSeries::constant(target, &self.params, c.clone(), self.order);
            for (i, &exp) in e.iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                let img = TruncatedSeries::from_linear_form(&images[i], &self.params, self.order);
                for _ in 0..exp {
                    term = term.mul_to_order(&img, self.order)?;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Substitute parameter variables by polynomials over a new parameter
    /// table (applied to every coefficient).
    pub fn substitute_params(
        &self,
        target: &VarTable,
        images: &[MultiPoly],
    ) -> Result<TruncatedSeries> {
        let mut out = TruncatedSeries::zero(&self.formal, target, self.order);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), &c.substitute(target, images)?);
        }
        Ok(out)
    }

    /// Evaluate some parameters at rational values.
    pub fn specialize_params(&self, assignments: &[(usize, Rat)]) -> TruncatedSeries {
        let mut out = TruncatedSeries::zero(&self.formal, &self.params, self.order);
        for (e, c) in &self.terms {
            let v = c.eval_partial(assignments);
            out.add_term(e.clone(), &v);
        }
        out
    }

    /// Coefficients of `var^k` for `k = 0..order`, as series in the same
    /// table with the extracted exponent zeroed. Entry `k` has accuracy
    /// `order - k`.
    pub fn coeffs_in_var(&self, var: &str) -> Result<Vec<TruncatedSeries>> {
        let idx = self.formal.index_of(var)?;
        let mut out: Vec<TruncatedSeries> = (0..self.order)
            .map(|k| TruncatedSeries::zero(&self.formal, &self.params, self.order - k))
            .collect();
        for (e, c) in &self.terms {
            let k = e[idx] as usize;
            let mut e2 = e.clone();
            e2[idx] = 0;
            out[k].add_term(e2, c);
        }
        Ok(out)
    }

    /// Exact division by a linear form. Errors unless every certified term of
    /// the remainder vanishes; the quotient loses one order of accuracy.
    pub fn div_linear_form(&self, f: &LinearForm) -> Result<TruncatedSeries> {
        self.formal.check_same(f.vars())?;
        // Pivot: the first variable appearing in f (f = c*(v - L)).
        let (pivot, cv) = f
            .coeffs()
            .next()
            .map(|(i, c)| (i, c.clone()))
            .expect("linear form is nonzero");
        let sol = f.solve_for(pivot)?; // v = L on the zero locus
        // View the series as univariate in the pivot.
        let max_k = self
            .terms
            .keys()
            .map(|e| e[pivot] as usize)
            .max()
            .unwrap_or(0);
        let mut slices: Vec<TruncatedSeries> = (0..=max_k)
            .map(|_| TruncatedSeries::zero(&self.formal, &self.params, self.order))
            .collect();
        for (e, c) in &self.terms {
            let k = e[pivot] as usize;
            let mut e2 = e.clone();
            e2[pivot] = 0;
            slices[k].add_term(e2, c);
        }
        // L as a series (exact, degree one, pivot-free).
        let l_series = {
            let mut s = TruncatedSeries::zero(&self.formal, &self.params, self.order + 1);
            for (i, c) in &sol {
                let mut e = vec![0u16; self.formal.len()];
                e[*i] = 1;
                s.add_term(e, &MultiPoly::constant(&self.params, c.clone()));
            }
            s
        };
        // Synthetic division: C_{k-1} = A_k + L * C_k.
        let mut quot_slices: Vec<TruncatedSeries> = vec![
            TruncatedSeries::zero(
                &self.formal,
                &self.params,
                self.order
            );
            max_k.max(1)
        ];
        let mut carry = TruncatedSeries::zero(&self.formal, &self.params, self.order);
        for k in (1..=max_k).rev() {
            let c = slices[k].add(&carry.mul_exact(&l_series)?.truncate(self.order))?;
            quot_slices[k - 1] = c.clone();
            carry = c;
        }
        let remainder = slices[0].add(&carry.mul_exact(&l_series)?.truncate(self.order))?;
        if !remainder.is_zero() {
            return Err(Error::NotDivisible(format!(
                "remainder is nonzero after division by {f:?}"
            )));
        }
        // Reassemble sum quot_slices[k] * v^k / cv with one order lost.
        let order = self.order.saturating_sub(1);
        let mut out = TruncatedSeries::zero(&self.formal, &self.params, order);
        let cv_inv = cv.inv()?;
        for (k, slice) in quot_slices.iter().enumerate() {
            for (e, c) in &slice.terms {
                let mut e2 = e.clone();
                e2[pivot] += k as u16;
                let deg: usize = e2.iter().map(|&x| x as usize).sum();
                if deg < order {
                    out.add_term(e2, &c.scale(&cv_inv));
                }
            }
        }
        Ok(out)
    }

    /// Restrict to the zero locus of `f` by eliminating `pivot` (substitute
    /// `pivot` by the solution of `f = 0`). Accuracy is preserved.
    pub fn restrict_to_zero_locus(&self, f: &LinearForm, pivot: usize) -> Result<TruncatedSeries> {
        self.formal.check_same(f.vars())?;
        let sol = f.solve_for(pivot)?;
        let mut entries: Vec<(&str, Rat)> = Vec::new();
        for (i, c) in &sol {
            entries.push((self.formal.name(*i), c.clone()));
        }
        let image = if entries.is_empty() {
            None
        } else {
            Some(LinearForm::new(&self.formal, &entries)?)
        };
        let mut out = TruncatedSeries::zero(&self.formal, &self.params, self.order);
        for (e, c) in &self.terms {
            let k = e[pivot] as usize;
            let mut e2 = e.clone();
            e2[pivot] = 0;
            let base = TruncatedSeries::monomial(
                &self.formal,
                &self.params,
                e2,
                c.clone(),
                self.order,
            );
            let term = match (&image, k) {
                (_, 0) => base,
                (None, _) => continue, // pivot = 0 on the locus
                (Some(img), _) => {
                    let img_series =
                        TruncatedSeries::from_linear_form(img, &self.params, self.order);
                    let mut t = base;
                    for _ in 0..k {
                        t = t.mul_to_order(&img_series, self.order)?;
                    }
                    t
                }
            };
            out = out.add(&term)?;
        }
        Ok(out)
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "O(deg {})", self.order)?;
            return Ok(());
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:?})", c)?;
            for (i, &exp) in e.iter().enumerate() {
                if exp == 1 {
                    write!(f, "*{}", self.formal.name(i))?;
                } else if exp > 1 {
                    write!(f, "*{}^{}", self.formal.name(i), exp)?;
                }
            }
        }
        write!(f, " + O(deg {})", self.order)
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    formal_vars: Vec<String>,
    param_vars: Vec<String>,
    order: usize,
    terms: Vec<(Vec<u16>, Vec<(Vec<u16>, Rat)>)>,
}

impl Serialize for TruncatedSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesRepr {
            formal_vars: self.formal.names().to_vec(),
            param_vars: self.params.names().to_vec(),
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.to_sorted_terms()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruncatedSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = SeriesRepr::deserialize(d)?;
        let formal = VarTable::new(repr.formal_vars);
        let params = VarTable::new(repr.param_vars);
        let mut out = TruncatedSeries::zero(&formal, &params, repr.order);
        for (e, terms) in repr.terms {
            let c = MultiPoly::from_sorted_terms(&params, terms).map_err(serde::de::Error::custom)?;
            if e.len() != formal.len() {
                return Err(serde::de::Error::custom("exponent vector length mismatch"));
            }
            out.add_term(e, &c);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (VarTable, VarTable) {
        (VarTable::of(&["p"]), VarTable::of(&["g2", "g3", "t"]))
    }

    #[test]
    fn difference_of_squares() {
        let (fv, pv) = setup();
        let one = TruncatedSeries::one(&fv, &pv, 5);
        let p = TruncatedSeries::var(&fv, &pv, "p", 5).unwrap();
        let a = one.add(&p).unwrap();
        let b = one.sub(&p).unwrap();
        let prod = a.mul(&b).unwrap();
        let expected = one.sub(&p.mul(&p).unwrap()).unwrap();
        assert_eq!(prod, expected.truncate(5));
    }

    #[test]
    fn shift_by_p() {
        // p * (1 + p + p^2/2) = p + p^2 + p^3/2
        let (fv, pv) = setup();
        let p = TruncatedSeries::var(&fv, &pv, "p", 4).unwrap();
        let mut e = TruncatedSeries::one(&fv, &pv, 4);
        e = e.add(&p).unwrap();
        e = e.add(&p.mul(&p).unwrap().scale(&Rat::new(1, 2))).unwrap();
        let shifted = e.mul_exact(&p).unwrap();
        assert_eq!(shifted.order(), 5);
        assert_eq!(shifted.coeff(&[1]).as_constant(), Some(Rat::one()));
        assert_eq!(shifted.coeff(&[2]).as_constant(), Some(Rat::one()));
        assert_eq!(shifted.coeff(&[3]).as_constant(), Some(Rat::new(1, 2)));
    }

    #[test]
    fn exp_taylor() {
        let (fv, pv) = setup();
        let p = TruncatedSeries::var(&fv, &pv, "p", 4).unwrap();
        let e = p.exp().unwrap();
        assert_eq!(e.coeff(&[0]).as_constant(), Some(Rat::one()));
        assert_eq!(e.coeff(&[1]).as_constant(), Some(Rat::one()));
        assert_eq!(e.coeff(&[2]).as_constant(), Some(Rat::new(1, 2)));
        assert_eq!(e.coeff(&[3]).as_constant(), Some(Rat::new(1, 6)));
        let zero = TruncatedSeries::zero(&fv, &pv, 4);
        assert_eq!(zero.exp().unwrap(), TruncatedSeries::one(&fv, &pv, 4));
    }

    #[test]
    fn exp_rejects_constant_term() {
        let (fv, pv) = setup();
        let one = TruncatedSeries::one(&fv, &pv, 4);
        assert!(one.exp().is_err());
    }

    #[test]
    fn exp_log_round_trip_with_params() {
        // log(exp(z*t - z^2/2)) = z*t - z^2/2
        let fv = VarTable::of(&["z"]);
        let pv = VarTable::of(&["g2", "g3", "t"]);
        let z = TruncatedSeries::var(&fv, &pv, "z", 6).unwrap();
        let t = MultiPoly::var(&pv, "t").unwrap();
        let arg = z
            .scale_poly(&t)
            .unwrap()
            .sub(&z.mul(&z).unwrap().scale(&Rat::new(1, 2)))
            .unwrap();
        let round = arg.exp().unwrap().log().unwrap();
        assert_eq!(round, arg);
    }

    #[test]
    fn geometric_inverse() {
        let (fv, pv) = setup();
        let one = TruncatedSeries::one(&fv, &pv, 4);
        let p = TruncatedSeries::var(&fv, &pv, "p", 4).unwrap();
        let inv = one.add(&p).unwrap().inv().unwrap();
        // 1 - p + p^2 - p^3
        assert_eq!(inv.coeff(&[0]).as_constant(), Some(Rat::one()));
        assert_eq!(inv.coeff(&[1]).as_constant(), Some(-Rat::one()));
        assert_eq!(inv.coeff(&[2]).as_constant(), Some(Rat::one()));
        assert_eq!(inv.coeff(&[3]).as_constant(), Some(-Rat::one()));
        assert_eq!(one.inv().unwrap(), one);
        assert!(p.inv().is_err());
    }

    #[test]
    fn binomial_substitution() {
        // p -> p + q applied to p^2 gives p^2 + 2pq + q^2.
        let fv = VarTable::of(&["p"]);
        let target = VarTable::of(&["p", "q"]);
        let pv = VarTable::of(&[] as &[&str]);
        let p = TruncatedSeries::var(&fv, &pv, "p", 5).unwrap();
        let p2 = p.mul(&p).unwrap();
        let img = LinearForm::sum(&target, "p", "q").unwrap();
        let out = p2.substitute(&target, &[("p", img)]).unwrap();
        assert_eq!(out.coeff(&[2, 0]).as_constant(), Some(Rat::one()));
        assert_eq!(out.coeff(&[1, 1]).as_constant(), Some(Rat::from_int(2)));
        assert_eq!(out.coeff(&[0, 2]).as_constant(), Some(Rat::one()));
        // identity substitution
        let id = p2.substitute(&fv, &[]).unwrap();
        assert_eq!(id, p2);
    }

    #[test]
    fn division_by_linear_form() {
        // (p^2 - q^2) / (p + q) = p - q
        let fv = VarTable::of(&["p", "q"]);
        let pv = VarTable::of(&[] as &[&str]);
        let p = TruncatedSeries::var(&fv, &pv, "p", 6).unwrap();
        let q = TruncatedSeries::var(&fv, &pv, "q", 6).unwrap();
        let num = p.mul(&p).unwrap().sub(&q.mul(&q).unwrap()).unwrap();
        let f = LinearForm::sum(&fv, "p", "q").unwrap();
        let quot = num.div_linear_form(&f).unwrap();
        let expected = p.sub(&q).unwrap().truncate(quot.order());
        assert_eq!(quot, expected);
        // p^2 + q^2 is not divisible by p + q
        let bad = p.mul(&p).unwrap().add(&q.mul(&q).unwrap()).unwrap();
        assert!(bad.div_linear_form(&f).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let (fv, pv) = setup();
        let p = TruncatedSeries::var(&fv, &pv, "p", 4).unwrap();
        let t = MultiPoly::var(&pv, "t").unwrap();
        let s = p.scale_poly(&t).unwrap().add(&TruncatedSeries::one(&fv, &pv, 4)).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        let back: TruncatedSeries = serde_json::from_str(&json).unwrap();
        assert_eq!(s, back);
    }

    #[test]
    fn accuracy_soundness_under_retrunction() {
        // Recomputing at higher truncation and re-truncating yields the same
        // stored coefficients below the certified order.
        let (fv, pv) = setup();
        for order in [4usize, 6, 9] {
            let p = TruncatedSeries::var(&fv, &pv, "p", order).unwrap();
            let s = p.exp().unwrap().mul(&p.exp().unwrap()).unwrap();
            let p_hi = TruncatedSeries::var(&fv, &pv, "p", order + 3).unwrap();
            let s_hi = p_hi.exp().unwrap().mul(&p_hi.exp().unwrap()).unwrap();
            assert_eq!(s, s_hi.truncate(order));
        }
    }
}
