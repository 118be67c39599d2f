//! The coordinate ring of the extended curve away from the fiber over the
//! origin: polynomials in x, y, c with y^2 reduced by the curve equation,
//! coefficients in Q[g2, g3]. Carries the derivation (x -> y,
//! y -> 6x^2 - g2/2, c -> x) and the formal embedding into series in p.

use std::collections::BTreeMap;
use std::fmt;

use super::{
    embed_coeff, g_params, theta_unit, wp_univ, zeta_univ, UniversalCurve,
};
use crate::exactalg::{FracSeries, LinearForm, MultiPoly, Rat, TruncatedSeries, VarTable};
use crate::Result;

/// Monomial key: (power of c, power of x, power of y with y-power <= 1).
type Key = (u16, u16, u8);

/// Normal-form element of the coordinate ring.
#[derive(Clone, PartialEq, Eq)]
pub struct AElem {
    coeffs: BTreeMap<Key, MultiPoly>,
    vars: VarTable,
}

impl AElem {
    pub fn zero() -> Self {
        AElem {
            coeffs: BTreeMap::new(),
            vars: g_params(),
        }
    }

    pub fn one() -> Self {
        AElem::constant(MultiPoly::one(&g_params()))
    }

    pub fn constant(c: MultiPoly) -> Self {
        let mut e = AElem::zero();
        e.vars.check_same(c.vars()).expect("invariant table");
        if !c.is_zero() {
            e.coeffs.insert((0, 0, 0), c);
        }
        e
    }

    pub fn rational(c: Rat) -> Self {
        AElem::constant(MultiPoly::constant(&g_params(), c))
    }

    pub fn x() -> Self {
        AElem::monomial((0, 1, 0), MultiPoly::one(&g_params()))
    }

    pub fn y() -> Self {
        AElem::monomial((0, 0, 1), MultiPoly::one(&g_params()))
    }

    pub fn c_tilde() -> Self {
        AElem::monomial((1, 0, 0), MultiPoly::one(&g_params()))
    }

    fn monomial(key: Key, c: MultiPoly) -> Self {
        let mut e = AElem::zero();
        if !c.is_zero() {
            e.coeffs.insert(key, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&Key, &MultiPoly)> {
        self.coeffs.iter()
    }

    fn add_term(&mut self, key: Key, c: &MultiPoly) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(key) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                let s = o.get().add(c).expect("same table");
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &AElem) -> AElem {
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.add_term(*k, c);
        }
        out
    }

    pub fn sub(&self, other: &AElem) -> AElem {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> AElem {
        let mut out = AElem::zero();
        for (k, c) in &self.coeffs {
            out.coeffs.insert(*k, c.neg());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> AElem {
        if c.is_zero() {
            return AElem::zero();
        }
        let mut out = AElem::zero();
        for (k, a) in &self.coeffs {
            out.coeffs.insert(*k, a.scale(c));
        }
        out
    }

    pub fn scale_poly(&self, c: &MultiPoly) -> AElem {
        let mut out = AElem::zero();
        for (k, a) in &self.coeffs {
            out.add_term(*k, &a.mul(c).expect("same table"));
        }
        out
    }

    /// Product with reduction of y^2 by 4x^3 - g2 x - g3.
    pub fn mul(&self, other: &AElem) -> AElem {
        let vars = g_params();
        let g2 = MultiPoly::var(&vars, "g2").unwrap();
        let g3 = MultiPoly::var(&vars, "g3").unwrap();
        let mut out = AElem::zero();
        for ((ca, xa, ya), pa) in &self.coeffs {
            for ((cb, xb, yb), pb) in &other.coeffs {
                let coeff = pa.mul(pb).expect("same table");
                let (c, x, y) = (ca + cb, xa + xb, ya + yb);
                if y < 2 {
                    out.add_term((c, x, y), &coeff);
                } else {
                    // y^2 = 4x^3 - g2 x - g3
                    out.add_term((c, x + 3, 0), &coeff.scale(&Rat::from_int(4)));
                    out.add_term((c, x + 1, 0), &coeff.mul(&g2).unwrap().neg());
                    out.add_term((c, x, 0), &coeff.mul(&g3).unwrap().neg());
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> AElem {
        let mut acc = AElem::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// The derivation x -> y, y -> 6x^2 - g2/2, c -> x, extended by Leibniz
    /// and normal-formed.
    pub fn derive(&self) -> AElem {
        let vars = g_params();
        let g2 = MultiPoly::var(&vars, "g2").unwrap();
        let mut out = AElem::zero();
        for (&(c, x, y), coeff) in &self.coeffs {
            // d(c^a) contributes a * c^{a-1} * x * rest
            if c > 0 {
                let scaled = coeff.scale(&Rat::from_int(c as i64));
                out.add_term((c - 1, x + 1, y), &scaled);
            }
            // d(x^b) contributes b * x^{b-1} * y * rest, reducing y^2
            if x > 0 {
                let scaled = coeff.scale(&Rat::from_int(x as i64));
                if y == 0 {
                    out.add_term((c, x - 1, 1), &scaled);
                } else {
                    // y * y = 4x^3 - g2 x - g3
                    let g3 = MultiPoly::var(&vars, "g3").unwrap();
                    out.add_term((c, x + 2, 0), &scaled.scale(&Rat::from_int(4)));
                    out.add_term((c, x, 0), &scaled.mul(&g2).unwrap().neg());
                    out.add_term((c, x - 1, 0), &scaled.mul(&g3).unwrap().neg());
                }
            }
            // d(y) contributes (6x^2 - g2/2) * rest
            if y == 1 {
                out.add_term((c, x + 2, 0), &coeff.scale(&Rat::from_int(6)));
                out.add_term((c, x, 0), &coeff.mul(&g2).unwrap().scale(&Rat::new(-1, 2)));
            }
        }
        out
    }
}

impl fmt::Debug for AElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((c, x, y), p) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({p:?})")?;
            if *c > 0 {
                write!(f, "*c^{c}")?;
            }
            if *x > 0 {
                write!(f, "*x^{x}")?;
            }
            if *y > 0 {
                write!(f, "*y")?;
            }
        }
        Ok(())
    }
}

/// Precomputed series images of the generators under the formal embedding
/// x -> wp(p), y -> wp'(p), c -> t - dlog theta(p).
pub struct CanCtx {
    pub curve: UniversalCurve,
    pub formal: VarTable,
    pub params: VarTable,
    pub order: usize,
    wp: FracSeries,
    wp_prime: FracSeries,
    c_image: FracSeries,
}

impl CanCtx {
    pub fn new(order: usize) -> Result<Self> {
        let curve = UniversalCurve::generate(order + 4, None);
        let formal = VarTable::of(&["p"]);
        let params = super::can_params();
        let wp = wp_univ(&curve, &formal, &params, "p", order)?;
        let wp_prime = wp.deriv("p")?;
        // c -> t - zeta(p)
        let t = MultiPoly::var(&params, "t").unwrap();
        let t_series = FracSeries::from_series(TruncatedSeries::constant(
            &formal,
            &params,
            t,
            order,
        ));
        let zeta = zeta_univ(&curve, &formal, &params, "p", order)?;
        let c_image = t_series.sub(&zeta)?;
        Ok(CanCtx {
            curve,
            formal,
            params,
            order,
            wp,
            wp_prime,
            c_image,
        })
    }

    pub fn wp(&self) -> &FracSeries {
        &self.wp
    }

    pub fn wp_prime(&self) -> &FracSeries {
        &self.wp_prime
    }

    pub fn c_image(&self) -> &FracSeries {
        &self.c_image
    }

    pub fn theta_unit(&self) -> Result<TruncatedSeries> {
        theta_unit(&self.curve, &self.formal, &self.params, "p", self.order)
    }

    /// The embedding applied to a normal-form element.
    pub fn embed(&self, a: &AElem) -> Result<FracSeries> {
        let mut out = FracSeries::zero(&self.formal, &self.params, self.order);
        for (&(c, x, y), coeff) in a.coeffs() {
            let mut term = FracSeries::from_series(TruncatedSeries::constant(
                &self.formal,
                &self.params,
                embed_coeff(coeff, &self.params),
                self.order,
            ));
            if c > 0 {
                term = term.mul(&self.c_image.pow(c as u32)?)?;
            }
            if x > 0 {
                term = term.mul(&self.wp.pow(x as u32)?)?;
            }
            if y > 0 {
                term = term.mul(&self.wp_prime)?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    pub fn p_form(&self) -> LinearForm {
        LinearForm::var(&self.formal, "p").unwrap()
    }
}
