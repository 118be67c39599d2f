//! Multivariate polynomials with exact rational coefficients.
//!
//! Terms are kept in a map from exponent vector to nonzero coefficient, with
//! exponent vectors ordered lexicographically for deterministic iteration and
//! serialization.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::rat::Rat;
use super::vars::VarTable;
use crate::{Error, Result};

/// A polynomial in the variables of a shared [`VarTable`].
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: VarTable,
    terms: BTreeMap<Vec<u16>, Rat>,
}

impl MultiPoly {
    pub fn zero(vars: &VarTable) -> Self {
        MultiPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &VarTable, c: Rat) -> Self {
        let mut p = MultiPoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars.len()], c);
        }
        p
    }

    pub fn one(vars: &VarTable) -> Self {
        MultiPoly::constant(vars, Rat::one())
    }

    pub fn var(vars: &VarTable, name: &str) -> Result<Self> {
        let idx = vars.index_of(name)?;
        let mut exps = vec![0u16; vars.len()];
        exps[idx] = 1;
        let mut p = MultiPoly::zero(vars);
        p.terms.insert(exps, Rat::one());
        Ok(p)
    }

    pub fn monomial(vars: &VarTable, exps: Vec<u16>, c: Rat) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector length mismatch");
        let mut p = MultiPoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn vars(&self) -> &VarTable {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u16>, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The coefficient of the zero exponent vector.
    pub fn constant_term(&self) -> Rat {
        self.terms
            .get(&vec![0; self.vars.len()])
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    /// Some(c) when the polynomial is the constant c.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                if e.iter().all(|&x| x == 0) {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as u32).sum())
            .max()
    }

    fn add_term(&mut self, exps: Vec<u16>, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.vars.check_same(&other.vars)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.vars);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), -c);
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.vars);
        }
        let mut out = MultiPoly::zero(&self.vars);
        for (e, a) in &self.terms {
            out.terms.insert(e.clone(), a * c);
        }
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.vars.check_same(&other.vars)?;
        let mut out = MultiPoly::zero(&self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u16> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exps, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<MultiPoly> {
        let mut acc = MultiPoly::one(&self.vars);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Substitute each variable by a polynomial over a target table.
    /// `images[i]` is the image of variable `i`.
    pub fn substitute(&self, target: &VarTable, images: &[MultiPoly]) -> Result<MultiPoly> {
        if images.len() != self.vars.len() {
            return Err(Error::VariableMismatch(
                "substitution image count mismatch".into(),
            ));
        }
        for im in images {
            target.check_same(im.vars())?;
        }
        let mut out = MultiPoly::zero(target);
        for (e, c) in &self.terms {
            let mut term = MultiPoly::constant(target, c.clone());
            for (i, &exp) in e.iter().enumerate() {
                if exp > 0 {
                    term = term.mul(&images[i].pow(exp as u32)?)?;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Evaluate some variables at rational values, keeping the table.
    pub fn eval_partial(&self, assignments: &[(usize, Rat)]) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.vars);
        'terms: for (e, c) in &self.terms {
            let mut coeff = c.clone();
            let mut exps = e.clone();
            for (idx, val) in assignments {
                let k = exps[*idx];
                if k > 0 {
                    if val.is_zero() {
                        continue 'terms;
                    }
                    coeff *= val.pow(k as u32);
                    exps[*idx] = 0;
                }
            }
            out.add_term(exps, coeff);
        }
        out
    }

    /// True when every term has the same weighted degree `w` under the given
    /// per-variable weights.
    pub fn is_weight_homogeneous(&self, weights: &[u32], w: u32) -> bool {
        self.terms.keys().all(|e| {
            e.iter()
                .zip(weights)
                .map(|(&x, &wt)| x as u32 * wt)
                .sum::<u32>()
                == w
        })
    }

    /// Coefficient of a given exponent vector.
    pub fn coeff(&self, exps: &[u16]) -> Rat {
        self.terms.get(exps).cloned().unwrap_or_else(Rat::zero)
    }

    /// Sorted (exponent vector, coefficient) pairs for serialization.
    pub fn to_sorted_terms(&self) -> Vec<(Vec<u16>, Rat)> {
        self.terms.iter().map(|(e, c)| (e.clone(), c.clone())).collect()
    }

    pub fn from_sorted_terms(vars: &VarTable, terms: Vec<(Vec<u16>, Rat)>) -> Result<Self> {
        let mut out = MultiPoly::zero(vars);
        for (e, c) in terms {
            if e.len() != vars.len() {
                return Err(Error::VariableMismatch(
                    "exponent vector length mismatch".into(),
                ));
            }
            out.add_term(e, c);
        }
        Ok(out)
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", c)?;
            for (i, &exp) in e.iter().enumerate() {
                if exp == 1 {
                    write!(f, "*{}", self.vars.name(i))?;
                } else if exp > 1 {
                    write!(f, "*{}^{}", self.vars.name(i), exp)?;
                }
            }
        }
        Ok(())
    }
}

/// Serialization form: variables plus sorted term list.
#[derive(Serialize, Deserialize)]
struct MultiPolyRepr {
    vars: Vec<String>,
    terms: Vec<(Vec<u16>, Rat)>,
}

impl Serialize for MultiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MultiPolyRepr {
            vars: self.vars.names().to_vec(),
            terms: self.to_sorted_terms(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = MultiPolyRepr::deserialize(d)?;
        let vars = VarTable::new(repr.vars);
        MultiPoly::from_sorted_terms(&vars, repr.terms).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g_table() -> VarTable {
        VarTable::of(&["g2", "g3"])
    }

    #[test]
    fn arithmetic_basics() {
        let vars = g_table();
        let g2 = MultiPoly::var(&vars, "g2").unwrap();
        let g3 = MultiPoly::var(&vars, "g3").unwrap();
        let s = g2.add(&g3).unwrap();
        let p = s.mul(&s).unwrap();
        // (g2+g3)^2 = g2^2 + 2 g2 g3 + g3^2
        assert_eq!(p.coeff(&[2, 0]), Rat::one());
        assert_eq!(p.coeff(&[1, 1]), Rat::from_int(2));
        assert_eq!(p.coeff(&[0, 2]), Rat::one());
        assert!(p.sub(&p).unwrap().is_zero());
    }

    #[test]
    fn weight_homogeneity() {
        let vars = g_table();
        let g2 = MultiPoly::var(&vars, "g2").unwrap();
        let g3 = MultiPoly::var(&vars, "g3").unwrap();
        // g2^3 and g3^2 both have weight 12 under wt(g2)=4, wt(g3)=6.
        let mix = g2.pow(3).unwrap().add(&g3.pow(2).unwrap()).unwrap();
        assert!(mix.is_weight_homogeneous(&[4, 6], 12));
        assert!(!g2.add(&g3).unwrap().is_weight_homogeneous(&[4, 6], 4));
    }

    #[test]
    fn substitution_is_a_ring_map() {
        let vars = g_table();
        let target = VarTable::of(&["u"]);
        let u = MultiPoly::var(&target, "u").unwrap();
        let images = vec![u.clone(), u.mul(&u).unwrap()];
        let g2 = MultiPoly::var(&vars, "g2").unwrap();
        let g3 = MultiPoly::var(&vars, "g3").unwrap();
        let lhs = g2
            .mul(&g3)
            .unwrap()
            .substitute(&target, &images)
            .unwrap();
        // g2*g3 -> u * u^2 = u^3
        assert_eq!(lhs.coeff(&[3]), Rat::one());
        assert_eq!(lhs.num_terms(), 1);
    }

    #[test]
    fn serde_round_trip() {
        let vars = g_table();
        let g2 = MultiPoly::var(&vars, "g2").unwrap();
        let p = g2.pow(2).unwrap().scale(&Rat::new(3, 7));
        let json = serde_json::to_string(&p).unwrap();
        let q: MultiPoly = serde_json::from_str(&json).unwrap();
        assert_eq!(p, q);
    }
}
