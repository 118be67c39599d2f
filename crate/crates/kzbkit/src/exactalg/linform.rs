//! Linear forms in the formal variables, used as denominators and as
//! substitution targets.

use std::collections::BTreeMap;
use std::fmt;

use super::rat::Rat;
use super::vars::VarTable;
use crate::{Error, Result};

/// A nonzero linear form `sum c_v * v` over a formal variable table.
///
/// Denominator multisets store forms in canonical scale (first nonzero
/// coefficient equal to +1); general forms appear as substitution images.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearForm {
    vars: VarTable,
    coeffs: BTreeMap<usize, Rat>,
}

impl LinearForm {
    pub fn new(vars: &VarTable, entries: &[(&str, Rat)]) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (name, c) in entries {
            if c.is_zero() {
                continue;
            }
            let idx = vars.index_of(name)?;
            let slot = coeffs.entry(idx).or_insert_with(Rat::zero);
            *slot += c.clone();
            if slot.is_zero() {
                coeffs.remove(&idx);
            }
        }
        if coeffs.is_empty() {
            return Err(Error::Domain("zero linear form".into()));
        }
        Ok(LinearForm {
            vars: vars.clone(),
            coeffs,
        })
    }

    /// The single variable `name`.
    pub fn var(vars: &VarTable, name: &str) -> Result<Self> {
        LinearForm::new(vars, &[(name, Rat::one())])
    }

    /// `a - b` for two variables.
    pub fn diff(vars: &VarTable, a: &str, b: &str) -> Result<Self> {
        LinearForm::new(vars, &[(a, Rat::one()), (b, -Rat::one())])
    }

    /// `a + b` for two variables.
    pub fn sum(vars: &VarTable, a: &str, b: &str) -> Result<Self> {
        LinearForm::new(vars, &[(a, Rat::one()), (b, Rat::one())])
    }

    pub fn vars(&self) -> &VarTable {
        &self.vars
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (usize, &Rat)> {
        self.coeffs.iter().map(|(&i, c)| (i, c))
    }

    pub fn coeff_of(&self, idx: usize) -> Rat {
        self.coeffs.get(&idx).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn scale(&self, c: &Rat) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::Domain("scaling a linear form by zero".into()));
        }
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            *v *= c.clone();
        }
        Ok(out)
    }

    pub fn negate(&self) -> Self {
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            *v = -v.clone();
        }
        out
    }

    /// Canonical scale: returns `(s, f)` with `self = s * f` and the first
    /// nonzero coefficient of `f` equal to +1.
    pub fn canonical(&self) -> (Rat, LinearForm) {
        let lead = self
            .coeffs
            .values()
            .next()
            .expect("linear form is nonzero")
            .clone();
        let form = self.scale(&lead.inv().expect("nonzero lead")).unwrap();
        (lead, form)
    }

    pub fn is_canonical(&self) -> bool {
        self.coeffs.values().next().map(Rat::is_one).unwrap_or(false)
    }

    /// Is this form the single variable `idx` with coefficient one?
    pub fn as_single_var(&self) -> Option<usize> {
        if self.coeffs.len() == 1 {
            let (&idx, c) = self.coeffs.iter().next().unwrap();
            if c.is_one() {
                return Some(idx);
            }
        }
        None
    }

    /// Solve `self = 0` for the pivot variable: returns the linear form `L`
    /// in the remaining variables with `pivot = L` on the zero locus.
    pub fn solve_for(&self, pivot: usize) -> Result<Vec<(usize, Rat)>> {
        let cp = self
            .coeffs
            .get(&pivot)
            .cloned()
            .ok_or_else(|| Error::Domain("pivot has zero coefficient in form".into()))?;
        let scale = -cp.inv()?;
        Ok(self
            .coeffs
            .iter()
            .filter(|(&i, _)| i != pivot)
            .map(|(&i, c)| (i, c * &scale))
            .collect())
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (&i, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.is_one() {
                write!(f, "{}", self.vars.name(i))?;
            } else {
                write!(f, "({})*{}", c, self.vars.name(i))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonicalization() {
        let vars = VarTable::of(&["p", "q"]);
        let f = LinearForm::new(&vars, &[("p", Rat::from_int(-2)), ("q", Rat::from_int(4))])
            .unwrap();
        let (s, c) = f.canonical();
        assert_eq!(s, Rat::from_int(-2));
        assert_eq!(c.coeff_of(0), Rat::one());
        assert_eq!(c.coeff_of(1), Rat::from_int(-2));
        assert!(c.is_canonical());
    }

    #[test]
    fn solve_for_pivot() {
        let vars = VarTable::of(&["p", "q", "r"]);
        // p - q + 2r = 0  =>  p = q - 2r
        let f = LinearForm::new(
            &vars,
            &[
                ("p", Rat::one()),
                ("q", -Rat::one()),
                ("r", Rat::from_int(2)),
            ],
        )
        .unwrap();
        let sol = f.solve_for(0).unwrap();
        assert_eq!(sol, vec![(1, Rat::one()), (2, Rat::from_int(-2))]);
    }
}
