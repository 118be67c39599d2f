//! Series realization of the logarithmic forms on the n-fold product.
//!
//! A realized 1-form is a vector of fractions over the invariant frame
//! dp_1..dp_n, dc_1..dc_n; the log forms om_{ij}^alpha carry the coefficient
//! `[F(p_i - p_j, z) e^{-(t_i - t_j) z} | z^alpha]` on the frame dp_i - dp_j.
//! Realized wedges provide the independent oracle for the kernel relations.

use std::collections::BTreeMap;

use super::{FormIdx, KGen};
use crate::elliptic::fay::{npoint_formal, npoint_params, p_diff, phi_vector, t_diff};
use crate::exactalg::{FracSeries, LinearForm, MultiPoly, TruncatedSeries, VarTable};
use crate::Result;

/// Frame covector index: base direction or fiber direction of one factor.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Frame {
    P(u8),
    C(u8),
}

/// A realized 1-form: finitely many frame covectors with fraction
/// coefficients in the base coordinates.
#[derive(Clone, Debug, Default)]
pub struct RealizedOne {
    pub coeffs: BTreeMap<Frame, FracSeries>,
}

/// A realized 2-form on ordered frame pairs.
#[derive(Clone, Debug, Default)]
pub struct RealizedTwo {
    pub coeffs: BTreeMap<(Frame, Frame), FracSeries>,
}

impl RealizedOne {
    fn add_term(&mut self, f: Frame, v: FracSeries) -> Result<()> {
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(f) {
            Entry::Vacant(slot) => {
                slot.insert(v);
            }
            Entry::Occupied(mut slot) => {
                let sum = slot.get().add(&v)?;
                *slot.get_mut() = sum;
            }
        }
        Ok(())
    }
}

impl RealizedTwo {
    pub fn add_term(&mut self, a: Frame, b: Frame, v: FracSeries) -> Result<()> {
        use std::cmp::Ordering;
        let (key, val) = match a.cmp(&b) {
            Ordering::Less => ((a, b), v),
            Ordering::Greater => ((b, a), v.neg()),
            Ordering::Equal => return Ok(()),
        };
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(key) {
            Entry::Vacant(slot) => {
                slot.insert(val);
            }
            Entry::Occupied(mut slot) => {
                let sum = slot.get().add(&val)?;
                *slot.get_mut() = sum;
            }
        }
        Ok(())
    }

    pub fn add_scaled(&mut self, other: &RealizedTwo, c: &crate::exactalg::Rat) -> Result<()> {
        for ((a, b), v) in &other.coeffs {
            self.add_term(*a, *b, v.scale(c))?;
        }
        Ok(())
    }

    /// Certify that every frame coefficient vanishes; returns the minimum
    /// certified order.
    pub fn certify_zero(&self, default_order: usize) -> Result<usize> {
        let mut min_order = default_order;
        for ((a, b), v) in &self.coeffs {
            let ord = v.certify_zero().map_err(|e| match e {
                crate::Error::VerificationFailed { detail, .. } => {
                    crate::Error::VerificationFailed {
                        item: "realized-wedge".into(),
                        detail: format!("frame {a:?}^{b:?}: {detail}"),
                    }
                }
                other => other,
            })?;
            min_order = min_order.min(ord);
        }
        Ok(min_order)
    }
}

/// Realization context: the pulled-back Laurent coefficients of the
/// generating series for every pair, plus the raw one-point data for
/// building custom comparison values.
pub struct RealizeCtx {
    pub n: u8,
    pub a_max: u32,
    pub order: usize,
    pub formal: VarTable,
    pub params: VarTable,
    phi_raw: Vec<FracSeries>,
    phi: BTreeMap<(u8, u8, u32), FracSeries>,
}

impl RealizeCtx {
    pub fn new(n: u8, a_max: u32, order: usize) -> Result<Self> {
        let formal = npoint_formal(n as usize, &[]);
        let params = npoint_params(n as usize);
        // one extra slot beyond a_max for shift-lemma comparisons
        let phi_raw = phi_vector(a_max as usize + 2, order)?;
        let mut phi = BTreeMap::new();
        for i in 1..=n {
            for j in i + 1..=n {
                for a in 0..=a_max + 2 {
                    let v = pull_phi(&phi_raw, &formal, &params, i, j, a)?;
                    phi.insert((i, j, a), v);
                }
            }
        }
        Ok(RealizeCtx {
            n,
            a_max,
            order,
            formal,
            params,
            phi_raw,
            phi,
        })
    }

    /// The coefficient function of om_{ij}^alpha on the frame dp_i - dp_j.
    pub fn phi(&self, i: u8, j: u8, alpha: u32) -> &FracSeries {
        &self.phi[&(i, j, alpha)]
    }

    /// A custom coefficient: `[F(P, z) e^{-T z} | z^alpha]` for an arbitrary
    /// base linear form P and parameter polynomial T.
    pub fn phi_custom(&self, p_form: &LinearForm, t_poly: &MultiPoly, alpha: u32) -> Result<FracSeries> {
        let one_pt = VarTable::of(&["p", "w"]);
        let _ = one_pt;
        let raw = &self.phi_raw[(alpha + 1) as usize];
        let g2 = MultiPoly::var(&self.params, "g2").unwrap();
        let g3 = MultiPoly::var(&self.params, "g3").unwrap();
        let moved = raw.substitute(
            &self.formal,
            &[
                ("p", p_form.clone()),
                ("w", LinearForm::var(&self.formal, self.formal.name(0))?),
            ],
        )?;
        moved.substitute_params(&self.params, &[g2, g3, t_poly.clone()])
    }

    pub fn one(&self) -> FracSeries {
        FracSeries::from_series(TruncatedSeries::one(&self.formal, &self.params, self.order))
    }

    pub fn p_diff_form(&self, i: u8, j: u8) -> LinearForm {
        p_diff(&self.formal, i as usize, j as usize)
    }

    pub fn t_diff_poly(&self, i: u8, j: u8) -> MultiPoly {
        t_diff(&self.params, i as usize, j as usize)
    }

    /// Realize a basis 1-form.
    pub fn realize_one(&self, idx: FormIdx) -> Result<RealizedOne> {
        idx.check(self.n);
        let mut out = RealizedOne::default();
        match idx {
            FormIdx::Dc(i) => out.add_term(Frame::C(i), self.one())?,
            FormIdx::Dp(i) => out.add_term(Frame::P(i), self.one())?,
            FormIdx::Om(i, j, a) => {
                let v = self.phi(i, j, a).clone();
                out.add_term(Frame::P(i), v.clone())?;
                out.add_term(Frame::P(j), v.neg())?;
            }
        }
        Ok(out)
    }

    pub fn wedge(&self, a: &RealizedOne, b: &RealizedOne) -> Result<RealizedTwo> {
        let mut out = RealizedTwo::default();
        for (fa, ca) in &a.coeffs {
            for (fb, cb) in &b.coeffs {
                if fa == fb {
                    continue;
                }
                out.add_term(*fa, *fb, ca.mul(cb)?)?;
            }
        }
        Ok(out)
    }

    /// Realize a combination of wedge pairs in the exterior square.
    pub fn realize_pairs(&self, pairs: &[(crate::exactalg::Rat, FormIdx, FormIdx)]) -> Result<RealizedTwo> {
        let mut out = RealizedTwo::default();
        for (c, a, b) in pairs {
            let ra = self.realize_one(*a)?;
            let rb = self.realize_one(*b)?;
            let w = self.wedge(&ra, &rb)?;
            out.add_scaled(&w, c)?;
        }
        Ok(out)
    }
}

fn pull_phi(
    phi_raw: &[FracSeries],
    formal: &VarTable,
    params: &VarTable,
    i: u8,
    j: u8,
    alpha: u32,
) -> Result<FracSeries> {
    let raw = &phi_raw[(alpha + 1) as usize];
    let g2 = MultiPoly::var(params, "g2").unwrap();
    let g3 = MultiPoly::var(params, "g3").unwrap();
    let moved = raw.substitute(
        formal,
        &[
            ("p", p_diff(formal, i as usize, j as usize)),
            ("w", LinearForm::var(formal, formal.name(0))?),
        ],
    )?;
    moved.substitute_params(params, &[g2, g3, t_diff(params, i as usize, j as usize)])
}

/// Realize a kernel generator and certify that the realized wedge vanishes.
pub fn verify_kernel_vanishing(g: &KGen, ctx: &RealizeCtx) -> Result<usize> {
    let realized = ctx.realize_pairs(&g.as_pairs())?;
    realized.certify_zero(ctx.order).map_err(|e| match e {
        crate::Error::VerificationFailed { detail, .. } => crate::Error::VerificationFailed {
            item: format!("kernel-{g}"),
            detail,
        },
        other => other,
    })
}
