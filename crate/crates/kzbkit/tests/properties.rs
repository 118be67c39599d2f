//! Property tests for the arithmetic substrate and the free Lie normal form.

use proptest::prelude::*;

use kzbkit::exactalg::{FracSeries, LinearForm, MultiPoly, Rat, TruncatedSeries, VarTable};
use kzbkit::liealg::{FreeLie, LieElem};

fn fv() -> VarTable {
    VarTable::of(&["p", "q"])
}

fn pv() -> VarTable {
    VarTable::of(&["t"])
}

const ORDER: usize = 6;

prop_compose! {
    fn arb_rat()(num in -6i64..=6, den in 1i64..=4) -> Rat {
        Rat::new(num, den)
    }
}

prop_compose! {
    fn arb_series()(terms in prop::collection::vec(
        ((0u16..4, 0u16..4, 0u16..2), arb_rat()), 0..6)) -> TruncatedSeries {
        let fv = fv();
        let pv = pv();
        let mut s = TruncatedSeries::zero(&fv, &pv, ORDER);
        for ((ep, eq, et), c) in terms {
            let coeff = MultiPoly::monomial(&pv, vec![et], c);
            let m = TruncatedSeries::monomial(&fv, &pv, vec![ep, eq], coeff, ORDER);
            s = s.add(&m).unwrap();
        }
        s
    }
}

fn denom_choices() -> Vec<LinearForm> {
    let fv = fv();
    vec![
        LinearForm::var(&fv, "p").unwrap(),
        LinearForm::var(&fv, "q").unwrap(),
        LinearForm::sum(&fv, "p", "q").unwrap(),
    ]
}

prop_compose! {
    fn arb_frac()(numer in arb_series(), picks in prop::collection::vec(0usize..3, 0..3)) -> FracSeries {
        let denoms = denom_choices();
        FracSeries::new(numer, picks.into_iter().map(|i| denoms[i].clone())).unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn series_mul_is_associative(a in arb_series(), b in arb_series(), c in arb_series()) {
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn series_mul_distributes(a in arb_series(), b in arb_series(), c in arb_series()) {
        let left = a.mul(&b.add(&c).unwrap()).unwrap();
        let right = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn series_mul_commutes(a in arb_series(), b in arb_series()) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
    }

    #[test]
    fn exp_log_round_trip(a in arb_series()) {
        // strip the constant term so exp applies
        let c0 = a.constant_term();
        let adjusted = a.sub(&TruncatedSeries::constant(&fv(), &pv(), c0, ORDER)).unwrap();
        let round = adjusted.exp().unwrap().log().unwrap();
        prop_assert_eq!(round, adjusted);
    }

    #[test]
    fn exp_of_negation_is_inverse(a in arb_series()) {
        let c0 = a.constant_term();
        let adjusted = a.sub(&TruncatedSeries::constant(&fv(), &pv(), c0, ORDER)).unwrap();
        let prod = adjusted.exp().unwrap().mul(&adjusted.neg().exp().unwrap()).unwrap();
        prop_assert_eq!(prod, TruncatedSeries::one(&fv(), &pv(), ORDER));
    }

    #[test]
    fn frac_equal_is_reflexive_and_symmetric(a in arb_frac(), b in arb_frac()) {
        prop_assert!(a.frac_equal(&a).unwrap().equal);
        let ab = a.frac_equal(&b).unwrap().equal;
        let ba = b.frac_equal(&a).unwrap().equal;
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn frac_equal_transitive_through_common_scale(a in arb_frac(), pick in 0usize..3) {
        // a ~ (a * f) / f for any denominator form f, and the scaled value
        // is again ~ a: transitivity closes the chain.
        let f = denom_choices()[pick].clone();
        let fs = TruncatedSeries::from_linear_form(&f, &pv(), a.order() + 1);
        let scaled = FracSeries::new(a.numer().mul_exact(&fs).unwrap(), {
            let mut d: Vec<LinearForm> = a
                .denoms()
                .flat_map(|(form, m)| std::iter::repeat(form.clone()).take(m as usize))
                .collect();
            d.push(f);
            d
        }).unwrap();
        prop_assert!(a.frac_equal(&scaled).unwrap().equal);
        prop_assert!(scaled.frac_equal(&a).unwrap().equal);
    }

    #[test]
    fn residue_vanishes_without_the_pole(numer in arb_series()) {
        // denominators {q}: residue along p must vanish
        let fvt = fv();
        let q = LinearForm::var(&fvt, "q").unwrap();
        let p = LinearForm::var(&fvt, "p").unwrap();
        let a = FracSeries::new(numer, vec![q]).unwrap();
        let res = a.residue_in(&p, 0).unwrap();
        prop_assert!(res.is_zero());
    }
}

prop_compose! {
    fn arb_lie()(terms in prop::collection::vec((0usize..5, arb_rat()), 1..4)) -> LieElem {
        // random combinations of fixed homogeneous monomials
        let alg = FreeLie::new(3);
        let g0 = LieElem::generator(0);
        let g1 = LieElem::generator(1);
        let g2 = LieElem::generator(2);
        let monos = [
            g0.clone(),
            g1.clone(),
            alg.bracket(&g0, &g1),
            alg.bracket(&g0, &alg.bracket(&g1, &g2)),
            alg.bracket(&g2, &alg.bracket(&g0, &g1)),
        ];
        let mut out = LieElem::zero();
        for (i, c) in terms {
            out = out.add(&monos[i].scale(&c));
        }
        out
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bracket_antisymmetry(a in arb_lie(), b in arb_lie()) {
        let alg = FreeLie::new(3);
        prop_assert_eq!(alg.bracket(&a, &b), alg.bracket(&b, &a).neg());
        prop_assert!(alg.bracket(&a, &a).is_zero());
    }

    #[test]
    fn bracket_jacobi(a in arb_lie(), b in arb_lie(), c in arb_lie()) {
        let alg = FreeLie::new(3);
        let j = alg.bracket(&a, &alg.bracket(&b, &c))
            .add(&alg.bracket(&b, &alg.bracket(&c, &a)))
            .add(&alg.bracket(&c, &alg.bracket(&a, &b)));
        prop_assert!(j.is_zero());
    }
}
