//! Build the universal Weierstrass series with symbolic invariants and
//! certify its differential equation.
//!
//! Run with: cargo run --example weierstrass_ode

use kzbkit::elliptic::{verify_weierstrass, UniversalCurve};

fn main() {
    let curve = UniversalCurve::generate(12, None);
    println!("low-order series coefficients (polynomials in g2, g3):");
    for n in 0..=12 {
        if !curve.coeff(n).is_zero() {
            println!("  a_{n} = {:?}", curve.coeff(n));
        }
    }
    curve.check_weights().unwrap();
    println!("weight homogeneity holds: a_n has weight n+2 under wt(g2)=4, wt(g3)=6");

    for order in [12usize, 20, 30] {
        let certified = verify_weierstrass(order, None).unwrap();
        println!("(wp')^2 = 4 wp^3 - g2 wp - g3 certified through order {certified}");
    }
}
