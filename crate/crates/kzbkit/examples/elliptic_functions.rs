//! The simple-pole function family on the extended curve: extraction from
//! the generating series, the coordinate-ring derivation, the formal
//! embedding, and the leading-coefficient map.
//!
//! Run with: cargo run --example elliptic_functions

use kzbkit::elliptic::{mu_restrict, verify_interm, AElem, CanCtx, FSeriesGen};

fn main() {
    let gen = FSeriesGen::generate(6).unwrap();
    println!("f_-1 = {:?}", gen.f(-1));
    println!("f_0  = {:?}", gen.f(0));
    println!("f_1  = {:?}", gen.f(1));
    println!("f_2  = {:?}", gen.f(2));

    // the derivation: x -> y, y -> 6x^2 - g2/2, c -> x
    println!("\nderivation on the coordinate ring:");
    println!("  d(x) = {:?}", AElem::x().derive());
    println!("  d(c) = {:?}", AElem::c_tilde().derive());
    println!("  d(y) = {:?}", AElem::y().derive());

    // leading coefficients along the fiber over the origin
    let ctx = CanCtx::new(12).unwrap();
    println!("\nleading coefficients (simple-pole certificates):");
    for alpha in 0..=6 {
        let mu = mu_restrict(gen.f(alpha), &ctx).unwrap();
        println!("  mu(f_{alpha}) = {mu:?}");
    }

    // the generating identity against the shifted theta quotient
    let (alpha, order) = verify_interm(6, 10, false).unwrap();
    println!("\ngenerating identity certified for indices 0..={alpha} through order {order}");
}
