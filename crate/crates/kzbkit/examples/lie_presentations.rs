//! The braid-type presented Lie algebra: truncated quotients, graded
//! dimensions by two independent strategies, and the two morphisms linking
//! it to the dual presentation read off from the form calculus.
//!
//! Run with: cargo run --example lie_presentations

use kzbkit::liealg::{
    dims_left_normed, iso_roundtrip_check, phi_check, psi_check, GradedQuotient,
};

fn main() {
    for n in [2usize, 3] {
        let q = GradedQuotient::present_t1n(n, 6).unwrap();
        let dims = q.dims().unwrap();
        let oracle = dims_left_normed(n, 6).unwrap();
        assert_eq!(dims, oracle);
        println!("graded dimensions at n={n}, lengths 1..6: {dims:?} (both strategies agree)");
    }

    for n in [2u8, 3, 4] {
        let images = phi_check(n, 3).unwrap();
        println!("n={n}: all {images} defining relations land in the relation-table span");
        let out = psi_check(n, 6, 3, None).unwrap();
        println!(
            "n={n}: {} dual relations vanish in the depth-6 quotient ({} beyond depth)",
            out.checked, out.skipped
        );
    }

    iso_roundtrip_check(3, 3).unwrap();
    println!("round trip fixes the generators up to step-relation closures");
}
