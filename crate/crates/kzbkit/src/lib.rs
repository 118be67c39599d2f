//! kzbkit: an exact-arithmetic verification engine for the function theory of
//! the universal vector extension of an elliptic curve and the flat connection
//! it carries on configuration spaces.
//!
//! Everything is computed over exact rationals with symbolic curve parameters;
//! there is no floating point anywhere. The crate is organized around four
//! mathematical layers plus a reporting harness:
//!
//! - [`exactalg`]: rationals, multivariate polynomials, truncated power
//!   series, and series with linear-form denominators.
//! - [`elliptic`]: the universal Weierstrass/theta series, the coordinate ring
//!   of the extended curve, the distinguished functions with simple poles, and
//!   the Fay identities.
//! - [`forms`]: the logarithmic 1-form and 2-form calculus on the n-fold
//!   product, the wedge-kernel generators, and residue tables.
//! - [`liealg`]: free Lie algebras on Lyndon bases, the presented braid-type
//!   Lie algebras, the isomorphism checks, and the flatness/gauge identities.
//! - [`harness`]: named verification items, suite orchestration, and
//!   machine-readable reports.
//!
//! The `examples/` directory contains one runnable example per capability;
//! `kzbkit verify` runs the full suite from the command line.

pub mod exactalg;
pub mod elliptic;
pub mod forms;
pub mod harness;
pub mod liealg;

mod error;

pub use error::{Error, Result};
