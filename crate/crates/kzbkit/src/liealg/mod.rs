//! Graded free Lie algebras on Lyndon bases, the braid-type presented
//! algebra and its truncated quotients, the dual presentation read off from
//! the form calculus, and the flatness and gauge identities.

pub mod lyndon;
pub mod mc;
pub mod present;
pub mod relations;

pub use lyndon::{lyndon_count, lyndon_words, FreeLie, LieElem};
pub use mc::{gauge_specialization_check, kzb_gauge_check, maurer_cartan, maurer_cartan_check};
pub use present::{dims_left_normed, t1n_relations, GradedQuotient};
pub use relations::{
    iso_roundtrip_check, phi_check, psi_check, relations_g, GAlphabet, GenSymbol, RelationTable,
};
