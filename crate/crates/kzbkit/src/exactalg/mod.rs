//! Exact rational arithmetic, multivariate polynomials, truncated power
//! series, and series with linear-form denominators.

pub mod fracseries;
pub mod linalg;
pub mod linform;
pub mod multipoly;
pub mod rat;
pub mod series;
pub mod vars;

pub use fracseries::{CertifiedEq, FracSeries};
pub use linform::LinearForm;
pub use multipoly::MultiPoly;
pub use rat::Rat;
pub use series::TruncatedSeries;
pub use vars::VarTable;
