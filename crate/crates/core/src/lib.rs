//! Exact degrees of zero-dimensional Quot schemes on curves and an upper
//! bound for the generic degree of the rank-2 generalized Verschiebung.
//!
//! Layers, bottom up:
//!
//! - [`poly`]: dense polynomials over `Q`, extended Euclid, cyclotomic
//!   polynomials.
//! - [`ring`]: residue rings `Q[x]/m(x)` and exact sums over nontrivial
//!   roots of unity.
//! - [`holla`]: Quot-scheme parameters and the root-of-unity degree
//!   formula, with a complex brute-force oracle.
//! - [`versch`]: the Verschiebung bound, its sine form and the identities
//!   around it.
//! - [`polyp`]: the bound as a polynomial in `p`.
//! - [`cli`]: command implementations and machine-readable records.

pub mod cli;
pub mod error;
pub mod holla;
pub mod numeric;
pub mod poly;
pub mod polyp;
pub mod ring;
pub mod versch;

pub use error::{Error, Result};
pub use holla::{brute_force_degree, holla_degree, QuotParams};
pub use poly::PolyQ;
pub use polyp::{bound_polynomial, PolynomialInP};
pub use ring::{nontrivial_root_sum, ResidueElem};
pub use versch::{bound_exact, bound_report, BoundReport, VerschParams};
