//! Exact resultants of square systems of homogeneous polynomials, computed
//! as Sylvester determinants for two variables and as determinants of Koszul
//! complexes in general.
//!
//! ```
//! use koszul_core::{parse_system, resultant, ResultantOptions};
//!
//! let doc = parse_system("vars: x y\nf = x^2 - 3*x*y + 2*y^2\ng = x^2 - 7*x*y + 12*y^2").unwrap();
//! let res = resultant(&doc.to_map().unwrap(), &ResultantOptions::default()).unwrap();
//! assert_eq!(res.value.to_string(), "12");
//! ```

pub mod complex;
pub mod error;
pub mod format;
pub mod koszul;
pub mod matrix;
pub mod oracle;
pub mod parse;
pub mod poly;
pub mod rat;
pub mod resultant;

pub use complex::{
    cohomology, det_complex, det_degree, enumerate_selections, select_minors,
    select_minors_shuffled, sigma_sizes, verify_nilpotent, ChainComplex, CohomologyReport,
    MinorSelection, Nilpotency,
};
pub use error::{Error, Result};
pub use koszul::{
    build_complex, build_differential, euler_char, euler_genfunc, koszul_spec, min_exact_r,
    omega_basis, omega_dim, render_tower, tower, KoszulSpec, OmegaBasis, ThetaWord,
};
pub use matrix::{bareiss_det, ExactMatrix};
pub use parse::{parse_system, ParseError, SystemDocument};
pub use poly::{HPoly, Monomial, PolyMap};
pub use rat::Rat;
pub use resultant::{
    resultant, resultant_degree, resultant_koszul, resultant_sylvester, sylvester_matrix, Method,
    ResultantOptions, ResultantResult,
};
