//! Exact elimination and conservation audits for ensembles of roots-particles
//! living on an implicitly defined polynomial worldline.
//!
//! A generating system `F1(x, y, t) = 0`, `F2(x, y, t) = 0` is reduced by
//! resultants to two eliminants in `x` and `y` whose coefficients are
//! polynomials in `t`. Their roots, tracked over `t`, form the particle
//! ensemble; Vieta relations on the eliminants yield exact conserved quantities
//! which the auditors compare against the numerically tracked motion.

pub mod error;
pub mod poly;
pub mod upoly;
pub mod univariate;
pub mod parser;
pub mod system;
pub mod config;
pub mod elimination;
pub mod sturm;
pub mod roots;
pub mod assignment;
pub mod assemble;
pub mod tracker;
pub mod audit;
pub mod angular;

pub use error::{Error, Result};
pub use poly::{ComplexValue, MultiPoly, Rational, Var};
pub use system::PolySystem;
