//! Exact Grothendieck-Witt arithmetic and enriched (A¹) degrees.
//!
//! The crate is organised bottom-up:
//!
//! * [`field`]: the tower of exact base fields, square classes and traces;
//! * [`poly`]: sparse multivariate polynomials with a small text grammar;
//! * [`gw`]: Grothendieck-Witt classes, bilinear forms, transfers and
//!   Springer residues;
//! * [`local_algebra`]: local algebras of isolated zeros by truncation;
//! * [`degree`]: local degrees (simple zero and EKL), Bézout forms and global
//!   degrees over finite fields;
//! * [`milnor`]: A¹-Milnor numbers, nodes and the linear-perturbation check;
//! * [`puiseux`]: Newton lifting of critical-point branches of deformations
//!   and the bifurcation check.

pub mod arith;
pub mod degree;
pub mod error;
pub mod field;
pub mod gw;
pub mod linalg;
pub mod local_algebra;
pub mod milnor;
pub mod poly;
pub mod puiseux;

pub use error::{Error, Result};
pub use field::{Elem, Field, SquareClass, Ternary};
pub use gw::{BilinearForm, GwElement};
pub use poly::Polynomial;
