//! Exact computations with equivariant characteristic classes.
//!
//! * [`exactalg`]: rationals, truncated Chow-type rings, Laurent series in
//!   the equivariant parameter `q`, rational functions in `(z, q)`.
//! * [`charclasses`]: Chern characters, Todd classes, the class `c_t`, the
//!   equivariant Euler class `e_q` and the identity relating them.
//! * [`chainfjrw`]: weights, charges and symmetries of chain polynomials.
//! * [`ifunction`]: the equivariant small I-function and its Picard-Fuchs
//!   equation.
//! * [`localize`]: localization products, tautological relations and their
//!   cross-check.
//!
//! Batch entry points take an [`exec::Strategy`]; with the `parallel`
//! feature (on by default) [`exec::Strategy::Parallel`] runs on rayon.

pub mod chainfjrw;
pub mod charclasses;
pub mod error;
pub mod exactalg;
pub mod exec;
pub mod ifunction;
pub mod localize;
pub mod sample;

pub use error::{Error, Result};
