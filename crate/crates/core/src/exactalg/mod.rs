//! Exact arithmetic: rationals, truncated graded rings, Laurent series in
//! `q`, rational functions in `(z, q)` and the class-expression parser.

mod linalg;
mod parse;
mod ratfunc;
mod ring;
mod series;

pub use linalg::Span;
pub use parse::parse_class_expr;
pub use ratfunc::{Poly2, RatFunc};
pub use ring::{ChowElement, Generator, Ring, RingSpec, MAX_BASIS};
pub use series::{Coefficient, Laurent, QSeries, ScalarSeries};

pub(crate) use series::to_precision;

use num_integer::Integer;

pub type Rational = num_rational::BigRational;

/// `n / d` as a rational.  Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Representative of `x mod 1` in `[0, 1)`.
pub fn frac(x: &Rational) -> Rational {
    let (n, d) = (x.numer(), x.denom());
    Rational::new(n.mod_floor(d), d.clone())
}

/// Default truncation order for a ring of dimension `D`.
pub fn default_q_max(truncation: u32) -> i64 {
    2 * i64::from(truncation) + 2
}
