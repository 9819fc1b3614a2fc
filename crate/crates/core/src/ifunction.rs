//! The equivariant small I-function of a Calabi-Yau chain polynomial,
//!
//! ```text
//! I(t, -z) = -z sum_{k >= 1} t^k  prod_j prod_{b in B_j(k)} (b z + q_j)
//!                                 / prod_{0 < b < k} (b z)  e_{J^k},
//! B_j(k) = { b : delta_j < b < c_j k, b >= 0, frac(b) = frac(c_j k) },
//! ```
//!
//! with charges `c_j`, `delta_j = -1` when `N - j` is odd and `0` otherwise,
//! and `q_j = k_j q`.
//!
//! # Picard-Fuchs recurrence
//!
//! The operator `t^d prod_j prod_{c=0}^{w_j-1} (c_j z t d/dt + c z + q_j)
//! - prod_{c=1}^{d} (z t d/dt - c z)` acts on `t^k` through `t d/dt = k`.
//! The coefficient of `t^m` of its image is therefore
//!
//! * `prod_{c=1}^{d} (m - c) z I_m` for `m <= d`, which vanishes through the
//!   factor `c = m`;
//! * `prod_j prod_{c=0}^{w_j-1} ((c_j k + c) z + q_j) I_k
//!   - prod_{c=1}^{d} (k + d - c) z I_{k+d}` for `m = k + d`.
//!
//! The second vanishes because `c_j (k + d) = c_j k + w_j`: the set
//! `B_j(k + d)` is `B_j(k)` together with `c_j k + c` for `0 <= c < w_j`, and
//! the denominator of `I_{k+d}` gains `prod_{c=1}^{d} (k + d - c) z`.
//! [`pf_check`] verifies both statements as exact polynomial identities.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::chainfjrw::{sector_of, weight_seq, ChainData, SymmetryElement};
use crate::error::{Error, Result};
use crate::exactalg::{frac, int, Poly2, RatFunc, Rational};
use crate::exec::{map_ordered, Strategy};

/// `delta_j` for `1 <= j <= N`.
pub fn delta(c: &ChainData, j: usize) -> i64 {
    if (c.len() - j) % 2 == 1 {
        -1
    } else {
        0
    }
}

/// `B_j(k)`, ascending.
pub fn b_set(c: &ChainData, j: usize, k: u64) -> Vec<Rational> {
    let top = &c.charges()[j - 1] * Rational::from_integer(k.into());
    let lower = int(delta(c, j));
    let mut b = frac(&top);
    let mut out = Vec::new();
    while b < top {
        if b > lower && b >= Rational::zero() {
            out.push(b.clone());
        }
        b += Rational::one();
    }
    out
}

/// The coefficient of `t^k` in `I(t, -z)`, labeled by its sector `J^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ICoefficient {
    pub k: u64,
    pub sector: SymmetryElement,
    pub value: RatFunc,
    /// `(b, k_j)` for each numerator factor `b z + k_j q`.
    pub factors: Vec<(Rational, i64)>,
}

impl ICoefficient {
    /// Number of numerator factors with `b = 0`, i.e. the power of `q`
    /// dividing the coefficient.
    pub fn q_valuation(&self) -> usize {
        self.factors.iter().filter(|(b, _)| b.is_zero()).count()
    }

    pub fn is_broad(&self) -> bool {
        self.sector.is_broad()
    }
}

/// Numerator polynomial and the denominator `prod_{0<b<k} b z`, unreduced.
fn i_parts(c: &ChainData, kw: &[i64], k: u64) -> (Poly2, Poly2, Vec<(Rational, i64)>) {
    let mut factors = Vec::new();
    for j in 1..=c.len() {
        for b in b_set(c, j, k) {
            factors.push((b, kw[j - 1]));
        }
    }
    let mut num = Poly2::term(-Rational::one(), 1, 0);
    for (b, kj) in &factors {
        num = &num * &Poly2::linear(b.clone(), int(*kj));
    }
    let fact: BigInt = (1..k).fold(BigInt::one(), |acc, b| acc * BigInt::from(b));
    let den = Poly2::term(Rational::from_integer(fact), (k - 1) as u32, 0);
    (num, den, factors)
}

pub fn i_coefficient(c: &ChainData, k: u64) -> Result<ICoefficient> {
    c.require_calabi_yau()?;
    if k == 0 {
        return Err(Error::NonPositiveIndex);
    }
    let kw = weight_seq(c)?;
    let (num, den, factors) = i_parts(c, kw.weights(), k);
    Ok(ICoefficient {
        k,
        sector: sector_of(c, k as i64)?,
        value: RatFunc::new(num, den),
        factors,
    })
}

/// `I_1, ..., I_{k_max}`.
pub fn i_coefficients(c: &ChainData, k_max: u64, strategy: Strategy) -> Result<Vec<ICoefficient>> {
    let ks: Vec<u64> = (1..=k_max).collect();
    map_ordered(strategy, &ks, |&k| i_coefficient(c, k)).into_iter().collect()
}

/// Substitutes `q = 0`; zero exactly when some `B_j(k)` contains `0`.
pub fn noneq_limit(ic: &ICoefficient) -> RatFunc {
    ic.value.at_q_zero().expect("the denominator is a power of z")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PfKind {
    /// `m <= d`: killed by the factor `(m - m) z`.
    Annihilated,
    /// `m = k + d`: the recurrence between `I_k` and `I_{k+d}`.
    Recurrence { k: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PfEntry {
    pub m: u64,
    pub kind: PfKind,
    pub passes: bool,
    /// The `t^m` coefficient of the operator applied to `I`; zero on success.
    pub residual: RatFunc,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PfReport {
    pub m_max: u64,
    pub entries: Vec<PfEntry>,
}

impl PfReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.passes)
    }
}

/// `prod_j prod_{c=0}^{w_j-1} ((c_j k + c) z + k_j q)`.
fn first_product(c: &ChainData, kw: &[i64], k: u64) -> Poly2 {
    let mut p = Poly2::one();
    for j in 0..c.len() {
        let base = &c.charges()[j] * Rational::from_integer(k.into());
        for cc in 0..c.weights()[j] {
            p = &p * &Poly2::linear(&base + int(cc as i64), int(kw[j]));
        }
    }
    p
}

/// `prod_{c=1}^{d} (m - c) z`.
fn second_product(d: u64, m: u64) -> Poly2 {
    let c: Rational = (1..=d).map(|c| int(m as i64 - c as i64)).product();
    Poly2::term(c, d as u32, 0)
}

/// Checks every `t^m` coefficient, `1 <= m <= m_max`, of the Picard-Fuchs
/// operator applied to `I(t, -z)`.
pub fn pf_check(c: &ChainData, m_max: u64, strategy: Strategy) -> Result<PfReport> {
    c.require_calabi_yau()?;
    let kw = weight_seq(c)?;
    let kw = kw.weights();
    let d = c.degree();
    let ms: Vec<u64> = (1..=m_max).collect();
    let entries = map_ordered(strategy, &ms, |&m| {
        let (num_m, den_m, _) = i_parts(c, kw, m);
        let second = &second_product(d, m) * &num_m;
        if m <= d {
            let residual = RatFunc::new(second, den_m);
            return PfEntry { m, kind: PfKind::Annihilated, passes: residual.is_zero(), residual };
        }
        let k = m - d;
        let (num_k, den_k, _) = i_parts(c, kw, k);
        let first = &first_product(c, kw, k) * &num_k;
        // first/den_k - second/den_m, compared without reduction
        let lhs = &first * &den_m;
        let rhs = &second * &den_k;
        let passes = lhs == rhs;
        let residual = if passes { RatFunc::zero() } else { RatFunc::new(&lhs - &rhs, &den_k * &den_m) };
        PfEntry { m, kind: PfKind::Recurrence { k }, passes, residual }
    });
    Ok(PfReport { m_max, entries })
}

/// The factor `M_j` of the big I-function for caller-supplied `D` and
/// `omega`: `prod_{0<=m<D} ((omega + m) z + q_j)` for `D >= 1`, `1` for
/// `D = 0`, `prod_{1<=m<=-D} 1/((omega - m) z + q_j)` for `D <= -1`.
pub fn big_i_factor(big_d: i64, omega: &Rational, k_j: i64) -> RatFunc {
    let qj = int(k_j);
    if big_d >= 0 {
        let p = (0..big_d).fold(Poly2::one(), |acc, m| &acc * &Poly2::linear(omega + int(m), qj.clone()));
        RatFunc::from_poly(p)
    } else {
        let p = (1..=-big_d).fold(Poly2::one(), |acc, m| &acc * &Poly2::linear(omega - int(m), qj.clone()));
        RatFunc::new(Poly2::one(), p)
    }
}
