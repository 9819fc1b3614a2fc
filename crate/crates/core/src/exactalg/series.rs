//! Truncated Laurent series in the equivariant parameter `q`.
//!
//! A series stores its coefficients between the lowest and highest nonzero
//! exponent together with a precision: `Some(p)` means every coefficient of
//! `q^e` with `e <= p` is known exactly and nothing is known above `p`;
//! `None` marks an exact Laurent polynomial.  Products propagate precision
//! the usual way, `prec(ab) = min(prec(a) + val(b), prec(b) + val(a))`, so a
//! truncated result never reports a coefficient that was not determined.

use std::fmt;

use num_traits::{One, Zero};

use super::ring::{fmt_monomial, fmt_sum, ChowElement, Ring};
use super::Rational;
use crate::error::{Error, Result};

/// Coefficient rings a [`Laurent`] series can be built over.
pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    fn is_zero(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, c: &Rational) -> Self;
}

impl Coefficient for Rational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, c: &Rational) -> Self {
        self * c
    }
}

impl Coefficient for ChowElement {
    fn is_zero(&self) -> bool {
        ChowElement::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        self.ring().zero()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, c: &Rational) -> Self {
        ChowElement::scale(self, c)
    }
}

fn prec_min(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

#[derive(Clone, Debug)]
pub struct Laurent<C> {
    zero: C,
    low: i64,
    coeffs: Vec<C>,
    prec: Option<i64>,
}

/// Laurent series with rational coefficients.
pub type ScalarSeries = Laurent<Rational>;

/// Laurent series with coefficients in a truncated graded ring, i.e. an
/// element of `A_*(S)((q))`.
pub type QSeries = Laurent<ChowElement>;

impl<C: Coefficient> Laurent<C> {
    /// Builds `sum_i coeffs[i] q^(low + i)`, discarding terms above `prec`.
    pub fn from_coeffs(zero: C, low: i64, coeffs: Vec<C>, prec: Option<i64>) -> Self {
        let mut s = Self { zero, low, coeffs, prec };
        s.normalize();
        s
    }

    pub fn zero_series(zero: C, prec: Option<i64>) -> Self {
        Self { zero, low: 0, coeffs: Vec::new(), prec }
    }

    /// `c q^e`.
    pub fn monomial(c: C, e: i64, prec: Option<i64>) -> Self {
        let zero = c.zero_like();
        Self::from_coeffs(zero, e, vec![c], prec)
    }

    fn normalize(&mut self) {
        if let Some(p) = self.prec {
            let keep = (p - self.low + 1).clamp(0, self.coeffs.len() as i64) as usize;
            self.coeffs.truncate(keep);
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn zero_coeff(&self) -> &C {
        &self.zero
    }

    /// `None` for an exact Laurent polynomial.
    pub fn prec(&self) -> Option<i64> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn min_exponent(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.low)
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn max_exponent(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    /// A lower bound for the valuation used in precision bookkeeping;
    /// `None` stands for the exact zero series (valuation +infinity).
    fn val_bound(&self) -> Option<i64> {
        match (self.min_exponent(), self.prec) {
            (Some(v), _) => Some(v),
            (None, Some(p)) => Some(p + 1),
            (None, None) => None,
        }
    }

    pub fn coeff(&self, e: i64) -> C {
        let i = e - self.low;
        if i < 0 || i >= self.coeffs.len() as i64 {
            self.zero.clone()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    /// Nonzero `(exponent, coefficient)` pairs, ascending.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &C)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i64, c))
    }

    /// Drops every term above `p` and caps the precision at `p`.
    pub fn truncate(&self, p: i64) -> Self {
        let prec = prec_min(self.prec, Some(p));
        Self::from_coeffs(self.zero.clone(), self.low, self.coeffs.clone(), prec)
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = prec_min(self.prec, other.prec);
        let (Some(lo_a), Some(lo_b)) = (self.min_exponent(), other.min_exponent()) else {
            let src = if self.is_zero() { other } else { self };
            return Self::from_coeffs(self.zero.clone(), src.low, src.coeffs.clone(), prec);
        };
        let low = lo_a.min(lo_b);
        let high = self.max_exponent().unwrap().max(other.max_exponent().unwrap());
        let coeffs = (low..=high).map(|e| self.coeff(e).add(&other.coeff(e))).collect();
        Self::from_coeffs(self.zero.clone(), low, coeffs, prec)
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(Coefficient::neg).collect();
        Self { zero: self.zero.clone(), low: self.low, coeffs, prec: self.prec }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let coeffs = self.coeffs.iter().map(|x| x.scale(c)).collect();
        Self::from_coeffs(self.zero.clone(), self.low, coeffs, self.prec)
    }

    /// Multiplication by `q^n`.
    pub fn shift(&self, n: i64) -> Self {
        Self {
            zero: self.zero.clone(),
            low: self.low + n,
            coeffs: self.coeffs.clone(),
            prec: self.prec.map(|p| p + n),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = match (self.val_bound(), other.val_bound()) {
            (None, _) | (_, None) => None,
            (Some(va), Some(vb)) => {
                prec_min(self.prec.map(|p| p + vb), other.prec.map(|p| p + va))
            }
        };
        if self.is_zero() || other.is_zero() {
            return Self::zero_series(self.zero.clone(), prec);
        }
        let low = self.low + other.low;
        let mut high = self.max_exponent().unwrap() + other.max_exponent().unwrap();
        if let Some(p) = prec {
            high = high.min(p);
        }
        if high < low {
            return Self::zero_series(self.zero.clone(), prec);
        }
        let mut acc: Vec<Option<C>> = vec![None; (high - low + 1) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let k = i + j;
                if k >= acc.len() {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                let p = a.mul(b);
                acc[k] = Some(match acc[k].take() {
                    Some(s) => s.add(&p),
                    None => p,
                });
            }
        }
        let coeffs = acc.into_iter().map(|c| c.unwrap_or_else(|| self.zero.clone())).collect();
        Self::from_coeffs(self.zero.clone(), low, coeffs, prec)
    }

    pub fn pow(&self, e: u32, one: &Self) -> Self {
        let mut result = one.clone();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Coefficients agree for every exponent up to `p` (both must be known).
    pub fn agrees_up_to(&self, other: &Self, p: i64) -> bool {
        if prec_min(self.prec, other.prec).is_some_and(|q| q < p) {
            return false;
        }
        let lo = match (self.min_exponent(), other.min_exponent()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => return true,
        };
        (lo..=p).all(|e| self.coeff(e) == other.coeff(e))
    }
}

/// Equality up to the common precision.
impl<C: Coefficient> PartialEq for Laurent<C> {
    fn eq(&self, other: &Self) -> bool {
        let top = match prec_min(self.prec, other.prec) {
            Some(p) => p,
            None => {
                let a = self.max_exponent().unwrap_or(i64::MIN);
                let b = other.max_exponent().unwrap_or(i64::MIN);
                a.max(b)
            }
        };
        if top == i64::MIN {
            return true;
        }
        let lo = [self.min_exponent(), other.min_exponent()].into_iter().flatten().min();
        match lo {
            None => true,
            Some(lo) => (lo..=top).all(|e| self.coeff(e) == other.coeff(e)),
        }
    }
}

/// Recomputes `f(work)` with growing working precision until the result is
/// known up to `target`, then truncates to `target`.
pub(crate) fn to_precision<C, F>(target: i64, mut f: F) -> Result<Laurent<C>>
where
    C: Coefficient,
    F: FnMut(i64) -> Result<Laurent<C>>,
{
    let mut work = target;
    loop {
        let s = f(work)?;
        match s.prec() {
            None => return Ok(s.truncate(target)),
            Some(p) if p >= target => return Ok(s.truncate(target)),
            Some(p) => {
                let next = work + (target - p).max(1);
                if next - target > 64 + 4 * target.abs() {
                    return Err(Error::InsufficientPrecision { needed: target, have: p });
                }
                work = next;
            }
        }
    }
}

impl ScalarSeries {
    pub fn scalar(c: Rational) -> Self {
        Self::monomial(c, 0, None)
    }

    pub fn one() -> Self {
        Self::scalar(Rational::one())
    }

    /// `c q^e` as an exact series.
    pub fn term(c: Rational, e: i64) -> Self {
        Self::monomial(c, e, None)
    }

    /// Multiplicative inverse; exact inputs use `target` as the precision.
    pub fn invert(&self, target: i64) -> Result<Self> {
        let Some(v) = self.min_exponent() else {
            return Err(Error::NotInvertible);
        };
        if self.is_exact() && self.coeffs.len() == 1 {
            return Ok(Self::term(self.coeffs[0].recip(), -v));
        }
        // s = q^v (c_0 + c_1 q + ...), s^-1 = q^-v (d_0 + d_1 q + ...)
        let prec = match self.prec {
            Some(p) => target.min(p - 2 * v),
            None => target,
        };
        let n_terms = prec + v + 1;
        if n_terms <= 0 {
            return Ok(Self::zero_series(Rational::zero(), Some(prec)));
        }
        let c0_inv = self.coeffs[0].recip();
        let mut d: Vec<Rational> = Vec::with_capacity(n_terms as usize);
        d.push(c0_inv.clone());
        for n in 1..n_terms as usize {
            let mut s = Rational::zero();
            for i in 1..=n.min(self.coeffs.len() - 1) {
                s += &self.coeffs[i] * &d[n - i];
            }
            d.push(-s * &c0_inv);
        }
        Ok(Self::from_coeffs(Rational::zero(), -v, d, Some(prec)))
    }

    /// `exp(g)` for `g` of positive valuation.
    pub fn exp(&self, target: i64) -> Result<Self> {
        if self.min_exponent().is_some_and(|v| v <= 0) {
            return Err(Error::NonzeroConstant);
        }
        let prec = prec_min(self.prec, Some(target)).unwrap();
        if prec < 0 {
            return Ok(Self::zero_series(Rational::zero(), Some(prec)));
        }
        // n E_n = sum_{k=1}^n k g_k E_{n-k}
        let n = prec as usize;
        let mut e: Vec<Rational> = Vec::with_capacity(n + 1);
        e.push(Rational::one());
        for m in 1..=n {
            let mut s = Rational::zero();
            for k in 1..=m {
                let g = self.coeff(k as i64);
                if !Zero::is_zero(&g) {
                    s += g * Rational::from_integer(k.into()) * &e[m - k];
                }
            }
            e.push(s / Rational::from_integer(m.into()));
        }
        Ok(Self::from_coeffs(Rational::zero(), 0, e, Some(prec)))
    }

    /// Integer power, negative exponents through [`Self::invert`].
    pub fn powi(&self, e: i64, target: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow(e as u32, &Self::one()))
        } else {
            // invert first so precision loss happens once
            let inv = self.invert(target + 2 * (e.unsigned_abs() as i64) * self.spread())?;
            Ok(inv.pow(e.unsigned_abs() as u32, &Self::one()))
        }
    }

    fn spread(&self) -> i64 {
        self.min_exponent().map_or(0, |v| v.abs() + 1)
    }
}

impl QSeries {
    pub fn ring(&self) -> &Ring {
        self.zero.ring()
    }

    pub fn one_in(ring: &Ring) -> Self {
        Self::monomial(ring.one(), 0, None)
    }

    pub fn zero_in(ring: &Ring, prec: Option<i64>) -> Self {
        Self::zero_series(ring.zero(), prec)
    }

    pub fn check_ring(&self, other: &Self) -> Result<()> {
        if self.ring() == other.ring() {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        Ok(self.add(other))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        Ok(self.mul(other))
    }

    /// `s(q) * c` for a scalar series `s` and a ring element `c`.
    pub fn outer(s: &ScalarSeries, c: &ChowElement) -> Self {
        let coeffs = s.coeffs.iter().map(|a| c.scale(a)).collect();
        Self::from_coeffs(c.ring().zero(), s.low, coeffs, s.prec)
    }

    pub fn from_scalar(ring: &Ring, s: &ScalarSeries) -> Self {
        Self::outer(s, &ring.one())
    }

    /// The series of constant (degree-0) parts of the coefficients.
    pub fn scalar_part(&self) -> ScalarSeries {
        let coeffs = self.coeffs.iter().map(ChowElement::constant_part).collect();
        ScalarSeries::from_coeffs(Rational::zero(), self.low, coeffs, self.prec)
    }

    /// The part with coefficients of positive degree; nilpotent in the ring.
    pub fn nilpotent_part(&self) -> Self {
        let coeffs = self.coeffs.iter().map(ChowElement::without_constant).collect();
        Self::from_coeffs(self.zero.clone(), self.low, coeffs, self.prec)
    }

    /// Multiplicative inverse up to `q_max`.
    ///
    /// Writes `s = S (1 + S^-1 N)` with `S` the scalar part and `N`
    /// nilpotent, so the inverse exists iff `S != 0` and the geometric series
    /// in `S^-1 N` stops after `D` terms.
    pub fn invert(&self, q_max: i64) -> Result<Self> {
        let scalar = self.scalar_part();
        if scalar.is_zero() {
            return Err(Error::NotInvertible);
        }
        let nil = self.nilpotent_part();
        let ring = self.ring().clone();
        let depth = ring.truncation();
        let exact = self.is_exact();
        let compute = |work: i64| -> Result<Self> {
            let s_inv = Self::from_scalar(&ring, &scalar.invert(work)?);
            let m = s_inv.mul(&nil).neg();
            let mut sum = Self::one_in(&ring);
            let mut power = Self::one_in(&ring);
            for _ in 0..depth {
                power = power.mul(&m);
                if power.is_zero() && power.is_exact() {
                    break;
                }
                sum = sum.add(&power);
            }
            Ok(s_inv.mul(&sum))
        };
        if exact {
            to_precision(q_max, compute)
        } else {
            Ok(compute(q_max)?.truncate(q_max))
        }
    }

    /// `exp(x)` for `x` whose scalar part has positive valuation; the
    /// nilpotent part may contain arbitrary powers of `q`.
    pub fn exp(&self, q_max: i64) -> Result<Self> {
        let scalar = self.scalar_part();
        if scalar.min_exponent().is_some_and(|v| v <= 0) {
            return Err(Error::NonzeroConstant);
        }
        let nil = self.nilpotent_part();
        let ring = self.ring().clone();
        let compute = |work: i64| -> Result<Self> {
            let mut sum = Self::one_in(&ring);
            let mut power = Self::one_in(&ring);
            for m in 1..=ring.truncation() {
                power = power.mul(&nil).scale(&Rational::new(1.into(), m.into()));
                if power.is_zero() && power.is_exact() {
                    break;
                }
                sum = sum.add(&power);
            }
            let e_scalar = if scalar.is_zero() {
                ScalarSeries::one()
            } else {
                scalar.exp(work)?
            };
            Ok(Self::from_scalar(&ring, &e_scalar).mul(&sum))
        };
        if self.is_exact() {
            to_precision(q_max, compute)
        } else {
            Ok(compute(q_max)?.truncate(q_max))
        }
    }

    /// True when no negative power of `q` has a nonzero coefficient.
    pub fn is_convergent(&self) -> bool {
        self.min_exponent().is_none_or(|v| v >= 0)
    }

    /// All `(e, c)` with `e < 0` and `c != 0`, ascending in `e`.
    pub fn negative_part(&self) -> Vec<(i64, ChowElement)> {
        self.iter().filter(|(e, _)| *e < 0).map(|(e, c)| (e, c.clone())).collect()
    }

    /// The constant term of a convergent series.
    pub fn q_limit(&self) -> Result<ChowElement> {
        let offending = self.negative_part();
        if !offending.is_empty() {
            return Err(Error::NotConvergent { offending });
        }
        if let Some(p) = self.prec {
            if p < 0 {
                return Err(Error::InsufficientPrecision { needed: 0, have: p });
            }
        }
        Ok(self.coeff(0))
    }
}

fn fmt_q_power(e: i64) -> String {
    match e {
        0 => String::new(),
        1 => "q".to_string(),
        _ => format!("q^{e}"),
    }
}

impl fmt::Display for ScalarSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(i64, &Rational)> = self.iter().collect();
        fmt_sum(f, terms.into_iter().map(|(e, c)| (c, fmt_q_power(e))))?;
        if let Some(p) = self.prec {
            write!(f, " + O(q^{})", p + 1)?;
        }
        Ok(())
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // each coefficient is expanded into its monomials, grouped by q-power
        let ring = self.ring().clone();
        let mut terms: Vec<(Rational, String)> = Vec::new();
        for (e, c) in self.iter() {
            let q = fmt_q_power(e);
            for (i, a) in c.terms() {
                let m = fmt_monomial(&ring, i);
                let mono = match (m.is_empty(), q.is_empty()) {
                    (true, _) => q.clone(),
                    (false, true) => m,
                    (false, false) => format!("{m}*{q}"),
                };
                terms.push((a.clone(), mono));
            }
        }
        fmt_sum(f, terms.iter().map(|(c, m)| (c, m.clone())))?;
        if let Some(p) = self.prec {
            write!(f, " + O(q^{})", p + 1)?;
        }
        Ok(())
    }
}
