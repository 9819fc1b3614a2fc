//! Chain polynomials `W = x_1^{a_1} x_2 + ... + x_{N-1}^{a_{N-1}} x_N + x_N^{a_N}`:
//! weights and charges, the diagonal symmetry group `Aut(W)` in
//! `Theta`-coordinates, the grading element, sectors, the selection rule
//! and the equivariant weights `q_j = k_j q`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{frac, int, Rational};

/// Exponents, primitive weights, degree and charges of a chain polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainData {
    exponents: Vec<u64>,
    weights: Vec<u64>,
    degree: u64,
    charges: Vec<Rational>,
}

impl ChainData {
    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    /// `q_j = w_j / d`.
    pub fn charges(&self) -> &[Rational] {
        &self.charges
    }

    /// `d = w_1 + ... + w_N`.
    pub fn is_calabi_yau(&self) -> bool {
        self.weights.iter().sum::<u64>() == self.degree
    }

    pub fn require_calabi_yau(&self) -> Result<()> {
        if self.is_calabi_yau() {
            Ok(())
        } else {
            Err(Error::NotCalabiYau { degree: self.degree, weight_sum: self.weights.iter().sum() })
        }
    }
}

impl fmt::Display for ChainData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: Vec<String>| v.join(", ");
        write!(
            f,
            "a = ({}), w = ({}), d = {}, charges = ({})",
            join(self.exponents.iter().map(u64::to_string).collect()),
            join(self.weights.iter().map(u64::to_string).collect()),
            self.degree,
            join(self.charges.iter().map(Rational::to_string).collect()),
        )
    }
}

/// Solves `a_j w_j + w_{j+1} = d`, `a_N w_N = d` for the primitive positive
/// integer solution.
pub fn chain_solve(a: &[u64]) -> Result<ChainData> {
    let n = a.len();
    if n == 0 {
        return Err(Error::EmptyChain);
    }
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            return Err(Error::InvalidExponent { index: i + 1, value: 0, reason: "exponents must be positive" });
        }
    }
    if a[n - 1] == 1 {
        return Err(Error::InvalidExponent {
            index: n,
            value: 1,
            reason: "the last exponent must be at least 2, otherwise W is not an isolated singularity",
        });
    }
    let mut charges = vec![Rational::zero(); n];
    charges[n - 1] = Rational::new(BigInt::one(), a[n - 1].into());
    for j in (0..n - 1).rev() {
        charges[j] = (Rational::one() - &charges[j + 1]) / Rational::from_integer(a[j].into());
    }
    let d_big = charges.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let degree = d_big.to_u64().ok_or(Error::Overflow("chain degree"))?;
    let weights = charges
        .iter()
        .map(|q| (q * Rational::from_integer(d_big.clone())).to_integer().to_u64().ok_or(Error::Overflow("chain weight")))
        .collect::<Result<Vec<u64>>>()?;
    Ok(ChainData { exponents: a.to_vec(), weights, degree, charges })
}

/// A diagonal symmetry `diag(exp(2 pi i theta_j))`, stored by its
/// coordinates `theta_j` in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymmetryElement {
    theta: Vec<Rational>,
}

impl SymmetryElement {
    /// Reduces every coordinate mod 1.
    pub fn new(theta: Vec<Rational>) -> Self {
        Self { theta: theta.iter().map(frac).collect() }
    }

    pub fn identity(n: usize) -> Self {
        Self { theta: vec![Rational::zero(); n] }
    }

    pub fn theta(&self) -> &[Rational] {
        &self.theta
    }

    pub fn is_identity(&self) -> bool {
        self.theta.iter().all(Zero::is_zero)
    }

    /// No coordinate is zero, i.e. no entry of the matrix equals 1.
    pub fn is_narrow(&self) -> bool {
        self.theta.iter().all(|t| !t.is_zero())
    }

    pub fn is_broad(&self) -> bool {
        !self.is_narrow()
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.theta.len() != other.theta.len() {
            return Err(Error::DimensionMismatch { got: other.theta.len(), expected: self.theta.len() });
        }
        Ok(Self::new(self.theta.iter().zip(&other.theta).map(|(a, b)| a + b).collect()))
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.theta.iter().map(|t| -t).collect())
    }

    /// `k theta mod 1`.
    pub fn power(&self, k: i64) -> Self {
        let k = int(k);
        Self::new(self.theta.iter().map(|t| t * &k).collect())
    }

    /// `a_j theta_j + theta_{j+1}` and `a_N theta_N` are integers.
    pub fn is_symmetry_of(&self, c: &ChainData) -> bool {
        let n = c.len();
        if self.theta.len() != n {
            return false;
        }
        (0..n).all(|j| {
            let mut x = &self.theta[j] * Rational::from_integer(c.exponents[j].into());
            if j + 1 < n {
                x += &self.theta[j + 1];
            }
            x.is_integer()
        })
    }
}

impl fmt::Display for SymmetryElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.theta.iter().map(Rational::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Largest group [`aut_group`] will enumerate.
pub const MAX_GROUP_ORDER: u64 = 1 << 20;

/// `|Aut(W)| = a_1 ... a_N`.
pub fn aut_group_order(c: &ChainData) -> Result<u64> {
    c.exponents.iter().try_fold(1u64, |acc, &a| acc.checked_mul(a)).ok_or(Error::Overflow("group order"))
}

/// All of `Aut(W)`, by back-substitution from `theta_N`.
pub fn aut_group(c: &ChainData) -> Result<Vec<SymmetryElement>> {
    let order = aut_group_order(c)?;
    if order > MAX_GROUP_ORDER {
        return Err(Error::InvalidInput(format!(
            "Aut(W) has {order} elements, more than the enumeration limit {MAX_GROUP_ORDER}"
        )));
    }
    let n = c.len();
    // partial vectors hold theta_j..theta_N, built from the back
    let mut partial: Vec<Vec<Rational>> = vec![Vec::new()];
    for j in (0..n).rev() {
        let a = Rational::from_integer(c.exponents[j].into());
        let mut next = Vec::with_capacity(partial.len() * c.exponents[j] as usize);
        for tail in &partial {
            let shift = tail.first().cloned().unwrap_or_else(Rational::zero);
            for m in 0..c.exponents[j] {
                let theta = frac(&((int(m as i64) - &shift) / &a));
                let mut v = Vec::with_capacity(tail.len() + 1);
                v.push(theta);
                v.extend(tail.iter().cloned());
                next.push(v);
            }
        }
        partial = next;
    }
    Ok(partial.into_iter().map(|theta| SymmetryElement { theta }).collect())
}

/// The grading element, with coordinates the charges `q_j`.
pub fn grading_element(c: &ChainData) -> Result<SymmetryElement> {
    let j = SymmetryElement::new(c.charges.clone());
    if !j.is_symmetry_of(c) {
        return Err(Error::NotASymmetry(j.to_string()));
    }
    Ok(j)
}

/// `J^k`.
pub fn sector_of(c: &ChainData, k: i64) -> Result<SymmetryElement> {
    Ok(grading_element(c)?.power(k))
}

/// `gamma(1) ... gamma(n) = J^{2g-2+n}`, coordinatewise mod 1.
pub fn selection_rule(c: &ChainData, g: u64, n: u64, gammas: &[SymmetryElement]) -> Result<bool> {
    if 2 * g + n <= 2 {
        return Err(Error::Unstable { g, n });
    }
    if gammas.len() as u64 != n {
        return Err(Error::SectorCountMismatch { expected: n as usize, got: gammas.len() });
    }
    let chi = i64::try_from(2 * g + n - 2).map_err(|_| Error::Overflow("2g - 2 + n"))?;
    let mut total = SymmetryElement::identity(c.len());
    for gamma in gammas {
        total = total.compose(gamma)?;
    }
    Ok(total == sector_of(c, chi)?)
}

/// The equivariant weights `k_1 = 1`, `k_{j+1} = -a_j k_j`, so that
/// `q_j = k_j q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSeq {
    k: Vec<i64>,
}

impl WeightSeq {
    /// `k_1, ..., k_{N+1}`.
    pub fn weights(&self) -> &[i64] {
        &self.k
    }

    /// `k_j` for `1 <= j <= N + 1`.
    pub fn k(&self, j: usize) -> i64 {
        self.k[j - 1]
    }
}

pub fn weight_seq(c: &ChainData) -> Result<WeightSeq> {
    let mut k = Vec::with_capacity(c.len() + 1);
    k.push(1i64);
    for &a in &c.exponents {
        let a = i64::try_from(a).map_err(|_| Error::Overflow("weight sequence"))?;
        let next = k.last().unwrap().checked_mul(-a).ok_or(Error::Overflow("weight sequence"))?;
        k.push(next);
    }
    Ok(WeightSeq { k })
}
