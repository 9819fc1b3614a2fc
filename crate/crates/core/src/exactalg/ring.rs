//! Truncated graded polynomial rings over the rationals.
//!
//! A ring is generated by named even-degree classes; every monomial whose
//! total degree exceeds the truncation `D` is identically zero.  Elements are
//! stored sparsely against a precomputed monomial basis, which also fixes the
//! canonical (graded lexicographic) term order.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// Largest supported monomial basis.
pub const MAX_BASIS: usize = 2048;

const NO_PRODUCT: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
}

/// Generators with their degrees and the truncation degree `D`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingSpec {
    pub generators: Vec<Generator>,
    pub truncation: u32,
}

impl RingSpec {
    pub fn new(truncation: u32) -> Self {
        Self { generators: Vec::new(), truncation }
    }

    pub fn generator(mut self, name: impl Into<String>, degree: i64) -> Self {
        self.generators.push(Generator { name: name.into(), degree });
        self
    }
}

#[derive(Debug)]
struct RingInner {
    spec: RingSpec,
    degrees: Vec<u32>,
    basis: Vec<Vec<u32>>,
    basis_degree: Vec<u32>,
    index: HashMap<Vec<u32>, u32>,
    // row-major n x n, NO_PRODUCT when the product truncates away
    mul_table: Vec<u32>,
}

/// Shared handle to a ring context.  Cloning is cheap.
#[derive(Clone, Debug)]
pub struct Ring(Arc<RingInner>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Ring {}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn enumerate_monomials(degrees: &[u32], max: u32, out: &mut Vec<Vec<u32>>) -> Result<()> {
    fn rec(degrees: &[u32], left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) -> Result<()> {
        let i = cur.len();
        if i == degrees.len() {
            if out.len() >= MAX_BASIS {
                return Err(Error::RingTooLarge(out.len() + 1));
            }
            out.push(cur.clone());
            return Ok(());
        }
        let mut e = 0;
        while e * degrees[i] <= left {
            cur.push(e);
            rec(degrees, left - e * degrees[i], cur, out)?;
            cur.pop();
            e += 1;
        }
        Ok(())
    }
    rec(degrees, max, &mut Vec::new(), out)
}

impl Ring {
    pub fn new(spec: RingSpec) -> Result<Self> {
        let mut degrees = Vec::with_capacity(spec.generators.len());
        for (i, g) in spec.generators.iter().enumerate() {
            if !is_identifier(&g.name) {
                return Err(Error::InvalidGeneratorName(g.name.clone()));
            }
            if spec.generators[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::DuplicateGenerator(g.name.clone()));
            }
            if g.degree <= 0 || g.degree > i64::from(u32::MAX) {
                return Err(Error::InvalidDegree { name: g.name.clone(), degree: g.degree });
            }
            degrees.push(g.degree as u32);
        }

        let mut basis = Vec::new();
        enumerate_monomials(&degrees, spec.truncation, &mut basis)?;
        let deg_of = |m: &[u32]| m.iter().zip(&degrees).map(|(e, d)| e * d).sum::<u32>();
        // graded, then lexicographic in declaration order (a^2 before a*b before b^2)
        basis.sort_by(|x, y| deg_of(x).cmp(&deg_of(y)).then_with(|| y.cmp(x)));
        let basis_degree: Vec<u32> = basis.iter().map(|m| deg_of(m)).collect();
        let index: HashMap<Vec<u32>, u32> =
            basis.iter().enumerate().map(|(i, m)| (m.clone(), i as u32)).collect();

        let n = basis.len();
        let mut mul_table = vec![NO_PRODUCT; n * n];
        for i in 0..n {
            for j in 0..n {
                if basis_degree[i] + basis_degree[j] > spec.truncation {
                    continue;
                }
                let prod: Vec<u32> = basis[i].iter().zip(&basis[j]).map(|(a, b)| a + b).collect();
                mul_table[i * n + j] = index[&prod];
            }
        }

        Ok(Self(Arc::new(RingInner { spec, degrees, basis, basis_degree, index, mul_table })))
    }

    pub fn spec(&self) -> &RingSpec {
        &self.0.spec
    }

    /// The truncation degree `D`.
    pub fn truncation(&self) -> u32 {
        self.0.spec.truncation
    }

    pub fn num_generators(&self) -> usize {
        self.0.degrees.len()
    }

    pub fn generator_degrees(&self) -> &[u32] {
        &self.0.degrees
    }

    pub fn basis_len(&self) -> usize {
        self.0.basis.len()
    }

    /// Exponent vector of the `i`-th basis monomial.
    pub fn basis_monomial(&self, i: usize) -> &[u32] {
        &self.0.basis[i]
    }

    pub fn basis_degree(&self, i: usize) -> u32 {
        self.0.basis_degree[i]
    }

    /// Basis monomials of degree exactly `d`, as indices.
    pub fn basis_of_degree(&self, d: u32) -> impl Iterator<Item = usize> + '_ {
        self.0.basis_degree.iter().enumerate().filter(move |(_, &e)| e == d).map(|(i, _)| i)
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.0.spec.generators.iter().position(|g| g.name == name)
    }

    pub fn zero(&self) -> ChowElement {
        ChowElement { ring: self.clone(), terms: Vec::new() }
    }

    pub fn one(&self) -> ChowElement {
        self.constant(Rational::one())
    }

    pub fn constant(&self, c: Rational) -> ChowElement {
        self.term(0, c)
    }

    /// `c` times the `i`-th basis monomial.
    pub fn term(&self, i: usize, c: Rational) -> ChowElement {
        let terms = if c.is_zero() { Vec::new() } else { vec![(i as u32, c)] };
        ChowElement { ring: self.clone(), terms }
    }

    /// The monomial with the given exponents, or zero if it truncates away.
    pub fn monomial(&self, exponents: &[u32]) -> ChowElement {
        assert_eq!(exponents.len(), self.num_generators(), "exponent vector length");
        match self.0.index.get(exponents) {
            Some(&i) => self.term(i as usize, Rational::one()),
            None => self.zero(),
        }
    }

    pub fn generator(&self, name: &str) -> Option<ChowElement> {
        let i = self.generator_index(name)?;
        Some(self.generator_at(i))
    }

    pub fn generator_at(&self, i: usize) -> ChowElement {
        let mut e = vec![0; self.num_generators()];
        e[i] = 1;
        self.monomial(&e)
    }

    fn product_index(&self, i: u32, j: u32) -> Option<u32> {
        let n = self.0.basis.len();
        let k = self.0.mul_table[i as usize * n + j as usize];
        (k != NO_PRODUCT).then_some(k)
    }
}

/// An element of a truncated graded ring: a sparse map from basis monomials
/// to nonzero rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChowElement {
    ring: Ring,
    terms: Vec<(u32, Rational)>,
}

impl ChowElement {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `(basis index, coefficient)` pairs in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> + '_ {
        self.terms.iter().map(|(i, c)| (*i as usize, c))
    }

    pub fn coefficient(&self, basis_index: usize) -> Rational {
        self.terms
            .binary_search_by_key(&(basis_index as u32), |t| t.0)
            .map(|k| self.terms[k].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    /// Coefficient of the unit monomial.
    pub fn constant_part(&self) -> Rational {
        self.coefficient(0)
    }

    /// The element minus its constant part.
    pub fn without_constant(&self) -> Self {
        let terms = self.terms.iter().filter(|t| t.0 != 0).cloned().collect();
        Self { ring: self.ring.clone(), terms }
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|t| self.ring.basis_degree(t.0 as usize) == d)
            .cloned()
            .collect();
        Self { ring: self.ring.clone(), terms }
    }

    /// True when every term has degree `d` (the zero element qualifies).
    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.iter().all(|t| self.ring.basis_degree(t.0 as usize) == d)
    }

    /// Degrees present, ascending.
    pub fn degrees(&self) -> Vec<u32> {
        let mut ds: Vec<u32> =
            self.terms.iter().map(|t| self.ring.basis_degree(t.0 as usize)).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    pub fn check_ring(&self, other: &Self) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return self.ring.zero();
        }
        let terms = self.terms.iter().map(|(i, a)| (*i, a * c)).collect();
        Self { ring: self.ring.clone(), terms }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut a, mut b) = (self.terms.iter().peekable(), other.terms.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(x), Some(y)) if x.0 == y.0 => {
                    let s = &x.1 + &y.1;
                    if !s.is_zero() {
                        terms.push((x.0, s));
                    }
                    a.next();
                    b.next();
                }
                (Some(x), Some(y)) if x.0 < y.0 => terms.push(a.next().cloned().unwrap()),
                (Some(_), Some(_)) => terms.push(b.next().cloned().unwrap()),
                (Some(_), None) => terms.push(a.next().cloned().unwrap()),
                (None, Some(_)) => terms.push(b.next().cloned().unwrap()),
                (None, None) => break,
            }
        }
        Self { ring: self.ring.clone(), terms }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return self.ring.zero();
        }
        let n = self.ring.basis_len();
        let mut acc: Vec<Option<Rational>> = vec![None; n];
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                if let Some(k) = self.ring.product_index(*i, *j) {
                    let p = a * b;
                    match &mut acc[k as usize] {
                        Some(s) => *s += p,
                        slot @ None => *slot = Some(p),
                    }
                }
            }
        }
        let terms = acc
            .into_iter()
            .enumerate()
            .filter_map(|(k, c)| c.filter(|c| !c.is_zero()).map(|c| (k as u32, c)))
            .collect();
        Self { ring: self.ring.clone(), terms }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = self.ring.one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `exp(x) = sum x^m / m!`, a finite sum since `x` is nilpotent.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_part().is_zero() {
            return Err(Error::NonzeroConstant);
        }
        let mut result = self.ring.one();
        let mut power = self.ring.one();
        for m in 1..=self.ring.truncation() {
            power = (&power * self).scale(&Rational::new(1.into(), m.into()));
            if power.is_zero() {
                break;
            }
            result = &result + &power;
        }
        Ok(result)
    }
}

impl Add for &ChowElement {
    type Output = ChowElement;
    fn add(self, rhs: &ChowElement) -> ChowElement {
        assert!(self.ring == rhs.ring, "ring mismatch");
        self.add_unchecked(rhs)
    }
}

impl Sub for &ChowElement {
    type Output = ChowElement;
    fn sub(self, rhs: &ChowElement) -> ChowElement {
        self + &(-rhs)
    }
}

impl Mul for &ChowElement {
    type Output = ChowElement;
    fn mul(self, rhs: &ChowElement) -> ChowElement {
        assert!(self.ring == rhs.ring, "ring mismatch");
        self.mul_unchecked(rhs)
    }
}

impl Neg for &ChowElement {
    type Output = ChowElement;
    fn neg(self) -> ChowElement {
        let terms = self.terms.iter().map(|(i, c)| (*i, -c)).collect();
        ChowElement { ring: self.ring.clone(), terms }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for ChowElement {
            type Output = ChowElement;
            fn $m(self, rhs: ChowElement) -> ChowElement {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for ChowElement {
    type Output = ChowElement;
    fn neg(self) -> ChowElement {
        -&self
    }
}

pub(crate) fn fmt_monomial(ring: &Ring, idx: usize) -> String {
    let m = ring.basis_monomial(idx);
    let parts: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(g, &e)| {
            let name = &ring.spec().generators[g].name;
            if e == 1 {
                name.clone()
            } else {
                format!("{name}^{e}")
            }
        })
        .collect();
    parts.join("*")
}

/// Writes `sum c_i m_i` in canonical form, using `fmt_mono` for monomials
/// (an empty string stands for the unit).
pub(crate) fn fmt_sum<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (&'a Rational, String)>,
) -> fmt::Result {
    let mut first = true;
    for (c, mono) in terms {
        let neg = c.is_negative();
        let abs = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        first = false;
        if mono.is_empty() {
            write!(f, "{abs}")?;
        } else if abs.is_one() {
            write!(f, "{mono}")?;
        } else {
            write!(f, "{abs}*{mono}")?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for ChowElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_sum(f, self.terms.iter().map(|(i, c)| (c, fmt_monomial(&self.ring, *i as usize))))
    }
}
