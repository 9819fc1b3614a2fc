//! Rational functions in two variables `z` and `q` over the rationals.
//!
//! Values are kept reduced: numerator and denominator are coprime (gcd
//! computed as polynomials in `q` over `Q[z]` with a primitive remainder
//! sequence) and the denominator has leading coefficient one.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::ring::fmt_sum;
use super::Rational;

/// Dense univariate polynomial in `z`, index = power.
#[derive(Clone, Debug, PartialEq, Eq)]
struct UPoly(Vec<Rational>);

impl UPoly {
    fn zero() -> Self {
        UPoly(Vec::new())
    }

    fn trimmed(mut v: Vec<Rational>) -> Self {
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        UPoly(v)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn deg(&self) -> usize {
        self.0.len() - 1
    }

    fn lc(&self) -> &Rational {
        self.0.last().unwrap()
    }

    fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let zero = Rational::zero();
        let v = (0..n)
            .map(|i| self.0.get(i).unwrap_or(&zero) + o.0.get(i).unwrap_or(&zero))
            .collect();
        Self::trimmed(v)
    }

    fn neg(&self) -> Self {
        UPoly(self.0.iter().map(|c| -c).collect())
    }

    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut v = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Self::trimmed(v)
    }

    fn scale(&self, c: &Rational) -> Self {
        Self::trimmed(self.0.iter().map(|a| a * c).collect())
    }

    fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.0.clone();
        if r.len() < d.0.len() {
            return (Self::zero(), self.clone());
        }
        let mut quo = vec![Rational::zero(); r.len() - d.0.len() + 1];
        let inv = d.lc().recip();
        for k in (0..quo.len()).rev() {
            let c = &r[k + d.deg()] * &inv;
            if !c.is_zero() {
                for (i, b) in d.0.iter().enumerate() {
                    r[k + i] -= &c * b;
                }
            }
            quo[k] = c;
        }
        (Self::trimmed(quo), Self::trimmed(r))
    }

    fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().recip())
    }

    fn gcd(a: &Self, b: &Self) -> Self {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
}

/// `sum_k c_k(z) q^k` with `c_k` in `Q[z]`.
type QOverZ = Vec<UPoly>;

fn trim_q(mut p: QOverZ) -> QOverZ {
    while p.last().is_some_and(UPoly::is_zero) {
        p.pop();
    }
    p
}

/// Polynomial in `z` and `q`: map from `(z exponent, q exponent)` to a
/// nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, 0, 0)
    }

    /// `c z^i q^j`.
    pub fn term(c: Rational, z_exp: u32, q_exp: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((z_exp, q_exp), c);
        }
        Self { terms }
    }

    pub fn z() -> Self {
        Self::term(Rational::one(), 1, 0)
    }

    pub fn q() -> Self {
        Self::term(Rational::one(), 0, 1)
    }

    /// The linear form `a z + b q`.
    pub fn linear(a: Rational, b: Rational) -> Self {
        &Self::term(a, 1, 0) + &Self::term(b, 0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&(0, 0)).is_some_and(One::is_one)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `((z exponent, q exponent), coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &Rational)> + '_ {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect() }
    }

    pub fn q_degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.1).max()
    }

    /// Largest `m` with `q^m` dividing the polynomial.
    pub fn q_valuation(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.1).min()
    }

    /// Total degree if every term has the same total degree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|(a, b)| a + b);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn eval(&self, z: &Rational, q: &Rational) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, ((i, j), c)| {
            acc + c * num_traits::pow(z.clone(), *i as usize) * num_traits::pow(q.clone(), *j as usize)
        })
    }

    /// Substitutes `q = 0`.
    pub fn at_q_zero(&self) -> Self {
        Self { terms: self.terms.iter().filter(|(k, _)| k.1 == 0).map(|(k, v)| (*k, v.clone())).collect() }
    }

    /// Substitutes `z -> lambda z`, `q -> lambda q`.
    pub fn rescale_vars(&self, lambda: &Rational) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|((i, j), c)| ((*i, *j), c * num_traits::pow(lambda.clone(), (*i + *j) as usize)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    fn leading(&self) -> Option<((u32, u32), &Rational)> {
        // highest q power, then highest z power
        self.terms.iter().max_by_key(|((i, j), _)| (*j, *i)).map(|(k, v)| (*k, v))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    fn to_q_over_z(&self) -> QOverZ {
        let qdeg = match self.q_degree() {
            Some(d) => d as usize,
            None => return Vec::new(),
        };
        let mut out: Vec<Vec<Rational>> = vec![Vec::new(); qdeg + 1];
        for ((i, j), c) in &self.terms {
            let row = &mut out[*j as usize];
            if row.len() <= *i as usize {
                row.resize(*i as usize + 1, Rational::zero());
            }
            row[*i as usize] = c.clone();
        }
        out.into_iter().map(UPoly::trimmed).collect()
    }

    fn from_q_over_z(p: &QOverZ) -> Self {
        let mut terms = BTreeMap::new();
        for (j, c) in p.iter().enumerate() {
            for (i, a) in c.0.iter().enumerate() {
                if !a.is_zero() {
                    terms.insert((i as u32, j as u32), a.clone());
                }
            }
        }
        Self { terms }
    }

    /// Greatest common divisor, normalized to leading coefficient one.
    pub fn gcd(a: &Self, b: &Self) -> Self {
        if a.is_zero() {
            return b.normalized();
        }
        if b.is_zero() {
            return a.normalized();
        }
        let (pa, pb) = (a.to_q_over_z(), b.to_q_over_z());
        let (ca, cb) = (content(&pa), content(&pb));
        let g_content = UPoly::gcd(&ca, &cb);
        let mut x = primitive(&pa, &ca);
        let mut y = primitive(&pb, &cb);
        if x.len() < y.len() {
            std::mem::swap(&mut x, &mut y);
        }
        while !y.is_empty() {
            let r = pseudo_rem(&x, &y);
            x = y;
            y = if r.is_empty() { r } else { primitive(&r, &content(&r)) };
        }
        let g: QOverZ = x.iter().map(|c| c.mul(&g_content)).collect();
        Self::from_q_over_z(&g).normalized()
    }

    /// Exact quotient; panics if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Self {
        let mut r = self.to_q_over_z();
        let dd = d.to_q_over_z();
        assert!(!dd.is_empty(), "division by zero polynomial");
        let ddeg = dd.len() - 1;
        if r.len() < dd.len() {
            assert!(r.is_empty(), "inexact polynomial division");
            return Self::zero();
        }
        let mut quo = vec![UPoly::zero(); r.len() - ddeg];
        for k in (0..quo.len()).rev() {
            let (c, rem) = r[k + ddeg].divrem(&dd[ddeg]);
            assert!(rem.is_zero(), "inexact polynomial division");
            if !c.is_zero() {
                for (i, b) in dd.iter().enumerate() {
                    r[k + i] = r[k + i].add(&c.mul(b).neg());
                }
            }
            quo[k] = c;
        }
        assert!(trim_q(r).is_empty(), "inexact polynomial division");
        Self::from_q_over_z(&trim_q(quo))
    }

    fn normalized(&self) -> Self {
        match self.leading() {
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
            None => Self::zero(),
        }
    }

    fn monomial_string(z_exp: u32, q_exp: u32) -> String {
        let mut parts = Vec::new();
        match z_exp {
            0 => {}
            1 => parts.push("z".to_string()),
            e => parts.push(format!("z^{e}")),
        }
        match q_exp {
            0 => {}
            1 => parts.push("q".to_string()),
            e => parts.push(format!("q^{e}")),
        }
        parts.join("*")
    }
}

fn content(p: &QOverZ) -> UPoly {
    p.iter().fold(UPoly::zero(), |g, c| UPoly::gcd(&g, c))
}

fn primitive(p: &QOverZ, content: &UPoly) -> QOverZ {
    p.iter().map(|c| c.divrem(content).0).collect()
}

fn pseudo_rem(a: &QOverZ, b: &QOverZ) -> QOverZ {
    let bdeg = b.len() - 1;
    let lc = &b[bdeg];
    let mut r = a.clone();
    while r.len() > bdeg {
        let rdeg = r.len() - 1;
        let lr = r[rdeg].clone();
        let shift = rdeg - bdeg;
        let mut next: QOverZ = r.iter().map(|c| c.mul(lc)).collect();
        for (i, bc) in b.iter().enumerate() {
            next[i + shift] = next[i + shift].add(&bc.mul(&lr).neg());
        }
        r = trim_q(next);
    }
    r
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        let mut terms = self.terms.clone();
        for (k, v) in &rhs.terms {
            let e = terms.entry(*k).or_insert_with(Rational::zero);
            *e += v;
            if e.is_zero() {
                terms.remove(k);
            }
        }
        Poly2 { terms }
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        Poly2 { terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect() }
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &Poly2) -> Poly2 {
        self + &(-rhs)
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut terms: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
        for ((i, j), a) in &self.terms {
            for ((k, l), b) in &rhs.terms {
                *terms.entry((i + k, j + l)).or_insert_with(Rational::zero) += a * b;
            }
        }
        terms.retain(|_, v| !v.is_zero());
        Poly2 { terms }
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut keys: Vec<&(u32, u32)> = self.terms.keys().collect();
        // total degree descending, then z before q
        keys.sort_by_key(|k| std::cmp::Reverse((k.0 + k.1, k.0)));
        fmt_sum(f, keys.into_iter().map(|k| (&self.terms[k], Self::monomial_string(k.0, k.1))))
    }
}

/// Reduces `num / den` for a monomial `den`: its only divisors are monomials.
fn cancel_monomial(num: Poly2, den: Poly2) -> (Poly2, Poly2) {
    let ((dz, dq), c) = den.terms().next().map(|(k, c)| (k, c.clone())).unwrap();
    let mz = num.terms().map(|((i, _), _)| i).min().unwrap().min(dz);
    let mq = num.terms().map(|((_, j), _)| j).min().unwrap().min(dq);
    if mz == 0 && mq == 0 {
        return (num, den);
    }
    let terms = num.terms.into_iter().map(|((i, j), v)| ((i - mz, j - mq), v)).collect();
    (Poly2 { terms }, Poly2::term(c, dz - mz, dq - mq))
}

/// A reduced quotient of two [`Poly2`].
#[derive(Clone, Debug)]
pub struct RatFunc {
    num: Poly2,
    den: Poly2,
}

impl RatFunc {
    /// `num / den`, reduced.  Panics when `den` is zero.
    pub fn new(num: Poly2, den: Poly2) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den) = if den.num_terms() == 1 {
            cancel_monomial(num, den)
        } else {
            let g = Poly2::gcd(&num, &den);
            if g.is_one() { (num, den) } else { (num.div_exact(&g), den.div_exact(&g)) }
        };
        let lc = den.leading().map(|(_, c)| c.clone()).unwrap();
        let inv = lc.recip();
        Self { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn zero() -> Self {
        Self { num: Poly2::zero(), den: Poly2::one() }
    }

    pub fn one() -> Self {
        Self::from_poly(Poly2::one())
    }

    pub fn from_poly(p: Poly2) -> Self {
        Self { num: p, den: Poly2::one() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Poly2::constant(c))
    }

    pub fn numerator(&self) -> &Poly2 {
        &self.num
    }

    pub fn denominator(&self) -> &Poly2 {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Self::new(self.den.clone(), self.num.clone())
    }

    /// Value at a point, `None` where the denominator vanishes.
    pub fn eval(&self, z: &Rational, q: &Rational) -> Option<Rational> {
        let d = self.den.eval(z, q);
        (!d.is_zero()).then(|| self.num.eval(z, q) / d)
    }

    /// Substitutes `q = 0`; `None` when the denominator vanishes there.
    pub fn at_q_zero(&self) -> Option<Self> {
        let d = self.den.at_q_zero();
        (!d.is_zero()).then(|| Self::new(self.num.at_q_zero(), d))
    }

    /// Substitutes `(z, q) -> (lambda z, lambda q)`.
    pub fn rescale_vars(&self, lambda: &Rational) -> Self {
        Self::new(self.num.rescale_vars(lambda), self.den.rescale_vars(lambda))
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RatFunc {}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone());
        }
        RatFunc::new(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self * &rhs.recip()
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.num_terms() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        let den_simple =
            self.den.num_terms() == 1 && self.den.terms().next().is_some_and(|(_, c)| c.is_one());
        if den_simple {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}
