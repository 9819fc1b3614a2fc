use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::kclass::{KClass, Weight};
use super::numbers::{bernoulli_numbers, factorial, gamma_lk};
use crate::error::{Error, Result};
use crate::exactalg::{int, to_precision, ChowElement, QSeries, Rational, Ring, ScalarSeries};
use crate::exec::{map_ordered, Strategy};

/// The parameter `t` of `c_t`: an exact rational, or `e^{-k q}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TParam {
    Value(Rational),
    ExpNegQ(Weight),
}

#[derive(Clone, Debug, PartialEq)]
pub enum ClassValue {
    Chow(ChowElement),
    Series(QSeries),
}

#[derive(Clone, Debug, PartialEq)]
pub enum TScalar {
    Value(Rational),
    Series(ScalarSeries),
}

fn inv_factorial(n: u64) -> Rational {
    Rational::new(BigInt::one(), factorial(n))
}

fn pow_rational(x: &Rational, e: i64) -> Rational {
    let p = num_traits::pow(x.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

/// `exp(sum_i f_i(q) c_i) * prefactor(q)` for nilpotent `c_i`, expanded by
/// running over all products of the `c_i` that survive the truncation.
pub(crate) fn exp_linear(
    ring: &Ring,
    prefactor: &ScalarSeries,
    terms: &[(ScalarSeries, ChowElement)],
) -> QSeries {
    fn walk(
        i: usize,
        chow: ChowElement,
        coef: ScalarSeries,
        terms: &[(ScalarSeries, ChowElement)],
        acc: &mut QSeries,
    ) {
        let Some((f, c)) = terms.get(i) else {
            *acc = acc.add(&QSeries::outer(&coef, &chow));
            return;
        };
        if c.is_zero() || f.is_zero() && f.is_exact() {
            walk(i + 1, chow, coef, terms, acc);
            return;
        }
        let (mut chow, mut coef) = (chow, coef);
        let mut m = 0u64;
        loop {
            walk(i + 1, chow.clone(), coef.clone(), terms, acc);
            m += 1;
            chow = &chow * c;
            if chow.is_zero() {
                break;
            }
            coef = coef.mul(f).scale(&Rational::new(BigInt::one(), m.into()));
        }
    }
    let mut acc = QSeries::zero_in(ring, None);
    walk(0, ring.one(), prefactor.clone(), terms, &mut acc);
    acc
}

fn chow_exp_linear(ring: &Ring, terms: &[(Rational, ChowElement)]) -> Result<ChowElement> {
    let sum = terms.iter().fold(ring.zero(), |acc, (s, c)| &acc + &c.scale(s));
    sum.exp()
}

/// `Td(R) = exp(-sum_{l >= 1} B_l(0)/l Ch_l(R))`.
pub fn todd(r: &KClass) -> ChowElement {
    let d = r.ring().truncation() as usize;
    let b = bernoulli_numbers(d);
    let terms: Vec<(Rational, ChowElement)> =
        (1..=d).map(|l| (-&b[l] / int(l as i64), r.ch(l))).collect();
    chow_exp_linear(r.ring(), &terms).expect("Chern characters have no constant part")
}

/// `t / (1 - t)` for `t = e^{-kq}`, i.e. `1/(e^{kq} - 1)`, known up to `q^work`.
fn u_series(k: Weight, work: i64) -> ScalarSeries {
    let kk = int(k.0);
    let n_max = (work + 1).max(0) as usize;
    let b = bernoulli_numbers(n_max);
    // (1/x) sum_n B_n x^n / n!, x = k q
    let coeffs = (0..=n_max)
        .map(|n| &b[n] * pow_rational(&kk, n as i64 - 1) * inv_factorial(n as u64))
        .collect();
    ScalarSeries::from_coeffs(Rational::zero(), -1, coeffs, Some(work))
}

/// `1 - e^{-kq}` up to `q^work`.
fn one_minus_t_series(k: Weight, work: i64) -> ScalarSeries {
    let minus_k = int(-k.0);
    let coeffs = (1..=work.max(1))
        .map(|n| -pow_rational(&minus_k, n) * inv_factorial(n as u64))
        .collect();
    ScalarSeries::from_coeffs(Rational::zero(), 1, coeffs, Some(work))
}

/// `s_l` from `powers[m - 1] = (t/(1 - t))^m`, `m = 1..=l`.
fn s_l_from_powers<T, Mul, Add>(l: usize, powers: &[T], constant: impl Fn(Rational) -> T, mul: Mul, add: Add) -> T
where
    Mul: Fn(&T, &T) -> T,
    Add: Fn(&T, &T) -> T,
{
    let b_l = bernoulli_numbers(l).pop().unwrap() / int(l as i64);
    let sign = if l % 2 == 0 { int(1) } else { int(-1) };
    let mut acc = constant(b_l);
    for (m, power) in (1..=l as u64).zip(powers) {
        let c = &sign * Rational::from_integer(factorial(m - 1)) * gamma_lk(l as u64, m);
        acc = add(&acc, &mul(&constant(c), power));
    }
    acc
}

fn series_powers(u: &ScalarSeries, n: usize) -> Vec<ScalarSeries> {
    let mut out: Vec<ScalarSeries> = Vec::with_capacity(n);
    for m in 0..n {
        let next = if m == 0 { u.clone() } else { out[m - 1].mul(u) };
        out.push(next);
    }
    out
}

fn check_t(t: &Rational) -> Result<()> {
    if t.is_one() {
        Err(Error::TIsOne)
    } else {
        Ok(())
    }
}

/// `s_l(t) = B_l(0)/l + (-1)^l sum_k (k-1)! (t/(1-t))^k gamma(l, k)`.
pub fn s_l_value(l: usize, t: &Rational) -> Result<Rational> {
    check_t(t)?;
    let u = t / (Rational::one() - t);
    let powers: Vec<Rational> = (1..=l).map(|m| num_traits::pow(u.clone(), m)).collect();
    Ok(s_l_from_powers(l, &powers, |c| c, |a, b| a * b, |a, b| a + b))
}

/// `s_l(e^{-kq})` as a Laurent series known up to `q^q_max`.
pub fn s_l_series(l: usize, k: Weight, q_max: i64) -> Result<ScalarSeries> {
    if k.0 == 0 {
        return Err(Error::TIsOne);
    }
    to_precision(q_max, |work| Ok(s_l_series_at(l, k, work)))
}

fn s_l_series_at(l: usize, k: Weight, work: i64) -> ScalarSeries {
    let powers = series_powers(&u_series(k, work), l);
    s_l_from_powers(l, &powers, ScalarSeries::scalar, |a, b| a.mul(b), |a, b| a.add(b))
}

pub fn s_l(l: usize, t: &TParam, q_max: i64) -> Result<TScalar> {
    match t {
        TParam::Value(t) => s_l_value(l, t).map(TScalar::Value),
        TParam::ExpNegQ(k) => s_l_series(l, *k, q_max).map(TScalar::Series),
    }
}

/// `c_t(R) = (1 - t)^{Ch_0(R)} exp(-sum_l s_l(t) Ch_l(R))` for rational `t`.
pub fn frak_c_value(t: &Rational, r: &KClass) -> Result<ChowElement> {
    check_t(t)?;
    let d = r.ring().truncation() as usize;
    let mut terms = Vec::with_capacity(d);
    for l in 1..=d {
        terms.push((-s_l_value(l, t)?, r.ch(l)));
    }
    let e = chow_exp_linear(r.ring(), &terms)?;
    Ok(e.scale(&pow_rational(&(Rational::one() - t), r.rank())))
}

/// `c_{e^{-kq}}(R)` known up to `q^q_max`.
pub fn frak_c_formal(k: Weight, r: &KClass, q_max: i64) -> Result<QSeries> {
    if k.0 == 0 {
        return Err(Error::TIsOne);
    }
    // precision lost through u^D and the prefactor
    let (d, rank) = (i64::from(r.ring().truncation()), r.rank());
    let loss = if rank > 0 { d + 1 - rank } else { d - rank - 1 };
    to_precision(q_max, |work| Ok(frak_c_formal_at(k, r, work + loss)))
}

/// Product of polynomials in `u` with ring coefficients, dropping `u^j`, `j > top`.
fn mul_u_poly(a: &[ChowElement], b: &[ChowElement], top: usize) -> Vec<ChowElement> {
    let ring = a[0].ring();
    let mut out = vec![ring.zero(); top + 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate().take(top + 1 - i) {
            if !x.is_zero() && !y.is_zero() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
    }
    out
}

/// Since `s_l = B_l(0)/l + (-1)^l sum_m (m-1)! gamma(l, m) u^m`,
/// `c_t(R) = (1 - t)^{Ch_0} Td(R) exp(sum_m u^m Z_m)` with `Z_m` in the ring
/// of degree at least `m`: a polynomial of degree `<= D` in `u`.
fn frak_c_formal_at(k: Weight, r: &KClass, work: i64) -> QSeries {
    let ring = r.ring();
    let d = ring.truncation() as usize;
    let u = u_series(k, work);
    let rank = r.rank();
    let prefactor = if rank >= 0 {
        one_minus_t_series(k, work).pow(rank as u32, &ScalarSeries::one())
    } else {
        // 1/(1 - t) = 1 + t/(1 - t)
        u.add(&ScalarSeries::one()).pow(rank.unsigned_abs() as u32, &ScalarSeries::one())
    };
    let mut x = vec![ring.zero(); d + 1];
    for (m, z) in x.iter_mut().enumerate().skip(1) {
        for l in m..=d {
            let sign = if l % 2 == 0 { int(-1) } else { int(1) };
            let c = sign * Rational::from_integer(factorial(m as u64 - 1)) * gamma_lk(l as u64, m as u64);
            *z = &*z + &r.ch(l).scale(&c);
        }
    }
    let mut poly = vec![ring.zero(); d + 1];
    poly[0] = ring.one();
    let mut power = poly.clone();
    for n in 1..=d {
        power = mul_u_poly(&power, &x, d);
        let inv = Rational::new(BigInt::one(), n.into());
        power.iter_mut().for_each(|p| *p = p.scale(&inv));
        for (acc, p) in poly.iter_mut().zip(&power) {
            *acc = &*acc + p;
        }
    }
    let td = todd(r);
    let mut acc = QSeries::zero_in(ring, None);
    let mut scalar = prefactor;
    for (j, p) in poly.iter().enumerate() {
        if j > 0 {
            scalar = scalar.mul(&u);
        }
        let c = &td * p;
        if !c.is_zero() {
            acc = acc.add(&QSeries::outer(&scalar, &c));
        }
    }
    acc
}

pub fn frak_c(t: &TParam, r: &KClass, q_max: i64) -> Result<ClassValue> {
    match t {
        TParam::Value(t) => frak_c_value(t, r).map(ClassValue::Chow),
        TParam::ExpNegQ(k) => frak_c_formal(*k, r, q_max).map(ClassValue::Series),
    }
}

/// `e_{kq}(R) = (kq)^{Ch_0} exp(-sum_l (l-1)!/(-kq)^l Ch_l)`; a Laurent
/// polynomial, returned exactly.
pub fn euler_eq(k: Weight, r: &KClass) -> Result<QSeries> {
    let k = k.nonzero()?;
    let kk = int(k.0);
    let prefactor = ScalarSeries::term(pow_rational(&kk, r.rank()), r.rank());
    let d = r.ring().truncation() as usize;
    let minus_k = -&kk;
    let terms: Vec<(ScalarSeries, ChowElement)> = (1..=d)
        .map(|l| {
            let c = -Rational::from_integer(factorial(l as u64 - 1)) * pow_rational(&minus_k, -(l as i64));
            (ScalarSeries::term(c, -(l as i64)), r.ch(l))
        })
        .collect();
    Ok(exp_linear(r.ring(), &prefactor, &terms))
}

/// `Td(R (x) O(kq)) / Td(R) = exp(-sum_{j >= 0} sum_{l > j} B_l(0)/l (kq)^{l-j}/(l-j)! Ch_j(R))`
/// up to `q^q_max`.
pub fn todd_twist_ratio(r: &KClass, k: Weight, q_max: i64) -> Result<QSeries> {
    let ring = r.ring();
    if k.0 == 0 || q_max < 0 {
        return Ok(QSeries::one_in(ring).truncate(q_max.max(0)));
    }
    let d = ring.truncation() as usize;
    let b = bernoulli_numbers(d + q_max as usize);
    let kk = int(k.0);
    let g = |j: usize| -> ScalarSeries {
        let coeffs = (1..=q_max)
            .map(|n| {
                let l = j + n as usize;
                -&b[l] / int(l as i64) * pow_rational(&kk, n) * inv_factorial(n as u64)
            })
            .collect();
        ScalarSeries::from_coeffs(Rational::zero(), 1, coeffs, Some(q_max))
    };
    let prefactor = g(0).scale(&int(r.rank())).exp(q_max)?;
    let terms: Vec<(ScalarSeries, ChowElement)> =
        (1..=d).filter(|&j| !r.ch(j).is_zero()).map(|j| (g(j), r.ch(j))).collect();
    Ok(exp_linear(ring, &prefactor, &terms))
}

/// Outcome of comparing `e_{kq}(R)` with `c_{e^{-kq}}(R) Td(R (x) O(kq))/Td(R)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CompfceCheck {
    pub weight: Weight,
    pub q_max: i64,
    pub holds: bool,
    pub euler: QSeries,
    pub twisted: QSeries,
    /// `euler - twisted` up to `q^q_max`; zero when the identity holds.
    pub difference: QSeries,
}

pub fn verify_compfce(r: &KClass, k: Weight, q_max: i64) -> Result<CompfceCheck> {
    let euler = euler_eq(k, r)?;
    let twisted = to_precision(q_max, |work| {
        let c = frak_c_formal(k, r, work)?;
        Ok(c.mul(&todd_twist_ratio(r, k, work)?))
    })?;
    let difference = euler.truncate(q_max).sub(&twisted);
    let holds = difference.is_zero();
    Ok(CompfceCheck { weight: k, q_max, holds, euler, twisted, difference })
}

pub fn verify_compfce_batch(
    items: &[(KClass, Weight)],
    q_max: i64,
    strategy: Strategy,
) -> Vec<Result<CompfceCheck>> {
    map_ordered(strategy, items, |(r, k)| verify_compfce(r, *k, q_max))
}
