use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exactalg::Rational;

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `B_0(0), ..., B_n(0)`: Bernoulli polynomials at zero, so `B_1(0) = -1/2`.
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
    b.push(Rational::one());
    for m in 1..=n {
        // sum_{k=0}^{m} C(m+1, k) B_k = 0
        let s: Rational = (0..m)
            .map(|k| Rational::from_integer(binomial(m as u64 + 1, k as u64)) * &b[k])
            .sum();
        b.push(-s / Rational::from_integer(BigInt::from(m + 1)));
    }
    b
}

pub fn bernoulli(n: usize) -> Rational {
    bernoulli_numbers(n).pop().unwrap()
}

/// `gamma(l, k)`, defined by `sum_l gamma(l, k) z^l / l! = (e^z - 1)^k / k!`:
/// the Stirling numbers of the second kind.
pub fn gamma_lk(l: u64, k: u64) -> Rational {
    if k > l {
        return Rational::zero();
    }
    // row recursion S(n, j) = j S(n-1, j) + S(n-1, j-1)
    let mut row = vec![BigInt::zero(); k as usize + 1];
    row[0] = BigInt::one();
    for _ in 0..l {
        for j in (1..=k as usize).rev() {
            row[j] = BigInt::from(j) * &row[j] + &row[j - 1];
        }
        row[0] = BigInt::zero();
    }
    Rational::from_integer(row[k as usize].clone())
}
