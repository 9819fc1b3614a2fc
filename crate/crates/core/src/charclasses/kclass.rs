use std::fmt;

use num_traits::One;

use super::numbers::factorial;
use crate::error::{Error, Result};
use crate::exactalg::{ChowElement, Rational, Ring};

/// An equivariant weight: the fibers are scaled by `lambda^k`, so `q`
/// becomes `k q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(pub i64);

impl Weight {
    pub fn nonzero(self) -> Result<Self> {
        if self.0 == 0 {
            Err(Error::ZeroWeight)
        } else {
            Ok(self)
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A K-theory class through its Chern character: an integer rank `Ch_0`
/// and `Ch_1, ..., Ch_D` with `Ch_l` homogeneous of degree `l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KClass {
    ring: Ring,
    rank: i64,
    ch: Vec<ChowElement>,
}

impl KClass {
    /// `ch[l - 1]` is `Ch_l`; missing entries are zero.
    pub fn new(ring: &Ring, rank: i64, ch: Vec<ChowElement>) -> Result<Self> {
        let d = ring.truncation() as usize;
        if ch.len() > d && ch[d..].iter().any(|c| !c.is_zero()) {
            return Err(Error::TooManyChernCharacters { got: ch.len(), max: d });
        }
        let mut ch = ch;
        ch.truncate(d);
        for (i, c) in ch.iter().enumerate() {
            if c.ring() != ring {
                return Err(Error::RingMismatch);
            }
            if !c.is_homogeneous(i as u32 + 1) {
                return Err(Error::NotHomogeneous { l: i + 1 });
            }
        }
        ch.resize(d, ring.zero());
        Ok(Self { ring: ring.clone(), rank, ch })
    }

    pub fn zero(ring: &Ring) -> Self {
        Self::trivial(ring, 0)
    }

    /// The trivial bundle of rank `r` (any integer).
    pub fn trivial(ring: &Ring, r: i64) -> Self {
        Self { ring: ring.clone(), rank: r, ch: vec![ring.zero(); ring.truncation() as usize] }
    }

    /// The line bundle with first Chern class `alpha`.
    pub fn line_bundle(alpha: &ChowElement) -> Result<Self> {
        Self::sum_of_roots(alpha.ring(), std::slice::from_ref(alpha))
    }

    /// The bundle with Chern roots `alphas`: `Ch_l = sum_k alpha_k^l / l!`.
    pub fn sum_of_roots(ring: &Ring, alphas: &[ChowElement]) -> Result<Self> {
        let d = ring.truncation() as usize;
        let mut ch = vec![ring.zero(); d];
        for alpha in alphas {
            if alpha.ring() != ring {
                return Err(Error::RingMismatch);
            }
            if !alpha.is_homogeneous(1) {
                return Err(Error::NotHomogeneous { l: 1 });
            }
            let mut power = ring.one();
            for (l, slot) in ch.iter_mut().enumerate() {
                power = &power * alpha;
                let inv = Rational::new(One::one(), factorial(l as u64 + 1));
                *slot = &*slot + &power.scale(&inv);
            }
        }
        Ok(Self { ring: ring.clone(), rank: alphas.len() as i64, ch })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rank(&self) -> i64 {
        self.rank
    }

    /// `Ch_l` for `1 <= l`; zero above the truncation.
    pub fn ch(&self, l: usize) -> ChowElement {
        assert!(l >= 1, "Ch_0 is the rank");
        self.ch.get(l - 1).cloned().unwrap_or_else(|| self.ring.zero())
    }

    /// `Ch_1, ..., Ch_D`.
    pub fn chern_characters(&self) -> &[ChowElement] {
        &self.ch
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.ch.iter().all(ChowElement::is_zero)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        let ch = self.ch.iter().zip(&other.ch).map(|(a, b)| a + b).collect();
        Ok(Self { ring: self.ring.clone(), rank: self.rank + other.rank, ch })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self { ring: self.ring.clone(), rank: -self.rank, ch: self.ch.iter().map(|c| -c).collect() }
    }

    /// The dual class: `Ch_l(R^v) = (-1)^l Ch_l(R)`.
    pub fn dual(&self) -> Self {
        let ch = self
            .ch
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 0 { -c } else { c.clone() })
            .collect();
        Self { ring: self.ring.clone(), rank: self.rank, ch }
    }

    pub fn sum<'a>(ring: &Ring, classes: impl IntoIterator<Item = &'a KClass>) -> Result<Self> {
        classes.into_iter().try_fold(Self::zero(ring), |acc, c| acc.try_add(c))
    }
}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rank {}", self.rank)?;
        for (i, c) in self.ch.iter().enumerate() {
            if !c.is_zero() {
                write!(f, ", Ch_{} = {}", i + 1, c)?;
            }
        }
        Ok(())
    }
}
