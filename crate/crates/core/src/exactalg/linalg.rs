//! Exact row reduction over the monomial basis of a ring.

use num_traits::Zero;

use super::ring::{ChowElement, Ring};
use super::Rational;

/// A rational subspace of a ring, kept in row echelon form.
#[derive(Clone, Debug)]
pub struct Span {
    ring: Ring,
    // sorted by pivot; each row is zero before its pivot and 1 at it
    rows: Vec<(usize, Vec<Rational>)>,
}

impl Span {
    pub fn new(ring: &Ring) -> Self {
        Self { ring: ring.clone(), rows: Vec::new() }
    }

    /// The ideal generated by `gens`, as the span of all monomial multiples.
    pub fn ideal(ring: &Ring, gens: &[ChowElement]) -> Self {
        let mut span = Self::new(ring);
        for g in gens {
            for i in 0..ring.basis_len() {
                let m = ring.term(i, Rational::from_integer(1.into()));
                span.insert(&(&m * g));
            }
        }
        span
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn dense(&self, x: &ChowElement) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.ring.basis_len()];
        for (i, c) in x.terms() {
            v[i] = c.clone();
        }
        v
    }

    fn reduce(&self, v: &mut [Rational]) {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let c = v[*p].clone();
            for (k, r) in row.iter().enumerate().skip(*p) {
                if !r.is_zero() {
                    v[k] -= &c * r;
                }
            }
        }
    }

    /// Adds `x`; returns false if it was already in the span.
    pub fn insert(&mut self, x: &ChowElement) -> bool {
        assert!(x.ring() == &self.ring, "ring mismatch");
        let mut v = self.dense(x);
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = v[p].recip();
        for c in v.iter_mut().skip(p) {
            *c *= &inv;
        }
        let at = self.rows.partition_point(|(q, _)| *q < p);
        self.rows.insert(at, (p, v));
        true
    }

    pub fn contains(&self, x: &ChowElement) -> bool {
        assert!(x.ring() == &self.ring, "ring mismatch");
        let mut v = self.dense(x);
        self.reduce(&mut v);
        v.iter().all(Zero::is_zero)
    }
}
