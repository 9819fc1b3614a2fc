//! Seeded pseudo-random inputs for property runs, benches and CLI jobs.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::charclasses::{KClass, Weight};
use crate::exactalg::{rat, ChowElement, Ring, RingSpec};
use crate::localize::{hodge_product, LocInput};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One or two generators `a` (degree 1) and `b` (degree 1 or 2), truncation `d`.
pub fn random_ring<R: Rng>(rng: &mut R, d: u32) -> Ring {
    let mut spec = RingSpec::new(d).generator("a", 1);
    if d >= 1 && rng.gen_bool(0.5) {
        spec = spec.generator("b", rng.gen_range(1..=2));
    }
    Ring::new(spec).expect("small rings are valid")
}

/// A homogeneous element of degree `l` with at most two terms and small
/// rational coefficients; zero when the ring has nothing in degree `l`.
pub fn random_homogeneous<R: Rng>(rng: &mut R, ring: &Ring, l: u32) -> ChowElement {
    let basis: Vec<usize> = ring.basis_of_degree(l).collect();
    let mut x = ring.zero();
    for _ in 0..rng.gen_range(1..=2) {
        if let Some(&i) = basis.choose(rng) {
            let c = rat(rng.gen_range(-3..=3), rng.gen_range(1..=3));
            x = &x + &ring.term(i, c);
        }
    }
    x
}

pub fn random_kclass<R: Rng>(rng: &mut R, ring: &Ring) -> KClass {
    let rank = rng.gen_range(-3..=3);
    let ch = (1..=ring.truncation())
        .map(|l| if rng.gen_bool(0.7) { random_homogeneous(rng, ring, l) } else { ring.zero() })
        .collect();
    KClass::new(ring, rank, ch).expect("random classes are homogeneous")
}

/// A nonzero weight in `-3..=3`.
pub fn random_weight<R: Rng>(rng: &mut R) -> Weight {
    let k = rng.gen_range(1..=3);
    Weight(if rng.gen_bool(0.5) { k } else { -k })
}

/// A [`LocInput`] with `1..=max_pushed` pushed classes and random weights.
pub fn random_loc_input<R: Rng>(rng: &mut R, ring: &Ring, max_pushed: usize) -> LocInput {
    let mut hodge = random_kclass(rng, ring);
    if hodge.rank() < 0 {
        hodge = hodge.neg();
    }
    let n = rng.gen_range(1..=max_pushed);
    let pushed = (0..n).map(|_| (random_kclass(rng, ring), random_weight(rng))).collect();
    LocInput::new(hodge, random_weight(rng), pushed).expect("weights are nonzero")
}

/// A vector bundle of the given rank with random degree-1 Chern roots.
pub fn random_bundle<R: Rng>(rng: &mut R, ring: &Ring, rank: usize) -> KClass {
    let roots: Vec<ChowElement> = (0..rank).map(|_| random_homogeneous(rng, ring, 1)).collect();
    KClass::sum_of_roots(ring, &roots).expect("roots have degree 1")
}

/// A [`LocInput`] in which `E` and every `-R_j` are vector bundles, so the
/// product is a polynomial in `q` and converges.
pub fn random_geometric_loc_input<R: Rng>(rng: &mut R, ring: &Ring, max_pushed: usize) -> LocInput {
    let rank = rng.gen_range(0..=2);
    let hodge = random_bundle(rng, ring, rank);
    let n = rng.gen_range(1..=max_pushed);
    let pushed = (0..n)
        .map(|_| {
            let rank = rng.gen_range(0..=2);
            (random_bundle(rng, ring, rank).neg(), random_weight(rng))
        })
        .collect();
    LocInput::new(hodge, random_weight(rng), pushed).expect("weights are nonzero")
}

/// A [`LocInput`] with divergent product whose relations all have zero
/// constant part, so the ideal they generate is proper.  The total rank is
/// kept in `0..=1`; divergence comes from the Chern characters alone.
pub fn rigged_divergent<R: Rng>(rng: &mut R, ring: &Ring, max_pushed: usize) -> LocInput {
    assert!(ring.basis_of_degree(1).next().is_some(), "divergence needs classes of degree 1");
    loop {
        let inp = random_loc_input(rng, ring, max_pushed);
        let total = inp.hodge().rank() - inp.pushed().iter().map(|(r, _)| r.rank()).sum::<i64>();
        if !(0..=1).contains(&total) {
            continue;
        }
        let res = hodge_product(&inp).expect("weights are nonzero");
        if !res.relations.is_empty() {
            return inp;
        }
    }
}
