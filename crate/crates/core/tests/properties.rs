use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use chloc::chainfjrw::{aut_group, chain_solve, grading_element, sector_of};
use chloc::charclasses::{
    bernoulli_numbers, euler_eq, frak_c_formal, frak_c_value, s_l_series, todd, KClass, Weight,
};
use chloc::exactalg::{frac, int, parse_class_expr, rat, ChowElement, Poly2, QSeries, RatFunc, Rational, Ring};
use chloc::ifunction::{b_set, delta, i_coefficient};
use chloc::localize::{hodge_product, LocInput};
use chloc::sample::{random_homogeneous, random_kclass, random_ring, random_weight, rng};

fn config() -> ProptestConfig {
    ProptestConfig { cases: 24, ..ProptestConfig::default() }
}

fn random_element<R: Rng>(r: &mut R, ring: &Ring) -> ChowElement {
    let mut x = ring.constant(rat(r.gen_range(-3..=3), r.gen_range(1..=4)));
    for l in 1..=ring.truncation() {
        x = &x + &random_homogeneous(r, ring, l);
    }
    x
}

fn random_degree_one<R: Rng>(r: &mut R, ring: &Ring) -> ChowElement {
    loop {
        let x = random_homogeneous(r, ring, 1);
        if !x.is_zero() {
            return x;
        }
    }
}

/// `sum_{n <= D} B_n(0) x^n / n!`, the truncation of `x / (e^x - 1)`.
fn x_over_exp_minus_one(x: &ChowElement) -> ChowElement {
    let ring = x.ring();
    let d = ring.truncation() as usize;
    let b = bernoulli_numbers(d);
    let mut acc = ring.zero();
    let mut power = ring.one();
    let mut fact = int(1);
    for (n, bn) in b.iter().enumerate() {
        if n > 0 {
            power = &power * x;
            fact *= int(n as i64);
        }
        acc = &acc + &power.scale(&(bn / &fact));
    }
    acc
}

fn random_poly<R: Rng>(r: &mut R) -> Poly2 {
    let mut p = Poly2::zero();
    for _ in 0..r.gen_range(1..=3) {
        let c = rat(r.gen_range(-4..=4), r.gen_range(1..=3));
        p = &p + &Poly2::term(c, r.gen_range(0..=2), r.gen_range(0..=2));
    }
    p
}

fn random_chain<R: Rng>(r: &mut R) -> Vec<u64> {
    let n = r.gen_range(1..=4);
    let mut a: Vec<u64> = (0..n).map(|_| r.gen_range(1..=5)).collect();
    a[n - 1] = r.gen_range(2..=5);
    a
}

const CY_CHAINS: [&[u64]; 4] = [&[2, 2, 3], &[3, 2, 2], &[1, 4], &[3, 3, 3, 4]];

proptest! {
    #![proptest_config(config())]

    #[test]
    fn ring_is_a_commutative_ring(seed: u64, d in 1u32..=5) {
        let mut r = rng(seed);
        let ring = random_ring(&mut r, d);
        let (a, b, c) = (random_element(&mut r, &ring), random_element(&mut r, &ring), random_element(&mut r, &ring));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn printed_elements_parse_back(seed: u64, d in 1u32..=5) {
        let mut r = rng(seed);
        let ring = random_ring(&mut r, d);
        let x = random_element(&mut r, &ring);
        let back = parse_class_expr(&x.to_string(), &ring).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn series_inverse(seed: u64, d in 1u32..=4, q in 0i64..=8) {
        let mut r = rng(seed);
        let ring = random_ring(&mut r, d);
        let e = euler_eq(random_weight(&mut r), &random_kclass(&mut r, &ring)).unwrap();
        let inv = e.invert(q).unwrap();
        let lo = e.min_exponent().unwrap();
        prop_assert!(e.mul(&inv).agrees_up_to(&QSeries::one_in(&ring), q + lo));
    }

    #[test]
    fn ratfunc_field_laws(seed: u64) {
        let mut r = rng(seed);
        let f = RatFunc::new(random_poly(&mut r), Poly2::term(int(1), r.gen_range(0..=2), 0));
        let g = RatFunc::from_poly(&random_poly(&mut r) + &Poly2::constant(int(5)));
        prop_assert_eq!(&(&f * &g) / &g, f.clone());
        prop_assert_eq!(&(&f + &g) - &g, f.clone());
        let (z, q) = (rat(3, 7), rat(-2, 5));
        if let (Some(fv), Some(gv)) = (f.eval(&z, &q), g.eval(&z, &q)) {
            prop_assert_eq!((&f * &g).eval(&z, &q), Some(fv * gv));
        }
    }

    #[test]
    fn classes_are_multiplicative(seed: u64, d in 1u32..=4) {
        let mut r = rng(seed);
        let ring = random_ring(&mut r, d);
        let (a, b) = (random_kclass(&mut r, &ring), random_kclass(&mut r, &ring));
        let s = a.try_add(&b).unwrap();
        prop_assert_eq!(todd(&s), &todd(&a) * &todd(&b));
        let t = rat(r.gen_range(-5..=0), r.gen_range(1..=4));
        prop_assert_eq!(frak_c_value(&t, &s).unwrap(), &frak_c_value(&t, &a).unwrap() * &frak_c_value(&t, &b).unwrap());
        let k = random_weight(&mut r);
        prop_assert_eq!(euler_eq(k, &s).unwrap(), euler_eq(k, &a).unwrap().mul(&euler_eq(k, &b).unwrap()));
    }

    #[test]
    fn negation_inverts(seed: u64, d in 1u32..=4) {
        let mut r = rng(seed);
        let ring = random_ring(&mut r, d);
        let a = random_kclass(&mut r, &ring);
        prop_assert!((&todd(&a) * &todd(&a.neg())).is_one());
        let k = random_weight(&mut r);
        prop_assert!(euler_eq(k, &a).unwrap().mul(&euler_eq(k, &a.neg()).unwrap()) == QSeries::one_in(&ring));
    }

    #[test]
    fn formal_c_matches_series_exponential(seed: u64, d in 1u32..=3) {
        let mut r = rng(seed);
        let ring = random_ring(&mut r, d);
        let mut a = random_kclass(&mut r, &ring);
        a = a.try_sub(&KClass::trivial(&ring, a.rank())).unwrap();
        let k = random_weight(&mut r);
        let q = 6;
        let work = q + 2 * i64::from(d) + 2;
        let mut x = QSeries::zero_in(&ring, None);
        for l in 1..=d as usize {
            x = x.add(&QSeries::outer(&s_l_series(l, k, work).unwrap(), &a.ch(l)));
        }
        let expected = x.neg().exp(work).unwrap();
        prop_assert!(frak_c_formal(k, &a, q).unwrap().agrees_up_to(&expected, q));
    }

    #[test]
    fn line_bundles_factor_through_roots(seed: u64, d in 1u32..=5) {
        let mut r = rng(seed);
        let ring = random_ring(&mut r, d);
        let alpha = random_degree_one(&mut r, &ring);
        let line = KClass::line_bundle(&alpha).unwrap();
        let e_alpha = alpha.exp().unwrap();
        let td = x_over_exp_minus_one(&(-&alpha));
        // x/(1 - e^-x) written as (-x)/(e^-x - 1)
        prop_assert_eq!(todd(&line), td.clone());
        let t = rat(r.gen_range(-4..=0), r.gen_range(1..=3));
        let expected = &(&e_alpha - &ring.constant(t.clone())) * &x_over_exp_minus_one(&alpha);
        prop_assert_eq!(frak_c_value(&t, &line).unwrap(), expected);
        // c_0(L) = alpha e^alpha / (e^alpha - 1)
        prop_assert_eq!(frak_c_value(&int(0), &line).unwrap(), &e_alpha * &x_over_exp_minus_one(&alpha));
        let k = random_weight(&mut r);
        let root = QSeries::from_coeffs(ring.zero(), 0, vec![alpha.clone(), ring.constant(int(k.0))], None);
        prop_assert_eq!(euler_eq(k, &line).unwrap(), root);
    }

    #[test]
    fn rank_law(d in 1u32..=4, rank in -3i64..=3, k in prop_oneof![-3i64..=-1, 1i64..=3]) {
        let ring = Ring::new(chloc::exactalg::RingSpec::new(d).generator("a", 1)).unwrap();
        let trivial = KClass::trivial(&ring, rank);
        let t = rat(1, 3);
        let expected = num_traits::pow(int(1) - &t, rank.unsigned_abs() as usize);
        let expected = if rank < 0 { expected.recip() } else { expected };
        prop_assert_eq!(frak_c_value(&t, &trivial).unwrap(), ring.constant(expected));
        let e = euler_eq(Weight(k), &trivial).unwrap();
        let kq = num_traits::pow(int(k), rank.unsigned_abs() as usize);
        let kq = if rank < 0 { kq.recip() } else { kq };
        prop_assert_eq!(e, QSeries::monomial(ring.constant(kq), rank, None));
    }

    #[test]
    fn dual_law(seed: u64, d in 1u32..=5) {
        let mut r = rng(seed);
        let ring = random_ring(&mut r, d);
        let e = random_kclass(&mut r, &ring);
        let k = random_weight(&mut r);
        let sign = if e.rank() % 2 == 0 { int(1) } else { int(-1) };
        prop_assert_eq!(euler_eq(k, &e.dual()).unwrap(), euler_eq(Weight(-k.0), &e).unwrap().scale(&sign));
    }

    #[test]
    fn aut_group_is_a_group(seed: u64) {
        let mut r = rng(seed);
        let a = random_chain(&mut r);
        let c = chain_solve(&a).unwrap();
        let group = aut_group(&c).unwrap();
        let g = group.choose(&mut r).unwrap();
        let h = group.choose(&mut r).unwrap();
        prop_assert!(g.compose(h).unwrap().is_symmetry_of(&c));
        prop_assert!(g.inverse().is_symmetry_of(&c));
        prop_assert!(g.compose(&g.inverse()).unwrap().is_identity());
        prop_assert!(group.contains(&grading_element(&c).unwrap()));
    }

    #[test]
    fn sectors_are_periodic(idx in 0usize..4, k in 0i64..40) {
        let c = chain_solve(CY_CHAINS[idx]).unwrap();
        let d = c.degree() as i64;
        prop_assert_eq!(sector_of(&c, k + d).unwrap(), sector_of(&c, k).unwrap());
        prop_assert!(sector_of(&c, d).unwrap().is_identity());
    }

    #[test]
    fn b_sets_match_their_definition(seed: u64, k in 1u64..40) {
        let mut r = rng(seed);
        let c = chain_solve(&random_chain(&mut r)).unwrap();
        for j in 1..=c.len() {
            let top = &c.charges()[j - 1] * int(k as i64);
            let target = frac(&top);
            let mut expected = Vec::new();
            let mut b = int(delta(&c, j));
            while b < top {
                if frac(&b) == target && b >= int(0) && b > int(delta(&c, j)) {
                    expected.push(b.clone());
                }
                b += rat(1, c.degree() as i64);
            }
            prop_assert_eq!(b_set(&c, j, k), expected);
        }
    }

    #[test]
    fn i_coefficients_are_homogeneous(idx in 0usize..4, k in 1u64..25, lambda in 1i64..5) {
        let c = chain_solve(CY_CHAINS[idx]).unwrap();
        let ic = i_coefficient(&c, k).unwrap();
        let degree = 1 + ic.factors.len() as i64 - (k as i64 - 1);
        let l = rat(lambda, 2);
        let scale = if degree >= 0 {
            num_traits::pow(l.clone(), degree as usize)
        } else {
            num_traits::pow(l.clone(), (-degree) as usize).recip()
        };
        let scaled: Rational = scale;
        prop_assert_eq!(ic.value.rescale_vars(&l), &ic.value * &RatFunc::constant(scaled));
    }

    #[test]
    fn hodge_product_ignores_order(seed: u64, d in 1u32..=4) {
        let mut r = rng(seed);
        let ring = random_ring(&mut r, d);
        let hodge = random_kclass(&mut r, &ring);
        let hw = random_weight(&mut r);
        let mut pushed: Vec<(KClass, Weight)> =
            (0..r.gen_range(1..=4)).map(|_| (random_kclass(&mut r, &ring), random_weight(&mut r))).collect();
        let first = hodge_product(&LocInput::new(hodge.clone(), hw, pushed.clone()).unwrap()).unwrap();
        pushed.shuffle(&mut r);
        let second = hodge_product(&LocInput::new(hodge, hw, pushed).unwrap()).unwrap();
        prop_assert_eq!(first.series, second.series);
        prop_assert_eq!(first.relations, second.relations);
    }
}
