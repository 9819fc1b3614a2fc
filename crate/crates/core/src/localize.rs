//! Localization products for Hodge virtual classes.
//!
//! All classes live on the fixed locus already, so pushforwards are the
//! identity.  The FJRW form takes the Hodge bundle `E` with weight
//! `k_{N+1}` and classes `R_j` (standing for `R pi_* L_j`) with weights
//! `k_j`, and forms `e_{-k_{N+1} q}(E) prod_j e_{k_j q}(-R_j)`.  Negative
//! powers of `q` in the product are tautological relations; when there are
//! none the constant term is the Hodge virtual class.

use crate::chainfjrw::{weight_seq, ChainData};
use crate::charclasses::{euler_eq, frak_c_formal, todd, todd_twist_ratio, KClass, Weight};
use crate::error::{Error, Result};
use crate::exactalg::{to_precision, ChowElement, QSeries, Ring, Span};
use crate::exec::{map_ordered, Strategy};

/// Input of the FJRW localization product.
#[derive(Clone, Debug, PartialEq)]
pub struct LocInput {
    ring: Ring,
    hodge: KClass,
    hodge_weight: Weight,
    pushed: Vec<(KClass, Weight)>,
    chain: Option<ChainData>,
}

fn check_classes<'a>(ring: &Ring, classes: impl IntoIterator<Item = &'a (KClass, Weight)>) -> Result<()> {
    for (r, k) in classes {
        if r.ring() != ring {
            return Err(Error::RingMismatch);
        }
        k.nonzero()?;
    }
    Ok(())
}

impl LocInput {
    pub fn new(hodge: KClass, hodge_weight: Weight, pushed: Vec<(KClass, Weight)>) -> Result<Self> {
        let ring = hodge.ring().clone();
        hodge_weight.nonzero()?;
        check_classes(&ring, &pushed)?;
        Ok(Self { ring, hodge, hodge_weight, pushed, chain: None })
    }

    /// Weights from the chain: `R_j` gets `k_j`, `E` gets `k_{N+1}`.
    pub fn from_chain(chain: &ChainData, hodge: KClass, pushed: Vec<KClass>) -> Result<Self> {
        if pushed.len() != chain.len() {
            return Err(Error::DimensionMismatch { got: pushed.len(), expected: chain.len() });
        }
        let ks = weight_seq(chain)?;
        let pushed = pushed.into_iter().zip(ks.weights()).map(|(r, &k)| (r, Weight(k))).collect();
        let mut inp = Self::new(hodge, Weight(ks.k(chain.len() + 1)), pushed)?;
        inp.chain = Some(chain.clone());
        Ok(inp)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn hodge(&self) -> &KClass {
        &self.hodge
    }

    pub fn hodge_weight(&self) -> Weight {
        self.hodge_weight
    }

    pub fn pushed(&self) -> &[(KClass, Weight)] {
        &self.pushed
    }

    pub fn chain(&self) -> Option<&ChainData> {
        self.chain.as_ref()
    }

    /// The factors `(E, -k_{N+1})`, `(-R_j, k_j)` of the product.
    pub fn factors(&self) -> Vec<(KClass, Weight)> {
        let mut out = vec![(self.hodge.clone(), Weight(-self.hodge_weight.0))];
        out.extend(self.pushed.iter().map(|(r, k)| (r.neg(), *k)));
        out
    }
}

/// A localization series with its relations and, if it converges, its limit.
#[derive(Clone, Debug, PartialEq)]
pub struct LocResult {
    pub series: QSeries,
    /// Nonzero coefficients of negative powers of `q`, ascending.
    pub relations: Vec<(i64, ChowElement)>,
    /// The constant term, present exactly when `relations` is empty.
    pub limit: Option<ChowElement>,
}

impl LocResult {
    pub fn from_series(series: QSeries) -> Result<Self> {
        let relations = series.negative_part();
        let limit = if relations.is_empty() { Some(series.q_limit()?) } else { None };
        Ok(Self { series, relations, limit })
    }

    pub fn is_convergent(&self) -> bool {
        self.relations.is_empty()
    }
}

fn euler_product(ring: &Ring, factors: &[(KClass, Weight)]) -> Result<QSeries> {
    factors.iter().try_fold(QSeries::one_in(ring), |acc, (r, k)| Ok(acc.mul(&euler_eq(*k, r)?)))
}

/// `e_{-k_{N+1} q}(E) prod_j e_{k_j q}(-R_j)`, exactly.
pub fn hodge_product(inp: &LocInput) -> Result<LocResult> {
    LocResult::from_series(euler_product(&inp.ring, &inp.factors())?)
}

/// Input of the general localization formula: the Hodge bundle and the
/// classes `V`, `T`, `N_j`, each summand with its own weight.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralInput {
    pub hodge: (KClass, Weight),
    pub v: Vec<(KClass, Weight)>,
    pub t: Vec<(KClass, Weight)>,
    pub normal: Vec<(KClass, Weight)>,
}

/// `Td(X (x) O(kq)) = Td(X) Td(X (x) O(kq))/Td(X)` up to `q^q_max`.
fn todd_equivariant(x: &KClass, k: Weight, q_max: i64) -> Result<QSeries> {
    let ratio = todd_twist_ratio(x, k, q_max)?;
    Ok(QSeries::monomial(todd(x), 0, None).mul(&ratio))
}

/// `e_{-k_E q}(E) e(V) / e(N_j) * Td_q(T) / Td_q(V)` up to `q^q_max`.
pub fn loc_hodge_general(inp: &GeneralInput, q_max: i64) -> Result<LocResult> {
    let ring = inp.hodge.0.ring().clone();
    check_classes(&ring, [&inp.hodge].into_iter().chain(&inp.v).chain(&inp.t).chain(&inp.normal))?;
    let (e, ke) = &inp.hodge;
    let mut exact = euler_eq(Weight(-ke.0), e)?;
    exact = exact.mul(&euler_product(&ring, &inp.v)?);
    let normal = euler_product(&ring, &inp.normal)?;
    let series = to_precision(q_max, |work| {
        let mut s = exact.mul(&normal.invert(work)?);
        for (x, k) in &inp.t {
            s = s.mul(&todd_equivariant(x, *k, work)?);
        }
        for (x, k) in &inp.v {
            s = s.mul(&todd_equivariant(&x.neg(), *k, work)?);
        }
        Ok(s)
    })?;
    LocResult::from_series(series)
}

/// Comparison of `A = prod e_{k q}(X)` with `B = prod c_{e^{-k q}}(X)` over
/// the factors of a [`LocInput`].
#[derive(Clone, Debug, PartialEq)]
pub struct TautrelReport {
    pub q_max: i64,
    pub side_a: LocResult,
    pub side_b: LocResult,
    /// `A` converges iff `B` does.
    pub convergence_agrees: bool,
    /// Both limits exist and agree, or neither side converges.
    pub limits_agree: bool,
    /// Each relation of `A` lies in the ideal generated by the relations of `B`.
    pub a_in_ideal_b: bool,
    /// Each relation of `B` lies in the ideal generated by the relations of `A`.
    pub b_in_ideal_a: bool,
    /// The rational spans of the two relation sets coincide (stronger than
    /// ideal equivalence and not implied by it).
    pub spans_agree: bool,
}

impl TautrelReport {
    pub fn passes(&self) -> bool {
        self.convergence_agrees && self.limits_agree && self.a_in_ideal_b && self.b_in_ideal_a
    }
}

fn relation_classes(r: &LocResult) -> Vec<ChowElement> {
    r.relations.iter().map(|(_, c)| c.clone()).collect()
}

fn all_in(span: &Span, xs: &[ChowElement]) -> bool {
    xs.iter().all(|x| span.contains(x))
}

fn rational_span(ring: &Ring, xs: &[ChowElement]) -> Span {
    let mut s = Span::new(ring);
    for x in xs {
        s.insert(x);
    }
    s
}

pub fn tautrel_crosscheck(inp: &LocInput, q_max: i64) -> Result<TautrelReport> {
    let ring = inp.ring.clone();
    let factors = inp.factors();
    let side_a = LocResult::from_series(euler_product(&ring, &factors)?)?;
    let b_series = to_precision(q_max, |work| {
        factors.iter().try_fold(QSeries::one_in(&ring), |acc, (r, k)| Ok(acc.mul(&frak_c_formal(*k, r, work)?)))
    })?;
    let side_b = LocResult::from_series(b_series)?;
    let rel_a = relation_classes(&side_a);
    let rel_b = relation_classes(&side_b);
    let convergence_agrees = side_a.is_convergent() == side_b.is_convergent();
    let limits_agree = match (&side_a.limit, &side_b.limit) {
        (Some(x), Some(y)) => x == y,
        (None, None) => true,
        _ => false,
    };
    let a_in_ideal_b = all_in(&Span::ideal(&ring, &rel_b), &rel_a);
    let b_in_ideal_a = all_in(&Span::ideal(&ring, &rel_a), &rel_b);
    let spans_agree =
        all_in(&rational_span(&ring, &rel_b), &rel_a) && all_in(&rational_span(&ring, &rel_a), &rel_b);
    Ok(TautrelReport { q_max, side_a, side_b, convergence_agrees, limits_agree, a_in_ideal_b, b_in_ideal_a, spans_agree })
}

pub fn tautrel_batch(inputs: &[LocInput], q_max: i64, strategy: Strategy) -> Vec<Result<TautrelReport>> {
    map_ordered(strategy, inputs, |inp| tautrel_crosscheck(inp, q_max))
}
