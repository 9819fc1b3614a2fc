//! Acceptance run: one line per criterion, nonzero exit if any fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;

use chloc::chainfjrw::{aut_group, aut_group_order, chain_solve, grading_element, sector_of, ChainData};
use chloc::charclasses::{
    bernoulli, bernoulli_numbers, euler_eq, frak_c_formal, frak_c_value, gamma_lk, verify_compfce_batch, KClass,
    Weight,
};
use chloc::exactalg::{frac, int, rat, Poly2, RatFunc, Rational};
use chloc::exec::{map_ordered, Strategy};
use chloc::ifunction::{b_set, delta, i_coefficient, noneq_limit, pf_check, PfKind};
use chloc::localize::{hodge_product, loc_hodge_general, tautrel_batch, GeneralInput, LocInput};
use chloc::sample::{
    random_geometric_loc_input, random_kclass, random_loc_input, random_ring, random_weight, rigged_divergent, rng,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn compfce() -> Outcome {
    let mut r = rng(1001);
    let items: Vec<(KClass, Weight)> = (0..216)
        .map(|i| {
            let ring = random_ring(&mut r, 1 + (i % 6) as u32);
            (random_kclass(&mut r, &ring), random_weight(&mut r))
        })
        .collect();
    let checks = verify_compfce_batch(&items, 14, Strategy::Parallel);
    for (i, c) in checks.iter().enumerate() {
        let c = c.as_ref().map_err(err)?;
        ensure(c.holds, || format!("item {i}: difference {}", c.difference))?;
    }
    Ok(format!("{} classes, D = 1..6, Q_max = 14, zero difference", items.len()))
}

struct Pair {
    a: KClass,
    b: KClass,
    k: Weight,
    t: Rational,
}

fn check_pair(p: &Pair) -> Result<(), String> {
    let Pair { a, b, k, t } = p;
    let sum = a.try_add(b).map_err(err)?;
    let ea = euler_eq(*k, a).map_err(err)?;
    let eb = euler_eq(*k, b).map_err(err)?;
    ensure(euler_eq(*k, &sum).map_err(err)? == ea.mul(&eb), || "e_q".into())?;

    let ca = frak_c_value(t, a).map_err(err)?;
    let cb = frak_c_value(t, b).map_err(err)?;
    ensure(frak_c_value(t, &sum).map_err(err)? == &ca * &cb, || format!("c_t at t = {t}"))?;

    let d = i64::from(a.ring().truncation());
    let q = 2 * d + 2;
    // a factor with rank r has q-valuation at least min(r, 0) - D
    let need = |x: &KClass| q + d - x.rank().min(0);
    let fa = frak_c_formal(*k, a, need(b)).map_err(err)?;
    let fb = frak_c_formal(*k, b, need(a)).map_err(err)?;
    let fs = frak_c_formal(*k, &sum, q).map_err(err)?;
    ensure(fs.agrees_up_to(&fa.mul(&fb), q), || "c_(e^-kq)".into())
}

fn multiplicativity() -> Outcome {
    let mut r = rng(1002);
    let pairs: Vec<Pair> = (0..200)
        .map(|i| {
            let ring = random_ring(&mut r, 1 + (i % 6) as u32);
            let a = random_kclass(&mut r, &ring);
            let b = random_kclass(&mut r, &ring);
            let k = random_weight(&mut r);
            let mut t = rat(r.gen_range(-7..=7), r.gen_range(1..=5));
            if t == int(1) {
                t = rat(2, 1);
            }
            Pair { a, b, k, t }
        })
        .collect();
    for (i, res) in map_ordered(Strategy::Parallel, &pairs, check_pair).into_iter().enumerate() {
        res.map_err(|e| format!("pair {i}: {e}"))?;
    }
    Ok(format!("{} pairs: e_q, c_t at rational t, c_(e^-kq)", pairs.len()))
}

fn picard_fuchs() -> Outcome {
    let mut notes = Vec::new();
    for a in [[2u64, 2, 3], [3, 2, 2]] {
        let c = chain_solve(&a).map_err(err)?;
        let start = Instant::now();
        let rep = pf_check(&c, 33, Strategy::Parallel).map_err(err)?;
        let secs = start.elapsed();
        ensure(rep.entries.len() == 33, || format!("{a:?}: {} entries", rep.entries.len()))?;
        if let Some(e) = rep.entries.iter().find(|e| !e.passes) {
            return Err(format!("{a:?}: t^{} residual {}", e.m, e.residual));
        }
        ensure(rep.entries[0].kind == PfKind::Annihilated, || format!("{a:?}: t^1 is not a base case"))?;
        ensure(secs < Duration::from_secs(10), || format!("{a:?}: {secs:?}"))?;
        notes.push(format!("{a:?} m <= 33 ({:.2}s)", secs.as_secs_f64()));
    }
    Ok(notes.join(", "))
}

fn spot_values() -> Outcome {
    // Charges 1/3 and delta = (0, -1, 0).  k = 1, 2: every B_j is empty, so
    // I_1 = -z and I_2 = -z/(1! z) = -1.  k = 3: c_j k = 1, only B_2 = {0},
    // factor k_2 q = -2q, so I_3 = -z (-2q)/(2! z^2) = q/z.
    let c = chain_solve(&[2, 2, 3]).map_err(err)?;
    let j = grading_element(&c).map_err(err)?;
    let z = || Poly2::term(int(1), 1, 0);
    let expected = [
        (1u64, RatFunc::from_poly(Poly2::term(int(-1), 1, 0))),
        (2, RatFunc::constant(int(-1))),
        (3, RatFunc::new(Poly2::term(int(1), 0, 1), z())),
    ];
    for (k, value) in expected {
        let ic = i_coefficient(&c, k).map_err(err)?;
        ensure(ic.value == value, || format!("I_{k} = {}", ic.value))?;
        ensure(ic.sector == j.power(k as i64), || format!("I_{k} sector {}", ic.sector))?;
    }
    ensure(sector_of(&c, 3).map_err(err)?.is_identity(), || "J^3".into())?;
    Ok("I_1 = -z e_J, I_2 = -e_J^2, I_3 = (q/z) e_J^3".into())
}

/// `B_j(k)` by scanning every multiple of `1/d` in `[0, k]`.
fn b_scan(c: &ChainData, j: usize, k: u64) -> Vec<Rational> {
    let d = c.degree() as i64;
    let top = &c.charges()[j - 1] * int(k as i64);
    let lower = int(delta(c, j));
    (0..=k as i64 * d)
        .map(|n| rat(n, d))
        .filter(|b| *b > lower && *b < top && frac(&(b - &top)) == int(0))
        .collect()
}

fn noneq() -> Outcome {
    let c = chain_solve(&[2, 2, 3]).map_err(err)?;
    let z = rat(7, 5);
    let mut zeros = 0;
    for k in 1..=30u64 {
        let ic = i_coefficient(&c, k).map_err(err)?;
        let mut bs = Vec::new();
        for j in 1..=c.len() {
            let scan = b_scan(&c, j, k);
            ensure(scan == b_set(&c, j, k), || format!("B_{j}({k})"))?;
            bs.extend(scan);
        }
        let has_zero = bs.iter().any(|b| *b == int(0));
        ensure(ic.value.denominator().q_degree() == Some(0), || format!("I_{k} has q in its denominator"))?;
        ensure(ic.q_valuation() == bs.iter().filter(|b| **b == int(0)).count(), || format!("I_{k} q-valuation"))?;
        let lim = noneq_limit(&ic);
        ensure(lim.is_zero() == has_zero, || format!("I_{k} limit {lim}"))?;
        // -z prod (b z) / ((k-1)! z^(k-1)) at q = 0
        let mut expected = -z.clone();
        for b in &bs {
            expected *= b * &z;
        }
        for b in 1..k {
            expected /= int(b as i64) * &z;
        }
        let at_zero = ic.value.eval(&z, &int(0)).ok_or("pole at q = 0")?;
        ensure(lim.eval(&z, &int(0)) == Some(expected.clone()), || format!("I_{k} limit value"))?;
        ensure(at_zero == expected, || format!("I_{k} at q = 0"))?;
        zeros += usize::from(has_zero);
    }
    Ok(format!("k <= 30, {zeros} vanishing limits, all on B_j(k) containing 0"))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn chains(n: usize, max: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for pos in 0..n {
        let lo = if pos == n - 1 { 2 } else { 1 };
        out = out
            .into_iter()
            .flat_map(|v| {
                (lo..=max).map(move |a| {
                    let mut w = v.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    out
}

/// Every `theta in (1/P Z / Z)^N`, `P = prod a_j`, fixing each monomial.
fn aut_scan(a: &[u64]) -> BTreeSet<Vec<Rational>> {
    let n = a.len();
    let p: u64 = a.iter().product();
    let mut partial: Vec<Vec<u64>> = vec![vec![]];
    for j in (0..n).rev() {
        let mut next = Vec::new();
        for tail in &partial {
            let shift = tail.first().copied().unwrap_or(0);
            for m in 0..p {
                if (a[j] * m + shift) % p == 0 {
                    let mut v = vec![m];
                    v.extend(tail);
                    next.push(v);
                }
            }
        }
        partial = next;
    }
    partial.into_iter().map(|v| v.into_iter().map(|m| rat(m as i64, p as i64)).collect()).collect()
}

fn chain_combinatorics() -> Outcome {
    let mut count = 0;
    for n in 1..=4 {
        for a in chains(n, 6) {
            let c = chain_solve(&a).map_err(err)?;
            let (w, d) = (c.weights(), c.degree());
            for j in 0..n {
                let next = if j + 1 < n { w[j + 1] } else { 0 };
                ensure(a[j] * w[j] + next == d, || format!("{a:?}: equation {}", j + 1))?;
            }
            ensure(w.iter().fold(d, |g, &x| gcd(g, x)) == 1, || format!("{a:?}: not primitive"))?;
            let jay = grading_element(&c).map_err(err)?;
            ensure(jay.power(d as i64).is_identity(), || format!("{a:?}: J^d"))?;
            count += 1;
        }
    }
    let mut groups = 0;
    for n in 1..=3 {
        for a in chains(n, 5) {
            let c = chain_solve(&a).map_err(err)?;
            let scan = aut_scan(&a);
            let ours: BTreeSet<Vec<Rational>> =
                aut_group(&c).map_err(err)?.into_iter().map(|g| g.theta().to_vec()).collect();
            ensure(scan == ours, || format!("{a:?}: Aut(W) differs from the scan"))?;
            let order = aut_group_order(&c).map_err(err)?;
            ensure(order == a.iter().product::<u64>() && order as usize == scan.len(), || format!("{a:?}: order"))?;
            groups += 1;
        }
    }
    Ok(format!("{count} chains solved, {groups} groups enumerated"))
}

fn tautrel() -> Outcome {
    let mut r = rng(1007);
    let inputs: Vec<LocInput> = (0..100)
        .map(|i| {
            let ring = random_ring(&mut r, 1 + (i % 4) as u32);
            if i % 2 == 0 {
                random_loc_input(&mut r, &ring, 3)
            } else {
                random_geometric_loc_input(&mut r, &ring, 3)
            }
        })
        .collect();
    let mut convergent = 0;
    for (i, inp) in inputs.iter().enumerate() {
        let q = 2 * i64::from(inp.ring().truncation()) + 2;
        let rep = tautrel_batch(std::slice::from_ref(inp), q, Strategy::Sequential).remove(0).map_err(err)?;
        ensure(rep.convergence_agrees, || format!("input {i}: convergence differs"))?;
        ensure(rep.limits_agree, || format!("input {i}: limits differ"))?;
        convergent += usize::from(rep.side_a.is_convergent());
    }
    let rigged: Vec<LocInput> = (0..20)
        .map(|i| {
            let ring = random_ring(&mut r, 1 + (i % 4) as u32);
            rigged_divergent(&mut r, &ring, 3)
        })
        .collect();
    let reports: Vec<_> = rigged
        .iter()
        .map(|inp| {
            let q = 2 * i64::from(inp.ring().truncation()) + 2;
            tautrel_batch(std::slice::from_ref(inp), q, Strategy::Parallel).remove(0)
        })
        .collect();
    let mut spans = 0;
    for (i, rep) in reports.into_iter().enumerate() {
        let rep = rep.map_err(err)?;
        ensure(!rep.side_a.is_convergent() && !rep.side_b.is_convergent(), || format!("rigged {i} converges"))?;
        ensure(rep.a_in_ideal_b && rep.b_in_ideal_a, || format!("rigged {i}: ideal containment"))?;
        spans += usize::from(rep.spans_agree);
    }
    Ok(format!(
        "100 inputs ({convergent} convergent), 20 divergent with mutual ideal containment ({spans}/20 equal rational spans)"
    ))
}

fn fjrw_and_dual() -> Outcome {
    let mut r = rng(1008);
    for i in 0..50 {
        let d = 1 + (i % 4) as u32;
        let ring = random_ring(&mut r, d);
        let q = 2 * i64::from(d) + 2;
        let e = random_kclass(&mut r, &ring);
        let ke = random_weight(&mut r);
        let n = r.gen_range(1..=3);
        let (mut v, mut normal, mut pushed) = (Vec::new(), Vec::new(), Vec::new());
        for _ in 0..n {
            let big_a = random_kclass(&mut r, &ring);
            let big_b = random_kclass(&mut r, &ring);
            let k = random_weight(&mut r);
            pushed.push((big_a.try_sub(&big_b).map_err(err)?, k));
            v.push((big_b, k));
            normal.push((big_a, k));
        }
        let general = GeneralInput { hodge: (e.clone(), ke), t: v.clone(), v, normal };
        let lhs = loc_hodge_general(&general, q).map_err(err)?;
        let rhs = hodge_product(&LocInput::new(e, ke, pushed).map_err(err)?).map_err(err)?;
        ensure(lhs.series.agrees_up_to(&rhs.series, q), || format!("instance {i}: {} vs {}", lhs.series, rhs.series))?;
    }
    for i in 0..50 {
        let ring = random_ring(&mut r, 1 + (i % 6) as u32);
        let e = random_kclass(&mut r, &ring);
        let k = random_weight(&mut r);
        let sign = if e.rank() % 2 == 0 { int(1) } else { int(-1) };
        let lhs = euler_eq(k, &e.dual()).map_err(err)?;
        let rhs = euler_eq(Weight(-k.0), &e).map_err(err)?.scale(&sign);
        ensure(lhs == rhs, || format!("dual {i}: {lhs} vs {rhs}"))?;
    }
    Ok("50 specializations equal the product, 50 dual-law checks".into())
}

fn factorial(n: u64) -> Rational {
    (1..=n).fold(int(1), |acc, k| acc * int(k as i64))
}

fn series_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![int(0); a.len()];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate().take(a.len() - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn numbers() -> Outcome {
    const L: usize = 12;
    let exp_minus_one: Vec<Rational> =
        (0..=L).map(|n| if n == 0 { int(0) } else { int(1) / factorial(n as u64) }).collect();
    let mut power: Vec<Rational> = (0..=L).map(|n| int(i64::from(n == 0))).collect();
    for k in 0..=L as u64 {
        for l in 0..=L as u64 {
            let expected = &power[l as usize] * factorial(l) / factorial(k);
            ensure(gamma_lk(l, k) == expected, || format!("gamma({l}, {k}) = {}", gamma_lk(l, k)))?;
        }
        power = series_mul(&power, &exp_minus_one);
    }
    // z/(e^z - 1) = 1/(1 + z/2! + z^2/3! + ...)
    let f: Vec<Rational> = (0..=L).map(|n| int(1) / factorial(n as u64 + 1)).collect();
    let mut inv = vec![int(1)];
    for n in 1..=L {
        let s: Rational = (1..=n).map(|i| &f[i] * &inv[n - i]).sum();
        inv.push(-s);
    }
    let b = bernoulli_numbers(L);
    for n in 0..=L {
        ensure(b[n] == &inv[n] * factorial(n as u64), || format!("B_{n}(0) = {}", b[n]))?;
    }
    ensure(bernoulli(1) == rat(-1, 2) && bernoulli(2) == rat(1, 6) && bernoulli(4) == rat(-1, 30), || {
        "fixed Bernoulli values".into()
    })?;
    Ok("gamma(l, k) for l, k <= 12 and B_n(0) for n <= 12 match series oracles".into())
}

fn cli_contract() -> Outcome {
    for case in common::CASES {
        common::check_case(case)?;
    }
    let codes = [
        (common::run(&["ifunction", "2", "2", "3"]).code, 1),
        (common::run(&["chain", "analyze"]).code, 1),
        (common::run(&["classes", "identity", "--job", "jobs/missing.json"]).code, 1),
    ];
    for (got, want) in codes {
        ensure(got == want, || format!("usage error exited {got}"))?;
    }
    Ok(format!("{} golden transcripts, identical across two runs; exit codes 0/1/2", common::CASES.len()))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome, u64);
    let criteria: [Criterion; 10] = [
        ("compfce identity", compfce, 30),
        ("multiplicativity", multiplicativity, 10),
        ("Picard-Fuchs", picard_fuchs, 20),
        ("I-coefficient spot values", spot_values, 10),
        ("non-equivariant limit", noneq, 10),
        ("chain combinatorics", chain_combinatorics, 10),
        ("tautological relations", tautrel, 60),
        ("FJRW specialization and dual law", fjrw_and_dual, 60),
        ("gamma and Bernoulli numbers", numbers, 10),
        ("CLI determinism and exit codes", cli_contract, 60),
    ];
    let mut failed = 0;
    for (i, (name, f, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let secs = start.elapsed().as_secs_f64();
        let result = result.and_then(|msg| {
            if secs <= *budget as f64 {
                Ok(msg)
            } else {
                Err(format!("{msg}; took longer than {budget}s"))
            }
        });
        match result {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg} [{secs:.2}s]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg} [{secs:.2}s]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
