use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use chloc::chainfjrw::{aut_group_order, chain_solve, grading_element, weight_seq};
use chloc::charclasses::{verify_compfce_batch, KClass, Weight};
use chloc::exactalg::{ChowElement, QSeries};
use chloc::exec::Strategy;
use chloc::ifunction::{i_coefficients, noneq_limit, pf_check, PfKind};
use chloc::localize::{hodge_product, loc_hodge_general, tautrel_crosscheck, GeneralInput, LocInput, LocResult};
use chloc::sample;

use crate::job::{self, Loaded};

/// Rendered report and whether every check passed.
pub struct Outcome {
    pub text: String,
    pub json: Value,
    pub ok: bool,
}

/// A failure after the input was accepted: the computation itself broke.
#[derive(Debug)]
pub struct MathError(pub anyhow::Error);

impl std::fmt::Display for MathError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for MathError {}

fn math<T>(r: chloc::Result<T>) -> Result<T> {
    r.map_err(|e| MathError(e.into()).into())
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(T::to_string).collect()
}

pub fn chain_analyze(exponents: &[u64]) -> Result<Outcome> {
    let c = chain_solve(exponents)?;
    let order = aut_group_order(&c)?;
    let j = grading_element(&c)?;
    let ks = weight_seq(&c)?;
    let mut text = String::new();
    writeln!(text, "chain a = ({})", join(c.exponents()))?;
    writeln!(text, "weights w = ({})", join(c.weights()))?;
    writeln!(text, "degree d = {}", c.degree())?;
    writeln!(text, "charges = ({})", join(c.charges()))?;
    writeln!(text, "calabi-yau = {}", c.is_calabi_yau())?;
    writeln!(text, "|Aut(W)| = {order}")?;
    writeln!(text, "grading element = {j}")?;
    writeln!(text, "q-weights k = ({})", join(ks.weights()))?;
    let json = json!({
        "exponents": c.exponents(),
        "weights": c.weights(),
        "degree": c.degree(),
        "charges": strings(c.charges()),
        "calabi_yau": c.is_calabi_yau(),
        "aut_order": order,
        "grading_element": strings(j.theta()),
        "q_weights": ks.weights(),
    });
    Ok(Outcome { text, json, ok: true })
}

pub fn ifunction(exponents: &[u64], k_max: u64, verify_pf: bool, limit: bool, strategy: Strategy) -> Result<Outcome> {
    let c = chain_solve(exponents)?;
    c.require_calabi_yau()?;
    if k_max == 0 {
        bail!("--k-max must be positive");
    }
    let ks = weight_seq(&c)?;
    let coeffs = math(i_coefficients(&c, k_max, strategy))?;
    let mut text = String::new();
    writeln!(text, "chain a = ({}), d = {}, q-weights k = ({})", join(c.exponents()), c.degree(), join(ks.weights()))?;
    let mut items = Vec::new();
    for ic in &coeffs {
        let kind = if ic.is_broad() { "broad" } else { "narrow" };
        writeln!(text, "I_{} = {}  [sector {}, {}]", ic.k, ic.value, ic.sector, kind)?;
        let mut item = json!({
            "k": ic.k,
            "value": ic.value.to_string(),
            "sector": strings(ic.sector.theta()),
            "broad": ic.is_broad(),
        });
        if limit {
            let lim = noneq_limit(ic);
            writeln!(text, "  q -> 0: {lim}")?;
            item["limit"] = json!(lim.to_string());
        }
        items.push(item);
    }
    let mut json = json!({
        "exponents": c.exponents(),
        "degree": c.degree(),
        "q_weights": ks.weights(),
        "coefficients": items,
    });
    let mut ok = true;
    if verify_pf {
        let m_max = k_max + c.degree();
        let report = math(pf_check(&c, m_max, strategy))?;
        let passed = report.entries.iter().filter(|e| e.passes).count();
        let mut entries = Vec::new();
        for e in &report.entries {
            let (kind, k) = match e.kind {
                PfKind::Annihilated => ("annihilated", None),
                PfKind::Recurrence { k } => ("recurrence", Some(k)),
            };
            if !e.passes {
                writeln!(text, "picard-fuchs t^{}: FAIL ({kind}), residual {}", e.m, e.residual)?;
            }
            entries.push(json!({
                "m": e.m,
                "kind": kind,
                "k": k,
                "passes": e.passes,
                "residual": e.residual.to_string(),
            }));
        }
        writeln!(text, "picard-fuchs: {passed}/{} coefficients t^1..t^{m_max} vanish", report.entries.len())?;
        ok = report.all_pass();
        json["picard_fuchs"] = json!({ "m_max": m_max, "all_pass": ok, "entries": entries });
    }
    Ok(Outcome { text, json, ok })
}

fn series_json(s: &QSeries) -> Value {
    let terms: Vec<Value> = s.iter().map(|(e, c)| json!({ "exponent": e, "class": c.to_string() })).collect();
    json!({ "text": s.to_string(), "precision": s.prec(), "terms": terms })
}

fn relations_json(rel: &[(i64, ChowElement)]) -> Value {
    Value::Array(rel.iter().map(|(e, c)| json!({ "exponent": e, "class": c.to_string() })).collect())
}

fn write_result(text: &mut String, label: &str, r: &LocResult) -> Result<()> {
    writeln!(text, "{label}series = {}", r.series)?;
    writeln!(text, "{label}convergent = {}", r.is_convergent())?;
    for (e, c) in &r.relations {
        writeln!(text, "{label}relation q^{e}: {c}")?;
    }
    match &r.limit {
        Some(l) => writeln!(text, "{label}limit = {l}")?,
        None => writeln!(text, "{label}limit = none")?,
    }
    Ok(())
}

fn result_json(r: &LocResult) -> Value {
    json!({
        "series": series_json(&r.series),
        "convergent": r.is_convergent(),
        "relations": relations_json(&r.relations),
        "limit": r.limit.as_ref().map(ChowElement::to_string),
    })
}

fn header(kind: &str, loaded: &Loaded, q_max: i64) -> (String, Value) {
    let text = format!("job {kind}: {}, q_max {q_max}\n", loaded.describe_ring());
    (text, json!({ "job": kind, "ring": loaded.describe_ring(), "q_max": q_max }))
}

pub enum ClassesJob {
    Hodge,
    General,
    Identity,
    Tautrel,
}

pub fn classes(kind: ClassesJob, path: &Path, q_flag: Option<i64>, strategy: Strategy) -> Result<Outcome> {
    let loaded = job::read(path)?;
    let q_max = loaded.q_max(q_flag)?;
    if q_max < 0 {
        bail!("q_max must be non-negative, got {q_max}");
    }
    match kind {
        ClassesJob::Hodge => hodge(&loaded, q_max),
        ClassesJob::General => general(&loaded, q_max),
        ClassesJob::Identity => identity(&loaded, q_max, strategy),
        ClassesJob::Tautrel => tautrel(&loaded, q_max),
    }
}

fn loc_input(loaded: &Loaded) -> Result<LocInput> {
    let job = loaded.product_job()?;
    let (hodge, k, pushed) = loaded.product_input(&job)?;
    LocInput::new(hodge, k, pushed).context("invalid localization input")
}

fn hodge(loaded: &Loaded, q_max: i64) -> Result<Outcome> {
    let inp = loc_input(loaded)?;
    let r = math(hodge_product(&inp))?;
    let (mut text, mut json) = header("hodge", loaded, q_max);
    write_result(&mut text, "", &r)?;
    json["result"] = result_json(&r);
    Ok(Outcome { text, json, ok: r.is_convergent() })
}

fn general(loaded: &Loaded, q_max: i64) -> Result<Outcome> {
    let job = loaded.general_job()?;
    let hodge = match &job.hodge {
        Some(h) => loaded.weighted_list(std::slice::from_ref(h), "hodge")?.remove(0),
        None => (KClass::zero(&loaded.ring), Weight(1)),
    };
    let inp = GeneralInput {
        hodge,
        v: loaded.weighted_list(&job.v, "v")?,
        t: loaded.weighted_list(&job.t, "t")?,
        normal: loaded.weighted_list(&job.normal, "normal")?,
    };
    let r = math(loc_hodge_general(&inp, q_max))?;
    let (mut text, mut json) = header("general", loaded, q_max);
    write_result(&mut text, "", &r)?;
    json["result"] = result_json(&r);
    Ok(Outcome { text, json, ok: r.is_convergent() })
}

fn identity(loaded: &Loaded, q_max: i64, strategy: Strategy) -> Result<Outcome> {
    let job = loaded.identity_job()?;
    let mut labels = Vec::new();
    let mut items = Vec::new();
    for (r, (class, k)) in job.pairs.iter().zip(loaded.weighted_list(&job.pairs, "pair")?) {
        labels.push(format!("class {} weight {k}", r.class));
        items.push((class, k));
    }
    if let Some(spec) = &job.random {
        let mut rng = sample::rng(spec.seed);
        for i in 0..spec.count {
            let class = sample::random_kclass(&mut rng, &loaded.ring);
            let k = sample::random_weight(&mut rng);
            labels.push(format!("random #{i} (seed {}) weight {k}", spec.seed));
            items.push((class, k));
        }
    }
    let checks = verify_compfce_batch(&items, q_max, strategy);
    let (mut text, mut json) = header("identity", loaded, q_max);
    let mut out = Vec::new();
    let mut ok = true;
    for ((label, (class, _)), check) in labels.iter().zip(&items).zip(checks) {
        let check = math(check)?;
        ok &= check.holds;
        let verdict = if check.holds { "equal" } else { "DIFFERENT" };
        writeln!(text, "{label}: {verdict}")?;
        if !check.holds {
            writeln!(text, "  class: {class}")?;
            writeln!(text, "  difference: {}", check.difference)?;
        }
        out.push(json!({
            "label": label,
            "class": class.to_string(),
            "weight": check.weight.0,
            "holds": check.holds,
            "euler": series_json(&check.euler),
            "difference": series_json(&check.difference),
        }));
    }
    let passed = out.iter().filter(|v| v["holds"] == json!(true)).count();
    writeln!(text, "identity holds for {passed}/{} classes", out.len())?;
    json["checks"] = Value::Array(out);
    json["all_hold"] = json!(ok);
    Ok(Outcome { text, json, ok })
}

fn tautrel(loaded: &Loaded, q_max: i64) -> Result<Outcome> {
    let inp = loc_input(loaded)?;
    let rep = math(tautrel_crosscheck(&inp, q_max))?;
    let (mut text, mut json) = header("tautrel", loaded, q_max);
    write_result(&mut text, "euler side: ", &rep.side_a)?;
    write_result(&mut text, "c_t side: ", &rep.side_b)?;
    writeln!(text, "convergence agrees = {}", rep.convergence_agrees)?;
    writeln!(text, "limits agree = {}", rep.limits_agree)?;
    writeln!(text, "euler relations in c_t ideal = {}", rep.a_in_ideal_b)?;
    writeln!(text, "c_t relations in euler ideal = {}", rep.b_in_ideal_a)?;
    writeln!(text, "rational spans agree = {}", rep.spans_agree)?;
    writeln!(text, "cross-check {}", if rep.passes() { "passes" } else { "FAILS" })?;
    json["euler_side"] = result_json(&rep.side_a);
    json["c_t_side"] = result_json(&rep.side_b);
    json["convergence_agrees"] = json!(rep.convergence_agrees);
    json["limits_agree"] = json!(rep.limits_agree);
    json["euler_in_c_t_ideal"] = json!(rep.a_in_ideal_b);
    json["c_t_in_euler_ideal"] = json!(rep.b_in_ideal_a);
    json["spans_agree"] = json!(rep.spans_agree);
    json["passes"] = json!(rep.passes());
    Ok(Outcome { text, json, ok: rep.passes() })
}
