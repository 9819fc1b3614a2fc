use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;

use chloc::chainfjrw::{chain_solve, weight_seq, ChainData};
use chloc::charclasses::{KClass, Weight};
use chloc::exactalg::{default_q_max, parse_class_expr, Ring, RingSpec};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobFile {
    pub chow: ChowSection,
    #[serde(default)]
    pub classes: Vec<ClassEntry>,
    #[serde(default)]
    pub chain: Option<Vec<u64>>,
    #[serde(default)]
    pub job: serde_json::Value,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChowSection {
    #[serde(default)]
    pub generators: Vec<GeneratorEntry>,
    pub truncation: u32,
    #[serde(default)]
    pub q_max: Option<i64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorEntry {
    pub name: String,
    pub degree: i64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassEntry {
    pub name: String,
    pub rank: i64,
    #[serde(default)]
    pub ch: BTreeMap<String, String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightedRef {
    pub class: String,
    #[serde(default)]
    pub weight: Option<i64>,
}

/// `hodge` and `tautrel` jobs.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductJob {
    #[serde(default)]
    pub hodge: Option<String>,
    #[serde(default)]
    pub hodge_weight: Option<i64>,
    #[serde(default)]
    pub pushed: Vec<WeightedRef>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneralJob {
    #[serde(default)]
    pub hodge: Option<WeightedRef>,
    #[serde(default)]
    pub v: Vec<WeightedRef>,
    #[serde(default)]
    pub t: Vec<WeightedRef>,
    #[serde(default)]
    pub normal: Vec<WeightedRef>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentityJob {
    #[serde(default)]
    pub pairs: Vec<WeightedRef>,
    #[serde(default)]
    pub random: Option<RandomSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomSpec {
    pub seed: u64,
    pub count: usize,
}

/// A parsed job file with its ring and named classes resolved.
pub struct Loaded {
    pub ring: Ring,
    pub classes: BTreeMap<String, KClass>,
    pub chain: Option<ChainData>,
    pub file_q_max: Option<i64>,
    pub job: serde_json::Value,
}

pub fn read(path: &Path) -> Result<Loaded> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse(&text)
}

fn from_value<T: for<'de> Deserialize<'de>>(v: &serde_json::Value) -> Result<T> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let path = e.path().to_string();
        anyhow!("schema error at {}: {}", path, e.inner())
    })
}

pub fn parse(text: &str) -> Result<Loaded> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: JobFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        anyhow!("schema error at {}: {}", path, e.inner())
    })?;
    let mut spec = RingSpec::new(file.chow.truncation);
    for g in &file.chow.generators {
        spec = spec.generator(g.name.clone(), g.degree);
    }
    let ring = Ring::new(spec).context("invalid chow section")?;
    let mut classes = BTreeMap::new();
    for (i, c) in file.classes.iter().enumerate() {
        let class = resolve_class(&ring, c).with_context(|| format!("in classes[{i}] ({})", c.name))?;
        if classes.insert(c.name.clone(), class).is_some() {
            bail!("duplicate class name {:?}", c.name);
        }
    }
    let chain = match &file.chain {
        Some(a) => Some(chain_solve(a).context("invalid chain")?),
        None => None,
    };
    let job = if file.job.is_null() { serde_json::Value::Object(Default::default()) } else { file.job };
    Ok(Loaded { ring, classes, chain, file_q_max: file.chow.q_max, job })
}

fn resolve_class(ring: &Ring, c: &ClassEntry) -> Result<KClass> {
    let d = ring.truncation() as usize;
    let mut ch = vec![ring.zero(); d];
    for (key, expr) in &c.ch {
        let l: usize = key.parse().map_err(|_| anyhow!("Chern character index {key:?} is not an integer"))?;
        if l == 0 {
            bail!("Chern character index 0 is the rank; use the rank field");
        }
        let x = parse_class_expr(expr, ring).with_context(|| format!("in ch.{key}"))?;
        if l > d {
            if x.is_zero() {
                continue;
            }
            bail!("Ch_{l} given but the truncation is {d}");
        }
        ch[l - 1] = x;
    }
    Ok(KClass::new(ring, c.rank, ch)?)
}

impl Loaded {
    /// Flag, then file, then `CHLOC_Q_MAX`, then `2 D + 2`.
    pub fn q_max(&self, flag: Option<i64>) -> Result<i64> {
        if let Some(q) = flag.or(self.file_q_max) {
            return Ok(q);
        }
        if let Ok(v) = std::env::var("CHLOC_Q_MAX") {
            return v.trim().parse().map_err(|_| anyhow!("CHLOC_Q_MAX={v:?} is not an integer"));
        }
        Ok(default_q_max(self.ring.truncation()))
    }

    pub fn class(&self, name: &str) -> Result<&KClass> {
        self.classes.get(name).ok_or_else(|| anyhow!("unresolved class name {name:?}"))
    }

    pub fn product_job(&self) -> Result<ProductJob> {
        from_value(&self.job)
    }

    pub fn general_job(&self) -> Result<GeneralJob> {
        from_value(&self.job)
    }

    pub fn identity_job(&self) -> Result<IdentityJob> {
        from_value(&self.job)
    }

    fn weighted(&self, r: &WeightedRef, what: &str) -> Result<(KClass, Weight)> {
        let class = self.class(&r.class)?.clone();
        let k = r.weight.ok_or_else(|| anyhow!("{what} {:?} needs a weight", r.class))?;
        if k == 0 {
            bail!("{what} {:?} has weight 0", r.class);
        }
        Ok((class, Weight(k)))
    }

    pub fn weighted_list(&self, refs: &[WeightedRef], what: &str) -> Result<Vec<(KClass, Weight)>> {
        refs.iter().map(|r| self.weighted(r, what)).collect()
    }

    /// Hodge class, its weight and the weighted pushed classes; missing
    /// weights come from the chain.
    pub fn product_input(&self, job: &ProductJob) -> Result<(KClass, Weight, Vec<(KClass, Weight)>)> {
        let ks = match &self.chain {
            Some(c) => Some(weight_seq(c)?),
            None => None,
        };
        let hodge = match &job.hodge {
            Some(name) => self.class(name)?.clone(),
            None => KClass::zero(&self.ring),
        };
        let n = self.chain.as_ref().map(ChainData::len);
        let hodge_weight = match (job.hodge_weight, &ks, n) {
            (Some(k), _, _) => k,
            (None, Some(ks), Some(n)) => ks.k(n + 1),
            (None, _, _) if job.hodge.is_none() => 1,
            _ => bail!("hodge_weight is required without a chain"),
        };
        if hodge_weight == 0 {
            bail!("hodge_weight is 0");
        }
        let mut pushed = Vec::with_capacity(job.pushed.len());
        for (j, r) in job.pushed.iter().enumerate() {
            let class = self.class(&r.class)?.clone();
            let k = match (r.weight, &ks) {
                (Some(k), _) => k,
                (None, Some(ks)) if j < ks.weights().len() - 1 => ks.k(j + 1),
                (None, Some(_)) => bail!("pushed[{j}] has no weight and the chain has only {} variables", n.unwrap()),
                (None, None) => bail!("pushed[{j}] needs a weight without a chain"),
            };
            if k == 0 {
                bail!("pushed[{j}] has weight 0");
            }
            pushed.push((class, Weight(k)));
        }
        Ok((hodge, Weight(hodge_weight), pushed))
    }

    pub fn describe_ring(&self) -> String {
        let spec = self.ring.spec();
        let gens: Vec<String> = spec.generators.iter().map(|g| format!("{}:{}", g.name, g.degree)).collect();
        format!("generators [{}], truncation {}", gens.join(", "), spec.truncation)
    }
}
