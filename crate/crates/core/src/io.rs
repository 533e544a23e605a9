//! JSON file formats: matroid input, fan export, balancing reports, weight files.
//!
//! Rationals are always written as `"p"` or `"p/q"` strings and sets as lists of
//! the user's ground-set labels.

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::balancing::{BalancingRelation, BalancingReport, Term, TermGroup};
use crate::error::{Error, Result};
use crate::fan::{BergmanFan, FlagOfFlats};
use crate::matroid::{GroundSet, Matroid};
use crate::vector::{format_rational, parse_rational, RationalVector};
use crate::weighted::{Skeleton, WeightFunction};

/// A parsed matroid together with the JSON it came from, echoed into reports.
#[derive(Clone, Debug)]
pub struct MatroidDocument {
    pub matroid: Matroid,
    pub source: Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMatroid {
    kind: String,
    ground: Option<Vec<String>>,
    bases: Option<Vec<Vec<String>>>,
    r: Option<i64>,
    n: Option<i64>,
    edges: Option<Vec<(String, String)>>,
}

impl RawMatroid {
    fn require_absent(&self, fields: &[&str]) -> Result<()> {
        for &f in fields {
            let present = match f {
                "ground" => self.ground.is_some(),
                "bases" => self.bases.is_some(),
                "r" => self.r.is_some(),
                "n" => self.n.is_some(),
                "edges" => self.edges.is_some(),
                _ => unreachable!(),
            };
            if present {
                return Err(Error::Parse(format!("field {f:?} is not allowed for kind {:?}", self.kind)));
            }
        }
        Ok(())
    }
}

fn missing(field: &str, kind: &str) -> Error {
    Error::Parse(format!("kind {kind:?} requires field {field:?}"))
}

pub fn parse_matroid(text: &str) -> Result<MatroidDocument> {
    let source: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let raw: RawMatroid = serde_json::from_value(source.clone()).map_err(|e| Error::Parse(e.to_string()))?;
    let kind = raw.kind.as_str();
    let matroid = match kind {
        "bases" => {
            raw.require_absent(&["r", "n", "edges"])?;
            let ground = GroundSet::new(raw.ground.clone().ok_or_else(|| missing("ground", kind))?)?;
            let bases = raw.bases.as_ref().ok_or_else(|| missing("bases", kind))?;
            let bases = bases.iter().map(|b| ground.set_from_labels(b)).collect::<Result<Vec<_>>>()?;
            Matroid::from_bases(ground, bases)?
        }
        "uniform" => {
            raw.require_absent(&["bases", "edges"])?;
            let r = raw.r.ok_or_else(|| missing("r", kind))?;
            let n = raw.n.ok_or_else(|| missing("n", kind))?;
            match &raw.ground {
                Some(labels) => {
                    if labels.len() as i64 != n {
                        return Err(Error::Parse(format!("ground has {} labels but n = {n}", labels.len())));
                    }
                    if r < 0 || r > n {
                        return Err(Error::InvalidRank { r, n });
                    }
                    Matroid::uniform_on(GroundSet::new(labels.clone())?, r as usize)?
                }
                None => Matroid::uniform(r, n)?,
            }
        }
        "graphic" => {
            raw.require_absent(&["bases", "r", "n"])?;
            let edges = raw.edges.as_ref().ok_or_else(|| missing("edges", kind))?;
            let mut vertices: Vec<String> = Vec::new();
            let mut id = |v: &String| match vertices.iter().position(|w| w == v) {
                Some(i) => i,
                None => {
                    vertices.push(v.clone());
                    vertices.len() - 1
                }
            };
            let pairs: Vec<(usize, usize)> = edges.iter().map(|(u, v)| (id(u), id(v))).collect();
            let ground = match &raw.ground {
                Some(labels) => GroundSet::new(labels.clone())?,
                None => GroundSet::indexed(pairs.len())?,
            };
            Matroid::graphic_on(ground, &pairs)?
        }
        other => return Err(Error::Parse(format!("unknown matroid kind {other:?}"))),
    };
    Ok(MatroidDocument { matroid, source })
}

fn labels(m: &Matroid, set: crate::ElementSet) -> Value {
    json!(m.ground().labels_of(set))
}

pub fn flag_json(m: &Matroid, flag: &FlagOfFlats) -> Value {
    Value::Array(flag.flats().iter().map(|f| labels(m, f.set())).collect())
}

pub fn vector_json(v: &RationalVector) -> Value {
    Value::Array(v.coords().iter().map(|q| Value::String(format_rational(q))).collect())
}

/// Parses a flag given as lists of labels; `∅` and `E` may be omitted.
pub fn parse_flag(m: &Matroid, flats: &[Vec<String>]) -> Result<FlagOfFlats> {
    let sets = flats.iter().map(|f| m.ground().set_from_labels(f)).collect::<Result<Vec<_>>>()?;
    FlagOfFlats::from_intermediate(m, &sets)
}

pub fn fan_json(fan: &BergmanFan, source: &Value) -> Value {
    let m = fan.matroid();
    let cones: Vec<Value> = fan
        .all_cones()
        .map(|c| json!({ "flats": flag_json(m, &c.flag), "type": c.cone_type.ranks(), "dim": c.dim }))
        .collect();
    let counts: Map<String, Value> = fan.counts_by_type().iter().map(|(t, &n)| (t.to_string(), json!(n))).collect();
    json!({ "matroid": source, "rank": m.rank(), "cones": cones, "counts_by_type": counts })
}

fn group_name(g: TermGroup) -> String {
    match g {
        TermGroup::Chains => "chains".into(),
        TermGroup::Alternating(l) => format!("alternating(l={l})"),
        TermGroup::Closing => "closing".into(),
    }
}

fn term_json(m: &Matroid, t: &Term) -> Value {
    json!({
        "group": group_name(t.group),
        "chain": t.chain.iter().map(|&s| labels(m, s)).collect::<Vec<_>>(),
        "coefficient": t.coefficient,
        "plus": labels(m, t.plus),
        "minus": labels(m, t.minus),
    })
}

pub fn relation_json(m: &Matroid, rel: &BalancingRelation) -> Value {
    json!({
        "flag": flag_json(m, &rel.flag),
        "type": rel.flag.cone_type().ranks(),
        "i": rel.i,
        "k": rel.k,
        "nontrivial": rel.is_nontrivial(),
        "balanced": rel.is_balanced(),
        "lhs": vector_json(&rel.lhs),
        "terms": rel.terms.iter().map(|t| term_json(m, t)).collect::<Vec<_>>(),
    })
}

pub fn report_json(m: &Matroid, report: &BalancingReport, source: &Value) -> Value {
    let by_type: Map<String, Value> = report
        .by_type
        .iter()
        .map(|(t, counts)| {
            let inner: Map<String, Value> =
                counts.iter().map(|((i, k), n)| (format!("(i={i},k={k})"), json!(n))).collect();
            (t.to_string(), Value::Object(inner))
        })
        .collect();
    json!({
        "matroid": source,
        "relations_checked": report.relations_checked,
        "nontrivial_checked": report.nontrivial_checked,
        "nontrivial_types": report.nontrivial_types.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "codim1_checked": report.codim1_checked,
        "codim1_failures": report.codim1_failures.iter()
            .map(|(f, i)| json!({ "flag": flag_json(m, f), "i": i }))
            .collect::<Vec<_>>(),
        "violations": report.violations.iter().map(|r| relation_json(m, r)).collect::<Vec<_>>(),
        "by_type": by_type,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightEntry {
    pub flats: Vec<Vec<String>>,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightFile {
    pub k: usize,
    pub weights: Vec<WeightEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverOutput {
    pub dim: usize,
    pub basis: Vec<WeightFile>,
}

impl WeightFile {
    pub fn from_weights(m: &Matroid, w: &WeightFunction) -> Self {
        let weights = w
            .weights
            .iter()
            .map(|(flag, q)| WeightEntry {
                flats: flag.flats().iter().map(|f| m.ground().labels_of(f.set())).collect(),
                value: format_rational(q),
            })
            .collect();
        WeightFile { k: w.k, weights }
    }

    pub fn to_weights(&self, m: &Matroid) -> Result<WeightFunction> {
        let mut weights = std::collections::BTreeMap::new();
        for e in &self.weights {
            let flag = parse_flag(m, &e.flats)?;
            if weights.insert(flag.clone(), parse_rational(&e.value)?).is_some() {
                return Err(Error::DomainMismatch(format!("duplicate weight for {flag:?}")));
            }
        }
        Ok(WeightFunction { k: self.k, weights })
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

pub fn solver_output(s: &Skeleton<'_>, basis: &[WeightFunction]) -> SolverOutput {
    let m = s.fan().matroid();
    SolverOutput { dim: basis.len(), basis: basis.iter().map(|w| WeightFile::from_weights(m, w)).collect() }
}
