//! JSON input documents: classes, Ψ-families, witness descriptors, samples.
//!
//! Schema problems are reported as strings naming the offending field.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde_json::{json, Map, Value};

use dimkit::gallery::{lookup, GalleryEntry};
use dimkit::psi::{make_psi_g, make_psi_n, make_psi_pollard, PsiFunction};
use dimkit::witnesses::{canonical_witness, GraphRule, NatarajanRule, PsiRule};
use dimkit::{Domain, Flavor, Hypothesis, HypothesisClass, IndexSet, Label, LabeledSample, Point, PsiFamily, PsiValue, Provenance, Witness};

pub type SchemaResult<T> = Result<T, String>;

pub fn parse_json(text: &str, what: &str) -> SchemaResult<Value> {
    serde_json::from_str(text).map_err(|e| format!("{what}: invalid JSON at line {}, column {}: {e}", e.line(), e.column()))
}

fn object<'a>(v: &'a Value, path: &str) -> SchemaResult<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| format!("{path}: expected an object"))
}

fn array<'a>(v: &'a Value, path: &str) -> SchemaResult<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| format!("{path}: expected an array"))
}

pub fn uint(v: &Value, path: &str) -> SchemaResult<u32> {
    v.as_u64()
        .and_then(|n| u32::try_from(n).ok())
        .ok_or_else(|| format!("{path}: expected a nonnegative integer below 2^32"))
}

fn only_keys(m: &Map<String, Value>, allowed: &[&str], path: &str) -> SchemaResult<()> {
    match m.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(format!("{path}: unknown field \"{k}\" (allowed: {})", allowed.join(", "))),
        None => Ok(()),
    }
}

fn required<'a>(m: &'a Map<String, Value>, key: &str, path: &str) -> SchemaResult<&'a Value> {
    m.get(key).ok_or_else(|| format!("{path}: missing field \"{key}\""))
}

fn uint_list(v: &Value, path: &str) -> SchemaResult<Vec<u32>> {
    array(v, path)?.iter().enumerate().map(|(i, x)| uint(x, &format!("{path}[{i}]"))).collect()
}

pub struct LoadedClass {
    pub class: HypothesisClass,
    pub entry: Option<GalleryEntry>,
    pub warnings: Vec<String>,
}

enum Row {
    Table(Vec<Label>),
    Support(Vec<(Point, Label)>),
}

fn parse_row(v: &Value, path: &str) -> SchemaResult<Row> {
    if v.is_array() {
        return Ok(Row::Table(uint_list(v, path)?));
    }
    let m = object(v, path)?;
    only_keys(m, &["support"], path)?;
    let support = object(required(m, "support", path)?, &format!("{path}.support"))?;
    let mut entries = Vec::with_capacity(support.len());
    for (k, y) in support {
        let p = format!("{path}.support.{k}");
        let x: Point = k.parse().map_err(|_| format!("{p}: key is not a point"))?;
        entries.push((x, uint(y, &p)?));
    }
    Ok(Row::Support(entries))
}

pub fn parse_class(text: &str) -> SchemaResult<LoadedClass> {
    let doc = parse_json(text, "class file")?;
    let m = object(&doc, "class file")?;
    if let Some(name) = m.get("gallery") {
        only_keys(m, &["gallery", "params"], "class file")?;
        let name = name.as_str().ok_or("gallery: expected a string")?;
        let mut params = BTreeMap::new();
        if let Some(p) = m.get("params") {
            for (k, v) in object(p, "params")? {
                params.insert(k.clone(), uint(v, &format!("params.{k}"))?);
            }
        }
        let entry = lookup(name, &params).map_err(|e| format!("gallery: {e}"))?;
        return Ok(LoadedClass { class: entry.class.clone(), entry: Some(entry), warnings: Vec::new() });
    }
    only_keys(m, &["labels", "domain", "hypotheses"], "class file")?;
    let labels = uint(required(m, "labels", "class file")?, "labels")?;
    if labels == 0 {
        return Err("labels: alphabet must contain label 0".into());
    }
    let rows: Vec<Row> = array(required(m, "hypotheses", "class file")?, "hypotheses")?
        .iter()
        .enumerate()
        .map(|(i, r)| parse_row(r, &format!("hypotheses[{i}]")))
        .collect::<SchemaResult<_>>()?;
    let domain = match m.get("domain") {
        Some(Value::String(s)) if s == "nat" => Domain::Naturals,
        Some(v @ Value::Number(_)) => Domain::Finite(uint(v, "domain")?),
        Some(_) => return Err("domain: expected a size or \"nat\"".into()),
        None if rows.iter().all(|r| matches!(r, Row::Table(_))) => match rows.first() {
            Some(Row::Table(t)) => Domain::Finite(t.len() as u32),
            _ => Domain::Finite(0),
        },
        None => Domain::Naturals,
    };
    let mut hypotheses = Vec::with_capacity(rows.len());
    for (i, row) in rows.into_iter().enumerate() {
        let path = format!("hypotheses[{i}]");
        let entries: Vec<(Point, Label)> = match row {
            Row::Table(t) => {
                if let Domain::Finite(n) = domain {
                    if t.len() != n as usize {
                        return Err(format!("{path}: row has length {}, domain has {n} points", t.len()));
                    }
                }
                t.into_iter().enumerate().map(|(x, y)| (x as Point, y)).collect()
            }
            Row::Support(s) => s,
        };
        for &(x, y) in &entries {
            if y >= labels {
                return Err(format!("{path}: label {y} at point {x} is not below labels = {labels}"));
            }
            if let Domain::Finite(n) = domain {
                if x >= n {
                    return Err(format!("{path}: point {x} outside the domain of size {n}"));
                }
            }
        }
        hypotheses.push(Hypothesis::support(entries));
    }
    let (class, dups) = HypothesisClass::explicit_dedup(domain, labels, hypotheses).map_err(|e| format!("class file: {e}"))?;
    let warnings = dups
        .iter()
        .map(|(kept, dropped)| format!("hypothesis {dropped} duplicates hypothesis {kept} and was dropped"))
        .collect();
    Ok(LoadedClass { class, entry: None, warnings })
}

/// Canonical class document; [`parse_class`] reads it back unchanged.
pub fn class_document(class: &HypothesisClass) -> SchemaResult<Value> {
    let hs = class.hypotheses().ok_or("oracle classes have no document form")?;
    Ok(match class.domain() {
        Domain::Finite(n) => json!({
            "domain": n,
            "labels": class.labels(),
            "hypotheses": hs.iter().map(|h| h.project(&(0..n).collect::<Vec<_>>())).collect::<Vec<_>>(),
        }),
        Domain::Naturals => json!({
            "domain": "nat",
            "labels": class.labels(),
            "hypotheses": hs.iter().map(|h| {
                let support: Map<String, Value> =
                    h.nonzero_entries().into_iter().map(|(x, y)| (x.to_string(), json!(y))).collect();
                json!({ "support": support })
            }).collect::<Vec<_>>(),
        }),
    })
}

fn parse_psi_row(v: &Value, q: u32, path: &str) -> SchemaResult<PsiFunction> {
    let symbols: Vec<String> = match v {
        Value::String(s) => s.chars().map(String::from).collect(),
        Value::Array(a) => a
            .iter()
            .enumerate()
            .map(|(i, s)| s.as_str().map(String::from).ok_or_else(|| format!("{path}[{i}]: expected \"0\", \"1\" or \"*\"")))
            .collect::<SchemaResult<_>>()?,
        _ => return Err(format!("{path}: expected an array of symbols")),
    };
    if symbols.len() != q as usize {
        return Err(format!("{path}: {} symbols for {q} labels", symbols.len()));
    }
    let table = symbols
        .iter()
        .enumerate()
        .map(|(i, s)| PsiValue::from_symbol(s).ok_or_else(|| format!("{path}[{i}]: expected \"0\", \"1\" or \"*\"")))
        .collect::<SchemaResult<_>>()?;
    Ok(PsiFunction::new(table))
}

pub fn psi_from_value(doc: &Value, path: &str) -> SchemaResult<PsiFamily> {
    let m = object(doc, path)?;
    let q = uint(required(m, "labels", path)?, &format!("{path}.labels"))?;
    if q < 2 {
        return Err(format!("{path}.labels: need at least two labels"));
    }
    if let Some(b) = m.get("builtin") {
        only_keys(m, &["builtin", "labels"], path)?;
        return match b.as_str() {
            Some("psi_N") => Ok(make_psi_n(q - 1)),
            Some("psi_G") => Ok(make_psi_g(q - 1)),
            Some("pollard") => Ok(make_psi_pollard(q - 1)),
            _ => Err(format!("{path}.builtin: expected \"psi_N\", \"psi_G\" or \"pollard\"")),
        };
    }
    only_keys(m, &["labels", "family"], path)?;
    let rows = array(required(m, "family", path)?, &format!("{path}.family"))?;
    let members = rows
        .iter()
        .enumerate()
        .map(|(i, r)| parse_psi_row(r, q, &format!("{path}.family[{i}]")))
        .collect::<SchemaResult<_>>()?;
    PsiFamily::new(q, members).map_err(|e| format!("{path}: {e}"))
}

pub fn parse_psi(text: &str) -> SchemaResult<PsiFamily> {
    psi_from_value(&parse_json(text, "Ψ file")?, "Ψ file")
}

pub fn psi_document(family: &PsiFamily) -> Value {
    json!({
        "labels": family.labels(),
        "family": family.members().iter().map(|p| p.table().iter().map(|v| v.symbol()).collect::<String>()).collect::<Vec<_>>(),
    })
}

pub fn parse_flavor(name: &str, psi: Option<PsiFamily>) -> SchemaResult<Flavor> {
    match (name, psi) {
        ("natarajan", _) => Ok(Flavor::Natarajan),
        ("graph", _) => Ok(Flavor::Graph),
        ("psi", Some(f)) => Ok(Flavor::Psi(f)),
        ("psi", None) => Err("flavor psi needs a Ψ-family".into()),
        (other, _) => Err(format!("unknown flavor {other}; expected natarajan, graph or psi")),
    }
}

pub struct LoadedWitness {
    pub witness: Witness,
    pub bound: Option<Vec<Label>>,
}

type NatKey = (Vec<Point>, Vec<Label>, Vec<Label>);

struct NatarajanTable(HashMap<NatKey, IndexSet>);
struct GraphTable(HashMap<(Vec<Point>, Vec<Label>), IndexSet>);
struct PsiTable(HashMap<(Vec<Point>, Vec<usize>), Vec<bool>>, PsiFamily);

fn missing(points: &[Point]) -> dimkit::Error {
    dimkit::Error::Precondition(format!("witness table has no entry for points {points:?}"))
}

impl NatarajanRule for NatarajanTable {
    fn exclude(&self, points: &[Point], g1: &[Label], g2: &[Label]) -> dimkit::Result<IndexSet> {
        self.0.get(&(points.to_vec(), g1.to_vec(), g2.to_vec())).copied().ok_or_else(|| missing(points))
    }
}

impl GraphRule for GraphTable {
    fn exclude(&self, points: &[Point], f: &[Label]) -> dimkit::Result<IndexSet> {
        self.0.get(&(points.to_vec(), f.to_vec())).copied().ok_or_else(|| missing(points))
    }
}

impl PsiRule for PsiTable {
    fn exclude(&self, points: &[Point], psis: &[&PsiFunction]) -> dimkit::Result<Vec<bool>> {
        let members: Vec<usize> = psis
            .iter()
            .map(|p| self.1.members().iter().position(|m| m == *p).expect("family member"))
            .collect();
        self.0.get(&(points.to_vec(), members)).cloned().ok_or_else(|| missing(points))
    }
}

fn sort_perm(points: &[Point]) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..points.len()).collect();
    perm.sort_by_key(|&i| points[i]);
    perm
}

fn permuted<T: Clone>(v: &[T], perm: &[usize]) -> Vec<T> {
    perm.iter().map(|&i| v[i].clone()).collect()
}

fn index_set(v: &Value, arity: usize, perm: &[usize], path: &str) -> SchemaResult<IndexSet> {
    let idx = uint_list(v, path)?;
    if let Some(&i) = idx.iter().find(|&&i| i as usize >= arity) {
        return Err(format!("{path}: index {i} outside [0,{arity})"));
    }
    // position j of the sorted tuple came from perm[j]
    Ok(IndexSet::from_indices((0..arity).filter(|&j| idx.contains(&(perm[j] as u32)))))
}

fn table_witness(m: &Map<String, Value>, flavor: Flavor, order: usize) -> SchemaResult<Witness> {
    let entries = array(required(m, "entries", "witness")?, "witness.entries")?;
    let arity = order + 1;
    let tuple = |e: &Map<String, Value>, key: &str, path: &str| -> SchemaResult<Vec<u32>> {
        let v = uint_list(required(e, key, path)?, &format!("{path}.{key}"))?;
        if v.len() != arity {
            return Err(format!("{path}.{key}: expected {arity} entries"));
        }
        Ok(v)
    };
    Ok(match flavor {
        Flavor::Natarajan => {
            let mut map = HashMap::new();
            for (i, e) in entries.iter().enumerate() {
                let path = format!("witness.entries[{i}]");
                let e = object(e, &path)?;
                let points = tuple(e, "points", &path)?;
                let perm = sort_perm(&points);
                let key = (
                    permuted(&points, &perm),
                    permuted(&tuple(e, "g1", &path)?, &perm),
                    permuted(&tuple(e, "g2", &path)?, &perm),
                );
                map.insert(key, index_set(required(e, "index_set", &path)?, arity, &perm, &format!("{path}.index_set"))?);
            }
            Witness::natarajan(order, Provenance::User, Arc::new(NatarajanTable(map)))
        }
        Flavor::Graph => {
            let mut map = HashMap::new();
            for (i, e) in entries.iter().enumerate() {
                let path = format!("witness.entries[{i}]");
                let e = object(e, &path)?;
                let points = tuple(e, "points", &path)?;
                let perm = sort_perm(&points);
                let key = (permuted(&points, &perm), permuted(&tuple(e, "f", &path)?, &perm));
                map.insert(key, index_set(required(e, "index_set", &path)?, arity, &perm, &format!("{path}.index_set"))?);
            }
            Witness::graph(order, Provenance::User, Arc::new(GraphTable(map)))
        }
        Flavor::Psi(family) => {
            let mut map = HashMap::new();
            for (i, e) in entries.iter().enumerate() {
                let path = format!("witness.entries[{i}]");
                let e = object(e, &path)?;
                let points = tuple(e, "points", &path)?;
                let perm = sort_perm(&points);
                let members: Vec<usize> = tuple(e, "members", &path)?.into_iter().map(|x| x as usize).collect();
                if let Some(&x) = members.iter().find(|&&x| x >= family.len()) {
                    return Err(format!("{path}.members: no family member {x}"));
                }
                let bits: Vec<bool> = tuple(e, "bits", &path)?
                    .into_iter()
                    .map(|b| match b {
                        0 => Ok(false),
                        1 => Ok(true),
                        _ => Err(format!("{path}.bits: expected 0 or 1")),
                    })
                    .collect::<SchemaResult<_>>()?;
                map.insert((permuted(&points, &perm), permuted(&members, &perm)), permuted(&bits, &perm));
            }
            Witness::psi(family.clone(), order, Provenance::User, Arc::new(PsiTable(map, family)))
        }
    })
}

/// Witness descriptor:
/// `{"construction": "canonical", "flavor", "order", "window"?, "psi"?}`,
/// `{"construction": "bundled"}` for gallery classes, or
/// `{"construction": "table", "flavor", "order", "psi"?, "entries"}`.
/// Any of them may add `"label_bound": [c(0), c(1), …]`.
pub fn parse_witness(text: &str, class: &LoadedClass) -> SchemaResult<LoadedWitness> {
    let doc = parse_json(text, "witness file")?;
    let m = object(&doc, "witness")?;
    let bound = m.get("label_bound").map(|v| uint_list(v, "witness.label_bound")).transpose()?;
    let construction = required(m, "construction", "witness")?.as_str().ok_or("witness.construction: expected a string")?;
    let witness = match construction {
        "bundled" => {
            only_keys(m, &["construction", "label_bound"], "witness")?;
            class
                .entry
                .as_ref()
                .and_then(|e| e.witness.clone())
                .ok_or("witness: the class has no bundled witness")?
        }
        "canonical" | "table" => {
            let allowed: &[&str] = if construction == "canonical" {
                &["construction", "flavor", "order", "window", "psi", "label_bound"]
            } else {
                &["construction", "flavor", "order", "psi", "entries", "label_bound"]
            };
            only_keys(m, allowed, "witness")?;
            let psi = m.get("psi").map(|p| psi_from_value(p, "witness.psi")).transpose()?;
            let flavor_name = required(m, "flavor", "witness")?.as_str().ok_or("witness.flavor: expected a string")?;
            let flavor = parse_flavor(flavor_name, psi)?;
            let order = uint(required(m, "order", "witness")?, "witness.order")? as usize;
            if construction == "canonical" {
                let window = m.get("window").map(|w| uint(w, "witness.window")).transpose()?;
                canonical_witness(&class.class, &flavor, order, window).map_err(|e| format!("witness: {e}"))?
            } else {
                table_witness(m, flavor, order)?
            }
        }
        other => return Err(format!("witness.construction: unknown construction {other}")),
    };
    Ok(LoadedWitness { witness, bound })
}

pub fn parse_sample(text: &str) -> SchemaResult<LabeledSample> {
    let doc = parse_json(text, "sample file")?;
    let pairs = match &doc {
        Value::Object(m) => {
            only_keys(m, &["pairs"], "sample file")?;
            required(m, "pairs", "sample file")?
        }
        v => v,
    };
    let pairs = array(pairs, "pairs")?
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let v = uint_list(p, &format!("pairs[{i}]"))?;
            match v[..] {
                [x, y] => Ok((x, y)),
                _ => Err(format!("pairs[{i}]: expected [point, label]")),
            }
        })
        .collect::<SchemaResult<_>>()?;
    Ok(LabeledSample::new(pairs))
}

/// Comma-separated nonnegative integers.
pub fn parse_list(text: &str, what: &str) -> SchemaResult<Vec<u32>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|_| format!("{what}: \"{t}\" is not a nonnegative integer")))
        .collect()
}
