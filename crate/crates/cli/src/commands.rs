use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use serde_json::{json, Map, Value};

use dimkit::combinatorics::{subsets_of_size, Odometer};
use dimkit::dimensions::{natarajan_behavior_bound, sauer_natarajan_check, ShatterEvidence};
use dimkit::embedding::{agnostic_learner, candidate_space, erm_augmented, good_patterns, GoodFunctionSpec};
use dimkit::gallery::{lookup, Source, NAMES};
use dimkit::nfl::{nfl_adversary, ConstantLearner, ErmLearner, MemorizerLearner};
use dimkit::psi::{is_distinguisher, refute_ds_expressibility, RefutationVerdict};
use dimkit::witnesses::{
    canonical_witness, validate_witness, witness_from_learner as extract, ViolationKind, WitnessInput,
};
use dimkit::{
    exact_dimension, Domain, DimensionKind, Flavor, Hypothesis, HypothesisClass, Label, LabeledSample, Learner,
    Point, PsiFamily, Rational, ShatterCertificate, Witness,
};

use crate::files::{
    class_document, parse_class, parse_flavor, parse_list, parse_psi, parse_sample, parse_witness, psi_document,
    LoadedClass,
};
use crate::report::{big_int, rational, InputDigest, Report};

pub enum Outcome {
    Report { report: Report, negative: bool },
    Raw(String),
}

fn ok(report: Report) -> Result<Outcome, String> {
    Ok(Outcome::Report { report, negative: false })
}

fn verdict(report: Report, negative: bool) -> Result<Outcome, String> {
    Ok(Outcome::Report { report, negative })
}

fn lib(e: dimkit::Error) -> String {
    e.to_string()
}

fn read(path: &Path, name: &str, digest: &mut InputDigest) -> Result<String, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    digest.file(name, text.as_bytes());
    Ok(text)
}

fn load_class(path: &Path, digest: &mut InputDigest) -> Result<LoadedClass, String> {
    let text = read(path, "class", digest)?;
    parse_class(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_psi(path: &Path, digest: &mut InputDigest) -> Result<PsiFamily, String> {
    let text = read(path, "psi", digest)?;
    parse_psi(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn big_uint(n: &BigUint) -> Value {
    big_int(&BigInt::from(n.clone()))
}

fn hypothesis_json(h: &Hypothesis) -> Value {
    let support: Map<String, Value> = h.nonzero_entries().into_iter().map(|(x, y)| (x.to_string(), json!(y))).collect();
    json!({ "support": support })
}

fn certificate_json(c: &ShatterCertificate) -> Value {
    let evidence = match &c.evidence {
        ShatterEvidence::Vc => json!({ "type": "vc" }),
        ShatterEvidence::Natarajan { g1, g2 } => json!({ "type": "natarajan", "g1": g1, "g2": g2 }),
        ShatterEvidence::Graph { f } => json!({ "type": "graph", "f": f }),
        ShatterEvidence::Ds { cube } => json!({ "type": "ds", "cube": cube }),
        ShatterEvidence::Psi { members } => json!({ "type": "psi", "members": members }),
    };
    json!({ "points": c.points, "evidence": evidence })
}

fn parse_kind(name: &str, psi: Option<PsiFamily>) -> Result<DimensionKind, String> {
    match (name, psi) {
        ("vc", _) => Ok(DimensionKind::Vc),
        ("natarajan", _) => Ok(DimensionKind::Natarajan),
        ("graph", _) => Ok(DimensionKind::Graph),
        ("ds", _) => Ok(DimensionKind::Ds),
        ("psi", Some(f)) => Ok(DimensionKind::Psi(f)),
        ("psi", None) => Err("--kind psi needs --psi".into()),
        (other, _) => Err(format!("unknown kind {other}; expected vc, natarajan, graph, ds or psi")),
    }
}

fn opt_arg<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "none".into(), |x| x.to_string())
}

pub fn dim(class: &Path, kind: &str, psi: Option<&Path>, window: Option<u32>) -> Result<Outcome, String> {
    let mut d = InputDigest::new("dim");
    let loaded = load_class(class, &mut d)?;
    let family = psi.map(|p| load_psi(p, &mut d)).transpose()?;
    d.arg("kind", kind);
    d.arg("window", opt_arg(window));
    let kind = parse_kind(kind, family)?;
    let r = exact_dimension(&loaded.class, &kind, window).map_err(lib)?;
    let result = json!({ "kind": kind.name(), "dimension": r.dimension, "window": r.window });
    let certificates = r.certificate.iter().map(certificate_json).collect();
    ok(Report::new("dim", d, result)
        .with_certificates(certificates)
        .with_warnings(loaded.warnings)
        .with_warnings(r.warnings))
}

pub struct WitnessArgs {
    pub class: PathBuf,
    pub witness: Option<PathBuf>,
    pub flavor: Option<String>,
    pub order: Option<usize>,
    pub psi: Option<PathBuf>,
    pub window: Option<u32>,
}

/// Largest point to enumerate: the explicit window, the finite domain, or
/// the support of an explicit class over ℕ.
fn default_window(class: &HypothesisClass, window: Option<u32>) -> Result<Point, String> {
    if let Some(w) = window {
        return Ok(w);
    }
    match class.domain() {
        Domain::Finite(0) => Err("empty domain".into()),
        Domain::Finite(n) => Ok(n - 1),
        Domain::Naturals => class.max_support().ok_or_else(|| "class over ℕ needs --window".to_string()),
    }
}

struct BuiltWitness {
    loaded: LoadedClass,
    witness: Witness,
    window: Point,
    digest: InputDigest,
}

fn build_witness(command: &str, a: &WitnessArgs) -> Result<BuiltWitness, String> {
    let mut d = InputDigest::new(command);
    let loaded = load_class(&a.class, &mut d)?;
    let family = a.psi.as_deref().map(|p| load_psi(p, &mut d)).transpose()?;
    let window = default_window(&loaded.class, a.window)?;
    d.arg("window", window);
    let witness = match &a.witness {
        Some(path) => {
            let text = read(path, "witness", &mut d)?;
            parse_witness(&text, &loaded).map_err(|e| format!("{}: {e}", path.display()))?.witness
        }
        None => {
            let flavor = a.flavor.as_deref().ok_or("give --witness or --flavor with --order")?;
            let order = a.order.ok_or("--order is required with --flavor")?;
            d.arg("flavor", flavor);
            d.arg("order", order);
            let flavor = parse_flavor(flavor, family)?;
            canonical_witness(&loaded.class, &flavor, order, Some(window)).map_err(lib)?
        }
    };
    Ok(BuiltWitness { loaded, witness, window, digest: d })
}

fn witness_summary(w: &Witness, window: Point) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("flavor".into(), json!(w.flavor().name()));
    m.insert("order".into(), json!(w.order()));
    m.insert("provenance".into(), json!(w.provenance().name()));
    m.insert("window".into(), json!(window));
    m
}

const TABLE_BUDGET: u64 = 200_000;

/// Every witness input on the window, in enumeration order.
fn all_inputs(w: &Witness, labels: u32, window: Point) -> Result<Vec<(Vec<Point>, WitnessInput)>, String> {
    let k1 = w.order() + 1;
    let points: Vec<Point> = (0..=window).collect();
    let q = labels as usize;
    let per_subset: Vec<WitnessInput> = match w.flavor() {
        Flavor::Natarajan => Odometer::uniform(k1, q)
            .flat_map(|g1| {
                Odometer::uniform(k1, q - 1).map(move |off| {
                    let g2 = g1.iter().zip(&off).map(|(&a, &o)| if o < a { o } else { o + 1 } as Label).collect();
                    WitnessInput::Natarajan { g1: g1.iter().map(|&v| v as Label).collect(), g2 }
                })
            })
            .collect(),
        Flavor::Graph => Odometer::uniform(k1, q)
            .map(|f| WitnessInput::Graph { f: f.into_iter().map(|v| v as Label).collect() })
            .collect(),
        Flavor::Psi(family) => Odometer::uniform(k1, family.len()).map(|members| WitnessInput::Psi { members }).collect(),
    };
    let subsets = subsets_of_size(&points, k1);
    if (subsets.len() as u64).saturating_mul(per_subset.len() as u64) > TABLE_BUDGET {
        return Err(format!("more than {TABLE_BUDGET} witness inputs; narrow the window"));
    }
    Ok(subsets
        .into_iter()
        .flat_map(|s| per_subset.iter().map(move |i| (s.clone(), i.clone())))
        .collect())
}

fn indices(set: dimkit::IndexSet) -> Value {
    json!(set.indices())
}

pub fn witness_make(a: &WitnessArgs) -> Result<Outcome, String> {
    let BuiltWitness { loaded, witness, window, digest } = build_witness("witness make", a)?;
    let mut entries = Vec::new();
    for (points, input) in all_inputs(&witness, loaded.class.labels(), window)? {
        let out = match &input {
            WitnessInput::Natarajan { g1, g2 } => witness
                .eval_natarajan(&points, g1, g2)
                .map(|s| json!({ "points": points, "g1": g1, "g2": g2, "index_set": indices(s) })),
            WitnessInput::Graph { f } => {
                witness.eval_graph(&points, f).map(|s| json!({ "points": points, "f": f, "index_set": indices(s) }))
            }
            WitnessInput::Psi { members } => witness.eval_psi(&points, members).map(|bits| {
                let bits: Vec<u8> = bits.into_iter().map(u8::from).collect();
                json!({ "points": points, "members": members, "bits": bits })
            }),
        };
        match out {
            Ok(e) => entries.push(e),
            Err(e @ dimkit::Error::Shattered { .. }) => {
                let result = json!({ "made": false, "error": e.to_string() });
                let cert = json!({ "shattered": points, "input": input_json(&input) });
                return verdict(Report::new("witness make", digest, result).with_certificates(vec![cert]), true);
            }
            Err(e) => return Err(lib(e)),
        }
    }
    let mut result = Map::new();
    result.insert("construction".into(), json!("table"));
    result.insert("flavor".into(), json!(witness.flavor().name()));
    result.insert("order".into(), json!(witness.order()));
    if let Flavor::Psi(f) = witness.flavor() {
        result.insert("psi".into(), psi_document(&f));
    }
    result.insert("entries".into(), Value::Array(entries));
    let summary = Value::Object(witness_summary(&witness, window));
    ok(Report::new("witness make", digest, Value::Object(result))
        .with_certificates(vec![summary])
        .with_warnings(loaded.warnings))
}

fn input_json(input: &WitnessInput) -> Value {
    match input {
        WitnessInput::Natarajan { g1, g2 } => json!({ "g1": g1, "g2": g2 }),
        WitnessInput::Graph { f } => json!({ "f": f }),
        WitnessInput::Psi { members } => json!({ "members": members }),
    }
}

/// Summary fields, violation certificates and the verdict.
type Validation = (Map<String, Value>, Vec<Value>, bool);

fn validation(w: &Witness, class: &HypothesisClass, window: Point) -> Result<Validation, String> {
    let r = validate_witness(w, class, window).map_err(lib)?;
    let mut m = witness_summary(w, window);
    m.insert("valid".into(), json!(r.valid));
    m.insert("checked_inputs".into(), json!(r.checked_inputs));
    m.insert("violation_count".into(), json!(r.violation_count));
    let certs = r
        .violations
        .iter()
        .map(|v| {
            let (kind, detail) = match &v.kind {
                ViolationKind::Realized(p) => ("realized", json!(p)),
                ViolationKind::Evaluator(e @ dimkit::Error::Shattered { .. }) => ("shattered", json!(e.to_string())),
                ViolationKind::Evaluator(e) => ("evaluator", json!(e.to_string())),
            };
            json!({ "points": v.points, "input": input_json(&v.input), "violation": kind, "detail": detail })
        })
        .collect();
    Ok((m, certs, r.valid))
}

pub fn witness_check(a: &WitnessArgs) -> Result<Outcome, String> {
    let BuiltWitness { loaded, witness, window, digest } = build_witness("witness check", a)?;
    let (result, certs, valid) = validation(&witness, &loaded.class, window)?;
    verdict(
        Report::new("witness check", digest, Value::Object(result))
            .with_certificates(certs)
            .with_warnings(loaded.warnings),
        !valid,
    )
}

struct BuiltLearner {
    learner: Arc<dyn Learner>,
    class: Option<HypothesisClass>,
    warnings: Vec<String>,
}

/// `const:V`, `memo:V`, `erm:CLASS` or `embed:CLASS:K`.
fn parse_learner(spec: &str, window: Point, digest: &mut InputDigest) -> Result<BuiltLearner, String> {
    digest.arg("learner", spec);
    let (kind, rest) = spec.split_once(':').ok_or("learner must look like const:V, memo:V, erm:FILE or embed:FILE:K")?;
    let label = || rest.parse::<Label>().map_err(|_| format!("learner {kind}: \"{rest}\" is not a label"));
    match kind {
        "const" => Ok(BuiltLearner { learner: Arc::new(ConstantLearner::new(label()?, window)), class: None, warnings: vec![] }),
        "memo" => Ok(BuiltLearner { learner: Arc::new(MemorizerLearner::new(label()?, window)), class: None, warnings: vec![] }),
        "erm" => {
            let loaded = load_class(Path::new(rest), digest)?;
            let erm = ErmLearner::new(loaded.class.clone()).map_err(lib)?;
            Ok(BuiltLearner { learner: Arc::new(erm), class: Some(loaded.class), warnings: loaded.warnings })
        }
        "embed" => {
            let (path, k) = rest.rsplit_once(':').ok_or("embed learner needs embed:FILE:K")?;
            let k: usize = k.parse().map_err(|_| format!("embed learner: \"{k}\" is not an order"))?;
            let loaded = load_class(Path::new(path), digest)?;
            let w = canonical_witness(&loaded.class, &Flavor::Natarajan, k, None).map_err(lib)?;
            let spec = GoodFunctionSpec::new(w, loaded.class.labels()).map_err(lib)?;
            Ok(BuiltLearner { learner: Arc::new(agnostic_learner(spec)), class: Some(loaded.class), warnings: loaded.warnings })
        }
        other => Err(format!("unknown learner {other}")),
    }
}

pub fn witness_from_learner(learner: &str, m: usize, class: Option<&Path>, window: Option<u32>) -> Result<Outcome, String> {
    let mut d = InputDigest::new("witness from-learner");
    let window = window.unwrap_or((2 * m).saturating_sub(1) as u32);
    d.arg("m", m);
    d.arg("window", window);
    let built = parse_learner(learner, window, &mut d)?;
    let mut warnings = built.warnings;
    let check = match class {
        Some(p) => {
            let loaded = load_class(p, &mut d)?;
            warnings.extend(loaded.warnings);
            loaded.class
        }
        None => built.class.ok_or("non-ERM learners need --class to validate against")?,
    };
    let w = extract(built.learner.clone(), m, Some(check.clone()), window).map_err(lib)?;
    let (mut result, certs, valid) = validation(&w, &check, window)?;
    result.insert("learner".into(), json!(built.learner.name()));
    result.insert("m".into(), json!(m));
    verdict(Report::new("witness from-learner", d, Value::Object(result)).with_certificates(certs).with_warnings(warnings), !valid)
}

pub fn nfl(learner: &str, points: &str, g1: &str, g2: &str) -> Result<Outcome, String> {
    let mut d = InputDigest::new("nfl");
    let points = parse_list(points, "--points")?;
    let g1 = parse_list(g1, "--g1")?;
    let g2 = parse_list(g2, "--g2")?;
    d.arg("points", format!("{points:?}"));
    d.arg("g1", format!("{g1:?}"));
    d.arg("g2", format!("{g2:?}"));
    let window = points.iter().copied().max().ok_or("--points is empty")?;
    let built = parse_learner(learner, window, &mut d)?;
    let r = nfl_adversary(built.learner.as_ref(), &points, &g1, &g2).map_err(lib)?;
    let distribution: Vec<Value> = r
        .distribution
        .atoms()
        .iter()
        .map(|((x, y), w)| json!({ "point": x, "label": y, "weight": rational(w) }))
        .collect();
    let result = json!({
        "learner": built.learner.name(),
        "points": r.f.points,
        "f": r.f.values,
        "index_set": indices(r.index_set),
        "expected_risk": rational(&r.expected_risk),
        "tail_probability": rational(&r.tail_probability),
        "tail_meets_bound": r.tail_meets_bound,
        "mixtures_examined": r.mixtures_examined,
        "distribution": distribution,
    });
    ok(Report::new("nfl", d, result).with_warnings(built.warnings))
}

struct Embedding {
    loaded: LoadedClass,
    spec: GoodFunctionSpec,
}

/// The base is read over ℕ, zero-padded past a finite domain.
fn load_embedding(class: &Path, witness: &Path, d: &mut InputDigest) -> Result<Embedding, String> {
    let mut loaded = load_class(class, d)?;
    if let Domain::Finite(_) = loaded.class.domain() {
        loaded.class = loaded.class.zero_padded().map_err(lib)?;
    }
    let text = read(witness, "witness", d)?;
    let w = parse_witness(&text, &loaded).map_err(|e| format!("{}: {e}", witness.display()))?;
    let labels = loaded.class.labels();
    let spec = match w.bound {
        Some(c) => GoodFunctionSpec::with_bound(w.witness, labels, c),
        None => GoodFunctionSpec::new(w.witness, labels),
    }
    .map_err(lib)?;
    Ok(Embedding { loaded, spec })
}

pub fn embed_behaviors(class: &Path, witness: &Path, points: &str) -> Result<Outcome, String> {
    let mut d = InputDigest::new("embed behaviors");
    let e = load_embedding(class, witness, &mut d)?;
    let points = parse_list(points, "--points")?;
    d.arg("points", format!("{points:?}"));
    let top = points.iter().copied().max().ok_or("--points is empty")?;
    let v = good_patterns(&e.spec, &points).map_err(lib)?;
    let contains_base = e.loaded.class.restrict(&points).map_err(lib)?.patterns.iter().all(|p| v.contains(p));
    let k1 = e.spec.order() as u32 + 1;
    let bound = natarajan_behavior_bound(top as usize + 1, e.spec.alphabet(top).map_err(lib)?, k1);
    let within = BigUint::from(v.len()) <= bound;
    let result = json!({
        "points": points,
        "patterns": v.patterns,
        "count": v.len(),
        "candidates": big_uint(&candidate_space(&e.spec, top).map_err(lib)?),
        "contains_base": contains_base,
        "bound": big_uint(&bound),
        "within_bound": within,
    });
    verdict(Report::new("embed behaviors", d, result).with_warnings(e.loaded.warnings), !(contains_base && within))
}

fn load_sample(path: &Path, name: &str, d: &mut InputDigest) -> Result<LabeledSample, String> {
    let text = read(path, name, d)?;
    parse_sample(&text).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn embed_erm(class: &Path, witness: &Path, sample: &Path) -> Result<Outcome, String> {
    let mut d = InputDigest::new("embed erm");
    let e = load_embedding(class, witness, &mut d)?;
    let s = load_sample(sample, "sample", &mut d)?;
    let (h, risk) = erm_augmented(&e.spec, &s).map_err(lib)?;
    let pts = s.distinct_points();
    let result = json!({
        "hypothesis": hypothesis_json(&h),
        "points": pts,
        "pattern": h.project(&pts),
        "risk": rational(&risk),
    });
    ok(Report::new("embed erm", d, result).with_warnings(e.loaded.warnings))
}

pub fn embed_learn(class: &Path, witness: &Path, sample: &Path, eval: Option<&Path>) -> Result<Outcome, String> {
    let mut d = InputDigest::new("embed learn");
    let e = load_embedding(class, witness, &mut d)?;
    let s = load_sample(sample, "sample", &mut d)?;
    let learner = agnostic_learner(e.spec.clone());
    let h = learner.learn(&s).map_err(lib)?;
    let mut result = Map::new();
    result.insert("learner".into(), json!(learner.name()));
    result.insert("hypothesis".into(), hypothesis_json(&h));
    let train: Rational = dimkit::model::empirical_risk(&h, &s).map_err(lib)?;
    result.insert("training_risk".into(), rational(&train));
    if let Some(p) = eval {
        let t = load_sample(p, "eval", &mut d)?;
        let r: Rational = dimkit::model::empirical_risk(&h, &t).map_err(lib)?;
        result.insert("eval_risk".into(), rational(&r));
    }
    ok(Report::new("embed learn", d, Value::Object(result)).with_warnings(e.loaded.warnings))
}

pub fn distinguisher(psi: &Path) -> Result<Outcome, String> {
    let mut d = InputDigest::new("distinguisher");
    let family = load_psi(psi, &mut d)?;
    let c = is_distinguisher(&family);
    let result = json!({
        "distinguisher": c.distinguisher,
        "failing_pair": c.failing_pair.map(|(a, b)| vec![a, b]),
        "members": family.len(),
        "labels": family.labels(),
    });
    verdict(Report::new("distinguisher", d, result), !c.distinguisher)
}

pub fn refute_ds(class: &Path) -> Result<Outcome, String> {
    let mut d = InputDigest::new("refute-ds");
    let loaded = load_class(class, &mut d)?;
    let r = refute_ds_expressibility(&loaded.class).map_err(lib)?;
    let subclasses: Vec<Value> = r
        .subclasses
        .iter()
        .zip(&r.subclass_hits)
        .map(|(s, hits)| json!({ "patterns": s, "hits": hits }))
        .collect();
    let result = json!({
        "verdict": r.verdict.as_str(),
        "pairs_examined": r.pairs_examined,
        "shattering_pairs": r.shattering.len(),
        "subclasses": subclasses,
    });
    let symbols = |p: &dimkit::psi::PsiFunction| p.table().iter().map(|v| v.symbol()).collect::<String>();
    // one shattering pair per subclass, plus any pair that escapes them all
    let mut certificates = Vec::new();
    for (i, s) in r.subclasses.iter().enumerate() {
        if let Some(p) = r.shattering.iter().find(|p| p.subclasses.contains(&i)) {
            certificates.push(json!({ "subclass": s, "psi1": symbols(&p.psi1), "psi2": symbols(&p.psi2) }));
        }
    }
    for p in r.shattering.iter().filter(|p| p.subclasses.is_empty()).take(16) {
        certificates.push(json!({ "escapes": true, "psi1": symbols(&p.psi1), "psi2": symbols(&p.psi2) }));
    }
    verdict(
        Report::new("refute-ds", d, result).with_certificates(certificates).with_warnings(loaded.warnings),
        r.verdict != RefutationVerdict::Refuted,
    )
}

pub fn sauer(class: &Path, points: &str, dim: u32) -> Result<Outcome, String> {
    let mut d = InputDigest::new("sauer");
    let loaded = load_class(class, &mut d)?;
    let points = parse_list(points, "--points")?;
    d.arg("points", format!("{points:?}"));
    d.arg("d", dim);
    let r = sauer_natarajan_check(&loaded.class, &points, dim).map_err(lib)?;
    let result = json!({ "points": points, "d": dim, "count": r.count, "bound": big_uint(&r.bound), "holds": r.holds });
    verdict(Report::new("sauer", d, result).with_warnings(loaded.warnings), !r.holds)
}

pub fn gallery_list() -> Result<Outcome, String> {
    let params = |n: &str| -> Vec<&str> {
        match n {
            "full" => vec!["n", "max_label"],
            "gap" => vec!["m"],
            "failing_psi" => vec!["window"],
            _ => vec![],
        }
    };
    let entries: Vec<Value> = NAMES.iter().map(|n| json!({ "name": n, "params": params(n) })).collect();
    ok(Report::new("gallery list", InputDigest::new("gallery list"), json!({ "entries": entries })))
}

pub fn gallery_emit(name: &str, raw_params: &[String], raw: bool) -> Result<Outcome, String> {
    let mut d = InputDigest::new("gallery emit");
    d.arg("name", name);
    let mut params = BTreeMap::new();
    for p in raw_params {
        let (k, v) = p.split_once('=').ok_or_else(|| format!("--param {p}: expected key=value"))?;
        let v: u32 = v.parse().map_err(|_| format!("--param {p}: value is not a nonnegative integer"))?;
        params.insert(k.to_string(), v);
    }
    for (k, v) in &params {
        d.arg(k, v);
    }
    let entry = lookup(name, &params).map_err(lib)?;
    let doc = class_document(&entry.class)?;
    if raw {
        let mut s = serde_json::to_string_pretty(&doc).expect("documents serialize");
        s.push('\n');
        return Ok(Outcome::Raw(s));
    }
    let dims: Vec<Value> = entry
        .expected_dims
        .iter()
        .map(|e| {
            let source = match e.source {
                Source::Theorem => "theorem",
                Source::Computation => "computation",
            };
            json!({ "kind": e.kind.name(), "value": e.value, "source": source })
        })
        .collect();
    let witness = entry.witness.as_ref().map(|w| json!({ "flavor": w.flavor().name(), "order": w.order(), "provenance": w.provenance().name() }));
    let result = json!({ "name": entry.name, "class": doc, "expected_dims": dims, "witness": witness });
    ok(Report::new("gallery emit", d, result))
}
