//! Witness functions for the computable Natarajan, graph and Ψ dimensions.
//!
//! An order-`k` witness takes `k+1` points plus flavor-specific labelings and
//! names a pattern no hypothesis in the class realizes there. A [`Witness`]
//! wraps a rule object; [`validate_witness`] checks the exclusion property
//! exhaustively on a window.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::combinatorics::{subsets_of_size, Odometer};
use crate::embedding::{good_patterns, GoodFunctionSpec};
use crate::error::{Error, Result};
use crate::model::{build_mixture, componentwise_distinct, HypothesisClass, IndexSet, Label, Labeling, Pattern, Point};
use crate::nfl::{nfl_adversary, Learner};
use crate::psi::{apply_tuple, PsiFamily, PsiFunction};

/// Natarajan rule: given points and componentwise-distinct `g1`, `g2`,
/// return `I` such that `f_{I,g1,g2}` is not realized.
pub trait NatarajanRule: Send + Sync {
    fn exclude(&self, points: &[Point], g1: &[Label], g2: &[Label]) -> Result<IndexSet>;
}

/// Graph rule: given points and `f`, return `I` such that no hypothesis
/// agrees with `f` exactly on `I`.
pub trait GraphRule: Send + Sync {
    fn exclude(&self, points: &[Point], f: &[Label]) -> Result<IndexSet>;
}

/// Ψ rule: given points and `ψ̄`, return a binary pattern outside `ψ̄(H|_X)`.
pub trait PsiRule: Send + Sync {
    fn exclude(&self, points: &[Point], psis: &[&PsiFunction]) -> Result<Vec<bool>>;
}

impl<F> NatarajanRule for F
where
    F: Fn(&[Point], &[Label], &[Label]) -> Result<IndexSet> + Send + Sync,
{
    fn exclude(&self, points: &[Point], g1: &[Label], g2: &[Label]) -> Result<IndexSet> {
        self(points, g1, g2)
    }
}

impl<F> GraphRule for F
where
    F: Fn(&[Point], &[Label]) -> Result<IndexSet> + Send + Sync,
{
    fn exclude(&self, points: &[Point], f: &[Label]) -> Result<IndexSet> {
        self(points, f)
    }
}

impl<F> PsiRule for F
where
    F: Fn(&[Point], &[&PsiFunction]) -> Result<Vec<bool>> + Send + Sync,
{
    fn exclude(&self, points: &[Point], psis: &[&PsiFunction]) -> Result<Vec<bool>> {
        self(points, psis)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Flavor {
    Natarajan,
    Graph,
    Psi(PsiFamily),
}

impl Flavor {
    pub fn name(&self) -> &'static str {
        match self {
            Flavor::Natarajan => "natarajan",
            Flavor::Graph => "graph",
            Flavor::Psi(_) => "psi",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Canonical,
    FromLearner,
    FromCounting,
    AppendixGap,
    FailingPsi,
    User,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::Canonical => "canonical",
            Provenance::FromLearner => "from_learner",
            Provenance::FromCounting => "from_counting",
            Provenance::AppendixGap => "appendix_gap",
            Provenance::FailingPsi => "failing_psi",
            Provenance::User => "user",
        }
    }
}

#[derive(Clone)]
enum Rule {
    Natarajan(Arc<dyn NatarajanRule>),
    Graph(Arc<dyn GraphRule>),
    Psi(PsiFamily, Arc<dyn PsiRule>),
}

/// Order-`k` witness with its rule and provenance.
#[derive(Clone)]
pub struct Witness {
    order: usize,
    provenance: Provenance,
    rule: Rule,
}

impl fmt::Debug for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Witness")
            .field("flavor", &self.flavor().name())
            .field("order", &self.order)
            .field("provenance", &self.provenance)
            .finish()
    }
}

/// Sort points ascending; `perm[j]` is the caller position of sorted slot `j`.
fn canonical_order(points: &[Point]) -> Result<(Vec<Point>, Vec<usize>)> {
    crate::model::check_distinct(points)?;
    let mut perm: Vec<usize> = (0..points.len()).collect();
    perm.sort_by_key(|&i| points[i]);
    Ok((perm.iter().map(|&i| points[i]).collect(), perm))
}

fn permute<T: Clone>(values: &[T], perm: &[usize]) -> Vec<T> {
    perm.iter().map(|&i| values[i].clone()).collect()
}

fn unpermute_set(set: IndexSet, perm: &[usize]) -> IndexSet {
    IndexSet::from_indices(set.indices().into_iter().map(|j| perm[j]))
}

impl Witness {
    pub fn natarajan(order: usize, provenance: Provenance, rule: Arc<dyn NatarajanRule>) -> Self {
        Witness { order, provenance, rule: Rule::Natarajan(rule) }
    }

    pub fn graph(order: usize, provenance: Provenance, rule: Arc<dyn GraphRule>) -> Self {
        Witness { order, provenance, rule: Rule::Graph(rule) }
    }

    pub fn psi(family: PsiFamily, order: usize, provenance: Provenance, rule: Arc<dyn PsiRule>) -> Self {
        Witness { order, provenance, rule: Rule::Psi(family, rule) }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of points an input carries.
    pub fn arity(&self) -> usize {
        self.order + 1
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn flavor(&self) -> Flavor {
        match &self.rule {
            Rule::Natarajan(_) => Flavor::Natarajan,
            Rule::Graph(_) => Flavor::Graph,
            Rule::Psi(f, _) => Flavor::Psi(f.clone()),
        }
    }

    fn check_arity(&self, got: usize) -> Result<()> {
        if got != self.arity() {
            return Err(Error::Arity { expected: self.arity(), got });
        }
        Ok(())
    }

    /// Evaluate a Natarajan witness. Points may come in any order; `I`
    /// refers to the caller's positions.
    pub fn eval_natarajan(&self, points: &[Point], g1: &[Label], g2: &[Label]) -> Result<IndexSet> {
        let Rule::Natarajan(rule) = &self.rule else {
            return Err(Error::precondition("not a Natarajan witness"));
        };
        self.check_arity(points.len())?;
        self.check_arity(g1.len())?;
        self.check_arity(g2.len())?;
        if !componentwise_distinct(g1, g2) {
            return Err(Error::precondition("labelings must differ at every coordinate"));
        }
        let (sorted, perm) = canonical_order(points)?;
        let set = rule.exclude(&sorted, &permute(g1, &perm), &permute(g2, &perm))?;
        if !set.fits(self.arity()) {
            return Err(Error::Internal("witness returned an index outside its arity".into()));
        }
        Ok(unpermute_set(set, &perm))
    }

    pub fn eval_graph(&self, points: &[Point], f: &[Label]) -> Result<IndexSet> {
        let Rule::Graph(rule) = &self.rule else {
            return Err(Error::precondition("not a graph witness"));
        };
        self.check_arity(points.len())?;
        self.check_arity(f.len())?;
        let (sorted, perm) = canonical_order(points)?;
        let set = rule.exclude(&sorted, &permute(f, &perm))?;
        if !set.fits(self.arity()) {
            return Err(Error::Internal("witness returned an index outside its arity".into()));
        }
        Ok(unpermute_set(set, &perm))
    }

    /// Evaluate a Ψ witness; `members` index into the family.
    pub fn eval_psi(&self, points: &[Point], members: &[usize]) -> Result<Vec<bool>> {
        let Rule::Psi(family, rule) = &self.rule else {
            return Err(Error::precondition("not a Ψ witness"));
        };
        self.check_arity(points.len())?;
        self.check_arity(members.len())?;
        if let Some(&m) = members.iter().find(|&&m| m >= family.len()) {
            return Err(Error::precondition(format!("no family member {m}")));
        }
        let (sorted, perm) = canonical_order(points)?;
        let psis = family.select(&permute(members, &perm));
        let out = rule.exclude(&sorted, &psis)?;
        if out.len() != self.arity() {
            return Err(Error::Arity { expected: self.arity(), got: out.len() });
        }
        let mut back = vec![false; out.len()];
        for (j, &i) in perm.iter().enumerate() {
            back[i] = out[j];
        }
        Ok(back)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessInput {
    Natarajan { g1: Pattern, g2: Pattern },
    Graph { f: Pattern },
    Psi { members: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// The excluded labeling (or a pattern mapping to the excluded bits) is
    /// realized by the class.
    Realized(Pattern),
    /// The evaluator failed, e.g. because the input is shattered.
    Evaluator(Error),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub points: Vec<Point>,
    pub input: WitnessInput,
    pub kind: ViolationKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    pub checked_inputs: u64,
    pub violation_count: u64,
    /// The first violations found, at most [`WitnessReport::KEPT`].
    pub violations: Vec<Violation>,
    pub valid: bool,
}

impl WitnessReport {
    pub const KEPT: usize = 64;
}

struct Tally {
    checked: u64,
    count: u64,
    kept: Vec<Violation>,
}

impl Tally {
    fn new() -> Self {
        Tally { checked: 0, count: 0, kept: Vec::new() }
    }

    fn record(&mut self, v: Violation) {
        self.count += 1;
        if self.kept.len() < WitnessReport::KEPT {
            self.kept.push(v);
        }
    }
}

fn check_points(witness: &Witness, class: &HypothesisClass, points: &[Point]) -> Result<Tally> {
    let b = class.restrict(points)?;
    let q = class.labels();
    let k1 = witness.arity();
    let mut t = Tally::new();
    match &witness.rule {
        Rule::Natarajan(_) => {
            for g1 in Odometer::uniform(k1, q as usize) {
                let g1: Pattern = g1.into_iter().map(|y| y as Label).collect();
                // g2 ranges over labels different from g1 coordinatewise
                for offsets in Odometer::uniform(k1, q as usize - 1) {
                    let g2: Pattern = g1
                        .iter()
                        .zip(&offsets)
                        .map(|(&a, &o)| if (o as Label) < a { o as Label } else { o as Label + 1 })
                        .collect();
                    t.checked += 1;
                    let input = WitnessInput::Natarajan { g1: g1.clone(), g2: g2.clone() };
                    match witness.eval_natarajan(points, &g1, &g2) {
                        Ok(set) => {
                            let f = build_mixture(set, &g1, &g2)?;
                            if b.contains(&f) {
                                t.record(Violation { points: points.to_vec(), input, kind: ViolationKind::Realized(f) });
                            }
                        }
                        Err(e) => t.record(Violation { points: points.to_vec(), input, kind: ViolationKind::Evaluator(e) }),
                    }
                }
            }
        }
        Rule::Graph(_) => {
            for f in Odometer::uniform(k1, q as usize) {
                let f: Pattern = f.into_iter().map(|y| y as Label).collect();
                t.checked += 1;
                let input = WitnessInput::Graph { f: f.clone() };
                match witness.eval_graph(points, &f) {
                    Ok(set) => {
                        let hit = b.patterns.iter().find(|p| (0..k1).all(|i| (p[i] == f[i]) == set.contains(i)));
                        if let Some(p) = hit {
                            t.record(Violation { points: points.to_vec(), input, kind: ViolationKind::Realized(p.clone()) });
                        }
                    }
                    Err(e) => t.record(Violation { points: points.to_vec(), input, kind: ViolationKind::Evaluator(e) }),
                }
            }
        }
        Rule::Psi(family, _) => {
            for members in Odometer::uniform(k1, family.len()) {
                t.checked += 1;
                let psis = family.select(&members);
                let input = WitnessInput::Psi { members: members.clone() };
                match witness.eval_psi(points, &members) {
                    Ok(bits) => {
                        let hit = b.patterns.iter().find(|p| apply_tuple(&psis, p).as_deref() == Some(&bits[..]));
                        if let Some(p) = hit {
                            t.record(Violation { points: points.to_vec(), input, kind: ViolationKind::Realized(p.clone()) });
                        }
                    }
                    Err(e) => t.record(Violation { points: points.to_vec(), input, kind: ViolationKind::Evaluator(e) }),
                }
            }
        }
    }
    Ok(t)
}

/// Check the exclusion property on every input whose points lie in
/// `[0, window]`: all `(k+1)`-subsets, and every labeling pair, labeling or
/// member tuple of the flavor.
pub fn validate_witness(witness: &Witness, class: &HypothesisClass, window: Point) -> Result<WitnessReport> {
    if let Flavor::Psi(f) = witness.flavor() {
        if f.labels() != class.labels() {
            return Err(Error::precondition("Ψ family alphabet differs from the class alphabet"));
        }
    }
    let points: Vec<Point> = (0..=window).collect();
    for &x in &points {
        class.domain().check(x)?;
    }
    let subsets = subsets_of_size(&points, witness.arity());
    let tallies: Vec<Tally> = subsets
        .par_iter()
        .map(|s| check_points(witness, class, s))
        .collect::<Result<_>>()?;
    let mut total = Tally::new();
    for t in tallies {
        total.checked += t.checked;
        total.count += t.count;
        for v in t.kept {
            if total.kept.len() < WitnessReport::KEPT {
                total.kept.push(v);
            }
        }
    }
    Ok(WitnessReport {
        checked_inputs: total.checked,
        violation_count: total.count,
        violations: total.kept,
        valid: total.count == 0,
    })
}

/// Choice vectors over `{g1, g2}` (or `{equal, different}`), all-first
/// first. Position `i` is in the returned set when it takes the first option.
fn candidate_sets(arity: usize) -> impl Iterator<Item = IndexSet> {
    Odometer::uniform(arity, 2)
        .map(move |c| IndexSet::from_indices((0..arity).filter(|&i| c[i] == 0)))
}

struct CanonicalRule {
    class: HypothesisClass,
    window: Option<Point>,
}

impl CanonicalRule {
    fn behaviors(&self, points: &[Point]) -> Result<crate::model::BehaviorSet> {
        if let (Some(w), Some(&top)) = (self.window, points.last()) {
            if top > w {
                return Err(Error::precondition(format!("point {top} outside window [0,{w}]")));
            }
        }
        self.class.restrict(points)
    }
}

impl NatarajanRule for CanonicalRule {
    fn exclude(&self, points: &[Point], g1: &[Label], g2: &[Label]) -> Result<IndexSet> {
        let b = self.behaviors(points)?;
        for set in candidate_sets(points.len()) {
            if !b.contains(&build_mixture(set, g1, g2)?) {
                return Ok(set);
            }
        }
        Err(Error::Shattered { points: points.to_vec() })
    }
}

impl GraphRule for CanonicalRule {
    fn exclude(&self, points: &[Point], f: &[Label]) -> Result<IndexSet> {
        let b = self.behaviors(points)?;
        let realized: BTreeSet<IndexSet> = b
            .patterns
            .iter()
            .map(|p| IndexSet::from_indices((0..p.len()).filter(|&i| p[i] == f[i])))
            .collect();
        candidate_sets(points.len())
            .find(|s| !realized.contains(s))
            .ok_or_else(|| Error::Shattered { points: points.to_vec() })
    }
}

impl PsiRule for CanonicalRule {
    fn exclude(&self, points: &[Point], psis: &[&PsiFunction]) -> Result<Vec<bool>> {
        let b = self.behaviors(points)?;
        let image: BTreeSet<Vec<bool>> = b.patterns.iter().filter_map(|p| apply_tuple(psis, p)).collect();
        first_missing_bits(points.len(), &image).ok_or_else(|| Error::Shattered { points: points.to_vec() })
    }
}

/// Lexicographically first binary pattern of length `n` not in `image`.
pub fn first_missing_bits(n: usize, image: &BTreeSet<Vec<bool>>) -> Option<Vec<bool>> {
    Odometer::uniform(n, 2)
        .map(|d| d.into_iter().map(|b| b == 1).collect::<Vec<bool>>())
        .find(|bits| !image.contains(bits))
}

/// Brute-force witness: per input, the first candidate output whose labeling
/// or pattern is missing from `H|_X`. Fails with [`Error::Shattered`] on
/// inputs that are shattered.
///
/// Natarajan candidates take `g1` before `g2` coordinate by coordinate, so
/// the full set is tried first; graph candidates likewise try "equal" before
/// "different"; Ψ candidates are binary patterns in lexicographic order.
pub fn canonical_witness(class: &HypothesisClass, flavor: &Flavor, order: usize, window: Option<Point>) -> Result<Witness> {
    let rule = Arc::new(CanonicalRule { class: class.clone(), window });
    Ok(match flavor {
        Flavor::Natarajan => Witness::natarajan(order, Provenance::Canonical, rule),
        Flavor::Graph => Witness::graph(order, Provenance::Canonical, rule),
        Flavor::Psi(family) => {
            if family.labels() != class.labels() {
                return Err(Error::precondition("Ψ family alphabet differs from the class alphabet"));
            }
            Witness::psi(family.clone(), order, Provenance::Canonical, rule)
        }
    })
}

struct LearnerRule {
    learner: Arc<dyn Learner>,
    check: Option<HypothesisClass>,
}

impl NatarajanRule for LearnerRule {
    fn exclude(&self, points: &[Point], g1: &[Label], g2: &[Label]) -> Result<IndexSet> {
        let report = nfl_adversary(self.learner.as_ref(), points, g1, g2)?;
        if let Some(class) = &self.check {
            if class.restrict(points)?.contains(&report.f.values) {
                return Err(Error::ExclusionViolated { points: points.to_vec() });
            }
        }
        Ok(IndexSet::from_indices((0..points.len()).filter(|&i| report.f.values[i] == g1[i])))
    }
}

/// Order-`2m-1` Natarajan witness built from a learner using `m` samples:
/// on each input, the No-Free-Lunch adversary finds a mixture the learner
/// fails on, and the witness names it. If the learner (1/8, 1/7)-learns a
/// class at sample size `m`, that mixture is not realized by the class.
pub fn witness_from_learner(
    learner: Arc<dyn Learner>,
    m: usize,
    check: Option<HypothesisClass>,
    window: Point,
) -> Result<Witness> {
    if m == 0 {
        return Err(Error::precondition("sample size must be positive"));
    }
    if 2 * m > window as usize + 1 {
        return Err(Error::precondition(format!("window [0,{window}] has fewer than {} points", 2 * m)));
    }
    Ok(Witness::natarajan(2 * m - 1, Provenance::FromLearner, Arc::new(LearnerRule { learner, check })))
}

/// Smallest `k ≥ 1` with `k^{n+1} · q^{2(n+1)} < 2^k`, where `n` is the
/// Natarajan witness order and `q` the alphabet size.
pub fn min_kb(natarajan_order: u32, labels: u32) -> u32 {
    let e = natarajan_order + 1;
    let q = BigUint::from(labels).pow(2 * e);
    (1u32..)
        .find(|&k| BigUint::from(k).pow(e) * &q < BigUint::from(1u8) << k as usize)
        .expect("2^k eventually dominates")
}

struct CountingRule {
    spec: GoodFunctionSpec,
    cache: Mutex<HashMap<Vec<Point>, Arc<BTreeSet<Pattern>>>>,
}

impl CountingRule {
    fn behaviors(&self, points: &[Point]) -> Result<Arc<BTreeSet<Pattern>>> {
        if let Some(v) = self.cache.lock().expect("cache lock").get(points) {
            return Ok(v.clone());
        }
        let v = Arc::new(good_patterns(&self.spec, points)?.patterns);
        self.cache.lock().expect("cache lock").insert(points.to_vec(), v.clone());
        Ok(v)
    }
}

impl PsiRule for CountingRule {
    fn exclude(&self, points: &[Point], psis: &[&PsiFunction]) -> Result<Vec<bool>> {
        let v = self.behaviors(points)?;
        if BigUint::from(v.len()) >= BigUint::from(1u8) << points.len() {
            return Err(Error::Internal(format!(
                "{} behaviors on {} points exceed the counting bound",
                v.len(),
                points.len()
            )));
        }
        let image: BTreeSet<Vec<bool>> = v.iter().filter_map(|p| apply_tuple(psis, p)).collect();
        first_missing_bits(points.len(), &image)
            .ok_or_else(|| Error::Internal("every binary pattern is covered".into()))
    }
}

/// Ψ witness of order `k_B - 1` from a Natarajan witness of order `k_N`,
/// where `k_B = min_kb(k_N, q)`. On `(T, ψ̄)` it computes the good-function
/// behaviors `v(T) ⊇ H|_T`, which number fewer than `2^{k_B}`, and returns
/// the first binary pattern missing from `ψ̄(v(T))`.
pub fn psi_witness_from_natarajan(
    natarajan: &Witness,
    family: &PsiFamily,
    class: &HypothesisClass,
    window: Point,
) -> Result<Witness> {
    if natarajan.flavor() != Flavor::Natarajan {
        return Err(Error::precondition("counting construction needs a Natarajan witness"));
    }
    if family.labels() != class.labels() {
        return Err(Error::precondition("Ψ family alphabet differs from the class alphabet"));
    }
    let kb = min_kb(natarajan.order() as u32, class.labels());
    if kb as u64 > window as u64 + 1 {
        return Err(Error::precondition(format!(
            "order {} needs {kb} points, window [0,{window}] has {}",
            kb - 1,
            window as u64 + 1
        )));
    }
    let spec = GoodFunctionSpec::new(natarajan.clone(), class.labels())?;
    let rule = CountingRule { spec, cache: Mutex::new(HashMap::new()) };
    Ok(Witness::psi(family.clone(), kb as usize - 1, Provenance::FromCounting, Arc::new(rule)))
}

/// Labeling excluded by a Natarajan witness on one input.
pub fn excluded_labeling(witness: &Witness, points: &[Point], g1: &[Label], g2: &[Label]) -> Result<Labeling> {
    let set = witness.eval_natarajan(points, g1, g2)?;
    Labeling::new(points.to_vec(), build_mixture(set, g1, g2)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::full_class;
    use crate::model::{Domain, Hypothesis};
    use crate::nfl::{ConstantLearner, ErmLearner};
    use crate::psi::{make_psi_g, make_psi_n};

    fn three() -> HypothesisClass {
        HypothesisClass::from_tables(3, vec![vec![0, 1], vec![1, 0], vec![2, 2]]).unwrap()
    }

    #[test]
    fn canonical_natarajan_picks_first_missing_mixture() {
        let w = canonical_witness(&three(), &Flavor::Natarajan, 1, None).unwrap();
        // (0,0) is missing, and the full set selects it
        assert_eq!(w.eval_natarajan(&[0, 1], &[0, 0], &[1, 1]).unwrap(), IndexSet::full(2));
        let r = validate_witness(&w, &three(), 1).unwrap();
        assert!(r.valid);
        assert_eq!(r.checked_inputs, 36);
    }

    #[test]
    fn canonical_witness_reports_shattered_inputs() {
        let full = full_class(2, 2).unwrap();
        let w = canonical_witness(&full, &Flavor::Natarajan, 1, None).unwrap();
        assert_eq!(w.eval_natarajan(&[0, 1], &[0, 0], &[1, 1]).unwrap_err(), Error::Shattered { points: vec![0, 1] });
        let r = validate_witness(&w, &full, 1).unwrap();
        assert!(!r.valid);
        assert!(matches!(r.violations[0].kind, ViolationKind::Evaluator(Error::Shattered { .. })));
    }

    #[test]
    fn constant_witness_is_caught() {
        let full = full_class(2, 2).unwrap();
        let w = Witness::natarajan(
            1,
            Provenance::User,
            Arc::new(|_: &[Point], _: &[Label], _: &[Label]| Ok(IndexSet::empty())),
        );
        let r = validate_witness(&w, &full, 1).unwrap();
        assert!(!r.valid);
        assert_eq!(r.violation_count, r.checked_inputs);
        assert!(matches!(r.violations[0].kind, ViolationKind::Realized(_)));
    }

    #[test]
    fn canonical_psi_on_six_cycle() {
        let c6 = crate::gallery::six_cycle_class().class;
        let w = canonical_witness(&c6, &Flavor::Psi(make_psi_n(5)), 1, None).unwrap();
        assert!(validate_witness(&w, &c6, 1).unwrap().valid);
    }

    #[test]
    fn canonical_graph_validates() {
        let w = canonical_witness(&three(), &Flavor::Graph, 1, None).unwrap();
        // three hypotheses cannot realize all four equality masks
        assert!(validate_witness(&w, &three(), 1).unwrap().valid);
        let w0 = canonical_witness(&three(), &Flavor::Graph, 0, None).unwrap();
        assert!(!validate_witness(&w0, &three(), 1).unwrap().valid);
    }

    #[test]
    fn inputs_are_canonicalized() {
        let w = canonical_witness(&three(), &Flavor::Natarajan, 1, None).unwrap();
        let forward = w.eval_natarajan(&[0, 1], &[0, 2], &[1, 0]).unwrap();
        let swapped = w.eval_natarajan(&[1, 0], &[2, 0], &[0, 1]).unwrap();
        let f = build_mixture(forward, &[0, 2], &[1, 0]).unwrap();
        let g = build_mixture(swapped, &[2, 0], &[0, 1]).unwrap();
        assert_eq!(f, vec![g[1], g[0]]);
        assert!(w.eval_natarajan(&[0, 0], &[0, 0], &[1, 1]).is_err());
        assert!(w.eval_natarajan(&[0, 1], &[0, 0], &[0, 1]).is_err());
        assert!(w.eval_natarajan(&[0], &[0], &[1]).is_err());
    }

    #[test]
    fn learner_witness_examples() {
        let constant = Arc::new(ConstantLearner::new(0, 1));
        let w = witness_from_learner(constant, 1, None, 1).unwrap();
        assert_eq!(w.order(), 1);
        let set = w.eval_natarajan(&[0, 1], &[1, 1], &[2, 2]).unwrap();
        assert!(set == IndexSet::empty() || set == IndexSet::full(2));

        let single = HypothesisClass::from_tables(3, vec![vec![1, 1]]).unwrap();
        let erm = Arc::new(ErmLearner::new(single.clone()).unwrap());
        let w = witness_from_learner(erm, 1, Some(single), 1).unwrap();
        let set = w.eval_natarajan(&[0, 1], &[1, 1], &[2, 2]).unwrap();
        assert_ne!(set, IndexSet::full(2));
        assert!(witness_from_learner(Arc::new(ConstantLearner::new(0, 1)), 2, None, 2).is_err());
    }

    #[test]
    fn min_kb_examples() {
        assert_eq!(min_kb(1, 3), 14);
        assert_eq!(min_kb(0, 2), 5);
        for n in 0..3 {
            for q in 2..5 {
                assert!(min_kb(n + 1, q) >= min_kb(n, q));
            }
        }
    }

    #[test]
    fn counting_witness_for_zero_class() {
        let zero = HypothesisClass::explicit(Domain::Naturals, 2, vec![Hypothesis::zero()]).unwrap();
        let wn = canonical_witness(&zero, &Flavor::Natarajan, 0, None).unwrap();
        let w = psi_witness_from_natarajan(&wn, &make_psi_g(1), &zero, 4).unwrap();
        assert_eq!(w.order(), 4);
        // v(T) = {00000}; under ψ_0 everywhere it maps to 11111
        assert_eq!(w.eval_psi(&[0, 1, 2, 3, 4], &[0; 5]).unwrap(), vec![false; 5]);
        assert_eq!(w.eval_psi(&[0, 1, 2, 3, 4], &[1; 5]).unwrap(), vec![false, false, false, false, true]);
        assert!(psi_witness_from_natarajan(&wn, &make_psi_g(1), &zero, 3).is_err());
    }
}
