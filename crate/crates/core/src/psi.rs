//! Ψ-families: maps from labels to `{0, 1, *}`, the distinguisher check, the
//! Natarajan and graph families, the class that defeats a non-distinguisher,
//! and the exhaustive search showing DS shattering is not a Ψ-family notion.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::combinatorics::{subsets_of_size, Odometer};
use crate::dimensions::{ds_fixpoint, exact_dimension, DimensionKind};
use crate::error::{Error, Result};
use crate::gallery::full_label_class;
use crate::model::{HypothesisClass, Label, Pattern, Point};
use crate::witnesses::{Provenance, PsiRule, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PsiValue {
    Zero,
    One,
    Star,
}

impl PsiValue {
    pub fn bit(self) -> Option<bool> {
        match self {
            PsiValue::Zero => Some(false),
            PsiValue::One => Some(true),
            PsiValue::Star => None,
        }
    }

    pub fn from_bit(b: bool) -> Self {
        if b {
            PsiValue::One
        } else {
            PsiValue::Zero
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            PsiValue::Zero => "0",
            PsiValue::One => "1",
            PsiValue::Star => "*",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        match s {
            "0" => Some(PsiValue::Zero),
            "1" => Some(PsiValue::One),
            "*" => Some(PsiValue::Star),
            _ => None,
        }
    }

    const ALL: [PsiValue; 3] = [PsiValue::Zero, PsiValue::One, PsiValue::Star];
}

/// Total map from the label alphabet to `{0, 1, *}`, stored as a table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PsiFunction(Vec<PsiValue>);

impl fmt::Debug for PsiFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.0.iter().map(|v| v.symbol()).collect();
        write!(f, "ψ[{s}]")
    }
}

impl PsiFunction {
    pub fn new(table: Vec<PsiValue>) -> Self {
        PsiFunction(table)
    }

    pub fn table(&self) -> &[PsiValue] {
        &self.0
    }

    pub fn labels(&self) -> u32 {
        self.0.len() as u32
    }

    pub fn apply(&self, y: Label) -> PsiValue {
        self.0[y as usize]
    }

    /// Labels mapped to `v`.
    pub fn preimage(&self, v: PsiValue) -> Vec<Label> {
        (0..self.labels()).filter(|&y| self.apply(y) == v).collect()
    }

    /// Every function on `labels` symbols, in lexicographic table order.
    pub fn enumerate_all(labels: u32) -> Vec<PsiFunction> {
        Odometer::uniform(labels as usize, 3)
            .map(|digits| PsiFunction(digits.into_iter().map(|d| PsiValue::ALL[d]).collect()))
            .collect()
    }
}

/// Binary image `ψ̄(pattern)`, or `None` if some coordinate maps to `*`.
pub fn apply_tuple(psis: &[&PsiFunction], pattern: &[Label]) -> Option<Vec<bool>> {
    psis.iter().zip(pattern).map(|(psi, &y)| psi.apply(y).bit()).collect()
}

/// Finite, duplicate-free family of Ψ-functions over a shared alphabet.
///
/// Member order is the construction order and defines the lexicographic
/// order of member tuples.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PsiFamily {
    labels: u32,
    members: Vec<PsiFunction>,
}

impl PsiFamily {
    pub fn new(labels: u32, members: Vec<PsiFunction>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::precondition("empty Ψ family"));
        }
        if labels == 0 {
            return Err(Error::precondition("Ψ family over an empty alphabet"));
        }
        if let Some(bad) = members.iter().find(|m| m.labels() != labels) {
            return Err(Error::Arity { expected: labels as usize, got: bad.labels() as usize });
        }
        let distinct: BTreeSet<_> = members.iter().collect();
        if distinct.len() != members.len() {
            return Err(Error::Representation("duplicate Ψ-function in family".into()));
        }
        Ok(PsiFamily { labels, members })
    }

    pub fn labels(&self) -> u32 {
        self.labels
    }

    pub fn members(&self) -> &[PsiFunction] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn member(&self, i: usize) -> &PsiFunction {
        &self.members[i]
    }

    pub fn select(&self, indices: &[usize]) -> Vec<&PsiFunction> {
        indices.iter().map(|&i| &self.members[i]).collect()
    }
}

/// `Ψ_G = {ψ_k}` with `ψ_k(y) = 1` iff `y = k`. `max_label` is `l`.
pub fn make_psi_g(max_label: u32) -> PsiFamily {
    let q = max_label + 1;
    let members = (0..q)
        .map(|k| PsiFunction((0..q).map(|y| PsiValue::from_bit(y == k)).collect()))
        .collect();
    PsiFamily { labels: q, members }
}

/// `Ψ_N = {ψ_{k,k'} : k ≠ k'}` with `ψ(k) = 1`, `ψ(k') = 0`, `*` elsewhere.
/// Members are ordered by `(k, k')`.
pub fn make_psi_n(max_label: u32) -> PsiFamily {
    let q = max_label + 1;
    let mut members = Vec::new();
    for k in 0..q {
        for kp in (0..q).filter(|&kp| kp != k) {
            members.push(PsiFunction(
                (0..q)
                    .map(|y| match y {
                        _ if y == k => PsiValue::One,
                        _ if y == kp => PsiValue::Zero,
                        _ => PsiValue::Star,
                    })
                    .collect(),
            ));
        }
    }
    PsiFamily { labels: q, members }
}

/// Threshold family `ψ_k(y) = [y ≥ k]`, `k = 1..=l`, whose dimension is the
/// Pollard pseudo-dimension restricted to a finite label range.
pub fn make_psi_pollard(max_label: u32) -> PsiFamily {
    let q = max_label + 1;
    let members = (1..q)
        .map(|k| PsiFunction((0..q).map(|y| PsiValue::from_bit(y >= k)).collect()))
        .collect();
    PsiFamily { labels: q, members }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistinguisherCheck {
    pub distinguisher: bool,
    /// Lexicographically first pair no member separates.
    pub failing_pair: Option<(Label, Label)>,
}

/// Whether every pair of distinct labels is sent to `{0, 1}` by some member.
pub fn is_distinguisher(family: &PsiFamily) -> DistinguisherCheck {
    let q = family.labels();
    for a in 0..q {
        for b in a + 1..q {
            let separated = family.members().iter().any(|psi| {
                matches!(
                    (psi.apply(a), psi.apply(b)),
                    (PsiValue::Zero, PsiValue::One) | (PsiValue::One, PsiValue::Zero)
                )
            });
            if !separated {
                return DistinguisherCheck { distinguisher: false, failing_pair: Some((a, b)) };
            }
        }
    }
    DistinguisherCheck { distinguisher: true, failing_pair: None }
}

/// Per coordinate, outputs the bit no label of the failing pair can reach.
#[derive(Debug)]
struct FailingPairRule {
    pair: (Label, Label),
}

impl FailingPairRule {
    /// `b ⊕ 1` where `ψ({y₁, y₂}) ⊆ {b, *}`.
    fn unreachable_bit(&self, psi: &PsiFunction) -> bool {
        let (a, b) = self.pair;
        let reached = psi.apply(a).bit().or(psi.apply(b).bit());
        match reached {
            Some(bit) => !bit,
            // both map to *, any bit is unreachable
            None => true,
        }
    }
}

impl PsiRule for FailingPairRule {
    fn exclude(&self, _points: &[Point], psis: &[&PsiFunction]) -> Result<Vec<bool>> {
        Ok(psis.iter().map(|psi| self.unreachable_bit(psi)).collect())
    }
}

/// For a non-distinguisher with failing pair `(y₁, y₂)`: the class of all
/// maps `[0, window] → {y₁, y₂}` together with an order-1 Ψ-witness.
///
/// The class has graph dimension `window + 1`, yet no point is Ψ-shattered:
/// each member sends both labels into `{b, *}` for one bit `b`.
pub fn failing_psi_class(family: &PsiFamily, window: Point) -> Result<(HypothesisClass, Witness)> {
    let check = is_distinguisher(family);
    let Some(pair) = check.failing_pair else {
        return Err(Error::precondition("Ψ is a distinguisher; no failing pair"));
    };
    let class = full_label_class(window + 1, family.labels(), &[pair.0, pair.1])?;
    let witness = failing_pair_witness(family, pair, 1);
    Ok((class, witness))
}

/// The failing-pair rule packaged at an arbitrary order.
pub fn failing_pair_witness(family: &PsiFamily, pair: (Label, Label), order: usize) -> Witness {
    Witness::psi(family.clone(), order, Provenance::FailingPsi, Arc::new(FailingPairRule { pair }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RefutationVerdict {
    /// Every shattering pair also shatters a subclass of DS dimension 1.
    Refuted,
    /// Some shattering pair shatters no such subclass.
    NotRefuted,
    /// No pair shatters the class at all.
    Vacuous,
}

impl RefutationVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            RefutationVerdict::Refuted => "refuted",
            RefutationVerdict::NotRefuted => "not-refuted",
            RefutationVerdict::Vacuous => "vacuous",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ShatteringPair {
    pub psi1: PsiFunction,
    pub psi2: PsiFunction,
    /// Indices into [`RefutationReport::subclasses`].
    pub subclasses: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct RefutationReport {
    pub pairs_examined: usize,
    pub shattering: Vec<ShatteringPair>,
    /// Four-pattern subclasses of DS dimension 1, lexicographic.
    pub subclasses: Vec<BTreeSet<Pattern>>,
    /// For each subclass, the number of shattering pairs that shatter it.
    pub subclass_hits: Vec<usize>,
    pub verdict: RefutationVerdict,
}

impl RefutationReport {
    pub fn hits_for(&self, subclass: &BTreeSet<Pattern>) -> usize {
        self.subclasses.iter().position(|s| s == subclass).map_or(0, |i| self.subclass_hits[i])
    }
}

fn pair_covers(psi1: &PsiFunction, psi2: &PsiFunction, patterns: &[&Pattern]) -> bool {
    let mut seen = 0u8;
    for p in patterns {
        if let (Some(a), Some(b)) = (psi1.apply(p[0]).bit(), psi2.apply(p[1]).bit()) {
            seen |= 1 << (usize::from(a) * 2 + usize::from(b));
        }
    }
    seen == 0b1111
}

/// Exhaustive check that no Ψ-family can express DS shattering on `class`.
///
/// Every pair `(ψ₁, ψ₂)` of functions over the alphabet is tried; for each
/// pair that Ψ-shatters the two-point domain, the four-element subclasses of
/// DS dimension 1 it also shatters are recorded. A family shattering the
/// class contains such a pair, so it would report dimension 2 on a subclass
/// whose DS dimension is 1.
pub fn refute_ds_expressibility(class: &HypothesisClass) -> Result<RefutationReport> {
    if class.domain().size() != Some(2) || class.hypotheses().is_none() {
        return Err(Error::precondition("DS refutation needs an explicit class on two points"));
    }
    let ds = exact_dimension(class, &DimensionKind::Ds, None)?;
    if ds.dimension != 2 {
        return Err(Error::precondition(format!("DS dimension is {}, expected 2", ds.dimension)));
    }
    let patterns: Vec<Pattern> = class.restrict(&[0, 1])?.patterns.into_iter().collect();

    let mut subclasses = Vec::new();
    for subset in subsets_of_size(&patterns, 4) {
        let set: BTreeSet<Pattern> = subset.into_iter().collect();
        // DS = 1: not a 2-dim pseudo-cube union, but some coordinate varies
        let varies = (0..2).any(|c| set.iter().map(|p| p[c]).collect::<BTreeSet<_>>().len() > 1);
        if ds_fixpoint(&set).is_empty() && varies {
            subclasses.push(set);
        }
    }
    let subclass_refs: Vec<Vec<&Pattern>> = subclasses.iter().map(|s| s.iter().collect()).collect();
    let all_refs: Vec<&Pattern> = patterns.iter().collect();

    let functions = PsiFunction::enumerate_all(class.labels());
    let shattering: Vec<ShatteringPair> = functions
        .par_iter()
        .map(|psi1| {
            functions
                .iter()
                .filter(|psi2| pair_covers(psi1, psi2, &all_refs))
                .map(|psi2| ShatteringPair {
                    psi1: psi1.clone(),
                    psi2: psi2.clone(),
                    subclasses: subclass_refs
                        .iter()
                        .enumerate()
                        .filter(|(_, s)| pair_covers(psi1, psi2, s))
                        .map(|(i, _)| i)
                        .collect(),
                })
                .collect::<Vec<_>>()
        })
        .flatten()
        .collect();

    let mut subclass_hits = vec![0; subclasses.len()];
    for pair in &shattering {
        for &i in &pair.subclasses {
            subclass_hits[i] += 1;
        }
    }
    let verdict = if shattering.is_empty() {
        RefutationVerdict::Vacuous
    } else if shattering.iter().all(|p| !p.subclasses.is_empty()) {
        RefutationVerdict::Refuted
    } else {
        RefutationVerdict::NotRefuted
    };
    Ok(RefutationReport {
        pairs_examined: functions.len() * functions.len(),
        shattering,
        subclasses,
        subclass_hits,
        verdict,
    })
}

/// Counts of shattering pairs grouped by how many subclasses they hit.
pub fn coverage_histogram(report: &RefutationReport) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for p in &report.shattering {
        *h.entry(p.subclasses.len()).or_insert(0) += 1;
    }
    h
}
