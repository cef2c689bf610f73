//! The augmented class `H' = H ∪ G`.
//!
//! `G` holds the finite-support labelings `g` of ℕ such that, for every
//! witness input `U ⊆ [0, M(g)]`, `g|_U` differs from the labeling the
//! witness excludes there. `G` is closed under truncation, so its behaviors
//! on a finite `T` are the projections of the survivors on `[0, max T]`,
//! which makes ERM over `H'` computable.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::{Arc, Mutex};

use num_bigint::{BigInt, BigUint};
use rayon::prelude::*;

use crate::combinatorics::{subsets_of_size, Odometer};
use crate::error::{Error, Result};
use crate::model::{
    build_mixture, check_distinct, BehaviorOracle, BehaviorSet, Domain, Hypothesis, HypothesisClass, Label,
    LabeledSample, Pattern, Point,
};
use crate::nfl::Learner;
use crate::psi::apply_tuple;
use crate::witnesses::{Flavor, Witness};
use crate::Rational;

/// Witness-excluded restrictions on one input `U`.
struct Exclusion {
    points: Vec<Point>,
    patterns: HashSet<Pattern>,
}

type ExclusionTable = Arc<Vec<Exclusion>>;

/// Defines the good functions from a Natarajan or Ψ witness.
///
/// With a label-bound table `c`, candidate labels on `[0, M]` are
/// `0..=c(M)` instead of the alphabet.
#[derive(Clone)]
pub struct GoodFunctionSpec {
    witness: Witness,
    labels: u32,
    bound: Option<Vec<Label>>,
    exclusions: Arc<Mutex<HashMap<(u32, Point), ExclusionTable>>>,
    windows: Arc<Mutex<HashMap<Point, Arc<BTreeSet<Pattern>>>>>,
}

impl std::fmt::Debug for GoodFunctionSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GoodFunctionSpec")
            .field("witness", &self.witness)
            .field("labels", &self.labels)
            .field("bound", &self.bound)
            .finish()
    }
}

impl GoodFunctionSpec {
    pub fn new(witness: Witness, labels: u32) -> Result<Self> {
        match witness.flavor() {
            Flavor::Natarajan => {}
            Flavor::Psi(family) if family.labels() == labels => {}
            Flavor::Psi(_) => return Err(Error::precondition("Ψ family alphabet differs from the spec alphabet")),
            Flavor::Graph => return Err(Error::Unsupported("good functions from a graph witness".into())),
        }
        if labels < 2 {
            return Err(Error::precondition("alphabet needs at least two labels"));
        }
        Ok(GoodFunctionSpec {
            witness,
            labels,
            bound: None,
            exclusions: Arc::default(),
            windows: Arc::default(),
        })
    }

    /// Variant with labels on `[0, M]` drawn from `0..=c[M]`.
    pub fn with_bound(witness: Witness, labels: u32, bound: Vec<Label>) -> Result<Self> {
        if bound.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::precondition("label bound table must be nondecreasing"));
        }
        if let Flavor::Psi(f) = witness.flavor() {
            if let Some(&top) = bound.last() {
                if top >= f.labels() {
                    return Err(Error::Unsupported("label bound exceeds the Ψ family alphabet".into()));
                }
            }
        }
        let mut spec = Self::new(witness, labels)?;
        spec.bound = Some(bound);
        Ok(spec)
    }

    pub fn witness(&self) -> &Witness {
        &self.witness
    }

    pub fn order(&self) -> usize {
        self.witness.order()
    }

    pub fn labels(&self) -> u32 {
        self.labels
    }

    pub fn bound(&self) -> Option<&[Label]> {
        self.bound.as_deref()
    }

    /// Number of candidate labels on the window `[0, m]`.
    pub fn alphabet(&self, m: Point) -> Result<u32> {
        match &self.bound {
            None => Ok(self.labels),
            Some(c) => c
                .get(m as usize)
                .map(|&top| top + 1)
                .ok_or_else(|| Error::precondition(format!("label bound table has no entry for {m}"))),
        }
    }

    fn excluded_on(&self, points: &[Point], alphabet: u32) -> Result<HashSet<Pattern>> {
        let k1 = points.len();
        let a = alphabet as usize;
        let mut out = HashSet::new();
        match self.witness.flavor() {
            Flavor::Natarajan => {
                for y in Odometer::uniform(k1, a) {
                    let y: Pattern = y.into_iter().map(|v| v as Label).collect();
                    for offsets in Odometer::uniform(k1, a - 1) {
                        let y2: Pattern = y
                            .iter()
                            .zip(&offsets)
                            .map(|(&v, &o)| if (o as Label) < v { o as Label } else { o as Label + 1 })
                            .collect();
                        let set = self.witness.eval_natarajan(points, &y, &y2)?;
                        out.insert(build_mixture(set, &y, &y2)?);
                    }
                }
            }
            Flavor::Psi(family) => {
                let candidates: Vec<Pattern> = Odometer::uniform(k1, a)
                    .map(|p| p.into_iter().map(|v| v as Label).collect())
                    .collect();
                for members in Odometer::uniform(k1, family.len()) {
                    let bits = self.witness.eval_psi(points, &members)?;
                    let psis = family.select(&members);
                    for p in &candidates {
                        if apply_tuple(&psis, p).as_deref() == Some(&bits[..]) {
                            out.insert(p.clone());
                        }
                    }
                }
            }
            Flavor::Graph => unreachable!("rejected at construction"),
        }
        Ok(out)
    }

    /// Exclusions for every witness input with largest point `t`.
    fn exclusions_ending_at(&self, alphabet: u32, t: Point) -> Result<ExclusionTable> {
        if let Some(e) = self.exclusions.lock().expect("exclusion cache").get(&(alphabet, t)) {
            return Ok(e.clone());
        }
        let k = self.order();
        let below: Vec<Point> = (0..t).collect();
        let inputs: Vec<Vec<Point>> = subsets_of_size(&below, k)
            .into_iter()
            .map(|mut u| {
                u.push(t);
                u
            })
            .collect();
        let table: Vec<Exclusion> = inputs
            .into_par_iter()
            .map(|u| Ok(Exclusion { patterns: self.excluded_on(&u, alphabet)?, points: u }))
            .collect::<Result<_>>()?;
        let e = Arc::new(table);
        self.exclusions.lock().expect("exclusion cache").insert((alphabet, t), e.clone());
        Ok(e)
    }

    /// Good functions restricted to `[0, m]`, in lexicographic order.
    pub fn window_patterns(&self, m: Point) -> Result<Arc<BTreeSet<Pattern>>> {
        if let Some(w) = self.windows.lock().expect("window cache").get(&m) {
            return Ok(w.clone());
        }
        let alphabet = self.alphabet(m)?;
        let tables: Vec<ExclusionTable> = (0..=m).map(|t| self.exclusions_ending_at(alphabet, t)).collect::<Result<_>>()?;
        let search = Search { tables: &tables, alphabet, len: m as usize + 1 };
        // split on the first coordinate, merge in label order
        let parts: Vec<Vec<Pattern>> = (0..alphabet)
            .into_par_iter()
            .map(|first| {
                let mut out = Vec::new();
                let mut prefix = Vec::with_capacity(search.len);
                if search.extend(&mut prefix, first, None) {
                    search.dfs(&mut prefix, if first == 0 { None } else { Some(0) }, &mut out);
                }
                out
            })
            .collect();
        let set: Arc<BTreeSet<Pattern>> = Arc::new(parts.into_iter().flatten().collect());
        self.windows.lock().expect("window cache").insert(m, set.clone());
        Ok(set)
    }
}

struct Search<'a> {
    tables: &'a [ExclusionTable],
    alphabet: u32,
    len: usize,
}

impl Search<'_> {
    /// Push `y` at the next position. A nonzero value commits every input
    /// ending after the previous nonzero position.
    fn extend(&self, prefix: &mut Vec<Label>, y: Label, committed: Option<usize>) -> bool {
        let j = prefix.len();
        prefix.push(y);
        if y == 0 {
            return true;
        }
        let start = committed.map_or(0, |c| c + 1);
        for t in start..=j {
            for ex in self.tables[t].iter() {
                let restricted: Pattern = ex.points.iter().map(|&x| prefix[x as usize]).collect();
                if ex.patterns.contains(&restricted) {
                    prefix.pop();
                    return false;
                }
            }
        }
        true
    }

    fn dfs(&self, prefix: &mut Vec<Label>, committed: Option<usize>, out: &mut Vec<Pattern>) {
        if prefix.len() == self.len {
            out.push(prefix.clone());
            return;
        }
        let j = prefix.len();
        for y in 0..self.alphabet {
            if self.extend(prefix, y, committed) {
                self.dfs(prefix, if y == 0 { committed } else { Some(j) }, out);
                prefix.pop();
            }
        }
    }
}

/// `v(T)`: good functions restricted to `T`.
pub fn good_patterns(spec: &GoodFunctionSpec, points: &[Point]) -> Result<BehaviorSet> {
    check_distinct(points)?;
    let Some(&m) = points.iter().max() else {
        return BehaviorSet::new(Vec::new(), BTreeSet::from([Vec::new()]));
    };
    let window = spec.window_patterns(m)?;
    let projected = window
        .iter()
        .map(|p| points.iter().map(|&x| p[x as usize]).collect())
        .collect();
    BehaviorSet::new(points.to_vec(), projected)
}

/// Same as [`good_patterns`] but requires the label-bound table.
pub fn bounded_label_patterns(spec: &GoodFunctionSpec, points: &[Point]) -> Result<BehaviorSet> {
    if spec.bound().is_none() {
        return Err(Error::precondition("spec carries no label bound table"));
    }
    good_patterns(spec, points)
}

/// Number of candidate patterns on `[0, m]` before exclusion.
pub fn candidate_space(spec: &GoodFunctionSpec, m: Point) -> Result<BigUint> {
    Ok(BigUint::from(spec.alphabet(m)?).pow(m + 1))
}

/// `H ∪ G` as a behavior oracle.
#[derive(Clone, Debug)]
pub struct AugmentedClass {
    base: HypothesisClass,
    spec: GoodFunctionSpec,
}

impl AugmentedClass {
    /// The base is viewed over ℕ with zero padding.
    pub fn new(base: &HypothesisClass, spec: GoodFunctionSpec) -> Result<Self> {
        let base = match base.domain() {
            Domain::Naturals => base.clone(),
            Domain::Finite(_) => base.zero_padded()?,
        };
        if base.labels() != spec.labels() {
            return Err(Error::precondition("base and spec alphabets differ"));
        }
        Ok(AugmentedClass { base, spec })
    }

    pub fn base(&self) -> &HypothesisClass {
        &self.base
    }

    pub fn spec(&self) -> &GoodFunctionSpec {
        &self.spec
    }

    pub fn class(&self) -> HypothesisClass {
        HypothesisClass::from_oracle(Domain::Naturals, self.spec.labels(), Arc::new(self.clone()))
    }
}

impl BehaviorOracle for AugmentedClass {
    fn behaviors(&self, points: &[Point]) -> Result<BTreeSet<Pattern>> {
        let mut out = good_patterns(&self.spec, points)?.patterns;
        out.extend(self.base.restrict(points)?.patterns);
        Ok(out)
    }
}

/// ERM over `H'`: a good function whose restriction to the sample points has
/// minimum empirical risk, returned with that risk. Among minimizers the
/// lexicographically smallest restriction wins, then the smallest window
/// pattern realizing it; the function is 0 beyond `max T`.
pub fn erm_augmented(spec: &GoodFunctionSpec, sample: &LabeledSample) -> Result<(Hypothesis, Rational)> {
    if sample.is_empty() {
        return Err(Error::precondition("ERM on an empty sample"));
    }
    let points = sample.distinct_points();
    let m = *points.last().expect("nonempty sample");
    let alphabet = spec.alphabet(m)?;
    if let Some(&(_, y)) = sample.pairs().iter().find(|&&(_, y)| y >= alphabet) {
        return Err(Error::LabelOverflow { label: y, labels: alphabet });
    }
    let v = good_patterns(spec, &points)?;
    let position: HashMap<Point, usize> = points.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mistakes = |p: &Pattern| sample.pairs().iter().filter(|(x, y)| p[position[x]] != *y).count();
    let (best, errors) = v
        .patterns
        .iter()
        .map(|p| (p, mistakes(p)))
        .min_by_key(|&(_, e)| e)
        .expect("the zero function is always good");
    let window = spec.window_patterns(m)?;
    let full = window
        .iter()
        .find(|w| points.iter().zip(best).all(|(&x, &y)| w[x as usize] == y))
        .expect("restriction comes from a window pattern");
    let h = Hypothesis::support(full.iter().enumerate().map(|(x, &y)| (x as Point, y)));
    Ok((h, Rational::new(BigInt::from(errors), BigInt::from(sample.len()))))
}

/// Learner returning [`erm_augmented`]'s hypothesis; improper for the base.
#[derive(Clone, Debug)]
pub struct EmbeddingLearner {
    spec: GoodFunctionSpec,
}

impl Learner for EmbeddingLearner {
    fn learn(&self, sample: &LabeledSample) -> Result<Hypothesis> {
        Ok(erm_augmented(&self.spec, sample)?.0)
    }

    fn name(&self) -> String {
        "embedding".into()
    }
}

pub fn agnostic_learner(spec: GoodFunctionSpec) -> EmbeddingLearner {
    EmbeddingLearner { spec }
}

/// First enumerated hypothesis consistent with the sample. Fails with
/// [`Error::Budget`] after `budget` hypotheses.
pub fn realizable_enumeration_erm(
    hypotheses: impl IntoIterator<Item = Hypothesis>,
    sample: &LabeledSample,
    budget: usize,
) -> Result<Hypothesis> {
    if sample.is_empty() {
        return Err(Error::precondition("ERM on an empty sample"));
    }
    hypotheses
        .into_iter()
        .take(budget)
        .find(|h| sample.pairs().iter().all(|&(x, y)| h.eval(x) == y))
        .ok_or(Error::Budget { budget })
}

/// Sample size after which ERM over `n` hypotheses is within `eps` of the
/// best one with probability `1 - delta`: `⌈2 ln(2n/δ) / ε²⌉`.
pub fn uniform_convergence_sample_size(n: usize, eps: f64, delta: f64) -> Result<usize> {
    if n == 0 || !(eps > 0.0 && eps <= 1.0) || !(delta > 0.0 && delta < 1.0) {
        return Err(Error::precondition("need n ≥ 1, ε in (0,1], δ in (0,1)"));
    }
    Ok((2.0 * (2.0 * n as f64 / delta).ln() / (eps * eps)).ceil() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witnesses::{canonical_witness, Flavor};

    fn three() -> HypothesisClass {
        HypothesisClass::from_tables(3, vec![vec![0, 1], vec![1, 0], vec![2, 2]]).unwrap().zero_padded().unwrap()
    }

    fn spec_for(class: &HypothesisClass, k: usize) -> GoodFunctionSpec {
        let w = canonical_witness(class, &Flavor::Natarajan, k, None).unwrap();
        GoodFunctionSpec::new(w, class.labels()).unwrap()
    }

    fn zero_class() -> HypothesisClass {
        HypothesisClass::explicit(Domain::Naturals, 2, vec![Hypothesis::zero()]).unwrap()
    }

    #[test]
    fn only_zero_survives_for_zero_class() {
        let spec = spec_for(&zero_class(), 0);
        let v = good_patterns(&spec, &[0, 1]).unwrap();
        assert_eq!(v.patterns, BTreeSet::from([vec![0, 0]]));
    }

    #[test]
    fn three_class_behaviors() {
        let base = three();
        let spec = spec_for(&base, 1);
        let v = good_patterns(&spec, &[0, 1]).unwrap();
        for p in &base.restrict(&[0, 1]).unwrap().patterns {
            assert!(v.contains(p));
        }
        assert!(v.len() <= 4 * 81);
        assert!(!v.contains(&[0, 0]) || !base.restrict(&[0, 1]).unwrap().contains(&[0, 0]));
    }

    #[test]
    fn erm_examples() {
        let base = three();
        let spec = spec_for(&base, 1);
        let (h, risk) = erm_augmented(&spec, &LabeledSample::new(vec![(0, 2), (1, 2)])).unwrap();
        assert_eq!(h.project(&[0, 1]), vec![2, 2]);
        assert_eq!(risk, Rational::from_integer(0.into()));
        let (_, risk) = erm_augmented(&spec, &LabeledSample::new(vec![(0, 0), (1, 0)])).unwrap();
        assert!(risk <= Rational::new(1.into(), 2.into()));

        let zero = spec_for(&zero_class(), 0);
        let (h, risk) = erm_augmented(&zero, &LabeledSample::new(vec![(0, 1), (1, 0), (3, 1)])).unwrap();
        assert_eq!(h, Hypothesis::zero());
        assert_eq!(risk, Rational::new(2.into(), 3.into()));
        assert!(erm_augmented(&zero, &LabeledSample::new(vec![])).is_err());
        assert!(erm_augmented(&zero, &LabeledSample::new(vec![(0, 2)])).is_err());
    }

    #[test]
    fn truncation_closure() {
        let spec = spec_for(&three(), 1);
        let big = spec.window_patterns(3).unwrap();
        let small = spec.window_patterns(2).unwrap();
        for p in big.iter() {
            assert!(small.contains(&p[..3].to_vec()));
        }
    }

    #[test]
    fn enumeration_erm() {
        let hs = three().hypotheses().unwrap().to_vec();
        let s = LabeledSample::new(vec![(0, 2), (1, 2)]);
        assert_eq!(realizable_enumeration_erm(hs.clone(), &s, 10).unwrap(), hs[2]);
        let s = LabeledSample::new(vec![(0, 0)]);
        assert_eq!(realizable_enumeration_erm(hs.clone(), &s, 10).unwrap(), hs[0]);
        let s = LabeledSample::new(vec![(0, 1), (1, 1)]);
        assert_eq!(realizable_enumeration_erm(hs, &s, 2).unwrap_err(), Error::Budget { budget: 2 });
    }

    #[test]
    fn bounded_labels() {
        let base = three();
        let w = canonical_witness(&base, &Flavor::Natarajan, 1, None).unwrap();
        let constant = GoodFunctionSpec::with_bound(w.clone(), 3, vec![2; 4]).unwrap();
        let plain = GoodFunctionSpec::new(w.clone(), 3).unwrap();
        assert_eq!(
            bounded_label_patterns(&constant, &[0, 2, 3]).unwrap(),
            good_patterns(&plain, &[0, 2, 3]).unwrap()
        );
        let binary = GoodFunctionSpec::with_bound(w.clone(), 3, vec![1; 4]).unwrap();
        let v = bounded_label_patterns(&binary, &[0, 1, 2]).unwrap();
        assert!(v.patterns.iter().flatten().all(|&y| y <= 1));
        let growing = GoodFunctionSpec::with_bound(w.clone(), 3, vec![0, 1, 1, 2]).unwrap();
        assert_eq!(candidate_space(&growing, 2).unwrap(), BigUint::from(8u32));
        assert_eq!(candidate_space(&growing, 3).unwrap(), BigUint::from(81u32));
        assert!(GoodFunctionSpec::with_bound(w, 3, vec![2, 1]).is_err());
        assert!(bounded_label_patterns(&plain, &[0]).is_err());
    }

    #[test]
    fn sample_size_formula() {
        // 2·ln(2·3/0.2)/0.0625 = 108.8…
        assert_eq!(uniform_convergence_sample_size(3, 0.25, 0.2).unwrap(), 109);
        assert!(uniform_convergence_sample_size(0, 0.25, 0.2).is_err());
    }
}
