//! No-Free-Lunch adversary with exact rational expectations.
//!
//! For a deterministic learner, `2m` points and two componentwise-distinct
//! labelings, the adversary walks the `2^{2m}` mixtures `f_I` in index-set
//! order and returns the first one whose expected risk over all `(2m)^m`
//! sample sequences is at least 1/4.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::combinatorics::Odometer;
use crate::error::{Error, Result};
use crate::model::{
    check_distinct, componentwise_distinct, Hypothesis, HypothesisClass, IndexSet, Label, LabeledSample, Labeling,
    Point,
};
use crate::{ExactDistribution, Rational};

/// Deterministic, total map from samples to hypotheses.
pub trait Learner: Send + Sync {
    fn learn(&self, sample: &LabeledSample) -> Result<Hypothesis>;

    fn name(&self) -> String;
}

/// Predicts `label` on `[0, window]` (and 0 beyond).
#[derive(Clone, Debug)]
pub struct ConstantLearner {
    pub label: Label,
    pub window: Point,
}

impl ConstantLearner {
    pub fn new(label: Label, window: Point) -> Self {
        ConstantLearner { label, window }
    }
}

impl Learner for ConstantLearner {
    fn learn(&self, _: &LabeledSample) -> Result<Hypothesis> {
        Ok(Hypothesis::table(vec![self.label; self.window as usize + 1]))
    }

    fn name(&self) -> String {
        format!("const:{}", self.label)
    }
}

/// Repeats the first label seen at each sample point, `default` elsewhere
/// on `[0, window]`.
#[derive(Clone, Debug)]
pub struct MemorizerLearner {
    pub default: Label,
    pub window: Point,
}

impl MemorizerLearner {
    pub fn new(default: Label, window: Point) -> Self {
        MemorizerLearner { default, window }
    }
}

impl Learner for MemorizerLearner {
    fn learn(&self, sample: &LabeledSample) -> Result<Hypothesis> {
        let top = sample.pairs().iter().map(|&(x, _)| x).max().unwrap_or(0).max(self.window);
        let mut table = vec![self.default; top as usize + 1];
        let mut seen = vec![false; table.len()];
        for &(x, y) in sample.pairs() {
            if !seen[x as usize] {
                seen[x as usize] = true;
                table[x as usize] = y;
            }
        }
        Ok(Hypothesis::table(table))
    }

    fn name(&self) -> String {
        format!("memorize:{}", self.default)
    }
}

/// Empirical risk minimizer over an explicit class; ties go to the earliest
/// hypothesis in class order.
#[derive(Clone, Debug)]
pub struct ErmLearner {
    class: HypothesisClass,
}

impl ErmLearner {
    pub fn new(class: HypothesisClass) -> Result<Self> {
        match class.hypotheses() {
            Some(h) if !h.is_empty() => Ok(ErmLearner { class }),
            Some(_) => Err(Error::precondition("ERM over an empty class")),
            None => Err(Error::Unsupported("ERM needs an explicit class".into())),
        }
    }

    pub fn class(&self) -> &HypothesisClass {
        &self.class
    }
}

impl Learner for ErmLearner {
    fn learn(&self, sample: &LabeledSample) -> Result<Hypothesis> {
        let hs = self.class.hypotheses().expect("checked at construction");
        let mut best: Option<(usize, &Hypothesis)> = None;
        for h in hs {
            let errors = sample.pairs().iter().filter(|&&(x, y)| h.eval(x) != y).count();
            if best.is_none_or(|(e, _)| errors < e) {
                best = Some((errors, h));
            }
        }
        Ok(best.expect("nonempty class").1.clone())
    }

    fn name(&self) -> String {
        "erm".into()
    }
}

/// Ignores the sample.
#[derive(Clone, Debug)]
pub struct FixedLearner(pub Hypothesis);

impl Learner for FixedLearner {
    fn learn(&self, _: &LabeledSample) -> Result<Hypothesis> {
        Ok(self.0.clone())
    }

    fn name(&self) -> String {
        "fixed".into()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdversaryReport {
    pub f: Labeling,
    /// Positions where `f` takes the first labeling.
    pub index_set: IndexSet,
    pub distribution: ExactDistribution,
    pub expected_risk: Rational,
    /// Probability that the learner's risk is at least 1/8.
    pub tail_probability: Rational,
    /// Whether the tail reaches 1/7, as Markov's inequality predicts.
    pub tail_meets_bound: bool,
    pub mixtures_examined: u64,
}

struct RiskTally {
    mistakes: u64,
    tail: u64,
}

/// Per-sequence mistake counts on `X` for the labeling `f`.
fn mistake_counts(learner: &dyn Learner, f: &Labeling, m: usize) -> Result<Vec<u64>> {
    let n = f.arity();
    let sequences: Vec<Vec<usize>> = Odometer::uniform(m, n).collect();
    sequences
        .par_iter()
        .map(|seq| {
            let sample = LabeledSample::new(seq.iter().map(|&j| (f.points[j], f.values[j])).collect());
            let h = learner.learn(&sample)?;
            Ok((0..n).filter(|&i| h.eval(f.points[i]) != f.values[i]).count() as u64)
        })
        .collect()
}

fn check_support(f: &Labeling, m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::precondition("sample size must be positive"));
    }
    if f.arity() != 2 * m {
        return Err(Error::Arity { expected: 2 * m, got: f.arity() });
    }
    check_distinct(&f.points)
}

/// Expected risk of `learner` under the uniform distribution on the graph of
/// `f`, averaged over all `(2m)^m` sample sequences in lexicographic order,
/// together with the per-sequence risks.
pub fn exact_expected_risk(learner: &dyn Learner, f: &Labeling, m: usize) -> Result<(Rational, Vec<Rational>)> {
    check_support(f, m)?;
    let counts = mistake_counts(learner, f, m)?;
    let n = BigInt::from(f.arity());
    let table: Vec<Rational> = counts.iter().map(|&c| Rational::new(BigInt::from(c), n.clone())).collect();
    let total: u64 = counts.iter().sum();
    let mean = Rational::new(BigInt::from(total), n * BigInt::from(counts.len()));
    Ok((mean, table))
}

fn tally(counts: &[u64], arity: usize) -> RiskTally {
    // risk ≥ 1/8 ⟺ 8·mistakes ≥ arity
    RiskTally {
        mistakes: counts.iter().sum(),
        tail: counts.iter().filter(|&&c| 8 * c >= arity as u64).count() as u64,
    }
}

/// First mixture `f_I` (index sets in increasing bitmask order, `∅` first)
/// on which `learner` has expected risk at least 1/4 from `m = |X|/2`
/// samples.
pub fn nfl_adversary(learner: &dyn Learner, points: &[Point], g1: &[Label], g2: &[Label]) -> Result<AdversaryReport> {
    let n = points.len();
    if n == 0 || n % 2 == 1 {
        return Err(Error::precondition(format!("adversary needs an even, positive number of points, got {n}")));
    }
    if n > 20 {
        return Err(Error::Budget { budget: 20 });
    }
    check_distinct(points)?;
    if g1.len() != n || g2.len() != n {
        return Err(Error::Arity { expected: n, got: g1.len().min(g2.len()) });
    }
    if !componentwise_distinct(g1, g2) {
        return Err(Error::precondition("labelings must differ at every coordinate"));
    }
    let m = n / 2;
    let quarter = Rational::new(BigInt::one(), BigInt::from(4));
    let seventh = Rational::new(BigInt::one(), BigInt::from(7));
    let first = Labeling::new(points.to_vec(), g1.to_vec())?;
    let second = Labeling::new(points.to_vec(), g2.to_vec())?;
    let sequences = BigInt::from(n).pow(m as u32);
    for bits in 0..(1u64 << n) {
        let set = IndexSet::from_bits(bits);
        let f = first.mixture(set, &second)?;
        let counts = mistake_counts(learner, &f, m)?;
        let t = tally(&counts, n);
        let expected = Rational::new(BigInt::from(t.mistakes), BigInt::from(n) * &sequences);
        if expected >= quarter {
            let tail = Rational::new(BigInt::from(t.tail), sequences.clone());
            let distribution = ExactDistribution::uniform_on_graph(&f)?;
            debug_assert!(crate::model::true_risk::<Rational>(&Hypothesis::support(f.points.iter().copied().zip(f.values.iter().copied())), &distribution).is_zero());
            return Ok(AdversaryReport {
                tail_meets_bound: tail >= seventh,
                f,
                index_set: set,
                distribution,
                expected_risk: expected,
                tail_probability: tail,
                mixtures_examined: bits + 1,
            });
        }
    }
    Err(Error::NflFailure { examined: 1usize << n })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn lab(points: &[Point], values: &[Label]) -> Labeling {
        Labeling::new(points.to_vec(), values.to_vec()).unwrap()
    }

    #[test]
    fn constant_predictor_risks() {
        let one = ConstantLearner::new(1, 1);
        let (mean, table) = exact_expected_risk(&one, &lab(&[0, 1], &[2, 2]), 1).unwrap();
        assert_eq!(mean, r(1, 1));
        assert_eq!(table, vec![r(1, 1), r(1, 1)]);
        let (mean, _) = exact_expected_risk(&one, &lab(&[0, 1], &[1, 1]), 1).unwrap();
        assert_eq!(mean, r(0, 1));
    }

    #[test]
    fn memorizer_risk() {
        let mem = MemorizerLearner::new(1, 1);
        // after seeing either point the other is predicted 1
        let (mean, table) = exact_expected_risk(&mem, &lab(&[0, 1], &[1, 2]), 1).unwrap();
        assert_eq!(table, vec![r(1, 2), r(0, 1)]);
        assert_eq!(mean, r(1, 4));
    }

    #[test]
    fn adversary_against_constant() {
        let c = ConstantLearner::new(1, 1);
        let rep = nfl_adversary(&c, &[0, 1], &[1, 1], &[2, 2]).unwrap();
        assert_eq!(rep.f.values, vec![2, 2]);
        assert_eq!(rep.index_set, IndexSet::empty());
        assert_eq!(rep.expected_risk, r(1, 1));
        assert_eq!(rep.tail_probability, r(1, 1));
        assert_eq!(rep.mixtures_examined, 1);
        assert!(rep.tail_meets_bound);
        let h = Hypothesis::support(vec![(0, 2), (1, 2)]);
        assert!(crate::model::true_risk::<Rational>(&h, &rep.distribution).is_zero());
    }

    #[test]
    fn adversary_against_even_erm() {
        let points = [0, 1, 2, 3];
        let g1 = [0, 0, 0, 0];
        let g2 = [1, 1, 1, 1];
        let rows: Vec<Vec<Label>> = (0..16u64)
            .filter(|b| b.count_ones() % 2 == 0)
            .map(|b| build(IndexSet::from_bits(b), &g1, &g2))
            .collect();
        let erm = ErmLearner::new(HypothesisClass::from_tables(2, rows).unwrap()).unwrap();
        let rep = nfl_adversary(&erm, &points, &g1, &g2).unwrap();
        assert!(rep.mixtures_examined <= 16);
        assert!(rep.expected_risk >= r(1, 4));
        assert!(rep.tail_probability >= r(1, 7));
        assert_eq!(build(rep.index_set, &g1, &g2), rep.f.values);
        assert_eq!(nfl_adversary(&erm, &points, &g1, &g2).unwrap(), rep);
    }

    fn build(set: IndexSet, g1: &[Label], g2: &[Label]) -> Vec<Label> {
        crate::model::build_mixture(set, g1, g2).unwrap()
    }

    #[test]
    fn adversary_preconditions() {
        let c = ConstantLearner::new(0, 3);
        assert!(nfl_adversary(&c, &[0, 1, 2], &[0, 0, 0], &[1, 1, 1]).is_err());
        assert!(nfl_adversary(&c, &[0, 1], &[0, 1], &[0, 0]).is_err());
        assert!(nfl_adversary(&c, &[1, 1], &[0, 0], &[1, 1]).is_err());
        assert!(exact_expected_risk(&c, &lab(&[0, 1, 2], &[0, 0, 0]), 1).is_err());
    }
}
