//! Domain model: labels, points, hypotheses, classes, samples and
//! distributions, plus the elementary operations on them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{is_positive, Scalar};

/// Domain element. Classes over ℕ use the full range.
pub type Point = u32;

/// Index into the label alphabet `{0, …, q-1}`. Label 0 is the default label.
pub type Label = u32;

/// Label tuple aligned with some point tuple.
pub type Pattern = Vec<Label>;

/// Subset of coordinate positions `{0, …, n-1}`, stored as a bitmask.
///
/// Positions are 0-based throughout the crate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet(u64);

impl IndexSet {
    pub const MAX_ARITY: usize = 63;

    pub fn empty() -> Self {
        IndexSet(0)
    }

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= Self::MAX_ARITY);
        IndexSet((1u64 << n) - 1)
    }

    pub fn from_bits(bits: u64) -> Self {
        IndexSet(bits)
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        IndexSet(indices.into_iter().fold(0, |acc, i| acc | (1u64 << i)))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Members in increasing order.
    pub fn indices(self) -> Vec<usize> {
        (0..64).filter(|&i| self.contains(i)).collect()
    }

    pub fn complement(self, n: usize) -> Self {
        IndexSet(!self.0 & Self::full(n).0)
    }

    /// Whether every member is below `n`.
    pub fn fits(self, n: usize) -> bool {
        self.0 & !Self::full(n).0 == 0
    }
}

/// `f_{I,y,y'}`: take `y[i]` where `i ∈ I` and `y'[i]` elsewhere.
pub fn build_mixture(set: IndexSet, y: &[Label], y_prime: &[Label]) -> Result<Pattern> {
    if y.len() != y_prime.len() {
        return Err(Error::Arity { expected: y.len(), got: y_prime.len() });
    }
    if !set.fits(y.len()) {
        return Err(Error::precondition("index set exceeds labeling arity"));
    }
    Ok((0..y.len()).map(|i| if set.contains(i) { y[i] } else { y_prime[i] }).collect())
}

/// Whether two labelings differ at every coordinate.
pub fn componentwise_distinct(a: &[Label], b: &[Label]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x != y)
}

/// Points paired with their labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Labeling {
    pub points: Vec<Point>,
    pub values: Pattern,
}

impl Labeling {
    pub fn new(points: Vec<Point>, values: Pattern) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::Arity { expected: points.len(), got: values.len() });
        }
        Ok(Labeling { points, values })
    }

    pub fn arity(&self) -> usize {
        self.points.len()
    }

    /// `f_{I,self,other}` on the shared point tuple.
    pub fn mixture(&self, set: IndexSet, other: &Labeling) -> Result<Labeling> {
        if self.points != other.points {
            return Err(Error::precondition("mixture of labelings over different points"));
        }
        Ok(Labeling { points: self.points.clone(), values: build_mixture(set, &self.values, &other.values)? })
    }
}

/// Total map from points to labels.
///
/// `Table` is indexed by point and reads as 0 past its end; `Support` lists
/// the finitely many nonzero values. Both are immutable values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Hypothesis {
    Table(Vec<Label>),
    Support(BTreeMap<Point, Label>),
}

impl Hypothesis {
    pub fn table(values: Vec<Label>) -> Self {
        Hypothesis::Table(values)
    }

    /// Finite-support hypothesis; explicit zeros are dropped.
    pub fn support(entries: impl IntoIterator<Item = (Point, Label)>) -> Self {
        Hypothesis::Support(entries.into_iter().filter(|&(_, y)| y != 0).collect())
    }

    pub fn zero() -> Self {
        Hypothesis::Support(BTreeMap::new())
    }

    pub fn eval(&self, x: Point) -> Label {
        match self {
            Hypothesis::Table(t) => t.get(x as usize).copied().unwrap_or(0),
            Hypothesis::Support(m) => m.get(&x).copied().unwrap_or(0),
        }
    }

    pub fn project(&self, points: &[Point]) -> Pattern {
        points.iter().map(|&x| self.eval(x)).collect()
    }

    /// Largest point with a nonzero value, `None` for the zero function.
    pub fn max_support(&self) -> Option<Point> {
        match self {
            Hypothesis::Table(t) => t.iter().rposition(|&y| y != 0).map(|i| i as Point),
            Hypothesis::Support(m) => m.keys().next_back().copied(),
        }
    }

    /// Agrees with `self` on `[0, bound]` and is 0 beyond it.
    pub fn truncate(&self, bound: Point) -> Hypothesis {
        Hypothesis::support(self.nonzero_entries().into_iter().filter(|&(x, _)| x <= bound))
    }

    pub fn nonzero_entries(&self) -> Vec<(Point, Label)> {
        match self {
            Hypothesis::Table(t) => t
                .iter()
                .enumerate()
                .filter(|&(_, &y)| y != 0)
                .map(|(x, &y)| (x as Point, y))
                .collect(),
            Hypothesis::Support(m) => m.iter().map(|(&x, &y)| (x, y)).collect(),
        }
    }

    pub fn max_label(&self) -> Label {
        self.nonzero_entries().into_iter().map(|(_, y)| y).max().unwrap_or(0)
    }

    fn normalized(&self, domain: Domain) -> Result<Hypothesis> {
        match domain {
            Domain::Finite(n) => {
                if let Some(m) = self.max_support() {
                    if m >= n {
                        return Err(Error::Domain { point: m, size: n });
                    }
                }
                Ok(Hypothesis::Table((0..n).map(|x| self.eval(x)).collect()))
            }
            Domain::Naturals => Ok(Hypothesis::support(self.nonzero_entries())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    /// Points `0..n`.
    Finite(u32),
    /// All of ℕ.
    Naturals,
}

impl Domain {
    pub fn check(self, x: Point) -> Result<()> {
        match self {
            Domain::Finite(n) if x >= n => Err(Error::Domain { point: x, size: n }),
            _ => Ok(()),
        }
    }

    pub fn size(self) -> Option<u32> {
        match self {
            Domain::Finite(n) => Some(n),
            Domain::Naturals => None,
        }
    }
}

/// Procedure returning the behaviors `H|_T` of a class on a point tuple.
pub trait BehaviorOracle: Send + Sync {
    fn behaviors(&self, points: &[Point]) -> Result<BTreeSet<Pattern>>;
}

#[derive(Clone)]
pub enum ClassBody {
    Explicit(Vec<Hypothesis>),
    Oracle(Arc<dyn BehaviorOracle>),
}

/// A hypothesis class over a finite label alphabet.
#[derive(Clone)]
pub struct HypothesisClass {
    domain: Domain,
    labels: u32,
    body: ClassBody,
}

impl fmt::Debug for HypothesisClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("HypothesisClass");
        d.field("domain", &self.domain).field("labels", &self.labels);
        match &self.body {
            ClassBody::Explicit(hs) => d.field("hypotheses", hs),
            ClassBody::Oracle(_) => d.field("oracle", &"<procedure>"),
        };
        d.finish()
    }
}

impl HypothesisClass {
    /// Explicit class. Hypotheses are normalized to the domain's
    /// representation; duplicates are an error.
    pub fn explicit(domain: Domain, labels: u32, hypotheses: Vec<Hypothesis>) -> Result<Self> {
        let (class, dups) = Self::explicit_dedup(domain, labels, hypotheses)?;
        if let Some(&(i, j)) = dups.first() {
            return Err(Error::Representation(format!("hypothesis {j} duplicates hypothesis {i}")));
        }
        Ok(class)
    }

    /// Explicit class keeping the first copy of each duplicate; returns the
    /// `(kept, dropped)` index pairs.
    pub fn explicit_dedup(
        domain: Domain,
        labels: u32,
        hypotheses: Vec<Hypothesis>,
    ) -> Result<(Self, Vec<(usize, usize)>)> {
        if labels == 0 {
            return Err(Error::Representation("label alphabet must contain label 0".into()));
        }
        let mut seen: BTreeMap<Hypothesis, usize> = BTreeMap::new();
        let mut kept = Vec::with_capacity(hypotheses.len());
        let mut dups = Vec::new();
        for (j, h) in hypotheses.into_iter().enumerate() {
            let h = h.normalized(domain)?;
            let top = h.max_label();
            if top >= labels {
                return Err(Error::LabelOverflow { label: top, labels });
            }
            match seen.get(&h) {
                Some(&i) => dups.push((i, j)),
                None => {
                    seen.insert(h.clone(), j);
                    kept.push(h);
                }
            }
        }
        Ok((HypothesisClass { domain, labels, body: ClassBody::Explicit(kept) }, dups))
    }

    /// Tables over `[0, n)`, one row per hypothesis.
    pub fn from_tables(labels: u32, rows: Vec<Vec<Label>>) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::Arity { expected: n, got: bad.len() });
        }
        Self::explicit(Domain::Finite(n as u32), labels, rows.into_iter().map(Hypothesis::Table).collect())
    }

    pub fn from_oracle(domain: Domain, labels: u32, oracle: Arc<dyn BehaviorOracle>) -> Self {
        HypothesisClass { domain, labels, body: ClassBody::Oracle(oracle) }
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Alphabet size `q = l + 1`.
    pub fn labels(&self) -> u32 {
        self.labels
    }

    pub fn body(&self) -> &ClassBody {
        &self.body
    }

    pub fn hypotheses(&self) -> Option<&[Hypothesis]> {
        match &self.body {
            ClassBody::Explicit(hs) => Some(hs),
            ClassBody::Oracle(_) => None,
        }
    }

    pub fn len(&self) -> Option<usize> {
        self.hypotheses().map(<[Hypothesis]>::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// Largest nonzero point over all hypotheses, for explicit classes.
    pub fn max_support(&self) -> Option<Point> {
        self.hypotheses()?.iter().filter_map(Hypothesis::max_support).max()
    }

    /// Same hypotheses viewed over ℕ with zero padding.
    pub fn zero_padded(&self) -> Result<Self> {
        match &self.body {
            ClassBody::Explicit(hs) => Self::explicit(Domain::Naturals, self.labels, hs.clone()),
            ClassBody::Oracle(_) => Err(Error::Unsupported("zero padding an oracle class".into())),
        }
    }

    /// `H|_X`, deduplicated and in lexicographic order.
    pub fn restrict(&self, points: &[Point]) -> Result<BehaviorSet> {
        check_distinct(points)?;
        for &x in points {
            self.domain.check(x)?;
        }
        let patterns = match &self.body {
            ClassBody::Explicit(hs) => hs.iter().map(|h| h.project(points)).collect(),
            ClassBody::Oracle(o) => {
                let ps = o.behaviors(points)?;
                for p in &ps {
                    if p.len() != points.len() {
                        return Err(Error::Representation(format!(
                            "oracle returned pattern of arity {} for {} points",
                            p.len(),
                            points.len()
                        )));
                    }
                    if let Some(&y) = p.iter().find(|&&y| y >= self.labels) {
                        return Err(Error::LabelOverflow { label: y, labels: self.labels });
                    }
                }
                ps
            }
        };
        Ok(BehaviorSet { points: points.to_vec(), patterns })
    }
}

pub(crate) fn check_distinct(points: &[Point]) -> Result<()> {
    let set: BTreeSet<_> = points.iter().collect();
    if set.len() != points.len() {
        return Err(Error::precondition(format!("duplicate points in {points:?}")));
    }
    Ok(())
}

/// Restriction of a class to an ordered point tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BehaviorSet {
    pub points: Vec<Point>,
    pub patterns: BTreeSet<Pattern>,
}

impl BehaviorSet {
    pub fn new(points: Vec<Point>, patterns: BTreeSet<Pattern>) -> Result<Self> {
        check_distinct(&points)?;
        if let Some(p) = patterns.iter().find(|p| p.len() != points.len()) {
            return Err(Error::Arity { expected: points.len(), got: p.len() });
        }
        Ok(BehaviorSet { points, patterns })
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn contains(&self, pattern: &[Label]) -> bool {
        self.patterns.contains(pattern)
    }

    /// Keep the coordinates at the given positions.
    pub fn project(&self, coords: &[usize]) -> BehaviorSet {
        BehaviorSet {
            points: coords.iter().map(|&i| self.points[i]).collect(),
            patterns: self.patterns.iter().map(|p| coords.iter().map(|&i| p[i]).collect()).collect(),
        }
    }

    /// Values taken at each coordinate.
    pub fn column_values(&self) -> Vec<BTreeSet<Label>> {
        let mut cols = vec![BTreeSet::new(); self.points.len()];
        for p in &self.patterns {
            for (c, &y) in cols.iter_mut().zip(p) {
                c.insert(y);
            }
        }
        cols
    }
}

/// Ordered sample `((x_1,y_1), …, (x_m,y_m))`; repeats allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabeledSample {
    pairs: Vec<(Point, Label)>,
}

impl LabeledSample {
    pub fn new(pairs: Vec<(Point, Label)>) -> Self {
        LabeledSample { pairs }
    }

    pub fn pairs(&self) -> &[(Point, Label)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Distinct sample points, ascending.
    pub fn distinct_points(&self) -> Vec<Point> {
        self.pairs.iter().map(|&(x, _)| x).collect::<BTreeSet<_>>().into_iter().collect()
    }
}

/// `(1/m)·#{i : h(x_i) ≠ y_i}`.
pub fn empirical_risk<T: Scalar>(h: &Hypothesis, sample: &LabeledSample) -> Result<T> {
    if sample.is_empty() {
        return Err(Error::precondition("empirical risk of an empty sample"));
    }
    let errors = sample.pairs().iter().filter(|&&(x, y)| h.eval(x) != y).count();
    Ok(T::from_ratio(errors as u64, sample.len() as u64))
}

/// Finite-support distribution over `(point, label)` pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteDistribution<T> {
    atoms: Vec<((Point, Label), T)>,
}

impl<T: Scalar> FiniteDistribution<T> {
    /// Atoms are sorted by key; weights must be positive, keys distinct, and
    /// the total mass one.
    pub fn new(mut atoms: Vec<((Point, Label), T)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::precondition("distribution without atoms"));
        }
        atoms.sort_by_key(|a| a.0);
        if atoms.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::precondition("repeated atom in distribution"));
        }
        if !atoms.iter().all(|(_, w)| is_positive(w)) {
            return Err(Error::precondition("nonpositive atom weight"));
        }
        let total = atoms.iter().fold(T::zero(), |acc, (_, w)| acc + w.clone());
        if !total.is_unit() {
            return Err(Error::precondition(format!("weights sum to {total:?}, not 1")));
        }
        Ok(FiniteDistribution { atoms })
    }

    /// Uniform over the given distinct pairs.
    pub fn uniform(pairs: impl IntoIterator<Item = (Point, Label)>) -> Result<Self> {
        let pairs: Vec<_> = pairs.into_iter().collect();
        let n = pairs.len() as u64;
        Self::new(pairs.into_iter().map(|p| (p, T::from_ratio(1, n))).collect())
    }

    /// Uniform over the graph `{(x_i, f(x_i))}` of a labeling.
    pub fn uniform_on_graph(labeling: &Labeling) -> Result<Self> {
        check_distinct(&labeling.points)?;
        Self::uniform(labeling.points.iter().copied().zip(labeling.values.iter().copied()))
    }

    pub fn atoms(&self) -> &[((Point, Label), T)] {
        &self.atoms
    }
}

/// Weight of the atoms `h` misclassifies.
pub fn true_risk<T: Scalar>(h: &Hypothesis, dist: &FiniteDistribution<T>) -> T {
    dist.atoms
        .iter()
        .filter(|((x, y), _)| h.eval(*x) != *y)
        .fold(T::zero(), |acc, (_, w)| acc + w.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use num_traits::Zero;

    fn q(n: u64, d: u64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn three() -> HypothesisClass {
        HypothesisClass::from_tables(3, vec![vec![0, 1], vec![1, 0], vec![2, 2]]).unwrap()
    }

    fn set(ps: &[&[Label]]) -> BTreeSet<Pattern> {
        ps.iter().map(|p| p.to_vec()).collect()
    }

    #[test]
    fn restrict_projects_columns() {
        let h = three();
        assert_eq!(h.restrict(&[0]).unwrap().patterns, set(&[&[0], &[1], &[2]]));
        let both = h.restrict(&[0, 1]).unwrap();
        assert_eq!(both.len(), 3);
        assert_eq!(both.patterns, set(&[&[0, 1], &[1, 0], &[2, 2]]));
    }

    #[test]
    fn restrict_finite_support_defaults_to_zero() {
        let h = HypothesisClass::explicit(
            Domain::Naturals,
            3,
            vec![Hypothesis::support([(0, 1)]), Hypothesis::support([(5, 2)])],
        )
        .unwrap();
        assert_eq!(h.restrict(&[0, 5]).unwrap().patterns, set(&[&[1, 0], &[0, 2]]));
    }

    #[test]
    fn restrict_rejects_bad_points() {
        let h = three();
        assert_eq!(h.restrict(&[2]).unwrap_err(), Error::Domain { point: 2, size: 2 });
        assert!(matches!(h.restrict(&[1, 1]), Err(Error::Precondition(_))));
    }

    struct BadOracle;
    impl BehaviorOracle for BadOracle {
        fn behaviors(&self, _points: &[Point]) -> Result<BTreeSet<Pattern>> {
            Ok(set(&[&[0, 0, 0]]))
        }
    }

    #[test]
    fn oracle_arity_is_checked() {
        let h = HypothesisClass::from_oracle(Domain::Naturals, 2, Arc::new(BadOracle));
        assert!(matches!(h.restrict(&[0]), Err(Error::Representation(_))));
    }

    #[test]
    fn explicit_classes_reject_duplicates_and_overflow() {
        assert!(HypothesisClass::from_tables(2, vec![vec![0, 1], vec![0, 1]]).is_err());
        assert_eq!(
            HypothesisClass::from_tables(2, vec![vec![0, 2]]).unwrap_err(),
            Error::LabelOverflow { label: 2, labels: 2 }
        );
        // a table and a support record of the same function collapse
        let (c, dups) = HypothesisClass::explicit_dedup(
            Domain::Naturals,
            3,
            vec![Hypothesis::table(vec![0, 2]), Hypothesis::support([(1, 2)])],
        )
        .unwrap();
        assert_eq!(c.len(), Some(1));
        assert_eq!(dups, vec![(0, 1)]);
    }

    #[test]
    fn empirical_risk_examples() {
        let s = |pairs: &[(Point, Label)]| LabeledSample::new(pairs.to_vec());
        let r: Rational = empirical_risk(&Hypothesis::table(vec![2, 2]), &s(&[(0, 2), (1, 2)])).unwrap();
        assert!(r.is_zero());
        let r: Rational = empirical_risk(&Hypothesis::table(vec![0, 1]), &s(&[(0, 0), (1, 0)])).unwrap();
        assert_eq!(r, q(1, 2));
        let r: Rational = empirical_risk(&Hypothesis::table(vec![0, 1]), &s(&[(0, 1), (0, 1), (1, 1)])).unwrap();
        assert_eq!(r, q(2, 3));
        assert!(empirical_risk::<Rational>(&Hypothesis::zero(), &s(&[])).is_err());
    }

    #[test]
    fn true_risk_examples() {
        let f = Labeling::new(vec![0, 1], vec![1, 2]).unwrap();
        let d = FiniteDistribution::<Rational>::uniform_on_graph(&f).unwrap();
        assert!(true_risk(&Hypothesis::table(f.values.clone()), &d).is_zero());

        let d = FiniteDistribution::<Rational>::uniform([(0, 2), (1, 2)]).unwrap();
        assert_eq!(true_risk(&Hypothesis::table(vec![1, 1]), &d), q(1, 1));

        let d = FiniteDistribution::new(vec![((0, 1), q(1, 3)), ((1, 1), q(2, 3))]).unwrap();
        assert_eq!(true_risk(&Hypothesis::table(vec![1, 2]), &d), q(2, 3));
    }

    #[test]
    fn distribution_validation() {
        assert!(FiniteDistribution::new(vec![((0, 1), q(1, 2))]).is_err());
        assert!(FiniteDistribution::new(vec![((0, 1), q(1, 2)), ((0, 1), q(1, 2))]).is_err());
        assert!(FiniteDistribution::new(vec![((0, 1), q(1, 1)), ((0, 2), q(0, 1))]).is_err());
        let f: FiniteDistribution<f64> = FiniteDistribution::uniform([(0, 0), (1, 0), (2, 0)]).unwrap();
        assert_eq!(f.atoms().len(), 3);
    }

    #[test]
    fn mixture_examples() {
        let y = [0, 0];
        let yp = [1, 1];
        assert_eq!(build_mixture(IndexSet::full(2), &y, &yp).unwrap(), vec![0, 0]);
        assert_eq!(build_mixture(IndexSet::empty(), &y, &yp).unwrap(), vec![1, 1]);
        assert_eq!(build_mixture(IndexSet::from_indices([0]), &y, &yp).unwrap(), vec![0, 1]);
        assert!(build_mixture(IndexSet::empty(), &[0], &yp).is_err());
        assert!(build_mixture(IndexSet::from_indices([2]), &y, &yp).is_err());
    }

    #[test]
    fn truncate_and_max_support() {
        assert_eq!(Hypothesis::zero().max_support(), None);
        assert_eq!(Hypothesis::zero().truncate(7), Hypothesis::zero());
        let h = Hypothesis::support([(3, 5), (9, 1)]);
        assert_eq!(h.max_support(), Some(9));
        assert_eq!(h.truncate(5), Hypothesis::support([(3, 5)]));
        let h = Hypothesis::support([(0, 1)]);
        assert_eq!(h.truncate(0), h);
        assert_eq!(Hypothesis::table(vec![0, 2, 0]).max_support(), Some(1));
    }

    #[test]
    fn index_set_ops() {
        let s = IndexSet::from_indices([0, 2]);
        assert_eq!(s.indices(), vec![0, 2]);
        assert_eq!(s.complement(3), IndexSet::from_indices([1]));
        assert_eq!(s.len(), 2);
        assert!(!s.fits(2));
        assert!(s.fits(3));
    }
}
