//! Shattering predicates and exact dimension search.
//!
//! Each notion is decided on the behavior set `H|_X`. Searches over
//! certificates go coordinate by coordinate and prune on projections: every
//! notion here is inherited by sub-tuples, so a prefix that is not shattered
//! cannot be extended.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigUint;
use num_traits::One;

use crate::combinatorics::subsets_of_size;
use crate::error::{Error, Result};
use crate::model::{BehaviorSet, Domain, HypothesisClass, Label, Pattern, Point};
use crate::psi::PsiFamily;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DimensionKind {
    /// Binary classes only.
    Vc,
    Natarajan,
    Graph,
    Ds,
    Psi(PsiFamily),
}

impl DimensionKind {
    pub fn name(&self) -> &'static str {
        match self {
            DimensionKind::Vc => "vc",
            DimensionKind::Natarajan => "natarajan",
            DimensionKind::Graph => "graph",
            DimensionKind::Ds => "ds",
            DimensionKind::Psi(_) => "psi",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShatterEvidence {
    /// All `2^d` binary patterns occur.
    Vc,
    /// Every mixture of `g1` and `g2` occurs.
    Natarajan { g1: Pattern, g2: Pattern },
    /// Every equality mask against `f` occurs.
    Graph { f: Pattern },
    /// A pseudo-cube inside `H|_X`.
    Ds { cube: BTreeSet<Pattern> },
    /// Member indices of `ψ̄`.
    Psi { members: Vec<usize> },
}

/// Checkable proof that a point tuple is shattered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShatterCertificate {
    pub points: Vec<Point>,
    pub evidence: ShatterEvidence,
}

impl ShatterCertificate {
    /// Re-derive the shattering claim from the class.
    pub fn verify(&self, class: &HypothesisClass, kind: &DimensionKind) -> Result<bool> {
        let b = class.restrict(&self.points)?;
        let d = self.points.len();
        Ok(match (&self.evidence, kind) {
            (ShatterEvidence::Vc, DimensionKind::Vc) => class.labels() == 2 && b.len() == 1 << d,
            (ShatterEvidence::Natarajan { g1, g2 }, DimensionKind::Natarajan) => {
                g1.len() == d
                    && crate::model::componentwise_distinct(g1, g2)
                    && (0u64..1 << d).all(|bits| {
                        let m: Pattern =
                            (0..d).map(|i| if bits >> i & 1 == 1 { g1[i] } else { g2[i] }).collect();
                        b.contains(&m)
                    })
            }
            (ShatterEvidence::Graph { f }, DimensionKind::Graph) => {
                f.len() == d && equality_masks(&b.patterns, f).len() == 1 << d
            }
            (ShatterEvidence::Ds { cube }, DimensionKind::Ds) => {
                cube.iter().all(|p| b.contains(p)) && is_pseudo_cube(cube).unwrap_or(false) && {
                    cube.iter().next().is_some_and(|p| p.len() == d)
                }
            }
            (ShatterEvidence::Psi { members }, DimensionKind::Psi(family)) => {
                members.len() == d
                    && members.iter().all(|&i| i < family.len())
                    && psi_images(&b.patterns, &family.select(members)).len() == 1 << d
            }
            _ => false,
        })
    }
}

fn prefix_sets(patterns: &BTreeSet<Pattern>, d: usize) -> Vec<HashSet<Pattern>> {
    (1..=d).map(|j| patterns.iter().map(|p| p[..j].to_vec()).collect()).collect()
}

fn equality_masks(patterns: &BTreeSet<Pattern>, f: &[Label]) -> BTreeSet<u64> {
    patterns
        .iter()
        .map(|p| p.iter().zip(f).enumerate().fold(0, |m, (i, (a, b))| if a == b { m | 1 << i } else { m }))
        .collect()
}

fn psi_images(patterns: &BTreeSet<Pattern>, psis: &[&crate::psi::PsiFunction]) -> BTreeSet<Vec<bool>> {
    patterns.iter().filter_map(|p| crate::psi::apply_tuple(psis, p)).collect()
}

/// VC shattering of a binary behavior set.
pub fn vc_shatters(b: &BehaviorSet) -> bool {
    b.len() == 1usize << b.points.len() && b.patterns.iter().flatten().all(|&y| y <= 1)
}

/// Lexicographically first `(g1, g2)` whose mixtures all occur, with
/// `g1[i] < g2[i]` at every coordinate.
pub fn natarajan_pair(b: &BehaviorSet) -> Option<(Pattern, Pattern)> {
    let d = b.points.len();
    let cols: Vec<Vec<Label>> = b.column_values().into_iter().map(|c| c.into_iter().collect()).collect();
    let prefixes = prefix_sets(&b.patterns, d);
    let mut chosen: Vec<(Label, Label)> = Vec::with_capacity(d);

    fn mixtures_present(chosen: &[(Label, Label)], prefixes: &HashSet<Pattern>) -> bool {
        let j = chosen.len();
        (0u64..1 << j).all(|bits| {
            let m: Pattern =
                (0..j).map(|i| if bits >> i & 1 == 1 { chosen[i].0 } else { chosen[i].1 }).collect();
            prefixes.contains(&m)
        })
    }

    fn go(
        depth: usize,
        cols: &[Vec<Label>],
        prefixes: &[HashSet<Pattern>],
        chosen: &mut Vec<(Label, Label)>,
    ) -> bool {
        if depth == cols.len() {
            return true;
        }
        let col = &cols[depth];
        for (ai, &a) in col.iter().enumerate() {
            for &c in &col[ai + 1..] {
                chosen.push((a, c));
                if mixtures_present(chosen, &prefixes[depth]) && go(depth + 1, cols, prefixes, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }

    if d == 0 {
        return if b.is_empty() { None } else { Some((vec![], vec![])) };
    }
    go(0, &cols, &prefixes, &mut chosen).then(|| chosen.iter().map(|&(a, c)| (a, c)).unzip())
}

/// Lexicographically first `f` against which every equality mask occurs.
pub fn graph_labeling(b: &BehaviorSet) -> Option<Pattern> {
    let d = b.points.len();
    if b.is_empty() {
        return None;
    }
    let cols: Vec<Vec<Label>> = b.column_values().into_iter().map(|c| c.into_iter().collect()).collect();
    let prefixes: Vec<BTreeSet<Pattern>> =
        prefix_sets(&b.patterns, d).into_iter().map(|s| s.into_iter().collect()).collect();
    let mut f = Vec::with_capacity(d);

    fn go(depth: usize, cols: &[Vec<Label>], prefixes: &[BTreeSet<Pattern>], f: &mut Pattern) -> bool {
        if depth == cols.len() {
            return true;
        }
        for &v in &cols[depth] {
            f.push(v);
            if equality_masks(&prefixes[depth], f).len() == 1 << f.len() && go(depth + 1, cols, prefixes, f) {
                return true;
            }
            f.pop();
        }
        false
    }

    go(0, &cols, &prefixes, &mut f).then_some(f)
}

/// Whether a finite pattern set of uniform arity is a pseudo-cube: nonempty,
/// and each pattern has, for every coordinate, a neighbor differing there
/// and only there.
pub fn is_pseudo_cube(patterns: &BTreeSet<Pattern>) -> Result<bool> {
    let Some(first) = patterns.iter().next() else {
        return Ok(false);
    };
    let d = first.len();
    if let Some(bad) = patterns.iter().find(|p| p.len() != d) {
        return Err(Error::Arity { expected: d, got: bad.len() });
    }
    Ok(patterns.iter().all(|p| (0..d).all(|i| has_neighbor(patterns, p, i))))
}

fn has_neighbor(patterns: &BTreeSet<Pattern>, p: &Pattern, i: usize) -> bool {
    // neighbors along i share the prefix before i, so scan that range only
    let lo: Pattern = p[..i].to_vec();
    patterns
        .range(lo..)
        .take_while(|g| g[..i] == p[..i])
        .any(|g| g[i] != p[i] && g[i + 1..] == p[i + 1..])
}

/// Largest subset closed under having a neighbor in every coordinate: the
/// union of all pseudo-cubes inside `patterns` (empty if there is none).
pub fn ds_fixpoint(patterns: &BTreeSet<Pattern>) -> BTreeSet<Pattern> {
    let mut current = patterns.clone();
    let d = current.iter().next().map_or(0, Vec::len);
    if d == 0 {
        return current;
    }
    loop {
        let doomed: Vec<Pattern> =
            current.iter().filter(|p| !(0..d).all(|i| has_neighbor(&current, p, i))).cloned().collect();
        if doomed.is_empty() {
            return current;
        }
        for p in doomed {
            current.remove(&p);
        }
    }
}

/// Lexicographically first member tuple `ψ̄` with `{0,1}^d ⊆ ψ̄(H|_X)`.
pub fn psi_members(b: &BehaviorSet, family: &PsiFamily) -> Option<Vec<usize>> {
    let d = b.points.len();
    let prefixes: Vec<BTreeSet<Pattern>> =
        prefix_sets(&b.patterns, d).into_iter().map(|s| s.into_iter().collect()).collect();
    let mut chosen = Vec::with_capacity(d);

    fn go(depth: usize, d: usize, family: &PsiFamily, prefixes: &[BTreeSet<Pattern>], chosen: &mut Vec<usize>) -> bool {
        if depth == d {
            return true;
        }
        for m in 0..family.len() {
            chosen.push(m);
            if psi_images(&prefixes[depth], &family.select(chosen)).len() == 1 << chosen.len()
                && go(depth + 1, d, family, prefixes, chosen)
            {
                return true;
            }
            chosen.pop();
        }
        false
    }

    if b.is_empty() {
        return None;
    }
    go(0, d, family, &prefixes, &mut chosen).then_some(chosen)
}

fn check_alphabet(class: &HypothesisClass, kind: &DimensionKind) -> Result<()> {
    match kind {
        DimensionKind::Vc if class.labels() != 2 => {
            Err(Error::precondition(format!("VC dimension needs binary labels, class has {}", class.labels())))
        }
        DimensionKind::Psi(f) if f.labels() != class.labels() => Err(Error::precondition(format!(
            "Ψ family over {} labels, class over {}",
            f.labels(),
            class.labels()
        ))),
        _ => Ok(()),
    }
}

/// Shattering evidence for `points` on an already restricted behavior set.
pub fn shatter_behaviors(b: &BehaviorSet, kind: &DimensionKind) -> Option<ShatterEvidence> {
    match kind {
        DimensionKind::Vc => vc_shatters(b).then_some(ShatterEvidence::Vc),
        DimensionKind::Natarajan => natarajan_pair(b).map(|(g1, g2)| ShatterEvidence::Natarajan { g1, g2 }),
        DimensionKind::Graph => graph_labeling(b).map(|f| ShatterEvidence::Graph { f }),
        DimensionKind::Ds => {
            let cube = ds_fixpoint(&b.patterns);
            (!cube.is_empty()).then_some(ShatterEvidence::Ds { cube })
        }
        DimensionKind::Psi(family) => psi_members(b, family).map(|members| ShatterEvidence::Psi { members }),
    }
}

pub fn shattered(class: &HypothesisClass, points: &[Point], kind: &DimensionKind) -> Result<Option<ShatterCertificate>> {
    check_alphabet(class, kind)?;
    let b = class.restrict(points)?;
    Ok(shatter_behaviors(&b, kind).map(|evidence| ShatterCertificate { points: points.to_vec(), evidence }))
}

pub fn is_n_shattered(class: &HypothesisClass, points: &[Point]) -> Result<Option<ShatterCertificate>> {
    shattered(class, points, &DimensionKind::Natarajan)
}

pub fn is_g_shattered(class: &HypothesisClass, points: &[Point]) -> Result<Option<ShatterCertificate>> {
    shattered(class, points, &DimensionKind::Graph)
}

pub fn is_ds_shattered(class: &HypothesisClass, points: &[Point]) -> Result<Option<ShatterCertificate>> {
    shattered(class, points, &DimensionKind::Ds)
}

pub fn is_psi_shattered(
    class: &HypothesisClass,
    points: &[Point],
    family: &PsiFamily,
) -> Result<Option<ShatterCertificate>> {
    shattered(class, points, &DimensionKind::Psi(family.clone()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionResult {
    pub dimension: usize,
    /// Lexicographically first maximal shattered tuple; `None` at dimension 0.
    pub certificate: Option<ShatterCertificate>,
    /// Largest point searched.
    pub window: Option<Point>,
    pub warnings: Vec<String>,
}

/// Search window for a class: the whole finite domain, or the largest
/// nonzero point of an explicit class over ℕ. Points past every support are
/// constantly 0 and cannot be in a shattered set.
fn resolve_window(class: &HypothesisClass, window: Option<Point>, warnings: &mut Vec<String>) -> Result<Option<Point>> {
    match (class.domain(), window) {
        (Domain::Finite(n), Some(m)) => {
            if m >= n {
                return Err(Error::Domain { point: m, size: n });
            }
            if m + 1 < n {
                warnings.push(format!("window [0,{m}] covers only part of the domain [0,{n})"));
            }
            Ok(Some(m))
        }
        (Domain::Finite(n), None) => Ok(n.checked_sub(1)),
        (Domain::Naturals, w) => {
            let support = class.max_support();
            match (w, support) {
                (Some(m), Some(s)) if m < s => {
                    warnings.push(format!("window [0,{m}] does not contain the class support up to {s}"));
                    Ok(Some(m))
                }
                (Some(m), _) => Ok(Some(m)),
                (None, Some(s)) => Ok(Some(s)),
                (None, None) if class.hypotheses().is_some() => Ok(None),
                (None, None) => Err(Error::precondition("oracle classes need an explicit window")),
            }
        }
    }
}

/// Size of the largest shattered tuple inside the window, with a
/// certificate for the lexicographically first one.
pub fn exact_dimension(class: &HypothesisClass, kind: &DimensionKind, window: Option<Point>) -> Result<DimensionResult> {
    check_alphabet(class, kind)?;
    let mut warnings = Vec::new();
    let window = resolve_window(class, window, &mut warnings)?;
    let Some(top) = window else {
        return Ok(DimensionResult { dimension: 0, certificate: None, window, warnings });
    };
    // constant points are never shattered
    let mut live = Vec::new();
    for x in 0..=top {
        if class.restrict(&[x])?.len() > 1 {
            live.push(x);
        }
    }
    let mut best: Option<ShatterCertificate> = None;
    for d in 1..=live.len() {
        let mut found = None;
        for points in subsets_of_size(&live, d) {
            if let Some(c) = shattered(class, &points, kind)? {
                found = Some(c);
                break;
            }
        }
        match found {
            Some(c) => best = Some(c),
            None => break,
        }
    }
    let dimension = best.as_ref().map_or(0, |c| c.points.len());
    Ok(DimensionResult { dimension, certificate: best, window, warnings })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SauerReport {
    pub count: usize,
    pub bound: BigUint,
    pub holds: bool,
}

/// `|H|_T| ≤ |T|^d · q^{2d}` for `d` at least the Natarajan dimension.
pub fn sauer_natarajan_check(class: &HypothesisClass, points: &[Point], d: u32) -> Result<SauerReport> {
    let count = class.restrict(points)?.len();
    let bound = natarajan_behavior_bound(points.len(), class.labels(), d);
    let holds = BigUint::from(count) <= bound;
    Ok(SauerReport { count, bound, holds })
}

/// `m^d · q^{2d}` as an exact integer (`0^0 = 1`).
pub fn natarajan_behavior_bound(m: usize, labels: u32, d: u32) -> BigUint {
    if d == 0 {
        return BigUint::one();
    }
    BigUint::from(m).pow(d) * BigUint::from(labels).pow(2 * d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{full_class, gap_class, six_cycle_class};
    use crate::psi::{make_psi_g, make_psi_n};

    fn three() -> HypothesisClass {
        HypothesisClass::from_tables(3, vec![vec![0, 1], vec![1, 0], vec![2, 2]]).unwrap()
    }

    fn singleton() -> HypothesisClass {
        HypothesisClass::from_tables(2, vec![vec![0, 1]]).unwrap()
    }

    fn pset(ps: &[&[Label]]) -> BTreeSet<Pattern> {
        ps.iter().map(|p| p.to_vec()).collect()
    }

    #[test]
    fn natarajan_examples() {
        let full = full_class(2, 2).unwrap();
        let c = is_n_shattered(&full, &[0, 1]).unwrap().unwrap();
        assert_eq!(c.evidence, ShatterEvidence::Natarajan { g1: vec![0, 0], g2: vec![1, 1] });
        assert!(c.verify(&full, &DimensionKind::Natarajan).unwrap());
        assert!(is_n_shattered(&three(), &[0, 1]).unwrap().is_none());
        assert!(is_n_shattered(&singleton(), &[0]).unwrap().is_none());
    }

    #[test]
    fn graph_examples() {
        let full = full_class(2, 1).unwrap();
        let c = is_g_shattered(&full, &[0, 1]).unwrap().unwrap();
        assert_eq!(c.evidence, ShatterEvidence::Graph { f: vec![0, 0] });
        assert!(is_g_shattered(&singleton(), &[0]).unwrap().is_none());
        let gap = gap_class(3).unwrap();
        let c = is_g_shattered(&gap.class, &[0, 1, 2]).unwrap().unwrap();
        // all-star labeling: h_A equals it exactly off A
        let star = gap.class.labels() - 1;
        assert_eq!(c.evidence, ShatterEvidence::Graph { f: vec![star; 3] });
    }

    #[test]
    fn pseudo_cube_examples() {
        assert!(is_pseudo_cube(&pset(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]])).unwrap());
        assert!(!is_pseudo_cube(&pset(&[&[0, 0], &[0, 1]])).unwrap());
        // C6 written with 1-based digits
        let c6 = pset(&[&[1, 2], &[3, 2], &[3, 4], &[5, 4], &[5, 6], &[1, 6]]);
        assert!(is_pseudo_cube(&c6).unwrap());
        assert!(is_pseudo_cube(&pset(&[&[0, 0], &[1]])).is_err());
        assert!(!is_pseudo_cube(&BTreeSet::new()).unwrap());
    }

    #[test]
    fn ds_examples() {
        let c6 = six_cycle_class().class;
        let c = is_ds_shattered(&c6, &[0, 1]).unwrap().unwrap();
        match &c.evidence {
            ShatterEvidence::Ds { cube } => assert_eq!(cube.len(), 6),
            other => panic!("unexpected {other:?}"),
        }
        assert!(is_ds_shattered(&three(), &[0, 1]).unwrap().is_none());
        assert!(is_ds_shattered(&three(), &[1]).unwrap().is_some());
    }

    #[test]
    fn psi_examples() {
        let full = full_class(1, 2).unwrap();
        let c = is_psi_shattered(&full, &[0], &make_psi_n(2)).unwrap().unwrap();
        // first member is ψ_{0,1}
        assert_eq!(c.evidence, ShatterEvidence::Psi { members: vec![0] });
        let stars = PsiFamily::new(3, vec![crate::psi::PsiFunction::new(vec![crate::psi::PsiValue::Star; 3])]).unwrap();
        assert!(is_psi_shattered(&full, &[0], &stars).unwrap().is_none());
        let c6 = six_cycle_class().class;
        assert!(is_psi_shattered(&c6, &[0, 1], &make_psi_n(5)).unwrap().is_none());
        assert!(is_psi_shattered(&full, &[0], &make_psi_n(1)).is_err());
    }

    #[test]
    fn dimension_examples() {
        let full = full_class(2, 2).unwrap();
        assert_eq!(exact_dimension(&full, &DimensionKind::Natarajan, None).unwrap().dimension, 2);
        let c6 = six_cycle_class().class;
        assert_eq!(exact_dimension(&c6, &DimensionKind::Ds, None).unwrap().dimension, 2);
        assert_eq!(exact_dimension(&c6, &DimensionKind::Natarajan, None).unwrap().dimension, 1);
        assert_eq!(exact_dimension(&c6, &DimensionKind::Graph, None).unwrap().dimension, 2);
        let r = exact_dimension(&singleton(), &DimensionKind::Graph, None).unwrap();
        assert_eq!((r.dimension, r.certificate), (0, None));
        let gap = gap_class(3).unwrap().class;
        assert_eq!(exact_dimension(&gap, &DimensionKind::Natarajan, None).unwrap().dimension, 1);
        assert_eq!(exact_dimension(&gap, &DimensionKind::Graph, None).unwrap().dimension, 3);
        assert_eq!(exact_dimension(&c6, &DimensionKind::Psi(make_psi_g(5)), None).unwrap().dimension, 2);
    }

    #[test]
    fn vc_needs_binary_labels() {
        assert!(exact_dimension(&three(), &DimensionKind::Vc, None).is_err());
        let full = full_class(3, 1).unwrap();
        assert_eq!(exact_dimension(&full, &DimensionKind::Vc, None).unwrap().dimension, 3);
    }

    #[test]
    fn windows_over_naturals() {
        let padded = three().zero_padded().unwrap();
        let r = exact_dimension(&padded, &DimensionKind::Natarajan, None).unwrap();
        assert_eq!((r.dimension, r.window), (1, Some(1)));
        let r = exact_dimension(&padded, &DimensionKind::Natarajan, Some(0)).unwrap();
        assert_eq!(r.dimension, 1);
        assert_eq!(r.warnings.len(), 1);
        let r = exact_dimension(&padded, &DimensionKind::Natarajan, Some(9)).unwrap();
        assert_eq!(r.dimension, 1);
        assert!(exact_dimension(&three(), &DimensionKind::Ds, Some(2)).is_err());
    }

    #[test]
    fn sauer_examples() {
        let r = sauer_natarajan_check(&three(), &[0, 1], 1).unwrap();
        assert_eq!((r.count, r.bound.clone(), r.holds), (3, BigUint::from(18u32), true));
        let r = sauer_natarajan_check(&singleton(), &[0, 1], 0).unwrap();
        assert_eq!((r.count, r.bound.clone(), r.holds), (1, BigUint::one(), true));
        let cube = full_class(3, 1).unwrap();
        let r = sauer_natarajan_check(&cube, &[0, 1, 2], 3).unwrap();
        assert_eq!((r.count, r.bound.clone(), r.holds), (8, BigUint::from(27u32 * 64), true));
    }
}
