//! Named example classes with their expected dimensions and, where one is
//! known, a bundled witness.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::combinatorics::Odometer;
use crate::dimensions::DimensionKind;
use crate::error::{Error, Result};
use crate::model::{Domain, Hypothesis, HypothesisClass, IndexSet, Label, Point};
use crate::psi::{failing_psi_class, make_psi_n, PsiFamily};
use crate::witnesses::{Provenance, Witness};

/// Largest class the constructors will materialize.
pub const HYPOTHESIS_BUDGET: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    /// Stated for the construction and re-checked by the test suite.
    Theorem,
    /// Obtained by running the exact searches.
    Computation,
}

#[derive(Clone, Debug)]
pub struct ExpectedDim {
    pub kind: DimensionKind,
    pub value: usize,
    pub source: Source,
}

#[derive(Clone, Debug)]
pub struct GalleryEntry {
    pub name: String,
    pub class: HypothesisClass,
    pub expected_dims: Vec<ExpectedDim>,
    pub witness: Option<Witness>,
}

fn dim(kind: DimensionKind, value: usize, source: Source) -> ExpectedDim {
    ExpectedDim { kind, value, source }
}

/// All maps `[0, n) → values`, over an alphabet of `labels` symbols.
pub fn full_label_class(n: u32, labels: u32, values: &[Label]) -> Result<HypothesisClass> {
    if values.is_empty() {
        return Err(Error::precondition("no values to label with"));
    }
    let size = (values.len() as u64).checked_pow(n).filter(|&s| s <= HYPOTHESIS_BUDGET);
    if size.is_none() {
        return Err(Error::Budget { budget: HYPOTHESIS_BUDGET as usize });
    }
    let rows = Odometer::uniform(n as usize, values.len())
        .map(|digits| Hypothesis::table(digits.into_iter().map(|d| values[d]).collect()))
        .collect();
    HypothesisClass::explicit(Domain::Finite(n), labels, rows)
}

/// `{0, …, max_label}^{[n]}`.
pub fn full_class(n: u32, max_label: Label) -> Result<HypothesisClass> {
    let values: Vec<Label> = (0..=max_label).collect();
    full_label_class(n, max_label + 1, &values)
}

/// `{(0,1), (1,0), (2,2)}` over three labels.
pub fn three_hypothesis_class() -> GalleryEntry {
    let class = HypothesisClass::from_tables(3, vec![vec![0, 1], vec![1, 0], vec![2, 2]]).expect("static class");
    GalleryEntry {
        name: "three_hypothesis".into(),
        class,
        expected_dims: vec![
            dim(DimensionKind::Natarajan, 1, Source::Computation),
            dim(DimensionKind::Graph, 1, Source::Computation),
            dim(DimensionKind::Ds, 1, Source::Computation),
        ],
        witness: None,
    }
}

/// The 6-cycle `{12, 32, 34, 54, 56, 16}` on two points, labels shifted
/// down by one.
pub fn six_cycle_class() -> GalleryEntry {
    let rows = vec![vec![0, 1], vec![2, 1], vec![2, 3], vec![4, 3], vec![4, 5], vec![0, 5]];
    GalleryEntry {
        name: "six_cycle".into(),
        class: HypothesisClass::from_tables(6, rows).expect("static class"),
        expected_dims: vec![
            dim(DimensionKind::Ds, 2, Source::Computation),
            dim(DimensionKind::Natarajan, 1, Source::Computation),
            dim(DimensionKind::Graph, 2, Source::Computation),
        ],
        witness: None,
    }
}

/// Decides the order-1 exclusion for the gap class.
struct GapRule {
    star: Label,
}

impl GapRule {
    fn target(&self, points: &[Point], g1: &[Label], g2: &[Label]) -> [Label; 2] {
        let star = self.star;
        let options = |i: usize| [g1[i], g2[i]].into_iter().filter(move |&y| y != star);
        // two different subset codes cannot come from one h_A
        for a in options(0) {
            if let Some(b) = options(1).find(|&b| b != a) {
                return [a, b];
            }
        }
        // a single code A: both coordinates choose between A and ⋆
        let a = options(0).next().expect("labels differ, so one is not ⋆");
        if (a >> points[0]) & 1 == 1 {
            [star, a]
        } else {
            [a, star]
        }
    }
}

impl crate::witnesses::NatarajanRule for GapRule {
    fn exclude(&self, points: &[Point], g1: &[Label], g2: &[Label]) -> Result<IndexSet> {
        let t = self.target(points, g1, g2);
        Ok(IndexSet::from_indices((0..2).filter(|&i| t[i] == g1[i])))
    }
}

/// `{h_A : A ⊆ [0, m)}` with `h_A(x) = code(A)` on `A` and `⋆` elsewhere.
/// `code(A)` is the bitmask of `A`; `⋆` is the last label, `2^m`.
pub fn gap_class(m: u32) -> Result<GalleryEntry> {
    if m == 0 || m > 10 {
        return Err(Error::precondition("gap class needs 1 ≤ m ≤ 10"));
    }
    let star: Label = 1 << m;
    let rows: Vec<Vec<Label>> = (0..star)
        .map(|a| (0..m).map(|x| if (a >> x) & 1 == 1 { a } else { star }).collect())
        .collect();
    let class = HypothesisClass::from_tables(star + 1, rows)?;
    let witness = Witness::natarajan(1, Provenance::AppendixGap, Arc::new(GapRule { star }));
    Ok(GalleryEntry {
        name: format!("gap_{m}"),
        class,
        expected_dims: vec![
            dim(DimensionKind::Natarajan, 1, Source::Theorem),
            dim(DimensionKind::Graph, m as usize, Source::Theorem),
        ],
        witness: Some(witness),
    })
}

/// Class on `[0, window]` with an order-1 Ψ-witness for a non-distinguisher.
/// Its exact Ψ-dimension is 0: every member sends the failing pair into
/// `{b, ⋆}`, so no single point is Ψ-shattered.
pub fn failing_psi_gallery(family: &PsiFamily, window: Point) -> Result<GalleryEntry> {
    let (class, witness) = failing_psi_class(family, window)?;
    Ok(GalleryEntry {
        name: "failing_psi".into(),
        expected_dims: vec![
            dim(DimensionKind::Psi(family.clone()), 0, Source::Computation),
            dim(DimensionKind::Graph, window as usize + 1, Source::Computation),
        ],
        class,
        witness: Some(witness),
    })
}

pub const NAMES: &[&str] = &["full", "three_hypothesis", "six_cycle", "gap", "failing_psi"];

fn param(params: &BTreeMap<String, u32>, key: &str, default: u32) -> u32 {
    params.get(key).copied().unwrap_or(default)
}

/// Entry by name. Parameters: `full` takes `n` (2) and `max_label` (1);
/// `gap` takes `m` (3); `failing_psi` takes `window` (3) and uses the single
/// function `ψ_{0,1}` over three labels.
pub fn lookup(name: &str, params: &BTreeMap<String, u32>) -> Result<GalleryEntry> {
    let allowed: &[&str] = match name {
        "full" => &["n", "max_label"],
        "gap" => &["m"],
        "failing_psi" => &["window"],
        _ => &[],
    };
    if let Some(k) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(Error::precondition(format!("gallery entry {name} has no parameter {k}")));
    }
    match name {
        "full" => {
            let (n, l) = (param(params, "n", 2), param(params, "max_label", 1));
            let class = full_class(n, l)?;
            let all = n as usize;
            Ok(GalleryEntry {
                name: "full".into(),
                class,
                expected_dims: vec![
                    dim(DimensionKind::Natarajan, all, Source::Computation),
                    dim(DimensionKind::Graph, all, Source::Computation),
                    dim(DimensionKind::Ds, all, Source::Computation),
                ],
                witness: None,
            })
        }
        "three_hypothesis" => Ok(three_hypothesis_class()),
        "six_cycle" => Ok(six_cycle_class()),
        "gap" => gap_class(param(params, "m", 3)),
        "failing_psi" => {
            let family = PsiFamily::new(3, vec![make_psi_n(2).member(0).clone()])?;
            failing_psi_gallery(&family, param(params, "window", 3))
        }
        _ => Err(Error::precondition(format!("unknown gallery entry {name}; known: {}", NAMES.join(", ")))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimensions::exact_dimension;
    use crate::witnesses::validate_witness;

    #[test]
    fn full_class_sizes() {
        assert_eq!(full_class(2, 1).unwrap().len(), Some(4));
        assert_eq!(full_class(1, 2).unwrap().len(), Some(3));
        assert_eq!(full_class(3, 1).unwrap().len(), Some(8));
        assert!(full_class(30, 1).is_err());
    }

    #[test]
    fn gap_entries() {
        let g1 = gap_class(1).unwrap();
        assert_eq!(g1.class.len(), Some(2));
        assert_eq!(exact_dimension(&g1.class, &DimensionKind::Graph, None).unwrap().dimension, 1);
        let g3 = gap_class(3).unwrap();
        assert_eq!(g3.class.labels(), 9);
        let r = validate_witness(g3.witness.as_ref().unwrap(), &g3.class, 2).unwrap();
        assert!(r.valid, "{:?}", r.violations.first());
    }

    #[test]
    fn expected_dims_hold() {
        let entries = vec![
            three_hypothesis_class(),
            six_cycle_class(),
            gap_class(2).unwrap(),
            lookup("full", &BTreeMap::new()).unwrap(),
            lookup("failing_psi", &BTreeMap::new()).unwrap(),
        ];
        for e in entries {
            for d in &e.expected_dims {
                let got = exact_dimension(&e.class, &d.kind, None).unwrap().dimension;
                assert_eq!(got, d.value, "{} {}", e.name, d.kind.name());
            }
        }
    }

    #[test]
    fn six_cycle_subclasses() {
        let c6 = six_cycle_class().class;
        let hs = c6.hypotheses().unwrap();
        for picks in [[0, 1, 4, 5], [0, 5, 4, 3]] {
            let sub = HypothesisClass::explicit(c6.domain(), 6, picks.iter().map(|&i| hs[i].clone()).collect()).unwrap();
            assert_eq!(exact_dimension(&sub, &DimensionKind::Ds, None).unwrap().dimension, 1);
        }
    }

    #[test]
    fn lookup_errors() {
        assert!(lookup("nope", &BTreeMap::new()).is_err());
        let bad = BTreeMap::from([("m".to_string(), 2)]);
        assert!(lookup("six_cycle", &bad).is_err());
    }
}
