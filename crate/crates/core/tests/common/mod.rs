//! Brute-force reference implementations, written directly from the
//! definitions and sharing no code with the library searches.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use dimkit::{HypothesisClass, Label, Pattern, PsiFamily, PsiValue};
use rand::Rng;

pub type Rows = Vec<Vec<Label>>;

/// Random table class on `[0, n)`; duplicate rows are dropped.
pub fn random_rows<R: Rng>(rng: &mut R, n: usize, labels: u32, max_rows: usize) -> Rows {
    let count = rng.gen_range(1..=max_rows);
    let mut seen = BTreeSet::new();
    let mut rows = Vec::new();
    for _ in 0..count {
        let row: Vec<Label> = (0..n).map(|_| rng.gen_range(0..labels)).collect();
        if seen.insert(row.clone()) {
            rows.push(row);
        }
    }
    rows
}

pub fn class_of(labels: u32, rows: &Rows) -> HypothesisClass {
    HypothesisClass::from_tables(labels, rows.clone()).unwrap()
}

/// Point subsets of `[0, n)` as index lists, by bitmask.
pub fn point_subsets(n: usize) -> Vec<Vec<usize>> {
    (1u32..1 << n).map(|m| (0..n).filter(|&i| (m >> i) & 1 == 1).collect()).collect()
}

pub fn project(rows: &Rows, s: &[usize]) -> HashSet<Pattern> {
    rows.iter().map(|r| s.iter().map(|&i| r[i]).collect()).collect()
}

fn column(proj: &HashSet<Pattern>, i: usize) -> Vec<Label> {
    proj.iter().map(|p| p[i]).collect::<BTreeSet<_>>().into_iter().collect()
}

fn all_tuples(choices: &[Vec<Label>]) -> Vec<Vec<Label>> {
    let mut out = vec![vec![]];
    for c in choices {
        out = out.iter().flat_map(|t| c.iter().map(move |&v| [t.clone(), vec![v]].concat())).collect();
    }
    out
}

pub fn vc_shattered(rows: &Rows, s: &[usize]) -> bool {
    let proj = project(rows, s);
    (0u32..1 << s.len()).all(|m| proj.contains(&(0..s.len()).map(|i| (m >> i) & 1).collect::<Vec<_>>()))
}

pub fn natarajan_shattered(rows: &Rows, s: &[usize]) -> bool {
    let proj = project(rows, s);
    let cols: Vec<Vec<Label>> = (0..s.len()).map(|i| column(&proj, i)).collect();
    all_tuples(&cols).iter().any(|f1| {
        all_tuples(&cols).iter().any(|f2| {
            f1.iter().zip(f2).all(|(a, b)| a != b)
                && (0u32..1 << s.len()).all(|m| {
                    let p: Vec<Label> = (0..s.len()).map(|i| if (m >> i) & 1 == 1 { f1[i] } else { f2[i] }).collect();
                    proj.contains(&p)
                })
        })
    })
}

pub fn graph_shattered(rows: &Rows, s: &[usize]) -> bool {
    let proj = project(rows, s);
    proj.iter().any(|f| {
        let agreements: HashSet<u32> =
            proj.iter().map(|p| (0..s.len()).filter(|&i| p[i] == f[i]).map(|i| 1 << i).sum()).collect();
        agreements.len() == 1 << s.len()
    })
}

/// Largest subset of the projection in which every pattern has a neighbour
/// along every coordinate; shattered iff nonempty.
pub fn ds_shattered(rows: &Rows, s: &[usize]) -> bool {
    let mut live: Vec<Pattern> = project(rows, s).into_iter().collect();
    loop {
        let before = live.len();
        let snapshot = live.clone();
        live.retain(|p| {
            (0..s.len()).all(|i| {
                snapshot.iter().any(|q| q[i] != p[i] && (0..s.len()).all(|j| j == i || q[j] == p[j]))
            })
        });
        if live.len() == before {
            return !live.is_empty();
        }
    }
}

fn psi_bit(v: PsiValue) -> Option<u32> {
    match v {
        PsiValue::Zero => Some(0),
        PsiValue::One => Some(1),
        _ => None,
    }
}

pub fn psi_shattered(rows: &Rows, s: &[usize], family: &PsiFamily) -> bool {
    let proj = project(rows, s);
    let k = family.len();
    let mut choice = vec![0usize; s.len()];
    loop {
        let mut seen = HashSet::new();
        for p in &proj {
            let bits: Option<u32> = (0..s.len())
                .map(|i| psi_bit(family.member(choice[i]).apply(p[i])).map(|b| b << i))
                .sum();
            if let Some(b) = bits {
                seen.insert(b);
            }
        }
        if seen.len() == 1 << s.len() {
            return true;
        }
        let mut i = 0;
        while i < s.len() {
            choice[i] += 1;
            if choice[i] < k {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == s.len() {
            return false;
        }
    }
}

pub fn oracle_dim(rows: &Rows, n: usize, shattered: impl Fn(&Rows, &[usize]) -> bool) -> usize {
    point_subsets(n).into_iter().filter(|s| shattered(rows, s)).map(|s| s.len()).max().unwrap_or(0)
}

/// `m^d · q^{2d}` in machine integers.
pub fn sauer_bound(m: u128, q: u128, d: u32) -> u128 {
    m.pow(d) * q.pow(2 * d)
}

/// Smallest `k` with `k^e · q^{2e} < 2^k`, `e = order + 1`.
pub fn brute_min_kb(order: u32, q: u128, limit: u32) -> Option<u32> {
    let e = order + 1;
    (1..=limit).find(|&k| (k as u128).pow(e) * q.pow(2 * e) < 1u128 << k)
}
