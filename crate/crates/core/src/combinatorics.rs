//! Small enumeration helpers shared by the search routines.

/// All `k`-element subsets of `items`, in lexicographic order of positions.
pub fn subsets_of_size<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    let n = items.len();
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i].clone()).collect());
        // advance the rightmost index that still has room
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Mixed-radix counter over `radices`, least significant digit last, so the
/// produced tuples are in lexicographic order.
#[derive(Debug, Clone)]
pub struct Odometer {
    radices: Vec<usize>,
    digits: Vec<usize>,
    done: bool,
}

impl Odometer {
    pub fn new(radices: Vec<usize>) -> Self {
        let done = radices.contains(&0);
        let digits = vec![0; radices.len()];
        Odometer { radices, digits, done }
    }

    /// `len` digits each in `0..radix`.
    pub fn uniform(len: usize, radix: usize) -> Self {
        Self::new(vec![radix; len])
    }
}

impl Iterator for Odometer {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let current = self.digits.clone();
        let mut i = self.radices.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < self.radices[i] {
                break;
            }
            self.digits[i] = 0;
        }
        Some(current)
    }
}

/// Cartesian product of the given choice lists, lexicographic.
pub fn product<T: Clone>(choices: &[Vec<T>]) -> impl Iterator<Item = Vec<T>> + '_ {
    Odometer::new(choices.iter().map(Vec::len).collect())
        .map(move |digits| digits.iter().enumerate().map(|(i, &d)| choices[i][d].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_are_lexicographic() {
        let s = subsets_of_size(&[0, 1, 2, 3], 2);
        assert_eq!(
            s,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(subsets_of_size(&[5, 6], 0), vec![Vec::<i32>::new()]);
        assert!(subsets_of_size(&[5, 6], 3).is_empty());
        assert_eq!(subsets_of_size(&[7], 1), vec![vec![7]]);
    }

    #[test]
    fn subset_counts_match_binomials() {
        let items: Vec<u32> = (0..7).collect();
        let counts: Vec<usize> = (0..=7).map(|k| subsets_of_size(&items, k).len()).collect();
        assert_eq!(counts, vec![1, 7, 21, 35, 35, 21, 7, 1]);
    }

    #[test]
    fn odometer_counts() {
        let all: Vec<_> = Odometer::new(vec![2, 3]).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 0]);
        assert_eq!(all[1], vec![0, 1]);
        assert_eq!(all[5], vec![1, 2]);
        assert_eq!(Odometer::uniform(0, 4).count(), 1);
        assert_eq!(Odometer::new(vec![3, 0]).count(), 0);
    }

    #[test]
    fn product_picks_values() {
        let p: Vec<_> = product(&[vec!['a', 'b'], vec!['x']]).collect();
        assert_eq!(p, vec![vec!['a', 'x'], vec!['b', 'x']]);
    }
}
