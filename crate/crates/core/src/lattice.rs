//! Interval lattices over one numeric attribute in one search context.
//!
//! A lattice over `n` bases holds the counts of every interval `[i, j)`,
//! `0 ≤ i < j ≤ n`, in a flattened upper-triangular array. Supports are
//! filled bottom-up from the bases, so each cell costs one addition.
//!
//! Bases may first be merged: maximal runs of positive-only bases, and of
//! negative-only bases, collapse into one base. Empty bases join the run on
//! their left. `index_map` translates lattice boundaries back to the
//! attribute's cut indices.

use crate::model::CountStats;

/// Offset of row `i` in a triangular array over `n` bases.
#[inline]
fn offset(n: u32, i: u32) -> usize {
    let (n, i) = (n as usize, i as usize);
    i * n - i * i.saturating_sub(1) / 2
}

#[inline]
fn cell(n: u32, i: u32, j: u32) -> usize {
    debug_assert!(i < j && j <= n);
    offset(n, i) + (j - i - 1) as usize
}

/// Counts of every interval from the counts of the bases:
/// `s(i, i+d) = s(i, i+1) + s(i+1, i+d)`.
pub fn dp_supports(bases: &[u64]) -> Vec<u64> {
    let n = bases.len() as u32;
    let mut out = vec![0u64; (n as usize * (n as usize + 1)) / 2];
    for i in (0..n).rev() {
        out[cell(n, i, i + 1)] = bases[i as usize];
        for j in i + 2..=n {
            out[cell(n, i, j)] = bases[i as usize] + out[cell(n, i + 1, j)];
        }
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum BaseClass {
    Empty,
    PosOnly,
    NegOnly,
    Mixed,
}

fn classify(pos: u64, neg: u64) -> BaseClass {
    match (pos > 0, neg > 0) {
        (false, false) => BaseClass::Empty,
        (true, false) => BaseClass::PosOnly,
        (false, true) => BaseClass::NegOnly,
        (true, true) => BaseClass::Mixed,
    }
}

/// Boundaries (cut indices, `0` and `n` included) that survive merging of
/// pure runs. Leading empty bases join the first run.
pub fn dynamic_merge(pos: &[u64], neg: &[u64]) -> Vec<u32> {
    debug_assert_eq!(pos.len(), neg.len());
    let mut bounds = vec![0u32];
    let mut run = BaseClass::Empty;
    for (k, (&p, &q)) in pos.iter().zip(neg).enumerate() {
        let c = classify(p, q);
        if c == BaseClass::Empty {
            continue;
        }
        if run != BaseClass::Empty && (c != run || c == BaseClass::Mixed) {
            bounds.push(k as u32);
        }
        run = c;
    }
    bounds.push(pos.len() as u32);
    bounds
}

#[derive(Clone, Debug)]
pub struct Lattice {
    n: u32,
    /// Lattice boundary `k` is cut index `index_map[k]`.
    index_map: Vec<u32>,
    pos: Vec<u64>,
    neg: Vec<u64>,
    /// Whether `[0, n)` may be offered; it is only meaningful after merging,
    /// where trimming can turn it into a proper interval.
    full_range_allowed: bool,
}

impl Lattice {
    /// `n` in lattice bases.
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn index_map(&self) -> &[u32] {
        &self.index_map
    }

    pub fn pos(&self, i: u32, j: u32) -> u64 {
        self.pos[cell(self.n, i, j)]
    }

    pub fn neg(&self, i: u32, j: u32) -> u64 {
        self.neg[cell(self.n, i, j)]
    }

    pub fn stats(&self, i: u32, j: u32) -> CountStats {
        CountStats::new(self.pos(i, j), self.neg(i, j))
    }

    /// `[i, j)` in cut indices of the attribute.
    pub fn interval(&self, i: u32, j: u32) -> (u32, u32) {
        (self.index_map[i as usize], self.index_map[j as usize])
    }

    /// Cells whose interval can still lead to a relevant pattern: positive
    /// support at least `min_pos`, not the full range, and for wider
    /// intervals a positive support different from both one-step
    /// shrinkings (otherwise the narrower interval covers the same
    /// positives). Rows are scanned from the widest interval down and cut
    /// at the first infrequent cell.
    pub fn screen(&self, min_pos: u64) -> Vec<(u32, u32)> {
        let n = self.n;
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1..=n).rev() {
                let p = self.pos(i, j);
                if p < min_pos {
                    break;
                }
                if i == 0 && j == n && !self.full_range_allowed {
                    continue;
                }
                if j > i + 1 && (p == self.pos(i, j - 1) || p == self.pos(i + 1, j)) {
                    continue;
                }
                out.push((i, j));
            }
        }
        out
    }
}

/// A lattice over the given per-base counts, optionally after merging pure
/// runs.
pub fn build_lattice(pos: &[u64], neg: &[u64], merge: bool) -> Lattice {
    let n = pos.len() as u32;
    let index_map: Vec<u32> = if merge { dynamic_merge(pos, neg) } else { (0..=n).collect() };
    let m = index_map.len() as u32 - 1;
    let sum = |v: &[u64], k: usize| v[index_map[k] as usize..index_map[k + 1] as usize].iter().sum::<u64>();
    let base_pos: Vec<u64> = (0..m as usize).map(|k| sum(pos, k)).collect();
    let base_neg: Vec<u64> = (0..m as usize).map(|k| sum(neg, k)).collect();
    let full_range_allowed = merge && (index_map[1] > 1 || index_map[m as usize] - index_map[m as usize - 1] > 1);
    Lattice { n: m, pos: dp_supports(&base_pos), neg: dp_supports(&base_neg), index_map, full_range_allowed }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // toy-6, attribute A, root context: bases [<2.1], [2.1,2.6), [2.6,3.5), [≥3.5]
    const POS: [u64; 4] = [2, 0, 1, 0];
    const NEG: [u64; 4] = [0, 1, 0, 2];

    #[test]
    fn triangular_layout() {
        assert_eq!(offset(4, 0), 0);
        assert_eq!(offset(4, 1), 4);
        assert_eq!(offset(4, 3), 9);
        assert_eq!(cell(4, 3, 4), 9);
        assert_eq!(dp_supports(&POS).len(), 10);
    }

    #[test]
    fn toy6_lattice() {
        let l = build_lattice(&POS, &NEG, false);
        assert_eq!(l.stats(0, 3), CountStats::new(3, 1));
        assert_eq!(l.stats(0, 4), CountStats::new(3, 3));
        assert_eq!(l.stats(1, 3), CountStats::new(1, 1));
        assert_eq!(l.screen(1), vec![(0, 3), (0, 1), (2, 3)]);
        assert_eq!(l.screen(2), vec![(0, 3), (0, 1)]);
        assert_eq!(l.screen(3), vec![(0, 3)]);
        // alternating classes leave nothing to merge
        assert_eq!(dynamic_merge(&POS, &NEG), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn merging_runs() {
        // P P 0 N N M 0 P
        let pos = [1, 2, 0, 0, 0, 1, 0, 3];
        let neg = [0, 0, 0, 1, 4, 1, 0, 0];
        assert_eq!(dynamic_merge(&pos, &neg), vec![0, 3, 5, 7, 8]);
        let l = build_lattice(&pos, &neg, true);
        assert_eq!(l.n(), 4);
        assert_eq!(l.stats(0, 1), CountStats::new(3, 0));
        assert_eq!(l.interval(1, 3), (3, 7));
        // leading empties join the first run; mixed bases never merge
        assert_eq!(dynamic_merge(&[0, 0, 1, 1], &[0, 0, 0, 0]), vec![0, 4]);
        assert_eq!(dynamic_merge(&[1, 1, 0], &[1, 1, 0]), vec![0, 1, 3]);
    }

    #[test]
    fn merged_full_range_is_gated() {
        // first merged base spans two originals: full range may be trimmed later
        let l = build_lattice(&[1, 1, 0, 1], &[0, 0, 1, 0], true);
        assert_eq!(l.n(), 3);
        assert!(l.screen(1).contains(&(0, 3)));
        let l = build_lattice(&[1, 0, 1], &[0, 1, 0], true);
        assert!(!l.screen(1).contains(&(0, 3)));
        let l = build_lattice(&[1, 1, 0, 1], &[0, 0, 1, 0], false);
        assert!(!l.screen(1).contains(&(0, 4)));
    }

    fn scan(bases: &[u64], i: u32, j: u32) -> u64 {
        bases[i as usize..j as usize].iter().sum()
    }

    proptest! {
        #[test]
        fn dp_matches_scan(pos in proptest::collection::vec(0u64..5, 1..12), merge in any::<bool>(), seed in 0u64..5) {
            let neg: Vec<u64> = pos.iter().enumerate().map(|(k, p)| (*p + k as u64 + seed) % 3).collect();
            let l = build_lattice(&pos, &neg, merge);
            for i in 0..l.n() {
                for j in i + 1..=l.n() {
                    let (a, b) = l.interval(i, j);
                    prop_assert_eq!(l.pos(i, j), scan(&pos, a, b));
                    prop_assert_eq!(l.neg(i, j), scan(&neg, a, b));
                }
            }
        }

        #[test]
        fn merged_bases_are_pure(pos in proptest::collection::vec(0u64..3, 1..12), neg in proptest::collection::vec(0u64..3, 12)) {
            let neg = &neg[..pos.len()];
            let bounds = dynamic_merge(&pos, neg);
            prop_assert_eq!(bounds[0], 0);
            prop_assert_eq!(*bounds.last().unwrap(), pos.len() as u32);
            for w in bounds.windows(2) {
                prop_assert!(w[0] < w[1]);
                let (p, q) = (scan(&pos, w[0], w[1]), scan(neg, w[0], w[1]));
                let occupied = (w[0]..w[1]).filter(|&k| pos[k as usize] + neg[k as usize] > 0).count();
                prop_assert!(p == 0 || q == 0 || occupied == 1, "merged base mixes classes");
            }
            // no two adjacent merged bases of the same pure class
            for w in bounds.windows(3) {
                let c1 = classify(scan(&pos, w[0], w[1]), scan(neg, w[0], w[1]));
                let c2 = classify(scan(&pos, w[1], w[2]), scan(neg, w[1], w[2]));
                prop_assert!(!(c1 == c2 && matches!(c1, BaseClass::PosOnly | BaseClass::NegOnly)));
            }
        }

        #[test]
        fn screened_cells_are_frequent_and_tight(pos in proptest::collection::vec(0u64..4, 1..10), minc in 1u64..5) {
            let neg: Vec<u64> = pos.iter().map(|p| 3 - p).collect();
            let l = build_lattice(&pos, &neg, false);
            let cells = l.screen(minc);
            for i in 0..l.n() {
                for j in i + 1..=l.n() {
                    let p = l.pos(i, j);
                    let tight = j == i + 1 || (p != l.pos(i, j - 1) && p != l.pos(i + 1, j));
                    let expected = p >= minc && !(i == 0 && j == l.n()) && tight;
                    prop_assert_eq!(cells.contains(&(i, j)), expected);
                }
            }
        }
    }
}
