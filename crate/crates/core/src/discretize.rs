//! Adaptive cut-points: mid-points between neighbouring distinct values,
//! then maximal merging of consecutive class-pure regions.

use std::collections::BTreeMap;

use rust_decimal::Decimal;

use crate::error::{Error, Result};
use crate::ingest::{bin_representative, bin_value, ColumnValues, RawTable};

/// Finite cut-points `v_1 < … < v_{n-1}`; `v_0 = -∞` and `v_n = +∞` are
/// implicit, giving `n` base intervals.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CutPoints {
    cuts: Vec<Decimal>,
}

/// One end of an interval `[v_i, v_j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    NegInf,
    Finite(Decimal),
    PosInf,
}

impl CutPoints {
    pub fn new(cuts: Vec<Decimal>) -> Result<Self> {
        if cuts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidValue("cut-points must be strictly increasing".into()));
        }
        Ok(CutPoints { cuts: cuts.into_iter().map(|c| c.normalize()).collect() })
    }

    pub fn cuts(&self) -> &[Decimal] {
        &self.cuts
    }

    /// `n`, the number of base intervals.
    pub fn n_bases(&self) -> u32 {
        self.cuts.len() as u32 + 1
    }

    /// `v_i` for `0 ≤ i ≤ n`.
    pub fn bound(&self, i: u32) -> Bound {
        if i == 0 {
            Bound::NegInf
        } else if i == self.n_bases() {
            Bound::PosInf
        } else {
            Bound::Finite(self.cuts[i as usize - 1])
        }
    }

    /// The base interval `i` with `v_i ≤ v < v_{i+1}`.
    pub fn base_of(&self, v: Decimal) -> u32 {
        self.cuts.partition_point(|c| *c <= v) as u32
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Purity {
    PosOnly,
    NegOnly,
    Mixed,
}

impl Purity {
    fn of(has_pos: bool, has_neg: bool) -> Purity {
        match (has_pos, has_neg) {
            (true, false) => Purity::PosOnly,
            (false, true) => Purity::NegOnly,
            _ => Purity::Mixed,
        }
    }

    fn merges_with(self, other: Purity) -> bool {
        self == other && self != Purity::Mixed
    }
}

/// A region between neighbouring cut-points; `None` bounds are infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Region {
    pub lo: Option<Decimal>,
    pub hi: Option<Decimal>,
    pub purity: Purity,
}

fn midpoint(a: Decimal, b: Decimal) -> Decimal {
    ((a + b) / Decimal::TWO).normalize()
}

/// Mid-points between the neighbouring distinct representatives of the
/// binned values.
pub fn initial_cutpoints(values: &[(i64, bool)], epsilon: Decimal) -> Vec<Decimal> {
    let mut bins: Vec<i64> = values.iter().map(|(m, _)| *m).collect();
    bins.sort_unstable();
    bins.dedup();
    bins.windows(2)
        .map(|w| midpoint(bin_representative(w[0], epsilon), bin_representative(w[1], epsilon)))
        .collect()
}

/// One region per distinct binned value, delimited by the initial cut-points.
pub fn label_regions(values: &[(i64, bool)], epsilon: Decimal) -> Vec<Region> {
    let mut by_bin: BTreeMap<i64, (bool, bool)> = BTreeMap::new();
    for &(m, positive) in values {
        let e = by_bin.entry(m).or_default();
        if positive {
            e.0 = true;
        } else {
            e.1 = true;
        }
    }
    let cuts = initial_cutpoints(values, epsilon);
    by_bin
        .values()
        .enumerate()
        .map(|(k, &(p, n))| Region {
            lo: k.checked_sub(1).map(|j| cuts[j]),
            hi: cuts.get(k).copied(),
            purity: Purity::of(p, n),
        })
        .collect()
}

/// Merge consecutive positive-only regions, and consecutive negative-only
/// regions, as far as they go; mixed regions never merge.
pub fn merge_pure_regions(regions: &[Region]) -> CutPoints {
    let cuts = regions
        .windows(2)
        .filter(|w| !w[0].purity.merges_with(w[1].purity))
        .map(|w| w[0].hi.expect("interior region boundary"))
        .collect();
    CutPoints::new(cuts).expect("regions are ordered")
}

/// Cut-points for every numeric column relative to `class_of_interest`.
pub fn build_cutpoints(table: &RawTable, class_of_interest: &str) -> Result<BTreeMap<String, CutPoints>> {
    let mut out = BTreeMap::new();
    for col in &table.columns {
        let ColumnValues::Numeric(values) = &col.values else { continue };
        let mut binned = Vec::with_capacity(values.len());
        for (v, class) in values.iter().zip(&table.classes) {
            if let Some(v) = v {
                binned.push((bin_value(*v, table.epsilon)?, class == class_of_interest));
            }
        }
        out.insert(col.name.clone(), merge_pure_regions(&label_regions(&binned, table.epsilon)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::toy6_table;
    use proptest::prelude::*;

    fn dec(s: &str) -> Decimal {
        s.parse().unwrap()
    }

    fn decs(v: &[&str]) -> Vec<Decimal> {
        v.iter().map(|s| dec(s)).collect()
    }

    fn binned(v: &[(&str, bool)]) -> Vec<(i64, bool)> {
        let eps = crate::ingest::default_epsilon();
        v.iter().map(|(s, c)| (bin_value(dec(s), eps).unwrap(), *c)).collect()
    }

    fn regions_with(cuts: &[&str], purities: &[Purity]) -> Vec<Region> {
        let cuts = decs(cuts);
        purities
            .iter()
            .enumerate()
            .map(|(k, p)| Region {
                lo: k.checked_sub(1).map(|j| cuts[j]),
                hi: cuts.get(k).copied(),
                purity: *p,
            })
            .collect()
    }

    #[test]
    fn initial_cuts() {
        let eps = crate::ingest::default_epsilon();
        let toy = binned(&[("1.0", true), ("2.0", true), ("3.0", true), ("4.0", false), ("5.0", false), ("2.2", false)]);
        assert_eq!(initial_cutpoints(&toy, eps), decs(&["1.5", "2.1", "2.6", "3.5", "4.5"]));
        assert!(initial_cutpoints(&binned(&[("7", true), ("7", false)]), eps).is_empty());
        assert_eq!(initial_cutpoints(&binned(&[("2.4", true), ("2.5", false)]), eps), decs(&["2.45"]));
        assert_eq!(initial_cutpoints(&binned(&[("2.4", true), ("2.5", false)]), eps)[0].to_string(), "2.45");
    }

    #[test]
    fn merge_examples() {
        use Purity::*;
        let r = regions_with(&["1.5", "2.1", "2.6", "3.5", "4.5"], &[PosOnly, PosOnly, NegOnly, PosOnly, NegOnly, NegOnly]);
        assert_eq!(merge_pure_regions(&r).cuts(), decs(&["2.1", "2.6", "3.5"]).as_slice());

        let r = regions_with(&["1", "2", "3"], &[PosOnly; 4]);
        assert_eq!(merge_pure_regions(&r).n_bases(), 1);

        let r = regions_with(&["1", "2", "3"], &[PosOnly, NegOnly, PosOnly, NegOnly]);
        assert_eq!(merge_pure_regions(&r).cuts(), decs(&["1", "2", "3"]).as_slice());

        let r = regions_with(&["1", "2", "3"], &[Mixed, Mixed, PosOnly, PosOnly]);
        assert_eq!(merge_pure_regions(&r).cuts(), decs(&["1", "2"]).as_slice());
    }

    #[test]
    fn toy6_cuts() {
        let cuts = build_cutpoints(&toy6_table(), "+").unwrap();
        assert_eq!(cuts["A"].cuts(), decs(&["2.1", "2.6", "3.5"]).as_slice());
        assert_eq!(cuts["A"].n_bases(), 4);
    }

    #[test]
    fn conflicting_duplicate_stays_unmerged() {
        // 2.2 occurs with both classes; its region is mixed and keeps both
        // neighbouring boundaries.
        let v = binned(&[("1.0", true), ("2.2", true), ("2.2", false), ("3.0", true)]);
        let regions = label_regions(&v, crate::ingest::default_epsilon());
        assert_eq!(regions[1].purity, Purity::Mixed);
        assert_eq!(merge_pure_regions(&regions).cuts(), decs(&["1.6", "2.6"]).as_slice());
    }

    #[test]
    fn base_lookup() {
        let c = CutPoints::new(decs(&["2.1", "2.6", "3.5"])).unwrap();
        assert_eq!(c.base_of(dec("1.0")), 0);
        assert_eq!(c.base_of(dec("2.1")), 1);
        assert_eq!(c.base_of(dec("3.49")), 2);
        assert_eq!(c.base_of(dec("99")), 3);
        assert_eq!(c.bound(0), Bound::NegInf);
        assert_eq!(c.bound(4), Bound::PosInf);
        assert!(CutPoints::new(decs(&["1", "1"])).is_err());
    }

    fn arb_values() -> impl Strategy<Value = Vec<(i64, bool)>> {
        proptest::collection::vec((0i64..12, any::<bool>()), 1..40)
    }

    proptest! {
        #[test]
        fn merged_regions_are_maximal_and_sound(values in arb_values()) {
            let eps = Decimal::ONE;
            let regions = label_regions(&values, eps);
            let cuts = merge_pure_regions(&regions);
            // re-label against the merged cut-points
            let mut merged: Vec<(bool, bool)> = vec![(false, false); cuts.n_bases() as usize];
            for &(m, p) in &values {
                let b = cuts.base_of(bin_representative(m, eps)) as usize;
                if p { merged[b].0 = true } else { merged[b].1 = true }
            }
            let purities: Vec<Purity> = merged.iter().map(|&(p, n)| Purity::of(p, n)).collect();
            for w in purities.windows(2) {
                prop_assert!(!w[0].merges_with(w[1]), "adjacent same-purity regions {:?}", purities);
            }
            // every surviving cut-point was an initial cut-point
            let initial = initial_cutpoints(&values, eps);
            for c in cuts.cuts() {
                prop_assert!(initial.contains(c));
            }
        }
    }
}
