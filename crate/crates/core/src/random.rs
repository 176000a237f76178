//! Seeded small random tables for cross-checking the miner against the
//! brute-force oracle.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rust_decimal::Decimal;

use crate::discretize::build_cutpoints;
use crate::ingest::{default_epsilon, to_transactions, RawColumn, RawTable};
use crate::model::Dataset;

pub const POSITIVE: &str = "pos";
pub const NEGATIVE: &str = "neg";

/// Size limits of generated instances.
#[derive(Clone, Copy, Debug)]
pub struct InstanceLimits {
    pub max_rows: usize,
    pub max_symbolic: usize,
    pub max_numeric: usize,
    pub max_distinct: usize,
}

impl Default for InstanceLimits {
    fn default() -> Self {
        InstanceLimits { max_rows: 10, max_symbolic: 2, max_numeric: 3, max_distinct: 5 }
    }
}

/// A table with classes `pos`/`neg` and at least one `pos` row. About one
/// instance in four has missing cells.
pub fn random_table(seed: u64, limits: InstanceLimits) -> RawTable {
    let mut rng = StdRng::seed_from_u64(seed);
    let rows = rng.gen_range(1..=limits.max_rows);
    let n_sym = rng.gen_range(0..=limits.max_symbolic);
    let n_num = rng.gen_range(usize::from(n_sym == 0)..=limits.max_numeric);
    let p_missing = if rng.gen_bool(0.25) { 0.15 } else { 0.0 };

    let mut columns = Vec::new();
    for a in 0..n_sym {
        let k = rng.gen_range(1..=3u8);
        let values = (0..rows)
            .map(|_| {
                (!rng.gen_bool(p_missing)).then(|| char::from(b'a' + rng.gen_range(0..k)).to_string())
            })
            .collect();
        columns.push(RawColumn::symbolic(&format!("s{a}"), values));
    }
    for a in 0..n_num {
        let k = rng.gen_range(1..=limits.max_distinct);
        let pool: Vec<Decimal> = (0..k).map(|i| Decimal::new(10 * i as i64 + rng.gen_range(0..10), 1)).collect();
        let values = (0..rows)
            .map(|_| (!rng.gen_bool(p_missing)).then(|| pool[rng.gen_range(0..k)]))
            .collect();
        columns.push(RawColumn::numeric(&format!("x{a}"), values));
    }
    let p_pos = rng.gen_range(0.2..0.8);
    let classes = (0..rows)
        .map(|r| if r == 0 || rng.gen_bool(p_pos) { POSITIVE } else { NEGATIVE }.to_string())
        .collect();
    RawTable { columns, classes, class_column: "class".into(), epsilon: default_epsilon() }
}

/// [`random_table`] with default limits, discretized for class `pos`.
pub fn random_dataset(seed: u64) -> Dataset {
    let table = random_table(seed, InstanceLimits::default());
    let cuts = build_cutpoints(&table, POSITIVE).expect("generated values bin");
    to_transactions(&table, &cuts, POSITIVE).expect("generated table encodes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn respects_limits() {
        for seed in 0..200 {
            let t = random_table(seed, InstanceLimits::default());
            assert!((1..=10).contains(&t.n_rows()));
            let sym = t.columns.iter().filter(|c| !c.is_numeric()).count();
            let num = t.columns.len() - sym;
            assert!(sym <= 2 && num <= 3 && sym + num >= 1);
            for c in &t.columns {
                let crate::ingest::ColumnValues::Numeric(values) = &c.values else { continue };
                let mut v: Vec<_> = values.iter().flatten().collect();
                v.sort();
                v.dedup();
                assert!(v.len() <= 5);
            }
            assert_eq!(t.classes[0], POSITIVE);
        }
    }

    #[test]
    fn deterministic() {
        assert_eq!(random_dataset(7), random_dataset(7));
    }
}
