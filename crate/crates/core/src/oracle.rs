//! Brute-force reference: every pattern of a small dataset is scored by a
//! full scan, and the output constraints are applied by definition.
//! Shares no code with the search beyond the data model and the measures.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::miner::{sort_output, Candidate};
use crate::model::{count_cover, covers, strictly_subsumes_pattern, Dataset, Domain, Item, Pattern};
use crate::relevance::{compare, score, Measure, Score};

pub const DEFAULT_CAP: u128 = 10_000_000;

/// Per attribute, the items a pattern may hold there (none excepted).
fn choices(d: &Dataset) -> Vec<Vec<Item>> {
    d.attributes
        .iter()
        .enumerate()
        .map(|(a, attr)| {
            let a = a as u32;
            match &attr.domain {
                Domain::Symbolic { symbols } => (0..symbols.len() as u32).map(|s| Item::symbol(a, s)).collect(),
                Domain::Numeric { cuts } => {
                    let n = cuts.n_bases();
                    let mut v = Vec::new();
                    for lo in 0..n {
                        for hi in lo + 1..=n {
                            if !(lo == 0 && hi == n) {
                                v.push(Item::interval(a, lo, hi));
                            }
                        }
                    }
                    v
                }
            }
        })
        .collect()
}

/// Size of the pattern space, the empty pattern included.
pub fn space_size(d: &Dataset) -> u128 {
    choices(d).iter().map(|c| c.len() as u128 + 1).product()
}

/// Every non-empty pattern: per attribute nothing, one symbol, or one
/// interval other than the full range.
pub fn enumerate_patterns(d: &Dataset, cap: u128) -> Result<Vec<Pattern>> {
    let size = space_size(d);
    if size > cap {
        return Err(Error::OracleCap(size));
    }
    let choices = choices(d);
    let mut out: Vec<Vec<Item>> = vec![Vec::new()];
    for c in &choices {
        let mut next = Vec::with_capacity(out.len() * (c.len() + 1));
        for p in &out {
            next.push(p.clone());
            for it in c {
                let mut q = p.clone();
                q.push(*it);
                next.push(q);
            }
        }
        out = next;
    }
    Ok(out
        .into_iter()
        .filter(|p| !p.is_empty())
        .map(|p| Pattern::new(p).expect("one item per attribute"))
        .collect())
}

/// The miner's output semantics, evaluated exhaustively.
pub fn oracle_mine(d: &Dataset, m: Measure, cap: u128) -> Result<Vec<Candidate>> {
    let totals = d.totals();
    let positives = d.positive_indices();
    let all = enumerate_patterns(d, cap)?;

    struct Scored {
        pattern: Pattern,
        cover: Vec<bool>,
        cand: Option<Candidate>,
    }
    let scored: Vec<Scored> = all
        .into_iter()
        .map(|pattern| {
            let cover: Vec<bool> = positives.iter().map(|&i| covers(&pattern, &d.transactions[i])).collect();
            let stats = count_cover(&pattern, d);
            let cand = totals
                .focus(stats)
                .then(|| Candidate { pattern: pattern.clone(), stats, score: score(m, stats, totals) });
            Scored { pattern, cover, cand }
        })
        .collect();

    // top-1 score per positive over focused patterns
    let mut best: Vec<Option<Score>> = vec![None; positives.len()];
    for s in &scored {
        let Some(c) = &s.cand else { continue };
        for (k, &hit) in s.cover.iter().enumerate() {
            if hit && best[k].is_none_or(|b| compare(c.score, b).is_gt()) {
                best[k] = Some(c.score);
            }
        }
    }
    let tied = |s: &Scored| {
        let c = s.cand.as_ref().expect("focused");
        s.cover.iter().enumerate().any(|(k, &hit)| hit && best[k].is_some_and(|b| compare(c.score, b).is_eq()))
    };

    let mut by_cover: HashMap<&[bool], Vec<&Pattern>> = HashMap::new();
    for s in &scored {
        by_cover.entry(s.cover.as_slice()).or_default().push(&s.pattern);
    }
    let closed = |s: &Scored| by_cover[s.cover.as_slice()].iter().all(|y| !strictly_subsumes_pattern(&s.pattern, y));

    let mut out: Vec<Candidate> = scored
        .iter()
        .filter(|s| s.cand.is_some() && tied(s) && closed(s))
        .map(|s| s.cand.clone().expect("focused"))
        .collect();
    sort_output(&mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{default_epsilon, to_transactions, RawColumn, RawTable};
    use crate::model::fixtures::toy6;

    #[test]
    fn toy6_space() {
        let d = toy6();
        assert_eq!(enumerate_patterns(&d, DEFAULT_CAP).unwrap().len(), 29);
        assert!(matches!(enumerate_patterns(&d, 10), Err(Error::OracleCap(30))));
    }

    #[test]
    fn toy6_oracle() {
        let out = oracle_mine(&toy6(), Measure::FScore, DEFAULT_CAP).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].pattern, Pattern::new(vec![Item::interval(1, 0, 3)]).unwrap());
        assert_eq!(out[0].score, Score::ratio(6, 7));
    }

    fn one_column(col: RawColumn, classes: &[&str]) -> Dataset {
        let table = RawTable {
            columns: vec![col],
            classes: classes.iter().map(|s| s.to_string()).collect(),
            class_column: "class".into(),
            epsilon: default_epsilon(),
        };
        let cuts = crate::discretize::build_cutpoints(&table, "+").unwrap();
        to_transactions(&table, &cuts, "+").unwrap()
    }

    #[test]
    fn small_spaces() {
        let sym = one_column(RawColumn::symbolic("s", vec![Some("u".into()), Some("v".into())]), &["+", "-"]);
        assert_eq!(enumerate_patterns(&sym, DEFAULT_CAP).unwrap().len(), 2);
        let num = one_column(RawColumn::numeric("x", vec![Some(1.into()), Some(2.into())]), &["+", "-"]);
        assert_eq!(enumerate_patterns(&num, DEFAULT_CAP).unwrap().len(), 2);
    }

    #[test]
    fn unique_signature_is_most_specific() {
        // a single positive row is best described by all of its values
        let table = RawTable {
            columns: vec![
                RawColumn::symbolic("s", ["u", "u", "v"].iter().map(|s| Some(s.to_string())).collect()),
                RawColumn::numeric("x", vec![Some(1.into()), Some(2.into()), Some(3.into())]),
            ],
            classes: ["-", "+", "-"].iter().map(|s| s.to_string()).collect(),
            class_column: "class".into(),
            epsilon: default_epsilon(),
        };
        let cuts = crate::discretize::build_cutpoints(&table, "+").unwrap();
        let d = to_transactions(&table, &cuts, "+").unwrap();
        let out = oracle_mine(&d, Measure::FScore, DEFAULT_CAP).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].pattern.len(), 2);
        assert_eq!(out[0].score, Score::ratio(1, 1));
    }

    #[test]
    fn all_positive() {
        let d = one_column(RawColumn::numeric("x", vec![Some(1.into()), Some(2.into())]), &["+", "+"]);
        // a single base: nothing but the forbidden full range
        assert!(enumerate_patterns(&d, DEFAULT_CAP).unwrap().is_empty());
        assert!(oracle_mine(&d, Measure::FScore, DEFAULT_CAP).unwrap().is_empty());
    }
}
