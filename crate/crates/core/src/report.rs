//! Inequality rendering of patterns, its inverse, and run reports as an
//! aligned table, TSV rows or JSON.

use std::fmt::Write as _;
use std::str::FromStr;

use rust_decimal::Decimal;
use serde_json::{json, Value};

use crate::discretize::{Bound, CutPoints};
use crate::error::{Error, Result};
use crate::miner::{MineResult, MinerConfig, RunStats};
use crate::model::{ClassTotals, CountStats, Dataset, Domain, Item, ItemValue, Pattern};
use crate::relevance::{Measure, Score};

fn bound_str(cuts: &CutPoints, i: u32) -> String {
    match cuts.bound(i) {
        Bound::Finite(v) => v.normalize().to_string(),
        Bound::NegInf => "-inf".into(),
        Bound::PosInf => "inf".into(),
    }
}

pub fn render_item(d: &Dataset, item: &Item) -> String {
    let attr = &d.attributes[item.attr as usize];
    match (&attr.domain, item.value) {
        (Domain::Symbolic { symbols }, ItemValue::Symbol(s)) => format!("{}={}", attr.name, symbols[s as usize]),
        (Domain::Numeric { cuts }, ItemValue::Interval { lo, hi }) => {
            let n = cuts.n_bases();
            match (lo, hi) {
                (0, hi) if hi < n => format!("{}<{}", attr.name, bound_str(cuts, hi)),
                (lo, hi) if lo > 0 && hi == n => format!("{}<={}", bound_str(cuts, lo), attr.name),
                (0, _) => format!("-inf<{}<inf", attr.name),
                _ => format!("{}<={}<{}", bound_str(cuts, lo), attr.name, bound_str(cuts, hi)),
            }
        }
        _ => panic!("item {item:?} does not fit attribute `{}`", attr.name),
    }
}

/// `{a=v, x<1.5, 2<=y<3}` in attribute order.
pub fn render_pattern(d: &Dataset, x: &Pattern) -> String {
    let items: Vec<String> = x.items().iter().map(|it| render_item(d, it)).collect();
    format!("{{{}}}", items.join(", "))
}

fn cut_index(cuts: &CutPoints, v: &str) -> Option<u32> {
    let v: Decimal = v.parse().ok()?;
    cuts.cuts().iter().position(|c| *c == v).map(|p| p as u32 + 1)
}

fn parse_item(d: &Dataset, s: &str) -> Option<Item> {
    for (a, attr) in d.attributes.iter().enumerate() {
        let a = a as u32;
        let name = attr.name.as_str();
        match &attr.domain {
            Domain::Symbolic { .. } => {
                let found = s.strip_prefix(name).and_then(|r| r.strip_prefix('=')).and_then(|v| attr.symbol_id(v));
                if let Some(id) = found {
                    return Some(Item::symbol(a, id));
                }
            }
            Domain::Numeric { cuts } => {
                let n = cuts.n_bases();
                let upper = s.strip_prefix(name).and_then(|r| r.strip_prefix('<')).filter(|v| !v.starts_with('='));
                if let Some(hi) = upper.and_then(|v| cut_index(cuts, v)) {
                    return Some(Item::interval(a, 0, hi));
                }
                if let Some(lo) = s.strip_suffix(&format!("<={name}")).and_then(|v| cut_index(cuts, v)) {
                    return Some(Item::interval(a, lo, n));
                }
                let mid = format!("<={name}<");
                if let Some(p) = s.find(&mid) {
                    if let (Some(lo), Some(hi)) = (cut_index(cuts, &s[..p]), cut_index(cuts, &s[p + mid.len()..])) {
                        if lo < hi {
                            return Some(Item::interval(a, lo, hi));
                        }
                    }
                }
            }
        }
    }
    None
}

/// Inverse of [`render_pattern`].
pub fn parse_pattern(d: &Dataset, s: &str) -> Result<Pattern> {
    let err = || Error::PatternSyntax(s.to_string());
    let body = s.trim().strip_prefix('{').and_then(|r| r.strip_suffix('}')).ok_or_else(err)?;
    if body.trim().is_empty() {
        return Ok(Pattern::empty());
    }
    let items = body
        .split(", ")
        .map(|part| parse_item(d, part.trim()).ok_or_else(err))
        .collect::<Result<Vec<_>>>()?;
    Pattern::new(items).map_err(|_| err())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Table,
    Tsv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(Format::Table),
            "tsv" => Ok(Format::Tsv),
            "json" => Ok(Format::Json),
            other => Err(Error::InvalidValue(format!("unknown format `{other}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReportRow {
    pub pattern: String,
    pub stats: CountStats,
    /// `p(c|x)`
    pub confidence: Score,
    /// `p(x|c)`
    pub support: Score,
    pub score: Score,
}

#[derive(Clone, Debug)]
pub struct ClassSection {
    pub class: String,
    pub totals: ClassTotals,
    pub rows: Vec<ReportRow>,
    pub stats: RunStats,
}

impl ClassSection {
    pub fn new(d: &Dataset, result: &MineResult) -> Self {
        let rows = result
            .patterns
            .iter()
            .map(|c| ReportRow {
                pattern: render_pattern(d, &c.pattern),
                stats: c.stats,
                confidence: Score::ratio(c.stats.n_pos as i64, (c.stats.n_pos + c.stats.n_neg) as i64),
                support: Score::ratio(c.stats.n_pos as i64, result.totals.pos as i64),
                score: c.score,
            })
            .collect();
        ClassSection { class: d.target.clone(), totals: result.totals, rows, stats: result.stats.clone() }
    }
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub measure: Measure,
    pub config: MinerConfig,
    pub sections: Vec<ClassSection>,
}

impl RunReport {
    pub fn truncated(&self) -> bool {
        self.sections.iter().any(|s| s.stats.truncated)
    }
}

fn score_header(m: Measure) -> &'static str {
    match m {
        Measure::FScore => "F",
        Measure::SupportDifference => "suppdiff",
        Measure::ChiSquare => "chi2",
        Measure::InformationGain => "infogain",
    }
}

fn score_json(s: Score) -> Value {
    match s.as_fraction() {
        Some((num, den)) => json!({ "num": num, "den": den, "decimal": s.to_decimal(3) }),
        None => json!({ "value": s.to_f64(), "decimal": s.to_decimal(3) }),
    }
}

pub fn emit_report(r: &RunReport, format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Tsv => {
            for s in &r.sections {
                for row in &s.rows {
                    let _ = writeln!(
                        out,
                        "{}\t{}\t{}\t{}\t{}",
                        s.class,
                        row.confidence.to_decimal(3),
                        row.support.to_decimal(3),
                        row.score.to_decimal(3),
                        row.pattern
                    );
                }
            }
        }
        Format::Table => {
            let w = r.sections.iter().map(|s| s.class.len()).max().unwrap_or(0).max(5);
            let _ = writeln!(out, "{:<w$}  {:>5}  {:>5}  {:>5}  pattern", "class", "conf", "rec", score_header(r.measure));
            for s in &r.sections {
                for row in &s.rows {
                    let _ = writeln!(
                        out,
                        "{:<w$}  {}  {}  {}  {}",
                        s.class,
                        row.confidence.to_decimal(3),
                        row.support.to_decimal(3),
                        row.score.to_decimal(3),
                        row.pattern
                    );
                }
            }
            for s in &r.sections {
                let _ = writeln!(
                    out,
                    "# {}: {} patterns, {} positives, {} negatives, {} visited, sigma_min {}, {:.3} s{}",
                    s.class,
                    s.rows.len(),
                    s.totals.pos,
                    s.totals.neg,
                    s.stats.visited,
                    s.stats.sigma_min.to_decimal(3),
                    s.stats.elapsed.as_secs_f64(),
                    if s.stats.truncated { ", truncated" } else { "" }
                );
            }
        }
        Format::Json => {
            let sections: Vec<Value> = r
                .sections
                .iter()
                .map(|s| {
                    let patterns: Vec<Value> = s
                        .rows
                        .iter()
                        .map(|row| {
                            json!({
                                "pattern": row.pattern,
                                "n_pos": row.stats.n_pos,
                                "n_neg": row.stats.n_neg,
                                "confidence": score_json(row.confidence),
                                "support": score_json(row.support),
                                "score": score_json(row.score),
                            })
                        })
                        .collect();
                    json!({
                        "class": s.class,
                        "n_pos": s.totals.pos,
                        "n_neg": s.totals.neg,
                        "visited": s.stats.visited,
                        "recorded": s.stats.recorded,
                        "sigma_min": score_json(s.stats.sigma_min),
                        "elapsed_secs": s.stats.elapsed.as_secs_f64(),
                        "truncated": s.stats.truncated,
                        "patterns": patterns,
                    })
                })
                .collect();
            let doc = json!({
                "measure": r.measure.to_string(),
                "config": {
                    "dynamic_merge": r.config.dynamic_merge,
                    "reorder": r.config.reorder,
                    "bnb": r.config.bnb,
                    "threads": r.config.threads,
                    "time_limit_secs": r.config.time_limit.map(|t| t.as_secs_f64()),
                },
                "truncated": r.truncated(),
                "classes": sections,
            });
            out = serde_json::to_string_pretty(&doc).expect("json values serialize");
            out.push('\n');
        }
    }
    out
}

/// `attribute<TAB>v1,v2,…` per numeric attribute.
pub fn render_cuts(d: &Dataset) -> String {
    let mut out = String::new();
    for attr in &d.attributes {
        if let Domain::Numeric { cuts } = &attr.domain {
            let vs: Vec<String> = cuts.cuts().iter().map(|c| c.normalize().to_string()).collect();
            let _ = writeln!(out, "{}\t{}", attr.name, vs.join(","));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::miner::mine;
    use crate::model::fixtures::toy6;
    use crate::random::random_dataset;
    use proptest::prelude::*;

    fn toy6_report() -> RunReport {
        let d = toy6();
        let cfg = MinerConfig::default();
        let r = mine(&d, &cfg);
        RunReport { measure: cfg.measure, sections: vec![ClassSection::new(&d, &r)], config: cfg }
    }

    #[test]
    fn toy6_rendering() {
        let d = toy6();
        let p = |items: Vec<Item>| Pattern::new(items).unwrap();
        assert_eq!(render_pattern(&d, &p(vec![Item::interval(1, 0, 3)])), "{A<3.5}");
        assert_eq!(render_pattern(&d, &p(vec![Item::interval(1, 1, 4)])), "{2.1<=A}");
        assert_eq!(
            render_pattern(&d, &p(vec![Item::symbol(0, 1), Item::interval(1, 1, 3)])),
            "{color=r, 2.1<=A<3.5}"
        );
        assert_eq!(parse_pattern(&d, "{color=r, 2.1<=A<3.5}").unwrap(), p(vec![Item::symbol(0, 1), Item::interval(1, 1, 3)]));
        assert!(parse_pattern(&d, "{A<3.6}").is_err());
        assert!(parse_pattern(&d, "A<3.5").is_err());
        assert_eq!(render_cuts(&d), "A\t2.1,2.6,3.5\n");
    }

    #[test]
    fn toy6_formats() {
        let r = toy6_report();
        assert_eq!(emit_report(&r, Format::Tsv), "+\t0.750\t1.000\t0.857\t{A<3.5}\n");
        let v: Value = serde_json::from_str(&emit_report(&r, Format::Json)).unwrap();
        let pat = &v["classes"][0]["patterns"][0];
        assert_eq!(pat["score"]["num"], 6);
        assert_eq!(pat["score"]["den"], 7);
        assert_eq!(pat["score"]["decimal"], "0.857");
        assert_eq!(v["classes"][0]["sigma_min"]["num"], 3);
        let table = emit_report(&r, Format::Table);
        assert!(table.lines().nth(1).unwrap().ends_with("0.750  1.000  0.857  {A<3.5}"));
    }

    #[test]
    fn empty_report() {
        let mut r = toy6_report();
        r.sections[0].rows.clear();
        r.sections[0].stats.truncated = true;
        assert_eq!(emit_report(&r, Format::Tsv), "");
        let v: Value = serde_json::from_str(&emit_report(&r, Format::Json)).unwrap();
        assert_eq!(v["truncated"], true);
        assert_eq!(v["classes"][0]["patterns"].as_array().unwrap().len(), 0);
    }

    proptest! {
        #[test]
        fn rendering_round_trips(seed in any::<u64>()) {
            let d = random_dataset(seed);
            for x in crate::oracle::enumerate_patterns(&d, crate::oracle::DEFAULT_CAP).unwrap().iter().take(500) {
                let s = render_pattern(&d, x);
                prop_assert_eq!(&parse_pattern(&d, &s).unwrap(), x, "{}", s);
            }
        }
    }
}
