//! Items, transactions, patterns and the exact count statistics everything
//! else is built on.
//!
//! Interval items carry cut-point indices rather than raw bounds: `lo` and
//! `hi` index into the attribute's [`CutPoints`], with index 0 standing for
//! minus infinity and index `n` for plus infinity.

use std::fmt;

use serde::Serialize;

use crate::discretize::CutPoints;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AttrKind {
    Symbolic,
    Numeric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AttributeId {
    pub index: u32,
    pub kind: AttrKind,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Domain {
    /// Symbol ids index into `symbols`.
    Symbolic { symbols: Vec<String> },
    Numeric { cuts: CutPoints },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Attribute {
    pub name: String,
    pub domain: Domain,
}

impl Attribute {
    pub fn kind(&self) -> AttrKind {
        match self.domain {
            Domain::Symbolic { .. } => AttrKind::Symbolic,
            Domain::Numeric { .. } => AttrKind::Numeric,
        }
    }

    /// Number of base intervals; `None` for symbolic attributes.
    pub fn n_bases(&self) -> Option<u32> {
        match &self.domain {
            Domain::Numeric { cuts } => Some(cuts.n_bases()),
            Domain::Symbolic { .. } => None,
        }
    }

    pub fn symbol_id(&self, symbol: &str) -> Option<u32> {
        match &self.domain {
            Domain::Symbolic { symbols } => symbols.iter().position(|s| s == symbol).map(|i| i as u32),
            Domain::Numeric { .. } => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ItemValue {
    Symbol(u32),
    /// `[v_lo, v_hi)` with `lo < hi`.
    Interval { lo: u32, hi: u32 },
}

/// `A=v` or `A:[v_lo, v_hi)`.
///
/// The derived ordering is (attribute, value), which is both the canonical
/// pattern order and the deterministic tie-break used at branches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Item {
    pub attr: u32,
    pub value: ItemValue,
}

impl Item {
    pub fn symbol(attr: u32, symbol: u32) -> Self {
        Item { attr, value: ItemValue::Symbol(symbol) }
    }

    pub fn interval(attr: u32, lo: u32, hi: u32) -> Self {
        debug_assert!(lo < hi, "empty interval [{lo}, {hi})");
        Item { attr, value: ItemValue::Interval { lo, hi } }
    }

    pub fn is_base(&self) -> bool {
        matches!(self.value, ItemValue::Interval { lo, hi } if hi == lo + 1)
    }

    pub fn is_upper(&self) -> bool {
        matches!(self.value, ItemValue::Interval { lo, hi } if hi > lo + 1)
    }

    /// Does this item match the value held in a transaction slot?
    #[inline]
    pub fn matches_slot(&self, slot: u32) -> bool {
        match self.value {
            ItemValue::Symbol(s) => s == slot,
            ItemValue::Interval { lo, hi } => lo <= slot && slot < hi,
        }
    }
}

/// `x ⪰ y`: same attribute and either equal symbols or `x`'s interval
/// contains `y`'s.
pub fn subsumes_item(x: &Item, y: &Item) -> bool {
    if x.attr != y.attr {
        return false;
    }
    match (x.value, y.value) {
        (ItemValue::Symbol(a), ItemValue::Symbol(b)) => a == b,
        (ItemValue::Interval { lo: xl, hi: xh }, ItemValue::Interval { lo: yl, hi: yh }) => {
            xl <= yl && yh <= xh
        }
        _ => false,
    }
}

pub fn strictly_subsumes_item(x: &Item, y: &Item) -> bool {
    x != y && subsumes_item(x, y)
}

/// A conjunction of items over pairwise-distinct attributes, kept sorted by
/// attribute index so equality is structural.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    items: Vec<Item>,
}

impl Pattern {
    pub fn empty() -> Self {
        Pattern { items: Vec::new() }
    }

    pub fn new(mut items: Vec<Item>) -> Result<Self> {
        items.sort();
        if items.windows(2).any(|w| w[0].attr == w[1].attr) {
            return Err(Error::InvalidValue("pattern repeats an attribute".into()));
        }
        Ok(Pattern { items })
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn get(&self, attr: u32) -> Option<&Item> {
        self.items
            .binary_search_by_key(&attr, |it| it.attr)
            .ok()
            .map(|i| &self.items[i])
    }

    /// `self ∪ {item}`; panics if the attribute is already present.
    pub fn with(&self, item: Item) -> Pattern {
        let pos = match self.items.binary_search_by_key(&item.attr, |it| it.attr) {
            Ok(_) => panic!("attribute {} already in pattern", item.attr),
            Err(p) => p,
        };
        let mut items = Vec::with_capacity(self.items.len() + 1);
        items.extend_from_slice(&self.items[..pos]);
        items.push(item);
        items.extend_from_slice(&self.items[pos..]);
        Pattern { items }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, it) in self.items.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            match it.value {
                ItemValue::Symbol(s) => write!(f, "#{}={}", it.attr, s)?,
                ItemValue::Interval { lo, hi } => write!(f, "#{}:[{},{})", it.attr, lo, hi)?,
            }
        }
        f.write_str("}")
    }
}

/// Every item of `x` subsumes some item of `y`. Since both sides hold at
/// most one item per attribute this is an attribute-wise check.
pub fn subsumes_pattern(x: &Pattern, y: &Pattern) -> bool {
    x.items.iter().all(|xi| y.get(xi.attr).is_some_and(|yi| subsumes_item(xi, yi)))
}

pub fn strictly_subsumes_pattern(x: &Pattern, y: &Pattern) -> bool {
    x != y && subsumes_pattern(x, y)
}

/// One row after discretization: per attribute a symbol id or base-interval
/// index, `None` when the value was missing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transaction {
    pub slots: Vec<Option<u32>>,
    /// Labelled with the class of interest (otherwise the virtual class ¬c).
    pub positive: bool,
}

/// `x ⪰ t`. A missing slot is covered by no item of that attribute.
pub fn covers(x: &Pattern, t: &Transaction) -> bool {
    x.items.iter().all(|it| {
        let slot = t
            .slots
            .get(it.attr as usize)
            .unwrap_or_else(|| panic!("item attribute {} outside transaction schema", it.attr));
        slot.is_some_and(|v| it.matches_slot(v))
    })
}

/// `|D_c(x)|` and `|D_¬c(x)|`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct CountStats {
    pub n_pos: u64,
    pub n_neg: u64,
}

impl CountStats {
    pub fn new(n_pos: u64, n_neg: u64) -> Self {
        CountStats { n_pos, n_neg }
    }
}

/// `|D_c|` and `|D_¬c|`, fixed for a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ClassTotals {
    pub pos: u64,
    pub neg: u64,
}

impl ClassTotals {
    /// `p(x|c) ≥ p(x|¬c)`, cross-multiplied.
    pub fn focus(&self, s: CountStats) -> bool {
        s.n_pos as u128 * self.neg as u128 >= s.n_neg as u128 * self.pos as u128
    }
}

/// The transactional form of a table relative to one class of interest.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub attributes: Vec<Attribute>,
    pub transactions: Vec<Transaction>,
    pub target: String,
}

impl Dataset {
    pub fn totals(&self) -> ClassTotals {
        let pos = self.transactions.iter().filter(|t| t.positive).count() as u64;
        ClassTotals { pos, neg: self.transactions.len() as u64 - pos }
    }

    pub fn attribute_id(&self, index: u32) -> AttributeId {
        AttributeId { index, kind: self.attributes[index as usize].kind() }
    }

    pub fn attribute_index(&self, name: &str) -> Option<u32> {
        self.attributes.iter().position(|a| a.name == name).map(|i| i as u32)
    }

    /// Indices (into `transactions`) of the positive transactions, in order.
    pub fn positive_indices(&self) -> Vec<usize> {
        self.transactions
            .iter()
            .enumerate()
            .filter_map(|(i, t)| t.positive.then_some(i))
            .collect()
    }

    /// Is `item` well formed against this dataset's attributes?
    pub fn item_in_range(&self, item: &Item) -> bool {
        let Some(attr) = self.attributes.get(item.attr as usize) else {
            return false;
        };
        match (&attr.domain, item.value) {
            (Domain::Symbolic { symbols }, ItemValue::Symbol(s)) => (s as usize) < symbols.len(),
            (Domain::Numeric { cuts }, ItemValue::Interval { lo, hi }) => lo < hi && hi <= cuts.n_bases(),
            _ => false,
        }
    }
}

/// Reference counter: a full scan of `D`.
pub fn count_cover(x: &Pattern, d: &Dataset) -> CountStats {
    let mut s = CountStats::default();
    for t in &d.transactions {
        if covers(x, t) {
            if t.positive {
                s.n_pos += 1;
            } else {
                s.n_neg += 1;
            }
        }
    }
    s
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::ingest::{RawColumn, RawTable};
    use rust_decimal::Decimal;

    /// toy-6: (color, A, class) = (r,1.0,+), (r,2.0,+), (b,3.0,+),
    /// (b,4.0,−), (r,5.0,−), (b,2.2,−).
    pub fn toy6_table() -> RawTable {
        let num = |s: &str| Some(s.parse::<Decimal>().unwrap());
        RawTable {
            columns: vec![
                RawColumn::symbolic(
                    "color",
                    ["r", "r", "b", "b", "r", "b"].iter().map(|s| Some(s.to_string())).collect(),
                ),
                RawColumn::numeric(
                    "A",
                    vec![num("1.0"), num("2.0"), num("3.0"), num("4.0"), num("5.0"), num("2.2")],
                ),
            ],
            classes: ["+", "+", "+", "-", "-", "-"].iter().map(|s| s.to_string()).collect(),
            class_column: "class".into(),
            epsilon: crate::ingest::default_epsilon(),
        }
    }

    /// toy-6 discretized for class "+": Δ_A = {2.1, 2.6, 3.5}, color b=0, r=1.
    pub fn toy6() -> Dataset {
        let table = toy6_table();
        let cuts = crate::discretize::build_cutpoints(&table, "+").unwrap();
        crate::ingest::to_transactions(&table, &cuts, "+").unwrap()
    }
}
