//! Delimited-text loading, ε-binning and conversion into transactions.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;
use std::str::FromStr;

use rust_decimal::prelude::ToPrimitive;
use rust_decimal::Decimal;

use crate::discretize::CutPoints;
use crate::error::{Error, Result};
use crate::model::{Attribute, Dataset, Domain, Transaction};

/// 10⁻⁶.
pub fn default_epsilon() -> Decimal {
    Decimal::new(1, 6)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColumnKind {
    Symbolic,
    Numeric,
    Class,
    Ignore,
}

impl FromStr for ColumnKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "symbolic" => Ok(ColumnKind::Symbolic),
            "numeric" => Ok(ColumnKind::Numeric),
            "class" => Ok(ColumnKind::Class),
            "ignore" => Ok(ColumnKind::Ignore),
            other => Err(Error::Schema(format!("unknown column kind `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableSchema {
    pub columns: Vec<(String, ColumnKind)>,
    pub class_column: String,
}

impl TableSchema {
    /// One `name kind` pair per line; blank lines and `#` comments skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut columns = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(name), Some(kind), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::Schema(format!("expected `name kind`, got `{line}`")));
            };
            columns.push((name.to_string(), kind.parse()?));
        }
        let classes: Vec<_> = columns.iter().filter(|(_, k)| *k == ColumnKind::Class).collect();
        if classes.len() != 1 {
            return Err(Error::Schema(format!("expected exactly one class column, found {}", classes.len())));
        }
        let class_column = classes[0].0.clone();
        if !columns.iter().any(|(_, k)| matches!(k, ColumnKind::Symbolic | ColumnKind::Numeric)) {
            return Err(Error::Schema("no attribute columns".into()));
        }
        Ok(TableSchema { columns, class_column })
    }
}

pub enum SchemaSource {
    /// Numeric iff every non-empty cell parses as a decimal; class column
    /// from the options (default: last column).
    Auto,
    Explicit(TableSchema),
}

#[derive(Clone, Debug)]
pub struct LoadOptions {
    pub class_column: Option<String>,
    pub epsilon: Decimal,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions { class_column: None, epsilon: default_epsilon() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ColumnValues {
    Symbolic(Vec<Option<String>>),
    Numeric(Vec<Option<Decimal>>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RawColumn {
    pub name: String,
    pub values: ColumnValues,
}

impl RawColumn {
    pub fn symbolic(name: &str, values: Vec<Option<String>>) -> Self {
        RawColumn { name: name.to_string(), values: ColumnValues::Symbolic(values) }
    }

    pub fn numeric(name: &str, values: Vec<Option<Decimal>>) -> Self {
        RawColumn { name: name.to_string(), values: ColumnValues::Numeric(values) }
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self.values, ColumnValues::Numeric(_))
    }
}

/// The parsed table: attribute columns (class and ignored columns removed),
/// the class label of every row and the binning precision ε.
#[derive(Clone, Debug, PartialEq)]
pub struct RawTable {
    pub columns: Vec<RawColumn>,
    pub classes: Vec<String>,
    pub class_column: String,
    pub epsilon: Decimal,
}

impl RawTable {
    pub fn n_rows(&self) -> usize {
        self.classes.len()
    }

    /// Distinct class labels in order of first appearance.
    pub fn class_labels(&self) -> Vec<String> {
        let mut seen = BTreeSet::new();
        self.classes.iter().filter(|c| seen.insert(c.as_str())).cloned().collect()
    }

    pub fn column(&self, name: &str) -> Option<&RawColumn> {
        self.columns.iter().find(|c| c.name == name)
    }
}

pub fn parse_decimal(s: &str) -> Option<Decimal> {
    let s = s.trim();
    Decimal::from_str(s).ok().or_else(|| Decimal::from_scientific(s).ok())
}

fn detect_delimiter(text: &str) -> u8 {
    let header = text.lines().next().unwrap_or("");
    if header.contains('\t') && !header.contains(',') {
        b'\t'
    } else {
        b','
    }
}

pub fn load_table<R: Read>(mut source: R, schema: &SchemaSource, opts: &LoadOptions) -> Result<RawTable> {
    if opts.epsilon <= Decimal::ZERO {
        return Err(Error::InvalidValue(format!("epsilon must be positive, got {}", opts.epsilon)));
    }
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(detect_delimiter(&text))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header.is_empty() || header.iter().all(|h| h.is_empty()) {
        return Err(Error::EmptyTable);
    }
    let mut rows: Vec<Vec<String>> = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        if rec.len() != header.len() {
            return Err(Error::Parse {
                row: rows.len() + 1,
                column: String::new(),
                message: format!("expected {} fields, found {}", header.len(), rec.len()),
            });
        }
        rows.push(rec.iter().map(str::to_string).collect());
    }
    if rows.is_empty() {
        return Err(Error::EmptyTable);
    }

    let kinds: Vec<ColumnKind> = match schema {
        SchemaSource::Explicit(s) => {
            let mut kinds = vec![ColumnKind::Ignore; header.len()];
            for (name, kind) in &s.columns {
                let idx = header
                    .iter()
                    .position(|h| h == name)
                    .ok_or_else(|| Error::UnknownColumn(name.clone()))?;
                kinds[idx] = *kind;
            }
            kinds
        }
        SchemaSource::Auto => {
            let class_name = opts.class_column.clone().unwrap_or_else(|| header.last().unwrap().clone());
            let class_idx = header
                .iter()
                .position(|h| *h == class_name)
                .ok_or(Error::UnknownClassColumn(class_name))?;
            (0..header.len())
                .map(|c| {
                    if c == class_idx {
                        ColumnKind::Class
                    } else if rows.iter().all(|r| r[c].is_empty() || parse_decimal(&r[c]).is_some()) {
                        ColumnKind::Numeric
                    } else {
                        ColumnKind::Symbolic
                    }
                })
                .collect()
        }
    };
    let class_idx = kinds
        .iter()
        .position(|k| *k == ColumnKind::Class)
        .ok_or_else(|| Error::UnknownClassColumn(opts.class_column.clone().unwrap_or_default()))?;

    let mut classes = Vec::with_capacity(rows.len());
    for (r, row) in rows.iter().enumerate() {
        if row[class_idx].is_empty() {
            return Err(Error::Parse {
                row: r + 1,
                column: header[class_idx].clone(),
                message: "missing class label".into(),
            });
        }
        classes.push(row[class_idx].clone());
    }

    let mut columns = Vec::new();
    for (c, kind) in kinds.iter().enumerate() {
        let name = header[c].as_str();
        match kind {
            ColumnKind::Symbolic => columns.push(RawColumn::symbolic(
                name,
                rows.iter().map(|r| (!r[c].is_empty()).then(|| r[c].clone())).collect(),
            )),
            ColumnKind::Numeric => {
                let mut values = Vec::with_capacity(rows.len());
                for (r, row) in rows.iter().enumerate() {
                    if row[c].is_empty() {
                        values.push(None);
                        continue;
                    }
                    let v = parse_decimal(&row[c]).ok_or_else(|| Error::Parse {
                        row: r + 1,
                        column: name.to_string(),
                        message: format!("`{}` is not a finite decimal", row[c]),
                    })?;
                    values.push(Some(v));
                }
                columns.push(RawColumn::numeric(name, values));
            }
            ColumnKind::Class | ColumnKind::Ignore => {}
        }
    }
    if columns.is_empty() {
        return Err(Error::Schema("no attribute columns".into()));
    }
    Ok(RawTable { columns, classes, class_column: header[class_idx].clone(), epsilon: opts.epsilon })
}

/// `floor(v / ε)`: all values in `[mε, (m+1)ε)` share bin `m`.
pub fn bin_value(v: Decimal, epsilon: Decimal) -> Result<i64> {
    if epsilon <= Decimal::ZERO {
        return Err(Error::InvalidValue(format!("epsilon must be positive, got {epsilon}")));
    }
    v.checked_div(epsilon)
        .and_then(|q| q.floor().to_i64())
        .ok_or_else(|| Error::InvalidValue(format!("{v} / {epsilon} out of range")))
}

/// The value standing for bin `m`: its lower edge `mε`.
pub fn bin_representative(m: i64, epsilon: Decimal) -> Decimal {
    Decimal::from(m) * epsilon
}

/// Collapse every class other than `class_of_interest` into ¬c and map each
/// cell to a symbol id or base-interval index.
pub fn to_transactions(table: &RawTable, cuts: &BTreeMap<String, CutPoints>, class_of_interest: &str) -> Result<Dataset> {
    let mut attributes = Vec::with_capacity(table.columns.len());
    for col in &table.columns {
        let domain = match &col.values {
            ColumnValues::Symbolic(values) => {
                let symbols: BTreeSet<&String> = values.iter().flatten().collect();
                Domain::Symbolic { symbols: symbols.into_iter().cloned().collect() }
            }
            ColumnValues::Numeric(_) => {
                let cuts = cuts
                    .get(&col.name)
                    .ok_or_else(|| Error::InvalidValue(format!("no cut-points for numeric column `{}`", col.name)))?;
                Domain::Numeric { cuts: cuts.clone() }
            }
        };
        attributes.push(Attribute { name: col.name.clone(), domain });
    }
    encode_table(table, attributes, class_of_interest)
}

/// Encode `table` against an existing attribute list; symbols must already be
/// known.
pub fn encode_table(table: &RawTable, attributes: Vec<Attribute>, class_of_interest: &str) -> Result<Dataset> {
    if !table.classes.iter().any(|c| c == class_of_interest) {
        return Err(Error::UnknownClass(class_of_interest.to_string()));
    }
    let mut columns = Vec::with_capacity(attributes.len());
    for attr in &attributes {
        let col = table
            .column(&attr.name)
            .ok_or_else(|| Error::UnknownColumn(attr.name.clone()))?;
        columns.push(col);
    }
    let mut transactions: Vec<Transaction> = table
        .classes
        .iter()
        .map(|c| Transaction { slots: Vec::with_capacity(attributes.len()), positive: c == class_of_interest })
        .collect();
    for (attr, col) in attributes.iter().zip(&columns) {
        match (&attr.domain, &col.values) {
            (Domain::Symbolic { .. }, ColumnValues::Symbolic(values)) => {
                for (t, v) in transactions.iter_mut().zip(values) {
                    let slot = match v {
                        None => None,
                        Some(s) => Some(attr.symbol_id(s).ok_or_else(|| Error::UnseenSymbol {
                            attribute: attr.name.clone(),
                            symbol: s.clone(),
                        })?),
                    };
                    t.slots.push(slot);
                }
            }
            (Domain::Numeric { cuts }, ColumnValues::Numeric(values)) => {
                for (t, v) in transactions.iter_mut().zip(values) {
                    let slot = match v {
                        None => None,
                        Some(v) => {
                            let rep = bin_representative(bin_value(*v, table.epsilon)?, table.epsilon);
                            Some(cuts.base_of(rep))
                        }
                    };
                    t.slots.push(slot);
                }
            }
            _ => return Err(Error::Schema(format!("column `{}` changed kind", attr.name))),
        }
    }
    Ok(Dataset { attributes, transactions, target: class_of_interest.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::{toy6, toy6_table};
    use proptest::prelude::*;

    fn dec(s: &str) -> Decimal {
        s.parse().unwrap()
    }

    #[test]
    fn bin_examples() {
        let eps = dec("0.01");
        assert_eq!(bin_value(dec("0.0"), eps).unwrap(), 0);
        assert_eq!(bin_value(dec("2.449"), eps).unwrap(), 244);
        assert_eq!(bin_value(dec("2.441"), eps).unwrap(), 244);
        assert_eq!(bin_value(dec("-0.005"), eps).unwrap(), -1);
        assert!(bin_value(dec("1"), Decimal::ZERO).is_err());
    }

    #[test]
    fn auto_schema_and_delimiters() {
        let csv = "x,y,class\n1.5,a,p\n2,b,n\n,a,p\n";
        let t = load_table(csv.as_bytes(), &SchemaSource::Auto, &LoadOptions::default()).unwrap();
        assert_eq!(t.columns.len(), 2);
        assert!(t.columns[0].is_numeric());
        assert!(!t.columns[1].is_numeric());
        assert_eq!(t.classes, vec!["p", "n", "p"]);
        match &t.columns[0].values {
            ColumnValues::Numeric(v) => assert_eq!(v[2], None),
            _ => unreachable!(),
        }

        let tsv = "x\tclass\n1e-3\tp\n";
        let t = load_table(tsv.as_bytes(), &SchemaSource::Auto, &LoadOptions::default()).unwrap();
        assert!(t.columns[0].is_numeric());
    }

    #[test]
    fn load_errors() {
        let opts = LoadOptions::default();
        assert!(matches!(
            load_table("a,b,class\n".as_bytes(), &SchemaSource::Auto, &opts),
            Err(Error::EmptyTable)
        ));
        let opts = LoadOptions { class_column: Some("nope".into()), ..Default::default() };
        assert!(matches!(
            load_table("a,class\n1,p\n".as_bytes(), &SchemaSource::Auto, &opts),
            Err(Error::UnknownClassColumn(_))
        ));
        let schema = TableSchema::parse("a numeric\nclass class\n").unwrap();
        let err = load_table("a,class\n1,p\nzz,q\n".as_bytes(), &SchemaSource::Explicit(schema), &Default::default())
            .unwrap_err();
        assert!(matches!(err, Error::Parse { row: 2, ref column, .. } if column == "a"), "{err}");
    }

    #[test]
    fn schema_file() {
        let s = TableSchema::parse("# cols\nid ignore\nx numeric\ncolor symbolic\ny class\n").unwrap();
        assert_eq!(s.class_column, "y");
        assert!(TableSchema::parse("x numeric\n").is_err());
        assert!(TableSchema::parse("y class\n").is_err());
        let t = load_table(
            "id,x,color,y\n1,0.5,r,p\n2,0.7,4,q\n".as_bytes(),
            &SchemaSource::Explicit(s),
            &Default::default(),
        )
        .unwrap();
        assert_eq!(t.columns.iter().map(|c| c.name.as_str()).collect::<Vec<_>>(), ["x", "color"]);
        assert!(!t.columns[1].is_numeric());
    }

    #[test]
    fn toy6_transactions() {
        let d = toy6();
        assert_eq!(d.transactions.len(), 6);
        assert_eq!(d.transactions[0].slots, vec![Some(1), Some(0)]);
        assert_eq!(d.transactions[5].slots, vec![Some(0), Some(1)]);
        assert_eq!(d.totals().pos, 3);
    }

    #[test]
    fn virtual_class_collapse() {
        let mut table = toy6_table();
        table.classes = ["a", "b", "c", "a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let cuts = crate::discretize::build_cutpoints(&table, "a").unwrap();
        let d = to_transactions(&table, &cuts, "a").unwrap();
        assert_eq!(d.transactions.iter().filter(|t| !t.positive).count(), 4);
        assert!(matches!(to_transactions(&table, &cuts, "zz"), Err(Error::UnknownClass(_))));
    }

    #[test]
    fn unseen_symbol_is_an_error() {
        let d = toy6();
        let mut table = toy6_table();
        if let ColumnValues::Symbolic(v) = &mut table.columns[0].values {
            v[0] = Some("g".into());
        }
        assert!(matches!(encode_table(&table, d.attributes, "+"), Err(Error::UnseenSymbol { .. })));
    }

    proptest! {
        #[test]
        fn binning_is_idempotent(m in -1_000_000_000i64..1_000_000_000, e in 0u32..8) {
            let eps = Decimal::new(1, e);
            prop_assert_eq!(bin_value(bin_representative(m, eps), eps).unwrap(), m);
        }

        #[test]
        fn partition_of_rows(values in proptest::collection::vec((0u32..40, any::<bool>()), 1..30)) {
            let table = RawTable {
                columns: vec![RawColumn::numeric("v", values.iter().map(|(v, _)| Some(Decimal::new(*v as i64, 1))).collect())],
                classes: values.iter().map(|(_, c)| if *c { "p".to_string() } else { "n".to_string() }).collect(),
                class_column: "class".into(),
                epsilon: default_epsilon(),
            };
            prop_assume!(table.classes.iter().any(|c| c == "p"));
            let cuts = crate::discretize::build_cutpoints(&table, "p").unwrap();
            let d = to_transactions(&table, &cuts, "p").unwrap();
            prop_assert_eq!(d.transactions.len(), values.len());
            prop_assert_eq!(d.totals().pos as usize, values.iter().filter(|(_, c)| *c).count());
            let cp = &cuts["v"];
            for (t, (v, _)) in d.transactions.iter().zip(&values) {
                let base = t.slots[0].unwrap();
                let v = Decimal::new(*v as i64, 1);
                prop_assert!(base < cp.n_bases());
                prop_assert!(base == 0 || cp.cuts()[base as usize - 1] <= v);
                prop_assert!(base as usize == cp.cuts().len() || v < cp.cuts()[base as usize]);
            }
        }
    }
}
