//! Browser bindings: mine a pasted table, show its cut-points, and run the
//! oracle cross-check on generated instances.

use wasm_bindgen::prelude::*;

use hypat::discretize::build_cutpoints;
use hypat::ingest::{load_table, to_transactions, RawTable, SchemaSource};
use hypat::oracle::{oracle_mine, DEFAULT_CAP};
use hypat::random::random_dataset;
use hypat::report::{emit_report, render_cuts, ClassSection, Format, RunReport};
use hypat::{mine, Dataset, Measure, MinerConfig};

fn js_err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

fn parse(csv: &str) -> Result<RawTable, JsError> {
    load_table(csv.as_bytes(), &SchemaSource::Auto, &Default::default()).map_err(js_err)
}

/// An empty target means every class.
fn classes(table: &RawTable, target: &str) -> Vec<String> {
    if target.is_empty() {
        table.class_labels()
    } else {
        vec![target.to_string()]
    }
}

fn dataset(table: &RawTable, class: &str) -> Result<Dataset, JsError> {
    let cuts = build_cutpoints(table, class).map_err(js_err)?;
    to_transactions(table, &cuts, class).map_err(js_err)
}

/// The JSON report of mining `csv` (header row, class in the last column).
#[wasm_bindgen]
pub fn mine_csv(csv: &str, target: &str, measure: &str) -> Result<String, JsError> {
    let table = parse(csv)?;
    let measure: Measure = measure.parse().map_err(js_err)?;
    let config = MinerConfig { measure, ..Default::default() };
    let mut sections = Vec::new();
    for class in classes(&table, target) {
        let d = dataset(&table, &class)?;
        sections.push(ClassSection::new(&d, &mine(&d, &config)));
    }
    Ok(emit_report(&RunReport { measure, config, sections }, Format::Json))
}

/// `attribute<TAB>cut,cut,…` per numeric attribute, per class.
#[wasm_bindgen]
pub fn cut_points(csv: &str, target: &str) -> Result<String, JsError> {
    let table = parse(csv)?;
    let mut out = String::new();
    for class in classes(&table, target) {
        out.push_str(&format!("# class {class}\n{}", render_cuts(&dataset(&table, &class)?)));
    }
    Ok(out)
}

/// Miner against oracle on `count` generated instances from `seed`; the
/// first differing seed, or `None`.
#[wasm_bindgen]
pub fn verify_random(seed: u32, count: u32, measure: &str) -> Result<Option<u32>, JsError> {
    let measure: Measure = measure.parse().map_err(js_err)?;
    let config = MinerConfig { measure, ..Default::default() };
    for s in seed..seed.saturating_add(count) {
        let d = random_dataset(s as u64);
        if mine(&d, &config).patterns != oracle_mine(&d, measure, DEFAULT_CAP).map_err(js_err)? {
            return Ok(Some(s));
        }
    }
    Ok(None)
}
