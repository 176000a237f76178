//! Discriminative pattern mining over tables mixing symbolic and numeric
//! attributes.
//!
//! Numeric columns are discretized per class into cut-points, and patterns
//! may use any interval between two cut-points. For every transaction of
//! the class of interest the miner finds the patterns of best relevance
//! covering it, so that the output covers the class exhaustively.
//!
//! ```
//! use hypat::{ingest, discretize, miner, report};
//!
//! let csv = "color,A,class\nr,1.0,+\nr,2.0,+\nb,3.0,+\nb,4.0,-\nr,5.0,-\nb,2.2,-\n";
//! let table = ingest::load_table(csv.as_bytes(), &ingest::SchemaSource::Auto, &Default::default()).unwrap();
//! let cuts = discretize::build_cutpoints(&table, "+").unwrap();
//! let data = ingest::to_transactions(&table, &cuts, "+").unwrap();
//! let result = miner::mine(&data, &miner::MinerConfig::default());
//! let rendered: Vec<String> = result.patterns.iter().map(|c| report::render_pattern(&data, &c.pattern)).collect();
//! assert_eq!(rendered, ["{A<3.5}"]);
//! ```

pub mod discretize;
pub mod error;
pub mod fptree;
pub mod ingest;
pub mod lattice;
pub mod miner;
pub mod model;
pub mod oracle;
pub mod random;
pub mod relevance;
pub mod report;

pub use error::{Error, Result};
pub use miner::{mine, Candidate, MineResult, MinerConfig, RunStats};
pub use model::{ClassTotals, CountStats, Dataset, Item, Pattern};
pub use relevance::{Measure, Score};
