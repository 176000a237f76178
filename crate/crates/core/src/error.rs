use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty table")]
    EmptyTable,

    #[error("row {row}, column `{column}`: {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },

    #[error("unknown class column `{0}`")]
    UnknownClassColumn(String),

    #[error("unknown column `{0}` in schema")]
    UnknownColumn(String),

    #[error("invalid schema: {0}")]
    Schema(String),

    #[error("unknown class `{0}`")]
    UnknownClass(String),

    #[error("symbol `{symbol}` of attribute `{attribute}` was not seen when the dataset was built")]
    UnseenSymbol { attribute: String, symbol: String },

    #[error("invalid value: {0}")]
    InvalidValue(String),

    #[error("enumeration of {0} patterns exceeds the oracle cap")]
    OracleCap(u128),

    #[error("cannot parse pattern `{0}`")]
    PatternSyntax(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
