use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The normal approximation to the binomial test is undefined when the
    /// observed frequency is exactly 0 or 1.
    #[error("degenerate observed frequency {p_o}: normal approximation undefined")]
    DegenerateFrequency { p_o: f64 },

    #[error("degenerate series: {0}")]
    DegenerateSeries(String),

    #[error("schema error{}: {message}", fmt_row(*.row))]
    Schema { row: Option<usize>, message: String },

    #[error("dates out of order at row {row}: {message}")]
    Order { row: usize, message: String },

    #[error("rejected row {row}: {message}")]
    RejectedRow { row: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn fmt_row(row: Option<usize>) -> String {
    match row {
        Some(r) => format!(" at row {r}"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
