use std::fmt;

#[derive(Debug, thiserror::Error)]
pub enum RmsError {
    #[error("IO_NOT_FOUND: {path}")]
    IoNotFound { path: String },
    #[error("ROW_MALFORMED: row {row}: {reason}")]
    RowMalformed { row: usize, reason: String },
    #[error("FIELD_OVERFLOW: field `{field}` exceeds {max} characters{}", RowSuffix(*.row))]
    FieldOverflow {
        field: String,
        max: usize,
        row: Option<usize>,
    },
    #[error("AMOUNT_NONPOSITIVE: amount must be at least 1, got {0}")]
    AmountNonpositive(i64),
    #[error("INSUFFICIENT_BALANCE: amount {amount} exceeds balance {balance}")]
    InsufficientBalance { amount: i64, balance: i64 },
    #[error("ROLE_FORBIDDEN: a {role} may not {action}")]
    RoleForbidden {
        role: &'static str,
        action: &'static str,
    },
    #[error("IO_ERROR: {0}")]
    Io(#[from] std::io::Error),
    #[error("IO_ERROR: {0}")]
    Csv(#[from] csv::Error),
}

struct RowSuffix(Option<usize>);

impl fmt::Display for RowSuffix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(row) => write!(f, " (row {row})"),
            None => Ok(()),
        }
    }
}
