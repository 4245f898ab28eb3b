//! Flat-file records and their persistence.
//!
//! Two CSV files back the system:
//!
//! - researchers: header `name,voteno,allocation,balance,password,role`,
//!   role `R` (researcher) or `A` (admin); rewritten atomically via a
//!   temporary file and rename.
//! - orders: header `name,voteno,order_detail,amount`, append-only.
//!
//! Text fields have fixed capacities (one slot of the stored capacity is
//! reserved for a terminator, so usable lengths are one less). A file with
//! any malformed row is rejected as a whole.

use std::fs::{self, OpenOptions};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::RmsError;

/// Usable characters per field (stored capacity minus the terminator slot).
pub const RESEARCHER_NAME_MAX: usize = 19;
pub const VOTENO_MAX: usize = 7;
pub const PASSWORD_MAX: usize = 6;
pub const ORDER_NAME_MAX: usize = 24;
pub const ORDER_DETAIL_MAX: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Role {
    #[serde(rename = "R")]
    Researcher,
    #[serde(rename = "A")]
    Admin,
}

impl Role {
    pub fn label(self) -> &'static str {
        match self {
            Role::Researcher => "researcher",
            Role::Admin => "admin",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResearcherRecord {
    pub name: String,
    pub voteno: String,
    pub allocation: i64,
    pub balance: i64,
    pub password: String,
    pub role: Role,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderRecord {
    pub name: String,
    pub voteno: String,
    pub order_detail: String,
    pub amount: i64,
}

fn overflow(row: usize, field: &'static str, max: usize) -> RmsError {
    RmsError::FieldOverflow {
        field: field.to_string(),
        max,
        row: Some(row),
    }
}

fn check_researcher(record: &ResearcherRecord, row: usize) -> Result<(), RmsError> {
    if record.name.chars().count() > RESEARCHER_NAME_MAX {
        return Err(overflow(row, "name", RESEARCHER_NAME_MAX));
    }
    if record.voteno.chars().count() > VOTENO_MAX {
        return Err(overflow(row, "voteno", VOTENO_MAX));
    }
    if record.password.chars().count() > PASSWORD_MAX {
        return Err(overflow(row, "password", PASSWORD_MAX));
    }
    if record.allocation < 0 {
        return Err(RmsError::RowMalformed {
            row,
            reason: "allocation is negative".into(),
        });
    }
    if record.balance < 0 || record.balance > record.allocation {
        return Err(RmsError::RowMalformed {
            row,
            reason: format!(
                "balance {} outside 0..={}",
                record.balance, record.allocation
            ),
        });
    }
    Ok(())
}

fn check_order(record: &OrderRecord, row: usize) -> Result<(), RmsError> {
    if record.name.chars().count() > ORDER_NAME_MAX {
        return Err(overflow(row, "name", ORDER_NAME_MAX));
    }
    if record.voteno.chars().count() > VOTENO_MAX {
        return Err(overflow(row, "voteno", VOTENO_MAX));
    }
    if record.order_detail.chars().count() > ORDER_DETAIL_MAX {
        return Err(overflow(row, "order_detail", ORDER_DETAIL_MAX));
    }
    if record.amount < 1 {
        return Err(RmsError::RowMalformed {
            row,
            reason: format!("amount {} is not positive", record.amount),
        });
    }
    Ok(())
}

pub fn load_researchers(path: &Path) -> Result<Vec<ResearcherRecord>, RmsError> {
    let file = open_required(path)?;
    let mut reader = csv::Reader::from_reader(file);
    let mut records = Vec::new();
    for (i, row) in reader.deserialize::<ResearcherRecord>().enumerate() {
        let row_no = i + 1;
        let record = row.map_err(|e| RmsError::RowMalformed {
            row: row_no,
            reason: trim_csv_error(&e),
        })?;
        check_researcher(&record, row_no)?;
        records.push(record);
    }
    Ok(records)
}

/// Rewrite the researchers file: write a temporary sibling, then rename over
/// the original so readers never observe a half-written file.
pub fn save_researchers(path: &Path, records: &[ResearcherRecord]) -> Result<(), RmsError> {
    let tmp = path.with_extension("tmp");
    {
        let mut writer = csv::Writer::from_path(&tmp)?;
        for record in records {
            writer.serialize(record)?;
        }
        writer.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Missing file means no orders yet.
pub fn load_orders(path: &Path) -> Result<Vec<OrderRecord>, RmsError> {
    let file = match fs::File::open(path) {
        Ok(file) => file,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(e.into()),
    };
    let mut reader = csv::Reader::from_reader(file);
    let mut records = Vec::new();
    for (i, row) in reader.deserialize::<OrderRecord>().enumerate() {
        let row_no = i + 1;
        let record = row.map_err(|e| RmsError::RowMalformed {
            row: row_no,
            reason: trim_csv_error(&e),
        })?;
        check_order(&record, row_no)?;
        records.push(record);
    }
    Ok(records)
}

pub fn append_order(path: &Path, order: &OrderRecord) -> Result<(), RmsError> {
    let needs_header = match fs::metadata(path) {
        Ok(meta) => meta.len() == 0,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => true,
        Err(e) => return Err(e.into()),
    };
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(file);
    if needs_header {
        writer.write_record(["name", "voteno", "order_detail", "amount"])?;
    }
    writer.serialize(order)?;
    writer.flush()?;
    Ok(())
}

fn open_required(path: &Path) -> Result<fs::File, RmsError> {
    match fs::File::open(path) {
        Ok(file) => Ok(file),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Err(RmsError::IoNotFound {
            path: path.display().to_string(),
        }),
        Err(e) => Err(e.into()),
    }
}

/// csv errors embed byte positions that add noise to row-scoped messages.
fn trim_csv_error(e: &csv::Error) -> String {
    match e.kind() {
        csv::ErrorKind::Deserialize { err, .. } => err.to_string(),
        _ => e.to_string(),
    }
}
