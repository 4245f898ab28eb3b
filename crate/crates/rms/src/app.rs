//! Core operations: login, order commit, balance check, details, order view.
//!
//! Role gates follow the actor links of the model: researchers commit
//! orders, check balances, and display their details; administrators view
//! the order file; both log in.

use std::path::{Path, PathBuf};

use crate::error::RmsError;
use crate::records::{
    append_order, load_orders, load_researchers, save_researchers, OrderRecord, ResearcherRecord,
    Role, ORDER_DETAIL_MAX,
};

/// An authenticated user: the record matched at login plus its role.
#[derive(Debug, Clone)]
pub struct Session {
    pub record: ResearcherRecord,
    pub role: Role,
}

/// The running system: loaded researcher records plus the two file paths.
#[derive(Debug)]
pub struct Rms {
    researchers_path: PathBuf,
    orders_path: PathBuf,
    records: Vec<ResearcherRecord>,
}

impl Rms {
    /// Read the researchers file; the orders file is touched lazily.
    pub fn load(researchers_path: &Path, orders_path: &Path) -> Result<Self, RmsError> {
        let records = load_researchers(researchers_path)?;
        Ok(Rms {
            researchers_path: researchers_path.to_path_buf(),
            orders_path: orders_path.to_path_buf(),
            records,
        })
    }

    pub fn records(&self) -> &[ResearcherRecord] {
        &self.records
    }

    /// Exact, case-sensitive match on vote number and password.
    pub fn authenticate(&self, voteno: &str, password: &str) -> Option<Session> {
        self.records
            .iter()
            .find(|r| r.voteno == voteno && r.password == password)
            .map(|record| Session {
                record: record.clone(),
                role: record.role,
            })
    }

    /// Deduct `amount` from the researcher's balance and record the order.
    ///
    /// The researchers file is rewritten first (temporary file + rename),
    /// then the order row is appended; a crash between the two steps loses
    /// the order row but never the money. Any rejected commit leaves both
    /// files untouched.
    pub fn commit_order(
        &mut self,
        session: &Session,
        detail: &str,
        amount: i64,
    ) -> Result<i64, RmsError> {
        require(session, Role::Researcher, "commit orders")?;
        if amount < 1 {
            return Err(RmsError::AmountNonpositive(amount));
        }
        if detail.chars().count() > ORDER_DETAIL_MAX {
            return Err(RmsError::FieldOverflow {
                field: "order_detail".into(),
                max: ORDER_DETAIL_MAX,
                row: None,
            });
        }
        let index = self.index_of(&session.record.voteno);
        let balance = self.records[index].balance;
        if amount > balance {
            return Err(RmsError::InsufficientBalance { amount, balance });
        }
        let new_balance = balance - amount;

        let mut updated = self.records.clone();
        updated[index].balance = new_balance;
        save_researchers(&self.researchers_path, &updated)?;
        self.records = updated;

        let record = &self.records[index];
        append_order(
            &self.orders_path,
            &OrderRecord {
                name: record.name.clone(),
                voteno: record.voteno.clone(),
                order_detail: detail.to_string(),
                amount,
            },
        )?;
        Ok(new_balance)
    }

    pub fn check_balance(&self, session: &Session) -> Result<i64, RmsError> {
        require(session, Role::Researcher, "check a vote balance")?;
        Ok(self.records[self.index_of(&session.record.voteno)].balance)
    }

    /// Labeled lines for name, vote number, allocation, and balance. The
    /// password is never rendered.
    pub fn display_details(&self, session: &Session) -> Result<String, RmsError> {
        require(session, Role::Researcher, "display details")?;
        let record = &self.records[self.index_of(&session.record.voteno)];
        Ok(format!(
            "Name: {}\nVote number: {}\nAllocation: {}\nBalance: {}\n",
            record.name, record.voteno, record.allocation, record.balance
        ))
    }

    /// All recorded orders in file order; a missing or empty file renders as
    /// `no orders`.
    pub fn view_orders(&self, session: &Session) -> Result<String, RmsError> {
        require(session, Role::Admin, "view the order file")?;
        let orders = load_orders(&self.orders_path)?;
        if orders.is_empty() {
            return Ok("no orders\n".to_string());
        }
        let mut out = String::new();
        for order in &orders {
            out.push_str(&format!(
                "{} | {} | {} | {}\n",
                order.name, order.voteno, order.order_detail, order.amount
            ));
        }
        Ok(out)
    }

    fn index_of(&self, voteno: &str) -> usize {
        self.records
            .iter()
            .position(|r| r.voteno == voteno)
            .expect("session refers to a loaded record")
    }
}

fn require(session: &Session, role: Role, action: &'static str) -> Result<(), RmsError> {
    if session.role == role {
        Ok(())
    } else {
        Err(RmsError::RoleForbidden {
            role: session.role.label(),
            action,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    fn fixture_app() -> (tempfile::TempDir, Rms) {
        let dir = tempfile::tempdir().unwrap();
        let researchers = dir.path().join("researchers.csv");
        fs::write(&researchers, include_str!("../fixtures/researchers.csv")).unwrap();
        let orders = dir.path().join("orders.csv");
        let rms = Rms::load(&researchers, &orders).unwrap();
        (dir, rms)
    }

    fn researcher(rms: &Rms) -> Session {
        rms.authenticate("S014001", "abc123").expect("fixture login")
    }

    fn admin(rms: &Rms) -> Session {
        rms.authenticate("ADMIN01", "secret").expect("fixture admin login")
    }

    #[test]
    fn fixture_credentials_authenticate_with_roles() {
        let (_dir, rms) = fixture_app();
        assert_eq!(researcher(&rms).role, Role::Researcher);
        assert_eq!(admin(&rms).role, Role::Admin);
        assert!(rms.authenticate("S014001", "wrong").is_none());
        assert!(rms.authenticate("NOBODY1", "abc123").is_none());
        // Case-sensitive comparison.
        assert!(rms.authenticate("S014001", "ABC123").is_none());
    }

    #[test]
    fn commit_deducts_and_appends_exactly_one_row() {
        let (dir, mut rms) = fixture_app();
        let session = researcher(&rms);
        let balance = rms.commit_order(&session, "printer toner", 300).unwrap();
        assert_eq!(balance, 700);
        assert_eq!(rms.check_balance(&session).unwrap(), 700);
        let orders =
            crate::records::load_orders(&dir.path().join("orders.csv")).unwrap();
        assert_eq!(orders.len(), 1);
        assert_eq!(orders[0].amount, 300);
        assert_eq!(orders[0].voteno, "S014001");
        // The new balance is persisted, not just in memory.
        let saved =
            crate::records::load_researchers(&dir.path().join("researchers.csv")).unwrap();
        assert_eq!(saved[0].balance, 700);
    }

    #[test]
    fn nonpositive_amount_is_rejected_without_state_change() {
        let (dir, mut rms) = fixture_app();
        let before = fs::read(dir.path().join("researchers.csv")).unwrap();
        let session = researcher(&rms);
        let err = rms.commit_order(&session, "toner", 0).unwrap_err();
        assert!(matches!(err, RmsError::AmountNonpositive(0)));
        assert_eq!(fs::read(dir.path().join("researchers.csv")).unwrap(), before);
        assert!(!dir.path().join("orders.csv").exists());
    }

    #[test]
    fn insufficient_balance_is_rejected_without_state_change() {
        let (dir, mut rms) = fixture_app();
        let session = researcher(&rms);
        rms.commit_order(&session, "first", 900).unwrap();
        let before = fs::read(dir.path().join("researchers.csv")).unwrap();
        let err = rms.commit_order(&session, "second", 300).unwrap_err();
        assert!(matches!(
            err,
            RmsError::InsufficientBalance {
                amount: 300,
                balance: 100
            }
        ));
        assert_eq!(fs::read(dir.path().join("researchers.csv")).unwrap(), before);
        assert_eq!(
            crate::records::load_orders(&dir.path().join("orders.csv"))
                .unwrap()
                .len(),
            1
        );
    }

    #[test]
    fn overlong_detail_is_rejected() {
        let (_dir, mut rms) = fixture_app();
        let session = researcher(&rms);
        let err = rms
            .commit_order(&session, &"x".repeat(ORDER_DETAIL_MAX + 1), 10)
            .unwrap_err();
        assert!(matches!(err, RmsError::FieldOverflow { .. }));
    }

    #[test]
    fn role_gates_match_the_actor_links() {
        let (_dir, mut rms) = fixture_app();
        let res = researcher(&rms);
        let adm = admin(&rms);
        assert!(matches!(
            rms.check_balance(&adm),
            Err(RmsError::RoleForbidden { .. })
        ));
        assert!(matches!(
            rms.display_details(&adm),
            Err(RmsError::RoleForbidden { .. })
        ));
        assert!(matches!(
            rms.commit_order(&adm, "x", 1),
            Err(RmsError::RoleForbidden { .. })
        ));
        assert!(matches!(
            rms.view_orders(&res),
            Err(RmsError::RoleForbidden { .. })
        ));
    }

    #[test]
    fn details_show_all_four_fields_and_never_the_password() {
        let (_dir, mut rms) = fixture_app();
        let session = researcher(&rms);
        let details = rms.display_details(&session).unwrap();
        assert_eq!(details.lines().count(), 4);
        assert!(details.contains("Name: Alice Tan"));
        assert!(details.contains("Vote number: S014001"));
        assert!(details.contains("Allocation: 1000"));
        assert!(details.contains("Balance: 1000"));
        assert!(!details.contains("abc123"));
        // Untouched account shows equal allocation and balance; after a
        // commit the balance line follows the live record.
        rms.commit_order(&session, "toner", 300).unwrap();
        let details = rms.display_details(&session).unwrap();
        assert!(details.contains("Balance: 700"));
        assert!(details.contains("Allocation: 1000"));
    }

    #[test]
    fn view_orders_renders_rows_or_the_empty_marker() {
        let (_dir, mut rms) = fixture_app();
        let adm = admin(&rms);
        assert_eq!(rms.view_orders(&adm).unwrap(), "no orders\n");
        let res = researcher(&rms);
        rms.commit_order(&res, "printer toner", 300).unwrap();
        let listing = rms.view_orders(&adm).unwrap();
        assert_eq!(listing.lines().count(), 1);
        assert!(listing.contains("printer toner"));
        assert!(listing.contains("300"));
    }

    #[test]
    fn failed_order_append_still_preserves_the_balance_write() {
        // Fault injection at the seam between the two writes: make the
        // orders path unwritable by pointing it at a directory.
        let dir = tempfile::tempdir().unwrap();
        let researchers = dir.path().join("researchers.csv");
        fs::write(&researchers, include_str!("../fixtures/researchers.csv")).unwrap();
        let orders = dir.path().join("orders.csv");
        fs::create_dir(&orders).unwrap();
        let mut rms = Rms::load(&researchers, &orders).unwrap();
        let session = rms.authenticate("S014001", "abc123").unwrap();
        let err = rms.commit_order(&session, "toner", 300).unwrap_err();
        assert!(matches!(err, RmsError::Io(_) | RmsError::Csv(_)), "{err}");
        // Money was deducted and persisted; the order row is lost.
        let saved = crate::records::load_researchers(&researchers).unwrap();
        assert_eq!(saved[0].balance, 700);
    }
}
