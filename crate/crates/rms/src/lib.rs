#![forbid(unsafe_code)]

//! Research Management System.
//!
//! A console application over two flat files: researchers log in with their
//! vote number, commit orders against their vote balance, check the balance,
//! and display their details; an administrator views the recorded orders.
//! Committing an order always records it in the order file — the deduction
//! and the order row move together.

pub mod app;
pub mod error;
pub mod menu;
pub mod records;

pub use app::{Rms, Session};
pub use error::RmsError;
pub use menu::{run_menu_loop, LOGIN_ATTEMPTS};
pub use records::{OrderRecord, ResearcherRecord, Role};
