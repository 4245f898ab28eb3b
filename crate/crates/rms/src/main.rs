use std::io::{stdin, stdout};
use std::path::PathBuf;

use clap::Parser;

use rms::{run_menu_loop, Rms};

#[derive(Parser)]
#[command(
    name = "rms",
    about = "Research Management System console: login, commit orders, check balances, view orders"
)]
struct Cli {
    /// CSV file with researcher records
    researchers: PathBuf,
    /// CSV file the committed orders are appended to
    orders: PathBuf,
}

fn main() {
    let cli = Cli::parse();
    let mut app = match Rms::load(&cli.researchers, &cli.orders) {
        Ok(app) => app,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(3);
        }
    };
    let status = run_menu_loop(&mut app, stdin().lock(), stdout());
    std::process::exit(status);
}
