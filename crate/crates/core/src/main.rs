use clap::Parser;

use umlmap::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let mut out = std::io::stdout();
    let mut err = std::io::stderr();
    std::process::exit(run(&cli.command, &mut out, &mut err) as i32);
}
