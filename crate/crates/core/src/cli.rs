//! Command-line driver: `parse`, `validate`, `trace`, and `generate`.
//!
//! Exit codes are part of the contract:
//!
//! - 0 — success (for `validate`, warnings still exit 0)
//! - 1 — validation errors
//! - 2 — parse or resolution failure (diagnostics on stderr)
//! - 3 — input/output failure

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::codegen::{emit_canonical, emit_unit, map_model, EmitOptions};
use crate::diag::{Code, Diagnostic, Severity, SourceSpan};
use crate::model::{resolve, trace_matrix, Model};
use crate::parser::parse_document;
use crate::printer::print_canonical;
use crate::validate::validate;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VALIDATION: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_IO: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "umlmap",
    about = "Parse textual UML models, check their consistency, and generate code skeletons"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a .uml document and print its canonical form
    Parse { input: PathBuf },
    /// Run the consistency checks and print all findings
    Validate { input: PathBuf },
    /// Print the use-case -> operation traceability matrix
    Trace {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Write one .skel file per class plus a combined one
    Generate {
        input: PathBuf,
        /// Directory for the generated .skel files
        #[arg(short = 'o', long = "output-dir")]
        output_dir: PathBuf,
        /// Add Set/Get operations for attributes that lack them
        #[arg(long)]
        synthesize_accessors: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Run a command against the given output streams and return the exit code.
pub fn run(command: &Command, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    match command {
        Command::Parse { input } => cmd_parse(input, out, err),
        Command::Validate { input } => cmd_validate(input, out, err),
        Command::Trace { input, format } => cmd_trace(input, *format, out, err),
        Command::Generate {
            input,
            output_dir,
            synthesize_accessors,
        } => cmd_generate(input, output_dir, *synthesize_accessors, out, err),
    }
}

fn cmd_parse(input: &Path, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let text = match read_input(input, err) {
        Ok(text) => text,
        Err(code) => return code,
    };
    match parse_document(&input.display().to_string(), &text) {
        Ok(tree) => {
            let _ = out.write_all(print_canonical(&tree).as_bytes());
            EXIT_OK
        }
        Err(diagnostics) => {
            report(&diagnostics, err);
            EXIT_PARSE
        }
    }
}

fn cmd_validate(input: &Path, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let model = match load_model(input, err) {
        Ok(model) => model,
        Err(code) => return code,
    };
    let findings = validate(&model);
    for finding in &findings {
        let _ = writeln!(out, "{finding}");
    }
    if findings.iter().any(|f| f.severity == Severity::Error) {
        EXIT_VALIDATION
    } else {
        EXIT_OK
    }
}

fn cmd_trace(input: &Path, format: Format, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let model = match load_model(input, err) {
        Ok(model) => model,
        Err(code) => return code,
    };
    match trace_matrix(&model) {
        Ok(entries) => {
            match format {
                Format::Text => {
                    let usecase_width =
                        entries.iter().map(|e| e.usecase.len()).max().unwrap_or(0);
                    let class_width = entries.iter().map(|e| e.class.len()).max().unwrap_or(0);
                    for entry in &entries {
                        let _ = writeln!(
                            out,
                            "{:<usecase_width$}  {:<class_width$}  {}",
                            entry.usecase, entry.class, entry.operation
                        );
                    }
                }
                Format::Json => {
                    for entry in &entries {
                        let line = serde_json::to_string(entry).expect("trace entry serializes");
                        let _ = writeln!(out, "{line}");
                    }
                }
            }
            EXIT_OK
        }
        Err(diagnostics) => {
            report(&diagnostics, err);
            EXIT_VALIDATION
        }
    }
}

fn cmd_generate(
    input: &Path,
    output_dir: &Path,
    synthesize_accessors: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> u8 {
    let model = match load_model(input, err) {
        Ok(model) => model,
        Err(code) => return code,
    };
    let findings = validate(&model);
    if findings.iter().any(|f| f.severity == Severity::Error) {
        for finding in &findings {
            let _ = writeln!(err, "{finding}");
        }
        return EXIT_VALIDATION;
    }
    let opts = EmitOptions {
        synthesize_accessors,
        ..EmitOptions::default()
    };
    let doc = map_model(&model, &opts).expect("model validated");

    if let Err(e) = fs::create_dir_all(output_dir) {
        return io_failure(output_dir, &e, err);
    }
    let mut written = Vec::new();
    for unit in &doc.units {
        let path = output_dir.join(format!("{}.skel", unit.name.to_lowercase()));
        if let Err(e) = fs::write(&path, emit_unit(unit)) {
            return io_failure(&path, &e, err);
        }
        written.push(path);
    }
    let stem = input
        .file_stem()
        .map(|s| s.to_string_lossy().to_lowercase())
        .unwrap_or_else(|| "model".to_string());
    let combined = output_dir.join(format!("{stem}.skel"));
    if let Err(e) = fs::write(&combined, emit_canonical(&doc)) {
        return io_failure(&combined, &e, err);
    }
    written.push(combined);
    for path in &written {
        let _ = writeln!(out, "wrote {}", path.display());
    }
    EXIT_OK
}

fn load_model(input: &Path, err: &mut dyn Write) -> Result<Model, u8> {
    let text = read_input(input, err).map_err(|code| code)?;
    let tree = parse_document(&input.display().to_string(), &text).map_err(|diagnostics| {
        report(&diagnostics, err);
        EXIT_PARSE
    })?;
    resolve(&tree).map_err(|diagnostics| {
        report(&diagnostics, err);
        EXIT_PARSE
    })
}

fn read_input(input: &Path, err: &mut dyn Write) -> Result<String, u8> {
    fs::read_to_string(input).map_err(|e| io_failure(input, &e, err))
}

fn io_failure(path: &Path, cause: &std::io::Error, err: &mut dyn Write) -> u8 {
    let diagnostic = Diagnostic::error(
        Code::IoError,
        format!("{}: {cause}", path.display()),
        SourceSpan::new(path.display().to_string(), 1, 1, 0),
    );
    let _ = writeln!(err, "{diagnostic}");
    EXIT_IO
}

fn report(diagnostics: &[Diagnostic], err: &mut dyn Write) {
    for diagnostic in diagnostics {
        let _ = writeln!(err, "{diagnostic}");
    }
}
