//! Console menu loop.
//!
//! All prompts go to the output stream and all answers come from the input
//! stream, one answer per line, so tests can script whole sessions. Login
//! gets three attempts; afterwards the loop shows the role-filtered menu,
//! runs the chosen activity, and asks whether to continue.

use std::io::{BufRead, Write};

use crate::app::{Rms, Session};
use crate::records::Role;

pub const LOGIN_ATTEMPTS: u32 = 3;

/// Run a full console session. Returns the process exit status: 0 for a
/// clean exit (logout, `n`, or end of input), 1 when login failed three
/// times.
pub fn run_menu_loop<R: BufRead, W: Write>(rms: &mut Rms, input: R, mut output: W) -> i32 {
    let mut lines = input.lines().map_while(Result::ok);

    let Some(session) = login(rms, &mut lines, &mut output) else {
        return 1;
    };

    loop {
        show_menu(&session, &mut output);
        let Some(choice) = ask(&mut lines, &mut output, "Choice: ") else {
            break;
        };
        match (session.role, choice.as_str()) {
            (_, "0") => break,
            (Role::Researcher, "1") => {
                let Some(detail) = ask(&mut lines, &mut output, "Order detail: ") else {
                    break;
                };
                let Some(amount) = ask(&mut lines, &mut output, "Amount: ") else {
                    break;
                };
                match amount.parse::<i64>() {
                    Ok(amount) => match rms.commit_order(&session, &detail, amount) {
                        Ok(balance) =>

                            say(&mut output, &format!("Order committed. New balance: {balance}")),
                        Err(e) => say(&mut output, &e.to_string()),
                    },
                    Err(_) => say(&mut output, "Invalid amount."),
                }
            }
            (Role::Researcher, "2") => match rms.check_balance(&session) {
                Ok(balance) => say(&mut output, &format!("Balance: {balance}")),
                Err(e) => say(&mut output, &e.to_string()),
            },
            (Role::Researcher, "3") => match rms.display_details(&session) {
                Ok(details) => {
                    let _ = output.write_all(details.as_bytes());
                }
                Err(e) => say(&mut output, &e.to_string()),
            },
            (Role::Admin, "1") => match rms.view_orders(&session) {
                Ok(listing) => {
                    let _ = output.write_all(listing.as_bytes());
                }
                Err(e) => say(&mut output, &e.to_string()),
            },
            _ => {
                say(&mut output, "Invalid choice.");
                continue; // back to the menu without the continue question
            }
        }
        if !another_activity(&mut lines, &mut output) {
            break;
        }
    }
    say(&mut output, "Goodbye.");
    0
}

fn login<W: Write>(
    rms: &Rms,
    lines: &mut impl Iterator<Item = String>,
    output: &mut W,
) -> Option<Session> {
    for attempt in 1..=LOGIN_ATTEMPTS {
        let voteno = ask(lines, output, "Vote number: ")?;
        let password = ask(lines, output, "Password: ")?;
        if let Some(session) = rms.authenticate(voteno.trim(), password.trim()) {
            say(
                output,
                &format!("Logged in as {} ({}).", session.record.name, session.role.label()),
            );
            return Some(session);
        }
        let left = LOGIN_ATTEMPTS - attempt;
        if left > 0 {
            say(output, &format!("Login failed ({left} attempts left)."));
        }
    }
    say(output, "Too many failed logins.");
    None
}

fn show_menu<W: Write>(session: &Session, output: &mut W) {
    say(output, "Menu:");
    match session.role {
        Role::Researcher => {
            say(output, "  1) Commit order");
            say(output, "  2) Check balance");
            say(output, "  3) Display details");
        }
        Role::Admin => {
            say(output, "  1) View orders");
        }
    }
    say(output, "  0) Logout");
}

/// The continue question. Anything but `y`/`n` re-asks; end of input stops.
fn another_activity<W: Write>(
    lines: &mut impl Iterator<Item = String>,
    output: &mut W,
) -> bool {
    loop {
        let Some(answer) = ask(lines, output, "Another activity? (y/n): ") else {
            return false;
        };
        match answer.trim() {
            "y" | "Y" => return true,
            "n" | "N" => return false,
            _ => {}
        }
    }
}

fn ask<W: Write>(
    lines: &mut impl Iterator<Item = String>,
    output: &mut W,
    prompt: &str,
) -> Option<String> {
    let _ = output.write_all(prompt.as_bytes());
    let _ = output.flush();
    lines.next().map(|l| l.trim().to_string())
}

fn say<W: Write>(output: &mut W, line: &str) {
    let _ = writeln!(output, "{line}");
}
