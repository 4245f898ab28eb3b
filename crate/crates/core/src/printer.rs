//! Canonical pretty-printer for syntax trees.
//!
//! Output is deterministic: 2-space indentation, one declaration per line,
//! declarations in original order (grouped by kind within a diagram), single
//! spacing, `\n` line ends. Comments from the original source are not part
//! of the tree and therefore do not survive printing.

use std::fmt::Write;

use crate::syntax::{ClassDiagramDecl, RawClass, RawType, SyntaxTree, UseCaseDiagramDecl};

const INDENT: &str = "  ";

pub fn print_canonical(tree: &SyntaxTree) -> String {
    let mut out = String::new();
    for diagram in &tree.usecase_diagrams {
        print_usecase_diagram(&mut out, diagram);
    }
    for diagram in &tree.class_diagrams {
        print_class_diagram(&mut out, diagram);
    }
    out
}

fn print_usecase_diagram(out: &mut String, diagram: &UseCaseDiagramDecl) {
    let _ = writeln!(out, "usecase-diagram {} {{", diagram.name.text);
    for actor in &diagram.actors {
        let _ = writeln!(out, "{INDENT}actor {};", actor.text);
    }
    for usecase in &diagram.usecases {
        let _ = writeln!(out, "{INDENT}usecase {};", usecase.text);
    }
    for link in &diagram.actor_links {
        let _ = writeln!(out, "{INDENT}{} -> {};", link.actor.text, link.usecase.text);
    }
    for link in &diagram.extend_links {
        let _ = writeln!(
            out,
            "{INDENT}{} extends {};",
            link.source.text, link.target.text
        );
    }
    out.push_str("}\n");
}

fn print_class_diagram(out: &mut String, diagram: &ClassDiagramDecl) {
    let _ = writeln!(out, "classdiagram {} {{", diagram.name.text);
    for class in &diagram.classes {
        print_class(out, class);
    }
    for link in &diagram.uses {
        let _ = writeln!(out, "{INDENT}{} uses {};", link.source.text, link.target.text);
    }
    out.push_str("}\n");
}

fn print_class(out: &mut String, class: &RawClass) {
    match &class.parent {
        Some(parent) => {
            let _ = writeln!(out, "{INDENT}class {} : {} {{", class.name.text, parent.text);
        }
        None => {
            let _ = writeln!(out, "{INDENT}class {} {{", class.name.text);
        }
    }
    for attr in &class.attributes {
        let _ = write!(
            out,
            "{INDENT}{INDENT}{} {}: ",
            attr.visibility.marker(),
            attr.name.text
        );
        print_type(out, &attr.ty, 2);
        out.push_str(";\n");
    }
    for op in &class.operations {
        let _ = write!(
            out,
            "{INDENT}{INDENT}{} {}(",
            op.visibility.marker(),
            op.name.text
        );
        for (i, param) in op.params.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            let _ = write!(out, "{}: ", param.name.text);
            print_type(out, &param.ty, 2);
        }
        out.push(')');
        if let Some(ret) = &op.return_type {
            out.push_str(": ");
            print_type(out, ret, 2);
        }
        out.push_str(";\n");
    }
    let _ = writeln!(out, "{INDENT}}}");
}

/// `indent` is the nesting level of the line the type starts on; record
/// fields are printed one level deeper.
fn print_type(out: &mut String, ty: &RawType, indent: usize) {
    match ty {
        RawType::Int => out.push_str("int"),
        RawType::Char => out.push_str("char"),
        RawType::FixedString { capacity, .. } => {
            let _ = write!(out, "string[{capacity}]");
        }
        RawType::Record { name, fields, .. } => {
            let _ = writeln!(out, "record {} {{", name.text);
            for field in fields {
                let _ = write!(out, "{}{}: ", INDENT.repeat(indent + 1), field.name.text);
                print_type(out, &field.ty, indent + 1);
                out.push_str(";\n");
            }
            let _ = write!(out, "{}}}", INDENT.repeat(indent));
        }
    }
}
