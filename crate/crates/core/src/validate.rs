//! Model consistency checks.
//!
//! [`validate`] runs every rule and returns all findings sorted by
//! (file, line, code); an empty list means the model is consistent. Errors
//! block skeleton generation, warnings do not:
//!
//! - `TRACE_UNMAPPED_USECASE` / `TRACE_AMBIGUOUS_USECASE` (error) — every use
//!   case maps to exactly one operation.
//! - `INHERITANCE_CYCLE` (error) — inheritance edges must form a forest.
//! - `DANGLING_RELATION` (error) — relation endpoints must resolve (normally
//!   pre-empted by resolution, re-checked here for defense).
//! - `OBLIGATION_UNSATISFIED` (error) — a cross-class call obligation needs a
//!   `uses` relation from the caller class (or one of its ancestors) to the
//!   callee class.
//! - `PROTECTED_WITHOUT_SUBCLASS` (warning) — protected members serve
//!   subclasses; a class with protected members and no subclass has none.
//! - `DUPLICATE_MEMBER` (error) / `MEMBER_SHADOWS_INHERITED` (warning) —
//!   member names are unique within a class; an own member reusing an
//!   inherited accessible name hides it.
//! - `ACTOR_UNUSED` (warning) — every actor should link to a use case.

use std::collections::HashSet;
use std::fmt;

use crate::diag::{Code, Severity, SourceSpan};
use crate::model::{call_obligations, trace_matrix, Model, RelationKind, UseCaseLinkKind};
use crate::syntax::Visibility;

/// One validator finding. Renders exactly like a diagnostic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub code: Code,
    pub severity: Severity,
    /// Names of the entities the finding is about.
    pub subject: Vec<String>,
    pub message: String,
    pub span: SourceSpan,
}

impl Violation {
    fn error(code: Code, subject: Vec<String>, message: String, span: SourceSpan) -> Self {
        Violation {
            code,
            severity: Severity::Error,
            subject,
            message,
            span,
        }
    }

    fn warning(code: Code, subject: Vec<String>, message: String, span: SourceSpan) -> Self {
        Violation {
            code,
            severity: Severity::Warning,
            subject,
            message,
            span,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} {}: {}",
            self.span, self.severity, self.code, self.message
        )
    }
}

pub fn validate(model: &Model) -> Vec<Violation> {
    let mut findings = Vec::new();
    check_trace(model, &mut findings);
    check_inheritance_cycles(model, &mut findings);
    check_dangling_relations(model, &mut findings);
    check_obligations(model, &mut findings);
    check_protected_without_subclass(model, &mut findings);
    check_members(model, &mut findings);
    check_unused_actors(model, &mut findings);
    findings.sort_by(|a, b| {
        (&a.span.file, a.span.line, a.code.as_str(), a.span.column).cmp(&(
            &b.span.file,
            b.span.line,
            b.code.as_str(),
            b.span.column,
        ))
    });
    findings
}

fn check_trace(model: &Model, findings: &mut Vec<Violation>) {
    if let Err(diagnostics) = trace_matrix(model) {
        for d in diagnostics {
            findings.push(Violation::error(
                d.code,
                vec![first_backticked(&d.message)],
                d.message,
                d.span,
            ));
        }
    }
}

fn first_backticked(message: &str) -> String {
    let mut parts = message.split('`');
    parts.nth(1).unwrap_or_default().to_string()
}

/// Each node has at most one parent, so cyclic nodes form disjoint simple
/// cycles; report each cycle once, anchored at its first-declared member.
fn check_inheritance_cycles(model: &Model, findings: &mut Vec<Violation>) {
    let mut settled: HashSet<&str> = HashSet::new();
    for class in &model.classes {
        if settled.contains(class.name.as_str()) {
            continue;
        }
        let mut path: Vec<&str> = Vec::new();
        let mut current = class.name.as_str();
        loop {
            if settled.contains(current) {
                break;
            }
            if let Some(pos) = path.iter().position(|&p| p == current) {
                let cycle: Vec<String> = path[pos..].iter().map(|s| s.to_string()).collect();
                let anchor = model.class(current).expect("cycle member exists");
                let mut shown: Vec<&str> = path[pos..].to_vec();
                shown.push(current);
                findings.push(Violation::error(
                    Code::InheritanceCycle,
                    cycle,
                    format!("inheritance cycle: {}", shown.join(" -> ")),
                    anchor.span.clone(),
                ));
                break;
            }
            path.push(current);
            match model.class(current).and_then(|c| c.parent.as_deref()) {
                Some(parent) => current = parent,
                None => break,
            }
        }
        settled.extend(path);
    }
}

fn check_dangling_relations(model: &Model, findings: &mut Vec<Violation>) {
    let dangle = |findings: &mut Vec<Violation>, kind: &str, name: &str, span: &SourceSpan| {
        findings.push(Violation::error(
            Code::DanglingRelation,
            vec![name.to_string()],
            format!("relation endpoint `{name}` does not name a declared {kind}"),
            span.clone(),
        ));
    };
    for relation in &model.class_relations {
        for end in [&relation.source, &relation.target] {
            if model.class(end).is_none() {
                dangle(findings, "class", end, &relation.span);
            }
        }
    }
    for class in &model.classes {
        if let Some(parent) = &class.parent {
            if model.class(parent).is_none() {
                dangle(findings, "class", parent, &class.span);
            }
        }
    }
    for link in &model.usecase_links {
        match link.kind {
            UseCaseLinkKind::ActorAssociation => {
                if !model.actors.iter().any(|a| a.name == link.source) {
                    dangle(findings, "actor", &link.source, &link.span);
                }
                if !model.usecases.iter().any(|u| u.name == link.target) {
                    dangle(findings, "use case", &link.target, &link.span);
                }
            }
            UseCaseLinkKind::Extend => {
                for end in [&link.source, &link.target] {
                    if !model.usecases.iter().any(|u| u.name == *end) {
                        dangle(findings, "use case", end, &link.span);
                    }
                }
            }
        }
    }
}

/// Ancestors of `class`, cycle-tolerant (stops at the first repeat), self
/// included.
fn ancestors_inclusive<'a>(model: &'a Model, class: &'a str) -> Vec<&'a str> {
    let mut seen = Vec::new();
    let mut current = Some(class);
    while let Some(name) = current {
        if seen.contains(&name) {
            break;
        }
        seen.push(name);
        current = model.class(name).and_then(|c| c.parent.as_deref());
    }
    seen
}

fn check_obligations(model: &Model, findings: &mut Vec<Violation>) {
    // Obligations are defined only once every use case traces; trace failures
    // are already reported.
    let Ok(obligations) = call_obligations(model) else {
        return;
    };
    for (obligation, link) in obligations.iter().zip(model.extend_links()) {
        if obligation.caller_class == obligation.callee_class {
            continue; // same-class calls need no relation
        }
        let callers = ancestors_inclusive(model, &obligation.caller_class);
        let satisfied = model.class_relations.iter().any(|r| {
            r.kind == RelationKind::Uses
                && callers.contains(&r.source.as_str())
                && r.target == obligation.callee_class
        });
        if !satisfied {
            findings.push(Violation::error(
                Code::ObligationUnsatisfied,
                vec![
                    obligation.caller_class.clone(),
                    obligation.caller_op.clone(),
                    obligation.callee_class.clone(),
                    obligation.callee_op.clone(),
                ],
                format!(
                    "{}.{} must invoke {}.{} but class {} has no uses relation to {}",
                    obligation.caller_class,
                    obligation.caller_op,
                    obligation.callee_class,
                    obligation.callee_op,
                    obligation.caller_class,
                    obligation.callee_class
                ),
                link.span.clone(),
            ));
        }
    }
}

fn check_protected_without_subclass(model: &Model, findings: &mut Vec<Violation>) {
    for class in &model.classes {
        let has_protected = class
            .attributes
            .iter()
            .map(|a| a.visibility)
            .chain(class.operations.iter().map(|o| o.visibility))
            .any(|v| v == Visibility::Protected);
        if has_protected && !model.has_subclass(&class.name) {
            findings.push(Violation::warning(
                Code::ProtectedWithoutSubclass,
                vec![class.name.clone()],
                format!(
                    "class {} has protected members but no subclass uses them",
                    class.name
                ),
                class.span.clone(),
            ));
        }
    }
}

fn check_members(model: &Model, findings: &mut Vec<Violation>) {
    for class in &model.classes {
        // Members in declaration order: attributes, then operations.
        let members: Vec<(&str, &SourceSpan)> = class
            .attributes
            .iter()
            .map(|a| (a.name.as_str(), &a.span))
            .chain(class.operations.iter().map(|o| (o.name.as_str(), &o.span)))
            .collect();

        let mut seen: HashSet<&str> = HashSet::new();
        for (name, span) in &members {
            if !seen.insert(name) {
                findings.push(Violation::error(
                    Code::DuplicateMember,
                    vec![class.name.clone(), name.to_string()],
                    format!("class {} declares member `{name}` more than once", class.name),
                    (*span).clone(),
                ));
            }
        }

        // Inherited public/protected names this class's own members hide.
        let mut inherited: HashSet<&str> = HashSet::new();
        for ancestor in ancestors_inclusive(model, &class.name).into_iter().skip(1) {
            let node = model.class(ancestor).expect("ancestor exists");
            inherited.extend(
                node.attributes
                    .iter()
                    .filter(|a| a.visibility != Visibility::Private)
                    .map(|a| a.name.as_str()),
            );
            inherited.extend(
                node.operations
                    .iter()
                    .filter(|o| o.visibility != Visibility::Private)
                    .map(|o| o.name.as_str()),
            );
        }
        let mut warned: HashSet<&str> = HashSet::new();
        for (name, span) in &members {
            if inherited.contains(name) && warned.insert(name) {
                findings.push(Violation::warning(
                    Code::MemberShadowsInherited,
                    vec![class.name.clone(), name.to_string()],
                    format!(
                        "member `{name}` of class {} shadows an inherited member",
                        class.name
                    ),
                    (*span).clone(),
                ));
            }
        }
    }
}

fn check_unused_actors(model: &Model, findings: &mut Vec<Violation>) {
    for actor in &model.actors {
        let used = model.usecase_links.iter().any(|l| {
            l.kind == UseCaseLinkKind::ActorAssociation && l.source == actor.name
        });
        if !used {
            findings.push(Violation::warning(
                Code::ActorUnused,
                vec![actor.name.clone()],
                format!("actor {} is linked to no use case", actor.name),
                actor.span.clone(),
            ));
        }
    }
}
