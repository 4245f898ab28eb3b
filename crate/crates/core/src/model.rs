//! Resolved semantic model and its queries.
//!
//! [`resolve`] turns a raw [`SyntaxTree`] into a [`Model`] in which every
//! name is checked: duplicates and dangling references become diagnostics and
//! no model is returned. A returned model is immutable and all queries on it
//! are pure.

use serde::Serialize;

use crate::diag::{Code, Diagnostic, SourceSpan};
use crate::syntax::{RawType, SyntaxTree, Visibility};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    pub actors: Vec<ActorDef>,
    pub usecases: Vec<UseCaseDef>,
    pub usecase_links: Vec<UseCaseLink>,
    pub classes: Vec<ClassNode>,
    pub class_relations: Vec<ClassRelation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActorDef {
    pub name: String,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UseCaseDef {
    pub name: String,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UseCaseLinkKind {
    /// `Actor -> UseCase;`
    ActorAssociation,
    /// `Extension extends Base;` — the realization of `source` must invoke
    /// the realization of `target`.
    Extend,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UseCaseLink {
    pub kind: UseCaseLinkKind,
    pub source: String,
    pub target: String,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassNode {
    pub name: String,
    pub parent: Option<String>,
    pub attributes: Vec<AttributeDef>,
    pub operations: Vec<OperationDef>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeDef {
    pub name: String,
    pub visibility: Visibility,
    pub ty: TypeRef,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperationDef {
    pub name: String,
    pub visibility: Visibility,
    pub params: Vec<(String, TypeRef)>,
    pub return_type: Option<TypeRef>,
    pub is_constructor: bool,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeRef {
    Int,
    Char,
    FixedString { capacity: u32 },
    Record { name: String, fields: Vec<AttributeDef> },
}

impl TypeRef {
    /// Scalars and fixed strings get accessors; records do not.
    pub fn is_accessor_eligible(&self) -> bool {
        !matches!(self, TypeRef::Record { .. })
    }

    pub fn render(&self) -> String {
        match self {
            TypeRef::Int => "int".into(),
            TypeRef::Char => "char".into(),
            TypeRef::FixedString { capacity } => format!("string[{capacity}]"),
            TypeRef::Record { name, .. } => format!("record {name}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationKind {
    Inheritance,
    Uses,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassRelation {
    pub kind: RelationKind,
    pub source: String,
    pub target: String,
    pub span: SourceSpan,
}

/// One row of the use-case → operation traceability matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub usecase: String,
    pub class: String,
    pub operation: String,
}

/// Structural requirement derived from an extend link: the caller operation
/// must be able to invoke the callee operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CallObligation {
    pub caller_class: String,
    pub caller_op: String,
    pub callee_class: String,
    pub callee_op: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("UNKNOWN_CLASS: no class named `{0}`")]
    UnknownClass(String),
    #[error("CYCLE_DETECTED: inheritance cycle reachable from class `{0}`")]
    CycleDetected(String),
}

/// How an attribute reached a class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttributeAccess {
    Own,
    /// Inherited and visible to the subclass (protected or public origin).
    InheritedAccessible,
    /// Inherited storage that the subclass cannot touch (private origin).
    InheritedHidden,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EffectiveAttribute<'a> {
    pub attribute: &'a AttributeDef,
    pub origin_class: &'a str,
    pub access: AttributeAccess,
}

// ---------------------------------------------------------------------------
// Resolution
// ---------------------------------------------------------------------------

pub fn resolve(tree: &SyntaxTree) -> Result<Model, Vec<Diagnostic>> {
    let mut diagnostics = Vec::new();
    let mut model = Model {
        actors: Vec::new(),
        usecases: Vec::new(),
        usecase_links: Vec::new(),
        classes: Vec::new(),
        class_relations: Vec::new(),
    };

    // Declarations first, so links can refer forward.
    for diagram in &tree.usecase_diagrams {
        for actor in &diagram.actors {
            if model.actors.iter().any(|a| a.name == actor.text) {
                duplicate(&mut diagnostics, "actor", &actor.text, &actor.span);
            } else {
                model.actors.push(ActorDef {
                    name: actor.text.clone(),
                    span: actor.span.clone(),
                });
            }
        }
        for usecase in &diagram.usecases {
            if model.usecases.iter().any(|u| u.name == usecase.text) {
                duplicate(&mut diagnostics, "use case", &usecase.text, &usecase.span);
            } else {
                model.usecases.push(UseCaseDef {
                    name: usecase.text.clone(),
                    span: usecase.span.clone(),
                });
            }
        }
    }
    for diagram in &tree.class_diagrams {
        for class in &diagram.classes {
            if model.classes.iter().any(|c| c.name == class.name.text) {
                duplicate(&mut diagnostics, "class", &class.name.text, &class.name.span);
                continue;
            }
            let mut node = ClassNode {
                name: class.name.text.clone(),
                parent: class.parent.as_ref().map(|p| p.text.clone()),
                attributes: Vec::new(),
                operations: Vec::new(),
                span: class.name.span.clone(),
            };
            for attr in &class.attributes {
                node.attributes.push(AttributeDef {
                    name: attr.name.text.clone(),
                    visibility: attr.visibility,
                    ty: lower_type(&attr.ty, &mut diagnostics),
                    span: attr.name.span.clone(),
                });
            }
            for op in &class.operations {
                let is_constructor = op.name.text == node.name && op.return_type.is_none();
                node.operations.push(OperationDef {
                    name: op.name.text.clone(),
                    visibility: op.visibility,
                    params: op
                        .params
                        .iter()
                        .map(|p| (p.name.text.clone(), lower_type(&p.ty, &mut diagnostics)))
                        .collect(),
                    return_type: op
                        .return_type
                        .as_ref()
                        .map(|t| lower_type(t, &mut diagnostics)),
                    is_constructor,
                    span: op.name.span.clone(),
                });
            }
            model.classes.push(node);
        }
    }

    // Links and relations against the declared names.
    for diagram in &tree.usecase_diagrams {
        for link in &diagram.actor_links {
            let mut ok = true;
            if !model.actors.iter().any(|a| a.name == link.actor.text) {
                unknown(&mut diagnostics, "actor", &link.actor.text, &link.actor.span);
                ok = false;
            }
            if !model.usecases.iter().any(|u| u.name == link.usecase.text) {
                unknown(
                    &mut diagnostics,
                    "use case",
                    &link.usecase.text,
                    &link.usecase.span,
                );
                ok = false;
            }
            if ok {
                model.usecase_links.push(UseCaseLink {
                    kind: UseCaseLinkKind::ActorAssociation,
                    source: link.actor.text.clone(),
                    target: link.usecase.text.clone(),
                    span: link.span.clone(),
                });
            }
        }
        for link in &diagram.extend_links {
            let mut ok = true;
            for end in [&link.source, &link.target] {
                if !model.usecases.iter().any(|u| u.name == end.text) {
                    unknown(&mut diagnostics, "use case", &end.text, &end.span);
                    ok = false;
                }
            }
            if ok && link.source.text == link.target.text {
                diagnostics.push(Diagnostic::error(
                    Code::ResolveSelfExtend,
                    format!("use case `{}` cannot extend itself", link.source.text),
                    link.span.clone(),
                ));
                ok = false;
            }
            if ok {
                model.usecase_links.push(UseCaseLink {
                    kind: UseCaseLinkKind::Extend,
                    source: link.source.text.clone(),
                    target: link.target.text.clone(),
                    span: link.span.clone(),
                });
            }
        }
    }
    for diagram in &tree.class_diagrams {
        for class in &diagram.classes {
            if let Some(parent) = &class.parent {
                if !model.classes.iter().any(|c| c.name == parent.text) {
                    unknown(&mut diagnostics, "class", &parent.text, &parent.span);
                    // Drop the dangling parent so a partially resolved model
                    // is never returned with it.
                    if let Some(node) =
                        model.classes.iter_mut().find(|c| c.name == class.name.text)
                    {
                        node.parent = None;
                    }
                } else {
                    model.class_relations.push(ClassRelation {
                        kind: RelationKind::Inheritance,
                        source: class.name.text.clone(),
                        target: parent.text.clone(),
                        span: parent.span.clone(),
                    });
                }
            }
        }
        for link in &diagram.uses {
            let mut ok = true;
            for end in [&link.source, &link.target] {
                if !model.classes.iter().any(|c| c.name == end.text) {
                    unknown(&mut diagnostics, "class", &end.text, &end.span);
                    ok = false;
                }
            }
            if ok {
                model.class_relations.push(ClassRelation {
                    kind: RelationKind::Uses,
                    source: link.source.text.clone(),
                    target: link.target.text.clone(),
                    span: link.span.clone(),
                });
            }
        }
    }

    if diagnostics.is_empty() {
        Ok(model)
    } else {
        Err(diagnostics)
    }
}

fn lower_type(raw: &RawType, diagnostics: &mut Vec<Diagnostic>) -> TypeRef {
    match raw {
        RawType::Int => TypeRef::Int,
        RawType::Char => TypeRef::Char,
        RawType::FixedString { capacity, .. } => TypeRef::FixedString {
            capacity: *capacity,
        },
        RawType::Record { name, fields, .. } => {
            let mut lowered: Vec<AttributeDef> = Vec::new();
            for field in fields {
                if lowered.iter().any(|f| f.name == field.name.text) {
                    duplicate(diagnostics, "record field", &field.name.text, &field.span);
                    continue;
                }
                lowered.push(AttributeDef {
                    name: field.name.text.clone(),
                    // Record fields carry no marker in source; they are plain
                    // data slots of the grouped attribute.
                    visibility: Visibility::Public,
                    ty: lower_type(&field.ty, diagnostics),
                    span: field.span.clone(),
                });
            }
            TypeRef::Record {
                name: name.text.clone(),
                fields: lowered,
            }
        }
    }
}

fn duplicate(diagnostics: &mut Vec<Diagnostic>, kind: &str, name: &str, span: &SourceSpan) {
    diagnostics.push(Diagnostic::error(
        Code::ResolveDuplicateName,
        format!("duplicate {kind} name `{name}`"),
        span.clone(),
    ));
}

fn unknown(diagnostics: &mut Vec<Diagnostic>, kind: &str, name: &str, span: &SourceSpan) {
    diagnostics.push(Diagnostic::error(
        Code::ResolveUnknownName,
        format!("unknown {kind} `{name}`"),
        span.clone(),
    ));
}

// ---------------------------------------------------------------------------
// Queries
// ---------------------------------------------------------------------------

impl Model {
    pub fn class(&self, name: &str) -> Option<&ClassNode> {
        self.classes.iter().find(|c| c.name == name)
    }

    /// Extend links in declaration order.
    pub fn extend_links(&self) -> impl Iterator<Item = &UseCaseLink> {
        self.usecase_links
            .iter()
            .filter(|l| l.kind == UseCaseLinkKind::Extend)
    }

    /// True when some class names `name` as its direct parent.
    pub fn has_subclass(&self, name: &str) -> bool {
        self.classes.iter().any(|c| c.parent.as_deref() == Some(name))
    }

    /// True when `name` appears on either side of an inheritance relation.
    pub fn participates_in_inheritance(&self, name: &str) -> bool {
        self.class_relations
            .iter()
            .any(|r| r.kind == RelationKind::Inheritance && (r.source == name || r.target == name))
    }
}

/// `[class, parent, grandparent, ...]`, root last.
pub fn inheritance_chain<'a>(model: &'a Model, class: &str) -> Result<Vec<&'a str>, ModelError> {
    let mut current = model
        .class(class)
        .ok_or_else(|| ModelError::UnknownClass(class.to_string()))?;
    let mut chain: Vec<&str> = vec![&current.name];
    while let Some(parent) = current.parent.as_deref() {
        if chain.contains(&parent) {
            return Err(ModelError::CycleDetected(class.to_string()));
        }
        current = model
            .class(parent)
            .ok_or_else(|| ModelError::UnknownClass(parent.to_string()))?;
        chain.push(&current.name);
    }
    Ok(chain)
}

/// Every attribute a class carries: its own first (declaration order), then
/// each ancestor's, root last. Private inherited attributes are storage the
/// subclass cannot access.
pub fn effective_attributes<'a>(
    model: &'a Model,
    class: &str,
) -> Result<Vec<EffectiveAttribute<'a>>, ModelError> {
    let chain = inheritance_chain(model, class)?;
    let mut result = Vec::new();
    for (depth, name) in chain.iter().enumerate() {
        let node = model.class(name).expect("chain names resolve");
        for attribute in &node.attributes {
            let access = if depth == 0 {
                AttributeAccess::Own
            } else if attribute.visibility == Visibility::Private {
                AttributeAccess::InheritedHidden
            } else {
                AttributeAccess::InheritedAccessible
            };
            result.push(EffectiveAttribute {
                attribute,
                origin_class: &node.name,
                access,
            });
        }
    }
    Ok(result)
}

/// Match every use case to the operation realizing it, by case-insensitive
/// name equality across all classes. Exactly one match is required per use
/// case; operations with no matching use case are permitted.
pub fn trace_matrix(model: &Model) -> Result<Vec<TraceEntry>, Vec<Diagnostic>> {
    let mut entries = Vec::new();
    let mut diagnostics = Vec::new();
    for usecase in &model.usecases {
        let candidates: Vec<(&str, &str)> = model
            .classes
            .iter()
            .flat_map(|class| {
                class
                    .operations
                    .iter()
                    .filter(|op| op.name.eq_ignore_ascii_case(&usecase.name))
                    .map(move |op| (class.name.as_str(), op.name.as_str()))
            })
            .collect();
        match candidates.as_slice() {
            [] => diagnostics.push(Diagnostic::error(
                Code::TraceUnmappedUsecase,
                format!("use case `{}` has no realizing operation", usecase.name),
                usecase.span.clone(),
            )),
            [(class, operation)] => entries.push(TraceEntry {
                usecase: usecase.name.clone(),
                class: class.to_string(),
                operation: operation.to_string(),
            }),
            many => {
                let listed = many
                    .iter()
                    .map(|(c, o)| format!("{c}.{o}"))
                    .collect::<Vec<_>>()
                    .join(", ");
                diagnostics.push(Diagnostic::error(
                    Code::TraceAmbiguousUsecase,
                    format!(
                        "use case `{}` is realized by more than one operation: {listed}",
                        usecase.name
                    ),
                    usecase.span.clone(),
                ));
            }
        }
    }
    if diagnostics.is_empty() {
        Ok(entries)
    } else {
        Err(diagnostics)
    }
}

/// Join each extend link with the trace matrix: for `U1 extends U2` with
/// traces `U1 -> C1.f1` and `U2 -> C2.f2`, the realization of `U1` must
/// invoke the realization of `U2`.
pub fn call_obligations(model: &Model) -> Result<Vec<CallObligation>, Vec<Diagnostic>> {
    let matrix = trace_matrix(model)?;
    let entry_for = |usecase: &str| -> &TraceEntry {
        matrix
            .iter()
            .find(|e| e.usecase == usecase)
            .expect("every declared use case has a trace entry")
    };
    Ok(model
        .extend_links()
        .map(|link| {
            let caller = entry_for(&link.source);
            let callee = entry_for(&link.target);
            CallObligation {
                caller_class: caller.class.clone(),
                caller_op: caller.operation.clone(),
                callee_class: callee.class.clone(),
                callee_op: callee.operation.clone(),
            }
        })
        .collect())
}
