//! Skeleton generation: map a validated model to declaration-only class
//! skeletons and emit them as canonical text.
//!
//! The emitted format is fixed so golden tests can compare bytes:
//!
//! ```text
//! skeleton <Name> [extends <Parent>]
//!   <visibility>:
//!     attr <name>: <type>
//!     record <name>: <RecordName> {
//!       <field>: <type>
//!     }
//!     ctor <Name>()
//!     op <name>(<param>: <type>, ...)[: <type>] [// calls <Class>.<Op>]
//! ```
//!
//! Empty sections are omitted; section order is private, protected, public;
//! indentation is 2 spaces per level and lines end with `\n`.

use std::fmt::Write;

use crate::model::{
    call_obligations, AttributeDef, CallObligation, ClassNode, Model, OperationDef, TypeRef,
};
use crate::syntax::Visibility;
use crate::validate::{validate, Violation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstructorPolicy {
    /// Emit only constructors the model declares.
    ModelDeclaredOnly,
    /// Additionally give every class that takes part in an inheritance
    /// relation a constructor.
    InheritanceParticipants,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmitOptions {
    pub synthesize_accessors: bool,
    pub constructor_policy: ConstructorPolicy,
}

impl Default for EmitOptions {
    fn default() -> Self {
        EmitOptions {
            synthesize_accessors: false,
            constructor_policy: ConstructorPolicy::InheritanceParticipants,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonDoc {
    pub units: Vec<ClassSkeleton>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSkeleton {
    pub name: String,
    pub parent: Option<String>,
    /// Non-empty sections in fixed order: private, protected, public.
    pub sections: Vec<Section>,
    /// Obligations whose caller is this class, attached to caller operations.
    pub call_notes: Vec<CallObligation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub visibility: Visibility,
    pub members: Vec<MemberDecl>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MemberOrigin {
    Declared,
    Synthesized,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemberDecl {
    pub name: String,
    pub kind: MemberKind,
    pub origin: MemberOrigin,
    /// `(callee class, callee operation)` annotations, in obligation order.
    pub calls: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MemberKind {
    Attribute {
        ty: TypeRef,
    },
    RecordAttribute {
        record_name: String,
        fields: Vec<AttributeDef>,
    },
    Operation {
        params: Vec<(String, TypeRef)>,
        return_type: Option<TypeRef>,
    },
    Constructor,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodegenError {
    #[error("PRECONDITION_UNVALIDATED: model has {} validation error(s)", .0.len())]
    PreconditionUnvalidated(Vec<Violation>),
}

/// Map a model to one skeleton per class. Fails with
/// [`CodegenError::PreconditionUnvalidated`] when the model has
/// error-severity validation findings.
pub fn map_model(model: &Model, opts: &EmitOptions) -> Result<SkeletonDoc, CodegenError> {
    let errors: Vec<Violation> = validate(model)
        .into_iter()
        .filter(|v| v.severity == crate::diag::Severity::Error)
        .collect();
    if !errors.is_empty() {
        return Err(CodegenError::PreconditionUnvalidated(errors));
    }
    let obligations = call_obligations(model).expect("validated model traces");

    let units = model
        .classes
        .iter()
        .map(|class| map_class(model, class, &obligations, opts))
        .collect();
    Ok(SkeletonDoc { units })
}

fn map_class(
    model: &Model,
    class: &ClassNode,
    obligations: &[CallObligation],
    opts: &EmitOptions,
) -> ClassSkeleton {
    let call_notes: Vec<CallObligation> = obligations
        .iter()
        .filter(|o| o.caller_class == class.name)
        .cloned()
        .collect();

    let needs_constructor = opts.constructor_policy == ConstructorPolicy::InheritanceParticipants
        && model.participates_in_inheritance(&class.name)
        && !class.operations.iter().any(|op| op.is_constructor);

    let synthesized_accessors = if opts.synthesize_accessors {
        synthesize_accessors(class)
    } else {
        Vec::new()
    };

    let mut sections = Vec::new();
    for visibility in [Visibility::Private, Visibility::Protected, Visibility::Public] {
        let mut members = Vec::new();
        for attr in class.attributes.iter().filter(|a| a.visibility == visibility) {
            members.push(attribute_member(attr, MemberOrigin::Declared));
        }
        if needs_constructor && visibility == Visibility::Public {
            members.push(MemberDecl {
                name: class.name.clone(),
                kind: MemberKind::Constructor,
                origin: MemberOrigin::Synthesized,
                calls: Vec::new(),
            });
        }
        for op in class.operations.iter().filter(|o| o.visibility == visibility) {
            members.push(operation_member(op, MemberOrigin::Declared, &call_notes));
        }
        if visibility == Visibility::Public {
            for op in &synthesized_accessors {
                members.push(operation_member(op, MemberOrigin::Synthesized, &call_notes));
            }
        }
        if !members.is_empty() {
            sections.push(Section {
                visibility,
                members,
            });
        }
    }

    ClassSkeleton {
        name: class.name.clone(),
        parent: class.parent.clone(),
        sections,
        call_notes,
    }
}

fn attribute_member(attr: &AttributeDef, origin: MemberOrigin) -> MemberDecl {
    let kind = match &attr.ty {
        TypeRef::Record { name, fields } => MemberKind::RecordAttribute {
            record_name: name.clone(),
            fields: fields.clone(),
        },
        other => MemberKind::Attribute { ty: other.clone() },
    };
    MemberDecl {
        name: attr.name.clone(),
        kind,
        origin,
        calls: Vec::new(),
    }
}

fn operation_member(
    op: &OperationDef,
    origin: MemberOrigin,
    call_notes: &[CallObligation],
) -> MemberDecl {
    let calls = call_notes
        .iter()
        .filter(|o| o.caller_op == op.name)
        .map(|o| (o.callee_class.clone(), o.callee_op.clone()))
        .collect();
    let kind = if op.is_constructor {
        MemberKind::Constructor
    } else {
        MemberKind::Operation {
            params: op.params.clone(),
            return_type: op.return_type.clone(),
        }
    };
    MemberDecl {
        name: op.name.clone(),
        kind,
        origin,
        calls,
    }
}

/// Set/Get pairs for every scalar or fixed-string attribute that lacks them
/// (case-insensitive check); record attributes get none, and accessors the
/// class already declares are never duplicated. Setter parameters are named
/// after the attribute: lowercased, first three characters.
pub fn synthesize_accessors(class: &ClassNode) -> Vec<OperationDef> {
    let mut synthesized = Vec::new();
    let has_op = |name: &str| {
        class
            .operations
            .iter()
            .any(|op| op.name.eq_ignore_ascii_case(name))
    };
    for attr in &class.attributes {
        if !attr.ty.is_accessor_eligible() {
            continue;
        }
        let setter = format!("Set{}", attr.name);
        let getter = format!("Get{}", attr.name);
        if !has_op(&setter) {
            let param: String = attr.name.to_ascii_lowercase().chars().take(3).collect();
            synthesized.push(OperationDef {
                name: setter,
                visibility: Visibility::Public,
                params: vec![(param, attr.ty.clone())],
                return_type: None,
                is_constructor: false,
                span: Default::default(),
            });
        }
        if !has_op(&getter) {
            synthesized.push(OperationDef {
                name: getter,
                visibility: Visibility::Public,
                params: Vec::new(),
                return_type: Some(attr.ty.clone()),
                is_constructor: false,
                span: Default::default(),
            });
        }
    }
    synthesized
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

const INDENT: &str = "  ";

/// Whole document: one block per unit, blank line between blocks.
pub fn emit_canonical(doc: &SkeletonDoc) -> String {
    let mut out = String::new();
    for (i, unit) in doc.units.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&emit_unit(unit));
    }
    out
}

/// One standalone skeleton block, used for per-class output files.
pub fn emit_unit(unit: &ClassSkeleton) -> String {
    let mut out = String::new();
    match &unit.parent {
        Some(parent) => {
            let _ = writeln!(out, "skeleton {} extends {}", unit.name, parent);
        }
        None => {
            let _ = writeln!(out, "skeleton {}", unit.name);
        }
    }
    for section in &unit.sections {
        let _ = writeln!(out, "{INDENT}{}:", section.visibility.keyword());
        for member in &section.members {
            emit_member(&mut out, member);
        }
    }
    out
}

fn emit_member(out: &mut String, member: &MemberDecl) {
    let pad = INDENT.repeat(2);
    match &member.kind {
        MemberKind::Attribute { ty } => {
            let _ = write!(out, "{pad}attr {}: {}", member.name, render_type(ty));
        }
        MemberKind::RecordAttribute {
            record_name,
            fields,
        } => {
            let _ = writeln!(out, "{pad}record {}: {} {{", member.name, record_name);
            emit_record_fields(out, fields, 3);
            let _ = write!(out, "{pad}}}");
        }
        MemberKind::Constructor => {
            let _ = write!(out, "{pad}ctor {}()", member.name);
        }
        MemberKind::Operation {
            params,
            return_type,
        } => {
            let _ = write!(out, "{pad}op {}(", member.name);
            for (i, (name, ty)) in params.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                let _ = write!(out, "{name}: {}", render_type(ty));
            }
            out.push(')');
            if let Some(ret) = return_type {
                let _ = write!(out, ": {}", render_type(ret));
            }
        }
    }
    for (class, op) in &member.calls {
        let _ = write!(out, " // calls {class}.{op}");
    }
    out.push('\n');
}

fn emit_record_fields(out: &mut String, fields: &[AttributeDef], indent: usize) {
    let pad = INDENT.repeat(indent);
    for field in fields {
        match &field.ty {
            TypeRef::Record { name, fields } => {
                let _ = writeln!(out, "{pad}record {}: {} {{", field.name, name);
                emit_record_fields(out, fields, indent + 1);
                let _ = writeln!(out, "{pad}}}");
            }
            other => {
                let _ = writeln!(out, "{pad}{}: {}", field.name, render_type(other));
            }
        }
    }
}

fn render_type(ty: &TypeRef) -> String {
    ty.render()
}
