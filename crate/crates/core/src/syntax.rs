//! Raw syntax tree for `.uml` documents.
//!
//! The tree is purely syntactic: names are unresolved text, and duplicate or
//! dangling references are representable. Name resolution happens in
//! [`crate::model`].

use crate::diag::SourceSpan;

/// A name as written in the source, with its position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ident {
    pub text: String,
    pub span: SourceSpan,
}

impl Ident {
    pub fn new(text: impl Into<String>, span: SourceSpan) -> Self {
        Ident {
            text: text.into(),
            span,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Visibility {
    Private,
    Protected,
    Public,
}

impl Visibility {
    /// The marker used in `.uml` source.
    pub fn marker(self) -> char {
        match self {
            Visibility::Private => '-',
            Visibility::Protected => '#',
            Visibility::Public => '+',
        }
    }

    /// The section keyword used in skeleton output.
    pub fn keyword(self) -> &'static str {
        match self {
            Visibility::Private => "private",
            Visibility::Protected => "protected",
            Visibility::Public => "public",
        }
    }
}

/// A parsed document: any number of use-case and class diagrams.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SyntaxTree {
    pub usecase_diagrams: Vec<UseCaseDiagramDecl>,
    pub class_diagrams: Vec<ClassDiagramDecl>,
}

impl SyntaxTree {
    pub fn is_empty(&self) -> bool {
        self.usecase_diagrams.is_empty() && self.class_diagrams.is_empty()
    }

    /// Copy of the tree with every span replaced by a placeholder, for
    /// span-insensitive structural comparison (round-trip checks).
    pub fn despanned(&self) -> SyntaxTree {
        let mut tree = self.clone();
        tree.strip_spans();
        tree
    }

    fn strip_spans(&mut self) {
        for ud in &mut self.usecase_diagrams {
            ud.name.span = SourceSpan::synthetic();
            ud.span = SourceSpan::synthetic();
            for a in &mut ud.actors {
                a.span = SourceSpan::synthetic();
            }
            for u in &mut ud.usecases {
                u.span = SourceSpan::synthetic();
            }
            for l in &mut ud.actor_links {
                l.actor.span = SourceSpan::synthetic();
                l.usecase.span = SourceSpan::synthetic();
                l.span = SourceSpan::synthetic();
            }
            for e in &mut ud.extend_links {
                e.source.span = SourceSpan::synthetic();
                e.target.span = SourceSpan::synthetic();
                e.span = SourceSpan::synthetic();
            }
        }
        for cd in &mut self.class_diagrams {
            cd.name.span = SourceSpan::synthetic();
            cd.span = SourceSpan::synthetic();
            for c in &mut cd.classes {
                c.name.span = SourceSpan::synthetic();
                c.span = SourceSpan::synthetic();
                if let Some(p) = &mut c.parent {
                    p.span = SourceSpan::synthetic();
                }
                for a in &mut c.attributes {
                    strip_attribute(a);
                }
                for o in &mut c.operations {
                    o.name.span = SourceSpan::synthetic();
                    o.span = SourceSpan::synthetic();
                    for p in &mut o.params {
                        p.name.span = SourceSpan::synthetic();
                        strip_type(&mut p.ty);
                    }
                    if let Some(r) = &mut o.return_type {
                        strip_type(r);
                    }
                }
            }
            for u in &mut cd.uses {
                u.source.span = SourceSpan::synthetic();
                u.target.span = SourceSpan::synthetic();
                u.span = SourceSpan::synthetic();
            }
        }
    }
}

fn strip_attribute(attr: &mut RawAttribute) {
    attr.name.span = SourceSpan::synthetic();
    attr.span = SourceSpan::synthetic();
    strip_type(&mut attr.ty);
}

fn strip_type(ty: &mut RawType) {
    match ty {
        RawType::Int | RawType::Char => {}
        RawType::FixedString { span, .. } => *span = SourceSpan::synthetic(),
        RawType::Record { name, fields, span } => {
            name.span = SourceSpan::synthetic();
            *span = SourceSpan::synthetic();
            for f in fields {
                f.name.span = SourceSpan::synthetic();
                f.span = SourceSpan::synthetic();
                strip_type(&mut f.ty);
            }
        }
    }
}

/// Raw `usecase-diagram NAME { ... }` declaration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UseCaseDiagramDecl {
    pub name: Ident,
    pub actors: Vec<Ident>,
    pub usecases: Vec<Ident>,
    pub actor_links: Vec<RawActorLink>,
    pub extend_links: Vec<RawExtendLink>,
    pub span: SourceSpan,
}

/// Raw `Actor -> UseCase;` clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawActorLink {
    pub actor: Ident,
    pub usecase: Ident,
    pub span: SourceSpan,
}

/// Raw `U1 extends U2;` clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawExtendLink {
    pub source: Ident,
    pub target: Ident,
    pub span: SourceSpan,
}

/// Raw `classdiagram NAME { ... }` declaration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDiagramDecl {
    pub name: Ident,
    pub classes: Vec<RawClass>,
    pub uses: Vec<RawUsesLink>,
    pub span: SourceSpan,
}

/// Raw `class NAME [: Parent] { members }` declaration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawClass {
    pub name: Ident,
    pub parent: Option<Ident>,
    pub attributes: Vec<RawAttribute>,
    pub operations: Vec<RawOperation>,
    pub span: SourceSpan,
}

/// Raw `C1 uses C2;` clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawUsesLink {
    pub source: Ident,
    pub target: Ident,
    pub span: SourceSpan,
}

/// Raw `VIS name: type;` member line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawAttribute {
    pub visibility: Visibility,
    pub name: Ident,
    pub ty: RawType,
    pub span: SourceSpan,
}

/// Raw `VIS name(params)[: type];` member line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawOperation {
    pub visibility: Visibility,
    pub name: Ident,
    pub params: Vec<RawParam>,
    pub return_type: Option<RawType>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawParam {
    pub name: Ident,
    pub ty: RawType,
}

/// Raw `name: type;` line inside a `record` block. Record fields carry no
/// visibility marker in source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawField {
    pub name: Ident,
    pub ty: RawType,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawType {
    Int,
    Char,
    FixedString { capacity: u32, span: SourceSpan },
    Record { name: Ident, fields: Vec<RawField>, span: SourceSpan },
}
