//! Recursive-descent parser for `.uml` documents.
//!
//! Grammar (two diagram kinds, line-oriented blocks):
//!
//! ```text
//! document         := { usecase-diagram | classdiagram }
//! usecase-diagram  := "usecase-diagram" NAME "{" { uc-item } "}"
//! uc-item          := "actor" NAME ";" | "usecase" NAME ";"
//!                   | NAME "->" NAME ";" | NAME "extends" NAME ";"
//! classdiagram     := "classdiagram" NAME "{" { class | uses } "}"
//! class            := "class" NAME [ ":" NAME ] "{" { member } "}"
//! uses             := NAME "uses" NAME ";"
//! member           := VIS NAME ":" type ";"
//!                   | VIS NAME "(" [ params ] ")" [ ":" type ] ";"
//! type             := "int" | "char" | "string" "[" INT "]"
//!                   | "record" NAME "{" { NAME ":" type ";" } "}"
//! VIS              := "-" | "#" | "+"
//! ```
//!
//! After an error the parser skips to the next `;` or `}` (brace-balanced),
//! so several errors can be reported in one run. A tree is returned only
//! when no error-severity diagnostic was produced.

use crate::diag::{Code, Diagnostic, Severity, SourceSpan};
use crate::lexer::{lex, Token, TokenKind};
use crate::syntax::{
    ClassDiagramDecl, Ident, RawActorLink, RawAttribute, RawClass, RawExtendLink, RawField,
    RawOperation, RawParam, RawType, RawUsesLink, SyntaxTree, UseCaseDiagramDecl, Visibility,
};

/// Fixed-string capacities include one reserved terminator slot, so the
/// smallest legal capacity is 2 (one usable character).
pub const MIN_STRING_CAPACITY: u32 = 2;

pub fn parse_document(file: &str, text: &str) -> Result<SyntaxTree, Vec<Diagnostic>> {
    let (tokens, lex_diagnostics) = lex(file, text);
    let mut parser = Parser {
        tokens,
        pos: 0,
        diagnostics: lex_diagnostics,
    };
    let tree = parser.document();
    if parser
        .diagnostics
        .iter()
        .any(|d| d.severity == Severity::Error)
    {
        Err(parser.diagnostics)
    } else {
        Ok(tree)
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    diagnostics: Vec<Diagnostic>,
}

/// Signals that a diagnostic was already emitted and the caller should
/// recover.
struct Recover;

type Parsed<T> = Result<T, Recover>;

impl Parser {
    fn document(&mut self) -> SyntaxTree {
        let mut tree = SyntaxTree::default();
        loop {
            match self.peek() {
                TokenKind::Eof => break,
                TokenKind::KwUsecaseDiagram => {
                    if let Ok(decl) = self.usecase_diagram() {
                        tree.usecase_diagrams.push(decl);
                    } else {
                        self.recover();
                    }
                }
                TokenKind::KwClassDiagram => {
                    if let Ok(decl) = self.class_diagram() {
                        tree.class_diagrams.push(decl);
                    } else {
                        self.recover();
                    }
                }
                // A bare class declaration is parsed for its own errors
                // first, then rejected as misplaced.
                TokenKind::KwClass => {
                    let span = self.here();
                    match self.class_decl() {
                        Ok(_) => self.error(
                            Code::ParseUnexpectedToken,
                            "`class` declarations must appear inside a `classdiagram` block",
                            span,
                        ),
                        Err(Recover) => self.recover(),
                    }
                }
                _ => {
                    let found = self.peek().describe();
                    let span = self.here();
                    self.error(
                        Code::ParseUnexpectedToken,
                        format!("expected `usecase-diagram` or `classdiagram`, found {found}"),
                        span,
                    );
                    self.recover();
                }
            }
        }
        tree
    }

    fn usecase_diagram(&mut self) -> Parsed<UseCaseDiagramDecl> {
        let span = self.here();
        self.bump(); // usecase-diagram
        let name = self.expect_ident("diagram name")?;
        let open = self.expect(TokenKind::LBrace)?;
        let mut decl = UseCaseDiagramDecl {
            name,
            actors: Vec::new(),
            usecases: Vec::new(),
            actor_links: Vec::new(),
            extend_links: Vec::new(),
            span,
        };
        loop {
            match self.peek() {
                TokenKind::RBrace => {
                    self.bump();
                    break;
                }
                TokenKind::Eof => {
                    self.unterminated("usecase-diagram", &decl.name.text, open);
                    break;
                }
                TokenKind::KwActor => {
                    if let Err(Recover) = self.actor_decl(&mut decl) {
                        self.recover();
                    }
                }
                TokenKind::KwUsecase => {
                    if let Err(Recover) = self.usecase_decl(&mut decl) {
                        self.recover();
                    }
                }
                TokenKind::Ident(_) => {
                    if let Err(Recover) = self.usecase_link(&mut decl) {
                        self.recover();
                    }
                }
                _ => {
                    let found = self.peek().describe();
                    let span = self.here();
                    self.error(
                        Code::ParseUnexpectedToken,
                        format!(
                            "expected `actor`, `usecase`, a link, or `}}`, found {found}"
                        ),
                        span,
                    );
                    self.recover();
                }
            }
        }
        Ok(decl)
    }

    fn actor_decl(&mut self, decl: &mut UseCaseDiagramDecl) -> Parsed<()> {
        self.bump(); // actor
        let name = self.expect_ident("actor name")?;
        self.expect(TokenKind::Semicolon)?;
        decl.actors.push(name);
        Ok(())
    }

    fn usecase_decl(&mut self, decl: &mut UseCaseDiagramDecl) -> Parsed<()> {
        self.bump(); // usecase
        let name = self.expect_ident("use-case name")?;
        self.expect(TokenKind::Semicolon)?;
        decl.usecases.push(name);
        Ok(())
    }

    fn usecase_link(&mut self, decl: &mut UseCaseDiagramDecl) -> Parsed<()> {
        let source = self.expect_ident("name")?;
        match self.peek() {
            TokenKind::Arrow => {
                self.bump();
                let target = self.expect_ident("use-case name")?;
                self.expect(TokenKind::Semicolon)?;
                let span = source.span.clone();
                decl.actor_links.push(RawActorLink {
                    actor: source,
                    usecase: target,
                    span,
                });
                Ok(())
            }
            TokenKind::KwExtends => {
                self.bump();
                let target = self.expect_ident("use-case name")?;
                self.expect(TokenKind::Semicolon)?;
                let span = source.span.clone();
                decl.extend_links.push(RawExtendLink {
                    source,
                    target,
                    span,
                });
                Ok(())
            }
            _ => {
                let found = self.peek().describe();
                let span = self.here();
                self.error(
                    Code::ParseUnexpectedToken,
                    format!("expected `->` or `extends`, found {found}"),
                    span,
                );
                Err(Recover)
            }
        }
    }

    fn class_diagram(&mut self) -> Parsed<ClassDiagramDecl> {
        let span = self.here();
        self.bump(); // classdiagram
        let name = self.expect_ident("diagram name")?;
        let open = self.expect(TokenKind::LBrace)?;
        let mut decl = ClassDiagramDecl {
            name,
            classes: Vec::new(),
            uses: Vec::new(),
            span,
        };
        loop {
            match self.peek() {
                TokenKind::RBrace => {
                    self.bump();
                    break;
                }
                TokenKind::Eof => {
                    self.unterminated("classdiagram", &decl.name.text, open);
                    break;
                }
                TokenKind::KwClass => match self.class_decl() {
                    Ok(class) => decl.classes.push(class),
                    Err(Recover) => self.recover(),
                },
                TokenKind::Ident(_) => {
                    if let Err(Recover) = self.uses_link(&mut decl) {
                        self.recover();
                    }
                }
                _ => {
                    let found = self.peek().describe();
                    let span = self.here();
                    self.error(
                        Code::ParseUnexpectedToken,
                        format!("expected `class`, a `uses` relation, or `}}`, found {found}"),
                        span,
                    );
                    self.recover();
                }
            }
        }
        Ok(decl)
    }

    fn uses_link(&mut self, decl: &mut ClassDiagramDecl) -> Parsed<()> {
        let source = self.expect_ident("class name")?;
        match self.peek() {
            TokenKind::KwUses => {
                self.bump();
                let target = self.expect_ident("class name")?;
                self.expect(TokenKind::Semicolon)?;
                let span = source.span.clone();
                decl.uses.push(RawUsesLink {
                    source,
                    target,
                    span,
                });
                Ok(())
            }
            _ => {
                let found = self.peek().describe();
                let span = self.here();
                self.error(
                    Code::ParseUnexpectedToken,
                    format!("expected `uses`, found {found}"),
                    span,
                );
                Err(Recover)
            }
        }
    }

    fn class_decl(&mut self) -> Parsed<RawClass> {
        let span = self.here();
        self.bump(); // class
        let name = self.expect_ident("class name")?;
        let parent = if self.peek() == &TokenKind::Colon {
            self.bump();
            Some(self.expect_ident("parent class name")?)
        } else {
            None
        };
        if parent.is_some() && self.peek() == &TokenKind::Comma {
            let span = self.here();
            self.error(
                Code::ParseUnexpectedToken,
                "multiple inheritance is not supported; a class has at most one parent",
                span,
            );
            return Err(Recover);
        }
        let open = self.expect(TokenKind::LBrace)?;
        let mut class = RawClass {
            name,
            parent,
            attributes: Vec::new(),
            operations: Vec::new(),
            span,
        };
        loop {
            match self.peek() {
                TokenKind::RBrace => {
                    self.bump();
                    break;
                }
                TokenKind::Eof => {
                    self.unterminated("class", &class.name.text, open);
                    break;
                }
                _ => {
                    if let Err(Recover) = self.member(&mut class) {
                        self.recover();
                    }
                }
            }
        }
        Ok(class)
    }

    fn member(&mut self, class: &mut RawClass) -> Parsed<()> {
        let visibility = match self.peek() {
            TokenKind::Minus => Visibility::Private,
            TokenKind::Hash => Visibility::Protected,
            TokenKind::Plus => Visibility::Public,
            other => {
                let found = other.describe();
                let span = self.here();
                self.error(
                    Code::ParseUnexpectedToken,
                    format!(
                        "expected a member (`-`, `#`, or `+`) or `}}`, found {found}"
                    ),
                    span,
                );
                return Err(Recover);
            }
        };
        let marker_span = self.here();
        self.bump();
        let name = self.expect_ident("member name")?;
        match self.peek() {
            TokenKind::Colon => {
                self.bump();
                let ty = self.type_ref()?;
                self.expect(TokenKind::Semicolon)?;
                class.attributes.push(RawAttribute {
                    visibility,
                    name,
                    ty,
                    span: marker_span,
                });
                Ok(())
            }
            TokenKind::LParen => {
                self.bump();
                let params = self.params()?;
                self.expect(TokenKind::RParen)?;
                let return_type = if self.peek() == &TokenKind::Colon {
                    self.bump();
                    Some(self.type_ref()?)
                } else {
                    None
                };
                self.expect(TokenKind::Semicolon)?;
                class.operations.push(RawOperation {
                    visibility,
                    name,
                    params,
                    return_type,
                    span: marker_span,
                });
                Ok(())
            }
            other => {
                let found = other.describe();
                let span = self.here();
                self.error(
                    Code::ParseUnexpectedToken,
                    format!("expected `:` or `(` after member name, found {found}"),
                    span,
                );
                Err(Recover)
            }
        }
    }

    fn params(&mut self) -> Parsed<Vec<RawParam>> {
        let mut params = Vec::new();
        if self.peek() == &TokenKind::RParen {
            return Ok(params);
        }
        loop {
            let name = self.expect_ident("parameter name")?;
            self.expect(TokenKind::Colon)?;
            let ty = self.type_ref()?;
            params.push(RawParam { name, ty });
            if self.peek() == &TokenKind::Comma {
                self.bump();
            } else {
                return Ok(params);
            }
        }
    }

    fn type_ref(&mut self) -> Parsed<RawType> {
        match self.peek().clone() {
            TokenKind::KwInt => {
                self.bump();
                Ok(RawType::Int)
            }
            TokenKind::KwChar => {
                self.bump();
                Ok(RawType::Char)
            }
            TokenKind::KwString => {
                let span = self.here();
                self.bump();
                self.expect(TokenKind::LBracket)?;
                let capacity = self.capacity()?;
                self.expect(TokenKind::RBracket)?;
                Ok(RawType::FixedString { capacity, span })
            }
            TokenKind::KwRecord => {
                let span = self.here();
                self.bump();
                let name = self.expect_ident("record name")?;
                let open = self.expect(TokenKind::LBrace)?;
                let mut fields = Vec::new();
                loop {
                    match self.peek() {
                        TokenKind::RBrace => {
                            self.bump();
                            break;
                        }
                        TokenKind::Eof => {
                            self.unterminated("record", &name.text, open);
                            break;
                        }
                        _ => {
                            let field_name = self.expect_ident("field name")?;
                            let field_span = field_name.span.clone();
                            self.expect(TokenKind::Colon)?;
                            let ty = self.type_ref()?;
                            self.expect(TokenKind::Semicolon)?;
                            fields.push(RawField {
                                name: field_name,
                                ty,
                                span: field_span,
                            });
                        }
                    }
                }
                Ok(RawType::Record { name, fields, span })
            }
            other => {
                let found = other.describe();
                let span = self.here();
                self.error(
                    Code::ParseUnexpectedToken,
                    format!(
                        "expected a type (`int`, `char`, `string[N]`, or `record`), found {found}"
                    ),
                    span,
                );
                Err(Recover)
            }
        }
    }

    fn capacity(&mut self) -> Parsed<u32> {
        match self.peek().clone() {
            TokenKind::Int(digits) => {
                let span = self.here();
                self.bump();
                match digits.parse::<u32>() {
                    Ok(n) if n >= MIN_STRING_CAPACITY => Ok(n),
                    Ok(n) => {
                        self.error(
                            Code::ParseBadCardinality,
                            format!(
                                "string capacity must be at least {MIN_STRING_CAPACITY} \
                                 (one slot is reserved for the terminator), got {n}"
                            ),
                            span,
                        );
                        Err(Recover)
                    }
                    Err(_) => {
                        self.error(
                            Code::ParseBadCardinality,
                            format!("string capacity `{digits}` is out of range"),
                            span,
                        );
                        Err(Recover)
                    }
                }
            }
            other => {
                let found = other.describe();
                let span = self.here();
                self.error(
                    Code::ParseBadCardinality,
                    format!("expected a positive string capacity, found {found}"),
                    span,
                );
                Err(Recover)
            }
        }
    }

    // -- Token plumbing --

    fn peek(&self) -> &TokenKind {
        &self.tokens[self.pos].kind
    }

    fn here(&self) -> SourceSpan {
        self.tokens[self.pos].span.clone()
    }

    fn bump(&mut self) {
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
    }

    fn expect_ident(&mut self, what: &str) -> Parsed<Ident> {
        match self.peek().clone() {
            TokenKind::Ident(text) => {
                let span = self.here();
                self.bump();
                Ok(Ident { text, span })
            }
            other => {
                let found = other.describe();
                let span = self.here();
                self.error(
                    Code::ParseUnexpectedToken,
                    format!("expected {what}, found {found}"),
                    span,
                );
                Err(Recover)
            }
        }
    }

    fn expect(&mut self, kind: TokenKind) -> Parsed<SourceSpan> {
        if self.peek() == &kind {
            let span = self.here();
            self.bump();
            Ok(span)
        } else {
            let found = self.peek().describe();
            let span = self.here();
            self.error(
                Code::ParseUnexpectedToken,
                format!("expected {}, found {found}", kind.describe()),
                span,
            );
            Err(Recover)
        }
    }

    fn error(&mut self, code: Code, message: impl Into<String>, span: SourceSpan) {
        self.diagnostics.push(Diagnostic::error(code, message, span));
    }

    fn unterminated(&mut self, construct: &str, name: &str, open: SourceSpan) {
        self.error(
            Code::ParseUnterminatedBlock,
            format!("missing `}}` to close {construct} `{name}`"),
            open,
        );
    }

    /// Panic-mode recovery: skip to the next `;` (consumed) or `}` (left for
    /// the enclosing block), stepping over balanced `{ ... }` groups.
    fn recover(&mut self) {
        let mut depth = 0usize;
        loop {
            match self.peek() {
                TokenKind::Eof => return,
                TokenKind::Semicolon if depth == 0 => {
                    self.bump();
                    return;
                }
                TokenKind::LBrace => {
                    depth += 1;
                    self.bump();
                }
                TokenKind::RBrace => {
                    if depth == 0 {
                        return;
                    }
                    depth -= 1;
                    self.bump();
                }
                _ => self.bump(),
            }
        }
    }
}
