//! Tokenizer for `.uml` source.
//!
//! Produces a flat token list with character-accurate spans. Unknown
//! characters are reported as `PARSE_UNEXPECTED_TOKEN` diagnostics and
//! skipped so the parser still sees the rest of the input.

use crate::diag::{Code, Diagnostic, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    /// Integer literal, kept as raw digits; numeric range is checked at the
    /// single place integers are legal (`string[N]`).
    Int(String),
    KwUsecaseDiagram,
    KwClassDiagram,
    KwActor,
    KwUsecase,
    KwClass,
    KwExtends,
    KwUses,
    KwRecord,
    KwInt,
    KwChar,
    KwString,
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Colon,
    Semicolon,
    Comma,
    Arrow,
    Minus,
    Hash,
    Plus,
    Eof,
}

impl TokenKind {
    /// Human-readable token description for diagnostics.
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(name) => format!("`{name}`"),
            TokenKind::Int(digits) => format!("`{digits}`"),
            TokenKind::KwUsecaseDiagram => "`usecase-diagram`".into(),
            TokenKind::KwClassDiagram => "`classdiagram`".into(),
            TokenKind::KwActor => "`actor`".into(),
            TokenKind::KwUsecase => "`usecase`".into(),
            TokenKind::KwClass => "`class`".into(),
            TokenKind::KwExtends => "`extends`".into(),
            TokenKind::KwUses => "`uses`".into(),
            TokenKind::KwRecord => "`record`".into(),
            TokenKind::KwInt => "`int`".into(),
            TokenKind::KwChar => "`char`".into(),
            TokenKind::KwString => "`string`".into(),
            TokenKind::LBrace => "`{`".into(),
            TokenKind::RBrace => "`}`".into(),
            TokenKind::LParen => "`(`".into(),
            TokenKind::RParen => "`)`".into(),
            TokenKind::LBracket => "`[`".into(),
            TokenKind::RBracket => "`]`".into(),
            TokenKind::Colon => "`:`".into(),
            TokenKind::Semicolon => "`;`".into(),
            TokenKind::Comma => "`,`".into(),
            TokenKind::Arrow => "`->`".into(),
            TokenKind::Minus => "`-`".into(),
            TokenKind::Hash => "`#`".into(),
            TokenKind::Plus => "`+`".into(),
            TokenKind::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: SourceSpan,
}

pub fn keyword_for(word: &str) -> Option<TokenKind> {
    Some(match word {
        "classdiagram" => TokenKind::KwClassDiagram,
        "actor" => TokenKind::KwActor,
        "usecase" => TokenKind::KwUsecase,
        "class" => TokenKind::KwClass,
        "extends" => TokenKind::KwExtends,
        "uses" => TokenKind::KwUses,
        "record" => TokenKind::KwRecord,
        "int" => TokenKind::KwInt,
        "char" => TokenKind::KwChar,
        "string" => TokenKind::KwString,
        _ => return None,
    })
}

/// All reserved words, including the compound diagram keyword. Identifiers
/// must not collide with these.
pub const KEYWORDS: &[&str] = &[
    "usecase-diagram",
    "classdiagram",
    "actor",
    "usecase",
    "class",
    "extends",
    "uses",
    "record",
    "int",
    "char",
    "string",
];

struct Lexer<'a> {
    file: &'a str,
    chars: Vec<char>,
    pos: usize,
    line: u32,
    column: u32,
    tokens: Vec<Token>,
    diagnostics: Vec<Diagnostic>,
}

pub fn lex(file: &str, text: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut lexer = Lexer {
        file,
        chars: text.chars().collect(),
        pos: 0,
        line: 1,
        column: 1,
        tokens: Vec::new(),
        diagnostics: Vec::new(),
    };
    lexer.run();
    (lexer.tokens, lexer.diagnostics)
}

impl Lexer<'_> {
    fn run(&mut self) {
        while let Some(c) = self.peek() {
            match c {
                ' ' | '\t' | '\r' | '\n' => {
                    self.advance();
                }
                '/' if self.peek_at(1) == Some('/') => self.skip_comment(),
                '{' => self.punct(TokenKind::LBrace),
                '}' => self.punct(TokenKind::RBrace),
                '(' => self.punct(TokenKind::LParen),
                ')' => self.punct(TokenKind::RParen),
                '[' => self.punct(TokenKind::LBracket),
                ']' => self.punct(TokenKind::RBracket),
                ':' => self.punct(TokenKind::Colon),
                ';' => self.punct(TokenKind::Semicolon),
                ',' => self.punct(TokenKind::Comma),
                '#' => self.punct(TokenKind::Hash),
                '+' => self.punct(TokenKind::Plus),
                '-' => {
                    if self.peek_at(1) == Some('>') {
                        let span = self.span_here(2);
                        self.advance();
                        self.advance();
                        self.tokens.push(Token {
                            kind: TokenKind::Arrow,
                            span,
                        });
                    } else {
                        self.punct(TokenKind::Minus);
                    }
                }
                c if c.is_ascii_digit() => self.number(),
                c if is_ident_start(c) => self.word(),
                other => {
                    let span = self.span_here(1);
                    self.diagnostics.push(Diagnostic::error(
                        Code::ParseUnexpectedToken,
                        format!("unexpected character `{other}`"),
                        span,
                    ));
                    self.advance();
                }
            }
        }
        let span = self.span_here(0);
        self.tokens.push(Token {
            kind: TokenKind::Eof,
            span,
        });
    }

    fn skip_comment(&mut self) {
        while let Some(c) = self.peek() {
            if c == '\n' {
                break;
            }
            self.advance();
        }
    }

    fn number(&mut self) {
        let span_start = self.span_here(0);
        let mut digits = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                digits.push(c);
                self.advance();
            } else {
                break;
            }
        }
        let mut span = span_start;
        span.length = digits.chars().count() as u32;
        self.tokens.push(Token {
            kind: TokenKind::Int(digits),
            span,
        });
    }

    fn word(&mut self) {
        let mut span = self.span_here(0);
        let mut word = String::new();
        while let Some(c) = self.peek() {
            if is_ident_continue(c) {
                word.push(c);
                self.advance();
            } else {
                break;
            }
        }
        // `usecase-diagram` is one keyword; `usecase` followed by anything
        // else (e.g. `usecase Login;`) stays a plain keyword.
        if word == "usecase" && self.lookahead_is("-diagram") {
            for _ in 0.."-diagram".len() {
                self.advance();
            }
            span.length = "usecase-diagram".len() as u32;
            self.tokens.push(Token {
                kind: TokenKind::KwUsecaseDiagram,
                span,
            });
            return;
        }
        span.length = word.chars().count() as u32;
        let kind = keyword_for(&word).unwrap_or(TokenKind::Ident(word));
        self.tokens.push(Token { kind, span });
    }

    /// True when the upcoming characters spell `rest` and the match is not
    /// followed by a further identifier character.
    fn lookahead_is(&self, rest: &str) -> bool {
        let mut i = self.pos;
        for expected in rest.chars() {
            if self.chars.get(i) != Some(&expected) {
                return false;
            }
            i += 1;
        }
        !matches!(self.chars.get(i), Some(&c) if is_ident_continue(c))
    }

    fn punct(&mut self, kind: TokenKind) {
        let span = self.span_here(1);
        self.advance();
        self.tokens.push(Token { kind, span });
    }

    fn span_here(&self, length: u32) -> SourceSpan {
        SourceSpan::new(self.file, self.line, self.column, length)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn advance(&mut self) {
        if let Some(&c) = self.chars.get(self.pos) {
            self.pos += 1;
            if c == '\n' {
                self.line += 1;
                self.column = 1;
            } else {
                self.column += 1;
            }
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}
