//! Source positions and diagnostics.
//!
//! Every construct in a parsed document carries a [`SourceSpan`]; every
//! reported problem is a [`Diagnostic`] with a code from the fixed catalog
//! in [`Code`]. Diagnostics render as `file:line:col: severity CODE: message`,
//! one per line, the same shape the validator uses for its findings.

use std::fmt;

/// A contiguous character range on a single line of a source file.
///
/// Lines and columns are 1-based; `length` is counted in characters.
/// Multi-line constructs carry the span of their opening token.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub file: String,
    pub line: u32,
    pub column: u32,
    pub length: u32,
}

impl SourceSpan {
    pub fn new(file: impl Into<String>, line: u32, column: u32, length: u32) -> Self {
        debug_assert!(line >= 1 && column >= 1);
        SourceSpan {
            file: file.into(),
            line,
            column,
            length,
        }
    }

    /// Placeholder span for synthesized nodes and span-insensitive
    /// structural comparison.
    pub fn synthetic() -> Self {
        SourceSpan {
            file: String::new(),
            line: 1,
            column: 1,
            length: 0,
        }
    }
}

impl Default for SourceSpan {
    fn default() -> Self {
        SourceSpan::synthetic()
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Severity::Error => write!(f, "error"),
            Severity::Warning => write!(f, "warning"),
        }
    }
}

/// The fixed catalog of diagnostic and violation codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Code {
    // Parser
    ParseUnexpectedToken,
    ParseUnterminatedBlock,
    ParseBadCardinality,
    // Name resolution
    ResolveDuplicateName,
    ResolveUnknownName,
    ResolveSelfExtend,
    // Use-case traceability
    TraceUnmappedUsecase,
    TraceAmbiguousUsecase,
    // Model consistency (validator findings)
    InheritanceCycle,
    DanglingRelation,
    ObligationUnsatisfied,
    ProtectedWithoutSubclass,
    DuplicateMember,
    MemberShadowsInherited,
    ActorUnused,
    // Code generation
    PreconditionUnvalidated,
    // Driver-level input/output failures
    IoError,
}

impl Code {
    pub fn as_str(self) -> &'static str {
        match self {
            Code::ParseUnexpectedToken => "PARSE_UNEXPECTED_TOKEN",
            Code::ParseUnterminatedBlock => "PARSE_UNTERMINATED_BLOCK",
            Code::ParseBadCardinality => "PARSE_BAD_CARDINALITY",
            Code::ResolveDuplicateName => "RESOLVE_DUPLICATE_NAME",
            Code::ResolveUnknownName => "RESOLVE_UNKNOWN_NAME",
            Code::ResolveSelfExtend => "RESOLVE_SELF_EXTEND",
            Code::TraceUnmappedUsecase => "TRACE_UNMAPPED_USECASE",
            Code::TraceAmbiguousUsecase => "TRACE_AMBIGUOUS_USECASE",
            Code::InheritanceCycle => "INHERITANCE_CYCLE",
            Code::DanglingRelation => "DANGLING_RELATION",
            Code::ObligationUnsatisfied => "OBLIGATION_UNSATISFIED",
            Code::ProtectedWithoutSubclass => "PROTECTED_WITHOUT_SUBCLASS",
            Code::DuplicateMember => "DUPLICATE_MEMBER",
            Code::MemberShadowsInherited => "MEMBER_SHADOWS_INHERITED",
            Code::ActorUnused => "ACTOR_UNUSED",
            Code::PreconditionUnvalidated => "PRECONDITION_UNVALIDATED",
            Code::IoError => "IO_ERROR",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One reported problem: parse error, resolution error, or trace failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: Code,
    pub message: String,
    pub span: SourceSpan,
}

impl Diagnostic {
    pub fn error(code: Code, message: impl Into<String>, span: SourceSpan) -> Self {
        Diagnostic {
            severity: Severity::Error,
            code,
            message: message.into(),
            span,
        }
    }

    pub fn warning(code: Code, message: impl Into<String>, span: SourceSpan) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            code,
            message: message.into(),
            span,
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} {}: {}",
            self.span, self.severity, self.code, self.message
        )
    }
}
