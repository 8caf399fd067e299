//! Error types shared by every module of the crate.

use thiserror::Error;

/// Reasons a net-source text can be rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    /// A token did not fit the grammar.
    #[error("syntax error: {0}")]
    Syntax(String),
    /// The `interface` declaration is absent or repeated.
    #[error("missing or repeated interface declaration")]
    Interface,
    /// A cell name was declared twice.
    #[error("cell `{0}` declared twice")]
    DuplicateCell(String),
    /// A wire mentions a cell that was never declared.
    #[error("unknown cell `{0}`")]
    UnknownCell(String),
    /// An endpoint occurs in more than one wire.
    #[error("endpoint `{0}` used twice")]
    DuplicateEndpoint(String),
    /// An auxiliary slot was used on an ε cell.
    #[error("auxiliary slot `{0}` on an eps cell")]
    AuxOnEps(String),
    /// A free index outside `1..=interface`.
    #[error("free index {0} out of range")]
    FreeIndexOutOfRange(usize),
    /// A free index in `1..=interface` never used.
    #[error("free index {0} is never wired")]
    MissingFreeIndex(usize),
    /// A cell port that no wire mentions.
    #[error("endpoint `{0}` is never wired")]
    DanglingPort(String),
    /// A wire whose two endpoints coincide.
    #[error("wire joins `{0}` to itself")]
    SelfWire(String),
}

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Net-source text rejected, with a 1-based position.
    #[error("parse error at {line}:{col}: {kind}")]
    Parse {
        /// Line of the offending token.
        line: usize,
        /// Column of the offending token.
        col: usize,
        /// What went wrong.
        kind: ParseErrorKind,
    },
    /// A structural invariant of [`crate::Net`] does not hold.
    #[error("invariant violated: {0}")]
    Invariant(String),
    /// The operation requires a cut-free net.
    #[error("net is not cut-free")]
    NotCutFree,
    /// The two cells given are not an active pair.
    #[error("cells {0} and {1} do not form an active pair")]
    NotAnActivePair(usize, usize),
    /// Two nets or a net and a context disagree on the interface.
    #[error("interface mismatch: expected {expected}, found {found}")]
    InterfaceMismatch {
        /// Interface size required.
        expected: usize,
        /// Interface size supplied.
        found: usize,
    },
    /// The context has fewer free ports than the plugged net.
    #[error("context interface {context} is smaller than net interface {net}")]
    InterfaceTooSmall {
        /// Free ports of the context.
        context: usize,
        /// Free ports of the net.
        net: usize,
    },
    /// A local rewrite was requested where its left member does not occur.
    #[error("pattern mismatch: {0}")]
    PatternMismatch(String),
    /// A leaf index outside the tree.
    #[error("leaf {leaf} out of range for a tree with {leaves} leaves")]
    LeafOutOfRange {
        /// Requested leaf (1-based).
        leaf: usize,
        /// Leaves of the tree.
        leaves: usize,
    },
    /// A partial involution that is not one.
    #[error("invalid feedback: {0}")]
    InvalidFeedback(String),
    /// A recursion template that cannot be filled.
    #[error("malformed template: {0}")]
    MalformedTemplate(String),
}

/// Convenience alias.
pub type Result<T> = std::result::Result<T, Error>;
