use alloc::vec::Vec;

use crate::series::TruncatedSeries;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("unsupported field GF({p}^{m})")]
    UnsupportedField { p: u32, m: u32 },
    #[error("invalid field element encoding")]
    InvalidFieldElement,
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),

    #[error("digit {digit} is not valid in base {base}")]
    InvalidDigit { digit: u32, base: u32 },
    #[error("word has a leading zero")]
    LeadingZero,
    #[error("invalid radix expansion: {0}")]
    InvalidExpansion(&'static str),
    #[error("value is not a nonnegative {0}-adic rational")]
    NotInSp(u32),

    #[error("symbol {symbol} outside alphabet of size {alphabet}")]
    SymbolOutOfAlphabet { symbol: usize, alphabet: usize },
    #[error("automata have different alphabets")]
    AlphabetMismatch,
    #[error("malformed automaton: {0}")]
    MalformedAutomaton(&'static str),
    #[error("state cap of {cap} exceeded")]
    StateCapExceeded { cap: usize },
    #[error("component cap of {cap} exceeded")]
    ComponentCapExceeded { cap: usize },

    #[error("language is not sparse")]
    NotSparse,
    #[error("precondition violated: {0}")]
    Precondition(&'static str),

    #[error("exponent not representable in this series domain")]
    ExponentNotRepresentable,
    #[error("constant-term root needs GF({p}^{m}), which is not in the field table")]
    ExtensionUnavailable { p: u32, m: u32 },
    #[error("gap-sum routes disagree at exponent {exponent}")]
    RouteDisagreement { exponent: alloc::string::String },
    #[error("equation has no solution extending the seed (failed at index {index})")]
    NoSolution { index: u64 },
    #[error("equation has {} consistent branches", branches.len())]
    AmbiguousBranch { branches: Vec<TruncatedSeries> },

    #[error("p-kernel did not stabilize ({states} states at depth {depth})")]
    KernelNotStabilized { states: usize, depth: u32 },
    #[error("kernel automaton disagrees with the coefficient stream at n = {n}")]
    KernelMismatch { n: u64 },
    #[error("certificate replay failed at step {step}: {reason}")]
    Replay {
        step: usize,
        reason: alloc::string::String,
    },
    #[error("verification window too large to check exhaustively")]
    WindowTooLarge,
}
