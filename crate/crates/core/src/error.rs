use thiserror::Error;

/// Errors produced by the library.
///
/// [`Error::is_validation`] separates structural problems with user-supplied
/// objects from arithmetic or search failures; the CLI maps them to
/// different exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty pattern")]
    EmptyPattern,
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("invalid substitution: {0}")]
    InvalidSubstitution(String),
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),
    #[error("invalid numeration system: {0}")]
    InvalidNumeration(String),
    #[error("digit {digit} out of range for base {base}")]
    DigitOutOfRange { digit: u64, base: u64 },
    #[error("base must be at least 2, got {0}")]
    InvalidBase(u64),
    #[error("padding length {requested} is shorter than representation length {len}")]
    PadTooShort { requested: usize, len: usize },
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("Perron data requires primitivity")]
    NotPrimitive,
    #[error("automaton is not normalized: initial state has no 0-loop")]
    NotNormalized,
    #[error("substitution is not of constant length")]
    NotConstantLength,
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("word `{0}` is not a factor")]
    NotAFactor(String),
    #[error("no witness within bound {0}")]
    NoWitness(usize),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),
    #[error("invalid block map: {0}")]
    InvalidBlockMap(String),
    #[error("missing witness: {0}")]
    MissingWitness(String),
    #[error("inputs generate different sequences (first difference at {0})")]
    DifferentSequences(usize),
    #[error("did not stabilize: {0}")]
    NotStabilized(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

impl Error {
    /// True for errors caused by a well-formed but invalid object.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Parse { .. } | Error::Invariant(_) | Error::Overflow(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
