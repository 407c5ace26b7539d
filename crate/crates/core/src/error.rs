use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("variable count mismatch: {left} vs {right}")]
    VarCountMismatch { left: usize, right: usize },
    #[error("point has {got} coordinates, polynomial has {expected} variables")]
    PointLength { expected: usize, got: usize },
    #[error("variable index {index} out of range for {nvars} variables")]
    VarOutOfRange { index: usize, nvars: usize },
    #[error("degenerate box on axis {axis}: lower bound {lo} is not below upper bound {hi}")]
    DegenerateBox { axis: usize, lo: String, hi: String },
    #[error("negative lower bound {0} in box")]
    NegativeBound(String),
    #[error("denominator must be a nonzero polynomial with positive coefficients")]
    BadDenominator,
    #[error("division by zero")]
    DivisionByZero,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character {ch:?} at offset {pos}")]
    UnexpectedChar { ch: char, pos: usize },
    #[error("floating-point literal at offset {0}; use an exact rational such as 3/2")]
    FloatLiteral(usize),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected token {tok} at offset {pos}")]
    UnexpectedToken { tok: String, pos: usize },
    #[error("unknown identifier {0:?}")]
    UnknownIdentifier(String),
    #[error("exponent must be an integer literal")]
    BadExponent,
    #[error("expected a polynomial, found a proper rational expression")]
    NotPolynomial,
    #[error("division by zero")]
    DivisionByZero,
    #[error("variable x{index} exceeds declared variable count {nvars}")]
    TooManyVars { index: usize, nvars: usize },
    #[error("invalid rational literal {0:?}")]
    BadRational(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecurrenceError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("negative coefficient {coeff} in the {part} of R; the method requires positive coefficients")]
    NegativeCoefficient { part: &'static str, coeff: String },
    #[error("R has an empty numerator or denominator")]
    Degenerate,
    #[error("no equilibrium in the domain")]
    NoEquilibrium,
    #[error("{count} equilibria in the domain; a unique fixed point is required")]
    NonUniqueEquilibrium { count: usize },
    #[error("every point of the domain is an equilibrium")]
    DegenerateEquilibrium,
    #[error("the unique equilibrium is irrational (root of {0}); unsupported")]
    IrrationalEquilibrium(String),
    #[error("K must be at least 1")]
    ZeroK,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PositivityError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("the zero polynomial has no positivity proof")]
    ZeroPolynomial,
    #[error("split point must be non-negative, got {0}")]
    NegativeSplit(String),
    #[error("cannot finitize a region when the split point is 0")]
    FinitizeAtZero,
    #[error("region has {got} variables, polynomial has {expected}")]
    RegionSize { expected: usize, got: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReplayError {
    #[error("input digest mismatch")]
    InputDigest,
    #[error("certificate is malformed: {0}")]
    Malformed(String),
    #[error("node {path}: digest mismatch")]
    NodeDigest { path: String },
    #[error("node {path}: recorded outcome {recorded} but replay gives {replayed}")]
    NodeOutcome {
        path: String,
        recorded: String,
        replayed: String,
    },
    #[error("node {0} was subdivided but its children are missing")]
    MissingChildren(String),
    #[error("witness does not evaluate as recorded")]
    Witness,
    #[error("verdict is inconsistent with the tree")]
    Verdict,
    #[error(transparent)]
    Positivity(#[from] PositivityError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WebbookError {
    #[error("count must be at least 1")]
    ZeroCount,
    #[error("bad range {0:?}; expected NAME=LO..HI")]
    BadRange(String),
    #[error("range for {name} is empty or not positive: ({lo}, {hi}]")]
    EmptyRange { name: String, lo: String, hi: String },
    #[error("parameter {0} has two ranges")]
    DuplicateParam(String),
    #[error("no rational with denominator at most 64 in the range for {0}")]
    NoSample(String),
}
