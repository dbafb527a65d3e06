use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime in [2, 2^31)")]
    NotPrime(u64),
    #[error("invalid variable name `{0}`")]
    InvalidVarName(String),
    #[error("duplicate variable name `{0}`")]
    DuplicateVar(String),
    #[error("variable context must be nonempty")]
    EmptyVarCtx,
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("operands live in different fields or variable contexts")]
    ContextMismatch,
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("q = {q} exceeds the Frobenius guard {limit}")]
    QGuard { q: u64, limit: u64 },
    #[error("{q} is not a positive power of p = {p}")]
    NotPowerOfP { q: u64, p: u64 },
    #[error("exponent {exp} is not divisible by p = {p}")]
    NotPthPower { exp: usize, p: u64 },
    #[error("expected {expected} coordinates, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("S-pair of degree {degree} exceeds the degree cap {cap}")]
    DegreeCap { degree: u64, cap: u64 },
    #[error("the zero polynomial is not allowed here")]
    ZeroPolynomial,
    #[error("colon by the zero ideal")]
    ZeroIdeal,
    #[error("polynomial does not lie in the maximal ideal")]
    NotInMaximalIdeal,
    #[error("fiber over lambda = {0} is degenerate")]
    DegenerateFiber(u64),
    #[error("operation requires odd characteristic")]
    CharacteristicTwo,
    #[error("family is not of the form c*z*y^2 - g(x,z,t): {0}")]
    NotWeierstrass(String),
    #[error("reduction mod {p} is degenerate: {reason}")]
    DegenerateReduction { p: u64, reason: String },
    #[error("h = 0: the generic fiber is not Frobenius split")]
    GenericFiberNotSplit,
    #[error("base map is inseparable (derivative vanishes identically)")]
    Inseparable,
    #[error("wild ramification: factor {factor} has multiplicity {mult} divisible by p")]
    WildRamification { factor: String, mult: u32 },
    #[error("base map must have degree at least 1")]
    ConstantMap,
    #[error("restricted splitting vanishes: h reduces to 0 modulo the center")]
    ZeroHBar,
    #[error("center generators are not distinct variables")]
    NotVariableCenter,
    #[error("{0} is not an irreducible monic polynomial")]
    NotIrreducible(String),
    #[error("rational overflow in divisor arithmetic")]
    RationalOverflow,
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}
