use num_bigint::BigInt;
use std::fmt;

/// Errors surfaced by the library.
///
/// Variants are deliberately coarse: each names the contract that was
/// violated rather than the internal step that noticed it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Arithmetic attempted between quadratic extensions with different
    /// discriminants.
    IncompatibleField { left: BigInt, right: BigInt },
    /// The zero polynomial was passed where a nonzero one is required.
    ZeroPolynomial,
    /// Malformed argument outside the parser (wrong degree, not monic, ...).
    BadInput(String),
    /// Parse failure, with a byte offset into the input.
    Syntax { offset: usize, message: String },
    /// The parser met an identifier other than `X`, `Y` (or `t` in families).
    UnknownVariable { offset: usize, name: String },
    /// The degree-reduction loop could not cancel leading forms, or the
    /// Jacobian is not a nonzero constant.
    NotAnAutomorphism(String),
    /// Operation requires a locally finite automorphism.
    NotLocallyFinite,
    /// Cyclic reduction left a word of length >= 2.
    NotTriangularizable,
    /// Diagonalization obstruction (resonance, or b = 1 with c != 0).
    NotSemisimple(String),
    /// The automorphism has no single fixed point of multiplicity one.
    NotInS,
    /// Family inversion is only supported for monomial-diagonal families.
    NonInvertibleFamily,
    /// A coefficient of the family has a pole at t = 0; the offending
    /// monomial X^i Y^j is reported.
    NegativeOrder { x_exp: u32, y_exp: u32 },
    /// The membership linear system would exceed the configured size cap.
    BoundTooLarge { unknowns: usize, cap: usize },
    /// A fixed point would live in an extension of degree > 2.
    UnsupportedExtension(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::IncompatibleField { left, right } => {
                write!(f, "IncompatibleField: sqrt({left}) vs sqrt({right})")
            }
            Error::ZeroPolynomial => write!(f, "ZeroPolynomial"),
            Error::BadInput(msg) => write!(f, "BadInput: {msg}"),
            Error::Syntax { offset, message } => {
                write!(f, "SyntaxError at offset {offset}: {message}")
            }
            Error::UnknownVariable { offset, name } => {
                write!(f, "UnknownVariable at offset {offset}: {name}")
            }
            Error::NotAnAutomorphism(msg) => write!(f, "NotAnAutomorphism: {msg}"),
            Error::NotLocallyFinite => write!(f, "NotLocallyFinite"),
            Error::NotTriangularizable => write!(f, "NotTriangularizable"),
            Error::NotSemisimple(msg) => write!(f, "NotSemisimple: {msg}"),
            Error::NotInS => write!(f, "NotInS"),
            Error::NonInvertibleFamily => write!(f, "NonInvertibleFamily"),
            Error::NegativeOrder { x_exp, y_exp } => {
                write!(f, "NegativeOrder at X^{x_exp}*Y^{y_exp}")
            }
            Error::BoundTooLarge { unknowns, cap } => {
                write!(f, "BoundTooLarge: {unknowns} unknowns exceed cap {cap}")
            }
            Error::UnsupportedExtension(msg) => write!(f, "UnsupportedExtension: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

/// Machine-readable error name, used by the CLI for exit diagnostics.
impl Error {
    pub fn name(&self) -> &'static str {
        match self {
            Error::IncompatibleField { .. } => "IncompatibleField",
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::BadInput(_) => "BadInput",
            Error::Syntax { .. } => "SyntaxError",
            Error::UnknownVariable { .. } => "UnknownVariable",
            Error::NotAnAutomorphism(_) => "NotAnAutomorphism",
            Error::NotLocallyFinite => "NotLocallyFinite",
            Error::NotTriangularizable => "NotTriangularizable",
            Error::NotSemisimple(_) => "NotSemisimple",
            Error::NotInS => "NotInS",
            Error::NonInvertibleFamily => "NonInvertibleFamily",
            Error::NegativeOrder { .. } => "NegativeOrder",
            Error::BoundTooLarge { .. } => "BoundTooLarge",
            Error::UnsupportedExtension(_) => "UnsupportedExtension",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
