//! Error type shared by every module of the crate.
//!
//! Each variant carries enough witness data to reproduce the failure with a
//! single focused check.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// The Cayley table fails associativity; names the first violating triple.
    #[error("not associative: ({a}·{b})·{c} = {lhs} but {a}·({b}·{c}) = {rhs}")]
    NonAssociative {
        a: usize,
        b: usize,
        c: usize,
        lhs: usize,
        rhs: usize,
    },

    /// Index 0 is not a two-sided identity of the table.
    #[error("no identity: element 0 is not a two-sided identity (witness element {witness})")]
    NoIdentity { witness: usize },

    /// An element has no two-sided inverse.
    #[error("no inverse: element {element} has no two-sided inverse")]
    NoInverse { element: usize },

    /// A subset is not closed under the group operations.
    #[error("not a subgroup: {reason} (witness element {witness})")]
    NotSubgroup { witness: usize, reason: String },

    /// A subgroup is not normal; names a witness pair g, k with gkg⁻¹ ∉ K.
    #[error("not normal: conjugating k={k} by g={g} leaves the subgroup")]
    NotNormal { g: usize, k: usize },

    /// A representation is missing the matrix of some element.
    #[error("missing element: no matrix supplied for element {element}")]
    MissingElement { element: usize },

    /// A matrix has the wrong shape for its representation.
    #[error("bad matrix shape for element {element}: got {rows}x{cols}, expected {dim}x{dim}")]
    BadMatrixShape {
        element: usize,
        rows: usize,
        cols: usize,
        dim: usize,
    },

    /// A representation fails the homomorphism or unitarity tolerance.
    #[error("invalid representation `{name}`: {defect} defect {value:.3e} exceeds {tol:.3e}")]
    InvalidRep {
        name: String,
        defect: String,
        value: f64,
        tol: f64,
    },

    /// The dual object candidates do not satisfy sum of squared dims = |K|.
    #[error("incomplete dual object: sum of squared dimensions is {sum}, group order is {order}")]
    IncompleteDual { sum: usize, order: usize },

    /// A candidate irrep is reducible.
    #[error("not irreducible: `{name}` has character norm {norm}")]
    NotIrreducible { name: String, norm: f64 },

    /// Two candidate irreps are equivalent.
    #[error("duplicate irrep: `{first}` and `{second}` are equivalent")]
    DuplicateIrrep { first: String, second: String },

    /// No builtin dual object is known for this subgroup.
    #[error("no builtin dual object for group `{name}` of order {order}; supply irreps explicitly")]
    UnknownDual { name: String, order: usize },

    /// A basis or matrix index is out of range.
    #[error("index out of range: {index} not below {bound} ({what})")]
    IndexOutOfRange {
        what: String,
        index: usize,
        bound: usize,
    },

    /// Two values were built over different groups.
    #[error("group mismatch: {context}")]
    GroupMismatch { context: String },

    /// An element index does not belong to the group.
    #[error("element out of range: index {index} not below group order {order}")]
    ElementOutOfRange { index: usize, order: usize },

    /// A function on Z×F was declared with unbounded support.
    #[error("infinite support: {context}")]
    InfiniteSupport { context: String },

    /// Empty family passed where at least one coefficient matrix is required.
    #[error("empty family: no coefficient matrices present")]
    EmptyFamily,

    /// An exponent outside [1, ∞] was passed to an L_p norm.
    #[error("invalid p: {p} (need 1 <= p <= inf)")]
    InvalidP { p: f64 },

    /// The least-squares reconstruction missed its certified residual bound.
    #[error("rank deficient solve: rank {rank} of {expected}, residual {residual:.3e}")]
    RankDeficient {
        rank: usize,
        expected: usize,
        residual: f64,
    },

    /// Malformed input data (JSON schema level).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
