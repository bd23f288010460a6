use thiserror::Error;

/// Errors raised by the library.
///
/// `Fail` is the only retry-safe variant: it reports that a randomized
/// attempt could not certify its output. Every other variant is a property
/// of the input and will recur on retry.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is outside the supported range [2, 2^32)")]
    ModulusOutOfRange(u64),
    #[error("field F_{p} is too small: {needed} distinct points are required")]
    FieldTooSmall { p: u64, needed: u64 },
    #[error("modulus mismatch: F_{left} vs F_{right}")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("row {0} is zero")]
    ZeroRow(usize),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("randomized attempt failed: {0}")]
    Fail(#[from] Failure),
}

/// Certification failures of the Las Vegas algorithms.
///
/// A failure never means the output was wrong; it means the random choices
/// did not allow the output to be certified. Retrying with fresh randomness
/// is always sound.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Failure {
    /// The leading square block is singular at the expansion point; the
    /// input probably does not have full column rank.
    #[error("leading block is singular at the expansion point (rank is probably deficient)")]
    SingularAtZero,
    /// The conditioned leading block is singular at a random point.
    #[error("conditioned leading block is singular at a random point")]
    SingularLeadingBlock,
    /// Fewer candidate vectors annihilate the input than were selected.
    #[error("{certified} of {candidates} candidate vectors annihilate the input")]
    KappaMismatch { candidates: usize, certified: usize },
    /// The certified vectors do not form a row-reduced matrix.
    #[error("candidate vectors are not row-reduced (minimality not certified)")]
    NotRowReduced,
    /// A halving pass returned fewer than half of the remaining vectors.
    #[error("halving pass found {kappa} vectors for {remaining} remaining")]
    StalledHalving { remaining: usize, kappa: usize },
    /// A block of the general driver yielded fewer low-degree vectors than
    /// its shape guarantees for a full-column-rank input.
    #[error("block produced {found} low-degree vectors, {needed} are guaranteed")]
    InsufficientVectors { needed: usize, found: usize },
    /// No nonsingular column selection was found at a random point.
    #[error("could not select independent columns at a random point")]
    DependentColumns,
    /// The assembled basis does not annihilate the input: the rank candidate
    /// was too small.
    #[error("assembled basis does not annihilate the input (rank candidate too small)")]
    RankCandidateWrong,
    /// The assembled basis has lower evaluation rank than its row count.
    #[error("assembled basis has evaluation rank {found}, expected {expected}")]
    RankDeficientBasis { expected: usize, found: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
