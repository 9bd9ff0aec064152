use thiserror::Error;

/// Errors raised while building or validating combinatorial surface data.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("half-edge {0} is not paired with any edge")]
    UnpairedHalfEdge(u32),
    #[error("half-edge {0} appears in more than one edge pairing")]
    DoublyPairedHalfEdge(u32),
    #[error("half-edge {0} appears in {1} vertex rotations (expected exactly 1)")]
    BadRotationMembership(u32, usize),
    #[error("vertex {0} has valence {1}, expected 2 or 4 for a realized curve system")]
    BadValence(u32, usize),
    #[error("graph is disconnected ({0} components) where a connected graph is required")]
    Disconnected(usize),
    #[error("Euler characteristic {chi} with {boundary} boundary components is inconsistent with an orientable surface (odd parity)")]
    ChiParity { chi: i64, boundary: usize },
    #[error("curve {0} is not realized on the graph")]
    UnknownCurve(String),
    #[error("vertex {0} is not a crossing of two distinct curves")]
    NotACrossing(u32),
    #[error("crossing {vertex} does not interleave the two curves in its rotation")]
    NonTransversalCrossing { vertex: u32 },
    #[error("curve path of {curve} is not closed or not edge-consistent at step {step}")]
    BrokenCurvePath { curve: String, step: usize },
    #[error("overlay walk {0} crosses edge {1} which is not sign-positive")]
    OverlayCrossesNegativeEdge(String, u32),
    #[error("overlay walk {0} is malformed: {1}")]
    MalformedOverlay(String, String),
    #[error("wall {0} must cross exactly two edges, found {1}")]
    WallCrossingCount(String, usize),
    #[error("wall {0} is one-sided and cannot be cut along")]
    OneSidedWall(String),
    #[error("wall {0}: no consistent two-sided cut pairing exists")]
    NoCutPairing(String),
}

/// Errors raised by the twist calculus.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwistError {
    #[error("curve {0} is one-sided and cannot be twisted")]
    OneSidedTwist(String),
    #[error("curve {0} is not in the measure basis")]
    NotInBasis(String),
    #[error("twist power must be nonzero")]
    ZeroPower,
    #[error("move permutation is not a bijection of the basis")]
    NotABijection,
    #[error("basis mismatch between moves in a word")]
    BasisMismatch,
    #[error("rotation {0} is not registered on this system")]
    UnknownRotation(String),
}

/// Errors raised by certified spectral computations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectraError {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("requested gap must be positive")]
    NonPositiveGap,
    #[error("power iteration failed to reach the requested gap within {0} iterations")]
    IterationLimit(u64),
    #[error("partition does not cover the index set exactly (index {0})")]
    BadPartition(usize),
    #[error("partition conditions unverified or failed; refusing to evaluate the spectral bound")]
    ConditionsUnverified,
    #[error("fuzz generation is infeasible: {0}")]
    InfeasibleFuzz(String),
}

/// Errors raised while assembling or validating family instances.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("parameter out of range: {0}")]
    ParameterRange(String),
    #[error("template validation failed: {0}")]
    TemplateInvalid(String),
    #[error("the built system violates its contract: {0}")]
    AssemblyContract(String),
}

/// Errors raised by orientation double cover operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("curve {0} lifts to a single one-sided loop and cannot carry a lifted twist")]
    OneSidedLift(String),
    #[error("cover signature requires a closed non-orientable input")]
    NotNonOrientable,
    #[error("genus must be at least 3, got {0}")]
    GenusRange(u64),
}

/// Errors raised by the structured-text formats.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {0}: {1}")]
    Syntax(usize, String),
    #[error("unsupported format version: {0}")]
    Version(String),
    #[error("{0}")]
    Structure(String),
}
