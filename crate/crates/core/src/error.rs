//! Error types shared across the crate.

use thiserror::Error;

/// Unified error type for catalog lookups, oscillator realizations and the
/// numerical back ends.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The deformed-oscillator realization does not exist for the requested
    /// algebra parameters (for example the linear case with a non-positive
    /// discriminant).
    #[error("realization undefined: {0}")]
    RealizationUndefined(String),

    /// The quadratic-case weight was evaluated at one of its poles.
    #[error("weight function has a pole at t = {t}")]
    RhoPole { t: f64 },

    /// The forward recurrence for the structure function hit a vanishing
    /// denominator at step n.
    #[error("structure recurrence singular at n = {n}")]
    RecurrenceSingular { n: u32 },

    /// A finite-dimensional representation was requested but the structure
    /// function is not strictly positive inside the window.
    #[error("non-unitary representation: phi({x}) = {phi}")]
    NonUnitary { x: u32, phi: f64 },

    /// An iterative root search failed to converge or found no admissible root.
    #[error("root finding failed: {0}")]
    RootFindFailure(String),

    /// The potential id is not in the catalog.
    #[error("unknown potential: {0}")]
    UnknownPotential(String),

    /// The catalog entry exists but carries no finite cubic symmetry algebra.
    #[error("no finite cubic algebra for potential: {0}")]
    NoFiniteCubicAlgebra(String),

    /// The catalog entry exists but lacks the requested piece of data.
    #[error("potential {id} has no catalogued {what}")]
    NotCatalogued { id: String, what: String },

    /// The potential was evaluated at a singular point.
    #[error("potential singular at ({x}, {y})")]
    SingularPoint { x: f64, y: f64 },

    /// Grid refinement stopped before the eigenvalues settled.
    #[error("grid not converged at n = {n}: residual delta = {delta}")]
    GridNotConverged { n: usize, delta: f64 },

    /// The potential has non-integrable singularities inside the box and
    /// cannot be resolved by the uniform grid in the requested mode.
    #[error("potential {0} is singular inside the integration box")]
    SingularPotential(String),

    /// The requested grid exceeds the hard size cap.
    #[error("grid size {requested} exceeds the cap {max}")]
    GridTooLarge { requested: usize, max: usize },

    /// The raising operator is undefined on the requested state.
    #[error("raising undefined: {0}")]
    RaisingUndefined(String),

    /// No supersymmetric factorization is catalogued for the potential.
    #[error("no supersymmetric factorization catalogued for: {0}")]
    NotSusyCatalogued(String),

    /// The spectral basis is too small for the requested operation.
    #[error("basis size {n} below the minimum {min}")]
    BasisTooSmall { n: usize, min: usize },

    /// A PT eigenvector is self-orthogonal under the indefinite pairing and
    /// cannot be normalized.
    #[error("eigenvector {index} is self-orthogonal")]
    SelfOrthogonal { index: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
