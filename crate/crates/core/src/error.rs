//! Error type shared by all modules.

use alloc::boxed::Box;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Metric determinant below the invertibility threshold.
    #[error("singular metric: |det| = {det:.3e} below threshold {threshold:.3e}")]
    SingularMetric { det: f64, threshold: f64 },

    /// Input matrix fails the symmetry tolerance.
    #[error("metric not symmetric: max |g[i][j] - g[j][i]| = {asym:.3e}")]
    NotSymmetric { asym: f64 },

    /// Eigenvalue signature is not (-,+,+,+).
    #[error("metric signature is not (-,+,+,+): {neg} negative / {pos} positive eigenvalues")]
    WrongSignature { neg: usize, pos: usize },

    /// The conformal factor k/(k - Phi) blew up: Phi reached the shell value k.
    #[error("conformal dual singular: |k - Phi| = {gap:.3e} within guard {guard:.3e}")]
    DualSingularity { gap: f64, guard: f64 },

    /// Vector has non-negative norm where a timelike one is required.
    #[error("vector is not timelike: v.v = {norm:.6e}")]
    NotTimelike { norm: f64 },

    /// k = U (U.b) + b vanished, which happens when b is parallel to U.
    #[error("degenerate gauge projection vector: |k| = {knorm:.3e} with |b| = {bnorm:.3e}")]
    DegenerateK { knorm: f64, bnorm: f64 },

    /// U.U = -1 violated beyond tolerance.
    #[error("unit timelike normalization violated: U.U + 1 = {excess:.3e}")]
    NormViolation { excess: f64 },

    /// Discriminant of the p5 quadratic went negative.
    #[error("complex p5 root: discriminant 1 - 2 g55 sinh(2 phi) = {disc:.3e}")]
    ComplexRoot { disc: f64 },

    /// The plus branch of the p5 solution has no finite g55 -> 0 limit.
    #[error("plus branch of p5 diverges at g55 = 0")]
    DivergentBranch,

    /// Adaptive step controller could not satisfy the tolerance above h_min.
    #[error("adaptive step fell below h_min = {h_min:.3e} at tau = {tau:.6}")]
    StepFailure { tau: f64, h_min: f64 },

    /// Trajectory diagnostics need a minimum number of samples.
    #[error("trajectory too short: {n} samples, need at least {need}")]
    TooFewSamples { n: usize, need: usize },

    /// Trajectory diagnostics require uniform sampling in tau.
    #[error("trajectory samples are not uniformly spaced in tau")]
    NonUniformSamples,

    /// Operation only defined for the pure metric Hamiltonian.
    #[error("operation requires the pure metric Hamiltonian (no potential terms)")]
    WrongKind,

    /// Lattice site too close to the grid boundary for the requested stencil.
    #[error("site {site:?} is within {margin} sites of the grid boundary")]
    BoundarySite { site: [usize; 4], margin: usize },

    /// A quantity that must be real after combining i-factors retained an
    /// imaginary residue above tolerance.
    #[error("imaginary residue {im:.3e} exceeds realness tolerance {tol:.1e}")]
    ComplexResidue { im: f64, tol: f64 },

    /// Orbit integration terminated early; `cause` names the failing invariant.
    #[error("integration aborted at tau = {tau:.6}: {cause}")]
    Aborted { tau: f64, cause: Box<Error> },
}

impl Error {
    /// Wrap an error raised mid-integration with the world time it occurred at.
    pub fn aborted_at(tau: f64, cause: Error) -> Self {
        Error::Aborted {
            tau,
            cause: Box::new(cause),
        }
    }
}
