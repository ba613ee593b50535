//! Default tolerances shared across modules.

/// Absolute max-entry deviation allowed between `A` and `A†`.
pub const HERMITICITY: f64 = 1e-12;
/// Relative eigenvalue threshold for numerical rank.
pub const RANK_REL: f64 = 1e-8;
/// Unit-norm tolerance for fiducial vectors.
pub const UNIT_NORM: f64 = 1e-12;
/// Idempotence tolerance for projectors in a SIC ensemble.
pub const PROJECTOR: f64 = 1e-10;
pub const UNITARY: f64 = 1e-12;
pub const ORTHONORMAL: f64 = 1e-10;
/// Smallest Gram eigenvalue (relative to the largest) for a spanning set.
pub const POSITIVE_DEFINITE: f64 = 1e-10;
/// Eigenvalue-cluster spread for the rank-1-plus-identity shape test.
pub const SHAPE: f64 = 1e-8;
pub const STOCHASTIC: f64 = 1e-9;
pub const STRUCTURE: f64 = 1e-9;
pub const SIC: f64 = 1e-8;
pub const GRAD: f64 = 1e-12;
pub const MAX_ITERS: usize = 50_000;
/// Frame-potential gap below which a solver run counts as converged.
pub const GAP: f64 = 1e-10;
/// Entries with magnitude below this are dropped from sparse exports.
pub const SPARSE_EXPORT: f64 = 1e-12;
/// Factor applied to input tolerances for derived post-assertions.
pub const POST_FACTOR: f64 = 10.0;
