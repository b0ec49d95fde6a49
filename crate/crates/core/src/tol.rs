//! Numerical tolerances shared across the crate.

/// Default absolute tolerance for quantities that are exact in real
/// arithmetic (Hermiticity, trace, completeness, PSD floors).
pub const EPS: f64 = 1e-10;

/// Tolerance on `V·diag(λ)·V† − H` (Frobenius) for the eigensolver.
pub const EIG_RECONSTRUCTION: f64 = 1e-9;

/// Pauli coefficients below this magnitude are dropped from a decomposition.
pub const PAULI_ZERO: f64 = 1e-13;
