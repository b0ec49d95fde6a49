//! Construction of positive operator-valued measures (POVMs) from orthonormal
//! matrix bases, with a specialization to irreducible spherical tensor
//! operators on the permutationally symmetric subspace of `N` qubits.
//!
//! The crate is organised bottom-up:
//!
//! - [`matcore`]: dense complex matrices, row-stacking vectorization, partial
//!   transpose and a Jacobi Hermitian eigensolver.
//! - [`angmom`]: exact Clebsch–Gordan coefficients and Wigner rotation matrices.
//! - [`tensors`]: spherical tensor operators `τ^k_q` and Fano parameters.
//! - [`povm`]: POVMs from orthonormal bases, and the spherical tensor POVM.
//! - [`dilate`]: embedding into the full `2^N`-dimensional qubit space.
//! - [`measure`]: Born probabilities, post-measurement states, sampling,
//!   Pauli decomposition and the PPT entanglement test.

pub mod angmom;
pub mod dilate;
pub mod error;
pub mod matcore;
pub mod measure;
pub mod povm;
pub mod random;
pub mod tensors;
pub mod tol;

pub use angmom::{clebsch_gordan, wigner_big_d, wigner_small_d, ExactCoeff, HalfInt};
pub use dilate::{cg_unitary_two_qubits, dicke_isometry, CgUnitary, DickeIsometry};
pub use error::{Error, Result};
pub use matcore::{CMatrix, Complex, EigenResult};
pub use measure::{DensityMatrix, PauliDecomposition, PptResult, PureState};
pub use povm::{BasisSet, PovmElement, PovmSet};
pub use tensors::{FanoParameters, SphericalTensor};
