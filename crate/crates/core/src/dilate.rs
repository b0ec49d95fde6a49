//! Embedding of symmetric-subspace POVMs into the `2^N`-dimensional space of
//! `N` qubits.
//!
//! Computational basis states are ordered with the first qubit most
//! significant and bit `0` meaning spin up, so index 0 is `|↑↑…↑⟩`.

use crate::angmom::{clebsch_gordan, HalfInt};
use crate::error::{Error, Result};
use crate::matcore::{CMatrix, Complex};
use crate::povm::{PovmElement, PovmSet};

/// Isometry `V` (`2^N × (N+1)`) whose columns are the Dicke states
/// `|j m⟩`, `j = N/2`, ordered `m = +j … −j`.
#[derive(Clone, Debug)]
pub struct DickeIsometry {
    n_qubits: usize,
    v: CMatrix,
}

impl DickeIsometry {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.v
    }

    /// `j = N/2`.
    pub fn spin(&self) -> HalfInt {
        HalfInt::from_twice(self.n_qubits as i64)
    }

    pub fn full_dim(&self) -> usize {
        self.v.rows()
    }

    pub fn sym_dim(&self) -> usize {
        self.v.cols()
    }

    /// `V·V†`, the projector onto the symmetric subspace.
    pub fn symmetric_projector(&self) -> CMatrix {
        &self.v * &self.v.dagger()
    }
}

pub const MAX_QUBITS: usize = 16;

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Dicke isometry for `n` qubits: column `c` (`m = j − c`) is the uniform
/// superposition of the basis states with `c` spins down.
pub fn dicke_isometry(n: usize) -> Result<DickeIsometry> {
    if !(1..=MAX_QUBITS).contains(&n) {
        return Err(Error::InvalidDimension {
            op: "dicke_isometry",
            detail: format!("{n} qubits (supported: 1..={MAX_QUBITS})"),
        });
    }
    let full = 1usize << n;
    let mut v = CMatrix::zeros(full, n + 1);
    for idx in 0..full {
        let downs = idx.count_ones() as usize;
        v[(idx, downs)] = Complex::new(1.0 / binomial(n, downs).sqrt(), 0.0);
    }
    Ok(DickeIsometry { n_qubits: n, v })
}

/// Real orthogonal matrix taking two-qubit computational amplitudes to
/// coupled amplitudes; rows are `|1 1⟩, |1 0⟩, |1 −1⟩, |0 0⟩`.
#[derive(Clone, Debug)]
pub struct CgUnitary {
    u: CMatrix,
}

impl CgUnitary {
    pub fn matrix(&self) -> &CMatrix {
        &self.u
    }

    /// Computational-basis form of a spin-1 operator `E`, padded by a zero
    /// singlet block: `U†·(E ⊕ 0)·U`.
    ///
    /// With rows of `U` holding the coupled states this is the operator
    /// `V·E·V†`; applying `U(E⊕0)U†` instead would act in the coupled basis.
    pub fn dilate(&self, e: &CMatrix) -> Result<CMatrix> {
        if e.shape() != (3, 3) {
            return Err(Error::InvalidDimension {
                op: "CgUnitary::dilate",
                detail: format!("expected a 3x3 operator, got {}x{}", e.rows(), e.cols()),
            });
        }
        let padded = e.direct_sum(&CMatrix::zeros(1, 1));
        Ok(&(&self.u.dagger() * &padded) * &self.u)
    }
}

/// The 4×4 two-qubit Clebsch–Gordan matrix, filled from exact coefficients.
pub fn cg_unitary_two_qubits() -> CgUnitary {
    let half = HalfInt::HALF;
    let spin = |bit: usize| if bit == 0 { half } else { -half };
    let coupled = [(2, 2), (2, 0), (2, -2), (0, 0)]; // (2J, 2M)
    let mut u = CMatrix::zeros(4, 4);
    for (row, &(jt, mt)) in coupled.iter().enumerate() {
        for col in 0..4 {
            let (m1, m2) = (spin(col >> 1), spin(col & 1));
            let c = clebsch_gordan(half, half, HalfInt::from_twice(jt), m1, m2, HalfInt::from_twice(mt))
                .expect("valid spin-1/2 projections");
            u[(row, col)] = Complex::new(c.to_f64(), 0.0);
        }
    }
    CgUnitary { u }
}

/// `ε = V·E·V†`.
pub fn dilate_element(e: &PovmElement, iso: &DickeIsometry) -> Result<PovmElement> {
    if e.mat.shape() != (iso.sym_dim(), iso.sym_dim()) {
        return Err(Error::InvalidDimension {
            op: "dilate_element",
            detail: format!(
                "{}x{} element for a {}-qubit isometry (needs {})",
                e.mat.rows(),
                e.mat.cols(),
                iso.n_qubits(),
                iso.sym_dim()
            ),
        });
    }
    let v = iso.matrix();
    Ok(PovmElement {
        label: e.label.clone(),
        mat: &(v * &e.mat) * &v.dagger(),
        multiplicity: e.multiplicity,
        members: e.members.clone(),
    })
}

/// Dilates every element. The result sums to `V·V†`, not to the identity.
pub fn dilate_set(set: &PovmSet, iso: &DickeIsometry) -> Result<PovmSet> {
    let elements = set
        .elements
        .iter()
        .map(|e| dilate_element(e, iso))
        .collect::<Result<Vec<_>>>()?;
    Ok(PovmSet {
        dim: iso.full_dim(),
        elements,
    })
}

/// Unnormalized projection `V·V†·ψ` of an amplitude vector onto the symmetric subspace.
pub fn symmetric_component(psi: &[Complex], iso: &DickeIsometry) -> Result<Vec<Complex>> {
    if psi.len() != iso.full_dim() {
        return Err(Error::InvalidDimension {
            op: "symmetric_component",
            detail: format!("{} amplitudes for {} qubits", psi.len(), iso.n_qubits()),
        });
    }
    let v = iso.matrix();
    let coords = &v.dagger() * &CMatrix::column(psi);
    Ok((v * &coords).into_vec())
}

/// Permutation matrix exchanging qubits `a` and `b` of an `n`-qubit register.
pub fn qubit_swap(n: usize, a: usize, b: usize) -> CMatrix {
    let full = 1usize << n;
    let (sa, sb) = (n - 1 - a, n - 1 - b);
    let mut p = CMatrix::zeros(full, full);
    for idx in 0..full {
        let (ba, bb) = ((idx >> sa) & 1, (idx >> sb) & 1);
        let swapped = (idx & !(1 << sa) & !(1 << sb)) | (bb << sa) | (ba << sb);
        p[(swapped, idx)] = Complex::new(1.0, 0.0);
    }
    p
}
