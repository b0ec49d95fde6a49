//! Irreducible spherical tensor operators `τ^k_q` for spin `j` and the Fano
//! parametrization of states on the `(2j+1)`-dimensional spin space.
//!
//! Matrix elements are `⟨j m'|τ^k_q|j m⟩ = √(2k+1)·C(j k j; m q m')` with rows
//! indexed by `m'` and columns by `m`, both running from `+j` down to `−j`.
//! With this normalization `Tr(τ^{k†}_q τ^{k'}_{q'}) = (2j+1)·δ_{kk'}δ_{qq'}` and
//! `τ^0_0` is the identity.

use crate::angmom::{clebsch_gordan, wigner_big_d, HalfInt};
use crate::error::{Error, Result};
use crate::matcore::{hermitian_eigen, CMatrix, Complex};
use crate::tol;

#[derive(Clone, Debug)]
pub struct SphericalTensor {
    j: HalfInt,
    k: u32,
    q: i32,
    mat: CMatrix,
}

impl SphericalTensor {
    pub fn j(&self) -> HalfInt {
        self.j
    }

    pub fn rank(&self) -> u32 {
        self.k
    }

    pub fn projection(&self) -> i32 {
        self.q
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    /// Stable label `k=<k>,q=<signed q>`, e.g. `k=2,q=-1` or `k=1,q=+1`.
    pub fn label(&self) -> String {
        tensor_label(self.k, self.q)
    }
}

pub fn tensor_label(k: u32, q: i32) -> String {
    if q > 0 {
        format!("k={k},q=+{q}")
    } else {
        format!("k={k},q={q}")
    }
}

/// Position of `(k, q)` in canonical order (k ascending, then q from −k to k).
#[inline]
pub fn canonical_index(k: u32, q: i32) -> usize {
    (k * k) as usize + (q + k as i32) as usize
}

fn check_magnitude(j: HalfInt) -> Result<()> {
    if j.twice() < 0 {
        return Err(Error::MalformedAngularMomentum(format!("negative spin j={j}")));
    }
    Ok(())
}

/// The spherical tensor operator `τ^k_q` for spin `j`.
pub fn tau(j: HalfInt, k: i64, q: i64) -> Result<SphericalTensor> {
    check_magnitude(j)?;
    if k < 0 || k > j.twice() || q.abs() > k {
        return Err(Error::TensorIndex { j: j.to_string(), k, q });
    }
    let dim = j.multiplicity();
    let kk = HalfInt::integer(k);
    let qq = HalfInt::integer(q);
    let weight = ((2 * k + 1) as f64).sqrt();
    let mut mat = CMatrix::zeros(dim, dim);
    for (c, m) in j.projections().enumerate() {
        let mp = m + qq;
        if mp.abs() > j {
            continue;
        }
        let r = ((j.twice() - mp.twice()) / 2) as usize;
        let coeff = clebsch_gordan(j, kk, j, m, qq, mp)?;
        mat[(r, c)] = Complex::new(weight * coeff.to_f64(), 0.0);
    }
    Ok(SphericalTensor {
        j,
        k: k as u32,
        q: q as i32,
        mat,
    })
}

/// All `(2j+1)²` operators in canonical order.
pub fn tensor_basis(j: HalfInt) -> Result<Vec<SphericalTensor>> {
    check_magnitude(j)?;
    let max_k = j.twice();
    let mut out = Vec::with_capacity(j.multiplicity().pow(2));
    for k in 0..=max_k {
        for q in -k..=k {
            out.push(tau(j, k, q)?);
        }
    }
    Ok(out)
}

/// Fano statistical tensors `t^k_q = Tr(ρ·τ^k_q)`, stored in canonical order.
#[derive(Clone, Debug, PartialEq)]
pub struct FanoParameters {
    j: HalfInt,
    values: Vec<Complex>,
}

impl FanoParameters {
    pub fn zeros(j: HalfInt) -> Self {
        FanoParameters {
            j,
            values: vec![Complex::new(0.0, 0.0); j.multiplicity().pow(2)],
        }
    }

    /// Parameters of the maximally mixed state: only `t^0_0 = 1`.
    pub fn maximally_mixed(j: HalfInt) -> Self {
        let mut t = Self::zeros(j);
        t.set(0, 0, Complex::new(1.0, 0.0));
        t
    }

    pub fn j(&self) -> HalfInt {
        self.j
    }

    pub fn max_rank(&self) -> u32 {
        self.j.twice() as u32
    }

    /// Panics if `(k, q)` is out of range for this spin.
    pub fn get(&self, k: u32, q: i32) -> Complex {
        assert!(k <= self.max_rank() && q.unsigned_abs() <= k, "t^{k}_{q} out of range");
        self.values[canonical_index(k, q)]
    }

    /// Panics if `(k, q)` is out of range for this spin.
    pub fn set(&mut self, k: u32, q: i32, value: Complex) {
        assert!(k <= self.max_rank() && q.unsigned_abs() <= k, "t^{k}_{q} out of range");
        self.values[canonical_index(k, q)] = value;
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, i32, Complex)> + '_ {
        (0..=self.max_rank())
            .flat_map(|k| (-(k as i32)..=k as i32).map(move |q| (k, q)))
            .map(|(k, q)| (k, q, self.values[canonical_index(k, q)]))
    }

    /// `Σ_q |t^k_q|²`, invariant under rotations.
    pub fn rank_norm_sqr(&self, k: u32) -> f64 {
        let k = k as i32;
        (-k..=k).map(|q| self.get(k as u32, q).norm_sqr()).sum()
    }

    /// Largest violation of `conj(t^k_q) = (−1)^q t^k_{−q}`.
    pub fn conjugation_defect(&self) -> f64 {
        self.iter()
            .map(|(k, q, t)| {
                let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
                (t.conj() - self.get(k, -q) * sign).norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &FanoParameters) -> f64 {
        assert_eq!(self.j, other.j, "spin mismatch");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn spin_of_dimension(op: &'static str, m: &CMatrix) -> Result<HalfInt> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            op,
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if m.rows() == 0 {
        return Err(Error::InvalidDimension {
            op,
            detail: "empty matrix".into(),
        });
    }
    Ok(HalfInt::from_twice(m.rows() as i64 - 1))
}

/// `t^k_q = Tr(ρ·τ^k_q)` for every `(k, q)`; `j` is read off `dim = 2j+1`.
pub fn fano_extract(rho: &CMatrix) -> Result<FanoParameters> {
    let j = spin_of_dimension("fano_extract", rho)?;
    let n = rho.rows();
    let values = tensor_basis(j)?
        .iter()
        .map(|t| {
            let tau = t.matrix();
            let mut acc = Complex::new(0.0, 0.0);
            for a in 0..n {
                for b in 0..n {
                    acc += rho[(a, b)] * tau[(b, a)];
                }
            }
            acc
        })
        .collect();
    Ok(FanoParameters { j, values })
}

/// Result of [`fano_reconstruct`]. The matrix is always returned; `physical`
/// is false when it is not Hermitian or has an eigenvalue below `−EPS`.
#[derive(Clone, Debug)]
pub struct FanoReconstruction {
    pub matrix: CMatrix,
    /// `None` when the matrix is not Hermitian.
    pub min_eigenvalue: Option<f64>,
    pub physical: bool,
}

/// `ρ = (2j+1)^{-1} Σ_{k,q} t^k_q τ^{k†}_q`.
pub fn fano_reconstruct(t: &FanoParameters) -> Result<FanoReconstruction> {
    let dim = t.j.multiplicity();
    let mut rho = CMatrix::zeros(dim, dim);
    for tau in tensor_basis(t.j)? {
        let coeff = t.get(tau.rank(), tau.projection());
        if coeff == Complex::new(0.0, 0.0) {
            continue;
        }
        rho = &rho + &tau.matrix().dagger().scale(coeff);
    }
    let matrix = rho.scale_real(1.0 / dim as f64);
    let min_eigenvalue = hermitian_eigen(&matrix).ok().map(|e| e.min_eigenvalue());
    let physical = min_eigenvalue.is_some_and(|l| l >= -tol::EPS);
    Ok(FanoReconstruction {
        matrix,
        min_eigenvalue,
        physical,
    })
}

/// Parameters of the actively rotated state `D(R)·ρ·D(R)†`, where `R` has
/// Euler angles `(α, β, γ)` in the z-y-z convention.
///
/// Each rank transforms on its own: `t'^k_q = Σ_{q'} conj(D^k_{q q'}(R))·t^k_{q'}`,
/// equivalently `Σ_{q'} D^k_{q' q}(R⁻¹)·t^k_{q'}`.
pub fn rotate_parameters(t: &FanoParameters, alpha: f64, beta: f64, gamma: f64) -> FanoParameters {
    let mut out = FanoParameters::zeros(t.j);
    for k in 0..=t.max_rank() {
        let d = wigner_big_d(HalfInt::integer(k as i64), alpha, beta, gamma);
        let ki = k as i32;
        for (row, q) in (-ki..=ki).rev().enumerate() {
            let mut acc = Complex::new(0.0, 0.0);
            for (col, qp) in (-ki..=ki).rev().enumerate() {
                acc += d[(row, col)].conj() * t.get(k, qp);
            }
            out.set(k, q, acc);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(twice: i64) -> HalfInt {
        HalfInt::from_twice(twice)
    }

    fn re(x: f64) -> Complex {
        Complex::new(x, 0.0)
    }

    #[test]
    fn tau_zero_is_identity() {
        for jt in 1..=3 {
            let t = tau(h(jt), 0, 0).unwrap();
            assert!(t.matrix().approx_eq(&CMatrix::identity(jt as usize + 1), 1e-15));
        }
    }

    #[test]
    fn tau_spin_one_vector_polarization() {
        let t = tau(h(2), 1, 0).unwrap();
        let s = 1.5f64.sqrt();
        assert!(t.matrix().approx_eq(&CMatrix::from_diag(&[s, 0.0, -s]), 1e-15));
        // oracle: τ τ† / 9 = diag(1/6, 0, 1/6)
        let e = (t.matrix() * &t.matrix().dagger()).scale_real(1.0 / 9.0);
        assert!(e.approx_eq(&CMatrix::from_diag(&[1. / 6., 0., 1. / 6.]), 1e-15));
    }

    #[test]
    fn tau_spin_one_rank_two_top() {
        let t = tau(h(2), 2, 2).unwrap();
        let m = t.matrix();
        assert!((m[(0, 2)] - re(3f64.sqrt())).norm() < 1e-15);
        assert!((m.frobenius_norm() - 3f64.sqrt()).abs() < 1e-15);
        let e = (m * &m.dagger()).scale_real(1.0 / 9.0);
        assert!(e.approx_eq(&CMatrix::from_diag(&[1. / 3., 0., 0.]), 1e-15));
    }

    #[test]
    fn tau_out_of_range() {
        assert!(tau(h(2), 3, 0).is_err());
        assert!(tau(h(2), 1, 2).is_err());
        assert!(tau(h(1), -1, 0).is_err());
    }

    #[test]
    fn basis_counts_and_labels() {
        assert_eq!(tensor_basis(h(1)).unwrap().len(), 4);
        let b = tensor_basis(h(2)).unwrap();
        assert_eq!(b.len(), 9);
        assert_eq!(b.iter().filter(|t| t.matrix().trace().norm() < 1e-14).count(), 8);
        let labels: Vec<String> = b.iter().map(|t| t.label()).collect();
        assert_eq!(labels[0], "k=0,q=0");
        assert_eq!(labels[1], "k=1,q=-1");
        assert_eq!(labels[3], "k=1,q=+1");
        assert_eq!(labels[8], "k=2,q=+2");
    }

    #[test]
    fn spin_one_orthogonality_all_pairs() {
        let b = tensor_basis(h(2)).unwrap();
        for (x, a) in b.iter().enumerate() {
            for (y, c) in b.iter().enumerate() {
                let ip = a.matrix().trace_inner(c.matrix()).unwrap();
                let expected = if x == y { 3.0 } else { 0.0 };
                assert!((ip - re(expected)).norm() < 1e-14, "{} {}", a.label(), c.label());
            }
        }
    }

    #[test]
    fn extract_maximally_mixed() {
        for jt in 1..=4 {
            let n = jt as usize + 1;
            let rho = CMatrix::identity(n).scale_real(1.0 / n as f64);
            let t = fano_extract(&rho).unwrap();
            assert!(t.max_abs_diff(&FanoParameters::maximally_mixed(h(jt))) < 1e-15);
        }
    }

    #[test]
    fn extract_spin_one_up_state() {
        let t = fano_extract(&CMatrix::from_diag(&[1.0, 0.0, 0.0])).unwrap();
        let mut expected = FanoParameters::maximally_mixed(h(2));
        expected.set(1, 0, re(1.5f64.sqrt()));
        expected.set(2, 0, re(0.5f64.sqrt()));
        assert!(t.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn extract_rejects_non_square() {
        assert!(fano_extract(&CMatrix::zeros(2, 3)).is_err());
        assert!(fano_extract(&CMatrix::zeros(0, 0)).is_err());
    }

    #[test]
    fn reconstruct_maximally_mixed() {
        let r = fano_reconstruct(&FanoParameters::maximally_mixed(h(3))).unwrap();
        assert!(r.matrix.approx_eq(&CMatrix::identity(4).scale_real(0.25), 1e-15));
        assert!(r.physical);
    }

    #[test]
    fn reconstruct_flags_unphysical() {
        let mut t = FanoParameters::maximally_mixed(h(2));
        t.set(2, 0, re(5.0));
        let r = fano_reconstruct(&t).unwrap();
        assert!(!r.physical);
        assert!(r.min_eigenvalue.unwrap() < 0.0);
        assert!((r.matrix.trace() - re(1.0)).norm() < 1e-14);
    }

    #[test]
    fn rotation_identity_and_quarter_turn() {
        let mut t = FanoParameters::maximally_mixed(h(2));
        t.set(1, 0, re(0.4));
        t.set(2, 2, Complex::new(0.1, 0.2));
        t.set(2, -2, Complex::new(0.1, -0.2));
        assert!(rotate_parameters(&t, 0.0, 0.0, 0.0).max_abs_diff(&t) < 1e-15);
        // a rotation about z only multiplies t^k_q by a phase e^{iq(α+γ)}
        let r = rotate_parameters(&t, 0.3, 0.0, 0.2);
        let expected = t.get(2, 2) * Complex::from_polar(1.0, 2.0 * 0.5);
        assert!((r.get(2, 2) - expected).norm() < 1e-15);
    }
}
