//! Measurement: Born probabilities, post-measurement states, seeded outcome
//! sampling, Pauli-string decomposition and the PPT entanglement test.
//!
//! The post-measurement update uses the POVM element itself as the Kraus
//! operator, `ρ → EρE / Tr(EρE)`. Outcome probabilities are the standard
//! `p = Tr(Eρ)`; the update weight `Tr(EρE)` is reported alongside.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::matcore::{hermitian_eigen, CMatrix, Complex};
use crate::povm::{PovmElement, PovmSet};
use crate::tol;

/// A validated density matrix: Hermitian, unit trace, eigenvalues ≥ −eps.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: CMatrix,
}

impl DensityMatrix {
    pub fn new(mat: CMatrix) -> Result<Self> {
        Self::new_with_eps(mat, tol::EPS)
    }

    pub fn new_with_eps(mat: CMatrix, eps: f64) -> Result<Self> {
        if !mat.is_square() || mat.rows() == 0 {
            return Err(Error::InvalidState(format!(
                "density matrix must be square and non-empty, got {}x{}",
                mat.rows(),
                mat.cols()
            )));
        }
        let defect = mat.hermiticity_defect();
        if defect > eps {
            return Err(Error::InvalidState(format!("not Hermitian (defect {defect:.3e})")));
        }
        let tr = mat.trace();
        if (tr - Complex::new(1.0, 0.0)).norm() > eps {
            return Err(Error::InvalidState(format!("trace is {:.12} (expected 1)", tr.re)));
        }
        let n = mat.rows();
        let herm = CMatrix::from_fn(n, n, |r, c| (mat[(r, c)] + mat[(c, r)].conj()) * 0.5);
        let min = hermitian_eigen(&herm)?.min_eigenvalue();
        if min < -eps {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(DensityMatrix { mat: herm })
    }

    pub fn maximally_mixed(n: usize) -> Self {
        DensityMatrix {
            mat: CMatrix::identity(n).scale_real(1.0 / n as f64),
        }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        let v = CMatrix::column(psi.amplitudes());
        DensityMatrix { mat: &v * &v.dagger() }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }
}

/// A unit-norm amplitude vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amps: Vec<Complex>,
}

impl PureState {
    pub fn new(amps: Vec<Complex>) -> Result<Self> {
        Self::new_with_eps(amps, tol::EPS)
    }

    pub fn new_with_eps(amps: Vec<Complex>, eps: f64) -> Result<Self> {
        let norm_sqr: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if amps.is_empty() || (norm_sqr - 1.0).abs() > eps {
            return Err(Error::InvalidState(format!(
                "state norm² is {norm_sqr:.12} (expected 1)"
            )));
        }
        Ok(PureState { amps })
    }

    /// Rescales to unit norm; errors on a (numerically) zero vector.
    pub fn normalized(amps: Vec<Complex>) -> Result<Self> {
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm.is_nan() || norm <= f64::MIN_POSITIVE {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        Ok(PureState {
            amps: amps.into_iter().map(|z| z / norm).collect(),
        })
    }

    pub fn amplitudes(&self) -> &[Complex] {
        &self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }
}

fn check_dims(op: &'static str, state_dim: usize, element_dim: usize) -> Result<()> {
    if state_dim != element_dim {
        return Err(Error::InvalidDimension {
            op,
            detail: format!("state of dimension {state_dim}, POVM of dimension {element_dim}"),
        });
    }
    Ok(())
}

fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex {
    let n = a.rows();
    let mut acc = Complex::new(0.0, 0.0);
    for r in 0..n {
        for c in 0..n {
            acc += a[(r, c)] * b[(c, r)];
        }
    }
    acc
}

/// `Tr(E·ρ)` for every element, with its label.
pub fn born_probabilities(rho: &DensityMatrix, set: &PovmSet) -> Result<Vec<(String, f64)>> {
    check_dims("born_probabilities", rho.dim(), set.dim)?;
    Ok(set
        .elements
        .iter()
        .map(|e| (e.label.clone(), trace_product(&e.mat, rho.matrix()).re))
        .collect())
}

/// `Tr(E·ρ·E)`, the normalization of the post-measurement update.
pub fn update_weight(rho: &DensityMatrix, e: &PovmElement) -> Result<f64> {
    check_dims("update_weight", rho.dim(), e.dim())?;
    let ere = &(&e.mat * rho.matrix()) * &e.mat;
    Ok(ere.trace().re)
}

/// `EρE / Tr(EρE)`.
pub fn post_state(rho: &DensityMatrix, e: &PovmElement) -> Result<DensityMatrix> {
    check_dims("post_state", rho.dim(), e.dim())?;
    let ere = &(&e.mat * rho.matrix()) * &e.mat;
    let weight = ere.trace().re;
    if weight.is_nan() || weight <= tol::EPS {
        return Err(Error::ZeroProbability { weight });
    }
    let n = ere.rows();
    let mat = CMatrix::from_fn(n, n, |r, c| (ere[(r, c)] + ere[(c, r)].conj()) * (0.5 / weight));
    DensityMatrix::new(mat)
}

/// `E|ψ⟩ / ‖E|ψ⟩‖`; errors when `⟨ψ|E|ψ⟩ ≤ EPS`.
pub fn post_state_pure(psi: &PureState, e: &PovmElement) -> Result<PureState> {
    check_dims("post_state_pure", psi.dim(), e.dim())?;
    let v = CMatrix::column(psi.amplitudes());
    let ev = &e.mat * &v;
    let expectation = (&v.dagger() * &ev)[(0, 0)].re;
    if expectation.is_nan() || expectation <= tol::EPS {
        return Err(Error::ZeroProbability { weight: expectation });
    }
    PureState::normalized(ev.into_vec())
}

/// One simulated measurement outcome.
#[derive(Clone, Debug)]
pub struct OutcomeSample {
    pub index: usize,
    pub label: String,
    /// Born probability `Tr(Eρ)`.
    pub probability: f64,
    /// Update weight `Tr(EρE)`.
    pub update_weight: f64,
    pub post_state: DensityMatrix,
}

/// Seeded outcome sampler over ChaCha20 (`seed_from_u64`), drawing one `f64`
/// in `[0, 1)` per outcome and inverting the cumulative distribution in the
/// set's element order.
pub struct OutcomeSampler {
    rng: ChaCha20Rng,
}

impl OutcomeSampler {
    pub fn new(seed: u64) -> Self {
        OutcomeSampler {
            rng: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    /// Index drawn from non-negative weights summing to `total`.
    fn draw(&mut self, probs: &[f64], total: f64) -> usize {
        let u: f64 = self.rng.random::<f64>() * total;
        let mut cum = 0.0;
        let mut last = 0;
        for (i, &p) in probs.iter().enumerate() {
            if p <= 0.0 {
                continue;
            }
            cum += p;
            last = i;
            if u < cum {
                return i;
            }
        }
        last
    }

    fn distribution(rho: &DensityMatrix, set: &PovmSet) -> Result<(Vec<f64>, f64)> {
        let probs: Vec<f64> = born_probabilities(rho, set)?
            .into_iter()
            .map(|(_, p)| p.max(0.0))
            .collect();
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidState(format!(
                "outcome probabilities sum to {total:.12}; sampling needs a complete POVM on this state"
            )));
        }
        Ok((probs, total))
    }

    pub fn sample(&mut self, rho: &DensityMatrix, set: &PovmSet) -> Result<OutcomeSample> {
        let (probs, total) = Self::distribution(rho, set)?;
        let index = self.draw(&probs, total);
        let e = &set.elements[index];
        Ok(OutcomeSample {
            index,
            label: e.label.clone(),
            probability: probs[index],
            update_weight: update_weight(rho, e)?,
            post_state: post_state(rho, e)?,
        })
    }

    /// Outcome counts for `shots` independent draws (no post-states).
    pub fn counts(&mut self, rho: &DensityMatrix, set: &PovmSet, shots: usize) -> Result<Vec<usize>> {
        let (probs, total) = Self::distribution(rho, set)?;
        let mut counts = vec![0; probs.len()];
        for _ in 0..shots {
            counts[self.draw(&probs, total)] += 1;
        }
        Ok(counts)
    }
}

pub fn sample_outcome(rho: &DensityMatrix, set: &PovmSet, seed: u64) -> Result<OutcomeSample> {
    OutcomeSampler::new(seed).sample(rho, set)
}

pub fn sample_counts(rho: &DensityMatrix, set: &PovmSet, shots: usize, seed: u64) -> Result<Vec<usize>> {
    OutcomeSampler::new(seed).counts(rho, set, shots)
}

/// Coefficients `c_P` in `M = Σ_P c_P·P` over Pauli strings such as `"XZ"`
/// (first letter acts on the first, most significant, qubit).
#[derive(Clone, Debug, PartialEq)]
pub struct PauliDecomposition {
    pub n_qubits: usize,
    pub coeffs: BTreeMap<String, Complex>,
}

impl PauliDecomposition {
    pub fn get(&self, pauli: &str) -> Complex {
        self.coeffs.get(pauli).copied().unwrap_or_default()
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.coeffs.values().all(|c| c.im.abs() <= tol)
    }

    /// Real parts, for Hermitian sources.
    pub fn real_coeffs(&self) -> BTreeMap<String, f64> {
        self.coeffs.iter().map(|(k, v)| (k.clone(), v.re)).collect()
    }
}

const PAULI_LETTERS: [char; 4] = ['I', 'X', 'Y', 'Z'];

/// For a Pauli string given as letter indices, calls `f(row, col, value)` for
/// each nonzero entry.
fn for_each_entry(letters: &[usize], mut f: impl FnMut(usize, usize, Complex)) {
    let n = letters.len();
    let flip = letters
        .iter()
        .fold(0usize, |acc, &l| (acc << 1) | usize::from(l == 1 || l == 2));
    for row in 0..(1usize << n) {
        let col = row ^ flip;
        let mut value = Complex::new(1.0, 0.0);
        for (q, &l) in letters.iter().enumerate() {
            let bit = (row >> (n - 1 - q)) & 1;
            match l {
                2 => {
                    value *= if bit == 0 {
                        Complex::new(0.0, -1.0)
                    } else {
                        Complex::new(0.0, 1.0)
                    }
                }
                3 if bit == 1 => value = -value,
                _ => {}
            }
        }
        f(row, col, value);
    }
}

fn letters_of(mut index: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in out.iter_mut().rev() {
        *slot = index % 4;
        index /= 4;
    }
    out
}

fn parse_pauli(s: &str) -> Option<Vec<usize>> {
    s.chars()
        .map(|ch| PAULI_LETTERS.iter().position(|&p| p == ch))
        .collect()
}

/// The `2^n × 2^n` matrix of a Pauli string; `None` for letters outside `IXYZ`.
pub fn pauli_matrix(pauli: &str) -> Option<CMatrix> {
    let letters = parse_pauli(pauli)?;
    let dim = 1usize << letters.len();
    let mut m = CMatrix::zeros(dim, dim);
    for_each_entry(&letters, |r, c, v| m[(r, c)] = v);
    Some(m)
}

/// `c_P = Tr(P·M) / 2^n`, dropping coefficients with `|c_P| < 1e-13`.
pub fn pauli_decompose(m: &CMatrix, n_qubits: usize) -> Result<PauliDecomposition> {
    let dim = 1usize.checked_shl(n_qubits as u32).unwrap_or(0);
    if !m.is_square() || m.rows() != dim || n_qubits > 12 {
        return Err(Error::InvalidDimension {
            op: "pauli_decompose",
            detail: format!("{}x{} matrix is not {n_qubits} qubits", m.rows(), m.cols()),
        });
    }
    let mut coeffs = BTreeMap::new();
    for index in 0..(1usize << (2 * n_qubits)) {
        let letters = letters_of(index, n_qubits);
        let mut acc = Complex::new(0.0, 0.0);
        for_each_entry(&letters, |r, c, v| acc += v * m[(c, r)]);
        let coeff = acc / dim as f64;
        if coeff.norm() >= tol::PAULI_ZERO {
            let name: String = letters.iter().map(|&l| PAULI_LETTERS[l]).collect();
            coeffs.insert(name, coeff);
        }
    }
    Ok(PauliDecomposition { n_qubits, coeffs })
}

/// `Σ_P c_P·P`.
///
/// Panics if a key is not a Pauli string of length `n_qubits`.
pub fn pauli_reconstruct(d: &PauliDecomposition) -> CMatrix {
    let dim = 1usize << d.n_qubits;
    let mut m = CMatrix::zeros(dim, dim);
    for (name, &c) in &d.coeffs {
        let letters = parse_pauli(name)
            .filter(|l| l.len() == d.n_qubits)
            .unwrap_or_else(|| panic!("invalid Pauli string {name:?}"));
        for_each_entry(&letters, |r, col, v| m[(r, col)] += c * v);
    }
    m
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PptStrength {
    /// 2×2 and 2×3 systems: a positive partial transpose implies separability.
    NecessaryAndSufficient,
    /// Larger systems: only a negative eigenvalue is conclusive.
    SufficientOnly,
}

#[derive(Clone, Debug)]
pub struct PptResult {
    /// Eigenvalues of the partial transpose, descending.
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: f64,
    pub entangled: bool,
    pub strength: PptStrength,
}

pub fn ppt_check(rho: &DensityMatrix, dim_a: usize, dim_b: usize) -> Result<PptResult> {
    ppt_check_eps(rho, dim_a, dim_b, tol::EPS)
}

/// Entangled iff the partial transpose on the second factor has an
/// eigenvalue below `−eps`.
pub fn ppt_check_eps(rho: &DensityMatrix, dim_a: usize, dim_b: usize, eps: f64) -> Result<PptResult> {
    let pt = rho.matrix().partial_transpose(dim_a, dim_b)?;
    let eigen = hermitian_eigen(&pt)?;
    let min_eigenvalue = eigen.min_eigenvalue();
    let strength = match (dim_a, dim_b) {
        (2, 2) | (2, 3) | (3, 2) => PptStrength::NecessaryAndSufficient,
        _ => PptStrength::SufficientOnly,
    };
    Ok(PptResult {
        eigenvalues: eigen.eigenvalues,
        min_eigenvalue,
        entangled: min_eigenvalue < -eps,
        strength,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angmom::HalfInt;
    use crate::povm::{coalesce_degenerate, spherical_povm};

    fn re(x: f64) -> Complex {
        Complex::new(x, 0.0)
    }

    fn spin_one() -> PovmSet {
        spherical_povm(HalfInt::ONE).unwrap()
    }

    #[test]
    fn density_validation() {
        assert!(DensityMatrix::new(CMatrix::from_diag(&[0.5, 0.4])).is_err());
        assert!(DensityMatrix::new(CMatrix::from_diag(&[1.5, -0.5])).is_err());
        assert!(DensityMatrix::new(CMatrix::from_real(2, 2, &[0.5, 0.1, 0.0, 0.5])).is_err());
        assert!(DensityMatrix::new(CMatrix::zeros(2, 3)).is_err());
        assert!(DensityMatrix::new(CMatrix::from_diag(&[0.25, 0.75])).is_ok());
    }

    #[test]
    fn pure_validation() {
        assert!(PureState::new(vec![re(1.0), re(1.0)]).is_err());
        let p = PureState::normalized(vec![re(3.0), re(4.0)]).unwrap();
        assert!((p.amplitudes()[1] - re(0.8)).norm() < 1e-15);
        assert!(PureState::normalized(vec![re(0.0)]).is_err());
    }

    #[test]
    fn maximally_mixed_probabilities() {
        let probs = born_probabilities(&DensityMatrix::maximally_mixed(3), &spin_one()).unwrap();
        let p22 = probs.iter().find(|(l, _)| l == "k=2,q=+2").unwrap().1;
        assert!((p22 - 1.0 / 9.0).abs() < 1e-15);
        assert!((probs.iter().map(|(_, p)| p).sum::<f64>() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn disjoint_support_has_zero_probability() {
        let rho = DensityMatrix::new(CMatrix::from_diag(&[1.0, 0.0, 0.0])).unwrap();
        let probs = born_probabilities(&rho, &spin_one()).unwrap();
        let p = probs.iter().find(|(l, _)| l == "k=2,q=-2").unwrap().1;
        assert_eq!(p, 0.0);
        let e = spin_one().find("k=2,q=-2").unwrap().clone();
        assert!(matches!(post_state(&rho, &e), Err(Error::ZeroProbability { .. })));
    }

    #[test]
    fn dimension_mismatch() {
        let rho = DensityMatrix::maximally_mixed(2);
        assert!(born_probabilities(&rho, &spin_one()).is_err());
    }

    #[test]
    fn top_projector_collapses() {
        let rho = DensityMatrix::new(CMatrix::from_real(
            3,
            3,
            &[0.5, 0.1, 0.05, 0.1, 0.3, 0.0, 0.05, 0.0, 0.2],
        ))
        .unwrap();
        let e = spin_one().find("k=2,q=+2").unwrap().clone();
        let out = post_state(&rho, &e).unwrap();
        assert!(out.matrix().approx_eq(&CMatrix::from_diag(&[1.0, 0.0, 0.0]), 1e-15));
    }

    #[test]
    fn singlet_has_no_support_under_dilated_e11() {
        let s = 0.5f64.sqrt();
        let singlet = PureState::new(vec![re(0.0), re(s), re(-s), re(0.0)]).unwrap();
        let iso = crate::dilate::dicke_isometry(2).unwrap();
        let set = coalesce_degenerate(&spin_one());
        let eps = crate::dilate::dilate_element(set.find("k=1,q=+1").unwrap(), &iso).unwrap();
        assert!(matches!(
            post_state_pure(&singlet, &eps),
            Err(Error::ZeroProbability { .. })
        ));
    }

    #[test]
    fn sampling_is_deterministic_and_respects_certain_outcomes() {
        let rho = DensityMatrix::maximally_mixed(3);
        let set = spin_one();
        let a = sample_outcome(&rho, &set, 42).unwrap();
        let b = sample_outcome(&rho, &set, 42).unwrap();
        assert_eq!(a.index, b.index);
        assert_eq!(
            sample_counts(&rho, &set, 500, 9).unwrap(),
            sample_counts(&rho, &set, 500, 9).unwrap()
        );

        let trivial = PovmSet {
            dim: 3,
            elements: vec![
                PovmElement::new("zero", CMatrix::zeros(3, 3)),
                PovmElement::new("all", CMatrix::identity(3)),
            ],
        };
        for seed in 0..20 {
            assert_eq!(sample_outcome(&rho, &trivial, seed).unwrap().label, "all");
        }
    }

    #[test]
    fn sampling_rejects_incomplete_sets() {
        let mut set = spin_one();
        set.elements.pop();
        assert!(sample_outcome(&DensityMatrix::maximally_mixed(3), &set, 1).is_err());
    }

    #[test]
    fn pauli_examples() {
        let d = pauli_decompose(&CMatrix::identity(4), 2).unwrap();
        assert_eq!(d.coeffs.len(), 1);
        assert!((d.get("II") - re(1.0)).norm() < 1e-15);

        let m = CMatrix::from_diag(&[1. / 3., 0., 0., 0.]);
        let d = pauli_decompose(&m, 2).unwrap();
        assert_eq!(d.coeffs.keys().collect::<Vec<_>>(), ["II", "IZ", "ZI", "ZZ"]);
        for c in d.coeffs.values() {
            assert!((c - re(1.0 / 12.0)).norm() < 1e-15);
        }

        let empty = PauliDecomposition {
            n_qubits: 2,
            coeffs: BTreeMap::new(),
        };
        assert_eq!(pauli_reconstruct(&empty), CMatrix::zeros(4, 4));

        let zz = PauliDecomposition {
            n_qubits: 2,
            coeffs: [("ZZ".to_string(), re(1.0))].into(),
        };
        assert_eq!(pauli_reconstruct(&zz), CMatrix::from_diag(&[1.0, -1.0, -1.0, 1.0]));
        assert!(pauli_decompose(&CMatrix::identity(3), 2).is_err());
    }

    #[test]
    fn pauli_matrices_match_kron() {
        let y = pauli_matrix("Y").unwrap();
        assert_eq!(y[(0, 1)], Complex::new(0.0, -1.0));
        assert_eq!(y[(1, 0)], Complex::new(0.0, 1.0));
        let x = pauli_matrix("X").unwrap();
        let z = pauli_matrix("Z").unwrap();
        assert_eq!(pauli_matrix("XYZ").unwrap(), x.kron(&y).kron(&z));
        assert!(pauli_matrix("XA").is_none());
    }

    #[test]
    fn ppt_examples() {
        let product = DensityMatrix::new(CMatrix::from_diag(&[1.0, 0.0, 0.0, 0.0])).unwrap();
        let r = ppt_check(&product, 2, 2).unwrap();
        assert!(!r.entangled && r.min_eigenvalue >= -1e-15);
        assert_eq!(r.strength, PptStrength::NecessaryAndSufficient);

        let h = 0.5;
        let bell = DensityMatrix::new(CMatrix::from_real(
            4,
            4,
            &[h, 0., 0., h, 0., 0., 0., 0., 0., 0., 0., 0., h, 0., 0., h],
        ))
        .unwrap();
        let r = ppt_check(&bell, 2, 2).unwrap();
        assert!(r.entangled && (r.min_eigenvalue + 0.5).abs() < 1e-12);
        assert!(ppt_check(&bell, 2, 3).is_err());
        let big = DensityMatrix::maximally_mixed(9);
        assert_eq!(ppt_check(&big, 3, 3).unwrap().strength, PptStrength::SufficientOnly);
    }
}
