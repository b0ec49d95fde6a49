//! POVMs built from orthonormal bases of the `N×N` matrix space.
//!
//! For any basis `{T_j}` of `N²` matrices that is orthogonal with a common
//! norm, `Σ_j T_j T_j†` is proportional to the identity, so rescaling every
//! `T_j T_j†` by one constant `α` gives a POVM. The spherical tensor basis
//! yields `E^k_q = τ^k_q τ^{k†}_q / (2j+1)²`.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::angmom::{clebsch_gordan, HalfInt};
use crate::error::{Error, Result};
use crate::matcore::{hermitian_eigen, CMatrix, Complex};
use crate::tensors::{tensor_basis, tensor_label};
use crate::tol;

/// `N²` matrices of size `N×N`, pairwise orthogonal with a common norm.
#[derive(Clone, Debug)]
pub struct BasisSet {
    dim: usize,
    mats: Vec<CMatrix>,
    labels: Vec<String>,
}

impl BasisSet {
    /// Wraps matrices without checking orthogonality; see [`BasisSet::norm_constant`].
    pub fn new(dim: usize, mats: Vec<CMatrix>, labels: Vec<String>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension {
                op: "BasisSet::new",
                detail: "dimension 0".into(),
            });
        }
        if mats.len() != dim * dim || labels.len() != mats.len() {
            return Err(Error::InvalidDimension {
                op: "BasisSet::new",
                detail: format!("{} matrices / {} labels for N={dim}", mats.len(), labels.len()),
            });
        }
        if let Some(bad) = mats.iter().find(|m| m.shape() != (dim, dim)) {
            return Err(Error::InvalidDimension {
                op: "BasisSet::new",
                detail: format!("{}x{} member in an N={dim} basis", bad.rows(), bad.cols()),
            });
        }
        Ok(BasisSet { dim, mats, labels })
    }

    /// The spherical tensor basis `{τ^k_q}` for spin `j` (constant `2j+1`).
    pub fn spherical(j: HalfInt) -> Result<Self> {
        let taus = tensor_basis(j)?;
        let labels = taus.iter().map(|t| t.label()).collect();
        let mats = taus.into_iter().map(|t| t.into_matrix()).collect();
        Self::new(j.multiplicity(), mats, labels)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.mats
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Multiplies every member by the same complex factor.
    pub fn scaled(&self, factor: Complex) -> Self {
        BasisSet {
            dim: self.dim,
            mats: self.mats.iter().map(|m| m.scale(factor)).collect(),
            labels: self.labels.clone(),
        }
    }

    /// The common norm `c` in `Tr(T_a† T_b) = c·δ_ab`.
    ///
    /// Errors with the largest Gram-matrix deviation when the members are not
    /// orthogonal with a single positive norm (relative tolerance `EPS`).
    pub fn norm_constant(&self) -> Result<f64> {
        let n = self.mats.len();
        let diag: Vec<f64> = self.mats.iter().map(|m| m.frobenius_norm().powi(2)).collect();
        let c = diag.iter().sum::<f64>() / n as f64;
        if c.is_nan() || c <= tol::EPS {
            return Err(Error::DegenerateBasis { defect: c });
        }
        let mut defect: f64 = diag.iter().map(|d| (d - c).abs()).fold(0.0, f64::max);
        for a in 0..n {
            for b in (a + 1)..n {
                let ip = self.mats[a].trace_inner(&self.mats[b])?;
                defect = defect.max(ip.norm());
            }
        }
        if defect > tol::EPS * c.max(1.0) {
            return Err(Error::DegenerateBasis { defect });
        }
        Ok(c)
    }
}

fn elementary(n: usize, i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    m[(i, j)] = Complex::new(1.0, 0.0);
    m
}

fn ij_label(i: usize, j: usize) -> String {
    format!("i={},j={}", i + 1, j + 1)
}

/// The elementary matrices `E_ij` (labels `i=1,j=2`, 1-based), row-major order.
pub fn elementary_basis(n: usize) -> Result<BasisSet> {
    if n < 1 {
        return Err(Error::InvalidDimension {
            op: "elementary_basis",
            detail: "N must be at least 1".into(),
        });
    }
    let mut mats = Vec::with_capacity(n * n);
    let mut labels = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            mats.push(elementary(n, i, j));
            labels.push(ij_label(i, j));
        }
    }
    BasisSet::new(n, mats, labels)
}

/// `T_ij = unvec(U·vec(E_ij))` for an `N²×N²` unitary `U`.
pub fn basis_from_unitary(u: &CMatrix) -> Result<BasisSet> {
    if !u.is_square() {
        return Err(Error::NotSquare {
            op: "basis_from_unitary",
            rows: u.rows(),
            cols: u.cols(),
        });
    }
    let n = (u.rows() as f64).sqrt().round() as usize;
    if n == 0 || n * n != u.rows() {
        return Err(Error::InvalidDimension {
            op: "basis_from_unitary",
            detail: format!("{} is not a perfect square", u.rows()),
        });
    }
    let defect = u.unitarity_defect();
    if defect.is_nan() || defect > tol::EPS * (u.rows() as f64).sqrt() {
        return Err(Error::NotUnitary { defect });
    }
    let mut mats = Vec::with_capacity(n * n);
    let mut labels = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let v = u.matmul(&elementary(n, i, j).vec()?)?;
            mats.push(CMatrix::unvec(&v, n)?);
            labels.push(ij_label(i, j));
        }
    }
    BasisSet::new(n, mats, labels)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PovmElement {
    pub label: String,
    /// For a coalesced element this is the sum over its members.
    pub mat: CMatrix,
    /// Number of raw elements merged into this one.
    pub multiplicity: usize,
    /// Labels of the raw elements merged into this one.
    pub members: Vec<String>,
}

impl PovmElement {
    pub fn new(label: impl Into<String>, mat: CMatrix) -> Self {
        let label = label.into();
        PovmElement {
            members: vec![label.clone()],
            label,
            mat,
            multiplicity: 1,
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    /// `label` equals the element label or one of its members.
    pub fn answers_to(&self, label: &str) -> bool {
        self.label == label || self.members.iter().any(|m| m == label)
    }

    /// Smallest eigenvalue; errors if the matrix is not Hermitian.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(hermitian_eigen(&self.mat)?.min_eigenvalue())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PovmSet {
    pub dim: usize,
    pub elements: Vec<PovmElement>,
}

impl PovmSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `Σ_i E_i`.
    pub fn total(&self) -> CMatrix {
        self.elements
            .iter()
            .fold(CMatrix::zeros(self.dim, self.dim), |acc, e| &acc + &e.mat)
    }

    /// Finds an element by its label or by the label of a merged member.
    pub fn find(&self, label: &str) -> Option<&PovmElement> {
        self.elements
            .iter()
            .find(|e| e.label == label)
            .or_else(|| self.elements.iter().find(|e| e.answers_to(label)))
    }

    pub fn labels(&self) -> Vec<&str> {
        self.elements.iter().map(|e| e.label.as_str()).collect()
    }
}

/// `{α·T_j T_j†}` with `α = N / Σ_j Tr(T_j T_j†)`.
pub fn povm_from_basis(basis: &BasisSet) -> Result<PovmSet> {
    let c = basis.norm_constant()?;
    let n = basis.dim();
    // Σ_j Tr(T_j T_j†) = N²·c
    let alpha = 1.0 / (n as f64 * c);
    let elements = basis
        .matrices()
        .iter()
        .zip(basis.labels())
        .map(|(t, label)| {
            let tt = t * &t.dagger();
            // exact Hermitian by construction; remove rounding asymmetry
            let herm = CMatrix::from_fn(n, n, |r, k| (tt[(r, k)] + tt[(k, r)].conj()) * (0.5 * alpha));
            PovmElement::new(label.clone(), herm)
        })
        .collect();
    Ok(PovmSet { dim: n, elements })
}

/// `E^k_q = τ^k_q τ^{k†}_q / (2j+1)²` for every `(k, q)`, in canonical order.
pub fn spherical_povm(j: HalfInt) -> Result<PovmSet> {
    povm_from_basis(&BasisSet::spherical(j)?)
}

/// Exact diagonals of the spherical tensor POVM, in canonical `(k, q)` order.
///
/// `E^k_q` is diagonal with entry `(2k+1)·C(j k j; m−q, q, m)² / (2j+1)²` at `m`.
pub fn spherical_povm_exact_diagonals(j: HalfInt) -> Result<Vec<(String, Vec<BigRational>)>> {
    let norm = BigRational::from_integer(BigInt::from((j.multiplicity() * j.multiplicity()) as i64));
    let mut out = Vec::new();
    for k in 0..=j.twice() {
        for q in -k..=k {
            let kk = HalfInt::integer(k);
            let qq = HalfInt::integer(q);
            let weight = BigRational::from_integer(BigInt::from(2 * k + 1));
            let diag = j
                .projections()
                .map(|m| {
                    let c = clebsch_gordan(j, kk, j, m - qq, qq, m)?;
                    Ok(c.square() * &weight / &norm)
                })
                .collect::<Result<Vec<_>>>()?;
            out.push((tensor_label(k as u32, q as i32), diag));
        }
    }
    Ok(out)
}

/// Merges elements whose matrices agree entrywise within `EPS`.
pub fn coalesce_degenerate(set: &PovmSet) -> PovmSet {
    coalesce_degenerate_eps(set, tol::EPS)
}

pub fn coalesce_degenerate_eps(set: &PovmSet, eps: f64) -> PovmSet {
    // (representative matrix, members)
    let mut groups: Vec<(CMatrix, Vec<&PovmElement>)> = Vec::new();
    for e in &set.elements {
        match groups.iter_mut().find(|(rep, _)| rep.approx_eq(&e.mat, eps)) {
            Some((_, members)) => members.push(e),
            None => groups.push((e.mat.clone(), vec![e])),
        }
    }
    let elements = groups
        .into_iter()
        .map(|(_, members)| {
            if members.len() == 1 {
                return members[0].clone();
            }
            let mat = members
                .iter()
                .fold(CMatrix::zeros(set.dim, set.dim), |acc, e| &acc + &e.mat);
            let labels: Vec<String> = members.iter().flat_map(|e| e.members.iter().cloned()).collect();
            PovmElement {
                label: merged_label(&labels),
                mat,
                multiplicity: members.iter().map(|e| e.multiplicity).sum(),
                members: labels,
            }
        })
        .collect();
    PovmSet { dim: set.dim, elements }
}

/// `k∈{1,2},q=+1` when the members share a projection, otherwise the member
/// labels joined by `|`.
fn merged_label(labels: &[String]) -> String {
    let parsed: Option<Vec<(&str, &str)>> = labels
        .iter()
        .map(|l| l.strip_prefix("k=").and_then(|rest| rest.split_once(",q=")))
        .collect();
    if let Some(parts) = parsed {
        let q = parts[0].1;
        if parts.iter().all(|(_, pq)| *pq == q) {
            let ks: Vec<&str> = parts.iter().map(|(k, _)| *k).collect();
            return format!("k∈{{{}}},q={}", ks.join(","), q);
        }
    }
    labels.join("|")
}

/// `‖Σ_i E_i − I‖_F`.
pub fn completeness_defect(set: &PovmSet) -> f64 {
    set.total().distance(&CMatrix::identity(set.dim))
}
