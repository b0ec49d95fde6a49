//! Random matrices and states for property checks and the random verification suite.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::matcore::{CMatrix, Complex};
use crate::measure::{DensityMatrix, PureState};

pub type SimRng = ChaCha20Rng;

pub fn seeded(seed: u64) -> SimRng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex {
    Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-random unitary: Gram–Schmidt (QR with positive `R` diagonal) of a
/// Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let mut q = ginibre(n, n, rng);
    for c in 0..n {
        for prev in 0..c {
            let proj: Complex = (0..n).map(|r| q[(r, prev)].conj() * q[(r, c)]).sum();
            for r in 0..n {
                let x = q[(r, prev)];
                q[(r, c)] -= proj * x;
            }
        }
        let norm = (0..n).map(|r| q[(r, c)].norm_sqr()).sum::<f64>().sqrt();
        for r in 0..n {
            q[(r, c)] /= norm;
        }
    }
    q
}

pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let g = ginibre(n, n, rng);
    CMatrix::from_fn(n, n, |r, c| (g[(r, c)] + g[(c, r)].conj()) * 0.5)
}

/// Full-rank density matrix `G·G† / Tr(G·G†)`.
pub fn random_density<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DensityMatrix {
    let g = ginibre(n, n, rng);
    let gg = &g * &g.dagger();
    let tr = gg.trace().re;
    let m = CMatrix::from_fn(n, n, |r, c| (gg[(r, c)] + gg[(c, r)].conj()) * (0.5 / tr));
    DensityMatrix::new(m).expect("Ginibre density is physical")
}

pub fn random_pure<R: Rng + ?Sized>(n: usize, rng: &mut R) -> PureState {
    let amps = (0..n).map(|_| gaussian(rng)).collect();
    PureState::normalized(amps).expect("Gaussian vector is nonzero")
}

/// Random Euler angles `(α, β, γ)` in `[0, 2π) × [0, π] × [0, 2π)`.
pub fn random_euler<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64, f64) {
    use std::f64::consts::{PI, TAU};
    (
        rng.random::<f64>() * TAU,
        rng.random::<f64>() * PI,
        rng.random::<f64>() * TAU,
    )
}
