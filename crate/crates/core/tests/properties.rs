use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use sympovm::angmom::{clebsch_gordan, wigner_big_d, HalfInt};
use sympovm::dilate::{dicke_isometry, dilate_element, dilate_set, qubit_swap};
use sympovm::matcore::{hermitian_eigen, CMatrix, Complex};
use sympovm::measure::{born_probabilities, pauli_decompose, pauli_reconstruct, post_state, ppt_check, DensityMatrix};
use sympovm::povm::{
    basis_from_unitary, coalesce_degenerate, completeness_defect, povm_from_basis, spherical_povm, BasisSet,
};
use sympovm::random::{random_density, random_euler, random_hermitian, random_pure, random_unitary, seeded};
use sympovm::tensors::{fano_extract, fano_reconstruct, rotate_parameters, tau, tensor_basis};

fn h(twice: i64) -> HalfInt {
    HalfInt::from_twice(twice)
}

fn complex_matrix(rows: usize, cols: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), rows * cols).prop_map(move |v| {
        CMatrix::from_vec(rows, cols, v.into_iter().map(|(a, b)| Complex::new(a, b)).collect()).unwrap()
    })
}

fn square_matrix(max: usize) -> impl Strategy<Value = CMatrix> {
    (1..=max).prop_flat_map(|n| complex_matrix(n, n))
}

proptest! {
    #[test]
    fn vec_unvec_inverse(m in square_matrix(8)) {
        let n = m.rows();
        prop_assert_eq!(CMatrix::unvec(&m.vec().unwrap(), n).unwrap(), m);
    }

    #[test]
    fn trace_inner_is_squared_frobenius(m in square_matrix(6)) {
        let ip = m.trace_inner(&m).unwrap();
        prop_assert!(ip.re >= 0.0);
        prop_assert!((ip.re - m.frobenius_norm().powi(2)).abs() < 1e-10 && ip.im.abs() < 1e-10);
    }

    #[test]
    fn kron_mixed_product(
        (a, c) in (1..4usize, 1..4usize, 1..4usize).prop_flat_map(|(r, k, s)| (complex_matrix(r, k), complex_matrix(k, s))),
        (b, d) in (1..4usize, 1..4usize, 1..4usize).prop_flat_map(|(r, k, s)| (complex_matrix(r, k), complex_matrix(k, s))),
    ) {
        let lhs = &a.kron(&b) * &c.kron(&d);
        let rhs = (&a * &c).kron(&(&b * &d));
        prop_assert!(lhs.approx_eq(&rhs, 1e-12));
    }

    #[test]
    fn partial_transpose_preserves_trace_and_hermiticity(m in complex_matrix(6, 6)) {
        let herm = &m + &m.dagger();
        let pt = herm.partial_transpose(2, 3).unwrap();
        prop_assert!((pt.trace() - herm.trace()).norm() < 1e-12);
        prop_assert!(pt.hermiticity_defect() < 1e-12);
        let pt = herm.partial_transpose(3, 2).unwrap();
        prop_assert!(pt.hermiticity_defect() < 1e-12);
    }

    #[test]
    fn eigen_reconstructs(m in square_matrix(8)) {
        let herm = (&m + &m.dagger()).scale_real(0.5);
        let res = hermitian_eigen(&herm).unwrap();
        let sum: f64 = res.eigenvalues.iter().sum();
        prop_assert!((sum - herm.trace().re).abs() < 1e-10);
        prop_assert!(res.reconstruct().distance(&herm) < 1e-9);
        let v = &res.eigenvectors;
        prop_assert!((&v.dagger() * v).approx_eq(&CMatrix::identity(herm.rows()), 1e-12));
        prop_assert!(res.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        for (i, &l) in res.eigenvalues.iter().enumerate() {
            let col = CMatrix::column(&v.col_vec(i));
            prop_assert!((&herm * &col).approx_eq(&col.scale_real(l), 1e-10));
        }
    }

    #[test]
    fn pauli_round_trip(n in 1..=3usize, seed in any::<u64>()) {
        let m = random_hermitian(1 << n, &mut seeded(seed));
        let d = pauli_decompose(&m, n).unwrap();
        prop_assert!(d.is_real(1e-13));
        prop_assert!(pauli_reconstruct(&d).approx_eq(&m, 1e-12));
    }
}

#[test]
fn eigen_on_larger_matrices() {
    let mut rng = seeded(17);
    for n in [16, 32, 64] {
        let m = random_hermitian(n, &mut rng);
        let res = hermitian_eigen(&m).unwrap();
        assert!(res.reconstruct().distance(&m) < 1e-9, "n={n}");
    }
}

#[test]
fn cg_orthogonality_and_symmetry_up_to_five_halves() {
    for j1t in 0..=5 {
        for j2t in 0..=5 {
            let (j1, j2) = (h(j1t), h(j2t));
            let lo = (j1t - j2t).abs();
            let couplings: Vec<HalfInt> = (lo..=j1t + j2t).step_by(2).map(h).collect();
            for &j in &couplings {
                for &jp in &couplings {
                    for m in j.projections() {
                        for mp in jp.projections() {
                            let mut sum = BigRational::zero();
                            for m1 in j1.projections() {
                                for m2 in j2.projections() {
                                    let a = clebsch_gordan(j1, j2, j, m1, m2, m).unwrap();
                                    let b = clebsch_gordan(j1, j2, jp, m1, m2, mp).unwrap();
                                    if a.is_zero() || b.is_zero() {
                                        continue;
                                    }
                                    // a·b is rational only when j = j', m = m'; otherwise the
                                    // product vanishes term by term or cancels in pairs, so
                                    // compare the sum in floating point there.
                                    if j == jp && m == mp {
                                        sum += a.square();
                                    } else {
                                        sum += BigRational::from_float(a.to_f64() * b.to_f64()).unwrap();
                                    }
                                }
                            }
                            if j == jp && m == mp {
                                assert_eq!(sum, BigRational::one(), "j1={j1} j2={j2} j={j} m={m}");
                            } else {
                                let f: f64 = num_traits::ToPrimitive::to_f64(&sum).unwrap();
                                assert!(f.abs() < 1e-14, "j1={j1} j2={j2} j={j} j'={jp} m={m} m'={mp}: {f}");
                            }
                        }
                    }
                    for m1 in j1.projections() {
                        for m2 in j2.projections() {
                            let m = m1 + m2;
                            let a = clebsch_gordan(j1, j2, j, m1, m2, m).unwrap();
                            let b = clebsch_gordan(j1, j2, j, -m1, -m2, -m).unwrap();
                            let phase = ((j1 + j2 - j).twice() / 2) % 2 == 0;
                            assert_eq!(a.square(), b.square());
                            let expected = if phase { b.sign() } else { -b.sign() };
                            assert_eq!(a.sign(), expected);
                        }
                    }
                }
            }
        }
    }
}

/// `|1 m⟩` in Cartesian components: `|1,±1⟩ = ∓(x ± iy)/√2`, `|1,0⟩ = z`.
fn spherical_from_cartesian() -> CMatrix {
    let s = 0.5f64.sqrt();
    let c = |re: f64, im: f64| Complex::new(re, im);
    CMatrix::from_vec(
        3,
        3,
        vec![
            c(-s, 0.),
            c(0., -s),
            c(0., 0.),
            c(0., 0.),
            c(0., 0.),
            c(1., 0.),
            c(s, 0.),
            c(0., -s),
            c(0., 0.),
        ],
    )
    .unwrap()
}

fn rot_z(a: f64) -> CMatrix {
    CMatrix::from_real(3, 3, &[a.cos(), -a.sin(), 0., a.sin(), a.cos(), 0., 0., 0., 1.])
}

fn rot_y(b: f64) -> CMatrix {
    CMatrix::from_real(3, 3, &[b.cos(), 0., b.sin(), 0., 1., 0., -b.sin(), 0., b.cos()])
}

fn euler_rotation(a: f64, b: f64, g: f64) -> CMatrix {
    &(&rot_z(a) * &rot_y(b)) * &rot_z(g)
}

fn euler_angles(r: &CMatrix) -> (f64, f64, f64) {
    let beta = r[(2, 2)].re.clamp(-1.0, 1.0).acos();
    let alpha = r[(1, 2)].re.atan2(r[(0, 2)].re);
    let gamma = r[(2, 1)].re.atan2(-r[(2, 0)].re);
    (alpha, beta, gamma)
}

#[test]
fn d_matrix_is_vector_rotation_and_composes() {
    let s = spherical_from_cartesian();
    let to_spherical = |r: &CMatrix| &(&s.map(|z| z.conj()) * r) * &s.transpose();
    let mut rng = seeded(23);
    for _ in 0..20 {
        let (a1, b1, g1) = random_euler(&mut rng);
        let (a2, b2, g2) = random_euler(&mut rng);
        let r1 = euler_rotation(a1, b1, g1);
        let r2 = euler_rotation(a2, b2, g2);
        let d1 = wigner_big_d(h(2), a1, b1, g1);
        let d2 = wigner_big_d(h(2), a2, b2, g2);
        assert!(d1.approx_eq(&to_spherical(&r1), 1e-12));
        let r12 = &r1 * &r2;
        let (a, b, g) = euler_angles(&r12);
        let d12 = wigner_big_d(h(2), a, b, g);
        assert!((&d1 * &d2).approx_eq(&d12, 1e-12));
    }
}

#[test]
fn tensor_orthogonality_and_symmetry_up_to_five_halves() {
    for jt in 1..=5 {
        let j = h(jt);
        let dim = (jt + 1) as f64;
        let basis = tensor_basis(j).unwrap();
        for a in &basis {
            for b in &basis {
                let ip = a.matrix().trace_inner(b.matrix()).unwrap();
                let expected = if a.label() == b.label() { dim } else { 0.0 };
                assert!((ip - Complex::new(expected, 0.0)).norm() < 1e-12);
            }
            let (k, q) = (a.rank() as i64, a.projection() as i64);
            let partner = tau(j, k, -q).unwrap();
            let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
            assert!(a.matrix().dagger().approx_eq(&partner.matrix().scale_real(sign), 0.0));
        }
    }
}

#[test]
fn fano_round_trips_and_rotation() {
    let mut rng = seeded(31);
    for jt in 1..=5 {
        let dim = jt as usize + 1;
        for _ in 0..20 {
            let rho = random_density(dim, &mut rng);
            let t = fano_extract(rho.matrix()).unwrap();
            assert!(t.conjugation_defect() < 1e-12);
            assert!((t.get(0, 0) - Complex::new(1.0, 0.0)).norm() < 1e-12);
            let back = fano_reconstruct(&t).unwrap();
            assert!(back.physical);
            assert!(back.matrix.approx_eq(rho.matrix(), 1e-12));
            assert!(fano_extract(&back.matrix).unwrap().max_abs_diff(&t) < 1e-12);

            let (a, b, g) = random_euler(&mut rng);
            let d = wigner_big_d(h(jt), a, b, g);
            let rotated_state = &(&d * rho.matrix()) * &d.dagger();
            let direct = fano_extract(&rotated_state).unwrap();
            let rotated = rotate_parameters(&t, a, b, g);
            assert!(rotated.max_abs_diff(&direct) < 1e-12);
            for k in 0..=jt as u32 {
                assert!((rotated.rank_norm_sqr(k) - t.rank_norm_sqr(k)).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn random_unitary_bases_give_povms() {
    let mut rng = seeded(41);
    for n in 2..=4 {
        for _ in 0..50 {
            let u = random_unitary(n * n, &mut rng);
            let set = povm_from_basis(&basis_from_unitary(&u).unwrap()).unwrap();
            assert_eq!(set.len(), n * n);
            for e in &set.elements {
                assert!(e.mat.hermiticity_defect() < 1e-12);
                assert!(e.min_eigenvalue().unwrap() >= -1e-10);
            }
            assert!(completeness_defect(&set) < 1e-10);
        }
    }
}

#[test]
fn common_phase_leaves_povm_unchanged() {
    let mut rng = seeded(43);
    let basis = basis_from_unitary(&random_unitary(9, &mut rng)).unwrap();
    let phased = basis.scaled(Complex::from_polar(1.0, 0.77));
    let a = povm_from_basis(&basis).unwrap();
    let b = povm_from_basis(&phased).unwrap();
    for (x, y) in a.elements.iter().zip(&b.elements) {
        assert!(x.mat.approx_eq(&y.mat, 1e-14));
    }
    let sph = BasisSet::spherical(h(2)).unwrap();
    let a = povm_from_basis(&sph).unwrap();
    let b = povm_from_basis(&sph.scaled(Complex::new(0.0, 1.0))).unwrap();
    assert_eq!(a, b);
}

#[test]
fn spherical_povm_is_diagonal() {
    for jt in 1..=4 {
        let set = spherical_povm(h(jt)).unwrap();
        assert_eq!(set.len(), (jt as usize + 1).pow(2));
        for e in &set.elements {
            let n = e.dim();
            let off: f64 = (0..n)
                .flat_map(|r| (0..n).filter(move |&c| c != r).map(move |c| (r, c)))
                .map(|(r, c)| e.mat[(r, c)].norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(off < 1e-14);
        }
        assert!(completeness_defect(&set) < 1e-12);
    }
}

#[test]
fn dicke_isometry_properties() {
    for n in 1..=6 {
        let iso = dicke_isometry(n).unwrap();
        let v = iso.matrix();
        assert!((&v.dagger() * v).approx_eq(&CMatrix::identity(n + 1), 1e-12));
    }
}

#[test]
fn dilated_elements_are_permutation_invariant() {
    for n in 2..=4 {
        let iso = dicke_isometry(n).unwrap();
        let set = dilate_set(&spherical_povm(h(n as i64)).unwrap(), &iso).unwrap();
        for a in 0..n {
            for b in (a + 1)..n {
                let p = qubit_swap(n, a, b);
                for e in &set.elements {
                    let conj = &(&p * &e.mat) * &p.dagger();
                    assert!(conj.approx_eq(&e.mat, 1e-12));
                }
            }
        }
    }
}

#[test]
fn dilated_measurements_land_in_symmetric_subspace() {
    let mut rng = seeded(53);
    for n in 2..=4 {
        let iso = dicke_isometry(n).unwrap();
        let complement = &CMatrix::identity(1 << n) - &iso.symmetric_projector();
        let sym = spherical_povm(h(n as i64)).unwrap();
        let set = dilate_set(&sym, &iso).unwrap();
        for _ in 0..100 {
            let psi = CMatrix::column(random_pure(1 << n, &mut rng).amplitudes());
            for e in &set.elements {
                let out = &e.mat * &psi;
                if out.frobenius_norm() > 1e-8 {
                    assert!((&complement * &out).frobenius_norm() < 1e-12);
                }
            }
        }
        // Tr(ε·VρV†) = Tr(E·ρ) for symmetric-subspace states
        for _ in 0..10 {
            let rho = random_density(n + 1, &mut rng);
            let v = iso.matrix();
            let lifted = DensityMatrix::new(&(v * rho.matrix()) * &v.dagger()).unwrap();
            let p_sym = born_probabilities(&rho, &sym).unwrap();
            let p_full = born_probabilities(&lifted, &set).unwrap();
            for ((_, a), (_, b)) in p_sym.iter().zip(&p_full) {
                assert!((a - b).abs() < 1e-12);
            }
            for e in &set.elements {
                if let Ok(post) = post_state(&lifted, e) {
                    let leak = &(&complement * post.matrix()) * &complement;
                    assert!(leak.frobenius_norm() < 1e-12);
                }
            }
        }
        let raw = dilate_element(&sym.elements[0], &iso).unwrap();
        assert_eq!(raw.mat.rows(), 1 << n);
    }
}

#[test]
fn update_rule_preserves_physicality_and_probabilities_sum() {
    let mut rng = seeded(61);
    for dim in 2..=4 {
        let j = h(dim as i64 - 1);
        let sym = spherical_povm(j).unwrap();
        let basis = povm_from_basis(&basis_from_unitary(&random_unitary(dim * dim, &mut rng)).unwrap()).unwrap();
        for _ in 0..100 {
            let rho = random_density(dim, &mut rng);
            for set in [&sym, &basis] {
                let total: f64 = born_probabilities(&rho, set).unwrap().iter().map(|(_, p)| p).sum();
                assert!((total - 1.0).abs() < 1e-10);
            }
        }
        for _ in 0..10 {
            let rho = random_density(dim, &mut rng);
            for e in &sym.elements {
                let post = post_state(&rho, e).unwrap();
                let eig = hermitian_eigen(post.matrix()).unwrap();
                assert!(eig.min_eigenvalue() >= -1e-10);
                assert!((post.matrix().trace().re - 1.0).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn coalesced_and_raw_probabilities_agree() {
    let mut rng = seeded(67);
    for jt in 1..=4 {
        let raw = spherical_povm(h(jt)).unwrap();
        let merged = coalesce_degenerate(&raw);
        for _ in 0..10 {
            let rho = random_density(jt as usize + 1, &mut rng);
            let p_raw = born_probabilities(&rho, &raw).unwrap();
            let p_merged = born_probabilities(&rho, &merged).unwrap();
            for (e, (_, p)) in merged.elements.iter().zip(&p_merged) {
                let summed: f64 = p_raw.iter().filter(|(l, _)| e.answers_to(l)).map(|(_, p)| p).sum();
                assert!((summed - p).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn product_states_pass_ppt() {
    let mut rng = seeded(71);
    for (da, db) in [(2, 2), (2, 3), (3, 2)] {
        for _ in 0..30 {
            let a = DensityMatrix::from_pure(&random_pure(da, &mut rng));
            let b = DensityMatrix::from_pure(&random_pure(db, &mut rng));
            let rho = DensityMatrix::new(a.matrix().kron(b.matrix())).unwrap();
            let r = ppt_check(&rho, da, db).unwrap();
            assert!(!r.entangled, "min eigenvalue {}", r.min_eigenvalue);
        }
    }
}
