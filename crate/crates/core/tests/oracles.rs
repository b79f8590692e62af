//! Compressed constructions checked against independent full-space and
//! angular-momentum realizations.

use std::sync::Arc;

use nalgebra::DMatrix;
use qid_core::montecarlo::{haar_unitary, sample_haar_state, sample_stream};
use qid_core::povm::IdentificationProblem;
use qid_core::spectral::{build_a, build_d, eigh};
use qid_core::symspace::{
    compressed_unitary_action, embed_compressed, full_space_partial_symmetrizer, symmetrizer_0a, CompressedOperator,
    CompressedSpace, Reference, SymBasis,
};
use qid_core::Complex64;

fn pulled_back_symmetrizer(space: &CompressedSpace, a: Reference) -> DMatrix<f64> {
    let n = space.n();
    let systems = 2 * n + 1;
    let mut subset = vec![0];
    match a {
        Reference::First => subset.extend(1..=n),
        Reference::Second => subset.extend(n + 1..=2 * n),
    }
    let full = full_space_partial_symmetrizer(space.d(), systems, &subset).unwrap();
    let v = embed_compressed(space).unwrap();
    v.transpose() * full * v
}

#[test]
fn compressed_symmetrizers_match_permutation_average() {
    for (d, n) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)] {
        let space = CompressedSpace::new(d, n).unwrap();
        for a in [Reference::First, Reference::Second] {
            let oracle = pulled_back_symmetrizer(&space, a);
            let compressed = symmetrizer_0a(&space, a).entries();
            assert!((oracle - compressed).amax() <= 1e-12, "d={d} n={n} {a:?}");
        }
    }
}

#[test]
fn embedding_intertwines_exchange() {
    // T on V_sym equals the pullback of the full-space block swap.
    let space = CompressedSpace::new(2, 2).unwrap();
    let n = space.n();
    let d = space.d();
    let systems = 2 * n + 1;
    let dim = d.pow(systems as u32);
    let swap = DMatrix::from_fn(dim, dim, |r, c| {
        let digits: Vec<usize> = (0..systems).rev().map(|s| (c / d.pow(s as u32)) % d).collect();
        let mut moved = digits.clone();
        for k in 0..n {
            moved[1 + k] = digits[1 + n + k];
            moved[1 + n + k] = digits[1 + k];
        }
        let row = moved.iter().fold(0, |acc, &x| acc * d + x);
        if row == r {
            1.0
        } else {
            0.0
        }
    });
    let v = embed_compressed(&space).unwrap();
    let pulled = v.transpose() * swap * &v;
    let t = qid_core::symspace::exchange_12(&space).entries();
    assert!((pulled - t).amax() < 1e-13);
}

/// `(2 j(a)·s(0) + N/2 + 1)/(N + 1)` on the qubit compressed space.
fn angular_momentum_symmetrizer(space: &Arc<CompressedSpace>, a: Reference) -> CompressedOperator {
    let n = space.n();
    let basis = space.basis();
    let dim = space.dim();
    let mut dot = DMatrix::<f64>::zeros(dim, dim);
    for col in 0..dim {
        let (i, k1, k2) = space.triple(col);
        let k = if a == Reference::First { k1 } else { k2 };
        let m = basis.get(k).counts().to_vec();
        let (n0, n1) = (f64::from(m[0]), f64::from(m[1]));
        let sz = if i == 0 { 0.5 } else { -0.5 };
        // jz sz
        dot[(col, col)] += 0.5 * (n0 - n1) * sz;
        let place = |level: usize, occ: Vec<u32>| {
            let kk = basis.position(&qid_core::symspace::OccupationVector::new(occ)).unwrap();
            if a == Reference::First {
                space.index(level, kk, k2)
            } else {
                space.index(level, k1, kk)
            }
        };
        // (j+ s- + j- s+)/2; s- lowers |0⟩ -> |1⟩, j+ moves a particle 1 -> 0
        if i == 0 && m[1] > 0 {
            let row = place(1, vec![m[0] + 1, m[1] - 1]);
            dot[(row, col)] += 0.5 * ((n0 + 1.0) * n1).sqrt();
        }
        if i == 1 && m[0] > 0 {
            let row = place(0, vec![m[0] - 1, m[1] + 1]);
            dot[(row, col)] += 0.5 * (n0 * (n1 + 1.0)).sqrt();
        }
    }
    let nf = n as f64;
    let m = (dot * 2.0 + DMatrix::identity(dim, dim) * (nf / 2.0 + 1.0)) / (nf + 1.0);
    CompressedOperator::from_dense(space, &m).unwrap()
}

#[test]
fn qubit_symmetrizer_matches_angular_momentum_form() {
    for n in 1..=6 {
        let space = CompressedSpace::new(2, n).unwrap();
        for a in [Reference::First, Reference::Second] {
            let spin = angular_momentum_symmetrizer(&space, a);
            let direct = symmetrizer_0a(&space, a);
            assert!((&spin - &direct).max_abs() < 1e-12, "n={n}");
        }
    }
}

#[test]
fn qubit_a_squared_follows_total_angular_momentum() {
    for n in 1..=6 {
        let space = CompressedSpace::new(2, n).unwrap();
        let a = build_a(&space);
        let sq = eigh(&(&a * &a).symmetrized()).unwrap();
        let nf = n as f64 + 1.0;
        let allowed: Vec<f64> = (0..=n).map(|k| ((k as f64 + 1.0) / nf).powi(2)).collect();
        for &x in sq.eigenvalues() {
            assert!(allowed.iter().any(|y| (x - y).abs() < 1e-10), "n={n} eigenvalue {x}");
        }
        // A and D anticommute so D flips the sign of every non-unit eigenvalue
        let dd = build_d(&space);
        assert!((&(&a * &dd) + &(&dd * &a)).max_abs() < 1e-12);
    }
}

#[test]
fn qubit_spectrum_matches_recoupling_coefficients() {
    for n in 1..=6 {
        let space = CompressedSpace::new(2, n).unwrap();
        let spectrum = eigh(&build_a(&space)).unwrap();
        let mut expect = vec![1.0; 2 * n + 2];
        for r in qid_core::closedform::racah_matrices(n).unwrap() {
            let a = r.minus_minus().abs();
            for _ in 0..r.degeneracy() {
                expect.push(a);
                expect.push(-a);
            }
        }
        expect.sort_by(f64::total_cmp);
        assert_eq!(expect.len(), spectrum.eigenvalues().len());
        for (x, y) in spectrum.eigenvalues().iter().zip(&expect) {
            assert!((x - y).abs() < 1e-10);
        }
    }
}

#[test]
fn symmetric_power_of_unitary_maps_product_states() {
    let mut rng = sample_stream(17, 0);
    for (d, n) in [(2, 3), (3, 2), (4, 2)] {
        let basis = SymBasis::new(d, n).unwrap();
        let u = haar_unitary(d, &mut rng);
        let sym = basis.unitary_power(&u).unwrap();
        assert!((sym.adjoint() * &sym - DMatrix::identity(basis.len(), basis.len())).norm() < 1e-12);
        let phi = sample_haar_state(d, &mut rng);
        let moved = phi.transformed(&u);
        let lhs = &sym * basis.product_state(phi.amplitudes()).unwrap();
        let rhs = basis.product_state(moved.amplitudes()).unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
    }
}

#[test]
fn optimal_povm_is_unitary_scalar() {
    let mut rng = sample_stream(23, 0);
    for (d, n) in [(2, 1), (2, 2), (3, 1), (3, 2)] {
        let problem = IdentificationProblem::new(d, n).unwrap();
        let povm = problem.optimal_povm();
        let elements: Vec<DMatrix<Complex64>> = povm.elements().iter().map(|e| e.to_complex()).collect();
        for _ in 0..20 {
            let u = haar_unitary(d, &mut rng);
            let r = compressed_unitary_action(problem.space(), &u).unwrap();
            for e in &elements {
                let comm = &r * e - e * &r;
                assert!(comm.norm() < 1e-10, "d={d} n={n}");
            }
        }
    }
}
