//! Occupation-number bases of symmetric subspaces and the permutation
//! operators on `V_sym` built from them.

mod basis;
mod operator;
mod oracle;

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub use basis::{enumerate_occupation_basis, product_state_coordinates, sym_dim, OccupationVector, SymBasis};
pub use operator::{CompressedOperator, CompressedSpace, Sector};
pub use oracle::{
    embed_compressed, full_space_partial_symmetrizer, full_space_symmetrizer, oracle_deviation, FULL_SPACE_MAX_DIM,
};

use crate::{Error, Result};

/// Which reference block an operator couples to the input system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reference {
    First,
    Second,
}

impl Reference {
    pub fn other(self) -> Self {
        match self {
            Reference::First => Reference::Second,
            Reference::Second => Reference::First,
        }
    }
}

impl TryFrom<u8> for Reference {
    type Error = Error;

    fn try_from(a: u8) -> Result<Self> {
        match a {
            1 => Ok(Reference::First),
            2 => Ok(Reference::Second),
            _ => Err(Error::InvalidArgument(format!(
                "reference index must be 1 or 2, got {a}"
            ))),
        }
    }
}

/// `S_{N+1}(0a)`: projector onto states totally symmetric in system 0 and
/// the `N` systems of reference block `a`.
///
/// In the occupation basis,
/// `⟨i',m'|S|i,m⟩ = sqrt((m_i + 1)(m'_{i'} + 1)) / (N + 1)` whenever
/// `m + e_i == m' + e_{i'}`, with the other block left untouched.
pub fn symmetrizer_0a(space: &Arc<CompressedSpace>, a: Reference) -> CompressedOperator {
    let basis = space.basis();
    let scale = 1.0 / (space.n() as f64 + 1.0);
    CompressedOperator::from_fn(space, |row, col| {
        let (i2, r1, r2) = space.triple(row);
        let (i, c1, c2) = space.triple(col);
        let (coupled_r, spectator_r, coupled_c, spectator_c) = match a {
            Reference::First => (r1, r2, c1, c2),
            Reference::Second => (r2, r1, c2, c1),
        };
        if spectator_r != spectator_c {
            return 0.0;
        }
        let m = basis.get(coupled_c);
        let m2 = basis.get(coupled_r);
        if m.raised(i) != m2.raised(i2) {
            return 0.0;
        }
        (f64::from(m.counts()[i] + 1) * f64::from(m2.counts()[i2] + 1)).sqrt() * scale
    })
}

/// `T`: exchange of the two reference blocks.
pub fn exchange_12(space: &Arc<CompressedSpace>) -> CompressedOperator {
    CompressedOperator::from_fn(space, |row, col| {
        let (i2, r1, r2) = space.triple(row);
        let (i, c1, c2) = space.triple(col);
        if i2 == i && r1 == c2 && r2 == c1 {
            1.0
        } else {
            0.0
        }
    })
}

/// Matrix of `U^{⊗(2N+1)}` restricted to `V_sym`, i.e.
/// `U ⊗ Sym^N(U) ⊗ Sym^N(U)`. Not occupation-conserving for general `U`, so
/// it is returned as a plain dense complex matrix.
pub fn compressed_unitary_action(space: &CompressedSpace, u: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let sym = space.basis().unitary_power(u)?;
    Ok(u.kronecker(&sym).kronecker(&sym))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(d: usize, n: usize) -> Arc<CompressedSpace> {
        CompressedSpace::new(d, n).unwrap()
    }

    #[test]
    fn qubit_single_copy_symmetrizer_spectrum() {
        let s = symmetrizer_0a(&space(2, 1), Reference::First);
        let mut eig: Vec<f64> = s.entries().symmetric_eigenvalues().iter().copied().collect();
        eig.sort_by(f64::total_cmp);
        let expect = [0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0];
        for (x, y) in eig.iter().zip(expect) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!((s.trace() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn ladder_diagonal_element() {
        let sp = space(2, 1);
        let s = symmetrizer_0a(&sp, Reference::First);
        // |i=0⟩ ⊗ |(1,0)⟩ ⊗ |(1,0)⟩
        let g = sp.index(0, 0, 0);
        assert!((s.get(g, g) - 1.0).abs() < 1e-15);
        // |i=0⟩ ⊗ |(0,1)⟩ ⊗ ·: (m_0 + 1)/(N + 1) = 1/2
        let g = sp.index(0, 1, 0);
        assert!((s.get(g, g) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn symmetrizers_are_projectors_with_expected_trace() {
        for d in 1..=4 {
            for n in 1..=3 {
                let sp = space(d, n);
                for a in [Reference::First, Reference::Second] {
                    let s = symmetrizer_0a(&sp, a);
                    assert!(s.is_hermitian());
                    assert!((&(&s * &s) - &s).frobenius_norm() < 1e-12, "d={d} n={n}");
                    let expect = (sym_dim(d, n + 1) * sym_dim(d, n)) as f64;
                    assert!((s.trace() - expect).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn exchange_properties() {
        for (d, n) in [(2, 1), (2, 2), (3, 1), (3, 2), (4, 1)] {
            let sp = space(d, n);
            let t = exchange_12(&sp);
            let one = CompressedOperator::identity(&sp);
            assert_eq!((&(&t * &t) - &one).max_abs(), 0.0);
            assert!((t.trace() - (d * sym_dim(d, n)) as f64).abs() < 1e-12);
            let s1 = symmetrizer_0a(&sp, Reference::First);
            let s2 = symmetrizer_0a(&sp, Reference::Second);
            assert!((&(&(&t * &s1) * &t) - &s2).max_abs() <= 1e-14);
        }
        assert_eq!(exchange_12(&space(2, 1)).dim(), 8);
    }

    #[test]
    fn second_symmetrizer_commutes_with_its_own_swaps() {
        // S_{N+1}(02) is invariant under exchanging system 0 with a system of
        // block 2; within V_sym that is equivalent to S·S = S and S = S^T.
        let sp = space(2, 2);
        let s = symmetrizer_0a(&sp, Reference::Second);
        assert!((&(&s * &s) - &s).max_abs() < 1e-12);
        assert!(s.hermiticity_residual() < 1e-15);
    }

    #[test]
    fn reference_index_parsing() {
        assert_eq!(Reference::try_from(1).unwrap(), Reference::First);
        assert_eq!(Reference::try_from(2).unwrap(), Reference::Second);
        assert!(Reference::try_from(3).is_err());
    }

    #[test]
    fn guard_refuses_large_spaces() {
        assert!(matches!(CompressedSpace::new(4, 10), Err(Error::SizeGuard { .. })));
        assert!(matches!(CompressedSpace::new(2, 0), Err(Error::ZeroCopies)));
    }

    #[test]
    fn sectors_partition_the_space() {
        let sp = space(3, 2);
        let mut seen = vec![false; sp.dim()];
        for s in sp.sectors() {
            assert_eq!(s.weight().total() as usize, 2 * sp.n() + 1);
            for &g in s.indices() {
                assert!(!seen[g]);
                seen[g] = true;
            }
        }
        assert!(seen.into_iter().all(|x| x));
    }
}
