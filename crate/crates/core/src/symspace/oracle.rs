//! Full tensor-space constructions used to cross-check the compressed ones.

use nalgebra::DMatrix;

use std::sync::Arc;

use super::{symmetrizer_0a, CompressedSpace, Reference, SymBasis};
use crate::{Error, Result};

pub const FULL_SPACE_MAX_DIM: usize = 4096;

/// Upper bound on `(#permutations) × (full dimension)` work for the
/// permutation average.
const PERMUTATION_WORK_LIMIT: usize = 200_000_000;

fn checked_full_dim(d: usize, systems: usize) -> Result<usize> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    let mut dim = 1usize;
    for _ in 0..systems {
        dim = dim.saturating_mul(d);
        if dim > FULL_SPACE_MAX_DIM {
            return Err(Error::SizeGuard {
                what: "full tensor space",
                dim,
                limit: FULL_SPACE_MAX_DIM,
            });
        }
    }
    Ok(dim)
}

/// `S_n` on `(C^d)^{⊗n}` as the average of all `n!` permutation operators.
pub fn full_space_symmetrizer(d: usize, n: usize) -> Result<DMatrix<f64>> {
    let subset: Vec<usize> = (0..n).collect();
    full_space_partial_symmetrizer(d, n, &subset)
}

/// Average of all permutations of the tensor factors listed in `subset`,
/// acting on `(C^d)^{⊗systems}` with system 0 as the most significant digit.
pub fn full_space_partial_symmetrizer(d: usize, systems: usize, subset: &[usize]) -> Result<DMatrix<f64>> {
    let dim = checked_full_dim(d, systems)?;
    if let Some(&bad) = subset.iter().find(|&&s| s >= systems) {
        return Err(Error::InvalidArgument(format!(
            "system {bad} out of range 0..{systems}"
        )));
    }
    let count = (1..=subset.len()).fold(1usize, |acc, k| acc.saturating_mul(k));
    if count.saturating_mul(dim) > PERMUTATION_WORK_LIMIT {
        return Err(Error::SizeGuard {
            what: "permutation average",
            dim: count.saturating_mul(dim),
            limit: PERMUTATION_WORK_LIMIT,
        });
    }
    let perms = permutations(subset.len());
    let weight = 1.0 / perms.len() as f64;
    let mut out = DMatrix::zeros(dim, dim);
    let mut digits = vec![0usize; systems];
    let mut permuted = vec![0usize; systems];
    for col in 0..dim {
        let mut rest = col;
        for s in (0..systems).rev() {
            digits[s] = rest % d;
            rest /= d;
        }
        for p in &perms {
            permuted.copy_from_slice(&digits);
            for (k, &target) in p.iter().enumerate() {
                permuted[subset[target]] = digits[subset[k]];
            }
            let row = permuted.iter().fold(0, |acc, &x| acc * d + x);
            out[(row, col)] += weight;
        }
    }
    Ok(out)
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                extend(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(k), &mut vec![false; k], &mut out);
    out
}

/// Normalized symmetric states of `Sym^n(C^d)` as columns of a
/// `d^n × d_n` matrix.
fn symmetric_embedding(basis: &SymBasis) -> Result<DMatrix<f64>> {
    let (d, n) = (basis.d(), basis.n());
    let dim = checked_full_dim(d, n)?;
    let mut out = DMatrix::zeros(dim, basis.len());
    let mut counts = vec![0u32; d];
    for row in 0..dim {
        counts.iter_mut().for_each(|c| *c = 0);
        let mut rest = row;
        for _ in 0..n {
            counts[rest % d] += 1;
            rest /= d;
        }
        let occ = super::OccupationVector::new(counts.clone());
        let col = basis.position(&occ).expect("occupation vector of a basis string");
        out[(row, col)] = 1.0 / occ.sqrt_multinomial();
    }
    Ok(out)
}

/// Isometry `V_sym → (C^d)^{⊗(2N+1)}` sending `|i⟩⊗|m1⟩⊗|m2⟩` to the product
/// of `|i⟩` with the two normalized symmetric states.
pub fn embed_compressed(space: &CompressedSpace) -> Result<DMatrix<f64>> {
    checked_full_dim(space.d(), 2 * space.n() + 1)?;
    let block = symmetric_embedding(space.basis())?;
    let input = DMatrix::<f64>::identity(space.d(), space.d());
    Ok(input.kronecker(&block).kronecker(&block))
}

/// `max |V^T S_full(0a) V - S(0a)|`, with `S_full(0a)` the permutation
/// average over the input system and the copies of reference `a`.
pub fn oracle_deviation(space: &Arc<CompressedSpace>, a: Reference) -> Result<f64> {
    let n = space.n();
    let mut subset = vec![0];
    match a {
        Reference::First => subset.extend(1..=n),
        Reference::Second => subset.extend(n + 1..=2 * n),
    }
    let full = full_space_partial_symmetrizer(space.d(), 2 * n + 1, &subset)?;
    let v = embed_compressed(space)?;
    let pulled = v.transpose() * full * &v;
    Ok((pulled - symmetrizer_0a(space, a).entries()).amax())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symspace::sym_dim;

    #[test]
    fn two_factor_symmetrizer_is_half_identity_plus_swap() {
        let d = 3;
        let s = full_space_symmetrizer(d, 2).unwrap();
        let swap = DMatrix::from_fn(d * d, d * d, |r, c| {
            let (a, b) = (c / d, c % d);
            if r == b * d + a {
                1.0
            } else {
                0.0
            }
        });
        let expect = (DMatrix::identity(d * d, d * d) + swap) * 0.5;
        assert!((s - expect).amax() < 1e-15);
    }

    #[test]
    fn full_symmetrizer_trace_and_idempotence() {
        let s = full_space_symmetrizer(2, 3).unwrap();
        assert!((s.trace() - 4.0).abs() < 1e-12);
        assert!((&s * &s - &s).norm() < 1e-13);
        for (d, n) in [(3, 3), (4, 2), (2, 5)] {
            let s = full_space_symmetrizer(d, n).unwrap();
            assert!((s.trace() - sym_dim(d, n) as f64).abs() < 1e-9);
            assert!((s.transpose() - &s).amax() < 1e-15);
        }
    }

    #[test]
    fn full_space_guard() {
        assert!(matches!(full_space_symmetrizer(2, 13), Err(Error::SizeGuard { .. })));
        assert!(matches!(full_space_symmetrizer(5, 6), Err(Error::SizeGuard { .. })));
        // 4096-dimensional but 12! permutations
        assert!(matches!(full_space_symmetrizer(2, 12), Err(Error::SizeGuard { .. })));
    }

    #[test]
    fn single_copy_embedding_is_unitary() {
        let sp = CompressedSpace::new(2, 1).unwrap();
        let v = embed_compressed(&sp).unwrap();
        assert_eq!(v.shape(), (8, 8));
        assert!((v.transpose() * &v - DMatrix::identity(8, 8)).amax() < 1e-15);
        assert!((&v * v.transpose() - DMatrix::identity(8, 8)).amax() < 1e-15);
    }

    #[test]
    fn embedding_columns_orthonormal() {
        let sp = CompressedSpace::new(2, 2).unwrap();
        let v = embed_compressed(&sp).unwrap();
        assert_eq!(v.shape(), (32, 18));
        assert!((v.transpose() * &v - DMatrix::identity(18, 18)).amax() < 1e-13);
    }
}
