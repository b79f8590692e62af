use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::basis::{OccupationVector, SymBasis};
use crate::{Error, Result};

/// Group of basis states of `V_sym` sharing the same total level occupation
/// across all `2N + 1` systems.
#[derive(Clone, Debug)]
pub struct Sector {
    weight: OccupationVector,
    indices: Vec<usize>,
}

impl Sector {
    pub fn weight(&self) -> &OccupationVector {
        &self.weight
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// The compressed space `V_sym = C^d ⊗ Sym^N ⊗ Sym^N`.
///
/// Basis state `|i⟩ ⊗ |m1⟩ ⊗ |m2⟩` sits at index `(i·d_N + k1)·d_N + k2`
/// where `k1`, `k2` are the positions of `m1`, `m2` in [`SymBasis`].
pub struct CompressedSpace {
    d: usize,
    n: usize,
    basis: SymBasis,
    sectors: Vec<Sector>,
    location: Vec<(usize, usize)>,
}

impl fmt::Debug for CompressedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CompressedSpace")
            .field("d", &self.d)
            .field("n", &self.n)
            .field("dim", &self.dim())
            .field("sectors", &self.sectors.len())
            .finish()
    }
}

impl CompressedSpace {
    pub const MAX_DIM: usize = 20_000;

    pub fn new(d: usize, n: usize) -> Result<Arc<Self>> {
        if d == 0 {
            return Err(Error::ZeroDimension);
        }
        if n == 0 {
            return Err(Error::ZeroCopies);
        }
        let d_n = super::sym_dim(d, n);
        let dim = d.saturating_mul(d_n).saturating_mul(d_n);
        if dim > Self::MAX_DIM {
            return Err(Error::SizeGuard {
                what: "compressed space",
                dim,
                limit: Self::MAX_DIM,
            });
        }
        let basis = SymBasis::new(d, n)?;

        let mut grouped: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
        for i in 0..d {
            for (k1, m1) in basis.vectors().iter().enumerate() {
                for (k2, m2) in basis.vectors().iter().enumerate() {
                    let mut w: Vec<u32> = m1.counts().iter().zip(m2.counts()).map(|(a, b)| a + b).collect();
                    w[i] += 1;
                    grouped.entry(w).or_default().push((i * d_n + k1) * d_n + k2);
                }
            }
        }
        let mut location = vec![(0, 0); dim];
        let sectors: Vec<Sector> = grouped
            .into_iter()
            .enumerate()
            .map(|(s, (w, mut indices))| {
                indices.sort_unstable();
                for (local, &g) in indices.iter().enumerate() {
                    location[g] = (s, local);
                }
                Sector {
                    weight: OccupationVector::new(w),
                    indices,
                }
            })
            .collect();

        Ok(Arc::new(Self {
            d,
            n,
            basis,
            sectors,
            location,
        }))
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &SymBasis {
        &self.basis
    }

    /// `d_N`, the dimension of one reference block.
    pub fn block_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn dim(&self) -> usize {
        self.d * self.block_dim() * self.block_dim()
    }

    pub fn sectors(&self) -> &[Sector] {
        &self.sectors
    }

    pub fn index(&self, level: usize, first: usize, second: usize) -> usize {
        let d_n = self.block_dim();
        (level * d_n + first) * d_n + second
    }

    /// Inverse of [`index`](Self::index): `(level, first, second)`.
    pub fn triple(&self, g: usize) -> (usize, usize, usize) {
        let d_n = self.block_dim();
        (g / (d_n * d_n), (g / d_n) % d_n, g % d_n)
    }

    /// Sector and position inside the sector of a global index.
    pub fn location(&self, g: usize) -> (usize, usize) {
        self.location[g]
    }

    /// Coordinates of `|φ_in⟩ ⊗ |φ_1⟩^{⊗N} ⊗ |φ_2⟩^{⊗N}`.
    pub fn input_state(
        &self,
        input: &[Complex64],
        first: &[Complex64],
        second: &[Complex64],
    ) -> Result<DVector<Complex64>> {
        if input.len() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: input.len(),
            });
        }
        let p1 = self.basis.product_state(first)?;
        let p2 = self.basis.product_state(second)?;
        let norm = input.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(self.input_state_from_parts(input, &p1, &p2))
    }

    pub(crate) fn input_state_from_parts(
        &self,
        input: &[Complex64],
        p1: &DVector<Complex64>,
        p2: &DVector<Complex64>,
    ) -> DVector<Complex64> {
        let d_n = self.block_dim();
        DVector::from_fn(self.dim(), |g, _| {
            let (i, k1, k2) = (g / (d_n * d_n), (g / d_n) % d_n, g % d_n);
            input[i] * p1[k1] * p2[k2]
        })
    }
}

/// Real operator on `V_sym` that conserves the total level occupation.
///
/// Every operator built from permutations of systems (and every function of
/// such operators) commutes with diagonal unitaries `diag(e^{iθ})^{⊗(2N+1)}`,
/// so it is block diagonal over [`Sector`]s and has real entries in the
/// occupation basis. Storage is one dense block per sector.
#[derive(Clone)]
pub struct CompressedOperator {
    space: Arc<CompressedSpace>,
    blocks: Vec<DMatrix<f64>>,
    hermitian: bool,
}

impl fmt::Debug for CompressedOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CompressedOperator")
            .field("d", &self.space.d)
            .field("n", &self.space.n)
            .field("dim", &self.dim())
            .field("hermitian", &self.hermitian)
            .finish()
    }
}

const HERMITIAN_TOL: f64 = 1e-12;

impl CompressedOperator {
    pub(crate) fn from_blocks(space: Arc<CompressedSpace>, blocks: Vec<DMatrix<f64>>) -> Self {
        debug_assert_eq!(blocks.len(), space.sectors.len());
        let hermitian = blocks.iter().all(|b| asymmetry(b) <= HERMITIAN_TOL);
        Self {
            space,
            blocks,
            hermitian,
        }
    }

    /// Builds an operator from its matrix elements `⟨row|O|col⟩`. Only
    /// pairs inside a common sector are queried.
    pub fn from_fn(space: &Arc<CompressedSpace>, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let blocks = space
            .sectors
            .iter()
            .map(|s| DMatrix::from_fn(s.len(), s.len(), |r, c| f(s.indices[r], s.indices[c])))
            .collect();
        Self::from_blocks(space.clone(), blocks)
    }

    /// Wraps a dense matrix, refusing it if any entry couples two different
    /// sectors by more than `1e-12`.
    pub fn from_dense(space: &Arc<CompressedSpace>, m: &DMatrix<f64>) -> Result<Self> {
        let dim = space.dim();
        if m.nrows() != dim || m.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: m.nrows(),
            });
        }
        for c in 0..dim {
            let sc = space.location[c].0;
            for r in 0..dim {
                if space.location[r].0 != sc && m[(r, c)].abs() > 1e-12 {
                    return Err(Error::InvalidArgument(format!(
                        "entry ({r}, {c}) = {} couples different occupation sectors",
                        m[(r, c)]
                    )));
                }
            }
        }
        Ok(Self::from_fn(space, |r, c| m[(r, c)]))
    }

    pub fn zeros(space: &Arc<CompressedSpace>) -> Self {
        let blocks = space.sectors.iter().map(|s| DMatrix::zeros(s.len(), s.len())).collect();
        Self::from_blocks(space.clone(), blocks)
    }

    pub fn identity(space: &Arc<CompressedSpace>) -> Self {
        let blocks = space
            .sectors
            .iter()
            .map(|s| DMatrix::identity(s.len(), s.len()))
            .collect();
        Self::from_blocks(space.clone(), blocks)
    }

    pub fn space(&self) -> &Arc<CompressedSpace> {
        &self.space
    }

    pub fn d(&self) -> usize {
        self.space.d
    }

    pub fn n(&self) -> usize {
        self.space.n
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn blocks(&self) -> &[DMatrix<f64>] {
        &self.blocks
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// Largest `|O_{rc} - O_{cr}|`.
    pub fn hermiticity_residual(&self) -> f64 {
        self.blocks.iter().map(asymmetry).fold(0.0, f64::max)
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        let (sr, lr) = self.space.location[row];
        let (sc, lc) = self.space.location[col];
        if sr == sc {
            self.blocks[sr][(lr, lc)]
        } else {
            0.0
        }
    }

    /// Full `dim × dim` matrix in the basis order of [`CompressedSpace`].
    pub fn entries(&self) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.dim(), self.dim());
        for (s, b) in self.space.sectors.iter().zip(&self.blocks) {
            for (lc, &c) in s.indices.iter().enumerate() {
                for (lr, &r) in s.indices.iter().enumerate() {
                    out[(r, c)] = b[(lr, lc)];
                }
            }
        }
        out
    }

    pub fn to_complex(&self) -> DMatrix<Complex64> {
        self.entries().map(|x| Complex64::new(x, 0.0))
    }

    pub fn trace(&self) -> f64 {
        self.blocks.iter().map(|b| b.trace()).sum()
    }

    /// `tr(self · other)`.
    pub fn trace_product(&self, other: &Self) -> f64 {
        self.check_space(other);
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.component_mul(&b.transpose()).sum())
            .sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.blocks.iter().map(|b| b.norm_squared()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().map(|b| b.amax()).fold(0.0, f64::max)
    }

    pub fn transpose(&self) -> Self {
        self.map_blocks(|b| b.transpose())
    }

    /// `(O + O^T) / 2`.
    pub fn symmetrized(&self) -> Self {
        self.map_blocks(|b| (b + b.transpose()) * 0.5)
    }

    pub fn map_blocks(&self, mut f: impl FnMut(&DMatrix<f64>) -> DMatrix<f64>) -> Self {
        Self::from_blocks(self.space.clone(), self.blocks.iter().map(&mut f).collect())
    }

    fn zip_blocks(&self, other: &Self, mut f: impl FnMut(&DMatrix<f64>, &DMatrix<f64>) -> DMatrix<f64>) -> Self {
        self.check_space(other);
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| f(a, b)).collect();
        Self::from_blocks(self.space.clone(), blocks)
    }

    pub fn apply(&self, psi: &DVector<Complex64>) -> DVector<Complex64> {
        assert_eq!(psi.len(), self.dim(), "vector length does not match operator");
        let mut out = DVector::zeros(self.dim());
        for (s, b) in self.space.sectors.iter().zip(&self.blocks) {
            for (lr, &r) in s.indices.iter().enumerate() {
                out[r] = s.indices.iter().enumerate().map(|(lc, &c)| psi[c] * b[(lr, lc)]).sum();
            }
        }
        out
    }

    /// `Re ⟨ψ|O|ψ⟩`.
    pub fn expectation(&self, psi: &DVector<Complex64>) -> f64 {
        assert_eq!(psi.len(), self.dim(), "vector length does not match operator");
        let mut acc = 0.0;
        for (s, b) in self.space.sectors.iter().zip(&self.blocks) {
            for (lc, &c) in s.indices.iter().enumerate() {
                let col: Complex64 = s
                    .indices
                    .iter()
                    .enumerate()
                    .map(|(lr, &r)| psi[r].conj() * b[(lr, lc)])
                    .sum();
                acc += (col * psi[c]).re;
            }
        }
        acc
    }

    fn check_space(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.space, &other.space) || (self.space.d == other.space.d && self.space.n == other.space.n),
            "operators act on different compressed spaces"
        );
    }
}

fn asymmetry(b: &DMatrix<f64>) -> f64 {
    let mut worst = 0.0_f64;
    for c in 0..b.ncols() {
        for r in 0..c {
            worst = worst.max((b[(r, c)] - b[(c, r)]).abs());
        }
    }
    worst
}

impl Add for &CompressedOperator {
    type Output = CompressedOperator;
    fn add(self, rhs: Self) -> CompressedOperator {
        self.zip_blocks(rhs, |a, b| a + b)
    }
}

impl Sub for &CompressedOperator {
    type Output = CompressedOperator;
    fn sub(self, rhs: Self) -> CompressedOperator {
        self.zip_blocks(rhs, |a, b| a - b)
    }
}

impl Mul for &CompressedOperator {
    type Output = CompressedOperator;
    fn mul(self, rhs: Self) -> CompressedOperator {
        self.zip_blocks(rhs, |a, b| a * b)
    }
}

impl Mul<f64> for &CompressedOperator {
    type Output = CompressedOperator;
    fn mul(self, rhs: f64) -> CompressedOperator {
        self.map_blocks(|a| a * rhs)
    }
}

impl Neg for &CompressedOperator {
    type Output = CompressedOperator;
    fn neg(self) -> CompressedOperator {
        self.map_blocks(|a| -a)
    }
}
