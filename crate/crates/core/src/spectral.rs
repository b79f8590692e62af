//! The operators `A = S(01) + S(02) - 1` and `D = S(01) - S(02)`, their
//! eigendecomposition, and the spectrum predicted from Young-diagram
//! multiplicities.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::symspace::{self, sym_dim, CompressedOperator, CompressedSpace, Reference};
use crate::{Error, Result};

/// Young diagram with one, two, or three rows, the third of length one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct PartitionLabel {
    rows: Vec<u32>,
}

impl PartitionLabel {
    pub fn new(rows: Vec<u32>) -> Result<Self> {
        let ok = (1..=3).contains(&rows.len())
            && rows.iter().all(|&r| r > 0)
            && rows.windows(2).all(|w| w[0] >= w[1])
            && (rows.len() < 3 || rows[2] == 1);
        if ok {
            Ok(Self { rows })
        } else {
            Err(Error::InvalidArgument(format!(
                "{rows:?} is not a one-, two- or [λ1,λ2,1] partition"
            )))
        }
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn boxes(&self) -> u32 {
        self.rows.iter().sum()
    }

    /// Number of rows, which is also the index `n` of the subspace `V_n`.
    pub fn depth(&self) -> usize {
        self.rows.len()
    }
}

impl fmt::Display for PartitionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, r) in self.rows.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "]")
    }
}

/// One predicted eigenvalue of `A` together with the irreducible
/// representation carrying it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralBlock {
    pub label: PartitionLabel,
    pub eigenvalue: f64,
    pub multiplicity: usize,
}

/// Eigenvalues of `A` grouped by distinct value and matched against the
/// prediction. `labels` lists every partition predicted at this value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AssignedBlock {
    pub eigenvalue: f64,
    pub labels: Vec<PartitionLabel>,
    pub predicted_multiplicity: usize,
    pub observed_multiplicity: usize,
    pub max_deviation: f64,
}

/// Eigendecomposition of an occupation-conserving symmetric operator,
/// computed sector by sector.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    space: Arc<CompressedSpace>,
    eigenvalues: Vec<f64>,
    /// `(sector, local column)` of the eigenvector for each entry of
    /// `eigenvalues`.
    order: Vec<(usize, usize)>,
    sector_values: Vec<Vec<f64>>,
    sector_vectors: Vec<DMatrix<f64>>,
    blocks: Vec<AssignedBlock>,
}

impl SpectralDecomposition {
    pub fn space(&self) -> &Arc<CompressedSpace> {
        &self.space
    }

    /// Ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Block assignment; empty unless built by [`decompose_a`].
    pub fn blocks(&self) -> &[AssignedBlock] {
        &self.blocks
    }

    /// Dense orthogonal matrix whose k-th column belongs to `eigenvalues()[k]`.
    pub fn eigenvectors(&self) -> DMatrix<f64> {
        let dim = self.space.dim();
        let mut u = DMatrix::zeros(dim, dim);
        for (k, &(s, local)) in self.order.iter().enumerate() {
            let idx = self.space.sectors()[s].indices();
            for (r, &g) in idx.iter().enumerate() {
                u[(g, k)] = self.sector_vectors[s][(r, local)];
            }
        }
        u
    }

    /// `f(O) = Σ f(λ) |v⟩⟨v|`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> CompressedOperator {
        let blocks = self
            .sector_values
            .iter()
            .zip(&self.sector_vectors)
            .map(|(vals, vecs)| {
                let scaled = DMatrix::from_fn(vecs.nrows(), vecs.ncols(), |r, c| vecs[(r, c)] * f(vals[c]));
                (&scaled * vecs.transpose() + vecs * scaled.transpose()) * 0.5
            })
            .collect();
        CompressedOperator::from_blocks(self.space.clone(), blocks)
    }

    /// `‖O - U Λ U^T‖_F`.
    pub fn reconstruction_error(&self, op: &CompressedOperator) -> f64 {
        (&self.apply(|x| x) - op).frobenius_norm()
    }

    /// `‖U^T U - 1‖_F`.
    pub fn unitarity_residual(&self) -> f64 {
        self.sector_vectors
            .iter()
            .map(|v| {
                let n = v.ncols();
                (v.transpose() * v - DMatrix::identity(n, n)).norm_squared()
            })
            .sum::<f64>()
            .sqrt()
    }
}

/// Symmetric eigendecomposition with ascending eigenvalues.
pub fn eigh(op: &CompressedOperator) -> Result<SpectralDecomposition> {
    let residual = op.hermiticity_residual();
    if residual > 1e-12 {
        return Err(Error::NotHermitian { residual });
    }
    let mut sector_values = Vec::with_capacity(op.blocks().len());
    let mut sector_vectors = Vec::with_capacity(op.blocks().len());
    let mut tagged = Vec::with_capacity(op.dim());
    for (s, b) in op.blocks().iter().enumerate() {
        let eig = SymmetricEigen::new((b + b.transpose()) * 0.5);
        for (local, &v) in eig.eigenvalues.iter().enumerate() {
            tagged.push((v, s, local));
        }
        sector_values.push(eig.eigenvalues.iter().copied().collect());
        sector_vectors.push(eig.eigenvectors);
    }
    tagged.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    Ok(SpectralDecomposition {
        space: op.space().clone(),
        eigenvalues: tagged.iter().map(|t| t.0).collect(),
        order: tagged.iter().map(|t| (t.1, t.2)).collect(),
        sector_values,
        sector_vectors,
        blocks: Vec::new(),
    })
}

/// `A ≡ S_{N+1}(01) + S_{N+1}(02) - 1`.
pub fn build_a(space: &Arc<CompressedSpace>) -> CompressedOperator {
    let s1 = symspace::symmetrizer_0a(space, Reference::First);
    let s2 = symspace::symmetrizer_0a(space, Reference::Second);
    &(&s1 + &s2) - &CompressedOperator::identity(space)
}

/// `D ≡ S_{N+1}(01) - S_{N+1}(02)`.
pub fn build_d(space: &Arc<CompressedSpace>) -> CompressedOperator {
    let s1 = symspace::symmetrizer_0a(space, Reference::First);
    let s2 = symspace::symmetrizer_0a(space, Reference::Second);
    &s1 - &s2
}

fn binomial(n: u64, k: u64) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc
            .checked_mul(u128::from(n - j))
            .ok_or(Error::Overflow("binomial coefficient"))?
            / u128::from(j + 1);
    }
    Ok(acc)
}

/// Multiplicity of the two-row diagram `[λ1, λ2]` in `(C^d)^{⊗(λ1+λ2)}`:
/// `(λ1+d-1)! (λ2+d-2)! (λ1-λ2+1) / ((d-1)! (d-2)! (λ1+1)! λ2!)`.
pub fn partition_multiplicity(lambda1: u32, lambda2: u32, d: usize) -> Result<u128> {
    if d < 2 {
        return Err(Error::InvalidArgument("two-row multiplicity needs d >= 2".to_string()));
    }
    if lambda1 < lambda2 {
        return Err(Error::InvalidArgument(format!(
            "[{lambda1},{lambda2}] is not a partition"
        )));
    }
    let (l1, l2, d) = (u64::from(lambda1), u64::from(lambda2), d as u64);
    let numerator = binomial(l1 + d - 1, d - 1)?
        .checked_mul(binomial(l2 + d - 2, d - 2)?)
        .and_then(|x| x.checked_mul(u128::from(l1 - l2 + 1)))
        .ok_or(Error::Overflow("two-row multiplicity"))?;
    let divisor = u128::from(l1 + 1);
    debug_assert_eq!(numerator % divisor, 0);
    Ok(numerator / divisor)
}

/// Dimension of the `U(d)` irrep with Young diagram `rows`, by the
/// hook-content formula `∏ (d + c - r) / hook(r, c)`.
pub fn weyl_dimension(rows: &[u32], d: usize) -> Result<u128> {
    if rows.len() > d {
        return Ok(0);
    }
    let column_len = |c: u32| rows.iter().filter(|&&r| r > c).count() as u64;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for (r, &len) in rows.iter().enumerate() {
        for c in 0..len {
            let content = d as u64 + u64::from(c) - r as u64;
            let hook = u64::from(len - c - 1) + (column_len(c) - r as u64 - 1) + 1;
            num = num
                .checked_mul(u128::from(content))
                .ok_or(Error::Overflow("hook-content formula"))?;
            den = den
                .checked_mul(u128::from(hook))
                .ok_or(Error::Overflow("hook-content formula"))?;
            let g = gcd(num, den);
            num /= g;
            den /= g;
        }
    }
    debug_assert_eq!(den, 1);
    Ok(num / den)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Total size of `V_3` from `d·d_N² - d_{2N+1} - 2 Σ m_[λ1,λ2](d)`.
pub fn v3_dimension_by_subtraction(d: usize, n: usize) -> Result<usize> {
    if d < 2 {
        return Ok(0);
    }
    let total = d * sym_dim(d, n) * sym_dim(d, n);
    let v1 = sym_dim(d, 2 * n + 1);
    let mut v2 = 0usize;
    for l1 in (n + 1)..=(2 * n) {
        v2 += 2 * partition_multiplicity(l1 as u32, (2 * n + 1 - l1) as u32, d)? as usize;
    }
    total
        .checked_sub(v1 + v2)
        .ok_or(Error::Overflow("V3 dimension by subtraction"))
}

fn to_usize(x: u128) -> Result<usize> {
    usize::try_from(x).map_err(|_| Error::Overflow("multiplicity"))
}

/// Spectrum of `A` predicted from the decomposition of `[1]⊗[N]⊗[N]`:
/// `+1` on `[2N+1]`, `±(λ1-N)/(N+1)` on each `[λ1, 2N+1-λ1]` and `-1` on
/// each `[λ1, 2N-λ1, 1]`.
pub fn predicted_spectrum(d: usize, n: usize) -> Result<Vec<SpectralBlock>> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    if n == 0 {
        return Err(Error::ZeroCopies);
    }
    let top = PartitionLabel::new(vec![2 * n as u32 + 1])?;
    if d == 1 {
        return Ok(vec![SpectralBlock {
            label: top,
            eigenvalue: 1.0,
            multiplicity: 1,
        }]);
    }
    let mut out = vec![SpectralBlock {
        label: top,
        eigenvalue: 1.0,
        multiplicity: sym_dim(d, 2 * n + 1),
    }];
    for l1 in (n + 1)..=(2 * n) {
        let l2 = 2 * n + 1 - l1;
        let label = PartitionLabel::new(vec![l1 as u32, l2 as u32])?;
        let m = to_usize(partition_multiplicity(l1 as u32, l2 as u32, d)?)?;
        let a = (l1 - n) as f64 / (n as f64 + 1.0);
        for eigenvalue in [a, -a] {
            out.push(SpectralBlock {
                label: label.clone(),
                eigenvalue,
                multiplicity: m,
            });
        }
    }
    let v3_total = v3_dimension_by_subtraction(d, n)?;
    let mut v3_sum = 0;
    for l1 in n..=(2 * n - 1) {
        let rows = vec![l1 as u32, (2 * n - l1) as u32, 1];
        let m = to_usize(weyl_dimension(&rows, d)?)?;
        if m == 0 {
            continue;
        }
        v3_sum += m;
        out.push(SpectralBlock {
            label: PartitionLabel::new(rows)?,
            eigenvalue: -1.0,
            multiplicity: m,
        });
    }
    if v3_sum != v3_total {
        return Err(Error::InvalidArgument(format!(
            "three-row dimensions sum to {v3_sum} but subtraction gives {v3_total}"
        )));
    }
    Ok(out)
}

/// Multiplicity-expanded predicted eigenvalues, ascending.
pub fn expand_spectrum(blocks: &[SpectralBlock]) -> Vec<f64> {
    let mut v: Vec<f64> = blocks
        .iter()
        .flat_map(|b| std::iter::repeat_n(b.eigenvalue, b.multiplicity))
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

const ASSIGN_TOL: f64 = 1e-8;

/// Matches each computed eigenvalue to the nearest predicted value.
pub fn assign_blocks(eigenvalues: &[f64], predicted: &[SpectralBlock]) -> Result<Vec<AssignedBlock>> {
    let mut out: Vec<AssignedBlock> = Vec::new();
    for b in predicted {
        match out.iter_mut().find(|o| o.eigenvalue == b.eigenvalue) {
            Some(o) => {
                o.labels.push(b.label.clone());
                o.predicted_multiplicity += b.multiplicity;
            }
            None => out.push(AssignedBlock {
                eigenvalue: b.eigenvalue,
                labels: vec![b.label.clone()],
                predicted_multiplicity: b.multiplicity,
                observed_multiplicity: 0,
                max_deviation: 0.0,
            }),
        }
    }
    for &value in eigenvalues {
        let nearest = out
            .iter_mut()
            .min_by(|a, b| (a.eigenvalue - value).abs().total_cmp(&(b.eigenvalue - value).abs()))
            .ok_or(Error::UnassignedEigenvalue { value })?;
        let dev = (nearest.eigenvalue - value).abs();
        if dev > ASSIGN_TOL {
            return Err(Error::UnassignedEigenvalue { value });
        }
        nearest.observed_multiplicity += 1;
        nearest.max_deviation = nearest.max_deviation.max(dev);
    }
    out.sort_by(|a, b| a.eigenvalue.total_cmp(&b.eigenvalue));
    Ok(out)
}

/// `eigh(build_a(space))` with the blocks assigned to predicted partitions.
pub fn decompose_a(space: &Arc<CompressedSpace>) -> Result<SpectralDecomposition> {
    let a = build_a(space);
    decompose_a_from(&a)
}

pub(crate) fn decompose_a_from(a: &CompressedOperator) -> Result<SpectralDecomposition> {
    let mut decomp = eigh(a)?;
    let predicted = predicted_spectrum(a.d(), a.n())?;
    decomp.blocks = assign_blocks(&decomp.eigenvalues, &predicted)?;
    Ok(decomp)
}
