use std::collections::HashMap;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::{Error, Result};

/// Occupation numbers of `d` levels by `total` identical particles. Labels one
/// orthonormal basis vector of the symmetric subspace `Sym^total(C^d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccupationVector {
    counts: Vec<u32>,
    total: u32,
}

impl OccupationVector {
    pub fn new(counts: Vec<u32>) -> Self {
        let total = counts.iter().sum();
        Self { counts, total }
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn total(&self) -> u32 {
        self.total
    }

    pub fn levels(&self) -> usize {
        self.counts.len()
    }

    /// Adds one particle to `level`.
    pub fn raised(&self, level: usize) -> Self {
        let mut counts = self.counts.clone();
        counts[level] += 1;
        Self {
            counts,
            total: self.total + 1,
        }
    }

    /// Removes one particle from `level`, if it is occupied.
    pub fn lowered(&self, level: usize) -> Option<Self> {
        if self.counts[level] == 0 {
            return None;
        }
        let mut counts = self.counts.clone();
        counts[level] -= 1;
        Some(Self {
            counts,
            total: self.total - 1,
        })
    }

    /// `sqrt(total! / prod_i counts_i!)`, the norm of the unnormalized
    /// symmetrization of one representative product state.
    pub fn sqrt_multinomial(&self) -> f64 {
        let mut acc = 1.0_f64;
        let mut placed = 0u32;
        for &c in &self.counts {
            for k in 1..=c {
                placed += 1;
                acc *= placed as f64 / k as f64;
            }
        }
        acc.sqrt()
    }
}

impl fmt::Display for OccupationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.counts.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Ordered occupation-number basis of `Sym^n(C^d)`.
///
/// Vectors are sorted colexicographically on their counts (last level is the
/// most significant), so `(1,0)` precedes `(0,1)`.
#[derive(Clone, Debug)]
pub struct SymBasis {
    d: usize,
    n: usize,
    vectors: Vec<OccupationVector>,
    index: HashMap<OccupationVector, usize>,
}

impl SymBasis {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut vectors = Vec::new();
        let mut counts = vec![0u32; d];
        compositions(n as u32, 0, &mut counts, &mut vectors);
        vectors.sort_by(|a, b| a.counts.iter().rev().cmp(b.counts.iter().rev()));
        let index = vectors.iter().enumerate().map(|(k, v)| (v.clone(), k)).collect();
        Ok(Self { d, n, vectors, index })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[OccupationVector] {
        &self.vectors
    }

    pub fn get(&self, k: usize) -> &OccupationVector {
        &self.vectors[k]
    }

    pub fn position(&self, v: &OccupationVector) -> Option<usize> {
        self.index.get(v).copied()
    }

    /// Coordinates of `|φ⟩^{⊗n}` in this basis. The component on `m` is
    /// `sqrt(n!/∏ m_i!) ∏ c_i^{m_i}`.
    pub fn product_state(&self, state: &[Complex64]) -> Result<DVector<Complex64>> {
        if state.len() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: state.len(),
            });
        }
        let norm = state.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(self.product_state_unchecked(state))
    }

    pub(crate) fn product_state_unchecked(&self, state: &[Complex64]) -> DVector<Complex64> {
        // powers[i][k] = c_i^k
        let powers: Vec<Vec<Complex64>> = state
            .iter()
            .map(|&c| {
                let mut row = Vec::with_capacity(self.n + 1);
                let mut acc = Complex64::new(1.0, 0.0);
                for _ in 0..=self.n {
                    row.push(acc);
                    acc *= c;
                }
                row
            })
            .collect();
        DVector::from_iterator(
            self.len(),
            self.vectors.iter().map(|m| {
                let amp = m
                    .counts
                    .iter()
                    .enumerate()
                    .fold(Complex64::new(1.0, 0.0), |acc, (i, &k)| acc * powers[i][k as usize]);
                amp * m.sqrt_multinomial()
            }),
        )
    }

    /// Matrix of `U^{⊗n}` restricted to `Sym^n`, obtained by expanding
    /// `∏_i (Σ_k U_{ki} a_k^†)^{m_i}` on each basis vector.
    pub fn unitary_power(&self, u: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
        if u.nrows() != self.d || u.ncols() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: u.nrows(),
            });
        }
        let factorial = |k: u32| (1..=k).map(f64::from).product::<f64>();
        let mut out = DMatrix::zeros(self.len(), self.len());
        for (col, m) in self.vectors.iter().enumerate() {
            let mut poly: HashMap<Vec<u32>, Complex64> = HashMap::new();
            poly.insert(vec![0; self.d], Complex64::new(1.0, 0.0));
            for (i, &mi) in m.counts.iter().enumerate() {
                for _ in 0..mi {
                    let mut next: HashMap<Vec<u32>, Complex64> = HashMap::new();
                    for (mono, coef) in &poly {
                        for k in 0..self.d {
                            let mut raised = mono.clone();
                            raised[k] += 1;
                            *next.entry(raised).or_default() += coef * u[(k, i)];
                        }
                    }
                    poly = next;
                }
            }
            let in_norm: f64 = m.counts.iter().map(|&c| factorial(c)).product::<f64>().sqrt();
            for (mono, coef) in poly {
                let out_norm: f64 = mono.iter().map(|&c| factorial(c)).product::<f64>().sqrt();
                let row = self.index[&OccupationVector::new(mono)];
                out[(row, col)] = coef * (out_norm / in_norm);
            }
        }
        Ok(out)
    }
}

fn compositions(remaining: u32, level: usize, counts: &mut [u32], out: &mut Vec<OccupationVector>) {
    if level + 1 == counts.len() {
        counts[level] = remaining;
        out.push(OccupationVector::new(counts.to_vec()));
        return;
    }
    for c in 0..=remaining {
        counts[level] = c;
        compositions(remaining - c, level + 1, counts, out);
    }
}

/// All occupation vectors of `n` particles on `d` levels in basis order.
pub fn enumerate_occupation_basis(d: usize, n: usize) -> Result<SymBasis> {
    SymBasis::new(d, n)
}

/// Coordinates of `|φ⟩^{⊗n}` in the occupation basis of `Sym^n(C^d)`.
pub fn product_state_coordinates(state: &[Complex64], n: usize) -> Result<DVector<Complex64>> {
    SymBasis::new(state.len(), n)?.product_state(state)
}

/// `d_n = binomial(n + d - 1, d - 1)`, the dimension of `Sym^n(C^d)`.
pub fn sym_dim(d: usize, n: usize) -> usize {
    if d == 0 {
        return 0;
    }
    let (top, k) = (n + d - 1, d - 1);
    let k = k.min(top - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc * (top - j) as u128 / (j + 1) as u128;
    }
    acc as usize
}
