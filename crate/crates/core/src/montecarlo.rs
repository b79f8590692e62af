//! Haar-random pure states drawn from reproducible per-sample streams, and
//! Monte Carlo estimates of the averaged quantities.
//!
//! Sample `k` of a run with seed `s` always draws from the ChaCha stream
//! `(s, k)`. Samples are accumulated in fixed chunks whose partial
//! statistics are merged in chunk order, so estimates are bit-identical for
//! any number of worker threads.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::closedform;
use crate::povm::{IdentificationProblem, Povm};
use crate::symspace::{sym_dim, SymBasis, FULL_SPACE_MAX_DIM};
use crate::{Error, Result};

pub const MIN_SAMPLES: usize = 1000;
const CHUNK: usize = 2048;

/// Random stream for sample `index` of a run seeded with `seed`.
pub fn sample_stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Unit vector in `C^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::ZeroDimension);
        }
        let norm = amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    fn normalized(mut amplitudes: Vec<Complex64>) -> Self {
        let norm = amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        amplitudes.iter_mut().for_each(|c| *c /= norm);
        Self { amplitudes }
    }

    /// Computational basis state `|level⟩`.
    pub fn basis(d: usize, level: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); d];
        amplitudes[level] = Complex64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &Self) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `U|φ⟩`, renormalized against rounding.
    pub fn transformed(&self, u: &DMatrix<Complex64>) -> Self {
        let v = u * DVector::from_column_slice(&self.amplitudes);
        Self::normalized(v.as_slice().to_vec())
    }
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Unitary-invariant random pure state: a normalized vector of independent
/// standard complex Gaussians.
pub fn sample_haar_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> PureState {
    loop {
        let amps: Vec<Complex64> = (0..d).map(|_| complex_normal(rng)).collect();
        if amps.iter().any(|c| c.norm_sqr() > 0.0) {
            return PureState::normalized(amps);
        }
    }
}

/// Haar-random unitary from the QR decomposition of a complex Ginibre matrix
/// with the phases of `R`'s diagonal absorbed into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(d, d, |_, _| complex_normal(rng));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for c in 0..d {
        let diag = r[(c, c)];
        let phase = if diag.norm() > 0.0 {
            diag / diag.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for row in 0..d {
            q[(row, c)] *= phase;
        }
    }
    q
}

/// Mean with standard error over `samples` independent draws.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
}

impl McEstimate {
    /// `|mean - target| <= max(3 stderr, rel · |target|)`.
    pub fn agrees_with(&self, target: f64, rel: f64) -> bool {
        (self.mean - target).abs() <= (3.0 * self.stderr).max(rel * target.abs())
    }
}

/// Welford accumulator with Chan's pairwise merge.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RunningStats {
    count: u64,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Self) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let total = self.count + other.count;
        let delta = other.mean - self.mean;
        self.mean += delta * other.count as f64 / total as f64;
        self.m2 += other.m2 + delta * delta * (self.count as f64 * other.count as f64) / total as f64;
        self.count = total;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn estimate(&self, seed: u64) -> McEstimate {
        McEstimate {
            mean: self.mean,
            stderr: (self.variance() / self.count.max(1) as f64).sqrt(),
            samples: self.count as usize,
            seed,
        }
    }
}

/// Runs `per_chunk` over `[start, end)` index ranges covering `0..samples`
/// and returns the partial results in chunk order.
fn map_chunks<T: Send>(samples: usize, per_chunk: impl Fn(usize, usize) -> T + Sync) -> Vec<T> {
    let chunks = samples.div_ceil(CHUNK);
    let run = |c: usize| per_chunk(c * CHUNK, ((c + 1) * CHUNK).min(samples));
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..chunks).into_par_iter().map(run).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..chunks).map(run).collect()
    }
}

fn estimate(samples: usize, seed: u64, f: impl Fn(&mut ChaCha8Rng) -> f64 + Sync) -> McEstimate {
    let parts = map_chunks(samples, |start, end| {
        let mut stats = RunningStats::default();
        for k in start..end {
            stats.push(f(&mut sample_stream(seed, k as u64)));
        }
        stats
    });
    let mut total = RunningStats::default();
    for p in &parts {
        total.merge(p);
    }
    total.estimate(seed)
}

fn check_samples(samples: usize) -> Result<()> {
    if samples < MIN_SAMPLES {
        Err(Error::InvalidArgument(format!(
            "at least {MIN_SAMPLES} samples required, got {samples}"
        )))
    } else {
        Ok(())
    }
}

/// `‖(1/M) Σ_k ρ_k^{⊗n} - S_n/d_n‖_F`, evaluated in the occupation basis of
/// `Sym^n` where `S_n/d_n` is `1/d_n`.
pub fn haar_moment_check(d: usize, n: usize, samples: usize, seed: u64) -> Result<f64> {
    let basis = SymBasis::new(d, n)?;
    let dn = basis.len();
    if dn > FULL_SPACE_MAX_DIM {
        return Err(Error::SizeGuard {
            what: "symmetric subspace",
            dim: dn,
            limit: FULL_SPACE_MAX_DIM,
        });
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("at least one sample required".to_string()));
    }
    let parts = map_chunks(samples, |start, end| {
        let mut acc = DMatrix::<Complex64>::zeros(dn, dn);
        for k in start..end {
            let phi = sample_haar_state(d, &mut sample_stream(seed, k as u64));
            let p = basis.product_state_unchecked(phi.amplitudes());
            acc.gerc(Complex64::new(1.0, 0.0), &p, &p, Complex64::new(1.0, 0.0));
        }
        acc
    });
    let mut mean = DMatrix::<Complex64>::zeros(dn, dn);
    for p in &parts {
        mean += p;
    }
    mean /= Complex64::new(samples as f64, 0.0);
    let target = DMatrix::<Complex64>::identity(dn, dn) / Complex64::new(sym_dim(d, n) as f64, 0.0);
    Ok((mean - target).norm())
}

/// Outcome probabilities for one pair of reference states, averaged over the
/// two equally likely inputs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OutcomeProbabilities {
    pub correct: f64,
    pub error: f64,
    pub inconclusive: f64,
}

/// `½ Σ_a tr[E_b ρ_a(0) ρ1^{⊗N}(1) ρ2^{⊗N}(2)]` for every outcome `b`.
pub fn conditional_probabilities(p: &Povm, phi1: &PureState, phi2: &PureState) -> Result<OutcomeProbabilities> {
    let space = p.space();
    for phi in [phi1, phi2] {
        if phi.dim() != space.d() {
            return Err(Error::DimensionMismatch {
                expected: space.d(),
                found: phi.dim(),
            });
        }
    }
    let p1 = space.basis().product_state_unchecked(phi1.amplitudes());
    let p2 = space.basis().product_state_unchecked(phi2.amplitudes());
    let psi1 = space.input_state_from_parts(phi1.amplitudes(), &p1, &p2);
    let psi2 = space.input_state_from_parts(phi2.amplitudes(), &p1, &p2);
    Ok(OutcomeProbabilities {
        correct: 0.5 * (p.e1.expectation(&psi1) + p.e2.expectation(&psi2)),
        error: 0.5 * (p.e2.expectation(&psi1) + p.e1.expectation(&psi2)),
        inconclusive: 0.5 * (p.e0.expectation(&psi1) + p.e0.expectation(&psi2)),
    })
}

/// Monte Carlo estimate of the optimal mean identification probability.
pub fn mc_mean_identification(d: usize, n: usize, samples: usize, seed: u64) -> Result<McEstimate> {
    check_samples(samples)?;
    let povm = IdentificationProblem::new(d, n)?.optimal_povm();
    mc_mean_success(&povm, samples, seed, None)
}

/// Same as [`mc_mean_identification`] with every sampled reference state
/// replaced by `U|φ⟩`.
pub fn mc_mean_identification_transformed(
    d: usize,
    n: usize,
    samples: usize,
    seed: u64,
    u: &DMatrix<Complex64>,
) -> Result<McEstimate> {
    check_samples(samples)?;
    if u.nrows() != d || u.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: u.nrows(),
        });
    }
    let povm = IdentificationProblem::new(d, n)?.optimal_povm();
    mc_mean_success(&povm, samples, seed, Some(u))
}

/// Mean correct-identification probability of an arbitrary measurement.
pub fn mc_mean_success(p: &Povm, samples: usize, seed: u64, u: Option<&DMatrix<Complex64>>) -> Result<McEstimate> {
    let d = p.d();
    Ok(estimate(samples, seed, |rng| {
        let mut phi1 = sample_haar_state(d, rng);
        let mut phi2 = sample_haar_state(d, rng);
        if let Some(u) = u {
            phi1 = phi1.transformed(u);
            phi2 = phi2.transformed(u);
        }
        conditional_probabilities(p, &phi1, &phi2)
            .expect("states sampled at the measurement's dimension")
            .correct
    }))
}

/// Largest error probability over `pairs` Haar-random reference pairs.
pub fn max_error_probability(p: &Povm, pairs: usize, seed: u64) -> Result<f64> {
    let d = p.d();
    let mut worst = 0.0_f64;
    for k in 0..pairs {
        let mut rng = sample_stream(seed, k as u64);
        let phi1 = sample_haar_state(d, &mut rng);
        let phi2 = sample_haar_state(d, &mut rng);
        worst = worst.max(conditional_probabilities(p, &phi1, &phi2)?.error);
    }
    Ok(worst)
}

/// Monte Carlo estimate of the mean of `1 - |⟨φ1|φ2⟩|`.
pub fn mc_mean_discrimination(d: usize, samples: usize, seed: u64) -> Result<McEstimate> {
    check_samples(samples)?;
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    Ok(estimate(samples, seed, |rng| {
        let phi1 = sample_haar_state(d, rng);
        let phi2 = sample_haar_state(d, rng);
        1.0 - phi1.overlap(&phi2).norm()
    }))
}

/// Closed-form target for [`mc_mean_identification`].
pub fn identification_target(d: usize, n: usize) -> Result<f64> {
    closedform::pmax_identification(d, n)
}
