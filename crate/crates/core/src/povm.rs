//! The optimal unambiguous-identification measurement, its validation, and
//! success probabilities evaluated by operator traces.

use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::montecarlo::{sample_haar_state, sample_stream};
use crate::spectral::{self, SpectralDecomposition};
use crate::symspace::{self, sym_dim, CompressedOperator, CompressedSpace, Reference};
use crate::Result;

/// Operators shared by every construction at fixed `(d, N)`.
#[derive(Clone, Debug)]
pub struct IdentificationProblem {
    space: Arc<CompressedSpace>,
    s01: CompressedOperator,
    s02: CompressedOperator,
    exchange: CompressedOperator,
    a: CompressedOperator,
    decomposition: SpectralDecomposition,
}

impl IdentificationProblem {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        let space = CompressedSpace::new(d, n)?;
        let s01 = symspace::symmetrizer_0a(&space, Reference::First);
        let s02 = symspace::symmetrizer_0a(&space, Reference::Second);
        let exchange = symspace::exchange_12(&space);
        let a = &(&s01 + &s02) - &CompressedOperator::identity(&space);
        let decomposition = spectral::decompose_a_from(&a)?;
        Ok(Self {
            space,
            s01,
            s02,
            exchange,
            a,
            decomposition,
        })
    }

    pub fn space(&self) -> &Arc<CompressedSpace> {
        &self.space
    }

    pub fn symmetrizer(&self, a: Reference) -> &CompressedOperator {
        match a {
            Reference::First => &self.s01,
            Reference::Second => &self.s02,
        }
    }

    pub fn exchange(&self) -> &CompressedOperator {
        &self.exchange
    }

    pub fn a(&self) -> &CompressedOperator {
        &self.a
    }

    pub fn decomposition(&self) -> &SpectralDecomposition {
        &self.decomposition
    }

    /// `1/(2 d_{N+1} d_N)`.
    fn success_normalization(&self) -> f64 {
        let (d, n) = (self.space.d(), self.space.n());
        1.0 / (2.0 * (sym_dim(d, n + 1) * sym_dim(d, n)) as f64)
    }

    /// `E1 = (1+|A|)^{-1}(1 - S(02))`, `E2 = T E1 T`, `E0 = (A+|A|)/(1+|A|)`.
    pub fn optimal_povm(&self) -> Povm {
        let e = self.decomposition.apply(|x| 1.0 / (1.0 + x.abs()));
        let e0 = self.decomposition.apply(|x| (x + x.abs()) / (1.0 + x.abs()));
        self.structured_povm(&e, Some(e0))
    }

    /// `E1 = e(1 - S(02))`, `E2 = T E1 T` and, unless given, `E0 = 1 - E1 - E2`.
    fn structured_povm(&self, e: &CompressedOperator, e0: Option<CompressedOperator>) -> Povm {
        let one = CompressedOperator::identity(&self.space);
        let e1 = (e * &(&one - &self.s02)).symmetrized();
        let e2 = &(&self.exchange * &e1) * &self.exchange;
        let e0 = e0.unwrap_or_else(|| &(&one - &e1) - &e2);
        Povm { e0, e1, e2 }
    }
}

/// Three-outcome measurement on `V_sym`: `e1`/`e2` name the reference state,
/// `e0` is inconclusive.
#[derive(Clone, Debug)]
pub struct Povm {
    pub e0: CompressedOperator,
    pub e1: CompressedOperator,
    pub e2: CompressedOperator,
}

impl Povm {
    pub fn d(&self) -> usize {
        self.e0.d()
    }

    pub fn n(&self) -> usize {
        self.e0.n()
    }

    pub fn space(&self) -> &Arc<CompressedSpace> {
        self.e0.space()
    }

    pub fn elements(&self) -> [&CompressedOperator; 3] {
        [&self.e0, &self.e1, &self.e2]
    }

    /// Always answers "inconclusive".
    pub fn inconclusive(space: &Arc<CompressedSpace>) -> Self {
        Self {
            e0: CompressedOperator::identity(space),
            e1: CompressedOperator::zeros(space),
            e2: CompressedOperator::zeros(space),
        }
    }
}

/// Findings of [`validate_povm`]. All residuals are nonnegative.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    /// Smallest eigenvalue of `E0`, `E1`, `E2`.
    pub min_eigenvalues: [f64; 3],
    /// `‖E0 + E1 + E2 - 1‖_F`.
    pub completeness_residual: f64,
    /// Largest error probability `tr[E1 ρ2(0) ρ1^{⊗N} ρ2^{⊗N}]` or
    /// `tr[E2 ρ1(0) ρ1^{⊗N} ρ2^{⊗N}]` over the sampled pairs.
    pub noerror_residual_max: f64,
    /// `max(‖E1 S(02)‖_F, ‖E2 S(01)‖_F)`.
    pub operator_residual: f64,
    /// `‖E2 - T E1 T‖_F`.
    pub exchange_residual: f64,
    /// Largest asymmetry over the three elements.
    pub hermiticity_residual: f64,
    pub pairs_tested: usize,
    pub tol: f64,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        let tol = self.tol;
        self.min_eigenvalues.iter().all(|&m| m >= -tol)
            && self.completeness_residual <= tol
            && self.noerror_residual_max <= tol
            && self.operator_residual <= tol
            && self.exchange_residual <= tol
            && self.hermiticity_residual <= tol
    }
}

/// Checks positivity, completeness, exchange covariance and the no-error
/// conditions, the latter both as operator identities and on `pairs`
/// Haar-random reference pairs drawn from `seed`.
pub fn validate_povm(p: &Povm, pairs: usize, tol: f64, seed: u64) -> Result<ValidationReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(crate::Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let space = p.space();
    let s01 = symspace::symmetrizer_0a(space, Reference::First);
    let s02 = symspace::symmetrizer_0a(space, Reference::Second);
    let t = symspace::exchange_12(space);
    let one = CompressedOperator::identity(space);

    let hermiticity_residual = p
        .elements()
        .iter()
        .map(|e| e.hermiticity_residual())
        .fold(0.0, f64::max);
    let mut min_eigenvalues = [0.0; 3];
    for (slot, e) in min_eigenvalues.iter_mut().zip(p.elements()) {
        let decomp = spectral::eigh(&e.symmetrized())?;
        *slot = decomp.eigenvalues().first().copied().unwrap_or(0.0);
    }
    let completeness_residual = (&(&(&p.e0 + &p.e1) + &p.e2) - &one).frobenius_norm();
    let operator_residual = (&p.e1 * &s02).frobenius_norm().max((&p.e2 * &s01).frobenius_norm());
    let exchange_residual = (&p.e2 - &(&(&t * &p.e1) * &t)).frobenius_norm();

    let d = space.d();
    let mut noerror_residual_max = 0.0_f64;
    for k in 0..pairs {
        let mut rng = sample_stream(seed, k as u64);
        let phi1 = sample_haar_state(d, &mut rng);
        let phi2 = sample_haar_state(d, &mut rng);
        let p1 = space.basis().product_state_unchecked(phi1.amplitudes());
        let p2 = space.basis().product_state_unchecked(phi2.amplitudes());
        let psi1 = space.input_state_from_parts(phi1.amplitudes(), &p1, &p2);
        let psi2 = space.input_state_from_parts(phi2.amplitudes(), &p1, &p2);
        let wrong = p.e1.expectation(&psi2).abs().max(p.e2.expectation(&psi1).abs());
        noerror_residual_max = noerror_residual_max.max(wrong);
    }

    Ok(ValidationReport {
        min_eigenvalues,
        completeness_residual,
        noerror_residual_max,
        operator_residual,
        exchange_residual,
        hermiticity_residual,
        pairs_tested: pairs,
        tol,
    })
}

/// `(tr[E1 S(01)] + tr[E2 S(02)]) / (2 d_{N+1} d_N)`.
pub fn mean_success_from_povm(p: &Povm) -> f64 {
    let space = p.space();
    let (d, n) = (space.d(), space.n());
    let s01 = symspace::symmetrizer_0a(space, Reference::First);
    let s02 = symspace::symmetrizer_0a(space, Reference::Second);
    let norm = 1.0 / (2.0 * (sym_dim(d, n + 1) * sym_dim(d, n)) as f64);
    norm * (p.e1.trace_product(&s01) + p.e2.trace_product(&s02))
}

/// `tr[1 - |A|] / (2 d_{N+1} d_N)` from the computed spectrum of `A`.
pub fn mean_success_optimal_spectral(d: usize, n: usize) -> Result<f64> {
    let problem = IdentificationProblem::new(d, n)?;
    Ok(optimal_success(&problem))
}

pub(crate) fn optimal_success(problem: &IdentificationProblem) -> f64 {
    let sum: f64 = problem.decomposition.eigenvalues().iter().map(|x| 1.0 - x.abs()).sum();
    problem.success_normalization() * sum
}

pub fn build_optimal_povm(d: usize, n: usize) -> Result<Povm> {
    Ok(IdentificationProblem::new(d, n)?.optimal_povm())
}

/// One coefficient of `e = Σ e_λ Γ_λ`, attached to a set of eigenvalues of
/// `A` sharing `|a|` and sign class.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoefficientGroup {
    pub labels: Vec<crate::spectral::PartitionLabel>,
    /// `|a|` on this group.
    pub abs_eigenvalue: f64,
    /// `true` for the totally symmetric block, where `e` is irrelevant.
    pub symmetric: bool,
    /// `1/(1+|a|)`.
    pub bound: f64,
}

/// Feasible measurements `E1 = e(1 - S(02))`, `E2 = T E1 T` with `e` a
/// nonnegative function of the spectral block, bounded by `1/(1+|A|)`.
#[derive(Clone, Debug)]
pub struct FeasibleFamily<'a> {
    problem: &'a IdentificationProblem,
    groups: Vec<CoefficientGroup>,
}

const GROUP_TOL: f64 = 1e-8;

impl<'a> FeasibleFamily<'a> {
    pub fn new(problem: &'a IdentificationProblem) -> Self {
        let mut groups: Vec<CoefficientGroup> = Vec::new();
        for block in problem.decomposition.blocks() {
            let value = block.eigenvalue;
            let symmetric = (value - 1.0).abs() < GROUP_TOL;
            let abs = value.abs();
            match groups
                .iter_mut()
                .find(|g| g.symmetric == symmetric && (g.abs_eigenvalue - abs).abs() < GROUP_TOL)
            {
                Some(g) => {
                    for l in &block.labels {
                        if !g.labels.contains(l) {
                            g.labels.push(l.clone());
                        }
                    }
                }
                None => groups.push(CoefficientGroup {
                    labels: block.labels.clone(),
                    abs_eigenvalue: abs,
                    symmetric,
                    bound: 1.0 / (1.0 + abs),
                }),
            }
        }
        Self { problem, groups }
    }

    pub fn groups(&self) -> &[CoefficientGroup] {
        &self.groups
    }

    fn group_of(&self, value: f64) -> usize {
        let symmetric = (value - 1.0).abs() < GROUP_TOL;
        self.groups
            .iter()
            .position(|g| g.symmetric == symmetric && (g.abs_eigenvalue - value.abs()).abs() < GROUP_TOL)
            .expect("eigenvalue of A outside every coefficient group")
    }

    /// Measurement for explicit coefficients, one per [`groups`](Self::groups)
    /// entry. Coefficients are not clamped.
    pub fn povm_with(&self, coefficients: &[f64]) -> Povm {
        assert_eq!(coefficients.len(), self.groups.len(), "one coefficient per group");
        let e = self.problem.decomposition.apply(|x| coefficients[self.group_of(x)]);
        self.problem.structured_povm(&e, None)
    }

    /// Coefficients drawn uniformly on `[0, bound]`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Povm {
        let coefficients: Vec<f64> = self.groups.iter().map(|g| rng.random::<f64>() * g.bound).collect();
        self.povm_with(&coefficients)
    }

    /// Every coefficient at its bound.
    pub fn upper_bounds(&self) -> Vec<f64> {
        self.groups.iter().map(|g| g.bound).collect()
    }
}

/// A random feasible (generally suboptimal) measurement at `(d, N)`.
pub fn random_feasible_povm<R: Rng + ?Sized>(d: usize, n: usize, rng: &mut R) -> Result<Povm> {
    let problem = IdentificationProblem::new(d, n)?;
    Ok(FeasibleFamily::new(&problem).sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedform;
    use nalgebra::DMatrix;

    #[test]
    fn single_copy_qubit_povm_matches_closed_form() {
        let problem = IdentificationProblem::new(2, 1).unwrap();
        let p = problem.optimal_povm();
        let one = CompressedOperator::identity(problem.space());
        let expect = &(&one - problem.symmetrizer(Reference::Second)) * (2.0 / 3.0);
        assert!((&p.e1 - &expect).max_abs() < 1e-12);
    }

    #[test]
    fn single_copy_qubit_povm_is_scaled_singlet() {
        let problem = IdentificationProblem::new(2, 1).unwrap();
        let p = problem.optimal_povm();
        // singlet on systems (0, 2) in the 0 ⊗ 1 ⊗ 2 qubit ordering
        let mut singlet = DMatrix::<f64>::zeros(8, 8);
        let s = 0.5_f64.sqrt();
        let mut v = nalgebra::DVector::<f64>::zeros(4);
        v[1] = s; // |0⟩_0 |1⟩_2
        v[2] = -s; // |1⟩_0 |0⟩_2
        let proj = &v * v.transpose();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for e in 0..2 {
                        for mid in 0..2 {
                            singlet[(a * 4 + mid * 2 + b, c * 4 + mid * 2 + e)] = proj[(a * 2 + b, c * 2 + e)];
                        }
                    }
                }
            }
        }
        // at N = 1 the compressed basis coincides with the computational basis
        assert!((p.e1.entries() - singlet * (2.0 / 3.0)).amax() < 1e-12);
    }

    #[test]
    fn completeness_holds() {
        for (d, n) in [(1, 2), (2, 1), (2, 3), (3, 2), (4, 1)] {
            let p = build_optimal_povm(d, n).unwrap();
            let one = CompressedOperator::identity(p.space());
            assert!((&(&(&p.e0 + &p.e1) + &p.e2) - &one).frobenius_norm() < 1e-12);
        }
    }

    #[test]
    fn success_values() {
        let p = build_optimal_povm(2, 1).unwrap();
        assert!((mean_success_from_povm(&p) - 1.0 / 6.0).abs() < 1e-12);
        let p = build_optimal_povm(3, 1).unwrap();
        assert!((mean_success_from_povm(&p) - 2.0 / 9.0).abs() < 1e-12);
        assert!((mean_success_optimal_spectral(2, 4).unwrap() - 4.0 / 15.0).abs() < 1e-12);
        assert!((mean_success_optimal_spectral(3, 1).unwrap() - 2.0 / 9.0).abs() < 1e-12);
        assert!(mean_success_optimal_spectral(2, 9).unwrap() < 1.0 / 3.0);
        let space = CompressedSpace::new(3, 2).unwrap();
        assert_eq!(mean_success_from_povm(&Povm::inconclusive(&space)), 0.0);
    }

    #[test]
    fn spectral_and_trace_routes_agree() {
        for (d, n) in [(2, 2), (2, 5), (3, 2), (4, 2)] {
            let problem = IdentificationProblem::new(d, n).unwrap();
            let via_povm = mean_success_from_povm(&problem.optimal_povm());
            let via_spectrum = optimal_success(&problem);
            assert!((via_povm - via_spectrum).abs() < 1e-12);
            assert!((via_spectrum - closedform::pmax_identification(d, n).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn optimal_povm_validates() {
        let p = build_optimal_povm(2, 1).unwrap();
        let report = validate_povm(&p, 100, 1e-12, 3).unwrap();
        assert!(report.passed(), "{report:?}");
        assert!(report.noerror_residual_max <= 1e-12);
        assert_eq!(report.pairs_tested, 100);
    }

    #[test]
    fn inconclusive_povm_validates_with_zero_residuals() {
        let space = CompressedSpace::new(3, 1).unwrap();
        let report = validate_povm(&Povm::inconclusive(&space), 20, 1e-12, 0).unwrap();
        assert!(report.passed());
        assert_eq!(report.noerror_residual_max, 0.0);
        assert_eq!(report.operator_residual, 0.0);
        assert_eq!(report.completeness_residual, 0.0);
    }

    #[test]
    fn injected_fault_is_flagged() {
        let problem = IdentificationProblem::new(2, 1).unwrap();
        let mut p = problem.optimal_povm();
        p.e1 = &p.e1 + &(problem.symmetrizer(Reference::Second) * 0.1);
        let report = validate_povm(&p, 50, 1e-12, 1).unwrap();
        assert!(!report.passed());
        assert!((report.noerror_residual_max - 0.1).abs() < 1e-12, "{report:?}");
        assert!(report.operator_residual > 0.1);
    }

    #[test]
    fn zero_tolerance_rejected() {
        let p = build_optimal_povm(2, 1).unwrap();
        assert!(validate_povm(&p, 1, 0.0, 0).is_err());
    }

    #[test]
    fn feasible_family_limits() {
        let problem = IdentificationProblem::new(3, 2).unwrap();
        let family = FeasibleFamily::new(&problem);
        let zero = family.povm_with(&vec![0.0; family.groups().len()]);
        assert_eq!(zero.e1.max_abs(), 0.0);
        assert_eq!(mean_success_from_povm(&zero), 0.0);
        let top = family.povm_with(&family.upper_bounds());
        let opt = problem.optimal_povm();
        for (x, y) in top.elements().iter().zip(opt.elements()) {
            assert!((*x - y).max_abs() < 1e-12);
        }
    }

    #[test]
    fn feasible_samples_are_valid_and_dominated() {
        let problem = IdentificationProblem::new(2, 2).unwrap();
        let family = FeasibleFamily::new(&problem);
        let best = optimal_success(&problem);
        let mut rng = sample_stream(11, 0);
        for _ in 0..30 {
            let p = family.sample(&mut rng);
            let report = validate_povm(&p, 5, 1e-10, 2).unwrap();
            assert!(report.passed(), "{report:?}");
            assert!(mean_success_from_povm(&p) <= best + 1e-10);
        }
    }
}
