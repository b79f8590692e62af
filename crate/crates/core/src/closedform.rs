//! Analytic results: mean discrimination constants, the optimal
//! identification probability for general `d`, the qubit recoupling route,
//! and the large-`N` limit.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::spectral::partition_multiplicity;
use crate::symspace::sym_dim;
use crate::{Error, Result};

fn check_d(d: usize) -> Result<()> {
    if d == 0 {
        Err(Error::ZeroDimension)
    } else {
        Ok(())
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::ZeroCopies)
    } else {
        Ok(())
    }
}

/// `2^{d-1} (d-1)! / (2d-1)!!` as an exact integer pair, if it fits.
fn discrimination_ratio_exact(d: usize) -> Option<(u128, u128)> {
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for k in 1..d as u128 {
        num = num.checked_mul(2 * k)?;
        den = den.checked_mul(2 * k + 1)?;
    }
    Some((num, den))
}

/// Mean optimal unambiguous discrimination probability of two Haar-random
/// pure states, `1 - 2^{d-1}(d-1)!/(2d-1)!!`.
///
/// Exact in 128-bit integers while the factorials fit (d ≤ 30); beyond that
/// the ratio is accumulated as `∏ 2k/(2k+1)` in floating point, which agrees
/// to a few ulps.
pub fn pmax_discrimination(d: usize) -> Result<f64> {
    check_d(d)?;
    Ok(match discrimination_ratio_exact(d) {
        Some((num, den)) => (den - num) as f64 / den as f64,
        None => 1.0 - (1..d).map(|k| (2 * k) as f64 / (2 * k + 1) as f64).product::<f64>(),
    })
}

/// Exact rational form of [`pmax_discrimination`].
pub fn pmax_discrimination_exact(d: usize) -> Result<BigRational> {
    check_d(d)?;
    let mut ratio = BigRational::one();
    for k in 1..d {
        ratio *= BigRational::new(BigInt::from(2 * k), BigInt::from(2 * k + 1));
    }
    Ok(BigRational::one() - ratio)
}

/// Mean minimum-error discrimination probability, `1/2 + (d-1)/(2d-1)`.
pub fn pmean_minerror_discrimination(d: usize) -> Result<f64> {
    check_d(d)?;
    Ok(0.5 + (d as f64 - 1.0) / (2.0 * d as f64 - 1.0))
}

/// Optimal mean unambiguous identification probability
/// `(1/(d_{N+1} d_N)) Σ_{λ1=N+1}^{2N} m_[λ1,λ2](d) (1 - (λ1-N)/(N+1))`.
pub fn pmax_identification(d: usize, n: usize) -> Result<f64> {
    let (num, den) = pmax_identification_ratio(d, n)?;
    Ok(num as f64 / den as f64)
}

/// Numerator and denominator of [`pmax_identification`] in integers:
/// `Σ m (2N+1-λ1)` over `(N+1) d_{N+1} d_N`.
pub fn pmax_identification_ratio(d: usize, n: usize) -> Result<(u128, u128)> {
    check_d(d)?;
    check_n(n)?;
    let den = (n as u128 + 1)
        .checked_mul(sym_dim(d, n + 1) as u128)
        .and_then(|x| x.checked_mul(sym_dim(d, n) as u128))
        .ok_or(Error::Overflow("identification denominator"))?;
    if d == 1 {
        return Ok((0, den));
    }
    let mut num: u128 = 0;
    for l1 in (n + 1)..=(2 * n) {
        let l2 = 2 * n + 1 - l1;
        let m = partition_multiplicity(l1 as u32, l2 as u32, d)?;
        num = m
            .checked_mul(l2 as u128)
            .and_then(|t| num.checked_add(t))
            .ok_or(Error::Overflow("identification numerator"))?;
    }
    Ok((num, den))
}

/// `N / (3(N+1))`.
pub fn pmax_identification_qubit(n: usize) -> Result<f64> {
    check_n(n)?;
    Ok(n as f64 / (3.0 * (n as f64 + 1.0)))
}

/// Real orthogonal 2×2 recoupling matrix between the `(0,1)`-first and
/// `(0,2)`-first coupling schemes of a spin `1/2` with two spins `j = N/2`.
///
/// Rows are `J1 ∈ {j+1/2, j-1/2}`, columns `J2 ∈ {j+1/2, j-1/2}`, both in
/// descending order. Half-integers are stored doubled.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RacahMatrix {
    pub two_j: u32,
    pub two_total: u32,
    pub entries: [[f64; 2]; 2],
}

impl RacahMatrix {
    /// `R^J_{j-j-}`.
    pub fn minus_minus(&self) -> f64 {
        self.entries[1][1]
    }

    /// `R^J_{j+j-}`.
    pub fn plus_minus(&self) -> f64 {
        self.entries[0][1]
    }

    /// Degeneracy `2J + 1` of each total angular momentum `J`.
    pub fn degeneracy(&self) -> u32 {
        self.two_total + 1
    }

    /// `‖R R^T - 1‖_max`.
    pub fn orthogonality_residual(&self) -> f64 {
        let r = &self.entries;
        let mut worst = 0.0_f64;
        for i in 0..2 {
            for k in 0..2 {
                let dot = r[i][0] * r[k][0] + r[i][1] * r[k][1];
                let target = if i == k { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

/// Recoupling matrix for `j = N/2` and total angular momentum `J`, given as
/// `two_total = 2J ∈ {1, 3, ..., 2N-1}`.
pub fn racah_matrix(n: usize, two_total: u32) -> Result<RacahMatrix> {
    check_n(n)?;
    let two_n = 2 * n as u32;
    if two_total.is_multiple_of(2) || two_total > two_n - 1 {
        return Err(Error::InvalidArgument(format!(
            "2J = {two_total} outside {{1, 3, ..., {}}} for N = {n}",
            two_n - 1
        )));
    }
    // With 2j = N: (J + 1/2)/(2j + 1) = (2J + 1) / (2(N + 1)) and
    // (2j+J+3/2)(2j-J+1/2) = (2N+2J+3)(2N-2J+1)/4.
    let scale = 2.0 * (n as f64 + 1.0);
    let diag = f64::from(two_total + 1) / scale;
    let off = (f64::from(two_n + two_total + 3) * f64::from(two_n - two_total + 1)).sqrt() / scale;
    Ok(RacahMatrix {
        two_j: n as u32,
        two_total,
        entries: [[diag, off], [off, -diag]],
    })
}

/// All recoupling matrices for `J = 1/2, ..., 2j - 1/2`.
pub fn racah_matrices(n: usize) -> Result<Vec<RacahMatrix>> {
    check_n(n)?;
    (1..2 * n as u32).step_by(2).map(|t| racah_matrix(n, t)).collect()
}

/// `Σ_J (2J+1)(1 - |R^J_{j-j-}|) / (d_{N+1} d_N)` at `d = 2`.
pub fn qubit_pmax_via_racah(n: usize) -> Result<f64> {
    let sum: f64 = racah_matrices(n)?
        .iter()
        .map(|r| f64::from(r.degeneracy()) * (1.0 - r.minus_minus().abs()))
        .sum();
    Ok(sum / (sym_dim(2, n + 1) * sym_dim(2, n)) as f64)
}

/// Exact value of `2(d-1) ∫_0^1 x (1+x)^{d-2} (1-x)^{d-1} dx`, integrating the
/// expanded polynomial term by term.
pub fn asymptotic_pmax_exact(d: usize) -> Result<BigRational> {
    if d < 2 {
        return Err(Error::InvalidArgument("large-N limit needs d >= 2".to_string()));
    }
    // coefficients of x * (1+x)^{d-2} * (1-x)^{d-1}, lowest power first
    let mut poly = vec![BigInt::zero(), BigInt::one()];
    let multiply = |poly: &[BigInt], sign: i32| {
        let mut next = vec![BigInt::zero(); poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            next[k] += c;
            next[k + 1] += c * sign;
        }
        next
    };
    for _ in 0..d - 2 {
        poly = multiply(&poly, 1);
    }
    for _ in 0..d - 1 {
        poly = multiply(&poly, -1);
    }
    let integral = poly.iter().enumerate().fold(BigRational::zero(), |acc, (k, c)| {
        acc + BigRational::new(c.clone(), BigInt::from(k + 1))
    });
    Ok(integral * BigRational::from_integer(BigInt::from(2 * (d - 1))))
}

/// [`asymptotic_pmax_exact`] as a float.
pub fn asymptotic_pmax(d: usize) -> Result<f64> {
    asymptotic_pmax_exact(d)?
        .to_f64()
        .ok_or(Error::Overflow("asymptotic limit"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rational(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn discrimination_constants() {
        assert_eq!(pmax_discrimination(2).unwrap(), 1.0 / 3.0);
        assert_eq!(pmax_discrimination(1).unwrap(), 0.0);
        assert_eq!(pmax_discrimination(3).unwrap(), 7.0 / 15.0);
        assert_eq!(pmax_discrimination_exact(3).unwrap(), rational(7, 15));
        assert!(pmax_discrimination(0).is_err());
    }

    #[test]
    fn discrimination_fallback_path_is_continuous() {
        // 128-bit path ends around d = 30
        for d in [25, 30, 31, 32, 40, 60] {
            let exact = pmax_discrimination_exact(d).unwrap().to_f64().unwrap();
            assert!((pmax_discrimination(d).unwrap() - exact).abs() < 1e-14, "d={d}");
        }
        assert!(discrimination_ratio_exact(12).is_some());
    }

    #[test]
    fn minimum_error_constants() {
        assert!((pmean_minerror_discrimination(2).unwrap() - 5.0 / 6.0).abs() < 1e-15);
        assert_eq!(pmean_minerror_discrimination(1).unwrap(), 0.5);
        assert!((pmean_minerror_discrimination(3).unwrap() - 0.9).abs() < 1e-15);
        for d in 2..=20 {
            assert!(pmax_discrimination(d).unwrap() < pmean_minerror_discrimination(d).unwrap());
        }
    }

    #[test]
    fn identification_values() {
        assert!((pmax_identification(2, 1).unwrap() - 1.0 / 6.0).abs() < 1e-16);
        assert!((pmax_identification(2, 10).unwrap() - 10.0 / 33.0).abs() < 1e-16);
        assert!((pmax_identification(3, 1).unwrap() - 2.0 / 9.0).abs() < 1e-16);
        assert_eq!(pmax_identification(1, 4).unwrap(), 0.0);
    }

    #[test]
    fn identification_monotone_and_bounded() {
        for d in 2..=6 {
            let limit = pmax_discrimination(d).unwrap();
            let mut prev = 0.0;
            for n in 1..=25 {
                let p = pmax_identification(d, n).unwrap();
                assert!(p > prev && p < limit, "d={d} n={n}");
                prev = p;
            }
        }
    }

    #[test]
    fn qubit_gap_is_one_third_over_n_plus_one() {
        for n in 1..=30 {
            let gap = pmax_discrimination(2).unwrap() - pmax_identification(2, n).unwrap();
            assert!((gap - 1.0 / (3.0 * (n as f64 + 1.0))).abs() < 1e-12);
        }
    }

    #[test]
    fn qubit_routes_agree() {
        for n in 1..=12 {
            let a = pmax_identification(2, n).unwrap();
            let b = pmax_identification_qubit(n).unwrap();
            let c = qubit_pmax_via_racah(n).unwrap();
            assert!((a - b).abs() < 1e-14 && (b - c).abs() < 1e-12, "n={n}");
        }
        assert!((qubit_pmax_via_racah(1).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert!((qubit_pmax_via_racah(2).unwrap() - 2.0 / 9.0).abs() < 1e-15);
        assert!((qubit_pmax_via_racah(6).unwrap() - 2.0 / 7.0).abs() < 1e-15);
        assert!((pmax_identification_qubit(4).unwrap() - 4.0 / 15.0).abs() < 1e-16);
    }

    #[test]
    fn racah_single_copy() {
        let r = racah_matrix(1, 1).unwrap();
        assert!((r.entries[0][0] - 0.5).abs() < 1e-16);
        assert!((r.entries[1][1] + 0.5).abs() < 1e-16);
        assert!((r.entries[0][1] - 3f64.sqrt() / 2.0).abs() < 1e-16);
        assert_eq!(r.entries[0][1], r.entries[1][0]);
    }

    #[test]
    fn racah_orthogonal() {
        for n in 1..=12 {
            for r in racah_matrices(n).unwrap() {
                assert!(r.orthogonality_residual() < 1e-14);
            }
        }
    }

    #[test]
    fn racah_range_checked() {
        assert!(racah_matrix(2, 2).is_err());
        assert!(racah_matrix(2, 5).is_err());
        assert!(racah_matrix(2, 3).is_ok());
        assert_eq!(racah_matrices(3).unwrap().len(), 3);
    }

    #[test]
    fn asymptotic_limit() {
        assert_eq!(asymptotic_pmax_exact(2).unwrap(), rational(1, 3));
        assert_eq!(asymptotic_pmax_exact(3).unwrap(), rational(7, 15));
        for d in 2..=20 {
            assert_eq!(asymptotic_pmax_exact(d).unwrap(), pmax_discrimination_exact(d).unwrap());
        }
        assert!(asymptotic_pmax(1).is_err());
    }
}
