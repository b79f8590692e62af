use proptest::prelude::*;

use qid_core::montecarlo::{mc_mean_discrimination, mc_mean_identification, RunningStats};
use qid_core::symspace::{product_state_coordinates, symmetrizer_0a, CompressedSpace, Reference};
use qid_core::Complex64;

fn unit_vector(raw: Vec<(f64, f64)>) -> Option<Vec<Complex64>> {
    let v: Vec<Complex64> = raw.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    (norm > 1e-3).then(|| v.iter().map(|c| c / norm).collect())
}

proptest! {
    #[test]
    fn product_coordinates_preserve_inner_products(
        d in 1usize..5,
        n in 0usize..5,
        a in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 4),
        b in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 4),
    ) {
        let (Some(x), Some(y)) = (unit_vector(a[..d].to_vec()), unit_vector(b[..d].to_vec())) else {
            return Ok(());
        };
        let px = product_state_coordinates(&x, n).unwrap();
        let py = product_state_coordinates(&y, n).unwrap();
        prop_assert!((px.norm() - 1.0).abs() < 1e-12);
        let overlap: Complex64 = x.iter().zip(&y).map(|(p, q)| p.conj() * q).sum();
        prop_assert!((px.dotc(&py) - overlap.powu(n as u32)).norm() < 1e-12);
    }

    #[test]
    fn welford_merge_is_partition_independent(
        xs in prop::collection::vec(-10.0f64..10.0, 2..200),
        cut in 0usize..200,
    ) {
        let cut = cut.min(xs.len());
        let mut whole = RunningStats::default();
        xs.iter().for_each(|&x| whole.push(x));
        let (mut l, mut r) = (RunningStats::default(), RunningStats::default());
        xs[..cut].iter().for_each(|&x| l.push(x));
        xs[cut..].iter().for_each(|&x| r.push(x));
        l.merge(&r);
        prop_assert_eq!(l.count(), whole.count());
        prop_assert!((l.mean() - whole.mean()).abs() < 1e-9);
        prop_assert!((l.variance() - whole.variance()).abs() < 1e-7);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn symmetrizers_are_orthogonal_projectors(d in 1usize..5, n in 1usize..4) {
        let space = CompressedSpace::new(d, n).unwrap();
        for a in [Reference::First, Reference::Second] {
            let s = symmetrizer_0a(&space, a);
            prop_assert!(s.hermiticity_residual() <= 1e-12);
            prop_assert!((&(&s * &s) - &s).frobenius_norm() <= 1e-12);
        }
    }
}

#[test]
fn estimates_do_not_depend_on_worker_count() {
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            (
                mc_mean_identification(2, 2, 9000, 41).unwrap(),
                mc_mean_discrimination(3, 9000, 41).unwrap(),
            )
        })
    };
    let one = run(1);
    let many = run(4);
    assert_eq!(one.0.mean.to_bits(), many.0.mean.to_bits());
    assert_eq!(one.0.stderr.to_bits(), many.0.stderr.to_bits());
    assert_eq!(one.1.mean.to_bits(), many.1.mean.to_bits());
}
