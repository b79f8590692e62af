use qid_web::{curve_values, sample_values, spectrum_rows, PAGE_MAX_DIM};

#[test]
fn qubit_curve() {
    let c = curve_values(2, 8).unwrap();
    assert_eq!(c.len(), 8);
    for (k, p) in c.iter().enumerate() {
        let n = (k + 1) as f64;
        assert!((p - n / (3.0 * (n + 1.0))).abs() < 1e-15);
    }
    assert!(curve_values(0, 3).is_err());
}

#[test]
fn spectrum_weights_sum_to_optimum() {
    for (d, n) in [(2, 3), (3, 2), (4, 1)] {
        let rows = spectrum_rows(d, n).unwrap();
        let total: usize = rows.iter().map(|r| r.multiplicity).sum();
        let dn = qid_core::symspace::sym_dim(d, n);
        assert_eq!(total, d * dn * dn);
        let weight: f64 = rows.iter().map(|r| r.weight).sum();
        let norm = 2.0 * (qid_core::symspace::sym_dim(d, n + 1) * dn) as f64;
        let p = qid_core::closedform::pmax_identification(d, n).unwrap();
        assert!((weight / norm - p).abs() < 1e-12);
    }
}

#[test]
fn oversized_spectrum_is_refused() {
    let err = spectrum_rows(4, 5).unwrap_err();
    assert!(err.contains(&PAGE_MAX_DIM.to_string()));
}

#[test]
fn sampling_is_seeded() {
    let a = sample_values(2, 1, 4000, 9).unwrap();
    let b = sample_values(2, 1, 4000, 9).unwrap();
    assert_eq!(a, b);
    assert!((a[0] - a[2]).abs() < 5.0 * a[1]);
}
