use crosswise_wasm::{compute_curve, compute_interval, MAX_N};

#[test]
fn interval_for_a_full_count() {
    let v = compute_interval(100, 100, 0.3, 0.95, "cp").unwrap();
    assert_eq!(v.lower, 0.0);
    assert!(v.lower_degenerate);
    assert_eq!(v.estimate, 0.0);
}

#[test]
fn asymptotic_methods_are_reachable() {
    let wp = compute_interval(100, 50, 0.3, 0.95, "wp").unwrap();
    let ap = compute_interval(100, 50, 0.3, 0.95, "AP").unwrap();
    assert!(wp.lower < 0.5 && 0.5 < wp.upper);
    assert!(((ap.lower + ap.upper) / 2.0 - 0.5).abs() < 1e-12);
}

#[test]
fn bad_inputs_become_messages() {
    assert!(compute_interval(10, 11, 0.3, 0.95, "cp")
        .unwrap_err()
        .contains("count"));
    assert!(compute_interval(10, 5, 0.3, 0.95, "exact").is_err());
    assert!(compute_interval(MAX_N + 1, 5, 0.3, 0.95, "cp").is_err());
    assert!(compute_curve(10, 0.3, 0.95, "cp", (0.1, 0.2, 0.0), None).is_err());
}

#[test]
fn curve_columns_line_up() {
    let c = compute_curve(1000, 0.12, 0.95, "cp", (0.001, 0.076, 0.005), Some(0.05)).unwrap();
    assert_eq!(c.pi().len(), 16);
    assert_eq!(c.coverage().len(), 16);
    assert_eq!(c.length_prob().len(), 16);
    assert!((c.length_prob()[0] - 0.922).abs() < 0.001);
    let plain = compute_curve(100, 0.3, 0.95, "wp", (0.01, 0.99, 0.01), None).unwrap();
    assert_eq!(plain.expected_length().len(), 99);
    assert!(plain.length_prob().is_empty());
    assert!(plain.coverage().iter().any(|&c| c < 0.95));
}
