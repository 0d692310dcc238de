use std::collections::HashMap;

use crosswise::sample_size::{
    check_design_grid, linear_scan, min_n_assured, min_n_expected, search, Criterion, DesignSpec,
    SearchOptions,
};

fn spec(pi0: f64, d: f64, lambda: Option<f64>) -> DesignSpec {
    DesignSpec::new(pi0, 0.5, 0.95, d, lambda).unwrap()
}

#[test]
fn small_table_cells() {
    assert_eq!(min_n_expected(&spec(0.1, 0.05, None)).unwrap().n_min, 1326);
    assert_eq!(
        min_n_assured(&spec(0.1, 0.05, Some(0.01))).unwrap().n_min,
        1570
    );
    assert_eq!(
        min_n_assured(&spec(0.2, 0.05, Some(0.05))).unwrap().n_min,
        3845
    );
    assert_eq!(
        min_n_assured(&spec(0.3, 0.06, Some(0.05))).unwrap().n_min,
        6615
    );
}

#[test]
fn isolated_pass_below_a_failing_run_is_found() {
    // passes at 1326, fails on 1327..=1334, passes again from 1335
    let r = min_n_expected(&spec(0.1, 0.05, None)).unwrap();
    assert_eq!(r.n_min, 1326);
    assert_eq!(
        linear_scan(&spec(0.1, 0.05, None), Criterion::Expected, 1000..=1400).unwrap(),
        Some(1326)
    );
    assert!(r.scan_window.0 < 1326 && r.scan_window.1 >= 1326);
}

#[test]
fn repeated_searches_agree() {
    let s = spec(0.2, 0.06, Some(0.05));
    assert_eq!(min_n_assured(&s).unwrap(), min_n_assured(&s).unwrap());
}

#[test]
fn orderings_across_all_cells() {
    let mut expected = HashMap::new();
    let mut assured = HashMap::new();
    let key = |pi0: f64, d: f64| ((pi0 * 100.0) as u32, (d * 100.0) as u32);
    for pi0 in [0.1, 0.2, 0.3, 0.4] {
        for d in [0.05, 0.06] {
            expected.insert(
                key(pi0, d),
                min_n_expected(&spec(pi0, d, None)).unwrap().n_min,
            );
            for lambda in [0.01, 0.05] {
                let n = min_n_assured(&spec(pi0, d, Some(lambda))).unwrap().n_min;
                assured.insert((key(pi0, d), (lambda * 100.0) as u32), n);
            }
        }
    }
    for pi0 in [10, 20, 30, 40] {
        assert!(expected[&(pi0, 5)] > expected[&(pi0, 6)]);
        for d in [5, 6] {
            let tight = assured[&((pi0, d), 1)];
            let loose = assured[&((pi0, d), 5)];
            assert!(tight >= loose);
            assert!(loose >= expected[&(pi0, d)]);
            if d == 5 {
                assert!(assured[&((pi0, 5), 1)] > assured[&((pi0, 6), 1)]);
            }
            if pi0 > 10 {
                assert!(expected[&(pi0, d)] > expected[&(pi0 - 10, d)]);
                assert!(assured[&((pi0, d), 1)] > assured[&((pi0 - 10, d), 1)]);
            }
        }
    }
}

#[test]
fn loose_targets_match_whole_range_scan() {
    for pi0 in [0.05, 0.15, 0.25, 0.35, 0.45] {
        for d in [0.15, 0.2, 0.3] {
            for (criterion, lambda) in
                [(Criterion::Expected, None), (Criterion::Assured, Some(0.1))]
            {
                let s = DesignSpec::new(pi0, 0.6, 0.9, d, lambda).unwrap();
                let got = search(&s, criterion, &SearchOptions::default())
                    .unwrap()
                    .n_min;
                assert_eq!(
                    linear_scan(&s, criterion, 1..=got).unwrap(),
                    Some(got),
                    "{pi0} {d} {criterion:?}"
                );
            }
        }
    }
}

#[test]
fn grid_check_reports_points() {
    let s = spec(0.2, 0.1, Some(0.05));
    let n = min_n_assured(&s).unwrap().n_min;
    let report = check_design_grid(&s, Criterion::Assured, n, 4).unwrap();
    assert_eq!(report.points_checked, 16);
    for v in &report.violations {
        assert!(v.value < 0.95 && v.pi <= 0.2 && v.q < 0.5);
    }
}
