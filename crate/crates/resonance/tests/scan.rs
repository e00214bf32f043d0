//! Phase lower-bound scan over all sign pairs and dimensions.

use kg_resonance::{phase_bound_scan, PhaseScan, SignPair};

#[test]
fn scan_is_finite_and_stable_under_refinement() {
    let mut rows = vec![PhaseScan::CSV_HEADER.to_string()];
    for d in 1..=3 {
        for s in SignPair::ALL {
            let coarse = phase_bound_scan(s, d, 8.0, 0.25).unwrap();
            let fine = phase_bound_scan(s, d, 8.0, 0.125).unwrap();
            for r in [&coarse, &fine] {
                assert_eq!(r.singular, 0, "{} d={d}", s.label());
                assert!(r.c_measured.is_finite() && r.c_gradient.is_finite());
                assert!(r.min_abs_phase > 0.0);
            }
            for (a, b) in [(coarse.c_measured, fine.c_measured), (coarse.c_gradient, fine.c_gradient)] {
                assert!((b - a).abs() <= 0.25 * a, "{} d={d}: {a} vs {b}", s.label());
            }
            rows.push(coarse.csv_row());
        }
    }
    println!("{}", rows.join("\n"));
}

#[test]
fn minus_minus_is_bounded_by_its_origin_value() {
    for d in 1..=3 {
        let r = phase_bound_scan(SignPair::parse("--").unwrap(), d, 8.0, 0.25).unwrap();
        assert!((r.min_abs_phase - 3.0).abs() < 1e-14);
        assert!((r.c_measured - 1.0 / 3.0).abs() < 1e-14);
    }
}
