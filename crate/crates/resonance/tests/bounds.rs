//! Randomized multiplier-bound measurements on band-localized inputs.

use std::sync::Arc;

use kg_resonance::*;
use kg_spectral::{make_grid, Grid64, Sign};

const INF: f64 = f64::INFINITY;

fn suite(grid: &Arc<Grid64>, seed: u64) -> Vec<Vec<kg_spectral::Field64>> {
    random_suite(grid, 4, 2, seed)
}

/// Constant on the grid and on the grid with `L` and `n` doubled.
fn refined(
    m: &Bilinear64,
    kind: BoundKind,
    d: usize,
    n: usize,
    l: f64,
    ks: (i32, i32),
    e: &Exponents,
) -> (f64, f64) {
    let g1 = make_grid(d, n, l).unwrap();
    let g2 = make_grid(d, 2 * n, 2.0 * l).unwrap();
    let a = multiplier_bound_measure(m, kind, None, ks, e, &suite(&g1, 1)).unwrap();
    let b = multiplier_bound_measure(m, kind, None, ks, e, &suite(&g2, 2)).unwrap();
    assert_eq!(a.samples, 4);
    (a.constant, b.constant)
}

fn stable(name: &str, (a, b): (f64, f64), factor: f64) {
    println!("{name}: {a:.4e} -> {b:.4e}");
    assert!(a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0, "{name}");
    assert!(a.max(b) / a.min(b) <= factor, "{name}: {a:e} vs {b:e}");
}

#[test]
fn unit_symbol_is_bounded_by_cauchy_schwarz() {
    let e = Exponents::new(1.0, &[2.0, 2.0]).unwrap();
    for (d, n, l, ks) in [(1, 256, 8.0, (2, 3)), (2, 64, 8.0, (0, 1))] {
        let g = make_grid(d, n, l).unwrap();
        let r = multiplier_bound_measure(&Bilinear64::one(), BoundKind::Unit, None, ks, &e, &suite(&g, 9)).unwrap();
        assert!(r.constant <= 1.0 + 1e-6, "{}", r.constant);
    }
}

#[test]
fn quadratic_symbol_scales_like_the_high_band() {
    let grid = make_grid(1, 1024, 4.0 * std::f64::consts::PI).unwrap();
    let m: Bilinear64 = family_a(SignPair(Sign::Plus, Sign::Minus), &ASymbol::parse_product("eta1").unwrap());
    let e = Exponents::new(2.0, &[INF, 2.0]).unwrap();
    let s = random_suite(&grid, 4, 2, 21);
    let cs: Vec<f64> = (0..=4)
        .map(|k2| multiplier_bound_measure(&m, BoundKind::Quadratic, None, (0, k2), &e, &s).unwrap().constant)
        .collect();
    println!("a = eta1, k2 = 0..4: {cs:?}");
    let (lo, hi) = cs.iter().fold((INF, 0.0f64), |(lo, hi), &c| (lo.min(c), hi.max(c)));
    assert!(hi / lo <= 4.0, "{cs:?}");
}

/// `m_𝒬` lives on the cone `|ξ₁| <= 0.0016 |ξ₁+2ξ₂|`; the lattice must be fine
/// enough for a nonzero `ξ₁` to enter it while `ξ₂` stays below the 2/3 cut.
const QUARTIC_GRID: (usize, f64) = (4096, 16.0 * std::f64::consts::PI);

#[test]
fn quartic_family_is_finite_and_refinement_stable() {
    let n = regularity(1);
    let e = Exponents::new(2.0, &[INF, 2.0]).unwrap();
    for s in SignPair::ALL {
        let m: Bilinear64 = family_phase_quartic(s, n);
        let c = refined(&m, BoundKind::PhaseQuartic { n }, 1, QUARTIC_GRID.0, QUARTIC_GRID.1, (-1, 5), &e);
        stable(&format!("Phi^-1 m_Q {}", s.label()), c, 1.5);
    }
}

#[test]
fn split_quartic_bound_needs_separated_bands() {
    let n = regularity(1);
    let grid = make_grid(1, QUARTIC_GRID.0, QUARTIC_GRID.1).unwrap();
    let m: Bilinear64 = family_phase_quartic(SignPair(Sign::Plus, Sign::Minus), n);
    let e = Exponents::new(2.0, &[INF, 2.0]).unwrap();
    let s = random_suite(&grid, 3, 2, 5);
    let kind = BoundKind::PhaseQuarticSplit { n };
    let r = multiplier_bound_measure(&m, kind, None, (-1, 5), &e, &s).unwrap();
    println!("split quartic (-1,5): {:.4e}", r.constant);
    assert!(r.constant.is_finite() && r.constant > 0.0);
    assert!(matches!(multiplier_bound_measure(&m, kind, None, (0, 5), &e, &s), Err(ResonanceError::Bands(_))));
}

#[test]
fn energy_and_phase_families_are_finite_and_refinement_stable() {
    let d = 1;
    let e = Exponents::new(2.0, &[INF, 2.0]).unwrap();
    let a = ASymbol::parse_product("eta1, 1/lambda(xi-eta)").unwrap();
    for s in SignPair::ALL {
        let cases: Vec<(String, Bilinear64, BoundKind, (i32, i32))> = vec![
            (format!("m_S {}", s.label()), family_energy(s), BoundKind::Energy, (1, 3)),
            (format!("m_S1 {}", s.label()), family_energy_low(s), BoundKind::Energy, (2, 2)),
            (format!("Phi^-1 a {}", s.label()), family_phase_a(s, &a), BoundKind::PhaseQuadratic, (3, 1)),
        ];
        for (name, m, kind, ks) in cases {
            stable(&name, refined(&m, kind, d, 256, 4.0 * std::f64::consts::PI, ks, &e), 1.5);
        }
    }
}

#[test]
fn two_dimensional_energy_bound() {
    let e = Exponents::new(2.0, &[INF, 2.0]).unwrap();
    let m: Bilinear64 = family_energy(SignPair(Sign::Minus, Sign::Plus));
    stable("m_S 2d", refined(&m, BoundKind::Energy, 2, 32, 2.0 * std::f64::consts::PI, (1, 2), &e), 1.5);
}

#[test]
fn trilinear_bound_is_finite() {
    let grid = make_grid(2, 32, 2.0 * std::f64::consts::PI).unwrap();
    let one = ASymbol::one();
    let eta = ASymbol::parse_product("eta2").unwrap();
    let b: Trilinear64 = family_b(SignTriple(Sign::Plus, Sign::Minus, Sign::Plus), &eta, &one);
    let e = Exponents::new(2.0, &[INF, INF, 2.0]).unwrap();
    let s = random_suite(&grid, 2, 3, 4);
    let r = trilinear_bound_measure(&b, (0, 1, 2), &e, &s).unwrap();
    println!("trilinear (0,1,2): {:.4e}", r.constant);
    assert!(r.constant.is_finite() && r.constant > 0.0 && r.samples == 2);
    assert!(trilinear_bound_measure(&b, (0, 1, 2), &Exponents::new(1.0, &[2.0, 2.0]).unwrap(), &s).is_err());
}

#[test]
fn exponent_relation_is_enforced() {
    assert_eq!(Exponents::new(1.0, &[2.0, 4.0]), Err(ResonanceError::Exponents));
}
