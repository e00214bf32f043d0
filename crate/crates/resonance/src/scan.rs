//! Brute-force lattice scan of the phase lower bound and its derivative bound.
//!
//! The phase depends on `ξ, η` only through `|ξ|, |η|, |ξ-η|`, so for `d >= 2`
//! the scan fixes `ξ = (s, 0, ..)` with `s ∈ hℤ ∩ [0, R]` and runs `η` over the
//! lattice half-disk `{(a, b): b >= 0, |η| <= R}` of step `h` in the first two
//! axes. Every congruence class of configurations is reached by a rotation.

use crate::error::ResonanceError;
use crate::phase::{phase, SignPair, RESONANCE_FLOOR};

/// Central-difference step for the phase gradient.
const FD_STEP: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseScan {
    pub signs: SignPair,
    pub dim: usize,
    pub radius: f64,
    pub step: f64,
    /// `max |Φ^{-1}(ξ-η, η)| / (1 + min{|ξ|, |η|, |ξ-η|})`.
    pub c_measured: f64,
    /// `(ξ, η)` where `c_measured` is attained.
    pub argmax: (Vec<f64>, Vec<f64>),
    /// `max |∇Φ(ξ-η, η)| / min{1, |Φ|}`.
    pub c_gradient: f64,
    pub min_abs_phase: f64,
    /// `(ξ, η)` where `|Φ|` is smallest.
    pub argmin: (Vec<f64>, Vec<f64>),
    /// Pairings with `|Φ|` below the resonance floor.
    pub singular: usize,
    pub points: usize,
}

impl PhaseScan {
    pub const CSV_HEADER: &'static str = "signs,dim,R,h,C_measured,argmin,C_gradient,min_abs_phase,singular,points";

    pub fn csv_row(&self) -> String {
        let fmt = |v: &[f64]| v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(" ");
        format!(
            "{},{},{},{},{:.12e},\"xi=({}) eta=({})\",{:.12e},{:.12e},{},{}",
            self.signs.label(),
            self.dim,
            self.radius,
            self.step,
            self.c_measured,
            fmt(&self.argmin.0),
            fmt(&self.argmin.1),
            self.c_gradient,
            self.min_abs_phase,
            self.singular,
            self.points
        )
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn gradient_norm(signs: SignPair, x1: &[f64], x2: &[f64]) -> f64 {
    let d = x1.len();
    let mut buf = [x1.to_vec(), x2.to_vec()];
    let mut sq = 0.0;
    for slot in 0..2 {
        for a in 0..d {
            let orig = buf[slot][a];
            buf[slot][a] = orig + FD_STEP;
            let hi = phase(signs, &buf[0], &buf[1]);
            buf[slot][a] = orig - FD_STEP;
            let lo = phase(signs, &buf[0], &buf[1]);
            buf[slot][a] = orig;
            let g = (hi - lo) / (2.0 * FD_STEP);
            sq += g * g;
        }
    }
    sq.sqrt()
}

/// Lattice pairs `(ξ, η)` covered by the scan.
fn configurations(dim: usize, radius: f64, step: f64) -> Vec<(Vec<f64>, Vec<f64>)> {
    let m = (radius / step + 1e-9).floor() as i64;
    let mut out = Vec::new();
    let embed = |a: f64, b: f64| {
        let mut v = vec![0.0; dim];
        v[0] = a;
        if dim > 1 {
            v[1] = b;
        }
        v
    };
    if dim == 1 {
        for i in -m..=m {
            for j in -m..=m {
                out.push((embed(i as f64 * step, 0.0), embed(j as f64 * step, 0.0)));
            }
        }
        return out;
    }
    for s in 0..=m {
        for a in -m..=m {
            for b in 0..=m {
                let eta = (a as f64 * step, b as f64 * step);
                if eta.0.hypot(eta.1) <= radius + 1e-12 {
                    out.push((embed(s as f64 * step, 0.0), embed(eta.0, eta.1)));
                }
            }
        }
    }
    out
}

pub fn phase_bound_scan(signs: SignPair, dim: usize, radius: f64, step: f64) -> Result<PhaseScan, ResonanceError> {
    if !(radius > 0.0 && step > 0.0) || !(1..=3).contains(&dim) {
        return Err(ResonanceError::Scan);
    }
    let mut rep = PhaseScan {
        signs,
        dim,
        radius,
        step,
        c_measured: 0.0,
        argmax: (vec![], vec![]),
        c_gradient: 0.0,
        min_abs_phase: f64::INFINITY,
        argmin: (vec![], vec![]),
        singular: 0,
        points: 0,
    };
    for (xi, eta) in configurations(dim, radius, step) {
        let diff: Vec<f64> = xi.iter().zip(&eta).map(|(a, b)| a - b).collect();
        let p = phase(signs, &diff, &eta);
        rep.points += 1;
        if p.abs() < rep.min_abs_phase {
            rep.min_abs_phase = p.abs();
            rep.argmin = (xi.clone(), eta.clone());
        }
        if p.abs() < RESONANCE_FLOOR {
            rep.singular += 1;
            continue;
        }
        let floor = 1.0 + norm(&xi).min(norm(&eta)).min(norm(&diff));
        let ratio = 1.0 / (p.abs() * floor);
        if ratio > rep.c_measured {
            rep.c_measured = ratio;
            rep.argmax = (xi.clone(), eta.clone());
        }
        let g = gradient_norm(signs, &diff, &eta) / p.abs().min(1.0);
        rep.c_gradient = rep.c_gradient.max(g);
    }
    Ok(rep)
}
