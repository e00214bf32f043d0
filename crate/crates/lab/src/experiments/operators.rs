//! Paradifferential and pseudoproduct operators against literal sums, and the exact
//! operator identities.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kg_paradiff::{error_op, remainder, weyl_apply, weyl_matrix, Symbol, ZetaFn, PAIR_CUTOFF_SCALE};
use kg_resonance::{bilinear_with, trilinear_with, BilinearSymbol, Family, Path, TrilinearSymbol};
use kg_spectral::{make_grid, product_dealiased, psi, Field, Grid, C64};

use crate::config::ExperimentConfig;
use crate::error::LabError;
use crate::report::{Check, RunReport};

type Grid64 = Grid<f64>;
type Field64 = Field<f64>;

/// Quantization and remainder grids, all with `n^d ≤ 256`.
const WEYL_GRIDS: [(usize, usize, f64); 4] = [(1, 16, 3.0), (1, 256, 20.0), (2, 8, 2.0), (2, 16, 5.0)];
const BILINEAR_GRIDS: [(usize, usize); 5] = [(1, 16), (1, 32), (1, 64), (2, 8), (2, 16)];
const TRILINEAR_GRIDS: [(usize, usize); 4] = [(1, 8), (1, 16), (1, 32), (2, 8)];

fn random_field(grid: &Arc<Grid64>, rng: &mut ChaCha8Rng) -> Field64 {
    let data: Vec<C64> = (0..grid.len()).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    Field::from_physical(grid, data).expect("length matches grid")
}

fn random_symbol(g: &Arc<Grid64>, rng: &mut ChaCha8Rng) -> Symbol<f64> {
    Symbol::term(random_field(g, rng), ZetaFn::lambda_pow(1.0), 1.0)
        .add(&Symbol::term(random_field(g, rng), ZetaFn::component(0), 1.0))
        .add(&Symbol::from_x(random_field(g, rng)))
}

fn naive_dft(grid: &Grid64, vals: &[C64], m: [i64; 3]) -> C64 {
    let n = grid.n() as f64;
    let mut acc = C64::new(0.0, 0.0);
    for (j, v) in vals.iter().enumerate() {
        let mi = grid.multi_index(j);
        let ph: f64 = (0..grid.dim()).map(|a| m[a] as f64 * mi[a] as f64).sum::<f64>() * 2.0 * PI / n;
        acc += v * C64::new(ph.cos(), -ph.sin());
    }
    acc / grid.len() as f64
}

/// `T_a f` as the literal sum over every frequency pair, with the symbol's x-transform
/// taken by a naive DFT at `ζ = (ξ+η)/2`.
pub fn literal_weyl(a: &Symbol<f64>, f: &Field64) -> Result<Field64, LabError> {
    let g = f.grid().clone();
    let d = g.dim();
    let fh = f.spectrum().to_vec();
    let mut out = vec![C64::new(0.0, 0.0); g.len()];
    for xi_i in 0..g.len() {
        if g.is_nyquist(xi_i) {
            continue;
        }
        let xi = g.wavevector(xi_i);
        for eta_i in 0..g.len() {
            if g.is_nyquist(eta_i) {
                continue;
            }
            let eta = g.wavevector(eta_i);
            let dif = (0..d).map(|k| ((xi[k] - eta[k]) as f64).powi(2)).sum::<f64>().sqrt();
            let sum = (0..d).map(|k| ((xi[k] + eta[k]) as f64).powi(2)).sum::<f64>().sqrt();
            if sum == 0.0 {
                continue;
            }
            let w = psi(PAIR_CUTOFF_SCALE * dif / sum);
            if w == 0.0 {
                continue;
            }
            let zeta: Vec<f64> = (0..d).map(|k| g.dxi() * (xi[k] + eta[k]) as f64 / 2.0).collect();
            let vals = (0..g.len()).map(|x| a.eval(x, &zeta)).collect::<Result<Vec<C64>, _>>()?;
            let mut delta = [0i64; 3];
            for k in 0..d {
                delta[k] = xi[k] - eta[k];
            }
            out[xi_i] += w * naive_dft(&g, &vals, delta) * fh[eta_i];
        }
    }
    Ok(Field::from_spectrum(&g, out)?)
}

fn rel_err(got: &Field64, want: &Field64, scale: f64) -> Result<f64, LabError> {
    Ok(got.max_abs_diff(want)? / scale.max(1e-300))
}

type Wave = Vec<i64>;

fn all_waves(d: usize, n: usize) -> Vec<Wave> {
    let h = n as i64 / 2;
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out.into_iter().flat_map(|w: Wave| (-h..h).map(move |m| [w.clone(), vec![m]].concat())).collect();
    }
    out
}

/// Fourier coefficient of `f` at `m` by direct summation over the lattice.
fn coefficient(f: &Field64, m: &[i64]) -> C64 {
    let g = f.grid();
    let n = g.n() as f64;
    let mut acc = C64::new(0.0, 0.0);
    for (j, v) in f.physical().iter().enumerate() {
        let mi = g.multi_index(j);
        let ph: f64 = m.iter().zip(mi.iter()).map(|(&a, &b)| a as f64 * b as f64).sum();
        acc += v * C64::from_polar(1.0, -2.0 * PI * ph / n);
    }
    acc / g.len() as f64
}

/// Synthesis of a coefficient table on the lattice, compared against `got` point by point.
fn synthesis_error(got: &Field64, coef: &HashMap<Wave, C64>) -> f64 {
    let g = got.grid();
    let n = g.n() as f64;
    let (mut num, mut den) = (0.0f64, 0.0f64);
    for (j, v) in got.physical().iter().enumerate() {
        let mi = g.multi_index(j);
        let mut want = C64::new(0.0, 0.0);
        for (m, c) in coef {
            let ph: f64 = m.iter().zip(mi.iter()).map(|(&a, &b)| a as f64 * b as f64).sum();
            want += c * C64::from_polar(1.0, 2.0 * PI * ph / n);
        }
        num = num.max((v - want).norm());
        den = den.max(want.norm());
    }
    num / den.max(1e-300)
}

fn wave_of(x: &[f64], dxi: f64) -> Wave {
    x.iter().map(|v| (v / dxi).round() as i64).collect()
}

fn kept(m: &[i64], cut: i64) -> bool {
    m.iter().all(|v| v.abs() <= cut)
}

fn add(a: &[i64], b: &[i64]) -> Wave {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn random_c(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Errors of `B_m(f, g)` on the direct and the fast path against the literal double sum,
/// with `m` a random table over the retained waves `|m_j| ≤ n/3`.
fn bilinear_case(d: usize, n: usize, seed: u64) -> Result<[f64; 2], LabError> {
    let grid = make_grid(d, n, 3.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = random_field(&grid, &mut rng);
    let g = random_field(&grid, &mut rng);
    let cut = (n / 3) as i64;
    let waves: Vec<Wave> = all_waves(d, n).into_iter().filter(|m| kept(m, cut)).collect();
    let mut table = HashMap::new();
    for a in &waves {
        for b in &waves {
            table.insert((a.clone(), b.clone()), random_c(&mut rng));
        }
    }
    let table = Arc::new(table);
    let dxi = grid.dxi();
    let t = table.clone();
    let m = BilinearSymbol::new(Family::Custom, "random", move |a: &[f64], b: &[f64]| {
        t.get(&(wave_of(a, dxi), wave_of(b, dxi))).copied()
    });

    let fh: HashMap<Wave, C64> = waves.iter().map(|w| (w.clone(), coefficient(&f, w))).collect();
    let gh: HashMap<Wave, C64> = waves.iter().map(|w| (w.clone(), coefficient(&g, w))).collect();
    let mut out: HashMap<Wave, C64> = HashMap::new();
    for a in &waves {
        for b in &waves {
            let s = add(a, b);
            if kept(&s, cut) {
                *out.entry(s).or_default() += table[&(a.clone(), b.clone())] * fh[a] * gh[b];
            }
        }
    }
    let mut errs = [0.0; 2];
    for (k, path) in [Path::Direct, Path::Fast].into_iter().enumerate() {
        let got = bilinear_with(&m, &f, &g, path)?;
        errs[k] = if got.excluded == 0 { synthesis_error(&got.field, &out) } else { f64::INFINITY };
    }
    Ok(errs)
}

/// The trilinear analogue: inner `η = y + z` and output `ξ = x + η` both retained.
fn trilinear_case(d: usize, n: usize, seed: u64) -> Result<[f64; 2], LabError> {
    let grid = make_grid(d, n, 3.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = random_field(&grid, &mut rng);
    let g = random_field(&grid, &mut rng);
    let h = random_field(&grid, &mut rng);
    let cut = (n / 3) as i64;
    let waves: Vec<Wave> = all_waves(d, n).into_iter().filter(|m| kept(m, cut)).collect();
    let mut table = HashMap::new();
    for a in &waves {
        for b in &waves {
            for c in &waves {
                table.insert((a.clone(), b.clone(), c.clone()), random_c(&mut rng));
            }
        }
    }
    let table = Arc::new(table);
    let dxi = grid.dxi();
    let t = table.clone();
    let b = TrilinearSymbol::new("random", move |x: &[f64], y: &[f64], z: &[f64]| {
        t.get(&(wave_of(x, dxi), wave_of(y, dxi), wave_of(z, dxi))).copied()
    });

    let coef = |u: &Field64| -> HashMap<Wave, C64> { waves.iter().map(|w| (w.clone(), coefficient(u, w))).collect() };
    let (fh, gh, hh) = (coef(&f), coef(&g), coef(&h));
    let mut out: HashMap<Wave, C64> = HashMap::new();
    for x in &waves {
        for y in &waves {
            for z in &waves {
                let eta = add(y, z);
                let xi = add(x, &eta);
                if kept(&eta, cut) && kept(&xi, cut) {
                    *out.entry(xi).or_default() += table[&(x.clone(), y.clone(), z.clone())] * fh[x] * gh[y] * hh[z];
                }
            }
        }
    }
    let mut errs = [0.0; 2];
    for (k, path) in [Path::Direct, Path::Fast].into_iter().enumerate() {
        errs[k] = synthesis_error(&trilinear_with(&b, &f, &g, &h, path)?.field, &out);
    }
    Ok(errs)
}

/// Every fast operator against its literal sum, one row per operator, grid and path.
pub fn paradiff_oracle(cfg: &ExperimentConfig) -> Result<RunReport, LabError> {
    let mut rep = RunReport::new(cfg, &["dim", "n", "rel_err"]);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst: HashMap<&str, f64> = HashMap::new();
    let mut record = |rep: &mut RunReport, op: &'static str, d: usize, n: usize, e: f64| {
        rep.row(format!("{op} d={d} n={n}"), vec![d as f64, n as f64, e]);
        let w = worst.entry(op).or_insert(0.0);
        *w = w.max(e);
    };
    for (d, n, l) in WEYL_GRIDS {
        let g = make_grid(d, n, l)?;
        let a = random_symbol(&g, &mut rng);
        let f = random_field(&g, &mut rng);
        let want = literal_weyl(&a, &f)?;
        record(&mut rep, "weyl_apply", d, n, rel_err(&weyl_apply(&a, &f)?, &want, want.norm_sup())?);

        let h = random_field(&g, &mut rng);
        let tf = literal_weyl(&Symbol::from_x(f.clone()), &h)?;
        let th = literal_weyl(&Symbol::from_x(h.clone()), &f)?;
        let want = product_dealiased(&f, &h)?.sub(&tf)?.sub(&th)?;
        record(&mut rep, "remainder", d, n, rel_err(&remainder(&f, &h)?, &want, want.norm_sup())?);

        let b = Symbol::term(random_field(&g, &mut rng), ZetaFn::lambda_pow(-1.0), -1.0);
        let prod = a.mul(&b)?;
        let want = literal_weyl(&a, &literal_weyl(&b, &f)?)?.sub(&literal_weyl(&prod, &f)?)?;
        let got = error_op(&[a, b], &f)?;
        // The composition cancels to leading order, so errors are measured against the input scale.
        record(&mut rep, "error_op", d, n, rel_err(&got, &want, want.norm_sup().max(f.norm_sup()))?);
    }
    for (d, n) in BILINEAR_GRIDS {
        let [direct, fast] = bilinear_case(d, n, rng.gen())?;
        record(&mut rep, "bilinear/direct", d, n, direct);
        record(&mut rep, "bilinear/fast", d, n, fast);
    }
    for (d, n) in TRILINEAR_GRIDS {
        let [direct, fast] = trilinear_case(d, n, rng.gen())?;
        record(&mut rep, "trilinear/direct", d, n, direct);
        record(&mut rep, "trilinear/fast", d, n, fast);
    }
    let mut ops: Vec<(&str, f64)> = worst.into_iter().collect();
    ops.sort_by(|a, b| a.0.cmp(b.0));
    for (op, e) in ops {
        rep.constant(format!("worst_{op}"), e);
        if let Some(tol) = cfg.thresholds.rel_tol {
            rep.check(Check::at_most(op, e, tol));
        }
    }
    Ok(rep.finish())
}

fn zero_mean_and_nyquist(f: &Field64) -> Field64 {
    let g = f.grid().clone();
    f.map_spectrum(|i, c| if i == 0 || g.is_nyquist(i) { C64::new(0.0, 0.0) } else { c })
}

/// `T_1 = Id` on mean-free fields, Hermitian matrices for real symbols, `E(a,1) = E(1,a) = 0`.
pub fn operator_identities(cfg: &ExperimentConfig) -> Result<RunReport, LabError> {
    let mut rep = RunReport::new(cfg, &["dim", "n", "identity_err", "hermitian_defect", "error_a1", "error_1a"]);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut id_worst, mut herm_worst, mut e_worst) = (0.0f64, 0.0f64, 0.0f64);
    for (d, n, l) in WEYL_GRIDS {
        let g = make_grid(d, n, l)?;
        let f = zero_mean_and_nyquist(&random_field(&g, &mut rng));
        let id = weyl_apply(&Symbol::one(), &f)?.max_abs_diff(&f)?;

        let real = Symbol::term(random_field(&g, &mut rng).re(), ZetaFn::lambda_pow(1.0), 1.0)
            .add(&Symbol::term(random_field(&g, &mut rng).re(), ZetaFn::component(d - 1), 1.0))
            .add(&Symbol::from_x(random_field(&g, &mut rng).re()));
        let m = weyl_matrix(&real, &g)?;
        let scale = (0..m.size()).map(|i| m.get(i, i).norm()).fold(1.0, f64::max);
        let herm = m.hermitian_defect() / scale;

        let a = random_symbol(&g, &mut rng);
        let h = random_field(&g, &mut rng);
        let ta = weyl_apply(&a, &h)?.norm_sup().max(h.norm_sup());
        let e_a1 = error_op(&[a.clone(), Symbol::one()], &h)?.norm_sup() / ta;
        let e_1a = error_op(&[Symbol::one(), a], &h)?.norm_sup() / ta;

        rep.row(format!("d={d} n={n}"), vec![d as f64, n as f64, id, herm, e_a1, e_1a]);
        id_worst = id_worst.max(id);
        herm_worst = herm_worst.max(herm);
        e_worst = e_worst.max(e_a1).max(e_1a);
    }
    rep.constant("identity_err", id_worst);
    rep.constant("hermitian_defect", herm_worst);
    rep.constant("error_with_unit", e_worst);
    if let Some(tol) = cfg.thresholds.identity_tol {
        rep.check(Check::at_most("unit_symbol_is_identity", id_worst, tol));
    }
    if let Some(tol) = cfg.thresholds.rel_tol {
        rep.check(Check::at_most("hermitian_defect", herm_worst, tol));
        rep.check(Check::at_most("error_with_unit", e_worst, tol));
    }
    Ok(rep.finish())
}
