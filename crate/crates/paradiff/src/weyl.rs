//! Weyl quantization `T_a`, the remainder `H(f,g)` and the error operator `E`.

use kg_spectral::{product_dealiased, psi, Field, Float, Grid, C};

use crate::error::ParadiffError;
use crate::symbol::Symbol;

/// Scale of the angular cutoff `ψ_{≤-10}(|ξ-η|/|ξ+η|) = ψ(2^{10}|ξ-η|/|ξ+η|)`.
pub const PAIR_CUTOFF_SCALE: f64 = 1024.0;

/// `ψ_{≤-10}(|ξ-η|/|ξ+η|)` for wavevectors given in lattice units.
pub fn pair_weight<T: Float>(xi: [i64; 3], eta: [i64; 3], dim: usize) -> T {
    let mut dif = 0i64;
    let mut sum = 0i64;
    for a in 0..dim {
        dif += (xi[a] - eta[a]).pow(2);
        sum += (xi[a] + eta[a]).pow(2);
    }
    if sum == 0 {
        return T::zero();
    }
    let ratio = (T::lit(dif as f64) / T::lit(sum as f64)).sqrt();
    psi(T::lit(PAIR_CUTOFF_SCALE) * ratio)
}

/// Offsets `δ = ξ - η` that can carry a nonzero pair weight on `grid`.
fn pair_offsets<T: Float>(grid: &Grid<T>) -> Vec<[i64; 3]> {
    let d = grid.dim();
    let rho = 1.6 / PAIR_CUTOFF_SCALE;
    let xi_max = (grid.n() as f64 / 2.0) * (d as f64).sqrt();
    let reach = 2.0 * rho * xi_max / (1.0 - rho);
    let r = reach.floor() as i64;
    let mut out = Vec::new();
    let span = |a: usize| if a < d { -r..=r } else { 0..=0 };
    for i in span(0) {
        for j in span(1) {
            for k in span(2) {
                if ((i * i + j * j + k * k) as f64) <= reach * reach {
                    out.push([i, j, k]);
                }
            }
        }
    }
    out
}

fn in_lattice<T: Float>(grid: &Grid<T>, m: [i64; 3]) -> bool {
    let h = (grid.n() / 2) as i64;
    (0..grid.dim()).all(|a| m[a] >= -h && m[a] < h)
}

fn is_nyquist_vec<T: Float>(grid: &Grid<T>, m: [i64; 3]) -> bool {
    let h = (grid.n() / 2) as i64;
    (0..grid.dim()).any(|a| m[a] == -h)
}

fn midpoint<T: Float>(grid: &Grid<T>, xi: [i64; 3], eta: [i64; 3]) -> [T; 3] {
    let mut z = [T::zero(); 3];
    for a in 0..grid.dim() {
        z[a] = grid.dxi() * T::lit((xi[a] + eta[a]) as f64 / 2.0);
    }
    z
}

/// Coefficient of `(𝔉_x a)(δ, ζ)` for separable `a`, zero off the lattice.
fn symbol_coeff<T: Float>(a: &Symbol<T>, grid: &Grid<T>, delta: [i64; 3], zeta: &[T]) -> Result<C<T>, ParadiffError> {
    let zero = C::new(T::zero(), T::zero());
    if !in_lattice(grid, delta) {
        return Ok(zero);
    }
    let is_zero = (0..grid.dim()).all(|i| delta[i] == 0);
    let idx = grid.flat_of_wavevector(delta);
    let mut acc = zero;
    for t in a.terms() {
        let xh = match &t.x {
            Some(f) => f.spectrum()[idx],
            None if is_zero => C::new(T::one(), T::zero()),
            None => continue,
        };
        if xh == zero {
            continue;
        }
        acc = acc + xh * t.zeta.eval(&zeta[..grid.dim()])?;
    }
    Ok(acc)
}

/// Unnormalised action on coefficients; pairs are restricted to reachable offsets.
fn raw_apply<T: Float>(a: &Symbol<T>, f: &Field<T>) -> Result<Vec<C<T>>, ParadiffError> {
    let grid = f.grid().clone();
    let d = grid.dim();
    let offsets = pair_offsets(&grid);
    let fh = f.spectrum();
    let zero = C::new(T::zero(), T::zero());
    let mut out = vec![zero; grid.len()];
    for (i, slot) in out.iter_mut().enumerate() {
        if grid.is_nyquist(i) {
            continue;
        }
        let xi = grid.wavevector(i);
        let mut acc = zero;
        for off in &offsets {
            let mut eta = [0i64; 3];
            for ax in 0..d {
                eta[ax] = xi[ax] - off[ax];
            }
            if !in_lattice(&grid, eta) || is_nyquist_vec(&grid, eta) {
                continue;
            }
            let w: T = pair_weight(xi, eta, d);
            if w == T::zero() {
                continue;
            }
            let fe = fh[grid.flat_of_wavevector(eta)];
            if fe == zero {
                continue;
            }
            let z = midpoint(&grid, xi, eta);
            acc = acc + symbol_coeff(a, &grid, *off, &z)? * fe * w;
        }
        *slot = acc;
    }
    Ok(out)
}

/// Normalisation fixed by `T_1 = Id` on a nonzero lattice mode.
pub fn normalization<T: Float>(grid: &std::sync::Arc<Grid<T>>) -> T {
    let probe = Field::plane_wave(grid, [1, 0, 0]);
    let raw = raw_apply(&Symbol::one(), &probe).expect("constant symbol is defined everywhere");
    let idx = grid.flat_of_wavevector([1, 0, 0]);
    T::one() / raw[idx].re
}

/// `T_a f`.
pub fn weyl_apply<T: Float>(a: &Symbol<T>, f: &Field<T>) -> Result<Field<T>, ParadiffError> {
    let c = normalization(f.grid());
    let mut out = raw_apply(a, f)?;
    for v in out.iter_mut() {
        *v = *v * c;
    }
    Ok(Field::from_spectrum(f.grid(), out)?)
}

/// Dense matrix of `T_a` on frequency coefficients (row = output mode).
#[derive(Debug, Clone)]
pub struct WeylMatrix<T: Float> {
    size: usize,
    data: Vec<C<T>>,
}

impl<T: Float> WeylMatrix<T> {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, row: usize, col: usize) -> C<T> {
        self.data[row * self.size + col]
    }

    pub fn apply(&self, v: &[C<T>]) -> Vec<C<T>> {
        (0..self.size)
            .map(|r| {
                self.data[r * self.size..(r + 1) * self.size]
                    .iter()
                    .zip(v)
                    .fold(C::new(T::zero(), T::zero()), |a, (m, x)| a + *m * *x)
            })
            .collect()
    }

    /// `max |M_{ij} - conj(M_{ji})|`.
    pub fn hermitian_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.size {
            for j in i..self.size {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }
}

pub const MATRIX_LIMIT: usize = 4096;

pub fn weyl_matrix<T: Float>(a: &Symbol<T>, grid: &std::sync::Arc<Grid<T>>) -> Result<WeylMatrix<T>, ParadiffError> {
    let size = grid.len();
    if size > MATRIX_LIMIT {
        return Err(ParadiffError::TooLarge(size));
    }
    let d = grid.dim();
    let c = normalization(grid);
    let offsets = pair_offsets(grid);
    let mut data = vec![C::new(T::zero(), T::zero()); size * size];
    for row in 0..size {
        if grid.is_nyquist(row) {
            continue;
        }
        let xi = grid.wavevector(row);
        for off in &offsets {
            let mut eta = [0i64; 3];
            for ax in 0..d {
                eta[ax] = xi[ax] - off[ax];
            }
            if !in_lattice(grid, eta) || is_nyquist_vec(grid, eta) {
                continue;
            }
            let w: T = pair_weight(xi, eta, d);
            if w == T::zero() {
                continue;
            }
            let col = grid.flat_of_wavevector(eta);
            let z = midpoint(grid, xi, eta);
            data[row * size + col] = symbol_coeff(a, grid, *off, &z)? * w * c;
        }
    }
    Ok(WeylMatrix { size, data })
}

/// `H(f, g) = fg - T_f g - T_g f` with the dealiased product.
pub fn remainder<T: Float>(f: &Field<T>, g: &Field<T>) -> Result<Field<T>, ParadiffError> {
    let fg = product_dealiased(f, g)?;
    let tf = weyl_apply(&Symbol::from_x(f.clone()), g)?;
    let tg = weyl_apply(&Symbol::from_x(g.clone()), f)?;
    Ok(fg.sub(&tf)?.sub(&tg)?)
}

/// `E(a_1, …, a_n) f = T_{a_1}⋯T_{a_n} f - T_{a_1⋯a_n} f`.
pub fn error_op<T: Float>(symbols: &[Symbol<T>], f: &Field<T>) -> Result<Field<T>, ParadiffError> {
    if symbols.len() < 2 {
        return Err(ParadiffError::TooFewSymbols(symbols.len()));
    }
    let mut composed = f.clone();
    for a in symbols.iter().rev() {
        composed = weyl_apply(a, &composed)?;
    }
    let mut prod = symbols[0].clone();
    for a in &symbols[1..] {
        prod = prod.mul(a)?;
    }
    Ok(composed.sub(&weyl_apply(&prod, f)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::ZetaFn;
    use kg_spectral::{lp_project, make_grid, multiplier, Band};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn random_field(grid: &Arc<Grid<f64>>, seed: u64) -> Field<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data: Vec<C<f64>> =
            (0..grid.len()).map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        Field::from_physical(grid, data).unwrap()
    }

    fn mean_free(f: &Field<f64>) -> Field<f64> {
        lp_project(f, Band::Interval(0, 30)).unwrap().add(&lp_project(f, Band::Single(-1)).unwrap()).unwrap()
            .map_spectrum(|i, c| if i == 0 { C::new(0.0, 0.0) } else { c })
    }

    fn real_random(grid: &Arc<Grid<f64>>, seed: u64) -> Field<f64> {
        random_field(grid, seed).re()
    }

    #[test]
    fn constant_symbol_is_identity_on_mean_free_fields() {
        let g = make_grid::<f64>(2, 16, 5.0).unwrap();
        let f = mean_free(&random_field(&g, 1));
        let t = weyl_apply(&Symbol::one(), &f).unwrap();
        assert!(t.max_abs_diff(&f).unwrap() <= 1e-14);
    }

    #[test]
    fn normalization_is_one_on_coefficient_convention() {
        let g = make_grid::<f64>(3, 8, 2.0).unwrap();
        assert_eq!(normalization(&g), 1.0);
    }

    #[test]
    fn frequency_symbol_is_multiplier() {
        let g = make_grid::<f64>(2, 16, 4.0).unwrap();
        let f = random_field(&g, 2);
        let a = Symbol::from_zeta(ZetaFn::lambda_pow(1.5), 1.5);
        let t = weyl_apply(&a, &f).unwrap();
        let gg = g.clone();
        let want = multiplier(&f, |i| {
            if i == 0 { C::new(0.0, 0.0) } else { C::new((1.0 + gg.xi_norm(i).powi(2)).powf(0.75), 0.0) }
        });
        let scale = want.norm_sup();
        assert!(t.max_abs_diff(&want).unwrap() <= 1e-10 * scale);
    }

    #[test]
    fn matrix_examples() {
        let g = make_grid::<f64>(2, 8, 3.0).unwrap();
        let id = weyl_matrix(&Symbol::one(), &g).unwrap();
        let z1 = weyl_matrix(&Symbol::from_zeta(ZetaFn::component(0), 1.0), &g).unwrap();
        for r in 0..g.len() {
            for c in 0..g.len() {
                let keep = r == c && r != 0 && !g.is_nyquist(r);
                let want_id = if keep { 1.0 } else { 0.0 };
                assert_eq!(id.get(r, c), C::new(want_id, 0.0));
                let want_z = if keep { g.xi(r)[0] } else { 0.0 };
                assert!((z1.get(r, c) - C::new(want_z, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn matrix_size_guard() {
        let g = make_grid::<f64>(2, 128, 3.0).unwrap();
        assert_eq!(weyl_matrix(&Symbol::one(), &g).unwrap_err(), ParadiffError::TooLarge(128 * 128));
    }

    #[test]
    fn real_symbol_gives_hermitian_matrix() {
        let g = make_grid::<f64>(2, 8, 3.0).unwrap();
        let a = Symbol::term(real_random(&g, 5), ZetaFn::lambda_pow(1.0), 1.0)
            .add(&Symbol::term(real_random(&g, 6), ZetaFn::component(1), 1.0));
        let m = weyl_matrix(&a, &g).unwrap();
        assert!(m.hermitian_defect() <= 1e-10);
    }

    #[test]
    fn matrix_agrees_with_apply() {
        let g = make_grid::<f64>(1, 16, 3.0).unwrap();
        let a = Symbol::term(random_field(&g, 7), ZetaFn::lambda_pow(2.0), 2.0);
        let f = random_field(&g, 8);
        let m = weyl_matrix(&a, &g).unwrap();
        let via_m = Field::from_spectrum(&g, m.apply(f.spectrum())).unwrap();
        let direct = weyl_apply(&a, &f).unwrap();
        assert!(via_m.max_abs_diff(&direct).unwrap() <= 1e-12);
    }

    #[test]
    fn remainder_definition() {
        let g = make_grid::<f64>(2, 16, 4.0).unwrap();
        let f = random_field(&g, 10);
        let h = random_field(&g, 11);
        let r = remainder(&f, &h).unwrap();
        let tf = weyl_apply(&Symbol::from_x(f.clone()), &h).unwrap();
        let th = weyl_apply(&Symbol::from_x(h.clone()), &f).unwrap();
        let lhs = r.add(&tf).unwrap().add(&th).unwrap();
        let fg = product_dealiased(&f, &h).unwrap();
        assert!(lhs.max_abs_diff(&fg).unwrap() <= 1e-10);
    }

    #[test]
    fn error_operator_with_identity_factor_vanishes() {
        let g = make_grid::<f64>(2, 16, 4.0).unwrap();
        let f = random_field(&g, 12);
        let a = Symbol::term(random_field(&g, 13), ZetaFn::lambda_pow(1.0), 1.0);
        let e1 = error_op(&[a.clone(), Symbol::one()], &f).unwrap();
        let e2 = error_op(&[Symbol::one(), a], &f).unwrap();
        assert!(e1.norm_sup() <= 1e-10);
        assert!(e2.norm_sup() <= 1e-10);
    }

    #[test]
    fn error_operator_of_multipliers_vanishes() {
        let g = make_grid::<f64>(2, 16, 4.0).unwrap();
        let f = random_field(&g, 14);
        let a = Symbol::from_zeta(ZetaFn::lambda_pow(1.0), 1.0);
        let b = Symbol::from_zeta(ZetaFn::component(0), 1.0);
        assert!(error_op(&[a, b], &f).unwrap().norm_sup() <= 1e-10);
        assert!(error_op(&[Symbol::one()], &f).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn linear_in_symbol_and_field(s1 in any::<u64>(), s2 in any::<u64>(), lam in -3.0f64..3.0) {
            let g = make_grid::<f64>(2, 8, 2.0).unwrap();
            let a = Symbol::term(random_field(&g, s1), ZetaFn::lambda_pow(1.0), 1.0);
            let b = Symbol::term(random_field(&g, s2), ZetaFn::component(0), 1.0);
            let f = random_field(&g, s1 ^ s2);
            let h = random_field(&g, s1.wrapping_add(1));
            let lhs = weyl_apply(&a.add(&b), &f).unwrap();
            let rhs = weyl_apply(&a, &f).unwrap().add(&weyl_apply(&b, &f).unwrap()).unwrap();
            prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-10);
            let lhs = weyl_apply(&a, &f.axpy(C::new(lam, 0.0), &h).unwrap()).unwrap();
            let rhs = weyl_apply(&a, &f).unwrap().axpy(C::new(lam, 0.0), &weyl_apply(&a, &h).unwrap()).unwrap();
            prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-10);
        }

        #[test]
        fn hermitian_for_real_symbols(s in any::<u64>()) {
            let g = make_grid::<f64>(1, 16, 2.0).unwrap();
            let a = Symbol::term(real_random(&g, s), ZetaFn::lambda_pow(0.5), 0.5);
            prop_assert!(weyl_matrix(&a, &g).unwrap().hermitian_defect() <= 1e-10);
        }
    }
}
