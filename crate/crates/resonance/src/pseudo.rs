//! Bilinear and trilinear pseudoproducts on the 2/3-rule lattice.
//!
//! All frequencies (inputs, output and the intermediate `η` of the trilinear
//! sum) are restricted to the retained modes `|m_i| <= ⌊n/3⌋`. With that
//! restriction no sum wraps, and `m ≡ 1` reproduces the dealiased product.

use std::sync::Arc;

use kg_spectral::{cplx, Field, Float, Grid, C};

use crate::error::ResonanceError;
use crate::symbols::{BilinearSymbol, SingularPolicy, TrilinearSymbol};

/// Points per axis above which [`Path::Auto`] takes the support-restricted route.
pub const FAST_ABOVE: usize = 16;

/// Largest `n^d` for the direct trilinear sum.
pub const TRILINEAR_DIRECT_LIMIT: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Path {
    /// Sum over every retained output and inner frequency.
    Direct,
    /// Sum over pairs of nonzero input coefficients only.
    Fast,
    #[default]
    Auto,
}

#[derive(Debug, Clone)]
pub struct Pseudo<T: Float> {
    pub field: Field<T>,
    /// Pairings with nonzero input mass where the symbol was singular.
    pub excluded: usize,
}

struct Lattice<T: Float> {
    dim: usize,
    cut: i64,
    /// Retained flat indices with their wavevectors and frequencies.
    modes: Vec<(usize, [i64; 3], [T; 3])>,
}

impl<T: Float> Lattice<T> {
    fn new(grid: &Grid<T>) -> Self {
        let modes = (0..grid.len()).filter(|&i| grid.dealias_keep(i)).map(|i| (i, grid.wavevector(i), grid.xi(i))).collect();
        Lattice { dim: grid.dim(), cut: grid.dealias_cut(), modes }
    }

    #[inline]
    fn kept(&self, m: [i64; 3]) -> bool {
        m.iter().take(self.dim).all(|v| v.abs() <= self.cut)
    }

    fn support(&self, spec: &[C<T>]) -> Vec<(usize, [i64; 3], [T; 3])> {
        self.modes.iter().copied().filter(|&(i, _, _)| spec[i] != C::new(T::zero(), T::zero())).collect()
    }
}

fn wv_add(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn wv_sub(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn choose<T: Float>(path: Path, grid: &Grid<T>) -> Path {
    match path {
        Path::Auto if grid.n() > FAST_ABOVE => Path::Fast,
        Path::Auto => Path::Direct,
        p => p,
    }
}

struct Tally<'a> {
    policy: SingularPolicy,
    label: &'a str,
    excluded: usize,
}

impl Tally<'_> {
    #[inline]
    fn take<T: Float>(&mut self, v: Option<C<T>>) -> Result<Option<C<T>>, ResonanceError> {
        match v {
            Some(v) => Ok(Some(v)),
            None if self.policy == SingularPolicy::Error => Err(ResonanceError::Singular(self.label.to_string())),
            None => {
                self.excluded += 1;
                Ok(None)
            }
        }
    }
}

/// `B_m(f, g)` by the automatic path, honouring the symbol's singular policy.
pub fn bilinear_apply<T: Float>(m: &BilinearSymbol<T>, f: &Field<T>, g: &Field<T>) -> Result<Field<T>, ResonanceError> {
    Ok(bilinear_with(m, f, g, Path::Auto)?.field)
}

pub fn bilinear_direct<T: Float>(m: &BilinearSymbol<T>, f: &Field<T>, g: &Field<T>) -> Result<Pseudo<T>, ResonanceError> {
    bilinear_with(m, f, g, Path::Direct)
}

pub fn bilinear_fast<T: Float>(m: &BilinearSymbol<T>, f: &Field<T>, g: &Field<T>) -> Result<Pseudo<T>, ResonanceError> {
    bilinear_with(m, f, g, Path::Fast)
}

/// `F B_m(f,g)(ξ) = Σ_η m(ξ-η, η) f̂(ξ-η) ĝ(η)`.
pub fn bilinear_with<T: Float>(
    m: &BilinearSymbol<T>,
    f: &Field<T>,
    g: &Field<T>,
    path: Path,
) -> Result<Pseudo<T>, ResonanceError> {
    f.check_grid(g)?;
    let grid: &Arc<Grid<T>> = f.grid();
    let lat = Lattice::new(grid);
    let d = lat.dim;
    let (fh, gh) = (f.spectrum(), g.spectrum());
    let zero = cplx(T::zero(), T::zero());
    let mut out = vec![zero; grid.len()];
    let mut tally = Tally { policy: m.policy, label: &m.label, excluded: 0 };
    let constant = m.is_constant_one();

    match choose(path, grid) {
        Path::Fast => {
            let sf = lat.support(fh);
            let sg = lat.support(gh);
            for &(ia, wa, xa) in &sf {
                for &(ib, wb, xb) in &sg {
                    let s = wv_add(wa, wb);
                    if !lat.kept(s) {
                        continue;
                    }
                    let w = if constant { Some(cplx(T::one(), T::zero())) } else { m.eval(&xa[..d], &xb[..d]) };
                    if let Some(w) = tally.take(w)? {
                        let o = grid.flat_of_wavevector(s);
                        out[o] = out[o] + w * fh[ia] * gh[ib];
                    }
                }
            }
        }
        _ => {
            for &(io, wo, _) in &lat.modes {
                let mut acc = zero;
                for &(ib, wb, xb) in &lat.modes {
                    let wa = wv_sub(wo, wb);
                    if !lat.kept(wa) {
                        continue;
                    }
                    let ia = grid.flat_of_wavevector(wa);
                    let mass = fh[ia] * gh[ib];
                    if mass == zero {
                        continue;
                    }
                    let xa = grid.xi(ia);
                    if let Some(w) = tally.take(m.eval(&xa[..d], &xb[..d]))? {
                        acc = acc + w * mass;
                    }
                }
                out[io] = acc;
            }
        }
    }
    Ok(Pseudo { field: Field::from_spectrum(grid, out)?, excluded: tally.excluded })
}

/// `𝒯_b(f, g, h)` by the automatic path.
pub fn trilinear_apply<T: Float>(
    b: &TrilinearSymbol<T>,
    f: &Field<T>,
    g: &Field<T>,
    h: &Field<T>,
) -> Result<Field<T>, ResonanceError> {
    Ok(trilinear_with(b, f, g, h, Path::Auto)?.field)
}

/// `F 𝒯_b(f,g,h)(ξ) = Σ_{η,ζ} b(ξ-η, η-ζ, ζ) f̂(ξ-η) ĝ(η-ζ) ĥ(ζ)`.
pub fn trilinear_with<T: Float>(
    b: &TrilinearSymbol<T>,
    f: &Field<T>,
    g: &Field<T>,
    h: &Field<T>,
    path: Path,
) -> Result<Pseudo<T>, ResonanceError> {
    f.check_grid(g)?;
    f.check_grid(h)?;
    let grid: &Arc<Grid<T>> = f.grid();
    let path = choose(path, grid);
    if path == Path::Direct && grid.len() > TRILINEAR_DIRECT_LIMIT {
        return Err(ResonanceError::TooLarge(grid.len()));
    }
    let lat = Lattice::new(grid);
    let d = lat.dim;
    let (fh, gh, hh) = (f.spectrum(), g.spectrum(), h.spectrum());
    let zero = cplx(T::zero(), T::zero());
    let mut out = vec![zero; grid.len()];
    let mut tally = Tally { policy: b.policy, label: &b.label, excluded: 0 };

    match path {
        Path::Fast => {
            let (sf, sg, sh) = (lat.support(fh), lat.support(gh), lat.support(hh));
            for &(ic, wc, xc) in &sh {
                for &(ib, wb, xb) in &sg {
                    let eta = wv_add(wb, wc);
                    if !lat.kept(eta) {
                        continue;
                    }
                    let gc = gh[ib] * hh[ic];
                    for &(ia, wa, xa) in &sf {
                        let xi = wv_add(wa, eta);
                        if !lat.kept(xi) {
                            continue;
                        }
                        if let Some(w) = tally.take(b.eval(&xa[..d], &xb[..d], &xc[..d]))? {
                            let o = grid.flat_of_wavevector(xi);
                            out[o] = out[o] + w * fh[ia] * gc;
                        }
                    }
                }
            }
        }
        _ => {
            for &(io, wo, _) in &lat.modes {
                let mut acc = zero;
                for &(_, we, _) in &lat.modes {
                    let wa = wv_sub(wo, we);
                    if !lat.kept(wa) {
                        continue;
                    }
                    let ia = grid.flat_of_wavevector(wa);
                    if fh[ia] == zero {
                        continue;
                    }
                    let xa = grid.xi(ia);
                    for &(ic, wc, xc) in &lat.modes {
                        let wb = wv_sub(we, wc);
                        if !lat.kept(wb) {
                            continue;
                        }
                        let ib = grid.flat_of_wavevector(wb);
                        let mass = fh[ia] * gh[ib] * hh[ic];
                        if mass == zero {
                            continue;
                        }
                        let xb = grid.xi(ib);
                        if let Some(w) = tally.take(b.eval(&xa[..d], &xb[..d], &xc[..d]))? {
                            acc = acc + w * mass;
                        }
                    }
                }
                out[io] = acc;
            }
        }
    }
    Ok(Pseudo { field: Field::from_spectrum(grid, out)?, excluded: tally.excluded })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::SignPair;
    use crate::symbols::{family_energy, family_phase_a, ASymbol};
    use kg_spectral::{make_grid, product_dealiased, Sign};

    fn smooth_fields(d: usize, n: usize) -> (Field<f64>, Field<f64>, Field<f64>) {
        let g = make_grid(d, n, 4.0).unwrap();
        let f = Field::from_real_fn(&g, |x: &[f64]| (-x.iter().map(|v| v * v).sum::<f64>() / 2.0).exp());
        let h = Field::from_fn(&g, |x: &[f64]| C::new((std::f64::consts::PI * x[0] / 4.0).sin(), 0.3 * x[d - 1].cos()));
        let k = Field::from_real_fn(&g, |x: &[f64]| 1.0 / (1.0 + x[0] * x[0]));
        (f, h, k)
    }

    #[test]
    fn unit_symbol_is_the_dealiased_product() {
        for (d, n) in [(1, 16), (1, 64), (2, 16), (2, 32)] {
            let (f, g, _) = smooth_fields(d, n);
            let want = product_dealiased(&f, &g).unwrap();
            for path in [Path::Direct, Path::Fast] {
                let got = bilinear_with(&BilinearSymbol::one(), &f, &g, path).unwrap();
                assert_eq!(got.excluded, 0);
                let err = got.field.max_abs_diff(&want).unwrap() / want.norm_sup();
                assert!(err < 1e-12, "d={d} n={n} {path:?} {err:e}");
            }
        }
    }

    #[test]
    fn unit_trilinear_is_the_nested_dealiased_product() {
        for (d, n) in [(1, 16), (2, 8)] {
            let (f, g, h) = smooth_fields(d, n);
            let want = product_dealiased(&f, &product_dealiased(&g, &h).unwrap()).unwrap();
            for path in [Path::Direct, Path::Fast] {
                let got = trilinear_with(&TrilinearSymbol::one(), &f, &g, &h, path).unwrap();
                let err = got.field.max_abs_diff(&want).unwrap() / want.norm_sup();
                assert!(err < 1e-12, "d={d} n={n} {err:e}");
            }
        }
    }

    #[test]
    fn fast_path_matches_direct_for_phase_symbols() {
        let (f, g, _) = smooth_fields(2, 16);
        let a = ASymbol::parse_product("eta1, 1/lambda(xi-eta)").unwrap();
        for s in SignPair::ALL {
            let m = family_phase_a(s, &a);
            let d = bilinear_direct(&m, &f, &g).unwrap();
            let q = bilinear_fast(&m, &f, &g).unwrap();
            let scale = d.field.norm_sup().max(1e-300);
            assert!(d.field.max_abs_diff(&q.field).unwrap() / scale < 1e-12);
        }
    }

    #[test]
    fn singular_origin_pairing_is_excluded_or_rejected() {
        let g = make_grid(1, 16, 4.0).unwrap();
        let c = Field::from_real_fn(&g, |_| 1.0);
        let m = family_energy::<f64>(SignPair(Sign::Plus, Sign::Plus));
        let p = bilinear_direct(&m, &c, &c).unwrap();
        assert_eq!(p.excluded, 1);
        assert!(p.field.norm_sup() < 1e-15);
        let strict = m.with_policy(SingularPolicy::Error);
        assert!(matches!(bilinear_fast(&strict, &c, &c), Err(ResonanceError::Singular(_))));
    }

    #[test]
    fn direct_trilinear_guard() {
        let g = make_grid(2, 128, 4.0).unwrap();
        let z = Field::<f64>::zeros(&g);
        let one = TrilinearSymbol::one();
        assert!(matches!(trilinear_with(&one, &z, &z, &z, Path::Direct), Err(ResonanceError::TooLarge(16384))));
        assert!(trilinear_with(&one, &z, &z, &z, Path::Fast).is_ok());
    }

    #[test]
    fn grid_mismatch_rejected() {
        let a = Field::<f64>::zeros(&make_grid(1, 16, 4.0).unwrap());
        let b = Field::<f64>::zeros(&make_grid(1, 32, 4.0).unwrap());
        assert!(bilinear_apply(&BilinearSymbol::one(), &a, &b).is_err());
    }
}
