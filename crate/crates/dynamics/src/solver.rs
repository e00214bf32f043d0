//! Pseudospectral right-hand side, classical RK4 and the run driver.

use serde::{Deserialize, Serialize};

use kg_norms::{norm, sobolev, NormSpec, StrichartzAccumulator};
use kg_spectral::{derivative, japanese, laplacian, product_dealiased, Field, Float, Grid, C};

use crate::error::DynamicsError;
use crate::spec::{LinearForm, NonlinearitySpec, Var};
use crate::state::KGState;

/// Spatial derivatives of `(u, w)` used by the nonlinearity.
#[derive(Debug, Clone)]
pub struct Jet<T: Float> {
    pub u: Field<T>,
    pub w: Field<T>,
    /// `∂_j u`.
    pub du: Vec<Field<T>>,
    /// `∂_j w = ∂²_{tj} u`.
    pub dw: Vec<Field<T>>,
    /// `∂²_{jl} u`, full `d × d`.
    pub ddu: Vec<Vec<Field<T>>>,
}

impl<T: Float> Jet<T> {
    pub fn new(state: &KGState<T>) -> Self {
        let d = state.grid().dim();
        let du: Vec<Field<T>> = (0..d).map(|j| derivative(&state.u, j)).collect();
        let dw = (0..d).map(|j| derivative(&state.w, j)).collect();
        let ddu = (0..d).map(|j| (0..d).map(|l| derivative(&du[j], l)).collect()).collect();
        Jet { u: state.u.clone(), w: state.w.clone(), du, dw, ddu }
    }

    pub fn var(&self, v: Var) -> &Field<T> {
        match v {
            Var::U => &self.u,
            Var::Dt => &self.w,
            Var::Dx(j) => &self.du[j],
        }
    }
}

fn lit<T: Float>(c: f64) -> C<T> {
    C::new(T::lit(c), T::zero())
}

/// `acc + c·f`.
pub(crate) fn add_scaled<T: Float>(acc: &mut Field<T>, c: C<T>, f: &Field<T>) -> Result<(), DynamicsError> {
    *acc = acc.axpy(c, f)?;
    Ok(())
}

/// Evaluate a linear form with `var ↦ pick(var)`.
pub(crate) fn form_with<'a, T: Float>(
    form: &LinearForm,
    zero: &Field<T>,
    pick: impl Fn(Var) -> &'a Field<T>,
) -> Result<Field<T>, DynamicsError> {
    let mut out = zero.clone();
    for &(v, c) in &form.terms {
        if c != 0.0 {
            add_scaled(&mut out, lit(c), pick(v))?;
        }
    }
    Ok(out)
}

/// Coefficient fields `Q^{0j}` and `Q^{jl}` of the state.
#[derive(Debug, Clone)]
pub struct Coefficients<T: Float> {
    pub q0: Vec<Field<T>>,
    pub q: Vec<Vec<Field<T>>>,
}

pub fn coefficients<T: Float>(jet: &Jet<T>, spec: &NonlinearitySpec) -> Result<Coefficients<T>, DynamicsError> {
    let zero = Field::zeros(jet.u.grid());
    let q0 = spec.q0.iter().map(|f| form_with(f, &zero, |v| jet.var(v))).collect::<Result<_, _>>()?;
    let q = spec
        .q
        .iter()
        .map(|row| row.iter().map(|f| form_with(f, &zero, |v| jet.var(v))).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    Ok(Coefficients { q0, q })
}

/// `S(u, ∂u)` with dealiased products.
pub fn source<T: Float>(jet: &Jet<T>, spec: &NonlinearitySpec) -> Result<Field<T>, DynamicsError> {
    let mut out = Field::zeros(jet.u.grid());
    for &(a, b, c) in &spec.s {
        if c != 0.0 {
            add_scaled(&mut out, lit(c), &product_dealiased(jet.var(a), jet.var(b))?)?;
        }
    }
    Ok(out)
}

/// `F = 2Σ Q^{0j}∂_j w + Σ Q^{jl}∂²_{jl}u + S`.
pub fn nonlinearity<T: Float>(state: &KGState<T>, spec: &NonlinearitySpec) -> Result<Field<T>, DynamicsError> {
    let jet = Jet::new(state);
    nonlinearity_of(&jet, &coefficients(&jet, spec)?, spec)
}

pub(crate) fn nonlinearity_of<T: Float>(
    jet: &Jet<T>,
    co: &Coefficients<T>,
    spec: &NonlinearitySpec,
) -> Result<Field<T>, DynamicsError> {
    let d = spec.dim;
    let mut out = source(jet, spec)?;
    for j in 0..d {
        if !spec.q0[j].is_zero() {
            add_scaled(&mut out, lit(2.0), &product_dealiased(&co.q0[j], &jet.dw[j])?)?;
        }
        for l in 0..d {
            if !spec.q[j][l].is_zero() {
                add_scaled(&mut out, lit(1.0), &product_dealiased(&co.q[j][l], &jet.ddu[j][l])?)?;
            }
        }
    }
    Ok(out)
}

/// `Δu - u`.
pub fn linear_part<T: Float>(u: &Field<T>) -> Field<T> {
    laplacian(u).axpy(lit(-1.0), u).expect("same grid")
}

/// `(∂_t u, ∂_t w) = (w, Δu - u + F)`.
pub fn rhs<T: Float>(state: &KGState<T>, spec: &NonlinearitySpec) -> Result<(Field<T>, Field<T>), DynamicsError> {
    let mut dw = linear_part(&state.u);
    if !spec.is_linear() {
        add_scaled(&mut dw, lit(1.0), &nonlinearity(state, spec)?)?;
    }
    Ok((state.w.clone(), dw))
}

/// `⟨ξ_max⟩` over the whole lattice, Nyquist corner included.
pub fn max_japanese<T: Float>(grid: &Grid<T>) -> T {
    let r = (0..grid.len()).map(|i| grid.xi_norm(i)).fold(T::zero(), T::max);
    japanese(r)
}

/// Largest admissible step `0.5/⟨ξ_max⟩`.
pub fn cfl_limit<T: Float>(grid: &Grid<T>) -> T {
    T::lit(0.5) / max_japanese(grid)
}

fn combine<T: Float>(base: &KGState<T>, k: &(Field<T>, Field<T>), h: T) -> Result<KGState<T>, DynamicsError> {
    let c = C::new(h, T::zero());
    Ok(KGState { t: base.t + h, u: base.u.axpy(c, &k.0)?, w: base.w.axpy(c, &k.1)? })
}

/// One classical RK4 step.
pub fn step<T: Float>(state: &KGState<T>, spec: &NonlinearitySpec, dt: T) -> Result<KGState<T>, DynamicsError> {
    let limit = cfl_limit(state.grid());
    if !(dt > T::zero()) || dt > limit * (T::one() + T::lit(1e-12)) {
        return Err(DynamicsError::Cfl { dt: dt.as_f64(), limit: limit.as_f64() });
    }
    let half = dt / T::lit(2.0);
    let k1 = rhs(state, spec)?;
    let k2 = rhs(&combine(state, &k1, half)?, spec)?;
    let k3 = rhs(&combine(state, &k2, half)?, spec)?;
    let k4 = rhs(&combine(state, &k3, dt)?, spec)?;
    let sixth = dt / T::lit(6.0);
    let third = dt / T::lit(3.0);
    let mut u = state.u.clone();
    let mut w = state.w.clone();
    for (k, c) in [(&k1, sixth), (&k2, third), (&k3, third), (&k4, sixth)] {
        u = u.axpy(C::new(c, T::zero()), &k.0)?;
        w = w.axpy(C::new(c, T::zero()), &k.1)?;
    }
    let out = KGState { t: state.t + dt, u, w };
    if !out.is_finite() {
        return Err(DynamicsError::NotFinite { t: out.t.as_f64() });
    }
    Ok(out)
}

/// Exact linear flow by the mode formula
/// `û(t) = û₀ cos(Λ(t-t₀)) + ŵ₀ sin(Λ(t-t₀))/Λ`, `ŵ(t) = -Λû₀ sin(Λ(t-t₀)) + ŵ₀ cos(Λ(t-t₀))`.
pub fn linear_exact<T: Float>(state: &KGState<T>, t: T) -> KGState<T> {
    let g = state.grid().clone();
    let s = t - state.t;
    let (uh, wh) = (state.u.spectrum(), state.w.spectrum());
    let mut u = Vec::with_capacity(g.len());
    let mut w = Vec::with_capacity(g.len());
    for i in 0..g.len() {
        let l = japanese(g.xi_norm(i));
        let (sn, cs) = (l * s).sin_cos();
        u.push(uh[i] * cs + wh[i] * (sn / l));
        w.push(uh[i] * (-l * sn) + wh[i] * cs);
    }
    KGState {
        t,
        u: Field::from_spectrum(&g, u).expect("grid length"),
        w: Field::from_spectrum(&g, w).expect("grid length"),
    }
}

/// Which field a monitor reads.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Target {
    /// `U = w + iΛu`.
    Unknown,
    /// `V = e^{-itΛ}U`.
    Profile,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monitor {
    pub target: Target,
    pub norm: NormSpec,
}

impl Monitor {
    pub fn on_unknown(norm: NormSpec) -> Self {
        Monitor { target: Target::Unknown, norm }
    }

    pub fn on_profile(norm: NormSpec) -> Self {
        Monitor { target: Target::Profile, norm }
    }

    pub fn column(&self) -> String {
        match self.target {
            Target::Unknown => self.norm.name(),
            Target::Profile => format!("V_{}", self.norm.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub t_end: f64,
    /// Requested step; the driver uses the largest `dt' <= dt` that lands on `t_end`.
    pub dt: f64,
    pub monitors: Vec<Monitor>,
    /// Logarithmic checkpoints per decade of `t`.
    pub per_decade: usize,
    /// Sobolev index of the blow-up norm.
    pub sobolev_index: f64,
    /// Blow-up when `‖U‖_{H^N}` exceeds this multiple of its initial value.
    pub growth_limit: f64,
    pub keep_snapshots: bool,
}

impl RunConfig {
    pub fn new(t_end: f64, dt: f64, sobolev_index: f64) -> Self {
        RunConfig {
            t_end,
            dt,
            monitors: Vec::new(),
            per_decade: 10,
            sobolev_index,
            growth_limit: 10.0,
            keep_snapshots: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BlowUpCause {
    Growth,
    NotFinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Verdict {
    Survived { t_end: f64 },
    BlewUp { t: f64, cause: BlowUpCause },
}

impl Verdict {
    /// `t_end` for survivors, the blow-up time otherwise.
    pub fn lifespan(&self) -> f64 {
        match *self {
            Verdict::Survived { t_end } => t_end,
            Verdict::BlewUp { t, .. } => t,
        }
    }

    pub fn survived(&self) -> bool {
        matches!(self, Verdict::Survived { .. })
    }

    pub fn label(&self) -> String {
        match *self {
            Verdict::Survived { .. } => "survived".into(),
            Verdict::BlewUp { t, .. } => format!("blew-up-at-{t}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub t: f64,
    /// `‖U‖_{H^N}`.
    pub hn: f64,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Trajectory<T: Float> {
    pub columns: Vec<String>,
    pub rows: Vec<RunRow>,
    pub verdict: Verdict,
    pub last: KGState<T>,
    /// States at the checkpoints, when requested.
    pub snapshots: Vec<KGState<T>>,
}

/// Checkpoint times `t₀·10^{k/per_decade}` below `t_end`, then `t_end`.
pub fn log_schedule(t0: f64, t_end: f64, per_decade: usize) -> Vec<f64> {
    let mut out = vec![t0];
    let r = 10f64.powf(1.0 / per_decade.max(1) as f64);
    let mut k = 1;
    loop {
        let t = t0 * r.powi(k);
        if t >= t_end * (1.0 - 1e-12) {
            break;
        }
        out.push(t);
        k += 1;
    }
    if t_end > t0 {
        out.push(t_end);
    }
    out
}

struct Recorder {
    monitors: Vec<Monitor>,
    strichartz: Vec<Option<StrichartzAccumulator>>,
}

impl Recorder {
    fn new(monitors: &[Monitor]) -> Result<Self, DynamicsError> {
        let strichartz = monitors
            .iter()
            .map(|m| match m.norm {
                NormSpec::Strichartz { p, weight } => StrichartzAccumulator::new(p, weight).map(Some),
                _ => Ok(None),
            })
            .collect::<Result<_, _>>()?;
        Ok(Recorder { monitors: monitors.to_vec(), strichartz })
    }

    fn row<T: Float>(&mut self, st: &KGState<T>, hn: f64) -> Result<RunRow, DynamicsError> {
        let big_u = st.big_u();
        let mut prof = None;
        let mut values = Vec::with_capacity(self.monitors.len());
        for (m, acc) in self.monitors.iter().zip(self.strichartz.iter_mut()) {
            let f = match m.target {
                Target::Unknown => &big_u,
                Target::Profile => prof.get_or_insert_with(|| st.profile()),
            };
            let v = match acc {
                Some(a) => a.update(st.t.as_f64(), f.norm_sup().as_f64())?,
                None => norm(f, m.norm)?.as_f64(),
            };
            values.push(v);
        }
        Ok(RunRow { t: st.t.as_f64(), hn, values })
    }
}

/// Integrate to `t_end` or until `‖U‖_{H^N}` grows past the limit or turns non-finite.
pub fn run_to_time<T: Float>(
    initial: &KGState<T>,
    spec: &NonlinearitySpec,
    cfg: &RunConfig,
) -> Result<Trajectory<T>, DynamicsError> {
    spec.validate()?;
    let t0 = initial.t.as_f64();
    if !(cfg.t_end > t0) || !(cfg.dt > 0.0) {
        return Err(DynamicsError::States(format!("need t_end > {t0} and dt > 0")));
    }
    let steps = ((cfg.t_end - t0) / cfg.dt - 1e-9).ceil().max(1.0) as usize;
    let dt = T::lit((cfg.t_end - t0) / steps as f64);
    let n_index = T::lit(cfg.sobolev_index);
    let schedule = log_schedule(t0, cfg.t_end, cfg.per_decade);
    let mut rec = Recorder::new(&cfg.monitors)?;
    let hn0 = sobolev(&initial.big_u(), n_index).as_f64();
    let limit = cfg.growth_limit * hn0;

    let mut st = initial.clone();
    let mut rows = vec![rec.row(&st, hn0)?];
    let mut snapshots = if cfg.keep_snapshots { vec![st.clone()] } else { Vec::new() };
    let mut next = 1;
    let mut verdict = Verdict::Survived { t_end: cfg.t_end };
    for k in 1..=steps {
        let nxt = match step(&st, spec, dt) {
            Ok(s) => s,
            Err(DynamicsError::NotFinite { t }) => {
                verdict = Verdict::BlewUp { t, cause: BlowUpCause::NotFinite };
                break;
            }
            Err(e) => return Err(e),
        };
        st = nxt;
        // Pin the clock to the grid of step times so rounding cannot drift.
        st.t = T::lit(t0) + dt * T::of_usize(k);
        let hn = sobolev(&st.big_u(), n_index).as_f64();
        let t = st.t.as_f64();
        if !hn.is_finite() {
            verdict = Verdict::BlewUp { t, cause: BlowUpCause::NotFinite };
            break;
        }
        let due = next < schedule.len() && t >= schedule[next] * (1.0 - 1e-12);
        if due || hn > limit {
            rows.push(rec.row(&st, hn)?);
            if cfg.keep_snapshots {
                snapshots.push(st.clone());
            }
            while next < schedule.len() && t >= schedule[next] * (1.0 - 1e-12) {
                next += 1;
            }
        }
        if hn > limit {
            verdict = Verdict::BlewUp { t, cause: BlowUpCause::Growth };
            break;
        }
    }
    let columns = cfg.monitors.iter().map(Monitor::column).collect();
    Ok(Trajectory { columns, rows, verdict, last: st, snapshots })
}

#[cfg(test)]
mod tests {
    use super::*;
    use kg_spectral::make_grid;

    fn state(d: usize) -> KGState<f64> {
        let g = make_grid(d, 16, 3.0).unwrap();
        let u = Field::from_real_fn(&g, |x| 0.1 * (std::f64::consts::PI * x[0] / 3.0).cos());
        KGState::new(1.0, u, Field::zeros(&g)).unwrap()
    }

    #[test]
    fn zero_state_has_zero_derivative() {
        let g = make_grid(2, 8, 2.0).unwrap();
        let st = KGState::zeros(&g, 1.0);
        let (a, b) = rhs(&st, &NonlinearitySpec::default_instance(2)).unwrap();
        assert_eq!(a.norm_sup(), 0.0);
        assert_eq!(b.norm_sup(), 0.0);
    }

    #[test]
    fn linear_dispersion_relation() {
        let st = state(1);
        let (_, dw) = rhs(&st, &NonlinearitySpec::zero(1)).unwrap();
        let xi = std::f64::consts::PI / 3.0;
        let want = st.u.scale(C::new(-(1.0 + xi * xi), 0.0));
        assert!(dw.max_abs_diff(&want).unwrap() < 1e-14);
    }

    #[test]
    fn cfl_guard() {
        let st = state(2);
        let lim = cfl_limit(st.grid());
        let spec = NonlinearitySpec::zero(2);
        assert!(matches!(step(&st, &spec, 1.01 * lim), Err(DynamicsError::Cfl { .. })));
        assert!(step(&st, &spec, lim).is_ok());
        assert!(step(&st, &spec, 0.0).is_err());
    }

    #[test]
    fn nan_aborts() {
        let mut st = state(1);
        st.u = st.u.map_physical(|i, c| if i == 3 { C::new(f64::NAN, 0.0) } else { c });
        let r = step(&st, &NonlinearitySpec::zero(1), 0.01);
        assert!(matches!(r, Err(DynamicsError::NotFinite { .. })));
    }

    #[test]
    fn schedule_is_logarithmic() {
        let s = log_schedule(1.0, 10.0, 2);
        assert_eq!(s.len(), 3);
        assert!((s[1] - 10f64.sqrt()).abs() < 1e-12);
        assert_eq!(*s.last().unwrap(), 10.0);
    }

    #[test]
    fn linear_run_survives_with_constant_norms() {
        let st = state(1);
        let mut cfg = RunConfig::new(3.0, 0.02, 8.0);
        cfg.monitors = vec![Monitor::on_unknown(NormSpec::Sobolev(0.0)), Monitor::on_profile(NormSpec::Sobolev(0.0))];
        let tr = run_to_time(&st, &NonlinearitySpec::zero(1), &cfg).unwrap();
        assert!(tr.verdict.survived());
        let first = tr.rows[0].values[0];
        for r in &tr.rows {
            assert!((r.values[0] - first).abs() < 1e-9 * first);
            assert!((r.hn - tr.rows[0].hn).abs() < 1e-9 * r.hn);
        }
        assert_eq!(tr.columns, vec!["sobolev_0".to_string(), "V_sobolev_0".to_string()]);
    }
}
