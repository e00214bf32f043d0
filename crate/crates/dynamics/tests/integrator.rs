use kg_dynamics::*;
use kg_spectral::{make_grid, Field};

const PI: f64 = std::f64::consts::PI;

fn periodic(f: &[f64], i: isize) -> f64 {
    let n = f.len() as isize;
    f[i.rem_euclid(n) as usize]
}

fn fd1(f: &[f64], dx: f64) -> Vec<f64> {
    (0..f.len() as isize)
        .map(|i| {
            (-periodic(f, i + 2) + 8.0 * periodic(f, i + 1) - 8.0 * periodic(f, i - 1) + periodic(f, i - 2))
                / (12.0 * dx)
        })
        .collect()
}

fn fd2(f: &[f64], dx: f64) -> Vec<f64> {
    (0..f.len() as isize)
        .map(|i| {
            (-periodic(f, i + 2) + 16.0 * periodic(f, i + 1) - 30.0 * periodic(f, i) + 16.0 * periodic(f, i - 1)
                - periodic(f, i - 2))
                / (12.0 * dx * dx)
        })
        .collect()
}

fn real(f: &Field<f64>) -> Vec<f64> {
    f.physical().iter().map(|c| c.re).collect()
}

#[test]
fn nonlinearity_matches_finite_difference_oracle() {
    let g = make_grid(1, 1024, PI).unwrap();
    let eps = 0.05;
    let u = Field::from_real_fn(&g, |x| eps * (x[0].cos() + 0.5 * (2.0 * x[0]).sin()));
    let w = Field::from_real_fn(&g, |x| eps * (0.3 * x[0].sin() - 0.7 * (2.0 * x[0]).cos()));
    let st = KGState::new(1.0, u.clone(), w.clone()).unwrap();
    let spec = NonlinearitySpec {
        dim: 1,
        q0: vec![LinearForm::of(Var::U, 1.0).plus(Var::Dx(0), -0.5)],
        q: vec![vec![LinearForm::of(Var::U, 1.0).plus(Var::Dt, 0.25)]],
        s: vec![(Var::U, Var::U, 1.0), (Var::Dt, Var::Dt, 1.0), (Var::U, Var::Dx(0), 0.7)],
    };
    spec.validate().unwrap();
    let f = real(&nonlinearity(&st, &spec).unwrap());

    let dx = g.dx();
    let (uv, wv) = (real(&u), real(&w));
    let (ux, uxx, wx) = (fd1(&uv, dx), fd2(&uv, dx), fd1(&wv, dx));
    let oracle: Vec<f64> = (0..uv.len())
        .map(|i| {
            let q0 = uv[i] - 0.5 * ux[i];
            let q = uv[i] + 0.25 * wv[i];
            2.0 * q0 * wx[i] + q * uxx[i] + uv[i] * uv[i] + wv[i] * wv[i] + 0.7 * uv[i] * ux[i]
        })
        .collect();
    let scale = oracle.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let err = f.iter().zip(&oracle).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
    assert!(err / scale < 1e-8, "relative error {:e}", err / scale);
}

#[test]
fn linear_one_step_error_is_fifth_order() {
    let g = make_grid::<f64>(1, 32, 8.0).unwrap();
    let spec = NonlinearitySpec::zero(1);
    let s0 = initial_data(&g, DataShape::Band { radius: 3.0, with_mean: true }, 4.0, 1.0, 3);
    let err = |dt: f64| {
        let num = step(&s0, &spec, dt).unwrap();
        let exact = linear_exact(&s0, 1.0 + dt);
        num.big_u().sub(&exact.big_u()).unwrap().norm_l2()
    };
    let ratio = err(0.04) / err(0.02);
    assert!((ratio / 32.0 - 1.0).abs() < 0.2, "ratio {ratio}");
}

#[test]
fn cfl_guard_rejects_large_steps() {
    let g = make_grid::<f64>(1, 32, 8.0).unwrap();
    let s0 = KGState::<f64>::zeros(&g, 1.0);
    let limit = cfl_limit(&g);
    assert!(step(&s0, &NonlinearitySpec::zero(1), limit * 1.01).is_err());
    assert!(step(&s0, &NonlinearitySpec::zero(1), limit).is_ok());
}

#[test]
fn linear_flow_conserves_l2_and_profile() {
    let g = make_grid::<f64>(1, 32, 8.0).unwrap();
    let spec = NonlinearitySpec::zero(1);
    let s0 = initial_data(&g, DataShape::Band { radius: 1.0, with_mean: true }, 4.0, 1.0, 11);
    let n0 = s0.big_u().norm_l2();
    let v0 = s0.profile();
    let mut st = s0.clone();
    for k in 0..1000 {
        st = step(&st, &spec, 0.02).unwrap();
        if k == 99 {
            let dv = st.profile().sub(&v0).unwrap().norm_l2();
            assert!(dv / n0 < 1e-8, "profile drift {dv:e}");
        }
    }
    let drift = (st.big_u().norm_l2() - n0).abs() / n0;
    assert!(drift < 1e-8, "L2 drift {drift:e}");
}

#[test]
fn nonlinear_flow_stays_real() {
    let g = make_grid::<f64>(2, 16, 6.0).unwrap();
    let spec = NonlinearitySpec::default_instance(2);
    let mut st = initial_data(&g, DataShape::Localized { width: 1.5 }, 11.0, 0.05, 2);
    for _ in 0..100 {
        st = step(&st, &spec, 0.02).unwrap();
    }
    assert!(st.imaginary_part() <= 1e-10, "{:e}", st.imaginary_part());
}

#[test]
fn tiny_data_stays_small_to_t50() {
    let g = make_grid::<f64>(1, 32, 8.0).unwrap();
    let spec = NonlinearitySpec::default_instance(1);
    let eps = 1e-3;
    let s0 = initial_data(&g, DataShape::Band { radius: 2.0, with_mean: true }, 8.0, eps, 4);
    let mut cfg = RunConfig::new(50.0, 0.05, 8.0);
    cfg.per_decade = 40;
    let tr = run_to_time(&s0, &spec, &cfg).unwrap();
    assert!(tr.verdict.survived());
    for r in &tr.rows {
        assert!(r.hn <= 2.0 * eps, "t={} hn={}", r.t, r.hn);
    }
}

#[test]
fn linear_run_survives_with_constant_norms() {
    let g = make_grid::<f64>(1, 32, 8.0).unwrap();
    let s0 = initial_data(&g, DataShape::Band { radius: 1.0, with_mean: true }, 8.0, 0.5, 4);
    let tr = run_to_time(&s0, &NonlinearitySpec::zero(1), &RunConfig::new(20.0, 0.02, 8.0)).unwrap();
    assert!(tr.verdict.survived());
    for r in &tr.rows {
        assert!((r.hn / tr.rows[0].hn - 1.0).abs() < 1e-8);
    }
}

#[test]
fn blow_up_verdicts_are_deterministic() {
    let g = make_grid(1, 64, 8.0 * PI).unwrap();
    let mut spec = NonlinearitySpec::standard(1, 40.0, 0.0, 0.0, 40.0);
    spec.s.retain(|t| t.2 != 0.0);
    let s0 = initial_data(&g, DataShape::Band { radius: 1.0, with_mean: true }, 8.0, 0.4, 1);
    let cfg = RunConfig::new(50.0, 0.02, 8.0);
    let a = run_to_time(&s0, &spec, &cfg).unwrap();
    let b = run_to_time(&s0, &spec, &cfg).unwrap();
    assert!(!a.verdict.survived());
    assert_eq!(a.verdict, b.verdict);
    assert_eq!(a.rows, b.rows);
}

#[test]
fn unknown_reconstruction_round_trips() {
    let g = make_grid::<f64>(2, 16, 5.0).unwrap();
    let st = initial_data(&g, DataShape::Band { radius: 2.0, with_mean: true }, 4.0, 0.3, 9);
    let back = KGState::from_unknown(1.0, &st.big_u());
    assert!(back.u.max_abs_diff(&st.u).unwrap() < 1e-10);
    assert!(back.w.max_abs_diff(&st.w).unwrap() < 1e-10);
    let plus = st.unknown(kg_spectral::Sign::Plus);
    let minus = st.unknown(kg_spectral::Sign::Minus);
    assert!(minus.max_abs_diff(&plus.conj()).unwrap() < 1e-10);
}
