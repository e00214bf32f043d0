//! The quadratic quasilinear nonlinearity
//! `F = 2Σ_j Q^{0j}∂²_{tj}u + Σ_{jl} Q^{jl}∂²_{jl}u + S(u, ∂u)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::DynamicsError;

/// Argument of a linear form: `u`, `∂_t u` or `∂_j u` (0-based axis).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Var {
    U,
    Dt,
    Dx(usize),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::U => write!(f, "u"),
            Var::Dt => write!(f, "dt"),
            Var::Dx(j) => write!(f, "d{}", j + 1),
        }
    }
}

impl std::str::FromStr for Var {
    type Err = DynamicsError;

    /// `u`, `dt`, or `d<j>` with a 1-based axis.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "u" => Ok(Var::U),
            "dt" | "d0" => Ok(Var::Dt),
            t => t
                .strip_prefix('d')
                .and_then(|j| j.parse::<usize>().ok())
                .filter(|&j| j >= 1)
                .map(|j| Var::Dx(j - 1))
                .ok_or_else(|| DynamicsError::Spec(format!("unknown variable `{s}`"))),
        }
    }
}

/// `Σ c·var`; there is no constant slot, so the form vanishes at the origin.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LinearForm {
    pub terms: Vec<(Var, f64)>,
}

impl LinearForm {
    pub fn zero() -> Self {
        LinearForm { terms: Vec::new() }
    }

    pub fn of(var: Var, c: f64) -> Self {
        LinearForm { terms: vec![(var, c)] }
    }

    pub fn plus(mut self, var: Var, c: f64) -> Self {
        self.terms.push((var, c));
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|&(_, c)| c == 0.0)
    }

    /// Coefficient of `var`, summing repeats.
    pub fn coeff(&self, var: Var) -> f64 {
        self.terms.iter().filter(|(v, _)| *v == var).map(|(_, c)| c).sum()
    }

    fn same_as(&self, other: &LinearForm, dim: usize) -> bool {
        all_vars(dim).iter().all(|&v| self.coeff(v) == other.coeff(v))
    }
}

/// `u, ∂_t u, ∂_1 u, …, ∂_d u`.
pub fn all_vars(dim: usize) -> Vec<Var> {
    let mut v = vec![Var::U, Var::Dt];
    v.extend((0..dim).map(Var::Dx));
    v
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonlinearitySpec {
    pub dim: usize,
    /// `Q^{0j}`, one form per axis.
    pub q0: Vec<LinearForm>,
    /// `Q^{jl}`, row-major `d × d`.
    pub q: Vec<Vec<LinearForm>>,
    /// Monomials `c·X_a·X_b` of `S`.
    pub s: Vec<(Var, Var, f64)>,
}

impl NonlinearitySpec {
    /// Linear Klein-Gordon.
    pub fn zero(dim: usize) -> Self {
        NonlinearitySpec {
            dim,
            q0: vec![LinearForm::zero(); dim],
            q: vec![vec![LinearForm::zero(); dim]; dim],
            s: Vec::new(),
        }
    }

    /// `Q^{0j} = αu`, `Q^{jl} = βuδ_{jl}`, `S = γ₁u² + γ₂(∂_t u)²`.
    pub fn standard(dim: usize, alpha: f64, beta: f64, gamma1: f64, gamma2: f64) -> Self {
        let mut sp = Self::zero(dim);
        for j in 0..dim {
            sp.q0[j] = LinearForm::of(Var::U, alpha);
            sp.q[j][j] = LinearForm::of(Var::U, beta);
        }
        sp.s = vec![(Var::U, Var::U, gamma1), (Var::Dt, Var::Dt, gamma2)];
        sp
    }

    /// The standard instance with every coefficient equal to 1.
    pub fn default_instance(dim: usize) -> Self {
        Self::standard(dim, 1.0, 1.0, 1.0, 1.0)
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        let d = self.dim;
        if !(1..=3).contains(&d) {
            return Err(DynamicsError::Spec(format!("dimension must be 1, 2 or 3, got {d}")));
        }
        if self.q0.len() != d || self.q.len() != d || self.q.iter().any(|r| r.len() != d) {
            return Err(DynamicsError::Spec("coefficient arrays do not match the dimension".into()));
        }
        let var_ok = |v: Var| !matches!(v, Var::Dx(j) if j >= d);
        let forms = self.q0.iter().chain(self.q.iter().flatten());
        for f in forms {
            for &(v, c) in &f.terms {
                if !var_ok(v) || !c.is_finite() {
                    return Err(DynamicsError::Spec(format!("bad term {c}·{v}")));
                }
            }
        }
        for &(a, b, c) in &self.s {
            if !var_ok(a) || !var_ok(b) || !c.is_finite() {
                return Err(DynamicsError::Spec(format!("bad source term {c}·{a}·{b}")));
            }
        }
        for j in 0..d {
            for l in 0..j {
                if !self.q[j][l].same_as(&self.q[l][j], d) {
                    return Err(DynamicsError::Spec(format!("Q^{{jl}} not symmetric at ({}, {})", j + 1, l + 1)));
                }
            }
        }
        Ok(())
    }

    pub fn is_linear(&self) -> bool {
        self.q0.iter().all(LinearForm::is_zero)
            && self.q.iter().flatten().all(LinearForm::is_zero)
            && self.s.iter().all(|&(_, _, c)| c == 0.0)
    }

    /// True when some coefficient involves `∂_t u`, so `∂_t Q` sees `∂²_t u`.
    pub fn q_uses_time_derivative(&self) -> bool {
        self.q0.iter().chain(self.q.iter().flatten()).any(|f| f.coeff(Var::Dt) != 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid_and_nonlinear() {
        for d in 1..=3 {
            let s = NonlinearitySpec::default_instance(d);
            s.validate().unwrap();
            assert!(!s.is_linear());
            assert!(NonlinearitySpec::zero(d).is_linear());
        }
    }

    #[test]
    fn asymmetric_q_rejected() {
        let mut s = NonlinearitySpec::default_instance(2);
        s.q[0][1] = LinearForm::of(Var::U, 1.0);
        assert!(s.validate().is_err());
        s.q[1][0] = LinearForm::of(Var::U, 0.5).plus(Var::U, 0.5);
        s.validate().unwrap();
    }

    #[test]
    fn out_of_range_axis_rejected() {
        let mut s = NonlinearitySpec::default_instance(1);
        s.s.push((Var::Dx(1), Var::U, 1.0));
        assert!(s.validate().is_err());
    }

    #[test]
    fn var_round_trip() {
        for v in [Var::U, Var::Dt, Var::Dx(0), Var::Dx(2)] {
            assert_eq!(v.to_string().parse::<Var>().unwrap(), v);
        }
        assert!("d0x".parse::<Var>().is_err());
    }
}
