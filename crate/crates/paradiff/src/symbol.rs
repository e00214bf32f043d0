//! Separable symbols `a(x, ζ) = Σᵢ fᵢ(x) gᵢ(ζ)`.

use std::fmt;
use std::sync::Arc;

use kg_spectral::{japanese, product_dealiased, Field, Float, C};

use crate::error::ParadiffError;

type ZetaCallable<T> = Arc<dyn Fn(&[T]) -> C<T> + Send + Sync>;

/// Behaviour of a frequency factor at `ζ = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Origin<T: Float> {
    Value(C<T>),
    Excluded,
}

/// Frequency factor `g(ζ)`, callable on any lattice point.
#[derive(Clone)]
pub struct ZetaFn<T: Float> {
    f: ZetaCallable<T>,
    origin: Origin<T>,
    label: String,
}

impl<T: Float> fmt::Debug for ZetaFn<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZetaFn({})", self.label)
    }
}

impl<T: Float> ZetaFn<T> {
    /// Factor that is finite at the origin; its value there is recorded.
    pub fn smooth(label: &str, f: impl Fn(&[T]) -> C<T> + Send + Sync + 'static) -> Self {
        let origin = Origin::Value(f(&[T::zero(); 3]));
        ZetaFn { f: Arc::new(f), origin, label: label.to_string() }
    }

    /// Factor left undefined at the origin.
    pub fn excluding_origin(label: &str, f: impl Fn(&[T]) -> C<T> + Send + Sync + 'static) -> Self {
        ZetaFn { f: Arc::new(f), origin: Origin::Excluded, label: label.to_string() }
    }

    pub fn one() -> Self {
        Self::smooth("1", |_| C::new(T::one(), T::zero()))
    }

    /// `ζ_j`.
    pub fn component(j: usize) -> Self {
        Self::smooth(&format!("z{j}"), move |z| C::new(z.get(j).copied().unwrap_or(T::zero()), T::zero()))
    }

    /// `Λ(ζ)^s`.
    pub fn lambda_pow(s: f64) -> Self {
        let st = T::lit(s);
        Self::smooth(&format!("L^{s}"), move |z| {
            let r2 = z.iter().fold(T::zero(), |a, &v| a + v * v);
            C::new(japanese(r2.sqrt()).powf(st), T::zero())
        })
    }

    pub fn origin(&self) -> Origin<T> {
        self.origin
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Evaluate, refusing the origin when it was declared excluded.
    pub fn eval(&self, zeta: &[T]) -> Result<C<T>, ParadiffError> {
        if zeta.iter().all(|v| *v == T::zero()) {
            return match self.origin {
                Origin::Value(v) => Ok(v),
                Origin::Excluded => Err(ParadiffError::OriginUndeclared(self.label.clone())),
            };
        }
        Ok((self.f)(zeta))
    }

    /// Raw evaluation without the origin check.
    pub fn eval_unchecked(&self, zeta: &[T]) -> C<T> {
        (self.f)(zeta)
    }

    pub fn mul(&self, other: &ZetaFn<T>) -> ZetaFn<T> {
        let (a, b) = (self.f.clone(), other.f.clone());
        let origin = match (self.origin, other.origin) {
            (Origin::Value(x), Origin::Value(y)) => Origin::Value(x * y),
            _ => Origin::Excluded,
        };
        ZetaFn { f: Arc::new(move |z| a(z) * b(z)), origin, label: format!("{}*{}", self.label, other.label) }
    }

    pub fn is_constant_one(&self) -> bool {
        self.label == "1"
    }
}

/// One separable term; `x = None` stands for the constant function 1.
#[derive(Debug, Clone)]
pub struct SymbolTerm<T: Float> {
    pub x: Option<Field<T>>,
    pub zeta: ZetaFn<T>,
}

/// Sum of separable terms with an order used for norm reporting.
#[derive(Debug, Clone)]
pub struct Symbol<T: Float> {
    terms: Vec<SymbolTerm<T>>,
    order: f64,
}

impl<T: Float> Symbol<T> {
    pub fn new(terms: Vec<SymbolTerm<T>>, order: f64) -> Self {
        Symbol { terms, order }
    }

    pub fn zero() -> Self {
        Symbol { terms: Vec::new(), order: 0.0 }
    }

    pub fn one() -> Self {
        Self::from_zeta(ZetaFn::one(), 0.0)
    }

    /// x-only symbol `f(x)`.
    pub fn from_x(f: Field<T>) -> Self {
        Symbol { terms: vec![SymbolTerm { x: Some(f), zeta: ZetaFn::one() }], order: 0.0 }
    }

    /// ζ-only symbol.
    pub fn from_zeta(g: ZetaFn<T>, order: f64) -> Self {
        Symbol { terms: vec![SymbolTerm { x: None, zeta: g }], order }
    }

    pub fn term(f: Field<T>, g: ZetaFn<T>, order: f64) -> Self {
        Symbol { terms: vec![SymbolTerm { x: Some(f), zeta: g }], order }
    }

    pub fn terms(&self) -> &[SymbolTerm<T>] {
        &self.terms
    }

    pub fn order(&self) -> f64 {
        self.order
    }

    pub fn with_order(mut self, order: f64) -> Self {
        self.order = order;
        self
    }

    pub fn add(&self, other: &Symbol<T>) -> Symbol<T> {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Symbol { terms, order: self.order.max(other.order) }
    }

    /// `c · a`, folding the scalar into the frequency factors.
    pub fn scale(&self, c: C<T>) -> Symbol<T> {
        let k = ZetaFn::smooth("c", move |_| c);
        let terms = self
            .terms
            .iter()
            .map(|t| SymbolTerm { x: t.x.clone(), zeta: t.zeta.mul(&k) })
            .collect();
        Symbol { terms, order: self.order }
    }

    /// Product of two sums, expanded term by term; x-factors use the dealiased product.
    pub fn mul(&self, other: &Symbol<T>) -> Result<Symbol<T>, ParadiffError> {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let x = match (&a.x, &b.x) {
                    (None, None) => None,
                    (Some(f), None) | (None, Some(f)) => Some(f.clone()),
                    (Some(f), Some(g)) => Some(product_dealiased(f, g)?),
                };
                let zeta = if a.zeta.is_constant_one() {
                    b.zeta.clone()
                } else if b.zeta.is_constant_one() {
                    a.zeta.clone()
                } else {
                    a.zeta.mul(&b.zeta)
                };
                terms.push(SymbolTerm { x, zeta });
            }
        }
        Ok(Symbol { terms, order: self.order + other.order })
    }

    /// Truncated square root `1 + q/2 - q²/8 + q³/16` of `1 + q`.
    pub fn sqrt_one_plus(q: &Symbol<T>) -> Result<Symbol<T>, ParadiffError> {
        let q2 = q.mul(q)?;
        let q3 = q2.mul(q)?;
        let s = Symbol::one()
            .add(&q.scale(C::new(T::lit(0.5), T::zero())))
            .add(&q2.scale(C::new(T::lit(-0.125), T::zero())))
            .add(&q3.scale(C::new(T::lit(0.0625), T::zero())));
        Ok(s.with_order(0.0))
    }

    /// Pointwise value `a(x_idx, ζ)`.
    pub fn eval(&self, x_idx: usize, zeta: &[T]) -> Result<C<T>, ParadiffError> {
        let mut acc = C::new(T::zero(), T::zero());
        for t in &self.terms {
            let fx = t.x.as_ref().map_or(C::new(T::one(), T::zero()), |f| f.physical()[x_idx]);
            acc = acc + fx * t.zeta.eval(zeta)?;
        }
        Ok(acc)
    }
}
