//! Truncated power series in `x` whose coefficients are polynomials in `y`
//! with exact rational coefficients.
//!
//! A [`BivariateSeries`] of order `N` stores ordinary coefficients
//! `c[0..=N]`, so that `f(x, y) = Σ c[n](y) x^n + O(x^{N+1})`. Exponential
//! generating function coefficients `a_n = c[n]·n!` are recovered on demand
//! with [`BivariateSeries::egf_coeff`], which keeps multiplication a plain
//! Cauchy product.
//!
//! Besides the ring operations the module provides the three solvers every
//! counting model is built from: [`solve_linear_ode`], [`BivariateSeries::exp_series`]
//! and the x-adic [`solve_fixed_point`].

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("truncation orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("exp of a series with nonzero constant term")]
    NonzeroConstant,
    #[error("coefficient of x^{0} is not divisible by y")]
    NotDivisibleByY(usize),
    #[error("fixed-point iteration did not stabilise after {0} steps")]
    ContractionViolation(usize),
    #[error("ODE coefficients known to order {known}, need {needed}")]
    InsufficientOrder { known: usize, needed: usize },
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Dense polynomial in `y`; trailing zero coefficients are always trimmed,
/// so the zero polynomial has no coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct YPoly(Vec<Rational>);

impl YPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        YPoly(coeffs)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Self {
        YPoly(Vec::new())
    }

    pub fn one() -> Self {
        Self::constant(rat(1))
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `c·y^k`.
    pub fn monomial(k: usize, c: Rational) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn y() -> Self {
        Self::monomial(1, rat(1))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.0.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &YPoly) -> YPoly {
        let len = self.0.len().max(other.0.len());
        YPoly::new((0..len).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &YPoly) -> YPoly {
        let len = self.0.len().max(other.0.len());
        YPoly::new((0..len).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &YPoly) -> YPoly {
        if self.is_zero() || other.is_zero() {
            return YPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        YPoly::new(out)
    }

    pub fn scale(&self, c: &Rational) -> YPoly {
        YPoly::new(self.0.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, y: &Rational) -> Rational {
        self.0
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * y + c)
    }

    /// `p'(y)` evaluated at `y = 1`.
    pub fn derivative_at_one(&self) -> Rational {
        self.0
            .iter()
            .enumerate()
            .skip(1)
            .fold(Rational::zero(), |acc, (k, c)| acc + c * rat(k as i64))
    }

    /// Exact division by `y`; `None` when the constant term is nonzero.
    pub fn divide_by_y(&self) -> Option<YPoly> {
        match self.0.first() {
            None => Some(YPoly::zero()),
            Some(c0) if c0.is_zero() => Some(YPoly(self.0[1..].to_vec())),
            Some(_) => None,
        }
    }

    /// Coefficients as integers, if they all are.
    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.0
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }
}

impl fmt::Display for YPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                _ if a.is_one() => {}
                _ => write!(f, "{a}·")?,
            }
            match k {
                0 => {}
                1 => f.write_str("y")?,
                _ => write!(f, "y^{k}")?,
            }
        }
        Ok(())
    }
}

/// Truncated series `Σ_{n ≤ order} c[n](y) x^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BivariateSeries {
    order: usize,
    coeffs: Vec<YPoly>,
}

impl BivariateSeries {
    pub fn zero(order: usize) -> Self {
        BivariateSeries {
            order,
            coeffs: vec![YPoly::zero(); order + 1],
        }
    }

    pub fn constant(order: usize, p: YPoly) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = p;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(order, YPoly::one())
    }

    /// `p(y)·x^n` (zero when `n > order`).
    pub fn monomial(order: usize, n: usize, p: YPoly) -> Self {
        let mut s = Self::zero(order);
        if n <= order {
            s.coeffs[n] = p;
        }
        s
    }

    pub fn x(order: usize) -> Self {
        Self::monomial(order, 1, YPoly::one())
    }

    pub fn from_fn(order: usize, mut f: impl FnMut(usize) -> YPoly) -> Self {
        BivariateSeries {
            order,
            coeffs: (0..=order).map(&mut f).collect(),
        }
    }

    /// Series with exponential coefficients `a_n`, i.e. `Σ a_n x^n / n!`.
    pub fn from_egf(order: usize, mut a: impl FnMut(usize) -> YPoly) -> Self {
        Self::from_fn(order, |n| {
            a(n).scale(&Rational::new(BigInt::one(), factorial(n)))
        })
    }

    /// `e^{c x}`.
    pub fn exp_linear(order: usize, c: &Rational) -> Self {
        let mut term = rat(1);
        Self::from_fn(order, |n| {
            if n > 0 {
                term = &term * c / rat(n as i64);
            }
            YPoly::constant(term.clone())
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[YPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &YPoly {
        &self.coeffs[n]
    }

    fn same_order(&self, other: &Self) -> Result<(), SeriesError> {
        if self.order != other.order {
            return Err(SeriesError::OrderMismatch(self.order, other.order));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.same_order(other)?;
        Ok(Self::from_fn(self.order, |n| {
            self.coeffs[n].add(&other.coeffs[n])
        }))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.same_order(other)?;
        Ok(Self::from_fn(self.order, |n| {
            self.coeffs[n].sub(&other.coeffs[n])
        }))
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.same_order(other)?;
        Ok(Self::from_fn(self.order, |n| {
            (0..=n).fold(YPoly::zero(), |acc, i| {
                if self.coeffs[i].is_zero() || other.coeffs[n - i].is_zero() {
                    acc
                } else {
                    acc.add(&self.coeffs[i].mul(&other.coeffs[n - i]))
                }
            })
        }))
    }

    /// Multiplication by a polynomial in `y` alone.
    pub fn scale(&self, p: &YPoly) -> Self {
        Self::from_fn(self.order, |n| self.coeffs[n].mul(p))
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        Self::from_fn(self.order, |n| self.coeffs[n].scale(c))
    }

    /// `∫_0^x f(t) dt`; the coefficient pushed beyond the order is dropped.
    pub fn integrate(&self) -> Self {
        Self::from_fn(self.order, |n| {
            if n == 0 {
                YPoly::zero()
            } else {
                self.coeffs[n - 1].scale(&Rational::new(BigInt::one(), BigInt::from(n)))
            }
        })
    }

    /// `d/dx f`, known only to order `N − 1`.
    pub fn differentiate(&self) -> Self {
        let order = self.order.saturating_sub(1);
        Self::from_fn(order, |n| {
            if n + 1 > self.order {
                YPoly::zero()
            } else {
                self.coeffs[n + 1].scale(&rat(n as i64 + 1))
            }
        })
    }

    /// Drops (or zero-extends) coefficients to the given order.
    pub fn truncate(&self, order: usize) -> Self {
        Self::from_fn(order, |n| {
            self.coeffs.get(n).cloned().unwrap_or_else(YPoly::zero)
        })
    }

    /// `exp(f)` for `f` with zero constant term, via `g' = f'·g`, `g(0) = 1`.
    pub fn exp_series(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstant);
        }
        let mut g = vec![YPoly::one()];
        for n in 0..self.order {
            // (n+1) g[n+1] = Σ_{i=0}^{n} (i+1) f[i+1] g[n-i]
            let mut acc = YPoly::zero();
            for i in 0..=n {
                let fi = &self.coeffs[i + 1];
                if fi.is_zero() {
                    continue;
                }
                acc = acc.add(&fi.mul(&g[n - i]).scale(&rat(i as i64 + 1)));
            }
            g.push(acc.scale(&Rational::new(BigInt::one(), BigInt::from(n + 1))));
        }
        Ok(BivariateSeries {
            order: self.order,
            coeffs: g,
        })
    }

    /// Substitutes `y = 1`; the result has constant coefficients.
    pub fn eval_y_one(&self) -> Self {
        Self::from_fn(self.order, |n| {
            YPoly::constant(self.coeffs[n].eval(&rat(1)))
        })
    }

    /// `∂_y f |_{y=1}`.
    pub fn partial_y_at_one(&self) -> Self {
        Self::from_fn(self.order, |n| {
            YPoly::constant(self.coeffs[n].derivative_at_one())
        })
    }

    pub fn divide_by_y(&self) -> Result<Self, SeriesError> {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c.divide_by_y().ok_or(SeriesError::NotDivisibleByY(n)))
            .collect::<Result<_, _>>()?;
        Ok(BivariateSeries {
            order: self.order,
            coeffs,
        })
    }

    /// EGF coefficient `a_n(y) = c[n](y)·n!`.
    pub fn egf_coeff(&self, n: usize) -> YPoly {
        self.coeffs[n].scale(&Rational::from_integer(factorial(n)))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(YPoly::is_zero)
    }

    /// Smallest `n` with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Largest `y`-degree over all coefficients.
    pub fn y_degree(&self) -> Option<usize> {
        self.coeffs.iter().filter_map(YPoly::degree).max()
    }
}

/// Solves `f' = A·f + B`, `f(0) = init` through
/// `(n+1)·c[n+1] = [A·f + B]_n`. The result has the order of `a` and `b`,
/// whose top coefficients are not needed.
pub fn solve_linear_ode(
    a: &BivariateSeries,
    b: &BivariateSeries,
    init: YPoly,
) -> Result<BivariateSeries, SeriesError> {
    a.same_order(b)?;
    let order = a.order;
    let mut c = Vec::with_capacity(order + 1);
    c.push(init);
    for n in 0..order {
        let mut rhs = b.coeffs[n].clone();
        for i in 0..=n {
            if !a.coeffs[i].is_zero() {
                rhs = rhs.add(&a.coeffs[i].mul(&c[n - i]));
            }
        }
        c.push(rhs.scale(&Rational::new(BigInt::one(), BigInt::from(n + 1))));
    }
    Ok(BivariateSeries { order, coeffs: c })
}

/// `f' − A·f − B`, which vanishes to order `N − 1` for the ODE solution.
pub fn ode_residual(
    f: &BivariateSeries,
    a: &BivariateSeries,
    b: &BivariateSeries,
) -> Result<BivariateSeries, SeriesError> {
    let order = f.order.saturating_sub(1);
    let rhs = a.mul(f)?.add(b)?.truncate(order);
    f.differentiate().sub(&rhs)
}

/// Iterates `phi` from `start` `order + 1` times, then confirms one more step
/// changes nothing. `phi` must gain at least one order of x-adic agreement per
/// application, which holds whenever every occurrence of the unknown sits
/// under an integral.
pub fn solve_fixed_point<S, F>(start: S, order: usize, phi: F) -> Result<S, SeriesError>
where
    S: Clone + PartialEq,
    F: Fn(&S) -> Result<S, SeriesError>,
{
    let mut current = start;
    for _ in 0..=order {
        current = phi(&current)?;
    }
    let next = phi(&current)?;
    if next != current {
        return Err(SeriesError::ContractionViolation(order + 2));
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;

    const N: usize = 10;

    fn ex() -> BivariateSeries {
        BivariateSeries::exp_linear(N, &rat(1))
    }

    fn egf_ints(f: &BivariateSeries) -> Vec<Vec<BigInt>> {
        (0..=f.order())
            .map(|n| f.egf_coeff(n).to_integers().unwrap())
            .collect()
    }

    #[test]
    fn products() {
        let x = BivariateSeries::x(N);
        assert_eq!(
            x.mul(&x).unwrap(),
            BivariateSeries::monomial(N, 2, YPoly::one())
        );
        assert_eq!(
            ex().mul(&ex()).unwrap(),
            BivariateSeries::exp_linear(N, &rat(2))
        );
        // e^x sinh x = (e^{2x} - 1)/2 has egf coefficients 2^{n-1}.
        let sinh = ex()
            .sub(&BivariateSeries::exp_linear(N, &rat(-1)))
            .unwrap()
            .scale_rational(&Rational::new(1.into(), 2.into()));
        let v = ex().mul(&sinh).unwrap();
        for n in 1..=N {
            assert_eq!(v.egf_coeff(n), YPoly::constant(rat(1 << (n - 1))));
        }
        assert_eq!(
            x.add(&BivariateSeries::x(N + 1)),
            Err(SeriesError::OrderMismatch(N, N + 1))
        );
    }

    #[test]
    fn integrate_and_differentiate() {
        assert_eq!(BivariateSeries::one(N).integrate(), BivariateSeries::x(N));
        assert_eq!(
            ex().integrate(),
            ex().sub(&BivariateSeries::one(N)).unwrap()
        );
        let sinh = ex()
            .sub(&BivariateSeries::exp_linear(N, &rat(-1)))
            .unwrap()
            .scale_rational(&Rational::new(1.into(), 2.into()));
        let f = ex().mul(&sinh).unwrap().scale(&YPoly::y()).integrate();
        assert_eq!(
            f.coeff(3),
            &YPoly::new(vec![rat(0), Rational::new(1.into(), 3.into())])
        );

        let x2 = BivariateSeries::monomial(N, 2, YPoly::one());
        assert_eq!(
            x2.differentiate(),
            BivariateSeries::monomial(N - 1, 1, YPoly::from_ints(&[2]))
        );
        assert!(BivariateSeries::constant(N, YPoly::y())
            .differentiate()
            .is_zero());
        assert_eq!(ex().scale(&YPoly::y()).coeff(1), &YPoly::y());
    }

    #[test]
    fn exponentials() {
        assert_eq!(BivariateSeries::x(N).exp_series().unwrap(), ex());
        assert_eq!(
            BivariateSeries::zero(N).exp_series().unwrap(),
            BivariateSeries::one(N)
        );
        let f = ex()
            .sub(&BivariateSeries::one(N))
            .unwrap()
            .scale(&YPoly::y());
        let g = f.exp_series().unwrap();
        assert_eq!(g.egf_coeff(4), YPoly::from_ints(&[0, 1, 7, 6, 1]));
        assert_eq!(ex().exp_series(), Err(SeriesError::NonzeroConstant));
    }

    #[test]
    fn linear_odes() {
        let one = BivariateSeries::one(N);
        let zero = BivariateSeries::zero(N);
        assert_eq!(solve_linear_ode(&one, &zero, YPoly::one()).unwrap(), ex());
        // f' = 1 + x f gives 1, 2, 8, 48 at odd positions.
        let f = solve_linear_ode(&BivariateSeries::x(N), &one, YPoly::zero()).unwrap();
        let a = egf_ints(&f);
        assert_eq!(a[1], vec![1.into()]);
        assert_eq!(a[3], vec![2.into()]);
        assert_eq!(a[5], vec![8.into()]);
        assert!(a[2].is_empty() && a[4].is_empty());
        let p = YPoly::from_ints(&[3, 0, 5]);
        assert_eq!(
            solve_linear_ode(&zero, &zero, p.clone()).unwrap(),
            BivariateSeries::constant(N, p)
        );
        assert!(ode_residual(&f, &BivariateSeries::x(N), &one)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn fixed_points() {
        let one = BivariateSeries::one(N);
        let f =
            solve_fixed_point(BivariateSeries::zero(N), N, |f| one.add(&f.integrate())).unwrap();
        assert_eq!(f, ex());
        let x = BivariateSeries::x(N);
        assert_eq!(
            solve_fixed_point(BivariateSeries::zero(N), N, |_| Ok(x.clone())).unwrap(),
            x
        );
        // f ↦ 1 + f has no x-adic fixed point.
        assert_eq!(
            solve_fixed_point(BivariateSeries::zero(N), N, |f| one.add(f)),
            Err(SeriesError::ContractionViolation(N + 2))
        );
    }

    #[test]
    fn y_operations() {
        let f = ex().scale(&YPoly::from_ints(&[1, 2, 3]));
        assert_eq!(f.eval_y_one(), ex().scale_rational(&rat(6)));
        assert_eq!(f.partial_y_at_one(), ex().scale_rational(&rat(8)));
        assert_eq!(ex().scale(&YPoly::y()).divide_by_y().unwrap(), ex());
        assert_eq!(ex().divide_by_y(), Err(SeriesError::NotDivisibleByY(0)));
        assert_eq!(YPoly::from_ints(&[0, -1, 2]).to_string(), "-y + 2·y^2");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        const M: usize = 6;

        fn ypoly() -> impl Strategy<Value = YPoly> {
            proptest::collection::vec((-4i64..=4, 1i64..=3), 0..3).prop_map(|cs| {
                YPoly::new(
                    cs.into_iter()
                        .map(|(a, b)| Rational::new(a.into(), b.into()))
                        .collect(),
                )
            })
        }

        fn series() -> impl Strategy<Value = BivariateSeries> {
            proptest::collection::vec(ypoly(), M + 1).prop_map(|cs| {
                let mut it = cs.into_iter();
                BivariateSeries::from_fn(M, |_| it.next().unwrap())
            })
        }

        fn no_constant() -> impl Strategy<Value = BivariateSeries> {
            series().prop_map(|s| {
                let mut it = s.coeffs().to_vec().into_iter();
                BivariateSeries::from_fn(M, |n| {
                    let c = it.next().unwrap();
                    if n == 0 {
                        YPoly::zero()
                    } else {
                        c
                    }
                })
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn ring_axioms(f in series(), g in series(), h in series()) {
                prop_assert_eq!(f.mul(&g).unwrap().mul(&h).unwrap(), f.mul(&g.mul(&h).unwrap()).unwrap());
                prop_assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap());
                prop_assert_eq!(
                    f.mul(&g.add(&h).unwrap()).unwrap(),
                    f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap()
                );
                prop_assert_eq!(f.add(&g).unwrap().add(&h).unwrap(), f.add(&g.add(&h).unwrap()).unwrap());
            }

            #[test]
            fn differentiate_inverts_integrate(f in series()) {
                prop_assert_eq!(f.integrate().differentiate(), f.truncate(M - 1));
            }

            #[test]
            fn exp_turns_sums_into_products(f in no_constant(), g in no_constant()) {
                let lhs = f.add(&g).unwrap().exp_series().unwrap();
                let rhs = f.exp_series().unwrap().mul(&g.exp_series().unwrap()).unwrap();
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn ode_solution_has_zero_residual(a in series(), b in series(), init in ypoly()) {
                let f = solve_linear_ode(&a, &b, init).unwrap();
                prop_assert!(ode_residual(&f, &a, &b).unwrap().is_zero());
            }

            #[test]
            fn fixed_point_has_zero_residual(a in series(), b in series()) {
                let phi = |f: &BivariateSeries| b.add(&a.mul(f)?.integrate());
                let f = solve_fixed_point(BivariateSeries::zero(M), M, phi).unwrap();
                prop_assert_eq!(phi(&f).unwrap(), f);
            }
        }
    }
}
