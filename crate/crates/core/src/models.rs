//! Generating-function models: each counting series is obtained by solving
//! its defining differential or integral equation with the series engine,
//! never from a closed form.
//!
//! Every solve also records the residual of the equation it solved, so callers
//! can confirm the returned series satisfies it exactly to truncation order.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigUint, Sign};
use thiserror::Error;

use crate::perm::{Class, ClassName, Stat};
use crate::series::{
    ode_residual, rat, solve_fixed_point, solve_linear_ode, BivariateSeries, Rational, SeriesError,
    YPoly,
};
use crate::table::{DistributionTable, PopularityRow};

pub const DEFAULT_ORDER: usize = 12;
pub const MAX_ORDER: usize = 30;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("order {0} exceeds the maximum {MAX_ORDER}")]
    OrderTooLarge(usize),
    #[error("{model}: coefficient of x^{n} y^{k} / {n}! is not an integer")]
    NonInteger { model: ModelId, n: usize, k: usize },
    #[error("{model}: coefficient of x^{n} y^{k} / {n}! is negative")]
    Negative { model: ModelId, n: usize, k: usize },
    #[error("unknown model {0:?}")]
    Unknown(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelId {
    /// Valleyless permutations by runs.
    VXy,
    IVal,
    IRun,
    IRlm,
    IPeak,
    /// Alternating increasing permutations (univariate).
    AAlt,
    FVal,
    FRun,
    FRlm,
}

impl ModelId {
    pub const ALL: [ModelId; 9] = [
        ModelId::VXy,
        ModelId::IVal,
        ModelId::IRun,
        ModelId::IRlm,
        ModelId::IPeak,
        ModelId::AAlt,
        ModelId::FVal,
        ModelId::FRun,
        ModelId::FRlm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelId::VXy => "V_xy",
            ModelId::IVal => "I_val",
            ModelId::IRun => "I_run",
            ModelId::IRlm => "I_rlm",
            ModelId::IPeak => "I_peak",
            ModelId::AAlt => "A_alt",
            ModelId::FVal => "F_val",
            ModelId::FRun => "F_run",
            ModelId::FRlm => "F_rlm",
        }
    }

    /// The permutation class the model counts.
    pub fn class(self) -> Class {
        match self {
            ModelId::VXy => Class::of(ClassName::Valleyless),
            ModelId::IVal | ModelId::IRun | ModelId::IRlm | ModelId::IPeak => {
                Class::of(ClassName::Increasing)
            }
            ModelId::AAlt => Class::of(ClassName::Increasing).and(ClassName::Alternating),
            ModelId::FVal | ModelId::FRun | ModelId::FRlm => Class::of(ClassName::Flattened),
        }
    }

    /// The statistic marked by `y`, if any.
    pub fn stat(self) -> Option<Stat> {
        match self {
            ModelId::VXy | ModelId::IRun | ModelId::FRun => Some(Stat::Run),
            ModelId::IVal | ModelId::FVal => Some(Stat::Val),
            ModelId::IRlm | ModelId::FRlm => Some(Stat::Rlm),
            ModelId::IPeak => Some(Stat::Peak),
            ModelId::AAlt => None,
        }
    }

    pub fn for_pair(class: &Class, stat: Stat) -> Option<ModelId> {
        ModelId::ALL
            .into_iter()
            .find(|m| m.stat() == Some(stat) && &m.class() == class)
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelId {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = |t: &str| t.replace(['_', '-'], "").to_ascii_lowercase();
        let want = norm(s.trim());
        ModelId::ALL
            .into_iter()
            .find(|m| norm(m.name()) == want)
            .ok_or_else(|| ModelError::Unknown(s.to_string()))
    }
}

/// One defining equation and what is left when the solution is substituted.
#[derive(Clone, Debug)]
pub struct ResidualCheck {
    pub equation: &'static str,
    pub residual: BivariateSeries,
}

impl ResidualCheck {
    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }
}

#[derive(Clone, Debug)]
pub struct ModelRun {
    pub id: ModelId,
    pub series: BivariateSeries,
    pub checks: Vec<ResidualCheck>,
}

/// The four boundary-class components of the peak model, each tracking valleys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeakSystem {
    pub i00: BivariateSeries,
    pub i01: BivariateSeries,
    pub i10: BivariateSeries,
    pub i11: BivariateSeries,
}

impl PeakSystem {
    fn zero(order: usize) -> Self {
        let z = BivariateSeries::zero(order);
        PeakSystem {
            i00: z.clone(),
            i01: z.clone(),
            i10: z.clone(),
            i11: z,
        }
    }

    pub fn component(&self, starts_desc: bool, ends_asc: bool) -> &BivariateSeries {
        match (starts_desc, ends_asc) {
            (false, false) => &self.i00,
            (false, true) => &self.i01,
            (true, false) => &self.i10,
            (true, true) => &self.i11,
        }
    }

    /// `1 + x + y(I00 − 1 − x) + I01 + I11/y + I10`.
    pub fn assemble(&self) -> Result<BivariateSeries, SeriesError> {
        let order = self.i00.order();
        let one_x = BivariateSeries::one(order).add(&BivariateSeries::x(order))?;
        one_x
            .add(&self.i00.sub(&one_x)?.scale(&YPoly::y()))?
            .add(&self.i01)?
            .add(&self.i11.divide_by_y()?)?
            .add(&self.i10)
    }
}

fn check_order(order: usize) -> Result<(), ModelError> {
    if order > MAX_ORDER {
        return Err(ModelError::OrderTooLarge(order));
    }
    Ok(())
}

fn half() -> Rational {
    Rational::new(1.into(), 2.into())
}

struct Basis {
    order: usize,
    one: BivariateSeries,
    x: BivariateSeries,
    y: YPoly,
    /// `e^x − 1`
    exm1: BivariateSeries,
    /// `e^x sinh x`
    esinh: BivariateSeries,
}

impl Basis {
    fn new(order: usize) -> Result<Self, SeriesError> {
        let one = BivariateSeries::one(order);
        let ex = BivariateSeries::exp_linear(order, &rat(1));
        let e2x = BivariateSeries::exp_linear(order, &rat(2));
        Ok(Basis {
            order,
            x: BivariateSeries::x(order),
            y: YPoly::y(),
            exm1: ex.sub(&one)?,
            esinh: e2x.sub(&one)?.scale_rational(&half()),
            one,
        })
    }

    fn constant(&self, p: YPoly) -> BivariateSeries {
        BivariateSeries::constant(self.order, p)
    }
}

/// Decreasing permutations of length ≥ 1: the valleyless ones that start with
/// a descent, together with the one-element permutation. EGF `e^x − 1`.
pub fn valleyless_descent_start(order: usize) -> Result<BivariateSeries, SeriesError> {
    Ok(Basis::new(order)?.exm1)
}

/// Valleyless permutations of length ≥ 2 starting with an ascent.
/// EGF `(e^x − 1)² / 2`.
pub fn valleyless_ascent_start(order: usize) -> Result<BivariateSeries, SeriesError> {
    let u = Basis::new(order)?.exm1;
    Ok(u.mul(&u)?.scale_rational(&half()))
}

struct Recorder {
    checks: Vec<ResidualCheck>,
}

impl Recorder {
    fn ode(
        &mut self,
        equation: &'static str,
        a: &BivariateSeries,
        b: &BivariateSeries,
        init: YPoly,
    ) -> Result<BivariateSeries, SeriesError> {
        let f = solve_linear_ode(a, b, init)?;
        self.checks.push(ResidualCheck {
            equation,
            residual: ode_residual(&f, a, b)?,
        });
        Ok(f)
    }

    fn identity(
        &mut self,
        equation: &'static str,
        lhs: &BivariateSeries,
        rhs: &BivariateSeries,
    ) -> Result<(), SeriesError> {
        let order = lhs.order().min(rhs.order());
        self.checks.push(ResidualCheck {
            equation,
            residual: lhs.truncate(order).sub(&rhs.truncate(order))?,
        });
        Ok(())
    }
}

fn valleyless_runs(b: &Basis, rec: &mut Recorder) -> Result<BivariateSeries, SeriesError> {
    // V' = y + (1+y)(V − 1)
    let one_y = b.constant(YPoly::one().add(&b.y));
    let rhs_const = b.constant(b.y.clone()).sub(&one_y)?;
    rec.ode("V' = y + (1+y)(V-1)", &one_y, &rhs_const, YPoly::one())
}

fn increasing_valleys(b: &Basis, rec: &mut Recorder) -> Result<BivariateSeries, SeriesError> {
    // I' = 2I − 1 + y e^x sinh x (I − 1)
    let y_es = b.esinh.scale(&b.y);
    let a = b.constant(YPoly::from_ints(&[2])).add(&y_es)?;
    let rhs = b.one.add(&y_es)?.scale_rational(&rat(-1));
    rec.ode("I' = 2I - 1 + y e^x sinh x (I-1)", &a, &rhs, YPoly::one())
}

fn increasing_runs(b: &Basis, rec: &mut Recorder) -> Result<BivariateSeries, SeriesError> {
    let v = valleyless_runs(b, rec)?;
    // I' = y + (1+y)(I − 1) + (V − 1)(I − 1)
    let a = b.constant(YPoly::one().add(&b.y)).add(&v.sub(&b.one)?)?;
    let rhs = b.constant(b.y.clone()).sub(&a)?;
    rec.ode("I' = y + (1+y)(I-1) + (V-1)(I-1)", &a, &rhs, YPoly::one())
}

fn increasing_rlm(b: &Basis, rec: &mut Recorder) -> Result<BivariateSeries, SeriesError> {
    // I(x) = I^val(x, 1) must be solved first.
    let total = increasing_valleys(b, rec)?.eval_y_one();
    // I' = y I(x) + y I − y + y e^x sinh x (I − 1)
    let y_es = b.esinh.scale(&b.y);
    let a = b.constant(b.y.clone()).add(&y_es)?;
    let rhs = total
        .scale(&b.y)
        .sub(&b.constant(b.y.clone()))?
        .sub(&y_es)?;
    rec.ode(
        "I' = y I(x,1) + y I - y + y e^x sinh x (I-1)",
        &a,
        &rhs,
        YPoly::one(),
    )
}

fn peak_step(
    b: &Basis,
    u: &BivariateSeries,
    w: &BivariateSeries,
    s: &PeakSystem,
) -> Result<PeakSystem, SeriesError> {
    let one_x = b.one.add(&b.x)?;
    let g01 = s.i01.add(&s.i11)?.add(&b.x)?;
    let h0 = s.i00.add(&s.i10)?.sub(&one_x)?;
    let h1 = s.i00.add(&s.i01)?.sub(&one_x)?;
    let i11 = u.mul(&g01)?.integrate().scale(&b.y);
    let i01 = w.mul(&g01)?.integrate().scale(&b.y).add(&g01.integrate())?;
    let i10 = u
        .mul(&h0)?
        .integrate()
        .scale(&b.y)
        .add(&s.i10.add(&s.i11)?.add(&b.x)?.integrate())?;
    let i00 = one_x
        .add(&w.mul(&h0)?.integrate().scale(&b.y))?
        .add(&h0.integrate())?
        .add(&h1.integrate())?;
    Ok(PeakSystem { i00, i01, i10, i11 })
}

fn peak_components(b: &Basis, rec: &mut Recorder) -> Result<PeakSystem, SeriesError> {
    let u = valleyless_descent_start(b.order)?;
    let w = valleyless_ascent_start(b.order)?;
    let sys = solve_fixed_point(PeakSystem::zero(b.order), b.order, |s| {
        peak_step(b, &u, &w, s)
    })?;
    let next = peak_step(b, &u, &w, &sys)?;
    rec.identity("I00 = Φ00(I)", &next.i00, &sys.i00)?;
    rec.identity("I01 = Φ01(I)", &next.i01, &sys.i01)?;
    rec.identity("I10 = Φ10(I)", &next.i10, &sys.i10)?;
    rec.identity("I11 = Φ11(I)", &next.i11, &sys.i11)?;
    Ok(sys)
}

/// Solves the four-class valley system behind the peak model.
pub fn peak_system(order: usize) -> Result<PeakSystem, ModelError> {
    check_order(order)?;
    let b = Basis::new(order)?;
    Ok(peak_components(&b, &mut Recorder { checks: Vec::new() })?)
}

fn increasing_peaks(b: &Basis, rec: &mut Recorder) -> Result<BivariateSeries, SeriesError> {
    let sys = peak_components(b, rec)?;
    let i11_over_y = sys.i11.divide_by_y()?;
    rec.identity("I11 = y (I11 / y)", &i11_over_y.scale(&b.y), &sys.i11)?;
    let peak = sys.assemble()?;
    // Coefficientwise assembly: [x^n] of each part summed directly.
    let direct = BivariateSeries::from_fn(b.order, |n| {
        let mut c = sys.i00.coeff(n).mul(&b.y);
        if n <= 1 {
            c = c.sub(&b.y).add(&YPoly::one());
        }
        c.add(sys.i01.coeff(n))
            .add(i11_over_y.coeff(n))
            .add(sys.i10.coeff(n))
    });
    rec.identity(
        "I^peak = 1 + x + y(I00-1-x) + I01 + I11/y + I10",
        &peak,
        &direct,
    )?;
    Ok(peak)
}

fn alternating(b: &Basis, rec: &mut Recorder) -> Result<BivariateSeries, SeriesError> {
    // A_O' = 1 + x A_O, A_O(0) = 0;  A_E' = A_O + x(A_E − 1), A_E(0) = 1
    let odd = rec.ode("A_O' = 1 + x A_O", &b.x, &b.one, YPoly::zero())?;
    let even = rec.ode(
        "A_E' = A_O + x(A_E - 1)",
        &b.x,
        &odd.sub(&b.x)?,
        YPoly::one(),
    )?;
    odd.add(&even)
}

fn flattened_valleys(b: &Basis, rec: &mut Recorder) -> Result<BivariateSeries, SeriesError> {
    // B' = B + e^x − 1 + y(e^x − 1)(B − 1), F = 1 + ∫B
    let y_u = b.exm1.scale(&b.y);
    let a = b.one.add(&y_u)?;
    let rhs = b.exm1.sub(&y_u)?;
    let inner = rec.ode("B' = B + e^x - 1 + y(e^x-1)(B-1)", &a, &rhs, YPoly::one())?;
    let f = b.one.add(&inner.integrate())?;
    rec.identity("F' = B", &f.differentiate(), &inner)?;
    Ok(f)
}

fn flattened_runs(b: &Basis, rec: &mut Recorder) -> Result<BivariateSeries, SeriesError> {
    // B' = y + B − 1 + y²(e^x − 1) + y(e^x − 1)(B − 1), F = 1 + xy + ∫(B − 1)
    let y_u = b.exm1.scale(&b.y);
    let a = b.one.add(&y_u)?;
    let rhs = b
        .constant(b.y.sub(&YPoly::one()))
        .add(&b.exm1.scale(&b.y.mul(&b.y)))?
        .sub(&y_u)?;
    let inner = rec.ode(
        "B' = y + B - 1 + y^2(e^x-1) + y(e^x-1)(B-1)",
        &a,
        &rhs,
        YPoly::one(),
    )?;
    let inner_m1 = inner.sub(&b.one)?;
    let f = b.one.add(&b.x.scale(&b.y))?.add(&inner_m1.integrate())?;
    let expected = b.constant(b.y.clone()).add(&inner_m1)?;
    rec.identity("F' = y + B - 1", &f.differentiate(), &expected)?;
    Ok(f)
}

fn flattened_rlm(b: &Basis, rec: &mut Recorder) -> Result<BivariateSeries, SeriesError> {
    // B = exp(y(e^x − 1)), F = 1 + y ∫B
    let exponent = b.exm1.scale(&b.y);
    let inner = exponent.exp_series()?;
    rec.identity(
        "B' = y e^x B",
        &inner.differentiate(),
        &b.exm1.add(&b.one)?.scale(&b.y).mul(&inner)?,
    )?;
    let f = b.one.add(&inner.integrate().scale(&b.y))?;
    rec.identity("F' = y B", &f.differentiate(), &inner.scale(&b.y))?;
    Ok(f)
}

/// Solves model `id` to `order`, keeping the residual of every equation used.
pub fn model_run(id: ModelId, order: usize) -> Result<ModelRun, ModelError> {
    check_order(order)?;
    let b = Basis::new(order)?;
    let mut rec = Recorder { checks: Vec::new() };
    let series = match id {
        ModelId::VXy => valleyless_runs(&b, &mut rec),
        ModelId::IVal => increasing_valleys(&b, &mut rec),
        ModelId::IRun => increasing_runs(&b, &mut rec),
        ModelId::IRlm => increasing_rlm(&b, &mut rec),
        ModelId::IPeak => increasing_peaks(&b, &mut rec),
        ModelId::AAlt => alternating(&b, &mut rec),
        ModelId::FVal => flattened_valleys(&b, &mut rec),
        ModelId::FRun => flattened_runs(&b, &mut rec),
        ModelId::FRlm => flattened_rlm(&b, &mut rec),
    }?;
    Ok(ModelRun {
        id,
        series,
        checks: rec.checks,
    })
}

pub fn model(id: ModelId, order: usize) -> Result<BivariateSeries, ModelError> {
    Ok(model_run(id, order)?.series)
}

/// Reads `counts[n][k]` off the EGF coefficients, insisting on nonnegative integers.
pub fn table_from_series(
    id: ModelId,
    series: &BivariateSeries,
    class: Class,
    stat: Option<Stat>,
    n_max: usize,
) -> Result<DistributionTable, ModelError> {
    let rows = (0..=n_max.min(series.order()))
        .map(|n| {
            let a = series.egf_coeff(n);
            a.coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    if !c.is_integer() {
                        return Err(ModelError::NonInteger { model: id, n, k });
                    }
                    let (sign, mag) = c.to_integer().into_parts();
                    if sign == Sign::Minus {
                        return Err(ModelError::Negative { model: id, n, k });
                    }
                    Ok(mag)
                })
                .collect::<Result<Vec<BigUint>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DistributionTable::new(class, stat, rows))
}

pub fn table_from_model(id: ModelId, n_max: usize) -> Result<DistributionTable, ModelError> {
    let series = model(id, n_max)?;
    table_from_series(id, &series, id.class(), id.stat(), n_max)
}

/// `totals[n]` = `∂_y a_n(y)` at `y = 1`.
pub fn popularity_from_model(id: ModelId, n_max: usize) -> Result<PopularityRow, ModelError> {
    let series = model(id, n_max)?.partial_y_at_one();
    let totals = table_from_series(id, &series, id.class(), id.stat(), n_max)?
        .rows()
        .iter()
        .map(|r| r[0].clone())
        .collect();
    Ok(PopularityRow {
        class: id.class(),
        stat: id.stat(),
        totals,
    })
}

/// Descent and ascent tables from a run table: `des = run − 1` and
/// `asc = n − 1 − des` on nonempty permutations.
pub fn transforms_des_asc(run_table: &DistributionTable) -> (DistributionTable, DistributionTable) {
    let mut des_rows = Vec::new();
    let mut asc_rows = Vec::new();
    for n in 0..=run_table.n_max() {
        if n == 0 {
            des_rows.push(vec![run_table.get(0, 0)]);
            asc_rows.push(vec![run_table.get(0, 0)]);
            continue;
        }
        let des: Vec<BigUint> = (0..n).map(|k| run_table.get(n, k + 1)).collect();
        let asc: Vec<BigUint> = (0..n).map(|k| des[n - 1 - k].clone()).collect();
        des_rows.push(des);
        asc_rows.push(asc);
    }
    let class = run_table.class.clone();
    (
        DistributionTable::new(class.clone(), Some(Stat::Des), des_rows),
        DistributionTable::new(class, Some(Stat::Asc), asc_rows),
    )
}

/// Valley tables of the four boundary classes `I^{a,b}`.
pub fn boundary_tables(n_max: usize) -> Result<Vec<DistributionTable>, ModelError> {
    let sys = peak_system(n_max)?;
    let mut out = Vec::new();
    for (a, bb) in [(false, false), (false, true), (true, false), (true, true)] {
        let class = Class::of(ClassName::Increasing).and(ClassName::Boundary {
            starts_desc: a,
            ends_asc: bb,
        });
        out.push(table_from_series(
            ModelId::IPeak,
            sys.component(a, bb),
            class,
            Some(Stat::Val),
            n_max,
        )?);
    }
    Ok(out)
}

/// Constant terms of the EGF coefficients of a univariate series.
pub fn egf_counts(series: &BivariateSeries) -> Vec<Rational> {
    (0..=series.order())
        .map(|n| series.egf_coeff(n).coeff(0))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(id: ModelId, n: usize) -> YPoly {
        model(id, n.max(1)).unwrap().egf_coeff(n)
    }

    #[test]
    fn model_rows() {
        assert_eq!(row(ModelId::IVal, 5), YPoly::from_ints(&[16, 88, 8]));
        assert_eq!(
            row(ModelId::IRun, 5),
            YPoly::from_ints(&[0, 1, 26, 58, 26, 1])
        );
        assert_eq!(
            row(ModelId::IRlm, 6),
            YPoly::from_ints(&[0, 112, 174, 197, 85, 15, 1])
        );
        assert_eq!(
            row(ModelId::IPeak, 7),
            YPoly::from_ints(&[64, 1361, 1815, 136])
        );
        assert_eq!(row(ModelId::FVal, 8), YPoly::from_ints(&[7, 300, 522, 48]));
        assert_eq!(
            row(ModelId::FRun, 7),
            YPoly::from_ints(&[0, 1, 57, 130, 15])
        );
        assert_eq!(row(ModelId::FRlm, 5), YPoly::from_ints(&[0, 0, 1, 7, 6, 1]));
        let alt: Vec<i64> = egf_counts(&model(ModelId::AAlt, 8).unwrap())
            .iter()
            .map(|c| c.to_integer().try_into().unwrap())
            .collect();
        assert_eq!(alt, vec![1, 1, 1, 2, 5, 8, 33, 48, 279]);
        for id in ModelId::ALL {
            assert_eq!(model(id, 0).unwrap().egf_coeff(0), YPoly::one(), "{id}");
        }
    }

    #[test]
    fn residuals_vanish() {
        for id in ModelId::ALL {
            let run = model_run(id, 10).unwrap();
            assert!(!run.checks.is_empty());
            for c in &run.checks {
                assert!(c.holds(), "{id}: {}", c.equation);
            }
        }
    }

    #[test]
    fn tables_and_popularity() {
        let t = table_from_model(ModelId::IVal, 8).unwrap();
        assert!(t.row_starts_with(8, &[128, 7680, 12288, 1384]));
        let t = table_from_model(ModelId::FVal, 5).unwrap();
        assert_eq!(t.row(5).len(), 2);
        assert!(t.row_starts_with(5, &[4, 11]));
        let t = table_from_model(ModelId::IRun, 1).unwrap();
        assert!(t.row_starts_with(1, &[0, 1]));

        let p = popularity_from_model(ModelId::IRun, 7)
            .unwrap()
            .totals_u64();
        assert_eq!(&p[1..], &[1, 3, 12, 60, 336, 2044, 13504]);
        let p = popularity_from_model(ModelId::IRlm, 7)
            .unwrap()
            .totals_u64();
        assert_eq!(&p[1..], &[1, 3, 11, 50, 258, 1472, 9232]);
        let p = popularity_from_model(ModelId::FVal, 8)
            .unwrap()
            .totals_u64();
        assert_eq!(&p[4..], &[2, 11, 55, 280, 1488]);
        let p = popularity_from_model(ModelId::FRun, 8)
            .unwrap()
            .totals_u64();
        assert_eq!(&p[1..], &[1, 1, 3, 9, 32, 128, 565, 2719]);
    }

    #[test]
    fn des_asc_transforms() {
        let run = table_from_model(ModelId::IRun, 6).unwrap();
        let (des, asc) = transforms_des_asc(&run);
        assert!(des.row_starts_with(4, &[1, 11, 11, 1]));
        assert!(asc.row_starts_with(4, &[1, 11, 11, 1]));
        assert!(des.row_starts_with(1, &[1]));
        assert_eq!(des.row_sums(), run.row_sums());
        assert!(asc.row_starts_with(3, &[1, 4, 1]));
    }

    #[test]
    fn peak_system_structure() {
        let sys = peak_system(9).unwrap();
        assert!(sys.i11.divide_by_y().is_ok());
        assert_eq!(
            sys.assemble().unwrap().egf_coeff(6),
            YPoly::from_ints(&[32, 341, 211])
        );
    }

    #[test]
    fn special_values_of_flattened_valleys() {
        let f = model(ModelId::FVal, 10).unwrap();
        for n in 2..=10 {
            assert_eq!(f.egf_coeff(n).coeff(0), rat(n as i64 - 1));
        }
        let bell = [1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147];
        for n in 1..=10 {
            assert_eq!(f.eval_y_one().egf_coeff(n).coeff(0), rat(bell[n - 1]));
        }
    }

    #[test]
    fn every_increasing_model_counts_the_same_class() {
        let base = model(ModelId::IVal, 10).unwrap().eval_y_one();
        for id in [ModelId::IRun, ModelId::IRlm, ModelId::IPeak] {
            assert_eq!(model(id, 10).unwrap().eval_y_one(), base, "{id}");
        }
    }

    #[test]
    fn order_limit() {
        assert_eq!(
            model(ModelId::IVal, MAX_ORDER + 1),
            Err(ModelError::OrderTooLarge(MAX_ORDER + 1))
        );
        assert_eq!("i_val".parse::<ModelId>().unwrap(), ModelId::IVal);
        assert_eq!("F-RLM".parse::<ModelId>().unwrap(), ModelId::FRlm);
        assert!("G_val".parse::<ModelId>().is_err());
    }
}
