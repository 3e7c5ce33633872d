//! Exact bivariate Laurent numerators over binomial denominators, the
//! coefficient-sectioning operator `U_d`, and univariate canonical forms.
//!
//! A [`FactoredRational`] is `scalar · P(s,t) / ∏ (1 - s^p t^q)^m`. The
//! numerator `P` carries integer coefficients; all rational content lives in
//! the scalar. Every operation here maps integer numerators to integer
//! numerators, so the heavy expansions never touch fractions.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::univariate::{self, IntPoly};
use crate::weights::WeightMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("Φ_ij needs d_ij > 0 (columns {0}, {1})")]
    BadPair(usize, usize),
    #[error("denominator factor (1 - s^{p} t^{q}) has a negative exponent on the expansion axis")]
    NotNormalized { p: i64, q: i64 },
    #[error("factor (1 - s^{p} t^{q}) does not become a positive power of t on the diagonal")]
    NeedsReassembly { p: i64, q: i64 },
    #[error("exponent does not fit in a machine word")]
    ExponentOverflow,
    #[error("sectioning index must be at least 1")]
    BadIndex,
    #[error("rational function is not a power series with integer coefficients: {0}")]
    NotIntegral(String),
    #[error("malformed series document: {0}")]
    Format(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    S,
    T,
}

impl Axis {
    /// Exponent of this axis in the monomial `s^es t^et`.
    fn of(self, es: i64, et: i64) -> i64 {
        match self {
            Axis::S => es,
            Axis::T => et,
        }
    }

    fn other(self, es: i64, et: i64) -> i64 {
        match self {
            Axis::S => et,
            Axis::T => es,
        }
    }

    /// Inverse of `(of, other)`.
    fn join(self, main: i64, other: i64) -> (i64, i64) {
        match self {
            Axis::S => (main, other),
            Axis::T => (other, main),
        }
    }
}

/// Sparse Laurent polynomial in `s, t` with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BivariateLaurent {
    terms: BTreeMap<(i64, i64), BigInt>,
}

impl BivariateLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, BigInt::one())
    }

    pub fn monomial(es: i64, et: i64, c: BigInt) -> Self {
        let mut out = Self::zero();
        out.add_term(es, et, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, es: i64, et: i64) -> BigInt {
        self.terms.get(&(es, et)).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &BigInt)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, es: i64, et: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((es, et)) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(a, b), c) in &other.terms {
            out.add_term(a, b, c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(a, b), c) in &self.terms {
            for (&(x, y), d) in &other.terms {
                out.add_term(a + x, b + y, c * d);
            }
        }
        out
    }

    pub fn shift(&self, ds: i64, dt: i64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), c)| ((a + ds, b + dt), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&e, c)| (e, c * k)).collect(),
        }
    }

    /// `(min, max)` exponent along an axis.
    pub fn degree_range(&self, axis: Axis) -> Option<(i64, i64)> {
        let mut it = self.terms.keys().map(|&(a, b)| axis.of(a, b));
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), e| (lo.min(e), hi.max(e))))
    }

    pub fn eval(&self, s: f64, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(a, b), c)| c.to_f64().unwrap_or(f64::NAN) * s.powi(a as i32) * t.powi(b as i32))
            .sum()
    }
}

/// `scalar · numerator / ∏ (1 - s^p t^q)^mult`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredRational {
    pub scalar: BigRational,
    pub numerator: BivariateLaurent,
    /// `(p, q) → multiplicity`; `(0, 0)` never occurs.
    denominator: BTreeMap<(i64, i64), u32>,
}

impl FactoredRational {
    pub fn new(
        scalar: BigRational,
        numerator: BivariateLaurent,
        factors: impl IntoIterator<Item = ((i64, i64), u32)>,
    ) -> Self {
        let mut out = Self {
            scalar,
            numerator,
            denominator: BTreeMap::new(),
        };
        for ((p, q), m) in factors {
            out.push_factor(p, q, m);
        }
        out
    }

    pub fn one() -> Self {
        Self::new(BigRational::one(), BivariateLaurent::one(), [])
    }

    pub fn factors(&self) -> impl Iterator<Item = ((i64, i64), u32)> + '_ {
        self.denominator.iter().map(|(&k, &m)| (k, m))
    }

    pub fn factor_count(&self) -> u32 {
        self.denominator.values().sum()
    }

    fn push_factor(&mut self, p: i64, q: i64, m: u32) {
        assert!(p != 0 || q != 0, "factor (1 - 1) is identically zero");
        if m > 0 {
            *self.denominator.entry((p, q)).or_insert(0) += m;
        }
    }

    /// Product of two factored rationals (denominators concatenate).
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self {
            scalar: &self.scalar * &other.scalar,
            numerator: self.numerator.mul(&other.numerator),
            denominator: self.denominator.clone(),
        };
        for (&(p, q), &m) in &other.denominator {
            out.push_factor(p, q, m);
        }
        out
    }

    pub fn is_normalized(&self, axis: Axis) -> bool {
        self.denominator.keys().all(|&(p, q)| axis.of(p, q) >= 0)
    }

    /// Degree of the denominator along an axis.
    pub fn denominator_degree(&self, axis: Axis) -> i64 {
        self.denominator
            .iter()
            .map(|(&(p, q), &m)| axis.of(p, q) * m as i64)
            .sum()
    }

    /// Numerical value, for tests and sanity checks.
    pub fn eval(&self, s: f64, t: f64) -> f64 {
        let mut v = self.scalar.to_f64().unwrap_or(f64::NAN) * self.numerator.eval(s, t);
        for (&(p, q), &m) in &self.denominator {
            v /= (1.0 - s.powi(p as i32) * t.powi(q as i32)).powi(m as i32);
        }
        v
    }

    /// Exact value at a point, or `None` where a factor vanishes.
    pub fn eval_exact(&self, s: &BigRational, t: &BigRational) -> Option<BigRational> {
        let mono = |a: i64, b: i64| -> Option<BigRational> {
            if (a < 0 && s.is_zero()) || (b < 0 && t.is_zero()) {
                return None;
            }
            Some(num_traits::pow::Pow::pow(s, a) * num_traits::pow::Pow::pow(t, b))
        };
        let mut v = BigRational::zero();
        for (&(a, b), c) in self.numerator.terms() {
            v += mono(a, b)? * BigRational::from_integer(c.clone());
        }
        v *= &self.scalar;
        for (&(p, q), &m) in &self.denominator {
            let f = BigRational::one() - mono(p, q)?;
            if f.is_zero() {
                return None;
            }
            for _ in 0..m {
                v /= &f;
            }
        }
        Some(v)
    }

    /// Power-series coefficients of `numerator / denominator` (the scalar is
    /// not applied) along `axis`, for main-axis degrees `lo..=hi`; requires
    /// normalization and no axis-free factors.
    pub fn expand(&self, axis: Axis, lo: i64, hi: i64) -> Result<Vec<BivariateLaurent>, SeriesError> {
        for &(p, q) in self.denominator.keys() {
            if axis.of(p, q) <= 0 {
                return Err(SeriesError::NotNormalized { p, q });
            }
        }
        let start = self.numerator.degree_range(axis).map_or(lo, |(n_lo, _)| n_lo.min(lo));
        let mut grid = Grid::from_numerator(&self.numerator, axis, start, hi);
        for (&(p, q), &m) in &self.denominator {
            grid.divide_by(axis.of(p, q), axis.other(p, q), m);
        }
        Ok((lo..=hi)
            .map(|e| {
                let mut out = BivariateLaurent::zero();
                if let Some(row) = grid.row(e) {
                    for (k, c) in row.iter() {
                        let (a, b) = axis.join(e, k);
                        out.add_term(a, b, c.clone());
                    }
                }
                out
            })
            .collect())
    }
}

impl fmt::Display for FactoredRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) * [", self.scalar)?;
        let mut first = true;
        for (&(a, b), c) in self.numerator.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}*s^{a}*t^{b}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, "] /")?;
        for (&(p, q), &m) in &self.denominator {
            write!(f, " (1 - s^{p} t^{q})^{m}")?;
        }
        Ok(())
    }
}

/// Seed function of the pair `(i, j)`:
/// `1 / ∏_{k≠i,j} (1 - s^{d_ik} t^{d_ij + d_jk}) (1 - s^{-d_ik} t^{d_ij - d_jk})`.
///
/// The constant is 1: the two sectioning operators applied later already
/// average over the `d_ij²` pairs of roots of unity.
pub fn phi_term(a: &WeightMatrix, i: usize, j: usize) -> Result<FactoredRational, SeriesError> {
    let d = a.minor(i, j);
    if !d.is_positive() {
        return Err(SeriesError::BadPair(i, j));
    }
    let small = |x: BigInt| x.to_i64().ok_or(SeriesError::ExponentOverflow);
    let dij = small(d)?;
    let mut factors = Vec::new();
    for k in 0..a.ncols() {
        if k == i || k == j {
            continue;
        }
        let dik = small(a.minor(i, k))?;
        let djk = small(a.minor(j, k))?;
        factors.push(((dik, dij + djk), 1));
        factors.push(((-dik, dij - djk), 1));
    }
    Ok(FactoredRational::new(
        BigRational::one(),
        BivariateLaurent::one(),
        factors,
    ))
}

/// Makes every denominator exponent on `axis` nonnegative by rewriting
/// `1/(1 - x) = -x⁻¹/(1 - x⁻¹)`.
pub fn normalize(f: &FactoredRational, axis: Axis) -> FactoredRational {
    flip_factors(f, |p, q| axis.of(p, q) < 0)
}

/// Makes `p + q > 0` for every factor so that `s = t` gives `(1 - t^{p+q})`.
pub fn normalize_diagonal(f: &FactoredRational) -> Result<FactoredRational, SeriesError> {
    if let Some(&(p, q)) = f.denominator.keys().find(|&&(p, q)| p + q == 0) {
        return Err(SeriesError::NeedsReassembly { p, q });
    }
    Ok(flip_factors(f, |p, q| p + q < 0))
}

fn flip_factors(f: &FactoredRational, pred: impl Fn(i64, i64) -> bool) -> FactoredRational {
    let mut out = FactoredRational {
        scalar: f.scalar.clone(),
        numerator: f.numerator.clone(),
        denominator: BTreeMap::new(),
    };
    let (mut ds, mut dt, mut sign_flips) = (0i64, 0i64, 0u32);
    for (&(p, q), &m) in &f.denominator {
        if pred(p, q) {
            ds -= p * m as i64;
            dt -= q * m as i64;
            sign_flips += m;
            out.push_factor(-p, -q, m);
        } else {
            out.push_factor(p, q, m);
        }
    }
    out.numerator = out.numerator.shift(ds, dt);
    if sign_flips % 2 == 1 {
        out.scalar = -out.scalar;
    }
    out
}

/// Splits off the denominator factors that do not involve `axis`.
///
/// Returns `(axis_free, remainder)` with `axis_free` carrying only those
/// factors (numerator 1, scalar 1) and `axis_free · remainder = f`.
pub fn factor_out_axis_free(f: &FactoredRational, axis: Axis) -> (FactoredRational, FactoredRational) {
    let mut free = FactoredRational::one();
    let mut rest = FactoredRational {
        scalar: f.scalar.clone(),
        numerator: f.numerator.clone(),
        denominator: BTreeMap::new(),
    };
    for (&(p, q), &m) in &f.denominator {
        if axis.of(p, q) == 0 {
            free.push_factor(p, q, m);
        } else {
            rest.push_factor(p, q, m);
        }
    }
    (free, rest)
}

/// Denominator of `U_{d,axis}(1/(1 - s^p t^q))`: with `g = gcd(d, e)` for the
/// axis exponent `e`, the factor becomes `(1 - x^{d/g} axis^{e/g})^g` where `x`
/// is the other variable's monomial.
///
/// When `e = 0` this yields `(1 - x^{1})^d`, i.e. `g = d`; that case is correct
/// but never used by [`u_op`], which splits axis-free factors off first.
pub fn sectioned_factor(p: i64, q: i64, d: i64, axis: Axis) -> ((i64, i64), u32) {
    let e = axis.of(p, q);
    let x = axis.other(p, q);
    let g = d.gcd(&e);
    (axis.join(e / g, x * d / g), g as u32)
}

/// `U_{d,axis}`: keeps the coefficients of `axis^{m·d}` and renames them to
/// `axis^m`.
///
/// The denominator follows [`sectioned_factor`]; the numerator is recovered
/// by expanding to degree `d·(⌊δ/d⌋ + deg Q₁)`, sectioning, multiplying by
/// the new denominator and truncating above `⌊δ/d⌋ + deg Q₁`, where `δ` is the
/// numerator-minus-denominator degree along `axis`. The numerator may carry
/// negative exponents.
pub fn u_op(f: &FactoredRational, d: u32, axis: Axis) -> Result<FactoredRational, SeriesError> {
    section_op(f, d, axis, false)
}

/// `U_{d,axis}` with each factor `1/(1 - y)` replaced by
/// `(1 + y + … + y^{d/g - 1})/(1 - y^{d/g})`, so the new denominator is
/// `(1 - x^{d/g} axis^{e/g})` with multiplicity one. Equal to [`u_op`] as a
/// series; the numerator's axis degree is at most
/// `⌊(deg N + Σ e (d/g - 1)) / d⌋`.
pub fn u_op_compact(f: &FactoredRational, d: u32, axis: Axis) -> Result<FactoredRational, SeriesError> {
    section_op(f, d, axis, true)
}

fn section_op(f: &FactoredRational, d: u32, axis: Axis, compact: bool) -> Result<FactoredRational, SeriesError> {
    if d == 0 {
        return Err(SeriesError::BadIndex);
    }
    if let Some(&(p, q)) = f.denominator.keys().find(|&&(p, q)| axis.of(p, q) < 0) {
        return Err(SeriesError::NotNormalized { p, q });
    }
    if d == 1 {
        return Ok(f.clone());
    }
    let d = d as i64;
    let (free, rest) = factor_out_axis_free(f, axis);

    let Some((num_lo, num_hi)) = rest.numerator.degree_range(axis) else {
        return Ok(FactoredRational {
            scalar: f.scalar.clone(),
            numerator: BivariateLaurent::zero(),
            denominator: f.denominator.clone(),
        });
    };
    let deg_q = rest.denominator_degree(axis);

    let mut q1: BTreeMap<(i64, i64), u32> = BTreeMap::new();
    let mut padding = 0i64;
    for (&(p, q), &m) in &rest.denominator {
        let (key, g) = sectioned_factor(p, q, d, axis);
        if compact {
            *q1.entry(key).or_insert(0) += m;
            padding += axis.of(p, q) * (d / g as i64 - 1) * m as i64;
        } else {
            *q1.entry(key).or_insert(0) += g * m;
        }
    }
    let deg_q1: i64 = q1.iter().map(|(&(p, q), &m)| axis.of(p, q) * m as i64).sum();

    let cap = if compact {
        Integer::div_floor(&(num_hi + padding), &d)
    } else {
        debug_assert_eq!(deg_q1, deg_q);
        Integer::div_floor(&(num_hi - deg_q), &d) + deg_q1
    };
    let expand_to = d * cap;

    let mut numerator = BivariateLaurent::zero();
    if expand_to >= num_lo {
        let mut grid = Grid::from_numerator(&rest.numerator, axis, num_lo, expand_to);
        for (&(p, q), &m) in &rest.denominator {
            grid.divide_by(axis.of(p, q), axis.other(p, q), m);
        }
        let mut grid = grid.section(d);
        for (&(p, q), &m) in &q1 {
            grid.multiply_by(axis.of(p, q), axis.other(p, q), m);
        }
        numerator = grid.into_laurent(axis);
    }

    let mut out = FactoredRational {
        scalar: f.scalar.clone(),
        numerator,
        denominator: q1,
    };
    for (&(p, q), &m) in &free.denominator {
        out.push_factor(p, q, m);
    }
    Ok(out)
}

/// Dense row storage: row `k` holds the coefficient of `axis^{start+k}` as a
/// Laurent polynomial in the other variable.
struct Grid {
    start: i64,
    rows: Vec<Row>,
}

#[derive(Clone, Default)]
struct Row {
    offset: i64,
    c: Vec<BigInt>,
}

impl Row {
    fn iter(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.c
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (self.offset + k as i64, c))
    }

    fn set(&mut self, e: i64, v: BigInt) {
        self.reserve_range(e, e);
        let idx = (e - self.offset) as usize;
        self.c[idx] += v;
    }

    fn reserve_range(&mut self, lo: i64, hi: i64) {
        if self.c.is_empty() {
            self.offset = lo;
            self.c = vec![BigInt::zero(); (hi - lo + 1) as usize];
            return;
        }
        let cur_hi = self.offset + self.c.len() as i64 - 1;
        if lo < self.offset {
            let extra = (self.offset - lo) as usize;
            let mut v = Vec::with_capacity(extra + self.c.len());
            v.resize(extra, BigInt::zero());
            v.append(&mut self.c);
            self.c = v;
            self.offset = lo;
        }
        if hi > cur_hi {
            self.c.resize(self.c.len() + (hi - cur_hi) as usize, BigInt::zero());
        }
    }

    /// `self += sign · other^shift · src`.
    fn add_shifted(&mut self, src: &Row, shift: i64, negate: bool) {
        let Some(first) = src.c.iter().position(|c| !c.is_zero()) else {
            return;
        };
        let last = src.c.iter().rposition(|c| !c.is_zero()).unwrap();
        let lo = src.offset + first as i64 + shift;
        let hi = src.offset + last as i64 + shift;
        self.reserve_range(lo, hi);
        let base = (lo - self.offset) as usize;
        for (k, c) in src.c[first..=last].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if negate {
                self.c[base + k] -= c;
            } else {
                self.c[base + k] += c;
            }
        }
    }
}

impl Grid {
    fn from_numerator(num: &BivariateLaurent, axis: Axis, lo: i64, hi: i64) -> Self {
        let len = if hi >= lo { (hi - lo + 1) as usize } else { 0 };
        let mut rows = vec![Row::default(); len];
        for (&(a, b), c) in num.terms() {
            let e = axis.of(a, b);
            if e < lo || e > hi {
                continue;
            }
            rows[(e - lo) as usize].set(axis.other(a, b), c.clone());
        }
        Grid { start: lo, rows }
    }

    fn row(&self, e: i64) -> Option<&Row> {
        if e < self.start {
            return None;
        }
        self.rows.get((e - self.start) as usize)
    }

    /// Multiplies by `1/(1 - y^p x^q)^m` with `q > 0` (`x` the main axis).
    fn divide_by(&mut self, q: i64, p: i64, m: u32) {
        let q = q as usize;
        for _ in 0..m {
            for k in q..self.rows.len() {
                let (lo, hi) = self.rows.split_at_mut(k);
                hi[0].add_shifted(&lo[k - q], p, false);
            }
        }
    }

    /// Multiplies by `(1 - y^p x^q)^m`, truncating at the top row.
    fn multiply_by(&mut self, q: i64, p: i64, m: u32) {
        let q = q as usize;
        for _ in 0..m {
            for k in (q..self.rows.len()).rev() {
                let (lo, hi) = self.rows.split_at_mut(k);
                hi[0].add_shifted(&lo[k - q], p, true);
            }
        }
    }

    /// Keeps rows whose degree is divisible by `d`, re-indexed by degree / d.
    fn section(mut self, d: i64) -> Grid {
        let end = self.start + self.rows.len() as i64 - 1;
        let new_start = -(Integer::div_floor(&-self.start, &d));
        let new_end = Integer::div_floor(&end, &d);
        let mut rows = Vec::new();
        let mut e = new_start;
        while e <= new_end {
            let idx = (e * d - self.start) as usize;
            rows.push(std::mem::take(&mut self.rows[idx]));
            e += 1;
        }
        Grid {
            start: new_start,
            rows,
        }
    }

    fn into_laurent(self, axis: Axis) -> BivariateLaurent {
        let mut out = BivariateLaurent::zero();
        for (k, row) in self.rows.iter().enumerate() {
            let e = self.start + k as i64;
            for (o, c) in row.iter() {
                let (a, b) = axis.join(e, o);
                out.terms.insert((a, b), c.clone());
            }
        }
        out
    }
}

/// `scalar · N(t) / ∏ (1 - t^e)^m` with `N` a Laurent polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnivariateRational {
    pub scalar: BigRational,
    /// exponent → coefficient
    pub numerator: BTreeMap<i64, BigInt>,
    /// `e ≥ 1 → multiplicity`
    pub denominator: BTreeMap<u64, u32>,
}

impl UnivariateRational {
    pub fn eval(&self, t: f64) -> f64 {
        let mut v: f64 = self
            .numerator
            .iter()
            .map(|(&e, c)| c.to_f64().unwrap_or(f64::NAN) * t.powi(e as i32))
            .sum();
        v *= self.scalar.to_f64().unwrap_or(f64::NAN);
        for (&e, &m) in &self.denominator {
            v /= (1.0 - t.powi(e as i32)).powi(m as i32);
        }
        v
    }
}

impl HilbertSeries {
    /// Exact value at `t`, or `None` where the denominator vanishes.
    pub fn eval_exact(&self, t: &BigRational) -> Option<BigRational> {
        let mut v = BigRational::zero();
        let mut power = BigRational::one();
        for c in &self.numerator {
            v += &power * BigRational::from_integer(c.clone());
            power *= t;
        }
        for &(e, m) in &self.denominator {
            let f = BigRational::one() - num_traits::pow::Pow::pow(t, e as i64);
            if f.is_zero() {
                return None;
            }
            for _ in 0..m {
                v /= &f;
            }
        }
        Some(v)
    }
}

impl From<&HilbertSeries> for UnivariateRational {
    fn from(h: &HilbertSeries) -> Self {
        UnivariateRational {
            scalar: BigRational::one(),
            numerator: h
                .numerator
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, c)| (e as i64, c.clone()))
                .collect(),
            denominator: h.denominator.iter().copied().collect(),
        }
    }
}

/// Sets `s = t`: `s^a t^b ↦ t^{a+b}` and `(1 - s^p t^q) ↦ (1 - t^{p+q})`.
pub fn substitute_diagonal(f: &FactoredRational) -> Result<UnivariateRational, SeriesError> {
    let mut denominator = BTreeMap::new();
    for (&(p, q), &m) in &f.denominator {
        if p + q < 1 {
            return Err(SeriesError::NeedsReassembly { p, q });
        }
        *denominator.entry((p + q) as u64).or_insert(0) += m;
    }
    let mut numerator: BTreeMap<i64, BigInt> = BTreeMap::new();
    for (&(a, b), c) in f.numerator.terms() {
        *numerator.entry(a + b).or_default() += c;
    }
    numerator.retain(|_, c| !c.is_zero());
    Ok(UnivariateRational {
        scalar: f.scalar.clone(),
        numerator,
        denominator,
    })
}

/// Hilbert series in the form `N(t) / ∏ (1 - t^e)^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertSeries {
    /// Coefficient `i` ↔ `t^i`; no trailing zeros.
    pub numerator: Vec<BigInt>,
    /// `(e, m)` sorted by `e`.
    pub denominator: Vec<(u64, u32)>,
}

impl HilbertSeries {
    /// First `len` power-series coefficients.
    pub fn taylor(&self, len: usize) -> Vec<BigInt> {
        let mut c = vec![BigInt::zero(); len];
        for (i, x) in self.numerator.iter().enumerate().take(len) {
            c[i] = x.clone();
        }
        for &(e, m) in &self.denominator {
            let e = e as usize;
            for _ in 0..m {
                for i in e..len {
                    let v = c[i - e].clone();
                    c[i] += v;
                }
            }
        }
        c
    }

    pub fn is_palindromic(&self) -> bool {
        let n = &self.numerator;
        n.iter().eq(n.iter().rev())
    }

    /// Order of the pole at `t = 1`.
    pub fn pole_order(&self) -> i64 {
        laurent_at_one(self, 0).pole_order
    }

    /// Multiplies by `(1 - t^e)^m` (negative `m` divides) and recanonicalizes.
    pub fn times_binomial_power(&self, e: u64, m: i32) -> Result<HilbertSeries, SeriesError> {
        let mut r = UnivariateRational::from(self);
        if m < 0 {
            *r.denominator.entry(e).or_insert(0) += (-m) as u32;
        } else {
            let mut num: IntPoly = self.numerator.clone();
            let mut factor = vec![BigInt::zero(); e as usize + 1];
            factor[0] = BigInt::one();
            factor[e as usize] = BigInt::from(-1);
            for _ in 0..m {
                num = univariate::mul(&num, &factor);
            }
            r.numerator = num
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i as i64, c))
                .collect();
        }
        canonicalize(&r)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "numerator": self.numerator.iter().map(int_to_json).collect::<Vec<_>>(),
            "denominator": self.denominator.iter().map(|&(e, m)| json!([e, m])).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, SeriesError> {
        let bad = |what: &str| SeriesError::Format(what.to_string());
        let numerator = v
            .get("numerator")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing numerator"))?
            .iter()
            .map(|x| int_from_json(x).ok_or_else(|| bad("numerator entry")))
            .collect::<Result<Vec<_>, _>>()?;
        let denominator = v
            .get("denominator")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing denominator"))?
            .iter()
            .map(|pair| {
                let e = pair.get(0).and_then(Value::as_u64);
                let m = pair.get(1).and_then(Value::as_u64);
                match (e, m) {
                    (Some(e), Some(m)) if e >= 1 && m <= u32::MAX as u64 => Ok((e, m as u32)),
                    _ => Err(bad("denominator entry")),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(HilbertSeries {
            numerator,
            denominator,
        })
    }

    pub fn to_latex(&self) -> String {
        let mut num = String::new();
        for (i, c) in self.numerator.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if num.is_empty() {
                if c.is_negative() {
                    num.push('-');
                }
            } else {
                num.push_str(if c.is_negative() { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{{{i}}}"),
            };
            if mag.is_one() && i > 0 {
                num.push_str(&mono);
            } else {
                num.push_str(&format!("{mag}{mono}"));
            }
        }
        if num.is_empty() {
            num.push('0');
        }
        let mut den = String::new();
        for &(e, m) in &self.denominator {
            let base = if e == 1 {
                "(1-t)".to_string()
            } else {
                format!("(1-t^{{{e}}})")
            };
            if m == 1 {
                den.push_str(&base);
            } else {
                den.push_str(&format!("{base}^{{{m}}}"));
            }
        }
        if den.is_empty() {
            num
        } else {
            format!("\\frac{{{num}}}{{{den}}}")
        }
    }
}

impl fmt::Display for HilbertSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.numerator.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            terms.push(match (i, c.is_one()) {
                (0, _) => format!("{c}"),
                (_, true) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        let num = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        write!(f, "({num})")?;
        if !self.denominator.is_empty() {
            write!(f, " / (")?;
            let parts: Vec<String> = self
                .denominator
                .iter()
                .map(|&(e, m)| if m == 1 { format!("(1-t^{e})") } else { format!("(1-t^{e})^{m}") })
                .collect();
            write!(f, "{})", parts.join(""))?;
        }
        Ok(())
    }
}

fn int_to_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn int_from_json(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

/// Reduces a single rational function to canonical form.
pub fn canonicalize(r: &UnivariateRational) -> Result<HilbertSeries, SeriesError> {
    canonicalize_sum(std::slice::from_ref(r))
}

/// Sums rational functions over a common cyclotomic denominator, cancels
/// common cyclotomic factors, and rewrites the denominator as a product of
/// `(1 - t^e)`, using exactly pole-order factors when possible and preferring
/// a numerator with nonnegative coefficients.
///
/// Cyclotomic factors are handled as `Ψ_k = ∏_{d | k} (1 - t^d)^{μ(k/d)}`
/// (`Ψ_1 = 1 - t`), so every product or quotient is a sequence of sparse
/// binomial steps and `∏_{k | e} Ψ_k = 1 - t^e` carries no sign.
pub fn canonicalize_sum(terms: &[UnivariateRational]) -> Result<HilbertSeries, SeriesError> {
    let cyclo_of = |den: &BTreeMap<u64, u32>| {
        let mut c: BTreeMap<u64, u32> = BTreeMap::new();
        for (&e, &m) in den {
            for k in univariate::divisors(e) {
                *c.entry(k).or_insert(0) += m;
            }
        }
        c
    };

    let mut common: BTreeMap<u64, u32> = BTreeMap::new();
    let mut lcm_den = BigInt::one();
    let term_cyclo: Vec<BTreeMap<u64, u32>> = terms.iter().map(|t| cyclo_of(&t.denominator)).collect();
    for (t, c) in terms.iter().zip(&term_cyclo) {
        for (&k, &m) in c {
            let e = common.entry(k).or_insert(0);
            *e = (*e).max(m);
        }
        lcm_den = lcm_den.lcm(t.scalar.denom());
    }

    // Σ over terms of (integer scalar) · N · ∏ Ψ_k^{L_k - C_k}
    let lifted: Vec<(i64, IntPoly)> = terms
        .par_iter()
        .zip(&term_cyclo)
        .filter(|(t, _)| !t.numerator.is_empty() && !t.scalar.is_zero())
        .map(|(t, c)| {
            let lo = *t.numerator.keys().next().unwrap();
            let hi = *t.numerator.keys().next_back().unwrap();
            let scale = t.scalar.numer() * (&lcm_den / t.scalar.denom());
            let mut poly: IntPoly = vec![BigInt::zero(); (hi - lo + 1) as usize];
            for (&e, x) in &t.numerator {
                poly[(e - lo) as usize] = x * &scale;
            }
            let missing: BTreeMap<u64, u32> = common
                .iter()
                .map(|(&k, &l)| (k, l - c.get(&k).copied().unwrap_or(0)))
                .filter(|&(_, m)| m > 0)
                .collect();
            (lo, times_psi_powers(&poly, &missing))
        })
        .collect();
    let mut total: BTreeMap<i64, BigInt> = BTreeMap::new();
    for (lo, poly) in lifted {
        for (i, x) in poly.into_iter().enumerate() {
            if !x.is_zero() {
                *total.entry(lo + i as i64).or_default() += x;
            }
        }
    }
    total.retain(|_, c| !c.is_zero());

    let Some(&lo) = total.keys().next() else {
        return Ok(HilbertSeries {
            numerator: Vec::new(),
            denominator: Vec::new(),
        });
    };
    let hi = *total.keys().next_back().unwrap();
    let mut num: IntPoly = vec![BigInt::zero(); (hi - lo + 1) as usize];
    for (e, x) in total {
        num[(e - lo) as usize] = x;
    }

    // cancel common cyclotomic factors
    for (&k, l) in common.iter_mut() {
        while *l > 0 {
            match univariate::div_psi(&num, k) {
                Some(q) => {
                    num = q;
                    *l -= 1;
                }
                None => break,
            }
        }
    }
    common.retain(|_, l| *l > 0);

    // regroup into (1 - t^e) factors, preferring a nonnegative numerator
    let candidates: Vec<(BTreeMap<u64, u32>, IntPoly)> = cover_with_binomials(&common)
        .into_iter()
        .map(|binomials| {
            let mut extra: BTreeMap<u64, u32> = BTreeMap::new();
            for (&e, &m) in &binomials {
                for k in univariate::divisors(e) {
                    *extra.entry(k).or_insert(0) += m;
                }
            }
            for (k, m) in extra.iter_mut() {
                *m -= common.get(k).copied().unwrap_or(0);
            }
            extra.retain(|_, m| *m > 0);
            let num = times_psi_powers(&num, &extra);
            (binomials, num)
        })
        .collect();
    let (binomials, num) = match candidates.iter().position(|(_, p)| sign_ok(p)) {
        Some(i) => candidates.into_iter().nth(i).expect("index in range"),
        None => widen_for_sign(&candidates).unwrap_or_else(|| candidates.into_iter().next().expect("a cover")),
    };

    let mut numerator: Vec<BigInt> = Vec::new();
    for (i, x) in num.into_iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let e = lo + i as i64;
        let (q, r) = x.div_rem(&lcm_den);
        if !r.is_zero() {
            return Err(SeriesError::NotIntegral(format!("coefficient of t^{e} is {x}/{lcm_den}")));
        }
        if e < 0 {
            return Err(SeriesError::NotIntegral(format!("numerator has a t^{e} term")));
        }
        let e = e as usize;
        if numerator.len() <= e {
            numerator.resize(e + 1, BigInt::zero());
        }
        numerator[e] = q;
    }
    Ok(HilbertSeries {
        numerator,
        denominator: binomials.into_iter().collect(),
    })
}

/// `a · ∏ Ψ_k^{m_k}`, as net binomial multiplications followed by exact
/// binomial divisions.
fn times_psi_powers(a: &[BigInt], powers: &BTreeMap<u64, u32>) -> IntPoly {
    let mut net: BTreeMap<u64, i64> = BTreeMap::new();
    for (&k, &m) in powers {
        let (up, down) = univariate::psi_binomials(k);
        for d in up {
            *net.entry(d).or_insert(0) += m as i64;
        }
        for d in down {
            *net.entry(d).or_insert(0) -= m as i64;
        }
    }
    let mut out = a.to_vec();
    for (&d, &m) in &net {
        if m > 0 {
            out = univariate::mul_binomial(&out, d, m as u32);
        }
    }
    for (&d, &m) in &net {
        for _ in m..0 {
            out = univariate::div_binomial(&out, d).expect("cyclotomic identity");
        }
    }
    out
}

fn sign_ok(p: &IntPoly) -> bool {
    p.iter().all(|c| !c.is_negative()) || p.iter().all(|c| !c.is_positive())
}

/// Replaces up to two factors `1 - t^e` by `1 - t^{ke}` (`k = 2, 3`) and
/// returns the cheapest rewrite whose numerator has a single sign.
fn widen_for_sign(candidates: &[(BTreeMap<u64, u32>, IntPoly)]) -> Option<(BTreeMap<u64, u32>, IntPoly)> {
    let cost = |b: &BTreeMap<u64, u32>| b.iter().map(|(&e, &m)| e * m as u64).sum::<u64>();
    let step = |(b, p): &(BTreeMap<u64, u32>, IntPoly)| {
        let mut out = Vec::new();
        for &e in b.keys() {
            for k in 2..=3u64 {
                let mut nb = b.clone();
                *nb.get_mut(&e).unwrap() -= 1;
                nb.retain(|_, m| *m > 0);
                *nb.entry(k * e).or_insert(0) += 1;
                let np = univariate::div_binomial(&univariate::mul_binomial(p, k * e, 1), e).expect("binomial divides");
                out.push((nb, np));
            }
        }
        out
    };
    let mut best: Option<(BTreeMap<u64, u32>, IntPoly)> = None;
    let mut consider = |c: (BTreeMap<u64, u32>, IntPoly)| {
        if sign_ok(&c.1) {
            let better = match &best {
                None => true,
                Some(b) => (cost(&c.0), &c.0) < (cost(&b.0), &b.0),
            };
            if better {
                best = Some(c);
            }
        }
    };
    for c in candidates {
        for once in step(c) {
            for twice in step(&once) {
                consider(twice);
            }
            consider(once);
        }
    }
    best
}

const COVER_BUDGET: usize = 200_000;
const COVER_KEEP: usize = 16;

/// Candidate exponent sets `e_i` with `∏ (1 - t^{e_i})` divisible by
/// `∏ Φ_k^{m_k}`, cheapest `Σ e_i` first. When `Φ_1` occurs, exactly `m_1`
/// factors are used (so the factor count is the pole order); otherwise, or
/// when the search finds nothing within budget, the only candidate takes the
/// largest index greedily.
fn cover_with_binomials(common: &BTreeMap<u64, u32>) -> Vec<BTreeMap<u64, u32>> {
    let bins = common.get(&1).copied().unwrap_or(0) as usize;
    let mut need: Vec<(u64, usize)> = common
        .iter()
        .filter(|(&k, _)| k > 1)
        .map(|(&k, &m)| (k, m as usize))
        .collect();
    need.sort_by_key(|&(k, _)| std::cmp::Reverse(k));

    if bins > 0 && need.iter().all(|&(_, m)| m <= bins) {
        let mut search = CoverSearch {
            need: &need,
            found: Vec::new(),
            nodes: 0,
        };
        let mut current = vec![1u64; bins];
        search.run(0, &mut current);
        if !search.found.is_empty() {
            return search
                .found
                .into_iter()
                .map(|(_, es)| {
                    let mut out = BTreeMap::new();
                    for e in es {
                        *out.entry(e).or_insert(0) += 1;
                    }
                    out
                })
                .collect();
        }
    }

    let mut left = common.clone();
    let mut out: BTreeMap<u64, u32> = BTreeMap::new();
    while let Some((&e, _)) = left.iter().next_back() {
        for k in univariate::divisors(e) {
            if let Some(l) = left.get_mut(&k) {
                *l -= 1;
                if *l == 0 {
                    left.remove(&k);
                }
            }
        }
        *out.entry(e).or_insert(0) += 1;
    }
    vec![out]
}

struct CoverSearch<'a> {
    need: &'a [(u64, usize)],
    /// `(Σ e, sorted e)`, ascending, at most `COVER_KEEP` entries.
    found: Vec<(u64, Vec<u64>)>,
    nodes: usize,
}

impl CoverSearch<'_> {
    fn bound(&self) -> u64 {
        if self.found.len() < COVER_KEEP {
            u64::MAX
        } else {
            self.found.last().map_or(u64::MAX, |(s, _)| *s)
        }
    }

    fn run(&mut self, idx: usize, current: &mut Vec<u64>) {
        self.nodes += 1;
        if self.nodes > COVER_BUDGET {
            return;
        }
        let sum: u64 = current.iter().sum();
        if sum > self.bound() {
            return;
        }
        let Some(&(d, m)) = self.need.get(idx) else {
            let mut es = current.clone();
            es.sort_unstable();
            let entry = (sum, es);
            if let Err(pos) = self.found.binary_search(&entry) {
                self.found.insert(pos, entry);
                self.found.truncate(COVER_KEEP);
            }
            return;
        };
        let already = current.iter().filter(|&&e| e % d == 0).count();
        if already >= m {
            self.run(idx + 1, current);
            return;
        }
        let free: Vec<usize> = (0..current.len()).filter(|&i| !current[i].is_multiple_of(d)).collect();
        self.choose(idx, d, m - already, &free, 0, current);
    }

    fn choose(&mut self, idx: usize, d: u64, left: usize, free: &[usize], from: usize, current: &mut Vec<u64>) {
        if left == 0 {
            self.run(idx + 1, current);
            return;
        }
        let mut seen: Vec<u64> = Vec::new();
        for pos in from..free.len() {
            if free.len() - pos < left {
                break;
            }
            let i = free[pos];
            // bins with the same value are interchangeable
            if seen.contains(&current[i]) {
                continue;
            }
            seen.push(current[i]);
            let old = current[i];
            current[i] = old.lcm(&d);
            self.choose(idx, d, left - 1, free, pos + 1, current);
            current[i] = old;
            if self.nodes > COVER_BUDGET {
                return;
            }
        }
    }
}

/// Coefficients of `Σ γ_m (1 - t)^{m - pole_order}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentExpansion {
    pub pole_order: i64,
    pub coefficients: Vec<BigRational>,
}

impl LaurentExpansion {
    pub fn gamma(&self, m: usize) -> Option<&BigRational> {
        self.coefficients.get(m)
    }
}

/// Laurent expansion of `r` at `t = 1` in powers of `w = 1 - t`, through
/// `γ_M`.
///
/// With `1 - t^e = w·f_e(w)` and `N(1 - w) = w^k·Ñ(w)`, the expansion is
/// `w^{k - Σm} · Ñ(w) / ∏ f_e(w)^m`, a power-series division with
/// `f_e(0) = e ≠ 0`.
pub fn laurent_at_one(r: &HilbertSeries, max_order: usize) -> LaurentExpansion {
    let len = max_order + 1;
    // N(1 - w) via binomial expansion
    let deg = r.numerator.len();
    let mut shifted = vec![BigInt::zero(); deg.max(1)];
    for (k, c) in r.numerator.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        // (1 - w)^k = Σ_j C(k, j) (-w)^j
        let mut binom = BigInt::one();
        for j in 0..=k {
            let term = &binom * c;
            if j % 2 == 0 {
                shifted[j] += term;
            } else {
                shifted[j] -= term;
            }
            binom = binom * BigInt::from(k - j) / BigInt::from(j + 1);
        }
    }
    let vanishing = shifted.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let total_mult: i64 = r.denominator.iter().map(|&(_, m)| m as i64).sum();
    let pole_order = total_mult - vanishing as i64;

    let mut series: Vec<BigRational> = (0..len)
        .map(|j| {
            shifted
                .get(vanishing + j)
                .cloned()
                .map(BigRational::from_integer)
                .unwrap_or_else(BigRational::zero)
        })
        .collect();

    for &(e, m) in &r.denominator {
        // f_e(w) = Σ_{j=1}^{e} (-1)^{j+1} C(e, j) w^{j-1}
        let mut f = vec![BigRational::zero(); len];
        let mut binom = BigInt::from(e);
        for j in 1..=(e as usize) {
            if j - 1 < len {
                let v = BigRational::from_integer(binom.clone());
                f[j - 1] = if j % 2 == 1 { v } else { -v };
            }
            binom = binom * BigInt::from(e as usize - j) / BigInt::from(j + 1);
        }
        for _ in 0..m {
            series = series_div(&series, &f);
        }
    }
    LaurentExpansion {
        pole_order,
        coefficients: series,
    }
}

fn series_div(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len();
    let inv = BigRational::one() / &b[0];
    let mut out: Vec<BigRational> = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = a[i].clone();
        for j in 1..=i.min(b.len() - 1) {
            acc -= &b[j] * &out[i - j];
        }
        out.push(acc * &inv);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn fr(factors: &[(i64, i64)]) -> FactoredRational {
        FactoredRational::new(
            BigRational::one(),
            BivariateLaurent::one(),
            factors.iter().map(|&pq| (pq, 1)),
        )
    }

    fn hs(num: &[i64], den: &[(u64, u32)]) -> HilbertSeries {
        HilbertSeries {
            numerator: num.iter().map(|&x| BigInt::from(x)).collect(),
            denominator: den.to_vec(),
        }
    }

    #[test]
    fn phi_examples() {
        let a = WeightMatrix::from_rows(&[1, 2, 3], &[0, 1, 1]);
        let f = phi_term(&a, 0, 1).unwrap();
        assert_eq!(f, fr(&[(1, 0), (-1, 2)]));
        let f = phi_term(&a, 0, 2).unwrap();
        assert_eq!(f, fr(&[(1, 2), (-1, 0)]));
        assert_eq!(f.factor_count(), 2);
        assert_eq!(phi_term(&a, 1, 0), Err(SeriesError::BadPair(1, 0)));
    }

    #[test]
    fn normalize_examples() {
        let f = fr(&[(-1, 0)]);
        let g = normalize(&f, Axis::S);
        assert_eq!(g.scalar, r(-1, 1));
        assert_eq!(g.numerator, BivariateLaurent::monomial(1, 0, BigInt::one()));
        assert_eq!(g.factors().collect::<Vec<_>>(), vec![((1, 0), 1)]);
        assert!((g.eval(0.3, 0.2) - f.eval(0.3, 0.2)).abs() < 1e-12);

        let f = fr(&[(-1, 2)]);
        let g = normalize(&f, Axis::S);
        assert!(g.is_normalized(Axis::S));
        assert!((g.eval(0.7, 0.4) - f.eval(0.7, 0.4)).abs() < 1e-12);

        let f = fr(&[(1, 2), (3, 1)]);
        assert_eq!(normalize(&f, Axis::S), f);
        assert_eq!(normalize(&f, Axis::T), f);
    }

    #[test]
    fn u_op_identity_and_geometric() {
        let f = fr(&[(1, 1), (-2, 3)]);
        assert_eq!(u_op(&f, 1, Axis::T).unwrap(), f);

        let g = u_op(&fr(&[(1, 1)]), 2, Axis::T).unwrap();
        assert_eq!(g, fr(&[(2, 1)]));

        // 1/(1 - s t^2) keeps all terms: (1 - s t)/(1 - s t)^2
        let g = u_op(&fr(&[(1, 2)]), 2, Axis::T).unwrap();
        assert_eq!(g.factors().collect::<Vec<_>>(), vec![((1, 1), 2)]);
        let expect = BivariateLaurent::one().add(&BivariateLaurent::monomial(1, 1, BigInt::from(-1)));
        assert_eq!(g.numerator, expect);
    }

    #[test]
    fn compact_u_op_keeps_single_factors() {
        let g = u_op_compact(&fr(&[(1, 2)]), 2, Axis::T).unwrap();
        assert_eq!(g, fr(&[(1, 1)]));
        let g = u_op_compact(&fr(&[(1, 1)]), 2, Axis::T).unwrap();
        assert_eq!(g.factors().collect::<Vec<_>>(), vec![((2, 1), 1)]);
    }

    #[test]
    fn expansion_sees_negative_numerator_rows() {
        // s^{-2}/(1 - s^2 t) along s: the s^{-2} row feeds s^0
        let f = FactoredRational::new(
            BigRational::one(),
            BivariateLaurent::monomial(-2, 0, BigInt::one()),
            [((2, 1), 1)],
        );
        let rows = f.expand(Axis::S, 0, 2).unwrap();
        assert_eq!(rows[0], BivariateLaurent::monomial(0, 1, BigInt::one()));
        assert!(rows[1].is_zero());
    }

    #[test]
    fn u_op_rejects_unnormalized() {
        assert_eq!(
            u_op(&fr(&[(1, -1)]), 2, Axis::T),
            Err(SeriesError::NotNormalized { p: 1, q: -1 })
        );
    }

    #[test]
    fn axis_free_split() {
        let f = fr(&[(1, 0), (1, 1)]);
        let (free, rest) = factor_out_axis_free(&f, Axis::T);
        assert_eq!(free, fr(&[(1, 0)]));
        assert_eq!(rest, fr(&[(1, 1)]));
        assert_eq!(free.mul(&rest), f);

        let f = fr(&[(1, 1)]);
        let (free, rest) = factor_out_axis_free(&f, Axis::T);
        assert_eq!(free, FactoredRational::one());
        assert_eq!(rest, f);

        let f = fr(&[(1, 0), (0, 1)]);
        let (free, rest) = factor_out_axis_free(&f, Axis::T);
        assert_eq!(free, fr(&[(1, 0)]));
        assert_eq!(rest, fr(&[(0, 1)]));
    }

    #[test]
    fn sectioned_factor_zero_exponent() {
        // axis-free factor: g = gcd(d, 0) = d
        assert_eq!(sectioned_factor(2, 0, 3, Axis::T), ((6 / 3, 0), 3));
        assert_eq!(sectioned_factor(1, 4, 6, Axis::T), ((3, 2), 2));
        assert_eq!(sectioned_factor(4, 1, 6, Axis::S), ((2, 3), 2));
    }

    #[test]
    fn diagonal_substitution() {
        let f = FactoredRational::new(
            r(1, 2),
            BivariateLaurent::monomial(2, 1, BigInt::one()),
            [((1, 2), 1)],
        );
        let u = substitute_diagonal(&f).unwrap();
        assert_eq!(u.numerator, BTreeMap::from([(3, BigInt::one())]));
        assert_eq!(u.denominator, BTreeMap::from([(3, 1)]));
        assert_eq!(u.scalar, r(1, 2));

        let f = FactoredRational::new(r(3, 1), BivariateLaurent::one(), []);
        let u = substitute_diagonal(&f).unwrap();
        assert_eq!(u.scalar, r(3, 1));
        assert!(u.denominator.is_empty());

        assert!(matches!(
            substitute_diagonal(&fr(&[(1, -2)])),
            Err(SeriesError::NeedsReassembly { .. })
        ));
    }

    #[test]
    fn canonical_forms() {
        let c = canonicalize(&UnivariateRational::from(&hs(&[1, -1], &[(1, 2)]))).unwrap();
        assert_eq!(c, hs(&[1], &[(1, 1)]));

        let c = canonicalize(&UnivariateRational::from(&hs(&[1, 1], &[(1, 1), (2, 1)]))).unwrap();
        assert_eq!(c, hs(&[1], &[(1, 2)]));

        // 1/(1-t^2) is already canonical
        let c = canonicalize(&UnivariateRational::from(&hs(&[1], &[(2, 1)]))).unwrap();
        assert_eq!(c, hs(&[1], &[(2, 1)]));
    }

    #[test]
    fn laurent_examples() {
        let l = laurent_at_one(&hs(&[1], &[(1, 1)]), 3);
        assert_eq!(l.pole_order, 1);
        assert_eq!(l.coefficients[0], r(1, 1));
        assert!(l.coefficients[1..].iter().all(|c| c.is_zero()));

        let l = laurent_at_one(&hs(&[1], &[(2, 1)]), 2);
        assert_eq!(l.pole_order, 1);
        assert_eq!(l.coefficients, vec![r(1, 2), r(1, 4), r(1, 8)]);

        // t^2 = (1 - w)^2 = 1 - 2w + w^2
        let l = laurent_at_one(&hs(&[0, 0, 1], &[]), 3);
        assert_eq!(l.pole_order, 0);
        assert_eq!(l.coefficients, vec![r(1, 1), r(-2, 1), r(1, 1), r(0, 1)]);
    }

    #[test]
    fn json_round_trip() {
        let h = hs(&[1, 0, 3, 3, 1], &[(3, 1), (4, 2)]);
        let v = h.to_json();
        assert_eq!(v, json!({"numerator": [1, 0, 3, 3, 1], "denominator": [[3, 1], [4, 2]]}));
        assert_eq!(HilbertSeries::from_json(&v).unwrap(), h);
    }

    #[test]
    fn latex_output() {
        let h = hs(&[1, 0, 3], &[(1, 1), (3, 2)]);
        assert_eq!(h.to_latex(), "\\frac{1 + 3t^{2}}{(1-t)(1-t^{3})^{2}}");
    }
}
