//! Closed-form Laurent coefficients `γ₀` and `γ₂` from the minors.
//!
//! Terms whose denominator vanishes are evaluated on the column-scaled family
//! `A(u) = A·diag(u_1, …, u_n)`, whose minors are `d_pq u_p u_q`. Their sum is
//! brought over one denominator, the factors vanishing at `u = 1` are divided
//! out of the numerator exactly, and the result is evaluated at `u = 1`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::weights::{MinorTable, WeightMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GammaError {
    #[error("weight matrix is not faithful")]
    NotFaithful,
    #[error("weight matrix is not in standard form")]
    NotStandardForm,
    #[error("need at least 3 columns, got {0}")]
    TooFewColumns(usize),
    #[error("singular factor {0} does not divide the combined numerator")]
    NotRemovable(String),
}

/// Coefficient `κ(g)` of `γ₀(A_p)` in the second sum of `γ₂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KappaVariant {
    /// `(g - 1)/12`
    Theorem,
    /// `(g² - 1)/12`
    Proof,
}

impl KappaVariant {
    pub fn kappa(self, g: &BigInt) -> BigRational {
        let top = match self {
            KappaVariant::Theorem => g - 1,
            KappaVariant::Proof => g * g - 1,
        };
        BigRational::new(top, BigInt::from(12))
    }

    pub fn name(self) -> &'static str {
        match self {
            KappaVariant::Theorem => "theorem",
            KappaVariant::Proof => "proof",
        }
    }
}

/// Matches the exact expansion of the Hilbert series on every tested matrix.
pub const DEFAULT_KAPPA: KappaVariant = KappaVariant::Proof;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GammaOptions {
    /// Route every term through the symbolic path, singular or not.
    pub force_symbolic: bool,
    pub kappa: KappaVariant,
}

impl Default for GammaOptions {
    fn default() -> Self {
        GammaOptions {
            force_symbolic: false,
            kappa: DEFAULT_KAPPA,
        }
    }
}

/// Sparse polynomial over ℚ; keys are exponent vectors compared
/// lexicographically, which is the monomial order used for division.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MPoly {
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl MPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        Self::term(vec![0; nvars], c)
    }

    pub fn term(exps: Vec<u32>, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        MPoly { terms }
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

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
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

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, k: &BigRational) -> MPoly {
        if k.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (e, c) in &self.terms {
            for (f, d) in &other.terms {
                let g: Vec<u32> = e.iter().zip(f).map(|(a, b)| a + b).collect();
                out.add_term(g, c * d);
            }
        }
        out
    }

    pub fn pow(&self, k: u32, nvars: usize) -> MPoly {
        let mut out = MPoly::constant(nvars, BigRational::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    fn mul_monomial(&self, m: &[u32]) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(m).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    fn leading(&self) -> Option<(&Vec<u32>, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient, or `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &MPoly) -> Option<MPoly> {
        let (lm, lc) = divisor.leading()?;
        let mut rem = self.clone();
        let mut quot = MPoly::zero();
        while let Some((m, c)) = rem.leading() {
            if m.iter().zip(lm).any(|(a, b)| a < b) {
                return None;
            }
            let e: Vec<u32> = m.iter().zip(lm).map(|(a, b)| a - b).collect();
            let c = c / lc;
            rem = rem.sub(&divisor.mul_monomial(&e).scale(&c));
            quot.add_term(e, c);
        }
        Some(quot)
    }

    /// Value at `u = (1, …, 1)`.
    pub fn at_ones(&self) -> BigRational {
        self.terms.values().fold(BigRational::zero(), |acc, c| acc + c)
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        let mut total = BigRational::zero();
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    v *= x;
                }
            }
            total += v;
        }
        total
    }

    /// `self = c · u^m · g` with `g` free of monomial content and with
    /// leading coefficient 1.
    fn split_content(&self, nvars: usize) -> (BigRational, Vec<u32>, MPoly) {
        let mut m = vec![u32::MAX; nvars];
        for e in self.terms.keys() {
            for (a, &b) in m.iter_mut().zip(e) {
                *a = (*a).min(b);
            }
        }
        let lc = self.leading().map(|(_, c)| c.clone()).unwrap_or_else(BigRational::one);
        let inv = BigRational::one() / &lc;
        let g = MPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(&m).map(|(a, b)| a - b).collect(), c * &inv))
                .collect(),
        };
        (lc, m, g)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let mag = c.abs();
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("u{}", i + 1) } else { format!("u{}^{k}", i + 1) })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// `numerator / (u^monomial · ∏ factor^mult)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPolyFraction {
    pub nvars: usize,
    pub numerator: MPoly,
    pub monomial: Vec<u32>,
    pub factors: BTreeMap<MPoly, u32>,
}

impl UPolyFraction {
    pub fn zero(nvars: usize) -> Self {
        UPolyFraction {
            nvars,
            numerator: MPoly::zero(),
            monomial: vec![0; nvars],
            factors: BTreeMap::new(),
        }
    }

    /// Expanded denominator.
    pub fn denominator(&self) -> MPoly {
        let mut d = MPoly::term(self.monomial.clone(), BigRational::one());
        for (g, &m) in &self.factors {
            d = d.mul(&g.pow(m, self.nvars));
        }
        d
    }

    /// Divides the numerator by every factor vanishing at `u = 1`, as often
    /// as it occurs; with `all`, also cancels any other factor that divides.
    pub fn cancel(&mut self, all: bool) -> Result<(), GammaError> {
        let keys: Vec<MPoly> = self.factors.keys().cloned().collect();
        for g in keys {
            let vanishing = g.at_ones().is_zero();
            if !vanishing && !all {
                continue;
            }
            while let Some(m) = self.factors.get(&g).copied().filter(|&m| m > 0) {
                match self.numerator.div_exact(&g) {
                    Some(q) => {
                        self.numerator = q;
                        if m == 1 {
                            self.factors.remove(&g);
                        } else {
                            self.factors.insert(g.clone(), m - 1);
                        }
                    }
                    None if vanishing && !self.numerator.is_zero() => {
                        return Err(GammaError::NotRemovable(g.to_string()));
                    }
                    None => break,
                }
            }
        }
        if self.numerator.is_zero() {
            self.factors.clear();
            self.monomial = vec![0; self.nvars];
        }
        Ok(())
    }

    /// Value at `u = 1`; requires [`cancel`](Self::cancel) first.
    pub fn at_ones(&self) -> BigRational {
        let mut den = BigRational::one();
        for (g, &m) in &self.factors {
            let v = g.at_ones();
            for _ in 0..m {
                den *= &v;
            }
        }
        self.numerator.at_ones() / den
    }
}

impl fmt::Display for UPolyFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / (", self.numerator)?;
        let mut parts = Vec::new();
        for (i, &k) in self.monomial.iter().enumerate() {
            match k {
                0 => {}
                1 => parts.push(format!("u{}", i + 1)),
                _ => parts.push(format!("u{}^{k}", i + 1)),
            }
        }
        for (g, &m) in &self.factors {
            if m == 1 {
                parts.push(format!("({g})"));
            } else {
                parts.push(format!("({g})^{m}"));
            }
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        write!(f, "{})", parts.join("*"))
    }
}

/// One summand: `coeff · num / (u^mono · ∏ g^m)`.
struct SymTerm {
    coeff: BigRational,
    num: MPoly,
    mono: Vec<u32>,
    factors: BTreeMap<MPoly, u32>,
}

impl SymTerm {
    fn new(nvars: usize, coeff: BigRational, num: MPoly) -> Self {
        SymTerm {
            coeff,
            num,
            mono: vec![0; nvars],
            factors: BTreeMap::new(),
        }
    }

    fn divide_by(&mut self, f: &MPoly, times: u32) {
        assert!(!f.is_zero(), "denominator factor vanishes identically");
        let nvars = self.mono.len();
        let (c, m, g) = f.split_content(nvars);
        for _ in 0..times {
            self.coeff /= &c;
        }
        for (a, b) in self.mono.iter_mut().zip(&m) {
            *a += b * times;
        }
        if !g.is_constant() {
            *self.factors.entry(g).or_insert(0) += times;
        }
    }
}

/// Brings terms over a common denominator.
fn combine(nvars: usize, terms: Vec<SymTerm>) -> UPolyFraction {
    let mut out = UPolyFraction::zero(nvars);
    for t in &terms {
        for (a, &b) in out.monomial.iter_mut().zip(&t.mono) {
            *a = (*a).max(b);
        }
        for (g, &m) in &t.factors {
            let e = out.factors.entry(g.clone()).or_insert(0);
            *e = (*e).max(m);
        }
    }
    for t in terms {
        let shift: Vec<u32> = out.monomial.iter().zip(&t.mono).map(|(a, b)| a - b).collect();
        let mut num = t.num.scale(&t.coeff).mul_monomial(&shift);
        for (g, &l) in &out.factors {
            let have = t.factors.get(g).copied().unwrap_or(0);
            if l > have {
                num = num.mul(&g.pow(l - have, nvars));
            }
        }
        out.numerator = out.numerator.add(&num);
    }
    out
}

/// Which closed-form sum to evaluate.
#[derive(Clone, Copy, Debug)]
enum Formula {
    /// `Σ c_ij^e / ∏ (c_ij - c_ik - c_jk)(c_ij + c_ik + c_jk)`
    Leading { exponent: i64 },
    /// `Σ -c_ij^{2n-7} Σ_p (c_ip + c_jp)² / (12 ∏ …)`
    SecondFirst,
}

/// A source of minors: exact integers plus a symbolic counterpart.
trait Minors {
    fn n(&self) -> usize;
    fn nvars(&self) -> usize;
    fn exact(&self, i: usize, j: usize) -> BigInt;
    fn symbolic(&self, i: usize, j: usize) -> MPoly;
}

/// `c_pq = d_pq u_p u_q`.
struct ScaledColumns<'a> {
    table: &'a MinorTable,
}

impl Minors for ScaledColumns<'_> {
    fn n(&self) -> usize {
        self.table.n()
    }

    fn nvars(&self) -> usize {
        self.table.n()
    }

    fn exact(&self, i: usize, j: usize) -> BigInt {
        self.table.get(i, j).clone()
    }

    fn symbolic(&self, i: usize, j: usize) -> MPoly {
        let mut e = vec![0; self.table.n()];
        e[i] += 1;
        e[j] += 1;
        MPoly::term(e, BigRational::from_integer(self.table.get(i, j).clone()))
    }
}

fn rat(x: BigInt) -> BigRational {
    BigRational::from_integer(x)
}

/// Exact value of `num / ∏` for one pair, or `None` if the product vanishes.
fn exact_term(src: &dyn Minors, formula: Formula, i: usize, j: usize) -> Option<BigRational> {
    let n = src.n();
    let c = |p, q| src.exact(p, q);
    let cij = c(i, j);
    let mut den = BigInt::one();
    for k in (0..n).filter(|&k| k != i && k != j) {
        den *= (&cij - c(i, k) - c(j, k)) * (&cij + c(i, k) + c(j, k));
    }
    if den.is_zero() {
        return None;
    }
    let power = |e: i64| {
        if e >= 0 {
            rat(num_traits::pow(cij.clone(), e as usize))
        } else {
            BigRational::one() / rat(num_traits::pow(cij.clone(), (-e) as usize))
        }
    };
    Some(match formula {
        Formula::Leading { exponent } => power(exponent) / rat(den),
        Formula::SecondFirst => {
            let s: BigInt = (0..n)
                .filter(|&p| p != i && p != j)
                .map(|p| {
                    let x = c(i, p) + c(j, p);
                    &x * &x
                })
                .sum();
            -power(2 * n as i64 - 7) * rat(s) / rat(den * 12)
        }
    })
}

fn symbolic_term(src: &dyn Minors, formula: Formula, i: usize, j: usize) -> SymTerm {
    let n = src.n();
    let nv = src.nvars();
    let c = |p, q| src.symbolic(p, q);
    let cij = c(i, j);
    let (exponent, num, coeff) = match formula {
        Formula::Leading { exponent } => (exponent, MPoly::constant(nv, BigRational::one()), BigRational::one()),
        Formula::SecondFirst => {
            let mut s = MPoly::zero();
            for p in (0..n).filter(|&p| p != i && p != j) {
                let x = c(i, p).add(&c(j, p));
                s = s.add(&x.mul(&x));
            }
            (2 * n as i64 - 7, s, BigRational::new(BigInt::from(-1), BigInt::from(12)))
        }
    };
    let num = if exponent >= 0 { num.mul(&cij.pow(exponent as u32, nv)) } else { num };
    let mut t = SymTerm::new(nv, coeff, num);
    if exponent < 0 {
        t.divide_by(&cij, (-exponent) as u32);
    }
    for k in (0..n).filter(|&k| k != i && k != j) {
        let (cik, cjk) = (c(i, k), c(j, k));
        t.divide_by(&cij.sub(&cik).sub(&cjk), 1);
        t.divide_by(&cij.add(&cik).add(&cjk), 1);
    }
    t
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermEntry {
    /// 0-based columns with `d_ij > 0`.
    pub pair: (usize, usize),
    pub singular: bool,
    /// Exact value for nonsingular terms evaluated directly.
    pub value: Option<BigRational>,
}

/// Evaluation of one closed-form sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumEvaluation {
    pub value: BigRational,
    pub terms: Vec<TermEntry>,
    /// Combined symbolic part after cancellation, if any term needed it.
    pub symbolic: Option<UPolyFraction>,
    /// Value of `symbolic` at `u = 1`.
    pub symbolic_value: BigRational,
}

fn evaluate_sum(src: &dyn Minors, formula: Formula, force_symbolic: bool) -> Result<SumEvaluation, GammaError> {
    let n = src.n();
    let mut entries = Vec::new();
    let mut direct = BigRational::zero();
    let mut sym = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j || !src.exact(i, j).is_positive() {
                continue;
            }
            let exact = if force_symbolic { None } else { exact_term(src, formula, i, j) };
            let singular = exact.is_none() && exact_term(src, formula, i, j).is_none();
            match exact {
                Some(v) => {
                    direct += &v;
                    entries.push(TermEntry { pair: (i, j), singular, value: Some(v) });
                }
                None => {
                    sym.push(symbolic_term(src, formula, i, j));
                    entries.push(TermEntry { pair: (i, j), singular, value: None });
                }
            }
        }
    }
    entries.sort_by_key(|e| e.pair);
    let (symbolic, symbolic_value) = if sym.is_empty() {
        (None, BigRational::zero())
    } else {
        let mut f = combine(src.nvars(), sym);
        f.cancel(false)?;
        let v = f.at_ones();
        (Some(f), v)
    };
    Ok(SumEvaluation {
        value: direct + &symbolic_value,
        terms: entries,
        symbolic,
        symbolic_value,
    })
}

/// Second-sum data for one removed column.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RemovedColumn {
    pub column: usize,
    /// gcd of the minors of `A_p`; 0 when `A_p` has rank below 2.
    pub gcd: BigInt,
    /// The leading-coefficient formula applied to `A_p`.
    pub gamma0: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaReport {
    pub gamma0: BigRational,
    pub gamma0_terms: Vec<TermEntry>,
    pub gamma0_symbolic: Option<UPolyFraction>,
    pub gamma2: Option<Gamma2Parts>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gamma2Parts {
    pub value: BigRational,
    pub first_sum: BigRational,
    pub second_sum: BigRational,
    pub kappa: KappaVariant,
    pub first_terms: Vec<TermEntry>,
    pub removed_columns: Vec<RemovedColumn>,
}

impl GammaReport {
    /// `γ₃ = γ₂`.
    pub fn gamma3(&self) -> Option<&BigRational> {
        self.gamma2.as_ref().map(|g| &g.value)
    }

    pub fn to_json(&self) -> Value {
        let terms = |ts: &[TermEntry]| {
            ts.iter()
                .map(|t| {
                    json!({
                        "pair": [t.pair.0 + 1, t.pair.1 + 1],
                        "singular": t.singular,
                        "value": t.value.as_ref().map(|v| v.to_string()),
                    })
                })
                .collect::<Vec<_>>()
        };
        let mut v = json!({
            "gamma0": self.gamma0.to_string(),
            "terms": terms(&self.gamma0_terms),
            "symbolic": self.gamma0_symbolic.as_ref().map(|f| f.to_string()),
        });
        if let Some(g) = &self.gamma2 {
            v["gamma2"] = json!(g.value.to_string());
            v["gamma3"] = json!(g.value.to_string());
            v["kappa_variant"] = json!(g.kappa.name());
            v["first_sum"] = json!(g.first_sum.to_string());
            v["second_sum"] = json!(g.second_sum.to_string());
            v["gamma2_terms"] = json!(terms(&g.first_terms));
            v["removed_columns"] = json!(g
                .removed_columns
                .iter()
                .map(|r| json!({
                    "column": r.column + 1,
                    "gcd": r.gcd.to_string(),
                    "gamma0": r.gamma0.to_string(),
                }))
                .collect::<Vec<_>>());
        }
        v
    }
}

fn check(a: &WeightMatrix) -> Result<(), GammaError> {
    if a.ncols() < 3 {
        return Err(GammaError::TooFewColumns(a.ncols()));
    }
    if !a.faithfulness().faithful {
        return Err(GammaError::NotFaithful);
    }
    if !a.is_standard_form() {
        return Err(GammaError::NotStandardForm);
    }
    Ok(())
}

fn leading_sum(a: &WeightMatrix, force_symbolic: bool) -> Result<SumEvaluation, GammaError> {
    let table = a.minor_table();
    let src = ScaledColumns { table: &table };
    let exponent = 2 * a.ncols() as i64 - 5;
    evaluate_sum(&src, Formula::Leading { exponent }, force_symbolic)
}

/// `γ₀(A)`, the leading Laurent coefficient of the on-shell series.
pub fn gamma0(a: &WeightMatrix, opts: &GammaOptions) -> Result<GammaReport, GammaError> {
    check(a)?;
    let s = leading_sum(a, opts.force_symbolic)?;
    Ok(GammaReport {
        gamma0: s.value,
        gamma0_terms: s.terms,
        gamma0_symbolic: s.symbolic,
        gamma2: None,
    })
}

/// `γ₀` and `γ₂ = γ₃`.
pub fn gamma2(a: &WeightMatrix, opts: &GammaOptions) -> Result<GammaReport, GammaError> {
    let mut report = gamma0(a, opts)?;
    let table = a.minor_table();
    let src = ScaledColumns { table: &table };
    let first = evaluate_sum(&src, Formula::SecondFirst, opts.force_symbolic)?;

    let mut removed = Vec::new();
    let mut second = BigRational::zero();
    for p in 0..a.ncols() {
        let ap = a.remove_column(p).expect("column index in range");
        let g = ap.faithfulness().gcd;
        let value = if g.is_zero() {
            BigRational::zero()
        } else {
            leading_sum(&ap, opts.force_symbolic)?.value
        };
        second += opts.kappa.kappa(&g) * &value;
        removed.push(RemovedColumn { column: p, gcd: g, gamma0: value });
    }
    report.gamma2 = Some(Gamma2Parts {
        value: &first.value + &second,
        first_sum: first.value,
        second_sum: second,
        kappa: opts.kappa,
        first_terms: first.terms,
        removed_columns: removed,
    });
    Ok(report)
}

/// `(γ₀^off, γ₁^off, γ₂^off, γ₃^off)` from the on-shell coefficients.
pub fn gamma_off(a: &WeightMatrix, opts: &GammaOptions) -> Result<[BigRational; 4], GammaError> {
    let r = gamma2(a, opts)?;
    let g0 = r.gamma0.clone();
    let g2 = r.gamma2.expect("gamma2 computed").value;
    Ok(off_shell_from(&g0, &g2))
}

pub fn off_shell_from(g0: &BigRational, g2: &BigRational) -> [BigRational; 4] {
    let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    let four = q(4, 1);
    [
        g0 / &four,
        g0 / &four,
        (g0 * q(3, 1) + g2 * q(4, 1)) / q(16, 1),
        (g0 + g2 * q(4, 1)) / q(8, 1),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn m(top: &[i64], bottom: &[i64]) -> WeightMatrix {
        WeightMatrix::from_rows(top, bottom)
    }

    #[test]
    fn small_generic_example() {
        let a = m(&[1, 2, 3], &[0, 1, 1]);
        let r = gamma2(&a, &GammaOptions::default()).unwrap();
        assert_eq!(r.gamma0, q(1, 3));
        let values: Vec<BigRational> = r.gamma0_terms.iter().map(|t| t.value.clone().unwrap()).collect();
        let mut sorted = values.clone();
        sorted.sort();
        assert_eq!(sorted, vec![q(-1, 3), q(-1, 3), q(1, 1)]);
        let g2 = r.gamma2.unwrap();
        assert_eq!(g2.value, q(2, 9));
        assert_eq!(g2.second_sum, q(0, 1));
        let mut firsts: Vec<BigRational> = g2.first_terms.iter().map(|t| t.value.clone().unwrap()).collect();
        firsts.sort();
        assert_eq!(firsts, vec![q(0, 1), q(1, 9), q(1, 9)]);
    }

    #[test]
    fn off_shell_values() {
        let a = m(&[1, 2, 3], &[0, 1, 1]);
        let off = gamma_off(&a, &GammaOptions::default()).unwrap();
        assert_eq!(off, [q(1, 12), q(1, 12), q(17, 144), q(11, 72)]);
        let zero = off_shell_from(&q(0, 1), &q(0, 1));
        assert!(zero.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn removed_column_data() {
        let a = m(&[1, 3, 4], &[0, 1, 2]);
        let r = gamma2(&a, &GammaOptions::default()).unwrap();
        let cols = r.gamma2.unwrap().removed_columns;
        let gcds: Vec<BigInt> = cols.iter().map(|c| c.gcd.clone()).collect();
        assert_eq!(gcds, vec![BigInt::from(2), BigInt::from(2), BigInt::from(1)]);
        assert_eq!(cols[0].gamma0, q(1, 2));
        assert_eq!(cols[1].gamma0, q(1, 2));
        let theorem = gamma2(&a, &GammaOptions { force_symbolic: false, kappa: KappaVariant::Theorem }).unwrap();
        let proof = gamma2(&a, &GammaOptions { force_symbolic: false, kappa: KappaVariant::Proof }).unwrap();
        assert_eq!(theorem.gamma2.unwrap().second_sum, q(1, 12));
        assert_eq!(proof.gamma2.unwrap().second_sum, q(1, 4));
    }

    #[test]
    fn degenerate_by_scaling() {
        let r = gamma0(&m(&[1, 1, 1], &[0, 1, 1]), &GammaOptions::default()).unwrap();
        assert_eq!(r.gamma0, q(1, 2));
        assert!(r.gamma0_terms.iter().all(|t| t.singular));
        assert!(r.gamma0_symbolic.is_some());
    }

    #[test]
    fn symbolic_path_agrees_on_generic_input() {
        for (top, bottom) in [(vec![1, 2, 3], vec![0, 1, 1]), (vec![4, 1, 6], vec![1, 1, 1]), (vec![1, 2, 3, 4], vec![0, 1, -1, 3])] {
            let a = m(&top, &bottom);
            let fast = gamma2(&a, &GammaOptions::default()).unwrap();
            let slow = gamma2(&a, &GammaOptions { force_symbolic: true, kappa: DEFAULT_KAPPA }).unwrap();
            assert_eq!(fast.gamma0, slow.gamma0, "{a}");
            assert_eq!(fast.gamma2.unwrap().value, slow.gamma2.unwrap().value, "{a}");
        }
    }

    #[test]
    fn errors() {
        assert_eq!(gamma0(&m(&[1, 2], &[0, 1]), &GammaOptions::default()), Err(GammaError::TooFewColumns(2)));
        assert_eq!(gamma0(&m(&[2, 0, 2], &[0, 2, 2]), &GammaOptions::default()), Err(GammaError::NotFaithful));
        assert_eq!(gamma0(&m(&[-1, 0, 1], &[0, -1, 1]), &GammaOptions::default()), Err(GammaError::NotStandardForm));
    }

    /// With the three positive minors as independent variables, the sum
    /// for three columns collapses to `1 / (c_pq + c_pr + c_qr)`.
    #[test]
    fn three_column_numerator_is_one() {
        struct Free {
            sign: [[i64; 3]; 3],
            var: [[usize; 3]; 3],
        }
        impl Minors for Free {
            fn n(&self) -> usize {
                3
            }
            fn nvars(&self) -> usize {
                3
            }
            fn exact(&self, i: usize, j: usize) -> BigInt {
                BigInt::from(self.sign[i][j])
            }
            fn symbolic(&self, i: usize, j: usize) -> MPoly {
                if i == j {
                    return MPoly::zero();
                }
                let mut e = vec![0; 3];
                e[self.var[i][j]] = 1;
                MPoly::term(e, q(self.sign[i][j], 1))
            }
        }
        for (top, bottom) in [(vec![1, 2, 3], vec![0, 1, 1]), (vec![4, 1, 6], vec![1, 1, 1]), (vec![1, 5, 2], vec![3, -2, 7])] {
            let a = m(&top, &bottom);
            let t = a.minor_table();
            let mut sign = [[0i64; 3]; 3];
            let mut var = [[0usize; 3]; 3];
            for (v, (i, j)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
                let s = if t.get(i, j).is_positive() { 1 } else { -1 };
                sign[i][j] = s;
                sign[j][i] = -s;
                var[i][j] = v;
                var[j][i] = v;
            }
            let src = Free { sign, var };
            let terms: Vec<SymTerm> = (0..3)
                .flat_map(|i| (0..3).map(move |j| (i, j)))
                .filter(|&(i, j)| i != j && sign[i][j] > 0)
                .map(|(i, j)| symbolic_term(&src, Formula::Leading { exponent: 1 }, i, j))
                .collect();
            let mut f = combine(3, terms);
            f.cancel(true).unwrap();
            let linear = (0..3).fold(MPoly::zero(), |acc, v| {
                let mut e = vec![0; 3];
                e[v] = 1;
                acc.add(&MPoly::term(e, q(1, 1)))
            });
            // f = 1 / (x0 + x1 + x2)
            assert_eq!(f.numerator.mul(&linear), f.denominator(), "{a}: {f}");
        }
    }

    #[test]
    fn exact_division() {
        let x = MPoly::term(vec![1, 0], q(1, 1));
        let y = MPoly::term(vec![0, 1], q(1, 1));
        let p = x.add(&y).mul(&x.sub(&y));
        assert_eq!(p.div_exact(&x.sub(&y)), Some(x.add(&y)));
        assert_eq!(p.div_exact(&x), None);
    }
}
