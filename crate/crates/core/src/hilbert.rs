//! Assembly of the on-shell and off-shell Hilbert series.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::oracle::{self, OracleError};
use crate::series::{
    self, canonicalize_sum, laurent_at_one, normalize, normalize_diagonal, phi_term,
    substitute_diagonal, u_op_compact, Axis, HilbertSeries, LaurentExpansion, SeriesError,
    UnivariateRational,
};
use crate::weights::{BasisChangeLog, GenericizeOutcome, WeightError, WeightMatrix};

pub const DEFAULT_GENERICIZE_BOUND: u32 = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HilbertError {
    #[error("weight matrix is not faithful (rank {rank}, gcd of minors {gcd})")]
    NotFaithful { rank: usize, gcd: BigInt },
    #[error("need at least 3 columns, got {0}")]
    TooFewColumns(usize),
    #[error("degenerate matrix has no generic equivalent ({0})")]
    NotGenericizable(String),
    #[error(transparent)]
    Weights(#[from] WeightError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("consistency check failed: {0}")]
    Inconsistent(String),
}

/// The generic representative that the pipeline actually runs on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prepared {
    pub matrix: WeightMatrix,
    /// Moves from the input to `matrix`; empty if the input was generic.
    pub log: BasisChangeLog,
}

/// Checks the hypotheses and finds a generic standard-form equivalent.
pub fn prepare(a: &WeightMatrix, bound: u32) -> Result<Prepared, HilbertError> {
    let f = a.faithfulness();
    if !f.faithful {
        return Err(HilbertError::NotFaithful {
            rank: f.rank,
            gcd: f.gcd,
        });
    }
    if a.ncols() < 3 {
        return Err(HilbertError::TooFewColumns(a.ncols()));
    }
    if let Some(i) = a.zero_column() {
        return Err(WeightError::ZeroColumn(i).into());
    }
    let (std, mut log) = a.to_standard_form()?;
    match std.try_genericize(bound) {
        GenericizeOutcome::Found { matrix, log: more } => {
            log.moves.extend(more.moves);
            debug_assert_eq!(log.replay(a), matrix);
            Ok(Prepared { matrix, log })
        }
        GenericizeOutcome::Impossible { triple } => Err(HilbertError::NotGenericizable(format!(
            "columns {}, {}, {} are obstructed",
            triple[0] + 1,
            triple[1] + 1,
            triple[2] + 1
        ))),
        GenericizeOutcome::NotFound { bound } => Err(HilbertError::NotGenericizable(format!(
            "none found with coefficients up to {bound}"
        ))),
    }
}

/// `(U_{d,s} ∘ U_{d,t})(Φ_ij)` at `s = t` for one pair with `d = d_ij > 0`.
pub fn pair_term(a: &WeightMatrix, i: usize, j: usize) -> Result<UnivariateRational, SeriesError> {
    let phi = phi_term(a, i, j)?;
    let d = a.minor(i, j);
    let d: u32 = num_traits::ToPrimitive::to_u32(&d).ok_or(SeriesError::ExponentOverflow)?;
    let f = u_op_compact(&normalize(&phi, Axis::T), d, Axis::T)?;
    let f = u_op_compact(&normalize(&f, Axis::S), d, Axis::S)?;
    substitute_diagonal(&normalize_diagonal(&f)?)
}

/// On-shell series of a generic standard-form matrix.
fn hilbert_on_generic(a: &WeightMatrix) -> Result<HilbertSeries, HilbertError> {
    let pairs = a.minor_table().positive_pairs();
    let terms: Vec<UnivariateRational> = pairs
        .par_iter()
        .map(|&(i, j)| pair_term(a, i, j))
        .collect::<Result<_, _>>()?;
    Ok(canonicalize_sum(&terms)?)
}

/// `Hilb^on_A(t)` in canonical form.
pub fn hilbert_on(a: &WeightMatrix) -> Result<HilbertSeries, HilbertError> {
    hilbert_on_with_bound(a, DEFAULT_GENERICIZE_BOUND)
}

pub fn hilbert_on_with_bound(a: &WeightMatrix, bound: u32) -> Result<HilbertSeries, HilbertError> {
    let p = prepare(a, bound)?;
    hilbert_on_generic(&p.matrix)
}

/// `Hilb^off_A(t) = Hilb^on_A(t) / (1 - t²)²`.
pub fn hilbert_off(a: &WeightMatrix) -> Result<HilbertSeries, HilbertError> {
    Ok(hilbert_on(a)?.times_binomial_power(2, -2)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeriesOutcome {
    Exact(HilbertSeries),
    /// Oracle coefficients `0..=degree`; no closed form is available.
    Truncated { on_shell: Vec<BigInt>, reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertReport {
    pub on_shell: HilbertSeries,
    pub off_shell: HilbertSeries,
    pub pole_order: i64,
    pub gammas: LaurentExpansion,
    pub off_shell_gammas: LaurentExpansion,
    pub genericized_from: Option<BasisChangeLog>,
    /// Whether the on-shell series describes the quotient of the input matrix.
    pub describes_m0: bool,
    pub palindromic: bool,
}

impl HilbertReport {
    pub fn to_json(&self) -> Value {
        let rats = |l: &LaurentExpansion| l.coefficients.iter().map(|c| c.to_string()).collect::<Vec<_>>();
        json!({
            "on_shell": self.on_shell.to_json(),
            "off_shell": self.off_shell.to_json(),
            "pole_order": self.pole_order,
            "gammas": rats(&self.gammas),
            "off_shell_pole_order": self.off_shell_gammas.pole_order,
            "off_shell_gammas": rats(&self.off_shell_gammas),
            "genericized_from": self.genericized_from.as_ref().map(|l| l.to_string()),
            "describes_M0": self.describes_m0,
            "palindromic": self.palindromic,
        })
    }
}

/// Full report with Laurent coefficients `γ_0..=γ_max`.
///
/// Fails with [`HilbertError::Inconsistent`] if the pole order, `γ₁ = 0`,
/// `γ₂ = γ₃` or numerator palindromy does not hold.
pub fn analyze(a: &WeightMatrix, max_order: usize) -> Result<HilbertReport, HilbertError> {
    analyze_with_bound(a, max_order, DEFAULT_GENERICIZE_BOUND)
}

pub fn analyze_with_bound(a: &WeightMatrix, max_order: usize, bound: u32) -> Result<HilbertReport, HilbertError> {
    let p = prepare(a, bound)?;
    let on = hilbert_on_generic(&p.matrix)?;
    let off = on.times_binomial_power(2, -2)?;
    let order = max_order.max(3);
    let gammas = laurent_at_one(&on, order);
    let off_gammas = laurent_at_one(&off, order);
    let n = a.ncols() as i64;
    let palindromic = on.is_palindromic();

    if gammas.pole_order != 2 * n - 4 {
        return Err(HilbertError::Inconsistent(format!(
            "pole order {} instead of {}",
            gammas.pole_order,
            2 * n - 4
        )));
    }
    if !gammas.coefficients[1].is_zero() {
        return Err(HilbertError::Inconsistent(format!("γ1 = {}", gammas.coefficients[1])));
    }
    if gammas.coefficients[2] != gammas.coefficients[3] {
        return Err(HilbertError::Inconsistent(format!(
            "γ2 = {} but γ3 = {}",
            gammas.coefficients[2], gammas.coefficients[3]
        )));
    }
    if !palindromic {
        return Err(HilbertError::Inconsistent("numerator is not palindromic".into()));
    }
    if on.numerator.first().map(|c| c.is_one()) != Some(true) {
        return Err(HilbertError::Inconsistent("constant term is not 1".into()));
    }

    let mut gammas = gammas;
    gammas.coefficients.truncate(max_order + 1);
    let mut off_gammas = off_gammas;
    off_gammas.coefficients.truncate(max_order + 1);
    Ok(HilbertReport {
        on_shell: on,
        off_shell: off,
        pole_order: gammas.pole_order,
        gammas,
        off_shell_gammas: off_gammas,
        genericized_from: if p.log.is_empty() { None } else { Some(p.log) },
        describes_m0: a.shell_support().full,
        palindromic,
    })
}

/// Closed form when one is reachable, otherwise the oracle's truncated
/// on-shell coefficients.
pub fn series_or_truncated(a: &WeightMatrix, bound: u32, oracle_degree: usize) -> Result<SeriesOutcome, HilbertError> {
    match hilbert_on_with_bound(a, bound) {
        Ok(h) => Ok(SeriesOutcome::Exact(h)),
        Err(HilbertError::NotGenericizable(reason)) => {
            let s = oracle::oracle_series(a, oracle_degree)?;
            Ok(SeriesOutcome::Truncated {
                on_shell: s.on_shell.into_iter().map(BigInt::from).collect(),
                reason,
            })
        }
        Err(e) => Err(e),
    }
}

/// Sum of the pair terms before canonicalization, scaled by `c`; exposed for
/// cross-checks of the assembly constant.
pub fn scaled_pair_sum(a: &WeightMatrix, c: &BigRational) -> Result<HilbertSeries, HilbertError> {
    let mut terms = Vec::new();
    for (i, j) in a.minor_table().positive_pairs() {
        let mut t = pair_term(a, i, j)?;
        t.scalar *= c;
        terms.push(t);
    }
    Ok(series::canonicalize_sum(&terms)?)
}
