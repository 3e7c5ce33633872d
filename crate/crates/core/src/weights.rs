//! 2×n integer weight matrices of 2-torus representations.
//!
//! Columns are indexed from 0 in the API; text and report output uses the
//! 1-based labels conventional in the literature.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeightError {
    #[error("cannot parse weight matrix: {0}")]
    Parse(String),
    #[error("weight matrix has rank {0} < 2")]
    RankDeficient(usize),
    #[error("column {0} is zero")]
    ZeroColumn(usize),
    #[error("column index {0} out of range")]
    ColumnOutOfRange(usize),
}

/// A 2×n weight matrix with arbitrary-precision entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightMatrix {
    top: Vec<BigInt>,
    bottom: Vec<BigInt>,
}

impl WeightMatrix {
    pub fn new(top: Vec<BigInt>, bottom: Vec<BigInt>) -> Result<Self, WeightError> {
        if top.len() != bottom.len() {
            return Err(WeightError::Parse(format!(
                "rows have different lengths {} and {}",
                top.len(),
                bottom.len()
            )));
        }
        if top.is_empty() {
            return Err(WeightError::Parse("matrix has no columns".into()));
        }
        Ok(Self { top, bottom })
    }

    /// Convenience constructor for small literal matrices.
    ///
    /// Panics if the rows have different lengths or are empty.
    pub fn from_rows(top: &[i64], bottom: &[i64]) -> Self {
        Self::new(
            top.iter().map(|&x| BigInt::from(x)).collect(),
            bottom.iter().map(|&x| BigInt::from(x)).collect(),
        )
        .expect("rows must be non-empty and of equal length")
    }

    pub fn ncols(&self) -> usize {
        self.top.len()
    }

    pub fn top(&self) -> &[BigInt] {
        &self.top
    }

    pub fn bottom(&self) -> &[BigInt] {
        &self.bottom
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        match r {
            0 => &self.top,
            1 => &self.bottom,
            _ => panic!("weight matrices have two rows"),
        }
    }

    pub fn column(&self, i: usize) -> (&BigInt, &BigInt) {
        (&self.top[i], &self.bottom[i])
    }

    /// The 2×2 minor `d_ij = a_1i a_2j - a_2i a_1j`.
    pub fn minor(&self, i: usize, j: usize) -> BigInt {
        &self.top[i] * &self.bottom[j] - &self.bottom[i] * &self.top[j]
    }

    pub fn minor_table(&self) -> MinorTable {
        let n = self.ncols();
        let mut values = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = self.minor(i, j);
                values[j * n + i] = -&d;
                values[i * n + j] = d;
            }
        }
        MinorTable { n, values }
    }

    pub fn zero_column(&self) -> Option<usize> {
        (0..self.ncols()).find(|&i| self.top[i].is_zero() && self.bottom[i].is_zero())
    }

    pub fn is_standard_form(&self) -> bool {
        self.top.iter().all(|a| a.is_positive())
    }

    pub fn faithfulness(&self) -> Faithfulness {
        let table = self.minor_table();
        let mut g = BigInt::zero();
        for (_, _, d) in table.upper() {
            g = g.gcd(d);
        }
        let rank = if !g.is_zero() {
            2
        } else if self.top.iter().chain(&self.bottom).any(|x| !x.is_zero()) {
            1
        } else {
            0
        };
        let faithful = rank == 2 && g.is_one();
        Faithfulness { rank, gcd: g, faithful }
    }

    pub fn classify(&self) -> Classification {
        let f = self.faithfulness();
        let kind = if !self.is_standard_form() {
            GenericityClass::NotStandardForm
        } else {
            let table = self.minor_table();
            if !self.first_row_distinct() || table.find_triple_sum_zero().is_some() {
                GenericityClass::Degenerate
            } else if table.find_cyclic_sum_zero().is_some() {
                GenericityClass::Generic
            } else {
                GenericityClass::CompletelyGeneric
            }
        };
        Classification {
            kind,
            faithful: f.faithful,
            rank: f.rank,
        }
    }

    fn first_row_distinct(&self) -> bool {
        let set: BTreeSet<&BigInt> = self.top.iter().collect();
        set.len() == self.top.len()
    }

    /// Brings a rank-2 matrix into standard form.
    ///
    /// Adds `k` times the second row to the first for the first `k` in
    /// `0, 1, -1, 2, -2, ...` that leaves no zero in the first row, then flips
    /// every column whose first entry is negative.
    pub fn to_standard_form(&self) -> Result<(WeightMatrix, BasisChangeLog), WeightError> {
        if let Some(i) = self.zero_column() {
            return Err(WeightError::ZeroColumn(i));
        }
        let f = self.faithfulness();
        if f.rank < 2 {
            return Err(WeightError::RankDeficient(f.rank));
        }
        let mut log = BasisChangeLog::default();
        let mut k = 0i64;
        loop {
            let kb = BigInt::from(k);
            if self
                .top
                .iter()
                .zip(&self.bottom)
                .all(|(a, b)| !(a + &kb * b).is_zero())
            {
                break;
            }
            k = if k > 0 { -k } else { -k + 1 };
        }
        if k != 0 {
            log.push(BasisMove::AddRowMultiple(BigInt::from(k)));
        }
        let shifted = log.replay(self);
        let negative: Vec<usize> = (0..shifted.ncols())
            .filter(|&i| shifted.top[i].is_negative())
            .collect();
        if !negative.is_empty() {
            log.push(BasisMove::FlipColumns(negative));
        }
        Ok((log.replay(self), log))
    }

    /// Looks for a generic matrix with an equivalent cotangent lift.
    ///
    /// Candidates are first rows `(a, b)·A` for primitive `(a, b)` with
    /// `max(|a|, |b|) <= bound`, both orientations, followed by the sign flips
    /// that restore standard form.
    pub fn try_genericize(&self, bound: u32) -> GenericizeOutcome {
        if self.ncols() < 3 {
            return GenericizeOutcome::NotFound { bound };
        }
        if matches!(
            self.classify().kind,
            GenericityClass::Generic | GenericityClass::CompletelyGeneric
        ) {
            return GenericizeOutcome::Found {
                matrix: self.clone(),
                log: BasisChangeLog::default(),
            };
        }
        if let Some(triple) = self.collinearity_obstruction() {
            return GenericizeOutcome::Impossible { triple };
        }
        if self.zero_column().is_some() || self.faithfulness().rank < 2 {
            return GenericizeOutcome::NotFound { bound };
        }
        for (a, b) in primitive_vectors(bound as i64) {
            for orientation in [1i64, -1] {
                let mut log = unimodular_moves(a, b, orientation);
                let m = log.replay(self);
                if m.top.iter().any(|x| x.is_zero()) {
                    continue;
                }
                let negative: Vec<usize> =
                    (0..m.ncols()).filter(|&i| m.top[i].is_negative()).collect();
                if !negative.is_empty() {
                    log.push(BasisMove::FlipColumns(negative));
                }
                let candidate = log.replay(self);
                if matches!(
                    candidate.classify().kind,
                    GenericityClass::Generic | GenericityClass::CompletelyGeneric
                ) {
                    return GenericizeOutcome::Found {
                        matrix: candidate,
                        log,
                    };
                }
            }
        }
        GenericizeOutcome::NotFound { bound }
    }

    /// A column triple for which at least two of the four sign classes
    /// `{a_i, ±a_j, ±a_k}` (up to global sign) are collinear point sets.
    ///
    /// Whatever the standard form, one of those classes is then tested by
    /// the genericity condition, so no basis change can reach a generic matrix.
    pub fn collinearity_obstruction(&self) -> Option<[usize; 3]> {
        let n = self.ncols();
        let t = self.minor_table();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let (dij, dik, djk) = (t.get(i, j), t.get(i, k), t.get(j, k));
                    let mut collinear = 0;
                    for (sj, sk) in [(1i32, 1i32), (-1, 1), (1, -1), (-1, -1)] {
                        // points a_i, sj·a_j, sk·a_k
                        let s = mul_sign(sj * sk, djk) + mul_sign(sj, dij) - mul_sign(sk, dik);
                        if s.is_zero() {
                            collinear += 1;
                        }
                    }
                    if collinear >= 2 {
                        return Some([i, j, k]);
                    }
                }
            }
        }
        None
    }

    /// Columns that take a nonzero value somewhere on the shell.
    ///
    /// Column `i` qualifies iff some `r >= 0` with `A r = 0` has `r_i > 0`.
    /// Extreme rays of that cone are supported on at most three columns, so it
    /// suffices to test antiparallel pairs and positively dependent triples.
    pub fn shell_support(&self) -> ShellSupport {
        let n = self.ncols();
        let t = self.minor_table();
        let mut columns = BTreeSet::new();
        for i in 0..n {
            if self.top[i].is_zero() && self.bottom[i].is_zero() {
                columns.insert(i);
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if t.get(i, j).is_zero() {
                    let dot = &self.top[i] * &self.top[j] + &self.bottom[i] * &self.bottom[j];
                    if dot.is_negative() {
                        columns.insert(i);
                        columns.insert(j);
                    }
                }
                for k in (j + 1)..n {
                    // d_jk a_i + d_ki a_j + d_ij a_k = 0
                    let w = [t.get(j, k).clone(), t.get(k, i).clone(), t.get(i, j).clone()];
                    let all_pos = w.iter().all(|x| x.is_positive());
                    let all_neg = w.iter().all(|x| x.is_negative());
                    if all_pos || all_neg {
                        columns.insert(i);
                        columns.insert(j);
                        columns.insert(k);
                    }
                }
            }
        }
        let full = columns.len() == n;
        ShellSupport { columns, full }
    }

    pub fn remove_column(&self, p: usize) -> Result<WeightMatrix, WeightError> {
        if p >= self.ncols() {
            return Err(WeightError::ColumnOutOfRange(p));
        }
        let mut top = self.top.clone();
        let mut bottom = self.bottom.clone();
        top.remove(p);
        bottom.remove(p);
        WeightMatrix::new(top, bottom)
    }

    /// Column `k` of the result is column `perm[k]` of `self`.
    pub fn permute_columns(&self, perm: &[usize]) -> WeightMatrix {
        assert_eq!(perm.len(), self.ncols());
        WeightMatrix {
            top: perm.iter().map(|&p| self.top[p].clone()).collect(),
            bottom: perm.iter().map(|&p| self.bottom[p].clone()).collect(),
        }
    }

    pub fn negate_columns(&self, cols: &[usize]) -> WeightMatrix {
        let mut m = self.clone();
        for &c in cols {
            m.top[c] = -&m.top[c];
            m.bottom[c] = -&m.bottom[c];
        }
        m
    }

    /// Entries as machine integers, if they all fit.
    pub fn to_i64_rows(&self) -> Option<(Vec<i64>, Vec<i64>)> {
        let top = self.top.iter().map(|x| x.to_i64()).collect::<Option<Vec<_>>>()?;
        let bottom = self.bottom.iter().map(|x| x.to_i64()).collect::<Option<Vec<_>>>()?;
        Some((top, bottom))
    }
}

fn mul_sign(s: i32, x: &BigInt) -> BigInt {
    if s < 0 {
        -x
    } else {
        x.clone()
    }
}

impl fmt::Display for WeightMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |row: &[BigInt]| {
            row.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        write!(f, "{}; {}", join(&self.top), join(&self.bottom))
    }
}

impl FromStr for WeightMatrix {
    type Err = WeightError;

    /// Rows separated by `;`, entries by whitespace or `,`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let rows: Vec<&str> = s.split(';').collect();
        if rows.len() != 2 {
            return Err(WeightError::Parse(format!(
                "expected 2 rows separated by ';', found {}",
                rows.len()
            )));
        }
        let parse_row = |row: &str| -> Result<Vec<BigInt>, WeightError> {
            row.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|tok| !tok.is_empty())
                .map(|tok| {
                    tok.parse::<BigInt>()
                        .map_err(|_| WeightError::Parse(format!("bad entry '{tok}'")))
                })
                .collect()
        };
        WeightMatrix::new(parse_row(rows[0])?, parse_row(rows[1])?)
    }
}

/// Antisymmetric table of all 2×2 minors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorTable {
    n: usize,
    values: Vec<BigInt>,
}

impl MinorTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.values[i * self.n + j]
    }

    /// `(i, j, d_ij)` for `i < j`.
    pub fn upper(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> + '_ {
        (0..self.n).flat_map(move |i| ((i + 1)..self.n).map(move |j| (i, j, self.get(i, j))))
    }

    /// Ordered pairs `(i, j)` with `d_ij > 0`, sorted.
    pub fn positive_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j && self.get(i, j).is_positive() {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Checks `d_{i1 i2} d_{i0 j} - d_{i0 i2} d_{i1 j} + d_{i0 i1} d_{i2 j} = 0`.
    pub fn plucker_holds(&self, i0: usize, i1: usize, i2: usize, j: usize) -> bool {
        let lhs = self.get(i1, i2) * self.get(i0, j) - self.get(i0, i2) * self.get(i1, j)
            + self.get(i0, i1) * self.get(i2, j);
        lhs.is_zero()
    }

    /// An ordered triple of distinct indices with `d_ij + d_ik + d_jk = 0`.
    pub fn find_triple_sum_zero(&self) -> Option<(usize, usize, usize)> {
        self.ordered_triples().find(|&(i, j, k)| {
            (self.get(i, j) + self.get(i, k) + self.get(j, k)).is_zero()
        })
    }

    /// A triple with `d_ij + d_jk + d_ki = 0`.
    pub fn find_cyclic_sum_zero(&self) -> Option<(usize, usize, usize)> {
        self.ordered_triples().find(|&(i, j, k)| {
            (self.get(i, j) + self.get(j, k) + self.get(k, i)).is_zero()
        })
    }

    fn ordered_triples(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |i| {
            (0..n).flat_map(move |j| {
                (0..n)
                    .filter(move |&k| i != j && j != k && i != k)
                    .map(move |k| (i, j, k))
            })
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Faithfulness {
    pub rank: usize,
    /// gcd of all minors; 0 when the rank is below 2.
    pub gcd: BigInt,
    pub faithful: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GenericityClass {
    NotStandardForm,
    Degenerate,
    Generic,
    CompletelyGeneric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub kind: GenericityClass,
    pub faithful: bool,
    pub rank: usize,
}

impl Classification {
    pub fn is_generic(&self) -> bool {
        matches!(
            self.kind,
            GenericityClass::Generic | GenericityClass::CompletelyGeneric
        )
    }
}

/// One change of basis of the cotangent-lifted representation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasisMove {
    /// row 1 ← row 1 + k·row 2
    AddRowMultiple(BigInt),
    SwapRows,
    /// Negates row 0 or row 1.
    NegateRow(usize),
    /// Multiplies the listed columns by −1.
    FlipColumns(Vec<usize>),
}

impl BasisMove {
    pub fn apply(&self, m: &WeightMatrix) -> WeightMatrix {
        let mut out = m.clone();
        match self {
            BasisMove::AddRowMultiple(k) => {
                for (a, b) in out.top.iter_mut().zip(&m.bottom) {
                    *a += k * b;
                }
            }
            BasisMove::SwapRows => std::mem::swap(&mut out.top, &mut out.bottom),
            BasisMove::NegateRow(r) => {
                let row = if *r == 0 { &mut out.top } else { &mut out.bottom };
                for x in row.iter_mut() {
                    *x = -&*x;
                }
            }
            BasisMove::FlipColumns(cols) => return m.negate_columns(cols),
        }
        out
    }
}

impl fmt::Display for BasisMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisMove::AddRowMultiple(k) => write!(f, "row1 += {k}*row2"),
            BasisMove::SwapRows => write!(f, "swap rows"),
            BasisMove::NegateRow(r) => write!(f, "negate row{}", r + 1),
            BasisMove::FlipColumns(cols) => {
                let labels: Vec<String> = cols.iter().map(|c| (c + 1).to_string()).collect();
                write!(f, "flip columns {}", labels.join(","))
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisChangeLog {
    pub moves: Vec<BasisMove>,
}

impl BasisChangeLog {
    pub fn push(&mut self, mv: BasisMove) {
        self.moves.push(mv);
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn replay(&self, m: &WeightMatrix) -> WeightMatrix {
        self.moves.iter().fold(m.clone(), |acc, mv| mv.apply(&acc))
    }
}

impl fmt::Display for BasisChangeLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.moves.is_empty() {
            return write!(f, "(none)");
        }
        let parts: Vec<String> = self.moves.iter().map(|m| m.to_string()).collect();
        write!(f, "{}", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenericizeOutcome {
    Found {
        matrix: WeightMatrix,
        log: BasisChangeLog,
    },
    /// No basis change can help; the triple witnesses the obstruction.
    Impossible { triple: [usize; 3] },
    NotFound { bound: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShellSupport {
    pub columns: BTreeSet<usize>,
    /// Every coordinate is nonzero somewhere on the shell, so the moment map
    /// components generate the vanishing ideal of the shell.
    pub full: bool,
}

/// Primitive `(a, b)` with `max(|a|, |b|) <= bound`, ordered by that norm.
fn primitive_vectors(bound: i64) -> Vec<(i64, i64)> {
    let mut out = vec![(1, 0)];
    for r in 1..=bound {
        let mut ring = Vec::new();
        for a in -r..=r {
            for b in -r..=r {
                if a.abs().max(b.abs()) == r && a.gcd(&b) == 1 {
                    ring.push((a, b));
                }
            }
        }
        ring.sort_by_key(|&(a, b)| (a.abs() + b.abs(), -a, -b));
        out.extend(ring);
    }
    out
}

/// Elementary moves realising a unimodular row map with first row `(a, b)`
/// and determinant `det` (±1).
fn unimodular_moves(a: i64, b: i64, det: i64) -> BasisChangeLog {
    // Complete (a, b) to [[a, b], [c, d]] with ad - bc = det.
    let ext = a.extended_gcd(&b);
    let g = ext.gcd;
    debug_assert_eq!(g.abs(), 1);
    // a x + b y = g  =>  c = -y·det/g, d = x·det/g
    let (c, d) = (-ext.y * det * g, ext.x * det * g);
    debug_assert_eq!(a * d - b * c, det);

    // Reduce M to the identity with left row operations, then invert.
    let mut m = [[a, b], [c, d]];
    let mut ops: Vec<BasisMove> = Vec::new();
    while m[1][0] != 0 {
        let q = Integer::div_floor(&m[0][0], &m[1][0]);
        if q != 0 {
            m[0][0] -= q * m[1][0];
            m[0][1] -= q * m[1][1];
            ops.push(BasisMove::AddRowMultiple(BigInt::from(-q)));
        }
        m.swap(0, 1);
        ops.push(BasisMove::SwapRows);
    }
    // Now m = [[±1, x], [0, ±1]].
    if m[0][0] < 0 {
        m[0][0] = -m[0][0];
        m[0][1] = -m[0][1];
        ops.push(BasisMove::NegateRow(0));
    }
    if m[1][1] < 0 {
        m[1][1] = -m[1][1];
        ops.push(BasisMove::NegateRow(1));
    }
    if m[0][1] != 0 {
        ops.push(BasisMove::AddRowMultiple(BigInt::from(-m[0][1])));
    }
    // E_k … E_1 M = I  =>  M = E_1^{-1} … E_k^{-1}; applying M applies E_k^{-1} first.
    let moves = ops
        .into_iter()
        .rev()
        .map(|op| match op {
            BasisMove::AddRowMultiple(k) => BasisMove::AddRowMultiple(-k),
            other => other,
        })
        .collect();
    BasisChangeLog { moves }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(top: &[i64], bottom: &[i64]) -> WeightMatrix {
        WeightMatrix::from_rows(top, bottom)
    }

    fn minors3(a: &WeightMatrix) -> (i64, i64, i64) {
        let t = a.minor_table();
        (
            t.get(0, 1).to_i64().unwrap(),
            t.get(0, 2).to_i64().unwrap(),
            t.get(1, 2).to_i64().unwrap(),
        )
    }

    #[test]
    fn minor_examples() {
        assert_eq!(minors3(&m(&[2, 1, 4], &[1, -1, 1])), (-3, -2, 5));
        assert_eq!(minors3(&m(&[4, 1, 6], &[1, 1, 1])), (3, -2, -5));
        let rep = m(&[3, 5, 3], &[7, 2, 7]);
        assert!(rep.minor(0, 2).is_zero());
        let t = rep.minor_table();
        assert_eq!(t.get(1, 0), &-t.get(0, 1));
    }

    #[test]
    fn faithfulness_examples() {
        let f = m(&[4, 1, 6], &[1, 1, 1]).faithfulness();
        assert_eq!((f.rank, f.gcd.clone(), f.faithful), (2, BigInt::from(1), true));
        let f = m(&[1, 2], &[2, 4]).faithfulness();
        assert_eq!((f.rank, f.gcd.clone(), f.faithful), (1, BigInt::zero(), false));
        let f = m(&[2, 0, 2], &[0, 2, 2]).faithfulness();
        assert_eq!((f.rank, f.gcd.clone(), f.faithful), (2, BigInt::from(4), false));
    }

    #[test]
    fn classify_examples() {
        use GenericityClass::*;
        assert_eq!(m(&[4, 1, 6], &[1, 1, 1]).classify().kind, Generic);
        assert_eq!(m(&[2, 1, 4], &[1, -1, 1]).classify().kind, Degenerate);
        assert_eq!(m(&[-1, 0, 1], &[0, -1, 1]).classify().kind, NotStandardForm);
        assert_eq!(m(&[1, 2, 3], &[0, 1, 1]).classify().kind, CompletelyGeneric);
        // equal first-row entries
        assert_eq!(m(&[1, 1, 2], &[0, 1, 1]).classify().kind, Degenerate);
    }

    #[test]
    fn standard_form_examples() {
        let a = m(&[-1, 0, 1], &[0, -1, 1]);
        let (s, log) = a.to_standard_form().unwrap();
        assert_eq!(s, m(&[1, 1, 2], &[0, 1, 1]));
        assert_eq!(
            log.moves,
            vec![
                BasisMove::AddRowMultiple(BigInt::from(1)),
                BasisMove::FlipColumns(vec![0, 1])
            ]
        );
        assert_eq!(log.replay(&a), s);

        let b = m(&[2, 1, 4], &[1, -1, 1]);
        let (s, log) = b.to_standard_form().unwrap();
        assert_eq!(s, b);
        assert!(log.is_empty());

        assert_eq!(
            m(&[1, 2], &[2, 4]).to_standard_form().unwrap_err(),
            WeightError::RankDeficient(1)
        );
        assert_eq!(
            m(&[1, 0, 2], &[0, 0, 1]).to_standard_form().unwrap_err(),
            WeightError::ZeroColumn(1)
        );
    }

    #[test]
    fn genericize_examples() {
        let a = m(&[2, 1, 4], &[1, -1, 1]);
        match a.try_genericize(10) {
            GenericizeOutcome::Found { matrix, log } => {
                assert!(matrix.classify().is_generic());
                assert_eq!(log.replay(&a), matrix);
                assert!(matrix.faithfulness().faithful);
            }
            other => panic!("expected a generic form, got {other:?}"),
        }
        assert!(matches!(
            m(&[1, 1, 1], &[0, 1, 1]).try_genericize(10),
            GenericizeOutcome::Impossible { .. }
        ));
        let g = m(&[4, 1, 6], &[1, 1, 1]);
        assert_eq!(
            g.try_genericize(10),
            GenericizeOutcome::Found {
                matrix: g.clone(),
                log: BasisChangeLog::default()
            }
        );
    }

    #[test]
    fn unimodular_moves_realise_first_row() {
        let a = m(&[3, -1, 4, 2], &[1, 5, -9, 7]);
        for (p, q) in primitive_vectors(6) {
            for det in [1, -1] {
                let log = unimodular_moves(p, q, det);
                let out = log.replay(&a);
                for c in 0..a.ncols() {
                    let expect = BigInt::from(p) * &a.top[c] + BigInt::from(q) * &a.bottom[c];
                    assert_eq!(out.top[c], expect);
                }
                // minors scale by the determinant
                assert_eq!(out.minor(0, 1), a.minor(0, 1) * BigInt::from(det));
            }
        }
    }

    #[test]
    fn shell_support_examples() {
        assert!(m(&[-1, 0, -1], &[0, -1, -1]).shell_support().columns.is_empty());
        let s = m(&[-1, 0, 1], &[0, -1, 1]).shell_support();
        assert_eq!(s.columns, BTreeSet::from([0, 1, 2]));
        assert!(s.full);
        let s = m(&[1, -1], &[1, -1]).shell_support();
        assert_eq!(s.columns, BTreeSet::from([0, 1]));
    }

    #[test]
    fn parse_and_display() {
        let a: WeightMatrix = "1 2 3; 0 1 1".parse().unwrap();
        assert_eq!(a, m(&[1, 2, 3], &[0, 1, 1]));
        let b: WeightMatrix = "-1,0, -1 ; 0 -1 -1".parse().unwrap();
        assert_eq!(b, m(&[-1, 0, -1], &[0, -1, -1]));
        assert_eq!(b.to_string().parse::<WeightMatrix>().unwrap(), b);
        assert!("1 2; 3".parse::<WeightMatrix>().is_err());
        assert!("1 2 3".parse::<WeightMatrix>().is_err());
        assert!("1 x; 3 4".parse::<WeightMatrix>().is_err());
    }
}
