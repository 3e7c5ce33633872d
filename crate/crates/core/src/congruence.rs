//! Smith normal form over ℤ and solution counts of homogeneous congruences.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};
use thiserror::Error;

use crate::weights::WeightMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CongruenceError {
    #[error("matrix is zero")]
    ZeroMatrix,
    #[error("modulus must exceed 1, got {0}")]
    BadModulus(BigInt),
    #[error("minor d_{{{i}{j}}} vanishes", i = .0 + 1, j = .1 + 1)]
    SingularPair(usize, usize),
    #[error("need at least 3 columns and rank 2")]
    Unsupported,
}

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Self {
            rows: r,
            cols: c,
            data: rows.iter().flatten().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match ((k + 1)..n).find(|&r| !m[(r, k)].is_zero()) {
                    Some(r) => {
                        m.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
            }
            prev = m[(k, k)].clone();
        }
        sign * &m[(n - 1, n - 1)]
    }

    /// gcd of all `k`×`k` minors (`Δ_k`); 0 if they all vanish.
    pub fn minor_gcd(&self, k: usize) -> BigInt {
        let mut g = BigInt::zero();
        for rs in combinations(self.rows, k) {
            for cs in combinations(self.cols, k) {
                let mut sub = IntMatrix::zeros(k, k);
                for (a, &r) in rs.iter().enumerate() {
                    for (b, &c) in cs.iter().enumerate() {
                        sub[(a, b)] = self[(r, c)].clone();
                    }
                }
                g = g.gcd(&sub.determinant());
            }
        }
        g
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += c · row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        for j in 0..self.cols {
            let v = c * &self[(src, j)];
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += c · col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        for i in 0..self.rows {
            let v = c * &self[(i, src)];
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            self[(r, j)] = -&self[(r, j)];
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            self[(i, c)] = -&self[(i, c)];
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl From<&WeightMatrix> for IntMatrix {
    fn from(a: &WeightMatrix) -> Self {
        let n = a.ncols();
        let mut m = IntMatrix::zeros(2, n);
        for j in 0..n {
            m[(0, j)] = a.top()[j].clone();
            m[(1, j)] = a.bottom()[j].clone();
        }
        m
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// `M = P · diag(S) · Q` with `P`, `Q` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub p: IntMatrix,
    /// Diagonal entries `a_1 | a_2 | …`, nonnegative, length `min(m, n)`.
    pub diagonal: Vec<BigInt>,
    pub q: IntMatrix,
    /// Number of nonzero diagonal entries.
    pub rank: usize,
}

impl SmithDecomposition {
    /// The rectangular diagonal matrix `S`.
    pub fn s_matrix(&self) -> IntMatrix {
        let mut s = IntMatrix::zeros(self.p.ncols(), self.q.nrows());
        for (i, a) in self.diagonal.iter().enumerate() {
            s[(i, i)] = a.clone();
        }
        s
    }

    pub fn reconstruct(&self) -> IntMatrix {
        self.p.mul(&self.s_matrix()).mul(&self.q)
    }
}

/// Smith normal form by smallest-pivot elimination.
///
/// The transforms are accumulated as inverses so that `P·B·Q = M` holds for the
/// working matrix `B` after every elementary step.
pub fn smith_normal_form(m: &IntMatrix) -> Result<SmithDecomposition, CongruenceError> {
    if m.is_zero() {
        return Err(CongruenceError::ZeroMatrix);
    }
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut b = m.clone();
    let mut p = IntMatrix::identity(rows);
    let mut q = IntMatrix::identity(cols);

    // B ← E·B with E: row i += c·row j  ⇒  P ← P·E⁻¹: col j of P −= c·col i
    let row_add = |b: &mut IntMatrix, p: &mut IntMatrix, i: usize, j: usize, c: &BigInt| {
        b.add_row(i, j, c);
        p.add_col(j, i, &-c);
    };
    // B ← B·F with F: col i += c·col j  ⇒  Q ← F⁻¹·Q: row j of Q −= c·row i
    let col_add = |b: &mut IntMatrix, q: &mut IntMatrix, i: usize, j: usize, c: &BigInt| {
        b.add_col(i, j, c);
        q.add_row(j, i, &-c);
    };

    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = smallest_nonzero(&b, t) else {
            break;
        };
        b.swap_rows(t, pi);
        p.swap_cols(t, pi);
        b.swap_cols(t, pj);
        q.swap_rows(t, pj);

        loop {
            let mut clean = true;
            for i in (t + 1)..rows {
                if b[(i, t)].is_zero() {
                    continue;
                }
                let c = b[(i, t)].div_floor(&b[(t, t)]);
                row_add(&mut b, &mut p, i, t, &-c);
                if !b[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in (t + 1)..cols {
                if b[(t, j)].is_zero() {
                    continue;
                }
                let c = b[(t, j)].div_floor(&b[(t, t)]);
                col_add(&mut b, &mut q, j, t, &-c);
                if !b[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                let (pi, pj) = smallest_nonzero_cross(&b, t);
                b.swap_rows(t, pi);
                p.swap_cols(t, pi);
                b.swap_cols(t, pj);
                q.swap_rows(t, pj);
                continue;
            }
            // Pivot must divide the remaining block.
            let offender = ((t + 1)..rows)
                .flat_map(|i| ((t + 1)..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !b[(i, j)].is_multiple_of(&b[(t, t)]));
            match offender {
                Some((i, _)) => row_add(&mut b, &mut p, t, i, &BigInt::one()),
                None => break,
            }
        }
        if b[(t, t)].is_negative() {
            b.negate_row(t);
            p.negate_col(t);
        }
        t += 1;
    }

    let diagonal: Vec<BigInt> = (0..rows.min(cols)).map(|i| b[(i, i)].clone()).collect();
    let rank = diagonal.iter().filter(|x| !x.is_zero()).count();
    Ok(SmithDecomposition { p, diagonal, q, rank })
}

fn smallest_nonzero(b: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in t..b.nrows() {
        for j in t..b.ncols() {
            let v = b[(i, j)].abs();
            if v.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, bv)| &v < bv) {
                best = Some(((i, j), v));
            }
        }
    }
    best.map(|(ij, _)| ij)
}

/// Smallest nonzero entry in row `t` or column `t` of the active block.
fn smallest_nonzero_cross(b: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best = ((t, t), b[(t, t)].abs());
    for i in (t + 1)..b.nrows() {
        let v = b[(i, t)].abs();
        if !v.is_zero() && v < best.1 {
            best = ((i, t), v);
        }
    }
    for j in (t + 1)..b.ncols() {
        let v = b[(t, j)].abs();
        if !v.is_zero() && v < best.1 {
            best = ((t, j), v);
        }
    }
    best.0
}

/// Number of `x ∈ (ℤ/N)^n` with `M x ≡ 0 (mod N)`.
pub fn count_congruence_solutions(m: &IntMatrix, modulus: &BigInt) -> Result<BigInt, CongruenceError> {
    if modulus <= &BigInt::one() {
        return Err(CongruenceError::BadModulus(modulus.clone()));
    }
    let n = m.ncols();
    if m.is_zero() {
        return Ok(Pow::pow(modulus, n));
    }
    let snf = smith_normal_form(m)?;
    let free = n - m.nrows().min(n);
    let mut count: BigInt = Pow::pow(modulus, free);
    for a in &snf.diagonal {
        count *= a.gcd(modulus);
    }
    Ok(count)
}

/// Number of pairs `(ξ, ζ)` of `d_ij`-th roots of unity with
/// `ξ^{d_ik} ζ^{d_jk} = 1` for every `k ≠ i, j`; equals `g·|d_ij|`.
pub fn count_root_pairs(a: &WeightMatrix, i: usize, j: usize) -> Result<BigInt, CongruenceError> {
    let f = a.faithfulness();
    if a.ncols() < 3 || f.rank < 2 {
        return Err(CongruenceError::Unsupported);
    }
    let d = a.minor(i, j);
    if d.is_zero() {
        return Err(CongruenceError::SingularPair(i, j));
    }
    Ok(f.gcd * d.abs())
}
