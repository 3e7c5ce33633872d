//! Dense univariate integer polynomials, coefficient `i` ↔ `t^i`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub type IntPoly = Vec<BigInt>;

pub fn trim(p: &mut IntPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn mul(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    trim(&mut out);
    out
}

/// Exact quotient by a monic divisor, or `None` if the remainder is nonzero.
pub fn div_exact_monic(a: &[BigInt], b: &[BigInt]) -> Option<IntPoly> {
    debug_assert!(b.last().is_some_and(|c| c.is_one()));
    let mut r: IntPoly = a.to_vec();
    trim(&mut r);
    if r.is_empty() {
        return Some(Vec::new());
    }
    let db = b.len() - 1;
    if r.len() - 1 < db {
        return None;
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                r[i + j] -= &c * bj;
            }
        }
        q[i] = c;
    }
    if r.iter().all(|x| x.is_zero()) {
        trim(&mut q);
        Some(q)
    } else {
        None
    }
}

pub fn divisors(k: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=k).filter(|d| k.is_multiple_of(*d)).collect();
    out.sort_unstable();
    out
}

fn mobius(mut n: u64) -> i32 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// `a · (1 - t^d)^m`.
pub fn mul_binomial(a: &[BigInt], d: u64, m: u32) -> IntPoly {
    let d = d as usize;
    let mut out = a.to_vec();
    for _ in 0..m {
        out.resize(out.len() + d, BigInt::zero());
        for i in (d..out.len()).rev() {
            let (lo, hi) = out.split_at_mut(i);
            hi[0] -= &lo[i - d];
        }
    }
    trim(&mut out);
    out
}

/// `a / (1 - t^d)` if the division is exact.
pub fn div_binomial(a: &[BigInt], d: u64) -> Option<IntPoly> {
    let d = d as usize;
    let mut r = a.to_vec();
    trim(&mut r);
    if r.is_empty() {
        return Some(r);
    }
    if r.len() <= d {
        return None;
    }
    let qlen = r.len() - d;
    for i in d..r.len() {
        let (lo, hi) = r.split_at_mut(i);
        hi[0] += &lo[i - d];
    }
    if r[qlen..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    r.truncate(qlen);
    Some(r)
}

/// `Ψ_k = ∏_{d | k} (1 - t^d)^{μ(k/d)}`: `1 - t` for `k = 1` and `Φ_k`
/// otherwise, so that `∏_{k | e} Ψ_k = 1 - t^e`. Returns the divisors with
/// exponent `+1` and `-1`.
pub fn psi_binomials(k: u64) -> (Vec<u64>, Vec<u64>) {
    let mut up = Vec::new();
    let mut down = Vec::new();
    for d in divisors(k) {
        match mobius(k / d) {
            1 => up.push(d),
            -1 => down.push(d),
            _ => {}
        }
    }
    (up, down)
}

/// `a · Ψ_k^m`.
pub fn mul_psi(a: &[BigInt], k: u64, m: u32) -> IntPoly {
    let (up, down) = psi_binomials(k);
    let mut out = a.to_vec();
    for &d in &up {
        out = mul_binomial(&out, d, m);
    }
    for &d in &down {
        for _ in 0..m {
            out = div_binomial(&out, d).expect("cyclotomic identity");
        }
    }
    out
}

/// `a / Ψ_k` if exact.
pub fn div_psi(a: &[BigInt], k: u64) -> Option<IntPoly> {
    if !psi_divides(a, k) {
        return None;
    }
    let (up, down) = psi_binomials(k);
    let mut out = a.to_vec();
    for &d in &down {
        out = mul_binomial(&out, d, 1);
    }
    for &d in &up {
        out = div_binomial(&out, d)?;
    }
    Some(out)
}

/// Whether `Ψ_k | a`, tested on `a mod (t^k - 1)`.
fn psi_divides(a: &[BigInt], k: u64) -> bool {
    let k = k as usize;
    if a.len() <= k {
        return a.iter().all(|x| x.is_zero()) || {
            let (up, down) = psi_binomials(k as u64);
            let mut out = a.to_vec();
            for &d in &down {
                out = mul_binomial(&out, d, 1);
            }
            up.iter().try_fold(out, |acc, &d| div_binomial(&acc, d)).is_some()
        };
    }
    let mut folded = vec![BigInt::zero(); k];
    for (i, x) in a.iter().enumerate() {
        if !x.is_zero() {
            folded[i % k] += x;
        }
    }
    psi_divides(&folded, k as u64)
}

/// Cyclotomic polynomials, memoised.
#[derive(Default)]
pub struct Cyclotomic {
    cache: HashMap<u64, IntPoly>,
}

impl Cyclotomic {
    pub fn get(&mut self, k: u64) -> IntPoly {
        if let Some(p) = self.cache.get(&k) {
            return p.clone();
        }
        // t^k - 1 divided by Φ_d for proper divisors d
        let mut num = vec![BigInt::zero(); k as usize + 1];
        num[0] = BigInt::from(-1);
        num[k as usize] = BigInt::one();
        for d in divisors(k) {
            if d < k {
                let phi = self.get(d);
                num = div_exact_monic(&num, &phi).expect("cyclotomic divisibility");
            }
        }
        self.cache.insert(k, num.clone());
        num
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> IntPoly {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn cyclotomic_values() {
        let mut c = Cyclotomic::default();
        assert_eq!(c.get(1), p(&[-1, 1]));
        assert_eq!(c.get(2), p(&[1, 1]));
        assert_eq!(c.get(6), p(&[1, -1, 1]));
        assert_eq!(c.get(12), p(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn psi_matches_cyclotomic() {
        let mut c = Cyclotomic::default();
        for k in 2..=40u64 {
            assert_eq!(mul_psi(&p(&[1]), k, 1), c.get(k), "k = {k}");
        }
        assert_eq!(mul_psi(&p(&[1]), 1, 1), p(&[1, -1]));
        let a = mul(&c.get(12), &p(&[2, 0, 5, 1]));
        assert_eq!(div_psi(&a, 12).unwrap(), p(&[2, 0, 5, 1]));
        assert!(div_psi(&a, 6).is_none());
        assert!(div_psi(&p(&[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14]), 5).is_none());
    }

    #[test]
    fn binomial_division() {
        let a = mul_binomial(&p(&[3, 1]), 4, 2);
        assert_eq!(div_binomial(&a, 4).unwrap(), mul_binomial(&p(&[3, 1]), 4, 1));
        assert!(div_binomial(&p(&[1, 1]), 1).is_none());
    }

    #[test]
    fn exact_division() {
        let a = mul(&p(&[1, 1]), &p(&[3, 0, 2]));
        assert_eq!(div_exact_monic(&a, &p(&[1, 1])).unwrap(), p(&[3, 0, 2]));
        assert!(div_exact_monic(&p(&[1, 0, 1]), &p(&[-1, 1])).is_none());
    }
}
