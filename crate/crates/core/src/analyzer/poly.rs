//! Integer polynomials in `v = q − 1`.

use std::fmt;
use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A class-count polynomial, coefficients in ascending powers of `v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassCountPolynomial {
    coeffs: Vec<i64>,
}

impl ClassCountPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        ClassCountPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        Self::new(vec![])
    }

    pub fn constant(c: i64) -> Self {
        Self::new(vec![c])
    }

    /// `v + c`.
    pub fn v_plus(c: i64) -> Self {
        Self::new(vec![c, 1])
    }

    pub fn v() -> Self {
        Self::v_plus(0)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(1), |acc, _| &acc * self)
    }

    /// Exact division by an integer.
    pub fn div_exact(&self, d: i64) -> Option<Self> {
        self.coeffs
            .iter()
            .map(|&c| (c % d == 0).then_some(c / d))
            .collect::<Option<Vec<_>>>()
            .map(Self::new)
    }

    pub fn eval_v(&self, v: i128) -> i128 {
        self.coeffs.iter().rev().fold(0i128, |acc, &c| acc * v + c as i128)
    }

    /// Value at `v = q − 1`.
    pub fn eval_q(&self, q: u64) -> i128 {
        self.eval_v(q as i128 - 1)
    }

    /// Coefficients of the same polynomial in ascending powers of `q`.
    pub fn in_q(&self) -> Vec<i128> {
        // v^k = Σ_i C(k,i) q^i (−1)^{k−i}
        let mut out = vec![0i128; self.coeffs.len()];
        for (k, &c) in self.coeffs.iter().enumerate() {
            let mut binom = 1i128;
            for i in 0..=k {
                let sign = if (k - i) % 2 == 0 { 1 } else { -1 };
                out[i] += c as i128 * binom * sign;
                binom = binom * (k - i) as i128 / (i + 1) as i128;
            }
        }
        out
    }
}

impl Add for &ClassCountPolynomial {
    type Output = ClassCountPolynomial;
    fn add(self, o: &ClassCountPolynomial) -> ClassCountPolynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        ClassCountPolynomial::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&0) + o.coeffs.get(i).unwrap_or(&0))
                .collect(),
        )
    }
}

impl Mul for &ClassCountPolynomial {
    type Output = ClassCountPolynomial;
    fn mul(self, o: &ClassCountPolynomial) -> ClassCountPolynomial {
        if self.is_zero() || o.is_zero() {
            return ClassCountPolynomial::zero();
        }
        let mut out = vec![0i64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ClassCountPolynomial::new(out)
    }
}

impl std::iter::Sum for ClassCountPolynomial {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(ClassCountPolynomial::zero(), |acc, x| &acc + &x)
    }
}

impl fmt::Display for ClassCountPolynomial {
    /// Descending powers without spaces: `2v^4+19v^3+25v^2+9v+1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "{}", if c < 0 { "-" } else { "+" })?;
            } else if c < 0 {
                write!(f, "-")?;
            }
            first = false;
            let m = c.abs();
            match k {
                0 => write!(f, "{m}")?,
                _ => {
                    if m != 1 {
                        write!(f, "{m}")?;
                    }
                    write!(f, "v")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// The polynomial in `v` of least degree through the points `(q, k)`,
/// provided it has integer coefficients.
pub fn fit_polynomial(points: &[(u64, i128)]) -> Result<ClassCountPolynomial> {
    if points.is_empty() {
        return Ok(ClassCountPolynomial::zero());
    }
    let xs: Vec<i128> = points.iter().map(|&(q, _)| q as i128 - 1).collect();
    // Newton divided differences over the rationals
    let n = points.len();
    let mut table: Vec<(i128, i128)> = points.iter().map(|&(_, k)| (k, 1)).collect();
    let mut newton = vec![table[0]];
    for level in 1..n {
        for i in 0..n - level {
            let (a, b) = table[i + 1];
            let (c, d) = table[i];
            let num = a * d - c * b;
            let den = b * d * (xs[i + level] - xs[i]);
            table[i] = reduce(num, den);
        }
        newton.push(table[0]);
    }
    // expand Σ newton_k ∏_{i<k} (v − x_i)
    let mut coeffs = vec![(0i128, 1i128); n];
    let mut basis = vec![(1i128, 1i128)];
    for (k, &(num, den)) in newton.iter().enumerate() {
        for (i, &(bn, bd)) in basis.iter().enumerate() {
            let (cn, cd) = coeffs[i];
            coeffs[i] = reduce(cn * bd * den + num * bn * cd, cd * bd * den);
        }
        if k + 1 < n {
            let mut next = vec![(0i128, 1i128); basis.len() + 1];
            for (i, &(bn, bd)) in basis.iter().enumerate() {
                let (n1, d1) = next[i + 1];
                next[i + 1] = reduce(n1 * bd + bn * d1, d1 * bd);
                let (n0, d0) = next[i];
                next[i] = reduce(n0 * bd - xs[k] * bn * d0, d0 * bd);
            }
            basis = next;
        }
    }
    let mut out = vec![];
    for (num, den) in coeffs {
        if den != 1 {
            return Err(Error::NonIntegralFit);
        }
        out.push(num as i64);
    }
    Ok(ClassCountPolynomial::new(out))
}

fn reduce(n: i128, d: i128) -> (i128, i128) {
    fn gcd(a: i128, b: i128) -> i128 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    let g = gcd(n, d).max(1);
    let s = if d < 0 { -1 } else { 1 };
    (s * n / g, s * d / g)
}
