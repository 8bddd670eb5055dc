//! Finite fields `F_q`, `q = p^k`, as `F_p[x]/(m(x))`.
//!
//! An element is encoded as the integer `Σ c_i p^i` of its residue
//! coefficients, which makes the encoding canonical and lets elements be
//! used directly as digits of a base-`q` index.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{is_prime, Ring};
use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;
const ADD_TABLE_LIMIT: u64 = 1 << 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FfElem(pub u32);

#[derive(Debug)]
struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Option<Vec<u32>>,
    neg: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct GaloisField {
    p: u64,
    k: u32,
    q: u64,
    /// Monic modulus, coefficients ascending, length k+1.
    modulus: Vec<u64>,
    tables: Arc<Tables>,
}

impl GaloisField {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if k == 0 {
            return Err(Error::FieldTooLarge(p, k));
        }
        let q = (p as u128).checked_pow(k).filter(|&q| q <= MAX_FIELD_ORDER as u128);
        let q = q.ok_or(Error::FieldTooLarge(p, k))? as u64;
        let modulus = least_irreducible(p, k);
        let mut f = GaloisField {
            p,
            k,
            q,
            modulus,
            tables: Arc::new(Tables {
                exp: vec![],
                log: vec![],
                add: None,
                neg: vec![],
            }),
        };
        f.tables = Arc::new(f.build_tables());
        Ok(f)
    }

    /// Field of order `q`, which must be a prime power.
    pub fn with_order(q: u64) -> Result<Self> {
        let (p, k) = super::prime_power(q).ok_or(Error::NonPrime(q))?;
        Self::new(p, k)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = FfElem> {
        (0..self.q as u32).map(FfElem)
    }

    /// A generator of the multiplicative group.
    pub fn primitive_element(&self) -> FfElem {
        FfElem(self.tables.exp[1])
    }

    /// `x^i` as a field element, for `i < k`: an F_p-basis.
    pub fn basis(&self) -> Vec<FfElem> {
        (0..self.k).map(|i| FfElem(self.p.pow(i) as u32)).collect()
    }

    pub fn digits(&self, x: FfElem) -> Vec<u64> {
        let mut v = x.0 as u64;
        (0..self.k)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    fn encode(&self, digits: &[u64]) -> FfElem {
        let mut v = 0u64;
        for &d in digits.iter().rev() {
            v = v * self.p + d;
        }
        FfElem(v as u32)
    }

    fn add_slow(&self, x: FfElem, y: FfElem) -> FfElem {
        if self.p == 2 {
            return FfElem(x.0 ^ y.0);
        }
        let a = self.digits(x);
        let b = self.digits(y);
        let s: Vec<u64> = a.iter().zip(&b).map(|(u, v)| (u + v) % self.p).collect();
        self.encode(&s)
    }

    fn neg_slow(&self, x: FfElem) -> FfElem {
        let a = self.digits(x);
        let s: Vec<u64> = a.iter().map(|u| (self.p - u) % self.p).collect();
        self.encode(&s)
    }

    fn mul_slow(&self, x: FfElem, y: FfElem) -> FfElem {
        let a = self.digits(x);
        let b = self.digits(y);
        let k = self.k as usize;
        let mut prod = vec![0u64; 2 * k];
        for i in 0..k {
            if a[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] = (prod[i + j] + a[i] * b[j]) % self.p;
            }
        }
        for d in (k..2 * k).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            // subtract c·x^{d-k}·m(x)
            for (i, &m) in self.modulus.iter().enumerate() {
                let idx = d - k + i;
                prod[idx] = (prod[idx] + self.p * self.p - (c * m) % self.p) % self.p;
            }
        }
        self.encode(&prod[..k])
    }

    fn build_tables(&self) -> Tables {
        let q = self.q as usize;
        let neg = (0..q as u32).map(|x| self.neg_slow(FfElem(x)).0).collect();
        let add = (self.q <= ADD_TABLE_LIMIT).then(|| {
            let mut t = vec![0u32; q * q];
            for x in 0..q {
                for y in 0..q {
                    t[x * q + y] = self.add_slow(FfElem(x as u32), FfElem(y as u32)).0;
                }
            }
            t
        });
        let g = self.find_primitive();
        let mut exp = vec![0u32; q];
        let mut log = vec![0u32; q];
        let mut cur = FfElem(1);
        for i in 0..q - 1 {
            exp[i] = cur.0;
            log[cur.0 as usize] = i as u32;
            cur = self.mul_slow(cur, g);
        }
        exp[q - 1] = exp[0];
        Tables { exp, log, add, neg }
    }

    fn find_primitive(&self) -> FfElem {
        let order = self.q - 1;
        let mut factors = vec![];
        let mut m = order;
        let mut d = 2;
        while d * d <= m {
            if m % d == 0 {
                factors.push(d);
                while m % d == 0 {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            factors.push(m);
        }
        let pow = |x: FfElem, mut e: u64| {
            let mut acc = FfElem(1);
            let mut b = x;
            while e > 0 {
                if e & 1 == 1 {
                    acc = self.mul_slow(acc, b);
                }
                b = self.mul_slow(b, b);
                e >>= 1;
            }
            acc
        };
        for c in 1..self.q as u32 {
            let g = FfElem(c);
            if factors.iter().all(|&r| pow(g, order / r) != FfElem(1)) {
                return g;
            }
        }
        FfElem(1)
    }

    pub fn inv(&self, x: FfElem) -> Result<FfElem> {
        if x.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        let l = self.tables.log[x.0 as usize] as u64;
        let e = (self.q - 1 - l) % (self.q - 1);
        Ok(FfElem(self.tables.exp[e as usize]))
    }

    #[inline]
    pub fn fadd(&self, x: FfElem, y: FfElem) -> FfElem {
        if self.p == 2 {
            return FfElem(x.0 ^ y.0);
        }
        match &self.tables.add {
            Some(t) => FfElem(t[x.0 as usize * self.q as usize + y.0 as usize]),
            None => self.add_slow(x, y),
        }
    }

    #[inline]
    pub fn fneg(&self, x: FfElem) -> FfElem {
        FfElem(self.tables.neg[x.0 as usize])
    }

    #[inline]
    pub fn fmul(&self, x: FfElem, y: FfElem) -> FfElem {
        if x.0 == 0 || y.0 == 0 {
            return FfElem(0);
        }
        let t = &self.tables;
        let s = t.log[x.0 as usize] as u64 + t.log[y.0 as usize] as u64;
        FfElem(t.exp[(s % (self.q - 1)) as usize])
    }

    pub fn fpow(&self, x: FfElem, e: u64) -> FfElem {
        if e == 0 {
            return FfElem(1);
        }
        if x.0 == 0 {
            return FfElem(0);
        }
        let l = self.tables.log[x.0 as usize] as u64;
        let s = (l as u128 * e as u128 % (self.q - 1) as u128) as usize;
        FfElem(self.tables.exp[s])
    }

    /// Reduction of an integer into the prime field.
    pub fn from_integer(&self, n: i64) -> FfElem {
        let r = n.rem_euclid(self.p as i64) as u32;
        FfElem(r)
    }

    /// Evaluates a dense univariate polynomial (ascending coefficients).
    pub fn eval_poly(&self, coeffs: &[FfElem], x: FfElem) -> FfElem {
        coeffs
            .iter()
            .rev()
            .fold(FfElem(0), |acc, &c| self.fadd(self.fmul(acc, x), c))
    }

    /// Whether the polynomial is additive: only monomials `t^{p^i}` occur.
    pub fn is_additive(&self, coeffs: &[FfElem]) -> bool {
        coeffs.iter().enumerate().all(|(e, c)| {
            c.0 == 0 || (e > 0 && is_power_of(e as u64, self.p))
        })
    }

    /// Size of the image of `t ↦ φ(t)` on `F_q`.
    ///
    /// Small fields are enumerated; otherwise `φ` must be additive and the
    /// image is computed as the rank of an `F_p`-linear map.
    pub fn image_size(&self, coeffs: &[FfElem]) -> Result<u64> {
        if self.q <= 1 << 16 {
            let mut seen = vec![false; self.q as usize];
            let mut count = 0;
            for x in self.elements() {
                let y = self.eval_poly(coeffs, x);
                if !seen[y.0 as usize] {
                    seen[y.0 as usize] = true;
                    count += 1;
                }
            }
            return Ok(count);
        }
        if !self.is_additive(coeffs) {
            return Err(Error::Verification(
                "image size of a non-additive map over a large field".into(),
            ));
        }
        let rank = self.additive_rank(coeffs);
        Ok(self.p.pow(rank))
    }

    /// Number of roots of `φ` in `F_q` for additive `φ`.
    pub fn additive_kernel_size(&self, coeffs: &[FfElem]) -> u64 {
        debug_assert!(self.is_additive(coeffs));
        self.p.pow(self.k - self.additive_rank(coeffs))
    }

    fn additive_rank(&self, coeffs: &[FfElem]) -> u32 {
        let k = self.k as usize;
        let p = self.p;
        let mut rows: Vec<Vec<u64>> = self
            .basis()
            .into_iter()
            .map(|b| self.digits(self.eval_poly(coeffs, b)))
            .collect();
        let mut rank = 0;
        for col in 0..k {
            let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(rank, piv);
            let inv = mod_inverse(rows[rank][col], p);
            for c in 0..k {
                rows[rank][c] = rows[rank][c] * inv % p;
            }
            for r in 0..rows.len() {
                if r != rank && rows[r][col] != 0 {
                    let f = rows[r][col];
                    for c in 0..k {
                        rows[r][c] = (rows[r][c] + p * p - f * rows[rank][c] % p) % p;
                    }
                }
            }
            rank += 1;
        }
        rank as u32
    }
}

impl Ring for GaloisField {
    type Elem = FfElem;

    fn zero(&self) -> FfElem {
        FfElem(0)
    }
    fn one(&self) -> FfElem {
        FfElem(1)
    }
    fn add(&self, x: &FfElem, y: &FfElem) -> FfElem {
        self.fadd(*x, *y)
    }
    fn neg(&self, x: &FfElem) -> FfElem {
        self.fneg(*x)
    }
    fn mul(&self, x: &FfElem, y: &FfElem) -> FfElem {
        self.fmul(*x, *y)
    }
    fn is_zero(&self, x: &FfElem) -> bool {
        x.0 == 0
    }
    fn from_int(&self, n: i64) -> FfElem {
        self.from_integer(n)
    }
    fn pow(&self, x: &FfElem, e: u32) -> FfElem {
        self.fpow(*x, e as u64)
    }
}

fn is_power_of(mut n: u64, p: u64) -> bool {
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

pub(crate) fn mod_inverse(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// First monic irreducible polynomial of degree `k` over `F_p` when the
/// lower coefficients `(c_0, …, c_{k-1})` are read as base-`p` digits.
fn least_irreducible(p: u64, k: u32) -> Vec<u64> {
    let k = k as usize;
    let count = p.pow(k as u32);
    for code in 0..count {
        let mut m = Vec::with_capacity(k + 1);
        let mut v = code;
        for _ in 0..k {
            m.push(v % p);
            v /= p;
        }
        m.push(1);
        if is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn is_irreducible(m: &[u64], p: u64) -> bool {
    let k = m.len() - 1;
    if k == 1 {
        return true;
    }
    if m[0] == 0 {
        return false;
    }
    for d in 1..=k / 2 {
        for code in 0..p.pow(d as u32) {
            let mut f = Vec::with_capacity(d + 1);
            let mut v = code;
            for _ in 0..d {
                f.push(v % p);
                v /= p;
            }
            f.push(1);
            if poly_rem(m, &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = mod_inverse(b[db], p);
    while r.len() > db {
        let c = r[r.len() - 1] * lead_inv % p;
        let shift = r.len() - 1 - db;
        for (i, &bc) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - c * bc % p) % p;
        }
        r.pop();
    }
    r
}
