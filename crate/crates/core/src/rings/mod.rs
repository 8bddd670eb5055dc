//! Coefficient rings for the group engine.
//!
//! Rings are passed as explicit context objects (`&R`) and elements are
//! plain values, so a finite field carries its tables once instead of in
//! every element.

pub mod field;
pub mod symbolic;

use std::fmt::Debug;

pub use field::{FfElem, GaloisField};
pub use symbolic::{LinearOccurrence, Sym, SymbolicRing};

/// A commutative ring with identity.
pub trait Ring: Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn neg(&self, x: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, x: &Self::Elem) -> bool;

    /// Image of an integer under the canonical map `ℤ → R`.
    fn from_int(&self, n: i64) -> Self::Elem;

    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.add(x, &self.neg(y))
    }

    fn pow(&self, x: &Self::Elem, mut e: u32) -> Self::Elem {
        let mut base = x.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn add_assign(&self, x: &mut Self::Elem, y: &Self::Elem) {
        *x = self.add(x, y);
    }
}

/// The integers, with `i128` values. Used to run the group law before any
/// reduction modulo a prime.
#[derive(Debug, Clone, Copy, Default)]
pub struct Integers;

impl Ring for Integers {
    type Elem = i128;

    fn zero(&self) -> i128 {
        0
    }
    fn one(&self) -> i128 {
        1
    }
    fn add(&self, x: &i128, y: &i128) -> i128 {
        x + y
    }
    fn neg(&self, x: &i128) -> i128 {
        -x
    }
    fn mul(&self, x: &i128, y: &i128) -> i128 {
        x * y
    }
    fn is_zero(&self, x: &i128) -> bool {
        *x == 0
    }
    fn from_int(&self, n: i64) -> i128 {
        n as i128
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power `q = p^k`; `None` if `q` is not one.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while q % p != 0 {
        p += 1;
    }
    let mut k = 0;
    let mut m = q;
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}
