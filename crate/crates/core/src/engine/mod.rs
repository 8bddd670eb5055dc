//! Group arithmetic in `U` over an arbitrary coefficient ring.
//!
//! Elements are kept in the normal form `∏_{j=1}^N x_j(c_j)` with the
//! factors in enumeration order. Products are normalized by collection from
//! the left: a letter `x_k(u)` appended on the right is moved past every
//! factor with a larger index using
//! `x_β(s) x_α(t) = x_α(t) x_β(s) ∏ x_{iα+jβ}(C_{ij,α,β} (−t)^i s^j)`.
//! Commutator coefficients are integers and are mapped into the ring only
//! when a term is produced.

pub mod constants;

use std::sync::Arc;

pub use constants::{CommutatorTerm, StructureConstants};

use crate::error::{Error, Result};
use crate::rings::Ring;
use crate::root_system::RootSystem;

/// Coefficient vector of a normal form `∏ x_j(coeffs[j])`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnipotentElement<E> {
    pub coeffs: Vec<E>,
}

impl<E> UnipotentElement<E> {
    pub fn new(coeffs: Vec<E>) -> Self {
        UnipotentElement { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// A collector for `U` over the ring `R`.
#[derive(Debug, Clone)]
pub struct Engine<R: Ring> {
    ring: R,
    rs: Arc<RootSystem>,
    constants: Arc<StructureConstants>,
    /// Ring images of the commutator coefficients, same layout as `constants`.
    reduced: Arc<Vec<Vec<Vec<(usize, u32, u32, R::Elem)>>>>,
}

/// Ceiling on letter insertions per product; collection always terminates
/// far below this, it only guards against a corrupted relation table.
const STEP_LIMIT: usize = 50_000_000;

impl<R: Ring> Engine<R> {
    pub fn new(rs: Arc<RootSystem>, ring: R) -> Self {
        let constants = Arc::new(StructureConstants::new(&rs));
        Self::with_constants(rs, constants, ring)
    }

    pub fn with_constants(rs: Arc<RootSystem>, constants: Arc<StructureConstants>, ring: R) -> Self {
        let n = rs.num_positive();
        let mut reduced = vec![vec![vec![]; n]; n];
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                reduced[a][b] = constants
                    .commutator(a, b)
                    .iter()
                    .map(|t| (t.target, t.i, t.j, ring.from_int(t.coeff)))
                    .filter(|(_, _, _, c)| !ring.is_zero(c))
                    .collect();
            }
        }
        Engine {
            ring,
            rs,
            constants,
            reduced: Arc::new(reduced),
        }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn root_system_arc(&self) -> Arc<RootSystem> {
        self.rs.clone()
    }

    pub fn constants(&self) -> &StructureConstants {
        &self.constants
    }

    pub fn num_roots(&self) -> usize {
        self.rs.num_positive()
    }

    pub fn identity(&self) -> UnipotentElement<R::Elem> {
        UnipotentElement::new(vec![self.ring.zero(); self.num_roots()])
    }

    /// The root element `x_i(c)`.
    pub fn root_element(&self, i: usize, c: R::Elem) -> UnipotentElement<R::Elem> {
        let mut e = self.identity();
        e.coeffs[i] = c;
        e
    }

    fn check(&self, x: &UnipotentElement<R::Elem>) -> Result<()> {
        if x.len() != self.num_roots() {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    /// Right-multiplies the normal form in `acc` by `x_k(u)`, discarding all
    /// coordinates with index `≥ limit` (computation in `U/M_limit`).
    pub fn mul_letter(&self, acc: &mut [R::Elem], k: usize, u: &R::Elem, limit: usize) {
        let mut steps = 0usize;
        self.mul_letter_inner(acc, k, u, limit, &mut steps);
    }

    fn mul_letter_inner(&self, acc: &mut [R::Elem], k: usize, u: &R::Elem, limit: usize, steps: &mut usize) {
        if k >= limit || self.ring.is_zero(u) {
            return;
        }
        *steps += 1;
        assert!(*steps < STEP_LIMIT, "collection did not terminate");
        let mut tail: Vec<(usize, R::Elem)> = vec![];
        for (j, slot) in acc.iter_mut().enumerate().take(limit).skip(k + 1) {
            if !self.ring.is_zero(slot) {
                tail.push((j, std::mem::replace(slot, self.ring.zero())));
            }
        }
        self.ring.add_assign(&mut acc[k], u);
        if tail.is_empty() {
            return;
        }
        let minus_u = self.ring.neg(u);
        for (j, c) in tail {
            // x_k(−u) x_j(c) x_k(u) = x_j(c) ∏ x_{iβ_k + jβ_j}(C (−u)^i c^j)
            self.mul_letter_inner(acc, j, &c, limit, steps);
            for (target, i, jj, coeff) in &self.reduced[k][j] {
                if *target >= limit {
                    continue;
                }
                let term = self.ring.mul(
                    coeff,
                    &self.ring.mul(&self.ring.pow(&minus_u, *i), &self.ring.pow(&c, *jj)),
                );
                self.mul_letter_inner(acc, *target, &term, limit, steps);
            }
        }
    }

    /// Normal form of `x·y`.
    pub fn multiply(
        &self,
        x: &UnipotentElement<R::Elem>,
        y: &UnipotentElement<R::Elem>,
    ) -> Result<UnipotentElement<R::Elem>> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.multiply_truncated(x, y, self.num_roots()))
    }

    /// `x·y` modulo `M_limit`: coordinates with index `≥ limit` are zero.
    pub fn multiply_truncated(
        &self,
        x: &UnipotentElement<R::Elem>,
        y: &UnipotentElement<R::Elem>,
        limit: usize,
    ) -> UnipotentElement<R::Elem> {
        let mut acc = x.coeffs.clone();
        for slot in acc.iter_mut().skip(limit) {
            *slot = self.ring.zero();
        }
        for (k, c) in y.coeffs.iter().enumerate().take(limit) {
            self.mul_letter(&mut acc, k, c, limit);
        }
        UnipotentElement::new(acc)
    }

    pub fn inverse(&self, x: &UnipotentElement<R::Elem>) -> UnipotentElement<R::Elem> {
        self.inverse_truncated(x, self.num_roots())
    }

    pub fn inverse_truncated(&self, x: &UnipotentElement<R::Elem>, limit: usize) -> UnipotentElement<R::Elem> {
        let mut acc = self.identity().coeffs;
        for k in (0..limit).rev() {
            let c = self.ring.neg(&x.coeffs[k]);
            self.mul_letter(&mut acc, k, &c, limit);
        }
        UnipotentElement::new(acc)
    }

    /// `x y x⁻¹`.
    pub fn conjugate(
        &self,
        x: &UnipotentElement<R::Elem>,
        y: &UnipotentElement<R::Elem>,
    ) -> Result<UnipotentElement<R::Elem>> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.conjugate_truncated(x, y, self.num_roots()))
    }

    /// `x y x⁻¹ M_limit`.
    pub fn conjugate_truncated(
        &self,
        x: &UnipotentElement<R::Elem>,
        y: &UnipotentElement<R::Elem>,
        limit: usize,
    ) -> UnipotentElement<R::Elem> {
        let xy = self.multiply_truncated(x, y, limit);
        let xinv = self.inverse_truncated(x, limit);
        self.multiply_truncated(&xy, &xinv, limit)
    }

    /// Projection `U → U/M_i`: keeps coordinates `< i` (0-based), i.e. the
    /// first `i` coordinates.
    pub fn truncate(&self, x: &UnipotentElement<R::Elem>, i: usize) -> UnipotentElement<R::Elem> {
        let mut out = x.clone();
        for slot in out.coeffs.iter_mut().skip(i) {
            *slot = self.ring.zero();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{FfElem, GaloisField, Integers};
    use crate::root_system::RootKind;

    fn b2_f2() -> Engine<GaloisField> {
        let rs = Arc::new(RootSystem::new(RootKind::B, 2).unwrap());
        Engine::new(rs, GaloisField::new(2, 1).unwrap())
    }

    fn all_elements(e: &Engine<GaloisField>) -> Vec<UnipotentElement<FfElem>> {
        let n = e.num_roots();
        let q = e.ring().order() as u32;
        let total = (q as u64).pow(n as u32);
        (0..total)
            .map(|mut idx| {
                let coeffs = (0..n)
                    .map(|_| {
                        let d = (idx % q as u64) as u32;
                        idx /= q as u64;
                        FfElem(d)
                    })
                    .collect();
                UnipotentElement::new(coeffs)
            })
            .collect()
    }

    #[test]
    fn one_parameter_subgroups() {
        let rs = Arc::new(RootSystem::new(RootKind::G, 2).unwrap());
        let e = Engine::new(rs, GaloisField::new(3, 2).unwrap());
        for i in 0..6 {
            for t in 0..9 {
                for u in 0..9 {
                    let x = e.root_element(i, FfElem(t));
                    let y = e.root_element(i, FfElem(u));
                    let s = e.ring().fadd(FfElem(t), FfElem(u));
                    assert_eq!(e.multiply(&x, &y).unwrap(), e.root_element(i, s));
                }
            }
        }
    }

    #[test]
    fn identity_and_inverse() {
        let e = b2_f2();
        let id = e.identity();
        assert_eq!(e.inverse(&id), id);
        let rs = Arc::new(RootSystem::new(RootKind::C, 3).unwrap());
        let e3 = Engine::new(rs, GaloisField::new(3, 1).unwrap());
        let x = e3.root_element(0, FfElem(1));
        assert_eq!(e3.inverse(&x), e3.root_element(0, FfElem(2)));
    }

    #[test]
    fn b2_f2_group_is_closed_and_associative() {
        let e = b2_f2();
        let elems = all_elements(&e);
        assert_eq!(elems.len(), 16);
        for x in &elems {
            assert_eq!(e.multiply(x, &e.inverse(x)).unwrap(), e.identity());
            for y in &elems {
                let xy = e.multiply(x, y).unwrap();
                for z in &elems {
                    let l = e.multiply(&xy, z).unwrap();
                    let r = e.multiply(x, &e.multiply(y, z).unwrap()).unwrap();
                    assert_eq!(l, r);
                }
            }
        }
    }

    #[test]
    fn truncation_is_a_homomorphism_b2_f2() {
        // coordinate j ≤ i of a product only depends on coordinates ≤ i
        let e = b2_f2();
        let elems = all_elements(&e);
        for i in 0..=4 {
            for x in &elems {
                for y in &elems {
                    let full = e.truncate(&e.multiply(x, y).unwrap(), i);
                    let tx = e.truncate(x, i);
                    let ty = e.truncate(y, i);
                    let trunc = e.truncate(&e.multiply(&tx, &ty).unwrap(), i);
                    assert_eq!(full, trunc);
                    assert_eq!(e.multiply_truncated(x, y, i), full);
                }
            }
        }
    }

    #[test]
    fn ring_mismatch() {
        let e = b2_f2();
        let bad = UnipotentElement::new(vec![FfElem(0); 3]);
        assert_eq!(e.multiply(&bad, &e.identity()).unwrap_err(), Error::RingMismatch);
    }

    #[test]
    fn conjugating_by_identity() {
        let e = b2_f2();
        for y in all_elements(&e) {
            assert_eq!(e.conjugate(&e.identity(), &y).unwrap(), y);
        }
    }

    #[test]
    fn integers_reduce_to_prime_field() {
        // multiplying over ℤ then reducing agrees with multiplying the reductions
        let rs = Arc::new(RootSystem::new(RootKind::G, 2).unwrap());
        let ez = Engine::new(rs.clone(), Integers);
        for p in [2u64, 3, 5] {
            let ep = Engine::new(rs.clone(), GaloisField::new(p, 1).unwrap());
            let mut seed = 12345u64;
            let mut next = || {
                seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((seed >> 33) % 7) as i128 - 3
            };
            for _ in 0..300 {
                let x: Vec<i128> = (0..6).map(|_| next()).collect();
                let y: Vec<i128> = (0..6).map(|_| next()).collect();
                let prod = ez
                    .multiply(&UnipotentElement::new(x.clone()), &UnipotentElement::new(y.clone()))
                    .unwrap();
                let red = |v: &[i128]| {
                    UnipotentElement::new(
                        v.iter()
                            .map(|c| FfElem(c.rem_euclid(p as i128) as u32))
                            .collect(),
                    )
                };
                let prod_p = ep.multiply(&red(&x), &red(&y)).unwrap();
                assert_eq!(red(&prod.coeffs), prod_p);
            }
        }
    }
}
