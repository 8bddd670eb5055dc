//! Structure constants of a Chevalley basis and the commutator
//! coefficients of the corresponding unipotent group, all over ℤ.
//!
//! Signs are fixed by making `N_{ξ,ζ}` positive on every extraspecial pair
//! `(ξ, ζ)`, where `ξ` is the earliest positive root in the enumeration with
//! `γ − ξ` a positive root. The remaining constants follow from the
//! four-root identity and the cyclic relation for three roots summing to
//! zero.

use std::collections::HashMap;

use crate::root_system::RootSystem;

/// `C_{ij,α,β}` for one ordered pair: target root index and integer coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutatorTerm {
    pub i: u32,
    pub j: u32,
    pub target: usize,
    pub coeff: i64,
}

#[derive(Debug, Clone)]
pub struct StructureConstants {
    n: usize,
    /// `N_{β_a, β_b}` for positive roots, 0 when the sum is not a root.
    pos: Vec<Vec<i64>>,
    /// Commutator terms for `α = β_a`, `β = β_b`, `a ≠ b`, ordered by `i + j`.
    comm: Vec<Vec<Vec<CommutatorTerm>>>,
}

struct Builder<'a> {
    rs: &'a RootSystem,
    pos: HashMap<(usize, usize), i64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Frac(i64, i64);

impl Frac {
    fn new(n: i64, d: i64) -> Frac {
        let g = gcd(n.abs(), d.abs()).max(1);
        let s = if d < 0 { -1 } else { 1 };
        Frac(s * n / g, s * d / g)
    }
    fn add(self, o: Frac) -> Frac {
        Frac::new(self.0 * o.1 + o.0 * self.1, self.1 * o.1)
    }
    fn mul(self, o: Frac) -> Frac {
        Frac::new(self.0 * o.0, self.1 * o.1)
    }
    fn integer(self) -> i64 {
        assert_eq!(self.1, 1, "structure constant is not an integer");
        self.0
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn neg(v: &[i32]) -> Vec<i32> {
    v.iter().map(|x| -x).collect()
}

fn add(x: &[i32], y: &[i32]) -> Vec<i32> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

fn is_positive(v: &[i32]) -> bool {
    v.iter().all(|&c| c >= 0) && v.iter().any(|&c| c > 0)
}

impl<'a> Builder<'a> {
    fn sq(&self, v: &[i32]) -> i64 {
        self.rs.inner(v, v)
    }

    /// `N_{x,y}` for arbitrary roots, 0 if `x + y` is not a root.
    fn n(&self, x: &[i32], y: &[i32]) -> Frac {
        let s = add(x, y);
        if s.iter().all(|&c| c == 0) || !self.rs.is_root(&s) {
            return Frac(0, 1);
        }
        let px = is_positive(x);
        let py = is_positive(y);
        match (px, py) {
            (true, true) => {
                let a = self.rs.find(x).unwrap();
                let b = self.rs.find(y).unwrap();
                Frac(self.pos[&(a, b)], 1)
            }
            (false, false) => {
                let v = self.n(&neg(x), &neg(y));
                Frac(-v.0, v.1)
            }
            _ => {
                // x + y + z = 0:  N_{x,y}/(z,z) = N_{y,z}/(x,x) = N_{z,x}/(y,y)
                let z = neg(&s);
                let (zz, xx, yy) = (self.sq(&z), self.sq(x), self.sq(y));
                if px {
                    if is_positive(&z) {
                        Frac::new(zz, yy).mul(self.n(&z, x))
                    } else {
                        Frac::new(zz, xx).mul(self.n(y, &z))
                    }
                } else if is_positive(&z) {
                    Frac::new(zz, xx).mul(self.n(y, &z))
                } else {
                    Frac::new(zz, yy).mul(self.n(&z, x))
                }
            }
        }
    }

    /// Largest `r` with `y − r·x` a root.
    fn string_below(&self, x: &[i32], y: &[i32]) -> i64 {
        let mut r = 0;
        let mut cur = y.to_vec();
        loop {
            cur = cur.iter().zip(x).map(|(a, b)| a - b).collect();
            if cur.iter().all(|&c| c == 0) || !self.rs.is_root(&cur) {
                return r;
            }
            r += 1;
        }
    }
}

impl StructureConstants {
    pub fn new(rs: &RootSystem) -> Self {
        let n = rs.num_positive();
        let mut b = Builder {
            rs,
            pos: HashMap::new(),
        };
        // roots are enumerated by non-decreasing height
        for g in 0..n {
            let gamma = rs.root(g).coeffs.clone();
            if rs.root(g).height() < 2 {
                continue;
            }
            let pairs: Vec<(usize, usize)> = (0..n)
                .filter_map(|a| {
                    let rest: Vec<i32> = gamma.iter().zip(&rs.root(a).coeffs).map(|(x, y)| x - y).collect();
                    rs.find(&rest).map(|bidx| (a, bidx))
                })
                .collect();
            let (xi, zeta) = pairs[0];
            let xi_v = rs.root(xi).coeffs.clone();
            let zeta_v = rs.root(zeta).coeffs.clone();
            let top = b.string_below(&xi_v, &zeta_v) + 1;
            b.pos.insert((xi, zeta), top);
            b.pos.insert((zeta, xi), -top);
            for &(a, c) in &pairs {
                if a == xi || c == xi {
                    continue;
                }
                let alpha = rs.root(a).coeffs.clone();
                let beta = rs.root(c).coeffs.clone();
                let mxi = neg(&xi_v);
                let mzeta = neg(&zeta_v);
                // N_{αβ}N_{−ξ,−ζ}/(γ,γ) + N_{β,−ξ}N_{α,−ζ}/(β−ξ)² + N_{−ξ,α}N_{β,−ζ}/(α−ξ)² = 0
                let mut rest = Frac(0, 1);
                let bx = add(&beta, &mxi);
                if bx.iter().any(|&c| c != 0) && rs.is_root(&bx) {
                    let t = b.n(&beta, &mxi).mul(b.n(&alpha, &mzeta));
                    rest = rest.add(t.mul(Frac::new(1, b.sq(&bx))));
                }
                let ax = add(&alpha, &mxi);
                if ax.iter().any(|&c| c != 0) && rs.is_root(&ax) {
                    let t = b.n(&mxi, &alpha).mul(b.n(&beta, &mzeta));
                    rest = rest.add(t.mul(Frac::new(1, b.sq(&ax))));
                }
                // N_{−ξ,−ζ} = −N_{ξ,ζ} = −top
                let val = rest.mul(Frac::new(b.sq(&gamma), top));
                b.pos.insert((a, c), val.integer());
            }
        }
        let mut pos = vec![vec![0i64; n]; n];
        for (&(a, c), &v) in &b.pos {
            pos[a][c] = v;
        }
        let mut sc = StructureConstants {
            n,
            pos,
            comm: vec![vec![vec![]; n]; n],
        };
        for a in 0..n {
            for c in 0..n {
                if a != c {
                    sc.comm[a][c] = sc.commutator_terms(rs, a, c);
                }
            }
        }
        sc
    }

    pub fn num_roots(&self) -> usize {
        self.n
    }

    /// `N_{β_a, β_b}`.
    pub fn n(&self, a: usize, b: usize) -> i64 {
        self.pos[a][b]
    }

    /// Commutator terms of `[x_{β_b}(u), x_{β_a}(t)]`, each contributing
    /// `x_{iβ_a + jβ_b}(C · (−t)^i · u^j)`, in order of increasing `i + j`.
    pub fn commutator(&self, a: usize, b: usize) -> &[CommutatorTerm] {
        &self.comm[a][b]
    }

    fn n_at(&self, rs: &RootSystem, x: &[i32], y: &[i32]) -> Frac {
        match (rs.find(x), rs.find(y)) {
            (Some(a), Some(b)) => Frac(self.pos[a][b], 1),
            _ => Frac(0, 1),
        }
    }

    /// `M_{x,y,i} = (1/i!) N_{x,y} N_{x,x+y} ⋯ N_{x,(i−1)x+y}`.
    fn m(&self, rs: &RootSystem, x: &[i32], y: &[i32], i: i64) -> Frac {
        let mut acc = Frac(1, 1);
        let mut cur = y.to_vec();
        for k in 0..i {
            acc = acc.mul(self.n_at(rs, x, &cur));
            cur = add(&cur, x);
            acc = acc.mul(Frac::new(1, k + 1));
        }
        acc
    }

    fn commutator_terms(&self, rs: &RootSystem, a: usize, b: usize) -> Vec<CommutatorTerm> {
        let alpha = &rs.root(a).coeffs;
        let beta = &rs.root(b).coeffs;
        let mut out = vec![];
        for total in 2..=5u32 {
            for i in 1..total {
                let j = total - i;
                let v: Vec<i32> = alpha
                    .iter()
                    .zip(beta)
                    .map(|(x, y)| i as i32 * x + j as i32 * y)
                    .collect();
                let Some(target) = rs.find(&v) else { continue };
                let coeff = match (i, j) {
                    (i, 1) => self.m(rs, alpha, beta, i as i64),
                    (1, j) => {
                        let sign = if j % 2 == 0 { 1 } else { -1 };
                        self.m(rs, beta, alpha, j as i64).mul(Frac(sign, 1))
                    }
                    (3, 2) => {
                        let ab = add(alpha, beta);
                        Frac::new(1, 3).mul(self.m(rs, &ab, alpha, 2))
                    }
                    (2, 3) => {
                        let ab = add(alpha, beta);
                        Frac::new(-2, 3).mul(self.m(rs, &ab, beta, 2))
                    }
                    _ => panic!("unexpected root combination {i}α+{j}β"),
                };
                out.push(CommutatorTerm {
                    i,
                    j,
                    target,
                    coeff: coeff.integer(),
                });
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_system::RootKind;

    fn systems() -> Vec<RootSystem> {
        [
            (RootKind::A, 3),
            (RootKind::B, 2),
            (RootKind::C, 2),
            (RootKind::G, 2),
            (RootKind::B, 3),
            (RootKind::C, 3),
            (RootKind::B, 4),
            (RootKind::C, 4),
            (RootKind::D, 4),
        ]
        .into_iter()
        .map(|(k, r)| RootSystem::new(k, r).unwrap())
        .chain(std::iter::once(RootSystem::build_unrestricted(RootKind::F, 4).unwrap()))
        .collect()
    }

    #[test]
    fn magnitudes_and_antisymmetry() {
        for rs in systems() {
            let sc = StructureConstants::new(&rs);
            let b = Builder { rs: &rs, pos: HashMap::new() };
            for a in 0..rs.num_positive() {
                for c in 0..rs.num_positive() {
                    assert_eq!(sc.n(a, c), -sc.n(c, a));
                    if rs.sum_index(a, c).is_some() {
                        let p = b.string_below(&rs.root(a).coeffs, &rs.root(c).coeffs);
                        assert_eq!(sc.n(a, c).abs(), p + 1, "{} {a} {c}", rs.label());
                    } else {
                        assert_eq!(sc.n(a, c), 0);
                    }
                }
            }
        }
    }

    #[test]
    fn first_commutator_coefficient_is_n() {
        for rs in systems() {
            let sc = StructureConstants::new(&rs);
            for a in 0..rs.num_positive() {
                for c in 0..rs.num_positive() {
                    if a == c {
                        continue;
                    }
                    let terms = sc.commutator(a, c);
                    match rs.sum_index(a, c) {
                        Some(s) => {
                            assert_eq!(terms[0].target, s);
                            assert_eq!((terms[0].i, terms[0].j), (1, 1));
                            assert_eq!(terms[0].coeff, sc.n(a, c));
                        }
                        None => assert!(terms.is_empty()),
                    }
                }
            }
        }
    }

    #[test]
    fn b2_short_short_coefficient_is_two() {
        let rs = RootSystem::new(RootKind::B, 2).unwrap();
        let sc = StructureConstants::new(&rs);
        // α = (0,1), β = (1,1): α + β = (1,2)
        let terms = sc.commutator(1, 2);
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].target, 3);
        assert_eq!(terms[0].coeff.abs(), 2);
    }

    #[test]
    fn g2_long_pair_commutes() {
        let rs = RootSystem::new(RootKind::G, 2).unwrap();
        let sc = StructureConstants::new(&rs);
        // long roots (0,1), (3,1), (3,2): only (0,1)+(3,1) is a root
        assert!(sc.commutator(1, 5).is_empty());
        assert!(sc.commutator(4, 5).is_empty());
    }
}
