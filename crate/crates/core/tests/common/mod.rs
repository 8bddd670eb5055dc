//! Natural matrix representations of types B, C and D, used to check the
//! normal-form multiplication against honest matrix products.
#![allow(dead_code)]

pub mod tables;

use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use uclasses::engine::{Engine, StructureConstants, UnipotentElement};
use uclasses::rings::{FfElem, GaloisField};
use uclasses::root_system::{RootKind, RootSystem};

pub type IntMatrix = Vec<Vec<i64>>;
pub type FieldMatrix = Vec<Vec<FfElem>>;

pub fn root_system(kind: RootKind, rank: usize) -> Arc<RootSystem> {
    Arc::new(RootSystem::new(kind, rank).unwrap())
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_element(field: &GaloisField, n: usize, rng: &mut StdRng) -> UnipotentElement<FfElem> {
    let q = field.order() as u32;
    UnipotentElement::new((0..n).map(|_| FfElem(rng.random_range(0..q))).collect())
}

fn zero(d: usize) -> IntMatrix {
    vec![vec![0; d]; d]
}

fn int_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let d = a.len();
    let mut c = zero(d);
    for i in 0..d {
        for k in 0..d {
            if a[i][k] != 0 {
                for j in 0..d {
                    c[i][j] += a[i][k] * b[k][j];
                }
            }
        }
    }
    c
}

fn bracket(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let (ab, ba) = (int_mul(a, b), int_mul(b, a));
    ab.iter()
        .zip(&ba)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect())
        .collect()
}

fn scale(a: &IntMatrix, n: i64) -> IntMatrix {
    a.iter().map(|r| r.iter().map(|x| x * n).collect()).collect()
}

/// Chevalley basis elements `E_β` for the positive roots of a classical
/// type in its natural representation.
pub struct Realization {
    pub rs: Arc<RootSystem>,
    pub dim: usize,
    pub roots: Vec<IntMatrix>,
}

impl Realization {
    /// Basis order `v_1..v_n, (v_0,) v_{−n}..v_{−1}`.
    pub fn new(rs: Arc<RootSystem>) -> Self {
        let n = rs.rank();
        let kind = rs.kind();
        let dim = match kind {
            RootKind::B => 2 * n + 1,
            RootKind::C | RootKind::D => 2 * n,
            _ => panic!("no natural representation for {}", rs.label()),
        };
        let pos = |i: usize| i - 1;
        let neg = |i: usize| dim - i;
        let mid = n;
        let unit = |entries: &[(usize, usize, i64)]| {
            let mut m = zero(dim);
            for &(r, c, v) in entries {
                m[r][c] += v;
            }
            m
        };
        let simple: Vec<IntMatrix> = (1..=n)
            .map(|i| {
                if i < n {
                    unit(&[(pos(i), pos(i + 1), 1), (neg(i + 1), neg(i), -1)])
                } else {
                    match kind {
                        RootKind::B => unit(&[(pos(n), mid, 2), (mid, neg(n), -1)]),
                        RootKind::C => unit(&[(pos(n), neg(n), 1)]),
                        _ => unit(&[(pos(n - 1), neg(n), 1), (pos(n), neg(n - 1), -1)]),
                    }
                }
            })
            .collect();
        let sc = StructureConstants::new(&rs);
        let mut order: Vec<usize> = (0..rs.num_positive()).collect();
        order.sort_by_key(|&i| rs.root(i).height());
        let mut roots = vec![zero(dim); rs.num_positive()];
        for g in order {
            let coeffs = &rs.root(g).coeffs;
            if let Some(s) = (coeffs.iter().sum::<i32>() == 1).then(|| coeffs.iter().position(|&c| c == 1)) {
                roots[g] = simple[s.unwrap()].clone();
                continue;
            }
            let (a, b) = (0..rs.num_positive())
                .find_map(|a| {
                    let rest: Vec<i32> = coeffs.iter().zip(&rs.root(a).coeffs).map(|(x, y)| x - y).collect();
                    rs.find(&rest).map(|b| (a, b))
                })
                .unwrap();
            let nab = sc.n(a, b);
            roots[g] = bracket(&roots[a], &roots[b])
                .into_iter()
                .map(|r| {
                    r.into_iter()
                        .map(|x| {
                            assert_eq!(x % nab, 0);
                            x / nab
                        })
                        .collect()
                })
                .collect();
        }
        Realization { rs, dim, roots }
    }

    /// Checks `[E_a, E_b] = N_{a,b} E_{a+b}` (zero when `a + b` is not a
    /// root) for all pairs of positive roots.
    pub fn lie_relations_hold(&self, n: impl Fn(usize, usize) -> i64) -> bool {
        let k = self.roots.len();
        (0..k).all(|a| {
            (0..k).all(|b| {
                let lhs = bracket(&self.roots[a], &self.roots[b]);
                match self.rs.sum_index(a, b) {
                    Some(c) => lhs == scale(&self.roots[c], n(a, b)),
                    None => lhs.iter().flatten().all(|&x| x == 0),
                }
            })
        })
    }

    /// `exp(E_β)` as integer matrices `E^k/k!`, `k = 0, 1, ...`.
    fn divided_powers(&self, i: usize) -> Vec<IntMatrix> {
        let mut out = vec![];
        let mut id = zero(self.dim);
        for (j, row) in id.iter_mut().enumerate() {
            row[j] = 1;
        }
        let mut cur = id;
        let mut k = 0;
        while cur.iter().flatten().any(|&x| x != 0) {
            out.push(cur.clone());
            k += 1;
            cur = int_mul(&cur, &self.roots[i])
                .into_iter()
                .map(|r| {
                    r.into_iter()
                        .map(|x| {
                            assert_eq!(x % k, 0);
                            x / k
                        })
                        .collect()
                })
                .collect();
        }
        out
    }

    pub fn over(&self, field: &GaloisField) -> FieldRealization {
        let values: Vec<FfElem> = field.elements().collect();
        let sparse = (0..self.roots.len())
            .map(|i| {
                let powers = self.divided_powers(i);
                values
                    .iter()
                    .map(|&t| {
                        let mut entries = vec![];
                        for r in 0..self.dim {
                            for c in 0..self.dim {
                                let x = powers.iter().enumerate().skip(1).fold(FfElem(0), |acc, (k, m)| {
                                    field.fadd(acc, field.fmul(field.fpow(t, k as u64), field.from_integer(m[r][c])))
                                });
                                if x.0 != 0 {
                                    entries.push((r, c, x));
                                }
                            }
                        }
                        entries
                    })
                    .collect()
            })
            .collect();
        FieldRealization {
            field: field.clone(),
            dim: self.dim,
            sparse,
        }
    }
}

/// The realization reduced into `F_q`.
pub struct FieldRealization {
    pub field: GaloisField,
    pub dim: usize,
    /// Nonzero entries of `x_β(t) − 1`, indexed by root and by `t`.
    sparse: Vec<Vec<Vec<(usize, usize, FfElem)>>>,
}

impl FieldRealization {
    pub fn identity(&self) -> FieldMatrix {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| FfElem((i == j) as u32)).collect())
            .collect()
    }

    pub fn mul(&self, a: &FieldMatrix, b: &FieldMatrix) -> FieldMatrix {
        let f = &self.field;
        let mut c = vec![vec![FfElem(0); self.dim]; self.dim];
        for i in 0..self.dim {
            for k in 0..self.dim {
                if a[i][k].0 != 0 {
                    for j in 0..self.dim {
                        c[i][j] = f.fadd(c[i][j], f.fmul(a[i][k], b[k][j]));
                    }
                }
            }
        }
        c
    }

    /// `a · x_β(t)`.
    pub fn mul_root(&self, a: &FieldMatrix, i: usize, t: FfElem) -> FieldMatrix {
        let f = &self.field;
        let mut out = a.clone();
        for &(r, c, x) in &self.sparse[i][t.0 as usize] {
            for (row, src) in out.iter_mut().zip(a) {
                row[c] = f.fadd(row[c], f.fmul(src[r], x));
            }
        }
        out
    }

    /// `x_β(t) = Σ t^k E_β^k / k!`.
    pub fn root_element(&self, i: usize, t: FfElem) -> FieldMatrix {
        self.mul_root(&self.identity(), i, t)
    }

    /// Matrix of the normal form `∏ x_j(c_j)`, in ascending index order.
    pub fn image(&self, x: &UnipotentElement<FfElem>) -> FieldMatrix {
        x.coeffs
            .iter()
            .enumerate()
            .fold(self.identity(), |acc, (j, &c)| if c.0 == 0 { acc } else { self.mul_root(&acc, j, c) })
    }
}

/// Exhaustive check over `F_2`: the image map is injective and
/// `φ(x · x_i(1)) = φ(x) φ(x_i(1))` for every element and every root.
pub fn matrix_check_exhaustive(kind: RootKind, rank: usize) -> Result<(), String> {
    let rs = root_system(kind, rank);
    let real = Realization::new(rs.clone());
    let field = GaloisField::with_order(2).unwrap();
    let engine = Engine::new(rs.clone(), field.clone());
    if !real.lie_relations_hold(|a, b| engine.constants().n(a, b)) {
        return Err(format!("{}: Lie relations fail", rs.label()));
    }
    let fr = real.over(&field);
    let n = rs.num_positive();
    let one = FfElem(1);
    // images indexed by the bit pattern of the coordinates
    let mut table: Vec<FieldMatrix> = vec![fr.identity()];
    for idx in 1usize..1 << n {
        let top = usize::BITS as usize - 1 - idx.leading_zeros() as usize;
        let m = fr.mul_root(&table[idx ^ 1 << top], top, one);
        table.push(m);
    }
    let mut seen = std::collections::HashSet::new();
    for (idx, m) in table.iter().enumerate() {
        let x = UnipotentElement::new((0..n).map(|j| FfElem((idx >> j & 1) as u32)).collect());
        for i in 0..n {
            let xy = engine.multiply(&x, &engine.root_element(i, one)).unwrap();
            let xy_idx = xy.coeffs.iter().enumerate().fold(0usize, |acc, (j, c)| acc | (c.0 as usize) << j);
            if table[xy_idx] != fr.mul_root(m, i, one) {
                return Err(format!("{}: product of {:?} and x_{}(1) differs", rs.label(), x.coeffs, i + 1));
            }
        }
        if !seen.insert(m) {
            return Err(format!("{}: image of {:?} repeats", rs.label(), x.coeffs));
        }
    }
    Ok(())
}

/// `φ(xy) = φ(x)φ(y)` for random pairs over `F_q`.
pub fn matrix_check_random(kind: RootKind, rank: usize, q: u64, samples: usize, seed: u64) -> Result<(), String> {
    let rs = root_system(kind, rank);
    let field = GaloisField::with_order(q).unwrap();
    let engine = Engine::new(rs.clone(), field.clone());
    let fr = Realization::new(rs.clone()).over(&field);
    let mut rng = rng(seed);
    for _ in 0..samples {
        let x = random_element(&field, rs.num_positive(), &mut rng);
        let y = random_element(&field, rs.num_positive(), &mut rng);
        let xy = engine.multiply(&x, &y).unwrap();
        if fr.image(&xy) != fr.mul(&fr.image(&x), &fr.image(&y)) {
            return Err(format!("{} over F_{q}: {:?} * {:?}", rs.label(), x.coeffs, y.coeffs));
        }
    }
    Ok(())
}

/// `(xy)z = x(yz)` for random triples over `F_q`.
pub fn associativity_check(kind: RootKind, rank: usize, q: u64, samples: usize, seed: u64) -> Result<(), String> {
    let rs = root_system(kind, rank);
    let field = GaloisField::with_order(q).unwrap();
    let engine = Engine::new(rs.clone(), field.clone());
    let mut rng = rng(seed);
    let n = rs.num_positive();
    for _ in 0..samples {
        let [x, y, z] = [(); 3].map(|_| random_element(&field, n, &mut rng));
        let left = engine.multiply(&engine.multiply(&x, &y).unwrap(), &z).unwrap();
        let right = engine.multiply(&x, &engine.multiply(&y, &z).unwrap()).unwrap();
        if left != right {
            return Err(format!("{} over F_{q}: {:?} {:?} {:?}", rs.label(), x.coeffs, y.coeffs, z.coeffs));
        }
    }
    Ok(())
}

/// Size of the subgroup generated by the root elements `x_i(λ)`, `λ` in an
/// `F_p`-basis of `F_q`, found by closing under right multiplication.
pub fn generated_order(kind: RootKind, rank: usize, q: u64) -> usize {
    let rs = root_system(kind, rank);
    let field = GaloisField::with_order(q).unwrap();
    let engine = Engine::new(rs.clone(), field.clone());
    let gens: Vec<UnipotentElement<FfElem>> = (0..rs.num_positive())
        .flat_map(|i| field.basis().into_iter().map(move |b| (i, b)))
        .map(|(i, b)| engine.root_element(i, b))
        .collect();
    let mut seen = std::collections::HashSet::new();
    let mut stack = vec![engine.identity()];
    seen.insert(engine.identity());
    while let Some(x) = stack.pop() {
        for g in &gens {
            let y = engine.multiply(&x, g).unwrap();
            if seen.insert(y.clone()) {
                stack.push(y);
            }
        }
    }
    seen.len()
}
