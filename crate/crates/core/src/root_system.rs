//! Root systems of types A–D and G2 (plus F4 for engine-only use), with the
//! enumeration of positive roots that every later stage indexes into.
//!
//! Roots are stored in the simple-root basis. B2, G2, B3 and C3 use fixed
//! embedded enumerations, ordered by height and then by descending
//! coefficient vector. All other systems are ordered by height
//! and then by ascending coefficient vector: for C4 the descending rule
//! produces a step whose coefficient `a_j − 1` is not a monomial even in
//! good characteristic, while the ascending rule avoids it for every
//! supported type.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RootKind {
    A,
    B,
    C,
    D,
    F,
    G,
}

impl RootKind {
    pub fn letter(self) -> char {
        match self {
            RootKind::A => 'A',
            RootKind::B => 'B',
            RootKind::C => 'C',
            RootKind::D => 'D',
            RootKind::F => 'F',
            RootKind::G => 'G',
        }
    }
}

impl fmt::Display for RootKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for RootKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(RootKind::A),
            "B" => Ok(RootKind::B),
            "C" => Ok(RootKind::C),
            "D" => Ok(RootKind::D),
            "F" => Ok(RootKind::F),
            "G" => Ok(RootKind::G),
            other => Err(Error::Usage(format!("unknown root system type '{other}'"))),
        }
    }
}

/// A root written in the basis of simple roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root {
    pub coeffs: Vec<i32>,
}

impl Root {
    pub fn new(coeffs: Vec<i32>) -> Self {
        Root { coeffs }
    }

    pub fn height(&self) -> i32 {
        self.coeffs.iter().sum()
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A crystallographic root system together with a fixed enumeration
/// `β_1, …, β_N` of its positive roots refining the dominance order.
#[derive(Debug, Clone)]
pub struct RootSystem {
    kind: RootKind,
    rank: usize,
    positive: Vec<Root>,
    gram: Vec<Vec<i64>>,
    cartan: Vec<Vec<i64>>,
    index: HashMap<Vec<i32>, usize>,
}

// Fixed enumerations, listed in order.
const B2_ORDER: &[&[i32]] = &[&[1, 0], &[0, 1], &[1, 1], &[1, 2]];
const G2_ORDER: &[&[i32]] = &[&[1, 0], &[0, 1], &[1, 1], &[2, 1], &[3, 1], &[3, 2]];
const B3_ORDER: &[&[i32]] = &[
    &[1, 0, 0],
    &[0, 1, 0],
    &[0, 0, 1],
    &[1, 1, 0],
    &[0, 1, 1],
    &[1, 1, 1],
    &[0, 1, 2],
    &[1, 1, 2],
    &[1, 2, 2],
];
const C3_ORDER: &[&[i32]] = &[
    &[1, 0, 0],
    &[0, 1, 0],
    &[0, 0, 1],
    &[1, 1, 0],
    &[0, 1, 1],
    &[1, 1, 1],
    &[0, 2, 1],
    &[1, 2, 1],
    &[2, 2, 1],
];

impl RootSystem {
    /// Builds one of the systems the classification pipeline supports:
    /// A1–A4, B2–B4, C2–C4, D4 and G2.
    pub fn new(kind: RootKind, rank: usize) -> Result<Self> {
        let ok = match kind {
            RootKind::A => (1..=4).contains(&rank),
            RootKind::B | RootKind::C => (2..=4).contains(&rank),
            RootKind::D => rank == 4,
            RootKind::G => rank == 2,
            RootKind::F => false,
        };
        if !ok {
            return Err(Error::UnsupportedType(kind.letter(), rank));
        }
        Self::build_unrestricted(kind, rank)
    }

    /// Builds any system of a known type, including F4 and ranks above 4.
    /// Only the group engine is meant to be used with these.
    pub fn build_unrestricted(kind: RootKind, rank: usize) -> Result<Self> {
        Self::build(kind, rank, None)
    }

    /// Builds a supported system with a caller-chosen enumeration, which must
    /// list every positive root once with non-decreasing height.
    pub fn with_order(kind: RootKind, rank: usize, order: &[Vec<i32>]) -> Result<Self> {
        Self::new(kind, rank)?;
        Self::build(kind, rank, Some(order))
    }

    fn build(kind: RootKind, rank: usize, custom: Option<&[Vec<i32>]>) -> Result<Self> {
        let gram = gram_matrix(kind, rank)?;
        let cartan: Vec<Vec<i64>> = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| 2 * gram[i][j] / gram[j][j])
                    .collect()
            })
            .collect();
        let generated = generate_positive_roots(rank, &cartan);

        let embedded = match (kind, rank) {
            (RootKind::B, 2) => Some(B2_ORDER),
            (RootKind::G, 2) => Some(G2_ORDER),
            (RootKind::B, 3) => Some(B3_ORDER),
            (RootKind::C, 3) => Some(C3_ORDER),
            _ => None,
        };
        if let Some(order) = custom {
            let roots: Vec<Root> = order.iter().map(|c| Root::new(c.clone())).collect();
            let a: BTreeSet<&Root> = roots.iter().collect();
            let b: BTreeSet<&Root> = generated.iter().collect();
            if roots.len() != generated.len() || a != b {
                return Err(Error::InvalidOrder("not a listing of the positive roots".into()));
            }
            if roots.windows(2).any(|w| w[0].height() > w[1].height()) {
                return Err(Error::InvalidOrder("heights must be non-decreasing".into()));
            }
            return Ok(Self::assemble(kind, rank, roots, gram, cartan));
        }
        let positive: Vec<Root> = match embedded {
            Some(table) => {
                let roots: Vec<Root> = table.iter().map(|c| Root::new(c.to_vec())).collect();
                let a: BTreeSet<&Root> = roots.iter().collect();
                let b: BTreeSet<&Root> = generated.iter().collect();
                assert_eq!(a, b, "embedded enumeration disagrees with generated roots");
                roots
            }
            None => {
                let mut roots = generated;
                roots.sort_by(|x, y| x.height().cmp(&y.height()).then_with(|| x.coeffs.cmp(&y.coeffs)));
                roots
            }
        };
        Ok(Self::assemble(kind, rank, positive, gram, cartan))
    }

    fn assemble(kind: RootKind, rank: usize, positive: Vec<Root>, gram: Vec<Vec<i64>>, cartan: Vec<Vec<i64>>) -> Self {
        let index = positive
            .iter()
            .enumerate()
            .map(|(i, r)| (r.coeffs.clone(), i))
            .collect();
        RootSystem {
            kind,
            rank,
            positive,
            gram,
            cartan,
            index,
        }
    }

    pub fn kind(&self) -> RootKind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of positive roots.
    pub fn num_positive(&self) -> usize {
        self.positive.len()
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    pub fn root(&self, i: usize) -> &Root {
        &self.positive[i]
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.kind, self.rank)
    }

    /// Index of a positive root given by its coefficients.
    pub fn find(&self, coeffs: &[i32]) -> Option<usize> {
        self.index.get(coeffs).copied()
    }

    /// Whether `coeffs` is a root (positive or negative).
    pub fn is_root(&self, coeffs: &[i32]) -> bool {
        if self.find(coeffs).is_some() {
            return true;
        }
        let neg: Vec<i32> = coeffs.iter().map(|c| -c).collect();
        self.find(&neg).is_some()
    }

    /// Index of `β_i + β_j` if it is a root.
    pub fn sum_index(&self, i: usize, j: usize) -> Option<usize> {
        let s: Vec<i32> = self.positive[i]
            .coeffs
            .iter()
            .zip(&self.positive[j].coeffs)
            .map(|(a, b)| a + b)
            .collect();
        self.find(&s)
    }

    /// Index of `a·β_i + b·β_j` if it is a positive root.
    pub fn combination_index(&self, a: i32, i: usize, b: i32, j: usize) -> Option<usize> {
        let s: Vec<i32> = self.positive[i]
            .coeffs
            .iter()
            .zip(&self.positive[j].coeffs)
            .map(|(x, y)| a * x + b * y)
            .collect();
        self.find(&s)
    }

    /// Symmetric bilinear form on the simple-root lattice (integer scaled).
    pub fn inner(&self, x: &[i32], y: &[i32]) -> i64 {
        let mut s = 0i64;
        for i in 0..self.rank {
            if x[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                s += x[i] as i64 * self.gram[i][j] * y[j] as i64;
            }
        }
        s
    }

    /// `β_i ⪯ β_j`: the difference is a nonnegative combination of simple roots.
    pub fn dominance_leq(&self, i: usize, j: usize) -> bool {
        self.positive[i]
            .coeffs
            .iter()
            .zip(&self.positive[j].coeffs)
            .all(|(a, b)| a <= b)
    }

    pub fn bad_primes(&self) -> Vec<u64> {
        match self.kind {
            RootKind::A => vec![],
            RootKind::B | RootKind::C | RootKind::D => vec![2],
            RootKind::G | RootKind::F => vec![2, 3],
        }
    }

    pub fn is_bad_prime(&self, p: u64) -> bool {
        self.bad_primes().contains(&p)
    }

    /// Text layout of the enumeration: one `index: coefficients` row per root.
    pub fn enumeration_table(&self) -> String {
        let mut out = format!("Enumeration of positive roots for {}\n", self.label());
        for (i, r) in self.positive.iter().enumerate() {
            let coeffs: Vec<String> = r.coeffs.iter().map(|c| c.to_string()).collect();
            out.push_str(&format!("{:>2} | {}\n", i + 1, coeffs.join(" ")));
        }
        out
    }
}

fn gram_matrix(kind: RootKind, rank: usize) -> Result<Vec<Vec<i64>>> {
    let unsupported = Err(Error::UnsupportedType(kind.letter(), rank));
    let mut g = vec![vec![0i64; rank]; rank];
    match kind {
        RootKind::A => {
            if rank < 1 {
                return unsupported;
            }
            for i in 0..rank {
                g[i][i] = 2;
                if i + 1 < rank {
                    g[i][i + 1] = -1;
                    g[i + 1][i] = -1;
                }
            }
        }
        RootKind::B => {
            if rank < 2 {
                return unsupported;
            }
            for i in 0..rank {
                g[i][i] = 4;
                if i + 1 < rank {
                    g[i][i + 1] = -2;
                    g[i + 1][i] = -2;
                }
            }
            g[rank - 1][rank - 1] = 2;
        }
        RootKind::C => {
            if rank < 2 {
                return unsupported;
            }
            for i in 0..rank {
                g[i][i] = 2;
                if i + 1 < rank {
                    g[i][i + 1] = -1;
                    g[i + 1][i] = -1;
                }
            }
            g[rank - 1][rank - 1] = 4;
            g[rank - 2][rank - 1] = -2;
            g[rank - 1][rank - 2] = -2;
        }
        RootKind::D => {
            if rank < 3 {
                return unsupported;
            }
            for i in 0..rank {
                g[i][i] = 2;
            }
            for i in 0..rank - 2 {
                g[i][i + 1] = -1;
                g[i + 1][i] = -1;
            }
            g[rank - 3][rank - 1] = -1;
            g[rank - 1][rank - 3] = -1;
        }
        RootKind::G => {
            if rank != 2 {
                return unsupported;
            }
            g = vec![vec![2, -3], vec![-3, 6]];
        }
        RootKind::F => {
            if rank != 4 {
                return unsupported;
            }
            g = vec![
                vec![4, -2, 0, 0],
                vec![-2, 4, -2, 0],
                vec![0, -2, 2, -1],
                vec![0, 0, -1, 2],
            ];
        }
    }
    Ok(g)
}

/// Positive roots via root strings: `β + α_i` is a root iff
/// `r − ⟨β, α_i^∨⟩ > 0`, where `r` is the length of the `α_i`-string below `β`.
fn generate_positive_roots(rank: usize, cartan: &[Vec<i64>]) -> Vec<Root> {
    let mut all: BTreeSet<Vec<i32>> = BTreeSet::new();
    let mut layer: Vec<Vec<i32>> = (0..rank)
        .map(|i| {
            let mut v = vec![0; rank];
            v[i] = 1;
            v
        })
        .collect();
    all.extend(layer.iter().cloned());
    while !layer.is_empty() {
        let mut next: BTreeSet<Vec<i32>> = BTreeSet::new();
        for beta in &layer {
            for i in 0..rank {
                let mut r = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if all.contains(&down) {
                        r += 1;
                    } else {
                        break;
                    }
                }
                let pairing: i64 = (0..rank).map(|j| beta[j] as i64 * cartan[j][i]).sum();
                if r - pairing > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if !all.contains(&up) {
                        next.insert(up);
                    }
                }
            }
        }
        all.extend(next.iter().cloned());
        layer = next.into_iter().collect();
    }
    all.into_iter().map(Root::new).collect()
}
