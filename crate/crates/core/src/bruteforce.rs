//! Exhaustive enumeration of the conjugacy classes of `U(q)` for small
//! groups, used to check the symbolic results.
//!
//! Elements are indexed by their normal-form coordinates read as base-`q`
//! digits. Orbits are found by breadth-first search under conjugation by
//! the root elements `x_i(λ)`, `λ` running over an `F_p`-basis of `F_q`,
//! with a flat bitset marking visited elements. Centralizer orders are
//! computed independently by a depth-first search over the coordinates.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::analyzer::Analysis;
use crate::classifier::Classification;
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::rings::{FfElem, GaloisField};
use crate::root_system::RootSystem;

/// Largest group order that is enumerated.
pub const ENUMERATION_CEILING: u64 = 1 << 22;

/// Frontiers smaller than this are expanded sequentially.
const PARALLEL_FRONTIER: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    /// Smallest element of the class by index, as normal-form coordinates.
    pub representative: Vec<u32>,
    pub size: u64,
    pub centralizer: u64,
    /// Families (indices into a classification) whose representative
    /// pattern meets the class; filled in by [`verify_families`].
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub families: Vec<usize>,
    /// Whether some element of the class fits no family pattern.
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    pub unmatched: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Profile {
    pub elements: u64,
    pub conjugations: u64,
    pub orbit_time: Duration,
    pub centralizer_time: Duration,
    pub parallel: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BruteForce {
    pub q: u64,
    pub num_roots: usize,
    pub classes: Vec<ClassRecord>,
    pub profile: Profile,
}

impl BruteForce {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// `|class| · |C_U(y)| = |U|` for every record.
    pub fn orbit_stabilizer_holds(&self) -> bool {
        let order = (self.q as u128).pow(self.num_roots as u32);
        self.classes
            .iter()
            .all(|c| c.size as u128 * c.centralizer as u128 == order)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    /// Use the data-parallel paths (only effective with the `parallel`
    /// feature).
    pub parallel: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            parallel: cfg!(feature = "parallel"),
        }
    }
}

fn par_map<T: Sync, R: Send>(items: &[T], parallel: bool, f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = parallel;
    items.iter().map(f).collect()
}

/// The group `U(q)` with index encoding.
pub struct Enumerator {
    engine: Engine<GaloisField>,
    q: u64,
    n: usize,
    generators: Vec<(usize, FfElem, FfElem)>,
}

impl Enumerator {
    pub fn new(rs: Arc<RootSystem>, q: u64) -> Result<Self> {
        let field = GaloisField::with_order(q)?;
        let n = rs.num_positive();
        let order = (q as u128).checked_pow(n as u32);
        if order.is_none_or(|o| o > ENUMERATION_CEILING as u128) {
            return Err(Error::TooLarge { q, n });
        }
        let generators = (0..n)
            .flat_map(|i| field.basis().into_iter().map(move |b| (i, b)))
            .map(|(i, b)| (i, b, field.fneg(b)))
            .collect();
        Ok(Enumerator {
            engine: Engine::new(rs, field),
            q,
            n,
            generators,
        })
    }

    pub fn engine(&self) -> &Engine<GaloisField> {
        &self.engine
    }

    pub fn order(&self) -> u64 {
        self.q.pow(self.n as u32)
    }

    pub fn decode(&self, mut idx: u64) -> Vec<FfElem> {
        (0..self.n)
            .map(|_| {
                let d = idx % self.q;
                idx /= self.q;
                FfElem(d as u32)
            })
            .collect()
    }

    pub fn encode(&self, coeffs: &[FfElem]) -> u64 {
        coeffs.iter().rev().fold(0u64, |acc, c| acc * self.q + c.0 as u64)
    }

    /// `x_i(λ) · y · x_i(−λ)`.
    fn conjugate_by_generator(&self, g: &(usize, FfElem, FfElem), y: &[FfElem]) -> Vec<FfElem> {
        let (i, lambda, minus) = *g;
        let mut acc = vec![FfElem(0); self.n];
        acc[i] = lambda;
        for (k, c) in y.iter().enumerate() {
            self.engine.mul_letter(&mut acc, k, c, self.n);
        }
        self.engine.mul_letter(&mut acc, i, &minus, self.n);
        acc
    }

    fn neighbours(&self, idx: u64) -> Vec<u64> {
        let y = self.decode(idx);
        self.generators
            .iter()
            .map(|g| self.encode(&self.conjugate_by_generator(g, &y)))
            .collect()
    }

    /// The orbit of `seed`, marking every element in `seen`.
    fn orbit(&self, seed: u64, seen: &mut [u64], parallel: bool, conjugations: &mut u64) -> Vec<u64> {
        let mark = |seen: &mut [u64], x: u64| {
            let (w, b) = ((x / 64) as usize, x % 64);
            let fresh = seen[w] >> b & 1 == 0;
            seen[w] |= 1 << b;
            fresh
        };
        mark(seen, seed);
        let mut members = vec![seed];
        let mut frontier = vec![seed];
        while !frontier.is_empty() {
            *conjugations += (frontier.len() * self.generators.len()) as u64;
            let next: Vec<Vec<u64>> = par_map(&frontier, parallel && frontier.len() >= PARALLEL_FRONTIER, |&y| {
                self.neighbours(y)
            });
            frontier = next
                .into_iter()
                .flatten()
                .filter(|&x| mark(seen, x))
                .collect();
            members.extend_from_slice(&frontier);
        }
        members
    }

    /// `|C_U(y)|`, by extending the centralizing elements of `U/M_k` one
    /// coordinate at a time. Since `x_k(c)` is central modulo `M_{k+1}`,
    /// whether a prefix commutes with `y` modulo `M_{k+1}` does not depend
    /// on its `k`-th entry.
    pub fn centralizer_order(&self, y: &[FfElem]) -> u64 {
        let values: Vec<FfElem> = self.engine.ring().elements().collect();
        let mut x = vec![FfElem(0); self.n];
        let (mut xy, mut yx) = (vec![FfElem(0); self.n], vec![FfElem(0); self.n]);
        self.count_centralizing(&mut x, y, 0, &values, &mut xy, &mut yx)
    }

    fn count_centralizing(
        &self,
        x: &mut [FfElem],
        y: &[FfElem],
        k: usize,
        values: &[FfElem],
        xy: &mut [FfElem],
        yx: &mut [FfElem],
    ) -> u64 {
        if k == self.n {
            return 1;
        }
        xy.copy_from_slice(x);
        yx.copy_from_slice(y);
        for j in 0..=k {
            self.engine.mul_letter(xy, j, &y[j], k + 1);
            self.engine.mul_letter(yx, j, &x[j], k + 1);
        }
        if xy[k] != yx[k] {
            return 0;
        }
        if k + 1 == self.n {
            return values.len() as u64;
        }
        let mut total = 0;
        for &c in values {
            x[k] = c;
            total += self.count_centralizing(x, y, k + 1, values, xy, yx);
        }
        x[k] = FfElem(0);
        total
    }

    /// All conjugacy classes, in order of their smallest element.
    pub fn classes(&self, opts: Options) -> BruteForce {
        let mut profile = Profile {
            elements: self.order(),
            parallel: opts.parallel && cfg!(feature = "parallel"),
            ..Profile::default()
        };
        let start = Instant::now();
        let (orbits, conjugations) = self.orbits(opts.parallel);
        profile.conjugations = conjugations;
        profile.orbit_time = start.elapsed();
        let start = Instant::now();
        let classes = par_map(&orbits, opts.parallel, |o| {
            let rep = self.decode(o[0]);
            ClassRecord {
                centralizer: self.centralizer_order(&rep),
                representative: rep.iter().map(|c| c.0).collect(),
                size: o.len() as u64,
                families: vec![],
                unmatched: false,
            }
        });
        profile.centralizer_time = start.elapsed();
        BruteForce {
            q: self.q,
            num_roots: self.n,
            classes,
            profile,
        }
    }

    /// Every orbit as a list of element indices, seed first.
    pub fn orbits(&self, parallel: bool) -> (Vec<Vec<u64>>, u64) {
        let order = self.order();
        let mut seen = vec![0u64; order.div_ceil(64) as usize];
        let mut orbits = vec![];
        let mut conjugations = 0;
        for seed in 0..order {
            if seen[(seed / 64) as usize] >> (seed % 64) & 1 == 1 {
                continue;
            }
            orbits.push(self.orbit(seed, &mut seen, parallel, &mut conjugations));
        }
        (orbits, conjugations)
    }
}

/// Conjugacy classes of `U(q)` by exhaustive enumeration.
pub fn enumerate_classes(rs: Arc<RootSystem>, q: u64, opts: Options) -> Result<BruteForce> {
    Ok(Enumerator::new(rs, q)?.classes(opts))
}

/// Expected and observed number of classes of one family, keyed by
/// centralizer order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyCheck {
    pub label: String,
    pub expected: BTreeMap<u128, i128>,
    pub observed: BTreeMap<u128, i128>,
}

impl FamilyCheck {
    pub fn passed(&self) -> bool {
        self.expected == self.observed
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub q: u64,
    pub classes: usize,
    /// Classes meeting no family pattern.
    pub uncovered: usize,
    /// Classes meeting more than one family pattern.
    pub overlapping: usize,
    /// Classes with an element outside every family pattern.
    pub stray_elements: usize,
    pub orbit_stabilizer: bool,
    pub families: Vec<FamilyCheck>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.uncovered == 0
            && self.overlapping == 0
            && self.orbit_stabilizer
            && self.families.iter().all(FamilyCheck::passed)
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out = vec![];
        if self.uncovered > 0 {
            out.push(format!("{} classes meet no family", self.uncovered));
        }
        if self.overlapping > 0 {
            out.push(format!("{} classes meet several families", self.overlapping));
        }
        if !self.orbit_stabilizer {
            out.push("orbit-stabilizer identity fails".to_string());
        }
        for f in self.families.iter().filter(|f| !f.passed()) {
            out.push(format!(
                "family {}: expected {:?}, observed {:?} (centralizer order -> classes)",
                f.label, f.expected, f.observed
            ));
        }
        out
    }
}

/// Support masks `(c, c ∪ d)` of a family's representatives.
fn masks(c: &[usize], d: &[usize]) -> (u64, u64) {
    let c_mask = c.iter().fold(0u64, |m, &j| m | 1 << j);
    let cd_mask = d.iter().fold(c_mask, |m, &j| m | 1 << j);
    (c_mask, cd_mask)
}

/// Checks an analyzed classification against the classes of `U(q)`: every
/// class meets exactly one family pattern (nonzero on `c`, zero outside
/// `c ∪ d`), and each family has the predicted number of classes for every
/// centralizer order.
pub fn verify_families(cl: &Classification, analysis: &Analysis, q: u64, opts: Options) -> Result<VerificationReport> {
    let field = GaloisField::with_order(q)?;
    if field.characteristic() != cl.p {
        return Err(Error::Usage(format!("q = {q} is not a power of p = {}", cl.p)));
    }
    let en = Enumerator::new(cl.rs.clone(), q)?;
    let patterns: Vec<(u64, u64)> = cl.families.iter().map(|f| masks(&f.c, &f.d)).collect();
    let (orbits, _) = en.orbits(opts.parallel);
    let records = par_map(&orbits, opts.parallel, |o| {
        let mut families = vec![];
        let mut unmatched = false;
        for &x in o {
            let support = en
                .decode(x)
                .iter()
                .enumerate()
                .fold(0u64, |m, (j, c)| if c.0 != 0 { m | 1 << j } else { m });
            let mut hit = false;
            for (f, &(c, cd)) in patterns.iter().enumerate() {
                if support & c == c && support & !cd == 0 {
                    hit = true;
                    if !families.contains(&f) {
                        families.push(f);
                    }
                }
            }
            unmatched |= !hit;
        }
        families.sort_unstable();
        let rep = en.decode(o[0]);
        ClassRecord {
            centralizer: en.centralizer_order(&rep),
            representative: rep.iter().map(|c| c.0).collect(),
            size: o.len() as u64,
            families,
            unmatched,
        }
    });
    let order = en.order() as u128;
    let mut observed: Vec<BTreeMap<u128, i128>> = vec![BTreeMap::new(); cl.families.len()];
    for r in &records {
        if let [f] = r.families[..] {
            *observed[f].entry(r.centralizer as u128).or_default() += 1;
        }
    }
    let mut families = vec![];
    for (i, fam) in cl.families.iter().enumerate() {
        let mut expected = BTreeMap::new();
        let fa = &analysis.families[i];
        let label = format!(
            "c={:?} d={:?}",
            fam.c.iter().map(|j| j + 1).collect::<Vec<_>>(),
            fam.d.iter().map(|j| j + 1).collect::<Vec<_>>()
        );
        let Some(expr) = &fa.expression else {
            return Err(Error::ManualFamiliesPresent(vec![label]));
        };
        for b in &expr.branches {
            let n = b.count.eval_q(q);
            if n != 0 {
                *expected.entry(b.centralizer.eval(q)).or_default() += n;
            }
        }
        families.push(FamilyCheck {
            label,
            expected,
            observed: std::mem::take(&mut observed[i]),
        });
    }
    Ok(VerificationReport {
        q,
        classes: records.len(),
        uncovered: records.iter().filter(|r| r.families.is_empty()).count(),
        overlapping: records.iter().filter(|r| r.families.len() > 1).count(),
        stray_elements: records.iter().filter(|r| r.unmatched).count(),
        orbit_stabilizer: records.iter().all(|r| r.size as u128 * r.centralizer as u128 == order),
        families,
    })
}
