//! Orbit classification on the successive quotients `U_i = U/M_i`.
//!
//! A family `(c, d)` stands for the representatives
//! `y = ∏_{j ∈ c ∪ d} x_j(a_j)` with `a_j ≠ 0` for `j ∈ c` and `a_j`
//! arbitrary for `j ∈ d`, together with a generic element
//! `x = ∏ x_j(f_j)` of an approximation `D(yM_i)` of the centralizer of
//! `yM_i`, the `f_j` being polynomials in free parameters `t_l`.
//! Each step conjugates `y` by `x` modulo `M_{i+1}` and inspects the new
//! coordinate `g_{i+1}`:
//!
//! * `g_{i+1} = 0` (ramification): the coordinate is a class invariant, the
//!   family splits into "nonzero" (`i+1 ∈ c`) and "zero" successors;
//! * some `t_l` occurs in `g_{i+1}` only as `h·t_l`, `h` an invertible
//!   monomial (inert): the coordinate can be conjugated to zero, and
//!   `t_l := −(g_{i+1} − h·t_l)/h` cuts the parameters down to the
//!   stabilizer;
//! * otherwise (unresolved): the coordinate is kept as a free entry
//!   (`i+1 ∈ d`) and `g_{i+1}` is recorded for the final analysis.
//!
//! All indices in this module are 0-based.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use crate::engine::{Engine, UnipotentElement};
use crate::error::{Error, Result};
use crate::rings::{LinearOccurrence, Ring, Sym, SymbolicRing};
use crate::root_system::RootSystem;
use crate::snf::rows_unimodular;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassificationOutcome {
    Ramification,
    /// Parameter `t_l` eliminated; `h` its coefficient, `replacement` the
    /// value substituted for it.
    Inert { l: usize, h: Sym, replacement: Sym },
    Unresolved,
}

/// One step of a family's history.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    /// Index of the coordinate decided at this step.
    pub index: usize,
    /// The new coordinate `g_{index}` of `x·y·x⁻¹`.
    pub g: Sym,
    pub outcome: ClassificationOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    /// Coordinates carrying a nonzero parameter `a_j`.
    pub c: Vec<usize>,
    /// Coordinates carrying a free parameter `b_j`.
    pub d: Vec<usize>,
    /// Subset of `c` scaled to 1 by the torus.
    pub normalized: Vec<usize>,
    /// Coordinates of the generic centralizer element.
    pub params: Vec<Sym>,
    /// `g_j − b_j` for `j ∈ d`, as of the last completed step.
    pub residuals: BTreeMap<usize, Sym>,
    /// Number of completed steps.
    pub step: usize,
    pub history: Vec<StepRecord>,
}

impl Family {
    pub fn in_c(&self, j: usize) -> bool {
        self.c.binary_search(&j).is_ok()
    }

    pub fn in_d(&self, j: usize) -> bool {
        self.d.binary_search(&j).is_ok()
    }

    pub fn is_normalized(&self, j: usize) -> bool {
        self.normalized.binary_search(&j).is_ok()
    }

    /// The free parameters `t_l` still occurring in the centralizer.
    pub fn free_parameters(&self, ring: &SymbolicRing) -> Vec<usize> {
        let mut s = std::collections::BTreeSet::new();
        for f in &self.params {
            s.extend(ring.t_vars(f));
        }
        s.into_iter().collect()
    }

    /// Template string such as `x_2(a_2) x_3(a_3) x_7(b_7)`, with
    /// normalized coordinates shown as 1.
    pub fn representative(&self) -> String {
        let mut idx: Vec<usize> = self.c.iter().chain(&self.d).copied().collect();
        idx.sort_unstable();
        if idx.is_empty() {
            return "1".to_string();
        }
        idx.iter()
            .map(|&j| {
                let n = j + 1;
                if self.is_normalized(j) {
                    format!("x_{n}(1)")
                } else if self.in_c(j) {
                    format!("x_{n}(a_{n})")
                } else {
                    format!("x_{n}(b_{n})")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Formats a family polynomial, naming `a_j` as `b_j` for `j ∈ d`.
    pub fn format(&self, ring: &SymbolicRing, x: &Sym) -> String {
        ring.format_with(x, &|k| {
            if self.in_d(k) {
                format!("b_{}", k + 1)
            } else {
                format!("a_{}", k + 1)
            }
        })
    }

    /// Sort key `(|c ∪ d|, c, d)`.
    fn sort_key(&self) -> (usize, Vec<usize>, Vec<usize>) {
        (self.c.len() + self.d.len(), self.c.clone(), self.d.clone())
    }
}

/// Result of running the classifier to the last step.
#[derive(Debug, Clone)]
pub struct Classification {
    pub rs: Arc<RootSystem>,
    pub p: u64,
    pub ring: SymbolicRing,
    pub families: Vec<Family>,
}

impl Classification {
    pub fn unresolved_steps(&self) -> usize {
        self.families
            .iter()
            .flat_map(|f| &f.history)
            .filter(|r| r.outcome == ClassificationOutcome::Unresolved)
            .count()
    }

    pub fn find(&self, c: &[usize], d: &[usize]) -> Option<&Family> {
        self.families.iter().find(|f| f.c == c && f.d == d)
    }
}

pub struct Classifier {
    engine: Engine<SymbolicRing>,
    p: u64,
}

impl Classifier {
    pub fn new(rs: Arc<RootSystem>, p: u64) -> Result<Self> {
        if rs.rank() > 4 || rs.kind() == crate::root_system::RootKind::F {
            return Err(Error::UnsupportedType(rs.kind().letter(), rs.rank()));
        }
        let n = rs.num_positive();
        let ring = SymbolicRing::new(p, n)?;
        Ok(Classifier {
            engine: Engine::new(rs, ring),
            p,
        })
    }

    pub fn ring(&self) -> &SymbolicRing {
        self.engine.ring()
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn engine(&self) -> &Engine<SymbolicRing> {
        &self.engine
    }

    pub fn initial_family(&self) -> Family {
        let n = self.engine.num_roots();
        Family {
            c: vec![],
            d: vec![],
            normalized: vec![],
            params: (0..n).map(|l| self.ring().t(l)).collect(),
            residuals: BTreeMap::new(),
            step: 0,
            history: vec![],
        }
    }

    /// The representative template `y` of a family.
    pub fn template(&self, fam: &Family) -> UnipotentElement<Sym> {
        let ring = self.ring();
        let mut y = self.engine.identity();
        for &j in fam.c.iter().chain(&fam.d) {
            y.coeffs[j] = if fam.is_normalized(j) { ring.one() } else { ring.a(j) };
        }
        y
    }

    /// Conjugates the template by the generic centralizer element modulo
    /// `M_{step+1}` and returns the coordinates `g_1..g_{step+1}`, after
    /// checking that the first `step` coordinates are as expected.
    pub fn step_conjugate(&self, fam: &Family) -> Result<Vec<Sym>> {
        let i = fam.step;
        let y = self.template(fam);
        let x = UnipotentElement::new(fam.params.clone());
        let z = self.engine.conjugate_truncated(&x, &y, i + 1);
        for j in 0..i {
            let ok = if fam.in_d(j) {
                true
            } else {
                z.coeffs[j] == y.coeffs[j]
            };
            if !ok {
                return Err(Error::CentralizerViolation {
                    family: fam.representative(),
                    step: i + 1,
                    coord: j + 1,
                });
            }
        }
        let mut g = z.coeffs;
        g.truncate(i + 1);
        Ok(g)
    }

    /// Decides the case for the new coordinate `g`.
    pub fn detect_case(&self, g: &Sym, fam: &Family) -> ClassificationOutcome {
        let ring = self.ring();
        if ring.is_zero(g) {
            return ClassificationOutcome::Ramification;
        }
        for l in (0..self.engine.num_roots()).rev() {
            let LinearOccurrence::SingleLinearTerm(h) = ring.linear_occurrence(g, l) else {
                continue;
            };
            // dividing by h is only sound if it cannot vanish
            if !ring.a_vars(&h).iter().all(|&k| fam.in_c(k)) {
                continue;
            }
            if fam.residuals.values().any(|r| ring.contains_t(r, l)) {
                continue;
            }
            let rest = ring.without_t(g, l);
            let replacement = ring
                .neg(&ring.div_monomial(&rest, &h).expect("h is a monomial"));
            return ClassificationOutcome::Inert { l, h, replacement };
        }
        ClassificationOutcome::Unresolved
    }

    /// Successor families for `fam` after `outcome` at the coordinate `g`.
    pub fn apply_outcome(&self, fam: &Family, g: &Sym, outcome: ClassificationOutcome) -> Result<Vec<Family>> {
        let ring = self.ring();
        let k = fam.step;
        let mut base = fam.clone();
        base.step = k + 1;
        base.history.push(StepRecord {
            index: k,
            g: g.clone(),
            outcome: outcome.clone(),
        });
        match outcome {
            ClassificationOutcome::Ramification => {
                let mut nonzero = base.clone();
                nonzero.c.push(k);
                nonzero.c.sort_unstable();
                self.torus_normalize(&mut nonzero);
                Ok(vec![nonzero, base])
            }
            ClassificationOutcome::Inert { l, replacement, .. } => {
                for f in base.params.iter_mut() {
                    *f = ring.substitute_t(f, l, &replacement)?;
                }
                Ok(vec![base])
            }
            ClassificationOutcome::Unresolved => {
                base.d.push(k);
                base.d.sort_unstable();
                base.residuals.insert(k, g.clone());
                Ok(vec![base])
            }
        }
    }

    /// Greedily extends the normalized set by the newest element of `c` if
    /// the simple-root coordinates of the normalized roots still have Smith
    /// normal form with all diagonal entries 1.
    pub fn torus_normalize(&self, fam: &mut Family) {
        let rs = self.engine.root_system();
        for &j in &fam.c.clone() {
            if fam.is_normalized(j) {
                continue;
            }
            let mut trial = fam.normalized.clone();
            trial.push(j);
            trial.sort_unstable();
            let m: Vec<Vec<i64>> = trial
                .iter()
                .map(|&r| rs.root(r).coeffs.iter().map(|&x| x as i64).collect())
                .collect();
            if rows_unimodular(&m) {
                fam.normalized = trial;
                let ring = self.ring();
                for f in fam.params.iter_mut() {
                    *f = ring.set_a_to_one(f, j);
                }
                for r in fam.residuals.values_mut() {
                    *r = ring.set_a_to_one(r, j);
                }
            }
        }
    }

    /// Runs one step on `fam`.
    pub fn step(&self, fam: &Family) -> Result<Vec<Family>> {
        let g = self.step_conjugate(fam)?;
        let ring = self.ring();
        let mut fam = fam.clone();
        for (&j, r) in fam.residuals.iter_mut() {
            *r = ring.sub(&g[j], &ring.a(j));
        }
        let gk = g[fam.step].clone();
        let outcome = self.detect_case(&gk, &fam);
        self.apply_outcome(&fam, &gk, outcome)
    }

    /// All families after the last step, in canonical order.
    pub fn run(&self) -> Result<Vec<Family>> {
        let n = self.engine.num_roots();
        let mut queue: VecDeque<Family> = VecDeque::from([self.initial_family()]);
        let mut done = vec![];
        while let Some(fam) = queue.pop_front() {
            if fam.step == n {
                done.push(self.finish(fam)?);
                continue;
            }
            queue.extend(self.step(&fam)?);
        }
        done.sort_by_key(Family::sort_key);
        Ok(done)
    }

    /// Recomputes the residuals against the final centralizer parameters.
    fn finish(&self, mut fam: Family) -> Result<Family> {
        if fam.d.is_empty() {
            return Ok(fam);
        }
        let ring = self.ring();
        let y = self.template(&fam);
        let x = UnipotentElement::new(fam.params.clone());
        let z = self.engine.conjugate_truncated(&x, &y, fam.step);
        for (&j, r) in fam.residuals.iter_mut() {
            *r = ring.sub(&z.coeffs[j], &y.coeffs[j]);
        }
        Ok(fam)
    }
}

/// Classifies the conjugacy classes of `U` for the root system `rs` in
/// characteristic `p`.
pub fn classify(rs: Arc<RootSystem>, p: u64) -> Result<Classification> {
    let cl = Classifier::new(rs.clone(), p)?;
    let families = cl.run()?;
    Ok(Classification {
        rs,
        p: cl.characteristic(),
        ring: cl.ring().clone(),
        families,
    })
}
