//! Coordinate-by-coordinate elimination over the free entries of a family.

use std::collections::{BTreeMap, BTreeSet};

use super::{Branch, CentralizerOrder, ParameterKind};
use crate::classifier::{Classification, Family};
use crate::error::{Error, Result};
use crate::rings::{Ring, Sym, SymbolicRing};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Slot {
    /// A coordinate of `d` not reached yet.
    Pending,
    /// Ranges over `F_q` minus the listed values.
    Values(BTreeSet<u64>),
    /// A single value.
    Fixed(u64),
    /// One of `p` coset representatives.
    Choice,
    /// One of `q/p` coset representatives.
    Quotient,
}

#[derive(Debug, Clone)]
struct State {
    /// Residuals of the coordinates still to decide, in ascending order.
    pending: Vec<(usize, Sym)>,
    slots: BTreeMap<usize, Slot>,
    /// The symbol `a_k` stands for the entry minus `offsets[k]`.
    offsets: BTreeMap<usize, u64>,
    /// Centralizer parameters ranging over all of `F_q`.
    free_t: BTreeSet<usize>,
    /// Parameters confined to the kernel of an additive map `α·t^p + β·t`,
    /// with `−β/α`.
    kernel_t: BTreeMap<usize, Sym>,
    kernel_exp: u32,
    conditions: Vec<String>,
}

/// How the coefficient `h` of a split decomposes.
enum SplitSpec {
    /// `a_k` is not known to be nonzero.
    Vanish(usize),
    /// `h` vanishes exactly when `a_k = x0` (as a symbol value).
    Shift(usize, u64),
}

struct Ctx<'a> {
    ring: &'a SymbolicRing,
    fam: &'a Family,
    p: u64,
}

pub(super) fn run(cl: &Classification, fam: &Family) -> Result<Vec<Branch>> {
    let ctx = Ctx {
        ring: &cl.ring,
        fam,
        p: cl.p,
    };
    let mut out = vec![];
    let mut stack = vec![ctx.initial()];
    while let Some(mut st) = stack.pop() {
        loop {
            if st.pending.is_empty() {
                out.push(ctx.leaf(&st)?);
                break;
            }
            let step = match ctx.advance(&mut st) {
                Err(e @ Error::UnhandledResidualForm { .. }) => ctx.dual_system(&mut st).unwrap_or(Err(e))?,
                other => other?,
            };
            if let Some(children) = step {
                stack.extend(children.into_iter().rev());
                break;
            }
        }
    }
    Ok(out)
}

/// Coefficients of `r` as a polynomial in `t_l`.
fn coefficients(ring: &SymbolicRing, r: &Sym, l: usize) -> BTreeMap<i16, Sym> {
    let idx = ring.num_indices() + l;
    let mut raw: BTreeMap<i16, Vec<_>> = BTreeMap::new();
    for (m, c) in ring.terms(r) {
        let mut m = m.clone();
        let e = std::mem::take(&mut m[idx]);
        raw.entry(e).or_default().push((m, *c));
    }
    raw.into_iter().map(|(e, ts)| (e, ring.from_terms(ts))).collect()
}

fn is_power_of(p: u64, e: i16) -> bool {
    let mut x = e as u64;
    while x > 1 && x % p == 0 {
        x /= p;
    }
    e > 0 && x == 1
}

/// Nonzero `a`-exponents of a `t`-free monomial.
fn a_exponents(ring: &SymbolicRing, h: &Sym) -> Vec<(usize, i16)> {
    let (m, _) = &ring.terms(h)[0];
    (0..ring.num_indices()).filter(|&k| m[k] != 0).map(|k| (k, m[k])).collect()
}

/// Rewrites `g` using `t_l^p = c·t_l` until `t_l` has degree below `p`.
fn reduce_on_kernel(ring: &SymbolicRing, g: &Sym, l: usize, p: u64, c: &Sym) -> Sym {
    let idx = ring.num_indices() + l;
    let p = p as i16;
    let mut g = g.clone();
    loop {
        let (high, low): (Vec<_>, Vec<_>) = ring.terms(&g).iter().cloned().partition(|(m, _)| m[idx] >= p);
        if high.is_empty() {
            return g;
        }
        let lowered = high
            .into_iter()
            .map(|(mut m, k)| {
                m[idx] -= p - 1;
                (m, k)
            })
            .collect();
        g = ring.add(&ring.from_terms(low), &ring.mul(&ring.from_terms(lowered), c));
    }
}

fn coeff_of(ring: &SymbolicRing, h: &Sym) -> u64 {
    ring.terms(h)[0].1 as u64
}

impl Ctx<'_> {
    fn initial(&self) -> State {
        let mut slots = BTreeMap::new();
        for &j in &self.fam.c {
            if !self.fam.is_normalized(j) {
                slots.insert(j, Slot::Values(BTreeSet::from([0])));
            }
        }
        for &j in &self.fam.d {
            slots.insert(j, Slot::Pending);
        }
        State {
            pending: self.fam.residuals.iter().map(|(&j, r)| (j, r.clone())).collect(),
            slots,
            offsets: BTreeMap::new(),
            free_t: self.fam.free_parameters(self.ring).into_iter().collect(),
            kernel_t: BTreeMap::new(),
            kernel_exp: 0,
            conditions: vec![],
        }
    }

    fn name(&self, k: usize) -> String {
        if self.fam.in_d(k) {
            format!("b_{}", k + 1)
        } else {
            format!("a_{}", k + 1)
        }
    }

    fn family_label(&self) -> String {
        let one = |v: &[usize]| v.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(",");
        format!("c={{{}}} d={{{}}}", one(&self.fam.c), one(&self.fam.d))
    }

    fn unhandled(&self, j: usize, r: &Sym, why: &str) -> Error {
        Error::UnhandledResidualForm {
            family: self.family_label(),
            index: j + 1,
            residual: format!("{} ({why})", self.fam.format(self.ring, r)),
        }
    }

    fn offset(&self, st: &State, k: usize) -> u64 {
        st.offsets.get(&k).copied().unwrap_or(0)
    }

    fn known_nonzero(&self, st: &State, k: usize) -> bool {
        match st.slots.get(&k) {
            Some(Slot::Values(ex)) => ex.contains(&self.offset(st, k)),
            _ => false,
        }
    }

    fn invertible(&self, st: &State, h: &Sym) -> bool {
        self.ring.is_monomial_in_a(h)
            && self
                .ring
                .a_vars(h)
                .iter()
                .all(|&k| self.known_nonzero(st, k))
    }

    /// Whether `a_k` may be split on: a decided coordinate with a range of
    /// values.
    fn splittable(&self, st: &State, k: usize) -> bool {
        matches!(st.slots.get(&k), Some(Slot::Values(_)))
    }

    fn map_pending(&self, st: &mut State, f: impl Fn(&Sym) -> Option<Sym>) -> bool {
        let mut next = Vec::with_capacity(st.pending.len());
        for (j, r) in &st.pending {
            match f(r) {
                Some(x) => next.push((*j, x)),
                None => return false,
            }
        }
        st.pending = next;
        true
    }

    /// Finishes the current coordinate: it can be moved to 0 and the
    /// parameter `t_l` is used up by `t_l^e = repl`.
    fn surjective(&self, st: &State, l: usize, e: i16, h: &Sym) -> Option<State> {
        let ring = self.ring;
        let (j, r) = st.pending[0].clone();
        let rest = ring.without_t(&r, l);
        let repl = ring.neg(&ring.div_monomial(&rest, h).ok()?);
        let mut next = st.clone();
        next.pending.remove(0);
        let ok = if e == 1 {
            self.map_pending(&mut next, |g| ring.substitute_t(g, l, &repl).ok())
        } else if ring.is_zero(&rest) {
            self.map_pending(&mut next, |g| ring.substitute_t(g, l, &ring.zero()).ok())
        } else {
            self.map_pending(&mut next, |g| ring.substitute_t_power(g, l, e, &repl))
        };
        if !ok {
            return None;
        }
        let zero = ring.zero();
        if !self.map_pending(&mut next, |g| ring.substitute_a(g, j, &zero).ok()) {
            return None;
        }
        next.slots.insert(j, Slot::Fixed(0));
        next.free_t.remove(&l);
        Some(next)
    }

    fn split_spec(&self, st: &State, h: &Sym) -> Option<SplitSpec> {
        let ring = self.ring;
        if ring.is_zero(h) || !ring.is_t_free(h) {
            return None;
        }
        if ring.is_monomial_in_a(h) {
            return ring
                .a_vars(h)
                .into_iter()
                .find(|&k| !self.known_nonzero(st, k) && self.splittable(st, k))
                .map(SplitSpec::Vanish);
        }
        let terms = ring.terms(h);
        if terms.len() != 2 {
            return None;
        }
        let parts: Vec<Sym> = terms.iter().map(|t| ring.from_terms(vec![t.clone()])).collect();
        for (m1, m2) in [(&parts[0], &parts[1]), (&parts[1], &parts[0])] {
            if !self.invertible(st, m1) {
                continue;
            }
            let rho = ring.div_monomial(m2, m1).ok()?;
            let exps = a_exponents(ring, &rho);
            let [(x, e)] = exps[..] else { continue };
            if !is_power_of(self.p, e.abs()) || !self.splittable(st, x) {
                continue;
            }
            // s·x^{±p^k} = −1 has the single solution x = (−1/s)^{±1} in F_p
            let s = coeff_of(ring, &rho);
            let x0 = if e > 0 {
                (self.p - crate::rings::field::mod_inverse(s, self.p)) % self.p
            } else {
                (self.p - s) % self.p
            };
            return Some(SplitSpec::Shift(x, x0));
        }
        None
    }

    fn split(&self, st: &State, spec: SplitSpec) -> Result<Vec<State>> {
        let ring = self.ring;
        let (k, x0) = match spec {
            SplitSpec::Vanish(k) => (k, 0),
            SplitSpec::Shift(k, x0) => (k, x0),
        };
        let Some(Slot::Values(excluded)) = st.slots.get(&k) else {
            unreachable!("split on an undecided coordinate")
        };
        let off = self.offset(st, k);
        let value = (x0 + off) % self.p;
        let mut out = vec![];
        if !excluded.contains(&value) {
            let mut fixed = st.clone();
            let c = ring.constant(x0 as i64);
            if self.map_pending(&mut fixed, |g| ring.substitute_a(g, k, &c).ok()) {
                fixed.slots.insert(k, Slot::Fixed(value));
                fixed.conditions.push(format!("{} = {value}", self.name(k)));
                out.push(fixed);
            }
        }
        // recentre at the excluded value where possible, so that the
        // coefficient becomes a monomial
        let mut other = st.clone();
        let shifted = ring.add(&ring.a(k), &ring.constant(x0 as i64));
        let recentred = x0 == 0 || self.map_pending(&mut other, |g| ring.substitute_a(g, k, &shifted).ok());
        if !recentred {
            other = st.clone();
        } else if x0 != 0 {
            other.offsets.insert(k, value);
        }
        let mut ex = excluded.clone();
        ex.insert(value);
        other.slots.insert(k, Slot::Values(ex));
        other.conditions.push(format!("{} ≠ {value}", self.name(k)));
        out.push(other);
        Ok(out)
    }

    /// Whether `h` is known to be nonzero: an invertible monomial, or
    /// `m·(1 + s·x^e)` with the root of the bracket excluded for `x`.
    fn nonzero(&self, st: &State, h: &Sym) -> bool {
        if self.invertible(st, h) {
            return true;
        }
        match self.split_spec(st, h) {
            Some(SplitSpec::Shift(x, x0)) => match st.slots.get(&x) {
                Some(Slot::Values(ex)) => ex.contains(&((x0 + self.offset(st, x)) % self.p)),
                _ => false,
            },
            _ => false,
        }
    }

    /// Splits on `h`, or gives up on the current residual.
    fn split_on(&self, st: &State, h: &Sym, why: &str) -> Result<Option<Vec<State>>> {
        match self.split_spec(st, h) {
            Some(spec) => Ok(Some(self.split(st, spec)?)),
            None => {
                let (j, r) = &st.pending[0];
                Err(self.unhandled(*j, r, why))
            }
        }
    }

    /// Moves the current coordinate to 0 when a combination of `vars` is
    /// surjective and the variables occur nowhere else.
    fn surjective_combination(&self, st: &mut State, vars: &[usize]) -> Result<()> {
        let ring = self.ring;
        let (j, r) = st.pending[0].clone();
        if st.pending[1..].iter().any(|(_, g)| vars.iter().any(|&l| ring.contains_t(g, l))) {
            return Err(self.unhandled(j, &r, "parameters of a surjective sum reused"));
        }
        st.pending.remove(0);
        let zero = ring.zero();
        if !self.map_pending(st, |g| ring.substitute_a(g, j, &zero).ok()) {
            return Err(self.unhandled(j, &r, "entry occurs in a denominator"));
        }
        st.slots.insert(j, Slot::Fixed(0));
        st.free_t.remove(&vars[0]);
        Ok(())
    }

    /// Decides the current coordinate, or returns the branches to follow.
    fn advance(&self, st: &mut State) -> Result<Option<Vec<State>>> {
        let ring = self.ring;
        loop {
            let (j, r) = st.pending[0].clone();
            if ring.is_zero(&r) {
                st.pending.remove(0);
                st.slots.insert(j, Slot::Values(BTreeSet::new()));
                return Ok(None);
            }
            if ring.a_vars(&r).contains(&j) {
                return Err(self.unhandled(j, &r, "depends on its own entry"));
            }
            let vars: Vec<usize> = ring
                .t_vars(&r)
                .into_iter()
                .filter(|l| !st.kernel_t.contains_key(l))
                .collect();
            let coeffs: BTreeMap<usize, BTreeMap<i16, Sym>> =
                vars.iter().map(|&l| (l, coefficients(ring, &r, l))).collect();
            // t_l occurring in a single power h·t_l^{p^k}
            let single: Vec<(usize, i16, Sym)> = vars
                .iter()
                .rev()
                .filter_map(|&l| {
                    let nonconst: Vec<(&i16, &Sym)> = coeffs[&l].iter().filter(|(&e, _)| e != 0).collect();
                    match nonconst[..] {
                        [(&e, h)] if is_power_of(self.p, e) && ring.is_t_free(h) => Some((l, e, h.clone())),
                        _ => None,
                    }
                })
                .collect();
            for want_linear in [true, false] {
                for (l, e, h) in &single {
                    if (*e == 1) == want_linear && self.invertible(st, h) {
                        if let Some(next) = self.surjective(st, *l, *e, h) {
                            *st = next;
                            return Ok(None);
                        }
                    }
                }
            }
            for (_, _, h) in &single {
                if self.nonzero(st, h) {
                    continue;
                }
                if let Some(spec) = self.split_spec(st, h) {
                    return Ok(Some(self.split(st, spec)?));
                }
            }
            if vars.is_empty() && self.p == 2 {
                return self.kernel_image(st);
            }
            if vars.is_empty() || ring.t_vars(&r).iter().any(|l| st.kernel_t.contains_key(l)) {
                return Err(self.unhandled(j, &r, "kernel parameter reused"));
            }
            // every variable occurring as α·t^p + β·t
            let p = self.p as i16;
            let additive: Option<Vec<(usize, Sym, Sym)>> = vars
                .iter()
                .map(|&l| {
                    let c = &coeffs[&l];
                    let keys: Vec<i16> = c.keys().copied().filter(|&e| e != 0).collect();
                    (keys == [1, p] && ring.is_t_free(&c[&1]) && ring.is_t_free(&c[&p]))
                        .then(|| (l, c[&p].clone(), c[&1].clone()))
                })
                .collect();
            let Some(additive) = additive else {
                return Err(self.unhandled(j, &r, "not additive"));
            };
            for (_, alpha, beta) in &additive {
                for h in [alpha, beta] {
                    if !self.nonzero(st, h) {
                        return self.split_on(st, h, "coefficient of unknown sign");
                    }
                }
            }
            if additive.len() >= 2 {
                // t_1 ↦ t_1 − λ·t_2 with λ^p = α_2/α_1 removes t_2^p
                let root_pair = additive.iter().enumerate().find_map(|(i1, (l1, a1, _))| {
                    if !self.invertible(st, a1) {
                        return None;
                    }
                    additive[i1 + 1..].iter().find_map(|(l2, a2, _)| {
                        let ratio = ring.div_monomial(a2, a1).ok().filter(|x| ring.is_monomial_in_a(x))?;
                        let exps = a_exponents(ring, &ratio);
                        if exps.iter().any(|&(_, e)| e % p != 0) {
                            return None;
                        }
                        let root: Vec<(usize, i16)> = exps.iter().map(|&(k, e)| (k, e / p)).collect();
                        Some((*l1, *l2, ring.monomial(coeff_of(ring, &ratio) as i64, &root, &[])))
                    })
                });
                if let Some((l1, l2, lambda)) = root_pair {
                    let repl = ring.sub(&ring.t(l1), &ring.mul(&lambda, &ring.t(l2)));
                    self.map_pending(st, |g| Some(ring.change_variable(g, l1, &repl)));
                    continue;
                }
                if self.p != 2 {
                    return Err(self.unhandled(j, &r, "no p-th root for a change of variables"));
                }
                // α·t^2 + β·t has image (β²/α)·H with H the trace-zero
                // hyperplane, and λH = H only for λ = 1
                let (_, a1, b1) = &additive[0];
                let (_, a2, b2) = &additive[1];
                let h = ring.sub(&ring.mul(&ring.mul(b1, b1), a2), &ring.mul(&ring.mul(b2, b2), a1));
                if self.nonzero(st, &h) {
                    let ls: Vec<usize> = additive.iter().map(|a| a.0).collect();
                    self.surjective_combination(st, &ls)?;
                    return Ok(None);
                }
                return self.split_on(st, &h, "image comparison undecided");
            }
            let (l, alpha, beta) = &additive[0];
            if self.p != 2 {
                // the kernel of α·t^p + β·t is nontrivial iff −β/α is a
                // (p−1)-th power
                let ratio = ring.neg(&ring.div_monomial(beta, alpha)?);
                let power = ring.is_monomial_in_a(&ratio)
                    && coeff_of(ring, &ratio) == 1
                    && a_exponents(ring, &ratio).iter().all(|&(_, e)| e % (p - 1) == 0);
                if !power {
                    return Err(self.unhandled(j, &r, "kernel depends on a power residue"));
                }
            }
            // on the kernel t^p = −(β/α)·t, which lowers later degrees in t
            let c = ring.neg(&ring.div_monomial(beta, alpha)?);
            st.pending.remove(0);
            self.map_pending(st, |g| Some(reduce_on_kernel(ring, g, *l, self.p, &c)));
            st.slots.insert(j, Slot::Choice);
            st.free_t.remove(l);
            st.kernel_t.insert(*l, c);
            st.kernel_exp += 1;
            return Ok(None);
        }
    }

    /// The residual only involves a kernel parameter `t_l ∈ F_2·κ`, as
    /// `γ·t_l`: the entry moves within cosets of `F_2·γκ` and `t_l` must
    /// vanish from then on.
    fn kernel_image(&self, st: &mut State) -> Result<Option<Vec<State>>> {
        let ring = self.ring;
        let (j, r) = st.pending[0].clone();
        let tv: Vec<usize> = ring.t_vars(&r).into_iter().collect();
        let [l] = tv[..] else {
            return Err(self.unhandled(j, &r, "kernel parameter reused"));
        };
        let coeffs = coefficients(ring, &r, l);
        let Some(gamma) = coeffs.get(&1).filter(|g| coeffs.len() == 1 && ring.is_t_free(g)) else {
            return Err(self.unhandled(j, &r, "kernel parameter reused"));
        };
        let image = ring.mul(gamma, &st.kernel_t[&l]);
        if !self.nonzero(st, &image) {
            return self.split_on(st, &image, "kernel image of unknown sign");
        }
        st.pending.remove(0);
        let zero = ring.zero();
        self.map_pending(st, |g| ring.substitute_t(g, l, &zero).ok());
        st.slots.insert(j, Slot::Quotient);
        st.kernel_t.remove(&l);
        st.kernel_exp -= 1;
        Ok(None)
    }

    /// Decides all remaining coordinates at once for `p = 2` when every
    /// residual is `Σ_l α_jl·t_l^2 + β_jl·t_l` and every coordinate has a
    /// parameter of its own. Under the trace pairing the image is
    /// annihilated by the `c` with `Σ_j c_j·α_jl = (Σ_j c_j·β_jl)^2` for all
    /// `l`; a parameter private to `j` confines `c_j` to `F_2·γ_j` with
    /// `γ_j = α/β^2`, and the remaining conditions are `F_2`-linear in the
    /// coefficients of the `γ_j`. The index of the image of each coordinate
    /// is the growth of the annihilator along the coordinates.
    fn dual_system(&self, st: &mut State) -> Option<Result<Option<Vec<State>>>> {
        let ring = self.ring;
        if self.p != 2 {
            return None;
        }
        let coords: Vec<usize> = st.pending.iter().map(|(j, _)| *j).collect();
        let mut table: Vec<BTreeMap<usize, (Sym, Sym)>> = vec![];
        let mut occurrences: BTreeMap<usize, usize> = BTreeMap::new();
        for (_, r) in &st.pending {
            if ring.a_vars(r).iter().any(|k| coords.contains(k)) {
                return None;
            }
            let mut row = BTreeMap::new();
            for l in ring.t_vars(r) {
                let mut c = coefficients(ring, r, l);
                c.remove(&0);
                if st.kernel_t.contains_key(&l)
                    || c.keys().any(|&e| e != 1 && e != 2)
                    || c.values().any(|x| !ring.is_t_free(x))
                {
                    return None;
                }
                let get = |e| c.get(&e).cloned().unwrap_or_else(|| ring.zero());
                row.insert(l, (get(2), get(1)));
                *occurrences.entry(l).or_default() += 1;
            }
            table.push(row);
        }
        let mut gammas = vec![];
        for row in &table {
            let (_, (alpha, beta)) = row.iter().find(|(l, _)| occurrences[*l] == 1)?;
            if ring.is_zero(alpha) || ring.is_zero(beta) {
                gammas.push(ring.zero());
                continue;
            }
            for h in [alpha, beta] {
                if !self.nonzero(st, h) {
                    return Some(self.split_on(st, h, "coefficient of unknown sign"));
                }
            }
            let beta2 = ring.mul(beta, beta);
            gammas.push(ring.div_monomial(alpha, &beta2).ok()?);
        }
        let m = coords.len();
        let mut solutions = vec![];
        for eps in 0u32..1 << m {
            let mut solution = true;
            for &l in occurrences.keys() {
                let mut s = ring.zero();
                for (i, row) in table.iter().enumerate() {
                    if eps >> i & 1 == 0 {
                        continue;
                    }
                    if let Some((alpha, beta)) = row.get(&l) {
                        let g = &gammas[i];
                        let w = ring.add(&ring.mul(g, alpha), &ring.mul(&ring.mul(g, g), &ring.mul(beta, beta)));
                        s = ring.add(&s, &w);
                    }
                }
                if ring.is_zero(&s) {
                    continue;
                }
                if !self.nonzero(st, &s) {
                    return Some(self.split_on(st, &s, "annihilator condition undecided"));
                }
                solution = false;
            }
            if solution {
                solutions.push(eps);
            }
        }
        if occurrences.len() < m {
            return None;
        }
        let mut previous = 1;
        for (i, &j) in coords.iter().enumerate() {
            let upto = solutions.iter().filter(|&&e| e >> (i + 1) == 0).count();
            let slot = if upto == previous { Slot::Fixed(0) } else { Slot::Choice };
            st.slots.insert(j, slot);
            previous = upto;
        }
        for &l in occurrences.keys().take(m) {
            st.free_t.remove(&l);
        }
        st.kernel_exp += solutions.len().trailing_zeros();
        st.pending.clear();
        Some(Ok(None))
    }

    fn leaf(&self, st: &State) -> Result<Branch> {
        let mut kinds = BTreeMap::new();
        for &j in &self.fam.normalized {
            kinds.insert(j, ParameterKind::A);
        }
        for (&j, slot) in &st.slots {
            let kind = match slot {
                Slot::Pending => unreachable!("all coordinates are decided at a leaf"),
                Slot::Fixed(0) => continue,
                Slot::Fixed(_) => ParameterKind::E,
                Slot::Choice => ParameterKind::C,
                Slot::Quotient => ParameterKind::G,
                Slot::Values(ex) => match ex.len() {
                    0 => ParameterKind::B,
                    1 => ParameterKind::A,
                    2 => ParameterKind::D,
                    _ => {
                        return Err(Error::UnhandledResidualForm {
                            family: self.family_label(),
                            index: j + 1,
                            residual: format!("{} excluded values", ex.len()),
                        })
                    }
                },
            };
            kinds.insert(j, kind);
        }
        let count = ParameterKind::product(kinds.values(), self.p).ok_or_else(|| Error::UnhandledResidualForm {
            family: self.family_label(),
            index: 0,
            residual: "coset counts do not combine to a polynomial".to_string(),
        })?;
        Ok(Branch {
            conditions: st.conditions.clone(),
            kinds,
            count,
            centralizer: CentralizerOrder {
                p: self.p,
                p_exp: st.kernel_exp,
                q_exp: st.free_t.len() as u32,
            },
        })
    }
}
