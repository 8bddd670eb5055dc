//! The ring `F_p(a_1,…,a_n)[t_1,…,t_n]` in which the classifier computes.
//!
//! Every division the classifier performs is by a scalar multiple of a
//! Laurent monomial in the `a`-variables, so an element is stored as a
//! Laurent polynomial: `t`-exponents are nonnegative, `a`-exponents may be
//! negative. This is a canonical form for the fractions that occur, with
//! denominator the monomial `∏ a_k^{max(0, −e_k)}`.

use std::collections::BTreeSet;
use std::fmt;

use super::field::mod_inverse;
use super::Ring;
use crate::error::{Error, Result};

/// Exponent vector: `a_1..a_n` then `t_1..t_n`.
pub type Mono = Box<[i16]>;

/// An element of the symbolic ring. Terms are sorted by monomial and have
/// nonzero coefficients in `1..p`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Sym {
    terms: Vec<(Mono, u32)>,
}

impl fmt::Debug for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sym[")?;
        for (m, c) in &self.terms {
            write!(f, "{c}*{m:?} ")?;
        }
        write!(f, "]")
    }
}

/// How a variable `t_l` occurs in an element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearOccurrence {
    Absent,
    /// `t_l` occurs only in the single term `h·t_l`, `h` a nonzero scalar
    /// times a Laurent monomial in the `a`-variables.
    SingleLinearTerm(Sym),
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicRing {
    p: u64,
    n: usize,
}

impl SymbolicRing {
    pub fn new(p: u64, n: usize) -> Result<Self> {
        if !super::is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        Ok(SymbolicRing { p, n })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    /// Number of indices; there are `n` a-variables and `n` t-variables.
    pub fn num_indices(&self) -> usize {
        self.n
    }

    fn unit_mono(&self) -> Mono {
        vec![0i16; 2 * self.n].into_boxed_slice()
    }

    fn reduce(&self, c: i64) -> u32 {
        c.rem_euclid(self.p as i64) as u32
    }

    pub fn constant(&self, c: i64) -> Sym {
        let c = self.reduce(c);
        if c == 0 {
            return Sym::default();
        }
        Sym {
            terms: vec![(self.unit_mono(), c)],
        }
    }

    /// The indeterminate `a_k` (0-based index).
    pub fn a(&self, k: usize) -> Sym {
        let mut m = self.unit_mono();
        m[k] = 1;
        Sym {
            terms: vec![(m, 1)],
        }
    }

    /// The indeterminate `t_l` (0-based index).
    pub fn t(&self, l: usize) -> Sym {
        let mut m = self.unit_mono();
        m[self.n + l] = 1;
        Sym {
            terms: vec![(m, 1)],
        }
    }

    /// Builds `c · ∏ a^ea · ∏ t^et` from sparse exponent lists.
    pub fn monomial(&self, c: i64, a_exps: &[(usize, i16)], t_exps: &[(usize, i16)]) -> Sym {
        let c = self.reduce(c);
        if c == 0 {
            return Sym::default();
        }
        let mut m = self.unit_mono();
        for &(k, e) in a_exps {
            m[k] += e;
        }
        for &(l, e) in t_exps {
            assert!(e >= 0, "negative t exponent");
            m[self.n + l] += e;
        }
        Sym {
            terms: vec![(m, c)],
        }
    }

    fn normalize(&self, mut raw: Vec<(Mono, u32)>) -> Sym {
        raw.sort_unstable_by(|x, y| x.0.cmp(&y.0));
        let mut out: Vec<(Mono, u32)> = Vec::with_capacity(raw.len());
        for (m, c) in raw {
            match out.last_mut() {
                Some(last) if last.0 == m => {
                    last.1 = ((last.1 as u64 + c as u64) % self.p) as u32;
                }
                _ => out.push((m, c)),
            }
        }
        out.retain(|t| t.1 != 0);
        Sym { terms: out }
    }

    pub fn scale(&self, x: &Sym, c: i64) -> Sym {
        let c = self.reduce(c) as u64;
        if c == 0 {
            return Sym::default();
        }
        Sym {
            terms: x
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), ((*k as u64 * c) % self.p) as u32))
                .collect(),
        }
    }

    /// The `t`-variables occurring in `x`.
    pub fn t_vars(&self, x: &Sym) -> BTreeSet<usize> {
        let mut s = BTreeSet::new();
        for (m, _) in &x.terms {
            for l in 0..self.n {
                if m[self.n + l] != 0 {
                    s.insert(l);
                }
            }
        }
        s
    }

    /// The `a`-variables occurring in `x`.
    pub fn a_vars(&self, x: &Sym) -> BTreeSet<usize> {
        let mut s = BTreeSet::new();
        for (m, _) in &x.terms {
            for k in 0..self.n {
                if m[k] != 0 {
                    s.insert(k);
                }
            }
        }
        s
    }

    pub fn contains_t(&self, x: &Sym, l: usize) -> bool {
        x.terms.iter().any(|(m, _)| m[self.n + l] != 0)
    }

    /// Whether `x` lies in `F_p(a)`, i.e. involves no `t`.
    pub fn is_t_free(&self, x: &Sym) -> bool {
        x.terms.iter().all(|(m, _)| m[self.n..].iter().all(|&e| e == 0))
    }

    /// Replaces every occurrence of `t_l` by `repl`.
    pub fn substitute_t(&self, g: &Sym, l: usize, repl: &Sym) -> Result<Sym> {
        if self.contains_t(repl, l) {
            return Err(Error::SelfReference(l + 1));
        }
        self.substitute_slot(g, self.n + l, repl)
    }

    /// Simultaneous substitution `t_l ↦ repl` where `repl` may itself
    /// contain `t_l` (a change of variables such as `t_1 ↦ t_1 + t_2`).
    pub fn change_variable(&self, g: &Sym, l: usize, repl: &Sym) -> Sym {
        self.substitute_slot(g, self.n + l, repl).expect("t-exponents are nonnegative")
    }

    /// Replaces `a_k` by `repl`. Negative powers of `a_k` are only allowed
    /// when `repl` is an invertible monomial.
    pub fn substitute_a(&self, g: &Sym, k: usize, repl: &Sym) -> Result<Sym> {
        self.substitute_slot(g, k, repl)
    }

    /// Replaces `t_l^e` by `repl` where `e` divides every exponent of `t_l`
    /// in `g`; `None` if some exponent is not a multiple of `e`.
    pub fn substitute_t_power(&self, g: &Sym, l: usize, e: i16, repl: &Sym) -> Option<Sym> {
        let idx = self.n + l;
        if g.terms.iter().any(|(m, _)| m[idx] % e != 0) {
            return None;
        }
        let raw = g
            .terms
            .iter()
            .map(|(m, c)| {
                let mut m = m.clone();
                m[idx] /= e;
                (m, *c)
            })
            .collect();
        let reduced = self.normalize(raw);
        Some(self.substitute_slot(&reduced, idx, repl).expect("t-exponents are nonnegative"))
    }

    fn substitute_slot(&self, g: &Sym, idx: usize, repl: &Sym) -> Result<Sym> {
        if g.terms.iter().all(|(m, _)| m[idx] == 0) {
            return Ok(g.clone());
        }
        let mut powers: Vec<Sym> = vec![self.one()];
        let mut inv_powers: Vec<Sym> = vec![self.one()];
        let mut acc = Sym::default();
        let mut untouched = vec![];
        for (m, c) in &g.terms {
            let e = m[idx];
            if e == 0 {
                untouched.push((m.clone(), *c));
                continue;
            }
            let factor = if e > 0 {
                let e = e as usize;
                while powers.len() <= e {
                    let next = self.mul(powers.last().unwrap(), repl);
                    powers.push(next);
                }
                &powers[e]
            } else {
                let e = (-e) as usize;
                if inv_powers.len() == 1 {
                    inv_powers.push(self.monomial_inverse(repl)?);
                }
                while inv_powers.len() <= e {
                    let next = self.mul(inv_powers.last().unwrap(), &inv_powers[1]);
                    inv_powers.push(next);
                }
                &inv_powers[e]
            };
            let mut rest = m.clone();
            rest[idx] = 0;
            let term = Sym {
                terms: vec![(rest, *c)],
            };
            acc = self.add(&acc, &self.mul(&term, factor));
        }
        Ok(self.add(&acc, &self.normalize(untouched)))
    }

    /// Specializes `a_k := 1`.
    pub fn set_a_to_one(&self, g: &Sym, k: usize) -> Sym {
        if g.terms.iter().all(|(m, _)| m[k] == 0) {
            return g.clone();
        }
        let raw = g
            .terms
            .iter()
            .map(|(m, c)| {
                let mut m = m.clone();
                m[k] = 0;
                (m, *c)
            })
            .collect();
        self.normalize(raw)
    }

    /// If `h` is a nonzero scalar times a Laurent monomial in the
    /// `a`-variables, returns its inverse.
    pub fn monomial_inverse(&self, h: &Sym) -> Result<Sym> {
        if h.terms.len() != 1 || !self.is_t_free(h) {
            return Err(Error::NonMonomialDivisor(self.format(h)));
        }
        let (m, c) = &h.terms[0];
        let inv: Mono = m.iter().map(|e| -e).collect();
        Ok(Sym {
            terms: vec![(inv, mod_inverse(*c as u64, self.p) as u32)],
        })
    }

    /// `g / h` for a monomial `h` (see [`Self::monomial_inverse`]).
    pub fn div_monomial(&self, g: &Sym, h: &Sym) -> Result<Sym> {
        Ok(self.mul(g, &self.monomial_inverse(h)?))
    }

    pub fn is_monomial_in_a(&self, h: &Sym) -> bool {
        h.terms.len() == 1 && self.is_t_free(h)
    }

    /// Classifies the occurrence of `t_l` in `g`.
    pub fn linear_occurrence(&self, g: &Sym, l: usize) -> LinearOccurrence {
        let idx = self.n + l;
        let mut hits = g.terms.iter().filter(|(m, _)| m[idx] != 0);
        let Some((m, c)) = hits.next() else {
            return LinearOccurrence::Absent;
        };
        if hits.next().is_some() || m[idx] != 1 {
            return LinearOccurrence::Other;
        }
        let mut rest = m.clone();
        rest[idx] = 0;
        if rest[self.n..].iter().any(|&e| e != 0) {
            return LinearOccurrence::Other;
        }
        LinearOccurrence::SingleLinearTerm(Sym {
            terms: vec![(rest, *c)],
        })
    }

    /// Splits off the part of `g` not involving `t_l`.
    pub fn without_t(&self, g: &Sym, l: usize) -> Sym {
        let idx = self.n + l;
        Sym {
            terms: g.terms.iter().filter(|(m, _)| m[idx] == 0).cloned().collect(),
        }
    }

    /// Numerator and denominator of the fraction view: the denominator is
    /// the monomial `∏ a_k^{d_k}` clearing all negative exponents.
    pub fn fraction_parts(&self, x: &Sym) -> (Sym, Sym) {
        let mut shift = vec![0i16; self.n];
        for (m, _) in &x.terms {
            for k in 0..self.n {
                shift[k] = shift[k].max(-m[k]);
            }
        }
        let mut den = self.unit_mono();
        den[..self.n].copy_from_slice(&shift);
        let num = x
            .terms
            .iter()
            .map(|(m, c)| {
                let mut m = m.clone();
                for k in 0..self.n {
                    m[k] += shift[k];
                }
                (m, *c)
            })
            .collect();
        (Sym { terms: num }, Sym { terms: vec![(den, 1)] })
    }

    /// Equality of `n1/d1` and `n2/d2` decided as `n1·d2 = n2·d1`.
    pub fn fraction_eq(&self, x: &Sym, y: &Sym) -> bool {
        let (n1, d1) = self.fraction_parts(x);
        let (n2, d2) = self.fraction_parts(y);
        self.mul(&n1, &d2) == self.mul(&n2, &d1)
    }

    /// Degree of `t_l` in `g`.
    pub fn t_degree(&self, g: &Sym, l: usize) -> i16 {
        g.terms.iter().map(|(m, _)| m[self.n + l]).max().unwrap_or(0)
    }

    /// Evaluates at concrete field values. `a`-values must be nonzero where
    /// negative exponents occur.
    pub fn eval(
        &self,
        g: &Sym,
        field: &super::GaloisField,
        a_vals: &[super::FfElem],
        t_vals: &[super::FfElem],
    ) -> Result<super::FfElem> {
        assert_eq!(field.characteristic(), self.p);
        let mut acc = super::FfElem(0);
        for (m, c) in &g.terms {
            let mut v = field.from_integer(*c as i64);
            for k in 0..self.n {
                let e = m[k];
                if e > 0 {
                    v = field.fmul(v, field.fpow(a_vals[k], e as u64));
                } else if e < 0 {
                    let inv = field.inv(a_vals[k])?;
                    v = field.fmul(v, field.fpow(inv, (-e) as u64));
                }
                let te = m[self.n + k];
                if te > 0 {
                    v = field.fmul(v, field.fpow(t_vals[k], te as u64));
                }
            }
            acc = field.fadd(acc, v);
        }
        Ok(acc)
    }

    pub fn terms<'a>(&self, x: &'a Sym) -> &'a [(Mono, u32)] {
        &x.terms
    }

    pub fn from_terms(&self, terms: Vec<(Mono, u32)>) -> Sym {
        self.normalize(terms)
    }

    /// Human-readable form such as `a_3*t_2^2 + a_2*a_3*t_2`.
    pub fn format(&self, x: &Sym) -> String {
        self.format_with(x, &|k| format!("a_{}", k + 1))
    }

    /// Like [`Self::format`] with a custom name for each `a`-variable.
    pub fn format_with(&self, x: &Sym, a_name: &dyn Fn(usize) -> String) -> String {
        if x.terms.is_empty() {
            return "0".to_string();
        }
        let mut terms: Vec<&(Mono, u32)> = x.terms.iter().collect();
        // higher total t-degree first, then a stable order on exponents
        terms.sort_by(|(m1, _), (m2, _)| {
            let d1: i32 = m1[self.n..].iter().map(|&e| e as i32).sum();
            let d2: i32 = m2[self.n..].iter().map(|&e| e as i32).sum();
            d2.cmp(&d1).then_with(|| m2[self.n..].cmp(&m1[self.n..])).then_with(|| m1.cmp(m2))
        });
        let mut out = String::new();
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let mut num: Vec<String> = vec![];
            let mut den: Vec<String> = vec![];
            let power = |name: String, e: i16| if e == 1 { name } else { format!("{name}^{e}") };
            for k in 0..self.n {
                let e = m[k];
                if e > 0 {
                    num.push(power(a_name(k), e));
                } else if e < 0 {
                    den.push(power(a_name(k), -e));
                }
            }
            for l in 0..self.n {
                let e = m[self.n + l];
                if e > 0 {
                    num.push(power(format!("t_{}", l + 1), e));
                }
            }
            let coef = *c as i64;
            // print p-1 as a minus sign in odd characteristic
            let (sign, mag) = if self.p > 2 && coef == self.p as i64 - 1 {
                ("-", 1)
            } else {
                ("+", coef)
            };
            if i == 0 {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            let mut body = String::new();
            if mag != 1 || num.is_empty() {
                body.push_str(&mag.to_string());
                if !num.is_empty() {
                    body.push('*');
                }
            }
            body.push_str(&num.join("*"));
            if !den.is_empty() {
                body.push('/');
                if den.len() > 1 {
                    body.push_str(&format!("({})", den.join("*")));
                } else {
                    body.push_str(&den[0]);
                }
            }
            out.push_str(&body);
        }
        out
    }
}

impl Ring for SymbolicRing {
    type Elem = Sym;

    fn zero(&self) -> Sym {
        Sym::default()
    }

    fn one(&self) -> Sym {
        self.constant(1)
    }

    fn add(&self, x: &Sym, y: &Sym) -> Sym {
        if x.terms.is_empty() {
            return y.clone();
        }
        if y.terms.is_empty() {
            return x.clone();
        }
        let mut out = Vec::with_capacity(x.terms.len() + y.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < x.terms.len() && j < y.terms.len() {
            match x.terms[i].0.cmp(&y.terms[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(x.terms[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(y.terms[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = ((x.terms[i].1 as u64 + y.terms[j].1 as u64) % self.p) as u32;
                    if c != 0 {
                        out.push((x.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&x.terms[i..]);
        out.extend_from_slice(&y.terms[j..]);
        Sym { terms: out }
    }

    fn neg(&self, x: &Sym) -> Sym {
        Sym {
            terms: x
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), (self.p as u32 - c) % self.p as u32))
                .collect(),
        }
    }

    fn mul(&self, x: &Sym, y: &Sym) -> Sym {
        if x.terms.is_empty() || y.terms.is_empty() {
            return Sym::default();
        }
        let mut raw = Vec::with_capacity(x.terms.len() * y.terms.len());
        for (m1, c1) in &x.terms {
            for (m2, c2) in &y.terms {
                let m: Mono = m1.iter().zip(m2.iter()).map(|(a, b)| a + b).collect();
                raw.push((m, ((*c1 as u64 * *c2 as u64) % self.p) as u32));
            }
        }
        if x.terms.len() == 1 || y.terms.len() == 1 {
            // multiplying by a monomial preserves the order
            return Sym { terms: raw };
        }
        self.normalize(raw)
    }

    fn is_zero(&self, x: &Sym) -> bool {
        x.terms.is_empty()
    }

    fn from_int(&self, n: i64) -> Sym {
        self.constant(n)
    }
}
