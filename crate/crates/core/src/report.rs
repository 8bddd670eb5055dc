//! Family tables in the layout `Name | Prime | Family | Size | Centralizer`,
//! one block per family name, comparing good and bad characteristic.
//!
//! Branches that differ in a single coordinate `j` past all other
//! `a`-coordinates are merged first: `a_j` and an absent `x_j` give `b_j`
//! (unless no `a`-coordinate precedes `j` in a longer pattern),
//! `e_j` and an absent `x_j` give `f_j`, and `d_j` with `e_j` give `a_j`,
//! provided the centralizer orders agree. A row
//! for a good prime is named by its `a`-coordinates (all coordinates if
//! there are none); a row for a bad prime takes the longest prefix of its
//! support that names a good-prime row.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::analyzer::{analyze, CentralizerOrder, ClassCountPolynomial, ParameterKind};
use crate::classifier::classify;
use crate::error::{Error, Result};
use crate::rings::is_prime;
use crate::root_system::RootSystem;

/// A representative pattern together with its centralizer order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Pattern {
    kinds: BTreeMap<usize, ParameterKind>,
    centralizer: (u32, u32),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TableRow {
    /// 1-based coordinates naming the block.
    pub name: Vec<usize>,
    pub prime: String,
    pub family: String,
    pub size: String,
    pub centralizer: String,
}

impl fmt::Display for TableRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name: Vec<String> = self.name.iter().map(|j| j.to_string()).collect();
        write!(
            f,
            "{} | {} | {} | {} | {}",
            name.join(","),
            self.prime,
            self.family,
            self.size,
            self.centralizer
        )
    }
}

/// Known `k(U)` as a polynomial in `v = q − 1`. Outside type A it depends
/// only on which bad prime `p` is, if any.
/// The G2 good-characteristic value is the one confirmed by enumeration at
/// `q = 5, 7` (`k = 169, 433`).
pub fn reference_class_count(rs: &RootSystem, p: u64) -> Option<ClassCountPolynomial> {
    use crate::root_system::RootKind::*;
    let bad = rs.bad_primes().contains(&p);
    let coeffs: &[i64] = match (rs.kind(), rs.rank(), bad, p) {
        (A, 1, ..) => &[1, 1],
        (A, 2, ..) => &[1, 3, 1],
        (A, 3, ..) => &[1, 6, 7, 2],
        (A, 4, ..) => &[1, 10, 25, 20, 5],
        (B, 2, false, _) => &[1, 4, 2],
        (B, 2, true, _) => &[1, 4, 5],
        (G, 2, false, _) => &[1, 6, 5, 1],
        (G, 2, true, 2) => &[1, 6, 8, 1],
        (G, 2, true, _) => &[1, 6, 11, 2],
        (B | C, 3, false, _) => &[1, 9, 16, 8, 1],
        (B | C, 3, true, _) => &[1, 9, 25, 19, 2],
        (B | C, 4, false, _) => &[1, 16, 64, 88, 48, 11, 1],
        (B | C, 4, true, _) => &[1, 16, 82, 168, 136, 31, 2],
        (D, 4, false, _) => &[1, 12, 34, 36, 15, 2],
        (D, 4, true, _) => &[1, 12, 34, 36, 18, 2],
        _ => return None,
    };
    Some(ClassCountPolynomial::new(coeffs.to_vec()))
}

/// Smallest prime above every bad prime.
pub fn good_prime(rs: &RootSystem) -> u64 {
    let floor = rs.bad_primes().into_iter().max().unwrap_or(1);
    (floor + 1..).find(|&p| is_prime(p)).unwrap()
}

/// Merges branches differing in one coordinate until nothing changes,
/// always taking the largest coordinate first.
fn merge(mut rows: BTreeSet<Pattern>) -> BTreeSet<Pattern> {
    use ParameterKind::*;
    loop {
        let mut best: Option<(usize, Pattern, Pattern)> = None;
        for x in &rows {
            for (&j, &kind) in &x.kinds {
                let leading = x.kinds.len() > 1 && !x.kinds.iter().any(|(&i, &k)| i < j && k == A);
                let partner = match kind {
                    A if leading => continue,
                    A | E => None,
                    D => Some(E),
                    _ => continue,
                };
                if best.as_ref().is_some_and(|(b, _, _)| *b >= j) || x.kinds.iter().any(|(&i, &k)| i > j && k == A) {
                    continue;
                }
                let mut other = x.clone();
                match partner {
                    Some(k) => other.kinds.insert(j, k),
                    None => other.kinds.remove(&j),
                };
                if rows.contains(&other) {
                    best = Some((j, x.clone(), other));
                }
            }
        }
        let Some((j, x, other)) = best else {
            return rows;
        };
        rows.remove(&x);
        rows.remove(&other);
        let merged = match x.kinds[&j] {
            A => B,
            E => F,
            _ => A,
        };
        let mut m = x;
        m.kinds.insert(j, merged);
        rows.insert(m);
    }
}

fn representative(kinds: &BTreeMap<usize, ParameterKind>) -> String {
    if kinds.is_empty() {
        return "1".to_string();
    }
    kinds
        .iter()
        .map(|(&j, k)| format!("x_{n}({l}_{n})", n = j + 1, l = k.letter()))
        .collect()
}

/// Size of a pattern in factored form, e.g. `2v^2(v+1)`.
fn size(kinds: &BTreeMap<usize, ParameterKind>, p: u64) -> String {
    use ParameterKind::*;
    let count = |k: ParameterKind| kinds.values().filter(|&&x| x == k).count() as u32;
    let coeff = p.pow(count(C)) * 2u64.pow(count(F));
    let power = |base: &str, e: u32, paren: bool| match (e, paren) {
        (0, _) => String::new(),
        (1, true) => format!("({base})"),
        (1, false) => base.to_string(),
        (e, true) => format!("({base})^{e}"),
        (e, false) => format!("{base}^{e}"),
    };
    let (a, b, d, g) = (count(A), count(B), count(D), count(G));
    let lone = a == 0 && coeff == 1 && b + d + g == 1;
    let mut out = String::new();
    if coeff != 1 {
        out.push_str(&coeff.to_string());
    }
    out.push_str(&power("v", a, false));
    out.push_str(&power("v+1", b, !lone));
    out.push_str(&power("v-1", d, !lone));
    if g > 0 {
        out.push_str(&format!("{}/{}", power("v+1", g, !lone), p.pow(g)));
    }
    if out.is_empty() {
        out.push('1');
    }
    out
}

fn prime_label(group: &BTreeSet<Option<u64>>, bad: &[u64]) -> String {
    let list = |ps: Vec<u64>| ps.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
    if group.contains(&None) {
        let excluded: Vec<u64> = bad.iter().copied().filter(|p| !group.contains(&Some(*p))).collect();
        if excluded.is_empty() {
            "−".to_string()
        } else {
            format!("≠{}", list(excluded))
        }
    } else {
        format!("={}", list(group.iter().flatten().copied().collect()))
    }
}

/// Family table rows for one root system, covering a good prime and every
/// bad prime.
pub fn family_table(rs: Arc<RootSystem>) -> Result<Vec<TableRow>> {
    let bad = rs.bad_primes();
    // `None` stands for good characteristic.
    let mut primes: Vec<(Option<u64>, u64)> = vec![(None, good_prime(&rs))];
    primes.extend(bad.iter().rev().map(|&p| (Some(p), p)));
    let mut patterns: Vec<(Option<u64>, u64, BTreeSet<Pattern>)> = vec![];
    for &(label, p) in &primes {
        let analysis = analyze(&classify(rs.clone(), p)?);
        let manual = analysis.manual_families();
        if !manual.is_empty() {
            return Err(Error::ManualFamiliesPresent(manual));
        }
        let rows = analysis
            .families
            .iter()
            .flat_map(|f| &f.expression.as_ref().unwrap().branches)
            .map(|b| Pattern {
                kinds: b.kinds.clone(),
                centralizer: (b.centralizer.p_exp, b.centralizer.q_exp),
            })
            .collect();
        patterns.push((label, p, merge(rows)));
    }
    let a_coords = |pat: &Pattern| -> Vec<usize> {
        let a: Vec<usize> = pat
            .kinds
            .iter()
            .filter(|(_, &k)| k == ParameterKind::A)
            .map(|(&j, _)| j + 1)
            .collect();
        if a.is_empty() {
            pat.kinds.keys().map(|j| j + 1).collect()
        } else {
            a
        }
    };
    let good_names: BTreeSet<Vec<usize>> = patterns[0].2.iter().map(a_coords).collect();
    let name_of = |label: Option<u64>, pat: &Pattern| -> Vec<usize> {
        if label.is_none() {
            return a_coords(pat);
        }
        let support: Vec<usize> = pat.kinds.keys().map(|j| j + 1).collect();
        (1..=support.len())
            .rev()
            .map(|k| support[..k].to_vec())
            .find(|prefix| good_names.contains(prefix))
            .unwrap_or_else(|| a_coords(pat))
    };
    // name -> prime label -> rows
    let mut blocks: BTreeMap<NameKey, BTreeMap<Option<u64>, BTreeSet<(String, String, String)>>> = BTreeMap::new();
    for (label, p, pats) in &patterns {
        for pat in pats {
            let centralizer = CentralizerOrder {
                p: *p,
                p_exp: pat.centralizer.0,
                q_exp: pat.centralizer.1,
            };
            blocks
                .entry(NameKey(name_of(*label, pat)))
                .or_default()
                .entry(*label)
                .or_default()
                .insert((representative(&pat.kinds), size(&pat.kinds, *p), centralizer.to_string()));
        }
    }
    let mut out = vec![];
    for (name, by_prime) in blocks {
        let mut groups: Vec<(BTreeSet<Option<u64>>, &BTreeSet<(String, String, String)>)> = vec![];
        for &(label, _) in &primes {
            let Some(rows) = by_prime.get(&label) else { continue };
            match groups.iter_mut().find(|(_, r)| *r == rows) {
                Some((g, _)) => {
                    g.insert(label);
                }
                None => groups.push((BTreeSet::from([label]), rows)),
            }
        }
        for (group, rows) in groups {
            let prime = prime_label(&group, &bad);
            for (family, size, centralizer) in rows {
                out.push(TableRow {
                    name: name.0.clone(),
                    prime: prime.clone(),
                    family: family.clone(),
                    size: size.clone(),
                    centralizer: centralizer.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// Orders names so that a name precedes its proper prefixes.
#[derive(Debug, Clone, PartialEq, Eq)]
struct NameKey(Vec<usize>);

impl Ord for NameKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let pad = |v: &[usize]| v.iter().copied().chain(std::iter::once(usize::MAX)).collect::<Vec<_>>();
        pad(&self.0).cmp(&pad(&other.0))
    }
}

impl PartialOrd for NameKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// The table as text, headed by the type label.
pub fn render_family_table(rs: &RootSystem, rows: &[TableRow]) -> String {
    let mut out = format!("{}\nName | Prime | Family | Size | Centralizer\n", rs.label());
    for r in rows {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    out
}
