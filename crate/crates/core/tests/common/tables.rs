//! Comparison of family tables against transcribed reference tables.
//!
//! Rows are compared per characteristic. A reference row either appears
//! verbatim, or is covered by our rows once every `b_j` is split into
//! "absent" and `a_j` and every `f_j` into "absent" and `e_j`, or is refuted
//! by brute force: no element of `U(p)` with the row's shape has the
//! claimed centralizer order.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use uclasses::bruteforce::Enumerator;
use uclasses::report::{family_table, good_prime};
use uclasses::rings::FfElem;
use uclasses::root_system::RootSystem;

/// `None` is good characteristic.
type Prime = Option<u64>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Shape {
    kinds: BTreeMap<usize, char>,
    /// `(coefficient, exponent of q)`.
    centralizer: (u64, u32),
}

#[derive(Debug, Clone)]
struct Row {
    raw: String,
    primes: BTreeSet<Prime>,
    shape: Shape,
}

fn parse_primes(label: &str, bad: &[u64]) -> BTreeSet<Prime> {
    let list = |s: &str| -> Vec<u64> { s.split(',').map(|p| p.parse().unwrap()).collect() };
    let all: BTreeSet<Prime> = std::iter::once(None).chain(bad.iter().map(|&p| Some(p))).collect();
    if label == "−" {
        all
    } else if let Some(rest) = label.strip_prefix('≠') {
        let ex = list(rest);
        all.into_iter().filter(|p| p.is_none_or(|p| !ex.contains(&p))).collect()
    } else {
        let only = list(label.strip_prefix('=').unwrap());
        only.into_iter().map(Some).collect()
    }
}

fn parse_family(s: &str) -> BTreeMap<usize, char> {
    if s == "1" {
        return BTreeMap::new();
    }
    s.split("x_")
        .skip(1)
        .map(|tok| {
            let (idx, rest) = tok.split_once('(').unwrap();
            (idx.parse::<usize>().unwrap() - 1, rest.chars().next().unwrap())
        })
        .collect()
}

fn parse_centralizer(s: &str) -> (u64, u32) {
    let (coef, rest) = match s.find('q') {
        Some(i) => (&s[..i], &s[i + 1..]),
        None => return (s.parse().unwrap(), 0),
    };
    let coef = if coef.is_empty() { 1 } else { coef.parse().unwrap() };
    let exp = match rest.strip_prefix('^') {
        Some(e) => e.parse().unwrap(),
        None => 1,
    };
    (coef, exp)
}

fn parse(line: &str, bad: &[u64]) -> Row {
    let cols: Vec<&str> = line.split(" | ").collect();
    assert_eq!(cols.len(), 5, "malformed row {line}");
    Row {
        raw: line.to_string(),
        primes: parse_primes(cols[1], bad),
        shape: Shape {
            kinds: parse_family(cols[2]),
            centralizer: parse_centralizer(cols[4]),
        },
    }
}

fn expand(shape: &Shape) -> Vec<Shape> {
    let mut out = vec![shape.clone()];
    for (&j, &k) in &shape.kinds {
        let split = match k {
            'b' => 'a',
            'f' => 'e',
            _ => continue,
        };
        out = out
            .into_iter()
            .flat_map(|s| {
                let mut absent = s.clone();
                absent.kinds.remove(&j);
                let mut present = s;
                present.kinds.insert(j, split);
                [absent, present]
            })
            .collect();
    }
    out
}

#[derive(Debug, Default)]
pub struct TableComparison {
    pub exact: usize,
    pub regrouped: Vec<String>,
    pub refuted: Vec<String>,
    pub unexplained: Vec<String>,
    /// Our row shapes (expanded) that the reference never lists.
    pub omitted: usize,
}

impl TableComparison {
    pub fn passed(&self) -> bool {
        self.unexplained.is_empty()
    }
}

/// Centralizer orders of all elements with nonzero entries on the `a`,
/// `d` and `e` coordinates, arbitrary entries on the `c` coordinates and
/// zeros elsewhere.
fn centralizers_of_shape(en: &Enumerator, n: usize, q: u64, kinds: &BTreeMap<usize, char>) -> BTreeSet<u128> {
    let mut elems = vec![vec![FfElem(0); n]];
    for (&j, &k) in kinds {
        let values: Vec<u32> = if k == 'c' { (0..q as u32).collect() } else { (1..q as u32).collect() };
        elems = elems
            .into_iter()
            .flat_map(|e| {
                values.iter().map(move |&v| {
                    let mut e = e.clone();
                    e[j] = FfElem(v);
                    e
                })
            })
            .collect();
    }
    elems.iter().map(|e| en.centralizer_order(e) as u128).collect()
}

pub fn compare_with_reference(rs: Arc<RootSystem>, reference: &str) -> TableComparison {
    let bad = rs.bad_primes();
    let ours_rows: Vec<String> = family_table(rs.clone()).unwrap().iter().map(|r| r.to_string()).collect();
    let ours: Vec<Row> = ours_rows.iter().map(|l| parse(l, &bad)).collect();
    let theirs: Vec<Row> = reference.lines().filter(|l| !l.trim().is_empty()).map(|l| parse(l, &bad)).collect();
    let expanded = |rows: &[Row], p: Prime| -> BTreeSet<Shape> {
        rows.iter()
            .filter(|r| r.primes.contains(&p))
            .flat_map(|r| expand(&r.shape))
            .collect()
    };
    let primes: Vec<Prime> = std::iter::once(None).chain(bad.iter().map(|&p| Some(p))).collect();
    let ours_expanded: BTreeMap<Prime, BTreeSet<Shape>> = primes.iter().map(|&p| (p, expanded(&ours, p))).collect();
    let mut cmp = TableComparison::default();
    let mut enumerators: BTreeMap<u64, Enumerator> = BTreeMap::new();
    for row in &theirs {
        if ours_rows.contains(&row.raw) {
            cmp.exact += 1;
            continue;
        }
        let mut refuted = false;
        let mut unexplained = false;
        for &p in &row.primes {
            for shape in expand(&row.shape) {
                if ours_expanded[&p].contains(&shape) {
                    continue;
                }
                let q = p.unwrap_or_else(|| good_prime(&rs));
                let en = enumerators
                    .entry(q)
                    .or_insert_with(|| Enumerator::new(rs.clone(), q).unwrap());
                let claimed = shape.centralizer.0 as u128 * (q as u128).pow(shape.centralizer.1);
                if centralizers_of_shape(en, rs.num_positive(), q, &shape.kinds).contains(&claimed) {
                    unexplained = true;
                } else {
                    refuted = true;
                }
            }
        }
        match (unexplained, refuted) {
            (true, _) => cmp.unexplained.push(row.raw.clone()),
            (false, true) => cmp.refuted.push(row.raw.clone()),
            (false, false) => cmp.regrouped.push(row.raw.clone()),
        }
    }
    for &p in &primes {
        let theirs_expanded = expanded(&theirs, p);
        cmp.omitted += ours_expanded[&p].difference(&theirs_expanded).count();
    }
    cmp
}
