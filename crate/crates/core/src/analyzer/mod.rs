//! Counting the classes in each family from its residual functions.
//!
//! For a family `(c, d)` the generic centralizer element `x(t)` maps the
//! representative with free entries `b` to the one with entries
//! `b + r(t)`, where `r_j` is the residual of `j ∈ d`. The coordinates of
//! `d` are decided in ascending order. For each one the image of `r_j` on
//! the parameters that still stabilize the earlier coordinates is
//! determined: everything (the entry can be taken to be 0), nothing (the
//! entry is free) or a subgroup of index `p` (the entry is one of `p` coset
//! representatives). The stabilizing parameters are then cut down before
//! moving on. Whenever the answer depends on whether a coefficient
//! vanishes, the analysis splits into branches.

mod elimination;
pub mod poly;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use poly::{fit_polynomial, ClassCountPolynomial};

use crate::classifier::{Classification, Family};
use crate::error::{Error, Result};

/// How the entry of one coordinate of a representative varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ParameterKind {
    /// Any element of `F_q^×`.
    A,
    /// Any element of `F_q`.
    B,
    /// One of `p` coset representatives for the image of an additive map.
    C,
    /// Any element of `F_q^×` except one value.
    D,
    /// One determined nonzero value.
    E,
    /// Zero or one determined nonzero value.
    F,
    /// One of `q/p` coset representatives for a subgroup of order `p`.
    G,
}

impl ParameterKind {
    pub fn letter(self) -> char {
        match self {
            ParameterKind::A => 'a',
            ParameterKind::B => 'b',
            ParameterKind::C => 'c',
            ParameterKind::D => 'd',
            ParameterKind::E => 'e',
            ParameterKind::F => 'f',
            ParameterKind::G => 'g',
        }
    }

    /// Number of values as a polynomial in `v`, to be divided by
    /// [`Self::divisor`].
    pub fn factor(self, p: u64) -> ClassCountPolynomial {
        match self {
            ParameterKind::G => ClassCountPolynomial::v_plus(1),
            ParameterKind::A => ClassCountPolynomial::v(),
            ParameterKind::B => ClassCountPolynomial::v_plus(1),
            ParameterKind::C => ClassCountPolynomial::constant(p as i64),
            ParameterKind::D => ClassCountPolynomial::v_plus(-1),
            ParameterKind::E => ClassCountPolynomial::constant(1),
            ParameterKind::F => ClassCountPolynomial::constant(2),
        }
    }

    pub fn divisor(self, p: u64) -> i64 {
        if self == ParameterKind::G {
            p as i64
        } else {
            1
        }
    }

    /// Number of values of a product of kinds, as a polynomial in `v`.
    pub fn product<'a>(kinds: impl IntoIterator<Item = &'a ParameterKind>, p: u64) -> Option<ClassCountPolynomial> {
        let mut num = ClassCountPolynomial::constant(1);
        let mut den = 1i64;
        for k in kinds {
            num = &num * &k.factor(p);
            den *= k.divisor(p);
        }
        num.div_exact(den)
    }
}

/// A centralizer order `p^p_exp · q^q_exp`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CentralizerOrder {
    pub p: u64,
    pub p_exp: u32,
    pub q_exp: u32,
}

impl CentralizerOrder {
    pub fn eval(&self, q: u64) -> u128 {
        (self.p as u128).pow(self.p_exp) * (q as u128).pow(self.q_exp)
    }
}

impl fmt::Display for CentralizerOrder {
    /// Compact layout: `2q^2`, `q^4`, `q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.p.pow(self.p_exp);
        let qpart = match self.q_exp {
            0 => String::new(),
            1 => "q".to_string(),
            e => format!("q^{e}"),
        };
        match (m, qpart.is_empty()) {
            (1, true) => write!(f, "1"),
            (1, false) => write!(f, "{qpart}"),
            (m, _) => write!(f, "{m}{qpart}"),
        }
    }
}

/// One case of a family's analysis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    /// Conditions on the parameters, e.g. `a_10 = 1` or `b_14 ≠ 0`.
    pub conditions: Vec<String>,
    /// Kind of every coordinate that is present (0-based index); absent
    /// coordinates are zero.
    pub kinds: BTreeMap<usize, ParameterKind>,
    pub count: ClassCountPolynomial,
    pub centralizer: CentralizerOrder,
}

impl Branch {
    /// Representative such as `x_1(a_1)x_2(a_2)x_4(c_4)`.
    pub fn representative(&self) -> String {
        if self.kinds.is_empty() {
            return "1".to_string();
        }
        self.kinds
            .iter()
            .map(|(&j, k)| format!("x_{n}({l}_{n})", n = j + 1, l = k.letter()))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountExpression {
    pub branches: Vec<Branch>,
    pub total: ClassCountPolynomial,
}

impl CountExpression {
    fn new(branches: Vec<Branch>) -> Self {
        let total = branches.iter().map(|b| b.count.clone()).sum();
        CountExpression { branches, total }
    }

    /// The common centralizer order if all branches agree.
    pub fn centralizer(&self) -> Option<CentralizerOrder> {
        let first = self.branches.first()?.centralizer;
        self.branches.iter().all(|b| b.centralizer == first).then_some(first)
    }
}

/// Analysis of one family; `expression` is `None` when the residuals fall
/// outside the handled forms, with the reason in `manual`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyAnalysis {
    pub c: Vec<usize>,
    pub d: Vec<usize>,
    pub expression: Option<CountExpression>,
    pub manual: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub p: u64,
    pub num_roots: usize,
    pub families: Vec<FamilyAnalysis>,
}

impl Analysis {
    pub fn manual_families(&self) -> Vec<String> {
        self.families
            .iter()
            .filter(|f| f.expression.is_none())
            .map(|f| {
                format!(
                    "c={:?} d={:?}: {}",
                    one_based(&f.c),
                    one_based(&f.d),
                    f.manual.as_deref().unwrap_or("")
                )
            })
            .collect()
    }

    /// `k(U)` as a polynomial in `v`.
    pub fn total(&self) -> Result<ClassCountPolynomial> {
        let exprs: Vec<&CountExpression> = self.families.iter().filter_map(|f| f.expression.as_ref()).collect();
        if exprs.len() != self.families.len() {
            return Err(Error::ManualFamiliesPresent(self.manual_families()));
        }
        Ok(total_count(exprs))
    }

    /// Checks `Σ |branch| · q^N / |C_U(y)| = q^N` as an identity of
    /// polynomials in `q`.
    pub fn mass_formula_holds(&self) -> Result<bool> {
        let branches: Vec<&Branch> = self
            .families
            .iter()
            .map(|f| f.expression.as_ref().ok_or_else(|| Error::ManualFamiliesPresent(self.manual_families())))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flat_map(|e| &e.branches)
            .collect();
        Ok(mass_formula(&branches, self.p, self.num_roots))
    }
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|x| x + 1).collect()
}

/// `Σ count · q^{N−e} · p^{M−m} = p^M · q^N` with `M` the largest `p`-exponent.
pub fn mass_formula(branches: &[&Branch], p: u64, n: usize) -> bool {
    let max_m = branches.iter().map(|b| b.centralizer.p_exp).max().unwrap_or(0);
    let mut lhs = vec![0i128; n + 1];
    for b in branches {
        let Some(shift) = n.checked_sub(b.centralizer.q_exp as usize) else {
            return false;
        };
        let scale = (p as i128).pow(max_m - b.centralizer.p_exp);
        for (i, c) in b.count.in_q().into_iter().enumerate() {
            if i + shift >= lhs.len() {
                lhs.resize(i + shift + 1, 0);
            }
            lhs[i + shift] += c * scale;
        }
    }
    let mut rhs = vec![0i128; lhs.len().max(n + 1)];
    rhs[n] = (p as i128).pow(max_m);
    lhs.resize(rhs.len(), 0);
    lhs == rhs
}

pub fn total_count<'a>(exprs: impl IntoIterator<Item = &'a CountExpression>) -> ClassCountPolynomial {
    exprs.into_iter().map(|e| e.total.clone()).sum()
}

/// Determines the branches of one family.
pub fn analyze_family(cl: &Classification, fam: &Family) -> Result<CountExpression> {
    let branches = elimination::run(cl, fam)?;
    Ok(CountExpression::new(branches))
}

/// Analyzes every family of a classification.
pub fn analyze(cl: &Classification) -> Analysis {
    let families = cl
        .families
        .iter()
        .map(|fam| match analyze_family(cl, fam) {
            Ok(expr) => FamilyAnalysis {
                c: fam.c.clone(),
                d: fam.d.clone(),
                expression: Some(expr),
                manual: None,
            },
            Err(e) => FamilyAnalysis {
                c: fam.c.clone(),
                d: fam.d.clone(),
                expression: None,
                manual: Some(e.to_string()),
            },
        })
        .collect();
    Analysis {
        p: cl.p,
        num_roots: cl.rs.num_positive(),
        families,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::classify;
    use crate::root_system::{RootKind, RootSystem};
    use std::sync::Arc;

    fn analysis(kind: RootKind, rank: usize, p: u64) -> Analysis {
        analyze(&classify(Arc::new(RootSystem::new(kind, rank).unwrap()), p).unwrap())
    }

    #[test]
    fn type_a_counts() {
        assert_eq!(analysis(RootKind::A, 1, 2).total().unwrap().coeffs(), [1, 1]);
        assert_eq!(analysis(RootKind::A, 2, 3).total().unwrap().coeffs(), [1, 3, 1]);
        assert_eq!(analysis(RootKind::A, 3, 2).total().unwrap().coeffs(), [1, 6, 7, 2]);
    }

    #[test]
    fn b2_counts_in_both_characteristics() {
        let bad = analysis(RootKind::B, 2, 2);
        assert!(bad.manual_families().is_empty());
        assert_eq!(bad.total().unwrap().coeffs(), [1, 4, 5]);
        assert_eq!(analysis(RootKind::B, 2, 3).total().unwrap().coeffs(), [1, 4, 2]);
    }

    #[test]
    fn class_equation_detects_a_wrong_count() {
        let mut an = analysis(RootKind::B, 2, 2);
        assert_eq!(an.mass_formula_holds(), Ok(true));
        let branch = &mut an.families[1].expression.as_mut().unwrap().branches[0];
        branch.count = &branch.count + &ClassCountPolynomial::constant(1);
        assert_eq!(an.mass_formula_holds(), Ok(false));
    }

    #[test]
    fn kinds_count_their_values() {
        use ParameterKind::*;
        assert_eq!(ParameterKind::product(&[A, B], 2).unwrap().coeffs(), [0, 1, 1]);
        assert_eq!(ParameterKind::product(&[C, D], 3).unwrap().coeffs(), [-3, 3]);
        assert_eq!(ParameterKind::product(&[G, A], 2), None);
        assert_eq!(ParameterKind::product(&[G, C], 2).unwrap().coeffs(), [1, 1]);
        assert_eq!(F.factor(5).coeffs(), [2]);
    }

    #[test]
    fn centralizer_orders_display_and_evaluate() {
        let z = CentralizerOrder { p: 2, p_exp: 1, q_exp: 2 };
        assert_eq!(z.to_string(), "2q^2");
        assert_eq!(z.eval(4), 32);
        assert_eq!(CentralizerOrder { p: 3, p_exp: 0, q_exp: 1 }.to_string(), "q");
        assert_eq!(CentralizerOrder { p: 3, p_exp: 0, q_exp: 0 }.to_string(), "1");
    }

    #[test]
    fn branch_representatives_use_kind_letters() {
        let an = analysis(RootKind::B, 2, 2);
        let reps: Vec<String> = an
            .families
            .iter()
            .flat_map(|f| &f.expression.as_ref().unwrap().branches)
            .map(Branch::representative)
            .collect();
        assert!(reps.contains(&"1".to_string()));
        assert!(reps.contains(&"x_1(a_1)x_2(a_2)x_4(c_4)".to_string()));
    }
}
