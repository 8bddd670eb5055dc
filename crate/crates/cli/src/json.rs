//! Serializable reports emitted by `classify --json`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use uclasses::analyzer::{Analysis, Branch, ClassCountPolynomial};
use uclasses::classifier::{Classification, Family};

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|j| j + 1).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchReport {
    pub conditions: Vec<String>,
    pub representative: String,
    /// Ascending coefficients in `v = q − 1`.
    pub count: ClassCountPolynomial,
    pub count_text: String,
    pub centralizer: String,
}

impl From<&Branch> for BranchReport {
    fn from(b: &Branch) -> Self {
        BranchReport {
            conditions: b.conditions.clone(),
            representative: b.representative(),
            count: b.count.clone(),
            count_text: b.count.to_string(),
            centralizer: b.centralizer.to_string(),
        }
    }
}

/// One family; indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub c: Vec<usize>,
    pub d: Vec<usize>,
    pub normalized: Vec<usize>,
    pub representative: String,
    pub residuals: BTreeMap<usize, String>,
    pub centralizer_params: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branches: Option<Vec<BranchReport>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count_poly: Option<ClassCountPolynomial>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count_poly_text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub centralizer: Option<String>,
    /// Why the family could not be counted automatically.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manual: Option<String>,
}

impl FamilyReport {
    fn new(cl: &Classification, f: &Family) -> Self {
        FamilyReport {
            c: one_based(&f.c),
            d: one_based(&f.d),
            normalized: one_based(&f.normalized),
            representative: f.representative(),
            residuals: f.residuals.iter().map(|(&j, g)| (j + 1, f.format(&cl.ring, g))).collect(),
            centralizer_params: f.params.iter().map(|t| f.format(&cl.ring, t)).collect(),
            branches: None,
            count_poly: None,
            count_poly_text: None,
            centralizer: None,
            manual: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyReport {
    #[serde(rename = "type")]
    pub root_type: String,
    pub p: u64,
    pub families: Vec<FamilyReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_poly: Option<ClassCountPolynomial>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_poly_text: Option<String>,
}

impl ClassifyReport {
    pub fn new(cl: &Classification, analysis: Option<&Analysis>) -> Self {
        let mut families: Vec<FamilyReport> = cl.families.iter().map(|f| FamilyReport::new(cl, f)).collect();
        let mut k_poly = None;
        if let Some(an) = analysis {
            for (report, fa) in families.iter_mut().zip(&an.families) {
                debug_assert_eq!(one_based(&fa.c), report.c);
                match &fa.expression {
                    Some(e) => {
                        report.branches = Some(e.branches.iter().map(BranchReport::from).collect());
                        report.count_poly_text = Some(e.total.to_string());
                        report.count_poly = Some(e.total.clone());
                        report.centralizer = Some(match e.centralizer() {
                            Some(z) => z.to_string(),
                            None => "varies".to_string(),
                        });
                    }
                    None => report.manual = fa.manual.clone(),
                }
            }
            k_poly = an.total().ok();
        }
        ClassifyReport {
            root_type: cl.rs.label(),
            p: cl.p,
            families,
            k_poly_text: k_poly.as_ref().map(|k| k.to_string()),
            k_poly,
        }
    }
}
