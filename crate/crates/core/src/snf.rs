//! Smith normal form of small integer matrices, with unimodular
//! certificate.

/// Row-major integer matrix.
pub type IntMatrix = Vec<Vec<i64>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    /// Diagonal matrix with `d_1 | d_2 | …`, same shape as the input.
    pub d: IntMatrix,
    /// Unimodular row transform, `rows × rows`.
    pub u: IntMatrix,
    /// Unimodular column transform, `cols × cols`.
    pub v: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries in order.
    pub fn invariants(&self) -> Vec<i64> {
        (0..self.d.len().min(self.d.first().map_or(0, Vec::len)))
            .map(|k| self.d[k][k])
            .filter(|&x| x != 0)
            .collect()
    }

    /// Recomputes `U·M·V` and compares it with `D`.
    pub fn certifies(&self, m: &IntMatrix) -> bool {
        if m.is_empty() {
            return self.d.is_empty();
        }
        matmul(&matmul(&self.u, m), &self.v) == self.d
            && det_abs(&self.u) == 1
            && det_abs(&self.v) == 1
            && self.divisibility_holds()
    }

    fn divisibility_holds(&self) -> bool {
        let rows = self.d.len();
        let cols = self.d[0].len();
        for i in 0..rows {
            for j in 0..cols {
                if i != j && self.d[i][j] != 0 {
                    return false;
                }
            }
        }
        let diag: Vec<i64> = (0..rows.min(cols)).map(|k| self.d[k][k]).collect();
        diag.iter().all(|&x| x >= 0)
            && diag.windows(2).all(|w| if w[0] == 0 { w[1] == 0 } else { w[1] % w[0] == 0 })
    }
}

pub fn matmul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![0i64; m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l] == 0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += a[i][l] * b[l][j];
            }
        }
    }
    out
}

fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

/// `|det|` by fraction-free elimination (Bareiss).
fn det_abs(m: &IntMatrix) -> i64 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut prev = 1i128;
    let mut sign = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(r) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return 0;
            };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    if n == 0 {
        return 1;
    }
    (sign * a[n - 1][n - 1]).abs() as i64
}

/// `round(a / b)`, so that remainders are at most `|b|/2` in size.
fn nearest_quotient(a: i64, b: i64) -> i64 {
    let q = a.div_euclid(b);
    let r = a - q * b;
    if 2 * r > b.abs() {
        q + b.signum()
    } else {
        q
    }
}

/// Computes the Smith normal form of `m`.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut d = m.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero absolute value in the remaining block
        let pivot = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| d[i][j] != 0)
            .min_by_key(|&(i, j)| d[i][j].abs());
        let Some((pi, pj)) = pivot else { break };
        d.swap(t, pi);
        u.swap(t, pi);
        for r in d.iter_mut() {
            r.swap(t, pj);
        }
        for r in v.iter_mut() {
            r.swap(t, pj);
        }
        loop {
            // bring the smallest entry of row t and column t to the pivot
            let (bi, bj) = (t..rows)
                .map(|i| (i, t))
                .chain((t..cols).map(|j| (t, j)))
                .filter(|&(i, j)| d[i][j] != 0)
                .min_by_key(|&(i, j)| d[i][j].abs())
                .unwrap();
            if bi != t {
                d.swap(t, bi);
                u.swap(t, bi);
            }
            if bj != t {
                for r in d.iter_mut() {
                    r.swap(t, bj);
                }
                for r in v.iter_mut() {
                    r.swap(t, bj);
                }
            }
            let pv = d[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = nearest_quotient(d[i][t], pv);
                if q != 0 {
                    for j in 0..cols {
                        d[i][j] -= q * d[t][j];
                    }
                    for j in 0..rows {
                        u[i][j] -= q * u[t][j];
                    }
                }
                clean &= d[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = nearest_quotient(d[t][j], pv);
                if q != 0 {
                    for i in 0..rows {
                        d[i][j] -= q * d[i][t];
                    }
                    for i in 0..cols {
                        v[i][j] -= q * v[i][t];
                    }
                }
                clean &= d[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // the pivot must divide the rest of the block
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| d[i][j] % pv != 0);
            match bad {
                Some((i, _)) => {
                    for j in 0..cols {
                        d[t][j] += d[i][j];
                    }
                    for j in 0..rows {
                        u[t][j] += u[i][j];
                    }
                }
                None => break,
            }
        }
        if d[t][t] < 0 {
            for j in 0..cols {
                d[t][j] = -d[t][j];
            }
            for j in 0..rows {
                u[t][j] = -u[t][j];
            }
        }
        t += 1;
    }
    SmithForm { d, u, v }
}

/// Whether the rows of `m` have Smith normal form with every diagonal entry
/// equal to 1, i.e. they span a saturated sublattice of full row rank.
pub fn rows_unimodular(m: &IntMatrix) -> bool {
    let snf = smith_normal_form(m);
    let inv = snf.invariants();
    inv.len() == m.len() && inv.iter().all(|&x| x == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cases() {
        assert_eq!(smith_normal_form(&identity(3)).invariants(), vec![1, 1, 1]);
        assert_eq!(smith_normal_form(&vec![vec![1, 1], vec![0, 2]]).invariants(), vec![1, 2]);
        assert_eq!(smith_normal_form(&vec![vec![1, 2]]).invariants(), vec![1]);
        assert_eq!(smith_normal_form(&vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]).invariants(), vec![2, 6, 12]);
        assert!(rows_unimodular(&vec![vec![2, 2, 1]]));
        assert!(!rows_unimodular(&vec![vec![2, 0]]));
        assert!(!rows_unimodular(&vec![vec![1, 1], vec![1, -1]]));
    }

    #[test]
    fn zero_matrix() {
        let m = vec![vec![0; 3]; 2];
        let s = smith_normal_form(&m);
        assert!(s.invariants().is_empty());
        assert!(s.certifies(&m));
    }

    proptest! {
        #[test]
        fn certificate_holds(rows in 1usize..=4, cols in 1usize..=6, seed in prop::collection::vec(-9i64..=9, 24)) {
            let m: IntMatrix = (0..rows).map(|i| (0..cols).map(|j| seed[i * 6 + j]).collect()).collect();
            let s = smith_normal_form(&m);
            prop_assert!(s.certifies(&m));
        }
    }
}
