//! Smith normal form over the integers, tracking the row transform.
//!
//! Only row operations are recorded: for abelian group quotients the column
//! transform is never needed, while the row transform `L` (and its inverse)
//! realises the isomorphism `Z^r / colspan(M) -> ⊕ Z/d_i`.

/// Result of reducing an `r × c` integer matrix `M`.
///
/// `left * M * right = diag(diagonal)` for some unimodular `right`, with
/// `diagonal[i]` dividing `diagonal[i + 1]` whenever both are nonzero.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub diagonal: Vec<i128>,
    pub left: Vec<Vec<i128>>,
    pub left_inv: Vec<Vec<i128>>,
}

struct Reducer {
    a: Vec<Vec<i128>>,
    left: Vec<Vec<i128>>,
    left_inv: Vec<Vec<i128>>,
    rows: usize,
    cols: usize,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        self.left.swap(i, j);
        for row in self.left_inv.iter_mut() {
            row.swap(i, j);
        }
    }

    // row_i += k * row_j
    fn add_row(&mut self, i: usize, j: usize, k: i128) {
        if k == 0 {
            return;
        }
        for c in 0..self.cols {
            self.a[i][c] += k * self.a[j][c];
        }
        for c in 0..self.rows {
            self.left[i][c] += k * self.left[j][c];
        }
        // inverse of E = I + k e_ij is I - k e_ij, applied on the right
        for row in self.left_inv.iter_mut() {
            row[j] -= k * row[i];
        }
    }

    fn negate_row(&mut self, i: usize) {
        for v in self.a[i].iter_mut() {
            *v = -*v;
        }
        for v in self.left[i].iter_mut() {
            *v = -*v;
        }
        for row in self.left_inv.iter_mut() {
            row[i] = -row[i];
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
    }

    // col_i += k * col_j
    fn add_col(&mut self, i: usize, j: usize, k: i128) {
        if k == 0 {
            return;
        }
        for row in self.a.iter_mut() {
            row[i] += k * row[j];
        }
    }

    fn min_nonzero_from(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let v = self.a[i][j].abs();
                if v != 0 && best.is_none_or(|(bi, bj)| v < self.a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    fn reduce(&mut self) {
        let bound = self.rows.min(self.cols);
        for t in 0..bound {
            let Some((pi, pj)) = self.min_nonzero_from(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let pivot = self.a[t][t];
                let mut clean = true;
                for i in t + 1..self.rows {
                    let q = self.a[i][t].div_euclid(pivot);
                    self.add_row(i, t, -q);
                    if self.a[i][t] != 0 {
                        clean = false;
                    }
                }
                for j in t + 1..self.cols {
                    let q = self.a[t][j].div_euclid(pivot);
                    self.add_col(j, t, -q);
                    if self.a[t][j] != 0 {
                        clean = false;
                    }
                }
                if !clean {
                    // move the smallest remainder in row t / column t to the pivot
                    let mut best = (t, t);
                    for i in t + 1..self.rows {
                        let v = self.a[i][t].abs();
                        if v != 0 && v < self.a[best.0][best.1].abs() {
                            best = (i, t);
                        }
                    }
                    for j in t + 1..self.cols {
                        let v = self.a[t][j].abs();
                        if v != 0 && v < self.a[best.0][best.1].abs() {
                            best = (t, j);
                        }
                    }
                    self.swap_rows(t, best.0);
                    self.swap_cols(t, best.1);
                    continue;
                }
                let offender = (t + 1..self.rows).find(|&i| {
                    (t + 1..self.cols).any(|j| self.a[i][j] % pivot != 0)
                });
                match offender {
                    Some(i) => self.add_row(t, i, 1),
                    None => break,
                }
            }
            if self.a[t][t] < 0 {
                self.negate_row(t);
            }
        }
    }
}

/// Reduce `matrix` (given as rows) to Smith normal form.
pub fn smith_normal_form(matrix: &[Vec<i128>]) -> SmithForm {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    let identity = |n: usize| -> Vec<Vec<i128>> {
        (0..n)
            .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
            .collect()
    };
    let mut r = Reducer {
        a: matrix.to_vec(),
        left: identity(rows),
        left_inv: identity(rows),
        rows,
        cols,
    };
    r.reduce();
    let diagonal = (0..rows)
        .map(|i| if i < cols { r.a[i][i] } else { 0 })
        .collect();
    SmithForm {
        diagonal,
        left: r.left,
        left_inv: r.left_inv,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mul(a: &[Vec<i128>], b: &[Vec<i128>]) -> Vec<Vec<i128>> {
        let n = a.len();
        let m = b[0].len();
        (0..n)
            .map(|i| (0..m).map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum()).collect())
            .collect()
    }

    #[test]
    fn diagonal_divisibility_chain() {
        let m = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let f = smith_normal_form(&m);
        assert_eq!(f.diagonal, vec![2, 6, 12]);
    }

    #[test]
    fn left_inverse_is_inverse() {
        let m = vec![vec![4, 0, 2, 0], vec![0, 2, 0, 0]];
        let f = smith_normal_form(&m);
        let prod = mul(&f.left, &f.left_inv);
        assert_eq!(prod, vec![vec![1, 0], vec![0, 1]]);
        // C4 x C2 modulo <(2,0)> is C2 x C2
        assert_eq!(f.diagonal, vec![2, 2]);
    }

    #[test]
    fn zero_matrix() {
        let f = smith_normal_form(&[vec![0, 0], vec![0, 0]]);
        assert_eq!(f.diagonal, vec![0, 0]);
    }
}
