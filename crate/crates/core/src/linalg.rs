//! Exact Gaussian elimination over the rationals.

use num_traits::Zero;

use crate::scalar::Rational;

/// Dense matrix in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<Rational>>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![vec![Rational::zero(); cols]; rows],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i][j] = v;
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        rref(&mut m, None).len()
    }
}

/// Row-reduces `m` in place (and `rhs` alongside); returns pivot columns.
pub fn rref(m: &mut Matrix, mut rhs: Option<&mut Vec<Rational>>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(p) = (row..m.rows).find(|&r| !m.data[r][col].is_zero()) else {
            continue;
        };
        m.data.swap(row, p);
        if let Some(b) = rhs.as_deref_mut() {
            b.swap(row, p);
        }
        let inv = m.data[row][col].recip();
        for v in m.data[row].iter_mut() {
            *v *= &inv;
        }
        if let Some(b) = rhs.as_deref_mut() {
            b[row] *= &inv;
        }
        let pivot_row = m.data[row].clone();
        let pivot_rhs = rhs.as_deref().map(|b| b[row].clone());
        for r in 0..m.rows {
            if r == row || m.data[r][col].is_zero() {
                continue;
            }
            let f = m.data[r][col].clone();
            for (v, pv) in m.data[r].iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
            if let (Some(b), Some(pb)) = (rhs.as_deref_mut(), pivot_rhs.as_ref()) {
                let delta = &f * pb;
                b[r] -= delta;
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Result of solving `A x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub x: Vec<Rational>,
    pub rank: usize,
    /// Number of free columns (dimension of the affine solution space).
    pub nullity: usize,
}

/// Solves `A x = b` with all free variables set to zero. Columns are
/// eliminated in the order given by `order` (identity when `None`).
/// Returns `None` when the system is inconsistent.
pub fn solve(a: &Matrix, b: &[Rational], order: Option<&[usize]>) -> Option<Solution> {
    let perm: Vec<usize> = order.map_or_else(|| (0..a.cols).collect(), <[usize]>::to_vec);
    let mut m = Matrix::zeros(a.rows, a.cols);
    for i in 0..a.rows {
        for (j, &src) in perm.iter().enumerate() {
            m.data[i][j] = a.data[i][src].clone();
        }
    }
    let mut rhs = b.to_vec();
    let pivots = rref(&mut m, Some(&mut rhs));
    if rhs[pivots.len()..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); a.cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[perm[c]] = rhs[r].clone();
    }
    Some(Solution {
        x,
        rank: pivots.len(),
        nullity: a.cols - pivots.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn mat(rows: &[&[i64]]) -> Matrix {
        Matrix {
            rows: rows.len(),
            cols: rows[0].len(),
            data: rows.iter().map(|r| r.iter().map(|&v| rat(v, 1)).collect()).collect(),
        }
    }

    #[test]
    fn solves_and_pins_free_variables() {
        // b − c = ½, a = 0, d = 0 in unknowns (a, b, c, d)
        let a = mat(&[&[0, 1, -1, 0], &[1, 0, 0, 0], &[0, 0, 0, 1]]);
        let s = solve(&a, &[rat(1, 2), rat(0, 1), rat(0, 1)], None).unwrap();
        assert_eq!(s.x, vec![rat(0, 1), rat(1, 2), rat(0, 1), rat(0, 1)]);
        assert_eq!((s.rank, s.nullity), (3, 1));
        let s = solve(&a, &[rat(1, 2), rat(0, 1), rat(0, 1)], Some(&[2, 1, 0, 3])).unwrap();
        assert_eq!(s.x, vec![rat(0, 1), rat(0, 1), rat(-1, 2), rat(0, 1)]);
    }

    #[test]
    fn detects_inconsistency() {
        let a = mat(&[&[1, 1], &[2, 2]]);
        assert!(solve(&a, &[rat(1, 1), rat(3, 1)], None).is_none());
        assert_eq!(a.rank(), 1);
    }
}
