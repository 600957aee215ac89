//! Dense exact linear algebra over the rationals.
//!
//! Matrices here are small (a few hundred columns) but very sparse, so row
//! operations only touch the nonzero entries of the pivot row.

use std::fmt;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Builds a matrix from rows of equal length `cols`.
    pub fn from_rows(cols: usize, rows: impl IntoIterator<Item = Vec<Rational>>) -> Result<Self> {
        let mut data = Vec::new();
        let mut count = 0;
        for row in rows {
            if row.len() != cols {
                return Err(Error::LengthMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            data.extend(row);
            count += 1;
        }
        Ok(RatMatrix {
            rows: count,
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> impl Iterator<Item = &[Rational]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = RatMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    /// `self` on top of `other`.
    pub fn stack(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                got: other.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(RatMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Matrix–vector product `self · v`.
    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok(self
            .row_vecs()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rational;

    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for row in self.row_vecs() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Reduced row-echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: RatMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Gauss–Jordan elimination. The pivot in each column is the first nonzero
/// entry at or below the current row.
pub fn rref(m: &RatMatrix) -> Rref {
    let mut a = m.clone();
    let cols = a.cols;
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == a.rows {
            break;
        }
        let Some(p) = (row..a.rows).find(|&r| !a[(r, col)].is_zero()) else {
            continue;
        };
        a.swap_rows(row, p);

        let inv = Rational::one() / &a[(row, col)];
        let support: Vec<usize> = (col..cols).filter(|&c| !a[(row, c)].is_zero()).collect();
        for &c in &support {
            a[(row, c)] *= &inv;
        }
        for r in 0..a.rows {
            if r == row || a[(r, col)].is_zero() {
                continue;
            }
            let factor = a[(r, col)].clone();
            for &c in &support {
                let delta = &factor * &a[(row, c)];
                a[(r, c)] -= delta;
            }
        }
        pivots.push(col);
        row += 1;
    }
    Rref {
        matrix: a,
        rank: row,
        pivots,
    }
}

pub fn rank(m: &RatMatrix) -> usize {
    rref(m).rank
}

/// Kernel basis, one vector per row, ordered by free column. The vector for
/// free column `f` has a 1 at `f` and zeros at every other free column.
pub fn nullspace(m: &RatMatrix) -> RatMatrix {
    let Rref {
        matrix: r, pivots, ..
    } = rref(m);
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..m.cols).filter(|&c| !is_pivot[c]).collect();
    let mut out = RatMatrix::zeros(free.len(), m.cols);
    for (k, &f) in free.iter().enumerate() {
        out[(k, f)] = Rational::one();
        for (prow, &pc) in pivots.iter().enumerate() {
            let v = &r[(prow, f)];
            if !v.is_zero() {
                out[(k, pc)] = -v.clone();
            }
        }
    }
    out
}

/// True iff `a` and `b` have the same row space.
pub fn rowspace_equal(a: &RatMatrix, b: &RatMatrix) -> Result<bool> {
    let stacked = a.stack(b)?;
    let ra = rank(a);
    Ok(ra == rank(b) && ra == rank(&stacked))
}

/// True iff `v` is a combination of the rows of `a`.
pub fn in_rowspace(v: &[Rational], a: &RatMatrix) -> Result<bool> {
    let row = RatMatrix::from_rows(a.cols, [v.to_vec()])?;
    Ok(rank(a) == rank(&a.stack(&row)?))
}

/// Solves `coeffs · a = v` for a row vector of coefficients, if possible.
pub fn express_in_rows(v: &[Rational], a: &RatMatrix) -> Result<Option<Vec<Rational>>> {
    if v.len() != a.cols {
        return Err(Error::LengthMismatch {
            expected: a.cols,
            got: v.len(),
        });
    }
    // Augmented system aᵀ · coeffs = v.
    let t = a.transpose();
    let mut aug = RatMatrix::zeros(t.rows, t.cols + 1);
    for r in 0..t.rows {
        for c in 0..t.cols {
            aug[(r, c)] = t[(r, c)].clone();
        }
        aug[(r, t.cols)] = v[r].clone();
    }
    let red = rref(&aug);
    if red.pivots.last() == Some(&t.cols) {
        return Ok(None);
    }
    let mut coeffs = vec![Rational::zero(); a.rows];
    for (prow, &pc) in red.pivots.iter().enumerate() {
        coeffs[pc] = red.matrix[(prow, t.cols)].clone();
    }
    Ok(Some(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn mat(rows: &[&[i64]]) -> RatMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        RatMatrix::from_rows(
            cols,
            rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()),
        )
        .unwrap()
    }

    #[test]
    fn rref_identity() {
        let id = RatMatrix::identity(2);
        let r = rref(&id);
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivots, vec![0, 1]);
    }

    #[test]
    fn rref_proportional_rows() {
        let r = rref(&mat(&[&[1, 2], &[2, 4]]));
        assert_eq!(r.matrix, mat(&[&[1, 2], &[0, 0]]));
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn rref_with_fractions_and_swaps() {
        let m = mat(&[&[0, 2, 4], &[3, 0, 3], &[3, 2, 7]]);
        let r = rref(&m);
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivots, vec![0, 1]);
        assert_eq!(r.matrix, mat(&[&[1, 0, 1], &[0, 1, 2], &[0, 0, 0]]));
        let m = RatMatrix::from_rows(2, [vec![ratio(2, 3), ratio(1, 5)]]).unwrap();
        assert_eq!(rref(&m).matrix.row(0), &[int(1), ratio(3, 10)]);
    }

    #[test]
    fn nullspace_basics() {
        assert_eq!(nullspace(&RatMatrix::identity(3)).rows(), 0);
        let z = nullspace(&RatMatrix::zeros(3, 3));
        assert_eq!(z, RatMatrix::identity(3));
        let m = mat(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = nullspace(&m);
        assert_eq!(k, mat(&[&[-2, 1, 0], &[-3, 0, 1]]));
        for row in k.row_vecs() {
            assert!(m.mul_vec(row).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn rowspace_queries() {
        let a = mat(&[&[1, 0]]);
        let b = mat(&[&[0, 1]]);
        assert!(rowspace_equal(&a, &a).unwrap());
        assert!(!rowspace_equal(&a, &b).unwrap());
        assert!(rowspace_equal(&mat(&[&[1, 1], &[1, -1]]), &RatMatrix::identity(2)).unwrap());
        assert!(rowspace_equal(&a, &RatMatrix::identity(3)).is_err());

        assert!(in_rowspace(&[int(0), int(0)], &b).unwrap());
        assert!(!in_rowspace(&[int(1), int(0)], &b).unwrap());
        assert!(in_rowspace(&[int(1)], &b).is_err());
    }

    #[test]
    fn express_in_rows_solves() {
        let a = mat(&[&[1, 1, 0], &[0, 1, 1]]);
        let v = [int(2), int(5), int(3)];
        assert_eq!(express_in_rows(&v, &a).unwrap(), Some(vec![int(2), int(3)]));
        assert_eq!(
            express_in_rows(&[int(1), int(0), int(0)], &a).unwrap(),
            None
        );
    }
}
