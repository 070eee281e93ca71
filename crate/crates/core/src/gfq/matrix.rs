use super::field::{Elem, FieldTable};
use crate::error::{Error, Result};

/// Dense matrix over a finite field, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatrixK {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl MatrixK {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[Vec<Elem>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            rows: rows.len(),
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

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, f: &FieldTable, other: &MatrixK) -> Result<MatrixK> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = MatrixK::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = f.add(out[(i, j)], f.mul(a, other[(k, j)]));
                }
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form (zero rows kept at the bottom) and rank.
    pub fn rref(&self, f: &FieldTable) -> (MatrixK, usize) {
        let mut rows = self.to_rows();
        let rank = rref_rows(f, &mut rows);
        let data = rows.into_iter().flatten().collect();
        (
            MatrixK {
                rows: self.rows,
                cols: self.cols,
                data,
            },
            rank,
        )
    }

    pub fn rank(&self, f: &FieldTable) -> usize {
        self.rref(f).1
    }

    pub fn determinant(&self, f: &FieldTable) -> Result<Elem> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.to_rows();
        let mut det: Elem = 1;
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| a[r][c] != 0) else {
                return Ok(0);
            };
            if p != c {
                a.swap(p, c);
                det = f.neg(det);
            }
            det = f.mul(det, a[c][c]);
            let inv = f.inv(a[c][c]);
            for r in c + 1..n {
                let factor = f.mul(a[r][c], inv);
                if factor != 0 {
                    for k in c..n {
                        let v = f.mul(factor, a[c][k]);
                        a[r][k] = f.sub(a[r][k], v);
                    }
                }
            }
        }
        Ok(det)
    }
}

impl std::ops::Index<(usize, usize)> for MatrixK {
    type Output = Elem;
    fn index(&self, (i, j): (usize, usize)) -> &Elem {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for MatrixK {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Elem {
        &mut self.data[i * self.cols + j]
    }
}

/// In-place reduced row echelon form on a list of equal-length rows; zero rows
/// end up at the bottom. Returns the rank.
pub fn rref_rows(f: &FieldTable, rows: &mut [Vec<Elem>]) -> usize {
    let Some(cols) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = f.inv(rows[rank][c]);
        if inv != 1 {
            for x in rows[rank][c..].iter_mut() {
                *x = f.mul(*x, inv);
            }
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank {
                continue;
            }
            let factor = row[c];
            if factor != 0 {
                for (x, &y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                    *x = f.sub(*x, f.mul(factor, y));
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Basis of `{x : A x = 0}` where `A` is given by its rows, each of length `cols`.
pub fn null_space(f: &FieldTable, cols: usize, rows: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let mut a = rows.to_vec();
    let rank = rref_rows(f, &mut a);
    a.truncate(rank);
    let pivots: Vec<usize> = a
        .iter()
        .map(|r| r.iter().position(|&x| x != 0).unwrap())
        .collect();
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0; cols];
        v[free] = 1;
        for (r, &p) in a.iter().zip(&pivots) {
            v[p] = f.neg(r[free]);
        }
        basis.push(v);
    }
    basis
}

/// Coefficients `c` with `sum c_i basis_i = target`, if the target lies in the span.
pub fn solve_in_span(f: &FieldTable, basis: &[Vec<Elem>], target: &[Elem]) -> Option<Vec<Elem>> {
    let k = basis.len();
    let m = target.len();
    // augmented system: columns = basis vectors, rows = coordinates
    let mut rows: Vec<Vec<Elem>> = (0..m)
        .map(|i| {
            let mut r: Vec<Elem> = basis.iter().map(|b| b[i]).collect();
            r.push(target[i]);
            r
        })
        .collect();
    let rank = rref_rows(f, &mut rows);
    let mut coeffs = vec![0; k];
    for r in rows.iter().take(rank) {
        let p = r.iter().position(|&x| x != 0).unwrap();
        if p == k {
            return None;
        }
        coeffs[p] = r[k];
    }
    // pivots only in basis columns with free variables at zero
    Some(coeffs)
}

pub fn dot(f: &FieldTable, u: &[Elem], v: &[Elem]) -> Elem {
    u.iter()
        .zip(v)
        .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
}

/// `u + c v`
pub fn axpy(f: &FieldTable, u: &mut [Elem], c: Elem, v: &[Elem]) {
    if c == 0 {
        return;
    }
    for (x, &y) in u.iter_mut().zip(v) {
        *x = f.add(*x, f.mul(c, y));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FieldTable {
        FieldTable::new(2).unwrap()
    }

    #[test]
    fn rref_identity_and_zero() {
        let f = f2();
        let id = MatrixK::identity(3);
        assert_eq!(id.rref(&f), (id.clone(), 3));
        let z = MatrixK::zeros(3, 3);
        assert_eq!(z.rref(&f), (z.clone(), 0));
    }

    #[test]
    fn rref_all_ones_over_f2() {
        let f = f2();
        let m = MatrixK::from_rows(2, &[vec![1, 1], vec![1, 1]]).unwrap();
        let (r, rank) = m.rref(&f);
        assert_eq!(rank, 1);
        assert_eq!(r.row(0), &[1, 1]);
        assert_eq!(r.row(1), &[0, 0]);
    }

    #[test]
    fn rref_is_idempotent_on_f3_sample() {
        let f = FieldTable::new(3).unwrap();
        let m = MatrixK::from_rows(4, &[vec![2, 1, 0, 1], vec![1, 2, 2, 0], vec![0, 0, 1, 1]])
            .unwrap();
        let (r, rank) = m.rref(&f);
        assert_eq!(r.rref(&f), (r.clone(), rank));
    }

    #[test]
    fn null_space_is_annihilated() {
        let f = FieldTable::new(3).unwrap();
        let rows = vec![vec![1, 2, 0, 1], vec![0, 1, 1, 2]];
        let ns = null_space(&f, 4, &rows);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &rows {
                assert_eq!(dot(&f, r, v), 0);
            }
        }
    }

    #[test]
    fn solve_recovers_coefficients() {
        let f = FieldTable::new(5).unwrap();
        let basis = vec![vec![1, 0, 2], vec![0, 1, 3]];
        let target = vec![3, 4, (6 + 12) % 5];
        let c = solve_in_span(&f, &basis, &target).unwrap();
        assert_eq!(c, vec![3, 4]);
        assert!(solve_in_span(&f, &basis, &[0, 0, 1]).is_none());
    }

    #[test]
    fn determinant_matches_rank() {
        let f = FieldTable::new(7).unwrap();
        let m = MatrixK::from_rows(2, &[vec![1, 2], vec![3, 4]]).unwrap();
        // 4 - 6 = -2 = 5 mod 7
        assert_eq!(m.determinant(&f).unwrap(), 5);
        let s = MatrixK::from_rows(2, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(s.determinant(&f).unwrap(), 0);
    }
}
