use super::poly::{mul_full, valuation, Poly};
use super::rep::{elementary_divisors, lattice_from_columns, LatticeRep, TruncRing};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gfq::{Elem, FieldTable, GramForm, MatrixK};

/// Matrix over `F_q((t))` stored as `t^val` times a matrix of polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LaurentMatrix {
    rows: usize,
    cols: usize,
    val: i64,
    data: Vec<Poly>,
}

impl LaurentMatrix {
    pub fn new(rows: usize, cols: usize, val: i64, data: Vec<Poly>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            val,
            data,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_constant(&MatrixK::identity(n))
    }

    pub fn from_constant(m: &MatrixK) -> Self {
        let data = (0..m.rows())
            .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
            .map(|(i, j)| vec![m[(i, j)]])
            .collect();
        Self {
            rows: m.rows(),
            cols: m.cols(),
            val: 0,
            data,
        }
    }

    /// `diag(t^{e_1}, .., t^{e_n})`.
    pub fn diagonal(exps: &[i64]) -> Self {
        let entries: Vec<(Elem, i64)> = exps.iter().map(|&e| (1, e)).collect();
        Self::monomial_diagonal(&entries)
    }

    /// `diag(c_1 t^{e_1}, .., c_n t^{e_n})`.
    pub fn monomial_diagonal(entries: &[(Elem, i64)]) -> Self {
        let n = entries.len();
        let base = entries.iter().map(|e| e.1).min().unwrap_or(0);
        let mut data = vec![Vec::new(); n * n];
        for (i, &(c, e)) in entries.iter().enumerate() {
            let mut p = vec![0; (e - base) as usize + 1];
            p[(e - base) as usize] = c;
            data[i * n + i] = p;
        }
        Self {
            rows: n,
            cols: n,
            val: base,
            data,
        }
    }

    /// Coefficient of `t^e` in entry `(i, j)`.
    pub fn coefficient(&self, i: usize, j: usize, e: i64) -> Elem {
        let k = e - self.val;
        if k < 0 {
            return 0;
        }
        self.entry(i, j).get(k as usize).copied().unwrap_or(0)
    }

    /// Equality of the represented matrices, whatever the stored valuations.
    pub fn same_value(&self, other: &Self) -> bool {
        if self.rows != other.rows || self.cols != other.cols {
            return false;
        }
        let lo = self.val.min(other.val);
        (0..self.rows).all(|i| {
            (0..self.cols).all(|j| {
                let hi = (self.val + self.entry(i, j).len() as i64)
                    .max(other.val + other.entry(i, j).len() as i64);
                (lo..hi).all(|e| self.coefficient(i, j, e) == other.coefficient(i, j, e))
            })
        })
    }

    /// `c * self` for a constant `c`.
    pub fn times_constant(&self, f: &FieldTable, c: Elem) -> Self {
        Self {
            data: self
                .data
                .iter()
                .map(|p| p.iter().map(|&x| f.mul(c, x)).collect())
                .collect(),
            ..self.clone()
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn val(&self) -> i64 {
        self.val
    }

    /// Polynomial part of entry `(i, j)`; the entry itself is `t^val` times this.
    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.data[i * self.cols + j]
    }

    pub fn scaled(&self, k: i64) -> Self {
        Self {
            val: self.val + k,
            ..self.clone()
        }
    }

    pub fn transpose(&self) -> Self {
        let data = (0..self.cols)
            .flat_map(|j| (0..self.rows).map(move |i| (i, j)))
            .map(|(i, j)| self.entry(i, j).clone())
            .collect();
        Self {
            rows: self.cols,
            cols: self.rows,
            val: self.val,
            data,
        }
    }

    pub fn mul(&self, f: &FieldTable, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: Poly = Vec::new();
                for k in 0..self.cols {
                    add_assign(f, &mut acc, &mul_full(f, self.entry(i, k), other.entry(k, j)));
                }
                data.push(acc);
            }
        }
        Ok(Self {
            rows: self.rows,
            cols: other.cols,
            val: self.val + other.val,
            data,
        })
    }

    /// `ord(det g)`; fails with `SingularMatrix` for singular `g`.
    pub fn ord_det(&self, f: &FieldTable) -> Result<i64> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let cols: Vec<Vec<Poly>> = (0..n)
            .map(|j| (0..n).map(|i| self.entry(i, j).clone()).collect())
            .collect();
        let maxlen = self.data.iter().map(Vec::len).max().unwrap_or(1).max(1);
        let divs = elementary_divisors(f, n, &cols, n * maxlen + 1);
        let mut total = 0i64;
        for d in divs {
            total += d.ok_or(Error::SingularMatrix)? as i64;
        }
        Ok(total + n as i64 * self.val)
    }

    /// Smallest valuation of an entry, `None` for the zero matrix.
    pub fn min_valuation(&self) -> Option<i64> {
        self.data
            .iter()
            .filter_map(|p| valuation(p))
            .min()
            .map(|v| v as i64 + self.val)
    }
}

fn add_assign(f: &FieldTable, acc: &mut Poly, p: &[u8]) {
    if acc.len() < p.len() {
        acc.resize(p.len(), 0);
    }
    for (a, &b) in acc.iter_mut().zip(p) {
        *a = f.add(*a, b);
    }
}

/// `gL`.
pub fn apply_matrix(ring: &TruncRing, g: &LaurentMatrix, l: &LatticeRep) -> Result<LatticeRep> {
    let n = l.rank();
    if g.rows != n || g.cols != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: g.rows,
        });
    }
    let f = ring.field();
    let cols: Vec<Vec<Poly>> = l
        .columns()
        .iter()
        .map(|col| {
            (0..n)
                .map(|r| {
                    let mut acc = Vec::new();
                    for (k, p) in col.iter().enumerate() {
                        add_assign(f, &mut acc, &mul_full(f, g.entry(r, k), p));
                    }
                    acc
                })
                .collect()
        })
        .collect();
    lattice_from_columns(ring, n, &cols, l.shift() + g.val)
}

/// Matrix of a lattice: its Hermite columns with the shift.
pub fn basis_matrix(l: &LatticeRep) -> LaurentMatrix {
    let n = l.rank();
    let data = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| l.columns()[j][i].clone())
        .collect();
    LaurentMatrix {
        rows: n,
        cols: n,
        val: l.shift(),
        data,
    }
}

/// `H^T J H` for the basis matrix `H` of `l`.
pub fn gram_matrix(f: &FieldTable, l: &LatticeRep, j: &GramForm) -> Result<LaurentMatrix> {
    if j.dim() != l.rank() {
        return Err(Error::DimensionMismatch {
            expected: j.dim(),
            found: l.rank(),
        });
    }
    let h = basis_matrix(l);
    h.transpose()
        .mul(f, &LaurentMatrix::from_constant(j.matrix()))?
        .mul(f, &h)
}

/// `Some(mu)` when `<L, L> ⊆ t^mu O` and `t^{-mu} <.,.>` is non-degenerate on `L / tL`.
pub fn modularity(f: &FieldTable, l: &LatticeRep, j: &GramForm) -> Result<Option<i64>> {
    let g = gram_matrix(f, l, j)?;
    let Some(mu) = g.min_valuation() else {
        return Ok(None);
    };
    let deg = (mu - g.val) as usize;
    let n = g.rows;
    let mut red = MatrixK::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            red[(r, c)] = g.entry(r, c).get(deg).copied().unwrap_or(0);
        }
    }
    Ok((red.determinant(f)? != 0).then_some(mu))
}

/// `<L, L> ⊆ O` with non-degenerate reduction on `L / tL`.
pub fn is_primitive(f: &FieldTable, l: &LatticeRep, j: &GramForm) -> Result<bool> {
    Ok(modularity(f, l, j)? == Some(0))
}

/// `ord(det g) mod modulus` for `g O^n = L`.
pub fn vertex_type(l: &LatticeRep, modulus: i64) -> i64 {
    l.ord_det().rem_euclid(modulus)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_diagonal_action() {
        let ring = TruncRing::with_default_precision(2).unwrap();
        let l0 = LatticeRep::standard(&ring, 3);
        assert_eq!(apply_matrix(&ring, &LaurentMatrix::identity(3), &l0).unwrap(), l0);
        let g = LaurentMatrix::diagonal(&[1, 0, 0]);
        assert_eq!(
            apply_matrix(&ring, &g, &l0).unwrap(),
            LatticeRep::diagonal(&ring, &[1, 0, 0]).unwrap()
        );
        assert_eq!(g.ord_det(ring.field()).unwrap(), 1);
    }

    #[test]
    fn primitivity_of_fundamental_lattices() {
        let ring = TruncRing::with_default_precision(3).unwrap();
        let f = ring.field();
        let j = GramForm::standard(f, 2);
        let l0 = LatticeRep::standard(&ring, 4);
        assert!(is_primitive(f, &l0, &j).unwrap());
        let ln = LatticeRep::diagonal(&ring, &[0, 0, 1, 1]).unwrap();
        assert!(!is_primitive(f, &ln, &j).unwrap());
        assert_eq!(modularity(f, &ln, &j).unwrap(), Some(1));
        assert!(!is_primitive(f, &l0.scaled(1), &j).unwrap());
        assert_eq!(modularity(f, &l0.scaled(1), &j).unwrap(), Some(2));
        let l1 = LatticeRep::diagonal(&ring, &[0, 1, 1, 1]).unwrap();
        assert_eq!(modularity(f, &l1, &j).unwrap(), None);
    }

    #[test]
    fn types_of_fundamental_lattices() {
        let ring = TruncRing::with_default_precision(2).unwrap();
        let n = 3;
        for i in 0..=n {
            // (0^i, 1^{n-i}; 1^n)
            let mut exps = vec![0i64; i];
            exps.extend(std::iter::repeat_n(1, 2 * n - i));
            let l = LatticeRep::diagonal(&ring, &exps).unwrap();
            let expected = if i == 0 { 0 } else { (2 * n - i) as i64 };
            // i = 0 gives t O^{2n}, the class of L_0
            assert_eq!(vertex_type(&l, 2 * n as i64), expected % (2 * n as i64));
        }
    }
}
