//! Apartment coordinates `(a_1, .., a_n; b_1, .., b_n)_B`: the lattice
//! `sum O t^{a_i} u_i + sum O t^{b_i} w_i` for a symplectic basis `B`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gfq::{FieldTable, GramForm};
use crate::lattice::{apply_matrix, LatticeRep, LaurentMatrix, TruncRing};

/// Symplectic basis `u_1..u_n, w_1..w_n` of `K^{2n}`, stored as the matrix
/// with these columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymplecticBasis {
    matrix: LaurentMatrix,
}

impl SymplecticBasis {
    pub fn standard(n: usize) -> Self {
        Self {
            matrix: LaurentMatrix::identity(2 * n),
        }
    }

    /// Checks `B^T J B = J`.
    pub fn new(f: &FieldTable, matrix: LaurentMatrix) -> Result<Self> {
        if matrix.rows() != matrix.cols() || !matrix.rows().is_multiple_of(2) {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                found: matrix.cols(),
            });
        }
        let j = standard_j(f, matrix.rows() / 2);
        if !matrix.transpose().mul(f, &j)?.mul(f, &matrix)?.same_value(&j) {
            return Err(Error::DomainError("basis is not symplectic".into()));
        }
        Ok(Self { matrix })
    }

    pub(crate) fn new_unchecked(matrix: LaurentMatrix) -> Self {
        Self { matrix }
    }

    pub fn half_rank(&self) -> usize {
        self.matrix.rows() / 2
    }

    pub fn matrix(&self) -> &LaurentMatrix {
        &self.matrix
    }
}

/// `J_n` as a constant Laurent matrix.
pub(crate) fn standard_j(f: &FieldTable, n: usize) -> LaurentMatrix {
    LaurentMatrix::from_constant(GramForm::standard(f, n).matrix())
}

/// The lattice `(a; b)_B`. Two vertices name the same homothety class when
/// the bases agree and the exponents differ by a constant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ApartmentVertex {
    pub basis: SymplecticBasis,
    pub a: Vec<i64>,
    pub b: Vec<i64>,
}

impl ApartmentVertex {
    /// Coordinates in the standard basis.
    pub fn new(a: Vec<i64>, b: Vec<i64>) -> Result<Self> {
        Self::in_basis(SymplecticBasis::standard(a.len()), a, b)
    }

    pub fn in_basis(basis: SymplecticBasis, a: Vec<i64>, b: Vec<i64>) -> Result<Self> {
        let n = basis.half_rank();
        if a.len() != n || b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: if a.len() != n { a.len() } else { b.len() },
            });
        }
        if n == 0 {
            return Err(Error::DomainError("rank must be positive".into()));
        }
        Ok(Self { basis, a, b })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    /// `a_i + b_i`.
    pub fn sums(&self) -> Vec<i64> {
        self.a.iter().zip(&self.b).map(|(x, y)| x + y).collect()
    }

    /// All `2n` exponents, `a` first.
    pub fn exponents(&self) -> Vec<i64> {
        self.a.iter().chain(&self.b).copied().collect()
    }

    pub(crate) fn from_exponents(basis: SymplecticBasis, exps: &[i64]) -> Self {
        let n = exps.len() / 2;
        Self {
            basis,
            a: exps[..n].to_vec(),
            b: exps[n..].to_vec(),
        }
    }

    /// `t^k (a; b)`.
    pub fn scaled(&self, k: i64) -> Self {
        Self {
            basis: self.basis.clone(),
            a: self.a.iter().map(|x| x + k).collect(),
            b: self.b.iter().map(|x| x + k).collect(),
        }
    }

    pub fn same_class(&self, other: &Self) -> bool {
        if self.basis != other.basis || self.n() != other.n() {
            return false;
        }
        let d = other.a[0] - self.a[0];
        self.exponents()
            .iter()
            .zip(other.exponents())
            .all(|(x, y)| y - x == d)
    }

    /// `self ⊆ other`, for vertices in the same basis.
    pub fn is_sublattice_of(&self, other: &Self) -> Result<bool> {
        self.check_basis(other)?;
        Ok(self
            .exponents()
            .iter()
            .zip(other.exponents())
            .all(|(x, y)| *x >= y))
    }

    /// `log_q [other : self]`; fails with `NotContained` unless `self ⊆ other`.
    pub fn index_in(&self, other: &Self) -> Result<u32> {
        if !self.is_sublattice_of(other)? {
            return Err(Error::NotContained);
        }
        Ok(self
            .exponents()
            .iter()
            .zip(other.exponents())
            .map(|(x, y)| (x - y) as u32)
            .sum())
    }

    pub(crate) fn check_basis(&self, other: &Self) -> Result<()> {
        if self.basis != other.basis {
            return Err(Error::NotInCommonApartment);
        }
        Ok(())
    }

    /// The lattice `B diag(t^a, t^b) O^{2n}`.
    pub fn realize(&self, ring: &TruncRing) -> Result<LatticeRep> {
        let diag = LatticeRep::diagonal(ring, &self.exponents())?;
        apply_matrix(ring, self.basis.matrix(), &diag)
    }
}

impl fmt::Display for ApartmentVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "({};{})", join(&self.a), join(&self.b))
    }
}

/// `a_i + b_i = 0` for all `i`.
pub fn coords_is_primitive(v: &ApartmentVertex) -> bool {
    v.sums().iter().all(|&s| s == 0)
}

/// `a_i + b_i` independent of `i`.
pub fn coords_is_special(v: &ApartmentVertex) -> bool {
    let s = v.sums();
    s.iter().all(|&x| x == s[0])
}

/// Type `sum a_i + sum b_i mod 2n` (symplectic bases have unit determinant).
pub fn coords_type(v: &ApartmentVertex) -> i64 {
    let n = v.n() as i64;
    v.exponents().iter().sum::<i64>().rem_euclid(2 * n)
}

/// Whether the class is a vertex of the building of `Sp_n`: some scaling has
/// every `a_i + b_i` in `{1, 2}`, which places it between `tL_0` and `L_0`
/// for a primitive `L_0` of the same apartment.
pub fn coords_in_building(v: &ApartmentVertex) -> bool {
    let s = v.sums();
    let lo = *s.iter().min().unwrap();
    let hi = *s.iter().max().unwrap();
    hi == lo || (hi == lo + 1 && lo.rem_euclid(2) == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{modularity, vertex_type};

    fn fundamental(n: usize, i: usize) -> ApartmentVertex {
        // L_0 = (0; 0), L_i = (0^i, 1^{n-i}; 1^n)
        if i == 0 {
            return ApartmentVertex::new(vec![0; n], vec![0; n]).unwrap();
        }
        let mut a = vec![0; i];
        a.extend(std::iter::repeat_n(1, n - i));
        ApartmentVertex::new(a, vec![1; n]).unwrap()
    }

    #[test]
    fn fundamental_chamber_classification() {
        let n = 3;
        let l0 = fundamental(n, 0);
        assert!(coords_is_primitive(&l0) && coords_is_special(&l0));
        assert_eq!(coords_type(&l0), 0);
        let ln = fundamental(n, n);
        assert!(coords_is_special(&ln) && !coords_is_primitive(&ln));
        assert_eq!(coords_type(&ln), n as i64);
        for i in 1..n {
            let li = fundamental(n, i);
            assert!(!coords_is_special(&li));
            assert!(coords_in_building(&li));
            assert_eq!(coords_type(&li), (2 * n - i) as i64);
        }
    }

    #[test]
    fn realized_lattices_agree() {
        let ring = TruncRing::with_default_precision(3).unwrap();
        let f = ring.field();
        let n = 2;
        let j = GramForm::standard(f, n);
        for i in 0..=n {
            let v = fundamental(n, i);
            let l = v.realize(&ring).unwrap();
            assert_eq!(vertex_type(&l, 2 * n as i64), coords_type(&v));
            let mu = modularity(f, &l, &j).unwrap();
            assert_eq!(mu.is_some(), coords_is_special(&v));
            assert_eq!(mu == Some(0), coords_is_primitive(&v));
        }
    }

    #[test]
    fn class_equality_and_containment() {
        let v = ApartmentVertex::new(vec![0, 1], vec![1, 1]).unwrap();
        assert!(v.same_class(&v.scaled(3)));
        assert!(!v.same_class(&fundamental(2, 0)));
        let l0 = fundamental(2, 0);
        assert_eq!(v.index_in(&l0).unwrap(), 3);
        assert_eq!(l0.index_in(&v).unwrap_err(), Error::NotContained);
    }

    #[test]
    fn building_membership() {
        let inside = ApartmentVertex::new(vec![0, 1], vec![1, 1]).unwrap();
        assert!(coords_in_building(&inside));
        assert!(coords_in_building(&inside.scaled(5)));
        // sums {0, 1}: only reachable as {2j, 2j + 1}
        let outside = ApartmentVertex::new(vec![0, 0], vec![0, 1]).unwrap();
        assert!(!coords_in_building(&outside));
        let far = ApartmentVertex::new(vec![0, 0], vec![0, 2]).unwrap();
        assert!(!coords_in_building(&far));
    }
}
