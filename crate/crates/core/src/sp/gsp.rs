//! Similitudes `g^T J g = nu(g) J` and their action on apartments and chambers.

use serde::Serialize;

use super::coords::{coords_is_special, standard_j, ApartmentVertex, SymplecticBasis};
use crate::error::{Error, Result};
use crate::gfq::{Elem, FieldTable, GramForm};
use crate::lattice::{apply_matrix, index, is_primitive, LatticeRep, LaurentMatrix, TruncRing};

/// An element of `GSp_n(K)` with similitude factor `nu = c t^m`, `c ∈ F_q^×`.
///
/// Restricting `nu` to monomials loses nothing for the action on lattices,
/// since a unit of `O` times `J` only rescales a basis by a unit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GspElement {
    matrix: LaurentMatrix,
    nu_unit: Elem,
    nu_ord: i64,
}

impl GspElement {
    /// Checks `g^T J g = c t^m J`.
    pub fn new(f: &FieldTable, matrix: LaurentMatrix, nu_unit: Elem, nu_ord: i64) -> Result<Self> {
        if matrix.rows() != matrix.cols() || !matrix.rows().is_multiple_of(2) || matrix.rows() == 0 {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                found: matrix.cols(),
            });
        }
        if nu_unit == 0 {
            return Err(Error::DomainError("similitude factor must be non-zero".into()));
        }
        let j = standard_j(f, matrix.rows() / 2);
        let lhs = matrix.transpose().mul(f, &j)?.mul(f, &matrix)?;
        let rhs = j.times_constant(f, nu_unit).scaled(nu_ord);
        if !lhs.same_value(&rhs) {
            return Err(Error::DomainError("matrix is not a similitude with the given factor".into()));
        }
        Ok(Self {
            matrix,
            nu_unit,
            nu_ord,
        })
    }

    /// An element of `Sp_n(K)`.
    pub fn symplectic(f: &FieldTable, matrix: LaurentMatrix) -> Result<Self> {
        Self::new(f, matrix, 1, 0)
    }

    /// `diag(c t^m I_n, I_n)`, with `nu = c t^m`.
    pub fn similitude(n: usize, c: Elem, m: i64) -> Result<Self> {
        if c == 0 || n == 0 {
            return Err(Error::DomainError("need c != 0 and n > 0".into()));
        }
        let mut entries = vec![(c, m); n];
        entries.extend(std::iter::repeat_n((1, 0), n));
        Ok(Self {
            matrix: LaurentMatrix::monomial_diagonal(&entries),
            nu_unit: c,
            nu_ord: m,
        })
    }

    /// `diag(t^{x_1}, .., t^{x_n}, t^{m - x_1}, .., t^{m - x_n})`, with `nu = t^m`.
    pub fn diagonal(x: &[i64], m: i64) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::DomainError("need n > 0".into()));
        }
        let mut exps = x.to_vec();
        exps.extend(x.iter().map(|xi| m - xi));
        Ok(Self {
            matrix: LaurentMatrix::diagonal(&exps),
            nu_unit: 1,
            nu_ord: m,
        })
    }

    /// The element carrying the special vertex `from` to the special vertex
    /// `to` (both in the standard basis): `x = a' - a`, `y = b' - b` and
    /// `m = mu' - mu` give `diag(t^x, t^y)` with `x_i + y_i = m`.
    pub fn transporter(from: &ApartmentVertex, to: &ApartmentVertex) -> Result<Self> {
        from.check_basis(to)?;
        if from.basis != SymplecticBasis::standard(from.n()) {
            return Err(Error::DomainError("transporter needs standard coordinates".into()));
        }
        if !coords_is_special(from) || !coords_is_special(to) {
            return Err(Error::NotSpecial);
        }
        let m = to.sums()[0] - from.sums()[0];
        let x: Vec<i64> = to.a.iter().zip(&from.a).map(|(p, q)| p - q).collect();
        Self::diagonal(&x, m)
    }

    pub fn half_rank(&self) -> usize {
        self.matrix.rows() / 2
    }

    pub fn matrix(&self) -> &LaurentMatrix {
        &self.matrix
    }

    pub fn nu_unit(&self) -> Elem {
        self.nu_unit
    }

    /// `ord nu(g)`.
    pub fn nu_ord(&self) -> i64 {
        self.nu_ord
    }

    /// `self * other`.
    pub fn compose(&self, f: &FieldTable, other: &Self) -> Result<Self> {
        Ok(Self {
            matrix: self.matrix.mul(f, &other.matrix)?,
            nu_unit: f.mul(self.nu_unit, other.nu_unit),
            nu_ord: self.nu_ord + other.nu_ord,
        })
    }

    /// `ord det g`, which is `n ord nu(g)`.
    pub fn ord_det(&self, f: &FieldTable) -> Result<i64> {
        self.matrix.ord_det(f)
    }

    /// `B_g = {nu^{-1} g u_1, .., nu^{-1} g u_n, g w_1, .., g w_n}`.
    pub fn twisted_basis(&self, f: &FieldTable, basis: &SymplecticBasis) -> Result<SymplecticBasis> {
        let n = self.half_rank();
        let mut entries = vec![(f.inv(self.nu_unit), -self.nu_ord); n];
        entries.extend(std::iter::repeat_n((1, 0), n));
        let m = self
            .matrix
            .mul(f, basis.matrix())?
            .mul(f, &LaurentMatrix::monomial_diagonal(&entries))?;
        Ok(SymplecticBasis::new_unchecked(m))
    }

    /// `gL`.
    pub fn act_on_lattice(&self, ring: &TruncRing, l: &LatticeRep) -> Result<LatticeRep> {
        apply_matrix(ring, &self.matrix, l)
    }
}

/// `g (a; b)_B = (a + m; b)_{B_g}` with `m = ord nu(g)`.
pub fn gsp_act(f: &FieldTable, g: &GspElement, v: &ApartmentVertex) -> Result<ApartmentVertex> {
    if g.half_rank() != v.n() {
        return Err(Error::DimensionMismatch {
            expected: g.half_rank(),
            found: v.n(),
        });
    }
    let basis = g.twisted_basis(f, &v.basis)?;
    let a = v.a.iter().map(|x| x + g.nu_ord).collect();
    ApartmentVertex::in_basis(basis, a, v.b.clone())
}

/// Image of a chamber under an element with odd `ord nu(g) = 2r + 1`.
///
/// `chain` lists the lattices `L_0, L_n, L_{n+1}, .., L_{2n-1}` of a chamber
/// `tL_0 ⊊ L_1 ⊊ .. ⊊ L_{2n-1} ⊊ L_0` of the `SL_{2n}` building that contains
/// a chamber of the `Sp_n` building with primitive `L_0`. Returns
/// `L_n' = t^{-(r+1)} g L_n` followed by `L_j' = t^{-r} g L_j` for
/// `j = n + 1, .., 2n - 1, 0`: the chamber `tL_n' ⊊ L_{n+1}' ⊊ .. ⊊ L_0' ⊊ L_n'`,
/// checked to have primitive `L_n'`, isotropic members and index-`q` steps.
pub fn odd_similitude_chamber(
    ring: &TruncRing,
    g: &GspElement,
    chain: &[LatticeRep],
) -> Result<Vec<LatticeRep>> {
    let n = g.half_rank();
    if chain.len() != n + 1 {
        return Err(Error::DimensionMismatch {
            expected: n + 1,
            found: chain.len(),
        });
    }
    if g.nu_ord.rem_euclid(2) != 1 {
        return Err(Error::DomainError("similitude factor must have odd valuation".into()));
    }
    let r = (g.nu_ord - 1).div_euclid(2);
    let f = ring.field();
    let j = GramForm::standard(f, n);
    let mut out = Vec::with_capacity(n + 1);
    out.push(g.act_on_lattice(ring, &chain[1])?.scaled(-(r + 1)));
    for l in chain[2..].iter().chain(std::iter::once(&chain[0])) {
        out.push(g.act_on_lattice(ring, l)?.scaled(-r));
    }
    if !is_primitive(f, &out[0], &j)? {
        return Err(Error::DomainError("image of L_n is not primitive".into()));
    }
    for l in &out[1..] {
        if !super::local::is_isotropic_lattice(f, l, &j)? {
            return Err(Error::DomainError("image lattice is not isotropic".into()));
        }
    }
    let mut steps = vec![out[0].scaled(1)];
    steps.extend(out[1..].iter().cloned());
    for w in steps.windows(2) {
        if index(ring, &w[0], &w[1])? == 0 {
            return Err(Error::DomainError("image chain is not strict".into()));
        }
    }
    if index(ring, &out[n], &out[0])? != n as u32 {
        return Err(Error::DomainError("image chain has wrong indices".into()));
    }
    Ok(out)
}
