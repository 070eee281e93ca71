use super::field::{Elem, FieldTable};
use super::matrix::{axpy, null_space, MatrixK};
use super::subspace::{enumerate_subspaces, Flag, Subspace};
use crate::error::{Error, Result};

/// Non-degenerate alternating form on `k^{2n}`, stored by its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramForm {
    matrix: MatrixK,
}

impl GramForm {
    /// Validates that `matrix` is invertible, skew and alternating.
    ///
    /// In characteristic 2 skew-symmetry does not force a zero diagonal, so
    /// `v^T J v = 0` is checked on the standard basis separately.
    pub fn new(f: &FieldTable, matrix: MatrixK) -> Result<Self> {
        let d = matrix.rows();
        if matrix.cols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: matrix.cols(),
            });
        }
        if !d.is_multiple_of(2) {
            return Err(Error::DomainError("alternating form needs even dimension".into()));
        }
        for i in 0..d {
            if matrix[(i, i)] != 0 {
                return Err(Error::DomainError("form is not alternating".into()));
            }
            for j in 0..d {
                if matrix[(i, j)] != f.neg(matrix[(j, i)]) {
                    return Err(Error::DomainError("form is not skew".into()));
                }
            }
        }
        if matrix.determinant(f)? == 0 {
            return Err(Error::DomainError("form is degenerate".into()));
        }
        Ok(Self { matrix })
    }

    /// The block form `[[0, I_n], [-I_n, 0]]` on `k^{2n}`.
    pub fn standard(f: &FieldTable, n: usize) -> Self {
        let mut m = MatrixK::zeros(2 * n, 2 * n);
        for i in 0..n {
            m[(i, n + i)] = 1;
            m[(n + i, i)] = f.neg(1);
        }
        Self { matrix: m }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &MatrixK {
        &self.matrix
    }

    pub fn pair(&self, f: &FieldTable, u: &[Elem], v: &[Elem]) -> Elem {
        let d = self.dim();
        let mut acc = 0;
        for i in 0..d {
            if u[i] == 0 {
                continue;
            }
            for j in 0..d {
                let m = self.matrix[(i, j)];
                if m != 0 && v[j] != 0 {
                    acc = f.add(acc, f.mul(u[i], f.mul(m, v[j])));
                }
            }
        }
        acc
    }

    fn check(&self, u: &Subspace) -> Result<()> {
        if u.ambient_dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: u.ambient_dim(),
            });
        }
        Ok(())
    }

    pub fn is_totally_isotropic(&self, f: &FieldTable, u: &Subspace) -> Result<bool> {
        self.check(u)?;
        let b = u.basis();
        Ok(b.iter()
            .enumerate()
            .all(|(i, x)| b[i + 1..].iter().all(|y| self.pair(f, x, y) == 0)))
    }

    /// `{v : <u, v> = 0 for all u in U}`.
    pub fn orthogonal_complement(&self, f: &FieldTable, u: &Subspace) -> Result<Subspace> {
        self.check(u)?;
        let d = self.dim();
        let rows: Vec<Vec<Elem>> = u
            .basis()
            .iter()
            .map(|x| {
                (0..d)
                    .map(|j| {
                        (0..d).fold(0, |acc, i| f.add(acc, f.mul(x[i], self.matrix[(i, j)])))
                    })
                    .collect()
            })
            .collect();
        Subspace::span(f, d, &null_space(f, d, &rows))
    }
}

/// Every flag `S_1 ⊊ .. ⊊ S_n` of totally isotropic subspaces with `dim S_i = i`
/// (`2n` the dimension of the form).
pub fn enumerate_isotropic_flags(f: &FieldTable, form: &GramForm) -> Result<Vec<Flag>> {
    let d = form.dim();
    let n = d / 2;
    let mut levels: Vec<Vec<Subspace>> = Vec::with_capacity(n);
    for dim in 1..=n {
        let mut layer = Vec::new();
        for s in enumerate_subspaces(f, d, dim) {
            if form.is_totally_isotropic(f, &s)? {
                layer.push(s);
            }
        }
        levels.push(layer);
    }
    let mut out = Vec::new();
    let mut stack: Vec<Subspace> = Vec::with_capacity(n);
    fn rec(
        f: &FieldTable,
        d: usize,
        levels: &[Vec<Subspace>],
        stack: &mut Vec<Subspace>,
        out: &mut Vec<Flag>,
    ) -> Result<()> {
        if stack.len() == levels.len() {
            out.push(Flag::new(f, d, stack.clone())?);
            return Ok(());
        }
        for s in &levels[stack.len()] {
            if stack.last().is_none_or(|prev| prev.is_subspace_of(f, s)) {
                stack.push(s.clone());
                rec(f, d, levels, stack, out)?;
                stack.pop();
            }
        }
        Ok(())
    }
    if n > 0 {
        rec(f, d, &levels, &mut stack, &mut out)?;
    }
    Ok(out)
}

/// Symplectic basis `u_1..u_n, w_1..w_n` (with `<u_i, w_j> = delta_ij` and the
/// other pairings zero) for the alternating form with Gram matrix `gram`.
///
/// Returns the basis vectors as rows, ordered `u_1..u_n, w_1..w_n`, or `None`
/// if the form is degenerate.
pub fn symplectic_basis(f: &FieldTable, gram: &MatrixK) -> Option<Vec<Vec<Elem>>> {
    let d = gram.rows();
    if !d.is_multiple_of(2) {
        return None;
    }
    let pair = |u: &[Elem], v: &[Elem]| -> Elem {
        let mut acc = 0;
        for i in 0..d {
            for j in 0..d {
                acc = f.add(acc, f.mul(u[i], f.mul(gram[(i, j)], v[j])));
            }
        }
        acc
    };
    let mut remaining: Vec<Vec<Elem>> = Subspace::full(d).basis().to_vec();
    let mut us = Vec::new();
    let mut ws = Vec::new();
    while let Some(u) = remaining.pop() {
        if u.iter().all(|&x| x == 0) {
            continue;
        }
        let Some(pos) = remaining.iter().position(|v| pair(&u, v) != 0) else {
            return None;
        };
        let mut w = remaining.swap_remove(pos);
        let c = f.inv(pair(&u, &w));
        w.iter_mut().for_each(|x| *x = f.mul(*x, c));
        // project the rest onto the complement of span(u, w)
        for v in remaining.iter_mut() {
            let a = pair(v, &w);
            let b = pair(&u, v);
            // v - <v,w> u - <u,v> w is orthogonal to both u and w
            axpy(f, v, f.neg(a), &u);
            axpy(f, v, f.neg(b), &w);
        }
        us.push(u);
        ws.push(w);
    }
    let mut out = us;
    out.extend(ws);
    Some(out)
}
