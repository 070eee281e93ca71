use serde::Serialize;

use super::field::{Elem, FieldTable};
use super::matrix::{axpy, null_space, rref_rows};
use crate::error::{Error, Result};

/// A subspace of `k^m` held by its reduced row echelon basis.
///
/// The basis is canonical, so derived equality and ordering agree with
/// equality of subspaces.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<Elem>>,
}

impl Subspace {
    pub fn zero(m: usize) -> Self {
        Self {
            ambient_dim: m,
            basis: Vec::new(),
        }
    }

    pub fn full(m: usize) -> Self {
        let basis = (0..m)
            .map(|i| {
                let mut v = vec![0; m];
                v[i] = 1;
                v
            })
            .collect();
        Self {
            ambient_dim: m,
            basis,
        }
    }

    /// Span of arbitrary vectors of length `m`.
    pub fn span(f: &FieldTable, m: usize, vectors: &[Vec<Elem>]) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != m) {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: v.len(),
            });
        }
        let mut rows = vectors.to_vec();
        let rank = rref_rows(f, &mut rows);
        rows.truncate(rank);
        Ok(Self {
            ambient_dim: m,
            basis: rows,
        })
    }

    pub(crate) fn from_rref_unchecked(m: usize, basis: Vec<Vec<Elem>>) -> Self {
        Self {
            ambient_dim: m,
            basis,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Elem>] {
        &self.basis
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis
            .iter()
            .map(|r| r.iter().position(|&x| x != 0).unwrap())
            .collect()
    }

    /// Reduces `v` against the echelon basis; the result is zero iff `v` lies in the subspace.
    pub fn reduce(&self, f: &FieldTable, v: &[Elem]) -> Vec<Elem> {
        let mut w = v.to_vec();
        for row in &self.basis {
            let p = row.iter().position(|&x| x != 0).unwrap();
            let c = w[p];
            if c != 0 {
                axpy(f, &mut w, f.neg(c), row);
            }
        }
        w
    }

    pub fn contains(&self, f: &FieldTable, v: &[Elem]) -> bool {
        v.len() == self.ambient_dim && self.reduce(f, v).iter().all(|&x| x == 0)
    }

    pub fn is_subspace_of(&self, f: &FieldTable, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim && self.basis.iter().all(|v| other.contains(f, v))
    }

    pub fn sum(&self, f: &FieldTable, other: &Subspace) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::span(f, self.ambient_dim, &vs)
    }

    /// Annihilator under the standard dot product.
    pub fn annihilator(&self, f: &FieldTable) -> Subspace {
        let ns = null_space(f, self.ambient_dim, &self.basis);
        Subspace::span(f, self.ambient_dim, &ns).unwrap()
    }

    pub fn intersection(&self, f: &FieldTable, other: &Subspace) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        let ann = self.annihilator(f).sum(f, &other.annihilator(f))?;
        Ok(ann.annihilator(f))
    }

    fn check_same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        Ok(())
    }

    /// Every vector of the subspace (there are `q^dim` of them).
    pub fn vectors(&self, f: &FieldTable) -> Vec<Vec<Elem>> {
        let mut out = vec![vec![0; self.ambient_dim]];
        for row in &self.basis {
            let mut next = Vec::with_capacity(out.len() * f.order() as usize);
            for v in &out {
                for c in f.elements() {
                    let mut w = v.clone();
                    axpy(f, &mut w, c, row);
                    next.push(w);
                }
            }
            out = next;
        }
        out
    }
}

/// Number of `d`-dimensional subspaces of `F_q^m`.
pub fn gaussian_binomial(m: i64, d: i64, q: u32) -> Result<u128> {
    if d < 0 || d > m {
        return Err(Error::DomainError(format!(
            "subspace dimension {d} outside 0..={m}"
        )));
    }
    let q = q as u128;
    let pow = |k: i64| -> Result<u128> { q.checked_pow(k as u32).ok_or(Error::Overflow) };
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..d {
        num = num
            .checked_mul(pow(m - i)? - 1)
            .ok_or(Error::Overflow)?;
        den = den.checked_mul(pow(i + 1)? - 1).ok_or(Error::Overflow)?;
    }
    Ok(num / den)
}

/// `[m]_q = (q^m - 1)/(q - 1)`, the number of lines in `F_q^m`.
pub fn q_integer(m: u32, q: u32) -> Result<u128> {
    let qm = (q as u128).checked_pow(m).ok_or(Error::Overflow)?;
    Ok((qm - 1) / (q as u128 - 1))
}

/// Number of complete flags in `F_q^n`: the product of `[m]_q` for `m = 1..=n`.
pub fn complete_flag_count(n: u32, q: u32) -> Result<u128> {
    (1..=n).try_fold(1u128, |acc, m| {
        acc.checked_mul(q_integer(m, q)?).ok_or(Error::Overflow)
    })
}

/// All `d`-dimensional subspaces of `k^m`, sorted by canonical basis.
pub fn enumerate_subspaces(f: &FieldTable, m: usize, d: usize) -> Vec<Subspace> {
    if d > m {
        return Vec::new();
    }
    let q = f.order() as usize;
    let mut out = Vec::new();
    let mut pivots: Vec<usize> = (0..d).collect();
    loop {
        // free entries: row i, columns after its pivot that are not pivots
        let free: Vec<(usize, usize)> = (0..d)
            .flat_map(|i| {
                let piv = pivots.clone();
                (pivots[i] + 1..m)
                    .filter(move |c| !piv.contains(c))
                    .map(move |c| (i, c))
            })
            .collect();
        let total = q.pow(free.len() as u32);
        for mut code in 0..total {
            let mut rows = vec![vec![0 as Elem; m]; d];
            for (i, &p) in pivots.iter().enumerate() {
                rows[i][p] = 1;
            }
            for &(i, c) in &free {
                rows[i][c] = (code % q) as Elem;
                code /= q;
            }
            out.push(Subspace::from_rref_unchecked(m, rows));
        }
        // next pivot combination
        let Some(i) = (0..d).rev().find(|&i| pivots[i] < m - d + i) else {
            break;
        };
        pivots[i] += 1;
        for j in i + 1..d {
            pivots[j] = pivots[j - 1] + 1;
        }
    }
    out.sort();
    out
}

/// Strictly increasing chain of subspaces of a common ambient space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Flag {
    ambient_dim: usize,
    chain: Vec<Subspace>,
}

impl Flag {
    /// Builds a flag of non-trivial proper subspaces, checking strict nesting.
    pub fn new(f: &FieldTable, ambient_dim: usize, chain: Vec<Subspace>) -> Result<Self> {
        for s in &chain {
            if s.ambient_dim() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: s.ambient_dim(),
                });
            }
            if s.dim() == 0 || s.dim() == ambient_dim {
                return Err(Error::DomainError(
                    "flag members must be non-trivial and proper".into(),
                ));
            }
        }
        for w in chain.windows(2) {
            if w[0].dim() >= w[1].dim() || !w[0].is_subspace_of(f, &w[1]) {
                return Err(Error::DomainError("flag is not strictly nested".into()));
            }
        }
        Ok(Self { ambient_dim, chain })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn chain(&self) -> &[Subspace] {
        &self.chain
    }

    pub fn is_complete(&self) -> bool {
        self.chain.len() + 1 == self.ambient_dim
            && self.chain.iter().enumerate().all(|(i, s)| s.dim() == i + 1)
    }
}

/// Every complete flag of `k^m`, by depth-first extension through covering subspaces.
pub fn enumerate_complete_flags(f: &FieldTable, m: usize) -> Vec<Flag> {
    let levels: Vec<Vec<Subspace>> = (0..=m).map(|d| enumerate_subspaces(f, m, d)).collect();
    let mut out = Vec::new();
    let mut stack: Vec<Subspace> = Vec::new();
    fn rec(
        f: &FieldTable,
        m: usize,
        levels: &[Vec<Subspace>],
        stack: &mut Vec<Subspace>,
        out: &mut Vec<Flag>,
    ) {
        let d = stack.len() + 1;
        if d >= m {
            out.push(Flag {
                ambient_dim: m,
                chain: stack.clone(),
            });
            return;
        }
        for s in &levels[d] {
            if stack.last().is_none_or(|prev| prev.is_subspace_of(f, s)) {
                stack.push(s.clone());
                rec(f, m, levels, stack, out);
                stack.pop();
            }
        }
    }
    if m == 0 {
        return out;
    }
    rec(f, m, &levels, &mut stack, &mut out);
    out
}
