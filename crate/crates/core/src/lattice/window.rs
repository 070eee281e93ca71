use super::poly::Poly;
use super::rep::{lattice_from_columns, LatticeRep, TruncRing};
use crate::error::{Error, Result};
use crate::gfq::{Elem, FieldTable, Subspace};

/// The lattices between `t^hi O^n` and `t^lo O^n`, identified with
/// `t`-stable subspaces of `t^lo O^n / t^hi O^n = k^{n(hi - lo)}`.
///
/// Coordinate `(d - lo) * n + j` carries the coefficient of `t^d e_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    n: usize,
    lo: i64,
    hi: i64,
}

impl Window {
    pub fn new(n: usize, lo: i64, hi: i64) -> Result<Self> {
        if hi < lo {
            return Err(Error::DomainError(format!("empty window [{lo}, {hi})")));
        }
        Ok(Self { n, lo, hi })
    }

    /// Smallest window holding every lattice in `ls` (all of the same rank).
    pub fn covering(ls: &[&LatticeRep]) -> Self {
        let n = ls[0].rank();
        let lo = ls.iter().map(|l| l.shift()).min().unwrap();
        let hi = ls
            .iter()
            .map(|l| l.shift() + l.top_exponent() as i64)
            .max()
            .unwrap();
        Self { n, lo, hi }
    }

    pub fn widened(self, below: i64, above: i64) -> Self {
        Self {
            n: self.n,
            lo: self.lo - below,
            hi: self.hi + above,
        }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn dim(&self) -> usize {
        self.n * (self.hi - self.lo) as usize
    }

    fn coord(&self, d: i64, j: usize) -> usize {
        (d - self.lo) as usize * self.n + j
    }

    pub fn holds(&self, l: &LatticeRep) -> bool {
        l.rank() == self.n && l.shift() >= self.lo && l.shift() + l.top_exponent() as i64 <= self.hi
    }

    /// `L / t^hi O^n` as a subspace.
    pub fn subspace(&self, f: &FieldTable, l: &LatticeRep) -> Result<Subspace> {
        if l.rank() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: l.rank(),
            });
        }
        if !self.holds(l) {
            return Err(Error::NotInWindow);
        }
        let s = l.shift();
        let mut vecs = Vec::new();
        for m in 0..(self.hi - s) {
            for col in l.columns() {
                let mut v = vec![0; self.dim()];
                for (r, p) in col.iter().enumerate() {
                    for (i, &c) in p.iter().enumerate() {
                        let d = s + m + i as i64;
                        if d >= self.hi {
                            break;
                        }
                        if c != 0 {
                            v[self.coord(d, r)] = c;
                        }
                    }
                }
                vecs.push(v);
            }
        }
        Subspace::span(f, self.dim(), &vecs)
    }

    /// The lattice whose image is the `t`-stable subspace `s`.
    pub fn lattice(&self, ring: &TruncRing, s: &Subspace) -> Result<LatticeRep> {
        self.lattice_of_vectors(ring, s.basis())
    }

    /// The lattice `span_O(vectors) + t^hi O^n`.
    pub fn lattice_of_vectors(&self, ring: &TruncRing, vectors: &[Vec<Elem>]) -> Result<LatticeRep> {
        let width = (self.hi - self.lo) as usize;
        let mut cols: Vec<Vec<Poly>> = vectors
            .iter()
            .map(|v| {
                (0..self.n)
                    .map(|j| (0..width).map(|i| v[i * self.n + j]).collect())
                    .collect()
            })
            .collect();
        for j in 0..self.n {
            cols.push(
                (0..self.n)
                    .map(|r| {
                        let mut p = vec![0; width + 1];
                        if r == j {
                            p[width] = 1;
                        }
                        p
                    })
                    .collect(),
            );
        }
        lattice_from_columns(ring, self.n, &cols, self.lo)
    }

    /// Multiplication by `t`.
    pub fn times_t(&self, v: &[Elem]) -> Vec<Elem> {
        let mut out = vec![0; v.len()];
        if v.len() > self.n {
            let shifted = v.len() - self.n;
            out[self.n..].copy_from_slice(&v[..shifted]);
        }
        out
    }
}
