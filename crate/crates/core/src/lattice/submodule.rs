//! Subspaces of `k^d` stable under a nilpotent operator `T`.
//!
//! A stable `N` is determined by `A = N ∩ ker T`, its image `N̄` in
//! `k^d / ker T` (stable under the induced operator) and a section
//! `N̄ -> ker T / A`. The quotient is handled recursively.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gfq::{axpy, enumerate_subspaces, null_space, Elem, FieldTable, Subspace};

/// Nilpotent operator on `k^d` given by the images of the standard basis vectors.
#[derive(Clone, Debug)]
pub struct NilpotentOp {
    dim: usize,
    images: Vec<Vec<Elem>>,
}

impl NilpotentOp {
    pub fn new(dim: usize, images: Vec<Vec<Elem>>) -> Self {
        debug_assert_eq!(images.len(), dim);
        Self { dim, images }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn apply(&self, f: &FieldTable, v: &[Elem]) -> Vec<Elem> {
        let mut out = vec![0; self.dim];
        for (c, img) in v.iter().zip(&self.images) {
            axpy(f, &mut out, *c, img);
        }
        out
    }

    fn is_zero(&self) -> bool {
        self.images.iter().all(|v| v.iter().all(|&x| x == 0))
    }

    pub fn kernel(&self, f: &FieldTable) -> Subspace {
        // v T = 0 where the rows of T are the images
        let cols: Vec<Vec<Elem>> = (0..self.dim)
            .map(|j| self.images.iter().map(|r| r[j]).collect())
            .collect();
        Subspace::span(f, self.dim, &null_space(f, self.dim, &cols)).unwrap()
    }
}

/// `k^d = ker T ⊕ (coordinates off the pivots of ker T)`.
struct Split {
    kernel: Subspace,
    comp: Vec<usize>,
    bar: NilpotentOp,
}

impl Split {
    fn new(f: &FieldTable, op: &NilpotentOp) -> Self {
        let kernel = op.kernel(f);
        let pivots = kernel.pivots();
        let comp: Vec<usize> = (0..op.dim).filter(|c| !pivots.contains(c)).collect();
        let mut split = Split {
            kernel,
            comp,
            bar: NilpotentOp::new(0, Vec::new()),
        };
        let images = (0..split.comp.len())
            .map(|i| {
                let mut e = vec![0; split.comp.len()];
                e[i] = 1;
                split.project(f, &op.apply(f, &split.lift(op.dim, &e)))
            })
            .collect();
        split.bar = NilpotentOp::new(split.comp.len(), images);
        split
    }

    fn project(&self, f: &FieldTable, v: &[Elem]) -> Vec<Elem> {
        let w = self.kernel.reduce(f, v);
        self.comp.iter().map(|&c| w[c]).collect()
    }

    fn lift(&self, dim: usize, c: &[Elem]) -> Vec<Elem> {
        let mut v = vec![0; dim];
        for (&i, &x) in self.comp.iter().zip(c) {
            v[i] = x;
        }
        v
    }

    /// Vector of `k^d` with kernel coordinates `c`.
    fn from_kernel_coords(&self, f: &FieldTable, dim: usize, c: &[Elem]) -> Vec<Elem> {
        let mut v = vec![0; dim];
        for (x, b) in c.iter().zip(self.kernel.basis()) {
            axpy(f, &mut v, *x, b);
        }
        v
    }

    /// Calls `emit` with a basis of every stable `N` with image `xs` and
    /// `N ∩ ker T = a` (given in kernel coordinates). Stops early when `emit`
    /// returns false; returns false in that case.
    fn expand(
        &self,
        f: &FieldTable,
        op: &NilpotentOp,
        xs: &[Vec<Elem>],
        a: &Subspace,
        emit: &mut dyn FnMut(&[Vec<Elem>]) -> bool,
    ) -> bool {
        let d = op.dim;
        let lifts: Vec<Vec<Elem>> = xs.iter().map(|x| self.lift(d, x)).collect();
        let images: Vec<Vec<Elem>> = lifts.iter().map(|x| op.apply(f, x)).collect();
        let a_vecs: Vec<Vec<Elem>> = a
            .basis()
            .iter()
            .map(|c| self.from_kernel_coords(f, d, c))
            .collect();
        let bar_zero = self.bar.is_zero();
        if bar_zero {
            // T N̄ = 0 puts T x in ker T, so stability only needs T x in A
            let a_sub = Subspace::span(f, d, &a_vecs).unwrap();
            if !images.iter().all(|y| a_sub.contains(f, y)) {
                return true;
            }
        }
        let a_pivots = a.pivots();
        let free: Vec<Vec<Elem>> = (0..self.kernel.dim())
            .filter(|c| !a_pivots.contains(c))
            .map(|c| self.kernel.basis()[c].clone())
            .collect();
        let slots = xs.len() * free.len();
        let q = f.order() as Elem;
        let mut digits = vec![0 as Elem; slots];
        loop {
            let mut basis = a_vecs.clone();
            for (i, x) in lifts.iter().enumerate() {
                let mut y = x.clone();
                for (j, r) in free.iter().enumerate() {
                    axpy(f, &mut y, digits[i * free.len() + j], r);
                }
                basis.push(y);
            }
            let stable = bar_zero || {
                let n_sub = Subspace::span(f, d, &basis).unwrap();
                images.iter().all(|y| n_sub.contains(f, y))
            };
            if stable && !emit(&basis) {
                return false;
            }
            // next section
            let mut k = 0;
            while k < slots {
                digits[k] += 1;
                if digits[k] < q {
                    break;
                }
                digits[k] = 0;
                k += 1;
            }
            if k == slots {
                return true;
            }
        }
    }
}

/// Bases of all `T`-stable subspaces of `k^d`.
pub fn all_invariant_subspaces(f: &FieldTable, op: &NilpotentOp) -> Vec<Vec<Vec<Elem>>> {
    let mut out = Vec::new();
    if op.is_zero() {
        for dim in 0..=op.dim {
            out.extend(
                enumerate_subspaces(f, op.dim, dim)
                    .into_iter()
                    .map(|s| s.basis().to_vec()),
            );
        }
        return out;
    }
    let split = Split::new(f, op);
    let bars = all_invariant_subspaces(f, &split.bar);
    let kdim = split.kernel.dim();
    let a_all: Vec<Subspace> = (0..=kdim)
        .flat_map(|a| enumerate_subspaces(f, kdim, a))
        .collect();
    for xs in &bars {
        for a in &a_all {
            split.expand(f, op, xs, a, &mut |b| {
                out.push(b.to_vec());
                true
            });
        }
    }
    out
}

/// Maps every `T`-stable subspace `N` with `filter(dim N ∩ ker T, dim N - dim N ∩ ker T)`
/// through `map`, keeping the `Some` values. Work is split across the rayon
/// pool by the image of `N` in `k^d / ker T`; result order is unspecified.
///
/// Fails with `EnumerationTooLarge` once more than `cap` subspaces pass the filter.
pub fn map_invariant_subspaces<T, F, M>(
    f: &FieldTable,
    op: &NilpotentOp,
    cap: usize,
    filter: F,
    map: M,
) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, usize) -> bool + Sync,
    M: Fn(&[Vec<Elem>]) -> Option<T> + Sync,
{
    let seen = AtomicUsize::new(0);
    let over = AtomicBool::new(false);
    let tick = || {
        if seen.fetch_add(1, Ordering::Relaxed) >= cap {
            over.store(true, Ordering::Relaxed);
            false
        } else {
            true
        }
    };
    if op.is_zero() {
        let mut out = Vec::new();
        for dim in (0..=op.dim).filter(|&d| filter(d, 0)) {
            for s in enumerate_subspaces(f, op.dim, dim) {
                if !tick() {
                    return Err(Error::EnumerationTooLarge { cap });
                }
                out.extend(map(s.basis()));
            }
        }
        return Ok(out);
    }
    let split = Split::new(f, op);
    let kdim = split.kernel.dim();
    let bars: Vec<Vec<Vec<Elem>>> = all_invariant_subspaces(f, &split.bar)
        .into_iter()
        .filter(|xs| (0..=kdim).any(|a| filter(a, xs.len())))
        .collect();
    let a_by_dim: Vec<Vec<Subspace>> = (0..=kdim)
        .map(|a| {
            if bars.iter().any(|xs| filter(a, xs.len())) {
                enumerate_subspaces(f, kdim, a)
            } else {
                Vec::new()
            }
        })
        .collect();
    let chunks: Vec<Vec<T>> = bars
        .par_iter()
        .map(|xs| {
            let mut local = Vec::new();
            for (a, spaces) in a_by_dim.iter().enumerate() {
                if !filter(a, xs.len()) {
                    continue;
                }
                for s in spaces {
                    let go_on = split.expand(f, op, xs, s, &mut |b| {
                        if over.load(Ordering::Relaxed) || !tick() {
                            return false;
                        }
                        local.extend(map(b));
                        true
                    });
                    if !go_on {
                        return local;
                    }
                }
            }
            local
        })
        .collect();
    if over.load(Ordering::Relaxed) {
        return Err(Error::EnumerationTooLarge { cap });
    }
    Ok(chunks.into_iter().flatten().collect())
}
