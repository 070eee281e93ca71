use super::rep::{HomothetyClass, LatticeRep, RelPosition, TruncRing};
use super::submodule::{map_invariant_subspaces, NilpotentOp};
use super::window::Window;
use crate::error::{Error, Result};
use crate::gfq::{rref_rows, solve_in_span, Elem, Subspace};

/// Default cap on the number of lattices an enumeration may produce.
pub const DEFAULT_ENUMERATION_CAP: usize = 50_000_000;

fn same_rank(l: &LatticeRep, m: &LatticeRep) -> Result<()> {
    if l.rank() != m.rank() {
        return Err(Error::DimensionMismatch {
            expected: l.rank(),
            found: m.rank(),
        });
    }
    Ok(())
}

fn pair(ring: &TruncRing, l: &LatticeRep, m: &LatticeRep) -> Result<(Window, Subspace, Subspace)> {
    same_rank(l, m)?;
    let w = Window::covering(&[l, m]);
    let f = ring.field();
    Ok((w, w.subspace(f, l)?, w.subspace(f, m)?))
}

pub fn lattice_sum(ring: &TruncRing, l: &LatticeRep, m: &LatticeRep) -> Result<LatticeRep> {
    let (w, a, b) = pair(ring, l, m)?;
    w.lattice(ring, &a.sum(ring.field(), &b)?)
}

pub fn lattice_intersect(ring: &TruncRing, l: &LatticeRep, m: &LatticeRep) -> Result<LatticeRep> {
    let (w, a, b) = pair(ring, l, m)?;
    w.lattice(ring, &a.intersection(ring.field(), &b)?)
}

/// `small ⊆ big`.
pub fn is_sublattice(ring: &TruncRing, small: &LatticeRep, big: &LatticeRep) -> Result<bool> {
    let (_, a, b) = pair(ring, small, big)?;
    Ok(a.is_subspace_of(ring.field(), &b))
}

/// `e` with `[sup : sub] = q^e`.
pub fn index(ring: &TruncRing, sub: &LatticeRep, sup: &LatticeRep) -> Result<u32> {
    let (_, a, b) = pair(ring, sub, sup)?;
    if !a.is_subspace_of(ring.field(), &b) {
        return Err(Error::NotContained);
    }
    Ok((b.dim() - a.dim()) as u32)
}

/// Exponents `e_1 <= .. <= e_n` with `L = ⊕ O b_i` and `M = ⊕ t^{e_i} O b_i`.
///
/// Read off from `h(j) = dim L / (L ∩ t^j M)`, whose increments count the
/// exponents `>= -j`.
pub fn relative_position(ring: &TruncRing, l: &LatticeRep, m: &LatticeRep) -> Result<RelPosition> {
    same_rank(l, m)?;
    let f = ring.field();
    let n = l.rank();
    let e_lo = m.shift() - l.shift() - l.top_exponent() as i64;
    let e_hi = m.shift() + m.top_exponent() as i64 - l.shift();
    let (j_min, j_max) = (-e_hi - 1, 1 - e_lo);
    let w = Window::covering(&[l, &m.scaled(j_min), &m.scaled(j_max)]);
    let ls = w.subspace(f, l)?;
    let mut h = Vec::new();
    for j in j_min..=j_max {
        let mj = w.subspace(f, &m.scaled(j))?;
        h.push(ls.dim() - ls.intersection(f, &mj)?.dim());
    }
    let h_at = |j: i64| h[(j - j_min) as usize];
    // #{e_i >= v} = h(1 - v) - h(-v)
    let at_least = |v: i64| h_at(1 - v) - h_at(-v);
    let mut exponents = Vec::with_capacity(n);
    for v in e_lo..=e_hi {
        let k = at_least(v) - at_least(v + 1);
        exponents.extend(std::iter::repeat_n(v, k));
    }
    debug_assert_eq!(exponents.len(), n);
    Ok(RelPosition { exponents })
}

/// `upper / lower` as a module over `k[t]`, realized inside a window.
pub struct Quotient<'r> {
    ring: &'r TruncRing,
    window: Window,
    lower: Subspace,
    basis: Vec<Vec<Elem>>,
    op: NilpotentOp,
}

impl<'r> Quotient<'r> {
    pub fn new(ring: &'r TruncRing, lower: &LatticeRep, upper: &LatticeRep) -> Result<Self> {
        same_rank(lower, upper)?;
        let f = ring.field();
        let window = Window::covering(&[lower, upper]);
        let lo_sub = window.subspace(f, lower)?;
        let up_sub = window.subspace(f, upper)?;
        if !lo_sub.is_subspace_of(f, &up_sub) {
            return Err(Error::NotContained);
        }
        let mut basis: Vec<Vec<Elem>> = up_sub.basis().iter().map(|v| lo_sub.reduce(f, v)).collect();
        let r = rref_rows(f, &mut basis);
        basis.truncate(r);
        let mut q = Quotient {
            ring,
            window,
            lower: lo_sub,
            basis,
            op: NilpotentOp::new(0, Vec::new()),
        };
        let images = q
            .basis
            .iter()
            .map(|b| q.coords(&window.times_t(b)))
            .collect();
        q.op = NilpotentOp::new(q.basis.len(), images);
        Ok(q)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn op(&self) -> &NilpotentOp {
        &self.op
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// Coordinates of a window vector of `upper` modulo `lower`.
    pub fn coords(&self, v: &[Elem]) -> Vec<Elem> {
        let f = self.ring.field();
        let w = self.lower.reduce(f, v);
        self.basis
            .iter()
            .map(|b| w[b.iter().position(|&x| x != 0).unwrap()])
            .collect()
    }

    /// Lattice `lower + span(vectors)` for vectors given in quotient coordinates.
    pub fn lift(&self, vectors: &[Vec<Elem>]) -> Result<LatticeRep> {
        let f = self.ring.field();
        let mut gens: Vec<Vec<Elem>> = self.lower.basis().to_vec();
        for c in vectors {
            let mut v = vec![0; self.window.dim()];
            for (x, b) in c.iter().zip(&self.basis) {
                crate::gfq::axpy(f, &mut v, *x, b);
            }
            gens.push(v);
        }
        self.window.lattice_of_vectors(self.ring, &gens)
    }

    /// Quotient coordinates of the image of `mid` (which must lie between the bounds).
    pub fn subspace_of(&self, mid: &LatticeRep) -> Result<Subspace> {
        let f = self.ring.field();
        if !self.window.holds(mid) {
            return Err(Error::NotInWindow);
        }
        let s = self.window.subspace(f, mid)?;
        if !self.lower.is_subspace_of(f, &s) {
            return Err(Error::NotInWindow);
        }
        let coords: Vec<Vec<Elem>> = s.basis().iter().map(|v| self.coords(v)).collect();
        let sub = Subspace::span(f, self.dim(), &coords)?;
        // mid ⊆ upper: every vector must be recovered from its coordinates
        if sub.dim() + self.lower.dim() != s.dim() {
            return Err(Error::NotInWindow);
        }
        let check = self.lift(sub.basis())?;
        if &check != mid {
            return Err(Error::NotInWindow);
        }
        Ok(sub)
    }

    /// Every lattice between the bounds whose image `N` passes
    /// `filter(dim N ∩ ker t, dim N - dim N ∩ ker t)`, mapped through `map`.
    pub fn map_intermediate<T, F, M>(&self, cap: usize, filter: F, map: M) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(usize, usize) -> bool + Sync,
        M: Fn(LatticeRep) -> Option<T> + Sync,
    {
        self.map_intermediate_with_image(cap, filter, |_, l| map(l))
    }

    /// As [`Quotient::map_intermediate`], also passing a basis of the image in
    /// quotient coordinates.
    pub fn map_intermediate_with_image<T, F, M>(&self, cap: usize, filter: F, map: M) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(usize, usize) -> bool + Sync,
        M: Fn(&[Vec<Elem>], LatticeRep) -> Option<T> + Sync,
    {
        let f = self.ring.field();
        let results = map_invariant_subspaces(f, &self.op, cap, filter, |b| match self.lift(b) {
            Ok(l) => map(b, l).map(Ok),
            Err(e) => Some(Err(e)),
        })?;
        results.into_iter().collect()
    }
}

/// Every lattice `lower ⊆ X ⊆ upper`, sorted.
pub fn enumerate_intermediate_lattices(
    ring: &TruncRing,
    lower: &LatticeRep,
    upper: &LatticeRep,
    cap: usize,
) -> Result<Vec<LatticeRep>> {
    let q = Quotient::new(ring, lower, upper)?;
    let mut out = q.map_intermediate(cap, |_, _| true, Some)?;
    out.sort();
    Ok(out)
}

/// Image of `mid` in `L / tL`, in coordinates of the Hermite columns of `L`.
pub fn reduction_mod_pi(ring: &TruncRing, l: &LatticeRep, mid: &LatticeRep) -> Result<Subspace> {
    same_rank(l, mid)?;
    let f = ring.field();
    let n = l.rank();
    let pl = l.scaled(1);
    let w = Window::covering(&[l, &pl, mid]);
    if !w.holds(mid) {
        return Err(Error::NotInWindow);
    }
    let lower = w.subspace(f, &pl)?;
    let upper = w.subspace(f, l)?;
    let s = w.subspace(f, mid)?;
    if !lower.is_subspace_of(f, &s) || !s.is_subspace_of(f, &upper) {
        return Err(Error::NotInWindow);
    }
    let cols = column_vectors(&w, l);
    let mut basis = cols.clone();
    basis.extend(lower.basis().iter().cloned());
    let coords: Vec<Vec<Elem>> = s
        .basis()
        .iter()
        .map(|v| solve_in_span(f, &basis, v).expect("mid lies in L")[..n].to_vec())
        .collect();
    Subspace::span(f, n, &coords)
}

/// `tL + (span of the Hermite columns of L with coefficients from s)`.
pub fn lift_from_quotient(ring: &TruncRing, l: &LatticeRep, s: &Subspace) -> Result<LatticeRep> {
    if s.ambient_dim() != l.rank() {
        return Err(Error::DimensionMismatch {
            expected: l.rank(),
            found: s.ambient_dim(),
        });
    }
    let f = ring.field();
    let pl = l.scaled(1);
    let w = Window::covering(&[l, &pl]);
    let cols = column_vectors(&w, l);
    let mut gens = w.subspace(f, &pl)?.basis().to_vec();
    for c in s.basis() {
        let mut v = vec![0; w.dim()];
        for (x, b) in c.iter().zip(&cols) {
            crate::gfq::axpy(f, &mut v, *x, b);
        }
        gens.push(v);
    }
    w.lattice_of_vectors(ring, &gens)
}

/// Window vectors of the Hermite columns (with the shift) of `l`.
fn column_vectors(w: &Window, l: &LatticeRep) -> Vec<Vec<Elem>> {
    let n = l.rank();
    l.columns()
        .iter()
        .map(|col| {
            let mut v = vec![0; w.dim()];
            for (r, p) in col.iter().enumerate() {
                for (i, &c) in p.iter().enumerate() {
                    let d = l.shift() + i as i64;
                    if c != 0 && d < w.hi() {
                        v[(d - w.lo()) as usize * n + r] = c;
                    }
                }
            }
            v
        })
        .collect()
}

/// The unique `L'` in `t'` with `tL ⊊ L' ⊊ L`.
pub fn adjacent_representative(
    ring: &TruncRing,
    l: &LatticeRep,
    t: &HomothetyClass,
) -> Result<LatticeRep> {
    let m = t.rep();
    same_rank(l, m)?;
    let pl = l.scaled(1);
    // t^k M ⊆ L forces k >= shift(L) - shift(M) - top(M); tL ⊆ t^k M forces k <= shift(L) + 1
    let lo = l.shift() - m.shift() - m.top_exponent() as i64 - 1;
    let hi = l.shift() + l.top_exponent() as i64 + 1 - m.shift();
    let mut found = None;
    for k in lo..=hi {
        let cand = m.scaled(k);
        if &cand == l || cand == pl {
            continue;
        }
        if is_sublattice(ring, &cand, l)? && is_sublattice(ring, &pl, &cand)? {
            debug_assert!(found.is_none(), "two scalings between tL and L");
            found = Some(cand);
        }
    }
    found.ok_or(Error::NotAdjacent)
}

/// Whether the classes are distinct and joined by an edge of the building.
pub fn are_adjacent(ring: &TruncRing, l: &LatticeRep, m: &LatticeRep) -> Result<bool> {
    if l.class() == m.class() {
        return Ok(false);
    }
    match adjacent_representative(ring, l, &m.class()) {
        Ok(_) => Ok(true),
        Err(Error::NotAdjacent) => Ok(false),
        Err(e) => Err(e),
    }
}
