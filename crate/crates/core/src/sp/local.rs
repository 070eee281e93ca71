//! Chambers, close vertices and length-one galleries around a type-0 vertex of
//! the building of `Sp_n(F_q((t)))`, inside the building of `SL_{2n}`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gfq::{
    enumerate_isotropic_flags, q_integer, rref_rows, solve_in_span, symplectic_basis, Elem, FieldTable, Flag,
    GramForm, MatrixK, Subspace,
};
use crate::lattice::{
    adjacent_representative, are_adjacent, gram_matrix, index, is_primitive, lattice_intersect,
    lattice_sum, lift_from_quotient, modularity, reduction_mod_pi, HomothetyClass, LatticeRep,
    Quotient, TruncRing,
};
use crate::sl::{count_flag_chains, maximal_cliques, representative_between, CloseComplex, RelationReport};
use crate::spherical::{build_C_building, complex_of_flags, label_index, verify_simplicial_iso, Complex};

/// The form `J_n` for lattices of rank `2n`.
pub(crate) fn form_for_rank(f: &FieldTable, rank: usize) -> Result<GramForm> {
    if rank == 0 || !rank.is_multiple_of(2) {
        return Err(Error::DimensionMismatch {
            expected: rank + rank % 2,
            found: rank,
        });
    }
    Ok(GramForm::standard(f, rank / 2))
}

/// `<L, L> ⊆ tO`.
pub fn is_isotropic_lattice(f: &FieldTable, l: &LatticeRep, j: &GramForm) -> Result<bool> {
    Ok(gram_matrix(f, l, j)?.min_valuation().is_none_or(|v| v >= 1))
}

/// The primitive representative of a type-0 vertex; `NotSpecial` when the
/// class has none.
pub fn primitive_representative(ring: &TruncRing, t: &HomothetyClass) -> Result<LatticeRep> {
    let f = ring.field();
    let rep = t.rep();
    let j = form_for_rank(f, rep.rank())?;
    match modularity(f, rep, &j)? {
        Some(mu) if mu % 2 == 0 => Ok(rep.scaled(-mu / 2)),
        _ => Err(Error::NotSpecial),
    }
}

/// The form induced on `L / tL` for primitive `L`, in the coordinates of the
/// Hermite columns of `L`.
pub fn residual_form(f: &FieldTable, l: &LatticeRep) -> Result<GramForm> {
    let j = form_for_rank(f, l.rank())?;
    let g = gram_matrix(f, l, &j)?;
    if g.min_valuation().is_some_and(|v| v < 0) {
        return Err(Error::NotSpecial);
    }
    let d = l.rank();
    let mut red = MatrixK::zeros(d, d);
    for r in 0..d {
        for c in 0..d {
            red[(r, c)] = g.coefficient(r, c, 0);
        }
    }
    GramForm::new(f, red).map_err(|_| Error::NotSpecial)
}

/// A chamber `tL ⊊ L_1 ⊊ .. ⊊ L_n ⊊ L` with primitive `L`, encoded by the
/// isotropic flag `L_i / tL` of `L / tL`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SpChamber {
    pub base: LatticeRep,
    pub flag: Flag,
}

impl SpChamber {
    /// `L_1, .., L_n`.
    pub fn chain(&self, ring: &TruncRing) -> Result<Vec<LatticeRep>> {
        self.flag
            .chain()
            .iter()
            .map(|s| lift_from_quotient(ring, &self.base, s))
            .collect()
    }
}

/// Chambers through a type-0 vertex, one per maximal isotropic flag of `L / tL`.
pub fn sp_chambers_containing(ring: &TruncRing, t: &HomothetyClass) -> Result<Vec<SpChamber>> {
    let l = primitive_representative(ring, t)?;
    let f = ring.field();
    let form = residual_form(f, &l)?;
    Ok(enumerate_isotropic_flags(f, &form)?
        .into_iter()
        .map(|flag| SpChamber {
            base: l.clone(),
            flag,
        })
        .collect())
}

/// `prod_{m<=n} (q^{2m} - 1)/(q - 1)`; `n = 1` gives `q + 1`.
pub fn sp_r_formula(n: u32, q: u32) -> Result<u128> {
    (1..=n).try_fold(1u128, |acc, m| {
        acc.checked_mul(q_integer(2 * m, q)?).ok_or(Error::Overflow)
    })
}

/// `(q^{2n} - 1)/(q - 1) * q`.
pub fn sp_omega_formula(n: u32, q: u32) -> Result<u128> {
    if n < 2 {
        return Err(Error::DomainError("closeness needs n >= 2".into()));
    }
    q_integer(2 * n, q)?
        .checked_mul(q as u128)
        .ok_or(Error::Overflow)
}

/// Left cosets of `Sp_n(O)` in the double coset of
/// `diag(1, t, .., t, t^2, t, .., t)`: `((q^{2n} - 1) q)/(q - 1)`.
pub fn coset_count_sp(n: u32, q: u32) -> Result<u128> {
    if n < 2 || q < 2 {
        return Err(Error::DomainError("needs n >= 2 and q >= 2".into()));
    }
    let q = q as u128;
    let num = q
        .checked_pow(2 * n)
        .and_then(|x| (x - 1).checked_mul(q))
        .ok_or(Error::Overflow)?;
    Ok(num / (q - 1))
}

/// `q r(n) = r(n - 1) omega(n)` on the closed formulas.
pub fn verify_sp_relation(n: u32, q: u32) -> Result<RelationReport> {
    RelationReport::new(
        n,
        q,
        sp_r_formula(n, q)?,
        sp_r_formula(n - 1, q)?,
        sp_omega_formula(n, q)?,
    )
}

/// Close type-0 vertices given by primitive representatives with
/// `[L + M : L] = q = [L + M : M]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SpClosePair {
    pub l: LatticeRep,
    pub m: LatticeRep,
}

impl SpClosePair {
    pub fn new(ring: &TruncRing, l: LatticeRep, m: LatticeRep) -> Result<Self> {
        let f = ring.field();
        let j = form_for_rank(f, l.rank())?;
        if l.rank() < 4 || l.class() == m.class() {
            return Err(Error::NotClose);
        }
        if !is_primitive(f, &l, &j)? || !is_primitive(f, &m, &j)? {
            return Err(Error::NotSpecial);
        }
        let join = lattice_sum(ring, &l, &m)?;
        if index(ring, &l, &join)? != 1 || index(ring, &m, &join)? != 1 {
            return Err(Error::NotClose);
        }
        Ok(Self { l, m })
    }

    /// Uses the primitive representatives of both classes.
    pub fn from_classes(ring: &TruncRing, t: &HomothetyClass, t2: &HomothetyClass) -> Result<Self> {
        Self::new(
            ring,
            primitive_representative(ring, t)?,
            primitive_representative(ring, t2)?,
        )
    }

    pub fn n(&self) -> usize {
        self.l.rank() / 2
    }

    /// `t(L + M)`.
    pub fn bottom(&self, ring: &TruncRing) -> Result<LatticeRep> {
        Ok(lattice_sum(ring, &self.l, &self.m)?.scaled(1))
    }

    /// `L ∩ M`.
    pub fn top(&self, ring: &TruncRing) -> Result<LatticeRep> {
        lattice_intersect(ring, &self.l, &self.m)
    }

    /// The symplectic space `(L ∩ M) / t(L + M)` seen inside `L / tL`.
    pub fn middle_space(&self, ring: &TruncRing) -> Result<MiddleSpace> {
        MiddleSpace::new(ring, &self.l, &self.bottom(ring)?, &self.top(ring)?)
    }

    /// One chain `L_1 = t(L + M) ⊊ L_2 ⊊ .. ⊊ L_n ⊆ L ∩ M` of isotropic lattices,
    /// completing both `tL ⊊ .. ⊊ L` and `tM ⊊ .. ⊊ M` to chambers. Built from
    /// a Lagrangian flag of the middle space and checked lattice by lattice.
    pub fn interpolating_chain(&self, ring: &TruncRing) -> Result<Vec<LatticeRep>> {
        let f = ring.field();
        let j = form_for_rank(f, self.l.rank())?;
        let n = self.n();
        let mid = self.middle_space(ring)?;
        let mut chain = Vec::with_capacity(n);
        for i in 0..n {
            let s = mid.preimage(f, &mid.symplectic[..i])?;
            chain.push(lift_from_quotient(ring, &self.l, &s)?);
        }
        let bad = || Error::DomainError("interpolating chain failed its checks".into());
        for x in &chain {
            if !is_isotropic_lattice(f, x, &j)? {
                return Err(bad());
            }
        }
        for w in chain.windows(2) {
            if index(ring, &w[0], &w[1])? != 1 {
                return Err(bad());
            }
        }
        let last = &chain[n - 1];
        for base in [&self.l, &self.m] {
            if index(ring, &base.scaled(1), &chain[0])? != 1 || index(ring, last, base)? != n as u32 {
                return Err(bad());
            }
        }
        Ok(chain)
    }
}

/// `H / l` with `H = (L ∩ M)/tL` and `l = t(L + M)/tL`, the radical of `H`,
/// together with a symplectic basis of the induced form.
pub struct MiddleSpace {
    /// Generator of `l` followed by a complement basis of `H`, in `L / tL` coordinates.
    basis: Vec<Vec<Elem>>,
    /// Symplectic basis `u_1..u_{n-1}, w_1..w_{n-1}` in coordinates of the complement.
    symplectic: Vec<Vec<Elem>>,
    ell: Subspace,
    ambient: usize,
}

impl MiddleSpace {
    fn new(ring: &TruncRing, l: &LatticeRep, bottom: &LatticeRep, top: &LatticeRep) -> Result<Self> {
        let f = ring.field();
        let form = residual_form(f, l)?;
        let ell = reduction_mod_pi(ring, l, bottom)?;
        let h = reduction_mod_pi(ring, l, top)?;
        let d = l.rank();
        if ell.dim() != 1 || h.dim() + 1 != d {
            return Err(Error::NotClose);
        }
        // zeroing the pivot of l leaves a complement of l in H
        let mut comp: Vec<Vec<Elem>> = h.basis().iter().map(|v| ell.reduce(f, v)).collect();
        let rank = rref_rows(f, &mut comp);
        comp.truncate(rank);
        let mut basis = ell.basis().to_vec();
        basis.extend(comp);
        let comp = &basis[1..];
        let m = comp.len();
        let mut gram = MatrixK::zeros(m, m);
        for (a, x) in comp.iter().enumerate() {
            for (b, y) in comp.iter().enumerate() {
                gram[(a, b)] = form.pair(f, x, y);
            }
        }
        let symplectic = symplectic_basis(f, &gram).ok_or(Error::NotClose)?;
        Ok(Self {
            basis,
            symplectic,
            ell,
            ambient: d,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len() - 1
    }

    /// `l + span` of the given vectors (complement coordinates), in `L / tL`.
    fn preimage(&self, f: &FieldTable, vectors: &[Vec<Elem>]) -> Result<Subspace> {
        let mut gens = self.ell.basis().to_vec();
        for c in vectors {
            let mut v = vec![0; self.ambient];
            for (x, b) in c.iter().zip(&self.basis[1..]) {
                crate::gfq::axpy(f, &mut v, *x, b);
            }
            gens.push(v);
        }
        Subspace::span(f, self.ambient, &gens)
    }

    /// Image of `l ⊆ S ⊆ H` in `k^{2(n-1)}` with the standard form.
    pub fn to_standard(&self, f: &FieldTable, s: &Subspace) -> Result<Subspace> {
        let mut out = Vec::with_capacity(s.dim());
        for v in s.basis() {
            let c = solve_in_span(f, &self.basis, v).ok_or(Error::NotInWindow)?;
            let d = solve_in_span(f, &self.symplectic, &c[1..]).expect("symplectic basis spans");
            out.push(d);
        }
        Subspace::span(f, self.dim(), &out)
    }
}

/// Candidates found by [`sp_close_vertices`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpCloseVertices {
    /// Primitive `M` satisfying the index criterion, sorted.
    pub close: Vec<LatticeRep>,
    /// Lattices satisfying the index criterion that are not primitive.
    pub rejected: usize,
    /// Rejected lattices that are nonetheless special (they would be close
    /// vertices of another type); expected empty.
    pub off_type: Vec<LatticeRep>,
}

/// Vertices close to the type-0 vertex `t`, by their primitive representatives
/// `M` with `tL ⊆ M ⊆ t^{-1}L`. Each accepted `M` is certified by an explicit
/// interpolating chain.
pub fn sp_close_vertices(ring: &TruncRing, t: &HomothetyClass, cap: usize) -> Result<SpCloseVertices> {
    let l = primitive_representative(ring, t)?;
    let d = l.rank();
    if d < 4 {
        return Err(Error::DomainError("closeness needs n >= 2".into()));
    }
    let f = ring.field();
    let j = form_for_rank(f, d)?;
    let quot = Quotient::new(ring, &l.scaled(1), &l.scaled(-1))?;
    enum Found {
        Close(LatticeRep),
        Rejected,
        OffType(LatticeRep),
    }
    let found = quot.map_intermediate(cap, |socle, top| socle == d - 1 && top == 1, |m| {
        let res = (|| -> Result<Found> {
            match modularity(f, &m, &j)? {
                Some(0) => {
                    SpClosePair::new(ring, l.clone(), m.clone())?.interpolating_chain(ring)?;
                    Ok(Found::Close(m))
                }
                Some(_) => Ok(Found::OffType(m)),
                None => Ok(Found::Rejected),
            }
        })();
        Some(res)
    })?;
    let mut out = SpCloseVertices {
        close: Vec::new(),
        rejected: 0,
        off_type: Vec::new(),
    };
    for x in found {
        match x? {
            Found::Close(m) => out.close.push(m),
            Found::Rejected => out.rejected += 1,
            Found::OffType(m) => {
                out.rejected += 1;
                out.off_type.push(m);
            }
        }
    }
    out.close.sort();
    out.off_type.sort();
    Ok(out)
}

/// Galleries `C, C'` with `t ∈ C`, `t' ∈ C'`: chains of isotropic lattices
/// `t(L + M) = L_1 ⊊ L_2 ⊊ .. ⊊ L_n ⊆ L ∩ M`.
pub fn sp_gallery_multiplicity(ring: &TruncRing, pair: &SpClosePair, cap: usize) -> Result<u128> {
    let f = ring.field();
    let j = form_for_rank(f, pair.l.rank())?;
    let quot = Quotient::new(ring, &pair.bottom(ring)?, &pair.top(ring)?)?;
    let d = quot.dim();
    let nodes = quot.map_intermediate_with_image(cap, |_, _| true, |b, x| {
        match is_isotropic_lattice(f, &x, &j) {
            Ok(true) => Some(Subspace::span(f, d, b)),
            Ok(false) => None,
            Err(e) => Some(Err(e)),
        }
    })?;
    let nodes: Vec<Subspace> = nodes.into_iter().collect::<Result<_>>()?;
    count_flag_chains(f, &nodes, pair.n() - 1)
}

/// For every chamber through `t`, the primitive lattices completing the panel
/// opposite `t` (the base itself included), in chamber order.
fn opposite_completions(ring: &TruncRing, chambers: &[SpChamber], cap: usize) -> Result<Vec<Vec<LatticeRep>>> {
    let f = ring.field();
    chambers
        .iter()
        .map(|ch| {
            let l = &ch.base;
            let j = form_for_rank(f, l.rank())?;
            let n = l.rank() / 2;
            let chain = ch.chain(ring)?;
            let quot = Quotient::new(ring, &chain[n - 1], &chain[0].scaled(-1))?;
            let xs = quot.map_intermediate(cap, |a, p| a + p == n, |x| match is_primitive(f, &x, &j) {
                Ok(true) => Some(Ok(x)),
                Ok(false) => None,
                Err(e) => Some(Err(e)),
            })?;
            xs.into_iter().collect()
        })
        .collect()
}

/// How often each vertex is reached by a length-one gallery leaving a chamber
/// through `t` across the panel opposite `t`; the values sum to `r(n) q`.
pub fn sp_galleries_by_endpoint(
    ring: &TruncRing,
    t: &HomothetyClass,
    cap: usize,
) -> Result<BTreeMap<HomothetyClass, u128>> {
    let chambers = sp_chambers_containing(ring, t)?;
    let l = &chambers[0].base;
    let mut out: BTreeMap<HomothetyClass, u128> = BTreeMap::new();
    for xs in opposite_completions(ring, &chambers, cap)? {
        for x in xs {
            if &x != l {
                *out.entry(x.class()).or_insert(0) += 1;
            }
        }
    }
    Ok(out)
}

/// Number of chambers through each codimension-one face of each chamber
/// through `t`, collected as a set (thickness `q + 1` makes it `{q + 1}`).
pub fn sp_panel_thickness(ring: &TruncRing, t: &HomothetyClass, cap: usize) -> Result<BTreeSet<usize>> {
    let chambers = sp_chambers_containing(ring, t)?;
    let flags: Vec<Flag> = chambers.iter().map(|c| c.flag.clone()).collect();
    let mut out: BTreeSet<usize> = complex_of_flags(&flags)?.panel_counts().into_values().collect();
    for xs in opposite_completions(ring, &chambers, cap)? {
        out.insert(xs.len());
    }
    Ok(out)
}

/// Vertices of the building adjacent to `t`, `t'` and `[L + M]`, with the
/// simplices they span, mapped to isotropic subspaces of `(L ∩ M) / t(L + M)`
/// in a symplectic basis and compared with the `C_{n-1}` building.
pub fn sp_close_complex(ring: &TruncRing, pair: &SpClosePair, cap: usize) -> Result<CloseComplex> {
    let f = ring.field();
    let l = &pair.l;
    let d = l.rank();
    let n = pair.n();
    let j = form_for_rank(f, d)?;
    let join = lattice_sum(ring, l, &pair.m)?;
    // neighbours of t: isotropic lattices strictly between tL and L
    let around_t = Quotient::new(ring, &l.scaled(1), l)?;
    let mut candidates: Vec<LatticeRep> = around_t
        .map_intermediate(cap, |a, _| a > 0 && a <= n, Some)?
        .into_iter()
        .filter_map(|x| {
            let ok = (|| -> Result<bool> {
                if !is_isotropic_lattice(f, &x, &j)? || !are_adjacent(ring, &x, &join)? {
                    return Ok(false);
                }
                // adjacency to t' in the symplectic building
                match adjacent_representative(ring, &pair.m, &x.class()) {
                    Ok(y) => is_isotropic_lattice(f, &y, &j),
                    Err(Error::NotAdjacent) => Ok(false),
                    Err(e) => Err(e),
                }
            })();
            match ok {
                Ok(true) => Some(Ok(x)),
                Ok(false) => None,
                Err(e) => Some(Err(e)),
            }
        })
        .collect::<Result<_>>()?;
    candidates.sort();
    let classes: Vec<HomothetyClass> = candidates.iter().map(LatticeRep::class).collect();
    let k = classes.len();
    let mut adj = vec![vec![false; k]; k];
    for a in 0..k {
        for b in a + 1..k {
            let e = are_adjacent(ring, &candidates[a], &candidates[b])?;
            adj[a][b] = e;
            adj[b][a] = e;
        }
    }
    let complex = Complex::new(classes.clone(), maximal_cliques(&adj))?;

    let bottom = pair.bottom(ring)?;
    let top = pair.top(ring)?;
    let mid = MiddleSpace::new(ring, l, &bottom, &top)?;
    let target = build_C_building(f, n - 1)?;
    let target_index = label_index(&target);
    let mut map = Vec::with_capacity(k);
    for c in &classes {
        let rep = representative_between(ring, c, &bottom, &top)?;
        let s = mid.to_standard(f, &reduction_mod_pi(ring, l, &rep)?)?;
        map.push(*target_index.get(&s).ok_or(Error::FaceNotInComplex)?);
    }
    let iso = verify_simplicial_iso(&complex, &target, &map);
    Ok(CloseComplex {
        complex,
        target,
        map,
        iso,
    })
}
