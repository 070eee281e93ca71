//! Chambers, close vertices and length-one galleries around a vertex of the
//! building of `SL_n(F_q((t)))`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gfq::{complete_flag_count, enumerate_complete_flags, q_integer, Elem, Flag, Subspace};
use crate::lattice::{
    are_adjacent, index, is_sublattice, lattice_intersect, lattice_sum,
    lift_from_quotient, HomothetyClass, LatticeRep, Quotient, TruncRing,
};
use crate::spherical::{build_A_building, complex_of_flags, label_index, verify_simplicial_iso, Complex, IsoCheck};

/// A chamber `tL ⊊ L_1 ⊊ .. ⊊ L_{n-1} ⊊ L` through the base vertex, encoded by
/// the complete flag `L_i / tL` of `L / tL`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SLChamber {
    pub base: HomothetyClass,
    pub flag: Flag,
}

impl SLChamber {
    /// `L_1, .., L_{n-1}` for the canonical representative `L` of the base vertex.
    pub fn chain(&self, ring: &TruncRing) -> Result<Vec<LatticeRep>> {
        self.flag
            .chain()
            .iter()
            .map(|s| lift_from_quotient(ring, self.base.rep(), s))
            .collect()
    }
}

/// Close vertices `t = [L]`, `t' = [M]` with `[L : L ∩ M] = q = [L + M : L]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ClosePair {
    pub l: LatticeRep,
    pub m: LatticeRep,
}

impl ClosePair {
    /// Checks the index criterion for the given representatives.
    pub fn new(ring: &TruncRing, l: LatticeRep, m: LatticeRep) -> Result<Self> {
        if l.rank() < 3 || l.class() == m.class() {
            return Err(Error::NotClose);
        }
        let meet = lattice_intersect(ring, &l, &m)?;
        let join = lattice_sum(ring, &l, &m)?;
        if index(ring, &meet, &l)? != 1 || index(ring, &l, &join)? != 1 {
            return Err(Error::NotClose);
        }
        Ok(Self { l, m })
    }

    /// Picks the representative of `t'` for which the index criterion holds
    /// against the canonical representative of `t`; it is unique when it exists.
    pub fn from_classes(ring: &TruncRing, t: &HomothetyClass, t2: &HomothetyClass) -> Result<Self> {
        let l = t.rep().clone();
        let m0 = t2.rep();
        let lo = l.shift() - m0.shift() - m0.top_exponent() as i64 - 1;
        let hi = l.shift() + l.top_exponent() as i64 + 1 - m0.shift();
        let mut found = None;
        for k in lo..=hi {
            if let Ok(p) = ClosePair::new(ring, l.clone(), m0.scaled(k)) {
                if found.is_some() {
                    return Err(Error::DomainError("two scalings satisfy the index criterion".into()));
                }
                found = Some(p);
            }
        }
        found.ok_or(Error::NotClose)
    }

    pub fn t(&self) -> HomothetyClass {
        self.l.class()
    }

    pub fn t_prime(&self) -> HomothetyClass {
        self.m.class()
    }

    /// `t(L + M)`, the bottom of every middle chain.
    pub fn bottom(&self, ring: &TruncRing) -> Result<LatticeRep> {
        Ok(lattice_sum(ring, &self.l, &self.m)?.scaled(1))
    }

    /// `L ∩ M`, the top of every middle chain.
    pub fn top(&self, ring: &TruncRing) -> Result<LatticeRep> {
        lattice_intersect(ring, &self.l, &self.m)
    }

    /// One chain `L_1 ⊊ .. ⊊ L_{n-1}` with steps of index `q` completing both
    /// `tL ⊊ .. ⊊ L` and `tM ⊊ .. ⊊ M`.
    pub fn interpolating_chain(&self, ring: &TruncRing) -> Result<Vec<LatticeRep>> {
        let bottom = self.bottom(ring)?;
        let top = self.top(ring)?;
        let quot = Quotient::new(ring, &bottom, &top)?;
        let d = quot.dim();
        let mut chain = vec![bottom];
        for i in 1..d {
            let basis: Vec<Vec<Elem>> = (0..i)
                .map(|j| {
                    let mut e = vec![0; d];
                    e[j] = 1;
                    e
                })
                .collect();
            chain.push(quot.lift(&basis)?);
        }
        chain.push(top);
        Ok(chain)
    }
}

/// Chains `tL ⊊ L_1 ⊊ .. ⊊ L` through `t`, one per complete flag of `L / tL`.
pub fn chambers_containing_vertex(ring: &TruncRing, t: &HomothetyClass) -> Result<Vec<SLChamber>> {
    let n = t.rep().rank();
    if n < 2 {
        return Err(Error::DomainError("rank must be at least 2".into()));
    }
    Ok(enumerate_complete_flags(ring.field(), n)
        .into_iter()
        .map(|flag| SLChamber {
            base: t.clone(),
            flag,
        })
        .collect())
}

/// Number of chambers through a vertex, `prod_{m<=n} (q^m - 1)/(q - 1)`.
pub fn r_formula(n: u32, q: u32) -> Result<u128> {
    complete_flag_count(n, q)
}

/// `(q^n - 1)/(q - 1) * (q^{n-1} - 1)/(q - 1) * q`.
pub fn omega_formula(n: u32, q: u32) -> Result<u128> {
    if n < 3 {
        return Err(Error::DomainError("closeness needs n >= 3".into()));
    }
    q_integer(n, q)?
        .checked_mul(q_integer(n - 1, q)?)
        .and_then(|x| x.checked_mul(q as u128))
        .ok_or(Error::Overflow)
}

/// Every vertex close to `t`, as the representative `M` with `tL ⊆ M ⊆ t^{-1}L`
/// satisfying the index criterion. Sorted.
pub fn close_vertices(ring: &TruncRing, t: &HomothetyClass, cap: usize) -> Result<Vec<LatticeRep>> {
    let l = t.rep();
    let n = l.rank();
    if n < 3 {
        return Err(Error::DomainError("closeness needs n >= 3".into()));
    }
    let quot = Quotient::new(ring, &l.scaled(1), &l.scaled(-1))?;
    // ker t on t^{-1}L / tL is L / tL: socle n - 1 means [L : L ∩ M] = q, top 1 means [L + M : L] = q
    let mut out = quot.map_intermediate(cap, |socle, top| socle == n - 1 && top == 1, Some)?;
    out.sort();
    Ok(out)
}

/// Relation `q r_n = r_{n-2} omega_n` with the inputs that were compared.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub n: u32,
    pub q: u32,
    pub r: u128,
    pub r_prev: u128,
    pub omega: u128,
    pub lhs: u128,
    pub rhs: u128,
    pub holds: bool,
}

impl RelationReport {
    /// `q * r` against `r_prev * omega`.
    pub fn new(n: u32, q: u32, r: u128, r_prev: u128, omega: u128) -> Result<Self> {
        let lhs = r.checked_mul(q as u128).ok_or(Error::Overflow)?;
        let rhs = r_prev.checked_mul(omega).ok_or(Error::Overflow)?;
        Ok(Self {
            n,
            q,
            r,
            r_prev,
            omega,
            lhs,
            rhs,
            holds: lhs == rhs,
        })
    }
}

/// The relation evaluated on the closed formulas (`r_1 = 1`).
pub fn verify_sl_relation(n: u32, q: u32) -> Result<RelationReport> {
    RelationReport::new(
        n,
        q,
        r_formula(n, q)?,
        r_formula(n - 2, q)?,
        omega_formula(n, q)?,
    )
}

/// Number of maximal chains `S_0 ⊊ S_1 ⊊ .. ⊊ S_d` with `dim S_i = i` among `nodes`.
pub(crate) fn count_flag_chains(
    f: &crate::gfq::FieldTable,
    nodes: &[Subspace],
    d: usize,
) -> Result<u128> {
    let mut by_dim: Vec<Vec<&Subspace>> = vec![Vec::new(); d + 1];
    for s in nodes {
        if s.dim() <= d {
            by_dim[s.dim()].push(s);
        }
    }
    let mut counts: Vec<u128> = vec![1; by_dim[0].len()];
    for i in 1..=d {
        let next: Vec<u128> = by_dim[i]
            .iter()
            .map(|s| {
                by_dim[i - 1]
                    .iter()
                    .zip(&counts)
                    .filter(|(a, _)| a.is_subspace_of(f, s))
                    .try_fold(0u128, |acc, (_, &c)| acc.checked_add(c))
            })
            .collect::<Option<_>>()
            .ok_or(Error::Overflow)?;
        counts = next;
    }
    counts
        .into_iter()
        .try_fold(0u128, |acc, c| acc.checked_add(c))
        .ok_or(Error::Overflow)
}

/// Galleries `C, C'` with `t ∈ C`, `t' ∈ C'`: the complete chains from
/// `t(L + M)` to `L ∩ M`, counted over the enumerated intermediate lattices.
pub fn gallery_multiplicity(ring: &TruncRing, pair: &ClosePair, cap: usize) -> Result<u128> {
    let bottom = pair.bottom(ring)?;
    let top = pair.top(ring)?;
    let quot = Quotient::new(ring, &bottom, &top)?;
    let f = ring.field();
    let d = quot.dim();
    let nodes = quot.map_intermediate_with_image(cap, |_, _| true, |b, _| {
        Some(Subspace::span(f, d, b).expect("quotient vectors"))
    })?;
    count_flag_chains(f, &nodes, d)
}

/// For every chamber `C` through `t` and every chamber `C'` adjacent to `C`
/// across the face opposite `t`, the new vertex of `C'`; returns how often each
/// vertex is reached. The values sum to `r_n q`.
pub fn galleries_by_endpoint(
    ring: &TruncRing,
    t: &HomothetyClass,
    cap: usize,
) -> Result<BTreeMap<HomothetyClass, u128>> {
    let l = t.rep();
    let mut out: BTreeMap<HomothetyClass, u128> = BTreeMap::new();
    for ch in chambers_containing_vertex(ring, t)? {
        let chain = ch.chain(ring)?;
        let first = &chain[0];
        let last = &chain[chain.len() - 1];
        // the panel opposite t is completed by X with L_{n-1} ⊊ X ⊊ t^{-1} L_1 of index q
        let quot = Quotient::new(ring, last, &first.scaled(-1))?;
        let xs = quot.map_intermediate(cap, |a, p| a + p == 1, Some)?;
        for x in xs {
            if &x != l {
                *out.entry(x.class()).or_insert(0) += 1;
            }
        }
    }
    Ok(out)
}

/// `r_n q`, counted gallery by gallery.
pub fn count_galleries_from(ring: &TruncRing, t: &HomothetyClass, cap: usize) -> Result<u128> {
    Ok(galleries_by_endpoint(ring, t, cap)?.values().sum())
}

/// Number of chambers through each codimension-one face of each chamber
/// through `t`, collected as a set (thickness `q + 1` makes it `{q + 1}`).
pub fn panel_thickness(ring: &TruncRing, t: &HomothetyClass, cap: usize) -> Result<BTreeSet<usize>> {
    let chambers = chambers_containing_vertex(ring, t)?;
    let flags: Vec<Flag> = chambers.iter().map(|c| c.flag.clone()).collect();
    let mut out: BTreeSet<usize> = complex_of_flags(&flags)?.panel_counts().into_values().collect();
    for ch in &chambers {
        let chain = ch.chain(ring)?;
        let quot = Quotient::new(ring, &chain[chain.len() - 1], &chain[0].scaled(-1))?;
        out.insert(quot.map_intermediate(cap, |a, p| a + p == 1, |_| Some(()))?.len());
    }
    Ok(out)
}

/// The close complex with its map into the spherical building of
/// `(L ∩ M) / t(L + M)`.
#[derive(Clone, Debug, Serialize)]
pub struct CloseComplex {
    pub complex: Complex<HomothetyClass>,
    pub target: Complex<Subspace>,
    pub map: Vec<usize>,
    pub iso: IsoCheck,
}

/// Vertices adjacent to all of `t, t', [L + M], [L ∩ M]`, with the simplices
/// they span in the building, mapped to subspaces of `(L ∩ M) / t(L + M)`.
pub fn close_complex(ring: &TruncRing, pair: &ClosePair, cap: usize) -> Result<CloseComplex> {
    let l = &pair.l;
    let n = l.rank();
    let join = lattice_sum(ring, l, &pair.m)?;
    let meet = pair.top(ring)?;
    let f = ring.field();
    // neighbours of t are the classes of the proper lattices strictly between tL and L
    let around_t = Quotient::new(ring, &l.scaled(1), l)?;
    let mut candidates: Vec<LatticeRep> = around_t
        .map_intermediate(cap, |a, _| a > 0 && a < n, Some)?
        .into_iter()
        .filter_map(|x| {
            let ok = (|| -> Result<bool> {
                Ok(are_adjacent(ring, &x, &pair.m)?
                    && are_adjacent(ring, &x, &join)?
                    && are_adjacent(ring, &x, &meet)?)
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
    for i in 0..k {
        for j in i + 1..k {
            let a = are_adjacent(ring, &candidates[i], &candidates[j])?;
            adj[i][j] = a;
            adj[j][i] = a;
        }
    }
    let facets = maximal_cliques(&adj);
    let complex = Complex::new(classes.clone(), facets)?;

    let bottom = pair.bottom(ring)?;
    let quot = Quotient::new(ring, &bottom, &meet)?;
    let target = build_A_building(f, n - 3)?;
    let target_index = label_index(&target);
    let mut map = Vec::with_capacity(k);
    for c in &classes {
        let rep = representative_between(ring, c, &bottom, &meet)?;
        let s = quot.subspace_of(&rep)?;
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

/// The scaling of `c` strictly between `lower` and `upper`.
pub(crate) fn representative_between(
    ring: &TruncRing,
    c: &HomothetyClass,
    lower: &LatticeRep,
    upper: &LatticeRep,
) -> Result<LatticeRep> {
    let rep = c.rep();
    let lo = lower.shift() - rep.shift() - rep.top_exponent() as i64 - 1;
    let hi = upper.shift() + upper.top_exponent() as i64 + 1 - rep.shift();
    for k in lo..=hi {
        let x = rep.scaled(k);
        if &x != lower
            && &x != upper
            && is_sublattice(ring, lower, &x)?
            && is_sublattice(ring, &x, upper)?
        {
            return Ok(x);
        }
    }
    Err(Error::NotInWindow)
}

/// Maximal cliques of a graph given by its adjacency matrix (Bron–Kerbosch with pivoting).
pub(crate) fn maximal_cliques(adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    fn bk(
        adj: &[Vec<bool>],
        r: &mut Vec<usize>,
        p: Vec<usize>,
        x: Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if p.is_empty() && x.is_empty() {
            out.push(r.clone());
            return;
        }
        let pivot = *p.iter().chain(&x).max_by_key(|&&u| p.iter().filter(|&&v| adj[u][v]).count()).unwrap();
        let mut p = p;
        let mut x = x;
        let candidates: Vec<usize> = p.iter().copied().filter(|&v| !adj[pivot][v]).collect();
        for v in candidates {
            r.push(v);
            let np = p.iter().copied().filter(|&u| adj[v][u]).collect();
            let nx = x.iter().copied().filter(|&u| adj[v][u]).collect();
            bk(adj, r, np, nx, out);
            r.pop();
            p.retain(|&u| u != v);
            x.push(v);
        }
    }
    let mut out = Vec::new();
    if adj.is_empty() {
        return out;
    }
    bk(adj, &mut Vec::new(), (0..adj.len()).collect(), Vec::new(), &mut out);
    for c in out.iter_mut() {
        c.sort_unstable();
    }
    out.sort();
    out
}

/// Whether two classes are at distance one in the sense of chamber galleries:
/// not adjacent, but joined through adjacent chambers.
pub fn is_close(ring: &TruncRing, t: &HomothetyClass, t2: &HomothetyClass) -> Result<bool> {
    match ClosePair::from_classes(ring, t, t2) {
        Ok(_) => Ok(true),
        Err(Error::NotClose) => Ok(false),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::DEFAULT_ENUMERATION_CAP as CAP;

    fn base(ring: &TruncRing, n: usize) -> HomothetyClass {
        LatticeRep::standard(ring, n).class()
    }

    #[test]
    fn omega_values() {
        assert_eq!(omega_formula(3, 2).unwrap(), 42);
        assert_eq!(omega_formula(4, 2).unwrap(), 210);
        assert_eq!(omega_formula(3, 3).unwrap(), 156);
    }

    #[test]
    fn relation_arithmetic() {
        for (n, q) in [(3, 2), (4, 2), (3, 3), (8, 3)] {
            assert!(verify_sl_relation(n, q).unwrap().holds);
        }
        let r = verify_sl_relation(4, 2).unwrap();
        assert_eq!((r.lhs, r.rhs), (630, 630));
    }

    #[test]
    fn chamber_counts_and_chain_indices() {
        let ring = TruncRing::with_default_precision(2).unwrap();
        assert_eq!(chambers_containing_vertex(&ring, &base(&ring, 2)).unwrap().len(), 3);
        let t = base(&ring, 3);
        let chambers = chambers_containing_vertex(&ring, &t).unwrap();
        assert_eq!(chambers.len(), 21);
        for c in &chambers {
            let mut chain = vec![t.rep().scaled(1)];
            chain.extend(c.chain(&ring).unwrap());
            chain.push(t.rep().clone());
            for w in chain.windows(2) {
                assert_eq!(index(&ring, &w[0], &w[1]).unwrap(), 1);
            }
        }
    }

    #[test]
    fn close_counts_small() {
        for (q, n) in [(2, 3), (3, 3), (2, 4)] {
            let ring = TruncRing::with_default_precision(q).unwrap();
            let close = close_vertices(&ring, &base(&ring, n), CAP).unwrap();
            assert_eq!(close.len() as u128, omega_formula(n as u32, q).unwrap());
        }
    }

    #[test]
    fn galleries_group_by_close_vertex() {
        let ring = TruncRing::with_default_precision(2).unwrap();
        let t = base(&ring, 4);
        let by_end = galleries_by_endpoint(&ring, &t, CAP).unwrap();
        assert_eq!(by_end.values().sum::<u128>(), 630);
        assert_eq!(by_end.len(), 210);
        assert!(by_end.values().all(|&m| m == 3));
        let close: Vec<HomothetyClass> = close_vertices(&ring, &t, CAP)
            .unwrap()
            .iter()
            .map(LatticeRep::class)
            .collect();
        let mut ends: Vec<HomothetyClass> = by_end.keys().cloned().collect();
        let mut close_sorted = close;
        close_sorted.sort();
        ends.sort();
        assert_eq!(ends, close_sorted);
    }

    #[test]
    fn multiplicity_and_complex_n4() {
        let ring = TruncRing::with_default_precision(2).unwrap();
        let t = base(&ring, 4);
        let close = close_vertices(&ring, &t, CAP).unwrap();
        let pair = ClosePair::new(&ring, t.rep().clone(), close[7].clone()).unwrap();
        assert_eq!(gallery_multiplicity(&ring, &pair, CAP).unwrap(), 3);
        let cc = close_complex(&ring, &pair, CAP).unwrap();
        assert_eq!(cc.complex.vertices().len(), 3);
        assert_eq!(cc.complex.chamber_count(), 3);
        assert!(cc.iso.ok);
    }

    #[test]
    fn n3_conventions() {
        let ring = TruncRing::with_default_precision(3).unwrap();
        let t = base(&ring, 3);
        let close = close_vertices(&ring, &t, CAP).unwrap();
        let pair = ClosePair::new(&ring, t.rep().clone(), close[0].clone()).unwrap();
        assert_eq!(gallery_multiplicity(&ring, &pair, CAP).unwrap(), 1);
        let cc = close_complex(&ring, &pair, CAP).unwrap();
        assert_eq!(cc.complex.vertices().len(), 0);
        assert!(cc.iso.ok);
    }

    #[test]
    fn thickness_small() {
        for (q, n) in [(2u32, 3usize), (3, 3), (2, 4)] {
            let ring = TruncRing::with_default_precision(q).unwrap();
            let got = panel_thickness(&ring, &base(&ring, n), CAP).unwrap();
            assert_eq!(got, BTreeSet::from([q as usize + 1]));
        }
    }

    #[test]
    fn representative_scaling_is_unique() {
        let ring = TruncRing::with_default_precision(2).unwrap();
        let t = base(&ring, 3);
        for m in close_vertices(&ring, &t, CAP).unwrap() {
            let pair = ClosePair::from_classes(&ring, &t, &m.class()).unwrap();
            assert_eq!(pair.m, m);
        }
    }

    #[test]
    fn close_vertices_are_not_adjacent() {
        let ring = TruncRing::with_default_precision(2).unwrap();
        let t = base(&ring, 3);
        for m in close_vertices(&ring, &t, CAP).unwrap() {
            assert!(!are_adjacent(&ring, t.rep(), &m).unwrap());
            assert!(crate::lattice::relative_position(&ring, t.rep(), &m)
                .unwrap()
                .is_close_shape());
        }
    }

    #[test]
    fn cliques_of_a_path() {
        let adj = vec![
            vec![false, true, false],
            vec![true, false, true],
            vec![false, true, false],
        ];
        assert_eq!(maximal_cliques(&adj), vec![vec![0, 1], vec![1, 2]]);
    }
}
