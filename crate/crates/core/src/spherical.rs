//! Finite simplicial complexes stored by their facets, and the spherical
//! buildings of types `A_m` and `C_m` over `F_q`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::hash::Hash;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gfq::{enumerate_subspaces, FieldTable, Flag, GramForm, Subspace};

/// A simplicial complex given by labeled vertices and its facets (sorted
/// vertex-index lists). Simplices are the subsets of facets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Complex<V> {
    vertices: Vec<V>,
    facets: Vec<Vec<usize>>,
}

impl<V> Complex<V> {
    pub fn empty() -> Self {
        Self {
            vertices: Vec::new(),
            facets: Vec::new(),
        }
    }

    /// Checks that facets are non-empty, mutually non-nested and cover every vertex.
    pub fn new(vertices: Vec<V>, facets: Vec<Vec<usize>>) -> Result<Self> {
        let mut facets: Vec<Vec<usize>> = facets
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        facets.sort();
        facets.dedup();
        let nv = vertices.len();
        let mut covered = vec![false; nv];
        for s in &facets {
            if s.is_empty() || s.iter().any(|&v| v >= nv) {
                return Err(Error::DomainError("facet with invalid vertex".into()));
            }
            for &v in s {
                covered[v] = true;
            }
        }
        if covered.iter().any(|c| !c) {
            return Err(Error::DomainError("vertex outside every facet".into()));
        }
        let sizes: BTreeSet<usize> = facets.iter().map(Vec::len).collect();
        if sizes.len() > 1 {
            for (i, a) in facets.iter().enumerate() {
                if facets
                    .iter()
                    .enumerate()
                    .any(|(j, b)| i != j && a.len() < b.len() && is_subset(a, b))
                {
                    return Err(Error::DomainError("facet contained in another".into()));
                }
            }
        }
        Ok(Self { vertices, facets })
    }

    pub fn vertices(&self) -> &[V] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn chamber_count(&self) -> usize {
        self.facets.len()
    }

    /// Number of facets containing `face`.
    pub fn chambers_containing(&self, face: &[usize]) -> Result<usize> {
        let mut face = face.to_vec();
        face.sort_unstable();
        face.dedup();
        let count = self.facets.iter().filter(|s| is_subset(&face, s)).count();
        if count == 0 {
            return Err(Error::FaceNotInComplex);
        }
        Ok(count)
    }

    /// For every codimension-one face of every facet, the number of facets containing it.
    pub fn panel_counts(&self) -> BTreeMap<Vec<usize>, usize> {
        let mut counts = BTreeMap::new();
        for s in &self.facets {
            for skip in 0..s.len() {
                let panel: Vec<usize> = s
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect();
                *counts.entry(panel).or_insert(0) += 1;
            }
        }
        counts
    }

    /// Edges of the 1-skeleton, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e = BTreeSet::new();
        for s in &self.facets {
            for (i, &a) in s.iter().enumerate() {
                for &b in &s[i + 1..] {
                    e.insert((a, b));
                }
            }
        }
        e.into_iter().collect()
    }

    pub fn map_labels<W>(self, f: impl FnMut(V) -> W) -> Complex<W> {
        Complex {
            vertices: self.vertices.into_iter().map(f).collect(),
            facets: self.facets,
        }
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    // both sorted
    let mut it = b.iter();
    a.iter().all(|x| it.any(|y| y == x))
}

/// Result of checking a candidate isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoCheck {
    pub ok: bool,
    /// A domain simplex (vertex indices) on which the map fails.
    pub witness: Option<Vec<usize>>,
}

/// Whether `map` (domain vertex index to codomain vertex index) is a
/// bijection on vertices sending facets exactly onto facets.
pub fn verify_simplicial_iso<A, B>(dom: &Complex<A>, cod: &Complex<B>, map: &[usize]) -> IsoCheck {
    let fail = |w: Vec<usize>| IsoCheck {
        ok: false,
        witness: Some(w),
    };
    if map.len() != dom.vertices.len() {
        return fail(Vec::new());
    }
    let mut preimage: HashMap<usize, usize> = HashMap::new();
    for (v, &img) in map.iter().enumerate() {
        if img >= cod.vertices.len() {
            return fail(vec![v]);
        }
        if let Some(&u) = preimage.get(&img) {
            return fail(vec![u, v]);
        }
        preimage.insert(img, v);
    }
    if preimage.len() != cod.vertices.len() {
        return fail(Vec::new());
    }
    let cod_facets: BTreeSet<&Vec<usize>> = cod.facets.iter().collect();
    let mut hit = BTreeSet::new();
    for s in &dom.facets {
        let mut img: Vec<usize> = s.iter().map(|&v| map[v]).collect();
        img.sort_unstable();
        if !cod_facets.contains(&img) {
            return fail(s.clone());
        }
        hit.insert(img);
    }
    if hit.len() != cod.facets.len() {
        let missing = cod.facets.iter().find(|s| !hit.contains(*s)).unwrap();
        let mut pre: Vec<usize> = missing.iter().map(|v| preimage[v]).collect();
        pre.sort_unstable();
        return fail(pre);
    }
    IsoCheck {
        ok: true,
        witness: None,
    }
}

/// The identity map of a complex.
pub fn identity_map<V>(c: &Complex<V>) -> Vec<usize> {
    (0..c.vertices.len()).collect()
}

/// Flag complex on `vertices` (grouped by dimension `1..=top`): facets are the
/// chains with one member of every dimension.
fn flag_complex(f: &FieldTable, layers: Vec<Vec<Subspace>>) -> Result<Complex<Subspace>> {
    if layers.iter().any(Vec::is_empty) || layers.is_empty() {
        return Ok(Complex::empty());
    }
    let mut offset = Vec::new();
    let mut vertices = Vec::new();
    for layer in &layers {
        offset.push(vertices.len());
        vertices.extend(layer.iter().cloned());
    }
    // up[d][i] = indices in layer d + 1 containing layer[d][i]
    let up: Vec<Vec<Vec<usize>>> = (0..layers.len().saturating_sub(1))
        .map(|d| {
            layers[d]
                .iter()
                .map(|s| {
                    layers[d + 1]
                        .iter()
                        .enumerate()
                        .filter(|(_, t)| s.is_subspace_of(f, t))
                        .map(|(j, _)| j)
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut facets = Vec::new();
    let mut chain = Vec::with_capacity(layers.len());
    fn dfs(
        d: usize,
        i: usize,
        up: &[Vec<Vec<usize>>],
        offset: &[usize],
        chain: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        chain.push(offset[d] + i);
        if d == up.len() {
            out.push(chain.clone());
        } else {
            for &j in &up[d][i] {
                dfs(d + 1, j, up, offset, chain, out);
            }
        }
        chain.pop();
    }
    for i in 0..layers[0].len() {
        dfs(0, i, &up, &offset, &mut chain, &mut facets);
    }
    Complex::new(vertices, facets)
}

/// Proper non-trivial subspaces of `k^{m+1}` with complete flags as chambers.
#[allow(non_snake_case)]
pub fn build_A_building(f: &FieldTable, m: usize) -> Result<Complex<Subspace>> {
    let layers = (1..=m).map(|d| enumerate_subspaces(f, m + 1, d)).collect();
    flag_complex(f, layers)
}

/// Non-trivial totally isotropic subspaces of `(k^{2m}, J_m)` with maximal
/// isotropic flags as chambers.
#[allow(non_snake_case)]
pub fn build_C_building(f: &FieldTable, m: usize) -> Result<Complex<Subspace>> {
    let j = GramForm::standard(f, m);
    let mut layers = Vec::new();
    for d in 1..=m {
        let mut layer = Vec::new();
        for s in enumerate_subspaces(f, 2 * m, d) {
            if j.is_totally_isotropic(f, &s)? {
                layer.push(s);
            }
        }
        layers.push(layer);
    }
    flag_complex(f, layers)
}

/// The complex whose facets are the given flags.
pub fn complex_of_flags(flags: &[Flag]) -> Result<Complex<Subspace>> {
    let vertices: Vec<Subspace> = flags
        .iter()
        .flat_map(|fl| fl.chain().iter().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index: HashMap<&Subspace, usize> = vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let facets = flags
        .iter()
        .map(|fl| fl.chain().iter().map(|s| index[s]).collect())
        .collect();
    Complex::new(vertices, facets)
}

/// Index of each label (labels must be distinct).
pub fn label_index<V: Eq + Hash + Clone>(c: &Complex<V>) -> HashMap<V, usize> {
    c.vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfq::complete_flag_count;

    #[test]
    fn small_a_buildings() {
        let f = FieldTable::new(2).unwrap();
        let a0 = build_A_building(&f, 0).unwrap();
        assert_eq!((a0.vertices().len(), a0.chamber_count()), (0, 0));
        let a1 = build_A_building(&f, 1).unwrap();
        assert_eq!((a1.vertices().len(), a1.chamber_count()), (3, 3));
        let a2 = build_A_building(&f, 2).unwrap();
        assert_eq!((a2.vertices().len(), a2.chamber_count()), (14, 21));
    }

    #[test]
    fn a_chamber_counts_match_products() {
        for q in [2, 3] {
            let f = FieldTable::new(q).unwrap();
            let top = if q == 2 { 4 } else { 3 };
            for m in 1..=top {
                let c = build_A_building(&f, m).unwrap();
                assert_eq!(
                    c.chamber_count() as u128,
                    complete_flag_count(m as u32 + 1, q).unwrap()
                );
            }
        }
    }

    #[test]
    fn c_buildings() {
        for (q, m, chambers) in [(2, 1, 3), (2, 2, 45), (3, 2, 160), (3, 1, 4)] {
            let f = FieldTable::new(q).unwrap();
            let c = build_C_building(&f, m).unwrap();
            assert_eq!(c.chamber_count(), chambers);
            assert!(c.facets().iter().all(|s| s.len() == m));
        }
    }

    #[test]
    fn thickness() {
        for q in [2, 3] {
            let f = FieldTable::new(q).unwrap();
            for c in [build_A_building(&f, 2).unwrap(), build_C_building(&f, 2).unwrap()] {
                let counts = c.panel_counts();
                assert!(!counts.is_empty());
                assert!(counts.values().all(|&k| k == q as usize + 1));
                for p in counts.keys() {
                    assert_eq!(c.chambers_containing(p).unwrap(), q as usize + 1);
                }
            }
        }
    }

    #[test]
    fn facet_lies_in_one_chamber() {
        let f = FieldTable::new(2).unwrap();
        let c = build_A_building(&f, 2).unwrap();
        assert_eq!(c.chambers_containing(&c.facets()[0]).unwrap(), 1);
        // two lines never share a chamber
        let lines: Vec<usize> = (0..c.vertices().len())
            .filter(|&i| c.vertices()[i].dim() == 1)
            .take(2)
            .collect();
        assert_eq!(c.chambers_containing(&lines), Err(Error::FaceNotInComplex));
    }

    #[test]
    fn iso_checks() {
        let f = FieldTable::new(2).unwrap();
        let c = build_A_building(&f, 2).unwrap();
        assert!(verify_simplicial_iso(&c, &c, &identity_map(&c)).ok);
        let mut collapse = identity_map(&c);
        collapse[1] = 0;
        let check = verify_simplicial_iso(&c, &c, &collapse);
        assert!(!check.ok);
        assert_eq!(check.witness, Some(vec![0, 1]));
    }

    #[test]
    fn rejects_nested_facets() {
        assert!(Complex::new(vec![0, 1], vec![vec![0], vec![0, 1]]).is_err());
        assert!(Complex::new(vec![0, 1, 2], vec![vec![0, 1]]).is_err());
    }
}
