//! Chambers of an apartment in coordinates, and the lift of a length-one
//! gallery of the `Sp_n` building to a gallery of the `SL_{2n}` building
//! through the same symplectic basis.

use std::collections::BTreeSet;

use serde::Serialize;

use super::coords::{coords_is_primitive, ApartmentVertex, SymplecticBasis};
use crate::error::{Error, Result};
use crate::lattice::{index, HomothetyClass, TruncRing};

/// A chamber `tL_0 ⊊ L_1 ⊊ .. ⊊ L_n ⊊ L_0` of the `Sp_n` building with
/// primitive `L_0` and `<L_i, L_i> ⊆ tO`, stored as `[L_0, L_1, .., L_n]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoordChamber {
    lattices: Vec<ApartmentVertex>,
}

impl CoordChamber {
    pub fn new(lattices: Vec<ApartmentVertex>) -> Result<Self> {
        let n = lattices.first().map_or(0, ApartmentVertex::n);
        if n == 0 || lattices.len() != n + 1 {
            return Err(Error::DimensionMismatch {
                expected: n + 1,
                found: lattices.len(),
            });
        }
        let l0 = &lattices[0];
        for l in &lattices[1..] {
            l0.check_basis(l)?;
        }
        let bad = |why: &str| Err(Error::DomainError(format!("not a chamber: {why}")));
        if !coords_is_primitive(l0) {
            return bad("L_0 is not primitive");
        }
        let bottom = l0.scaled(1);
        for (i, l) in lattices.iter().enumerate().skip(1) {
            if l.sums().iter().any(|&s| s < 1) {
                return bad("member is not isotropic");
            }
            if !bottom.is_sublattice_of(l)? || bottom.index_in(l)? != i as u32 {
                return bad("wrong index over tL_0");
            }
            let below = if i == 1 { &bottom } else { &lattices[i - 1] };
            if !below.is_sublattice_of(l)? {
                return bad("members are not nested");
            }
        }
        if !lattices[n].is_sublattice_of(l0)? {
            return bad("L_n is not in L_0");
        }
        Ok(Self { lattices })
    }

    pub fn n(&self) -> usize {
        self.lattices.len() - 1
    }

    pub fn lattices(&self) -> &[ApartmentVertex] {
        &self.lattices
    }
}

/// A chamber `tL_0 ⊊ L_1 ⊊ .. ⊊ L_{2n-1} ⊊ L_0` of the `SL_{2n}` building,
/// stored as `[L_0, .., L_{2n-1}]`, every step of index `q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct XiChamber {
    lattices: Vec<ApartmentVertex>,
}

impl XiChamber {
    pub fn new(lattices: Vec<ApartmentVertex>) -> Result<Self> {
        let d = lattices.len();
        if d < 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: d });
        }
        let l0 = &lattices[0];
        if l0.n() * 2 != d {
            return Err(Error::DimensionMismatch {
                expected: l0.n() * 2,
                found: d,
            });
        }
        let mut steps = vec![l0.scaled(1)];
        steps.extend(lattices[1..].iter().cloned());
        steps.push(l0.clone());
        for w in steps.windows(2) {
            if w[0].index_in(&w[1])? != 1 {
                return Err(Error::DomainError("chain step is not of index q".into()));
            }
        }
        Ok(Self { lattices })
    }

    pub fn lattices(&self) -> &[ApartmentVertex] {
        &self.lattices
    }

    /// Whether every vertex of `c` is a vertex of this chamber.
    pub fn contains(&self, c: &CoordChamber) -> bool {
        c.lattices
            .iter()
            .all(|v| self.lattices.iter().any(|w| w.same_class(v)))
    }

    /// Number of vertices shared with `other`.
    pub fn shared_vertices(&self, other: &Self) -> usize {
        self.lattices
            .iter()
            .filter(|v| other.lattices.iter().any(|w| w.same_class(v)))
            .count()
    }
}

/// `(L_0, .., L_n)` of `c` with `L_n` completed to `L_0` by lowering, one at a
/// time, the coordinates where the lower lattice exceeds the upper one.
fn interpolate(low: &ApartmentVertex, high: &ApartmentVertex) -> Vec<ApartmentVertex> {
    let mut cur = low.exponents();
    let target = high.exponents();
    let mut out = Vec::new();
    for i in 0..cur.len() {
        if cur[i] > target[i] {
            cur[i] -= 1;
            if cur != target {
                out.push(ApartmentVertex::from_exponents(low.basis.clone(), &cur));
            }
        }
    }
    out
}

fn elementwise(a: &ApartmentVertex, b: &ApartmentVertex, pick: fn(i64, i64) -> i64) -> ApartmentVertex {
    let e: Vec<i64> = a
        .exponents()
        .iter()
        .zip(b.exponents())
        .map(|(&x, y)| pick(x, y))
        .collect();
    ApartmentVertex::from_exponents(a.basis.clone(), &e)
}

/// Position where `c` and `c2` differ as vertex sets (`None` when equal),
/// together with the representative of the new vertex fitting `c`'s chain.
fn differing_position(c: &CoordChamber, c2: &CoordChamber) -> Result<Option<(usize, ApartmentVertex)>> {
    if c.n() != c2.n() {
        return Err(Error::DimensionMismatch {
            expected: c.n(),
            found: c2.n(),
        });
    }
    c.lattices[0].check_basis(&c2.lattices[0])?;
    let n = c.n();
    // positions carry the types 0, 2n - 1, .., n, so equal classes sit at equal positions
    let diff: Vec<usize> = (0..=n)
        .filter(|&i| !c.lattices[i].same_class(&c2.lattices[i]))
        .collect();
    match diff.as_slice() {
        [] => Ok(None),
        [j] => {
            let j = *j;
            let l = &c.lattices;
            let cand = &c2.lattices[j];
            if j == 0 {
                // the primitive representative is unique
                let ok = cand.scaled(1).is_sublattice_of(&l[1])? && l[n].is_sublattice_of(cand)?;
                return if ok { Ok(Some((0, cand.clone()))) } else { Err(Error::NotAdjacent) };
            }
            let lower = if j == 1 { l[0].scaled(1) } else { l[j - 1].clone() };
            let upper = if j == n { l[0].clone() } else { l[j + 1].clone() };
            let e = cand.exponents();
            let lo = upper.exponents().iter().zip(&e).map(|(u, x)| u - x).max().unwrap();
            let hi = lower.exponents().iter().zip(&e).map(|(u, x)| u - x).min().unwrap();
            for k in lo..=hi {
                let x = cand.scaled(k);
                if lower.index_in(&x).is_ok_and(|i| i == 1) && x.index_in(&upper).is_ok_and(|i| i >= 1) {
                    return Ok(Some((j, x)));
                }
            }
            Err(Error::NotAdjacent)
        }
        _ => Err(Error::NotAdjacent),
    }
}

/// Chambers `D ⊇ C` and `D' ⊇ C'` of the `SL_{2n}` building in the apartment
/// of the same basis, adjacent, and distinct when `C ≠ C'`.
///
/// With `j` the position where `C` and `C'` differ: for `0 < j < n` both are
/// completed through `L_n ⊊ .. ⊊ L_0`; for `j = n` through `L_n + L'`; for
/// `j = 0` through `L_0 ∩ L'`.
pub fn lift_gallery(c: &CoordChamber, c2: &CoordChamber) -> Result<(XiChamber, XiChamber)> {
    let n = c.n();
    let l = &c.lattices;
    let Some((j, lp)) = differing_position(c, c2)? else {
        let mut d = l.clone();
        d.extend(interpolate(&l[n], &l[0]));
        let d = XiChamber::new(d)?;
        return Ok((d.clone(), d));
    };
    let mut d = l.clone();
    let mut d2 = l.clone();
    d2[j] = lp.clone();
    if j == 0 {
        let meet = elementwise(&l[0], &lp, i64::max);
        let mut tail = interpolate(&l[n], &meet);
        tail.push(meet);
        d.extend(tail.iter().cloned());
        d2.extend(tail);
    } else if j == n {
        let join = elementwise(&l[n], &lp, i64::min);
        let mut tail = vec![join.clone()];
        tail.extend(interpolate(&join, &l[0]));
        d.extend(tail.iter().cloned());
        d2.extend(tail);
    } else {
        let tail = interpolate(&l[n], &l[0]);
        d.extend(tail.iter().cloned());
        d2.extend(tail);
    }
    Ok((XiChamber::new(d)?, XiChamber::new(d2)?))
}

/// The `2^n n!` chambers of the standard apartment through `(0; 0)`.
pub fn apartment_chambers_at_origin(n: usize) -> Vec<CoordChamber> {
    let basis = SymplecticBasis::standard(n);
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        for signs in 0u32..(1 << n) {
            let order: Vec<usize> = perm
                .iter()
                .enumerate()
                .map(|(k, &p)| if signs >> k & 1 == 1 { p + n } else { p })
                .collect();
            let mut lattices = vec![ApartmentVertex::from_exponents(basis.clone(), &vec![0; 2 * n])];
            let mut e = vec![1i64; 2 * n];
            for &c in &order {
                e[c] = 0;
                lattices.push(ApartmentVertex::from_exponents(basis.clone(), &e));
            }
            out.push(CoordChamber::new(lattices).expect("coordinate flag chamber"));
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    out
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// The other chamber of the apartment through the panel of `c` opposite
/// position `j`.
pub fn apartment_neighbor(c: &CoordChamber, j: usize) -> Result<CoordChamber> {
    let n = c.n();
    if j > n {
        return Err(Error::DomainError(format!("position {j} out of range")));
    }
    let l = &c.lattices;
    let basis = l[0].basis.clone();
    let mut found = Vec::new();
    if j == 0 {
        // primitive (x; -x) with tX ⊆ L_1 and L_n ⊆ X
        let (a1, b1) = (&l[1].a, &l[1].b);
        let (an, bn) = (&l[n].a, &l[n].b);
        let ranges: Vec<(i64, i64)> = (0..n)
            .map(|i| ((a1[i] - 1).max(-bn[i]), an[i].min(1 - b1[i])))
            .collect();
        let mut x: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        'outer: loop {
            if ranges.iter().all(|r| r.0 <= r.1) {
                let cand = ApartmentVertex::in_basis(basis.clone(), x.clone(), x.iter().map(|v| -v).collect())?;
                if !cand.same_class(&l[0]) {
                    found.push(cand);
                }
            } else {
                break;
            }
            for i in 0..n {
                if x[i] < ranges[i].1 {
                    x[i] += 1;
                    continue 'outer;
                }
                x[i] = ranges[i].0;
            }
            break;
        }
    } else {
        let lower = if j == 1 { l[0].scaled(1) } else { l[j - 1].clone() };
        let upper = if j == n { l[0].clone() } else { l[j + 1].clone() };
        let (le, ue) = (lower.exponents(), upper.exponents());
        for i in 0..le.len() {
            if le[i] > ue[i] {
                let mut e = le.clone();
                e[i] -= 1;
                let x = ApartmentVertex::from_exponents(basis.clone(), &e);
                if x.sums().iter().all(|&s| s >= 1) && e != ue && !x.same_class(&l[j]) {
                    found.push(x);
                }
            }
        }
    }
    if found.len() != 1 {
        return Err(Error::DomainError(format!(
            "panel has {} other chambers in the apartment",
            found.len()
        )));
    }
    let mut lattices = l.clone();
    lattices[j] = found.pop().unwrap();
    CoordChamber::new(lattices)
}

/// Outcome of checking a lifted gallery on realized lattices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftCheck {
    /// Every step of both chains has index `q`, computed on lattices.
    pub chain_indices: bool,
    pub d_contains_c: bool,
    pub d2_contains_c2: bool,
    /// Distinct vertex classes shared by `D` and `D'`.
    pub shared: usize,
    /// `D` and `D'` share a panel (or coincide when `C = C'`).
    pub adjacent: bool,
}

impl LiftCheck {
    pub fn ok(&self) -> bool {
        self.chain_indices && self.d_contains_c && self.d2_contains_c2 && self.adjacent
    }
}

/// Checks a lift with lattice arithmetic rather than coordinates.
pub fn check_lift(
    ring: &TruncRing,
    c: &CoordChamber,
    c2: &CoordChamber,
    d: &XiChamber,
    d2: &XiChamber,
) -> Result<LiftCheck> {
    let classes = |vs: &[ApartmentVertex]| -> Result<Vec<HomothetyClass>> {
        vs.iter().map(|v| Ok(v.realize(ring)?.class())).collect()
    };
    let mut chain_indices = true;
    for x in [d, d2] {
        let reps: Vec<_> = x.lattices.iter().map(|v| v.realize(ring)).collect::<Result<_>>()?;
        let mut steps = vec![reps[0].scaled(1)];
        steps.extend(reps[1..].iter().cloned());
        steps.push(reps[0].clone());
        for w in steps.windows(2) {
            chain_indices &= index(ring, &w[0], &w[1])? == 1;
        }
    }
    let dc: BTreeSet<HomothetyClass> = classes(&d.lattices)?.into_iter().collect();
    let d2c: BTreeSet<HomothetyClass> = classes(&d2.lattices)?.into_iter().collect();
    let cc: BTreeSet<HomothetyClass> = classes(&c.lattices)?.into_iter().collect();
    let c2c: BTreeSet<HomothetyClass> = classes(&c2.lattices)?.into_iter().collect();
    let shared = dc.intersection(&d2c).count();
    let full = dc.len();
    let adjacent = if cc == c2c {
        dc == d2c
    } else {
        shared + 1 == full && d2c.len() == full
    };
    Ok(LiftCheck {
        chain_indices,
        d_contains_c: cc.is_subset(&dc),
        d2_contains_c2: c2c.is_subset(&d2c),
        shared,
        adjacent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_chambers() {
        assert_eq!(apartment_chambers_at_origin(2).len(), 8);
        assert_eq!(apartment_chambers_at_origin(3).len(), 48);
    }

    #[test]
    fn neighbours_are_involutive() {
        for c in apartment_chambers_at_origin(2) {
            for j in 0..=2 {
                let c2 = apartment_neighbor(&c, j).unwrap();
                assert_ne!(c2, c);
                let back = apartment_neighbor(&c2, j).unwrap();
                assert!(back.lattices.iter().zip(&c.lattices).all(|(a, b)| a.same_class(b)));
            }
        }
    }

    #[test]
    fn three_cases_lift() {
        let ring = TruncRing::with_default_precision(2).unwrap();
        let c = &apartment_chambers_at_origin(2)[0];
        for j in 0..=2 {
            let c2 = apartment_neighbor(c, j).unwrap();
            let (d, d2) = lift_gallery(c, &c2).unwrap();
            assert!(d.contains(c) && d2.contains(&c2));
            assert_eq!(d.shared_vertices(&d2), 3);
            assert!(check_lift(&ring, c, &c2, &d, &d2).unwrap().ok());
        }
        let (d, d2) = lift_gallery(c, c).unwrap();
        assert_eq!(d, d2);
        assert!(check_lift(&ring, c, c, &d, &d2).unwrap().ok());
    }

    #[test]
    fn non_adjacent_pairs_are_rejected() {
        let cs = apartment_chambers_at_origin(2);
        let c = &cs[0];
        let far = apartment_neighbor(&apartment_neighbor(c, 0).unwrap(), 1).unwrap();
        assert_eq!(lift_gallery(c, &far).unwrap_err(), Error::NotAdjacent);
        let other = SymplecticBasis::new_unchecked(crate::lattice::LaurentMatrix::diagonal(&[0, 0, 0, 1]));
        let moved = CoordChamber {
            lattices: c
                .lattices
                .iter()
                .map(|v| ApartmentVertex::from_exponents(other.clone(), &v.exponents()))
                .collect(),
        };
        assert_eq!(lift_gallery(c, &moved).unwrap_err(), Error::NotInCommonApartment);
    }
}
