//! Independent brute-force oracles, written with plain mod-p arithmetic and
//! compared against the library enumerations.

use std::collections::BTreeSet;

use lattice_buildings::gfq::{enumerate_complete_flags, enumerate_isotropic_flags, gf_init, GramForm};
use lattice_buildings::lattice::{
    lattice_from_generators, LatticeRep, TruncRing, DEFAULT_ENUMERATION_CAP,
};
use lattice_buildings::sl::close_vertices;
use lattice_buildings::sp::sp_close_vertices;

type V = Vec<u32>;

fn all_vectors(m: usize, p: u32) -> Vec<V> {
    let mut out = vec![vec![]];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..p).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}

fn rank(rows: &[V], p: u32) -> usize {
    let mut a: Vec<V> = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..a.len()).find(|&i| !a[i][c].is_multiple_of(p)) else {
            continue;
        };
        a.swap(r, piv);
        let inv = (1..p).find(|x| x * a[r][c] % p == 1).unwrap();
        for i in 0..a.len() {
            if i != r && !a[i][c].is_multiple_of(p) {
                let k = a[i][c] * inv % p;
                for j in 0..cols {
                    a[i][j] = (a[i][j] + p * p - k * a[r][j] % p) % p;
                }
            }
        }
        r += 1;
    }
    r
}

/// `<u, v>` for `J = [[0, I], [-I, 0]]`.
fn pair(u: &[u32], v: &[u32], p: u32) -> u32 {
    let n = u.len() / 2;
    (0..n).fold(0, |acc, i| (acc + u[i] * v[n + i] + p * p - u[n + i] * v[i] % p) % p)
}

/// Ordered bases adapted to a flag, counted by depth-first search.
fn adapted_sequences(vs: &[V], p: u32, depth: usize, isotropic: bool, prefix: &mut Vec<V>) -> u64 {
    if prefix.len() == depth {
        return 1;
    }
    let mut total = 0;
    for v in vs {
        if isotropic && prefix.iter().any(|u| pair(u, v, p) != 0) {
            continue;
        }
        prefix.push(v.clone());
        if rank(prefix, p) == prefix.len() {
            total += adapted_sequences(vs, p, depth, isotropic, prefix);
        }
        prefix.pop();
    }
    total
}

/// Flags of length `depth` as adapted sequences divided by the sequences per flag.
fn flag_count(m: usize, p: u32, depth: usize, isotropic: bool) -> u64 {
    let vs: Vec<V> = all_vectors(m, p).into_iter().filter(|v| v.iter().any(|&c| c != 0)).collect();
    let per_flag: u64 = (1..=depth as u32).map(|i| p.pow(i) as u64 - p.pow(i - 1) as u64).product();
    let seqs = adapted_sequences(&vs, p, depth, isotropic, &mut Vec::new());
    assert_eq!(seqs % per_flag, 0);
    seqs / per_flag
}

#[test]
fn complete_flags_match_brute_force() {
    for (m, p) in [(2, 2), (3, 2), (3, 3), (4, 2)] {
        let f = gf_init(p).unwrap();
        let expected = flag_count(m, p, m - 1, false);
        assert_eq!(enumerate_complete_flags(&f, m).len() as u64, expected, "m={m} p={p}");
    }
}

#[test]
fn isotropic_flags_match_brute_force() {
    for (n, p, known) in [(1, 2, 3), (2, 2, 45), (2, 3, 160), (3, 2, 2835)] {
        let f = gf_init(p).unwrap();
        let expected = flag_count(2 * n, p, n, true);
        assert_eq!(expected, known);
        let got = enumerate_isotropic_flags(&f, &GramForm::standard(&f, n)).unwrap();
        assert_eq!(got.len() as u64, expected, "n={n} p={p}");
    }
}

/// Lattices `M` with `[L : L ∩ M] = q = [L + M : L]` for `L = O^m`, built
/// directly: a line `<y>` of `t^{-1}L / L`, a hyperplane `H ⊇ <y>` of `L / tL`
/// and a coset `h` of `H`, giving `M = tL + H + O (t^{-1} y + h)`.
/// Each generator is returned as `(coefficient of t^{-1}, of t^0, of t^1)`.
fn direct_close_lattices(m: usize, p: u32) -> Vec<Vec<[V; 3]>> {
    let normalized = |v: &V| v.iter().find(|&&c| c != 0) == Some(&1);
    let nonzero: Vec<V> = all_vectors(m, p).into_iter().filter(normalized).collect();
    let e = |i: usize| -> V {
        let mut v = vec![0; m];
        v[i] = 1;
        v
    };
    let zero = vec![0; m];
    let mut out = Vec::new();
    for y in &nonzero {
        for phi in &nonzero {
            let dot = y.iter().zip(phi).map(|(a, b)| a * b).sum::<u32>() % p;
            if dot != 0 {
                continue;
            }
            let piv = phi.iter().position(|&c| c != 0).unwrap();
            let h_basis: Vec<V> = (0..m)
                .filter(|&j| j != piv)
                .map(|j| {
                    let mut v = e(j);
                    v[piv] = (p - phi[j]) % p;
                    v
                })
                .collect();
            for c in 0..p {
                let mut gens: Vec<[V; 3]> = (0..m).map(|i| [zero.clone(), zero.clone(), e(i)]).collect();
                gens.extend(h_basis.iter().map(|h| [zero.clone(), h.clone(), zero.clone()]));
                let h: V = e(piv).iter().map(|x| x * c % p).collect();
                gens.push([y.clone(), h, zero.clone()]);
                out.push(gens);
            }
        }
    }
    out
}

fn to_lattice(ring: &TruncRing, gens: &[[V; 3]]) -> LatticeRep {
    let m = gens[0][0].len();
    // multiply by t so that coefficients start at t^0, and undo it with the shift
    let rows: Vec<Vec<Vec<u8>>> = (0..m)
        .map(|r| gens.iter().map(|g| vec![g[0][r] as u8, g[1][r] as u8, g[2][r] as u8]).collect())
        .collect();
    lattice_from_generators(ring, &rows, -1).unwrap()
}

/// `<M, M> ⊆ O` and the form mod `t` has full rank on the generators.
fn primitive_by_generators(gens: &[[V; 3]], p: u32) -> bool {
    let k = gens.len();
    let m = gens[0][0].len();
    let mut low = false;
    let mut g0 = vec![vec![0; k]; k];
    for a in 0..k {
        for b in 0..k {
            // coefficient of t^{i + j - 2} in <x_a, y_b>
            let coeff = |d: usize| {
                (0..3)
                    .filter(|&i| d >= i && d - i < 3)
                    .fold(0, |acc, i| (acc + pair(&gens[a][i], &gens[b][d - i], p)) % p)
            };
            if coeff(0) != 0 || coeff(1) != 0 {
                low = true;
            }
            g0[a][b] = coeff(2);
        }
    }
    !low && rank(&g0, p) == m
}

#[test]
fn sl_close_vertices_match_direct_construction() {
    for (n, q, omega) in [(3, 2, 42), (3, 3, 156), (4, 2, 210)] {
        let ring = TruncRing::with_default_precision(q).unwrap();
        for x in 0..q {
            assert_eq!(ring.field().from_int(x as i64), x as u8);
        }
        let direct: BTreeSet<LatticeRep> = direct_close_lattices(n, q)
            .iter()
            .map(|g| to_lattice(&ring, g))
            .collect();
        assert_eq!(direct.len(), omega);
        let t = LatticeRep::standard(&ring, n).class();
        let got: BTreeSet<LatticeRep> = close_vertices(&ring, &t, DEFAULT_ENUMERATION_CAP)
            .unwrap()
            .into_iter()
            .collect();
        assert_eq!(got, direct, "n={n} q={q}");
    }
}

#[test]
fn sp_close_vertices_match_direct_construction() {
    for (n, q, omega) in [(2, 2, 30), (2, 3, 120), (3, 2, 126)] {
        let ring = TruncRing::with_default_precision(q).unwrap();
        let direct: BTreeSet<LatticeRep> = direct_close_lattices(2 * n, q)
            .iter()
            .filter(|g| primitive_by_generators(g, q))
            .map(|g| to_lattice(&ring, g))
            .collect();
        assert_eq!(direct.len(), omega);
        let t = LatticeRep::standard(&ring, 2 * n).class();
        let got = sp_close_vertices(&ring, &t, DEFAULT_ENUMERATION_CAP).unwrap();
        assert!(got.off_type.is_empty());
        let got: BTreeSet<LatticeRep> = got.close.into_iter().collect();
        assert_eq!(got, direct, "n={n} q={q}");
    }
}
