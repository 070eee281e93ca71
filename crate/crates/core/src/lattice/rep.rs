use std::fmt;

use serde::Serialize;

use super::poly::{
    is_zero, mul_trunc, shift_down, sub_mul_assign, truncated, unit_inverse, valuation, Poly,
};
use crate::error::{Error, Result};
use crate::gfq::{Elem, FieldTable};

/// `F_q[t]/(t^N)`: the coordinate ring for lattices over `F_q[[t]]`.
#[derive(Clone, Debug)]
pub struct TruncRing {
    field: FieldTable,
    precision: usize,
}

impl TruncRing {
    pub const DEFAULT_PRECISION: usize = 4;

    pub fn new(q: u32, precision: usize) -> Result<Self> {
        if precision == 0 {
            return Err(Error::DomainError("precision must be at least 1".into()));
        }
        Ok(Self {
            field: FieldTable::new(q)?,
            precision,
        })
    }

    pub fn with_default_precision(q: u32) -> Result<Self> {
        Self::new(q, Self::DEFAULT_PRECISION)
    }

    pub fn field(&self) -> &FieldTable {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn precision(&self) -> usize {
        self.precision
    }
}

/// A full-rank `O`-lattice `t^shift * (column span of a lower-triangular
/// Hermite matrix)` in `K^n`.
///
/// Column `j` has the pivot `t^{a_j}` in row `j`, zeros above it, and every
/// entry below the diagonal in row `r` reduced modulo `t^{a_r}`. The shift is
/// chosen so the smallest elementary divisor relative to `O^n` is zero, which
/// makes `(shift, columns)` a canonical key for the lattice.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LatticeRep {
    n: usize,
    shift: i64,
    cols: Vec<Vec<Poly>>,
    top: usize,
}

/// A vertex of the building of `SL_n`: the canonical representative with shift 0.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HomothetyClass(LatticeRep);

/// Elementary-divisor exponents of one lattice relative to another, weakly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RelPosition {
    pub exponents: Vec<i64>,
}

impl RelPosition {
    /// The same position after subtracting the smallest exponent.
    pub fn normalized(&self) -> RelPosition {
        let m = self.exponents.first().copied().unwrap_or(0);
        RelPosition {
            exponents: self.exponents.iter().map(|e| e - m).collect(),
        }
    }

    /// `(0, 1, .., 1, 2)`, the position of close vertices.
    pub fn is_close_shape(&self) -> bool {
        let e = &self.normalized().exponents;
        let n = e.len();
        n >= 2 && e[0] == 0 && e[n - 1] == 2 && e[1..n - 1].iter().all(|&x| x == 1)
    }
}

impl LatticeRep {
    /// `O^n`.
    pub fn standard(ring: &TruncRing, n: usize) -> Self {
        let cols = (0..n)
            .map(|j| {
                (0..n)
                    .map(|r| {
                        let mut p = vec![0; ring.precision];
                        if r == j {
                            p[0] = 1;
                        }
                        p
                    })
                    .collect()
            })
            .collect();
        Self {
            n,
            shift: 0,
            cols,
            top: 0,
        }
    }

    /// `t^{e_1} O + .. + t^{e_n} O` in the standard basis.
    pub fn diagonal(ring: &TruncRing, exps: &[i64]) -> Result<Self> {
        let n = exps.len();
        let base = exps.iter().copied().min().unwrap_or(0);
        let cols: Vec<Vec<Poly>> = (0..n)
            .map(|j| {
                (0..n)
                    .map(|r| {
                        if r == j {
                            let mut p = vec![0; (exps[j] - base) as usize + 1];
                            p[(exps[j] - base) as usize] = 1;
                            p
                        } else {
                            Vec::new()
                        }
                    })
                    .collect()
            })
            .collect();
        lattice_from_columns(ring, n, &cols, base)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// Hermite columns, each entry a polynomial with exactly `N` coefficients.
    pub fn columns(&self) -> &[Vec<Poly>] {
        &self.cols
    }

    /// Largest elementary divisor relative to `t^shift O^n`.
    pub fn top_exponent(&self) -> usize {
        self.top
    }

    /// Pivot exponents `a_0, .., a_{n-1}` of the Hermite form.
    pub fn pivot_exponents(&self) -> Vec<usize> {
        (0..self.n)
            .map(|j| valuation(&self.cols[j][j]).expect("Hermite pivots are non-zero"))
            .collect()
    }

    /// `ord(det g)` for any `g` with `g O^n = L`.
    pub fn ord_det(&self) -> i64 {
        self.pivot_exponents().iter().sum::<usize>() as i64 + self.n as i64 * self.shift
    }

    /// `t^k L`.
    pub fn scaled(&self, k: i64) -> Self {
        Self {
            shift: self.shift + k,
            ..self.clone()
        }
    }

    pub fn class(&self) -> HomothetyClass {
        HomothetyClass(self.scaled(-self.shift))
    }

    /// Column `j` of the generator matrix including the `t^shift` factor,
    /// as `(valuation offset, polynomials)`.
    pub fn generator(&self, j: usize) -> (i64, &[Poly]) {
        (self.shift, &self.cols[j])
    }
}

impl HomothetyClass {
    pub fn rep(&self) -> &LatticeRep {
        &self.0
    }

    pub fn into_rep(self) -> LatticeRep {
        self.0
    }
}

impl From<&LatticeRep> for HomothetyClass {
    fn from(l: &LatticeRep) -> Self {
        l.class()
    }
}

/// Writes a polynomial like `1+2t^2`.
fn fmt_poly(p: &[Elem], out: &mut String) {
    let mut first = true;
    for (i, &c) in p.iter().enumerate() {
        if c == 0 {
            continue;
        }
        if !first {
            out.push('+');
        }
        first = false;
        match (i, c) {
            (0, c) => out.push_str(&c.to_string()),
            (i, 1) => out.push_str(&if i == 1 { "t".into() } else { format!("t^{i}") }),
            (i, c) => out.push_str(&if i == 1 {
                format!("{c}t")
            } else {
                format!("{c}t^{i}")
            }),
        }
    }
    if first {
        out.push('0');
    }
}

impl fmt::Display for LatticeRep {
    /// `t^s[c_0 | c_1 | ..]` with each column listed top to bottom.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = format!("t^{}[", self.shift);
        for (j, col) in self.cols.iter().enumerate() {
            if j > 0 {
                s.push_str(" | ");
            }
            for (r, p) in col.iter().enumerate() {
                if r > 0 {
                    s.push(',');
                }
                fmt_poly(p, &mut s);
            }
        }
        s.push(']');
        f.write_str(&s)
    }
}

impl fmt::Debug for LatticeRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for HomothetyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0)
    }
}

impl fmt::Debug for HomothetyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Elementary-divisor exponents of the column span of `cols` (each a vector
/// of `n` polynomials) computed in `F_q[t]/(t^prec)`; `None` marks divisors
/// that vanish at this precision. Sorted, `None` last.
pub fn elementary_divisors(
    f: &FieldTable,
    n: usize,
    cols: &[Vec<Poly>],
    prec: usize,
) -> Vec<Option<usize>> {
    let k = cols.len();
    let mut m: Vec<Vec<Poly>> = (0..n)
        .map(|r| (0..k).map(|c| truncated(&cols[c][r], prec)).collect())
        .collect();
    let mut out = Vec::with_capacity(n);
    for s in 0..n {
        let mut best: Option<(usize, usize, usize)> = None;
        for (r, row) in m.iter().enumerate().skip(s) {
            for (c, e) in row.iter().enumerate().skip(s) {
                if let Some(v) = valuation(e) {
                    if best.is_none_or(|b| v < b.0) {
                        best = Some((v, r, c));
                    }
                }
            }
        }
        let Some((a, r, c)) = best else {
            out.extend((s..n).map(|_| None));
            break;
        };
        m.swap(s, r);
        for row in m.iter_mut() {
            row.swap(s, c);
        }
        let inv = unit_inverse(f, &shift_down(&m[s][s], a), prec);
        for row in m.iter_mut() {
            row[s] = mul_trunc(f, &row[s], &inv, prec);
        }
        for c in s + 1..k {
            let fac = shift_down(&m[s][c], a);
            if is_zero(&fac) {
                continue;
            }
            for row in m.iter_mut() {
                let pivot_col = row[s].clone();
                sub_mul_assign(f, &mut row[c], &fac, &pivot_col);
            }
        }
        for r in s + 1..n {
            let fac = shift_down(&m[r][s], a);
            if is_zero(&fac) {
                continue;
            }
            let pivot_row = m[s].clone();
            for (e, p) in m[r].iter_mut().zip(&pivot_row) {
                sub_mul_assign(f, e, &fac, p);
            }
        }
        out.push(Some(a));
    }
    out
}

/// Lower-triangular Hermite form of the column span, at precision `prec`.
/// `None` if some row has no pivot at this precision.
fn hermite(f: &FieldTable, n: usize, mut rest: Vec<Vec<Poly>>, prec: usize) -> Option<Vec<Vec<Poly>>> {
    let mut h: Vec<Vec<Poly>> = Vec::with_capacity(n);
    for i in 0..n {
        let (idx, a) = rest
            .iter()
            .enumerate()
            .filter_map(|(j, c)| valuation(&c[i]).map(|v| (j, v)))
            .min_by_key(|&(j, v)| (v, j))?;
        let mut piv = rest.swap_remove(idx);
        let inv = unit_inverse(f, &shift_down(&piv[i], a), prec);
        for e in piv.iter_mut() {
            *e = mul_trunc(f, e, &inv, prec);
        }
        for c in rest.iter_mut() {
            let fac = shift_down(&c[i], a);
            if is_zero(&fac) {
                continue;
            }
            for r in i..n {
                sub_mul_assign(f, &mut c[r], &fac, &piv[r]);
            }
        }
        rest.retain(|c| !c.iter().all(|p| is_zero(p)));
        h.push(piv);
    }
    for r in 1..n {
        let ar = valuation(&h[r][r]).expect("pivot");
        let pr = h[r].clone();
        for col in h.iter_mut().take(r) {
            let fac = shift_down(&col[r], ar);
            if is_zero(&fac) {
                continue;
            }
            for row in r..n {
                sub_mul_assign(f, &mut col[row], &fac, &pr[row]);
            }
        }
    }
    Some(h)
}

/// Canonical representative of `t^shift * (O-span of cols)`, where each
/// column is a vector of `n` polynomials of any length.
///
/// Elementary divisors are computed at increasing precision until they are
/// all visible; a span that stays degenerate is reported as singular.
pub fn lattice_from_columns(
    ring: &TruncRing,
    n: usize,
    cols: &[Vec<Poly>],
    shift: i64,
) -> Result<LatticeRep> {
    if n == 0 {
        return Err(Error::DomainError("lattices have positive rank".into()));
    }
    if let Some(c) = cols.iter().find(|c| c.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: c.len(),
        });
    }
    let f = ring.field();
    let big_n = ring.precision();
    let maxlen = cols
        .iter()
        .flat_map(|c| c.iter().map(Vec::len))
        .max()
        .unwrap_or(1)
        .max(1);
    let cap = n * maxlen + big_n + 2;
    let mut prec = big_n + 1;
    loop {
        let divs = elementary_divisors(f, n, cols, prec);
        if divs.iter().all(Option::is_some) && divs.len() == n {
            let dmin = divs[0].unwrap();
            let dmax = divs[n - 1].unwrap();
            let top = dmax - dmin;
            if top + 1 > big_n {
                return Err(Error::PrecisionOverflow {
                    needed: (top + 1) as u32,
                    available: big_n as u32,
                });
            }
            let truncated_cols = cols
                .iter()
                .map(|c| c.iter().map(|p| truncated(p, prec)).collect())
                .collect();
            let h = hermite(f, n, truncated_cols, prec).expect("full rank at this precision");
            let cols = h
                .into_iter()
                .map(|c| {
                    c.into_iter()
                        .map(|p| truncated(&shift_down(&p, dmin), big_n))
                        .collect()
                })
                .collect();
            return Ok(LatticeRep {
                n,
                shift: shift + dmin as i64,
                cols,
                top,
            });
        }
        if prec >= cap {
            return Err(Error::SingularMatrix);
        }
        prec = (2 * prec).min(cap);
    }
}

/// `lattice_from_columns` for a generator matrix given by its rows.
pub fn lattice_from_generators(
    ring: &TruncRing,
    rows: &[Vec<Poly>],
    shift: i64,
) -> Result<LatticeRep> {
    let n = rows.len();
    let k = rows.first().map_or(0, Vec::len);
    if let Some(r) = rows.iter().find(|r| r.len() != k) {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: r.len(),
        });
    }
    let cols: Vec<Vec<Poly>> = (0..k)
        .map(|c| rows.iter().map(|r| r[c].clone()).collect())
        .collect();
    lattice_from_columns(ring, n, &cols, shift)
}
