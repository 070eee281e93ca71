//! Polynomials over `F_q` as coefficient vectors (constant term first),
//! with the truncated arithmetic of `F_q[t]/(t^P)`.

use crate::gfq::{Elem, FieldTable};

pub type Poly = Vec<Elem>;

pub fn valuation(p: &[Elem]) -> Option<usize> {
    p.iter().position(|&c| c != 0)
}

pub fn is_zero(p: &[Elem]) -> bool {
    p.iter().all(|&c| c == 0)
}

/// Copy of `p` resized to exactly `prec` coefficients.
pub fn truncated(p: &[Elem], prec: usize) -> Poly {
    let mut out = vec![0; prec];
    let k = p.len().min(prec);
    out[..k].copy_from_slice(&p[..k]);
    out
}

/// `a * b mod t^prec`
pub fn mul_trunc(f: &FieldTable, a: &[Elem], b: &[Elem], prec: usize) -> Poly {
    let mut out = vec![0; prec];
    for (i, &x) in a.iter().enumerate().take(prec) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(prec - i) {
            if y != 0 {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
    }
    out
}

/// Full product of two polynomials.
pub fn mul_full(f: &FieldTable, a: &[Elem], b: &[Elem]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    mul_trunc(f, a, b, a.len() + b.len() - 1)
}

/// `a -= c * b mod t^prec`, with `a` of length `prec`.
pub fn sub_mul_assign(f: &FieldTable, a: &mut [Elem], c: &[Elem], b: &[Elem]) {
    let prec = a.len();
    for (i, &x) in c.iter().enumerate().take(prec) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(prec - i) {
            if y != 0 {
                a[i + j] = f.sub(a[i + j], f.mul(x, y));
            }
        }
    }
}

/// `a / t^k`, dropping the low coefficients (callers ensure they are zero when exactness matters).
pub fn shift_down(p: &[Elem], k: usize) -> Poly {
    p.get(k..).map(<[Elem]>::to_vec).unwrap_or_default()
}

/// `t^k * p mod t^prec`
pub fn shift_up(p: &[Elem], k: usize, prec: usize) -> Poly {
    let mut out = vec![0; prec];
    for (i, &c) in p.iter().enumerate() {
        if i + k < prec {
            out[i + k] = c;
        }
    }
    out
}

/// Inverse of a unit (non-zero constant term) modulo `t^prec`.
pub fn unit_inverse(f: &FieldTable, u: &[Elem], prec: usize) -> Poly {
    let u0inv = f.inv(u[0]);
    debug_assert!(u[0] != 0, "not a unit");
    let mut v = vec![0; prec];
    if prec == 0 {
        return v;
    }
    v[0] = u0inv;
    for k in 1..prec {
        let mut acc = 0;
        for i in 1..=k.min(u.len().saturating_sub(1)) {
            acc = f.add(acc, f.mul(u[i], v[k - i]));
        }
        v[k] = f.neg(f.mul(u0inv, acc));
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_one_plus_t() {
        let f = FieldTable::new(3).unwrap();
        let u = vec![1, 1];
        let v = unit_inverse(&f, &u, 5);
        // 1 - t + t^2 - t^3 + t^4
        assert_eq!(v, vec![1, 2, 1, 2, 1]);
        assert_eq!(mul_trunc(&f, &u, &v, 5), vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn valuation_and_shifts() {
        assert_eq!(valuation(&[0, 0, 2, 1]), Some(2));
        assert_eq!(valuation(&[0, 0]), None);
        assert_eq!(shift_down(&[0, 0, 2, 1], 2), vec![2, 1]);
        assert_eq!(shift_up(&[2, 1], 1, 3), vec![0, 2, 1]);
    }
}
