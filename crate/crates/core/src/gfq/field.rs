use crate::error::{Error, Result};

/// Largest field order supported by the table construction.
pub const MAX_ORDER: u32 = 9;

/// Element of a finite field, encoded as `0..q`.
///
/// For `q = p^e` with `e > 1` the element `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`
/// stands for the residue class `c_0 + c_1 x + ... + c_{e-1} x^{e-1}` modulo
/// the Conway polynomial of degree `e` over `F_p`.
pub type Elem = u8;

/// Defining polynomials for the non-prime fields below [`MAX_ORDER`], as
/// coefficient lists `[c_0, .., c_e]` of the monic Conway polynomial.
const CONWAY: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),    // x^2 + x + 1
    (2, 3, &[1, 1, 0, 1]), // x^3 + x + 1
    (3, 2, &[2, 2, 1]),    // x^2 + 2x + 2
];

/// Total addition and multiplication tables for `F_q`.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldTable {
    q: u32,
    p: u32,
    e: u32,
    modulus: Vec<u32>,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
}

impl std::fmt::Debug for FieldTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

impl FieldTable {
    /// Builds the tables for `F_q`. Fails unless `q` is a prime power no
    /// larger than [`MAX_ORDER`].
    pub fn new(q: u32) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > MAX_ORDER {
            return Err(Error::OrderTooLarge { q, bound: MAX_ORDER });
        }
        let modulus = if e == 1 {
            vec![0, 1]
        } else {
            CONWAY
                .iter()
                .find(|(pp, ee, _)| *pp == p && *ee == e)
                .map(|(_, _, c)| c.to_vec())
                .expect("Conway polynomial table covers every order up to MAX_ORDER")
        };
        let digits = |v: u32| -> Vec<u32> {
            let mut out = vec![0; e as usize];
            let mut v = v;
            for d in out.iter_mut() {
                *d = v % p;
                v /= p;
            }
            out
        };
        let encode = |d: &[u32]| -> u32 { d.iter().rev().fold(0, |acc, &c| acc * p + c) };

        let qs = q as usize;
        let mut add = vec![0; qs * qs];
        let mut mul = vec![0; qs * qs];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = encode(&sum) as Elem;

                let mut prod = vec![0u32; 2 * e as usize];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                // reduce modulo the monic defining polynomial
                for deg in (e as usize..prod.len()).rev() {
                    let c = prod[deg];
                    if c == 0 {
                        continue;
                    }
                    prod[deg] = 0;
                    for (k, m) in modulus.iter().take(e as usize).enumerate() {
                        let idx = deg - e as usize + k;
                        prod[idx] = (prod[idx] + (p - c) * m) % p;
                    }
                }
                mul[(a * q + b) as usize] = encode(&prod[..e as usize]) as Elem;
            }
        }
        let neg = (0..q)
            .map(|a| (0..q).find(|&b| add[(a * q + b) as usize] == 0).unwrap() as Elem)
            .collect();
        let inv = (0..q)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    (1..q)
                        .find(|&b| mul[(a * q + b) as usize] == 1)
                        .expect("field tables have inverses") as Elem
                }
            })
            .collect();
        Ok(Self {
            q,
            p,
            e,
            modulus,
            add,
            mul,
            neg,
            inv,
        })
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    /// Coefficients `[c_0, .., c_e]` of the defining polynomial (`[0, 1]` for prime fields).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; `inv(0)` is reported as 0.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q as Elem
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> {
        1..self.q as Elem
    }

    /// Image of the integer `k` under `Z -> F_q`.
    pub fn from_int(&self, k: i64) -> Elem {
        k.rem_euclid(self.p as i64) as Elem
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms(f: &FieldTable) {
        let els: Vec<Elem> = f.elements().collect();
        for &a in &els {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
            for &b in &els {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for &c in &els {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
        // no zero divisors
        for a in f.nonzero() {
            for b in f.nonzero() {
                assert_ne!(f.mul(a, b), 0);
            }
        }
    }

    #[test]
    fn all_supported_orders_are_fields() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            check_axioms(&FieldTable::new(q).unwrap());
        }
    }

    #[test]
    fn f2_one_plus_one() {
        let f = FieldTable::new(2).unwrap();
        assert_eq!(f.add(1, 1), 0);
    }

    #[test]
    fn f4_generator_squares_to_x_plus_one() {
        let f = FieldTable::new(4).unwrap();
        // x encodes as 2, x + 1 as 3
        assert_eq!(f.mul(2, 2), 3);
        assert_eq!(f.characteristic(), 2);
        assert_eq!(f.degree(), 2);
    }

    #[test]
    fn rejects_bad_orders() {
        assert_eq!(FieldTable::new(6), Err(Error::NotPrimePower(6)));
        assert_eq!(FieldTable::new(1), Err(Error::NotPrimePower(1)));
        assert_eq!(FieldTable::new(0), Err(Error::NotPrimePower(0)));
        assert_eq!(
            FieldTable::new(11),
            Err(Error::OrderTooLarge { q: 11, bound: 9 })
        );
    }

    #[test]
    fn multiplicative_groups_are_cyclic() {
        for q in [4u32, 8, 9] {
            let f = FieldTable::new(q).unwrap();
            let has_generator = f.nonzero().any(|g| {
                let mut x = g;
                let mut order = 1;
                while x != 1 {
                    x = f.mul(x, g);
                    order += 1;
                }
                order == q - 1
            });
            assert!(has_generator, "GF({q})");
        }
    }
}
