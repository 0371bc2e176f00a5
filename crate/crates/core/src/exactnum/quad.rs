//! Elements of a real quadratic field: `(a + b*sqrt(d)) / c`.
//!
//! Stored with `c > 0`, `gcd(a, b, c) = 1`, `b != 0` and `d` square-free
//! (values with `b == 0` collapse to the rational kind upstream). Sign and
//! comparison are decided exactly by squaring, never by approximation.

use core::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

use super::dyadic::{DyInterval, Dyadic};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quad {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: u64,
}

/// Outcome of constructing a quadratic element: the radical may cancel.
pub enum QuadValue {
    Rational(BigInt, BigInt),
    Quadratic(Quad),
}

/// Split `d = s^2 * f` with `f` square-free; returns `(s, f)`.
///
/// Trial division removes all prime factors up to 2^21; what remains has at
/// most three prime factors, each above 2^21, so it is square-free unless it
/// is a perfect square times a square-free part, which the final square and
/// cube probes detect exactly.
pub fn squarefree_split(d: u64) -> (u64, u64) {
    let mut s: u64 = 1;
    let mut f: u64 = 1;
    let mut n = d;
    let mut p: u64 = 2;
    while p < (1 << 21) && p * p <= n {
        if n % p == 0 {
            let mut e = 0u32;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            s *= p.pow(e / 2);
            if e % 2 == 1 {
                f *= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        let (rs, rf) = residual_squarefree(n);
        s *= rs;
        f *= rf;
    }
    (s, f)
}

/// Square-free split of a cofactor all of whose prime factors exceed 2^21
/// (so it has at most three prime factors, counted with multiplicity).
fn residual_squarefree(n: u64) -> (u64, u64) {
    let r = n.sqrt();
    if r * r == n {
        // q^2: r has no factor below 2^21 and r <= 2^32, so r is prime.
        return (r, 1);
    }
    let c = n.cbrt();
    if c * c * c == n {
        return (c, c);
    }
    // Remaining square shapes are q^2 * t or q * t^2; the smaller repeated
    // prime is below sqrt(n >> 21), so a bounded scan finds it.
    let bound = (n >> 21).sqrt();
    let mut q: u64 = (1 << 21) + 1;
    while q <= bound {
        if n % q == 0 {
            let m = n / q;
            if m % q == 0 {
                return (q, m / q);
            }
            let rm = m.sqrt();
            if rm * rm == m {
                return (rm, q);
            }
            return (1, n);
        }
        q += 2;
    }
    (1, n)
}

impl Quad {
    /// Build `(a + b*sqrt(d)) / c` exactly; reduces the radicand to its
    /// square-free kernel and the fraction to lowest terms.
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: u64) -> Result<QuadValue> {
        if c.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if d == 0 {
            return Ok(QuadValue::Rational(a, c));
        }
        let (s, f) = squarefree_split(d);
        let b = b * BigInt::from(s);
        if f <= 1 {
            return Ok(QuadValue::Rational(a + b, c));
        }
        if b.is_zero() {
            return Ok(QuadValue::Rational(a, c));
        }
        let (mut a, mut b, mut c) = (a, b, c);
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        Ok(QuadValue::Quadratic(Quad { a, b, c, d: f }))
    }

    pub fn parts(&self) -> (&BigInt, &BigInt, &BigInt, u64) {
        (&self.a, &self.b, &self.c, self.d)
    }

    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn add_ratio(&self, p: &BigInt, q: &BigInt) -> Result<QuadValue> {
        // (a + b√d)/c + p/q = (aq + pc + bq√d) / cq
        Quad::new(&self.a * q + p * &self.c, &self.b * q, &self.c * q, self.d)
    }

    pub fn add(&self, other: &Quad) -> Result<QuadValue> {
        if self.d != other.d {
            return Err(Error::MixedRadicands { left: self.d, right: other.d });
        }
        Quad::new(
            &self.a * &other.c + &other.a * &self.c,
            &self.b * &other.c + &other.b * &self.c,
            &self.c * &other.c,
            self.d,
        )
    }

    pub fn neg(&self) -> Quad {
        Quad { a: -&self.a, b: -&self.b, c: self.c.clone(), d: self.d }
    }

    pub fn mul_ratio(&self, p: &BigInt, q: &BigInt) -> Result<QuadValue> {
        Quad::new(&self.a * p, &self.b * p, &self.c * q, self.d)
    }

    pub fn mul(&self, other: &Quad) -> Result<QuadValue> {
        if self.d != other.d {
            return Err(Error::MixedRadicands { left: self.d, right: other.d });
        }
        let d = BigInt::from(self.d);
        Quad::new(
            &self.a * &other.a + &self.b * &other.b * &d,
            &self.a * &other.b + &self.b * &other.a,
            &self.c * &other.c,
            self.d,
        )
    }

    /// Multiplicative inverse: conjugate over the norm.
    pub fn inv(&self) -> Result<QuadValue> {
        // 1 / ((a + b√d)/c) = c(a - b√d) / (a^2 - b^2 d)
        let norm = &self.a * &self.a - &self.b * &self.b * BigInt::from(self.d);
        if norm.is_zero() {
            // impossible for b != 0 and square-free d >= 2
            return Err(Error::AssertionFailure("zero norm for a quadratic irrational"));
        }
        Quad::new(&self.c * &self.a, -(&self.c * &self.b), norm, self.d)
    }

    /// Exact sign of the value: -1, 0 or 1.
    pub fn sign(&self) -> i32 {
        // sign of a + b√d (c > 0)
        let sa = sign_i32(&self.a);
        let sb = sign_i32(&self.b);
        debug_assert!(sb != 0);
        if sa == sb {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        // opposite nonzero signs: compare a^2 against b^2 d
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * BigInt::from(self.d);
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0, // impossible: would make √d rational
        }
    }

    /// Exact comparison against the rational `p/q` (`q > 0`).
    pub fn cmp_ratio(&self, p: &BigInt, q: &BigInt) -> Ordering {
        // (a + b√d)/c - p/q has the sign of (aq - pc) + bq√d
        let t = Quad {
            a: &self.a * q - p * &self.c,
            b: &self.b * q,
            c: BigInt::one(),
            d: self.d,
        };
        match t.sign() {
            s if s < 0 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    pub fn cmp(&self, other: &Quad) -> Result<Ordering> {
        if self.d != other.d {
            return Err(Error::MixedRadicands { left: self.d, right: other.d });
        }
        let t = Quad {
            a: &self.a * &other.c - &other.a * &self.c,
            b: &self.b * &other.c - &other.b * &self.c,
            c: BigInt::one(),
            d: self.d,
        };
        Ok(if t.b.is_zero() {
            t.a.cmp(&BigInt::zero())
        } else {
            match t.sign() {
                s if s < 0 => Ordering::Less,
                0 => Ordering::Equal,
                _ => Ordering::Greater,
            }
        })
    }

    /// Exact floor, found from a dyadic estimate and verified by exact
    /// comparisons.
    pub fn floor(&self) -> BigInt {
        let iv = self.to_dyadic(64);
        let mut n = iv.lo().floor_int();
        // verify n <= x < n + 1, adjusting if the estimate straddled an integer
        loop {
            if self.cmp_ratio(&n, &BigInt::one()) == Ordering::Less {
                n -= 1;
                continue;
            }
            if self.cmp_ratio(&(&n + 1), &BigInt::one()) != Ordering::Less {
                n += 1;
                continue;
            }
            return n;
        }
    }

    /// Rigorous dyadic bracket of the value at roughly `prec` bits.
    pub fn to_dyadic(&self, prec: u32) -> DyInterval {
        let work = prec + 16;
        // √d in [r, r+1] * 2^-s with r = isqrt(d * 4^s)
        let s = work as u64;
        let scaled = BigUint::from(self.d) << (2 * s);
        let r = scaled.sqrt();
        let sqrt_iv = DyInterval::new(
            Dyadic::new(BigInt::from(r.clone()), -(s as i64)),
            Dyadic::new(BigInt::from(r + 1u32), -(s as i64)),
        );
        let b_iv = DyInterval::point(Dyadic::from_bigint(self.b.clone()));
        let a_iv = DyInterval::point(Dyadic::from_bigint(self.a.clone()));
        let num = a_iv.add(&b_iv.mul(&sqrt_iv, work), work);
        let c_iv = DyInterval::point(Dyadic::from_bigint(self.c.clone()));
        num.div(&c_iv, work).expect("c > 0")
    }

    /// Refine the bracket until its width is below `2^-prec` (always
    /// possible for an exact value).
    pub fn to_dyadic_width(&self, prec: u32) -> DyInterval {
        let mut p = prec + 8;
        loop {
            let iv = self.to_dyadic(p);
            let w = iv.width();
            if w.is_zero() || w.log2_floor() < -(prec as i64) {
                return iv;
            }
            p *= 2;
        }
    }
}

fn sign_i32(x: &BigInt) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_negative() {
        -1
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> Quad {
        match Quad::new(BigInt::from(1), BigInt::from(1), BigInt::from(2), 5).unwrap() {
            QuadValue::Quadratic(q) => q,
            _ => panic!("golden ratio is irrational"),
        }
    }

    #[test]
    fn squarefree_splits() {
        assert_eq!(squarefree_split(5), (1, 5));
        assert_eq!(squarefree_split(8), (2, 2));
        assert_eq!(squarefree_split(12), (2, 3));
        assert_eq!(squarefree_split(49), (7, 1));
        assert_eq!(squarefree_split(360), (6, 10));
        assert_eq!(squarefree_split(1), (1, 1));
        // large prime squared
        let p: u64 = 2_147_483_647;
        assert_eq!(squarefree_split(p * p), (p, 1));
        assert_eq!(squarefree_split(2 * p), (1, 2 * p));
    }

    #[test]
    fn radical_cancellation() {
        match Quad::new(BigInt::from(1), BigInt::from(3), BigInt::from(2), 4).unwrap() {
            QuadValue::Rational(p, q) => {
                assert_eq!(p, BigInt::from(7));
                assert_eq!(q, BigInt::from(2));
            }
            _ => panic!("sqrt(4) must collapse"),
        }
    }

    #[test]
    fn golden_identities() {
        let phi = golden();
        // phi^2 = phi + 1
        let sq = match phi.mul(&phi).unwrap() {
            QuadValue::Quadratic(q) => q,
            _ => panic!(),
        };
        let phi_plus_one = match phi.add_ratio(&BigInt::from(1), &BigInt::from(1)).unwrap() {
            QuadValue::Quadratic(q) => q,
            _ => panic!(),
        };
        assert_eq!(sq, phi_plus_one);
        // 1/phi = phi - 1
        let inv = match phi.inv().unwrap() {
            QuadValue::Quadratic(q) => q,
            _ => panic!(),
        };
        let phi_minus_one = match phi.add_ratio(&BigInt::from(-1), &BigInt::from(1)).unwrap() {
            QuadValue::Quadratic(q) => q,
            _ => panic!(),
        };
        assert_eq!(inv, phi_minus_one);
    }

    #[test]
    fn golden_floor_and_compare() {
        let phi = golden();
        assert_eq!(phi.floor(), BigInt::from(1));
        // phi > 8/5 (cross-multiplied and squared in cmp_ratio)
        assert_eq!(phi.cmp_ratio(&BigInt::from(8), &BigInt::from(5)), Ordering::Greater);
        // phi < 13/8
        assert_eq!(phi.cmp_ratio(&BigInt::from(13), &BigInt::from(8)), Ordering::Less);
        assert_eq!(phi.neg().floor(), BigInt::from(-2));
    }

    #[test]
    fn dyadic_bracket_tightness() {
        let phi = golden();
        let iv = phi.to_dyadic_width(100);
        let mid = iv.to_f64();
        assert!((mid - 1.618033988749895).abs() < 1e-12);
    }
}
