//! Exact real arithmetic kernel.
//!
//! An [`ExactReal`] is a rational, an element of a real quadratic field
//! ℚ(√d), or a directed-precision dyadic interval. Rational and quadratic
//! values support decidable comparison and floor; interval values decide
//! comparisons only when their bounds separate, and report
//! `PrecisionExhausted` otherwise instead of guessing.

pub mod dyadic;
pub mod quad;

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use dyadic::{DyInterval, Dyadic, Round};
pub use quad::{Quad, QuadValue};

/// Default starting precision for bracket refinement loops, in bits.
pub const DEFAULT_PRECISION: u32 = 128;
/// Default refinement budget, in bits; doubling stops at this width.
pub const DEFAULT_PRECISION_BUDGET: u32 = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactReal {
    Rational(BigRational),
    Quadratic(Quad),
    Interval(IntervalValue),
}

/// A static dyadic enclosure with its certified width exponent:
/// `hi - lo <= 2^-precision`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalValue {
    iv: DyInterval,
    precision: u32,
}

impl IntervalValue {
    pub fn new(iv: DyInterval) -> Self {
        let w = iv.width();
        let precision = if w.is_zero() {
            u32::MAX
        } else {
            let lg = w.log2_floor();
            if lg >= 0 {
                0
            } else {
                u32::try_from(-lg - 1).unwrap_or(u32::MAX)
            }
        };
        IntervalValue { iv, precision }
    }

    pub fn bracket(&self) -> &DyInterval {
        &self.iv
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }
}

impl ExactReal {
    pub fn zero() -> Self {
        ExactReal::Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactReal::Rational(BigRational::one())
    }

    pub fn from_int<T: Into<BigInt>>(n: T) -> Self {
        ExactReal::Rational(BigRational::from_integer(n.into()))
    }

    pub fn from_ratio<T: Into<BigInt>, U: Into<BigInt>>(p: T, q: U) -> Result<Self> {
        let q: BigInt = q.into();
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(ExactReal::Rational(BigRational::new(p.into(), q)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        ExactReal::Rational(r)
    }

    /// `(a + b*sqrt(d)) / c`; collapses to the rational kind when the
    /// radical cancels.
    pub fn quadratic<A, B, C>(a: A, b: B, c: C, d: u64) -> Result<Self>
    where
        A: Into<BigInt>,
        B: Into<BigInt>,
        C: Into<BigInt>,
    {
        match Quad::new(a.into(), b.into(), c.into(), d)? {
            QuadValue::Rational(p, q) => ExactReal::from_ratio(p, q),
            QuadValue::Quadratic(q) => Ok(ExactReal::Quadratic(q)),
        }
    }

    pub fn interval(iv: DyInterval) -> Self {
        ExactReal::Interval(IntervalValue::new(iv))
    }

    fn from_quad_value(v: QuadValue) -> Result<Self> {
        match v {
            QuadValue::Rational(p, q) => ExactReal::from_ratio(p, q),
            QuadValue::Quadratic(q) => Ok(ExactReal::Quadratic(q)),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ExactReal::Rational(r) => r.is_zero(),
            ExactReal::Quadratic(_) => false, // b != 0 invariant
            ExactReal::Interval(v) => v.iv.is_point() && v.iv.lo().is_zero(),
        }
    }

    pub fn is_integer(&self) -> bool {
        matches!(self, ExactReal::Rational(r) if r.is_integer())
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        match self {
            ExactReal::Rational(r) if r.is_integer() => Some(r.to_integer()),
            _ => None,
        }
    }

    /// Exact sign where decidable: -1, 0, 1.
    pub fn sign(&self) -> Result<i32> {
        match self {
            ExactReal::Rational(r) => Ok(sign_of(r)),
            ExactReal::Quadratic(q) => Ok(q.sign()),
            ExactReal::Interval(v) => {
                if v.iv.lo().is_positive() {
                    Ok(1)
                } else if v.iv.hi().is_negative() {
                    Ok(-1)
                } else if v.iv.is_point() && v.iv.lo().is_zero() {
                    Ok(0)
                } else {
                    Err(Error::PrecisionExhausted { budget_bits: v.precision })
                }
            }
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            ExactReal::Rational(r) => ExactReal::Rational(-r.clone()),
            ExactReal::Quadratic(q) => ExactReal::Quadratic(q.neg()),
            ExactReal::Interval(v) => ExactReal::interval(v.iv.neg()),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        use ExactReal::*;
        match (self, other) {
            (Rational(a), Rational(b)) => Ok(Rational(a + b)),
            (Rational(a), Quadratic(b)) | (Quadratic(b), Rational(a)) => {
                ExactReal::from_quad_value(b.add_ratio(a.numer(), a.denom())?)
            }
            (Quadratic(a), Quadratic(b)) => ExactReal::from_quad_value(a.add(b)?),
            (a, b) => {
                let prec = interval_prec(a, b);
                let (x, y) = (a.to_dyadic(prec)?, b.to_dyadic(prec)?);
                Ok(ExactReal::interval(x.add(&y, prec)))
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        use ExactReal::*;
        match (self, other) {
            (Rational(a), Rational(b)) => Ok(Rational(a * b)),
            (Rational(a), Quadratic(b)) | (Quadratic(b), Rational(a)) => {
                if a.is_zero() {
                    return Ok(ExactReal::zero());
                }
                ExactReal::from_quad_value(b.mul_ratio(a.numer(), a.denom())?)
            }
            (Quadratic(a), Quadratic(b)) => ExactReal::from_quad_value(a.mul(b)?),
            (a, b) => {
                let prec = interval_prec(a, b);
                let (x, y) = (a.to_dyadic(prec)?, b.to_dyadic(prec)?);
                Ok(ExactReal::interval(x.mul(&y, prec)))
            }
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        use ExactReal::*;
        match other {
            Rational(r) if r.is_zero() => return Err(Error::DivisionByZero),
            _ => {}
        }
        match (self, other) {
            (Rational(a), Rational(b)) => Ok(Rational(a / b)),
            (Quadratic(a), Rational(b)) => {
                ExactReal::from_quad_value(a.mul_ratio(b.denom(), b.numer())?)
            }
            (Rational(_), Quadratic(b)) | (Quadratic(_), Quadratic(b)) => {
                let inv = ExactReal::from_quad_value(b.inv()?)?;
                self.mul(&inv)
            }
            (a, b) => {
                let prec = interval_prec(a, b);
                let (x, y) = (a.to_dyadic(prec)?, b.to_dyadic(prec)?);
                Ok(ExactReal::interval(x.div(&y, prec)?))
            }
        }
    }

    /// Integer power; negative exponents require a nonzero value.
    pub fn pow_i64(&self, k: i64) -> Result<Self> {
        if k == 0 {
            return Ok(ExactReal::one());
        }
        let base = if k < 0 { ExactReal::one().div(self)? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = ExactReal::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b)?;
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b)?;
            }
        }
        Ok(acc)
    }

    /// Exact floor for the exact kinds; interval kinds succeed only when
    /// both bounds agree on the floor.
    pub fn floor(&self) -> Result<BigInt> {
        match self {
            ExactReal::Rational(r) => Ok(r.floor().to_integer()),
            ExactReal::Quadratic(q) => Ok(q.floor()),
            ExactReal::Interval(v) => {
                let lo = v.iv.lo().floor_int();
                let hi = v.iv.hi().floor_int();
                if lo == hi {
                    Ok(lo)
                } else {
                    Err(Error::PrecisionExhausted { budget_bits: v.precision })
                }
            }
        }
    }

    /// Exact trichotomy where decidable. Interval kinds compare when the
    /// enclosures separate; `EQ` is never inferred from overlapping
    /// enclosures.
    pub fn compare(&self, other: &Self) -> Result<Ordering> {
        use ExactReal::*;
        match (self, other) {
            (Rational(a), Rational(b)) => Ok(a.cmp(b)),
            (Rational(a), Quadratic(b)) => Ok(b.cmp_ratio(a.numer(), a.denom()).reverse()),
            (Quadratic(a), Rational(b)) => Ok(a.cmp_ratio(b.numer(), b.denom())),
            (Quadratic(a), Quadratic(b)) => a.cmp(b),
            (a, b) => {
                // At least one static interval: refine the exact side only.
                let both_static =
                    matches!(a, Interval(_)) && matches!(b, Interval(_));
                let mut prec = DEFAULT_PRECISION;
                loop {
                    let x = a.to_dyadic(prec)?;
                    let y = b.to_dyadic(prec)?;
                    if let Some(ord) = x.try_cmp(&y) {
                        return Ok(ord);
                    }
                    if both_static || prec >= DEFAULT_PRECISION_BUDGET {
                        return Err(Error::PrecisionExhausted {
                            budget_bits: DEFAULT_PRECISION_BUDGET,
                        });
                    }
                    prec *= 2;
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        matches!(self.sign(), Ok(s) if s > 0)
    }

    /// Rigorous dyadic enclosure; for exact kinds the width shrinks below
    /// `2^-prec`, for interval kinds the stored enclosure is returned as is.
    pub fn to_dyadic(&self, prec: u32) -> Result<DyInterval> {
        match self {
            ExactReal::Rational(r) => {
                let lo = Dyadic::from_ratio(r.numer(), r.denom(), prec, Round::Down)?;
                let hi = Dyadic::from_ratio(r.numer(), r.denom(), prec, Round::Up)?;
                Ok(DyInterval::new(lo, hi))
            }
            ExactReal::Quadratic(q) => Ok(q.to_dyadic_width(prec)),
            ExactReal::Interval(v) => Ok(v.iv.clone()),
        }
    }

    /// Correctly rounded decimal rendering with `digits` fractional digits.
    pub fn to_decimal(&self, digits: u32) -> Result<String> {
        if digits < 1 {
            return Err(Error::Domain("to_decimal requires digits >= 1"));
        }
        let pow10 = BigInt::from(10u32).pow(digits);
        match self {
            ExactReal::Rational(r) => {
                // floor(|v| + 1/2) = floor((2|p| + q) / 2q), half away from zero
                let scaled = r * BigRational::from_integer(pow10);
                let p2 = scaled.numer().magnitude() * 2u32;
                let q = scaled.denom().magnitude();
                let n_mag = (p2 + q) / (q * 2u32);
                let n = if scaled.is_negative() {
                    -BigInt::from(n_mag)
                } else {
                    BigInt::from(n_mag)
                };
                Ok(dyadic::format_scaled_decimal(&n, digits))
            }
            ExactReal::Quadratic(q) => {
                // irrational: refinement always separates from the rounding
                // boundary eventually
                let mut prec = DEFAULT_PRECISION.max(4 * digits);
                loop {
                    let iv = q.to_dyadic_width(prec);
                    let lo = dyadic::decimal_of_dyadic(iv.lo(), digits);
                    let hi = dyadic::decimal_of_dyadic(iv.hi(), digits);
                    if lo == hi {
                        return Ok(lo);
                    }
                    if prec >= DEFAULT_PRECISION_BUDGET * 4 {
                        return Err(Error::PrecisionExhausted {
                            budget_bits: DEFAULT_PRECISION_BUDGET * 4,
                        });
                    }
                    prec *= 2;
                }
            }
            ExactReal::Interval(v) => {
                let lo = dyadic::decimal_of_dyadic(v.iv.lo(), digits);
                let hi = dyadic::decimal_of_dyadic(v.iv.hi(), digits);
                if lo == hi {
                    Ok(lo)
                } else {
                    Err(Error::PrecisionExhausted { budget_bits: v.precision })
                }
            }
        }
    }
}

fn sign_of(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_negative() {
        -1
    } else {
        1
    }
}

fn interval_prec(a: &ExactReal, b: &ExactReal) -> u32 {
    let p = |x: &ExactReal| match x {
        ExactReal::Interval(v) => v.precision.min(DEFAULT_PRECISION_BUDGET),
        _ => u32::MAX,
    };
    p(a).min(p(b)).min(DEFAULT_PRECISION_BUDGET).max(DEFAULT_PRECISION)
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactReal::Rational(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            ExactReal::Quadratic(q) => {
                let (a, b, c, d) = q.parts();
                write!(f, "({a}{:+}√{d})/{c}", BigIntDisplay(b))
            }
            ExactReal::Interval(v) => {
                write!(
                    f,
                    "[{};{}]@{}",
                    dyadic::decimal_of_dyadic(v.iv.lo(), 20),
                    dyadic::decimal_of_dyadic(v.iv.hi(), 20),
                    v.precision
                )
            }
        }
    }
}

struct BigIntDisplay<'a>(&'a BigInt);

impl fmt::Display for BigIntDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self.0, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(p: i64, q: i64) -> ExactReal {
        ExactReal::from_ratio(p, q).unwrap()
    }

    fn golden() -> ExactReal {
        ExactReal::quadratic(1, 1, 2, 5).unwrap()
    }

    #[test]
    fn floor_examples() {
        assert_eq!(rat(7, 2).floor().unwrap(), BigInt::from(3));
        assert_eq!(golden().floor().unwrap(), BigInt::from(1));
        assert_eq!(rat(-1, 3).floor().unwrap(), BigInt::from(-1));
    }

    #[test]
    fn compare_examples() {
        assert_eq!(rat(1, 2).compare(&rat(1, 2)).unwrap(), Ordering::Equal);
        assert_eq!(golden().compare(&rat(8, 5)).unwrap(), Ordering::Greater);
        // interval around pi at 64 bits vs 3
        let pi = ExactReal::interval(DyInterval::new(
            Dyadic::from_ratio(&BigInt::from(3_141_592_653i64), &BigInt::from(1_000_000_000i64), 64, Round::Down).unwrap(),
            Dyadic::from_ratio(&BigInt::from(3_141_592_654i64), &BigInt::from(1_000_000_000i64), 64, Round::Up).unwrap(),
        ));
        assert_eq!(pi.compare(&ExactReal::from_int(3)).unwrap(), Ordering::Greater);
    }

    #[test]
    fn to_decimal_examples() {
        assert_eq!(rat(1, 3).to_decimal(4).unwrap(), "0.3333");
        assert_eq!(golden().to_decimal(5).unwrap(), "1.61803");
        assert_eq!(ExactReal::zero().to_decimal(2).unwrap(), "0.00");
        assert_eq!(rat(2, 3).to_decimal(4).unwrap(), "0.6667");
        assert_eq!(rat(1, 8).to_decimal(2).unwrap(), "0.13"); // exact tie, away from zero
        assert_eq!(rat(-1, 8).to_decimal(2).unwrap(), "-0.13");
    }

    #[test]
    fn quadratic_arithmetic_collapses() {
        let phi = golden();
        // phi * phi - phi - 1 == 0
        let v = phi.mul(&phi).unwrap().sub(&phi).unwrap().sub(&ExactReal::one()).unwrap();
        assert!(v.is_zero());
        // phi + conjugate = 1: (1-√5)/2
        let conj = ExactReal::quadratic(1, -1, 2, 5).unwrap();
        assert_eq!(phi.add(&conj).unwrap(), ExactReal::one());
    }

    #[test]
    fn mixed_radicands_error() {
        let a = ExactReal::quadratic(0, 1, 1, 2).unwrap();
        let b = ExactReal::quadratic(0, 1, 1, 3).unwrap();
        assert!(matches!(a.add(&b), Err(Error::MixedRadicands { left: 2, right: 3 })));
    }

    #[test]
    fn interval_mixing_yields_interval() {
        let iv = ExactReal::interval(DyInterval::new(
            Dyadic::from_i64(1),
            Dyadic::new(BigInt::from(5), -2),
        ));
        let out = iv.add(&rat(1, 2)).unwrap();
        assert!(matches!(out, ExactReal::Interval(_)));
        // equality is never inferred for overlapping intervals
        assert!(matches!(
            iv.compare(&ExactReal::from_int(1)),
            Err(Error::PrecisionExhausted { .. })
        ));
    }

    #[test]
    fn interval_refinement_is_nested() {
        let phi = golden();
        let coarse = phi.to_dyadic(32).unwrap();
        let fine = phi.to_dyadic(64).unwrap();
        assert!(coarse.lo().cmp(fine.lo()) != Ordering::Greater);
        assert!(coarse.hi().cmp(fine.hi()) != Ordering::Less);
    }

    proptest! {
        #[test]
        fn floor_sandwich_rational(p in -2000i64..2000, q in 1i64..200) {
            let x = rat(p, q);
            let n = x.floor().unwrap();
            let n = ExactReal::from_int(n);
            prop_assert!(n.compare(&x).unwrap() != Ordering::Greater);
            let n1 = n.add(&ExactReal::one()).unwrap();
            prop_assert!(n1.compare(&x).unwrap() == Ordering::Greater);
        }

        #[test]
        fn floor_sandwich_quadratic(a in -50i64..50, b in -20i64..20, c in 1i64..20, d in 2u64..30) {
            prop_assume!(b != 0);
            let x = ExactReal::quadratic(a, b, c, d).unwrap();
            let n = ExactReal::from_int(x.floor().unwrap());
            prop_assert!(n.compare(&x).unwrap() != Ordering::Greater);
            let n1 = n.add(&ExactReal::one()).unwrap();
            prop_assert!(n1.compare(&x).unwrap() == Ordering::Greater);
        }

        #[test]
        fn compare_total_order(
            vals in proptest::collection::vec((-30i64..30, -10i64..10, 1i64..10), 3)
        ) {
            // antisymmetry and transitivity on mixed rational/quadratic triples
            let mk = |t: &(i64, i64, i64)| ExactReal::quadratic(t.0, t.1, t.2, 5).unwrap();
            let x = mk(&vals[0]);
            let y = mk(&vals[1]);
            let z = mk(&vals[2]);
            let xy = x.compare(&y).unwrap();
            let yx = y.compare(&x).unwrap();
            prop_assert_eq!(xy, yx.reverse());
            let yz = y.compare(&z).unwrap();
            if xy != Ordering::Greater && yz != Ordering::Greater {
                prop_assert!(x.compare(&z).unwrap() != Ordering::Greater);
            }
        }

        #[test]
        fn arithmetic_matches_dyadic(a in -40i64..40, b in -15i64..15, c in 1i64..12, p in -50i64..50, q in 1i64..30) {
            prop_assume!(b != 0);
            let x = ExactReal::quadratic(a, b, c, 5).unwrap();
            let y = rat(p, q);
            let s = x.add(&y).unwrap();
            let iv_s = s.to_dyadic(80).unwrap();
            let manual = x.to_dyadic(100).unwrap().add(&y.to_dyadic(100).unwrap(), 100);
            // enclosures of the same value must intersect
            prop_assert!(iv_s.lo().cmp(manual.hi()) != Ordering::Greater);
            prop_assert!(manual.lo().cmp(iv_s.hi()) != Ordering::Greater);
        }
    }
}
