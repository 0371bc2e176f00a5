//! Dyadic numbers `mant * 2^exp` and outward-rounded interval arithmetic.
//!
//! These back every quantity in the crate that is not representable in
//! ℚ(√d): logarithms, rational powers of the base, and decimal rendering of
//! quadratic values. All interval operations round outward, so a returned
//! `DyInterval` always encloses the exact value.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Rounding direction for operations that drop low-order bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

/// An exact dyadic rational `mant * 2^exp`, normalized so that `mant` is odd
/// (or zero with `exp == 0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Dyadic::new(n, 0)
    }

    pub fn from_i64(n: i64) -> Self {
        Dyadic::new(BigInt::from(n), 0)
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn mant(&self) -> &BigInt {
        &self.mant
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    /// Number of significant bits of the mantissa.
    pub fn mant_bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Exponent of the leading bit: `2^(log2_floor) <= |self| < 2^(log2_floor+1)`.
    pub fn log2_floor(&self) -> i64 {
        debug_assert!(!self.is_zero());
        self.exp + self.mant.bits() as i64 - 1
    }

    pub fn neg(&self) -> Self {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let exp = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - exp) as u64;
        let b = &other.mant << (other.exp - exp) as u64;
        Dyadic::new(a + b, exp)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    pub fn cmp(&self, other: &Self) -> Ordering {
        match self.sub(other).mant.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }

    /// Round to at most `prec` mantissa bits in the given direction.
    pub fn round(&self, prec: u32, dir: Round) -> Self {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = bits - prec as u64;
        // BigInt >> is floor division by a power of two.
        let q = &self.mant >> shift;
        let exact = (&q << shift) == self.mant;
        let q = match (dir, exact) {
            (_, true) | (Round::Down, false) => q,
            (Round::Up, false) => q + 1,
        };
        Dyadic::new(q, self.exp + shift as i64)
    }

    /// Directed-rounding quotient `self / other` with ~`prec` result bits.
    pub fn div(&self, other: &Self, prec: u32, dir: Round) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Dyadic::zero());
        }
        let nbits = self.mant.bits() as i64;
        let dbits = other.mant.bits() as i64;
        let shift = (prec as i64 + 2 + dbits - nbits).max(0) as u64;
        let num = &self.mant << shift;
        let (q, r) = num.div_rem(&other.mant);
        // div_rem truncates toward zero; fix up to floor/ceil as requested.
        let q = if r.is_zero() {
            q
        } else {
            let quotient_negative = self.mant.is_negative() != other.mant.is_negative();
            match (dir, quotient_negative) {
                (Round::Down, true) => q - 1,
                (Round::Down, false) => q,
                (Round::Up, true) => q,
                (Round::Up, false) => q + 1,
            }
        };
        Ok(Dyadic::new(q, self.exp - other.exp - shift as i64))
    }

    /// Directed-rounding `p / q` for big integers, `q > 0`.
    pub fn from_ratio(p: &BigInt, q: &BigInt, prec: u32, dir: Round) -> Result<Self> {
        Dyadic::from_bigint(p.clone()).div(&Dyadic::from_bigint(q.clone()), prec, dir)
    }

    /// Floor of the dyadic value as a big integer.
    pub fn floor_int(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            &self.mant >> (-self.exp) as u64
        }
    }

    /// `n`-th root with directed rounding (`self >= 0`).
    pub fn nth_root(&self, n: u32, prec: u32, dir: Round) -> Result<Self> {
        if self.is_negative() {
            return Err(Error::Domain("nth_root of a negative value"));
        }
        if self.is_zero() {
            return Ok(Dyadic::zero());
        }
        debug_assert!(n >= 1);
        // Scale so the scaled exponent is divisible by n and the mantissa
        // carries enough bits for `prec` result bits.
        let want_bits = (prec as u64 + 2) * n as u64;
        let cur_bits = self.mant.bits();
        let mut shift = want_bits.saturating_sub(cur_bits);
        let mut exp = self.exp - shift as i64;
        let rem = exp.rem_euclid(n as i64);
        if rem != 0 {
            shift += rem as u64;
            exp -= rem;
        }
        debug_assert_eq!(exp.rem_euclid(n as i64), 0);
        let scaled: BigUint = (&self.mant << shift).to_biguint().expect("nonnegative");
        let root = scaled.nth_root(n);
        let exact = root.pow(n) == scaled;
        let root = BigInt::from(root);
        let root = match (dir, exact) {
            (_, true) | (Round::Down, false) => root,
            (Round::Up, false) => root + 1,
        };
        Ok(Dyadic::new(root, exp / n as i64))
    }

    /// Best-effort conversion for reporting; not used in exact paths.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r = self.round(53, Round::Down);
        let mut m: f64 = 0.0;
        // Accumulate limbs; the rounded mantissa has at most 53 bits.
        for (i, d) in r.mant.magnitude().to_u64_digits().iter().enumerate() {
            m += (*d as f64) * pow2_f64((64 * i) as i32);
        }
        if r.mant.is_negative() {
            m = -m;
        }
        let e = i32::try_from(r.exp).unwrap_or(if r.exp > 0 { 2000 } else { -2000 });
        m * pow2_f64(e)
    }
}

/// A closed interval `[lo, hi]` of dyadic rationals enclosing some real.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyInterval {
    lo: Dyadic,
    hi: Dyadic,
}

impl DyInterval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        debug_assert!(lo.cmp(&hi) != Ordering::Greater);
        DyInterval { lo, hi }
    }

    pub fn point(d: Dyadic) -> Self {
        DyInterval { lo: d.clone(), hi: d }
    }

    pub fn zero() -> Self {
        DyInterval::point(Dyadic::zero())
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn midpoint(&self) -> Dyadic {
        self.lo.add(&self.hi).mul_pow2(-1)
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn strictly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn neg(&self) -> Self {
        DyInterval { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn add(&self, other: &Self, prec: u32) -> Self {
        DyInterval {
            lo: self.lo.add(&other.lo).round(prec, Round::Down),
            hi: self.hi.add(&other.hi).round(prec, Round::Up),
        }
    }

    pub fn sub(&self, other: &Self, prec: u32) -> Self {
        self.add(&other.neg(), prec)
    }

    pub fn mul(&self, other: &Self, prec: u32) -> Self {
        let candidates = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let mut lo = candidates[0].clone();
        let mut hi = candidates[0].clone();
        for c in &candidates[1..] {
            if c.cmp(&lo) == Ordering::Less {
                lo = c.clone();
            }
            if c.cmp(&hi) == Ordering::Greater {
                hi = c.clone();
            }
        }
        DyInterval { lo: lo.round(prec, Round::Down), hi: hi.round(prec, Round::Up) }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        DyInterval { lo: self.lo.mul_pow2(k), hi: self.hi.mul_pow2(k) }
    }

    /// Interval division; the divisor must not contain zero.
    pub fn div(&self, other: &Self, prec: u32) -> Result<Self> {
        if other.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        let quots = [
            self.lo.div(&other.lo, prec, Round::Down)?,
            self.lo.div(&other.hi, prec, Round::Down)?,
            self.hi.div(&other.lo, prec, Round::Down)?,
            self.hi.div(&other.hi, prec, Round::Down)?,
        ];
        let quots_up = [
            self.lo.div(&other.lo, prec, Round::Up)?,
            self.lo.div(&other.hi, prec, Round::Up)?,
            self.hi.div(&other.lo, prec, Round::Up)?,
            self.hi.div(&other.hi, prec, Round::Up)?,
        ];
        let mut lo = quots[0].clone();
        for q in &quots[1..] {
            if q.cmp(&lo) == Ordering::Less {
                lo = q.clone();
            }
        }
        let mut hi = quots_up[0].clone();
        for q in &quots_up[1..] {
            if q.cmp(&hi) == Ordering::Greater {
                hi = q.clone();
            }
        }
        Ok(DyInterval { lo, hi })
    }

    /// Integer power for intervals with a nonnegative lower bound.
    pub fn pow_u32(&self, k: u32, prec: u32) -> Self {
        debug_assert!(!self.lo.is_negative());
        let mut acc = DyInterval::point(Dyadic::one());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base, prec);
            }
            base = base.mul(&base, prec);
            k >>= 1;
        }
        acc
    }

    /// `n`-th root of a nonnegative interval, rounded outward.
    pub fn nth_root(&self, n: u32, prec: u32) -> Result<Self> {
        Ok(DyInterval {
            lo: self.lo.nth_root(n, prec, Round::Down)?,
            hi: self.hi.nth_root(n, prec, Round::Up)?,
        })
    }

    /// Natural logarithm of a strictly positive interval.
    pub fn ln(&self, prec: u32) -> Result<Self> {
        if !self.strictly_positive() {
            return Err(Error::Domain("ln of a non-positive interval"));
        }
        let lo = ln_point(&self.lo, prec)?.lo;
        let hi = ln_point(&self.hi, prec)?.hi;
        Ok(DyInterval { lo, hi })
    }

    /// Exact comparison against another interval: `Some(ordering)` when the
    /// intervals are disjoint (or both points and equal), `None` otherwise.
    pub fn try_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.hi.cmp(&other.lo) == Ordering::Less {
            return Some(Ordering::Less);
        }
        if self.lo.cmp(&other.hi) == Ordering::Greater {
            return Some(Ordering::Greater);
        }
        if self.is_point() && other.is_point() && self.lo == other.lo {
            return Some(Ordering::Equal);
        }
        None
    }

    pub fn to_f64(&self) -> f64 {
        self.midpoint().to_f64()
    }

    /// Decimal rendering of the midpoint with `digits` fractional digits
    /// (round-to-nearest); used for reporting only.
    pub fn decimal_midpoint(&self, digits: u32) -> String {
        decimal_of_dyadic(&self.midpoint(), digits)
    }
}

/// `2^k` as an `f64`, saturating outside the representable range.
fn pow2_f64(k: i32) -> f64 {
    if k >= 1024 {
        f64::INFINITY
    } else if k < -1074 {
        0.0
    } else if k >= -1022 {
        f64::from_bits(((k + 1023) as u64) << 52)
    } else {
        f64::from_bits(1u64 << (k + 1074) as u64)
    }
}

/// Round-to-nearest decimal string of an exact dyadic value.
pub fn decimal_of_dyadic(d: &Dyadic, digits: u32) -> String {
    // value * 10^digits, rounded half away from zero.
    let pow10 = BigInt::from(10u32).pow(digits);
    let scaled = d.mul(&Dyadic::from_bigint(pow10));
    let mag = Dyadic { mant: BigInt::from(scaled.mant.magnitude().clone()), exp: scaled.exp };
    let n_mag: BigInt = (mag.mul_pow2(1).floor_int() + 1) >> 1;
    let n = if d.is_negative() { -n_mag } else { n_mag };
    format_scaled_decimal(&n, digits)
}

/// Format `n / 10^digits` with a fixed number of fractional digits.
pub fn format_scaled_decimal(n: &BigInt, digits: u32) -> String {
    let neg = n.is_negative();
    let mag = n.magnitude().to_str_radix(10);
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    let digits = digits as usize;
    if mag.len() > digits {
        s.push_str(&mag[..mag.len() - digits]);
    } else {
        s.push('0');
    }
    if digits > 0 {
        s.push('.');
        for _ in mag.len()..digits {
            s.push('0');
        }
        let start = mag.len().saturating_sub(digits);
        s.push_str(&mag[start..]);
    }
    s
}

/// Rigorous bracket of `ln x` for a positive dyadic point `x`.
///
/// Reduces to `x = m * 2^e` with `m` in `[1, 2)` and evaluates
/// `ln m = 2 atanh((m-1)/(m+1))` by series; the series argument lies in
/// `[0, 1/3)` so terms shrink by at least 1/9 per step.
pub fn ln_point(x: &Dyadic, prec: u32) -> Result<DyInterval> {
    if !x.is_positive() {
        return Err(Error::Domain("ln of a non-positive value"));
    }
    let work = prec + 32;
    let e = x.log2_floor();
    let m = x.mul_pow2(-e); // in [1, 2)
    let ln_m = ln_mantissa(&m, work)?;
    let ln2 = ln_two(work)?;
    let e_iv = DyInterval::point(Dyadic::from_i64(e));
    let out = ln_m.add(&e_iv.mul(&ln2, work), work);
    Ok(out)
}

/// Bracket of `ln m` for `m` in `[1, 2)` via the atanh series.
fn ln_mantissa(m: &Dyadic, work: u32) -> Result<DyInterval> {
    let one = DyInterval::point(Dyadic::one());
    let m_iv = DyInterval::point(m.clone());
    let num = m_iv.sub(&one, work);
    let den = m_iv.add(&one, work);
    let t = num.div(&den, work)?;
    atanh_series(&t, work)
}

/// Bracket of `2 atanh(t)` for `0 <= t <= 1/2`, with a rigorous tail bound.
fn atanh_series(t: &DyInterval, work: u32) -> Result<DyInterval> {
    debug_assert!(!t.lo.is_negative());
    if t.hi.is_zero() {
        return Ok(DyInterval::zero());
    }
    let t2 = t.mul(t, work);
    let mut term = t.clone();
    let mut sum = DyInterval::zero();
    let mut k: u32 = 0;
    loop {
        let coeff = DyInterval::point(Dyadic::from_i64(2 * k as i64 + 1));
        sum = sum.add(&term.div(&coeff, work)?, work);
        // Stop once the next term can no longer move `work` bits.
        let next = term.mul(&t2, work);
        if next.hi.is_zero() || next.hi.log2_floor() < sum.hi.log2_floor() - work as i64 - 4 {
            // Tail <= next * (1 / (1 - t^2)) termwise; with t <= 1/2 the
            // geometric factor is at most 4/3, bounded here by 2.
            let tail_hi = next.hi.mul_pow2(1);
            sum = DyInterval::new(sum.lo, sum.hi.add(&tail_hi).round(work, Round::Up));
            break;
        }
        term = next;
        k += 1;
        if k > 4 * work {
            return Err(Error::AssertionFailure("atanh series failed to converge"));
        }
    }
    Ok(sum.mul_pow2(1))
}

/// Bracket of `ln 2 = 2 atanh(1/3)`.
pub fn ln_two(prec: u32) -> Result<DyInterval> {
    let work = prec + 16;
    let one = DyInterval::point(Dyadic::one());
    let three = DyInterval::point(Dyadic::from_i64(3));
    let t = one.div(&three, work)?;
    atanh_series(&t, work)
}

/// Bracket of `base^(p/q)` for a positive dyadic interval base.
pub fn pow_rational(base: &DyInterval, p: &BigInt, q: &BigInt, prec: u32) -> Result<DyInterval> {
    if !base.strictly_positive() {
        return Err(Error::Domain("rational power of a non-positive base"));
    }
    if q.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let (mut p, mut q) = (p.clone(), q.clone());
    if q.is_negative() {
        p = -p;
        q = -q;
    }
    let negate_exp = p.is_negative();
    let p_mag = p.magnitude().clone();
    let (ip, fp) = p_mag.div_rem(q.magnitude());
    let work = prec + 16;

    let ip_u32 = u32::try_from(&ip).map_err(|_| Error::Domain("power exponent too large"))?;
    let int_part = base.pow_u32(ip_u32, work);
    let frac_part = if fp.is_zero() {
        DyInterval::point(Dyadic::one())
    } else {
        let q_u32 =
            u32::try_from(q.magnitude()).map_err(|_| Error::Domain("root index too large"))?;
        let fp_u32 = u32::try_from(&fp).map_err(|_| Error::Domain("power exponent too large"))?;
        base.pow_u32(fp_u32, work).nth_root(q_u32, work)?
    };
    let val = int_part.mul(&frac_part, work);
    if negate_exp {
        DyInterval::point(Dyadic::one()).div(&val, work)
    } else {
        Ok(val)
    }
}

/// Sum a list of brackets exactly (dyadic addition does not round).
pub fn sum_exact(items: &[DyInterval]) -> DyInterval {
    let mut lo = Dyadic::zero();
    let mut hi = Dyadic::zero();
    for it in items {
        lo = lo.add(&it.lo);
        hi = hi.add(&it.hi);
    }
    DyInterval::new(lo, hi)
}

/// Sorted-data quantile helpers used by aggregation; kept here because the
/// ordering is the exact dyadic one.
pub fn sort_by_midpoint(items: &mut Vec<DyInterval>) {
    items.sort_by(|a, b| a.lo.add(&a.hi).cmp(&b.lo.add(&b.hi)));
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dy(m: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(m), e)
    }

    #[test]
    fn dyadic_add_mul_exact() {
        let a = dy(3, -2); // 0.75
        let b = dy(5, -3); // 0.625
        assert_eq!(a.add(&b), dy(11, -3)); // 1.375
        assert_eq!(a.mul(&b), dy(15, -5));
        assert_eq!(a.sub(&a), Dyadic::zero());
    }

    #[test]
    fn rounding_directions() {
        let x = dy(0b10111, 0); // 23
        assert_eq!(x.round(3, Round::Down), dy(0b101, 2)); // 20
        assert_eq!(x.round(3, Round::Up), dy(0b110, 2)); // 24
    }

    #[test]
    fn division_brackets_value() {
        // 1/3 at 40 bits: down <= 1/3 <= up, and 3*down <= 1 <= 3*up.
        let one = Dyadic::one();
        let three = dy(3, 0);
        let lo = one.div(&three, 40, Round::Down).unwrap();
        let hi = one.div(&three, 40, Round::Up).unwrap();
        assert!(lo.cmp(&hi) != Ordering::Greater);
        assert!(lo.mul(&three).cmp(&one) != Ordering::Greater);
        assert!(hi.mul(&three).cmp(&one) != Ordering::Less);
    }

    #[test]
    fn ln_two_matches_known_digits() {
        // ln 2 = 0.693147180559945...
        let iv = ln_two(96).unwrap();
        let lo = iv.lo().to_f64();
        let hi = iv.hi().to_f64();
        assert!(lo <= 0.6931471805599453 && 0.6931471805599453 <= hi);
        assert!((hi - lo).abs() < 1e-20);
    }

    #[test]
    fn ln_point_of_e_inverse_ranges() {
        // ln 8 = 3 ln 2
        let x = dy(8, 0);
        let l8 = ln_point(&x, 96).unwrap();
        let l2 = ln_two(96).unwrap();
        let three = DyInterval::point(dy(3, 0));
        let rhs = l2.mul(&three, 128);
        assert!(l8.sub(&rhs, 128).contains_zero());
    }

    #[test]
    fn nth_root_brackets() {
        // 2^(1/2): down^2 <= 2 <= up^2
        let two = dy(2, 0);
        let lo = two.nth_root(2, 80, Round::Down).unwrap();
        let hi = two.nth_root(2, 80, Round::Up).unwrap();
        assert!(lo.mul(&lo).cmp(&two) != Ordering::Greater);
        assert!(hi.mul(&hi).cmp(&two) != Ordering::Less);
        let f = lo.to_f64();
        assert!((f - 1.4142135623730951).abs() < 1e-12);
    }

    #[test]
    fn pow_rational_of_two() {
        // 2^(3/2) = 2.828427...
        let base = DyInterval::point(dy(2, 0));
        let v = pow_rational(&base, &BigInt::from(3), &BigInt::from(2), 80).unwrap();
        let f = v.to_f64();
        assert!((f - 2.8284271247461903).abs() < 1e-12);
        // 2^(-1/5) = 0.87055056...
        let v = pow_rational(&base, &BigInt::from(-1), &BigInt::from(5), 80).unwrap();
        assert!((v.to_f64() - 0.8705505632961241).abs() < 1e-12);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal_of_dyadic(&dy(1, -3), 4), "0.1250");
        assert_eq!(decimal_of_dyadic(&dy(-1, -3), 4), "-0.1250");
        assert_eq!(decimal_of_dyadic(&dy(1, -1), 0), "1");
        assert_eq!(decimal_of_dyadic(&Dyadic::zero(), 2), "0.00");
    }
}
