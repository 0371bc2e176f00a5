//! β-transformation dynamics: digit sequences, convergents, approximation
//! errors, run-length functions, and the expansion of the number 1.
//!
//! All orbit iteration is exact. The expansion of 1 is computed through the
//! quasi-greedy orbit `t -> βt - (⌈βt⌉ - 1)` on `(0, 1]`, which produces the
//! infinite expansion ε*(1,β) directly: when the greedy expansion of 1 is
//! finite the quasi-orbit returns to 1 and ε* comes out purely periodic, and
//! for integer β it degenerates to the constant sequence (β-1)^∞.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{DyInterval, ExactReal};

/// A base β > 1 with cached data about the expansion of 1.
#[derive(Debug, Clone)]
pub struct Beta {
    value: ExactReal,
    alphabet_top: u32,
    int_base: Option<u32>,
    one: OneCache,
}

/// Lazily extended quasi-greedy orbit of 1.
#[derive(Debug, Clone)]
struct OneCache {
    /// Certified digits of ε*(1,β); a full period when `period` is set.
    star: Vec<u32>,
    /// `tvals[j]` = quasi-orbit state after `j` digits (`tvals[0] = 1`).
    tvals: Vec<ExactReal>,
    /// Set when ε* is purely periodic (greedy expansion of 1 finite, or β
    /// an integer); `star.len() == period`.
    period: Option<usize>,
    /// Length of the finite greedy expansion of 1, when observed.
    greedy_end: Option<usize>,
    /// Current state when the orbit is still being extended.
    state: Option<ExactReal>,
}

impl Beta {
    pub fn new(value: ExactReal) -> Result<Self> {
        if value.compare(&ExactReal::one())? != Ordering::Greater {
            return Err(Error::Domain("beta must exceed 1"));
        }
        let floor = value.floor()?;
        let int_base = match value.as_integer() {
            Some(b) => Some(u32::try_from(&b).map_err(|_| Error::Domain("beta too large"))?),
            None => None,
        };
        let alphabet_top = match int_base {
            Some(b) => b - 1,
            None => u32::try_from(&floor).map_err(|_| Error::Domain("beta too large"))?,
        };
        let one = match int_base {
            Some(b) => OneCache {
                star: alloc::vec![b - 1],
                tvals: alloc::vec![ExactReal::one()],
                period: Some(1),
                greedy_end: None,
                state: None,
            },
            None => OneCache {
                star: Vec::new(),
                tvals: alloc::vec![ExactReal::one()],
                period: None,
                greedy_end: None,
                state: Some(ExactReal::one()),
            },
        };
        let mut beta = Beta { value, alphabet_top, int_base, one };
        // Exact bases certify an initial ε* prefix up front (this also
        // detects finite expansions of 1 early and locks in the period);
        // interval bases stay lazy so construction cannot exhaust precision.
        if !matches!(beta.value, ExactReal::Interval(_)) {
            beta.ensure_one_depth(64)?;
        }
        Ok(beta)
    }

    pub fn value(&self) -> &ExactReal {
        &self.value
    }

    pub fn alphabet_top(&self) -> u32 {
        self.alphabet_top
    }

    pub fn int_base(&self) -> Option<u32> {
        self.int_base
    }

    /// Certify digits of ε*(1,β) up to index `n` (exclusive).
    pub fn ensure_one_depth(&mut self, n: usize) -> Result<()> {
        if self.one.period.is_some() {
            return Ok(());
        }
        while self.one.star.len() < n {
            let t = self.one.state.clone().expect("aperiodic cache keeps a state");
            let bt = self.value.mul(&t)?;
            let fl = bt.floor()?;
            let is_int = {
                let fl_val = ExactReal::from_int(fl.clone());
                bt.compare(&fl_val)? == Ordering::Equal
            };
            if is_int {
                // Greedy expansion of 1 terminates here; ε* closes into the
                // period (ε_1, ..., ε_{k-1}, ε_k - 1).
                let d = u32::try_from(&fl).map_err(|_| Error::Domain("digit overflow"))? - 1;
                debug_assert!(d <= self.alphabet_top);
                let k = self.one.star.len() + 1;
                self.one.star.push(d);
                self.one.period = Some(k);
                self.one.greedy_end = Some(k);
                self.one.state = None;
                return Ok(());
            }
            let d = u32::try_from(&fl).map_err(|_| Error::Domain("digit overflow"))?;
            debug_assert!(d <= self.alphabet_top);
            let t_next = bt.sub(&ExactReal::from_int(fl))?;
            self.one.star.push(d);
            self.one.tvals.push(t_next.clone());
            self.one.state = Some(t_next);
        }
        Ok(())
    }

    /// Digit `ε*_{i+1}(1,β)` (0-based index into ε*).
    pub fn eps_star_digit(&self, i: usize) -> Result<u32> {
        match self.one.period {
            Some(k) => Ok(self.one.star[i % k]),
            None => self
                .one
                .star
                .get(i)
                .copied()
                .ok_or(Error::HorizonExceeded { needed: i + 1, horizon: self.one.star.len() }),
        }
    }

    pub fn eps_star_prefix(&self, n: usize) -> Result<Vec<u32>> {
        (0..n).map(|i| self.eps_star_digit(i)).collect()
    }

    /// Quasi-orbit state after `j` digits; this is the height of the
    /// follower interval of any word whose maximal ε*-match length is `j`.
    pub fn t_state(&self, j: usize) -> Result<ExactReal> {
        match self.one.period {
            Some(k) => Ok(self.one.tvals[j % k].clone()),
            None => {
                if j < self.one.tvals.len() {
                    Ok(self.one.tvals[j].clone())
                } else if let Some(state) = &self.one.state {
                    if j == self.one.tvals.len() {
                        Ok(state.clone())
                    } else {
                        Err(Error::HorizonExceeded { needed: j, horizon: self.one.tvals.len() })
                    }
                } else {
                    Err(Error::HorizonExceeded { needed: j, horizon: self.one.tvals.len() })
                }
            }
        }
    }

    /// Digit `ε_{i+1}(1,β)` of the greedy expansion of 1 (0-based).
    ///
    /// For integer β the greedy expansion in the alphabet {0,…,β-1} is the
    /// fixed point (β-1)^∞, which coincides with ε*.
    pub fn eps_one_digit(&self, i: usize) -> Result<u32> {
        match self.one.greedy_end {
            Some(k) => {
                if i + 1 < k {
                    Ok(self.one.star[i])
                } else if i + 1 == k {
                    Ok(self.one.star[i] + 1)
                } else {
                    Ok(0)
                }
            }
            None => self.eps_star_digit(i),
        }
    }

    /// Length of the greedy expansion of 1 when it has been observed finite.
    pub fn one_terminates_at(&self) -> Option<usize> {
        self.one.greedy_end
    }

    /// Period of ε*(1,β) when it is known to be purely periodic.
    pub fn eps_star_period(&self) -> Option<usize> {
        self.one.period
    }

    /// Number of certified ε* digits available without extension.
    pub fn one_depth(&self) -> usize {
        match self.one.period {
            Some(_) => usize::MAX,
            None => self.one.star.len(),
        }
    }

    #[cfg(test)]
    pub(crate) fn force_generic_orbit(mut self) -> Self {
        self.int_base = None;
        self
    }
}

/// A finite prefix of a digit sequence with exact termination information.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitSeq {
    digits: Vec<u32>,
    terminated_at: Option<usize>,
}

impl DigitSeq {
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// True when some `T^k x = 0` with `k <= len`, so all later digits are
    /// provably zero.
    pub fn terminated(&self) -> bool {
        self.terminated_at.is_some()
    }

    pub fn terminated_at(&self) -> Option<usize> {
        self.terminated_at
    }
}

/// `ℓ_n(x)` resolves to a length, or to "unbounded" on finite expansions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunLengthValue {
    Finite(u64),
    Unbounded,
}

/// The β-transformation `T_β(x) = βx - ⌊βx⌋` on `[0, 1)`.
pub fn transform(x: &ExactReal, beta: &Beta) -> Result<ExactReal> {
    check_unit_range(x)?;
    let bx = beta.value.mul(x)?;
    let fl = bx.floor()?;
    bx.sub(&ExactReal::from_int(fl))
}

fn check_unit_range(x: &ExactReal) -> Result<()> {
    if x.sign()? < 0 || x.compare(&ExactReal::one())? != Ordering::Less {
        return Err(Error::Domain("x must lie in [0, 1)"));
    }
    Ok(())
}

/// Exact orbit with digit extraction; returns the digits, `T^n x`, and the
/// index of termination when the orbit hits 0.
pub fn orbit_digits(
    x: &ExactReal,
    beta: &Beta,
    n: usize,
) -> Result<(Vec<u32>, ExactReal, Option<usize>)> {
    check_unit_range(x)?;
    if let (Some(b), ExactReal::Rational(r)) = (beta.int_base, x) {
        return int_radix_digits(r.numer(), r.denom(), b, n);
    }
    let mut digits = Vec::with_capacity(n);
    let mut y = x.clone();
    let mut terminated = None;
    for k in 0..n {
        if y.is_zero() {
            terminated = Some(k);
            digits.resize(n, 0);
            break;
        }
        let by = beta.value.mul(&y)?;
        let fl = by.floor()?;
        let d = u32::try_from(&fl).map_err(|_| Error::AssertionFailure("digit out of range"))?;
        debug_assert!(d <= beta.alphabet_top);
        y = by.sub(&ExactReal::from_int(fl))?;
        digits.push(d);
    }
    if terminated.is_none() && y.is_zero() {
        terminated = Some(digits.iter().rposition(|&d| d != 0).map_or(0, |i| i + 1));
    }
    Ok((digits, y, terminated))
}

/// Radix extraction for integer bases: the denominator never changes, and
/// powers of two reduce to direct bit indexing.
fn int_radix_digits(
    p: &BigInt,
    q: &BigInt,
    b: u32,
    n: usize,
) -> Result<(Vec<u32>, ExactReal, Option<usize>)> {
    debug_assert!(!p.is_negative() && q.is_positive());
    let p = p.magnitude().clone();
    let q = q.magnitude().clone();
    if b.is_power_of_two() && q.count_ones() == 1 {
        return Ok(dyadic_bit_digits(&p, q.trailing_zeros().unwrap_or(0), b, n));
    }
    let mut digits = Vec::with_capacity(n);
    let mut num = p;
    let mut terminated = None;
    let b_big = BigUint::from(b);
    for k in 0..n {
        if num.is_zero() {
            terminated = Some(k);
            digits.resize(n, 0);
            break;
        }
        num *= &b_big;
        let (d, rem) = num.div_rem(&q);
        digits.push(d.to_u32().ok_or(Error::AssertionFailure("digit out of range"))?);
        num = rem;
    }
    if terminated.is_none() && num.is_zero() {
        terminated = Some(digits.iter().rposition(|&d| d != 0).map_or(0, |i| i + 1));
    }
    let y = ExactReal::from_ratio(BigInt::from(num), BigInt::from(q))?;
    Ok((digits, y, terminated))
}

/// Digits of `p / 2^bexp` in base `2^j`, read straight out of the bits.
fn dyadic_bit_digits(
    p: &BigUint,
    bexp: u64,
    b: u32,
    n: usize,
) -> (Vec<u32>, ExactReal, Option<usize>) {
    let j = b.trailing_zeros() as u64;
    let bytes = p.to_bytes_le();
    let total_bits = bexp;
    let bit_at = |i: u64| -> u32 {
        // digit-window bit i, counted from the binary point
        if i >= total_bits {
            return 0;
        }
        let from_lsb = total_bits - 1 - i;
        let byte_idx = (from_lsb / 8) as usize;
        if byte_idx >= bytes.len() {
            return 0;
        }
        ((bytes[byte_idx] >> (from_lsb % 8)) & 1) as u32
    };
    let mut digits = Vec::with_capacity(n);
    for k in 0..n {
        let mut d = 0u32;
        for bit in 0..j {
            d = (d << 1) | bit_at(k as u64 * j + bit);
        }
        digits.push(d);
    }
    // T^n x = fractional part after consuming n digits
    let consumed = (n as u64 * j).min(total_bits);
    let rem_bits = total_bits - consumed;
    let mask = (BigUint::one() << rem_bits) - BigUint::one();
    let rem = p & &mask;
    let terminated = if rem.is_zero() {
        Some(digits.iter().rposition(|&d| d != 0).map_or(0, |i| i + 1))
    } else {
        None
    };
    let y = ExactReal::from_ratio(BigInt::from(rem), BigInt::from(BigUint::one() << rem_bits))
        .expect("positive denominator");
    (digits, y, terminated)
}

/// First `n` digits of the greedy β-expansion of `x`.
pub fn digits(x: &ExactReal, beta: &Beta, n: usize) -> Result<DigitSeq> {
    if n < 1 {
        return Err(Error::Domain("digit count must be at least 1"));
    }
    let (digits, _, terminated_at) = orbit_digits(x, beta, n)?;
    Ok(DigitSeq { digits, terminated_at })
}

/// Convergent `ω_n(x) = Σ_{i<=n} ε_i β^{-i}`, exactly.
pub fn convergent(x: &ExactReal, beta: &Beta, n: usize) -> Result<ExactReal> {
    let seq = digits(x, beta, n)?;
    convergent_of_digits(seq.digits(), beta)
}

/// Value of a digit word under the base: `Σ ε_i β^{-i}` by Horner.
pub fn convergent_of_digits(digits: &[u32], beta: &Beta) -> Result<ExactReal> {
    let mut acc = ExactReal::zero();
    for &d in digits.iter().rev() {
        acc = acc.add(&ExactReal::from_int(d)).and_then(|v| v.div(&beta.value))?;
    }
    Ok(acc)
}

/// Approximation error `x - ω_n(x)`, with the exact identity
/// `x - ω_n(x) = T^n x / β^n` verified on every call.
pub fn approx_error(x: &ExactReal, beta: &Beta, n: usize) -> Result<ExactReal> {
    let (digs, y, _) = orbit_digits(x, beta, n)?;
    let omega = convergent_of_digits(&digs, beta)?;
    let err = x.sub(&omega)?;
    let check = err.mul(&beta.value.pow_i64(n as i64)?)?;
    if check.compare(&y)? != Ordering::Equal {
        return Err(Error::AssertionFailure("x - ω_n(x) != T^n x / β^n"));
    }
    Ok(err)
}

/// `ℓ_n(x)`: length of the zero run immediately after digit `n`.
pub fn zero_run_after(
    x: &ExactReal,
    beta: &Beta,
    n: usize,
    horizon: usize,
) -> Result<RunLengthValue> {
    if horizon < n {
        return Err(Error::Domain("horizon must be at least n"));
    }
    let (_, mut y, terminated) = orbit_digits(x, beta, n)?;
    if let Some(k) = terminated {
        if k <= n {
            return Ok(RunLengthValue::Unbounded);
        }
    }
    let mut run: u64 = 0;
    let mut pos = n;
    loop {
        if y.is_zero() {
            return Ok(RunLengthValue::Unbounded);
        }
        if pos >= horizon {
            return Err(Error::HorizonExceeded { needed: pos + 1, horizon });
        }
        let by = beta.value.mul(&y)?;
        let fl = by.floor()?;
        if !fl.is_zero() {
            return Ok(RunLengthValue::Finite(run));
        }
        y = by;
        run += 1;
        pos += 1;
    }
}

/// `r_n(x)`: maximal zero-run length within the first `n` digits.
pub fn max_zero_run(x: &ExactReal, beta: &Beta, n: usize) -> Result<u64> {
    if n < 1 {
        return Err(Error::Domain("n must be at least 1"));
    }
    let seq = digits(x, beta, n)?;
    Ok(max_zero_run_of(seq.digits()))
}

/// Longest zero run in a digit block (single scan).
pub fn max_zero_run_of(digits: &[u32]) -> u64 {
    let mut best = 0u64;
    let mut cur = 0u64;
    for &d in digits {
        if d == 0 {
            cur += 1;
            best = best.max(cur);
        } else {
            cur = 0;
        }
    }
    best
}

/// First `n` digits of both ε(1,β) and ε*(1,β).
pub fn expansion_of_one(beta: &mut Beta, n: usize) -> Result<(DigitSeq, Vec<u32>)> {
    if n < 1 {
        return Err(Error::Domain("n must be at least 1"));
    }
    beta.ensure_one_depth(n)?;
    let star = beta.eps_star_prefix(n)?;
    let eps: Vec<u32> = (0..n).map(|i| beta.eps_one_digit(i)).collect::<Result<_>>()?;
    let terminated_at = beta.one_terminates_at().filter(|&k| k <= n);
    Ok((DigitSeq { digits: eps, terminated_at }, star))
}

/// Evidence report for membership of β in the class A₀ (bounded ℓ_n(1,β)).
#[derive(Debug, Clone)]
pub struct A0Evidence {
    /// sup of ℓ_k(1,β) over the inspected horizon.
    pub sup_ell: u64,
    /// How many ε* digits were inspected.
    pub horizon: usize,
    /// True when ε* is purely periodic, making the sup exact; otherwise
    /// membership is only semi-decidable and this is finite-horizon
    /// evidence.
    pub proven: bool,
}

/// Profile of `ℓ_k(1,β)` for `k <= n`, with `M_n = max`.
#[derive(Debug, Clone)]
pub struct EllProfile {
    pub ell: Vec<u64>,
    pub m_n: u64,
    pub a0: A0Evidence,
}

/// Compute `ℓ_1(1,β), …, ℓ_n(1,β)` from ε*, extending the cache as needed.
pub fn ell_one_profile(beta: &mut Beta, n: usize) -> Result<EllProfile> {
    if n < 1 {
        return Err(Error::Domain("n must be at least 1"));
    }
    let horizon = default_ell_horizon(beta, n)?;
    let mut ell = Vec::with_capacity(n);
    for k in 1..=n {
        let mut run = 0u64;
        loop {
            let idx = k + run as usize;
            if idx >= horizon {
                return Err(Error::HorizonExceeded { needed: idx + 1, horizon });
            }
            beta.ensure_one_depth(idx + 1)?;
            if beta.eps_star_digit(idx)? != 0 {
                break;
            }
            run += 1;
        }
        ell.push(run);
    }
    let m_n = ell.iter().copied().max().unwrap_or(0);
    let a0 = a0_evidence(beta, horizon)?;
    Ok(EllProfile { ell, m_n, a0 })
}

/// A₀ evidence over an explicit horizon of ε* digits.
pub fn a0_evidence(beta: &mut Beta, horizon: usize) -> Result<A0Evidence> {
    if let Some(k) = beta.eps_star_period() {
        // Exact: the sup of ℓ_n over a purely periodic ε* is the longest
        // zero run in two concatenated periods (runs may wrap).
        let period = beta.eps_star_prefix(k)?;
        if period.iter().all(|&d| d == 0) {
            return Err(Error::AssertionFailure("ε* cannot be identically zero"));
        }
        let mut doubled = period.clone();
        doubled.extend_from_slice(&period);
        let sup = max_zero_run_of(&doubled);
        return Ok(A0Evidence { sup_ell: sup, horizon: 2 * k, proven: true });
    }
    beta.ensure_one_depth(horizon)?;
    let prefix = beta.eps_star_prefix(horizon)?;
    Ok(A0Evidence { sup_ell: max_zero_run_of(&prefix), horizon, proven: false })
}

/// Horizon heuristic `n + 64 * ⌈log_β(n + 2)⌉` for resolving ℓ_n.
fn default_ell_horizon(beta: &Beta, n: usize) -> Result<usize> {
    let ln_beta = beta.value.to_dyadic(64)?.ln(64)?;
    let ln_n = ExactReal::from_int(n as i64 + 2).to_dyadic(64)?.ln(64)?;
    let ratio = ln_n.div(&ln_beta, 64)?;
    let bound: BigInt = ratio.hi().floor_int() + 1;
    let bound = bound.to_u64().unwrap_or(1).max(1);
    Ok(n + 64 * (bound.min(1 << 20) as usize))
}

/// Exact sandwich check `β^{-(n+ℓ+1)} <= x - ω_n(x) <= β^{-(n+ℓ)}`.
pub fn sandwich_holds(err: &ExactReal, beta: &Beta, n: usize, ell: u64) -> Result<bool> {
    let lower = beta.value.pow_i64(-((n as i64) + ell as i64 + 1))?;
    let upper = beta.value.pow_i64(-((n as i64) + ell as i64))?;
    Ok(lower.compare(err)? != Ordering::Greater && err.compare(&upper)? != Ordering::Greater)
}

/// Dyadic bracket of `log_β v` for a positive exact value.
pub fn log_beta(v: &ExactReal, beta: &Beta, prec: u32) -> Result<DyInterval> {
    let num = v.to_dyadic(prec)?.ln(prec)?;
    let den = beta.value.to_dyadic(prec)?.ln(prec)?;
    num.div(&den, prec)
}
