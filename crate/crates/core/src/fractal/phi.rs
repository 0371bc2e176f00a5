//! Rate functions φ: closed forms with exact rational evaluation where the
//! value is rational, rigorous brackets otherwise, plus the liminf φ(n)/n
//! analysis and the slow-variation (class 𝓗) check
//! `φ(n + φ(n))/φ(n) -> 1`.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::dyadic::{ln_point, DyInterval, Dyadic};
use crate::exactnum::{DEFAULT_PRECISION_BUDGET, ExactReal};

/// Closed forms follow the shapes used in the run-length analysis:
/// `αn`, `αn^γ`, `α(ln n)^γ + c`, `αn/(ln n)^γ`, each optionally rounded up
/// to an integer, plus explicit tables.
#[derive(Debug, Clone)]
pub enum PhiForm {
    /// `α n`
    Linear { alpha: BigRational },
    /// `α n^γ`, optionally `⌈α n^γ⌉`
    Power { alpha: BigRational, gamma: BigRational, ceil: bool },
    /// `α (ln n)^γ + offset`, optionally `⌈α (ln n)^γ⌉ + offset`
    Log { alpha: BigRational, gamma: u32, ceil: bool, offset: BigRational },
    /// `α n / (ln n)^γ`
    NOverLog { alpha: BigRational, gamma: u32 },
    /// Explicit values for n = 1, 2, …
    Table { values: Vec<BigRational> },
}

#[derive(Debug, Clone)]
pub struct PhiFunction {
    form: PhiForm,
}

impl PhiFunction {
    pub fn new(form: PhiForm) -> Result<Self> {
        match &form {
            PhiForm::Linear { alpha } => {
                if alpha.is_negative() {
                    return Err(Error::Domain("alpha must be nonnegative"));
                }
            }
            PhiForm::Power { alpha, gamma, .. } => {
                if !alpha.is_positive() || !gamma.is_positive() {
                    return Err(Error::Domain("alpha and gamma must be positive"));
                }
            }
            PhiForm::Log { alpha, .. } | PhiForm::NOverLog { alpha, .. } => {
                if !alpha.is_positive() {
                    return Err(Error::Domain("alpha must be positive"));
                }
            }
            PhiForm::Table { values } => {
                if values.is_empty() {
                    return Err(Error::Domain("table must be nonempty"));
                }
            }
        }
        Ok(PhiFunction { form })
    }

    pub fn linear(alpha: BigRational) -> Self {
        PhiFunction { form: PhiForm::Linear { alpha } }
    }

    /// `n` itself, the workhorse of the Cantor construction.
    pub fn identity() -> Self {
        PhiFunction::linear(BigRational::one())
    }

    /// `⌈√n⌉`.
    pub fn ceil_sqrt() -> Self {
        PhiFunction {
            form: PhiForm::Power {
                alpha: BigRational::one(),
                gamma: BigRational::new(BigInt::one(), BigInt::from(2)),
                ceil: true,
            },
        }
    }

    /// `⌈ln n⌉ + 1`.
    pub fn ceil_log_plus_one() -> Self {
        PhiFunction {
            form: PhiForm::Log {
                alpha: BigRational::one(),
                gamma: 1,
                ceil: true,
                offset: BigRational::one(),
            },
        }
    }

    pub fn form(&self) -> &PhiForm {
        &self.form
    }

    /// Exact rational value when the form is rational-valued at `n`.
    pub fn value_exact(&self, n: u64) -> Result<Option<BigRational>> {
        if n < 1 {
            return Err(Error::Domain("phi is defined on positive integers"));
        }
        match &self.form {
            PhiForm::Linear { alpha } => Ok(Some(alpha * BigRational::from_integer(n.into()))),
            PhiForm::Power { alpha, gamma, ceil } => {
                if *ceil {
                    let k = ceil_alpha_n_pow(alpha, n, gamma)?;
                    return Ok(Some(BigRational::from_integer(k)));
                }
                // rational iff n^gamma is rational, i.e. n is a perfect
                // denominator-th power
                let (u, v) = gamma_parts(gamma)?;
                let root = integer_root_exact(n, v);
                match root {
                    Some(r) => {
                        let val = BigRational::from_integer(BigInt::from(r).pow(u));
                        Ok(Some(alpha * val))
                    }
                    None => Ok(None),
                }
            }
            PhiForm::Log { alpha, gamma, ceil, offset } => {
                if n == 1 {
                    // ln 1 = 0 exactly
                    return Ok(Some(offset.clone()));
                }
                if *ceil {
                    let k = ceil_alpha_lnpow(alpha, n, *gamma)?;
                    Ok(Some(BigRational::from_integer(k) + offset))
                } else {
                    Ok(None)
                }
            }
            PhiForm::NOverLog { .. } => Ok(None),
            PhiForm::Table { values } => {
                let idx = (n - 1) as usize;
                values
                    .get(idx)
                    .cloned()
                    .map(Some)
                    .ok_or(Error::HorizonExceeded { needed: idx + 1, horizon: values.len() })
            }
        }
    }

    /// Rigorous bracket of φ(n).
    pub fn value_bracket(&self, n: u64, prec: u32) -> Result<DyInterval> {
        if let Some(v) = self.value_exact(n)? {
            return rational_interval(&v, prec);
        }
        match &self.form {
            PhiForm::Power { alpha, gamma, .. } => {
                let (u, v) = gamma_parts(gamma)?;
                let base = DyInterval::point(Dyadic::from_bigint(n.into()));
                let powed = crate::exactnum::dyadic::pow_rational(
                    &base,
                    &BigInt::from(u),
                    &BigInt::from(v),
                    prec,
                )?;
                let a = rational_interval(alpha, prec)?;
                Ok(a.mul(&powed, prec))
            }
            PhiForm::Log { alpha, gamma, offset, .. } => {
                let ln_n = ln_point(&Dyadic::from_bigint(n.into()), prec)?;
                let powed = ln_n.pow_u32(*gamma, prec);
                let a = rational_interval(alpha, prec)?;
                let off = rational_interval(offset, prec)?;
                Ok(a.mul(&powed, prec).add(&off, prec))
            }
            PhiForm::NOverLog { alpha, gamma } => {
                if n == 1 {
                    return Err(Error::Domain("n/(ln n)^γ is undefined at n = 1"));
                }
                let ln_n = ln_point(&Dyadic::from_bigint(n.into()), prec)?;
                let powed = ln_n.pow_u32(*gamma, prec);
                let a = rational_interval(alpha, prec)?;
                let num = a.mul(&DyInterval::point(Dyadic::from_bigint(n.into())), prec);
                num.div(&powed, prec)
            }
            _ => Err(Error::AssertionFailure("exact form fell through to bracket")),
        }
    }

    /// Exact `⌊φ(n)⌋`.
    pub fn floor(&self, n: u64) -> Result<BigInt> {
        if let Some(v) = self.value_exact(n)? {
            return Ok(v.floor().to_integer());
        }
        match &self.form {
            PhiForm::Power { alpha, gamma, .. } => {
                // largest k with k <= α n^γ: k = ⌈α n^γ⌉ or that minus one
                let c = ceil_alpha_n_pow(alpha, n, gamma)?;
                // ceil == value only when the value is an integer, which for
                // an irrational value never happens; here value is irrational
                // (otherwise value_exact had returned).
                Ok(c - 1)
            }
            _ => {
                // bracket and refine until the floor is pinned
                let mut prec = 96u32;
                loop {
                    let iv = self.value_bracket(n, prec)?;
                    let lo = iv.lo().floor_int();
                    let hi = iv.hi().floor_int();
                    if lo == hi {
                        return Ok(lo);
                    }
                    if prec >= DEFAULT_PRECISION_BUDGET {
                        return Err(Error::PrecisionExhausted {
                            budget_bits: DEFAULT_PRECISION_BUDGET,
                        });
                    }
                    prec *= 2;
                }
            }
        }
    }

    /// Check positivity and monotonicity over `1..=horizon` on a full or
    /// geometric grid (exact comparisons where values are exact).
    pub fn check_monotone(&self, horizon: u64) -> Result<bool> {
        let mut prev: Option<DyInterval> = None;
        let start = match &self.form {
            PhiForm::NOverLog { .. } => 2,
            _ => 1,
        };
        let mut points = Vec::new();
        let mut k = start;
        while k <= horizon {
            points.push(k);
            k = (k * 2).max(k + 1);
        }
        if *points.last().unwrap_or(&0) != horizon && horizon >= start {
            points.push(horizon);
        }
        for &p in &points {
            let iv = self.value_bracket(p, 128)?;
            if !iv.lo().is_positive() && !matches!(self.form, PhiForm::Linear { .. }) {
                return Ok(false);
            }
            if let Some(pv) = &prev {
                if iv.hi().cmp(pv.lo()) == Ordering::Less {
                    return Ok(false);
                }
            }
            prev = Some(iv);
        }
        Ok(true)
    }
}

fn rational_interval(r: &BigRational, prec: u32) -> Result<DyInterval> {
    let x = ExactReal::from_rational(r.clone());
    x.to_dyadic(prec)
}

fn gamma_parts(gamma: &BigRational) -> Result<(u32, u32)> {
    let u = u32::try_from(gamma.numer()).map_err(|_| Error::Domain("gamma too large"))?;
    let v = u32::try_from(gamma.denom()).map_err(|_| Error::Domain("gamma too large"))?;
    Ok((u, v))
}

/// `r` with `r^v == n`, when it exists.
fn integer_root_exact(n: u64, v: u32) -> Option<u64> {
    if v == 1 {
        return Some(n);
    }
    let r = num_integer::Roots::nth_root(&n, v);
    if num_traits::checked_pow(r, v as usize) == Some(n) {
        Some(r)
    } else {
        None
    }
}

/// Exact `⌈α n^{u/v}⌉` by integer comparison: `k >= α n^{u/v}` iff
/// `(k q)^v >= p^v n^u` for `α = p/q`.
fn ceil_alpha_n_pow(alpha: &BigRational, n: u64, gamma: &BigRational) -> Result<BigInt> {
    let (u, v) = gamma_parts(gamma)?;
    let p = alpha.numer();
    let q = alpha.denom();
    let rhs = p.pow(v) * BigInt::from(n).pow(u);
    let geq = |k: &BigInt| -> bool { (k * q).pow(v) >= rhs };
    // float estimate, then fix up exactly
    let est = alpha.to_f64().unwrap_or(1.0) * (n as f64).powf(u as f64 / v as f64);
    let mut k = BigInt::from(est as i64);
    if k.is_negative() {
        k = BigInt::zero();
    }
    while !geq(&k) {
        k += 1;
    }
    while k.is_positive() && geq(&(&k - 1)) {
        k -= 1;
    }
    Ok(k)
}

/// Exact `⌈α (ln n)^γ⌉` via bracket refinement; `α (ln n)^γ` is never
/// provably an integer here, so refinement terminates in practice and a
/// precision budget guards the pathological case.
fn ceil_alpha_lnpow(alpha: &BigRational, n: u64, gamma: u32) -> Result<BigInt> {
    let mut prec = 96u32;
    loop {
        let ln_n = ln_point(&Dyadic::from_bigint(n.into()), prec)?;
        let powed = ln_n.pow_u32(gamma, prec);
        let a = rational_interval(alpha, prec)?;
        let iv = a.mul(&powed, prec);
        let lo = ceil_dyadic(iv.lo());
        let hi = ceil_dyadic(iv.hi());
        if lo == hi {
            return Ok(lo);
        }
        if prec >= DEFAULT_PRECISION_BUDGET {
            return Err(Error::PrecisionExhausted { budget_bits: DEFAULT_PRECISION_BUDGET });
        }
        prec *= 2;
    }
}

fn ceil_dyadic(d: &Dyadic) -> BigInt {
    let fl = d.floor_int();
    let back = Dyadic::from_bigint(fl.clone());
    if back.cmp(d) == Ordering::Equal {
        fl
    } else {
        fl + 1
    }
}

/// Result of the liminf φ(n)/n analysis.
#[derive(Debug, Clone, PartialEq)]
pub enum LiminfValue {
    /// Analytic limit for a closed form.
    Exact(BigRational),
    /// Analytic limit is +∞ (superlinear power forms).
    Infinite,
    /// Tabulated φ: minimum of φ(n)/n over the tail window, with the caveat
    /// that this is a finite-horizon observation, not a proven limit.
    TailMin { value: BigRational, window_start: u64, caveat: &'static str },
}

/// `liminf φ(n)/n`: analytic for closed forms, a flagged tail minimum for
/// tables.
pub fn liminf_ratio(phi: &PhiFunction, horizon: u64) -> Result<LiminfValue> {
    if horizon < 10 {
        return Err(Error::Domain("horizon must be at least 10"));
    }
    match phi.form() {
        PhiForm::Linear { alpha } => Ok(LiminfValue::Exact(alpha.clone())),
        PhiForm::Power { alpha, gamma, .. } => {
            let one = BigRational::one();
            match gamma.cmp(&one) {
                Ordering::Less => Ok(LiminfValue::Exact(BigRational::zero())),
                Ordering::Equal => Ok(LiminfValue::Exact(alpha.clone())),
                Ordering::Greater => Ok(LiminfValue::Infinite),
            }
        }
        PhiForm::Log { .. } | PhiForm::NOverLog { .. } => {
            Ok(LiminfValue::Exact(BigRational::zero()))
        }
        PhiForm::Table { values } => {
            let n_max = (values.len() as u64).min(horizon);
            let window_start = (n_max / 2).max(1);
            let mut min: Option<BigRational> = None;
            for n in window_start..=n_max {
                let v = phi
                    .value_exact(n)?
                    .ok_or(Error::AssertionFailure("table value must be exact"))?;
                let ratio = v / BigRational::from_integer(n.into());
                min = Some(match min {
                    Some(m) if m <= ratio => m,
                    _ => ratio,
                });
            }
            Ok(LiminfValue::TailMin {
                value: min.ok_or(Error::EmptyAggregate)?,
                window_start,
                caveat: "tail-window minimum over a finite horizon, not a proven limit",
            })
        }
    }
}

/// One ratio observation `φ(n + δ φ(n)) / φ(n)` with rigorous enclosure.
#[derive(Debug, Clone)]
pub struct RatioPoint {
    pub n: u64,
    pub ratio: DyInterval,
}

/// Report of the class-𝓗 membership check.
#[derive(Debug, Clone)]
pub struct ClassHReport {
    pub passes: bool,
    pub ratio_trace: Vec<RatioPoint>,
    /// Traces of `φ(n + δ φ(n))/φ(n)` for δ = 2, 3.
    pub delta_traces: Vec<(u32, Vec<RatioPoint>)>,
    pub liminf_is_zero: bool,
    pub tail_ratio_hi: f64,
}

/// Evaluate `φ(n + φ(n))/φ(n)` along a geometric grid up to `horizon`;
/// passes when the tail ratio is within `tol` of 1 and `liminf φ/n = 0`.
///
/// Arguments of φ are kept integral: with φ nondecreasing, the ratio is
/// bracketed through `φ(⌊n + δφ(n)⌋) <= φ(n + δφ(n)) <= φ(⌈n + δφ(n)⌉)`.
pub fn class_h_check(phi: &PhiFunction, horizon: u64, tol: f64) -> Result<ClassHReport> {
    if !phi.check_monotone(horizon)? {
        return Err(Error::Domain("class-H check requires a nondecreasing positive φ"));
    }
    let grid = geometric_grid(horizon);
    let ratio_trace = ratio_trace(phi, &grid, 1)?;
    let delta_traces = alloc::vec![
        (2u32, ratio_trace_tail(phi, horizon, 2)?),
        (3u32, ratio_trace_tail(phi, horizon, 3)?),
    ];
    let liminf = liminf_ratio(phi, horizon.max(10))?;
    let liminf_is_zero = matches!(&liminf, LiminfValue::Exact(v) if v.is_zero());
    let tail = ratio_trace.last().ok_or(Error::EmptyAggregate)?;
    let tail_ratio_hi = tail.ratio.hi().to_f64();
    let passes = tail_ratio_hi <= 1.0 + tol && liminf_is_zero;
    Ok(ClassHReport { passes, ratio_trace, delta_traces, liminf_is_zero, tail_ratio_hi })
}

fn geometric_grid(horizon: u64) -> Vec<u64> {
    let mut grid = Vec::new();
    let mut n = 4u64;
    while n < horizon {
        grid.push(n);
        n *= 4;
    }
    grid.push(horizon);
    grid
}

fn ratio_trace(phi: &PhiFunction, grid: &[u64], delta: u32) -> Result<Vec<RatioPoint>> {
    grid.iter().map(|&n| ratio_at(phi, n, delta)).collect()
}

fn ratio_trace_tail(phi: &PhiFunction, horizon: u64, delta: u32) -> Result<Vec<RatioPoint>> {
    let grid: Vec<u64> = geometric_grid(horizon).into_iter().rev().take(3).rev().collect();
    ratio_trace(phi, &grid, delta)
}

fn ratio_at(phi: &PhiFunction, n: u64, delta: u32) -> Result<RatioPoint> {
    let prec = 128u32;
    let v_n = phi.value_bracket(n, prec)?;
    // integral bracket of the argument n + δ φ(n)
    let delta_iv = DyInterval::point(Dyadic::from_i64(delta as i64));
    let arg = DyInterval::point(Dyadic::from_bigint(n.into()))
        .add(&delta_iv.mul(&v_n, prec), prec);
    let a_lo = arg
        .lo()
        .floor_int()
        .to_u64()
        .ok_or(Error::Domain("argument overflow in ratio"))?;
    let a_hi_big = ceil_dyadic(arg.hi());
    let a_hi = a_hi_big.to_u64().ok_or(Error::Domain("argument overflow in ratio"))?;
    let lo_val = phi.value_bracket(a_lo.max(1), prec)?;
    let hi_val = phi.value_bracket(a_hi.max(1), prec)?;
    let enclosure = DyInterval::new(lo_val.lo().clone(), hi_val.hi().clone());
    let ratio = enclosure.div(&v_n, prec)?;
    Ok(RatioPoint { n, ratio })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn exact_values_and_floors() {
        let lin = PhiFunction::linear(rat(3, 2));
        assert_eq!(lin.value_exact(4).unwrap(), Some(rat(6, 1)));
        assert_eq!(lin.floor(5).unwrap(), BigInt::from(7)); // 7.5

        let sq = PhiFunction::ceil_sqrt();
        assert_eq!(sq.value_exact(10).unwrap(), Some(rat(4, 1))); // ⌈3.16⌉
        assert_eq!(sq.value_exact(16).unwrap(), Some(rat(4, 1)));
        assert_eq!(sq.value_exact(17).unwrap(), Some(rat(5, 1)));
        assert_eq!(sq.value_exact(1_000_000).unwrap(), Some(rat(1000, 1)));
        assert_eq!(sq.value_exact(1_001_000).unwrap(), Some(rat(1001, 1)));

        // non-ceiled √n: rational only at perfect squares
        let sqrt = PhiFunction::new(PhiForm::Power {
            alpha: BigRational::one(),
            gamma: rat(1, 2),
            ceil: false,
        })
        .unwrap();
        assert_eq!(sqrt.value_exact(9).unwrap(), Some(rat(3, 1)));
        assert_eq!(sqrt.value_exact(10).unwrap(), None);
        assert_eq!(sqrt.floor(10).unwrap(), BigInt::from(3));
        assert_eq!(sqrt.floor(99).unwrap(), BigInt::from(9));

        let logp = PhiFunction::ceil_log_plus_one();
        // ln 10^6 = 13.8155…; ⌈·⌉ + 1 = 15
        assert_eq!(logp.value_exact(1_000_000).unwrap(), Some(rat(15, 1)));
        assert_eq!(logp.value_exact(1).unwrap(), Some(rat(1, 1)));
        assert_eq!(logp.value_exact(2).unwrap(), Some(rat(2, 1)));
    }

    #[test]
    fn liminf_examples() {
        let lin2 = PhiFunction::linear(rat(2, 1));
        assert_eq!(liminf_ratio(&lin2, 100).unwrap(), LiminfValue::Exact(rat(2, 1)));

        let sq = PhiFunction::ceil_sqrt();
        assert_eq!(liminf_ratio(&sq, 100).unwrap(), LiminfValue::Exact(BigRational::zero()));

        let nlog = PhiFunction::new(PhiForm::NOverLog { alpha: BigRational::one(), gamma: 1 })
            .unwrap();
        assert_eq!(liminf_ratio(&nlog, 100).unwrap(), LiminfValue::Exact(BigRational::zero()));

        let sup = PhiFunction::new(PhiForm::Power {
            alpha: BigRational::one(),
            gamma: rat(3, 2),
            ceil: false,
        })
        .unwrap();
        assert_eq!(liminf_ratio(&sup, 100).unwrap(), LiminfValue::Infinite);

        let table = PhiFunction::new(PhiForm::Table {
            values: (1..=40).map(|n| rat(n, 2)).collect(),
        })
        .unwrap();
        match liminf_ratio(&table, 40).unwrap() {
            LiminfValue::TailMin { value, .. } => assert_eq!(value, rat(1, 2)),
            other => panic!("expected tail min, got {other:?}"),
        }
    }

    #[test]
    fn class_h_examples() {
        // ⌈√n⌉ passes with a tight tail ratio
        let sq = PhiFunction::ceil_sqrt();
        let rep = class_h_check(&sq, 1_000_000, 0.01).unwrap();
        assert!(rep.passes);
        assert!(rep.tail_ratio_hi <= 1.0011);

        // φ(n) = n fails with ratio 2
        let lin = PhiFunction::identity();
        let rep = class_h_check(&lin, 1_000_000, 0.01).unwrap();
        assert!(!rep.passes);
        assert!(rep.tail_ratio_hi >= 1.99);

        // ⌈ln n⌉ + 1 passes
        let lg = PhiFunction::ceil_log_plus_one();
        let rep = class_h_check(&lg, 1_000_000, 0.01).unwrap();
        assert!(rep.passes);
        assert!(rep.liminf_is_zero);
    }

    #[test]
    fn ratio_brackets_respect_monotone_bounds() {
        // for φ = ⌈√n⌉ at n = 10^6: φ = 1000, arg = 1001000, φ(arg) = 1001
        let sq = PhiFunction::ceil_sqrt();
        let pt = ratio_at(&sq, 1_000_000, 1).unwrap();
        let f = pt.ratio.to_f64();
        assert!((f - 1.001).abs() < 1e-9);
    }
}
