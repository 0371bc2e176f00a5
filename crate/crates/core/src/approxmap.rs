//! Projection of digit sequences into a base, the Cantor set
//! `H = π_β(Σ_{β'})`, and the digit-transport map `h(x) = π_{β'}(ε(x,β))`
//! with its Hölder certificate.
//!
//! Membership in `H` is only ever reported as depth-`n` evidence; proofs of
//! membership are available for periodic digit sequences, where everything
//! stays in the field and the comparisons are exact.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::exactnum::{DyInterval, ExactReal};
use crate::expansion::{digits, orbit_digits, Beta, DigitSeq};
use crate::shift::{advance_state, is_admissible};

/// A rigorous two-sided enclosure of `π_β(ω)` from finitely many digits.
#[derive(Debug, Clone)]
pub struct ProjectedValue {
    pub value_low: ExactReal,
    pub value_high: ExactReal,
    pub terms_used: usize,
}

impl ProjectedValue {
    pub fn exact(v: ExactReal, terms_used: usize) -> Self {
        ProjectedValue { value_low: v.clone(), value_high: v, terms_used }
    }

    pub fn is_exact(&self) -> bool {
        self.value_low == self.value_high
    }

    pub fn midpoint(&self) -> Result<ExactReal> {
        self.value_low
            .add(&self.value_high)?
            .div(&ExactReal::from_int(2))
    }
}

/// How the digits of a projection continue past the computed prefix.
#[derive(Debug, Clone, Copy)]
pub enum DigitSource<'a> {
    /// The listed digits followed by zeros; projection is exact.
    Terminated(&'a [u32]),
    /// Only a prefix is known; the tail is bracketed by the geometric bound
    /// `β^{-n} * top / (β - 1)`.
    Prefix(&'a [u32]),
    /// The word repeated forever; projection is exact in the field.
    Periodic(&'a [u32]),
}

/// `π_β` on a digit source using `n` leading terms.
pub fn project(source: DigitSource<'_>, beta: &Beta, n: usize) -> Result<ProjectedValue> {
    match source {
        DigitSource::Terminated(w) => {
            let prefix = &w[..n.min(w.len())];
            check_alphabet(beta, w)?;
            let v = crate::expansion::convergent_of_digits(prefix, beta)?;
            // digits beyond the prefix must be zero for exactness
            if w.len() > n && w[n..].iter().any(|&d| d != 0) {
                return Err(Error::Domain("terminated source has nonzero digits past n"));
            }
            Ok(ProjectedValue::exact(v, n))
        }
        DigitSource::Prefix(w) => {
            if w.len() < n {
                return Err(Error::Domain("prefix shorter than requested terms"));
            }
            check_alphabet(beta, w)?;
            let low = crate::expansion::convergent_of_digits(&w[..n], beta)?;
            let tail = tail_bound(beta, n)?;
            Ok(ProjectedValue { value_high: low.add(&tail)?, value_low: low, terms_used: n })
        }
        DigitSource::Periodic(w) => {
            check_alphabet(beta, w)?;
            Ok(ProjectedValue::exact(periodic_value(w, beta)?, n))
        }
    }
}

fn check_alphabet(beta: &Beta, w: &[u32]) -> Result<()> {
    if w.iter().any(|&d| d > beta.alphabet_top()) {
        return Err(Error::Domain("digit outside the alphabet"));
    }
    Ok(())
}

/// Geometric tail bound `β^{-n} * top / (β - 1)`.
fn tail_bound(beta: &Beta, n: usize) -> Result<ExactReal> {
    let top = ExactReal::from_int(beta.alphabet_top());
    let denom = beta.value().sub(&ExactReal::one())?;
    beta.value().pow_i64(-(n as i64))?.mul(&top)?.div(&denom)
}

/// Exact value of `π_β(w^∞) = value(w) / (1 - β^{-p})`.
pub fn periodic_value(word: &[u32], beta: &Beta) -> Result<ExactReal> {
    if word.is_empty() {
        return Err(Error::Domain("periodic word must be nonempty"));
    }
    let v = crate::expansion::convergent_of_digits(word, beta)?;
    let shrink = beta.value().pow_i64(-(word.len() as i64))?;
    v.div(&ExactReal::one().sub(&shrink)?)
}

/// Is the infinite periodic sequence `w^∞` strictly admissible for β, i.e.
/// `σ^k(w^∞) ≺ ε*(1,β)` for every shift `k`?
///
/// Decidable exactly when ε* is purely periodic; otherwise decided within
/// the certified ε* horizon (equality through the horizon errs on the side
/// of `HorizonExceeded`).
pub fn periodic_strictly_admissible(beta: &Beta, word: &[u32]) -> Result<bool> {
    check_alphabet(beta, word)?;
    let p = word.len();
    for k in 0..p {
        let compare_len = match beta.eps_star_period() {
            Some(q) => p.lcm(&q) + q,
            None => beta.one_depth(),
        };
        let mut decided = false;
        for i in 0..compare_len {
            let d = word[(k + i) % p];
            let s = beta.eps_star_digit(i)?;
            match d.cmp(&s) {
                Ordering::Less => {
                    decided = true;
                    break;
                }
                Ordering::Greater => return Ok(false),
                Ordering::Equal => {}
            }
        }
        if !decided {
            match beta.eps_star_period() {
                // periodic vs periodic: agreement up to lcm + period means equality
                Some(_) => return Ok(false),
                None => {
                    return Err(Error::HorizonExceeded {
                        needed: compare_len + 1,
                        horizon: beta.one_depth(),
                    })
                }
            }
        }
    }
    Ok(true)
}

/// Depth-`n` evidence that `x ∈ H_β^{β'} = π_β(Σ_{β'})`: the first `n`
/// digits of `ε(x, β)` form a β'-admissible word. This is a necessary
/// condition at every depth; exact membership is a limit statement.
pub fn in_h(x: &ExactReal, beta: &Beta, beta_prime: &Beta, n: usize) -> Result<bool> {
    check_base_pair(beta, beta_prime)?;
    let seq = digits(x, beta, n)?;
    is_admissible(beta_prime, seq.digits())
}

fn check_base_pair(beta: &Beta, beta_prime: &Beta) -> Result<()> {
    if beta.value().compare(beta_prime.value())? != Ordering::Greater {
        return Err(Error::Domain("h requires β > β' > 1"));
    }
    Ok(())
}

/// `h(x) = π_{β'}(ε(x, β))` as a rigorous enclosure from `n` digits.
///
/// Fails with `NotInDomain` at the first depth where the digits of `x`
/// leave the β'-shift.
pub fn h_map(x: &ExactReal, beta: &Beta, beta_prime: &Beta, n: usize) -> Result<ProjectedValue> {
    check_base_pair(beta, beta_prime)?;
    let (digs, _, terminated) = orbit_digits(x, beta, n)?;
    let mut state = 0usize;
    for (i, &d) in digs.iter().enumerate() {
        match advance_state(beta_prime, state, d)? {
            Some(next) => state = next,
            None => return Err(Error::NotInDomain { depth: i + 1 }),
        }
    }
    if terminated.is_some() {
        project(DigitSource::Terminated(&digs), beta_prime, n)
    } else {
        project(DigitSource::Prefix(&digs), beta_prime, n)
    }
}

/// Exact `h` on a provably admissible periodic point: both `x = π_β(w^∞)`
/// and `h(x) = π_{β'}(w^∞)` are field elements.
pub fn h_exact_periodic(
    word: &[u32],
    beta: &Beta,
    beta_prime: &Beta,
) -> Result<(ExactReal, ExactReal)> {
    check_base_pair(beta, beta_prime)?;
    if !periodic_strictly_admissible(beta_prime, word)? {
        return Err(Error::NotInDomain { depth: word.len() });
    }
    Ok((periodic_value(word, beta)?, periodic_value(word, beta_prime)?))
}

/// Rigorous check of the Hölder inequality
/// `|h(x) - h(y)| <= β'^(M+2) |x - y|^(log β' / log β)`
/// on exact values; refines precision until the comparison is certified.
pub fn holder_certified(
    dx: &ExactReal,
    dh: &ExactReal,
    beta: &Beta,
    beta_prime: &Beta,
    m_sup: u64,
    budget_bits: u32,
) -> Result<bool> {
    if dh.is_zero() {
        return Ok(true);
    }
    if dx.is_zero() {
        return Ok(false);
    }
    let dx_abs = abs(dx)?;
    let dh_abs = abs(dh)?;
    let mut prec = 128u32;
    loop {
        let ln_dh = dh_abs.to_dyadic(prec)?.ln(prec)?;
        let ln_dx = dx_abs.to_dyadic(prec)?.ln(prec)?;
        let ln_bp = beta_prime.value().to_dyadic(prec)?.ln(prec)?;
        let ln_b = beta.value().to_dyadic(prec)?.ln(prec)?;
        let alpha = ln_bp.div(&ln_b, prec)?;
        let factor = DyInterval::point(crate::exactnum::Dyadic::from_i64(m_sup as i64 + 2));
        // rhs = (M+2) ln β' + α ln|dx|
        let rhs = factor.mul(&ln_bp, prec).add(&alpha.mul(&ln_dx, prec), prec);
        if let Some(ord) = ln_dh.try_cmp(&rhs) {
            return Ok(ord != Ordering::Greater);
        }
        if prec >= budget_bits {
            return Err(Error::PrecisionExhausted { budget_bits });
        }
        prec *= 2;
    }
}

fn abs(v: &ExactReal) -> Result<ExactReal> {
    Ok(if v.sign()? < 0 { v.neg() } else { v.clone() })
}

/// Recompute digits of an exact `h(x)` under β' and compare with the digits
/// of `x` under β (digit transport, Prop-level identity on exact points).
pub fn digit_transport_holds(
    x: &ExactReal,
    hx: &ExactReal,
    beta: &Beta,
    beta_prime: &Beta,
    depth: usize,
) -> Result<bool> {
    let a: DigitSeq = digits(x, beta, depth)?;
    let b: DigitSeq = digits(hx, beta_prime, depth)?;
    Ok(a.digits() == b.digits())
}

/// All binary words of length `p` with no `11` factor, including across the
/// periodic wrap, whose infinite repetition is strictly golden-admissible.
/// Used to sample exact Hölder pairs.
pub fn eleven_free_periodic_words(p: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for bits in 0u64..(1u64 << p) {
        let w: Vec<u32> = (0..p).map(|i| ((bits >> (p - 1 - i)) & 1) as u32).collect();
        let wrap_ok = (0..p).all(|i| !(w[i] == 1 && w[(i + 1) % p] == 1));
        if wrap_ok {
            out.push(w);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn beta_int(b: u32) -> Beta {
        Beta::new(ExactReal::from_int(b)).unwrap()
    }

    fn beta_rat(p: i64, q: i64) -> Beta {
        Beta::new(ExactReal::from_ratio(p, q).unwrap()).unwrap()
    }

    fn beta_golden() -> Beta {
        Beta::new(ExactReal::quadratic(1, 1, 2, 5).unwrap()).unwrap()
    }

    fn rat(p: i64, q: i64) -> ExactReal {
        ExactReal::from_ratio(p, q).unwrap()
    }

    #[test]
    fn project_examples() {
        let b2 = beta_int(2);
        let p = project(DigitSource::Terminated(&[1]), &b2, 1).unwrap();
        assert!(p.is_exact());
        assert_eq!(p.value_low, rat(1, 2));

        let g = beta_golden();
        let p = project(DigitSource::Prefix(&[1, 0, 1, 0]), &g, 4).unwrap();
        // partial = 1/β + 1/β³
        let expect = g
            .value()
            .pow_i64(-1)
            .unwrap()
            .add(&g.value().pow_i64(-3).unwrap())
            .unwrap();
        assert_eq!(p.value_low.compare(&expect).unwrap(), Ordering::Equal);
        let tail = g
            .value()
            .pow_i64(-4)
            .unwrap()
            .div(&g.value().sub(&ExactReal::one()).unwrap())
            .unwrap();
        let width = p.value_high.sub(&p.value_low).unwrap();
        assert_eq!(width.compare(&tail).unwrap(), Ordering::Equal);

        let b32 = beta_rat(3, 2);
        let seq = digits(&rat(2, 3), &b32, 3).unwrap();
        assert!(seq.terminated());
        let p = project(DigitSource::Terminated(seq.digits()), &b32, 3).unwrap();
        assert!(p.is_exact());
        assert_eq!(p.value_low, rat(2, 3));
    }

    #[test]
    fn periodic_values_are_exact() {
        let b2 = beta_int(2);
        // (10)^∞ in base 2 = (1/2)/(1 - 1/4) = 2/3
        assert_eq!(periodic_value(&[1, 0], &b2).unwrap(), rat(2, 3));
        let g = beta_golden();
        // (10)^∞ under golden sums to exactly 1 (it is ε*)
        let v = periodic_value(&[1, 0], &g).unwrap();
        assert_eq!(v.compare(&ExactReal::one()).unwrap(), Ordering::Equal);
    }

    #[test]
    fn in_h_examples() {
        let b2 = beta_int(2);
        let g = beta_golden();
        assert!(in_h(&rat(2, 3), &b2, &g, 8).unwrap());
        assert!(!in_h(&rat(3, 4), &b2, &g, 2).unwrap());
        let b32 = beta_rat(3, 2);
        assert!(in_h(&rat(2, 3), &b2, &b32, 3).unwrap());
    }

    #[test]
    fn h_map_examples() {
        let b2 = beta_int(2);
        let g = beta_golden();
        let p = h_map(&ExactReal::zero(), &b2, &g, 5).unwrap();
        assert!(p.is_exact());
        assert!(p.value_low.is_zero());

        let p = h_map(&rat(1, 2), &b2, &g, 1).unwrap();
        assert!(p.is_exact());
        let inv = g.value().pow_i64(-1).unwrap();
        assert_eq!(p.value_low.compare(&inv).unwrap(), Ordering::Equal);

        // x = 2/3 has binary digits (10)^∞; π_golden((10)^∞) = 1
        let p = h_map(&rat(2, 3), &b2, &g, 20).unwrap();
        assert!(p.value_low.compare(&ExactReal::one()).unwrap() == Ordering::Less);
        assert!(p.value_high.compare(&ExactReal::one()).unwrap() != Ordering::Less);
        let width = p.value_high.sub(&p.value_low).unwrap();
        let bound = g
            .value()
            .pow_i64(-20)
            .unwrap()
            .div(&g.value().sub(&ExactReal::one()).unwrap())
            .unwrap();
        assert!(width.compare(&bound).unwrap() != Ordering::Greater);

        // 3/4 = 0.11 in binary leaves H at depth 2
        assert!(matches!(
            h_map(&rat(3, 4), &b2, &g, 5),
            Err(Error::NotInDomain { depth: 2 })
        ));
    }

    #[test]
    fn periodic_admissibility_for_golden() {
        let g = beta_golden();
        assert!(periodic_strictly_admissible(&g, &[1, 0, 0]).unwrap());
        assert!(periodic_strictly_admissible(&g, &[0]).unwrap());
        // (10)^∞ equals ε* itself: not strictly below it
        assert!(!periodic_strictly_admissible(&g, &[1, 0]).unwrap());
        assert!(!periodic_strictly_admissible(&g, &[1, 1, 0]).unwrap());
    }

    #[test]
    fn digit_transport_on_periodic_points() {
        let b2 = beta_int(2);
        let g = beta_golden();
        for word in [&[1u32, 0, 0][..], &[0, 1, 0, 0][..], &[1, 0, 0, 0, 1, 0][..]] {
            if !periodic_strictly_admissible(&g, word).unwrap() {
                continue;
            }
            let (x, hx) = h_exact_periodic(word, &b2, &g).unwrap();
            assert!(digit_transport_holds(&x, &hx, &b2, &g, 40).unwrap());
        }
    }

    #[test]
    fn order_preservation_on_periodic_points() {
        let b2 = beta_int(2);
        let g = beta_golden();
        let mut points = Vec::new();
        for p in 2..=6usize {
            for w in eleven_free_periodic_words(p) {
                if periodic_strictly_admissible(&g, &w).unwrap() {
                    points.push(h_exact_periodic(&w, &b2, &g).unwrap());
                }
            }
        }
        points.sort_by(|a, b| a.0.compare(&b.0).unwrap());
        for pair in points.windows(2) {
            let (x0, h0) = &pair[0];
            let (x1, h1) = &pair[1];
            if x0.compare(x1).unwrap() == Ordering::Less {
                assert_eq!(h0.compare(h1).unwrap(), Ordering::Less);
            }
        }
    }

    #[test]
    fn holder_certificate_on_pairs() {
        let b2 = beta_int(2);
        let g = beta_golden();
        let words = eleven_free_periodic_words(6);
        let pts: Vec<_> = words
            .iter()
            .filter(|w| periodic_strictly_admissible(&g, w).unwrap())
            .map(|w| h_exact_periodic(w, &b2, &g).unwrap())
            .collect();
        assert!(pts.len() > 5);
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                let dx = pts[i].0.sub(&pts[j].0).unwrap();
                let dh = pts[i].1.sub(&pts[j].1).unwrap();
                assert!(holder_certified(&dx, &dh, &b2, &g, 1, 4096).unwrap());
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn projection_brackets_contain_limit(bits in 0u64..64, p in 2usize..7) {
            // periodic 11-free word: exact value falls inside every prefix bracket
            let g = beta_golden();
            let w: Vec<u32> = (0..p).map(|i| ((bits >> i) & 1) as u32).collect();
            prop_assume!((0..p).all(|i| !(w[i] == 1 && w[(i + 1) % p] == 1)));
            let exact = periodic_value(&w, &g).unwrap();
            let mut stream = Vec::new();
            for r in 0..5 {
                let _ = r;
                stream.extend_from_slice(&w);
            }
            for n in 1..stream.len() {
                let pr = project(DigitSource::Prefix(&stream), &g, n).unwrap();
                prop_assert!(pr.value_low.compare(&exact).unwrap() != Ordering::Greater);
                prop_assert!(exact.compare(&pr.value_high).unwrap() != Ordering::Greater);
            }
        }
    }
}
