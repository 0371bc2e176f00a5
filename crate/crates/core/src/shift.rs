//! The β-shift as a combinatorial object: admissibility, word counting,
//! lexicographic successors, and exact cylinder geometry.
//!
//! Two independent views of admissibility are kept side by side. The
//! defining criterion compares every suffix of a word lexicographically
//! against ε*(1,β). The working engine is the follower-interval automaton:
//! after reading a word, the state is the length `j` of the maximal suffix
//! matching a prefix of ε*, the largest next digit is `ε*_{j+1}`, and the
//! image of the cylinder under `T^n` is `[0, t_j)` with `t_j` the
//! quasi-orbit state, which yields exact cylinder lengths `β^{-n} t_j`.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::ExactReal;
use crate::expansion::{convergent_of_digits, Beta};

/// A finite digit word over the alphabet of a base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    digits: Vec<u32>,
}

impl Word {
    pub fn new(beta: &Beta, digits: Vec<u32>) -> Result<Self> {
        if digits.is_empty() {
            return Err(Error::Domain("words must have length >= 1"));
        }
        if digits.iter().any(|&d| d > beta.alphabet_top()) {
            return Err(Error::Domain("digit outside the alphabet"));
        }
        Ok(Word { digits })
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }
}

/// One step of the follower automaton from match-length state `j` on digit
/// `d`: `Some(next_state)` when the extended word stays admissible.
pub fn advance_state(beta: &Beta, j: usize, d: u32) -> Result<Option<usize>> {
    let top = beta.eps_star_digit(j)?;
    Ok(match d.cmp(&top) {
        Ordering::Greater => None,
        Ordering::Equal => Some(j + 1),
        Ordering::Less => Some(0),
    })
}

/// Run the follower automaton over a word: final state, or `None` when the
/// word is inadmissible.
pub fn state_of(beta: &Beta, digits: &[u32]) -> Result<Option<usize>> {
    let mut j = 0usize;
    for &d in digits {
        match advance_state(beta, j, d)? {
            Some(next) => j = next,
            None => return Ok(None),
        }
    }
    Ok(Some(j))
}

/// Parry's criterion on finite words: every suffix is lexicographically
/// no greater than the ε* prefix of matching length.
pub fn is_admissible(beta: &Beta, digits: &[u32]) -> Result<bool> {
    let n = digits.len();
    for k in 0..n {
        let suffix = &digits[k..];
        match lex_cmp_vs_star(beta, suffix)? {
            Ordering::Greater => return Ok(false),
            _ => {}
        }
    }
    Ok(true)
}

fn lex_cmp_vs_star(beta: &Beta, word: &[u32]) -> Result<Ordering> {
    for (i, &d) in word.iter().enumerate() {
        let s = beta.eps_star_digit(i)?;
        match d.cmp(&s) {
            Ordering::Equal => continue,
            other => return Ok(other),
        }
    }
    Ok(Ordering::Equal)
}

/// Exact count of admissible words of length `n` (♯Σ_β^n) by dynamic
/// programming over the follower state.
pub fn count_admissible(beta: &Beta, n: usize) -> Result<BigUint> {
    if n < 1 {
        return Err(Error::Domain("n must be at least 1"));
    }
    // With a purely periodic ε* the state space collapses modulo the period.
    let period = beta.eps_star_period();
    let nstates = |step: usize| -> usize {
        match period {
            Some(k) => k,
            None => step + 1,
        }
    };
    let mut counts: Vec<BigUint> = alloc::vec![BigUint::zero(); nstates(0)];
    counts[0] = BigUint::one();
    for step in 0..n {
        let mut next: Vec<BigUint> = alloc::vec![BigUint::zero(); nstates(step + 1)];
        for (j, c) in counts.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let top = beta.eps_star_digit(j)?;
            if top > 0 {
                let inc = c * top;
                next[0] += inc;
            }
            let tgt = match period {
                Some(k) => (j + 1) % k,
                None => j + 1,
            };
            next[tgt] += c;
        }
        counts = next;
    }
    Ok(counts.iter().sum())
}

/// Enumerate all admissible words of length `n` in lexicographic order,
/// refusing to materialize more than `limit` words.
pub fn enumerate_admissible(beta: &Beta, n: usize, limit: u128) -> Result<Vec<Word>> {
    let count = count_admissible(beta, n)?;
    if count > BigUint::from(limit) {
        let requested = u128::try_from(&count).unwrap_or(u128::MAX);
        return Err(Error::MemoryGuard { requested, limit });
    }
    let mut out = Vec::new();
    let mut word = alloc::vec![0u32; n];
    let mut states = alloc::vec![0usize; n + 1];
    let mut depth = 0usize;
    let mut digit = 0u32;
    loop {
        if depth == n {
            out.push(Word { digits: word.clone() });
            // backtrack to the last position that can still grow
            match step_back(beta, &mut word, &states, &mut depth)? {
                Some(d) => digit = d,
                None => break,
            }
            continue;
        }
        match advance_state(beta, states[depth], digit)? {
            Some(next) => {
                word[depth] = digit;
                states[depth + 1] = next;
                depth += 1;
                digit = 0;
            }
            None => match step_back_from(beta, &mut word, &states, &mut depth, digit)? {
                Some(d) => digit = d,
                None => break,
            },
        }
    }
    Ok(out)
}

fn step_back(
    beta: &Beta,
    word: &mut [u32],
    states: &[usize],
    depth: &mut usize,
) -> Result<Option<u32>> {
    while *depth > 0 {
        *depth -= 1;
        let d = word[*depth];
        let top = beta.eps_star_digit(states[*depth])?;
        if d < top {
            return Ok(Some(d + 1));
        }
    }
    Ok(None)
}

fn step_back_from(
    beta: &Beta,
    word: &mut [u32],
    states: &[usize],
    depth: &mut usize,
    failed_digit: u32,
) -> Result<Option<u32>> {
    // `failed_digit` exceeded the ceiling at `depth`; backtrack as if the
    // position were exhausted.
    let _ = failed_digit;
    step_back(beta, word, states, depth)
}

/// The lexicographically smallest admissible word of the same length
/// strictly greater than `w`, or `None` when `w` is maximal.
pub fn next_admissible(beta: &Beta, w: &Word) -> Result<Option<Word>> {
    let n = w.len();
    let mut states = Vec::with_capacity(n + 1);
    states.push(0usize);
    for (i, &d) in w.digits.iter().enumerate() {
        match advance_state(beta, states[i], d)? {
            Some(next) => states.push(next),
            None => return Err(Error::Domain("word is not admissible")),
        }
    }
    for i in (0..n).rev() {
        let top = beta.eps_star_digit(states[i])?;
        if w.digits[i] < top {
            let mut digits = w.digits[..i].to_vec();
            digits.push(w.digits[i] + 1);
            digits.resize(n, 0); // zero padding preserves admissibility
            return Ok(Some(Word { digits }));
        }
    }
    Ok(None)
}

/// The cylinder `I(ε_1 … ε_n)` with exact endpoints, length and fullness.
#[derive(Debug, Clone)]
pub struct CylinderInterval {
    pub word: Word,
    pub left: ExactReal,
    pub right: ExactReal,
    pub length: ExactReal,
    pub full: bool,
}

/// Exact cylinder of an admissible word. The right endpoint is computed
/// from the lexicographic successor (or 1 for the maximal word) and
/// cross-checked against the follower-interval identity
/// `|I(w)| = β^{-n} t_j`.
pub fn cylinder(beta: &Beta, w: &Word) -> Result<CylinderInterval> {
    let n = w.len();
    let state = state_of(beta, w.digits())?
        .ok_or(Error::Domain("word is not admissible"))?;
    let left = convergent_of_digits(w.digits(), beta)?;
    let right = match next_admissible(beta, w)? {
        Some(succ) => convergent_of_digits(succ.digits(), beta)?,
        None => ExactReal::one(),
    };
    let length = right.sub(&left)?;
    let t = beta.t_state(state)?;
    let expected = beta.value().pow_i64(-(n as i64))?.mul(&t)?;
    if length.compare(&expected)? != Ordering::Equal {
        return Err(Error::AssertionFailure("cylinder length disagrees with follower height"));
    }
    let full = t.compare(&ExactReal::one())? == Ordering::Equal;
    Ok(CylinderInterval { word: w.clone(), left, right, length, full })
}

/// Append `m` zeros to an admissible word; for `m > M_n(β)` the result is a
/// full cylinder of exact length `β^{-(n+m)}`, and this is asserted.
pub fn zero_pad_full(beta: &Beta, w: &Word, m: usize) -> Result<CylinderInterval> {
    let mut digits = w.digits().to_vec();
    let n = digits.len();
    digits.resize(n + m, 0);
    let padded = Word { digits };
    let cyl = cylinder(beta, &padded)?;
    let expected = beta.value().pow_i64(-((n + m) as i64))?;
    if !cyl.full || cyl.length.compare(&expected)? != Ordering::Equal {
        return Err(Error::AssertionFailure(
            "zero-padded cylinder is not full at the expected length",
        ));
    }
    Ok(cyl)
}
