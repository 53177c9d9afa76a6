//! The soft Pellet predicate and the root-counting routine built on it.
//!
//! `C~_k(m, r)` holds when the soft comparison certifies
//!
//! ```text
//! |f_k(m)| r^k  >  sum_{i<k} |f_i(m)| r^i + H_{k+1} r^{k+1}
//! ```
//!
//! where `H_{k+1}` is the corner magnitude of the box enclosure of `f_{k+1}`
//! over the box of half-width `r` around `m` (see
//! [`PointExpansion::box_magnitude`]).

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::functions::{FuncExpr, PointExpansion};
use crate::kernel::{ApproxReal, ComplexBox, ComplexDyadic, DyInterval, Dyadic};
use crate::soft_compare::{soft_compare, SoftOutcome, Verdict};

/// Dyadic stand-in for the scaling constant `32e`, rounded up to an integer.
pub const C1_HAT: i64 = 87;

fn ceil_log2(n: u64) -> i64 {
    64 - (n.max(1) - 1).leading_zeros() as i64
}

/// Bits needed so that multiplying by `r^i`, `i <= k+1`, cannot inflate a
/// `2^-q` coefficient error past `2^-(q - bits)`.
fn scaling_bits(r: &Dyadic, k: u32) -> i64 {
    (r.log2_ceil().max(0)) * (k as i64 + 1)
}

/// Evaluates `C~_k` on the disc `D(m, r)`, sharing Taylor data through `exp`.
pub fn c_tilde_k_with(exp: &PointExpansion, r: &Dyadic, k: u32, cap: u32) -> Result<SoftOutcome> {
    assert!(r.is_positive(), "predicate radius must be positive");
    let guard = 4 + ceil_log2(k as u64 + 2) + scaling_bits(r, k);
    let powers: Vec<Dyadic> = (0..=k + 1).map(|i| r.pow(i)).collect();
    let left = ApproxReal::new(|p| {
        let q = p as i64 + guard;
        let a = exp.coeff_abs(k, q)?.scale(&powers[k as usize]);
        Ok(a.round_grid(p as i64 + 2))
    });
    let right = ApproxReal::new(|p| {
        let q = p as i64 + guard;
        let mut sum = DyInterval::zero();
        for i in 0..k {
            sum = sum.add(&exp.coeff_abs(i, q)?.scale(&powers[i as usize]));
        }
        let h = exp.box_magnitude(k + 1, r, q)?;
        sum = sum.add(&h.scale(&powers[k as usize + 1]));
        Ok(sum.round_grid(p as i64 + 2))
    });
    soft_compare(&left, &right, cap)
}

/// Evaluates `C~_k(m, r)` for `f`; only a `Positive` verdict counts as holding.
pub fn c_tilde_k(
    f: &FuncExpr,
    m: &ComplexDyadic,
    r: &Dyadic,
    k: u32,
    cap: u32,
) -> Result<SoftOutcome> {
    c_tilde_k_with(&PointExpansion::new(f, m)?, r, k, cap)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "k", rename_all = "lowercase")]
pub enum FirstC {
    Exclude,
    Include(u32),
    Unresolved,
}

/// One predicate evaluation made by [`first_c`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateCall {
    pub k: u32,
    /// The box scaling factor `max(1, c k)` or `max(1, 3 c k)`.
    pub scale: i64,
    pub verdict: Verdict,
    pub bits_used: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FirstCResult {
    pub outcome: FirstC,
    pub bits_used: u32,
    pub predicates_tried: u32,
    pub calls: Vec<PredicateCall>,
}

/// Smallest `k <= n0` such that `C~_k` holds on the discs of both
/// `max(1, c k) B` and `max(1, 3 c k) B`.
pub fn first_c(f: &FuncExpr, b: &ComplexBox, n0: u32, cap: u32) -> Result<FirstCResult> {
    let exp = PointExpansion::new(f, b.midpoint())?;
    let mut calls = Vec::new();
    for k in 0..=n0 {
        let mut holds = true;
        for factor in [1, 3] {
            let scale = (factor * C1_HAT * k as i64).max(1);
            let r = b.scale(&Dyadic::from_i64(scale)).radius_upper();
            let out = c_tilde_k_with(&exp, &r, k, cap)?;
            calls.push(PredicateCall {
                k,
                scale,
                verdict: out.verdict,
                bits_used: out.bits_used,
            });
            if out.verdict != Verdict::Positive {
                holds = false;
                break;
            }
        }
        if holds {
            let outcome = if k == 0 {
                FirstC::Exclude
            } else {
                FirstC::Include(k)
            };
            return Ok(FirstCResult::new(outcome, calls));
        }
    }
    Ok(FirstCResult::new(FirstC::Unresolved, calls))
}

impl FirstCResult {
    fn new(outcome: FirstC, calls: Vec<PredicateCall>) -> Self {
        FirstCResult {
            outcome,
            bits_used: calls.iter().map(|c| c.bits_used).max().unwrap_or(0),
            predicates_tried: calls.len() as u32,
            calls,
        }
    }
}
