//! Adaptive-precision comparison of two nonnegative reals.
//!
//! At precision `p = 1, 2, 4, ...` both sources are refined and rounded
//! outward with [`DyInterval::round_out`]. Intervals whose interiors are
//! disjoint give a sign (the exact values lie strictly inside the widened
//! intervals, so touching endpoints already separate them). Otherwise the
//! loop gives up with `RelativelyClose` once one interval excludes zero and
//! `p >= 2 - log2 min(1, U)`, where `U` bounds both values from above. That
//! keeps the precision within `2 - log2 min(1, max(d(I), d(J)))` while
//! making full use of it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
#[cfg(doc)]
use crate::kernel::DyInterval;
use crate::kernel::{ApproxReal, Dyadic};

/// Default bound on the precision a single comparison may reach.
pub const DEFAULT_ITERATION_CAP: u32 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Positive,
    Negative,
    RelativelyClose,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SoftOutcome {
    pub verdict: Verdict,
    /// Precision at which the loop stopped; always a power of two.
    pub bits_used: u32,
}

/// True once `p >= 2 - log2 min(1, upper)`.
fn budget_reached(p: u32, upper: &Dyadic) -> bool {
    p >= 2 && upper.mul_pow2(p as i64 - 2) >= Dyadic::one()
}

/// Compares `I` against `J`; `Positive` means `I > J`.
///
/// Fails with [`Error::IterationCap`] if the precision would exceed `cap`,
/// which only happens when both values are zero or extremely tiny.
pub fn soft_compare(i: &ApproxReal<'_>, j: &ApproxReal<'_>, cap: u32) -> Result<SoftOutcome> {
    let mut p: u32 = 1;
    loop {
        let ri = i.refine(p)?;
        let rj = j.refine(p)?;
        let a = ri.round_out(p as i64);
        let b = rj.round_out(p as i64);
        if a.lo() >= b.hi() {
            return Ok(SoftOutcome {
                verdict: Verdict::Positive,
                bits_used: p,
            });
        }
        if b.lo() >= a.hi() {
            return Ok(SoftOutcome {
                verdict: Verdict::Negative,
                bits_used: p,
            });
        }
        let upper = ri.mag().max(rj.mag());
        if (!a.contains_zero() || !b.contains_zero()) && budget_reached(p, &upper) {
            return Ok(SoftOutcome {
                verdict: Verdict::RelativelyClose,
                bits_used: p,
            });
        }
        match p.checked_mul(2) {
            Some(next) if next <= cap => p = next,
            _ => return Err(Error::IterationCap { cap }),
        }
    }
}
