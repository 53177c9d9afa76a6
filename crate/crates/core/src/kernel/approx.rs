use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};

use super::dyadic::Dyadic;
use super::interval::DyInterval;
use crate::error::{Error, Result};

/// Largest working precision any refinement loop may reach.
pub const MAX_WORKING_BITS: i64 = 1 << 24;

type RefineFn<'a> = dyn Fn(u32) -> Result<DyInterval> + Send + Sync + 'a;

/// A real number available through enclosures of any requested accuracy.
///
/// `refine(p)` returns an interval containing the value with width at most
/// `2^(1-p)`. The largest `p` ever requested is tracked in `bits_served`.
pub struct ApproxReal<'a> {
    refine_fn: Box<RefineFn<'a>>,
    bits_served: AtomicU32,
}

impl<'a> ApproxReal<'a> {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(u32) -> Result<DyInterval> + Send + Sync + 'a,
    {
        ApproxReal {
            refine_fn: Box::new(f),
            bits_served: AtomicU32::new(0),
        }
    }

    /// A dyadic value known exactly.
    pub fn exact(x: Dyadic) -> Self {
        ApproxReal::new(move |_| Ok(DyInterval::point(x.clone())))
    }

    pub fn refine(&self, p: u32) -> Result<DyInterval> {
        self.bits_served.fetch_max(p, Ordering::Relaxed);
        let out = (self.refine_fn)(p)?;
        debug_assert!(
            out.width() <= Dyadic::pow2(1 - p as i64),
            "refinement at {p} bits returned width {:?}",
            out.width()
        );
        Ok(out)
    }

    pub fn bits_served(&self) -> u32 {
        self.bits_served.load(Ordering::Relaxed)
    }
}

impl fmt::Debug for ApproxReal<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ApproxReal")
            .field("bits_served", &self.bits_served())
            .finish_non_exhaustive()
    }
}

/// Re-runs `compute(working_bits)` with growing working precision until the
/// result is no wider than `2^-target`.
pub fn refine_until<F>(target: i64, start: i64, mut compute: F) -> Result<DyInterval>
where
    F: FnMut(i64) -> Result<DyInterval>,
{
    let goal = Dyadic::pow2(-target);
    let mut w = start.max(target);
    loop {
        if w > MAX_WORKING_BITS {
            return Err(Error::PrecisionOverflow { bits: w });
        }
        let out = compute(w)?;
        let width = out.width();
        if width <= goal {
            return Ok(out);
        }
        // jump by the observed shortfall plus some slack
        let deficit = width.log2_ceil() + target;
        w += deficit.max(0) + 16 + w / 4;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_source_tracks_bits() {
        let a = ApproxReal::exact(Dyadic::from_parts(3, -2));
        assert!(a.refine(5).unwrap().is_point());
        a.refine(3).unwrap();
        assert_eq!(a.bits_served(), 5);
    }

    #[test]
    fn refine_until_meets_target() {
        // pretend each working bit halves the width
        let out = refine_until(40, 10, |w| {
            Ok(DyInterval::new(Dyadic::zero(), Dyadic::pow2(-(w - 5))))
        })
        .unwrap();
        assert!(out.width() <= Dyadic::pow2(-40));
    }
}
