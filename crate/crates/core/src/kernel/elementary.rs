//! Rigorous enclosures of the few transcendental quantities the algorithm
//! needs: `exp`, `sin`/`cos` of dyadic reals, `pi`, and `1/k!`.
//!
//! All routines return an interval no wider than `2^-prec` (absolute) and
//! retry internally with more working bits until that holds.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use super::approx::{refine_until, MAX_WORKING_BITS};
use super::dyadic::{Dyadic, Rounding};
use super::interval::DyInterval;
use crate::error::{Error, Result};

/// `exp` accepts real arguments with `|x| <= 2^EXP_ARG_LOG2`.
pub const EXP_ARG_LOG2: i64 = 16;
/// `sin`/`cos` accept real arguments with `|x| <= 2^TRIG_ARG_LOG2`.
pub const TRIG_ARG_LOG2: i64 = 10;

const LOG2_E: f64 = std::f64::consts::LOG2_E;

fn check_range(x: &Dyadic, log2_cap: i64, what: &str) -> Result<()> {
    if x.abs() > Dyadic::pow2(log2_cap) {
        return Err(Error::ArgumentOutOfRange(format!(
            "{what} argument {x} exceeds 2^{log2_cap}"
        )));
    }
    Ok(())
}

/// `sum_j t^j / j!` for `|t| <= 1`, with every term rounded to `2^-(w+8)`
/// and the truncated tail added as a symmetric error.
fn exp_series(t: &Dyadic, w: i64) -> DyInterval {
    debug_assert!(t.abs() <= Dyadic::one());
    let grid = w + 8;
    let tiny = Dyadic::pow2(-w);
    let mut sum = DyInterval::from_i64(1);
    let mut term = DyInterval::from_i64(1);
    let mut j: u64 = 1;
    loop {
        term = term.scale(t).div_int(&BigInt::from(j), grid);
        sum = sum.add(&term);
        let m = term.mag();
        if j >= 2 && m <= tiny {
            // remaining terms are bounded by m * sum_i (1/(j+1))^i <= m
            sum = sum.add(&DyInterval::new(-&m, m));
            return sum;
        }
        j += 1;
    }
}

fn pow_rel(base: &DyInterval, mut n: u64, bits: u32) -> DyInterval {
    let mut acc = DyInterval::from_i64(1);
    let mut b = base.clone();
    while n > 0 {
        if n & 1 == 1 {
            acc = acc.mul(&b).round_rel(bits);
        }
        n >>= 1;
        if n > 0 {
            b = b.mul(&b).round_rel(bits);
        }
    }
    acc
}

/// Enclosure of `e^x` of width at most `2^-prec`.
pub fn exp_real(x: &Dyadic, prec: i64) -> Result<DyInterval> {
    check_range(x, EXP_ARG_LOG2, "exp")?;
    if x.is_zero() {
        return Ok(DyInterval::from_i64(1));
    }
    let n = x
        .floor_int()
        .to_i64()
        .expect("range-checked exponent fits in i64");
    let t = x - &Dyadic::from_i64(n);
    let mag_bits = ((n + 1) as f64 * LOG2_E).ceil().max(0.0) as i64;
    let n_bits = 64 - n.unsigned_abs().leading_zeros() as i64;
    let start = prec + mag_bits + n_bits + 16;
    refine_until(prec, start, |w| {
        let et = exp_series(&t, w);
        let out = if n == 0 {
            et
        } else {
            let base = exp_series(&Dyadic::from_i64(n.signum()), w + 4);
            let rel = (w + 2 * n_bits + 8) as u32;
            pow_rel(&base, n.unsigned_abs(), rel)
                .mul(&et)
                .round_rel(rel)
        };
        Ok(out.round_grid(prec + 2))
    })
}

fn sin_cos_series(x: &Dyadic, w: i64, prec: i64) -> (DyInterval, DyInterval) {
    let grid = w + 8;
    let tiny = Dyadic::pow2(-w);
    let two_ax = x.abs().mul_pow2(1);
    let mut s = DyInterval::zero();
    let mut c = DyInterval::from_i64(1);
    let mut term = DyInterval::from_i64(1);
    let mut j: u64 = 1;
    loop {
        term = term.scale(x).div_int(&BigInt::from(j), grid);
        // i^j pattern: j mod 4 = 1 -> +sin, 2 -> -cos, 3 -> -sin, 0 -> +cos
        match j % 4 {
            1 => s = s.add(&term),
            2 => c = c.sub(&term),
            3 => s = s.sub(&term),
            _ => c = c.add(&term),
        }
        let m = term.mag();
        // once j + 1 >= 2|x| the tail is bounded by the last term
        if Dyadic::from_i64(j as i64 + 1) >= two_ax && m <= tiny {
            let tail = DyInterval::new(-&m, m);
            return (
                s.add(&tail).round_grid(prec + 2),
                c.add(&tail).round_grid(prec + 2),
            );
        }
        j += 1;
    }
}

/// Enclosures of `(sin x, cos x)`, each of width at most `2^-prec`.
pub fn sin_cos_real(x: &Dyadic, prec: i64) -> Result<(DyInterval, DyInterval)> {
    check_range(x, TRIG_ARG_LOG2, "sin/cos")?;
    if x.is_zero() {
        return Ok((DyInterval::zero(), DyInterval::from_i64(1)));
    }
    let goal = Dyadic::pow2(-prec);
    let ax = x.abs().to_f64();
    let mut w = prec + (ax * LOG2_E).ceil() as i64 + 16;
    loop {
        if w > MAX_WORKING_BITS {
            return Err(Error::PrecisionOverflow { bits: w });
        }
        let (s, c) = sin_cos_series(x, w, prec);
        if s.width() <= goal && c.width() <= goal {
            return Ok((s, c));
        }
        w += 16 + w / 4;
    }
}

/// `atan(1/n)` on the grid `2^-(w+8)`, tail included.
fn atan_inv(n: u64, w: i64) -> DyInterval {
    let grid = w + 8;
    let tiny = Dyadic::pow2(-(w + 4));
    let n_big = BigInt::from(n);
    let n2 = BigInt::from(n * n);
    let mut pw = DyInterval::from_i64(1).div_int(&n_big, grid);
    let mut sum = pw.clone();
    let mut j: u64 = 1;
    loop {
        pw = pw.div_int(&n2, grid);
        let term = pw.div_int(&BigInt::from(2 * j + 1), grid);
        sum = if j % 2 == 1 {
            sum.sub(&term)
        } else {
            sum.add(&term)
        };
        if term.hi() <= &tiny {
            let h = term.hi().clone();
            return sum.add(&DyInterval::new(-&h, h));
        }
        j += 1;
    }
}

/// Enclosure of `pi` of width at most `2^-prec`.
pub fn pi(prec: i64) -> Result<DyInterval> {
    refine_until(prec, prec + 8, |w| {
        let a = atan_inv(5, w + 4).mul_pow2(4);
        let b = atan_inv(239, w + 4).mul_pow2(2);
        Ok(a.sub(&b).round_grid(prec + 2))
    })
}

pub fn factorial(k: u32) -> BigInt {
    (1..=k as u64).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Enclosure of `1/k!` on the grid `2^-p`.
pub fn recip_factorial(k: u32, p: i64) -> DyInterval {
    let f = factorial(k);
    let one = Dyadic::one();
    DyInterval::new(
        one.div_int(&f, p, Rounding::Floor),
        one.div_int(&f, p, Rounding::Ceil),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(iv: &DyInterval, v: f64, tol: f64) -> bool {
        let (lo, hi) = iv.to_f64_bounds();
        lo - tol <= v && v <= hi + tol
    }

    #[test]
    fn exp_values() {
        for (x, v) in [
            (1.0, std::f64::consts::E),
            (-2.5, (-2.5f64).exp()),
            (10.0, 10f64.exp()),
        ] {
            let iv = exp_real(&Dyadic::from_f64(x), 60).unwrap();
            assert!(iv.width() <= Dyadic::pow2(-60));
            assert!(close(&iv, v, v * 1e-15), "exp({x}) = {iv:?}");
        }
        let big = exp_real(&Dyadic::from_i64(700), 10).unwrap();
        assert!(close(&big, 700f64.exp(), 700f64.exp() * 1e-14));
    }

    #[test]
    fn exp_rejects_huge_arguments() {
        assert!(exp_real(&Dyadic::pow2(17), 10).is_err());
    }

    #[test]
    fn sin_cos_values() {
        for x in [0.5, -3.0, 7.25, 20.0] {
            let (s, c) = sin_cos_real(&Dyadic::from_f64(x), 50).unwrap();
            assert!(s.width() <= Dyadic::pow2(-50) && c.width() <= Dyadic::pow2(-50));
            assert!(close(&s, x.sin(), 1e-14), "sin({x}) = {s:?}");
            assert!(close(&c, x.cos(), 1e-14), "cos({x}) = {c:?}");
        }
    }

    #[test]
    fn pi_value() {
        let p = pi(100).unwrap();
        assert!(close(&p, std::f64::consts::PI, 1e-15));
        assert!(p.width() <= Dyadic::pow2(-100));
    }

    #[test]
    fn reciprocal_factorial_brackets() {
        let r = recip_factorial(5, 30);
        assert!(r.lo().to_f64() <= 1.0 / 120.0 && r.hi().to_f64() >= 1.0 / 120.0);
        assert_eq!(r.width(), Dyadic::pow2(-30));
    }
}
