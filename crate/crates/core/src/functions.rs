//! Holomorphic functions with validated enclosures of their normalized
//! Taylor coefficients `f_k = f^(k) / k!`, both at dyadic points and over
//! boxes.
//!
//! Box enclosures use the Taylor expansion at the box center:
//!
//! ```text
//! f_k(z) = sum_{j>=0} C(k+j, j) f_{k+j}(m) (z-m)^j,   |z-m| <= rho
//! ```
//!
//! so the range of `f_k` over the box is contained in the rectangle
//! `f_k(m) +- T_k(rho)` with `T_k(rho) = sum_{j>=1} C(k+j, j) |f_{k+j}(m)| rho^j`.
//! The tail is a finite sum for polynomials, `|e^m| (e^rho - 1) / k!` for exp
//! and a `sinh`/`cosh` combination for sin.

use std::sync::Mutex;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::elementary::{exp_real, recip_factorial, sin_cos_real, TRIG_ARG_LOG2};
use crate::kernel::{sqrt2_upper, ComplexDyadic, ComplexInterval, Disc, DyInterval, Dyadic};

/// An entire function: a polynomial with dyadic complex coefficients
/// (index `i` is the coefficient of `z^i`), `exp`, or `sin`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum FuncExpr {
    Poly { coeffs: Vec<ComplexDyadic> },
    Exp,
    Sin,
}

/// Enclosure of a Taylor coefficient at a point or over a box.
pub type CoeffEnclosure = ComplexInterval;

fn binomial(n: u64, k: u64) -> BigInt {
    let k = k.min(n - k);
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

impl FuncExpr {
    /// Polynomial from coefficients in increasing degree; the leading
    /// coefficient must be nonzero.
    pub fn poly(coeffs: Vec<ComplexDyadic>) -> Result<Self> {
        let f = FuncExpr::Poly { coeffs };
        f.validate()?;
        Ok(f)
    }

    /// Polynomial with real integer coefficients.
    pub fn poly_int(coeffs: &[i64]) -> Result<Self> {
        Self::poly(
            coeffs
                .iter()
                .map(|&c| ComplexDyadic::from_i64(c, 0))
                .collect(),
        )
    }

    /// Monic polynomial `prod (z - alpha)` over the given roots.
    pub fn from_roots(roots: &[ComplexDyadic]) -> Self {
        let mut coeffs = vec![ComplexDyadic::from_i64(1, 0)];
        for a in roots {
            let mut next = vec![ComplexDyadic::zero(); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] = &next[i + 1] + c;
                next[i] = &next[i] - &(c * a);
            }
            coeffs = next;
        }
        FuncExpr::Poly { coeffs }
    }

    pub fn validate(&self) -> Result<()> {
        if let FuncExpr::Poly { coeffs } = self {
            match coeffs.last() {
                None => {
                    return Err(Error::InvalidInput(
                        "polynomial without coefficients".into(),
                    ))
                }
                Some(c) if c.is_zero() => {
                    return Err(Error::InvalidInput(
                        "polynomial leading coefficient is zero".into(),
                    ))
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn degree(&self) -> Option<usize> {
        match self {
            FuncExpr::Poly { coeffs } => Some(coeffs.len() - 1),
            _ => None,
        }
    }

    pub fn is_poly(&self) -> bool {
        matches!(self, FuncExpr::Poly { .. })
    }

    /// Exact Taylor coefficients `f_0(m), ..., f_d(m)` of a polynomial.
    pub fn taylor_shift(coeffs: &[ComplexDyadic], m: &ComplexDyadic) -> Vec<ComplexDyadic> {
        let mut b = coeffs.to_vec();
        let n = b.len();
        for i in 0..n.saturating_sub(1) {
            for j in (i..n - 1).rev() {
                b[j] = &b[j] + &(m * &b[j + 1]);
            }
        }
        b
    }
}

/// Cached values at the expansion point. For exp, `first = e^m` and
/// `scale = e^{Re m}`; for sin, `first = sin m` and `second = cos m`.
#[derive(Clone)]
struct TranscendentalBase {
    prec: i64,
    first: ComplexInterval,
    second: ComplexInterval,
    scale: DyInterval,
}

enum Kind {
    Poly(Vec<ComplexDyadic>),
    Exp(Mutex<Option<TranscendentalBase>>),
    Sin(Mutex<Option<TranscendentalBase>>),
}

/// Taylor data of `f` at a fixed dyadic point, computed lazily and cached
/// at the highest precision requested so far.
pub struct PointExpansion {
    m: ComplexDyadic,
    kind: Kind,
}

fn magnitude_bits(x: &DyInterval) -> i64 {
    x.mag().log2_ceil().max(0)
}

fn cmag_bits(z: &ComplexInterval) -> i64 {
    magnitude_bits(&z.re).max(magnitude_bits(&z.im))
}

/// Re-runs `compute(extra)` with growing guard bits until both sides of the
/// rectangle are at most `2^-p` wide.
fn tighten<F>(p: i64, mut compute: F) -> Result<ComplexInterval>
where
    F: FnMut(i64) -> Result<ComplexInterval>,
{
    let goal = Dyadic::pow2(-p);
    let mut extra = 0;
    loop {
        let out = compute(extra)?;
        if out.max_width() <= goal {
            return Ok(out);
        }
        extra += 16 + extra / 2;
        if p + extra > crate::kernel::MAX_WORKING_BITS {
            return Err(Error::PrecisionOverflow { bits: p + extra });
        }
    }
}

fn tighten_real<F>(p: i64, mut compute: F) -> Result<DyInterval>
where
    F: FnMut(i64) -> Result<DyInterval>,
{
    crate::kernel::refine_until(p, p, |w| compute(w - p))
}

impl PointExpansion {
    pub fn new(f: &FuncExpr, m: &ComplexDyadic) -> Result<Self> {
        let kind = match f {
            FuncExpr::Poly { coeffs } => Kind::Poly(FuncExpr::taylor_shift(coeffs, m)),
            FuncExpr::Exp | FuncExpr::Sin => {
                let cap = Dyadic::pow2(TRIG_ARG_LOG2);
                if m.re.abs() > cap || m.im.abs() > cap {
                    return Err(Error::ArgumentOutOfRange(format!(
                        "point ({}, {}) outside |Re|, |Im| <= 2^{TRIG_ARG_LOG2}",
                        m.re, m.im
                    )));
                }
                if matches!(f, FuncExpr::Exp) {
                    Kind::Exp(Mutex::new(None))
                } else {
                    Kind::Sin(Mutex::new(None))
                }
            }
        };
        Ok(PointExpansion { m: m.clone(), kind })
    }

    pub fn point(&self) -> &ComplexDyadic {
        &self.m
    }

    fn exp_base(&self, prec: i64) -> Result<TranscendentalBase> {
        let x = &self.m.re;
        let y = &self.m.im;
        let first = tighten(prec, |extra| {
            let q = prec + 3 + extra;
            let ex = exp_real(x, q)?;
            let (s, c) = sin_cos_real(y, q + magnitude_bits(&ex))?;
            Ok(ComplexInterval::new(c.mul(&ex), s.mul(&ex)).round_grid(prec + 2))
        })?;
        Ok(TranscendentalBase {
            prec,
            first,
            second: ComplexInterval::zero(),
            scale: exp_real(x, prec + 2)?,
        })
    }

    fn sin_base(&self, prec: i64) -> Result<TranscendentalBase> {
        let x = &self.m.re;
        let y = &self.m.im;
        let goal = Dyadic::pow2(-prec);
        let mut extra = 0;
        loop {
            let q = prec + 3 + extra;
            let ep = exp_real(y, q)?;
            let en = exp_real(&-y, q)?;
            let cosh = ep.add(&en).mul_pow2(-1);
            let sinh = ep.sub(&en).mul_pow2(-1);
            let (s, c) = sin_cos_real(x, q + magnitude_bits(&cosh))?;
            let first = ComplexInterval::new(s.mul(&cosh), c.mul(&sinh)).round_grid(prec + 2);
            let second =
                ComplexInterval::new(c.mul(&cosh), s.mul(&sinh).neg()).round_grid(prec + 2);
            if first.max_width() <= goal && second.max_width() <= goal {
                return Ok(TranscendentalBase {
                    prec,
                    first,
                    second,
                    scale: DyInterval::zero(),
                });
            }
            extra += 16 + extra / 2;
            if q > crate::kernel::MAX_WORKING_BITS {
                return Err(Error::PrecisionOverflow { bits: q });
            }
        }
    }

    fn base(&self, prec: i64) -> Result<TranscendentalBase> {
        let (slot, is_exp) = match &self.kind {
            Kind::Exp(s) => (s, true),
            Kind::Sin(s) => (s, false),
            Kind::Poly(_) => unreachable!("polynomials have exact coefficients"),
        };
        if let Some(b) = slot.lock().unwrap().as_ref() {
            if b.prec >= prec {
                return Ok(b.clone());
            }
        }
        let b = if is_exp {
            self.exp_base(prec)?
        } else {
            self.sin_base(prec)?
        };
        let mut guard = slot.lock().unwrap();
        if guard.as_ref().is_none_or(|old| old.prec < b.prec) {
            *guard = Some(b.clone());
        }
        Ok(b)
    }

    /// `sin^(k)(m)`: the derivatives cycle through sin, cos, -sin, -cos.
    fn sin_cycle(b: &TranscendentalBase, k: u32) -> ComplexInterval {
        match k % 4 {
            0 => b.first.clone(),
            1 => b.second.clone(),
            2 => b.first.neg(),
            _ => b.second.neg(),
        }
    }

    /// Enclosure of `f_k(m)` with both sides at most `2^-p` wide.
    pub fn coeff(&self, k: u32, p: i64) -> Result<CoeffEnclosure> {
        match &self.kind {
            Kind::Poly(a) => Ok(a
                .get(k as usize)
                .map(ComplexInterval::point)
                .unwrap_or_else(ComplexInterval::zero)),
            Kind::Exp(_) | Kind::Sin(_) => {
                if k == 0 {
                    return Ok(self.base(p)?.first);
                }
                tighten(p, |extra| {
                    let b = self.base(p + 1 + extra)?;
                    let v = match &self.kind {
                        Kind::Exp(_) => b.first,
                        _ => Self::sin_cycle(&b, k),
                    };
                    let rf = recip_factorial(k, p + 3 + extra + cmag_bits(&v));
                    Ok(v.scale(&rf).round_grid(p + 2))
                })
            }
        }
    }

    /// Enclosure of `|f_k(m)|` of width at most `2^-p`.
    pub fn coeff_abs(&self, k: u32, p: i64) -> Result<DyInterval> {
        tighten_real(p, |extra| {
            let c = self.coeff(k, p + 2 + extra)?;
            Ok(c.abs(p + 3 + extra))
        })
    }

    /// Enclosure of the real tail bound `T_k(rho)`, width at most `2^-p`.
    pub fn tail(&self, k: u32, rho: &Dyadic, p: i64) -> Result<DyInterval> {
        if rho.is_zero() {
            return Ok(DyInterval::zero());
        }
        match &self.kind {
            Kind::Poly(a) => {
                let d = a.len() as u64;
                if k as u64 + 1 >= d {
                    return Ok(DyInterval::zero());
                }
                let terms = d - k as u64 - 1;
                let term_bits = 64 - terms.leading_zeros() as i64;
                tighten_real(p, |extra| {
                    let mut sum = DyInterval::zero();
                    let mut rho_j = Dyadic::one();
                    for j in 1..=terms {
                        rho_j = &rho_j * rho;
                        let scale = &Dyadic::from_bigint(binomial(k as u64 + j, j)) * &rho_j;
                        let coef = ComplexInterval::point(&a[(k as u64 + j) as usize]);
                        let q = p + 2 + term_bits + scale.log2_ceil().max(0) + extra;
                        sum = sum.add(&coef.abs(q).scale(&scale));
                    }
                    Ok(sum.round_grid(p + 2 + extra))
                })
            }
            Kind::Exp(_) => tighten_real(p, |extra| {
                let q = p + 4 + extra;
                let b = self.base(q)?;
                let er = exp_real(rho, q + magnitude_bits(&b.scale))?;
                let em1 = er.sub(&DyInterval::from_i64(1));
                let scale = b.scale.mul(&em1);
                let rf = recip_factorial(k, q + magnitude_bits(&scale));
                Ok(scale.mul(&rf).round_grid(p + 2))
            }),
            Kind::Sin(_) => tighten_real(p, |extra| {
                let q = p + 4 + extra;
                let b = self.base(q)?;
                let (same, other) = if k.is_multiple_of(2) {
                    (&b.first, &b.second)
                } else {
                    (&b.second, &b.first)
                };
                let same = same.abs(q + 2);
                let other = other.abs(q + 2);
                let big = magnitude_bits(&same).max(magnitude_bits(&other));
                let ep = exp_real(rho, q + big + 2)?;
                let en = exp_real(&-rho, q + big + 2)?;
                let sinh = ep.sub(&en).mul_pow2(-1);
                let cosh_m1 = ep.add(&en).mul_pow2(-1).sub(&DyInterval::from_i64(1));
                let raw = other.mul(&sinh).add(&same.mul(&cosh_m1));
                let rf = recip_factorial(k, q + magnitude_bits(&raw));
                Ok(raw.mul(&rf).round_grid(p + 2))
            }),
        }
    }

    /// Rectangle containing `f_k(z)` for every `z` in the axis-aligned box of
    /// half-width `r` around the point.
    pub fn box_coeff(&self, k: u32, r: &Dyadic, p: i64) -> Result<CoeffEnclosure> {
        let c = self.coeff(k, p + 1)?;
        if r.is_zero() {
            return Ok(c);
        }
        let rho = r * &sqrt2_upper();
        let t = self.tail(k, &rho, p + 1)?;
        Ok(c.inflate(t.hi()))
    }

    /// Enclosure (width at most `2^-p`) of the corner magnitude
    /// `sqrt((|Re f_k(m)| + T)^2 + (|Im f_k(m)| + T)^2)` of the box
    /// rectangle, an upper bound for `sup |f_k|` over the box of half-width `r`.
    pub fn box_magnitude(&self, k: u32, r: &Dyadic, p: i64) -> Result<DyInterval> {
        let rho = r * &sqrt2_upper();
        tighten_real(p, |extra| {
            let q = p + 3 + extra;
            let c = self.coeff(k, q)?;
            let t = self.tail(k, &rho, q)?;
            let a = c.re.abs().add(&t);
            let b = c.im.abs().add(&t);
            Ok(a.square().add(&b.square()).sqrt(q))
        })
    }
}

/// Enclosure of `f_k(m)` with both sides at most `2^-p` wide.
pub fn eval_fk_point(f: &FuncExpr, k: u32, m: &ComplexDyadic, p: i64) -> Result<CoeffEnclosure> {
    PointExpansion::new(f, m)?.coeff(k, p)
}

/// Rectangle containing `f_k(z)` for every `z` in the axis-aligned box of
/// half-width `D.radius` around `D.center` (hence for all of `D`).
pub fn eval_fk_box(f: &FuncExpr, k: u32, d: &Disc, p: i64) -> Result<CoeffEnclosure> {
    PointExpansion::new(f, &d.center)?.box_coeff(k, &d.radius, p)
}

/// `[lo, hi]` with `lo <= inf |f_k|` and `hi >= sup |f_k|` over the box
/// around `D`.
pub fn magnitude_upper(f: &FuncExpr, k: u32, d: &Disc, p: i64) -> Result<DyInterval> {
    let rect = eval_fk_box(f, k, d, p)?;
    let mag = rect.abs(p + 2);
    Ok(DyInterval::new(mag.lo().clone(), mag.hi().clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cd(re: f64, im: f64) -> ComplexDyadic {
        ComplexDyadic::new(Dyadic::from_f64(re), Dyadic::from_f64(im))
    }

    fn contains_f64(e: &CoeffEnclosure, re: f64, im: f64, tol: f64) -> bool {
        let (a, b) = e.re.to_f64_bounds();
        let (c, d) = e.im.to_f64_bounds();
        a - tol <= re && re <= b + tol && c - tol <= im && im <= d + tol
    }

    #[test]
    fn poly_point_values() {
        let f = FuncExpr::poly_int(&[-2, 0, 1]).unwrap();
        let v = eval_fk_point(&f, 0, &ComplexDyadic::zero(), 10).unwrap();
        assert_eq!(v, ComplexInterval::point(&ComplexDyadic::from_i64(-2, 0)));
        for m in [cd(0.5, -3.0), cd(17.0, 0.25)] {
            let top = eval_fk_point(&f, 2, &m, 10).unwrap();
            assert_eq!(top, ComplexInterval::point(&ComplexDyadic::from_i64(1, 0)));
            assert!(eval_fk_point(&f, 3, &m, 10).unwrap().is_point());
        }
    }

    #[test]
    fn exp_point_values() {
        let v = eval_fk_point(&FuncExpr::Exp, 1, &ComplexDyadic::zero(), 20).unwrap();
        assert!(v.contains(&ComplexDyadic::from_i64(1, 0)));
        let m = cd(0.75, -1.5);
        let v = eval_fk_point(&FuncExpr::Exp, 3, &m, 40).unwrap();
        let e = 0.75f64.exp() / 6.0;
        assert!(contains_f64(
            &v,
            e * (-1.5f64).cos(),
            e * (-1.5f64).sin(),
            1e-12
        ));
        assert!(v.max_width() <= Dyadic::pow2(-40));
    }

    #[test]
    fn sin_point_at_i() {
        let v = eval_fk_point(&FuncExpr::Sin, 0, &ComplexDyadic::from_i64(0, 1), 30).unwrap();
        assert!(v.max_width() <= Dyadic::pow2(-30));
        assert!(contains_f64(&v, 0.0, 1f64.sinh(), 1e-12));
    }

    #[test]
    fn zero_radius_box_is_point_value() {
        let m = cd(0.5, 0.25);
        for f in [
            FuncExpr::Exp,
            FuncExpr::Sin,
            FuncExpr::poly_int(&[1, 2, 3]).unwrap(),
        ] {
            let d = Disc::new(m.clone(), Dyadic::zero());
            let b = eval_fk_box(&f, 1, &d, 30).unwrap();
            let pt = eval_fk_point(&f, 1, &m, 31).unwrap();
            assert_eq!(b, pt);
        }
    }

    #[test]
    fn identity_box_is_outer_box() {
        let f = FuncExpr::poly_int(&[0, 1]).unwrap();
        let d = Disc::new(ComplexDyadic::zero(), Dyadic::one());
        let b = eval_fk_box(&f, 0, &d, 30).unwrap();
        let s = std::f64::consts::SQRT_2;
        assert!(contains_f64(&b, s, s, 0.0) && contains_f64(&b, -s, -s, 0.0));
        let mag = magnitude_upper(&f, 0, &d, 30).unwrap();
        let hi = mag.hi().to_f64();
        assert!((2.0..=2.1).contains(&hi), "hi = {hi}");
    }

    #[test]
    fn exp_box_magnitudes() {
        let d = Disc::new(ComplexDyadic::zero(), Dyadic::one());
        let mag = magnitude_upper(&FuncExpr::Exp, 0, &d, 30).unwrap();
        assert!(mag.hi().to_f64() >= std::f64::consts::SQRT_2.exp());
        let quarter = Disc::new(ComplexDyadic::zero(), Dyadic::from_parts(1, -2));
        let rect = eval_fk_box(&FuncExpr::Exp, 0, &quarter, 30).unwrap();
        // real extent is 1 + (e^rho - 1) with rho = sqrt(2)/4
        let bound = (std::f64::consts::SQRT_2 / 4.0).exp();
        assert!(rect.re.hi().to_f64() <= bound + 1e-8);
    }

    #[test]
    fn from_roots_expands() {
        let f =
            FuncExpr::from_roots(&[ComplexDyadic::from_i64(1, 0), ComplexDyadic::from_i64(2, 0)]);
        assert_eq!(f, FuncExpr::poly_int(&[2, -3, 1]).unwrap());
    }

    #[test]
    fn invalid_polynomials_rejected() {
        assert!(FuncExpr::poly_int(&[1, 0]).is_err());
        assert!(FuncExpr::poly(vec![]).is_err());
    }

    #[test]
    fn json_shapes() {
        let f = FuncExpr::poly_int(&[-2, 1]).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert!(
            s.starts_with(r#"{"type":"poly","coeffs":[{"re":{"m":"-1","e":1}"#),
            "{s}"
        );
        let e: FuncExpr = serde_json::from_str(r#"{"type":"exp"}"#).unwrap();
        assert_eq!(e, FuncExpr::Exp);
        let back: FuncExpr = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }
}
