//! Exact binary rationals `mantissa * 2^exponent`.
//!
//! Values are kept canonical: the mantissa is odd, or the value is zero and
//! stored as `(0, 0)`. Addition, subtraction and multiplication are exact.
//! Everything that cannot be exact (division by an integer, square roots,
//! k-th roots) takes an explicit grid precision and a [`Rounding`] direction.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Direction used whenever a result has to be snapped to a grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Floor,
    Ceil,
}

impl Rounding {
    pub fn flip(self) -> Self {
        match self {
            Rounding::Floor => Rounding::Ceil,
            Rounding::Ceil => Rounding::Floor,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

fn checked_exp(a: i64, b: i64) -> i64 {
    a.checked_add(b)
        .unwrap_or_else(|| panic!("dyadic exponent overflow ({a} + {b})"))
}

/// Floor of `n / 2^shift`.
fn shr_floor(n: &BigInt, shift: u64) -> BigInt {
    if shift == 0 {
        return n.clone();
    }
    n.div_floor(&(BigInt::one() << shift))
}

fn shr_round(n: &BigInt, shift: u64, mode: Rounding) -> BigInt {
    match mode {
        Rounding::Floor => shr_floor(n, shift),
        Rounding::Ceil => -shr_floor(&-n, shift),
    }
}

fn isqrt_round(n: &BigInt, mode: Rounding) -> BigInt {
    let s = n.sqrt();
    if mode == Rounding::Ceil && &s * &s != *n {
        s + 1
    } else {
        s
    }
}

fn iroot_round(n: &BigInt, k: u32, mode: Rounding) -> BigInt {
    let s = n.nth_root(k);
    if mode == Rounding::Ceil && num_traits::pow(s.clone(), k as usize) != *n {
        s + 1
    } else {
        s
    }
}

impl Dyadic {
    /// Builds `mantissa * 2^exponent` in canonical form.
    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        if mantissa.is_zero() {
            return Self::zero();
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0);
        if tz == 0 {
            return Dyadic { mantissa, exponent };
        }
        let tz_i = i64::try_from(tz).expect("trailing zero count fits in i64");
        Dyadic {
            mantissa: mantissa >> tz,
            exponent: checked_exp(exponent, tz_i),
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Self::from_i64(1)
    }

    pub fn from_i64(v: i64) -> Self {
        Self::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Self::new(v, 0)
    }

    /// `2^k`.
    pub fn pow2(k: i64) -> Self {
        Dyadic {
            mantissa: BigInt::one(),
            exponent: k,
        }
    }

    /// `m * 2^e` from machine integers.
    pub fn from_parts(m: i64, e: i64) -> Self {
        Self::new(BigInt::from(m), e)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    pub fn signum(&self) -> i32 {
        match self.mantissa.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    /// Exact multiplication by `2^k`.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Dyadic {
            mantissa: self.mantissa.clone(),
            exponent: checked_exp(self.exponent, k),
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn pow(&self, k: u32) -> Self {
        if k == 0 {
            return Self::one();
        }
        Dyadic {
            mantissa: num_traits::pow(self.mantissa.clone(), k as usize),
            exponent: self
                .exponent
                .checked_mul(k as i64)
                .expect("dyadic exponent overflow in pow"),
        }
    }

    /// `floor(log2 |x|)`, or `None` for zero.
    pub fn msb(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let bits = self.mantissa.bits() as i64;
        Some(checked_exp(self.exponent, bits - 1))
    }

    /// Smallest integer `e` with `|x| <= 2^e` (0 for zero).
    pub fn log2_ceil(&self) -> i64 {
        match self.msb() {
            None => 0,
            Some(m) => {
                if self.mantissa.abs().is_one() {
                    m
                } else {
                    m + 1
                }
            }
        }
    }

    /// Snaps to the grid `2^-p * Z` in the given direction.
    pub fn round_to(&self, p: i64, mode: Rounding) -> Self {
        let target = -p;
        if self.exponent >= target {
            return self.clone();
        }
        let shift = (target - self.exponent) as u64;
        Self::new(shr_round(&self.mantissa, shift, mode), target)
    }

    /// Keeps at most `bits` significant bits, rounding in the given direction.
    pub fn round_rel(&self, bits: u32, mode: Rounding) -> Self {
        let len = self.mantissa.bits();
        if len <= bits as u64 {
            return self.clone();
        }
        let shift = len - bits as u64;
        Self::new(
            shr_round(&self.mantissa, shift, mode),
            checked_exp(self.exponent, shift as i64),
        )
    }

    /// Integer floor.
    pub fn floor_int(&self) -> BigInt {
        if self.exponent >= 0 {
            &self.mantissa << (self.exponent as u64)
        } else {
            shr_floor(&self.mantissa, (-self.exponent) as u64)
        }
    }

    /// Value scaled to an integer on the grid `2^-p`, rounded.
    fn scaled_int(&self, p: i64, mode: Rounding) -> BigInt {
        let shift = checked_exp(self.exponent, p);
        if shift >= 0 {
            &self.mantissa << (shift as u64)
        } else {
            shr_round(&self.mantissa, (-shift) as u64, mode)
        }
    }

    /// `self / n` snapped to the grid `2^-p`.
    pub fn div_int(&self, n: &BigInt, p: i64, mode: Rounding) -> Self {
        assert!(!n.is_zero(), "division of a dyadic by zero");
        let (num, den) = {
            let shift = checked_exp(self.exponent, p);
            if shift >= 0 {
                (&self.mantissa << (shift as u64), n.clone())
            } else {
                (self.mantissa.clone(), n << ((-shift) as u64))
            }
        };
        let q = match mode {
            Rounding::Floor => num.div_floor(&den),
            Rounding::Ceil => -(-num).div_floor(&den),
        };
        Self::new(q, -p)
    }

    /// `self / d` snapped to the grid `2^-p`.
    pub fn div_round(&self, d: &Dyadic, p: i64, mode: Rounding) -> Self {
        assert!(!d.is_zero(), "division of a dyadic by zero");
        // self/d = (ms/md) * 2^(es-ed)
        let q = Dyadic::new(
            self.mantissa.clone(),
            checked_exp(self.exponent, -d.exponent),
        );
        q.div_int(&d.mantissa, p, mode)
    }

    /// `sqrt(self)` snapped to the grid `2^-p`; `self` must be nonnegative.
    pub fn sqrt_to(&self, p: i64, mode: Rounding) -> Self {
        assert!(!self.is_negative(), "square root of a negative dyadic");
        // floor/ceil of sqrt(x * 4^p) equals that of sqrt(floor/ceil(x * 4^p))
        let n = self.scaled_int(2 * p, mode);
        Self::new(isqrt_round(&n, mode), -p)
    }

    /// `self^(1/k)` snapped to the grid `2^-p`; `self` must be nonnegative.
    pub fn nth_root_to(&self, k: u32, p: i64, mode: Rounding) -> Self {
        assert!(k >= 1);
        assert!(!self.is_negative(), "root of a negative dyadic");
        let n = self.scaled_int(p * k as i64, mode);
        Self::new(iroot_round(&n, k, mode), -p)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mantissa.bits() as i64;
        // keep 64 leading bits so the integer conversion never overflows
        let (m, e) = if bits > 64 {
            let s = bits - 64;
            (shr_floor(&self.mantissa, s as u64), self.exponent + s)
        } else {
            (self.mantissa.clone(), self.exponent)
        };
        let mf = m.to_f64().unwrap_or(f64::NAN);
        let e = e.clamp(-2000, 2000) as i32;
        if e < -1000 {
            mf * 2f64.powi(e + 1000) * 2f64.powi(-1000)
        } else if e > 1000 {
            mf * 2f64.powi(e - 1000) * 2f64.powi(1000)
        } else {
            mf * 2f64.powi(e)
        }
    }

    /// Dyadic closest to `v`, which must be finite; exact for every f64.
    pub fn from_f64(v: f64) -> Self {
        assert!(v.is_finite(), "non-finite float");
        if v == 0.0 {
            return Self::zero();
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let exp_bits = ((bits >> 52) & 0x7ff) as i64;
        let frac = (bits & ((1u64 << 52) - 1)) as i64;
        let (m, e) = if exp_bits == 0 {
            (frac, -1074)
        } else {
            (frac | (1i64 << 52), exp_bits - 1075)
        };
        Self::new(BigInt::from(sign * m), e)
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mantissa, self.exponent)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.16e}", self.to_f64())
    }
}

fn aligned(a: &Dyadic, b: &Dyadic) -> (BigInt, BigInt, i64) {
    let e = a.exponent.min(b.exponent);
    let ma = &a.mantissa << ((a.exponent - e) as u64);
    let mb = &b.mantissa << ((b.exponent - e) as u64);
    (ma, mb, e)
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // same nonzero sign: compare magnitudes via the leading bit first
        let (la, lb) = (self.msb().unwrap(), other.msb().unwrap());
        if la != lb {
            return if sa > 0 { la.cmp(&lb) } else { lb.cmp(&la) };
        }
        let (ma, mb, _) = aligned(self, other);
        ma.cmp(&mb)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let (ma, mb, e) = aligned(self, rhs);
        Dyadic::new(ma + mb, e)
    }
}

impl<'a> Sub<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        if rhs.is_zero() {
            return self.clone();
        }
        let (ma, mb, e) = aligned(self, rhs);
        Dyadic::new(ma - mb, e)
    }
}

impl<'a> Mul<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() || rhs.is_zero() {
            return Dyadic::zero();
        }
        // product of odd mantissas is odd: already canonical
        Dyadic {
            mantissa: &self.mantissa * &rhs.mantissa,
            exponent: checked_exp(self.exponent, rhs.exponent),
        }
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
        }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: &Dyadic) -> Dyadic {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Dyadic> for &'a Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[derive(Serialize, Deserialize)]
struct DyadicRepr {
    m: String,
    e: i64,
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        DyadicRepr {
            m: self.mantissa.to_string(),
            e: self.exponent,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = DyadicRepr::deserialize(d)?;
        let m: BigInt = repr
            .m
            .trim()
            .parse()
            .map_err(|_| D::Error::custom(format!("invalid mantissa {:?}", repr.m)))?;
        Ok(Dyadic::new(m, repr.e))
    }
}
