use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::dyadic::{Dyadic, Rounding};

/// Closed real interval with dyadic endpoints.
///
/// Every operation returns an enclosure of the exact real result. Add, sub,
/// mul, neg and abs are exact on the endpoints; the remaining operations
/// round outward.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Bounds")]
pub struct DyInterval {
    lo: Dyadic,
    hi: Dyadic,
}

#[derive(Deserialize)]
struct Bounds {
    lo: Dyadic,
    hi: Dyadic,
}

impl TryFrom<Bounds> for DyInterval {
    type Error = String;

    fn try_from(b: Bounds) -> Result<Self, String> {
        if b.lo > b.hi {
            return Err(format!("interval bounds out of order: {:?} > {:?}", b.lo, b.hi));
        }
        Ok(DyInterval { lo: b.lo, hi: b.hi })
    }
}

impl DyInterval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        assert!(lo <= hi, "interval with lo > hi: [{lo:?}, {hi:?}]");
        DyInterval { lo, hi }
    }

    pub fn point(x: Dyadic) -> Self {
        DyInterval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn zero() -> Self {
        Self::point(Dyadic::zero())
    }

    pub fn from_i64(v: i64) -> Self {
        Self::point(Dyadic::from_i64(v))
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn into_bounds(self) -> (Dyadic, Dyadic) {
        (self.lo, self.hi)
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Dyadic {
        (&self.lo + &self.hi).mul_pow2(-1)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains_interval(&self, other: &DyInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &DyInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &DyInterval) -> DyInterval {
        DyInterval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// Distance from the interval to the origin (`d(I)` in soft comparisons).
    pub fn mig(&self) -> Dyadic {
        if self.contains_zero() {
            Dyadic::zero()
        } else if self.lo.is_positive() {
            self.lo.clone()
        } else {
            self.hi.abs()
        }
    }

    /// Largest absolute value attained.
    pub fn mag(&self) -> Dyadic {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn add(&self, other: &DyInterval) -> DyInterval {
        DyInterval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &DyInterval) -> DyInterval {
        DyInterval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn neg(&self) -> DyInterval {
        DyInterval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn mul(&self, other: &DyInterval) -> DyInterval {
        if self.is_point() && other.is_point() {
            return Self::point(&self.lo * &other.lo);
        }
        let c = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        DyInterval { lo, hi }
    }

    pub fn scale(&self, k: &Dyadic) -> DyInterval {
        let a = &self.lo * k;
        let b = &self.hi * k;
        if k.is_negative() {
            DyInterval { lo: b, hi: a }
        } else {
            DyInterval { lo: a, hi: b }
        }
    }

    pub fn mul_pow2(&self, k: i64) -> DyInterval {
        DyInterval {
            lo: self.lo.mul_pow2(k),
            hi: self.hi.mul_pow2(k),
        }
    }

    pub fn abs(&self) -> DyInterval {
        if self.lo.is_negative() && self.hi.is_positive() {
            DyInterval {
                lo: Dyadic::zero(),
                hi: self.mag(),
            }
        } else if !self.lo.is_negative() {
            self.clone()
        } else {
            self.neg()
        }
    }

    /// Range of `x^2` over the interval.
    pub fn square(&self) -> DyInterval {
        let a = self.abs();
        DyInterval {
            lo: a.lo.square(),
            hi: a.hi.square(),
        }
    }

    pub fn max(&self, other: &DyInterval) -> DyInterval {
        DyInterval {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn min(&self, other: &DyInterval) -> DyInterval {
        DyInterval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().min(other.hi.clone()),
        }
    }

    /// Endpoints snapped outward to the grid `2^-p`.
    pub fn round_grid(&self, p: i64) -> DyInterval {
        DyInterval {
            lo: self.lo.round_to(p, Rounding::Floor),
            hi: self.hi.round_to(p, Rounding::Ceil),
        }
    }

    /// `(I)_p`: endpoints approximated to `p` bits, then widened by `2^-p`.
    pub fn round_out(&self, p: i64) -> DyInterval {
        let eps = Dyadic::pow2(-p);
        let g = self.round_grid(p);
        DyInterval {
            lo: &g.lo - &eps,
            hi: &g.hi + &eps,
        }
    }

    /// Endpoints rounded outward to `bits` significant bits.
    pub fn round_rel(&self, bits: u32) -> DyInterval {
        DyInterval {
            lo: self.lo.round_rel(bits, Rounding::Floor),
            hi: self.hi.round_rel(bits, Rounding::Ceil),
        }
    }

    pub fn div_int(&self, n: &BigInt, p: i64) -> DyInterval {
        let neg = n < &BigInt::from(0);
        let (a, b) = (
            self.lo
                .div_int(n, p, if neg { Rounding::Ceil } else { Rounding::Floor }),
            self.hi
                .div_int(n, p, if neg { Rounding::Floor } else { Rounding::Ceil }),
        );
        if neg {
            DyInterval { lo: b, hi: a }
        } else {
            DyInterval { lo: a, hi: b }
        }
    }

    /// Outward-rounded quotient on the grid `2^-p`; `None` if the divisor
    /// contains zero.
    pub fn div(&self, other: &DyInterval, p: i64) -> Option<DyInterval> {
        if other.contains_zero() {
            return None;
        }
        let q = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let lo = q
            .iter()
            .map(|(a, b)| a.div_round(b, p, Rounding::Floor))
            .min()
            .unwrap();
        let hi = q
            .iter()
            .map(|(a, b)| a.div_round(b, p, Rounding::Ceil))
            .max()
            .unwrap();
        Some(DyInterval { lo, hi })
    }

    /// Enclosure of `1/x` on the grid `2^-p`, `None` if zero is inside.
    pub fn recip(&self, p: i64) -> Option<DyInterval> {
        DyInterval::from_i64(1).div(self, p)
    }

    /// Enclosure of the square root of the nonnegative part, grid `2^-p`.
    pub fn sqrt(&self, p: i64) -> DyInterval {
        let lo = if self.lo.is_negative() {
            Dyadic::zero()
        } else {
            self.lo.sqrt_to(p, Rounding::Floor)
        };
        let hi = if self.hi.is_negative() {
            Dyadic::zero()
        } else {
            self.hi.sqrt_to(p, Rounding::Ceil)
        };
        DyInterval { lo, hi }
    }

    /// Enclosure of the `k`-th root of the nonnegative part, grid `2^-p`.
    pub fn nth_root(&self, k: u32, p: i64) -> DyInterval {
        let f = |x: &Dyadic, m| {
            if x.is_negative() {
                Dyadic::zero()
            } else {
                x.nth_root_to(k, p, m)
            }
        };
        DyInterval {
            lo: f(&self.lo, Rounding::Floor),
            hi: f(&self.hi, Rounding::Ceil),
        }
    }

    pub fn pow(&self, k: u32) -> DyInterval {
        if k == 0 {
            return DyInterval::from_i64(1);
        }
        if k.is_multiple_of(2) {
            let a = self.abs();
            DyInterval {
                lo: a.lo.pow(k),
                hi: a.hi.pow(k),
            }
        } else {
            DyInterval {
                lo: self.lo.pow(k),
                hi: self.hi.pow(k),
            }
        }
    }

    pub fn to_f64_bounds(&self) -> (f64, f64) {
        (self.lo.to_f64(), self.hi.to_f64())
    }
}

impl fmt::Debug for DyInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: i64, b: i64) -> DyInterval {
        DyInterval::new(Dyadic::from_i64(a), Dyadic::from_i64(b))
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(iv(1, 2).add(&iv(3, 4)), iv(4, 6));
        assert_eq!(iv(-1, 2).mul(&iv(3, 4)), iv(-4, 8));
        assert_eq!(iv(-3, -1).abs(), iv(1, 3));
        assert_eq!(iv(-3, 2).abs(), iv(0, 3));
        assert_eq!(iv(-3, 2).square(), iv(0, 9));
        assert_eq!(iv(1, 2).sub(&iv(3, 5)), iv(-4, -1));
    }

    #[test]
    fn inverted_bounds_are_rejected() {
        let ok = r#"{"lo":{"m":"1","e":0},"hi":{"m":"2","e":0}}"#;
        let bad = r#"{"lo":{"m":"2","e":0},"hi":{"m":"1","e":0}}"#;
        let iv: DyInterval = serde_json::from_str(ok).unwrap();
        assert_eq!(iv, DyInterval::new(Dyadic::one(), Dyadic::from_i64(2)));
        assert!(serde_json::from_str::<DyInterval>(bad).is_err());
    }

    #[test]
    fn round_out_widens_by_grid_step() {
        let i = DyInterval::new(Dyadic::from_parts(3, -5), Dyadic::from_parts(5, -5));
        let r = i.round_out(2);
        assert_eq!(r.lo(), &Dyadic::from_parts(-1, -2));
        assert_eq!(r.hi(), &Dyadic::from_parts(1, -1));
        assert!(r.contains_interval(&i));
    }

    #[test]
    fn division_encloses() {
        let q = iv(1, 2).div(&iv(3, 7), 30).unwrap();
        let (lo, hi) = q.to_f64_bounds();
        assert!(lo <= 1.0 / 7.0 && hi >= 2.0 / 3.0);
        assert!(iv(1, 2).div(&iv(-1, 1), 30).is_none());
        let n = iv(1, 2).div_int(&BigInt::from(-3), 20);
        let (lo, hi) = n.to_f64_bounds();
        assert!(lo <= -2.0 / 3.0 && hi >= -1.0 / 3.0 && lo < hi);
    }

    #[test]
    fn mig_and_mag() {
        assert_eq!(iv(-5, -2).mig(), Dyadic::from_i64(2));
        assert_eq!(iv(-5, 2).mig(), Dyadic::zero());
        assert_eq!(iv(-5, 2).mag(), Dyadic::from_i64(5));
    }
}
