use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::dyadic::Dyadic;
use super::interval::DyInterval;

/// Complex number with exact dyadic parts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComplexDyadic {
    pub re: Dyadic,
    pub im: Dyadic,
}

impl ComplexDyadic {
    pub fn new(re: Dyadic, im: Dyadic) -> Self {
        ComplexDyadic { re, im }
    }

    pub fn real(re: Dyadic) -> Self {
        ComplexDyadic {
            re,
            im: Dyadic::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_i64(re: i64, im: i64) -> Self {
        ComplexDyadic::new(Dyadic::from_i64(re), Dyadic::from_i64(im))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// `|z|^2`, exact.
    pub fn norm_sqr(&self) -> Dyadic {
        self.re.square() + self.im.square()
    }

    pub fn scale(&self, k: &Dyadic) -> Self {
        ComplexDyadic::new(&self.re * k, &self.im * k)
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        ComplexDyadic::new(self.re.mul_pow2(k), self.im.mul_pow2(k))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl<'a> Add<&'a ComplexDyadic> for &'a ComplexDyadic {
    type Output = ComplexDyadic;
    fn add(self, o: &ComplexDyadic) -> ComplexDyadic {
        ComplexDyadic::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a ComplexDyadic> for &'a ComplexDyadic {
    type Output = ComplexDyadic;
    fn sub(self, o: &ComplexDyadic) -> ComplexDyadic {
        ComplexDyadic::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a ComplexDyadic> for &'a ComplexDyadic {
    type Output = ComplexDyadic;
    fn mul(self, o: &ComplexDyadic) -> ComplexDyadic {
        ComplexDyadic::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for &ComplexDyadic {
    type Output = ComplexDyadic;
    fn neg(self) -> ComplexDyadic {
        ComplexDyadic::new(-&self.re, -&self.im)
    }
}

/// Axis-aligned complex rectangle `re + i*im`.
///
/// Used for enclosures of Taylor coefficients at points and over boxes, and
/// for root locations that are only known to some precision.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComplexInterval {
    pub re: DyInterval,
    pub im: DyInterval,
}

impl ComplexInterval {
    pub fn new(re: DyInterval, im: DyInterval) -> Self {
        ComplexInterval { re, im }
    }

    pub fn point(z: &ComplexDyadic) -> Self {
        ComplexInterval {
            re: DyInterval::point(z.re.clone()),
            im: DyInterval::point(z.im.clone()),
        }
    }

    pub fn zero() -> Self {
        Self::point(&ComplexDyadic::zero())
    }

    pub fn midpoint(&self) -> ComplexDyadic {
        ComplexDyadic::new(self.re.midpoint(), self.im.midpoint())
    }

    pub fn is_point(&self) -> bool {
        self.re.is_point() && self.im.is_point()
    }

    pub fn contains(&self, z: &ComplexDyadic) -> bool {
        self.re.contains(&z.re) && self.im.contains(&z.im)
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn intersects(&self, other: &ComplexInterval) -> bool {
        self.re.intersects(&other.re) && self.im.intersects(&other.im)
    }

    /// Larger of the two side widths.
    pub fn max_width(&self) -> Dyadic {
        self.re.width().max(self.im.width())
    }

    pub fn add(&self, o: &ComplexInterval) -> Self {
        ComplexInterval::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &ComplexInterval) -> Self {
        ComplexInterval::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn neg(&self) -> Self {
        ComplexInterval::new(self.re.neg(), self.im.neg())
    }

    pub fn mul(&self, o: &ComplexInterval) -> Self {
        ComplexInterval::new(
            self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        )
    }

    pub fn scale(&self, k: &DyInterval) -> Self {
        ComplexInterval::new(self.re.mul(k), self.im.mul(k))
    }

    pub fn mul_i(&self) -> Self {
        ComplexInterval::new(self.im.neg(), self.re.clone())
    }

    pub fn round_grid(&self, p: i64) -> Self {
        ComplexInterval::new(self.re.round_grid(p), self.im.round_grid(p))
    }

    pub fn round_rel(&self, bits: u32) -> Self {
        ComplexInterval::new(self.re.round_rel(bits), self.im.round_rel(bits))
    }

    /// Grows both sides by `t` in every direction.
    pub fn inflate(&self, t: &Dyadic) -> Self {
        let d = DyInterval::new(-t, t.clone());
        ComplexInterval::new(self.re.add(&d), self.im.add(&d))
    }

    /// `|z|^2` over the rectangle.
    pub fn norm_sqr(&self) -> DyInterval {
        self.re.square().add(&self.im.square())
    }

    /// Enclosure of `{|z| : z in rectangle}` on the grid `2^-p`.
    pub fn abs(&self, p: i64) -> DyInterval {
        self.norm_sqr().sqrt(p)
    }
}
