use std::sync::OnceLock;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::complex::{ComplexDyadic, ComplexInterval};
use super::dyadic::{Dyadic, Rounding};
use super::interval::DyInterval;

const SQRT_HALF_BITS: i64 = 32;

/// Dyadic upper bound of `1/sqrt(2)`, relative error below `2^-30`.
pub fn sqrt_half_upper() -> &'static Dyadic {
    static V: OnceLock<Dyadic> = OnceLock::new();
    // 1/sqrt(2) = sqrt(2^(2B-1)) * 2^-B
    V.get_or_init(|| {
        Dyadic::new(BigInt::from(1) << (2 * SQRT_HALF_BITS - 1) as u64, 0)
            .sqrt_to(0, Rounding::Ceil)
            .mul_pow2(-SQRT_HALF_BITS)
    })
}

/// Dyadic upper bound of `sqrt(2)`, equal to `2 * sqrt_half_upper()`.
pub fn sqrt2_upper() -> Dyadic {
    sqrt_half_upper().mul_pow2(1)
}

/// Closed disc `D(center, radius)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Disc {
    pub center: ComplexDyadic,
    pub radius: Dyadic,
}

impl Disc {
    pub fn new(center: ComplexDyadic, radius: Dyadic) -> Self {
        assert!(!radius.is_negative(), "negative disc radius");
        Disc { center, radius }
    }

    /// `lambda * D`, same center.
    pub fn scale(&self, lambda: &Dyadic) -> Disc {
        Disc::new(self.center.clone(), &self.radius * lambda)
    }

    /// Tri-state membership of a (possibly non-degenerate) point enclosure:
    /// `Some(true)` if surely inside, `Some(false)` if surely outside.
    pub fn contains_enclosure(&self, z: &ComplexInterval) -> Option<bool> {
        let d = z.sub(&ComplexInterval::point(&self.center)).norm_sqr();
        let r2 = self.radius.square();
        if d.hi() <= &r2 {
            Some(true)
        } else if d.lo() > &r2 {
            Some(false)
        } else {
            None
        }
    }

    pub fn contains_point(&self, z: &ComplexDyadic) -> bool {
        (z - &self.center).norm_sqr() <= self.radius.square()
    }
}

/// Whether two closed discs meet; tangent discs count as meeting.
pub fn discs_intersect(a: &Disc, b: &Disc) -> bool {
    let d2 = (&a.center - &b.center).norm_sqr();
    let rs = &a.radius + &b.radius;
    d2 <= rs.square()
}

/// Axis-aligned square of side `width` centered at `center`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComplexBox {
    pub center: ComplexDyadic,
    pub width: Dyadic,
}

impl ComplexBox {
    pub fn new(center: ComplexDyadic, width: Dyadic) -> Self {
        assert!(width.is_positive(), "box width must be positive");
        ComplexBox { center, width }
    }

    pub fn midpoint(&self) -> &ComplexDyadic {
        &self.center
    }

    pub fn width(&self) -> &Dyadic {
        &self.width
    }

    /// Dyadic `r` with `w/sqrt(2) <= r <= (1 + 2^-20) w/sqrt(2)`.
    ///
    /// Linear in the width, so `radius_upper(3B) = 3 radius_upper(B)` exactly.
    pub fn radius_upper(&self) -> Dyadic {
        &self.width * sqrt_half_upper()
    }

    /// The square of width `lambda * w(B)` with the same center.
    pub fn scale(&self, lambda: &Dyadic) -> ComplexBox {
        assert!(lambda.is_positive(), "box scale must be positive");
        ComplexBox::new(self.center.clone(), &self.width * lambda)
    }

    /// The four quarter squares, ordered SW, SE, NW, NE.
    pub fn subdivide4(&self) -> [ComplexBox; 4] {
        let q = self.width.mul_pow2(-2);
        let w = self.width.mul_pow2(-1);
        let c = &self.center;
        let mk = |dx: i32, dy: i32| {
            let re = if dx < 0 { &c.re - &q } else { &c.re + &q };
            let im = if dy < 0 { &c.im - &q } else { &c.im + &q };
            ComplexBox::new(ComplexDyadic::new(re, im), w.clone())
        };
        [mk(-1, -1), mk(1, -1), mk(-1, 1), mk(1, 1)]
    }

    /// `D(B)`: center `m(B)`, radius `radius_upper(B)`.
    pub fn disc_of(&self) -> Disc {
        Disc::new(self.center.clone(), self.radius_upper())
    }

    pub fn re_range(&self) -> DyInterval {
        let h = self.width.mul_pow2(-1);
        DyInterval::new(&self.center.re - &h, &self.center.re + &h)
    }

    pub fn im_range(&self) -> DyInterval {
        let h = self.width.mul_pow2(-1);
        DyInterval::new(&self.center.im - &h, &self.center.im + &h)
    }

    pub fn as_enclosure(&self) -> ComplexInterval {
        ComplexInterval::new(self.re_range(), self.im_range())
    }

    pub fn contains_point(&self, z: &ComplexDyadic) -> bool {
        self.re_range().contains(&z.re) && self.im_range().contains(&z.im)
    }

    /// Tri-state membership of a point enclosure in the closed box.
    pub fn contains_enclosure(&self, z: &ComplexInterval) -> Option<bool> {
        let (re, im) = (self.re_range(), self.im_range());
        if re.contains_interval(&z.re) && im.contains_interval(&z.im) {
            Some(true)
        } else if !re.intersects(&z.re) || !im.intersects(&z.im) {
            Some(false)
        } else {
            None
        }
    }

    pub fn area(&self) -> Dyadic {
        self.width.square()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(re: i64, im: i64, w: i64) -> ComplexBox {
        ComplexBox::new(ComplexDyadic::from_i64(re, im), Dyadic::from_i64(w))
    }

    #[test]
    fn subdivide_into_quarters() {
        let kids = sq(0, 0, 4).subdivide4();
        let centers: Vec<_> = kids.iter().map(|b| b.center.to_f64()).collect();
        assert_eq!(
            centers,
            vec![(-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0), (1.0, 1.0)]
        );
        assert!(kids.iter().all(|b| b.width == Dyadic::from_i64(2)));
    }

    #[test]
    fn scale_identity() {
        let b = sq(3, -1, 2);
        assert_eq!(b.scale(&Dyadic::one()), b);
    }

    #[test]
    fn discs() {
        let d = |re: i64, im: i64, r: Dyadic| Disc::new(ComplexDyadic::from_i64(re, im), r);
        let one = Dyadic::one();
        assert!(!discs_intersect(
            &d(0, 0, one.clone()),
            &d(3, 0, one.clone())
        ));
        assert!(discs_intersect(
            &d(0, 0, one.clone()),
            &d(2, 0, one.clone())
        ));
        assert!(discs_intersect(
            &d(0, 0, one.clone()),
            &d(1, 1, Dyadic::from_parts(1, -1))
        ));
    }

    #[test]
    fn sqrt_half_is_tight_upper_bound() {
        let s = sqrt_half_upper();
        assert!(s.square().mul_pow2(1) >= Dyadic::one());
        let lower = s - &Dyadic::pow2(-SQRT_HALF_BITS);
        assert!(lower.square().mul_pow2(1) < Dyadic::one());
    }
}
