//! Arithmetic substrate: exact dyadics, outward-rounded intervals, complex
//! boxes and discs, adaptive-precision real sources.

mod approx;
mod complex;
mod dyadic;
pub mod elementary;
mod geometry;
mod interval;

pub use approx::{refine_until, ApproxReal, MAX_WORKING_BITS};
pub use complex::{ComplexDyadic, ComplexInterval};
pub use dyadic::{Dyadic, Rounding};
pub use geometry::{discs_intersect, sqrt2_upper, sqrt_half_upper, ComplexBox, Disc};
pub use interval::DyInterval;
