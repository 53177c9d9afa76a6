//! Polynomial test instances with closed-form roots.

use num_bigint::BigInt;

use crate::analysis::{RootEntry, RootSet};
use crate::functions::FuncExpr;
use crate::kernel::elementary::{pi, sin_cos_real};
use crate::kernel::{ComplexDyadic, ComplexInterval, DyInterval, Dyadic};

/// Grid precision of irrational root enclosures.
pub const ROOT_BITS: i64 = 60;

#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub f: FuncExpr,
    pub roots: RootSet,
}

fn with_roots(name: impl Into<String>, roots: &[(ComplexDyadic, u32)]) -> Instance {
    let expanded: Vec<ComplexDyadic> = roots
        .iter()
        .flat_map(|(z, m)| std::iter::repeat_n(z.clone(), *m as usize))
        .collect();
    Instance {
        name: name.into(),
        f: FuncExpr::from_roots(&expanded),
        roots: RootSet::exact(roots).expect("distinct closed-form roots"),
    }
}

fn re(x: Dyadic) -> ComplexDyadic {
    ComplexDyadic::real(x)
}

fn int(v: i64) -> ComplexDyadic {
    ComplexDyadic::from_i64(v, 0)
}

/// `z`.
pub fn linear() -> Instance {
    with_roots("z", &[(int(0), 1)])
}

/// `z^2 (z - 1)`.
pub fn double_zero_and_one() -> Instance {
    with_roots("z^2(z-1)", &[(int(0), 2), (int(1), 1)])
}

/// `(z - 1)^3 (z + 1)`.
pub fn triple_one() -> Instance {
    with_roots("(z-1)^3(z+1)", &[(int(1), 3), (int(-1), 1)])
}

/// `prod_{i=1..d} (z - i)`.
pub fn consecutive(d: i64) -> Instance {
    let roots: Vec<_> = (1..=d).map(|i| (int(i), 1)).collect();
    with_roots(format!("prod(z-i),i=1..{d}"), &roots)
}

/// `(z - 1/4)(z - 1/4 - 2^-t)`.
pub fn close_pair(t: i64) -> Instance {
    let a = Dyadic::from_parts(1, -2);
    let b = &a + &Dyadic::pow2(-t);
    with_roots(format!("(z-1/4)(z-1/4-2^-{t})"), &[(re(a), 1), (re(b), 1)])
}

/// `z^2 (z - 10)`.
pub fn double_zero_and_ten() -> Instance {
    with_roots("z^2(z-10)", &[(int(0), 2), (int(10), 1)])
}

/// `z^d - 2`, roots `2^(1/d) e^(2 pi i k / d)` as enclosures.
pub fn pow_minus_two(d: u32) -> Instance {
    assert!(d >= 1);
    let p = ROOT_BITS + 8;
    let rho = DyInterval::from_i64(2).nth_root(d, p);
    let two_pi = pi(p + 8).expect("pi at moderate precision").mul_pow2(1);
    let roots = (0..d)
        .map(|k| {
            let theta = two_pi
                .scale(&Dyadic::from_i64(k as i64))
                .div_int(&BigInt::from(d), p + 4);
            let mid = theta.midpoint();
            let slack = theta.width().mul_pow2(-1);
            let (s, c) = sin_cos_real(&mid, p).expect("angle within range");
            let err = DyInterval::new(-&slack, slack);
            let loc = ComplexInterval::new(rho.mul(&c.add(&err)), rho.mul(&s.add(&err)));
            RootEntry {
                location: loc.round_grid(ROOT_BITS),
                multiplicity: 1,
            }
        })
        .collect();
    let mut coeffs = vec![ComplexDyadic::zero(); d as usize + 1];
    coeffs[0] = int(-2);
    coeffs[d as usize] = int(1);
    Instance {
        name: format!("z^{d}-2"),
        f: FuncExpr::poly(coeffs).expect("monic"),
        roots: RootSet::new(roots).expect("distinct roots of z^d - 2"),
    }
}

/// The polynomial correctness suite.
pub fn correctness_suite() -> Vec<Instance> {
    let mut v = vec![
        linear(),
        pow_minus_two(2),
        double_zero_and_one(),
        triple_one(),
        consecutive(5),
    ];
    v.extend([4, 6, 8, 10, 12].map(close_pair));
    v
}
