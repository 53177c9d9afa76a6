use proptest::prelude::*;
use rootclust::analysis::{cluster_geometry, gamma_poly, RootSet};
use rootclust::functions::FuncExpr;
use rootclust::kernel::{ComplexBox, ComplexDyadic, Disc, Dyadic};
use rootclust::pellet::{c_tilde_k, first_c, FirstC, C1_HAT};
use rootclust::soft_compare::{Verdict, DEFAULT_ITERATION_CAP};

const CAP: u32 = DEFAULT_ITERATION_CAP;

fn cdy(re: i64, im: i64, e: i64) -> ComplexDyadic {
    ComplexDyadic::new(Dyadic::from_parts(re, e), Dyadic::from_parts(im, e))
}

/// Distinct roots on the 1/8 grid in [-4, 4]^2 with multiplicities 1..=2.
fn root_list() -> impl Strategy<Value = Vec<(ComplexDyadic, u32)>> {
    prop::collection::btree_map((-32i64..=32, -32i64..=32), 1u32..=2, 1..=4).prop_map(|m| {
        m.into_iter()
            .map(|((a, b), k)| (cdy(a, b, -3), k))
            .collect()
    })
}

fn expand(roots: &[(ComplexDyadic, u32)]) -> Vec<ComplexDyadic> {
    roots
        .iter()
        .flat_map(|(z, k)| std::iter::repeat_n(z.clone(), *k as usize))
        .collect()
}

fn count_in(d: &Disc, roots: &[(ComplexDyadic, u32)]) -> u32 {
    roots
        .iter()
        .filter(|(z, _)| d.contains_point(z))
        .map(|(_, k)| k)
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn first_c_is_sound(
        roots in root_list(),
        (cx, cy) in (-64i64..=64, -64i64..=64),
        e in -6i64..=2,
    ) {
        let f = FuncExpr::from_roots(&expand(&roots));
        let n0 = f.degree().unwrap() as u32;
        let b = ComplexBox::new(cdy(cx, cy, -4), Dyadic::pow2(e));
        match first_c(&f, &b, n0, CAP).unwrap().outcome {
            FirstC::Exclude => prop_assert_eq!(count_in(&b.disc_of(), &roots), 0),
            FirstC::Include(k) => {
                let d = b.scale(&Dyadic::from_i64(C1_HAT * k as i64)).disc_of();
                prop_assert_eq!(count_in(&d, &roots), k);
                prop_assert_eq!(count_in(&d.scale(&Dyadic::from_i64(3)), &roots), k);
            }
            FirstC::Unresolved => {}
        }
    }

    #[test]
    fn converse_holds_near_separated_clusters(
        mult in 1u32..=3,
        far in prop::collection::btree_set((-16i64..=16, -16i64..=16), 1..=3),
        (u, a, b) in (16i64..=64, -16i64..=16, -16i64..=16),
    ) {
        // a root of multiplicity `mult` at the origin plus simple roots at
        // distance at least 4
        let mut roots = vec![(ComplexDyadic::zero(), mult)];
        for (x, y) in far {
            if x * x + y * y >= 64 {
                roots.push((cdy(x, y, -1), 1));
            }
        }
        prop_assume!(roots.len() > 1);
        let set = RootSet::exact(&roots).unwrap();
        let g = cluster_geometry(&set, &[0]).unwrap();
        prop_assert!(g.strongly_separated);
        let big = g.d_c_radius.unwrap().lo().to_f64();
        // r in [R/(4|C|^3), R/|C|^3] and |m| <= 3 r
        let r = Dyadic::from_f64(big * u as f64 / 64.0 * 0.999);
        let rf = r.to_f64();
        let step = rf * 3.0 / 16.0 * std::f64::consts::FRAC_1_SQRT_2;
        let m = ComplexDyadic::new(Dyadic::from_f64(step * a as f64), Dyadic::from_f64(step * b as f64));
        let f = FuncExpr::from_roots(&expand(&roots));
        let s = &r * &Dyadic::from_i64(C1_HAT * mult as i64);
        let out = c_tilde_k(&f, &m, &s, mult, CAP).unwrap();
        prop_assert_eq!(out.verdict, Verdict::Positive);
    }

    #[test]
    fn small_gamma_boxes_are_excluded(
        roots in root_list(),
        (zx, zy) in (-256i64..=256, -256i64..=256),
    ) {
        let z = cdy(zx, zy, -5);
        prop_assume!(roots.iter().all(|(a, _)| a != &z));
        let f = FuncExpr::from_roots(&expand(&roots));
        let gamma = gamma_poly(&f, &z, 64).unwrap();
        // largest power of two r with 2^7 gamma r <= 1
        let e = -(gamma.hi().log2_ceil() + 7);
        let b = ComplexBox::new(z, Dyadic::pow2(e));
        let n0 = f.degree().unwrap() as u32;
        prop_assert_eq!(first_c(&f, &b, n0, CAP).unwrap().outcome, FirstC::Exclude);
    }
}
