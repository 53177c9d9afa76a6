use proptest::prelude::*;
use rootclust::analysis::{
    bounds_for_partition, build_s0, cluster_geometry, gamma_poly, predicted_bounds, s_f,
    singleton_partition, RootSet,
};
use rootclust::functions::FuncExpr;
use rootclust::instances;
use rootclust::kernel::{ComplexBox, ComplexDyadic, ComplexInterval, Dyadic};

fn cdy(re: i64, im: i64, e: i64) -> ComplexDyadic {
    ComplexDyadic::new(Dyadic::from_parts(re, e), Dyadic::from_parts(im, e))
}

fn root_list() -> impl Strategy<Value = Vec<(ComplexDyadic, u32)>> {
    prop::collection::btree_map((-32i64..=32, -32i64..=32), 1u32..=2, 1..=5).prop_map(|m| {
        m.into_iter()
            .map(|((a, b), k)| (cdy(a, b, -2), k))
            .collect()
    })
}

fn expand(roots: &[(ComplexDyadic, u32)]) -> Vec<ComplexDyadic> {
    roots
        .iter()
        .flat_map(|(z, k)| std::iter::repeat_n(z.clone(), *k as usize))
        .collect()
}

fn index_of(set: &RootSet, loc: &ComplexInterval) -> usize {
    set.roots.iter().position(|r| &r.location == loc).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gamma_is_below_root_sum(roots in root_list(), (zx, zy) in (-256i64..=256, -256i64..=256)) {
        let z = cdy(zx, zy, -5);
        prop_assume!(roots.iter().all(|(a, _)| a != &z));
        let f = FuncExpr::from_roots(&expand(&roots));
        let set = RootSet::exact(&roots).unwrap();
        let g = gamma_poly(&f, &z, 64).unwrap();
        let s = s_f(&set, &ComplexInterval::point(&z), 64).unwrap();
        prop_assert!(g.lo() <= s.hi());
    }

    #[test]
    fn separation_is_scale_invariant(roots in root_list(), t in -6i64..=6, pick in 0usize..5) {
        let set = RootSet::exact(&roots).unwrap();
        let scaled: Vec<_> = roots.iter().map(|(z, k)| (z.mul_pow2(t), *k)).collect();
        let scaled_set = RootSet::exact(&scaled).unwrap();
        let members: Vec<usize> = (0..=pick.min(roots.len() - 1)).collect();
        let a = cluster_geometry(&set, &members).unwrap();
        let b = cluster_geometry(&scaled_set, &members).unwrap();
        prop_assert_eq!(a.strongly_separated, b.strongly_separated);
    }

    #[test]
    fn s0_parts_cannot_merge(roots in root_list()) {
        let set = RootSet::exact(&roots).unwrap();
        let b0 = ComplexBox::new(ComplexDyadic::zero(), Dyadic::from_i64(8));
        let parts = build_s0(&set, &b0).unwrap();
        let total: u32 = parts.iter().map(|p| p.size).sum();
        prop_assert_eq!(total as usize, set.count());
        for (i, a) in parts.iter().enumerate() {
            prop_assert!(a.strongly_separated);
            for b in &parts[i + 1..] {
                let mut members: Vec<usize> = a
                    .members
                    .iter()
                    .chain(&b.members)
                    .map(|r| index_of(&set, &r.location))
                    .collect();
                members.sort_unstable();
                prop_assert!(!cluster_geometry(&set, &members).unwrap().strongly_separated);
            }
        }
    }
}

#[test]
fn intpoly_bound_is_monotone() {
    let mut suite: Vec<_> = [2, 4, 8].map(instances::pow_minus_two).to_vec();
    suite.push(instances::consecutive(3));
    suite.push(instances::consecutive(5));
    let b0 = ComplexBox::new(ComplexDyadic::zero(), Dyadic::from_i64(4));
    let rows: Vec<(usize, f64, f64)> = suite
        .iter()
        .map(|inst| {
            let parts = singleton_partition(&inst.roots, &b0).unwrap();
            let t = bounds_for_partition(&inst.f, &inst.roots, &b0, &parts).unwrap();
            (t.degree, t.mahler_f64, t.intpoly_bound)
        })
        .collect();
    for a in &rows {
        for b in &rows {
            if a.0 <= b.0 && a.1 <= b.1 {
                assert!(a.2 <= b.2, "{a:?} vs {b:?}");
            }
        }
    }
    assert!((rows[4].2 - 297.6).abs() < 0.1);
}

#[test]
fn singleton_bound_for_sqrt_two() {
    let inst = instances::pow_minus_two(2);
    let b0 = ComplexBox::new(ComplexDyadic::zero(), Dyadic::from_i64(8));
    let parts = singleton_partition(&inst.roots, &b0).unwrap();
    assert_eq!(parts.len(), 2);
    let t = bounds_for_partition(&inst.f, &inst.roots, &b0, &parts).unwrap();
    assert!((t.tree_bound - 10.0).abs() < 1e-9, "{}", t.tree_bound);
    // the maximal strongly separated partition is the whole root set
    let all = predicted_bounds(&inst.f, &inst.roots, &b0).unwrap();
    assert!((all.tree_bound - 16.0).abs() < 1e-9);
}
