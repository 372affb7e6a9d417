mod common;

use std::collections::BTreeSet;

use common::*;
use proptest::prelude::*;
use rchull::grid::first_derived_set;
use rchull::hull::{eliminate, finitely_extremal, hv_hull, membership};
use rchull::kernel::{convex_hull_2d, convex_polygon_intersection, int, orientation};
use rchull::{pcpp_member, verify_hull, Grid, Hull, Point2, Point3, Strategy as Elimination};

fn point2() -> impl Strategy<Value = Point2> {
    (-4i64..=4, -4i64..=4).prop_map(|(x, y)| Point2::from_ints(x, y))
}

fn planar(max: usize) -> impl Strategy<Value = Vec<Point2>> {
    prop::collection::vec(point2(), 1..=max)
}

/// Small inputs over few heights, so that levels and columns interact.
fn instance() -> impl Strategy<Value = Vec<Point3>> {
    prop::collection::vec((-3i64..=3, -3i64..=3, 0i64..=2), 1..=7)
        .prop_map(|v| v.into_iter().map(|(x, y, z)| Point3::from_ints(x, y, z)).collect())
}

fn query() -> impl Strategy<Value = Point3> {
    (-8i64..=8, -8i64..=8, -1i64..=3, 1i64..=2).prop_map(|(x, y, z, d)| {
        let r = |n: i64| rchull::kernel::ratio(n, d);
        Point3::from_coords(r(x), r(y), r(z))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn planar_hull_is_a_minimal_cover(pts in planar(10)) {
        let hull = convex_hull_2d(&pts).unwrap();
        let refs: Vec<&Point2> = pts.iter().collect();
        for v in hull.vertices() {
            prop_assert!(pts.contains(v));
            let others: Vec<&Point2> = pts.iter().filter(|q| *q != v).collect();
            prop_assert!(!brute_in_hull(&others, v), "{v} is not extreme");
        }
        for q in &pts {
            prop_assert!(hull.contains(q));
        }
        let probe = Point2::from_ints(1, -1);
        prop_assert_eq!(hull.contains(&probe), brute_in_hull(&refs, &probe));
    }

    #[test]
    fn planar_hull_is_idempotent_and_order_free(pts in planar(10), seed in any::<u64>()) {
        let hull = convex_hull_2d(&pts).unwrap();
        prop_assert_eq!(&convex_hull_2d(hull.vertices()).unwrap(), &hull);
        let mut shuffled = pts.clone();
        rand::seq::SliceRandom::shuffle(shuffled.as_mut_slice(), &mut rng(seed));
        prop_assert_eq!(convex_hull_2d(&shuffled).unwrap(), hull);
    }

    #[test]
    fn intersection_is_symmetric(a in planar(6), b in planar(6)) {
        let (p, q) = (convex_hull_2d(&a).unwrap(), convex_hull_2d(&b).unwrap());
        let pq = convex_polygon_intersection(&p, &q);
        prop_assert_eq!(&pq, &convex_polygon_intersection(&q, &p));
        if let Some(r) = pq {
            for v in r.vertices() {
                prop_assert!(p.contains(v) && q.contains(v));
            }
        }
    }

    #[test]
    fn orientation_is_alternating(a in point2(), b in point2(), c in point2()) {
        let o = orientation(&a, &b, &c);
        prop_assert_eq!(orientation(&b, &a, &c), -o);
        prop_assert_eq!(orientation(&a, &c, &b), -o);
        prop_assert_eq!(orientation(&b, &c, &a), o);
    }

    #[test]
    fn derived_set_matches_enumeration(pts in planar(9)) {
        let f: BTreeSet<Point2> = pts.into_iter().collect();
        let d = first_derived_set(&f);
        prop_assert!(d.len() <= binomial(f.len(), 4));
        prop_assert!(d.is_disjoint(&f));
        prop_assert_eq!(d, brute_derived_set(&f));
    }

    #[test]
    fn derived_set_commutes_with_affine_maps(pts in planar(8), seed in any::<u64>()) {
        let t = Affine::random(&mut rng(seed));
        let f: BTreeSet<Point2> = pts.into_iter().collect();
        let image: BTreeSet<Point2> = f.iter().map(|q| t.apply2(q)).collect();
        let mapped: BTreeSet<Point2> = first_derived_set(&f).iter().map(|q| t.apply2(q)).collect();
        prop_assert_eq!(first_derived_set(&image), mapped);
    }

    #[test]
    fn grid_ignores_order_and_duplicates(k in instance(), seed in any::<u64>()) {
        let grid = Grid::build(&k).unwrap();
        let mut noisy = k.clone();
        noisy.extend(k.iter().take(3).cloned());
        rand::seq::SliceRandom::shuffle(noisy.as_mut_slice(), &mut rng(seed));
        prop_assert_eq!(&Grid::build(&noisy).unwrap(), &grid);
        let expected = (grid.projection().len() + grid.derived().len()) * grid.heights().len();
        prop_assert_eq!(grid.len(), expected);
    }

    #[test]
    fn elimination_shrinks_toward_the_input(k in instance()) {
        let input: BTreeSet<Point3> = k.iter().cloned().collect();
        let grid = Grid::build(&k).unwrap();
        for strategy in [Elimination::Batch, Elimination::SequentialLex] {
            let trace = eliminate(&k, strategy).unwrap();
            let mut current: BTreeSet<Point3> = grid.points().collect();
            let mut complex = hv_hull(&current.iter().cloned().collect()).unwrap();
            for batch in &trace.batches {
                prop_assert!(!batch.removed.is_empty());
                for p in &batch.removed {
                    prop_assert!(!input.contains(p));
                    prop_assert!(current.remove(p), "{p} removed twice");
                }
                let next = hv_hull(&current.iter().cloned().collect()).unwrap();
                for (h, poly) in next.heights().iter().zip(next.level_polys()) {
                    for v in poly.vertices() {
                        prop_assert!(membership(&complex, &v.at(h.clone())));
                    }
                }
                complex = next;
            }
            prop_assert_eq!(&current, &trace.final_set.to_set());
            prop_assert!(input.is_subset(&current));
            let fin = finitely_extremal(&trace.final_set);
            prop_assert!(fin.is_subset(&input));
            prop_assert_eq!(fin, brute_finitely_extremal(&current));
        }
    }

    #[test]
    fn strategies_agree(k in instance()) {
        let batch = Hull::compute(&k, Elimination::Batch).unwrap();
        let seq = Hull::compute(&k, Elimination::SequentialLex).unwrap();
        prop_assert_eq!(batch.trace.final_set, seq.trace.final_set);
        prop_assert_eq!(batch.complex, seq.complex);
    }

    #[test]
    fn hull_contains_input_and_only_extends_it(k in instance(), q in query()) {
        let hull = Hull::compute(&k, Elimination::Batch).unwrap();
        for p in &k {
            prop_assert!(hull.contains(p));
        }
        prop_assert!(hull.extremal_points().is_subset(&hull.input));
        if hull.contains(&q) {
            prop_assert!(pcpp_member(&k, &q).unwrap().is_member(), "{q} in hull but cut by a shovel");
        }
    }

    #[test]
    fn shovel_witnesses_are_sound(k in instance(), q in query()) {
        match pcpp_member(&k, &q).unwrap().witness() {
            Some(s) => {
                prop_assert!(s.contains(&q));
                for p in &k {
                    prop_assert!(!s.contains(p), "{s} contains input point {p}");
                }
            }
            None => {
                // No shovel through any z0 separates q from its open side.
                let mut zs: Vec<_> = k.iter().map(|p| p.z.clone()).collect();
                zs.push(q.z.clone());
                for z0 in zs.iter().flat_map(|h| [h - half(), h.clone(), h + half()]) {
                    for below in [true, false] {
                        let admits = |z: &rchull::Rational| if below { *z < z0 } else { *z > z0 };
                        if !admits(&q.z) {
                            continue;
                        }
                        let side: Vec<&Point2> = k.iter().filter(|p| admits(&p.z)).map(|p| &p.xy).collect();
                        prop_assert!(brute_in_hull(&side, &q.xy), "z0 = {z0} separates {q}");
                    }
                }
            }
        }
        for p in &k {
            prop_assert!(pcpp_member(&k, p).unwrap().is_member());
        }
    }

    #[test]
    fn outer_hull_is_affine_invariant(k in instance(), q in query(), seed in any::<u64>()) {
        let t = Affine::random(&mut rng(seed));
        let image: Vec<Point3> = k.iter().map(|p| t.apply(p)).collect();
        prop_assert_eq!(
            pcpp_member(&k, &q).unwrap().is_member(),
            pcpp_member(&image, &t.apply(&q)).unwrap().is_member()
        );
    }

    #[test]
    fn hull_is_affine_equivariant(k in instance(), q in query(), seed in any::<u64>()) {
        let t = Affine::random(&mut rng(seed));
        let image: Vec<Point3> = k.iter().map(|p| t.apply(p)).collect();
        let a = Hull::compute(&k, Elimination::Batch).unwrap();
        let b = Hull::compute(&image, Elimination::Batch).unwrap();
        prop_assert_eq!(a.contains(&q), b.contains(&t.apply(&q)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn verification_passes(k in instance(), seed in any::<u64>()) {
        let hull = Hull::compute(&k, Elimination::Batch).unwrap();
        let report = verify_hull(&hull.input, &hull.trace, &hull.complex, 40, seed).unwrap();
        prop_assert!(report.overall, "{report}");
    }
}

#[test]
fn single_level_hull_is_planar_hull() {
    let k: Vec<Point3> = [(0, 0), (4, 0), (0, 4), (1, 1)].iter().map(|&(x, y)| Point3::from_ints(x, y, 2)).collect();
    let hull = Hull::compute(&k, Elimination::Batch).unwrap();
    let level = hull.complex.level_at(&int(2)).unwrap();
    let planar: Vec<Point2> = k.iter().map(|p| p.xy.clone()).collect();
    assert_eq!(*level, convex_hull_2d(&planar).unwrap());
}
