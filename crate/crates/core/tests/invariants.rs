mod common;

use num_traits::Signed;
use proptest::prelude::*;
use rand::Rng;

use toric_core::asymptotics::hhat;
use toric_core::cohomology::{cech_alternating_ranks, cech_full_ranks, h_all, weight_subset};
use toric_core::divisor::{is_ample, is_nef, linear_equiv_shift};
use toric_core::fixtures;
use toric_core::homology::{local_cohomology_ranks, local_cohomology_ranks_with_order, PullOrder};
use toric_core::polyhedra::{closure_vertices, lattice_points, normalized_volume, region};
use toric_core::rational::{frac, pow, q};
use toric_core::{Fan, RaySet, TWeilDivisor, Q};

fn complete_fixtures() -> Vec<(&'static str, Fan)> {
    fixtures::all().into_iter().filter(|(_, f)| f.is_complete()).collect()
}

fn surface_fixtures() -> Vec<Fan> {
    vec![
        fixtures::p2(),
        fixtures::p1xp1(),
        fixtures::f1(),
        fixtures::p112(),
        fixtures::bl2_p2(),
        fixtures::bl3_p2(),
    ]
}

fn divisor_strategy(nrays: usize) -> impl Strategy<Value = TWeilDivisor> {
    prop::collection::vec(-4i64..=4, nrays).prop_map(|c| TWeilDivisor::from_ints(&c))
}

fn surface_and_divisor() -> impl Strategy<Value = (Fan, TWeilDivisor)> {
    (0..surface_fixtures().len()).prop_flat_map(|k| {
        let fan = surface_fixtures().swap_remove(k);
        let n = fan.num_rays();
        (Just(fan), divisor_strategy(n))
    })
}

#[test]
fn chi_matches_cone_count() {
    for (name, fan) in fixtures::all() {
        for subset in fan.all_rays().subsets() {
            let mut count = 0i64;
            for (j, level) in fan.all_cones().iter().enumerate() {
                let k = level.iter().filter(|c| c.is_subset(subset)).count() as i64;
                count += if j % 2 == 0 { k } else { -k };
            }
            assert_eq!(fan.subfan(subset).chi(), count, "{name} {subset:?}");
        }
    }
}

#[test]
fn subfan_is_monotone() {
    for (name, fan) in fixtures::all() {
        assert!(fan.subfan(fan.all_rays()) == fan, "{name}");
        let subsets: Vec<RaySet> = fan.all_rays().subsets().collect();
        for &a in &subsets {
            let sa = fan.subfan(a);
            for &b in subsets.iter().filter(|&&b| a.is_subset(b)) {
                let sb = fan.subfan(b);
                for (la, lb) in sa.all_cones().iter().zip(sb.all_cones()) {
                    assert!(la.iter().all(|c| lb.contains(c)), "{name} {a:?} ⊆ {b:?}");
                }
            }
        }
    }
}

#[test]
fn completeness_by_sampling() {
    let mut rng = common::rng(117);
    for (name, fan) in fixtures::all() {
        let mut missed = 0;
        for _ in 0..1000 {
            let v: Vec<Q> = (0..fan.dim()).map(|_| frac(rng.gen_range(-97..=97), rng.gen_range(1..=13))).collect();
            if v.iter().all(|x| *x == q(0)) {
                continue;
            }
            if !fan.support_contains(&v) {
                missed += 1;
            }
        }
        assert_eq!(fan.is_complete(), missed == 0, "{name}: {missed} directions outside");
    }
}

#[test]
fn profiles_do_not_depend_on_pulling_order() {
    for (name, fan) in fixtures::all() {
        for subset in fan.all_rays().subsets() {
            assert_eq!(
                local_cohomology_ranks_with_order(&fan, subset, PullOrder::LowestIndex),
                local_cohomology_ranks_with_order(&fan, subset, PullOrder::HighestIndex),
                "{name} {subset:?}"
            );
        }
    }
}

#[test]
fn full_support_profile_is_a_point() {
    for (name, fan) in complete_fixtures() {
        let mut expected = vec![0; fan.dim() + 1];
        expected[0] = 1;
        assert_eq!(local_cohomology_ranks(&fan, fan.all_rays()).0, expected, "{name}");
    }
}

#[test]
fn local_cohomology_euler_characteristic() {
    for (name, fan) in fixtures::all().into_iter().filter(|(_, f)| f.num_rays() <= 6) {
        let n = fan.dim() as i64;
        for subset in fan.all_rays().subsets() {
            let chi = fan.subfan(subset).chi();
            let sign = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(local_cohomology_ranks(&fan, subset).alternating_sum(), sign * chi, "{name} {subset:?}");
        }
    }
}

#[test]
fn alternating_and_full_cech_agree() {
    let fan = fixtures::p2();
    let mut rng = common::rng(406);
    for _ in 0..5 {
        let d = common::int_divisor(&mut rng, 3, -4, 4);
        for u0 in -5i64..=5 {
            for u1 in -5i64..=5 {
                let subset = weight_subset(&fan, &d, &[u0, u1]);
                assert_eq!(cech_alternating_ranks(&fan, subset), cech_full_ranks(&fan, subset));
            }
        }
    }
}

#[test]
fn class_invariance() {
    let mut rng = common::rng(178);
    for (name, fan) in complete_fixtures() {
        let rounds = if fan.dim() > 2 { 10 } else { 100 };
        for _ in 0..rounds {
            let d = common::int_divisor(&mut rng, fan.num_rays(), -3, 3);
            let u = common::int_vector(&mut rng, fan.dim(), -3, 3);
            let e = linear_equiv_shift(&fan, &d, &u).unwrap();
            assert_eq!(h_all(&fan, &d).unwrap(), h_all(&fan, &e).unwrap(), "{name}");
            assert_eq!(hhat(&fan, &d).unwrap(), hhat(&fan, &e).unwrap(), "{name}");
        }
    }
}

#[test]
fn global_sections_count_lattice_points() {
    let mut rng = common::rng(405);
    for (name, fan) in complete_fixtures() {
        for _ in 0..10 {
            let d = common::int_divisor(&mut rng, fan.num_rays(), -3, 4);
            let all = lattice_points(&region(&fan, &d, fan.all_rays()).unwrap()).unwrap();
            assert_eq!(h_all(&fan, &d).unwrap().0[0], all.len(), "{name}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn regions_partition_the_lattice((fan, d) in surface_and_divisor(), u in prop::array::uniform2(-6i64..=6)) {
        let uq = [q(u[0]), q(u[1])];
        let hits: Vec<RaySet> = fan
            .all_rays()
            .subsets()
            .filter(|&s| region(&fan, &d, s).unwrap().contains(&uq))
            .collect();
        prop_assert_eq!(hits, vec![weight_subset(&fan, &d, &u)]);
    }

    #[test]
    fn dilation_scales_lattice_points((fan, d) in surface_and_divisor(), m in 2i64..=3) {
        for subset in toric_core::polyhedra::bounded_subsets(&fan, 20).unwrap() {
            let base = region(&fan, &d, subset).unwrap();
            let scaled = lattice_points(&region(&fan, &d.scaled(&q(m)), subset).unwrap()).unwrap();
            let reach = closure_vertices(&base)
                .unwrap()
                .vertices
                .iter()
                .flatten()
                .map(|x| x.abs().ceil().to_integer())
                .max()
                .unwrap_or_default();
            let bound = i64::try_from(reach).unwrap() * m + 1;
            let mut brute = Vec::new();
            for a in -bound..=bound {
                for b in -bound..=bound {
                    if base.contains(&[frac(a, m), frac(b, m)]) {
                        brute.push(vec![a, b]);
                    }
                }
            }
            let mut sorted = scaled.clone();
            sorted.sort();
            brute.sort();
            prop_assert_eq!(sorted, brute);
        }
    }

    #[test]
    fn volume_is_homogeneous((fan, d) in surface_and_divisor(), m in 2i64..=3) {
        for subset in toric_core::polyhedra::bounded_subsets(&fan, 20).unwrap() {
            let v = normalized_volume(&region(&fan, &d, subset).unwrap()).unwrap();
            let vm = normalized_volume(&region(&fan, &d.scaled(&q(m)), subset).unwrap()).unwrap();
            prop_assert_eq!(vm, v * q(m * m));
        }
    }

    #[test]
    fn unbounded_regions_have_recession_directions((fan, d) in surface_and_divisor()) {
        for subset in fan.all_rays().subsets() {
            let r = region(&fan, &d, subset).unwrap();
            match r.recession_direction() {
                None => prop_assert!(r.is_bounded()),
                Some(dir) => {
                    prop_assert!(!r.is_bounded());
                    for (i, v) in fan.rays().iter().enumerate() {
                        let s: Q = v.iter().zip(&dir).map(|(a, b)| q(*a) * b).sum();
                        if subset.contains(i) {
                            prop_assert!(s >= q(0));
                        } else {
                            prop_assert!(s <= q(0));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn hhat_is_homogeneous((fan, d) in surface_and_divisor(), m in 2i64..=3) {
        let h = hhat(&fan, &d).unwrap();
        let hm = hhat(&fan, &d.scaled(&q(m))).unwrap();
        let factor = pow(&q(m), fan.dim());
        prop_assert_eq!(hm.0, h.0.iter().map(|x| x * &factor).collect::<Vec<_>>());
    }

    #[test]
    fn ampleness_is_scale_invariant((fan, d) in surface_and_divisor()) {
        if is_ample(&fan, &d).unwrap() {
            prop_assert!(is_nef(&fan, &d).unwrap());
            for c in [q(2), frac(1, 3)] {
                prop_assert!(is_ample(&fan, &d.scaled(&c)).unwrap());
            }
        }
    }
}

#[test]
fn three_dimensional_homogeneity() {
    let mut rng = common::rng(470);
    for fan in [fixtures::p3(), fixtures::p1xp1xp1(), fixtures::cube_fan()] {
        for _ in 0..5 {
            let d = common::int_divisor(&mut rng, fan.num_rays(), -2, 3);
            let h = hhat(&fan, &d).unwrap();
            for m in [2i64, 3] {
                let factor = pow(&q(m), 3);
                let hm = hhat(&fan, &d.scaled(&q(m))).unwrap();
                assert_eq!(hm.0, h.0.iter().map(|x| x * &factor).collect::<Vec<_>>());
            }
        }
    }
}
