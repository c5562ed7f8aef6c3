use proptest::prelude::*;
use proptest::sample::{select, subsequence};

use toric_alpha::catalog::{catalog, lookup};
use toric_alpha::input::PolytopeInput;
use toric_alpha::invariants::{
    alpha_kg, alpha_km, alpha_km_search, alpha_via_orbits, c_general, c_k_subset, symmetry_alpha_bound,
    SearchOptions,
};
use toric_alpha::oracle::{c_star_bisection, interior_membership, Membership};
use toric_alpha::polytope::{support, FanoPolytope, Polytope};
use toric_alpha::symmetry::{automorphism_group, cyclic_subgroups, orbit_decomposition, project};
use toric_alpha::{Rat, RatVec};

const PLANAR: [&str; 5] = ["p2", "dp1", "dp2", "dp3", "p1xp1"];
const ALL: [&str; 8] = ["p2", "dp1", "dp2", "dp3", "p1xp1", "p3", "p2xp1", "p1cubed"];

fn fano(name: &str) -> FanoPolytope {
    lookup(name).unwrap().fano()
}

fn rat() -> impl Strategy<Value = Rat> {
    (-12i64..=12, 1i64..=4).prop_map(|(n, d)| Rat::new(n, d))
}

fn point(dim: usize) -> impl Strategy<Value = RatVec> {
    prop::collection::vec(rat(), dim).prop_map(RatVec::new)
}

fn named_point() -> impl Strategy<Value = (&'static str, RatVec)> {
    select(&ALL[..]).prop_flat_map(|name| (Just(name), point(fano(name).dim())))
}

/// Integer polygons that contain the unit cross-polytope, so the origin is interior.
fn polygon() -> impl Strategy<Value = Polytope> {
    prop::collection::vec((-4i64..=4, -4i64..=4), 0..6).prop_map(|extra| {
        let mut pts: Vec<RatVec> =
            [[1, 0], [0, 1], [-1, 0], [0, -1]].iter().map(|p| RatVec::from_ints(p)).collect();
        pts.extend(extra.iter().map(|&(a, b)| RatVec::from_ints(&[a, b])));
        Polytope::from_vertices(2, &pts).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn polar_is_an_involution(p in polygon()) {
        let back = p.polar().unwrap().polar().unwrap();
        prop_assert_eq!(back.vertices(), p.vertices());
    }

    #[test]
    fn gauge_at_most_one_iff_contained((name, x) in named_point()) {
        let p = fano(name).polytope().clone();
        let g = p.gauge(&x).unwrap();
        prop_assert_eq!(g <= Rat::one(), p.contains(&x));
        prop_assert_eq!(g == Rat::one(), p.on_boundary(&x));
    }

    #[test]
    fn support_matches_hull_support((name, y) in named_point()) {
        let p = fano(name).polytope().clone();
        prop_assert_eq!(support(p.vertices(), &y).unwrap(), p.support(&y));
        // vertex maximum principle: lattice points never beat the vertices
        let over_points = support(&p.lattice_points(1), &y).unwrap();
        prop_assert_eq!(over_points, p.support(&y));
    }

    #[test]
    fn near_norm_is_gauge_of_negated((name, x) in named_point()) {
        let f = fano(name);
        prop_assert_eq!(f.near_norm(&x), f.polytope().negated().gauge(&x).unwrap());
    }

    #[test]
    fn averaging_projection_is_idempotent((name, x) in named_point(), pick in any::<prop::sample::Index>()) {
        let f = fano(name);
        let subgroups = cyclic_subgroups(&automorphism_group(f.polytope()).unwrap());
        let h = &subgroups[pick.index(subgroups.len())];
        let once = project(h, &x);
        prop_assert_eq!(project(h, &once), once.clone());
        for g in h.elements() {
            prop_assert_eq!(g.apply(&once), once.clone());
        }
    }

    #[test]
    fn membership_agrees_with_gauge((name, x) in named_point()) {
        let f = fano(name);
        let p = f.polytope();
        let expected = match p.gauge(&x).unwrap().cmp(&Rat::one()) {
            std::cmp::Ordering::Less => Membership::Interior,
            std::cmp::Ordering::Equal => Membership::Boundary,
            std::cmp::Ordering::Greater => Membership::Outside,
        };
        prop_assert_eq!(interior_membership(&x, p.vertices()).unwrap(), expected);
    }

    #[test]
    fn subset_threshold_agrees_with_general_form(
        (name, picks) in select(&PLANAR[..]).prop_flat_map(|name| {
            let n = fano(name).polytope().lattice_points(1).len();
            (Just(name), subsequence((0..n).collect::<Vec<_>>(), 1..=4))
        })
    ) {
        let f = fano(name);
        let pts = f.polytope().lattice_points(1);
        let fs: Vec<RatVec> = picks.iter().map(|&i| pts[i].clone()).collect();
        let exact = c_k_subset(&f, &fs).unwrap();
        prop_assert_eq!(c_general(&fs, &pts).unwrap(), exact.clone());
        let mut reversed = fs.clone();
        reversed.reverse();
        prop_assert_eq!(c_k_subset(&f, &reversed).unwrap(), exact);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn bisection_brackets_exact_threshold(
        (name, picks) in select(&PLANAR[..]).prop_flat_map(|name| {
            let n = fano(name).polytope().lattice_points(2).len();
            (Just(name), subsequence((0..n).collect::<Vec<_>>(), 1..=3))
        })
    ) {
        let f = fano(name);
        let pts = f.polytope().lattice_points(2);
        let fs: Vec<RatVec> = picks.iter().map(|&i| pts[i].clone()).collect();
        let exact = c_general(&fs, f.polytope().vertices()).unwrap();
        let bracket = c_star_bisection(&fs, f.polytope().vertices(), 24).unwrap();
        prop_assert!(bracket.contains(&exact), "{:?} not in {:?}", exact, bracket);
        prop_assert_eq!(bracket.width(), Rat::new(1, 1 << 24));
    }
}

#[test]
fn automorphisms_permute_dilated_lattice_points() {
    for name in ALL {
        let p = fano(name).polytope().clone();
        let aut = automorphism_group(&p).unwrap();
        let kmax = if p.dim() == 2 { 5 } else { 2 };
        for k in 1..=kmax {
            let pts: std::collections::BTreeSet<RatVec> = p.lattice_points(k).into_iter().collect();
            for g in aut.elements() {
                assert!(pts.iter().all(|x| pts.contains(&g.apply(x))), "{name} k={k}");
            }
        }
    }
}

#[test]
fn orbit_sizes_sum_to_ehrhart_counts() {
    for name in ALL {
        let p = fano(name).polytope().clone();
        let aut = automorphism_group(&p).unwrap();
        let kmax = if p.dim() == 2 { 4 } else { 2 };
        for h in cyclic_subgroups(&aut).iter().chain([&aut]) {
            for k in 1..=kmax {
                let d = orbit_decomposition(h, &p, k).unwrap();
                assert_eq!(d.point_count() as u64, p.ehrhart_count(k), "{name} k={k}");
                assert!(d.orbits.iter().all(|o| h.order() % o.points.len() == 0));
            }
        }
    }
}

#[test]
fn vertex_and_orbit_paths_agree_on_every_cyclic_subgroup() {
    for name in ALL {
        let f = fano(name);
        let aut = automorphism_group(f.polytope()).unwrap();
        let kmax = 3;
        for h in cyclic_subgroups(&aut).iter().chain([&aut]) {
            let vertex = alpha_kg(&f, h, 1).unwrap().value;
            for k in 1..=kmax {
                assert_eq!(
                    alpha_via_orbits(&f, h, k).unwrap().value,
                    vertex,
                    "{name} |H|={} k={k}",
                    h.order()
                );
            }
        }
    }
}

#[test]
fn single_point_systems_recover_alpha() {
    for name in ALL {
        let f = fano(name);
        let alpha = alpha_kg(&f, &toric_alpha::symmetry::FiniteGroup::trivial(f.dim()), 1).unwrap().value;
        for k in 1..=2 {
            assert_eq!(alpha_km(&f, k, 1).unwrap().value, alpha, "{name} k={k}");
        }
    }
}

#[test]
fn grassmannian_alpha_is_monotone_in_m() {
    for name in ALL {
        let f = fano(name);
        let kmax = 3;
        for k in 1..=kmax {
            let values: Vec<Rat> = (1..=4).map(|m| alpha_km(&f, k, m).unwrap().value).collect();
            assert!(values.windows(2).all(|w| w[0] <= w[1]), "{name} k={k}: {values:?}");
        }
    }
}

#[test]
fn grassmannian_alpha_descends_toward_alpha() {
    for name in PLANAR {
        let f = fano(name);
        let alpha = alpha_kg(&f, &toric_alpha::symmetry::FiniteGroup::trivial(2), 1).unwrap().value;
        for m in 2..=3 {
            let values: Vec<Rat> = (1..=8).map(|k| alpha_km(&f, k, m).unwrap().value).collect();
            assert!(values.iter().all(|v| *v >= alpha), "{name} m={m}");
            assert!(values.windows(2).all(|w| w[0] >= w[1]), "{name} m={m}: {values:?}");
            let gap = |v: &Rat| v - &alpha;
            assert!(values[0] == alpha || gap(&values[7]) < gap(&values[0]), "{name} m={m}");
        }
    }
}

#[test]
fn parallel_search_matches_serial() {
    for name in ["p2", "dp3", "p2xp1"] {
        let f = fano(name);
        for (k, m) in [(2, 2), (2, 3), (1, 4)] {
            let serial = alpha_km_search(&f, k, m, SearchOptions { threads: 1 }).unwrap().0;
            let parallel = alpha_km_search(&f, k, m, SearchOptions { threads: 4 }).unwrap().0;
            assert_eq!(serial, parallel, "{name} k={k} m={m}");
        }
    }
}

#[test]
fn symmetry_bound_holds_on_catalog() {
    for e in catalog() {
        let b = symmetry_alpha_bound(&e.fano()).unwrap();
        assert!(b.holds, "{}", e.name);
    }
    assert_eq!(symmetry_alpha_bound(&fano("p1cubed")).unwrap().alpha, Rat::new(1, 2));
    assert_eq!(symmetry_alpha_bound(&fano("p3")).unwrap().alpha, Rat::new(1, 4));
}

#[test]
fn catalog_round_trips_through_json() {
    for e in catalog() {
        let f = e.fano();
        let text = serde_json::to_string(&PolytopeInput::from_rays(e.name, &e.rays)).unwrap();
        let g = PolytopeInput::from_json(&text).unwrap().build().unwrap();
        assert_eq!(g.polytope().vertices(), f.polytope().vertices());
        let trivial = toric_alpha::symmetry::FiniteGroup::trivial(f.dim());
        assert_eq!(alpha_kg(&g, &trivial, 1).unwrap(), alpha_kg(&f, &trivial, 1).unwrap());
        let verts = serde_json::json!({ "vertices": f.polytope().vertices() }).to_string();
        let h = PolytopeInput::from_json(&verts).unwrap().build().unwrap();
        assert_eq!(h.rays().rays().len(), f.rays().rays().len());
        assert_eq!(alpha_kg(&h, &trivial, 1).unwrap().value, alpha_kg(&f, &trivial, 1).unwrap().value);
    }
}
