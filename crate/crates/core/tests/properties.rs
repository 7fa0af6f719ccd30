mod common;

use num_traits::{One, Zero};
use proptest::prelude::*;

use chigf::canon::{canonize, LatticeTransform};
use chigf::certify::linalg::{dot, null_space};
use chigf::certify::{project_to_witness, witness_slacks};
use chigf::congr::{are_congruent, build_constraints};
use chigf::field::{rat, MoserPoint};
use chigf::lp::{chi_f, chi_f_model, chi_gf, solve, Mode};
use chigf::udgraph::{
    aggregate, build_graph, cube_colouring, deaggregate, enumerate_independent_sets, hall_ratio,
    independence_ratio, restrict_colouring, UnitGraph, VertexSet, WeightFunction,
};
use chigf::Rational;
use common::{congruent_by_float, lattice_graph};

fn exact(sol: chigf::lp::Solution) -> Rational {
    sol.exact_objective().expect("optimal").clone()
}

fn subset_of(g: &UnitGraph, bits: u64) -> VertexSet {
    VertexSet(bits & g.all_vertices().bits())
}

fn weight_function(n: usize) -> impl Strategy<Value = WeightFunction> {
    prop::collection::vec((0u64..(1 << n), -20i64..=20, 1i64..=6), 1..8).prop_map(|v| {
        WeightFunction::from_pairs(v.into_iter().map(|(s, p, q)| (VertexSet(s), rat(p, q))))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn canonize_is_a_normal_form(
        pts in lattice_graph(1, 9),
        k in 0usize..12,
        t in prop::array::uniform4(-5i64..=5),
    ) {
        let c = canonize(&pts).unwrap();
        prop_assert_eq!(canonize(c.points()).unwrap(), c.clone());
        let shift = MoserPoint::from_coeffs(t);
        let moved: Vec<MoserPoint> = pts.iter().map(|p| LatticeTransform::group()[k].apply(*p) + shift).collect();
        prop_assert_eq!(canonize(&moved).unwrap(), c);
    }

    #[test]
    fn congruence_matches_float_oracle(pts in lattice_graph(3, 9), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let g = build_graph(&pts).unwrap();
        let sets: Vec<Vec<MoserPoint>> = [a, b, c]
            .iter()
            .map(|&bits| {
                let mut s = subset_of(&g, bits);
                while s.len() > 5 {
                    s = s.without(s.first().unwrap());
                }
                g.points_of(s)
            })
            .collect();
        for y in &sets {
            prop_assert!(are_congruent(y, y));
            for z in &sets {
                prop_assert_eq!(are_congruent(y, z), congruent_by_float(y, z));
                prop_assert_eq!(are_congruent(y, z), are_congruent(z, y));
            }
        }
        if are_congruent(&sets[0], &sets[1]) && are_congruent(&sets[1], &sets[2]) {
            prop_assert!(are_congruent(&sets[0], &sets[2]));
        }
    }

    #[test]
    fn congruent_translates_and_rotations(pts in lattice_graph(2, 6), k in 0usize..12, t in prop::array::uniform4(-3i64..=3)) {
        let shift = MoserPoint::from_coeffs(t);
        let moved: Vec<MoserPoint> = pts.iter().map(|p| LatticeTransform::group()[k].apply(*p) + shift).collect();
        prop_assert!(are_congruent(&pts, &moved));
    }

    #[test]
    fn aggregate_round_trip(gamma in weight_function(10)) {
        let agg = aggregate(&gamma);
        prop_assert_eq!(deaggregate(&agg), gamma.clone());
        prop_assert_eq!(agg.get(VertexSet::EMPTY), gamma.total());
    }

    #[test]
    fn restriction_identities(gamma in weight_function(8), h in 0u64..256) {
        let h = VertexSet(h);
        let gh = restrict_colouring(&gamma, h);
        prop_assert_eq!(gh.total(), gamma.total());
        let rest = VertexSet::full(8).difference(h);
        let agg = aggregate(&gamma);
        let agg_h = aggregate(&gh);
        for s in h.subsets() {
            let direct = rest.subsets().fold(Rational::zero(), |acc, y| acc + gamma.get(s.union(y)));
            prop_assert_eq!(gh.get(s), direct);
            let over = gamma.iter().filter(|(sup, _)| s.is_subset(*sup)).fold(Rational::zero(), |acc, (_, v)| acc + v);
            prop_assert_eq!(agg_h.get(s), over.clone());
            prop_assert_eq!(agg.get(s), over);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn chromatic_chain(pts in lattice_graph(2, 12), drop in any::<prop::sample::Index>()) {
        let g = build_graph(&pts).unwrap();
        let mode = Mode::exact();
        let f = exact(chi_f(&g, &mode).unwrap());
        let gf = exact(chi_gf(&g, &mode).unwrap());
        prop_assert!(f <= gf);
        prop_assert!(&f * independence_ratio(&g).unwrap() >= Rational::one());
        prop_assert!(hall_ratio(&g, 12).unwrap() <= f);
        let keep = g.all_vertices().without(drop.index(g.len()));
        let h = build_graph(&g.points_of(keep)).unwrap();
        prop_assert!(exact(chi_f(&h, &mode).unwrap()) <= f);
        prop_assert!(exact(chi_gf(&h, &mode).unwrap()) <= gf);
    }

    #[test]
    fn regular_colourings_cost_nothing(pts in lattice_graph(1, 10)) {
        let g = build_graph(&pts).unwrap();
        let f = exact(chi_f(&g, &Mode::exact()).unwrap());
        prop_assert_eq!(exact(solve(&chi_f_model(&g, true), &Mode::exact()).unwrap()), f);
    }

    #[test]
    fn cube_colouring_is_regular(pts in lattice_graph(1, 8), n in 0i64..=1) {
        let g = build_graph(&pts).unwrap();
        let c = cube_colouring(&g, n, 1).unwrap();
        for x in 0..g.len() {
            prop_assert_eq!(c.gamma.coverage(x), Rational::one());
        }
        prop_assert!(c.gamma.is_fractional_colouring(&g));
        let expected = Rational::new(c.translates.into(), c.independent_set.len().into());
        prop_assert_eq!(c.gamma.total(), expected.clone());
        prop_assert_eq!(c.weight, expected);
    }
}

fn sharp_matrix(sys: &chigf::congr::ConstraintSystem, sharp: &[usize]) -> Vec<Vec<Rational>> {
    let mut m = vec![vec![Rational::zero(); sys.n_rows()]; sharp.len()];
    for (i, row) in sys.rows.iter().enumerate() {
        for (j, v) in row.entries() {
            if let Some(k) = sharp.iter().position(|&s| s == j) {
                m[k][i] = Rational::from_integer((v as i64).into());
            }
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn projection_is_orthogonal(
        pts in lattice_graph(4, 9),
        raw in prop::collection::vec(-50i64..=50, 64),
        pick in prop::collection::vec(any::<prop::sample::Index>(), 1..4),
    ) {
        let g = build_graph(&pts).unwrap();
        let sys = build_constraints(&g);
        prop_assume!(sys.n_rows() > 0);
        let t = rat(3, 1);
        let y_bar: Vec<Rational> = (0..sys.n_rows()).map(|i| rat(raw[i % raw.len()], 7)).collect();
        let mut sharp: Vec<usize> = pick.iter().map(|ix| ix.index(sys.n_cols)).collect();
        sharp.sort_unstable();
        sharp.dedup();
        match project_to_witness(&sys, &y_bar, &sharp, &t) {
            Ok(y) => {
                let slacks = witness_slacks(&sys, &y, &t).unwrap();
                for &j in &sharp {
                    prop_assert!(slacks[j].is_zero());
                }
                let delta: Vec<Rational> = y.iter().zip(&y_bar).map(|(a, b)| a - b).collect();
                for v in null_space(sharp_matrix(&sys, &sharp)) {
                    prop_assert!(dot(&delta, &v).is_zero());
                }
            }
            Err(chigf::Error::Inconsistent(_)) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }
}

#[test]
fn enumeration_matches_brute_force() {
    let mut runner = proptest::test_runner::TestRunner::new(ProptestConfig::with_cases(100));
    runner
        .run(&lattice_graph(1, 12), |pts| {
            let g = build_graph(&pts).unwrap();
            let n = g.len();
            let brute: Vec<u64> = (1u64..(1 << n))
                .filter(|s| {
                    (0..n).all(|i| {
                        (0..i).all(|j| {
                            s & (1 << i) == 0
                                || s & (1 << j) == 0
                                || (common::dist(g.vertex(i), g.vertex(j)) - 1.0).abs() > 1e-9
                        })
                    })
                })
                .collect();
            let mut got: Vec<u64> = enumerate_independent_sets(&g)
                .iter()
                .map(|s| s.bits())
                .collect();
            got.sort_unstable();
            prop_assert_eq!(got, brute);
            Ok(())
        })
        .unwrap();
}
