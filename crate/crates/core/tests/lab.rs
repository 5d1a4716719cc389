use std::collections::BTreeSet;

use num_bigint::BigInt;

use graphconf::complex::{build_model, BuildOptions, CubeComplex};
use graphconf::graph::{make_cycle_graph, make_h_graph, make_star, make_two_center_tree, FamilyDescriptor, Graph};
use graphconf::homology::{homology, permutation_action_map, GraphAutomorphism};
use graphconf::lab::{
    generation_degree_check, degree_bound, star_cycle, tree_generator_report, verify_tree_generators, Parking,
};

fn model(g: &Graph, n: usize) -> CubeComplex {
    build_model(g, n, &BTreeSet::new(), &BuildOptions::default()).unwrap()
}

#[test]
fn degree_verdicts_are_monotone() {
    let families = [
        FamilyDescriptor::star_family(),
        FamilyDescriptor::interval(make_cycle_graph(3).unwrap()).unwrap(),
        FamilyDescriptor::circle(make_cycle_graph(3).unwrap()).unwrap(),
    ];
    for f in &families {
        let r = generation_degree_check(f, 2, 1, 5, &[5], &BuildOptions::default()).unwrap();
        let passing: Vec<bool> = r.verdicts.iter().map(|v| v.over_z).collect();
        let first = passing.iter().position(|&p| p);
        assert_eq!(first, r.d_min.map(|d| r.verdicts.iter().position(|v| v.degree == d).unwrap()));
        if let Some(i) = first {
            assert!(passing[i..].iter().all(|&p| p), "{:?}: {passing:?}", f.kind);
        }
        for v in &r.verdicts {
            assert!(!v.over_z || v.over_q);
        }
        assert_eq!(r.degree_bound, degree_bound(f, 2));
    }
}

#[test]
fn degree_below_the_first_pass_fails() {
    let f = FamilyDescriptor::star_family();
    let r = generation_degree_check(&f, 2, 1, 3, &[6], &BuildOptions::default()).unwrap();
    assert!(!r.over_z);
    assert!(r.verdicts.iter().all(|v| v.missing_rank > 0));
    assert_eq!(r.betti, 19);
}

#[test]
fn products_generate_second_homology() {
    for g in [make_h_graph(), make_two_center_tree(3, 3).unwrap()] {
        let r = tree_generator_report(&g, 4, 2, &BuildOptions::default()).unwrap();
        assert!(r.verdict.generates_over_z, "{r:?}");
        assert!(r.candidates > 0);
    }
}

#[test]
fn cycles_are_not_trees() {
    assert!(verify_tree_generators(&make_cycle_graph(4).unwrap(), 2, 1).is_err());
}

#[test]
fn star_classes_follow_leg_permutations() {
    let f = FamilyDescriptor::star_family();
    let realized = f.realize(&[4]).unwrap();
    let c = model(&realized.graph, 2);
    let h = homology(&c, 1).unwrap();
    let sigma = vec![1, 2, 0, 3];
    let auto = GraphAutomorphism::from_summand_permutation(&realized, 0, &sigma).unwrap();
    let action = permutation_action_map(&c, &auto).unwrap();
    assert!(action.is_chain_map(&c));
    let leg = |i: usize| auto.edge_map[i].0;
    let center = realized.graph.essential_vertices()[0];
    let legs: Vec<usize> = realized.graph.germs(center).into_iter().map(|(e, _)| e).collect();
    for (p, q) in [(0, 1), (1, 0)] {
        let z = star_cycle(&c, center, [legs[0], legs[1], legs[2]], p, q, &Parking::default()).unwrap();
        let image = star_cycle(&c, center, [leg(legs[0]), leg(legs[1]), leg(legs[2])], p, q, &Parking::default()).unwrap();
        assert_eq!(h.project(&action.apply(1, &z.chain)).unwrap(), h.project(&image.chain).unwrap());
    }
    assert_eq!(action.trace(&h).unwrap(), BigInt::from(-1));
}

#[test]
fn tree_homology_is_concentrated_below_essential_count() {
    let star = make_star(4).unwrap();
    let c = model(&star, 3);
    assert_eq!(homology(&c, 2).unwrap().betti(), 0);
}
