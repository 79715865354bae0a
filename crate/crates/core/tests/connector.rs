use std::sync::Arc;

use gummcalc::abelian::diagonal_punctuation;
use gummcalc::algebra::{kernel_pair, product};
use gummcalc::congruence::{all_congruences, BinaryRelation};
use gummcalc::connector::{
    centralize, check_axiom_star_instance, check_connector, dp_via_axiom_star, find_category_structures,
    find_groupoid_structure, find_maltsev_preconnectors, find_preconnectors, lift_discrete_fibration,
    scan_fiber_axiom_star, scan_pointed_axiom_star, GraphMorphism, Preconnector,
};
use gummcalc::corpus;
use gummcalc::{Caps, Error, FiniteAlgebra, Homomorphism, Partition, ReflexiveGraph};

fn arc(a: FiniteAlgebra) -> Arc<FiniteAlgebra> {
    Arc::new(a)
}

fn blocks(n: usize, b: &[&[usize]]) -> Partition {
    Partition::from_blocks(n, &b.iter().map(|x| x.to_vec()).collect::<Vec<_>>()).unwrap()
}

#[test]
fn connector_on_abelian_groups_is_the_group_term() {
    let caps = Caps::default();
    let z4 = arc(corpus::cyclic(4));
    let full = Partition::full(4);
    let c = centralize(&z4, &full, &full, &caps).unwrap().expect("Z4 is abelian");
    for x in 0..4 {
        for y in 0..4 {
            for z in 0..4 {
                assert_eq!(c.apply(x, y, z), Some((x + 4 - y + z) % 4));
            }
        }
    }
    let mod2 = blocks(4, &[&[0, 2], &[1, 3]]);
    let c = centralize(&z4, &mod2, &mod2, &caps).unwrap().expect("sub-congruences centralize");
    assert_eq!(c.apply(1, 3, 3), Some(1));
    assert_eq!(c.apply(0, 1, 2), None);

    let k = arc(corpus::klein());
    assert!(centralize(&k, &Partition::full(4), &Partition::full(4), &caps).unwrap().is_some());
}

#[test]
fn non_abelian_pairs_have_no_connector() {
    let caps = Caps::default();
    let s3 = arc(corpus::symmetric3());
    let full = Partition::full(6);
    let a3 = blocks(6, &[&[0, 3, 4], &[1, 2, 5]]);
    assert!(centralize(&s3, &full, &full, &caps).unwrap().is_none());
    assert!(centralize(&s3, &a3, &full, &caps).unwrap().is_none());
    assert!(centralize(&s3, &a3, &a3, &caps).unwrap().is_some());
    let c3 = arc(corpus::chain3());
    assert!(centralize(&c3, &Partition::full(3), &Partition::full(3), &caps).unwrap().is_none());
}

#[test]
fn discrete_relation_is_centralized_by_everything() {
    let caps = Caps::default();
    for a in corpus::groups() {
        let a = arc(a);
        let n = a.size();
        let c = centralize(&a, &Partition::discrete(n), &Partition::full(n), &caps).unwrap().expect("Δ");
        for x in 0..n {
            for z in 0..n {
                assert_eq!(c.apply(x, x, z), Some(z));
            }
        }
    }
}

#[test]
fn preconnectors_include_non_maltsev_ones() {
    let caps = Caps::default();
    let z2 = arc(corpus::cyclic(2));
    let full = Partition::full(2);
    let all = find_preconnectors(&z2, &full, &full, &caps).unwrap();
    let maltsev = find_maltsev_preconnectors(&z2, &full, &full, &caps).unwrap();
    assert_eq!(maltsev.len(), 1);
    assert!(all.len() > maltsev.len());
    let projections = all.iter().filter(|p| !p.is_maltsev()).count();
    assert_eq!(projections, all.len() - 1);
}

#[test]
fn corrupted_table_reports_axiom_two() {
    let caps = Caps::default();
    let z4 = arc(corpus::cyclic(4));
    let full = Partition::full(4);
    let c = centralize(&z4, &full, &full, &caps).unwrap().unwrap();
    let report = check_connector(&c.pre);
    assert!(report.is_connector());
    assert_eq!(report.lemma_injective, Some(true));

    let mut table = c.pre.table.clone();
    let i = c.pre.chain.index(0, 0, 1).unwrap();
    table[i] = 2;
    let bad = Preconnector::from_table(c.pre.chain.clone(), table).unwrap();
    let report = check_connector(&bad);
    assert!(!report.axiom2.pass);
    assert_eq!(report.axiom2.witness, Some(vec![0, 0, 1]));
    assert!(!report.homomorphism);
    assert!(report.implication_holds);

    assert!(Preconnector::from_table(c.pre.chain.clone(), vec![0; 3]).is_err());
}

#[test]
fn maltsev_preconnectors_are_associative_across_the_corpus() {
    let caps = Caps::default();
    let mut algebras = corpus::groups();
    algebras.push(corpus::chain3());
    for a in algebras {
        let a = arc(a);
        let lat = all_congruences(&a, &caps).unwrap();
        for r in lat.elements() {
            for s in lat.elements() {
                for pc in find_maltsev_preconnectors(&a, r.partition(), s.partition(), &caps).unwrap() {
                    let report = check_connector(&pc);
                    assert!(report.axiom3.pass, "{} {:?}", a.name(), report.axiom3.witness);
                    assert!(report.implication_holds);
                    assert_eq!(report.lemma_injective, Some(true));
                }
            }
        }
    }
}

#[test]
fn reference_graphs_carry_one_category() {
    let caps = Caps::default();
    for (name, g) in corpus::reference_graphs() {
        let cats = find_category_structures(&g, &caps).unwrap();
        assert_eq!(cats.len(), 1, "{name}");
        let c = &cats[0];
        assert!(c.associative && c.left_cancellable && c.right_cancellable, "{name}");
        let gr = find_groupoid_structure(&g, &caps).unwrap().expect("groupoid");
        assert!(gr.agrees_with_category, "{name}");
        assert_eq!(gr.chi_autonomous, Some(true), "{name}");
        for a in 0..g.x1.size() {
            let back = c.compose(a, gr.inverse[a]).unwrap();
            assert_eq!(back, g.s0.apply(g.d0.apply(a)));
        }
    }
}

#[test]
fn abelian_graph_composition_is_addition() {
    let caps = Caps::default();
    let g = corpus::abelian_graph();
    let c = &find_category_structures(&g, &caps).unwrap()[0];
    // Arrows (a, b) go a -> a+b; composing adds the second coordinates.
    for (a, b, ba) in c.summary().composition {
        assert_eq!(ba / 2, a / 2);
        assert_eq!(ba % 2, (a % 2 + b % 2) % 2);
    }
}

#[test]
fn pair_graphs_are_groupoids() {
    let caps = Caps::default();
    let g = corpus::pair_graph(corpus::cyclic(3));
    assert_eq!(find_category_structures(&g, &caps).unwrap().len(), 1);
    let gr = find_groupoid_structure(&g, &caps).unwrap().expect("indiscrete groupoid");
    assert!(gr.agrees_with_category);
    // (a, b)⁻¹ = (b, a).
    for e in 0..9 {
        assert_eq!(gr.inverse[e], (e % 3) * 3 + e / 3);
    }
    // S3 x S3 has 36 arrows; the chain algebra is over the generation cap.
    let big = corpus::pair_graph(corpus::symmetric3());
    assert_eq!(find_category_structures(&big, &caps).unwrap().len(), 1);
    assert!(matches!(find_groupoid_structure(&big, &caps), Err(Error::CapExceeded { .. })));
}

#[test]
fn bundled_graphs_match_builders() {
    let pairs = [
        ("abelian", corpus::abelian_graph()),
        ("identity", corpus::identity_graph()),
        ("pair", corpus::pair_graph(corpus::cyclic(2))),
    ];
    for (stem, built) in pairs {
        let parsed = corpus::bundled_graph(stem).unwrap();
        for (p, b) in [(&parsed.d0, &built.d0), (&parsed.d1, &built.d1), (&parsed.s0, &built.s0)] {
            assert_eq!(p.map(), b.map(), "{stem}");
        }
        assert_eq!(parsed.x1.operations(), built.x1.operations(), "{stem}");
        assert_eq!(parsed.x0.operations(), built.x0.operations(), "{stem}");
    }
}

fn identity_morphism(g: &ReflexiveGraph) -> GraphMorphism {
    GraphMorphism::new(
        g.clone(),
        g.clone(),
        Homomorphism::identity(g.x0.clone()),
        Homomorphism::identity(g.x1.clone()),
    )
    .unwrap()
}

#[test]
fn lifting_along_the_identity() {
    let caps = Caps::default();
    let g = corpus::abelian_graph();
    let c = &find_category_structures(&g, &caps).unwrap()[0];
    let lifted = lift_discrete_fibration(&identity_morphism(&g), c).unwrap();
    assert_eq!(lifted.comp.map(), c.comp.map());
}

#[test]
fn lifting_along_a_discrete_fibration() {
    let caps = Caps::default();
    let (source, target, h0, h1) = corpus::fibration_example();
    let h = GraphMorphism::new(source.clone(), target.clone(), h0, h1).unwrap();
    let tc = &find_category_structures(&target, &caps).unwrap()[0];
    let lifted = lift_discrete_fibration(&h, tc).unwrap();
    assert!(lifted.associative);
    let direct = find_category_structures(&source, &caps).unwrap();
    assert_eq!(direct.len(), 1);
    assert_eq!(lifted.comp.map(), direct[0].comp.map());
    // h1 preserves composition.
    for (a, b, ba) in lifted.summary().composition {
        assert_eq!(tc.compose(h.h1.apply(a), h.h1.apply(b)), Some(h.h1.apply(ba)));
    }
}

#[test]
fn lifting_requires_a_pullback() {
    let caps = Caps::default();
    let source = corpus::pair_graph(corpus::klein());
    let target = corpus::pair_graph(corpus::cyclic(2));
    let first = |u: usize| u / 2;
    let h0 = Homomorphism::new(source.x0.clone(), target.x0.clone(), (0..4).map(first).collect()).unwrap();
    let h1 = Homomorphism::new(
        source.x1.clone(),
        target.x1.clone(),
        (0..16).map(|e| first(e / 4) * 2 + first(e % 4)).collect(),
    )
    .unwrap();
    let h = GraphMorphism::new(source, target.clone(), h0, h1).unwrap();
    let tc = &find_category_structures(&target, &caps).unwrap()[0];
    assert!(matches!(lift_discrete_fibration(&h, tc), Err(Error::Precondition(_))));
}

#[test]
fn graph_morphism_must_commute() {
    let g = corpus::abelian_graph();
    let bad = Homomorphism::new(g.x1.clone(), g.x1.clone(), vec![0, 0, 0, 0]).unwrap();
    let r = GraphMorphism::new(g.clone(), g.clone(), Homomorphism::identity(g.x0.clone()), bad);
    assert!(matches!(r, Err(Error::Invalid(_))));
}

#[test]
fn pointed_axiom_star_scans_pass_on_groups() {
    let caps = Caps::default();
    for (x, z) in [
        (corpus::cyclic(2), corpus::cyclic(2)),
        (corpus::cyclic(2), corpus::cyclic(4)),
        (corpus::klein(), corpus::cyclic(2)),
        (corpus::cyclic(3), corpus::cyclic(3)),
    ] {
        let (x, z) = (arc(x), arc(z));
        let scan = scan_pointed_axiom_star(&x, &z, &caps).unwrap();
        assert!(scan.relations > 0 && scan.instances > 0);
        assert!(scan.passed(), "{} {}: {:?}", x.name(), z.name(), scan.failures);
    }
}

#[test]
fn fiber_axiom_star_scans_pass() {
    let caps = Caps::default();
    let epis = corpus::split_epis_over_z2();
    for (nf, f) in &epis {
        for (ng, g) in &epis {
            let scan = scan_fiber_axiom_star(f, g, &caps).unwrap();
            assert!(scan.instances > 0, "{nf} {ng}");
            assert!(scan.passed(), "{nf} {ng}: {:?}", scan.failures);
        }
    }
}

#[test]
fn axiom_star_instance_preconditions() {
    let z2 = arc(corpus::cyclic(2));
    // The diagonal of Z2 misses (0, 1).
    let diag = BinaryRelation::new(z2.clone(), z2.clone(), vec![(0, 0), (1, 1)]).unwrap();
    assert!(matches!(check_axiom_star_instance(&diag, &Partition::full(2)), Err(Error::Precondition(_))));
    let full = BinaryRelation::new(z2.clone(), z2.clone(), vec![(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
    assert_eq!(check_axiom_star_instance(&full, &Partition::full(4)), Ok(true));
    let not_cong = blocks(4, &[&[0, 1]]);
    assert!(matches!(check_axiom_star_instance(&full, &not_cong), Err(Error::NotCongruence(_))));
}

#[test]
fn star_quotient_of_the_identity_is_dp() {
    let caps = Caps::default();
    for a in [corpus::cyclic(2), corpus::cyclic(3), corpus::cyclic(4)] {
        let a = arc(a);
        let id = Homomorphism::identity(a.clone());
        let q = dp_via_axiom_star(&id, &caps).unwrap();
        let dp = diagonal_punctuation(&a, &caps).unwrap();
        assert_eq!(q.q_alg.size(), dp.size());
        assert_eq!(Partition::from_labels(q.q.map()), Partition::from_labels(dp.omega.map()));
    }
}

#[test]
fn star_quotient_edge_cases() {
    let caps = Caps::default();
    let z2 = arc(corpus::cyclic(2));
    let zero = Homomorphism::new(z2.clone(), z2.clone(), vec![0, 0]).unwrap();
    assert_eq!(dp_via_axiom_star(&zero, &caps).unwrap().q_alg.size(), 2);

    let t = arc(corpus::trivial());
    let z3 = arc(corpus::cyclic(3));
    let from_trivial = Homomorphism::new(t, z3, vec![0]).unwrap();
    assert_eq!(dp_via_axiom_star(&from_trivial, &caps).unwrap().q_alg.size(), 3);
}

#[test]
fn kernel_pairs_of_projections_commute() {
    let caps = Caps::default();
    let z2 = corpus::cyclic(2);
    let sq = arc(product(&z2, &z2).unwrap());
    let z2 = arc(z2);
    let p0 = Homomorphism::new(sq.clone(), z2.clone(), vec![0, 0, 1, 1]).unwrap();
    let p1 = Homomorphism::new(sq.clone(), z2, vec![0, 1, 0, 1]).unwrap();
    let c = centralize(&sq, kernel_pair(&p0).partition(), kernel_pair(&p1).partition(), &caps).unwrap();
    assert!(c.is_some());
}
