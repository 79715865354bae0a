use std::sync::Arc;

use gummcalc::algebra::Homomorphism;
use gummcalc::congruence::{
    all_congruences, congruence_generated, is_difunctional, join, meet, permute,
    preimage_congruence, relational_compose, sharp_intersection, square, zeta_surjective,
    BinaryRelation, PairSet,
};
use gummcalc::corpus;
use gummcalc::oracle::{oracle_all_congruences, oracle_least_congruence};
use gummcalc::{Caps, Congruence, FiniteAlgebra, Partition};

fn blocks(n: usize, b: &[&[usize]]) -> Partition {
    Partition::from_blocks(n, &b.iter().map(|x| x.to_vec()).collect::<Vec<_>>()).unwrap()
}

fn reps(list: &[Congruence]) -> Vec<Vec<usize>> {
    list.iter().map(|c| c.reps().to_vec()).collect()
}

#[test]
fn generation_examples() {
    let z4 = corpus::cyclic(4);
    assert!(congruence_generated(&z4, &[]).is_discrete());
    let all: Vec<(usize, usize)> = (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).collect();
    assert!(congruence_generated(&z4, &all).is_full());
    assert_eq!(congruence_generated(&z4, &[(0, 2)]).blocks(), vec![vec![0, 2], vec![1, 3]]);
}

#[test]
fn generation_is_least_per_oracle() {
    for a in corpus::all() {
        let n = a.size();
        for x in 0..n {
            for y in x + 1..n {
                let fast = congruence_generated(&a, &[(x, y)]);
                let slow = oracle_least_congruence(&a, &[(x, y)]).unwrap();
                assert_eq!(fast.partition(), &slow, "{} ({x},{y})", a.name());
            }
        }
    }
}

#[test]
fn lattice_examples() {
    let caps = Caps::default();
    let z4 = all_congruences(&corpus::cyclic(4), &caps).unwrap();
    assert_eq!(z4.len(), 3);
    assert_eq!(z4.get(1).blocks(), vec![vec![0, 2], vec![1, 3]]);
    assert_eq!(all_congruences(&corpus::trivial(), &caps).unwrap().len(), 1);
    assert_eq!(all_congruences(&FiniteAlgebra::bare(4), &caps).unwrap().len(), 15);
    assert_eq!(all_congruences(&corpus::klein(), &caps).unwrap().len(), 5);
}

#[test]
fn lattices_match_filter_oracle() {
    let caps = Caps::default();
    let mut algebras = corpus::all();
    algebras.push(corpus::cyclic(6));
    algebras.push(corpus::pointed_set(2));
    for a in algebras {
        let fast = all_congruences(&a, &caps).unwrap();
        let slow = oracle_all_congruences(&a).unwrap();
        let slow_reps: Vec<Vec<usize>> = slow.iter().map(|p| p.reps().to_vec()).collect();
        assert_eq!(reps(fast.elements()), slow_reps, "{}", a.name());
    }
}

#[test]
fn lattice_cap() {
    let caps = Caps { lattice_size: 3, ..Caps::default() };
    assert!(all_congruences(&corpus::cyclic(4), &caps).is_err());
}

#[test]
fn meet_and_join() {
    let klein = corpus::klein();
    let k0 = Congruence::new(&klein, blocks(4, &[&[0, 1], &[2, 3]])).unwrap();
    let k1 = Congruence::new(&klein, blocks(4, &[&[0, 2], &[1, 3]])).unwrap();
    assert!(meet(&k0, &k1).is_discrete());
    assert!(join(&klein, &k0, &k1).is_full());
    let full = Congruence::full(&klein);
    assert_eq!(&meet(&k0, &full), k0.partition());
    assert_eq!(join(&klein, &k0, &Congruence::discrete(&klein)), k0);
    let z4 = corpus::cyclic(4);
    let m = congruence_generated(&z4, &[(0, 2)]);
    assert_eq!(&meet(&m, &m), m.partition());
    assert_eq!(join(&z4, &m, &m), m);
}

#[test]
fn composition_examples() {
    let s = blocks(4, &[&[0, 2], &[1, 3]]);
    assert_eq!(relational_compose(&Partition::discrete(4), &s), PairSet::from_partition(&s));

    let alpha = blocks(3, &[&[0, 1]]);
    let beta = blocks(3, &[&[1, 2]]);
    assert!(relational_compose(&alpha, &beta).contains(0, 2));
    assert!(!relational_compose(&beta, &alpha).contains(0, 2));
    assert!(!permute(&alpha, &beta));
    assert_eq!(zeta_surjective(&alpha, &beta), Err([0, 1, 2]));

    let caps = Caps::default();
    let z4 = corpus::cyclic(4);
    let lat = all_congruences(&z4, &caps).unwrap();
    for r in lat.elements() {
        for t in lat.elements() {
            let j = PairSet::from_partition(&join(&z4, r, t));
            assert_eq!(relational_compose(r, t), j);
            assert_eq!(relational_compose(t, r), j);
            assert!(permute(r, t));
        }
    }
    assert!(permute(&Partition::discrete(4), &s));
}

#[test]
fn square_examples() {
    let d = Partition::discrete(3);
    assert_eq!(square(&d, &d).quads, vec![[0, 0, 0, 0], [1, 1, 1, 1], [2, 2, 2, 2]]);
    let f = Partition::full(2);
    assert_eq!(square(&f, &f).len(), 16);
    let m = blocks(4, &[&[0, 2], &[1, 3]]);
    // Brute force over all 4^4 quadruples.
    let mut count = 0;
    for q in 0..256 {
        let (x, y, t, z) = (q >> 6, (q >> 4) & 3, (q >> 2) & 3, q & 3);
        if m.related(x, y) && m.related(t, z) && m.related(x, t) && m.related(y, z) {
            count += 1;
        }
    }
    assert_eq!(count, 32);
    assert_eq!(square(&m, &m).len(), count);
}

#[test]
fn sharp_intersections() {
    let d = Partition::discrete(4);
    assert!(sharp_intersection(&d, &d));
    let k0 = blocks(4, &[&[0, 1], &[2, 3]]);
    let k1 = blocks(4, &[&[0, 2], &[1, 3]]);
    assert!(sharp_intersection(&k0, &k1));
    assert_eq!(square(&k0, &k1).len(), 16);
    assert!(!sharp_intersection(&k1, &k1));
}

#[test]
fn difunctional_relations() {
    let a = Arc::new(FiniteAlgebra::bare(2));
    let graph = BinaryRelation::new(a.clone(), a.clone(), vec![(0, 1), (1, 1)]).unwrap();
    assert!(is_difunctional(&graph));
    let all = BinaryRelation::new(a.clone(), a.clone(), vec![(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
    assert!(is_difunctional(&all));
    let bad = BinaryRelation::new(a.clone(), a, vec![(0, 0), (1, 0), (1, 1)]).unwrap();
    assert!(!is_difunctional(&bad));
    let z2 = Arc::new(corpus::cyclic(2));
    assert!(BinaryRelation::new(z2.clone(), z2, vec![(0, 0), (1, 0)]).is_ok());
    let z3 = Arc::new(corpus::cyclic(3));
    assert!(BinaryRelation::new(z3.clone(), z3, vec![(0, 0), (1, 1)]).is_err());
}

#[test]
fn preimages() {
    let z6 = Arc::new(corpus::cyclic(6));
    let z3 = Arc::new(corpus::cyclic(3));
    let id = Homomorphism::identity(z3.clone());
    let t = Congruence::discrete(&z3);
    assert_eq!(preimage_congruence(&id, &t).unwrap(), t);
    let mod3 = Homomorphism::new(z6.clone(), z3.clone(), (0..6).map(|x| x % 3).collect()).unwrap();
    assert_eq!(
        preimage_congruence(&mod3, &Congruence::discrete(&z3)).unwrap(),
        gummcalc::algebra::kernel_pair(&mod3)
    );
    // {{0},{1,2}} on Z3 is only an equivalence, which is all the preimage needs.
    let split = Congruence::new(&FiniteAlgebra::bare(3), blocks(3, &[&[1, 2]])).unwrap();
    assert_eq!(preimage_congruence(&mod3, &split).unwrap().blocks(), vec![vec![0, 3], vec![1, 2, 4, 5]]);
}

#[test]
fn permutability_matches_zeta_corpus_wide() {
    let caps = Caps::default();
    for a in corpus::all() {
        let lat = all_congruences(&a, &caps).unwrap();
        for r in lat.elements() {
            for s in lat.elements() {
                assert_eq!(zeta_surjective(r, s).is_ok(), permute(r, s), "{}", a.name());
                if sharp_intersection(r, s) {
                    let j = PairSet::from_partition(&join(&a, r, s));
                    assert_eq!(relational_compose(r, s), j);
                    assert_eq!(relational_compose(s, r), j);
                }
            }
        }
    }
}

#[test]
fn lattice_axioms_hold() {
    let caps = Caps::default();
    for a in corpus::all() {
        let lat = all_congruences(&a, &caps).unwrap();
        let n = lat.len();
        let (j, m) = (lat.join_table(), lat.meet_table());
        for x in 0..n {
            assert_eq!(j[x * n + x], x);
            assert_eq!(m[x * n + x], x);
            for y in 0..n {
                assert_eq!(j[x * n + y], j[y * n + x]);
                assert_eq!(m[x * n + y], m[y * n + x]);
                assert_eq!(j[x * n + m[x * n + y]], x);
                assert_eq!(m[x * n + j[x * n + y]], x);
                for z in 0..n {
                    assert_eq!(j[j[x * n + y] * n + z], j[x * n + j[y * n + z]]);
                    assert_eq!(m[m[x * n + y] * n + z], m[x * n + m[y * n + z]]);
                }
            }
        }
    }
}

#[test]
fn block_lists_serialize_sorted() {
    let p = blocks(4, &[&[2, 0], &[3, 1]]);
    assert_eq!(serde_json::to_string(&p).unwrap(), "[[0,2],[1,3]]");
    assert_eq!(p.to_string(), "[[0,2],[1,3]]");
    assert_eq!(gummcalc::algebra::parse_blocks(" [ [0, 2] , [1,3] ] ", 4).unwrap(), p);
}
