use std::sync::Arc;

use gummcalc::algebra::{
    enumerate_homomorphisms, eval_term, kernel_pair, parse_algebra, product, quotient,
    serialize_algebra, subalgebra_generated, Homomorphism, Term,
};
use gummcalc::corpus;
use gummcalc::oracle::{oracle_all_homomorphisms, oracle_is_homomorphism};
use gummcalc::{Caps, Error, FiniteAlgebra, Partition};

fn arc(a: FiniteAlgebra) -> Arc<FiniteAlgebra> {
    Arc::new(a)
}

#[test]
fn bundled_files_match_builders() {
    let built = [
        ("z2", corpus::cyclic(2)),
        ("z3", corpus::cyclic(3)),
        ("z4", corpus::cyclic(4)),
        ("z6", corpus::cyclic(6)),
        ("z2xz2", corpus::klein()),
        ("s3", corpus::symmetric3()),
        ("q8", corpus::quaternion()),
        ("z2mul", corpus::z2_multiplicative()),
        ("chain3", corpus::chain3()),
        ("set4", FiniteAlgebra::bare(4)),
        ("set2p", corpus::pointed_set(2)),
        ("trivial", corpus::trivial()),
    ];
    for (stem, alg) in built {
        assert_eq!(corpus::bundled(stem).unwrap(), alg, "{stem}");
    }
}

#[test]
fn z2_file_has_three_operations() {
    let z2 = corpus::bundled("z2").unwrap();
    assert_eq!(z2.size(), 2);
    assert_eq!(z2.operations().len(), 3);
    assert_eq!(z2.point(), Some(0));
}

#[test]
fn short_table_is_rejected() {
    let doc = r#"{"name":"bad","size":2,"operations":[{"name":"+","arity":2,"table":[0,1,1]}]}"#;
    assert!(matches!(parse_algebra(doc), Err(Error::TableLength { expected: 4, found: 3, .. })));
}

#[test]
fn malformed_documents_are_rejected() {
    assert!(matches!(parse_algebra("{"), Err(Error::Malformed(_))));
    let out_of_range = r#"{"name":"bad","size":2,"operations":[{"name":"-","arity":1,"table":[0,2]}]}"#;
    assert!(matches!(parse_algebra(out_of_range), Err(Error::OutOfRange { value: 2, .. })));
    let dup = r#"{"name":"bad","size":1,"operations":[{"name":"f","arity":0,"table":[0]},{"name":"f","arity":0,"table":[0]}]}"#;
    assert!(matches!(parse_algebra(dup), Err(Error::DuplicateOperation(_))));
    let bad_point = r#"{"name":"bad","size":2,"operations":[{"name":"e","arity":0,"table":[0]}],"point":1}"#;
    assert!(matches!(parse_algebra(bad_point), Err(Error::InvalidPoint(_))));
}

#[test]
fn s3_is_a_latin_square_matching_permutation_composition() {
    let s3 = corpus::bundled("s3").unwrap();
    let mul = &s3.op("*").unwrap().table;
    for r in 0..6 {
        let mut row: Vec<usize> = (0..6).map(|c| mul[r * 6 + c]).collect();
        let mut col: Vec<usize> = (0..6).map(|c| mul[c * 6 + r]).collect();
        row.sort();
        col.sort();
        assert_eq!(row, (0..6).collect::<Vec<_>>());
        assert_eq!(col, (0..6).collect::<Vec<_>>());
    }
    // Independent composition oracle on image lists.
    let perms = corpus::s3_elements();
    for a in 0..6 {
        for b in 0..6 {
            let composed: Vec<usize> = (0..3).map(|i| perms[a][perms[b][i]]).collect();
            assert_eq!(perms[mul[a * 6 + b]].to_vec(), composed);
        }
    }
}

#[test]
fn round_trip_every_corpus_algebra() {
    for stem in corpus::BUNDLED.iter().map(|(s, _)| *s) {
        let a = corpus::bundled(stem).unwrap();
        assert_eq!(parse_algebra(&serialize_algebra(&a)).unwrap(), a, "{stem}");
    }
}

#[test]
fn term_evaluation() {
    let z4 = corpus::cyclic(4);
    let t = Term::parse("+(+(x,-(y)),z)").unwrap();
    assert_eq!(eval_term(&z4, &t, &[1, 2, 3]).unwrap(), 2);
    assert_eq!(eval_term(&z4, &Term::var(0), &[3]).unwrap(), 3);
    let z2 = corpus::cyclic(2);
    assert_eq!(eval_term(&z2, &Term::parse("+(x,x)").unwrap(), &[1]).unwrap(), 0);
    assert!(matches!(eval_term(&z2, &Term::parse("*(x,x)").unwrap(), &[1]), Err(Error::UnknownOperation(_))));
    assert!(matches!(eval_term(&z2, &Term::parse("+(x,y)").unwrap(), &[1]), Err(Error::MissingVariable(1))));
    assert_eq!(Term::parse("+(x,0)").unwrap().to_string(), "+(x0,0)");
}

#[test]
fn products() {
    let z2 = corpus::cyclic(2);
    assert_eq!(product(&z2, &z2).unwrap().size(), 4);
    let s3 = corpus::symmetric3();
    let ss = product(&s3, &s3).unwrap();
    assert_eq!(ss.size(), 36);
    let mul = &s3.op("*").unwrap().table;
    let pmul = &ss.op("*").unwrap().table;
    // Deterministic spot checks against the componentwise formula.
    let mut seed = 17usize;
    for _ in 0..10 {
        seed = (seed * 31 + 7) % 1296;
        let (u, v) = (seed / 36, seed % 36);
        let expect = mul[(u / 6) * 6 + v / 6] * 6 + mul[(u % 6) * 6 + v % 6];
        assert_eq!(pmul[u * 36 + v], expect);
    }
    let one = corpus::trivial_like(&s3);
    let p = product(&s3, &one).unwrap();
    assert_eq!(p.operations(), s3.operations());
    assert!(matches!(product(&z2, &s3), Err(Error::SignatureMismatch(_))));
}

#[test]
fn projections_are_jointly_injective_homomorphisms() {
    let a = arc(corpus::cyclic(3));
    let b = arc(corpus::cyclic(2));
    let ab = arc(product(&a, &b).unwrap());
    let p0 = Homomorphism::new(ab.clone(), a.clone(), (0..6).map(|e| e / 2).collect()).unwrap();
    let p1 = Homomorphism::new(ab.clone(), b.clone(), (0..6).map(|e| e % 2).collect()).unwrap();
    let mut seen = std::collections::HashSet::new();
    for e in 0..6 {
        assert!(seen.insert((p0.apply(e), p1.apply(e))));
    }
}

#[test]
fn generated_subalgebras() {
    let z4 = corpus::cyclic(4);
    assert_eq!(subalgebra_generated(&z4, &[2]), vec![0, 2]);
    assert_eq!(subalgebra_generated(&z4, &[1]), vec![0, 1, 2, 3]);
    assert_eq!(subalgebra_generated(&z4, &[0, 1, 2, 3]), vec![0, 1, 2, 3]);
    assert_eq!(subalgebra_generated(&z4, &[]), vec![0]);
}

#[test]
fn homomorphism_counts() {
    let caps = Caps::default();
    let z2 = arc(corpus::cyclic(2));
    let z3 = arc(corpus::cyclic(3));
    let homs = enumerate_homomorphisms(&z2, &z2, &caps).unwrap();
    assert_eq!(homs.iter().map(|h| h.map().to_vec()).collect::<Vec<_>>(), vec![vec![0, 0], vec![0, 1]]);
    let s3 = arc(corpus::symmetric3());
    let one = arc(corpus::trivial_like(&s3));
    assert_eq!(enumerate_homomorphisms(&one, &s3, &caps).unwrap().len(), 1);
    let to_z2 = enumerate_homomorphisms(&z3, &z2, &caps).unwrap();
    assert_eq!(to_z2.len(), 1);
    assert_eq!(to_z2[0].map(), &[0, 0, 0]);
    assert!(matches!(enumerate_homomorphisms(&z2, &s3, &caps), Err(Error::SignatureMismatch(_))));
}

#[test]
fn homomorphism_search_agrees_with_filter_oracle() {
    let caps = Caps::default();
    let algebras: Vec<Arc<FiniteAlgebra>> = vec![
        arc(corpus::cyclic(2)),
        arc(corpus::cyclic(3)),
        arc(corpus::cyclic(4)),
        arc(corpus::klein()),
        arc(corpus::cyclic(6)),
        arc(corpus::trivial()),
    ];
    for a in &algebras {
        for b in &algebras {
            let fast: Vec<Vec<usize>> =
                enumerate_homomorphisms(a, b, &caps).unwrap().iter().map(|h| h.map().to_vec()).collect();
            let slow = oracle_all_homomorphisms(a, b).unwrap();
            assert_eq!(fast, slow, "{} -> {}", a.name(), b.name());
        }
    }
    let s3 = arc(corpus::symmetric3());
    let z2m = arc(corpus::z2_multiplicative());
    for (a, b) in [(&s3, &z2m), (&z2m, &s3), (&s3, &s3)] {
        let fast: Vec<Vec<usize>> =
            enumerate_homomorphisms(a, b, &caps).unwrap().iter().map(|h| h.map().to_vec()).collect();
        assert_eq!(fast, oracle_all_homomorphisms(a, b).unwrap());
        for m in &fast {
            assert!(oracle_is_homomorphism(a, b, m));
        }
    }
}

#[test]
fn search_budget_is_enforced() {
    let q8 = arc(corpus::quaternion());
    let tiny = Caps::default().with_budget(3);
    assert!(matches!(enumerate_homomorphisms(&q8, &q8, &tiny), Err(Error::CapExceeded { .. })));
}

#[test]
fn kernels_and_quotients() {
    let z4 = arc(corpus::cyclic(4));
    let z2 = arc(corpus::cyclic(2));
    let id = Homomorphism::identity(z4.clone());
    assert!(kernel_pair(&id).is_discrete());
    let one = arc(corpus::trivial());
    let bang = Homomorphism::new(z4.clone(), one, vec![0; 4]).unwrap();
    assert!(kernel_pair(&bang).is_full());
    let mod2 = Homomorphism::new(z4.clone(), z2.clone(), vec![0, 1, 0, 1]).unwrap();
    let k = kernel_pair(&mod2);
    assert_eq!(k.blocks(), vec![vec![0, 2], vec![1, 3]]);

    let (q, proj) = quotient(&z4, &k).unwrap();
    assert_eq!(q.operations(), z2.operations());
    assert!(proj.is_surjective());
    let (same, _) = quotient(&z4, &Partition::discrete(4)).unwrap();
    assert_eq!(same.operations(), z4.operations());
    let (single, _) = quotient(&z4, &Partition::full(4)).unwrap();
    assert_eq!(single.size(), 1);
    let bad = Partition::from_blocks(4, &[vec![0, 1]]).unwrap();
    assert!(matches!(quotient(&z4, &bad), Err(Error::NotCongruence(_))));
}

#[test]
fn first_isomorphism_property() {
    let caps = Caps::default();
    let z6 = arc(corpus::cyclic(6));
    let z3 = arc(corpus::cyclic(3));
    for h in enumerate_homomorphisms(&z6, &z3, &caps).unwrap() {
        let (q, proj) = quotient(&z6, &kernel_pair(&h)).unwrap();
        // Induced map q -> image is a well-defined injective homomorphism.
        let mut induced = vec![usize::MAX; q.size()];
        for x in 0..z6.size() {
            let c = proj.apply(x);
            assert!(induced[c] == usize::MAX || induced[c] == h.apply(x));
            induced[c] = h.apply(x);
        }
        let ind = Homomorphism::new(q, z3.clone(), induced).unwrap();
        assert!(ind.is_injective());
    }
}
