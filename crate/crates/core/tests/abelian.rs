use std::sync::Arc;

use gummcalc::abelian::{
    abelianization_map, check_affine_diagonal, check_domega_equivalence, comparison_targets, diagonal_punctuation,
    direction, dp_split, factor_through_eta, fiber_ops_from_ternary, find_fiber_subtraction, find_maltsev_ops,
    find_right_cancellers, find_subtractions, find_unital_magmas, group_from_subtraction, is_autonomous,
    verify_universality,
};
use gummcalc::algebra::product;
use gummcalc::corpus;
use gummcalc::oracle::{oracle_all_functions, oracle_group_abelianization, oracle_is_homomorphism};
use gummcalc::{Caps, Error, FiniteAlgebra, Homomorphism, Partition, SplitEpi, Term};

fn arc(a: FiniteAlgebra) -> Arc<FiniteAlgebra> {
    Arc::new(a)
}

fn group_op(a: &FiniteAlgebra) -> &'static str {
    if a.op("+").is_some() {
        "+"
    } else {
        "*"
    }
}

/// Subtractions by brute force over binary tables with the two identities
/// fixed.
fn oracle_subtractions(a: &FiniteAlgebra) -> Vec<Vec<usize>> {
    let n = a.size();
    let zero = a.point().unwrap();
    let sq = product(a, a).unwrap();
    let mut fixed = vec![None; n * n];
    for x in 0..n {
        fixed[x * n + x] = Some(zero);
        fixed[x * n + zero] = Some(x);
    }
    oracle_all_functions(n, 2, &fixed, |t| oracle_is_homomorphism(&sq, a, t)).unwrap()
}

#[test]
fn subtractions_on_abelian_groups_are_minus() {
    let caps = Caps::default();
    for n in [2, 3, 4] {
        let a = arc(corpus::cyclic(n));
        let subs = find_subtractions(&a, &caps).unwrap();
        assert_eq!(subs.len(), 1, "z{n}");
        let minus: Vec<usize> = (0..n * n).map(|i| (i / n + n - i % n) % n).collect();
        assert_eq!(subs[0].table(), minus.as_slice());
        assert_eq!(oracle_subtractions(&a), vec![minus]);
        assert!(subs[0].right_cancellation_failure().is_none());
    }
    let k = arc(corpus::klein());
    let subs = find_subtractions(&k, &caps).unwrap();
    assert_eq!(subs.len(), 1);
    assert_eq!(oracle_subtractions(&k).len(), 1);
}

#[test]
fn non_abelian_groups_and_chain_have_no_subtraction() {
    let caps = Caps::default();
    for a in [corpus::symmetric3(), corpus::quaternion(), corpus::chain3()] {
        let name = a.name().to_string();
        assert!(find_subtractions(&arc(a), &caps).unwrap().is_empty(), "{name}");
    }
    let c = corpus::chain3();
    assert!(oracle_subtractions(&c).is_empty());
}

#[test]
fn induced_groups() {
    let caps = Caps::default();
    let z4 = arc(corpus::cyclic(4));
    let g = group_from_subtraction(&find_subtractions(&z4, &caps).unwrap()[0]).unwrap();
    let plus: Vec<usize> = (0..16).map(|i| (i / 4 + i % 4) % 4).collect();
    assert_eq!(g.op, plus);
    assert_eq!(g.zero, 0);
    assert_eq!(g.inverse, vec![0, 3, 2, 1]);
    assert!(g.commutative && g.interchange);
    assert!(!g.opsubtraction);

    let z2 = arc(corpus::cyclic(2));
    let g = group_from_subtraction(&find_subtractions(&z2, &caps).unwrap()[0]).unwrap();
    assert!(g.opsubtraction);
    assert_eq!(g.op, vec![0, 1, 1, 0]);

    let t = arc(corpus::trivial());
    let subs = find_subtractions(&t, &caps).unwrap();
    assert_eq!(subs.len(), 1);
    let g = group_from_subtraction(&subs[0]).unwrap();
    assert_eq!(g.op, vec![0]);
}

#[test]
fn subtraction_on_a_subalgebra() {
    let caps = Caps::default();
    let z4 = corpus::cyclic(4);
    let sub = z4.restrict(&[0, 2], "2z4").unwrap();
    let b = Arc::new(sub.alg.clone());
    let subs = find_subtractions(&b, &caps).unwrap();
    assert_eq!(subs.len(), 1);
    assert_eq!(subs[0].table(), &[0, 1, 1, 0]);
}

#[test]
fn unital_magmas_and_right_cancellers() {
    let caps = Caps::default();
    for a in [corpus::cyclic(2), corpus::cyclic(3), corpus::klein()] {
        let a = arc(a);
        let ms = find_unital_magmas(&a, &caps).unwrap();
        assert_eq!(ms.len(), 1, "{}", a.name());
        let m = &ms[0];
        assert!(m.associative && m.commutative && m.left_cancellable);
        let plus = a.op("+").unwrap().table.clone();
        assert_eq!(m.table, plus);
        let cancel = find_right_cancellers(&a, &m.table, &caps).unwrap();
        assert_eq!(cancel.len(), 1);
        assert_eq!(cancel[0].map(), a.op("-").unwrap().table.as_slice());
    }
    // On a non-abelian group the multiplication is not a homomorphism.
    assert!(find_unital_magmas(&arc(corpus::symmetric3()), &caps).unwrap().is_empty());
    // Wrong table length is rejected.
    let z2 = arc(corpus::cyclic(2));
    assert!(matches!(find_right_cancellers(&z2, &[0, 1], &caps), Err(Error::Invalid(_))));
}

#[test]
fn maltsev_ops_on_the_corpus() {
    let caps = Caps::default();
    for a in [corpus::cyclic(2), corpus::cyclic(3), corpus::cyclic(4), corpus::klein()] {
        let a = arc(a);
        let n = a.size();
        let ops = find_maltsev_ops(&a, &caps).unwrap();
        assert_eq!(ops.len(), 1, "{}", a.name());
        let p = &ops[0];
        assert!(p.autonomous && p.associative);
        let plus = &a.op("+").unwrap().table;
        let neg = &a.op("-").unwrap().table;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    assert_eq!(p.apply(x, y, z), plus[plus[x * n + neg[y]] * n + z]);
                }
            }
        }
    }
    for a in [corpus::symmetric3(), corpus::quaternion(), corpus::chain3()] {
        let name = a.name().to_string();
        assert!(find_maltsev_ops(&arc(a), &caps).unwrap().is_empty(), "{name}");
    }
}

#[test]
fn autonomy_distinguishes_group_terms() {
    // x y⁻¹ z on S3 is Mal'tsev but not autonomous.
    let s3 = corpus::symmetric3();
    let m = &s3.op("*").unwrap().table;
    let inv = &s3.op("inv").unwrap().table;
    let table: Vec<usize> = (0..216).map(|c| m[m[(c / 36) * 6 + inv[c / 6 % 6]] * 6 + c % 6]).collect();
    assert!(!is_autonomous(&table, 6));
    let z3 = corpus::cyclic(3);
    let table: Vec<usize> = (0..27).map(|c| (c / 9 + 3 - c / 3 % 3 + c % 3) % 3).collect();
    assert!(is_autonomous(&table, z3.size()));
}

#[test]
fn fiber_operations_of_the_group_term() {
    let se = corpus::s3_sign_split();
    let a = se.domain().clone();
    let p = Term::parse("*(*(x,inv(y)),z)").unwrap();
    let ops = fiber_ops_from_ternary(&a, &p, &se).unwrap();
    let m = &a.op("*").unwrap().table;
    let inv = &a.op("inv").unwrap().table;
    let mul = |x: usize, y: usize| m[x * 6 + y];
    assert_eq!(ops.fibers, vec![vec![0, 3, 4], vec![1, 2, 5]]);
    assert_eq!(ops.entries.len(), 18);
    for &(u, v, circ, d) in &ops.entries {
        let base = se.retraction(u);
        assert_eq!(circ, mul(mul(u, inv[base]), v));
        assert_eq!(d, mul(mul(u, inv[v]), base));
    }
    // The base point of each fiber is a unit for ∘ and d(u,u) lands on it.
    for fiber in &ops.fibers {
        let base = se.retraction(fiber[0]);
        for &u in fiber {
            assert_eq!(ops.circ(base, u), Some(u));
            assert_eq!(ops.d(u, u), Some(base));
        }
    }
    assert_eq!(ops.circ(0, 1), None);
    // Non-idempotent terms are rejected.
    let bad = Term::parse("*(x,y)").unwrap();
    assert!(matches!(fiber_ops_from_ternary(&a, &bad, &se), Err(Error::Precondition(_))));
}

#[test]
fn dp_of_groups_matches_the_abelianization() {
    let caps = Caps::default();
    for a in [
        corpus::trivial(),
        corpus::cyclic(2),
        corpus::cyclic(3),
        corpus::cyclic(4),
        corpus::klein(),
        corpus::symmetric3(),
        corpus::quaternion(),
    ] {
        let oracle = oracle_group_abelianization(&a, group_op(&a)).unwrap();
        let a = arc(a);
        let dp = diagonal_punctuation(&a, &caps).unwrap();
        assert_eq!(dp.size(), oracle.num_blocks(), "{}", a.name());
        let eta = abelianization_map(&dp).unwrap();
        assert_eq!(Partition::from_labels(eta.map()), oracle, "{}", a.name());
        assert!(dp.verified.group_laws && dp.verified.star_identity && dp.verified.regular_pushout);
    }
}

#[test]
fn dp_sizes() {
    let caps = Caps::default();
    let sizes: Vec<usize> = [corpus::cyclic(2), corpus::symmetric3(), corpus::quaternion(), corpus::trivial()]
        .into_iter()
        .map(|a| diagonal_punctuation(&arc(a), &caps).unwrap().size())
        .collect();
    assert_eq!(sizes, vec![2, 2, 4, 1]);
}

#[test]
fn dp_group_is_chaining() {
    let caps = Caps::default();
    let dp = diagonal_punctuation(&arc(corpus::cyclic(4)), &caps).unwrap();
    for a in 0..4 {
        for b in 0..4 {
            assert_eq!(dp.neg[dp.w(a, b)], dp.w(b, a));
            for c in 0..4 {
                assert_eq!(dp.sum(dp.w(a, b), dp.w(b, c)), dp.w(a, c));
            }
        }
    }
    let s = dp.summary();
    assert_eq!(s.size, 4);
    assert_eq!(s.class_map.len(), 16);
}

#[test]
fn eta_factorization() {
    let caps = Caps::default();
    let s3 = arc(corpus::symmetric3());
    let dp = diagonal_punctuation(&s3, &caps).unwrap();
    let eta = abelianization_map(&dp).unwrap();
    let z2 = arc(corpus::z2_multiplicative());
    let sign = Homomorphism::new(s3.clone(), z2.clone(), corpus::s3_sign()).unwrap();
    let k = factor_through_eta(&eta, &sign, &caps).unwrap().expect("sign factors");
    for x in 0..6 {
        assert_eq!(k.apply(eta.apply(x)), sign.apply(x));
    }
    // Into an abelian group every homomorphism factors; into S3 itself the
    // identity does not.
    let id = Homomorphism::identity(s3.clone());
    assert!(factor_through_eta(&eta, &id, &caps).unwrap().is_none());
}

#[test]
fn affine_diagonal_iff_maltsev() {
    let caps = Caps::default();
    for a in corpus::groups() {
        let a = arc(a);
        let dp = diagonal_punctuation(&a, &caps).unwrap();
        let affine = check_affine_diagonal(&dp);
        let maltsev = !find_maltsev_ops(&a, &caps).unwrap().is_empty();
        assert_eq!(affine, maltsev, "{}", a.name());
        assert!(check_domega_equivalence(&dp).passed(), "{}", a.name());
    }
}

#[test]
fn dp_split_klein_projection() {
    let caps = Caps::default();
    let se = corpus::klein_projection();
    let sa = dp_split(&se, &caps).unwrap();
    assert_eq!(sa.size(), 4);
    assert!(sa.comparison.is_injective());
    for y in 0..2 {
        assert_eq!(sa.psi.apply(sa.theta.apply(y)), y);
        let (elems, tables) = sa.groups.fiber(&sa.psi, y);
        assert_eq!(elems.len(), 2);
        assert_eq!(tables.add[3], tables.zero);
    }
    let targets = comparison_targets(&sa, &caps).unwrap();
    assert!(targets.iter().any(|(n, _)| n == "Dp[f]"));
    let report = verify_universality(&sa, &targets, &caps).unwrap();
    assert!(report.passed(), "{report:?}");
    assert!(report.morphisms > 0);
}

#[test]
fn dp_split_sign_is_an_isomorphism() {
    let caps = Caps::default();
    let se = corpus::s3_sign_split();
    let sa = dp_split(&se, &caps).unwrap();
    // Both fibers have three elements, so Dp[f] has six.
    assert_eq!(sa.size(), 6);
    assert!(sa.comparison.is_injective() && sa.comparison.is_surjective());
    for y in 0..2 {
        let (elems, _) = sa.groups.fiber(&sa.psi, y);
        assert_eq!(elems.len(), 3);
    }
    let targets = comparison_targets(&sa, &caps).unwrap();
    let report = verify_universality(&sa, &targets, &caps).unwrap();
    assert!(report.passed(), "{report:?}");
}

#[test]
fn dp_split_identity() {
    let caps = Caps::default();
    let y = arc(corpus::cyclic(3));
    let sa = dp_split(&SplitEpi::identity(y), &caps).unwrap();
    assert_eq!(sa.size(), 3);
    assert_eq!(sa.psi.map(), &[0, 1, 2]);
}

#[test]
fn fiber_subtractions_are_unique() {
    let caps = Caps::default();
    for se in [corpus::klein_projection(), corpus::s3_sign_split(), corpus::z6_mod2_split()] {
        let subs = find_fiber_subtraction(&se, &caps).unwrap();
        assert_eq!(subs.len(), 1);
    }
    for (name, se) in corpus::split_epis_over_z2() {
        assert_eq!(find_fiber_subtraction(&se, &caps).unwrap().len(), 1, "{name}");
    }
}

#[test]
fn direction_of_reductions() {
    let caps = Caps::default();
    let z4 = arc(corpus::cyclic(4));
    let z2 = arc(corpus::cyclic(2));
    let f = Homomorphism::new(z4, z2.clone(), vec![0, 1, 0, 1]).unwrap();
    let d = direction(&f, &caps).unwrap();
    assert_eq!(d.size(), 4);
    for a in 0..4 {
        assert_eq!(d.arrow(a, a), d.zero.apply(f.apply(a)));
    }
    // Vectors are translation invariant: (a, a+2) and (b, b+2) agree.
    assert_eq!(d.arrow(0, 2), d.arrow(2, 0));
    assert_eq!(d.arrow(1, 3), d.arrow(3, 1));

    let id = Homomorphism::identity(z2.clone());
    assert_eq!(direction(&id, &caps).unwrap().size(), 2);

    let kp = corpus::klein_projection();
    assert_eq!(direction(&kp.f, &caps).unwrap().size(), 4);

    let nonsurj = Homomorphism::new(z2.clone(), arc(corpus::cyclic(4)), vec![0, 2]).unwrap();
    assert!(matches!(direction(&nonsurj, &caps), Err(Error::Precondition(_))));

    // The kernel of the sign is A3, which is abelian.
    let sign = corpus::s3_sign_split();
    assert_eq!(direction(&sign.f, &caps).unwrap().size(), 6);

    // The kernel of S3 -> 1 is everything; no connector.
    let s3 = sign.domain().clone();
    let one = arc(corpus::trivial_like(&s3));
    let bang = Homomorphism::new(s3, one, vec![0; 6]).unwrap();
    assert!(matches!(direction(&bang, &caps), Err(Error::Precondition(_))));
}
