//! Reference algebras, built from their definitions, plus the bundled files.

use std::sync::Arc;

use crate::algebra::{
    kernel_pair_algebra, parse_algebra, parse_graph, product, FiniteAlgebra, Homomorphism, Operation, ReflexiveGraph,
    SplitEpi,
};

/// `Z_n` with `+`, unary `-` and the constant `0`.
pub fn cyclic(n: usize) -> FiniteAlgebra {
    let add = (0..n * n).map(|i| (i / n + i % n) % n).collect();
    let neg = (0..n).map(|x| (n - x) % n).collect();
    FiniteAlgebra::new(
        format!("z{n}"),
        n,
        vec![Operation::new("+", 2, add), Operation::new("-", 1, neg), Operation::constant("0", 0)],
        None,
    )
    .expect("cyclic group tables")
}

/// `Z_2 × Z_2` in the additive signature.
pub fn klein() -> FiniteAlgebra {
    product(&cyclic(2), &cyclic(2)).expect("same signature")
}

/// A group given by a multiplication table with identity at 0, in the
/// signature `*`, `inv`, `e`.
pub fn multiplicative(name: &str, n: usize, mul: impl Fn(usize, usize) -> usize) -> FiniteAlgebra {
    let table: Vec<usize> = (0..n * n).map(|i| mul(i / n, i % n)).collect();
    let inv = (0..n).map(|x| (0..n).find(|&y| table[x * n + y] == 0).expect("inverse")).collect();
    FiniteAlgebra::new(
        name,
        n,
        vec![Operation::new("*", 2, table), Operation::new("inv", 1, inv), Operation::constant("e", 0)],
        Some(0),
    )
    .expect("group tables")
}

/// Permutations of `{0,1,2}` in lexicographic order of their image lists;
/// `(σ * τ)(i) = σ(τ(i))`. Element 2 is the transposition of the first two
/// points.
pub fn s3_elements() -> Vec<[usize; 3]> {
    vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
}

pub fn symmetric3() -> FiniteAlgebra {
    let perms = s3_elements();
    multiplicative("s3", 6, |a, b| {
        let (s, t) = (perms[a], perms[b]);
        let c = [s[t[0]], s[t[1]], s[t[2]]];
        perms.iter().position(|p| *p == c).expect("closed")
    })
}

/// Sign of each element of [`symmetric3`], as an element of `Z_2`.
pub fn s3_sign() -> Vec<usize> {
    s3_elements()
        .iter()
        .map(|p| {
            let inversions = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            inversions % 2
        })
        .collect()
}

/// Quaternion group: element `2k + s` is `(-1)^s · u_k` with
/// `u = (1, i, j, k)`.
pub fn quaternion() -> FiniteAlgebra {
    // unit products u_a u_b = sign · u_c
    const PROD: [[(usize, usize); 4]; 4] = [
        [(0, 0), (1, 0), (2, 0), (3, 0)],
        [(1, 0), (0, 1), (3, 0), (2, 1)],
        [(2, 0), (3, 1), (0, 1), (1, 0)],
        [(3, 0), (2, 0), (1, 1), (0, 1)],
    ];
    multiplicative("q8", 8, |a, b| {
        let (c, s) = PROD[a / 2][b / 2];
        2 * c + ((a % 2 + b % 2 + s) % 2)
    })
}

/// `Z_2` in the multiplicative group signature (`1` is the generator).
pub fn z2_multiplicative() -> FiniteAlgebra {
    multiplicative("z2mul", 2, |a, b| (a + b) % 2)
}

/// The chain `0 < 1 < 2` with `meet` and the constant `0` (bottom).
pub fn chain3() -> FiniteAlgebra {
    let meet = (0..9).map(|i| (i / 3).min(i % 3)).collect();
    FiniteAlgebra::new("chain3", 3, vec![Operation::new("meet", 2, meet), Operation::constant("0", 0)], None)
        .expect("chain tables")
}

/// `n` points with only the constant `0`.
pub fn pointed_set(n: usize) -> FiniteAlgebra {
    FiniteAlgebra::new(format!("set{n}p"), n, vec![Operation::constant("0", 0)], None).expect("pointed set")
}

/// The one-element algebra in the signature of `like`.
pub fn trivial_like(like: &FiniteAlgebra) -> FiniteAlgebra {
    let ops = like.operations().iter().map(|o| Operation::new(o.name.clone(), o.arity, vec![0])).collect();
    let point = like.point().map(|_| 0);
    FiniteAlgebra::new("trivial", 1, ops, point).expect("trivial algebra")
}

/// The one-element additive group.
pub fn trivial() -> FiniteAlgebra {
    trivial_like(&cyclic(2))
}

/// Bundled algebra files, by stem.
pub const BUNDLED: &[(&str, &str)] = &[
    ("z2", include_str!("../corpus/z2.alg")),
    ("z3", include_str!("../corpus/z3.alg")),
    ("z4", include_str!("../corpus/z4.alg")),
    ("z6", include_str!("../corpus/z6.alg")),
    ("z2xz2", include_str!("../corpus/z2xz2.alg")),
    ("s3", include_str!("../corpus/s3.alg")),
    ("q8", include_str!("../corpus/q8.alg")),
    ("z2mul", include_str!("../corpus/z2mul.alg")),
    ("chain3", include_str!("../corpus/chain3.alg")),
    ("set4", include_str!("../corpus/set4.alg")),
    ("set2p", include_str!("../corpus/set2p.alg")),
    ("trivial", include_str!("../corpus/trivial.alg")),
];

pub fn bundled(stem: &str) -> Option<FiniteAlgebra> {
    BUNDLED.iter().find(|(s, _)| *s == stem).map(|(_, text)| parse_algebra(text).expect("bundled file parses"))
}

/// The groups of the reference corpus.
pub fn groups() -> Vec<FiniteAlgebra> {
    vec![cyclic(2), cyclic(3), cyclic(4), klein(), symmetric3(), quaternion()]
}

/// Groups plus the 3-chain and the bare 4-element set.
pub fn all() -> Vec<FiniteAlgebra> {
    let mut v = groups();
    v.push(chain3());
    v.push(FiniteAlgebra::bare(4));
    v
}

fn hom(a: &Arc<FiniteAlgebra>, b: &Arc<FiniteAlgebra>, map: Vec<usize>) -> Homomorphism {
    Homomorphism::new(a.clone(), b.clone(), map).expect("reference homomorphism")
}

/// `Z2² ⇉ Z2` with `d0(a,b) = a`, `d1(a,b) = a+b`, `s0(a) = (a,0)`.
pub fn abelian_graph() -> ReflexiveGraph {
    let x1 = Arc::new(klein());
    let x0 = Arc::new(cyclic(2));
    let d0 = hom(&x1, &x0, (0..4).map(|e| e / 2).collect());
    let d1 = hom(&x1, &x0, (0..4).map(|e| (e / 2 + e % 2) % 2).collect());
    let s0 = hom(&x0, &x1, vec![0, 2]);
    ReflexiveGraph::new(d0, d1, s0).expect("graph")
}

/// `Z2` with `d0 = d1 = s0 = 1`.
pub fn identity_graph() -> ReflexiveGraph {
    let x = Arc::new(cyclic(2));
    let id = Homomorphism::identity(x);
    ReflexiveGraph::new(id.clone(), id.clone(), id).expect("graph")
}

/// The indiscrete graph `X0 × X0 ⇉ X0` with the diagonal as `s0`.
pub fn pair_graph(x0: FiniteAlgebra) -> ReflexiveGraph {
    let n = x0.size();
    let x0 = Arc::new(x0);
    let x1 = Arc::new(product(&x0, &x0).expect("same signature"));
    let d0 = hom(&x1, &x0, (0..n * n).map(|e| e / n).collect());
    let d1 = hom(&x1, &x0, (0..n * n).map(|e| e % n).collect());
    let s0 = hom(&x0, &x1, (0..n).map(|a| a * n + a).collect());
    ReflexiveGraph::new(d0, d1, s0).expect("graph")
}

/// Bundled graph files, by stem.
pub const BUNDLED_GRAPHS: &[(&str, &str)] = &[
    ("abelian", include_str!("../corpus/abelian.graph")),
    ("identity", include_str!("../corpus/identity.graph")),
    ("pair", include_str!("../corpus/pair.graph")),
];

pub fn bundled_graph(stem: &str) -> Option<ReflexiveGraph> {
    BUNDLED_GRAPHS.iter().find(|(s, _)| *s == stem).map(|(_, text)| parse_graph(text).expect("bundled graph parses"))
}

/// The three reference graphs.
pub fn reference_graphs() -> Vec<(&'static str, ReflexiveGraph)> {
    vec![("abelian", abelian_graph()), ("identity", identity_graph()), ("pair", pair_graph(cyclic(2)))]
}

/// `R[π₂] ⇉ Z2 × Z2` mapped onto the pair graph of `Z2` by `h0 = π₁` and
/// `h1((a,c),(b,c)) = (a,b)`. Returns `(source, target, h0, h1)`.
pub fn fibration_example() -> (ReflexiveGraph, ReflexiveGraph, Homomorphism, Homomorphism) {
    let z2 = Arc::new(cyclic(2));
    let x0 = Arc::new(klein());
    let second = hom(&x0, &z2, (0..4).map(|e| e % 2).collect());
    let emb = kernel_pair_algebra(&second).expect("kernel pair");
    let x1 = emb.alg.clone();
    let pair = |i: usize| (emb.elems[i] / 4, emb.elems[i] % 4);
    let m = emb.len();
    let d0 = hom(&x1, &x0, (0..m).map(|i| pair(i).0).collect());
    let d1 = hom(&x1, &x0, (0..m).map(|i| pair(i).1).collect());
    let s0 = hom(&x0, &x1, (0..4).map(|u| emb.local(u * 4 + u).expect("diagonal")).collect());
    let source = ReflexiveGraph::new(d0, d1, s0).expect("graph");
    let target = pair_graph(cyclic(2));
    let h0 = hom(&x0, &target.x0, (0..4).map(|u| u / 2).collect());
    let h1 = hom(&x1, &target.x1, (0..m).map(|i| (pair(i).0 / 2) * 2 + pair(i).1 / 2).collect());
    (source, target, h0, h1)
}

/// `Z2 × Z2 -> Z2`, first projection, section `a ↦ (a, 0)`.
pub fn klein_projection() -> SplitEpi {
    let x = Arc::new(klein());
    let y = Arc::new(cyclic(2));
    SplitEpi::new(hom(&x, &y, vec![0, 0, 1, 1]), hom(&y, &x, vec![0, 2])).expect("split epi")
}

/// The sign `S3 -> Z2` with section `1 ↦ (12)`.
pub fn s3_sign_split() -> SplitEpi {
    let x = Arc::new(symmetric3());
    let y = Arc::new(z2_multiplicative());
    SplitEpi::new(hom(&x, &y, s3_sign()), hom(&y, &x, vec![0, 2])).expect("split epi")
}

/// `Z6 -> Z2` reduction mod 2 with section `1 ↦ 3`.
pub fn z6_mod2_split() -> SplitEpi {
    let x = Arc::new(cyclic(6));
    let y = Arc::new(cyclic(2));
    SplitEpi::new(hom(&x, &y, (0..6).map(|e| e % 2).collect()), hom(&y, &x, vec![0, 3])).expect("split epi")
}

/// Additive split epis over `Z2` sharing one base object.
pub fn split_epis_over_z2() -> Vec<(&'static str, SplitEpi)> {
    let y = Arc::new(cyclic(2));
    let rebase = |se: SplitEpi| {
        let f = hom(se.domain(), &y, se.f.map().to_vec());
        let s = hom(&y, se.domain(), se.s.map().to_vec());
        SplitEpi::new(f, s).expect("split epi")
    };
    vec![
        ("z2", SplitEpi::identity(y.clone())),
        ("z2xz2", rebase(klein_projection())),
        ("z6", rebase(z6_mod2_split())),
    ]
}
