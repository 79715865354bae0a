use std::sync::Arc;

use super::{for_each_tuple, product, Embedded, FiniteAlgebra, Operation};
use crate::congruence::{Congruence, Partition};
use crate::error::{Error, Result};

/// A map between finite algebras commuting with every shared operation.
#[derive(Debug, Clone)]
pub struct Homomorphism {
    source: Arc<FiniteAlgebra>,
    target: Arc<FiniteAlgebra>,
    map: Vec<usize>,
}

impl PartialEq for Homomorphism {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map
            && same_algebra(&self.source, &other.source)
            && same_algebra(&self.target, &other.target)
    }
}

impl Eq for Homomorphism {}

pub(crate) fn same_algebra(a: &Arc<FiniteAlgebra>, b: &Arc<FiniteAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Homomorphism {
    /// Validates the map against every operation name shared by both algebras.
    pub fn new(source: Arc<FiniteAlgebra>, target: Arc<FiniteAlgebra>, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.size() {
            return Err(Error::Invalid(format!(
                "map has {} entries, source `{}` has {} elements",
                map.len(),
                source.name(),
                source.size()
            )));
        }
        if let Some(&v) = map.iter().find(|&&v| v >= target.size()) {
            return Err(Error::Invalid(format!("image {v} outside target `{}`", target.name())));
        }
        let h = Homomorphism { source, target, map };
        if let Some(msg) = h.violation() {
            return Err(Error::NotHomomorphism(msg));
        }
        Ok(h)
    }

    pub(crate) fn new_unchecked(source: Arc<FiniteAlgebra>, target: Arc<FiniteAlgebra>, map: Vec<usize>) -> Self {
        debug_assert_eq!(map.len(), source.size());
        Homomorphism { source, target, map }
    }

    pub fn identity(a: Arc<FiniteAlgebra>) -> Self {
        let map = (0..a.size()).collect();
        Homomorphism { source: a.clone(), target: a, map }
    }

    /// First failing operation and tuple, if any.
    pub fn violation(&self) -> Option<String> {
        let all: Vec<usize> = (0..self.source.size()).collect();
        for (k, op) in self.source.operations().iter().enumerate() {
            let Some(kt) = self.target.op_index(&op.name) else { continue };
            if self.target.operations()[kt].arity != op.arity {
                return Some(format!("operation `{}` has different arities", op.name));
            }
            let mut bad = None;
            let mut image = vec![0; op.arity];
            for_each_tuple(&all, op.arity, |t| {
                if bad.is_some() {
                    return;
                }
                for (i, &e) in t.iter().enumerate() {
                    image[i] = self.map[e];
                }
                if self.map[self.source.apply(k, t)] != self.target.apply(kt, &image) {
                    bad = Some(t.to_vec());
                }
            });
            if let Some(t) = bad {
                return Some(format!("`{}` at {:?}", op.name, t));
            }
        }
        None
    }

    pub fn source(&self) -> &Arc<FiniteAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteAlgebra> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.size()];
        for &v in &self.map {
            hit[v] = true;
        }
        hit.into_iter().all(|b| b)
    }

    pub fn is_injective(&self) -> bool {
        let mut hit = vec![false; self.target.size()];
        self.map.iter().all(|&v| !std::mem::replace(&mut hit[v], true))
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Homomorphism) -> Result<Homomorphism> {
        if !same_algebra(&self.target, &next.source) {
            return Err(Error::Invalid("composition of non-composable maps".into()));
        }
        let map = self.map.iter().map(|&x| next.map[x]).collect();
        Ok(Homomorphism { source: self.source.clone(), target: next.target.clone(), map })
    }

    pub fn is_identity(&self) -> bool {
        same_algebra(&self.source, &self.target) && self.map.iter().enumerate().all(|(i, &v)| i == v)
    }
}

/// A surjection `f: X -> Y` with a section `s: Y -> X`, `f ∘ s = 1_Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitEpi {
    pub f: Homomorphism,
    pub s: Homomorphism,
}

impl SplitEpi {
    pub fn new(f: Homomorphism, s: Homomorphism) -> Result<Self> {
        if !same_algebra(f.target(), s.source()) || !same_algebra(f.source(), s.target()) {
            return Err(Error::Invalid("epi and section do not form a pair X -> Y -> X".into()));
        }
        if let Some(y) = (0..s.source().size()).find(|&y| f.apply(s.apply(y)) != y) {
            return Err(Error::Invalid(format!("f(s({y})) != {y}")));
        }
        Ok(SplitEpi { f, s })
    }

    pub fn identity(a: Arc<FiniteAlgebra>) -> Self {
        let id = Homomorphism::identity(a);
        SplitEpi { f: id.clone(), s: id }
    }

    pub fn domain(&self) -> &Arc<FiniteAlgebra> {
        self.f.source()
    }

    pub fn codomain(&self) -> &Arc<FiniteAlgebra> {
        self.f.target()
    }

    /// `s ∘ f`, the idempotent retraction on the domain.
    pub fn retraction(&self, x: usize) -> usize {
        self.s.apply(self.f.apply(x))
    }
}

/// `d0, d1: X1 -> X0` with a common section `s0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReflexiveGraph {
    pub x1: Arc<FiniteAlgebra>,
    pub x0: Arc<FiniteAlgebra>,
    pub d0: Homomorphism,
    pub d1: Homomorphism,
    pub s0: Homomorphism,
}

impl ReflexiveGraph {
    pub fn new(d0: Homomorphism, d1: Homomorphism, s0: Homomorphism) -> Result<Self> {
        let x1 = d0.source().clone();
        let x0 = d0.target().clone();
        let shapes_ok = same_algebra(d1.source(), &x1)
            && same_algebra(d1.target(), &x0)
            && same_algebra(s0.source(), &x0)
            && same_algebra(s0.target(), &x1);
        if !shapes_ok {
            return Err(Error::Invalid("graph maps do not share X1 and X0".into()));
        }
        for x in 0..x0.size() {
            if d0.apply(s0.apply(x)) != x || d1.apply(s0.apply(x)) != x {
                return Err(Error::Invalid(format!("s0 is not a common section at {x}")));
            }
        }
        Ok(ReflexiveGraph { x1, x0, d0, d1, s0 })
    }
}

/// The partition of the source into fibers of `f`.
pub fn kernel_pair(f: &Homomorphism) -> Congruence {
    Congruence::from_partition_unchecked(Partition::from_labels(f.map()))
}

/// Quotient by a congruence; blocks are numbered by increasing least element.
pub fn quotient(a: &Arc<FiniteAlgebra>, c: &Partition) -> Result<(Arc<FiniteAlgebra>, Homomorphism)> {
    if c.size() != a.size() {
        return Err(Error::Invalid("partition and algebra sizes differ".into()));
    }
    let class = c.class_indices();
    let reps = c.representatives();
    let m = reps.len();
    let mut ops = Vec::with_capacity(a.operations().len());
    let all: Vec<usize> = (0..a.size()).collect();
    for (k, op) in a.operations().iter().enumerate() {
        let mut table = vec![usize::MAX; m.pow(op.arity as u32)];
        let mut qargs = vec![0; op.arity];
        let mut bad = None;
        for_each_tuple(&all, op.arity, |t| {
            if bad.is_some() {
                return;
            }
            for (i, &e) in t.iter().enumerate() {
                qargs[i] = class[e];
            }
            let idx = qargs.iter().fold(0, |acc, &q| acc * m + q);
            let v = class[a.apply(k, t)];
            if table[idx] == usize::MAX {
                table[idx] = v;
            } else if table[idx] != v {
                bad = Some(t.to_vec());
            }
        });
        if let Some(t) = bad {
            return Err(Error::NotCongruence(format!("`{}` not compatible at {:?}", op.name, t)));
        }
        ops.push(Operation::new(op.name.clone(), op.arity, table));
    }
    let point = a.point().map(|p| class[p]);
    let q = FiniteAlgebra::new(format!("{}/~", a.name()), m, ops, point)?;
    let q = Arc::new(q);
    let proj = Homomorphism::new_unchecked(a.clone(), q.clone(), class);
    Ok((q, proj))
}

/// The subalgebra `{(a, b) : f(a) = g(b)}` of `A × B`; local element `i`
/// is the pair `(e / |B|, e % |B|)` for `e = elems[i]`.
pub fn pullback(f: &Homomorphism, g: &Homomorphism) -> Result<Embedded> {
    if !same_algebra(f.target(), g.target()) {
        return Err(Error::Invalid("pullback legs have different codomains".into()));
    }
    let (a, b) = (f.source(), g.source());
    let prod = product(a, b)?;
    let nb = b.size();
    let elems: Vec<usize> = (0..a.size())
        .flat_map(|x| (0..nb).filter(move |&y| f.apply(x) == g.apply(y)).map(move |y| x * nb + y))
        .collect();
    prod.restrict(&elems, format!("{}x_{}{}", a.name(), f.target().name(), b.name()))
}

/// `R[f]` as a subalgebra of `X × X`.
pub fn kernel_pair_algebra(f: &Homomorphism) -> Result<Embedded> {
    pullback(f, f)
}
