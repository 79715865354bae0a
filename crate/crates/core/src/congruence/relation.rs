use std::sync::Arc;

use super::Partition;
use crate::algebra::{product, Embedded, FiniteAlgebra};
use crate::error::{Error, Result};

/// A set of pairs on `{0..n-1}`, kept as a dense bit matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PairSet {
    n: usize,
    bits: Vec<bool>,
}

impl PairSet {
    pub fn empty(n: usize) -> Self {
        PairSet { n, bits: vec![false; n * n] }
    }

    pub fn from_partition(p: &Partition) -> Self {
        let mut s = PairSet::empty(p.size());
        for (x, y) in p.pairs() {
            s.insert(x, y);
        }
        s
    }

    pub fn insert(&mut self, x: usize, y: usize) {
        self.bits[x * self.n + y] = true;
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.bits[x * self.n + y]
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n * self.n).filter(|&i| self.bits[i]).map(|i| (i / self.n, i % self.n)).collect()
    }
}

/// `S∘R = {(x, z) : x R y and y S z for some y}`.
pub fn relational_compose(r: &Partition, s: &Partition) -> PairSet {
    let n = r.size();
    let mut out = PairSet::empty(n);
    for x in 0..n {
        for y in r.block_of(x) {
            for z in s.block_of(y) {
                out.insert(x, z);
            }
        }
    }
    out
}

/// `S∘R = R∘S`.
pub fn permute(r: &Partition, s: &Partition) -> bool {
    relational_compose(r, s) == relational_compose(s, r)
}

/// Ok when every chain `x R y S z` has some `t` with `x S t R z`; otherwise
/// the least failing chain `(x, y, z)`.
pub fn zeta_surjective(r: &Partition, s: &Partition) -> std::result::Result<(), [usize; 3]> {
    let n = r.size();
    for x in 0..n {
        let sx = s.block_of(x);
        for y in r.block_of(x) {
            for z in s.block_of(y) {
                if !sx.iter().any(|&t| r.related(t, z)) {
                    return Err([x, y, z]);
                }
            }
        }
    }
    Ok(())
}

/// `R∧S = Δ` and `ζ` bijective.
pub fn sharp_intersection(r: &Partition, s: &Partition) -> bool {
    super::meet(r, s).is_discrete() && zeta_surjective(r, s).is_ok() && zeta_injective(r, s)
}

fn zeta_injective(r: &Partition, s: &Partition) -> bool {
    let n = r.size();
    (0..n).all(|x| {
        r.block_of(x).into_iter().all(|y| {
            s.block_of(y).into_iter().all(|z| s.block_of(x).iter().filter(|&&t| r.related(t, z)).count() <= 1)
        })
    })
}

/// `R□S`: quadruples `(x, y, t, z)` with `x R y`, `t R z`, `x S t`, `y S z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadrupleRelation {
    pub r: Partition,
    pub s: Partition,
    pub quads: Vec<[usize; 4]>,
}

impl QuadrupleRelation {
    pub fn len(&self) -> usize {
        self.quads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quads.is_empty()
    }

    /// The chain `(x, y, z)` underlying each quadruple.
    pub fn zeta(&self) -> Vec<[usize; 3]> {
        self.quads.iter().map(|q| [q[0], q[1], q[3]]).collect()
    }
}

pub fn square(r: &Partition, s: &Partition) -> QuadrupleRelation {
    let n = r.size();
    let mut quads = Vec::new();
    for x in 0..n {
        for y in r.block_of(x) {
            for t in s.block_of(x) {
                for z in r.block_of(t) {
                    if s.related(y, z) {
                        quads.push([x, y, t, z]);
                    }
                }
            }
        }
    }
    QuadrupleRelation { r: r.clone(), s: s.clone(), quads }
}

/// A subalgebra `W` of `A × B` viewed as a relation.
#[derive(Debug, Clone)]
pub struct BinaryRelation {
    pub left: Arc<FiniteAlgebra>,
    pub right: Arc<FiniteAlgebra>,
    pairs: Vec<(usize, usize)>,
}

impl BinaryRelation {
    /// Checks the pairs are closed under the componentwise operations.
    pub fn new(left: Arc<FiniteAlgebra>, right: Arc<FiniteAlgebra>, pairs: Vec<(usize, usize)>) -> Result<Self> {
        let rel = Self::new_unchecked(left, right, pairs)?;
        rel.embed()?;
        Ok(rel)
    }

    pub(crate) fn new_unchecked(
        left: Arc<FiniteAlgebra>,
        right: Arc<FiniteAlgebra>,
        mut pairs: Vec<(usize, usize)>,
    ) -> Result<Self> {
        left.require_same_signature(&right)?;
        if let Some(&(a, b)) = pairs.iter().find(|&&(a, b)| a >= left.size() || b >= right.size()) {
            return Err(Error::Invalid(format!("pair ({a}, {b}) outside the universes")));
        }
        if pairs.is_empty() {
            return Err(Error::Invalid("empty relation".into()));
        }
        pairs.sort_unstable();
        pairs.dedup();
        Ok(BinaryRelation { left, right, pairs })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.pairs.binary_search(&(a, b)).is_ok()
    }

    /// `W` as a subalgebra of `A × B`; local element `i` is `pairs()[i]`.
    pub fn embed(&self) -> Result<Embedded> {
        let prod = product(&self.left, &self.right)?;
        let nb = self.right.size();
        let elems: Vec<usize> = self.pairs.iter().map(|&(a, b)| a * nb + b).collect();
        prod.restrict(&elems, format!("W<{}x{}", self.left.name(), self.right.name()))
    }
}

/// `aWb`, `a'Wb`, `a'Wb'` imply `aWb'`.
pub fn is_difunctional(w: &BinaryRelation) -> bool {
    let (na, nb) = (w.left.size(), w.right.size());
    let mut m = vec![false; na * nb];
    for &(a, b) in w.pairs() {
        m[a * nb + b] = true;
    }
    for &(a, b) in w.pairs() {
        for a2 in 0..na {
            if !m[a2 * nb + b] {
                continue;
            }
            for b2 in 0..nb {
                if m[a2 * nb + b2] && !m[a * nb + b2] {
                    return false;
                }
            }
        }
    }
    true
}
