//! Partitions, congruences and the closure that generates them.

mod lattice;
mod relation;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;

use serde::{Serialize, Serializer};

use crate::algebra::{FiniteAlgebra, Homomorphism};
use crate::error::{Error, Result};

pub use lattice::{all_congruences, CongruenceLattice};
pub use relation::{
    is_difunctional, permute, relational_compose, sharp_intersection, square, zeta_surjective,
    BinaryRelation, PairSet, QuadrupleRelation,
};

/// An equivalence relation stored as least representatives: `r[i]` is the
/// smallest element of the block of `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    reps: Vec<usize>,
}

impl Partition {
    pub fn discrete(n: usize) -> Self {
        Partition { reps: (0..n).collect() }
    }

    pub fn full(n: usize) -> Self {
        Partition { reps: vec![0; n] }
    }

    /// Elements with equal labels share a block.
    pub fn from_labels<T: Eq + std::hash::Hash + Copy>(labels: &[T]) -> Self {
        let mut first: HashMap<T, usize> = HashMap::with_capacity(labels.len());
        let reps = labels.iter().enumerate().map(|(i, l)| *first.entry(*l).or_insert(i)).collect();
        Partition { reps }
    }

    /// Checks `r[r[i]] = r[i]`, `r[i] <= i`, and that `r[i]` is the least
    /// element of its block.
    pub fn from_reps(reps: Vec<usize>) -> Result<Self> {
        for (i, &r) in reps.iter().enumerate() {
            if r > i || reps[r] != r {
                return Err(Error::Invalid(format!("not a canonical representative array at {i}")));
            }
        }
        Ok(Partition { reps })
    }

    /// Blocks must be disjoint; unmentioned elements become singletons.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut label: Vec<usize> = (0..n).map(|i| n + i).collect();
        let mut seen = vec![false; n];
        for (b, block) in blocks.iter().enumerate() {
            for &e in block {
                if e >= n {
                    return Err(Error::Invalid(format!("block element {e} outside universe of size {n}")));
                }
                if std::mem::replace(&mut seen[e], true) {
                    return Err(Error::Invalid(format!("element {e} appears in two blocks")));
                }
                label[e] = b;
            }
        }
        Ok(Partition::from_labels(&label))
    }

    pub fn size(&self) -> usize {
        self.reps.len()
    }

    #[inline]
    pub fn rep(&self, i: usize) -> usize {
        self.reps[i]
    }

    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    #[inline]
    pub fn related(&self, i: usize, j: usize) -> bool {
        self.reps[i] == self.reps[j]
    }

    /// Block representatives in increasing order.
    pub fn representatives(&self) -> Vec<usize> {
        (0..self.size()).filter(|&i| self.reps[i] == i).collect()
    }

    pub fn num_blocks(&self) -> usize {
        self.reps.iter().enumerate().filter(|&(i, &r)| i == r).count()
    }

    /// Block number of each element, blocks numbered by least element.
    pub fn class_indices(&self) -> Vec<usize> {
        let mut idx = vec![usize::MAX; self.size()];
        let mut next = 0;
        let mut out = Vec::with_capacity(self.size());
        for i in 0..self.size() {
            let r = self.reps[i];
            if idx[r] == usize::MAX {
                idx[r] = next;
                next += 1;
            }
            out.push(idx[r]);
        }
        out
    }

    /// Blocks as sorted lists, ordered by least element.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let cls = self.class_indices();
        let mut blocks = vec![Vec::new(); self.num_blocks()];
        for (i, &c) in cls.iter().enumerate() {
            blocks[c].push(i);
        }
        blocks
    }

    /// Members of the block of `i`, increasing.
    pub fn block_of(&self, i: usize) -> Vec<usize> {
        let r = self.reps[i];
        (r..self.size()).filter(|&j| self.reps[j] == r).collect()
    }

    /// Inclusion as relations: every block of `self` lies in a block of `other`.
    pub fn leq(&self, other: &Partition) -> bool {
        (0..self.size()).all(|i| other.related(i, self.reps[i]))
    }

    pub fn is_discrete(&self) -> bool {
        self.reps.iter().enumerate().all(|(i, &r)| i == r)
    }

    pub fn is_full(&self) -> bool {
        self.reps.iter().all(|&r| r == 0)
    }

    /// All related pairs `(i, j)` in row-major order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.size();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.related(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Canonical order: more blocks first, then representative arrays
    /// lexicographically. `Δ` comes first and `∇` last.
    pub fn canonical_cmp(&self, other: &Partition) -> Ordering {
        other.num_blocks().cmp(&self.num_blocks()).then_with(|| self.reps.cmp(&other.reps))
    }
}

pub fn meet(p: &Partition, q: &Partition) -> Partition {
    let labels: Vec<(usize, usize)> = (0..p.size()).map(|i| (p.rep(i), q.rep(i))).collect();
    Partition::from_labels(&labels)
}

/// Join as equivalence relations (transitive closure of the union).
pub fn equivalence_join(p: &Partition, q: &Partition) -> Partition {
    let mut dsu = Dsu::new(p.size());
    for i in 0..p.size() {
        dsu.union(i, p.rep(i));
        dsu.union(i, q.rep(i));
    }
    dsu.partition()
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (b, block) in self.blocks().iter().enumerate() {
            if b > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (k, e) in block.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.blocks().serialize(s)
    }
}

/// A partition compatible with every operation of some algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Congruence(Partition);

impl Deref for Congruence {
    type Target = Partition;
    fn deref(&self) -> &Partition {
        &self.0
    }
}

impl Congruence {
    pub fn new(a: &FiniteAlgebra, p: Partition) -> Result<Self> {
        if p.size() != a.size() {
            return Err(Error::Invalid("partition and algebra sizes differ".into()));
        }
        if let Some(msg) = incompatibility(a, &p) {
            return Err(Error::NotCongruence(msg));
        }
        Ok(Congruence(p))
    }

    pub(crate) fn from_partition_unchecked(p: Partition) -> Self {
        Congruence(p)
    }

    pub fn discrete(a: &FiniteAlgebra) -> Self {
        Congruence(Partition::discrete(a.size()))
    }

    pub fn full(a: &FiniteAlgebra) -> Self {
        Congruence(Partition::full(a.size()))
    }

    pub fn partition(&self) -> &Partition {
        &self.0
    }

    pub fn into_partition(self) -> Partition {
        self.0
    }
}

/// First operation and argument pair breaking compatibility, if any.
pub fn incompatibility(a: &FiniteAlgebra, p: &Partition) -> Option<String> {
    let n = a.size();
    for (k, op) in a.operations().iter().enumerate() {
        if op.arity == 0 {
            continue;
        }
        let mut args = vec![0; op.arity];
        for x in 0..n {
            let r = p.rep(x);
            if r == x {
                continue;
            }
            for slot in 0..op.arity {
                let others = n.pow(op.arity as u32 - 1);
                for code in 0..others {
                    let mut c = code;
                    for pos in (0..op.arity).rev() {
                        if pos == slot {
                            continue;
                        }
                        args[pos] = c % n;
                        c /= n;
                    }
                    args[slot] = x;
                    let u = a.apply(k, &args);
                    args[slot] = r;
                    let v = a.apply(k, &args);
                    if !p.related(u, v) {
                        return Some(format!("`{}` separates {} ~ {} in slot {}", op.name, x, r, slot));
                    }
                }
            }
        }
    }
    None
}

/// Union-find over `{0..n-1}`.
#[derive(Debug, Clone)]
pub struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the blocks of `x` and `y`; true if they were distinct.
    pub fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        let (lo, hi) = if rx < ry { (rx, ry) } else { (ry, rx) };
        self.parent[hi] = lo;
        true
    }

    pub fn partition(&mut self) -> Partition {
        let n = self.parent.len();
        let labels: Vec<usize> = (0..n).map(|i| self.find(i)).collect();
        Partition::from_labels(&labels)
    }
}

/// Least congruence containing `pairs`.
///
/// Every successful merge `(x, y)` is queued; processing it pushes
/// `op(.., x, ..)` and `op(.., y, ..)` together for every operation, slot
/// and choice of the remaining arguments. The fixpoint is compatible
/// because merges generate the partition.
pub fn congruence_generated(a: &FiniteAlgebra, pairs: &[(usize, usize)]) -> Congruence {
    let mut dsu = Dsu::new(a.size());
    let mut queue = Vec::new();
    for &(x, y) in pairs {
        if dsu.union(x, y) {
            queue.push((x, y));
        }
    }
    close(a, &mut dsu, queue);
    Congruence(dsu.partition())
}

fn close(a: &FiniteAlgebra, dsu: &mut Dsu, mut queue: Vec<(usize, usize)>) {
    let n = a.size();
    let mut args = Vec::new();
    while let Some((x, y)) = queue.pop() {
        for (k, op) in a.operations().iter().enumerate() {
            match op.arity {
                0 => {}
                1 => {
                    let (u, v) = (op.table[x], op.table[y]);
                    if dsu.union(u, v) {
                        queue.push((u, v));
                    }
                }
                2 => {
                    for c in 0..n {
                        let (u, v) = (op.table[x * n + c], op.table[y * n + c]);
                        if dsu.union(u, v) {
                            queue.push((u, v));
                        }
                        let (u, v) = (op.table[c * n + x], op.table[c * n + y]);
                        if dsu.union(u, v) {
                            queue.push((u, v));
                        }
                    }
                }
                arity => {
                    args.resize(arity, 0);
                    let others = n.pow(arity as u32 - 1);
                    for slot in 0..arity {
                        for code in 0..others {
                            let mut c = code;
                            for pos in (0..arity).rev() {
                                if pos != slot {
                                    args[pos] = c % n;
                                    c /= n;
                                }
                            }
                            args[slot] = x;
                            let u = a.apply(k, &args);
                            args[slot] = y;
                            let v = a.apply(k, &args);
                            if dsu.union(u, v) {
                                queue.push((u, v));
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Congruence join: the congruence generated by both pair sets.
pub fn join(a: &FiniteAlgebra, p: &Congruence, q: &Congruence) -> Congruence {
    let pairs: Vec<(usize, usize)> =
        (0..a.size()).flat_map(|i| [(i, p.rep(i)), (i, q.rep(i))]).collect();
    congruence_generated(a, &pairs)
}

/// `x ~ x'` iff `h(x) t h(x')`.
pub fn preimage_congruence(h: &Homomorphism, t: &Congruence) -> Result<Congruence> {
    if t.size() != h.target().size() {
        return Err(Error::Invalid("congruence does not live on the target".into()));
    }
    let labels: Vec<usize> = h.map().iter().map(|&y| t.rep(y)).collect();
    Ok(Congruence(Partition::from_labels(&labels)))
}
