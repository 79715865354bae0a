//! Finite algebras on the universe `{0..n-1}` with named operation tables.

mod format;
mod hom;
mod search;
mod term;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use format::{
    parse_algebra, parse_blocks, parse_graph, parse_map, parse_pairs, serialize_algebra,
    serialize_graph, AlgebraDoc, GraphDoc, OperationDoc,
};
pub use hom::{kernel_pair, kernel_pair_algebra, pullback, quotient, Homomorphism, ReflexiveGraph, SplitEpi};
pub use search::{enumerate_homomorphisms, enumerate_split_epis, generating_set, HomSearch};
pub use term::{eval_term, Term};

/// One named operation, stored row-major: the tuple `(a_0, .., a_{k-1})`
/// lives at index `sum a_i * n^(k-1-i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Operation {
    pub name: String,
    pub arity: usize,
    pub table: Vec<usize>,
}

impl Operation {
    pub fn new(name: impl Into<String>, arity: usize, table: Vec<usize>) -> Self {
        Operation { name: name.into(), arity, table }
    }

    pub fn constant(name: impl Into<String>, value: usize) -> Self {
        Operation::new(name, 0, vec![value])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteAlgebra {
    name: String,
    size: usize,
    ops: Vec<Operation>,
    point: Option<usize>,
}

impl FiniteAlgebra {
    /// Validates tables and the designated point.
    ///
    /// When `point` is `None` and a nullary operation named `"0"` exists, its
    /// value becomes the point. An explicit point must equal the value of
    /// some nullary operation (and of `"0"` when that exists).
    pub fn new(
        name: impl Into<String>,
        size: usize,
        ops: Vec<Operation>,
        point: Option<usize>,
    ) -> Result<Self> {
        let name = name.into();
        if size == 0 {
            return Err(Error::Malformed("size must be positive".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for op in &ops {
            if !seen.insert(op.name.as_str()) {
                return Err(Error::DuplicateOperation(op.name.clone()));
            }
            let expected = checked_pow(size, op.arity)
                .ok_or_else(|| Error::Malformed(format!("operation `{}` too large", op.name)))?;
            if op.table.len() != expected {
                return Err(Error::TableLength {
                    op: op.name.clone(),
                    expected,
                    found: op.table.len(),
                });
            }
            if let Some(&value) = op.table.iter().find(|&&v| v >= size) {
                return Err(Error::OutOfRange { op: op.name.clone(), value, size });
            }
        }
        let zero = ops.iter().find(|o| o.arity == 0 && o.name == "0").map(|o| o.table[0]);
        let point = match (point, zero) {
            (None, z) => z,
            (Some(p), Some(z)) if p != z => {
                return Err(Error::InvalidPoint(format!("point {p} differs from constant 0 = {z}")))
            }
            (Some(p), _) => {
                if !ops.iter().any(|o| o.arity == 0 && o.table[0] == p) {
                    return Err(Error::InvalidPoint(format!(
                        "point {p} is not the value of any constant"
                    )));
                }
                Some(p)
            }
        };
        Ok(FiniteAlgebra { name, size, ops, point })
    }

    /// The `n`-element algebra with no operations.
    pub fn bare(n: usize) -> Self {
        FiniteAlgebra::new(format!("set{n}"), n, Vec::new(), None).expect("bare set")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn operations(&self) -> &[Operation] {
        &self.ops
    }

    pub fn point(&self) -> Option<usize> {
        self.point
    }

    pub fn require_point(&self) -> Result<usize> {
        self.point.ok_or_else(|| Error::NotPointed(self.name.clone()))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn op(&self, name: &str) -> Option<&Operation> {
        self.ops.iter().find(|o| o.name == name)
    }

    pub(crate) fn op_index(&self, name: &str) -> Option<usize> {
        self.ops.iter().position(|o| o.name == name)
    }

    /// Finds `name` and checks it has the requested arity.
    pub fn op_checked(&self, name: &str, arity: usize) -> Result<&Operation> {
        let op = self.op(name).ok_or_else(|| Error::UnknownOperation(name.to_string()))?;
        if op.arity != arity {
            return Err(Error::ArityMismatch { op: name.into(), expected: arity, found: op.arity });
        }
        Ok(op)
    }

    /// `(name, arity)` pairs in declaration order.
    pub fn signature(&self) -> Vec<(&str, usize)> {
        self.ops.iter().map(|o| (o.name.as_str(), o.arity)).collect()
    }

    pub fn same_signature(&self, other: &FiniteAlgebra) -> bool {
        self.signature() == other.signature()
    }

    pub(crate) fn require_same_signature(&self, other: &FiniteAlgebra) -> Result<()> {
        if self.same_signature(other) {
            Ok(())
        } else {
            Err(Error::SignatureMismatch(format!(
                "`{}` has {:?}, `{}` has {:?}",
                self.name,
                self.signature(),
                other.name,
                other.signature()
            )))
        }
    }

    /// Applies operation number `k` to `args`.
    #[inline]
    pub fn apply(&self, k: usize, args: &[usize]) -> usize {
        let op = &self.ops[k];
        debug_assert_eq!(op.arity, args.len());
        op.table[self.encode(args)]
    }

    /// Row-major table index of a tuple.
    #[inline]
    pub fn encode(&self, args: &[usize]) -> usize {
        args.iter().fold(0, |acc, &a| acc * self.size + a)
    }

    /// Applies the operation called `name`.
    pub fn apply_named(&self, name: &str, args: &[usize]) -> Result<usize> {
        let k = self.op_index(name).ok_or_else(|| Error::UnknownOperation(name.into()))?;
        if self.ops[k].arity != args.len() {
            return Err(Error::ArityMismatch {
                op: name.into(),
                expected: self.ops[k].arity,
                found: args.len(),
            });
        }
        Ok(self.apply(k, args))
    }

    pub fn constants(&self) -> Vec<usize> {
        self.ops.iter().filter(|o| o.arity == 0).map(|o| o.table[0]).collect()
    }

    /// True when every operation maps `subset` into itself.
    pub fn is_closed(&self, subset: &[bool]) -> bool {
        let elems: Vec<usize> = (0..self.size).filter(|&i| subset[i]).collect();
        self.ops.iter().enumerate().all(|(k, op)| {
            let mut ok = true;
            for_each_tuple(&elems, op.arity, |t| {
                if ok && !subset[self.apply(k, t)] {
                    ok = false;
                }
            });
            ok
        })
    }

    /// Restricts the algebra to a closed subset, renumbering it in
    /// increasing order.
    pub fn restrict(&self, elems: &[usize], name: impl Into<String>) -> Result<Embedded> {
        let mut sorted = elems.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.is_empty() {
            return Err(Error::Invalid("empty subuniverse".into()));
        }
        if let Some(&e) = sorted.iter().find(|&&e| e >= self.size) {
            return Err(Error::Invalid(format!("element {e} outside universe of size {}", self.size)));
        }
        let mut lookup = vec![usize::MAX; self.size];
        for (i, &e) in sorted.iter().enumerate() {
            lookup[e] = i;
        }
        let m = sorted.len();
        let mut ops = Vec::with_capacity(self.ops.len());
        for (k, op) in self.ops.iter().enumerate() {
            let mut table = Vec::with_capacity(m.pow(op.arity as u32));
            let mut bad = None;
            for_each_tuple(&sorted, op.arity, |t| {
                let v = lookup[self.apply(k, t)];
                if v == usize::MAX && bad.is_none() {
                    bad = Some(t.to_vec());
                }
                table.push(v);
            });
            if let Some(t) = bad {
                return Err(Error::Invalid(format!(
                    "subset not closed under `{}` at {:?}",
                    op.name, t
                )));
            }
            ops.push(Operation::new(op.name.clone(), op.arity, table));
        }
        let point = self.point.map(|p| lookup[p]);
        let alg = FiniteAlgebra { name: name.into(), size: m, ops, point };
        Ok(Embedded { alg: Arc::new(alg), elems: sorted, lookup })
    }
}

/// A subalgebra together with its embedding into an ambient algebra.
#[derive(Debug, Clone)]
pub struct Embedded {
    pub alg: Arc<FiniteAlgebra>,
    /// Ambient element for each local element, increasing.
    pub elems: Vec<usize>,
    lookup: Vec<usize>,
}

impl Embedded {
    /// Local index of an ambient element, if it belongs to the subalgebra.
    pub fn local(&self, ambient: usize) -> Option<usize> {
        self.lookup.get(ambient).copied().filter(|&i| i != usize::MAX)
    }

    pub fn contains(&self, ambient: usize) -> bool {
        self.local(ambient).is_some()
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }
}

fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Calls `f` on every `arity`-tuple over `elems`, in row-major order.
pub(crate) fn for_each_tuple(elems: &[usize], arity: usize, mut f: impl FnMut(&[usize])) {
    if arity == 0 {
        f(&[]);
        return;
    }
    if elems.is_empty() {
        return;
    }
    let mut idx = vec![0usize; arity];
    let mut tuple: Vec<usize> = vec![elems[0]; arity];
    loop {
        f(&tuple);
        let mut pos = arity;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < elems.len() {
                tuple[pos] = elems[idx[pos]];
                break;
            }
            idx[pos] = 0;
            tuple[pos] = elems[0];
        }
    }
}

/// Componentwise product with pairing `(i, j) -> i * |b| + j`.
pub fn product(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<FiniteAlgebra> {
    a.require_same_signature(b)?;
    let (na, nb) = (a.size, b.size);
    let n = na * nb;
    let mut ops = Vec::with_capacity(a.ops.len());
    let all: Vec<usize> = (0..n).collect();
    for (k, op) in a.ops.iter().enumerate() {
        let mut table = Vec::with_capacity(n.pow(op.arity as u32));
        let mut left = vec![0; op.arity];
        let mut right = vec![0; op.arity];
        for_each_tuple(&all, op.arity, |t| {
            for (i, &e) in t.iter().enumerate() {
                left[i] = e / nb;
                right[i] = e % nb;
            }
            table.push(a.apply(k, &left) * nb + b.apply(k, &right));
        });
        ops.push(Operation::new(op.name.clone(), op.arity, table));
    }
    let point = match (a.point, b.point) {
        (Some(p), Some(q)) => Some(p * nb + q),
        _ => None,
    };
    Ok(FiniteAlgebra { name: format!("{}x{}", a.name, b.name), size: n, ops, point })
}

/// `product(product(x, x), x)`: the triple `(a, b, c)` sits at `(a*n + b)*n + c`.
pub fn cube(x: &FiniteAlgebra) -> Result<FiniteAlgebra> {
    product(&product(x, x)?, x)
}

/// Least subset containing `seed` and closed under every operation,
/// constants included. Returned sorted.
pub fn subalgebra_generated(a: &FiniteAlgebra, seed: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; a.size];
    let mut order: Vec<usize> = Vec::new();
    let push = |e: usize, inside: &mut Vec<bool>, order: &mut Vec<usize>| {
        if !inside[e] {
            inside[e] = true;
            order.push(e);
        }
    };
    for &e in seed {
        push(e, &mut inside, &mut order);
    }
    for c in a.constants() {
        push(c, &mut inside, &mut order);
    }
    // Semi-naive: every tuple is evaluated once, when its newest entry arrives.
    let mut done = 0;
    let mut args = Vec::new();
    while done < order.len() {
        let new = order[done];
        let newest_pos = done;
        done += 1;
        for (k, op) in a.ops.iter().enumerate() {
            if op.arity == 0 {
                continue;
            }
            let older: Vec<usize> = order[..newest_pos].to_vec();
            for slot in 0..op.arity {
                // `slot` is the first position holding `new`.
                let mut with_new = older.clone();
                with_new.push(new);
                let mut ranges: Vec<&[usize]> = Vec::with_capacity(op.arity);
                for p in 0..op.arity {
                    ranges.push(match p.cmp(&slot) {
                        std::cmp::Ordering::Less => &older,
                        std::cmp::Ordering::Equal => std::slice::from_ref(&new),
                        std::cmp::Ordering::Greater => &with_new,
                    });
                }
                let mut results = Vec::new();
                for_each_mixed(&ranges, &mut args, |t| results.push(a.apply(k, t)));
                for r in results {
                    push(r, &mut inside, &mut order);
                }
            }
        }
    }
    order.sort_unstable();
    order
}

/// Row-major iteration over a product of per-position ranges.
pub(crate) fn for_each_mixed(ranges: &[&[usize]], buf: &mut Vec<usize>, mut f: impl FnMut(&[usize])) {
    if ranges.iter().any(|r| r.is_empty()) {
        return;
    }
    let k = ranges.len();
    buf.clear();
    buf.extend(ranges.iter().map(|r| r[0]));
    let mut idx = vec![0usize; k];
    loop {
        f(buf);
        let mut pos = k;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < ranges[pos].len() {
                buf[pos] = ranges[pos][idx[pos]];
                break;
            }
            idx[pos] = 0;
            buf[pos] = ranges[pos][0];
        }
    }
}

/// Every subuniverse containing `base`, each sorted, in lexicographic order.
pub fn subalgebras_containing(a: &FiniteAlgebra, base: &[usize], limit: usize) -> Result<Vec<Vec<usize>>> {
    let start = subalgebra_generated(a, base);
    let mut seen = std::collections::HashSet::new();
    seen.insert(start.clone());
    let mut work = vec![start];
    let mut out = Vec::new();
    while let Some(sub) = work.pop() {
        let mut inside = vec![false; a.size()];
        for &e in &sub {
            inside[e] = true;
        }
        for e in (0..a.size()).filter(|&e| !inside[e]) {
            let mut seed = sub.clone();
            seed.push(e);
            let bigger = subalgebra_generated(a, &seed);
            if seen.insert(bigger.clone()) {
                if seen.len() > limit {
                    return Err(Error::cap("number of subalgebras", limit as u64));
                }
                work.push(bigger);
            }
        }
        out.push(sub);
    }
    out.sort();
    Ok(out)
}
