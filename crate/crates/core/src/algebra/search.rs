//! Backtracking search for homomorphisms with optional constraints.

use std::sync::Arc;

use super::{for_each_mixed, subalgebra_generated, FiniteAlgebra, Homomorphism, SplitEpi};
use crate::caps::Caps;
use crate::error::{Error, Result};

/// All homomorphisms `a -> b`, in lexicographic order of the map.
pub fn enumerate_homomorphisms(
    a: &Arc<FiniteAlgebra>,
    b: &Arc<FiniteAlgebra>,
    caps: &Caps,
) -> Result<Vec<Homomorphism>> {
    HomSearch::new(a.clone(), b.clone())?.run(caps)
}

/// Every split epimorphism `x -> y` paired with each of its sections.
pub fn enumerate_split_epis(x: &Arc<FiniteAlgebra>, y: &Arc<FiniteAlgebra>, caps: &Caps) -> Result<Vec<SplitEpi>> {
    let mut out = Vec::new();
    for f in enumerate_homomorphisms(x, y, caps)? {
        if !f.is_surjective() {
            continue;
        }
        let mut search = HomSearch::new(y.clone(), x.clone())?;
        for b in 0..y.size() {
            search.restrict(b, |a| f.apply(a) == b);
        }
        for s in search.run(caps)? {
            if out.len() == caps.enumeration {
                return Err(Error::cap("split epimorphism enumeration", caps.enumeration as u64));
            }
            out.push(SplitEpi { f: f.clone(), s });
        }
    }
    Ok(out)
}

/// Greedy generating set: repeatedly add the candidate whose closure grows
/// the current subuniverse the most. Candidates are sampled when the
/// universe is large.
pub fn generating_set(a: &FiniteAlgebra, start: &[usize]) -> Vec<usize> {
    let n = a.size();
    let mut current = subalgebra_generated(a, start);
    let mut gens = Vec::new();
    while current.len() < n {
        let mut inside = vec![false; n];
        for &e in &current {
            inside[e] = true;
        }
        let outside: Vec<usize> = (0..n).filter(|&e| !inside[e]).collect();
        let stride = (outside.len() / 48).max(1);
        let mut best: Option<(usize, Vec<usize>)> = None;
        for &cand in outside.iter().step_by(stride) {
            let mut seed = current.clone();
            seed.push(cand);
            let closure = subalgebra_generated(a, &seed);
            if best.as_ref().map_or(true, |(_, b)| closure.len() > b.len()) {
                let full = closure.len() == n;
                best = Some((cand, closure));
                if full {
                    break;
                }
            }
        }
        let (g, closure) = best.expect("nonempty complement");
        gens.push(g);
        current = closure;
    }
    gens
}

/// A homomorphism search `a -> b` with fixed values and per-element
/// allowed images.
///
/// The search assigns a greedy generating set in order, propagating each
/// assignment through the operation tables (semi-naive: every tuple is
/// checked once, when its last entry gets a value). Leaves are complete
/// homomorphisms satisfying all constraints.
pub struct HomSearch {
    a: Arc<FiniteAlgebra>,
    b: Arc<FiniteAlgebra>,
    op_pairs: Vec<(usize, usize)>,
    fixed: Vec<Option<usize>>,
    allowed: Option<Vec<Vec<bool>>>,
}

impl HomSearch {
    /// Requires identical signatures.
    pub fn new(a: Arc<FiniteAlgebra>, b: Arc<FiniteAlgebra>) -> Result<Self> {
        a.require_same_signature(&b)?;
        let op_pairs = (0..a.operations().len()).map(|k| (k, k)).collect();
        let n = a.size();
        Ok(HomSearch { a, b, op_pairs, fixed: vec![None; n], allowed: None })
    }

    /// Pins `h(x) = y`. Conflicting pins make the search return nothing.
    pub fn fix(&mut self, x: usize, y: usize) -> &mut Self {
        match self.fixed[x] {
            Some(prev) if prev != y => {
                // Record the conflict as an empty allowed set.
                self.restrict(x, |_| false);
            }
            _ => self.fixed[x] = Some(y),
        }
        self
    }

    /// Restricts the images of `x` to those satisfying `pred`.
    pub fn restrict(&mut self, x: usize, pred: impl Fn(usize) -> bool) -> &mut Self {
        let nb = self.b.size();
        let na = self.a.size();
        let allowed = self.allowed.get_or_insert_with(|| vec![vec![true; nb]; na]);
        for (y, slot) in allowed[x].iter_mut().enumerate() {
            *slot = *slot && pred(y);
        }
        self
    }

    /// Runs the search; results are sorted lexicographically by map.
    pub fn run(&self, caps: &Caps) -> Result<Vec<Homomorphism>> {
        let mut out = Vec::new();
        self.run_with(caps, |map| {
            out.push(map.to_vec());
            true
        })?;
        out.sort();
        Ok(out
            .into_iter()
            .map(|m| Homomorphism::new_unchecked(self.a.clone(), self.b.clone(), m))
            .collect())
    }

    /// Number of solutions, stopping early once `limit` is reached.
    pub fn count_up_to(&self, caps: &Caps, limit: usize) -> Result<usize> {
        let mut count = 0;
        self.run_with(caps, |_| {
            count += 1;
            count < limit
        })?;
        Ok(count)
    }

    /// Streams solutions to `visit`; returning false stops the search.
    pub fn run_with(&self, caps: &Caps, mut visit: impl FnMut(&[usize]) -> bool) -> Result<()> {
        let na = self.a.size();
        let mut st = State {
            val: vec![usize::MAX; na],
            order: Vec::with_capacity(na),
            nodes: 0,
        };
        // Root: constants, then pinned values.
        let mut root = Vec::new();
        for (ka, kb) in self.op_pairs.iter().copied() {
            if self.a.operations()[ka].arity == 0 {
                root.push((self.a.apply(ka, &[]), self.b.apply(kb, &[])));
            }
        }
        for (x, y) in self.fixed.iter().enumerate() {
            if let Some(y) = *y {
                root.push((x, y));
            }
        }
        for (x, y) in root {
            if !self.assign(&mut st, x, y) {
                return Ok(());
            }
        }
        let assigned: Vec<usize> = st.order.clone();
        let gens = generating_set(&self.a, &assigned);
        let mut stop = false;
        self.dfs(&mut st, &gens, 0, caps, &mut visit, &mut stop)
    }

    fn dfs(
        &self,
        st: &mut State,
        gens: &[usize],
        depth: usize,
        caps: &Caps,
        visit: &mut impl FnMut(&[usize]) -> bool,
        stop: &mut bool,
    ) -> Result<()> {
        let mut depth = depth;
        while depth < gens.len() && st.val[gens[depth]] != usize::MAX {
            depth += 1;
        }
        if depth == gens.len() {
            debug_assert!(st.val.iter().all(|&v| v != usize::MAX));
            if !visit(&st.val) {
                *stop = true;
            }
            return Ok(());
        }
        let g = gens[depth];
        for y in 0..self.b.size() {
            if *stop {
                return Ok(());
            }
            st.nodes += 1;
            if st.nodes > caps.hom_nodes {
                return Err(Error::cap("homomorphism search nodes", caps.hom_nodes));
            }
            let mark = st.order.len();
            if self.assign(st, g, y) {
                self.dfs(st, gens, depth + 1, caps, visit, stop)?;
            }
            for &x in &st.order[mark..] {
                st.val[x] = usize::MAX;
            }
            st.order.truncate(mark);
        }
        Ok(())
    }

    fn permitted(&self, x: usize, y: usize) -> bool {
        self.allowed.as_ref().map_or(true, |al| al[x][y])
    }

    /// Assigns `h(x) = y` and closes under the operations. Returns false on
    /// conflict; the caller undoes everything pushed past its mark.
    fn assign(&self, st: &mut State, x: usize, y: usize) -> bool {
        match st.val[x] {
            v if v == y => return true,
            v if v != usize::MAX => return false,
            _ => {}
        }
        if !self.permitted(x, y) {
            return false;
        }
        st.val[x] = y;
        st.order.push(x);
        let mut next = st.order.len() - 1;
        let mut buf = Vec::new();
        let mut bargs = Vec::new();
        while next < st.order.len() {
            let new = st.order[next];
            let older: Vec<usize> = st.order[..next].to_vec();
            next += 1;
            let mut with_new = older.clone();
            with_new.push(new);
            for &(ka, kb) in &self.op_pairs {
                let arity = self.a.operations()[ka].arity;
                for slot in 0..arity {
                    let ranges: Vec<&[usize]> = (0..arity)
                        .map(|p| match p.cmp(&slot) {
                            std::cmp::Ordering::Less => older.as_slice(),
                            std::cmp::Ordering::Equal => std::slice::from_ref(&new),
                            std::cmp::Ordering::Greater => with_new.as_slice(),
                        })
                        .collect();
                    let mut pending = Vec::new();
                    for_each_mixed(&ranges, &mut buf, |t| {
                        bargs.clear();
                        bargs.extend(t.iter().map(|&e| st.val[e]));
                        pending.push((self.a.apply(ka, t), self.b.apply(kb, &bargs)));
                    });
                    for (ax, by) in pending {
                        let cur = st.val[ax];
                        if cur == usize::MAX {
                            if !self.permitted(ax, by) {
                                return false;
                            }
                            st.val[ax] = by;
                            st.order.push(ax);
                        } else if cur != by {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

struct State {
    val: Vec<usize>,
    order: Vec<usize>,
    nodes: u64,
}
