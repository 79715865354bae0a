use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{cube, eval_term, FiniteAlgebra, HomSearch, Homomorphism, SplitEpi, Term};
use crate::caps::Caps;
use crate::error::{Error, Result};

/// A homomorphism `p: A³ -> A` with `p(x,y,y) = x = p(y,y,x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaltsevOp {
    pub p: Homomorphism,
    pub autonomous: bool,
    /// `p(p(x,y,z),u,v) = p(x,y,p(z,u,v))`.
    pub associative: bool,
}

impl MaltsevOp {
    pub fn apply(&self, x: usize, y: usize, z: usize) -> usize {
        let n = self.p.target().size();
        self.p.apply((x * n + y) * n + z)
    }
}

/// The 3×3 interchange law for a ternary table on `n` elements.
pub fn is_autonomous(table: &[usize], n: usize) -> bool {
    let p = |x: usize, y: usize, z: usize| table[(x * n + y) * n + z];
    let mut m = [0usize; 9];
    for c in 0..n.pow(9) {
        let mut r = c;
        for slot in m.iter_mut().rev() {
            *slot = r % n;
            r /= n;
        }
        let rows = p(p(m[0], m[1], m[2]), p(m[3], m[4], m[5]), p(m[6], m[7], m[8]));
        let cols = p(p(m[0], m[3], m[6]), p(m[1], m[4], m[7]), p(m[2], m[5], m[8]));
        if rows != cols {
            return false;
        }
    }
    true
}

fn is_associative(table: &[usize], n: usize) -> bool {
    let p = |x: usize, y: usize, z: usize| table[(x * n + y) * n + z];
    (0..n.pow(5)).all(|c| {
        let (x, y, z, u, v) = (c / n.pow(4), c / n.pow(3) % n, c / (n * n) % n, c / n % n, c % n);
        p(p(x, y, z), u, v) == p(x, y, p(z, u, v))
    })
}

/// Every internal Mal'tsev operation on `a`.
pub fn find_maltsev_ops(a: &Arc<FiniteAlgebra>, caps: &Caps) -> Result<Vec<MaltsevOp>> {
    let n = a.size();
    let mut search = HomSearch::new(Arc::new(cube(a)?), a.clone())?;
    for x in 0..n {
        for y in 0..n {
            search.fix((x * n + y) * n + y, x);
            search.fix((y * n + y) * n + x, x);
        }
    }
    Ok(search
        .run(caps)?
        .into_iter()
        .map(|p| MaltsevOp {
            autonomous: is_autonomous(p.map(), n),
            associative: is_associative(p.map(), n),
            p,
        })
        .collect())
}

/// `∘` and `d` on the pairs of `R[f]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberOps {
    /// Elements of `A` grouped by fiber of `f`, ascending.
    pub fibers: Vec<Vec<usize>>,
    /// `(u, v, u∘v, d(u,v))` for every pair in a common fiber.
    pub entries: Vec<(usize, usize, usize, usize)>,
}

impl FiberOps {
    pub fn circ(&self, u: usize, v: usize) -> Option<usize> {
        self.entry(u, v).map(|e| e.2)
    }

    pub fn d(&self, u: usize, v: usize) -> Option<usize> {
        self.entry(u, v).map(|e| e.3)
    }

    fn entry(&self, u: usize, v: usize) -> Option<&(usize, usize, usize, usize)> {
        self.entries
            .binary_search_by(|e| (e.0, e.1).cmp(&(u, v)))
            .ok()
            .map(|i| &self.entries[i])
    }
}

/// `u∘v = p(u, sf(u), v)` and `d(u,v) = p(u, v, sf(u))` on each fiber.
pub fn fiber_ops_from_ternary(a: &FiniteAlgebra, p: &Term, se: &SplitEpi) -> Result<FiberOps> {
    if se.domain().size() != a.size() {
        return Err(Error::Invalid("split epi does not start at the algebra".into()));
    }
    let n = a.size();
    let eval = |x: usize, y: usize, z: usize| eval_term(a, p, &[x, y, z]);
    for x in 0..n {
        if eval(x, x, x)? != x {
            return Err(Error::Precondition(format!("p({x},{x},{x}) != {x}")));
        }
    }
    let ny = se.codomain().size();
    let mut fibers = vec![Vec::new(); ny];
    for x in 0..n {
        fibers[se.f.apply(x)].push(x);
    }
    let mut entries = Vec::new();
    for u in 0..n {
        let fu = se.f.apply(u);
        let base = se.retraction(u);
        for &v in &fibers[fu] {
            let circ = eval(u, base, v)?;
            let d = eval(u, v, base)?;
            for w in [circ, d] {
                if se.f.apply(w) != fu {
                    return Err(Error::outside("fiber operation leaves its fiber", vec![u, v, w]));
                }
            }
            entries.push((u, v, circ, d));
        }
    }
    Ok(FiberOps { fibers, entries })
}
