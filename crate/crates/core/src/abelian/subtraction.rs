use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{product, FiniteAlgebra, HomSearch, Homomorphism};
use crate::caps::Caps;
use crate::error::{Error, Result};

/// An internal subtraction `d: A × A -> A` with `d(x,x) = 0`, `d(x,0) = x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subtraction {
    pub alg: Arc<FiniteAlgebra>,
    pub d: Homomorphism,
}

impl Subtraction {
    pub fn new(alg: Arc<FiniteAlgebra>, d: Homomorphism) -> Result<Self> {
        let zero = alg.require_point()?;
        let n = alg.size();
        if d.source().size() != n * n || d.target().size() != n {
            return Err(Error::Invalid("subtraction must map A x A to A".into()));
        }
        if let Some(x) = (0..n).find(|&x| d.apply(x * n + x) != zero || d.apply(x * n + zero) != x) {
            return Err(Error::Invalid(format!("subtraction identities fail at {x}")));
        }
        Ok(Subtraction { alg, d })
    }

    pub fn apply(&self, x: usize, y: usize) -> usize {
        self.d.apply(x * self.alg.size() + y)
    }

    /// Row-major table of `d`.
    pub fn table(&self) -> &[usize] {
        self.d.map()
    }

    /// `d(x,z) = d(y,z)` implies `x = y`; returns a failing `(x, y, z)`.
    pub fn right_cancellation_failure(&self) -> Option<[usize; 3]> {
        let n = self.alg.size();
        for z in 0..n {
            let mut seen = vec![usize::MAX; n];
            for x in 0..n {
                let v = self.apply(x, z);
                if seen[v] != usize::MAX {
                    return Some([seen[v], x, z]);
                }
                seen[v] = x;
            }
        }
        None
    }
}

fn square(a: &Arc<FiniteAlgebra>) -> Result<Arc<FiniteAlgebra>> {
    Ok(Arc::new(product(a, a)?))
}

/// All internal subtractions on a pointed algebra.
pub fn find_subtractions(a: &Arc<FiniteAlgebra>, caps: &Caps) -> Result<Vec<Subtraction>> {
    let zero = a.require_point()?;
    let n = a.size();
    let mut search = HomSearch::new(square(a)?, a.clone())?;
    for x in 0..n {
        search.fix(x * n + x, zero);
        search.fix(x * n + zero, x);
    }
    Ok(search
        .run(caps)?
        .into_iter()
        .map(|d| Subtraction { alg: a.clone(), d })
        .collect())
}

/// The group induced by a subtraction satisfying `d(d(x,z),d(y,z)) = d(x,y)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InducedGroup {
    /// `x ∘ y = d(x, d(0, y))`, row-major.
    pub op: Vec<usize>,
    pub zero: usize,
    /// `x ↦ d(0, x)`.
    pub inverse: Vec<usize>,
    pub commutative: bool,
    /// `d(u,v) = d(u',v')` iff `d(u,u') = d(v,v')`.
    pub interchange: bool,
    /// `x ∘ x = 0`, equivalently `d(0,x) = x`.
    pub opsubtraction: bool,
}

/// Builds and verifies the group of a subtraction. A bare subtraction that
/// fails the difference law is reported with the failing triple.
pub fn group_from_subtraction(sub: &Subtraction) -> Result<InducedGroup> {
    let n = sub.alg.size();
    let zero = sub.alg.require_point()?;
    let d = |x: usize, y: usize| sub.apply(x, y);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if d(d(x, z), d(y, z)) != d(x, y) {
                    return Err(Error::outside("d(d(x,z),d(y,z)) != d(x,y)", vec![x, y, z]));
                }
            }
        }
    }
    let inverse: Vec<usize> = (0..n).map(|x| d(zero, x)).collect();
    let op: Vec<usize> = (0..n * n).map(|i| d(i / n, inverse[i % n])).collect();
    let m = |x: usize, y: usize| op[x * n + y];
    for x in 0..n {
        if m(x, zero) != x || m(zero, x) != x {
            return Err(Error::NotGroup(format!("0 is not a unit at {x}")));
        }
        if m(x, inverse[x]) != zero || m(inverse[x], x) != zero {
            return Err(Error::NotGroup(format!("d(0,{x}) is not an inverse")));
        }
        for y in 0..n {
            if d(x, y) != m(x, inverse[y]) {
                return Err(Error::NotGroup(format!("d({x},{y}) is not x∘y⁻¹")));
            }
            for z in 0..n {
                if m(m(x, y), z) != m(x, m(y, z)) {
                    return Err(Error::NotGroup(format!("not associative at ({x},{y},{z})")));
                }
            }
        }
    }
    let commutative = (0..n).all(|x| (0..n).all(|y| m(x, y) == m(y, x)));
    let interchange = (0..n.pow(4)).all(|c| {
        let (u, v, u2, v2) = (c / (n * n * n), c / (n * n) % n, c / n % n, c % n);
        (d(u, v) == d(u2, v2)) == (d(u, u2) == d(v, v2))
    });
    let opsubtraction = (0..n).all(|x| m(x, x) == zero);
    Ok(InducedGroup { op, zero, inverse, commutative, interchange, opsubtraction })
}

/// An internal binary operation with two-sided unit `0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitalMagma {
    pub table: Vec<usize>,
    pub associative: bool,
    pub commutative: bool,
    pub left_cancellable: bool,
}

/// Every homomorphism `m: A × A -> A` with `m(x,0) = x = m(0,x)`.
pub fn find_unital_magmas(a: &Arc<FiniteAlgebra>, caps: &Caps) -> Result<Vec<UnitalMagma>> {
    let zero = a.require_point()?;
    let n = a.size();
    let mut search = HomSearch::new(square(a)?, a.clone())?;
    for x in 0..n {
        search.fix(x * n + zero, x);
        search.fix(zero * n + x, x);
    }
    Ok(search
        .run(caps)?
        .into_iter()
        .map(|h| {
            let t = h.map().to_vec();
            let m = |x: usize, y: usize| t[x * n + y];
            let associative = (0..n.pow(3)).all(|c| {
                let (x, y, z) = (c / (n * n), c / n % n, c % n);
                m(m(x, y), z) == m(x, m(y, z))
            });
            let commutative = (0..n).all(|x| (0..n).all(|y| m(x, y) == m(y, x)));
            let left_cancellable = (0..n).all(|x| {
                let mut row: Vec<usize> = (0..n).map(|y| m(x, y)).collect();
                row.sort_unstable();
                row.dedup();
                row.len() == n
            });
            UnitalMagma { table: t, associative, commutative, left_cancellable }
        })
        .collect())
}

/// Unary homomorphisms `!` with `x ∘ !x = 0` for the binary table `m`.
pub fn find_right_cancellers(a: &Arc<FiniteAlgebra>, m: &[usize], caps: &Caps) -> Result<Vec<Homomorphism>> {
    let zero = a.require_point()?;
    let n = a.size();
    if m.len() != n * n {
        return Err(Error::Invalid("binary table has the wrong length".into()));
    }
    let mut search = HomSearch::new(a.clone(), a.clone())?;
    for x in 0..n {
        search.restrict(x, |c| m[x * n + c] == zero);
    }
    search.run(caps)
}
