use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{product, pullback, quotient, subalgebras_containing, FiniteAlgebra, Homomorphism, SplitEpi};
use crate::caps::Caps;
use crate::congruence::{all_congruences, congruence_generated, incompatibility, is_difunctional, permute, BinaryRelation, Partition};
use crate::error::{Error, Result};

fn permutes_with_first_projection(w: &BinaryRelation, t: &Partition) -> Result<bool> {
    let emb = w.embed()?;
    if t.size() != emb.len() {
        return Err(Error::Invalid("T does not live on W".into()));
    }
    if let Some(why) = incompatibility(&emb.alg, t) {
        return Err(Error::NotCongruence(why));
    }
    let firsts: Vec<usize> = w.pairs().iter().map(|p| p.0).collect();
    Ok(permute(&Partition::from_labels(&firsts), t))
}

/// Pointed instance: `W ≤ X × Z` difunctional and containing `{0} × Z`;
/// true iff `R[π0]` and `T` permute on `W`.
pub fn check_axiom_star_instance(w: &BinaryRelation, t: &Partition) -> Result<bool> {
    let x0 = w.left.require_point()?;
    if let Some(z) = (0..w.right.size()).find(|&z| !w.contains(x0, z)) {
        return Err(Error::Precondition(format!("W misses (0, {z})")));
    }
    if !is_difunctional(w) {
        return Err(Error::Precondition("W is not difunctional".into()));
    }
    permutes_with_first_projection(w, t)
}

/// Fiber instance over `Y`: `W ≤ X ×_Y Z` difunctional, containing every
/// `(s g z, z)`, with `T ≤ R[q]` for `q(x, z) = f(x)`.
pub fn check_fiber_axiom_star_instance(w: &BinaryRelation, f: &SplitEpi, g: &SplitEpi, t: &Partition) -> Result<bool> {
    if !Arc::ptr_eq(&w.left, f.domain()) && *w.left != **f.domain() {
        return Err(Error::Invalid("W does not start at the domain of f".into()));
    }
    for &(a, c) in w.pairs() {
        if f.f.apply(a) != g.f.apply(c) {
            return Err(Error::Precondition(format!("({a}, {c}) is not in X x_Y Z")));
        }
    }
    for c in 0..w.right.size() {
        let a = f.s.apply(g.f.apply(c));
        if !w.contains(a, c) {
            return Err(Error::Precondition(format!("W misses ({a}, {c})")));
        }
    }
    if !is_difunctional(w) {
        return Err(Error::Precondition("W is not difunctional".into()));
    }
    let over: Vec<usize> = w.pairs().iter().map(|p| f.f.apply(p.0)).collect();
    if !t.leq(&Partition::from_labels(&over)) {
        return Err(Error::Precondition("T is not contained in R[q]".into()));
    }
    permutes_with_first_projection(w, t)
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct AxiomStarScan {
    pub relations: usize,
    pub instances: usize,
    /// `(W, T)` for each failing instance.
    pub failures: Vec<(Vec<(usize, usize)>, Partition)>,
}

impl AxiomStarScan {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn scan(
    left: &Arc<FiniteAlgebra>,
    right: &Arc<FiniteAlgebra>,
    ambient_pairs: Vec<(usize, usize)>,
    base: Vec<(usize, usize)>,
    check: impl Fn(&BinaryRelation, &Partition) -> Result<bool>,
    caps: &Caps,
) -> Result<AxiomStarScan> {
    let prod = product(left, right)?;
    let nz = right.size();
    let inside: Vec<bool> = {
        let mut v = vec![false; prod.size()];
        for &(a, c) in &ambient_pairs {
            v[a * nz + c] = true;
        }
        v
    };
    let seed: Vec<usize> = base.iter().map(|&(a, c)| a * nz + c).collect();
    let mut out = AxiomStarScan::default();
    for elems in subalgebras_containing(&prod, &seed, caps.enumeration)? {
        if elems.iter().any(|&e| !inside[e]) {
            continue;
        }
        let pairs = elems.iter().map(|&e| (e / nz, e % nz)).collect();
        let w = BinaryRelation::new_unchecked(left.clone(), right.clone(), pairs)?;
        if !is_difunctional(&w) {
            continue;
        }
        out.relations += 1;
        let emb = w.embed()?;
        for c in all_congruences(&emb.alg, caps)?.elements() {
            match check(&w, c) {
                Ok(true) => out.instances += 1,
                Ok(false) => {
                    out.instances += 1;
                    out.failures.push((w.pairs().to_vec(), c.partition().clone()));
                }
                Err(Error::Precondition(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(out)
}

/// Every pointed instance between `x` and `z`.
pub fn scan_pointed_axiom_star(x: &Arc<FiniteAlgebra>, z: &Arc<FiniteAlgebra>, caps: &Caps) -> Result<AxiomStarScan> {
    let x0 = x.require_point()?;
    let all = (0..x.size()).flat_map(|a| (0..z.size()).map(move |c| (a, c))).collect();
    let base = (0..z.size()).map(|c| (x0, c)).collect();
    scan(x, z, all, base, check_axiom_star_instance, caps)
}

/// Every fiber instance between two split epis over the same base.
pub fn scan_fiber_axiom_star(f: &SplitEpi, g: &SplitEpi, caps: &Caps) -> Result<AxiomStarScan> {
    let (x, z) = (f.domain(), g.domain());
    let nz = z.size();
    let fp = pullback(&f.f, &g.f)?;
    let ambient = fp.elems.iter().map(|&e| (e / nz, e % nz)).collect();
    let base = (0..nz).map(|c| (f.s.apply(g.f.apply(c)), c)).collect();
    scan(x, z, ambient, base, |w, t| check_fiber_axiom_star_instance(w, f, g, t), caps)
}

/// `X × Z / Cg{((x,hx),(x',hx'))}` with `(p0, q)` checked surjective.
#[derive(Debug, Clone)]
pub struct StarQuotient {
    pub q_alg: Arc<FiniteAlgebra>,
    /// `X × Z -> Q`; `(x, z)` sits at `x*|Z| + z`.
    pub q: Homomorphism,
}

pub fn dp_via_axiom_star(h: &Homomorphism, caps: &Caps) -> Result<StarQuotient> {
    let (x, z) = (h.source(), h.target());
    x.require_point()?;
    let nz = z.size();
    let n = x.size();
    if n * nz > caps.generation_size {
        return Err(Error::cap("X x Z congruence generation", caps.generation_size as u64));
    }
    let prod = Arc::new(product(x, z)?);
    let pairs: Vec<(usize, usize)> = (1..n).map(|a| (h.apply(0), a * nz + h.apply(a))).collect();
    let cg = congruence_generated(&prod, &pairs);
    let (q_alg, q) = quotient(&prod, &cg)?;
    let m = q_alg.size();
    let mut hit = vec![false; n * m];
    for e in 0..n * nz {
        hit[(e / nz) * m + q.apply(e)] = true;
    }
    if let Some(i) = hit.iter().position(|&b| !b) {
        return Err(Error::outside("(p0, q) is not surjective onto X x Q", vec![i / m, i % m]));
    }
    Ok(StarQuotient { q_alg, q })
}
