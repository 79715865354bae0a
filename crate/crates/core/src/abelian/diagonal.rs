use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{product, quotient, FiniteAlgebra, HomSearch, Homomorphism};
use crate::caps::Caps;
use crate::congruence::congruence_generated;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Verified {
    pub regular_pushout: bool,
    pub group_laws: bool,
    pub star_identity: bool,
}

/// `DpX = X×X / Cg{((a,a),(b,b))}` with its abelian group.
#[derive(Debug, Clone)]
pub struct DiagonalPunctuation {
    pub source: Arc<FiniteAlgebra>,
    pub dp: Arc<FiniteAlgebra>,
    /// `X × X -> DpX`; the pair `(a,b)` sits at `a*n + b`.
    pub omega: Homomorphism,
    pub zero: usize,
    pub add: Vec<usize>,
    pub neg: Vec<usize>,
    pub verified: Verified,
}

#[derive(Debug, Clone, Serialize)]
pub struct Tables {
    pub add: Vec<usize>,
    pub neg: Vec<usize>,
    pub zero: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct DpSummary {
    pub size: usize,
    pub class_map: Vec<usize>,
    pub tables: Tables,
    pub verified: Verified,
}

impl DiagonalPunctuation {
    pub fn size(&self) -> usize {
        self.dp.size()
    }

    pub fn w(&self, a: usize, b: usize) -> usize {
        self.omega.apply(a * self.source.size() + b)
    }

    pub fn sum(&self, u: usize, v: usize) -> usize {
        self.add[u * self.size() + v]
    }

    pub fn summary(&self) -> DpSummary {
        DpSummary {
            size: self.size(),
            class_map: self.omega.map().to_vec(),
            tables: Tables { add: self.add.clone(), neg: self.neg.clone(), zero: self.zero },
            verified: self.verified,
        }
    }
}

/// Checks the group axioms of `(add, neg, zero)` on `m` elements,
/// returning a witness on failure.
pub(crate) fn abelian_group_failure(add: &[usize], neg: &[usize], zero: usize, m: usize) -> Option<(&'static str, Vec<usize>)> {
    let s = |u: usize, v: usize| add[u * m + v];
    for u in 0..m {
        if s(u, zero) != u {
            return Some(("zero is not a unit", vec![u]));
        }
        if s(u, neg[u]) != zero {
            return Some(("negation is not an inverse", vec![u]));
        }
        for v in 0..m {
            if s(u, v) != s(v, u) {
                return Some(("addition is not commutative", vec![u, v]));
            }
            for w in 0..m {
                if s(s(u, v), w) != s(u, s(v, w)) {
                    return Some(("addition is not associative", vec![u, v, w]));
                }
            }
        }
    }
    None
}

/// Computes `DpX` and verifies the regular pushout, the group laws and
/// `−ω(a,b) + ω(a,c) = ω(b,c)`.
pub fn diagonal_punctuation(x: &Arc<FiniteAlgebra>, caps: &Caps) -> Result<DiagonalPunctuation> {
    let n = x.size();
    if n * n > caps.generation_size {
        return Err(Error::cap("X x X congruence generation", caps.generation_size as u64));
    }
    let sq = Arc::new(product(x, x)?);
    let pairs: Vec<(usize, usize)> = (1..n).map(|b| (0, b * n + b)).collect();
    let cg = congruence_generated(&sq, &pairs);
    let (dp, omega) = quotient(&sq, &cg)?;
    let m = dp.size();
    let w = |a: usize, b: usize| omega.apply(a * n + b);
    let zero = w(0, 0);

    // (p0, ω) onto X × DpX.
    let mut hit = vec![false; n * m];
    for a in 0..n {
        for b in 0..n {
            hit[a * m + w(a, b)] = true;
        }
    }
    if let Some(i) = hit.iter().position(|&h| !h) {
        return Err(Error::outside("(p0, ω) is not surjective onto X x DpX", vec![i / m, i % m]));
    }

    // u + v by chaining: ω(a,b) + ω(b,y) = ω(a,y).
    let mut add = vec![usize::MAX; m * m];
    let mut neg = vec![usize::MAX; m];
    for a in 0..n {
        for b in 0..n {
            let u = w(a, b);
            match neg[u] {
                usize::MAX => neg[u] = w(b, a),
                v if v != w(b, a) => return Err(Error::outside("negation is ill-defined", vec![a, b])),
                _ => {}
            }
            for c in 0..n {
                let slot = &mut add[u * m + w(b, c)];
                match *slot {
                    usize::MAX => *slot = w(a, c),
                    v if v != w(a, c) => return Err(Error::outside("addition is ill-defined", vec![a, b, c])),
                    _ => {}
                }
            }
        }
    }
    if let Some(i) = add.iter().position(|&v| v == usize::MAX) {
        return Err(Error::outside("addition is not total", vec![i / m, i % m]));
    }
    if let Some((why, wit)) = abelian_group_failure(&add, &neg, zero, m) {
        return Err(Error::outside(why, wit));
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if add[neg[w(a, b)] * m + w(a, c)] != w(b, c) {
                    return Err(Error::outside("−ω(a,b)+ω(a,c) != ω(b,c)", vec![a, b, c]));
                }
            }
        }
    }
    Ok(DiagonalPunctuation {
        source: x.clone(),
        dp,
        omega,
        zero,
        add,
        neg,
        verified: Verified { regular_pushout: true, group_laws: true, star_identity: true },
    })
}

/// `η(x) = ω(0, x)`, checked surjective.
pub fn abelianization_map(dp: &DiagonalPunctuation) -> Result<Homomorphism> {
    let zero = dp.source.require_point()?;
    let map = (0..dp.source.size()).map(|x| dp.w(zero, x)).collect();
    let eta = Homomorphism::new(dp.source.clone(), dp.dp.clone(), map)?;
    if let Some(u) = (0..dp.size()).find(|&u| !eta.map().contains(&u)) {
        return Err(Error::outside("η is not surjective", vec![u]));
    }
    Ok(eta)
}

/// The unique `k: DpX -> A` with `k ∘ η = h`, if one exists.
pub fn factor_through_eta(eta: &Homomorphism, h: &Homomorphism, caps: &Caps) -> Result<Option<Homomorphism>> {
    if !Arc::ptr_eq(eta.source(), h.source()) && **eta.source() != **h.source() {
        return Err(Error::Invalid("h must start at the source of η".into()));
    }
    let mut search = HomSearch::new(eta.target().clone(), h.target().clone())?;
    for x in 0..eta.source().size() {
        search.fix(eta.apply(x), h.apply(x));
    }
    let mut found = search.run(caps)?;
    match found.len() {
        0 => Ok(None),
        1 => Ok(found.pop()),
        k => Err(Error::NotUnique(format!("{k} factorizations through η"))),
    }
}

/// `ω(u,v) = 0` only on the diagonal.
pub fn check_affine_diagonal(dp: &DiagonalPunctuation) -> bool {
    let n = dp.source.size();
    (0..n).all(|u| (0..n).all(|v| u == v || dp.w(u, v) != dp.zero))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DomegaReport {
    pub reflexive: bool,
    pub symmetric: bool,
    pub transitive: bool,
    /// `(s0)⁻¹(D_ω) = ∇`.
    pub diagonal_preimage_full: bool,
    /// First failing tuple of pair coordinates, if any.
    pub witness: Option<Vec<usize>>,
}

impl DomegaReport {
    pub fn passed(&self) -> bool {
        self.reflexive && self.symmetric && self.transitive && self.diagonal_preimage_full
    }
}

/// `(x,y) D_ω (x',y')` iff `ω(x,x') = ω(y,y')`.
pub fn check_domega_equivalence(dp: &DiagonalPunctuation) -> DomegaReport {
    let n = dp.source.size();
    let rel = |x: usize, y: usize, x2: usize, y2: usize| dp.w(x, x2) == dp.w(y, y2);
    let mut rep = DomegaReport {
        reflexive: true,
        symmetric: true,
        transitive: true,
        diagonal_preimage_full: true,
        witness: None,
    };
    let fail = |flag: &mut bool, w: Vec<usize>, witness: &mut Option<Vec<usize>>| {
        *flag = false;
        witness.get_or_insert(w);
    };
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).collect();
    for &(x, y) in &pairs {
        if !rel(x, y, x, y) {
            fail(&mut rep.reflexive, vec![x, y], &mut rep.witness);
        }
        if !rel(x, x, y, y) {
            fail(&mut rep.diagonal_preimage_full, vec![x, y], &mut rep.witness);
        }
        for &(x2, y2) in &pairs {
            if !rel(x, y, x2, y2) {
                continue;
            }
            if !rel(x2, y2, x, y) {
                fail(&mut rep.symmetric, vec![x, y, x2, y2], &mut rep.witness);
            }
            for &(x3, y3) in &pairs {
                if rel(x2, y2, x3, y3) && !rel(x, y, x3, y3) {
                    fail(&mut rep.transitive, vec![x, y, x2, y2, x3, y3], &mut rep.witness);
                }
            }
        }
    }
    rep
}
