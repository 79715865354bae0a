use std::sync::Arc;

use serde::Serialize;

use super::diagonal::{abelian_group_failure, Tables, Verified};
use crate::algebra::{kernel_pair_algebra, product, pullback, quotient, Embedded, FiniteAlgebra, HomSearch, Homomorphism, SplitEpi};
use crate::caps::Caps;
use crate::congruence::congruence_generated;
use crate::error::{Error, Result};

/// Fiberwise addition on a bundle `ψ: D -> Y`: sums of elements in
/// different fibers are `None`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberGroups {
    pub add: Vec<Option<usize>>,
    pub neg: Vec<usize>,
    /// Unit of each fiber, indexed by `y`.
    pub units: Vec<usize>,
}

impl FiberGroups {
    pub fn sum(&self, u: usize, v: usize) -> Option<usize> {
        self.add[u * self.neg.len() + v]
    }

    /// The abelian group on the fiber over `y`, renumbered by rank.
    pub fn fiber(&self, psi: &Homomorphism, y: usize) -> (Vec<usize>, Tables) {
        let elems: Vec<usize> = (0..self.neg.len()).filter(|&u| psi.apply(u) == y).collect();
        let rank = |u: usize| elems.binary_search(&u).expect("element of the fiber");
        let m = elems.len();
        let mut add = vec![0; m * m];
        for (i, &u) in elems.iter().enumerate() {
            for (j, &v) in elems.iter().enumerate() {
                add[i * m + j] = rank(self.sum(u, v).expect("same fiber"));
            }
        }
        let neg = elems.iter().map(|&u| rank(self.neg[u])).collect();
        let zero = rank(self.units[y]);
        (elems, Tables { add, neg, zero })
    }
}

/// Builds `ω(a,b) + ω(b,c) = ω(a,c)` on classes of `R[f]`, checking
/// well-definedness, and verifies each fiber is an abelian group.
///
/// `fibers[y]` lists the elements of `X` over `y`; `w(a,b)` is the class
/// of `(a,b)`.
pub(crate) fn chain_groups(
    m: usize,
    fibers: &[Vec<usize>],
    units: Vec<usize>,
    w: impl Fn(usize, usize) -> usize,
    class_fiber: impl Fn(usize) -> usize,
) -> Result<FiberGroups> {
    let mut add = vec![None; m * m];
    let mut neg = vec![usize::MAX; m];
    for fiber in fibers {
        for &a in fiber {
            for &b in fiber {
                let u = w(a, b);
                if neg[u] == usize::MAX {
                    neg[u] = w(b, a);
                } else if neg[u] != w(b, a) {
                    return Err(Error::outside("fiber negation is ill-defined", vec![a, b]));
                }
                for &c in fiber {
                    let slot = &mut add[u * m + w(b, c)];
                    match *slot {
                        None => *slot = Some(w(a, c)),
                        Some(v) if v != w(a, c) => {
                            return Err(Error::outside("fiber addition is ill-defined", vec![a, b, c]))
                        }
                        _ => {}
                    }
                }
            }
        }
    }
    if let Some(u) = neg.iter().position(|&v| v == usize::MAX) {
        return Err(Error::outside("class not reached by any pair", vec![u]));
    }
    for (y, fiber) in fibers.iter().enumerate() {
        let elems: Vec<usize> = (0..m).filter(|&u| class_fiber(u) == y).collect();
        let k = elems.len();
        let rank = |u: usize| elems.binary_search(&u).ok();
        let mut table = vec![0; k * k];
        for (i, &u) in elems.iter().enumerate() {
            for (j, &v) in elems.iter().enumerate() {
                let s = add[u * m + v].and_then(rank);
                table[i * k + j] = s.ok_or_else(|| Error::outside("fiber addition is not total", vec![u, v]))?;
            }
        }
        let nrank: Option<Vec<usize>> = elems.iter().map(|&u| rank(neg[u])).collect();
        let nrank = nrank.ok_or_else(|| Error::outside("negation leaves the fiber", vec![y]))?;
        let unit = rank(units[y]).ok_or_else(|| Error::outside("unit outside its fiber", vec![y]))?;
        if let Some((why, wit)) = abelian_group_failure(&table, &nrank, unit, k) {
            let wit = wit.into_iter().map(|i| elems[i]).collect();
            return Err(Error::outside(why, wit));
        }
        if fiber.is_empty() {
            return Err(Error::Precondition(format!("empty fiber over {y}")));
        }
    }
    Ok(FiberGroups { add, neg, units })
}

/// `Dp[f]`: the quotient of `R[f]` by `Cg{((x,x),(x',x')) : fx = fx'}`.
#[derive(Debug, Clone)]
pub struct SplitAbelianization {
    pub input: SplitEpi,
    pub rf: Embedded,
    pub dp: Arc<FiniteAlgebra>,
    /// `R[f] -> Dp[f]`.
    pub omega: Homomorphism,
    pub psi: Homomorphism,
    pub theta: Homomorphism,
    /// `x ↦ ω(sf(x), x)`, surjective.
    pub comparison: Homomorphism,
    pub groups: FiberGroups,
    pub verified: Verified,
}

#[derive(Debug, Clone, Serialize)]
pub struct SplitSummary {
    pub size: usize,
    pub class_map: Vec<usize>,
    pub psi: Vec<usize>,
    pub theta: Vec<usize>,
    pub tables: FiberGroups,
    pub verified: Verified,
}

impl SplitAbelianization {
    /// Class of the pair `(a, b)` with `f(a) = f(b)`.
    pub fn w(&self, a: usize, b: usize) -> usize {
        let n = self.input.domain().size();
        self.omega.apply(self.rf.local(a * n + b).expect("pair in R[f]"))
    }

    pub fn size(&self) -> usize {
        self.dp.size()
    }

    pub fn as_split_epi(&self) -> SplitEpi {
        SplitEpi { f: self.psi.clone(), s: self.theta.clone() }
    }

    pub fn summary(&self) -> SplitSummary {
        SplitSummary {
            size: self.size(),
            class_map: self.omega.map().to_vec(),
            psi: self.psi.map().to_vec(),
            theta: self.theta.map().to_vec(),
            tables: self.groups.clone(),
            verified: self.verified,
        }
    }
}

pub(crate) fn fibers_of(f: &Homomorphism) -> Vec<Vec<usize>> {
    let mut fibers = vec![Vec::new(); f.target().size()];
    for x in 0..f.source().size() {
        fibers[f.apply(x)].push(x);
    }
    fibers
}

/// Induces `D -> Y` from a map on representatives, checking it is constant
/// on classes.
pub(crate) fn induced_on_classes(
    omega: &Homomorphism,
    target: &Arc<FiniteAlgebra>,
    on_elem: impl Fn(usize) -> usize,
) -> Result<Homomorphism> {
    let mut map = vec![usize::MAX; omega.target().size()];
    for e in 0..omega.source().size() {
        let c = omega.apply(e);
        let v = on_elem(e);
        if map[c] != usize::MAX && map[c] != v {
            return Err(Error::outside("induced map is not constant on a class", vec![e]));
        }
        map[c] = v;
    }
    Homomorphism::new(omega.target().clone(), target.clone(), map)
}

pub fn dp_split(se: &SplitEpi, caps: &Caps) -> Result<SplitAbelianization> {
    let x = se.domain().clone();
    let y = se.codomain().clone();
    let n = x.size();
    let rf = kernel_pair_algebra(&se.f)?;
    if rf.len() > caps.generation_size {
        return Err(Error::cap("R[f] congruence generation", caps.generation_size as u64));
    }
    let diag = |a: usize| rf.local(a * n + a).expect("diagonal pair");
    let pairs: Vec<(usize, usize)> = (0..n).map(|a| (diag(se.retraction(a)), diag(a))).collect();
    let cg = congruence_generated(&rf.alg, &pairs);
    let (dp, omega) = quotient(&rf.alg, &cg)?;
    let pair_of = |e: usize| (rf.elems[e] / n, rf.elems[e] % n);
    let psi = induced_on_classes(&omega, &y, |e| se.f.apply(pair_of(e).0))?;
    let theta_map = (0..y.size()).map(|b| omega.apply(diag(se.s.apply(b)))).collect();
    let theta = Homomorphism::new(y.clone(), dp.clone(), theta_map)?;
    if let Some(b) = (0..y.size()).find(|&b| psi.apply(theta.apply(b)) != b) {
        return Err(Error::outside("ψ ∘ θ is not the identity", vec![b]));
    }
    let w = |a: usize, b: usize| omega.apply(rf.local(a * n + b).expect("pair in R[f]"));

    // (d0, ω) onto X ×_Y Dp[f].
    let m = dp.size();
    let mut hit = vec![false; n * m];
    for e in 0..rf.len() {
        let (a, _) = pair_of(e);
        hit[a * m + omega.apply(e)] = true;
    }
    for a in 0..n {
        if let Some(u) = (0..m).find(|&u| psi.apply(u) == se.f.apply(a) && !hit[a * m + u]) {
            return Err(Error::outside("(d0, ω) is not surjective onto X x_Y Dp[f]", vec![a, u]));
        }
    }

    let fibers = fibers_of(&se.f);
    let units: Vec<usize> = (0..y.size()).map(|b| theta.apply(b)).collect();
    let groups = chain_groups(m, &fibers, units, w, |u| psi.apply(u))?;
    // ω(a,b) = ω(a,sf a) − ω(b,sf b).
    for fiber in &fibers {
        for &a in fiber {
            for &b in fiber {
                let base = se.retraction(a);
                let rhs = groups.sum(w(a, base), groups.neg[w(b, base)]);
                if rhs != Some(w(a, b)) {
                    return Err(Error::outside("ω(a,b) != ω(a,sfa) − ω(b,sfb)", vec![a, b]));
                }
            }
        }
    }
    let comparison = Homomorphism::new(x.clone(), dp.clone(), (0..n).map(|a| w(se.retraction(a), a)).collect())?;
    if let Some(u) = (0..m).find(|&u| !comparison.map().contains(&u)) {
        return Err(Error::outside("ω ∘ (sf, 1) is not surjective", vec![u]));
    }
    Ok(SplitAbelianization {
        input: se.clone(),
        rf,
        dp,
        omega,
        psi,
        theta,
        comparison,
        groups,
        verified: Verified { regular_pushout: true, group_laws: true, star_identity: true },
    })
}

/// Homomorphisms `d: R[g] -> A` with `d(x,x) = tg(x)` and `d(x, tg(x)) = x`.
pub fn find_fiber_subtraction(se: &SplitEpi, caps: &Caps) -> Result<Vec<Homomorphism>> {
    let a = se.domain();
    let n = a.size();
    let rg = kernel_pair_algebra(&se.f)?;
    let mut search = HomSearch::new(rg.alg.clone(), a.clone())?;
    for x in 0..n {
        let base = se.retraction(x);
        search.fix(rg.local(x * n + x).expect("diagonal"), base);
        search.fix(rg.local(x * n + base).expect("pair in R[g]"), x);
    }
    search.run(caps)
}

/// Morphisms `h: (f,s) -> (g,t)` in the fiber over `Y` checked against
/// `Dp[f]`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct UniversalityReport {
    pub targets: Vec<String>,
    pub morphisms: usize,
    /// `(target, h)` for every `h` without a unique compatible factorization.
    pub failures: Vec<(String, Vec<usize>)>,
}

impl UniversalityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Abelian split epis over `Y` built from `Y`, `Y × Y`, `X` and `Dp[f]`,
/// keeping those with exactly one fiber subtraction.
pub fn comparison_targets(sa: &SplitAbelianization, caps: &Caps) -> Result<Vec<(String, SplitEpi)>> {
    let y = sa.input.codomain().clone();
    let ny = y.size();
    let yy = Arc::new(product(&y, &y)?);
    let p0 = Homomorphism::new(yy.clone(), y.clone(), (0..ny * ny).map(|e| e / ny).collect())?;
    let diag = Homomorphism::new(y.clone(), yy, (0..ny).map(|b| b * ny + b).collect())?;
    let candidates = vec![
        ("Y".to_string(), SplitEpi::identity(y.clone())),
        ("YxY".to_string(), SplitEpi::new(p0, diag)?),
        ("X".to_string(), sa.input.clone()),
        ("Dp[f]".to_string(), sa.as_split_epi()),
    ];
    let mut out = Vec::new();
    for (name, se) in candidates {
        if find_fiber_subtraction(&se, caps)?.len() == 1 {
            out.push((name, se));
        }
    }
    Ok(out)
}

/// For each target `(g,t)` and each `h: X -> A` with `gh = f`, `hs = t`,
/// finds the unique `k: Dp[f] -> A` with `k ∘ c = h`, and checks
/// `gk = ψ` and `kθ = t`.
pub fn verify_universality(
    sa: &SplitAbelianization,
    targets: &[(String, SplitEpi)],
    caps: &Caps,
) -> Result<UniversalityReport> {
    let x = sa.input.domain();
    let y = sa.input.codomain();
    let mut report = UniversalityReport::default();
    for (name, target) in targets {
        if target.codomain().size() != y.size() || **target.codomain() != **y {
            return Err(Error::Invalid(format!("target {name} lives over a different base")));
        }
        report.targets.push(name.clone());
        let a = target.domain();
        let mut search = HomSearch::new(x.clone(), a.clone())?;
        for e in 0..x.size() {
            let fe = sa.input.f.apply(e);
            search.restrict(e, |v| target.f.apply(v) == fe);
        }
        for b in 0..y.size() {
            search.fix(sa.input.s.apply(b), target.s.apply(b));
        }
        for h in search.run(caps)? {
            report.morphisms += 1;
            let mut ks = HomSearch::new(sa.dp.clone(), a.clone())?;
            for e in 0..x.size() {
                ks.fix(sa.comparison.apply(e), h.apply(e));
            }
            let ks = ks.run(caps)?;
            let ok = ks.len() == 1 && {
                let k = &ks[0];
                (0..sa.size()).all(|u| target.f.apply(k.apply(u)) == sa.psi.apply(u))
                    && (0..y.size()).all(|b| k.apply(sa.theta.apply(b)) == target.s.apply(b))
            };
            if !ok {
                report.failures.push((name.clone(), h.map().to_vec()));
            }
        }
    }
    Ok(report)
}

/// `X ×_Y A` for two split epis over the same base; used to build
/// fiber products in the category of points.
pub fn fiber_product(f: &SplitEpi, g: &SplitEpi) -> Result<Embedded> {
    pullback(&f.f, &g.f)
}
