use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{cube, Embedded, FiniteAlgebra, HomSearch, Homomorphism};
use crate::caps::Caps;
use crate::congruence::{incompatibility, Partition};
use crate::error::{Error, Result};

/// `R ×₁ S`: chains `x R y S z` as a subalgebra of `X³`.
#[derive(Debug, Clone)]
pub struct ChainAlgebra {
    pub x: Arc<FiniteAlgebra>,
    pub r: Partition,
    pub s: Partition,
    pub emb: Embedded,
}

impl ChainAlgebra {
    pub fn new(x: &Arc<FiniteAlgebra>, r: &Partition, s: &Partition, caps: &Caps) -> Result<Self> {
        let n = x.size();
        for p in [r, s] {
            if p.size() != n {
                return Err(Error::Invalid("relation lives on a different universe".into()));
            }
            if let Some(why) = incompatibility(x, p) {
                return Err(Error::NotCongruence(why));
            }
        }
        if n.pow(3) > caps.generation_size {
            return Err(Error::cap("X³ for the chain algebra", caps.generation_size as u64));
        }
        let mut elems = Vec::new();
        for a in 0..n {
            for b in (0..n).filter(|&b| r.related(a, b)) {
                for c in (0..n).filter(|&c| s.related(b, c)) {
                    elems.push((a * n + b) * n + c);
                }
            }
        }
        let emb = cube(x)?.restrict(&elems, format!("{}R1S", x.name()))?;
        Ok(ChainAlgebra { x: x.clone(), r: r.clone(), s: s.clone(), emb })
    }

    pub fn len(&self) -> usize {
        self.emb.len()
    }

    pub fn is_empty(&self) -> bool {
        self.emb.is_empty()
    }

    pub fn alg(&self) -> &Arc<FiniteAlgebra> {
        &self.emb.alg
    }

    pub fn triple(&self, i: usize) -> [usize; 3] {
        let n = self.x.size();
        let e = self.emb.elems[i];
        [e / (n * n), e / n % n, e % n]
    }

    pub fn index(&self, a: usize, b: usize, c: usize) -> Option<usize> {
        let n = self.x.size();
        self.emb.local((a * n + b) * n + c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub pass: bool,
    pub witness: Option<Vec<usize>>,
}

impl Verdict {
    fn from_witness(w: Option<Vec<usize>>) -> Self {
        Verdict { pass: w.is_none(), witness: w }
    }
}

/// A ternary map on chains. Tables need not be homomorphisms, so that
/// broken candidates can still be checked axiom by axiom.
#[derive(Debug, Clone)]
pub struct Preconnector {
    pub chain: Arc<ChainAlgebra>,
    pub table: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConnectorReport {
    pub homomorphism: bool,
    /// `x S p(x,y,z) R z`.
    pub axiom1: Verdict,
    /// `p(x,x,y) = y`, `p(x,y,y) = x`.
    pub axiom2: Verdict,
    /// Left and right associativity.
    pub axiom3: Verdict,
    /// Whether the observed outcomes fit "axioms 1 and 2 imply 3".
    pub implication_holds: bool,
    /// With `p(x,y,y) = x`: `p(x,y,z) = p(x',y,z)` forces `x = x'`.
    /// `None` when the premise fails.
    pub lemma_injective: Option<bool>,
}

impl ConnectorReport {
    pub fn is_connector(&self) -> bool {
        self.homomorphism && self.axiom1.pass && self.axiom2.pass && self.axiom3.pass
    }
}

impl Preconnector {
    pub fn from_table(chain: Arc<ChainAlgebra>, table: Vec<usize>) -> Result<Self> {
        if table.len() != chain.len() {
            return Err(Error::Invalid(format!("table has {} entries, chains {}", table.len(), chain.len())));
        }
        if let Some(&v) = table.iter().find(|&&v| v >= chain.x.size()) {
            return Err(Error::Invalid(format!("value {v} outside the algebra")));
        }
        Ok(Preconnector { chain, table })
    }

    pub fn apply(&self, a: usize, b: usize, c: usize) -> Option<usize> {
        self.chain.index(a, b, c).map(|i| self.table[i])
    }

    pub fn homomorphism(&self) -> Result<Homomorphism> {
        Homomorphism::new(self.chain.alg().clone(), self.chain.x.clone(), self.table.clone())
    }

    fn axiom1(&self) -> Option<Vec<usize>> {
        let ch = &self.chain;
        (0..ch.len()).find_map(|i| {
            let [a, b, c] = ch.triple(i);
            let t = self.table[i];
            (!ch.s.related(a, t) || !ch.r.related(t, c)).then(|| vec![a, b, c])
        })
    }

    fn left_unit(&self) -> Option<Vec<usize>> {
        let n = self.chain.x.size();
        (0..n).flat_map(|a| (0..n).map(move |c| (a, c))).find_map(|(a, c)| match self.apply(a, a, c) {
            Some(v) if v != c => Some(vec![a, a, c]),
            _ => None,
        })
    }

    fn right_unit(&self) -> Option<Vec<usize>> {
        let n = self.chain.x.size();
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).find_map(|(a, b)| match self.apply(a, b, b) {
            Some(v) if v != a => Some(vec![a, b, b]),
            _ => None,
        })
    }

    /// `p(p(x,y,z),z,w) = p(x,y,w)` for `x R y S z S w` and
    /// `p(x,y,p(y,z,w)) = p(x,z,w)` for `x R y R z S w`.
    fn axiom3(&self) -> Option<Vec<usize>> {
        let ch = &self.chain;
        let n = ch.x.size();
        let quads = (0..n).flat_map(|a| (0..n).flat_map(move |b| (0..n).flat_map(move |c| (0..n).map(move |d| [a, b, c, d]))));
        for [a, b, c, d] in quads {
            if ch.r.related(a, b) && ch.s.related(b, c) && ch.s.related(c, d) {
                let inner = self.table[ch.index(a, b, c).expect("chain")];
                let lhs = self.apply(inner, c, d);
                if lhs.is_none() || lhs != self.apply(a, b, d) {
                    return Some(vec![a, b, c, d]);
                }
            }
            if ch.r.related(a, b) && ch.r.related(b, c) && ch.s.related(c, d) {
                let inner = self.table[ch.index(b, c, d).expect("chain")];
                let lhs = self.apply(a, b, inner);
                if lhs.is_none() || lhs != self.apply(a, c, d) {
                    return Some(vec![a, b, c, d]);
                }
            }
        }
        None
    }

    fn lemma_injective(&self) -> Option<bool> {
        if self.right_unit().is_some() {
            return None;
        }
        let ch = &self.chain;
        let n = ch.x.size();
        let mut seen = vec![usize::MAX; n * n * n];
        for i in 0..ch.len() {
            let [a, b, c] = ch.triple(i);
            let key = (self.table[i] * n + b) * n + c;
            if seen[key] != usize::MAX && seen[key] != a {
                return Some(false);
            }
            seen[key] = a;
        }
        Some(true)
    }

    pub fn is_maltsev(&self) -> bool {
        self.left_unit().is_none() && self.right_unit().is_none()
    }
}

pub fn check_connector(pc: &Preconnector) -> ConnectorReport {
    let axiom1 = Verdict::from_witness(pc.axiom1());
    let axiom2 = Verdict::from_witness(pc.left_unit().or_else(|| pc.right_unit()));
    let axiom3 = Verdict::from_witness(pc.axiom3());
    let homomorphism = pc.homomorphism().is_ok();
    let implication_holds = !(homomorphism && axiom1.pass && axiom2.pass) || axiom3.pass;
    ConnectorReport {
        homomorphism,
        axiom1,
        axiom2,
        axiom3,
        implication_holds,
        lemma_injective: pc.lemma_injective(),
    }
}

fn search(chain: &ChainAlgebra) -> Result<HomSearch> {
    let mut search = HomSearch::new(chain.alg().clone(), chain.x.clone())?;
    for i in 0..chain.len() {
        let [a, _, c] = chain.triple(i);
        search.restrict(i, |t| chain.s.related(a, t) && chain.r.related(t, c));
    }
    Ok(search)
}

/// All homomorphisms `R ×₁ S -> X` splitting `ζ`.
pub fn find_preconnectors(x: &Arc<FiniteAlgebra>, r: &Partition, s: &Partition, caps: &Caps) -> Result<Vec<Preconnector>> {
    let chain = Arc::new(ChainAlgebra::new(x, r, s, caps)?);
    Ok(search(&chain)?
        .run(caps)?
        .into_iter()
        .map(|h| Preconnector { chain: chain.clone(), table: h.map().to_vec() })
        .collect())
}

/// Preconnectors satisfying the partial Mal'tsev identities.
pub fn find_maltsev_preconnectors(x: &Arc<FiniteAlgebra>, r: &Partition, s: &Partition, caps: &Caps) -> Result<Vec<Preconnector>> {
    let chain = Arc::new(ChainAlgebra::new(x, r, s, caps)?);
    let mut search = search(&chain)?;
    let n = x.size();
    for a in 0..n {
        for b in 0..n {
            if let Some(i) = chain.index(a, a, b) {
                search.fix(i, b);
            }
            if let Some(i) = chain.index(a, b, b) {
                search.fix(i, a);
            }
        }
    }
    Ok(search
        .run(caps)?
        .into_iter()
        .map(|h| Preconnector { chain: chain.clone(), table: h.map().to_vec() })
        .collect())
}

/// A verified connector between `R` and `S`.
#[derive(Debug, Clone)]
pub struct Connector {
    pub pre: Preconnector,
}

impl Connector {
    pub fn apply(&self, a: usize, b: usize, c: usize) -> Option<usize> {
        self.pre.apply(a, b, c)
    }
}

/// The connector witnessing `[R,S] = 0`, if there is one.
pub fn centralize(x: &Arc<FiniteAlgebra>, r: &Partition, s: &Partition, caps: &Caps) -> Result<Option<Connector>> {
    let mut found = find_maltsev_preconnectors(x, r, s, caps)?;
    if found.len() > 1 {
        return Err(Error::NotUnique(format!("{} Mal'tsev preconnectors", found.len())));
    }
    let Some(pre) = found.pop() else { return Ok(None) };
    let report = check_connector(&pre);
    if let Some(w) = report.axiom3.witness {
        return Err(Error::outside("Mal'tsev preconnector is not associative", w));
    }
    Ok(Some(Connector { pre }))
}
