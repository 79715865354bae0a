use serde::Serialize;

use super::preconnector::{centralize, Connector};
use crate::algebra::{kernel_pair, pullback, Embedded, HomSearch, Homomorphism, ReflexiveGraph};
use crate::caps::Caps;
use crate::error::{Error, Result};

/// A composition `m(α, β) = β.α` on composable pairs `d1 α = d0 β`.
#[derive(Debug, Clone)]
pub struct CategoryStructure {
    pub graph: ReflexiveGraph,
    /// `X1 ×₀ X1`; the pair `(α, β)` sits at ambient index `α*|X1| + β`.
    pub composable: Embedded,
    pub comp: Homomorphism,
    pub associative: bool,
    pub left_cancellable: bool,
    pub right_cancellable: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CategorySummary {
    /// `(α, β, β.α)` for each composable pair.
    pub composition: Vec<(usize, usize, usize)>,
    pub associative: bool,
    pub left_cancellable: bool,
    pub right_cancellable: bool,
}

fn composable(g: &ReflexiveGraph) -> Result<Embedded> {
    pullback(&g.d1, &g.d0)
}

impl CategoryStructure {
    /// Validates a composition table against 1), 1'), 2), 2') and the
    /// homomorphism property.
    pub fn from_table(graph: &ReflexiveGraph, table: Vec<usize>) -> Result<Self> {
        let pb = composable(graph)?;
        let comp = Homomorphism::new(pb.alg.clone(), graph.x1.clone(), table)?;
        let n = graph.x1.size();
        let get = |a: usize, b: usize| pb.local(a * n + b).map(|i| comp.apply(i));
        for (i, &e) in pb.elems.iter().enumerate() {
            let (a, b) = (e / n, e % n);
            let c = comp.apply(i);
            if graph.d0.apply(c) != graph.d0.apply(a) || graph.d1.apply(c) != graph.d1.apply(b) {
                return Err(Error::outside("composite has the wrong ends", vec![a, b]));
            }
        }
        for b in 0..n {
            if get(graph.s0.apply(graph.d0.apply(b)), b) != Some(b) {
                return Err(Error::outside("left identity fails", vec![b]));
            }
            if get(b, graph.s0.apply(graph.d1.apply(b))) != Some(b) {
                return Err(Error::outside("right identity fails", vec![b]));
            }
        }
        let mut associative = true;
        let (mut left_cancellable, mut right_cancellable) = (true, true);
        for (i, &e) in pb.elems.iter().enumerate() {
            let (a, b) = (e / n, e % n);
            let ab = comp.apply(i);
            for c in 0..n {
                if let Some(bc) = get(b, c) {
                    if get(ab, c) != get(a, bc) {
                        associative = false;
                    }
                }
            }
            for (j, &e2) in pb.elems.iter().enumerate() {
                let (a2, b2) = (e2 / n, e2 % n);
                if comp.apply(j) != ab {
                    continue;
                }
                if a == a2 && b != b2 {
                    left_cancellable = false;
                }
                if b == b2 && a != a2 {
                    right_cancellable = false;
                }
            }
        }
        Ok(CategoryStructure {
            graph: graph.clone(),
            composable: pb,
            comp,
            associative,
            left_cancellable,
            right_cancellable,
        })
    }

    /// `β.α`, when `d1 α = d0 β`.
    pub fn compose(&self, a: usize, b: usize) -> Option<usize> {
        let n = self.graph.x1.size();
        self.composable.local(a * n + b).map(|i| self.comp.apply(i))
    }

    pub fn summary(&self) -> CategorySummary {
        let n = self.graph.x1.size();
        CategorySummary {
            composition: self
                .composable
                .elems
                .iter()
                .enumerate()
                .map(|(i, &e)| (e / n, e % n, self.comp.apply(i)))
                .collect(),
            associative: self.associative,
            left_cancellable: self.left_cancellable,
            right_cancellable: self.right_cancellable,
        }
    }
}

/// Every internal category structure on a reflexive graph.
pub fn find_category_structures(g: &ReflexiveGraph, caps: &Caps) -> Result<Vec<CategoryStructure>> {
    let pb = composable(g)?;
    let n = g.x1.size();
    let mut search = HomSearch::new(pb.alg.clone(), g.x1.clone())?;
    for (i, &e) in pb.elems.iter().enumerate() {
        let (a, b) = (e / n, e % n);
        let (src, dst) = (g.d0.apply(a), g.d1.apply(b));
        search.restrict(i, |c| g.d0.apply(c) == src && g.d1.apply(c) == dst);
    }
    for b in 0..n {
        let l = pb.local(g.s0.apply(g.d0.apply(b)) * n + b).expect("identity is composable");
        let r = pb.local(b * n + g.s0.apply(g.d1.apply(b))).expect("identity is composable");
        search.fix(l, b);
        search.fix(r, b);
    }
    search
        .run(caps)?
        .into_iter()
        .map(|h| CategoryStructure::from_table(g, h.map().to_vec()))
        .collect()
}

/// A groupoid assembled from the connector on `(R[d0], R[d1])`.
#[derive(Debug, Clone)]
pub struct Groupoid {
    pub category: CategoryStructure,
    pub connector: Connector,
    pub inverse: Vec<usize>,
    /// `χ(α,β,γ) = α.β⁻¹.γ` on parallel arrows passes the 3×3 interchange;
    /// `None` when some hom-set is too large to scan.
    pub chi_autonomous: Option<bool>,
    /// The category search finds exactly this composition.
    pub agrees_with_category: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupoidSummary {
    pub category: CategorySummary,
    pub inverse: Vec<usize>,
    pub chi_autonomous: Option<bool>,
    pub agrees_with_category: bool,
}

impl Groupoid {
    pub fn summary(&self) -> GroupoidSummary {
        GroupoidSummary {
            category: self.category.summary(),
            inverse: self.inverse.clone(),
            chi_autonomous: self.chi_autonomous,
            agrees_with_category: self.agrees_with_category,
        }
    }
}

/// `m(α,β) = p(β, 1_{d1 α}, α)` and `α⁻¹ = p(1_{d0 α}, α, 1_{d1 α})`.
pub fn find_groupoid_structure(g: &ReflexiveGraph, caps: &Caps) -> Result<Option<Groupoid>> {
    let (r0, r1) = (kernel_pair(&g.d0), kernel_pair(&g.d1));
    let Some(conn) = centralize(&g.x1, &r0, &r1, caps)? else { return Ok(None) };
    let pb = composable(g)?;
    let n = g.x1.size();
    let unit = |x: usize| g.s0.apply(x);
    let mut table = Vec::with_capacity(pb.len());
    for &e in &pb.elems {
        let (a, b) = (e / n, e % n);
        let v = conn
            .apply(b, unit(g.d1.apply(a)), a)
            .ok_or_else(|| Error::outside("composite chain missing", vec![a, b]))?;
        table.push(v);
    }
    let category = CategoryStructure::from_table(g, table)?;
    let mut inverse = Vec::with_capacity(n);
    for a in 0..n {
        let v = conn
            .apply(unit(g.d0.apply(a)), a, unit(g.d1.apply(a)))
            .ok_or_else(|| Error::outside("inverse chain missing", vec![a]))?;
        inverse.push(v);
    }
    Homomorphism::new(g.x1.clone(), g.x1.clone(), inverse.clone())?;
    for a in 0..n {
        let (src, dst) = (g.d0.apply(a), g.d1.apply(a));
        if category.compose(a, inverse[a]) != Some(unit(src)) || category.compose(inverse[a], a) != Some(unit(dst)) {
            return Err(Error::outside("connector inverse is not two-sided", vec![a]));
        }
    }
    let found = find_category_structures(g, caps)?;
    let agrees_with_category = found.len() == 1 && found[0].comp.map() == category.comp.map();
    let chi_autonomous = chi_interchange(&category, &inverse);
    Ok(Some(Groupoid { category, connector: conn, inverse, chi_autonomous, agrees_with_category }))
}

fn chi_interchange(cat: &CategoryStructure, inverse: &[usize]) -> Option<bool> {
    let g = &cat.graph;
    let n = g.x1.size();
    let mut hom_sets: std::collections::BTreeMap<(usize, usize), Vec<usize>> = Default::default();
    for a in 0..n {
        hom_sets.entry((g.d0.apply(a), g.d1.apply(a))).or_default().push(a);
    }
    // α.β⁻¹.γ: first γ, then β⁻¹, then α.
    let chi = |a: usize, b: usize, c: usize| {
        let cb = cat.compose(c, inverse[b]).expect("parallel arrows compose");
        cat.compose(cb, a).expect("parallel arrows compose")
    };
    if hom_sets.values().any(|v| v.len().checked_pow(9).map_or(true, |c| c > 10_000_000)) {
        return None;
    }
    for arrows in hom_sets.values() {
        let k = arrows.len();
        let mut m = [0usize; 9];
        for code in 0..k.pow(9) {
            let mut r = code;
            for slot in m.iter_mut().rev() {
                *slot = arrows[r % k];
                r /= k;
            }
            let rows = chi(chi(m[0], m[1], m[2]), chi(m[3], m[4], m[5]), chi(m[6], m[7], m[8]));
            let cols = chi(chi(m[0], m[3], m[6]), chi(m[1], m[4], m[7]), chi(m[2], m[5], m[8]));
            if rows != cols {
                return Some(false);
            }
        }
    }
    Some(true)
}

/// A morphism of reflexive graphs `h: X -> Y`.
#[derive(Debug, Clone)]
pub struct GraphMorphism {
    pub source: ReflexiveGraph,
    pub target: ReflexiveGraph,
    pub h0: Homomorphism,
    pub h1: Homomorphism,
}

impl GraphMorphism {
    pub fn new(source: ReflexiveGraph, target: ReflexiveGraph, h0: Homomorphism, h1: Homomorphism) -> Result<Self> {
        for a in 0..source.x1.size() {
            if h0.apply(source.d0.apply(a)) != target.d0.apply(h1.apply(a))
                || h0.apply(source.d1.apply(a)) != target.d1.apply(h1.apply(a))
            {
                return Err(Error::Invalid(format!("h does not commute with d0, d1 at arrow {a}")));
            }
        }
        for x in 0..source.x0.size() {
            if h1.apply(source.s0.apply(x)) != target.s0.apply(h0.apply(x)) {
                return Err(Error::Invalid(format!("h does not commute with s0 at {x}")));
            }
        }
        Ok(GraphMorphism { source, target, h0, h1 })
    }
}

/// Lifts a composition along `h` when `γ ↦ (h1 γ, d1 γ)` is bijective onto
/// `Y1 ×_{Y0} X0`; also checks `(h1, d0)` is jointly injective.
pub fn lift_discrete_fibration(h: &GraphMorphism, target: &CategoryStructure) -> Result<CategoryStructure> {
    let (x, y) = (&h.source, &h.target);
    let (n1, n0) = (x.x1.size(), x.x0.size());
    let mut lift = vec![usize::MAX; y.x1.size() * n0];
    for c in 0..n1 {
        let slot = &mut lift[h.h1.apply(c) * n0 + x.d1.apply(c)];
        if *slot != usize::MAX {
            return Err(Error::Precondition(format!("square 1 is not a pullback: arrows {} and {c} collide", *slot)));
        }
        *slot = c;
    }
    for b in 0..y.x1.size() {
        for v in 0..n0 {
            if y.d1.apply(b) == h.h0.apply(v) && lift[b * n0 + v] == usize::MAX {
                return Err(Error::Precondition(format!("square 1 is not a pullback: ({b}, {v}) has no lift")));
            }
        }
    }
    let mut seen = vec![false; y.x1.size() * n0];
    for c in 0..n1 {
        let key = h.h1.apply(c) * n0 + x.d0.apply(c);
        if seen[key] {
            return Err(Error::outside("(h1, d0) is not jointly injective", vec![c]));
        }
        seen[key] = true;
    }
    let pb = composable(x)?;
    let mut table = Vec::with_capacity(pb.len());
    for &e in &pb.elems {
        let (a, b) = (e / n1, e % n1);
        let top = target
            .compose(h.h1.apply(a), h.h1.apply(b))
            .ok_or_else(|| Error::Invalid("target composition is undefined on the image".into()))?;
        table.push(lift[top * n0 + x.d1.apply(b)]);
    }
    CategoryStructure::from_table(x, table).map_err(|e| match e {
        Error::NotHomomorphism(why) => Error::outside(format!("lifted composition is not a homomorphism: {why}"), vec![]),
        other => other,
    })
}
