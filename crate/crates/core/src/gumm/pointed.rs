use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{product, subalgebras_containing, Embedded, FiniteAlgebra, HomSearch, Homomorphism};
use crate::caps::Caps;
use crate::congruence::{all_congruences, meet, Partition};
use crate::error::{Error, Result};

/// `a∘0 = 0∘a` and `υ(a∘0) = a` for all `a`.
pub fn check_hex(a: &FiniteAlgebra, circ: &str, upsilon: &str) -> Result<bool> {
    let zero = a.require_point()?;
    let c = a.op_checked(circ, 2)?;
    let u = a.op_checked(upsilon, 1)?;
    let n = a.size();
    Ok((0..n).all(|x| {
        let x0 = c.table[x * n + zero];
        x0 == c.table[zero * n + x] && u.table[x0] == x
    }))
}

/// `d(a,a) = 0` and `ε(d(a,0)) = a` for all `a`.
pub fn check_hypo_terms(a: &FiniteAlgebra, d: &str, epsilon: &str) -> Result<bool> {
    let zero = a.require_point()?;
    let dop = a.op_checked(d, 2)?;
    let e = a.op_checked(epsilon, 1)?;
    let n = a.size();
    Ok((0..n).all(|x| dop.table[x * n + x] == zero && e.table[dop.table[x * n + zero]] == x))
}

/// A punctual relation `W ≤ X × Z` containing `X×{0}` and `{0}×Z`, with
/// projections `f`, `g` and sections `s = (1, 0)`, `t = (0, 1)`.
#[derive(Debug, Clone)]
pub struct PunctualSpan {
    pub w: Embedded,
    pub x: Arc<FiniteAlgebra>,
    pub z: Arc<FiniteAlgebra>,
    pub f: Homomorphism,
    pub s: Homomorphism,
    pub g: Homomorphism,
    pub t: Homomorphism,
}

impl PunctualSpan {
    fn build(x: &Arc<FiniteAlgebra>, z: &Arc<FiniteAlgebra>, prod: &FiniteAlgebra, elems: &[usize]) -> Result<Self> {
        let nz = z.size();
        let (x0, z0) = (x.require_point()?, z.require_point()?);
        let w = prod.restrict(elems, format!("W<{}x{}", x.name(), z.name()))?;
        let wa = w.alg.clone();
        let fmap = w.elems.iter().map(|&e| e / nz).collect();
        let gmap = w.elems.iter().map(|&e| e % nz).collect();
        let local = |e: usize| w.local(e).ok_or_else(|| Error::Invalid("relation misses its sections".into()));
        let smap = (0..x.size()).map(|a| local(a * nz + z0)).collect::<Result<Vec<_>>>()?;
        let tmap = (0..nz).map(|b| local(x0 * nz + b)).collect::<Result<Vec<_>>>()?;
        Ok(PunctualSpan {
            f: Homomorphism::new(wa.clone(), x.clone(), fmap)?,
            g: Homomorphism::new(wa.clone(), z.clone(), gmap)?,
            s: Homomorphism::new(x.clone(), wa.clone(), smap)?,
            t: Homomorphism::new(z.clone(), wa, tmap)?,
            w,
            x: x.clone(),
            z: z.clone(),
        })
    }

    /// The pairs `(x, z)` making up `W`, in local order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let nz = self.z.size();
        self.w.elems.iter().map(|&e| (e / nz, e % nz)).collect()
    }

    fn kernels(&self) -> (Partition, Partition) {
        (Partition::from_labels(self.f.map()), Partition::from_labels(self.g.map()))
    }

    /// `w ~ w'` iff `t(g w) T t(g w')`.
    fn pulled_back(&self, t_rel: &Partition) -> Partition {
        let labels: Vec<usize> = self.g.map().iter().map(|&z| t_rel.rep(self.t.apply(z))).collect();
        Partition::from_labels(&labels)
    }
}

/// Every punctual relation between pointed `x` and `z`, ordered by element
/// list.
pub fn enumerate_punctual_relations(x: &Arc<FiniteAlgebra>, z: &Arc<FiniteAlgebra>, caps: &Caps) -> Result<Vec<PunctualSpan>> {
    let (x0, z0) = (x.require_point()?, z.require_point()?);
    let prod = product(x, z)?;
    let nz = z.size();
    let mut cross: Vec<usize> = (0..x.size()).map(|a| a * nz + z0).collect();
    cross.extend((0..nz).map(|b| x0 * nz + b));
    subalgebras_containing(&prod, &cross, caps.enumeration)?
        .iter()
        .map(|elems| PunctualSpan::build(x, z, &prod, elems))
        .collect()
}

fn check_on_w(span: &PunctualSpan, t_rel: &Partition) -> Result<()> {
    if t_rel.size() != span.w.len() {
        return Err(Error::Invalid("congruence does not live on W".into()));
    }
    Ok(())
}

/// `R[f] ∩ g⁻¹(t⁻¹(T)) ⊆ T`, given `R[f] ∧ R[g] ≤ T`.
pub fn check_hyperextensible_instance(span: &PunctualSpan, t_rel: &Partition) -> Result<bool> {
    check_on_w(span, t_rel)?;
    let (rf, rg) = span.kernels();
    if !meet(&rf, &rg).leq(t_rel) {
        return Err(Error::Precondition("R[f] ∧ R[g] is not contained in T".into()));
    }
    Ok(meet(&rf, &span.pulled_back(t_rel)).leq(t_rel))
}

fn hypo_pre(span: &PunctualSpan, t_rel: &Partition) -> Result<Partition> {
    check_on_w(span, t_rel)?;
    let (rf, rg) = span.kernels();
    if !meet(&rf, &rg).leq(t_rel) || !t_rel.leq(&rf) {
        return Err(Error::Precondition("need R[f] ∧ R[g] ≤ T ≤ R[f]".into()));
    }
    Ok(span.pulled_back(t_rel))
}

/// `T ⊆ g⁻¹(t⁻¹(T))`, given `R[f] ∧ R[g] ≤ T ≤ R[f]`.
pub fn check_hypoextensible_instance(span: &PunctualSpan, t_rel: &Partition) -> Result<bool> {
    let pulled = hypo_pre(span, t_rel)?;
    Ok(t_rel.leq(&pulled))
}

/// `T = R[f] ∩ g⁻¹(t⁻¹(T))`, given `R[f] ∧ R[g] ≤ T ≤ R[f]`.
pub fn check_punctually_cm_instance(span: &PunctualSpan, t_rel: &Partition) -> Result<bool> {
    let pulled = hypo_pre(span, t_rel)?;
    let rf = Partition::from_labels(span.f.map());
    Ok(meet(&rf, &pulled) == *t_rel)
}

/// `g` is the only homomorphism `h: W -> Z` with `h t = 1` and `h s = 0`.
pub fn check_cokernel_property(span: &PunctualSpan, caps: &Caps) -> Result<bool> {
    let z0 = span.z.require_point()?;
    let mut search = HomSearch::new(span.w.alg.clone(), span.z.clone())?;
    for b in 0..span.z.size() {
        search.fix(span.t.apply(b), b);
    }
    for a in 0..span.x.size() {
        search.fix(span.s.apply(a), z0);
    }
    let found = search.run(caps)?;
    Ok(found.len() == 1 && found[0].map() == span.g.map())
}

/// Aggregate of every instance check over all punctual relations.
#[derive(Debug, Clone, Default, Serialize)]
pub struct PunctualScan {
    pub relations: usize,
    pub hyper_instances: usize,
    pub hypo_instances: usize,
    /// `(relation index, T)` for each failing instance.
    pub hyper_failures: Vec<(usize, Partition)>,
    pub hypo_failures: Vec<(usize, Partition)>,
    pub cm_failures: Vec<(usize, Partition)>,
    pub cokernel_failures: Vec<usize>,
}

impl PunctualScan {
    pub fn passed(&self) -> bool {
        self.hyper_failures.is_empty()
            && self.hypo_failures.is_empty()
            && self.cm_failures.is_empty()
            && self.cokernel_failures.is_empty()
    }
}

pub fn scan_punctual(x: &Arc<FiniteAlgebra>, z: &Arc<FiniteAlgebra>, caps: &Caps) -> Result<PunctualScan> {
    let spans = enumerate_punctual_relations(x, z, caps)?;
    let mut scan = PunctualScan { relations: spans.len(), ..Default::default() };
    for (i, span) in spans.iter().enumerate() {
        let rf = Partition::from_labels(span.f.map());
        for c in all_congruences(&span.w.alg, caps)?.elements() {
            scan.hyper_instances += 1;
            if !check_hyperextensible_instance(span, c)? {
                scan.hyper_failures.push((i, c.partition().clone()));
            }
            if c.leq(&rf) {
                scan.hypo_instances += 1;
                if !check_hypoextensible_instance(span, c)? {
                    scan.hypo_failures.push((i, c.partition().clone()));
                }
                if !check_punctually_cm_instance(span, c)? {
                    scan.cm_failures.push((i, c.partition().clone()));
                }
            }
        }
        if !check_cokernel_property(span, caps)? {
            scan.cokernel_failures.push(i);
        }
    }
    Ok(scan)
}
