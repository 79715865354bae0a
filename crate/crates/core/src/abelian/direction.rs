use std::sync::Arc;

use serde::Serialize;

use super::split::{chain_groups, fibers_of, induced_on_classes, FiberGroups};
use crate::algebra::{kernel_pair, kernel_pair_algebra, quotient, Embedded, FiniteAlgebra, Homomorphism};
use crate::caps::Caps;
use crate::congruence::congruence_generated;
use crate::connector::centralize;
use crate::error::{Error, Result};

/// The bundle `A_f = R[f] / Cg{((y,z),(x,p(x,y,z)))}` over `Y`.
#[derive(Debug, Clone)]
pub struct Direction {
    pub f: Homomorphism,
    pub rf: Embedded,
    pub a_f: Arc<FiniteAlgebra>,
    /// `R[f] -> A_f`, the class of a pair being its vector.
    pub vec: Homomorphism,
    pub psi: Homomorphism,
    pub zero: Homomorphism,
    pub groups: FiberGroups,
}

#[derive(Debug, Clone, Serialize)]
pub struct DirectionSummary {
    pub size: usize,
    pub class_map: Vec<usize>,
    pub psi: Vec<usize>,
    pub zero: Vec<usize>,
    pub tables: FiberGroups,
}

impl Direction {
    /// The vector from `a` to `b`.
    pub fn arrow(&self, a: usize, b: usize) -> usize {
        let n = self.f.source().size();
        self.vec.apply(self.rf.local(a * n + b).expect("pair in R[f]"))
    }

    pub fn size(&self) -> usize {
        self.a_f.size()
    }

    pub fn summary(&self) -> DirectionSummary {
        DirectionSummary {
            size: self.size(),
            class_map: self.vec.map().to_vec(),
            psi: self.psi.map().to_vec(),
            zero: self.zero.map().to_vec(),
            tables: self.groups.clone(),
        }
    }
}

pub fn direction(f: &Homomorphism, caps: &Caps) -> Result<Direction> {
    if !f.is_surjective() {
        return Err(Error::Precondition("f is not surjective".into()));
    }
    let x = f.source();
    let y = f.target();
    let n = x.size();
    let kf = kernel_pair(f);
    let conn = centralize(x, &kf, &kf, caps)?
        .ok_or_else(|| Error::Precondition("no connector on (R[f], R[f])".into()))?;
    let rf = kernel_pair_algebra(f)?;
    if rf.len() > caps.generation_size {
        return Err(Error::cap("R[f] congruence generation", caps.generation_size as u64));
    }
    let local = |a: usize, b: usize| rf.local(a * n + b).expect("pair in R[f]");
    let fibers = fibers_of(f);
    let mut pairs = Vec::new();
    for fiber in &fibers {
        for &a in fiber {
            for &b in fiber {
                for &c in fiber {
                    let p = conn.apply(a, b, c).expect("chain inside one fiber");
                    pairs.push((local(b, c), local(a, p)));
                }
            }
        }
    }
    let cg = congruence_generated(&rf.alg, &pairs);
    let (a_f, vec) = quotient(&rf.alg, &cg)?;
    let psi = induced_on_classes(&vec, y, |e| f.apply(rf.elems[e] / n))?;
    let mut zero_map = Vec::with_capacity(y.size());
    for (b, fiber) in fibers.iter().enumerate() {
        let classes: Vec<usize> = fiber.iter().map(|&a| vec.apply(local(a, a))).collect();
        if classes.iter().any(|&c| c != classes[0]) {
            return Err(Error::outside("zero vector is ill-defined", vec![b]));
        }
        zero_map.push(classes[0]);
    }
    let zero = Homomorphism::new(y.clone(), a_f.clone(), zero_map)?;
    let w = |a: usize, b: usize| vec.apply(local(a, b));
    let units = zero.map().to_vec();
    let groups = chain_groups(a_f.size(), &fibers, units, w, |u| psi.apply(u))?;
    Ok(Direction { f: f.clone(), rf, a_f, vec, psi, zero, groups })
}
