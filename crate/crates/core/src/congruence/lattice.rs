use std::collections::{HashMap, HashSet};

use super::{congruence_generated, equivalence_join, meet, Congruence, Partition};
use crate::algebra::FiniteAlgebra;
use crate::caps::Caps;
use crate::error::{Error, Result};

/// `Con(A)` in canonical order (`Δ` first, `∇` last).
#[derive(Debug, Clone)]
pub struct CongruenceLattice {
    elements: Vec<Congruence>,
    index: HashMap<Vec<usize>, usize>,
}

impl CongruenceLattice {
    fn from_set(mut elements: Vec<Congruence>) -> Self {
        elements.sort_by(|a, b| a.canonical_cmp(b));
        let index = elements.iter().enumerate().map(|(i, c)| (c.reps().to_vec(), i)).collect();
        CongruenceLattice { elements, index }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Congruence] {
        &self.elements
    }

    pub fn get(&self, i: usize) -> &Congruence {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.index.get(p.reps()).copied()
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.elements.len() - 1
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.index_of(&meet(&self.elements[i], &self.elements[j])).expect("meet stays in Con(A)")
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        self.index_of(&equivalence_join(&self.elements[i], &self.elements[j]))
            .expect("join stays in Con(A)")
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.elements[i].leq(&self.elements[j])
    }

    /// `len × len` table of joins, row-major.
    pub fn join_table(&self) -> Vec<usize> {
        let n = self.len();
        let mut t = vec![0; n * n];
        for i in 0..n {
            for j in i..n {
                let k = self.join(i, j);
                t[i * n + j] = k;
                t[j * n + i] = k;
            }
        }
        t
    }

    /// `len × len` table of meets, row-major.
    pub fn meet_table(&self) -> Vec<usize> {
        let n = self.len();
        let mut t = vec![0; n * n];
        for i in 0..n {
            for j in i..n {
                let k = self.meet(i, j);
                t[i * n + j] = k;
                t[j * n + i] = k;
            }
        }
        t
    }

    /// Covering pairs `(lower, upper)` of the Hasse diagram.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j || !self.leq(i, j) {
                    continue;
                }
                let covered = !(0..n).any(|k| k != i && k != j && self.leq(i, k) && self.leq(k, j));
                if covered {
                    edges.push((i, j));
                }
            }
        }
        edges
    }
}

/// Join-closure of `Δ` and all principal congruences.
pub fn all_congruences(a: &FiniteAlgebra, caps: &Caps) -> Result<CongruenceLattice> {
    let n = a.size();
    if n > caps.lattice_size {
        return Err(Error::cap(format!("congruence lattice of a {n}-element algebra"), caps.lattice_size as u64));
    }
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut elements = Vec::new();
    let bottom = Congruence::discrete(a);
    seen.insert(bottom.reps().to_vec());
    elements.push(bottom);
    let mut principals: Vec<Congruence> = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            let c = congruence_generated(a, &[(x, y)]);
            if seen.insert(c.reps().to_vec()) {
                if elements.len() >= caps.max_congruences {
                    return Err(Error::cap("number of congruences", caps.max_congruences as u64));
                }
                principals.push(c.clone());
                elements.push(c);
            }
        }
    }
    let mut work: Vec<usize> = (1..elements.len()).collect();
    while let Some(i) = work.pop() {
        for p in &principals {
            let j = Congruence::from_partition_unchecked(equivalence_join(&elements[i], p));
            if seen.insert(j.reps().to_vec()) {
                if elements.len() >= caps.max_congruences {
                    return Err(Error::cap("number of congruences", caps.max_congruences as u64));
                }
                elements.push(j);
                work.push(elements.len() - 1);
            }
        }
    }
    Ok(CongruenceLattice::from_set(elements))
}
