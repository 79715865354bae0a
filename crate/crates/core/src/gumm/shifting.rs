use serde::Serialize;

use crate::algebra::FiniteAlgebra;
use crate::caps::Caps;
use crate::congruence::{all_congruences, meet, CongruenceLattice, Partition};
use crate::error::{Error, Result};

/// A configuration `x S y`, `x' S y'`, `x R x'`, `y R y'`, `x T x'` with
/// `y` and `y'` not `T`-related.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShiftingWitness {
    pub t: Partition,
    pub s: Partition,
    pub r: Partition,
    /// `(x, y, x', y')`.
    pub tuple: [usize; 4],
}

/// Members of each element's block, indexed by element.
struct Blocks(Vec<Vec<usize>>);

impl Blocks {
    fn of(p: &Partition) -> Self {
        let mut by_rep: Vec<Vec<usize>> = vec![Vec::new(); p.size()];
        for i in 0..p.size() {
            by_rep[p.rep(i)].push(i);
        }
        Blocks((0..p.size()).map(|i| by_rep[p.rep(i)].clone()).collect())
    }
}

fn require_meet_below(t: &Partition, s: &Partition, r: &Partition) -> Result<()> {
    if t.size() != s.size() || s.size() != r.size() {
        return Err(Error::Invalid("relations live on different universes".into()));
    }
    if !meet(r, s).leq(t) {
        return Err(Error::Precondition("R ∧ S is not contained in T".into()));
    }
    Ok(())
}

/// The lexicographically least tuple violating the Shifting Lemma for
/// `(T, S, R)`, or `None` when it holds.
pub fn check_shifting_triple(t: &Partition, s: &Partition, r: &Partition) -> Result<Option<ShiftingWitness>> {
    require_meet_below(t, s, r)?;
    Ok(shifting_tuple(t, &Blocks::of(s), r).map(|tuple| ShiftingWitness {
        t: t.clone(),
        s: s.clone(),
        r: r.clone(),
        tuple,
    }))
}

fn shifting_tuple(t: &Partition, sb: &Blocks, r: &Partition) -> Option<[usize; 4]> {
    let n = t.size();
    for x in 0..n {
        for &y in &sb.0[x] {
            for x2 in (0..n).filter(|&x2| r.related(x, x2) && t.related(x, x2)) {
                for &y2 in &sb.0[x2] {
                    if r.related(y, y2) && !t.related(y, y2) {
                        return Some([x, y, x2, y2]);
                    }
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone, Serialize)]
pub struct ShiftingReport {
    pub congruences: usize,
    /// Triples `(T, S, R)` with `R ∧ S ≤ T`.
    pub admissible: usize,
    /// One witness per failing triple, least tuple first (ties broken by
    /// the canonical positions of `T`, `S`, `R`).
    pub failures: Vec<ShiftingWitness>,
}

impl ShiftingReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn canonical_witness(&self) -> Option<&ShiftingWitness> {
        self.failures.first()
    }
}

pub fn check_shifting_all(a: &FiniteAlgebra, caps: &Caps) -> Result<ShiftingReport> {
    let lat = all_congruences(a, caps)?;
    Ok(shifting_over(&lat))
}

pub fn shifting_over(lat: &CongruenceLattice) -> ShiftingReport {
    let m = lat.len();
    let meets = lat.meet_table();
    let blocks: Vec<Blocks> = lat.elements().iter().map(|c| Blocks::of(c)).collect();
    let mut admissible = 0;
    let mut failures = Vec::new();
    for ti in 0..m {
        for si in 0..m {
            for ri in 0..m {
                if !lat.leq(meets[ri * m + si], ti) {
                    continue;
                }
                admissible += 1;
                if let Some(tuple) = shifting_tuple(lat.get(ti), &blocks[si], lat.get(ri)) {
                    failures.push((tuple, ti, si, ri));
                }
            }
        }
    }
    failures.sort();
    ShiftingReport {
        congruences: m,
        admissible,
        failures: failures
            .into_iter()
            .map(|(tuple, ti, si, ri)| ShiftingWitness {
                t: lat.get(ti).partition().clone(),
                s: lat.get(si).partition().clone(),
                r: lat.get(ri).partition().clone(),
                tuple,
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ModularityReport {
    pub congruences: usize,
    /// Triples with `T ≤ R`.
    pub checked: usize,
    /// First triple `(T, S, R)` in canonical order with
    /// `(T ∨ S) ∧ R ≠ T ∨ (S ∧ R)`.
    pub failure: Option<[Partition; 3]>,
}

impl ModularityReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

pub fn check_lattice_modular(a: &FiniteAlgebra, caps: &Caps) -> Result<ModularityReport> {
    let lat = all_congruences(a, caps)?;
    Ok(modularity_over(&lat))
}

pub fn modularity_over(lat: &CongruenceLattice) -> ModularityReport {
    let m = lat.len();
    let joins = lat.join_table();
    let meets = lat.meet_table();
    let mut checked = 0;
    for ti in 0..m {
        for ri in 0..m {
            if !lat.leq(ti, ri) {
                continue;
            }
            for si in 0..m {
                checked += 1;
                let lhs = meets[joins[ti * m + si] * m + ri];
                let rhs = joins[ti * m + meets[si * m + ri]];
                if lhs != rhs {
                    return ModularityReport {
                        congruences: m,
                        checked,
                        failure: Some([
                            lat.get(ti).partition().clone(),
                            lat.get(si).partition().clone(),
                            lat.get(ri).partition().clone(),
                        ]),
                    };
                }
            }
        }
    }
    ModularityReport { congruences: m, checked, failure: None }
}

/// Cube configuration violating the dotted edge, as
/// `(x, x̄, t, t̄, x', x̄', t', t̄')`, least first.
///
/// Edges: `S` on `x–x'`, `t–t'`, `x̄–x̄'`, `t̄–t̄'`; `R` on the verticals
/// `x–x̄`, `x'–x̄'`, `t–t̄`, `t'–t̄'`; `T` on `x–t`, `x'–t'`, `x̄'–t̄'`. The
/// conclusion is `x̄ T t̄`. The vertical `t–t̄` carries no label in the
/// usual drawing and is read as an `R`-edge.
pub fn check_cube_lemma(t: &Partition, s: &Partition, r: &Partition) -> Result<Option<[usize; 8]>> {
    require_meet_below(t, s, r)?;
    let (tb, sb, rb) = (Blocks::of(t), Blocks::of(s), Blocks::of(r));
    let n = t.size();
    for x in 0..n {
        for &xb in &rb.0[x] {
            for &tt in &tb.0[x] {
                for &tbar in &rb.0[tt] {
                    if t.related(xb, tbar) {
                        continue;
                    }
                    for &x2 in &sb.0[x] {
                        for &xb2 in rb.0[x2].iter().filter(|&&e| s.related(e, xb)) {
                            for &t2 in sb.0[tt].iter().filter(|&&e| t.related(e, x2)) {
                                for &tb2 in rb.0[t2].iter().filter(|&&e| s.related(e, tbar) && t.related(e, xb2)) {
                                    return Ok(Some([x, xb, tt, tbar, x2, xb2, t2, tb2]));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Serialize)]
pub struct CubeReport {
    pub congruences: usize,
    pub admissible: usize,
    /// `(T, S, R, cube)` for each failing triple, canonical order.
    pub failures: Vec<(Partition, Partition, Partition, [usize; 8])>,
}

pub fn check_cube_all(a: &FiniteAlgebra, caps: &Caps) -> Result<CubeReport> {
    let lat = all_congruences(a, caps)?;
    let m = lat.len();
    let meets = lat.meet_table();
    let mut admissible = 0;
    let mut failures = Vec::new();
    for ti in 0..m {
        for si in 0..m {
            for ri in 0..m {
                if !lat.leq(meets[ri * m + si], ti) {
                    continue;
                }
                admissible += 1;
                let (t, s, r) = (lat.get(ti), lat.get(si), lat.get(ri));
                if let Some(cube) = check_cube_lemma(t, s, r)? {
                    failures.push((t.partition().clone(), s.partition().clone(), r.partition().clone(), cube));
                }
            }
        }
    }
    Ok(CubeReport { congruences: m, admissible, failures })
}
