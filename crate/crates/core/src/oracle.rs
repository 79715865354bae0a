//! Naive reference implementations for cross-checking the fast paths.
//!
//! Nothing here calls the search or closure code elsewhere in the crate.

use crate::algebra::FiniteAlgebra;
use crate::congruence::Partition;
use crate::error::{Error, Result};

const PARTITION_CAP: u64 = 100_000;
const FUNCTION_CAP: u64 = 10_000_000;
const HOM_CAP: u64 = 1_000_000;

/// Every partition of `{0..n-1}` via restricted growth strings, in
/// canonical order.
pub fn oracle_all_partitions(n: usize) -> Result<Vec<Partition>> {
    if bell(n) > PARTITION_CAP {
        return Err(Error::cap(format!("Bell({n})"), PARTITION_CAP));
    }
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    fn rec(pos: usize, max: usize, rgs: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if pos == rgs.len() {
            out.push(Partition::from_labels(rgs));
            return;
        }
        for v in 0..=max + 1 {
            rgs[pos] = v;
            rec(pos + 1, max.max(v), rgs, out);
        }
    }
    if n == 0 {
        return Ok(vec![Partition::discrete(0)]);
    }
    rec(1, 0, &mut rgs, &mut out);
    out.sort_by(|a, b| a.canonical_cmp(b));
    Ok(out)
}

pub fn bell(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().expect("nonempty")];
        for &v in &row {
            let last = *next.last().expect("nonempty");
            next.push(last.saturating_add(v));
        }
        row = next;
    }
    row[0]
}

/// Compatibility by comparing every pair of componentwise related tuples.
pub fn oracle_is_compatible(a: &FiniteAlgebra, p: &Partition) -> bool {
    let n = a.size();
    for (k, op) in a.operations().iter().enumerate() {
        let count = n.pow(op.arity as u32);
        let tuples: Vec<Vec<usize>> = (0..count).map(|c| decode(c, n, op.arity)).collect();
        for u in &tuples {
            for v in &tuples {
                if u.iter().zip(v).all(|(&x, &y)| p.related(x, y)) && !p.related(a.apply(k, u), a.apply(k, v)) {
                    return false;
                }
            }
        }
    }
    true
}

fn decode(mut code: usize, n: usize, arity: usize) -> Vec<usize> {
    let mut t = vec![0; arity];
    for slot in (0..arity).rev() {
        t[slot] = code % n;
        code /= n;
    }
    t
}

pub fn oracle_all_congruences(a: &FiniteAlgebra) -> Result<Vec<Partition>> {
    Ok(oracle_all_partitions(a.size())?.into_iter().filter(|p| oracle_is_compatible(a, p)).collect())
}

/// Meet of all congruences containing `pairs`.
pub fn oracle_least_congruence(a: &FiniteAlgebra, pairs: &[(usize, usize)]) -> Result<Partition> {
    let all = oracle_all_congruences(a)?;
    let containing: Vec<&Partition> =
        all.iter().filter(|p| pairs.iter().all(|&(x, y)| p.related(x, y))).collect();
    let n = a.size();
    let labels: Vec<Vec<usize>> = (0..n).map(|i| containing.iter().map(|p| p.rep(i)).collect()).collect();
    let label_refs: Vec<&Vec<usize>> = labels.iter().collect();
    Ok(Partition::from_labels(&label_refs))
}

/// Every table `A^k -> A` (length `n^k`) agreeing with `fixed` where it is
/// `Some`, filtered by `pred`. Tables come out in lexicographic order.
pub fn oracle_all_functions(
    n: usize,
    k: usize,
    fixed: &[Option<usize>],
    mut pred: impl FnMut(&[usize]) -> bool,
) -> Result<Vec<Vec<usize>>> {
    let len = n.pow(k as u32);
    if fixed.len() != len && !fixed.is_empty() {
        return Err(Error::Invalid("fixed entries must cover the whole table".into()));
    }
    let free: Vec<usize> = (0..len).filter(|&i| fixed.get(i).map_or(true, |f| f.is_none())).collect();
    let total = (n as f64).powi(free.len() as i32);
    if total > FUNCTION_CAP as f64 {
        return Err(Error::cap("oracle function enumeration", FUNCTION_CAP));
    }
    let mut table: Vec<usize> = (0..len).map(|i| fixed.get(i).copied().flatten().unwrap_or(0)).collect();
    let mut out = Vec::new();
    loop {
        if pred(&table) {
            out.push(table.clone());
        }
        let mut pos = free.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            let slot = free[pos];
            table[slot] += 1;
            if table[slot] < n {
                break;
            }
            table[slot] = 0;
        }
    }
}

/// Homomorphism property by direct comparison on every tuple.
pub fn oracle_is_homomorphism(a: &FiniteAlgebra, b: &FiniteAlgebra, map: &[usize]) -> bool {
    let n = a.size();
    a.operations().iter().enumerate().all(|(k, op)| {
        let Some(kb) = b.operations().iter().position(|o| o.name == op.name) else { return true };
        (0..n.pow(op.arity as u32)).all(|c| {
            let t = decode(c, n, op.arity);
            let image: Vec<usize> = t.iter().map(|&x| map[x]).collect();
            map[a.apply(k, &t)] == b.apply(kb, &image)
        })
    })
}

/// Every homomorphism `a -> b` by filtering all functions.
pub fn oracle_all_homomorphisms(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<Vec<Vec<usize>>> {
    if (b.size() as f64).powi(a.size() as i32) > HOM_CAP as f64 {
        return Err(Error::cap("oracle homomorphism enumeration", HOM_CAP));
    }
    let mut out = Vec::new();
    let mut map = vec![0; a.size()];
    loop {
        if oracle_is_homomorphism(a, b, &map) {
            out.push(map.clone());
        }
        let mut pos = map.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            map[pos] += 1;
            if map[pos] < b.size() {
                break;
            }
            map[pos] = 0;
        }
    }
}

/// Cosets of the derived subgroup of the group whose multiplication is
/// the binary operation `op`. Returns the coset partition; its number of
/// blocks is the order of the abelianization.
pub fn oracle_group_abelianization(a: &FiniteAlgebra, op: &str) -> Result<Partition> {
    let n = a.size();
    let mul_op = a.op(op).ok_or_else(|| Error::UnknownOperation(op.into()))?;
    if mul_op.arity != 2 {
        return Err(Error::NotGroup(format!("`{op}` is not binary")));
    }
    let m = |x: usize, y: usize| mul_op.table[x * n + y];
    let e = (0..n)
        .find(|&e| (0..n).all(|x| m(e, x) == x && m(x, e) == x))
        .ok_or_else(|| Error::NotGroup("no identity".into()))?;
    let mut inv = vec![0; n];
    for x in 0..n {
        inv[x] = (0..n).find(|&y| m(x, y) == e && m(y, x) == e).ok_or_else(|| Error::NotGroup(format!("{x} has no inverse")))?;
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if m(m(x, y), z) != m(x, m(y, z)) {
                    return Err(Error::NotGroup(format!("not associative at ({x}, {y}, {z})")));
                }
            }
        }
    }
    let mut derived = vec![false; n];
    derived[e] = true;
    for x in 0..n {
        for y in 0..n {
            derived[m(m(inv[x], inv[y]), m(x, y))] = true;
        }
    }
    loop {
        let members: Vec<usize> = (0..n).filter(|&x| derived[x]).collect();
        let mut grew = false;
        for &x in &members {
            for &y in &members {
                let z = m(x, y);
                if !derived[z] {
                    derived[z] = true;
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    // x ~ y iff x^{-1} y lies in the derived subgroup.
    let labels: Vec<usize> = (0..n).map(|x| (0..n).find(|&y| derived[m(inv[y], x)]).expect("coset")).collect();
    Ok(Partition::from_labels(&labels))
}
