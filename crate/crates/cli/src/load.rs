use std::fs;
use std::path::Path;
use std::sync::Arc;

use gummcalc::algebra::{parse_algebra, parse_blocks, parse_graph, parse_map, parse_pairs};
use gummcalc::congruence::incompatibility;
use gummcalc::{FiniteAlgebra, Homomorphism, Operation, Partition, ReflexiveGraph, SplitEpi};

use crate::CliError;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn tagged<T>(path: &Path, r: gummcalc::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| match e {
        gummcalc::Error::Malformed(m) => CliError::Usage(format!("{}: malformed document: {m}", path.display())),
        other => CliError::Core(other),
    })
}

pub fn algebra(path: &Path) -> Result<Arc<FiniteAlgebra>, CliError> {
    let text = read(path)?;
    Ok(Arc::new(tagged(path, parse_algebra(&text))?))
}

pub fn graph(path: &Path) -> Result<ReflexiveGraph, CliError> {
    let text = read(path)?;
    tagged(path, parse_graph(&text))
}

pub fn map(path: &Path) -> Result<Vec<usize>, CliError> {
    let text = read(path)?;
    tagged(path, parse_map(&text))
}

pub fn pairs(path: &Path) -> Result<Vec<(usize, usize)>, CliError> {
    let text = read(path)?;
    tagged(path, parse_pairs(&text))
}

pub fn blocks(text: &str, n: usize) -> Result<Partition, CliError> {
    parse_blocks(text, n).map_err(|e| CliError::Usage(format!("block list `{text}`: {e}")))
}

/// The image of `map`, read as a quotient of `x`: the values must be exactly
/// `0..k` and the kernel must be a congruence. Element `v` of the result is
/// the class mapped to `v`.
pub fn base_from_map(x: &FiniteAlgebra, map: &[usize]) -> Result<Arc<FiniteAlgebra>, CliError> {
    if map.len() != x.size() {
        return Err(CliError::Usage(format!("map has {} entries, algebra has {}", map.len(), x.size())));
    }
    let k = map.iter().max().map_or(0, |m| m + 1);
    let mut rep = vec![usize::MAX; k];
    for (i, &v) in map.iter().enumerate() {
        if rep[v] == usize::MAX {
            rep[v] = i;
        }
    }
    if let Some(v) = rep.iter().position(|&r| r == usize::MAX) {
        return Err(CliError::Usage(format!("map misses {v}; pass --base for a non-surjective map")));
    }
    let kernel = Partition::from_labels(map);
    if let Some(why) = incompatibility(x, &kernel) {
        return Err(CliError::Core(gummcalc::Error::NotHomomorphism(format!("kernel of the map is not a congruence: {why}"))));
    }
    let mut ops = Vec::with_capacity(x.operations().len());
    for (idx, op) in x.operations().iter().enumerate() {
        let len = k.pow(op.arity as u32);
        let mut table = Vec::with_capacity(len);
        let mut args = vec![0; op.arity];
        for mut c in 0..len {
            for slot in args.iter_mut().rev() {
                *slot = rep[c % k];
                c /= k;
            }
            table.push(map[x.apply(idx, &args)]);
        }
        ops.push(Operation::new(op.name.clone(), op.arity, table));
    }
    let point = x.point().map(|p| map[p]);
    Ok(Arc::new(FiniteAlgebra::new(format!("{}/ker", x.name()), k, ops, point)?))
}

pub fn base(x: &FiniteAlgebra, map: &[usize], base: Option<&Path>) -> Result<Arc<FiniteAlgebra>, CliError> {
    match base {
        Some(p) => algebra(p),
        None => base_from_map(x, map),
    }
}

pub fn split_epi(
    x: &Arc<FiniteAlgebra>,
    y: &Arc<FiniteAlgebra>,
    epi: Vec<usize>,
    section: Vec<usize>,
) -> Result<SplitEpi, CliError> {
    let f = Homomorphism::new(x.clone(), y.clone(), epi)?;
    let s = Homomorphism::new(y.clone(), x.clone(), section)?;
    Ok(SplitEpi::new(f, s)?)
}
