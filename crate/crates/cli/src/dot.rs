use std::fmt::Write;

use gummcalc::congruence::CongruenceLattice;
use gummcalc::ReflexiveGraph;

fn block_label(p: &gummcalc::Partition) -> String {
    serde_json::to_string(&p.blocks()).expect("blocks serialize")
}

/// Hasse diagram of a congruence lattice, bottom first, nodes in canonical
/// order.
pub fn lattice_dot(lat: &CongruenceLattice) -> String {
    let mut s = String::from("digraph congruences {\n  rankdir=BT;\n  node [shape=box];\n");
    for (i, c) in lat.elements().iter().enumerate() {
        writeln!(s, "  c{i} [label=\"{}\"];", block_label(c.partition())).unwrap();
    }
    for (lo, hi) in lat.hasse_edges() {
        writeln!(s, "  c{lo} -> c{hi};").unwrap();
    }
    s.push_str("}\n");
    s
}

/// Objects of `X0` as nodes and each arrow `a` as an edge `d0 a -> d1 a`;
/// identities are dashed.
pub fn graph_dot(g: &ReflexiveGraph) -> String {
    let mut s = String::from("digraph reflexive_graph {\n");
    for x in 0..g.x0.size() {
        writeln!(s, "  o{x} [label=\"{x}\"];").unwrap();
    }
    for a in 0..g.x1.size() {
        let style = if g.s0.map().contains(&a) { ", style=dashed" } else { "" };
        writeln!(s, "  o{} -> o{} [label=\"{a}\"{style}];", g.d0.apply(a), g.d1.apply(a)).unwrap();
    }
    s.push_str("}\n");
    s
}
