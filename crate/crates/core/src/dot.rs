//! Graphviz export of a finite system colored by its stationary classes.

use std::fmt::Write;

use crate::decomposition::stabilize;
use crate::topology::FiniteSystem;

const PALETTE: [&str; 8] = [
    "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5",
];

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Nodes are labeled `name|class`. Map edges are solid. Covering pairs
/// `x ≼ y` are dashed edges from `x` to `y`.
pub fn to_dot(sys: &FiniteSystem) -> String {
    let space = sys.space();
    let trace = stabilize(sys);
    let part = trace.stationary();
    let mut out = String::from("digraph system {\n  node [shape=record, style=filled];\n");
    for x in 0..sys.len() {
        let class = part.class_id(x);
        let _ = writeln!(
            out,
            "  {} [label={}, fillcolor={}];",
            quote(space.name(x)),
            quote(&format!("{}|{}", space.name(x), class)),
            quote(PALETTE[class % PALETTE.len()]),
        );
    }
    for x in 0..sys.len() {
        let _ = writeln!(
            out,
            "  {} -> {};",
            quote(space.name(x)),
            quote(space.name(sys.map().apply(x)))
        );
    }
    for (x, y) in space.covering_pairs() {
        let _ = writeln!(
            out,
            "  {} -> {} [style=dashed, arrowhead=none];",
            quote(space.name(x)),
            quote(space.name(y))
        );
    }
    out.push_str("}\n");
    out
}
