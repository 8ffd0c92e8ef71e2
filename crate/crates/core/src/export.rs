//! Graphviz and one-line renderings.

use std::fmt::Write;

use crate::graph::{CayleyGraph, Edge, Label};

/// DOT rendering of `x`. Vertices are named by their canonical paths, ports
/// appear as tail and head labels and the pointer is double-circled.
pub fn to_dot<L: Label>(x: &CayleyGraph<L>, title: &str) -> String {
    let names = x.names();
    let mut out = String::new();
    writeln!(out, "graph {} {{", quote(title)).unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    for (v, name) in names.iter().enumerate() {
        let shape = if v == 0 { ", shape=doublecircle" } else { "" };
        writeln!(
            out,
            "  {} [label={}{shape}];",
            quote(&name.to_string()),
            quote(&x.label(v).to_string())
        )
        .unwrap();
    }
    for Edge(a, b) in x.edges() {
        writeln!(
            out,
            "  {} -- {} [taillabel=\"{}\", headlabel=\"{}\"];",
            quote(&names[a.vertex].to_string()),
            quote(&names[b.vertex].to_string()),
            a.port,
            b.port
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// `step=<n> vertices=<|V|> edges=<|E|>`.
pub fn summary_line<L: Label>(step: usize, x: &CayleyGraph<L>) -> String {
    format!("step={step} vertices={} edges={}", x.vertex_count(), x.edge_count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fig4_dot() {
        let dot = to_dot(&fixtures::fig4(), "fig4");
        assert!(dot.starts_with("graph \"fig4\" {"));
        assert_eq!(dot.matches("doublecircle").count(), 1);
        assert_eq!(dot.matches(" -- ").count(), 5);
        assert!(dot.contains("taillabel=\"1\", headlabel=\"1\""));
    }
}
